//! Path-pair algebras of directed graphs with exact rational coefficients.
//!
//! Elements are finite linear combinations of monomials `α·β★` where α, β
//! are paths with a common range vertex.  Multiplication rewrites every
//! product onto the normal basis:
//!
//! * `β★·α` contracts by prefix matching (a star-path against a path
//!   annihilates unless one is a prefix of the other);
//! * a monomial whose two paths end in the *same special edge* `e` of a
//!   vertex v is expanded through `e·e★ = v − Σ_{f≠e, s(f)=v} f·f★`.
//!
//! The special edge of v is the last edge v emits in declaration order.
//! A monomial is *normal* when its paths do not both end in that edge;
//! the normal monomials are linearly independent, so normal forms decide
//! equality.  Each rewrite either shortens a monomial by two edges or
//! produces terminal monomials, which is why the loop below terminates
//! regardless of the order in which reducible terms are picked.

pub mod literal;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fdalg::FdAlgebra;
use crate::graph::{DirectedGraph, Path};
use crate::linalg::{EchelonSpan, SparseVec};
use crate::rational::{rat_one, Rat};

/// `α·β★` with `r(α) = r(β)`.  Ordered by total length, then α, then β —
/// the canonical monomial order used for spans and rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMonomial {
    pub alpha: Path,
    pub beta: Path,
}

impl PathMonomial {
    pub fn new(g: &DirectedGraph, alpha: Path, beta: Path) -> Result<Self> {
        alpha.check(g)?;
        beta.check(g)?;
        if alpha.end(g) != beta.end(g) {
            return Err(Error::input(format!(
                "monomial paths have different ranges: {} vs {}",
                alpha.display(g),
                beta.display(g)
            )));
        }
        Ok(PathMonomial { alpha, beta })
    }

    pub fn vertex(v: usize) -> Self {
        PathMonomial {
            alpha: Path::at_vertex(v),
            beta: Path::at_vertex(v),
        }
    }

    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    pub fn total_len(&self) -> usize {
        self.alpha.len() + self.beta.len()
    }

    /// Both paths end in the same designated special edge — the single
    /// reducible pattern.
    pub fn is_reducible(&self, g: &DirectedGraph) -> bool {
        match (self.alpha.edges.last(), self.beta.edges.last()) {
            (Some(&ea), Some(&eb)) if ea == eb => g.special_edge(g.edge(ea).source) == Some(ea),
            _ => false,
        }
    }

    pub fn star(&self) -> Self {
        PathMonomial {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    pub fn display(&self, g: &DirectedGraph) -> String {
        literal::render_monomial(g, self)
    }
}

impl Ord for PathMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_len()
            .cmp(&other.total_len())
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }
}

impl PartialOrd for PathMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which reducible term the rewriting loop picks next.  The normal form
/// is strategy-independent; keeping both picks lets tests assert that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteStrategy {
    FirstTerm,
    LastTerm,
}

/// An element in normal form.  The term map never stores zero
/// coefficients or reducible monomials.
#[derive(Debug, Clone)]
pub struct LpaElement {
    graph: Arc<DirectedGraph>,
    terms: BTreeMap<PathMonomial, Rat>,
}

impl PartialEq for LpaElement {
    fn eq(&self, other: &Self) -> bool {
        same_graph(&self.graph, &other.graph) && self.terms == other.terms
    }
}

impl Eq for LpaElement {}

pub fn same_graph(a: &Arc<DirectedGraph>, b: &Arc<DirectedGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LpaElement {
    pub fn zero(g: &Arc<DirectedGraph>) -> Self {
        LpaElement {
            graph: Arc::clone(g),
            terms: BTreeMap::new(),
        }
    }

    /// Sum of all vertex idempotents — the unit of the algebra of a finite
    /// graph.
    pub fn one(g: &Arc<DirectedGraph>) -> Self {
        let terms = (0..g.vertex_count())
            .map(|v| (PathMonomial::vertex(v), rat_one()))
            .collect();
        LpaElement {
            graph: Arc::clone(g),
            terms,
        }
    }

    pub fn vertex(g: &Arc<DirectedGraph>, v: usize) -> Self {
        LpaElement {
            graph: Arc::clone(g),
            terms: [(PathMonomial::vertex(v), rat_one())].into(),
        }
    }

    pub fn edge(g: &Arc<DirectedGraph>, e: usize) -> Self {
        let alpha = Path {
            start: g.edge(e).source,
            edges: vec![e],
        };
        let beta = Path::at_vertex(g.edge(e).range);
        LpaElement {
            graph: Arc::clone(g),
            terms: [(PathMonomial { alpha, beta }, rat_one())].into(),
        }
    }

    pub fn star_edge(g: &Arc<DirectedGraph>, e: usize) -> Self {
        Self::edge(g, e).star()
    }

    /// Builds and normalizes `coeff·α·β★`.
    pub fn monomial(
        g: &Arc<DirectedGraph>,
        alpha: Path,
        beta: Path,
        coeff: Rat,
    ) -> Result<Self> {
        let m = PathMonomial::new(g, alpha, beta)?;
        Ok(Self::from_raw_terms(g, vec![(m, coeff)]))
    }

    /// Normalizes an arbitrary pile of (possibly reducible) terms.
    pub fn from_raw_terms(g: &Arc<DirectedGraph>, raw: Vec<(PathMonomial, Rat)>) -> Self {
        Self::from_raw_terms_with(g, raw, RewriteStrategy::FirstTerm)
    }

    pub fn from_raw_terms_with(
        g: &Arc<DirectedGraph>,
        raw: Vec<(PathMonomial, Rat)>,
        strategy: RewriteStrategy,
    ) -> Self {
        let terms = normalize_terms(g, raw, strategy);
        LpaElement {
            graph: Arc::clone(g),
            terms,
        }
    }

    pub fn graph(&self) -> &Arc<DirectedGraph> {
        &self.graph
    }

    pub fn terms(&self) -> &BTreeMap<PathMonomial, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &PathMonomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert!(same_graph(&self.graph, &other.graph), "graph mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        LpaElement {
            graph: Arc::clone(&self.graph),
            terms,
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> Self {
        self.scaled(&-rat_one())
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.graph);
        }
        LpaElement {
            graph: Arc::clone(&self.graph),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Product in normal form; the two factors must live over the same
    /// graph.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(Error::input("cannot multiply elements over different graphs"));
        }
        let g = &self.graph;
        let mut raw = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some(m) = monomial_product(g, m1, m2) {
                    raw.push((m, c1 * c2));
                }
            }
        }
        Ok(Self::from_raw_terms(g, raw))
    }

    /// The star involution: reverses every monomial, keeps coefficients.
    pub fn star(&self) -> Self {
        LpaElement {
            graph: Arc::clone(&self.graph),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.star(), c.clone()))
                .collect(),
        }
    }

    /// Set of degrees of the terms (an element need not be homogeneous).
    pub fn degree_support(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.terms.keys().map(PathMonomial::degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// `Some(d)` when all terms sit in a single degree (zero counts as
    /// homogeneous of every degree; reported as `Some(0)` for convenience).
    pub fn homogeneous_degree(&self) -> Option<i64> {
        match self.degree_support().as_slice() {
            [] => Some(0),
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn component(&self, d: i64) -> Self {
        LpaElement {
            graph: Arc::clone(&self.graph),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn display(&self) -> String {
        literal::render_element(self)
    }
}

/// `(α1·β1★)(α2·β2★)`: nonzero only when one of β1, α2 is a prefix of the
/// other, contracting the overlap.
fn monomial_product(
    g: &DirectedGraph,
    m1: &PathMonomial,
    m2: &PathMonomial,
) -> Option<PathMonomial> {
    if let Some(gamma) = m1.beta.strip_prefix(&m2.alpha, g) {
        // α2 = β1·γ  ⇒  result (α1·γ)·β2★
        let mut alpha = m1.alpha.clone();
        alpha.edges.extend_from_slice(&gamma.edges);
        Some(PathMonomial {
            alpha,
            beta: m2.beta.clone(),
        })
    } else if let Some(gamma) = m2.alpha.strip_prefix(&m1.beta, g) {
        // β1 = α2·γ'  ⇒  result α1·(β2·γ')★
        let mut beta = m2.beta.clone();
        beta.edges.extend_from_slice(&gamma.edges);
        Some(PathMonomial {
            alpha: m1.alpha.clone(),
            beta,
        })
    } else {
        None
    }
}

fn normalize_terms(
    g: &DirectedGraph,
    raw: Vec<(PathMonomial, Rat)>,
    strategy: RewriteStrategy,
) -> BTreeMap<PathMonomial, Rat> {
    let mut pending: BTreeMap<PathMonomial, Rat> = BTreeMap::new();
    let add = |map: &mut BTreeMap<PathMonomial, Rat>, m: PathMonomial, c: Rat| {
        if c.is_zero() {
            return;
        }
        let entry = map.entry(m.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            map.remove(&m);
        }
    };
    for (m, c) in raw {
        add(&mut pending, m, c);
    }
    loop {
        let target = {
            let mut it: Box<dyn Iterator<Item = (&PathMonomial, &Rat)>> = match strategy {
                RewriteStrategy::FirstTerm => Box::new(pending.iter()),
                RewriteStrategy::LastTerm => Box::new(pending.iter().rev()),
            };
            it.find(|(m, _)| m.is_reducible(g))
                .map(|(m, c)| (m.clone(), c.clone()))
        };
        let Some((m, c)) = target else {
            return pending;
        };
        pending.remove(&m);
        let e = *m.alpha.edges.last().expect("reducible monomial has edges");
        let v = g.edge(e).source;
        let alpha_short = Path {
            start: m.alpha.start,
            edges: m.alpha.edges[..m.alpha.edges.len() - 1].to_vec(),
        };
        let beta_short = Path {
            start: m.beta.start,
            edges: m.beta.edges[..m.beta.edges.len() - 1].to_vec(),
        };
        // α'·e·e★·β'★ = α'β'★ − Σ_{f≠e, s(f)=v} α'f·(β'f)★
        add(
            &mut pending,
            PathMonomial {
                alpha: alpha_short.clone(),
                beta: beta_short.clone(),
            },
            c.clone(),
        );
        for f in g.edges_from(v) {
            if f == e {
                continue;
            }
            let mut alpha = alpha_short.clone();
            alpha.edges.push(f);
            let mut beta = beta_short.clone();
            beta.edges.push(f);
            add(&mut pending, PathMonomial { alpha, beta }, -c.clone());
        }
    }
}

/// Normal monomials spanning the degree-`d` component, restricted to total
/// length ≤ `max_len`, in canonical order.
pub fn graded_spanning_set(g: &DirectedGraph, d: i64, max_len: usize) -> Vec<PathMonomial> {
    let mut out = Vec::new();
    let ad = d.unsigned_abs() as usize;
    if ad > max_len {
        return out;
    }
    let max_path = (max_len + ad) / 2;
    let paths = g.enumerate_paths(max_path);
    let mut total = ad;
    while total <= max_len {
        let a = (total + ad) / 2;
        let b = total - a;
        let (la, lb) = if d >= 0 { (a, b) } else { (b, a) };
        for alpha in &paths[la] {
            for beta in &paths[lb] {
                if alpha.end(g) != beta.end(g) {
                    continue;
                }
                let m = PathMonomial {
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                };
                if !m.is_reducible(g) {
                    out.push(m);
                }
            }
        }
        total += 2;
    }
    out
}

/// Bounded view of the graded components of a graph's algebra.
///
/// For acyclic graphs the bounds are raised to cover every path, the
/// spanning sets are full bases, and `exact` is set; on a graph with a
/// cycle the sets are honest truncations and `exact` stays false.
#[derive(Debug, Clone)]
pub struct GradedSlice {
    pub graph: Arc<DirectedGraph>,
    pub degree_bound: usize,
    pub length_bound: usize,
    pub exact: bool,
    by_degree: BTreeMap<i64, Vec<PathMonomial>>,
}

pub const DEFAULT_DEGREE_BOUND: usize = 4;
pub const DEFAULT_LENGTH_BOUND: usize = 8;

impl GradedSlice {
    pub fn build(g: &Arc<DirectedGraph>, degree_bound: usize, length_bound: usize) -> Self {
        let (degree_bound, length_bound, exact) = match g.longest_path_len() {
            Some(p) => (degree_bound.max(p), length_bound.max(2 * p), true),
            None => (degree_bound, length_bound, false),
        };
        let mut by_degree = BTreeMap::new();
        for d in -(degree_bound as i64)..=(degree_bound as i64) {
            by_degree.insert(d, graded_spanning_set(g, d, length_bound));
        }
        GradedSlice {
            graph: Arc::clone(g),
            degree_bound,
            length_bound,
            exact,
            by_degree,
        }
    }

    /// Spanning monomials of degree `d`; empty past the degree bound
    /// (genuinely zero there when `exact`).
    pub fn monomials(&self, d: i64) -> &[PathMonomial] {
        self.by_degree.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, d: i64) -> usize {
        self.monomials(d).len()
    }

    pub fn elements(&self, d: i64) -> Vec<LpaElement> {
        self.monomials(d)
            .iter()
            .map(|m| LpaElement {
                graph: Arc::clone(&self.graph),
                terms: [(m.clone(), rat_one())].into(),
            })
            .collect()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }
}

/// Echelonized span of algebra elements, keyed by normal monomials.  The
/// stored basis is the unique reduced one, so two spans over the same
/// graph are equal iff their bases are.
#[derive(Debug, Clone)]
pub struct ElementSpan {
    graph: Arc<DirectedGraph>,
    span: EchelonSpan<PathMonomial>,
}

impl ElementSpan {
    pub fn new(g: &Arc<DirectedGraph>) -> Self {
        ElementSpan {
            graph: Arc::clone(g),
            span: EchelonSpan::new(),
        }
    }

    pub fn new_tracked(g: &Arc<DirectedGraph>) -> Self {
        ElementSpan {
            graph: Arc::clone(g),
            span: EchelonSpan::new_tracked(),
        }
    }

    pub fn insert(&mut self, e: &LpaElement) -> bool {
        debug_assert!(same_graph(&self.graph, &e.graph));
        self.span.insert(e.terms.clone())
    }

    pub fn contains(&self, e: &LpaElement) -> bool {
        self.span.contains(&e.terms)
    }

    /// Coefficients over the *inserted* elements that reproduce `e`.
    pub fn express(&self, e: &LpaElement) -> Option<SparseVec<usize>> {
        self.span.express(&e.terms)
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn same_span(&self, other: &ElementSpan) -> bool {
        self.span.same_span(&other.span)
    }

    pub fn contains_span(&self, other: &ElementSpan) -> bool {
        other.basis_elements().iter().all(|e| self.contains(e))
    }

    pub fn basis_elements(&self) -> Vec<LpaElement> {
        self.span
            .rows()
            .iter()
            .map(|r| LpaElement {
                graph: Arc::clone(&self.graph),
                terms: r.clone(),
            })
            .collect()
    }
}

/// The degree-0 component as a finite-dimensional algebra on the normal
/// monomial basis.  Only meaningful — and only permitted — when the slice
/// is exact.
pub fn degree_zero_algebra(slice: &GradedSlice) -> Result<(FdAlgebra, Vec<PathMonomial>)> {
    if !slice.exact {
        return Err(Error::Precondition(
            "degree-zero algebra requires an exact slice (acyclic graph)".into(),
        ));
    }
    let basis = slice.monomials(0).to_vec();
    let index: BTreeMap<&PathMonomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let g = &slice.graph;
    let dim = basis.len();
    let coords = |e: &LpaElement| -> Result<Vec<Rat>> {
        let mut v = vec![Rat::zero(); dim];
        for (m, c) in &e.terms {
            let i = index.get(m).ok_or_else(|| {
                Error::internal(format!(
                    "degree-zero product leaves the basis at {}",
                    m.display(g)
                ))
            })?;
            v[*i] = c.clone();
        }
        Ok(v)
    };
    let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let raw = monomial_product(g, a, b)
                .map(|m| vec![(m, rat_one())])
                .unwrap_or_default();
            let prod = LpaElement::from_raw_terms(g, raw);
            table[i][j] = coords(&prod)?;
        }
    }
    let unit = coords(&LpaElement::one(g))?;
    Ok((FdAlgebra::new(dim, table, Some(unit))?, basis))
}
