//! Finite-dimensional bimodule pairing systems.
//!
//! A system is a coefficient algebra R together with two R-bimodules P
//! and Q and a balanced pairing ψ: P ⊗ Q → R.  Everything downstream —
//! tensor powers, rank-one operator spans, the finite-rank conditions,
//! covariant representations — works with explicit bases and exact
//! rational coordinates, so every verdict is a checkable linear-algebra
//! fact.

pub mod rep;
pub mod tensor;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fdalg::{FdAlgebra, IdealSide};
use crate::graph::DirectedGraph;
use crate::linalg::{kernel, span_intersection, EchelonSpan, Matrix, SparseVec};
use crate::rational::{format_rat, parse_rat, rat_one, Rat};

/// Default cap on the dimension of a balanced tensor power before the
/// construction refuses with a resource error.
pub const DEFAULT_TENSOR_CAP: usize = 512;

/// An R-bimodule on a finite basis: `left[r][m]` is the action of ring
/// basis element r on module basis element m, `right[m][r]` the action on
/// the other side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FdBimodule {
    pub dim: usize,
    pub left: Vec<Vec<Vec<Rat>>>,
    pub right: Vec<Vec<Vec<Rat>>>,
}

impl FdBimodule {
    pub fn zero_module(ring_dim: usize) -> Self {
        FdBimodule {
            dim: 0,
            left: vec![vec![]; ring_dim],
            right: vec![],
        }
    }

    /// The ring itself as a bimodule over itself.
    pub fn regular(alg: &FdAlgebra) -> Self {
        let left = (0..alg.dim)
            .map(|r| (0..alg.dim).map(|m| alg.basis_product(r, m).to_vec()).collect())
            .collect();
        let right = (0..alg.dim)
            .map(|m| (0..alg.dim).map(|r| alg.basis_product(m, r).to_vec()).collect())
            .collect();
        FdBimodule {
            dim: alg.dim,
            left,
            right,
        }
    }

    pub fn zero_vec(&self) -> Vec<Rat> {
        vec![Rat::zero(); self.dim]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Rat> {
        let mut v = self.zero_vec();
        v[i] = rat_one();
        v
    }

    pub fn act_left(&self, r: &[Rat], m: &[Rat]) -> Vec<Rat> {
        let mut out = self.zero_vec();
        for (i, ri) in r.iter().enumerate() {
            if ri.is_zero() {
                continue;
            }
            for (j, mj) in m.iter().enumerate() {
                if mj.is_zero() {
                    continue;
                }
                let c = ri * mj;
                for (k, v) in self.left[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += v * &c;
                    }
                }
            }
        }
        out
    }

    pub fn act_right(&self, m: &[Rat], r: &[Rat]) -> Vec<Rat> {
        let mut out = self.zero_vec();
        for (j, mj) in m.iter().enumerate() {
            if mj.is_zero() {
                continue;
            }
            for (i, ri) in r.iter().enumerate() {
                if ri.is_zero() {
                    continue;
                }
                let c = mj * ri;
                for (k, v) in self.right[j][i].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += v * &c;
                    }
                }
            }
        }
        out
    }
}

/// Display names for the three bases, used when rendering witnesses.
#[derive(Debug, Clone)]
pub struct SystemLabels {
    pub ring: Vec<String>,
    pub p: Vec<String>,
    pub q: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RSystem {
    pub ring: FdAlgebra,
    pub p: FdBimodule,
    pub q: FdBimodule,
    /// `psi[i][j]` = pairing of P basis i with Q basis j, in ring coords.
    pub psi: Vec<Vec<Vec<Rat>>>,
    pub labels: Option<SystemLabels>,
}

impl RSystem {
    pub fn pairing(&self, p: &[Rat], q: &[Rat]) -> Vec<Rat> {
        let mut out = self.ring.zero_vec();
        for (i, pi) in p.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (j, qj) in q.iter().enumerate() {
                if qj.is_zero() {
                    continue;
                }
                let c = pi * qj;
                for (k, v) in self.psi[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += v * &c;
                    }
                }
            }
        }
        out
    }

    /// The ring has a declared unit and it acts as the identity on both
    /// modules from both sides.
    pub fn is_unital(&self) -> bool {
        let Some(u) = &self.ring.unit else {
            return false;
        };
        for m in [&self.p, &self.q] {
            for i in 0..m.dim {
                let b = m.basis_vec(i);
                if m.act_left(u, &b) != b || m.act_right(&b, u) != b {
                    return false;
                }
            }
        }
        true
    }

    pub fn ring_label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l.ring[i].clone(),
            None => format!("r{}", i + 1),
        }
    }

    pub fn p_label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l.p[i].clone(),
            None => format!("p{}", i + 1),
        }
    }

    pub fn q_label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l.q[i].clone(),
            None => format!("q{}", i + 1),
        }
    }

    pub fn render_vec(&self, coords: &[Rat], label: impl Fn(usize) -> String) -> String {
        let terms: Vec<String> = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.is_one() {
                    label(i)
                } else {
                    format!("{}*{}", format_rat(c), label(i))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    pub fn render_ring_vec(&self, coords: &[Rat]) -> String {
        self.render_vec(coords, |i| self.ring_label(i))
    }

    pub fn render_p_vec(&self, coords: &[Rat]) -> String {
        self.render_vec(coords, |i| self.p_label(i))
    }

    pub fn render_q_vec(&self, coords: &[Rat]) -> String {
        self.render_vec(coords, |i| self.q_label(i))
    }
}

/// Checks the full axiom battery: algebra associativity, bimodule axioms
/// for both modules, and balance/linearity of the pairing.  Returns the
/// first violation, naming the offending basis indices; violations are
/// data for the caller, not tool failures.
pub fn validate_system(sys: &RSystem) -> std::result::Result<(), String> {
    if let Err(e) = sys.ring.validate() {
        return Err(format!("ring: {e}"));
    }
    let rd = sys.ring.dim;
    for (name, m) in [("Q", &sys.q), ("P", &sys.p)] {
        if m.left.len() != rd || m.right.len() != m.dim {
            return Err(format!("module {name}: action table shape mismatch"));
        }
        for a in 0..rd {
            for b in 0..rd {
                let ab = sys.ring.basis_product(a, b).to_vec();
                for j in 0..m.dim {
                    let bj = m.basis_vec(j);
                    // a·(b·m) = (ab)·m
                    let lhs = m.act_left(&sys.ring.basis_vec(a), &m.act_left(&sys.ring.basis_vec(b), &bj));
                    let rhs = m.act_left(&ab, &bj);
                    if lhs != rhs {
                        return Err(format!(
                            "module {name}: left action not associative at ring ({a},{b}), basis {j}"
                        ));
                    }
                    // (m·a)·b = m·(ab)
                    let lhs = m.act_right(&m.act_right(&bj, &sys.ring.basis_vec(a)), &sys.ring.basis_vec(b));
                    let rhs = m.act_right(&bj, &ab);
                    if lhs != rhs {
                        return Err(format!(
                            "module {name}: right action not associative at ring ({a},{b}), basis {j}"
                        ));
                    }
                    // (a·m)·b = a·(m·b)
                    let lhs = m.act_right(&m.act_left(&sys.ring.basis_vec(a), &bj), &sys.ring.basis_vec(b));
                    let rhs = m.act_left(&sys.ring.basis_vec(a), &m.act_right(&bj, &sys.ring.basis_vec(b)));
                    if lhs != rhs {
                        return Err(format!(
                            "module {name}: side actions do not commute at ring ({a},{b}), basis {j}"
                        ));
                    }
                }
            }
        }
        if let Some(u) = &sys.ring.unit {
            for j in 0..m.dim {
                let bj = m.basis_vec(j);
                if m.act_left(u, &bj) != bj || m.act_right(&bj, u) != bj {
                    return Err(format!("module {name}: declared unit does not fix basis {j}"));
                }
            }
        }
    }
    if sys.psi.len() != sys.p.dim || sys.psi.iter().any(|row| row.len() != sys.q.dim) {
        return Err("pairing table shape mismatch".to_string());
    }
    for r in 0..rd {
        let rv = sys.ring.basis_vec(r);
        for i in 0..sys.p.dim {
            let pi = sys.p.basis_vec(i);
            for j in 0..sys.q.dim {
                let qj = sys.q.basis_vec(j);
                // balance: ψ(p·r ⊗ q) = ψ(p ⊗ r·q)
                let lhs = sys.pairing(&sys.p.act_right(&pi, &rv), &qj);
                let rhs = sys.pairing(&pi, &sys.q.act_left(&rv, &qj));
                if lhs != rhs {
                    return Err(format!(
                        "pairing not balanced at ring {r}, P basis {i}, Q basis {j}"
                    ));
                }
                // left linearity: ψ(r·p ⊗ q) = r·ψ(p ⊗ q)
                let lhs = sys.pairing(&sys.p.act_left(&rv, &pi), &qj);
                let rhs = sys.ring.mul_vec(&rv, &sys.pairing(&pi, &qj));
                if lhs != rhs {
                    return Err(format!(
                        "pairing not left linear at ring {r}, P basis {i}, Q basis {j}"
                    ));
                }
                // right linearity: ψ(p ⊗ q·r) = ψ(p ⊗ q)·r
                let lhs = sys.pairing(&pi, &sys.q.act_right(&qj, &rv));
                let rhs = sys.ring.mul_vec(&sys.pairing(&pi, &qj), &rv);
                if lhs != rhs {
                    return Err(format!(
                        "pairing not right linear at ring {r}, P basis {i}, Q basis {j}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// The system attached to a directed graph: the coefficient ring is the
/// diagonal span of the vertices, Q has one basis vector per edge, P one
/// per reversed edge, and the pairing sends a reversed edge against the
/// same edge to its range vertex.
pub fn standard_system(g: &Arc<DirectedGraph>) -> RSystem {
    let nv = g.vertex_count();
    let ne = g.edge_count();
    let ring = FdAlgebra::diagonal(nv);
    let mut q_left = vec![vec![vec![Rat::zero(); ne]; ne]; nv];
    let mut q_right = vec![vec![vec![Rat::zero(); ne]; nv]; ne];
    let mut p_left = vec![vec![vec![Rat::zero(); ne]; ne]; nv];
    let mut p_right = vec![vec![vec![Rat::zero(); ne]; nv]; ne];
    for f in 0..ne {
        let e = g.edge(f);
        q_left[e.source][f][f] = rat_one();
        q_right[f][e.range][f] = rat_one();
        p_left[e.range][f][f] = rat_one();
        p_right[f][e.source][f] = rat_one();
    }
    let mut psi = vec![vec![vec![Rat::zero(); nv]; ne]; ne];
    for f in 0..ne {
        psi[f][f][g.edge(f).range] = rat_one();
    }
    let labels = SystemLabels {
        ring: (0..nv).map(|v| g.vertex_name(v).to_string()).collect(),
        p: (0..ne).map(|f| format!("{}*", g.edge(f).id)).collect(),
        q: (0..ne).map(|f| g.edge(f).id.clone()).collect(),
    };
    RSystem {
        ring,
        p: FdBimodule {
            dim: ne,
            left: p_left,
            right: p_right,
        },
        q: FdBimodule {
            dim: ne,
            left: q_left,
            right: q_right,
        },
        psi,
        labels: Some(labels),
    }
}

// ---------------------------------------------------------------------
// Rank-one operator spans
// ---------------------------------------------------------------------

/// The rank-one operator on Q attached to (Q basis q, P basis p):
/// x ↦ q·ψ(p ⊗ x).
pub fn theta_on_q(sys: &RSystem, q: usize, p: usize) -> Matrix {
    let mut m = Matrix::zeros(sys.q.dim, sys.q.dim);
    let qv = sys.q.basis_vec(q);
    for x in 0..sys.q.dim {
        let col = sys.q.act_right(&qv, &sys.psi[p][x]);
        for (row, v) in col.into_iter().enumerate() {
            m.set(row, x, v);
        }
    }
    m
}

/// The rank-one operator on P attached to (P basis p, Q basis q):
/// y ↦ ψ(y ⊗ q)·p.
pub fn theta_on_p(sys: &RSystem, p: usize, q: usize) -> Matrix {
    let mut m = Matrix::zeros(sys.p.dim, sys.p.dim);
    let pv = sys.p.basis_vec(p);
    for y in 0..sys.p.dim {
        let col = sys.p.act_left(&sys.psi[y][q], &pv);
        for (row, v) in col.into_iter().enumerate() {
            m.set(row, y, v);
        }
    }
    m
}

pub fn matrix_sparse(m: &Matrix) -> SparseVec<(usize, usize)> {
    let mut out: SparseVec<(usize, usize)> = BTreeMap::new();
    for r in 0..m.rows {
        for c in 0..m.cols {
            let v = m.get(r, c);
            if !v.is_zero() {
                out.insert((r, c), v.clone());
            }
        }
    }
    out
}

/// Echelonized span of rank-one generators over a module, with tracked
/// combinations so membership certificates name the generating pairs.
#[derive(Debug, Clone)]
pub struct OperatorSpan {
    pub module_dim: usize,
    /// Generator order: the pair inserted as generator k.
    pub gen_pairs: Vec<(usize, usize)>,
    pub span: EchelonSpan<(usize, usize)>,
}

impl OperatorSpan {
    pub fn contains(&self, m: &Matrix) -> bool {
        self.span.contains(&matrix_sparse(m))
    }

    /// Expresses `m` over the generating pairs.
    pub fn express(&self, m: &Matrix) -> Option<Vec<((usize, usize), Rat)>> {
        let combo = self.span.express(&matrix_sparse(m))?;
        Some(
            combo
                .into_iter()
                .map(|(g, c)| (self.gen_pairs[g], c))
                .collect(),
        )
    }
}

/// (F over Q, F over P): spans of all rank-one generators.
pub fn operator_spans(sys: &RSystem) -> (OperatorSpan, OperatorSpan) {
    let mut fq = OperatorSpan {
        module_dim: sys.q.dim,
        gen_pairs: Vec::new(),
        span: EchelonSpan::new_tracked(),
    };
    for q in 0..sys.q.dim {
        for p in 0..sys.p.dim {
            fq.gen_pairs.push((q, p));
            fq.span.insert(matrix_sparse(&theta_on_q(sys, q, p)));
        }
    }
    let mut fp = OperatorSpan {
        module_dim: sys.p.dim,
        gen_pairs: Vec::new(),
        span: EchelonSpan::new_tracked(),
    };
    for p in 0..sys.p.dim {
        for q in 0..sys.q.dim {
            fp.gen_pairs.push((p, q));
            fp.span.insert(matrix_sparse(&theta_on_p(sys, p, q)));
        }
    }
    (fq, fp)
}

/// Solves for an adjoint: given a right-module endomorphism T of Q, find
/// a left-module endomorphism S of P with ψ(p ⊗ T(q)) = ψ(S(p) ⊗ q) for
/// all basis p, q.  `None` when no adjoint exists.
pub fn adjoint_solve(sys: &RSystem, t: &Matrix) -> Result<Option<Matrix>> {
    if t.rows != sys.q.dim || t.cols != sys.q.dim {
        return Err(Error::input("operator dimensions do not match Q"));
    }
    // T must be a right-module homomorphism: T(q·r) = T(q)·r.
    for r in 0..sys.ring.dim {
        let rv = sys.ring.basis_vec(r);
        for q in 0..sys.q.dim {
            let lhs = t.mul_vec(&sys.q.act_right(&sys.q.basis_vec(q), &rv));
            let rhs = sys.q.act_right(&t.mul_vec(&sys.q.basis_vec(q)), &rv);
            if lhs != rhs {
                return Err(Error::input(format!(
                    "operator is not a right-module homomorphism (ring {r}, Q basis {q})"
                )));
            }
        }
    }
    // Unknown S as a pd×pd matrix, flattened column-major: entry (i, j)
    // of S sits at j*pd + i.
    let pd = sys.p.dim;
    let unknowns = pd * pd;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    // Left-module homomorphism: S(r·p) = r·S(p) for all r, p.
    for r in 0..sys.ring.dim {
        let rv = sys.ring.basis_vec(r);
        for j in 0..pd {
            let rp = sys.p.act_left(&rv, &sys.p.basis_vec(j));
            // Row block: S(rp) − r·S(e_j) = 0, one equation per coordinate.
            for coord in 0..pd {
                let mut row = vec![Rat::zero(); unknowns];
                for k in 0..pd {
                    // S(rp) coordinate: Σ_k rp_k S[coord][k]
                    if !rp[k].is_zero() {
                        row[k * pd + coord] += &rp[k];
                    }
                    // r·S(e_j): Σ_i S[i][j]·(r·e_i)_coord
                    let re = sys.p.act_left(&rv, &sys.p.basis_vec(k));
                    if !re[coord].is_zero() {
                        row[j * pd + k] -= &re[coord];
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                    rhs.push(Rat::zero());
                }
            }
        }
    }
    // Pairing condition: ψ(S(e_j) ⊗ e_q) = ψ(e_j ⊗ T(e_q)).
    for j in 0..pd {
        for q in 0..sys.q.dim {
            let target = sys.pairing(&sys.p.basis_vec(j), &t.mul_vec(&sys.q.basis_vec(q)));
            for coord in 0..sys.ring.dim {
                let mut row = vec![Rat::zero(); unknowns];
                for i in 0..pd {
                    let c = &sys.psi[i][q][coord];
                    if !c.is_zero() {
                        row[j * pd + i] += c;
                    }
                }
                rows.push(row);
                rhs.push(target[coord].clone());
            }
        }
    }
    let m = Matrix::from_rows(rows);
    let sol = match crate::linalg::solve_linear(&m, &rhs) {
        Some(s) => s,
        None => return Ok(None),
    };
    let mut s = Matrix::zeros(pd, pd);
    for j in 0..pd {
        for i in 0..pd {
            s.set(i, j, sol[j * pd + i].clone());
        }
    }
    Ok(Some(s))
}

/// An operator found inside a rank-one span: the combination over
/// generating pairs plus the assembled matrix.
#[derive(Debug, Clone)]
pub struct OperatorWitness {
    pub combo: Vec<((usize, usize), Rat)>,
    pub matrix: Matrix,
}

fn solve_fixing(
    gens: &[((usize, usize), Matrix)],
    dim: usize,
    samples: &[Vec<Rat>],
) -> Option<OperatorWitness> {
    if samples.is_empty() {
        return Some(OperatorWitness {
            combo: Vec::new(),
            matrix: Matrix::zeros(dim, dim),
        });
    }
    // Find Θ = Σ c_g G_g with Θ(s_i) = s_i: track the stacked images.
    let mut span: EchelonSpan<(usize, usize)> = EchelonSpan::new_tracked();
    for (_, g) in gens {
        let mut stacked: SparseVec<(usize, usize)> = BTreeMap::new();
        for (si, s) in samples.iter().enumerate() {
            for (row, v) in g.mul_vec(s).into_iter().enumerate() {
                if !v.is_zero() {
                    stacked.insert((si, row), v);
                }
            }
        }
        span.insert(stacked);
    }
    let mut target: SparseVec<(usize, usize)> = BTreeMap::new();
    for (si, s) in samples.iter().enumerate() {
        for (row, v) in s.iter().enumerate() {
            if !v.is_zero() {
                target.insert((si, row), v.clone());
            }
        }
    }
    let combo = span.express(&target)?;
    let mut matrix = Matrix::zeros(dim, dim);
    let mut pairs = Vec::new();
    for (g, c) in combo {
        matrix = matrix.plus(&gens[g].1.scaled(&c));
        pairs.push((gens[g].0, c));
    }
    Some(OperatorWitness {
        combo: pairs,
        matrix,
    })
}

/// Finite-set fixing condition: find Θ in the Q-side span fixing every
/// given Q element and Φ in the P-side span fixing every given P element.
pub fn condition_fs(
    sys: &RSystem,
    qs: &[Vec<Rat>],
    ps: &[Vec<Rat>],
) -> Option<(OperatorWitness, OperatorWitness)> {
    let mut q_gens = Vec::new();
    for q in 0..sys.q.dim {
        for p in 0..sys.p.dim {
            q_gens.push(((q, p), theta_on_q(sys, q, p)));
        }
    }
    let mut p_gens = Vec::new();
    for p in 0..sys.p.dim {
        for q in 0..sys.q.dim {
            p_gens.push(((p, q), theta_on_p(sys, p, q)));
        }
    }
    let theta = solve_fixing(&q_gens, sys.q.dim, qs)?;
    let phi = solve_fixing(&p_gens, sys.p.dim, ps)?;
    Some((theta, phi))
}

#[derive(Debug, Clone)]
pub struct FsPrimeReport {
    pub holds: bool,
    pub unital: bool,
    pub id_on_q: Option<OperatorWitness>,
    pub id_on_p: Option<OperatorWitness>,
}

/// Decides whether both identity operators are finite-rank, by two
/// routes that must agree: direct membership of the identity matrices in
/// the operator spans, and feasibility of the finite-set condition on the
/// full bases (finite generation is automatic at finite dimension).
pub fn condition_fs_prime(sys: &RSystem) -> Result<FsPrimeReport> {
    let (fq, fp) = operator_spans(sys);
    let id_q = Matrix::identity(sys.q.dim);
    let id_p = Matrix::identity(sys.p.dim);
    let id_on_q = fq.express(&id_q).map(|combo| OperatorWitness {
        combo,
        matrix: id_q.clone(),
    });
    let id_on_p = fp.express(&id_p).map(|combo| OperatorWitness {
        combo,
        matrix: id_p.clone(),
    });
    let route1 = id_on_q.is_some() && id_on_p.is_some();

    let q_basis: Vec<Vec<Rat>> = (0..sys.q.dim).map(|i| sys.q.basis_vec(i)).collect();
    let p_basis: Vec<Vec<Rat>> = (0..sys.p.dim).map(|i| sys.p.basis_vec(i)).collect();
    let route2 = condition_fs(sys, &q_basis, &p_basis).is_some();
    if route1 != route2 {
        return Err(Error::internal(format!(
            "finite-rank identity routes disagree: membership {route1}, basis fixing {route2}"
        )));
    }
    Ok(FsPrimeReport {
        holds: route1,
        unital: sys.is_unital(),
        id_on_q,
        id_on_p,
    })
}

#[derive(Debug, Clone)]
pub struct DeltaGamma {
    /// Left multiplication on Q, one matrix per ring basis element.
    pub delta: Vec<Matrix>,
    /// Right multiplication on P, one matrix per ring basis element.
    pub gamma: Vec<Matrix>,
    pub ker_delta: Vec<Vec<Rat>>,
}

impl DeltaGamma {
    pub fn delta_of(&self, r: &[Rat]) -> Matrix {
        let mut m = Matrix::zeros(self.delta[0].rows, self.delta[0].cols);
        for (i, c) in r.iter().enumerate() {
            if !c.is_zero() {
                m = m.plus(&self.delta[i].scaled(c));
            }
        }
        m
    }

    pub fn gamma_of(&self, r: &[Rat]) -> Matrix {
        let mut m = Matrix::zeros(self.gamma[0].rows, self.gamma[0].cols);
        for (i, c) in r.iter().enumerate() {
            if !c.is_zero() {
                m = m.plus(&self.gamma[i].scaled(c));
            }
        }
        m
    }
}

pub fn delta_gamma(sys: &RSystem) -> DeltaGamma {
    let delta: Vec<Matrix> = (0..sys.ring.dim)
        .map(|r| {
            let rv = sys.ring.basis_vec(r);
            let mut m = Matrix::zeros(sys.q.dim, sys.q.dim);
            for j in 0..sys.q.dim {
                for (row, v) in sys.q.act_left(&rv, &sys.q.basis_vec(j)).into_iter().enumerate() {
                    m.set(row, j, v);
                }
            }
            m
        })
        .collect();
    let gamma: Vec<Matrix> = (0..sys.ring.dim)
        .map(|r| {
            let rv = sys.ring.basis_vec(r);
            let mut m = Matrix::zeros(sys.p.dim, sys.p.dim);
            for j in 0..sys.p.dim {
                for (row, v) in sys.p.act_right(&sys.p.basis_vec(j), &rv).into_iter().enumerate() {
                    m.set(row, j, v);
                }
            }
            m
        })
        .collect();
    // ker Δ: ring vectors acting as zero on Q.
    let qd = sys.q.dim;
    let mut flat = Matrix::zeros(qd * qd, sys.ring.dim);
    for (r, d) in delta.iter().enumerate() {
        for i in 0..qd {
            for j in 0..qd {
                flat.set(i * qd + j, r, d.get(i, j).clone());
            }
        }
    }
    let ker_delta = kernel(&flat);
    DeltaGamma {
        delta,
        gamma,
        ker_delta,
    }
}

#[derive(Debug, Clone)]
pub struct IdealReport {
    pub psi_compatible: bool,
    /// Per ideal-basis witness: how left multiplication by that element
    /// decomposes over the rank-one generators (None where it does not).
    pub delta_witnesses: Vec<Option<Vec<((usize, usize), Rat)>>>,
    pub faithful: bool,
}

/// Checks a supplied ideal for pairing compatibility (left multiplication
/// lands in the rank-one span) and faithfulness (trivial intersection
/// with the kernel of the Q action).  Maximality among such ideals is not
/// decided here.
pub fn ideal_checks(sys: &RSystem, j: &[Vec<Rat>]) -> Result<IdealReport> {
    // Verify J really is a two-sided ideal.
    let closure = sys.ring.ideal_closure(j, IdealSide::TwoSided);
    let mut given: EchelonSpan<usize> = EchelonSpan::new();
    for v in j {
        given.insert(crate::linalg::sparse_from_dense(v));
    }
    if !given.same_span(&closure) {
        return Err(Error::input(
            "supplied generators do not span a two-sided ideal",
        ));
    }
    let (fq, _) = operator_spans(sys);
    let dg = delta_gamma(sys);
    let mut witnesses = Vec::new();
    let mut compatible = true;
    for x in j {
        let w = fq.express(&dg.delta_of(x));
        if w.is_none() {
            compatible = false;
        }
        witnesses.push(w);
    }
    let mut ker_span: EchelonSpan<usize> = EchelonSpan::new();
    for v in &dg.ker_delta {
        ker_span.insert(crate::linalg::sparse_from_dense(v));
    }
    let mut j_span: EchelonSpan<usize> = EchelonSpan::new();
    for v in j {
        j_span.insert(crate::linalg::sparse_from_dense(v));
    }
    let faithful = span_intersection(&ker_span, &j_span).dim() == 0;
    Ok(IdealReport {
        psi_compatible: compatible,
        delta_witnesses: witnesses,
        faithful,
    })
}

#[derive(Debug, Clone)]
pub enum SufficiencyVerdict {
    /// Both hypotheses verified: the unit decomposes over the ideal
    /// basis, and the pairing image spans the whole ring.
    CertifiedYes {
        unit_over_ideal: Vec<(usize, Rat)>,
        image_dim: usize,
    },
    /// The criterion is sufficient, not necessary, so a miss is an open
    /// verdict with the list of failed hypotheses.
    HypothesesNotMet(Vec<String>),
}

/// Sufficient criterion for the represented ring to be strongly graded:
/// the system is unital, the identity operators are finite-rank, the
/// ring unit lies in the supplied ideal, and the pairing is surjective.
pub fn strong_sufficiency(sys: &RSystem, j: &[Vec<Rat>]) -> Result<SufficiencyVerdict> {
    if !sys.is_unital() {
        return Err(Error::Precondition(
            "strong-sufficiency check requires a unital system".into(),
        ));
    }
    let fs = condition_fs_prime(sys)?;
    if !fs.holds {
        return Err(Error::Precondition(
            "strong-sufficiency check requires finite-rank identity operators".into(),
        ));
    }
    let mut missing = Vec::new();
    let mut jspan: EchelonSpan<usize> = EchelonSpan::new_tracked();
    for v in j {
        jspan.insert(crate::linalg::sparse_from_dense(v));
    }
    let unit = sys.ring.unit.clone().expect("unital checked above");
    let unit_combo = jspan.express(&crate::linalg::sparse_from_dense(&unit));
    if unit_combo.is_none() {
        missing.push("ring unit is not in the supplied ideal".to_string());
    }
    let mut image: EchelonSpan<usize> = EchelonSpan::new();
    for i in 0..sys.p.dim {
        for jx in 0..sys.q.dim {
            image.insert(crate::linalg::sparse_from_dense(&sys.psi[i][jx]));
        }
    }
    let image_dim = image.dim();
    if image_dim != sys.ring.dim {
        missing.push(format!(
            "pairing image has dimension {image_dim} < ring dimension {}",
            sys.ring.dim
        ));
    }
    if missing.is_empty() {
        Ok(SufficiencyVerdict::CertifiedYes {
            unit_over_ideal: unit_combo.expect("checked").into_iter().collect(),
            image_dim,
        })
    } else {
        Ok(SufficiencyVerdict::HypothesesNotMet(missing))
    }
}

/// Pairs (p̂, q̂) of degree-n tensors whose pairings sum to the ring unit.
#[derive(Debug, Clone)]
pub struct WitnessPairs {
    pub n: usize,
    pub pairs: Vec<(Vec<Rat>, Vec<Rat>)>,
}

/// When the pairing is surjective, builds unit witnesses for the n-fold
/// tensor pairing by squaring up the degree-one witness through the
/// recursion; every returned witness is re-verified exactly.
pub fn surjectivity_witnesses(sys: &RSystem, n: usize, cap: usize) -> Result<Option<WitnessPairs>> {
    if !sys.is_unital() {
        return Err(Error::Precondition(
            "surjectivity witnesses require a unital system".into(),
        ));
    }
    let unit = sys.ring.unit.clone().expect("unital");
    if n == 0 {
        return Ok(Some(WitnessPairs {
            n: 0,
            pairs: vec![(unit.clone(), unit)],
        }));
    }
    // Degree 1: express the unit over the pairing values.
    let mut span: EchelonSpan<usize> = EchelonSpan::new_tracked();
    let mut pair_order = Vec::new();
    for i in 0..sys.p.dim {
        for j in 0..sys.q.dim {
            pair_order.push((i, j));
            span.insert(crate::linalg::sparse_from_dense(&sys.psi[i][j]));
        }
    }
    let Some(combo) = span.express(&crate::linalg::sparse_from_dense(&unit)) else {
        return Ok(None);
    };
    let w1: Vec<(Vec<Rat>, Vec<Rat>)> = combo
        .into_iter()
        .map(|(g, c)| {
            let (i, j) = pair_order[g];
            let mut p = sys.p.basis_vec(i);
            for v in p.iter_mut() {
                *v *= &c;
            }
            (p, sys.q.basis_vec(j))
        })
        .collect();
    let mut level = w1.clone();
    for m in 2..=n {
        let power = tensor::tensor_power(sys, m, cap)?;
        let p_embed = power.p_embed.as_ref().expect("power ≥ 2 has embeddings");
        let q_embed = power.q_embed.as_ref().expect("power ≥ 2 has embeddings");
        let mut next = Vec::new();
        for (p1, q1) in &w1 {
            for (pp, qq) in &level {
                let p = p_embed.project_pair(p1, pp);
                let q = q_embed.project_pair(qq, q1);
                if p.iter().all(Rat::is_zero) || q.iter().all(Rat::is_zero) {
                    continue;
                }
                next.push((p, q));
            }
        }
        level = next;
    }
    // Re-verify: the pairings sum to the unit.
    let verify_sys = if n == 1 {
        None
    } else {
        Some(tensor::tensor_power(sys, n, cap)?)
    };
    let mut total = sys.ring.zero_vec();
    for (p, q) in &level {
        let val = match &verify_sys {
            None => sys.pairing(p, q),
            Some(pw) => pw.system.pairing(p, q),
        };
        for (k, v) in val.into_iter().enumerate() {
            total[k] += v;
        }
    }
    if total != unit {
        return Err(Error::internal(format!(
            "unit witness for tensor degree {n} failed re-verification"
        )));
    }
    Ok(Some(WitnessPairs { n, pairs: level }))
}

// ---------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------

fn parse_coords(line_no: usize, toks: &[&str], dim: usize, what: &str) -> Result<Vec<Rat>> {
    if toks.len() != dim {
        return Err(Error::parse(
            line_no,
            format!("{what} expects {dim} coefficients, got {}", toks.len()),
        ));
    }
    toks.iter().map(|t| parse_rat(t)).collect()
}

fn parse_index(line_no: usize, tok: &str, dim: usize, what: &str) -> Result<usize> {
    let i: usize = tok
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad {what} index `{tok}`")))?;
    if i == 0 || i > dim {
        return Err(Error::parse(
            line_no,
            format!("{what} index {i} out of range 1..={dim}"),
        ));
    }
    Ok(i - 1)
}

/// Parses the line-oriented system format.  Lines:
///
/// ```text
/// ring dim <n>
/// ring unit <c1> ... <cn>        (or `ring unit none`)
/// mul <i> <j> : <c1> ... <cn>
/// mod Q dim <m>
/// Qleft <r> <q> : <c1> ... <cm>
/// Qright <q> <r> : <c1> ... <cm>
/// mod P dim <k>
/// Pleft <r> <p> : <c1> ... <ck>
/// Pright <p> <r> : <c1> ... <ck>
/// psi <p> <q> : <c1> ... <cn>
/// ```
///
/// Indices are 1-based; any product or action line left out is zero;
/// `#` starts a comment.
pub fn parse_system(text: &str) -> Result<RSystem> {
    let mut ring_dim: Option<usize> = None;
    let mut unit: Option<Option<Vec<Rat>>> = None;
    let mut table: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut q_dim: Option<usize> = None;
    let mut p_dim: Option<usize> = None;
    let mut q_left: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut q_right: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut p_left: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut p_right: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut psi: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut seen: std::collections::BTreeSet<(u8, usize, usize)> = std::collections::BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (head, tail) = match line.split_once(':') {
            Some((h, t)) => (h.trim(), Some(t.trim())),
            None => (line, None),
        };
        let toks: Vec<&str> = head.split_whitespace().collect();
        let coef_toks: Vec<&str> = tail.map(|t| t.split_whitespace().collect()).unwrap_or_default();
        match toks.as_slice() {
            ["ring", "dim", n] => {
                if ring_dim.is_some() {
                    return Err(Error::parse(line_no, "ring dimension declared twice"));
                }
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::parse(line_no, "bad ring dimension"))?;
                ring_dim = Some(n);
                table = vec![vec![vec![Rat::zero(); n]; n]; n];
            }
            ["ring", "unit", rest @ ..] => {
                let n = ring_dim.ok_or_else(|| Error::parse(line_no, "ring dim must come first"))?;
                if unit.is_some() {
                    return Err(Error::parse(line_no, "ring unit declared twice"));
                }
                if rest == ["none"] {
                    unit = Some(None);
                } else {
                    unit = Some(Some(parse_coords(line_no, rest, n, "ring unit")?));
                }
            }
            ["mul", i, j] => {
                let n = ring_dim.ok_or_else(|| Error::parse(line_no, "ring dim must come first"))?;
                let i = parse_index(line_no, i, n, "ring")?;
                let j = parse_index(line_no, j, n, "ring")?;
                if !seen.insert((0, i, j)) {
                    return Err(Error::parse(line_no, format!("duplicate mul {} {}", i + 1, j + 1)));
                }
                table[i][j] = parse_coords(line_no, &coef_toks, n, "mul")?;
            }
            ["mod", "Q", "dim", m] => {
                if q_dim.is_some() {
                    return Err(Error::parse(line_no, "module Q declared twice"));
                }
                let n = ring_dim.ok_or_else(|| Error::parse(line_no, "ring dim must come first"))?;
                let m: usize = m
                    .parse()
                    .map_err(|_| Error::parse(line_no, "bad module dimension"))?;
                q_dim = Some(m);
                q_left = vec![vec![vec![Rat::zero(); m]; m]; n];
                q_right = vec![vec![vec![Rat::zero(); m]; n]; m];
            }
            ["mod", "P", "dim", k] => {
                if p_dim.is_some() {
                    return Err(Error::parse(line_no, "module P declared twice"));
                }
                let n = ring_dim.ok_or_else(|| Error::parse(line_no, "ring dim must come first"))?;
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::parse(line_no, "bad module dimension"))?;
                p_dim = Some(k);
                p_left = vec![vec![vec![Rat::zero(); k]; k]; n];
                p_right = vec![vec![vec![Rat::zero(); k]; n]; k];
            }
            ["Qleft", r, q] => {
                let n = ring_dim.ok_or_else(|| Error::parse(line_no, "ring dim must come first"))?;
                let m = q_dim.ok_or_else(|| Error::parse(line_no, "mod Q dim must come first"))?;
                let r = parse_index(line_no, r, n, "ring")?;
                let q = parse_index(line_no, q, m, "Q")?;
                if !seen.insert((1, r, q)) {
                    return Err(Error::parse(line_no, "duplicate Qleft entry"));
                }
                q_left[r][q] = parse_coords(line_no, &coef_toks, m, "Qleft")?;
            }
            ["Qright", q, r] => {
                let n = ring_dim.ok_or_else(|| Error::parse(line_no, "ring dim must come first"))?;
                let m = q_dim.ok_or_else(|| Error::parse(line_no, "mod Q dim must come first"))?;
                let q = parse_index(line_no, q, m, "Q")?;
                let r = parse_index(line_no, r, n, "ring")?;
                if !seen.insert((2, q, r)) {
                    return Err(Error::parse(line_no, "duplicate Qright entry"));
                }
                q_right[q][r] = parse_coords(line_no, &coef_toks, m, "Qright")?;
            }
            ["Pleft", r, p] => {
                let n = ring_dim.ok_or_else(|| Error::parse(line_no, "ring dim must come first"))?;
                let k = p_dim.ok_or_else(|| Error::parse(line_no, "mod P dim must come first"))?;
                let r = parse_index(line_no, r, n, "ring")?;
                let p = parse_index(line_no, p, k, "P")?;
                if !seen.insert((3, r, p)) {
                    return Err(Error::parse(line_no, "duplicate Pleft entry"));
                }
                p_left[r][p] = parse_coords(line_no, &coef_toks, k, "Pleft")?;
            }
            ["Pright", p, r] => {
                let n = ring_dim.ok_or_else(|| Error::parse(line_no, "ring dim must come first"))?;
                let k = p_dim.ok_or_else(|| Error::parse(line_no, "mod P dim must come first"))?;
                let p = parse_index(line_no, p, k, "P")?;
                let r = parse_index(line_no, r, n, "ring")?;
                if !seen.insert((4, p, r)) {
                    return Err(Error::parse(line_no, "duplicate Pright entry"));
                }
                p_right[p][r] = parse_coords(line_no, &coef_toks, k, "Pright")?;
            }
            ["psi", p, q] => {
                let n = ring_dim.ok_or_else(|| Error::parse(line_no, "ring dim must come first"))?;
                let k = p_dim.ok_or_else(|| Error::parse(line_no, "mod P dim must come first"))?;
                let m = q_dim.ok_or_else(|| Error::parse(line_no, "mod Q dim must come first"))?;
                if psi.is_empty() {
                    psi = vec![vec![vec![Rat::zero(); n]; m]; k];
                }
                let p = parse_index(line_no, p, k, "P")?;
                let q = parse_index(line_no, q, m, "Q")?;
                if !seen.insert((5, p, q)) {
                    return Err(Error::parse(line_no, "duplicate psi entry"));
                }
                psi[p][q] = parse_coords(line_no, &coef_toks, n, "psi")?;
            }
            _ => {
                return Err(Error::parse(line_no, format!("unrecognized directive `{head}`")));
            }
        }
    }

    let n = ring_dim.ok_or_else(|| Error::parse(0, "missing `ring dim`"))?;
    let m = q_dim.ok_or_else(|| Error::parse(0, "missing `mod Q dim`"))?;
    let k = p_dim.ok_or_else(|| Error::parse(0, "missing `mod P dim`"))?;
    if psi.is_empty() {
        psi = vec![vec![vec![Rat::zero(); n]; m]; k];
    }
    let ring = FdAlgebra::new(n, table, unit.flatten())?;
    Ok(RSystem {
        ring,
        p: FdBimodule {
            dim: k,
            left: p_left,
            right: p_right,
        },
        q: FdBimodule {
            dim: m,
            left: q_left,
            right: q_right,
        },
        psi,
        labels: None,
    })
}

/// Writes a system back out in the format accepted by [`parse_system`];
/// zero rows are omitted.
pub fn serialize_system(sys: &RSystem) -> String {
    let mut out = String::new();
    let n = sys.ring.dim;
    out.push_str(&format!("ring dim {n}\n"));
    match &sys.ring.unit {
        Some(u) => {
            let coords: Vec<String> = u.iter().map(format_rat).collect();
            out.push_str(&format!("ring unit {}\n", coords.join(" ")));
        }
        None => out.push_str("ring unit none\n"),
    }
    let fmt = |v: &[Rat]| -> String {
        v.iter().map(format_rat).collect::<Vec<_>>().join(" ")
    };
    for i in 0..n {
        for j in 0..n {
            let prod = sys.ring.basis_product(i, j);
            if prod.iter().any(|c| !c.is_zero()) {
                out.push_str(&format!("mul {} {} : {}\n", i + 1, j + 1, fmt(prod)));
            }
        }
    }
    out.push_str(&format!("mod Q dim {}\n", sys.q.dim));
    for r in 0..n {
        for q in 0..sys.q.dim {
            let v = &sys.q.left[r][q];
            if v.iter().any(|c| !c.is_zero()) {
                out.push_str(&format!("Qleft {} {} : {}\n", r + 1, q + 1, fmt(v)));
            }
        }
    }
    for q in 0..sys.q.dim {
        for r in 0..n {
            let v = &sys.q.right[q][r];
            if v.iter().any(|c| !c.is_zero()) {
                out.push_str(&format!("Qright {} {} : {}\n", q + 1, r + 1, fmt(v)));
            }
        }
    }
    out.push_str(&format!("mod P dim {}\n", sys.p.dim));
    for r in 0..n {
        for p in 0..sys.p.dim {
            let v = &sys.p.left[r][p];
            if v.iter().any(|c| !c.is_zero()) {
                out.push_str(&format!("Pleft {} {} : {}\n", r + 1, p + 1, fmt(v)));
            }
        }
    }
    for p in 0..sys.p.dim {
        for r in 0..n {
            let v = &sys.p.right[p][r];
            if v.iter().any(|c| !c.is_zero()) {
                out.push_str(&format!("Pright {} {} : {}\n", p + 1, r + 1, fmt(v)));
            }
        }
    }
    for p in 0..sys.p.dim {
        for q in 0..sys.q.dim {
            let v = &sys.psi[p][q];
            if v.iter().any(|c| !c.is_zero()) {
                out.push_str(&format!("psi {} {} : {}\n", p + 1, q + 1, fmt(v)));
            }
        }
    }
    out
}
