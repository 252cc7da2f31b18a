//! Covariant representations of a pairing system inside a graph algebra.
//!
//! A representation is three linear maps — σ on the coefficient ring,
//! T on Q, S on P — with images in the normal-form algebra of a graph.
//! The induced homomorphism π on the Q-side operator span sends a
//! rank-one generator for the pair (q, p) to T(q)·S(p); its P-side
//! companion χ reverses products.

use std::sync::Arc;

use num_traits::Zero;

use super::{
    condition_fs_prime, delta_gamma, operator_spans, tensor::tensor_power, theta_on_p, theta_on_q,
    OperatorSpan, RSystem,
};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::linalg::{kernel, Matrix};
use crate::lpa::{ElementSpan, GradedSlice, LpaElement};
use crate::rational::Rat;

/// A covariant representation given by its values on the three bases.
#[derive(Debug, Clone)]
pub struct CovariantRep {
    pub graph: Arc<DirectedGraph>,
    pub sigma: Vec<LpaElement>,
    pub t_map: Vec<LpaElement>,
    pub s_map: Vec<LpaElement>,
}

impl CovariantRep {
    fn apply(&self, images: &[LpaElement], coords: &[Rat]) -> LpaElement {
        let mut out = LpaElement::zero(&self.graph);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.plus(&images[i].scaled(c));
            }
        }
        out
    }

    pub fn apply_sigma(&self, r: &[Rat]) -> LpaElement {
        self.apply(&self.sigma, r)
    }

    pub fn apply_t(&self, q: &[Rat]) -> LpaElement {
        self.apply(&self.t_map, q)
    }

    pub fn apply_s(&self, p: &[Rat]) -> LpaElement {
        self.apply(&self.s_map, p)
    }
}

/// The canonical representation of the standard system of a graph:
/// vertices to vertex idempotents, edges to edges, reversed edges to
/// starred edges.
pub fn standard_rep(g: &Arc<DirectedGraph>) -> CovariantRep {
    CovariantRep {
        graph: Arc::clone(g),
        sigma: (0..g.vertex_count()).map(|v| LpaElement::vertex(g, v)).collect(),
        t_map: (0..g.edge_count()).map(|e| LpaElement::edge(g, e)).collect(),
        s_map: (0..g.edge_count()).map(|e| LpaElement::star_edge(g, e)).collect(),
    }
}

#[derive(Debug, Clone)]
pub struct RepReport {
    pub axioms_ok: bool,
    pub failures: Vec<String>,
    pub graded: bool,
    pub injective: bool,
    /// Whether the recorded spanning monomials of the graph's graded
    /// slice all lie in the span of products of images of at most
    /// `word_bound` generators.
    pub surjective_up_to_bound: bool,
    pub word_bound: usize,
    /// Defined only for unital systems with finite-rank identities;
    /// true when the identity operator maps to the image of the unit.
    pub faithful: Option<bool>,
    /// For a supplied ideal: left multiplication by each basis element
    /// maps to the image of that element.
    pub invariant_rel_j: Option<bool>,
}

fn pi_of_combo(rep: &CovariantRep, combo: &[((usize, usize), Rat)]) -> Result<LpaElement> {
    let mut out = LpaElement::zero(&rep.graph);
    for ((q, p), c) in combo {
        let prod = rep.t_map[*q].multiply(&rep.s_map[*p])?;
        out = out.plus(&prod.scaled(c));
    }
    Ok(out)
}

// χ is valued in the opposite ring, so the generator for the pair
// (p, q) lands on the reversed product T(q)·S(p) of the target.
fn chi_of_combo(rep: &CovariantRep, combo: &[((usize, usize), Rat)]) -> Result<LpaElement> {
    let mut out = LpaElement::zero(&rep.graph);
    for ((p, q), c) in combo {
        let prod = rep.t_map[*q].multiply(&rep.s_map[*p])?;
        out = out.plus(&prod.scaled(c));
    }
    Ok(out)
}

fn homogeneous_of(e: &LpaElement, d: i64) -> bool {
    e.is_zero() || e.homogeneous_degree() == Some(d)
}

/// Verifies the representation axioms on all basis tuples, plus the
/// structural flags: graded, injective (of σ), spanning up to a word
/// bound, compatibility with the identity operator, and invariance
/// relative to a supplied ideal.
pub fn validate_covariant_rep(
    sys: &RSystem,
    rep: &CovariantRep,
    j: Option<&[Vec<Rat>]>,
    word_bound: usize,
) -> Result<RepReport> {
    if rep.sigma.len() != sys.ring.dim
        || rep.t_map.len() != sys.q.dim
        || rep.s_map.len() != sys.p.dim
    {
        return Err(Error::input("representation dimensions do not match the system"));
    }
    let mut failures = Vec::new();
    // σ is multiplicative.
    for a in 0..sys.ring.dim {
        for b in 0..sys.ring.dim {
            let lhs = rep.sigma[a].multiply(&rep.sigma[b])?;
            let rhs = rep.apply_sigma(sys.ring.basis_product(a, b));
            if lhs != rhs {
                failures.push(format!("sigma not multiplicative at ring pair ({a},{b})"));
            }
        }
    }
    // Module actions intertwine with multiplication by σ images.
    for r in 0..sys.ring.dim {
        let rv = sys.ring.basis_vec(r);
        for p in 0..sys.p.dim {
            let pv = sys.p.basis_vec(p);
            if rep.s_map[p].multiply(&rep.sigma[r])? != rep.apply_s(&sys.p.act_right(&pv, &rv)) {
                failures.push(format!("S does not intertwine right action at ({p},{r})"));
            }
            if rep.sigma[r].multiply(&rep.s_map[p])? != rep.apply_s(&sys.p.act_left(&rv, &pv)) {
                failures.push(format!("S does not intertwine left action at ({r},{p})"));
            }
        }
        for q in 0..sys.q.dim {
            let qv = sys.q.basis_vec(q);
            if rep.t_map[q].multiply(&rep.sigma[r])? != rep.apply_t(&sys.q.act_right(&qv, &rv)) {
                failures.push(format!("T does not intertwine right action at ({q},{r})"));
            }
            if rep.sigma[r].multiply(&rep.t_map[q])? != rep.apply_t(&sys.q.act_left(&rv, &qv)) {
                failures.push(format!("T does not intertwine left action at ({r},{q})"));
            }
        }
    }
    // The pairing is realized by multiplication: σ(ψ(p ⊗ q)) = S(p)T(q).
    for p in 0..sys.p.dim {
        for q in 0..sys.q.dim {
            let lhs = rep.apply_sigma(&sys.psi[p][q]);
            let rhs = rep.s_map[p].multiply(&rep.t_map[q])?;
            if lhs != rhs {
                failures.push(format!("pairing axiom fails at P {p}, Q {q}"));
            }
        }
    }
    let graded = rep.sigma.iter().all(|e| homogeneous_of(e, 0))
        && rep.t_map.iter().all(|e| homogeneous_of(e, 1))
        && rep.s_map.iter().all(|e| homogeneous_of(e, -1));
    let mut sigma_span = ElementSpan::new(&rep.graph);
    let injective = rep
        .sigma
        .iter()
        .map(|e| sigma_span.insert(e))
        .fold(true, |acc, grew| acc && grew);
    // Spanning: grow the word span breadth-first, multiplying the newest
    // basis elements by every generator image on both sides.
    let images: Vec<&LpaElement> = rep
        .sigma
        .iter()
        .chain(rep.t_map.iter())
        .chain(rep.s_map.iter())
        .collect();
    let mut word_span = ElementSpan::new(&rep.graph);
    let mut frontier: Vec<LpaElement> = Vec::new();
    for img in &images {
        if word_span.insert(img) {
            frontier.push((*img).clone());
        }
    }
    for _ in 2..=word_bound {
        let mut next = Vec::new();
        for e in &frontier {
            for img in &images {
                for prod in [e.multiply(img)?, img.multiply(e)?] {
                    if word_span.insert(&prod) {
                        next.push(prod);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let slice = GradedSlice::build(&rep.graph, crate::lpa::DEFAULT_DEGREE_BOUND, word_bound);
    let mut surjective = true;
    'outer: for d in slice.degrees().collect::<Vec<_>>() {
        for m in slice.monomials(d) {
            let e = LpaElement::from_raw_terms(&rep.graph, vec![(m.clone(), crate::rational::rat_one())]);
            if !word_span.contains(&e) {
                surjective = false;
                break 'outer;
            }
        }
    }
    let faithful = if sys.is_unital() {
        let fs = condition_fs_prime(sys)?;
        match (fs.holds, fs.id_on_q) {
            (true, Some(w)) => {
                let lhs = pi_of_combo(rep, &w.combo)?;
                let rhs = rep.apply_sigma(sys.ring.unit.as_ref().expect("unital"));
                Some(lhs == rhs)
            }
            _ => None,
        }
    } else {
        None
    };
    let invariant_rel_j = match j {
        None => None,
        Some(basis) => {
            let (fq, _) = operator_spans(sys);
            let dg = delta_gamma(sys);
            let mut ok = true;
            for x in basis {
                match fq.express(&dg.delta_of(x)) {
                    Some(combo) => {
                        if pi_of_combo(rep, &combo)? != rep.apply_sigma(x) {
                            ok = false;
                        }
                    }
                    None => ok = false,
                }
            }
            Some(ok)
        }
    };
    Ok(RepReport {
        axioms_ok: failures.is_empty(),
        failures,
        graded,
        injective,
        surjective_up_to_bound: surjective,
        word_bound,
        faithful,
        invariant_rel_j,
    })
}

#[derive(Debug, Clone)]
pub struct PiChiReport {
    /// Linear relations among the rank-one generators map to relations
    /// among the represented products (guaranteed when σ is injective).
    pub pi_well_defined: bool,
    pub chi_well_defined: bool,
    pub relation_failures: Vec<String>,
    pub pi_multiplicative: bool,
    pub chi_anti_multiplicative: bool,
    /// The two operator spans land on the same subspace of the target.
    pub images_match: bool,
    pub fq: OperatorSpan,
    pub fp: OperatorSpan,
}

impl PiChiReport {
    pub fn relations_ok(&self) -> bool {
        self.relation_failures.is_empty()
    }
}

fn flat_matrix_kernel(mats: &[Matrix], dim: usize) -> Vec<Vec<Rat>> {
    if mats.is_empty() {
        return Vec::new();
    }
    let mut flat = Matrix::zeros(dim * dim, mats.len());
    for (g, m) in mats.iter().enumerate() {
        for i in 0..dim {
            for j in 0..dim {
                flat.set(i * dim + j, g, m.get(i, j).clone());
            }
        }
    }
    kernel(&flat)
}

/// Builds the two induced maps on the operator spans and checks the full
/// relation battery connecting them to the representation.
pub fn pi_chi(sys: &RSystem, rep: &CovariantRep) -> Result<PiChiReport> {
    let (fq, fp) = operator_spans(sys);
    let dg = delta_gamma(sys);
    let q_gens: Vec<Matrix> = fq
        .gen_pairs
        .iter()
        .map(|&(q, p)| theta_on_q(sys, q, p))
        .collect();
    let p_gens: Vec<Matrix> = fp
        .gen_pairs
        .iter()
        .map(|&(p, q)| theta_on_p(sys, p, q))
        .collect();
    // Well-definedness: every linear relation among generators must be
    // sent to zero.
    let mut pi_well_defined = true;
    for k in flat_matrix_kernel(&q_gens, sys.q.dim) {
        let combo: Vec<((usize, usize), Rat)> = fq
            .gen_pairs
            .iter()
            .zip(k.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|(&pair, c)| (pair, c.clone()))
            .collect();
        if !pi_of_combo(rep, &combo)?.is_zero() {
            pi_well_defined = false;
        }
    }
    let mut chi_well_defined = true;
    for k in flat_matrix_kernel(&p_gens, sys.p.dim) {
        let combo: Vec<((usize, usize), Rat)> = fp
            .gen_pairs
            .iter()
            .zip(k.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|(&pair, c)| (pair, c.clone()))
            .collect();
        if !chi_of_combo(rep, &combo)?.is_zero() {
            chi_well_defined = false;
        }
    }
    let pi_of_matrix = |m: &Matrix| -> Result<LpaElement> {
        let combo = fq
            .express(m)
            .ok_or_else(|| Error::internal("Q-side operator left its span"))?;
        pi_of_combo(rep, &combo)
    };
    let chi_of_matrix = |m: &Matrix| -> Result<LpaElement> {
        let combo = fp
            .express(m)
            .ok_or_else(|| Error::internal("P-side operator left its span"))?;
        chi_of_combo(rep, &combo)
    };
    let mut relation_failures = Vec::new();
    for (g, theta) in q_gens.iter().enumerate() {
        let pi_theta = pi_of_combo(rep, &[(fq.gen_pairs[g], crate::rational::rat_one())])?;
        for r in 0..sys.ring.dim {
            let sig = &rep.sigma[r];
            // Composing with the ring action on either side multiplies
            // the image by σ on that side.
            let left = pi_of_matrix(&dg.delta[r].mul(theta))?;
            if left != sig.multiply(&pi_theta)? {
                relation_failures.push(format!("ring-action/product relation (left) fails at ring {r}, Q-generator {g}"));
            }
            let right = pi_of_matrix(&theta.mul(&dg.delta[r]))?;
            if right != pi_theta.multiply(sig)? {
                relation_failures.push(format!("ring-action/product relation (right) fails at ring {r}, Q-generator {g}"));
            }
        }
        // π(Θ)·T(q) = T(Θ(q)).
        for q in 0..sys.q.dim {
            let lhs = pi_theta.multiply(&rep.t_map[q])?;
            let rhs = rep.apply_t(&theta.mul_vec(&sys.q.basis_vec(q)));
            if lhs != rhs {
                relation_failures.push(format!("operator/T relation fails at Q-generator {g}, basis {q}"));
            }
        }
    }
    for (g, phi) in p_gens.iter().enumerate() {
        let chi_phi = chi_of_combo(rep, &[(fp.gen_pairs[g], crate::rational::rat_one())])?;
        for r in 0..sys.ring.dim {
            let sig = &rep.sigma[r];
            // χ reverses products, so composing with the P-side ring
            // action multiplies its image by σ on the opposite side.
            let left = chi_of_matrix(&dg.gamma[r].mul(phi))?;
            if left != chi_phi.multiply(sig)? {
                relation_failures.push(format!("ring-action/product relation (left) fails at ring {r}, P-generator {g}"));
            }
            let right = chi_of_matrix(&phi.mul(&dg.gamma[r]))?;
            if right != sig.multiply(&chi_phi)? {
                relation_failures.push(format!("ring-action/product relation (right) fails at ring {r}, P-generator {g}"));
            }
        }
        // S(p)·χ(Φ) = S(Φ(p)): χ's image multiplies S on the right.
        for p in 0..sys.p.dim {
            let lhs = rep.s_map[p].multiply(&chi_phi)?;
            let rhs = rep.apply_s(&phi.mul_vec(&sys.p.basis_vec(p)));
            if lhs != rhs {
                relation_failures.push(format!("operator/S relation fails at P-generator {g}, basis {p}"));
            }
        }
    }
    // π respects composition; χ reverses it.
    let mut pi_multiplicative = true;
    for (g, a) in q_gens.iter().enumerate() {
        for (h, b) in q_gens.iter().enumerate() {
            let lhs = pi_of_matrix(&a.mul(b))?;
            let pg = pi_of_combo(rep, &[(fq.gen_pairs[g], crate::rational::rat_one())])?;
            let ph = pi_of_combo(rep, &[(fq.gen_pairs[h], crate::rational::rat_one())])?;
            if lhs != pg.multiply(&ph)? {
                pi_multiplicative = false;
            }
        }
    }
    let mut chi_anti_multiplicative = true;
    for (g, a) in p_gens.iter().enumerate() {
        for (h, b) in p_gens.iter().enumerate() {
            let lhs = chi_of_matrix(&a.mul(b))?;
            let cg = chi_of_combo(rep, &[(fp.gen_pairs[g], crate::rational::rat_one())])?;
            let ch = chi_of_combo(rep, &[(fp.gen_pairs[h], crate::rational::rat_one())])?;
            if lhs != ch.multiply(&cg)? {
                chi_anti_multiplicative = false;
            }
        }
    }
    let mut pi_span = ElementSpan::new(&rep.graph);
    for g in 0..q_gens.len() {
        pi_span.insert(&pi_of_combo(rep, &[(fq.gen_pairs[g], crate::rational::rat_one())])?);
    }
    let mut chi_span = ElementSpan::new(&rep.graph);
    for g in 0..p_gens.len() {
        chi_span.insert(&chi_of_combo(rep, &[(fp.gen_pairs[g], crate::rational::rat_one())])?);
    }
    let images_match = pi_span.same_span(&chi_span);
    Ok(PiChiReport {
        pi_well_defined,
        chi_well_defined,
        relation_failures,
        pi_multiplicative,
        chi_anti_multiplicative,
        images_match,
        fq,
        fp,
    })
}

/// One unit decomposition 1 = Σ c·T‑image·S‑image at tensor degree n.
#[derive(Debug, Clone)]
pub struct IteratedUnitWitness {
    pub n: usize,
    /// (coefficient, image of the degree-n tensor under the iterated T,
    /// image under the iterated S).
    pub terms: Vec<(Rat, LpaElement, LpaElement)>,
}

/// Expresses the target unit as a sum of products of degree-n and
/// degree-(−n) images, by expressing the identity operator of the n-th
/// tensor power over its rank-one generators and pushing both sides
/// through the iterated representation maps.
///
/// Preconditions: the system is unital with finite-rank identities, the
/// representation is graded, σ is injective, the identity operator maps
/// to the image of the unit, and that image is the target unit.
pub fn iterated_unit_witness(
    sys: &RSystem,
    rep: &CovariantRep,
    n: usize,
    cap: usize,
) -> Result<IteratedUnitWitness> {
    if !sys.is_unital() {
        return Err(Error::Precondition("iterated unit witness requires a unital system".into()));
    }
    let fs = condition_fs_prime(sys)?;
    if !fs.holds {
        return Err(Error::Precondition(
            "iterated unit witness requires finite-rank identity operators".into(),
        ));
    }
    let unit = sys.ring.unit.clone().expect("unital");
    let sigma_unit = rep.apply_sigma(&unit);
    if sigma_unit != LpaElement::one(&rep.graph) {
        return Err(Error::Precondition(
            "iterated unit witness requires the ring unit to map to the target unit".into(),
        ));
    }
    let w = fs.id_on_q.as_ref().expect("identity witness exists when the condition holds");
    if pi_of_combo(rep, &w.combo)? != sigma_unit {
        return Err(Error::Precondition(
            "iterated unit witness requires the identity operator to map to the unit".into(),
        ));
    }
    let mut sigma_span = ElementSpan::new(&rep.graph);
    if !rep.sigma.iter().all(|e| sigma_span.insert(e)) {
        return Err(Error::Precondition("iterated unit witness requires σ injective".into()));
    }
    if !(rep.sigma.iter().all(|e| homogeneous_of(e, 0))
        && rep.t_map.iter().all(|e| homogeneous_of(e, 1))
        && rep.s_map.iter().all(|e| homogeneous_of(e, -1)))
    {
        return Err(Error::Precondition("iterated unit witness requires a graded representation".into()));
    }
    if n == 0 {
        return Ok(IteratedUnitWitness {
            n: 0,
            terms: vec![(crate::rational::rat_one(), sigma_unit.clone(), sigma_unit)],
        });
    }
    // Iterated images: T on Q^{⊗k} = Q^{⊗k−1} ⊗ Q multiplies on the
    // right; S on P^{⊗k} = P ⊗ P^{⊗k−1} multiplies on the left.
    let mut t_imgs: Vec<LpaElement> = rep.t_map.clone();
    let mut s_imgs: Vec<LpaElement> = rep.s_map.clone();
    let mut top = None;
    for k in 2..=n {
        let power = tensor_power(sys, k, cap)?;
        let q_embed = power.q_embed.as_ref().expect("k ≥ 2");
        let p_embed = power.p_embed.as_ref().expect("k ≥ 2");
        let mut next_t = Vec::with_capacity(q_embed.dim);
        for &qt in &q_embed.basis_plain {
            let (big_j, j) = (qt / sys.q.dim, qt % sys.q.dim);
            next_t.push(t_imgs[big_j].multiply(&rep.t_map[j])?);
        }
        let mut next_s = Vec::with_capacity(p_embed.dim);
        for &pt in &p_embed.basis_plain {
            let (i, big_i) = (pt / p_embed.right_dim, pt % p_embed.right_dim);
            next_s.push(rep.s_map[i].multiply(&s_imgs[big_i])?);
        }
        t_imgs = next_t;
        s_imgs = next_s;
        if k == n {
            top = Some(power);
        }
    }
    let power = match top {
        Some(p) => p,
        None => tensor_power(sys, n, cap)?, // n == 1
    };
    let power_fs = condition_fs_prime(&power.system)?;
    let Some(id_w) = power_fs.id_on_q else {
        return Err(Error::internal(format!(
            "finite-rank identity did not propagate to tensor degree {n}"
        )));
    };
    let mut total = LpaElement::zero(&rep.graph);
    let mut terms = Vec::new();
    for ((qh, ph), c) in id_w.combo {
        let t = &t_imgs[qh];
        let s = &s_imgs[ph];
        if !homogeneous_of(t, n as i64) || !homogeneous_of(s, -(n as i64)) {
            return Err(Error::internal("iterated image has unexpected degree"));
        }
        total = total.plus(&t.multiply(s)?.scaled(&c));
        terms.push((c, t.clone(), s.clone()));
    }
    if total != LpaElement::one(&rep.graph) {
        return Err(Error::internal(format!(
            "iterated unit witness at degree {n} did not multiply out to the unit"
        )));
    }
    Ok(IteratedUnitWitness { n, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rsystem::standard_system;
    use crate::rational::rat_int;

    fn arrow() -> Arc<DirectedGraph> {
        Arc::new(DirectedGraph::build(&["v1", "v2"], &[("f1", "v1", "v2")]).unwrap())
    }

    fn rose2() -> Arc<DirectedGraph> {
        Arc::new(DirectedGraph::build(&["v"], &[("g1", "v", "v"), ("g2", "v", "v")]).unwrap())
    }

    #[test]
    fn standard_rep_of_arrow_validates() {
        let g = arrow();
        let sys = standard_system(&g);
        let rep = standard_rep(&g);
        let report = validate_covariant_rep(&sys, &rep, None, 8).unwrap();
        assert!(report.axioms_ok, "failures: {:?}", report.failures);
        assert!(report.graded);
        assert!(report.injective);
        assert!(report.surjective_up_to_bound);
        // The identity operator maps to the source vertex only, while the
        // unit maps to the sum of both vertices — the sink is missed.
        assert_eq!(report.faithful, Some(false));
    }

    #[test]
    fn invariance_holds_relative_to_the_regular_vertex() {
        let g = arrow();
        let sys = standard_system(&g);
        let rep = standard_rep(&g);
        let j = vec![sys.ring.basis_vec(0)];
        let report = validate_covariant_rep(&sys, &rep, Some(&j), 8).unwrap();
        assert_eq!(report.invariant_rel_j, Some(true));
        let j_bad = vec![sys.ring.basis_vec(1)];
        let report = validate_covariant_rep(&sys, &rep, Some(&j_bad), 8).unwrap();
        assert_eq!(report.invariant_rel_j, Some(false));
    }

    #[test]
    fn zero_sigma_is_not_injective() {
        let g = arrow();
        let sys = standard_system(&g);
        let mut rep = standard_rep(&g);
        rep.sigma = vec![LpaElement::zero(&g); 2];
        let report = validate_covariant_rep(&sys, &rep, None, 8).unwrap();
        assert!(!report.injective);
        assert!(!report.axioms_ok);
    }

    #[test]
    fn arrow_identity_operator_maps_to_source_vertex() {
        let g = arrow();
        let sys = standard_system(&g);
        let rep = standard_rep(&g);
        let report = pi_chi(&sys, &rep).unwrap();
        assert!(report.pi_well_defined);
        assert!(report.chi_well_defined);
        assert!(report.relations_ok(), "failures: {:?}", report.relation_failures);
        assert!(report.pi_multiplicative);
        assert!(report.chi_anti_multiplicative);
        assert!(report.images_match);
        let id = Matrix::identity(1);
        let combo = report.fq.express(&id).unwrap();
        let img = pi_of_combo(&rep, &combo).unwrap();
        assert_eq!(img, LpaElement::vertex(&g, 0));
    }

    #[test]
    fn rose_identity_operator_maps_to_the_unit() {
        let g = rose2();
        let sys = standard_system(&g);
        let rep = standard_rep(&g);
        let report = pi_chi(&sys, &rep).unwrap();
        assert!(report.relations_ok(), "failures: {:?}", report.relation_failures);
        let id = Matrix::identity(2);
        let combo = report.fq.express(&id).unwrap();
        let img = pi_of_combo(&rep, &combo).unwrap();
        assert_eq!(img, LpaElement::one(&g));
    }

    #[test]
    fn planted_axiom_defect_is_reported() {
        let g = arrow();
        let sys = standard_system(&g);
        let mut rep = standard_rep(&g);
        rep.t_map[0] = rep.t_map[0].scaled(&rat_int(2));
        let report = validate_covariant_rep(&sys, &rep, None, 8).unwrap();
        assert!(!report.axioms_ok);
        assert!(report.failures.iter().any(|f| f.contains("pairing axiom")));
    }

    #[test]
    fn unit_witnesses_exist_for_the_rose() {
        let g = rose2();
        let sys = standard_system(&g);
        let rep = standard_rep(&g);
        for n in 0..=3 {
            let w = iterated_unit_witness(&sys, &rep, n, 512).unwrap();
            assert_eq!(w.n, n);
            assert!(!w.terms.is_empty());
            let mut total = LpaElement::zero(&g);
            for (c, t, s) in &w.terms {
                total = total.plus(&t.multiply(s).unwrap().scaled(c));
            }
            assert_eq!(total, LpaElement::one(&g));
        }
    }

    #[test]
    fn unit_witness_refuses_unfaithful_targets() {
        let g = arrow();
        let sys = standard_system(&g);
        let rep = standard_rep(&g);
        assert!(matches!(
            iterated_unit_witness(&sys, &rep, 1, 512),
            Err(Error::Precondition(_))
        ));
    }
}
