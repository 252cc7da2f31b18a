//! End-to-end acceptance battery.  Each test is one numbered criterion,
//! verified with exact arithmetic (zero tolerance) and, where stated, a
//! wall-clock budget; the harness emits one pass/fail line per criterion.

mod common;

use std::sync::Arc;
use std::time::Instant;

use common::{arrow, chain5, corpus, rng, rose2, MonomialSampler};

use zgrade::cli::verify_examples_lines;
use zgrade::cslp::{
    classify_cslp, freeword, full_idempotent_certificate, lpa_corner, matrix_ring,
    relations_check, CertificateSearch, CoefRing, CslpHandle, CslpInstance,
};
use zgrade::fdalg::FdAlgebra;
use zgrade::grading::{
    annihilator_of_degree_one, classify, component_product, generated_ideal, idempotent_chain,
    induced_system, semi_full_check, GradedProperty, GradedVerdict, IdealSemantics, VerdictStatus,
};
use zgrade::graph::{DirectedGraph, Path};
use zgrade::linalg::{sparse_from_dense, EchelonSpan, Matrix};
use zgrade::lpa::{
    graded_spanning_set, ElementSpan, GradedSlice, LpaElement, PathMonomial, RewriteStrategy,
};
use zgrade::rational::{rat_int, rat_one, Rat};
use zgrade::rsystem::rep::{pi_chi, standard_rep, validate_covariant_rep, CovariantRep};
use zgrade::rsystem::tensor::tensor_power;
use zgrade::rsystem::{
    condition_fs, condition_fs_prime, operator_spans, standard_system, surjectivity_witnesses,
    validate_system, FdBimodule, RSystem, DEFAULT_TENSOR_CAP,
};

const BOTH_SEMANTICS: [IdealSemantics; 2] =
    [IdealSemantics::CoefficientBimodule, IdealSemantics::TwoSided];

fn finish(name: &str, started: Instant, budget_ms: Option<u128>) {
    let ms = started.elapsed().as_millis();
    if let Some(limit) = budget_ms {
        assert!(ms < limit, "{name} took {ms} ms, over the {limit} ms budget");
    }
    println!("{name}: PASS ({ms} ms)");
}

fn verdict_for(verdicts: &[GradedVerdict], property: GradedProperty) -> &GradedVerdict {
    verdicts
        .iter()
        .find(|v| v.property == property)
        .unwrap_or_else(|| panic!("no verdict for {}", property.label()))
}

fn element_of(g: &Arc<DirectedGraph>, m: &PathMonomial) -> LpaElement {
    LpaElement::from_raw_terms(g, vec![(m.clone(), rat_one())])
}

fn vertex_span(g: &Arc<DirectedGraph>, vertices: &[usize]) -> ElementSpan {
    let mut span = ElementSpan::new(g);
    for &v in vertices {
        span.insert(&LpaElement::vertex(g, v));
    }
    span
}

/// Degree-one pairing values of the standard system, pushed through the
/// standard representation; these generate the degree-one ideal.
fn pairing_value_gens(sys: &RSystem, rep: &CovariantRep) -> Vec<LpaElement> {
    let mut gens = Vec::new();
    for row in &sys.psi {
        for value in row {
            gens.push(rep.apply_sigma(value));
        }
    }
    gens
}

// ---------------------------------------------------------------------
// 1. Arrow graph: products, the two degree ideals, semi-fullness.
// ---------------------------------------------------------------------

#[test]
fn criterion_01_arrow_products_ideals_and_semi_fullness() {
    let started = Instant::now();
    let g = arrow();
    let slice = GradedSlice::build(&g, 2, 4);
    assert!(slice.exact);

    let f1 = LpaElement::edge(&g, 0);
    let v1 = LpaElement::vertex(&g, 0);
    let v2 = LpaElement::vertex(&g, 1);
    assert_eq!(f1.multiply(&f1.star()).unwrap(), v1);
    assert_eq!(f1.star().multiply(&f1).unwrap(), v2);

    let sys = standard_system(&g);
    let rep = standard_rep(&g);
    let mut degree_zero_gens = Vec::new();
    for i in 0..sys.ring.dim {
        for j in 0..sys.ring.dim {
            degree_zero_gens.push(rep.apply_sigma(sys.ring.basis_product(i, j)));
        }
    }
    let degree_one_gens = pairing_value_gens(&sys, &rep);

    let whole = vertex_span(&g, &[0, 1]);
    let sink_only = vertex_span(&g, &[1]);
    for sem in BOTH_SEMANTICS {
        let i0 = generated_ideal(&slice, &degree_zero_gens, sem).unwrap();
        assert!(i0.complete && i0.span.same_span(&whole), "I_0 under {}", sem.label());
        let i1 = generated_ideal(&slice, &degree_one_gens, sem).unwrap();
        assert!(i1.complete && i1.span.same_span(&sink_only), "I_1 under {}", sem.label());
        assert_eq!(i1.span.dim(), 1);
    }

    let product = component_product(&slice, -1, 1);
    assert!(product.exact);
    assert!(product.span.same_span(&sink_only));

    let induced = induced_system(&slice).unwrap();
    for sem in BOTH_SEMANTICS {
        for battery in [
            semi_full_check(&slice, &sys, &rep, 1, sem, DEFAULT_TENSOR_CAP).unwrap(),
            semi_full_check(&slice, &induced.system, &induced.rep, 1, sem, DEFAULT_TENSOR_CAP)
                .unwrap(),
        ] {
            assert_eq!(battery.len(), 2);
            for v in battery {
                assert_eq!(
                    v.status,
                    VerdictStatus::CertifiedYes,
                    "semi-full under {}: {}",
                    sem.label(),
                    v.witness
                );
            }
        }
    }
    finish("criterion 01 (arrow ideals and products)", started, Some(1000));
}

// ---------------------------------------------------------------------
// 2. Five-vertex chain: component dimensions, the degree-one ideal
//    under both semantics, and the recorded membership divergence.
// ---------------------------------------------------------------------

#[test]
fn criterion_02_chain_dimensions_and_degree_one_ideal() {
    let started = Instant::now();
    let g = chain5();
    let slice = GradedSlice::build(&g, 3, 6);
    assert!(slice.exact);
    assert_eq!(slice.dim(0), 8);
    assert_eq!((slice.dim(1), slice.dim(-1)), (5, 5));
    assert_eq!((slice.dim(2), slice.dim(-2)), (1, 1));
    assert_eq!((slice.dim(3), slice.dim(-3)), (0, 0));
    for d in [3i64, -3, 4, -4] {
        assert!(graded_spanning_set(&g, d, 12).is_empty(), "no monomials in degree {d}");
    }

    // The single degree-zero rewriting relation: f2·f2★ = v2 − f1·f1★.
    let f1 = LpaElement::edge(&g, 0);
    let f2 = LpaElement::edge(&g, 1);
    let f2f2 = f2.multiply(&f2.star()).unwrap();
    assert_eq!(
        f2f2,
        LpaElement::vertex(&g, 1).minus(&f1.multiply(&f1.star()).unwrap())
    );

    let sys = standard_system(&g);
    let rep = standard_rep(&g);
    let gens = pairing_value_gens(&sys, &rep);

    let bimodule = generated_ideal(&slice, &gens, IdealSemantics::CoefficientBimodule).unwrap();
    assert!(bimodule.complete);
    assert!(bimodule.span.same_span(&vertex_span(&g, &[0, 2, 3])));
    assert_eq!(bimodule.span.dim(), 3);
    assert!(!bimodule.span.contains(&f2f2));

    // Closing under all of degree zero instead gives a strictly larger
    // ideal that does capture f2·f2★; the membership bit is frozen here
    // and surfaces in the fixture battery as information, never failure.
    let two_sided = generated_ideal(&slice, &gens, IdealSemantics::TwoSided).unwrap();
    assert!(two_sided.complete);
    assert_eq!(two_sided.span.dim(), 6);
    assert!(two_sided.span.contains(&f2f2));

    let (lines, all_ok) = verify_examples_lines(false).unwrap();
    assert!(all_ok);
    assert!(lines
        .iter()
        .any(|l| l.starts_with("INFO\tchain-ideal-membership")));
    let (strict_lines, strict_ok) = verify_examples_lines(true).unwrap();
    assert!(strict_ok, "the divergence reports; it does not fail");
    assert!(strict_lines
        .iter()
        .any(|l| l.starts_with("DISCREPANCY\tchain-ideal-membership")));
    finish("criterion 02 (chain dimensions and ideals)", started, Some(2000));
}

// ---------------------------------------------------------------------
// 3. Sink criterion over the full ≤3-vertex ≤3-edge corpus.
// ---------------------------------------------------------------------

/// Independent re-derivation of the unit decompositions on a sink-free
/// graph: the edge sum for S₁·S₋₁, and per-vertex incoming-edge or
/// companion-path sums for S₋₁·S₁, each re-verified exactly.
fn verify_unit_decompositions(g: &Arc<DirectedGraph>) {
    let one = LpaElement::one(g);
    let mut positive_first = LpaElement::zero(g);
    for e in 0..g.edge_count() {
        let f = LpaElement::edge(g, e);
        assert_eq!(f.homogeneous_degree(), Some(1));
        positive_first = positive_first.plus(&f.multiply(&f.star()).unwrap());
    }
    assert_eq!(positive_first, one, "1 = Σ f·f★ on {}", g.serialize());

    let n = g.vertex_count();
    let paths = g.enumerate_paths(n + 1);
    let mut negative_first = LpaElement::zero(g);
    for v in 0..n {
        if let Some(&e) = g.edges_into(v).first() {
            let f = LpaElement::edge(g, e);
            negative_first = negative_first.plus(&f.star().multiply(&f).unwrap());
            continue;
        }
        // v receives nothing: decompose v through companion paths one
        // longer than the length-k paths out of v, at the first depth
        // where every such path has a companion into its end.
        let vertex = LpaElement::vertex(g, v);
        let mut settled = false;
        'depth: for k in 1..=n {
            let gammas: Vec<&Path> = paths[k].iter().filter(|p| p.start == v).collect();
            assert!(!gammas.is_empty(), "sink-free graphs extend every path");
            let mut pairs = Vec::new();
            for gamma in &gammas {
                let end = gamma.end(g);
                let Some(delta) = paths[k + 1].iter().find(|p| p.end(g) == end) else {
                    continue 'depth;
                };
                let x = PathMonomial::new(g, (*gamma).clone(), delta.clone()).unwrap();
                let y = PathMonomial::new(g, delta.clone(), (*gamma).clone()).unwrap();
                let (x, y) = (element_of(g, &x), element_of(g, &y));
                assert_eq!(x.homogeneous_degree(), Some(-1));
                assert_eq!(y.homogeneous_degree(), Some(1));
                pairs.push((x, y));
            }
            let mut sum = LpaElement::zero(g);
            for (x, y) in &pairs {
                sum = sum.plus(&x.multiply(y).unwrap());
            }
            assert_eq!(sum, vertex, "companion decomposition at depth {k}");
            negative_first = negative_first.plus(&sum);
            settled = true;
            break;
        }
        assert!(settled, "no companion depth ≤ {n} for {}", g.vertex_name(v));
    }
    assert_eq!(negative_first, one, "1 = Σ over S₋₁·S₁ on {}", g.serialize());
}

#[test]
fn criterion_03_sink_criterion_across_the_corpus() {
    let started = Instant::now();
    let graphs = corpus();
    assert_eq!(graphs.len(), 909);
    let mut strongly_graded = 0usize;
    for g in &graphs {
        let slice = GradedSlice::build(g, 1, 2);
        let verdicts = classify(&slice).unwrap();
        let strongly = verdict_for(&verdicts, GradedProperty::Strongly);
        let sinks = g.classify_vertices().sinks;
        if sinks.is_empty() {
            assert_eq!(strongly.status, VerdictStatus::CertifiedYes, "{}", g.serialize());
            strongly_graded += 1;
            verify_unit_decompositions(g);
        } else {
            assert_eq!(strongly.status, VerdictStatus::CertifiedNo, "{}", g.serialize());
            let v = sinks[0];
            assert!(strongly.witness.contains(g.vertex_name(v)));
            // Sink certificate: a nonzero idempotent killing S₁.
            let ev = LpaElement::vertex(g, v);
            assert!(!ev.is_zero());
            assert_eq!(ev.multiply(&ev).unwrap(), ev);
            for m in slice.monomials(1) {
                assert!(ev.multiply(&element_of(g, m)).unwrap().is_zero());
            }
        }
    }
    // 221 sink-free graphs: 3 one-vertex (1–3 loops), 56 two-vertex
    // (8 + 48 source assignments covering both vertices), 162 = 3!·27
    // three-vertex graphs.
    assert_eq!(strongly_graded, 221);
    finish("criterion 03 (sink criterion, 909 graphs)", started, Some(30_000));
}

// ---------------------------------------------------------------------
// 4. The chain's idempotent chain ε₀ ≥ ε₁ ≥ ε₂.
// ---------------------------------------------------------------------

#[test]
fn criterion_04_chain_idempotent_chain() {
    let started = Instant::now();
    let g = chain5();
    let slice = GradedSlice::build(&g, 2, 6);
    let chain = idempotent_chain(&slice, 2);
    assert!(chain.ok, "{:?}", chain.failures);
    assert_eq!(chain.eps.len(), 3);

    let vsum = |ids: &[usize]| {
        let mut out = LpaElement::zero(&g);
        for &v in ids {
            out = out.plus(&LpaElement::vertex(&g, v));
        }
        out
    };
    assert_eq!(chain.eps[0], vsum(&[0, 1, 2, 3, 4]));
    assert_eq!(chain.eps[0], LpaElement::one(&g));
    assert_eq!(chain.eps[1], vsum(&[1, 3, 4]));
    assert_eq!(chain.eps[2], vsum(&[4]));

    for e in &chain.eps {
        assert_eq!(e.multiply(e).unwrap(), *e);
    }
    for i in 0..chain.eps.len() {
        for j in i + 1..chain.eps.len() {
            let (hi, lo) = (&chain.eps[i], &chain.eps[j]);
            assert_eq!(hi.multiply(lo).unwrap(), *lo, "ε_{i} ≥ ε_{j} from the left");
            assert_eq!(lo.multiply(hi).unwrap(), *lo, "ε_{i} ≥ ε_{j} from the right");
        }
    }

    for i in 0..=2i64 {
        let e = &chain.eps[i as usize];
        for m in slice.monomials(i) {
            let x = element_of(&g, m);
            assert_eq!(e.multiply(&x).unwrap(), x, "left identity on degree {i}");
        }
        for m in slice.monomials(-i) {
            let x = element_of(&g, m);
            assert_eq!(x.multiply(e).unwrap(), x, "right identity on degree −{i}");
        }
    }
    finish("criterion 04 (idempotent chain)", started, None);
}

// ---------------------------------------------------------------------
// 5. Finite-rank identity operators: two deciders, one answer.
// ---------------------------------------------------------------------

/// Q is the ring itself but P = 0, so no rank-one operator reaches the
/// identity on Q.
fn p_zero_system() -> RSystem {
    let ring = FdAlgebra::field();
    RSystem {
        p: FdBimodule::zero_module(ring.dim),
        q: FdBimodule::regular(&ring),
        psi: Vec::new(),
        ring,
        labels: None,
    }
}

/// Both modules vanish; the identity operators are the zero operator.
fn zero_system() -> RSystem {
    let ring = FdAlgebra::field();
    RSystem {
        p: FdBimodule::zero_module(ring.dim),
        q: FdBimodule::zero_module(ring.dim),
        psi: Vec::new(),
        ring,
        labels: None,
    }
}

/// Both modules are the ring acting on itself and the pairing is the
/// multiplication, over a noncommutative coefficient ring.
fn regular_system() -> RSystem {
    let ring = FdAlgebra::upper_triangular2();
    let module = FdBimodule::regular(&ring);
    let psi = (0..ring.dim)
        .map(|i| {
            (0..ring.dim)
                .map(|j| ring.basis_product(i, j).to_vec())
                .collect()
        })
        .collect();
    RSystem {
        p: module.clone(),
        q: module,
        psi,
        ring,
        labels: None,
    }
}

/// Runs the identity-membership route and the basis-fixing route
/// independently of the library's combined decider, then checks all
/// three agree.
fn double_decide(sys: &RSystem) -> bool {
    let (fq, fp) = operator_spans(sys);
    let membership =
        fq.contains(&Matrix::identity(sys.q.dim)) && fp.contains(&Matrix::identity(sys.p.dim));
    let q_basis: Vec<Vec<Rat>> = (0..sys.q.dim).map(|i| sys.q.basis_vec(i)).collect();
    let p_basis: Vec<Vec<Rat>> = (0..sys.p.dim).map(|i| sys.p.basis_vec(i)).collect();
    let basis_fixing = condition_fs(sys, &q_basis, &p_basis).is_some();
    assert_eq!(membership, basis_fixing, "the two finite-rank routes disagree");
    let report = condition_fs_prime(sys).expect("combined decider agrees internally");
    assert_eq!(report.holds, membership);
    membership
}

#[test]
fn criterion_05_finite_rank_identity_double_decider() {
    let started = Instant::now();
    for g in corpus() {
        let sys = standard_system(&g);
        assert!(
            double_decide(&sys),
            "finite graphs carry finite-rank identities: {}",
            g.serialize()
        );
    }
    let (p_zero, zero, regular) = (p_zero_system(), zero_system(), regular_system());
    for sys in [&p_zero, &zero, &regular] {
        assert_eq!(validate_system(sys), Ok(()));
    }
    assert!(!double_decide(&p_zero));
    assert!(double_decide(&zero));
    assert!(double_decide(&regular));
    finish("criterion 05 (finite-rank double decider)", started, None);
}

// ---------------------------------------------------------------------
// 6. Surjective pairings: tensor unit witnesses and propagation of the
//    finite-rank identities to tensor powers.
// ---------------------------------------------------------------------

#[test]
fn criterion_06_surjective_pairings_and_tensor_powers() {
    let started = Instant::now();
    let mut surjective_count = 0usize;
    for g in corpus() {
        let sys = standard_system(&g);
        let mut image: EchelonSpan<usize> = EchelonSpan::new();
        for row in &sys.psi {
            for value in row {
                image.insert(sparse_from_dense(value));
            }
        }
        let surjective = image.dim() == sys.ring.dim;
        // The pairing image is the span of range vertices, so
        // surjectivity is exactly the no-source condition.
        assert_eq!(
            surjective,
            g.classify_vertices().sources.is_empty(),
            "{}",
            g.serialize()
        );
        if !surjective {
            assert!(surjectivity_witnesses(&sys, 1, DEFAULT_TENSOR_CAP)
                .unwrap()
                .is_none());
            continue;
        }
        surjective_count += 1;
        let unit = sys.ring.unit.clone().expect("standard systems are unital");
        for n in 0..=3usize {
            let witness = surjectivity_witnesses(&sys, n, DEFAULT_TENSOR_CAP)
                .unwrap()
                .expect("surjective pairings lift to every tensor power");
            assert_eq!(witness.n, n);
            let power = tensor_power(&sys, n, DEFAULT_TENSOR_CAP).unwrap();
            let mut total = sys.ring.zero_vec();
            for (p, q) in &witness.pairs {
                for (k, v) in power.system.pairing(p, q).into_iter().enumerate() {
                    total[k] += v;
                }
            }
            assert_eq!(total, unit, "tensor witness sums to the unit at n = {n}");
        }
        assert!(condition_fs_prime(&sys).unwrap().holds);
        for n in 1..=3usize {
            let power = tensor_power(&sys, n, DEFAULT_TENSOR_CAP).unwrap();
            assert!(
                condition_fs_prime(&power.system).unwrap().holds,
                "finite-rank identities at tensor power {n}"
            );
        }
    }
    // Mirror image of the 221 sink-free graphs under edge reversal.
    assert_eq!(surjective_count, 221);
    finish("criterion 06 (tensor witnesses and propagation)", started, None);
}

// ---------------------------------------------------------------------
// 7. The standard representation satisfies every relation family.
// ---------------------------------------------------------------------

#[test]
fn criterion_07_standard_representation_relations() {
    let started = Instant::now();
    let g = chain5();
    let sys = standard_system(&g);
    let rep = standard_rep(&g);
    let report = validate_covariant_rep(&sys, &rep, None, 4).unwrap();
    assert!(report.axioms_ok, "{:?}", report.failures);
    assert!(report.failures.is_empty());
    assert!(report.graded);
    assert!(report.injective);

    let pc = pi_chi(&sys, &rep).unwrap();
    assert!(pc.pi_well_defined && pc.chi_well_defined);
    assert!(pc.relations_ok(), "{:?}", pc.relation_failures);
    assert!(pc.pi_multiplicative);
    assert!(pc.chi_anti_multiplicative);
    assert!(pc.images_match);
    finish("criterion 07 (representation relations)", started, None);
}

// ---------------------------------------------------------------------
// 8. Annihilator formula and the pre-CP verdict across the corpus.
// ---------------------------------------------------------------------

#[test]
fn criterion_08_annihilator_formula_and_pre_cp() {
    let started = Instant::now();
    let mut kernel_confirmed = 0usize;
    for g in corpus() {
        let slice = GradedSlice::build(&g, 1, 2);
        assert_eq!(g.is_acyclic(), slice.exact);
        let report = annihilator_of_degree_one(&slice).unwrap();
        let classes = g.classify_vertices();
        assert_eq!(report.sink_vertices, classes.sinks);
        let sink_span = vertex_span(&g, &classes.sinks);
        let mut reported = ElementSpan::new(&g);
        for e in &report.annihilator {
            reported.insert(e);
        }
        assert!(reported.same_span(&sink_span), "{}", g.serialize());
        if g.is_acyclic() {
            assert!(report.linear_route_used, "kernel route runs on exact slices");
            kernel_confirmed += 1;
        }
        assert!(report.trivial_intersection);
        assert_eq!(
            report.pre_cp.status,
            VerdictStatus::CertifiedYes,
            "{}: {}",
            g.serialize(),
            report.pre_cp.witness
        );
    }
    assert!(kernel_confirmed > 0);
    finish("criterion 08 (annihilator and pre-CP, 909 graphs)", started, None);
}

// ---------------------------------------------------------------------
// 9. The chain's induced pairing system and its canonical
//    representation are semi-full for k ≤ 3.
// ---------------------------------------------------------------------

#[test]
fn criterion_09_induced_system_reduction() {
    let started = Instant::now();
    let g = chain5();
    let slice = GradedSlice::build(&g, 3, 6);
    let induced = induced_system(&slice).unwrap();
    assert_eq!(validate_system(&induced.system), Ok(()));
    let report = validate_covariant_rep(&induced.system, &induced.rep, None, 4).unwrap();
    assert!(report.axioms_ok, "{:?}", report.failures);

    for sem in BOTH_SEMANTICS {
        let verdicts =
            semi_full_check(&slice, &induced.system, &induced.rep, 3, sem, DEFAULT_TENSOR_CAP)
                .unwrap();
        assert_eq!(verdicts.len(), 4);
        for v in verdicts {
            assert_eq!(
                v.status,
                VerdictStatus::CertifiedYes,
                "semi-full under {}: {}",
                sem.label(),
                v.witness
            );
        }
    }
    finish("criterion 09 (induced system semi-fullness)", started, None);
}

// ---------------------------------------------------------------------
// 10. Matrix-coefficient skew Laurent instance.
// ---------------------------------------------------------------------

#[test]
fn criterion_10_matrix_mode_classification_and_oracle() {
    let started = Instant::now();
    let ring = matrix_ring(2, &[rat_int(0), rat_int(1), rat_int(1), rat_int(0)]).unwrap();
    let h = CslpHandle::new(ring).unwrap();
    let relations = relations_check(&h).unwrap();
    assert!(relations.ok, "{:?}", relations.failures);

    let verdicts = classify_cslp(&h, 5, 4).unwrap();
    let strongly = verdict_for(&verdicts, GradedProperty::Strongly);
    assert_eq!(strongly.status, VerdictStatus::CertifiedYes, "{}", strongly.witness);
    let artinian = verdict_for(&verdicts, GradedProperty::Artinian);
    assert_eq!(artinian.status, VerdictStatus::CertifiedNo);
    assert!(artinian.witness.contains("n ≤ 5"), "{}", artinian.witness);

    // The descending-chain certificate, re-verified term by term.
    let one = h.el_one();
    for n in 1..=5 {
        assert_eq!(
            h.el_multiply(&h.el_t_minus(n), &h.el_t_plus(n)).unwrap(),
            one,
            "t₋^{n}·t₊^{n} = 1"
        );
        assert!(!h.el_multiply(&h.el_t_plus(n), &h.el_t_minus(n)).unwrap().is_zero());
    }

    let checked = freeword::agreement_test(&h, 500, 6, 0x0c51_f00d).unwrap();
    assert_eq!(checked, 500);
    finish("criterion 10 (matrix skew Laurent instance)", started, None);
}

// ---------------------------------------------------------------------
// 11. Proper corner over the two-petal rose.
// ---------------------------------------------------------------------

#[test]
fn criterion_11_proper_corner_certificates_and_shifted_idempotent() {
    let started = Instant::now();
    let g = rose2();
    let h = CslpHandle::new(lpa_corner(&g, "g1").unwrap()).unwrap();

    let g1 = LpaElement::edge(&g, 0);
    let e = g1.multiply(&g1.star()).unwrap();
    assert_eq!(
        h.el_multiply(&h.el_t_plus(1), &h.el_t_minus(1)).unwrap(),
        h.el_coef(&e)
    );
    assert_eq!(
        h.el_multiply(&h.el_t_minus(1), &h.el_t_plus(1)).unwrap(),
        h.el_one()
    );

    // The fullness certificate is literally 1 = g1★·e·g1.
    let search = full_idempotent_certificate(&h, 2).unwrap();
    let CertificateSearch::Found(cert) = search else {
        panic!("certificate exists within word bound 2");
    };
    assert_eq!(cert.terms.len(), 1);
    let (coefficient, left, right) = &cert.terms[0];
    assert_eq!(coefficient, &rat_one());
    assert_eq!(left, &g1.star());
    assert_eq!(right, &g1);
    let product = left.multiply(&e).unwrap().multiply(right).unwrap();
    assert_eq!(product, LpaElement::one(&g));

    let verdicts = classify_cslp(&h, 2, 2).unwrap();
    assert_eq!(
        verdict_for(&verdicts, GradedProperty::Strongly).status,
        VerdictStatus::CertifiedYes
    );
    let eps = verdict_for(&verdicts, GradedProperty::EpsilonStrongly);
    assert_eq!(eps.status, VerdictStatus::CertifiedYes);
    let expected_unit = format!("k=1: unit {}", h.ring.render(&LpaElement::one(&g)));
    assert!(eps.witness.contains(&expected_unit), "{}", eps.witness);

    // t₊²·t₋² is the α-image of e, not e itself; the analyzer reports
    // that as information rather than treating it as a unit candidate.
    let alpha_e = g1
        .multiply(&g1)
        .unwrap()
        .multiply(&g1.star())
        .unwrap()
        .multiply(&g1.star())
        .unwrap();
    assert_eq!(
        h.el_multiply(&h.el_t_plus(2), &h.el_t_minus(2)).unwrap(),
        h.el_coef(&alpha_e)
    );
    assert_ne!(alpha_e, e);
    let note = CslpInstance::Corner(h)
        .shifted_idempotent_note(2)
        .unwrap()
        .expect("proper corners report the shifted idempotent");
    assert!(note.contains("t₊^2·t₋^2"), "{note}");
    finish("criterion 11 (proper corner instance)", started, None);
}

// ---------------------------------------------------------------------
// 12. Rewriting soundness on random monomial triples.
// ---------------------------------------------------------------------

#[test]
fn criterion_12_rewriting_soundness_across_the_corpus() {
    let started = Instant::now();
    let mut rng = rng(0x12ac_c05d);
    for g in corpus() {
        let sampler = MonomialSampler::new(&g, 2);
        for _ in 0..500 {
            let a = sampler.sample(&g, &mut rng);
            let b = sampler.sample(&g, &mut rng);
            let c = sampler.sample(&g, &mut rng);
            let ea = element_of(&g, &a);
            let eb = element_of(&g, &b);
            let ec = element_of(&g, &c);

            let ab = ea.multiply(&eb).unwrap();
            let left = ab.multiply(&ec).unwrap();
            let right = ea.multiply(&eb.multiply(&ec).unwrap()).unwrap();
            assert_eq!(left, right, "associativity on {}", g.serialize());

            assert_eq!(
                ab.star(),
                eb.star().multiply(&ea.star()).unwrap(),
                "star anti-multiplicativity on {}",
                g.serialize()
            );

            if !ab.is_zero() {
                assert_eq!(
                    ab.homogeneous_degree(),
                    Some(a.degree() + b.degree()),
                    "degree additivity on {}",
                    g.serialize()
                );
            }

            let raw = vec![
                (a, rat_int(1)),
                (b, rat_int(-2)),
                (c, rat_int(3)),
            ];
            let first = LpaElement::from_raw_terms_with(&g, raw.clone(), RewriteStrategy::FirstTerm);
            let last = LpaElement::from_raw_terms_with(&g, raw, RewriteStrategy::LastTerm);
            assert_eq!(first, last, "strategy confluence on {}", g.serialize());
        }
    }
    finish("criterion 12 (rewriting soundness, 909 × 500 triples)", started, None);
}
