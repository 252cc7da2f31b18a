//! Command-line entry points: input dispatch, the analysis batteries
//! for each input kind, report serialization, and the embedded
//! worked-example verifier.
//!
//! Exit codes signal tool failure only (unreadable file, parse error,
//! blown resource budget, or a broken embedded fixture).  Mathematical
//! verdicts — including negative ones — exit 0 and live in the report.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cslp::{
    self, full_idempotent_certificate, lpa_corner, matrix_ring, relations_check,
    CertificateSearch, CslpDescriptor, CslpHandle, CslpInstance,
};
use crate::error::{Error, Result};
use crate::grading::{
    annihilator_of_degree_one, classify, generated_ideal, idempotent_chain, induced_system,
    semi_full_check, GradedProperty, IdealSemantics, VerdictStatus,
};
use crate::graph::DirectedGraph;
use crate::lpa::{GradedSlice, LpaElement};
use crate::rational::rat_int;
use crate::report::AnalysisReport;
use crate::rsystem::rep::{standard_rep, validate_covariant_rep};
use crate::rsystem::{
    condition_fs_prime, ideal_checks, parse_system, standard_system, strong_sufficiency,
    surjectivity_witnesses, validate_system, SufficiencyVerdict, DEFAULT_TENSOR_CAP,
};

#[derive(Parser, Debug)]
#[command(
    name = "zgrade",
    version,
    about = "Graded-structure analyzer for path algebras, pairing systems, and corner skew Laurent rings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Which degree-zero ideal semantics the ideal-comparison checks use.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemanticsArg {
    /// Ideal under the coefficient subring acting on both sides.
    Bimodule,
    /// Two-sided ideal of the full degree-zero component.
    Ideal,
    /// Run both and note any divergence.
    Both,
}

impl SemanticsArg {
    fn selected(self) -> Vec<IdealSemantics> {
        match self {
            SemanticsArg::Bimodule => vec![IdealSemantics::CoefficientBimodule],
            SemanticsArg::Ideal => vec![IdealSemantics::TwoSided],
            SemanticsArg::Both => vec![
                IdealSemantics::CoefficientBimodule,
                IdealSemantics::TwoSided,
            ],
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Text,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze a directed-graph file: grading classification,
    /// idempotent chain, degree-one annihilator, and semi-fullness of
    /// the induced pairing system.
    AnalyzeGraph {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        degree_bound: usize,
        #[arg(long, default_value_t = 8)]
        length_bound: usize,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Both)]
        semantics: SemanticsArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Analyze a pairing-system file: axioms, finite-rank identity
    /// operators, the strong-grading sufficiency criterion, and unit
    /// witnesses for tensor powers.
    AnalyzeSystem {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree_bound: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Analyze a corner skew Laurent descriptor: defining relations,
    /// idempotent fullness, graded classification, and the free-word
    /// oracle cross-check.
    AnalyzeCslp {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree_bound: usize,
        #[arg(long, default_value_t = 6)]
        word_bound: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Re-run the embedded worked examples and print one pass/fail line
    /// per fixture.
    VerifyExamples {
        /// Evaluate the chain ideal-membership fixture under two-sided
        /// semantics instead of the default coefficient-bimodule table.
        #[arg(long)]
        strict_two_sided: bool,
        /// List fixture names without running anything.
        #[arg(long)]
        list: bool,
    },
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: &Command) -> Result<ExitCode> {
    match cmd {
        Command::AnalyzeGraph {
            file,
            degree_bound,
            length_bound,
            semantics,
            format,
        } => {
            let report = analyze_graph_report(file, *degree_bound, *length_bound, *semantics)?;
            print_report(&report, *format);
            Ok(ExitCode::SUCCESS)
        }
        Command::AnalyzeSystem {
            file,
            degree_bound,
            format,
        } => {
            let report = analyze_system_report(file, *degree_bound)?;
            print_report(&report, *format);
            Ok(ExitCode::SUCCESS)
        }
        Command::AnalyzeCslp {
            file,
            degree_bound,
            word_bound,
            format,
        } => {
            let report = analyze_cslp_report(file, *degree_bound, *word_bound)?;
            print_report(&report, *format);
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyExamples {
            strict_two_sided,
            list,
        } => {
            if *list {
                for name in fixture_names() {
                    println!("{name}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let (lines, all_ok) = verify_examples_lines(*strict_two_sided)?;
            for line in lines {
                println!("{line}");
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn print_report(report: &AnalysisReport, format: FormatArg) {
    match format {
        FormatArg::Text => print!("{}", report.to_text()),
        FormatArg::Tsv => print!("{}", report.to_tsv()),
    }
}

// ---------------------------------------------------------------------
// Graph battery
// ---------------------------------------------------------------------

pub fn analyze_graph_report(
    path: &Path,
    degree_bound: usize,
    length_bound: usize,
    semantics: SemanticsArg,
) -> Result<AnalysisReport> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let g = Arc::new(DirectedGraph::parse(&text)?);
    let slice = GradedSlice::build(&g, degree_bound, length_bound);
    let mut report = AnalysisReport::new(
        &path.display().to_string(),
        &bytes,
        vec![
            ("degree-bound".into(), slice.degree_bound),
            ("length-bound".into(), slice.length_bound),
        ],
    );
    if slice.exact {
        report.push_note("acyclic graph: the recorded slice is the whole algebra; all spans are exact");
    } else {
        report.push_note("graph has cycles: spans are truncated at the recorded bounds; negative span verdicts stay inconclusive");
    }

    for v in classify(&slice)? {
        report.push_verdict(&v);
    }

    let ann = annihilator_of_degree_one(&slice)?;
    report.push_verdict(&ann.pre_cp);
    let sink_names: Vec<&str> = ann
        .sink_vertices
        .iter()
        .map(|&v| g.vertex_name(v))
        .collect();
    report.push_note(&format!(
        "degree-one annihilator inside degree zero: span of sinks {{{}}}{}",
        sink_names.join(", "),
        if ann.linear_route_used {
            "; confirmed by the kernel computation"
        } else {
            "; vertex formula only (truncated slice)"
        }
    ));

    let chain = idempotent_chain(&slice, slice.degree_bound.min(4));
    if chain.ok {
        let rendered: Vec<String> = chain
            .eps
            .iter()
            .enumerate()
            .map(|(i, e)| format!("eps_{i} = {}", e.display()))
            .collect();
        report.push_note(&format!("idempotent chain verified: {}", rendered.join("; ")));
    } else {
        report.push_note(&format!(
            "idempotent chain checks failed: {}",
            chain.failures.join("; ")
        ));
    }

    let k_max = degree_bound.min(3);
    if slice.exact {
        let induced = induced_system(&slice)?;
        let mut per_semantics = Vec::new();
        for sem in semantics.selected() {
            let verdicts = semi_full_check(
                &slice,
                &induced.system,
                &induced.rep,
                k_max,
                sem,
                DEFAULT_TENSOR_CAP,
            )?;
            for v in &verdicts {
                report.push_verdict(v);
            }
            per_semantics.push((sem, verdicts));
        }
        if per_semantics.len() == 2 {
            let (_, a) = &per_semantics[0];
            let (_, b) = &per_semantics[1];
            for (va, vb) in a.iter().zip(b.iter()) {
                if va.status != vb.status {
                    report.push_note(&format!(
                        "ideal-semantics divergence: {} under {}, but {} under {}",
                        va.witness,
                        per_semantics[0].0.label(),
                        vb.witness,
                        per_semantics[1].0.label()
                    ));
                }
            }
        }
    } else {
        report.push_line(
            "semi-full",
            "inconclusive",
            &format!("k<={k_max}: no induced pairing system on a cyclic graph; truncated comparison is not decisive"),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------
// System battery
// ---------------------------------------------------------------------

pub fn analyze_system_report(path: &Path, degree_bound: usize) -> Result<AnalysisReport> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let sys = parse_system(&text)?;
    let mut report = AnalysisReport::new(
        &path.display().to_string(),
        &bytes,
        vec![("degree-bound".into(), degree_bound)],
    );
    report.push_note(&format!(
        "ring dimension {}, module dimensions {} and {}",
        sys.ring.dim, sys.p.dim, sys.q.dim
    ));

    if let Err(msg) = validate_system(&sys) {
        report.push_line("system-axioms", "certified_no", &msg);
        report.push_note("axioms failed; the remaining battery was skipped");
        return Ok(report);
    }
    report.push_line(
        "system-axioms",
        "certified_yes",
        "bimodule actions and pairing balance verified on all basis tuples",
    );
    report.push_line(
        "unital-ring",
        if sys.is_unital() {
            "certified_yes"
        } else {
            "certified_no"
        },
        "two-sided identity search over the ring basis",
    );

    let fs = condition_fs_prime(&sys)?;
    report.push_line(
        "finite-rank-identities",
        if fs.holds { "certified_yes" } else { "certified_no" },
        "identity-membership route and basis-fixing route agree",
    );

    let ring_basis: Vec<Vec<crate::rational::Rat>> =
        (0..sys.ring.dim).map(|i| sys.ring.basis_vec(i)).collect();
    match strong_sufficiency(&sys, &ring_basis) {
        Ok(SufficiencyVerdict::CertifiedYes {
            unit_over_ideal,
            image_dim,
        }) => report.push_line(
            "strong-sufficiency",
            "certified_yes",
            &format!(
                "unit decomposes over {} ideal basis elements; pairing image spans the ring (dim {image_dim})",
                unit_over_ideal.len()
            ),
        ),
        Ok(SufficiencyVerdict::HypothesesNotMet(missing)) => report.push_line(
            "strong-sufficiency",
            "inconclusive",
            &format!("criterion is sufficient only; unmet: {}", missing.join("; ")),
        ),
        Err(Error::Precondition(msg)) => {
            report.push_line("strong-sufficiency", "inconclusive", &msg)
        }
        Err(e) => return Err(e),
    }

    match ideal_checks(&sys, &ring_basis) {
        Ok(ideal) => report.push_line(
            "ideal-compatibility",
            if ideal.psi_compatible && ideal.faithful {
                "certified_yes"
            } else {
                "certified_no"
            },
            &format!(
                "whole ring as ideal: pairing-compatible {}, faithful {}",
                ideal.psi_compatible, ideal.faithful
            ),
        ),
        Err(Error::Precondition(msg)) | Err(Error::Input(msg)) => {
            report.push_line("ideal-compatibility", "inconclusive", &msg)
        }
        Err(e) => return Err(e),
    }

    if sys.is_unital() {
        for n in 1..=degree_bound.min(3) {
            match surjectivity_witnesses(&sys, n, DEFAULT_TENSOR_CAP)? {
                Some(w) => report.push_line(
                    "unit-witnesses",
                    "certified_yes",
                    &format!(
                        "n={n}: {} tensor pairs pair to the ring unit (re-verified)",
                        w.pairs.len()
                    ),
                ),
                None => report.push_line(
                    "unit-witnesses",
                    "inconclusive",
                    &format!("n={n}: pairing does not reach the unit"),
                ),
            }
        }
    } else {
        report.push_note("non-unital system: unit witnesses skipped");
    }
    Ok(report)
}

// ---------------------------------------------------------------------
// Corner skew Laurent battery
// ---------------------------------------------------------------------

/// Builds an instance from a parsed descriptor, resolving a referenced
/// graph file relative to `base_dir`.
pub fn load_cslp_instance(desc: &CslpDescriptor, base_dir: &Path) -> Result<CslpInstance> {
    match desc {
        CslpDescriptor::Matrix { dim, conjugator } => Ok(CslpInstance::Matrix(CslpHandle::new(
            matrix_ring(*dim, conjugator)?,
        )?)),
        CslpDescriptor::LpaCorner {
            graph_path,
            isometry,
        } => {
            let resolved = base_dir.join(graph_path);
            let text = std::fs::read_to_string(&resolved)?;
            let g = Arc::new(DirectedGraph::parse(&text)?);
            Ok(CslpInstance::Corner(CslpHandle::new(lpa_corner(
                &g, isometry,
            )?)?))
        }
    }
}

pub fn analyze_cslp_report(
    path: &Path,
    degree_bound: usize,
    word_bound: usize,
) -> Result<AnalysisReport> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let desc = cslp::parse_descriptor(&text)?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    let instance = load_cslp_instance(&desc, base_dir)?;
    let mut report = AnalysisReport::new(
        &path.display().to_string(),
        &bytes,
        vec![
            ("degree-bound".into(), degree_bound),
            ("word-bound".into(), word_bound),
        ],
    );
    report.push_note(&instance.describe());

    let relations = instance.relations()?;
    report.push_line(
        "defining-relations",
        if relations.ok {
            "certified_yes"
        } else {
            "certified_no"
        },
        &if relations.ok {
            "generator relations, commutation moves, and associativity hold on sampled coefficients".to_string()
        } else {
            relations.failures.join("; ")
        },
    );

    for v in instance.classify(degree_bound, word_bound)? {
        report.push_verdict(&v);
    }

    let checked = instance.oracle_agreement(200, 6, 0xa9ce_55ed)?;
    report.push_note(&format!(
        "free-word oracle agreed with the normal-form engine on {checked} random words"
    ));
    if let Some(note) = instance.shifted_idempotent_note(degree_bound.max(2))? {
        report.push_note(&note);
    }
    Ok(report)
}

// ---------------------------------------------------------------------
// Embedded worked examples
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FixtureStatus {
    Pass,
    Discrepancy,
    Fail,
}

struct FixtureResult {
    status: FixtureStatus,
    detail: String,
    info: Vec<String>,
}

impl FixtureResult {
    fn pass(detail: impl Into<String>) -> Self {
        FixtureResult {
            status: FixtureStatus::Pass,
            detail: detail.into(),
            info: Vec::new(),
        }
    }

    fn fail(problems: &[String]) -> Self {
        FixtureResult {
            status: FixtureStatus::Fail,
            detail: problems.join("; "),
            info: Vec::new(),
        }
    }
}

fn ensure(cond: bool, msg: &str, problems: &mut Vec<String>) {
    if !cond {
        problems.push(msg.to_string());
    }
}

fn arrow_graph() -> Arc<DirectedGraph> {
    Arc::new(
        DirectedGraph::build(&["v1", "v2"], &[("f1", "v1", "v2")])
            .expect("static fixture graph"),
    )
}

fn chain_graph() -> Arc<DirectedGraph> {
    Arc::new(
        DirectedGraph::build(
            &["v1", "v2", "v3", "v4", "v5"],
            &[
                ("f1", "v2", "v1"),
                ("f2", "v2", "v3"),
                ("f3", "v4", "v3"),
                ("f4", "v5", "v4"),
            ],
        )
        .expect("static fixture graph"),
    )
}

fn loop_graph() -> Arc<DirectedGraph> {
    Arc::new(DirectedGraph::build(&["v"], &[("e", "v", "v")]).expect("static fixture graph"))
}

fn rose_graph() -> Arc<DirectedGraph> {
    Arc::new(
        DirectedGraph::build(&["v"], &[("g1", "v", "v"), ("g2", "v", "v")])
            .expect("static fixture graph"),
    )
}

/// Degree-one pairing values of the standard system, pushed into the
/// algebra through the standard representation; these generate the
/// degree-one coefficient ideal.
fn pairing_value_gens(g: &Arc<DirectedGraph>) -> Vec<LpaElement> {
    let sys = standard_system(g);
    let rep = standard_rep(g);
    let mut gens = Vec::new();
    for i in 0..sys.p.dim {
        for j in 0..sys.q.dim {
            gens.push(rep.apply_sigma(&sys.psi[i][j]));
        }
    }
    gens
}

fn fixture_arrow_degree_products(_strict: bool) -> Result<FixtureResult> {
    let g = arrow_graph();
    let slice = GradedSlice::build(&g, 4, 8);
    let mut problems = Vec::new();
    let f1 = LpaElement::edge(&g, 0);
    let v1 = LpaElement::vertex(&g, 0);
    let v2 = LpaElement::vertex(&g, 1);
    ensure(f1.multiply(&f1.star())? == v1, "f1.f1* != v1", &mut problems);
    ensure(f1.star().multiply(&f1)? == v2, "f1*.f1 != v2", &mut problems);
    ensure(slice.dim(0) == 2, "degree-zero dimension != 2", &mut problems);
    let gens = pairing_value_gens(&g);
    for sem in [IdealSemantics::CoefficientBimodule, IdealSemantics::TwoSided] {
        let ideal = generated_ideal(&slice, &gens, sem)?;
        ensure(
            ideal.span.dim() == 1 && ideal.span.contains(&v2) && !ideal.span.contains(&v1),
            &format!("degree-one ideal under {} is not span{{v2}}", sem.label()),
            &mut problems,
        );
    }
    let induced = induced_system(&slice)?;
    for sem in [IdealSemantics::CoefficientBimodule, IdealSemantics::TwoSided] {
        let verdicts =
            semi_full_check(&slice, &induced.system, &induced.rep, 1, sem, DEFAULT_TENSOR_CAP)?;
        ensure(
            verdicts
                .iter()
                .all(|v| v.status == VerdictStatus::CertifiedYes),
            &format!("semi-fullness fails for k<=1 under {}", sem.label()),
            &mut problems,
        );
    }
    if problems.is_empty() {
        Ok(FixtureResult::pass(
            "f1.f1* = v1, f1*.f1 = v2; degree-one ideal is span{v2}; semi-full for k<=1 under both semantics",
        ))
    } else {
        Ok(FixtureResult::fail(&problems))
    }
}

fn fixture_chain_spanning_dimensions(_strict: bool) -> Result<FixtureResult> {
    let g = chain_graph();
    let slice = GradedSlice::build(&g, 4, 8);
    let mut problems = Vec::new();
    let expected = [(0i64, 8usize), (1, 5), (-1, 5), (2, 1), (-2, 1), (3, 0), (-3, 0)];
    for (d, dim) in expected {
        ensure(
            slice.dim(d) == dim,
            &format!("dim at degree {d} is {} (expected {dim})", slice.dim(d)),
            &mut problems,
        );
    }
    if problems.is_empty() {
        Ok(FixtureResult::pass(
            "component dimensions 8 / 5 / 5 / 1 / 1 with zero beyond degree 2",
        ))
    } else {
        Ok(FixtureResult::fail(&problems))
    }
}

fn chain_f2f2star(g: &Arc<DirectedGraph>) -> Result<LpaElement> {
    let f2 = LpaElement::edge(g, 1);
    f2.multiply(&f2.star())
}

fn fixture_chain_ideal_membership(strict: bool) -> Result<FixtureResult> {
    let g = chain_graph();
    let slice = GradedSlice::build(&g, 4, 8);
    let gens = pairing_value_gens(&g);
    let witness = chain_f2f2star(&g)?;
    let mut problems = Vec::new();

    let bimodule = generated_ideal(&slice, &gens, IdealSemantics::CoefficientBimodule)?;
    for v in [0usize, 2, 3] {
        ensure(
            bimodule.span.contains(&LpaElement::vertex(&g, v)),
            &format!("bimodule ideal misses vertex index {v}"),
            &mut problems,
        );
    }
    ensure(bimodule.span.dim() == 3, "bimodule ideal dimension != 3", &mut problems);
    let bimodule_has_witness = bimodule.span.contains(&witness);

    let two_sided = generated_ideal(&slice, &gens, IdealSemantics::TwoSided)?;
    let two_sided_has_witness = two_sided.span.contains(&witness);
    ensure(two_sided.span.dim() == 6, "two-sided closure dimension != 6", &mut problems);

    if !problems.is_empty() {
        return Ok(FixtureResult::fail(&problems));
    }
    if strict {
        return Ok(FixtureResult {
            status: FixtureStatus::Discrepancy,
            detail: format!(
                "under two-sided semantics f2.f2* membership is {two_sided_has_witness} (closure dim 6); the coefficient-bimodule table expects exclusion and does not transfer"
            ),
            info: vec![
                "the exclusion f2.f2* \u{2209} I_1 is a statement about the coefficient-bimodule ideal; rerun without --strict-two-sided for that reading".to_string(),
            ],
        });
    }
    if bimodule_has_witness {
        return Ok(FixtureResult::fail(&[
            "f2.f2* unexpectedly lies in the coefficient-bimodule ideal".to_string()
        ]));
    }
    Ok(FixtureResult {
        status: FixtureStatus::Pass,
        detail: "coefficient-bimodule degree-one ideal is span{v1, v3, v4} and excludes f2.f2*"
            .to_string(),
        info: vec![format!(
            "two-sided closure has dimension 6 and f2.f2* membership is {two_sided_has_witness}; divergence between the semantics is expected and documented"
        )],
    })
}

fn fixture_chain_idempotent_chain(_strict: bool) -> Result<FixtureResult> {
    let g = chain_graph();
    let slice = GradedSlice::build(&g, 4, 8);
    let chain = idempotent_chain(&slice, 2);
    let mut problems = chain.failures.clone();
    let v = |i: usize| LpaElement::vertex(&g, i);
    let eps1 = v(1).plus(&v(3)).plus(&v(4));
    ensure(chain.eps[0] == LpaElement::one(&g), "eps_0 != 1", &mut problems);
    ensure(chain.eps[1] == eps1, "eps_1 != v2+v4+v5", &mut problems);
    ensure(chain.eps[2] == v(4), "eps_2 != v5", &mut problems);
    ensure(chain.ok, "chain self-checks failed", &mut problems);
    if problems.is_empty() {
        Ok(FixtureResult::pass(
            "eps_0 = 1, eps_1 = v2+v4+v5, eps_2 = v5; idempotence, ordering, and identity action verified",
        ))
    } else {
        Ok(FixtureResult::fail(&problems))
    }
}

fn fixture_loop_strong_grading(_strict: bool) -> Result<FixtureResult> {
    let g = loop_graph();
    let slice = GradedSlice::build(&g, 4, 8);
    let verdicts = classify(&slice)?;
    let strongly = verdicts
        .iter()
        .find(|v| v.property == GradedProperty::Strongly)
        .expect("classification always reports strong grading");
    if strongly.status == VerdictStatus::CertifiedYes {
        Ok(FixtureResult::pass(
            "single loop certified strongly graded with verified unit decompositions",
        ))
    } else {
        Ok(FixtureResult::fail(&[format!(
            "expected certified_yes, got {} ({})",
            strongly.status.label(),
            strongly.witness
        )]))
    }
}

fn fixture_arrow_grading_classification(_strict: bool) -> Result<FixtureResult> {
    let g = arrow_graph();
    let slice = GradedSlice::build(&g, 4, 8);
    let verdicts = classify(&slice)?;
    let mut problems = Vec::new();
    let by = |p: GradedProperty| verdicts.iter().find(|v| v.property == p);
    ensure(
        by(GradedProperty::Strongly).map(|v| v.status) == Some(VerdictStatus::CertifiedNo),
        "strong grading should be refuted at the sink",
        &mut problems,
    );
    ensure(
        by(GradedProperty::EpsilonStrongly).map(|v| v.status) == Some(VerdictStatus::CertifiedYes),
        "epsilon-strong grading should be certified",
        &mut problems,
    );
    if problems.is_empty() {
        Ok(FixtureResult::pass(
            "arrow graph: strongly certified_no at the sink, epsilon-strongly certified_yes",
        ))
    } else {
        Ok(FixtureResult::fail(&problems))
    }
}

fn fixture_chain_representation_relations(_strict: bool) -> Result<FixtureResult> {
    let g = chain_graph();
    let sys = standard_system(&g);
    let rep = standard_rep(&g);
    let rpt = validate_covariant_rep(&sys, &rep, None, 4)?;
    if rpt.axioms_ok && rpt.graded {
        Ok(FixtureResult::pass(
            "generator relation families hold on every basis pair; representation is graded",
        ))
    } else {
        Ok(FixtureResult::fail(&rpt.failures))
    }
}

fn fixture_laurent_matrix_instance(_strict: bool) -> Result<FixtureResult> {
    let ring = matrix_ring(2, &[rat_int(0), rat_int(1), rat_int(1), rat_int(0)])?;
    let h = CslpHandle::new(ring)?;
    let mut problems = Vec::new();
    let relations = relations_check(&h)?;
    ensure(relations.ok, "defining relations failed", &mut problems);
    let verdicts = cslp::classify_cslp(&h, 3, 4)?;
    let by = |p: GradedProperty| verdicts.iter().find(|v| v.property == p).map(|v| v.status);
    ensure(
        by(GradedProperty::Strongly) == Some(VerdictStatus::CertifiedYes),
        "strong grading should be certified",
        &mut problems,
    );
    ensure(
        by(GradedProperty::Artinian) == Some(VerdictStatus::CertifiedNo),
        "artinian should be refuted",
        &mut problems,
    );
    ensure(
        by(GradedProperty::Noetherian) == Some(VerdictStatus::Inconclusive),
        "noetherian should be delegated to the coefficient ring",
        &mut problems,
    );
    if problems.is_empty() {
        Ok(FixtureResult::pass(
            "matrix instance: relations pass, strongly certified_yes, artinian certified_no (t-^n t+^n = 1 up to n = 5)",
        ))
    } else {
        Ok(FixtureResult::fail(&problems))
    }
}

fn fixture_laurent_corner_instance(_strict: bool) -> Result<FixtureResult> {
    let g = rose_graph();
    let h = CslpHandle::new(lpa_corner(&g, "g1")?)?;
    let mut problems = Vec::new();
    let ge = LpaElement::edge(&g, 0);
    let e = ge.multiply(&ge.star())?;
    ensure(
        h.el_multiply(&h.el_t_plus(1), &h.el_t_minus(1))? == h.el_coef(&e),
        "t+ t- != g1.g1*",
        &mut problems,
    );
    ensure(
        h.el_multiply(&h.el_t_minus(1), &h.el_t_plus(1))? == h.el_one(),
        "t- t+ != 1",
        &mut problems,
    );
    match full_idempotent_certificate(&h, 2)? {
        CertificateSearch::Found(c) => {
            let single = c.terms.len() == 1
                && c.terms[0].1 == LpaElement::star_edge(&g, 0)
                && c.terms[0].2 == LpaElement::edge(&g, 0);
            ensure(single, "certificate is not 1 = g1*.e.g1", &mut problems);
        }
        CertificateSearch::NotFound { .. } => {
            problems.push("no full-idempotent certificate at word bound 2".to_string())
        }
    }
    let verdicts = cslp::classify_cslp(&h, 2, 4)?;
    let by = |p: GradedProperty| verdicts.iter().find(|v| v.property == p).map(|v| v.status);
    ensure(
        by(GradedProperty::Strongly) == Some(VerdictStatus::CertifiedYes),
        "strong grading should be certified",
        &mut problems,
    );
    ensure(
        by(GradedProperty::EpsilonStrongly) == Some(VerdictStatus::CertifiedYes),
        "epsilon units should be found",
        &mut problems,
    );
    let alpha_e = ge.multiply(&e)?.multiply(&ge.star())?;
    ensure(
        h.el_multiply(&h.el_t_plus(2), &h.el_t_minus(2))? == h.el_coef(&alpha_e),
        "t+^2 t-^2 != g1.g1.g1*.g1*",
        &mut problems,
    );
    if !problems.is_empty() {
        return Ok(FixtureResult::fail(&problems));
    }
    let note = CslpInstance::Corner(h)
        .shifted_idempotent_note(2)?
        .unwrap_or_else(|| "shifted idempotent unexpectedly equals e".to_string());
    Ok(FixtureResult {
        status: FixtureStatus::Pass,
        detail:
            "corner instance: t+t- = g1.g1*, t-t+ = 1, certificate 1 = g1*.e.g1 at word bound 2, degree-1 unit is 1"
                .to_string(),
        info: vec![note],
    })
}

type FixtureFn = fn(bool) -> Result<FixtureResult>;

fn fixtures() -> Vec<(&'static str, FixtureFn)> {
    vec![
        ("arrow-degree-products", fixture_arrow_degree_products),
        ("chain-spanning-dimensions", fixture_chain_spanning_dimensions),
        ("chain-ideal-membership", fixture_chain_ideal_membership),
        ("chain-idempotent-chain", fixture_chain_idempotent_chain),
        ("loop-strong-grading", fixture_loop_strong_grading),
        ("arrow-grading-classification", fixture_arrow_grading_classification),
        ("chain-representation-relations", fixture_chain_representation_relations),
        ("laurent-matrix-instance", fixture_laurent_matrix_instance),
        ("laurent-corner-instance", fixture_laurent_corner_instance),
    ]
}

pub fn fixture_names() -> Vec<&'static str> {
    fixtures().into_iter().map(|(name, _)| name).collect()
}

/// Runs every embedded fixture, returning the printable lines and
/// whether everything passed (discrepancies are informational, not
/// failures).
pub fn verify_examples_lines(strict_two_sided: bool) -> Result<(Vec<String>, bool)> {
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (name, f) in fixtures() {
        let result = f(strict_two_sided)?;
        let tag = match result.status {
            FixtureStatus::Pass => "PASS",
            FixtureStatus::Discrepancy => "DISCREPANCY",
            FixtureStatus::Fail => {
                all_ok = false;
                "FAIL"
            }
        };
        lines.push(format!("{tag}\t{name}\t{}", result.detail));
        for info in result.info {
            lines.push(format!("INFO\t{name}\t{info}"));
        }
    }
    Ok((lines, all_ok))
}
