//! The named check registry and the run harness.
//!
//! Every verifiable identity the workbench knows is registered here under a
//! stable name, with a one-line summary and a runner.  A runner receives the
//! shared [`Ctx`] (configuration plus the lazily built Hall algebra) and the
//! per-check options, and reports one of five outcomes: pass, fail (with the
//! offending basis classes), skip (a precondition such as an enumeration cap
//! or a scenario kind was not met), undecided (a bounded search ran out of
//! budget), or internal inconsistency (two independent computations of the
//! same quantity disagreed — this aborts the run with a distinct exit code).

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hallcore::{
    coproduct, express, identities, Cat, HallAlgebra, HallError, Verdict,
};
use crate::jordan;
use crate::par;
use crate::qcalc::{self, QSeries};
use crate::qtorus;
use crate::repfield::{self, IsoClass, RepError};
use crate::report::{CheckRecord, RunReport};
use crate::rootcox::{self, EulerLattice};
use crate::scalar::QMode;
use crate::scenario::{CheckRequest, RunConfig, ScenarioSpec};

// ============================== Outcomes ==============================

/// Result of one runner.
#[derive(Debug, Clone)]
pub enum Outcome {
    /// The identity held; the optional note records what was covered.
    Pass(Option<String>),
    /// The identity failed at the listed basis classes.
    Fail { message: String, support: Vec<String> },
    /// A precondition was not met; the run is not considered failed.
    Skip(String),
    /// The bounded computation could not settle the question.
    Undecided(String),
    /// Independent computations disagree — a bug, never swallowed.
    Inconsistent(String),
}

impl Outcome {
    fn pass() -> Self {
        Outcome::Pass(None)
    }

    fn pass_with(note: String) -> Self {
        Outcome::Pass(Some(note))
    }

    fn from_verdict(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Outcome::pass(),
            Verdict::Fail(d) => Outcome::Fail { message: d.message, support: d.support },
        }
    }

    fn from_verdict_with(v: Verdict, note: String) -> Self {
        match v {
            Verdict::Pass => Outcome::pass_with(note),
            Verdict::Fail(d) => Outcome::Fail { message: d.message, support: d.support },
        }
    }

    /// Oracle-style results: `Err(text)` is a counterexample report.
    fn from_oracle(r: Result<(), String>, note: String) -> Self {
        match r {
            Ok(()) => Outcome::pass_with(note),
            Err(msg) => Outcome::Fail { message: msg, support: Vec::new() },
        }
    }
}

/// Sorts machine errors into outcomes: unsupported requests and exceeded
/// enumeration caps are skips; everything else is an internal inconsistency.
fn classify(err: HallError) -> Outcome {
    match err {
        HallError::Unsupported(m) => Outcome::Skip(m),
        HallError::Rep(RepError::CapExceeded(m)) => {
            Outcome::Skip(format!("enumeration cap exceeded: {}", m))
        }
        HallError::Rep(RepError::NotHereditary(m)) => {
            Outcome::Skip(format!("needs a relation-free quiver: {}", m))
        }
        other => Outcome::Inconsistent(other.to_string()),
    }
}

// ============================== Context ==============================

/// Shared state for one run: the configuration and, when the scenario is a
/// module category, the truncated Hall algebra built from it.
pub struct Ctx {
    pub config: RunConfig,
    algebra: Option<Arc<HallAlgebra>>,
    /// Why no algebra is available (non-category scenario, or a build-time
    /// precondition failure such as an unsupported symbolic mode).
    algebra_reason: String,
}

impl Ctx {
    /// Builds the context.  A build-time internal inconsistency is fatal;
    /// any other build failure is recorded so that algebra-dependent checks
    /// skip with the reason.
    pub fn new(config: RunConfig) -> Result<Self, HallError> {
        let (algebra, algebra_reason) = match config.build_algebra() {
            Ok(Some(alg)) => (Some(Arc::new(alg)), String::new()),
            Ok(None) => (None, "the scenario does not carry a module category".to_string()),
            Err(e @ HallError::Inconsistent(_)) => return Err(e),
            Err(e) => (None, e.to_string()),
        };
        Ok(Ctx { config, algebra, algebra_reason })
    }

    fn algebra(&self) -> Result<&HallAlgebra, HallError> {
        match &self.algebra {
            Some(a) => Ok(a),
            None => Err(HallError::Unsupported(self.algebra_reason.clone())),
        }
    }

    /// The scenario's field cardinality, when it has one.
    fn scenario_p(&self) -> Option<u32> {
        match &self.config.scenario {
            ScenarioSpec::Quiver { p, .. } | ScenarioSpec::Jordan { p, .. } => Some(*p),
            _ => None,
        }
    }

    /// Coefficient mode for scenario-independent series checks.
    fn series_mode(&self) -> QMode {
        self.config.mode()
    }
}

type Runner = fn(&Ctx, &CheckRequest) -> Result<Outcome, HallError>;

/// A registered check: stable name, one-line summary, runner.
pub struct CheckDef {
    pub name: &'static str,
    pub summary: &'static str,
    runner: Runner,
}

// ============================ Small helpers ============================

fn simple_indices(alg: &HallAlgebra) -> Vec<usize> {
    (0..alg.cat().n_simples()).collect()
}

/// Indecomposable indices of a quiver scenario's table; empty for other
/// categories.
fn indec_indices(alg: &HallAlgebra) -> Vec<usize> {
    match alg.cat() {
        Cat::Quiver(scn) => (0..scn.table.len()).collect(),
        Cat::Jordan(jc) => (0..jc.max_len).collect(),
    }
}

fn grade_total(alg: &HallAlgebra, c: &IsoClass) -> usize {
    alg.cat().grade(c).iter().sum()
}

/// A lattice for the configured scenario: explicit rank-2 weights, or the
/// Euler form of a hereditary quiver.
fn lattice_for(ctx: &Ctx) -> Result<EulerLattice, HallError> {
    match &ctx.config.scenario {
        ScenarioSpec::ValuedRank2 { a0, a1, d0, d1 } => {
            Ok(EulerLattice::rank2(*a0, *a1, *d0, *d1))
        }
        ScenarioSpec::Quiver { name, p } => {
            let scn = repfield::fixtures::by_name(name, *p).ok_or_else(|| {
                HallError::Unsupported(format!("unknown quiver scenario {:?}", name))
            })?;
            if !scn.spec.is_hereditary() {
                return Err(HallError::Unsupported(
                    "lattice combinatorics needs a relation-free quiver".into(),
                ));
            }
            Ok(EulerLattice::from_quiver(&scn.spec))
        }
        _ => Err(HallError::Unsupported(
            "needs a rank-2 weight pair or a hereditary quiver scenario".into(),
        )),
    }
}

// =========================== Algebra runners ===========================

fn run_reineke(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(identities::verify_reineke(alg)?))
}

fn run_riedtmann(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    let Cat::Quiver(scn) = alg.cat() else {
        return Ok(Outcome::Skip(
            "the extension-counting comparison runs on quiver scenarios".into(),
        ));
    };
    let max_total = req.opt_usize("max_total").unwrap_or(4);
    let within = alg.cat().classes_up_to(&vec![max_total; alg.cat().grade_rank()]);
    let classes: Vec<IsoClass> = within
        .into_iter()
        .filter(|c| grade_total(alg, c) <= max_total)
        .collect();
    let mut checked = 0u64;
    for k in &classes {
        let gk = alg.cat().grade(k);
        for m in &classes {
            let gm = alg.cat().grade(m);
            if gm.iter().zip(&gk).any(|(a, b)| a > b) {
                continue;
            }
            for n in &classes {
                let gn = alg.cat().grade(n);
                if (0..gk.len()).any(|i| gm[i] + gn[i] != gk[i]) {
                    continue;
                }
                if !repfield::riedtmann_check(scn, m, n, k)? {
                    return Ok(Outcome::Fail {
                        message: format!(
                            "count and Aut/Hom/Ext formula disagree at ({}, {}, {})",
                            alg.label(m),
                            alg.label(n),
                            alg.label(k)
                        ),
                        support: vec![format!(
                            "{} ⊂ {} with quotient {}",
                            alg.label(n),
                            alg.label(k),
                            alg.label(m)
                        )],
                    });
                }
                checked += 1;
            }
        }
    }
    Ok(Outcome::pass_with(format!(
        "{} triples with total dimension ≤ {}",
        checked, max_total
    )))
}

fn run_source_order(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(identities::source_order_factorization(alg)?))
}

fn run_normal_order(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(identities::normal_order_factorization(alg)?))
}

fn run_pentagon_two(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(identities::two_simples_pentagon(alg)?))
}

fn run_pentagon_split(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    let n = alg.cat().n_simples();
    if n < 2 {
        return Ok(Outcome::Skip("needs at least two vertices".into()));
    }
    let cuts: Vec<usize> = match req.opt_usize("cut") {
        Some(c) => vec![c],
        None => (0..n - 1).collect(),
    };
    let mut verdicts = Vec::new();
    for &c in &cuts {
        verdicts.push(identities::split_pentagon(alg, c)?);
    }
    Ok(Outcome::from_verdict_with(
        Verdict::all(verdicts),
        format!("{} vertex cut(s)", cuts.len()),
    ))
}

fn run_pentagon_square(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(identities::square_pentagon(alg)?))
}

/// Topological order of indecomposables under "earlier never extends by
/// later": returns singleton blocks, or `None` when the extension graph has
/// a cycle.
fn triangular_blocks(alg: &HallAlgebra) -> Result<Option<Vec<Vec<usize>>>, HallError> {
    let idxs = indec_indices(alg);
    let n = idxs.len();
    // Edge j → i when Ext¹(I_i, I_j) ≠ 0: i must come after j.
    let mut indegree = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ai, &i) in idxs.iter().enumerate() {
        for (aj, &j) in idxs.iter().enumerate() {
            if ai == aj {
                continue;
            }
            let ext =
                alg.cat().ext_dim(&IsoClass::single(i), &IsoClass::single(j))?;
            if ext != 0 {
                succ[aj].push(ai);
                indegree[ai] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(idxs[v]);
        for &w in &succ[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    if order.len() < n {
        return Ok(None);
    }
    Ok(Some(order.into_iter().map(|i| vec![i]).collect()))
}

fn run_triangular(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    let max_pairs = req.opt_usize("max_pairs").unwrap_or(64);
    let Some(blocks) = triangular_blocks(alg)? else {
        return Ok(Outcome::Skip(
            "the indecomposables admit no extension-triangular order".into(),
        ));
    };
    Ok(Outcome::from_verdict_with(
        identities::triangular_products(alg, &blocks, max_pairs)?,
        format!("{} ordered blocks", blocks.len()),
    ))
}

fn run_serre(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    let simples = simple_indices(alg);
    if simples.len() < 2 {
        return Ok(Outcome::Skip("needs at least two simple classes".into()));
    }
    let mut verdicts = Vec::new();
    let mut pairs = 0usize;
    for i in 0..simples.len() {
        for j in (i + 1)..simples.len() {
            verdicts.push(identities::serre_relations(alg, i, j)?);
            pairs += 1;
        }
    }
    Ok(Outcome::from_verdict_with(
        Verdict::all(verdicts),
        format!("{} simple pairs", pairs),
    ))
}

fn run_fund_rel(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    let mut verdicts = Vec::new();
    let mut pairs = 0usize;
    for e_idx in indec_indices(alg) {
        for s in simple_indices(alg) {
            let m = alg.cat().simple_class(s)?;
            if IsoClass::single(e_idx) == m {
                continue;
            }
            match identities::fund_rel(alg, e_idx, &m) {
                Ok(v) => {
                    verdicts.push(v);
                    pairs += 1;
                }
                // Neither one-sided extension hypothesis held for this pair.
                Err(HallError::Unsupported(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    if pairs == 0 {
        return Ok(Outcome::Skip(
            "no pair satisfies the one-sided extension-vanishing hypothesis".into(),
        ));
    }
    Ok(Outcome::from_verdict_with(
        Verdict::all(verdicts),
        format!("{} (brick, simple) pairs", pairs),
    ))
}

fn run_conjugation(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    let mut verdicts = Vec::new();
    let mut pairs = 0usize;
    for e_idx in indec_indices(alg) {
        for s in simple_indices(alg) {
            let m = alg.cat().simple_class(s)?;
            if IsoClass::single(e_idx) == m {
                continue;
            }
            match identities::conjugation_check(alg, e_idx, &m) {
                Ok((v, _summary)) => {
                    verdicts.push(v);
                    pairs += 1;
                }
                Err(HallError::Unsupported(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    if pairs == 0 {
        return Ok(Outcome::Skip("no rigid brick/simple pair is available".into()));
    }
    Ok(Outcome::from_verdict_with(
        Verdict::all(verdicts),
        format!("{} (brick, simple) pairs", pairs),
    ))
}

fn run_exp_add(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    let mut verdicts = Vec::new();
    let mut bricks = 0usize;
    for e_idx in indec_indices(alg) {
        match identities::exp_add_formula(alg, e_idx) {
            Ok(v) => {
                verdicts.push(v);
                bricks += 1;
            }
            Err(HallError::Unsupported(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if bricks == 0 {
        return Ok(Outcome::Skip("no rigid brick available".into()));
    }
    Ok(Outcome::from_verdict_with(Verdict::all(verdicts), format!("{} bricks", bricks)))
}

fn run_grouplike(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(coproduct::grouplike_check(alg)?))
}

fn run_green(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(coproduct::green_check(alg)?))
}

fn run_coassoc(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(coproduct::coassociativity_check(alg)?))
}

fn run_express(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(express::roundtrip_check(alg)?))
}

fn run_key_identities(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    let seed = req.opt_i64("seed").unwrap_or(0xC0FFEE) as u64;
    let r_max = req.opt_usize("r_max").unwrap_or(2);
    let trials = req.opt_usize("trials").unwrap_or(2);
    Ok(Outcome::from_verdict_with(
        identities::key_identities(alg, seed, r_max, trials)?,
        format!("{} trials, chain length ≤ {}", trials, r_max),
    ))
}

fn run_associativity(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    let seed = req.opt_i64("seed").unwrap_or(0xBEEF) as u64;
    let trials = req.opt_usize("trials").unwrap_or(4);
    Ok(Outcome::from_verdict_with(
        identities::associativity_audit(alg, seed, trials)?,
        format!("{} random triples", trials),
    ))
}

fn run_steinitz(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(identities::steinitz_check(alg)?))
}

fn run_phi_hom(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let max_total = req.opt_usize("max_total").unwrap_or(4);
    if let Ok(alg) = ctx.algebra() {
        if matches!(alg.cat(), Cat::Jordan(_)) && matches!(alg.mode(), QMode::At(_)) {
            return Ok(Outcome::from_verdict_with(
                identities::phi_hom_check(alg, max_total)?,
                format!("pairs with total weight ≤ {}", max_total),
            ));
        }
    }
    // Fall back to the symmetric-function route, independent of the algebra.
    let p = ctx.scenario_p().unwrap_or(2);
    Ok(Outcome::from_oracle(
        jordan::check_phi_multiplicative(p, max_total),
        format!("polynomial route at p = {}, total weight ≤ {}", p, max_total),
    ))
}

// ===================== Symmetric-function runners =====================

fn run_hl_inverse(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let _ = ctx;
    let r_max = req.opt_usize("r_max").unwrap_or(6);
    Ok(Outcome::from_oracle(
        jordan::check_hl_inverse_identity(r_max),
        format!("degrees ≤ {}", r_max),
    ))
}

fn run_hl_complete(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let _ = ctx;
    let r_max = req.opt_usize("r_max").unwrap_or(5);
    Ok(Outcome::from_oracle(
        jordan::check_hl_complete_identity(r_max),
        format!("degrees ≤ {}", r_max),
    ))
}

fn run_hl_alternating(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let _ = ctx;
    let r_max = req.opt_usize("r_max").unwrap_or(5);
    Ok(Outcome::from_oracle(
        jordan::check_hl_alternating(r_max),
        format!("degrees ≤ {}", r_max),
    ))
}

fn run_aut_formula(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let p = req
        .opt_usize("p")
        .map(|v| v as u32)
        .or_else(|| ctx.scenario_p())
        .unwrap_or(2);
    let max_weight = req.opt_usize("max_weight").unwrap_or(4);
    Ok(Outcome::from_oracle(
        jordan::check_aut_formula(p, max_weight),
        format!("p = {}, weights ≤ {}", p, max_weight),
    ))
}

fn run_gl_series(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let _ = ctx;
    let max_deg = req.opt_usize("max_deg").unwrap_or(5);
    Ok(Outcome::from_oracle(
        jordan::check_gl_series(max_deg),
        format!("degrees ≤ {}", max_deg),
    ))
}

// ========================= q-series runners =========================

fn run_q_leibniz(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let mode = ctx.series_mode();
    let order = req.opt_usize("order").unwrap_or(8);
    let j_max = req.opt_usize("j_max").unwrap_or(3);
    let trials = req.opt_usize("trials").unwrap_or(50);
    let seed = req.opt_i64("seed").unwrap_or(0x5EED) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_series = |rng: &mut ChaCha8Rng| {
        let coeffs = (0..=order).map(|_| mode.int(rng.gen_range(-3..=3))).collect();
        QSeries::from_coeffs(&mode, coeffs)
    };
    for trial in 0..trials {
        let f = random_series(&mut rng);
        let g = random_series(&mut rng);
        for j in 0..=j_max {
            let ok = qcalc::check_q_leibniz(&f, &g, j)
                .map_err(|e| HallError::Unsupported(e.to_string()))?;
            if !ok {
                return Ok(Outcome::Fail {
                    message: format!(
                        "divided-power Leibniz rule fails at j = {} (trial {})",
                        j, trial
                    ),
                    support: Vec::new(),
                });
            }
        }
    }
    Ok(Outcome::pass_with(format!("{} random pairs, j ≤ {}", trials, j_max)))
}

fn run_phi_definition(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let mode = ctx.series_mode();
    let order = req.opt_usize("order").unwrap_or(10);
    let nu_max = req.opt_i64("nu_max").unwrap_or(4);
    for nu in -nu_max..=nu_max {
        if !qcalc::check_phi_definition(&mode, nu, order) {
            return Ok(Outcome::Fail {
                message: format!("Φ_ν defining equation fails at ν = {}", nu),
                support: Vec::new(),
            });
        }
    }
    Ok(Outcome::pass_with(format!("|ν| ≤ {}, order {}", nu_max, order)))
}

fn run_gauss_sum(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let mode = ctx.series_mode();
    let order = req.opt_usize("order").unwrap_or(12);
    let n_max = req.opt_usize("n_max").unwrap_or(5) as u64;
    for n in 0..=n_max {
        if !qcalc::check_gauss_product_sum(&mode, n, order) {
            return Ok(Outcome::Fail {
                message: format!("finite product/sum expansion fails at n = {}", n),
                support: Vec::new(),
            });
        }
    }
    Ok(Outcome::pass_with(format!("n ≤ {}, order {}", n_max, order)))
}

// ========================== Torus runners ==========================

fn dilog_case(ctx: &Ctx, req: &CheckRequest, a0: u32, a1: u32, d0: u32, d1: u32)
    -> Result<Outcome, HallError>
{
    let order = req.opt_usize("order").unwrap_or(8) as u32;
    let v = qtorus::dilog_identity(a0, a1, d0, d1, order, ctx.series_mode())?;
    Ok(Outcome::from_verdict_with(
        v,
        format!("weights ({}, {}), symmetrisers ({}, {}), degree ≤ {}", a0, a1, d0, d1, order),
    ))
}

fn run_dilog_1(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    dilog_case(ctx, req, 1, 1, 1, 1)
}

fn run_dilog_2(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    dilog_case(ctx, req, 2, 1, 1, 2)
}

fn run_dilog_3(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    dilog_case(ctx, req, 3, 1, 1, 3)
}

fn run_dilog_rearranged(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let order = req.opt_usize("order").unwrap_or(8) as u32;
    Ok(Outcome::from_verdict_with(
        qtorus::dilog_rearranged_symmetric(order, ctx.series_mode())?,
        format!("degree ≤ {}", order),
    ))
}

fn run_dilog_minimal_failure(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let order = req.opt_usize("order").unwrap_or(8) as u32;
    let (a0, a1, d0, d1) = (3u32, 1u32, 1u32, 3u32);
    let factors = qtorus::middle_factors(a0, a1, d0, d1)?;
    let mode = ctx.series_mode();
    let mut notes = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        match qtorus::minimal_failing_degree(a0, a1, d0, d1, order, k, mode.clone())? {
            Some(deg) => {
                if deg != f.m + f.n {
                    return Ok(Outcome::Fail {
                        message: format!(
                            "omitting factor {} first fails at degree {} instead of {}",
                            k,
                            deg,
                            f.m + f.n
                        ),
                        support: Vec::new(),
                    });
                }
                notes.push(format!("drop x0^{}x1^{} → degree {}", f.m, f.n, deg));
            }
            None => {
                return Ok(Outcome::Fail {
                    message: format!(
                        "the identity still holds to degree {} with factor {} omitted",
                        order, k
                    ),
                    support: Vec::new(),
                })
            }
        }
    }
    Ok(Outcome::pass_with(notes.join("; ")))
}

fn run_integration(ctx: &Ctx, _req: &CheckRequest) -> Result<Outcome, HallError> {
    let alg = ctx.algebra()?;
    Ok(Outcome::from_verdict(qtorus::integration_check(alg)?))
}

// ========================= Lattice runners =========================

fn run_gamma_sets(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let lat = lattice_for(ctx)?;
    let depth = req.opt_usize("depth").unwrap_or(50);
    let orbits = lat.gamma_orbits(depth);
    if !orbits.minus_complete || !orbits.plus_complete {
        return Ok(Outcome::Undecided(format!(
            "an orbit neither left the positive cone nor closed by depth {}",
            depth
        )));
    }
    let minus = orbits.minus_grades();
    let plus = orbits.plus_grades();
    if minus == plus {
        Ok(Outcome::pass_with(format!("{} grades on each side", minus.len())))
    } else {
        let diff: Vec<String> = minus
            .symmetric_difference(&plus)
            .take(10)
            .map(|g| format!("{:?}", g))
            .collect();
        Ok(Outcome::Fail {
            message: "downward and upward orbit grade sets differ".into(),
            support: diff,
        })
    }
}

fn run_gamma_disjoint(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let lat = lattice_for(ctx)?;
    let depth = req.opt_usize("depth").unwrap_or(30);
    let orbits = lat.gamma_orbits(depth);
    if orbits.minus_complete && orbits.plus_complete {
        return Ok(Outcome::Fail {
            message: "both orbits terminate, so the scenario is not of unbounded type".into(),
            support: Vec::new(),
        });
    }
    if orbits.minus_grades().is_disjoint(&orbits.plus_grades()) {
        Ok(Outcome::pass_with(format!(
            "orbits stay disjoint through depth {}",
            depth
        )))
    } else {
        let both: Vec<String> = orbits
            .minus_grades()
            .intersection(&orbits.plus_grades())
            .take(10)
            .map(|g| format!("{:?}", g))
            .collect();
        Ok(Outcome::Fail { message: "the two orbit sets meet".into(), support: both })
    }
}

fn run_chebyshev(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    let r_max = req.opt_i64("r_max").unwrap_or(12);
    let weights: Vec<(i64, i64)> = match &ctx.config.scenario {
        ScenarioSpec::ValuedRank2 { a0, a1, .. } => vec![(*a0, *a1)],
        _ => vec![(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (1, 4)],
    };
    let mut points = 0usize;
    for &(a0, a1) in &weights {
        for r in -r_max..=r_max {
            let rec = rootcox::beta_recursive(a0, a1, r);
            let closed = rootcox::beta_closed(a0, a1, r);
            if rec != closed {
                return Ok(Outcome::Fail {
                    message: format!(
                        "recursion and closed form disagree at weights ({}, {}), index {}",
                        a0, a1, r
                    ),
                    support: vec![format!("recursion {:?}, closed form {:?}", rec, closed)],
                });
            }
            points += 1;
        }
    }
    Ok(Outcome::pass_with(format!(
        "{} grade vectors over {} weight pairs",
        points,
        weights.len()
    )))
}

fn run_dim_formulas(ctx: &Ctx, req: &CheckRequest) -> Result<Outcome, HallError> {
    match &ctx.config.scenario {
        ScenarioSpec::Quiver { name, p } => {
            let scn = repfield::fixtures::by_name(name, *p).ok_or_else(|| {
                HallError::Unsupported(format!("unknown quiver scenario {:?}", name))
            })?;
            if !scn.spec.is_hereditary() {
                return Err(HallError::Unsupported(
                    "dimension formulas need a relation-free quiver".into(),
                ));
            }
            let depth = req.opt_usize("depth").unwrap_or(16);
            let lat = EulerLattice::from_quiver(&scn.spec);
            let orbits = lat.gamma_orbits(depth);
            if !orbits.minus_complete {
                return Ok(Outcome::Undecided(format!(
                    "the downward orbit is not finished by depth {}",
                    depth
                )));
            }
            let find_rep = |grade: &[i64]| {
                scn.table.entries.iter().find(|e| {
                    e.rep.dims.iter().map(|&d| d as i64).collect::<Vec<_>>() == grade
                })
            };
            let mut compared = 0usize;
            for a in &orbits.minus {
                for b in &orbits.minus {
                    let (Some(x), Some(y)) = (find_rep(&a.grade), find_rep(&b.grade)) else {
                        return Err(HallError::Inconsistent(format!(
                            "orbit grade {:?} or {:?} has no table entry",
                            a.grade, b.grade
                        )));
                    };
                    if b.depth >= a.depth {
                        let predicted =
                            lat.orbit_hom(a.simple, a.depth, b.simple, b.depth).unwrap();
                        let actual =
                            repfield::hom_dim(&scn.spec, &x.rep, &y.rep) as i64;
                        if predicted != actual {
                            return Ok(Outcome::Fail {
                                message: format!(
                                    "morphism dimension {:?} → {:?}: orbit pairing {} vs engine {}",
                                    a.grade, b.grade, predicted, actual
                                ),
                                support: Vec::new(),
                            });
                        }
                        compared += 1;
                    }
                    if b.depth > a.depth {
                        let predicted =
                            lat.orbit_ext(b.simple, b.depth, a.simple, a.depth).unwrap();
                        let actual =
                            repfield::ext_dim(&scn.spec, &y.rep, &x.rep)? as i64;
                        if predicted != actual {
                            return Ok(Outcome::Fail {
                                message: format!(
                                    "extension dimension {:?} → {:?}: orbit pairing {} vs engine {}",
                                    b.grade, a.grade, predicted, actual
                                ),
                                support: Vec::new(),
                            });
                        }
                        compared += 1;
                    }
                }
            }
            Ok(Outcome::pass_with(format!("{} dimension comparisons", compared)))
        }
        ScenarioSpec::ValuedRank2 { a0, a1, .. } => {
            // Compare the parity-indexed closed forms against the orbit
            // pairing, over the minimal symmetriser (the closed forms count
            // in units of each object's endomorphism field).
            let lat = EulerLattice::rank2_minimal(*a0, *a1);
            let d = [lat.d[1], lat.d[0]];
            let depth = req.opt_usize("depth").unwrap_or(10);
            let orbits = lat.gamma_orbits(depth);
            let t_max = req.opt_i64("t_max").unwrap_or(5);
            let point = |t: i64| ((1 - (t % 2)) as usize, (t / 2) as usize);
            let exists = |t: i64| {
                let (i, k) = point(t);
                orbits.minus.iter().any(|p| p.simple == i && p.depth == k)
            };
            let mut compared = 0usize;
            for r in 0..=t_max {
                for s in r..=t_max {
                    if !exists(r) || !exists(s) {
                        continue;
                    }
                    let (i, k) = point(r);
                    let (j, rr) = point(s);
                    let hom_closed = rootcox::rank2_hom_pp(*a0, *a1, r, s).unwrap();
                    let hom_orbit = lat.orbit_hom(i, k, j, rr).unwrap();
                    if d[(r % 2) as usize] * hom_closed != hom_orbit {
                        return Ok(Outcome::Fail {
                            message: format!(
                                "morphism closed form disagrees with orbit pairing at indices ({}, {})",
                                r, s
                            ),
                            support: Vec::new(),
                        });
                    }
                    compared += 1;
                    if s > r {
                        let ext_closed = rootcox::rank2_ext_pp(*a0, *a1, s, r).unwrap();
                        let ok = match lat.orbit_ext(j, rr, i, k) {
                            Some(ext_orbit) => d[(r % 2) as usize] * ext_closed == ext_orbit,
                            None => ext_closed == 0,
                        };
                        if !ok {
                            return Ok(Outcome::Fail {
                                message: format!(
                                    "extension closed form disagrees with orbit pairing at indices ({}, {})",
                                    s, r
                                ),
                                support: Vec::new(),
                            });
                        }
                        compared += 1;
                    }
                }
            }
            Ok(Outcome::pass_with(format!("{} dimension comparisons", compared)))
        }
        _ => Err(HallError::Unsupported(
            "needs a hereditary quiver or rank-2 weight scenario".into(),
        )),
    }
}

// ============================== Registry ==============================

/// Every check the tool knows, in listing order.
static REGISTRY: &[CheckDef] = &[
    CheckDef {
        name: "reineke_inverse",
        summary: "the signed semisimple series inverts the all-classes sum on both sides",
        runner: run_reineke,
    },
    CheckDef {
        name: "riedtmann_formula",
        summary: "subobject counts match the Aut/Hom/Ext extension-counting formula",
        runner: run_riedtmann,
    },
    CheckDef {
        name: "source_order_factorization",
        summary: "the all-classes sum factors into simple exponentials in vertex order",
        runner: run_source_order,
    },
    CheckDef {
        name: "normal_order_factorization",
        summary: "ordered products of Coxeter-orbit exponentials rebuild the all-classes sum",
        runner: run_normal_order,
    },
    CheckDef {
        name: "pentagon_two_simples",
        summary: "on two vertices, the exponential commutator equals the middle exponential",
        runner: run_pentagon_two,
    },
    CheckDef {
        name: "pentagon_split",
        summary: "splitting a linear quiver gives the two- and three-factor exponential identities",
        runner: run_pentagon_split,
    },
    CheckDef {
        name: "pentagon_square",
        summary: "on the bound commuting square, eleven brick exponentials equal four simple ones",
        runner: run_pentagon_square,
    },
    CheckDef {
        name: "triangular_split_products",
        summary: "cross-block products collapse to one class with the predicted coefficient",
        runner: run_triangular,
    },
    CheckDef {
        name: "serre_relations",
        summary: "the alternating divided-power sums over simple pairs vanish",
        runner: run_serre,
    },
    CheckDef {
        name: "fund_rel",
        summary: "the alternating brick/class straightening sums vanish under Ext-vanishing",
        runner: run_fund_rel,
    },
    CheckDef {
        name: "conjugation_closed_forms",
        summary: "conjugation by a brick exponential matches its finite closed forms",
        runner: run_conjugation,
    },
    CheckDef {
        name: "exp_add_formula",
        summary: "powers of a rigid brick class carry q-factorial coefficients",
        runner: run_exp_add,
    },
    CheckDef {
        name: "coproduct_grouplike",
        summary: "the all-classes sum is group-like for the extension coproduct",
        runner: run_grouplike,
    },
    CheckDef {
        name: "green_compatibility",
        summary: "the coproduct is multiplicative for the twisted tensor product",
        runner: run_green,
    },
    CheckDef {
        name: "coproduct_coassoc",
        summary: "the extension coproduct is coassociative at the truncation",
        runner: run_coassoc,
    },
    CheckDef {
        name: "express_in_simples",
        summary: "every class is a word polynomial in simple classes, and round-trips",
        runner: run_express,
    },
    CheckDef {
        name: "key_identities",
        summary: "derivation-chain and word re-expansion identities on random elements",
        runner: run_key_identities,
    },
    CheckDef {
        name: "associativity_audit",
        summary: "product associativity on random truncated elements",
        runner: run_associativity,
    },
    CheckDef {
        name: "steinitz_inverse",
        summary: "the nilpotent-category inverse of the all-classes sum has the signed column shape",
        runner: run_steinitz,
    },
    CheckDef {
        name: "jordan_phi_hom",
        summary: "the class-to-symmetric-function transform is multiplicative",
        runner: run_phi_hom,
    },
    CheckDef {
        name: "hall_littlewood_identity",
        summary: "the triangular basis change between symmetric bases inverts exactly",
        runner: run_hl_inverse,
    },
    CheckDef {
        name: "hall_littlewood_complete",
        summary: "complete homogeneous expansions over the triangular basis hold",
        runner: run_hl_complete,
    },
    CheckDef {
        name: "jordan_alt_sum",
        summary: "the alternating elementary/complete convolution telescopes to zero",
        runner: run_hl_alternating,
    },
    CheckDef {
        name: "aut_order_formula",
        summary: "the partition automorphism-count formula matches brute force",
        runner: run_aut_formula,
    },
    CheckDef {
        name: "jordan_gl_series",
        summary: "general-linear group orders satisfy their generating-series identity",
        runner: run_gl_series,
    },
    CheckDef {
        name: "q_leibniz",
        summary: "the divided-power product rule for q-derivatives on random series",
        runner: run_q_leibniz,
    },
    CheckDef {
        name: "phi_definition",
        summary: "the Φ_ν product form satisfies its defining shift equation",
        runner: run_phi_definition,
    },
    CheckDef {
        name: "gauss_product_sum",
        summary: "finite q-product expansions match their binomial-coefficient sums",
        runner: run_gauss_sum,
    },
    CheckDef {
        name: "dilog_identity a0a1=1",
        summary: "the symmetric rank-2 exponential-series commutator equals one middle factor",
        runner: run_dilog_1,
    },
    CheckDef {
        name: "dilog_identity a0a1=2",
        summary: "the doubled-weight commutator equals its two ordered middle factors",
        runner: run_dilog_2,
    },
    CheckDef {
        name: "dilog_identity a0a1=3",
        summary: "the tripled-weight commutator equals its four ordered middle factors",
        runner: run_dilog_3,
    },
    CheckDef {
        name: "dilog_rearranged",
        summary: "the symmetric case in product-of-five form",
        runner: run_dilog_rearranged,
    },
    CheckDef {
        name: "dilog_minimal_failure",
        summary: "omitting any middle factor first breaks at that factor's total degree",
        runner: run_dilog_minimal_failure,
    },
    CheckDef {
        name: "integration_map",
        summary: "the Aut-weighted monomial map into the quantum plane is multiplicative",
        runner: run_integration,
    },
    CheckDef {
        name: "coxeter_gamma_sets",
        summary: "downward and upward Coxeter orbits sweep the same grades in bounded type",
        runner: run_gamma_sets,
    },
    CheckDef {
        name: "coxeter_gamma_disjoint",
        summary: "in unbounded type the two Coxeter orbit sets never meet",
        runner: run_gamma_disjoint,
    },
    CheckDef {
        name: "chebyshev_beta",
        summary: "the rank-2 grade recursion matches its three-term closed form",
        runner: run_chebyshev,
    },
    CheckDef {
        name: "coxeter_dim_formulas",
        summary: "orbit-pairing dimension predictions match the representation engine",
        runner: run_dim_formulas,
    },
];

/// All registered checks in listing order.
pub fn registry() -> &'static [CheckDef] {
    REGISTRY
}

pub fn is_registered(name: &str) -> bool {
    REGISTRY.iter().any(|c| c.name == name)
}

pub fn find(name: &str) -> Option<&'static CheckDef> {
    REGISTRY.iter().find(|c| c.name == name)
}

// ============================ Run harness ============================

/// Runs one named check, classifying machine errors into outcomes.
pub fn run_one(ctx: &Ctx, req: &CheckRequest) -> Outcome {
    let Some(def) = find(&req.name) else {
        return Outcome::Inconsistent(format!("check {:?} passed validation but is unregistered", req.name));
    };
    match (def.runner)(ctx, req) {
        Ok(outcome) => outcome,
        Err(e) => classify(e),
    }
}

fn record_for(ctx: &Ctx, req: &CheckRequest, outcome: Outcome, elapsed_ms: Option<u64>) -> CheckRecord {
    let rec = CheckRecord::new(
        &req.name,
        &ctx.config.scenario.display_name(),
        &ctx.config.truncation,
        &ctx.config.q_mode,
    );
    let rec = match outcome {
        Outcome::Pass(None) => rec.pass(),
        Outcome::Pass(Some(note)) => {
            let mut r = rec.pass();
            r.details = Some(note);
            r
        }
        Outcome::Fail { message, support } => rec.fail(&message, support),
        Outcome::Skip(reason) => rec.skipped(&reason),
        Outcome::Undecided(reason) => rec.undecided(&reason),
        Outcome::Inconsistent(msg) => rec.fail(&format!("internal inconsistency: {}", msg), Vec::new()),
    };
    match elapsed_ms {
        Some(ms) => rec.with_elapsed_ms(ms),
        None => rec,
    }
}

/// Executes every requested check (respecting the global parallel switch)
/// and assembles the report.  The boolean is true when any check hit an
/// internal inconsistency, which callers surface as a distinct exit code.
pub fn run_config(
    config: RunConfig,
    config_echo: &str,
    with_timing: bool,
) -> Result<(RunReport, bool), HallError> {
    let requests = config.checks.clone();
    let ctx = Ctx::new(config)?;
    let results: Vec<(CheckRecord, bool)> = par::map_collect(requests, |req| {
        let started = Instant::now();
        let outcome = run_one(&ctx, &req);
        let inconsistent = matches!(outcome, Outcome::Inconsistent(_));
        let elapsed = with_timing.then(|| started.elapsed().as_millis() as u64);
        (record_for(&ctx, &req, outcome, elapsed), inconsistent)
    });
    let mut report = RunReport::new(config_echo);
    let mut saw_inconsistency = false;
    for (rec, inconsistent) in results {
        saw_inconsistency |= inconsistent;
        report.push(rec);
    }
    Ok((report, saw_inconsistency))
}

// ================================ Tests ================================
