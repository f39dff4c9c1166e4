//! One runner per analysis kind. Each returns a JSON payload plus CSV tables.

use serde::Serialize;
use serde_json::{json, Value};

use semichain::entropy::{
    auto_word_sample, bufetov_entropy, pseudo_entropy, pseudo_spanning_count, pseudo_separated_count,
    spectral_growth, verify_skew_identity, Count, PseudoRules,
};
use semichain::graph::{build_chain_graph, count_chains_for_word, total_chain_count};
use semichain::recurrence::{mixing_time, proposition_suite, recurrence_time, verify_lbm, verify_ubd};
use semichain::space::box_dimension_estimate;
use semichain::structure::{connectivity_equivalence_check, epsilon_classes, k_ladder, DeltaRule};
use semichain::system::from_map_tables;
use semichain::{Budget, FiniteMetricSpace, GeneratorSystem, ScaleLadder, Word};

use crate::config::{
    AnalysisRequest, DecomposeRequest, EntropyRequest, LadderRequest, MixingRequest, RecurrenceRequest,
    VerifyAllRequest,
};
use crate::presets::Defaults;

/// A flat table written as one CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    /// File stem; the analysis name is prefixed when written.
    pub stem: String,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    /// A verification inside the analysis failed.
    Failed,
    /// The analysis could not run (precondition or budget).
    Error,
}

#[derive(Debug, Clone)]
pub struct AnalysisOutput {
    pub status: Status,
    pub payload: Value,
    pub tables: Vec<CsvTable>,
}

impl AnalysisOutput {
    fn ok(payload: Value, tables: Vec<CsvTable>) -> Self {
        AnalysisOutput {
            status: Status::Ok,
            payload,
            tables,
        }
    }
}

pub struct Context<'a> {
    pub system: &'a GeneratorSystem,
    pub defaults: &'a Defaults,
    pub seed: u64,
    pub budget: &'a Budget,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn run_analysis(req: &AnalysisRequest, cx: &Context) -> Result<AnalysisOutput, semichain::Error> {
    match req {
        AnalysisRequest::Entropy(r) => entropy(r, cx),
        AnalysisRequest::Recurrence(r) => recurrence(r, cx),
        AnalysisRequest::Mixing(r) => mixing(r, cx),
        AnalysisRequest::Decompose(r) => decompose(r, cx),
        AnalysisRequest::Ladder(r) => ladder(r, cx),
        AnalysisRequest::VerifyAll(r) => verify_all(r, cx),
    }
}

fn entropy(r: &EntropyRequest, cx: &Context) -> Result<AnalysisOutput, semichain::Error> {
    let g = cx.system;
    let d = cx.defaults;
    let epsilons = r.epsilons.clone().unwrap_or_else(|| d.epsilons.clone());
    let deltas = r.deltas.clone().unwrap_or_else(|| d.entropy_deltas.clone());
    let n_min = r.n_min.unwrap_or(d.n_range.0);
    let n_max = r.n_max.unwrap_or(d.n_range.1.max(n_min));
    if n_min > n_max {
        return Err(semichain::Error::InvalidArgument(format!("n_min {n_min} exceeds n_max {n_max}")));
    }
    let word_sample = r.word_sample.unwrap_or_else(|| auto_word_sample(g.m(), n_max, cx.budget));
    let defaults = PseudoRules::default();
    let rules = PseudoRules {
        include_endpoint: r.include_endpoint.unwrap_or(defaults.include_endpoint),
        strict: r.strict.unwrap_or(defaults.strict),
    };
    let matrix = pseudo_entropy(g, &epsilons, &deltas, n_min..=n_max, word_sample, cx.seed, rules, cx.budget)?;
    let mut spectral = Vec::new();
    let mut graphs = Vec::new();
    for &delta in deltas.values() {
        let cg = build_chain_graph(g, delta)?;
        spectral.push(json!({ "delta": delta, "growth": to_value(&spectral_growth(&cg)) }));
        graphs.push(to_value(&cg.summary()));
    }
    let mut rows = Vec::new();
    for row in &matrix.entries {
        for est in row {
            for &(n, v) in &est.raw_curve {
                rows.push(vec!["pseudo-separated".into(), num(est.epsilon), num(est.delta), n.to_string(), num(v)]);
            }
        }
    }
    let mut orbit = Vec::new();
    if r.orbit.unwrap_or(true) {
        for &eps in epsilons.values() {
            let est = bufetov_entropy(g, eps, n_min..=n_max, word_sample, cx.seed, cx.budget)?;
            for &(n, v) in &est.raw_curve {
                rows.push(vec!["orbit-separated".into(), num(eps), num(0.0), n.to_string(), num(v)]);
            }
            orbit.push(est);
        }
    }
    let payload = json!({
        "tolerances": {
            "epsilons": epsilons.values(),
            "deltas": deltas.values(),
            "quantization_error": g.quantization_error(),
        },
        "n_range": [n_min, n_max],
        "word_sample": word_sample,
        "seed": cx.seed,
        "pseudo": to_value(&matrix),
        "spectral": spectral,
        "orbit": to_value(&orbit),
        "chain_graphs": graphs,
    });
    let table = CsvTable {
        stem: "curves".into(),
        headers: vec!["estimate", "epsilon", "delta", "n", "log_avg_count"],
        rows,
    };
    Ok(AnalysisOutput::ok(payload, vec![table]))
}

fn recurrence(r: &RecurrenceRequest, cx: &Context) -> Result<AnalysisOutput, semichain::Error> {
    let epsilons = r.epsilons.clone().unwrap_or_else(|| cx.defaults.epsilons.clone());
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for &eps in epsilons.values() {
        let cg = build_chain_graph(cx.system, eps)?;
        let rep = recurrence_time(&cg);
        rows.push(vec![num(eps), opt(rep.r_global)]);
        reports.push(json!({ "report": to_value(&rep), "chain_graph": to_value(&cg.summary()) }));
    }
    let payload = json!({
        "tolerances": {
            "epsilons": epsilons.values(),
            "quantization_error": cx.system.quantization_error(),
        },
        "levels": reports,
    });
    let table = CsvTable {
        stem: "curve".into(),
        headers: vec!["epsilon", "r_global"],
        rows,
    };
    Ok(AnalysisOutput::ok(payload, vec![table]))
}

fn mixing(r: &MixingRequest, cx: &Context) -> Result<AnalysisOutput, semichain::Error> {
    let epsilons = r.epsilons.clone().unwrap_or_else(|| cx.defaults.epsilons.clone());
    let deltas = r.deltas.clone().unwrap_or_else(|| cx.defaults.deltas.clone());
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for &eps in epsilons.values() {
        let cg = build_chain_graph(cx.system, eps)?;
        for &delta in deltas.values() {
            let rep = mixing_time(&cg, delta);
            rows.push(vec![num(eps), num(delta), opt(rep.m_global)]);
            reports.push(to_value(&rep));
        }
    }
    let payload = json!({
        "tolerances": {
            "epsilons": epsilons.values(),
            "deltas": deltas.values(),
            "quantization_error": cx.system.quantization_error(),
        },
        "levels": reports,
    });
    let table = CsvTable {
        stem: "curve".into(),
        headers: vec!["epsilon", "delta", "m_global"],
        rows,
    };
    Ok(AnalysisOutput::ok(payload, vec![table]))
}

fn decompose(r: &DecomposeRequest, cx: &Context) -> Result<AnalysisOutput, semichain::Error> {
    let eps = r.epsilon.unwrap_or(cx.defaults.epsilon);
    let cg = build_chain_graph(cx.system, eps)?;
    let rep = epsilon_classes(&cg, cx.budget)?;
    let rows = rep
        .class_of
        .iter()
        .enumerate()
        .map(|(x, c)| vec![x.to_string(), c.to_string()])
        .collect();
    let payload = json!({
        "tolerances": { "epsilon": eps, "quantization_error": cx.system.quantization_error() },
        "report": to_value(&rep),
        "chain_graph": to_value(&cg.summary()),
    });
    let table = CsvTable {
        stem: "classes".into(),
        headers: vec!["point_id", "class"],
        rows,
    };
    Ok(AnalysisOutput::ok(payload, vec![table]))
}

fn ladder(r: &LadderRequest, cx: &Context) -> Result<AnalysisOutput, semichain::Error> {
    let epsilons = r.epsilons.clone().unwrap_or_else(|| cx.defaults.epsilons.clone());
    let rule = r.delta_rule.unwrap_or_default();
    let diag = k_ladder(cx.system, &epsilons, rule)?;
    let rows = diag
        .entries
        .iter()
        .map(|e| vec![num(e.epsilon), num(e.delta), e.k.to_string()])
        .collect();
    let payload = json!({
        "tolerances": {
            "epsilons": epsilons.values(),
            "delta_rule": to_value(&rule),
            "quantization_error": cx.system.quantization_error(),
        },
        "report": to_value(&diag),
    });
    let table = CsvTable {
        stem: "curve".into(),
        headers: vec!["epsilon", "delta", "k"],
        rows,
    };
    Ok(AnalysisOutput::ok(payload, vec![table]))
}

/// Outcome of one verification inside `verify-all`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: &'static str,
    verdict: Verdict,
    detail: Value,
}

fn check(name: &'static str, pass: bool, detail: Value) -> Check {
    Check {
        name,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        detail,
    }
}

fn skipped(name: &'static str, reason: impl Into<String>) -> Check {
    Check {
        name,
        verdict: Verdict::Skipped,
        detail: json!({ "reason": reason.into() }),
    }
}

/// Partner system for the product checks: two points swapped by one map.
pub fn flip_system() -> GeneratorSystem {
    let space = FiniteMetricSpace::uniform(2, 1.0).expect("two points");
    from_map_tables(space, vec![vec![1, 0]]).expect("valid table")
}

/// Largest word length for the exhaustive chain-count check.
const VERIFY_MAX_N: usize = 3;
/// Largest word length for the sandwich check (the exact solvers are exponential).
const SANDWICH_MAX_N: usize = 2;
/// Tolerance of the skew-product identity.
pub const SKEW_TOLERANCE: f64 = 1e-6;

fn verify_all(r: &VerifyAllRequest, cx: &Context) -> Result<AnalysisOutput, semichain::Error> {
    let g = cx.system;
    let d = cx.defaults;
    let eps = r.epsilon.unwrap_or(d.epsilon);
    let delta = r.delta.unwrap_or(d.delta);
    let skew_delta = r.skew_delta.unwrap_or(d.skew_delta);
    let k = r.k.unwrap_or(d.k);
    let epsilons = r.epsilons.clone().unwrap_or_else(|| d.epsilons.clone());
    let deltas = r.deltas.clone().unwrap_or_else(|| d.deltas.clone());
    let ubd_epsilons = r.ubd_epsilons.clone().unwrap_or_else(|| d.ubd_epsilons.clone());
    let box_ladder: Option<ScaleLadder> = r.box_ladder.clone().or_else(|| d.box_ladder.clone());

    let mut checks = Vec::new();
    let cg = build_chain_graph(g, eps)?;

    checks.push(if g.m() >= 2 {
        let rep = verify_skew_identity(g, skew_delta, cx.budget)?;
        check("skew-identity", rep.converged && rep.discrepancy <= SKEW_TOLERANCE, to_value(&rep))
    } else {
        skipped("skew-identity", "needs at least two generators")
    });

    let props = proposition_suite(g, &flip_system(), k, eps, delta, cx.budget)?;
    checks.push(check("propositions", props.all_passed(), to_value(&props)));

    let u = cg.union_graph();
    checks.push(if u.is_strongly_connected() {
        let periods: Vec<Option<usize>> = (0..cg.point_count()).map(|x| u.period_from(x)).collect();
        let same = periods.windows(2).all(|w| w[0] == w[1]);
        check("period-basepoint", same, json!({ "period": periods[0] }))
    } else {
        skipped("period-basepoint", "union graph is not strongly connected")
    });

    let mut counts = Vec::new();
    let mut counts_ok = true;
    for n in 1..=VERIFY_MAX_N {
        if word_count(g.m(), n) > cx.budget.words as u128 {
            break;
        }
        let total = total_chain_count(&cg, n);
        let summed = Word::all(n, g.m()).map(|w| count_chains_for_word(&cg, &w)).sum();
        counts_ok &= total == summed;
        counts.push(json!({ "n": n, "total": total.to_string(), "word_sum": summed.to_string() }));
    }
    checks.push(check("chain-count-word-sum", counts_ok, json!(counts)));

    checks.push(sandwich(g, eps, delta, cx.budget)?);

    let conn = connectivity_equivalence_check(g, eps, cx.budget)?;
    checks.push(check("connectivity", conn.all_agree != Some(false), to_value(&conn)));

    checks.push(if u.is_strongly_connected() {
        let rep = epsilon_classes(&cg, cx.budget)?;
        check("decomposition", rep.permutation_ok && rep.equivalence_ok, to_value(&rep))
    } else {
        skipped("decomposition", "union graph is not strongly connected")
    });

    let lad = k_ladder(g, &epsilons, DeltaRule::Equal)?;
    checks.push(check("period-divisibility", lad.divisibility_ok, to_value(&lad)));

    match &box_ladder {
        Some(bl) => {
            let bd = box_dimension_estimate(g.space(), bl)?;
            let ubd = verify_ubd(g, &ubd_epsilons, bd.upper_b)?;
            let finite = ubd.max_product.is_some_and(f64::is_finite);
            checks.push(check("recurrence-time-trend", finite, json!({ "box": to_value(&bd), "report": to_value(&ubd) })));
            let lbm = verify_lbm(g, &epsilons, &deltas, bd.lower_b)?;
            checks.push(match lbm.holds {
                Some(h) => check("mixing-time-bound", h, json!({ "box": to_value(&bd), "report": to_value(&lbm) })),
                None => skipped(
                    "mixing-time-bound",
                    lbm.partial.clone().unwrap_or_else(|| "right-hand side unavailable".into()),
                ),
            });
        }
        None => {
            checks.push(skipped("recurrence-time-trend", "no box-dimension ladder for this space"));
            checks.push(skipped("mixing-time-bound", "no box-dimension ladder for this space"));
        }
    }

    let failed = checks.iter().any(|c| matches!(c.verdict, Verdict::Fail));
    let rows = checks
        .iter()
        .map(|c| vec![c.name.to_string(), to_value(&c.verdict).as_str().unwrap_or_default().to_string()])
        .collect();
    let payload = json!({
        "tolerances": {
            "epsilon": eps,
            "delta": delta,
            "skew_delta": skew_delta,
            "skew_tolerance": SKEW_TOLERANCE,
            "k": k,
            "epsilons": epsilons.values(),
            "deltas": deltas.values(),
            "ubd_epsilons": ubd_epsilons.values(),
            "box_ladder": box_ladder.as_ref().map(|b| b.values().to_vec()),
            "quantization_error": g.quantization_error(),
        },
        "checks": to_value(&checks),
    });
    let table = CsvTable {
        stem: "checks".into(),
        headers: vec!["check", "verdict"],
        rows,
    };
    Ok(AnalysisOutput {
        status: if failed { Status::Failed } else { Status::Ok },
        payload,
        tables: vec![table],
    })
}

fn word_count(m: usize, n: usize) -> u128 {
    (m as u128).saturating_pow(n as u32)
}

/// Over-budget counts become `None`; other errors pass through.
fn within_budget(r: Result<Count, semichain::Error>) -> Result<Option<Count>, semichain::Error> {
    match r {
        Ok(c) => Ok(Some(c)),
        Err(semichain::Error::Resource(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `B*(ε/2) >= N*(ε) >= B*(ε)` for every word up to [`SANDWICH_MAX_N`], where all three counts are exact.
fn sandwich(g: &GeneratorSystem, eps: f64, delta: f64, budget: &Budget) -> Result<Check, semichain::Error> {
    let cg = build_chain_graph(g, delta)?;
    let mut compared = 0usize;
    let mut inexact = 0usize;
    let mut violations = Vec::new();
    for n in 1..=SANDWICH_MAX_N {
        if word_count(g.m(), n) > budget.words as u128 {
            break;
        }
        for w in Word::all(n, g.m()) {
            let counts = (
                within_budget(pseudo_separated_count(&cg, &w, eps))?,
                within_budget(pseudo_spanning_count(&cg, &w, eps))?,
                within_budget(pseudo_spanning_count(&cg, &w, eps / 2.0))?,
            );
            let (Some(sep), Some(span), Some(span_half)) = counts else {
                inexact += 1;
                continue;
            };
            if !(sep.exact && span.exact && span_half.exact) {
                inexact += 1;
                continue;
            }
            compared += 1;
            if !(span_half.value >= sep.value && sep.value >= span.value) {
                violations.push(format!("word {w}: {} / {} / {}", span_half.value, sep.value, span.value));
            }
        }
    }
    let detail = json!({ "epsilon": eps, "delta": delta, "compared": compared, "inexact": inexact, "violations": violations });
    Ok(if compared == 0 {
        skipped("sandwich", format!("no exact counts within the solver limits ({inexact} words tried)"))
    } else {
        check("sandwich", violations.is_empty(), detail)
    })
}
