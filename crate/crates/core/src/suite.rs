//! Full verification run over every scope, with JSON and Markdown output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::hypfun::{verify_recursion, Params1F1, ParamsPsi2, Recursion};
use crate::identities::{
    run_suite, ParamPoint, ReportRow, RowMode, Status, SuiteConfig, SuiteError, Variant, VerificationReport,
};
use crate::liealg::{
    build_catalogue, displayed_f11_ea, expected_action, express_in_span, flow_check, operator, verify_action,
    verify_action_with, BasisFamily, DiffOperator, Family, FlowPoint, FlowSpec, OperatorId, SpanResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Identities,
    Actions,
    Recursions,
    Flows,
    Commutators,
    All,
}

impl Scope {
    fn includes(self, other: Scope) -> bool {
        self == Scope::All || self == other
    }
}

impl FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identities" => Scope::Identities,
            "actions" => Scope::Actions,
            "recursions" => Scope::Recursions,
            "flows" => Scope::Flows,
            "commutators" => Scope::Commutators,
            "all" => Scope::All,
            other => return Err(Error::Config(format!("unknown scope {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub scope: Scope,
    pub identities: SuiteConfig,
    pub action_order: u32,
    pub recursion_order: u32,
    pub alpha: f64,
    pub step: f64,
    pub flow_tol: f64,
    pub flow_start: FlowPoint,
    pub span_check: bool,
    pub seed: u64,
    pub bilinearity_samples: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        let r = ExactScalar::new;
        RunSettings {
            scope: Scope::All,
            identities: SuiteConfig::default(),
            action_order: 12,
            recursion_order: 12,
            alpha: 0.1,
            step: 1e-3,
            flow_tol: 1e-8,
            flow_start: FlowPoint::new([r(1, 1), r(2, 1), r(3, 1), r(1, 2), r(1, 3)]),
            span_check: true,
            seed: 42,
            bilinearity_samples: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecursionRow {
    pub id: String,
    pub params: ParamPoint,
    pub order: u32,
    pub status: Status,
    pub residual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionRow {
    pub family: Family,
    pub operator: String,
    pub params: ParamPoint,
    pub order: u32,
    pub coefficient: Option<ExactScalar>,
    pub shift: Option<(i64, i64, i64)>,
    pub status: Status,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRow {
    pub family: Family,
    pub operator: String,
    pub system: Vec<String>,
    pub alpha: f64,
    pub step: f64,
    pub max_deviation: Option<f64>,
    pub status: Status,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanRow {
    pub family: Family,
    pub left: String,
    pub right: String,
    pub commutator: String,
    pub in_span: bool,
    /// Nonzero span coefficients, or the irreducible residual.
    pub expansion: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorSection {
    pub antisymmetry_pairs: usize,
    pub antisymmetry_failures: Vec<String>,
    pub bilinearity_samples: usize,
    pub bilinearity_failures: Vec<String>,
    pub jacobi_triples: usize,
    pub jacobi_failures: Vec<String>,
    pub ia_ea_is_ea: bool,
    pub span: Vec<SpanRow>,
    pub errors: Vec<String>,
}

impl CommutatorSection {
    pub fn passed(&self) -> bool {
        self.antisymmetry_failures.is_empty()
            && self.bilinearity_failures.is_empty()
            && self.jacobi_failures.is_empty()
            && self.ia_ea_is_ea
            && self.errors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    pub engine_version: String,
    pub scope: Scope,
    pub passed: bool,
    pub identities: Option<VerificationReport>,
    pub recursions: Option<Vec<RecursionRow>>,
    pub actions: Option<Vec<ActionRow>>,
    pub flows: Option<Vec<FlowRow>>,
    pub commutators: Option<CommutatorSection>,
    /// Places where a written form disagrees with what the engine verifies.
    pub discrepancies: Vec<String>,
    pub timing: BTreeMap<String, f64>,
}

fn basis(family: Family, p: &ParamPoint) -> Result<BasisFamily> {
    Ok(match family {
        Family::F11 => BasisFamily::F11Normalized(Params1F1::new(p.a.clone(), p.b.clone())?),
        Family::Psi2 => {
            let c = p.c.clone().ok_or_else(|| Error::Config("parameter c is required for Ψ2".into()))?;
            BasisFamily::Psi2(ParamsPsi2::new(p.a.clone(), p.b.clone(), c)?)
        }
    })
}

pub fn run_recursions(points: &[ParamPoint], order: u32) -> Vec<RecursionRow> {
    let mut rows = Vec::new();
    for p in points {
        for rel in Recursion::ALL {
            let params = p.for_family(Family::F11);
            let res = Params1F1::new(p.a.clone(), p.b.clone()).and_then(|q| verify_recursion(rel, &q, order));
            let (status, residual) = match res {
                Ok(s) if s.is_zero() => (Status::Verified, None),
                Ok(s) => (Status::Mismatch, Some(s.to_string())),
                Err(e) => (Status::Error, Some(e.to_string())),
            };
            rows.push(RecursionRow {
                id: rel.id().to_string(),
                params,
                order,
                status,
                residual,
            });
        }
    }
    rows
}

pub fn run_actions(points: &[ParamPoint], order: u32) -> Vec<ActionRow> {
    let mut rows = Vec::new();
    for family in Family::ALL {
        for p in points {
            for &id in family.operators() {
                let params = p.for_family(family);
                let res = basis(family, p).and_then(|b| verify_action(id, &b, order));
                let row = match res {
                    Ok(rep) => ActionRow {
                        family,
                        operator: id.to_string(),
                        params,
                        order,
                        coefficient: Some(rep.rule.coefficient.clone()),
                        shift: Some(rep.rule.shift),
                        status: if rep.passed() { Status::Verified } else { Status::Mismatch },
                        detail: rep.witness.map(|w| format!("{}: {} vs {}", w.monomial, w.lhs, w.rhs)),
                    },
                    Err(e) => ActionRow {
                        family,
                        operator: id.to_string(),
                        params,
                        order,
                        coefficient: None,
                        shift: None,
                        status: Status::Error,
                        detail: Some(e.to_string()),
                    },
                };
                rows.push(row);
            }
        }
    }
    rows
}

pub fn run_flows(start: &FlowPoint, alpha: f64, step: f64, tol: f64) -> Vec<FlowRow> {
    FlowSpec::all()
        .into_iter()
        .map(|spec| {
            let res = flow_check(&spec, start, alpha, step);
            let (max_deviation, status, error) = match res {
                Ok(d) if d <= tol => (Some(d), Status::Verified, None),
                Ok(d) => (Some(d), Status::Mismatch, None),
                Err(e) => (None, Status::Error, Some(e.to_string())),
            };
            FlowRow {
                family: spec.family,
                operator: spec.operator.to_string(),
                system: spec.characteristic_system(),
                alpha,
                step,
                max_deviation,
                status,
                error,
            }
        })
        .collect()
}

fn expansion_string(ops: &[OperatorId], coeffs: &[ExactScalar]) -> String {
    let parts: Vec<String> = ops
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(o, c)| if c.is_one() { o.to_string() } else { format!("{c}·{o}") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn random_scalar(rng: &mut ChaCha8Rng) -> ExactScalar {
    ExactScalar::new(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

pub fn run_commutators(span_check: bool, seed: u64, samples: usize) -> CommutatorSection {
    let cat = build_catalogue();
    let mut sec = CommutatorSection {
        antisymmetry_pairs: 0,
        antisymmetry_failures: Vec::new(),
        bilinearity_samples: 0,
        bilinearity_failures: Vec::new(),
        jacobi_triples: 0,
        jacobi_failures: Vec::new(),
        ia_ea_is_ea: false,
        span: Vec::new(),
        errors: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for family in Family::ALL {
        let ids = family.operators();
        let ops: Vec<&DiffOperator> = ids.iter().map(|&id| &cat[&(family, id)]).collect();
        let mut table: BTreeMap<(usize, usize), DiffOperator> = BTreeMap::new();
        for i in 0..ops.len() {
            for j in 0..ops.len() {
                match ops[i].commutator(ops[j]) {
                    Ok(c) => {
                        table.insert((i, j), c);
                    }
                    Err(e) => sec.errors.push(format!("{family} [{}, {}]: {e}", ids[i], ids[j])),
                }
            }
        }
        for i in 0..ops.len() {
            for j in 0..ops.len() {
                sec.antisymmetry_pairs += 1;
                if let (Some(ab), Some(ba)) = (table.get(&(i, j)), table.get(&(j, i))) {
                    if !ab.add(ba).is_zero() {
                        sec.antisymmetry_failures.push(format!("{family} [{}, {}]", ids[i], ids[j]));
                    }
                }
            }
        }
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                for k in j + 1..ops.len() {
                    sec.jacobi_triples += 1;
                    let term = |p: usize, q: usize, r: usize| -> Result<DiffOperator> { ops[p].commutator(&table[&(q, r)]) };
                    match (term(i, j, k), term(j, k, i), term(k, i, j)) {
                        (Ok(x), Ok(y), Ok(z)) if x.add(&y).add(&z).is_zero() => {}
                        (Ok(_), Ok(_), Ok(_)) => sec.jacobi_failures.push(format!("{family} ({}, {}, {})", ids[i], ids[j], ids[k])),
                        _ => sec.errors.push(format!("{family} Jacobi ({}, {}, {})", ids[i], ids[j], ids[k])),
                    }
                }
            }
        }
        for _ in 0..samples {
            sec.bilinearity_samples += 1;
            let a = *ops.choose(&mut rng).unwrap();
            let a2 = *ops.choose(&mut rng).unwrap();
            let b = *ops.choose(&mut rng).unwrap();
            let (s, t) = (random_scalar(&mut rng), random_scalar(&mut rng));
            let left = a.scale(&s).add(&a2.scale(&t)).commutator(b);
            let right = a.commutator(b).and_then(|x| Ok(x.scale(&s).add(&a2.commutator(b)?.scale(&t))));
            match (left, right) {
                (Ok(l), Ok(r)) if l == r => {}
                (Ok(l), Ok(r)) => sec.bilinearity_failures.push(format!("{family}: {l} vs {r}")),
                (Err(e), _) | (_, Err(e)) => sec.errors.push(e.to_string()),
            }
        }
        if span_check {
            let basis: Vec<DiffOperator> = ops.iter().map(|o| (*o).clone()).collect();
            for i in 0..ops.len() {
                for j in i + 1..ops.len() {
                    let Some(c) = table.get(&(i, j)) else { continue };
                    let (in_span, expansion) = match express_in_span(c, &basis) {
                        SpanResult::InSpan(coeffs) => (true, expansion_string(ids, &coeffs)),
                        SpanResult::NotInSpan { residual } => (false, residual.to_string()),
                    };
                    sec.span.push(SpanRow {
                        family,
                        left: ids[i].to_string(),
                        right: ids[j].to_string(),
                        commutator: c.to_string(),
                        in_span,
                        expansion,
                    });
                }
            }
        }
    }
    let ea = &cat[&(Family::Psi2, OperatorId::Ea)];
    let ia = &cat[&(Family::Psi2, OperatorId::Ia)];
    let basis: Vec<DiffOperator> = Family::Psi2.operators().iter().map(|&id| cat[&(Family::Psi2, id)].clone()).collect();
    sec.ia_ea_is_ea = match ia.commutator(ea) {
        Ok(c) => match express_in_span(&c, &basis) {
            SpanResult::InSpan(coeffs) => Family::Psi2
                .operators()
                .iter()
                .zip(&coeffs)
                .all(|(&id, k)| if id == OperatorId::Ea { k.is_one() } else { k.is_zero() }),
            SpanResult::NotInSpan { .. } => false,
        },
        Err(_) => false,
    };
    sec
}

/// Findings where a written form of an operator, flow or identity does not
/// hold, each backed by a computation.
pub fn discrepancies(settings: &RunSettings, identities: Option<&VerificationReport>) -> Vec<String> {
    let mut out = Vec::new();
    let p = &settings.identities.points[0].for_family(Family::F11);
    if let Ok(fam) = basis(Family::F11, p) {
        if let Ok(rule) = expected_action(OperatorId::Ea, &fam) {
            if let Ok(rep) = verify_action_with(&displayed_f11_ea(), rule, &fam, settings.action_order) {
                let verdict = match &rep.witness {
                    Some(w) => format!("fails at {} ({} vs {})", w.monomial, w.lhs, w.rhs),
                    None => "passes".into(),
                };
                out.push(format!(
                    "1F1 E_a written as {} {verdict} at {p}; the engine installs {}",
                    displayed_f11_ea(),
                    operator(Family::F11, OperatorId::Ea).unwrap()
                ));
            }
        }
    }
    // the closed form x(z+α)/z, z+α with multiplier z/(z+α) is the flow of E_b', not E_b
    if let (Some(eb), Some(ebp)) = (operator(Family::F11, OperatorId::Eb), operator(Family::F11, OperatorId::EbPrime)) {
        let borrowed = FlowSpec {
            family: Family::F11,
            operator: OperatorId::EbPrime,
            generator: eb.clone(),
        };
        if let Ok(d) = flow_check(&borrowed, &settings.flow_start, settings.alpha, settings.step) {
            out.push(format!(
                "flow x(z+α)/z, z+α, multiplier z/(z+α) deviates by {d:.3e} from the E_b flow ({eb}) but integrates E_b' ({ebp})"
            ));
        }
    }
    if let Some(rep) = identities {
        let mut seen = Vec::new();
        for row in &rep.records {
            if row.variant == Variant::AsStated && row.status == Status::Mismatch && row.mode == RowMode::Formal && !seen.contains(&row.id) {
                seen.push(row.id);
                let w = row.witness.as_ref().unwrap();
                out.push(format!(
                    "{} as stated fails at {} ({} vs {}) for {}; corrected candidate verified",
                    row.id, w.monomial, w.lhs, w.rhs, row.params
                ));
            }
        }
    }
    out
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn run(settings: &RunSettings) -> Result<FullReport> {
    let mut timing = BTreeMap::new();
    let scope = settings.scope;
    let points = &settings.identities.points;
    if points.is_empty() {
        return Err(Error::Config("no parameter points".into()));
    }

    let identities = if scope.includes(Scope::Identities) {
        let t = Instant::now();
        let rep = match run_suite(&settings.identities) {
            Ok(rep) => rep,
            Err(SuiteError::Failure(rep)) => *rep,
            Err(SuiteError::Engine(e)) => return Err(e),
        };
        timing.insert("identities".into(), ms(t));
        Some(rep)
    } else {
        None
    };
    let recursions = scope.includes(Scope::Recursions).then(|| {
        let t = Instant::now();
        let rows = run_recursions(points, settings.recursion_order);
        timing.insert("recursions".into(), ms(t));
        rows
    });
    let actions = scope.includes(Scope::Actions).then(|| {
        let t = Instant::now();
        let rows = run_actions(points, settings.action_order);
        timing.insert("actions".into(), ms(t));
        rows
    });
    let flows = scope.includes(Scope::Flows).then(|| {
        let t = Instant::now();
        let rows = run_flows(&settings.flow_start, settings.alpha, settings.step, settings.flow_tol);
        timing.insert("flows".into(), ms(t));
        rows
    });
    let commutators = scope.includes(Scope::Commutators).then(|| {
        let t = Instant::now();
        let sec = run_commutators(settings.span_check, settings.seed, settings.bilinearity_samples);
        timing.insert("commutators".into(), ms(t));
        sec
    });

    let passed = identities.as_ref().is_none_or(|r| r.invariant_holds())
        && recursions.iter().flatten().all(|r| r.status == Status::Verified)
        && actions.iter().flatten().all(|r| r.status == Status::Verified)
        && flows.iter().flatten().all(|r| r.status == Status::Verified)
        && commutators.as_ref().is_none_or(|c| c.passed());
    let discrepancies = discrepancies(settings, identities.as_ref());
    Ok(FullReport {
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        scope,
        passed,
        identities,
        recursions,
        actions,
        flows,
        commutators,
        discrepancies,
        timing,
    })
}

/// Removes every timing field so two runs can be compared byte for byte.
pub fn strip_timing(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Object(map) => {
            map.remove("timing");
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

pub fn to_json(report: &FullReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Verified => "PASS",
        Status::Mismatch => "FAIL",
        Status::Error => "ERROR",
    }
}

fn identity_row_md(row: &ReportRow) -> String {
    let at = match (row.orders, row.chi) {
        (Some(o), _) => format!("N={} M={}", o.n, o.m),
        (_, Some(chi)) => format!("χ={chi}"),
        _ => String::new(),
    };
    let detail = match (&row.witness, &row.error) {
        (Some(w), _) => format!("{}: {} vs {}", w.monomial, w.lhs, w.rhs),
        (_, Some(e)) => e.clone(),
        _ => String::new(),
    };
    let mode = match row.mode {
        RowMode::Formal => "formal",
        RowMode::Numeric => "numeric",
    };
    format!(
        "| {} | {} | {} | {} | {} | {} | {} |",
        row.id,
        row.variant,
        row.params,
        mode,
        at,
        status_str(row.status),
        detail
    )
}

/// Human-readable report; carries no timing so it is reproducible as is.
pub fn to_markdown(report: &FullReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Verification report\n");
    let _ = writeln!(s, "engine {} · scope {:?} · overall {}\n", report.engine_version, report.scope, if report.passed { "PASS" } else { "FAIL" });
    if let Some(rep) = &report.identities {
        let m = &rep.summary;
        let _ = writeln!(s, "## Identities\n");
        let _ = writeln!(
            s,
            "{} rows: {} verified, {} mismatched, {} errors; as stated {} verified / {} mismatched; corrected candidates verified {}; unresolved {}\n",
            m.rows, m.verified, m.mismatched, m.errors, m.as_stated_verified, m.as_stated_mismatched, m.corrected_verified, m.unresolved
        );
        let _ = writeln!(s, "| id | variant | params | mode | at | status | witness |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        for row in &rep.records {
            let _ = writeln!(s, "{}", identity_row_md(row));
        }
        for u in &rep.unresolved {
            let _ = writeln!(s, "\nUNRESOLVED: {u}");
        }
        s.push('\n');
    }
    if let Some(rows) = &report.recursions {
        let _ = writeln!(s, "## Recursions\n\n| relation | params | M | status |\n|---|---|---|---|");
        for r in rows {
            let _ = writeln!(s, "| {} | {} | {} | {} |", r.id, r.params, r.order, status_str(r.status));
        }
        s.push('\n');
    }
    if let Some(rows) = &report.actions {
        let _ = writeln!(s, "## Actions\n\n| family | operator | params | coefficient | shift | status |\n|---|---|---|---|---|---|");
        for r in rows {
            let coeff = r.coefficient.as_ref().map_or(String::new(), |c| c.to_string());
            let shift = r.shift.map_or(String::new(), |(a, b, c)| format!("({a}, {b}, {c})"));
            let _ = writeln!(s, "| {} | {} | {} | {} | {} | {} |", r.family, r.operator, r.params, coeff, shift, status_str(r.status));
        }
        s.push('\n');
    }
    if let Some(rows) = &report.flows {
        let _ = writeln!(s, "## Flows\n\n| family | operator | system | max deviation | status |\n|---|---|---|---|---|");
        for r in rows {
            let dev = r.max_deviation.map_or_else(|| r.error.clone().unwrap_or_default(), |d| format!("{d:.3e}"));
            let _ = writeln!(s, "| {} | {} | {} | {} | {} |", r.family, r.operator, r.system.join("; "), dev, status_str(r.status));
        }
        s.push('\n');
    }
    if let Some(c) = &report.commutators {
        let _ = writeln!(s, "## Commutators\n");
        let _ = writeln!(s, "- antisymmetry: {} pairs, {} failures", c.antisymmetry_pairs, c.antisymmetry_failures.len());
        let _ = writeln!(s, "- bilinearity: {} samples, {} failures", c.bilinearity_samples, c.bilinearity_failures.len());
        let _ = writeln!(s, "- Jacobi: {} triples, {} failures", c.jacobi_triples, c.jacobi_failures.len());
        let _ = writeln!(s, "- [I_a, E_a] = E_a (psi2): {}", c.ia_ea_is_ea);
        for e in &c.errors {
            let _ = writeln!(s, "- ERROR: {e}");
        }
        if !c.span.is_empty() {
            let _ = writeln!(s, "\n| family | [A, B] | commutator | in span | expansion / residual |\n|---|---|---|---|---|");
            for r in &c.span {
                let _ = writeln!(s, "| {} | [{}, {}] | {} | {} | {} |", r.family, r.left, r.right, r.commutator, r.in_span, r.expansion);
            }
        }
        s.push('\n');
    }
    if !report.discrepancies.is_empty() {
        let _ = writeln!(s, "## Discrepancies\n");
        for d in &report.discrepancies {
            let _ = writeln!(s, "- {d}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_timing_removes_nested_fields() {
        let mut v: serde_json::Value = serde_json::json!({
            "timing": {"x": 1.0},
            "rows": [{"elapsed_ms": 3.0, "keep": 1}],
        });
        strip_timing(&mut v);
        assert_eq!(v, serde_json::json!({"rows": [{"keep": 1}]}));
    }

    #[test]
    fn commutator_section_holds() {
        let sec = run_commutators(true, 7, 8);
        assert!(sec.passed(), "{sec:?}");
        assert_eq!(sec.jacobi_triples, 56 + 84);
        assert_eq!(sec.span.len(), 28 + 36);
    }

    #[test]
    fn flows_all_pass() {
        let s = RunSettings::default();
        let rows = run_flows(&s.flow_start, s.alpha, s.step, s.flow_tol);
        assert_eq!(rows.len(), 17);
        for r in rows {
            assert_eq!(r.status, Status::Verified, "{r:?}");
        }
    }

    #[test]
    fn scope_parsing() {
        assert_eq!("flows".parse::<Scope>().unwrap(), Scope::Flows);
        assert!("nope".parse::<Scope>().is_err());
    }

    #[test]
    fn discrepancy_list_names_displayed_forms() {
        let d = discrepancies(&RunSettings::default(), None);
        assert_eq!(d.len(), 2);
        assert!(d[0].contains("fails"));
    }
}
