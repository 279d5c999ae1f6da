//! Self-check suite run by `anticipate verify`.
//!
//! Every check compares two independent routes to the same number and
//! passes only when they agree within the requested tolerance.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::bloch::{joint_table, projector, trace_product, validate_measurement, HermitianOp, Measurement, DEFAULT_TOL};
use crate::game::{bayes_optimal_post, exclusion_info_map, success_no_cpost, success_with_cpost, PostProcessing};
use crate::sim::{
    angle_schedule, empirical_success, estimate, exact_tally, native_decomposition_check, plan_experiment, sample_run,
    BasisMode, NoiseModel,
};
use crate::solver::{
    anticipative_success, build_auxiliary, certify_optimal, counts, enumerate_functions, gamma, lambda_argmax,
    reduce_to_povm, theorem_function, theorem_measurement, Order,
};
use crate::task::{
    anticipative_directions, anticipative_measurement, closed_form, default_grid, game, make_ensemble, posterior_order,
    pq_values, priority_post, priority_table, standard_measurement, MeasurementKind, ScenarioId, TaskParams,
};

/// Every operation the suite is expected to exercise.
pub const OPERATIONS: &[&str] = &[
    "trace_product",
    "validate_measurement",
    "projector",
    "joint_table",
    "exclusion_info_map",
    "success_with_cpost",
    "success_no_cpost",
    "bayes_optimal_post",
    "enumerate_functions",
    "counts",
    "gamma",
    "build_auxiliary",
    "lambda_argmax",
    "theorem_measurement",
    "certify_optimal",
    "reduce_to_povm",
    "anticipative_success",
    "make_ensemble",
    "standard_measurement",
    "anticipative_directions",
    "anticipative_measurement",
    "pq_values",
    "closed_form",
    "priority_table",
    "plan_experiment",
    "sample_run",
    "empirical_success",
    "angle_schedule",
    "native_decomposition_check",
];

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    pub thetas: Vec<f64>,
    /// Multiplies every auxiliary member after construction; the
    /// normalization and certificate checks must then fail.
    pub tamper_normalization: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: DEFAULT_TOL,
            thetas: default_grid(),
            tamper_normalization: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Largest discrepancy seen, or a failure description.
    pub detail: String,
    pub operations: &'static [&'static str],
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn covered_operations(&self) -> Vec<&'static str> {
        let mut ops: Vec<&'static str> = self.checks.iter().flat_map(|c| c.operations.iter().copied()).collect();
        ops.sort_unstable();
        ops.dedup();
        ops
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {:<26} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Tracks the worst discrepancy and the first hard failure of a check.
struct Probe {
    tol: f64,
    worst: f64,
    failure: Option<String>,
}

impl Probe {
    fn new(tol: f64) -> Self {
        Probe {
            tol,
            worst: 0.0,
            failure: None,
        }
    }

    // Negated comparisons make a NaN difference count as a failure.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn close(&mut self, what: impl FnOnce() -> String, got: f64, want: f64) {
        let d = (got - want).abs();
        if !(d <= self.worst) {
            self.worst = d;
        }
        if !(d <= self.tol) && self.failure.is_none() {
            self.failure = Some(format!("{}: {got} vs {want} (|diff| {d:.3e})", what()));
        }
    }

    fn ensure(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self, name: &'static str, operations: &'static [&'static str]) -> CheckResult {
        CheckResult {
            name,
            passed: self.failure.is_none(),
            detail: self
                .failure
                .unwrap_or_else(|| format!("max |diff| {:.3e} (tol {:.1e})", self.worst, self.tol)),
            operations,
        }
    }
}

fn run_check(
    name: &'static str,
    operations: &'static [&'static str],
    tol: f64,
    body: impl FnOnce(&mut Probe) -> crate::Result<()>,
) -> CheckResult {
    let mut probe = Probe::new(tol);
    if let Err(e) = body(&mut probe) {
        probe.failure.get_or_insert(format!("error: {e}"));
    }
    probe.finish(name, operations)
}

pub fn run_verification(opts: &VerifyOptions) -> VerifyReport {
    let tol = opts.tol;
    let thetas = &opts.thetas;
    let params: Vec<TaskParams> = thetas.iter().filter_map(|t| TaskParams::new(*t).ok()).collect();
    let mut checks = Vec::new();

    if params.len() != thetas.len() || params.is_empty() {
        checks.push(CheckResult {
            name: "grid",
            passed: false,
            detail: "θ grid must be nonempty and inside (0, π/2]".into(),
            operations: &[],
        });
        return VerifyReport { checks };
    }

    checks.push(run_check(
        "qubit-operators",
        &["trace_product", "validate_measurement", "projector", "joint_table", "make_ensemble", "standard_measurement", "anticipative_measurement"],
        tol,
        |pr| {
            pr.close(|| "tr[1·1]".into(), trace_product(&HermitianOp::IDENTITY, &HermitianOp::IDENTITY), 2.0);
            for p in &params {
                let ens = make_ensemble(p);
                for (kind, m) in [("standard", standard_measurement(p)), ("anticipative", anticipative_measurement(p))] {
                    let report = validate_measurement(&m, tol);
                    pr.ensure(report.is_valid(), || format!("{kind} at θ={}: {report}", p.theta()));
                    pr.close(|| format!("{kind} effect sum"), report.completeness_deviation, 0.0);
                    let table = joint_table(&ens, &m, DEFAULT_TOL)?;
                    pr.close(|| format!("{kind} table total at θ={}", p.theta()), table.total(), 1.0);
                    for (x, row) in table.rows().iter().enumerate() {
                        pr.close(|| format!("{kind} row {x} sum"), row.iter().sum(), 0.25);
                    }
                }
                let (_, n) = anticipative_directions(p);
                let proj = projector(n)?;
                pr.close(|| "tr[P²]".into(), trace_product(&proj, &proj), 1.0);
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "closed-form-equivalence",
        &["exclusion_info_map", "success_with_cpost", "success_no_cpost", "bayes_optimal_post", "closed_form", "pq_values"],
        tol,
        |pr| {
            for p in &params {
                for s in ScenarioId::all() {
                    let g = game(s.kind, p)?;
                    let info = exclusion_info_map(&g, s.k)?;
                    let post = bayes_optimal_post(&g, &info)?;
                    let value = if s.k == 0 {
                        success_no_cpost(&g, &post)?
                    } else {
                        success_with_cpost(&g, &info, &post)?
                    };
                    pr.close(|| format!("{s} at θ={}", p.theta()), value, closed_form(s, p));
                }
                let an0 = ScenarioId::new(MeasurementKind::Anticipative, 0)?;
                pr.close(|| "ε^an_0 vs 4Q₊".into(), closed_form(an0, p), 4.0 * pq_values(p).q_plus);
            }
            Ok(())
        },
    ));

    checks.push(run_check("priority-tables", &["priority_table"], tol, |pr| {
        for p in &params {
            for kind in MeasurementKind::ALL {
                let table = joint_table(&make_ensemble(p), &kind.measurement(p), DEFAULT_TOL)?;
                for (z, order) in priority_table(kind) {
                    let zi = table.outcomes().iter().position(|o| *o == z).expect("outcome present");
                    let derived = posterior_order(&table, zi);
                    pr.ensure(derived == order, || format!("{kind} outcome {z} at θ={}: {derived:?}", p.theta()));
                }
                let g = game(kind, p)?;
                for k in 1..3 {
                    let info = exclusion_info_map(&g, k)?;
                    let table_post = success_with_cpost(&g, &info, &priority_post(kind, k)?)?;
                    let bayes = success_with_cpost(&g, &info, &bayes_optimal_post(&g, &info)?)?;
                    pr.close(|| format!("{kind} k={k} priority vs Bayes"), table_post, bayes);
                }
            }
        }
        Ok(())
    }));

    checks.push(run_check(
        "enumeration-oracle",
        &["enumerate_functions", "counts", "gamma", "build_auxiliary", "lambda_argmax"],
        tol,
        |pr| {
            for k in 1..3 {
                let functions = enumerate_functions(k)?;
                pr.ensure(functions.len() == if k == 1 { 256 } else { 4096 }, || format!("k={k}: {} functions", functions.len()));
                for phi in &functions {
                    let c = counts(phi, k)?;
                    pr.ensure(c.is_feasible(k), || format!("k={k}: infeasible counts {c:?} for {phi}"));
                }
                let expected_c = if k == 1 { 64.0 } else { 1024.0 };
                for p in &params {
                    let mut aux = build_auxiliary(p.theta(), k)?;
                    if let Some(f) = opts.tamper_normalization {
                        aux = aux.with_scaled_members(f);
                    }
                    pr.close(|| format!("k={k} C"), aux.normalization(), expected_c);
                    pr.close(|| format!("k={k} Σ tr ē at θ={}", p.theta()), aux.total_trace(), 1.0);
                    pr.close(|| "Δ".into(), aux.delta(), 1.0);
                    let (lambda, maximizers) = lambda_argmax(&aux);
                    let closed = (2.0 * k as f64 + 2.0 + p.root()) / (24.0 * aux.normalization());
                    pr.close(|| format!("k={k} Λ via γ at θ={}", p.theta()), lambda, closed);
                    pr.close(|| format!("k={k} Λ via eigenvalues at θ={}", p.theta()), aux.lambda(), closed);
                    let best_gamma = functions
                        .iter()
                        .map(|phi| gamma(&counts(phi, k).expect("valid"), p.cos_theta()))
                        .fold(f64::NEG_INFINITY, f64::max);
                    pr.close(|| format!("k={k} max γ"), best_gamma, 2.0 * k as f64 + 2.0 + p.root());
                    for order in [Order::AB, Order::BA] {
                        for j in [true, false] {
                            let phi = theorem_function(order, j, k)?;
                            pr.ensure(maximizers.contains(&phi), || format!("k={k}: {phi} not a maximizer"));
                        }
                    }
                }
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "optimality-certificates",
        &["theorem_measurement", "certify_optimal", "anticipative_success"],
        tol,
        |pr| {
            for k in 1..3 {
                for p in &params {
                    let mut aux = build_auxiliary(p.theta(), k)?;
                    if let Some(f) = opts.tamper_normalization {
                        aux = aux.with_scaled_members(f);
                    }
                    let ab = theorem_measurement(p, k, Order::AB)?;
                    let ba = theorem_measurement(p, k, Order::BA)?;
                    let mix = Measurement::convex_combination(&[(0.5, &ab.measurement), (0.5, &ba.measurement)])?;
                    for (name, m) in [("M̄ab", &ab.measurement), ("M̄ba", &ba.measurement), ("mixture", &mix)] {
                        pr.ensure(certify_optimal(&aux, m, tol), || format!("k={k} {name} not certified at θ={}", p.theta()));
                    }
                    let s = ScenarioId::new(MeasurementKind::Anticipative, k)?;
                    pr.close(|| format!("k={k} 2CΛ at θ={}", p.theta()), anticipative_success(&aux), closed_form(s, p));
                }
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "reduction",
        &["reduce_to_povm", "anticipative_directions", "anticipative_measurement"],
        tol,
        |pr| {
            for k in 1..3 {
                for p in &params {
                    let aux = build_auxiliary(p.theta(), k)?;
                    let ab = theorem_measurement(p, k, Order::AB)?;
                    let ba = theorem_measurement(p, k, Order::BA)?;
                    let (povm, post) = reduce_to_povm(&aux, &ab, &ba, tol)?;
                    let reference = anticipative_measurement(p);
                    for (z, e) in reference.effects() {
                        pr.close(|| format!("k={k} effect {z}"), povm.effect(z).max_abs_diff(e), 0.0);
                    }
                    let (m, n) = anticipative_directions(p);
                    pr.close(|| "|m|".into(), m.norm(), 1.0);
                    pr.close(|| "|n|".into(), n.norm(), 1.0);
                    let expected: PostProcessing<_, _> = priority_post(MeasurementKind::Anticipative, k)?;
                    pr.ensure(post == expected, || format!("k={k}: reduced post-processing differs from priority table"));
                }
            }
            Ok(())
        },
    ));

    checks.push(run_check("inequality-chain", &["closed_form"], tol, |pr| {
        for p in &params {
            let v = |kind, k| closed_form(ScenarioId { kind, k }, p);
            let st0 = v(MeasurementKind::Standard, 0);
            let an0 = v(MeasurementKind::Anticipative, 0);
            pr.ensure(an0 <= st0 + tol, || format!("ε^an_0 > ε^st_0 at θ={}", p.theta()));
            for k in 1..3 {
                let (st, an) = (v(MeasurementKind::Standard, k), v(MeasurementKind::Anticipative, k));
                pr.ensure(st0 <= st + tol && st <= an + tol, || format!("chain broken at k={k}, θ={}", p.theta()));
                pr.ensure(an - st > 0.0, || format!("no anticipative advantage at k={k}, θ={}", p.theta()));
            }
        }
        Ok(())
    }));

    checks.push(run_check("decomposition-identity", &["native_decomposition_check"], tol, |pr| {
        for t in thetas.iter().copied().chain([0.0, FRAC_PI_2, std::f64::consts::PI, -1.3]) {
            pr.ensure(native_decomposition_check(t, tol), || format!("identity fails at θ={t}"));
        }
        Ok(())
    }));

    checks.push(run_check(
        "simulator",
        &["plan_experiment", "sample_run", "empirical_success", "angle_schedule"],
        tol,
        |pr| {
            let plan = plan_experiment(thetas, 64, 7)?;
            pr.ensure(plan.runs.len() == 16 * thetas.len(), || format!("{} runs", plan.runs.len()));
            let run = plan.runs[0];
            let first = sample_run(&plan, &run, &NoiseModel::noiseless())?;
            pr.ensure(first == sample_run(&plan, &run, &NoiseModel::noiseless())?, || "sampling not reproducible".into());
            let small = plan_experiment(&thetas[..1], 8, 7)?;
            let records = small
                .runs
                .iter()
                .map(|r| sample_run(&small, r, &NoiseModel::noiseless()))
                .collect::<crate::Result<Vec<_>>>()?
                .concat();
            for k in 0..3 {
                let est = empirical_success(&records, k, BasisMode::EqualSplit)?;
                pr.ensure(est.len() == 2, || "estimates per kind".into());
            }
            let exact = exact_tally(thetas, &NoiseModel::noiseless())?;
            for k in 0..3 {
                for e in estimate(&exact, k, BasisMode::EqualSplit)? {
                    let p = TaskParams::new(e.theta)?;
                    let s = ScenarioId::new(e.kind, k)?;
                    pr.close(|| format!("exact-weight {s} at θ={}", e.theta), e.value, closed_form(s, &p));
                }
            }
            for p in &params {
                let sched = angle_schedule(p.theta(), crate::task::QubitLabel::PLUS_A, MeasurementKind::Anticipative, crate::task::Axis::N)?;
                let (_, n) = anticipative_directions(p);
                pr.close(|| "P(+n | +a)".into(), sched.plus_probability(1.0), 0.5 * (1.0 + p.a().dot(&n)));
            }
            Ok(())
        },
    ));

    VerifyReport { checks }
}
