use nalgebra::Matrix4;
use num_integer::Integer;
use num_rational::Ratio;
use serde_json::{json, Value};

use super::output::{Outcome, Output};
use super::{
    BoundArgs, ClassArgs, CoefficientArgs, Command, Family, Figure, LmgArgs, ObjectiveArg, Panel, ReduceArgs,
    ViolateArgs,
};
use crate::error::{Error, Result};
use crate::inequalities::{
    check_user_bound, class_b_build, class_b_core_holds, classical_bound_bruteforce, classical_bound_exact,
    classify_facets_as_class_b, dicke_build, dicke_family_rational, dicke_saturating_counts, dicke_scale,
    invert_class_b, BoundCheck, ClassBParams, BRUTEFORCE_BOUND_LIMIT,
};
use crate::json::ratio;
use crate::model::{phi, BellInequality, Coefficients, StrategyCounts};
use crate::polytope::{self, enumerate_boundary_counts, facets_bruteforce, is_tight, REFERENCE_FACET_COUNTS};
use crate::quantum::{
    bell_operator_sym, collective_to_pairwise, dicke_expectation_closed_form, dicke_violation_analytic,
    lmg_ground_full, lmg_ground_state, optimize_theta, reduced_bell_operator, reduced_two_qubit, theta_scan,
    BellExpression, DickeState, LmgParams, MeasurementSettings, Objective, ViolationReport, FULL_SPACE_LIMIT,
};

/// Largest `n` with built-in reference facet counts.
const REFERENCE_MAX_N: u32 = 20;

const ELEMENTARY: Coefficients = Coefficients::new(-2, 0, 1, -1, 1);

pub fn execute(command: &Command, warnings: &mut Vec<String>) -> Result<Outcome> {
    match command {
        Command::Vertices { n } => vertices(*n),
        Command::Facets { n, oracle } => facets(*n, *oracle, warnings),
        Command::Bound(a) => bound(a),
        Command::Classbuild(a) => classbuild(a),
        Command::Violate(a) => violate(a),
        Command::Dicke { n } => dicke(*n),
        Command::Lmg(a) => lmg(a),
        Command::Reduce(a) => reduce(a),
    }
}

fn counts_json(p: &StrategyCounts) -> Value {
    json!(p.as_array())
}

fn matrix_json(m: &Matrix4<f64>) -> Value {
    json!((0..4).map(|r| (0..4).map(|c| m[(r, c)]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn ceil_half(n: u32) -> u32 {
    Integer::div_ceil(&n, &2)
}

fn vertices(n: u32) -> Result<Outcome> {
    let rows: Vec<Value> = enumerate_boundary_counts(n)?
        .iter()
        .map(|p| {
            let v = phi(p);
            json!({
                "n": n, "a": p.a(), "b": p.b(), "c": p.c(), "d": p.d(),
                "s0": v.s0, "s1": v.s1, "s00": v.s00, "s01": v.s01, "s11": v.s11,
            })
        })
        .collect();
    let summary = json!({ "n": n, "count": rows.len(), "expected": polytope::vertex_count(n) });
    Ok(Output::Stream {
        kind: "vertex",
        columns: vec!["n", "a", "b", "c", "d", "s0", "s1", "s00", "s01", "s11"],
        rows,
        summary,
    }
    .into())
}

fn facets(n: u32, oracle: bool, warnings: &mut Vec<String>) -> Result<Outcome> {
    if n > REFERENCE_MAX_N {
        warnings
            .push(format!("n = {n} is beyond the reference table; runtime grows quickly and no comparison is made"));
    }
    let list = polytope::facets(n)?;
    let class = classify_facets_as_class_b(&list);
    let rows: Vec<Value> = list
        .facets
        .iter()
        .map(|f| {
            let mut v = to_json(f);
            v["class_b"] = json!(invert_class_b(f).is_some());
            v
        })
        .collect();
    let reference = REFERENCE_FACET_COUNTS.iter().find(|r| r.0 == n);
    let matches = reference.map(|&(_, c, t)| c == class.count && t == list.len());
    let mut summary = json!({
        "n": n,
        "total": list.len(),
        "class_b_count": class.count,
        "class_b_convention": "each canonical facet counted once; both sigma signs and both branches admitted",
        "vertex_count": list.vertex_count,
        "reference": reference.map(|&(_, c, t)| json!({ "total": t, "class_b_count": c })),
        "matches_reference": matches,
    });
    let mut failure = None;
    if matches == Some(false) {
        failure = Some(Error::Consistency(format!("facet counts at n = {n} differ from the reference table")));
    }
    if oracle {
        let brute = facets_bruteforce(n)?;
        let agrees = brute == list.facets;
        summary["oracle_total"] = json!(brute.len());
        summary["oracle_agrees"] = json!(agrees);
        if !agrees {
            failure = Some(Error::Consistency(format!("hull and brute-force facets differ at n = {n}")));
        }
    }
    Ok(Outcome {
        output: Output::Stream {
            kind: "facet",
            columns: vec!["n", "alpha", "beta", "gamma", "delta", "epsilon", "beta_c", "class_b"],
            rows,
            summary,
        },
        failure,
    })
}

/// Integer coefficients to evaluate plus the factor dividing them back to the
/// family's own normalization.
fn resolve_coefficients(args: &CoefficientArgs, n: u32) -> Result<(Option<Family>, Coefficients, i64)> {
    Ok(match args.family {
        Some(Family::Elementary) => (Some(Family::Elementary), ELEMENTARY, 1),
        Some(Family::Dicke) => (Some(Family::Dicke), *dicke_build(n)?.coefficients(), dicke_scale(n)),
        None => {
            let g = |x: Option<i64>| x.unwrap_or(0);
            (None, Coefficients::new(g(args.alpha), g(args.beta), g(args.gamma), g(args.delta), g(args.epsilon)), 1)
        }
    })
}

fn bound(args: &BoundArgs) -> Result<Outcome> {
    let n = args.n;
    let (family, coefficients, scale) = resolve_coefficients(&args.coefficients, n)?;
    let report = classical_bound_exact(&coefficients, n)?;
    let canonical = report.inequality(coefficients)?;
    let mut body = json!({
        "n": n,
        "family": family,
        "coefficients": to_json(&coefficients),
        "beta_c": ratio(&report.beta_c),
        "minimizers": report.minimizers.iter().map(counts_json).collect::<Vec<_>>(),
        "canonical": to_json(&canonical),
    });
    let mut failure = None;
    if family == Some(Family::Dicke) {
        let (c, formula) = dicke_family_rational(n)?;
        let own = report.beta_c / Ratio::from_integer(i128::from(scale));
        body["family_form"] = json!({
            "alpha": ratio(&c[0]), "beta": ratio(&c[1]), "gamma": ratio(&c[2]),
            "delta": ratio(&c[3]), "epsilon": ratio(&c[4]),
            "beta_c": ratio(&own),
            "beta_c_formula": ratio(&formula),
            "scale": scale,
        });
        if own != formula {
            failure = Some(Error::Consistency(format!("Dicke bound formula {formula} differs from exact {own}")));
        }
    }
    if args.bruteforce {
        if n > BRUTEFORCE_BOUND_LIMIT {
            return Err(Error::TooLarge { what: "brute-force classical bound", n, limit: BRUTEFORCE_BOUND_LIMIT });
        }
        let brute = classical_bound_bruteforce(&coefficients, n)?;
        body["bruteforce_beta_c"] = ratio(&brute);
        body["bruteforce_agrees"] = json!(brute == report.beta_c);
        if brute != report.beta_c {
            failure =
                Some(Error::Consistency(format!("brute-force bound {brute} differs from exact {}", report.beta_c)));
        }
    }
    if let Some(claimed) = args.claimed {
        let status = match check_user_bound(&coefficients, n, Ratio::from_integer(i128::from(claimed)))? {
            BoundCheck::Exact => "exact",
            BoundCheck::Loose { .. } => "loose",
            BoundCheck::Invalid { .. } => "invalid",
        };
        body["claimed"] = json!({ "beta_c": claimed, "status": status });
    }
    Ok(Outcome { output: Output::Report { kind: "bound", body }, failure })
}

fn classbuild(args: &ClassArgs) -> Result<Outcome> {
    let params = ClassBParams { x: args.x, y: args.y, sigma: args.sigma, mu: args.mu, branch: args.branch };
    let ineq = class_b_build(&params, args.n)?;
    let tightness = is_tight(&ineq)?;
    let body = json!({
        "n": args.n,
        "params": to_json(&params),
        "coprime": params.coprime(),
        "inequality": to_json(&ineq),
        "analytic_beta_c": ratio(&params.analytic_bound(args.n)),
        "core_holds": class_b_core_holds(&params, args.n)?,
        "tight": tightness.is_tight(),
        "saturating": tightness.saturating().iter().map(counts_json).collect::<Vec<_>>(),
    });
    Ok(Output::Report { kind: "class_b", body }.into())
}

fn expression(args: &ViolateArgs, family: Option<Family>, n: u32) -> Result<BellExpression> {
    match family {
        Some(Family::Elementary) => Ok(BellExpression::from(&BellInequality::new(n, ELEMENTARY, 2 * i64::from(n))?)),
        Some(Family::Dicke) => BellExpression::dicke(n),
        None => {
            let (_, coefficients, _) = resolve_coefficients(&args.coefficients, n)?;
            let ineq = match args.beta_c {
                Some(b) => BellInequality::new(n, coefficients, b)?,
                None => classical_bound_exact(&coefficients, n)?.inequality(coefficients)?,
            };
            Ok(BellExpression::from(&ineq))
        }
    }
}

fn objective(args: &ViolateArgs, family: Option<Family>, n: u32) -> Objective {
    let state = Objective::DickeExpectation { k: args.k.unwrap_or_else(|| ceil_half(n)) };
    match (args.objective, family) {
        (Some(ObjectiveArg::MinEigenvalue), _) => Objective::MinEigenvalue,
        (Some(ObjectiveArg::DickeState), _) | (None, Some(Family::Dicke)) => state,
        (None, _) => Objective::MinEigenvalue,
    }
}

fn violate(args: &ViolateArgs) -> Result<Outcome> {
    if let Some(fig) = args.figure {
        return figure(args, fig);
    }
    let n = args.n.expect("clap requires n without --figure");
    let family = args.coefficients.family;
    let expr = expression(args, family, n)?;
    let objective = objective(args, family, n);
    let report = match args.theta {
        Some(theta) => {
            let value = objective.evaluate(&expr, theta)?;
            ViolationReport {
                n,
                theta_star: theta,
                lambda_min: value,
                beta_c: expr.beta_c,
                effective_violation: value / expr.beta_c,
                violated: value < 0.0,
                objective,
            }
        }
        None => optimize_theta(&expr, objective)?,
    };
    let mut body = to_json(&report);
    body["status"] = json!(report.status());
    body["family"] = json!(family);
    if family == Some(Family::Dicke) {
        body["analytic"] = to_json(&dicke_violation_analytic(n)?);
    }
    Ok(Output::Report { kind: "violation", body }.into())
}

fn figure(args: &ViolateArgs, fig: Figure) -> Result<Outcome> {
    let (family, name) = match fig {
        Figure::Fig1 => (Family::Elementary, "fig1"),
        Figure::Fig2 => (Family::Dicke, "fig2"),
    };
    let panels: Vec<Panel> = match args.panel {
        Some(p) => vec![p],
        None => vec![Panel::A, Panel::B],
    };
    let mut rows = Vec::new();
    for panel in &panels {
        let n_values: Vec<u32> = if !args.n_values.is_empty() {
            args.n_values.clone()
        } else {
            match (fig, panel) {
                (Figure::Fig1, Panel::A) => vec![2, 3, 4, 5, 6, 8, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000],
                (Figure::Fig1, Panel::B) => vec![10, 100, 1000, 10000],
                (Figure::Fig2, Panel::A) => (2..=200).collect(),
                (Figure::Fig2, Panel::B) => vec![4, 10, 20, 50, 100],
            }
        };
        for &n in &n_values {
            if n < 2 {
                return Err(Error::Precondition(format!("figure sweep needs n >= 2, got {n}")));
            }
            let expr = expression(args, Some(family), n)?;
            let obj = objective(args, Some(family), n);
            let mut push = |theta: f64, value: f64| {
                rows.push(json!({
                    "figure": name,
                    "panel": panel,
                    "n": n,
                    "theta": theta,
                    "lambda": value,
                    "beta_c": expr.beta_c,
                    "effective_violation": value / expr.beta_c,
                }));
            };
            match panel {
                Panel::A => {
                    let r = optimize_theta(&expr, obj)?;
                    push(r.theta_star, r.lambda_min);
                }
                Panel::B => {
                    for (theta, value) in theta_scan(&expr, obj, args.points as usize)? {
                        push(theta, value);
                    }
                }
            }
        }
    }
    let summary = json!({ "figure": name, "panels": panels, "rows": rows.len() });
    Ok(Output::Stream {
        kind: "figure",
        columns: vec!["figure", "panel", "n", "theta", "lambda", "beta_c", "effective_violation"],
        rows,
        summary,
    }
    .into())
}

fn dicke(n: u32) -> Result<Outcome> {
    let ineq = dicke_build(n)?;
    let tightness = is_tight(&ineq)?;
    let mut saturating = tightness.saturating().to_vec();
    saturating.sort();
    let expected = dicke_saturating_counts(n)?;
    let matches = saturating == expected;
    let (c, formula) = dicke_family_rational(n)?;
    let violation = dicke_violation_analytic(n)?;
    let body = json!({
        "n": n,
        "inequality": to_json(&ineq),
        "family_form": {
            "alpha": ratio(&c[0]), "beta": ratio(&c[1]), "gamma": ratio(&c[2]),
            "delta": ratio(&c[3]), "epsilon": ratio(&c[4]), "beta_c": ratio(&formula),
            "scale": dicke_scale(n),
        },
        "tight": tightness.is_tight(),
        "saturating": saturating.iter().map(counts_json).collect::<Vec<_>>(),
        "expected_saturating": expected.iter().map(counts_json).collect::<Vec<_>>(),
        "saturating_matches": matches,
        "violation": to_json(&violation),
        "reduced_state": matrix_json(&reduced_two_qubit(n, ceil_half(n))?),
    });
    // For n = 2 the inequality is CHSH-like and saturated by more vertices.
    let failure = if !tightness.is_tight() || (n >= 3 && !matches) {
        Some(Error::Consistency(format!("Dicke inequality at n = {n} is not the expected facet")))
    } else {
        None
    };
    Ok(Outcome { output: Output::Report { kind: "dicke", body }, failure })
}

fn lmg(args: &LmgArgs) -> Result<Outcome> {
    let params = LmgParams::new(args.lambda, args.h, args.n)?;
    let ground = lmg_ground_state(&params)?;
    let mut body = to_json(&ground);
    body["lambda"] = json!(args.lambda);
    body["h"] = json!(args.h);
    body["index_convention"] = json!("k counts spins with sigma_z = +1");
    let mut failure = None;
    if args.n <= FULL_SPACE_LIMIT {
        let (energy, degeneracy) = lmg_ground_full(&params)?;
        let agrees = (energy - ground.energy).abs() <= 1e-9 * energy.abs().max(1.0) && degeneracy == ground.degeneracy;
        body["full_space"] = json!({ "energy": energy, "degeneracy": degeneracy, "agrees": agrees });
        if !agrees {
            failure = Some(Error::Consistency("symmetric sector misses the global LMG ground state".into()));
        }
    }
    Ok(Outcome { output: Output::Report { kind: "lmg", body }, failure })
}

fn reduce(args: &ReduceArgs) -> Result<Outcome> {
    let n = args.n;
    let k = args.k.unwrap_or_else(|| ceil_half(n));
    let state = DickeState::new(n, k)?;
    let theta = match args.theta {
        Some(t) => t,
        None => dicke_violation_analytic(n)?.theta_min,
    };
    let settings = MeasurementSettings::new(theta)?;
    let expr = BellExpression::dicke(n)?;
    let rho = state.reduced_two_qubit()?;
    let reduced = reduced_bell_operator(&expr, &settings)?;
    let trace = (rho * reduced).trace();
    let direct = bell_operator_sym(&expr, &settings)?.dicke_expectation(k as usize);
    let agrees = (trace - direct).abs() <= 1e-9 * direct.abs().max(1.0);
    let pairwise = collective_to_pairwise(state.sz2_mean(), 0.0, n)?;
    let body = json!({
        "n": n,
        "k": k,
        "theta": theta,
        "reduced_state": matrix_json(&rho),
        "reduced_operator": matrix_json(&reduced),
        "trace_value": trace,
        "symmetric_expectation": direct,
        "closed_form": (k == ceil_half(n)).then(|| dicke_expectation_closed_form(n, theta)),
        "agrees": agrees,
        "sz2_mean": state.sz2_mean(),
        "pairwise": to_json(&pairwise),
        "czx_convention": "czx = 2 <{S_z, S_x}> / (n (n - 1))",
    });
    let failure = (!agrees).then(|| Error::Consistency(format!("Tr(rho B) = {trace} but <D|B|D> = {direct}")));
    Ok(Outcome { output: Output::Report { kind: "reduction", body }, failure })
}
