//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured quantities. Run with `--nocapture` to see the lines.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::SymmetricEigen;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symbell::inequalities::{
    class_b_build, classical_bound_bruteforce, classical_bound_exact, classify_facets_as_class_b, dicke_bound_formula,
    dicke_build, dicke_saturating_counts, dicke_scale, ClassBParams, Sign,
};
use symbell::polytope::{facets, facets_bruteforce, is_tight, vertex_count, vertices, REFERENCE_FACET_COUNTS};
use symbell::quantum::{
    bell_operator_full, bell_operator_sym, dicke_reduced_two_qubit, lmg_ground_full, lmg_ground_state, min_eigenvalue,
    optimize_theta, reduced_bell_operator, spectrum_dense, BellExpression, LmgParams, MeasurementSettings, Objective,
};
use symbell::{BellInequality, Coefficients};

const ELEMENTARY: Coefficients = Coefficients::new(-2, 0, 1, -1, 1);

fn verdict(id: u32, title: &str, ok: bool, detail: &str) {
    println!("[{}] criterion {id:2}: {title} -- {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

fn ceil_half(n: u32) -> u32 {
    n.div_ceil(2)
}

/// Every `(x, y, sigma, mu, branch)` with `x, y <= 5`, `|mu| <= 7` passing the
/// parity rule for `n`.
fn admissible(n: u32) -> Vec<ClassBParams> {
    let mut out = Vec::new();
    for x in 1..=5 {
        for y in 1..=5 {
            for mu in -7..=7 {
                for sigma in [Sign::Plus, Sign::Minus] {
                    for branch in [Sign::Plus, Sign::Minus] {
                        let p = ClassBParams { x, y, sigma, mu, branch };
                        if p.check_parity(n).is_ok() {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn criterion_01_vertex_counts() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 2..=30 {
        let v = vertices(n).unwrap();
        let distinct: BTreeSet<_> = v.iter().collect();
        if v.len() as u64 != 2 * (u64::from(n) * u64::from(n) + 1)
            || distinct.len() != v.len()
            || vertex_count(n) != v.len() as u64
        {
            bad.push(n);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        1,
        "vertex counts 2(n^2+1), distinct images, n = 2..30",
        bad.is_empty() && secs < 1.0,
        &format!("bad n = {bad:?}, {secs:.3} s"),
    );
}

#[test]
fn criterion_02_facet_table() {
    let mut ok = true;
    let mut detail = Vec::new();
    for &(n, class_ref, total_ref) in &REFERENCE_FACET_COUNTS {
        let start = Instant::now();
        let list = facets(n).unwrap();
        let class = classify_facets_as_class_b(&list).count;
        ok &= list.len() == total_ref && class == class_ref;
        detail.push(format!(
            "n={n}: {}/{} total, {}/{} class ({:.1} s)",
            list.len(),
            total_ref,
            class,
            class_ref,
            start.elapsed().as_secs_f64()
        ));
    }
    verdict(2, "facet totals and class counts at n = 5, 10, 15, 20", ok, &detail.join("; "));
}

#[test]
fn criterion_02b_facets_match_bruteforce_oracle() {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in 2..=6 {
        let hull = facets(n).unwrap().facets;
        let brute = facets_bruteforce(n).unwrap();
        ok &= hull == brute;
        detail.push(format!("n={n}: {}", hull.len()));
    }
    verdict(2, "hull facets equal brute-force facets for n <= 6", ok, &detail.join(", "));
}

#[test]
fn criterion_03_bound_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let random: Vec<Coefficients> = (0..200)
        .map(|_| {
            let mut c = || rng.gen_range(-5i64..=5);
            Coefficients::new(c(), c(), c(), c(), c())
        })
        .collect();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for n in 2..=6u32 {
        let dicke = *dicke_build(n).unwrap().coefficients();
        for c in std::iter::once(ELEMENTARY).chain(std::iter::once(dicke)).chain(random.iter().copied()) {
            let exact = classical_bound_exact(&c, n).unwrap().beta_c;
            let brute = classical_bound_bruteforce(&c, n).unwrap();
            checked += 1;
            if exact != brute {
                mismatches.push((n, c, exact, brute));
            }
        }
    }
    verdict(
        3,
        "exact bound = brute-force bound, n <= 6",
        mismatches.is_empty(),
        &format!("{checked} cases, mismatches {mismatches:?}"),
    );
}

#[test]
fn criterion_04_analytic_bounds() {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 4..=12 {
        for p in admissible(n) {
            let exact = classical_bound_exact(&p.coefficients().unwrap(), n).unwrap().beta_c;
            checked += 1;
            if p.analytic_bound(n) != exact || class_b_build(&p, n).is_err() {
                failures.push((n, p));
            }
        }
    }
    let mut dicke_bad = Vec::new();
    for n in 2..=50 {
        let ineq = dicke_build(n).unwrap();
        let exact = classical_bound_exact(ineq.coefficients(), n).unwrap().beta_c;
        let formula = Ratio::from_integer(dicke_bound_formula(n).unwrap() * i128::from(dicke_scale(n)));
        if exact != formula {
            dicke_bad.push(n);
        }
    }
    verdict(
        4,
        "class bound formula over admissible parameters; Dicke bound formula n = 2..50",
        failures.is_empty() && dicke_bad.is_empty(),
        &format!("{checked} class cases, {} failures, Dicke failures {dicke_bad:?}", failures.len()),
    );
}

#[test]
fn criterion_05_dicke_tightness() {
    let mut bad = Vec::new();
    for n in 4..=20 {
        let t = is_tight(&dicke_build(n).unwrap()).unwrap();
        let mut sat = t.saturating().to_vec();
        sat.sort();
        if !t.is_tight() || sat != dicke_saturating_counts(n).unwrap() {
            bad.push(n);
        }
    }
    verdict(
        5,
        "Dicke inequality is a facet with exactly the five listed tuples, n = 4..20",
        bad.is_empty(),
        &format!("bad n = {bad:?}"),
    );
}

#[test]
fn criterion_06_chsh_reduction() {
    let ineq = dicke_build(2).unwrap();
    let canonical_ok = ineq.beta_c() == 2 && *ineq.coefficients() == Coefficients::new(0, 0, 1, 1, -1);
    let expr = BellExpression::from(&ineq);
    let state = optimize_theta(&expr, Objective::DickeExpectation { k: 1 }).unwrap();
    let spectral = optimize_theta(&expr, Objective::MinEigenvalue).unwrap();
    let ok = canonical_ok
        && (state.lambda_min + 0.5).abs() < 1e-9
        && (state.theta_star - 0.5f64.acos()).abs() < 1e-6
        && spectral.lambda_min <= state.lambda_min + 1e-12;
    verdict(
        6,
        "n = 2 Dicke inequality is CHSH with bound 2, violated by |D_2^1>",
        ok,
        &format!(
            "{ineq}; <D|B|D> = {:.12} at theta = {:.9}; lambda_min(B) = {:.9}",
            state.lambda_min, state.theta_star, spectral.lambda_min
        ),
    );
}

#[test]
fn criterion_07_subspace_spectra_embed() {
    let mut worst = 0.0f64;
    for n in 2..=10u32 {
        let exprs = [
            BellExpression::from(&BellInequality::new(n, ELEMENTARY, 2 * i64::from(n)).unwrap()),
            BellExpression::dicke(n).unwrap(),
        ];
        for (i, theta) in [0.0, 0.5, 1.3, 2.2, PI].into_iter().enumerate() {
            let s = MeasurementSettings::new(theta).unwrap();
            let expr = &exprs[i % 2];
            let sym = spectrum_dense(&bell_operator_sym(expr, &s).unwrap().to_dense());
            let full = spectrum_dense(&bell_operator_full(expr, &s).unwrap());
            for e in sym {
                let d = full.iter().map(|f| (f - e).abs()).fold(f64::INFINITY, f64::min);
                worst = worst.max(d / e.abs().max(1.0));
            }
        }
    }
    verdict(
        7,
        "symmetric-subspace spectra embed in full spectra, n = 2..10",
        worst <= 1e-9,
        &format!("worst relative distance {worst:.2e}"),
    );
}

#[test]
fn criterion_08_dicke_violations() {
    let mut worst_theta = 0.0f64;
    let mut worst_value = 0.0f64;
    for n in 2..=40u32 {
        let c = f64::from(ceil_half(n));
        let r = optimize_theta(&BellExpression::dicke(n).unwrap(), Objective::DickeExpectation { k: ceil_half(n) })
            .unwrap();
        worst_theta = worst_theta.max((r.theta_star - (c / (c + 1.0)).acos()).abs());
        worst_value = worst_value.max((r.lambda_min + f64::from(n / 2) / (c + 1.0)).abs());
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for n in 10..=200u32 {
        let r = optimize_theta(&BellExpression::dicke(n).unwrap(), Objective::DickeExpectation { k: ceil_half(n) })
            .unwrap();
        xs.push(f64::from(n).ln());
        ys.push(r.effective_violation.abs().ln());
    }
    let (mx, my) = (xs.iter().sum::<f64>() / xs.len() as f64, ys.iter().sum::<f64>() / ys.len() as f64);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    verdict(
        8,
        "Dicke-state optimum angle and value n = 2..40; 1/n^3 decay n = 10..200",
        worst_theta <= 1e-5 && worst_value <= 1e-9 && (-3.2..=-2.8).contains(&slope),
        &format!("max |dtheta| = {worst_theta:.2e}, max |dvalue| = {worst_value:.2e}, slope = {slope:.4}"),
    );
}

#[test]
fn criterion_09_elementary_violation_grows() {
    let start = Instant::now();
    let mut effective = Vec::new();
    for n in [10u32, 100, 1000, 10000] {
        let expr = BellExpression::from(&BellInequality::new(n, ELEMENTARY, 2 * i64::from(n)).unwrap());
        let r = optimize_theta(&expr, Objective::MinEigenvalue).unwrap();
        effective.push((n, r.lambda_min, r.effective_violation));
    }
    let negative = effective.iter().all(|e| e.1 < 0.0);
    let growing = effective.windows(2).all(|w| w[1].2.abs() > w[0].2.abs());
    let secs = start.elapsed().as_secs_f64();
    verdict(
        9,
        "elementary inequality violated with growing effective violation, n = 10..10^4",
        negative && growing && secs < 600.0,
        &format!(
            "{}; {secs:.1} s",
            effective.iter().map(|(n, _, e)| format!("n={n}: {e:.6}")).collect::<Vec<_>>().join(", ")
        ),
    );
}

#[test]
fn criterion_10_reduced_operator() {
    let mut worst = 0.0f64;
    for n in 2..=40u32 {
        let expr = BellExpression::dicke(n).unwrap();
        let rho = dicke_reduced_two_qubit(n).unwrap();
        for i in 0..20 {
            let s = MeasurementSettings::new(PI * f64::from(i) / 19.0).unwrap();
            let trace = (rho * reduced_bell_operator(&expr, &s).unwrap()).trace();
            let direct = bell_operator_sym(&expr, &s).unwrap().dicke_expectation(ceil_half(n) as usize);
            worst = worst.max((trace - direct).abs());
        }
    }
    verdict(
        10,
        "Tr(rho B_reduced) = <D|B|D>, n = 2..40, 20 angles",
        worst <= 1e-10,
        &format!("max abs difference {worst:.2e}"),
    );
}

#[test]
fn criterion_11_lmg() {
    let mut worst_fidelity = 1.0f64;
    let mut degeneracy_ok = true;
    for n in 2..=100u32 {
        let nf = f64::from(n);
        let mut fields = vec![0.5 / nf, 1e-3 / nf];
        if n % 2 == 0 {
            fields.push(0.0);
        }
        for h in fields {
            let g = lmg_ground_state(&LmgParams::new(1.0, h, n).unwrap()).unwrap();
            worst_fidelity = worst_fidelity.min(g.fidelity.unwrap());
            degeneracy_ok &= g.degeneracy == 1;
        }
        if n % 2 == 1 {
            let g = lmg_ground_state(&LmgParams::new(1.0, 0.0, n).unwrap()).unwrap();
            degeneracy_ok &= g.degeneracy == 2 && g.span == vec![n / 2, ceil_half(n)];
        }
    }
    let mut full_ok = true;
    for n in 2..=10u32 {
        for h in [0.0, 0.5 / f64::from(n)] {
            let p = LmgParams::new(1.0, h, n).unwrap();
            let sym = lmg_ground_state(&p).unwrap();
            let (e, d) = lmg_ground_full(&p).unwrap();
            full_ok &= (e - sym.energy).abs() < 1e-9 && d == sym.degeneracy;
        }
    }
    verdict(
        11,
        "LMG weak-field ground states, odd-n degeneracy, full-space cross-check",
        worst_fidelity > 1.0 - 1e-10 && degeneracy_ok && full_ok,
        &format!("min fidelity {worst_fidelity:.12}, degeneracies ok {degeneracy_ok}, full space ok {full_ok}"),
    );
}

#[test]
fn criterion_12_core_inequality() {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for n in 4..=12 {
        let boundary = symbell::polytope::enumerate_boundary_counts(n).unwrap();
        for p in admissible(n) {
            for point in &boundary {
                checked += 1;
                if p.core_value(point) < 1 {
                    failures.push((n, p, *point));
                }
            }
        }
    }
    verdict(
        12,
        "validity core >= 1 at every boundary point",
        failures.is_empty(),
        &format!("{checked} evaluations, {} failures", failures.len()),
    );
}

#[test]
fn criterion_09b_banded_solver_matches_dense() {
    // Guards the solver used above at sizes where the dense oracle is cheap.
    let mut worst = 0.0f64;
    for n in [10u32, 50, 200] {
        let expr = BellExpression::from(&BellInequality::new(n, ELEMENTARY, 2 * i64::from(n)).unwrap());
        for theta in [1.0, 2.1, 2.6] {
            let op = bell_operator_sym(&expr, &MeasurementSettings::new(theta).unwrap()).unwrap();
            let dense = SymmetricEigen::new(op.to_dense()).eigenvalues.min();
            worst = worst.max((min_eigenvalue(&op).unwrap() - dense).abs() / dense.abs().max(1.0));
        }
    }
    verdict(
        9,
        "banded eigensolver agrees with dense diagonalization",
        worst <= 1e-9,
        &format!("worst relative error {worst:.2e}"),
    );
}
