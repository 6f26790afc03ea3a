//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always shown.
//! Exits nonzero when any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use urel_core::bounds::{
    evaluate_all, maccone_pati_2, maccone_pati_3, sum_minus_8, sum_minus_root_10, sum_plus_7, sum_plus_root_9,
    triple_comm_5, triple_pairwise_6, triple_sum_4, EvaluateOptions,
};
use urel_core::harness::sweep::{run_sweep, OutputRow, SweepSpec};
use urel_core::harness::verify::{run_verify, VerificationSummary, VerifyConfig};
use urel_core::quantum::{random_observable, random_pure_state};
use urel_core::qubit::{bloch_to_state, closed_form_lhs, closed_form_rhs, moments_from_angles, pauli_set};
use urel_core::seed::derive_seed;
use urel_core::shots::ShotPlan;
use urel_core::{BlochAngles, ObservableSet, QuantumState, RelationId};

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Check {
    Check {
        ok,
        detail: detail.into(),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn criterion_1() -> Check {
    let (rows, elapsed) = timed(|| {
        let mut rows = run_sweep(&SweepSpec::theta_default()).unwrap();
        rows.extend(run_sweep(&SweepSpec::phi_default()).unwrap());
        rows
    });
    let worst = rows.iter().map(|r| (r.lhs.value - 2.0).abs()).fold(0.0, f64::max);
    check(
        rows.len() == 38 && worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("38 points, max |lhs - 2| = {worst:.1e}, {elapsed:.2?}"),
    )
}

fn criterion_2() -> Check {
    let psi = ket0();
    let want = reference(&[sx(), sy(), sz()], &psi);
    let s = 2.0 + 2f64.sqrt();
    let stated = [
        ("T1", 2.0 / 3.0 + 2.0 / 3f64.sqrt()),
        ("T2", 2.0 / 3f64.sqrt()),
        ("T3", 1.0),
        ("M1", 1.0),
        ("M2", 1.0),
        ("M3", 4.0 - 0.25 * s * s),
        ("M4", 2.0 / 3.0 + s * s / 9.0),
    ];
    let oracle = [
        want.t1.unwrap(),
        want.t2.unwrap(),
        want.t3.unwrap(),
        want.m1,
        want.m2,
        want.m3.unwrap(),
        want.m4,
    ];
    let outcomes = evaluate_all(&pauli_set(), &state(&psi), EvaluateOptions::default()).unwrap();
    let mut worst = 0.0f64;
    let mut ok = true;
    for ((label, anchor), o) in stated.iter().zip(oracle) {
        let got = outcomes
            .iter()
            .find(|x| x.label == *label)
            .and_then(|x| x.report())
            .map(|r| r.rhs);
        match got {
            Some(v) => {
                worst = worst.max((v - o).abs()).max((v - anchor).abs());
            }
            None => ok = false,
        }
    }
    check(
        ok && worst <= 1e-9,
        format!("7 anchors at |0>, max deviation {worst:.1e}"),
    )
}

fn criterion_3() -> (Check, VerificationSummary, VerificationSummary) {
    let (res, elapsed) = timed(|| {
        (
            run_verify(&VerifyConfig::pauli(100_000, 20_240_601)).unwrap(),
            run_verify(&VerifyConfig::random(
                1_000,
                vec![2, 3, 4],
                vec![2, 3, 4, 5],
                20_240_602,
            ))
            .unwrap(),
        )
    });
    let (pauli, random) = res;
    let sum_form_violations: u64 = RelationId::SUM_FORM
        .iter()
        .map(|r| pauli.stats(*r).unwrap().violations)
        .sum();
    let random_violations: u64 = [
        RelationId::Robertson1,
        RelationId::MacconePati2,
        RelationId::MacconePati3,
        RelationId::SumPlus7,
        RelationId::SumMinus8,
        RelationId::SumPlusRoot9,
        RelationId::SumMinusRoot10,
    ]
    .iter()
    .map(|r| random.stats(*r).unwrap().violations)
    .sum();
    let c = check(
        sum_form_violations == 0 && random_violations == 0 && elapsed < Duration::from_secs(60),
        format!(
            "1e5 Pauli trials: {sum_form_violations} violations; 1e3 random trials: {random_violations} violations; {elapsed:.1?}"
        ),
    );
    (c, pauli, random)
}

fn m4_dominates(row: &OutputRow) -> bool {
    let v = |r| row.get(r).unwrap().value.value;
    let best = v(RelationId::SumPlus7)
        .max(v(RelationId::SumMinus8))
        .max(v(RelationId::SumPlusRoot9));
    v(RelationId::SumMinusRoot10) >= best - 1e-9
}

fn criterion_4(pauli: &VerificationSummary, random: &VerificationSummary) -> Check {
    let ratio_dev = pauli.max_ratio_deviation.max(random.max_ratio_deviation);
    let sweeps_ok = run_sweep(&SweepSpec::theta_default())
        .unwrap()
        .iter()
        .chain(run_sweep(&SweepSpec::phi_default()).unwrap().iter())
        .all(m4_dominates);
    check(
        ratio_dev <= 1e-12 && pauli.m4_not_dominant_qubit == 0 && pauli.trials == 100_000 && sweeps_ok,
        format!(
            "max |T2 - (2/sqrt3) T3| = {ratio_dev:.1e} over {} checks; M4 not dominant on {} of 1e5 qubit states; sweeps {}",
            pauli.ratio_checks + random.ratio_checks,
            pauli.m4_not_dominant_qubit,
            if sweeps_ok { "ok" } else { "fail" }
        ),
    )
}

fn criterion_5() -> Check {
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..10_000u64 {
        let d = 2 + (i % 3) as usize;
        let n = 2 + ((i / 3) % 4) as usize;
        let seed = derive_seed(5, &[i]);
        let obs: Vec<_> = (0..n)
            .map(|k| random_observable(d, derive_seed(seed, &[1, k as u64])).unwrap())
            .collect();
        let set = ObservableSet::new(obs).unwrap();
        let st = QuantumState::Pure(random_pure_state(d, derive_seed(seed, &[0])).unwrap());
        let m1 = sum_plus_7(&set, &st).unwrap();
        let m2 = sum_minus_8(&set, &st).unwrap();
        worst = worst.max((m1.rhs + m2.rhs - m1.lhs).abs());
        count += 1;
    }
    check(
        worst <= 1e-10,
        format!("{count} instances, max |M1 + M2 - lhs| = {worst:.1e}"),
    )
}

fn criterion_6() -> Check {
    let set = pauli_set();
    let (x, y, z) = (set.get(0), set.get(1), set.get(2));
    let mut worst = 0.0f64;
    for i in 0..10_000u64 {
        let u = (derive_seed(6, &[i, 0]) >> 11) as f64 / (1u64 << 53) as f64;
        let v = (derive_seed(6, &[i, 1]) >> 11) as f64 / (1u64 << 53) as f64;
        let a = BlochAngles::new(PI * u, 2.0 * PI * v).unwrap();
        let m = moments_from_angles(&a);
        let st = QuantumState::Pure(bloch_to_state(&a));
        let generic = [
            triple_sum_4(x, y, z, &st).unwrap(),
            triple_comm_5(x, y, z, &st).unwrap(),
            triple_pairwise_6(x, y, z, &st).unwrap(),
            sum_plus_7(&set, &st).unwrap(),
            sum_minus_8(&set, &st).unwrap(),
            sum_plus_root_9(&set, &st).unwrap(),
            sum_minus_root_10(&set, &st).unwrap(),
        ];
        for g in generic {
            worst = worst
                .max((closed_form_rhs(&m, g.relation).unwrap() - g.rhs).abs())
                .max((closed_form_lhs(&m) - g.lhs).abs());
        }
    }
    check(
        worst <= 1e-12,
        format!("1e4 Bloch states x 7 relations, max deviation {worst:.1e}"),
    )
}

fn criterion_7() -> Check {
    let mp2 = maccone_pati_2(&obs(&sx()), &obs(&sy()), &state(&ket0()), &ket(&[c(0., 0.), c(1., 0.)])).unwrap();
    let witness = (mp2.lhs - 2.0).abs().max((mp2.rhs - 2.0).abs());

    let mut worst = 0.0f64;
    for i in 0..10_000u64 {
        let seed = derive_seed(7, &[i]);
        let a = random_observable(2, derive_seed(seed, &[1, 0])).unwrap();
        let b = random_observable(2, derive_seed(seed, &[1, 1])).unwrap();
        let psi = random_pure_state(2, derive_seed(seed, &[0])).unwrap();
        let mp3 = maccone_pati_3(&a, &b, &QuantumState::Pure(psi.clone())).unwrap();
        let sum = mat_add(&a.matrix().rows(), &b.matrix().rows(), 1.0);
        worst = worst.max((mp3.rhs - 0.5 * var(&sum, psi.amplitudes())).abs());
    }
    check(
        witness <= 1e-12 && worst <= 1e-10,
        format!("equality witness deviation {witness:.1e}; MP3 dual path max {worst:.1e} over 1e4 qubit instances"),
    )
}

fn criterion_8() -> Check {
    let seed = 2400;
    let (res, elapsed) = timed(|| {
        let low = run_sweep(&SweepSpec::theta_default().with_shots(ShotPlan::full(2400, seed).unwrap())).unwrap();
        let high = run_sweep(&SweepSpec::theta_default().with_shots(ShotPlan::full(240_000, seed).unwrap())).unwrap();
        (low, high)
    });
    let (low, high) = res;
    let within = low
        .iter()
        .filter(|r| r.lhs.std_error > 0.0 && (r.lhs.value - 2.0).abs() <= 3.0 * r.lhs.std_error)
        .count();
    let pooled = |rows: &[OutputRow]| rows.iter().map(|r| r.lhs.std_error.powi(2)).sum::<f64>().sqrt();
    let ratio = pooled(&low) / pooled(&high);
    check(
        within >= 12 && (7.0..=13.0).contains(&ratio) && elapsed < Duration::from_secs(30),
        format!("{within}/13 points within 3 std errors; error ratio 2400 vs 240000 shots = {ratio:.2}; {elapsed:.2?}"),
    )
}

fn main() -> ExitCode {
    let mut results = vec![
        ("1 lhs constant on both sweeps", criterion_1()),
        ("2 anchor values at |0>", criterion_2()),
    ];
    let (c3, pauli, random) = criterion_3();
    results.push(("3 validity fuzz", c3));
    results.push(("4 tightness ordering", criterion_4(&pauli, &random)));
    results.push(("5 parallelogram identity", criterion_5()));
    results.push(("6 closed form vs matrix route", criterion_6()));
    results.push(("7 equality witness and dual path", criterion_7()));
    results.push(("8 shot-noise statistics", criterion_8()));

    let mut failed = 0;
    for (name, c) in &results {
        println!(
            "criterion {name}: {} ({})",
            if c.ok { "PASS" } else { "FAIL" },
            c.detail
        );
        failed += usize::from(!c.ok);
    }
    println!("criterion 9 experimental data points: not applicable (detector data is not reproducible)");
    if failed == 0 {
        println!("acceptance: {} of {} criteria passed", results.len(), results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", results.len());
        ExitCode::FAILURE
    }
}
