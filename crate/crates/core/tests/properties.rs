mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use urel_core::bounds::{
    maccone_pati_3, robertson, sum_minus_8, sum_minus_root_10, sum_plus_7, sum_plus_root_9, triple_comm_5,
    triple_pairwise_6, triple_sum_4,
};
use urel_core::quantum::{commutator_expectation, deviation_state, expectation, std_dev, variance};
use urel_core::qubit::{
    bloch_to_state, closed_form_lhs, closed_form_rhs, density_to_stokes, moments_from_angles, moments_from_stokes,
    pauli_set, stokes_to_density,
};
use urel_core::{BlochAngles, ObservableSet, QuantumState, RelationId, StokesVector};

/// (dim, state amplitudes, observables as raw matrices)
fn instance(max_n: usize) -> impl Strategy<Value = (Vec<C>, Vec<Mat>)> {
    (2usize..=4, 2usize..=max_n).prop_flat_map(|(d, n)| {
        (
            prop::collection::vec(-1.0..1.0f64, 2 * d).prop_filter_map("degenerate", |r| vector_from(&r)),
            prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d * d), n)
                .prop_map(move |raws| raws.iter().map(|r| hermitian_from(d, r)).collect::<Vec<_>>()),
        )
    })
}

fn triple() -> impl Strategy<Value = (Vec<C>, Vec<Mat>)> {
    (2usize..=4).prop_flat_map(|d| {
        (
            prop::collection::vec(-1.0..1.0f64, 2 * d).prop_filter_map("degenerate", |r| vector_from(&r)),
            prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d * d), 3)
                .prop_map(move |raws| raws.iter().map(|r| hermitian_from(d, r)).collect::<Vec<_>>()),
        )
    })
}

fn angles() -> impl Strategy<Value = BlochAngles> {
    (0.0..=PI, 0.0..2.0 * PI).prop_map(|(t, p)| BlochAngles::new(t, p).unwrap())
}

fn set_of(ms: &[Mat]) -> ObservableSet {
    ObservableSet::new(ms.iter().map(obs).collect()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> Result<(), TestCaseError> {
    prop_assert!((a - b).abs() <= tol * (1.0 + b.abs()), "{} vs {} (tol {})", a, b, tol);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn variance_matches_reference((psi, ms) in instance(2)) {
        let st = state(&psi);
        for m in &ms {
            close(variance(&obs(m), &st).unwrap(), var(m, &psi), 1e-10)?;
            close(expectation(&obs(m), &st).unwrap(), ev(m, &psi), 1e-12)?;
        }
    }

    #[test]
    fn commutator_is_antisymmetric_and_imaginary((psi, ms) in instance(2)) {
        let st = state(&psi);
        let (a, b) = (obs(&ms[0]), obs(&ms[1]));
        let ab = commutator_expectation(&a, &b, &st).unwrap();
        let ba = commutator_expectation(&b, &a, &st).unwrap();
        prop_assert!((ab + ba).norm() < 1e-10);
        prop_assert!(ab.re.abs() < 1e-10);
        close(ab.im, comm(&ms[0], &ms[1], &psi).im, 1e-10)?;
    }

    #[test]
    fn deviation_norm_is_std_dev((psi, ms) in instance(2)) {
        let st = state(&psi);
        let a = obs(&ms[0]);
        let (norm, perp) = deviation_state(&a, &ket(&psi)).unwrap();
        close(norm, std_dev(&a, &st).unwrap(), 1e-10)?;
        if let Some(p) = perp {
            prop_assert!(braket(&psi, p.amplitudes()).norm() < 1e-10);
        }
    }

    #[test]
    fn pure_and_density_forms_agree((psi, ms) in instance(3)) {
        let pure = state(&psi);
        let mixed = QuantumState::Mixed(pure.to_density());
        for m in &ms {
            let o = obs(m);
            close(expectation(&o, &pure).unwrap(), expectation(&o, &mixed).unwrap(), 1e-12)?;
            close(variance(&o, &pure).unwrap(), variance(&o, &mixed).unwrap(), 1e-10)?;
        }
        let set = set_of(&ms);
        close(sum_minus_root_10(&set, &pure).unwrap().rhs, sum_minus_root_10(&set, &mixed).unwrap().rhs, 1e-10)?;
    }

    #[test]
    fn sum_form_relations_match_reference_and_hold((psi, ms) in instance(5)) {
        let st = state(&psi);
        let set = set_of(&ms);
        let want = reference(&ms, &psi);
        let m1 = sum_plus_7(&set, &st).unwrap();
        let m2 = sum_minus_8(&set, &st).unwrap();
        let m4 = sum_minus_root_10(&set, &st).unwrap();
        close(m1.lhs, want.lhs, 1e-10)?;
        close(m1.rhs, want.m1, 1e-10)?;
        close(m2.rhs, want.m2, 1e-10)?;
        close(m4.rhs, want.m4, 1e-9)?;
        prop_assert!(m1.holds && m2.holds && m4.holds);
        if let Some(m3_want) = want.m3 {
            let m3 = sum_plus_root_9(&set, &st).unwrap();
            close(m3.rhs, m3_want, 1e-9)?;
            prop_assert!(m3.holds, "M3 slack {}", m3.slack);
        }
    }

    #[test]
    fn parallelogram_identity((psi, ms) in instance(5)) {
        let st = state(&psi);
        let set = set_of(&ms);
        let m1 = sum_plus_7(&set, &st).unwrap();
        let m2 = sum_minus_8(&set, &st).unwrap();
        prop_assert!((m1.rhs + m2.rhs - m1.lhs).abs() < 1e-10);
    }

    #[test]
    fn triple_relations_ratio_and_chain((psi, ms) in triple()) {
        let st = state(&psi);
        let (a, b, c) = (obs(&ms[0]), obs(&ms[1]), obs(&ms[2]));
        let t1 = triple_sum_4(&a, &b, &c, &st).unwrap();
        let t2 = triple_comm_5(&a, &b, &c, &st).unwrap();
        let t3 = triple_pairwise_6(&a, &b, &c, &st).unwrap();
        let want = reference(&ms, &psi);
        close(t1.rhs, want.t1.unwrap(), 1e-9)?;
        close(t2.rhs, want.t2.unwrap(), 1e-9)?;
        close(t3.rhs, want.t3.unwrap(), 1e-9)?;
        prop_assert!((t2.rhs - 2.0 / 3f64.sqrt() * t3.rhs).abs() <= 1e-12 * (1.0 + t2.rhs));
        let mid = t3.mid.unwrap();
        prop_assert!(t3.lhs >= mid - 1e-10 && mid >= t3.rhs - 1e-10);
        prop_assert!(t1.holds && t2.holds && t3.holds);
    }

    #[test]
    fn pairwise_relations_hold((psi, ms) in instance(2)) {
        let st = state(&psi);
        let (a, b) = (obs(&ms[0]), obs(&ms[1]));
        prop_assert!(robertson(&a, &b, &st).unwrap().holds);
        let mp3 = maccone_pati_3(&a, &b, &st).unwrap();
        prop_assert!(mp3.holds);
        close(mp3.rhs, 0.5 * var(&mat_add(&ms[0], &ms[1], 1.0), &psi), 1e-10)?;
    }

    #[test]
    fn closed_forms_match_matrix_route(a in angles()) {
        let m = moments_from_angles(&a);
        let st = QuantumState::Pure(bloch_to_state(&a));
        let set = pauli_set();
        let (x, y, z) = (set.get(0), set.get(1), set.get(2));
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
            prop_assert!((closed_form_rhs(&m, g.relation).unwrap() - g.rhs).abs() <= 1e-12, "{}", g.relation);
            prop_assert!((closed_form_lhs(&m) - g.lhs).abs() <= 1e-12);
        }
    }

    #[test]
    fn pure_qubit_lhs_is_two(a in angles()) {
        let m = moments_from_angles(&a);
        prop_assert!((closed_form_lhs(&m) - 2.0).abs() < 1e-12);
        let psi = bloch_ket(a.theta, a.phi);
        let lhs: f64 = [sx(), sy(), sz()].iter().map(|p| var(p, &psi)).sum();
        prop_assert!((lhs - 2.0).abs() < 1e-12);
    }

    #[test]
    fn h_dominates_e(a in angles()) {
        let m = moments_from_angles(&a);
        prop_assert!(m.h >= m.e - 1e-15);
        prop_assert!(m.v <= 1.0 + 1e-12);
    }

    #[test]
    fn m4_dominates_on_qubits(a in angles()) {
        let m = moments_from_angles(&a);
        let r = |id| closed_form_rhs(&m, id).unwrap();
        let best = r(RelationId::SumPlus7).max(r(RelationId::SumMinus8)).max(r(RelationId::SumPlusRoot9));
        prop_assert!(r(RelationId::SumMinusRoot10) >= best - 1e-9);
    }

    #[test]
    fn stokes_round_trip(
        s0 in 0.1..10.0f64,
        dir in prop::collection::vec(-1.0..1.0f64, 3).prop_filter("zero", |v| v.iter().any(|x| x.abs() > 1e-3)),
        r in 0.0..1.0f64,
    ) {
        let n = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        let s = StokesVector::new(s0, s0 * r * dir[0] / n, s0 * r * dir[1] / n, s0 * r * dir[2] / n).unwrap();
        let rho = stokes_to_density(&s).unwrap();
        let back = density_to_stokes(&rho).unwrap();
        for (x, y) in back.ratios().iter().zip(s.ratios()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let raw: Mat = rho.matrix().rows();
        for (p, want) in [sx(), sy(), sz()].iter().zip(s.ratios()) {
            prop_assert!((tr_ev(&raw, p) - want).abs() < 1e-12);
        }
        let direct = moments_from_stokes(&s);
        prop_assert!((closed_form_lhs(&direct) - (3.0 - r * r)).abs() < 1e-12);
    }
}
