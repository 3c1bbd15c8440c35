use biloc_correlators::{
    check_constraints, correlation_from_fixed, correlation_from_weights, e_to_q, fixed_correlators_from_p,
    q_to_e, table_len, WeightTable,
};
use biloc_scenario::{ac_product_check, ScenarioKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_weights(rng: &mut ChaCha8Rng, kind: ScenarioKind) -> WeightTable {
    let mut q: Vec<f64> = (0..table_len(kind)).map(|_| rng.gen_range(0.0..1.0)).collect();
    let t: f64 = q.iter().sum();
    q.iter_mut().for_each(|v| *v /= t);
    WeightTable::new(kind, q).unwrap()
}

/// Bilocal weights: q_ᾱ q_γ̄ P(β | ᾱ, γ̄).
fn random_bilocal(rng: &mut ChaCha8Rng, kind: ScenarioKind) -> WeightTable {
    let norm = |v: Vec<f64>| {
        let t: f64 = v.iter().sum();
        v.into_iter().map(|x| x / t).collect::<Vec<_>>()
    };
    let qa = norm((0..4).map(|_| rng.gen_range(0.0..1.0)).collect());
    let qc = norm((0..4).map(|_| rng.gen_range(0.0..1.0)).collect());
    let nb = kind.bob_strategies();
    let bob: Vec<Vec<f64>> = (0..16).map(|_| norm((0..nb).map(|_| rng.gen_range(0.0..1.0)).collect())).collect();
    WeightTable::from_fn(kind, |a, b, c| qa[a] * qc[c] * bob[4 * a + c][b])
}

#[test]
fn round_trips_on_random_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for kind in ScenarioKind::ALL {
        for _ in 0..1000 {
            let q = random_weights(&mut rng, kind);
            let back = e_to_q(&q_to_e(&q));
            let err = q.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-14, "{kind:?}: {err}");
        }
    }
}

#[test]
fn fixed_correlators_match_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for kind in ScenarioKind::ALL {
        for _ in 0..200 {
            let q = random_weights(&mut rng, kind);
            let p = correlation_from_weights(&q);
            let fixed = fixed_correlators_from_p(&p).unwrap();
            let full = q_to_e(&q);
            assert!(fixed.fixed_diff(&full) < 1e-12);
            assert!(correlation_from_fixed(&full).max_abs_diff(&p).unwrap() < 1e-12);
        }
    }
}

#[test]
fn biloc_ok_implies_ac_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in ScenarioKind::ALL {
        for _ in 0..200 {
            let q = random_bilocal(&mut rng, kind);
            let r = check_constraints(&q_to_e(&q));
            assert!(r.nonneg_ok && r.biloc_ok, "{r:?}");
            assert!(ac_product_check(&correlation_from_weights(&q), 1e-10));
        }
        // Generic mixtures are almost never bilocal, and then fail the check.
        let q = random_weights(&mut rng, kind);
        let r = check_constraints(&q_to_e(&q));
        assert!(r.nonneg_ok && !r.biloc_ok);
    }
}

#[test]
fn counterexample_correlators() {
    let mut q = vec![0.0; table_len(ScenarioKind::S14)];
    q[biloc_correlators::table_index(ScenarioKind::S14, 0, 0, 0)] = 0.5;
    q[biloc_correlators::table_index(ScenarioKind::S14, 1, 1, 1)] = 0.5;
    let e = q_to_e(&WeightTable::new(ScenarioKind::S14, q).unwrap());
    assert_eq!(e.get(2, 2, 2), 1.0);
    // Strategy (01, 01, 01) contributes (−1)^3 to e_{01,01,01}.
    assert_eq!(e.get(1, 1, 1), 0.0);
    assert!(!check_constraints(&e).biloc_ok);
}
