use biloc_scenario::{
    ac_product_check, io, is_non_signaling, map_13_to_14, map_14_to_22, mix, Correlation, PartySpec, Rational,
    Scenario,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scenario() -> impl Strategy<Value = Scenario> {
    (1usize..4, 2usize..4, 1usize..3, 2usize..5, 1usize..4, 2usize..4).prop_map(|(xa, oa, xb, ob, xc, oc)| {
        Scenario::new(PartySpec::new(xa, oa), PartySpec::new(xb, ob), PartySpec::new(xc, oc)).unwrap()
    })
}

fn random_correlation(seed: u64, s: Scenario) -> Correlation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<f64> = (0..s.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
    for row in p.chunks_mut(s.output_combos()) {
        let t: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= t);
    }
    Correlation::new(s, p).unwrap()
}

/// Independent local response functions: non-signaling and AC-product by construction.
fn product_correlation(seed: u64, s: Scenario) -> Correlation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = |inputs: usize, outputs: usize| -> Vec<Vec<f64>> {
        (0..inputs)
            .map(|_| {
                let w: Vec<f64> = (0..outputs).map(|_| rng.gen_range(0.01..1.0)).collect();
                let t: f64 = w.iter().sum();
                w.into_iter().map(|v| v / t).collect()
            })
            .collect()
    };
    let (ta, tb, tc) = (
        table(s.alice.inputs, s.alice.outputs),
        table(s.bob.inputs, s.bob.outputs),
        table(s.charlie.inputs, s.charlie.outputs),
    );
    Correlation::from_fn(s, |x, y, z, a, b, c| ta[x][a] * tb[y][b] * tc[z][c])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_bitwise(s in scenario(), seed in any::<u64>()) {
        let c = random_correlation(seed, s);
        let back = io::from_json_str(&io::to_json_string(&c)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn csv_round_trip_is_bitwise(s in scenario(), seed in any::<u64>()) {
        let c = random_correlation(seed, s);
        let mut buf = Vec::new();
        io::write_csv(&c, &mut buf).unwrap();
        prop_assert_eq!(io::read_csv(buf.as_slice()).unwrap(), c);
    }

    #[test]
    fn mixtures_stay_valid(s in scenario(), seeds in any::<(u64, u64)>(), w in 0.0f64..=1.0) {
        let (p, q) = (product_correlation(seeds.0, s), product_correlation(seeds.1, s));
        let m = mix(&[p, q], &[w, 1.0 - w]).unwrap();
        prop_assert!(m.is_valid());
        prop_assert!(is_non_signaling(&m, 1e-12).ok);
    }

    #[test]
    fn products_factorize(s in scenario(), seed in any::<u64>()) {
        prop_assert!(ac_product_check(&product_correlation(seed, s), 1e-12));
    }
}

#[test]
fn maps_keep_validity() {
    for seed in 0..50 {
        let p14 = product_correlation(seed, Scenario::S14);
        let p22 = map_14_to_22(&p14).unwrap();
        assert_eq!(*p22.scenario(), Scenario::S22);
        assert!(p22.is_valid() && is_non_signaling(&p22, 1e-12).ok);
        let p13 = product_correlation(seed, Scenario::S13);
        let p = map_13_to_14(&p13).unwrap();
        assert!(p.is_valid() && is_non_signaling(&p, 1e-12).ok);
    }
}

#[test]
fn exact_entries_survive_json() {
    let exact: Vec<Rational> = (0..64).map(|k| Rational::new(if k % 2 == 0 { 1 } else { 3 }, 32)).collect();
    let c = Correlation::from_exact(Scenario::S14, exact.clone()).unwrap();
    let back = io::from_json_str(&io::to_json_string(&c)).unwrap();
    assert_eq!(back.exact().unwrap(), exact.as_slice());
}

#[test]
fn malformed_json_reports_location() {
    let e = io::from_json_str("{\"scenario\": 3,\n \"p\": []}").unwrap_err().to_string();
    assert!(e.contains("line 1"), "{e}");
    assert!(io::from_json_str("{\"scenario\":{\"alice\":{\"inputs\":2,\"outputs\":2}}}").is_err());
}
