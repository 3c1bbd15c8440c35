use biloc_trilocality::{
    conditional_to_four, decide_trilocality, example_quantum_fourpartite, four_to_conditional, local_weights,
    quantum_fourpartite_from_states, BipartiteConditional, FourPartiteCorrelation, TrilocError,
};

fn deterministic(sa: usize, sb: usize) -> Vec<f64> {
    let mut w = vec![0.0; 16];
    w[4 * sa + sb] = 1.0;
    w
}

fn conditional_from_weights(w: &[f64], px: [f64; 2], py: [f64; 2]) -> BipartiteConditional {
    let bit = |s: usize, k: usize| (s >> (1 - k)) & 1;
    let p = (0..16)
        .map(|i| {
            let (x, y, a, b) = (i >> 3, (i >> 2) & 1, (i >> 1) & 1, i & 1);
            (0..16).filter(|l| bit(l >> 2, x) == a && bit(l & 3, y) == b).map(|l| w[l]).sum()
        })
        .collect();
    BipartiteConditional::new(p, px, py).unwrap()
}

#[test]
fn quantum_example() {
    let f = example_quantum_fourpartite();
    let born = quantum_fourpartite_from_states();
    assert!(f.max_abs_diff(&born) < 1e-12);
    assert_eq!(f.xy_marginal(), [[0.25; 2]; 2]);
    let c = four_to_conditional(&f).unwrap();
    for i in 0..16 {
        let (x, y, a, b) = (i >> 3, (i >> 2) & 1, (i >> 1) & 1, i & 1);
        let s = if (a ^ b ^ (x & y)) == 0 { 1.0 } else { -1.0 };
        assert!((c.get(a, b, x, y) - 0.25 * (1.0 - s * std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-15);
    }
    assert!((c.chsh().abs() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    let r = decide_trilocality(&f).unwrap();
    assert!(!r.trilocal && r.decomposition.is_none());
}

#[test]
fn uniform() {
    let c = four_to_conditional(&FourPartiteCorrelation::uniform()).unwrap();
    assert!(c.values().iter().all(|v| (*v - 0.25).abs() < 1e-15));
    assert!(decide_trilocality(&FourPartiteCorrelation::uniform()).unwrap().trilocal);
}

#[test]
fn correlated_inputs_rejected() {
    let f = FourPartiteCorrelation::from_fn(|x, _, _, y| if x == y { 0.125 } else { 0.0 }).unwrap();
    assert!(matches!(four_to_conditional(&f), Err(TrilocError::NotProduct(_))));
}

#[test]
fn deterministic_points() {
    // a = 0, b = 0 with uniform inputs.
    let c = conditional_from_weights(&deterministic(0, 0), [0.5; 2], [0.5; 2]);
    assert_eq!(c.chsh(), 2.0);
    let f = conditional_to_four(&c, &deterministic(0, 0)).unwrap().to_four();
    let want = FourPartiteCorrelation::from_fn(|_, a, b, _| if a == 0 && b == 0 { 0.25 } else { 0.0 }).unwrap();
    assert_eq!(f.max_abs_diff(&want), 0.0);
    // a = x, b = 0 with skewed inputs.
    let c = conditional_from_weights(&deterministic(1, 0), [0.3, 0.7], [0.6, 0.4]);
    let f = conditional_to_four(&c, &deterministic(1, 0)).unwrap().to_four();
    let want =
        FourPartiteCorrelation::from_fn(|x, a, b, y| if a == x && b == 0 { [0.3, 0.7][x] * [0.6, 0.4][y] } else { 0.0 })
            .unwrap();
    assert!(f.max_abs_diff(&want) < 1e-15);
}

#[test]
fn mixtures_round_trip() {
    let mut w = vec![0.0; 16];
    w[4 * 2 + 1] = 0.35;
    w[4 * 3 + 2] = 0.65;
    let c = conditional_from_weights(&w, [0.4, 0.6], [0.25, 0.75]);
    let d = conditional_to_four(&c, &w).unwrap();
    let f = d.to_four();
    for i in 0..16 {
        let (x, a, b, y) = (i >> 3, (i >> 2) & 1, (i >> 1) & 1, i & 1);
        assert!((f.get(x, a, b, y) - c.get(a, b, x, y) * c.px[x] * c.py[y]).abs() < 1e-14);
    }
    // Extraction through the local-polytope LP closes the loop.
    let back = four_to_conditional(&f).unwrap();
    let w2 = local_weights(&back).unwrap().unwrap();
    let f2 = conditional_to_four(&back, &w2).unwrap().to_four();
    assert!(f2.max_abs_diff(&f) < 1e-12);
}

#[test]
fn wrong_weights_rejected() {
    let c = conditional_from_weights(&deterministic(0, 0), [0.5; 2], [0.5; 2]);
    assert!(conditional_to_four(&c, &deterministic(3, 3)).is_err());
}
