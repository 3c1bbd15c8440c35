use crate::{sign, Correlation, Scenario, ScenarioError, ScenarioKind};

fn require(c: &Correlation, kind: ScenarioKind, name: &'static str) -> Result<(), ScenarioError> {
    if c.kind() == Some(kind) {
        Ok(())
    } else {
        Err(ScenarioError::UnsupportedScenario(name))
    }
}

/// 14-case to 22-case: on input `y`, Bob outputs bit `b^y` of his 4-valued outcome.
pub fn map_14_to_22(c: &Correlation) -> Result<Correlation, ScenarioError> {
    require(c, ScenarioKind::S14, "S14")?;
    Ok(Correlation::from_fn(Scenario::S22, |x, y, z, a, b, cc| {
        (0..4)
            .filter(|&bb| {
                let bit = if y == 0 { bb >> 1 } else { bb & 1 };
                bit == b
            })
            .map(|bb| c.get(x, 0, z, a, bb, cc))
            .sum()
    }))
}

/// 13-case to 14-case: the merged outcome is split evenly between 10 and 11.
pub fn map_13_to_14(c: &Correlation) -> Result<Correlation, ScenarioError> {
    require(c, ScenarioKind::S13, "S13")?;
    Ok(Correlation::from_fn(Scenario::S14, |x, _, z, a, b, cc| match b {
        0 | 1 => c.get(x, 0, z, a, b, cc),
        _ => 0.5 * c.get(x, 0, z, a, 2, cc),
    }))
}

/// Average of the 14-case correlation over four relabelings, each applied
/// with probability 1/2:
/// flip `(a, b0, b1)`; flip `(b0, b1, c)`; flip `(x, b1)`; flip `(z, b1)`.
///
/// The result lies on the plane spanned by the two slice points and the
/// uniform distribution and keeps the `(I, J)` values of the input.
pub fn depolarize_to_slice(c: &Correlation) -> Result<Correlation, ScenarioError> {
    require(c, ScenarioKind::S14, "S14")?;
    Ok(Correlation::from_fn(Scenario::S14, |x, _, z, a, b, cc| {
        let (b0, b1) = (b >> 1, b & 1);
        let mut acc = 0.0;
        for t in 0..16usize {
            let (t1, t2, t3, t4) = (t & 1, (t >> 1) & 1, (t >> 2) & 1, (t >> 3) & 1);
            let xs = x ^ t3;
            let zs = z ^ t4;
            let as_ = a ^ t1;
            let b0s = b0 ^ t1 ^ t2;
            let b1s = b1 ^ t1 ^ t2 ^ t3 ^ t4;
            let cs = cc ^ t2;
            acc += c.get(xs, 0, zs, as_, 2 * b0s + b1s, cs);
        }
        acc / 16.0
    }))
}

/// Point of the `(I, J)` slice: `I·P_I + J·P_J + (1−I−J)·P0` in the 22- and
/// 14-cases, and `I·P_I + 2J·P_J + (1−I−2J)·P0` in the 13-case.
///
/// No domain check: the result is a valid correlation only when
/// `|I| + |J| ≤ 1` (resp. `|I| + 2|J| ≤ 1`).
pub fn slice_point(kind: ScenarioKind, i: f64, j: f64) -> Correlation {
    match kind {
        ScenarioKind::S22 => Correlation::from_fn(Scenario::S22, |x, y, z, a, b, c| {
            let s = sign(a + b + c);
            let t = if y == 0 { i * s } else { j * sign(x + z) * s };
            (1.0 + t) / 8.0
        }),
        ScenarioKind::S14 => Correlation::from_fn(Scenario::S14, |x, _, z, a, b, c| {
            let (b0, b1) = (b >> 1, b & 1);
            (1.0 + i * sign(a + c + b0) + j * sign(x + z + a + c + b1)) / 16.0
        }),
        ScenarioKind::S13 => Correlation::from_fn(Scenario::S13, |x, _, z, a, b, c| {
            let s = sign(a + c);
            if b < 2 {
                (1.0 + i * s + 2.0 * j * sign(x + z + a + c + b)) / 16.0
            } else {
                (1.0 - i * s) / 8.0
            }
        }),
    }
}
