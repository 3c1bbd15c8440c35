use crate::{Correlation, Party, ScenarioError};

/// Reduced distribution over a subset of parties.
///
/// Indexed row-major by the retained parties' inputs followed by their
/// outputs (parties in Alice, Bob, Charlie order). Discarded parties' inputs
/// are averaged uniformly, which is exact for non-signaling correlations.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginal {
    parties: Vec<Party>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    p: Vec<f64>,
}

impl Marginal {
    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Probability of `outputs` given `inputs`, both listed per retained party.
    pub fn get(&self, inputs: &[usize], outputs: &[usize]) -> f64 {
        assert_eq!(inputs.len(), self.parties.len());
        assert_eq!(outputs.len(), self.parties.len());
        let mut idx = 0;
        for (v, n) in inputs.iter().zip(&self.inputs) {
            idx = idx * n + v;
        }
        for (v, n) in outputs.iter().zip(&self.outputs) {
            idx = idx * n + v;
        }
        self.p[idx]
    }
}

fn canonical(parties: &[Party]) -> Vec<Party> {
    Party::ALL.into_iter().filter(|p| parties.contains(p)).collect()
}

/// Distribution of the retained parties' outputs at one full input triple.
fn marginal_at(c: &Correlation, keep: &[Party], xyz: [usize; 3]) -> Vec<f64> {
    let s = c.scenario();
    let outs = s.outputs();
    let size: usize = keep.iter().map(|p| outs[p.slot()]).product();
    let mut m = vec![0.0; size];
    for (a, b, cc) in s.output_triples() {
        let abc = [a, b, cc];
        let mut k = 0;
        for p in keep {
            k = k * outs[p.slot()] + abc[p.slot()];
        }
        m[k] += c.get(xyz[0], xyz[1], xyz[2], a, b, cc);
    }
    m
}

/// Sum out the parties not in `parties`.
pub fn marginal(c: &Correlation, parties: &[Party]) -> Result<Marginal, ScenarioError> {
    let keep = canonical(parties);
    if keep.is_empty() {
        return Err(ScenarioError::InvalidScenario("marginal needs at least one party".into()));
    }
    let s = c.scenario();
    let ins = s.inputs();
    let outs = s.outputs();
    let kin: Vec<usize> = keep.iter().map(|p| ins[p.slot()]).collect();
    let kout: Vec<usize> = keep.iter().map(|p| outs[p.slot()]).collect();
    let nin: usize = kin.iter().product();
    let nout: usize = kout.iter().product();
    let mut p = vec![0.0; nin * nout];
    let mut counts = vec![0usize; nin];
    for (x, y, z) in s.input_triples() {
        let xyz = [x, y, z];
        let mut ki = 0;
        for q in &keep {
            ki = ki * ins[q.slot()] + xyz[q.slot()];
        }
        counts[ki] += 1;
        for (k, v) in marginal_at(c, &keep, xyz).into_iter().enumerate() {
            p[ki * nout + k] += v;
        }
    }
    for (ki, &n) in counts.iter().enumerate() {
        for v in &mut p[ki * nout..(ki + 1) * nout] {
            *v /= n as f64;
        }
    }
    Ok(Marginal { parties: keep, inputs: kin, outputs: kout, p })
}

/// Outcome of [`is_non_signaling`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonSignaling {
    pub ok: bool,
    /// Largest change of any marginal under a change of discarded inputs.
    pub worst: f64,
}

/// Every marginal (of any proper subset of parties) must not depend on the
/// inputs of the parties summed out.
pub fn is_non_signaling(c: &Correlation, tol: f64) -> NonSignaling {
    let s = c.scenario();
    let mut worst: f64 = 0.0;
    let subsets: [&[Party]; 6] = [
        &[Party::Alice],
        &[Party::Bob],
        &[Party::Charlie],
        &[Party::Alice, Party::Bob],
        &[Party::Alice, Party::Charlie],
        &[Party::Bob, Party::Charlie],
    ];
    let triples: Vec<[usize; 3]> = s.input_triples().map(|(x, y, z)| [x, y, z]).collect();
    for keep in subsets {
        let ms: Vec<Vec<f64>> = triples.iter().map(|&t| marginal_at(c, keep, t)).collect();
        for i in 0..triples.len() {
            for j in (i + 1)..triples.len() {
                let same_kept = keep.iter().all(|p| triples[i][p.slot()] == triples[j][p.slot()]);
                if !same_kept {
                    continue;
                }
                let d = ms[i].iter().zip(&ms[j]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                worst = worst.max(d);
            }
        }
    }
    NonSignaling { ok: worst <= tol, worst }
}

/// Largest deviation of `P(a,c|x,y,z)` from `P(a|x,y,z) P(c|x,y,z)`.
pub fn ac_product_deviation(c: &Correlation) -> f64 {
    let s = c.scenario();
    let keep = [Party::Alice, Party::Charlie];
    let nc = s.charlie.outputs;
    let mut worst: f64 = 0.0;
    for (x, y, z) in s.input_triples() {
        let joint = marginal_at(c, &keep, [x, y, z]);
        let pa = marginal_at(c, &[Party::Alice], [x, y, z]);
        let pc = marginal_at(c, &[Party::Charlie], [x, y, z]);
        for (a, &va) in pa.iter().enumerate() {
            for (cc, &vc) in pc.iter().enumerate() {
                worst = worst.max((joint[a * nc + cc] - va * vc).abs());
            }
        }
    }
    worst
}

/// Alice–Charlie factorization test. A `false` result certifies that the
/// correlation is not bilocal.
pub fn ac_product_check(c: &Correlation, tol: f64) -> bool {
    ac_product_deviation(c) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scenario;

    fn signaling_bob_copies_x() -> Correlation {
        // Bob's output equals Alice's input; everything else uniform.
        Correlation::from_fn(Scenario::S22, |x, _, _, _, b, _| if b == x { 0.25 } else { 0.0 })
    }

    #[test]
    fn uniform_marginals() {
        let u = Correlation::uniform(Scenario::S22);
        let m = marginal(&u, &[Party::Charlie, Party::Alice]).unwrap();
        assert_eq!(m.parties(), &[Party::Alice, Party::Charlie]);
        assert!(m.p().iter().all(|&v| (v - 0.25).abs() < 1e-15));
        assert!(marginal(&u, &[]).is_err());
    }

    #[test]
    fn signaling_detected() {
        let c = signaling_bob_copies_x();
        let ns = is_non_signaling(&c, 1e-9);
        assert!(!ns.ok);
        assert!((ns.worst - 1.0).abs() < 1e-12);
        assert!(is_non_signaling(&Correlation::uniform(Scenario::S13), 1e-9).ok);
    }

    #[test]
    fn product_factorizes() {
        let c = Correlation::from_fn(Scenario::S14, |x, _, z, a, b, cc| {
            let pa = if a == x { 0.7 } else { 0.3 };
            let pb = [0.1, 0.2, 0.3, 0.4][b];
            let pc = if cc == 0 { 0.6 - 0.2 * z as f64 } else { 0.4 + 0.2 * z as f64 };
            pa * pb * pc
        });
        assert!(c.is_valid());
        assert!(ac_product_check(&c, 1e-12));
    }

    #[test]
    fn correlated_ac_fails() {
        let c = Correlation::from_fn(Scenario::S14, |_, _, _, a, _, cc| if a == cc { 0.125 } else { 0.0 });
        assert!(!ac_product_check(&c, 1e-9));
        assert!((ac_product_deviation(&c) - 0.25).abs() < 1e-12);
    }
}
