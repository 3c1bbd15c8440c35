use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{pauli, CMatrix, QuantumError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BobKind {
    /// Complete Bell-state measurement, outcomes 00, 01, 10, 11 for Φ+, Φ−, Ψ+, Ψ−.
    FullBsm,
    /// Two binary measurements, one per input, each a ±1 two-qubit observable.
    PairwiseGrouping,
    /// Outcomes 00 (Φ+), 01 (Φ−) and the merged Ψ± outcome.
    PartialBsm3,
}

/// Bob's projective measurement on his two qubits, `projectors[y][b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BobMeasurement {
    kind: BobKind,
    projectors: Vec<Vec<CMatrix>>,
    labels: Vec<String>,
}

fn bell_states() -> [CMatrix; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: f64, b: f64, c: f64, d: f64| {
        CMatrix::outer(&[a, b, c, d].map(|x| Complex64::new(x * h, 0.0)))
    };
    [
        v(1.0, 0.0, 0.0, 1.0),
        v(1.0, 0.0, 0.0, -1.0),
        v(0.0, 1.0, 1.0, 0.0),
        v(0.0, 1.0, -1.0, 0.0),
    ]
}

impl BobMeasurement {
    pub fn full_bsm() -> Self {
        Self {
            kind: BobKind::FullBsm,
            projectors: vec![bell_states().to_vec()],
            labels: ["00", "01", "10", "11"].map(String::from).to_vec(),
        }
    }

    pub fn partial_bsm3() -> Self {
        let [pp, pm, sp, sm] = bell_states();
        Self {
            kind: BobKind::PartialBsm3,
            projectors: vec![vec![pp, pm, &sp + &sm]],
            labels: ["00", "01", "10or11"].map(String::from).to_vec(),
        }
    }

    /// Input `y` measures observable `obs[y]`; outcome 0 is the `+1` eigenspace.
    pub fn pairwise_grouping(obs: [CMatrix; 2]) -> Result<Self, QuantumError> {
        let id = CMatrix::identity(4);
        let mut projectors = Vec::new();
        for o in &obs {
            if o.dim() != 4 {
                return Err(QuantumError::Dimension("pairwise observables must be 4x4".into()));
            }
            if !o.is_hermitian(1e-10) || (o * o).max_abs_diff(&id) > 1e-10 {
                return Err(QuantumError::InvalidMeasurement(
                    "pairwise observable must be Hermitian and square to identity".into(),
                ));
            }
            projectors.push(vec![(&id + o).scale(0.5), (&id - o).scale(0.5)]);
        }
        let m = Self { kind: BobKind::PairwiseGrouping, projectors, labels: vec!["0".into(), "1".into()] };
        m.check()?;
        Ok(m)
    }

    /// `σZ⊗σZ` for `y = 0` and `σX⊗σX` for `y = 1`.
    pub fn pairwise_zz_xx() -> Self {
        let zz = pauli::z().kron(&pauli::z());
        let xx = pauli::x().kron(&pauli::x());
        Self::pairwise_grouping([zz, xx]).expect("ZZ and XX are valid")
    }

    pub fn kind(&self) -> BobKind {
        self.kind
    }

    pub fn inputs(&self) -> usize {
        self.projectors.len()
    }

    pub fn outputs(&self) -> usize {
        self.projectors[0].len()
    }

    pub fn projector(&self, y: usize, b: usize) -> &CMatrix {
        &self.projectors[y][b]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Completeness and orthogonality of every projector list.
    pub fn check(&self) -> Result<(), QuantumError> {
        let id = CMatrix::identity(4);
        for (y, ps) in self.projectors.iter().enumerate() {
            let mut sum = CMatrix::zeros(4);
            for (i, p) in ps.iter().enumerate() {
                sum = &sum + p;
                for (j, q) in ps.iter().enumerate() {
                    let pq = p * q;
                    let target = if i == j { p.clone() } else { CMatrix::zeros(4) };
                    if pq.max_abs_diff(&target) > 1e-10 {
                        return Err(QuantumError::InvalidMeasurement(format!(
                            "input {y}: projectors {i},{j} not orthogonal"
                        )));
                    }
                }
            }
            if sum.max_abs_diff(&id) > 1e-10 {
                return Err(QuantumError::InvalidMeasurement(format!("input {y}: projectors incomplete")));
            }
        }
        Ok(())
    }
}
