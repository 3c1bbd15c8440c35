use crate::{Rational, Scenario, ScenarioError, ScenarioKind, NORMALIZATION_TOL};

/// Entries at or above this (negative) value are treated as rounding noise
/// and clamped to zero on construction.
const CLAMP_FLOOR: f64 = -1e-15;

/// Conditional probability tensor `P(a,b,c|x,y,z)` of a scenario.
///
/// Immutable after construction. An optional exact rational mirror can be
/// attached when the entries are known in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct Correlation {
    scenario: Scenario,
    p: Vec<f64>,
    exact: Option<Vec<Rational>>,
}

/// One failed invariant reported by [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Entry below zero, at `[x, y, z, a, b, c]`.
    Negative { index: [usize; 6], value: f64 },
    /// Row `(x, y, z)` does not sum to one.
    Normalization { inputs: [usize; 3], sum: f64 },
}

impl Violation {
    /// Size of the violation.
    pub fn magnitude(&self) -> f64 {
        match self {
            Violation::Negative { value, .. } => -value,
            Violation::Normalization { sum, .. } => (sum - 1.0).abs(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Negative { index, value } => {
                write!(f, "negative entry {value:e} at (x,y,z,a,b,c) = {index:?}")
            }
            Violation::Normalization { inputs, sum } => {
                write!(f, "row (x,y,z) = {inputs:?} sums to {sum} (off by {:e})", (sum - 1.0).abs())
            }
        }
    }
}

/// Check nonnegativity and per-input normalization of a raw tensor.
pub fn validate(scenario: &Scenario, p: &[f64]) -> Result<Vec<Violation>, ScenarioError> {
    if p.len() != scenario.len() {
        return Err(ScenarioError::DimensionMismatch { expected: scenario.len(), got: p.len() });
    }
    let mut out = Vec::new();
    let block = scenario.output_combos();
    for (row, (x, y, z)) in scenario.input_triples().enumerate() {
        let slice = &p[row * block..(row + 1) * block];
        for (k, &v) in slice.iter().enumerate() {
            if v < 0.0 || v.is_nan() {
                out.push(Violation::Negative { index: scenario.unindex(row * block + k), value: v });
            }
        }
        let sum: f64 = slice.iter().sum();
        if !((sum - 1.0).abs() <= NORMALIZATION_TOL) {
            out.push(Violation::Normalization { inputs: [x, y, z], sum });
        }
    }
    Ok(out)
}

impl Correlation {
    /// Wrap a tensor. Checks dimensions only; call [`Correlation::validate`]
    /// for the probabilistic invariants. Tiny negative entries are clamped.
    pub fn new(scenario: Scenario, mut p: Vec<f64>) -> Result<Self, ScenarioError> {
        if p.len() != scenario.len() {
            return Err(ScenarioError::DimensionMismatch { expected: scenario.len(), got: p.len() });
        }
        for v in p.iter_mut() {
            if *v < 0.0 && *v >= CLAMP_FLOOR {
                *v = 0.0;
            }
        }
        Ok(Self { scenario, p, exact: None })
    }

    /// Like [`Correlation::new`] but also rejects tensors that fail validation.
    pub fn checked(scenario: Scenario, p: Vec<f64>) -> Result<Self, ScenarioError> {
        let c = Self::new(scenario, p)?;
        let v = c.validate();
        if let Some(first) = v.first() {
            return Err(ScenarioError::InvalidScenario(format!("invalid correlation: {first}")));
        }
        Ok(c)
    }

    /// Build from a closure over `(x, y, z, a, b, c)`.
    pub fn from_fn<F>(scenario: Scenario, f: F) -> Self
    where
        F: Fn(usize, usize, usize, usize, usize, usize) -> f64,
    {
        let p = (0..scenario.len())
            .map(|i| {
                let [x, y, z, a, b, c] = scenario.unindex(i);
                f(x, y, z, a, b, c)
            })
            .collect();
        Self::new(scenario, p).expect("length matches by construction")
    }

    /// Exact tensor built from rationals; the float tensor is derived from it.
    pub fn from_exact(scenario: Scenario, exact: Vec<Rational>) -> Result<Self, ScenarioError> {
        let p = exact.iter().map(Rational::to_f64).collect();
        let mut c = Self::new(scenario, p)?;
        c.exact = Some(exact);
        Ok(c)
    }

    /// Uniform distribution over outputs for every input.
    pub fn uniform(scenario: Scenario) -> Self {
        let v = 1.0 / scenario.output_combos() as f64;
        Self::new(scenario, vec![v; scenario.len()]).expect("length matches")
    }

    /// Attach an exact mirror; each entry must agree with the float tensor to 1e-12.
    pub fn with_exact(mut self, exact: Vec<Rational>) -> Result<Self, ScenarioError> {
        if exact.len() != self.p.len() {
            return Err(ScenarioError::DimensionMismatch { expected: self.p.len(), got: exact.len() });
        }
        for (i, (r, v)) in exact.iter().zip(&self.p).enumerate() {
            if (r.to_f64() - v).abs() > 1e-12 {
                return Err(ScenarioError::Parse(format!(
                    "exact entry {i} ({r}) disagrees with float value {v}"
                )));
            }
        }
        self.exact = Some(exact);
        Ok(self)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn kind(&self) -> Option<ScenarioKind> {
        self.scenario.kind()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize, a: usize, b: usize, c: usize) -> f64 {
        self.p[self.scenario.index(x, y, z, a, b, c)]
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(&self.scenario, &self.p).expect("dimensions checked on construction")
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `Σ_{a,b,c} f(a,b,c) P(a,b,c|x,y,z)`.
    pub fn expectation<F: Fn(usize, usize, usize) -> f64>(&self, x: usize, y: usize, z: usize, f: F) -> f64 {
        self.scenario
            .output_triples()
            .map(|(a, b, c)| f(a, b, c) * self.get(x, y, z, a, b, c))
            .sum()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Correlation) -> Result<f64, ScenarioError> {
        if self.scenario != other.scenario {
            return Err(ScenarioError::ScenarioMismatch);
        }
        Ok(self.p.iter().zip(&other.p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Sum of squared entrywise differences.
    pub fn squared_distance(&self, other: &Correlation) -> Result<f64, ScenarioError> {
        if self.scenario != other.scenario {
            return Err(ScenarioError::ScenarioMismatch);
        }
        Ok(self.p.iter().zip(&other.p).map(|(a, b)| (a - b) * (a - b)).sum())
    }
}

/// Convex combination of correlations of one scenario.
pub fn mix(cs: &[Correlation], w: &[f64]) -> Result<Correlation, ScenarioError> {
    if cs.is_empty() || cs.len() != w.len() {
        return Err(ScenarioError::InvalidWeights { sum: w.iter().sum() });
    }
    let sum: f64 = w.iter().sum();
    if w.iter().any(|&x| x < 0.0 || !x.is_finite()) || (sum - 1.0).abs() > 1e-12 {
        return Err(ScenarioError::InvalidWeights { sum });
    }
    let scenario = *cs[0].scenario();
    if cs.iter().any(|c| *c.scenario() != scenario) {
        return Err(ScenarioError::ScenarioMismatch);
    }
    let mut p = vec![0.0; scenario.len()];
    for (c, &wi) in cs.iter().zip(w) {
        for (acc, v) in p.iter_mut().zip(c.p()) {
            *acc += wi * v;
        }
    }
    Correlation::new(scenario, p)
}
