use serde::{Deserialize, Serialize};

use crate::ScenarioError;

/// Labels of Bob's four outcomes in the 14-case, in index order.
/// They correspond to the Bell states Φ+, Φ−, Ψ+, Ψ−.
pub const S14_BOB_LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// Labels of Bob's three outcomes in the 13-case. The third one merges
/// the two Ψ outcomes and is never expanded implicitly.
pub const S13_BOB_LABELS: [&str; 3] = ["00", "01", "10or11"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartySpec {
    pub inputs: usize,
    pub outputs: usize,
}

impl PartySpec {
    pub const fn new(inputs: usize, outputs: usize) -> Self {
        Self { inputs, outputs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
    Charlie,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::Alice, Party::Bob, Party::Charlie];

    pub(crate) fn slot(self) -> usize {
        match self {
            Party::Alice => 0,
            Party::Bob => 1,
            Party::Charlie => 2,
        }
    }
}

/// Input/output cardinalities of the three parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub alice: PartySpec,
    pub bob: PartySpec,
    pub charlie: PartySpec,
}

/// The three canonical scenarios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    S22,
    S14,
    S13,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::S22, ScenarioKind::S14, ScenarioKind::S13];

    pub fn scenario(self) -> Scenario {
        match self {
            ScenarioKind::S22 => Scenario::S22,
            ScenarioKind::S14 => Scenario::S14,
            ScenarioKind::S13 => Scenario::S13,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ScenarioKind::S22 => "22",
            ScenarioKind::S14 => "14",
            ScenarioKind::S13 => "13",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s.trim() {
            "22" | "S22" => Some(ScenarioKind::S22),
            "14" | "S14" => Some(ScenarioKind::S14),
            "13" | "S13" => Some(ScenarioKind::S13),
            _ => None,
        }
    }

    /// Number of deterministic Bob strategies used by the weight tables.
    pub fn bob_strategies(self) -> usize {
        match self {
            ScenarioKind::S22 | ScenarioKind::S14 => 4,
            ScenarioKind::S13 => 3,
        }
    }
}

impl Scenario {
    pub const S22: Scenario = Scenario {
        alice: PartySpec::new(2, 2),
        bob: PartySpec::new(2, 2),
        charlie: PartySpec::new(2, 2),
    };
    pub const S14: Scenario = Scenario {
        alice: PartySpec::new(2, 2),
        bob: PartySpec::new(1, 4),
        charlie: PartySpec::new(2, 2),
    };
    pub const S13: Scenario = Scenario {
        alice: PartySpec::new(2, 2),
        bob: PartySpec::new(1, 3),
        charlie: PartySpec::new(2, 2),
    };

    pub fn new(alice: PartySpec, bob: PartySpec, charlie: PartySpec) -> Result<Self, ScenarioError> {
        for (name, p) in [("alice", alice), ("bob", bob), ("charlie", charlie)] {
            if p.inputs == 0 || p.outputs == 0 {
                return Err(ScenarioError::InvalidScenario(format!(
                    "{name} needs at least one input and one output"
                )));
            }
        }
        Ok(Self { alice, bob, charlie })
    }

    pub fn kind(&self) -> Option<ScenarioKind> {
        ScenarioKind::ALL.into_iter().find(|k| k.scenario() == *self)
    }

    pub fn party(&self, p: Party) -> PartySpec {
        match p {
            Party::Alice => self.alice,
            Party::Bob => self.bob,
            Party::Charlie => self.charlie,
        }
    }

    pub fn inputs(&self) -> [usize; 3] {
        [self.alice.inputs, self.bob.inputs, self.charlie.inputs]
    }

    pub fn outputs(&self) -> [usize; 3] {
        [self.alice.outputs, self.bob.outputs, self.charlie.outputs]
    }

    /// Number of input combinations `(x, y, z)`.
    pub fn input_combos(&self) -> usize {
        self.inputs().iter().product()
    }

    /// Number of output combinations `(a, b, c)`.
    pub fn output_combos(&self) -> usize {
        self.outputs().iter().product()
    }

    pub fn len(&self) -> usize {
        self.input_combos() * self.output_combos()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize, a: usize, b: usize, c: usize) -> usize {
        let [ni, nj, nk] = self.inputs();
        let [na, nb, nc] = self.outputs();
        debug_assert!(x < ni && y < nj && z < nk && a < na && b < nb && c < nc);
        ((((x * nj + y) * nk + z) * na + a) * nb + b) * nc + c
    }

    /// Inverse of [`Scenario::index`].
    pub fn unindex(&self, mut idx: usize) -> [usize; 6] {
        let [ni, nj, nk] = self.inputs();
        let [na, nb, nc] = self.outputs();
        let dims = [ni, nj, nk, na, nb, nc];
        let mut out = [0usize; 6];
        for slot in (0..6).rev() {
            out[slot] = idx % dims[slot];
            idx /= dims[slot];
        }
        out
    }

    /// Iterate over all `(x, y, z)` input triples in layout order.
    pub fn input_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let [ni, nj, nk] = self.inputs();
        (0..ni).flat_map(move |x| (0..nj).flat_map(move |y| (0..nk).map(move |z| (x, y, z))))
    }

    /// Iterate over all `(a, b, c)` output triples in layout order.
    pub fn output_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let [na, nb, nc] = self.outputs();
        (0..na).flat_map(move |a| (0..nb).flat_map(move |b| (0..nc).map(move |c| (a, b, c))))
    }

    /// Human-readable label of Bob's output `b`.
    pub fn bob_output_label(&self, b: usize) -> String {
        match self.kind() {
            Some(ScenarioKind::S14) => S14_BOB_LABELS[b].to_string(),
            Some(ScenarioKind::S13) => S13_BOB_LABELS[b].to_string(),
            _ => b.to_string(),
        }
    }
}
