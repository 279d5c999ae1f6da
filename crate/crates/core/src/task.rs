//! The four-state qubit task: inputs `±a, ±b` in the equatorial plane of the
//! Bloch sphere, spanning the angle `θ`.
//!
//! `a = cos(θ/2) x̂ + sin(θ/2) ŷ` and `b = cos(θ/2) x̂ − sin(θ/2) ŷ`. The
//! anticipative directions `m, n` lie in the same plane, `n` at `+ω/2` and
//! `m` at `−ω/2` from the x-axis.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use crate::bloch::{joint_table, HermitianOp, JointTable, Measurement, StateEnsemble, Vec3, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::game::{
    bayes_optimal_post, exclusion_info_map, k_subsets, success_no_cpost, success_with_cpost, ExclusionSet, GameSpec,
    PostProcessing,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axis {
    A,
    B,
    M,
    N,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::A => "a",
            Axis::B => "b",
            Axis::M => "m",
            Axis::N => "n",
        }
    }
}

/// A signed Bloch direction of the task, e.g. `+a` or `−n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitLabel {
    pub axis: Axis,
    pub positive: bool,
}

impl QubitLabel {
    pub const PLUS_A: QubitLabel = QubitLabel::new(Axis::A, true);
    pub const MINUS_A: QubitLabel = QubitLabel::new(Axis::A, false);
    pub const PLUS_B: QubitLabel = QubitLabel::new(Axis::B, true);
    pub const MINUS_B: QubitLabel = QubitLabel::new(Axis::B, false);
    pub const PLUS_M: QubitLabel = QubitLabel::new(Axis::M, true);
    pub const MINUS_M: QubitLabel = QubitLabel::new(Axis::M, false);
    pub const PLUS_N: QubitLabel = QubitLabel::new(Axis::N, true);
    pub const MINUS_N: QubitLabel = QubitLabel::new(Axis::N, false);

    pub const fn new(axis: Axis, positive: bool) -> Self {
        QubitLabel { axis, positive }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        QubitLabel::new(self.axis, !self.positive)
    }

    pub fn sign(&self) -> f64 {
        if self.positive {
            1.0
        } else {
            -1.0
        }
    }

    pub fn bloch(&self, p: &TaskParams) -> Vec3 {
        let base = match self.axis {
            Axis::A => p.a(),
            Axis::B => p.b(),
            Axis::M => anticipative_directions(p).0,
            Axis::N => anticipative_directions(p).1,
        };
        base.scale(self.sign())
    }

    /// Index in [`INPUTS`] for `±a, ±b`.
    pub fn input_index(&self) -> Option<usize> {
        INPUTS.iter().position(|l| l == self)
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { '+' } else { '-' }, self.axis.name())
    }
}

impl std::str::FromStr for QubitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let positive = match chars.next() {
            Some('+') => true,
            Some('-') => false,
            _ => return Err(Error::LabelMismatch(format!("bad label {s:?}"))),
        };
        let axis = match chars.as_str() {
            "a" => Axis::A,
            "b" => Axis::B,
            "m" => Axis::M,
            "n" => Axis::N,
            _ => return Err(Error::LabelMismatch(format!("bad label {s:?}"))),
        };
        Ok(QubitLabel::new(axis, positive))
    }
}

/// The input (and answer) set `X = Y = {+a, −a, +b, −b}` in canonical order.
pub const INPUTS: [QubitLabel; 4] = [
    QubitLabel::PLUS_A,
    QubitLabel::MINUS_A,
    QubitLabel::PLUS_B,
    QubitLabel::MINUS_B,
];

pub const ANTICIPATIVE_OUTCOMES: [QubitLabel; 4] = [
    QubitLabel::PLUS_M,
    QubitLabel::MINUS_M,
    QubitLabel::PLUS_N,
    QubitLabel::MINUS_N,
];

/// Angle between the two bases, restricted to `(0, π/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaskParams {
    theta: f64,
}

impl TaskParams {
    pub fn new(theta: f64) -> Result<Self> {
        // small slack so that grids ending at π/2 computed in floating point are accepted
        if !(theta > 0.0 && theta <= FRAC_PI_2 + 1e-12) {
            return Err(Error::AngleOutOfRange(theta));
        }
        Ok(TaskParams {
            theta: theta.min(FRAC_PI_2),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cos_theta(&self) -> f64 {
        self.theta.cos()
    }

    pub fn a(&self) -> Vec3 {
        let h = self.theta / 2.0;
        Vec3::new(h.cos(), h.sin(), 0.0)
    }

    pub fn b(&self) -> Vec3 {
        let h = self.theta / 2.0;
        Vec3::new(h.cos(), -h.sin(), 0.0)
    }

    /// `√(10 + 6 cos θ) = |3a + b| = |a + 3b|`.
    pub fn root(&self) -> f64 {
        (10.0 + 6.0 * self.cos_theta()).sqrt()
    }
}

/// The default sweep: `θ_i = i·π/50` for `i = 1..=25`.
pub fn default_grid() -> Vec<f64> {
    grid(std::f64::consts::PI / 50.0, FRAC_PI_2, 25)
}

/// `count` points spaced uniformly from `min` to `max` inclusive.
pub fn grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![max],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    max
                } else {
                    min + (max - min) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

pub fn make_ensemble(p: &TaskParams) -> StateEnsemble<QubitLabel> {
    let states = INPUTS
        .iter()
        .map(|x| (*x, HermitianOp::weighted(1.0 / 8.0, x.bloch(p))))
        .collect();
    StateEnsemble::new(states, DEFAULT_TOL).expect("four-state ensemble is normalized")
}

fn quarter_effects(p: &TaskParams, labels: &[QubitLabel; 4]) -> Measurement<QubitLabel> {
    let effects = labels
        .iter()
        .map(|z| (*z, HermitianOp::weighted(0.25, z.bloch(p))))
        .collect();
    Measurement::new(effects).expect("labels are distinct")
}

/// Effects `(𝟙 ± a·σ)/4`, `(𝟙 ± b·σ)/4` on outcomes `±a, ±b`.
pub fn standard_measurement(p: &TaskParams) -> Measurement<QubitLabel> {
    quarter_effects(p, &INPUTS)
}

/// `m = (a + 3b)/√(10 + 6cosθ)`, `n = (3a + b)/√(10 + 6cosθ)`.
pub fn anticipative_directions(p: &TaskParams) -> (Vec3, Vec3) {
    let (a, b, r) = (p.a(), p.b(), p.root());
    let m = a.add(&b.scale(3.0)).scale(1.0 / r);
    let n = a.scale(3.0).add(&b).scale(1.0 / r);
    (m, n)
}

/// Effects `(𝟙 ± m·σ)/4`, `(𝟙 ± n·σ)/4` on outcomes `±m, ±n`.
pub fn anticipative_measurement(p: &TaskParams) -> Measurement<QubitLabel> {
    quarter_effects(p, &ANTICIPATIVE_OUTCOMES)
}

/// `cos ω = m·n = (3 + 5cosθ)/(5 + 3cosθ)`.
pub fn cos_omega(p: &TaskParams) -> f64 {
    let c = p.cos_theta();
    (3.0 + 5.0 * c) / (5.0 + 3.0 * c)
}

pub fn omega(p: &TaskParams) -> f64 {
    cos_omega(p).clamp(-1.0, 1.0).acos()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PqValues {
    pub p_plus: f64,
    pub p_minus: f64,
    pub q_plus: f64,
    pub q_minus: f64,
}

pub fn pq_values(p: &TaskParams) -> PqValues {
    let c = p.cos_theta();
    let r = p.root();
    let pf = (1.0 + 3.0 * c) / r;
    let qf = (c + 3.0) / r;
    PqValues {
        p_plus: (1.0 + pf) / 16.0,
        p_minus: (1.0 - pf) / 16.0,
        q_plus: (1.0 + qf) / 16.0,
        q_minus: (1.0 - qf) / 16.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementKind {
    Standard,
    Anticipative,
}

impl MeasurementKind {
    pub const ALL: [MeasurementKind; 2] = [MeasurementKind::Standard, MeasurementKind::Anticipative];

    pub fn name(&self) -> &'static str {
        match self {
            MeasurementKind::Standard => "standard",
            MeasurementKind::Anticipative => "anticipative",
        }
    }

    pub fn outcomes(&self) -> [QubitLabel; 4] {
        match self {
            MeasurementKind::Standard => INPUTS,
            MeasurementKind::Anticipative => ANTICIPATIVE_OUTCOMES,
        }
    }

    pub fn measurement(&self, p: &TaskParams) -> Measurement<QubitLabel> {
        match self {
            MeasurementKind::Standard => standard_measurement(p),
            MeasurementKind::Anticipative => anticipative_measurement(p),
        }
    }

    /// The two projective bases whose equal mixture realizes the POVM.
    pub fn bases(&self) -> [Axis; 2] {
        match self {
            MeasurementKind::Standard => [Axis::A, Axis::B],
            MeasurementKind::Anticipative => [Axis::M, Axis::N],
        }
    }
}

impl fmt::Display for MeasurementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MeasurementKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" | "st" => Ok(MeasurementKind::Standard),
            "anticipative" | "an" => Ok(MeasurementKind::Anticipative),
            _ => Err(Error::LabelMismatch(format!("unknown measurement kind {s:?}"))),
        }
    }
}

/// One of the six success probabilities `ε^st_k`, `ε^an_k`, `k ∈ {0,1,2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScenarioId {
    pub kind: MeasurementKind,
    pub k: usize,
}

impl ScenarioId {
    pub fn new(kind: MeasurementKind, k: usize) -> Result<Self> {
        if k > 2 {
            return Err(Error::ExclusionOutOfRange { k, max: 2 });
        }
        Ok(ScenarioId { kind, k })
    }

    /// Canonical order: standard k = 0, 1, 2 then anticipative k = 0, 1, 2.
    pub fn all() -> [ScenarioId; 6] {
        let mut out = [ScenarioId {
            kind: MeasurementKind::Standard,
            k: 0,
        }; 6];
        for (i, kind) in MeasurementKind::ALL.iter().enumerate() {
            for k in 0..3 {
                out[3 * i + k] = ScenarioId { kind: *kind, k };
            }
        }
        out
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/k={}", self.kind, self.k)
    }
}

pub fn closed_form(s: ScenarioId, p: &TaskParams) -> f64 {
    let half_cos2 = (p.theta() / 2.0).cos().powi(2);
    let r = p.root();
    match (s.kind, s.k) {
        (MeasurementKind::Standard, 0) => 0.5,
        (MeasurementKind::Standard, 1) => (3.0 + half_cos2) / 6.0,
        (MeasurementKind::Standard, _) => (4.0 + half_cos2) / 6.0,
        (MeasurementKind::Anticipative, 0) => 4.0 * pq_values(p).q_plus,
        (MeasurementKind::Anticipative, 1) => (4.0 + r) / 12.0,
        (MeasurementKind::Anticipative, _) => (6.0 + r) / 12.0,
    }
}

/// Relabeling priority per outcome, best guess first.
pub fn priority_table(kind: MeasurementKind) -> [(QubitLabel, [QubitLabel; 4]); 4] {
    use QubitLabel as L;
    let a_first = [L::PLUS_A, L::PLUS_B, L::MINUS_B, L::MINUS_A];
    let neg = |r: [QubitLabel; 4]| r.map(QubitLabel::neg);
    let b_first = [L::PLUS_B, L::PLUS_A, L::MINUS_A, L::MINUS_B];
    match kind {
        MeasurementKind::Standard => [
            (L::PLUS_A, a_first),
            (L::MINUS_A, neg(a_first)),
            (L::PLUS_B, b_first),
            (L::MINUS_B, neg(b_first)),
        ],
        MeasurementKind::Anticipative => [
            (L::PLUS_N, a_first),
            (L::MINUS_N, neg(a_first)),
            (L::PLUS_M, b_first),
            (L::MINUS_M, neg(b_first)),
        ],
    }
}

/// Best non-excluded guess for `outcome`, following the priority table.
/// Returns `None` if the outcome does not belong to `kind`.
pub fn priority_guess(kind: MeasurementKind, outcome: QubitLabel, excluded: &ExclusionSet) -> Option<QubitLabel> {
    let (_, order) = priority_table(kind).into_iter().find(|(z, _)| *z == outcome)?;
    order
        .into_iter()
        .find(|y| !excluded.contains(y.input_index().expect("priority entries are inputs")))
}

/// Answers sorted by decreasing conditional probability `p(x | z)` for one
/// outcome column; equal entries keep input order.
pub fn posterior_order<Z: crate::Label>(table: &JointTable<QubitLabel, Z>, z: usize) -> Vec<QubitLabel> {
    let mut idx: Vec<usize> = (0..table.inputs().len()).collect();
    idx.sort_by(|&i, &j| table.get(j, z).total_cmp(&table.get(i, z)));
    idx.into_iter().map(|i| table.inputs()[i]).collect()
}

/// Guessing game `Y = X`, `f(x, y) = δ_{x,y}` on the Born table of `kind`.
pub fn game(kind: MeasurementKind, p: &TaskParams) -> Result<GameSpec<QubitLabel, QubitLabel, QubitLabel>> {
    let table = joint_table(&make_ensemble(p), &kind.measurement(p), DEFAULT_TOL)?;
    GameSpec::new(INPUTS.to_vec(), |x, y| x == y, table)
}

/// Post-processing read off the priority table for every `k`-set.
pub fn priority_post(kind: MeasurementKind, k: usize) -> Result<PostProcessing<QubitLabel, QubitLabel>> {
    let outcomes = kind.outcomes();
    PostProcessing::deterministic(INPUTS.to_vec(), outcomes.to_vec(), &k_subsets(4, k), |set, z| {
        priority_guess(kind, outcomes[z], set)
            .and_then(|y| y.input_index())
            .expect("k < 4 leaves a candidate")
    })
}

/// Success probability through the general pipeline: Born table, uniform
/// exclusion map and posterior-maximizing post-processing.
pub fn pipeline_success(s: ScenarioId, p: &TaskParams) -> Result<f64> {
    let g = game(s.kind, p)?;
    let info = exclusion_info_map(&g, s.k)?;
    let post = bayes_optimal_post(&g, &info)?;
    if s.k == 0 {
        success_no_cpost(&g, &post)
    } else {
        success_with_cpost(&g, &info, &post)
    }
}
