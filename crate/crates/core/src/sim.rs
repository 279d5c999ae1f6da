//! Seeded shot-level simulation of the two probabilistic projective
//! measurements.
//!
//! Each run fixes `(θ, prepared state, measurement kind, basis)`. A shot
//! prepares the state at its rotation angle, rotates the chosen basis onto
//! the z-axis and draws a binary outcome. Depolarizing noise contracts the
//! Bloch vector before the measurement; readout noise flips the outcome bit.
//!
//! # Seed lineage
//!
//! Run `i` of a plan (its position in the canonical run order) draws from
//! `ChaCha8Rng::seed_from_u64(master_seed)` switched to stream `i`. Every
//! shot consumes, in order, one uniform for the basis coin (random-basis
//! mode only), one uniform for the Born draw and one uniform for the readout
//! flip. Results depend on nothing else, so runs can be sampled in parallel.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{k_subsets, ExclusionSet};
use crate::task::{cos_omega, priority_guess, Axis, MeasurementKind, QubitLabel, TaskParams, INPUTS};

pub const DEFAULT_SHOTS: usize = 20_000;

/// How shots of one state and kind are split across the two bases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BasisMode {
    /// Each run measures only its own basis; both bases get the same shots.
    #[default]
    EqualSplit,
    /// Each shot picks a basis by a fair coin, ignoring the run's basis.
    RandomPerShot,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    depolarizing: f64,
    readout_flip: f64,
}

impl NoiseModel {
    /// Readout error of the device qubit used for the demonstration.
    pub const DEVICE_READOUT: f64 = 0.023;

    pub fn new(depolarizing: f64, readout_flip: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&depolarizing) {
            return Err(Error::InvalidNoise(format!("depolarizing {depolarizing} outside [0, 1]")));
        }
        if !(0.0..=0.5).contains(&readout_flip) {
            return Err(Error::InvalidNoise(format!("readout flip {readout_flip} outside [0, 0.5]")));
        }
        Ok(NoiseModel {
            depolarizing,
            readout_flip,
        })
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            depolarizing: 0.0,
            readout_flip: 0.0,
        }
    }

    pub fn depolarizing(&self) -> f64 {
        self.depolarizing
    }

    pub fn readout_flip(&self) -> f64 {
        self.readout_flip
    }
}

/// Rotation angles of one circuit. Angles are Bloch-sphere angles in the
/// plane of the four states, measured from the x-axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleSchedule {
    pub preparation: f64,
    pub measurement: f64,
}

impl AngleSchedule {
    /// Probability of the `+basis` outcome after contracting the state's
    /// Bloch vector by `contraction`.
    pub fn plus_probability(&self, contraction: f64) -> f64 {
        0.5 * (1.0 + contraction * (self.preparation - self.measurement).cos())
    }
}

fn half_angle(axis: Axis, p: &TaskParams) -> f64 {
    match axis {
        Axis::A => p.theta() / 2.0,
        Axis::B => -p.theta() / 2.0,
        Axis::N => cos_omega(p).clamp(-1.0, 1.0).acos() / 2.0,
        Axis::M => -cos_omega(p).clamp(-1.0, 1.0).acos() / 2.0,
    }
}

/// Angles for preparing `prepared` and measuring in `basis`.
///
/// Standard bases sit at `±θ/2` (`a` positive), anticipative ones at
/// `±ω/2` (`n` positive); a negative state adds `π` to its preparation.
pub fn angle_schedule(theta: f64, prepared: QubitLabel, kind: MeasurementKind, basis: Axis) -> Result<AngleSchedule> {
    let p = TaskParams::new(theta)?;
    if !kind.bases().contains(&basis) {
        return Err(Error::InvalidPlan(format!("basis {} is not a {kind} basis", basis.name())));
    }
    if prepared.input_index().is_none() {
        return Err(Error::InvalidPlan(format!("{prepared} is not a preparable state")));
    }
    let preparation = half_angle(prepared.axis, &p) + if prepared.positive { 0.0 } else { PI };
    Ok(AngleSchedule {
        preparation,
        measurement: half_angle(basis, &p),
    })
}

/// One circuit: a state, a measurement kind and one of its bases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Run {
    pub index: usize,
    pub theta: f64,
    pub prepared: QubitLabel,
    pub kind: MeasurementKind,
    pub basis: Axis,
    pub shots: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentPlan {
    pub thetas: Vec<f64>,
    pub shots_per_run: usize,
    pub master_seed: u64,
    pub basis_mode: BasisMode,
    pub runs: Vec<Run>,
}

impl ExperimentPlan {
    pub fn with_basis_mode(mut self, mode: BasisMode) -> Self {
        self.basis_mode = mode;
        self
    }
}

/// Lays out `|θ| × 4 states × 2 kinds × 2 bases` runs, θ outermost.
pub fn plan_experiment(thetas: &[f64], shots: usize, master_seed: u64) -> Result<ExperimentPlan> {
    if thetas.is_empty() {
        return Err(Error::InvalidPlan("no angles".into()));
    }
    if shots == 0 {
        return Err(Error::InvalidPlan("shots per run must be at least 1".into()));
    }
    let mut runs = Vec::with_capacity(thetas.len() * 16);
    for &theta in thetas {
        let theta = TaskParams::new(theta)?.theta();
        for prepared in INPUTS {
            for kind in MeasurementKind::ALL {
                for basis in kind.bases() {
                    runs.push(Run {
                        index: runs.len(),
                        theta,
                        prepared,
                        kind,
                        basis,
                        shots,
                    });
                }
            }
        }
    }
    Ok(ExperimentPlan {
        thetas: thetas.to_vec(),
        shots_per_run: shots,
        master_seed,
        basis_mode: BasisMode::EqualSplit,
        runs,
    })
}

/// RNG stream of run `run_index`.
pub fn run_rng(master_seed: u64, run_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(run_index as u64);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShotRecord {
    pub theta: f64,
    #[serde(serialize_with = "display")]
    pub prepared: QubitLabel,
    pub kind: MeasurementKind,
    #[serde(serialize_with = "axis_name")]
    pub basis: Axis,
    /// Raw bit after readout noise: 0 for `+basis`, 1 for `−basis`.
    pub bit: u8,
    #[serde(serialize_with = "display")]
    pub mapped: QubitLabel,
    pub master_seed: u64,
    pub run_index: usize,
    pub shot_index: usize,
}

fn display<S: serde::Serializer>(l: &QubitLabel, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(l)
}

fn axis_name<S: serde::Serializer>(a: &Axis, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(a.name())
}

struct ShotSampler {
    schedules: [(Axis, AngleSchedule); 2],
    contraction: f64,
    readout: f64,
    mode: BasisMode,
    run_basis: usize,
}

impl ShotSampler {
    fn new(run: &Run, mode: BasisMode, noise: &NoiseModel) -> Result<Self> {
        let bases = run.kind.bases();
        let schedule = |b| angle_schedule(run.theta, run.prepared, run.kind, b);
        Ok(ShotSampler {
            schedules: [(bases[0], schedule(bases[0])?), (bases[1], schedule(bases[1])?)],
            contraction: 1.0 - noise.depolarizing,
            readout: noise.readout_flip,
            mode,
            run_basis: bases.iter().position(|b| *b == run.basis).unwrap_or(0),
        })
    }

    fn shot(&self, rng: &mut ChaCha8Rng) -> (Axis, u8) {
        let which = match self.mode {
            BasisMode::EqualSplit => self.run_basis,
            BasisMode::RandomPerShot => usize::from(rng.random::<f64>() < 0.5),
        };
        let (basis, schedule) = self.schedules[which];
        let born: f64 = rng.random();
        let flip: f64 = rng.random();
        let mut bit = u8::from(born >= schedule.plus_probability(self.contraction));
        if flip < self.readout {
            bit ^= 1;
        }
        (basis, bit)
    }
}

fn mapped_label(basis: Axis, bit: u8) -> QubitLabel {
    QubitLabel::new(basis, bit == 0)
}

/// All shots of one run.
pub fn sample_run(plan: &ExperimentPlan, run: &Run, noise: &NoiseModel) -> Result<Vec<ShotRecord>> {
    let sampler = ShotSampler::new(run, plan.basis_mode, noise)?;
    let mut rng = run_rng(plan.master_seed, run.index);
    Ok((0..run.shots)
        .map(|shot_index| {
            let (basis, bit) = sampler.shot(&mut rng);
            ShotRecord {
                theta: run.theta,
                prepared: run.prepared,
                kind: run.kind,
                basis,
                bit,
                mapped: mapped_label(basis, bit),
                master_seed: plan.master_seed,
                run_index: run.index,
                shot_index,
            }
        })
        .collect())
}

/// Every record of the plan, in run order.
pub fn sample_plan(plan: &ExperimentPlan, noise: &NoiseModel) -> Result<Vec<ShotRecord>> {
    let per_run = plan
        .runs
        .par_iter()
        .map(|run| sample_run(plan, run, noise))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_run.into_iter().flatten().collect())
}

type TallyKey = (usize, MeasurementKind, QubitLabel, Axis, QubitLabel);

/// Outcome counts keyed by `(θ index, kind, prepared, basis, mapped outcome)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tally {
    thetas: Vec<f64>,
    counts: BTreeMap<TallyKey, f64>,
}

impl Tally {
    fn theta_index(&mut self, theta: f64) -> usize {
        match self.thetas.iter().position(|t| t.to_bits() == theta.to_bits()) {
            Some(i) => i,
            None => {
                self.thetas.push(theta);
                self.thetas.len() - 1
            }
        }
    }

    pub fn add(&mut self, theta: f64, kind: MeasurementKind, prepared: QubitLabel, basis: Axis, mapped: QubitLabel, weight: f64) {
        let t = self.theta_index(theta);
        *self.counts.entry((t, kind, prepared, basis, mapped)).or_default() += weight;
    }

    pub fn from_records(records: &[ShotRecord]) -> Self {
        let mut tally = Tally::default();
        for r in records {
            tally.add(r.theta, r.kind, r.prepared, r.basis, r.mapped, 1.0);
        }
        tally
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn total(&self) -> f64 {
        self.counts.values().sum()
    }
}

/// Samples the whole plan straight into counts. Draws are identical to
/// [`sample_plan`].
pub fn simulate_tally(plan: &ExperimentPlan, noise: &NoiseModel) -> Result<Tally> {
    let per_run = plan
        .runs
        .par_iter()
        .map(|run| {
            let sampler = ShotSampler::new(run, plan.basis_mode, noise)?;
            let mut rng = run_rng(plan.master_seed, run.index);
            let mut counts = [[0u64; 2]; 2];
            for _ in 0..run.shots {
                let (basis, bit) = sampler.shot(&mut rng);
                let which = usize::from(basis != sampler.schedules[0].0);
                counts[which][bit as usize] += 1;
            }
            Ok((run, sampler.schedules.map(|s| s.0), counts))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::default();
    for theta in &plan.thetas {
        tally.theta_index(TaskParams::new(*theta)?.theta());
    }
    for (run, bases, counts) in per_run {
        for (b, basis) in bases.iter().enumerate() {
            for bit in 0..2u8 {
                let n = counts[b][bit as usize];
                if n > 0 {
                    tally.add(run.theta, run.kind, run.prepared, *basis, mapped_label(*basis, bit), n as f64);
                }
            }
        }
    }
    Ok(tally)
}

/// Infinite-shot limit: the tally weighted by exact outcome probabilities,
/// normalized so that every `(θ, kind)` block sums to one.
pub fn exact_tally(thetas: &[f64], noise: &NoiseModel) -> Result<Tally> {
    let mut tally = Tally::default();
    let contraction = (1.0 - noise.depolarizing) * (1.0 - 2.0 * noise.readout_flip);
    for &theta in thetas {
        let theta = TaskParams::new(theta)?.theta();
        for kind in MeasurementKind::ALL {
            for prepared in INPUTS {
                for basis in kind.bases() {
                    let plus = angle_schedule(theta, prepared, kind, basis)?.plus_probability(contraction);
                    let w = 0.25 * 0.5;
                    tally.add(theta, kind, prepared, basis, QubitLabel::new(basis, true), w * plus);
                    tally.add(theta, kind, prepared, basis, QubitLabel::new(basis, false), w * (1.0 - plus));
                }
            }
        }
    }
    Ok(tally)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmpiricalEstimate {
    pub theta: f64,
    pub kind: MeasurementKind,
    pub k: usize,
    pub value: f64,
    pub stderr: f64,
    /// Pooled weight behind the estimate (shots for sampled tallies).
    pub shots: f64,
}

/// Fraction of the `k`-sets avoiding `prepared` for which the priority
/// guess from `mapped` is correct.
pub fn shot_score(kind: MeasurementKind, prepared: QubitLabel, mapped: QubitLabel, k: usize) -> f64 {
    let x = prepared.input_index().expect("prepared state is an input");
    let allowed: Vec<ExclusionSet> = k_subsets(INPUTS.len(), k)
        .into_iter()
        .filter(|s| !s.contains(x))
        .collect();
    let hits = allowed
        .iter()
        .filter(|s| priority_guess(kind, mapped, s) == Some(prepared))
        .count();
    hits as f64 / allowed.len() as f64
}

fn check_balance(tally: &Tally, mode: BasisMode) -> Result<()> {
    let mut groups: BTreeMap<(usize, MeasurementKind), BTreeMap<(QubitLabel, Axis), f64>> = BTreeMap::new();
    for ((t, kind, prepared, basis, _), n) in &tally.counts {
        *groups.entry((*t, *kind)).or_default().entry((*prepared, *basis)).or_default() += n;
    }
    for ((t, kind), cells) in groups {
        let theta = tally.thetas[t];
        match mode {
            BasisMode::EqualSplit => {
                let expected = 4 * kind.bases().len();
                let first = cells.values().next().copied().unwrap_or(0.0);
                if cells.len() != expected || cells.values().any(|n| (n - first).abs() > 1e-9 * first.max(1.0)) {
                    return Err(Error::UnbalancedBases(format!(
                        "θ = {theta}, {kind}: cells {:?}",
                        cells.iter().map(|((x, b), n)| format!("{x}/{}={n}", b.name())).collect::<Vec<_>>()
                    )));
                }
            }
            BasisMode::RandomPerShot => {
                let mut per_state: BTreeMap<QubitLabel, f64> = BTreeMap::new();
                for ((x, _), n) in &cells {
                    *per_state.entry(*x).or_default() += n;
                }
                let first = per_state.values().next().copied().unwrap_or(0.0);
                if per_state.len() != INPUTS.len() || per_state.values().any(|n| (n - first).abs() > 1e-9 * first.max(1.0)) {
                    return Err(Error::UnbalancedBases(format!("θ = {theta}, {kind}: unequal shots per state")));
                }
            }
        }
    }
    Ok(())
}

/// `(state, basis)`; the basis is `None` when it is drawn per shot.
type Stratum = (QubitLabel, Option<Axis>);

/// `(Σn, Σn·s, Σn·s²)`.
type Moments = (f64, f64, f64);

/// Per-θ, per-kind success estimates from a tally.
pub fn estimate(tally: &Tally, k: usize, mode: BasisMode) -> Result<Vec<EmpiricalEstimate>> {
    if k > 2 {
        return Err(Error::ExclusionOutOfRange { k, max: 2 });
    }
    check_balance(tally, mode)?;
    // Shots per stratum are fixed by the design: (state, basis) cells for an
    // equal split, states alone when the basis is drawn per shot.
    let mut strata: BTreeMap<(usize, MeasurementKind), BTreeMap<Stratum, Moments>> = BTreeMap::new();
    for ((t, kind, prepared, basis, mapped), n) in &tally.counts {
        let s = shot_score(*kind, *prepared, *mapped, k);
        let cell = match mode {
            BasisMode::EqualSplit => Some(*basis),
            BasisMode::RandomPerShot => None,
        };
        let e = strata.entry((*t, *kind)).or_default().entry((*prepared, cell)).or_default();
        e.0 += n;
        e.1 += n * s;
        e.2 += n * s * s;
    }
    Ok(strata
        .into_iter()
        .map(|((t, kind), cells)| {
            let n: f64 = cells.values().map(|c| c.0).sum();
            let mean = cells.values().map(|c| c.1).sum::<f64>() / n;
            let mut var_of_mean = 0.0;
            for (nh, s1, s2) in cells.values() {
                let m = s1 / nh;
                let var = (s2 / nh - m * m).max(0.0);
                var_of_mean += if *nh > 1.0 { (nh / n).powi(2) * var / (nh - 1.0) } else { f64::NAN };
            }
            let stderr = var_of_mean.sqrt();
            EmpiricalEstimate {
                theta: tally.thetas[t],
                kind,
                k,
                value: mean,
                stderr,
                shots: n,
            }
        })
        .collect())
}

/// Success estimates from raw shot records, reusing every shot for all
/// exclusion sets that keep the prepared state.
pub fn empirical_success(records: &[ShotRecord], k: usize, mode: BasisMode) -> Result<Vec<EmpiricalEstimate>> {
    estimate(&Tally::from_records(records), k, mode)
}

/// One CSV line per shot, header included.
pub fn write_records<W: Write>(records: &[ShotRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

type Mat2 = [[Complex64; 2]; 2];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

fn rz(theta: f64) -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -theta / 2.0), zero],
        [zero, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

fn sqrt_x() -> Mat2 {
    let p = Complex64::new(0.5, 0.5);
    let m = Complex64::new(0.5, -0.5);
    [[p, m], [m, p]]
}

/// Native-gate form `i·√X·R_z(π − θ)·√X·R_z(π)` of `R_y(θ)`.
pub fn ry_native(theta: f64) -> Mat2 {
    let sx = sqrt_x();
    let m = mul(&mul(&mul(&sx, &rz(PI - theta)), &sx), &rz(PI));
    m.map(|row| row.map(|c| c * Complex64::i()))
}

/// Largest entry distance between `a` and `b` after removing the global
/// phase of `b` relative to `a`.
pub fn phase_distance(a: &Mat2, b: &Mat2) -> f64 {
    let overlap: Complex64 = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| a[i][j].conj() * b[i][j])
        .sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (a[i][j] * phase - b[i][j]).norm())
        .fold(0.0, f64::max)
}

/// Checks `R_y(θ) = i√X R_z(π−θ) √X R_z(π)` up to global phase.
pub fn native_decomposition_check(theta: f64, tol: f64) -> bool {
    phase_distance(&ry(theta), &ry_native(theta)) <= tol
}
