//! Qubit operators in the Bloch parametrization.
//!
//! Every Hermitian operator on a qubit is written as `A = s·𝟙 + v·σ` with a
//! real scalar `s` and a real 3-vector `v`. States, effects and Born-rule
//! tables are all handled in this form, so no complex matrices appear here.

use std::fmt;

use crate::error::{Error, Result};

/// Default absolute tolerance for validity checks.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A real 3-vector.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, k: f64) -> Vec3 {
        Vec3(self.0.map(|c| c * k))
    }

    pub fn add(&self, o: &Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn sub(&self, o: &Vec3) -> Vec3 {
        self.add(&o.scale(-1.0))
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// `scalar·𝟙 + bloch·σ`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HermitianOp {
    pub scalar: f64,
    pub bloch: Vec3,
}

impl HermitianOp {
    pub const ZERO: HermitianOp = HermitianOp {
        scalar: 0.0,
        bloch: Vec3::ZERO,
    };
    pub const IDENTITY: HermitianOp = HermitianOp {
        scalar: 1.0,
        bloch: Vec3::ZERO,
    };

    pub const fn new(scalar: f64, bloch: Vec3) -> Self {
        HermitianOp { scalar, bloch }
    }

    /// `weight·(𝟙 + direction·σ)`, the form used for every state and effect
    /// of the four-state task.
    pub fn weighted(weight: f64, direction: Vec3) -> Self {
        HermitianOp::new(weight, direction.scale(weight))
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.scalar
    }

    /// Eigenvalues `(scalar + |v|, scalar - |v|)`, largest first.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.bloch.norm();
        (self.scalar + r, self.scalar - r)
    }

    pub fn largest_eigenvalue(&self) -> f64 {
        self.eigenvalues().0
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.scalar + tol >= self.bloch.norm()
    }

    /// `0 ≤ A ≤ 𝟙`.
    pub fn is_effect(&self, tol: f64) -> bool {
        let r = self.bloch.norm();
        self.scalar + tol >= r && (1.0 - self.scalar) + tol >= r
    }

    pub fn scale(&self, k: f64) -> HermitianOp {
        HermitianOp::new(self.scalar * k, self.bloch.scale(k))
    }

    pub fn add(&self, o: &HermitianOp) -> HermitianOp {
        HermitianOp::new(self.scalar + o.scalar, self.bloch.add(&o.bloch))
    }

    pub fn sub(&self, o: &HermitianOp) -> HermitianOp {
        self.add(&o.scale(-1.0))
    }

    /// Operator product `self · other`. The result is generally not
    /// Hermitian; its antisymmetric part shows up as `imag`.
    pub fn product(&self, o: &HermitianOp) -> BlochProduct {
        BlochProduct {
            scalar: self.scalar * o.scalar + self.bloch.dot(&o.bloch),
            real: o.bloch.scale(self.scalar).add(&self.bloch.scale(o.scalar)),
            imag: self.bloch.cross(&o.bloch),
        }
    }

    /// Largest absolute component of `self - other`.
    pub fn max_abs_diff(&self, o: &HermitianOp) -> f64 {
        let d = self.sub(o);
        d.scalar.abs().max(d.bloch.max_abs())
    }
}

/// `(scalar)𝟙 + (real + i·imag)·σ`, the general product of two Hermitian
/// qubit operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochProduct {
    pub scalar: f64,
    pub real: Vec3,
    pub imag: Vec3,
}

impl BlochProduct {
    /// Largest absolute component of `self - k·op`.
    pub fn max_abs_diff_from(&self, op: &HermitianOp, k: f64) -> f64 {
        let s = (self.scalar - k * op.scalar).abs();
        let r = self.real.sub(&op.bloch.scale(k)).max_abs();
        s.max(r).max(self.imag.max_abs())
    }
}

/// `tr[AB] = 2(a₀b₀ + a·b)`.
pub fn trace_product(a: &HermitianOp, b: &HermitianOp) -> f64 {
    2.0 * (a.scalar * b.scalar + a.bloch.dot(&b.bloch))
}

/// Rank-one projector `(𝟙 + u·σ)/2` onto the Bloch direction `u`.
pub fn projector(direction: Vec3) -> Result<HermitianOp> {
    projector_with_tol(direction, 1e-9)
}

pub fn projector_with_tol(direction: Vec3, tol: f64) -> Result<HermitianOp> {
    let n = direction.norm();
    if !n.is_finite() || (n - 1.0).abs() > tol {
        return Err(Error::NonUnitDirection(n));
    }
    Ok(HermitianOp::weighted(0.5, direction))
}

/// A finite, outcome-labelled family of effects.
///
/// Labels keep insertion order; it is the order rows and columns appear in
/// every derived table.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement<L> {
    effects: Vec<(L, HermitianOp)>,
}

impl<L: Clone + PartialEq + fmt::Debug> Measurement<L> {
    /// Builds the measurement without checking the POVM conditions; use
    /// [`validate_measurement`] or [`Measurement::validated`] for that.
    pub fn new(effects: Vec<(L, HermitianOp)>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::Empty("measurement"));
        }
        for (i, (l, _)) in effects.iter().enumerate() {
            if effects[..i].iter().any(|(m, _)| m == l) {
                return Err(Error::DuplicateLabel(format!("{l:?}")));
            }
        }
        Ok(Measurement { effects })
    }

    pub fn validated(effects: Vec<(L, HermitianOp)>, tol: f64) -> Result<Self> {
        let m = Self::new(effects)?;
        let report = validate_measurement(&m, tol);
        if !report.is_valid() {
            return Err(Error::InvalidMeasurement(report.to_string()));
        }
        Ok(m)
    }

    pub fn effects(&self) -> &[(L, HermitianOp)] {
        &self.effects
    }

    pub fn labels(&self) -> Vec<L> {
        self.effects.iter().map(|(l, _)| l.clone()).collect()
    }

    /// Effect for `label`; outcomes not listed carry the zero effect.
    pub fn effect(&self, label: &L) -> HermitianOp {
        self.effects
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, e)| *e)
            .unwrap_or(HermitianOp::ZERO)
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effect_sum(&self) -> HermitianOp {
        self.effects
            .iter()
            .fold(HermitianOp::ZERO, |acc, (_, e)| acc.add(e))
    }

    /// `Σ wᵢ Mᵢ` over measurements sharing a label type. Effects on the same
    /// label are added.
    pub fn convex_combination(parts: &[(f64, &Measurement<L>)]) -> Result<Self> {
        let mut effects: Vec<(L, HermitianOp)> = Vec::new();
        for (w, m) in parts {
            for (l, e) in &m.effects {
                match effects.iter_mut().find(|(k, _)| k == l) {
                    Some((_, acc)) => *acc = acc.add(&e.scale(*w)),
                    None => effects.push((l.clone(), e.scale(*w))),
                }
            }
        }
        Measurement::new(effects)
    }

    pub fn relabel<M: Clone + PartialEq + fmt::Debug>(
        &self,
        mut f: impl FnMut(&L) -> M,
    ) -> Result<Measurement<M>> {
        Measurement::new(self.effects.iter().map(|(l, e)| (f(l), *e)).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EffectViolation {
    pub index: usize,
    pub label: String,
    /// `|v| - scalar` when positive.
    pub positivity_excess: f64,
    /// `|v| - (1 - scalar)` when positive.
    pub upper_bound_excess: f64,
}

/// Outcome of [`validate_measurement`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidityReport {
    pub tol: f64,
    pub violations: Vec<EffectViolation>,
    /// Largest component of `Σ M(z) - 𝟙`.
    pub completeness_deviation: f64,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.completeness_deviation <= self.tol
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid (sum deviation {:.3e})", self.completeness_deviation);
        }
        write!(f, "invalid:")?;
        for v in &self.violations {
            if v.positivity_excess > 0.0 {
                write!(f, " {} not positive (by {:.3e});", v.label, v.positivity_excess)?;
            }
            if v.upper_bound_excess > 0.0 {
                write!(f, " {} exceeds identity (by {:.3e});", v.label, v.upper_bound_excess)?;
            }
        }
        if self.completeness_deviation > self.tol {
            write!(f, " effects sum off identity by {:.3e}", self.completeness_deviation)?;
        }
        Ok(())
    }
}

pub fn validate_measurement<L: Clone + PartialEq + fmt::Debug>(
    m: &Measurement<L>,
    tol: f64,
) -> ValidityReport {
    let violations = m
        .effects
        .iter()
        .enumerate()
        .filter_map(|(index, (label, e))| {
            let r = e.bloch.norm();
            let positivity_excess = (r - e.scalar).max(0.0);
            let upper_bound_excess = (r - (1.0 - e.scalar)).max(0.0);
            (positivity_excess > tol || upper_bound_excess > tol).then(|| EffectViolation {
                index,
                label: format!("{label:?}"),
                positivity_excess,
                upper_bound_excess,
            })
        })
        .collect();
    ValidityReport {
        tol,
        violations,
        completeness_deviation: m.effect_sum().max_abs_diff(&HermitianOp::IDENTITY),
    }
}

/// Labelled family of subnormalized states whose traces sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct StateEnsemble<X> {
    states: Vec<(X, HermitianOp)>,
}

impl<X: Clone + PartialEq + fmt::Debug> StateEnsemble<X> {
    pub fn new(states: Vec<(X, HermitianOp)>, tol: f64) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Empty("state ensemble"));
        }
        for (i, (x, s)) in states.iter().enumerate() {
            if states[..i].iter().any(|(y, _)| y == x) {
                return Err(Error::DuplicateLabel(format!("{x:?}")));
            }
            if !s.is_positive(tol) {
                return Err(Error::InvalidEnsemble(format!("state {x:?} is not positive")));
            }
        }
        let total: f64 = states.iter().map(|(_, s)| s.trace()).sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidEnsemble(format!("traces sum to {total}")));
        }
        Ok(StateEnsemble { states })
    }

    pub fn states(&self) -> &[(X, HermitianOp)] {
        &self.states
    }

    pub fn labels(&self) -> Vec<X> {
        self.states.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn state(&self, label: &X) -> Option<&HermitianOp> {
        self.states.iter().find(|(x, _)| x == label).map(|(_, s)| s)
    }
}

/// Joint probability table `p(x, z)`, row-major over inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable<X, Z> {
    inputs: Vec<X>,
    outcomes: Vec<Z>,
    probs: Vec<f64>,
}

impl<X: Clone + PartialEq + fmt::Debug, Z: Clone + PartialEq + fmt::Debug> JointTable<X, Z> {
    pub fn from_rows(inputs: Vec<X>, outcomes: Vec<Z>, rows: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        if rows.len() != inputs.len() || rows.iter().any(|r| r.len() != outcomes.len()) {
            return Err(Error::Shape(format!(
                "expected {}x{} table",
                inputs.len(),
                outcomes.len()
            )));
        }
        let mut probs: Vec<f64> = rows.into_iter().flatten().collect();
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -tol) {
            return Err(Error::InvalidTable(format!("entry {p} is negative")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidTable(format!("entries sum to {total}")));
        }
        for p in probs.iter_mut() {
            *p = p.max(0.0);
        }
        Ok(JointTable {
            inputs,
            outcomes,
            probs,
        })
    }

    pub fn inputs(&self) -> &[X] {
        &self.inputs
    }

    pub fn outcomes(&self) -> &[Z] {
        &self.outcomes
    }

    pub fn get(&self, x: usize, z: usize) -> f64 {
        self.probs[x * self.outcomes.len() + z]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let n = self.outcomes.len();
        &self.probs[x * n..(x + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.inputs.len()).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn lookup(&self, x: &X, z: &Z) -> Option<f64> {
        let xi = self.inputs.iter().position(|l| l == x)?;
        let zi = self.outcomes.iter().position(|l| l == z)?;
        Some(self.get(xi, zi))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Born-rule table `p(x, z) = tr[ε(x) M(z)]`.
///
/// Both arguments are validated first; entries in `(-tol, 0)` are clamped
/// to zero.
pub fn joint_table<X, Z>(
    ens: &StateEnsemble<X>,
    m: &Measurement<Z>,
    tol: f64,
) -> Result<JointTable<X, Z>>
where
    X: Clone + PartialEq + fmt::Debug,
    Z: Clone + PartialEq + fmt::Debug,
{
    let report = validate_measurement(m, tol);
    if !report.is_valid() {
        return Err(Error::InvalidMeasurement(report.to_string()));
    }
    let rows = ens
        .states
        .iter()
        .map(|(_, s)| m.effects.iter().map(|(_, e)| trace_product(s, e)).collect())
        .collect();
    JointTable::from_rows(ens.labels(), m.labels(), rows, tol)
}
