//! Optimal anticipative measurements for the four-state task via the
//! auxiliary ensemble over outcome functions.
//!
//! A guessing game where `k` wrong answers are revealed after the
//! measurement is equivalent to ordinary minimum-error discrimination of an
//! auxiliary ensemble `ē` indexed by functions `φ: T → X`, with `T` the
//! family of `k`-subsets of answers. A measurement on `X^T` is optimal iff
//! `ē(φ)M̄(φ) = Λ M̄(φ)` for every `φ`, where `Λ` is the largest eigenvalue
//! over all members. The optimum of the original game is `2CΛ`.

use std::fmt;

use rayon::prelude::*;

use crate::bloch::{joint_table, trace_product, HermitianOp, Measurement, Vec3, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::game::{exclusion_info_map, k_subsets, success_with_cpost, ExclusionSet, GameSpec, PostProcessing};
use crate::task::{make_ensemble, QubitLabel, TaskParams, ANTICIPATIVE_OUTCOMES, INPUTS};

/// Tolerance used when collecting maximizers of `γ`.
const ARGMAX_TOL: f64 = 1e-9;

/// The family `T` of `k`-subsets of `X`, lexicographic over input indices.
pub fn exclusion_family(k: usize) -> Result<Vec<ExclusionSet>> {
    match k {
        1 | 2 => Ok(k_subsets(INPUTS.len(), k)),
        _ => Err(Error::UnsupportedK(k)),
    }
}

/// `φ: T → X`, stored as input indices in the order of [`exclusion_family`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomeFunction(Vec<u8>);

impl OutcomeFunction {
    pub fn new(values: Vec<QubitLabel>) -> Result<Self> {
        values
            .iter()
            .map(|v| {
                v.input_index()
                    .map(|i| i as u8)
                    .ok_or_else(|| Error::LabelMismatch(format!("{v} is not an input")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(OutcomeFunction)
    }

    /// The `index`-th function in enumeration order; the first set of `T`
    /// is the most significant base-4 digit.
    pub fn from_index(mut index: usize, len: usize) -> Self {
        let mut digits = vec![0u8; len];
        for d in digits.iter_mut().rev() {
            *d = (index % INPUTS.len()) as u8;
            index /= INPUTS.len();
        }
        OutcomeFunction(digits)
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, d| acc * INPUTS.len() + *d as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `φ(S_i)` for the `i`-th set of `T`.
    pub fn value(&self, i: usize) -> QubitLabel {
        INPUTS[self.0[i] as usize]
    }

    pub fn values(&self) -> Vec<QubitLabel> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

impl fmt::Debug for OutcomeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ[")?;
        for i in 0..self.len() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.value(i))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for OutcomeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Every function `T → X`: 256 for `k = 1`, 4096 for `k = 2`.
pub fn enumerate_functions(k: usize) -> Result<Vec<OutcomeFunction>> {
    let len = exclusion_family(k)?.len();
    let total = INPUTS.len().pow(len as u32);
    Ok((0..total).map(|i| OutcomeFunction::from_index(i, len)).collect())
}

/// `α_j = |φ⁻¹(ja) ∩ T_{ja}|`, `β_j = |φ⁻¹(jb) ∩ T_{jb}|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CountVector {
    pub alpha_plus: u32,
    pub alpha_minus: u32,
    pub beta_plus: u32,
    pub beta_minus: u32,
}

impl CountVector {
    pub const fn new(alpha_plus: u32, alpha_minus: u32, beta_plus: u32, beta_minus: u32) -> Self {
        CountVector {
            alpha_plus,
            alpha_minus,
            beta_plus,
            beta_minus,
        }
    }

    pub fn total(&self) -> u32 {
        self.alpha_plus + self.alpha_minus + self.beta_plus + self.beta_minus
    }

    /// Integer constraints every `counts(φ)` satisfies.
    pub fn is_feasible(&self, k: usize) -> bool {
        let each = [self.alpha_plus, self.alpha_minus, self.beta_plus, self.beta_minus]
            .iter()
            .all(|c| *c <= 3);
        match k {
            1 => each && self.total() <= 4,
            2 => {
                each && self.total() <= 6
                    && self.alpha_plus + self.beta_plus <= 5
                    && self.alpha_minus + self.beta_minus <= 5
            }
            _ => false,
        }
    }

    /// `(α₊ − α₋)a + (β₊ − β₋)b`.
    pub fn bloch(&self, p: &TaskParams) -> Vec3 {
        let da = self.alpha_plus as f64 - self.alpha_minus as f64;
        let db = self.beta_plus as f64 - self.beta_minus as f64;
        p.a().scale(da).add(&p.b().scale(db))
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha_plus == self.alpha_minus && self.beta_plus == self.beta_minus
    }
}

pub fn counts(phi: &OutcomeFunction, k: usize) -> Result<CountVector> {
    let family = exclusion_family(k)?;
    if phi.len() != family.len() {
        return Err(Error::Shape(format!(
            "outcome function has {} entries, T has {}",
            phi.len(),
            family.len()
        )));
    }
    let mut c = CountVector::default();
    for (i, set) in family.iter().enumerate() {
        let x = phi.value(i);
        if set.contains(x.input_index().expect("input label")) {
            continue;
        }
        match x {
            QubitLabel::PLUS_A => c.alpha_plus += 1,
            QubitLabel::MINUS_A => c.alpha_minus += 1,
            QubitLabel::PLUS_B => c.beta_plus += 1,
            _ => c.beta_minus += 1,
        }
    }
    Ok(c)
}

/// `γ = Σ counts + √[(α₊−α₋)² + (β₊−β₋)² + 2(α₊−α₋)(β₊−β₋)·ip]`.
pub fn gamma(c: &CountVector, ip: f64) -> f64 {
    let da = c.alpha_plus as f64 - c.alpha_minus as f64;
    let db = c.beta_plus as f64 - c.beta_minus as f64;
    let radicand = da * da + db * db + 2.0 * da * db * ip;
    c.total() as f64 + radicand.max(0.0).sqrt()
}

/// The auxiliary ensemble `ē` for one `(θ, k)`.
#[derive(Clone, Debug)]
pub struct AuxiliaryEnsemble {
    params: TaskParams,
    k: usize,
    family: Vec<ExclusionSet>,
    members: Vec<HermitianOp>,
    counts: Vec<CountVector>,
    normalization: f64,
    lambda: f64,
    inner_product: f64,
    delta: f64,
}

impl AuxiliaryEnsemble {
    pub fn params(&self) -> &TaskParams {
        &self.params
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn family(&self) -> &[ExclusionSet] {
        &self.family
    }

    /// `C`, fixed by `Σ_φ tr ē(φ) = 1`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `Λ(ē)`, the largest eigenvalue over all members.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `a·b = cos θ`.
    pub fn inner_product(&self) -> f64 {
        self.inner_product
    }

    /// `Δ = Σ_{x,y} f(x,y) tr ε(x)`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, phi: &OutcomeFunction) -> HermitianOp {
        self.members[phi.index()]
    }

    pub fn counts_of(&self, phi: &OutcomeFunction) -> CountVector {
        self.counts[phi.index()]
    }

    pub fn functions(&self) -> impl Iterator<Item = OutcomeFunction> + '_ {
        (0..self.members.len()).map(|i| OutcomeFunction::from_index(i, self.family.len()))
    }

    pub fn total_trace(&self) -> f64 {
        self.members.iter().map(HermitianOp::trace).sum()
    }

    /// `λ(φ) = γ(counts(φ), a·b)/(24C)`.
    pub fn lambda_of(&self, phi: &OutcomeFunction) -> f64 {
        gamma(&self.counts_of(phi), self.inner_product) / (24.0 * self.normalization)
    }

    /// Projector onto the top eigenspace of `ē(φ)`; `None` when `α₊ = α₋`
    /// and `β₊ = β₋`, where the member is a multiple of the identity.
    pub fn eigenprojector(&self, phi: &OutcomeFunction) -> Option<HermitianOp> {
        let c = self.counts_of(phi);
        if c.is_degenerate() {
            return None;
        }
        c.bloch(&self.params)
            .normalized()
            .map(|u| HermitianOp::weighted(0.5, u))
    }

    /// Copy with every member multiplied by `factor` while `C` and `Λ` keep
    /// their values. Used for fault injection in the verification suite.
    #[doc(hidden)]
    pub fn with_scaled_members(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for m in out.members.iter_mut() {
            *m = m.scale(factor);
        }
        out
    }
}

/// Builds `ē(φ) = (1/(24C)) Σ_x |φ⁻¹(x) ∩ T_x| (𝟙 + x·σ)` for every `φ`.
pub fn build_auxiliary(theta: f64, k: usize) -> Result<AuxiliaryEnsemble> {
    let params = TaskParams::new(theta)?;
    let family = exclusion_family(k)?;
    let len = family.len();
    let total = INPUTS.len().pow(len as u32);
    let directions: Vec<Vec3> = INPUTS.iter().map(|x| x.bloch(&params)).collect();

    let (unnormalized, counts): (Vec<HermitianOp>, Vec<CountVector>) = (0..total)
        .into_par_iter()
        .map(|i| {
            let phi = OutcomeFunction::from_index(i, len);
            let mut op = HermitianOp::ZERO;
            for (s, set) in family.iter().enumerate() {
                let x = phi.0[s] as usize;
                if !set.contains(x) {
                    op = op.add(&HermitianOp::weighted(1.0, directions[x]));
                }
            }
            (op, counts(&phi, k).expect("family length matches"))
        })
        .unzip();

    let normalization = unnormalized.iter().map(HermitianOp::trace).sum::<f64>() / 24.0;
    let members: Vec<HermitianOp> = unnormalized
        .iter()
        .map(|op| op.scale(1.0 / (24.0 * normalization)))
        .collect();
    let lambda = members
        .par_iter()
        .map(HermitianOp::largest_eigenvalue)
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let delta = make_ensemble(&params).states().iter().map(|(_, s)| s.trace()).sum();

    Ok(AuxiliaryEnsemble {
        inner_product: params.a().dot(&params.b()),
        params,
        k,
        family,
        members,
        counts,
        normalization,
        lambda,
        delta,
    })
}

/// `Λ(ē) = max_φ λ(φ)` through `γ`, together with every maximizing `φ`.
pub fn lambda_argmax(aux: &AuxiliaryEnsemble) -> (f64, Vec<OutcomeFunction>) {
    let gammas: Vec<f64> = aux
        .counts
        .par_iter()
        .map(|c| gamma(c, aux.inner_product))
        .collect();
    let best = gammas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let maximizers = gammas
        .iter()
        .enumerate()
        .filter(|(_, g)| best - **g <= ARGMAX_TOL)
        .map(|(i, _)| OutcomeFunction::from_index(i, aux.family.len()))
        .collect();
    (best / (24.0 * aux.normalization), maximizers)
}

/// Which pair of input directions a theorem measurement is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    /// `(a, b)`: effect directions `±(3a + b)/|3a + b|`.
    AB,
    /// `(b, a)`: effect directions `±(a + 3b)/|a + 3b|`.
    BA,
    /// `(−a, b)`, optimal only when `a·b = 0`.
    NegAB,
    /// `(b, −a)`, optimal only when `a·b = 0`.
    BNegA,
}

impl Order {
    pub const ALL: [Order; 4] = [Order::AB, Order::BA, Order::NegAB, Order::BNegA];

    pub fn pair(&self) -> (QubitLabel, QubitLabel) {
        use QubitLabel as L;
        match self {
            Order::AB => (L::PLUS_A, L::PLUS_B),
            Order::BA => (L::PLUS_B, L::PLUS_A),
            Order::NegAB => (L::MINUS_A, L::PLUS_B),
            Order::BNegA => (L::PLUS_B, L::MINUS_A),
        }
    }
}

fn signed(l: QubitLabel, positive: bool) -> QubitLabel {
    if positive {
        l
    } else {
        l.neg()
    }
}

/// `φ^{u,v}_j`: guess `ju`, falling back to `jv` and then (for `k = 2`)
/// to `−jv` as those are excluded.
pub fn theorem_function(order: Order, positive: bool, k: usize) -> Result<OutcomeFunction> {
    let (u, v) = order.pair();
    let (ju, jv) = (signed(u, positive), signed(v, positive));
    let excluded = |set: &ExclusionSet, l: QubitLabel| set.contains(l.input_index().expect("input label"));
    let values = exclusion_family(k)?
        .iter()
        .map(|set| {
            if !excluded(set, ju) {
                ju
            } else if k == 1 || !excluded(set, jv) {
                jv
            } else {
                jv.neg()
            }
        })
        .collect();
    OutcomeFunction::new(values)
}

/// A two-outcome measurement on `X^T` supported on `{φ^{u,v}_+, φ^{u,v}_-}`.
#[derive(Clone, Debug)]
pub struct TheoremMeasurement {
    pub order: Order,
    pub k: usize,
    pub plus: OutcomeFunction,
    pub minus: OutcomeFunction,
    pub measurement: Measurement<OutcomeFunction>,
}

impl TheoremMeasurement {
    /// Unit Bloch direction of the `+` effect.
    pub fn direction(&self) -> Vec3 {
        self.measurement.effect(&self.plus).bloch.scale(2.0)
    }
}

/// `M̄^{u,v}(φ^{u,v}_j) = (𝟙 + j (3u+v)/|3u+v| · σ)/2`, zero elsewhere.
pub fn theorem_measurement(p: &TaskParams, k: usize, order: Order) -> Result<TheoremMeasurement> {
    let plus = theorem_function(order, true, k)?;
    let minus = theorem_function(order, false, k)?;
    let (u, v) = order.pair();
    let dir = u
        .bloch(p)
        .scale(3.0)
        .add(&v.bloch(p))
        .normalized()
        .expect("3u + v is never zero");
    let measurement = Measurement::new(vec![
        (plus.clone(), HermitianOp::weighted(0.5, dir)),
        (minus.clone(), HermitianOp::weighted(0.5, dir.scale(-1.0))),
    ])?;
    Ok(TheoremMeasurement {
        order,
        k,
        plus,
        minus,
        measurement,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    /// Largest component of `ē(φ)M̄(φ) − ΛM̄(φ)` over all `φ`.
    pub max_residual: f64,
    /// Largest component of `Σ M̄(φ) − 𝟙`.
    pub completeness_deviation: f64,
    /// Whether every effect is positive and bounded by the identity.
    pub effects_valid: bool,
}

impl CertificateReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.effects_valid && self.max_residual <= tol && self.completeness_deviation <= tol
    }
}

/// Evaluates the optimality condition for `m` against `aux`. Outcomes
/// absent from `m` carry the zero effect and satisfy it trivially.
pub fn certificate(aux: &AuxiliaryEnsemble, m: &Measurement<OutcomeFunction>) -> CertificateReport {
    let len = aux.family.len();
    let max_residual = m
        .effects()
        .iter()
        .map(|(phi, e)| {
            if phi.len() != len {
                return f64::INFINITY;
            }
            aux.member(phi).product(e).max_abs_diff_from(e, aux.lambda)
        })
        .fold(0.0_f64, f64::max);
    let report = crate::bloch::validate_measurement(m, DEFAULT_TOL);
    CertificateReport {
        max_residual,
        completeness_deviation: report.completeness_deviation,
        effects_valid: report.violations.is_empty(),
    }
}

/// `true` iff `ē(φ)M̄(φ) = ΛM̄(φ)` for all `φ` within `tol` and `M̄` is a
/// measurement.
pub fn certify_optimal(aux: &AuxiliaryEnsemble, m: &Measurement<OutcomeFunction>, tol: f64) -> bool {
    certificate(aux, m).passes(tol)
}

/// `Σ_φ tr[ē(φ) M̄(φ)]`, bounded above by `2Λ`.
pub fn auxiliary_success(aux: &AuxiliaryEnsemble, m: &Measurement<OutcomeFunction>) -> f64 {
    m.effects()
        .iter()
        .map(|(phi, e)| trace_product(&aux.member(phi), e))
        .sum()
}

/// `ε_CPOST(M̄, π)` evaluated in the original game, with `π_S(x|φ) = δ_{x,φ(S)}`.
pub fn success_over_functions(p: &TaskParams, k: usize, m: &Measurement<OutcomeFunction>) -> Result<f64> {
    let family = exclusion_family(k)?;
    let table = joint_table(&make_ensemble(p), m, DEFAULT_TOL)?;
    let outcomes = table.outcomes().to_vec();
    let game = GameSpec::new(INPUTS.to_vec(), |x, y| x == y, table)?;
    let info = exclusion_info_map(&game, k)?;
    let post = PostProcessing::deterministic(INPUTS.to_vec(), outcomes.clone(), &family, |set, z| {
        let s = family.iter().position(|t| t == set).expect("set drawn from T");
        outcomes[z].0[s] as usize
    })?;
    success_with_cpost(&game, &info, &post)
}

/// `2CΛ`, the optimal success probability with `k` excluded answers.
pub fn anticipative_success(aux: &AuxiliaryEnsemble) -> f64 {
    2.0 * aux.normalization * aux.lambda
}

/// Collapses `½M̄^{a,b} + ½M̄^{b,a}` onto four outcomes via
/// `φ^{a,b}_j → jn`, `φ^{b,a}_j → jm`, and carries `π` along as the
/// post-processing `ν_S(x | z) = δ_{x, φ_z(S)}`.
pub fn reduce_to_povm(
    aux: &AuxiliaryEnsemble,
    ab: &TheoremMeasurement,
    ba: &TheoremMeasurement,
    tol: f64,
) -> Result<(Measurement<QubitLabel>, PostProcessing<QubitLabel, QubitLabel>)> {
    if ab.order != Order::AB || ba.order != Order::BA {
        return Err(Error::InvalidMeasurement(
            "reduction expects the (a, b) and (b, a) measurements".into(),
        ));
    }
    if ab.k != aux.k || ba.k != aux.k {
        return Err(Error::InvalidMeasurement("measurement built for a different k".into()));
    }
    for t in [ab, ba] {
        let report = certificate(aux, &t.measurement);
        if !report.passes(tol) {
            return Err(Error::NotCertified(format!(
                "{:?}: residual {:.3e}",
                t.order, report.max_residual
            )));
        }
    }
    let mixed = Measurement::convex_combination(&[(0.5, &ab.measurement), (0.5, &ba.measurement)])?;
    let relabel = |phi: &OutcomeFunction| -> QubitLabel {
        if *phi == ab.plus {
            QubitLabel::PLUS_N
        } else if *phi == ab.minus {
            QubitLabel::MINUS_N
        } else if *phi == ba.plus {
            QubitLabel::PLUS_M
        } else {
            QubitLabel::MINUS_M
        }
    };
    let reduced = mixed.relabel(relabel)?;
    let effects = ANTICIPATIVE_OUTCOMES
        .iter()
        .map(|z| (*z, reduced.effect(z)))
        .collect();
    let povm = Measurement::validated(effects, tol)?;

    let function_for = |z: QubitLabel| match z {
        QubitLabel::PLUS_N => &ab.plus,
        QubitLabel::MINUS_N => &ab.minus,
        QubitLabel::PLUS_M => &ba.plus,
        _ => &ba.minus,
    };
    let family = aux.family.clone();
    let post = PostProcessing::deterministic(INPUTS.to_vec(), ANTICIPATIVE_OUTCOMES.to_vec(), &family, |set, z| {
        let s = family.iter().position(|t| t == set).expect("set drawn from T");
        function_for(ANTICIPATIVE_OUTCOMES[z]).0[s] as usize
    })?;
    Ok((povm, post))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn unsupported_k() {
        assert!(matches!(enumerate_functions(3), Err(Error::UnsupportedK(3))));
        assert!(matches!(enumerate_functions(0), Err(Error::UnsupportedK(0))));
        assert!(build_auxiliary(1.0, 3).is_err());
        assert!(build_auxiliary(0.0, 1).is_err());
    }

    #[test]
    fn function_index_round_trip() {
        for i in [0, 1, 17, 255] {
            assert_eq!(OutcomeFunction::from_index(i, 4).index(), i);
        }
        let f = OutcomeFunction::from_index(1, 4);
        assert_eq!(f.value(3), QubitLabel::MINUS_A);
        assert_eq!(f.value(0), QubitLabel::PLUS_A);
    }

    #[test]
    fn constant_function_counts() {
        let phi = OutcomeFunction::new(vec![QubitLabel::PLUS_A; 4]).unwrap();
        assert_eq!(counts(&phi, 1).unwrap(), CountVector::new(3, 0, 0, 0));
        let phi2 = OutcomeFunction::new(vec![QubitLabel::PLUS_A; 6]).unwrap();
        assert_eq!(counts(&phi2, 2).unwrap(), CountVector::new(3, 0, 0, 0));
        assert!(counts(&phi, 2).is_err());
    }

    #[test]
    fn gamma_zero() {
        assert_eq!(gamma(&CountVector::default(), 0.3), 0.0);
    }

    #[test]
    fn theorem_functions_follow_case_split() {
        use QubitLabel as L;
        // T for k=1 is [{+a}, {-a}, {+b}, {-b}]
        let f = theorem_function(Order::AB, true, 1).unwrap();
        assert_eq!(f.values(), vec![L::PLUS_B, L::PLUS_A, L::PLUS_A, L::PLUS_A]);
        // T for k=2 is [{+a,-a}, {+a,+b}, {+a,-b}, {-a,+b}, {-a,-b}, {+b,-b}]
        let g = theorem_function(Order::AB, true, 2).unwrap();
        assert_eq!(
            g.values(),
            vec![L::PLUS_B, L::MINUS_B, L::PLUS_B, L::PLUS_A, L::PLUS_A, L::PLUS_A]
        );
    }

    #[test]
    fn degenerate_members_have_no_projector() {
        let aux = build_auxiliary(FRAC_PI_2, 1).unwrap();
        let phi = OutcomeFunction::new(vec![QubitLabel::PLUS_A, QubitLabel::MINUS_A, QubitLabel::PLUS_B, QubitLabel::PLUS_B]).unwrap();
        assert!(aux.counts_of(&phi).is_degenerate() || aux.eigenprojector(&phi).is_some());
        let flat = (0..256)
            .map(|i| OutcomeFunction::from_index(i, 4))
            .find(|f| aux.counts_of(f).is_degenerate())
            .unwrap();
        assert!(aux.eigenprojector(&flat).is_none());
    }

    #[test]
    fn reduction_rejects_wrong_pair() {
        let p = TaskParams::new(1.0).unwrap();
        let aux = build_auxiliary(1.0, 1).unwrap();
        let ab = theorem_measurement(&p, 1, Order::AB).unwrap();
        assert!(reduce_to_povm(&aux, &ab, &ab, 1e-12).is_err());
        let ba = theorem_measurement(&p, 2, Order::BA).unwrap();
        assert!(reduce_to_povm(&aux, &ab, &ba, 1e-12).is_err());
    }

    #[test]
    fn reduction_rejects_uncertified_inputs() {
        let p = TaskParams::new(1.0).unwrap();
        let aux = build_auxiliary(1.0, 1).unwrap().with_scaled_members(1.5);
        let ab = theorem_measurement(&p, 1, Order::AB).unwrap();
        let ba = theorem_measurement(&p, 1, Order::BA).unwrap();
        assert!(matches!(reduce_to_povm(&aux, &ab, &ba, 1e-12), Err(Error::NotCertified(_))));
    }
}
