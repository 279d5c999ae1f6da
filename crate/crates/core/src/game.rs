//! Success functionals for guessing games with posterior information.
//!
//! Everything here works on probability tables and is independent of the
//! underlying Hilbert-space dimension. Inputs, answers and outcomes are
//! ordered label sets; exclusion sets are sorted sequences of answer
//! indices.

use std::collections::BTreeMap;
use std::fmt;

use crate::bloch::JointTable;
use crate::error::{Error, Result};
use crate::Label;

const SUM_TOL: f64 = 1e-9;

/// A set of excluded answers, stored as sorted answer indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExclusionSet(Vec<usize>);

impl ExclusionSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        ExclusionSet(indices)
    }

    pub fn empty() -> Self {
        ExclusionSet(Vec::new())
    }

    pub fn contains(&self, answer: usize) -> bool {
        self.0.binary_search(&answer).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ExclusionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<ExclusionSet> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<ExclusionSet>) {
        if cur.len() == k {
            out.push(ExclusionSet(cur.clone()));
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Inputs, answers, the correctness predicate and the joint table `p(x, z)`.
#[derive(Clone, Debug)]
pub struct GameSpec<X, Y, Z> {
    answers: Vec<Y>,
    correct: Vec<Vec<bool>>,
    joint: JointTable<X, Z>,
}

impl<X: Label, Y: Label, Z: Label> GameSpec<X, Y, Z> {
    pub fn new(answers: Vec<Y>, correct: impl Fn(&X, &Y) -> bool, joint: JointTable<X, Z>) -> Result<Self> {
        if answers.is_empty() {
            return Err(Error::Empty("answer set"));
        }
        let correct: Vec<Vec<bool>> = joint
            .inputs()
            .iter()
            .map(|x| answers.iter().map(|y| correct(x, y)).collect())
            .collect();
        for (x, row) in joint.inputs().iter().zip(&correct) {
            if !row.iter().any(|c| *c) {
                return Err(Error::InvalidGame(format!("input {x:?} has no correct answer")));
            }
        }
        Ok(GameSpec {
            answers,
            correct,
            joint,
        })
    }

    pub fn inputs(&self) -> &[X] {
        self.joint.inputs()
    }

    pub fn answers(&self) -> &[Y] {
        &self.answers
    }

    pub fn outcomes(&self) -> &[Z] {
        self.joint.outcomes()
    }

    pub fn joint(&self) -> &JointTable<X, Z> {
        &self.joint
    }

    pub fn is_correct(&self, x: usize, y: usize) -> bool {
        self.correct[x][y]
    }

    /// Indices of the correct answers `G_x`.
    pub fn correct_set(&self, x: usize) -> Vec<usize> {
        (0..self.answers.len()).filter(|&y| self.correct[x][y]).collect()
    }

    /// Largest `k` for which every input still has a non-excluded correct
    /// answer: `|Y| - max_x |G_x|`.
    pub fn max_exclusions(&self) -> usize {
        let largest = (0..self.inputs().len())
            .map(|x| self.correct_set(x).len())
            .max()
            .unwrap_or(0);
        self.answers.len() - largest
    }
}

/// `α(S | x)`: distribution of the classical side information per input.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialInfoMap<X, Y> {
    inputs: Vec<X>,
    answers: Vec<Y>,
    weights: Vec<BTreeMap<ExclusionSet, f64>>,
}

impl<X: Label, Y: Label> PartialInfoMap<X, Y> {
    /// Checks normalization per input and that no exclusion set with
    /// positive weight contains a correct answer.
    pub fn new<Z: Label>(game: &GameSpec<X, Y, Z>, weights: Vec<BTreeMap<ExclusionSet, f64>>) -> Result<Self> {
        if weights.len() != game.inputs().len() {
            return Err(Error::Shape(format!(
                "{} weight rows for {} inputs",
                weights.len(),
                game.inputs().len()
            )));
        }
        for (x, row) in weights.iter().enumerate() {
            let total: f64 = row.values().sum();
            if (total - 1.0).abs() > SUM_TOL || row.values().any(|w| *w < 0.0) {
                return Err(Error::InvalidGame(format!(
                    "partial information for input {:?} is not a distribution",
                    game.inputs()[x]
                )));
            }
            for (s, w) in row {
                if *w > 0.0 && s.indices().iter().any(|&y| y >= game.answers().len() || game.is_correct(x, y)) {
                    return Err(Error::InvalidGame(format!(
                        "exclusion set {s} for input {:?} removes a correct answer",
                        game.inputs()[x]
                    )));
                }
            }
        }
        Ok(PartialInfoMap {
            inputs: game.inputs().to_vec(),
            answers: game.answers().to_vec(),
            weights,
        })
    }

    /// Side information independent of the input, `α(S | x) = α(S)`.
    /// No correctness check is made: with no excluded correct answers
    /// required this models the no-information scenario.
    pub fn input_independent(inputs: Vec<X>, answers: Vec<Y>, weights: BTreeMap<ExclusionSet, f64>) -> Result<Self> {
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidGame("input-independent weights do not sum to one".into()));
        }
        Ok(PartialInfoMap {
            weights: vec![weights; inputs.len()],
            inputs,
            answers,
        })
    }

    pub fn weight(&self, x: usize, set: &ExclusionSet) -> f64 {
        self.weights[x].get(set).copied().unwrap_or(0.0)
    }

    pub fn row(&self, x: usize) -> &BTreeMap<ExclusionSet, f64> {
        &self.weights[x]
    }

    /// Every exclusion set carrying positive weight for some input.
    pub fn support(&self) -> Vec<ExclusionSet> {
        let mut sets: Vec<ExclusionSet> = self
            .weights
            .iter()
            .flat_map(|row| row.iter().filter(|(_, w)| **w > 0.0).map(|(s, _)| s.clone()))
            .collect();
        sets.sort();
        sets.dedup();
        sets
    }

    pub fn inputs(&self) -> &[X] {
        &self.inputs
    }

    pub fn answers(&self) -> &[Y] {
        &self.answers
    }
}

/// `ν_S(y | z)`: final answer distribution given side information and outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct PostProcessing<Y, Z> {
    answers: Vec<Y>,
    outcomes: Vec<Z>,
    rules: BTreeMap<(ExclusionSet, usize), Vec<f64>>,
}

impl<Y: Label, Z: Label> PostProcessing<Y, Z> {
    pub fn new(answers: Vec<Y>, outcomes: Vec<Z>, rules: BTreeMap<(ExclusionSet, usize), Vec<f64>>) -> Result<Self> {
        for ((set, z), dist) in &rules {
            let outcome = outcomes
                .get(*z)
                .map(|o| format!("{o:?}"))
                .ok_or_else(|| Error::Shape(format!("outcome index {z} out of range")))?;
            let total: f64 = dist.iter().sum();
            if dist.len() != answers.len() || dist.iter().any(|p| *p < 0.0) || (total - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidRule {
                    set: set.indices().to_vec(),
                    outcome,
                });
            }
        }
        Ok(PostProcessing {
            answers,
            outcomes,
            rules,
        })
    }

    /// Deterministic post-processing `ν_S(y | z) = δ_{y, choose(S, z)}` over
    /// the given exclusion sets.
    pub fn deterministic(
        answers: Vec<Y>,
        outcomes: Vec<Z>,
        sets: &[ExclusionSet],
        mut choose: impl FnMut(&ExclusionSet, usize) -> usize,
    ) -> Result<Self> {
        let mut rules = BTreeMap::new();
        for s in sets {
            for z in 0..outcomes.len() {
                let y = choose(s, z);
                if y >= answers.len() {
                    return Err(Error::Shape(format!("answer index {y} out of range")));
                }
                let mut dist = vec![0.0; answers.len()];
                dist[y] = 1.0;
                rules.insert((s.clone(), z), dist);
            }
        }
        Self::new(answers, outcomes, rules)
    }

    /// Relabelling `z ↦ y` used without side information (S = ∅ only).
    pub fn relabeling(answers: Vec<Y>, outcomes: Vec<Z>, mut map: impl FnMut(usize) -> usize) -> Result<Self> {
        Self::deterministic(answers, outcomes, &[ExclusionSet::empty()], |_, z| map(z))
    }

    /// Uniformly random guess regardless of the outcome (S = ∅ only).
    pub fn uniform(answers: Vec<Y>, outcomes: Vec<Z>) -> Result<Self> {
        let n = answers.len();
        let rules = (0..outcomes.len())
            .map(|z| ((ExclusionSet::empty(), z), vec![1.0 / n as f64; n]))
            .collect();
        Self::new(answers, outcomes, rules)
    }

    /// `ν₀(y | z) = Σ_S ν_S(y | z) α(S)` for input-independent weights.
    pub fn averaged(&self, weights: &BTreeMap<ExclusionSet, f64>) -> Result<Self> {
        let mut rules = BTreeMap::new();
        for z in 0..self.outcomes.len() {
            let mut dist = vec![0.0; self.answers.len()];
            for (s, w) in weights.iter().filter(|(_, w)| **w > 0.0) {
                let rule = self.rule(s, z)?;
                for (d, r) in dist.iter_mut().zip(rule) {
                    *d += w * r;
                }
            }
            rules.insert((ExclusionSet::empty(), z), dist);
        }
        Self::new(self.answers.clone(), self.outcomes.clone(), rules)
    }

    pub fn rule(&self, set: &ExclusionSet, z: usize) -> Result<&[f64]> {
        self.rules
            .get(&(set.clone(), z))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingRule {
                set: set.indices().to_vec(),
                outcome: self
                    .outcomes
                    .get(z)
                    .map(|o| format!("{o:?}"))
                    .unwrap_or_else(|| z.to_string()),
            })
    }

    /// The answer a deterministic rule picks, if the rule is deterministic.
    pub fn choice(&self, set: &ExclusionSet, z: usize) -> Option<usize> {
        let rule = self.rules.get(&(set.clone(), z))?;
        rule.iter().position(|p| *p == 1.0)
    }

    pub fn answers(&self) -> &[Y] {
        &self.answers
    }

    pub fn outcomes(&self) -> &[Z] {
        &self.outcomes
    }

    pub fn rules(&self) -> &BTreeMap<(ExclusionSet, usize), Vec<f64>> {
        &self.rules
    }
}

fn check_labels<A: Label>(what: &str, expected: &[A], got: &[A]) -> Result<()> {
    if expected != got {
        return Err(Error::LabelMismatch(format!("{what}: expected {expected:?}, got {got:?}")));
    }
    Ok(())
}

/// Uniform exclusion of `k` wrong answers: `α(S | x) = 1/|T_x|` for every
/// `k`-set `S` disjoint from `G_x`.
///
/// `k = 0` yields `α(∅ | x) = 1`, the game without side information.
pub fn exclusion_info_map<X: Label, Y: Label, Z: Label>(
    game: &GameSpec<X, Y, Z>,
    k: usize,
) -> Result<PartialInfoMap<X, Y>> {
    let max = game.max_exclusions();
    if k > max {
        return Err(Error::ExclusionOutOfRange { k, max });
    }
    let all = k_subsets(game.answers().len(), k);
    let weights = (0..game.inputs().len())
        .map(|x| {
            let allowed: Vec<&ExclusionSet> = all
                .iter()
                .filter(|s| s.indices().iter().all(|&y| !game.is_correct(x, y)))
                .collect();
            let w = 1.0 / allowed.len() as f64;
            allowed.into_iter().map(|s| (s.clone(), w)).collect()
        })
        .collect();
    PartialInfoMap::new(game, weights)
}

/// `Σ_{x,y,z,S} f(x,y) ν_S(y|z) α(S|x) p(x,z)`.
pub fn success_with_cpost<X: Label, Y: Label, Z: Label>(
    game: &GameSpec<X, Y, Z>,
    info: &PartialInfoMap<X, Y>,
    post: &PostProcessing<Y, Z>,
) -> Result<f64> {
    check_labels("partial information inputs", game.inputs(), info.inputs())?;
    check_labels("partial information answers", game.answers(), info.answers())?;
    check_labels("post-processing answers", game.answers(), post.answers())?;
    check_labels("post-processing outcomes", game.outcomes(), post.outcomes())?;
    let joint = game.joint();
    let mut total = 0.0;
    for x in 0..game.inputs().len() {
        let correct = game.correct_set(x);
        for (set, w) in info.row(x).iter().filter(|(_, w)| **w > 0.0) {
            for z in 0..game.outcomes().len() {
                let rule = post.rule(set, z)?;
                let hit: f64 = correct.iter().map(|&y| rule[y]).sum();
                total += hit * w * joint.get(x, z);
            }
        }
    }
    Ok(total)
}

/// `Σ_{x,y,z} f(x,y) ν₀(y|z) p(x,z)`, reading `ν₀` from the rules at `S = ∅`.
pub fn success_no_cpost<X: Label, Y: Label, Z: Label>(
    game: &GameSpec<X, Y, Z>,
    post: &PostProcessing<Y, Z>,
) -> Result<f64> {
    check_labels("post-processing answers", game.answers(), post.answers())?;
    check_labels("post-processing outcomes", game.outcomes(), post.outcomes())?;
    let empty = ExclusionSet::empty();
    let joint = game.joint();
    let mut total = 0.0;
    for z in 0..game.outcomes().len() {
        let rule = post.rule(&empty, z)?;
        for x in 0..game.inputs().len() {
            let hit: f64 = game.correct_set(x).iter().map(|&y| rule[y]).sum();
            total += hit * joint.get(x, z);
        }
    }
    Ok(total)
}

/// Posterior-maximizing post-processing for a fixed table.
///
/// For each exclusion set in the support of `info` and each outcome, all
/// mass goes to `argmax_y Σ_x f(x,y) α(S|x) p(x,z)`; ties resolve to the
/// lowest answer index.
pub fn bayes_optimal_post<X: Label, Y: Label, Z: Label>(
    game: &GameSpec<X, Y, Z>,
    info: &PartialInfoMap<X, Y>,
) -> Result<PostProcessing<Y, Z>> {
    check_labels("partial information inputs", game.inputs(), info.inputs())?;
    check_labels("partial information answers", game.answers(), info.answers())?;
    let joint = game.joint();
    let nx = game.inputs().len();
    PostProcessing::deterministic(
        game.answers().to_vec(),
        game.outcomes().to_vec(),
        &info.support(),
        |set, z| {
            let score = |y: usize| -> f64 {
                (0..nx)
                    .filter(|&x| game.is_correct(x, y))
                    .map(|x| info.weight(x, set) * joint.get(x, z))
                    .sum()
            };
            let mut best = 0;
            let mut best_score = score(0);
            for y in 1..game.answers().len() {
                let s = score(y);
                if s > best_score {
                    best = y;
                    best_score = s;
                }
            }
            best
        },
    )
}
