//! Left-hand sides and lower bounds of the variance uncertainty relations.
//!
//! Each relation is evaluated from the generic matrix quantities (variances
//! and commutator expectations) so it works for any dimension and any set
//! of Hermitian observables. The qubit closed forms in [`crate::qubit`] are
//! an independent route to the same numbers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, C64};
use crate::quantum::{
    commutator_expectation, deviation_state, orthogonal_qubit, variance, Observable, PureState, QuantumState,
};

/// Slack above which a relation is considered satisfied.
pub const HOLDS_TOL: f64 = 1e-9;
/// Largest |<psi|psi_perp>| accepted as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

const SQRT3_OVER_3: f64 = 0.577_350_269_189_625_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationId {
    /// Delta A^2 Delta B^2 >= |<[A,B]>/2|^2
    Robertson1,
    /// Sum of two variances against an orthogonal-state term.
    MacconePati2,
    /// Sum of two variances against the A+B deviation vector.
    MacconePati3,
    /// Triple sum with the composite commutator (T1).
    TripleSum4,
    /// Triple sum with separate commutator moduli (T2).
    TripleComm5,
    /// Three pairwise Robertson relations added (T3).
    TriplePairwise6,
    /// N observables, pairwise sums (M1).
    SumPlus7,
    /// N observables, pairwise differences (M2).
    SumMinus8,
    /// N observables, sums with a standard-deviation correction (M3).
    SumPlusRoot9,
    /// N observables, total sum plus pairwise differences (M4).
    SumMinusRoot10,
}

impl RelationId {
    pub const ALL: [RelationId; 10] = [
        RelationId::Robertson1,
        RelationId::MacconePati2,
        RelationId::MacconePati3,
        RelationId::TripleSum4,
        RelationId::TripleComm5,
        RelationId::TriplePairwise6,
        RelationId::SumPlus7,
        RelationId::SumMinus8,
        RelationId::SumPlusRoot9,
        RelationId::SumMinusRoot10,
    ];

    /// The seven relations whose lhs is the plain sum of variances; these
    /// are the T1..T3 and M1..M4 series.
    pub const SUM_FORM: [RelationId; 7] = [
        RelationId::TripleSum4,
        RelationId::TripleComm5,
        RelationId::TriplePairwise6,
        RelationId::SumPlus7,
        RelationId::SumMinus8,
        RelationId::SumPlusRoot9,
        RelationId::SumMinusRoot10,
    ];

    pub const PAIRWISE: [RelationId; 3] = [
        RelationId::Robertson1,
        RelationId::MacconePati2,
        RelationId::MacconePati3,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RelationId::Robertson1 => "R",
            RelationId::MacconePati2 => "MP2",
            RelationId::MacconePati3 => "MP3",
            RelationId::TripleSum4 => "T1",
            RelationId::TripleComm5 => "T2",
            RelationId::TriplePairwise6 => "T3",
            RelationId::SumPlus7 => "M1",
            RelationId::SumMinus8 => "M2",
            RelationId::SumPlusRoot9 => "M3",
            RelationId::SumMinusRoot10 => "M4",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RelationId::Robertson1 => "Robertson1",
            RelationId::MacconePati2 => "MacconePati2",
            RelationId::MacconePati3 => "MacconePati3",
            RelationId::TripleSum4 => "TripleSum4",
            RelationId::TripleComm5 => "TripleComm5",
            RelationId::TriplePairwise6 => "TriplePairwise6",
            RelationId::SumPlus7 => "SumPlus7",
            RelationId::SumMinus8 => "SumMinus8",
            RelationId::SumPlusRoot9 => "SumPlusRoot9",
            RelationId::SumMinusRoot10 => "SumMinusRoot10",
        }
    }

    pub fn is_sum_form(self) -> bool {
        Self::SUM_FORM.contains(&self)
    }

    pub fn is_triple(self) -> bool {
        matches!(
            self,
            RelationId::TripleSum4 | RelationId::TripleComm5 | RelationId::TriplePairwise6
        )
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RelationId {
    type Err = Error;

    /// Accepts either the short label (`T2`, `M4`, `MP3`) or the full name,
    /// case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        RelationId::ALL
            .into_iter()
            .find(|r| r.label().eq_ignore_ascii_case(t) || r.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownRelation(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub relation: RelationId,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    /// Middle term of the pairwise chain (T3 only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mid: Option<f64>,
}

impl BoundReport {
    pub fn new(relation: RelationId, lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        BoundReport {
            relation,
            lhs,
            rhs,
            slack,
            holds: slack >= -HOLDS_TOL,
            mid: None,
        }
    }

    fn with_mid(mut self, mid: f64) -> Self {
        self.mid = Some(mid);
        self
    }
}

/// Ordered list of N >= 2 same-dimension observables.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSet {
    observables: Vec<Observable>,
}

impl ObservableSet {
    pub fn new(observables: Vec<Observable>) -> Result<Self> {
        if observables.len() < 2 {
            return Err(Error::UnsupportedCount {
                relation: "observable set",
                min: 2,
                actual: observables.len(),
            });
        }
        let dim = observables[0].dim();
        if observables.iter().any(|o| o.dim() != dim) {
            return Err(Error::MixedDimensions);
        }
        Ok(ObservableSet { observables })
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.observables[0].dim()
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn get(&self, i: usize) -> &Observable {
        &self.observables[i]
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.len();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
    }
}

fn require_pure(state: &QuantumState, relation: RelationId) -> Result<&PureState> {
    state.as_pure().ok_or(Error::UnsupportedState(relation.name()))
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

pub fn robertson(a: &Observable, b: &Observable, state: &QuantumState) -> Result<BoundReport> {
    let comm = commutator_expectation(a, b, state)?;
    let lhs = variance(a, state)? * variance(b, state)?;
    let rhs = (0.5 * comm).norm_sqr();
    Ok(BoundReport::new(RelationId::Robertson1, lhs, rhs))
}

/// Sum-of-variances bound using an arbitrary state orthogonal to psi.
///
/// The sign follows i<[A,B]>: `+` when positive, `-` when negative. When it
/// is exactly zero both branches are valid and the larger rhs is reported.
pub fn maccone_pati_2(
    a: &Observable,
    b: &Observable,
    state: &QuantumState,
    psi_perp: &PureState,
) -> Result<BoundReport> {
    let psi = require_pure(state, RelationId::MacconePati2)?;
    check_dim(psi.dim(), psi_perp.dim())?;
    let overlap = psi.overlap(psi_perp)?.norm();
    if overlap > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal(overlap));
    }
    let comm = commutator_expectation(a, b, state)?;
    // i * <[A,B]>, real because the commutator expectation is imaginary
    let i_comm = -comm.im;
    let a_perp = a.matrix().apply(psi_perp.amplitudes());
    let b_perp = b.matrix().apply(psi_perp.amplitudes());
    let branch = |sign: f64| {
        let mixed: Vec<C64> = a_perp
            .iter()
            .zip(&b_perp)
            .map(|(x, y)| x + C64::new(0.0, sign) * y)
            .collect();
        sign * i_comm + inner(psi.amplitudes(), &mixed).norm_sqr()
    };
    let rhs = if i_comm > 0.0 {
        branch(1.0)
    } else if i_comm < 0.0 {
        branch(-1.0)
    } else {
        branch(1.0).max(branch(-1.0))
    };
    let lhs = variance(a, state)? + variance(b, state)?;
    Ok(BoundReport::new(RelationId::MacconePati2, lhs, rhs))
}

/// Sum-of-variances bound built on the deviation vector of A+B.
pub fn maccone_pati_3(a: &Observable, b: &Observable, state: &QuantumState) -> Result<BoundReport> {
    let psi = require_pure(state, RelationId::MacconePati3)?;
    let sum = a.plus(b)?;
    let rhs = match deviation_state(&sum, psi)? {
        (_, Some(perp)) => {
            let amp = inner(perp.amplitudes(), &sum.matrix().apply(psi.amplitudes()));
            0.5 * amp.norm_sqr()
        }
        (_, None) => 0.0,
    };
    let lhs = variance(a, state)? + variance(b, state)?;
    Ok(BoundReport::new(RelationId::MacconePati3, lhs, rhs))
}

/// Variances and commutators of a triple (A, B, C).
struct TripleMoments {
    variances: [f64; 3],
    sum_variance: f64,
    /// <[A,B]>, <[B,C]>, <[C,A]>
    commutators: [C64; 3],
}

impl TripleMoments {
    fn compute(a: &Observable, b: &Observable, c: &Observable, state: &QuantumState) -> Result<Self> {
        let sum = Observable::sum([a, b, c])?;
        Ok(TripleMoments {
            variances: [variance(a, state)?, variance(b, state)?, variance(c, state)?],
            sum_variance: variance(&sum, state)?,
            commutators: [
                commutator_expectation(a, b, state)?,
                commutator_expectation(b, c, state)?,
                commutator_expectation(c, a, state)?,
            ],
        })
    }

    fn lhs(&self) -> f64 {
        self.variances.iter().sum()
    }

    fn commutator_moduli(&self) -> f64 {
        self.commutators.iter().map(|z| z.norm()).sum()
    }

    fn report(&self, relation: RelationId) -> BoundReport {
        let lhs = self.lhs();
        match relation {
            RelationId::TripleSum4 => {
                let composite: C64 = self.commutators.iter().sum();
                let rhs = self.sum_variance / 3.0 + SQRT3_OVER_3 * composite.norm();
                BoundReport::new(relation, lhs, rhs)
            }
            RelationId::TripleComm5 => BoundReport::new(relation, lhs, SQRT3_OVER_3 * self.commutator_moduli()),
            RelationId::TriplePairwise6 => {
                let sd = self.variances.map(f64::sqrt);
                let mid = sd[0] * sd[1] + sd[1] * sd[2] + sd[2] * sd[0];
                BoundReport::new(relation, lhs, 0.5 * self.commutator_moduli()).with_mid(mid)
            }
            _ => unreachable!("not a triple relation"),
        }
    }
}

pub fn triple_sum_4(a: &Observable, b: &Observable, c: &Observable, state: &QuantumState) -> Result<BoundReport> {
    Ok(TripleMoments::compute(a, b, c, state)?.report(RelationId::TripleSum4))
}

pub fn triple_comm_5(a: &Observable, b: &Observable, c: &Observable, state: &QuantumState) -> Result<BoundReport> {
    Ok(TripleMoments::compute(a, b, c, state)?.report(RelationId::TripleComm5))
}

/// The report's `rhs` is the commutator half-sum; `mid` holds the
/// sum of standard-deviation products so callers can check lhs >= mid >= rhs.
pub fn triple_pairwise_6(a: &Observable, b: &Observable, c: &Observable, state: &QuantumState) -> Result<BoundReport> {
    Ok(TripleMoments::compute(a, b, c, state)?.report(RelationId::TriplePairwise6))
}

/// Variances of every member, every pairwise sum and difference, and the
/// total sum. All four N-observable relations are functions of these.
struct SetMoments {
    n: usize,
    variances: Vec<f64>,
    pair_plus: Vec<f64>,
    pair_minus: Vec<f64>,
    total: f64,
}

impl SetMoments {
    fn compute(set: &ObservableSet, state: &QuantumState) -> Result<Self> {
        check_dim(set.dim(), state.dim())?;
        let obs = set.observables();
        let variances = obs.iter().map(|o| variance(o, state)).collect::<Result<Vec<_>>>()?;
        let mut pair_plus = Vec::new();
        let mut pair_minus = Vec::new();
        for (i, j) in set.pairs() {
            pair_plus.push(variance(&obs[i].plus(&obs[j])?, state)?);
            pair_minus.push(variance(&obs[i].minus(&obs[j])?, state)?);
        }
        let total = variance(&Observable::sum(obs)?, state)?;
        Ok(SetMoments {
            n: set.len(),
            variances,
            pair_plus,
            pair_minus,
            total,
        })
    }

    fn lhs(&self) -> f64 {
        self.variances.iter().sum()
    }

    fn report(&self, relation: RelationId) -> Result<BoundReport> {
        let n = self.n as f64;
        let rhs = match relation {
            RelationId::SumPlus7 => self.pair_plus.iter().sum::<f64>() / (2.0 * (n - 1.0)),
            RelationId::SumMinus8 => self.pair_minus.iter().sum::<f64>() / (2.0 * (n - 1.0)),
            RelationId::SumPlusRoot9 => {
                if self.n < 3 {
                    return Err(Error::UnsupportedCount {
                        relation: relation.name(),
                        min: 3,
                        actual: self.n,
                    });
                }
                let var_sum: f64 = self.pair_plus.iter().sum();
                let sd_sum: f64 = self.pair_plus.iter().map(|v| v.sqrt()).sum();
                var_sum / (n - 2.0) - sd_sum * sd_sum / ((n - 1.0) * (n - 1.0) * (n - 2.0))
            }
            RelationId::SumMinusRoot10 => {
                let sd_sum: f64 = self.pair_minus.iter().map(|v| v.sqrt()).sum();
                self.total / n + 2.0 * sd_sum * sd_sum / (n * n * (n - 1.0))
            }
            _ => unreachable!("not an N-observable relation"),
        };
        Ok(BoundReport::new(relation, self.lhs(), rhs))
    }
}

pub fn sum_plus_7(set: &ObservableSet, state: &QuantumState) -> Result<BoundReport> {
    SetMoments::compute(set, state)?.report(RelationId::SumPlus7)
}

pub fn sum_minus_8(set: &ObservableSet, state: &QuantumState) -> Result<BoundReport> {
    SetMoments::compute(set, state)?.report(RelationId::SumMinus8)
}

/// Requires N >= 3.
pub fn sum_plus_root_9(set: &ObservableSet, state: &QuantumState) -> Result<BoundReport> {
    if set.len() < 3 {
        return Err(Error::UnsupportedCount {
            relation: RelationId::SumPlusRoot9.name(),
            min: 3,
            actual: set.len(),
        });
    }
    SetMoments::compute(set, state)?.report(RelationId::SumPlusRoot9)
}

pub fn sum_minus_root_10(set: &ObservableSet, state: &QuantumState) -> Result<BoundReport> {
    SetMoments::compute(set, state)?.report(RelationId::SumMinusRoot10)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// T1..T3 are defined for exactly three observables.
    RequiresThreeObservables,
    /// M3 divides by N - 2.
    RequiresAtLeastThreeObservables,
    RequiresPureState,
    /// No canonical orthogonal state exists for d > 2.
    NoCanonicalOrthogonalState,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkipReason::RequiresThreeObservables => "requires exactly three observables",
            SkipReason::RequiresAtLeastThreeObservables => "requires at least three observables",
            SkipReason::RequiresPureState => "requires a pure state",
            SkipReason::NoCanonicalOrthogonalState => "no canonical orthogonal state for d > 2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Report(BoundReport),
    Skipped(SkipReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationOutcome {
    pub relation: RelationId,
    pub label: &'static str,
    /// Observable indices for the two-observable relations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl RelationOutcome {
    fn new(relation: RelationId, pair: Option<(usize, usize)>, outcome: Outcome) -> Self {
        RelationOutcome {
            relation,
            label: relation.label(),
            pair,
            outcome,
        }
    }

    pub fn report(&self) -> Option<&BoundReport> {
        match &self.outcome {
            Outcome::Report(r) => Some(r),
            Outcome::Skipped(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvaluateOptions {
    /// Also report R, MP2 and MP3 for every pair of observables.
    pub pairwise: bool,
}

/// Evaluate every applicable relation for one state.
///
/// Sum-form relations come first in T1..T3, M1..M4 order; when requested the
/// pairwise relations follow, grouped by pair. Inapplicable relations are
/// returned as explicit skips.
pub fn evaluate_all(
    set: &ObservableSet,
    state: &QuantumState,
    options: EvaluateOptions,
) -> Result<Vec<RelationOutcome>> {
    let moments = SetMoments::compute(set, state)?;
    let mut out = Vec::with_capacity(7 + if options.pairwise { 3 * set.len() * set.len() } else { 0 });

    if set.len() == 3 {
        let triple = TripleMoments::compute(set.get(0), set.get(1), set.get(2), state)?;
        for r in [
            RelationId::TripleSum4,
            RelationId::TripleComm5,
            RelationId::TriplePairwise6,
        ] {
            out.push(RelationOutcome::new(r, None, Outcome::Report(triple.report(r))));
        }
    } else {
        for r in [
            RelationId::TripleSum4,
            RelationId::TripleComm5,
            RelationId::TriplePairwise6,
        ] {
            out.push(RelationOutcome::new(
                r,
                None,
                Outcome::Skipped(SkipReason::RequiresThreeObservables),
            ));
        }
    }

    for r in [
        RelationId::SumPlus7,
        RelationId::SumMinus8,
        RelationId::SumPlusRoot9,
        RelationId::SumMinusRoot10,
    ] {
        let outcome = if r == RelationId::SumPlusRoot9 && set.len() < 3 {
            Outcome::Skipped(SkipReason::RequiresAtLeastThreeObservables)
        } else {
            Outcome::Report(moments.report(r)?)
        };
        out.push(RelationOutcome::new(r, None, outcome));
    }

    if options.pairwise {
        let perp = match state.as_pure() {
            Some(psi) if psi.dim() == 2 => Some(orthogonal_qubit(psi)?),
            _ => None,
        };
        for (i, j) in set.pairs() {
            let (a, b) = (set.get(i), set.get(j));
            let pair = Some((i, j));
            out.push(RelationOutcome::new(
                RelationId::Robertson1,
                pair,
                Outcome::Report(robertson(a, b, state)?),
            ));
            let mp2 = match (state.as_pure(), &perp) {
                (None, _) => Outcome::Skipped(SkipReason::RequiresPureState),
                (Some(_), None) => Outcome::Skipped(SkipReason::NoCanonicalOrthogonalState),
                (Some(_), Some(p)) => Outcome::Report(maccone_pati_2(a, b, state, p)?),
            };
            out.push(RelationOutcome::new(RelationId::MacconePati2, pair, mp2));
            let mp3 = match state.as_pure() {
                None => Outcome::Skipped(SkipReason::RequiresPureState),
                Some(_) => Outcome::Report(maccone_pati_3(a, b, state)?),
            };
            out.push(RelationOutcome::new(RelationId::MacconePati3, pair, mp3));
        }
    }
    Ok(out)
}
