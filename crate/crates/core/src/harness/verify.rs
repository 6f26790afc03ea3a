use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    evaluate_all, maccone_pati_2, maccone_pati_3, robertson, BoundReport, EvaluateOptions, ObservableSet, RelationId,
};
use crate::error::{Error, Result};
use crate::quantum::{orthogonal_qubit, random_observable, random_orthogonal_state, random_pure_state, QuantumState};
use crate::qubit::pauli_set;
use crate::seed::{derive_seed, rng_for};

/// |rhs5 - (2/sqrt 3) rhs6| above this counts as a ratio failure.
pub const RATIO_TOL: f64 = 1e-12;
/// Tolerance on the lhs >= mid >= rhs chain of the pairwise relation.
pub const CHAIN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservableSource {
    /// Fresh random Hermitian observables per trial.
    Random,
    /// The Pauli triple on a random qubit state; dims and counts are ignored.
    Pauli,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub trials: u64,
    pub dims: Vec<usize>,
    pub counts: Vec<usize>,
    pub seed: u64,
    pub source: ObservableSource,
}

impl VerifyConfig {
    pub fn pauli(trials: u64, seed: u64) -> Self {
        VerifyConfig {
            trials,
            dims: vec![2],
            counts: vec![3],
            seed,
            source: ObservableSource::Pauli,
        }
    }

    pub fn random(trials: u64, dims: Vec<usize>, counts: Vec<usize>, seed: u64) -> Self {
        VerifyConfig {
            trials,
            dims,
            counts,
            seed,
            source: ObservableSource::Random,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidSweep("trials must be at least 1".into()));
        }
        if self.source == ObservableSource::Random {
            if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
                return Err(Error::InvalidSweep("dimensions must be at least 2".into()));
            }
            if self.counts.is_empty() || self.counts.iter().any(|&n| n < 2) {
                return Err(Error::InvalidSweep("observable counts must be at least 2".into()));
            }
        }
        Ok(())
    }
}

/// Enough to regenerate one trial: its seed determines state and observables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialRef {
    pub trial: u64,
    pub trial_seed: u64,
    pub dim: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationStats {
    pub relation: RelationId,
    pub label: &'static str,
    pub evaluated: u64,
    pub violations: u64,
    /// Smallest slack seen: the tightest instance found.
    pub min_slack: Option<TrialRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub trials: u64,
    pub seed: u64,
    pub relations: Vec<RelationStats>,
    pub violations: Vec<(RelationId, TrialRef)>,
    /// Trials where rhs of T3 exceeded 1e-12 and the T2/T3 ratio was checked.
    pub ratio_checks: u64,
    pub max_ratio_deviation: f64,
    pub chain_failures: u64,
    /// Instances with M3 < M2: the pairwise-sum root bound weaker than the difference bound.
    pub m3_below_m2: u64,
    /// Instances where M4 < max(M1, M2, M3) - 1e-9, split by qubit / higher dimension.
    pub m4_not_dominant_qubit: u64,
    pub m4_not_dominant_higher_dim: u64,
}

impl VerificationSummary {
    pub fn violation_count(&self) -> u64 {
        self.relations.iter().map(|r| r.violations).sum()
    }

    pub fn stats(&self, relation: RelationId) -> Option<&RelationStats> {
        self.relations.iter().find(|s| s.relation == relation)
    }
}

#[derive(Debug, Clone, Default)]
struct Acc {
    evaluated: [u64; 10],
    violations: [u64; 10],
    min_slack: [Option<TrialRef>; 10],
    violation_list: Vec<(RelationId, TrialRef)>,
    ratio_checks: u64,
    max_ratio_deviation: f64,
    chain_failures: u64,
    m3_below_m2: u64,
    m4_not_dominant_qubit: u64,
    m4_not_dominant_higher_dim: u64,
}

fn earlier_or_tighter(a: &TrialRef, b: &TrialRef) -> bool {
    (a.slack, a.trial, a.pair) < (b.slack, b.trial, b.pair)
}

impl Acc {
    fn record(&mut self, report: &BoundReport, at: TrialRef) {
        let k = report.relation as usize;
        self.evaluated[k] += 1;
        let at = TrialRef {
            slack: report.slack,
            ..at
        };
        if !report.holds {
            self.violations[k] += 1;
            self.violation_list.push((report.relation, at));
        }
        match &self.min_slack[k] {
            Some(cur) if !earlier_or_tighter(&at, cur) => {}
            _ => self.min_slack[k] = Some(at),
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        for k in 0..10 {
            self.evaluated[k] += other.evaluated[k];
            self.violations[k] += other.violations[k];
            if let Some(o) = other.min_slack[k] {
                match &self.min_slack[k] {
                    Some(cur) if !earlier_or_tighter(&o, cur) => {}
                    _ => self.min_slack[k] = Some(o),
                }
            }
        }
        self.violation_list.extend(other.violation_list);
        self.ratio_checks += other.ratio_checks;
        self.max_ratio_deviation = self.max_ratio_deviation.max(other.max_ratio_deviation);
        self.chain_failures += other.chain_failures;
        self.m3_below_m2 += other.m3_below_m2;
        self.m4_not_dominant_qubit += other.m4_not_dominant_qubit;
        self.m4_not_dominant_higher_dim += other.m4_not_dominant_higher_dim;
        self
    }
}

fn run_trial(config: &VerifyConfig, trial: u64) -> Result<Acc> {
    let trial_seed = derive_seed(config.seed, &[trial]);
    let mut rng = rng_for(trial_seed, &[]);
    let (set, dim) = match config.source {
        ObservableSource::Pauli => (pauli_set(), 2),
        ObservableSource::Random => {
            let dim = config.dims[rng.random_range(0..config.dims.len())];
            let n = config.counts[rng.random_range(0..config.counts.len())];
            let obs = (0..n)
                .map(|i| random_observable(dim, derive_seed(trial_seed, &[1, i as u64])))
                .collect::<Result<Vec<_>>>()?;
            (ObservableSet::new(obs)?, dim)
        }
    };
    let psi = random_pure_state(dim, derive_seed(trial_seed, &[0]))?;
    let psi_perp = if dim == 2 {
        orthogonal_qubit(&psi)?
    } else {
        random_orthogonal_state(&psi, derive_seed(trial_seed, &[2]))?
    };
    let state = QuantumState::Pure(psi);
    let at = TrialRef {
        trial,
        trial_seed,
        dim,
        n: set.len(),
        pair: None,
        slack: 0.0,
    };

    let mut acc = Acc::default();
    let outcomes = evaluate_all(&set, &state, EvaluateOptions::default())?;
    let mut rhs = [None::<BoundReport>; 10];
    for o in &outcomes {
        if let Some(r) = o.report() {
            acc.record(r, at);
            rhs[r.relation as usize] = Some(*r);
        }
    }

    if let (Some(t2), Some(t3)) = (
        rhs[RelationId::TripleComm5 as usize],
        rhs[RelationId::TriplePairwise6 as usize],
    ) {
        if t3.rhs > 1e-12 {
            acc.ratio_checks += 1;
            let dev = (t2.rhs - 2.0 / 3f64.sqrt() * t3.rhs).abs();
            acc.max_ratio_deviation = acc.max_ratio_deviation.max(dev);
        }
        let mid = t3.mid.unwrap_or(f64::NAN);
        if !(t3.lhs >= mid - CHAIN_TOL && mid >= t3.rhs - CHAIN_TOL) {
            acc.chain_failures += 1;
        }
    }
    let get = |r: RelationId| rhs[r as usize].map(|b| b.rhs);
    if let (Some(m2), Some(m3)) = (get(RelationId::SumMinus8), get(RelationId::SumPlusRoot9)) {
        if m3 < m2 {
            acc.m3_below_m2 += 1;
        }
    }
    if let (Some(m1), Some(m2), Some(m4)) = (
        get(RelationId::SumPlus7),
        get(RelationId::SumMinus8),
        get(RelationId::SumMinusRoot10),
    ) {
        let best = get(RelationId::SumPlusRoot9).map_or(m1.max(m2), |m3| m1.max(m2).max(m3));
        if m4 < best - 1e-9 {
            if dim == 2 {
                acc.m4_not_dominant_qubit += 1;
            } else {
                acc.m4_not_dominant_higher_dim += 1;
            }
        }
    }

    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            let (a, b) = (set.get(i), set.get(j));
            let at = TrialRef {
                pair: Some((i, j)),
                ..at
            };
            acc.record(&robertson(a, b, &state)?, at);
            acc.record(&maccone_pati_2(a, b, &state, &psi_perp)?, at);
            acc.record(&maccone_pati_3(a, b, &state)?, at);
        }
    }
    Ok(acc)
}

/// Randomized validity campaign over every relation.
///
/// Trial t draws its dimension, observable count, state and observables from
/// a seed derived from (seed, t), so any reported instance can be rebuilt
/// from its `trial_seed`. Results are independent of thread scheduling.
pub fn run_verify(config: &VerifyConfig) -> Result<VerificationSummary> {
    config.validate()?;
    let acc = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .try_reduce(Acc::default, |a, b| Ok(a.merge(b)))?;

    let mut violations = acc.violation_list;
    violations.sort_by_key(|(r, t)| (t.trial, *r, t.pair));
    let relations = RelationId::ALL
        .into_iter()
        .map(|r| {
            let k = r as usize;
            RelationStats {
                relation: r,
                label: r.label(),
                evaluated: acc.evaluated[k],
                violations: acc.violations[k],
                min_slack: acc.min_slack[k],
            }
        })
        .collect();
    Ok(VerificationSummary {
        trials: config.trials,
        seed: config.seed,
        relations,
        violations,
        ratio_checks: acc.ratio_checks,
        max_ratio_deviation: acc.max_ratio_deviation,
        chain_failures: acc.chain_failures,
        m3_below_m2: acc.m3_below_m2,
        m4_not_dominant_qubit: acc.m4_not_dominant_qubit,
        m4_not_dominant_higher_dim: acc.m4_not_dominant_higher_dim,
    })
}
