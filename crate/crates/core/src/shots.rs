//! Finite-count projective measurement of sigma_x, sigma_y, sigma_z and
//! parametric-bootstrap error bars on every bound.
//!
//! Only count fluctuation is modeled: each basis yields a binomial number of
//! +1 outcomes with probability (1 + <sigma_b>) / 2.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::RelationId;
use crate::error::{Error, Result};
use crate::quantum::{expectation, QuantumState};
use crate::qubit::{closed_form_lhs, closed_form_rhs, pauli, Axis, QubitMoments};
use crate::seed::rng_for;

/// One second of counts at the reported coincidence rate.
pub const DEFAULT_SHOTS: u64 = 2400;
pub const DEFAULT_RESAMPLES: usize = 1000;
pub const MIN_RESAMPLES: usize = 100;

const COUNT_STREAM: u64 = 0xC0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotPlan {
    shots_per_basis: u64,
    seed: u64,
    bases: Vec<Axis>,
}

impl ShotPlan {
    pub fn new(shots_per_basis: u64, seed: u64, bases: Vec<Axis>) -> Result<Self> {
        if shots_per_basis == 0 {
            return Err(Error::InvalidPlan("shots_per_basis must be at least 1".into()));
        }
        if bases.is_empty() {
            return Err(Error::InvalidPlan("no measurement bases".into()));
        }
        let mut seen = [false; 3];
        for b in &bases {
            if std::mem::replace(&mut seen[b.index()], true) {
                return Err(Error::DuplicateBasis(b.symbol()));
            }
        }
        Ok(ShotPlan {
            shots_per_basis,
            seed,
            bases,
        })
    }

    /// All three Pauli bases.
    pub fn full(shots_per_basis: u64, seed: u64) -> Result<Self> {
        Self::new(shots_per_basis, seed, Axis::ALL.to_vec())
    }

    pub fn shots_per_basis(&self) -> u64 {
        self.shots_per_basis
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn bases(&self) -> &[Axis] {
        &self.bases
    }

    /// Same bases and shot count with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        ShotPlan { seed, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub basis: Axis,
    pub n_plus: u64,
    pub n_minus: u64,
}

impl MeasurementRecord {
    pub fn total(&self) -> u64 {
        self.n_plus + self.n_minus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithError {
    pub value: f64,
    pub std_error: f64,
}

impl EstimateWithError {
    pub fn exact(value: f64) -> Self {
        EstimateWithError { value, std_error: 0.0 }
    }
}

fn draw_plus<R: Rng>(rng: &mut R, n: u64, p: f64) -> u64 {
    let p = p.clamp(0.0, 1.0);
    Binomial::new(n, p).expect("p clamped to [0, 1]").sample(rng)
}

/// Binomial photon counts for each basis in the plan.
///
/// Each basis draws from its own stream keyed by (seed, basis), so adding or
/// removing a basis leaves the others unchanged.
pub fn simulate_counts(state: &QuantumState, plan: &ShotPlan) -> Result<Vec<MeasurementRecord>> {
    if state.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            supported: 2,
            actual: state.dim(),
        });
    }
    plan.bases
        .iter()
        .map(|&basis| {
            let mean = expectation(&pauli(basis), state)?;
            let mut rng = rng_for(plan.seed, &[COUNT_STREAM, basis.index() as u64]);
            let n = plan.shots_per_basis;
            let n_plus = draw_plus(&mut rng, n, 0.5 * (1.0 + mean));
            Ok(MeasurementRecord {
                basis,
                n_plus,
                n_minus: n - n_plus,
            })
        })
        .collect()
}

/// (n+ - n-)/n with the binomial standard error sqrt((1 - value^2)/n).
///
/// At degenerate counts (all + or all -) the error is floored at sqrt(1/n).
pub fn estimate_expectation(record: &MeasurementRecord) -> Result<EstimateWithError> {
    let n = record.total();
    if n == 0 {
        return Err(Error::InvalidPlan(format!(
            "no shots recorded for basis {}",
            record.basis
        )));
    }
    let nf = n as f64;
    let value = (record.n_plus as f64 - record.n_minus as f64) / nf;
    let std_error = if record.n_plus == 0 || record.n_minus == 0 {
        (1.0 / nf).sqrt()
    } else {
        ((1.0 - value * value).max(0.0) / nf).sqrt()
    };
    Ok(EstimateWithError { value, std_error })
}

/// Exactly one record per Pauli basis, returned in x, y, z order.
fn records_by_axis(records: &[MeasurementRecord]) -> Result<[MeasurementRecord; 3]> {
    let mut slots: [Option<MeasurementRecord>; 3] = [None; 3];
    for r in records {
        if r.total() == 0 {
            return Err(Error::InvalidPlan(format!("no shots recorded for basis {}", r.basis)));
        }
        if slots[r.basis.index()].replace(*r).is_some() {
            return Err(Error::DuplicateBasis(r.basis.symbol()));
        }
    }
    let [x, y, z] = Axis::ALL.map(|a| slots[a.index()].ok_or(Error::MissingBasis(a.symbol())));
    Ok([x?, y?, z?])
}

/// Plug-in moments from one record per basis. Estimates outside the Bloch
/// ball are kept (and flagged) rather than rejected.
pub fn estimated_moments(records: &[MeasurementRecord]) -> Result<QubitMoments> {
    let by_axis = records_by_axis(records)?;
    let [x, y, z] = by_axis.map(|r| (r.n_plus as f64 - r.n_minus as f64) / r.total() as f64);
    Ok(QubitMoments::compute(x, y, z))
}

fn plug_in(moments: &QubitMoments, relations: &[RelationId]) -> Result<(f64, Vec<f64>)> {
    let lhs = closed_form_lhs(moments);
    let rhs = relations
        .iter()
        .map(|&r| closed_form_rhs(moments, r))
        .collect::<Result<Vec<_>>>()?;
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundEstimate {
    pub lhs: EstimateWithError,
    pub rhs: EstimateWithError,
}

impl BoundEstimate {
    pub fn slack(&self) -> f64 {
        self.lhs.value - self.rhs.value
    }
}

fn sample_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// Point values and bootstrap standard errors of the lhs and each rhs.
///
/// Points come from plugging the estimated expectations into the qubit closed
/// forms. Each replicate redraws every basis from a binomial at its estimated
/// probability, on a stream keyed by (seed, replicate index).
pub fn bootstrap_bounds(
    records: &[MeasurementRecord],
    relations: &[RelationId],
    resamples: usize,
    seed: u64,
) -> Result<BTreeMap<RelationId, BoundEstimate>> {
    if resamples < MIN_RESAMPLES {
        return Err(Error::InvalidPlan(format!(
            "at least {MIN_RESAMPLES} bootstrap resamples required, got {resamples}"
        )));
    }
    let by_axis = records_by_axis(records)?;
    let point = estimated_moments(records)?;
    let (lhs_point, rhs_point) = plug_in(&point, relations)?;

    let replicates: Vec<(f64, Vec<f64>)> = (0..resamples)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, &[r as u64]);
            let e = by_axis.map(|rec| {
                let n = rec.total();
                let plus = draw_plus(&mut rng, n, rec.n_plus as f64 / n as f64);
                (2.0 * plus as f64 - n as f64) / n as f64
            });
            plug_in(&QubitMoments::compute(e[0], e[1], e[2]), relations)
        })
        .collect::<Result<_>>()?;

    let lhs_samples: Vec<f64> = replicates.iter().map(|(l, _)| *l).collect();
    let lhs = EstimateWithError {
        value: lhs_point,
        std_error: sample_std(&lhs_samples),
    };
    let mut out = BTreeMap::new();
    for (k, &relation) in relations.iter().enumerate() {
        let samples: Vec<f64> = replicates.iter().map(|(_, r)| r[k]).collect();
        out.insert(
            relation,
            BoundEstimate {
                lhs,
                rhs: EstimateWithError {
                    value: rhs_point[k],
                    std_error: sample_std(&samples),
                },
            },
        );
    }
    Ok(out)
}
