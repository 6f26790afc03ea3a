use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{RelationId, HOLDS_TOL};
use crate::error::{Error, Result};
use crate::qubit::{bloch_to_state, closed_form_lhs, closed_form_rhs, moments_from_angles, BlochAngles};
use crate::seed::derive_seed;
use crate::shots::{bootstrap_bounds, simulate_counts, EstimateWithError, ShotPlan, DEFAULT_RESAMPLES, MIN_RESAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Vary theta over [0, pi] at fixed phi.
    Theta,
    /// Vary phi over [0, 2 pi] at fixed theta.
    Phi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub mode: SweepMode,
    /// phi in theta mode, theta in phi mode.
    pub fixed_value: f64,
    /// Number of evenly spaced grid points including both endpoints.
    pub steps: usize,
    pub relations: Vec<RelationId>,
    pub shots: Option<ShotPlan>,
    pub resamples: usize,
    /// Explicit swept angles, overriding `steps`.
    pub grid: Option<Vec<f64>>,
}

impl SweepSpec {
    /// 13 states theta = n pi / 12 at phi = 0.
    pub fn theta_default() -> Self {
        SweepSpec {
            mode: SweepMode::Theta,
            fixed_value: 0.0,
            steps: 13,
            relations: RelationId::SUM_FORM.to_vec(),
            shots: None,
            resamples: DEFAULT_RESAMPLES,
            grid: None,
        }
    }

    /// 25 states phi = n pi / 12 at theta = pi / 3.
    pub fn phi_default() -> Self {
        SweepSpec {
            mode: SweepMode::Phi,
            fixed_value: PI / 3.0,
            steps: 25,
            ..Self::theta_default()
        }
    }

    pub fn with_shots(mut self, plan: ShotPlan) -> Self {
        self.shots = Some(plan);
        self
    }

    fn span(&self) -> f64 {
        match self.mode {
            SweepMode::Theta => PI,
            SweepMode::Phi => 2.0 * PI,
        }
    }

    /// Swept angle at each grid index.
    pub fn grid_points(&self) -> Vec<f64> {
        if let Some(g) = &self.grid {
            return g.clone();
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps).map(|k| k as f64 * self.span() / last).collect()
    }

    fn angles_at(&self, swept: f64) -> Result<BlochAngles> {
        match self.mode {
            SweepMode::Theta => BlochAngles::new(swept, self.fixed_value),
            SweepMode::Phi => BlochAngles::new(self.fixed_value, swept),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.grid {
            Some(g) if g.is_empty() => return Err(Error::InvalidSweep("empty grid".into())),
            None if self.steps < 2 => {
                return Err(Error::InvalidSweep(format!(
                    "steps must be at least 2, got {}",
                    self.steps
                )))
            }
            _ => {}
        }
        if self.relations.is_empty() {
            return Err(Error::InvalidSweep("no relations requested".into()));
        }
        if let Some(r) = self.relations.iter().find(|r| !r.is_sum_form()) {
            return Err(Error::InvalidSweep(format!("{r} is not a sum-form relation")));
        }
        if self.shots.is_some() && self.resamples < MIN_RESAMPLES {
            return Err(Error::InvalidSweep(format!(
                "at least {MIN_RESAMPLES} bootstrap resamples required, got {}",
                self.resamples
            )));
        }
        for &a in &self.grid_points() {
            self.angles_at(a)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationValue {
    pub relation: RelationId,
    pub value: EstimateWithError,
    /// lhs >= rhs within tolerance. For simulated rows a false flag is a
    /// statistical fluctuation, not a violation of the relation.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRow {
    pub theta: f64,
    pub phi: f64,
    pub lhs: EstimateWithError,
    pub values: Vec<RelationValue>,
    pub simulated: bool,
}

impl OutputRow {
    pub fn get(&self, relation: RelationId) -> Option<&RelationValue> {
        self.values.iter().find(|v| v.relation == relation)
    }
}

fn exact_row(angles: BlochAngles, relations: &[RelationId]) -> Result<OutputRow> {
    let m = moments_from_angles(&angles);
    let lhs = closed_form_lhs(&m);
    let values = relations
        .iter()
        .map(|&relation| {
            let rhs = closed_form_rhs(&m, relation)?;
            Ok(RelationValue {
                relation,
                value: EstimateWithError::exact(rhs),
                holds: lhs - rhs >= -HOLDS_TOL,
            })
        })
        .collect::<Result<_>>()?;
    Ok(OutputRow {
        theta: angles.theta,
        phi: angles.phi,
        lhs: EstimateWithError::exact(lhs),
        values,
        simulated: false,
    })
}

fn simulated_row(
    index: usize,
    angles: BlochAngles,
    plan: &ShotPlan,
    relations: &[RelationId],
    resamples: usize,
) -> Result<OutputRow> {
    let master = plan.seed();
    let point_plan = plan.with_seed(derive_seed(master, &[index as u64, 0]));
    let state = bloch_to_state(&angles).into();
    let records = simulate_counts(&state, &point_plan)?;
    let estimates = bootstrap_bounds(&records, relations, resamples, derive_seed(master, &[index as u64, 1]))?;
    let lhs = estimates[&relations[0]].lhs;
    let values = relations
        .iter()
        .map(|r| {
            let est = estimates[r];
            RelationValue {
                relation: *r,
                value: est.rhs,
                holds: est.slack() >= -HOLDS_TOL,
            }
        })
        .collect();
    Ok(OutputRow {
        theta: angles.theta,
        phi: angles.phi,
        lhs,
        values,
        simulated: true,
    })
}

/// One row per grid point, in grid order.
///
/// Without a shot plan the rows are exact closed-form values with zero
/// errors. With one, every point is measured with its own seed derived from
/// (plan seed, point index) and carries bootstrap errors.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<OutputRow>> {
    spec.validate()?;
    let points: Vec<(usize, BlochAngles)> = spec
        .grid_points()
        .into_iter()
        .enumerate()
        .map(|(i, a)| Ok((i, spec.angles_at(a)?)))
        .collect::<Result<_>>()?;
    match &spec.shots {
        None => points
            .into_iter()
            .map(|(_, angles)| exact_row(angles, &spec.relations))
            .collect(),
        Some(plan) => points
            .into_par_iter()
            .map(|(i, angles)| simulated_row(i, angles, plan, &spec.relations, spec.resamples))
            .collect(),
    }
}
