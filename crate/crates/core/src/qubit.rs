//! Qubit closed forms: Bloch-angle states, Pauli operators, the derived
//! moments V, D, E, H, L±, M±, N±, and Stokes-parameter conversions.
//!
//! Conventions: |0> is the +1 eigenvector of sigma_z. Stokes S1, S2, S3 bind
//! to sigma_x, sigma_y, sigma_z respectively; S0 is a free positive scale.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{ObservableSet, RelationId};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ZERO};
use crate::quantum::{expectation, DensityMatrix, Observable, PureState, QuantumState};

const ANGLE_TOL: f64 = 1e-12;
/// Estimated moments with V above this are flagged as outside the ball.
pub const BALL_FLAG_TOL: f64 = 1e-6;
/// Estimated moments with V above this are rejected.
pub const BALL_REJECT: f64 = 1.05;
const COMPONENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(Error::InvalidPlan(format!("unknown basis {s:?}"))),
        }
    }
}

pub fn pauli(axis: Axis) -> Observable {
    let (o, l, i) = (ZERO, C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    let rows = match axis {
        Axis::X => [[o, l], [l, o]],
        Axis::Y => [[o, -i], [i, o]],
        Axis::Z => [[l, o], [o, -l]],
    };
    let m = CMatrix::from_rows(&rows.map(|r| r.to_vec())).expect("2x2");
    Observable::new(m).expect("Pauli matrices are Hermitian")
}

/// (sigma_x, sigma_y, sigma_z) as an ordered set.
pub fn pauli_set() -> ObservableSet {
    ObservableSet::new(Axis::ALL.map(pauli).to_vec()).expect("three qubit observables")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    /// theta in [0, pi], phi in [0, 2 pi]; values within 1e-12 of an
    /// endpoint are snapped onto it.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let theta = snap(theta, 0.0, PI).ok_or(Error::InvalidAngle {
            name: "theta",
            value: theta,
        })?;
        let phi = snap(phi, 0.0, 2.0 * PI).ok_or(Error::InvalidAngle {
            name: "phi",
            value: phi,
        })?;
        Ok(BlochAngles { theta, phi })
    }
}

fn snap(x: f64, lo: f64, hi: f64) -> Option<f64> {
    if !x.is_finite() || x < lo - ANGLE_TOL || x > hi + ANGLE_TOL {
        None
    } else {
        Some(x.clamp(lo, hi))
    }
}

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
pub fn bloch_to_state(angles: &BlochAngles) -> PureState {
    let half = 0.5 * angles.theta;
    let amps = vec![C64::new(half.cos(), 0.0), C64::from_polar(half.sin(), angles.phi)];
    PureState::new(amps).expect("unit norm by construction")
}

/// Pauli expectations and the derived scalars the qubit closed forms use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitMoments {
    pub ex: f64,
    pub ey: f64,
    pub ez: f64,
    /// ex^2 + ey^2 + ez^2
    pub v: f64,
    /// ex ey + ey ez + ez ex
    pub d: f64,
    /// |ex + ey + ez|
    pub e: f64,
    /// |ex| + |ey| + |ez|
    pub h: f64,
    pub lp: f64,
    pub lm: f64,
    pub mp: f64,
    pub mm: f64,
    pub np: f64,
    pub nm: f64,
    /// Set when V exceeds 1 by more than round-off, as finite-shot
    /// estimates can.
    pub outside_ball: bool,
}

fn root_term(a: f64, b: f64) -> f64 {
    (2.0 - (a + b) * (a + b)).max(0.0).sqrt()
}

impl QubitMoments {
    /// Fill every derived field from the three expectations, without range
    /// checks. Negative radicands in L±/M±/N± are clamped to zero.
    pub fn compute(ex: f64, ey: f64, ez: f64) -> Self {
        let v = ex * ex + ey * ey + ez * ez;
        QubitMoments {
            ex,
            ey,
            ez,
            v,
            d: ex * ey + ey * ez + ez * ex,
            e: (ex + ey + ez).abs(),
            h: ex.abs() + ey.abs() + ez.abs(),
            lp: root_term(ex, ey),
            lm: root_term(ex, -ey),
            mp: root_term(ey, ez),
            mm: root_term(ey, -ez),
            np: root_term(ez, ex),
            nm: root_term(ez, -ex),
            outside_ball: v > 1.0 + BALL_FLAG_TOL,
        }
    }

    pub fn expectations(&self) -> [f64; 3] {
        [self.ex, self.ey, self.ez]
    }
}

/// Analytic moments: <sx> = sin t cos p, <sy> = sin t sin p, <sz> = cos t.
pub fn moments_from_angles(angles: &BlochAngles) -> QubitMoments {
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.phi.sin_cos();
    QubitMoments::compute(st * cp, st * sp, ct)
}

/// Moments from (possibly estimated) expectations.
///
/// Inputs slightly outside the Bloch ball are accepted and flagged; V beyond
/// 1.05 signals a bad estimate and is rejected.
pub fn moments_from_expectations(ex: f64, ey: f64, ez: f64) -> Result<QubitMoments> {
    let m = QubitMoments::compute(ex, ey, ez);
    let in_range = |x: f64| x.is_finite() && x.abs() <= 1.0 + COMPONENT_TOL;
    if !(in_range(ex) && in_range(ey) && in_range(ez)) || m.v > BALL_REJECT {
        return Err(Error::InvalidMoments(m.v));
    }
    Ok(m)
}

/// Pauli expectations of a qubit state by the matrix route.
pub fn expectations_of(state: &QuantumState) -> Result<[f64; 3]> {
    if state.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            supported: 2,
            actual: state.dim(),
        });
    }
    Ok([
        expectation(&pauli(Axis::X), state)?,
        expectation(&pauli(Axis::Y), state)?,
        expectation(&pauli(Axis::Z), state)?,
    ])
}

/// Shared lhs of all seven sum-form relations: 3 - V.
pub fn closed_form_lhs(m: &QubitMoments) -> f64 {
    3.0 - m.v
}

/// Closed-form rhs of a sum-form relation for the Pauli triple.
pub fn closed_form_rhs(m: &QubitMoments, relation: RelationId) -> Result<f64> {
    let s3 = 3f64.sqrt();
    let (v, d) = (m.v, m.d);
    Ok(match relation {
        RelationId::TripleSum4 => (3.0 - v - 2.0 * d) / 3.0 + 2.0 * s3 / 3.0 * m.e,
        RelationId::TripleComm5 => 2.0 * s3 / 3.0 * m.h,
        RelationId::TriplePairwise6 => m.h,
        RelationId::SumPlus7 => 0.5 * (3.0 - v - d),
        RelationId::SumMinus8 => 0.5 * (3.0 - v + d),
        RelationId::SumPlusRoot9 => {
            let s = m.lp + m.mp + m.np;
            2.0 * (3.0 - v - d) - 0.25 * s * s
        }
        RelationId::SumMinusRoot10 => {
            let s = m.lm + m.mm + m.nm;
            (3.0 - v - 2.0 * d) / 3.0 + s * s / 9.0
        }
        other => return Err(Error::UnsupportedRelation(other.name())),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct StokesVector {
    s: [f64; 4],
}

impl StokesVector {
    pub fn new(s0: f64, s1: f64, s2: f64, s3: f64) -> Result<Self> {
        if !s0.is_finite() || s0 <= 0.0 || ![s1, s2, s3].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidStokes(format!(
                "S0 must be positive and all components finite, got {s0}"
            )));
        }
        let pol = s1 * s1 + s2 * s2 + s3 * s3;
        if pol > s0 * s0 * (1.0 + 1e-9) {
            return Err(Error::InvalidStokes(format!(
                "S1^2 + S2^2 + S3^2 = {pol} exceeds S0^2 = {}",
                s0 * s0
            )));
        }
        Ok(StokesVector { s: [s0, s1, s2, s3] })
    }

    pub fn components(&self) -> [f64; 4] {
        self.s
    }

    /// S1/S0, S2/S0, S3/S0.
    pub fn ratios(&self) -> [f64; 3] {
        [self.s[1] / self.s[0], self.s[2] / self.s[0], self.s[3] / self.s[0]]
    }
}

impl TryFrom<[f64; 4]> for StokesVector {
    type Error = Error;

    fn try_from(s: [f64; 4]) -> Result<Self> {
        StokesVector::new(s[0], s[1], s[2], s[3])
    }
}

impl From<StokesVector> for [f64; 4] {
    fn from(s: StokesVector) -> Self {
        s.s
    }
}

/// rho = 1/2 sum_i (S_i/S_0) sigma_i with sigma_0 = I.
pub fn stokes_to_density(s: &StokesVector) -> Result<DensityMatrix> {
    let [rx, ry, rz] = s.ratios();
    let rows = vec![
        vec![C64::new(0.5 * (1.0 + rz), 0.0), C64::new(0.5 * rx, -0.5 * ry)],
        vec![C64::new(0.5 * rx, 0.5 * ry), C64::new(0.5 * (1.0 - rz), 0.0)],
    ];
    DensityMatrix::from_rows(&rows)
}

/// Inverse of [`stokes_to_density`] with S0 normalized to 1.
pub fn density_to_stokes(rho: &DensityMatrix) -> Result<StokesVector> {
    let [x, y, z] = expectations_of(&QuantumState::Mixed(rho.clone()))?;
    StokesVector::new(1.0, x, y, z)
}

/// Derived moments written directly in Stokes parameters.
pub fn moments_from_stokes(s: &StokesVector) -> QubitMoments {
    let [s0, s1, s2, s3] = s.s;
    let s0sq = s0 * s0;
    let ratio_root = |a: f64, b: f64| (2.0 - ((a + b) / s0).powi(2)).max(0.0).sqrt();
    let v = (s1 * s1 + s2 * s2 + s3 * s3) / s0sq;
    QubitMoments {
        ex: s1 / s0,
        ey: s2 / s0,
        ez: s3 / s0,
        v,
        d: (s1 * s2 + s2 * s3 + s3 * s1) / s0sq,
        e: ((s1 + s2 + s3) / s0).abs(),
        h: (s1 / s0).abs() + (s2 / s0).abs() + (s3 / s0).abs(),
        lp: ratio_root(s1, s2),
        lm: ratio_root(s1, -s2),
        mp: ratio_root(s2, s3),
        mm: ratio_root(s2, -s3),
        np: ratio_root(s3, s1),
        nm: ratio_root(s3, -s1),
        outside_ball: v > 1.0 + BALL_FLAG_TOL,
    }
}
