//! Plain-matrix reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's arithmetic; values are built from
//! raw nested `Vec`s so the tests compare two independent routes.

#![allow(dead_code, clippy::needless_range_loop)]

pub use num_complex::Complex64 as C;
use urel_core::{Observable, PureState, QuantumState};

pub type Mat = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn sx() -> Mat {
    vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]
}

pub fn sy() -> Mat {
    vec![vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]
}

pub fn sz() -> Mat {
    vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]]
}

pub fn mat_add(a: &Mat, b: &Mat, sign: f64) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y * sign).collect())
        .collect()
}

pub fn mat_sum(ms: &[Mat]) -> Mat {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = mat_add(&acc, m, 1.0);
    }
    acc
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &Mat, v: &[C]) -> Vec<C> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn braket(u: &[C], v: &[C]) -> C {
    u.iter().zip(v).map(|(x, y)| x.conj() * y).sum()
}

/// <psi|M|psi> with no residue handling.
pub fn sandwich(m: &Mat, psi: &[C]) -> C {
    braket(psi, &mat_vec(m, psi))
}

pub fn ev(m: &Mat, psi: &[C]) -> f64 {
    sandwich(m, psi).re
}

pub fn var(m: &Mat, psi: &[C]) -> f64 {
    let mean = ev(m, psi);
    let mm = mat_mul(m, m);
    (ev(&mm, psi) - mean * mean).max(0.0)
}

/// <[A,B]>
pub fn comm(a: &Mat, b: &Mat, psi: &[C]) -> C {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    sandwich(&mat_add(&ab, &ba, -1.0), psi)
}

/// Density-matrix expectation Tr(rho M).
pub fn tr_ev(rho: &Mat, m: &Mat) -> f64 {
    let p = mat_mul(rho, m);
    (0..p.len()).map(|i| p[i][i].re).sum()
}

pub fn obs(m: &Mat) -> Observable {
    Observable::from_rows(m).expect("hermitian test matrix")
}

pub fn ket(amps: &[C]) -> PureState {
    PureState::new(amps.to_vec()).expect("normalized test vector")
}

pub fn state(amps: &[C]) -> QuantumState {
    QuantumState::Pure(ket(amps))
}

pub fn ket0() -> Vec<C> {
    vec![c(1., 0.), c(0., 0.)]
}

/// Normalize 2d raw reals into a d-dim complex vector; None when degenerate.
pub fn vector_from(raw: &[f64]) -> Option<Vec<C>> {
    let v: Vec<C> = raw.chunks(2).map(|p| c(p[0], p[1])).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (n > 1e-3).then(|| v.iter().map(|z| z / n).collect())
}

/// Hermitian matrix from d*d raw reals: real diagonal, complex upper triangle.
pub fn hermitian_from(d: usize, raw: &[f64]) -> Mat {
    let mut m = vec![vec![c(0., 0.); d]; d];
    let mut it = raw.iter().copied();
    for i in 0..d {
        m[i][i] = c(it.next().unwrap(), 0.0);
        for j in (i + 1)..d {
            let z = c(it.next().unwrap(), it.next().unwrap());
            m[i][j] = z;
            m[j][i] = z.conj();
        }
    }
    m
}

pub fn bloch_ket(theta: f64, phi: f64) -> Vec<C> {
    vec![c((theta / 2.0).cos(), 0.0), C::from_polar((theta / 2.0).sin(), phi)]
}

/// Sum-form relation values for a list of observables, computed directly
/// from their definitions.
pub struct Reference {
    pub lhs: f64,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub t3: Option<f64>,
    pub m1: f64,
    pub m2: f64,
    pub m3: Option<f64>,
    pub m4: f64,
}

pub fn reference(ms: &[Mat], psi: &[C]) -> Reference {
    let n = ms.len();
    let nf = n as f64;
    let lhs: f64 = ms.iter().map(|m| var(m, psi)).sum();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            plus.push(var(&mat_add(&ms[i], &ms[j], 1.0), psi));
            minus.push(var(&mat_add(&ms[i], &ms[j], -1.0), psi));
        }
    }
    let total = var(&mat_sum(ms), psi);
    let m1 = plus.iter().sum::<f64>() / (2.0 * (nf - 1.0));
    let m2 = minus.iter().sum::<f64>() / (2.0 * (nf - 1.0));
    let m3 = (n >= 3).then(|| {
        let s: f64 = plus.iter().map(|v| v.sqrt()).sum();
        plus.iter().sum::<f64>() / (nf - 2.0) - s * s / ((nf - 1.0).powi(2) * (nf - 2.0))
    });
    let s: f64 = minus.iter().map(|v| v.sqrt()).sum();
    let m4 = total / nf + 2.0 * s * s / (nf * nf * (nf - 1.0));

    let (mut t1, mut t2, mut t3) = (None, None, None);
    if n == 3 {
        let cs = [
            comm(&ms[0], &ms[1], psi),
            comm(&ms[1], &ms[2], psi),
            comm(&ms[2], &ms[0], psi),
        ];
        let moduli: f64 = cs.iter().map(|z| z.norm()).sum();
        let composite: C = cs.iter().sum();
        t1 = Some(total / 3.0 + composite.norm() / 3f64.sqrt());
        t2 = Some(moduli / 3f64.sqrt());
        t3 = Some(moduli / 2.0);
    }
    Reference {
        lhs,
        t1,
        t2,
        t3,
        m1,
        m2,
        m3,
        m4,
    }
}
