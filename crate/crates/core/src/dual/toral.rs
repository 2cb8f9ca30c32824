use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angles closer than this are merged into one atom.
const ANGLE_MERGE: f64 = 1e-12;

/// A finitely supported measure `Σ c_j δ_{θ_j}` on the circle. Its
/// transform `n ↦ Σ c_j e^{inθ_j}` is an element of `B(ℤ)` of norm
/// `Σ |c_j|`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicToralMeasure {
    /// `(c_j, θ_j)` sorted by angle, angles distinct and in `[0, 2π)`.
    atoms: Vec<(Complex64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToralAtomJson {
    pub re: f64,
    pub im: f64,
    pub theta: f64,
}

fn normalise(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if TAU - t < ANGLE_MERGE {
        0.0
    } else {
        t
    }
}

impl AtomicToralMeasure {
    /// Reduces angles mod 2π, merges coinciding angles and drops zero
    /// coefficients.
    pub fn new(atoms: impl IntoIterator<Item = (Complex64, f64)>) -> Result<Self> {
        let mut list: Vec<(Complex64, f64)> = Vec::new();
        for (c, theta) in atoms {
            if !theta.is_finite() || !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidArgument("toral atoms must be finite".into()));
            }
            list.push((c, normalise(theta)));
        }
        list.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut merged: Vec<(Complex64, f64)> = Vec::new();
        for (c, theta) in list {
            match merged.last_mut() {
                Some(last) if theta - last.1 <= ANGLE_MERGE => last.0 += c,
                _ => merged.push((c, theta)),
            }
        }
        merged.retain(|(c, _)| *c != Complex64::new(0.0, 0.0));
        Ok(Self { atoms: merged })
    }

    pub fn atoms(&self) -> &[(Complex64, f64)] {
        &self.atoms
    }

    pub fn norm(&self) -> f64 {
        self.atoms.iter().map(|(c, _)| c.norm()).sum()
    }

    pub fn eval(&self, n: i64) -> Complex64 {
        self.atoms.iter().map(|(c, theta)| c * Complex64::from_polar(1.0, n as f64 * theta)).sum()
    }

    /// Convolution on the circle; angles add.
    pub fn convolve(&self, other: &AtomicToralMeasure) -> AtomicToralMeasure {
        let pairs = self
            .atoms
            .iter()
            .flat_map(|(a, s)| other.atoms.iter().map(move |(b, t)| (a * b, s + t)));
        AtomicToralMeasure::new(pairs).expect("finite inputs")
    }

    pub fn power(&self, k: u32) -> AtomicToralMeasure {
        let mut out = self.clone();
        for _ in 1..k {
            out = out.convolve(self);
        }
        out
    }

    pub fn to_json(&self) -> Vec<ToralAtomJson> {
        self.atoms.iter().map(|(c, theta)| ToralAtomJson { re: c.re, im: c.im, theta: *theta }).collect()
    }
}
