//! Jacobi elliptic functions `sn`, `cn`, `dn` and the amplitude `am` for
//! real arguments.
//!
//! Evaluation uses the descending Landen (AGM) scheme: run the AGM on
//! `(1, k′)`, set `φ_N = 2^N·a_N·u` and recurse back with
//! `φ_{n−1} = (φ_n + asin((c_n/a_n)·sin φ_n))/2`. The argument is first
//! reduced to `[−K, K]` using `am(u + 2K) = am(u) + π`.

use std::f64::consts::PI;

use crate::agm::{agm, Modulus};
use crate::error::Result;

/// Values of `sn`, `cn`, `dn` at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Precomputed AGM data for repeated evaluation at a fixed modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiKernel {
    modulus: Modulus,
    quarter_period: f64,
    a_seq: Vec<f64>,
    /// `c_n / a_n` for `n = 1..=N`.
    ratios: Vec<f64>,
}

impl JacobiKernel {
    pub fn new(modulus: Modulus) -> Result<Self> {
        let run = agm(1.0, modulus.k_prime)?;
        let quarter_period = PI / (2.0 * run.limit);
        // c_n = c_{n−1}² / (4 a_n) avoids the cancellation in (a − b)/2.
        let mut c = modulus.k;
        let ratios = run.a_seq[1..]
            .iter()
            .map(|&a| {
                c = c * c / (4.0 * a);
                c / a
            })
            .collect();
        Ok(Self {
            modulus,
            quarter_period,
            a_seq: run.a_seq,
            ratios,
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// `K`, identical to the value from [`crate::agm::elliptic_constants`].
    pub fn quarter_period(&self) -> f64 {
        self.quarter_period
    }

    /// Amplitude for `|u| ≤ K`.
    fn reduced_amplitude(&self, u: f64) -> f64 {
        let n = self.ratios.len();
        let mut phi = (n as f64).exp2() * self.a_seq[n] * u;
        for ratio in self.ratios.iter().rev() {
            phi = 0.5 * (phi + (ratio * phi.sin()).asin());
        }
        phi
    }

    /// Splits `u = u_r + 2K·m` with `|u_r| ≤ K`.
    fn reduce(&self, u: f64) -> (f64, f64) {
        let half_period = 2.0 * self.quarter_period;
        let m = (u / half_period).round();
        (u - m * half_period, m)
    }

    /// Continuous amplitude `am(u, k)`.
    pub fn amplitude(&self, u: f64) -> f64 {
        let (ur, m) = self.reduce(u);
        self.reduced_amplitude(ur) + m * PI
    }

    pub fn eval(&self, u: f64) -> JacobiTriple {
        let (ur, m) = self.reduce(u);
        let (s, c) = self.reduced_amplitude(ur).sin_cos();
        let sign = if m.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
        // dn² = k′² + k²·cn² has no cancellation, unlike 1 − k²·sn².
        let dn = self.modulus.k_prime.hypot(self.modulus.k * c);
        JacobiTriple {
            sn: sign * s,
            cn: sign * c,
            dn,
        }
    }

    /// Values at `u − K` from the values at `u`:
    /// `sn(u−K) = −cn/dn`, `cn(u−K) = k′·sn/dn`, `dn(u−K) = k′/dn`.
    pub fn quarter_shift(&self, u: f64) -> JacobiTriple {
        let JacobiTriple { sn, cn, dn } = self.eval(u);
        let kp = self.modulus.k_prime;
        JacobiTriple {
            sn: -cn / dn,
            cn: kp * sn / dn,
            dn: kp / dn,
        }
    }

    /// Functions of modulus `k′` at the complex point `iu + K′`, reduced to
    /// real expressions in `sn, cn, dn (u, k)`.
    pub fn imag_shift(&self, u: f64) -> ImagShift {
        let JacobiTriple { sn, cn, dn } = self.eval(u);
        let k = self.modulus.k;
        ImagShift {
            dn: k * cn / dn,
            sn: 1.0 / dn,
            cn_imag_coeff: k * sn / dn,
        }
    }
}

/// Jacobi's imaginary transformation evaluated on the line `iu + K′`.
///
/// With `(k, k′)` the modulus handed in and all functions below taken at
/// modulus `k′`:
/// `dn(iu+K′) = dn`, `sn(iu+K′) = sn`, `cn(iu+K′) = −i·cn_imag_coeff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagShift {
    /// `k·cn(u,k)/dn(u,k)`.
    pub dn: f64,
    /// `1/dn(u,k)`.
    pub sn: f64,
    /// `k·sn(u,k)/dn(u,k)`.
    pub cn_imag_coeff: f64,
}

/// `am(u, k)`, continuous and strictly increasing in `u`.
pub fn amplitude(u: f64, modulus: Modulus) -> Result<f64> {
    Ok(JacobiKernel::new(modulus)?.amplitude(u))
}

pub fn jacobi(u: f64, modulus: Modulus) -> Result<JacobiTriple> {
    Ok(JacobiKernel::new(modulus)?.eval(u))
}

/// `(sn, cn, dn)(u − K, k)` through the quarter-period shift formulas.
pub fn quarter_shift(u: f64, modulus: Modulus) -> Result<JacobiTriple> {
    Ok(JacobiKernel::new(modulus)?.quarter_shift(u))
}

pub fn imag_shift(u: f64, modulus: Modulus) -> Result<ImagShift> {
    Ok(JacobiKernel::new(modulus)?.imag_shift(u))
}
