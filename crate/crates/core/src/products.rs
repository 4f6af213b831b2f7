//! Truncated nome products for `dn + i·k·sn` and for `(dn − k′·cn)/k` at
//! the complementary modulus.
//!
//! Both are products over `n ≥ 1` of factors
//! `(1 + a·s·e^{−iw})(1 + b·s·e^{iw}) / ((1 − a·s·e^{−iw})(1 − b·s·e^{iw}))`
//! with `s = q^{n−1/2}`, `w = πz/(2K)` and signs `a, b` depending on the
//! product. The factors tend to 1 geometrically inside the strip
//! `|Im z| < K′`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::agm::EllipticConstants;
use crate::error::{domain, Error, Result};

/// Stopping rule for the truncated products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductTruncation {
    pub tol: f64,
    pub max_terms: usize,
}

impl ProductTruncation {
    pub const MIN_TOL: f64 = 1e-15;
    pub const MAX_TERMS: usize = 512;

    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol >= Self::MIN_TOL && tol.is_finite()) {
            return Err(domain(format!("product tolerance {tol} below 1e−15")));
        }
        if max_terms == 0 || max_terms > Self::MAX_TERMS {
            return Err(domain(format!("max_terms = {max_terms} outside [1, 512]")));
        }
        Ok(Self { tol, max_terms })
    }
}

impl Default for ProductTruncation {
    fn default() -> Self {
        Self {
            tol: Self::MIN_TOL,
            max_terms: Self::MAX_TERMS,
        }
    }
}

/// Sign of `s·e^{−iw}` and of `s·e^{iw}` in the numerator of factor `n`.
type Signs = fn(usize) -> (f64, f64);

fn nome_product(
    z: Complex64,
    quarter_period: f64,
    quarter_period_prime: f64,
    nome: f64,
    signs: Signs,
    trunc: ProductTruncation,
) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain("product argument must be finite"));
    }
    let growth = (PI * z.im.abs() / (2.0 * quarter_period)).exp();
    if z.im.abs() >= quarter_period_prime || nome.sqrt() * growth >= 1.0 {
        return Err(domain(format!(
            "|Im z| = {} outside the convergence strip |Im z| < {}",
            z.im.abs(),
            quarter_period_prime
        )));
    }
    let w = Complex64::i() * (PI / (2.0 * quarter_period)) * z;
    let (up, down) = (w.exp(), (-w).exp());
    let one = Complex64::new(1.0, 0.0);
    let mut acc = one;
    for n in 1..=trunc.max_terms {
        let s = nome.powf(n as f64 - 0.5);
        let (a, b) = signs(n);
        let num = (one + a * s * down) * (one + b * s * up);
        let den = (one - a * s * down) * (one - b * s * up);
        acc *= num / den;
        if s * growth < 0.25 * trunc.tol {
            return Ok(acc);
        }
    }
    Err(Error::Convergence(format!(
        "nome product needs more than {} factors",
        trunc.max_terms
    )))
}

/// `dn(z, k) + i·k·sn(z, k)` as a nome product, for `|Im z| < K′`.
pub fn product_ojt(
    z: Complex64,
    constants: &EllipticConstants,
    trunc: ProductTruncation,
) -> Result<Complex64> {
    nome_product(
        z,
        constants.quarter_period,
        constants.quarter_period_prime,
        constants.nome,
        |n| {
            let sigma = if n % 2 == 0 { 1.0 } else { -1.0 };
            (sigma, -sigma)
        },
        trunc,
    )
}

/// `(dn(z, k′) − k′·cn(z, k′))/k` as a product in the nome `q′`.
///
/// `constants_complementary` are the constants of `k′`, so its own nome is
/// `q′` and its own quarter period is `K′`; the strip is `|Im z| < K`.
pub fn product_greenhill(
    z: Complex64,
    constants_complementary: &EllipticConstants,
    trunc: ProductTruncation,
) -> Result<Complex64> {
    let c = constants_complementary;
    nome_product(
        z,
        c.quarter_period,
        c.quarter_period_prime,
        c.nome,
        |_| (-1.0, -1.0),
        trunc,
    )
}
