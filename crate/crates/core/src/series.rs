//! Arctan series in the complementary nome for the angle `θ = π + φ`.
//!
//! Oscillation, `T = 4K√R`, `x = πt/(2K′√R)`:
//!
//! ```text
//! θ(t − T/4) = Σ_{n≥1} (−1)^{n−1}·4·{atan(q′^{n−1/2} e^{x}) + atan(q′^{n−1/2} e^{−x})}
//! ```
//!
//! Revolution, `T = 2kK√R`, `x = πt/(2kK′√R)`:
//!
//! ```text
//! θ(t − T/2) = Σ_{n≥1} 4·{atan(q′^{n−1/2} e^{x}) − atan(q′^{n−1/2} e^{−x})}
//! ```
//!
//! At `t = 0` the first series collapses to Jacobi's
//! `arcsin(k)/4 = atan √q − atan √q³ + atan √q⁵ − …` after exchanging `k`
//! and `k′`.
//!
//! Both sums are continuous in `t` and agree with the unwrapped angle at
//! `t = 0`, so they equal it everywhere, not just modulo `2π`. Time is still
//! reduced by one period first so that `cosh x` in the tail bound stays small.

use std::f64::consts::PI;

use crate::agm::{constants_for, EllipticConstants};
use crate::error::{domain, Error, Result};

/// Cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 512;

/// A truncated series value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// Upper bound on the neglected tail.
    pub tail_bound: f64,
}

fn check(r: f64, tol: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("R must be positive, got {r}")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Smallest `N` with `8·q′^{N+1/2}·cosh(x)/(1 − q′) < tol`, and that bound.
fn terms_needed(nome: f64, x: f64, tol: f64) -> Result<(usize, f64)> {
    let scale = 8.0 * x.cosh() / (1.0 - nome);
    let mut power = nome.sqrt();
    for n in 0..=MAX_SERIES_TERMS {
        let bound = scale * power;
        if bound < tol {
            return Ok((n, bound));
        }
        power *= nome;
    }
    Err(Error::Convergence(format!(
        "series with nome {nome} needs more than {MAX_SERIES_TERMS} terms for tolerance {tol}"
    )))
}

fn arctan_sum(nome: f64, x: f64, terms: usize, alternating: bool, plus: bool) -> f64 {
    let (grow, decay) = (x.exp(), (-x).exp());
    let mut s = nome.sqrt();
    let mut parts = Vec::with_capacity(terms);
    for n in 0..terms {
        let pair = if plus {
            (s * grow).atan() + (s * decay).atan()
        } else {
            (s * grow).atan() - (s * decay).atan()
        };
        let sign = if alternating && n % 2 == 1 { -1.0 } else { 1.0 };
        parts.push(4.0 * sign * pair);
        s *= nome;
    }
    // Smallest terms first.
    parts.iter().rev().sum()
}

/// `θ(t − T/4)` of an oscillation with the given constants.
pub fn theta_osc_series_with(
    t: f64,
    constants: &EllipticConstants,
    r: f64,
    tol: f64,
) -> Result<SeriesResult> {
    check(r, tol)?;
    let root = r.sqrt();
    let period = 4.0 * constants.quarter_period * root;
    let reduced = t - period * (t / period).round();
    let x = PI * reduced / (2.0 * constants.quarter_period_prime * root);
    let (terms, tail_bound) = terms_needed(constants.nome_prime, x, tol)?;
    Ok(SeriesResult {
        value: arctan_sum(constants.nome_prime, x, terms, true, true),
        terms_used: terms,
        tail_bound,
    })
}

/// `θ(t − T/2)` of a revolution with the given constants.
pub fn theta_circ_series_with(
    t: f64,
    constants: &EllipticConstants,
    r: f64,
    tol: f64,
) -> Result<SeriesResult> {
    check(r, tol)?;
    let root = r.sqrt();
    let k = constants.k();
    let period = 2.0 * k * constants.quarter_period * root;
    let turns = (t / period).round();
    let reduced = t - period * turns;
    let x = PI * reduced / (2.0 * k * constants.quarter_period_prime * root);
    let (terms, tail_bound) = terms_needed(constants.nome_prime, x, tol)?;
    Ok(SeriesResult {
        value: arctan_sum(constants.nome_prime, x, terms, false, false) + 2.0 * PI * turns,
        terms_used: terms,
        tail_bound,
    })
}

/// `θ(t − T/4)` for the oscillation of modulus `k` and `R = l/g`.
pub fn theta_osc_series(t: f64, k: f64, r: f64, tol: f64) -> Result<SeriesResult> {
    theta_osc_series_with(t, &constants_for(k)?, r, tol)
}

/// `θ(t − T/2)` for the revolution of modulus `k` and `R = l/g`.
pub fn theta_circ_series(t: f64, k: f64, r: f64, tol: f64) -> Result<SeriesResult> {
    theta_circ_series_with(t, &constants_for(k)?, r, tol)
}

/// `θ(time)` of an oscillation, evaluated through the series at `time + T/4`.
pub fn theta_osc_at(time: f64, constants: &EllipticConstants, r: f64, tol: f64) -> Result<f64> {
    let quarter = constants.quarter_period * r.sqrt();
    Ok(theta_osc_series_with(time + quarter, constants, r, tol)?.value)
}

/// `θ(time)` of a revolution, evaluated through the series at `time + T/2`.
pub fn theta_circ_at(time: f64, constants: &EllipticConstants, r: f64, tol: f64) -> Result<f64> {
    let half = constants.k() * constants.quarter_period * r.sqrt();
    Ok(theta_circ_series_with(time + half, constants, r, tol)?.value)
}

/// `Σ_{n=1}^{N} (−1)^{n−1}·atan(q^{n−1/2})` with the alternating-series tail
/// bound `atan(q^{N+1/2})`.
pub fn elegantissima_partial_sum(nome: f64, terms: usize) -> Result<SeriesResult> {
    if !(nome > 0.0 && nome < 1.0) {
        return Err(domain(format!("nome must lie in (0, 1), got {nome}")));
    }
    if terms == 0 {
        return Err(domain("need at least one term"));
    }
    let values: Vec<f64> = (1..=terms)
        .map(|n| {
            let v = nome.powf(n as f64 - 0.5).atan();
            if n % 2 == 1 {
                v
            } else {
                -v
            }
        })
        .collect();
    Ok(SeriesResult {
        value: values.iter().rev().sum(),
        terms_used: terms,
        tail_bound: nome.powf(terms as f64 + 0.5).atan(),
    })
}

/// Jacobi's series for `arcsin(k)/4` truncated after `terms` terms, with
/// `q` taken from the AGM constants of `k`.
pub fn jacobi_elegantissima(k: f64, terms: usize) -> Result<SeriesResult> {
    elegantissima_partial_sum(constants_for(k)?.nome, terms)
}
