//! Ascending Landen transformation applied to circulatory motions.
//!
//! One step maps a revolution `(k, R)` to `(k₁, R₁)` with
//! `k₁′ = (1−k)/(1+k)`, `k₁ = 2√k/(1+k)` and `R₁ = R/k`; the original
//! motion is then the sum of two copies of the new one half a period
//! apart. Iterating gives `R_j → R_∞ = (π/(2kK′))²·R`, and the ratios
//! `R_n/R_{n+1}` are the ratios `b_n/a_n` of the AGM started at
//! `a_0 = R₁`, `b_0 = R`.

use std::f64::consts::PI;

use crate::agm::{agm_sequence, constants_for, elliptic_constants, quarter_period_from_complement, Modulus};
use crate::error::{domain, Result};
use crate::pendulum::PendulumParams;

/// Deepest chain [`build_chain`] will construct.
pub const MAX_CHAIN_DEPTH: usize = 40;

/// Deepest level for the `2^j`-term decomposition check.
pub const MAX_DECOMPOSITION_DEPTH: u32 = 3;

fn check_open_unit(k: f64) -> Result<()> {
    if k > 0.0 && k < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("modulus {k} must lie in (0, 1)")))
    }
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("R must be positive, got {r}")))
    }
}

/// `(k₁, k₁′)` with `k₁′ = (1−k)/(1+k)`, `k₁ = 2√k/(1+k)`.
pub fn ascend_modulus(k: f64) -> Result<(f64, f64)> {
    check_open_unit(k)?;
    Ok((2.0 * k.sqrt() / (1.0 + k), (1.0 - k) / (1.0 + k)))
}

/// Inverse map `k = (1 − k₁′)/(1 + k₁′)`, with `k′ = 2√k₁′/(1 + k₁′)`.
pub fn descend_modulus(k1_prime: f64) -> Result<Modulus> {
    check_open_unit(k1_prime)?;
    let d = 1.0 + k1_prime;
    Modulus::from_pair((1.0 - k1_prime) / d, 2.0 * k1_prime.sqrt() / d)
}

/// `(k, k′, 1 − k)` one ascending step further, keeping full relative
/// precision in the last two as `k → 1`.
fn ascend_accurate(k: f64, one_minus_k: f64) -> (f64, f64, f64) {
    let root = k.sqrt();
    let one_minus_root = one_minus_k / (1.0 + root);
    (
        2.0 * root / (1.0 + k),
        one_minus_k / (1.0 + k),
        one_minus_root * one_minus_root / (1.0 + k),
    )
}

/// One Landen step for a revolution, with its relations evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircStep {
    pub k1: f64,
    pub k1_prime: f64,
    /// `R₁ = R/k`.
    pub r1: f64,
    /// `|K − (1+k₁′)K₁/2| / K`.
    pub quarter_period_residual: f64,
    /// Period `T = 2kK√R` of the original revolution.
    pub period: f64,
    /// Period `T₁ = 2k₁K₁√R₁` of the new revolution.
    pub period1: f64,
    /// `|T₁ − 2(R₁/R)T| / T₁`.
    pub period_residual: f64,
}

pub fn circ_step(k: f64, r: f64) -> Result<CircStep> {
    check_r(r)?;
    let (k1, k1_prime) = ascend_modulus(k)?;
    let r1 = r / k;
    let base = constants_for(k)?;
    let next = elliptic_constants(Modulus::from_pair(k1, k1_prime)?)?;
    let kk = base.quarter_period;
    let kk1 = next.quarter_period;
    let period = 2.0 * k * kk * r.sqrt();
    let period1 = 2.0 * k1 * kk1 * r1.sqrt();
    Ok(CircStep {
        k1,
        k1_prime,
        r1,
        quarter_period_residual: (kk - 0.5 * (1.0 + k1_prime) * kk1).abs() / kk,
        period,
        period1,
        period_residual: (period1 - 2.0 * (r1 / r) * period).abs() / period1,
    })
}

/// The iterated Landen chain of a revolution.
#[derive(Debug, Clone, PartialEq)]
pub struct LandenChain {
    /// `k_0 = k, k_1, …`, increasing toward 1.
    pub k_seq: Vec<f64>,
    /// `k_j′`, decreasing toward 0 (eventually underflowing).
    pub k_prime_seq: Vec<f64>,
    /// `R_0 = R, R_1, …`, increasing toward `R_∞`.
    pub r_seq: Vec<f64>,
    /// Periods `T_j`, built by `T_j = 2(R_j/R_{j−1})·T_{j−1}` from `T_0 = 2kK√R`.
    pub t_seq: Vec<f64>,
    /// AGM iterates from `a_0 = R_1`.
    pub a_seq: Vec<f64>,
    /// AGM iterates from `b_0 = R`.
    pub b_seq: Vec<f64>,
}

impl LandenChain {
    pub fn depth(&self) -> usize {
        self.k_seq.len() - 1
    }

    /// Modulus pair of level `j`; fails once `k_j` rounds to 1.
    pub fn modulus(&self, j: usize) -> Result<Modulus> {
        Modulus::from_pair(self.k_seq[j], self.k_prime_seq[j])
    }

    /// The revolution `θ_j` at level `j`.
    pub fn motion(&self, j: usize) -> Result<PendulumParams> {
        PendulumParams::circulatory_with(self.modulus(j)?, self.r_seq[j])
    }

    /// `2k_jK_j√R_j` evaluated from the elliptic integral, while `k_j′`
    /// is still representable.
    pub fn direct_period(&self, j: usize) -> Option<f64> {
        let kp = self.k_prime_seq[j];
        if kp <= 0.0 {
            return None;
        }
        let kk = quarter_period_from_complement(kp).ok()?;
        Some(2.0 * self.k_seq[j] * kk * self.r_seq[j].sqrt())
    }
}

/// Runs `depth` ascending Landen steps from the revolution `(k, R)`.
pub fn build_chain(k: f64, r: f64, depth: usize) -> Result<LandenChain> {
    check_open_unit(k)?;
    check_r(r)?;
    if depth > MAX_CHAIN_DEPTH {
        return Err(domain(format!("chain depth {depth} exceeds {MAX_CHAIN_DEPTH}")));
    }
    let modulus = Modulus::new(k)?;
    let period0 = 2.0 * k * quarter_period_from_complement(modulus.k_prime)? * r.sqrt();

    let mut k_seq = vec![k];
    let mut k_prime_seq = vec![modulus.k_prime];
    let mut r_seq = vec![r];
    let mut t_seq = vec![period0];
    let (mut kj, mut one_minus) = (k, 1.0 - k);
    for _ in 0..depth {
        let r_prev = *r_seq.last().unwrap();
        let r_next = r_prev / kj;
        let (k_next, kp_next, om_next) = ascend_accurate(kj, one_minus);
        let t_next = 2.0 * (r_next / r_prev) * t_seq.last().unwrap();
        k_seq.push(k_next);
        k_prime_seq.push(kp_next);
        r_seq.push(r_next);
        t_seq.push(t_next);
        kj = k_next;
        one_minus = om_next;
    }
    let (a_seq, b_seq) = agm_sequence(r / k, r, depth)?;
    Ok(LandenChain {
        k_seq,
        k_prime_seq,
        r_seq,
        t_seq,
        a_seq,
        b_seq,
    })
}

/// `R_∞ = (π/(2kK′))²·R`.
pub fn r_infinity(k: f64, r: f64) -> Result<f64> {
    check_r(r)?;
    let c = constants_for(k)?;
    let x = PI / (2.0 * k * c.quarter_period_prime);
    Ok(x * x * r)
}

/// A revolution `θ` together with its first Landen image `θ₁`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub base: PendulumParams,
    pub next: PendulumParams,
    /// `R/R₁ = k`.
    pub time_scale: f64,
}

impl Decomposition {
    pub fn new(k: f64, r: f64) -> Result<Self> {
        let (k1, k1_prime) = ascend_modulus(k)?;
        Ok(Self {
            base: PendulumParams::circulatory(k, r)?,
            next: PendulumParams::circulatory_with(Modulus::from_pair(k1, k1_prime)?, r / k)?,
            time_scale: k,
        })
    }

    /// `|θ((R/R₁)t) − θ₁(t) − θ₁(t − T₁/2)|` on unwrapped angles.
    pub fn residual(&self, t: f64) -> f64 {
        let half = 0.5 * self.next.period().expect("revolution has a period");
        (self.base.theta(self.time_scale * t) - self.next.theta(t) - self.next.theta(t - half)).abs()
    }
}

/// Residual of the two-revolution decomposition of `(k, R)` at time `t`.
pub fn decomposition_residual(t: f64, k: f64, r: f64) -> Result<f64> {
    Ok(Decomposition::new(k, r)?.residual(t))
}

/// `θ(t)` of `(k, R)` against `Σ_{n=−2^{j−1}}^{2^{j−1}−1} θ_j((R_j/R)(t + nT))`.
#[derive(Debug, Clone)]
pub struct DeepDecomposition {
    pub base: PendulumParams,
    pub level: PendulumParams,
    pub depth: u32,
    /// `R_j/R`.
    pub time_scale: f64,
}

impl DeepDecomposition {
    pub fn new(k: f64, r: f64, depth: u32) -> Result<Self> {
        if depth == 0 || depth > MAX_DECOMPOSITION_DEPTH {
            return Err(domain(format!(
                "decomposition depth {depth} outside 1..={MAX_DECOMPOSITION_DEPTH}"
            )));
        }
        let chain = build_chain(k, r, depth as usize)?;
        let j = depth as usize;
        Ok(Self {
            base: PendulumParams::circulatory(k, r)?,
            level: chain.motion(j)?,
            depth,
            time_scale: chain.r_seq[j] / r,
        })
    }

    /// The `2^j`-term sum over `n = −2^{j−1} … 2^{j−1}−1`.
    pub fn sum(&self, t: f64) -> f64 {
        let period = self.base.period().expect("revolution has a period");
        let half = 1i64 << (self.depth - 1);
        (-half..half)
            .map(|n| self.level.theta(self.time_scale * (t + n as f64 * period)))
            .sum()
    }

    /// Number of whole turns by which the symmetric index range overcounts
    /// the unwrapped angle: `2^{j−1} − 1`.
    ///
    /// Composing single steps yields the range `n = −(2^j − 1) … 0`; each of
    /// the `2^{j−1} − 1` terms moved to positive `n` is later by one full
    /// period `T_j` and so larger by `2π`.
    pub fn winding_offset(&self) -> f64 {
        ((1u64 << (self.depth - 1)) - 1) as f64
    }

    /// `|θ(t) − (sum − 2π·offset)|`.
    pub fn residual(&self, t: f64) -> f64 {
        (self.base.theta(t) - self.sum(t) + 2.0 * PI * self.winding_offset()).abs()
    }
}

/// Oscillation rebuilt from two counter-running revolutions.
///
/// `θ(t) = θ₁(t) − θ₁(t − k₁K₁√R₁)` is the oscillation with
/// `k = (1−k₁′)/(1+k₁′)` and `R = k·R₁`.
#[derive(Debug, Clone)]
pub struct Step4 {
    pub oscillation: PendulumParams,
    pub revolution: PendulumParams,
}

/// Relations tying the oscillation of [`Step4`] to its revolution, all relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step4Relations {
    /// `|K − (1+k₁′)K₁/2| / K`.
    pub quarter_period: f64,
    /// `|K′ − (1+k₁′)K₁′| / K′`.
    pub quarter_period_prime: f64,
    /// `|q₁′ − (q′)²| / (q′)²`.
    pub nome: f64,
    /// `|2k₁K₁′√R₁ − 2K′√R| / (2K′√R)`.
    pub imaginary_period: f64,
    /// `|T₁ − T| / T`.
    pub period: f64,
}

impl Step4 {
    pub fn new(k1: f64, r1: f64) -> Result<Self> {
        let revolution = PendulumParams::circulatory(k1, r1)?;
        let k1_prime = revolution.constants().expect("revolution").k_prime();
        let modulus = descend_modulus(k1_prime)?;
        Ok(Self {
            oscillation: PendulumParams::oscillatory_with(modulus, modulus.k * r1)?,
            revolution,
        })
    }

    /// `|θ(t) − θ₁(t) + θ₁(t − T₁/2)|`.
    pub fn residual(&self, t: f64) -> f64 {
        let half = 0.5 * self.revolution.period().expect("revolution has a period");
        (self.oscillation.theta(t) - self.revolution.theta(t) + self.revolution.theta(t - half)).abs()
    }

    pub fn relations(&self) -> Step4Relations {
        let osc = self.oscillation.constants().expect("oscillation");
        let rev = self.revolution.constants().expect("revolution");
        let (r, r1) = (self.oscillation.r(), self.revolution.r());
        let k1 = rev.k();
        let k1_prime = rev.k_prime();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        let q_sq = osc.nome_prime * osc.nome_prime;
        let big = 2.0 * osc.quarter_period_prime * r.sqrt();
        Step4Relations {
            quarter_period: rel(0.5 * (1.0 + k1_prime) * rev.quarter_period, osc.quarter_period),
            quarter_period_prime: rel((1.0 + k1_prime) * rev.quarter_period_prime, osc.quarter_period_prime),
            nome: rel(rev.nome_prime, q_sq),
            imaginary_period: rel(2.0 * k1 * rev.quarter_period_prime * r1.sqrt(), big),
            period: rel(
                self.revolution.period().expect("revolution"),
                self.oscillation.period().expect("oscillation"),
            ),
        }
    }
}

/// Residual of the counter-running decomposition at time `t`.
pub fn step4_residual(t: f64, k1: f64, r1: f64) -> Result<f64> {
    Ok(Step4::new(k1, r1)?.residual(t))
}

pub fn step4_relations(k1: f64, r1: f64) -> Result<Step4Relations> {
    Ok(Step4::new(k1, r1)?.relations())
}
