//! Arithmetic-geometric mean, complete elliptic integrals of the first kind
//! and the nomes attached to a modulus.
//!
//! `K = π / (2·M(1, k′))` and `K′ = π / (2·M(1, k))`, where `M` is the
//! arithmetic-geometric mean. The nome is `q = exp(−π·K′/K)` and the
//! complementary nome is `q′ = exp(−π·K/K′)`, so that `ln q · ln q′ = π²`.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Hard cap on AGM iterations. Convergence is quadratic, so this is never
/// reached for finite positive inputs.
pub const AGM_MAX_ITER: usize = 32;

/// Smallest admissible value of `min(k, k′)` for [`elliptic_constants`].
pub const MODULUS_MARGIN: f64 = 1e-8;

/// Elliptic modulus together with its complement, `k² + k′² = 1`.
///
/// Both members are stored so that a modulus close to 1 keeps full relative
/// precision in `k′` (and vice versa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    pub k: f64,
    pub k_prime: f64,
}

fn complement(x: f64) -> f64 {
    ((1.0 - x) * (1.0 + x)).sqrt()
}

impl Modulus {
    /// Builds the modulus from `k`, with `k′ = √((1−k)(1+k))`.
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(domain(format!("modulus k = {k} must lie in (0, 1)")));
        }
        Ok(Self {
            k,
            k_prime: complement(k),
        })
    }

    /// Builds the modulus from its complement `k′`.
    pub fn from_complementary(k_prime: f64) -> Result<Self> {
        Self::new(k_prime).map(Self::swapped)
    }

    /// Builds the modulus from an already accurate pair.
    pub fn from_pair(k: f64, k_prime: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0 && k_prime > 0.0 && k_prime < 1.0) {
            return Err(domain(format!(
                "modulus pair ({k}, {k_prime}) must lie in (0, 1)²"
            )));
        }
        let defect = k * k + k_prime * k_prime - 1.0;
        if defect.abs() > 1e-14 {
            return Err(domain(format!(
                "k² + k′² − 1 = {defect:e} for pair ({k}, {k_prime})"
            )));
        }
        Ok(Self { k, k_prime })
    }

    /// The complementary modulus `(k′, k)`.
    pub fn swapped(self) -> Self {
        Self {
            k: self.k_prime,
            k_prime: self.k,
        }
    }
}

/// Outcome of the arithmetic-geometric mean iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Agm {
    pub limit: f64,
    /// Arithmetic iterates `a_0, a_1, …`.
    pub a_seq: Vec<f64>,
    /// Geometric iterates `b_0, b_1, …`.
    pub b_seq: Vec<f64>,
}

impl Agm {
    pub fn iterations(&self) -> usize {
        self.a_seq.len() - 1
    }
}

fn check_agm_inputs(a0: f64, b0: f64) -> Result<()> {
    if !(a0 > 0.0 && b0 > 0.0 && a0.is_finite() && b0.is_finite()) {
        return Err(domain(format!(
            "agm requires finite positive inputs, got ({a0}, {b0})"
        )));
    }
    Ok(())
}

/// Arithmetic-geometric mean `M(a0, b0)`.
///
/// Iterates `a ← (a+b)/2`, `b ← √(ab)` until `|a − b| ≤ 4·ε·max(a0, b0)`.
/// A zero argument is rejected rather than returned as the limit 0.
pub fn agm(a0: f64, b0: f64) -> Result<Agm> {
    check_agm_inputs(a0, b0)?;
    let scale = a0.max(b0);
    let mut a_seq = vec![a0];
    let mut b_seq = vec![b0];
    let (mut a, mut b) = (a0, b0);
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 4.0 * f64::EPSILON * scale {
            break;
        }
        let next_a = 0.5 * (a + b);
        // Rounding must not let the geometric mean overtake the arithmetic one.
        b = (a * b).sqrt().clamp(a.min(b), next_a);
        a = next_a;
        a_seq.push(a);
        b_seq.push(b);
    }
    Ok(Agm {
        limit: 0.5 * (a + b),
        a_seq,
        b_seq,
    })
}

/// Exactly `n` AGM steps, returning `n + 1` iterates of each sequence.
///
/// Unlike [`agm`] the iteration does not stop at convergence; the Landen
/// chain needs the sequences indexed up to its own depth.
pub fn agm_sequence(a0: f64, b0: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_agm_inputs(a0, b0)?;
    let mut a_seq = Vec::with_capacity(n + 1);
    let mut b_seq = Vec::with_capacity(n + 1);
    let (mut a, mut b) = (a0, b0);
    a_seq.push(a);
    b_seq.push(b);
    for _ in 0..n {
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
        a_seq.push(a);
        b_seq.push(b);
    }
    Ok((a_seq, b_seq))
}

/// `K` for the modulus whose complement is `k_prime`, i.e. `π / (2·M(1, k′))`.
///
/// Valid for any `k′ ∈ (0, 1]`; no margin is enforced here.
pub fn quarter_period_from_complement(k_prime: f64) -> Result<f64> {
    Ok(PI / (2.0 * agm(1.0, k_prime)?.limit))
}

/// Quarter periods and nomes of a modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticConstants {
    pub modulus: Modulus,
    /// `K`, the real quarter period.
    pub quarter_period: f64,
    /// `K′`, the quarter period of the complementary modulus.
    pub quarter_period_prime: f64,
    /// `q = exp(−π·K′/K)`.
    pub nome: f64,
    /// `q′ = exp(−π·K/K′)`.
    pub nome_prime: f64,
}

impl EllipticConstants {
    /// Constants of the complementary modulus; every pair is swapped exactly.
    pub fn complementary(&self) -> Self {
        Self {
            modulus: self.modulus.swapped(),
            quarter_period: self.quarter_period_prime,
            quarter_period_prime: self.quarter_period,
            nome: self.nome_prime,
            nome_prime: self.nome,
        }
    }

    pub fn k(&self) -> f64 {
        self.modulus.k
    }

    pub fn k_prime(&self) -> f64 {
        self.modulus.k_prime
    }
}

/// `K`, `K′`, `q`, `q′` through Gauss's AGM identity.
///
/// Rejects moduli with `min(k, k′) < 1e−8`, where one of the quarter periods
/// runs off to infinity.
pub fn elliptic_constants(modulus: Modulus) -> Result<EllipticConstants> {
    let Modulus { k, k_prime } = modulus;
    if k.min(k_prime) < MODULUS_MARGIN {
        return Err(domain(format!(
            "modulus (k = {k}, k′ = {k_prime}) too close to 0 or 1 for finite K, K′"
        )));
    }
    let quarter_period = quarter_period_from_complement(k_prime)?;
    let quarter_period_prime = quarter_period_from_complement(k)?;
    Ok(EllipticConstants {
        modulus,
        quarter_period,
        quarter_period_prime,
        nome: (-PI * quarter_period_prime / quarter_period).exp(),
        nome_prime: (-PI * quarter_period / quarter_period_prime).exp(),
    })
}

/// Shorthand for `elliptic_constants(Modulus::new(k)?)`.
pub fn constants_for(k: f64) -> Result<EllipticConstants> {
    elliptic_constants(Modulus::new(k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::quad_k;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn grid() -> impl Iterator<Item = f64> {
        (1..=19).map(|i| i as f64 * 0.05)
    }

    #[test]
    fn agm_of_equal_arguments() {
        let r = agm(3.5, 3.5).unwrap();
        assert_eq!(r.limit, 3.5);
        assert_eq!(r.iterations(), 0);
    }

    #[test]
    fn agm_rejects_zero_and_negative() {
        assert!(matches!(agm(1.0, 0.0), Err(crate::Error::Domain(_))));
        assert!(matches!(agm(-1.0, 2.0), Err(crate::Error::Domain(_))));
        assert!(agm(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn agm_matches_quadrature_at_k_08() {
        // M(1, k′) = π / (2K(k)) with k′ = 0.6, k = 0.8.
        let oracle = PI / (2.0 * quad_k(0.8).unwrap());
        let m = agm(1.0, 0.6).unwrap();
        assert!((m.limit - oracle).abs() <= 1e-14, "{} vs {}", m.limit, oracle);
        assert!((m.limit - 0.78724).abs() < 1e-5);
        let last = m.a_seq.len() - 1;
        assert!((m.a_seq[last] - m.b_seq[last]).abs() <= 1e-15);
    }

    #[test]
    fn agm_iteration_count_is_small() {
        let values = [1e-6, 1e-3, 0.5, 1.0, 7.0, 1e3, 1e6];
        for &a in &values {
            for &b in &values {
                let r = agm(a, b).unwrap();
                assert!(r.iterations() <= 10, "agm({a}, {b}) took {}", r.iterations());
            }
        }
    }

    #[test]
    fn agm_sequences_bracket_monotonically() {
        let r = agm(5.0, 0.2).unwrap();
        for n in 0..r.iterations() {
            let (a, b) = (r.a_seq[n], r.b_seq[n]);
            let (a1, b1) = (r.a_seq[n + 1], r.b_seq[n + 1]);
            assert!(b <= b1 && b1 <= a1 && a1 <= a, "step {n}");
        }
    }

    #[test]
    fn agm_sequence_runs_fixed_length() {
        let (a, b) = agm_sequence(2.0, 1.0, 12).unwrap();
        assert_eq!(a.len(), 13);
        assert_eq!(b.len(), 13);
        assert!((a[12] - agm(2.0, 1.0).unwrap().limit).abs() < 1e-15);
    }

    #[test]
    fn modulus_construction() {
        let m = Modulus::new(0.6).unwrap();
        assert!((m.k_prime - 0.8).abs() < 1e-16);
        let c = Modulus::from_complementary(0.6).unwrap();
        assert_eq!(c.k_prime, 0.6);
        assert!((c.k - 0.8).abs() < 1e-16);
        assert!(Modulus::new(0.0).is_err());
        assert!(Modulus::new(1.0).is_err());
        assert!(Modulus::from_pair(0.6, 0.7).is_err());
        let near_one = Modulus::new(1.0 - 1e-10).unwrap();
        assert!((near_one.k_prime - (2e-10f64).sqrt()).abs() < 1e-6 * near_one.k_prime);
    }

    #[test]
    fn small_modulus_limit() {
        let c = elliptic_constants(Modulus::new(1e-8).unwrap()).unwrap();
        assert!((c.quarter_period - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn self_complementary_modulus() {
        let c = constants_for(FRAC_1_SQRT_2).unwrap();
        assert!((c.quarter_period - c.quarter_period_prime).abs() < 1e-15);
        assert!((c.nome - (-PI).exp()).abs() < 1e-15);
        assert!((c.nome_prime - 0.0432139).abs() < 1e-7);
    }

    #[test]
    fn constants_at_k_08_match_quadrature() {
        let c = constants_for(0.8).unwrap();
        let kk = quad_k(0.8).unwrap();
        let kk_prime = quad_k(0.6).unwrap();
        assert!((c.quarter_period / kk - 1.0).abs() <= 1e-12);
        assert!((c.quarter_period_prime / kk_prime - 1.0).abs() <= 1e-12);
        assert!((c.quarter_period - 1.9953028).abs() < 1e-7);
        assert!((c.quarter_period_prime - 1.7507538).abs() < 1e-7);
    }

    #[test]
    fn domain_edges() {
        assert!(constants_for(1e-9).is_err());
        assert!(elliptic_constants(Modulus::from_complementary(1e-9).unwrap()).is_err());
        assert!(constants_for(1.0 - 1e-10).is_ok());
    }

    #[test]
    fn grid_invariants() {
        for k in grid() {
            let c = constants_for(k).unwrap();
            let ck = constants_for(c.k_prime()).unwrap();
            assert!((c.quarter_period_prime / ck.quarter_period - 1.0).abs() <= 1e-13);
            assert!((c.quarter_period / quad_k(k).unwrap() - 1.0).abs() <= 1e-12);
            assert!((c.nome.ln() * c.nome_prime.ln() - PI * PI).abs() <= 1e-10);
            assert!(c.nome > 0.0 && c.nome < 1.0 && c.nome_prime > 0.0 && c.nome_prime < 1.0);
            let m = c.modulus;
            assert!((m.k * m.k + m.k_prime * m.k_prime - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn complementary_constants_swap_exactly() {
        let c = constants_for(0.3).unwrap();
        let s = c.complementary();
        assert_eq!(s.complementary(), c);
        assert_eq!(s.nome, c.nome_prime);
        assert_eq!(s.modulus.k, c.modulus.k_prime);
    }
}
