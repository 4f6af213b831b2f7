//! Closed-form motions of `φ̈ = −sin(φ)/R`, `R = l/g`, with `φ(0) = 0`.
//!
//! `φ` is measured from the descending vertical and `θ = π + φ` from the
//! ascending one. Mass cancels from the equation and is taken as 1.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::agm::{elliptic_constants, EllipticConstants, Modulus};
use crate::error::{domain, Error, Result};
use crate::jacobi::JacobiKernel;

/// `|√R·φ̇(0)/2 − 1|` below which a motion is treated as the separatrix.
pub const SEPARATRIX_BAND: f64 = 8.0 * f64::EPSILON;

/// Energy regime of a motion starting at the bottom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    StableEquilibrium,
    UnstableEquilibrium,
    /// Swings with amplitude `α`, `k = sin(α/2)`.
    Oscillatory { k: f64 },
    /// Doubly asymptotic motion; `sign` is the direction of travel.
    Separatrix { sign: i8 },
    /// Full revolutions, `k = 2/(√R·φ̇(0))`.
    Circulatory { k: f64 },
}

/// Classifies the motion with `φ(0) = 0` and `φ̇(0) = phidot0 ≥ 0`.
pub fn classify(phidot0: f64, r: f64) -> Result<Regime> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("R must be positive, got {r}")));
    }
    if !(phidot0 >= 0.0 && phidot0.is_finite()) {
        return Err(domain(format!(
            "initial angular velocity must be finite and ≥ 0, got {phidot0}"
        )));
    }
    if phidot0 == 0.0 {
        return Ok(Regime::StableEquilibrium);
    }
    let s = r.sqrt() * phidot0 / 2.0;
    Ok(if (s - 1.0).abs() <= SEPARATRIX_BAND {
        Regime::Separatrix { sign: 1 }
    } else if s < 1.0 {
        Regime::Oscillatory { k: s }
    } else {
        Regime::Circulatory { k: 1.0 / s }
    })
}

/// A fully specified motion.
#[derive(Debug, Clone, PartialEq)]
pub struct PendulumParams {
    r: f64,
    regime: Regime,
    constants: Option<EllipticConstants>,
    kernel: Option<JacobiKernel>,
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("R must be positive, got {r}")))
    }
}

impl PendulumParams {
    fn elliptic(r: f64, modulus: Modulus, circulatory: bool) -> Result<Self> {
        check_r(r)?;
        let constants = elliptic_constants(modulus)?;
        let regime = if circulatory {
            Regime::Circulatory { k: modulus.k }
        } else {
            Regime::Oscillatory { k: modulus.k }
        };
        Ok(Self {
            r,
            regime,
            constants: Some(constants),
            kernel: Some(JacobiKernel::new(modulus)?),
        })
    }

    fn trivial(r: f64, regime: Regime) -> Result<Self> {
        check_r(r)?;
        Ok(Self {
            r,
            regime,
            constants: None,
            kernel: None,
        })
    }

    pub fn oscillatory(k: f64, r: f64) -> Result<Self> {
        Self::elliptic(r, Modulus::new(k)?, false)
    }

    pub fn circulatory(k: f64, r: f64) -> Result<Self> {
        Self::elliptic(r, Modulus::new(k)?, true)
    }

    /// Oscillation whose modulus pair is already known accurately.
    pub fn oscillatory_with(modulus: Modulus, r: f64) -> Result<Self> {
        Self::elliptic(r, modulus, false)
    }

    pub fn circulatory_with(modulus: Modulus, r: f64) -> Result<Self> {
        Self::elliptic(r, modulus, true)
    }

    pub fn separatrix(sign: i8, r: f64) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(domain(format!("separatrix sign must be ±1, got {sign}")));
        }
        Self::trivial(r, Regime::Separatrix { sign })
    }

    pub fn stable_equilibrium(r: f64) -> Result<Self> {
        Self::trivial(r, Regime::StableEquilibrium)
    }

    pub fn unstable_equilibrium(r: f64) -> Result<Self> {
        Self::trivial(r, Regime::UnstableEquilibrium)
    }

    pub fn from_initial_velocity(phidot0: f64, r: f64) -> Result<Self> {
        match classify(phidot0, r)? {
            Regime::Oscillatory { k } => Self::oscillatory(k, r),
            Regime::Circulatory { k } => Self::circulatory(k, r),
            regime => Self::trivial(r, regime),
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `K, K′, q, q′` of the motion's modulus, absent for equilibria and the separatrix.
    pub fn constants(&self) -> Option<&EllipticConstants> {
        self.constants.as_ref()
    }

    fn elliptic_parts(&self) -> Option<(&EllipticConstants, &JacobiKernel)> {
        self.constants.as_ref().zip(self.kernel.as_ref())
    }

    /// `φ̇(0)`.
    pub fn initial_velocity(&self) -> f64 {
        let root = self.r.sqrt();
        match self.regime {
            Regime::StableEquilibrium | Regime::UnstableEquilibrium => 0.0,
            Regime::Oscillatory { k } => 2.0 * k / root,
            Regime::Circulatory { k } => 2.0 / (k * root),
            Regime::Separatrix { sign } => f64::from(sign) * 2.0 / root,
        }
    }

    /// Angle from the descending vertical, continuous in `t`.
    pub fn phi(&self, t: f64) -> f64 {
        let root = self.r.sqrt();
        match (self.regime, self.elliptic_parts()) {
            (Regime::StableEquilibrium, _) => 0.0,
            (Regime::UnstableEquilibrium, _) => PI,
            (Regime::Separatrix { sign }, _) => {
                4.0 * (f64::from(sign) * t / root).exp().atan() - PI
            }
            (Regime::Oscillatory { k }, Some((_, kern))) => {
                let j = kern.eval(t / root);
                // dn ≥ k′ > 0 keeps φ/2 inside (−π/2, π/2).
                2.0 * (k * j.sn).atan2(j.dn)
            }
            (Regime::Circulatory { k }, Some((_, kern))) => 2.0 * kern.amplitude(t / (k * root)),
            _ => unreachable!("elliptic regimes always carry constants"),
        }
    }

    /// `θ = π + φ`, the angle from the ascending vertical.
    pub fn theta(&self, t: f64) -> f64 {
        PI + self.phi(t)
    }

    /// `φ̇(t)`.
    pub fn phidot(&self, t: f64) -> f64 {
        let root = self.r.sqrt();
        match (self.regime, self.elliptic_parts()) {
            (Regime::StableEquilibrium | Regime::UnstableEquilibrium, _) => 0.0,
            (Regime::Separatrix { sign }, _) => {
                f64::from(sign) * 2.0 / (root * (t / root).cosh())
            }
            (Regime::Oscillatory { k }, Some((_, kern))) => 2.0 * k * kern.eval(t / root).cn / root,
            (Regime::Circulatory { k }, Some((_, kern))) => {
                2.0 * kern.eval(t / (k * root)).dn / (k * root)
            }
            _ => unreachable!("elliptic regimes always carry constants"),
        }
    }

    /// `T = 4K√R` for oscillations, `T = 2kK√R` for revolutions.
    pub fn period(&self) -> Result<f64> {
        let root = self.r.sqrt();
        match (self.regime, &self.constants) {
            (Regime::Oscillatory { .. }, Some(c)) => Ok(4.0 * c.quarter_period * root),
            (Regime::Circulatory { k }, Some(c)) => Ok(2.0 * k * c.quarter_period * root),
            (regime, _) => Err(domain(format!("{regime:?} is not periodic"))),
        }
    }

    /// Largest deflection `α = 2·arcsin k` of an oscillation.
    pub fn max_angle(&self) -> Result<f64> {
        match (self.regime, &self.constants) {
            (Regime::Oscillatory { .. }, Some(c)) => Ok(2.0 * c.k().atan2(c.k_prime())),
            (regime, _) => Err(domain(format!("{regime:?} has no turning point"))),
        }
    }

    /// The motion obtained by reversing gravity at the turning point: an
    /// oscillation of modulus `k′` and the same `R`, period `4K′√R`.
    pub fn complementary(&self) -> Result<Self> {
        match (self.regime, &self.constants, &self.kernel) {
            (Regime::Oscillatory { .. }, Some(c), Some(_)) => {
                let constants = c.complementary();
                Ok(Self {
                    r: self.r,
                    regime: Regime::Oscillatory { k: constants.k() },
                    constants: Some(constants),
                    kernel: Some(JacobiKernel::new(constants.modulus)?),
                })
            }
            (regime, ..) => Err(domain(format!(
                "complementary motion needs an oscillation, got {regime:?}"
            ))),
        }
    }

    /// Closed-form samples at the given strictly increasing times.
    pub fn sample(&self, times: &[f64]) -> Result<Trajectory> {
        Trajectory::new(
            times.to_vec(),
            times.iter().map(|&t| self.theta(t)).collect(),
            Some(times.iter().map(|&t| self.phidot(t)).collect()),
            Method::Closed,
        )
    }
}

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Closed,
    Series,
    Ode,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Closed => "closed",
            Method::Series => "series",
            Method::Ode => "ode",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "series" => Ok(Method::Series),
            "ode" => Ok(Method::Ode),
            other => Err(domain(format!("unknown method `{other}`"))),
        }
    }
}

/// Sampled `θ(t)`, unwrapped.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub theta: Vec<f64>,
    pub angular_velocity: Option<Vec<f64>>,
    pub method: Method,
}

impl Trajectory {
    pub fn new(
        times: Vec<f64>,
        theta: Vec<f64>,
        angular_velocity: Option<Vec<f64>>,
        method: Method,
    ) -> Result<Self> {
        if times.len() != theta.len()
            || angular_velocity
                .as_ref()
                .is_some_and(|w| w.len() != times.len())
        {
            return Err(domain("trajectory columns differ in length"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain("trajectory times must be strictly increasing"));
        }
        Ok(Self {
            times,
            theta,
            angular_velocity,
            method,
        })
    }

    /// `φ = θ − π` at every sample.
    pub fn phi(&self) -> impl Iterator<Item = f64> + '_ {
        self.theta.iter().map(|th| th - PI)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{energy, quad_k};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn classification() {
        assert_eq!(classify(0.0, 2.0).unwrap(), Regime::StableEquilibrium);
        for r in [1.0, 2.0, 0.3, 7.5] {
            assert_eq!(classify(2.0 / f64::sqrt(r), r).unwrap(), Regime::Separatrix { sign: 1 });
        }
        assert_eq!(classify(1.2, 1.0).unwrap(), Regime::Oscillatory { k: 0.6 });
        assert_eq!(classify(2.5, 1.0).unwrap(), Regime::Circulatory { k: 0.8 });
        assert!(classify(-1.0, 1.0).is_err());
        assert!(classify(1.0, 0.0).is_err());
    }

    #[test]
    fn phi_starts_at_zero_in_every_regime() {
        let all = [
            PendulumParams::stable_equilibrium(1.0).unwrap(),
            PendulumParams::separatrix(1, 2.0).unwrap(),
            PendulumParams::separatrix(-1, 2.0).unwrap(),
            PendulumParams::oscillatory(0.6, 1.5).unwrap(),
            PendulumParams::circulatory(0.3, 0.5).unwrap(),
        ];
        for p in &all {
            assert_eq!(p.phi(0.0), 0.0, "{:?}", p.regime());
        }
        assert_eq!(PendulumParams::unstable_equilibrium(1.0).unwrap().phi(3.0), PI);
    }

    #[test]
    fn separatrix_limits() {
        let p = PendulumParams::separatrix(1, 1.0).unwrap();
        assert!((p.phi(40.0) - PI).abs() < 1e-15);
        assert!((p.phi(-40.0) + PI).abs() < 1e-15);
        let m = PendulumParams::separatrix(-1, 1.0).unwrap();
        assert!((m.phi(40.0) + PI).abs() < 1e-15);
        assert!(p.period().is_err());
    }

    #[test]
    fn turning_point_of_oscillation() {
        let p = PendulumParams::oscillatory(0.6, 1.0).unwrap();
        let kk = p.constants().unwrap().quarter_period;
        let alpha = 2.0 * 0.6f64.asin();
        assert!((p.phi(kk) - alpha).abs() < 1e-15);
        assert!((p.max_angle().unwrap() - alpha).abs() < 1e-15);
        assert!(p.phidot(kk).abs() < 1e-15);
    }

    #[test]
    fn periods() {
        let tiny = PendulumParams::oscillatory(1e-8, 2.0).unwrap();
        assert!((tiny.period().unwrap() - 2.0 * PI * 2f64.sqrt()).abs() < 1e-14);
        let kk = quad_k(0.8).unwrap();
        let osc = PendulumParams::oscillatory(0.8, 1.0).unwrap();
        assert!((osc.period().unwrap() - 4.0 * kk).abs() < 1e-12);
        assert!((osc.period().unwrap() - 7.9812111).abs() < 1e-7);
        let circ = PendulumParams::circulatory(0.8, 1.0).unwrap();
        assert!((circ.period().unwrap() - 2.0 * 0.8 * kk).abs() < 1e-12);
        assert!((circ.period().unwrap() - 3.1924844).abs() < 1e-7);
    }

    #[test]
    fn complementary_motion() {
        let p = PendulumParams::oscillatory(0.8, 2.0).unwrap();
        let c = p.complementary().unwrap();
        assert!(matches!(c.regime(), Regime::Oscillatory { k } if (k - 0.6).abs() < 1e-15));
        assert_eq!(c.r(), 2.0);
        let kk_prime = quad_k(0.6).unwrap();
        assert!((c.period().unwrap() - 4.0 * kk_prime * 2f64.sqrt()).abs() < 1e-12);
        let sum = p.max_angle().unwrap() + c.max_angle().unwrap();
        assert!((sum - PI).abs() < 1e-15);
        assert_eq!(c.complementary().unwrap(), p);

        let s = PendulumParams::oscillatory(FRAC_1_SQRT_2, 1.0).unwrap();
        let sc = s.complementary().unwrap();
        assert!((sc.period().unwrap() - s.period().unwrap()).abs() < 1e-14);
        assert!(PendulumParams::circulatory(0.5, 1.0).unwrap().complementary().is_err());
    }

    #[test]
    fn ode_residual_and_energy() {
        let h = 1e-4;
        let cases = [
            PendulumParams::oscillatory(0.3, 1.0).unwrap(),
            PendulumParams::oscillatory(0.9, 2.0).unwrap(),
            PendulumParams::circulatory(0.6, 1.0).unwrap(),
            PendulumParams::circulatory(0.95, 0.5).unwrap(),
            PendulumParams::separatrix(1, 1.0).unwrap(),
        ];
        for p in &cases {
            let r = p.r();
            let span = p.period().unwrap_or(10.0 * r.sqrt());
            let e0 = energy(0.0, p.initial_velocity(), r);
            for i in 0..200 {
                let t = -0.5 * span + span * i as f64 / 199.0;
                let acc = (p.phi(t + h) - 2.0 * p.phi(t) + p.phi(t - h)) / (h * h);
                assert!((acc + p.phi(t).sin() / r).abs() <= 1e-5, "{:?} t={t}", p.regime());
                let e = energy(p.phi(t), p.phidot(t), r);
                assert!((e - e0).abs() <= 1e-8 * e0, "{:?} t={t}", p.regime());
            }
        }
    }

    #[test]
    fn periodicity() {
        let osc = PendulumParams::oscillatory(0.7, 1.3).unwrap();
        let circ = PendulumParams::circulatory(0.7, 1.3).unwrap();
        let (to, tc) = (osc.period().unwrap(), circ.period().unwrap());
        for i in 0..50 {
            let t = -3.0 + 0.13 * i as f64;
            assert!((osc.phi(t + to) - osc.phi(t)).abs() <= 1e-10);
            assert!((circ.phi(t + tc) - circ.phi(t) - 2.0 * PI).abs() <= 1e-10);
        }
    }

    #[test]
    fn circulatory_angle_is_increasing() {
        let p = PendulumParams::circulatory(0.99, 1.0).unwrap();
        let mut last = p.phi(-10.0);
        for i in 1..2000 {
            let now = p.phi(-10.0 + 0.01 * i as f64);
            assert!(now > last);
            last = now;
        }
    }

    #[test]
    fn trajectory_validation() {
        assert!(Trajectory::new(vec![0.0, 1.0], vec![0.0], None, Method::Closed).is_err());
        assert!(Trajectory::new(vec![1.0, 1.0], vec![0.0, 0.0], None, Method::Closed).is_err());
        let p = PendulumParams::oscillatory(0.5, 1.0).unwrap();
        let tr = p.sample(&[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(tr.theta[0], PI);
        assert_eq!(tr.phi().next(), Some(0.0));
        assert_eq!("series".parse::<Method>().unwrap(), Method::Series);
        assert!("rk4".parse::<Method>().is_err());
    }
}
