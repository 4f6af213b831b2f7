//! Independent reference computations.
//!
//! Nothing here calls into the AGM, Jacobi, series or product code: the
//! complete elliptic integral is done by composite Gauss-Legendre
//! quadrature and every motion by classical fourth-order Runge-Kutta.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Error, Result};
use crate::pendulum::{Method, Trajectory};

const GAUSS_POINTS: usize = 10;
const QUAD_MAX_ROUNDS: u32 = 20;
const QUAD_REL_TOL: f64 = 1e-13;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_{n−1}(x).
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature of `f` over `[a, b]`, bisecting every
/// panel until two successive estimates agree to `1e−13` relative.
pub fn integrate_smooth<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(GAUSS_POINTS);
    let composite = |panels: usize| -> f64 {
        let width = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            let half = 0.5 * width;
            let mut s = 0.0;
            for (x, w) in nodes.iter().zip(&weights) {
                s += w * f(mid + half * x);
            }
            total += s * half;
        }
        total
    };
    let mut previous = composite(1);
    for round in 1..=QUAD_MAX_ROUNDS {
        let current = composite(1 << round);
        if (current - previous).abs() <= QUAD_REL_TOL * current.abs() {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::Resource(format!(
        "quadrature did not settle after {QUAD_MAX_ROUNDS} bisections"
    )))
}

/// `K(k) = ∫₀¹ dx/√((1−x²)(1−k²x²))`, computed after `x = sin φ` as
/// `∫₀^{π/2} dφ/√(1−k² sin² φ)`.
pub fn quad_k(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(domain(format!("quad_k needs 0 < k < 1, got {k}")));
    }
    let k2 = k * k;
    integrate_smooth(
        |phi| {
            let s = phi.sin();
            1.0 / (1.0 - k2 * s * s).sqrt()
        },
        0.0,
        FRAC_PI_2,
    )
}

/// `K′(k) = K(k′)` with `k′ = √((1−k)(1+k))`.
pub fn quad_k_complementary(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(domain(format!("quad_k_complementary needs 0 < k < 1, got {k}")));
    }
    quad_k(((1.0 - k) * (1.0 + k)).sqrt())
}

/// `∫₀^{π/2} dφ/√(a² cos² φ + b² sin² φ)`, which equals `π/(2·M(a, b))`.
pub fn quad_agm_integral(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(format!("need positive a, b, got ({a}, {b})")));
    }
    integrate_smooth(
        |phi| {
            let (s, c) = phi.sin_cos();
            1.0 / (a * a * c * c + b * b * s * s).sqrt()
        },
        0.0,
        FRAC_PI_2,
    )
}

/// Fixed-step settings for the Runge-Kutta oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Largest step in seconds; each interval is split into equal steps no longer than this.
    pub step: f64,
    pub max_steps: u64,
}

impl IntegratorConfig {
    pub const MAX_STEPS_CAP: u64 = 100_000_000;

    pub fn new(step: f64, max_steps: u64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(domain(format!("integrator step must be positive, got {step}")));
        }
        if max_steps == 0 || max_steps > Self::MAX_STEPS_CAP {
            return Err(domain(format!("max_steps = {max_steps} outside [1, 1e8]")));
        }
        Ok(Self { step, max_steps })
    }

    /// `divisions` steps per `period`.
    pub fn per_period(period: f64, divisions: u32) -> Result<Self> {
        Self::new(period / divisions as f64, Self::MAX_STEPS_CAP)
    }
}

type State = [f64; 2];

fn rk4_step(state: State, h: f64, inv_r: f64) -> State {
    let f = |s: State| -> State { [s[1], -s[0].sin() * inv_r] };
    let k1 = f(state);
    let k2 = f([state[0] + 0.5 * h * k1[0], state[1] + 0.5 * h * k1[1]]);
    let k3 = f([state[0] + 0.5 * h * k2[0], state[1] + 0.5 * h * k2[1]]);
    let k4 = f([state[0] + h * k3[0], state[1] + h * k3[1]]);
    [
        state[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        state[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

fn check_motion_inputs(phidot0: f64, r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("R must be positive, got {r}")));
    }
    if !phidot0.is_finite() {
        return Err(domain("initial angular velocity must be finite"));
    }
    Ok(())
}

/// Integrates `φ̈ = −sin(φ)/R` from `φ(0) = 0`, `φ̇(0) = phidot0` up to
/// `t_end`, recording every step.
pub fn integrate(phidot0: f64, r: f64, t_end: f64, config: IntegratorConfig) -> Result<Trajectory> {
    check_motion_inputs(phidot0, r)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(domain(format!("t_end must be positive, got {t_end}")));
    }
    let steps = (t_end / config.step).ceil().max(1.0);
    if steps > config.max_steps as f64 {
        return Err(Error::Resource(format!(
            "{steps} steps needed, max_steps = {}",
            config.max_steps
        )));
    }
    let steps = steps as usize;
    let h = t_end / steps as f64;
    let inv_r = 1.0 / r;
    let mut times = Vec::with_capacity(steps + 1);
    let mut theta = Vec::with_capacity(steps + 1);
    let mut omega = Vec::with_capacity(steps + 1);
    let mut state = [0.0, phidot0];
    times.push(0.0);
    theta.push(PI + state[0]);
    omega.push(state[1]);
    for i in 1..=steps {
        state = rk4_step(state, h, inv_r);
        times.push(i as f64 * h);
        theta.push(PI + state[0]);
        omega.push(state[1]);
    }
    Ok(Trajectory {
        times,
        theta,
        angular_velocity: Some(omega),
        method: Method::Ode,
    })
}

/// Like [`integrate`] but lands exactly on each of the strictly increasing
/// `times`, which may be negative (integrated backwards from 0).
pub fn integrate_at(
    phidot0: f64,
    r: f64,
    times: &[f64],
    config: IntegratorConfig,
) -> Result<Trajectory> {
    check_motion_inputs(phidot0, r)?;
    if times.windows(2).any(|w| w[0] >= w[1]) || times.iter().any(|t| !t.is_finite()) {
        return Err(domain("sample times must be finite and strictly increasing"));
    }
    let inv_r = 1.0 / r;
    let mut theta = vec![0.0; times.len()];
    let mut omega = vec![0.0; times.len()];
    let mut budget = config.max_steps;
    let split = times.partition_point(|&t| t < 0.0);

    let mut march = |indices: &mut dyn Iterator<Item = usize>| -> Result<()> {
        let mut state = [0.0, phidot0];
        let mut now = 0.0;
        for i in indices {
            let span = times[i] - now;
            let steps = (span.abs() / config.step).ceil();
            if steps > budget as f64 {
                return Err(Error::Resource(format!(
                    "integration exceeded max_steps = {}",
                    config.max_steps
                )));
            }
            let steps = steps as u64;
            budget -= steps;
            if steps > 0 {
                let h = span / steps as f64;
                for _ in 0..steps {
                    state = rk4_step(state, h, inv_r);
                }
            }
            now = times[i];
            theta[i] = PI + state[0];
            omega[i] = state[1];
        }
        Ok(())
    };
    march(&mut (0..split).rev())?;
    march(&mut (split..times.len()))?;

    Ok(Trajectory {
        times: times.to_vec(),
        theta,
        angular_velocity: Some(omega),
        method: Method::Ode,
    })
}

/// `(sn, cn, dn)(u, k)` by integrating `sn′ = cn·dn`, `cn′ = −sn·dn`,
/// `dn′ = −k²·sn·cn` from `(0, 1, 1)` with steps no longer than `step`.
pub fn jacobi_ode(u: f64, k: f64, step: f64) -> (f64, f64, f64) {
    let k2 = k * k;
    let f = |s: [f64; 3]| [s[1] * s[2], -s[0] * s[2], -k2 * s[0] * s[1]];
    let n = (u.abs() / step).ceil().max(1.0) as usize;
    let h = u / n as f64;
    let mut s = [0.0, 1.0, 1.0];
    for _ in 0..n {
        let k1 = f(s);
        let k2v = f(std::array::from_fn(|i| s[i] + 0.5 * h * k1[i]));
        let k3 = f(std::array::from_fn(|i| s[i] + 0.5 * h * k2v[i]));
        let k4 = f(std::array::from_fn(|i| s[i] + h * k3[i]));
        s = std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2v[i] + 2.0 * k3[i] + k4[i]));
    }
    (s[0], s[1], s[2])
}

/// `am(u, k)` by integrating `d(am)/du = √(1 − k² sin² am)` from 0.
pub fn amplitude_ode(u: f64, k: f64, step: f64) -> f64 {
    let k2 = k * k;
    let f = |a: f64| {
        let s = a.sin();
        (1.0 - k2 * s * s).sqrt()
    };
    let n = (u.abs() / step).ceil().max(1.0) as usize;
    let h = u / n as f64;
    let mut a = 0.0;
    for _ in 0..n {
        let k1 = f(a);
        let k2v = f(a + 0.5 * h * k1);
        let k3 = f(a + 0.5 * h * k2v);
        let k4 = f(a + h * k3);
        a += h / 6.0 * (k1 + 2.0 * k2v + 2.0 * k3 + k4);
    }
    a
}

/// `E/(mgl)` for unit mass: `R·φ̇²/2 + 2·sin²(φ/2)`.
pub fn energy(phi: f64, phidot: f64, r: f64) -> f64 {
    let s = (0.5 * phi).sin();
    0.5 * r * phidot * phidot + 2.0 * s * s
}
