//! Exact solutions of the plane pendulum through Jacobi elliptic functions.
//!
//! The crate evaluates the closed-form pendulum motions in every energy
//! regime, the arctan nome series for the angle measured from the
//! ascending vertical (with Jacobi's series for `arcsin(k)/4` as its
//! value at the turning point), the infinite products those series come
//! from, and the iterated Landen transformation that writes a circulatory
//! motion as a sum of faster ones. Everything is checked against
//! independent oracles in [`oracle`]: Gauss-Legendre quadrature of the
//! complete elliptic integral and fourth-order Runge-Kutta integration of
//! the equation of motion.
//!
//! ```
//! use pendulum_elliptic::{agm::{elliptic_constants, Modulus}, pendulum::PendulumParams};
//!
//! let constants = elliptic_constants(Modulus::new(0.8).unwrap()).unwrap();
//! assert!((constants.quarter_period - 1.9953027776647296).abs() < 1e-13);
//!
//! let p = PendulumParams::oscillatory(0.6, 1.0).unwrap();
//! let alpha = 2.0 * 0.6f64.asin();
//! let quarter = p.period().unwrap() / 4.0;
//! assert!((p.phi(quarter) - alpha).abs() < 1e-14);
//! ```

pub mod agm;
pub mod cli;
pub mod error;
pub mod jacobi;
pub mod landen;
pub mod oracle;
pub mod pendulum;
pub mod products;
pub mod series;

pub use error::{Error, Result};
