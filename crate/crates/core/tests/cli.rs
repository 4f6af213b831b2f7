use pendulum_elliptic::cli::{run, CSV_HEADER, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use pendulum_elliptic::oracle::{integrate, IntegratorConfig};
use pendulum_elliptic::pendulum::PendulumParams;

fn capture(args: &[&str]) -> (i32, String) {
    let mut buf = Vec::new();
    let argv: Vec<&str> = std::iter::once("pendulum-elliptic").chain(args.iter().copied()).collect();
    let code = run(&argv, &mut buf);
    (code, String::from_utf8(buf).unwrap())
}

#[test]
fn trajectory_writes_header_and_one_row_per_sample() {
    let (code, text) = capture(&[
        "trajectory", "--regime", "circ", "--k", "0.4", "--samples", "17", "--methods", "closed,series",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.filter(|l| !l.starts_with("max_abs_error")).count(), 17);
}

#[test]
fn compare_needs_a_second_method() {
    let (code, _) = capture(&["compare", "--regime", "osc", "--k", "0.5", "--methods", "closed"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn invalid_sampling_is_a_usage_error() {
    for args in [
        ["trajectory", "--regime", "osc", "--k", "0.5", "--samples", "1"],
        ["trajectory", "--regime", "osc", "--k", "0.5", "--tol", "1e-20"],
        ["trajectory", "--regime", "osc", "--k", "0.5", "--t1", "-T"],
    ] {
        assert_eq!(capture(&args).0, EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn modulus_outside_unit_interval_is_a_domain_error() {
    assert_eq!(capture(&["constants", "--k", "0"]).0, EXIT_DOMAIN);
    assert_eq!(capture(&["landen", "--k", "1", "--R", "1"]).0, EXIT_DOMAIN);
}

#[test]
fn landen_reports_chain_and_checks() {
    let (code, text) = capture(&["landen", "--k", "0.8", "--R", "2", "--depth", "6"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("j,k_j,k_prime_j,R_j,T_j,a_j,b_j"));
    assert!(text.contains("R_infinity,"));
    for row in ["two_revolutions", "depth_1", "depth_2", "depth_3", "counter_running"] {
        let value: f64 = text
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{row},")))
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| panic!("missing {row}"));
        assert!(value < 1e-8, "{row} = {value}");
    }
}

#[test]
fn rk4_oracle_is_fourth_order() {
    let p = PendulumParams::oscillatory(0.6, 1.0).unwrap();
    let period = p.period().unwrap();
    let err = |divisions| {
        let tr = integrate(p.initial_velocity(), 1.0, period, IntegratorConfig::per_period(period, divisions).unwrap()).unwrap();
        tr.times
            .iter()
            .zip(tr.phi())
            .map(|(&t, phi)| (phi - p.phi(t)).abs())
            .fold(0.0, f64::max)
    };
    let ratio = err(128) / err(256);
    assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
}
