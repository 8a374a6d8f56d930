use psieve_core::factorize;
use psieve_core::quad::integrate;
use psieve_core::sieve_numerics::{
    bracket_functional, bracket_functional_eps, gamma_threshold, lower_f, richert_integral, richert_weight,
    triple_integral, upper_f, SieveWeights,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn sieve_functions_on_the_short_range() {
    for i in 0..=20 {
        let s = 2.0 + i as f64 / 20.0;
        let ratio = lower_f(s).unwrap() / upper_f(s).unwrap();
        assert!((ratio - (s - 1.0).ln()).abs() < 1e-14, "s = {s}");
        assert!(upper_f(s).unwrap() > lower_f(s).unwrap());
    }
}

#[test]
fn richert_integral_is_positive_and_decreasing_in_u() {
    let xi = 0.34;
    let us: Vec<f64> = (0..12).map(|i| 1.0 / xi + 0.7 * i as f64).filter(|&u| u < 32.0 / 3.0).collect();
    let vals: Vec<f64> = us.iter().map(|&u| richert_integral(u, xi, 1e-12).unwrap().value).collect();
    assert!(vals.iter().all(|&v| v >= 0.0));
    // smaller u gives a larger integral
    assert!(vals.windows(2).all(|w| w[0] > w[1]), "{vals:?}");
    assert_eq!(richert_integral(32.0 / 3.0, xi, 1e-12).unwrap().value, 0.0);
}

#[test]
fn quadrature_certificates_hold() {
    for tol in [1e-6, 1e-8, 1e-10] {
        let a = richert_integral(3.0, 0.34, tol).unwrap();
        let b = richert_integral(3.0, 0.34, tol / 100.0).unwrap();
        assert!(a.converged && (a.value - b.value).abs() <= tol, "richert at {tol}");
    }
    let a = triple_integral(1e-6).unwrap();
    let b = triple_integral(1e-8).unwrap();
    assert!((a.value - b.value).abs() <= 1e-6);
    let q = integrate(|t: f64| t.sin(), 0.0, std::f64::consts::PI, 1e-12);
    assert!((q.value - 2.0).abs() < 1e-12);
}

#[test]
fn bracket_is_increasing_on_the_grid() {
    let grid = [0.995, 0.997, 0.9989445, 0.9995, 0.9999];
    let phi: Vec<f64> = grid.iter().map(|&g| bracket_functional(g, 1e-10).unwrap()).collect();
    assert!(phi[0] < 0.0);
    assert!(phi.windows(2).all(|w| w[0] < w[1]), "{phi:?}");
}

#[test]
fn bracket_is_continuous_in_epsilon() {
    let limit = bracket_functional(0.999, 1e-11).unwrap();
    let gaps: Vec<f64> =
        [1e-4, 1e-6, 1e-8].iter().map(|&e| (bracket_functional_eps(0.999, e, 1e-11).unwrap() - limit).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[2] < 1e-6);
}

#[test]
fn threshold_is_stable_under_refinement() {
    let a = gamma_threshold(1e-8).unwrap();
    let b = gamma_threshold(1e-9).unwrap();
    assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    assert!(a < 0.9989445);
}

#[test]
fn richert_weights_respect_the_omega_bound() {
    // squarefree a <= x with every prime factor at least x^(3/32)
    let x = 1_000_000u64;
    let z = (x as f64).powf(3.0 / 32.0);
    let w = SieveWeights::new(0.35, 1e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 2000 {
        let a = rng.random_range(2..=x);
        let sig = factorize(a).unwrap();
        if sig.mobius == 0 || (sig.spf as f64) < z {
            continue;
        }
        let lhs = richert_weight(&sig, x as f64, &w);
        assert!(lhs < w.lambda * (5.0 - sig.big_omega as f64), "a = {a}: {lhs}");
        checked += 1;
    }
}
