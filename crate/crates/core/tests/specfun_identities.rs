use discrep_core::specfun::{bessel_k_mellin, gamma_c};
use discrep_core::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn mellin_bessel_closed(s: Complex64, nu: Complex64) -> Complex64 {
    let two = Complex64::new(2.0, 0.0);
    two.powc(s - 2.0)
        * gamma_c((s + nu) * 0.5).unwrap().value
        * gamma_c((s - nu) * 0.5).unwrap().value
}

#[test]
fn mellin_bessel_identity_random_points() {
    let mut runner = TestRunner::new(Config {
        cases: 20,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (-2.0f64..2.0, -1.0f64..1.0, 0.1f64..2.5, -3.0f64..3.0);
    runner
        .run(&strategy, |(nr, ni, gap, si)| {
            let nu = Complex64::new(nr, ni);
            let s = Complex64::new(nr.abs() + gap, si);
            let q = bessel_k_mellin(s, nu, 0.0).unwrap().value;
            let exact = mellin_bessel_closed(s, nu);
            prop_assert!(
                (q - exact).norm() <= 1e-8 * exact.norm(),
                "s={} ν={}: {} vs {}",
                s,
                nu,
                q,
                exact
            );
            Ok(())
        })
        .unwrap();
}

#[test]
fn exponentially_weighted_closed_form() {
    // ∫ y^{μ-1} e^{-y} K_ν(y) dy = √π Γ(μ+ν)Γ(μ-ν) / (2^μ Γ(μ+1/2))
    for (mu, nu) in [(1.75, 0.0), (1.75, 0.25), (2.3, 0.6)] {
        let (m, n) = (Complex64::new(mu, 0.0), Complex64::new(nu, 0.0));
        let q = bessel_k_mellin(m, n, 1.0).unwrap().value;
        let exact = gamma_c(m + n).unwrap().value
            * gamma_c(m - n).unwrap().value
            * core::f64::consts::PI.sqrt()
            / (gamma_c(m + 0.5).unwrap().value * 2f64.powf(mu));
        assert!((q - exact).norm() < 1e-11 * exact.norm(), "{q} vs {exact}");
    }
}
