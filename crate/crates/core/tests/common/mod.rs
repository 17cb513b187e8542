#![allow(dead_code)]

//! Reference values computed without the library's numerics.

use std::f64::consts::PI;

/// erfc by composite Simpson quadrature of 2/sqrt(pi) exp(-t^2), so the
/// checks do not share `libm::erfc` with the code under test.
pub fn erfc_quadrature(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc_quadrature(-x);
    }
    let upper = x + 9.0;
    let intervals = 40_000;
    let h = (upper - x) / intervals as f64;
    let f = |t: f64| (-t * t).exp();
    let mut sum = f(x) + f(upper);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(x + i as f64 * h);
    }
    2.0 / PI.sqrt() * sum * h / 3.0
}

/// Probability of reading 1 for received amplitude `a` and basis offset
/// `delta`.
pub fn p_one_oracle(a: f64, delta: f64) -> f64 {
    0.5 * erfc_quadrature(a * delta.cos())
}

/// Half-width of a z-sigma band around a binomial proportion.
pub fn binomial_band(p: f64, n: u64, z: f64) -> f64 {
    z * (p * (1.0 - p) / n as f64).sqrt()
}

pub fn within_band(observed: u64, n: u64, p: f64, z: f64) -> bool {
    (observed as f64 / n as f64 - p).abs() <= binomial_band(p, n, z)
}

#[test]
fn quadrature_matches_tabulated_erfc() {
    // Abramowitz and Stegun table values
    for (x, v) in [
        (0.0, 1.0),
        (0.5, 0.479_500_122_186_953_5),
        (1.0, 0.157_299_207_050_285_13),
        (2.0, 0.004_677_734_981_047_266),
    ] {
        assert!((erfc_quadrature(x) - v).abs() < 1e-12 * v, "erfc({x})");
    }
    assert!((erfc_quadrature(-1.0) - 1.842_700_792_949_715).abs() < 1e-12);
}
