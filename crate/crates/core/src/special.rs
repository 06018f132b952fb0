//! Complex gamma function and the small set of closed forms built on it.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default radius around a pole inside which continuation code refuses to evaluate.
pub const DEFAULT_POLE_GUARD: f64 = 1e-6;

// Lanczos approximation with g = 7 and nine coefficients. The relative error
// on Re z >= 1/2 is below 2e-15; reflection keeps |s| <= 30 at 13+ digits.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance from `s` to the nearest pole of Γ (a nonpositive integer).
pub fn gamma_pole_distance(s: C64) -> f64 {
    let k = s.re.round().min(0.0);
    (s - C64::new(k, 0.0)).norm()
}

/// sin(πs) with the integer part of Re s removed first, so large |Re s| keeps accuracy.
pub fn sin_pi(s: C64) -> C64 {
    let k = s.re.round();
    let f = s - C64::new(k, 0.0);
    let v = (f * PI).sin();
    if (k as i64).rem_euclid(2) == 0 {
        v
    } else {
        -v
    }
}

/// cos(πs), reduced the same way as [`sin_pi`].
pub fn cos_pi(s: C64) -> C64 {
    let k = s.re.round();
    let f = s - C64::new(k, 0.0);
    let v = (f * PI).cos();
    if (k as i64).rem_euclid(2) == 0 {
        v
    } else {
        -v
    }
}

fn lanczos(s: C64) -> C64 {
    // Γ(s) for Re s >= 1/2.
    let z = s - 1.0;
    let mut a = C64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += *c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let lg = (z + 0.5) * t.ln() - t;
    (2.0 * PI).sqrt() * lg.exp() * a
}

/// Γ(s) with an explicit pole guard.
pub fn gamma_guarded(s: C64, guard: f64) -> Result<C64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::domain(format!("gamma at non-finite argument {s}")));
    }
    if s.re < 0.5 {
        let d = gamma_pole_distance(s);
        if d < guard {
            return Err(Error::pole(format!("Gamma({s})"), d, guard));
        }
        let sp = sin_pi(s);
        Ok(PI / (sp * lanczos(1.0 - s)))
    } else {
        Ok(lanczos(s))
    }
}

/// Γ(s) with the default pole guard.
pub fn gamma(s: C64) -> Result<C64> {
    gamma_guarded(s, DEFAULT_POLE_GUARD)
}

/// Γ on real arguments. Panics at poles, so only use it where the argument is known to be safe.
pub fn gamma_real(x: f64) -> f64 {
    gamma(C64::new(x, 0.0))
        .expect("gamma_real called at a pole")
        .re
}

/// H_k = 1 + 1/2 + ... + 1/k, with H_0 = 0.
pub fn harmonic(k: u32) -> f64 {
    (1..=k).map(|j| 1.0 / j as f64).sum()
}

/// (2π)^{-s} Γ(s) · 2 cos(πs/2), the one-dimensional functional-equation factor.
pub fn gamma_factor_1d(s: C64) -> Result<C64> {
    let g = gamma(s)?;
    Ok((-s * (2.0 * PI).ln()).exp() * g * 2.0 * cos_pi(s * 0.5))
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Real power of a complex base, principal branch.
pub fn cpow(base: f64, e: C64) -> C64 {
    debug_assert!(base > 0.0);
    (e * base.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((gamma(c(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(c(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-12);
        // Γ(-1/2) = -2√π
        assert!((gamma(c(-0.5, 0.0)).unwrap().re + 2.0 * PI.sqrt()).abs() < 1e-13);
        // Γ(1/4) = 3.625609908221908...
        assert!((gamma(c(0.25, 0.0)).unwrap().re - 3.625_609_908_221_908_3).abs() < 1e-13);
        // Γ(i) = -0.1549498283018107 - 0.4980156681183560 i
        let gi = gamma(c(0.0, 1.0)).unwrap();
        assert!((gi - c(-0.154_949_828_301_810_7, -0.498_015_668_118_356)).norm() < 1e-14);
    }

    #[test]
    fn gamma_large_arguments() {
        // Γ(30) = 29!
        let f29 = 8_841_761_993_739_701_954_543_616_000_000.0_f64;
        let g = gamma(c(30.0, 0.0)).unwrap().re;
        assert!((g / f29 - 1.0).abs() < 1e-12);
        // Γ(-29.5) = π / (sin(-29.5π) Γ(30.5))
        let g305 = gamma(c(30.5, 0.0)).unwrap().re;
        let gm = gamma(c(-29.5, 0.0)).unwrap().re;
        assert!((gm * g305 * (-29.5 * PI).sin() / PI - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_at_spec_point() {
        let s = c(0.3, 0.2);
        let v = gamma(s).unwrap() * gamma(1.0 - s).unwrap() * sin_pi(s) / PI;
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn pole_guard() {
        assert!(matches!(gamma(c(0.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(gamma(c(-3.0 + 1e-8, 0.0)), Err(Error::Pole { .. })));
        assert!(gamma(c(-3.0 + 1e-4, 0.0)).is_ok());
        assert!(gamma_guarded(c(-3.0 + 1e-4, 0.0), 1e-3).is_err());
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), 0.0);
        assert_eq!(harmonic(1), 1.0);
        assert!((harmonic(3) - 11.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn factor_1d_values() {
        assert!((gamma_factor_1d(c(0.5, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        let v = gamma_factor_1d(c(2.0, 0.0)).unwrap();
        assert!((v.re + 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
        assert!(gamma_factor_1d(c(1.0, 0.0)).unwrap().norm() < 1e-16);
    }
}
