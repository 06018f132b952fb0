//! The heat semigroup of the Euler operator Ω = x²∂² + x∂ on the line: its kernel,
//! action, symbol, lacunary structure and diagonal functional equation.
//!
//! In r = log|x| the semigroup is the ordinary heat flow, so
//! S_tφ(x) = ∫ K_t(e^r) φ(x e^{-r}) dr for x ≠ 0 and S_tφ(0) = ‖K_t‖ φ(0).

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funceq::check_eq12;
use crate::jet::Jet;
use crate::quad::{adaptive, fixed_gauss, FilonExpansion, Tol};
use crate::report::{CheckReport, Criterion};
use crate::special::erf;
use crate::testfn::{FourierConvention, TestFunction};
use crate::C64;

/// e^{-TAIL} is where Gaussian tails are cut.
const TAIL: f64 = 42.0;

pub const TOL_SEMIGROUP: f64 = 1e-6;
pub const TOL_RATIO: f64 = 1e-6;
pub const TOL_LACUNARY_AGREE: f64 = 1e-7;
pub const TOL_LACUNARY_ZERO: f64 = 1e-12;
pub const TOL_BOUNDS: f64 = 1e-8;
pub const TOL_KERNEL: f64 = 1e-10;

/// Prefactor of K_t. `Printed` carries (2πt)^{-1/2}, which is √2 times the mass-one kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationVariant {
    Printed,
    Corrected,
}

impl NormalizationVariant {
    pub fn name(self) -> &'static str {
        match self {
            NormalizationVariant::Printed => "printed",
            NormalizationVariant::Corrected => "corrected",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(NormalizationVariant::Printed),
            "corrected" => Ok(NormalizationVariant::Corrected),
            _ => Err(Error::config("variant", format!("unknown variant `{s}`"))),
        }
    }

    pub fn prefactor(self, t: f64) -> f64 {
        match self {
            NormalizationVariant::Printed => (2.0 * PI * t).powf(-0.5),
            NormalizationVariant::Corrected => (4.0 * PI * t).powf(-0.5),
        }
    }

    /// ∫_0^∞ K_t dx/x.
    pub fn mass(self) -> f64 {
        match self {
            NormalizationVariant::Printed => SQRT_2,
            NormalizationVariant::Corrected => 1.0,
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("heat time must be positive, got {t}")))
    }
}

/// Half-width in r = log x beyond which the Gaussian factor is below e^{-TAIL}.
fn log_window(t: f64) -> f64 {
    (4.0 * t * TAIL).sqrt()
}

pub fn langlands_kernel(t: f64, x: f64, v: NormalizationVariant) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let l = x.ln();
    v.prefactor(t) * (-l * l / (4.0 * t)).exp()
}

/// f_t(y) = K_t(y)/y for y > 0, 0 otherwise.
pub fn f_t(t: f64, y: f64, v: NormalizationVariant) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        langlands_kernel(t, y, v) / y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerSemigroup {
    pub t: f64,
    pub variant: NormalizationVariant,
}

impl EulerSemigroup {
    pub fn new(t: f64, variant: NormalizationVariant) -> Result<Self> {
        check_t(t)?;
        Ok(EulerSemigroup { t, variant })
    }

    /// S_t applied to an arbitrary function of one variable.
    pub fn apply_fn(&self, f: &dyn Fn(f64) -> C64, x: f64) -> Result<C64> {
        if x == 0.0 {
            return Ok(f(0.0) * self.variant.mass());
        }
        let t = self.t;
        let c = self.variant.prefactor(t);
        let g = |r: f64| f(x * (-r).exp()) * (c * (-r * r / (4.0 * t)).exp());
        let w = log_window(t);
        Ok(adaptive(&g, -w, w, Tol::new(1e-17, 1e-13))?.value)
    }

    pub fn apply(&self, phi: &TestFunction, x: f64) -> Result<C64> {
        if phi.dim() != 1 {
            return Err(Error::domain("the Euler semigroup acts on functions of one variable"));
        }
        self.apply_fn(&|y| phi.value_1d(y), x)
    }
}

pub fn apply(sg: &EulerSemigroup, phi: &TestFunction, x: f64) -> Result<C64> {
    sg.apply(phi, x)
}

/// S_t of e^{-a(log y - μ)²} (zero for y ≤ 0), by Gaussian convolution in log y.
pub fn log_gauss_flow(t: f64, a: f64, mu: f64, x: f64, v: NormalizationVariant) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let d = 1.0 + 4.0 * a * t;
    let l = x.ln() - mu;
    v.mass() * d.powf(-0.5) * (-a * l * l / d).exp()
}

/// (Ωf)(x) = x² f''(x) + x f'(x) for f given on jets.
pub fn euler_operator(f: &dyn Fn(&Jet) -> Jet, x: f64) -> C64 {
    let d = f(&Jet::variable(x, 2)).derivatives();
    d[2] * (x * x) + d[1] * x
}

fn euler_on(phi: &TestFunction, y: f64) -> Result<C64> {
    let d = phi.ray_jet(&[0.0], &[1.0], y, 2)?.derivatives();
    Ok(d[2] * (y * y) + d[1] * y)
}

/// S_t S_s φ against S_{t+s} φ on an x-grid (the semigroup law, which only the corrected
/// variant satisfies), and the grid ratio S_t S_s φ / S_{t+s} φ against the variant's mass
/// (1 corrected, √2 printed). Measured on the law report is the worst ratio.
pub fn semigroup_reports(
    t: f64,
    s: f64,
    phi: &TestFunction,
    xs: &[f64],
    v: NormalizationVariant,
) -> Result<(CheckReport, CheckReport)> {
    check_t(t)?;
    check_t(s)?;
    let st = EulerSemigroup::new(t, v)?;
    let ss = EulerSemigroup::new(s, v)?;
    let sts = EulerSemigroup::new(t + s, v)?;
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &x in xs {
        let inner = |y: f64| -> C64 { ss.apply(phi, y).unwrap_or(C64::new(f64::NAN, 0.0)) };
        lhs.push(st.apply_fn(&inner, x)?);
        rhs.push(sts.apply(phi, x)?);
    }
    let ratios: Vec<f64> = lhs
        .iter()
        .zip(&rhs)
        .filter(|(_, r)| r.norm() > 1e-8)
        .map(|(l, r)| (l / r).re)
        .collect();
    let expect = v.mass();
    let worst = ratios
        .iter()
        .copied()
        .max_by(|a, b| (a - expect).abs().total_cmp(&(b - expect).abs()))
        .unwrap_or(f64::NAN);
    let tag = |r: CheckReport| {
        r.param("t", t)
            .param("s", s)
            .param("x", xs.to_vec())
            .param("phi", phi.label())
            .param("variant", v.name())
    };
    let law = tag(CheckReport::compare("heat.semigroup", "semigroup", lhs, rhs, TOL_SEMIGROUP))
        .with_measured(worst)
        .diag("ratios", ratios.clone());
    let ratio = tag(CheckReport::measure(
        "heat.semigroup_ratio",
        "semigroup",
        worst,
        Some(expect - TOL_RATIO),
        Some(expect + TOL_RATIO),
    ))
    .diag("expected_ratio", expect)
    .diag("ratios", ratios);
    Ok((law, ratio))
}

pub fn semigroup_check(
    t: f64,
    s: f64,
    phi: &TestFunction,
    xs: &[f64],
    v: NormalizationVariant,
) -> Result<CheckReport> {
    Ok(semigroup_reports(t, s, phi, xs, v)?.0)
}

/// |[S_{t+h} - S_{t-h}]φ(x)/(2h) - S_t(Ωφ)(x)|.
pub fn generator_residual(t: f64, h: f64, phi: &TestFunction, x: f64, v: NormalizationVariant) -> Result<f64> {
    if !(t > h && h > 0.0) {
        return Err(Error::domain("generator check needs t > h > 0"));
    }
    let plus = EulerSemigroup::new(t + h, v)?.apply(phi, x)?;
    let minus = EulerSemigroup::new(t - h, v)?.apply(phi, x)?;
    let st = EulerSemigroup::new(t, v)?;
    let omega = if x == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        st.apply_fn(&|y| euler_on(phi, y).unwrap_or(C64::new(f64::NAN, 0.0)), x)?
    };
    Ok(((plus - minus) / (2.0 * h) - omega).norm())
}

/// Ratio of generator residuals at h and h/10; second order gives ~100.
pub fn generator_check(t: f64, h: f64, phi: &TestFunction, x: f64, v: NormalizationVariant) -> Result<CheckReport> {
    let r1 = generator_residual(t, h, phi, x, v)?;
    let r2 = generator_residual(t, h / 10.0, phi, x, v)?;
    let report = if x == 0.0 {
        CheckReport::scalar("heat.generator", "generator", C64::new(r1, 0.0), C64::new(0.0, 0.0), 1e-12)
            .with_criterion(Criterion::Absolute { tol: 1e-12 })
    } else {
        CheckReport::measure("heat.generator", "generator", r1 / r2, Some(80.0), Some(120.0))
    };
    Ok(report
        .param("t", t)
        .param("h", h)
        .param("x", x)
        .param("phi", phi.label())
        .param("variant", v.name())
        .diag("residuals", vec![r1, r2]))
}

/// f̂_t(ω) = ∫_0^∞ f_t(y) e^{-iωy} dy.
///
/// For ω > 0 the path y = e^{u - iθ} damps the oscillation by e^{-ω e^u sin θ} while the
/// Gaussian in u picks up at most e^{θ²/4t}; θ keeps that factor below 10. A fixed rule keeps
/// the result smooth in ω, which matters when it is fed to a second transform.
pub fn ft_hat(t: f64, omega: f64, v: NormalizationVariant) -> Result<C64> {
    check_t(t)?;
    if omega == 0.0 {
        return Ok(C64::new(v.mass(), 0.0));
    }
    if omega < 0.0 {
        return Ok(ft_hat(t, -omega, v)?.conj());
    }
    let theta = (4.0 * t * 10f64.ln()).sqrt().min(PI / 2.0);
    let (sn, cs) = theta.sin_cos();
    let c = v.prefactor(t);
    let g = |u: f64| {
        let z = C64::new(u, -theta);
        let eu = u.exp() * omega;
        (-z * z / (4.0 * t) + C64::new(-eu * sn, -eu * cs)).exp() * c
    };
    let w = (4.0 * t * (TAIL + theta * theta / (4.0 * t))).sqrt();
    let hi = (60.0 / (omega * sn)).ln().min(w);
    if hi <= -w {
        return Ok(C64::new(0.0, 0.0));
    }
    let width = (0.5 * (2.0 * t).sqrt()).min(0.1);
    let panels = ((hi + w) / width).ceil().max(1.0) as usize;
    Ok(fixed_gauss(&g, -w, hi, panels, 20))
}

/// The same transform by a Filon rule on the real axis, as a second path.
pub fn ft_hat_filon(t: f64, omega: f64, v: NormalizationVariant) -> Result<C64> {
    check_t(t)?;
    let w = log_window(t);
    let f = |y: f64| C64::new(f_t(t, y, v), 0.0);
    let e = FilonExpansion::new(&f, (-w).exp(), w.exp(), Tol::new(1e-16, 1e-13))?;
    Ok(e.transform(omega))
}

/// s_t(x, ξ) = e^{-ixξ} f̂_t(-xξ).
pub fn heat_symbol(t: f64, x: f64, xi: f64, v: NormalizationVariant) -> Result<C64> {
    let p = x * xi;
    Ok(C64::new(0.0, -p).exp() * ft_hat(t, -p, v)?)
}

/// S_t(x, y) = K_t(x/y)/|y| for xy > 0, else 0.
pub fn kernel_xy(t: f64, x: f64, y: f64, v: NormalizationVariant) -> f64 {
    if x * y <= 0.0 {
        0.0
    } else {
        langlands_kernel(t, x / y, v) / y.abs()
    }
}

/// Kernel against (1/|x|) Ã_t(x, (x-y)/x) with Ã_t(x, u) = f_t(1 - u) taken in closed form.
pub fn kernel_check(t: f64, points: &[(f64, f64)], v: NormalizationVariant) -> Result<CheckReport> {
    check_t(t)?;
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &(x, y) in points {
        if x == 0.0 {
            return Err(Error::domain("kernel identity needs x ≠ 0"));
        }
        lhs.push(C64::new(kernel_xy(t, x, y, v), 0.0));
        let u = (x - y) / x.abs();
        // Ã at x < 0 is the reflection f_t(1 + u)
        let a = if x > 0.0 { f_t(t, 1.0 - u, v) } else { f_t(t, 1.0 + u, v) };
        rhs.push(C64::new(a / x.abs(), 0.0));
    }
    let pts: Vec<Vec<f64>> = points.iter().map(|&(x, y)| vec![x, y]).collect();
    Ok(CheckReport::compare("heat.kernel", "kernel", lhs, rhs, TOL_KERNEL)
        .param("t", t)
        .param("points", pts)
        .param("variant", v.name()))
}

/// Ã_t(1, y) by inverting ã_t(1, ξ) = e^{-iξ} f̂_t(-ξ) numerically:
/// (1/π) Re ∫_0^W f̂_t(ω) e^{-i(y-1)ω} dω.
pub struct AuxKernelInverse {
    parts: Vec<FilonExpansion>,
    pub cutoff: f64,
    pub error: f64,
}

impl AuxKernelInverse {
    pub fn new(t: f64, v: NormalizationVariant) -> Result<Self> {
        check_t(t)?;
        let mut cutoff = 2.0;
        while cutoff < 1e12 {
            let tail = ft_hat(t, cutoff, v)?.norm() * cutoff;
            if tail < 1e-17 {
                break;
            }
            cutoff *= 2.0;
        }
        let f = |w: f64| ft_hat(t, w, v).unwrap_or(C64::new(f64::NAN, 0.0));
        let tol = Tol::new(1e-15, 1e-14);
        let parts = vec![
            FilonExpansion::new(&f, 0.0, 1.0, tol)?,
            FilonExpansion::new(&f, 1.0, cutoff, tol)?,
        ];
        let error = parts.iter().map(|p| p.error).sum::<f64>() / PI;
        Ok(AuxKernelInverse { parts, cutoff, error })
    }

    pub fn value(&self, y: f64) -> f64 {
        let s: C64 = self.parts.iter().map(|p| p.transform(y - 1.0)).sum();
        s.re / PI
    }
}

/// Ã_t(1, y) two ways, plus the support claim Ã_t(1, y) = 0 for y ≥ 1. Returns the
/// agreement report and the support report.
pub fn lacunary_check(t: f64, ys: &[f64], v: NormalizationVariant) -> Result<(CheckReport, CheckReport)> {
    let inv = AuxKernelInverse::new(t, v)?;
    let numeric: Vec<C64> = ys.iter().map(|&y| C64::new(inv.value(y), 0.0)).collect();
    let closed: Vec<C64> = ys.iter().map(|&y| C64::new(f_t(t, 1.0 - y, v), 0.0)).collect();
    let beyond = ys
        .iter()
        .zip(&numeric)
        .filter(|(y, _)| **y >= 1.0)
        .map(|(_, a)| a.norm())
        .fold(0.0, f64::max);
    let agree = CheckReport::compare("heat.lacunary", "lacunary", numeric, closed, TOL_LACUNARY_AGREE)
        .with_criterion(Criterion::Absolute {
            tol: TOL_LACUNARY_AGREE,
        })
        .param("t", t)
        .param("y", ys.to_vec())
        .param("variant", v.name())
        .diag("cutoff", inv.cutoff)
        .diag("expansion_error", inv.error);
    let support = CheckReport::measure("heat.lacunary_support", "lacunary", beyond, None, Some(TOL_LACUNARY_ZERO))
        .param("t", t)
        .param("y", ys.iter().copied().filter(|y| *y >= 1.0).collect::<Vec<_>>())
        .param("variant", v.name());
    Ok((agree, support))
}

/// The line functional equation for the diagonal density c_t|x|^ζ: both sides of the
/// Eq12 identity multiplied by c_t = K_t(1).
pub fn diagonal_funceq(t: f64, zeta: C64, phi: &TestFunction, v: NormalizationVariant) -> Result<CheckReport> {
    check_t(t)?;
    let ct = v.prefactor(t);
    let base = check_eq12(zeta, phi, FourierConvention::TwoPi, 1e-7)?;
    let lhs: Vec<C64> = base.lhs.iter().map(|z| z * ct).collect();
    let rhs: Vec<C64> = base.rhs.iter().map(|z| z * ct).collect();
    Ok(CheckReport::compare("heat.funceq", "diagonal", lhs, rhs, 1e-7)
        .param("t", t)
        .param_c("zeta", zeta)
        .param("phi", phi.label())
        .param("variant", v.name()))
}

/// e^{κ²t}(1 + erf(κ√t)) times the variant mass.
pub fn weighted_norm_closed(t: f64, kappa: f64, v: NormalizationVariant) -> f64 {
    v.mass() * (kappa * kappa * t).exp() * (1.0 + erf(kappa * t.sqrt()))
}

pub fn weighted_norm(t: f64, kappa: f64, v: NormalizationVariant) -> Result<f64> {
    check_t(t)?;
    let c = v.prefactor(t);
    let g = |r: f64| C64::new(c * (-r * r / (4.0 * t) + kappa * r).exp(), 0.0);
    // the weighted Gaussian is centred at 2κt
    let w = 2.0 * kappa * t + log_window(t);
    Ok(2.0 * adaptive(&g, 0.0, w, Tol::new(1e-300, 1e-13))?.value.re)
}

/// ∫|K_t|e^{κ|log x|} dx/x against its closed form on a (t, κ) grid. The report also records
/// whether the values are nondecreasing in κ for each t.
pub fn langlands_bounds_check(ts: &[f64], kappas: &[f64], v: NormalizationVariant) -> Result<CheckReport> {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let mut monotone = true;
    for &t in ts {
        let mut prev = 0.0;
        for &k in kappas {
            if k < 0.0 {
                return Err(Error::domain("weights need κ ≥ 0"));
            }
            let val = weighted_norm(t, k, v)?;
            if val < prev {
                monotone = false;
            }
            prev = val;
            lhs.push(C64::new(val, 0.0));
            rhs.push(C64::new(weighted_norm_closed(t, k, v), 0.0));
        }
    }
    let mut sorted = kappas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut r = CheckReport::compare("heat.bounds", "bounds", lhs, rhs, TOL_BOUNDS)
        .param("t", ts.to_vec())
        .param("kappa", kappas.to_vec())
        .param("variant", v.name())
        .diag("monotone_in_kappa", monotone);
    if sorted == kappas && !monotone {
        r.passed = false;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use NormalizationVariant::*;

    #[test]
    fn kernel_basics() {
        let t = 0.3;
        assert!((langlands_kernel(t, 1.0, Corrected) - (4.0 * PI * t).powf(-0.5)).abs() < 1e-15);
        for &x in &[0.1, 0.7, 3.0] {
            let a = langlands_kernel(t, x, Corrected);
            assert!((a - langlands_kernel(t, 1.0 / x, Corrected)).abs() < 1e-14);
        }
        for v in [Corrected, Printed] {
            let m = weighted_norm(t, 0.0, v).unwrap();
            assert!((m - v.mass()).abs() < 1e-12, "{m}");
        }
    }

    #[test]
    fn log_gauss_closed_form() {
        let phi = TestFunction::log_gauss(1.0, 0.0).unwrap();
        for v in [Corrected, Printed] {
            let sg = EulerSemigroup::new(0.4, v).unwrap();
            for &x in &[0.3, 1.0, 2.5] {
                let a = sg.apply(&phi, x).unwrap().re;
                let b = log_gauss_flow(0.4, 1.0, 0.0, x, v);
                assert!((a - b).abs() < 1e-8 * b.abs().max(1e-3), "{x}: {a} {b}");
            }
            assert_eq!(sg.apply(&phi, -1.0).unwrap().re, 0.0);
        }
        let g = TestFunction::gaussian(1.0, 1).unwrap();
        let sg = EulerSemigroup::new(0.4, Printed).unwrap();
        assert!((sg.apply(&g, 0.0).unwrap().re - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn approximate_identity() {
        let phi = TestFunction::log_gauss(1.0, 0.0).unwrap();
        let target = phi.value_1d(2.0);
        let mut prev = f64::INFINITY;
        for &t in &[0.1, 0.01, 0.001] {
            let d = (EulerSemigroup::new(t, Corrected).unwrap().apply(&phi, 2.0).unwrap() - target).norm();
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn semigroup_both_variants() {
        let phi = TestFunction::log_gauss(1.0, 0.0).unwrap();
        let xs = [0.5, 1.0, 2.0];
        let r = semigroup_check(0.5, 0.5, &phi, &xs, Corrected).unwrap();
        assert!(r.passed, "{}", r.rel_residual);
        let (law, ratio) = semigroup_reports(0.5, 0.5, &phi, &xs, Printed).unwrap();
        assert!(!law.passed);
        assert!(ratio.passed, "{:?}", ratio.measured);
        assert!((law.measured.unwrap() - SQRT_2).abs() < 1e-6);
        let r = semigroup_check(0.25, 0.25, &phi, &[1.0], Corrected).unwrap();
        assert_eq!(r.lhs.len(), 1);
    }

    #[test]
    fn generator_is_second_order() {
        let phi = TestFunction::log_gauss(1.0, 0.0).unwrap();
        let r = generator_check(0.5, 1e-2, &phi, 2.0, Corrected).unwrap();
        assert!(r.passed, "{:?} {:?}", r.measured, r.diagnostics);
        let r = generator_check(0.5, 1e-2, &phi, 0.0, Corrected).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn euler_eigenfunctions() {
        for &a in &[0.5, 1.5, -2.0] {
            let x = 1.7;
            let v = euler_operator(&|j: &Jet| j.powc(C64::new(a, 0.0)), x);
            assert!((v.re - a * a * x.powf(a)).abs() < 1e-10);
        }
    }

    #[test]
    fn symbol_structure() {
        let t = 0.25;
        assert!((heat_symbol(t, 0.0, 7.0, Corrected).unwrap() - 1.0).norm() < 1e-15);
        let a = heat_symbol(t, 2.0, 3.0, Corrected).unwrap();
        let b = heat_symbol(t, 3.0, 2.0, Corrected).unwrap();
        assert!((a - b).norm() < 1e-9);
    }

    #[test]
    fn contour_matches_filon() {
        for &t in &[0.1, 0.5] {
            for &w in &[-3.0, 0.5, 2.0, 10.0, 40.0] {
                let a = ft_hat(t, w, Corrected).unwrap();
                let b = ft_hat_filon(t, w, Corrected).unwrap();
                assert!((a - b).norm() < 1e-11, "t={t} w={w}: {a} {b}");
            }
        }
    }

    #[test]
    fn lacunary() {
        let ys = [-1.0, 0.0, 0.5, 1.0, 1.5, 3.0, 10.0];
        for &t in &[0.1, 1.0] {
            let (agree, support) = lacunary_check(t, &ys, Corrected).unwrap();
            assert!(agree.passed, "t={t}: {} {:?}", agree.abs_residual, agree.diagnostics);
            assert!(support.passed, "t={t}: {:?}", support.measured);
        }
    }

    #[test]
    fn kernel_identities() {
        let t = 0.5;
        assert_eq!(kernel_xy(t, 1.0, -2.0, Corrected), 0.0);
        let a = kernel_xy(t, 3.0 * 2.0, 3.0 * 5.0, Corrected);
        assert!((3.0 * a - kernel_xy(t, 2.0, 5.0, Corrected)).abs() < 1e-14);
        let pts = [(2.0, 3.0), (-1.0, -0.5), (0.5, 4.0), (1.0, -1.0)];
        assert!(kernel_check(t, &pts, Corrected).unwrap().passed);
    }

    #[test]
    fn bounds_closed_form() {
        let r = langlands_bounds_check(&[0.25, 1.0], &[0.0, 0.5, 1.0, 2.0], Corrected).unwrap();
        assert!(r.passed, "{}", r.rel_residual);
        let v = weighted_norm(0.25, 1.0, Corrected).unwrap();
        let want = 0.25f64.exp() * (1.0 + erf(0.5));
        assert!((v - want).abs() < 1e-8 * want);
    }

    #[test]
    fn diagonal_equation() {
        let phi = TestFunction::gaussian(PI, 1).unwrap();
        let r = diagonal_funceq(0.5, C64::new(0.5, 0.0), &phi, Corrected).unwrap();
        assert!(r.passed, "{}", r.rel_residual);
    }
}
