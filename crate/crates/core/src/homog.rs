//! Homogeneous distributions: t₊^s with its continuation and log-regularized integer
//! branch, the radial functional R_s, cutoffs ψ with ∫ψ(tm) dt/t = 1, and the two
//! extensions of a degree -n density across the origin.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{integrate_1d, integrate_sphere, with_fallible, SingularitySpec, Tol};
use crate::report::CheckReport;
use crate::special::{cpow, harmonic, DEFAULT_POLE_GUARD};
use crate::testfn::TestFunction;
use crate::zeta::{mellin, mellin_pole_distance, ZetaOptions};
use crate::C64;

fn tol() -> Tol {
    Tol::new(1e-16, 1e-12)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Exact negative integer -k, if s is one.
fn negative_integer(s: C64) -> Option<usize> {
    if s.im == 0.0 && s.re <= -1.0 && s.re == s.re.round() {
        Some((-s.re) as usize)
    } else {
        None
    }
}

/// ⟨t₊^s, t ↦ φ(t d)⟩ for a direction d (not necessarily unit).
///
/// At s = -k the finite part -1/(k-1)! ∫_0^∞ log t ∂_t^k φ(td) dt + H_{k-1} ∂^{k-1}φ(0)/(k-1)!.
pub fn tplus_ray(s: C64, phi: &TestFunction, d: &[f64]) -> Result<C64> {
    if phi.is_zero() {
        return Ok(C64::new(0.0, 0.0));
    }
    if let Some(k) = negative_integer(s) {
        let zeros = vec![0.0; d.len()];
        let len = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        let ext = phi
            .extent()
            .ok_or_else(|| Error::domain("finite part needs a finite extent"))?
            / len;
        let f = |t: f64| -> Result<C64> {
            Ok(phi.ray_jet(&zeros, d, t, k)?.derivatives()[k] * t.ln())
        };
        let spec = SingularitySpec::left(0.0).with_log();
        let q = with_fallible(&f, |g| integrate_1d(g, 0.0, ext, spec, tol()))?;
        let at0 = phi.ray_jet(&zeros, d, 0.0, k - 1)?.derivatives()[k - 1];
        let kf = factorial(k - 1);
        return Ok(-q.value / kf + at0 * harmonic(k as u32 - 1) / kf);
    }
    let dist = mellin_pole_distance(s);
    if s.re <= -1.0 && dist < DEFAULT_POLE_GUARD {
        return Err(Error::pole(format!("s = {s}"), dist, DEFAULT_POLE_GUARD));
    }
    let opt = ZetaOptions {
        tol: tol(),
        pole_guard: DEFAULT_POLE_GUARD,
    };
    Ok(mellin(phi, d, s, &opt)?.value)
}

/// ⟨t₊^s, φ⟩ on the line.
pub fn tplus_pair(s: C64, phi: &TestFunction) -> Result<C64> {
    if phi.dim() != 1 {
        return Err(Error::domain("t₊^s pairs with functions on the line"));
    }
    tplus_ray(s, phi, &[1.0])
}

/// R_sφ(m) = ⟨t₊^{s+n-1}, t ↦ φ(tm)⟩.
pub fn rs_transform(phi: &TestFunction, s: C64, m: &[f64]) -> Result<C64> {
    if m.iter().all(|x| *x == 0.0) {
        return Err(Error::domain("R_s is defined off the origin"));
    }
    tplus_ray(s + (phi.dim() as f64 - 1.0), phi, m)
}

/// η(t) a bump in log t supported on [a, b], normalized so ∫_0^∞ η(t) dt/t = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialCutoff {
    pub a: f64,
    pub b: f64,
    norm: f64,
}

/// ∫_{-1}^{1} e^{-1/(1-u²)} du
const BUMP_MASS: f64 = 0.443_993_816_168_079_4;

impl RadialCutoff {
    pub fn eta(&self, t: f64) -> f64 {
        if t <= self.a || t >= self.b {
            return 0.0;
        }
        let u = (2.0 * t.ln() - (self.a * self.b).ln()) / (self.b / self.a).ln();
        let v = 1.0 - u * u;
        if v <= 0.0 {
            0.0
        } else {
            (-1.0 / v).exp() / self.norm
        }
    }

    pub fn psi(&self, m: &[f64]) -> f64 {
        self.eta(m.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    /// ∫_0^∞ ψ(t m) dt/t by quadrature.
    pub fn normalization_at(&self, m_norm: f64) -> Result<f64> {
        let f = |t: f64| C64::new(self.eta(t * m_norm) / t, 0.0);
        Ok(integrate_1d(&f, self.a / m_norm, self.b / m_norm, SingularitySpec::SMOOTH, tol())?
            .value
            .re)
    }

    /// ∫_0^∞ η(r) log r dr/r
    pub fn log_moment(&self) -> Result<f64> {
        let f = |r: f64| C64::new(self.eta(r) * r.ln() / r, 0.0);
        Ok(integrate_1d(&f, self.a, self.b, SingularitySpec::SMOOTH, tol())?.value.re)
    }
}

pub fn make_cutoff(a: f64, b: f64) -> Result<RadialCutoff> {
    if !(0.0 < a && a < b) {
        return Err(Error::domain("cutoff needs 0 < a < b"));
    }
    Ok(RadialCutoff {
        a,
        b,
        norm: 0.5 * (b / a).ln() * BUMP_MASS,
    })
}

/// A function on R^n minus the origin, homogeneous of a given degree:
/// k(m) = |m|^degree · angular(m/|m|).
pub struct HomogFunctional<'a> {
    pub n: usize,
    pub degree: f64,
    pub angular: Box<dyn Fn(&[f64]) -> C64 + 'a>,
}

impl<'a> HomogFunctional<'a> {
    pub fn new(n: usize, degree: f64, angular: impl Fn(&[f64]) -> C64 + 'a) -> Self {
        HomogFunctional {
            n,
            degree,
            angular: Box::new(angular),
        }
    }

    pub fn value(&self, m: &[f64]) -> C64 {
        let r = m.iter().map(|x| x * x).sum::<f64>().sqrt();
        let w: Vec<f64> = m.iter().map(|x| x / r).collect();
        (self.angular)(&w) * r.powf(self.degree)
    }

    /// ∫ k φ dm in polar coordinates, for φ vanishing near 0 or integrable degrees.
    pub fn pair(&self, phi: &TestFunction) -> Result<C64> {
        let ext = phi.extent().ok_or_else(|| Error::domain("pairing needs finite extent"))?;
        let n = self.n;
        let e = self.degree + n as f64 - 1.0;
        let g = |w: &[f64]| -> Result<C64> {
            let f = |r: f64| {
                let m: Vec<f64> = w.iter().map(|x| x * r).collect();
                phi.value(&m) * r.powf(e)
            };
            let spec = if e > -1.0 && e < 0.0 {
                SingularitySpec::left(e)
            } else {
                SingularitySpec::SMOOTH
            };
            Ok((self.angular)(w) * integrate_1d(&f, 0.0, ext, spec, tol())?.value)
        };
        Ok(integrate_sphere(n, &g, tol())?.value)
    }
}

fn check_critical(k: &HomogFunctional, phi: &TestFunction) -> Result<()> {
    if (k.degree + k.n as f64).abs() > 1e-12 {
        return Err(Error::domain(format!("extension needs degree -n, got {}", k.degree)));
    }
    if phi.dim() != k.n {
        return Err(Error::domain("dimension mismatch"));
    }
    Ok(())
}

/// k̇(φ) = ⟨k, ψ · R_{-n}φ⟩.
pub fn extend_kdot(k: &HomogFunctional, psi: &RadialCutoff, phi: &TestFunction) -> Result<C64> {
    check_critical(k, phi)?;
    let n = k.n;
    let s = C64::new(-(n as f64), 0.0);
    let g = |w: &[f64]| -> Result<C64> {
        let f = |r: f64| -> Result<C64> {
            let m: Vec<f64> = w.iter().map(|x| x * r).collect();
            // r^{-n} from k, r^{n-1} from the measure
            Ok(rs_transform(phi, s, &m)? * (psi.eta(r) / r))
        };
        let q = with_fallible(&f, |h| {
            integrate_1d(h, psi.a, psi.b, SingularitySpec::SMOOTH, Tol::new(1e-15, 1e-11))
        })?;
        Ok((k.angular)(w) * q.value)
    };
    Ok(integrate_sphere(n, &g, Tol::new(1e-15, 1e-11))?.value)
}

/// ∫_{|ω|=1} k(ω) R_{-n}φ(ω) dω.
pub fn extend_sphere(k: &HomogFunctional, phi: &TestFunction) -> Result<C64> {
    check_critical(k, phi)?;
    let s = C64::new(-(k.n as f64), 0.0);
    let g = |w: &[f64]| -> Result<C64> { Ok((k.angular)(w) * rs_transform(phi, s, w)?) };
    Ok(integrate_sphere(k.n, &g, Tol::new(1e-15, 1e-11))?.value)
}

/// Predicted k̇_ψ(φ) - sphere extension: -φ(0) (∫_S k) ∫ η log r dr/r.
pub fn extension_offset(k: &HomogFunctional, psi: &RadialCutoff, phi0: C64) -> Result<C64> {
    let g = |w: &[f64]| -> Result<C64> { Ok((k.angular)(w)) };
    let sk = integrate_sphere(k.n, &g, Tol::new(1e-15, 1e-12))?.value;
    Ok(-phi0 * sk * psi.log_moment()?)
}

/// Surface area of S^{n-1}.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

pub const TOL_HOMOGENEITY: f64 = 1e-8;
pub const TOL_RESTRICTION: f64 = 1e-8;
pub const TOL_AMBIGUITY: f64 = 1e-6;

/// ⟨t₊^s, λ^{-1}φ(·/λ)⟩ against λ^s⟨t₊^s, φ⟩.
pub fn check_homogeneity(s: C64, lambda: f64, phi: &TestFunction) -> Result<CheckReport> {
    let scaled = phi.rescaled(lambda)?.times(C64::new(1.0 / lambda, 0.0));
    let lhs = tplus_pair(s, &scaled)?;
    let rhs = cpow(lambda, s) * tplus_pair(s, phi)?;
    Ok(CheckReport::scalar("homog.homogeneity", "tplus", lhs, rhs, TOL_HOMOGENEITY)
        .param_c("s", s)
        .param("lambda", lambda)
        .param("phi", phi.label()))
}

/// The integer branch at s = -k against the Laurent constant of the continuation,
/// extrapolated from s = -k + ε. Measured is the last gap; it must shrink like O(ε).
pub fn check_tplus_integer(k: usize, phi: &TestFunction) -> Result<CheckReport> {
    if k == 0 {
        return Err(Error::domain("integer branch needs k ≥ 1"));
    }
    let fp = tplus_pair(C64::new(-(k as f64), 0.0), phi)?;
    let res = phi.derivative_1d(0.0, k - 1)? / factorial(k - 1);
    let mut gaps = Vec::new();
    for &eps in &[1e-2, 1e-3, 1e-4] {
        let v = tplus_pair(C64::new(-(k as f64) + eps, 0.0), phi)?;
        gaps.push((v - res / eps - fp).norm());
    }
    let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);
    let last = *gaps.last().unwrap();
    let measured = if shrinking { last } else { f64::INFINITY };
    Ok(CheckReport::measure("homog.tplus_int", "tplus-int", measured, None, Some(1e-3))
        .param("k", k as u64)
        .param("phi", phi.label())
        .diag("finite_part", vec![fp.re, fp.im])
        .diag("gaps", gaps))
}

/// For φ supported away from 0 both extensions must equal the plain pairing.
pub fn check_restriction(k: &HomogFunctional, psi: &RadialCutoff, phi: &TestFunction) -> Result<CheckReport> {
    let direct = k.pair(phi)?;
    let kdot = extend_kdot(k, psi, phi)?;
    let sphere = extend_sphere(k, phi)?;
    Ok(CheckReport::compare(
        "homog.extension",
        "extension",
        vec![kdot, sphere],
        vec![direct, direct],
        TOL_RESTRICTION,
    )
    .param("n", k.n as u64)
    .param("phi", phi.label())
    .param("psi", vec![psi.a, psi.b]))
}

/// (k̇_{ψ1} - k̇_{ψ2})(φ)/φ(0) for each φ, compared with the predicted constant. Every φ
/// must have φ(0) ≠ 0.
pub fn check_ambiguity(
    k: &HomogFunctional,
    psi1: &RadialCutoff,
    psi2: &RadialCutoff,
    phis: &[TestFunction],
) -> Result<CheckReport> {
    let zero = vec![0.0; k.n];
    let one = C64::new(1.0, 0.0);
    let predicted = extension_offset(k, psi1, one)? - extension_offset(k, psi2, one)?;
    let mut lhs = Vec::new();
    for phi in phis {
        let p0 = phi.value(&zero);
        if p0.norm() < 1e-12 {
            return Err(Error::domain(format!("{} vanishes at 0", phi.label())));
        }
        lhs.push((extend_kdot(k, psi1, phi)? - extend_kdot(k, psi2, phi)?) / p0);
    }
    let rhs = vec![predicted; lhs.len()];
    let labels: Vec<String> = phis.iter().map(|p| p.label().to_string()).collect();
    Ok(CheckReport::compare("homog.ambiguity", "ambiguity", lhs, rhs, TOL_AMBIGUITY)
        .param("n", k.n as u64)
        .param("phis", labels)
        .param("psi1", vec![psi1.a, psi1.b])
        .param("psi2", vec![psi2.a, psi2.b]))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER: f64 = 0.577_215_664_901_532_9;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn tplus_known_values() {
        let e = TestFunction::exp_half(1.0).unwrap();
        assert!((tplus_pair(c(0.0), &e).unwrap().re - 1.0).abs() < 1e-12);
        let v = tplus_pair(c(-1.0), &e).unwrap();
        assert!((v.re + EULER).abs() < 1e-10, "{v}");
    }

    #[test]
    fn integer_branch_is_the_laurent_constant() {
        let g = TestFunction::gaussian(1.0, 1).unwrap();
        for k in 1..=3usize {
            let fp = tplus_pair(c(-(k as f64)), &g).unwrap();
            let res = g.derivative_1d(0.0, k - 1).unwrap() / factorial(k - 1);
            let mut prev = f64::INFINITY;
            for &eps in &[1e-2, 1e-3, 1e-4] {
                let v = tplus_pair(c(-(k as f64) + eps), &g).unwrap();
                let gap = (v - res / eps - fp).norm();
                assert!(gap < prev, "k={k} eps={eps}: {gap}");
                prev = gap;
            }
            assert!(prev < 1e-3, "k={k}: {prev}");
        }
    }

    #[test]
    fn cutoff_normalization() {
        let psi = make_cutoff(0.5, 2.0).unwrap();
        assert!((psi.normalization_at(1.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((psi.normalization_at(3.7).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(psi.eta(0.4), 0.0);
    }

    #[test]
    fn rs_of_half_gaussian() {
        let g = TestFunction::gaussian(1.0, 1).unwrap();
        let v = rs_transform(&g, c(0.0), &[1.0]).unwrap();
        assert!((v.re - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn homogeneity_at_three_degrees() {
        let g = TestFunction::gaussian(1.0, 1).unwrap();
        for &s in &[-0.5, 0.3, 1.7] {
            for &l in &[0.5, 2.0, 5.0] {
                let r = check_homogeneity(c(s), l, &g).unwrap();
                assert!(r.passed, "s={s} l={l}: {}", r.rel_residual);
            }
        }
    }

    #[test]
    fn rs_scaling() {
        let g = TestFunction::gaussian(1.0, 2).unwrap();
        let s = c(-1.3);
        let a = rs_transform(&g, s, &[0.3, 0.4]).unwrap();
        let b = rs_transform(&g, s, &[0.6, 0.8]).unwrap();
        let want = a * 2f64.powf(-(s.re + 2.0));
        assert!((b - want).norm() / want.norm() < 1e-8);
    }

    #[test]
    fn extensions_restrict_away_from_origin() {
        let k = HomogFunctional::new(1, -1.0, |w: &[f64]| c(if w[0] > 0.0 { 1.0 } else { 0.5 }));
        let psi = make_cutoff(0.5, 2.0).unwrap();
        let phi = TestFunction::bump(&[1.5], 0.5).unwrap();
        let r = check_restriction(&k, &psi, &phi).unwrap();
        assert!(r.passed, "{:?}", r);
        let phi = TestFunction::bump(&[-1.2], 0.7).unwrap();
        assert!(check_restriction(&k, &psi, &phi).unwrap().passed);
    }

    #[test]
    fn ambiguity_is_a_delta() {
        let k = HomogFunctional::new(1, -1.0, |_: &[f64]| c((4.0 * PI * 0.5).powf(-0.5)));
        let psi1 = make_cutoff(0.5, 2.0).unwrap();
        let psi2 = make_cutoff(0.2, 1.3).unwrap();
        let phis = vec![
            TestFunction::gaussian(1.0, 1).unwrap(),
            TestFunction::gaussian(PI, 1).unwrap(),
            TestFunction::gaussian(0.3, 1).unwrap(),
            TestFunction::bump(&[0.0], 1.0).unwrap(),
            TestFunction::bump(&[0.25], 1.5).unwrap(),
        ];
        let r = check_ambiguity(&k, &psi1, &psi2, &phis).unwrap();
        assert!(r.passed, "{} {:?}", r.rel_residual, r.lhs);
        // vanishing at 0 kills the ambiguity
        let h = TestFunction::hermite_gaussian(2, 1.0, 1).unwrap();
        let d = extend_kdot(&k, &psi1, &h).unwrap() - extend_kdot(&k, &psi2, &h).unwrap();
        assert!(d.norm() < 1e-8, "{d}");
    }
}
