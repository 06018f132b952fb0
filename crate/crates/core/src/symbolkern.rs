//! Symbols and kernels of π(f) for f on the group: f̂(m, ξ), a_f = e^{-im·ξ} f̂, the
//! auxiliary symbol ã_f, its inverse transform Ã_f and the kernel K_f, with decay and
//! local-integrability probes.
//!
//! On the line G = (0, ∞) acts by m ↦ αm with Haar measure dα/α, so with z = 1/α
//! f̂(m, ξ) = ∫ h(z) e^{imξz} dz, h(z) = f(1/z)/z. Definite forms add the SO(B) average,
//! which only sees k = (mᵀBm · ξᵀB⁻¹ξ)^{1/2}.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::heatflow::{langlands_kernel, NormalizationVariant};
use crate::phspace::{PVSpace, SpaceKind};
use crate::quad::{adaptive, FilonExpansion, Tol};
use crate::report::CheckReport;
use crate::C64;

const TAIL: f64 = 42.0;

pub const TOL_SCALING: f64 = 1e-9;
pub const TOL_FIXED_POINT: f64 = 1e-9;
pub const TOL_DUAL: f64 = 1e-8;
pub const TOL_KERNEL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Zero,
    Heat { t: f64, variant: NormalizationVariant },
    LogGauss { a: f64, mu: f64 },
}

/// A rapidly decreasing function on (0, ∞), read as a function on the identity component
/// of the group. It vanishes for α ≤ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    kind: Kind,
    label: String,
    integral: f64,
    l1: f64,
}

impl GroupFunction {
    fn build(kind: Kind, label: String) -> Result<Self> {
        let mut g = GroupFunction {
            kind,
            label,
            integral: 0.0,
            l1: 0.0,
        };
        if g.kind != Kind::Zero {
            let (lo, hi) = g.log_support();
            let f = |u: f64| C64::new(g.value(u.exp()), 0.0);
            let q = adaptive(&f, lo, hi, Tol::new(1e-17, 1e-14))?.value.re;
            g.integral = q;
            // both shipped kinds are nonnegative
            g.l1 = q.abs();
        }
        Ok(g)
    }

    pub fn zero() -> Self {
        GroupFunction {
            kind: Kind::Zero,
            label: "zero".into(),
            integral: 0.0,
            l1: 0.0,
        }
    }

    /// The heat kernel K_t as a function on the group.
    pub fn heat(t: f64, variant: NormalizationVariant) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::domain("heat time must be positive"));
        }
        GroupFunction::build(Kind::Heat { t, variant }, format!("heat:t={t},variant={}", variant.name()))
    }

    /// e^{-a (log α - μ)²}.
    pub fn log_gauss(a: f64, mu: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::domain("loggauss needs a > 0"));
        }
        GroupFunction::build(Kind::LogGauss { a, mu }, format!("loggauss:a={a},mu={mu}"))
    }

    /// `heat:t=0.5[,variant=printed]` or `loggauss:a=1,mu=0` or `zero`.
    pub fn parse(spec: &str) -> Result<Self> {
        let p = crate::params::SpecString::parse(spec)?;
        match p.head.as_str() {
            "zero" => Ok(GroupFunction::zero()),
            "heat" => {
                p.only(&["t", "variant"])?;
                let v = match p.keys.get("variant") {
                    Some(s) => NormalizationVariant::parse(s)?,
                    None => NormalizationVariant::Corrected,
                };
                GroupFunction::heat(p.real("t", Some(0.5))?, v)
            }
            "loggauss" => {
                p.only(&["a", "mu"])?;
                GroupFunction::log_gauss(p.real("a", Some(1.0))?, p.real("mu", Some(0.0))?)
            }
            other => Err(Error::config("f", format!("unknown group function `{other}`"))),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, alpha: f64) -> f64 {
        if alpha <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Zero => 0.0,
            Kind::Heat { t, variant } => langlands_kernel(*t, alpha, *variant),
            Kind::LogGauss { a, mu } => {
                let l = alpha.ln() - mu;
                (-a * l * l).exp()
            }
        }
    }

    /// Interval in log α outside of which f is below e^{-TAIL}.
    pub fn log_support(&self) -> (f64, f64) {
        match &self.kind {
            Kind::Zero => (0.0, 0.0),
            Kind::Heat { t, .. } => {
                let w = (4.0 * t * TAIL).sqrt();
                (-w, w)
            }
            Kind::LogGauss { a, mu } => {
                let w = (TAIL / a).sqrt();
                (mu - w, mu + w)
            }
        }
    }

    /// ∫ f dα/α
    pub fn integral(&self) -> f64 {
        self.integral
    }

    pub fn l1_norm(&self) -> f64 {
        self.l1
    }

    pub fn is_zero(&self) -> bool {
        self.kind == Kind::Zero
    }

    /// K_f(m, m') = f(m/m')/|m'| on the line.
    pub fn kernel(&self, m: f64, mp: f64) -> f64 {
        if m * mp <= 0.0 {
            0.0
        } else {
            self.value(m / mp) / mp.abs()
        }
    }
}

/// Precomputed expansions from which f̂ is read off at any (m, ξ).
pub struct SymbolEvaluator {
    pub f: GroupFunction,
    pub space: PVSpace,
    /// expansion of h on the z-axis; for n = 3 of h(z)/z
    h: Option<Arc<FilonExpansion>>,
}

impl SymbolEvaluator {
    pub fn new(f: &GroupFunction, space: &PVSpace) -> Result<Self> {
        if space.kind == SpaceKind::Indefinite {
            return Err(Error::domain("symbols need the origin as the only fixed point; indefinite forms are not supported"));
        }
        let h = if f.is_zero() {
            None
        } else {
            let (lo, hi) = f.log_support();
            let sinc = space.kind == SpaceKind::Definite && space.n == 3;
            let g = |z: f64| {
                let v = f.value(1.0 / z) / z;
                C64::new(if sinc { v / z } else { v }, 0.0)
            };
            Some(Arc::new(FilonExpansion::new(
                &g,
                (-hi).exp(),
                (-lo).exp(),
                Tol::new(1e-17, 1e-14),
            )?))
        };
        Ok(SymbolEvaluator {
            f: f.clone(),
            space: space.clone(),
            h,
        })
    }

    /// ∫ h(z) e^{iωz} dz on the line.
    fn line(&self, omega: f64) -> C64 {
        match &self.h {
            None => C64::new(0.0, 0.0),
            Some(_) if omega == 0.0 => C64::new(self.f.integral(), 0.0),
            Some(h) => h.transform(-omega),
        }
    }

    /// f̂(m, ξ) = ∫_G f(g) e^{i(g⁻¹m)·ξ} d_G(g).
    pub fn f_hat(&self, m: &[f64], xi: &[f64]) -> Result<C64> {
        let n = self.space.n;
        if m.len() != n || xi.len() != n {
            return Err(Error::domain("dimension mismatch"));
        }
        if self.space.kind == SpaceKind::Scalar1D {
            return Ok(self.line(m[0] * xi[0]));
        }
        let k = (self.space.rel_invariant(m) * self.space.dual_invariant(xi)).max(0.0).sqrt();
        if k == 0.0 || self.h.is_none() {
            return Ok(C64::new(if self.h.is_none() { 0.0 } else { self.f.integral() }, 0.0));
        }
        if n == 3 {
            // spherical average of e^{ikz ω₁} is sin(kz)/(kz)
            let h = self.h.as_ref().unwrap();
            return Ok(C64::new(h.transform(-k).im / k, 0.0));
        }
        // h is real, so line(-ω) is the conjugate of line(ω) and the circle folds onto a
        // quarter; adaptive bisection resolves the 1/k-wide structure near θ = π/2
        let g = |th: f64| C64::new(self.line(k * th.cos()).re, 0.0);
        let q = adaptive(&g, 0.0, 0.5 * PI, Tol::new(1e-15, 1e-12))?;
        Ok(q.value * (2.0 / PI))
    }

    /// a_f(m, ξ) = e^{-im·ξ} f̂(m, ξ).
    pub fn symbol(&self, m: &[f64], xi: &[f64]) -> Result<C64> {
        let d: f64 = m.iter().zip(xi).map(|(a, b)| a * b).sum();
        Ok(C64::new(0.0, -d).exp() * self.f_hat(m, xi)?)
    }

    /// ã_f(m, ξ) = a_f(m/|m|, ξ).
    pub fn aux_symbol(&self, m: &[f64], xi: &[f64]) -> Result<C64> {
        let r = m.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r == 0.0 {
            return Err(Error::domain("the auxiliary symbol needs m ≠ 0"));
        }
        let u: Vec<f64> = m.iter().map(|x| x / r).collect();
        self.symbol(&u, xi)
    }
}

pub fn symbol_hat(f: &GroupFunction, space: &PVSpace, m: &[f64], xi: &[f64]) -> Result<C64> {
    SymbolEvaluator::new(f, space)?.f_hat(m, xi)
}

/// Symbol values on an m × ξ grid (line only).
#[derive(Debug, Clone)]
pub struct SymbolGrid {
    pub ms: Vec<f64>,
    pub xis: Vec<f64>,
    /// values[i][j] = a_f(ms[i], xis[j])
    pub values: Vec<Vec<C64>>,
    pub f_label: String,
    pub l1: f64,
}

impl SymbolGrid {
    pub fn new(ev: &SymbolEvaluator, ms: &[f64], xis: &[f64]) -> Result<Self> {
        if ev.space.kind != SpaceKind::Scalar1D {
            return Err(Error::domain("symbol grids are for the line"));
        }
        let mut values = Vec::with_capacity(ms.len());
        for &m in ms {
            let row: Result<Vec<C64>> = xis.iter().map(|&x| ev.symbol(&[m], &[x])).collect();
            values.push(row?);
        }
        Ok(SymbolGrid {
            ms: ms.to_vec(),
            xis: xis.to_vec(),
            values,
            f_label: ev.f.label().to_string(),
            l1: ev.f.l1_norm(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// |a_f| ≤ ‖f‖_{L¹} everywhere on the grid.
    pub fn bound_check(&self) -> CheckReport {
        CheckReport::measure("symbol.bound", "symbol-bound", self.max_abs(), None, Some(self.l1 * (1.0 + 1e-12)))
            .param("f", self.f_label.as_str())
            .param("grid", vec![self.ms.len(), self.xis.len()])
            .diag("l1_norm", self.l1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,xi,re,im\n");
        for (i, m) in self.ms.iter().enumerate() {
            for (j, x) in self.xis.iter().enumerate() {
                let v = self.values[i][j];
                out.push_str(&format!("{m},{x},{},{}\n", v.re, v.im));
            }
        }
        out
    }
}

/// a_f(αm, ξ) against a_f(m, αξ). Negative α is evaluated and logged but not asserted.
pub fn scaling_check(ev: &SymbolEvaluator, m: &[f64], xi: &[f64], alpha: f64) -> Result<CheckReport> {
    let am: Vec<f64> = m.iter().map(|x| x * alpha).collect();
    let ax: Vec<f64> = xi.iter().map(|x| x * alpha).collect();
    let lhs = ev.symbol(&am, xi)?;
    let rhs = ev.symbol(m, &ax)?;
    let r = CheckReport::scalar("symbol.scaling", "scaling", lhs, rhs, TOL_SCALING)
        .param("alpha", alpha)
        .param("m", m.to_vec())
        .param("xi", xi.to_vec())
        .param("f", ev.f.label());
    if alpha > 0.0 {
        Ok(r)
    } else {
        let res = r.rel_residual;
        Ok(r.with_measured(res)
            .with_criterion(crate::report::Criterion::Range { lo: None, hi: None })
            .diag("asserted", false))
    }
}

/// sup over a ξ-grid of |a_f(0, ξ) - ∫f|.
pub fn fixed_point_check(ev: &SymbolEvaluator, xis: &[f64]) -> Result<CheckReport> {
    let zero = vec![0.0; ev.space.n];
    let mut lhs = Vec::new();
    for &x in xis {
        let mut xi = vec![0.0; ev.space.n];
        xi[0] = x;
        lhs.push(ev.symbol(&zero, &xi)?);
    }
    let rhs = vec![C64::new(ev.f.integral(), 0.0); lhs.len()];
    Ok(CheckReport::compare("symbol.fixed_point", "fixed-point", lhs, rhs, TOL_FIXED_POINT)
        .param("f", ev.f.label())
        .param("space", ev.space.label())
        .param("xi", xis.to_vec()))
}

#[derive(Debug, Clone)]
pub struct DecayReport {
    pub taus: Vec<f64>,
    pub values: Vec<f64>,
    /// (τ, 2τ, slope of log|a| per log τ)
    pub bands: Vec<(f64, f64, f64)>,
    /// same for a central ξ-difference of a
    pub derivative_bands: Vec<(f64, f64, f64)>,
}

impl DecayReport {
    /// Largest band slope over bands starting at or above `from`.
    pub fn worst_slope_from(&self, from: f64) -> f64 {
        self.bands
            .iter()
            .filter(|b| b.0 >= from * (1.0 - 1e-12))
            .map(|b| b.2)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// |a(τ)| on octaves τ_max·2^{-k} ≥ τ_min and the slope of each octave band.
pub fn decay_probe(a: &dyn Fn(f64) -> Result<C64>, tau_min: f64, tau_max: f64) -> Result<DecayReport> {
    if !(0.0 < tau_min && tau_min < tau_max) {
        return Err(Error::domain("decay probe needs 0 < τ_min < τ_max"));
    }
    let mut taus = Vec::new();
    let mut t = tau_max;
    while t >= tau_min * (1.0 - 1e-12) {
        taus.push(t);
        t /= 2.0;
    }
    taus.reverse();
    let mut values = Vec::new();
    let mut derivs = Vec::new();
    for &t in &taus {
        let v = a(t)?.norm();
        if v < 1e-250 {
            return Err(Error::Accuracy {
                context: format!("symbol underflows at τ = {t}"),
                estimate: v,
                budget: 1e-250,
            });
        }
        let h = 1e-3 * t.max(1.0);
        let d = ((a(t + h)? - a(t - h)?) / (2.0 * h)).norm();
        values.push(v);
        derivs.push(d);
    }
    let slope = |vals: &[f64]| -> Vec<(f64, f64, f64)> {
        taus.windows(2)
            .zip(vals.windows(2))
            .map(|(t, v)| (t[0], t[1], (v[1].ln() - v[0].ln()) / (t[1] / t[0]).ln()))
            .collect()
    };
    Ok(DecayReport {
        bands: slope(&values),
        derivative_bands: slope(&derivs),
        taus,
        values,
    })
}

/// Every octave band from `from` on must have slope below `threshold`.
pub fn decay_check(rep: &DecayReport, from: f64, threshold: f64, label: &str) -> CheckReport {
    CheckReport::measure("symbol.decay", "decay", rep.worst_slope_from(from), None, Some(threshold))
        .param("source", label)
        .param("from", from)
        .param("tau", rep.taus.clone())
        .diag("values", rep.values.clone())
        .diag("slopes", rep.bands.iter().map(|b| b.2).collect::<Vec<_>>())
        .diag("derivative_slopes", rep.derivative_bands.iter().map(|b| b.2).collect::<Vec<_>>())
}

/// Ã_f(±1, u) = (1/2π)∫ e^{iuξ} ã_f(±1, ξ) dξ from a Filon expansion of F(η) = f̂(1, η) on
/// [0, W]: Ã_f(σ, u) = (1/π) Re ∫_0^W F(η) e^{i(σu - 1)η} dη.
pub struct AuxKernel {
    ev: SymbolEvaluator,
    parts: Vec<FilonExpansion>,
    pub cutoff: f64,
    pub error: f64,
}

impl AuxKernel {
    pub fn new(ev: SymbolEvaluator) -> Result<Self> {
        if ev.space.kind != SpaceKind::Scalar1D {
            return Err(Error::domain("kernels are assembled on the line"));
        }
        if ev.f.is_zero() {
            return Ok(AuxKernel {
                ev,
                parts: Vec::new(),
                cutoff: 0.0,
                error: 0.0,
            });
        }
        let mut cutoff = 2.0;
        // real-axis values bottom out near 1e-16, so stop at the roundoff floor
        while cutoff < 1e9 && ev.line(cutoff).norm() > 1e-15 {
            cutoff *= 2.0;
        }
        let f = |eta: f64| ev.line(eta);
        let tol = Tol::new(1e-15, 1e-14);
        let parts = vec![
            FilonExpansion::new(&f, 0.0, 1.0, tol)?,
            FilonExpansion::new(&f, 1.0, cutoff, tol)?,
        ];
        let error = parts.iter().map(|p| p.error).sum::<f64>() / PI;
        Ok(AuxKernel {
            ev,
            parts,
            cutoff,
            error,
        })
    }

    /// Ã_f(m, u); depends on m only through its sign.
    pub fn aux_kernel(&self, m: f64, u: f64) -> Result<f64> {
        if m == 0.0 {
            return Err(Error::domain("Ã_f needs m ≠ 0"));
        }
        let sigma = m.signum();
        let s: C64 = self.parts.iter().map(|p| p.transform(1.0 - sigma * u)).sum();
        Ok(s.re / PI)
    }

    /// K_f(m, m') = Ã_f(m, (m - m')/|m|)/|m|.
    pub fn kernel(&self, m: f64, mp: f64) -> Result<f64> {
        Ok(self.aux_kernel(m, (m - mp) / m.abs())? / m.abs())
    }

    pub fn evaluator(&self) -> &SymbolEvaluator {
        &self.ev
    }
}

/// (ã_f(m, ξ), Ã_f(m, (m - m')/|m|), K_f(m, m')) on the line.
pub fn aux_symbol_and_kernel(kern: &AuxKernel, m: f64, mp: f64, xi: f64) -> Result<(C64, f64, f64)> {
    let a = kern.ev.aux_symbol(&[m], &[xi])?;
    let u = (m - mp) / m.abs();
    let big_a = kern.aux_kernel(m, u)?;
    Ok((a, big_a, big_a / m.abs()))
}

/// Numerical K_f against the closed kernel f(m/m')/|m'| on a set of points.
pub fn kernel_duality_check(kern: &AuxKernel, points: &[(f64, f64)]) -> Result<CheckReport> {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &(m, mp) in points {
        lhs.push(C64::new(kern.kernel(m, mp)?, 0.0));
        rhs.push(C64::new(kern.ev.f.kernel(m, mp), 0.0));
    }
    let pts: Vec<Vec<f64>> = points.iter().map(|&(a, b)| vec![a, b]).collect();
    Ok(CheckReport::compare("symbol.kernel", "kernel", lhs, rhs, TOL_KERNEL)
        .with_criterion(crate::report::Criterion::Absolute { tol: TOL_KERNEL })
        .param("f", kern.ev.f.label())
        .param("points", pts)
        .diag("cutoff", kern.cutoff)
        .diag("expansion_error", kern.error))
}

/// ∫_{|m|>ε} ∫ |K_f(m, m')| dm' dm over [-R, R]², inner integral in log|m'|.
fn annulus_mass(f: &GroupFunction, lo: f64, hi: f64, r: f64) -> Result<f64> {
    let (slo, shi) = f.log_support();
    let inner = |m: f64| -> f64 {
        // m' = m e^{-s}, |K| dm' = f(e^s) ds, restricted to |m'| ≤ R
        let lower = slo.max((m / r).ln());
        if lower >= shi {
            return 0.0;
        }
        let g = |s: f64| C64::new(f.value(s.exp()), 0.0);
        adaptive(&g, lower, shi, Tol::new(1e-16, 1e-12)).map(|q| q.value.re).unwrap_or(f64::NAN)
    };
    let g = |m: f64| C64::new(inner(m), 0.0);
    // the kernel vanishes for mm' < 0, and m < 0 mirrors m > 0
    Ok(2.0 * adaptive(&g, lo, hi, Tol::new(1e-16, 1e-11))?.value.re)
}

/// Dyadic exclusions |m| < 2^{-j}, j = 1..=levels+1: the increments of ∫∫|K_f| over
/// [-R, R]² must shrink with ratio below `max_ratio`.
pub fn local_integrability_check(f: &GroupFunction, r: f64, levels: usize, max_ratio: f64) -> Result<CheckReport> {
    if !(r > 0.0) || levels == 0 {
        return Err(Error::domain("integrability check needs R > 0 and at least one level"));
    }
    let mut base = annulus_mass(f, 0.5f64.min(r), r, r)?;
    let mut increments = Vec::new();
    let mut totals = vec![base];
    for j in 1..=levels + 1 {
        let hi = 0.5f64.powi(j as i32).min(r);
        let lo = hi / 2.0;
        let inc = if f.is_zero() { 0.0 } else { annulus_mass(f, lo, hi, r)? };
        increments.push(inc);
        base += inc;
        totals.push(base);
    }
    let ratios: Vec<f64> = increments
        .windows(2)
        .map(|w| if w[0] == 0.0 { 0.0 } else { w[1] / w[0] })
        .collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    Ok(CheckReport::measure("symbol.integrability", "integrability", worst, None, Some(max_ratio))
        .param("f", f.label())
        .param("R", r)
        .param("levels", levels as u64)
        .diag("increments", increments)
        .diag("ratios", ratios)
        .diag("bound", base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heatflow::{ft_hat, heat_symbol, kernel_xy};
    use crate::quad::integrate_sphere;
    use nalgebra::DMatrix;
    use NormalizationVariant::Corrected;

    fn line_ev(f: &GroupFunction) -> SymbolEvaluator {
        SymbolEvaluator::new(f, &PVSpace::scalar1d()).unwrap()
    }

    #[test]
    fn heat_symbol_two_paths() {
        let f = GroupFunction::heat(0.5, Corrected).unwrap();
        assert!((f.integral() - 1.0).abs() < 1e-12);
        let ev = line_ev(&f);
        for &(x, xi) in &[(1.0, 0.3), (2.0, -1.5), (-0.7, 4.0), (1.0, 20.0)] {
            let a = ev.symbol(&[x], &[xi]).unwrap();
            let b = heat_symbol(0.5, x, xi, Corrected).unwrap();
            assert!((a - b).norm() < 1e-8, "{x} {xi}: {a} {b}");
            let fh = ev.f_hat(&[x], &[xi]).unwrap();
            assert!((fh - ft_hat(0.5, -x * xi, Corrected).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn bound_and_fixed_point() {
        let f = GroupFunction::log_gauss(1.0, 0.3).unwrap();
        let ev = line_ev(&f);
        let ms: Vec<f64> = (0..20).map(|i| -3.0 + 0.31 * i as f64).collect();
        let xis: Vec<f64> = (0..20).map(|i| -10.0 + 1.05 * i as f64).collect();
        let g = SymbolGrid::new(&ev, &ms, &xis).unwrap();
        assert!(g.bound_check().passed);
        let r = fixed_point_check(&ev, &[-5.0, 0.0, 1.0, 100.0]).unwrap();
        assert!(r.passed, "{}", r.rel_residual);
        assert!(g.to_csv().lines().count() == 401);
    }

    #[test]
    fn scaling_identity() {
        let f = GroupFunction::heat(0.25, Corrected).unwrap();
        let ev = line_ev(&f);
        assert_eq!(scaling_check(&ev, &[1.3], &[0.7], 1.0).unwrap().rel_residual, 0.0);
        for &a in &[0.3, 1.7, 3.0] {
            assert!(scaling_check(&ev, &[1.3], &[0.7], a).unwrap().passed);
        }
        assert!(scaling_check(&ev, &[1.3], &[0.7], -2.0).unwrap().passed);
    }

    #[test]
    fn definite_symbols() {
        let f = GroupFunction::log_gauss(2.0, 0.0).unwrap();
        for n in [2usize, 3] {
            let b = DMatrix::from_diagonal_element(n, n, 1.5);
            let sp = PVSpace::definite(b).unwrap();
            let ev = SymbolEvaluator::new(&f, &sp).unwrap();
            let m = vec![0.0; n];
            let mut xi = vec![0.0; n];
            xi[0] = 3.0;
            let v = ev.f_hat(&m, &xi).unwrap();
            assert!((v.re - f.integral()).abs() < 1e-12);
            let mut m1 = vec![0.0; n];
            m1[n - 1] = 0.8;
            let r = scaling_check(&ev, &m1, &xi, 1.9).unwrap();
            assert!(r.passed, "n={n}: {}", r.rel_residual);
            assert!(ev.f_hat(&m1, &xi).unwrap().norm() <= f.l1_norm() * (1.0 + 1e-12));
        }
        // n = 3 sinc path against the circle-style sphere average done by hand
        let sp = PVSpace::definite(DMatrix::identity(3, 3)).unwrap();
        let ev = SymbolEvaluator::new(&f, &sp).unwrap();
        let line = line_ev(&f);
        let k: f64 = 2.0;
        let g = |w: &[f64]| -> Result<C64> { line.f_hat(&[k * w[0]], &[1.0]) };
        let avg = integrate_sphere(3, &g, Tol::new(1e-14, 1e-11)).unwrap().value / (4.0 * PI);
        let v = ev.f_hat(&[k, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        let v2 = ev.f_hat(&[0.0, 0.0, 1.0], &[0.0, 0.0, k]).unwrap();
        assert!((v - v2).norm() < 1e-13);
        assert!((v - avg).norm() < 1e-9, "{v} {avg}");
    }

    #[test]
    fn decay_off_and_at_fixed_points() {
        let a = |tau: f64| heat_symbol(0.1, 1.0, tau, Corrected);
        let rep = decay_probe(&a, 5.0, 200.0).unwrap();
        let r = decay_check(&rep, 50.0, -8.0, "heat");
        assert!(r.passed, "{:?}", rep.bands);
        let z = |tau: f64| heat_symbol(0.1, 0.0, tau, Corrected);
        let rep = decay_probe(&z, 5.0, 200.0).unwrap();
        assert!(rep.bands.iter().all(|b| b.2.abs() < 1e-9));
        let d = (z(10.001).unwrap() - z(9.999).unwrap()).norm() / 0.002;
        assert!(d < 1e-10);
    }

    #[test]
    fn kernel_from_symbol_matches_heat_kernel() {
        let t = 0.5;
        let f = GroupFunction::heat(t, Corrected).unwrap();
        let kern = AuxKernel::new(line_ev(&f)).unwrap();
        let mut pts = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                pts.push((0.3 + 0.35 * i as f64, 0.2 + 0.4 * j as f64));
            }
        }
        let r = kernel_duality_check(&kern, &pts).unwrap();
        assert!(r.passed, "{} {:?}", r.abs_residual, r.diagnostics);
        for &(x, y) in &[(2.0, 3.0), (-1.0, -2.5)] {
            let k = kern.kernel(x, y).unwrap();
            assert!((k - kernel_xy(t, x, y, Corrected)).abs() < 1e-7);
        }
        // wrong sign and far away
        assert!(kern.kernel(1.0, -0.5).unwrap().abs() < 1e-10);
        assert!(kern.kernel(1.0, -19.0).unwrap().abs() < 1e-10);
        // Ã depends on the direction only, K is homogeneous of degree -1
        let a1 = kern.aux_kernel(1.0, 0.4).unwrap();
        assert_eq!(a1, kern.aux_kernel(3.0, 0.4).unwrap());
        let k1 = kern.kernel(1.2, 0.9).unwrap();
        let k2 = kern.kernel(2.4, 1.8).unwrap();
        assert!((k1 - 2.0 * k2).abs() < 1e-8 * k1.abs());
    }

    #[test]
    fn integrability() {
        let f = GroupFunction::heat(0.5, Corrected).unwrap();
        let r = local_integrability_check(&f, 1.0, 6, 0.75).unwrap();
        assert!(r.passed, "{:?}", r.diagnostics);
        let z = local_integrability_check(&GroupFunction::zero(), 1.0, 6, 0.75).unwrap();
        assert!(z.passed);
    }
}
