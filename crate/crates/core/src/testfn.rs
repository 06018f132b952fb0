//! Schwartz-class test functions on R^n (n ≤ 3) with exact ray derivatives and Fourier
//! transforms under explicitly named conventions.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};
use crate::params::{fmt_matrix, fmt_real, parse_matrix, SpecString};
use crate::poly::{Poly, MAX_DIM};
use crate::quad::{integrate_1d, integrate_ball, FilonExpansion, SingularitySpec, Tol};

/// ln(1e18): beyond this exponent a Gaussian factor is treated as zero.
const TAIL_EXP: f64 = 41.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FourierConvention {
    /// φ̂(ξ) = ∫ φ(m) e^{-2πi m·ξ} dm
    TwoPi,
    /// φ̂(ξ) = ∫ φ(m) e^{-i m·ξ} dm
    Angular,
    /// φ̂(ξ) = (2π)^{-n} ∫ φ(m) e^{i m·ξ} dm, inverted with e^{-i m·ξ} dξ
    AngularNormalized,
}

impl FourierConvention {
    pub const ALL: [FourierConvention; 3] = [
        FourierConvention::TwoPi,
        FourierConvention::Angular,
        FourierConvention::AngularNormalized,
    ];

    pub fn kernel(self, n: usize) -> FourierKernel {
        match self {
            FourierConvention::TwoPi => FourierKernel::new(-1.0, 2.0 * PI, 1.0),
            FourierConvention::Angular => FourierKernel::new(-1.0, 1.0, 1.0),
            FourierConvention::AngularNormalized => {
                FourierKernel::new(1.0, 1.0, (2.0 * PI).powi(-(n as i32)))
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FourierConvention::TwoPi => "twopi",
            FourierConvention::Angular => "angular",
            FourierConvention::AngularNormalized => "angular-normalized",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "twopi" | "two-pi" => Ok(FourierConvention::TwoPi),
            "angular" => Ok(FourierConvention::Angular),
            "angular-normalized" | "angularnormalized" => {
                Ok(FourierConvention::AngularNormalized)
            }
            _ => Err(Error::config("convention", format!("unknown convention `{s}`"))),
        }
    }
}

impl fmt::Display for FourierConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// φ̂(ξ) = pref · ∫ φ(m) e^{i σ c m·ξ} dm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierKernel {
    pub sigma: f64,
    pub c: f64,
    pub pref: f64,
}

impl FourierKernel {
    pub fn new(sigma: f64, c: f64, pref: f64) -> Self {
        FourierKernel { sigma, c, pref }
    }

    /// The kernel that undoes this one on R^n.
    pub fn inverse(&self, n: usize) -> FourierKernel {
        FourierKernel {
            sigma: -self.sigma,
            c: self.c,
            pref: (self.c / (2.0 * PI)).powi(n as i32) / self.pref,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Decay {
    Gaussian { rate: f64 },
    Compact { radius: f64 },
    LogGaussian { rate: f64 },
    Exponential { rate: f64 },
    /// Transform of a compactly supported function: smooth, decaying faster than any power.
    Rapid,
    Zero,
}

#[derive(Debug, Clone)]
enum Kind {
    Zero,
    /// poly(m) e^{-mᵀQm}
    PolyGauss { poly: Poly, q: DMatrix<f64> },
    /// e^{-1/(1-|u|²)} with u = (m - center)/radius
    Bump { center: Vec<f64>, radius: f64 },
    /// e^{-a (log x - mu)²} on x > 0, zero elsewhere
    LogGauss { a: f64, mu: f64 },
    /// e^{-a x} on x ≥ 0, zero elsewhere
    ExpHalf { a: f64 },
    /// ∫ g(y) e^{-i ω y} dy evaluated at ω = omega_scale · ξ
    NumericFt { exp: Arc<FilonExpansion>, omega_scale: f64 },
}

#[derive(Debug, Clone)]
pub struct TestFunction {
    n: usize,
    kind: Kind,
    factor: C64,
    label: String,
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::domain(format!("dimension {n} not supported (1..=3)")))
    }
}

fn quad_form(q: &DMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += x[i] * q[(i, j)] * y[j];
        }
    }
    s
}

fn zero_jet(order: usize) -> Jet {
    Jet::constant(C64::new(0.0, 0.0), order)
}

impl TestFunction {
    pub fn zero(n: usize) -> Self {
        TestFunction {
            n,
            kind: Kind::Zero,
            factor: C64::new(1.0, 0.0),
            label: format!("zero:n={n}"),
        }
    }

    /// e^{-a|m|²}
    pub fn gaussian(a: f64, n: usize) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::domain("gaussian needs a > 0"));
        }
        check_dim(n)?;
        Ok(TestFunction {
            n,
            kind: Kind::PolyGauss {
                poly: Poly::constant(n, C64::new(1.0, 0.0)),
                q: DMatrix::identity(n, n) * a,
            },
            factor: C64::new(1.0, 0.0),
            label: format!("gaussian:a={},n={n}", fmt_real(a)),
        })
    }

    /// e^{-a mᵀBm} for symmetric positive definite B.
    pub fn gaussian_form(a: f64, b: &DMatrix<f64>) -> Result<Self> {
        let n = b.nrows();
        check_dim(n)?;
        let eig = nalgebra::SymmetricEigen::new(b.clone());
        if !(a > 0.0) || eig.eigenvalues.min() <= 0.0 {
            return Err(Error::domain("gaussian form must be positive definite"));
        }
        Ok(TestFunction {
            n,
            kind: Kind::PolyGauss {
                poly: Poly::constant(n, C64::new(1.0, 0.0)),
                q: b * a,
            },
            factor: C64::new(1.0, 0.0),
            label: format!("gaussian:a={},n={n},B={}", fmt_real(a), fmt_matrix(b)),
        })
    }

    /// m_1^k e^{-a|m|²}
    pub fn hermite_gaussian(k: usize, a: f64, n: usize) -> Result<Self> {
        if k > 4 {
            return Err(Error::domain("polynomial degree above 4"));
        }
        let mut g = TestFunction::gaussian(a, n)?;
        let mut e = [0u8; MAX_DIM];
        e[0] = k as u8;
        if let Kind::PolyGauss { poly, .. } = &mut g.kind {
            *poly = Poly::monomial(n, e, C64::new(1.0, 0.0));
        }
        g.label = format!("hermite:k={k},a={},n={n}", fmt_real(a));
        Ok(g)
    }

    /// poly(m) e^{-mᵀQm} with Q symmetric positive definite.
    pub fn poly_gauss(poly: Poly, q: DMatrix<f64>, label: impl Into<String>) -> Result<Self> {
        let n = poly.n;
        check_dim(n)?;
        if q.nrows() != n || nalgebra::SymmetricEigen::new(q.clone()).eigenvalues.min() <= 0.0 {
            return Err(Error::domain("Q must be an n×n positive definite matrix"));
        }
        Ok(TestFunction {
            n,
            kind: Kind::PolyGauss { poly, q },
            factor: C64::new(1.0, 0.0),
            label: label.into(),
        })
    }

    pub fn bump(center: &[f64], radius: f64) -> Result<Self> {
        let n = center.len();
        check_dim(n)?;
        if !(radius > 0.0) {
            return Err(Error::domain("bump needs radius > 0"));
        }
        let c: Vec<String> = center.iter().map(|x| fmt_real(*x)).collect();
        Ok(TestFunction {
            n,
            kind: Kind::Bump {
                center: center.to_vec(),
                radius,
            },
            factor: C64::new(1.0, 0.0),
            label: format!("bump:c={},r={},n={n}", c.join(";"), fmt_real(radius)),
        })
    }

    /// e^{-a (log x - mu)²} for x > 0, zero for x ≤ 0.
    pub fn log_gauss(a: f64, mu: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::domain("loggauss needs a > 0"));
        }
        Ok(TestFunction {
            n: 1,
            kind: Kind::LogGauss { a, mu },
            factor: C64::new(1.0, 0.0),
            label: format!("loggauss:a={},mu={}", fmt_real(a), fmt_real(mu)),
        })
    }

    /// e^{-a x} for x ≥ 0, zero for x < 0. Only its restriction to the half-line is smooth.
    pub fn exp_half(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::domain("exp needs a > 0"));
        }
        Ok(TestFunction {
            n: 1,
            kind: Kind::ExpHalf { a },
            factor: C64::new(1.0, 0.0),
            label: format!("exp:a={}", fmt_real(a)),
        })
    }

    /// Parses `gaussian:a=pi,n=1[,B=diag(..)]`, `hermite:k=2,a=pi,n=1`, `bump:c=0,r=1,n=1`,
    /// `loggauss:a=1,mu=0`, `exp:a=1`, `zero:n=1`.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = SpecString::parse(spec)?;
        let f = match s.head.as_str() {
            "gaussian" => {
                s.only(&["a", "n", "B"])?;
                let a = s.real("a", Some(PI))?;
                let n = s.usize("n", Some(1))?;
                match s.keys.get("B") {
                    Some(b) => TestFunction::gaussian_form(a, &parse_matrix(b, n)?)?,
                    None => TestFunction::gaussian(a, n)?,
                }
            }
            "hermite" => {
                s.only(&["k", "a", "n"])?;
                TestFunction::hermite_gaussian(
                    s.usize("k", None)?,
                    s.real("a", Some(PI))?,
                    s.usize("n", Some(1))?,
                )?
            }
            "bump" => {
                s.only(&["c", "r", "n"])?;
                let n = s.usize("n", Some(1))?;
                let c = match s.keys.get("c") {
                    Some(v) => {
                        let parts: Vec<f64> = v
                            .split(';')
                            .map(crate::params::parse_real)
                            .collect::<Result<_>>()?;
                        if parts.len() == 1 {
                            vec![parts[0]; n]
                        } else {
                            parts
                        }
                    }
                    None => vec![0.0; n],
                };
                if c.len() != n {
                    return Err(Error::config("c", "center length differs from n"));
                }
                TestFunction::bump(&c, s.real("r", Some(1.0))?)?
            }
            "loggauss" => {
                s.only(&["a", "mu"])?;
                TestFunction::log_gauss(s.real("a", Some(1.0))?, s.real("mu", Some(0.0))?)?
            }
            "exp" => {
                s.only(&["a"])?;
                TestFunction::exp_half(s.real("a", Some(1.0))?)?
            }
            "zero" => {
                s.only(&["n"])?;
                let n = s.usize("n", Some(1))?;
                check_dim(n)?;
                TestFunction::zero(n)
            }
            other => {
                return Err(Error::config(
                    "testfn",
                    format!("unknown test function family `{other}`"),
                ))
            }
        };
        Ok(f.with_label(spec.trim()))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, Kind::Zero) || self.factor == C64::new(0.0, 0.0)
    }

    /// c · φ
    pub fn times(&self, c: C64) -> Self {
        let mut g = self.clone();
        g.factor *= c;
        g.label = format!("({})*({})", c, self.label);
        g
    }

    /// m ↦ φ(m/λ) for λ > 0.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::domain("rescaling needs λ > 0"));
        }
        let kind = match &self.kind {
            Kind::Zero => Kind::Zero,
            Kind::PolyGauss { poly, q } => Kind::PolyGauss {
                poly: poly.dilate(1.0 / lambda),
                q: q / (lambda * lambda),
            },
            Kind::Bump { center, radius } => Kind::Bump {
                center: center.iter().map(|c| c * lambda).collect(),
                radius: radius * lambda,
            },
            Kind::LogGauss { a, mu } => Kind::LogGauss {
                a: *a,
                mu: mu + lambda.ln(),
            },
            Kind::ExpHalf { a } => Kind::ExpHalf { a: a / lambda },
            Kind::NumericFt { exp, omega_scale } => Kind::NumericFt {
                exp: exp.clone(),
                omega_scale: omega_scale / lambda,
            },
        };
        Ok(TestFunction {
            n: self.n,
            kind,
            factor: self.factor,
            label: format!("({})(m/{})", self.label, fmt_real(lambda)),
        })
    }

    pub fn decay(&self) -> Decay {
        match &self.kind {
            Kind::Zero => Decay::Zero,
            Kind::PolyGauss { q, .. } => Decay::Gaussian {
                rate: nalgebra::SymmetricEigen::new(q.clone()).eigenvalues.min(),
            },
            Kind::Bump { center, radius } => Decay::Compact {
                radius: center.iter().map(|c| c * c).sum::<f64>().sqrt() + radius,
            },
            Kind::LogGauss { a, .. } => Decay::LogGaussian { rate: *a },
            Kind::ExpHalf { a } => Decay::Exponential { rate: *a },
            Kind::NumericFt { .. } => Decay::Rapid,
        }
    }

    /// Radius outside which |φ| is below ~1e-18 of its scale; None for slowly decaying
    /// transforms of compactly supported functions.
    pub fn extent(&self) -> Option<f64> {
        match &self.kind {
            Kind::Zero => Some(0.0),
            Kind::PolyGauss { poly, q } => {
                let lmin = nalgebra::SymmetricEigen::new(q.clone()).eigenvalues.min();
                let d = poly.degree() as f64;
                let mut r = (TAIL_EXP / lmin).sqrt();
                for _ in 0..3 {
                    r = ((TAIL_EXP + d * r.max(1.0).ln()) / lmin).sqrt();
                }
                Some(r)
            }
            Kind::Bump { center, radius } => {
                Some(center.iter().map(|c| c * c).sum::<f64>().sqrt() + radius)
            }
            Kind::LogGauss { a, mu } => Some((mu + (TAIL_EXP / a).sqrt()).exp()),
            Kind::ExpHalf { a } => Some((TAIL_EXP + 5.0) / a),
            Kind::NumericFt { .. } => None,
        }
    }

    /// Interval outside of which a one-dimensional function is negligible.
    pub fn support_1d(&self) -> Option<(f64, f64)> {
        match &self.kind {
            Kind::Bump { center, radius } if self.n == 1 => {
                Some((center[0] - radius, center[0] + radius))
            }
            Kind::LogGauss { a, mu } => {
                let w = (TAIL_EXP / a).sqrt();
                Some(((mu - w).exp(), (mu + w).exp()))
            }
            Kind::ExpHalf { .. } => Some((0.0, self.extent().unwrap())),
            _ if self.n == 1 => self.extent().map(|r| (-r, r)),
            _ => None,
        }
    }

    pub fn value(&self, m: &[f64]) -> C64 {
        debug_assert_eq!(m.len(), self.n);
        let v = match &self.kind {
            Kind::Zero => return C64::new(0.0, 0.0),
            Kind::PolyGauss { poly, q } => {
                let e = quad_form(q, m, m);
                if e > 745.0 {
                    return C64::new(0.0, 0.0);
                }
                poly.eval(m) * (-e).exp()
            }
            Kind::Bump { center, radius } => {
                let u2: f64 = m
                    .iter()
                    .zip(center)
                    .map(|(x, c)| ((x - c) / radius).powi(2))
                    .sum();
                if u2 >= 1.0 {
                    return C64::new(0.0, 0.0);
                }
                C64::new((-1.0 / (1.0 - u2)).exp(), 0.0)
            }
            Kind::LogGauss { a, mu } => {
                if m[0] <= 0.0 {
                    return C64::new(0.0, 0.0);
                }
                C64::new((-a * (m[0].ln() - mu).powi(2)).exp(), 0.0)
            }
            Kind::ExpHalf { a } => {
                if m[0] < 0.0 {
                    return C64::new(0.0, 0.0);
                }
                C64::new((-a * m[0]).exp(), 0.0)
            }
            Kind::NumericFt { exp, omega_scale } => exp.transform(omega_scale * m[0]),
        };
        v * self.factor
    }

    pub fn value_1d(&self, x: f64) -> C64 {
        self.value(&[x])
    }

    /// Taylor jet of h ↦ φ(b + (r0 + h) d) at h = 0, exact for every built-in family.
    pub fn ray_jet(&self, b: &[f64], d: &[f64], r0: f64, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::domain(format!("derivative order {order} above {MAX_ORDER}")));
        }
        let x0: Vec<f64> = b.iter().zip(d).map(|(bi, di)| bi + r0 * di).collect();
        let jet = match &self.kind {
            Kind::Zero => zero_jet(order),
            Kind::PolyGauss { poly, q } => {
                let c0 = quad_form(q, &x0, &x0);
                let c1 = 2.0 * quad_form(q, d, &x0);
                let c2 = quad_form(q, d, d);
                let mut ex = zero_jet(order);
                ex.c[0] = C64::new(-c0, 0.0);
                if order >= 1 {
                    ex.c[1] = C64::new(-c1, 0.0);
                }
                if order >= 2 {
                    ex.c[2] = C64::new(-c2, 0.0);
                }
                let mut p = zero_jet(order);
                for (k, v) in poly.restrict_to_ray(&x0, d).into_iter().enumerate() {
                    if k <= order {
                        p.c[k] = v;
                    }
                }
                &p * &ex.exp()
            }
            Kind::Bump { center, radius } => {
                let y: Vec<f64> = x0.iter().zip(center).map(|(x, c)| x - c).collect();
                let r2 = radius * radius;
                let u0 = y.iter().map(|v| v * v).sum::<f64>() / r2;
                if u0 >= 1.0 {
                    zero_jet(order)
                } else {
                    let u1 = 2.0 * y.iter().zip(d).map(|(a, b)| a * b).sum::<f64>() / r2;
                    let u2 = d.iter().map(|v| v * v).sum::<f64>() / r2;
                    let mut v = zero_jet(order);
                    v.c[0] = C64::new(1.0 - u0, 0.0);
                    if order >= 1 {
                        v.c[1] = C64::new(-u1, 0.0);
                    }
                    if order >= 2 {
                        v.c[2] = C64::new(-u2, 0.0);
                    }
                    v.recip().scale(C64::new(-1.0, 0.0)).exp()
                }
            }
            Kind::LogGauss { a, mu } => {
                if x0[0] <= 0.0 {
                    zero_jet(order)
                } else {
                    let x = Jet::variable(x0[0], order).chain_linear(d[0]);
                    x.ln()
                        .add_const(C64::new(-mu, 0.0))
                        .square()
                        .scale(C64::new(-a, 0.0))
                        .exp()
                }
            }
            Kind::ExpHalf { a } => {
                if x0[0] < 0.0 {
                    zero_jet(order)
                } else {
                    // e^{-a(x0 + h d)}
                    let mut c = zero_jet(order);
                    let mut t = (-a * x0[0]).exp();
                    for k in 0..=order {
                        c.c[k] = C64::new(t, 0.0);
                        t *= -a * d[0] / (k + 1) as f64;
                    }
                    c
                }
            }
            Kind::NumericFt { exp, omega_scale } => {
                if order > 0 {
                    return Err(Error::domain(
                        "derivatives of quadrature-backed transforms are not available",
                    ));
                }
                Jet::constant(exp.transform(omega_scale * x0[0]), 0)
            }
        };
        Ok(jet.scale(self.factor))
    }

    /// k-th derivative of a one-dimensional function at x (one-sided for half-line families).
    pub fn derivative_1d(&self, x: f64, k: usize) -> Result<C64> {
        Ok(self.ray_jet(&[x], &[1.0], 0.0, k)?.derivatives()[k])
    }

    /// ∂^k/∂m_i^k φ(m)
    pub fn axis_derivative(&self, m: &[f64], i: usize, k: usize) -> Result<C64> {
        let mut d = vec![0.0; self.n];
        d[i] = 1.0;
        Ok(self.ray_jet(m, &d, 0.0, k)?.derivatives()[k])
    }

    /// ∫ φ dm
    pub fn integral(&self, tol: Tol) -> Result<C64> {
        if let Kind::PolyGauss { .. } = self.kind {
            // φ̂(0) under the TwoPi convention.
            let z = vec![0.0; self.n];
            return Ok(self.fourier(FourierConvention::TwoPi)?.value(&z));
        }
        if self.n == 1 {
            let (lo, hi) = self
                .support_1d()
                .ok_or_else(|| Error::domain("no finite support for integration"))?;
            let f = |x: f64| self.value_1d(x);
            return Ok(integrate_1d(&f, lo, hi, SingularitySpec::SMOOTH, tol)?.value);
        }
        let ext = self
            .extent()
            .ok_or_else(|| Error::domain("no finite extent for integration"))?;
        let f = |m: &[f64]| self.value(m);
        Ok(integrate_ball(&f, self.n, ext, tol)?.value)
    }

    /// ∂φ/∂m_i as a new test function (polynomial-Gaussian families only).
    pub fn partial(&self, i: usize) -> Result<TestFunction> {
        match &self.kind {
            Kind::Zero => Ok(self.clone()),
            Kind::PolyGauss { poly, q } => {
                let row: Vec<f64> = (0..self.n).map(|j| -2.0 * q[(i, j)]).collect();
                Ok(TestFunction {
                    n: self.n,
                    kind: Kind::PolyGauss {
                        poly: poly.deriv(i).add(&poly.mul_linear(&row)),
                        q: q.clone(),
                    },
                    factor: self.factor,
                    label: format!("d{}[{}]", i + 1, self.label),
                })
            }
            _ => Err(Error::domain(format!(
                "closed-form derivatives are only available for polynomial-Gaussians, not {}",
                self.label
            ))),
        }
    }

    /// Σ a_ij ∂_i ∂_j φ (polynomial-Gaussian families only).
    pub fn second_order(&self, a: &DMatrix<f64>) -> Result<TestFunction> {
        let n = self.n;
        let mut acc: Option<(Poly, DMatrix<f64>)> = None;
        for i in 0..n {
            let di = self.partial(i)?;
            for j in 0..n {
                if a[(i, j)] == 0.0 {
                    continue;
                }
                let dij = di.partial(j)?;
                if let Kind::PolyGauss { poly, q } = dij.kind {
                    let term = poly.scale(C64::new(a[(i, j)], 0.0));
                    acc = Some(match acc {
                        None => (term, q),
                        Some((p, q0)) => (p.add(&term), q0),
                    });
                } else {
                    return Ok(TestFunction::zero(n));
                }
            }
        }
        Ok(match acc {
            None => TestFunction::zero(n),
            Some((poly, q)) => TestFunction {
                n,
                kind: Kind::PolyGauss { poly, q },
                factor: self.factor,
                label: format!("D[{}]", self.label),
            },
        })
    }

    pub fn fourier(&self, conv: FourierConvention) -> Result<TestFunction> {
        let mut g = self.fourier_with(conv.kernel(self.n))?;
        g.label = format!("F_{}[{}]", conv.name(), self.label);
        Ok(g)
    }

    /// Transform under an explicit kernel. Closed form for polynomial-Gaussians,
    /// a Filon expansion of the function for one-dimensional numerical families.
    pub fn fourier_with(&self, k: FourierKernel) -> Result<TestFunction> {
        let n = self.n;
        let label = format!("F[{}]", self.label);
        match &self.kind {
            Kind::Zero => Ok(TestFunction::zero(n).with_label(label)),
            Kind::PolyGauss { poly, q } => {
                let qinv = q
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::domain("singular Gaussian form"))?;
                let a = &qinv * 0.25;
                let kconst = PI.powf(n as f64 / 2.0) / q.determinant().sqrt();
                // ∫ m^α e^{-mQm} e^{i m·ω} dm = (-i∂_ω)^α [K e^{-ωᵀAω}]
                let mut out = Poly::zero(n);
                let mi = C64::new(0.0, -1.0);
                for (e, c) in &poly.terms {
                    let mut p = Poly::constant(n, *c);
                    for i in 0..n {
                        let row: Vec<f64> = (0..n).map(|j| -2.0 * a[(i, j)]).collect();
                        for _ in 0..e[i] {
                            p = p.deriv(i).add(&p.mul_linear(&row)).scale(mi);
                        }
                    }
                    out = out.add(&p);
                }
                let lam = k.sigma * k.c;
                Ok(TestFunction {
                    n,
                    kind: Kind::PolyGauss {
                        poly: out.dilate(lam),
                        q: a * (lam * lam),
                    },
                    factor: self.factor * (k.pref * kconst),
                    label,
                })
            }
            Kind::NumericFt { .. } => Err(Error::domain(
                "transform of a quadrature-backed transform is not supported",
            )),
            _ => {
                if n != 1 {
                    return Err(Error::domain(
                        "numerical transforms are implemented for n = 1 only",
                    ));
                }
                let (lo, hi) = self.support_1d().unwrap();
                let unit = TestFunction {
                    factor: C64::new(1.0, 0.0),
                    ..self.clone()
                };
                let f = |y: f64| unit.value_1d(y);
                let exp = FilonExpansion::new(&f, lo, hi, Tol::new(1e-17, 1e-13))?;
                if exp.error > 1e-10 * exp.integral().norm().max(1e-300) {
                    return Err(Error::Accuracy {
                        context: format!("Filon expansion of {}", self.label),
                        estimate: exp.error,
                        budget: 1e-10,
                    });
                }
                Ok(TestFunction {
                    n,
                    kind: Kind::NumericFt {
                        exp: Arc::new(exp),
                        omega_scale: -k.sigma * k.c,
                    },
                    factor: self.factor * k.pref,
                    label,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_values() {
        let g = TestFunction::gaussian(PI, 1).unwrap();
        assert_eq!(g.value_1d(0.0), C64::new(1.0, 0.0));
        assert!(g.derivative_1d(0.0, 1).unwrap().norm() < 1e-15);
        let h = TestFunction::gaussian(0.5, 1).unwrap();
        assert!((h.derivative_1d(0.0, 2).unwrap().re + 1.0).abs() < 1e-14);
        let m2 = TestFunction::hermite_gaussian(2, PI, 1).unwrap();
        assert!((m2.value_1d(1.0).re - (-PI).exp()).abs() < 1e-15);
        let b = TestFunction::bump(&[0.0], 1.0).unwrap();
        assert!((b.value_1d(0.0).re - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(b.value_1d(1.0).re, 0.0);
    }

    #[test]
    fn closed_form_transforms() {
        let g = TestFunction::gaussian(PI, 1).unwrap();
        let f = g.fourier(FourierConvention::TwoPi).unwrap();
        for &x in &[0.0, 0.3, 1.7] {
            assert!((f.value_1d(x) - g.value_1d(x)).norm() < 1e-14);
        }
        let h = TestFunction::gaussian(0.5, 1).unwrap();
        let fh = h.fourier(FourierConvention::Angular).unwrap();
        let want = (2.0 * PI).sqrt() * h.value_1d(1.3).re;
        assert!((fh.value_1d(1.3).re - want).abs() < 1e-14);
    }

    #[test]
    fn hermite_transform_matches_quadrature() {
        let m2 = TestFunction::hermite_gaussian(2, PI, 1).unwrap();
        let f = m2.fourier(FourierConvention::TwoPi).unwrap();
        let xi = 0.7;
        let g = |m: f64| m2.value_1d(m) * C64::new(0.0, -2.0 * PI * m * xi).exp();
        let q = integrate_1d(&g, -8.0, 8.0, SingularitySpec::SMOOTH, Tol::default()).unwrap();
        assert!((q.value - f.value_1d(xi)).norm() / q.value.norm() < 1e-10);
    }

    #[test]
    fn bump_transform_at_zero_is_mass() {
        let b = TestFunction::bump(&[0.0], 1.0).unwrap();
        let f = b.fourier(FourierConvention::TwoPi).unwrap();
        let mass = b.integral(Tol::default()).unwrap();
        assert!((f.value_1d(0.0) - mass).norm() < 1e-12);
    }

    #[test]
    fn ray_jet_of_loggauss() {
        let l = TestFunction::log_gauss(1.0, 0.2).unwrap();
        let x = 1.3;
        let h = 1e-4;
        let fd = (l.value_1d(x + h) - l.value_1d(x - h)) / (2.0 * h);
        assert!((l.derivative_1d(x, 1).unwrap() - fd).norm() < 1e-7);
    }

    #[test]
    fn second_order_of_gaussian() {
        // Laplacian of e^{-π|m|²} in R³ is (4π²|m|² - 6π) e^{-π|m|²}.
        let g = TestFunction::gaussian(PI, 3).unwrap();
        let l = g.second_order(&DMatrix::identity(3, 3)).unwrap();
        let m = [0.3, -0.2, 0.5];
        let r2: f64 = m.iter().map(|x| x * x).sum();
        let want = (4.0 * PI * PI * r2 - 6.0 * PI) * g.value(&m).re;
        assert!((l.value(&m).re - want).abs() < 1e-13);
    }

    #[test]
    fn parse_specs() {
        let g = TestFunction::parse("gaussian:a=2.5,n=1").unwrap();
        assert!((g.value_1d(1.0).re - (-2.5f64).exp()).abs() < 1e-15);
        let b = TestFunction::parse("bump:c=0,r=1,n=3").unwrap();
        assert_eq!(b.dim(), 3);
        assert!(TestFunction::parse("gaussian:a=1,z=2").is_err());
    }
}
