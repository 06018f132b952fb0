use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::{gauss_legendre, integrate_1d, QuadResult, SingularitySpec, Tol};
use crate::error::{Error, Result};

/// Points on S^{n-1} with weights summing to the surface measure.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// Product rule of refinement `level`: trapezoid on circles, Gauss in cos θ on S².
    pub fn product(n: usize, level: u32) -> Result<Self> {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        match n {
            1 => {
                points.push(vec![1.0]);
                points.push(vec![-1.0]);
                weights.extend([1.0, 1.0]);
            }
            2 => {
                let m = 8usize << level;
                for k in 0..m {
                    let th = 2.0 * PI * (k as f64 + 0.5) / m as f64;
                    points.push(vec![th.cos(), th.sin()]);
                    weights.push(2.0 * PI / m as f64);
                }
            }
            3 => {
                let nt = 6usize << level;
                let np = 2 * nt;
                let gl = gauss_legendre(nt);
                for (z, w) in gl.0.iter().zip(&gl.1) {
                    let rho = (1.0 - z * z).sqrt();
                    for k in 0..np {
                        let ph = 2.0 * PI * (k as f64 + 0.5) / np as f64;
                        points.push(vec![rho * ph.cos(), rho * ph.sin(), *z]);
                        weights.push(w * 2.0 * PI / np as f64);
                    }
                }
            }
            _ => return Err(Error::domain(format!("sphere rules only for n <= 3, got {n}"))),
        }
        Ok(SphereRule {
            n,
            points,
            weights,
        })
    }

    pub fn surface(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// The 26-point Lebedev rule on S², exact for spherical polynomials of degree 7.
pub fn lebedev26() -> SphereRule {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let total = 4.0 * PI;
    for i in 0..3 {
        for s in [1.0, -1.0] {
            let mut p = vec![0.0; 3];
            p[i] = s;
            points.push(p);
            weights.push(total / 21.0);
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for si in [1.0, -1.0] {
            for sj in [1.0, -1.0] {
                let mut p = vec![0.0; 3];
                p[i] = si * h;
                p[j] = sj * h;
                points.push(p);
                weights.push(total * 4.0 / 105.0);
            }
        }
    }
    let c = 1.0 / 3f64.sqrt();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                points.push(vec![sx * c, sy * c, sz * c]);
                weights.push(total * 27.0 / 840.0);
            }
        }
    }
    SphereRule {
        n: 3,
        points,
        weights,
    }
}

/// ∫_{S^{n-1}} g(ω) dω, refining the product rule until two levels agree.
pub fn integrate_sphere(
    n: usize,
    g: &dyn Fn(&[f64]) -> Result<C64>,
    tol: Tol,
) -> Result<QuadResult> {
    let eval = |rule: &SphereRule| -> Result<(C64, f64)> {
        let mut s = C64::new(0.0, 0.0);
        let mut a = 0.0;
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let v = g(p)?;
            s += v * *w;
            a += v.norm() * w;
        }
        Ok((s, a))
    };
    let first = SphereRule::product(n, 0)?;
    let (mut prev, _) = eval(&first)?;
    let mut evals = first.points.len();
    if n == 1 {
        return Ok(QuadResult {
            value: prev,
            error: 0.0,
            evaluations: evals,
            truncation: None,
        });
    }
    for level in 1..=6 {
        let rule = SphereRule::product(n, level)?;
        let (cur, absval) = eval(&rule)?;
        evals += rule.points.len();
        let diff = (cur - prev).norm();
        if diff <= tol.abs.max(tol.rel * cur.norm()).max(1e-15 * absval) {
            return Ok(QuadResult {
                value: cur,
                error: diff,
                evaluations: evals,
                truncation: None,
            });
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        context: format!("sphere quadrature on S^{}", n - 1),
        estimate: f64::NAN,
        evaluations: evals,
    })
}

/// ∫_{R^n} f(m) dm for f negligible outside the ball of radius `extent`.
pub fn integrate_ball(
    f: &dyn Fn(&[f64]) -> C64,
    n: usize,
    extent: f64,
    tol: Tol,
) -> Result<QuadResult> {
    let radial = |w: &[f64]| -> Result<C64> {
        let g = |r: f64| -> C64 {
            let m: Vec<f64> = w.iter().map(|x| x * r).collect();
            f(&m) * r.powi(n as i32 - 1)
        };
        Ok(integrate_1d(&g, 0.0, extent, SingularitySpec::SMOOTH, tol)?.value)
    };
    integrate_sphere(n, &radial, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_measures() {
        assert!((SphereRule::product(3, 0).unwrap().surface() - 4.0 * PI).abs() < 1e-13);
        assert!((SphereRule::product(2, 1).unwrap().surface() - 2.0 * PI).abs() < 1e-13);
        assert!((lebedev26().surface() - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn lebedev_degree_seven() {
        // Averages over S²: x^4 -> 1/5, x^2 y^2 -> 1/15.
        let r = lebedev26();
        let avg = |f: &dyn Fn(&[f64]) -> f64| {
            r.points
                .iter()
                .zip(&r.weights)
                .map(|(p, w)| f(p) * w)
                .sum::<f64>()
                / (4.0 * PI)
        };
        assert!((avg(&|p| p[0].powi(4)) - 0.2).abs() < 1e-14);
        assert!((avg(&|p| (p[0] * p[1]).powi(2)) - 1.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn ball_integrals() {
        let tol = Tol::new(1e-14, 1e-12);
        let g3 = |m: &[f64]| C64::new((-PI * m.iter().map(|x| x * x).sum::<f64>()).exp(), 0.0);
        let r = integrate_ball(&g3, 3, 4.0, tol).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-11, "{:?}", r.value);
        let g2 = |m: &[f64]| {
            let r2: f64 = m.iter().map(|x| x * x).sum();
            C64::new(r2.sqrt() * (-PI * r2).exp(), 0.0)
        };
        let r = integrate_ball(&g2, 2, 4.0, tol).unwrap();
        assert!((r.value.re - 0.5).abs() < 1e-11);
    }
}
