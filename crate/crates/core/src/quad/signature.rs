use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;

use super::{adaptive, with_fallible, QuadResult, Tol, Truncation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }

    pub fn other(self) -> Sheet {
        match self {
            Sheet::Plus => Sheet::Minus,
            Sheet::Minus => Sheet::Plus,
        }
    }
}

/// Congruence to signature form: returns (L, q) with Lᵀ B L = diag(1,…,1,-1,…,-1), q ones.
pub fn signature_reduction(b: &DMatrix<f64>) -> Result<(DMatrix<f64>, usize)> {
    let n = b.nrows();
    if n != b.ncols() || n == 0 {
        return Err(Error::domain("form matrix must be square"));
    }
    let asym = (b - b.transpose()).abs().max();
    if asym > 1e-12 * b.abs().max().max(1.0) {
        return Err(Error::domain("form matrix must be symmetric"));
    }
    let eig = nalgebra::SymmetricEigen::new(b.clone());
    let scale = eig.eigenvalues.abs().max();
    let mut order: Vec<usize> = (0..n).collect();
    for &l in eig.eigenvalues.iter() {
        if l.abs() <= 1e-12 * scale {
            return Err(Error::domain("form matrix is singular"));
        }
    }
    order.sort_by(|&i, &j| {
        let (a, c) = (eig.eigenvalues[i], eig.eigenvalues[j]);
        (c > 0.0).cmp(&(a > 0.0)).then(i.cmp(&j))
    });
    let q = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
    let mut l = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let s = 1.0 / eig.eigenvalues[i].abs().sqrt();
        for r in 0..n {
            l[(r, col)] = eig.eigenvectors[(r, i)] * s;
        }
    }
    Ok((l, q))
}

fn sphere_points(dim: usize, m: usize) -> Vec<(Vec<f64>, f64)> {
    match dim {
        1 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        2 => (0..m)
            .map(|k| {
                let t = 2.0 * PI * (k as f64 + 0.5) / m as f64;
                (vec![t.cos(), t.sin()], 2.0 * PI / m as f64)
            })
            .collect(),
        _ => unreachable!(),
    }
}

/// ∫_{V_sheet} |p(m)|^w g(m) dm for p(m) = mᵀBm of signature (q, n-q), n ∈ {2, 3}.
///
/// `radial(d, a)` must return ∫_0^∞ r^a g(r d) dr for a unit vector d. The domain is
/// parametrised by hyperbolic polar coordinates in which |p| = r², so the whole |p|^w
/// singularity sits in the radial factor. Requires Re w > -1/2.
pub fn integrate_signature(
    radial: &dyn Fn(&[f64], C64) -> Result<C64>,
    b: &DMatrix<f64>,
    sheet: Sheet,
    w: C64,
    tol: Tol,
) -> Result<QuadResult> {
    let n = b.nrows();
    if !(2..=3).contains(&n) {
        return Err(Error::domain(format!("hyperbolic coordinates need n in {{2,3}}, got {n}")));
    }
    if w.re <= -0.5 {
        return Err(Error::domain(format!(
            "Re w = {} <= -1/2 is outside the hyperbolic quadrature domain",
            w.re
        )));
    }
    let (l, q) = signature_reduction(b)?;
    if q == 0 || q == n {
        return Err(Error::domain("form is definite; no hyperbolic sheets"));
    }
    let det_l = l.determinant().abs();
    let (d1, d2) = (q, n - q);
    let a_exp = w * 2.0 + (n as f64 - 1.0);
    let scale_exp = -(w * 2.0 + n as f64);

    let at_u = |u: f64| -> Result<C64> {
        let (ch, sh) = (u.cosh(), u.sinh());
        let (fa, fb, jac) = match sheet {
            Sheet::Plus => (ch, sh, ch.powi(d1 as i32 - 1) * sh.powi(d2 as i32 - 1)),
            Sheet::Minus => (sh, ch, sh.powi(d1 as i32 - 1) * ch.powi(d2 as i32 - 1)),
        };
        if jac == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        let angular = |m: usize| -> Result<C64> {
            let mut s = C64::new(0.0, 0.0);
            for (o1, w1) in sphere_points(d1, m) {
                for (o2, w2) in sphere_points(d2, m) {
                    let mut y = Vec::with_capacity(n);
                    y.extend(o1.iter().map(|x| x * fa));
                    y.extend(o2.iter().map(|x| x * fb));
                    let v: Vec<f64> = (0..n)
                        .map(|r| (0..n).map(|c| l[(r, c)] * y[c]).sum())
                        .collect();
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let dir: Vec<f64> = v.iter().map(|x| x / norm).collect();
                    let rad = radial(&dir, a_exp)?;
                    s += rad * (scale_exp * norm.ln()).exp() * (w1 * w2);
                }
            }
            Ok(s * jac)
        };
        if d1 == 1 && d2 == 1 {
            return angular(1);
        }
        let mut m = 8;
        let mut prev = angular(m)?;
        loop {
            m *= 2;
            let cur = angular(m)?;
            if (cur - prev).norm() <= tol.abs.max(tol.rel * cur.norm()) || m >= 512 {
                return Ok(cur);
            }
            prev = cur;
        }
    };

    let rate = 2.0 * w.re + 2.0;
    let mut upper = ((1.0 / tol.rel.max(1e-15)).ln() + 5.0) / rate;
    upper = upper.clamp(4.0, 60.0);
    let mut res = with_fallible(&at_u, |g| adaptive(g, 0.0, upper, tol))?;
    let mut tail;
    loop {
        let edge = at_u(upper)?;
        tail = edge.norm() / rate;
        if tail <= 0.1 * tol.abs.max(tol.rel * res.value.norm()) || upper >= 200.0 {
            break;
        }
        let next = upper + 10.0;
        let more = with_fallible(&at_u, |g| adaptive(g, upper, next, tol))?;
        res = res.combine(more);
        upper = next;
    }
    res.truncation = Some(Truncation {
        at: upper,
        tail_bound: tail,
    });
    Ok(res.scaled(C64::new(det_l, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_real;

    // ∫_0^∞ r^a e^{-π r²} dr
    fn gauss_radial(_d: &[f64], a: C64) -> Result<C64> {
        let e = (a.re + 1.0) / 2.0;
        Ok(C64::new(0.5 * PI.powf(-e) * gamma_real(e), 0.0))
    }

    #[test]
    fn reduction_is_congruence() {
        let b = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, -1.0, 0.5, 0.0, 0.5, -3.0]);
        let (l, q) = signature_reduction(&b).unwrap();
        assert_eq!(q, 1);
        let j = l.transpose() * &b * &l;
        let want = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0]));
        assert!((j - want).abs().max() < 1e-12);
    }

    #[test]
    fn two_dimensional_sheets_split_gaussian_mass() {
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        let tol = Tol::new(1e-14, 1e-11);
        let zero = C64::new(0.0, 0.0);
        let p = integrate_signature(&gauss_radial, &b, Sheet::Plus, zero, tol).unwrap();
        let m = integrate_signature(&gauss_radial, &b, Sheet::Minus, zero, tol).unwrap();
        assert!((p.value.re - 0.5).abs() < 1e-10, "{:?}", p.value);
        assert!((p.value.re + m.value.re - 1.0).abs() < 1e-10);
        assert!((p.value - m.value).norm() < 1e-10);
    }

    #[test]
    fn three_dimensional_mass() {
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0]));
        let tol = Tol::new(1e-14, 1e-11);
        let zero = C64::new(0.0, 0.0);
        let p = integrate_signature(&gauss_radial, &b, Sheet::Plus, zero, tol).unwrap();
        let m = integrate_signature(&gauss_radial, &b, Sheet::Minus, zero, tol).unwrap();
        // P(x² > y² + z²) for an isotropic Gaussian is 1 - 1/√2.
        assert!((p.value.re - (1.0 - 0.5f64.sqrt())).abs() < 1e-10, "{:?}", p.value);
        assert!((p.value.re + m.value.re - 1.0).abs() < 1e-10);
        assert!(integrate_signature(&gauss_radial, &b, Sheet::Plus, C64::new(-0.5, 0.0), tol).is_err());
    }
}
