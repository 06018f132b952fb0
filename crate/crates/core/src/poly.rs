//! Polynomials with complex coefficients in up to three variables, plus univariate helpers
//! used to restrict them to rays.

use num_complex::Complex64 as C64;
use std::collections::BTreeMap;

pub const MAX_DIM: usize = 3;
type Exp = [u8; MAX_DIM];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    pub n: usize,
    pub terms: BTreeMap<Exp, C64>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_DIM, "dimension {n} not supported");
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: C64) -> Self {
        let mut p = Poly::zero(n);
        p.add_term([0; MAX_DIM], c);
        p
    }

    pub fn monomial(n: usize, e: Exp, c: C64) -> Self {
        let mut p = Poly::zero(n);
        p.add_term(e, c);
        p
    }

    pub fn add_term(&mut self, e: Exp, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let v = self.terms.entry(e).or_insert(C64::new(0.0, 0.0));
        *v += c;
        if *v == C64::new(0.0, 0.0) {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, m: &[f64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for i in 0..self.n {
                if e[i] > 0 {
                    t *= m[i].powi(e[i] as i32);
                }
            }
            s += t;
        }
        s
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(*e, *c);
        }
        p
    }

    pub fn scale(&self, a: C64) -> Poly {
        let mut p = Poly::zero(self.n);
        for (e, c) in &self.terms {
            p.add_term(*e, c * a);
        }
        p
    }

    pub fn deriv(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                p.add_term(f, c * e[i] as f64);
            }
        }
        p
    }

    /// Multiply by the linear form sum_j l_j m_j.
    pub fn mul_linear(&self, l: &[f64]) -> Poly {
        let mut p = Poly::zero(self.n);
        for (e, c) in &self.terms {
            for (j, &lj) in l.iter().enumerate().take(self.n) {
                if lj != 0.0 {
                    let mut f = *e;
                    f[j] += 1;
                    p.add_term(f, c * lj);
                }
            }
        }
        p
    }

    /// p(λ m) for scalar λ.
    pub fn dilate(&self, lambda: f64) -> Poly {
        let mut p = Poly::zero(self.n);
        for (e, c) in &self.terms {
            let d: i32 = e.iter().map(|&x| x as i32).sum();
            p.add_term(*e, c * lambda.powi(d));
        }
        p
    }

    /// Univariate coefficients of r -> p(b + r d), lowest degree first.
    pub fn restrict_to_ray(&self, b: &[f64], d: &[f64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.degree() + 1];
        for (e, c) in &self.terms {
            let mut acc = vec![*c];
            for i in 0..self.n {
                let lin = [C64::new(b[i], 0.0), C64::new(d[i], 0.0)];
                for _ in 0..e[i] {
                    acc = upoly_mul(&acc, &lin);
                }
            }
            for (k, v) in acc.into_iter().enumerate() {
                out[k] += v;
            }
        }
        out
    }
}

pub fn upoly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

pub fn upoly_deriv(a: &[C64]) -> Vec<C64> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| v * k as f64)
        .collect()
}

pub fn upoly_add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or_default() + b.get(k).copied().unwrap_or_default())
        .collect()
}

pub fn upoly_eval(a: &[C64], r: f64) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for v in a.iter().rev() {
        s = s * r + v;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ray_restriction_matches_eval() {
        let mut p = Poly::zero(3);
        p.add_term([2, 0, 1], C64::new(1.5, -0.5));
        p.add_term([0, 1, 0], C64::new(-2.0, 0.0));
        p.add_term([0, 0, 0], C64::new(0.25, 1.0));
        let b = [0.3, -1.0, 2.0];
        let d = [1.0, 0.5, -0.2];
        let q = p.restrict_to_ray(&b, &d);
        for r in [0.0, 0.7, 2.3] {
            let m: Vec<f64> = (0..3).map(|i| b[i] + r * d[i]).collect();
            assert!((upoly_eval(&q, r) - p.eval(&m)).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_and_linear() {
        let p = Poly::monomial(2, [2, 1, 0], C64::new(3.0, 0.0));
        let d = p.deriv(0);
        assert_eq!(d.terms.get(&[1, 1, 0]), Some(&C64::new(6.0, 0.0)));
        let l = d.mul_linear(&[1.0, 2.0]);
        assert_eq!(l.terms.get(&[2, 1, 0]), Some(&C64::new(6.0, 0.0)));
        assert_eq!(l.terms.get(&[1, 2, 0]), Some(&C64::new(12.0, 0.0)));
    }
}
