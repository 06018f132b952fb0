//! Truncated Taylor series arithmetic. A jet stores f^(k)(x0)/k! for k = 0..=order.

use num_complex::Complex64 as C64;
use std::ops::{Add, Mul, Neg, Sub};

pub const MAX_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub c: Vec<C64>,
}

impl Jet {
    pub fn constant(v: C64, order: usize) -> Self {
        let mut c = vec![C64::new(0.0, 0.0); order + 1];
        c[0] = v;
        Jet { c }
    }

    /// The independent variable x at x0.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut j = Jet::constant(C64::new(x0, 0.0), order);
        if order >= 1 {
            j.c[1] = C64::new(1.0, 0.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> C64 {
        self.c[0]
    }

    /// Derivatives f^(k)(x0) for k = 0..=order.
    pub fn derivatives(&self) -> Vec<C64> {
        let mut fact = 1.0;
        self.c
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if k > 0 {
                    fact *= k as f64;
                }
                v * fact
            })
            .collect()
    }

    pub fn scale(&self, a: C64) -> Jet {
        Jet {
            c: self.c.iter().map(|v| v * a).collect(),
        }
    }

    pub fn add_const(&self, a: C64) -> Jet {
        let mut j = self.clone();
        j.c[0] += a;
        j
    }

    pub fn recip(&self) -> Jet {
        let n = self.c.len();
        let a0 = self.c[0];
        let mut b = vec![C64::new(0.0, 0.0); n];
        b[0] = 1.0 / a0;
        for k in 1..n {
            let mut s = C64::new(0.0, 0.0);
            for j in 1..=k {
                s += self.c[j] * b[k - j];
            }
            b[k] = -s / a0;
        }
        Jet { c: b }
    }

    pub fn exp(&self) -> Jet {
        let n = self.c.len();
        let mut b = vec![C64::new(0.0, 0.0); n];
        b[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = C64::new(0.0, 0.0);
            for j in 1..=k {
                s += self.c[j] * b[k - j] * j as f64;
            }
            b[k] = s / k as f64;
        }
        Jet { c: b }
    }

    pub fn ln(&self) -> Jet {
        let n = self.c.len();
        let a0 = self.c[0];
        let mut b = vec![C64::new(0.0, 0.0); n];
        b[0] = a0.ln();
        for k in 1..n {
            let mut s = C64::new(0.0, 0.0);
            for j in 1..k {
                s += b[j] * self.c[k - j] * j as f64;
            }
            b[k] = (self.c[k] - s / k as f64) / a0;
        }
        Jet { c: b }
    }

    /// self^e on the principal branch.
    pub fn powc(&self, e: C64) -> Jet {
        self.ln().scale(e).exp()
    }

    pub fn square(&self) -> Jet {
        self * self
    }

    /// Compose with the affine map x -> x0 + a (x - x1): rescales coefficient k by a^k.
    pub fn chain_linear(&self, a: f64) -> Jet {
        let mut p = 1.0;
        Jet {
            c: self
                .c
                .iter()
                .map(|v| {
                    let r = v * p;
                    p *= a;
                    r
                })
                .collect(),
        }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            c: self.c.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        let mut c = vec![C64::new(0.0, 0.0); n];
        for (i, a) in self.c.iter().enumerate().take(n) {
            for (j, b) in o.c.iter().enumerate().take(n - i) {
                c[i + j] += a * b;
            }
        }
        Jet { c }
    }
}
