//! The three worked prehomogeneous spaces: the line under dilations, and quadratic forms
//! under similitudes (definite and indefinite).

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::{fmt_matrix, parse_matrix, SpecString};
use crate::quad::signature_reduction;
use crate::report::CheckReport;
use crate::C64;

/// Haar measure used whenever a group integral is formed.
pub const HAAR: &str = "dα/|α| × normalized SO";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Scalar1D,
    Definite,
    Indefinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PVSpace {
    pub kind: SpaceKind,
    pub n: usize,
    /// Form matrix (1×1 identity for the line).
    pub b: DMatrix<f64>,
    pub b_inv: DMatrix<f64>,
    /// Number of positive eigenvalues of b.
    pub q: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Component {
    /// Positive half-line, or the positive sheet of an indefinite form.
    Plus,
    /// Negative half-line, or the negative sheet.
    Minus,
    /// V minus the origin for a definite form.
    Whole,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Plus => "plus",
            Component::Minus => "minus",
            Component::Whole => "whole",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" | "v1" => Ok(Component::Plus),
            "minus" | "-" | "v2" => Ok(Component::Minus),
            "whole" | "v" => Ok(Component::Whole),
            _ => Err(Error::config("component", format!("unknown component `{s}`"))),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// (α, R) acting by m ↦ α R m.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub alpha: f64,
    pub r: DMatrix<f64>,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            alpha: 1.0,
            r: DMatrix::identity(n, n),
        }
    }

    pub fn compose(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            alpha: self.alpha * o.alpha,
            r: &self.r * &o.r,
        }
    }

    pub fn act(&self, m: &[f64]) -> Vec<f64> {
        let n = m.len();
        (0..n)
            .map(|i| self.alpha * (0..n).map(|j| self.r[(i, j)] * m[j]).sum::<f64>())
            .collect()
    }

    /// det ρ(g) = α^n det R.
    pub fn det(&self) -> f64 {
        self.alpha.powi(self.r.nrows() as i32) * self.r.determinant()
    }
}

fn bilinear(b: &DMatrix<f64>, x: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += b[(i, j)] * x[j];
        }
        s += x[i] * row;
    }
    s
}

impl PVSpace {
    pub fn scalar1d() -> Self {
        PVSpace {
            kind: SpaceKind::Scalar1D,
            n: 1,
            b: DMatrix::identity(1, 1),
            b_inv: DMatrix::identity(1, 1),
            q: 1,
        }
    }

    pub fn definite(b: DMatrix<f64>) -> Result<Self> {
        let (_, q) = signature_reduction(&b)?;
        let n = b.nrows();
        if q != n || n > 3 {
            return Err(Error::domain("definite space needs a positive definite form, n ≤ 3"));
        }
        let b_inv = b.clone().try_inverse().expect("definite form is invertible");
        Ok(PVSpace {
            kind: SpaceKind::Definite,
            n,
            b,
            b_inv,
            q,
        })
    }

    pub fn indefinite(b: DMatrix<f64>) -> Result<Self> {
        let (_, q) = signature_reduction(&b)?;
        let n = b.nrows();
        if q == 0 || q == n || !(2..=3).contains(&n) {
            return Err(Error::domain("indefinite space needs signature (q, n-q), 1 ≤ q < n ≤ 3"));
        }
        let b_inv = b.clone().try_inverse().expect("nondegenerate form is invertible");
        Ok(PVSpace {
            kind: SpaceKind::Indefinite,
            n,
            b,
            b_inv,
            q,
        })
    }

    /// diag(1,…,1,-1,…,-1) with q ones.
    pub fn signature_form(q: usize, n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |i, j| {
            if i != j {
                0.0
            } else if i < q {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// `scalar1d`, `definite:B=I,n=3`, `indefinite:q=1,n=3[,B=..]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = SpecString::parse(spec)?;
        match s.head.as_str() {
            "scalar1d" => {
                s.only(&[])?;
                Ok(PVSpace::scalar1d())
            }
            "definite" => {
                s.only(&["B", "n"])?;
                let n = s.usize("n", Some(3))?;
                let b = match s.keys.get("B") {
                    Some(v) => parse_matrix(v, n)?,
                    None => DMatrix::identity(n, n),
                };
                PVSpace::definite(b)
            }
            "indefinite" => {
                s.only(&["B", "n", "q"])?;
                let n = s.usize("n", Some(3))?;
                let q = s.usize("q", Some(1))?;
                let b = match s.keys.get("B") {
                    Some(v) => parse_matrix(v, n)?,
                    None => PVSpace::signature_form(q, n),
                };
                let sp = PVSpace::indefinite(b)?;
                if sp.q != q {
                    return Err(Error::config("q", format!("form has q = {}", sp.q)));
                }
                Ok(sp)
            }
            other => Err(Error::config("space", format!("unknown space `{other}`"))),
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            SpaceKind::Scalar1D => "scalar1d".into(),
            SpaceKind::Definite => format!("definite:B={},n={}", fmt_matrix(&self.b), self.n),
            SpaceKind::Indefinite => format!(
                "indefinite:q={},n={},B={}",
                self.q,
                self.n,
                fmt_matrix(&self.b)
            ),
        }
    }

    pub fn degree(&self) -> u32 {
        match self.kind {
            SpaceKind::Scalar1D => 1,
            _ => 2,
        }
    }

    pub fn components(&self) -> Vec<Component> {
        match self.kind {
            SpaceKind::Definite => vec![Component::Whole],
            _ => vec![Component::Plus, Component::Minus],
        }
    }

    pub fn rel_invariant(&self, m: &[f64]) -> f64 {
        match self.kind {
            SpaceKind::Scalar1D => m[0],
            _ => bilinear(&self.b, m),
        }
    }

    pub fn dual_invariant(&self, xi: &[f64]) -> f64 {
        match self.kind {
            SpaceKind::Scalar1D => xi[0],
            _ => bilinear(&self.b_inv, xi),
        }
    }

    pub fn character(&self, g: &GroupElement) -> f64 {
        match self.kind {
            SpaceKind::Scalar1D => g.alpha,
            _ => g.alpha * g.alpha,
        }
    }

    pub fn component_of(&self, m: &[f64]) -> Option<Component> {
        let p = self.rel_invariant(m);
        if p == 0.0 {
            return None;
        }
        match self.kind {
            SpaceKind::Definite => Some(Component::Whole),
            _ if p > 0.0 => Some(Component::Plus),
            _ => Some(Component::Minus),
        }
    }

    pub fn check_component(&self, c: Component) -> Result<()> {
        if self.components().contains(&c) {
            Ok(())
        } else {
            Err(Error::domain(format!("component {c} does not exist for {}", self.label())))
        }
    }

    /// Reports |p(gm) - χ(g)p(m)| / max(1, |p(m)|).
    pub fn check_relative_invariance(&self, g: &GroupElement, m: &[f64]) -> CheckReport {
        let lhs = self.rel_invariant(&g.act(m));
        let rhs = self.character(g) * self.rel_invariant(m);
        let scale = self.rel_invariant(m).abs().max(1.0);
        let res = (lhs - rhs).abs() / scale;
        CheckReport::scalar(
            "invariance.relative",
            "relative-invariant",
            C64::new(lhs, 0.0),
            C64::new(rhs, 0.0),
            1e-10,
        )
        .with_measured(res)
        .with_criterion(crate::report::Criterion::Range {
            lo: None,
            hi: Some(1e-10),
        })
        .param("space", self.label())
        .param("alpha", g.alpha)
        .param("m", m.to_vec())
    }

    /// Reports det ρ(g)² against χ(g)^{2n/deg p}.
    pub fn check_determinant(&self, g: &GroupElement) -> CheckReport {
        let lhs = g.det().powi(2);
        let rhs = self
            .character(g)
            .powf(2.0 * self.n as f64 / self.degree() as f64);
        CheckReport::scalar(
            "invariance.determinant",
            "relative-invariant",
            C64::new(lhs, 0.0),
            C64::new(rhs, 0.0),
            1e-10,
        )
        .param("space", self.label())
        .param("alpha", g.alpha)
    }

    /// Seeded group samples: log α uniform on [-2, 2]; R a product of rotations and, for
    /// indefinite forms, one boost of rapidity |u| ≤ 2, conjugated so that RᵀBR = B.
    pub fn sample_group(&self, count: usize, seed: u64) -> Result<Vec<GroupElement>> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let n = self.n;
        let mut out = Vec::with_capacity(count);
        let (l, l_inv) = match self.kind {
            SpaceKind::Scalar1D => (DMatrix::identity(1, 1), DMatrix::identity(1, 1)),
            _ => {
                let (l, _) = signature_reduction(&self.b)?;
                let li = l.clone().try_inverse().expect("congruence is invertible");
                (l, li)
            }
        };
        for _ in 0..count {
            let alpha = rng.random_range(-2.0..2.0f64).exp();
            let r = match self.kind {
                SpaceKind::Scalar1D => DMatrix::identity(1, 1),
                SpaceKind::Definite => {
                    let o = random_rotation(&mut rng, n);
                    &l * o * &l_inv
                }
                SpaceKind::Indefinite => {
                    let q = self.q;
                    let k1 = block_rotation(&mut rng, q, n);
                    let k2 = block_rotation(&mut rng, q, n);
                    let u = rng.random_range(-2.0..2.0f64);
                    let mut boost = DMatrix::identity(n, n);
                    boost[(0, q)] = u.sinh();
                    boost[(q, 0)] = u.sinh();
                    boost[(0, 0)] = u.cosh();
                    boost[(q, q)] = u.cosh();
                    &l * (k1 * boost * k2) * &l_inv
                }
            };
            out.push(GroupElement { alpha, r });
        }
        Ok(out)
    }

    /// Seeded points m with entries uniform on [-2, 2].
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        (0..count)
            .map(|_| (0..self.n).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect()
    }
}

/// Haar-random element of SO(n) via QR of a Gaussian matrix.
fn random_rotation(rng: &mut ChaCha20Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = a.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

/// SO(q) × SO(n-q) embedded block-diagonally.
fn block_rotation(rng: &mut ChaCha20Rng, q: usize, n: usize) -> DMatrix<f64> {
    let mut k = DMatrix::identity(n, n);
    let a = random_rotation(rng, q);
    let b = random_rotation(rng, n - q);
    k.view_mut((0, 0), (q, q)).copy_from(&a);
    k.view_mut((q, q), (n - q, n - q)).copy_from(&b);
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_and_components() {
        let s = PVSpace::scalar1d();
        assert_eq!(s.rel_invariant(&[3.0]), 3.0);
        assert_eq!(s.component_of(&[-2.0]), Some(Component::Minus));
        let d = PVSpace::parse("definite:B=I,n=3").unwrap();
        assert_eq!(d.rel_invariant(&[1.0, 2.0, 2.0]), 9.0);
        let g = GroupElement {
            alpha: 3.0,
            r: DMatrix::identity(3, 3),
        };
        assert_eq!(d.character(&g), 9.0);
        let i = PVSpace::parse("indefinite:q=1,n=2,B=diag(1,-1)").unwrap();
        assert_eq!(i.rel_invariant(&[5.0, 3.0]), 16.0);
        let i3 = PVSpace::parse("indefinite:q=1,n=3").unwrap();
        assert_eq!(i3.component_of(&[2.0, 1.0, 1.0]), Some(Component::Plus));
        assert_eq!(i3.component_of(&[0.0, 0.0, 0.0]), None);
    }

    #[test]
    fn samples_preserve_form() {
        for spec in ["definite:B=[2,1,0;1,3,0;0,0,1],n=3", "indefinite:q=1,n=3", "indefinite:q=2,n=3"] {
            let sp = PVSpace::parse(spec).unwrap();
            for g in sp.sample_group(20, 7).unwrap() {
                let err = (g.r.transpose() * &sp.b * &g.r - &sp.b).abs().max();
                assert!(err < 1e-10, "{spec}: {err}");
                assert!((g.r.determinant() - 1.0).abs() < 1e-10);
            }
        }
        assert!(PVSpace::scalar1d().sample_group(0, 1).unwrap().is_empty());
    }

    #[test]
    fn cone_is_invariant() {
        let sp = PVSpace::parse("indefinite:q=1,n=3").unwrap();
        let m = [1.0, 0.6, 0.8];
        for g in sp.sample_group(5, 3).unwrap() {
            let r = sp.check_relative_invariance(&g, &m);
            assert!(r.passed);
            assert!(r.lhs[0].norm() < 1e-12 && r.rhs[0].norm() < 1e-12);
        }
    }
}
