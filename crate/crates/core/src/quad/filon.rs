use num_complex::Complex64 as C64;

use super::{adaptive, gauss_legendre, QuadResult, Tol};
use crate::error::{Error, Result};

/// Legendre terms kept per panel.
const NG: usize = 20;
const MAX_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscMethod {
    Auto,
    Filon,
    Plain,
}

#[derive(Debug, Clone)]
struct Panel {
    mid: f64,
    half: f64,
    coef: [C64; NG],
}

/// Piecewise Legendre expansion of f on [lo, hi], from which ∫ f(y) e^{-iωy} dy is
/// evaluated for any ω with moments 2(-i)^k j_k(hω).
#[derive(Debug, Clone)]
pub struct FilonExpansion {
    panels: Vec<Panel>,
    pub lo: f64,
    pub hi: f64,
    /// Estimated absolute error of any transform value (independent of ω).
    pub error: f64,
    pub evaluations: usize,
}

struct Basis {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    // p[k][i] = P_k(node_i)
    p: Vec<Vec<f64>>,
}

fn basis() -> &'static Basis {
    static B: std::sync::OnceLock<Basis> = std::sync::OnceLock::new();
    B.get_or_init(|| {
        let gl = gauss_legendre(NG);
        let (nodes, weights) = (gl.0.clone(), gl.1.clone());
        let mut p = vec![vec![0.0; NG]; NG];
        for (i, &u) in nodes.iter().enumerate() {
            let mut p0 = 1.0;
            let mut p1 = u;
            p[0][i] = 1.0;
            p[1][i] = u;
            for k in 2..NG {
                let p2 = ((2 * k - 1) as f64 * u * p1 - (k - 1) as f64 * p0) / k as f64;
                p[k][i] = p2;
                p0 = p1;
                p1 = p2;
            }
        }
        Basis { nodes, weights, p }
    })
}

fn fit_panel(f: &dyn Fn(f64) -> C64, a: f64, b: f64) -> (Panel, f64, f64) {
    let bs = basis();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let vals: Vec<C64> = bs.nodes.iter().map(|u| f(mid + half * u)).collect();
    let mut coef = [C64::new(0.0, 0.0); NG];
    for (k, c) in coef.iter_mut().enumerate() {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..NG {
            s += vals[i] * (bs.weights[i] * bs.p[k][i]);
        }
        *c = s * ((2 * k + 1) as f64 * 0.5);
    }
    let tail: f64 = coef[NG - 4..].iter().map(|c| c.norm()).sum();
    let vmax = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // Each Legendre moment is bounded by 2 in modulus.
    (Panel { mid, half, coef }, 2.0 * half * tail, 2.0 * half * vmax)
}

impl FilonExpansion {
    pub fn new(f: &dyn Fn(f64) -> C64, lo: f64, hi: f64, tol: Tol) -> Result<Self> {
        if !(hi > lo) {
            return Ok(FilonExpansion {
                panels: Vec::new(),
                lo,
                hi,
                error: 0.0,
                evaluations: 0,
            });
        }
        let mut edges = Vec::new();
        if lo > 0.0 && hi / lo > 8.0 {
            let k = ((hi / lo).ln() / 2f64.ln()).ceil() as usize;
            let ratio = (hi / lo).powf(1.0 / k as f64);
            for j in 0..=k {
                edges.push(lo * ratio.powi(j as i32));
            }
            edges[k] = hi;
        } else if hi < 0.0 && lo / hi > 8.0 {
            let k = ((lo / hi).ln() / 2f64.ln()).ceil() as usize;
            let ratio = (lo / hi).powf(1.0 / k as f64);
            for j in (0..=k).rev() {
                edges.push(hi * ratio.powi(j as i32));
            }
            edges[0] = lo;
        } else {
            for j in 0..=16 {
                edges.push(lo + (hi - lo) * j as f64 / 16.0);
            }
        }
        let mut pending: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
        let mut fitted: Vec<(Panel, f64, f64)> = Vec::new();
        let mut evals = 0;
        // First pass fixes the magnitude scale used by the relative tolerance.
        let mut first: Vec<(Panel, f64, f64)> = pending
            .drain(..)
            .map(|(a, b)| {
                evals += NG;
                fit_panel(f, a, b)
            })
            .collect();
        let scale: f64 = first.iter().map(|x| x.2).sum();
        let vmax = first
            .iter()
            .map(|x| x.2 / (2.0 * x.0.half))
            .fold(0.0, f64::max);
        let budget = tol.abs.max(tol.rel * scale);
        // Each initial panel gets an equal share, split by width among its children.
        let per_panel = budget / first.len() as f64;
        let mut work: Vec<((Panel, f64, f64), f64)> =
            first.drain(..).map(|p| (p, per_panel)).collect();
        let width = hi - lo;
        while let Some(((p, err, mag), share)) = work.pop() {
            // below ~1e-14 of the function's size the fit only sees roundoff
            let floor = 1e-14 * mag.max(2.0 * p.half * vmax);
            if err <= share.max(floor) || p.half < 1e-12 * width {
                fitted.push((p, err, mag));
                continue;
            }
            if fitted.len() + work.len() > MAX_PANELS {
                return Err(Error::NonConvergence {
                    context: format!("Filon expansion on [{lo}, {hi}]"),
                    estimate: err,
                    evaluations: evals,
                });
            }
            let a = p.mid - p.half;
            let b = p.mid + p.half;
            let m = p.mid;
            evals += 2 * NG;
            work.push((fit_panel(f, a, m), 0.5 * share));
            work.push((fit_panel(f, m, b), 0.5 * share));
        }
        fitted.sort_by(|x, y| x.0.mid.total_cmp(&y.0.mid));
        let error = fitted.iter().map(|x| x.1).sum();
        Ok(FilonExpansion {
            panels: fitted.into_iter().map(|x| x.0).collect(),
            lo,
            hi,
            error,
            evaluations: evals,
        })
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }

    /// ∫ f(y) e^{-iωy} dy over [lo, hi].
    pub fn transform(&self, omega: f64) -> C64 {
        let mut j = [0.0; NG];
        let mut total = C64::new(0.0, 0.0);
        // (-i)^k cycles through 1, -i, -1, i.
        let cyc = [
            C64::new(1.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 1.0),
        ];
        for p in &self.panels {
            let kappa = p.half * omega;
            sph_bessel_array(kappa, &mut j);
            let mut s = C64::new(0.0, 0.0);
            for k in 0..NG {
                if j[k] != 0.0 {
                    s += p.coef[k] * cyc[k % 4] * j[k];
                }
            }
            let phase = C64::new(0.0, -p.mid * omega).exp();
            total += phase * s * (2.0 * p.half);
        }
        total
    }

    /// ∫ f over [lo, hi].
    pub fn integral(&self) -> C64 {
        self.panels
            .iter()
            .map(|p| p.coef[0] * (2.0 * p.half))
            .sum()
    }
}

/// Spherical Bessel functions j_0..j_{N-1} at real κ.
pub fn sph_bessel_array(kappa: f64, out: &mut [f64]) {
    let n = out.len();
    if kappa == 0.0 {
        out.iter_mut().for_each(|v| *v = 0.0);
        out[0] = 1.0;
        return;
    }
    if kappa < 0.0 {
        sph_bessel_array(-kappa, out);
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
        return;
    }
    let x = kappa;
    if x < 0.5 {
        let x2 = -0.5 * x * x;
        let mut lead = 1.0;
        for (k, v) in out.iter_mut().enumerate() {
            if k > 0 {
                lead *= x / (2 * k + 1) as f64;
            }
            let mut term = 1.0;
            let mut sum = 1.0;
            for j in 1..30 {
                term *= x2 / (j as f64 * (2 * k + 2 * j + 1) as f64);
                sum += term;
                if term.abs() < 1e-17 * sum.abs() {
                    break;
                }
            }
            *v = lead * sum;
        }
        return;
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    if x >= n as f64 {
        out[0] = j0;
        if n > 1 {
            out[1] = j1;
        }
        for k in 1..n.saturating_sub(1) {
            out[k + 1] = (2 * k + 1) as f64 / x * out[k] - out[k - 1];
        }
        return;
    }
    // Miller's downward recurrence normalised by sum (2k+1) j_k^2 = 1.
    let start = n + 20 + x as usize;
    let mut jp1 = 0.0;
    let mut jk = 1e-30;
    let mut norm = 0.0;
    let mut tmp = vec![0.0; n];
    for k in (0..=start).rev() {
        norm += (2 * k + 1) as f64 * jk * jk;
        if k < n {
            tmp[k] = jk;
        }
        if k == 0 {
            break;
        }
        let jm1 = (2 * k + 1) as f64 / x * jk - jp1;
        jp1 = jk;
        jk = jm1;
        if jk.abs() > 1e150 {
            let r = 1e-150;
            jk *= r;
            jp1 *= r;
            norm *= r * r;
            tmp.iter_mut().for_each(|v| *v *= r);
        }
    }
    let mut scale = 1.0 / norm.sqrt();
    let (ref_val, got) = if j0.abs() >= j1.abs() {
        (j0, tmp[0])
    } else {
        (j1, tmp[1.min(n - 1)])
    };
    if (ref_val < 0.0) != (got * scale < 0.0) {
        scale = -scale;
    }
    for k in 0..n {
        out[k] = tmp[k] * scale;
    }
}

/// ∫ f(y) e^{-iyξ} dy for f negligible outside [lo, hi].
///
/// `Auto` uses plain adaptive quadrature when |ξ|(hi-lo) is small and the Filon rule otherwise.
pub fn oscillatory_ft_1d(
    f: &dyn Fn(f64) -> C64,
    lo: f64,
    hi: f64,
    xi: f64,
    tol: Tol,
    method: OscMethod,
) -> Result<QuadResult> {
    let plain = match method {
        OscMethod::Plain => true,
        OscMethod::Filon => false,
        OscMethod::Auto => xi.abs() * (hi - lo) <= 20.0,
    };
    if plain {
        let g = |y: f64| f(y) * C64::new(0.0, -y * xi).exp();
        return adaptive(&g, lo, hi, tol);
    }
    let e = FilonExpansion::new(f, lo, hi, tol)?;
    Ok(QuadResult {
        value: e.transform(xi),
        error: e.error,
        evaluations: e.evaluations,
        truncation: None,
    })
}
