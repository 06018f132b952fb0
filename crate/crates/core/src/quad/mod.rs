//! Quadrature engines: adaptive Gauss-Kronrod with endpoint singularities and infinite
//! ranges, Filon-type oscillatory rules, sphere and ball rules, hyperbolic coordinates on
//! indefinite quadratic cones, and a seeded Monte-Carlo oracle.

mod filon;
mod mc;
mod signature;
mod sphere;

pub use filon::{oscillatory_ft_1d, sph_bessel_array, FilonExpansion, OscMethod};
pub use mc::{monte_carlo_gaussian, McEstimate};
pub use signature::{integrate_signature, signature_reduction, Sheet};
pub use sphere::{integrate_ball, integrate_sphere, lebedev26, SphereRule};

use num_complex::Complex64 as C64;
use serde::Serialize;
use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
}

impl Tol {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tol { abs, rel }
    }

    pub const fn rel(rel: f64) -> Self {
        Tol { abs: 0.0, rel }
    }
}

impl Default for Tol {
    fn default() -> Self {
        Tol::new(1e-15, 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    None,
    Left,
    Right,
}

/// Declared endpoint behaviour: the integrand behaves like |t - endpoint|^alpha there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularitySpec {
    pub endpoint: Endpoint,
    pub alpha: f64,
    pub log: bool,
}

impl SingularitySpec {
    pub const SMOOTH: SingularitySpec = SingularitySpec {
        endpoint: Endpoint::None,
        alpha: 0.0,
        log: false,
    };

    pub fn left(alpha: f64) -> Self {
        SingularitySpec {
            endpoint: Endpoint::Left,
            alpha,
            log: false,
        }
    }

    pub fn right(alpha: f64) -> Self {
        SingularitySpec {
            endpoint: Endpoint::Right,
            alpha,
            log: false,
        }
    }

    pub fn with_log(mut self) -> Self {
        self.log = true;
        self
    }

    fn needs_substitution(&self) -> bool {
        self.endpoint != Endpoint::None
            && self.alpha > -1.0
            && (self.log || (self.alpha < 1.0 && (self.alpha - self.alpha.round()).abs() > 1e-12))
    }
}

/// Where an infinite range was cut and a bound for the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub at: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub value: C64,
    pub error: f64,
    pub evaluations: usize,
    pub truncation: Option<Truncation>,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: C64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            truncation: None,
        }
    }

    pub fn combine(mut self, o: QuadResult) -> QuadResult {
        self.value += o.value;
        self.error += o.error;
        self.evaluations += o.evaluations;
        self.truncation = match (self.truncation, o.truncation) {
            (Some(a), Some(b)) => Some(Truncation {
                at: a.at.max(b.at),
                tail_bound: a.tail_bound + b.tail_bound,
            }),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn scaled(mut self, a: C64) -> QuadResult {
        self.value *= a;
        self.error *= a.norm();
        if let Some(t) = self.truncation.as_mut() {
            t.tail_bound *= a.norm();
        }
        self
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_814_618_920,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Seg {
    a: f64,
    b: f64,
    val: C64,
    err: f64,
    absval: f64,
}

impl PartialEq for Seg {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Seg {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err
            .total_cmp(&o.err)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

fn gk21(f: &dyn Fn(f64) -> C64, a: f64, b: f64) -> Seg {
    let centr = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let dhl = hl.abs();
    let fc = f(centr);
    let mut resg = C64::new(0.0, 0.0);
    let mut resk = fc * WGK[10];
    let mut resabs = WGK[10] * fc.norm();
    let mut fv1 = [C64::new(0.0, 0.0); 10];
    let mut fv2 = [C64::new(0.0, 0.0); 10];
    for j in 0..10 {
        let absc = hl * XGK[j];
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        resk += fsum * WGK[j];
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            resg += fsum * WG[j / 2];
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).norm();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).norm() + (fv2[j] - reskh).norm());
    }
    let result = resk * hl;
    resabs *= dhl;
    resasc *= dhl;
    let mut err = ((resk - resg) * hl).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let eps = f64::EPSILON;
    if resabs > f64::MIN_POSITIVE / (50.0 * eps) {
        err = err.max(50.0 * eps * resabs);
    }
    if !(result.re.is_finite() && result.im.is_finite()) {
        err = f64::INFINITY;
    }
    Seg {
        a,
        b,
        val: result,
        err,
        absval: resabs,
    }
}

pub const DEFAULT_MAX_SEGMENTS: usize = 4000;

/// Globally adaptive Gauss-Kronrod (21 point) on a finite interval.
pub fn adaptive(f: &dyn Fn(f64) -> C64, a: f64, b: f64, tol: Tol) -> Result<QuadResult> {
    adaptive_limited(f, a, b, tol, DEFAULT_MAX_SEGMENTS)
}

pub fn adaptive_limited(
    f: &dyn Fn(f64) -> C64,
    a: f64,
    b: f64,
    tol: Tol,
    max_segments: usize,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult::zero());
    }
    let first = gk21(f, a, b);
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Seg> = Vec::new();
    let mut total = first.val;
    let mut err = first.err;
    let mut absval = first.absval;
    let mut evals = 21;
    heap.push(first);
    loop {
        let target = tol
            .abs
            .max(tol.rel * total.norm())
            .max(100.0 * f64::EPSILON * absval);
        if err <= target {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let width = (worst.b - worst.a).abs();
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if width <= 1e3 * f64::EPSILON * scale || !worst.err.is_finite() && width < 1e-300 {
            done.push(worst);
            continue;
        }
        if heap.len() + done.len() + 1 >= max_segments {
            heap.push(worst);
            let est = err;
            let mut all: Vec<Seg> = heap.into_vec();
            all.extend(done);
            let (v, _) = sum_segments(&mut all);
            return Err(Error::NonConvergence {
                context: format!(
                    "adaptive quadrature on [{a}, {b}] (partial value {:.6e})",
                    v.norm()
                ),
                estimate: est,
                evaluations: evals,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let l = gk21(f, worst.a, mid);
        let r = gk21(f, mid, worst.b);
        evals += 42;
        total += l.val + r.val - worst.val;
        err += l.err + r.err - worst.err;
        absval += l.absval + r.absval - worst.absval;
        heap.push(l);
        heap.push(r);
    }
    let mut all: Vec<Seg> = heap.into_vec();
    all.extend(done);
    let (value, error) = sum_segments(&mut all);
    if !error.is_finite() {
        return Err(Error::NonConvergence {
            context: format!("adaptive quadrature on [{a}, {b}]: non-finite integrand"),
            estimate: error,
            evaluations: evals,
        });
    }
    Ok(QuadResult {
        value,
        error,
        evaluations: evals,
        truncation: None,
    })
}

fn sum_segments(all: &mut [Seg]) -> (C64, f64) {
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut v = C64::new(0.0, 0.0);
    let mut e = 0.0;
    for s in all.iter() {
        v += s.val;
        e += s.err;
    }
    (v, e)
}

/// Runs a fallible integrand through a quadrature routine, returning the first error it raised.
pub fn with_fallible<T>(
    f: &dyn Fn(f64) -> Result<C64>,
    run: impl FnOnce(&dyn Fn(f64) -> C64) -> Result<T>,
) -> Result<T> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let g = |x: f64| -> C64 {
        if failure.borrow().is_some() {
            return C64::new(0.0, 0.0);
        }
        match f(x) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                C64::new(0.0, 0.0)
            }
        }
    };
    let out = run(&g);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    out
}

/// ∫_a^b f(t) dt where b may be +∞ and one endpoint may carry a declared singularity.
///
/// With a left singularity the substitution t = a + v^{1/(1+α)} removes the t^α factor;
/// the right endpoint is treated symmetrically. An infinite upper limit without a
/// truncation point uses the map t = a + (1-u)/u.
pub fn integrate_1d(
    f: &dyn Fn(f64) -> C64,
    a: f64,
    b: f64,
    spec: SingularitySpec,
    tol: Tol,
) -> Result<QuadResult> {
    integrate_1d_endpoint(&|t, _| f(t), a, b, spec, tol)
}

/// Same as [`integrate_1d`], but the integrand also receives the exact distance to the
/// singular endpoint, which keeps full relative precision when that endpoint is not 0.
pub fn integrate_1d_endpoint(
    f: &dyn Fn(f64, f64) -> C64,
    a: f64,
    b: f64,
    spec: SingularitySpec,
    tol: Tol,
) -> Result<QuadResult> {
    if spec.endpoint != Endpoint::None && spec.alpha <= -1.0 {
        return Err(Error::domain(format!(
            "endpoint exponent {} is not integrable",
            spec.alpha
        )));
    }
    if b.is_infinite() {
        if b < 0.0 || spec.endpoint == Endpoint::Right {
            return Err(Error::domain("only [a, +inf) ranges are supported"));
        }
        let split = a + 1.0;
        let head = integrate_1d_endpoint(f, a, split, spec, tol)?;
        let g = |u: f64| -> C64 {
            let d = 1.0 + (1.0 - u) / u;
            f(a + d, d) / (u * u)
        };
        let tail = adaptive(&g, 0.0, 1.0, tol)?;
        return Ok(head.combine(tail));
    }
    if !spec.needs_substitution() {
        let g = |t: f64| match spec.endpoint {
            Endpoint::Right => f(t, b - t),
            _ => f(t, t - a),
        };
        return adaptive(&g, a, b, tol);
    }
    let beta = 1.0 / (1.0 + spec.alpha);
    let width = b - a;
    let cut = if width > 2.0 { 1.0 } else { 0.5 * width };
    let (near, far) = match spec.endpoint {
        Endpoint::Left => {
            let g = |v: f64| -> C64 {
                let d = v.powf(beta);
                f(a + d, d) * (beta * v.powf(beta - 1.0))
            };
            let near = adaptive(&g, 0.0, cut.powf(1.0 / beta), tol)?;
            let h = |t: f64| f(t, t - a);
            let far = adaptive(&h, a + cut, b, tol)?;
            (near, far)
        }
        Endpoint::Right => {
            let g = |v: f64| -> C64 {
                let d = v.powf(beta);
                f(b - d, d) * (beta * v.powf(beta - 1.0))
            };
            let near = adaptive(&g, 0.0, cut.powf(1.0 / beta), tol)?;
            let h = |t: f64| f(t, b - t);
            let far = adaptive(&h, a, b - cut, tol)?;
            (near, far)
        }
        Endpoint::None => unreachable!(),
    };
    Ok(near.combine(far))
}

type GlCache = Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>;

/// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
pub fn gauss_legendre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<GlCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return v.clone();
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    let v = Arc::new((x, w));
    cache.lock().unwrap().insert(n, v.clone());
    v
}

/// Composite Gauss-Legendre rule with a fixed node set (no adaptivity).
///
/// Used where several integrals must share one discretization, e.g. difference quotients in t.
pub fn fixed_gauss(f: &dyn Fn(f64) -> C64, a: f64, b: f64, panels: usize, order: usize) -> C64 {
    let gl = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut s = C64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut ps = C64::new(0.0, 0.0);
        for (x, w) in gl.0.iter().zip(&gl.1) {
            ps += f(mid + 0.5 * h * x) * *w;
        }
        s += ps * (0.5 * h);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_real;
    use std::f64::consts::PI;

    fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> C64 {
        move |x| C64::new(f(x), 0.0)
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let f = re(|t: f64| t.powf(-0.5));
        let r = integrate_1d(&f, 0.0, 1.0, SingularitySpec::left(-0.5), Tol::default()).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-13, "{:?}", r);
        assert!((r.value.re - 2.0).abs() <= r.error.max(1e-12));
    }

    #[test]
    fn euler_constant_via_log() {
        let f = re(|t: f64| (-t).exp() * t.ln());
        let spec = SingularitySpec::left(0.0).with_log();
        let r = integrate_1d(&f, 0.0, f64::INFINITY, spec, Tol::default()).unwrap();
        assert!((r.value.re + 0.577_215_664_901_532_9).abs() < 1e-11, "{:?}", r);
    }

    #[test]
    fn half_power_gaussian() {
        let f = re(|r: f64| r.sqrt() * (-PI * r * r).exp());
        let r = integrate_1d(&f, 0.0, 8.0, SingularitySpec::left(0.5), Tol::default()).unwrap();
        let exact = 0.5 * PI.powf(-0.75) * gamma_real(0.75);
        assert!((r.value.re - exact).abs() < 1e-13);
    }

    #[test]
    fn right_endpoint_singularity() {
        let f = |_t: f64, d: f64| C64::new(d.powf(-0.75), 0.0);
        let r = integrate_1d_endpoint(&f, 0.0, 1.0, SingularitySpec::right(-0.75), Tol::default())
            .unwrap();
        assert!((r.value.re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_exactness() {
        let gl = gauss_legendre(7);
        let s: f64 = gl.0.iter().zip(&gl.1).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let f = re(|t: f64| (1.0 / t).sin() / t);
        let e = adaptive_limited(&f, 1e-6, 1.0, Tol::new(0.0, 1e-14), 50);
        assert!(matches!(e, Err(Error::NonConvergence { .. })));
    }
}
