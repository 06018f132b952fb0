//! Check groups, the quick and full suites, and tolerance overrides keyed by check id.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::funceq::{self, EqId, ExponentVariant};
use crate::heatflow::{self, NormalizationVariant};
use crate::homog;
use crate::phspace::{Component, PVSpace};
use crate::report::{sort_reports, CheckReport, Criterion};
use crate::symbolkern::{self, AuxKernel, GroupFunction, SymbolEvaluator, SymbolGrid};
use crate::zeta;
use crate::{FourierConvention, TestFunction, C64};

/// Seed for the non-Monte-Carlo sampling (random α, group elements) when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_MC_SAMPLES: usize = 10_000_000;

/// Every id a report can carry; tolerance overrides must name one of these.
pub const KNOWN_IDS: &[&str] = &[
    "calibrate.eq12",
    "calibrate.eq12.selected",
    "calibrate.eq12a",
    "calibrate.eq12a.selected",
    "calibrate.eq22",
    "calibrate.eq22.selected",
    "funceq.eq12",
    "funceq.eq12.closed_form",
    "funceq.eq12a",
    "funceq.eq12a.printed_deviation",
    "funceq.eq22",
    "funceq.eq22.monte_carlo",
    "heat.bounds",
    "heat.funceq",
    "heat.generator",
    "heat.kernel",
    "heat.lacunary",
    "heat.lacunary_support",
    "heat.semigroup",
    "heat.semigroup_ratio",
    "homog.ambiguity",
    "homog.extension",
    "homog.homogeneity",
    "homog.tplus_int",
    "homog.tplus_known",
    "invariance.determinant",
    "invariance.relative",
    "symbol.bound",
    "symbol.decay",
    "symbol.fixed_point",
    "symbol.integrability",
    "symbol.kernel",
    "symbol.scaling",
    "zeta.continuation",
    "zeta.residue",
    "zeta.scaling",
    "zeta.value",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// check id → tolerance
    pub tolerances: BTreeMap<String, f64>,
    pub mc_samples: Option<usize>,
}

impl RunOptions {
    pub fn sampling_seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// Monte-Carlo oracles refuse to run without an explicit seed.
    pub fn mc_seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::config("seed", "required when a Monte-Carlo oracle runs"))
    }

    pub fn mc_samples(&self) -> usize {
        self.mc_samples.unwrap_or(DEFAULT_MC_SAMPLES)
    }

    pub fn set_tolerance(&mut self, id: &str, tol: f64) -> Result<()> {
        if !KNOWN_IDS.contains(&id) {
            return Err(Error::config(format!("tol.{id}"), "unknown check id"));
        }
        if !tol.is_finite() {
            return Err(Error::config(format!("tol.{id}"), "tolerance must be finite"));
        }
        self.tolerances.insert(id.to_string(), tol);
        Ok(())
    }

    /// Applies overrides and sorts by id, then parameters.
    pub fn finish(&self, mut reports: Vec<CheckReport>) -> Vec<CheckReport> {
        for r in reports.iter_mut() {
            if let Some(&t) = self.tolerances.get(&r.id) {
                *r = r.clone().with_tolerance(t);
            }
        }
        sort_reports(&mut reports);
        reports
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Suite::Quick),
            "full" => Ok(Suite::Full),
            _ => Err(Error::config("suite", format!("unknown suite `{s}` (quick, full)"))),
        }
    }
}

/// One report standing for many: lhs/rhs concatenated, measured = the worst part's
/// residual (its measured value if it has one), passing iff that is at most `tol`.
pub fn aggregate(id: &str, anchor: &str, parts: &[CheckReport], tol: f64) -> CheckReport {
    let worst = parts
        .iter()
        .map(|r| r.measured.unwrap_or(r.rel_residual))
        .fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
    let mut out = CheckReport::compare(
        id,
        anchor,
        parts.iter().flat_map(|r| r.lhs.clone()).collect(),
        parts.iter().flat_map(|r| r.rhs.clone()).collect(),
        tol,
    )
    .with_measured(worst)
    .with_criterion(Criterion::Range { lo: None, hi: Some(tol) })
    .param("count", parts.len() as u64);
    out.tolerance = tol;
    out
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn gauss(a: f64, n: usize) -> Result<TestFunction> {
    TestFunction::gaussian(a, n)
}

pub fn eq12_family() -> Result<Vec<TestFunction>> {
    Ok(vec![
        gauss(PI, 1)?,
        TestFunction::hermite_gaussian(2, PI, 1)?,
        TestFunction::bump(&[0.0], 1.0)?,
    ])
}

pub const EQ12_S: [f64; 5] = [0.25, 0.4, 0.5, 0.6, 0.75];

/// Convention selection for the line equation; returns the winner and its rows.
pub fn calibrate_group() -> Result<(FourierConvention, Vec<CheckReport>)> {
    let fam = vec![gauss(PI, 1)?, TestFunction::bump(&[0.0], 1.0)?];
    let cal = funceq::calibrate_convention(EqId::Eq12, &[0.3, 0.6], &fam)?;
    Ok((cal.convention, cal.rows))
}

pub fn eq12_group(conv: FourierConvention) -> Result<Vec<CheckReport>> {
    let mut out = vec![funceq::eq12_closed_form(conv)?];
    for phi in eq12_family()? {
        for &s in &EQ12_S {
            out.push(funceq::check_eq12(c(s), &phi, conv, funceq::TOL_EQ12)?);
        }
    }
    Ok(out)
}

pub const EQ12A_S: [f64; 3] = [0.3, 0.7, 1.1];

/// Corrected exponent as a check, printed exponent as a discrepancy row.
pub fn eq12a_group(conv: FourierConvention) -> Result<Vec<CheckReport>> {
    let b = DMatrix::identity(3, 3);
    let phi = gauss(PI, 3)?;
    let mut out = Vec::new();
    for &s in &EQ12A_S {
        out.push(funceq::check_eq12a(
            c(s),
            &b,
            &phi,
            conv,
            ExponentVariant::Corrected,
            funceq::TOL_EQ12A,
        )?);
        out.push(funceq::eq12a_printed_deviation(s, &b, &phi, conv)?);
    }
    Ok(out)
}

pub const EQ22_S: [f64; 2] = [0.2, 0.4];

pub fn eq22_group(conv: FourierConvention, opts: &RunOptions) -> Result<Vec<CheckReport>> {
    let b = PVSpace::signature_form(1, 3);
    let phi = gauss(PI, 3)?;
    let seed = opts.mc_seed()?;
    let mut out = Vec::new();
    for &s in &EQ22_S {
        out.push(funceq::check_eq22(s, &b, &phi, conv, funceq::TOL_EQ22)?);
        out.push(funceq::eq22_monte_carlo(s, &b, opts.mc_samples(), seed)?);
    }
    Ok(out)
}

pub fn zeta_group(full: bool) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let g = gauss(1.0, 1)?;
    let bump = TestFunction::bump(&[0.3], 1.0)?;
    for phi in [&g, &bump] {
        for &s in &[-0.4, -0.1, 0.3, 0.8, 1.5] {
            for omega in [1.0, -1.0] {
                out.push(zeta::check_continuation(phi, &[omega], c(s), 2)?);
            }
        }
        for k in 1..=3 {
            out.push(zeta::check_residue(phi, k)?);
        }
    }
    let line = PVSpace::scalar1d();
    for comp in [Component::Plus, Component::Minus] {
        for &s in &[0.3, -1.5] {
            for &l in &[0.5, 2.0] {
                out.push(zeta::check_scaling(&line, comp, c(s), &bump, l)?);
            }
        }
    }
    if full {
        let def = PVSpace::parse("definite:B=I,n=3")?;
        let g3 = gauss(1.0, 3)?;
        for &l in &[0.5, 2.0] {
            out.push(zeta::check_scaling(&def, Component::Whole, c(0.3), &g3, l)?);
            out.push(zeta::check_scaling(&def, Component::Whole, c(-1.7), &g3, l)?);
        }
        let ind = PVSpace::parse("indefinite:q=1,n=3")?;
        for comp in [Component::Plus, Component::Minus] {
            out.push(zeta::check_scaling(&ind, comp, c(-0.2), &g3, 2.0)?);
        }
    }
    Ok(out)
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ⟨t₊^{-1}, e^{-t}⟩ = -γ.
pub fn tplus_known() -> Result<CheckReport> {
    let e = TestFunction::exp_half(1.0)?;
    let v = homog::tplus_pair(c(-1.0), &e)?;
    Ok(CheckReport::scalar("homog.tplus_known", "tplus", v, c(-EULER_GAMMA), 1e-8)
        .with_criterion(Criterion::Absolute { tol: 1e-8 })
        .param("s", -1.0)
        .param("phi", e.label()))
}

pub fn ambiguity_family() -> Result<Vec<TestFunction>> {
    Ok(vec![
        gauss(1.0, 1)?,
        gauss(PI, 1)?,
        gauss(0.3, 1)?,
        TestFunction::bump(&[0.0], 1.0)?,
        TestFunction::bump(&[0.25], 1.5)?,
    ])
}

pub fn homog_group() -> Result<Vec<CheckReport>> {
    let mut out = vec![tplus_known()?];
    let g = gauss(1.0, 1)?;
    for &s in &[-0.5, 0.3, 1.7] {
        for &l in &[0.5, 2.0, 5.0] {
            out.push(homog::check_homogeneity(c(s), l, &g)?);
        }
    }
    for k in 1..=3 {
        out.push(homog::check_tplus_integer(k, &g)?);
    }
    let k = homog::HomogFunctional::new(1, -1.0, |w: &[f64]| c(if w[0] > 0.0 { 1.0 } else { 0.5 }));
    let psi = homog::make_cutoff(0.5, 2.0)?;
    for (centre, r) in [(1.5, 0.5), (-1.2, 0.7)] {
        out.push(homog::check_restriction(&k, &psi, &TestFunction::bump(&[centre], r)?)?);
    }
    // the diagonal density of the corrected heat operator at t = 1/2
    let kd = homog::HomogFunctional::new(1, -1.0, |_: &[f64]| c((2.0 * PI).powf(-0.5)));
    let psi2 = homog::make_cutoff(0.2, 1.3)?;
    out.push(homog::check_ambiguity(&kd, &psi, &psi2, &ambiguity_family()?)?);
    Ok(out)
}

pub const HEAT_TS: [f64; 3] = [0.25, 0.5, 1.0];
pub const HEAT_XS: [f64; 5] = [0.3, 0.7, 1.0, 1.5, 3.0];
pub const GENERATOR_POINTS: [(f64, f64); 3] = [(0.25, 0.7), (0.5, 2.0), (1.0, 1.5)];
pub const LACUNARY_YS: [f64; 10] = [-1.0, 0.0, 0.5, 1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0];

pub fn heat_phi() -> Result<TestFunction> {
    TestFunction::log_gauss(1.0, 0.0)
}

/// Corrected semigroup law on the (t, s) grid and the printed variant's √2 ratio.
pub fn semigroup_group() -> Result<Vec<CheckReport>> {
    use NormalizationVariant::*;
    let phi = heat_phi()?;
    let mut out = Vec::new();
    for &t in &HEAT_TS {
        for &s in &HEAT_TS {
            let (law, ratio) = heatflow::semigroup_reports(t, s, &phi, &HEAT_XS, Corrected)?;
            out.push(law);
            out.push(ratio);
            out.push(heatflow::semigroup_reports(t, s, &phi, &HEAT_XS, Printed)?.1);
        }
    }
    Ok(out)
}

pub fn generator_group() -> Result<Vec<CheckReport>> {
    let phi = heat_phi()?;
    GENERATOR_POINTS
        .iter()
        .map(|&(t, x)| heatflow::generator_check(t, 1e-2, &phi, x, NormalizationVariant::Corrected))
        .collect()
}

pub fn lacunary_group() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for &t in &[0.1, 1.0] {
        let (a, b) = heatflow::lacunary_check(t, &LACUNARY_YS, NormalizationVariant::Corrected)?;
        out.push(a);
        out.push(b);
    }
    Ok(out)
}

pub fn heat_group() -> Result<Vec<CheckReport>> {
    use NormalizationVariant::*;
    let mut out = semigroup_group()?;
    out.extend(generator_group()?);
    out.extend(lacunary_group()?);
    out.push(heatflow::langlands_bounds_check(&[0.25, 1.0], &[0.0, 0.5, 1.0, 2.0], Corrected)?);
    let pts = [(2.0, 3.0), (-1.0, -0.5), (0.5, 4.0), (1.0, -1.0)];
    out.push(heatflow::kernel_check(0.5, &pts, Corrected)?);
    let g = gauss(PI, 1)?;
    for &t in &[0.25, 0.5] {
        for &z in &[0.3, 0.5] {
            out.push(heatflow::diagonal_funceq(t, c(z), &g, Corrected)?);
        }
    }
    Ok(out)
}

/// Decay of the heat symbol at x = 1 on octaves up to ξ = 200, judged from ξ = 50.
pub fn symbol_decay(t: f64) -> Result<CheckReport> {
    let a = |tau: f64| heatflow::heat_symbol(t, 1.0, tau, NormalizationVariant::Corrected);
    let rep = symbolkern::decay_probe(&a, 5.0, 200.0)?;
    Ok(symbolkern::decay_check(&rep, 50.0, -8.0, &format!("heat:t={t},x=1")))
}

/// a_f(αm, ξ) = a_f(m, αξ) for `count` seeded α = e^U, U uniform on [-3, 3].
pub fn symbol_scaling(ev: &SymbolEvaluator, count: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = ev.space.n;
    let mut parts = Vec::with_capacity(count);
    let mut alphas = Vec::with_capacity(count);
    for _ in 0..count {
        let alpha = rng.random_range(-3.0..3.0f64).exp();
        let m: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let xi: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        parts.push(symbolkern::scaling_check(ev, &m, &xi, alpha)?);
        alphas.push(alpha);
    }
    Ok(aggregate("symbol.scaling", "scaling", &parts, symbolkern::TOL_SCALING)
        .param("f", ev.f.label())
        .param("space", ev.space.label())
        .param("seed", seed)
        .diag("alpha", alphas))
}

pub fn symbol_group(opts: &RunOptions, full: bool) -> Result<Vec<CheckReport>> {
    use NormalizationVariant::Corrected;
    let line = PVSpace::scalar1d();
    let seed = opts.sampling_seed();
    let mut out = vec![symbol_decay(0.1)?];
    let heat = GroupFunction::heat(0.5, Corrected)?;
    let lg = GroupFunction::log_gauss(1.0, 0.3)?;
    let xis = [-5.0, 0.0, 1.0, 100.0];
    for f in [&heat, &lg] {
        let ev = SymbolEvaluator::new(f, &line)?;
        out.push(symbolkern::fixed_point_check(&ev, &xis)?);
        out.push(symbol_scaling(&ev, 50, seed)?);
    }
    let ev = SymbolEvaluator::new(&lg, &line)?;
    let ms: Vec<f64> = (0..20).map(|i| -3.0 + 0.31 * i as f64).collect();
    let gx: Vec<f64> = (0..20).map(|i| -10.0 + 1.05 * i as f64).collect();
    out.push(SymbolGrid::new(&ev, &ms, &gx)?.bound_check());
    let kern = AuxKernel::new(SymbolEvaluator::new(&heat, &line)?)?;
    let mut pts = Vec::new();
    for i in 0..10 {
        for j in 0..10 {
            pts.push((0.3 + 0.35 * i as f64, 0.2 + 0.4 * j as f64));
        }
    }
    out.push(symbolkern::kernel_duality_check(&kern, &pts)?);
    out.push(symbolkern::local_integrability_check(&heat, 1.0, 4, 0.75)?);
    if full {
        out.push(symbolkern::local_integrability_check(&heat, 1.0, 6, 0.75)?);
        out.push(symbolkern::local_integrability_check(&GroupFunction::heat(0.1, Corrected)?, 1.0, 6, 0.75)?);
        let f = GroupFunction::log_gauss(2.0, 0.0)?;
        for n in [2usize, 3] {
            let sp = PVSpace::definite(DMatrix::from_diagonal_element(n, n, 1.5))?;
            let ev = SymbolEvaluator::new(&f, &sp)?;
            out.push(symbolkern::fixed_point_check(&ev, &[0.0, 3.0])?);
            out.push(symbol_scaling(&ev, 10, seed)?);
        }
    }
    Ok(out)
}

pub const INVARIANCE_SPACES: [&str; 3] = ["scalar1d", "definite:B=I,n=3", "indefinite:q=1,n=3"];

/// `count` seeded (g, m) pairs per space: relative invariance and det ρ(g)² = χ(g)^{2n/deg p}.
pub fn invariance_group(space: &PVSpace, count: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let gs = space.sample_group(count, seed)?;
    let ms = space.sample_points(count, seed);
    let rel: Vec<CheckReport> = gs
        .iter()
        .zip(&ms)
        .map(|(g, m)| space.check_relative_invariance(g, m))
        .collect();
    let det: Vec<CheckReport> = gs.iter().map(|g| space.check_determinant(g)).collect();
    let tag = |r: CheckReport| r.param("space", space.label()).param("seed", seed);
    Ok(vec![
        tag(aggregate("invariance.relative", "relative-invariant", &rel, 1e-10)),
        tag(aggregate("invariance.determinant", "relative-invariant", &det, 1e-10)),
    ])
}

pub fn quick(opts: &RunOptions) -> Result<Vec<CheckReport>> {
    let (conv, mut out) = calibrate_group()?;
    out.extend(eq12_group(conv)?);
    out.extend(zeta_group(false)?);
    out.extend(homog_group()?);
    out.extend(heat_group()?);
    out.extend(symbol_group(opts, false)?);
    for s in INVARIANCE_SPACES {
        out.extend(invariance_group(&PVSpace::parse(s)?, 200, opts.sampling_seed())?);
    }
    Ok(out)
}

pub fn full(opts: &RunOptions) -> Result<Vec<CheckReport>> {
    // fail on a missing seed before the long part starts
    opts.mc_seed()?;
    let (conv, mut out) = calibrate_group()?;
    out.extend(eq12_group(conv)?);
    out.extend(eq12a_group(conv)?);
    out.extend(eq22_group(conv, opts)?);
    out.extend(zeta_group(true)?);
    out.extend(homog_group()?);
    out.extend(heat_group()?);
    out.extend(symbol_group(opts, true)?);
    for s in INVARIANCE_SPACES {
        out.extend(invariance_group(&PVSpace::parse(s)?, 200, opts.sampling_seed())?);
    }
    Ok(out)
}

/// Runs a suite; overrides applied, rows sorted.
pub fn suite(which: Suite, opts: &RunOptions) -> Result<Vec<CheckReport>> {
    let rows = match which {
        Suite::Quick => quick(opts)?,
        Suite::Full => full(opts)?,
    };
    Ok(opts.finish(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_are_validated_and_applied() {
        let mut o = RunOptions::default();
        assert!(o.set_tolerance("funceq.nope", 1e-3).is_err());
        o.set_tolerance("funceq.eq12", 1e-30).unwrap();
        let r = CheckReport::scalar("funceq.eq12", "eq12", c(1.0), c(1.0 + 1e-12), 1e-6);
        let z = CheckReport::scalar("a.b", "x", c(1.0), c(1.0), 1e-6);
        let rows = o.finish(vec![r, z]);
        assert_eq!(rows[0].id, "a.b");
        assert!(!rows[1].passed && rows[1].tolerance == 1e-30);
    }

    #[test]
    fn mc_needs_a_seed() {
        let e = eq22_group(FourierConvention::TwoPi, &RunOptions::default()).unwrap_err();
        assert!(matches!(e, Error::Config { ref key, .. } if key == "seed"));
        assert!(Suite::parse("medium").is_err());
    }

    #[test]
    fn aggregate_takes_the_worst_part() {
        let a = CheckReport::scalar("x", "a", c(1.0), c(1.0), 1e-9);
        let b = CheckReport::scalar("x", "a", c(1.0), c(1.0 + 1e-10), 1e-9);
        let r = aggregate("y", "a", &[a, b], 1e-9);
        assert!(r.passed && r.lhs.len() == 2);
        assert!((r.measured.unwrap() - 1e-10).abs() < 1e-12);
    }

    #[test]
    fn every_group_id_is_known() {
        let ids = [
            tplus_known().unwrap().id,
            symbol_decay(0.1).unwrap().id,
        ];
        for id in ids {
            assert!(KNOWN_IDS.contains(&id.as_str()), "{id}");
        }
    }
}
