use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use prehom::config::{self, Settings, TOL_DIR_ENV};
use prehom::funceq::{self, EqId, ExponentVariant};
use prehom::heatflow::{self, EulerSemigroup, NormalizationVariant};
use prehom::homog;
use prehom::params::parse_real;
use prehom::phspace::{Component, PVSpace};
use prehom::report::CheckReport;
use prehom::runner::{self, RunOptions, Suite};
use prehom::symbolkern::{self, AuxKernel, GroupFunction, SymbolEvaluator, SymbolGrid};
use prehom::zeta::{self, ZetaOptions};
use prehom::{Error, FourierConvention, Result, TestFunction, C64};

/// Numerical checks for local zeta functions, homogeneous distributions and
/// group-convolution symbols.
///
/// Exit status: 0 when every check passes, 2 when any fails, 1 on errors.
#[derive(Parser)]
#[command(name = "prehom", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Report format: jsonl or csv
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write reports here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Flat key=value file (format, out, seed, mc_samples, tol.<id>)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for sampling; required by Monte-Carlo oracles
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance override, repeatable: --tol funceq.eq22=1e-6
    #[arg(long = "tol", global = true, value_name = "ID=VALUE")]
    tol: Vec<String>,
    /// Monte-Carlo sample count
    #[arg(long, global = true)]
    mc_samples: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Functional-equation residuals
    Funceq {
        #[arg(long)]
        eq: String,
        /// Comma-separated s values
        #[arg(long, default_value = "0.5")]
        s: String,
        #[arg(long)]
        testfn: Option<String>,
        /// auto, twopi or angular
        #[arg(long, default_value = "auto")]
        convention: String,
        /// Exponent variant for 12a: printed or corrected
        #[arg(long, default_value = "corrected")]
        variant: String,
        /// Space for 12a/22 (default definite:B=I,n=3 and indefinite:q=1,n=3)
        #[arg(long)]
        space: Option<String>,
        /// Also run the seeded Monte-Carlo oracle (22 only)
        #[arg(long)]
        monte_carlo: bool,
    },
    /// Local zeta values and the scaling identity
    Zeta {
        #[arg(long, default_value = "scalar1d")]
        space: String,
        /// whole, plus or minus; default all components of the space
        #[arg(long)]
        component: Option<String>,
        #[arg(long, default_value = "0.5")]
        s: String,
        #[arg(long)]
        testfn: Option<String>,
        #[arg(long, default_value = "2")]
        lambda: String,
    },
    /// Homogeneous distributions: homogeneity, tplus-int, extension, ambiguity
    Homog {
        #[arg(long, default_value = "homogeneity,tplus-int,extension,ambiguity")]
        check: String,
        #[arg(long, default_value = "-0.5,0.3,1.7")]
        s: String,
        #[arg(long, default_value = "0.5,2,5")]
        lambda: String,
        #[arg(long, default_value = "1,2,3")]
        k: String,
        #[arg(long, default_value = "gaussian:a=1,n=1")]
        testfn: String,
    },
    /// Symbol probes: symbol-decay, scaling, kernel, integrability
    Probe {
        #[arg(long, default_value = "symbol-decay,scaling,kernel,integrability")]
        what: String,
        /// Group function for scaling, kernel and integrability
        #[arg(long, default_value = "heat:t=0.5,variant=corrected")]
        f: String,
        /// Heat time for the decay probe
        #[arg(long, default_value = "0.1")]
        t: f64,
        #[arg(long, default_value = "50")]
        count: usize,
        #[arg(long, default_value = "6")]
        levels: usize,
        /// Write the symbol on an m × ξ grid as CSV
        #[arg(long)]
        grid_out: Option<PathBuf>,
    },
    /// Heat semigroup on the positive half-line
    Heat {
        #[arg(long, default_value = "semigroup,generator,lacunary,bounds,funceq,kernel")]
        check: String,
        #[arg(long, default_value = "0.25,0.5,1")]
        t: String,
        /// Second time for the semigroup law (default: the t list)
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value = "corrected")]
        variant: String,
        #[arg(long, default_value = "0.3,0.7,1,1.5,3")]
        x: String,
        #[arg(long, default_value = "loggauss:a=1,mu=0")]
        testfn: String,
        /// Step for the generator difference quotient
        #[arg(long, default_value = "1e-2")]
        h: f64,
        /// Write S_t φ on the x grid as CSV
        #[arg(long)]
        profile_out: Option<PathBuf>,
    },
    /// Relative invariance and the determinant identity on seeded samples
    Invariance {
        #[arg(long, default_value = "scalar1d;definite:B=I,n=3;indefinite:q=1,n=3")]
        space: String,
        #[arg(long, default_value = "200")]
        count: usize,
    },
    /// Pick the Fourier convention (and 12a exponent) with the smallest residual
    Calibrate {
        #[arg(long, default_value = "12")]
        eq: String,
        #[arg(long, default_value = "0.3,0.6")]
        s: String,
        /// Repeatable
        #[arg(long)]
        testfn: Vec<String>,
    },
    /// Run a named suite: quick or full
    Suite { name: String },
}

fn reals(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| parse_real(p).map_err(|_| Error::config(key, format!("bad number `{p}`"))))
        .collect()
}

fn names(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(String::from).collect()
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn parse_testfn(spec: Option<&str>, default: &str) -> Result<TestFunction> {
    TestFunction::parse(spec.unwrap_or(default))
}

fn convention(name: &str, eq: EqId, s: &[f64], phi: &TestFunction) -> Result<FourierConvention> {
    if name == "auto" {
        Ok(funceq::calibrate_convention(eq, s, std::slice::from_ref(phi))?.convention)
    } else {
        FourierConvention::parse(name)
    }
}

fn settings(g: &Global) -> Result<Settings> {
    let mut st = Settings::default();
    if let Ok(dir) = std::env::var(TOL_DIR_ENV) {
        if !dir.is_empty() {
            st.apply_tolerance_dir(std::path::Path::new(&dir))?;
        }
    }
    if let Some(p) = &g.config {
        st.apply_file(p)?;
    }
    if let Some(f) = &g.format {
        st.apply("format", f)?;
    }
    if let Some(o) = &g.out {
        st.out = Some(o.clone());
    }
    if let Some(s) = g.seed {
        st.opts.seed = Some(s);
    }
    if let Some(n) = g.mc_samples {
        st.apply("mc_samples", &n.to_string())?;
    }
    for t in &g.tol {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| Error::config("tol", format!("expected ID=VALUE, got `{t}`")))?;
        st.apply(&format!("tol.{}", k.trim()), v.trim())?;
    }
    Ok(st)
}

fn run_funceq(
    eq: &str,
    s: &str,
    testfn: Option<&str>,
    conv: &str,
    variant: &str,
    space: Option<&str>,
    monte_carlo: bool,
    opts: &RunOptions,
) -> Result<Vec<CheckReport>> {
    let eq = EqId::parse(eq)?;
    let ss = reals("s", s)?;
    let mut out = Vec::new();
    match eq {
        EqId::Eq12 => {
            let phi = parse_testfn(testfn, "gaussian:a=pi,n=1")?;
            let cv = convention(conv, eq, &ss, &phi)?;
            for &x in &ss {
                out.push(funceq::check_eq12(c(x), &phi, cv, funceq::TOL_EQ12)?);
            }
        }
        EqId::Eq12a => {
            let sp = PVSpace::parse(space.unwrap_or("definite:B=I,n=3"))?;
            let phi = parse_testfn(testfn, &format!("gaussian:a=pi,n={}", sp.n))?;
            let var = ExponentVariant::parse(variant)?;
            let cv = convention(conv, eq, &ss, &phi)?;
            for &x in &ss {
                out.push(funceq::check_eq12a(c(x), &sp.b, &phi, cv, var, funceq::TOL_EQ12A)?);
                if var == ExponentVariant::Printed {
                    out.push(funceq::eq12a_printed_deviation(x, &sp.b, &phi, cv)?);
                }
            }
        }
        EqId::Eq22 => {
            let sp = PVSpace::parse(space.unwrap_or("indefinite:q=1,n=3"))?;
            let phi = parse_testfn(testfn, &format!("gaussian:a=pi,n={}", sp.n))?;
            let cv = convention(conv, eq, &ss, &phi)?;
            let seed = if monte_carlo { Some(opts.mc_seed()?) } else { None };
            for &x in &ss {
                out.push(funceq::check_eq22(x, &sp.b, &phi, cv, funceq::TOL_EQ22)?);
                if let Some(seed) = seed {
                    out.push(funceq::eq22_monte_carlo(x, &sp.b, opts.mc_samples(), seed)?);
                }
            }
        }
    }
    Ok(out)
}

fn run_zeta(space: &str, comp: Option<&str>, s: &str, testfn: Option<&str>, lambda: &str) -> Result<Vec<CheckReport>> {
    let sp = PVSpace::parse(space)?;
    let phi = parse_testfn(testfn, &format!("gaussian:a=pi,n={}", sp.n))?;
    let comps = match comp {
        Some(c) => vec![Component::parse(c)?],
        None => sp.components(),
    };
    let lambdas = reals("lambda", lambda)?;
    let opt = ZetaOptions::default();
    let mut out = Vec::new();
    for cp in comps {
        for &x in &reals("s", s)? {
            let v = zeta::zeta_local(&sp, cp, c(x), &phi, &opt)?;
            let f = zeta::zeta_normalized(&sp, cp, c(x), &phi, &opt)?.value;
            let mut row = CheckReport::measure("zeta.value", "zeta", v.error, None, None)
                .param("s", x)
                .param("space", sp.label())
                .param("component", cp.name())
                .param("phi", phi.label())
                .diag("normalized", vec![f.re, f.im])
                .diag("continuation_order", v.continuation_order as u64)
                .diag("pole_distance", v.pole_distance);
            row.lhs = vec![v.value];
            out.push(row);
            for &l in &lambdas {
                out.push(zeta::check_scaling(&sp, cp, c(x), &phi, l)?);
            }
        }
    }
    Ok(out)
}

fn run_homog(check: &str, s: &str, lambda: &str, k: &str, testfn: &str) -> Result<Vec<CheckReport>> {
    let phi = TestFunction::parse(testfn)?;
    let mut out = Vec::new();
    for what in names(check) {
        match what.as_str() {
            "homogeneity" => {
                for &x in &reals("s", s)? {
                    for &l in &reals("lambda", lambda)? {
                        out.push(homog::check_homogeneity(c(x), l, &phi)?);
                    }
                }
            }
            "tplus-int" => {
                out.push(runner::tplus_known()?);
                for kk in reals("k", k)? {
                    if kk < 1.0 || kk.fract() != 0.0 {
                        return Err(Error::config("k", "k must be a positive integer"));
                    }
                    out.push(homog::check_tplus_integer(kk as usize, &phi)?);
                }
            }
            "extension" | "ambiguity" => {
                let rows = runner::homog_group()?;
                let id = if what == "extension" { "homog.extension" } else { "homog.ambiguity" };
                out.extend(rows.into_iter().filter(|r| r.id == id));
            }
            other => return Err(Error::config("check", format!("unknown homog check `{other}`"))),
        }
    }
    Ok(out)
}

fn line_grid() -> (Vec<f64>, Vec<f64>) {
    let ms = (0..41).map(|i| -4.0 + 0.2 * i as f64).collect();
    let xis = (0..81).map(|i| -20.0 + 0.5 * i as f64).collect();
    (ms, xis)
}

fn run_probe(
    what: &str,
    f: &str,
    t: f64,
    count: usize,
    levels: usize,
    grid_out: Option<&PathBuf>,
    opts: &RunOptions,
) -> Result<Vec<CheckReport>> {
    let gf = GroupFunction::parse(f)?;
    let line = PVSpace::scalar1d();
    let mut out = Vec::new();
    for w in names(what) {
        match w.as_str() {
            "symbol-decay" => out.push(runner::symbol_decay(t)?),
            "scaling" => {
                let ev = SymbolEvaluator::new(&gf, &line)?;
                out.push(symbolkern::fixed_point_check(&ev, &[-5.0, 0.0, 1.0, 100.0])?);
                out.push(runner::symbol_scaling(&ev, count, opts.sampling_seed())?);
            }
            "kernel" => {
                let kern = AuxKernel::new(SymbolEvaluator::new(&gf, &line)?)?;
                let mut pts = Vec::new();
                for i in 0..10 {
                    for j in 0..10 {
                        pts.push((0.3 + 0.35 * i as f64, 0.2 + 0.4 * j as f64));
                    }
                }
                out.push(symbolkern::kernel_duality_check(&kern, &pts)?);
            }
            "integrability" => out.push(symbolkern::local_integrability_check(&gf, 1.0, levels, 0.75)?),
            other => return Err(Error::config("what", format!("unknown probe `{other}`"))),
        }
    }
    if let Some(p) = grid_out {
        let (ms, xis) = line_grid();
        let grid = SymbolGrid::new(&SymbolEvaluator::new(&gf, &line)?, &ms, &xis)?;
        write_file(p, &grid.to_csv())?;
        out.push(grid.bound_check());
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn run_heat(
    check: &str,
    t: &str,
    s: Option<&str>,
    variant: &str,
    x: &str,
    testfn: &str,
    h: f64,
    profile_out: Option<&PathBuf>,
) -> Result<Vec<CheckReport>> {
    let v = NormalizationVariant::parse(variant)?;
    let ts = reals("t", t)?;
    let ss = match s {
        Some(s) => reals("s", s)?,
        None => ts.clone(),
    };
    let xs = reals("x", x)?;
    let phi = TestFunction::parse(testfn)?;
    let mut out = Vec::new();
    for what in names(check) {
        match what.as_str() {
            "semigroup" => {
                for &a in &ts {
                    for &b in &ss {
                        let (law, ratio) = heatflow::semigroup_reports(a, b, &phi, &xs, v)?;
                        out.push(law);
                        out.push(ratio);
                    }
                }
            }
            "generator" => {
                for &a in &ts {
                    for &p in &xs {
                        out.push(heatflow::generator_check(a, h, &phi, p, v)?);
                    }
                }
            }
            "lacunary" => {
                for &a in &ts {
                    let (agree, support) = heatflow::lacunary_check(a, &runner::LACUNARY_YS, v)?;
                    out.push(agree);
                    out.push(support);
                }
            }
            "bounds" => out.push(heatflow::langlands_bounds_check(&ts, &[0.0, 0.5, 1.0, 2.0], v)?),
            "funceq" => {
                let g = TestFunction::gaussian(std::f64::consts::PI, 1)?;
                for &a in &ts {
                    out.push(heatflow::diagonal_funceq(a, c(0.5), &g, v)?);
                }
            }
            "kernel" => {
                let pts = [(2.0, 3.0), (-1.0, -0.5), (0.5, 4.0), (1.0, -1.0)];
                for &a in &ts {
                    out.push(heatflow::kernel_check(a, &pts, v)?);
                }
            }
            other => return Err(Error::config("check", format!("unknown heat check `{other}`"))),
        }
    }
    if let Some(p) = profile_out {
        let mut csv = String::from("t,x,re,im\n");
        for &a in &ts {
            let sg = EulerSemigroup::new(a, v)?;
            for &p in &xs {
                let y = sg.apply(&phi, p)?;
                csv.push_str(&format!("{a},{p},{},{}\n", y.re, y.im));
            }
        }
        write_file(p, &csv)?;
    }
    Ok(out)
}

fn run_invariance(space: &str, count: usize, opts: &RunOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for s in space.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        out.extend(runner::invariance_group(&PVSpace::parse(s)?, count, opts.sampling_seed())?);
    }
    Ok(out)
}

fn run_calibrate(eq: &str, s: &str, testfn: &[String]) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for e in names(eq) {
        let id = EqId::parse(&e)?;
        let fam: Vec<TestFunction> = if testfn.is_empty() {
            let n = if id == EqId::Eq12 { 1 } else { 3 };
            vec![TestFunction::gaussian(std::f64::consts::PI, n)?]
        } else {
            testfn.iter().map(|t| TestFunction::parse(t)).collect::<Result<_>>()?
        };
        let ss = reals("s", s)?;
        out.extend(funceq::calibrate_convention(id, &ss, &fam)?.rows);
    }
    Ok(out)
}

fn write_file(p: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(p, text).map_err(|e| Error::config("out", format!("{}: {e}", p.display())))
}

fn execute(cli: &Cli, st: &Settings) -> Result<Vec<CheckReport>> {
    let o = &st.opts;
    let rows = match &cli.cmd {
        Cmd::Funceq { eq, s, testfn, convention, variant, space, monte_carlo } => run_funceq(
            eq,
            s,
            testfn.as_deref(),
            convention,
            variant,
            space.as_deref(),
            *monte_carlo,
            o,
        )?,
        Cmd::Zeta { space, component, s, testfn, lambda } => {
            run_zeta(space, component.as_deref(), s, testfn.as_deref(), lambda)?
        }
        Cmd::Homog { check, s, lambda, k, testfn } => run_homog(check, s, lambda, k, testfn)?,
        Cmd::Probe { what, f, t, count, levels, grid_out } => {
            run_probe(what, f, *t, *count, *levels, grid_out.as_ref(), o)?
        }
        Cmd::Heat { check, t, s, variant, x, testfn, h, profile_out } => {
            run_heat(check, t, s.as_deref(), variant, x, testfn, *h, profile_out.as_ref())?
        }
        Cmd::Invariance { space, count } => run_invariance(space, *count, o)?,
        Cmd::Calibrate { eq, s, testfn } => run_calibrate(eq, s, testfn)?,
        Cmd::Suite { name } => return runner::suite(Suite::parse(name)?, o),
    };
    Ok(o.finish(rows))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = settings(&cli.global).and_then(|st| {
        let rows = execute(&cli, &st)?;
        let text = config::render(&rows, st.format);
        match &st.out {
            Some(p) => write_file(p, &text)?,
            None => {
                let mut so = std::io::stdout().lock();
                so.write_all(text.as_bytes())
                    .and_then(|_| so.flush())
                    .map_err(|e| Error::config("out", e))?;
            }
        }
        Ok(rows)
    });
    match result {
        Ok(rows) => {
            eprint!("{}", config::summary(&rows));
            if rows.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("prehom: error: {e}");
            ExitCode::from(1)
        }
    }
}
