//! Browser bindings for three small computations: the heat flow of a log-Gaussian on the
//! half-line, the decay of its symbol, and both sides of the line functional equation.
//!
//! Errors come back as strings so the same functions run in native tests.

use prehom::heatflow::{heat_symbol, log_gauss_flow, EulerSemigroup, NormalizationVariant};
use prehom::testfn::{FourierConvention, TestFunction};
use prehom::C64;
use wasm_bindgen::prelude::*;

fn variant(printed: bool) -> NormalizationVariant {
    if printed {
        NormalizationVariant::Printed
    } else {
        NormalizationVariant::Corrected
    }
}

/// S_t φ for φ(x) = e^{-a(ln x - μ)²}, evaluated by quadrature on `xs`, followed by the
/// closed form on the same points: the result has length 2·len(xs).
#[wasm_bindgen]
pub fn heat_profile(t: f64, a: f64, mu: f64, printed: bool, xs: &[f64]) -> Result<Vec<f64>, String> {
    let v = variant(printed);
    let phi = TestFunction::log_gauss(a, mu).map_err(|e| e.to_string())?;
    let sg = EulerSemigroup::new(t, v).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * xs.len());
    for &x in xs {
        out.push(sg.apply(&phi, x).map_err(|e| e.to_string())?.re);
    }
    out.extend(xs.iter().map(|&x| log_gauss_flow(t, a, mu, x, v)));
    Ok(out)
}

/// |a(x, ξ)| for the heat symbol at time t on the given ξ values.
#[wasm_bindgen]
pub fn symbol_decay(t: f64, x: f64, xis: &[f64]) -> Result<Vec<f64>, String> {
    xis.iter()
        .map(|&xi| {
            heat_symbol(t, x, xi, NormalizationVariant::Corrected)
                .map(|v| v.norm())
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// [lhs, rhs, relative residual] of the line functional equation for e^{-a m²}.
#[wasm_bindgen]
pub fn eq12_sides(s: f64, a: f64) -> Result<Vec<f64>, String> {
    let phi = TestFunction::gaussian(a, 1).map_err(|e| e.to_string())?;
    let r = prehom::funceq::check_eq12(C64::new(s, 0.0), &phi, FourierConvention::TwoPi, 1e-6)
        .map_err(|e| e.to_string())?;
    Ok(vec![r.lhs[0].re, r.rhs[0].re, r.rel_residual])
}
