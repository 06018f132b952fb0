//! Parsing for the small `kind:key=value,...` strings used to name test functions and spaces.

use nalgebra::DMatrix;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A parsed `head:k=v,k=v` string. Commas inside parentheses do not split.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecString {
    pub head: String,
    pub keys: BTreeMap<String, String>,
}

impl SpecString {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), r),
            None => (s, ""),
        };
        if head.is_empty() {
            return Err(Error::config(s, "missing kind before ':'"));
        }
        let mut keys = BTreeMap::new();
        for part in split_top_level(rest) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::config(part, "expected key=value"))?;
            if keys.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::config(k.trim(), "key given twice"));
            }
        }
        Ok(SpecString {
            head: head.to_ascii_lowercase(),
            keys,
        })
    }

    /// Errors on any key outside `allowed`.
    pub fn only(&self, allowed: &[&str]) -> Result<()> {
        for k in self.keys.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::config(
                    k.clone(),
                    format!("unknown key for `{}` (allowed: {})", self.head, allowed.join(", ")),
                ));
            }
        }
        Ok(())
    }

    pub fn real(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.keys.get(key) {
            Some(v) => parse_real(v).map_err(|_| Error::config(key, format!("bad number `{v}`"))),
            None => default.ok_or_else(|| Error::config(key, "required")),
        }
    }

    pub fn usize(&self, key: &str, default: Option<usize>) -> Result<usize> {
        match self.keys.get(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Error::config(key, format!("bad integer `{v}`"))),
            None => default.ok_or_else(|| Error::config(key, "required")),
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Reals with `pi` allowed: `3.5`, `pi`, `2pi`, `2*pi`, `pi/2`, `-1e-3`.
pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    let bad = || Error::config(s, "not a real number");
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    if let Some((num, den)) = t.split_once('/') {
        let d: f64 = parse_real(den)?;
        return Ok(parse_real(num)? / d);
    }
    if let Some(p) = t.strip_suffix("pi") {
        let p = p.strip_suffix('*').unwrap_or(p);
        return match p {
            "" => Ok(PI),
            "-" => Ok(-PI),
            _ => Ok(p.parse::<f64>().map_err(|_| bad())? * PI),
        };
    }
    Err(bad())
}

/// `I`, `diag(a,b,c)` or a row-major `[a,b;c,d]` matrix of size n.
pub fn parse_matrix(s: &str, n: usize) -> Result<DMatrix<f64>> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("i") {
        return Ok(DMatrix::identity(n, n));
    }
    if let Some(body) = t.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        let d: Vec<f64> = body
            .split([',', ';'])
            .map(parse_real)
            .collect::<Result<_>>()?;
        if d.len() != n {
            return Err(Error::config("B", format!("diag has {} entries, n = {n}", d.len())));
        }
        return Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)));
    }
    if let Some(body) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let rows: Vec<Vec<f64>> = body
            .split(';')
            .map(|r| r.split(',').map(parse_real).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::config("B", format!("expected a {n}x{n} matrix")));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        return Ok(DMatrix::from_row_slice(n, n, &flat));
    }
    Err(Error::config("B", format!("cannot read matrix `{s}`")))
}

/// Canonical text for a real, short when it is a simple multiple of π.
pub fn fmt_real(x: f64) -> String {
    if x != 0.0 && ((x / PI) - (x / PI).round()).abs() < 1e-15 && (x / PI).round().abs() <= 8.0 {
        let k = (x / PI).round() as i64;
        return match k {
            1 => "pi".into(),
            -1 => "-pi".into(),
            _ => format!("{k}pi"),
        };
    }
    format!("{x}")
}

pub fn fmt_matrix(b: &DMatrix<f64>) -> String {
    let n = b.nrows();
    let off = (0..n).any(|i| (0..n).any(|j| i != j && b[(i, j)] != 0.0));
    if !off {
        if (0..n).all(|i| b[(i, i)] == 1.0) {
            return "I".into();
        }
        let d: Vec<String> = (0..n).map(|i| fmt_real(b[(i, i)])).collect();
        return format!("diag({})", d.join(","));
    }
    let rows: Vec<String> = (0..n)
        .map(|i| (0..n).map(|j| fmt_real(b[(i, j)])).collect::<Vec<_>>().join(","))
        .collect();
    format!("[{}]", rows.join(";"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_real("-0.25").unwrap(), -0.25);
        assert!(parse_real("pie").is_err());
    }

    #[test]
    fn spec_strings() {
        let s = SpecString::parse("gaussian:a=pi,n=2,B=diag(1,4)").unwrap();
        assert_eq!(s.head, "gaussian");
        assert_eq!(s.keys["B"], "diag(1,4)");
        let b = parse_matrix(&s.keys["B"], 2).unwrap();
        assert_eq!(b[(1, 1)], 4.0);
        assert!(s.only(&["a", "n"]).is_err());
        assert_eq!(fmt_matrix(&b), "diag(1,4)");
        assert_eq!(fmt_real(PI), "pi");
    }
}
