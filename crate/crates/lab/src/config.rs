//! Flat `key = value` scenario files.
//!
//! ```text
//! # F = X² + XY + Y²
//! coeff = 2 0 1
//! coeff = 1 1 1
//! coeff = 0 2 1
//! omega1 = 1
//! omega2 = 1
//! e1 = 0.5
//! e2 = 0.5
//! h = 0.01
//! delta1p = 0.8
//! delta2p = 0.8
//! delta1 = 0.6
//! delta2 = 0.6
//! ```
//!
//! `coeff` may repeat and `h` takes one or more values; every other key may
//! appear once. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use revival_core::dynamics::Scenario;
use revival_core::hamiltonian::{EnergyPoint, OscillatorPair, PolynomialF};
use revival_core::wavepacket::{Envelope, PacketParams};

use crate::LabError;

/// Which remainders `convergence` measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemainderChoice {
    /// Linear remainder only.
    Linear,
    /// Quadratic remainder only.
    Quadratic,
    /// Both.
    Both,
}

/// Parsed and validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    /// `(i, j, c)` terms of `F`, in file order.
    pub coeffs: Vec<(u32, u32, f64)>,
    pub omega1: f64,
    pub omega2: f64,
    pub e1: f64,
    pub e2: f64,
    /// First entry is used by single-`h` subcommands.
    pub h: Vec<f64>,
    pub delta1: f64,
    pub delta2: f64,
    pub delta1p: f64,
    pub delta2p: f64,
    pub window_factor: f64,
    pub t_start: f64,
    /// `None` means two of the longer classical periods.
    pub t_end: Option<f64>,
    pub samples: usize,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub s: f64,
    pub grid_points: usize,
    pub remainder: RemainderChoice,
    pub max_den: u64,
    pub tol: f64,
    pub q_max: u64,
    pub cf_terms: usize,
    pub eta: Option<f64>,
    pub eps: f64,
}

const KEYS: &[&str] = &[
    "coeff",
    "omega1",
    "omega2",
    "e1",
    "e2",
    "h",
    "delta1",
    "delta2",
    "delta1p",
    "delta2p",
    "window_factor",
    "t_start",
    "t_end",
    "samples",
    "alpha",
    "beta",
    "mu",
    "s",
    "grid_points",
    "remainder",
    "max_den",
    "tol",
    "q_max",
    "cf_terms",
    "eta",
    "eps",
];

struct Entry {
    line: usize,
    value: String,
}

fn parse_err(line: usize, msg: impl Into<String>) -> LabError {
    LabError::Parse { line, msg: msg.into() }
}

fn invalid(msg: impl Into<String>) -> LabError {
    LabError::Validation(msg.into())
}

struct Fields {
    map: BTreeMap<&'static str, Entry>,
}

impl Fields {
    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, LabError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|_| parse_err(e.line, format!("cannot read `{}` for {key}", e.value))),
        }
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T, LabError> {
        self.get(key)?
            .ok_or_else(|| invalid(format!("missing required key {key}")))
    }

    fn or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, LabError> {
        Ok(self.get(key)?.unwrap_or(default))
    }
}

impl ScenarioConfig {
    /// Reads and validates a file.
    pub fn from_path(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses and validates file contents.
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let mut map = BTreeMap::new();
        let mut coeffs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let key = *KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| parse_err(line, format!("unknown key `{key}`")))?;
            if value.is_empty() {
                return Err(parse_err(line, format!("missing value for {key}")));
            }
            if key == "coeff" {
                coeffs.push(parse_coeff(line, value)?);
                continue;
            }
            if map
                .insert(
                    key,
                    Entry {
                        line,
                        value: value.to_string(),
                    },
                )
                .is_some()
            {
                return Err(parse_err(line, format!("duplicate key {key}")));
            }
        }
        let f = Fields { map };

        let h = match f.map.get("h") {
            None => return Err(invalid("missing required key h")),
            Some(e) => e
                .value
                .split_whitespace()
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| parse_err(e.line, format!("cannot read `{v}` for h")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let remainder = match f.map.get("remainder") {
            None => RemainderChoice::Both,
            Some(e) => match e.value.as_str() {
                "linear" => RemainderChoice::Linear,
                "quadratic" => RemainderChoice::Quadratic,
                "both" => RemainderChoice::Both,
                other => {
                    return Err(parse_err(
                        e.line,
                        format!("remainder must be linear, quadratic or both, got `{other}`"),
                    ))
                }
            },
        };

        let cfg = ScenarioConfig {
            coeffs,
            omega1: f.or("omega1", 1.0)?,
            omega2: f.or("omega2", 1.0)?,
            e1: f.required("e1")?,
            e2: f.required("e2")?,
            h,
            delta1: f.required("delta1")?,
            delta2: f.required("delta2")?,
            delta1p: f.required("delta1p")?,
            delta2p: f.required("delta2p")?,
            window_factor: f.or("window_factor", revival_core::wavepacket::DEFAULT_WINDOW_FACTOR)?,
            t_start: f.or("t_start", 0.0)?,
            t_end: f.get("t_end")?,
            samples: f.or("samples", 256)?,
            alpha: f.or("alpha", 0.0)?,
            beta: f.or("beta", 0.0)?,
            mu: f.or("mu", 0.05)?,
            s: f.or("s", 0.1)?,
            grid_points: f.or("grid_points", 256)?,
            remainder,
            max_den: f.or("max_den", 64)?,
            tol: f.or("tol", 1e-9)?,
            q_max: f.or("q_max", 10_000)?,
            cf_terms: f.or("cf_terms", 30)?,
            eta: f.get("eta")?,
            eps: f.or("eps", 0.0)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), LabError> {
        let finite = [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("e1", self.e1),
            ("e2", self.e2),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("delta1p", self.delta1p),
            ("delta2p", self.delta2p),
            ("window_factor", self.window_factor),
            ("t_start", self.t_start),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("mu", self.mu),
            ("s", self.s),
            ("tol", self.tol),
            ("eps", self.eps),
        ];
        for (k, v) in finite {
            if !v.is_finite() {
                return Err(invalid(format!("{k} must be finite")));
            }
        }
        if self.coeffs.is_empty() {
            return Err(invalid("at least one coeff line is required"));
        }
        if self.coeffs.iter().any(|c| !c.2.is_finite()) {
            return Err(invalid("coefficients must be finite"));
        }
        if !(self.omega1 > 0.0 && self.omega2 > 0.0) {
            return Err(invalid("omega1 and omega2 must be positive"));
        }
        for (k, v) in [("e1", self.e1), ("e2", self.e2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!("{k} must lie in [0, 1]")));
            }
        }
        if self.h.is_empty() {
            return Err(invalid("h needs at least one value"));
        }
        if self.h.iter().any(|&h| !(h > 0.0 && h < 1.0)) {
            return Err(invalid("every h must lie in (0, 1)"));
        }
        for (k, v) in [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("delta1p", self.delta1p),
            ("delta2p", self.delta2p),
        ] {
            if !(v > 0.5 && v < 1.0) {
                return Err(invalid(format!("{k} must lie in (1/2, 1)")));
            }
        }
        if self.delta1p <= self.delta1 {
            return Err(invalid(
                "delta1p must exceed delta1 (the packet must be localized inside the window)",
            ));
        }
        if self.delta2p <= self.delta2 {
            return Err(invalid(
                "delta2p must exceed delta2 (the packet must be localized inside the window)",
            ));
        }
        if self.window_factor < 0.0 {
            return Err(invalid("window_factor must be nonnegative"));
        }
        if let Some(t_end) = self.t_end {
            if !(t_end.is_finite() && t_end > self.t_start) {
                return Err(invalid("t_end must be finite and exceed t_start"));
            }
        }
        if self.samples < 2 {
            return Err(invalid("samples must be at least 2"));
        }
        if self.grid_points < 2 {
            return Err(invalid("grid_points must be at least 2"));
        }
        if self.max_den == 0 || self.max_den > i64::MAX as u64 {
            return Err(invalid("max_den must be positive"));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tol must be positive"));
        }
        if self.q_max == 0 {
            return Err(invalid("q_max must be positive"));
        }
        if self.cf_terms == 0 {
            return Err(invalid("cf_terms must be positive"));
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(invalid("eta must be positive"));
            }
        }
        if self.eps < 0.0 {
            return Err(invalid("eps must be nonnegative"));
        }
        Ok(())
    }

    /// Polynomial `F`.
    pub fn polynomial(&self) -> PolynomialF {
        PolynomialF::from_terms(self.coeffs.iter().copied())
    }

    /// Core scenario built from the validated values.
    pub fn scenario(&self) -> Result<Scenario, LabError> {
        Ok(Scenario {
            f: self.polynomial(),
            energy: EnergyPoint::new(self.e1, self.e2)?,
            osc: OscillatorPair::new(self.omega1, self.omega2)?,
            params: PacketParams::new(self.delta1p, self.delta2p, self.delta1, self.delta2)?
                .with_window_factor(self.window_factor)?,
            envelope: Envelope::Gaussian,
        })
    }

    /// Canonical text form, used in run manifests.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (i, j, c) in &self.coeffs {
            let _ = writeln!(out, "coeff = {i} {j} {c:?}");
        }
        let h: Vec<String> = self.h.iter().map(|v| format!("{v:?}")).collect();
        let remainder = match self.remainder {
            RemainderChoice::Linear => "linear",
            RemainderChoice::Quadratic => "quadratic",
            RemainderChoice::Both => "both",
        };
        let _ = writeln!(out, "omega1 = {:?}", self.omega1);
        let _ = writeln!(out, "omega2 = {:?}", self.omega2);
        let _ = writeln!(out, "e1 = {:?}", self.e1);
        let _ = writeln!(out, "e2 = {:?}", self.e2);
        let _ = writeln!(out, "h = {}", h.join(" "));
        let _ = writeln!(out, "delta1 = {:?}", self.delta1);
        let _ = writeln!(out, "delta2 = {:?}", self.delta2);
        let _ = writeln!(out, "delta1p = {:?}", self.delta1p);
        let _ = writeln!(out, "delta2p = {:?}", self.delta2p);
        let _ = writeln!(out, "window_factor = {:?}", self.window_factor);
        let _ = writeln!(out, "t_start = {:?}", self.t_start);
        if let Some(t) = self.t_end {
            let _ = writeln!(out, "t_end = {t:?}");
        }
        let _ = writeln!(out, "samples = {}", self.samples);
        let _ = writeln!(out, "alpha = {:?}", self.alpha);
        let _ = writeln!(out, "beta = {:?}", self.beta);
        let _ = writeln!(out, "mu = {:?}", self.mu);
        let _ = writeln!(out, "s = {:?}", self.s);
        let _ = writeln!(out, "grid_points = {}", self.grid_points);
        let _ = writeln!(out, "remainder = {remainder}");
        let _ = writeln!(out, "max_den = {}", self.max_den);
        let _ = writeln!(out, "tol = {:?}", self.tol);
        let _ = writeln!(out, "q_max = {}", self.q_max);
        let _ = writeln!(out, "cf_terms = {}", self.cf_terms);
        if let Some(eta) = self.eta {
            let _ = writeln!(out, "eta = {eta:?}");
        }
        let _ = writeln!(out, "eps = {:?}", self.eps);
        out
    }
}

fn parse_coeff(line: usize, value: &str) -> Result<(u32, u32, f64), LabError> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(parse_err(line, "coeff needs three fields: i j c"));
    }
    let i = parts[0]
        .parse()
        .map_err(|_| parse_err(line, format!("bad power `{}`", parts[0])))?;
    let j = parts[1]
        .parse()
        .map_err(|_| parse_err(line, format!("bad power `{}`", parts[1])))?;
    let c = parts[2]
        .parse()
        .map_err(|_| parse_err(line, format!("bad coefficient `{}`", parts[2])))?;
    Ok((i, j, c))
}
