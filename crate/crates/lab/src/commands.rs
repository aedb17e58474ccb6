//! Subcommands. Each one writes its files into the output directory,
//! finishes with `manifest.txt` and returns a text report for stdout.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use revival_core::diophantine::{
    approach_time, cf_expand_truncated, count_revival_set, flow_lattice_distance, k_eps, rationalize, t_eta, CfInput,
    FlowParams,
};
use revival_core::dynamics::{
    envelope_formula, fit_samples, linear_approx, quadratic_approx, sup_remainder, theoretical_exponent, Amplitude,
    PacketSpectrum, PeriodKind, RemainderKind, TimeGrid,
};
use revival_core::hamiltonian::PeriodSet;
use revival_core::revival::{
    detect_resonance, factorized_moduli_check, fractional_coefficients, parseval_sum, reconstruct_at_revival,
    theta_sequence,
};
use revival_core::wavepacket::Envelope;

use crate::config::{RemainderChoice, ScenarioConfig};
use crate::output::{num, Csv, OutputDir};
use crate::LabError;

/// Subcommand selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Periods,
    Convergence,
    Cf,
    Revival,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Periods => "periods",
            Command::Convergence => "convergence",
            Command::Cf => "cf",
            Command::Revival => "revival",
        }
    }
}

/// What a successful run produced.
#[derive(Clone, Debug)]
pub struct RunSummary {
    /// Files written, relative to the output directory, manifest last.
    pub files: Vec<String>,
    /// Human-readable report.
    pub report: String,
}

/// Runs one subcommand and writes its outputs under `out`.
pub fn run(cmd: Command, cfg: &ScenarioConfig, out: &Path) -> Result<RunSummary, LabError> {
    let mut dir = OutputDir::create(out)?;
    let report = match cmd {
        Command::Simulate => simulate(cfg, &mut dir)?,
        Command::Periods => periods(cfg, &mut dir)?,
        Command::Convergence => convergence(cfg, &mut dir)?,
        Command::Cf => cf(cfg, &mut dir)?,
        Command::Revival => revival(cfg, &mut dir)?,
    };
    let files = dir.finish(cmd.name(), &cfg.echo())?;
    Ok(RunSummary { files, report })
}

fn series_row(t: f64, a: Amplitude) -> Vec<String> {
    vec![num(t), num(a.re), num(a.im), num(a.magnitude())]
}

struct Sample {
    t: f64,
    r: Amplitude,
    a1: Option<Amplitude>,
    a2: Option<Amplitude>,
    envelope: Option<f64>,
}

fn simulate(cfg: &ScenarioConfig, dir: &mut OutputDir) -> Result<String, LabError> {
    let sc = cfg.scenario()?;
    let h = cfg.h[0];
    let (p, periods) = sc.at(h)?;
    let t_end = match cfg.t_end {
        Some(t) => t,
        None => cfg.t_start + 2.0 * periods.max_cl()?,
    };
    let grid = TimeGrid::new(cfg.t_start, t_end, cfg.samples)?;
    let spectrum = PacketSpectrum::new(&p, &sc.f);
    let samples: Vec<Sample> = grid
        .values()
        .par_iter()
        .map(|&t| Sample {
            t,
            r: spectrum.return_amplitude(t),
            a1: linear_approx(&p, &periods, t, PeriodKind::Classical).ok(),
            a2: quadratic_approx(&p, &periods, t).ok(),
            envelope: envelope_formula(&p, &periods, &Envelope::Gaussian, t).ok(),
        })
        .collect();

    let mut summary = Csv::new(&["t", "r_mag", "a1_mag", "a2_mag", "envelope"]);
    let mut r = Csv::new(&["t", "re", "im", "magnitude"]);
    let mut a1 = Csv::new(&["t", "re", "im", "magnitude"]);
    let mut a2 = Csv::new(&["t", "re", "im", "magnitude"]);
    let mag = |a: Option<Amplitude>| num(a.map_or(f64::NAN, |a| a.magnitude()));
    for s in &samples {
        summary.push(vec![
            num(s.t),
            num(s.r.magnitude()),
            mag(s.a1),
            mag(s.a2),
            num(s.envelope.unwrap_or(f64::NAN)),
        ]);
        r.push(series_row(s.t, s.r));
        if let Some(a) = s.a1 {
            a1.push(series_row(s.t, a));
        }
        if let Some(a) = s.a2 {
            a2.push(series_row(s.t, a));
        }
    }
    dir.write_csv("simulate.csv", &summary)?;
    dir.write_csv("r.csv", &r)?;
    if !a1.is_empty() {
        dir.write_csv("a1.csv", &a1)?;
    }
    if !a2.is_empty() {
        dir.write_csv("a2.csv", &a2)?;
    }

    let mut rep = String::new();
    let _ = writeln!(
        rep,
        "h = {h}, (n0, m0) = ({}, {}), window {}x{}",
        p.n0(),
        p.m0(),
        p.window().rows(),
        p.window().cols()
    );
    let _ = writeln!(rep, "{} samples on [{}, {}]", samples.len(), cfg.t_start, t_end);
    if a1.is_empty() {
        let _ = writeln!(rep, "a1 undefined: a classical period is undefined");
    }
    if a2.is_empty() {
        let _ = writeln!(rep, "a2 undefined: a revival period is undefined");
    }
    Ok(rep)
}

fn fmt_period(name: &str, v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{name:<9} = {}\n", num(x)),
        None => format!("{name:<9} = undefined\n"),
    }
}

fn period_lines(ps: &PeriodSet) -> String {
    [
        ("T_cl1", ps.t_cl1),
        ("T_cl2", ps.t_cl2),
        ("T_scl1", ps.t_scl1),
        ("T_scl2", ps.t_scl2),
        ("T_rev1", ps.t_rev1),
        ("T_rev2", ps.t_rev2),
        ("T_rev12", ps.t_rev12),
        ("T_srev1", ps.t_srev1),
        ("T_srev2", ps.t_srev2),
        ("T_srev12", ps.t_srev12),
    ]
    .iter()
    .map(|(n, v)| fmt_period(n, *v))
    .collect()
}

fn periods(cfg: &ScenarioConfig, dir: &mut OutputDir) -> Result<String, LabError> {
    let sc = cfg.scenario()?;
    let h = cfg.h[0];
    let ps = revival_core::hamiltonian::period_set(&sc.f, &sc.energy, h, &sc.osc)?;
    let mut rep = String::new();
    let _ = writeln!(rep, "h = {h}, (n0, m0) = ({}, {})", ps.n0, ps.m0);
    rep.push_str(&period_lines(&ps));
    rep.push('\n');
    match (ps.t_cl1, ps.t_cl2) {
        (Some(a), Some(b)) => match rationalize(a / b, cfg.max_den, cfg.tol) {
            Some((p, q)) => {
                let _ = writeln!(rep, "classical: commensurate, T_cl1/T_cl2 = {p}/{q}");
            }
            None => {
                let _ = writeln!(
                    rep,
                    "classical: incommensurate, T_cl1/T_cl2 = {} has no convergent with denominator <= {}",
                    num(a / b),
                    cfg.max_den
                );
            }
        },
        _ => rep.push_str("classical: undefined (a first derivative of F vanishes)\n"),
    }
    if ps.t_rev1.is_none() || ps.t_rev2.is_none() || ps.t_rev12.is_none() {
        rep.push_str("revival: undefined (a second derivative of F vanishes, no quadratic regime)\n");
    } else {
        match detect_resonance(&ps, cfg.max_den, cfg.tol) {
            Ok(res) => {
                let _ = writeln!(
                    rep,
                    "revival: resonant, fractions {} {} {}, T_frac = {}",
                    res.frac1,
                    res.frac2,
                    res.frac12,
                    num(res.t_frac)
                );
            }
            Err(revival_core::Error::NoResonance) => {
                let _ = writeln!(rep, "revival: not resonant with denominators <= {}", cfg.max_den);
            }
            Err(e) => return Err(e.into()),
        }
    }
    dir.write("periods.txt", &rep)?;
    Ok(rep)
}

fn convergence(cfg: &ScenarioConfig, dir: &mut OutputDir) -> Result<String, LabError> {
    if cfg.h.len() < 3 {
        return Err(LabError::Validation(format!(
            "convergence needs at least 3 h values, got {}",
            cfg.h.len()
        )));
    }
    let sc = cfg.scenario()?;
    let kinds: &[RemainderKind] = match cfg.remainder {
        RemainderChoice::Linear => &[RemainderKind::Linear],
        RemainderChoice::Quadratic => &[RemainderKind::Quadratic],
        RemainderChoice::Both => &[RemainderKind::Linear, RemainderKind::Quadratic],
    };
    let min_delta = cfg.delta1.min(cfg.delta2);
    let mut errors = Csv::new(&["kind", "h", "sup_error"]);
    let mut fits = Csv::new(&["kind", "exponent", "theoretical", "slope", "slope_ok"]);
    let mut rep = String::new();
    for &kind in kinds {
        let (name, exponent) = match kind {
            RemainderKind::Linear => ("linear", cfg.alpha),
            RemainderKind::Quadratic => ("quadratic", cfg.beta),
        };
        let theoretical = theoretical_exponent(kind, min_delta, exponent);
        if !(theoretical > 0.0) {
            return Err(LabError::Validation(format!(
                "{name} remainder: predicted exponent {theoretical} is not positive; raise {}",
                if kind == RemainderKind::Linear { "alpha" } else { "beta" }
            )));
        }
        let samples = cfg
            .h
            .par_iter()
            .map(|&h| sup_remainder(kind, &sc, h, exponent, cfg.grid_points).map(|e| (h, e)))
            .collect::<Result<Vec<_>, _>>()?;
        let fit = fit_samples(kind, samples, theoretical)?;
        for &(h, e) in &fit.samples {
            errors.push(vec![name.to_string(), num(h), num(e)]);
        }
        let ok = fit.is_exact() || fit.slope.is_some_and(|s| s >= theoretical - 0.2);
        let slope = fit.slope.map_or_else(|| "exact".to_string(), num);
        fits.push(vec![
            name.to_string(),
            num(exponent),
            num(theoretical),
            slope.clone(),
            ok.to_string(),
        ]);
        let _ = writeln!(
            rep,
            "{name:<9} slope {slope} vs predicted {} ({})",
            num(theoretical),
            if ok { "ok" } else { "too slow" }
        );
    }
    dir.write_csv("convergence.csv", &errors)?;
    dir.write_csv("convergence_fit.csv", &fits)?;
    Ok(rep)
}

/// `min q |qθ - p|` over `1 ≤ q ≤ q_max`, for a floating `θ`.
fn float_diophantine_constant(theta: f64, q_max: u64) -> f64 {
    (1..=q_max)
        .map(|q| {
            let x = q as f64 * theta;
            q as f64 * (x - x.round()).abs()
        })
        .fold(f64::INFINITY, f64::min)
}

fn cf(cfg: &ScenarioConfig, dir: &mut OutputDir) -> Result<String, LabError> {
    let sc = cfg.scenario()?;
    let h = cfg.h[0];
    let ps = revival_core::hamiltonian::period_set(&sc.f, &sc.energy, h, &sc.osc)?;
    let fp = FlowParams::from_periods(&ps)?;
    let theta = fp.theta();
    let conv = cf_expand_truncated(&CfInput::Float(theta), cfg.cf_terms)?;
    let set = count_revival_set(
        &conv,
        h,
        cfg.delta1.min(cfg.delta2),
        cfg.delta1p.min(cfg.delta2p),
        cfg.mu,
    );
    let mut table = Csv::new(&["k", "a", "p", "q", "approach_time", "distance", "in_revival_set"]);
    let mut rep = String::new();
    let _ = writeln!(rep, "theta = T_cl1/T_cl2 = {}", num(theta));
    let _ = writeln!(
        rep,
        "{:>3} {:>8} {:>22} {:>22} {:>24} {:>24}  A_h",
        "k", "a_k", "p_k", "q_k", "tau_k", "distance"
    );
    for k in 0..conv.len() {
        let (p, q) = (conv.p_f64(k), conv.q_f64(k));
        let tau = approach_time(&fp, q, p);
        let d = flow_lattice_distance(&fp, tau);
        let member = set.indices.contains(&k);
        table.push(vec![
            k.to_string(),
            conv.partial_quotients()[k].to_string(),
            conv.p(k).to_string(),
            conv.q(k).to_string(),
            num(tau),
            num(d),
            member.to_string(),
        ]);
        let _ = writeln!(
            rep,
            "{k:>3} {:>8} {:>22} {:>22} {:>24} {:>24}  {}",
            conv.partial_quotients()[k],
            conv.p(k).to_string(),
            conv.q(k).to_string(),
            num(tau),
            num(d),
            if member { "yes" } else { "" }
        );
    }
    if conv.precision_exhausted() {
        let _ = writeln!(
            rep,
            "expansion stopped after {} terms: floating precision exhausted (theta may be rational)",
            conv.len()
        );
    }
    let _ = writeln!(
        rep,
        "A_h interval [{}, {}]: members {:?}, count {} (bound {}){}",
        num(set.lower),
        num(set.upper),
        set.members,
        set.count,
        set.upper_bound,
        if set.complete {
            ""
        } else {
            ", expansion too short to be complete"
        }
    );
    let c0 = float_diophantine_constant(theta, cfg.q_max);
    let k = k_eps(&fp, c0.min(0.5));
    let _ = writeln!(
        rep,
        "diophantine constant estimate (q <= {}) = {}, K = {}",
        cfg.q_max,
        num(c0),
        num(k)
    );
    if let Some(eta) = cfg.eta {
        if k > 0.0 {
            match t_eta(&fp, k, cfg.eps, eta) {
                Ok(t) => {
                    let _ = writeln!(rep, "t_eta(eta = {eta}) = {}", num(t));
                }
                Err(e) => {
                    let _ = writeln!(rep, "t_eta(eta = {eta}) unavailable: {e}");
                }
            }
        }
    }
    dir.write_csv("cf.csv", &table)?;
    dir.write("cf.txt", &rep)?;
    Ok(rep)
}

fn revival(cfg: &ScenarioConfig, dir: &mut OutputDir) -> Result<String, LabError> {
    let sc = cfg.scenario()?;
    let h = cfg.h[0];
    let (p, ps) = sc.at(h)?;
    let res = detect_resonance(&ps, cfg.max_den, cfg.tol)?;
    let theta = theta_sequence(&res, p.n0(), p.m0());
    let table = fractional_coefficients(&theta, res.ell1, res.ell2, p.n0(), p.m0())?;
    let rec = reconstruct_at_revival(&p, &ps, &res, &table, 0.0)?;
    let direct = quadratic_approx(&p, &ps, res.t_frac)?;
    let residual = rec.distance(&direct);

    let mut coeffs = Csv::new(&["k1", "k2", "re", "im", "mod2"]);
    for k1 in 0..res.ell1 as usize {
        for k2 in 0..res.ell2 as usize {
            let c = table.c.get(k1, k2);
            coeffs.push(vec![
                k1.to_string(),
                k2.to_string(),
                num(c.re),
                num(c.im),
                num(c.norm_sqr()),
            ]);
        }
    }

    let mut rep = String::new();
    let _ = writeln!(rep, "h = {h}, (n0, m0) = ({}, {})", p.n0(), p.m0());
    let _ = writeln!(
        rep,
        "fractions p1/q1 = {}, p2/q2 = {}, p12/q12 = {}",
        res.frac1, res.frac2, res.frac12
    );
    let _ = writeln!(rep, "T_frac = {} = {} pi", num(res.t_frac), num(res.t_frac / PI));
    let _ = writeln!(
        rep,
        "(r1, s1, r2, s2) = ({}, {}, {}, {})",
        res.r1, res.s1, res.r2, res.s2
    );
    let (o1, o2) = res.obvious_ell();
    let _ = writeln!(
        rep,
        "(l1, l2) = ({}, {}), obvious solution ({o1}, {o2})",
        res.ell1, res.ell2
    );
    let _ = writeln!(rep, "sum |b|^2 = {}", num(parseval_sum(&table)));
    match factorized_moduli_check(&res, &table) {
        Ok(ok) => {
            let _ = writeln!(rep, "Gauss-sum factorization: {}", if ok { "holds" } else { "FAILS" });
        }
        Err(revival_core::Error::HypothesisNotMet(why)) => {
            let _ = writeln!(rep, "Gauss-sum factorization: skipped ({why})");
        }
        Err(e) => return Err(e.into()),
    }
    rep.push_str("|c_{k1,k2}|:\n");
    for k1 in 0..res.ell1 as usize {
        let row: Vec<String> = (0..res.ell2 as usize)
            .map(|k2| format!("{:.6}", table.c.get(k1, k2).norm_sqr().sqrt()))
            .collect();
        let _ = writeln!(rep, "  {}", row.join(" "));
    }
    let _ = writeln!(rep, "reconstruction residual at T_frac = {}", num(residual));
    dir.write_csv("coefficients.csv", &coeffs)?;
    dir.write("revival.txt", &rep)?;
    Ok(rep)
}
