use std::fmt::Write as _;

use rayon::prelude::*;

use cavnet::audit::{self, AuditConfig, SuiteReport};
use cavnet::entanglement::{entanglement_at, grid_len, tau_star};
use cavnet::feasibility::{self, chi_from_raman, gamma_f_from_db, j_estimate, lossy_coupling_report, LossConvention};
use cavnet::network::{self, denominator, steady_fields, validate_regime};
use cavnet::spin::AnalyticEvolution;
use cavnet::Error;

use crate::args::Format;
use crate::fmt::num;
use crate::settings::Settings;
use crate::{CliError, Output};

/// Relative θ₁/θ₂ mismatch above which `coupling` warns.
pub const THETA_WARN_REL: f64 = 1e-9;

const TAU: f64 = std::f64::consts::TAU;

enum Value {
    Num(f64),
    Text(String),
}

/// Ordered `quantity → value` pairs rendered as `key = value` lines or a
/// two-column CSV.
#[derive(Default)]
struct Report {
    rows: Vec<(String, Value)>,
}

impl Report {
    fn num(&mut self, key: impl Into<String>, x: f64) {
        self.rows.push((key.into(), Value::Num(x)));
    }

    fn text(&mut self, key: impl Into<String>, s: impl Into<String>) {
        self.rows.push((key.into(), Value::Text(s.into())));
    }

    fn render(&self, format: Format) -> Result<String, CliError> {
        let mut out = String::new();
        if format == Format::Csv {
            out.push_str("quantity,value\n");
        }
        for (key, value) in &self.rows {
            let v = match value {
                Value::Num(x) => finite(*x)?,
                Value::Text(s) => s.clone(),
            };
            match format {
                Format::Csv => writeln!(out, "{key},{v}"),
                Format::Text => writeln!(out, "{key} = {v}"),
            }
            .expect("writing to a String");
        }
        Ok(out)
    }
}

fn finite(x: f64) -> Result<String, CliError> {
    num(x).ok_or(CliError::Core(Error::NonFinite("report value")))
}

fn pool(s: &Settings) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(s.f.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))
}

fn network_header(r: &mut Report, p: &cavnet::NetworkParams) {
    r.text("units", p.units.to_string());
    r.num("gamma", p.gamma);
    r.num("delta", p.delta);
    r.num("chi", p.chi);
    r.num("drive_re", p.drive.re);
    r.num("drive_im", p.drive.im);
    r.num("phi12", p.phi12);
    r.num("phi21", p.phi21);
    r.num("gamma_f", p.gamma_f);
}

pub fn steady(s: &Settings) -> Result<Output, CliError> {
    let p = s.network()?;
    let fields = steady_fields(&p)?;
    let d = denominator(&p);
    let mut r = Report::default();
    network_header(&mut r, &p);
    for (name, z) in [("alpha", fields.alpha), ("beta", fields.beta), ("denominator", d)] {
        r.num(format!("{name}_re"), z.re);
        r.num(format!("{name}_im"), z.im);
        r.num(format!("{name}_abs"), z.norm());
    }
    let warnings = validate_regime(&p, &fields)
        .iter()
        .map(|w| format!("regime: {w}"))
        .collect();
    Ok(Output {
        data: r.render(s.format_or(Format::Text))?,
        warnings,
        failure: None,
    })
}

pub fn coupling(s: &Settings) -> Result<Output, CliError> {
    let p = s.network()?;
    let res = network::coupling(&p)?;
    let fields = steady_fields(&p)?;
    let mut r = Report::default();
    network_header(&mut r, &p);
    r.num("j_oracle", res.j_oracle);
    r.num("j_closed", res.j_closed);
    r.num("j_paper", res.j_paper);
    r.num("theta1", res.theta1);
    r.num("theta2", res.theta2);
    r.num("local1", res.local1);
    r.num("local2", res.local2);
    let mut warnings: Vec<String> = validate_regime(&p, &fields)
        .iter()
        .map(|w| format!("regime: {w}"))
        .collect();
    if res.thetas_disagree(THETA_WARN_REL) {
        warnings.push(format!(
            "theta1 != theta2 (theta1 = {}, theta2 = {}); the single-theta j_paper differs from j_oracle",
            finite(res.theta1)?,
            finite(res.theta2)?
        ));
    }
    Ok(Output {
        data: r.render(s.format_or(Format::Text))?,
        warnings,
        failure: None,
    })
}

fn check_eta(eta: f64) -> Result<(), CliError> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::DegenerateEta(eta).into());
    }
    Ok(())
}

pub fn evolve(s: &Settings) -> Result<Output, CliError> {
    let (eta, tau_max, step) = (s.eta(), s.tau_max(), s.step());
    check_eta(eta)?;
    let len = grid_len(tau_max, step)?;
    let evo = AnalyticEvolution::new(eta)?;
    let pool = pool(s)?;
    let rows: Vec<(f64, f64)> = pool.install(|| {
        (0..len)
            .into_par_iter()
            .map(|i| {
                let tau = i as f64 * step;
                (tau, entanglement_at(&evo, tau))
            })
            .collect()
    });

    let data = match s.format_or(Format::Csv) {
        Format::Csv => {
            let lines: Vec<String> = pool.install(|| {
                rows.par_iter()
                    .map(|&(t, e)| Ok(format!("{},{}\n", finite(t)?, finite(e)?)))
                    .collect::<Result<_, CliError>>()
            })?;
            let mut out = String::with_capacity(lines.iter().map(String::len).sum::<usize>() + 20);
            out.push_str("tau,entanglement\n");
            lines.iter().for_each(|l| out.push_str(l));
            out
        }
        Format::Text => {
            let (t_max, e_max) = rows.iter().fold(
                (f64::NAN, f64::NEG_INFINITY),
                |acc, &(t, e)| if e > acc.1 { (t, e) } else { acc },
            );
            let e_min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
            let mut r = Report::default();
            r.num("eta", eta);
            r.num("tau_max", tau_max);
            r.num("step", step);
            r.text("points", len.to_string());
            r.num("e_initial", rows[0].1);
            r.num("e_min", e_min);
            r.num("e_max", e_max);
            r.num("tau_at_e_max", t_max);
            r.num("e_final", rows[len - 1].1);
            r.render(Format::Text)?
        }
    };
    Ok(Output {
        data,
        warnings: Vec::new(),
        failure: None,
    })
}

pub fn taustar(s: &Settings) -> Result<Output, CliError> {
    let etas = s.etas();
    if etas.is_empty() {
        return Err(CliError::Usage("empty eta list".into()));
    }
    for &eta in &etas {
        check_eta(eta)?;
    }
    let (window, step, tol) = (s.window(), s.step(), s.tolerance());
    let results = pool(s)?.install(|| {
        etas.par_iter()
            .map(|&eta| tau_star(eta, window, step, tol))
            .collect::<Result<Vec<_>, Error>>()
    })?;

    let format = s.format_or(Format::Csv);
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("eta,tau_star,e_max\n");
    }
    for t in &results {
        let (eta, ts, em) = (finite(t.eta)?, finite(t.tau_star)?, finite(t.e_max)?);
        match format {
            Format::Csv => writeln!(out, "{eta},{ts},{em}"),
            Format::Text => writeln!(out, "eta = {eta}  tau_star = {ts}  e_max = {em}"),
        }
        .expect("writing to a String");
    }
    Ok(Output {
        data: out,
        warnings: Vec::new(),
        failure: None,
    })
}

pub fn feasibility(s: &Settings) -> Result<Output, CliError> {
    let raman = s.raman();
    let rc = chi_from_raman(&raman)?;
    let mut r = Report::default();
    r.text("units", "inputs in 2pi*MHz; rates in rad/us; *_mhz = rate/2pi");
    r.num("g_rabi_mhz", raman.g / TAU);
    r.num("omega_mhz", raman.omega / TAU);
    r.num("delta_a_mhz", raman.delta_a / TAU);
    r.num("gamma_mhz", raman.gamma / TAU);
    r.num("chi", rc.chi);
    r.num("chi_mhz", rc.chi / TAU);
    r.num("chi_sign", rc.sign);

    let power = s.fiber(LossConvention::PowerExponent)?;
    let amplitude = s.fiber(LossConvention::AmplitudeExponent)?;
    let gf_power = gamma_f_from_db(&power);
    let gf_amplitude = gamma_f_from_db(&amplitude);
    let ratios = lossy_coupling_report(1.0, gf_power)?;

    for nbar in s.nbars() {
        if !(nbar >= 0.0) {
            return Err(Error::InvalidParams(format!("nbar must be >= 0, got {nbar}")).into());
        }
        // Display gives the shortest exact form for use in keys
        let key = nbar.to_string();
        let j = j_estimate(rc.chi, nbar, raman.gamma)?;
        r.num(format!("j_estimate[nbar={key}]"), j);
        r.num(format!("j_estimate_mhz[nbar={key}]"), j / TAU);
        let net = feasibility::network_for_photon_number(
            &cavnet::RamanParams { nbar, ..raman },
            raman.gamma * 1e-3,
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::FRAC_PI_4,
        )?;
        let model = network::coupling(&net)?;
        r.num(format!("j_network_oracle[nbar={key}]"), model.j_oracle);
        r.num(format!("j_network_paper[nbar={key}]"), model.j_paper);
        let lossy = lossy_coupling_report(j, gf_power)?;
        r.num(format!("j_lossy_single[nbar={key}]"), lossy.single);
        r.num(format!("j_lossy_squared[nbar={key}]"), lossy.squared);
    }

    r.num("db_per_km", power.db_per_km);
    r.num("length_km", power.length_km);
    r.num("gamma_f_power", gf_power);
    r.num("gamma_f_amplitude", gf_amplitude);
    r.num("lossy_ratio_single", ratios.single);
    r.num("lossy_ratio_squared", ratios.squared);
    Ok(Output {
        data: r.render(s.format_or(Format::Text))?,
        warnings: Vec::new(),
        failure: None,
    })
}

pub fn validate(s: &Settings) -> Result<Output, CliError> {
    if let Some(t) = s.f.tolerance {
        if !(t >= 0.0) {
            return Err(CliError::Usage(format!("tolerance must be >= 0, got {t}")));
        }
    }
    let cfg = AuditConfig {
        seed: s.seed(),
        tolerance_override: s.f.tolerance,
        ..AuditConfig::default()
    };
    let suites: [fn(&AuditConfig) -> SuiteReport; 4] = [
        audit::oracle_identity,
        audit::spectral_agreement,
        audit::evolution_fidelity,
        audit::entanglement_consistency,
    ];
    let reports: Vec<SuiteReport> = pool(s)?.install(|| suites.par_iter().map(|f| f(&cfg)).collect());

    let format = s.format_or(Format::Text);
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("suite,status,samples,worst,tolerance\n");
    }
    for rep in &reports {
        let status = if rep.passed() { "PASS" } else { "FAIL" };
        let worst = finite(rep.worst)?;
        let tol = finite(rep.tolerance)?;
        match format {
            Format::Csv => writeln!(out, "{},{status},{},{worst},{tol}", rep.name, rep.samples),
            Format::Text => writeln!(
                out,
                "{status} {} samples={} worst={worst} tolerance={tol}",
                rep.name, rep.samples
            ),
        }
        .expect("writing to a String");
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    // the per-suite table is emitted either way
    let failure = (!failed.is_empty()).then(|| {
        CliError::Validation(format!(
            "{} of {} suites failed: {}",
            failed.len(),
            reports.len(),
            failed.join(", ")
        ))
    });
    Ok(Output {
        data: out,
        warnings: Vec::new(),
        failure,
    })
}
