//! Layered run configuration: command-line flags over a config file over a
//! preset over built-in defaults.

use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use cavnet::entanglement::{DEFAULT_STEP, DEFAULT_TOLERANCE, DEFAULT_WINDOW};
use cavnet::feasibility::{self, LossConvention, RamanParams};
use cavnet::numerics::c;
use cavnet::{FiberLossSpec, NetworkParams, Units};

#[cfg(test)]
use crate::args::RealList;
use crate::args::{parse_list, parse_log_spec, parse_real, Flags, Format, Preset};
use crate::CliError;

pub const DEFAULT_ETA: f64 = 0.1;
pub const DEFAULT_TAU_MAX: f64 = 1e3;
pub const DEFAULT_ETAS: [f64; 4] = [0.4, 0.2, 0.1, 0.05];
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_NBAR: [f64; 2] = [50.0, 100.0];
pub const DEFAULT_DB_PER_KM: f64 = 0.35;
pub const DEFAULT_LENGTH_KM: f64 = 1.0;

/// 2π·MHz to rad/µs.
const MHZ: f64 = std::f64::consts::TAU;

/// Parses `key = value` lines; `#` starts a comment. Keys are the long flag
/// names with or without the leading dashes, `-` and `_` interchangeable.
pub fn parse_config(text: &str) -> Result<Flags, CliError> {
    let mut f = Flags::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| CliError::Config(format!("line {}: {msg}", lineno + 1));
        let Some((key, value)) = line.split_once('=') else {
            return Err(bad(format!("expected `key = value`, got {line:?}")));
        };
        let key = key.trim().trim_start_matches("--").replace('-', "_");
        let value = value.trim();
        let real = || parse_real(value).map(Some).map_err(bad);
        match key.as_str() {
            "gamma" => f.gamma = real()?,
            "delta" => f.delta = real()?,
            "chi" => f.chi = real()?,
            "drive_re" => f.drive_re = real()?,
            "drive_im" => f.drive_im = real()?,
            "phi12" => f.phi12 = real()?,
            "phi21" => f.phi21 = real()?,
            "gamma_f" => f.gamma_f = real()?,
            "eta" => f.eta = real()?,
            "tau_max" => f.tau_max = real()?,
            "step" => f.step = real()?,
            "tolerance" => f.tolerance = real()?,
            "window" => f.window = real()?,
            "etas" => f.etas = Some(parse_list(value).map_err(bad)?),
            "log_etas" => f.log_etas = Some(parse_log_spec(value).map_err(bad)?),
            "nbar" => f.nbar = Some(parse_list(value).map_err(bad)?),
            "g_rabi" => f.g_rabi = real()?,
            "omega" => f.omega = real()?,
            "delta_a" => f.delta_a = real()?,
            "db_per_km" => f.db_per_km = real()?,
            "length_km" => f.length_km = real()?,
            "preset" => {
                f.preset = Some(
                    clap::ValueEnum::from_str(value, false).map_err(|_| bad(format!("unknown preset {value:?}")))?,
                )
            }
            "out" => f.out = Some(value.into()),
            "format" => {
                f.format = Some(
                    clap::ValueEnum::from_str(value, false).map_err(|_| bad(format!("unknown format {value:?}")))?,
                )
            }
            "threads" => match value.parse::<usize>() {
                Ok(n) if n > 0 => f.threads = Some(n),
                _ => return Err(bad(format!("threads must be a positive integer, got {value:?}"))),
            },
            "seed" => f.seed = Some(value.parse().map_err(|_| bad(format!("bad seed {value:?}")))?),
            _ => return Err(bad(format!("unknown key {key:?}"))),
        }
    }
    Ok(f)
}

pub fn load_config(path: &Path) -> Result<Flags, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Field-by-field `hi.or(lo)`. The η list is one setting: whichever layer
/// gives `etas` or `log_etas` first supplies both.
pub fn merge(hi: Flags, lo: Flags) -> Flags {
    let (etas, log_etas) = if hi.etas.is_some() || hi.log_etas.is_some() {
        (hi.etas, hi.log_etas)
    } else {
        (lo.etas, lo.log_etas)
    };
    Flags {
        gamma: hi.gamma.or(lo.gamma),
        delta: hi.delta.or(lo.delta),
        chi: hi.chi.or(lo.chi),
        drive_re: hi.drive_re.or(lo.drive_re),
        drive_im: hi.drive_im.or(lo.drive_im),
        phi12: hi.phi12.or(lo.phi12),
        phi21: hi.phi21.or(lo.phi21),
        gamma_f: hi.gamma_f.or(lo.gamma_f),
        eta: hi.eta.or(lo.eta),
        tau_max: hi.tau_max.or(lo.tau_max),
        step: hi.step.or(lo.step),
        tolerance: hi.tolerance.or(lo.tolerance),
        window: hi.window.or(lo.window),
        etas,
        log_etas,
        nbar: hi.nbar.or(lo.nbar),
        g_rabi: hi.g_rabi.or(lo.g_rabi),
        omega: hi.omega.or(lo.omega),
        delta_a: hi.delta_a.or(lo.delta_a),
        db_per_km: hi.db_per_km.or(lo.db_per_km),
        length_km: hi.length_km.or(lo.length_km),
        preset: hi.preset.or(lo.preset),
        config: hi.config.or(lo.config),
        out: hi.out.or(lo.out),
        format: hi.format.or(lo.format),
        threads: hi.threads.or(lo.threads),
        seed: hi.seed.or(lo.seed),
    }
}

/// Resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct Settings {
    pub f: Flags,
}

impl Settings {
    pub fn resolve(flags: Flags) -> Result<Self, CliError> {
        let merged = match &flags.config {
            Some(path) => merge(flags.clone(), load_config(path)?),
            None => flags,
        };
        Ok(Settings { f: merged })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.f.format.unwrap_or(default)
    }

    /// Raman setup in rad/µs; inputs are in 2π·MHz.
    pub fn raman(&self) -> RamanParams {
        let base = RamanParams::paper_feasibility();
        RamanParams {
            g: self.f.g_rabi.map_or(base.g, |x| x * MHZ),
            omega: self.f.omega.map_or(base.omega, |x| x * MHZ),
            delta_a: self.f.delta_a.map_or(base.delta_a, |x| x * MHZ),
            gamma: match self.f.preset {
                // with the Raman preset, --gamma is in 2π·MHz too
                Some(Preset::PaperFeasibility) | None => self.f.gamma.map_or(base.gamma, |x| x * MHZ),
                _ => base.gamma,
            },
            nbar: base.nbar,
        }
    }

    pub fn nbars(&self) -> Vec<f64> {
        self.f.nbar.clone().map_or_else(|| DEFAULT_NBAR.to_vec(), |l| l.0)
    }

    pub fn fiber(&self, convention: LossConvention) -> Result<FiberLossSpec, CliError> {
        Ok(FiberLossSpec::new(
            self.f.db_per_km.unwrap_or(DEFAULT_DB_PER_KM),
            self.f.length_km.unwrap_or(DEFAULT_LENGTH_KM),
            convention,
        )?)
    }

    /// Network parameters: preset base (default `example-sym`) with each
    /// explicitly given field replaced.
    ///
    /// `paper-feasibility` starts from the Raman operating point at the
    /// largest n̄, in rad/µs; overrides are then read in rad/µs as well.
    pub fn network(&self) -> Result<NetworkParams, CliError> {
        let base = match self.f.preset {
            None | Some(Preset::ExampleSym) => NetworkParams::example_sym(),
            Some(Preset::ExampleAsym) => NetworkParams::example_asym(),
            Some(Preset::PaperFeasibility) => {
                let mut r = self.raman();
                r.nbar = self.nbars().into_iter().fold(0.0, f64::max);
                // --gamma was consumed by the Raman setup
                let net = feasibility::network_for_photon_number(&r, r.gamma * 1e-3, FRAC_PI_4, FRAC_PI_4)?;
                return self.override_network(net, false);
            }
        };
        self.override_network(base, true)
    }

    fn override_network(&self, base: NetworkParams, with_gamma: bool) -> Result<NetworkParams, CliError> {
        let f = &self.f;
        let gamma = if with_gamma {
            f.gamma.unwrap_or(base.gamma)
        } else {
            base.gamma
        };
        let drive = c(f.drive_re.unwrap_or(base.drive.re), f.drive_im.unwrap_or(base.drive.im));
        let mut p = NetworkParams::new(
            gamma,
            f.delta.unwrap_or(base.delta),
            f.chi.unwrap_or(base.chi),
            drive,
            f.phi12.unwrap_or(base.phi12),
            f.phi21.unwrap_or(base.phi21),
        )?
        .with_units(base.units);
        p.gamma_f = f.gamma_f.unwrap_or(base.gamma_f);
        p.validate()?;
        Ok(p)
    }

    pub fn eta(&self) -> f64 {
        self.f.eta.unwrap_or(DEFAULT_ETA)
    }

    pub fn tau_max(&self) -> f64 {
        self.f.tau_max.unwrap_or(DEFAULT_TAU_MAX)
    }

    pub fn step(&self) -> f64 {
        self.f.step.unwrap_or(DEFAULT_STEP)
    }

    pub fn window(&self) -> f64 {
        self.f.window.unwrap_or(DEFAULT_WINDOW)
    }

    pub fn tolerance(&self) -> f64 {
        self.f.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    /// `--etas`, else `--log-etas`, else a lone `--eta`, else the default list.
    pub fn etas(&self) -> Vec<f64> {
        if let Some(v) = &self.f.etas {
            return v.0.clone();
        }
        if let Some(spec) = &self.f.log_etas {
            return spec.values();
        }
        match self.f.eta {
            Some(eta) => vec![eta],
            None => DEFAULT_ETAS.to_vec(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.f.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn units(&self) -> Units {
        match self.f.preset {
            Some(Preset::PaperFeasibility) => Units::AngularMHz,
            _ => Units::Dimensionless,
        }
    }
}
