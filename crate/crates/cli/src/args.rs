use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cavnet",
    version,
    about = "Fiber-linked cavity network: Ising coupling and atom-atom entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Mean intracavity fields, the recycling denominator, and regime checks.
    Steady,
    /// Effective Ising coupling J from field elimination.
    Coupling,
    /// Entanglement E(τ) on a uniform grid starting from |gg⟩.
    Evolve,
    /// Time τ* to reach near-maximal entanglement, for a list of η.
    Taustar,
    /// Experimental-parameter estimates: χ, J(n̄), fiber loss.
    Feasibility,
    /// Seeded closed-form vs numerical cross-checks; exits 3 on failure.
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// γ = 1, Δ = 1, φ₁₂ = φ₂₁ = π/4, drive 10, χ = 0.1.
    ExampleSym,
    /// γ = 1, Δ = 0.5, φ₁₂ = 0.3, φ₂₁ = 0.9, drive 1, χ = 0.1.
    ExampleAsym,
    /// (g, Ω, Δ_a) = (2.5, 8, −20), γ = 6.25 (all 2π·MHz), n̄ ∈ {50, 100},
    /// 0.35 dB/km over 1 km.
    PaperFeasibility,
}

/// Every flag is optional so that config files and presets can fill gaps.
/// Angles accept `pi` forms such as `pi/4` or `0.5*pi`.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    #[arg(long, global = true, value_parser = parse_real)]
    pub gamma: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub chi: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub drive_re: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub drive_im: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub phi12: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub phi21: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub gamma_f: Option<f64>,

    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub tau_max: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub step: Option<f64>,
    /// E tolerance for τ*, or the replacement tolerance for `validate`.
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub window: Option<f64>,
    /// Comma-separated η list.
    #[arg(long, global = true, conflicts_with = "log_etas", value_parser = parse_list, allow_hyphen_values = true)]
    pub etas: Option<RealList>,
    /// `MIN,MAX,COUNT`: COUNT log-spaced η values from MIN to MAX.
    #[arg(long, global = true, value_parser = parse_log_spec, allow_hyphen_values = true)]
    pub log_etas: Option<LogSpec>,

    /// Comma-separated mean photon numbers.
    #[arg(long, global = true, value_parser = parse_list, allow_hyphen_values = true)]
    pub nbar: Option<RealList>,
    /// Single-photon Rabi frequency g, in 2π·MHz.
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub g_rabi: Option<f64>,
    /// Pump Rabi frequency Ω, in 2π·MHz.
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Atomic detuning Δ_a, in 2π·MHz.
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub delta_a: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub db_per_km: Option<f64>,
    #[arg(long, global = true, value_parser = parse_real, allow_hyphen_values = true)]
    pub length_km: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, value_parser = parse_threads)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

/// Comma-separated reals, kept as one flag value.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl LogSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let (lo, hi) = (self.min.ln(), self.max.ln());
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| match i {
                0 => self.min,
                _ if i + 1 == self.count => self.max,
                _ => (lo + (hi - lo) * i as f64 / last).exp(),
            })
            .collect()
    }
}

/// Finite real number; also `pi`, `k*pi`, `pi/n`, `k*pi/n`, `kpi`, with an
/// optional leading minus.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let value = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| format!("not a number: {t:?}"))?,
        Some(at) => {
            let (head, tail) = (&t[..at], &t[at + 2..]);
            let head = head.trim_end_matches('*');
            let k = match head {
                "" => 1.0,
                "-" => -1.0,
                h => h.parse::<f64>().map_err(|_| format!("bad multiple of pi: {t:?}"))?,
            };
            let n = match tail.strip_prefix('/') {
                None if tail.is_empty() => 1.0,
                None => return Err(format!("bad multiple of pi: {t:?}")),
                Some(d) => d.parse::<f64>().map_err(|_| format!("bad divisor: {t:?}"))?,
            };
            k * std::f64::consts::PI / n
        }
    };
    if !value.is_finite() {
        return Err(format!("value must be finite, got {t:?}"));
    }
    Ok(value)
}

pub fn parse_list(s: &str) -> Result<RealList, String> {
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if items.iter().all(|x| x.is_empty()) {
        return Err("empty list".into());
    }
    items
        .into_iter()
        .map(parse_real)
        .collect::<Result<_, _>>()
        .map(RealList)
}

pub fn parse_log_spec(s: &str) -> Result<LogSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [min, max, count] = parts[..] else {
        return Err(format!("expected MIN,MAX,COUNT, got {s:?}"));
    };
    let min = parse_real(min)?;
    let max = parse_real(max)?;
    let count: usize = count.parse().map_err(|_| format!("bad count: {count:?}"))?;
    if !(min > 0.0 && max > 0.0) {
        return Err("log-spaced bounds must be > 0".into());
    }
    if count == 0 {
        return Err("count must be >= 1".into());
    }
    Ok(LogSpec { min, max, count })
}

fn parse_threads(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("threads must be a positive integer, got {s:?}")),
        Ok(n) => Ok(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reals() {
        assert_eq!(parse_real("1.5"), Ok(1.5));
        assert_eq!(parse_real("-2"), Ok(-2.0));
        assert_eq!(parse_real("pi"), Ok(PI));
        assert_eq!(parse_real("pi/4"), Ok(PI / 4.0));
        assert_eq!(parse_real("-pi/2"), Ok(-PI / 2.0));
        assert_eq!(parse_real("0.5*pi"), Ok(0.5 * PI));
        assert_eq!(parse_real("2pi"), Ok(2.0 * PI));
        assert!(parse_real("nan").is_err());
        assert!(parse_real("inf").is_err());
        assert!(parse_real("pix").is_err());
        assert!(parse_real("").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("0.4, 0.2,0.1"), Ok(RealList(vec![0.4, 0.2, 0.1])));
        assert!(parse_list("").is_err());
        assert!(parse_list("0.1,,0.2").is_err());
    }

    #[test]
    fn log_spaced() {
        let v = parse_log_spec("0.05,0.4,4").unwrap().values();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 0.05);
        assert_eq!(v[3], 0.4);
        assert!((v[1] - 0.1).abs() < 1e-12 && (v[2] - 0.2).abs() < 1e-12);
        assert_eq!(parse_log_spec("0.1,1,1").unwrap().values(), vec![0.1]);
        assert!(parse_log_spec("0,1,3").is_err());
        assert!(parse_log_spec("0.1,1,0").is_err());
        assert!(parse_log_spec("0.1,1").is_err());
    }
}
