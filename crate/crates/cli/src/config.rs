//! Command-line flags, the key=value config file, and their resolution into
//! a validated [`SweepConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qsl_dephasing::{ThermalEnvironment, Tolerance};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qsl-dephasing",
    version,
    about = "Qubit dephasing and quantum speed limit sweeps, written as CSV"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Dephasing,
    Steady,
    Nonmarkov,
    Qsl,
    Geospeed,
    Critical,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// D(t), gamma(t) and F(t) on the time grid.
    Dephasing(SweepArgs),
    /// Long-time dephasing factor F(inf) over s.
    Steady(SweepArgs),
    /// Information-backflow non-Markovianity over s.
    Nonmarkov(SweepArgs),
    /// QSL ratio over tau, or over an (s, T) grid at fixed tau with --tau / --interplay.
    Qsl(SweepArgs),
    /// Scaled geodesic distance and instantaneous speed on the time grid.
    Geospeed(SweepArgs),
    /// Critical Ohmicity per temperature.
    Critical(SweepArgs),
}

impl Command {
    pub fn split(self) -> (Kind, SweepArgs) {
        match self {
            Command::Dephasing(a) => (Kind::Dephasing, a),
            Command::Steady(a) => (Kind::Steady, a),
            Command::Nonmarkov(a) => (Kind::Nonmarkov, a),
            Command::Qsl(a) => (Kind::Qsl, a),
            Command::Geospeed(a) => (Kind::Geospeed, a),
            Command::Critical(a) => (Kind::Critical, a),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    /// Single Ohmicity value.
    #[arg(long)]
    pub s: Option<f64>,
    /// Comma-separated Ohmicity values.
    #[arg(long, value_delimiter = ',')]
    pub s_list: Option<Vec<f64>>,
    #[arg(long)]
    pub s_min: Option<f64>,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub s_points: Option<usize>,

    /// Temperature spec: zero, t:<T> or hight:<omega_T>.
    #[arg(long)]
    pub temp: Option<String>,
    /// Comma-separated temperature specs.
    #[arg(long, value_delimiter = ',')]
    pub temp_list: Option<Vec<String>>,
    /// Numeric temperature grid (0 means the vacuum); used by the interplay sweep.
    #[arg(long)]
    pub temp_min: Option<f64>,
    #[arg(long)]
    pub temp_max: Option<f64>,
    #[arg(long)]
    pub temp_points: Option<usize>,

    /// Qubit transition frequency, in units of omega_c.
    #[arg(long)]
    pub omega0: Option<f64>,

    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_points: Option<usize>,

    #[arg(long)]
    pub tau_min: Option<f64>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub tau_points: Option<usize>,
    /// Fixed evolution time; selects the (s, T) interplay sweep of `qsl`.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Interplay sweep at the default tau.
    #[arg(long)]
    pub interplay: bool,

    /// Observation window for the non-Markovianity.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Ohmicity bracket for the critical-Ohmicity bisection.
    #[arg(long)]
    pub s_lo: Option<f64>,
    #[arg(long)]
    pub s_hi: Option<f64>,

    #[arg(long)]
    pub tol_abs: Option<f64>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long)]
    pub max_evals: Option<usize>,

    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file with the same keys as the long flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads; falls back to QSL_DEPHASING_THREADS.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Inclusive, evenly spaced grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(name: &str, min: f64, max: f64, points: usize) -> Result<Self, CliError> {
        if !min.is_finite() || !max.is_finite() {
            return Err(CliError::Config(format!(
                "{name} grid bounds must be finite"
            )));
        }
        if points < 2 || !(max > min) {
            return Err(CliError::Config(format!(
                "{name} grid must be strictly increasing with at least 2 points (got {min}..{max}, {points} points)"
            )));
        }
        Ok(Self { min, max, points })
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub s_values: Vec<f64>,
    pub temperatures: Vec<ThermalEnvironment>,
    pub omega_0: f64,
    pub t_grid: Grid,
    pub tau_grid: Grid,
    /// Set for the interplay sweep.
    pub fixed_tau: Option<f64>,
    pub horizon: f64,
    pub s_bracket: (f64, f64),
    pub tol: Tolerance,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

pub const DEFAULT_TEMPERATURES: [&str; 4] = ["zero", "t:0.5", "t:1", "t:1.5"];
pub const DEFAULT_CRITICAL_TEMPERATURES: [&str; 5] = ["zero", "t:0.5", "t:1", "t:1.5", "hight:1"];
pub const DEFAULT_INTERPLAY_TAU: f64 = 10.0;
pub const THREADS_ENV: &str = "QSL_DEPHASING_THREADS";

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value.split(',').map(|v| parse(key, v)).collect()
}

fn fill<T>(slot: &mut Option<T>, value: Result<T, CliError>) -> Result<(), CliError> {
    let value = value?;
    if slot.is_none() {
        *slot = Some(value);
    }
    Ok(())
}

impl SweepArgs {
    /// Fills every flag the command line left unset from a key=value file.
    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        // A family of flags given on the command line shadows the whole
        // family in the file, so `--s 2` beats `s-list = ...`.
        let s_family = self.s.is_some()
            || self.s_list.is_some()
            || self.s_min.is_some()
            || self.s_max.is_some()
            || self.s_points.is_some();
        let temp_family = self.temp.is_some()
            || self.temp_list.is_some()
            || self.temp_min.is_some()
            || self.temp_max.is_some()
            || self.temp_points.is_some();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{}:{}: expected key=value", path.display(), n + 1))
            })?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            let value = value.trim();
            let s_key =
                key == "s" || (key.starts_with("s-") && !matches!(key.as_str(), "s-lo" | "s-hi"));
            if s_family && s_key {
                continue;
            }
            if temp_family && (key == "temp" || key.starts_with("temp-")) {
                continue;
            }
            match key.as_str() {
                "s" => fill(&mut self.s, parse(&key, value))?,
                "s-list" => fill(&mut self.s_list, parse_list(&key, value))?,
                "s-min" => fill(&mut self.s_min, parse(&key, value))?,
                "s-max" => fill(&mut self.s_max, parse(&key, value))?,
                "s-points" => fill(&mut self.s_points, parse(&key, value))?,
                "temp" => fill(&mut self.temp, Ok(value.to_string()))?,
                "temp-list" => fill(&mut self.temp_list, parse_list(&key, value))?,
                "temp-min" => fill(&mut self.temp_min, parse(&key, value))?,
                "temp-max" => fill(&mut self.temp_max, parse(&key, value))?,
                "temp-points" => fill(&mut self.temp_points, parse(&key, value))?,
                "omega0" => fill(&mut self.omega0, parse(&key, value))?,
                "t-min" => fill(&mut self.t_min, parse(&key, value))?,
                "t-max" => fill(&mut self.t_max, parse(&key, value))?,
                "t-points" => fill(&mut self.t_points, parse(&key, value))?,
                "tau-min" => fill(&mut self.tau_min, parse(&key, value))?,
                "tau-max" => fill(&mut self.tau_max, parse(&key, value))?,
                "tau-points" => fill(&mut self.tau_points, parse(&key, value))?,
                "tau" => fill(&mut self.tau, parse(&key, value))?,
                "interplay" => self.interplay |= parse::<bool>(&key, value)?,
                "horizon" => fill(&mut self.horizon, parse(&key, value))?,
                "s-lo" => fill(&mut self.s_lo, parse(&key, value))?,
                "s-hi" => fill(&mut self.s_hi, parse(&key, value))?,
                "tol-abs" => fill(&mut self.tol_abs, parse(&key, value))?,
                "tol-rel" => fill(&mut self.tol_rel, parse(&key, value))?,
                "max-evals" => fill(&mut self.max_evals, parse(&key, value))?,
                "out" => fill(&mut self.out, Ok(PathBuf::from(value)))?,
                "threads" => fill(&mut self.threads, parse(&key, value))?,
                "config" => {
                    return Err(CliError::Config(
                        "config files cannot include other config files".into(),
                    ))
                }
                other => return Err(CliError::Config(format!("unknown config key {other:?}"))),
            }
        }
        Ok(())
    }

    fn s_values(
        &self,
        default: &[f64],
        default_grid: Option<(f64, f64, usize)>,
    ) -> Result<Vec<f64>, CliError> {
        let ranged = self.s_min.is_some() || self.s_max.is_some() || self.s_points.is_some();
        let given = [self.s.is_some(), self.s_list.is_some(), ranged]
            .iter()
            .filter(|&&b| b)
            .count();
        if given > 1 {
            return Err(CliError::Config(
                "use only one of --s, --s-list or --s-min/--s-max/--s-points".into(),
            ));
        }
        let values = if let Some(s) = self.s {
            vec![s]
        } else if let Some(list) = &self.s_list {
            list.clone()
        } else if ranged || default_grid.is_some() {
            let (lo, hi, n) = default_grid.unwrap_or((0.1, 8.0, 80));
            Grid::new(
                "s",
                self.s_min.unwrap_or(lo),
                self.s_max.unwrap_or(hi),
                self.s_points.unwrap_or(n),
            )?
            .values()
        } else {
            default.to_vec()
        };
        if values.is_empty() {
            return Err(CliError::Config("the s list is empty".into()));
        }
        if let Some(bad) = values.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
            return Err(CliError::Config(format!(
                "Ohmicity must be positive and finite, got {bad}"
            )));
        }
        Ok(values)
    }

    fn temperature_specs(&self, default: &[&str]) -> Result<Vec<ThermalEnvironment>, CliError> {
        if self.temp.is_some() && self.temp_list.is_some() {
            return Err(CliError::Config(
                "use only one of --temp or --temp-list".into(),
            ));
        }
        let specs: Vec<String> = match (&self.temp, &self.temp_list) {
            (Some(t), _) => vec![t.clone()],
            (_, Some(list)) => list.clone(),
            _ => default.iter().map(|s| s.to_string()).collect(),
        };
        if specs.is_empty() {
            return Err(CliError::Config("the temperature list is empty".into()));
        }
        specs
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|e| CliError::Config(format!("temperature {s:?}: {e}")))
            })
            .collect()
    }

    /// Numeric temperatures for the interplay grid; `0` is the vacuum.
    fn interplay_temperatures(&self) -> Result<Vec<ThermalEnvironment>, CliError> {
        let ranged =
            self.temp_min.is_some() || self.temp_max.is_some() || self.temp_points.is_some();
        if !ranged && (self.temp.is_some() || self.temp_list.is_some()) {
            // Bare numbers are accepted here alongside the usual specs.
            let numeric = Self {
                temp: self.temp.as_deref().map(numeric_spec),
                temp_list: self
                    .temp_list
                    .as_ref()
                    .map(|l| l.iter().map(|t| numeric_spec(t)).collect()),
                ..Self::default()
            };
            let envs = numeric.temperature_specs(&[])?;
            if envs
                .iter()
                .any(|e| matches!(e, ThermalEnvironment::HighTemperature { .. }))
            {
                return Err(CliError::Config(
                    "the interplay sweep takes numeric temperatures only".into(),
                ));
            }
            return Ok(envs);
        }
        let grid = Grid::new(
            "temperature",
            self.temp_min.unwrap_or(0.0),
            self.temp_max.unwrap_or(3.0),
            self.temp_points.unwrap_or(61),
        )?;
        grid.values()
            .into_iter()
            .map(|t| {
                ThermalEnvironment::from_temperature(t).map_err(|e| CliError::Config(e.to_string()))
            })
            .collect()
    }

    fn threads(&self) -> Result<Option<usize>, CliError> {
        let threads = match self.threads {
            Some(n) => Some(n),
            None => match std::env::var(THREADS_ENV) {
                Ok(v) if !v.trim().is_empty() => Some(parse(THREADS_ENV, &v)?),
                _ => None,
            },
        };
        if threads == Some(0) {
            return Err(CliError::Config("thread count must be at least 1".into()));
        }
        Ok(threads)
    }

    pub fn resolve(mut self, kind: Kind) -> Result<SweepConfig, CliError> {
        if let Some(path) = self.config.clone() {
            self.merge_file(&path)?;
        }
        let interplay = kind == Kind::Qsl && (self.interplay || self.tau.is_some());
        let s_values = match kind {
            Kind::Steady | Kind::Nonmarkov => self.s_values(&[], Some((0.1, 8.0, 80)))?,
            Kind::Qsl if interplay => self.s_values(&[], Some((0.1, 8.0, 80)))?,
            _ => self.s_values(&[1.0, 4.0], None)?,
        };
        let temperatures = match kind {
            Kind::Critical => self.temperature_specs(&DEFAULT_CRITICAL_TEMPERATURES)?,
            Kind::Qsl if interplay => self.interplay_temperatures()?,
            _ => self.temperature_specs(&DEFAULT_TEMPERATURES)?,
        };
        let omega_0 = self.omega0.unwrap_or(1.0);
        if !omega_0.is_finite() || omega_0 < 0.0 {
            return Err(CliError::Config(format!(
                "omega0 must be finite and >= 0, got {omega_0}"
            )));
        }
        let t_grid = Grid::new(
            "t",
            self.t_min.unwrap_or(0.0),
            self.t_max.unwrap_or(10.0),
            self.t_points.unwrap_or(400),
        )?;
        if t_grid.min < 0.0 {
            return Err(CliError::Config("t grid must start at t >= 0".into()));
        }
        let tau_grid = Grid::new(
            "tau",
            self.tau_min.unwrap_or(0.025),
            self.tau_max.unwrap_or(10.0),
            self.tau_points.unwrap_or(400),
        )?;
        if !(tau_grid.min > 0.0) {
            return Err(CliError::Config("tau grid must start at tau > 0".into()));
        }
        let fixed_tau = if interplay {
            let tau = self.tau.unwrap_or(DEFAULT_INTERPLAY_TAU);
            if !(tau > 0.0) || !tau.is_finite() {
                return Err(CliError::Config(format!("tau must be positive, got {tau}")));
            }
            Some(tau)
        } else {
            None
        };
        let horizon = self.horizon.unwrap_or(qsl_dephasing::qsl::DEFAULT_T_MAX);
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(CliError::Config(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        let s_bracket = (self.s_lo.unwrap_or(1.5), self.s_hi.unwrap_or(4.5));
        if !(s_bracket.0 > 0.0) || !(s_bracket.1 > s_bracket.0) {
            return Err(CliError::Config(format!(
                "need 0 < s-lo < s-hi, got {s_bracket:?}"
            )));
        }
        let defaults = Tolerance::default();
        let tol = Tolerance::new(
            self.tol_abs.unwrap_or(defaults.abs_tol),
            self.tol_rel.unwrap_or(defaults.rel_tol),
            self.max_evals.unwrap_or(defaults.max_evals),
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(SweepConfig {
            s_values,
            temperatures,
            omega_0,
            t_grid,
            tau_grid,
            fixed_tau,
            horizon,
            s_bracket,
            tol,
            output: self.out.clone(),
            threads: self.threads()?,
        })
    }
}

/// `"0"` becomes `zero` and `"1.5"` becomes `t:1.5`; anything else is kept.
fn numeric_spec(value: &str) -> String {
    match value.trim().parse::<f64>() {
        Ok(t) if t == 0.0 => "zero".to_owned(),
        Ok(t) => format!("t:{t}"),
        Err(_) => value.to_owned(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(args: &[&str]) -> Result<SweepConfig, CliError> {
        let mut argv = vec!["qsl-dephasing"];
        argv.extend_from_slice(args);
        let (kind, a) = Cli::try_parse_from(argv).unwrap().command.split();
        a.resolve(kind)
    }

    #[test]
    fn grid_includes_both_ends() {
        assert_eq!(
            Grid::new("t", 0.0, 10.0, 3).unwrap().values(),
            vec![0.0, 5.0, 10.0]
        );
        assert!(Grid::new("t", 1.0, 1.0, 3).is_err());
        assert!(Grid::new("t", 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn defaults_per_command() {
        let c = resolve(&["dephasing"]).unwrap();
        assert_eq!(c.s_values, vec![1.0, 4.0]);
        assert_eq!(c.temperatures.len(), 4);
        assert_eq!(c.t_grid.points, 400);
        let c = resolve(&["steady"]).unwrap();
        assert_eq!(c.s_values.len(), 80);
        assert!((c.s_values[79] - 8.0).abs() < 1e-15);
        let c = resolve(&["qsl", "--interplay"]).unwrap();
        assert_eq!(c.fixed_tau, Some(10.0));
        assert_eq!(c.temperatures.len(), 61);
        assert_eq!(c.temperatures[0], ThermalEnvironment::Zero);
        let c = resolve(&["critical"]).unwrap();
        assert_eq!(c.temperatures.len(), 5);
    }

    #[test]
    fn lists_and_specs() {
        let c = resolve(&[
            "dephasing",
            "--s-list",
            "0.5,1.5",
            "--temp-list",
            "zero,t:1.5,hight:2",
        ])
        .unwrap();
        assert_eq!(c.s_values, vec![0.5, 1.5]);
        assert_eq!(
            c.temperatures[2],
            ThermalEnvironment::high_temperature(2.0).unwrap()
        );
        assert!(resolve(&["dephasing", "--s", "1", "--s-list", "2"]).is_err());
        assert!(resolve(&["dephasing", "--temp", "warm"]).is_err());
        assert!(resolve(&["dephasing", "--s", "-1"]).is_err());
        assert!(resolve(&["qsl", "--tau", "5", "--temp", "hight:1"]).is_err());
    }

    #[test]
    fn file_values_yield_to_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(
            &path,
            "# figure 2\ns-list = 0.5, 3.5\ntemp = t:1.5\nt_points=7\nomega0=2\n",
        )
        .unwrap();
        let c = resolve(&[
            "dephasing",
            "--config",
            path.to_str().unwrap(),
            "--omega0",
            "3",
        ])
        .unwrap();
        assert_eq!(c.s_values, vec![0.5, 3.5]);
        assert_eq!(
            c.temperatures,
            vec![ThermalEnvironment::finite(1.5).unwrap()]
        );
        assert_eq!(c.t_grid.points, 7);
        assert_eq!(c.omega_0, 3.0);
        let c = resolve(&["dephasing", "--config", path.to_str().unwrap(), "--s", "2"]).unwrap();
        assert_eq!(c.s_values, vec![2.0]);
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(resolve(&["dephasing", "--config", path.to_str().unwrap()]).is_err());
    }
}
