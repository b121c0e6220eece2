//! One function per subcommand. Each builds the list of sweep cells in
//! output order, evaluates them on the pool and assembles the table.

use qsl_dephasing::dephasing::critical_ohmicity_on_grid;
use qsl_dephasing::dephasing::markovianity_grid;
use qsl_dephasing::qsl::{default_samples, geodesic_from_factor, speed_from_rate};
use qsl_dephasing::{
    evaluate, non_markovianity, qsl_time, steady_factor, DephasingModel, Error, ThermalEnvironment,
};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::config::{Kind, SweepConfig};
use crate::table::{Cell, Row, Table};

/// A finished sweep: the table plus cells that produced no row.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub warnings: Vec<String>,
}

impl Outcome {
    /// True unless every row converged and no cell was skipped.
    pub fn partial(&self) -> bool {
        !self.warnings.is_empty() || self.table.any_unconverged()
    }
}

type CellResult = Result<Row, String>;

fn collect(header: &[&'static str], results: Vec<CellResult>) -> Outcome {
    let mut table = Table::new(header);
    let mut warnings = Vec::new();
    for r in results {
        match r {
            Ok(row) => table.rows.push(row),
            Err(w) => warnings.push(w),
        }
    }
    Outcome { table, warnings }
}

fn run_cells<C, F>(pool: &ThreadPool, cells: &[C], f: F) -> Vec<CellResult>
where
    C: Sync,
    F: Fn(&C) -> CellResult + Sync,
{
    // Indexed parallel iterators collect in input order whatever the thread count.
    pool.install(|| cells.par_iter().map(&f).collect())
}

fn model(s: f64, env: ThermalEnvironment, omega_0: f64) -> Result<DephasingModel, String> {
    DephasingModel::ohmic(s, env, omega_0).map_err(|e| format!("s={s} {env}: {e}"))
}

fn env_cell(env: &ThermalEnvironment) -> Cell {
    Cell::Text(env.to_string())
}

fn triples(cfg: &SweepConfig, times: &[f64]) -> Vec<(f64, ThermalEnvironment, f64)> {
    let mut cells = Vec::with_capacity(cfg.s_values.len() * cfg.temperatures.len() * times.len());
    for &s in &cfg.s_values {
        for &env in &cfg.temperatures {
            for &t in times {
                cells.push((s, env, t));
            }
        }
    }
    cells
}

fn pairs(cfg: &SweepConfig) -> Vec<(f64, ThermalEnvironment)> {
    cfg.s_values
        .iter()
        .flat_map(|&s| cfg.temperatures.iter().map(move |&env| (s, env)))
        .collect()
}

pub fn dephasing(cfg: &SweepConfig, pool: &ThreadPool) -> Outcome {
    let cells = triples(cfg, &cfg.t_grid.values());
    let results = run_cells(pool, &cells, |&(s, env, t)| {
        let m = model(s, env, cfg.omega_0)?;
        let e = evaluate(&m, t, &cfg.tol).map_err(|e| format!("s={s} {env} t={t}: {e}"))?;
        Ok(Row {
            cells: vec![
                Cell::Float(s),
                env_cell(&env),
                Cell::Float(t),
                Cell::Float(e.decay),
                Cell::Float(e.gamma),
                Cell::Float(e.factor),
            ],
            converged: e.converged,
        })
    });
    collect(&["s", "temperature", "t", "D", "gamma", "F"], results)
}

pub fn steady(cfg: &SweepConfig, pool: &ThreadPool) -> Outcome {
    let cells = pairs(cfg);
    let results = run_cells(pool, &cells, |&(s, env)| {
        let m = model(s, env, cfg.omega_0)?;
        let (value, divergent, converged) = match steady_factor(&m, &cfg.tol) {
            Ok(sf) => (sf.value, sf.divergent, true),
            Err(Error::NotConverged { value, .. }) => (value, false, false),
            Err(e) => return Err(format!("s={s} {env}: {e}")),
        };
        Ok(Row {
            cells: vec![
                Cell::Float(s),
                env_cell(&env),
                Cell::Float(value),
                Cell::Int(u64::from(divergent)),
            ],
            converged,
        })
    });
    collect(&["s", "temperature", "F_inf", "divergent"], results)
}

pub fn nonmarkov(cfg: &SweepConfig, pool: &ThreadPool) -> Outcome {
    let cells = pairs(cfg);
    let results = run_cells(pool, &cells, |&(s, env)| {
        let m = model(s, env, cfg.omega_0)?;
        let n =
            non_markovianity(&m, cfg.horizon, &cfg.tol).map_err(|e| format!("s={s} {env}: {e}"))?;
        Ok(Row {
            cells: vec![
                Cell::Float(s),
                env_cell(&env),
                Cell::Float(n.value),
                Cell::Int(n.negative_intervals.len() as u64),
            ],
            converged: n.converged,
        })
    });
    collect(&["s", "temperature", "N", "n_intervals"], results)
}

pub fn qsl(cfg: &SweepConfig, pool: &ThreadPool) -> Outcome {
    match cfg.fixed_tau {
        Some(tau) => interplay(cfg, tau, pool),
        None => tau_sweep(cfg, pool),
    }
}

fn tau_sweep(cfg: &SweepConfig, pool: &ThreadPool) -> Outcome {
    let cells = triples(cfg, &cfg.tau_grid.values());
    let results = run_cells(pool, &cells, |&(s, env, tau)| {
        let m = model(s, env, cfg.omega_0)?;
        let q = qsl_time(&m, tau, default_samples(&m, tau), &cfg.tol)
            .map_err(|e| format!("skipped s={s} {env} tau={tau}: {e}"))?;
        Ok(Row {
            cells: vec![
                Cell::Float(s),
                env_cell(&env),
                Cell::Float(tau),
                Cell::Float(q.geodesic),
                Cell::Float(q.path_length),
                Cell::Float(q.tau_qsl),
                Cell::Float(q.ratio),
            ],
            converged: q.converged,
        })
    });
    collect(
        &[
            "s",
            "temperature",
            "tau",
            "geodesic",
            "path_length",
            "tau_qsl",
            "ratio",
        ],
        results,
    )
}

fn interplay(cfg: &SweepConfig, tau: f64, pool: &ThreadPool) -> Outcome {
    let cells = pairs(cfg);
    let results = run_cells(pool, &cells, |&(s, env)| {
        let m = model(s, env, cfg.omega_0)?;
        let q = qsl_time(&m, tau, default_samples(&m, tau), &cfg.tol)
            .map_err(|e| format!("skipped s={s} {env} tau={tau}: {e}"))?;
        Ok(Row {
            cells: vec![
                Cell::Float(s),
                Cell::Float(env.temperature()),
                Cell::Float(q.ratio),
            ],
            converged: q.converged,
        })
    });
    collect(&["s", "T", "ratio"], results)
}

pub fn geospeed(cfg: &SweepConfig, pool: &ThreadPool) -> Outcome {
    let cells = triples(cfg, &cfg.t_grid.values());
    let results = run_cells(pool, &cells, |&(s, env, t)| {
        let m = model(s, env, cfg.omega_0)?;
        let e = evaluate(&m, t, &cfg.tol).map_err(|e| format!("s={s} {env} t={t}: {e}"))?;
        Ok(Row {
            cells: vec![
                Cell::Float(s),
                env_cell(&env),
                Cell::Float(t),
                Cell::Float(geodesic_from_factor(cfg.omega_0, t, e.factor, 1.0)),
                Cell::Float(speed_from_rate(cfg.omega_0, e.gamma, e.factor, 1.0)),
            ],
            converged: e.converged,
        })
    });
    collect(
        &["s", "temperature", "t", "geodesic_scaled", "speed_scaled"],
        results,
    )
}

pub fn critical(cfg: &SweepConfig, pool: &ThreadPool) -> Outcome {
    let (s_lo, s_hi) = cfg.s_bracket;
    let results = run_cells(pool, &cfg.temperatures, |env| {
        let grid = markovianity_grid(env, 1.0);
        let (s_cri, width, converged) =
            match critical_ohmicity_on_grid(env, 1.0, s_lo, s_hi, &grid, &cfg.tol) {
                Ok(c) => (c.s_cri, c.bracket_width, true),
                // Reported in the row rather than dropped.
                Err(Error::NoBracket { .. }) => (f64::NAN, s_hi - s_lo, false),
                Err(e) => return Err(format!("{env}: {e}")),
            };
        Ok(Row {
            cells: vec![env_cell(env), Cell::Float(s_cri), Cell::Float(width)],
            converged,
        })
    });
    collect(&["temperature", "s_cri", "bracket_width"], results)
}

pub fn run(kind: Kind, cfg: &SweepConfig, pool: &ThreadPool) -> Outcome {
    match kind {
        Kind::Dephasing => dephasing(cfg, pool),
        Kind::Steady => steady(cfg, pool),
        Kind::Nonmarkov => nonmarkov(cfg, pool),
        Kind::Qsl => qsl(cfg, pool),
        Kind::Geospeed => geospeed(cfg, pool),
        Kind::Critical => critical(cfg, pool),
    }
}
