//! Geometric quantum speed limit of the dephasing qubit and the
//! information-backflow measure of non-Markovianity.
//!
//! All distances are trace distances. `c0` denotes the initial l1 coherence
//! `C(0) = 2|ρ₁₀(0)|`; both the geodesic and the path length are linear in
//! it, so the reported ratios use `c0 = 1`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::dephasing::{
    dephasing_factor, evaluate, evaluate_uniform, rate_for_scan, rate_scan_grid, steady_factor,
};
use crate::error::{Error, Result};
use crate::model::DephasingModel;
use crate::numerics::{find_sign_changes_on_grid, Direction, QuadratureResult, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslEvaluation {
    pub tau: f64,
    pub geodesic: f64,
    pub path_length: f64,
    pub avg_speed: f64,
    pub tau_qsl: f64,
    /// `τ_QSL / τ`, identical to `geodesic / path_length`.
    pub ratio: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonMarkovianity {
    pub value: f64,
    pub negative_intervals: Vec<(f64, f64)>,
    /// True when `γ` is still negative at `t_max`, so the last interval was
    /// truncated there.
    pub truncated: bool,
    /// `|F(∞) - F(t_max)|` when truncated: the backflow still to come if the
    /// rate stays negative. Zero otherwise.
    pub tail_estimate: f64,
    /// False when some `F` at an interval end came from a quadrature that
    /// ran out of budget.
    pub converged: bool,
}

/// Default observation window for [`non_markovianity`], in units of `1/ω_c`.
pub const DEFAULT_T_MAX: f64 = 200.0;

fn check_c0(c0: f64) -> Result<()> {
    if (0.0..=1.0).contains(&c0) {
        Ok(())
    } else {
        Err(Error::domain("initial coherence must lie in [0, 1]", c0))
    }
}

/// `½C(0)·|F(τ)e^(-iω₀τ) - 1|`.
pub fn geodesic_distance(
    model: &DephasingModel,
    tau: f64,
    c0: f64,
    tol: &Tolerance,
) -> Result<f64> {
    check_c0(c0)?;
    let f = dephasing_factor(model, tau, tol)?;
    Ok(geodesic_from_factor(model.omega_0, tau, f, c0))
}

/// The geodesic for a given dephasing factor `F(τ)`.
pub fn geodesic_from_factor(omega_0: f64, tau: f64, factor: f64, c0: f64) -> f64 {
    let phase = omega_0 * tau;
    0.5 * c0 * (factor - phase.cos()).hypot(phase.sin())
}

/// The speed for given `γ(t)` and `F(t)`.
pub fn speed_from_rate(omega_0: f64, gamma: f64, factor: f64, c0: f64) -> f64 {
    0.5 * c0 * omega_0.hypot(gamma) * factor
}

/// `v(t) = ½C(0)·√(ω₀² + γ²)·F(t)`.
pub fn instantaneous_speed(
    model: &DephasingModel,
    t: f64,
    c0: f64,
    tol: &Tolerance,
) -> Result<f64> {
    check_c0(c0)?;
    let e = evaluate(model, t, tol)?;
    if !e.converged {
        return Err(Error::NotConverged {
            value: speed_from_rate(model.omega_0, e.gamma, e.factor, c0),
            error_estimate: f64::NAN,
        });
    }
    Ok(speed_from_rate(model.omega_0, e.gamma, e.factor, c0))
}

/// Sample count used by the sweeps: at least 64 per half period of the
/// qubit precession.
pub fn default_samples(model: &DephasingModel, tau: f64) -> usize {
    let half_periods = (model.omega_0.abs() * tau / PI).ceil() as usize;
    (64 * half_periods).max(512)
}

/// `ℓ = ∫₀^τ v(t) dt` by composite Simpson on `samples` intervals.
///
/// Each block of four intervals is checked against Simpson on its two
/// halves (Richardson). While the summed error estimate exceeds the
/// tolerance, the worst block is bisected. For smooth speeds this is plain
/// composite Simpson. Strongly super-Ohmic baths at finite temperature
/// concentrate the motion in a spike near `t = 0` that a uniform grid
/// cannot resolve. `converged = false` when refinement hits its depth or
/// evaluation budget.
pub fn path_length(
    model: &DephasingModel,
    tau: f64,
    c0: f64,
    samples: usize,
    tol: &Tolerance,
) -> Result<QuadratureResult> {
    check_c0(c0)?;
    if samples < 16 {
        return Err(Error::domain(
            "path length needs at least 16 samples",
            samples as f64,
        ));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain("evolution time must be positive", tau));
    }
    let n = samples.next_multiple_of(4);
    let h = tau / n as f64;
    let uniform = evaluate_uniform(model, h, n + 1, tol)?;
    let mut speed = SpeedSampler {
        model,
        c0,
        tol,
        evaluations: uniform.len(),
        converged: uniform.iter().all(|e| e.converged),
    };
    let nodes: Vec<f64> = uniform
        .iter()
        .map(|e| speed_from_rate(model.omega_0, e.gamma, e.factor, c0))
        .collect();

    let mut heap: BinaryHeap<Block> = (0..n / 4)
        .map(|k| Block {
            a: h * (4 * k) as f64,
            b: if 4 * k + 4 == n {
                tau
            } else {
                h * (4 * k + 4) as f64
            },
            v: [
                nodes[4 * k],
                nodes[4 * k + 1],
                nodes[4 * k + 2],
                nodes[4 * k + 3],
                nodes[4 * k + 4],
            ],
            depth: 0,
        })
        .collect();
    let mut value: f64 = heap.iter().map(Block::fine).sum();
    let mut error: f64 = heap.iter().map(Block::error).sum();
    let refined_ok = loop {
        if error <= tol.target(value) {
            break true;
        }
        if speed.evaluations + 4 > tol.max_evals {
            break false;
        }
        let Some(block) = heap.pop() else {
            break false;
        };
        if block.depth >= MAX_DEPTH {
            heap.push(block);
            break false;
        }
        let [v0, v1, v2, v3, v4] = block.v;
        let q = 0.25 * (block.b - block.a);
        let left = Block {
            a: block.a,
            b: block.a + 2.0 * q,
            v: [
                v0,
                speed.at(block.a + 0.5 * q)?,
                v1,
                speed.at(block.a + 1.5 * q)?,
                v2,
            ],
            depth: block.depth + 1,
        };
        let right = Block {
            a: block.a + 2.0 * q,
            b: block.b,
            v: [
                v2,
                speed.at(block.a + 2.5 * q)?,
                v3,
                speed.at(block.a + 3.5 * q)?,
                v4,
            ],
            depth: block.depth + 1,
        };
        value += left.fine() + right.fine() - block.fine();
        error += left.error() + right.error() - block.error();
        heap.push(left);
        heap.push(right);
    };
    // Resum in time order so the result does not depend on refinement history.
    let mut blocks = heap.into_vec();
    blocks.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(QuadratureResult {
        value: blocks.iter().map(Block::fine).sum(),
        error_estimate: blocks.iter().map(Block::error).sum(),
        evaluations: speed.evaluations,
        converged: refined_ok && speed.converged,
    })
}

struct SpeedSampler<'a> {
    model: &'a DephasingModel,
    c0: f64,
    tol: &'a Tolerance,
    evaluations: usize,
    converged: bool,
}

impl SpeedSampler<'_> {
    fn at(&mut self, t: f64) -> Result<f64> {
        let e = evaluate(self.model, t, self.tol)?;
        self.converged &= e.converged;
        self.evaluations += 1;
        Ok(speed_from_rate(
            self.model.omega_0,
            e.gamma,
            e.factor,
            self.c0,
        ))
    }
}

/// Deepest bisection of a Simpson block in [`path_length`].
const MAX_DEPTH: u32 = 30;

/// Four equal intervals on `[a, b]` with the speed at their five nodes.
struct Block {
    a: f64,
    b: f64,
    v: [f64; 5],
    depth: u32,
}

impl Block {
    fn fine(&self) -> f64 {
        let [v0, v1, v2, v3, v4] = self.v;
        (self.b - self.a) / 12.0 * (v0 + 4.0 * v1 + 2.0 * v2 + 4.0 * v3 + v4)
    }

    fn coarse(&self) -> f64 {
        let [v0, _, v2, _, v4] = self.v;
        (self.b - self.a) / 6.0 * (v0 + 4.0 * v2 + v4)
    }

    fn error(&self) -> f64 {
        (self.fine() - self.coarse()).abs() / 15.0
    }
}

// Ordered by error estimate so the heap yields the worst block first.
impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Block {}
impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error()
            .total_cmp(&other.error())
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Geometric QSL time for an evolution of duration `tau`, with `c0 = 1`.
pub fn qsl_time(
    model: &DephasingModel,
    tau: f64,
    samples: usize,
    tol: &Tolerance,
) -> Result<QslEvaluation> {
    if !(tau > 0.0) {
        return Err(Error::domain("evolution time must be positive", tau));
    }
    if model.omega_0 == 0.0 && model.is_decoupled() {
        return Err(Error::DegenerateEvolution { path_length: 0.0 });
    }
    let end = evaluate(model, tau, tol)?;
    let geodesic = geodesic_from_factor(model.omega_0, tau, end.factor, 1.0);
    let path = path_length(model, tau, 1.0, samples, tol)?;
    if !(path.value > f64::MIN_POSITIVE) {
        return Err(Error::DegenerateEvolution {
            path_length: path.value,
        });
    }
    let avg_speed = path.value / tau;
    let tau_qsl = geodesic / avg_speed;
    Ok(QslEvaluation {
        tau,
        geodesic,
        path_length: path.value,
        avg_speed,
        tau_qsl,
        ratio: geodesic / path.value,
        converged: path.converged && end.converged,
    })
}

/// Information backflow `N = -∫_{γ<0} γ(t)F(t) dt` for the `|±⟩` pair.
///
/// Since `-γF = dF/dt`, each negative-rate interval contributes exactly the
/// rise of `F` across it, so only the interval endpoints need `F`.
pub fn non_markovianity(
    model: &DephasingModel,
    t_max: f64,
    tol: &Tolerance,
) -> Result<NonMarkovianity> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::domain("t_max must be positive", t_max));
    }
    let grid = rate_scan_grid(model.omega_c(), t_max);
    let changes = find_sign_changes_on_grid(|t| rate_for_scan(model, t, tol), &grid, tol)?;
    let mut intervals = Vec::new();
    let mut open: Option<f64> = None;
    for c in changes {
        match c.direction {
            Direction::PositiveToNegative => open = Some(c.t_root),
            Direction::NegativeToPositive => {
                // A negative start at t = 0 cannot happen (γ ~ t·∫J coth > 0),
                // but keep the pairing total.
                intervals.push((open.take().unwrap_or(0.0), c.t_root));
            }
        }
    }
    let truncated = open.is_some();
    if let Some(start) = open {
        intervals.push((start, t_max));
    }
    let mut value = 0.0;
    let mut f_end = f64::NAN;
    let mut converged = true;
    let mut factor = |t: f64| -> Result<f64> {
        let e = evaluate(model, t, tol)?;
        converged &= e.converged;
        Ok(e.factor)
    };
    for &(a, b) in &intervals {
        f_end = factor(b)?;
        value += (f_end - factor(a)?).max(0.0);
    }
    let tail_estimate = if truncated {
        match steady_factor(model, tol) {
            Ok(sf) => (sf.value - f_end).abs(),
            Err(Error::NotConverged { value, .. }) => (value - f_end).abs(),
            Err(e) => return Err(e),
        }
    } else {
        0.0
    };
    Ok(NonMarkovianity {
        value,
        negative_intervals: intervals,
        truncated,
        tail_estimate,
        converged,
    })
}

/// Unified Mandelstam-Tamm / Margolus-Levitin bound for closed evolution to
/// an orthogonal state.
pub fn mt_ml_bound(delta_e: f64, e_minus_e0: f64) -> Result<f64> {
    if !(delta_e > 0.0) {
        return Err(Error::domain("energy spread must be positive", delta_e));
    }
    if !(e_minus_e0 > 0.0) {
        return Err(Error::domain(
            "mean energy above ground must be positive",
            e_minus_e0,
        ));
    }
    Ok((PI / (2.0 * delta_e)).max(PI / (2.0 * e_minus_e0)))
}
