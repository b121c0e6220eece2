//! Adaptive Gauss-Kronrod quadrature on `(0, ∞)` for integrands with an
//! exponential high-frequency cutoff, an optional oscillation time scale and
//! an optional integrable power-law behaviour at the origin.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{LN_10, PI};

use crate::error::{Error, Result};
use crate::numerics::Tolerance;

// 7-point Gauss / 15-point Kronrod abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const RULE_POINTS: usize = 15;

/// Outcome of a quadrature. `converged` is false when the evaluation budget
/// ran out before the error estimate met the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    /// Converts a non-converged result into [`Error::NotConverged`].
    pub fn into_result(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged {
                value: self.value,
                error_estimate: self.error_estimate,
            })
        }
    }
}

/// Bound on the integrand far out in the tail:
/// `|f(ω)| ≤ prefactor · (ω/scale)^power · exp(-ω/scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEnvelope {
    pub scale: f64,
    pub power: f64,
    pub prefactor: f64,
}

impl TailEnvelope {
    /// Upper bound on `∫_{u·scale}^∞ |f|`.
    fn tail_integral(&self, u: f64) -> f64 {
        let q = self.power;
        let geometric = if q > 0.0 { 1.0 / (1.0 - q / u) } else { 1.0 };
        self.prefactor * self.scale * (q * u.ln() - u).exp() * geometric
    }

    /// Cutoff `Ω_max = scale · u` with `u ≥ max(40, q + 10 ln 10)`, pushed
    /// further out until the tail bound falls below `budget`.
    fn cutoff(&self, budget: f64) -> (f64, f64) {
        let mut u = 40.0_f64.max(self.power + 10.0 * LN_10);
        if self.power > 0.0 {
            u = u.max(2.0 * self.power);
        }
        while self.tail_integral(u) > budget && u < 5_000.0 {
            u += 1.0;
        }
        (self.scale * u, self.tail_integral(u))
    }
}

/// Configuration of a semi-infinite integral `∫_0^∞ f(ω) dω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiInfinite {
    pub tail: TailEnvelope,
    /// When set, initial panels are no wider than `π / t`.
    pub oscillation_time: Option<f64>,
    /// `f(ω) ~ ω^p` as `ω → 0`, with `p > -1`.
    pub endpoint_power: Option<f64>,
    /// Width of the panel at the origin that receives special treatment.
    pub endpoint_width: Option<f64>,
}

impl SemiInfinite {
    pub fn new(scale: f64) -> Self {
        Self {
            tail: TailEnvelope {
                scale,
                power: 0.0,
                prefactor: 1.0,
            },
            oscillation_time: None,
            endpoint_power: None,
            endpoint_width: None,
        }
    }

    pub fn tail(mut self, power: f64, prefactor: f64) -> Self {
        self.tail.power = power;
        self.tail.prefactor = prefactor;
        self
    }

    pub fn oscillating(mut self, t: f64) -> Self {
        self.oscillation_time = (t > 0.0).then_some(t);
        self
    }

    pub fn endpoint(mut self, power: f64, width: Option<f64>) -> Self {
        self.endpoint_power = Some(power);
        self.endpoint_width = width;
        self
    }

    pub fn integrate<F>(&self, f: F, tol: &Tolerance) -> Result<QuadratureResult>
    where
        F: Fn(f64) -> f64,
    {
        let [r] = self.integrate_vec(|w| [f(w)], tol)?;
        Ok(r)
    }

    /// Integrates several integrands that share their sample points.
    pub fn integrate_vec<const N: usize, F>(
        &self,
        f: F,
        tol: &Tolerance,
    ) -> Result<[QuadratureResult; N]>
    where
        F: Fn(f64) -> [f64; N],
    {
        self.engine(&f, tol)?.run()
    }

    /// Like [`integrate_vec`](Self::integrate_vec), and also returns the
    /// final panels as a fixed rule. The rule integrates related integrands
    /// (the same kernel at a smaller oscillation time, say) without further
    /// adaptation; its accuracy for those is the caller's to check.
    pub fn integrate_vec_with_rule<const N: usize, F>(
        &self,
        f: F,
        tol: &Tolerance,
    ) -> Result<([QuadratureResult; N], FixedRule)>
    where
        F: Fn(f64) -> [f64; N],
    {
        let mut engine = self.engine(&f, tol)?;
        let converged = engine.refine()?;
        Ok((engine.results(converged), engine.fixed_rule()))
    }

    fn engine<'a, const N: usize, F>(
        &self,
        f: &'a F,
        tol: &'a Tolerance,
    ) -> Result<Engine<'a, N, F>>
    where
        F: Fn(f64) -> [f64; N],
    {
        if let Some(p) = self.endpoint_power {
            if !(p > -1.0) {
                return Err(Error::domain("endpoint power must exceed -1", p));
            }
        }
        let (upper, tail_bound) = self.tail.cutoff(0.01 * tol.abs_tol);
        let max_width = self
            .oscillation_time
            .map_or(self.tail.scale, |t| (PI / t).min(self.tail.scale));

        let mut first = self
            .endpoint_width
            .unwrap_or(0.01 * self.tail.scale)
            .min(0.5 * max_width)
            .min(upper);
        if !(first > 0.0) {
            first = 0.5 * max_width;
        }

        let mut engine = Engine::new(f, tol, tail_bound);
        let head_map = match self.endpoint_power {
            Some(p) if p < 0.0 => Map::Power {
                width: first,
                m: (1.0 / (p + 1.0)).min(64.0),
            },
            _ => Map::Linear,
        };
        match head_map {
            Map::Power { .. } => engine.seed(0.0, 1.0, head_map)?,
            Map::Linear => engine.seed(0.0, first, head_map)?,
        }
        let rest = upper - first;
        let panels = (rest / max_width).ceil().max(1.0) as usize;
        let width = rest / panels as f64;
        for i in 0..panels {
            let lo = first + width * i as f64;
            let hi = if i + 1 == panels { upper } else { lo + width };
            engine.seed(lo, hi, Map::Linear)?;
        }
        Ok(engine)
    }
}

/// Quadrature nodes and weights (map Jacobians included); `Σ wᵢ f(ωᵢ)`
/// approximates the integral over the cut-off range.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `∫_0^∞ f(ω) dω` for `f` decaying at least like `exp(-ω)`; when
/// `t_scale` is given, panels are capped at half an oscillation period.
pub fn integrate_semi_infinite<F>(
    f: F,
    t_scale: Option<f64>,
    tol: &Tolerance,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let mut cfg = SemiInfinite::new(1.0);
    if let Some(t) = t_scale {
        cfg = cfg.oscillating(t);
    }
    cfg.integrate(f, tol)
}

/// Vector-valued variant of [`integrate_semi_infinite`].
pub fn integrate_semi_infinite_vec<const N: usize, F>(
    f: F,
    cfg: &SemiInfinite,
    tol: &Tolerance,
) -> Result<[QuadratureResult; N]>
where
    F: Fn(f64) -> [f64; N],
{
    cfg.integrate_vec(f, tol)
}

/// Composite Simpson rule over `[a, b]` with `intervals` (rounded up to even)
/// subintervals.
pub fn simpson<F>(f: F, a: f64, b: f64, intervals: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let n = intervals.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let x = a + h * i as f64;
        if i % 2 == 1 {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Map {
    Linear,
    /// `ω = width · x^m` on `x ∈ [0, 1]`; removes an `ω^p` singularity
    /// when `m = 1/(p+1)`.
    Power {
        width: f64,
        m: f64,
    },
}

impl Map {
    /// The node `ω(x)` and Jacobian `dω/dx`.
    fn point(&self, x: f64) -> (f64, f64) {
        match *self {
            Map::Linear => (x, 1.0),
            Map::Power { width, m } => {
                let w = width * x.powf(m);
                if w == 0.0 {
                    (0.0, 0.0)
                } else {
                    (w, width * m * x.powf(m - 1.0))
                }
            }
        }
    }

    fn apply<const N: usize, F>(&self, f: &F, x: f64) -> Result<[f64; N]>
    where
        F: Fn(f64) -> [f64; N],
    {
        let (w, jac) = self.point(x);
        if w == 0.0 {
            return Ok([0.0; N]);
        }
        let mut y = f(w);
        for v in y.iter_mut() {
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { at: w });
            }
            *v *= jac;
        }
        Ok(y)
    }
}

struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    map: Map,
    value: [f64; N],
    err: [f64; N],
}

impl<const N: usize> Panel<N> {
    fn priority(&self) -> f64 {
        self.err.iter().copied().fold(0.0, f64::max)
    }
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority()
            .total_cmp(&other.priority())
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

struct Engine<'a, const N: usize, F> {
    f: &'a F,
    tol: &'a Tolerance,
    tail_bound: f64,
    heap: BinaryHeap<Panel<N>>,
    frozen: Vec<Panel<N>>,
    evaluations: usize,
}

impl<'a, const N: usize, F> Engine<'a, N, F>
where
    F: Fn(f64) -> [f64; N],
{
    fn new(f: &'a F, tol: &'a Tolerance, tail_bound: f64) -> Self {
        Self {
            f,
            tol,
            tail_bound,
            heap: BinaryHeap::new(),
            frozen: Vec::new(),
            evaluations: 0,
        }
    }

    fn seed(&mut self, lo: f64, hi: f64, map: Map) -> Result<()> {
        let panel = self.rule(lo, hi, map)?;
        self.heap.push(panel);
        Ok(())
    }

    fn rule(&mut self, lo: f64, hi: f64, map: Map) -> Result<Panel<N>> {
        self.evaluations += RULE_POINTS;
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let fc = map.apply(self.f, center)?;
        let mut res_k = [0.0; N];
        let mut res_g = [0.0; N];
        let mut res_abs = [0.0; N];
        let mut fv1 = [[0.0; N]; 7];
        let mut fv2 = [[0.0; N]; 7];
        for k in 0..N {
            res_k[k] = WGK[7] * fc[k];
            res_g[k] = WG[3] * fc[k];
            res_abs[k] = WGK[7] * fc[k].abs();
        }
        for j in 0..7 {
            let dx = half * XGK[j];
            let f1 = map.apply(self.f, center - dx)?;
            let f2 = map.apply(self.f, center + dx)?;
            for k in 0..N {
                res_k[k] += WGK[j] * (f1[k] + f2[k]);
                res_abs[k] += WGK[j] * (f1[k].abs() + f2[k].abs());
                if j % 2 == 1 {
                    res_g[k] += WG[j / 2] * (f1[k] + f2[k]);
                }
            }
            fv1[j] = f1;
            fv2[j] = f2;
        }
        let mut value = [0.0; N];
        let mut err = [0.0; N];
        for k in 0..N {
            let mean = 0.5 * res_k[k];
            let mut res_asc = WGK[7] * (fc[k] - mean).abs();
            for j in 0..7 {
                res_asc += WGK[j] * ((fv1[j][k] - mean).abs() + (fv2[j][k] - mean).abs());
            }
            let res_asc = res_asc * half.abs();
            let abs_int = res_abs[k] * half.abs();
            let mut e = ((res_k[k] - res_g[k]) * half).abs();
            if res_asc != 0.0 && e != 0.0 {
                e = res_asc * (200.0 * e / res_asc).powf(1.5).min(1.0);
            }
            if abs_int > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
                e = e.max(50.0 * f64::EPSILON * abs_int);
            }
            value[k] = res_k[k] * half;
            err[k] = e;
        }
        Ok(Panel {
            lo,
            hi,
            map,
            value,
            err,
        })
    }

    fn totals(&self) -> ([f64; N], [f64; N]) {
        let mut panels: Vec<&Panel<N>> = self.heap.iter().chain(self.frozen.iter()).collect();
        panels.sort_by(|a, b| {
            (a.map != Map::Linear)
                .cmp(&(b.map != Map::Linear))
                .reverse()
                .then(a.lo.total_cmp(&b.lo))
        });
        let mut value = [0.0; N];
        let mut err = [self.tail_bound; N];
        for p in panels {
            for k in 0..N {
                value[k] += p.value[k];
                err[k] += p.err[k];
            }
        }
        (value, err)
    }

    fn run(mut self) -> Result<[QuadratureResult; N]> {
        let converged = self.refine()?;
        Ok(self.results(converged))
    }

    /// Splits the worst panel until the tolerance is met or the budget is spent.
    fn refine(&mut self) -> Result<bool> {
        let mut value = [0.0; N];
        let mut err = [self.tail_bound; N];
        for p in self.heap.iter() {
            for k in 0..N {
                value[k] += p.value[k];
                err[k] += p.err[k];
            }
        }
        let mut since_resum = 0usize;
        loop {
            let done = (0..N).all(|k| err[k] <= self.tol.target(value[k]));
            if done {
                return Ok(true);
            }
            if self.evaluations + 2 * RULE_POINTS > self.tol.max_evals {
                return Ok(false);
            }
            let Some(worst) = self.heap.pop() else {
                return Ok(false);
            };
            let mid = 0.5 * (worst.lo + worst.hi);
            let scale = worst.lo.abs().max(worst.hi.abs()).max(f64::MIN_POSITIVE);
            if (worst.hi - worst.lo) <= 64.0 * f64::EPSILON * scale || mid <= worst.lo {
                self.frozen.push(worst);
                continue;
            }
            let left = self.rule(worst.lo, mid, worst.map)?;
            let right = self.rule(mid, worst.hi, worst.map)?;
            for k in 0..N {
                value[k] += left.value[k] + right.value[k] - worst.value[k];
                err[k] += left.err[k] + right.err[k] - worst.err[k];
            }
            self.heap.push(left);
            self.heap.push(right);
            since_resum += 1;
            if since_resum == 256 {
                // running sums drift; refresh them from the panels
                (value, err) = self.totals();
                since_resum = 0;
            }
        }
    }

    fn results(&self, converged: bool) -> [QuadratureResult; N] {
        let (value, err) = self.totals();
        let converged = converged && (0..N).all(|k| err[k] <= self.tol.target(value[k]));
        std::array::from_fn(|k| QuadratureResult {
            value: value[k],
            error_estimate: err[k],
            evaluations: self.evaluations,
            converged,
        })
    }

    fn fixed_rule(&self) -> FixedRule {
        let panels = self.heap.iter().chain(self.frozen.iter());
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for p in panels {
            let center = 0.5 * (p.lo + p.hi);
            let half = 0.5 * (p.hi - p.lo);
            let mut push = |x: f64, w: f64| {
                let (node, jac) = p.map.point(x);
                if node > 0.0 {
                    nodes.push(node);
                    weights.push(w * half * jac);
                }
            };
            push(center, WGK[7]);
            for j in 0..7 {
                push(center - half * XGK[j], WGK[j]);
                push(center + half * XGK[j], WGK[j]);
            }
        }
        FixedRule { nodes, weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn exponential() {
        let r = integrate_semi_infinite(|w| (-w).exp(), None, &tol()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn linear_times_exponential() {
        let r = integrate_semi_infinite(|w| w * (-w).exp(), None, &tol()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn ohmic_vacuum_decay_integrand() {
        // ∫ e^{-ω}(1 - cos ω)/ω dω = ½ ln 2
        let f = |w: f64| (-w).exp() * 2.0 * (0.5 * w).sin().powi(2) / w;
        let r = integrate_semi_infinite(f, Some(1.0), &tol()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 0.5 * std::f64::consts::LN_2, epsilon = 1e-10);
    }

    #[test]
    fn oscillatory_long_time() {
        // ∫ e^{-ω} sin(ωt) dω = t/(1+t²)
        let t = 300.0;
        let r = integrate_semi_infinite(|w| (-w).exp() * (w * t).sin(), Some(t), &tol()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, t / (1.0 + t * t), epsilon = 1e-10);
    }

    #[test]
    fn endpoint_singularity_is_removed() {
        // ∫ ω^{-1/2} e^{-ω} dω = √π
        let cfg = SemiInfinite::new(1.0).endpoint(-0.5, None);
        let r = cfg
            .integrate(|w| w.powf(-0.5) * (-w).exp(), &tol())
            .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, std::f64::consts::PI.sqrt(), epsilon = 1e-9);

        // ∫ ω^{-0.9} e^{-ω} dω = Γ(0.1)
        let cfg = SemiInfinite::new(1.0).endpoint(-0.9, None);
        let r = cfg
            .integrate(|w| w.powf(-0.9) * (-w).exp(), &tol())
            .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 9.513_507_698_668_731, epsilon = 1e-8);
    }

    #[test]
    fn heavy_polynomial_tail_extends_cutoff() {
        // ∫ ω^7 e^{-ω} = 7! needs a cutoff well beyond 40.
        let cfg = SemiInfinite::new(1.0).tail(7.0, 1.0);
        let r = cfg.integrate(|w| w.powi(7) * (-w).exp(), &tol()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 5040.0, epsilon = 5040.0 * 1e-8);
    }

    #[test]
    fn vector_integrands_share_points() {
        let [a, b] = SemiInfinite::new(1.0)
            .oscillating(2.0)
            .integrate_vec(
                |w| [(-w).exp() * (2.0 * w).cos(), (-w).exp() * (2.0 * w).sin()],
                &tol(),
            )
            .unwrap();
        assert_abs_diff_eq!(a.value, 1.0 / 5.0, epsilon = 1e-10);
        assert_abs_diff_eq!(b.value, 2.0 / 5.0, epsilon = 1e-10);
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tight = Tolerance::new(1e-15, 1e-15, 100).unwrap();
        let r = integrate_semi_infinite(|w| w.powf(-0.99) * (-w).exp(), None, &tight).unwrap();
        assert!(!r.converged);
        assert!(r.into_result().is_err());
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let err = integrate_semi_infinite(|w| if w > 3.0 { f64::NAN } else { 1.0 }, None, &tol());
        assert!(matches!(err, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 2);
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
        let v = simpson(|x| x.sin(), 0.0, std::f64::consts::PI, 200);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn fixed_rule_reproduces_the_adaptive_result() {
        let t = 20.0;
        let cfg = SemiInfinite::new(1.0).oscillating(t).endpoint(-0.5, None);
        let f = |w: f64| w.powf(-0.5) * (-w).exp();
        let ([r], rule) = cfg
            .integrate_vec_with_rule(|w| [f(w) * (w * t).cos()], &tol())
            .unwrap();
        assert!(r.converged);
        assert!(rule.nodes.iter().all(|&w| w > 0.0));
        let at = |t: f64| -> f64 {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&w, &q)| q * f(w) * (w * t).cos())
                .sum()
        };
        assert_abs_diff_eq!(at(20.0), r.value, epsilon = 1e-14);
        // ∫ ω^{-1/2} e^{-ω} cos(ωt) dω = √π · cos(½ atan t) / (1+t²)^{1/4}
        for t in [0.0, 1.0, 7.5] {
            let exact =
                std::f64::consts::PI.sqrt() * (0.5 * f64::atan(t)).cos() / (1.0 + t * t).powf(0.25);
            assert_abs_diff_eq!(at(t), exact, epsilon = 1e-9);
        }
    }
}
