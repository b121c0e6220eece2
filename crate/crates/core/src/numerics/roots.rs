use crate::numerics::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    PositiveToNegative,
    NegativeToPositive,
}

/// A bracketed and refined zero crossing of a scalar function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignChange {
    pub t_root: f64,
    pub direction: Direction,
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Bisection on a bracket `[lo, hi]` whose endpoints have opposite signs.
/// Stops once the bracket is no wider than `width`; returns its midpoint.
pub fn bisect<G, E>(g: G, mut lo: f64, mut hi: f64, width: f64) -> Result<f64, E>
where
    G: Fn(f64) -> Result<f64, E>,
{
    let s_lo = sign(g(lo)?);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s_mid = sign(g(mid)?);
        if s_mid == 0 {
            return Ok(mid);
        }
        if s_mid == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Uniform scan of `g` on `[t_lo, t_hi]` with `scan_points` samples, each
/// bracketed sign change then refined by bisection to `tol.abs_tol`.
///
/// Exact zeros on the scan grid carry no sign. Crossings closer together
/// than the scan pitch can cancel and go unseen.
pub fn find_sign_changes<G, E>(
    g: G,
    t_lo: f64,
    t_hi: f64,
    scan_points: usize,
    tol: &Tolerance,
) -> Result<Vec<SignChange>, E>
where
    G: Fn(f64) -> Result<f64, E>,
{
    let n = scan_points.max(2);
    let pitch = (t_hi - t_lo) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                t_hi
            } else {
                t_lo + pitch * i as f64
            }
        })
        .collect();
    find_sign_changes_on_grid(g, &grid, tol)
}

/// As [`find_sign_changes`], on an arbitrary increasing grid.
pub fn find_sign_changes_on_grid<G, E>(
    g: G,
    grid: &[f64],
    tol: &Tolerance,
) -> Result<Vec<SignChange>, E>
where
    G: Fn(f64) -> Result<f64, E>,
{
    let mut roots = Vec::new();
    let mut last: Option<(f64, i8)> = None;
    for &t in grid {
        let s = sign(g(t)?);
        if s == 0 {
            continue;
        }
        if let Some((t_prev, s_prev)) = last {
            if s != s_prev {
                let t_root = bisect(&g, t_prev, t, tol.abs_tol)?;
                let direction = if s_prev > 0 {
                    Direction::PositiveToNegative
                } else {
                    Direction::NegativeToPositive
                };
                roots.push(SignChange { t_root, direction });
            }
        }
        last = Some((t, s));
    }
    Ok(roots)
}
