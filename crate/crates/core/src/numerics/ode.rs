use crate::error::{Error, Result};

/// Classical fourth-order Runge-Kutta with `steps` equal steps over
/// `t_span`. `deriv(t, y, dy)` writes `dy/dt` into `dy`.
pub fn integrate_ode<D>(
    mut deriv: D,
    y0: &[f64],
    t_span: (f64, f64),
    steps: usize,
) -> Result<Vec<f64>>
where
    D: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if steps == 0 {
        return Err(Error::domain("integrate_ode needs at least one step", 0.0));
    }
    let n = y0.len();
    let (t0, t1) = t_span;
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for i in 0..steps {
        let t = t0 + h * i as f64;
        deriv(t, &y, &mut k1)?;
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * h * k1[j];
        }
        deriv(t + 0.5 * h, &tmp, &mut k2)?;
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * h * k2[j];
        }
        deriv(t + 0.5 * h, &tmp, &mut k3)?;
        for j in 0..n {
            tmp[j] = y[j] + h * k3[j];
        }
        deriv(t + h, &tmp, &mut k4)?;
        for j in 0..n {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { t: t + h });
        }
    }
    Ok(y)
}
