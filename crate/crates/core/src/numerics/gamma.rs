use crate::error::{Error, Result};
use std::f64::consts::PI;

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(s) for `s > 0`.
///
/// Positive integers up to 171 return the exact factorial; everything else
/// goes through the Lanczos series, with the reflection formula below 1/2.
pub fn gamma_fn(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain("gamma_fn requires a finite s > 0", s));
    }
    if s.fract() == 0.0 && s <= 171.0 {
        let mut acc = 1.0_f64;
        let mut k = 2.0;
        while k < s {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    Ok(lanczos(s))
}

fn lanczos(s: f64) -> f64 {
    if s < 0.5 {
        return PI / ((PI * s).sin() * lanczos(1.0 - s));
    }
    let x = s - 1.0;
    let mut a = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    // Split the power to stay finite up to s ≈ 171.
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * a
}
