//! Closed-form running integral of `sin^l`, used for the motional envelope.
//!
//! The integral is reduced to a quarter period and evaluated there without
//! cancellation: a positive series in `sin y` below `pi/4`, and a positive
//! cosine recurrence measured from `pi/2` above it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

/// `int_0^{pi/2} sin^l(u) du`.
fn wallis(l: u32) -> f64 {
    let (mut w, start) = if l.is_multiple_of(2) {
        (FRAC_PI_2, 2)
    } else {
        (1.0, 3)
    };
    let mut j = start;
    while j <= l {
        w *= (j - 1) as f64 / j as f64;
        j += 2;
    }
    w
}

/// `int_0^y sin^l(u) du` for `0 <= y <= pi/4`, as a series in `s = sin y`:
/// `sum_k binom(2k, k) / 4^k * s^(l + 2k + 1) / (l + 2k + 1)`.
fn sin_series(l: u32, y: f64) -> f64 {
    let s = y.sin();
    let s2 = s * s;
    let mut coeff = 1.0;
    let mut power = s.powi(l as i32 + 1);
    let mut sum = 0.0;
    for k in 0..200u32 {
        let term = coeff * power / (l + 2 * k + 1) as f64;
        sum += term;
        if term <= sum * 1e-18 {
            break;
        }
        coeff *= (2 * k + 1) as f64 / (2 * k + 2) as f64;
        power *= s2;
    }
    sum
}

/// `int_0^v cos^l(u) du` for `0 <= v <= pi/4`; every recurrence term is non-negative.
fn cos_recurrence(l: u32, v: f64) -> f64 {
    let (s, c) = v.sin_cos();
    let mut even = v;
    let mut odd = s;
    let mut cpow_even = 1.0; // cos^(j-1) for odd j
    let mut cpow_odd = c; // cos^(j-1) for even j
    for j in 2..=l {
        if j % 2 == 0 {
            even = cpow_odd * s / j as f64 + (j - 1) as f64 / j as f64 * even;
            cpow_odd *= c * c;
        } else {
            cpow_even *= c * c;
            odd = cpow_even * s / j as f64 + (j - 1) as f64 / j as f64 * odd;
        }
    }
    if l.is_multiple_of(2) {
        even
    } else {
        odd
    }
}

/// `int_0^y sin^l` on the first quarter period.
fn quarter(l: u32, y: f64) -> f64 {
    if y <= FRAC_PI_4 {
        sin_series(l, y)
    } else {
        wallis(l) - cos_recurrence(l, (FRAC_PI_2 - y).max(0.0))
    }
}

/// `int_0^r sin^l` on the first half period.
fn half(l: u32, r: f64) -> f64 {
    if r <= FRAC_PI_2 {
        quarter(l, r)
    } else {
        2.0 * wallis(l) - quarter(l, (PI - r).max(0.0))
    }
}

/// `int_0^x sin^l(u) du` for `x >= 0`.
pub(crate) fn sin_power_integral(l: u32, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let periods = (x / TAU).floor();
    let r = (x - periods * TAU).clamp(0.0, TAU);
    let per_period = if l.is_multiple_of(2) {
        4.0 * wallis(l)
    } else {
        0.0
    };
    let partial = if r < PI {
        half(l, r)
    } else if l % 2 == 1 {
        // odd powers: the second half period cancels the first
        half(l, (TAU - r).max(0.0))
    } else {
        2.0 * wallis(l) + half(l, r - PI)
    };
    periods * per_period + partial
}
