//! Float helpers that work without `std`.

pub use core::f64::consts::{PI, SQRT_2};

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Neumaier-compensated sum.
pub fn compensated_sum<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for &v in values {
        let t = sum + v;
        if abs(sum) >= abs(v) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// `cos(k π / n)` with the angle reduced to `[0, 2π)` first so that large
/// products `k` stay accurate.
#[inline]
pub fn cos_pi_ratio(k: usize, n: usize) -> f64 {
    let r = k % (2 * n);
    if r == 0 {
        1.0
    } else if r == n {
        -1.0
    } else {
        cos(PI * r as f64 / n as f64)
    }
}
