//! Overflow-safe pieces of the thermal integrands.

/// `ln(2 cosh x)`, exact for any finite `x`.
#[inline]
pub(crate) fn ln_2cosh(x: f64) -> f64 {
    let a = libm::fabs(x);
    a + libm::log1p(libm::exp(-2.0 * a))
}

/// `tanh(beta * gap / 2) / gap` for `gap >= 0`, continuous through `gap = 0`
/// where it equals `beta / 2`.
#[inline]
pub(crate) fn tanh_ratio(beta: f64, gap: f64) -> f64 {
    let x = 0.5 * beta * gap;
    if x < 1e-4 {
        let x2 = x * x;
        0.5 * beta * (1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0)
    } else {
        libm::tanh(x) / gap
    }
}

/// `atanh(x)` for `|x| < 1`.
#[inline]
pub(crate) fn artanh(x: f64) -> f64 {
    0.5 * libm::log1p(2.0 * x / (1.0 - x))
}
