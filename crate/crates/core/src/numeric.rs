//! Integer rounding of real quantities that are integers in exact arithmetic.
//!
//! Expressions such as `3 / 0.1` evaluate to `30.000000000000004`; taking a
//! plain ceiling would turn an exact 30 into 31. Values within a relative
//! `1e-9` of an integer are treated as that integer before rounding.

const SNAP_REL: f64 = 1e-9;

fn snapped(x: f64) -> Option<f64> {
    let r = x.round();
    ((x - r).abs() <= SNAP_REL * r.abs().max(1.0)).then_some(r)
}

/// `⌈x⌉` with near-integers snapped.
pub fn ceil_snap(x: f64) -> f64 {
    snapped(x).unwrap_or_else(|| x.ceil())
}

/// `⌊x⌋` with near-integers snapped.
pub fn floor_snap(x: f64) -> f64 {
    snapped(x).unwrap_or_else(|| x.floor())
}

/// `⌈log_2 x⌉` for `x > 0`: the smallest integer `k` with `2^k >= x`.
pub fn ceil_log2(x: f64) -> i64 {
    assert!(x > 0.0 && x.is_finite(), "ceil_log2 needs a positive finite argument");
    let x = snapped(x).unwrap_or(x);
    let mut k = x.log2().ceil() as i64;
    while 2f64.powi(k as i32) < x {
        k += 1;
    }
    while 2f64.powi((k - 1) as i32) >= x {
        k -= 1;
    }
    k
}

/// `⌈log_2 n⌉` for a positive integer.
pub fn ceil_log2_usize(n: usize) -> usize {
    assert!(n > 0);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// `⌈n / m⌉` for positive integers.
pub fn div_ceil(n: usize, m: usize) -> usize {
    n.div_ceil(m)
}

/// Pairwise (tree) summation with a fixed split, so the result depends only on the input order.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 8 {
        return x.iter().sum();
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
}
