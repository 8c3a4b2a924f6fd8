//! Classical orthogonal polynomials by upward three-term recurrence and the
//! polynomial branch of the Kummer function `U(−n, b, x)`.

/// Generalized Laguerre polynomial `L_n^a(x)`.
pub fn laguerre(n: u32, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Kummer function `U(−n, b, x)` for non-negative integer `n`.
///
/// Evaluated from the terminating hypergeometric sum
/// `U(−n, b, x) = (−1)^n (b)_n Σ_k (−n)_k x^k / ((b)_k k!)`,
/// independently of the Laguerre recurrence. Requires `b` not a
/// non-positive integer `> −n`.
pub fn kummer_u_poly(n: u32, b: f64, x: f64) -> f64 {
    // Horner form of Σ_k (−n)_k / ((b)_k k!) x^k
    let mut acc = 1.0;
    for k in (1..=n).rev() {
        let kf = k as f64;
        let ratio = (kf - 1.0 - n as f64) / ((b + kf - 1.0) * kf);
        acc = 1.0 + ratio * x * acc;
    }
    let mut poch = 1.0;
    for i in 0..n {
        poch *= b + i as f64;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * poch * acc
}
