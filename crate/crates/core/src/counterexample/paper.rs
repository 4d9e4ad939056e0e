//! Paper-scale parameter arithmetic, evaluated exactly.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `r = 2^7 * 3 * x`.
pub fn ramsey_r(x: u64) -> BigInt {
    BigInt::from(384u32) * BigInt::from(x)
}

pub fn binomial(n: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperParameters {
    pub x: BigInt,
    pub r: BigInt,
    /// `C(r + 2, 3)`, which also bounds the Ramsey number `R(r, 4)`.
    pub y: BigInt,
    /// `(y - y/x) * 37 * 4`.
    pub s: BigInt,
    /// Stabilizers per joint, `(s - 1)^4 * 3^2 * x`.
    pub l: BigInt,
    /// Stabilizers per cell, `3^2 (s - 1)^4`.
    pub t: BigInt,
    pub n_bound: BigInt,
    pub x_cap: BigInt,
    pub y_cap: BigInt,
    /// `s = 0`, which happens exactly when `x = 1`.
    pub degenerate: bool,
    /// Whether `x` divides `y`, so that `y / x` is exact.
    pub y_divisible: bool,
    pub x_within_cap: bool,
    pub y_within_cap: bool,
}

pub fn compute_paper_parameters(x: u64) -> PaperParameters {
    assert!(x >= 1, "x must be positive");
    let xb = BigInt::from(x);
    let r = ramsey_r(x);
    let y = binomial(&(&r + 2u32), 3);
    let s: BigInt = (&y - &y / &xb) * 148u32;
    let s1: BigInt = &s - 1;
    let s1_4 = s1.pow(4);
    let t = &s1_4 * 9;
    let l = &t * &xb;
    let x_cap = BigInt::from(7 * 9) << 23u32;
    let y_cap = BigInt::from(49 * 27) << 26u32;
    PaperParameters {
        degenerate: s.is_zero(),
        y_divisible: (&y % &xb).is_zero(),
        x_within_cap: xb <= x_cap,
        y_within_cap: y <= y_cap,
        n_bound: y.clone(),
        x: xb,
        r,
        y,
        s,
        l,
        t,
        x_cap,
        y_cap,
    }
}
