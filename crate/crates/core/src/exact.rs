//! Correctly rounded averages.
//!
//! The mean is computed exactly over the dyadic rationals and rounded once, so
//! the result does not depend on summation order or on how often each value is
//! repeated: `mean([x, x, y, y]) == mean([x, y])` bit for bit.

use num_bigint::{BigInt, BigUint, Sign};

const SUBNORMAL_SHIFT: u64 = 1074;

fn scaled(x: f64) -> BigInt {
    let bits = x.to_bits();
    let exp = (bits >> 52) & 0x7ff;
    let frac = bits & ((1u64 << 52) - 1);
    let mant = if exp == 0 { frac } else { frac | (1u64 << 52) };
    let shift = exp.max(1) - 1;
    let mag = BigInt::from(mant) << shift;
    if x.is_sign_negative() {
        -mag
    } else {
        mag
    }
}

/// Exact mean of finite values, rounded to nearest (ties to even).
/// Panics on an empty slice or non-finite input.
pub(crate) fn mean(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "mean of nothing");
    assert!(values.iter().all(|v| v.is_finite()), "mean of non-finite values");
    let total: BigInt = values.iter().map(|&v| scaled(v)).sum();
    let (sign, num) = total.into_parts();
    if sign == Sign::NoSign {
        return 0.0;
    }
    let den = BigUint::from(values.len()) << SUBNORMAL_SHIFT;
    let magnitude = round_ratio(&num, &den);
    if sign == Sign::Minus {
        -magnitude
    } else {
        magnitude
    }
}

/// `num / den` rounded to the nearest double.
fn round_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let k = 55 + den.bits() as i64 - num.bits() as i64;
    let (n, d) = if k >= 0 { (num << k as u64, den.clone()) } else { (num.clone(), den << (-k) as u64) };
    let q = &n / &d;
    let sticky = &q * &d != n;
    let t = q.bits() - 53;
    let mut mant: u64 = (&q >> t).try_into().expect("53-bit mantissa");
    let rest: u64 = (&q & ((BigUint::from(1u8) << t) - 1u8)).try_into().expect("small remainder");
    let half = 1u64 << (t - 1);
    if rest > half || (rest == half && (sticky || mant & 1 == 1)) {
        mant += 1;
    }
    scale2(mant as f64, t as i64 - k)
}

fn scale2(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}
