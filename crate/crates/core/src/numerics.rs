//! Scalar kernels: log-factorials, factorial-weighted powers, theta series,
//! compensated accumulation and tail bounds.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default truncation order per summation axis.
pub const DEFAULT_ORDER: usize = 40;

/// A truncated series value with the number of retained terms and a bound on
/// the discarded remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue<T> {
    pub value: T,
    pub order: usize,
    pub tail_bound: f64,
}

impl<T> SeriesValue<T> {
    pub fn new(value: T, order: usize, tail_bound: f64) -> Self {
        debug_assert!(tail_bound >= 0.0 || tail_bound.is_nan());
        Self { value, order, tail_bound }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SeriesValue<U> {
        SeriesValue { value: f(self.value), order: self.order, tail_bound: self.tail_bound }
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

/// Compensated sum of complex terms, real and imaginary parts independently.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = Self::new();
        iter.into_iter().for_each(|z| s.add(z));
        s
    }
}

/// Compensated sum of an iterator of reals.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

const EXACT_FACTORIAL_MAX: u64 = 20;

/// ln(n!). Exact integer product up to 20!, Stirling series beyond.
pub fn log_factorial(n: u64) -> f64 {
    if n <= EXACT_FACTORIAL_MAX {
        let p: u64 = (2..=n).product();
        return (p as f64).ln();
    }
    let x = n as f64;
    let x2 = x * x;
    let series = 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2);
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + series
}

/// A complex number stored as (ln|z|, arg z) so that large and small factors
/// can be multiplied without leaving the representable range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPolar {
    pub ln_mag: f64,
    pub arg: f64,
}

impl LogPolar {
    pub const ZERO: LogPolar = LogPolar { ln_mag: f64::NEG_INFINITY, arg: 0.0 };
    pub const ONE: LogPolar = LogPolar { ln_mag: 0.0, arg: 0.0 };

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        Self { ln_mag: z.norm().ln(), arg: z.arg() }
    }

    pub fn real_exp(x: f64) -> Self {
        Self { ln_mag: x, arg: 0.0 }
    }

    pub fn mul(self, other: LogPolar) -> Self {
        Self { ln_mag: self.ln_mag + other.ln_mag, arg: self.arg + other.arg }
    }

    pub fn powi(self, k: u64) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        let kf = k as f64;
        Self { ln_mag: self.ln_mag * kf, arg: self.arg * kf }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.ln_mag == f64::NEG_INFINITY {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.ln_mag.exp(), self.arg)
    }

    pub fn norm_sqr(self) -> f64 {
        (2.0 * self.ln_mag).exp()
    }
}

/// (z/2)^k / sqrt(k!) in log-polar form.
pub fn power_term_log(z: Complex64, k: u64) -> LogPolar {
    if k == 0 {
        return LogPolar::ONE;
    }
    let half = LogPolar::from_complex(z * 0.5).powi(k);
    half.mul(LogPolar::real_exp(-0.5 * log_factorial(k)))
}

/// (z/2)^k / sqrt(k!).
pub fn power_term(z: Complex64, k: u64) -> Complex64 {
    power_term_log(z, k).to_complex()
}

/// Bound on the remainder of a positive series whose term ratio decreases
/// monotonically from index `N` on. `next` is the first discarded term and
/// `after` the one following it.
pub fn geometric_tail(next: f64, after: f64) -> f64 {
    if next == 0.0 {
        return 0.0;
    }
    let r = after / next;
    if !(r < 1.0) || !next.is_finite() {
        return f64::INFINITY;
    }
    next / (1.0 - r)
}

const THETA_EPS: f64 = 1e-18;
const THETA_MAX_TERMS: usize = 100_000;

fn check_nome(q: f64) -> Result<()> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::NomeOutOfRange(q));
    }
    Ok(())
}

/// Terms needed so that the theta3 geometric tail drops below `THETA_EPS`.
fn theta_order(q: f64, shift: f64) -> usize {
    if q == 0.0 {
        return 1;
    }
    let lnq = q.ln();
    let mut n = 1usize;
    while n < THETA_MAX_TERMS {
        let x = n as f64 + shift;
        if (x * x * lnq).exp() / (1.0 - q) < THETA_EPS {
            break;
        }
        n += 1;
    }
    n
}

/// theta3(0, q) = 1 + 2 sum_{n>=1} q^{n^2}, order chosen adaptively.
pub fn theta3(q: f64) -> Result<SeriesValue<f64>> {
    check_nome(q)?;
    theta3_with_order(q, theta_order(q, 0.0))
}

/// theta3 keeping the terms n = 1..=order.
pub fn theta3_with_order(q: f64, order: usize) -> Result<SeriesValue<f64>> {
    check_nome(q)?;
    if q == 0.0 {
        return Ok(SeriesValue::new(1.0, order, 0.0));
    }
    let lnq = q.ln();
    let mut s = NeumaierSum::new();
    s.add(1.0);
    for n in 1..=order {
        let x = n as f64;
        s.add(2.0 * (x * x * lnq).exp());
    }
    let next = (order + 1) as f64;
    let tail = 2.0 * (next * next * lnq).exp() / (1.0 - q);
    Ok(SeriesValue::new(s.value(), order, tail))
}

/// theta2(0, q) = 2 sum_{n>=0} q^{(n+1/2)^2}, order chosen adaptively.
pub fn theta2(q: f64) -> Result<SeriesValue<f64>> {
    check_nome(q)?;
    theta2_with_order(q, theta_order(q, 0.5))
}

/// theta2 keeping the terms n = 0..order.
pub fn theta2_with_order(q: f64, order: usize) -> Result<SeriesValue<f64>> {
    check_nome(q)?;
    if q == 0.0 {
        return Ok(SeriesValue::new(0.0, order, 0.0));
    }
    let lnq = q.ln();
    let s = compensated_sum((0..order).map(|n| {
        let x = n as f64 + 0.5;
        2.0 * (x * x * lnq).exp()
    }));
    let next = order as f64 + 0.5;
    let tail = 2.0 * (next * next * lnq).exp() / (1.0 - q);
    Ok(SeriesValue::new(s, order, tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn log_factorial_small() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert_relative_eq!(log_factorial(5), 120f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn log_factorial_stirling_matches_product_at_switch() {
        let exact: f64 = (1..=25u64).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(log_factorial(25), exact, max_relative = 1e-14);
        // 170! is the largest factorial representable in f64
        let exact170: f64 = (1..=170u64).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(log_factorial(170), exact170, max_relative = 1e-14);
    }

    #[test]
    fn log_factorial_recurrence() {
        for n in 1..=500u64 {
            let d = log_factorial(n) - log_factorial(n - 1);
            assert!((d - (n as f64).ln()).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn power_term_examples() {
        let z = Complex64::new(0.3, -1.7);
        assert_eq!(power_term(z, 0), Complex64::new(1.0, 0.0));
        assert_eq!(power_term(Complex64::new(0.0, 0.0), 3), Complex64::new(0.0, 0.0));
        let v = power_term(Complex64::new(2.0, 0.0), 2);
        assert_relative_eq!(v.re, 1.0 / 2f64.sqrt(), max_relative = 1e-14);
        let v = power_term(Complex64::new(1.0, 0.0), 4);
        assert_relative_eq!(v.re, 0.0625 / 24f64.sqrt(), max_relative = 1e-14);
        assert!((0.0625 / 24f64.sqrt() - 0.012758).abs() < 1e-6);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn theta_anchors() {
        assert_eq!(theta3(0.0).unwrap().value, 1.0);
        assert_eq!(theta2(0.0).unwrap().value, 0.0);
        let q = (-8f64).exp();
        // mpmath jtheta at 30 digits
        assert!((theta3(q).unwrap().value - 1.0006709252558304).abs() < 1e-15);
        assert!((theta2(q).unwrap().value - 0.27067059693318487).abs() < 1e-15);
        assert!((theta3(q).unwrap().value - 1.00067093).abs() < 1e-7);
        assert!((theta2(q).unwrap().value - 0.27067057).abs() < 1e-7);
        assert!(theta3(1.0).is_err());
        assert!(theta2(1.5).is_err());
        assert!(theta3(-0.1).is_err());
    }

    #[test]
    fn theta3_half_is_stable_in_order() {
        let a = theta3_with_order(0.5, 40).unwrap();
        let b = theta3_with_order(0.5, 80).unwrap();
        assert!((a.value - b.value).abs() < 1e-12);
        assert!((a.value - b.value).abs() <= a.tail_bound);
    }

    #[test]
    fn theta2_quarter_matches_hand_sum() {
        let q: f64 = 0.25;
        let hand: f64 = (0..5).map(|n| 2.0 * q.powf((n as f64 + 0.5).powi(2))).sum();
        let t = theta2_with_order(q, 5).unwrap();
        assert!((t.value - hand).abs() < 1e-15);
        let full = theta2(q).unwrap();
        assert!((full.value - hand).abs() <= t.tail_bound);
    }

    #[test]
    fn geometric_tail_cases() {
        assert_eq!(geometric_tail(0.0, 0.0), 0.0);
        assert_eq!(geometric_tail(1.0, 2.0), f64::INFINITY);
        assert!((geometric_tail(1.0, 0.5) - 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn power_term_recurrence(re in -2.0f64..2.0, im in -2.0f64..2.0, k in 0u64..200) {
            let z = Complex64::new(re, im);
            prop_assume!(z.norm() > 1e-3);
            let lhs = power_term_log(z, k + 1);
            let rhs = power_term_log(z, k).mul(LogPolar::from_complex(z * 0.5))
                .mul(LogPolar::real_exp(-0.5 * ((k + 1) as f64).ln()));
            prop_assert!((lhs.ln_mag - rhs.ln_mag).abs() < 1e-12 * lhs.ln_mag.abs().max(1.0));
            let dphi = (lhs.arg - rhs.arg).rem_euclid(2.0 * std::f64::consts::PI);
            prop_assert!(dphi.min(2.0 * std::f64::consts::PI - dphi) < 1e-10);
        }

        #[test]
        fn power_term_matches_direct(re in -4.0f64..4.0, im in -4.0f64..4.0, k in 0u64..30) {
            let z = Complex64::new(re, im);
            let direct = (z * 0.5).powu(k as u32) / (log_factorial(k).exp()).sqrt();
            let v = power_term(z, k);
            prop_assert!((v - direct).norm() <= 1e-12 * direct.norm().max(1e-300));
        }

        #[test]
        fn theta_monotone_and_bounded(q1 in 0.0f64..0.9, dq in 0.0f64..0.05) {
            let q2 = (q1 + dq).min(0.9);
            let (a3, b3) = (theta3(q1).unwrap().value, theta3(q2).unwrap().value);
            let (a2, b2) = (theta2(q1).unwrap().value, theta2(q2).unwrap().value);
            prop_assert!(a3 >= 1.0 && a2 >= 0.0);
            prop_assert!(b3 >= a3 && b2 >= a2);
        }
    }
}
