//! State families and their projections onto the Mp(2) even and odd sectors.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, geometric_tail, power_term_log, LogPolar};

/// Smallest accepted Im(alpha) for coset labels.
pub const IM_ALPHA_GUARD: f64 = 1e-6;

/// Largest accepted |l| for cylinder labels.
pub const MAX_CYLINDER_L: f64 = 10.0;

/// Mp(2) sector: even number states (s = 1/4) or odd (s = 3/4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// The sector index s.
    pub fn sector_index(self) -> f64 {
        match self {
            Parity::Even => 0.25,
            Parity::Odd => 0.75,
        }
    }

    /// Offset of the Fock index: term j of the sector is |2j + offset>.
    pub fn offset(self) -> u64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// Fock index of the j-th sector term.
    pub fn fock_index(self, j: usize) -> u64 {
        2 * j as u64 + self.offset()
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

fn wrap_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}

fn finite(x: f64, name: &'static str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(name))
    }
}

/// London state label, phi in [0, 2pi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleLabel {
    phi: f64,
}

impl CircleLabel {
    pub fn new(phi: f64) -> Result<Self> {
        Ok(Self { phi: wrap_angle(finite(phi, "phi")?) })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Cylinder state label (l, phi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderLabel {
    l: f64,
    phi: f64,
}

impl CylinderLabel {
    pub fn new(l: f64, phi: f64) -> Result<Self> {
        let l = finite(l, "l")?;
        if l.abs() > MAX_CYLINDER_L {
            return Err(Error::CylinderLabelTooLarge(l));
        }
        Ok(Self { l, phi: wrap_angle(finite(phi, "phi")?) })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Coset state label: displacement alpha, angle phi and fiducial (x, y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosetLabel {
    alpha: Complex64,
    phi: f64,
    x: f64,
    y: f64,
}

impl CosetLabel {
    pub fn new(alpha: Complex64, phi: f64, x: f64, y: f64) -> Result<Self> {
        finite(alpha.re, "alpha_re")?;
        finite(alpha.im, "alpha_im")?;
        let (x, y) = (finite(x, "x")?, finite(y, "y")?);
        if !(alpha.im >= IM_ALPHA_GUARD) {
            return Err(Error::ImAlphaTooSmall(alpha.im));
        }
        if x == 0.0 && y == 0.0 {
            return Err(Error::FiducialZero);
        }
        Ok(Self { alpha, phi: wrap_angle(finite(phi, "phi")?), x, y })
    }

    /// Label with the default fiducial x = 1, y = 0.
    pub fn with_alpha(alpha: Complex64, phi: f64) -> Result<Self> {
        Self::new(alpha, phi, 1.0, 0.0)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Mp(2) disk variable, |omega| < 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mp2Variable(Complex64);

impl Mp2Variable {
    pub fn new(omega: Complex64) -> Result<Self> {
        finite(omega.re, "omega_re")?;
        finite(omega.im, "omega_im")?;
        let r = omega.norm();
        if r >= 1.0 {
            return Err(Error::OutsideDisk { name: "|omega|", value: r });
        }
        Ok(Self(omega))
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::OutsideDisk { name: "|omega|", value: r });
        }
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn real(r: f64) -> Result<Self> {
        Self::new(Complex64::new(r, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn arg(&self) -> f64 {
        self.0.arg()
    }

    /// 1 - |omega|^2.
    pub fn disk_weight(&self) -> f64 {
        1.0 - self.0.norm_sqr()
    }

    /// The Bargmann variable z = omega e^{i phi}.
    pub fn bargmann(&self, label: &CircleLabel) -> Complex64 {
        self.0 * Complex64::from_polar(1.0, label.phi())
    }
}

/// Coefficients c_j of one sector, j indexing the sector's own series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSequence {
    parity: Parity,
    terms: Vec<Complex64>,
    tail_bound: f64,
}

impl CoefficientSequence {
    pub fn new(parity: Parity, terms: Vec<Complex64>, tail_bound: f64) -> Self {
        Self { parity, terms, tail_bound }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn terms(&self) -> &[Complex64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Upper bound on the sum of |c_j|^2 over the discarded j >= len.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Sum of |c_j|^2 over retained terms.
    pub fn norm_sqr(&self) -> f64 {
        compensated_sum(self.terms.iter().map(|c| c.norm_sqr()))
    }

    /// Multiply every term by a constant.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            parity: self.parity,
            terms: self.terms.iter().map(|c| c * s).collect(),
            tail_bound: self.tail_bound * s * s,
        }
    }

    /// Multiply term j by w(j). `w` must be non-increasing in magnitude for
    /// j >= len so that the rescaled tail bound remains valid.
    pub fn weighted(&self, w: impl Fn(usize) -> f64) -> Self {
        let n = self.terms.len();
        let wn = w(n);
        Self {
            parity: self.parity,
            terms: self.terms.iter().enumerate().map(|(j, c)| c * w(j)).collect(),
            tail_bound: self.tail_bound * wn * wn,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            parity: self.parity,
            terms: self.terms.iter().map(|c| c.conj()).collect(),
            tail_bound: self.tail_bound,
        }
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Truncation { min: 1, got: 0 });
    }
    Ok(())
}

/// Terms amplitude * (z/2)^k / sqrt(k!) * exp(ln_weight(k)) for k = 2j + offset.
/// The squared-term ratio must decrease in j, which holds for every family
/// here (ln_weight is concave or constant).
pub(crate) fn sector_terms(
    z: Complex64,
    amplitude: f64,
    parity: Parity,
    n: usize,
    ln_weight: impl Fn(u64) -> f64,
) -> CoefficientSequence {
    let amp = LogPolar::from_complex(Complex64::new(amplitude, 0.0));
    let term = |j: usize| {
        let k = parity.fock_index(j);
        power_term_log(z, k).mul(LogPolar::real_exp(ln_weight(k))).mul(amp)
    };
    let terms = (0..n).map(|j| term(j).to_complex()).collect();
    let (g0, g1) = (term(n).norm_sqr(), term(n + 1).norm_sqr());
    CoefficientSequence::new(parity, terms, geometric_tail(g0, g1))
}

fn circle_prefactor() -> f64 {
    (2.0 * PI).powf(-0.5)
}

/// Disk-series weight (1 - r^2)^s.
fn disk_amplitude(weight: f64, parity: Parity) -> f64 {
    weight.powf(parity.sector_index())
}

pub(crate) fn circle_stripped(z: Complex64, weight: f64, parity: Parity, n: usize) -> CoefficientSequence {
    sector_terms(z, disk_amplitude(weight, parity), parity, n, |_| 0.0)
}

/// Projection of the Mp(2) state onto the London state |phi>.
pub fn mp2_circle_projection(
    omega: Mp2Variable,
    label: CircleLabel,
    parity: Parity,
    n: usize,
) -> Result<CoefficientSequence> {
    check_order(n)?;
    let z = omega.bargmann(&label);
    Ok(circle_stripped(z, omega.disk_weight(), parity, n).scaled(circle_prefactor()))
}

/// Bargmann variable of a cylinder projection, omega e^{l - i phi}.
pub fn cylinder_variable(omega: Mp2Variable, label: &CylinderLabel) -> Complex64 {
    omega.value() * Complex64::from_polar(label.l().exp(), -label.phi())
}

/// Projection onto the cylinder state: disk series with Gaussian weight
/// e^{-k^2/2} on the Fock index k (e^{-2n^2} even, e^{-(2n+1)^2/2} odd).
pub fn mp2_cylinder_projection(
    omega: Mp2Variable,
    label: CylinderLabel,
    parity: Parity,
    n: usize,
) -> Result<CoefficientSequence> {
    check_order(n)?;
    let z = cylinder_variable(omega, &label);
    let amp = disk_amplitude(omega.disk_weight(), parity);
    Ok(sector_terms(z, amp, parity, n, |k| -0.5 * (k * k) as f64))
}

/// Coset Bargmann variable z' = omega e^{i(phi - conj(alpha)/2)}.
pub fn coset_variable(omega: Mp2Variable, label: &CosetLabel) -> Complex64 {
    let a = label.alpha();
    let exponent = Complex64::i() * (Complex64::new(label.phi(), 0.0) - a.conj() * 0.5);
    omega.value() * exponent.exp()
}

/// Projection onto the coset state; the disk weight is evaluated at |z'|.
pub fn coset_projection(
    omega: Mp2Variable,
    label: CosetLabel,
    parity: Parity,
    n: usize,
) -> Result<CoefficientSequence> {
    check_order(n)?;
    let z = coset_variable(omega, &label);
    Ok(circle_stripped(z, 1.0 - z.norm_sqr(), parity, n).scaled(circle_prefactor()))
}

/// Fiducial overlap S(alpha, phi) = (x + y) cos(alpha - phi) + (y - x) sin(alpha - phi).
/// Its modulus squared is the closed-form product S(alpha*, phi) S(alpha, phi).
pub fn coset_fiducial_overlap(label: &CosetLabel) -> Complex64 {
    let u = label.alpha() - label.phi();
    (label.x() + label.y()) * u.cos() + (label.y() - label.x()) * u.sin()
}

/// S(alpha*, phi) S(alpha, phi) in its printed closed form.
pub fn coset_overlap_product(label: &CosetLabel) -> f64 {
    let (x, y) = (label.x(), label.y());
    let a = label.alpha();
    let p = 2.0 * (a.re - label.phi());
    (x * x + y * y) * (2.0 * a.im).cosh() - (x * x - y * y) * p.sin() + 2.0 * x * y * p.cos()
}

/// Squared norm of the unnormalized coset state,
/// (1/2pi) S(alpha*, phi) S(alpha, phi) / (1 - e^{-Im alpha}).
pub fn coset_normalization(label: &CosetLabel) -> Result<f64> {
    let im = label.alpha().im;
    if !(im >= IM_ALPHA_GUARD) {
        return Err(Error::ImAlphaTooSmall(im));
    }
    Ok(coset_overlap_product(label) / (2.0 * PI * (-(-im).exp_m1())))
}

/// Normalization constant sqrt(1 - e^{-Im alpha}) e^{i arg S}.
pub fn coset_normalization_constant(label: &CosetLabel) -> Complex64 {
    let mag = (-(-label.alpha().im).exp_m1()).sqrt();
    Complex64::from_polar(mag, coset_fiducial_overlap(label).arg())
}

/// Squared norm of the lumped (even + odd) coset projection with the
/// (2 pi)^{-1/2} prefactor stripped, corrected closed form:
/// Z^{1/2} cosh(|z'|^2/4) + Z^{3/2} sinh(|z'|^2/4) + Z Re z' sum |z'/2|^{4n}/((2n)! sqrt(2n+1)).
pub fn coset_lumped_norm(z: Complex64, n: usize) -> f64 {
    let zz = 1.0 - z.norm_sqr();
    let a = z.norm_sqr() / 4.0;
    let cross = compensated_sum((0..n as u64).map(|j| {
        let k = 2 * j;
        power_term_log(Complex64::new(z.norm(), 0.0), k).norm_sqr() / ((k + 1) as f64).sqrt()
    }));
    zz.sqrt() * a.cosh() + zz.powf(1.5) * a.sinh() + zz * z.re * cross
}

/// The same squared norm as printed: cosh and sinh of |z'|^2/2, a Z^{1/2}
/// cross weight and a (2n+1) denominator.
pub fn coset_lumped_norm_as_printed(z: Complex64, n: usize) -> f64 {
    let zz = 1.0 - z.norm_sqr();
    let a = z.norm_sqr() / 2.0;
    zz.sqrt() * a.cosh() + zz.powf(1.5) * a.sinh() + zz.sqrt() * z.re * coset_tail_series(z, n)
}

/// sum_n |z'/2|^{4n} / ((2n)! (2n+1)), the printed cross series.
pub fn coset_tail_series(z: Complex64, n: usize) -> f64 {
    compensated_sum((0..n as u64).map(|j| coset_tail_term(z, j)))
}

/// The n-th term of the printed cross series.
pub fn coset_tail_term(z: Complex64, j: u64) -> f64 {
    let k = 2 * j;
    power_term_log(Complex64::new(z.norm(), 0.0), k).norm_sqr() / (k + 1) as f64
}

fn cat_prefactor(alpha: Complex64) -> f64 {
    (-alpha.norm_sqr() / 2.0).exp() / (2.0 * PI)
}

/// Cat variable alpha e^{i phi}.
pub fn cat_variable(alpha: Complex64, label: &CircleLabel) -> Complex64 {
    alpha * Complex64::from_polar(1.0, label.phi())
}

pub(crate) fn cat_stripped(alpha: Complex64, label: &CircleLabel, parity: Parity, n: usize) -> CoefficientSequence {
    let at = cat_variable(alpha, label);
    sector_terms(2.0 * at, (-alpha.norm_sqr() / 2.0).exp(), parity, n, |_| 0.0)
}

/// Projection of the even or odd cat component onto |phi>:
/// (2pi)^{-1} e^{-|alpha|^2/2} at^k / sqrt(k!), at = alpha e^{i phi}.
pub fn cat_projection(alpha: Complex64, label: CircleLabel, parity: Parity, n: usize) -> Result<CoefficientSequence> {
    check_order(n)?;
    finite(alpha.re, "alpha_re")?;
    finite(alpha.im, "alpha_im")?;
    Ok(cat_stripped(alpha, &label, parity, n).scaled(1.0 / (2.0 * PI)))
}

/// Projection of the coherent state |alpha> onto |phi> over Fock indices
/// k = 0..d: (2pi)^{-1} e^{-|alpha|^2/2} at^k / sqrt(k!).
pub fn coherent_projection(alpha: Complex64, label: CircleLabel, d: usize) -> Vec<Complex64> {
    let at = cat_variable(alpha, &label);
    let pre = cat_prefactor(alpha);
    (0..d as u64).map(|k| power_term_log(2.0 * at, k).to_complex() * pre).collect()
}
