//! Entangled pairs of coset coherent states on the circle.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::SeriesValue;
use crate::pair::{lumped, symmetrize, CoefficientMatrix, SectorPair};
use crate::states::{circle_stripped, coset_variable, CoefficientSequence, CosetLabel, Mp2Variable, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosetPairParams {
    pub omega: Mp2Variable,
    pub sigma: Mp2Variable,
    pub label: CosetLabel,
    pub label_prime: CosetLabel,
    pub rho: f64,
}

impl CosetPairParams {
    pub fn new(omega: Mp2Variable, sigma: Mp2Variable, label: CosetLabel, label_prime: CosetLabel, rho: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::NonFinite("rho"));
        }
        Ok(Self { omega, sigma, label, label_prime, rho })
    }
}

/// Bargmann variables z1 = z'(omega, label), z1' = z'(omega, label'),
/// z2 = z'(sigma, label), z2' = z'(sigma, label') and Z = 1 - |z|^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZFactors {
    pub z1: Complex64,
    pub z1p: Complex64,
    pub z2: Complex64,
    pub z2p: Complex64,
    pub big_z1: f64,
    pub big_z1p: f64,
    pub big_z2: f64,
    pub big_z2p: f64,
}

pub fn z_factors(p: &CosetPairParams) -> ZFactors {
    let z1 = coset_variable(p.omega, &p.label);
    let z1p = coset_variable(p.omega, &p.label_prime);
    let z2 = coset_variable(p.sigma, &p.label);
    let z2p = coset_variable(p.sigma, &p.label_prime);
    ZFactors {
        z1,
        z1p,
        z2,
        z2p,
        big_z1: 1.0 - z1.norm_sqr(),
        big_z1p: 1.0 - z1p.norm_sqr(),
        big_z2: 1.0 - z2.norm_sqr(),
        big_z2p: 1.0 - z2p.norm_sqr(),
    }
}

fn seq(z: Complex64, parity: Parity, n: usize) -> CoefficientSequence {
    circle_stripped(z, 1.0 - z.norm_sqr(), parity, n)
}

fn sequences(f: &ZFactors, pa: Parity, pb: Parity, n: usize) -> [CoefficientSequence; 4] {
    [seq(f.z1, pa, n), seq(f.z2p, pb, n), seq(f.z1p, pa, n), seq(f.z2, pb, n)]
}

pub fn coefficient_matrix_coset(p: &CosetPairParams, pair: SectorPair, n: usize) -> Result<CoefficientMatrix> {
    if n == 0 {
        return Err(Error::Truncation { min: 1, got: 0 });
    }
    let f = z_factors(p);
    let [a, bp, ap, b] = match pair.parities() {
        Some((pa, pb)) => sequences(&f, pa, pb, n),
        None => {
            let e = sequences(&f, Parity::Even, Parity::Even, n);
            let o = sequences(&f, Parity::Odd, Parity::Odd, n);
            [lumped(&e[0], &o[0]), lumped(&e[1], &o[1]), lumped(&e[2], &o[2]), lumped(&e[3], &o[3])]
        }
    };
    Ok(symmetrize((&a, &bp), (&ap, &b), p.rho))
}

pub fn probability_series_coset(p: &CosetPairParams, pair: SectorPair, n: usize) -> Result<SeriesValue<f64>> {
    let m = coefficient_matrix_coset(p, pair, n)?;
    Ok(SeriesValue::new(m.norm_sqr(), n, m.tail_bound()))
}

fn hyp(parity: Parity, x: Complex64) -> Complex64 {
    match parity {
        Parity::Even => x.cosh(),
        Parity::Odd => x.sinh(),
    }
}

fn hyp_re(parity: Parity, x: f64) -> f64 {
    match parity {
        Parity::Even => x.cosh(),
        Parity::Odd => x.sinh(),
    }
}

/// e^{-i rho} f(z1* z1'/4) g(z2'* z2/4) + e^{i rho} f(z1 z1'*/4) g(z2' z2*/4).
pub fn cross_term_coset(p: &CosetPairParams, pair: SectorPair) -> Result<Complex64> {
    let (pa, pb) = pair.parities().ok_or(Error::UnsupportedPair(pair))?;
    let f = z_factors(p);
    let e = Complex64::from_polar(1.0, -p.rho);
    let x = e * hyp(pa, f.z1.conj() * f.z1p / 4.0) * hyp(pb, f.z2p.conj() * f.z2 / 4.0);
    let y = e.conj() * hyp(pa, f.z1 * f.z1p.conj() / 4.0) * hyp(pb, f.z2p * f.z2.conj() / 4.0);
    Ok(x + y)
}

const IMAG_RESIDUE_TOL: f64 = 1e-12;

fn coset_form(p: &CosetPairParams, pair: SectorPair, printed: bool) -> Result<f64> {
    let (pa, pb) = pair.parities().ok_or(Error::UnsupportedPair(pair))?;
    let f = z_factors(p);
    let (sa, sb) = (2.0 * pa.sector_index(), 2.0 * pb.sector_index());
    let diag = 0.25
        * (f.big_z1.powf(sa) * f.big_z2p.powf(sb) * hyp_re(pa, f.z1.norm_sqr() / 4.0) * hyp_re(pb, f.z2p.norm_sqr() / 4.0)
            + f.big_z1p.powf(sa) * f.big_z2.powf(sb) * hyp_re(pa, f.z1p.norm_sqr() / 4.0) * hyp_re(pb, f.z2.norm_sqr() / 4.0));
    let cross = cross_term_coset(p, pair)?;
    let scale = cross.norm().max(1.0);
    debug_assert!(cross.im.abs() <= IMAG_RESIDUE_TOL * scale);
    let weight = 0.25 * ((f.big_z1 * f.big_z1p).powf(sa / 2.0) * (f.big_z2 * f.big_z2p).powf(sb / 2.0));
    if printed {
        // printed P-- prefactor Z1 Z2^{3/2} in place of (Z1 Z2)^{3/2}
        let typo = if pair == SectorPair::MM { f.big_z1.powf(-0.5) } else { 1.0 };
        Ok(typo * (diag + weight * cross.re))
    } else {
        Ok(diag - weight * cross.re)
    }
}

/// Corrected closed forms
/// ```text
/// 1/4 [ Z1^{s} Z2'^{t} f(|z1|^2/4) g(|z2'|^2/4) + Z1'^{s} Z2^{t} f(|z1'|^2/4) g(|z2|^2/4) ]
///   - 1/4 (Z1 Z1')^{s/2} (Z2 Z2')^{t/2} [ e^{-i rho} f(z1* z1'/4) g(z2'* z2/4) + c.c. ]
/// ```
/// with s, t = 1/2 (even) or 3/2 (odd).
pub fn closed_form_coset(p: &CosetPairParams, pair: SectorPair) -> Result<f64> {
    coset_form(p, pair, false)
}

/// The displayed forms: plus sign on the conjugate pair and the P--
/// prefactor Z1 Z2^{3/2}.
pub fn closed_form_coset_as_printed(p: &CosetPairParams, pair: SectorPair) -> Result<f64> {
    coset_form(p, pair, true)
}

/// z1* z1' = |omega|^2 e^{-i Delta} e^{i(alpha - alpha'*)/2}.
pub fn overlap_identity(omega: Mp2Variable, label: &CosetLabel, label_prime: &CosetLabel) -> Complex64 {
    let d = label.phi() - label_prime.phi();
    let a = label.alpha() - label_prime.alpha().conj();
    omega.value().norm_sqr() * Complex64::from_polar(1.0, -d) * (Complex64::i() * a / 2.0).exp()
}

/// The identity as printed, with e^{i(alpha - alpha'*)} (no 1/2).
pub fn overlap_identity_as_printed(omega: Mp2Variable, label: &CosetLabel, label_prime: &CosetLabel) -> Complex64 {
    let d = label.phi() - label_prime.phi();
    let a = label.alpha() - label_prime.alpha().conj();
    omega.value().norm_sqr() * Complex64::from_polar(1.0, -d) * (Complex64::i() * a).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(o: f64, s: f64, a: Complex64, phi: f64, ap: Complex64, phip: f64, rho: f64) -> CosetPairParams {
        CosetPairParams::new(
            Mp2Variable::real(o).unwrap(),
            Mp2Variable::real(s).unwrap(),
            CosetLabel::with_alpha(a, phi).unwrap(),
            CosetLabel::with_alpha(ap, phip).unwrap(),
            rho,
        )
        .unwrap()
    }

    #[test]
    fn z_factor_examples() {
        let f = z_factors(&params(0.0, 0.0, c(0.0, 1.0), 0.0, c(0.3, 0.2), 1.0, 0.0));
        assert_eq!([f.big_z1, f.big_z1p, f.big_z2, f.big_z2p], [1.0; 4]);
        let f = z_factors(&params(0.5, 0.3, c(0.0, 1.0), 0.0, c(0.3, 0.2), 1.0, 0.0));
        assert!((f.big_z1 - 0.908030).abs() < 1e-6);
        let f = z_factors(&params(0.5, 0.5, c(0.2, 0.7), 0.4, c(0.2, 0.7), 0.4, 0.0));
        assert_eq!(f.z1, f.z2);
        assert_eq!(f.z1p, f.z2p);
    }

    #[test]
    fn zero_phase_cancels_for_coincident_labels() {
        let p = params(0.6, 0.6, c(0.2, 0.7), 0.4, c(0.2, 0.7), 0.4, 0.0);
        for pair in [SectorPair::PP, SectorPair::PM, SectorPair::MM, SectorPair::Total] {
            assert!(probability_series_coset(&p, pair, 30).unwrap().value < 1e-30);
        }
    }

    #[test]
    fn origin_single_term() {
        let p = params(0.0, 0.0, c(0.0, 1.0), 0.0, c(1.0, 2.0), 1.0, PI);
        let v = probability_series_coset(&p, SectorPair::PP, 10).unwrap().value;
        assert!((v - 1.0).abs() < 1e-15);
        assert!((closed_form_coset(&p, SectorPair::PP).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(closed_form_coset(&p, SectorPair::MM).unwrap(), 0.0);
        assert!(closed_form_coset(&p, SectorPair::Total).is_err());
    }

    #[test]
    fn identity_with_half_exponent() {
        let o = Mp2Variable::from_polar(0.7, 0.9).unwrap();
        let l = CosetLabel::with_alpha(c(0.4, 0.6), 1.1).unwrap();
        let lp = CosetLabel::with_alpha(c(-0.3, 1.2), 0.2).unwrap();
        let direct = coset_variable(o, &l).conj() * coset_variable(o, &lp);
        assert!((direct - overlap_identity(o, &l, &lp)).norm() < 1e-15);
        assert!((direct - overlap_identity_as_printed(o, &l, &lp)).norm() > 1e-2);
    }

    #[test]
    fn printed_mm_differs() {
        let p = params(0.7, 0.8, c(0.3, 0.4), 1.0, c(-0.2, 0.9), 0.1, 0.5);
        let s = probability_series_coset(&p, SectorPair::MM, 40).unwrap().value;
        assert!((closed_form_coset_as_printed(&p, SectorPair::MM).unwrap() - s).abs() > 1e-6);
    }

    proptest! {
        #[test]
        fn closed_form_matches_series(o in 0.0f64..0.99, s in 0.0f64..0.99, ar in -3.0f64..3.0, ai in 1e-6f64..3.0,
                                      apr in -3.0f64..3.0, api in 1e-6f64..3.0, phi in 0.0f64..6.3, phip in 0.0f64..6.3,
                                      rho in 0.0f64..6.3) {
            let p = params(o, s, c(ar, ai), phi, c(apr, api), phip, rho);
            for pair in SectorPair::SECTORS {
                let ser = probability_series_coset(&p, pair, 40).unwrap();
                let cf = closed_form_coset(&p, pair).unwrap();
                prop_assert!((ser.value - cf).abs() <= 1e-12 + ser.tail_bound, "{} {} {}", pair, ser.value, cf);
                let x = cross_term_coset(&p, pair).unwrap();
                prop_assert!(x.im.abs() <= 1e-12 * x.norm().max(1.0));
            }
        }
    }
}
