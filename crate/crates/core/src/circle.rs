//! Entangled pairs of London (circle) states projected onto Mp(2) sectors.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{power_term_log, NeumaierSum, SeriesValue};
use crate::pair::{lumped, symmetrize, CoefficientMatrix, SectorPair};
use crate::states::{circle_stripped, CircleLabel, CoefficientSequence, Mp2Variable, Parity};

/// Parameters of an entangled pair of London states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CirclePairParams {
    pub omega: Mp2Variable,
    pub sigma: Mp2Variable,
    pub phi: CircleLabel,
    pub phi_prime: CircleLabel,
    pub rho: f64,
}

impl CirclePairParams {
    pub fn new(omega: Mp2Variable, sigma: Mp2Variable, phi: f64, phi_prime: f64, rho: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::NonFinite("rho"));
        }
        Ok(Self {
            omega,
            sigma,
            phi: CircleLabel::new(phi)?,
            phi_prime: CircleLabel::new(phi_prime)?,
            rho,
        })
    }

    /// Real omega = |omega|, sigma = |sigma| with phi' = phi - delta.
    pub fn real(omega: f64, sigma: f64, phi: f64, delta: f64, rho: f64) -> Result<Self> {
        Self::new(Mp2Variable::real(omega)?, Mp2Variable::real(sigma)?, phi, phi - delta, rho)
    }

    pub fn theta1(&self) -> f64 {
        self.omega.arg()
    }

    pub fn theta2(&self) -> f64 {
        self.sigma.arg()
    }

    /// Delta = phi - phi'.
    pub fn delta(&self) -> f64 {
        self.phi.phi() - self.phi_prime.phi()
    }
}

fn sequences(p: &CirclePairParams, pa: Parity, pb: Parity, n: usize) -> [CoefficientSequence; 4] {
    let (w1, w2) = (p.omega.disk_weight(), p.sigma.disk_weight());
    [
        circle_stripped(p.omega.bargmann(&p.phi), w1, pa, n),
        circle_stripped(p.sigma.bargmann(&p.phi_prime), w2, pb, n),
        circle_stripped(p.omega.bargmann(&p.phi_prime), w1, pa, n),
        circle_stripped(p.sigma.bargmann(&p.phi), w2, pb, n),
    ]
}

fn lumped_sequences(p: &CirclePairParams, n: usize) -> [CoefficientSequence; 4] {
    let e = sequences(p, Parity::Even, Parity::Even, n);
    let o = sequences(p, Parity::Odd, Parity::Odd, n);
    [lumped(&e[0], &o[0]), lumped(&e[1], &o[1]), lumped(&e[2], &o[2]), lumped(&e[3], &o[3])]
}

/// Coefficient matrix of the projected pair, prefactor-stripped.
pub fn coefficient_matrix(p: &CirclePairParams, pair: SectorPair, n: usize) -> Result<CoefficientMatrix> {
    if n == 0 {
        return Err(Error::Truncation { min: 1, got: 0 });
    }
    let [a, bp, ap, b] = match pair.parities() {
        Some((pa, pb)) => sequences(p, pa, pb, n),
        None => lumped_sequences(p, n),
    };
    Ok(symmetrize((&a, &bp), (&ap, &b), p.rho))
}

/// Series oracle: sum of |c_nm|^2 with the tail bound of the truncation.
pub fn probability_series(p: &CirclePairParams, pair: SectorPair, n: usize) -> Result<SeriesValue<f64>> {
    let m = coefficient_matrix(p, pair, n)?;
    Ok(SeriesValue::new(m.norm_sqr(), n, m.tail_bound()))
}

struct Shape {
    a: f64,
    b: f64,
    beta: f64,
    beta_t: f64,
    gamma: f64,
    gamma_t: f64,
    w1: f64,
    w2: f64,
}

fn shape(omega: f64, sigma: f64, delta: f64) -> Shape {
    let a = omega * omega / 4.0;
    let b = sigma * sigma / 4.0;
    Shape {
        a,
        b,
        beta: a * delta.cos(),
        beta_t: a * delta.sin(),
        gamma: b * delta.cos(),
        gamma_t: b * delta.sin(),
        w1: 1.0 - omega * omega,
        w2: 1.0 - sigma * sigma,
    }
}

/// Disk prefactor 1/2 (1-|w|^2)^{p1} (1-|s|^2)^{p2} of a sector pair.
fn prefactor(s: &Shape, pair: SectorPair) -> f64 {
    let (pa, pb) = pair.parities().expect("sector pair");
    0.5 * s.w1.powf(2.0 * pa.sector_index()) * s.w2.powf(2.0 * pb.sector_index())
}

fn no_total(pair: SectorPair) -> Result<()> {
    if pair == SectorPair::Total {
        return Err(Error::UnsupportedPair(pair));
    }
    Ok(())
}

/// Corrected closed forms for P++, P+-, P--:
///   `P = prefactor { f(a) g(b) - cos(rho) [Re] + sin(rho) [Im] }`
/// with f, g in {cosh, sinh} by parity and `[Re]`, `[Im]` the parts of
/// f(beta + i beta~) g(gamma - i gamma~).
pub fn closed_form_p(p: &CirclePairParams, pair: SectorPair) -> Result<f64> {
    no_total(pair)?;
    let s = shape(p.omega.norm(), p.sigma.norm(), p.delta());
    let (ch_b, sh_b, c_bt, s_bt) = (s.beta.cosh(), s.beta.sinh(), s.beta_t.cos(), s.beta_t.sin());
    let (ch_g, sh_g, c_gt, s_gt) = (s.gamma.cosh(), s.gamma.sinh(), s.gamma_t.cos(), s.gamma_t.sin());
    let (diag, re, im) = match pair {
        SectorPair::PP => (
            s.a.cosh() * s.b.cosh(),
            ch_b * c_bt * ch_g * c_gt + sh_b * s_bt * sh_g * s_gt,
            sh_b * s_bt * ch_g * c_gt - sh_g * s_gt * ch_b * c_bt,
        ),
        SectorPair::PM => (
            s.a.cosh() * s.b.sinh(),
            ch_b * c_bt * sh_g * c_gt + sh_b * s_bt * ch_g * s_gt,
            sh_b * s_bt * sh_g * c_gt - ch_b * c_bt * ch_g * s_gt,
        ),
        SectorPair::MM => (
            s.a.sinh() * s.b.sinh(),
            sh_b * c_bt * sh_g * c_gt + ch_b * s_bt * ch_g * s_gt,
            ch_b * s_bt * sh_g * c_gt - sh_b * c_bt * ch_g * s_gt,
        ),
        SectorPair::Total => unreachable!(),
    };
    Ok(prefactor(&s, pair) * (diag - p.rho.cos() * re + p.rho.sin() * im))
}

/// The sector closed forms exactly as printed (first P++ term cosh(beta)
/// cosh(beta~), plus signs on the cos(rho) brackets, sin(gamma~) in the
/// last P-- factor). The undefined "sinh sigma sin sigma~" is read as gamma.
pub fn closed_form_p_as_printed(p: &CirclePairParams, pair: SectorPair) -> Result<f64> {
    no_total(pair)?;
    let s = shape(p.omega.norm(), p.sigma.norm(), p.delta());
    let (ch_b, sh_b, c_bt, s_bt) = (s.beta.cosh(), s.beta.sinh(), s.beta_t.cos(), s.beta_t.sin());
    let (ch_g, sh_g, c_gt, s_gt) = (s.gamma.cosh(), s.gamma.sinh(), s.gamma_t.cos(), s.gamma_t.sin());
    let (cr, sr) = (p.rho.cos(), p.rho.sin());
    let v = match pair {
        SectorPair::PP => {
            ch_b * s.beta_t.cosh()
                + cr * (ch_b * c_bt * ch_g * c_gt + sh_b * s_bt * sh_g * s_gt)
                + sr * (sh_b * s_bt * ch_g * c_gt - sh_g * s_gt * ch_b * c_bt)
        }
        SectorPair::PM => {
            s.a.cosh() * s.b.sinh()
                + (ch_b * c_bt * sh_g * c_gt + sh_b * s_bt * ch_g * s_gt) * cr
                + (ch_b * c_bt * ch_g * s_gt - sh_b * s_bt * sh_g * c_gt) * sr
        }
        SectorPair::MM => {
            s.a.sinh() * s.b.sinh()
                + (sh_b * c_bt * sh_g * c_gt + ch_b * s_bt * ch_g * s_gt) * cr
                + (sh_b * c_bt * ch_g * s_gt - ch_b * s_bt * sh_g * s_gt) * sr
        }
        SectorPair::Total => unreachable!(),
    };
    Ok(prefactor(&s, pair) * v)
}

fn total_terms(p: &CirclePairParams, n: usize, printed: bool) -> f64 {
    let (r1, r2) = (p.omega.norm(), p.sigma.norm());
    let (t1, t2) = (p.theta1(), p.theta2());
    let (f, fp) = (p.phi.phi(), p.phi_prime.phi());
    let (s1, s2) = ((1.0 - r1 * r1).sqrt(), (1.0 - r2 * r2).sqrt());
    let w2 = s1 * s2;
    let mut acc = NeumaierSum::new();
    for i in 0..n as u64 {
        let x = s1 * r1 / (2.0 * ((2 * i + 1) as f64).sqrt());
        let ri = power_term_log(Complex64::new(r1, 0.0), 2 * i).norm_sqr();
        for j in 0..n as u64 {
            let y = s2 * r2 / (2.0 * ((2 * j + 1) as f64).sqrt());
            let rj = power_term_log(Complex64::new(r2, 0.0), 2 * j).norm_sqr();
            let d1 = (1.0 + 2.0 * x * (t1 + f).cos() + x * x) * (1.0 + 2.0 * y * (t2 + fp).cos() + y * y);
            let d2 = (1.0 + 2.0 * x * (t1 + fp).cos() + x * x) * (1.0 + 2.0 * y * (t2 + f).cos() + y * y);
            let xy = x * y;
            let a = 1.0 + x * (t1 + f).cos() + y * (t2 + f).cos() + xy * (t1 - t2).cos();
            let c = x * (t1 + f).sin() - y * (t2 + f).sin() + xy * (t1 - t2).sin();
            let d = -x * (t1 + fp).sin() + y * (t2 + fp).sin() + xy * (t2 - t1).sin();
            let nm = i as f64 - j as f64;
            let bracket = if printed {
                let b = 1.0 - x * (t1 + fp).cos() + y * (t2 + fp).cos() + xy * (t2 - t1).cos();
                d1 + d2 + (p.rho + (fp - f) * nm).cos() * (a * b - c * d)
            } else {
                let b = 1.0 + x * (t1 + fp).cos() + y * (t2 + fp).cos() + xy * (t1 - t2).cos();
                let psi = p.rho + 2.0 * (f - fp) * nm;
                d1 + d2 - 2.0 * psi.cos() * (a * b - c * d) + 2.0 * psi.sin() * (a * d + b * c)
            };
            acc.add(ri * rj * bracket);
        }
    }
    0.25 * w2 * acc.value()
}

/// Full (even + odd) probability via the polar A, B, C, D decomposition,
/// corrected: phase rho + 2 Delta (n - m), cross term -2 cos(psi)(AB - CD)
/// + 2 sin(psi)(AD + BC), and B with a plus sign on its first term.
pub fn closed_form_total(p: &CirclePairParams, n: usize) -> f64 {
    total_terms(p, n, false)
}

/// The A, B, C, D total as printed.
pub fn closed_form_total_as_printed(p: &CirclePairParams, n: usize) -> f64 {
    total_terms(p, n, true)
}

fn diag_factor(pair: SectorPair, a: f64, b: f64) -> f64 {
    match pair {
        SectorPair::PP => a.cosh() * b.cosh(),
        SectorPair::PM => a.cosh() * b.sinh(),
        _ => a.sinh() * b.sinh(),
    }
}

/// Delta -> 0: prefactor f(|w|^2/4) g(|s|^2/4) (1 - cos rho).
pub fn limit_coincident(pair: SectorPair, omega: Mp2Variable, sigma: Mp2Variable, rho: f64) -> Result<f64> {
    no_total(pair)?;
    let s = shape(omega.norm(), sigma.norm(), 0.0);
    Ok(prefactor(&s, pair) * diag_factor(pair, s.a, s.b) * (1.0 - rho.cos()))
}

/// Delta -> 0 as printed; P-- carries the (1/2, 3/2) disk powers.
pub fn limit_coincident_as_printed(pair: SectorPair, omega: Mp2Variable, sigma: Mp2Variable, rho: f64) -> Result<f64> {
    no_total(pair)?;
    let s = shape(omega.norm(), sigma.norm(), 0.0);
    let pre = match pair {
        SectorPair::MM => prefactor(&s, SectorPair::PM),
        _ => prefactor(&s, pair),
    };
    Ok(pre * diag_factor(pair, s.a, s.b) * (1.0 - rho.cos()))
}

fn orthogonal(pair: SectorPair, omega: Mp2Variable, sigma: Mp2Variable, rho: f64, sign: f64) -> Result<f64> {
    no_total(pair)?;
    let s = shape(omega.norm(), sigma.norm(), 0.0);
    let cross = match pair {
        SectorPair::PP => s.a.cos() * s.b.cos() * rho.cos(),
        SectorPair::PM => s.a.cos() * s.b.sin() * rho.sin(),
        _ => s.a.sin() * s.b.sin() * rho.cos(),
    };
    Ok(prefactor(&s, pair) * (diag_factor(pair, s.a, s.b) + sign * cross))
}

/// Delta -> pi/2: prefactor { f g - cos a cos b cos rho } (PP),
/// { f g - cos a sin b sin rho } (PM), { f g - sin a sin b cos rho } (MM).
pub fn limit_orthogonal(pair: SectorPair, omega: Mp2Variable, sigma: Mp2Variable, rho: f64) -> Result<f64> {
    orthogonal(pair, omega, sigma, rho, -1.0)
}

/// Delta -> pi/2 as printed, with plus signs on the cross terms.
pub fn limit_orthogonal_as_printed(pair: SectorPair, omega: Mp2Variable, sigma: Mp2Variable, rho: f64) -> Result<f64> {
    orthogonal(pair, omega, sigma, rho, 1.0)
}

fn degenerate(pair: SectorPair, omega: Mp2Variable, delta: f64, rho: f64, sign: f64) -> Result<f64> {
    no_total(pair)?;
    let s = shape(omega.norm(), omega.norm(), delta);
    let (cr, sr) = (rho.cos(), rho.sin());
    let v = match pair {
        SectorPair::PP => s.a.cosh().powi(2) + sign * cr * (s.beta.cosh().powi(2) - s.beta_t.sin().powi(2)),
        SectorPair::PM => {
            s.a.cosh() * s.a.sinh()
                + sign * (s.beta.cosh() * s.beta.sinh() * cr + s.beta_t.cos() * s.beta_t.sin() * sr)
        }
        _ => s.a.sinh().powi(2) + sign * (s.beta.sinh().powi(2) + s.beta_t.sin().powi(2)) * cr,
    };
    Ok(prefactor(&s, pair) * v)
}

/// omega -> sigma limits of the sector closed forms.
pub fn limit_degenerate(pair: SectorPair, omega: Mp2Variable, delta: f64, rho: f64) -> Result<f64> {
    degenerate(pair, omega, delta, rho, -1.0)
}

/// omega -> sigma limits as printed (plus signs on the cos rho, sin rho terms).
pub fn limit_degenerate_as_printed(pair: SectorPair, omega: Mp2Variable, delta: f64, rho: f64) -> Result<f64> {
    degenerate(pair, omega, delta, rho, 1.0)
}

/// The crossed P+- display for a single disk variable as printed:
/// 1/2 (1-|w|^2)^2 { cosh sinh + cosh(b)sinh(b) cos rho + cos(b~) sin(|s|^2/4 sin D) sin rho }.
pub fn crossed_pm_as_printed(omega: Mp2Variable, sigma: Mp2Variable, delta: f64, rho: f64) -> f64 {
    let s = shape(omega.norm(), sigma.norm(), delta);
    0.5 * s.w1 * s.w1
        * (s.a.cosh() * s.a.sinh()
            + s.beta.cosh() * s.beta.sinh() * rho.cos()
            + s.beta_t.cos() * s.gamma_t.sin() * rho.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pp(o: f64, s: f64, d: f64, r: f64) -> CirclePairParams {
        CirclePairParams::real(o, s, 0.3, d, r).unwrap()
    }

    #[test]
    fn origin_coefficients() {
        let m = coefficient_matrix(&pp(0.0, 0.0, 0.0, PI), SectorPair::PP, 4).unwrap();
        assert!((m.get(0, 0).re - 1.0).abs() < 1e-15);
        assert!(m.entries()[1..].iter().all(|c| c.norm() == 0.0));
        let m = coefficient_matrix(&pp(0.0, 0.0, 0.0, 0.0), SectorPair::PP, 4).unwrap();
        assert!(m.get(0, 0).norm() < 1e-16);
        let m = coefficient_matrix(&pp(0.0, 0.0, 0.4, 1.0), SectorPair::MM, 4).unwrap();
        assert!(m.entries().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn zero_phase_coincident_cancels() {
        let m = coefficient_matrix(&pp(0.5, 0.5, 0.0, 0.0), SectorPair::PP, 20).unwrap();
        assert!(m.entries().iter().all(|c| c.norm() < 1e-16));
    }

    #[test]
    fn closed_forms_match_series() {
        for &(o, s) in &[(0.1, 0.5), (0.5, 0.5), (0.9, 0.3), (0.7, 0.9)] {
            for &d in &[0.0, 0.3, PI / 4.0, PI / 2.0, 2.5, -1.0] {
                for &r in &[0.0, 0.7, PI / 2.0, PI, 4.0] {
                    let p = pp(o, s, d, r);
                    for pair in SectorPair::SECTORS {
                        let ser = probability_series(&p, pair, 40).unwrap();
                        let cf = closed_form_p(&p, pair).unwrap();
                        assert!((ser.value - cf).abs() < 1e-12, "{pair} {o} {s} {d} {r}: {} vs {cf}", ser.value);
                    }
                }
            }
        }
    }

    #[test]
    fn total_closed_form_matches_series() {
        let om = Mp2Variable::from_polar(0.6, 0.8).unwrap();
        let si = Mp2Variable::from_polar(0.45, -1.9).unwrap();
        for &(f, fp, r) in &[(0.3, 1.4, 0.0), (0.0, 0.0, 2.0), (2.0, -0.7, PI), (1.0, 1.0 + PI / 2.0, 0.4)] {
            let p = CirclePairParams::new(om, si, f, fp, r).unwrap();
            let ser = probability_series(&p, SectorPair::Total, 40).unwrap().value;
            let cf = closed_form_total(&p, 40);
            assert!((ser - cf).abs() < 1e-12, "{ser} vs {cf}");
        }
    }

    #[test]
    fn limits_match_general_form() {
        let (o, s) = (Mp2Variable::real(0.6).unwrap(), Mp2Variable::real(0.35).unwrap());
        for pair in SectorPair::SECTORS {
            for &r in &[0.0, 1.0, PI] {
                let c = closed_form_p(&pp(0.6, 0.35, 0.0, r), pair).unwrap();
                assert!((c - limit_coincident(pair, o, s, r).unwrap()).abs() < 1e-15);
                let c = closed_form_p(&pp(0.6, 0.35, PI / 2.0, r), pair).unwrap();
                assert!((c - limit_orthogonal(pair, o, s, r).unwrap()).abs() < 1e-14);
                let c = closed_form_p(&pp(0.6, 0.6, 0.8, r), pair).unwrap();
                assert!((c - limit_degenerate(pair, o, 0.8, r).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn limit_examples() {
        let z = Mp2Variable::real(0.0).unwrap();
        assert_eq!(limit_coincident(SectorPair::PP, z, z, 0.0).unwrap(), 0.0);
        assert!((limit_coincident(SectorPair::PP, z, z, PI).unwrap() - 1.0).abs() < 1e-15);
        let h = Mp2Variable::real(0.5).unwrap();
        let v = limit_orthogonal(SectorPair::PM, h, h, 0.0).unwrap();
        assert!((v - 0.5 * 0.75f64.powi(2) * 0.0625f64.cosh() * 0.0625f64.sinh()).abs() < 1e-15);
        assert!((v - 0.01763).abs() < 1e-4);
        let v = limit_orthogonal(SectorPair::PP, h, h, PI / 2.0).unwrap();
        assert!((v - 0.5 * 0.75 * 0.0625f64.cosh().powi(2)).abs() < 1e-15);
        assert_eq!(limit_degenerate(SectorPair::MM, z, 0.4, 1.0).unwrap(), 0.0);
        assert!(limit_degenerate(SectorPair::Total, z, 0.0, 0.0).is_err());
        assert!(closed_form_p(&pp(0.1, 0.1, 0.0, 0.0), SectorPair::Total).is_err());
    }

    #[test]
    fn printed_forms_differ_from_oracle() {
        let p = pp(0.5, 0.5, 0.9, 0.6);
        for pair in SectorPair::SECTORS {
            let ser = probability_series(&p, pair, 40).unwrap().value;
            assert!((closed_form_p_as_printed(&p, pair).unwrap() - ser).abs() > 1e-6, "{pair}");
        }
        let t = closed_form_total_as_printed(&p, 40);
        assert!((t - probability_series(&p, SectorPair::Total, 40).unwrap().value).abs() > 1e-6);
    }
}
