//! Entangled pairs of Barut-Girardello cylinder states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, theta2, theta3, SeriesValue};
use crate::pair::{lumped, symmetrize, CoefficientMatrix, SectorPair};
use crate::states::{cylinder_variable, sector_terms, CoefficientSequence, CylinderLabel, Mp2Variable, Parity};

/// Largest |l + l'| accepted by the degenerate-limit sums.
pub const MAX_DEGENERATE_LSUM: f64 = 10.0;

const DEGENERATE_TERMS: usize = 64;

/// Nome of the theta values in the cylinder limits.
pub fn cylinder_nome() -> f64 {
    (-8f64).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderPairParams {
    pub omega: Mp2Variable,
    pub sigma: Mp2Variable,
    pub label: CylinderLabel,
    pub label_prime: CylinderLabel,
    pub rho: f64,
}

impl CylinderPairParams {
    pub fn new(omega: Mp2Variable, sigma: Mp2Variable, label: CylinderLabel, label_prime: CylinderLabel, rho: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::NonFinite("rho"));
        }
        Ok(Self { omega, sigma, label, label_prime, rho })
    }

    /// Real disk variables with labels (l, phi) and (l', phi - delta).
    pub fn real(omega: f64, sigma: f64, l: f64, l_prime: f64, phi: f64, delta: f64, rho: f64) -> Result<Self> {
        Self::new(
            Mp2Variable::real(omega)?,
            Mp2Variable::real(sigma)?,
            CylinderLabel::new(l, phi)?,
            CylinderLabel::new(l_prime, phi - delta)?,
            rho,
        )
    }

    pub fn delta(&self) -> f64 {
        self.label.phi() - self.label_prime.phi()
    }
}

/// Pair-level sector coefficients. The single-state weight e^{-k^2/2} on
/// Fock index k is multiplied by e^{-2j^2} on the sector index j, giving
/// e^{-4j^2} (even) and e^{-4j^2 - (2j + 1/2)} (odd) amplitudes.
fn pair_sequence(omega: Mp2Variable, label: &CylinderLabel, parity: Parity, n: usize) -> CoefficientSequence {
    let z = cylinder_variable(omega, label);
    let amp = omega.disk_weight().powf(parity.sector_index());
    sector_terms(z, amp, parity, n, |k| -0.5 * (k * k) as f64).weighted(|j| (-2.0 * (j * j) as f64).exp())
}

/// Pair-level amplitude weight on sector index j.
pub fn pair_weight(parity: Parity, j: usize) -> f64 {
    let j = j as f64;
    match parity {
        Parity::Even => (-4.0 * j * j).exp(),
        Parity::Odd => (-4.0 * j * j - (2.0 * j + 0.5)).exp(),
    }
}

fn sequences(p: &CylinderPairParams, pa: Parity, pb: Parity, n: usize) -> [CoefficientSequence; 4] {
    [
        pair_sequence(p.omega, &p.label, pa, n),
        pair_sequence(p.sigma, &p.label_prime, pb, n),
        pair_sequence(p.omega, &p.label_prime, pa, n),
        pair_sequence(p.sigma, &p.label, pb, n),
    ]
}

pub fn coefficient_matrix_cyl(p: &CylinderPairParams, pair: SectorPair, n: usize) -> Result<CoefficientMatrix> {
    if n == 0 {
        return Err(Error::Truncation { min: 1, got: 0 });
    }
    let [a, bp, ap, b] = match pair.parities() {
        Some((pa, pb)) => sequences(p, pa, pb, n),
        None => {
            let e = sequences(p, Parity::Even, Parity::Even, n);
            let o = sequences(p, Parity::Odd, Parity::Odd, n);
            [lumped(&e[0], &o[0]), lumped(&e[1], &o[1]), lumped(&e[2], &o[2]), lumped(&e[3], &o[3])]
        }
    };
    Ok(symmetrize((&a, &bp), (&ap, &b), p.rho))
}

pub fn probability_series_cyl(p: &CylinderPairParams, pair: SectorPair, n: usize) -> Result<SeriesValue<f64>> {
    let m = coefficient_matrix_cyl(p, pair, n)?;
    Ok(SeriesValue::new(m.norm_sqr(), n, m.tail_bound()))
}

fn check_lsum(l: f64, l_prime: f64) -> Result<f64> {
    let s = l + l_prime;
    if !s.is_finite() {
        return Err(Error::NonFinite("l + l'"));
    }
    if s.abs() > MAX_DEGENERATE_LSUM {
        return Err(Error::DegenerateSumDiverges(s.abs()));
    }
    Ok(s)
}

/// The exhibited pre-theta sums of the omega -> sigma limits, evaluated for any
/// l + l' = s:
///   PP: sum e^{-8n^2 + 4sn} (1 + cos rho)
///   PM: [1 + cos(Delta + rho + 1)] sum e^{-8(n^2 + 3/4)} 2 e^{4sn}
///   MM: [1 + cos 2rho] sum e^{-8(n^2 + n + 1/4)} e^{4s(n + 1/2)}
/// The "+1" inside the PM cosine is carried verbatim.
pub fn degenerate_presum_cyl(pair: SectorPair, l: f64, l_prime: f64, delta: f64, rho: f64) -> Result<f64> {
    let s = check_lsum(l, l_prime)?;
    let sum = |f: &dyn Fn(f64) -> f64| compensated_sum((0..DEGENERATE_TERMS).map(|n| f(n as f64).exp()));
    Ok(match pair {
        SectorPair::PP => sum(&|n| -8.0 * n * n + 4.0 * s * n) * (1.0 + rho.cos()),
        SectorPair::PM => {
            (1.0 + (delta + rho + 1.0).cos()) * sum(&|n| -8.0 * (n * n + 0.75) + 2f64.ln() + 4.0 * s * n)
        }
        SectorPair::MM => (1.0 + (2.0 * rho).cos()) * sum(&|n| -8.0 * (n * n + n + 0.25) + 4.0 * s * (n + 0.5)),
        SectorPair::Total => return Err(Error::UnsupportedPair(pair)),
    })
}

/// The omega -> sigma limits as displayed. For l + l' = 0 the theta forms
/// [1 + theta3](1 + cos rho), ((1 + theta3)/e^6)(1 + cos(Delta + rho + 1)) and
/// 1/2 theta2 (1 + cos 2rho); otherwise the pre-theta sums.
pub fn degenerate_limit_cyl(pair: SectorPair, l: f64, l_prime: f64, delta: f64, rho: f64) -> Result<f64> {
    let s = check_lsum(l, l_prime)?;
    if s != 0.0 {
        return degenerate_presum_cyl(pair, l, l_prime, delta, rho);
    }
    let q = cylinder_nome();
    Ok(match pair {
        SectorPair::PP => (1.0 + theta3(q)?.value) * (1.0 + rho.cos()),
        SectorPair::PM => (1.0 + theta3(q)?.value) * (-6f64).exp() * (1.0 + (delta + rho + 1.0).cos()),
        SectorPair::MM => 0.5 * theta2(q)?.value * (1.0 + (2.0 * rho).cos()),
        SectorPair::Total => return Err(Error::UnsupportedPair(pair)),
    })
}

/// The honest omega -> sigma limit: the series oracle evaluated at sigma = omega.
pub fn degenerate_series_cyl(
    pair: SectorPair,
    omega: Mp2Variable,
    label: CylinderLabel,
    label_prime: CylinderLabel,
    rho: f64,
    n: usize,
) -> Result<SeriesValue<f64>> {
    probability_series_cyl(&CylinderPairParams::new(omega, omega, label, label_prime, rho)?, pair, n)
}

/// Cylinder Bargmann variable magnitude |omega| e^{l}.
pub fn label_scale(omega: Mp2Variable, label: &CylinderLabel) -> f64 {
    cylinder_variable(omega, label).norm()
}
