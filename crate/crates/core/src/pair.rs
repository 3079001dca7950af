//! Sector pairs and the symmetrized coefficient matrix of an entangled pair.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::compensated_sum;
use crate::states::{CoefficientSequence, Parity};

/// Which sectors the two halves of the pair are projected onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorPair {
    PP,
    PM,
    MM,
    Total,
}

impl SectorPair {
    pub const SECTORS: [SectorPair; 3] = [SectorPair::PP, SectorPair::PM, SectorPair::MM];

    /// Parities of the first and second state; None for Total.
    pub fn parities(self) -> Option<(Parity, Parity)> {
        match self {
            SectorPair::PP => Some((Parity::Even, Parity::Even)),
            SectorPair::PM => Some((Parity::Even, Parity::Odd)),
            SectorPair::MM => Some((Parity::Odd, Parity::Odd)),
            SectorPair::Total => None,
        }
    }

    /// Whether any half of the pair involves the odd sector.
    pub fn has_odd(self) -> bool {
        !matches!(self, SectorPair::PP)
    }

    pub fn name(self) -> &'static str {
        match self {
            SectorPair::PP => "pp",
            SectorPair::PM => "pm",
            SectorPair::MM => "mm",
            SectorPair::Total => "total",
        }
    }
}

impl fmt::Display for SectorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SectorPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pp" | "++" => Ok(SectorPair::PP),
            "pm" | "+-" => Ok(SectorPair::PM),
            "mm" | "--" => Ok(SectorPair::MM),
            "total" => Ok(SectorPair::Total),
            other => Err(Error::Invalid(format!("unknown sector pair '{other}'"))),
        }
    }
}

/// Probability convention: closed-form prefactors stripped, or the full
/// per-state (2 pi) factors restored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Stripped,
    Full,
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stripped" => Ok(Convention::Stripped),
            "full" => Ok(Convention::Full),
            other => Err(Error::Invalid(format!("unknown convention '{other}'"))),
        }
    }
}

/// Dense coefficient matrix c_nm of a projected pair, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
    tail_bound: f64,
}

impl CoefficientMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[n * self.cols + m]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Bound on the sum of |c_nm|^2 over discarded (n, m).
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Sum of |c_nm|^2.
    pub fn norm_sqr(&self) -> f64 {
        compensated_sum(self.entries.iter().map(|c| c.norm_sqr()))
    }

    /// Per-row marginals sum_m |c_nm|^2.
    pub fn row_marginals(&self) -> Vec<f64> {
        self.entries
            .chunks(self.cols)
            .map(|row| compensated_sum(row.iter().map(|c| c.norm_sqr())))
            .collect()
    }
}

/// Discarded mass of the outer-product a_n b_m outside the retained block.
fn product_tail(a: &CoefficientSequence, b: &CoefficientSequence) -> f64 {
    let (sa, sb) = (a.norm_sqr(), b.norm_sqr());
    let (ta, tb) = (a.tail_bound(), b.tail_bound());
    ta * (sb + tb) + sa * tb
}

/// c_nm = 1/2 [ conj(a_n) conj(b'_m) - e^{i rho} conj(a'_n) conj(b_m) ]
/// where (a, b') are the direct projections and (a', b) the exchanged ones.
/// The minus sign makes the coincident-label amplitude carry (1 - e^{i rho}).
pub fn symmetrize(
    direct: (&CoefficientSequence, &CoefficientSequence),
    exchanged: (&CoefficientSequence, &CoefficientSequence),
    rho: f64,
) -> CoefficientMatrix {
    let (a, bp) = direct;
    let (ap, b) = exchanged;
    let rows = a.len().min(ap.len());
    let cols = bp.len().min(b.len());
    let phase = Complex64::from_polar(1.0, rho);
    let mut entries = Vec::with_capacity(rows * cols);
    for n in 0..rows {
        let (x1, x2) = (a.terms()[n].conj(), ap.terms()[n].conj() * phase);
        for m in 0..cols {
            let t1 = x1 * bp.terms()[m].conj();
            let t2 = x2 * b.terms()[m].conj();
            entries.push(0.5 * (t1 - t2));
        }
    }
    // |c|^2 <= (|t1|^2 + |t2|^2) / 2
    let tail_bound = 0.5 * (product_tail(a, bp) + product_tail(ap, b));
    CoefficientMatrix { rows, cols, entries, tail_bound }
}

/// Lumped total-projection coefficients L_j = E_j + O_j, pairing the j-th
/// even and odd terms the way the full projected wavefunction groups them.
pub fn lumped(even: &CoefficientSequence, odd: &CoefficientSequence) -> CoefficientSequence {
    let terms = even.terms().iter().zip(odd.terms()).map(|(e, o)| e + o).collect();
    // |e + o|^2 <= 2(|e|^2 + |o|^2)
    CoefficientSequence::new(Parity::Even, terms, 2.0 * (even.tail_bound() + odd.tail_bound()))
}

/// Least-squares slope of `-ln(values[n])` against n over n in [lo, hi].
pub fn fit_decay_exponent(values: &[f64], lo: usize, hi: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (lo..=hi.min(values.len() - 1)).map(|n| (n as f64, -values[n].ln())).collect();
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / k, pts.iter().map(|p| p.1).sum::<f64>() / k);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> CoefficientSequence {
        CoefficientSequence::new(Parity::Even, v.iter().map(|&x| Complex64::new(x, 0.0)).collect(), 0.0)
    }

    #[test]
    fn parse_pairs() {
        assert_eq!("PM".parse::<SectorPair>().unwrap(), SectorPair::PM);
        assert_eq!("--".parse::<SectorPair>().unwrap(), SectorPair::MM);
        assert!("xx".parse::<SectorPair>().is_err());
        assert_eq!(SectorPair::Total.parities(), None);
    }

    #[test]
    fn symmetrize_cancels_identical_terms_at_zero_phase() {
        let a = seq(&[1.0, 0.3]);
        let m = symmetrize((&a, &a), (&a, &a), 0.0);
        assert!(m.entries().iter().all(|c| c.norm() < 1e-16));
        let m = symmetrize((&a, &a), (&a, &a), std::f64::consts::PI);
        assert!((m.get(0, 0).re - 1.0).abs() < 1e-15);
        assert!((m.get(1, 0).re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn decay_fit_recovers_slope() {
        let v: Vec<f64> = (0..10).map(|n| (-3.0 * n as f64 - 1.0).exp()).collect();
        assert!((fit_decay_exponent(&v, 2, 8) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn marginals_sum_to_norm() {
        let a = seq(&[1.0, 0.5, 0.25]);
        let b = seq(&[0.2, 0.1, 0.0]);
        let m = symmetrize((&a, &b), (&b, &a), 1.0);
        let total: f64 = m.row_marginals().iter().sum();
        assert!((total - m.norm_sqr()).abs() < 1e-15);
    }
}
