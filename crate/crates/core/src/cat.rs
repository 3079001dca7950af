//! Schrodinger-cat reference computations: cat-projected pair probabilities,
//! cat and Mp(2) density matrices and purity.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, power_term_log, SeriesValue};
use crate::pair::{lumped, symmetrize, CoefficientMatrix, SectorPair};
use crate::states::{cat_stripped, CircleLabel, CoefficientSequence, Parity};

/// Default Fock truncation for density matrices.
pub const DEFAULT_FOCK_DIM: usize = 32;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatPairParams {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub phi: CircleLabel,
    pub phi_prime: CircleLabel,
    pub rho: f64,
}

impl CatPairParams {
    pub fn new(alpha: Complex64, beta: Complex64, phi: f64, phi_prime: f64, rho: f64) -> Result<Self> {
        for (v, name) in [(alpha.re, "alpha"), (alpha.im, "alpha"), (beta.re, "beta"), (beta.im, "beta"), (rho, "rho")] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(Self { alpha, beta, phi: CircleLabel::new(phi)?, phi_prime: CircleLabel::new(phi_prime)?, rho })
    }

    /// Real displacements with phi' = phi - delta.
    pub fn real(alpha: f64, beta: f64, phi: f64, delta: f64, rho: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0), phi, phi - delta, rho)
    }

    pub fn delta(&self) -> f64 {
        self.phi.phi() - self.phi_prime.phi()
    }
}

fn sequences(p: &CatPairParams, pa: Parity, pb: Parity, n: usize) -> [CoefficientSequence; 4] {
    [
        cat_stripped(p.alpha, &p.phi, pa, n),
        cat_stripped(p.beta, &p.phi_prime, pb, n),
        cat_stripped(p.alpha, &p.phi_prime, pa, n),
        cat_stripped(p.beta, &p.phi, pb, n),
    ]
}

/// Coefficient matrix with the cat sector families in place of the Mp(2)
/// ones, (2pi)^{-1} per state stripped.
pub fn coefficient_matrix_cat(p: &CatPairParams, pair: SectorPair, n: usize) -> Result<CoefficientMatrix> {
    if n == 0 {
        return Err(Error::Truncation { min: 1, got: 0 });
    }
    if pair.has_odd() && (p.alpha.norm() == 0.0 || p.beta.norm() == 0.0) {
        return Err(Error::NullOddCat);
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

pub fn cat_entangled_probability(p: &CatPairParams, pair: SectorPair, n: usize) -> Result<SeriesValue<f64>> {
    let m = coefficient_matrix_cat(p, pair, n)?;
    Ok(SeriesValue::new(m.norm_sqr(), n, m.tail_bound()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTag {
    Fock,
    Mp2Pair,
}

/// Density matrix over a truncated Fock basis, plus its 2x2 form in the
/// generating pair of states ({|alpha>, |-alpha>} or {|1/4>, |3/4>}).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    basis_tag: BasisTag,
    frame: [[Complex64; 2]; 2],
    raw_trace: f64,
}

fn trace(dim: usize, entries: &[Complex64]) -> Complex64 {
    (0..dim).map(|i| entries[i * dim + i]).sum()
}

impl DensityMatrix {
    /// Build from row-major Fock entries; checks Hermiticity and unit trace.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>, basis_tag: BasisTag, frame: [[Complex64; 2]; 2]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Invalid(format!("expected {} entries, got {}", dim * dim, entries.len())));
        }
        for i in 0..dim {
            for j in 0..dim {
                if (entries[i * dim + j] - entries[j * dim + i].conj()).norm() > HERMITIAN_TOL {
                    return Err(Error::Invalid(format!("entry ({i}, {j}) breaks Hermiticity")));
                }
            }
        }
        let t = trace(dim, &entries);
        if (t.re - 1.0).abs() > TRACE_TOL || t.im.abs() > TRACE_TOL {
            return Err(Error::Invalid(format!("trace {t} is not 1")));
        }
        Ok(Self { dim, entries, basis_tag, frame, raw_trace: t.re })
    }

    fn renormalized(dim: usize, mut entries: Vec<Complex64>, basis_tag: BasisTag, frame: [[Complex64; 2]; 2]) -> Self {
        let raw = trace(dim, &entries).re;
        entries.iter_mut().for_each(|e| *e /= raw);
        let ft = (frame[0][0] + frame[1][1]).re;
        let frame = frame.map(|row| row.map(|e| e / ft));
        Self { dim, entries, basis_tag, frame, raw_trace: raw }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn basis_tag(&self) -> BasisTag {
        self.basis_tag
    }

    /// Trace before renormalization.
    pub fn raw_trace(&self) -> f64 {
        self.raw_trace
    }

    pub fn trace(&self) -> Complex64 {
        trace(self.dim, &self.entries)
    }

    /// The matrix in the generating two-state frame.
    pub fn frame(&self) -> [[Complex64; 2]; 2] {
        self.frame
    }

    /// `|frame[0][1]|`, nonzero when the generating states interfere.
    pub fn frame_off_diagonal(&self) -> f64 {
        self.frame[0][1].norm()
    }

    /// Frobenius norm of the even-odd Fock blocks.
    pub fn off_sector_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if (i + j) % 2 == 1 {
                    s += self.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m = m.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        m
    }
}

fn coherent_fock(alpha: Complex64, d: usize) -> Vec<Complex64> {
    let pre = (-alpha.norm_sqr() / 2.0).exp();
    (0..d as u64).map(|k| power_term_log(2.0 * alpha, k).to_complex() * pre).collect()
}

fn outer(u: &[Complex64], v: &[Complex64], s: Complex64, out: &mut [Complex64]) {
    let d = u.len();
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] += s * u[i] * v[j].conj();
        }
    }
}

/// rho_{+-alpha} = [|a><a| + |-a><-a| +- (|-a><a| + |a><-a|)] / (2(1 +- e^{-2|a|^2})),
/// built from truncated coherent vectors and renormalized to unit trace.
pub fn density_matrix_cat(alpha: Complex64, parity: Parity, d: usize) -> Result<DensityMatrix> {
    if d < 4 {
        return Err(Error::Truncation { min: 4, got: d });
    }
    if parity == Parity::Odd && alpha.norm() == 0.0 {
        return Err(Error::NullOddCat);
    }
    let sign = if parity == Parity::Even { 1.0 } else { -1.0 };
    let overlap = (-2.0 * alpha.norm_sqr()).exp();
    let norm = Complex64::new(1.0 / (2.0 * (1.0 + sign * overlap)), 0.0);
    let (plus, minus) = (coherent_fock(alpha, d), coherent_fock(-alpha, d));
    let mut e = vec![Complex64::new(0.0, 0.0); d * d];
    outer(&plus, &plus, norm, &mut e);
    outer(&minus, &minus, norm, &mut e);
    outer(&minus, &plus, norm * sign, &mut e);
    outer(&plus, &minus, norm * sign, &mut e);
    let f = norm.re;
    let frame = [
        [Complex64::new(f, 0.0), Complex64::new(sign * f, 0.0)],
        [Complex64::new(sign * f, 0.0), Complex64::new(f, 0.0)],
    ];
    Ok(DensityMatrix::renormalized(d, e, BasisTag::Fock, frame))
}

fn unit(seq: &CoefficientSequence) -> Result<Vec<Complex64>> {
    let n = seq.norm_sqr().sqrt();
    if n == 0.0 {
        return Err(Error::Invalid(format!("{} sector state has zero norm", seq.parity())));
    }
    Ok(seq.terms().iter().map(|c| c / n).collect())
}

/// Density matrix of the generalized state [A|1/4> +- B|3/4>] / sqrt(|A|^2 +- |B|^2)
/// as displayed:
/// [|A|^2 |1/4><1/4| + |B|^2 |3/4><3/4| +- (B*A |3/4><1/4| + A*B |1/4><3/4|)] / (|A|^2 +- |B|^2).
/// The sector states are normalized and placed on Fock indices 2j, 2j+1;
/// the result is renormalized to unit trace (the minus branch is otherwise
/// off by (|A|^2 + |B|^2)/(|A|^2 - |B|^2)).
pub fn density_matrix_mp2(
    a: Complex64,
    b: Complex64,
    state_even: &CoefficientSequence,
    state_odd: &CoefficientSequence,
    plus: bool,
) -> Result<DensityMatrix> {
    let sign = if plus { 1.0 } else { -1.0 };
    let denom = a.norm_sqr() + sign * b.norm_sqr();
    if denom.abs() <= f64::EPSILON * (a.norm_sqr() + b.norm_sqr()).max(f64::MIN_POSITIVE) || denom == 0.0 {
        return Err(Error::DegenerateNormalization { sign: if plus { '+' } else { '-' } });
    }
    if state_even.parity() != Parity::Even || state_odd.parity() != Parity::Odd {
        return Err(Error::Invalid("expected an even and an odd sector state".into()));
    }
    let j = state_even.len().max(state_odd.len());
    let d = 2 * j;
    let mut e_vec = vec![Complex64::new(0.0, 0.0); d];
    let mut o_vec = vec![Complex64::new(0.0, 0.0); d];
    for (k, c) in unit(state_even)?.into_iter().enumerate() {
        e_vec[2 * k] = c;
    }
    for (k, c) in unit(state_odd)?.into_iter().enumerate() {
        o_vec[2 * k + 1] = c;
    }
    let inv = Complex64::new(1.0 / denom, 0.0);
    let mut m = vec![Complex64::new(0.0, 0.0); d * d];
    outer(&e_vec, &e_vec, inv * a.norm_sqr(), &mut m);
    outer(&o_vec, &o_vec, inv * b.norm_sqr(), &mut m);
    outer(&o_vec, &e_vec, inv * sign * b.conj() * a, &mut m);
    outer(&e_vec, &o_vec, inv * sign * a.conj() * b, &mut m);
    let frame = [
        [inv * a.norm_sqr(), inv * sign * a.conj() * b],
        [inv * sign * b.conj() * a, inv * b.norm_sqr()],
    ];
    Ok(DensityMatrix::renormalized(d, m, BasisTag::Mp2Pair, frame))
}

/// tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
pub fn purity(rho: &DensityMatrix) -> f64 {
    compensated_sum(rho.entries.iter().map(|c| c.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{cat_projection, coherent_projection, mp2_circle_projection, Mp2Variable};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mp2_states(r: f64, n: usize) -> (CoefficientSequence, CoefficientSequence) {
        let o = Mp2Variable::real(r).unwrap();
        let l = CircleLabel::new(0.0).unwrap();
        (
            mp2_circle_projection(o, l, Parity::Even, n).unwrap(),
            mp2_circle_projection(o, l, Parity::Odd, n).unwrap(),
        )
    }

    #[test]
    fn cat_pair_examples() {
        let p = CatPairParams::real(0.0, 0.0, 0.2, 0.0, PI).unwrap();
        assert!((cat_entangled_probability(&p, SectorPair::PP, 10).unwrap().value - 1.0).abs() < 1e-15);
        let p0 = CatPairParams::real(0.0, 0.0, 0.2, 0.0, 0.0).unwrap();
        assert!(cat_entangled_probability(&p0, SectorPair::PP, 10).unwrap().value < 1e-30);
        let q = CatPairParams::real(0.0, 1.0, 0.0, PI / 2.0, 0.0).unwrap();
        assert_eq!(cat_entangled_probability(&q, SectorPair::PM, 10), Err(Error::NullOddCat));
        assert_eq!(cat_entangled_probability(&q, SectorPair::Total, 10), Err(Error::NullOddCat));
    }

    #[test]
    fn cat_exceeds_mp2_at_sample_point() {
        let cat = cat_entangled_probability(&CatPairParams::real(1.0, 1.0, 0.0, PI / 2.0, 0.0).unwrap(), SectorPair::PM, 40)
            .unwrap()
            .value;
        // orthogonal rho = 0 value: 1/2 e^{-2} cosh(1) sinh(1)
        assert!((cat - 0.5 * (-2f64).exp() * 1f64.cosh() * 1f64.sinh()).abs() < 1e-14);
        let mp2 = crate::circle::probability_series(
            &crate::circle::CirclePairParams::real(0.5, 0.5, 0.0, PI / 2.0, 0.0).unwrap(),
            SectorPair::PM,
            40,
        )
        .unwrap()
        .value;
        assert!(cat > mp2, "{cat} vs {mp2}");
    }

    #[test]
    fn cat_identity() {
        for &a in &[0.5, 1.0, 2.0] {
            let alpha = c(a, 0.3 * a);
            let l = CircleLabel::new(0.7).unwrap();
            let e = cat_projection(alpha, l, Parity::Even, 20).unwrap();
            let o = cat_projection(alpha, l, Parity::Odd, 20).unwrap();
            let full = coherent_projection(alpha, l, 40);
            for (k, f) in full.iter().enumerate() {
                let part = if k % 2 == 0 { e.terms()[k / 2] } else { o.terms()[k / 2] };
                assert!((part - f).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cat_density_examples() {
        let r = density_matrix_cat(c(0.0, 0.0), Parity::Even, 8).unwrap();
        assert_eq!(r.get(0, 0), c(1.0, 0.0));
        assert!((0..8).all(|i| (0..8).all(|j| (i, j) == (0, 0) || r.get(i, j).norm() == 0.0)));
        let r = density_matrix_cat(c(1.0, 0.0), Parity::Even, 32).unwrap();
        assert!((purity(&r) - 1.0).abs() < 1e-8);
        assert!((r.trace().re - 1.0).abs() < 1e-10);
        let expect = 2.0 * (-1f64).exp() / (1.0 + (-2f64).exp());
        assert!((r.get(0, 0).re * r.raw_trace() - expect).abs() < 1e-14);
        assert!((expect - 0.648054).abs() < 1e-6);
        assert!(r.frame_off_diagonal() > 0.1);
        assert!(density_matrix_cat(c(0.0, 0.0), Parity::Odd, 8).is_err());
        assert!(density_matrix_cat(c(1.0, 0.0), Parity::Odd, 3).is_err());
    }

    #[test]
    fn mp2_density_examples() {
        let (e, o) = mp2_states(0.6, 16);
        let r = density_matrix_mp2(c(1.0, 0.0), c(0.0, 0.0), &e, &o, true).unwrap();
        assert_eq!(r.off_sector_norm(), 0.0);
        assert_eq!(r.frame_off_diagonal(), 0.0);
        assert!((purity(&r) - 1.0).abs() < 1e-12);
        let r = density_matrix_mp2(c(1.0, 0.0), c(1.0, 0.0), &e, &o, true).unwrap();
        assert!((r.frame()[0][1].re - 0.5).abs() < 1e-15);
        assert!((purity(&r) - 1.0).abs() < 1e-12);
        assert!(density_matrix_mp2(c(1.0, 0.0), c(1.0, 0.0), &e, &o, false).is_err());
        let r = density_matrix_mp2(c(2.0, 0.5), c(0.3, -1.0), &e, &o, false).unwrap();
        let (na, nb) = (c(2.0, 0.5).norm_sqr(), c(0.3, -1.0).norm_sqr());
        assert!((r.raw_trace() - (na + nb) / (na - nb)).abs() < 1e-12);
        assert!((purity(&r) - 1.0).abs() < 1e-12);
        assert!(r.max_hermitian_defect() < 1e-15);
    }

    #[test]
    fn mixed_qubit_purity() {
        let h = c(0.5, 0.0);
        let z = c(0.0, 0.0);
        let r = DensityMatrix::from_entries(2, vec![h, z, z, h], BasisTag::Fock, [[h, z], [z, h]]).unwrap();
        assert!((purity(&r) - 0.5).abs() < 1e-15);
        assert!(DensityMatrix::from_entries(2, vec![h, c(0.1, 0.0), z, h], BasisTag::Fock, [[h, z], [z, h]]).is_err());
    }
}
