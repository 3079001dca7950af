//! Reconciliation report: every series oracle against the closed forms and
//! limits, corrected and as displayed.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::cat::{density_matrix_cat, density_matrix_mp2, purity, DEFAULT_FOCK_DIM};
use crate::circle::{self, CirclePairParams};
use crate::coset::{self, CosetPairParams};
use crate::cylinder::{self, cylinder_nome, CylinderPairParams};
use crate::error::Result;
use crate::numerics::{theta2, theta3};
use crate::pair::SectorPair;
use crate::states::{
    cat_projection, circle_stripped, coherent_projection, coset_lumped_norm, coset_lumped_norm_as_printed, CircleLabel,
    CosetLabel, Mp2Variable, Parity,
};

/// Independent high-precision values at q = e^{-8}.
pub const THETA3_REFERENCE: f64 = 1.0006709252558304;
pub const THETA2_REFERENCE: f64 = 0.27067059693318487;

/// Offset used for numerical limits of the general routine.
pub const LIMIT_OFFSET: f64 = 1e-6;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Match,
    CorrectedFormMatch,
    PaperFormMismatch,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub id: String,
    pub location: String,
    pub status: Status,
    pub must_match: bool,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Formula and oracle values at the worst sample point.
    pub formula_value: Option<f64>,
    pub reference_value: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tolerance: f64,
    pub truncation: usize,
    pub tool_version: String,
    pub comparisons: Vec<Comparison>,
    pub must_match_failures: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.must_match_failures == 0
    }

    pub fn get(&self, id: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Running worst case of |formula - reference| against an allowance.
#[derive(Debug, Clone, Copy)]
struct Tracker {
    max_dev: f64,
    ok: bool,
    worst: Option<(f64, f64)>,
    worst_excess: f64,
}

impl Tracker {
    fn new() -> Self {
        Self { max_dev: 0.0, ok: true, worst: None, worst_excess: f64::NEG_INFINITY }
    }

    fn add(&mut self, formula: f64, reference: f64, allowed: f64) {
        let d = (formula - reference).abs();
        let excess = if d.is_nan() { f64::INFINITY } else { d - allowed };
        self.max_dev = self.max_dev.max(if d.is_nan() { f64::INFINITY } else { d });
        if excess > self.worst_excess {
            self.worst_excess = excess;
            self.worst = Some((formula, reference));
        }
        if !(d <= allowed) {
            self.ok = false;
        }
    }
}

struct Builder {
    tol: f64,
    out: Vec<Comparison>,
}

impl Builder {
    fn push(&mut self, id: &str, location: &str, declared: Status, must: bool, t: Tracker, note: &str) {
        let status = match (must, t.ok) {
            (true, true) => declared,
            (true, false) => Status::Failed,
            (false, true) => Status::Match,
            (false, false) => Status::PaperFormMismatch,
        };
        self.out.push(Comparison {
            id: id.into(),
            location: location.into(),
            status,
            must_match: must,
            passed: t.ok,
            max_deviation: t.max_dev,
            tolerance: self.tol,
            formula_value: t.worst.map(|w| w.0),
            reference_value: t.worst.map(|w| w.1),
            note: note.into(),
        });
    }
}

const RADII: [f64; 3] = [0.1, 0.5, 0.9];
const DELTAS: [f64; 3] = [0.0, PI / 4.0, PI / 2.0];
const RHOS: [f64; 3] = [0.0, PI / 2.0, PI];
const LIMIT_RHOS: [f64; 4] = [0.0, PI / 2.0, PI, 2.3];
const PHI: f64 = 0.3;

fn disk(r: f64) -> Mp2Variable {
    Mp2Variable::real(r).expect("sample radius inside the disk")
}

fn circle_series(o: f64, s: f64, delta: f64, rho: f64, pair: SectorPair, n: usize) -> Result<(f64, f64)> {
    let v = circle::probability_series(&CirclePairParams::real(o, s, PHI, delta, rho)?, pair, n)?;
    Ok((v.value, v.tail_bound))
}

/// The 27-point circle grid.
fn circle_grid() -> impl Iterator<Item = (f64, f64, f64, f64)> {
    RADII.into_iter().flat_map(|o| {
        RADII.into_iter().flat_map(move |s| DELTAS.into_iter().flat_map(move |d| RHOS.into_iter().map(move |r| (o, s, d, r))))
    })
}

fn disk_pairs() -> impl Iterator<Item = (f64, f64, f64)> {
    RADII.into_iter().flat_map(|o| RADII.into_iter().flat_map(move |s| LIMIT_RHOS.into_iter().map(move |r| (o, s, r))))
}

fn circle_section(b: &mut Builder, n: usize) -> Result<()> {
    let tol = b.tol;
    let corrected_notes = [
        (SectorPair::PP, "first term restored to cosh(|w|^2/4) cosh(|s|^2/4); minus sign on the cos(rho) bracket"),
        (SectorPair::PM, "minus sign on the cos(rho) bracket; sin(rho) bracket order reversed"),
        (SectorPair::MM, "minus sign on the cos(rho) bracket; last factor sin(beta~) in place of sin(gamma~)"),
    ];
    for (pair, note) in corrected_notes {
        let (mut t, mut printed) = (Tracker::new(), Tracker::new());
        for (o, s, d, r) in circle_grid() {
            let (v, tail) = circle_series(o, s, d, r, pair, n)?;
            let p = CirclePairParams::real(o, s, PHI, d, r)?;
            t.add(circle::closed_form_p(&p, pair)?, v, tol + tail);
            printed.add(circle::closed_form_p_as_printed(&p, pair)?, v, tol + tail);
        }
        let id = format!("circle.closed_form.{pair}");
        b.push(&id, "circle general sector closed form", Status::CorrectedFormMatch, true, t, note);
        let id = format!("circle.closed_form_printed.{pair}");
        b.push(&id, "circle general sector closed form, as displayed", Status::PaperFormMismatch, false, printed, "informational");
    }

    let (mut t, mut printed) = (Tracker::new(), Tracker::new());
    for (o, s, d, r) in circle_grid() {
        let (v, tail) = circle_series(o, s, d, r, SectorPair::Total, n)?;
        let p = CirclePairParams::real(o, s, PHI, d, r)?;
        t.add(circle::closed_form_total(&p, n), v, tol + tail);
        printed.add(circle::closed_form_total_as_printed(&p, n), v, tol + tail);
    }
    b.push(
        "circle.closed_form.total",
        "circle full probability, A B C D decomposition",
        Status::CorrectedFormMatch,
        true,
        t,
        "phase rho + 2 Delta (n - m); cross term -2 cos(psi)(AB - CD) + 2 sin(psi)(AD + BC); plus sign on the first term of B",
    );
    b.push("circle.closed_form_printed.total", "circle full probability, as displayed", Status::PaperFormMismatch, false, printed, "informational");

    // Delta -> 0
    for pair in SectorPair::SECTORS {
        let (mut t, mut printed) = (Tracker::new(), Tracker::new());
        for (o, s, r) in disk_pairs() {
            let lim = 0.5
                * (circle_series(o, s, LIMIT_OFFSET, r, pair, n)?.0 + circle_series(o, s, -LIMIT_OFFSET, r, pair, n)?.0);
            t.add(circle::limit_coincident(pair, disk(o), disk(s), r)?, lim, tol);
            printed.add(circle::limit_coincident_as_printed(pair, disk(o), disk(s), r)?, lim, tol);
        }
        let (declared, note) = match pair {
            SectorPair::MM => (Status::CorrectedFormMatch, "disk powers (3/2, 3/2) in place of the displayed (1/2, 3/2)"),
            _ => (Status::Match, ""),
        };
        b.push(&format!("circle.limit_coincident.{pair}"), "circle Delta -> 0 limit", declared, true, t, note);
        if pair == SectorPair::MM {
            b.push("circle.limit_coincident_printed.mm", "circle Delta -> 0 limit, as displayed", Status::PaperFormMismatch, false, printed, "informational");
        }
    }

    // Delta -> pi/2
    let mut printed = Tracker::new();
    for pair in SectorPair::SECTORS {
        let mut t = Tracker::new();
        for (o, s, r) in disk_pairs() {
            let lim = 0.5
                * (circle_series(o, s, PI / 2.0 + LIMIT_OFFSET, r, pair, n)?.0
                    + circle_series(o, s, PI / 2.0 - LIMIT_OFFSET, r, pair, n)?.0);
            t.add(circle::limit_orthogonal(pair, disk(o), disk(s), r)?, lim, tol);
            printed.add(circle::limit_orthogonal_as_printed(pair, disk(o), disk(s), r)?, lim, tol);
        }
        b.push(
            &format!("circle.limit_orthogonal.{pair}"),
            "circle Delta -> pi/2 limit",
            Status::CorrectedFormMatch,
            true,
            t,
            "minus sign on the rho-dependent term",
        );
    }
    b.push("circle.limit_orthogonal_printed", "circle Delta -> pi/2 limits, as displayed", Status::PaperFormMismatch, false, printed, "informational");

    // omega -> sigma
    let mut printed = Tracker::new();
    for pair in SectorPair::SECTORS {
        let mut t = Tracker::new();
        for o in RADII {
            for d in DELTAS {
                for r in LIMIT_RHOS {
                    let lim = 0.5
                        * (circle_series(o, o + LIMIT_OFFSET, d, r, pair, n)?.0
                            + circle_series(o, o - LIMIT_OFFSET, d, r, pair, n)?.0);
                    t.add(circle::limit_degenerate(pair, disk(o), d, r)?, lim, tol);
                    printed.add(circle::limit_degenerate_as_printed(pair, disk(o), d, r)?, lim, tol);
                }
            }
        }
        b.push(
            &format!("circle.limit_degenerate.{pair}"),
            "circle omega -> sigma limit",
            Status::CorrectedFormMatch,
            true,
            t,
            "minus sign on the rho-dependent terms",
        );
    }
    b.push("circle.limit_degenerate_printed", "circle omega -> sigma limits, as displayed", Status::PaperFormMismatch, false, printed, "informational");

    let mut t = Tracker::new();
    for (o, s, d, r) in circle_grid() {
        let (v, tail) = circle_series(o, s, d, r, SectorPair::PM, n)?;
        t.add(circle::crossed_pm_as_printed(disk(o), disk(s), d, r), v, tol + tail);
    }
    b.push(
        "circle.crossed_pm_printed",
        "circle crossed P+- display",
        Status::PaperFormMismatch,
        false,
        t,
        "informational; mixes one |s|^2 into an all-|w| expression and carries (1-|w|^2)^2",
    );

    // (1 - cos rho) factorization at Delta = 0
    let mut t = Tracker::new();
    for pair in SectorPair::SECTORS {
        for (o, s) in [(0.1, 0.5), (0.5, 0.5), (0.9, 0.3)] {
            let r0 = circle_series(o, s, 0.0, PI, pair, n)?.0 / 2.0;
            for r in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI] {
                let v = circle_series(o, s, 0.0, r, pair, n)?.0 / (1.0 - r.cos());
                t.add(v, r0, tol * r0.abs());
            }
        }
    }
    b.push("circle.separability", "circle Delta = 0 factorization (1 - cos rho)", Status::Match, true, t, "relative tolerance");
    Ok(())
}

fn cylinder_section(b: &mut Builder, n: usize) -> Result<()> {
    let tol = b.tol;
    let angles = [(0.0, 0.0), (0.4, 0.2), (PI / 2.0, 1.3), (2.0, PI)];

    for pair in [SectorPair::PM, SectorPair::MM] {
        let mut t = Tracker::new();
        for (d, r) in angles {
            t.add(cylinder::degenerate_limit_cyl(pair, 0.0, 0.0, d, r)?, cylinder::degenerate_presum_cyl(pair, 0.0, 0.0, d, r)?, tol);
        }
        b.push(
            &format!("cylinder.degenerate_theta.{pair}"),
            "cylinder omega -> sigma theta form vs its displayed pre-theta sum",
            Status::Match,
            true,
            t,
            if pair == SectorPair::PM { "the +1 inside cos(Delta + rho + 1) is carried verbatim" } else { "" },
        );
    }
    let mut t = Tracker::new();
    for (d, r) in angles {
        t.add(
            cylinder::degenerate_limit_cyl(SectorPair::PP, 0.0, 0.0, d, r)?,
            cylinder::degenerate_presum_cyl(SectorPair::PP, 0.0, 0.0, d, r)?,
            tol,
        );
    }
    b.push(
        "cylinder.degenerate_theta.pp",
        "cylinder omega -> sigma P++ theta form vs its displayed pre-theta sum",
        Status::PaperFormMismatch,
        false,
        t,
        "informational; the sum over n >= 0 gives (1 + theta3)/2 per unit (1 + cos rho), half the displayed [1 + theta3]",
    );

    let mut t = Tracker::new();
    for pair in [SectorPair::PP, SectorPair::MM] {
        for l in [0.0, 0.7] {
            for r in LIMIT_RHOS {
                let base = cylinder::degenerate_limit_cyl(pair, l, -l, 0.0, r)?;
                for d in DELTAS {
                    t.add(cylinder::degenerate_limit_cyl(pair, l, -l, d, r)?, base, 1e-10);
                }
            }
        }
    }
    b.push("cylinder.degenerate_angle_independence", "cylinder P++, P-- omega -> sigma limits", Status::Match, true, t, "Delta-independent to 1e-10");

    let mut t = Tracker::new();
    for (d, r) in angles {
        t.add(cylinder::degenerate_limit_cyl(SectorPair::PM, 0.0, 0.0, d, r)?, 0.0, tol);
    }
    b.push(
        "cylinder.kronecker_pm",
        "cylinder P+- omega -> sigma limit with the Kronecker selection delta_{2n,2m+1}",
        Status::PaperFormMismatch,
        false,
        t,
        "informational; read literally the selection empties the sum (reference 0), the display proceeds to ((1 + theta3)/e^6)(1 + cos(Delta + rho + 1))",
    );

    let mut t = Tracker::new();
    for pair in SectorPair::SECTORS {
        for (d, r) in angles {
            for o in [0.3, 0.6] {
                let label = crate::states::CylinderLabel::new(0.0, PHI)?;
                let label_p = crate::states::CylinderLabel::new(0.0, PHI - d)?;
                let v = cylinder::degenerate_series_cyl(pair, disk(o), label, label_p, r, n)?.value;
                t.add(cylinder::degenerate_limit_cyl(pair, 0.0, 0.0, d, r)?, v, tol);
            }
        }
    }
    b.push(
        "cylinder.degenerate_vs_series",
        "cylinder displayed omega -> sigma limits vs the series oracle at sigma = omega",
        Status::PaperFormMismatch,
        false,
        t,
        "informational; the displayed limits drop the omega dependence and the exchange structure of the series",
    );

    let mut t = Tracker::new();
    for pair in SectorPair::SECTORS {
        for o in RADII {
            for d in [0.0, 0.4, PI / 2.0] {
                let m = cylinder::coefficient_matrix_cyl(&CylinderPairParams::real(o, o, 0.0, 0.0, PHI, d, PI)?, pair, 11)?;
                let c00 = m.get(0, 0).norm_sqr();
                let mut k: f64 = 0.0;
                for i in 0..=10 {
                    for j in 0..=10 {
                        let bound = c00 * (-8.0 * (i * i + j * j) as f64).exp();
                        k = k.max(m.get(i, j).norm_sqr() / bound);
                    }
                }
                t.add(k.max(1.0), 1.0, 0.01);
            }
        }
    }
    b.push(
        "cylinder.gaussian_domination",
        "cylinder |c_nm|^2 <= K c_00 e^{-8(n^2 + m^2)}, n, m <= 10",
        Status::Match,
        true,
        t,
        "deviation is K - 1 with K the worst ratio",
    );
    Ok(())
}

fn coset_params(o: f64, s: f64, a: Complex64, phi: f64, ap: Complex64, phip: f64, rho: f64) -> Result<CosetPairParams> {
    CosetPairParams::new(disk(o), disk(s), CosetLabel::with_alpha(a, phi)?, CosetLabel::with_alpha(ap, phip)?, rho)
}

fn coset_samples() -> Result<Vec<CosetPairParams>> {
    let mut v = Vec::new();
    let labels = [
        (Complex64::new(0.0, 1.0), 0.0, Complex64::new(0.3, 0.2), 1.0),
        (Complex64::new(0.4, 0.5), 0.3, Complex64::new(-0.2, 1.5), 2.1),
        (Complex64::new(1.1, 0.05), 4.0, Complex64::new(0.0, 0.8), 0.2),
    ];
    for o in RADII {
        for s in [0.2, 0.8] {
            for &(a, phi, ap, phip) in &labels {
                for r in LIMIT_RHOS {
                    v.push(coset_params(o, s, a, phi, ap, phip, r)?);
                }
            }
        }
    }
    Ok(v)
}

fn coset_section(b: &mut Builder, n: usize) -> Result<()> {
    let tol = b.tol;
    let samples = coset_samples()?;
    let mut printed = Tracker::new();
    for pair in SectorPair::SECTORS {
        let mut t = Tracker::new();
        for p in &samples {
            let v = coset::probability_series_coset(p, pair, n)?;
            t.add(coset::closed_form_coset(p, pair)?, v.value, tol + v.tail_bound);
            printed.add(coset::closed_form_coset_as_printed(p, pair)?, v.value, tol + v.tail_bound);
        }
        let note = match pair {
            SectorPair::MM => "minus sign on the conjugate pair; prefactor (Z1 Z1')^{3/4} (Z2 Z2')^{3/4}",
            _ => "minus sign on the conjugate pair",
        };
        b.push(&format!("coset.closed_form.{pair}"), "coset sector closed form", Status::CorrectedFormMatch, true, t, note);
    }
    b.push(
        "coset.closed_form_printed",
        "coset sector closed forms, as displayed",
        Status::PaperFormMismatch,
        false,
        printed,
        "informational; plus sign on the conjugate pair, P-- prefactor Z1 Z2^{3/2}",
    );

    let mut t = Tracker::new();
    for pair in SectorPair::SECTORS {
        for p in &samples {
            let c = coset::cross_term_coset(p, pair)?;
            t.add(c.im / c.norm().max(1.0), 0.0, 1e-12);
        }
    }
    b.push("coset.cross_term_real", "coset e^{-i rho}(...) + e^{i rho}(...) combination", Status::Match, true, t, "imaginary residue");

    let (mut t, mut printed) = (Tracker::new(), Tracker::new());
    for p in &samples {
        let f = coset::z_factors(p);
        let direct = f.z1.conj() * f.z1p;
        let id = coset::overlap_identity(p.omega, &p.label, &p.label_prime);
        let id_p = coset::overlap_identity_as_printed(p.omega, &p.label, &p.label_prime);
        t.add((id - direct).norm(), 0.0, 1e-14);
        printed.add((id_p - direct).norm(), 0.0, 1e-14);
    }
    b.push(
        "coset.overlap_identity",
        "coset z1* z1' = |w|^2 e^{-i Delta} e^{i(alpha - alpha'*)/2}",
        Status::CorrectedFormMatch,
        true,
        t,
        "halved exponent, from z' = w e^{i(phi - alpha*/2)}",
    );
    b.push("coset.overlap_identity_printed", "coset z1* z1' identity, as displayed", Status::PaperFormMismatch, false, printed, "informational");

    let (mut t, mut printed) = (Tracker::new(), Tracker::new());
    for z in [Complex64::new(0.41, -0.27), Complex64::new(0.05, 0.6), Complex64::new(-0.8, 0.1), Complex64::new(0.9, 0.0)] {
        let w = 1.0 - z.norm_sqr();
        let even = circle_stripped(z, w, Parity::Even, n);
        let odd = circle_stripped(z, w, Parity::Odd, n);
        let direct: f64 = even.terms().iter().zip(odd.terms()).map(|(a, b)| (a + b).norm_sqr()).sum();
        t.add(coset_lumped_norm(z, n), direct, tol);
        printed.add(coset_lumped_norm_as_printed(z, n), direct, tol);
    }
    b.push(
        "coset.lumped_norm",
        "coset single-state squared norm",
        Status::CorrectedFormMatch,
        true,
        t,
        "cosh, sinh of |z'|^2/4; Z Re z' weight; sqrt(2n + 1) denominator",
    );
    b.push("coset.lumped_norm_printed", "coset single-state squared norm, as displayed", Status::PaperFormMismatch, false, printed, "informational");

    let mut t = Tracker::new();
    for p in samples.iter().step_by(5) {
        let shift = 0.37;
        let moved = |l: &CosetLabel| CosetLabel::new(l.alpha() + 2.0 * shift, l.phi() + shift, l.x(), l.y());
        let q = CosetPairParams::new(p.omega, p.sigma, moved(&p.label)?, moved(&p.label_prime)?, p.rho)?;
        for pair in SectorPair::SECTORS {
            let a = coset::probability_series_coset(p, pair, n)?.value;
            let c = coset::probability_series_coset(&q, pair, n)?.value;
            t.add(c, a, 1e-12);
        }
    }
    b.push("coset.single_variable", "coset probabilities depend on (phi, alpha) through z' only", Status::Match, true, t, "");
    Ok(())
}

fn cat_section(b: &mut Builder) -> Result<()> {
    let mut t = Tracker::new();
    for a in [0.5, 1.0, 2.0] {
        let alpha = Complex64::new(a, 0.0);
        let l = CircleLabel::new(0.7)?;
        let e = cat_projection(alpha, l, Parity::Even, 20)?;
        let o = cat_projection(alpha, l, Parity::Odd, 20)?;
        for (k, f) in coherent_projection(alpha, l, 40).iter().enumerate() {
            let part = if k % 2 == 0 { e.terms()[k / 2] } else { o.terms()[k / 2] };
            t.add((part - f).norm(), 0.0, 1e-12);
        }
    }
    b.push("cat.identity", "even + odd cat projections = coherent projection", Status::Match, true, t, "");

    let mut t = Tracker::new();
    let mut add = |rho: &crate::cat::DensityMatrix| {
        t.add(rho.trace().re, 1.0, 1e-10);
        t.add(purity(rho), 1.0, 1e-8);
    };
    for parity in [Parity::Even, Parity::Odd] {
        add(&density_matrix_cat(Complex64::new(1.0, 0.0), parity, DEFAULT_FOCK_DIM)?);
    }
    let o = disk(0.6);
    let l = CircleLabel::new(0.0)?;
    let e = crate::states::mp2_circle_projection(o, l, Parity::Even, DEFAULT_FOCK_DIM / 2)?;
    let od = crate::states::mp2_circle_projection(o, l, Parity::Odd, DEFAULT_FOCK_DIM / 2)?;
    for (a, bb, plus) in [(1.0, 0.0, true), (1.0, 1.0, true), (2.0, 0.5, false)] {
        add(&density_matrix_mp2(Complex64::new(a, 0.0), Complex64::new(bb, 0.0), &e, &od, plus)?);
    }
    b.push("cat.density_matrices", "cat and Mp(2) density matrices: unit trace, purity 1", Status::Match, true, t, "D = 32, renormalized");
    Ok(())
}

fn theta_section(b: &mut Builder) -> Result<()> {
    let q = cylinder_nome();
    let mut t = Tracker::new();
    t.add(theta3(q)?.value, THETA3_REFERENCE, b.tol);
    b.push("theta.theta3", "theta3(0, e^-8)", Status::Match, true, t, "reference from independent high-precision summation");
    let mut t = Tracker::new();
    t.add(theta2(q)?.value, THETA2_REFERENCE, b.tol);
    b.push(
        "theta.theta2",
        "theta2(0, e^-8)",
        Status::Match,
        true,
        t,
        "reference from independent high-precision summation; the quoted 0.27067057 is low by 3e-8",
    );
    Ok(())
}

/// Run every comparison at tolerance `tol` and truncation `n`.
pub fn verify_all(tol: f64, n: usize) -> Result<Report> {
    if !(tol > 0.0) {
        return Err(crate::Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    let mut b = Builder { tol, out: Vec::new() };
    theta_section(&mut b)?;
    circle_section(&mut b, n)?;
    cylinder_section(&mut b, n)?;
    coset_section(&mut b, n)?;
    cat_section(&mut b)?;
    let failures = b.out.iter().filter(|c| c.must_match && !c.passed).count();
    Ok(Report {
        tolerance: tol,
        truncation: n,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        comparisons: b.out,
        must_match_failures: failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_is_green() {
        let r = verify_all(DEFAULT_TOLERANCE, 40).unwrap();
        for c in &r.comparisons {
            assert!(!c.must_match || c.passed, "{} failed: {} > {}", c.id, c.max_deviation, c.tolerance);
        }
        assert!(r.passed());
    }

    #[test]
    fn documented_discrepancies_are_informational() {
        let r = verify_all(DEFAULT_TOLERANCE, 40).unwrap();
        let pp = r.get("circle.closed_form.pp").unwrap();
        assert_eq!(pp.status, Status::CorrectedFormMatch);
        assert!(!pp.note.is_empty());
        for id in ["cylinder.kronecker_pm", "circle.closed_form_printed.pp", "cylinder.degenerate_theta.pp"] {
            let c = r.get(id).unwrap();
            assert_eq!(c.status, Status::PaperFormMismatch, "{id}");
            assert!(!c.must_match);
            assert!(c.formula_value.is_some() && c.reference_value.is_some());
        }
        assert_eq!(r.get("theta.theta3").unwrap().status, Status::Match);
        assert_eq!(r.get("theta.theta2").unwrap().status, Status::Match);
    }

    #[test]
    fn impossible_tolerance_fails_must_entries() {
        let r = verify_all(1e-300, 40).unwrap();
        assert!(!r.passed());
        assert!(r.comparisons.iter().any(|c| c.status == Status::Failed));
        assert!(verify_all(0.0, 40).is_err());
    }
}
