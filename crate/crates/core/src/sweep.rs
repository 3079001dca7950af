//! Parameter sweeps over two named axes, grid serialization and parsing.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cat::{cat_entangled_probability, CatPairParams};
use crate::circle::{closed_form_p, closed_form_total, probability_series, CirclePairParams};
use crate::coset::{closed_form_coset, probability_series_coset, CosetPairParams};
use crate::cylinder::{degenerate_limit_cyl, probability_series_cyl, CylinderPairParams};
use crate::error::{Error, Result};
use crate::numerics::DEFAULT_ORDER;
use crate::pair::{Convention, SectorPair};
use crate::states::{CosetLabel, CylinderLabel, Mp2Variable, IM_ALPHA_GUARD, MAX_CYLINDER_L};

pub const DEFAULT_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Circle,
    Cylinder,
    Coset,
    Cat,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Circle => "circle",
            Family::Cylinder => "cylinder",
            Family::Coset => "coset",
            Family::Cat => "cat",
        }
    }

    /// Parameter names accepted by the family.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Family::Circle => &["omega", "sigma", "omega_arg", "sigma_arg", "phi", "phi_prime", "delta", "rho"],
            Family::Cylinder => {
                &["omega", "sigma", "omega_arg", "sigma_arg", "phi", "phi_prime", "delta", "rho", "l", "l_prime"]
            }
            Family::Coset => &[
                "omega", "sigma", "omega_arg", "sigma_arg", "phi", "phi_prime", "delta", "rho", "alpha_re", "alpha_im",
                "alpha_prime_re", "alpha_prime_im", "x", "y",
            ],
            Family::Cat => &["alpha", "beta", "alpha_arg", "beta_arg", "phi", "phi_prime", "delta", "rho"],
        }
    }

    fn default_value(self, name: &str) -> f64 {
        match name {
            "omega" | "sigma" => 0.5,
            "alpha" | "beta" if self == Family::Cat => 1.0,
            "alpha_im" | "alpha_prime_im" | "x" => 1.0,
            _ => 0.0,
        }
    }

    /// Factor turning a stripped probability into the full convention.
    pub fn full_factor(self) -> f64 {
        let two_pi = 2.0 * PI;
        match self {
            Family::Circle | Family::Coset => two_pi.powi(-2),
            Family::Cat => two_pi.powi(-4),
            Family::Cylinder => 1.0,
        }
    }

    /// Captioned default axes.
    pub fn default_axes(self) -> (Axis, Axis) {
        let (a, b, max) = match self {
            Family::Cat => ("alpha", "beta", 1.95),
            _ => ("omega", "sigma", 0.95),
        };
        (
            Axis { name: a.into(), min: 0.0, max, steps: DEFAULT_STEPS },
            Axis { name: b.into(), min: 0.0, max, steps: DEFAULT_STEPS },
        )
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => Ok(Family::Circle),
            "cylinder" => Ok(Family::Cylinder),
            "coset" => Ok(Family::Coset),
            "cat" => Ok(Family::Cat),
            other => Err(Error::Invalid(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Series,
    ClosedForm,
    Both,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(Method::Series),
            "closed-form" | "closed_form" => Ok(Method::ClosedForm),
            "both" => Ok(Method::Both),
            other => Err(Error::Invalid(format!("unknown method '{other}'"))),
        }
    }
}

/// Parse a real number, optionally in multiples of pi: `0.5pi`, `pi`, `-2pi`.
pub fn parse_value(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::Invalid(format!("cannot parse '{s}' as a number"));
    let v = match t.strip_suffix("pi") {
        Some("") | Some("+") => PI,
        Some("-") => -PI,
        Some(m) => m.parse::<f64>().map_err(|_| bad())? * PI,
        None => t.parse::<f64>().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Parse `name=value`.
pub fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let (name, value) =
        s.split_once('=').ok_or_else(|| Error::Invalid(format!("expected name=value, got '{s}'")))?;
    Ok((name.trim().to_string(), parse_value(value)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| if i == last { self.max } else { self.min + (self.max - self.min) * i as f64 / last as f64 })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `name:min:max:steps`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, steps] = parts[..] else {
            return Err(Error::Invalid(format!("expected name:min:max:steps, got '{s}'")));
        };
        let steps = steps.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad step count in '{s}'")))?;
        Ok(Axis { name: name.trim().to_string(), min: parse_value(min)?, max: parse_value(max)?, steps })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: Family,
    pub pair: SectorPair,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub fixed: BTreeMap<String, f64>,
    pub truncation: usize,
    pub convention: Convention,
    pub method: Method,
}

impl SweepSpec {
    /// Captioned default grid for a family.
    pub fn new(family: Family, pair: SectorPair) -> Self {
        let (axis1, axis2) = family.default_axes();
        Self {
            family,
            pair,
            axis1,
            axis2: Some(axis2),
            fixed: BTreeMap::new(),
            truncation: DEFAULT_ORDER,
            convention: Convention::Stripped,
            method: Method::Series,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let known = self.family.parameters();
        let mut axes = vec![&self.axis1];
        axes.extend(self.axis2.as_ref());
        let mut seen: Vec<&str> = Vec::new();
        for a in &axes {
            if a.steps < 2 {
                return Err(Error::Invalid(format!("axis {} needs at least 2 steps", a.name)));
            }
            seen.push(&a.name);
        }
        seen.extend(self.fixed.keys().map(String::as_str));
        for (i, name) in seen.iter().enumerate() {
            if !known.contains(name) {
                return Err(Error::Invalid(format!(
                    "unknown parameter '{name}' for {}; expected one of {}",
                    self.family.name(),
                    known.join(", ")
                )));
            }
            if seen[..i].contains(name) {
                return Err(Error::Invalid(format!("parameter '{name}' given more than once")));
            }
        }
        if seen.contains(&"delta") && seen.contains(&"phi_prime") {
            return Err(Error::Invalid("set either delta or phi_prime, not both".into()));
        }
        if self.truncation == 0 {
            return Err(Error::Truncation { min: 1, got: 0 });
        }
        if self.method != Method::Series && self.family == Family::Cat {
            return Err(Error::Invalid("the cat family has no closed form; use --method series".into()));
        }
        for (name, lo, hi) in self.ranges() {
            check_range(name, lo, hi)?;
        }
        Ok(())
    }

    fn ranges(&self) -> Vec<(&str, f64, f64)> {
        let mut r: Vec<(&str, f64, f64)> = self.fixed.iter().map(|(k, v)| (k.as_str(), *v, *v)).collect();
        r.push((&self.axis1.name, self.axis1.min, self.axis1.max));
        if let Some(a) = &self.axis2 {
            r.push((&a.name, a.min, a.max));
        }
        r
    }
}

fn check_range(name: &str, lo: f64, hi: f64) -> Result<()> {
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    let fail = |why: &str| Err(Error::Invalid(format!("{name} range [{lo}, {hi}] {why}")));
    match name {
        "omega" | "sigma" if lo < 0.0 || hi >= 1.0 => fail("must lie in [0, 1)"),
        "alpha" | "beta" if lo < 0.0 => fail("must be non-negative (use alpha_arg/beta_arg for phases)"),
        "alpha_im" | "alpha_prime_im" if lo < IM_ALPHA_GUARD => {
            fail(&format!("must stay above the guard {IM_ALPHA_GUARD}"))
        }
        "l" | "l_prime" if hi.abs().max(lo.abs()) > MAX_CYLINDER_L => fail(&format!("exceeds |l| <= {MAX_CYLINDER_L}")),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityGrid {
    pub spec: SweepSpec,
    pub axis1_values: Vec<f64>,
    pub axis2_values: Option<Vec<f64>>,
    /// `values[i][j]` at `axis1_values[i]`, `axis2_values[j]`.
    pub values: Vec<Vec<f64>>,
    pub tail_bound_max: f64,
    pub provenance: Method,
    /// max |series - closed form| when both were evaluated.
    pub max_method_deviation: Option<f64>,
    pub tool_version: String,
}

struct Point {
    value: f64,
    tail: f64,
    deviation: Option<f64>,
}

fn param(map: &BTreeMap<&str, f64>, name: &str) -> f64 {
    map[name]
}

fn primed_angle(map: &BTreeMap<&str, f64>) -> f64 {
    map.get("phi_prime").copied().unwrap_or_else(|| map["phi"] - map.get("delta").copied().unwrap_or(0.0))
}

fn disk_pair(map: &BTreeMap<&str, f64>) -> Result<(Mp2Variable, Mp2Variable)> {
    Ok((
        Mp2Variable::from_polar(param(map, "omega"), param(map, "omega_arg"))?,
        Mp2Variable::from_polar(param(map, "sigma"), param(map, "sigma_arg"))?,
    ))
}

fn evaluate(spec: &SweepSpec, map: &BTreeMap<&str, f64>) -> Result<Point> {
    let (n, pair) = (spec.truncation, spec.pair);
    let (phi, phi_p, rho) = (param(map, "phi"), primed_angle(map), param(map, "rho"));
    let (series, closed) = match spec.family {
        Family::Circle => {
            let (o, s) = disk_pair(map)?;
            let p = CirclePairParams::new(o, s, phi, phi_p, rho)?;
            let closed = || match pair {
                SectorPair::Total => Ok(closed_form_total(&p, n)),
                _ => closed_form_p(&p, pair),
            };
            run(spec.method, || probability_series(&p, pair, n), closed)?
        }
        Family::Cylinder => {
            let (o, s) = disk_pair(map)?;
            let (l, lp) = (param(map, "l"), param(map, "l_prime"));
            let p = CylinderPairParams::new(o, s, CylinderLabel::new(l, phi)?, CylinderLabel::new(lp, phi_p)?, rho)?;
            run(spec.method, || probability_series_cyl(&p, pair, n), || degenerate_limit_cyl(pair, l, lp, phi - phi_p, rho))?
        }
        Family::Coset => {
            let (o, s) = disk_pair(map)?;
            let (x, y) = (param(map, "x"), param(map, "y"));
            let a = Complex64::new(param(map, "alpha_re"), param(map, "alpha_im"));
            let ap = Complex64::new(param(map, "alpha_prime_re"), param(map, "alpha_prime_im"));
            let p = CosetPairParams::new(o, s, CosetLabel::new(a, phi, x, y)?, CosetLabel::new(ap, phi_p, x, y)?, rho)?;
            run(spec.method, || probability_series_coset(&p, pair, n), || closed_form_coset(&p, pair))?
        }
        Family::Cat => {
            let a = Complex64::from_polar(param(map, "alpha"), param(map, "alpha_arg"));
            let b = Complex64::from_polar(param(map, "beta"), param(map, "beta_arg"));
            let p = CatPairParams::new(a, b, phi, phi_p, rho)?;
            (Some(cat_entangled_probability(&p, pair, n)?), None)
        }
    };
    let scale = match spec.convention {
        Convention::Stripped => 1.0,
        Convention::Full => spec.family.full_factor(),
    };
    let (value, tail) = match (&series, closed) {
        (Some(s), _) => (s.value, s.tail_bound),
        (None, Some(c)) => (c, 0.0),
        (None, None) => unreachable!(),
    };
    let deviation = match (&series, closed) {
        (Some(s), Some(c)) => Some((s.value - c).abs() * scale),
        _ => None,
    };
    if !value.is_finite() || value < 0.0 {
        return Err(Error::Invalid(format!("probability {value} is not a finite non-negative number")));
    }
    Ok(Point { value: value * scale, tail: tail * scale, deviation })
}

type Evaluated = (Option<crate::numerics::SeriesValue<f64>>, Option<f64>);

fn run(
    method: Method,
    series: impl FnOnce() -> Result<crate::numerics::SeriesValue<f64>>,
    closed: impl FnOnce() -> Result<f64>,
) -> Result<Evaluated> {
    Ok(match method {
        Method::Series => (Some(series()?), None),
        Method::ClosedForm => (None, Some(closed()?)),
        Method::Both => (Some(series()?), Some(closed()?)),
    })
}

/// Evaluate every grid point; points run in parallel, results are
/// assembled in axis order so output does not depend on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<ProbabilityGrid> {
    spec.validate()?;
    let xs = spec.axis1.values();
    let ys = spec.axis2.as_ref().map(Axis::values);
    let cols = ys.as_ref().map_or(1, Vec::len);
    let mut base: BTreeMap<&str, f64> = BTreeMap::new();
    for name in spec.family.parameters() {
        if !matches!(*name, "phi_prime" | "delta") {
            base.insert(name, spec.family.default_value(name));
        }
    }
    for (k, v) in &spec.fixed {
        base.insert(k.as_str(), *v);
    }
    let results: Vec<Result<Point>> = (0..xs.len() * cols)
        .into_par_iter()
        .map(|k| {
            let mut map = base.clone();
            let (i, j) = (k / cols, k % cols);
            map.insert(spec.axis1.name.as_str(), xs[i]);
            let mut at = format!("{}={}", spec.axis1.name, xs[i]);
            if let (Some(a), Some(ys)) = (&spec.axis2, &ys) {
                map.insert(a.name.as_str(), ys[j]);
                let _ = write!(at, ", {}={}", a.name, ys[j]);
            }
            evaluate(spec, &map).map_err(|e| Error::Invalid(format!("at {at}: {e}")))
        })
        .collect();
    let mut values = vec![Vec::with_capacity(cols); xs.len()];
    let (mut tail_max, mut dev_max) = (0.0f64, None::<f64>);
    for (k, r) in results.into_iter().enumerate() {
        let p = r?;
        values[k / cols].push(p.value);
        tail_max = tail_max.max(p.tail);
        if let Some(d) = p.deviation {
            dev_max = Some(dev_max.map_or(d, |m| m.max(d)));
        }
    }
    Ok(ProbabilityGrid {
        spec: spec.clone(),
        axis1_values: xs,
        axis2_values: ys,
        values,
        tail_bound_max: tail_max,
        provenance: spec.method,
        max_method_deviation: dev_max,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

pub const CSV_HEADER: &str = "axis1,axis2,value";

impl ProbabilityGrid {
    /// One row per point, row-major in axis1, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.values.len() * self.values.first().map_or(1, Vec::len));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (i, x) in self.axis1_values.iter().enumerate() {
            for (j, v) in self.values[i].iter().enumerate() {
                match &self.axis2_values {
                    Some(ys) => writeln!(out, "{x:.16e},{:.16e},{v:.16e}", ys[j]),
                    None => writeln!(out, "{x:.16e},,{v:.16e}"),
                }
                .expect("writing to a String cannot fail");
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("bad grid JSON: {e}")))
    }
}

/// A parsed CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub axis1: f64,
    pub axis2: Option<f64>,
    pub value: f64,
}

pub fn parse_csv(s: &str) -> Result<Vec<CsvRow>> {
    let mut lines = s.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Invalid(format!("missing CSV header '{CSV_HEADER}'")));
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let bad = || Error::Invalid(format!("bad CSV row {}: '{line}'", k + 2));
            let f: Vec<&str> = line.split(',').collect();
            let [a, b, v] = f[..] else { return Err(bad()) };
            let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
            Ok(CsvRow { axis1: num(a)?, axis2: if b.is_empty() { None } else { Some(num(b)?) }, value: num(v)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::theta3;
    use proptest::prelude::*;

    fn small(family: Family, pair: SectorPair, steps: usize) -> SweepSpec {
        let mut s = SweepSpec::new(family, pair);
        s.axis1.steps = steps;
        if let Some(a) = s.axis2.as_mut() {
            a.steps = steps;
        }
        s
    }

    #[test]
    fn values_with_pi_suffix() {
        assert_eq!(parse_value("pi").unwrap(), PI);
        assert_eq!(parse_value("0.5pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_value("-pi").unwrap(), -PI);
        assert_eq!(parse_value("0.25").unwrap(), 0.25);
        assert!(parse_value("abc").is_err());
        assert!(parse_value("inf").is_err());
        assert_eq!(parse_assignment("rho=2pi").unwrap(), ("rho".to_string(), 2.0 * PI));
    }

    #[test]
    fn axis_parsing_and_endpoints() {
        let a: Axis = "rho:0:2pi:5".parse().unwrap();
        assert_eq!(a.values(), vec![0.0, 0.5 * PI, PI, 1.5 * PI, 2.0 * PI]);
        assert!("rho:0:1".parse::<Axis>().is_err());
        let mut s = SweepSpec::new(Family::Circle, SectorPair::PP);
        s.axis1.steps = 1;
        assert!(s.validate().is_err());
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let mut s = SweepSpec::new(Family::Circle, SectorPair::PP);
        s.axis1.max = 1.0;
        assert!(s.validate().is_err());
        let mut s = SweepSpec::new(Family::Circle, SectorPair::PP);
        s.fixed.insert("l".into(), 0.0);
        assert!(s.validate().is_err());
        let mut s = SweepSpec::new(Family::Circle, SectorPair::PP);
        s.fixed.insert("omega".into(), 0.1);
        assert!(s.validate().is_err());
        let mut s = SweepSpec::new(Family::Coset, SectorPair::PP);
        s.fixed.insert("alpha_im".into(), 0.0);
        assert!(s.validate().is_err());
        let mut s = SweepSpec::new(Family::Cat, SectorPair::PP);
        s.method = Method::ClosedForm;
        assert!(s.validate().is_err());
        let mut s = SweepSpec::new(Family::Circle, SectorPair::PP);
        s.fixed.insert("delta".into(), 0.0);
        s.fixed.insert("phi_prime".into(), 0.0);
        assert!(s.validate().is_err());
    }

    #[test]
    fn coincident_zero_grid() {
        let g = run_sweep(&small(Family::Circle, SectorPair::PP, 8)).unwrap();
        assert!(g.values.iter().flatten().all(|v| *v < 1e-30));
    }

    #[test]
    fn antipodal_doubles_quarter_turn() {
        let mut a = small(Family::Circle, SectorPair::PP, 8);
        a.fixed.insert("rho".into(), PI);
        let mut b = a.clone();
        b.fixed.insert("rho".into(), PI / 2.0);
        let (ga, gb) = (run_sweep(&a).unwrap(), run_sweep(&b).unwrap());
        for (x, y) in ga.values.iter().flatten().zip(gb.values.iter().flatten()) {
            assert!((x - 2.0 * y).abs() < 1e-9);
        }
    }

    #[test]
    fn cylinder_degenerate_curve() {
        let mut s = SweepSpec::new(Family::Cylinder, SectorPair::PP);
        s.axis1 = "rho:0:2pi:9".parse().unwrap();
        s.axis2 = None;
        s.method = Method::ClosedForm;
        let g = run_sweep(&s).unwrap();
        let t3 = theta3(crate::cylinder::cylinder_nome()).unwrap().value;
        for (r, v) in g.axis1_values.iter().zip(&g.values) {
            assert!((v[0] - (1.0 + t3) * (1.0 + r.cos())).abs() < 1e-14);
        }
    }

    #[test]
    fn both_methods_agree_on_circle() {
        let mut s = small(Family::Circle, SectorPair::PM, 6);
        s.fixed.insert("delta".into(), 0.3);
        s.fixed.insert("rho".into(), 1.1);
        s.method = Method::Both;
        let g = run_sweep(&s).unwrap();
        assert!(g.max_method_deviation.unwrap() < 1e-12);
    }

    #[test]
    fn full_convention_scales() {
        let mut s = small(Family::Cat, SectorPair::PP, 5);
        s.fixed.insert("delta".into(), 0.5 * PI);
        let g0 = run_sweep(&s).unwrap();
        s.convention = Convention::Full;
        let g1 = run_sweep(&s).unwrap();
        let f = (2.0 * PI).powi(-4);
        for (a, b) in g0.values.iter().flatten().zip(g1.values.iter().flatten()) {
            assert!((a * f - b).abs() <= 1e-16 * a.abs());
        }
    }

    #[test]
    fn point_errors_name_the_point() {
        let mut s = small(Family::Cat, SectorPair::PM, 3);
        s.fixed.insert("delta".into(), 0.5 * PI);
        let e = run_sweep(&s).unwrap_err().to_string();
        assert!(e.contains("alpha=0") && e.contains("beta=0"), "{e}");
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let s = small(Family::Coset, SectorPair::MM, 12);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_sweep(&s).unwrap());
        let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| run_sweep(&s).unwrap());
        assert_eq!(one.to_csv(), many.to_csv());
    }

    #[test]
    fn json_round_trip() {
        let mut s = small(Family::Circle, SectorPair::Total, 4);
        s.fixed.insert("rho".into(), 1.0);
        let g = run_sweep(&s).unwrap();
        assert_eq!(ProbabilityGrid::from_json(&g.to_json()).unwrap(), g);
    }

    proptest! {
        #[test]
        fn csv_round_trip_bit_exact(vals in proptest::collection::vec(0.0f64..1e3, 6)) {
            let s = small(Family::Circle, SectorPair::PP, 2);
            let mut g = run_sweep(&s).unwrap();
            g.axis2_values = None;
            g.axis1_values = vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
            g.values = vals.iter().map(|v| vec![*v]).collect();
            let rows = parse_csv(&g.to_csv()).unwrap();
            prop_assert_eq!(rows.len(), 6);
            for (r, v) in rows.iter().zip(&vals) {
                prop_assert_eq!(r.value.to_bits(), v.to_bits());
                prop_assert!(r.axis2.is_none());
            }
        }
    }
}
