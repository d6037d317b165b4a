//! Parameter sweeps along family lines and bisection of membership boundaries.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{check_membership, ClassId, OrderTypeParams, Verdict};
use crate::error::{Error, Result};
use crate::registry;
use crate::series::NormalizedFunction;

/// Exact CSV header for scan output.
pub const CSV_HEADER: &str = "family,mu,nu,alpha,beta,class,sum_value,threshold,verdict";

pub const DEFAULT_BISECT_TOL: f64 = 1e-10;

const MONOTONE_SAMPLES: usize = 16;
const MAX_BISECT_ITERS: usize = 400;

/// A one-parameter line through `(mu, nu)` space, parametrized by `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyLine {
    /// `mu = nu - 1`.
    Bessel,
    /// `mu = nu`.
    Struve,
    /// `mu = nu + offset`.
    Lommel { offset: f64 },
}

impl FamilyLine {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyLine::Bessel => "bessel",
            FamilyLine::Struve => "struve",
            FamilyLine::Lommel { .. } => "lommel",
        }
    }

    pub fn mu_at(&self, nu: f64) -> f64 {
        match *self {
            FamilyLine::Bessel => nu - 1.0,
            FamilyLine::Struve => nu,
            FamilyLine::Lommel { offset } => nu + offset,
        }
    }

    /// Normalized function on this line, before any convolution.
    pub fn function_at(&self, nu: f64) -> Result<NormalizedFunction> {
        match *self {
            FamilyLine::Bessel => NormalizedFunction::bessel(nu),
            FamilyLine::Struve => NormalizedFunction::struve(nu),
            FamilyLine::Lommel { offset } => NormalizedFunction::lommel(nu + offset, nu),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            FamilyLine::Bessel => "bessel (mu = nu - 1)".to_string(),
            FamilyLine::Struve => "struve (mu = nu)".to_string(),
            FamilyLine::Lommel { offset } => format!("lommel (mu = nu + {offset})"),
        }
    }
}

impl fmt::Display for FamilyLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Inclusive arithmetic range `lo, lo + step, ...` up to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0) {
            return Err(Error::Domain(format!("bad range {lo}:{hi}:{step}")));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.hi < self.lo {
            return Vec::new();
        }
        // Tolerate rounding so that 0:5:1 includes 5.
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = Error;

    /// `lo:hi:step`, or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad number `{t}` in range `{s}`")))
        };
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Range::new(v, v, 1.0)
            }
            [lo, hi, step] => Range::new(num(lo)?, num(hi)?, num(step)?),
            _ => Err(Error::Domain(format!("range `{s}` is not lo:hi:step"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub family: &'static str,
    pub mu: f64,
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub class: ClassId,
    pub sum_value: f64,
    pub threshold: f64,
    /// `None` when the point is outside the family's domain.
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ScanRow {
    pub fn verdict_label(&self) -> &'static str {
        self.verdict.map_or("domain-error", |v| v.name())
    }
}

fn scan_point(
    family: &'static str,
    f: Result<NormalizedFunction>,
    mu: f64,
    nu: f64,
    class: ClassId,
    params: OrderTypeParams,
    rel_tol: f64,
) -> ScanRow {
    let report = f.and_then(|f| {
        check_membership(&f.with_kernel(class.required_kernel()), class, params, rel_tol)
    });
    let (sum_value, verdict, error) = match report {
        Ok(r) => (r.sum_value, Some(r.verdict), None),
        Err(e) => (f64::NAN, None, Some(e.to_string())),
    };
    ScanRow {
        family,
        mu,
        nu,
        alpha: params.alpha(),
        beta: params.beta(),
        class,
        sum_value,
        threshold: params.threshold(),
        verdict,
        error,
    }
}

/// One row per `nu` in `nus`, ascending. Out-of-domain points become
/// `domain-error` rows.
pub fn scan_grid(
    line: FamilyLine,
    nus: &Range,
    class: ClassId,
    params: OrderTypeParams,
    rel_tol: f64,
) -> Vec<ScanRow> {
    let mut points = nus.points();
    points.sort_by(f64::total_cmp);
    points
        .par_iter()
        .map(|&nu| {
            scan_point(
                line.name(),
                line.function_at(nu),
                line.mu_at(nu),
                nu,
                class,
                params,
                rel_tol,
            )
        })
        .collect()
}

/// Rectangular Lommel scan over `mus x nus`. Points outside the criteria
/// domain (`p <= 0`, `q <= 0` or a pole) are dropped.
pub fn scan_lommel_rect(
    mus: &Range,
    nus: &Range,
    class: ClassId,
    params: OrderTypeParams,
    rel_tol: f64,
) -> Vec<ScanRow> {
    let nu_points = nus.points();
    let cells: Vec<(f64, f64)> = mus
        .points()
        .into_iter()
        .flat_map(|mu| nu_points.iter().map(move |&nu| (mu, nu)))
        .filter(|&(mu, nu)| {
            NormalizedFunction::lommel(mu, nu).is_ok_and(|f| f.pair.is_positive())
        })
        .collect();
    cells
        .par_iter()
        .map(|&(mu, nu)| {
            scan_point(
                "lommel",
                NormalizedFunction::lommel(mu, nu),
                mu,
                nu,
                class,
                params,
                rel_tol,
            )
        })
        .collect()
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the header and one newline-terminated line per row.
pub fn write_csv<W: Write>(rows: &[ScanRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.family,
            fmt_float(r.mu),
            fmt_float(r.nu),
            fmt_float(r.alpha),
            fmt_float(r.beta),
            r.class.name(),
            fmt_float(r.sum_value),
            fmt_float(r.threshold),
            r.verdict_label()
        )?;
    }
    Ok(())
}

pub fn to_csv_string(rows: &[ScanRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv output is ASCII")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub line_description: String,
    pub nu_star: f64,
    /// Final bracket; `g` changes sign across it.
    pub bracket: (f64, f64),
    /// `|g(nu_star)|`.
    pub residual: f64,
    /// Whether `g` is monotone over the 16 interior samples of the initial bracket.
    pub monotone_check: bool,
    /// Sub-intervals of the sample grid on which `g` changes sign.
    pub sign_changes: Vec<(f64, f64)>,
    pub iterations: usize,
}

/// `g(nu) = coefficient sum - 2 beta (1 - alpha)` along `line`.
pub fn boundary_gap(
    line: FamilyLine,
    class: ClassId,
    params: OrderTypeParams,
    nu: f64,
    rel_tol: f64,
) -> Result<f64> {
    let f = line.function_at(nu)?;
    f.pair.require_positive()?;
    let sum = registry::builtin()
        .for_class(class)
        .coefficient_sum(params, f.pair, rel_tol)?;
    Ok(sum - params.threshold())
}

/// Bisect `g` on `bracket` until the bracket is narrower than `abs_tol`.
pub fn threshold_bisect(
    line: FamilyLine,
    class: ClassId,
    params: OrderTypeParams,
    bracket: (f64, f64),
    abs_tol: f64,
    rel_tol: f64,
) -> Result<ThresholdResult> {
    if !(abs_tol.is_finite() && abs_tol > 0.0) {
        return Err(Error::InvalidTolerance(abs_tol));
    }
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    let g = |nu: f64| boundary_gap(line, class, params, nu, rel_tol);
    let (mut g_lo, g_hi) = (g(lo)?, g(hi)?);
    if g_lo.signum() == g_hi.signum() && g_lo != 0.0 && g_hi != 0.0 {
        return Err(Error::NoSignChange { lo, hi, g_lo, g_hi });
    }

    let samples: Vec<f64> = (0..=MONOTONE_SAMPLES + 1)
        .map(|i| lo + (hi - lo) * i as f64 / (MONOTONE_SAMPLES + 1) as f64)
        .collect();
    let values = samples.iter().map(|&nu| g(nu)).collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let monotone_check = diffs.iter().all(|&d| d <= 0.0) || diffs.iter().all(|&d| d >= 0.0);
    let sign_changes = samples
        .windows(2)
        .zip(values.windows(2))
        .filter(|(_, v)| v[0].signum() != v[1].signum() || v[0] == 0.0)
        .map(|(s, _)| (s[0], s[1]))
        .collect();

    let mut iterations = 0;
    if g_lo == 0.0 {
        hi = lo;
    } else if g_hi == 0.0 {
        lo = hi;
    }
    while hi - lo > abs_tol && iterations < MAX_BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid)?;
        iterations += 1;
        if g_mid == 0.0 {
            lo = mid;
            hi = mid;
        } else if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }

    let nu_star = 0.5 * (lo + hi);
    Ok(ThresholdResult {
        line_description: format!("{line}, class {class}, alpha {}, beta {}", params.alpha(), params.beta()),
        nu_star,
        bracket: (lo, hi),
        residual: g(nu_star)?.abs(),
        monotone_check,
        sign_changes,
        iterations,
    })
}

/// The kernel matching `class` for functions built along a line.
pub fn line_function(line: FamilyLine, nu: f64, class: ClassId) -> Result<NormalizedFunction> {
    Ok(line.function_at(nu)?.with_kernel(class.required_kernel()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::corollary_beta1;
    use crate::series::DEFAULT_REL_TOL;

    fn unit() -> OrderTypeParams {
        OrderTypeParams::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn range_parsing() {
        let r: Range = "0:5:1".parse().unwrap();
        assert_eq!(r.points(), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let r: Range = "0:1:0.1".parse().unwrap();
        assert_eq!(r.points().len(), 11);
        let r: Range = "2.5".parse().unwrap();
        assert_eq!(r.points(), vec![2.5]);
        assert!("1:2".parse::<Range>().is_err());
        assert!("1:2:0".parse::<Range>().is_err());
        assert!("a:2:1".parse::<Range>().is_err());
    }

    #[test]
    fn empty_range_gives_no_rows() {
        let r = Range::new(3.0, 1.0, 1.0).unwrap();
        assert!(scan_grid(FamilyLine::Bessel, &r, ClassId::StarlikeNeg, unit(), DEFAULT_REL_TOL).is_empty());
    }

    #[test]
    fn bessel_line_flips_once() {
        let r = Range::new(0.0, 5.0, 1.0).unwrap();
        let rows = scan_grid(FamilyLine::Bessel, &r, ClassId::StarlikeNeg, unit(), DEFAULT_REL_TOL);
        assert_eq!(rows.len(), 6);
        let labels: Vec<_> = rows.iter().map(|r| r.verdict_label()).collect();
        assert_eq!(
            labels,
            ["not-member", "not-member", "member", "member", "member", "member"]
        );
        assert!(rows.windows(2).all(|w| w[0].nu < w[1].nu));
        assert_eq!(rows[1].mu, 0.0);
    }

    #[test]
    fn beta_one_scan_matches_corollary() {
        let r = Range::new(0.0, 4.0, 0.5).unwrap();
        for class in [ClassId::StarlikeNeg, ClassId::ConvexNeg] {
            for row in scan_grid(FamilyLine::Struve, &r, class, unit(), DEFAULT_REL_TOL) {
                let f = line_function(FamilyLine::Struve, row.nu, class).unwrap();
                let c = corollary_beta1(&f, class, 0.0, DEFAULT_REL_TOL).unwrap();
                assert_eq!(row.sum_value, c.sum_value);
                assert_eq!(row.verdict, Some(c.verdict));
            }
        }
    }

    #[test]
    fn domain_errors_stay_in_rows() {
        let r = Range::new(-2.0, 0.0, 0.5).unwrap();
        let rows = scan_grid(FamilyLine::Bessel, &r, ClassId::StarlikeNeg, unit(), DEFAULT_REL_TOL);
        assert_eq!(rows.len(), 5);
        // nu = -2 is a pole, nu = -1.5 gives q < 0, nu = -1 is a pole
        assert!(rows[..3].iter().all(|r| r.verdict.is_none() && r.sum_value.is_nan()));
        assert!(rows[3..].iter().all(|r| r.verdict.is_some()));
        let csv = to_csv_string(&rows);
        assert!(csv.contains("domain-error"));
    }

    #[test]
    fn csv_layout() {
        let r = Range::new(1.0, 2.0, 1.0).unwrap();
        let rows = scan_grid(FamilyLine::Bessel, &r, ClassId::StarlikeNeg, unit(), DEFAULT_REL_TOL);
        let csv = to_csv_string(&rows);
        let lines: Vec<&str> = csv.split_terminator('\n').collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(csv.ends_with('\n'));
        assert!(lines.iter().all(|l| l.trim_end() == *l));
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[0], "bessel");
        assert_eq!(fields[6].parse::<f64>().unwrap(), rows[0].sum_value);
        // 17 significant digits
        let mantissa = fields[6].split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17);
    }

    #[test]
    fn lommel_rect_filters_domain() {
        let mus = Range::new(-4.0, 0.0, 1.0).unwrap();
        let nus = Range::new(0.0, 2.0, 1.0).unwrap();
        let rows = scan_lommel_rect(&mus, &nus, ClassId::StarlikeNeg, unit(), DEFAULT_REL_TOL);
        assert!(!rows.is_empty() && rows.len() < 15);
        assert!(rows.iter().all(|r| r.mu > r.nu - 3.0 && r.verdict.is_some()));
    }

    #[test]
    fn bisect_bessel_t_star() {
        let r = threshold_bisect(
            FamilyLine::Bessel,
            ClassId::StarlikeNeg,
            unit(),
            (1.0, 3.0),
            DEFAULT_BISECT_TOL,
            DEFAULT_REL_TOL,
        )
        .unwrap();
        assert!(r.bracket.1 - r.bracket.0 <= DEFAULT_BISECT_TOL);
        assert!(r.residual < 1e-9);
        assert!(r.monotone_check);
        assert_eq!(r.sign_changes.len(), 1);
        assert!((r.nu_star - 1.476_799_456_425_780_7).abs() < 1e-8);
    }

    #[test]
    fn bisect_tolerance_refinement() {
        let run = |tol| {
            threshold_bisect(FamilyLine::Bessel, ClassId::StarlikeNeg, unit(), (1.0, 3.0), tol, DEFAULT_REL_TOL)
                .unwrap()
                .nu_star
        };
        assert!((run(1e-6) - run(1e-10)).abs() < 1e-6);
    }

    #[test]
    fn bisect_without_sign_change() {
        let e = threshold_bisect(FamilyLine::Bessel, ClassId::StarlikeNeg, unit(), (3.0, 6.0), 1e-10, DEFAULT_REL_TOL);
        assert!(matches!(e, Err(Error::NoSignChange { .. })));
    }
}
