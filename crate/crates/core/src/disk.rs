//! Sampling check of the analytic class definitions on a polar grid.
//!
//! The starlike quotient is `|(w - 1) / (w + 1 - 2 alpha)|` with
//! `w = z f'(z) / f(z)`; the convex quotient is `|u / (u + 2 (1 - alpha))|`
//! with `u = z f''(z) / f'(z)`. A function belongs to the class of type
//! `beta` when the quotient stays below `beta` on the open unit disk.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{check_membership, ClassId, CriterionReport, OrderTypeParams, Verdict};
use crate::error::{Error, Result};
use crate::series::{series_eval, NormalizedFunction};

/// Points where `|f|` (or `|f'|`) or the quotient denominator falls below
/// this are skipped and counted.
pub const DENOMINATOR_GUARD: f64 = 1e-12;

/// A Member verdict tolerates sampled sup up to `beta + MEMBER_SUP_SLACK`.
pub const MEMBER_SUP_SLACK: f64 = 1e-6;

/// Outer radius of the probe grid used to confirm NotMember verdicts.
pub const NOT_MEMBER_PROBE_RADIUS: f64 = 0.999;

/// A NotMember verdict expects the probe sup above `beta - NOT_MEMBER_SLACK`.
pub const NOT_MEMBER_SLACK: f64 = 0.05;

/// Innermost radius when `r_max` allows it.
const INNER_RADIUS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskGrid {
    n_radii: usize,
    n_angles: usize,
    r_max: f64,
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self {
            n_radii: 32,
            n_angles: 256,
            r_max: 0.995,
        }
    }
}

impl DiskGrid {
    pub fn new(n_radii: usize, n_angles: usize, r_max: f64) -> Result<Self> {
        if n_radii < 2 {
            return Err(Error::InvalidGrid(format!("n_radii = {n_radii} < 2")));
        }
        if n_angles < 8 {
            return Err(Error::InvalidGrid(format!("n_angles = {n_angles} < 8")));
        }
        if !(r_max > 0.0 && r_max < 1.0) {
            return Err(Error::InvalidGrid(format!("r_max = {r_max} not in (0, 1)")));
        }
        Ok(Self {
            n_radii,
            n_angles,
            r_max,
        })
    }

    pub fn n_radii(&self) -> usize {
        self.n_radii
    }

    pub fn n_angles(&self) -> usize {
        self.n_angles
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn with_r_max(&self, r_max: f64) -> Result<Self> {
        Self::new(self.n_radii, self.n_angles, r_max)
    }

    /// Radii whose distances to the unit circle interpolate geometrically
    /// from `1 - r_min` down to `1 - r_max`; the last radius is `r_max`.
    pub fn radii(&self) -> Vec<f64> {
        let r_min = INNER_RADIUS.min(0.5 * self.r_max);
        let (d_in, d_out) = (1.0 - r_min, 1.0 - self.r_max);
        let last = (self.n_radii - 1) as f64;
        (0..self.n_radii)
            .map(|i| {
                if i + 1 == self.n_radii {
                    self.r_max
                } else {
                    let t = i as f64 / last;
                    1.0 - d_in * (d_out / d_in).powf(t)
                }
            })
            .collect()
    }

    /// `theta_j = 2 pi (j / n)`; doubling `n` reproduces every old angle exactly.
    pub fn angle(&self, j: usize) -> f64 {
        std::f64::consts::TAU * (j as f64 / self.n_angles as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupReport {
    pub sup_modulus: f64,
    pub argmax_point: Complex64,
    pub min_abs_f: f64,
    pub skipped_points: usize,
    pub sampled_points: usize,
}

#[derive(Debug, Clone, Copy)]
enum Quotient {
    Starlike,
    Convex,
}

#[derive(Debug, Clone, Copy)]
struct RingMax {
    value: f64,
    point: Complex64,
    // (radius index, angle index) for the lexicographic tie-break
    index: (usize, usize),
    min_abs: f64,
    skipped: usize,
    sampled: usize,
}

fn sample_point(
    f: &NormalizedFunction,
    kind: Quotient,
    alpha: f64,
    z: Complex64,
    rel_tol: f64,
) -> Result<(Option<f64>, f64)> {
    let (lo, hi) = match kind {
        Quotient::Starlike => (0, 1),
        Quotient::Convex => (1, 2),
    };
    let base = series_eval(f, z, lo, rel_tol)?.value;
    let base_abs = base.norm();
    if base_abs < DENOMINATOR_GUARD {
        return Ok((None, base_abs));
    }
    let upper = series_eval(f, z, hi, rel_tol)?.value;
    let ratio = z * upper / base;
    let (num, den) = match kind {
        Quotient::Starlike => (ratio - 1.0, ratio + (1.0 - 2.0 * alpha)),
        Quotient::Convex => (ratio, ratio + 2.0 * (1.0 - alpha)),
    };
    if den.norm() < DENOMINATOR_GUARD {
        return Ok((None, base_abs));
    }
    let q = (num / den).norm();
    Ok((q.is_finite().then_some(q), base_abs))
}

fn sampled_sup(
    f: &NormalizedFunction,
    kind: Quotient,
    alpha: f64,
    grid: &DiskGrid,
    rel_tol: f64,
) -> Result<SupReport> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha = {alpha} not in [0, 1)")));
    }
    let radii = grid.radii();
    let rings: Vec<RingMax> = radii
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut ring = RingMax {
                value: f64::NEG_INFINITY,
                point: Complex64::new(0.0, 0.0),
                index: (i, 0),
                min_abs: f64::INFINITY,
                skipped: 0,
                sampled: 0,
            };
            for j in 0..grid.n_angles {
                let z = Complex64::from_polar(r, grid.angle(j));
                let (q, base_abs) = sample_point(f, kind, alpha, z, rel_tol)?;
                ring.min_abs = ring.min_abs.min(base_abs);
                match q {
                    Some(q) => {
                        ring.sampled += 1;
                        if q > ring.value {
                            ring.value = q;
                            ring.point = z;
                            ring.index = (i, j);
                        }
                    }
                    None => ring.skipped += 1,
                }
            }
            Ok(ring)
        })
        .collect::<Result<_>>()?;

    // Rings arrive in radius order, so a strict `>` keeps the
    // lexicographically first maximizer.
    let mut best: Option<RingMax> = None;
    let (mut min_abs, mut skipped, mut sampled) = (f64::INFINITY, 0, 0);
    for ring in rings {
        min_abs = min_abs.min(ring.min_abs);
        skipped += ring.skipped;
        sampled += ring.sampled;
        if ring.sampled > 0 && best.is_none_or(|b| ring.value > b.value) {
            best = Some(ring);
        }
    }
    let best = best.ok_or(Error::AllPointsSkipped { skipped })?;
    Ok(SupReport {
        sup_modulus: best.value,
        argmax_point: best.point,
        min_abs_f: min_abs,
        skipped_points: skipped,
        sampled_points: sampled,
    })
}

/// Sampled sup of the starlike quotient. `min_abs_f` tracks `|f|`.
pub fn starlike_sup(
    f: &NormalizedFunction,
    alpha: f64,
    grid: &DiskGrid,
    rel_tol: f64,
) -> Result<SupReport> {
    sampled_sup(f, Quotient::Starlike, alpha, grid, rel_tol)
}

/// Sampled sup of the convex quotient. `min_abs_f` tracks `|f'|`.
pub fn convex_sup(
    f: &NormalizedFunction,
    alpha: f64,
    grid: &DiskGrid,
    rel_tol: f64,
) -> Result<SupReport> {
    sampled_sup(f, Quotient::Convex, alpha, grid, rel_tol)
}

pub fn class_sup(
    f: &NormalizedFunction,
    class: ClassId,
    alpha: f64,
    grid: &DiskGrid,
    rel_tol: f64,
) -> Result<SupReport> {
    if class.is_convex() {
        convex_sup(f, alpha, grid, rel_tol)
    } else {
        starlike_sup(f, alpha, grid, rel_tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ConsistencyFlag {
    Consistent,
    /// Sampling contradicts the criterion verdict.
    ManualReview { reason: String },
    /// Inconclusive verdicts are reported, never decided.
    ReportOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub criterion: CriterionReport,
    pub sup: SupReport,
    /// Sup on the `r_max = 0.999` grid, computed for NotMember verdicts.
    pub boundary_probe: Option<SupReport>,
    pub flag: ConsistencyFlag,
}

impl ConsistencyReport {
    pub fn is_flagged(&self) -> bool {
        matches!(self.flag, ConsistencyFlag::ManualReview { .. })
    }
}

/// Run the coefficient criterion and the disk sampler side by side.
pub fn cross_validate(
    f: &NormalizedFunction,
    class: ClassId,
    params: OrderTypeParams,
    grid: &DiskGrid,
    rel_tol: f64,
) -> Result<ConsistencyReport> {
    let criterion = check_membership(f, class, params, rel_tol)?;
    let sup = class_sup(f, class, params.alpha(), grid, rel_tol)?;
    let beta = params.beta();

    let (boundary_probe, flag) = match criterion.verdict {
        Verdict::Member => {
            let flag = if sup.sup_modulus < beta + MEMBER_SUP_SLACK {
                ConsistencyFlag::Consistent
            } else {
                ConsistencyFlag::ManualReview {
                    reason: format!(
                        "member verdict but sampled sup {} >= beta + {MEMBER_SUP_SLACK:e}",
                        sup.sup_modulus
                    ),
                }
            };
            (None, flag)
        }
        Verdict::NotMember => {
            let probe_grid = grid.with_r_max(NOT_MEMBER_PROBE_RADIUS)?;
            let probe = class_sup(f, class, params.alpha(), &probe_grid, rel_tol)?;
            let flag = if probe.sup_modulus > beta - NOT_MEMBER_SLACK {
                ConsistencyFlag::Consistent
            } else {
                ConsistencyFlag::ManualReview {
                    reason: format!(
                        "not-member verdict but probe sup {} <= beta - {NOT_MEMBER_SLACK}",
                        probe.sup_modulus
                    ),
                }
            };
            (Some(probe), flag)
        }
        Verdict::Inconclusive => (None, ConsistencyFlag::ReportOnly),
    };

    Ok(ConsistencyReport {
        criterion,
        sup,
        boundary_probe,
        flag,
    })
}
