//! Pochhammer arithmetic and certified evaluation of the normalized
//! Lommel, Struve and Bessel series.
//!
//! Every function handled here has the shape
//!
//! ```text
//! f(z) = sum_{k >= 0} sign_k * c_k * z^(k+1),   c_k = 1 / ((p)_k (q)_k)
//! ```
//!
//! where `(p, q)` is a [`ParamPair`] and `sign_k` is fixed by the
//! [`ConvolutionKernel`]. Summation stops once a geometric majorant of the
//! omitted tail, plus a floating-point rounding allowance, falls below the
//! requested relative tolerance.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default relative tolerance for every certified sum.
pub const DEFAULT_REL_TOL: f64 = 1e-13;

/// Hard cap on the number of series terms.
pub const TERM_CAP: usize = 10_000;

/// Distance to a non-positive integer below which a parameter counts as a pole.
pub const POLE_TOL: f64 = 1e-9;

/// Smallest relative tolerance accepted by the certified summation.
pub const MIN_REL_TOL: f64 = 16.0 * f64::EPSILON;

/// The term ratio must fall below this before a tail bound is trusted.
const RATIO_GATE: f64 = 0.5;

/// Slack on `|z| <= 1` so that `exp(i theta)` samples on the unit circle pass.
const UNIT_DISK_SLACK: f64 = 4.0 * f64::EPSILON;

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= POLE_TOL && (x - x.round()).abs() <= POLE_TOL
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: usize) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::Domain(format!("Pochhammer argument {a} is not finite")));
    }
    if is_nonpositive_integer(a) && (-a.round()) < k as f64 {
        return Err(Error::Pole { value: a });
    }
    Ok((0..k).fold(1.0, |acc, j| acc * (a + j as f64)))
}

/// The Pochhammer parameter pair `(p, q)` that determines a normalized series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamPair {
    p: f64,
    q: f64,
}

impl ParamPair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        for v in [p, q] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("pair entry {v} is not finite")));
            }
            if is_nonpositive_integer(v) {
                return Err(Error::Pole { value: v });
            }
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_positive(&self) -> bool {
        self.p > 0.0 && self.q > 0.0
    }

    /// Errors unless both entries are strictly positive, which is what makes
    /// every coefficient `c_k` positive.
    pub fn require_positive(&self) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "criteria need p > 0 and q > 0, got ({}, {})",
                self.p, self.q
            )))
        }
    }

    /// `(p + 1, q + 1)`, from `(a)_{k+1} = a (a+1)_k`.
    pub fn shifted(&self) -> Self {
        Self {
            p: self.p + 1.0,
            q: self.q + 1.0,
        }
    }

    pub fn product(&self) -> f64 {
        self.p * self.q
    }
}

/// `c_k = 1 / ((p)_k (q)_k)`.
pub fn coefficient(pair: ParamPair, k: usize) -> f64 {
    // ParamPair construction already excluded the poles.
    (0..k).fold(1.0, |acc, j| {
        let j = j as f64;
        acc / ((pair.p + j) * (pair.q + j))
    })
}

/// Pair for the normalized Lommel function `s_{mu,nu}`:
/// `((mu - nu + 3) / 2, (mu + nu + 3) / 2)`.
pub fn lommel_pair(mu: f64, nu: f64) -> Result<ParamPair> {
    if !mu.is_finite() || !nu.is_finite() {
        return Err(Error::Domain(format!("mu = {mu}, nu = {nu} must be finite")));
    }
    let p = (mu - nu + 3.0) / 2.0;
    let q = (mu + nu + 3.0) / 2.0;
    ParamPair::new(p, q).map_err(|_| {
        Error::Domain(format!(
            "(mu +/- nu + 1)/2 is a negative integer for mu = {mu}, nu = {nu}"
        ))
    })
}

/// Sign pattern applied to `c_k` by Hadamard convolution with a fixed kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvolutionKernel {
    /// The bare normalized function: `(-1)^k c_k`.
    None,
    /// Convolution with `z / (1 + z)`: every coefficient becomes `+c_k`.
    Alternating,
    /// Convolution with `z (2 - 1/(1 + z))`: `z - sum_{k>=1} c_k z^(k+1)`.
    NegativeTail,
}

impl ConvolutionKernel {
    pub fn sign(&self, k: usize) -> f64 {
        match self {
            ConvolutionKernel::None => {
                if k.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
            ConvolutionKernel::Alternating => 1.0,
            ConvolutionKernel::NegativeTail => {
                if k == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConvolutionKernel::None => "none",
            ConvolutionKernel::Alternating => "s-type",
            ConvolutionKernel::NegativeTail => "t-type",
        }
    }
}

/// Which classical function a pair came from. Metadata only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyLabel {
    Bessel { nu: f64 },
    Struve { nu: f64 },
    Lommel { mu: f64, nu: f64 },
    RawPair,
}

impl FamilyLabel {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyLabel::Bessel { .. } => "bessel",
            FamilyLabel::Struve { .. } => "struve",
            FamilyLabel::Lommel { .. } => "lommel",
            FamilyLabel::RawPair => "raw",
        }
    }

    /// `(mu, nu)` on the Lommel parametrization, when there is one.
    pub fn lommel_coordinates(&self) -> Option<(f64, f64)> {
        match *self {
            FamilyLabel::Bessel { nu } => Some((nu - 1.0, nu)),
            FamilyLabel::Struve { nu } => Some((nu, nu)),
            FamilyLabel::Lommel { mu, nu } => Some((mu, nu)),
            FamilyLabel::RawPair => None,
        }
    }
}

/// A normalized series together with the kernel it was convolved with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedFunction {
    pub pair: ParamPair,
    pub kernel: ConvolutionKernel,
    pub family: FamilyLabel,
}

impl NormalizedFunction {
    /// `j_nu`, pair `(1, nu + 1)`.
    pub fn bessel(nu: f64) -> Result<Self> {
        let pair = ParamPair::new(1.0, nu + 1.0)
            .map_err(|_| Error::Domain(format!("Bessel order nu = {nu} hits a pole")))?;
        Ok(Self {
            pair,
            kernel: ConvolutionKernel::None,
            family: FamilyLabel::Bessel { nu },
        })
    }

    /// `h_nu`, pair `(3/2, nu + 3/2)`.
    pub fn struve(nu: f64) -> Result<Self> {
        let pair = ParamPair::new(1.5, nu + 1.5)
            .map_err(|_| Error::Domain(format!("Struve order nu = {nu} hits a pole")))?;
        Ok(Self {
            pair,
            kernel: ConvolutionKernel::None,
            family: FamilyLabel::Struve { nu },
        })
    }

    /// `s_{mu,nu}`, pair from [`lommel_pair`].
    pub fn lommel(mu: f64, nu: f64) -> Result<Self> {
        Ok(Self {
            pair: lommel_pair(mu, nu)?,
            kernel: ConvolutionKernel::None,
            family: FamilyLabel::Lommel { mu, nu },
        })
    }

    pub fn raw(pair: ParamPair) -> Self {
        Self {
            pair,
            kernel: ConvolutionKernel::None,
            family: FamilyLabel::RawPair,
        }
    }

    pub fn with_kernel(mut self, kernel: ConvolutionKernel) -> Self {
        self.kernel = kernel;
        self
    }

    /// Coefficient of `z^(k+1)`.
    pub fn coefficient(&self, k: usize) -> f64 {
        self.kernel.sign(k) * coefficient(self.pair, k)
    }
}

/// Value of a truncated series with its certified error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

/// Nonnegative weight multiplying `c_k` in a summation. Each variant has a
/// nonincreasing ratio `w(k+1)/w(k)` wherever `w(k) > 0`, which is what the
/// geometric tail bound relies on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Weight {
    /// `(k+1) k ... (k+2-d)`: term-wise `d`-th derivative of `z^(k+1)`.
    Falling(u32),
    /// `slope * k + intercept` with nonnegative slope and intercept.
    Linear { slope: f64, intercept: f64 },
    /// `(k + 1) (slope * k + intercept)`.
    NextTimesLinear { slope: f64, intercept: f64 },
}

impl Weight {
    fn at(&self, k: usize) -> f64 {
        let kf = k as f64;
        match *self {
            Weight::Falling(d) => (0..d).map(|i| kf + 1.0 - i as f64).product(),
            Weight::Linear { slope, intercept } => slope * kf + intercept,
            Weight::NextTimesLinear { slope, intercept } => (kf + 1.0) * (slope * kf + intercept),
        }
    }
}

/// One summation problem: `sum_{k >= start} sign_k c_k w(k) z^(k+1-shift)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Summand {
    pub pair: ParamPair,
    pub kernel: ConvolutionKernel,
    pub weight: Weight,
    pub start: usize,
    pub z: Complex64,
    pub shift: u32,
}

enum Stop {
    Certified(f64),
    Forced(usize),
}

impl Summand {
    fn run(&self, stop: Stop) -> Result<EvalResult> {
        let (p, q) = (self.pair.p, self.pair.q);
        let z_abs = self.z.norm();
        let shift = self.shift as usize;
        let cap = match stop {
            Stop::Certified(_) => TERM_CAP,
            Stop::Forced(n) => n,
        };

        let mut value = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        let mut c: f64 = 1.0;
        // z^(k+1-shift), only meaningful once the exponent is nonnegative.
        let mut zpow = Complex64::new(1.0, 0.0);
        let mut last_bound = f64::INFINITY;

        for k in 0..=cap {
            let exponent = (k + 1) as isize - shift as isize;
            if exponent > 0 {
                zpow *= self.z;
            }
            let w = self.weight.at(k);

            if k >= self.start && w > 0.0 {
                let rounding = (3 * k + 2) as f64 * f64::EPSILON * abs_sum;
                let head = c.abs() * w * z_abs.powi(exponent.max(0) as i32);
                let (pk, qk) = (p + k as f64, q + k as f64);
                if pk > 0.0 && qk > 0.0 {
                    let ratio = self.weight.at(k + 1) / w * z_abs / (pk * qk);
                    if ratio < RATIO_GATE {
                        last_bound = head / (1.0 - ratio) + rounding;
                    } else {
                        last_bound = f64::INFINITY;
                    }
                } else {
                    last_bound = f64::INFINITY;
                }
                match stop {
                    Stop::Certified(rel_tol) => {
                        if last_bound <= rel_tol * value.norm().max(1.0) {
                            return Ok(EvalResult {
                                value,
                                tail_bound: last_bound,
                                terms_used: k,
                            });
                        }
                    }
                    Stop::Forced(n) if k == n => break,
                    Stop::Forced(_) => {}
                }
            }

            if k == cap {
                break;
            }
            if k >= self.start && w > 0.0 {
                let term = zpow * (self.kernel.sign(k) * c * w);
                value += term;
                abs_sum += term.norm();
            }
            c /= (p + k as f64) * (q + k as f64);
        }

        match stop {
            Stop::Certified(rel_tol) => Err(Error::NonConvergence {
                terms: TERM_CAP,
                tail_bound: last_bound,
                target: rel_tol * value.norm().max(1.0),
            }),
            Stop::Forced(n) => Ok(EvalResult {
                value,
                tail_bound: last_bound,
                terms_used: n,
            }),
        }
    }

    pub(crate) fn certified(&self, rel_tol: f64) -> Result<EvalResult> {
        check_tolerance(rel_tol)?;
        self.run(Stop::Certified(rel_tol))
    }

    pub(crate) fn forced(&self, n_terms: usize) -> EvalResult {
        self.run(Stop::Forced(n_terms))
            .expect("forced summation never fails")
    }
}

pub(crate) fn check_tolerance(rel_tol: f64) -> Result<()> {
    if rel_tol.is_finite() && rel_tol >= MIN_REL_TOL {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(rel_tol))
    }
}

fn derivative_summand(f: &NormalizedFunction, z: Complex64, order: u32) -> Result<Summand> {
    if order > 2 {
        return Err(Error::Domain(format!("derivative order {order} not in 0..=2")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1.0 + UNIT_DISK_SLACK {
        return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
    }
    Ok(Summand {
        pair: f.pair,
        kernel: f.kernel,
        weight: Weight::Falling(order),
        start: 0,
        z,
        shift: order,
    })
}

/// `order`-th derivative of `f` at `z`, `|z| <= 1`, certified to `rel_tol`.
pub fn series_eval(
    f: &NormalizedFunction,
    z: Complex64,
    order: u32,
    rel_tol: f64,
) -> Result<EvalResult> {
    derivative_summand(f, z, order)?.certified(rel_tol)
}

/// Same series as [`series_eval`], truncated after exactly `n_terms` terms.
/// `tail_bound` is infinite when the geometric majorant is not yet valid.
pub fn series_eval_terms(
    f: &NormalizedFunction,
    z: Complex64,
    order: u32,
    n_terms: usize,
) -> Result<EvalResult> {
    Ok(derivative_summand(f, z, order)?.forced(n_terms))
}

/// `S0 = sum c_k`, `S1 = sum (k+1) c_k`, `S2 = sum k (k+1) c_k`: value,
/// first and second derivative at `z = 1` of the all-positive series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySums {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
}

pub fn boundary_sums(pair: ParamPair, rel_tol: f64) -> Result<BoundarySums> {
    pair.require_positive()?;
    let f = NormalizedFunction::raw(pair).with_kernel(ConvolutionKernel::Alternating);
    let one = Complex64::new(1.0, 0.0);
    Ok(BoundarySums {
        s0: series_eval(&f, one, 0, rel_tol)?.value.re,
        s1: series_eval(&f, one, 1, rel_tol)?.value.re,
        s2: series_eval(&f, one, 2, rel_tol)?.value.re,
    })
}

/// `sum_{k >= start} w(k) c_k` for a positive pair.
pub(crate) fn weighted_coefficient_sum(
    pair: ParamPair,
    weight: Weight,
    start: usize,
    rel_tol: f64,
) -> Result<f64> {
    pair.require_positive()?;
    let summand = Summand {
        pair,
        kernel: ConvolutionKernel::Alternating,
        weight,
        start,
        z: Complex64::new(1.0, 0.0),
        shift: 0,
    };
    Ok(summand.certified(rel_tol)?.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Plain partial sums, independent of the certified engine.
    fn naive(pair: (f64, f64), weight: impl Fn(f64) -> f64, terms: usize) -> f64 {
        let mut c = 1.0;
        let mut s = 0.0;
        for k in 0..terms {
            s += weight(k as f64) * c;
            c /= (pair.0 + k as f64) * (pair.1 + k as f64);
        }
        s
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(2.5, 0).unwrap(), 1.0);
        assert_eq!(pochhammer(1.5, 2).unwrap(), 3.75);
        assert_eq!(pochhammer(1.0, 5).unwrap(), 120.0);
        assert_eq!(pochhammer(-2.0, 2).unwrap(), 2.0);
        assert!(matches!(pochhammer(-2.0, 3), Err(Error::Pole { .. })));
        assert!(matches!(pochhammer(0.0, 1), Err(Error::Pole { .. })));
        assert_eq!(pochhammer(0.0, 0).unwrap(), 1.0);
    }

    #[test]
    fn coefficient_values() {
        let pair = ParamPair::new(1.0, 2.0).unwrap();
        assert_eq!(coefficient(pair, 0), 1.0);
        assert_relative_eq!(coefficient(pair, 2), 1.0 / 12.0, max_relative = 1e-15);
        let pair = ParamPair::new(1.5, 1.5).unwrap();
        assert_relative_eq!(coefficient(pair, 1), 1.0 / 2.25, max_relative = 1e-15);
    }

    #[test]
    fn pair_rejects_poles_within_tolerance() {
        assert!(ParamPair::new(-1.0, 2.0).is_err());
        assert!(ParamPair::new(2.0, -3.0 + 1e-10).is_err());
        assert!(ParamPair::new(0.0, 1.0).is_err());
        assert!(ParamPair::new(-0.5, 1.0).is_ok());
        assert!(ParamPair::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn lommel_pair_reductions() {
        let nu = 0.75;
        let b = lommel_pair(nu - 1.0, nu).unwrap();
        assert_eq!((b.p(), b.q()), (1.0, nu + 1.0));
        let s = lommel_pair(nu, nu).unwrap();
        assert_eq!((s.p(), s.q()), (1.5, nu + 1.5));
        let z = lommel_pair(0.0, 0.0).unwrap();
        assert_eq!((z.p(), z.q()), (1.5, 1.5));
        // (mu - nu + 3)/2 = -1
        assert!(matches!(lommel_pair(-5.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn kernels_shape_coefficients() {
        let f = NormalizedFunction::bessel(1.0).unwrap();
        for k in 0..10 {
            let c = coefficient(f.pair, k);
            assert_eq!(f.coefficient(k), if k % 2 == 0 { c } else { -c });
            assert_eq!(f.with_kernel(ConvolutionKernel::Alternating).coefficient(k), c);
            let t = f.with_kernel(ConvolutionKernel::NegativeTail).coefficient(k);
            if k == 0 {
                assert_eq!(t, 1.0);
            } else {
                assert_eq!(t, -c);
            }
        }
    }

    #[test]
    fn value_at_origin_is_zero() {
        let f = NormalizedFunction::bessel(0.0)
            .unwrap()
            .with_kernel(ConvolutionKernel::Alternating);
        let r = series_eval(&f, Complex64::new(0.0, 0.0), 0, DEFAULT_REL_TOL).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        let d1 = series_eval(&f, Complex64::new(0.0, 0.0), 1, DEFAULT_REL_TOL).unwrap();
        assert_eq!(d1.value, Complex64::new(1.0, 0.0));
        let d2 = series_eval(&f, Complex64::new(0.0, 0.0), 2, DEFAULT_REL_TOL).unwrap();
        assert_relative_eq!(d2.value.re, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn modified_bessel_values_at_one() {
        let one = Complex64::new(1.0, 0.0);
        for (p, q, expected) in [(1.0, 1.0, 2.279_585_302_336_067), (1.0, 2.0, 1.590_636_854_637_329)] {
            let f = NormalizedFunction::raw(ParamPair::new(p, q).unwrap())
                .with_kernel(ConvolutionKernel::Alternating);
            let r = series_eval(&f, one, 0, DEFAULT_REL_TOL).unwrap();
            assert!((r.value.re - expected).abs() <= 1e-13);
            assert!((r.value.re - naive((p, q), |_| 1.0, 30)).abs() <= r.tail_bound + 1e-15);
            assert!(r.tail_bound <= DEFAULT_REL_TOL * r.value.norm());
        }
    }

    #[test]
    fn boundary_sums_pair_2_3() {
        let s = boundary_sums(ParamPair::new(2.0, 3.0).unwrap(), DEFAULT_REL_TOL).unwrap();
        assert!((s.s0 - naive((2.0, 3.0), |_| 1.0, 30)).abs() < 1e-12);
        assert!((s.s1 - naive((2.0, 3.0), |k| k + 1.0, 30)).abs() < 1e-12);
        assert!((s.s2 - naive((2.0, 3.0), |k| k * (k + 1.0), 30)).abs() < 1e-12);
        assert!(s.s1 >= s.s0 && s.s0 >= 1.0 && s.s2 >= 0.0);
    }

    #[test]
    fn boundary_sums_large_q() {
        let s = boundary_sums(ParamPair::new(1.0, 1e6).unwrap(), DEFAULT_REL_TOL).unwrap();
        assert!((s.s0 - 1.0).abs() < 2e-6);
        assert!(s.s2 < 3e-6);
    }

    #[test]
    fn boundary_sums_need_positive_pair() {
        let pair = ParamPair::new(-0.5, 2.0).unwrap();
        assert!(matches!(boundary_sums(pair, DEFAULT_REL_TOL), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = NormalizedFunction::struve(2.0).unwrap();
        assert!(series_eval(&f, Complex64::new(1.1, 0.0), 0, 1e-13).is_err());
        assert!(series_eval(&f, Complex64::new(0.5, 0.0), 3, 1e-13).is_err());
        assert!(matches!(
            series_eval(&f, Complex64::new(0.5, 0.0), 0, 1e-17),
            Err(Error::InvalidTolerance(_))
        ));
        assert!(NormalizedFunction::bessel(-2.0).is_err());
        assert!(NormalizedFunction::struve(-2.5).is_err());
    }

    #[test]
    fn unit_circle_point_accepted() {
        let f = NormalizedFunction::bessel(1.0).unwrap();
        let z = Complex64::from_polar(1.0, 0.3);
        assert!(series_eval(&f, z, 2, DEFAULT_REL_TOL).is_ok());
    }

    #[test]
    fn negative_entry_pair_still_certifies() {
        // Lommel with p < 0 is a valid series outside the criteria domain.
        let f = NormalizedFunction::raw(ParamPair::new(-2.5, 1.5).unwrap());
        let z = Complex64::new(0.9, 0.1);
        let r = series_eval(&f, z, 1, DEFAULT_REL_TOL).unwrap();
        let long = series_eval_terms(&f, z, 1, 200).unwrap();
        assert!((r.value - long.value).norm() <= r.tail_bound);
    }
}
