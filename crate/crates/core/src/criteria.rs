//! Coefficient-sum membership criteria for the starlike and convex classes
//! of order `alpha` and type `beta`.
//!
//! For a function `z + sum_{k>=2} a_k z^k` the starlike criterion is
//!
//! ```text
//! sum_{k>=2} [k - 1 + beta (k + 1 - 2 alpha)] |a_k| <= 2 beta (1 - alpha)
//! ```
//!
//! and the convex criterion carries an extra factor `k` inside the sum. Both
//! are sufficient for positive-coefficient series and exact (necessary and
//! sufficient) for the negative-tail form `z - sum a_k z^k`.
//!
//! The normalized functions have `a_k = c_{k-1}`. Shifting the index with
//! `(a)_{k+1} = a (a+1)_k` rewrites both sums through the boundary values
//! `S0, S1, S2` of the pair `(p+1, q+1)`:
//!
//! ```text
//! L = [ (1+beta) S1 + 2 beta (1-alpha) S0 ] / (p q)
//! F = [ (1+beta) S2 + 2 (1 + 2 beta - alpha beta) S1 + 2 beta (1-alpha) S0 ] / (p q)
//! ```
//!
//! The direct sums are the ground truth; the closed forms are an
//! independent route that must agree with them.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::registry;
use crate::series::{
    boundary_sums, check_tolerance, weighted_coefficient_sum, BoundarySums, ConvolutionKernel,
    FamilyLabel, NormalizedFunction, ParamPair, Weight,
};

/// Multiplier on `rel_tol * max(1, sum)` used for sum/closed-form agreement
/// and for flagging verdicts that sit on the threshold.
pub const COMBINED_TOL_FACTOR: f64 = 8.0;

/// Class parameters: order `alpha` in `[0, 1)` and type `beta` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderTypeParams {
    alpha: f64,
    beta: f64,
}

impl OrderTypeParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::Domain(format!("alpha = {alpha} not in [0, 1)")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::Domain(format!("beta = {beta} not in (0, 1]")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `2 beta (1 - alpha)`.
    pub fn threshold(&self) -> f64 {
        2.0 * self.beta * (1.0 - self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ClassId {
    /// `S*(alpha, beta)`.
    #[serde(rename = "s-star")]
    StarlikeOT,
    /// `K(alpha, beta)`.
    #[serde(rename = "k")]
    ConvexOT,
    /// `T*(alpha, beta)`: starlike with negative coefficients.
    #[serde(rename = "t-star")]
    StarlikeNeg,
    /// `C(alpha, beta)`: convex with negative coefficients.
    #[serde(rename = "c")]
    ConvexNeg,
}

impl ClassId {
    pub const ALL: [ClassId; 4] = [
        ClassId::StarlikeOT,
        ClassId::ConvexOT,
        ClassId::StarlikeNeg,
        ClassId::ConvexNeg,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ClassId::StarlikeOT => "s-star",
            ClassId::ConvexOT => "k",
            ClassId::StarlikeNeg => "t-star",
            ClassId::ConvexNeg => "c",
        }
    }

    /// Exact classes have a necessary and sufficient criterion.
    pub fn is_exact(&self) -> bool {
        matches!(self, ClassId::StarlikeNeg | ClassId::ConvexNeg)
    }

    pub fn is_convex(&self) -> bool {
        matches!(self, ClassId::ConvexOT | ClassId::ConvexNeg)
    }

    pub fn required_kernel(&self) -> ConvolutionKernel {
        if self.is_exact() {
            ConvolutionKernel::NegativeTail
        } else {
            ConvolutionKernel::Alternating
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "class",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NotMember,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Member => "member",
            Verdict::NotMember => "not-member",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The membership inequality as printed in closed form for the Lommel,
/// Struve and Bessel lines, evaluated verbatim.
///
/// The printed right-hand side is `2 beta (1-alpha) / (p q)`, while the
/// shift identity gives `L <= 2 beta (1-alpha)` iff the bracket is at most
/// `2 beta (1-alpha) p q`: the printed bound divides where it should
/// multiply. The printed convex bracket also uses `2 (1+beta)` and
/// `2 (1-alpha)(2 beta - 1)` where the expansion gives
/// `2 (1 + 2 beta - alpha beta)` and `2 beta (1-alpha)`. The Bessel and
/// Struve lines evaluate the bracket on `(1, nu+2)` and `(3/2, nu+7/2)`,
/// which are not the shifted pairs `(2, nu+2)` and `(5/2, nu+5/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrintedInequality {
    /// Pair whose boundary sums enter the printed bracket.
    pub boundary_pair: ParamPair,
    pub lhs: f64,
    pub rhs: f64,
    /// Bracket bound implied by the coefficient sum: `2 beta (1-alpha) p q`.
    pub consistent_rhs: f64,
    pub printed_member: bool,
    pub agrees_with_sum_verdict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionReport {
    pub class: ClassId,
    pub params: OrderTypeParams,
    pub pair: ParamPair,
    /// Direct coefficient sum.
    pub sum_value: f64,
    /// `2 beta (1 - alpha)`.
    pub threshold: f64,
    /// Boundary-sum closed form of the same quantity.
    pub closed_form_value: f64,
    pub verdict: Verdict,
    /// `threshold - sum_value`.
    pub margin: f64,
    /// `|margin|` within the combined evaluation tolerance.
    pub near_boundary: bool,
    pub paper_rhs_comparison: Option<PrintedInequality>,
}

fn lemma1_weight(params: OrderTypeParams) -> Weight {
    // j + beta (j + 2 - 2 alpha) with j = k - 1
    Weight::Linear {
        slope: 1.0 + params.beta,
        intercept: 2.0 * params.beta * (1.0 - params.alpha),
    }
}

fn lemma2_weight(params: OrderTypeParams) -> Weight {
    Weight::NextTimesLinear {
        slope: 1.0 + params.beta,
        intercept: 2.0 * params.beta * (1.0 - params.alpha),
    }
}

/// `sum_{k>=2} [k - 1 + beta (k + 1 - 2 alpha)] c_{k-1}`.
pub fn lemma1_sum(params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64> {
    weighted_coefficient_sum(pair, lemma1_weight(params), 1, rel_tol)
}

/// `sum_{k>=2} k [k - 1 + beta (k + 1 - 2 alpha)] c_{k-1}`.
pub fn lemma2_sum(params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64> {
    weighted_coefficient_sum(pair, lemma2_weight(params), 1, rel_tol)
}

pub(crate) fn lemma1_bracket(params: OrderTypeParams, sums: &BoundarySums) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    (1.0 + b) * sums.s1 + 2.0 * b * (1.0 - a) * sums.s0
}

pub(crate) fn lemma2_bracket(params: OrderTypeParams, sums: &BoundarySums) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    (1.0 + b) * sums.s2 + 2.0 * (1.0 + 2.0 * b - a * b) * sums.s1 + 2.0 * b * (1.0 - a) * sums.s0
}

/// Lemma-1 sum through `S0, S1` of `(p+1, q+1)`.
pub fn closed_form_lemma1(params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64> {
    pair.require_positive()?;
    let sums = boundary_sums(pair.shifted(), rel_tol)?;
    Ok(lemma1_bracket(params, &sums) / pair.product())
}

/// Lemma-2 sum through `S0, S1, S2` of `(p+1, q+1)`.
pub fn closed_form_lemma2(params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64> {
    pair.require_positive()?;
    let sums = boundary_sums(pair.shifted(), rel_tol)?;
    Ok(lemma2_bracket(params, &sums) / pair.product())
}

pub(crate) fn printed_bracket(class: ClassId, params: OrderTypeParams, sums: &BoundarySums) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    if class.is_convex() {
        (1.0 + b) * sums.s2 + 2.0 * (1.0 + b) * sums.s1 + 2.0 * (1.0 - a) * (2.0 * b - 1.0) * sums.s0
    } else {
        (1.0 + b) * sums.s1 + 2.0 * b * (1.0 - a) * sums.s0
    }
}

/// Pair fed to the printed bracket for each family line.
pub fn printed_boundary_pair(f: &NormalizedFunction) -> Result<ParamPair> {
    match f.family {
        FamilyLabel::Bessel { nu } => ParamPair::new(1.0, nu + 2.0),
        FamilyLabel::Struve { nu } => ParamPair::new(1.5, nu + 3.5),
        FamilyLabel::Lommel { .. } | FamilyLabel::RawPair => Ok(f.pair.shifted()),
    }
}

/// Evaluate the printed closed-form inequality and compare it with the
/// coefficient-sum verdict in `report`.
pub fn printed_inequality(
    f: &NormalizedFunction,
    report: &CriterionReport,
    rel_tol: f64,
) -> Result<PrintedInequality> {
    let boundary_pair = printed_boundary_pair(f)?;
    let sums = boundary_sums(boundary_pair, rel_tol)?;
    let lhs = registry::builtin()
        .for_class(report.class)
        .printed_lhs(report.params, &sums);
    let rhs = report.threshold / f.pair.product();
    let printed_member = lhs <= rhs;
    Ok(PrintedInequality {
        boundary_pair,
        lhs,
        rhs,
        consistent_rhs: report.threshold * f.pair.product(),
        printed_member,
        agrees_with_sum_verdict: printed_member == (report.verdict == Verdict::Member),
    })
}

pub fn combined_tolerance(rel_tol: f64, sum: f64) -> f64 {
    COMBINED_TOL_FACTOR * rel_tol * sum.abs().max(1.0)
}

/// Decide membership of `f` in `class` from the coefficient sum.
pub fn check_membership(
    f: &NormalizedFunction,
    class: ClassId,
    params: OrderTypeParams,
    rel_tol: f64,
) -> Result<CriterionReport> {
    check_tolerance(rel_tol)?;
    let required = class.required_kernel();
    if f.kernel != required {
        return Err(Error::KernelMismatch {
            class: class.name(),
            expected: required.name(),
            found: f.kernel.name(),
        });
    }
    f.pair.require_positive()?;

    let criterion = registry::builtin().for_class(class);
    let sum_value = criterion.coefficient_sum(params, f.pair, rel_tol)?;
    let closed_form_value = criterion.closed_form(params, f.pair, rel_tol)?;
    let threshold = params.threshold();
    let margin = threshold - sum_value;
    let near_boundary = margin.abs() <= combined_tolerance(rel_tol, sum_value);

    let verdict = if margin >= 0.0 || near_boundary {
        Verdict::Member
    } else if class.is_exact() {
        Verdict::NotMember
    } else {
        Verdict::Inconclusive
    };

    Ok(CriterionReport {
        class,
        params,
        pair: f.pair,
        sum_value,
        threshold,
        closed_form_value,
        verdict,
        margin,
        near_boundary,
        paper_rhs_comparison: None,
    })
}

/// [`check_membership`] with the printed-inequality diagnostic attached.
pub fn check_membership_with_printed(
    f: &NormalizedFunction,
    class: ClassId,
    params: OrderTypeParams,
    rel_tol: f64,
) -> Result<CriterionReport> {
    let mut report = check_membership(f, class, params, rel_tol)?;
    report.paper_rhs_comparison = Some(printed_inequality(f, &report, rel_tol)?);
    Ok(report)
}

/// Membership with `beta = 1` (classical order-`alpha` classes).
pub fn corollary_beta1(
    f: &NormalizedFunction,
    class: ClassId,
    alpha: f64,
    rel_tol: f64,
) -> Result<CriterionReport> {
    check_membership(f, class, OrderTypeParams::new(alpha, 1.0)?, rel_tol)
}
