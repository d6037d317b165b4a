//! Normalized Lommel, Struve and Bessel functions of the first kind and
//! their membership in the starlike and convex classes of order `alpha`
//! and type `beta`.
//!
//! ```
//! use lommel_core::{check_membership, ClassId, ConvolutionKernel, NormalizedFunction,
//!     OrderTypeParams, Verdict, DEFAULT_REL_TOL};
//!
//! let f = NormalizedFunction::bessel(2.0)?.with_kernel(ConvolutionKernel::NegativeTail);
//! let params = OrderTypeParams::new(0.0, 1.0)?;
//! let report = check_membership(&f, ClassId::StarlikeNeg, params, DEFAULT_REL_TOL)?;
//! assert_eq!(report.verdict, Verdict::Member);
//! # Ok::<(), lommel_core::Error>(())
//! ```

pub mod criteria;
pub mod disk;
pub mod error;
pub mod registry;
pub mod scan;
pub mod series;

pub use criteria::{
    check_membership, check_membership_with_printed, closed_form_lemma1, closed_form_lemma2,
    corollary_beta1, lemma1_sum, lemma2_sum, ClassId, CriterionReport, OrderTypeParams,
    PrintedInequality, Verdict,
};
pub use disk::{
    convex_sup, cross_validate, starlike_sup, ConsistencyFlag, ConsistencyReport, DiskGrid,
    SupReport,
};
pub use error::{Error, Result};
pub use registry::{CriterionRegistry, MembershipCriterion};
pub use scan::{scan_grid, threshold_bisect, FamilyLine, Range, ScanRow, ThresholdResult};
pub use series::{
    boundary_sums, coefficient, lommel_pair, pochhammer, series_eval, series_eval_terms,
    BoundarySums, ConvolutionKernel, EvalResult, FamilyLabel, NormalizedFunction, ParamPair,
    DEFAULT_REL_TOL,
};
