//! Named membership criteria selectable at runtime.
//!
//! Each class has one [`MembershipCriterion`] registered under its CLI name
//! (`s-star`, `k`, `t-star`, `c`). Callers look criteria up by name or by
//! [`ClassId`]; extra criteria can be registered on a private registry.

use std::sync::{Arc, OnceLock};

use crate::criteria::{
    closed_form_lemma1, closed_form_lemma2, lemma1_sum, lemma2_sum, printed_bracket, ClassId,
    OrderTypeParams,
};
use crate::error::{Error, Result};
use crate::series::{BoundarySums, ParamPair};

pub trait MembershipCriterion: Send + Sync {
    fn class(&self) -> ClassId;

    fn name(&self) -> &'static str {
        self.class().name()
    }

    /// The coefficient sum compared against `2 beta (1 - alpha)`.
    fn coefficient_sum(&self, params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64>;

    /// The same quantity through boundary sums of the shifted pair.
    fn closed_form(&self, params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64>;

    /// Left-hand side of the printed closed-form inequality.
    fn printed_lhs(&self, params: OrderTypeParams, sums: &BoundarySums) -> f64 {
        printed_bracket(self.class(), params, sums)
    }
}

/// Starlike criterion: weight `k - 1 + beta (k + 1 - 2 alpha)`.
#[derive(Debug, Clone, Copy)]
pub struct StarlikeCriterion {
    class: ClassId,
}

/// Convex criterion: the starlike weight times `k`.
#[derive(Debug, Clone, Copy)]
pub struct ConvexCriterion {
    class: ClassId,
}

impl StarlikeCriterion {
    pub fn order_type() -> Self {
        Self { class: ClassId::StarlikeOT }
    }

    pub fn negative() -> Self {
        Self { class: ClassId::StarlikeNeg }
    }
}

impl ConvexCriterion {
    pub fn order_type() -> Self {
        Self { class: ClassId::ConvexOT }
    }

    pub fn negative() -> Self {
        Self { class: ClassId::ConvexNeg }
    }
}

impl MembershipCriterion for StarlikeCriterion {
    fn class(&self) -> ClassId {
        self.class
    }

    fn coefficient_sum(&self, params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64> {
        lemma1_sum(params, pair, rel_tol)
    }

    fn closed_form(&self, params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64> {
        closed_form_lemma1(params, pair, rel_tol)
    }
}

impl MembershipCriterion for ConvexCriterion {
    fn class(&self) -> ClassId {
        self.class
    }

    fn coefficient_sum(&self, params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64> {
        lemma2_sum(params, pair, rel_tol)
    }

    fn closed_form(&self, params: OrderTypeParams, pair: ParamPair, rel_tol: f64) -> Result<f64> {
        closed_form_lemma2(params, pair, rel_tol)
    }
}

#[derive(Clone, Default)]
pub struct CriterionRegistry {
    entries: Vec<Arc<dyn MembershipCriterion>>,
}

impl CriterionRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_builtin() -> Self {
        let mut registry = Self::new();
        registry.register(Arc::new(StarlikeCriterion::order_type()));
        registry.register(Arc::new(ConvexCriterion::order_type()));
        registry.register(Arc::new(StarlikeCriterion::negative()));
        registry.register(Arc::new(ConvexCriterion::negative()));
        registry
    }

    /// Adds `criterion`, replacing any entry with the same name.
    pub fn register(&mut self, criterion: Arc<dyn MembershipCriterion>) {
        self.entries.retain(|c| c.name() != criterion.name());
        self.entries.push(criterion);
    }

    pub fn get(&self, name: &str) -> Result<&dyn MembershipCriterion> {
        self.entries
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "class",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|c| c.name())
    }

    /// # Panics
    /// If no criterion for `class` was registered. The builtin registry has all four.
    pub fn for_class(&self, class: ClassId) -> &dyn MembershipCriterion {
        self.entries
            .iter()
            .rev()
            .find(|c| c.class() == class)
            .map(|c| c.as_ref())
            .unwrap_or_else(|| panic!("no criterion registered for class {class}"))
    }
}

/// Shared registry holding the four builtin criteria.
pub fn builtin() -> &'static CriterionRegistry {
    static REGISTRY: OnceLock<CriterionRegistry> = OnceLock::new();
    REGISTRY.get_or_init(CriterionRegistry::with_builtin)
}
