//! Named order relations behind a common trait so callers (the CLI in
//! particular) can pick one at runtime.

use super::{garbling_order, k_decision_order, zonotope_order, OrderError};
use crate::channel::Channel;

/// A one-directional order relation between channels on a shared input
/// alphabet.
pub trait OrderRelation {
    /// Stable name used for registry lookup and reporting.
    fn name(&self) -> String;
    /// Does `kappa` dominate `mu` in this order?
    fn holds(&self, kappa: &Channel, mu: &Channel) -> Result<bool, OrderError>;
}

/// Outcome of evaluating a named relation in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub order: String,
    pub forward: bool,
    pub backward: bool,
}

struct Garbling;

impl OrderRelation for Garbling {
    fn name(&self) -> String {
        "garbling".into()
    }

    fn holds(&self, kappa: &Channel, mu: &Channel) -> Result<bool, OrderError> {
        Ok(garbling_order(kappa, mu)?.holds())
    }
}

struct ZonotopeInclusion;

impl OrderRelation for ZonotopeInclusion {
    fn name(&self) -> String {
        "zonotope".into()
    }

    fn holds(&self, kappa: &Channel, mu: &Channel) -> Result<bool, OrderError> {
        zonotope_order(kappa, mu)
    }
}

struct KDecision {
    k: usize,
}

impl OrderRelation for KDecision {
    fn name(&self) -> String {
        format!("k-decision(k={})", self.k)
    }

    fn holds(&self, kappa: &Channel, mu: &Channel) -> Result<bool, OrderError> {
        k_decision_order(kappa, mu, self.k)
    }
}

/// All registered relation names, in the order the CLI advertises them.
pub fn order_registry() -> Vec<&'static str> {
    vec!["garbling", "zonotope", "k-decision"]
}

/// Look up a relation by name. `k` is only consulted for `k-decision`.
pub fn order_by_name(name: &str, k: usize) -> Option<Box<dyn OrderRelation>> {
    match name {
        "garbling" | "blackwell" => Some(Box::new(Garbling)),
        "zonotope" => Some(Box::new(ZonotopeInclusion)),
        "k-decision" => {
            if k == 0 {
                None
            } else {
                Some(Box::new(KDecision { k }))
            }
        }
        _ => None,
    }
}

impl dyn OrderRelation {
    /// Evaluate the relation in both directions.
    pub fn compare(&self, kappa: &Channel, mu: &Channel) -> Result<OrderReport, OrderError> {
        Ok(OrderReport {
            order: self.name(),
            forward: self.holds(kappa, mu)?,
            backward: self.holds(mu, kappa)?,
        })
    }
}
