//! Carriers, elements and the operations derived from `⊕`.

mod carrier;
mod element;
mod finite;
mod symbolic;
mod verify;

pub use carrier::{build, build_with_limit, AlgebraSpec, Carrier, DEFAULT_MAX_CARRIER};
pub use element::Element;
pub use finite::{DerivedOps, FiniteEmv, NaturalOrder};
pub use symbolic::SymbolicEmv;
pub use verify::{
    verify_axioms, verify_finite, verify_symbolic, AxiomId, AxiomReport, Violation, PAIR_CAP,
    TRIPLE_CAP,
};

/// Failures of algebra construction and of the derived operations.
///
/// Element witnesses are rendered as labels (finite carriers) or JSON text
/// (symbolic carriers) so that every error is self-describing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("products of symbolic families are not supported")]
    UnsupportedProduct,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("carrier has {size} elements, limit is {max}")]
    CarrierTooLarge { size: usize, max: usize },
    #[error("natural order is not a partial order at ({x}, {y})")]
    NotPartialOrder { x: String, y: String },
    #[error("{x} and {y} have no join or no meet")]
    NotALattice { x: String, y: String },
    #[error("distributivity fails at ({x}, {y}, {z})")]
    NotDistributive { x: String, y: String, z: String },
    #[error("{a} is not idempotent")]
    NotIdempotent { a: String },
    #[error("{x} is not below {a}")]
    NotBelow { x: String, a: String },
    #[error("no least z <= {a} with z + {x} = {a}")]
    NoMinimum { a: String, x: String },
    #[error("no idempotent lies above {x}")]
    NoIdempotentCover { x: String },
    #[error("algebra already has a top element")]
    HasTop,
    #[error("{element} does not belong to the carrier")]
    ForeignElement { element: String },
}

impl AlgebraError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            AlgebraError::MalformedTable(_) => "MalformedTable",
            AlgebraError::UnsupportedProduct => "UnsupportedProduct",
            AlgebraError::InvalidParameter(_) => "InvalidParameter",
            AlgebraError::CarrierTooLarge { .. } => "CarrierTooLarge",
            AlgebraError::NotPartialOrder { .. } => "NotPartialOrder",
            AlgebraError::NotALattice { .. } => "NotALattice",
            AlgebraError::NotDistributive { .. } => "NotDistributive",
            AlgebraError::NotIdempotent { .. } => "NotIdempotent",
            AlgebraError::NotBelow { .. } => "NotBelow",
            AlgebraError::NoMinimum { .. } => "NoMinimum",
            AlgebraError::NoIdempotentCover { .. } => "NoIdempotentCover",
            AlgebraError::HasTop => "HasTop",
            AlgebraError::ForeignElement { .. } => "ForeignElement",
        }
    }

    /// The elements involved, in the order they appear in the message.
    pub fn witness(&self) -> Vec<String> {
        match self {
            AlgebraError::NotPartialOrder { x, y } | AlgebraError::NotALattice { x, y } => {
                vec![x.clone(), y.clone()]
            }
            AlgebraError::NotDistributive { x, y, z } => vec![x.clone(), y.clone(), z.clone()],
            AlgebraError::NotIdempotent { a } => vec![a.clone()],
            AlgebraError::NotBelow { x, a } => vec![x.clone(), a.clone()],
            AlgebraError::NoMinimum { a, x } => vec![a.clone(), x.clone()],
            AlgebraError::NoIdempotentCover { x } => vec![x.clone()],
            AlgebraError::ForeignElement { element } => vec![element.clone()],
            AlgebraError::CarrierTooLarge { size, max } => vec![size.to_string(), max.to_string()],
            _ => Vec::new(),
        }
    }
}
