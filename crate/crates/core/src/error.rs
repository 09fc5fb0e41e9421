use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Default bound on the number of encoded elements any single operation may
/// materialize or enumerate.
pub const DEFAULT_CAP: usize = 200_000;

/// Size limits shared by the enumerating operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cap: DEFAULT_CAP }
    }
}

impl Limits {
    pub fn new(cap: usize) -> Self {
        Limits { cap: cap.max(1) }
    }

    /// Fails with [`Error::SizeCapExceeded`] when `size` is above the cap.
    pub fn check(&self, what: &str, size: u128) -> Result<()> {
        if size > self.cap as u128 {
            Err(Error::SizeCapExceeded {
                what: what.to_string(),
                size,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }
}

/// `base^exp` without overflow.
pub(crate) fn pow_saturating(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{what} needs {size} elements, above the cap of {cap}")]
    SizeCapExceeded { what: String, size: u128, cap: usize },

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("element `{elem}` is not in {context}")]
    ElementNotFound { elem: String, context: String },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),

    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("function is not total: no image for `{0}`")]
    NotTotal(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("legs do not form a cocone: edge `{edge}` fails at `{elem}`")]
    NotACocone { edge: String, elem: String },

    #[error("no factorization through any colimit injection: {0}")]
    NoFactorization(String),

    #[error("no connecting path merges the two maps out of node `{0}`")]
    NoMerge(String),

    #[error("coalgebra is not recursive; cycle through {cycle:?}")]
    NotRecursive { cycle: Vec<String> },

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("edge `{edge}` is not a coalgebra morphism")]
    NotCoalgebraMorphism { edge: String },

    #[error("not a morphism: {0}")]
    NotMorphism(String),

    #[error("identity is not the only endomorphism; witness {witness:?}")]
    UniquenessFailed { witness: Vec<String> },

    #[error("candidate inverse fails: {0}")]
    NotInverse(String),

    #[error("structure map is not bijective")]
    NotBijective,

    #[error("no triangle exists for element `{elem}` of P")]
    NoTriangle { elem: String },

    #[error("generated coalgebra is not recursive: {0}")]
    RecursivenessFailed(String),

    #[error("generated map is not a coalgebra morphism: {0}")]
    MorphismFailed(String),

    #[error("unfolding partition disagrees with the colimit partition: {0}")]
    OracleMismatch(String),
}
