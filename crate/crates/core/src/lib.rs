pub mod corpus;
pub mod embed;
pub mod error;
pub mod lp;
mod par;
pub mod powerlog;
pub mod quad;
pub mod rearrange;
pub mod rispace;
pub mod smoothness;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
pub use powerlog::PowerLog;
pub use rearrange::StepDecreasing;
pub use rispace::{Exponent, Family, RISpaceSpec, Young};
pub use space::{Space, SpaceDiagnostics};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/rearrangements.md")]
    mod rearrangements {}
    #[doc = include_str!("../../../book/src/ri_spaces.md")]
    mod ri_spaces {}
    #[doc = include_str!("../../../book/src/smoothness.md")]
    mod smoothness {}
    #[doc = include_str!("../../../book/src/embeddings.md")]
    mod embeddings {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
