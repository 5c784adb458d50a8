//! L∞-algebras, L∞-modules and their morphisms over F₂, together with
//! restriction of scalars along an L∞-morphism.

pub mod bundle;
pub mod error;
pub mod fixtures;
pub mod gfa;
pub mod linfty;
pub mod oracle;
pub mod perm;
pub mod restrict;

pub use bundle::{Bundle, Document, Kind, VerifyReport};
pub use error::{Error, Result};
pub use gfa::{Basis, Degree, Elem, GradedSpace, Signature, SymMultiMap};
pub use linfty::{compose, LinfAlgebra, LinfModule, LinfMorphism, ModuleMorphism};
pub use perm::{BlockSpec, Perm};
pub use restrict::{
    check_functoriality, classical_restriction, restrict_module, restrict_morphism, RestrictionContext,
};
