//! Split simple Lie algebras, their finite-order automorphisms and
//! eigenspace decompositions.

pub mod automorphism;
pub mod chevalley;
pub mod eigen;
pub mod roots;

pub use automorphism::{check_commuting, LieAutomorphism};
pub use chevalley::{SplitSimpleLieAlgebra, StructureConstant};
pub use eigen::{class_of, is_central_simple, simultaneous_eigenspaces, Class, EigenspaceDecomposition, Subalgebra};
pub use roots::{CartanType, Family, Root, RootSystem};
