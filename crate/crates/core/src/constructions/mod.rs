//! Example catalog, 𝔨-nilpotent triples, the nilpotent BAS decision,
//! canonical Ambrose–Singer connections, naturally reductive witnesses and
//! BAS products.

pub mod canonical;
pub mod catalog;
pub mod knil;
pub mod nildecide;
pub mod product;
pub mod witness;

pub use catalog::{catalog_build, CatalogEntry};
pub use knil::{build_k_nilpotent, verify_k_nilpotent, KNilpotent, KNilpotentSpec};
pub use nildecide::{decide_nilpotent_bas, NilDecision, NilVerdict, Obstruction};
pub use canonical::{canonical_as_connection, AsInput, CanonicalAs, TorusBundle};
pub use product::{product_bas, ProductFactor};
pub use witness::{natred_witness, ComplexSemisimpleData, NatredWitness, TorusWitnessData, WitnessInput};
