//! Symbolic toolkit for bivector fields on R⁴ = R³ × R written in the
//! vector-calculus form `Λ = (Ψ, Φ)`: Poisson tests, modular fields,
//! constructors for Poisson families, Poisson maps and Hamiltonian flows.

pub mod catalog;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod families;
pub mod io;
pub mod flow;
pub mod maps;
pub mod multivec;
pub mod poisson;
pub mod random;
pub mod veccalc;

pub use catalog::{CatalogEntry, EntryReport};
pub use error::{Error, Result};
pub use expr::{Point4, SampleConfig, ScalarExpr, Var, ZeroVerdict};
pub use io::TensorFile;
pub use maps::Diffeo4;
pub use multivec::{Multivector, OneForm, MV1, MV2, MV3, MV4};
pub use poisson::audit::{AuditCorpus, AuditReport};
pub use poisson::PoissonCandidate;
pub use veccalc::{Mat3Expr, Vec3Expr};
