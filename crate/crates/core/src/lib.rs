//! A finite universal-algebra workbench for semilattice sums.
//!
//! The crate decides whether a finite algebra decomposes as a
//! semilattice sum of algebras from a given variety, produces bounded
//! prolongation bases, constructs Płonka and Lallement sums, and ships
//! a fixture suite of small worked examples.
//!
//! The pieces:
//!
//! - [`signature`] and [`term`]: similarity types, terms, parsing and
//!   bounded term enumeration;
//! - [`equation`]: identities, quasi-identities, axiom sets, the
//!   prolongation generator and the partition-operation laws;
//! - [`algebra`]: finite algebras as operation tables with exhaustive
//!   satisfaction checking and the `.ualg` format;
//! - [`congruence`]: partitions, congruence generation, the semilattice
//!   replica and congruence enumeration for tiny carriers;
//! - [`maltsev`]: decomposition and membership in products with the
//!   variety of semilattices;
//! - [`sums`]: Płonka sums, Lallement sums, unit-derived strict sums,
//!   free semilattices and the `.sum` format;
//! - [`search`]: bounded model enumeration, left-zero sum generation,
//!   separating-model search and the band census;
//! - [`fixtures`]: shipped examples and the scripted verification suite.

pub mod algebra;
pub mod congruence;
pub mod equation;
pub mod fixtures;
pub mod maltsev;
pub mod search;
pub mod signature;
pub mod sums;
pub mod term;

pub use algebra::{parse_ualg_file, write_ualg, AlgebraError, FiniteAlgebra, Verdict};
pub use congruence::{
    all_congruences, congruence_generated, is_congruence, semilattice_replica, CongruenceError,
    Partition, Relation,
};
pub use equation::{
    canonical_binary, plonka_axioms, prolong, prolong_set, pseudo_plonka_axioms,
    quasi_regularization_quasi_identity, semilattice_base, strongly_irregular_witnesses, AxiomSet,
    EquationError, Identity, QuasiIdentity,
};
pub use maltsev::{
    check_three_permutability, decompose, in_product_with_s, in_relative_product, Decomposition,
    MembershipReport, PartitionOpReport,
};
pub use search::{
    band_census, enumerate_lz_sums, enumerate_models, find_separating_model, SearchError,
    SearchOutcome, SearchSpec,
};
pub use signature::{Signature, SignatureError};
pub use sums::{
    free_semilattice, lallement_sum, parse_sum_file, plonka_sum, strict_lallement_from_units,
    LallementData, PlonkaSystem, SumError, UnitData,
};
pub use term::{enumerate_terms, Term, TermError};
