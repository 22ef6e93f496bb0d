//! Lattices, number fields and Diophantine certificates.

mod error;
pub mod numfield;
pub mod upoly;

pub use error::LatticeError;
pub use numfield::{AlgebraicNumber, Irreducibility, NfElement, NumberField};
pub use upoly::UPoly;
pub mod certificate;
pub use certificate::{diophantine_certificate, CertificateOptions, DiophantineCertificate, Provenance};
pub mod lattice;
pub use lattice::{check_closure, rescale_algebra, verify_lattice, ClosureOptions, LatticeSpec};
pub mod pair;
pub use pair::{
    build_diophantine_pair, diagonal_pair, flatness_defect, triangular_relation_check, verify_graded_automorphism,
    GradedStructure, LatticePair, PairOptions, RelationWord,
};
