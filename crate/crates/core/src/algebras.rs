//! A small corpus of standard nilpotent algebras in strong Malcev order.

use crate::lie::{validate_algebra, LieAlgebra, RawAlgebra};
use crate::scalar::int;

pub fn abelian(n: usize) -> LieAlgebra {
    validate_algebra(&RawAlgebra::new(n).with_grading(vec![1; n])).expect("abelian algebra is valid")
}

/// Heisenberg `h3`: `[X2, X3] = X1`, grading `(2, 1, 1)`.
pub fn heisenberg3() -> LieAlgebra {
    let raw = RawAlgebra::new(3).bracket(2, 3, &[(1, int(1))]).with_grading(vec![2, 1, 1]);
    validate_algebra(&raw).expect("h3 is valid")
}

/// Heisenberg `h5`: `[X2, X4] = [X3, X5] = X1`.
pub fn heisenberg5() -> LieAlgebra {
    let raw = RawAlgebra::new(5)
        .bracket(2, 4, &[(1, int(1))])
        .bracket(3, 5, &[(1, int(1))])
        .with_grading(vec![2, 1, 1, 1, 1]);
    validate_algebra(&raw).expect("h5 is valid")
}

/// Strictly upper triangular 4x4 matrices with basis
/// `(E14, E13, E24, E12, E23, E34)`.
pub fn upper_triangular4() -> LieAlgebra {
    let raw = RawAlgebra {
        basis_names: ["E14", "E13", "E24", "E12", "E23", "E34"].map(String::from).to_vec(),
        ..RawAlgebra::new(6)
    }
    .bracket(4, 5, &[(2, int(1))])
    .bracket(5, 6, &[(3, int(1))])
    .bracket(3, 4, &[(1, int(-1))])
    .bracket(2, 6, &[(1, int(1))])
    .with_grading(vec![3, 2, 2, 1, 1, 1]);
    validate_algebra(&raw).expect("ut4 is valid")
}

/// Standard filiform algebra of dimension 5 (step 4): `[A, B_i] = B_{i+1}`,
/// basis `(B4, B3, B2, B1, A)`.
pub fn filiform5() -> LieAlgebra {
    let raw = RawAlgebra {
        basis_names: ["B4", "B3", "B2", "B1", "A"].map(String::from).to_vec(),
        ..RawAlgebra::new(5)
    }
    .bracket(4, 5, &[(3, int(-1))])
    .bracket(3, 5, &[(2, int(-1))])
    .bracket(2, 5, &[(1, int(-1))])
    .with_grading(vec![4, 3, 2, 1, 1]);
    validate_algebra(&raw).expect("filiform algebra is valid")
}
