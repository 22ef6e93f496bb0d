//! Exact nilpotent Lie algebra machinery: validation, lower central series,
//! BCH, second-kind Malcev coordinates and reduction modulo a lattice.

mod algebra;
mod bch;
mod group_law;
mod series;

pub use algebra::{quotient_algebra, validate_algebra, AlgebraElement, AlgebraError, LieAlgebra, RawAlgebra};
pub use bch::{bch_product, coords_from_log, log_from_coords};
pub use group_law::{multiply_via_bch, reduce_mod_lattice, reduce_mod_lattice_f64, GroupLaw};
pub use series::{lower_central_series, LowerCentralSeries};

/// Convenience alias: a point of `N` in second-kind coordinates.
pub type GroupElementSK<S> = Vec<S>;

pub fn compile_group_law(alg: &LieAlgebra) -> std::sync::Arc<GroupLaw> {
    alg.group_law()
}

#[cfg(test)]
mod tests;
