//! Differential graded free Lie algebras: derivations, bigraded homology, the
//! cycles τ_k and σ_k, acyclic bases and weighted-dimension bounds.

mod acyclic;
mod cycles;
mod differential;
mod homology;
mod weights;

pub use acyclic::{acyclic_basis, AcyclicBasis, BasisPair, BigradedComplex, Spot};
pub use cycles::{classes_independent, is_cycle_mod_p, sigma, sigma_coefficients, tau};
pub use differential::DifferentialSpec;
pub use homology::{homology, homology_of, LieWeightComplex, WeightHomology};
pub use weights::{
    boundary_growth, check_weight_inequalities, weight_totals, weighted_dim, BoundaryBoundRow, BoundaryGrowth,
    InequalityReport, InequalityRow, WeightTotals,
};
