//! Finitely generated graded modules over Z/p^s and their morphisms.

mod matrix;
mod module;
mod morphism;
mod ring;
mod snf;

pub use matrix::Matrix;
pub use module::GradedModule;
pub use morphism::{BasisChange, FactorTensorViolation, ModuleMorphism};
pub use ring::{is_prime, RingSpec};
pub use snf::{
    cokernel_exponents, free_span, kernel_generators, rank_mod_p, relation_matrix, smith_normal_form_matrix, span_quotient,
    submodule_exponents, Invertible, SnfResult,
};
