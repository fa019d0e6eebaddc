//! Free nonassociative algebras, Hall basic products, the Witt formula and the
//! tensor algebra T(V) with its graded-commutator embedding.

mod generators;
mod hall;
mod span;
mod tensor;
mod tree;

pub use generators::{Generator, GeneratorSet, Letter, Word};
pub use hall::{basic_products, basic_products_upto, mobius, witt, witt_multigraded};
pub use span::{
    all_trees, lie_component, pbw_series_diagnostic, right_normed_images, words_of_length, DegreeBlock, LieComponent,
    PbwReport, PbwRow, WeightSpace,
};
pub use tensor::{embed_tensor, embed_tree, tensor_dim, TensorElement};
pub use tree::{BracketTree, FreeNAElement};
