//! Thompson's group F: tree pairs, normal forms, words and growth.

mod growth;
mod normal;
mod pair;
mod tree;
mod word;

pub use growth::{ball_sizes, growth_count, growth_series, DEFAULT_BUDGET};
pub use normal::{NormalForm, DECODE_LIMIT};
pub(crate) use pair::refine;
pub use pair::TreePair;
pub use tree::Tree;
pub use word::{
    expand_generator, format_fword, free_reduce, invert_word, is_identity_f, parse_fword,
    word_to_element, FLetter, FWord,
};
