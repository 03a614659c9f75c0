//! The extension of F by a free group of stable letters acting through
//! automorphisms of F, with canonical forms and a word problem solver.

mod element;
mod group;
mod presentation;

pub use element::{
    format_gword, free_reduce_gword, invert_gword, parse_gword, push_stable, GElement, GGen, GLetter, GWord,
};
pub use group::{
    build_action_generators, f_relators, ExtensionGroup, ExtensionPresentation, GroupBundle, WpPhase,
    BUNDLE_VERSION, DEFAULT_KNOT_BUDGET,
};
pub use presentation::{PresentationFile, SourceLetter, SourcePresentation};
