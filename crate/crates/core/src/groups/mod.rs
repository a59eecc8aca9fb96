//! Finitely presented groups: presentations from 2-skeleta, abelianization
//! rank bounds, Tietze simplification, coset enumeration, low-index
//! subgroups and subgroup presentations.

pub mod abelian;
pub mod low_index;
pub mod presentation;
pub mod schreier;
pub mod table;
pub mod tietze;
pub mod todd_coxeter;
pub mod word;

pub use abelian::{
    abelianization, abelianization_min_generators, free_abelian_coordinates, mod_p_characters, mod_p_rank,
    RankBounds,
};
pub use low_index::{first_subgroup_of_index, low_index_subgroups};
pub use presentation::{
    presentation_from_complex, presentation_from_skeleton, EdgeWords, Presentation, PresentationError,
    SpanningTree,
};
pub use schreier::{reidemeister_schreier, SchreierPresentation};
pub use table::{CosetTable, TableError};
pub use tietze::{tietze_simplify, TietzeOutcome, TietzeState};
pub use todd_coxeter::{todd_coxeter, EnumerationError};
pub use word::{Letter, Word};
