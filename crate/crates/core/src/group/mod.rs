//! Finite groups as Cayley tables, subgroup machinery, characters and dual
//! groups, plus the integer lattice descriptor.

mod character;
mod subgroup;
mod table;

pub use character::{
    characters_of, dual_group, extend_character, extend_character_with_tol, root_of_unity,
    CharacterMap, Conflict, DualGroup, PHASE_TOL,
};
pub(crate) use table::permutations;
pub use subgroup::{
    all_subgroups, derived_subgroup, left_cosets, right_cosets, semigroup_closure,
    subgroup_closure, Subgroup,
};
pub use table::{GroupJson, GroupSpec, GroupTable, LatticeGroup, MAX_ORDER};
