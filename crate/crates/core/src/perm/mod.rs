//! Permutations of {1..N}, conjugacy classes of S_N and its characters.

mod characters;
mod group;

pub use characters::{
    decompose_character, irreducible_characters, irrep_label, CharacterTable, Decomposition,
    IrrepLabel, Partition,
};
pub use group::{conjugacy_class, generates_group, CycleType, Perm, SymGroup};
