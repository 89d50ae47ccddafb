//! Exact homology computations for étale groupoids given combinatorially:
//! shifts of finite type, Bratteli diagrams, tower partitions and ℤᴺ marker sets.

pub mod af;
pub mod checks;
pub mod sft;
pub mod towers;
pub mod zn_lab;
pub mod zmat;

pub use zmat::{AbelianGroupPresentation, DirectedGroupSystem, IntMatrix};
