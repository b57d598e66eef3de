//! Characters of F_{q^n}, the characteristic functions ρ_s and κ_g, hybrid
//! character sums and Weil-bound validation.

pub mod characters;
pub mod sums;
pub mod weil;

pub use characters::{AddCharacter, CharContext, MultCharacter};
pub use sums::{round_indicator, INDICATOR_TOLERANCE};
pub use weil::{Hypothesis, WeilData, WeilInstance, WeilReport};
