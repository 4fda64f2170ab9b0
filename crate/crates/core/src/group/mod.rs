//! Finitely generated groups and their finite windows (balls in the word
//! metric).

mod elem;
mod window;

pub use elem::{free_root, letter_char, Elem, FiniteGroup, Group, GroupSpec};
pub use window::{Ball, GroupWindow, WindowOptions, DEFAULT_WINDOW_CAP};
