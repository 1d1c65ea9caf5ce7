//! The guide chapters from `book/src`, included here so that
//! `cargo test --doc` compiles and runs every snippet in the book. The
//! modules exist only while rustdoc collects doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/states-and-spectra.md")]
pub mod states_and_spectra {}

#[doc = include_str!("../../../book/src/work-and-capacity.md")]
pub mod work_and_capacity {}

#[doc = include_str!("../../../book/src/entropy-and-coherence.md")]
pub mod entropy_and_coherence {}

#[doc = include_str!("../../../book/src/thermal-limits.md")]
pub mod thermal_limits {}

#[doc = include_str!("../../../book/src/capacity-gaps.md")]
pub mod capacity_gaps {}

#[doc = include_str!("../../../book/src/monte-carlo.md")]
pub mod monte_carlo {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_guide {}
