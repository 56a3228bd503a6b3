//! Runs the code listings in `book/src` as doctests, one module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/linear-algebra.md")]
pub mod linear_algebra {}
#[doc = include_str!("../../../book/src/coefficients.md")]
pub mod coefficients {}
#[doc = include_str!("../../../book/src/manifolds.md")]
pub mod manifolds {}
#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}
#[doc = include_str!("../../../book/src/blob-complex.md")]
pub mod blob_complex {}
#[doc = include_str!("../../../book/src/hocolim.md")]
pub mod hocolim {}
#[doc = include_str!("../../../book/src/hochschild.md")]
pub mod hochschild {}
#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
