//! Homogeneous Hilbert curves (HHC) and their arbitrary-kernel
//! generalisation (HHCK).
//!
//! Curves are grown from a seed path (the *kernel*) by one of twelve
//! fixed sets of four affine maps. Two independent generators are
//! provided:
//!
//! - [`affine`] applies the integer affine maps to grid cells.
//! - [`tag`] rewrites stroke strings with letter morphisms.
//!
//! Both must produce identical paths. The [`locality`] module measures how
//! well a curve preserves neighbourhoods: the dilation factor, the
//! per-cell difference map and quantities derived from it.
//!
//! ```
//! use hhck::{affine::build_curve, kernel::KernelSpec};
//!
//! let unit = KernelSpec::unit();
//! let hilbert = build_curve(0, 3, &unit).unwrap();
//! assert_eq!(hilbert.side(), 8);
//! assert_eq!(hilbert.first(), hhck::GridPoint::new(0, 0));
//! assert_eq!(hilbert.last(), hhck::GridPoint::new(7, 0));
//! ```

pub mod affine;
pub mod curve;
pub mod decimal;
pub mod export;
pub mod job;
pub mod kernel;
pub mod locality;
pub mod stroke;
pub mod tag;

pub use curve::{CurvePath, GridPoint, PathError};
pub use kernel::{KernelError, KernelSpec};
pub use stroke::{Stroke, StrokeString};
