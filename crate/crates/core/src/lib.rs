//! Fixed points and Cesàro limits of convolution operators on finite groups
//! and on ℤ, on both the measure side and the Fourier–Stieltjes side.
//!
//! The crate is organised bottom-up:
//!
//! - [`group`]: Cayley tables, subgroups, cosets, characters, dual groups.
//! - [`measure`]: complex measures, convolution, Cesàro averages,
//!   idempotents and their `χ·m_H` classification.
//! - [`fixed_point`]: the operator `L_ω` as a matrix, numerical fixed-point
//!   spaces, and the structural checks built on them.
//! - [`dual`]: functions in `B(G)` acting diagonally on `VN(G)`, level sets
//!   `Z_ω`, and the abelian Fourier picture.

pub mod dual;
pub mod error;
pub mod fixed_point;
pub mod group;
pub mod linalg;
pub mod measure;
pub mod util;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use fixed_point::{OperatorMatrix, Subspace};
pub use group::{CharacterMap, GroupSpec, GroupTable, LatticeGroup, Subgroup};
pub use measure::{CesaroTrace, CesaroVerdict, ComplexMeasure, FiniteMeasure, LatticeMeasure};
