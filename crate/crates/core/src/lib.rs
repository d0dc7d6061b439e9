//! Extended integrated interleaved (EII) and extended product (EPC) array codes
//! over GF(2^b).
//!
//! The core types are generic over [`Field`]; the aliases below fix the two
//! backends most callers want.

pub mod eii;
pub mod epc;
pub mod errmode;
pub mod error;
pub mod gf;
pub mod grid;
pub mod layout;
pub mod matrix;
pub mod rs;
pub mod sim;

pub use eii::{DecodeReport, DecodeStatus, EiiCode, Profile};
pub use error::{Error, Result};
pub use gf::{build_field, build_mp_field, default_field, Field, FieldContext, Gf2Poly, PolyField, TableField};
pub use grid::{Cell, SymbolGrid};
pub use matrix::{Matrix, ParityMatrix};
pub use rs::RsCode;

/// EII code over a table-driven field (b ≤ 16).
pub type TableEiiCode = EiiCode<TableField>;
/// EII code over a polynomial-arithmetic field.
pub type PolyEiiCode = EiiCode<PolyField>;
/// Grid of table-field symbols.
pub type TableGrid = SymbolGrid<u16>;
