//! EII codes: m × n arrays whose rows lie in C_0 and whose α-weighted row
//! combinations lie in deeper nested RS codes.

pub(crate) mod code;
mod profile;

pub use code::{DecodeReport, DecodeStatus, EiiCode};
pub use profile::Profile;

pub(crate) use code::place_data;
