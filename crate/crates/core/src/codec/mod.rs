//! Random linear network coding over GF(2^g).
//!
//! Used to check, packet by packet, how often a received coded packet fails
//! to be innovative, i.e. how good the "every received packet is a new dof"
//! approximation behind the Markov model is for a given field size.

pub mod decoder;
pub mod field;
pub mod packet;

pub use decoder::Decoder;
pub use field::{Field, Symbol};
pub use packet::{encode, encode_with_coefficients, payload_symbols, random_block, CodedPacket};
