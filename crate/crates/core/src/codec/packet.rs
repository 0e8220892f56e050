//! Coded packets and their wire layout.
//!
//! On the wire a packet is `header_bits` of opaque header, then the `M`
//! coefficients at `g` bits each, then the payload symbols at `g` bits each.
//! Every field is big-endian and bit-packed with no alignment; the frame is
//! zero-padded to a whole byte.

use bitvec::prelude::*;
use rand::Rng;

use super::field::{Field, Symbol};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPacket {
    pub coefficients: Vec<Symbol>,
    pub payload: Vec<Symbol>,
}

fn check_sources(sources: &[Vec<Symbol>]) -> Result<usize> {
    let first = sources
        .first()
        .ok_or_else(|| Error::Shape("a block needs at least one source packet".into()))?;
    let len = first.len();
    if let Some((k, s)) = sources.iter().enumerate().find(|(_, s)| s.len() != len) {
        return Err(Error::Shape(format!(
            "source {k} has {} symbols, source 0 has {len}",
            s.len()
        )));
    }
    Ok(len)
}

/// Linear combination of `sources` with the given coefficients.
pub fn encode_with_coefficients(
    sources: &[Vec<Symbol>],
    coefficients: Vec<Symbol>,
    field: &Field,
) -> Result<CodedPacket> {
    let len = check_sources(sources)?;
    if coefficients.len() != sources.len() {
        return Err(Error::Shape(format!(
            "{} coefficients for {} sources",
            coefficients.len(),
            sources.len()
        )));
    }
    let mut payload = vec![0; len];
    for (c, src) in coefficients.iter().zip(sources) {
        field.mul_add_assign(&mut payload, *c, src);
    }
    Ok(CodedPacket {
        coefficients,
        payload,
    })
}

/// Random linear combination with coefficients drawn uniformly from the field.
pub fn encode<R: Rng + ?Sized>(
    sources: &[Vec<Symbol>],
    field: &Field,
    rng: &mut R,
) -> Result<CodedPacket> {
    let q = field.order();
    let coefficients = (0..sources.len())
        .map(|_| rng.random_range(0..q) as Symbol)
        .collect();
    encode_with_coefficients(sources, coefficients, field)
}

/// Uniformly random source block of `block` packets with `symbols` each.
pub fn random_block<R: Rng + ?Sized>(
    block: usize,
    symbols: usize,
    field: &Field,
    rng: &mut R,
) -> Vec<Vec<Symbol>> {
    let q = field.order();
    (0..block)
        .map(|_| {
            (0..symbols)
                .map(|_| rng.random_range(0..q) as Symbol)
                .collect()
        })
        .collect()
}

/// Number of payload symbols needed for `payload_bits`.
pub fn payload_symbols(payload_bits: u64, field: &Field) -> usize {
    payload_bits.div_ceil(u64::from(field.bits())) as usize
}

impl CodedPacket {
    /// Serialize behind a header of `header_bits` taken from the front of
    /// `header` (most significant bit first).
    pub fn to_bytes(&self, header: &[u8], header_bits: usize, field: &Field) -> Result<Vec<u8>> {
        let head = header.view_bits::<Msb0>();
        if head.len() < header_bits {
            return Err(Error::Shape(format!(
                "header holds {} bits, {header_bits} requested",
                head.len()
            )));
        }
        let g = field.bits() as usize;
        let total = header_bits + g * (self.coefficients.len() + self.payload.len());
        let mut bits: BitVec<u8, Msb0> = BitVec::with_capacity(total.next_multiple_of(8));
        bits.extend_from_bitslice(&head[..header_bits]);
        for &s in self.coefficients.iter().chain(&self.payload) {
            let start = bits.len();
            bits.resize(start + g, false);
            bits[start..].store_be::<Symbol>(s);
        }
        bits.resize(total.next_multiple_of(8), false);
        Ok(bits.into_vec())
    }

    /// Inverse of [`CodedPacket::to_bytes`]; returns the header bits
    /// (zero-padded to a byte) and the packet.
    pub fn from_bytes(
        bytes: &[u8],
        header_bits: usize,
        block: usize,
        payload_len: usize,
        field: &Field,
    ) -> Result<(Vec<u8>, Self)> {
        let g = field.bits() as usize;
        let need = header_bits + g * (block + payload_len);
        let bits = bytes.view_bits::<Msb0>();
        if bits.len() < need {
            return Err(Error::Shape(format!(
                "frame holds {} bits, layout needs {need}",
                bits.len()
            )));
        }
        let mut header: BitVec<u8, Msb0> = bits[..header_bits].to_bitvec();
        header.resize(header_bits.next_multiple_of(8), false);
        let mut symbols = bits[header_bits..need]
            .chunks_exact(g)
            .map(|c| c.load_be::<Symbol>());
        let coefficients = symbols.by_ref().take(block).collect();
        let payload = symbols.collect();
        Ok((
            header.into_vec(),
            Self {
                coefficients,
                payload,
            },
        ))
    }
}
