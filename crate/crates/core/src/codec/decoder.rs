//! Progressive Gaussian elimination decoder.

use super::field::{Field, Symbol};
use super::packet::CodedPacket;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Row {
    pivot: usize,
    coefficients: Vec<Symbol>,
    payload: Vec<Symbol>,
}

/// Received packets kept in reduced row echelon form.
///
/// Every stored row has a unit pivot and zeros in the pivot columns of all
/// other rows, so once the rank reaches the block size the payloads are the
/// source packets.
#[derive(Debug, Clone)]
pub struct Decoder<'f> {
    field: &'f Field,
    block: usize,
    payload_len: usize,
    rows: Vec<Row>,
}

impl<'f> Decoder<'f> {
    pub fn new(field: &'f Field, block: usize, payload_len: usize) -> Self {
        Self {
            field,
            block,
            payload_len,
            rows: Vec::with_capacity(block),
        }
    }

    /// Number of linearly independent packets received so far.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Degrees of freedom still missing.
    pub fn missing(&self) -> usize {
        self.block - self.rows.len()
    }

    pub fn is_complete(&self) -> bool {
        self.rows.len() == self.block
    }

    /// Inserts a packet; returns whether it was innovative.
    pub fn receive(&mut self, packet: &CodedPacket) -> Result<bool> {
        if packet.coefficients.len() != self.block || packet.payload.len() != self.payload_len {
            return Err(Error::Shape(format!(
                "packet is {}x{}, decoder expects {}x{}",
                packet.coefficients.len(),
                packet.payload.len(),
                self.block,
                self.payload_len
            )));
        }
        if self.is_complete() {
            return Ok(false);
        }
        let f = self.field;
        let mut coefficients = packet.coefficients.clone();
        let mut payload = packet.payload.clone();
        for row in &self.rows {
            let c = coefficients[row.pivot];
            if c != 0 {
                f.mul_add_assign(&mut coefficients, c, &row.coefficients);
                f.mul_add_assign(&mut payload, c, &row.payload);
            }
        }
        let Some(pivot) = coefficients.iter().position(|&c| c != 0) else {
            return Ok(false);
        };
        let norm = f.inv(coefficients[pivot]).expect("pivot is nonzero");
        f.scale(&mut coefficients, norm);
        f.scale(&mut payload, norm);
        for row in &mut self.rows {
            let c = row.coefficients[pivot];
            if c != 0 {
                f.mul_add_assign(&mut row.coefficients, c, &coefficients);
                f.mul_add_assign(&mut row.payload, c, &payload);
            }
        }
        self.rows.push(Row {
            pivot,
            coefficients,
            payload,
        });
        Ok(true)
    }

    /// Source packets in order, once the rank is full.
    pub fn decode(&self) -> Option<Vec<Vec<Symbol>>> {
        if !self.is_complete() {
            return None;
        }
        let mut out = vec![Vec::new(); self.block];
        for row in &self.rows {
            out[row.pivot] = row.payload.clone();
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::packet::encode_with_coefficients;

    #[test]
    fn duplicate_is_not_innovative() {
        let f = Field::new(8).unwrap();
        let sources = vec![vec![1, 2], vec![3, 4], vec![5, 6]];
        let p = encode_with_coefficients(&sources, vec![7, 9, 11], &f).unwrap();
        let mut d = Decoder::new(&f, 3, 2);
        assert!(d.receive(&p).unwrap());
        assert!(!d.receive(&p).unwrap());
        assert_eq!(d.rank(), 1);
        assert_eq!(d.decode(), None);
    }

    #[test]
    fn identity_packets_decode_verbatim() {
        let f = Field::new(10).unwrap();
        let sources = vec![vec![1000, 2], vec![3, 1023], vec![5, 6]];
        let mut d = Decoder::new(&f, 3, 2);
        for k in (0..3).rev() {
            let mut c = vec![0; 3];
            c[k] = 1;
            let p = encode_with_coefficients(&sources, c, &f).unwrap();
            assert!(d.receive(&p).unwrap());
        }
        assert_eq!(d.missing(), 0);
        assert_eq!(d.decode().unwrap(), sources);
    }

    #[test]
    fn wrong_dimensions() {
        let f = Field::new(8).unwrap();
        let mut d = Decoder::new(&f, 2, 2);
        let p = CodedPacket {
            coefficients: vec![1, 2, 3],
            payload: vec![0, 0],
        };
        assert!(matches!(d.receive(&p), Err(Error::Shape(_))));
    }
}
