//! GF(2^g) arithmetic for g ∈ {1, 2, 4, 8, 10, 16}.

use crate::error::{invalid, Result};

/// One field element; the low `g` bits are significant.
pub type Symbol = u16;

pub const SUPPORTED_BITS: [u32; 6] = [1, 2, 4, 8, 10, 16];

/// Fixed reduction polynomial for each supported width.
pub fn default_polynomial(bits: u32) -> Option<u32> {
    match bits {
        1 => Some(0b11),
        2 => Some(0b111),
        4 => Some(0b1_0011),
        8 => Some(0x11B),
        10 => Some(0x409),
        16 => Some(0x1100B),
        _ => None,
    }
}

/// Carry-less product of `a` and `b` reduced modulo `poly` (degree `bits`).
pub fn reference_mul(a: u32, b: u32, poly: u32, bits: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> bits & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

/// Remainder of carry-less division.
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let deg = degree(poly);
    (2u32..1 << (deg / 2 + 1)).all(|d| poly_rem(poly, d) != 0)
}

/// GF(2^g) with log/antilog tables built at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    bits: u32,
    polynomial: u32,
    // exp has 2(q-1) entries so log sums need no reduction
    exp: Vec<Symbol>,
    log: Vec<u32>,
}

impl Field {
    pub fn new(bits: u32) -> Result<Self> {
        let poly = default_polynomial(bits).ok_or_else(|| {
            invalid(
                "field_bits",
                format!("{bits} is not one of {SUPPORTED_BITS:?}"),
            )
        })?;
        Self::with_polynomial(bits, poly)
    }

    pub fn with_polynomial(bits: u32, polynomial: u32) -> Result<Self> {
        if !SUPPORTED_BITS.contains(&bits) {
            return Err(invalid(
                "field_bits",
                format!("{bits} is not one of {SUPPORTED_BITS:?}"),
            ));
        }
        if degree(polynomial) != bits || !is_irreducible(polynomial) {
            return Err(invalid(
                "reduction_polynomial",
                format!("{polynomial:#x} is not an irreducible polynomial of degree {bits}"),
            ));
        }
        let order = 1u32 << bits;
        let generator = (1..order)
            .find(|&a| multiplicative_order(a, polynomial, bits) == order - 1)
            .expect("the multiplicative group of a finite field is cyclic");

        let group = (order - 1) as usize;
        let mut exp = vec![0 as Symbol; 2 * group];
        let mut log = vec![0u32; order as usize];
        let mut x = 1u32;
        for k in 0..group {
            exp[k] = x as Symbol;
            exp[k + group] = x as Symbol;
            log[x as usize] = k as u32;
            x = reference_mul(x, generator, polynomial, bits);
        }
        Ok(Self {
            bits,
            polynomial,
            exp,
            log,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn polynomial(&self) -> u32 {
        self.polynomial
    }

    /// Number of elements `q = 2^g`.
    pub fn order(&self) -> u32 {
        1 << self.bits
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Symbol) -> Option<Symbol> {
        if a == 0 {
            return None;
        }
        let group = self.order() - 1;
        Some(self.exp[((group - self.log[a as usize]) % group) as usize])
    }

    /// `dst[k] += c · src[k]` over the field.
    pub fn mul_add_assign(&self, dst: &mut [Symbol], c: Symbol, src: &[Symbol]) {
        if c == 0 {
            return;
        }
        let lc = self.log[c as usize];
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d ^= self.exp[(lc + self.log[s as usize]) as usize];
            }
        }
    }

    /// `v[k] *= c` over the field.
    pub fn scale(&self, v: &mut [Symbol], c: Symbol) {
        for s in v {
            *s = self.mul(*s, c);
        }
    }
}

fn multiplicative_order(a: u32, poly: u32, bits: u32) -> u32 {
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = reference_mul(x, a, poly, bits);
        k += 1;
        if k > 1 << bits {
            return 0;
        }
    }
    k
}
