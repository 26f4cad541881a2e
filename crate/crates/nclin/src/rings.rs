//! Ring abstraction and concrete backends.
//!
//! All higher layers (matrices, determinants, identity verifiers) are generic
//! over [`Ring`]: a ring object that knows how to combine elements of its
//! associated element type. Three backends are provided:
//!
//! * [`NCRing`] - symbolic elements of a relation context,
//! * [`M2GF2Ring`] - 2x2 matrices over the two-element field, a small
//!   noncommutative ring in which `2x = 0` for every `x`,
//! * [`IntRing`] - plain checked integers.

use crate::algebra::{Context, NCElement};
use crate::coeff::{cadd, cmul};
use std::fmt;
use std::sync::Arc;

pub trait Ring {
    type Elem: Clone + Eq + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// Integer multiple `k * x`.
    fn int_mul(&self, k: i64, x: &Self::Elem) -> Self::Elem;
    /// Whether `2x = 0` implies `x = 0` in this ring.
    fn two_torsion_free(&self) -> bool;

    fn is_zero(&self, x: &Self::Elem) -> bool {
        *x == self.zero()
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    fn commutator(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }

    fn pow(&self, x: &Self::Elem, e: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Number of monomials in an element, for reporting; 0 or 1 unless the
    /// backend is symbolic.
    fn term_count(&self, x: &Self::Elem) -> usize {
        if self.is_zero(x) {
            0
        } else {
            1
        }
    }
}

/// Symbolic backend: elements of the ring presented by a relation context.
#[derive(Clone)]
pub struct NCRing {
    pub ctx: Arc<Context>,
}

impl NCRing {
    pub fn new(ctx: Arc<Context>) -> Self {
        NCRing { ctx }
    }
}

impl Ring for NCRing {
    type Elem = NCElement;

    fn zero(&self) -> NCElement {
        NCElement::zero()
    }

    fn one(&self) -> NCElement {
        NCElement::one()
    }

    fn add(&self, x: &NCElement, y: &NCElement) -> NCElement {
        x.add(y)
    }

    fn neg(&self, x: &NCElement) -> NCElement {
        x.neg()
    }

    fn mul(&self, x: &NCElement, y: &NCElement) -> NCElement {
        self.ctx.mul(x, y)
    }

    fn int_mul(&self, k: i64, x: &NCElement) -> NCElement {
        x.int_mul(k)
    }

    fn two_torsion_free(&self) -> bool {
        // free module over the integers in the word basis
        true
    }

    fn is_zero(&self, x: &NCElement) -> bool {
        x.is_zero()
    }

    fn term_count(&self, x: &NCElement) -> usize {
        x.term_count()
    }
}

/// A 2x2 matrix over GF(2), packed into four bits.
/// Bit `2i + j` holds entry `(i, j)`, 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct M2GF2(pub u8);

impl M2GF2 {
    pub const ZERO: M2GF2 = M2GF2(0);
    pub const ONE: M2GF2 = M2GF2(0b1001);
    /// `[[1,0],[0,0]]`, a rank-one projector.
    pub const ALPHA: M2GF2 = M2GF2(0b0001);
    /// `[[0,1],[1,0]]`, the flip; squares to the identity.
    pub const BETA: M2GF2 = M2GF2(0b0110);

    pub fn from_entries(e: [[u8; 2]; 2]) -> Self {
        let mut bits = 0u8;
        for i in 0..2 {
            for j in 0..2 {
                if e[i][j] & 1 == 1 {
                    bits |= 1 << (2 * i + j);
                }
            }
        }
        M2GF2(bits)
    }

    pub fn entry(self, i: usize, j: usize) -> u8 {
        (self.0 >> (2 * i + j)) & 1
    }

    pub fn matmul(self, other: M2GF2) -> M2GF2 {
        let mut bits = 0u8;
        for i in 0..2 {
            for j in 0..2 {
                let v = (self.entry(i, 0) & other.entry(0, j)) ^ (self.entry(i, 1) & other.entry(1, j));
                if v == 1 {
                    bits |= 1 << (2 * i + j);
                }
            }
        }
        M2GF2(bits)
    }

    /// All sixteen elements, in bit order.
    pub fn all() -> impl Iterator<Item = M2GF2> {
        (0u8..16).map(M2GF2)
    }
}

impl fmt::Display for M2GF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]]",
            self.entry(0, 0),
            self.entry(0, 1),
            self.entry(1, 0),
            self.entry(1, 1)
        )
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct M2GF2Ring;

impl Ring for M2GF2Ring {
    type Elem = M2GF2;

    fn zero(&self) -> M2GF2 {
        M2GF2::ZERO
    }

    fn one(&self) -> M2GF2 {
        M2GF2::ONE
    }

    fn add(&self, x: &M2GF2, y: &M2GF2) -> M2GF2 {
        M2GF2(x.0 ^ y.0)
    }

    fn neg(&self, x: &M2GF2) -> M2GF2 {
        // characteristic 2
        *x
    }

    fn mul(&self, x: &M2GF2, y: &M2GF2) -> M2GF2 {
        x.matmul(*y)
    }

    fn int_mul(&self, k: i64, x: &M2GF2) -> M2GF2 {
        if k.rem_euclid(2) == 0 {
            M2GF2::ZERO
        } else {
            *x
        }
    }

    fn two_torsion_free(&self) -> bool {
        false
    }
}

/// Plain integers with checked arithmetic.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntRing;

impl Ring for IntRing {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }

    fn one(&self) -> i64 {
        1
    }

    fn add(&self, x: &i64, y: &i64) -> i64 {
        cadd(*x, *y)
    }

    fn neg(&self, x: &i64) -> i64 {
        x.checked_neg().expect("coefficient overflow")
    }

    fn mul(&self, x: &i64, y: &i64) -> i64 {
        cmul(*x, *y)
    }

    fn int_mul(&self, k: i64, x: &i64) -> i64 {
        cmul(k, *x)
    }

    fn two_torsion_free(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_and_projector_fail_to_commute() {
        let r = M2GF2Ring;
        let ab = M2GF2::ALPHA.matmul(M2GF2::BETA);
        let ba = M2GF2::BETA.matmul(M2GF2::ALPHA);
        assert_eq!(ab, M2GF2::from_entries([[0, 1], [0, 0]]));
        assert_eq!(ba, M2GF2::from_entries([[0, 0], [1, 0]]));
        // in characteristic 2 the commutator is the sum
        assert_eq!(r.commutator(&M2GF2::ALPHA, &M2GF2::BETA), M2GF2::BETA);
    }

    #[test]
    fn flip_squares_to_identity() {
        assert_eq!(M2GF2::BETA.matmul(M2GF2::BETA), M2GF2::ONE);
    }

    #[test]
    fn doubling_kills_every_matrix() {
        let r = M2GF2Ring;
        for x in M2GF2::all() {
            assert_eq!(r.int_mul(2, &x), M2GF2::ZERO);
        }
        assert!(!r.two_torsion_free());
    }

    #[test]
    fn identity_is_neutral() {
        let r = M2GF2Ring;
        for x in M2GF2::all() {
            assert_eq!(r.mul(&x, &M2GF2::ONE), x);
            assert_eq!(r.mul(&M2GF2::ONE, &x), x);
        }
    }

    #[test]
    fn integer_backend_is_checked() {
        let r = IntRing;
        assert_eq!(r.commutator(&3, &4), 0);
        assert!(r.two_torsion_free());
    }
}
