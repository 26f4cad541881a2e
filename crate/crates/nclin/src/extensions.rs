//! Ring extensions by commuting polynomial indeterminates and by Grassmann
//! indeterminates.
//!
//! Both extensions exist to recast commutation patterns of a matrix `M` as
//! statements about linear forms built from its rows or columns: the forms
//! `x~_i = sum_j M[i,j] x_j` commute pairwise exactly when `M` is
//! row-pseudo-commutative, and the forms `eta~_j = sum_i eta_i M[i,j]`
//! satisfy the Grassmann relations exactly when `M` has row-symmetric
//! commutators (plus vanishing squares exactly in the row-pseudo case).

use crate::matrix::NCMatrix;
use crate::rings::Ring;
use std::collections::BTreeMap;

/// Polynomial in commuting indeterminates `x_1..x_n` with coefficients in
/// the backend ring, truncated at total degree 2.
///
/// Keys are sorted multisets of indeterminate indices (so `[1,1]` is
/// `x_1^2`). The indeterminates commute with each other and with every
/// backend element; coefficients are kept on the left. Degree-3-and-up
/// products are discarded: every comparison made here lives in degree 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyExt<E> {
    terms: BTreeMap<Vec<u8>, E>,
}

impl<E: Clone + Eq> PolyExt<E> {
    pub fn zero() -> Self {
        PolyExt {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term<R: Ring<Elem = E>>(&mut self, ring: &R, key: Vec<u8>, coeff: E) {
        debug_assert!(key.len() <= 2 && key.windows(2).all(|w| w[0] <= w[1]));
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !ring.is_zero(&coeff) {
                    v.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = ring.add(o.get(), &coeff);
                if ring.is_zero(&sum) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// The linear form with the given coefficient on `x_j`.
    pub fn linear<R: Ring<Elem = E>>(ring: &R, coeffs: impl IntoIterator<Item = (u8, E)>) -> Self {
        let mut p = PolyExt::zero();
        for (j, c) in coeffs {
            p.add_term(ring, vec![j], c);
        }
        p
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = PolyExt::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                if k1.len() + k2.len() > 2 {
                    continue;
                }
                let mut key: Vec<u8> = k1.iter().chain(k2.iter()).copied().collect();
                key.sort_unstable();
                out.add_term(ring, key, ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(ring, k.clone(), ring.neg(c));
        }
        out
    }
}

/// Element of the Grassmann extension: a sum `sum_S eta_S * r_S` where `S`
/// ranges over subsets of the index range and `eta_S` is the product of
/// `eta_i`, `i in S`, in increasing order.
///
/// The `eta_i` anticommute and square to zero; backend elements commute with
/// every `eta_i`, and coefficients are kept on the right of the
/// eta-monomials. Multiplying two monomials merges their index sets with the
/// interleaving sign, and kills any repeated index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrassExt<E> {
    terms: BTreeMap<Vec<u8>, E>,
}

/// Sign of moving `eta_S` past `eta_T` into one increasing product:
/// `(-1)^(number of pairs s in S, t in T with s > t)`. Assumes disjointness.
fn merge_sign(s: &[u8], t: &[u8]) -> i64 {
    let mut inversions = 0usize;
    for &a in s {
        for &b in t {
            if a > b {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<E: Clone + Eq> GrassExt<E> {
    pub fn zero() -> Self {
        GrassExt {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term<R: Ring<Elem = E>>(&mut self, ring: &R, key: Vec<u8>, coeff: E) {
        debug_assert!(key.windows(2).all(|w| w[0] < w[1]));
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !ring.is_zero(&coeff) {
                    v.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = ring.add(o.get(), &coeff);
                if ring.is_zero(&sum) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// The form with coefficient `c_i` to the right of `eta_i`.
    pub fn linear<R: Ring<Elem = E>>(ring: &R, coeffs: impl IntoIterator<Item = (u8, E)>) -> Self {
        let mut g = GrassExt::zero();
        for (i, c) in coeffs {
            g.add_term(ring, vec![i], c);
        }
        g
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = GrassExt::zero();
        for (s, c1) in &self.terms {
            'next: for (t, c2) in &other.terms {
                for i in t {
                    if s.binary_search(i).is_ok() {
                        continue 'next; // repeated eta index
                    }
                }
                let sign = merge_sign(s, t);
                let mut key: Vec<u8> = s.iter().chain(t.iter()).copied().collect();
                key.sort_unstable();
                let coeff = ring.int_mul(sign, &ring.mul(c1, c2));
                out.add_term(ring, key, coeff);
            }
        }
        out
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(ring, k.clone(), c.clone());
        }
        out
    }
}

/// The form `x~_i = sum_j M[i,j] x_j` for a fixed row `i` (1-based).
pub fn x_tilde<R: Ring>(ring: &R, m: &NCMatrix<R::Elem>, i: usize) -> PolyExt<R::Elem> {
    PolyExt::linear(
        ring,
        (1..=m.cols()).map(|j| (j as u8, m.get(i, j).clone())),
    )
}

/// The form `eta~_j = sum_i eta_i M[i,j]` for a fixed column `j` (1-based).
pub fn eta_tilde<R: Ring>(ring: &R, m: &NCMatrix<R::Elem>, j: usize) -> GrassExt<R::Elem> {
    GrassExt::linear(
        ring,
        (1..=m.rows()).map(|i| (i as u8, m.get(i, j).clone())),
    )
}

/// Whether the forms `x~_1 .. x~_m` commute pairwise in the polynomial
/// extension. Equivalent to `M` being row-pseudo-commutative.
pub fn poly_ext_commute_check<R: Ring>(ring: &R, m: &NCMatrix<R::Elem>) -> bool {
    let forms: Vec<_> = (1..=m.rows()).map(|i| x_tilde(ring, m, i)).collect();
    for i in 0..forms.len() {
        for k in i + 1..forms.len() {
            let diff = forms[i]
                .mul(ring, &forms[k])
                .sub(ring, &forms[k].mul(ring, &forms[i]));
            if !diff.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Whether the forms `eta~_1 .. eta~_n` satisfy the Grassmann relations.
///
/// Returns `(anticommute, squares_zero)`:
/// * `anticommute`: `eta~_j * eta~_l = -eta~_l * eta~_j` for all `j, l`
///   (including `j = l`, where it reads `2 * eta~_j^2 = 0`). Equivalent to
///   `M` having row-symmetric commutators.
/// * `squares_zero`: `eta~_j^2 = 0` for all `j`. Together with
///   `anticommute`, equivalent to `M` being row-pseudo-commutative.
pub fn grassmann_ext_check<R: Ring>(ring: &R, m: &NCMatrix<R::Elem>) -> (bool, bool) {
    let forms: Vec<_> = (1..=m.cols()).map(|j| eta_tilde(ring, m, j)).collect();
    let mut anticommute = true;
    let mut squares_zero = true;
    for j in 0..forms.len() {
        for l in j..forms.len() {
            let anti = forms[j]
                .mul(ring, &forms[l])
                .add(ring, &forms[l].mul(ring, &forms[j]));
            anticommute &= anti.is_zero();
        }
        squares_zero &= forms[j].mul(ring, &forms[j]).is_zero();
    }
    (anticommute, squares_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Context, Species};
    use crate::matrix::commutation_predicates;
    use crate::rings::{M2GF2Ring, NCRing, M2GF2};

    fn m2(rows: [[M2GF2; 2]; 2]) -> NCMatrix<M2GF2> {
        NCMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn commuting_forms_match_the_row_pseudo_predicate() {
        let ring = M2GF2Ring;
        // identical rows built from noncommuting alpha, beta
        let m = m2([[M2GF2::ALPHA, M2GF2::ALPHA], [M2GF2::BETA, M2GF2::BETA]]);
        let p = commutation_predicates(&ring, &m);
        assert!(!p.row_pseudo_commutative);
        assert!(!poly_ext_commute_check(&ring, &m));

        // a matrix with commuting entries passes
        let c = m2([[M2GF2::ONE, M2GF2::ZERO], [M2GF2::ZERO, M2GF2::ONE]]);
        assert!(poly_ext_commute_check(&ring, &c));
    }

    #[test]
    fn grassmann_relations_match_the_symmetric_commutator_predicate() {
        let ring = M2GF2Ring;
        let m = m2([[M2GF2::ALPHA, M2GF2::ALPHA], [M2GF2::BETA, M2GF2::BETA]]);
        let p = commutation_predicates(&ring, &m);
        assert!(p.row_symmetric);
        let (anti, sq) = grassmann_ext_check(&ring, &m);
        assert!(anti);
        // eta~_1^2 = eta_1 eta_2 [M11, M21] = eta_1 eta_2 [alpha, beta] != 0
        assert!(!sq);
        assert!(!p.row_pseudo_commutative);
    }

    #[test]
    fn grassmann_diagonal_condition_detects_row_asymmetry_over_weyl() {
        // M = [[x, x], [d, d]] is NOT row-symmetric ([x,d] != [d,x]) and the
        // form eta~_1 has nonzero square; both checks must agree.
        let ring = NCRing::new(Context::weyl(1));
        let x = ring.ctx.gen_element(Species::X, 1, 1);
        let d = ring.ctx.gen_element(Species::D, 1, 1);
        let m = NCMatrix::from_rows(vec![vec![x.clone(), x], vec![d.clone(), d]]);
        let p = commutation_predicates(&ring, &m);
        assert!(!p.row_symmetric);
        let (anti, sq) = grassmann_ext_check(&ring, &m);
        assert!(!anti && !sq);
    }

    #[test]
    fn grassmann_product_tracks_interleaving_signs() {
        // (eta_{1,3}) * (eta_2) = -eta_{1,2,3}: one inversion (3 > 2)
        let ring = NCRing::new(Context::weyl(1));
        let one = ring.one();
        let mut a: GrassExt<_> = GrassExt::zero();
        a.add_term(&ring, vec![1, 3], one.clone());
        let mut b: GrassExt<_> = GrassExt::zero();
        b.add_term(&ring, vec![2], one.clone());
        let prod = a.mul(&ring, &b);
        let mut expected: GrassExt<_> = GrassExt::zero();
        expected.add_term(&ring, vec![1, 2, 3], ring.neg(&one));
        assert_eq!(prod, expected);

        // repeated index dies
        let mut c: GrassExt<_> = GrassExt::zero();
        c.add_term(&ring, vec![1], one.clone());
        assert!(a.mul(&ring, &c).is_zero());
    }

    #[test]
    fn polynomial_truncation_keeps_degree_two_products() {
        let ring = M2GF2Ring;
        let p = PolyExt::linear(&ring, [(1u8, M2GF2::ALPHA), (2u8, M2GF2::BETA)]);
        let sq = p.mul(&ring, &p);
        // (alpha x1 + beta x2)^2 has an x1 x2 coefficient alpha*beta + beta*alpha
        let mut expected: PolyExt<M2GF2> = PolyExt::zero();
        expected.add_term(&ring, vec![1, 1], ring.mul(&M2GF2::ALPHA, &M2GF2::ALPHA));
        expected.add_term(&ring, vec![2, 2], ring.mul(&M2GF2::BETA, &M2GF2::BETA));
        let cross = ring.add(
            &ring.mul(&M2GF2::ALPHA, &M2GF2::BETA),
            &ring.mul(&M2GF2::BETA, &M2GF2::ALPHA),
        );
        expected.add_term(&ring, vec![1, 2], cross);
        assert_eq!(sq, expected);
    }
}
