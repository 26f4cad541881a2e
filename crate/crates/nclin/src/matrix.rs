//! Matrices over a ring: minors, the four determinant/permanent variants,
//! diagonal correction matrices, and commutation-pattern predicates.
//!
//! Row and column indices are 1-based throughout the public API.

use crate::rings::Ring;
use itertools::Itertools;
use serde::Serialize;
use std::fmt;

/// A sorted set of 1-based indices, used to pick out minors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IndexSet(Vec<u8>);

impl IndexSet {
    /// Build from a vector; indices must be >= 1 and strictly increasing.
    pub fn new(v: Vec<u8>) -> Result<Self, String> {
        if v.iter().any(|&i| i == 0) {
            return Err("indices are 1-based; 0 is not a valid index".into());
        }
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("indices must be strictly increasing: {v:?}"));
        }
        Ok(IndexSet(v))
    }

    /// `{1, 2, ..., n}`.
    pub fn full(n: u8) -> Self {
        IndexSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `alpha`-th member, `alpha` 1-based.
    pub fn member(&self, alpha: usize) -> u8 {
        self.0[alpha - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, i: u8) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// All size-`r` subsets of `{1..n}` in lexicographic order.
    /// Empty when `r > n`.
    pub fn subsets(n: u8, r: usize) -> Vec<IndexSet> {
        (1..=n).combinations(r).map(IndexSet).collect()
    }

    /// Complement inside `{1..n}`.
    pub fn complement(&self, n: u8) -> IndexSet {
        IndexSet((1..=n).filter(|&i| !self.contains(i)).collect())
    }

    /// Sum of the members, as used by cofactor signs.
    pub fn index_sum(&self) -> i64 {
        self.0.iter().map(|&i| i as i64).sum()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (t, i) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A dense matrix over an arbitrary element type.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> NCMatrix<T> {
    /// Build from an entry function taking 1-based `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                data.push(f(i, j));
            }
        }
        NCMatrix { rows, cols, data }
    }

    pub fn from_rows(entries: Vec<Vec<T>>) -> Self {
        let rows = entries.len();
        let cols = entries.first().map(|r| r.len()).unwrap_or(0);
        assert!(entries.iter().all(|r| r.len() == cols), "ragged rows");
        NCMatrix {
            rows,
            cols,
            data: entries.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols);
        &self.data[(i - 1) * self.cols + (j - 1)]
    }

    pub fn transpose(&self) -> Self {
        NCMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// The minor with the given row and column sets.
    pub fn submatrix(&self, row_set: &IndexSet, col_set: &IndexSet) -> Self {
        NCMatrix::from_fn(row_set.len(), col_set.len(), |a, b| {
            self.get(row_set.member(a) as usize, col_set.member(b) as usize)
                .clone()
        })
    }

    /// Row relabeling: entry `(i, j)` of the result is `self[tau(i), j]`.
    /// `tau` is a permutation given as 1-based images `tau[i-1] = tau(i)`.
    pub fn permute_rows(&self, tau: &[usize]) -> Self {
        assert_eq!(tau.len(), self.rows);
        NCMatrix::from_fn(self.rows, self.cols, |i, j| self.get(tau[i - 1], j).clone())
    }

    /// Column relabeling: entry `(i, j)` of the result is `self[i, tau(j)]`.
    pub fn permute_cols(&self, tau: &[usize]) -> Self {
        assert_eq!(tau.len(), self.cols);
        NCMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, tau[j - 1]).clone())
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> NCMatrix<U> {
        NCMatrix::from_fn(self.rows, self.cols, |i, j| f(self.get(i, j)))
    }
}

/// Entry-wise sum.
pub fn mat_add<R: Ring>(
    ring: &R,
    a: &NCMatrix<R::Elem>,
    b: &NCMatrix<R::Elem>,
) -> NCMatrix<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    NCMatrix::from_fn(a.rows, a.cols, |i, j| ring.add(a.get(i, j), b.get(i, j)))
}

/// Entry-wise difference.
pub fn mat_sub<R: Ring>(
    ring: &R,
    a: &NCMatrix<R::Elem>,
    b: &NCMatrix<R::Elem>,
) -> NCMatrix<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    NCMatrix::from_fn(a.rows, a.cols, |i, j| ring.sub(a.get(i, j), b.get(i, j)))
}

/// Matrix product; entry `(i, j)` is the ordered sum of `a[i,k] * b[k,j]`.
pub fn matmul<R: Ring>(
    ring: &R,
    a: &NCMatrix<R::Elem>,
    b: &NCMatrix<R::Elem>,
) -> NCMatrix<R::Elem> {
    assert_eq!(a.cols, b.rows, "inner dimensions must agree");
    NCMatrix::from_fn(a.rows, b.cols, |i, j| {
        let mut acc = ring.zero();
        for k in 1..=a.cols {
            acc = ring.add(&acc, &ring.mul(a.get(i, k), b.get(k, j)));
        }
        acc
    })
}

/// The four expansion variants over a noncommutative ring.
///
/// * `ColDet`: signed sum of `M[s(1),1] * M[s(2),2] * ...` (factors ordered
///   by column).
/// * `RowDet`: signed sum of `M[1,s(1)] * M[2,s(2)] * ...` (ordered by row).
/// * `ColPer` / `RowPer`: the same sums without signs.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum DetVariant {
    ColDet,
    RowDet,
    ColPer,
    RowPer,
}

impl DetVariant {
    pub fn signed(self) -> bool {
        matches!(self, DetVariant::ColDet | DetVariant::RowDet)
    }
}

/// Sign of a permutation given as a sequence of distinct values, by
/// inversion count.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut inv = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Expand a square matrix by enumerating permutations in lexicographic order
/// and folding each product strictly left to right.
pub fn nc_det<R: Ring>(ring: &R, m: &NCMatrix<R::Elem>, variant: DetVariant) -> R::Elem {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return ring.one();
    }
    let mut acc = ring.zero();
    for perm in (1..=n).permutations(n) {
        let mut prod = ring.one();
        for (t, &p) in perm.iter().enumerate() {
            let factor = match variant {
                DetVariant::ColDet | DetVariant::ColPer => m.get(p, t + 1),
                DetVariant::RowDet | DetVariant::RowPer => m.get(t + 1, p),
            };
            prod = ring.mul(&prod, factor);
        }
        let signed = if variant.signed() {
            ring.int_mul(permutation_sign(&perm), &prod)
        } else {
            prod
        };
        acc = ring.add(&acc, &signed);
    }
    acc
}

/// Which triangle of integer weights a correction matrix carries.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QMode {
    /// Weight `r - beta` on column `beta`.
    Col,
    /// Weight `alpha - 1` on row `alpha`.
    Row,
}

/// The `r x r` correction matrix for index sets `I`, `J`: entry
/// `(alpha, beta)` is the integer weight times `h(I[alpha], J[beta])`.
pub fn q_matrix<R: Ring>(
    ring: &R,
    r: usize,
    set_i: &IndexSet,
    set_j: &IndexSet,
    mode: QMode,
    mut h_entry: impl FnMut(u8, u8) -> R::Elem,
) -> NCMatrix<R::Elem> {
    assert_eq!(set_i.len(), r);
    assert_eq!(set_j.len(), r);
    NCMatrix::from_fn(r, r, |alpha, beta| {
        let weight = match mode {
            QMode::Col => (r - beta) as i64,
            QMode::Row => (alpha - 1) as i64,
        };
        ring.int_mul(weight, &h_entry(set_i.member(alpha), set_j.member(beta)))
    })
}

/// Scalar multiple of the identity pattern: `h(i,j) = h` when `i == j`,
/// zero otherwise.
pub fn diag_h<R: Ring>(ring: &R, h: R::Elem) -> impl FnMut(u8, u8) -> R::Elem + '_ {
    move |i, j| {
        if i == j {
            h.clone()
        } else {
            ring.zero()
        }
    }
}

/// Declared shape of the commutation datum that fills a `Q` correction
/// matrix. Must agree with the relation system of the ring in use; the
/// identity layer validates the pairing.
///
/// * `Scalar`: one central symbol times the identity pattern.
/// * `Pair`: sum of the two central symbols times the identity pattern
///   (only meaningful when the second symbol is kept free).
/// * `Matrix`: a full matrix of central symbols, one per index pair.
/// * `WeylConstant`: a fixed integer times the identity pattern.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum HSpec {
    Scalar,
    Pair,
    Matrix,
    WeylConstant(i64),
}

/// Which commutation patterns a matrix satisfies. All flags quantify over
/// every index quadruple `(i,j,k,l)` of entries `M[i,j]`, `M[k,l]`:
///
/// * `row_commutative`: commutators vanish whenever `i != k`.
/// * `column_commutative`: commutators vanish whenever `j != l`.
/// * `weakly_commutative`: commutators vanish whenever `i != k` and `j != l`.
/// * `row_symmetric`: `[M[i,j], M[k,l]] = [M[k,j], M[i,l]]` for all quadruples.
/// * `column_symmetric`: `[M[i,j], M[k,l]] = [M[i,l], M[k,j]]` for all.
/// * `weakly_row_symmetric` / `weakly_column_symmetric`: the same equalities
///   restricted to `i != k` and `j != l`.
/// * `row_pseudo_commutative`: `row_symmetric` plus entries in a common
///   column commute.
/// * `column_pseudo_commutative`: `column_symmetric` plus entries in a common
///   row commute.
/// * `fully_commutative`: every commutator vanishes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PredicateReport {
    pub fully_commutative: bool,
    pub row_commutative: bool,
    pub column_commutative: bool,
    pub weakly_commutative: bool,
    pub row_pseudo_commutative: bool,
    pub column_pseudo_commutative: bool,
    pub row_symmetric: bool,
    pub column_symmetric: bool,
    pub weakly_row_symmetric: bool,
    pub weakly_column_symmetric: bool,
}

impl PredicateReport {
    /// The entailments that must hold between the flags; used as a sanity
    /// invariant. `torsion_free` additionally upgrades the symmetric flags to
    /// their pseudo-commutative counterparts.
    pub fn implications_hold(&self, torsion_free: bool) -> bool {
        let imp = |p: bool, q: bool| !p || q;
        let mut ok = true;
        ok &= imp(self.fully_commutative, self.row_commutative && self.column_commutative);
        ok &= imp(self.row_commutative, self.row_pseudo_commutative && self.weakly_commutative);
        ok &= imp(
            self.column_commutative,
            self.column_pseudo_commutative && self.weakly_commutative,
        );
        ok &= imp(self.row_pseudo_commutative, self.row_symmetric);
        ok &= imp(self.column_pseudo_commutative, self.column_symmetric);
        ok &= imp(self.row_symmetric, self.weakly_row_symmetric);
        ok &= imp(self.column_symmetric, self.weakly_column_symmetric);
        ok &= imp(
            self.weakly_commutative,
            self.weakly_row_symmetric && self.weakly_column_symmetric,
        );
        if torsion_free {
            ok &= imp(self.row_symmetric, self.row_pseudo_commutative);
            ok &= imp(self.column_symmetric, self.column_pseudo_commutative);
        }
        ok
    }

    /// The strongest single label that applies, for human-readable output.
    pub fn class_label(&self) -> &'static str {
        if self.fully_commutative {
            "commutative"
        } else if self.row_commutative {
            "row-commutative"
        } else if self.column_commutative {
            "column-commutative"
        } else if self.row_pseudo_commutative {
            "row-pseudo-commutative"
        } else if self.column_pseudo_commutative {
            "column-pseudo-commutative"
        } else if self.weakly_commutative {
            "weakly-commutative"
        } else if self.row_symmetric {
            "row-symmetric-commutators"
        } else if self.column_symmetric {
            "column-symmetric-commutators"
        } else if self.weakly_row_symmetric {
            "weakly-row-symmetric-commutators"
        } else if self.weakly_column_symmetric {
            "weakly-column-symmetric-commutators"
        } else {
            "generic"
        }
    }
}

/// Evaluate every commutation-pattern flag on a matrix by brute force.
pub fn commutation_predicates<R: Ring>(ring: &R, m: &NCMatrix<R::Elem>) -> PredicateReport {
    let (rows, cols) = (m.rows(), m.cols());
    let comm = |i: usize, j: usize, k: usize, l: usize| -> R::Elem {
        ring.commutator(m.get(i, j), m.get(k, l))
    };

    let mut fully = true;
    let mut row_c = true;
    let mut col_c = true;
    let mut weak_c = true;
    let mut row_s = true;
    let mut col_s = true;
    let mut weak_row_s = true;
    let mut weak_col_s = true;
    let mut common_col = true; // entries in a common column commute
    let mut common_row = true; // entries in a common row commute

    for i in 1..=rows {
        for j in 1..=cols {
            for k in 1..=rows {
                for l in 1..=cols {
                    let c = comm(i, j, k, l);
                    let zero = ring.is_zero(&c);
                    fully &= zero;
                    if i != k {
                        row_c &= zero;
                    }
                    if j != l {
                        col_c &= zero;
                    }
                    if i != k && j != l {
                        weak_c &= zero;
                    }
                    if i == k && j != l {
                        common_row &= zero;
                    }
                    if j == l && i != k {
                        common_col &= zero;
                    }
                    let rs = c == comm(k, j, i, l);
                    let cs = c == comm(i, l, k, j);
                    row_s &= rs;
                    col_s &= cs;
                    if i != k && j != l {
                        weak_row_s &= rs;
                        weak_col_s &= cs;
                    }
                }
            }
        }
    }

    PredicateReport {
        fully_commutative: fully,
        row_commutative: row_c,
        column_commutative: col_c,
        weakly_commutative: weak_c,
        row_pseudo_commutative: row_s && common_col,
        column_pseudo_commutative: col_s && common_row,
        row_symmetric: row_s,
        column_symmetric: col_s,
        weakly_row_symmetric: weak_row_s,
        weakly_column_symmetric: weak_col_s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Context, Species};
    use crate::rings::{IntRing, M2GF2Ring, NCRing, M2GF2};

    #[test]
    fn one_variable_column_expansion_sees_the_correction() {
        // col-det [[d, d], [x, x]] = d*x - x*d = 1
        let ring = NCRing::new(Context::weyl(1));
        let x = ring.ctx.gen_element(Species::X, 1, 1);
        let d = ring.ctx.gen_element(Species::D, 1, 1);
        let m = NCMatrix::from_rows(vec![vec![d.clone(), d], vec![x.clone(), x]]);
        let det = nc_det(&ring, &m, DetVariant::ColDet);
        assert_eq!(det, ring.one());
    }

    #[test]
    fn empty_matrix_expands_to_one() {
        let ring = IntRing;
        let m: NCMatrix<i64> = NCMatrix::from_fn(0, 0, |_, _| 0);
        assert_eq!(nc_det(&ring, &m, DetVariant::ColDet), 1);
        assert_eq!(nc_det(&ring, &m, DetVariant::RowPer), 1);
    }

    #[test]
    fn column_expansion_of_transpose_is_row_expansion() {
        // holds entry-for-entry, no commutation needed
        let ring = NCRing::new(Context::matrix_h(false));
        let m = NCMatrix::from_fn(3, 3, |i, j| {
            let a = ring.ctx.gen_element(Species::A, i as u8, j as u8);
            let b = ring.ctx.gen_element(Species::B, j as u8, i as u8);
            ring.ctx.mul(&a, &b)
        });
        let mt = m.transpose();
        assert_eq!(
            nc_det(&ring, &m, DetVariant::ColDet),
            nc_det(&ring, &mt, DetVariant::RowDet)
        );
        assert_eq!(
            nc_det(&ring, &m, DetVariant::ColPer),
            nc_det(&ring, &mt, DetVariant::RowPer)
        );
    }

    #[test]
    fn integer_variants_agree_with_classical_values() {
        let ring = IntRing;
        let m = NCMatrix::from_rows(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(nc_det(&ring, &m, DetVariant::ColDet), -2);
        assert_eq!(nc_det(&ring, &m, DetVariant::RowDet), -2);
        assert_eq!(nc_det(&ring, &m, DetVariant::ColPer), 10);
        assert_eq!(nc_det(&ring, &m, DetVariant::RowPer), 10);
    }

    #[test]
    fn submatrix_and_permutations() {
        let ring = IntRing;
        let m = NCMatrix::from_fn(3, 3, |i, j| (10 * i + j) as i64);
        let rows = IndexSet::new(vec![1, 3]).unwrap();
        let cols = IndexSet::new(vec![2, 3]).unwrap();
        let s = m.submatrix(&rows, &cols);
        assert_eq!(s, NCMatrix::from_rows(vec![vec![12, 13], vec![32, 33]]));

        // swapping two rows flips the sign of the signed expansions
        let swapped = m.permute_rows(&[2, 1, 3]);
        assert_eq!(
            nc_det(&ring, &swapped, DetVariant::ColDet),
            -nc_det(&ring, &m, DetVariant::ColDet)
        );
        let cswapped = m.permute_cols(&[1, 3, 2]);
        assert_eq!(
            nc_det(&ring, &cswapped, DetVariant::RowDet),
            -nc_det(&ring, &m, DetVariant::RowDet)
        );
    }

    #[test]
    fn equal_rows_kill_the_column_expansion() {
        // with completely arbitrary entries, for any size
        let ring = NCRing::new(Context::matrix_h(false));
        let b = |i: u8, j: u8| ring.ctx.gen_element(Species::B, i, j);
        let m = NCMatrix::from_rows(vec![
            vec![b(1, 1), b(1, 2), b(1, 3)],
            vec![b(2, 1), b(2, 2), b(2, 3)],
            vec![b(1, 1), b(1, 2), b(1, 3)],
        ]);
        assert!(nc_det(&ring, &m, DetVariant::ColDet).is_zero());
    }

    #[test]
    fn correction_matrix_weights() {
        let ring = IntRing;
        let set_i = IndexSet::new(vec![1, 3]).unwrap();
        let set_j = IndexSet::new(vec![2, 3]).unwrap();
        // h(i,j) = 100*i + j, to read the index pair off the value
        let q = q_matrix(&ring, 2, &set_i, &set_j, QMode::Col, |i, j| {
            (100 * i as i64) + j as i64
        });
        assert_eq!(*q.get(1, 1), 102); // weight 1, pair (1,2)
        assert_eq!(*q.get(1, 2), 0); // weight 0
        assert_eq!(*q.get(2, 1), 302); // weight 1, pair (3,2)
        let q = q_matrix(&ring, 2, &set_i, &set_j, QMode::Row, |i, j| {
            (100 * i as i64) + j as i64
        });
        assert_eq!(*q.get(1, 1), 0); // weight 0 on the first row
        assert_eq!(*q.get(2, 2), 303); // weight 1, pair (3,3)
    }

    #[test]
    fn predicate_flags_on_known_matrices() {
        let ring = M2GF2Ring;
        // identical noncommuting rows: both symmetric patterns, no
        // commutativity pattern
        let m = NCMatrix::from_rows(vec![
            vec![M2GF2::ALPHA, M2GF2::ALPHA],
            vec![M2GF2::BETA, M2GF2::BETA],
        ]);
        let p = commutation_predicates(&ring, &m);
        assert!(p.row_symmetric && p.column_symmetric);
        assert!(!p.fully_commutative && !p.row_commutative && !p.column_commutative);
        // same-row entries are equal, so they commute: the column-pseudo
        // pattern holds; same-column entries do not commute, so the row
        // pattern fails
        assert!(p.column_pseudo_commutative && !p.row_pseudo_commutative);
        assert_eq!(p.class_label(), "column-pseudo-commutative");
        assert!(p.implications_hold(ring.two_torsion_free()));

        // commuting entries: everything holds
        let c = NCMatrix::from_rows(vec![
            vec![M2GF2::ONE, M2GF2::ZERO],
            vec![M2GF2::ZERO, M2GF2::ONE],
        ]);
        let p = commutation_predicates(&ring, &c);
        assert!(p.fully_commutative && p.row_pseudo_commutative && p.column_pseudo_commutative);
        assert!(p.implications_hold(ring.two_torsion_free()));
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(vec![1, 2, 2]).is_err());
        assert!(IndexSet::new(vec![0, 1]).is_err());
        assert!(IndexSet::new(vec![2, 1]).is_err());
        assert_eq!(IndexSet::subsets(3, 2).len(), 3);
        assert!(IndexSet::subsets(2, 3).is_empty());
        let s = IndexSet::new(vec![1, 3]).unwrap();
        assert_eq!(s.complement(4), IndexSet::new(vec![2, 4]).unwrap());
        assert_eq!(s.index_sum(), 4);
    }
}
