//! Noncommuting generators, words, and normal ordering.
//!
//! A [`Word`] is a product of matrix-entry generators. A [`Context`] fixes the
//! commutation relations between generators and rewrites arbitrary words into
//! a canonical normal form: generators sorted ascending, with every adjacent
//! swap of an out-of-order pair paying the prescribed central correction.
//! Normal forms are memoized per context, so repeated subwords are reordered
//! once.

use crate::coeff::{CVar, CoeffPoly};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};
use thiserror::Error;

/// Generator family. Two symbolic families `A` and `B`, and the
/// multiply-by-coordinate / differentiate pair `X` and `D`.
/// The derived order `A < B < X < D` drives normal ordering.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Species {
    A,
    B,
    X,
    D,
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Species::A => write!(f, "a"),
            Species::B => write!(f, "b"),
            Species::X => write!(f, "x"),
            Species::D => write!(f, "d"),
        }
    }
}

/// A single generator: one matrix entry, 1-based indices.
/// Ordered by `(species, row, col)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gen {
    pub species: Species,
    pub row: u8,
    pub col: u8,
}

impl Gen {
    pub fn new(species: Species, row: u8, col: u8) -> Self {
        Gen { species, row, col }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.species, self.row, self.col)
    }
}

/// A product of generators, left to right.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: Gen) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Index of the first adjacent strictly descending pair, if any.
    fn first_inversion(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] > w[1])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// How the second scalar symbol relates to the first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum H2Mode {
    Zero,
    PlusH1,
    MinusH1,
    Free,
}

/// The commutation relations a context enforces.
///
/// In every family the two generator species commute within themselves; the
/// cross-species commutator is what varies:
///
/// * `AbstractH1H2`: `[a[i,j], b[k,l]] = -(h1 d_ik d_jl + h2 d_il d_jk)` with
///   `h1`, `h2` central scalars and `h2` optionally tied to `h1`.
/// * `AbstractMatrixH`: a whole matrix of central symbols. With `dual: false`
///   the commutator is `-d_ik h[j,l]` (symbols indexed by the column pair);
///   with `dual: true` it is `-h[i,k] d_jl` (indexed by the row pair). The two
///   orientations are kept as independent verification routes.
/// * `Weyl`: `x` and `d` generators with `[x[i,j], d[k,l]] = -h d_ik d_jl`
///   for a fixed integer `h`.
/// * `Commutative`: everything commutes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RelationSystem {
    AbstractH1H2 { h2: H2Mode },
    AbstractMatrixH { dual: bool },
    Weyl { h: i64 },
    Commutative,
}

/// Eager index symmetry imposed on one generator species.
///
/// Applied at construction time: the lower triangle is rewritten into the
/// upper triangle (with a sign for the antisymmetric rules), and the diagonal
/// of a fully antisymmetric species is zero. `AntisymmetricOffDiagonal`
/// leaves the diagonal free.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SymmetryRule {
    None,
    Symmetric,
    Antisymmetric,
    AntisymmetricOffDiagonal,
}

impl SymmetryRule {
    /// The `h2`-mode this rule forces on the two-scalar relation family, if
    /// any: tying transposed entries together also ties the two delta terms
    /// of the cross commutator together.
    fn required_h2(self) -> Option<H2Mode> {
        match self {
            SymmetryRule::None => None,
            SymmetryRule::Symmetric => Some(H2Mode::PlusH1),
            SymmetryRule::Antisymmetric | SymmetryRule::AntisymmetricOffDiagonal => {
                Some(H2Mode::MinusH1)
            }
        }
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum ContextError {
    #[error("symmetry rules are only supported with the two-scalar relation family or a fully commutative context")]
    SymmetryUnsupported,
    #[error("species {side} with rule {rule:?} forces h2 mode {required:?}, but the context declares {got:?}")]
    IncompatibleSymmetry {
        side: char,
        rule: SymmetryRule,
        required: H2Mode,
        got: H2Mode,
    },
    #[error("opposed symmetries on the two species force both scalars to vanish; use a commutative context instead")]
    OpposedSymmetries,
}

type NormalForm = BTreeMap<Word, CoeffPoly>;

/// A set of commutation relations plus eager symmetry rules, with a memo
/// table for normal forms.
pub struct Context {
    pub relations: RelationSystem,
    pub sym_a: SymmetryRule,
    pub sym_b: SymmetryRule,
    memo: RwLock<HashMap<Word, Arc<NormalForm>>>,
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("relations", &self.relations)
            .field("sym_a", &self.sym_a)
            .field("sym_b", &self.sym_b)
            .finish()
    }
}

impl Context {
    pub fn new(
        relations: RelationSystem,
        sym_a: SymmetryRule,
        sym_b: SymmetryRule,
    ) -> Result<Arc<Context>, ContextError> {
        match relations {
            RelationSystem::Commutative => {}
            RelationSystem::AbstractH1H2 { h2 } => {
                let req_a = sym_a.required_h2();
                let req_b = sym_b.required_h2();
                if let (Some(ra), Some(rb)) = (req_a, req_b) {
                    if ra != rb {
                        return Err(ContextError::OpposedSymmetries);
                    }
                }
                for (side, rule, req) in [('A', sym_a, req_a), ('B', sym_b, req_b)] {
                    if let Some(required) = req {
                        if h2 != required {
                            return Err(ContextError::IncompatibleSymmetry {
                                side,
                                rule,
                                required,
                                got: h2,
                            });
                        }
                    }
                }
            }
            RelationSystem::AbstractMatrixH { .. } | RelationSystem::Weyl { .. } => {
                if sym_a != SymmetryRule::None || sym_b != SymmetryRule::None {
                    return Err(ContextError::SymmetryUnsupported);
                }
            }
        }
        Ok(Arc::new(Context {
            relations,
            sym_a,
            sym_b,
            memo: RwLock::new(HashMap::new()),
        }))
    }

    /// Two-scalar relation family without symmetry rules.
    pub fn abstract_h1h2(h2: H2Mode) -> Arc<Context> {
        Context::new(RelationSystem::AbstractH1H2 { h2 }, SymmetryRule::None, SymmetryRule::None)
            .expect("no symmetry rules to validate")
    }

    /// Matrix-of-central-symbols relation family.
    pub fn matrix_h(dual: bool) -> Arc<Context> {
        Context::new(RelationSystem::AbstractMatrixH { dual }, SymmetryRule::None, SymmetryRule::None)
            .expect("no symmetry rules to validate")
    }

    /// Coordinate/derivative family with integer correction `h`.
    pub fn weyl(h: i64) -> Arc<Context> {
        Context::new(RelationSystem::Weyl { h }, SymmetryRule::None, SymmetryRule::None)
            .expect("no symmetry rules to validate")
    }

    pub fn commutative() -> Arc<Context> {
        Context::new(RelationSystem::Commutative, SymmetryRule::None, SymmetryRule::None)
            .expect("no symmetry rules to validate")
    }

    fn species_allowed(&self, s: Species) -> bool {
        match self.relations {
            RelationSystem::Weyl { .. } => matches!(s, Species::X | Species::D),
            RelationSystem::Commutative => true,
            _ => matches!(s, Species::A | Species::B),
        }
    }

    fn symmetry_for(&self, s: Species) -> SymmetryRule {
        match s {
            Species::A => self.sym_a,
            Species::B => self.sym_b,
            _ => SymmetryRule::None,
        }
    }

    /// The matrix entry `(row, col)` of the given species as an element, with
    /// the species' symmetry rule applied eagerly.
    pub fn gen_element(&self, species: Species, row: u8, col: u8) -> NCElement {
        assert!(
            self.species_allowed(species),
            "species {species:?} is not part of relation system {:?}",
            self.relations
        );
        assert!(row >= 1 && col >= 1, "generator indices are 1-based");
        let rule = self.symmetry_for(species);
        let (sign, g) = match rule {
            SymmetryRule::None => (1, Gen::new(species, row, col)),
            SymmetryRule::Symmetric => {
                if row > col {
                    (1, Gen::new(species, col, row))
                } else {
                    (1, Gen::new(species, row, col))
                }
            }
            SymmetryRule::Antisymmetric => {
                if row == col {
                    return NCElement::zero();
                } else if row > col {
                    (-1, Gen::new(species, col, row))
                } else {
                    (1, Gen::new(species, row, col))
                }
            }
            SymmetryRule::AntisymmetricOffDiagonal => {
                if row > col {
                    (-1, Gen::new(species, col, row))
                } else {
                    (1, Gen::new(species, row, col))
                }
            }
        };
        let mut terms = BTreeMap::new();
        terms.insert(Word::single(g), CoeffPoly::int(sign));
        NCElement { terms }
    }

    /// Commutator `[g1, g2]` for an adjacent descending pair (`g1 > g2`).
    /// Central in every relation system, so it is a plain coefficient.
    fn swap_correction(&self, g1: Gen, g2: Gen) -> CoeffPoly {
        debug_assert!(g1 > g2);
        if g1.species == g2.species {
            return CoeffPoly::zero();
        }
        match self.relations {
            RelationSystem::Commutative => CoeffPoly::zero(),
            RelationSystem::AbstractH1H2 { h2 } => {
                // g1 = b[k,l], g2 = a[i,j]; [b,a] = h1 d_ik d_jl + h2 d_il d_jk
                let (k, l) = (g1.row, g1.col);
                let (i, j) = (g2.row, g2.col);
                let mut c = CoeffPoly::zero();
                if i == k && j == l {
                    c = c.add(&CoeffPoly::var(CVar::H1));
                }
                if i == l && j == k {
                    let part = match h2 {
                        H2Mode::Zero => CoeffPoly::zero(),
                        H2Mode::PlusH1 => CoeffPoly::var(CVar::H1),
                        H2Mode::MinusH1 => CoeffPoly::var(CVar::H1).neg(),
                        H2Mode::Free => CoeffPoly::var(CVar::H2),
                    };
                    c = c.add(&part);
                }
                c
            }
            RelationSystem::AbstractMatrixH { dual } => {
                let (k, l) = (g1.row, g1.col);
                let (i, j) = (g2.row, g2.col);
                if !dual {
                    // [b[k,l], a[i,j]] = d_ik h[j,l]
                    if i == k {
                        CoeffPoly::var(CVar::Hm(j, l))
                    } else {
                        CoeffPoly::zero()
                    }
                } else {
                    // [b[k,l], a[i,j]] = h[i,k] d_jl
                    if j == l {
                        CoeffPoly::var(CVar::Hm(i, k))
                    } else {
                        CoeffPoly::zero()
                    }
                }
            }
            RelationSystem::Weyl { h } => {
                // g1 = d[k,l], g2 = x[i,j]; [d,x] = h d_ik d_jl
                let (k, l) = (g1.row, g1.col);
                let (i, j) = (g2.row, g2.col);
                if i == k && j == l {
                    CoeffPoly::int(h)
                } else {
                    CoeffPoly::zero()
                }
            }
        }
    }

    /// Rewrite a word into its canonical normal form.
    pub fn normal_order(&self, w: &Word) -> Arc<NormalForm> {
        if let Some(nf) = self.memo.read().unwrap().get(w) {
            return nf.clone();
        }
        let nf = match w.first_inversion() {
            None => {
                let mut m = BTreeMap::new();
                m.insert(w.clone(), CoeffPoly::one());
                Arc::new(m)
            }
            Some(t) => {
                let g1 = w.0[t];
                let g2 = w.0[t + 1];
                let mut swapped = w.clone();
                swapped.0.swap(t, t + 1);
                let mut acc: NormalForm = (*self.normal_order(&swapped)).clone();
                let c = self.swap_correction(g1, g2);
                if !c.is_zero() {
                    let mut shortened = w.clone();
                    shortened.0.drain(t..t + 2);
                    for (sub, p) in self.normal_order(&shortened).iter() {
                        let scaled = p.mul(&c);
                        merge_term(&mut acc, sub, &scaled);
                    }
                }
                Arc::new(acc)
            }
        };
        self.memo
            .write()
            .unwrap()
            .entry(w.clone())
            .or_insert(nf)
            .clone()
    }

    /// Product of two elements, normal-ordered.
    pub fn mul(&self, x: &NCElement, y: &NCElement) -> NCElement {
        let mut terms: NormalForm = BTreeMap::new();
        for (wx, px) in &x.terms {
            for (wy, py) in &y.terms {
                let coeff = px.mul(py);
                for (w, p) in self.normal_order(&wx.concat(wy)).iter() {
                    let scaled = p.mul(&coeff);
                    merge_term(&mut terms, w, &scaled);
                }
            }
        }
        NCElement { terms }
    }

    /// Left-to-right product of a sequence of elements.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a NCElement>) -> NCElement {
        let mut acc = NCElement::one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// Number of memoized normal forms (diagnostic).
    pub fn memo_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }
}

fn merge_term(into: &mut NormalForm, w: &Word, p: &CoeffPoly) {
    if p.is_zero() {
        return;
    }
    match into.get_mut(w) {
        Some(q) => {
            let sum = q.add(p);
            if sum.is_zero() {
                into.remove(w);
            } else {
                *q = sum;
            }
        }
        None => {
            into.insert(w.clone(), p.clone());
        }
    }
}

/// An element of the ring a [`Context`] presents: a finite sum of
/// normal-ordered words with polynomial coefficients. The map never stores a
/// zero coefficient, so equality of maps is equality of elements.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NCElement {
    terms: NormalForm,
}

impl NCElement {
    pub fn zero() -> Self {
        NCElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        NCElement::scalar(CoeffPoly::one())
    }

    pub fn int(k: i64) -> Self {
        NCElement::scalar(CoeffPoly::int(k))
    }

    /// A central scalar as an element (coefficient on the empty word).
    pub fn scalar(p: CoeffPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(Word::empty(), p);
        }
        NCElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total number of monomials: word terms weighted by the size of their
    /// coefficient polynomials.
    pub fn term_count(&self) -> usize {
        self.terms.values().map(|p| p.term_count()).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &NCElement) -> NCElement {
        let mut terms = self.terms.clone();
        for (w, p) in &other.terms {
            merge_term(&mut terms, w, p);
        }
        NCElement { terms }
    }

    pub fn neg(&self) -> NCElement {
        NCElement {
            terms: self.terms.iter().map(|(w, p)| (w.clone(), p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &NCElement) -> NCElement {
        self.add(&other.neg())
    }

    pub fn int_mul(&self, k: i64) -> NCElement {
        if k == 0 {
            return NCElement::zero();
        }
        NCElement {
            terms: self
                .terms
                .iter()
                .map(|(w, p)| (w.clone(), p.int_mul(k)))
                .collect(),
        }
    }

    /// Multiply every coefficient by a central scalar.
    pub fn scale(&self, c: &CoeffPoly) -> NCElement {
        if c.is_zero() {
            return NCElement::zero();
        }
        NCElement {
            terms: self.terms.iter().map(|(w, p)| (w.clone(), p.mul(c))).collect(),
        }
    }

    /// Substitute a coefficient variable in every term.
    pub fn subst(&self, target: CVar, rep: &CoeffPoly) -> NCElement {
        let mut terms = BTreeMap::new();
        for (w, p) in &self.terms {
            let q = p.subst(target, rep);
            if !q.is_zero() {
                terms.insert(w.clone(), q);
            }
        }
        NCElement { terms }
    }
}

impl fmt::Display for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, p) in &self.terms {
            let simple = p.as_int();
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{p}")?;
            } else if simple == Some(1) {
                write!(f, "{w}")?;
            } else if simple == Some(-1) {
                write!(f, "-{w}")?;
            } else if p.term_count() == 1 {
                write!(f, "{p}*{w}")?;
            } else {
                write!(f, "({p})*{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(sp: Species, i: u8, j: u8) -> Gen {
        Gen::new(sp, i, j)
    }

    #[test]
    fn one_variable_coordinate_derivative_swap() {
        // d*x = x*d + 1
        let ctx = Context::weyl(1);
        let x = ctx.gen_element(Species::X, 1, 1);
        let d = ctx.gen_element(Species::D, 1, 1);
        let dx = ctx.mul(&d, &x);
        let expect = ctx.mul(&x, &d).add(&NCElement::one());
        assert_eq!(dx, expect);
        assert_eq!(dx.term_count(), 2);
    }

    #[test]
    fn same_species_sorts_without_correction() {
        let ctx = Context::abstract_h1h2(H2Mode::Zero);
        let hi = ctx.gen_element(Species::A, 2, 1);
        let lo = ctx.gen_element(Species::A, 1, 1);
        assert_eq!(ctx.mul(&hi, &lo), ctx.mul(&lo, &hi));
    }

    #[test]
    fn cross_species_correction_two_scalar_family() {
        let ctx = Context::abstract_h1h2(H2Mode::Zero);
        let a = ctx.gen_element(Species::A, 1, 1);
        let b = ctx.gen_element(Species::B, 1, 1);
        // b*a = a*b + h1 when the indices line up
        let got = ctx.mul(&b, &a);
        let expect = ctx.mul(&a, &b).add(&NCElement::scalar(CoeffPoly::var(CVar::H1)));
        assert_eq!(got, expect);
        // and a clean swap when they do not
        let b12 = ctx.gen_element(Species::B, 1, 2);
        assert_eq!(ctx.mul(&b12, &a), ctx.mul(&a, &b12));
    }

    #[test]
    fn second_delta_term_tracks_the_mode() {
        // indices i=1,j=2,k=2,l=1 trigger only the transposed delta pair
        for (mode, coeff) in [
            (H2Mode::Zero, CoeffPoly::zero()),
            (H2Mode::PlusH1, CoeffPoly::var(CVar::H1)),
            (H2Mode::MinusH1, CoeffPoly::var(CVar::H1).neg()),
            (H2Mode::Free, CoeffPoly::var(CVar::H2)),
        ] {
            let ctx = Context::abstract_h1h2(mode);
            let a = ctx.gen_element(Species::A, 1, 2);
            let b = ctx.gen_element(Species::B, 2, 1);
            let got = ctx.mul(&b, &a);
            let expect = ctx.mul(&a, &b).add(&NCElement::scalar(coeff));
            assert_eq!(got, expect, "mode {mode:?}");
        }
    }

    #[test]
    fn matrix_symbol_corrections_in_both_orientations() {
        // primary: [b[k,l], a[i,j]] = d_ik h[j,l]
        let ctx = Context::matrix_h(false);
        let a = ctx.gen_element(Species::A, 1, 1);
        let b = ctx.gen_element(Species::B, 1, 2);
        let got = ctx.mul(&b, &a);
        let expect = ctx
            .mul(&a, &b)
            .add(&NCElement::scalar(CoeffPoly::var(CVar::Hm(1, 2))));
        assert_eq!(got, expect);

        // dual: [b[k,l], a[i,j]] = h[i,k] d_jl
        let ctx = Context::matrix_h(true);
        let a = ctx.gen_element(Species::A, 1, 2);
        let b = ctx.gen_element(Species::B, 3, 2);
        let got = ctx.mul(&b, &a);
        let expect = ctx
            .mul(&a, &b)
            .add(&NCElement::scalar(CoeffPoly::var(CVar::Hm(1, 3))));
        assert_eq!(got, expect);
    }

    #[test]
    fn eager_symmetry_rules() {
        let ctx = Context::new(
            RelationSystem::AbstractH1H2 { h2: H2Mode::PlusH1 },
            SymmetryRule::Symmetric,
            SymmetryRule::None,
        )
        .unwrap();
        assert_eq!(ctx.gen_element(Species::A, 2, 1), ctx.gen_element(Species::A, 1, 2));

        let ctx = Context::new(
            RelationSystem::AbstractH1H2 { h2: H2Mode::MinusH1 },
            SymmetryRule::Antisymmetric,
            SymmetryRule::None,
        )
        .unwrap();
        assert!(ctx.gen_element(Species::A, 2, 2).is_zero());
        assert_eq!(
            ctx.gen_element(Species::A, 2, 1),
            ctx.gen_element(Species::A, 1, 2).neg()
        );

        let ctx = Context::new(
            RelationSystem::AbstractH1H2 { h2: H2Mode::MinusH1 },
            SymmetryRule::AntisymmetricOffDiagonal,
            SymmetryRule::None,
        )
        .unwrap();
        assert!(!ctx.gen_element(Species::A, 2, 2).is_zero());
    }

    #[test]
    fn incoherent_symmetry_contexts_are_rejected() {
        assert_eq!(
            Context::new(
                RelationSystem::AbstractH1H2 { h2: H2Mode::Zero },
                SymmetryRule::Symmetric,
                SymmetryRule::None,
            )
            .err(),
            Some(ContextError::IncompatibleSymmetry {
                side: 'A',
                rule: SymmetryRule::Symmetric,
                required: H2Mode::PlusH1,
                got: H2Mode::Zero,
            })
        );
        assert_eq!(
            Context::new(
                RelationSystem::AbstractH1H2 { h2: H2Mode::PlusH1 },
                SymmetryRule::Symmetric,
                SymmetryRule::Antisymmetric,
            )
            .err(),
            Some(ContextError::OpposedSymmetries)
        );
        assert!(Context::new(
            RelationSystem::Weyl { h: 1 },
            SymmetryRule::Symmetric,
            SymmetryRule::None,
        )
        .is_err());
    }

    #[test]
    fn multiplication_is_associative_on_a_mixed_triple() {
        let ctx = Context::matrix_h(false);
        let p = ctx.gen_element(Species::B, 1, 2);
        let q = ctx.gen_element(Species::A, 1, 1);
        let r = ctx.gen_element(Species::B, 2, 1).add(&ctx.gen_element(Species::A, 2, 2));
        let left = ctx.mul(&ctx.mul(&p, &q), &r);
        let right = ctx.mul(&p, &ctx.mul(&q, &r));
        assert_eq!(left, right);
    }

    #[test]
    fn commutative_context_flattens_everything() {
        let ctx = Context::commutative();
        let x = ctx.gen_element(Species::X, 1, 1);
        let d = ctx.gen_element(Species::D, 1, 1);
        assert_eq!(ctx.mul(&d, &x), ctx.mul(&x, &d));
    }
}
