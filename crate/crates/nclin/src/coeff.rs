//! Commutative coefficient polynomials with exact integer arithmetic.
//!
//! Every scalar that can sit next to a word of noncommuting generators is a
//! polynomial in a fixed family of central symbols: two scalars `h1` and `h2`,
//! entries `h[i,j]` of a matrix of central symbols, and diagonal correction
//! symbols `q[i]`. Coefficients are `i64`; every addition and multiplication
//! is checked and aborts loudly on overflow instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;

/// Checked addition; panics on overflow.
pub fn cadd(x: i64, y: i64) -> i64 {
    x.checked_add(y)
        .unwrap_or_else(|| panic!("coefficient overflow: {x} + {y}"))
}

/// Checked multiplication; panics on overflow.
pub fn cmul(x: i64, y: i64) -> i64 {
    x.checked_mul(y)
        .unwrap_or_else(|| panic!("coefficient overflow: {x} * {y}"))
}

/// Checked integer power; panics on overflow.
pub fn cpow(x: i64, e: u32) -> i64 {
    let mut acc = 1i64;
    for _ in 0..e {
        acc = cmul(acc, x);
    }
    acc
}

/// A central (commuting) symbol.
///
/// The derived order `H1 < H2 < Hm(i,j) < Q(i)` (with `Hm` ordered
/// lexicographically by index pair and `Q` by index) fixes the canonical
/// variable sort inside monomials. Indices are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CVar {
    H1,
    H2,
    /// Entry of the matrix of central symbols.
    Hm(u8, u8),
    /// Diagonal correction symbol.
    Q(u8),
}

impl fmt::Display for CVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CVar::H1 => write!(f, "h1"),
            CVar::H2 => write!(f, "h2"),
            CVar::Hm(i, j) => write!(f, "h[{i},{j}]"),
            CVar::Q(i) => write!(f, "q[{i}]"),
        }
    }
}

/// A monomial: sorted `(variable, exponent)` pairs, exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CMono(Vec<(CVar, u32)>);

impl CMono {
    /// The empty monomial (multiplicative unit).
    pub fn unit() -> Self {
        CMono(Vec::new())
    }

    pub fn var(v: CVar) -> Self {
        CMono(vec![(v, 1)])
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn vars(&self) -> &[(CVar, u32)] {
        &self.0
    }

    /// Exponent of `v` in this monomial.
    pub fn exponent(&self, v: CVar) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Merge product of two sorted variable lists.
    pub fn mul(&self, other: &CMono) -> CMono {
        let mut out: Vec<(CVar, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a, ea.checked_add(eb).expect("exponent overflow")));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        CMono(out)
    }

    /// The monomial with `v` removed, paired with the exponent it had.
    fn split_var(&self, v: CVar) -> (CMono, u32) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut exp = 0;
        for &(w, e) in &self.0 {
            if w == v {
                exp = e;
            } else {
                rest.push((w, e));
            }
        }
        (CMono(rest), exp)
    }
}

/// Graded-lexicographic order: total degree first, then the variable list.
impl Ord for CMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for CMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial: map from monomial to nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CoeffPoly(BTreeMap<CMono, i64>);

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly(BTreeMap::new())
    }

    pub fn int(k: i64) -> Self {
        let mut p = CoeffPoly::zero();
        p.add_term(CMono::unit(), k);
        p
    }

    pub fn one() -> Self {
        CoeffPoly::int(1)
    }

    pub fn var(v: CVar) -> Self {
        let mut p = CoeffPoly::zero();
        p.add_term(CMono::var(v), 1);
        p
    }

    /// `k * v`, a scaled variable.
    pub fn scaled_var(k: i64, v: CVar) -> Self {
        let mut p = CoeffPoly::zero();
        p.add_term(CMono::var(v), k);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.0.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CMono, i64)> {
        self.0.iter().map(|(m, &c)| (m, c))
    }

    /// Accumulate `k` onto the coefficient of `mono`, dropping zeros.
    pub fn add_term(&mut self, mono: CMono, k: i64) {
        if k == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(mono) {
            Entry::Occupied(mut o) => {
                let v = cadd(*o.get(), k);
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(k);
            }
        }
    }

    pub fn add(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> CoeffPoly {
        CoeffPoly(
            self.0
                .iter()
                .map(|(m, &c)| (m.clone(), c.checked_neg().expect("coefficient overflow")))
                .collect(),
        )
    }

    pub fn sub(&self, other: &CoeffPoly) -> CoeffPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.mul(m2), cmul(c1, c2));
            }
        }
        out
    }

    pub fn int_mul(&self, k: i64) -> CoeffPoly {
        if k == 0 {
            return CoeffPoly::zero();
        }
        CoeffPoly(self.0.iter().map(|(m, &c)| (m.clone(), cmul(c, k))).collect())
    }

    pub fn pow(&self, e: u32) -> CoeffPoly {
        let mut acc = CoeffPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `rep` for every occurrence of `target`.
    pub fn subst(&self, target: CVar, rep: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m, c) in self.terms() {
            let (rest, e) = m.split_var(target);
            if e == 0 {
                out.add_term(rest, c);
            } else {
                let mut piece = CoeffPoly::zero();
                piece.add_term(rest, c);
                out = out.add(&piece.mul(&rep.pow(e)));
            }
        }
        out
    }

    /// The constant value, if the polynomial mentions no variables.
    pub fn as_int(&self) -> Option<i64> {
        match self.0.len() {
            0 => Some(0),
            1 => {
                let (m, &c) = self.0.iter().next().unwrap();
                if m.is_unit() {
                    Some(c)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Largest index `i` such that `q[i]` occurs, or 0.
    pub fn max_q_index(&self) -> u8 {
        let mut max = 0;
        for (m, _) in self.terms() {
            for &(v, _) in m.vars() {
                if let CVar::Q(i) = v {
                    max = max.max(i);
                }
            }
        }
        max
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        // leading (largest) term first
        let mut first = true;
        for (m, &c) in self.0.iter().rev() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if m.is_unit() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_order_is_h1_h2_matrix_then_q() {
        assert!(CVar::H1 < CVar::H2);
        assert!(CVar::H2 < CVar::Hm(1, 1));
        assert!(CVar::Hm(1, 2) < CVar::Hm(2, 1));
        assert!(CVar::Hm(9, 9) < CVar::Q(1));
        assert!(CVar::Q(1) < CVar::Q(2));
    }

    #[test]
    fn monomial_order_is_graded_then_lex() {
        let h1 = CMono::var(CVar::H1);
        let q1 = CMono::var(CVar::Q(1));
        let h1h1 = h1.mul(&h1);
        // degree dominates
        assert!(q1 < h1h1);
        // same degree: lex on the variable list
        assert!(h1 < q1);
        assert!(h1.mul(&q1) < q1.mul(&q1));
    }

    #[test]
    fn arithmetic_cancels_exactly() {
        let p = CoeffPoly::var(CVar::H1).add(&CoeffPoly::int(2));
        let q = CoeffPoly::var(CVar::H1).sub(&CoeffPoly::int(2));
        // (h1+2)(h1-2) = h1^2 - 4
        let prod = p.mul(&q);
        let mut expect = CoeffPoly::zero();
        expect.add_term(CMono::var(CVar::H1).mul(&CMono::var(CVar::H1)), 1);
        expect.add_term(CMono::unit(), -4);
        assert_eq!(prod, expect);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution_replaces_all_powers() {
        // q[1]^2*h1 with q[1] := 3*h1  gives  9*h1^3
        let p = CoeffPoly::var(CVar::Q(1))
            .mul(&CoeffPoly::var(CVar::Q(1)))
            .mul(&CoeffPoly::var(CVar::H1));
        let rep = CoeffPoly::scaled_var(3, CVar::H1);
        let got = p.subst(CVar::Q(1), &rep);
        let expect = CoeffPoly::var(CVar::H1).pow(3).int_mul(9);
        assert_eq!(got, expect);
    }

    #[test]
    fn substitution_by_zero_kills_terms() {
        let p = CoeffPoly::var(CVar::Q(2)).add(&CoeffPoly::int(5));
        assert_eq!(p.subst(CVar::Q(2), &CoeffPoly::zero()), CoeffPoly::int(5));
    }

    #[test]
    fn as_int_only_on_constants() {
        assert_eq!(CoeffPoly::zero().as_int(), Some(0));
        assert_eq!(CoeffPoly::int(-7).as_int(), Some(-7));
        assert_eq!(CoeffPoly::var(CVar::H1).as_int(), None);
    }

    #[test]
    #[should_panic(expected = "coefficient overflow")]
    fn overflow_panics_instead_of_wrapping() {
        let big = CoeffPoly::int(i64::MAX);
        let _ = big.mul(&CoeffPoly::int(2));
    }

    #[test]
    fn display_is_deterministic() {
        let p = CoeffPoly::var(CVar::H1)
            .mul(&CoeffPoly::var(CVar::H1))
            .int_mul(2)
            .sub(&CoeffPoly::var(CVar::Q(1)))
            .add(&CoeffPoly::int(1));
        assert_eq!(p.to_string(), "2*h1^2 - q[1] + 1");
    }
}
