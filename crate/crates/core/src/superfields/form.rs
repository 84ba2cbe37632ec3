use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactla::{ExactMatrix, Scalar};

/// Basis monomial e_{i1} ∧ ⋯ ∧ e_{ik} of ΛS, stored as a bitmask with i1 < ⋯ < ik.
pub type Word = u64;

pub fn word_degree(w: Word) -> usize {
    w.count_ones() as usize
}

/// Sign and product of two basis words, `None` when they share a factor.
pub fn wedge_words(a: Word, b: Word) -> Option<(Word, bool)> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    Some((a | b, swaps % 2 == 1))
}

/// Element of the exterior algebra ΛS with exact coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperForm {
    terms: BTreeMap<Word, Scalar>,
}

impl std::fmt::Debug for SuperForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(w, c)| (format!("{w:#b}"), c)))
            .finish()
    }
}

impl SuperForm {
    pub fn zero() -> Self {
        SuperForm::default()
    }

    pub fn scalar(c: Scalar) -> Self {
        let mut f = SuperForm::zero();
        f.add_term(0, c);
        f
    }

    pub fn one() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn basis(i: usize) -> Self {
        let mut f = SuperForm::zero();
        f.add_term(1 << i, Scalar::one());
        f
    }

    /// The 1-form Σ v_i e_i.
    pub fn from_spinor(v: &[Scalar]) -> Self {
        let mut f = SuperForm::zero();
        for (i, c) in v.iter().enumerate() {
            f.add_term(1 << i, c.clone());
        }
        f
    }

    pub fn monomial(word: Word, c: Scalar) -> Self {
        let mut f = SuperForm::zero();
        f.add_term(word, c);
        f
    }

    pub fn add_term(&mut self, word: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Word, &Scalar)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn coefficient(&self, word: Word) -> Scalar {
        self.terms.get(&word).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| word_degree(*w)).max()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|w| word_degree(*w)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn homogeneous_part(&self, degree: usize) -> Self {
        SuperForm {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| word_degree(**w) == degree)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// Even (`false`) or odd (`true`) part.
    pub fn parity_part(&self, odd: bool) -> Self {
        SuperForm {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| (word_degree(**w) % 2 == 1) == odd)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(*w, c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(*w, c * s);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return SuperForm::zero();
        }
        SuperForm {
            terms: self.terms.iter().map(|(w, c)| (*w, c * s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = SuperForm::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((w, negative)) = wedge_words(*a, *b) {
                    let c = ca * cb;
                    out.add_term(w, if negative { -c } else { c });
                }
            }
        }
        out
    }

    /// Extension of an endomorphism Φ of S to ΛS as an even derivation,
    /// Φ(e_i) = Σ_l Φ_{li} e_l.
    pub fn endo_derivation(&self, phi: &ExactMatrix) -> Self {
        let mut out = SuperForm::zero();
        for (w, c) in &self.terms {
            let mut rest = *w;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let others = *w & !(1u64 << i);
                // moving e_i to the front costs the number of factors before it
                let front_sign = (others & ((1u64 << i) - 1)).count_ones() % 2 == 1;
                for l in 0..phi.rows() {
                    let x = phi.get(l, i);
                    if x.is_zero() {
                        continue;
                    }
                    if let Some((nw, neg)) = wedge_words(1 << l, others) {
                        let v = c * x;
                        out.add_term(nw, if neg != front_sign { -v } else { v });
                    }
                }
            }
        }
        out
    }

    /// Odd antiderivation of degree −1 determined by e_i ↦ covector[i].
    pub fn interior(&self, covector: &[Scalar]) -> Self {
        let mut out = SuperForm::zero();
        for (w, c) in &self.terms {
            let mut rest = *w;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let x = &covector[i];
                if x.is_zero() {
                    continue;
                }
                let before = (*w & ((1u64 << i) - 1)).count_ones();
                let v = c * x;
                out.add_term(*w & !(1u64 << i), if before % 2 == 1 { -v } else { v });
            }
        }
        out
    }

    /// Keep only components up to the given degree; reports whether anything was dropped.
    pub fn truncate_degree(&mut self, max: usize) -> bool {
        let before = self.terms.len();
        self.terms.retain(|w, _| word_degree(*w) <= max);
        before != self.terms.len()
    }

    /// Coefficient list of a 1-form as a spinor of the given dimension.
    pub fn as_spinor(&self, n: usize) -> Option<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); n];
        for (w, c) in &self.terms {
            if word_degree(*w) != 1 {
                return None;
            }
            v[w.trailing_zeros() as usize] = c.clone();
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_signs() {
        let (e0, e1, e2) = (
            SuperForm::basis(0),
            SuperForm::basis(1),
            SuperForm::basis(2),
        );
        assert_eq!(e1.wedge(&e0), e0.wedge(&e1).neg());
        assert!(e1.wedge(&e1).is_zero());
        let a = e0.wedge(&e2);
        assert_eq!(e1.wedge(&a), a.wedge(&e1));
        assert_eq!(e1.wedge(&a), e0.wedge(&e1).wedge(&e2).neg());
    }

    #[test]
    fn interior_is_antiderivation() {
        let cov = vec![Scalar::from(2), Scalar::from(-1), Scalar::from(3)];
        let a = SuperForm::basis(0).add(&SuperForm::basis(1).wedge(&SuperForm::basis(2)));
        let b = SuperForm::basis(2).add(&SuperForm::basis(0));
        let lhs = a.wedge(&b).interior(&cov);
        // split a by parity to apply the graded Leibniz rule
        let even = a.parity_part(false);
        let odd = a.parity_part(true);
        let rhs = even
            .interior(&cov)
            .wedge(&b)
            .add(&even.wedge(&b.interior(&cov)))
            .add(&odd.interior(&cov).wedge(&b))
            .sub(&odd.wedge(&b.interior(&cov)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn endo_derivation_is_leibniz() {
        let phi = ExactMatrix::from_ints(&[&[1, 2, 0], &[0, -1, 3], &[4, 0, 1]]);
        let a = SuperForm::basis(0).wedge(&SuperForm::basis(2));
        let b = SuperForm::basis(1);
        let lhs = a.wedge(&b).endo_derivation(&phi);
        let rhs = a
            .endo_derivation(&phi)
            .wedge(&b)
            .add(&a.wedge(&b.endo_derivation(&phi)));
        assert_eq!(lhs, rhs);
    }
}
