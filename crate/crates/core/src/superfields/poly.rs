use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::form::SuperForm;
use crate::exactla::Scalar;

const BITS: u32 = 6;
const MASK: u64 = (1 << BITS) - 1;

/// Monomial x^α in at most ten coordinates, six bits per exponent.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(mu: usize) -> Self {
        Monomial(1 << (BITS * mu as u32))
    }

    pub fn exponent(self, mu: usize) -> u64 {
        (self.0 >> (BITS * mu as u32)) & MASK
    }

    pub fn total_degree(self) -> u64 {
        (0..10).map(|mu| self.exponent(mu)).sum()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial(self.0 + other.0)
    }

    /// ∂_μ x^α = α_μ x^{α − e_μ}.
    pub fn derivative(self, mu: usize) -> Option<(u64, Monomial)> {
        let e = self.exponent(mu);
        (e > 0).then(|| (e, Monomial(self.0 - (1 << (BITS * mu as u32)))))
    }
}

/// Polynomial section Σ x^α f_α with f_α ∈ ΛS, used when derivation
/// coefficients depend on coordinates (flat-type backgrounds).
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolySection {
    terms: BTreeMap<Monomial, SuperForm>,
}

impl std::fmt::Debug for PolySection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl PolySection {
    pub fn zero() -> Self {
        PolySection::default()
    }

    pub fn constant(f: SuperForm) -> Self {
        let mut p = PolySection::zero();
        p.add_part(Monomial::ONE, &f);
        p
    }

    pub fn scalar(c: Scalar) -> Self {
        Self::constant(SuperForm::scalar(c))
    }

    pub fn term(m: Monomial, f: SuperForm) -> Self {
        let mut p = PolySection::zero();
        p.add_part(m, &f);
        p
    }

    pub fn add_part(&mut self, m: Monomial, f: &SuperForm) {
        if f.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        slot.add_assign(f);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Monomial, &SuperForm)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn constant_part(&self) -> SuperForm {
        self.terms.get(&Monomial::ONE).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, f) in &other.terms {
            self.add_part(*m, f);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, f) in &other.terms {
            out.add_part(*m, &f.neg());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return PolySection::zero();
        }
        PolySection {
            terms: self.terms.iter().map(|(m, f)| (*m, f.scale(s))).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map_forms(SuperForm::neg)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = PolySection::zero();
        for (ma, fa) in &self.terms {
            for (mb, fb) in &other.terms {
                out.add_part(ma.mul(*mb), &fa.wedge(fb));
            }
        }
        out
    }

    pub fn map_forms(&self, f: impl Fn(&SuperForm) -> SuperForm) -> Self {
        let mut out = PolySection::zero();
        for (m, form) in &self.terms {
            out.add_part(*m, &f(form));
        }
        out
    }

    pub fn partial(&self, mu: usize) -> Self {
        let mut out = PolySection::zero();
        for (m, f) in &self.terms {
            if let Some((e, dm)) = m.derivative(mu) {
                out.add_part(dm, &f.scale(&Scalar::from(e as i64)));
            }
        }
        out
    }

    pub fn parity_part(&self, odd: bool) -> Self {
        self.map_forms(|f| f.parity_part(odd))
    }

    pub fn max_form_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(SuperForm::max_degree).max()
    }

    pub fn form_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.values().flat_map(|f| f.degrees()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn max_poly_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }
}
