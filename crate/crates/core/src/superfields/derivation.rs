use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::form::SuperForm;
use super::poly::{Monomial, PolySection};
use crate::background::Background;
use crate::exactla::{ExactMatrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("background has no coordinates; coefficient depends on x")]
    NoCoordinates,
    #[error(
        "probe set insufficient: need polynomial and form caps of at least 1, got ({poly}, {form})"
    )]
    ProbeSetInsufficient { poly: usize, form: usize },
    #[error(
        "operator reconstruction disagrees with the commutator on probe x^{monomial:?} e_{word:#b}"
    )]
    ReconstructionMismatch { monomial: Monomial, word: u64 },
    #[error("operator backend needs a flat-type background")]
    OperatorBackendUnsupported,
}

/// Elementary derivations: D_μ (even) and ι_{e_b} (odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    Vector(usize),
    Spinor(usize),
}

impl Slot {
    pub fn is_odd(self) -> bool {
        matches!(self, Slot::Spinor(_))
    }
}

/// q-graded sum Σ q^p a ⊗ S of coefficient sections times elementary derivations.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    terms: BTreeMap<(u32, Slot), PolySection>,
    pub q_max: Option<u32>,
    /// Set when a computation dropped terms beyond `q_max`.
    pub truncated: bool,
}

impl std::fmt::Debug for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl Derivation {
    pub fn zero() -> Self {
        Derivation::default()
    }

    pub fn with_q_max(mut self, q_max: Option<u32>) -> Self {
        self.q_max = q_max;
        self.enforce_cap();
        self
    }

    pub fn elementary(q: u32, slot: Slot) -> Self {
        Self::term(q, slot, PolySection::scalar(Scalar::one()))
    }

    pub fn term(q: u32, slot: Slot, coeff: PolySection) -> Self {
        let mut d = Derivation::zero();
        d.add_term(q, slot, coeff);
        d
    }

    pub fn add_term(&mut self, q: u32, slot: Slot, coeff: PolySection) {
        if coeff.is_zero() {
            return;
        }
        if self.q_max.is_some_and(|m| q > m) {
            self.truncated = true;
            return;
        }
        let e = self.terms.entry((q, slot)).or_default();
        e.add_assign(&coeff);
        if e.is_zero() {
            self.terms.remove(&(q, slot));
        }
    }

    fn enforce_cap(&mut self) {
        if let Some(m) = self.q_max {
            let before = self.terms.len();
            self.terms.retain(|(q, _), _| *q <= m);
            self.truncated |= before != self.terms.len();
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, Slot, &PolySection)> {
        self.terms.iter().map(|((q, s), c)| (*q, *s, c))
    }

    pub fn coefficient(&self, q: u32, slot: Slot) -> PolySection {
        self.terms.get(&(q, slot)).cloned().unwrap_or_default()
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

    pub fn q_powers(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|(q, _)| *q).collect();
        v.dedup();
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.truncated |= other.truncated;
        for ((q, s), c) in &other.terms {
            self.add_term(*q, *s, c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Derivation {
            q_max: self.q_max,
            truncated: self.truncated,
            ..Derivation::zero()
        };
        for ((q, slot), c) in &self.terms {
            out.add_term(*q, *slot, c.scale(s));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    /// Multiply every term by q^k.
    pub fn shift_q(&self, k: u32) -> Self {
        let mut out = Derivation {
            q_max: self.q_max,
            truncated: self.truncated,
            ..Derivation::zero()
        };
        for ((q, slot), c) in &self.terms {
            out.add_term(q + k, *slot, c.clone());
        }
        out
    }

    pub fn q_component(&self, p: u32) -> Self {
        let mut out = Derivation::zero();
        for ((q, slot), c) in &self.terms {
            if *q == p {
                out.add_term(0, *slot, c.clone());
            }
        }
        out
    }

    /// Left multiplication of all coefficients by a section.
    pub fn left_mul(&self, a: &PolySection) -> Self {
        let mut out = Derivation {
            q_max: self.q_max,
            truncated: self.truncated,
            ..Derivation::zero()
        };
        for ((q, slot), c) in &self.terms {
            out.add_term(*q, *slot, a.wedge(c));
        }
        out
    }

    /// Even or odd part under the total parity (form degree + slot parity).
    pub fn parity_part(&self, odd: bool) -> Self {
        let mut out = Derivation {
            q_max: self.q_max,
            truncated: self.truncated,
            ..Derivation::zero()
        };
        for ((q, slot), c) in &self.terms {
            out.add_term(*q, *slot, c.parity_part(odd != slot.is_odd()));
        }
        out
    }

    /// Σ_μ v^μ D_μ at q-power `q`.
    pub fn vector_field(q: u32, components: &[Scalar]) -> Self {
        let mut d = Derivation::zero();
        for (mu, c) in components.iter().enumerate() {
            d.add_term(q, Slot::Vector(mu), PolySection::scalar(c.clone()));
        }
        d
    }

    /// ι_θ = Σ_b θ_b ι_{e_b}.
    pub fn iota(q: u32, theta: &[Scalar]) -> Self {
        let mut d = Derivation::zero();
        for (b, c) in theta.iter().enumerate() {
            d.add_term(q, Slot::Spinor(b), PolySection::scalar(c.clone()));
        }
        d
    }

    /// The endomorphism Φ extended to ΛS, written Σ_b (column b of Φ C⁻¹) ⊗ ι_{e_b}.
    pub fn from_endomorphism(q: u32, phi: &ExactMatrix, c_inv: &ExactMatrix) -> Self {
        Self::from_endomorphism_with(q, phi, c_inv, &PolySection::scalar(Scalar::one()))
    }

    /// Same with an extra left coefficient: a ∧ Φ.
    pub fn from_endomorphism_with(
        q: u32,
        phi: &ExactMatrix,
        c_inv: &ExactMatrix,
        a: &PolySection,
    ) -> Self {
        let m = phi * c_inv;
        let mut d = Derivation::zero();
        for b in 0..m.cols() {
            let col = m.col(b);
            if col.iter().all(Zero::is_zero) {
                continue;
            }
            d.add_term(
                q,
                Slot::Spinor(b),
                a.wedge(&PolySection::constant(SuperForm::from_spinor(&col))),
            );
        }
        d
    }
}

/// Evaluation context tying derivations to a background.
pub struct Engine<'a> {
    pub bg: &'a Background,
    c_inv: ExactMatrix,
    dual: Vec<ExactMatrix>,
    c_rows: Vec<Vec<Scalar>>,
    pub q_max: Option<u32>,
}

impl<'a> Engine<'a> {
    pub fn new(bg: &'a Background) -> Self {
        let c = &bg.rep.charge_conj;
        Engine {
            bg,
            c_inv: bg.rep.c_inv(),
            dual: (0..bg.dim()).map(|mu| bg.dual_connection(mu)).collect(),
            c_rows: (0..c.rows()).map(|r| c.row(r).to_vec()).collect(),
            q_max: None,
        }
    }

    pub fn with_q_max(mut self, q_max: Option<u32>) -> Self {
        self.q_max = q_max;
        self
    }

    pub fn c_inv(&self) -> &ExactMatrix {
        &self.c_inv
    }

    pub fn endomorphism(&self, q: u32, phi: &ExactMatrix) -> Derivation {
        Derivation::from_endomorphism(q, phi, &self.c_inv)
    }

    /// Action of an elementary derivation on a section.
    pub fn act_slot(&self, slot: Slot, f: &PolySection) -> Result<PolySection, DerivationError> {
        match slot {
            Slot::Vector(mu) => {
                let m = self.bg.spin_connection(mu);
                let mut out = f.map_forms(|form| form.endo_derivation(m));
                if !f.is_constant() {
                    if !self.bg.has_coordinates() {
                        return Err(DerivationError::NoCoordinates);
                    }
                    out.add_assign(&f.partial(mu));
                }
                Ok(out)
            }
            Slot::Spinor(b) => Ok(f.map_forms(|form| form.interior(&self.c_rows[b]))),
        }
    }

    /// Bracket of elementary derivations.
    pub fn slot_bracket(&self, s: Slot, t: Slot) -> Derivation {
        let n = self.bg.dim();
        match (s, t) {
            (Slot::Vector(mu), Slot::Vector(nu)) => {
                let mut d = self.endomorphism(0, self.bg.curvature(mu, nu));
                for k in 0..n {
                    let c = self.bg.structure(mu, nu, k);
                    if !c.is_zero() {
                        d.add_term(0, Slot::Vector(k), PolySection::scalar(c.clone()));
                    }
                }
                d
            }
            (Slot::Vector(mu), Slot::Spinor(b)) => Derivation::iota(0, &self.dual[mu].col(b)),
            (Slot::Spinor(b), Slot::Vector(mu)) => Derivation::iota(0, &self.dual[mu].col(b)).neg(),
            (Slot::Spinor(_), Slot::Spinor(_)) => Derivation::zero(),
        }
    }

    /// Graded commutator from the rule
    /// [aS, bT] = a S(b) T − ε b T(a) S + (−1)^{|S||b|} a b [S, T], ε = (−1)^{|aS||bT|}.
    pub fn bracket(&self, x: &Derivation, y: &Derivation) -> Result<Derivation, DerivationError> {
        let mut out = Derivation {
            q_max: self.q_max,
            truncated: x.truncated || y.truncated,
            ..Derivation::zero()
        };
        let split = |d: &Derivation| -> Vec<(u32, Slot, bool, PolySection)> {
            let mut v = Vec::new();
            for (q, slot, c) in d.terms() {
                for odd in [false, true] {
                    let part = c.parity_part(odd);
                    if !part.is_zero() {
                        v.push((q, slot, odd, part));
                    }
                }
            }
            v
        };
        let xs = split(x);
        let ys = split(y);
        for (qa, s, a_odd, a) in &xs {
            for (qb, t, b_odd, b) in &ys {
                let q = qa + qb;
                if self.q_max.is_some_and(|m| q > m) {
                    out.truncated = true;
                    continue;
                }
                let x_odd = a_odd ^ s.is_odd();
                let y_odd = b_odd ^ t.is_odd();
                let sb = self.act_slot(*s, b)?;
                out.add_term(q, *t, a.wedge(&sb));
                let ta = self.act_slot(*t, a)?;
                let term = b.wedge(&ta);
                out.add_term(q, *s, if x_odd && y_odd { term } else { term.neg() });
                let st = self.slot_bracket(*s, *t);
                if !st.is_zero() {
                    let ab = a.wedge(b);
                    let ab = if s.is_odd() && *b_odd { ab.neg() } else { ab };
                    out.add_assign(&st.shift_q(q).left_mul(&ab));
                }
            }
        }
        Ok(out)
    }

    /// Action of a derivation on a section, graded by q-power.
    pub fn apply(
        &self,
        x: &Derivation,
        f: &PolySection,
    ) -> Result<BTreeMap<u32, PolySection>, DerivationError> {
        let mut out: BTreeMap<u32, PolySection> = BTreeMap::new();
        for (q, slot, c) in x.terms() {
            let v = c.wedge(&self.act_slot(slot, f)?);
            if !v.is_zero() {
                out.entry(q).or_default().add_assign(&v);
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    fn apply_series(
        &self,
        x: &Derivation,
        f: &BTreeMap<u32, PolySection>,
    ) -> Result<BTreeMap<u32, PolySection>, DerivationError> {
        let mut out: BTreeMap<u32, PolySection> = BTreeMap::new();
        for (p, g) in f {
            for (q, v) in self.apply(x, g)? {
                out.entry(p + q).or_default().add_assign(&v);
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// [X, Y] f = X(Y f) − (−1)^{|X||Y|} Y(X f), on parity-homogeneous parts.
    fn commutator_action(
        &self,
        x: &Derivation,
        y: &Derivation,
        f: &PolySection,
    ) -> Result<BTreeMap<u32, PolySection>, DerivationError> {
        let mut out: BTreeMap<u32, PolySection> = BTreeMap::new();
        let single: BTreeMap<u32, PolySection> = [(0, f.clone())].into_iter().collect();
        for x_odd in [false, true] {
            let xp = x.parity_part(x_odd);
            if xp.is_zero() {
                continue;
            }
            for y_odd in [false, true] {
                let yp = y.parity_part(y_odd);
                if yp.is_zero() {
                    continue;
                }
                let xy = self.apply_series(&xp, &self.apply_series(&yp, &single)?)?;
                let yx = self.apply_series(&yp, &self.apply_series(&xp, &single)?)?;
                let both_odd = x_odd && y_odd;
                for (p, v) in xy {
                    out.entry(p).or_default().add_assign(&v);
                }
                for (p, v) in yx {
                    let v = if both_odd { v } else { v.neg() };
                    out.entry(p).or_default().add_assign(&v);
                }
            }
        }
        if let Some(m) = self.q_max {
            out.retain(|p, _| *p <= m);
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Second route: evaluate the commutator as an operator on probes and
    /// rebuild the derivation from its action on x^ν and e_c, then confirm the
    /// rebuilt derivation on every probe x^α e_I with |α| ≤ poly_cap, |I| ≤ form_cap.
    pub fn bracket_operator(
        &self,
        x: &Derivation,
        y: &Derivation,
        poly_cap: usize,
        form_cap: usize,
    ) -> Result<Derivation, DerivationError> {
        if !self.bg.has_coordinates() {
            return Err(DerivationError::OperatorBackendUnsupported);
        }
        if poly_cap < 1 || form_cap < 1 {
            return Err(DerivationError::ProbeSetInsufficient {
                poly: poly_cap,
                form: form_cap,
            });
        }
        let n = self.bg.dim();
        let s = self.bg.spinor_dim();
        let mut out = Derivation {
            q_max: self.q_max,
            ..Derivation::zero()
        };
        let mut vec_coeffs: BTreeMap<u32, Vec<PolySection>> = BTreeMap::new();
        for nu in 0..n {
            let probe = PolySection::term(Monomial::var(nu), SuperForm::one());
            for (q, v) in self.commutator_action(x, y, &probe)? {
                vec_coeffs
                    .entry(q)
                    .or_insert_with(|| vec![PolySection::zero(); n])[nu] = v;
            }
        }
        let mut spin_values: BTreeMap<u32, Vec<PolySection>> = BTreeMap::new();
        for c in 0..s {
            let probe = PolySection::constant(SuperForm::basis(c));
            for (q, v) in self.commutator_action(x, y, &probe)? {
                spin_values
                    .entry(q)
                    .or_insert_with(|| vec![PolySection::zero(); s])[c] = v;
            }
        }
        let qs: std::collections::BTreeSet<u32> = vec_coeffs
            .keys()
            .chain(spin_values.keys())
            .copied()
            .collect();
        for q in qs {
            let a = vec_coeffs
                .get(&q)
                .cloned()
                .unwrap_or_else(|| vec![PolySection::zero(); n]);
            for (nu, coeff) in a.iter().enumerate() {
                out.add_term(q, Slot::Vector(nu), coeff.clone());
            }
            let mut ys = spin_values
                .get(&q)
                .cloned()
                .unwrap_or_else(|| vec![PolySection::zero(); s]);
            for (c, yc) in ys.iter_mut().enumerate() {
                for (mu, am) in a.iter().enumerate() {
                    if am.is_zero() {
                        continue;
                    }
                    let d_ec = PolySection::constant(
                        SuperForm::basis(c).endo_derivation(self.bg.spin_connection(mu)),
                    );
                    *yc = yc.sub(&am.wedge(&d_ec));
                }
            }
            for b in 0..s {
                let mut coeff = PolySection::zero();
                for (c, yc) in ys.iter().enumerate() {
                    let w = self.c_inv.get(c, b);
                    if !w.is_zero() {
                        coeff.add_assign(&yc.scale(w));
                    }
                }
                out.add_term(q, Slot::Spinor(b), coeff);
            }
        }
        for monomial in monomials_up_to(n, poly_cap) {
            for word in words_up_to(s, form_cap) {
                let probe = PolySection::term(monomial, SuperForm::monomial(word, Scalar::one()));
                let expected = self.commutator_action(x, y, &probe)?;
                let got = self.apply(&out, &probe)?;
                if expected != got {
                    return Err(DerivationError::ReconstructionMismatch { monomial, word });
                }
            }
        }
        Ok(out)
    }
}

pub fn monomials_up_to(n: usize, cap: usize) -> Vec<Monomial> {
    let mut out = vec![Monomial::ONE];
    let mut layer = vec![Monomial::ONE];
    for _ in 0..cap {
        let mut next = Vec::new();
        for m in &layer {
            for mu in 0..n {
                let x = m.mul(Monomial::var(mu));
                if !next.contains(&x) {
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().copied());
        layer = next;
    }
    out.sort();
    out.dedup();
    out
}

pub fn words_up_to(s: usize, cap: usize) -> Vec<u64> {
    (0..=cap.min(s))
        .flat_map(|k| crate::clifford::multi_indices(s, k))
        .map(|idx| idx.iter().fold(0u64, |w, &i| w | (1 << i)))
        .collect()
}
