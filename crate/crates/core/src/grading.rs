//! Degrees, filtrations and mass dimensions of super vector field terms.
//!
//! A homogeneous term q^p a ⊗ S has a coefficient a ∈ Λᵏ S and a slot S that
//! is either a vector field (ε = 0) or a spinor contraction (ε = 1).  All
//! filtrations are predicates on these three numbers.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exactla::Scalar;
use crate::superfields::{Derivation, Engine, Monomial, PolySection, Slot, SuperForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlotKind {
    Vector,
    Spinor,
}

impl From<Slot> for SlotKind {
    fn from(s: Slot) -> Self {
        match s {
            Slot::Vector(_) => SlotKind::Vector,
            Slot::Spinor(_) => SlotKind::Spinor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TermDegree {
    pub q_power: u32,
    pub form_degree: usize,
    pub slot: SlotKind,
}

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn from_halves(h: i64) -> Self {
        HalfInt(h)
    }

    pub fn integer(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl TermDegree {
    pub fn new(q_power: u32, form_degree: usize, slot: SlotKind) -> Self {
        TermDegree {
            q_power,
            form_degree,
            slot,
        }
    }

    pub fn epsilon(&self) -> i64 {
        match self.slot {
            SlotKind::Vector => 0,
            SlotKind::Spinor => 1,
        }
    }

    /// ℤ-degree k − ε of the undeformed term.
    pub fn z_degree(&self) -> i64 {
        self.form_degree as i64 - self.epsilon()
    }

    pub fn is_odd(&self) -> bool {
        self.z_degree().rem_euclid(2) == 1
    }

    /// p − k/2 + ε/2.
    pub fn mass_dimension(&self) -> HalfInt {
        HalfInt(2 * self.q_power as i64 - self.form_degree as i64 + self.epsilon())
    }

    /// ℤ-degree extended by deg q = −2.
    pub fn extended_z_degree(&self) -> i64 {
        self.z_degree() - 2 * self.q_power as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiltrationFamily {
    /// The natural filtration of ΛS by form degree (coefficient only).
    Natural,
    W,
    WHat,
    Z,
    /// Even filtration G_i = W⁰_{2i}.
    G,
    /// Odd filtration U_i = W¹_{2i+1}.
    U,
    /// Subfiltration {W_{2n+1}} indexed by n.
    WOdd,
    /// Subfiltration {W_{2n}} indexed by n.
    WEven,
}

impl FiltrationFamily {
    pub const ALL: [FiltrationFamily; 8] = [
        FiltrationFamily::Natural,
        FiltrationFamily::W,
        FiltrationFamily::WHat,
        FiltrationFamily::Z,
        FiltrationFamily::G,
        FiltrationFamily::U,
        FiltrationFamily::WOdd,
        FiltrationFamily::WEven,
    ];

    /// Compatibility constants for the bracket.
    pub fn claimed_compatibility(self) -> Option<i64> {
        match self {
            FiltrationFamily::W => Some(2),
            FiltrationFamily::WHat => Some(5),
            FiltrationFamily::Z => Some(0),
            FiltrationFamily::WOdd | FiltrationFamily::WEven => Some(1),
            _ => None,
        }
    }

    /// Lowest index the family starts from.
    pub fn first_index(self) -> i64 {
        match self {
            FiltrationFamily::WHat => -1,
            _ => 0,
        }
    }
}

fn w_index(t: &TermDegree) -> i64 {
    let d = t.form_degree as i64;
    let m = d / 2;
    match (t.slot, d % 2) {
        (SlotKind::Vector, 0) => 4 * m,
        (SlotKind::Vector, _) => 4 * m + 3,
        (SlotKind::Spinor, 0) => 4 * m + 1,
        (SlotKind::Spinor, _) => 4 * m + 2,
    }
}

fn w_hat_index(t: &TermDegree) -> i64 {
    let d = t.form_degree as i64;
    let m = d / 2;
    match (t.slot, d % 2) {
        (SlotKind::Vector, 0) => 4 * m,
        (SlotKind::Vector, _) => 4 * m + 1,
        (SlotKind::Spinor, 0) => 4 * m - 1,
        (SlotKind::Spinor, _) => 4 * m + 2,
    }
}

/// Smallest i with the term in the i-th space, or `None` if the family never
/// contains the term (G on odd terms, U on even ones).
pub fn filtration_index(t: &TermDegree, f: FiltrationFamily) -> Option<i64> {
    let d = t.form_degree as i64;
    match f {
        FiltrationFamily::Natural => Some(d),
        FiltrationFamily::W => Some(w_index(t)),
        FiltrationFamily::WHat => Some(w_hat_index(t)),
        FiltrationFamily::Z => Some((d - t.epsilon()).max(0)),
        FiltrationFamily::G => (!t.is_odd()).then_some(d),
        FiltrationFamily::U => t.is_odd().then_some(d),
        FiltrationFamily::WOdd => Some(((w_index(t) - 1).max(0) + 1) / 2),
        FiltrationFamily::WEven => Some((w_index(t) + 1) / 2),
    }
}

pub fn contains(t: &TermDegree, f: FiltrationFamily, i: i64) -> bool {
    filtration_index(t, f).is_some_and(|m| m <= i)
}

/// Every homogeneous term with form degree ≤ `max_degree`.
pub fn all_terms(max_degree: usize) -> Vec<TermDegree> {
    (0..=max_degree)
        .flat_map(|k| [SlotKind::Vector, SlotKind::Spinor].map(|s| TermDegree::new(0, k, s)))
        .collect()
}

/// Mass dimensions realised by q^p Z_p^{parity}, enumerated over form degrees
/// up to `dim_s`.
pub fn mass_value_set(p: u32, odd: bool, dim_s: usize) -> BTreeSet<HalfInt> {
    let mut out = BTreeSet::new();
    for t in all_terms(dim_s) {
        if t.is_odd() == odd && contains(&t, FiltrationFamily::Z, p as i64) {
            out.insert(TermDegree { q_power: p, ..t }.mass_dimension());
        }
    }
    out
}

/// The four rows of the mass dimension table for a given ℓ, as
/// ((q-power, odd), expected set).
pub fn mass_table_rows(l: i64) -> Vec<((u32, bool), BTreeSet<HalfInt>)> {
    let range =
        |lo: i64, hi: i64| -> BTreeSet<HalfInt> { (lo..=hi).step_by(2).map(HalfInt).collect() };
    vec![
        ((2 * l as u32, false), range(2 * l, 4 * l)),
        ((2 * l as u32, true), range(2 * l + 1, 4 * l + 1)),
        ((2 * l as u32 + 1, false), range(2 * l + 2, 4 * l + 2)),
        ((2 * l as u32 + 1, true), range(2 * l + 1, 4 * l + 3)),
    ]
}

/// Membership identities between the families, checked exhaustively over
/// all terms of form degree ≤ `max_degree` and k ≤ `max_k`.  Returns the
/// failing identities.
pub fn filtration_identity_failures(max_degree: usize, max_k: i64) -> Vec<String> {
    use FiltrationFamily::*;
    let mut failures = Vec::new();
    let gu = |t: &TermDegree, g: i64, u: i64| {
        if t.is_odd() {
            contains(t, U, u)
        } else {
            contains(t, G, g)
        }
    };
    for t in all_terms(max_degree) {
        for k in 0..=max_k {
            let mut check = |name: &str, lhs: bool, rhs: bool| {
                if lhs != rhs {
                    failures.push(format!("{name} at k={k} for {t:?}"));
                }
            };
            check("G_k+U_k=W_2k+1", gu(&t, k, k), contains(&t, W, 2 * k + 1));
            check(
                "W_2k+1=What_2k",
                contains(&t, W, 2 * k + 1),
                contains(&t, WHat, 2 * k),
            );
            check("G_k+U_k-1=W_2k", gu(&t, k, k - 1), contains(&t, W, 2 * k));
            check(
                "G_k+U_k+1=What_2k+1",
                gu(&t, k, k + 1),
                contains(&t, WHat, 2 * k + 1),
            );
            for f in [W, WHat, Z] {
                check(
                    "inclusion",
                    contains(&t, f, k) && !contains(&t, f, k + 1),
                    false,
                );
            }
            // ℤ₂-compatibility
            for f in [W, WHat, Z] {
                if t.is_odd() {
                    // below the first index the family is empty, not stable
                    if 2 * k > f.first_index() {
                        check(
                            "odd part stable",
                            contains(&t, f, 2 * k - 1),
                            contains(&t, f, 2 * k),
                        );
                    }
                } else {
                    check(
                        "even part stable",
                        contains(&t, f, 2 * k),
                        contains(&t, f, 2 * k + 1),
                    );
                }
            }
        }
    }
    // finiteness: everything sits in W_{2s+1} = Ŵ_{2s}
    for s in 1..=max_degree {
        for t in all_terms(s) {
            if !contains(&t, W, 2 * s as i64 + 1) || !contains(&t, WHat, 2 * s as i64) {
                failures.push(format!("saturation at dim S = {s} for {t:?}"));
            }
        }
    }
    failures
}

/// Homogeneous degrees of every nonzero part of a derivation.
pub fn term_degrees(d: &Derivation) -> Vec<TermDegree> {
    let mut out = BTreeSet::new();
    for (q, slot, c) in d.terms() {
        for k in c.form_degrees() {
            out.insert(TermDegree::new(q, k, slot.into()));
        }
    }
    out.into_iter().collect()
}

/// A series is a member of def_q^X iff each qᵏ term lies in X_k.
pub fn deformation_member(d: &Derivation, f: FiltrationFamily) -> bool {
    term_degrees(d)
        .iter()
        .all(|t| contains(&TermDegree { q_power: 0, ..*t }, f, t.q_power as i64))
}

/// Same for elements of def_q 𝔄 given as q-graded sections.
pub fn natural_member(series: &std::collections::BTreeMap<u32, PolySection>) -> bool {
    series
        .iter()
        .all(|(q, s)| s.max_form_degree().is_none_or(|k| k as u32 <= *q))
}

/// All mass dimensions occurring in a derivation.
pub fn mass_dimensions(d: &Derivation) -> BTreeSet<HalfInt> {
    term_degrees(d)
        .iter()
        .map(TermDegree::mass_dimension)
        .collect()
}

/// Largest filtration index among the terms of a q⁰ derivation.
pub fn derivation_index(d: &Derivation, f: FiltrationFamily) -> Option<i64> {
    term_degrees(d)
        .iter()
        .filter_map(|t| filtration_index(t, f))
        .max()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub family: FiltrationFamily,
    pub claimed: i64,
    pub samples: usize,
    /// Largest index excess idx([a,b]) − idx(a) − idx(b) seen.
    pub max_excess: Option<i64>,
    pub upper_bound_holds: bool,
    /// A pair realising the claimed excess, described by its degrees.
    pub witness: Option<(TermDegree, TermDegree, TermDegree)>,
}

impl CompatibilityReport {
    pub fn verdict(&self) -> &'static str {
        match (self.upper_bound_holds, self.witness.is_some()) {
            (true, true) => "verified with witness",
            (true, false) => "upper bound verified, no witness",
            (false, _) => "violated",
        }
    }
}

/// A random q⁰ term with one form degree and one slot kind.
pub fn random_homogeneous<R: Rng>(
    rng: &mut R,
    n: usize,
    s: usize,
    t: TermDegree,
    with_x: bool,
) -> Derivation {
    let mut d = Derivation::zero();
    let words: Vec<u64> = crate::clifford::multi_indices(s, t.form_degree)
        .into_iter()
        .map(|idx| idx.iter().fold(0u64, |w, &i| w | (1 << i)))
        .collect();
    if words.is_empty() {
        return d;
    }
    let slots = match t.slot {
        SlotKind::Vector => n,
        SlotKind::Spinor => s,
    };
    let slot_index = rng.gen_range(0..slots);
    let slot = match t.slot {
        SlotKind::Vector => Slot::Vector(slot_index),
        SlotKind::Spinor => Slot::Spinor(slot_index),
    };
    let mut coeff = PolySection::zero();
    for w in &words {
        let c = Scalar::from(rng.gen_range(-3i64..=3));
        coeff.add_part(Monomial::ONE, &SuperForm::monomial(*w, c));
        if with_x {
            let c = Scalar::from(rng.gen_range(-2i64..=2));
            coeff.add_part(
                Monomial::var(rng.gen_range(0..n)),
                &SuperForm::monomial(*w, c),
            );
        }
    }
    d.add_term(0, slot, coeff);
    d
}

/// Sample homogeneous pairs and measure the index excess of their bracket.
pub fn check_compatibility<R: Rng>(
    f: FiltrationFamily,
    engine: &Engine,
    rng: &mut R,
    samples: usize,
) -> CompatibilityReport {
    let claimed = f.claimed_compatibility().unwrap_or(0);
    let n = engine.bg.dim();
    let s = engine.bg.spinor_dim();
    let with_x = engine.bg.has_coordinates();
    let degrees = all_terms(s);
    let mut report = CompatibilityReport {
        family: f,
        claimed,
        samples: 0,
        max_excess: None,
        upper_bound_holds: true,
        witness: None,
    };
    for i in 0..samples {
        // sweep all degree pairs first, then pick at random
        let pair_count = degrees.len() * degrees.len();
        let (ta, tb) = if i < pair_count {
            (degrees[i / degrees.len()], degrees[i % degrees.len()])
        } else {
            (
                degrees[rng.gen_range(0..degrees.len())],
                degrees[rng.gen_range(0..degrees.len())],
            )
        };
        let (Some(ia), Some(ib)) = (filtration_index(&ta, f), filtration_index(&tb, f)) else {
            continue;
        };
        let a = random_homogeneous(rng, n, s, ta, with_x);
        let b = random_homogeneous(rng, n, s, tb, with_x);
        let Ok(br) = engine.bracket(&a, &b) else {
            continue;
        };
        report.samples += 1;
        for t in term_degrees(&br) {
            let Some(ir) = filtration_index(&t, f) else {
                continue;
            };
            let excess = ir - ia - ib;
            report.max_excess = Some(report.max_excess.map_or(excess, |m| m.max(excess)));
            if excess > claimed {
                report.upper_bound_holds = false;
            }
            if excess == claimed && report.witness.is_none() {
                report.witness = Some((ta, tb, t));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_mass_dimensions() {
        assert_eq!(
            TermDegree::new(0, 0, SlotKind::Spinor).mass_dimension(),
            HalfInt(1)
        );
        assert_eq!(
            TermDegree::new(0, 0, SlotKind::Vector).mass_dimension(),
            HalfInt(0)
        );
        assert_eq!(
            TermDegree::new(1, 1, SlotKind::Vector).mass_dimension(),
            HalfInt(1)
        );
    }

    #[test]
    fn explicit_indices() {
        use FiltrationFamily::*;
        let v = |k| TermDegree::new(0, k, SlotKind::Vector);
        let sp = |k| TermDegree::new(0, k, SlotKind::Spinor);
        assert_eq!(filtration_index(&v(0), Z), Some(0));
        assert_eq!(filtration_index(&sp(1), Z), Some(0));
        assert_eq!(filtration_index(&v(2), W), Some(4));
        assert_eq!(filtration_index(&v(1), U), Some(1));
        assert_eq!(filtration_index(&v(1), G), None);
        assert_eq!(filtration_index(&sp(0), WHat), Some(-1));
    }

    #[test]
    fn q2_even_value_set() {
        let set = mass_value_set(2, false, 6);
        assert_eq!(set, [HalfInt(2), HalfInt(4)].into_iter().collect());
    }

    #[test]
    fn deformation_membership() {
        let mut d = Derivation::zero();
        d.add_term(
            1,
            Slot::Vector(0),
            PolySection::constant(SuperForm::monomial(0b111, Scalar::from(1))),
        );
        assert!(!deformation_member(&d, FiltrationFamily::Z));
        assert!(deformation_member(
            &Derivation::elementary(0, Slot::Vector(0)),
            FiltrationFamily::Z
        ));
    }
}
