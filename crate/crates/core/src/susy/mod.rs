//! The maps 𝔢 and 𝔬, the order-q² closed form of [𝔬φ, 𝔬ψ], and the
//! structure checks on a background.

pub mod g2h3;
pub mod tagged;
pub mod words;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::background::{Background, KillingField, KillingSpace, ModelKind};
use crate::exactla::{coordinates_in_span, rank, ExactMatrix, Scalar};
use crate::grading::{mass_dimensions, HalfInt};
use crate::superfields::{
    Derivation, DerivationError, Engine, Monomial, PolySection, Slot, SuperForm,
};

pub use tagged::{classify_normal_form, closed_form, ClosedForm, NormalFormReport};
pub use words::{expand_correction, generate_uk, CorrectionBasis, CorrectionWord, Leaf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SusyError {
    #[error("vector field is not in the certified Killing space")]
    NotKilling,
    #[error("word needs {expected} spinor arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("correction words start at k = 2, got {0}")]
    OrderTooSmall(usize),
    #[error("unknown closed form {0}")]
    UnknownClosedForm(String),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

/// ι(φ) = Σ_μ γ^μφ ⊗ D_μ, the odd vector field without its q prefactor.
pub fn iota_map(bg: &Background, phi: &[Scalar]) -> Derivation {
    let mut d = Derivation::zero();
    for mu in 0..bg.dim() {
        let v = bg.rep.gamma_upper(mu).apply(phi);
        d.add_term(
            0,
            Slot::Vector(mu),
            PolySection::constant(SuperForm::from_spinor(&v)),
        );
    }
    d
}

/// 𝔬(φ) = ȷ(φ) + q ι(φ), where ȷ(φ) contracts with C(φ, ·).
pub fn o_map(bg: &Background, phi: &[Scalar]) -> Derivation {
    Derivation::iota(0, phi).add(&iota_map(bg, phi).shift_q(1))
}

/// D_X for the frame vector X = {η, ξ}.
pub fn d_pair(bg: &Background, eta: &[Scalar], xi: &[Scalar]) -> Derivation {
    Derivation::vector_field(0, &bg.rep.spinor_bracket(eta, xi))
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n)
        .map(|k| {
            if k == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .collect()
}

fn killing_coordinates(x: &KillingField) -> Vec<Scalar> {
    let mut v = x.translation.clone();
    if let Some(a) = &x.rotation {
        v.extend(a.flatten());
    } else {
        let n = x.translation.len();
        v.extend(std::iter::repeat_n(Scalar::zero(), n * n));
    }
    v
}

/// Membership of `x` in the span of a certified Killing basis.
pub fn is_certified(k0: &KillingSpace, x: &KillingField) -> bool {
    let target = killing_coordinates(x);
    if target.iter().all(Zero::is_zero) {
        return true;
    }
    let basis: Vec<Vec<Scalar>> = k0.basis.iter().map(killing_coordinates).collect();
    coordinates_in_span(&basis, &target).is_some()
}

/// Component functions X^ρ = t^ρ + A^ρ_ν x^ν as sections.
fn component_sections(x: &KillingField) -> Vec<PolySection> {
    let n = x.translation.len();
    (0..n)
        .map(|rho| {
            let mut p = PolySection::scalar(x.translation[rho].clone());
            if let Some(a) = &x.rotation {
                for nu in 0..n {
                    let c = a.get(rho, nu);
                    if !c.is_zero() {
                        p.add_part(Monomial::var(nu), &SuperForm::scalar(c.clone()));
                    }
                }
            }
            p
        })
        .collect()
}

/// 𝔢(X) = ȷ(X) − Ψ_X with Ψ_X = spin(∇X) + 𝒜_X, after checking X is certified.
pub fn e_map(
    bg: &Background,
    k0: &KillingSpace,
    x: &KillingField,
) -> Result<Derivation, SusyError> {
    if !is_certified(k0, x) {
        return Err(SusyError::NotKilling);
    }
    Ok(e_map_unchecked(bg, x))
}

pub fn e_map_unchecked(bg: &Background, x: &KillingField) -> Derivation {
    let c_inv = bg.rep.c_inv();
    let mut d = Derivation::zero();
    match bg.kind {
        ModelKind::FlatType => {
            let comps = component_sections(x);
            for (rho, c) in comps.iter().enumerate() {
                d.add_term(0, Slot::Vector(rho), c.clone());
                let diff = bg.difference(rho);
                if !diff.is_zero() {
                    d.add_assign(&Derivation::from_endomorphism_with(0, &diff, &c_inv, c).neg());
                }
            }
            if let Some(a) = &x.rotation {
                d.add_assign(&Derivation::from_endomorphism(0, &bg.rep.spin_lift(a), &c_inv).neg());
            }
        }
        ModelKind::Homogeneous | ModelKind::Pointwise => {
            d = Derivation::vector_field(0, &x.translation);
            d.add_assign(
                &Derivation::from_endomorphism(0, &bg.kosmann_term(&x.translation), &c_inv).neg(),
            );
        }
    }
    d
}

/// Lie bracket of two Killing fields of the model.
pub fn killing_bracket(bg: &Background, x: &KillingField, y: &KillingField) -> KillingField {
    let n = bg.dim();
    match bg.kind {
        ModelKind::FlatType => {
            let zero = ExactMatrix::zeros(n, n);
            let a = x.rotation.as_ref().unwrap_or(&zero);
            let b = y.rotation.as_ref().unwrap_or(&zero);
            let bt = b.apply(&x.translation);
            let as_ = a.apply(&y.translation);
            let translation = bt.iter().zip(&as_).map(|(p, q)| p - q).collect();
            let rot = b * a - a * b;
            KillingField {
                translation,
                rotation: if rot.is_zero() { None } else { Some(rot) },
            }
        }
        ModelKind::Homogeneous | ModelKind::Pointwise => {
            let mut t = vec![Scalar::zero(); n];
            for a in 0..n {
                for b in 0..n {
                    let ts = &x.translation[a] * &y.translation[b];
                    if ts.is_zero() {
                        continue;
                    }
                    for (k, tk) in t.iter_mut().enumerate() {
                        *tk += &ts * bg.structure(a, b, k);
                    }
                }
            }
            KillingField::frame(t)
        }
    }
}

/// ℒ_X η = −(M_X − Ψ_X)^C η on constant spinors.
pub fn spinor_lie_derivative(bg: &Background, x: &KillingField, eta: &[Scalar]) -> Vec<Scalar> {
    let s = bg.spinor_dim();
    let op = match bg.kind {
        // the x-dependent parts of M_X and Ψ_X cancel
        ModelKind::FlatType => match &x.rotation {
            Some(a) => -&bg.rep.spin_lift(a),
            None => ExactMatrix::zeros(s, s),
        },
        ModelKind::Homogeneous | ModelKind::Pointwise => {
            let mut m = ExactMatrix::zeros(s, s);
            for (a, ta) in x.translation.iter().enumerate() {
                if !ta.is_zero() {
                    m = m + bg.spin_connection(a).scale(ta);
                }
            }
            m - bg.kosmann_term(&x.translation)
        }
    };
    (-&bg.rep.c_adjoint(&op)).apply(eta)
}

/// q D_{{φ,ψ}} + q² 𝔅(R; φ, ψ) + q² 𝔇(𝒯; φ, ψ) built from curvature and torsion.
pub fn oo_bracket_closed(bg: &Background, phi: &[Scalar], psi: &[Scalar]) -> Derivation {
    let n = bg.dim();
    let c_inv = bg.rep.c_inv();
    let mut d = d_pair(bg, phi, psi).shift_q(1);
    let up_phi: Vec<SuperForm> = (0..n)
        .map(|mu| SuperForm::from_spinor(&bg.rep.gamma_upper(mu).apply(phi)))
        .collect();
    let up_psi: Vec<SuperForm> = (0..n)
        .map(|mu| SuperForm::from_spinor(&bg.rep.gamma_upper(mu).apply(psi)))
        .collect();
    let half = Scalar::ratio(1, 2);
    for mu in 0..n {
        for nu in 0..n {
            let r = bg.curvature(mu, nu);
            if !r.is_zero() {
                let pre = PolySection::constant(up_phi[mu].wedge(&up_psi[nu]));
                d.add_assign(&Derivation::from_endomorphism_with(2, r, &c_inv, &pre));
            }
            let t = bg.torsion(mu, nu);
            if t.is_zero() {
                continue;
            }
            let a = up_phi[mu].wedge(&SuperForm::from_spinor(&t.apply(psi)));
            let b = up_psi[mu].wedge(&SuperForm::from_spinor(&t.apply(phi)));
            let coeff = a.add(&b).scale(&(&half * &bg.rep.metric_sign(nu)));
            d.add_term(2, Slot::Vector(nu), PolySection::constant(coeff));
        }
    }
    d
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OoComparison {
    pub admissible: bool,
    pub agrees: bool,
    pub closed: Derivation,
    pub engine: Derivation,
}

/// Compare the closed form with the engine bracket truncated at q².
pub fn compare_oo_bracket(
    bg: &Background,
    phi: &[Scalar],
    psi: &[Scalar],
) -> Result<OoComparison, SusyError> {
    let engine = Engine::new(bg).with_q_max(Some(2));
    let br = engine.bracket(&o_map(bg, phi), &o_map(bg, psi))?;
    let br = strip_meta(&br);
    let closed = oo_bracket_closed(bg, phi, psi);
    Ok(OoComparison {
        admissible: bg.is_pair_admissible(&[phi.to_vec(), psi.to_vec()]),
        agrees: br == closed,
        closed,
        engine: br,
    })
}

/// Drop truncation metadata so that equality compares terms only.
pub fn strip_meta(d: &Derivation) -> Derivation {
    let mut out = Derivation::zero();
    for (q, s, c) in d.terms() {
        out.add_term(q, s, c.clone());
    }
    out
}

/// Terms of q-power ≤ p.
pub fn truncate(d: &Derivation, p: u32) -> Derivation {
    let mut out = Derivation::zero();
    for (q, s, c) in d.terms() {
        if q <= p {
            out.add_term(q, s, c.clone());
        }
    }
    out
}

/// Coordinates of derivations over a common monomial basis, one column per input.
pub fn coordinate_columns(ds: &[Derivation]) -> Vec<Vec<Scalar>> {
    use std::collections::BTreeMap;
    let mut keys: BTreeMap<(u32, Slot, Monomial, u64, bool), usize> = BTreeMap::new();
    for d in ds {
        for (q, s, c) in d.terms() {
            for (m, f) in c.parts() {
                for (w, _) in f.terms() {
                    let len = keys.len();
                    keys.entry((q, s, *m, w, false)).or_insert(len);
                    let len = keys.len();
                    keys.entry((q, s, *m, w, true)).or_insert(len);
                }
            }
        }
    }
    ds.iter()
        .map(|d| {
            let mut v = vec![Scalar::zero(); keys.len()];
            for (q, s, c) in d.terms() {
                for (m, f) in c.parts() {
                    for (w, x) in f.terms() {
                        v[keys[&(q, s, *m, w, false)]] = Scalar::real(x.re().clone());
                        v[keys[&(q, s, *m, w, true)]] = Scalar::real(x.im().clone());
                    }
                }
            }
            v
        })
        .collect()
}

/// Rank of a family of derivations. Complex coefficients are split into real
/// and imaginary parts, so this is the rank over the rationals; callers pass
/// families closed under multiplication by i when they want the complex rank.
pub fn derivation_rank(ds: &[Derivation]) -> usize {
    let cols = coordinate_columns(ds);
    if cols.is_empty() || cols[0].is_empty() {
        return 0;
    }
    rank(&ExactMatrix::from_columns(&cols).expect("common length"))
}

/// Whether `target` lies in the complex span of `family`.
pub fn in_span(family: &[Derivation], target: &Derivation) -> bool {
    if target.is_zero() {
        return true;
    }
    let i = Scalar::i();
    let mut all: Vec<Derivation> = family
        .iter()
        .flat_map(|d| [d.clone(), d.scale(&i)])
        .collect();
    all.push(target.clone());
    let cols = coordinate_columns(&all);
    let target_col = cols.last().cloned().expect("nonempty");
    let basis = &cols[..cols.len() - 1];
    if basis.is_empty() {
        return false;
    }
    coordinates_in_span(basis, &target_col).is_some()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SusyStructure {
    pub k0: KillingSpace,
    pub k1: Vec<Vec<Scalar>>,
    pub q_max: u32,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct StructureReport {
    pub dim_k0: usize,
    pub dim_k1: usize,
    /// 𝔢 and 𝔬 are injective on the chosen bases.
    pub independent: bool,
    /// Classical limit: brackets mod q form the semidirect product.
    pub table_mod_q: bool,
    /// The supersymmetry algebra table mod q².
    pub table_mod_q2: bool,
    /// Every {η, ξ} for η, ξ ∈ K₁ lies in K₀.
    pub brackets_in_k0: bool,
    pub mass_preserving: bool,
    /// Order-q² parts of generator brackets lie in the span of the k = 2 words.
    pub pure_order2: bool,
    /// [𝔢, 𝔷₂] and [𝔬, 𝔷₂] stay in 𝔷₂ at order q².
    pub module_order2: bool,
    /// All order-q² parts of generator brackets vanish.
    pub corrections_vanish: bool,
    /// At q = 1 the odd brackets are D_{{η,ξ}} exactly.
    pub flat_algebra_at_q1: bool,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl SusyStructure {
    pub fn new(bg: &Background, q_max: u32) -> Self {
        SusyStructure {
            k0: bg.killing_fields(),
            k1: bg.parallel_spinors(),
            q_max,
        }
    }

    /// As [`SusyStructure::new`] with K₁ restricted to one chirality.
    pub fn chiral(bg: &Background, q_max: u32, positive: bool) -> Self {
        let k1 = bg
            .parallel_chiral_spinors(positive)
            .unwrap_or_else(|| bg.parallel_spinors());
        SusyStructure {
            k0: bg.killing_fields(),
            k1,
            q_max,
        }
    }
}

/// Check the structure axioms, mass preservation, purity and the module property at order two.
pub fn verify_structure(bg: &Background, st: &SusyStructure) -> Result<StructureReport, SusyError> {
    let engine = Engine::new(bg).with_q_max(Some(st.q_max.max(2)));
    let mut rep = StructureReport {
        dim_k0: st.k0.dim(),
        dim_k1: st.k1.len(),
        ..Default::default()
    };
    let es: Vec<Derivation> = st.k0.basis.iter().map(|x| e_map_unchecked(bg, x)).collect();
    let os: Vec<Derivation> = st.k1.iter().map(|p| o_map(bg, p)).collect();
    if st.k1.is_empty() {
        rep.notes.push("no odd generators".into());
    }

    // independence over ℂ: the families are real-split, so compare multiplicities
    let count_independent = |ds: &[Derivation]| {
        let i = Scalar::i();
        let doubled: Vec<Derivation> = ds.iter().flat_map(|d| [d.clone(), d.scale(&i)]).collect();
        derivation_rank(&doubled) == 2 * ds.len()
    };
    rep.independent = count_independent(&es) && count_independent(&os);
    if !rep.independent {
        rep.failures
            .push("e or o not injective on the chosen bases".into());
    }

    let fail = |rep: &mut StructureReport, msg: String| rep.failures.push(msg);
    rep.table_mod_q = true;
    rep.table_mod_q2 = true;
    rep.brackets_in_k0 = true;
    rep.corrections_vanish = true;
    rep.flat_algebra_at_q1 = true;

    let mut order2: Vec<Derivation> = Vec::new();
    for (i, x) in st.k0.basis.iter().enumerate() {
        for (j, y) in st.k0.basis.iter().enumerate() {
            let br = strip_meta(&engine.bracket(&es[i], &es[j])?);
            let expect = e_map_unchecked(bg, &killing_bracket(bg, x, y));
            if br != expect {
                rep.table_mod_q = false;
                fail(&mut rep, format!("[e{i}, e{j}] != e([X{i}, X{j}])"));
            }
        }
        for (a, eta) in st.k1.iter().enumerate() {
            let br = strip_meta(&engine.bracket(&es[i], &os[a])?);
            let expect = o_map(bg, &spinor_lie_derivative(bg, x, eta));
            if truncate(&br, 0) != truncate(&expect, 0) {
                rep.table_mod_q = false;
                fail(&mut rep, format!("[e{i}, o{a}] != o(L eta) mod q"));
            }
            if truncate(&br, 1) != truncate(&expect, 1) {
                rep.table_mod_q2 = false;
                fail(&mut rep, format!("[e{i}, o{a}] != o(L eta) mod q^2"));
            }
            let q2 = br.q_component(2);
            if !q2.is_zero() {
                order2.push(q2);
            }
        }
    }
    let mut odd_brackets: Vec<(usize, usize, Derivation)> = Vec::new();
    for (a, eta) in st.k1.iter().enumerate() {
        for (b, xi) in st.k1.iter().enumerate() {
            let br = strip_meta(&engine.bracket(&os[a], &os[b])?);
            if !truncate(&br, 0).is_zero() {
                rep.table_mod_q = false;
                fail(&mut rep, format!("[o{a}, o{b}] != 0 mod q"));
            }
            let expect = d_pair(bg, eta, xi).shift_q(1);
            if truncate(&br, 1) != expect {
                rep.table_mod_q2 = false;
                fail(&mut rep, format!("[o{a}, o{b}] != q D_{{eta,xi}} mod q^2"));
            }
            let x = KillingField::frame(bg.rep.spinor_bracket(eta, xi));
            if bg.kind == ModelKind::FlatType || !x.translation.iter().all(Zero::is_zero) {
                if !is_certified(&st.k0, &x) {
                    rep.brackets_in_k0 = false;
                    fail(&mut rep, format!("{{eta{a}, eta{b}}} not Killing"));
                }
                // [e(X), q D_Y] = q D_[X,Y]
                for (i, z) in st.k0.basis.iter().enumerate() {
                    let lhs = strip_meta(&engine.bracket(&es[i], &d_pair(bg, eta, xi))?);
                    let zy = killing_bracket(bg, z, &x);
                    let rhs = e_parts_vector(bg, &zy);
                    if truncate(&lhs, 0) != rhs {
                        rep.table_mod_q2 = false;
                        fail(&mut rep, format!("[e{i}, D_{{eta{a},eta{b}}}] != D_[X,Y]"));
                    }
                }
            }
            let q2 = br.q_component(2);
            if !q2.is_zero() {
                rep.corrections_vanish = false;
                order2.push(q2.clone());
            }
            // q = 1: drop nothing, the full bracket must be D_{{η,ξ}}
            if br.q_component(1) != d_pair(bg, eta, xi) || !q2.is_zero() {
                rep.flat_algebra_at_q1 = false;
            }
            odd_brackets.push((a, b, br));
        }
    }

    rep.mass_preserving = es
        .iter()
        .all(|d| mass_dimensions(d).iter().all(|m| *m == HalfInt(0)))
        && os
            .iter()
            .all(|d| mass_dimensions(d).iter().all(|m| *m == HalfInt(1)));
    if !rep.mass_preserving {
        fail(&mut rep, "generator images are not mass homogeneous".into());
    }

    // 𝔷₂ spanned by the k = 2 words with K₁ arguments
    let z2 = words::order_two_span(&engine_unbounded(bg), &st.k1)?;
    rep.pure_order2 = order2.iter().all(|d| in_span(&z2, d));
    if !rep.pure_order2 {
        fail(
            &mut rep,
            "order-q^2 bracket parts outside span of U_2".into(),
        );
    }
    rep.module_order2 = true;
    for z in &z2 {
        let lifted = z.shift_q(2);
        for (i, e) in es.iter().enumerate() {
            let br = strip_meta(&engine.bracket(e, &lifted)?);
            if !in_span(&z2, &br.q_component(2)) {
                rep.module_order2 = false;
                fail(&mut rep, format!("[e{i}, z] leaves U_2"));
            }
        }
        for (a, o) in os.iter().enumerate() {
            let br = strip_meta(&engine.bracket(o, &lifted)?);
            if !in_span(&z2, &br.q_component(2)) {
                rep.module_order2 = false;
                fail(&mut rep, format!("[o{a}, z] leaves U_2"));
            }
        }
    }
    Ok(rep)
}

fn engine_unbounded(bg: &Background) -> Engine<'_> {
    Engine::new(bg)
}

/// The vector part ȷ(X) of a Killing field as a derivation.
fn e_parts_vector(bg: &Background, x: &KillingField) -> Derivation {
    let mut d = Derivation::zero();
    for (rho, c) in component_sections(x).into_iter().enumerate() {
        d.add_term(0, Slot::Vector(rho), c);
    }
    let _ = bg;
    d
}

/// Frame unit vector E_i as a Killing candidate.
pub fn frame_unit(n: usize, i: usize) -> KillingField {
    KillingField::frame(unit(n, i))
}
