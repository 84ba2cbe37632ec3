//! The D = 10 product example N⁷ × H³.
//!
//! The background is modelled at a single point in a D-parallel frame, so the
//! spinor connection vanishes there. The frame connection carries the
//! Levi-Civita data of both factors, Γ^N = −λω and Γ^H = ½f, and the curvature
//! of D is supplied as a 𝔤₂-valued tensor on the seven-dimensional factor.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{oo_bracket_closed, SusyError};
use crate::background::{Background, BackgroundError};
use crate::clifford::{build_rep_d10, build_rep_d3_adapted, CliffordRep};
use crate::exactla::{coordinates_in_span, ExactMatrix, Scalar};
use crate::g2::{G2Structure, Tensor4};
use crate::superfields::{Derivation, Engine, PolySection, Slot, SuperForm};

/// Directions 0..7 span N, 7..10 span H.
pub const N_DIM: usize = 7;
pub const TOTAL_DIM: usize = 10;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct G2H3Params {
    pub lambda: Scalar,
    /// f_{123}; the structure constants are f_{abc} = f₁₂₃ ε_{abc}.
    pub f123: Scalar,
    /// Seed for the 𝔤₂-valued curvature; `None` means R = 0.
    pub curvature_seed: Option<u64>,
}

impl G2H3Params {
    pub fn sl2() -> Self {
        G2H3Params {
            lambda: Scalar::from(1),
            f123: Scalar::from(1),
            curvature_seed: Some(17),
        }
    }

    pub fn abelian() -> Self {
        G2H3Params {
            f123: Scalar::zero(),
            ..Self::sl2()
        }
    }

    pub fn vertical_only() -> Self {
        G2H3Params {
            lambda: Scalar::zero(),
            ..Self::sl2()
        }
    }
}

fn eps3(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (1, 0, 2) | (0, 2, 1) | (2, 1, 0) => -1,
        _ => 0,
    }
}

/// Random pair-symmetric tensor with both pairs projected onto 𝔤₂.
pub fn random_g2_curvature(seed: u64) -> Tensor4 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<i64> = (0..N_DIM.pow(4)).map(|_| rng.gen_range(-2..=2)).collect();
    let at =
        |a: usize, b: usize, c: usize, d: usize| raw[((a * N_DIM + b) * N_DIM + c) * N_DIM + d];
    let sym = Tensor4::from_fn(|a, b, c, d| Scalar::from(at(a, b, c, d) + at(c, d, a, b)));
    G2Structure::standard().g2_project_curvature(&sym.pair_antisymmetrize())
}

/// The curvature endomorphisms R_{μν} = ¼ R_{μνκλ} Γ_κ Γ^λ on the N directions.
fn curvature_endomorphisms(rep: &CliffordRep, r: Option<&Tensor4>) -> Vec<ExactMatrix> {
    let s = rep.spinor_dim();
    let mut out = vec![ExactMatrix::zeros(s, s); TOTAL_DIM * TOTAL_DIM];
    let Some(r) = r else { return out };
    for mu in 0..N_DIM {
        for nu in 0..N_DIM {
            let a = ExactMatrix::from_fn(TOTAL_DIM, TOTAL_DIM, |k, l| {
                if k < N_DIM && l < N_DIM {
                    r.get(mu, nu, k, l).clone()
                } else {
                    Scalar::zero()
                }
            });
            if !a.is_zero() {
                out[mu * TOTAL_DIM + nu] = rep.spin_lift(&a);
            }
        }
    }
    out
}

/// Build the pointwise background and return it with the curvature tensor used.
pub fn build_g2h3(params: &G2H3Params) -> Result<(Background, Option<Tensor4>), BackgroundError> {
    let rep = build_rep_d10();
    let g2 = G2Structure::standard();
    let n = TOTAL_DIM;
    let mut frame = vec![Scalar::zero(); n * n * n];
    let mut structure = vec![Scalar::zero(); n * n * n];
    let half = Scalar::ratio(1, 2);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // Γ_{ab}^c with the last index raised by the metric sign
                let lowered = if a < N_DIM && b < N_DIM && c < N_DIM {
                    -&(&params.lambda * &Scalar::from(g2.omega(a, b, c)))
                } else if a >= N_DIM && b >= N_DIM && c >= N_DIM {
                    &(&half * &params.f123) * &Scalar::from(eps3(a - N_DIM, b - N_DIM, c - N_DIM))
                } else {
                    Scalar::zero()
                };
                let raised = &lowered * &rep.metric_sign(c);
                structure[(a * n + b) * n + c] = &raised * &Scalar::from(2);
                frame[(a * n + b) * n + c] = raised;
            }
        }
    }
    let r = params.curvature_seed.map(random_g2_curvature);
    let curvature = curvature_endomorphisms(&rep, r.as_ref());
    let s = rep.spinor_dim();
    let spin = vec![ExactMatrix::zeros(s, s); n];
    let bg = Background::pointwise(rep, structure, frame, spin, curvature)?;
    Ok((bg, r))
}

/// η_α = e₊ ⊗ e₈ ⊗ e_α, α = 0, 1.
pub fn horizontal_spinor(rep: &CliffordRep, alpha: usize) -> Vec<Scalar> {
    rep.basis_spinor(14 + alpha)
}

/// The one-form e_{κα} = γ_κη ⊗ e_α, sitting in the negative-chirality block.
fn e_form(kappa: usize, alpha: usize) -> SuperForm {
    SuperForm::basis(16 + 2 * kappa + alpha)
}

/// X_{αβ} = C(η_α, Γ^M η_β).
pub fn killing_vector(rep: &CliffordRep, alpha: usize, beta: usize) -> Vec<Scalar> {
    let (a, b) = (horizontal_spinor(rep, alpha), horizontal_spinor(rep, beta));
    (0..rep.dim())
        .map(|m| rep.c_form(&a, &rep.gamma_upper(m).apply(&b)))
        .collect()
}

/// (ω_μ ⊗ (e_α ∨ e_β)) = ½ ω_{μνκ} (e_{να} ∧ e_{κβ} + e_{νβ} ∧ e_{κα}).
pub fn omega_vee(mu: usize, alpha: usize, beta: usize) -> SuperForm {
    let g2 = G2Structure::standard();
    let mut out = SuperForm::zero();
    for nu in 0..N_DIM {
        for ka in 0..N_DIM {
            let w = g2.omega(mu, nu, ka);
            if w == 0 {
                continue;
            }
            let pair = e_form(nu, alpha)
                .wedge(&e_form(ka, beta))
                .add(&e_form(nu, beta).wedge(&e_form(ka, alpha)));
            out.add_assign(&pair.scale(&Scalar::ratio(w, 2)));
        }
    }
    out
}

/// Unit-weight vertical factor η₁ ∧ η₂, read as e_{8,1} ∧ e_{8,2}.
pub fn vertical_area() -> SuperForm {
    e_form(7, 0).wedge(&e_form(7, 1))
}

fn vector_part(d: &Derivation, q: u32) -> Vec<SuperForm> {
    (0..TOTAL_DIM)
        .map(|nu| d.coefficient(q, Slot::Vector(nu)).constant_part())
        .collect()
}

/// The torsion term of [𝔬η_α, 𝔬η_β] at order q² split into N and H components.
pub fn torsion_term(bg: &Background, alpha: usize, beta: usize) -> Vec<SuperForm> {
    let (a, b) = (
        horizontal_spinor(&bg.rep, alpha),
        horizontal_spinor(&bg.rep, beta),
    );
    vector_part(&oo_bracket_closed(bg, &a, &b), 2)
}

/// Prefactor p with `lhs = p · rhs`, or `None` when no common scalar exists.
pub fn proportionality(lhs: &[SuperForm], rhs: &[SuperForm]) -> Option<Scalar> {
    let mut factor: Option<Scalar> = None;
    for (l, r) in lhs.iter().zip(rhs) {
        let words: std::collections::BTreeSet<u64> = l
            .terms()
            .map(|(w, _)| w)
            .chain(r.terms().map(|(w, _)| w))
            .collect();
        for w in words {
            let (x, y) = (l.coefficient(w), r.coefficient(w));
            if y.is_zero() {
                if !x.is_zero() {
                    return None;
                }
                continue;
            }
            let p = &x * &y.inv();
            match &factor {
                Some(f) if *f != p => return None,
                Some(_) => {}
                None => factor = Some(p),
            }
        }
    }
    Some(factor.unwrap_or_else(Scalar::zero))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DddCheck {
    pub alpha: usize,
    pub beta: usize,
    pub vertical_matches: bool,
    pub horizontal_matches: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BbbCheck {
    /// First-principles action equals the index-corrected 𝔅 formula times this scalar.
    pub bbb_factor: Option<Scalar>,
    /// First-principles action equals the summary closed form for the G₂ × H³ background times this scalar.
    pub display_factor: Option<Scalar>,
    /// The printed form with the repeated index taken literally.
    pub literal_factor: Option<Scalar>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct G2H3Report {
    pub params: G2H3Params,
    pub admissible: bool,
    pub k1_positive_dim: usize,
    pub k1_is_horizontal: bool,
    pub killing_vectors_match: bool,
    /// D_c = f_{abc} γ^aη_α ∧ γ^bη_β on the H directions.
    pub d1_matches: bool,
    /// f_{abc} γ^a e_α ∧ γ^b e_β = 2i f₁₂₃ (γ̃_c)_{βα} e₁ ∧ e₂ by Fierz in three dimensions.
    pub fierz_matches: bool,
    pub ddd: Vec<DddCheck>,
    pub vertical_prefactor: Scalar,
    pub horizontal_prefactor: Scalar,
    pub rgamma_holds: bool,
    pub h_curvature_vanishes: bool,
    pub bbb: Option<BbbCheck>,
}

impl G2H3Report {
    pub fn passed(&self) -> bool {
        let bbb_ok = self
            .bbb
            .as_ref()
            .is_none_or(|b| b.bbb_factor.is_some() || b.display_factor.is_some());
        self.admissible
            && self.k1_positive_dim == 2
            && self.k1_is_horizontal
            && self.killing_vectors_match
            && self.d1_matches
            && self.fierz_matches
            && self
                .ddd
                .iter()
                .all(|d| d.vertical_matches && d.horizontal_matches)
            && self.rgamma_holds
            && self.h_curvature_vanishes
            && bbb_ok
    }
}

/// Weight of η₁ ∧ η₂ against e_{8,1} ∧ e_{8,2}, resolved once on the 𝔰𝔩(2),
/// λ = 1 point and frozen. The i comes from Γ^a mapping S⁺ to S⁻.
pub fn vertical_prefactor() -> Scalar {
    &Scalar::i() * &Scalar::from(-2)
}

/// The ∨-normalization of the horizontal term, frozen the same way.
pub fn horizontal_prefactor() -> Scalar {
    Scalar::from(2)
}

pub fn example_g2h3_checks(params: &G2H3Params) -> Result<G2H3Report, SusyError> {
    let (bg, r) = build_g2h3(params).expect("g2h3 background");
    let rep = &bg.rep;
    let horizontal: Vec<Vec<Scalar>> = (0..2).map(|a| horizontal_spinor(rep, a)).collect();
    let k1 = bg.parallel_chiral_spinors(true).unwrap_or_default();
    let k1_is_horizontal = k1.len() == 2
        && k1
            .iter()
            .all(|v| coordinates_in_span(&horizontal, v).is_some());

    // X₁₁ = i(E₁ − E₃), X₂₂ = i(E₁ + E₃), X₁₂ = iE₂
    let i = Scalar::i();
    let expected = |c: [i64; 3]| -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); TOTAL_DIM];
        for (k, x) in c.iter().enumerate() {
            v[N_DIM + k] = &i * &Scalar::from(*x);
        }
        v
    };
    let killing_vectors_match = killing_vector(rep, 0, 0) == expected([1, 0, -1])
        && killing_vector(rep, 1, 1) == expected([1, 0, 1])
        && killing_vector(rep, 0, 1) == expected([0, 1, 0])
        && killing_vector(rep, 1, 0) == expected([0, 1, 0]);

    let up = |m: usize, v: &[Scalar]| SuperForm::from_spinor(&rep.gamma_upper(m).apply(v));
    let vp = vertical_prefactor();
    let hp = horizontal_prefactor();
    let mut d1_matches = true;
    let mut ddd = Vec::new();
    for alpha in 0..2 {
        for beta in 0..2 {
            let got = torsion_term(&bg, alpha, beta);
            let x = killing_vector(rep, alpha, beta);
            // (D1): D_c = f_{abc} γ^aη_α ∧ γ^bη_β, read off the D^c = g^{cc} D_c slot
            for c in 0..3 {
                let mut d1 = SuperForm::zero();
                for a in 0..3 {
                    for b in 0..3 {
                        let e = eps3(a, b, c);
                        if e != 0 {
                            let f = &params.f123 * &Scalar::from(e);
                            d1.add_assign(
                                &up(N_DIM + a, &horizontal[alpha])
                                    .wedge(&up(N_DIM + b, &horizontal[beta]))
                                    .scale(&f),
                            );
                        }
                    }
                }
                d1_matches &= got[N_DIM + c].scale(&rep.metric_sign(N_DIM + c)) == d1;
            }
            let vertical: Vec<SuperForm> = (0..TOTAL_DIM)
                .map(|m| {
                    if m >= N_DIM {
                        vertical_area().scale(&(&x[m] * &params.f123))
                    } else {
                        SuperForm::zero()
                    }
                })
                .collect();
            let horiz: Vec<SuperForm> = (0..TOTAL_DIM)
                .map(|m| {
                    if m < N_DIM {
                        omega_vee(m, alpha, beta).scale(&params.lambda)
                    } else {
                        SuperForm::zero()
                    }
                })
                .collect();
            let vertical_matches = (N_DIM..TOTAL_DIM).all(|m| got[m] == vertical[m].scale(&vp));
            let horizontal_matches = (0..N_DIM).all(|m| got[m] == horiz[m].scale(&hp));
            ddd.push(DddCheck {
                alpha,
                beta,
                vertical_matches,
                horizontal_matches,
            });
        }
    }

    let g2 = G2Structure::standard();
    let d7 = g2.rep();
    let rgamma_holds = match &r {
        Some(t) => (0..8).all(|k| {
            let xi = d7.basis_spinor(k);
            (0..N_DIM).all(|m| {
                (0..N_DIM).all(|n| {
                    let s = g2.rgamma_sides(&d7, t, &xi, m, n);
                    s.lhs == s.rhs
                })
            })
        }),
        None => true,
    };

    let h_curvature_vanishes = (0..TOTAL_DIM).all(|m| {
        (0..TOTAL_DIM).all(|n| {
            let rm = bg.curvature(m, n);
            if (m >= N_DIM || n >= N_DIM) && !rm.is_zero() {
                return false;
            }
            (N_DIM..TOTAL_DIM)
                .all(|a| (N_DIM..TOTAL_DIM).all(|b| rm.commutator(&rep.gamma2(a, b)).is_zero()))
        })
    });

    let bbb = match &r {
        Some(t) => Some(bbb_check(&bg, t)?),
        None => None,
    };

    Ok(G2H3Report {
        params: params.clone(),
        admissible: bg.is_admissible(),
        k1_positive_dim: k1.len(),
        k1_is_horizontal,
        killing_vectors_match,
        d1_matches,
        fierz_matches: fierz_reduction(&params.f123),
        ddd,
        vertical_prefactor: vp,
        horizontal_prefactor: hp,
        rgamma_holds,
        h_curvature_vanishes,
        bbb,
    })
}

/// The curvature part of [𝔬η_α, 𝔬η_β] at order q², acting on probes ξ ⊗ e_γ
/// from the negative-chirality block, against the printed readings.
fn bbb_check(bg: &Background, r: &Tensor4) -> Result<BbbCheck, SusyError> {
    let rep = &bg.rep;
    let c_inv = rep.c_inv();
    let engine = Engine::new(bg).with_q_max(Some(2));
    let d7 = build_d7_bivectors();
    let mut first = Vec::new();
    let mut bbb = Vec::new();
    let mut display = Vec::new();
    let mut literal = Vec::new();
    for alpha in 0..2 {
        for beta in 0..2 {
            let (a, b) = (horizontal_spinor(rep, alpha), horizontal_spinor(rep, beta));
            let mut bterm = Derivation::zero();
            for mu in 0..N_DIM {
                for nu in 0..N_DIM {
                    let rm = bg.curvature(mu, nu);
                    if rm.is_zero() {
                        continue;
                    }
                    let pre = SuperForm::from_spinor(&rep.gamma_upper(mu).apply(&a))
                        .wedge(&SuperForm::from_spinor(&rep.gamma_upper(nu).apply(&b)));
                    bterm.add_assign(&Derivation::from_endomorphism_with(
                        2,
                        rm,
                        &c_inv,
                        &PolySection::constant(pre),
                    ));
                }
            }
            for probe_n in 0..8 {
                for gamma in 0..2 {
                    let probe = PolySection::constant(if probe_n < N_DIM {
                        e_form(probe_n, gamma)
                    } else {
                        e_form(7, gamma)
                    });
                    let acted = engine.apply(&bterm, &probe)?;
                    first.push(
                        acted
                            .get(&2)
                            .map(PolySection::constant_part)
                            .unwrap_or_default(),
                    );
                    let xi = d7.unit(probe_n);
                    bbb.push(printed_bbb(r, &xi, alpha, beta, gamma, false));
                    literal.push(printed_bbb(r, &xi, alpha, beta, gamma, true));
                    display.push(final_display(r, &d7, &xi, alpha, beta, gamma));
                }
            }
        }
    }
    Ok(BbbCheck {
        bbb_factor: proportionality(&first, &bbb),
        display_factor: proportionality(&first, &display),
        literal_factor: proportionality(&first, &literal),
    })
}

struct D7Bivectors {
    rep: CliffordRep,
}

impl D7Bivectors {
    fn unit(&self, k: usize) -> Vec<Scalar> {
        self.rep.basis_spinor(k)
    }
}

fn build_d7_bivectors() -> D7Bivectors {
    D7Bivectors {
        rep: G2Structure::standard().rep(),
    }
}

/// 2 ξ_μ R^{μνκλ} e_{κα} ∧ e_{λα'} ∧ e_{νβ}; with `literal` the last factor
/// repeats λ as printed.
fn printed_bbb(
    r: &Tensor4,
    xi: &[Scalar],
    alpha: usize,
    beta: usize,
    gamma: usize,
    literal: bool,
) -> SuperForm {
    let mut out = SuperForm::zero();
    let two = Scalar::from(2);
    for (mu, x) in xi.iter().enumerate().take(N_DIM) {
        if x.is_zero() {
            continue;
        }
        for nu in 0..N_DIM {
            for ka in 0..N_DIM {
                for la in 0..N_DIM {
                    let c = r.get(mu, nu, ka, la);
                    if c.is_zero() {
                        continue;
                    }
                    let last = if literal {
                        e_form(la, gamma)
                    } else {
                        e_form(nu, gamma)
                    };
                    let w = e_form(ka, alpha).wedge(&e_form(la, beta)).wedge(&last);
                    out.add_assign(&w.scale(&(&(&two * x) * c)));
                }
            }
        }
    }
    out
}

/// ½ R^{μνκλ} e_{κα} ∧ e_{λα'} ∧ (γ_{μν} ξ ⊗ e_β), the end of the example's computation.
fn final_display(
    r: &Tensor4,
    d7: &D7Bivectors,
    xi: &[Scalar],
    alpha: usize,
    beta: usize,
    gamma: usize,
) -> SuperForm {
    let mut out = SuperForm::zero();
    let half = Scalar::ratio(1, 2);
    for mu in 0..N_DIM {
        for nu in 0..N_DIM {
            if mu == nu {
                continue;
            }
            let g = d7.rep.gamma2_upper(mu, nu).apply(xi);
            let mut acted = SuperForm::zero();
            for (k, v) in g.iter().enumerate() {
                if !v.is_zero() {
                    acted.add_assign(&e_form(k, gamma).scale(v));
                }
            }
            for ka in 0..N_DIM {
                for la in 0..N_DIM {
                    let c = r.get(mu, nu, ka, la);
                    if c.is_zero() {
                        continue;
                    }
                    let w = e_form(ka, alpha).wedge(&e_form(la, beta)).wedge(&acted);
                    out.add_assign(&w.scale(&(&half * c)));
                }
            }
        }
    }
    out
}

/// The three-dimensional Fierz step behind (D1): for α, β and c,
/// f_{abc} γ^a e_α ∧ γ^b e_β, −f_{abc} C(γ^a e_α, γ^b e_β) e₁ ∧ e₂ and
/// the γ̃ form built from X_{αβ} agree.
pub fn fierz_reduction(f123: &Scalar) -> bool {
    let rep3 = build_rep_d3_adapted();
    let rep10 = build_rep_d10();
    let area = SuperForm::basis(0).wedge(&SuperForm::basis(1));
    let mut ok = true;
    for alpha in 0..2 {
        for beta in 0..2 {
            let x = killing_vector(&rep10, beta, alpha);
            for c in 0..3 {
                let mut wedge = SuperForm::zero();
                let mut via_c = Scalar::zero();
                for a in 0..3 {
                    for b in 0..3 {
                        let e = eps3(a, b, c);
                        if e == 0 {
                            continue;
                        }
                        let f = f123 * &Scalar::from(e);
                        let ga = rep3.gamma_upper(a).apply(&rep3.basis_spinor(alpha));
                        let gb = rep3.gamma_upper(b).apply(&rep3.basis_spinor(beta));
                        wedge.add_assign(
                            &SuperForm::from_spinor(&ga)
                                .wedge(&SuperForm::from_spinor(&gb))
                                .scale(&f),
                        );
                        via_c -= &(&f * &rep3.c_form(&ga, &gb));
                    }
                }
                // (γ̃_c)_{βα} = g_{cc} X_{βα}^c
                let tilde = &x[N_DIM + c] * &rep3.metric_sign(c);
                let via_tilde = &(f123 * &Scalar::from(2)) * &(&Scalar::i() * &tilde);
                ok &= wedge == area.scale(&via_c) && via_c == via_tilde;
            }
        }
    }
    ok
}
