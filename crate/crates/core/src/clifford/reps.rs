use num_traits::Zero;

use super::{CliffordRep, RepLabel};
use crate::exactla::{ExactMatrix, Scalar};
use crate::g2::G2Structure;

/// Pauli matrices σ₁, σ₂, σ₃ (k = 1, 2, 3).
pub fn sigma(k: usize) -> ExactMatrix {
    let (o, z, i) = (Scalar::from(1), Scalar::zero(), Scalar::i());
    let rows = match k {
        1 => vec![vec![z.clone(), o.clone()], vec![o, z]],
        2 => vec![vec![z.clone(), -&i], vec![i, z]],
        3 => vec![vec![o.clone(), z.clone()], vec![z, -o]],
        _ => panic!("sigma index {k} out of range"),
    };
    ExactMatrix::from_rows(rows).expect("2x2")
}

fn i_sigma2() -> ExactMatrix {
    sigma(2).scale(&Scalar::i())
}

fn d3_charge_conj() -> ExactMatrix {
    ExactMatrix::from_ints(&[&[0, -1], &[1, 0]])
}

/// Three-dimensional Lorentzian representation: γ₁ = iσ₂, γ₂ = σ₁, γ₃ = σ₃,
/// metric (−, +, +) and C = [[0, −1], [1, 0]].
pub fn build_rep_d3() -> CliffordRep {
    CliffordRep::new(
        RepLabel::D3,
        vec![-1, 1, 1],
        vec![i_sigma2(), sigma(1), sigma(3)],
        d3_charge_conj(),
        None,
    )
    .expect("d3 representation")
}

/// Same algebra in the frame where the second and third directions are
/// traded, γ₂ = −σ₃, γ₃ = −σ₁. In this frame −i C γ_a reproduces the
/// tilde matrices used for the Heisenberg-type factor in dimension ten.
pub fn build_rep_d3_adapted() -> CliffordRep {
    CliffordRep::new(
        RepLabel::D3Adapted,
        vec![-1, 1, 1],
        vec![i_sigma2(), -sigma(3), -sigma(1)],
        d3_charge_conj(),
        None,
    )
    .expect("adapted d3 representation")
}

/// Real 8x8 representation built from the G₂ three-form: (γ_μ)_{νκ} = ω_{μνκ},
/// (γ_μ)_{μ8} = 1, (γ_μ)_{8μ} = −1. Here γ_μ² = −1, so the carried metric is −δ,
/// and C = 1.
pub fn build_rep_d7() -> CliffordRep {
    build_rep_d7_signed(1)
}

/// The same construction with ω scaled by `omega_sign`. Flipping the sign still
/// gives a Clifford representation, but one no longer adapted to the standard ω.
pub fn build_rep_d7_signed(omega_sign: i64) -> CliffordRep {
    let g2 = G2Structure::standard();
    let gammas = (0..7)
        .map(|mu| {
            ExactMatrix::from_fn(8, 8, |r, c| match (r, c) {
                (7, 7) => Scalar::zero(),
                (7, c) if c == mu => Scalar::from(-1),
                (r, 7) if r == mu => Scalar::from(1),
                (7, _) | (_, 7) => Scalar::zero(),
                (r, c) => Scalar::from(omega_sign * g2.omega(mu, r, c)),
            })
        })
        .collect();
    CliffordRep::new(
        RepLabel::D7,
        vec![-1; 7],
        gammas,
        ExactMatrix::identity(8),
        None,
    )
    .expect("d7 representation")
}

/// Ten-dimensional representation on S = ℂ² ⊗ ℂ⁸ ⊗ ℂ², spinor index
/// `chirality * 16 + n * 2 + α`. Directions 0..7 are the G₂ factor with
/// Γ_μ = iσ₁ ⊗ γ_μ ⊗ 1 (g = +1), directions 7..10 the three-dimensional factor
/// with Γ_a = σ₂ ⊗ 1 ⊗ γ'_a in the adapted frame, so the signature is (+⁷, −, +, +).
/// Chirality is σ₃ ⊗ 1 ⊗ 1 and C = −σ₁ ⊗ 1 ⊗ C₃.
pub fn build_rep_d10() -> CliffordRep {
    let d7 = build_rep_d7();
    let d3 = build_rep_d3_adapted();
    let id2 = ExactMatrix::identity(2);
    let id8 = ExactMatrix::identity(8);
    let mut gammas: Vec<ExactMatrix> = d7
        .gammas
        .iter()
        .map(|g| sigma(1).scale(&Scalar::i()).kron(g).kron(&id2))
        .collect();
    gammas.extend(d3.gammas.iter().map(|g| sigma(2).kron(&id8).kron(g)));
    let mut metric = vec![1; 7];
    metric.extend_from_slice(&d3.metric);
    let c = (-sigma(1)).kron(&id8).kron(&d3.charge_conj);
    let chi = sigma(3).kron(&id8).kron(&id2);
    CliffordRep::new(RepLabel::D10, metric, gammas, c, Some(chi)).expect("d10 representation")
}
