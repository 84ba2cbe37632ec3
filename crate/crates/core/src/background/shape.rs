//! Connection differences built from forms, 𝒜_X = X ∧ F or X ⌋ F under the
//! Clifford map, and the charge-conjugation admissibility rule for them.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::clifford::{CliffordError, CliffordRep};
use crate::exactla::{ExactMatrix, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Wedge,
    Contraction,
}

/// One summand of 𝒜: a constant ℓ-form F with components F_I on strictly
/// increasing lower multi-indices I.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeTerm {
    pub kind: ShapeKind,
    pub degree: usize,
    pub components: Vec<(Vec<usize>, Scalar)>,
}

impl ShapeTerm {
    pub fn new(kind: ShapeKind, degree: usize, components: Vec<(Vec<usize>, Scalar)>) -> Self {
        ShapeTerm {
            kind,
            degree,
            components,
        }
    }

    /// F = λ as a 0-form, giving 𝒜_μ = λγ_μ for the wedge kind.
    pub fn scalar(kind: ShapeKind, lambda: Scalar) -> Self {
        ShapeTerm {
            kind,
            degree: 0,
            components: vec![(Vec::new(), lambda)],
        }
    }
}

/// 𝒜_μ for all frame directions: γ_μ γ^I F_I for X ∧ F (μ ∉ I) and
/// ±γ^{I∖μ} F_I for X ⌋ F (μ ∈ I, sign of moving μ to the front).
pub fn difference_from_shape(rep: &CliffordRep, terms: &[ShapeTerm]) -> Vec<ExactMatrix> {
    let n = rep.dim();
    let s = rep.spinor_dim();
    let mut out = vec![ExactMatrix::zeros(s, s); n];
    for t in terms {
        for (idx, f) in &t.components {
            if f.is_zero() {
                continue;
            }
            for (mu, slot) in out.iter_mut().enumerate() {
                match t.kind {
                    ShapeKind::Wedge if !idx.contains(&mu) => {
                        let m = rep.gamma(mu) * &rep.gamma_product_upper(idx);
                        *slot = &*slot + &m.scale(f);
                    }
                    ShapeKind::Contraction => {
                        if let Some(pos) = idx.iter().position(|&i| i == mu) {
                            let rest: Vec<usize> =
                                idx.iter().copied().filter(|&i| i != mu).collect();
                            let sign = if pos % 2 == 0 { f.clone() } else { -f };
                            *slot = &*slot + &rep.gamma_product_upper(&rest).scale(&sign);
                        }
                    }
                    ShapeKind::Wedge => {}
                }
            }
        }
    }
    out
}

/// The rule Δ_{deg F} Δ₁ = −1 for every summand.
pub fn shape_admissible(rep: &CliffordRep, terms: &[ShapeTerm]) -> Result<bool, CliffordError> {
    let delta = rep.delta_table()?;
    Ok(terms
        .iter()
        .all(|t| t.degree < delta.len() && delta[t.degree] * delta[1] == -1))
}
