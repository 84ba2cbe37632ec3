use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Background, ModelKind};
use crate::exactla::{kernel_basis, ExactMatrix, Scalar};

/// Vector field X = t^ρ E_ρ + A^ρ_ν x^ν ∂_ρ; the linear part only occurs on
/// flat-type backgrounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillingField {
    pub translation: Vec<Scalar>,
    pub rotation: Option<ExactMatrix>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct KillingSpace {
    pub basis: Vec<KillingField>,
}

impl KillingSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

impl KillingField {
    pub fn frame(translation: Vec<Scalar>) -> Self {
        KillingField {
            translation,
            rotation: None,
        }
    }
}

impl Background {
    /// ∇X as the frame endomorphism (∇X)^κ_b = (∇_{E_b} X)^κ for constant X = t^a E_a.
    pub fn nabla_of_frame_field(&self, t: &[Scalar]) -> ExactMatrix {
        let n = self.dim();
        ExactMatrix::from_fn(n, n, |k, b| {
            (0..n).map(|a| &t[a] * self.frame_connection(b, a, k)).sum()
        })
    }

    /// Endomorphism Ψ_X with 𝔢(X) = ȷ(X) − Ψ_X for constant X = t^a E_a.
    pub fn kosmann_term(&self, t: &[Scalar]) -> ExactMatrix {
        let s = self.spinor_dim();
        let nabla = self.nabla_of_frame_field(t);
        let mut psi = if nabla.is_zero() {
            ExactMatrix::zeros(s, s)
        } else {
            self.rep.spin_lift(&nabla)
        };
        for (a, ta) in t.iter().enumerate() {
            if !ta.is_zero() {
                psi = psi + self.difference(a).scale(ta);
            }
        }
        psi
    }

    /// Basis of so(g) as mixed tensors A^ρ_ν, from lowered units A_{ab} = −A_{ba} = 1.
    pub fn rotation_generators(&self) -> Vec<ExactMatrix> {
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let mut m = ExactMatrix::zeros(n, n);
                m.set(a, b, self.rep.metric_sign(a));
                m.set(b, a, -self.rep.metric_sign(b));
                out.push(m);
            }
        }
        out
    }

    /// Certified Killing fields that also preserve the spinor connection.
    pub fn killing_fields(&self) -> KillingSpace {
        match self.kind {
            ModelKind::FlatType => self.flat_killing(),
            ModelKind::Homogeneous | ModelKind::Pointwise => self.frame_killing(),
        }
    }

    fn flat_killing(&self) -> KillingSpace {
        let n = self.dim();
        let mut basis: Vec<KillingField> = (0..n)
            .map(|mu| {
                KillingField::frame(
                    (0..n)
                        .map(|k| {
                            if k == mu {
                                Scalar::one()
                            } else {
                                Scalar::zero()
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        // rotations need [spin(A), 𝒜_ν] = A^ρ_ν 𝒜_ρ
        let gens = self.rotation_generators();
        let columns: Vec<Vec<Scalar>> = gens
            .iter()
            .map(|a| {
                let lift = self.rep.spin_lift(a);
                (0..n)
                    .flat_map(|nu| {
                        let mut m = lift.commutator(&self.difference(nu));
                        for rho in 0..n {
                            let c = a.get(rho, nu);
                            if !c.is_zero() {
                                m = m - self.difference(rho).scale(c);
                            }
                        }
                        m.flatten()
                    })
                    .collect()
            })
            .collect();
        if !columns.is_empty() {
            let system = ExactMatrix::from_columns(&columns).expect("equal lengths");
            for coeffs in kernel_basis(&system) {
                let rot = gens
                    .iter()
                    .zip(&coeffs)
                    .fold(ExactMatrix::zeros(n, n), |acc, (g, c)| acc + g.scale(c));
                basis.push(KillingField {
                    translation: vec![Scalar::zero(); n],
                    rotation: Some(rot),
                });
            }
        }
        KillingSpace { basis }
    }

    fn frame_killing(&self) -> KillingSpace {
        let n = self.dim();
        // metric condition: (∇X)_{κb} + (∇X)_{bκ} = 0 with lowered first index
        let unit = |a: usize| -> Vec<Scalar> {
            (0..n)
                .map(|k| {
                    if k == a {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        };
        let metric_cols: Vec<Vec<Scalar>> = (0..n)
            .map(|a| {
                let nab = self.nabla_of_frame_field(&unit(a));
                let low = |k: usize, b: usize| &self.rep.metric_sign(k) * nab.get(k, b);
                (0..n)
                    .flat_map(|k| (0..n).map(move |b| (k, b)))
                    .map(|(k, b)| low(k, b) + low(b, k))
                    .collect()
            })
            .collect();
        let metric_kernel =
            kernel_basis(&ExactMatrix::from_columns(&metric_cols).expect("equal lengths"));
        // connection condition: t^a R_{ab} + [M_b, Ψ_X] = 0 for all b
        let cols: Vec<Vec<Scalar>> = metric_kernel
            .iter()
            .map(|t| {
                let psi = self.kosmann_term(t);
                (0..n)
                    .flat_map(|b| {
                        let mut m = self.spin_connection(b).commutator(&psi);
                        for (a, ta) in t.iter().enumerate() {
                            if !ta.is_zero() {
                                m = m + self.curvature(a, b).scale(ta);
                            }
                        }
                        m.flatten()
                    })
                    .collect()
            })
            .collect();
        if cols.is_empty() {
            return KillingSpace::default();
        }
        let combos = kernel_basis(&ExactMatrix::from_columns(&cols).expect("equal lengths"));
        let basis = combos
            .iter()
            .map(|c| {
                let t = (0..n)
                    .map(|k| metric_kernel.iter().zip(c).map(|(v, x)| &v[k] * x).sum())
                    .collect();
                KillingField::frame(t)
            })
            .collect();
        KillingSpace { basis }
    }
}
