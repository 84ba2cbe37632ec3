//! Explicit Clifford representations with a charge conjugation form.
//!
//! Conventions: `γ_μ γ_ν + γ_ν γ_μ = 2 g_{μν}` with a diagonal metric carried by
//! the representation, `C(η, ξ) = ηᵀ C ξ`, and the C-adjoint `Φ^C = C⁻¹ Φᵀ C`.

mod reps;

pub use reps::{
    build_rep_d10, build_rep_d3, build_rep_d3_adapted, build_rep_d7, build_rep_d7_signed, sigma,
};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{dot, inverse, ExactMatrix, LinAlgError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("Clifford relation fails for (γ_{0}, γ_{1})")]
    Relation(usize, usize),
    #[error("charge conjugation form is neither symmetric nor antisymmetric on degree {0}")]
    MixedSymmetry(usize),
    #[error("index {index} out of range for dimension {dim}")]
    Index { index: usize, dim: usize },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepLabel {
    D3,
    D3Adapted,
    D7,
    D10,
}

impl RepLabel {
    pub fn build(self) -> CliffordRep {
        match self {
            RepLabel::D3 => build_rep_d3(),
            RepLabel::D3Adapted => build_rep_d3_adapted(),
            RepLabel::D7 => build_rep_d7(),
            RepLabel::D10 => build_rep_d10(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CliffordRep {
    pub label: RepLabel,
    /// Diagonal of the metric, each entry ±1.
    pub metric: Vec<i8>,
    pub gammas: Vec<ExactMatrix>,
    pub charge_conj: ExactMatrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chirality: Option<ExactMatrix>,
    #[serde(skip)]
    c_inv: Option<ExactMatrix>,
}

impl CliffordRep {
    pub fn new(
        label: RepLabel,
        metric: Vec<i8>,
        gammas: Vec<ExactMatrix>,
        charge_conj: ExactMatrix,
        chirality: Option<ExactMatrix>,
    ) -> Result<Self, CliffordError> {
        let c_inv = inverse(&charge_conj)?;
        let rep = CliffordRep {
            label,
            metric,
            gammas,
            charge_conj,
            chirality,
            c_inv: Some(c_inv),
        };
        rep.verify_clifford()?;
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.gammas.len()
    }

    pub fn spinor_dim(&self) -> usize {
        self.charge_conj.rows()
    }

    pub fn metric_sign(&self, mu: usize) -> Scalar {
        Scalar::from(i64::from(self.metric[mu]))
    }

    pub fn gamma(&self, mu: usize) -> &ExactMatrix {
        &self.gammas[mu]
    }

    /// γ^μ = g^{μμ} γ_μ.
    pub fn gamma_upper(&self, mu: usize) -> ExactMatrix {
        if self.metric[mu] > 0 {
            self.gammas[mu].clone()
        } else {
            -&self.gammas[mu]
        }
    }

    pub fn c_inv(&self) -> ExactMatrix {
        match &self.c_inv {
            Some(m) => m.clone(),
            None => inverse(&self.charge_conj).expect("charge conjugation is invertible"),
        }
    }

    /// Ordered product γ_{i1} ⋯ γ_{ik}; for distinct indices this is the antisymmetrized product.
    pub fn gamma_product(&self, indices: &[usize]) -> ExactMatrix {
        indices
            .iter()
            .fold(ExactMatrix::identity(self.spinor_dim()), |acc, &i| {
                &acc * &self.gammas[i]
            })
    }

    pub fn gamma_product_upper(&self, indices: &[usize]) -> ExactMatrix {
        indices
            .iter()
            .fold(ExactMatrix::identity(self.spinor_dim()), |acc, &i| {
                &acc * &self.gamma_upper(i)
            })
    }

    /// γ_{μν} = ½(γ_μγ_ν − γ_νγ_μ).
    pub fn gamma2(&self, mu: usize, nu: usize) -> ExactMatrix {
        if mu == nu {
            return ExactMatrix::zeros(self.spinor_dim(), self.spinor_dim());
        }
        &self.gammas[mu] * &self.gammas[nu]
    }

    pub fn gamma2_upper(&self, mu: usize, nu: usize) -> ExactMatrix {
        if mu == nu {
            return ExactMatrix::zeros(self.spinor_dim(), self.spinor_dim());
        }
        &self.gamma_upper(mu) * &self.gamma_upper(nu)
    }

    pub fn verify_clifford(&self) -> Result<(), CliffordError> {
        let n = self.spinor_dim();
        for mu in 0..self.dim() {
            for nu in mu..self.dim() {
                let ac = self.gammas[mu].anticommutator(&self.gammas[nu]);
                let expected = if mu == nu {
                    ExactMatrix::identity(n).scale(&Scalar::from(2 * i64::from(self.metric[mu])))
                } else {
                    ExactMatrix::zeros(n, n)
                };
                if ac != expected {
                    return Err(CliffordError::Relation(mu, nu));
                }
            }
        }
        if let Some(chi) = &self.chirality {
            if chi * chi != ExactMatrix::identity(n)
                || self.gammas.iter().any(|g| !chi.anticommutator(g).is_zero())
            {
                return Err(CliffordError::Relation(self.dim(), self.dim()));
            }
        }
        Ok(())
    }

    /// C-adjoint Φ^C = C⁻¹ Φᵀ C, characterised by C(Φ^C η, ξ) = C(η, Φ ξ).
    pub fn c_adjoint(&self, phi: &ExactMatrix) -> ExactMatrix {
        &(&self.c_inv() * &phi.transpose()) * &self.charge_conj
    }

    /// ad^C_Ω Φ = Ω Φ + Φ Ω^C.
    pub fn ad_c(&self, omega: &ExactMatrix, phi: &ExactMatrix) -> ExactMatrix {
        omega * phi + phi * &self.c_adjoint(omega)
    }

    pub fn c_form(&self, eta: &[Scalar], xi: &[Scalar]) -> Scalar {
        dot(eta, &self.charge_conj.apply(xi))
    }

    /// Components C_k^I(η, ξ) = C(η, γ^I ξ) over increasing multi-indices of length k.
    pub fn c_project(&self, k: usize, eta: &[Scalar], xi: &[Scalar]) -> Vec<(Vec<usize>, Scalar)> {
        multi_indices(self.dim(), k)
            .into_iter()
            .map(|idx| {
                let v = self.c_form(eta, &self.gamma_product_upper(&idx).apply(xi));
                (idx, v)
            })
            .collect()
    }

    /// Vector {η, ξ}^ν = 2 C(η, γ^ν ξ).
    pub fn spinor_bracket(&self, eta: &[Scalar], xi: &[Scalar]) -> Vec<Scalar> {
        (0..self.dim())
            .map(|nu| Scalar::from(2) * self.c_form(eta, &self.gamma_upper(nu).apply(xi)))
            .collect()
    }

    /// Symmetry sign Δ_k of C γ^{(k)} for k = 0..=dim. Errors if a degree mixes symmetries.
    pub fn delta_table(&self) -> Result<Vec<i8>, CliffordError> {
        (0..=self.dim())
            .map(|k| {
                let mut sign: Option<i8> = None;
                for idx in multi_indices(self.dim(), k) {
                    let m = &self.charge_conj * &self.gamma_product(&idx);
                    let t = m.transpose();
                    let s = if t == m {
                        1
                    } else if t == -&m {
                        -1
                    } else {
                        return Err(CliffordError::MixedSymmetry(k));
                    };
                    if *sign.get_or_insert(s) != s {
                        return Err(CliffordError::MixedSymmetry(k));
                    }
                }
                Ok(sign.unwrap_or(1))
            })
            .collect()
    }

    /// Multi-index degrees spanning End(S): all degrees in even dimension, the
    /// lower half in odd dimension (the upper half is dual to it).
    pub fn fierz_degrees(&self) -> Vec<usize> {
        if self.dim().is_multiple_of(2) {
            (0..=self.dim()).collect()
        } else {
            (0..=(self.dim() - 1) / 2).collect()
        }
    }

    /// Fierz rearrangement: ξ C(η, ψ) = N⁻¹ Σ_I (−1)^{k(k−1)/2} C(η, γ^I ξ) γ_I ψ.
    pub fn fierz_rhs(&self, eta: &[Scalar], xi: &[Scalar], psi: &[Scalar]) -> Vec<Scalar> {
        let n = self.spinor_dim();
        let mut out = vec![Scalar::zero(); n];
        for k in self.fierz_degrees() {
            let sign = Scalar::sign((k * k.saturating_sub(1) / 2) as i64);
            for idx in multi_indices(self.dim(), k) {
                let coeff = &sign * &self.c_form(eta, &self.gamma_product_upper(&idx).apply(xi));
                if coeff.is_zero() {
                    continue;
                }
                for (o, v) in out.iter_mut().zip(self.gamma_product(&idx).apply(psi)) {
                    *o += &coeff * &v;
                }
            }
        }
        let inv_n = Scalar::ratio(1, n as i64);
        out.iter().map(|x| x * &inv_n).collect()
    }

    /// Completeness of the basis {γ_I} of End(S): the count matches N² and
    /// every nontrivial γ_I that can appear in a product is traceless.
    pub fn fierz_basis_complete(&self) -> bool {
        let n = self.spinor_dim();
        let degrees = self.fierz_degrees();
        let count: usize = degrees.iter().map(|&k| binomial(self.dim(), k)).sum();
        if count != n * n {
            return false;
        }
        // γ_I⁻¹ γ_J = ±γ_{I△J}; in odd dimension the symmetric difference stays below the top degree.
        let top = if self.dim().is_multiple_of(2) {
            self.dim()
        } else {
            self.dim() - 1
        };
        (1..=top).all(|k| {
            multi_indices(self.dim(), k)
                .iter()
                .all(|idx| self.gamma_product(idx).trace().is_zero())
        })
    }

    /// Rank-one reconstruction over basis pairs: for η = e_i, ξ = e_j the
    /// endomorphism ψ ↦ ξ C(η, ψ) against N⁻¹ Σ_I (−1)^{k(k−1)/2} C(η, γ^I ξ) γ_I.
    /// Returns (i, j, lhs − rhs) for every pair where they differ.
    pub fn fierz_reconstruction_residuals(&self) -> Vec<(usize, usize, ExactMatrix)> {
        let n = self.spinor_dim();
        let mut terms = Vec::new();
        for k in self.fierz_degrees() {
            let sign = Scalar::sign((k * k.saturating_sub(1) / 2) as i64);
            for idx in multi_indices(self.dim(), k) {
                let c_upper = &self.charge_conj * &self.gamma_product_upper(&idx);
                terms.push((c_upper, self.gamma_product(&idx).scale(&sign)));
            }
        }
        let inv_n = Scalar::ratio(1, n as i64);
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let lhs = ExactMatrix::from_fn(n, n, |r, c| {
                    if r == j {
                        self.charge_conj.get(i, c).clone()
                    } else {
                        Scalar::zero()
                    }
                });
                let mut rhs = ExactMatrix::zeros(n, n);
                for (c_upper, g) in &terms {
                    let w = c_upper.get(i, j);
                    if !w.is_zero() {
                        rhs = rhs + g.scale(w);
                    }
                }
                let diff = lhs - rhs.scale(&inv_n);
                if !diff.is_zero() {
                    out.push((i, j, diff));
                }
            }
        }
        out
    }

    /// Projector onto the +1 chirality subspace, if the representation has one.
    pub fn chiral_projector(&self, positive: bool) -> Option<ExactMatrix> {
        let chi = self.chirality.as_ref()?;
        let id = ExactMatrix::identity(self.spinor_dim());
        let half = Scalar::ratio(1, 2);
        Some(if positive {
            (&id + chi).scale(&half)
        } else {
            (&id - chi).scale(&half)
        })
    }

    /// Spin lift of an infinitesimal isometry: ¼ Σ A^a_b γ_a γ^b, so that
    /// [lift, γ_ν] = Σ_ρ A^ρ_ν γ_ρ when A is g-skew.
    pub fn spin_lift(&self, a: &ExactMatrix) -> ExactMatrix {
        let n = self.spinor_dim();
        let mut out = ExactMatrix::zeros(n, n);
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                let x = a.get(r, c);
                if !x.is_zero() {
                    out = out + (&self.gammas[r] * &self.gamma_upper(c)).scale(x);
                }
            }
        }
        out.scale(&Scalar::ratio(1, 4))
    }

    pub fn basis_spinor(&self, k: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.spinor_dim()];
        v[k] = Scalar::one();
        v
    }
}

pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(multi_indices(4, 2).len(), 6);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn c_adjoint_is_adjoint() {
        let rep = build_rep_d3();
        let phi = &rep.gammas[0] * &rep.gammas[1] + rep.gammas[2].scale(&Scalar::ratio(3, 2));
        let eta = vec![Scalar::from(1), Scalar::complex((2, 1), (1, 3))];
        let xi = vec![Scalar::from(-2), Scalar::from(5)];
        assert_eq!(
            rep.c_form(&rep.c_adjoint(&phi).apply(&eta), &xi),
            rep.c_form(&eta, &phi.apply(&xi))
        );
    }

    #[test]
    fn spin_lift_intertwines() {
        let rep = build_rep_d3();
        // A_{ab} skew with lowered indices; A^a_b = g^{aa} A_{ab}
        let lowered = ExactMatrix::from_ints(&[&[0, 1, 2], &[-1, 0, 3], &[-2, -3, 0]]);
        let a = ExactMatrix::from_fn(3, 3, |r, c| &rep.metric_sign(r) * lowered.get(r, c));
        let s = rep.spin_lift(&a);
        for nu in 0..3 {
            let expected = (0..3).fold(ExactMatrix::zeros(2, 2), |acc, rho| {
                acc + rep.gammas[rho].scale(a.get(rho, nu))
            });
            assert_eq!(s.commutator(&rep.gammas[nu]), expected);
        }
    }
}
