//! Backgrounds in a constant-coefficient frame model.
//!
//! A background is an orthonormal frame E_μ with constant structure constants
//! [E_μ, E_ν] = c_{μν}^κ E_κ, the Levi-Civita frame connection
//! ∇_{E_μ}E_ν = Γ_{μν}^κ E_κ, and a spinor connection with constant frame
//! components D_μ ξ = M_μ ξ on frame-constant spinors. Flat-type backgrounds
//! additionally carry coordinates with E_μ = ∂_μ, so polynomial coefficients
//! can be differentiated.

mod bianchi;
mod killing;
mod shape;

pub use bianchi::{BianchiReport, LemmaWeight};
pub use killing::{KillingField, KillingSpace};
pub use shape::{difference_from_shape, shape_admissible, ShapeKind, ShapeTerm};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::CliffordRep;
use crate::exactla::{kernel_basis, ExactMatrix, LinAlgError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackgroundError {
    #[error("expected {expected} connection matrices of size {size}, got {got}")]
    ConnectionShape {
        expected: usize,
        size: usize,
        got: usize,
    },
    #[error("structure constants must have {0} entries")]
    StructureShape(usize),
    #[error("structure constants are not antisymmetric in the first two indices")]
    StructureNotSkew,
    #[error("supplied curvature must have one matrix per ordered index pair")]
    CurvatureShape,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Flat metric, coordinates, frame = coordinate frame.
    FlatType,
    /// Left-invariant frame on a Lie group; no coordinates.
    Homogeneous,
    /// Frame data at a single point with supplied curvature; the frame
    /// connection need not come from a consistent frame bracket.
    Pointwise,
}

#[derive(Debug, Clone, Serialize)]
pub struct Background {
    pub kind: ModelKind,
    #[serde(skip)]
    pub rep: CliffordRep,
    /// c_{μν}^κ at index (μ n + ν) n + κ.
    structure: Vec<Scalar>,
    /// Γ_{μν}^κ at the same layout.
    frame_conn: Vec<Scalar>,
    spin_conn: Vec<ExactMatrix>,
    #[serde(skip)]
    curvature: Vec<ExactMatrix>,
    #[serde(skip)]
    levi_civita: Vec<ExactMatrix>,
}

fn idx3(n: usize, a: usize, b: usize, c: usize) -> usize {
    (a * n + b) * n + c
}

impl Background {
    /// Flat metric with D = ∂ + 𝒜 for constant 𝒜_μ.
    pub fn flat_type(
        rep: CliffordRep,
        difference: Vec<ExactMatrix>,
    ) -> Result<Self, BackgroundError> {
        let n = rep.dim();
        Self::assemble(
            ModelKind::FlatType,
            rep,
            vec![Scalar::zero(); n * n * n],
            vec![Scalar::zero(); n * n * n],
            difference,
            None,
        )
    }

    /// Left-invariant frame with structure constants c_{μν}^κ and D = ∇ + 𝒜.
    pub fn homogeneous(
        rep: CliffordRep,
        structure: Vec<Scalar>,
        difference: Vec<ExactMatrix>,
    ) -> Result<Self, BackgroundError> {
        let n = rep.dim();
        if structure.len() != n * n * n {
            return Err(BackgroundError::StructureShape(n * n * n));
        }
        let frame_conn = koszul(&rep, &structure);
        let lc = levi_civita_lift(&rep, &frame_conn);
        let spin_conn = add_lists(&lc, &difference, n, rep.spinor_dim())?;
        Self::assemble(
            ModelKind::Homogeneous,
            rep,
            structure,
            frame_conn,
            spin_conn,
            None,
        )
    }

    /// Homogeneous frame with the spinor connection given directly by M_μ.
    pub fn homogeneous_with_spin_connection(
        rep: CliffordRep,
        structure: Vec<Scalar>,
        spin_conn: Vec<ExactMatrix>,
    ) -> Result<Self, BackgroundError> {
        let n = rep.dim();
        if structure.len() != n * n * n {
            return Err(BackgroundError::StructureShape(n * n * n));
        }
        let frame_conn = koszul(&rep, &structure);
        Self::assemble(
            ModelKind::Homogeneous,
            rep,
            structure,
            frame_conn,
            spin_conn,
            None,
        )
    }

    /// Pointwise frame data with supplied structure constants, frame
    /// connection, spinor connection and curvature R_{μν} (index μ n + ν).
    pub fn pointwise(
        rep: CliffordRep,
        structure: Vec<Scalar>,
        frame_conn: Vec<Scalar>,
        spin_conn: Vec<ExactMatrix>,
        curvature: Vec<ExactMatrix>,
    ) -> Result<Self, BackgroundError> {
        Self::assemble(
            ModelKind::Pointwise,
            rep,
            structure,
            frame_conn,
            spin_conn,
            Some(curvature),
        )
    }

    fn assemble(
        kind: ModelKind,
        rep: CliffordRep,
        structure: Vec<Scalar>,
        frame_conn: Vec<Scalar>,
        spin_conn: Vec<ExactMatrix>,
        curvature: Option<Vec<ExactMatrix>>,
    ) -> Result<Self, BackgroundError> {
        let n = rep.dim();
        let s = rep.spinor_dim();
        if spin_conn.len() != n || spin_conn.iter().any(|m| m.rows() != s || m.cols() != s) {
            return Err(BackgroundError::ConnectionShape {
                expected: n,
                size: s,
                got: spin_conn.len(),
            });
        }
        if structure.len() != n * n * n || frame_conn.len() != n * n * n {
            return Err(BackgroundError::StructureShape(n * n * n));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if structure[idx3(n, a, b, c)] != -&structure[idx3(n, b, a, c)] {
                        return Err(BackgroundError::StructureNotSkew);
                    }
                }
            }
        }
        let levi_civita = levi_civita_lift(&rep, &frame_conn);
        let curvature = match curvature {
            Some(r) => {
                if r.len() != n * n {
                    return Err(BackgroundError::CurvatureShape);
                }
                r
            }
            None => {
                let mut r = Vec::with_capacity(n * n);
                for a in 0..n {
                    for b in 0..n {
                        let mut m = spin_conn[a].commutator(&spin_conn[b]);
                        for c in 0..n {
                            let k = &structure[idx3(n, a, b, c)];
                            if !k.is_zero() {
                                m = m - spin_conn[c].scale(k);
                            }
                        }
                        r.push(m);
                    }
                }
                r
            }
        };
        Ok(Background {
            kind,
            rep,
            structure,
            frame_conn,
            spin_conn,
            curvature,
            levi_civita,
        })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn spinor_dim(&self) -> usize {
        self.rep.spinor_dim()
    }

    pub fn has_coordinates(&self) -> bool {
        self.kind == ModelKind::FlatType
    }

    pub fn structure(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.structure[idx3(self.dim(), a, b, c)]
    }

    pub fn frame_connection(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.frame_conn[idx3(self.dim(), a, b, c)]
    }

    /// Spinor connection components M_μ.
    pub fn spin_connection(&self, mu: usize) -> &ExactMatrix {
        &self.spin_conn[mu]
    }

    /// Components of the dual connection D^C, N_μ = −M_μ^C.
    pub fn dual_connection(&self, mu: usize) -> ExactMatrix {
        -self.rep.c_adjoint(&self.spin_conn[mu])
    }

    /// Spin lift of the Levi-Civita frame connection.
    pub fn levi_civita(&self, mu: usize) -> &ExactMatrix {
        &self.levi_civita[mu]
    }

    /// 𝒜_μ = M_μ − lc_μ.
    pub fn difference(&self, mu: usize) -> ExactMatrix {
        &self.spin_conn[mu] - &self.levi_civita[mu]
    }

    pub fn curvature(&self, mu: usize, nu: usize) -> &ExactMatrix {
        &self.curvature[mu * self.dim() + nu]
    }

    /// D̂_μ applied to an End(S)-valued tensor with frame-constant
    /// components: M_μΦ_I + Φ_I M_μ^C − Σ_slots Γ_{μ i_s}^λ Φ_{I[s→λ]}.
    pub fn hat_d(
        &self,
        mu: usize,
        phi: &dyn Fn(&[usize]) -> ExactMatrix,
        idx: &[usize],
    ) -> ExactMatrix {
        let m = &self.spin_conn[mu];
        let base = phi(idx);
        let mut out = m * &base + &base * &self.rep.c_adjoint(m);
        out = out - self.frame_terms(mu, phi, idx);
        out
    }

    /// D_μ on End(S)-valued tensors acting by commutator: [M_μ, Φ_I] − Γ-terms.
    pub fn d_endo(
        &self,
        mu: usize,
        phi: &dyn Fn(&[usize]) -> ExactMatrix,
        idx: &[usize],
    ) -> ExactMatrix {
        let base = phi(idx);
        self.spin_conn[mu].commutator(&base) - self.frame_terms(mu, phi, idx)
    }

    fn frame_terms(
        &self,
        mu: usize,
        phi: &dyn Fn(&[usize]) -> ExactMatrix,
        idx: &[usize],
    ) -> ExactMatrix {
        let n = self.dim();
        let s = self.spinor_dim();
        let mut out = ExactMatrix::zeros(s, s);
        for slot in 0..idx.len() {
            for lam in 0..n {
                let g = self.frame_connection(mu, idx[slot], lam);
                if g.is_zero() {
                    continue;
                }
                let mut shifted = idx.to_vec();
                shifted[slot] = lam;
                out = out + phi(&shifted).scale(g);
            }
        }
        out
    }

    /// (D̂_μ γ)_ν.
    pub fn hat_d_gamma(&self, mu: usize, nu: usize) -> ExactMatrix {
        self.hat_d(mu, &|i: &[usize]| self.rep.gamma(i[0]).clone(), &[nu])
    }

    /// 𝒯_{μν} = (D̂_μγ)_ν − (D̂_νγ)_μ.
    pub fn torsion(&self, mu: usize, nu: usize) -> ExactMatrix {
        self.hat_d_gamma(mu, nu) - self.hat_d_gamma(nu, mu)
    }

    /// Second route: 𝒯_{μν} = ad^C_{𝒜_μ}γ_ν − ad^C_{𝒜_ν}γ_μ.
    pub fn torsion_via_difference(&self, mu: usize, nu: usize) -> ExactMatrix {
        self.rep.ad_c(&self.difference(mu), self.rep.gamma(nu))
            - self.rep.ad_c(&self.difference(nu), self.rep.gamma(mu))
    }

    pub fn torsion_routes_agree(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| (0..n).all(|b| self.torsion(a, b) == self.torsion_via_difference(a, b)))
    }

    /// Symmetric part (D̂_μγ)_ν + (D̂_νγ)_μ.
    pub fn hat_d_gamma_symmetric(&self, mu: usize, nu: usize) -> ExactMatrix {
        self.hat_d_gamma(mu, nu) + self.hat_d_gamma(nu, mu)
    }

    pub fn is_admissible(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| (a..n).all(|b| self.hat_d_gamma_symmetric(a, b).is_zero()))
    }

    /// Pair admissibility: the symmetric part of D̂γ kills every spinor in `k1`.
    pub fn is_pair_admissible(&self, k1: &[Vec<Scalar>]) -> bool {
        let n = self.dim();
        (0..n).all(|a| {
            (a..n).all(|b| {
                let sym = self.hat_d_gamma_symmetric(a, b);
                k1.iter().all(|xi| sym.apply(xi).iter().all(Zero::is_zero))
            })
        })
    }

    /// Constant D^C-parallel spinors: joint kernel of N_μ and R_{μν}^C.
    pub fn parallel_spinors(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut blocks: Vec<ExactMatrix> = (0..n).map(|mu| self.dual_connection(mu)).collect();
        for a in 0..n {
            for b in a + 1..n {
                blocks.push(self.rep.c_adjoint(self.curvature(a, b)));
            }
        }
        let stacked = ExactMatrix::vstack(&blocks).expect("equal widths");
        kernel_basis(&stacked)
    }

    /// Parallel spinors restricted to one chirality, when the representation has one.
    pub fn parallel_chiral_spinors(&self, positive: bool) -> Option<Vec<Vec<Scalar>>> {
        let chi = self.rep.chirality.as_ref()?;
        let n = self.dim();
        let sign = if positive {
            Scalar::from(1)
        } else {
            Scalar::from(-1)
        };
        let mut blocks: Vec<ExactMatrix> = (0..n).map(|mu| self.dual_connection(mu)).collect();
        for a in 0..n {
            for b in a + 1..n {
                blocks.push(self.rep.c_adjoint(self.curvature(a, b)));
            }
        }
        blocks.push(chi - &ExactMatrix::identity(self.spinor_dim()).scale(&sign));
        Some(kernel_basis(
            &ExactMatrix::vstack(&blocks).expect("equal widths"),
        ))
    }

    /// Levi-Civita curvature R⁰_{κμν}^σ of the frame connection.
    pub fn riemann(&self, k: usize, m: usize, nu: usize, s: usize) -> Scalar {
        let n = self.dim();
        let mut out = Scalar::zero();
        for l in 0..n {
            out += self.frame_connection(m, nu, l) * self.frame_connection(k, l, s);
            out -= &(self.frame_connection(k, nu, l) * self.frame_connection(m, l, s));
            out -= &(self.structure(k, m, l) * self.frame_connection(l, nu, s));
        }
        out
    }
}

/// Γ_{μνκ} = ½(c_{μνκ} − c_{νκμ} + c_{κμν}) with c_{μνκ} = c_{μν}^λ g_{λκ}.
fn koszul(rep: &CliffordRep, structure: &[Scalar]) -> Vec<Scalar> {
    let n = rep.dim();
    let lowered = |a: usize, b: usize, c: usize| &structure[idx3(n, a, b, c)] * &rep.metric_sign(c);
    let half = Scalar::ratio(1, 2);
    let mut out = vec![Scalar::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let low = &half * &(lowered(a, b, c) - lowered(b, c, a) + lowered(c, a, b));
                // raise the last index
                out[idx3(n, a, b, c)] = low * rep.metric_sign(c);
            }
        }
    }
    out
}

/// lc_μ = spin lift of the frame endomorphism (A_μ)^κ_ν = Γ_{μν}^κ.
fn levi_civita_lift(rep: &CliffordRep, frame_conn: &[Scalar]) -> Vec<ExactMatrix> {
    let n = rep.dim();
    (0..n)
        .map(|mu| {
            let a = ExactMatrix::from_fn(n, n, |k, nu| frame_conn[idx3(n, mu, nu, k)].clone());
            if a.is_zero() {
                ExactMatrix::zeros(rep.spinor_dim(), rep.spinor_dim())
            } else {
                rep.spin_lift(&a)
            }
        })
        .collect()
}

fn add_lists(
    a: &[ExactMatrix],
    b: &[ExactMatrix],
    n: usize,
    s: usize,
) -> Result<Vec<ExactMatrix>, BackgroundError> {
    if b.len() != n || b.iter().any(|m| m.rows() != s || m.cols() != s) {
        return Err(BackgroundError::ConnectionShape {
            expected: n,
            size: s,
            got: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x + y).collect())
}
