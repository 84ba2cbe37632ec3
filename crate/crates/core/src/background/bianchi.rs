use serde::{Deserialize, Serialize};

use super::Background;
use crate::exactla::{ExactMatrix, Scalar};

/// Weight of the two-index antisymmetrizer in the Levi-Civita curvature formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaWeight {
    /// X_{[κμ]} = ½(X_{κμ} − X_{μκ}).
    Unit,
    /// X_{[κμ]} = X_{κμ} − X_{μκ}.
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BianchiReport {
    /// D̂_[κ𝒯_{μν]} = ad^C(R_[κμ})γ_{ν]}.
    pub torsion: bool,
    /// D̂_[κ(ad^C_Rγ)_{μνρ]} = ad^C(R_[κμ})𝒯_{νρ]}.
    pub ad_curvature: bool,
    /// D_[κR_{μν]} = 0.
    pub curvature: bool,
    /// For admissible backgrounds: which antisymmetrizer weight makes
    /// R⁰_{κμνλ}γ^λ = ad^C_{R_{κμ}}γ_ν − D̂_[κ𝒯_{μ]ν} hold, if any.
    pub levi_civita_curvature: Option<Option<LemmaWeight>>,
}

impl BianchiReport {
    pub fn all_hold(&self) -> bool {
        self.torsion
            && self.ad_curvature
            && self.curvature
            && !matches!(self.levi_civita_curvature, Some(None))
    }
}

fn perms(k: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, k: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, k, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], k, &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..k)
                .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
                .filter(|&(a, b)| p[a] > p[b])
                .count();
            (p, inversions % 2 == 1)
        })
        .collect()
}

/// Σ_σ sign(σ) f(idx∘σ) vanishes.
fn antisym_vanishes(idx: &[usize], f: &dyn Fn(&[usize]) -> ExactMatrix) -> bool {
    let mut acc: Option<ExactMatrix> = None;
    for (p, odd) in perms(idx.len()) {
        let permuted: Vec<usize> = p.iter().map(|&i| idx[i]).collect();
        let v = f(&permuted);
        let v = if odd { -v } else { v };
        acc = Some(match acc {
            Some(a) => a + v,
            None => v,
        });
    }
    acc.is_none_or(|m| m.is_zero())
}

fn increasing(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::clifford::multi_indices(n, k)
}

impl Background {
    pub fn bianchi_check(&self) -> BianchiReport {
        let n = self.dim();
        let rep = &self.rep;
        let torsion: Vec<ExactMatrix> = (0..n * n).map(|k| self.torsion(k / n, k % n)).collect();
        let tor = |i: &[usize]| torsion[i[0] * n + i[1]].clone();
        let gamma = |i: &[usize]| rep.gamma(i[0]).clone();
        let curv = |i: &[usize]| self.curvature(i[0], i[1]).clone();
        let ad_r_gamma: Vec<ExactMatrix> = (0..n * n * n)
            .map(|k| rep.ad_c(self.curvature(k / (n * n), (k / n) % n), rep.gamma(k % n)))
            .collect();
        let adrg = |i: &[usize]| ad_r_gamma[(i[0] * n + i[1]) * n + i[2]].clone();

        let torsion_ok = increasing(n, 3).iter().all(|idx| {
            antisym_vanishes(idx, &|i| {
                self.hat_d(i[0], &tor, &i[1..]) - rep.ad_c(&curv(&i[..2]), &gamma(&i[2..]))
            })
        });
        let ad_curvature_ok = increasing(n, 4).iter().all(|idx| {
            antisym_vanishes(idx, &|i| {
                self.hat_d(i[0], &adrg, &i[1..]) - rep.ad_c(&curv(&i[..2]), &tor(&i[2..]))
            })
        });
        let curvature_ok = increasing(n, 3)
            .iter()
            .all(|idx| antisym_vanishes(idx, &|i| self.d_endo(i[0], &curv, &i[1..])));

        let levi_civita_curvature = self.is_admissible().then(|| {
            let holds = |w: &Scalar| {
                (0..n).all(|k| {
                    (0..n).all(|m| {
                        (0..n).all(|nu| {
                            let lhs = (0..n).fold(
                                ExactMatrix::zeros(self.spinor_dim(), self.spinor_dim()),
                                |acc, s| acc + rep.gamma(s).scale(&self.riemann(k, m, nu, s)),
                            );
                            let dt = self.hat_d(k, &tor, &[m, nu]) - self.hat_d(m, &tor, &[k, nu]);
                            let rhs = rep.ad_c(self.curvature(k, m), rep.gamma(nu)) - dt.scale(w);
                            lhs == rhs
                        })
                    })
                })
            };
            if holds(&Scalar::ratio(1, 2)) {
                Some(LemmaWeight::Unit)
            } else if holds(&Scalar::from(1)) {
                Some(LemmaWeight::Plain)
            } else {
                None
            }
        });

        BianchiReport {
            torsion: torsion_ok,
            ad_curvature: ad_curvature_ok,
            curvature: curvature_ok,
            levi_civita_curvature,
        }
    }
}
