//! The standard G₂ three-form in seven dimensions and its algebra.
//!
//! ω is fixed by the positively oriented Fano triples below and the Hodge dual
//! uses ε₁₂₃₄₅₆₇ = +1 with the Euclidean metric.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::clifford::{build_rep_d7, CliffordRep};
use crate::exactla::{rank, ExactMatrix, Scalar};

/// One-based triples (a, b, c) with ω_{abc} = +1.
pub const FANO_TRIPLES: [[usize; 3]; 7] = [
    [1, 2, 3],
    [1, 4, 5],
    [1, 7, 6],
    [2, 4, 6],
    [2, 5, 7],
    [3, 4, 7],
    [3, 6, 5],
];

const N: usize = 7;

fn perm_sign(idx: &[usize]) -> i8 {
    let mut sign = 1;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            match idx[a].cmp(&idx[b]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

/// Dense rank-4 tensor on a seven-dimensional index space.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tensor4(Vec<Scalar>);

impl std::fmt::Debug for Tensor4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let nonzero = self.0.iter().filter(|x| !x.is_zero()).count();
        write!(f, "Tensor4({nonzero} nonzero entries)")
    }
}

impl Tensor4 {
    pub fn zeros() -> Self {
        Tensor4(vec![Scalar::zero(); N * N * N * N])
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> Scalar) -> Self {
        let mut t = Self::zeros();
        for a in 0..N {
            for b in 0..N {
                for c in 0..N {
                    for d in 0..N {
                        t.0[((a * N + b) * N + c) * N + d] = f(a, b, c, d);
                    }
                }
            }
        }
        t
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> &Scalar {
        &self.0[((a * N + b) * N + c) * N + d]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Antisymmetrize both index pairs with unit weight.
    pub fn pair_antisymmetrize(&self) -> Self {
        let q = Scalar::ratio(1, 4);
        Self::from_fn(|a, b, c, d| {
            &q * &(self.get(a, b, c, d) - self.get(b, a, c, d) - self.get(a, b, d, c)
                + self.get(b, a, d, c))
        })
    }

    /// Swap the two index pairs: (ab)(cd) → (cd)(ab).
    pub fn pair_swap(&self) -> Self {
        Self::from_fn(|a, b, c, d| self.get(c, d, a, b).clone())
    }

    /// Algebraic Bianchi defect R_{abcd} + R_{bcad} + R_{cabd}.
    pub fn first_bianchi(&self) -> Self {
        Self::from_fn(|a, b, c, d| {
            self.get(a, b, c, d) + self.get(b, c, a, d) + self.get(c, a, b, d)
        })
    }
}

#[derive(Debug, Clone)]
pub struct G2Structure {
    omega: Vec<i8>,
    star: Vec<i8>,
}

impl G2Structure {
    pub fn standard() -> Self {
        let mut omega = vec![0i8; N * N * N];
        for t in FANO_TRIPLES {
            let t = [t[0] - 1, t[1] - 1, t[2] - 1];
            for p in permutations3() {
                let idx = [t[p[0]], t[p[1]], t[p[2]]];
                omega[(idx[0] * N + idx[1]) * N + idx[2]] = perm_sign(&p);
            }
        }
        // *ω_{abcd} = (1/3!) ε_{abcdefg} ω_{efg}; only one ordering of the complement contributes up to sign
        let mut star = vec![0i8; N * N * N * N];
        for a in 0..N {
            for b in 0..N {
                for c in 0..N {
                    for d in 0..N {
                        let head = [a, b, c, d];
                        if perm_sign(&head) == 0 {
                            continue;
                        }
                        let rest: Vec<usize> = (0..N).filter(|x| !head.contains(x)).collect();
                        let full = [a, b, c, d, rest[0], rest[1], rest[2]];
                        let eps = perm_sign(&full);
                        star[((a * N + b) * N + c) * N + d] =
                            eps * omega[(rest[0] * N + rest[1]) * N + rest[2]];
                    }
                }
            }
        }
        G2Structure { omega, star }
    }

    pub fn omega(&self, a: usize, b: usize, c: usize) -> i64 {
        i64::from(self.omega[(a * N + b) * N + c])
    }

    pub fn star_omega(&self, a: usize, b: usize, c: usize, d: usize) -> i64 {
        i64::from(self.star[((a * N + b) * N + c) * N + d])
    }

    pub fn verify_traces(&self) -> TraceReport {
        let delta = |a: usize, b: usize| i64::from(a == b);
        let omega_omega = all4(|m, n, k, l| {
            let lhs: i64 = (0..N)
                .map(|r| self.omega(m, n, r) * self.omega(k, l, r))
                .sum();
            lhs == delta(m, k) * delta(n, l)
                - delta(n, k) * delta(m, l)
                - self.star_omega(m, n, k, l)
        });
        let omega_omega_double = (0..N).all(|m| {
            (0..N).all(|r| {
                let lhs: i64 = (0..N)
                    .flat_map(|n| (0..N).map(move |k| (n, k)))
                    .map(|(n, k)| self.omega(m, n, k) * self.omega(r, n, k))
                    .sum();
                lhs == 6 * delta(m, r)
            })
        });
        // *ω_{νκρλ} ω^{μσλ} = 6 δ^{[μ}_{[ν} ω^{σ]}_{κρ]} with unit-weight antisymmetrizers:
        // the right side expands to (1/2)(1/6)·6 Σ over 3! orderings of νκρ and the μσ swap.
        let star_omega_omega = (0..N).all(|m| {
            (0..N).all(|s| {
                all3(|n, k, r| {
                    let lhs: i64 = (0..N)
                        .map(|l| self.star_omega(n, k, r, l) * self.omega(m, s, l))
                        .sum();
                    let lower = [n, k, r];
                    let mut rhs2 = 0; // twice the right side
                    for p in permutations3() {
                        let sgn = i64::from(perm_sign(&p));
                        let (x, y, z) = (lower[p[0]], lower[p[1]], lower[p[2]]);
                        rhs2 += sgn
                            * (delta(m, x) * self.omega(s, y, z)
                                - delta(s, x) * self.omega(m, y, z));
                    }
                    2 * lhs == rhs2
                })
            })
        });
        let star_omega_contract = (0..N).all(|m| {
            all3(|r, s, _| {
                let lhs: i64 = (0..N)
                    .flat_map(|n| (0..N).map(move |k| (n, k)))
                    .map(|(n, k)| self.star_omega(n, k, r, s) * self.omega(m, n, k))
                    .sum();
                lhs == -4 * self.omega(m, r, s)
            })
        });
        TraceReport {
            omega_omega,
            omega_omega_double,
            star_omega_omega,
            star_omega_contract,
        }
    }

    /// 2-form projectors Π₊ = (2/3)(I + ¼ *ω) and Π₋ = (1/3)(I − ½ *ω) as 49x49
    /// matrices on A_{μν}, where I = ½(δδ − δδ) is the antisymmetrizer.
    pub fn projector(&self, plus: bool) -> ExactMatrix {
        let (outer, inner) = if plus {
            (Scalar::ratio(2, 3), Scalar::ratio(1, 4))
        } else {
            (Scalar::ratio(1, 3), Scalar::ratio(-1, 2))
        };
        let half = Scalar::ratio(1, 2);
        ExactMatrix::from_fn(N * N, N * N, |row, col| {
            let (m, n, k, l) = (row / N, row % N, col / N, col % N);
            let mut id = Scalar::zero();
            if m == k && n == l {
                id += &half;
            }
            if m == l && n == k {
                id -= &half;
            }
            &outer * &(id + &inner * &Scalar::from(self.star_omega(m, n, k, l)))
        })
    }

    /// Both pairs of R projected onto 𝔤₂ ⊂ Λ².
    pub fn g2_project_curvature(&self, r: &Tensor4) -> Tensor4 {
        let p = self.projector(true);
        let apply_first = |t: &Tensor4| {
            Tensor4::from_fn(|a, b, c, d| {
                (0..N * N)
                    .filter(|&col| !p.get(a * N + b, col).is_zero())
                    .map(|col| p.get(a * N + b, col) * t.get(col / N, col % N, c, d))
                    .sum()
            })
        };
        let first = apply_first(r);
        apply_first(&first.pair_swap()).pair_swap()
    }

    /// Project only the first index pair.
    pub fn project_first_pair(&self, r: &Tensor4, plus: bool) -> Tensor4 {
        let p = self.projector(plus);
        Tensor4::from_fn(|a, b, c, d| {
            (0..N * N)
                .filter(|&col| !p.get(a * N + b, col).is_zero())
                .map(|col| p.get(a * N + b, col) * r.get(col / N, col % N, c, d))
                .sum()
        })
    }

    /// R_{μνκλ} ω^{κλσ} = 0.
    pub fn second_pair_in_g2(&self, r: &Tensor4) -> bool {
        all3(|m, n, s| {
            (0..N)
                .flat_map(|k| (0..N).map(move |l| (k, l)))
                .map(|(k, l)| r.get(m, n, k, l) * &Scalar::from(self.omega(k, l, s)))
                .sum::<Scalar>()
                .is_zero()
        })
    }

    /// 2 R_{μνκλ} = *ω_{μνρσ} R_{ρσκλ}.
    pub fn first_pair_in_g2(&self, r: &Tensor4) -> bool {
        (0..N).all(|k| {
            (0..N).all(|l| {
                (0..N).all(|m| {
                    (0..N).all(|n| {
                        let rhs: Scalar = (0..N)
                            .flat_map(|a| (0..N).map(move |b| (a, b)))
                            .map(|(a, b)| {
                                &Scalar::from(self.star_omega(m, n, a, b)) * r.get(a, b, k, l)
                            })
                            .sum();
                        Scalar::from(2) * r.get(m, n, k, l) == rhs
                    })
                })
            })
        })
    }

    /// Evaluate both sides of the curvature-gamma contraction on ξ:
    /// left R_{μνκλ} γ^{κλ} ξ, and 4 ξ^θ R_{μνθκ} e^κ (index order that holds
    /// for R in 𝔤₂ on the contracted pair) and 4 ξ^θ R_{θμνκ} e^κ.
    pub fn rgamma_sides(
        &self,
        rep: &CliffordRep,
        r: &Tensor4,
        xi: &[Scalar],
        mu: usize,
        nu: usize,
    ) -> RGammaSides {
        let mut lhs = vec![Scalar::zero(); 8];
        for k in 0..N {
            for l in 0..N {
                let c = r.get(mu, nu, k, l);
                if c.is_zero() {
                    continue;
                }
                for (o, v) in lhs.iter_mut().zip(rep.gamma2_upper(k, l).apply(xi)) {
                    *o += c * &v;
                }
            }
        }
        let four = Scalar::from(4);
        let mut inner = vec![Scalar::zero(); 8];
        let mut outer = vec![Scalar::zero(); 8];
        for k in 0..N {
            for (t, x) in xi.iter().enumerate().take(N) {
                inner[k] += &four * &(x * r.get(mu, nu, t, k));
                outer[k] += &four * &(x * r.get(t, mu, nu, k));
            }
        }
        RGammaSides {
            lhs,
            rhs: inner,
            rhs_as_printed: outer,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RGammaSides {
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
    pub rhs_as_printed: Vec<Scalar>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub omega_omega: bool,
    pub omega_omega_double: bool,
    pub star_omega_omega: bool,
    pub star_omega_contract: bool,
}

impl TraceReport {
    pub fn all(&self) -> bool {
        self.omega_omega
            && self.omega_omega_double
            && self.star_omega_omega
            && self.star_omega_contract
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectorReport {
    pub plus_idempotent: bool,
    pub minus_idempotent: bool,
    pub complementary: bool,
    pub rank_plus: usize,
    pub rank_minus: usize,
    /// −4Π₊ + 2Π₋ equals −2I − *ω, the decomposition of γ_{μν}γ^{κλ}-type contractions.
    pub gamma_decomposition_matches: bool,
}

impl G2Structure {
    pub fn verify_projectors(&self) -> ProjectorReport {
        let p = self.projector(true);
        let m = self.projector(false);
        let id = ExactMatrix::from_fn(N * N, N * N, |row, col| {
            let (a, b, c, d) = (row / N, row % N, col / N, col % N);
            Scalar::ratio(i64::from(a == c && b == d) - i64::from(a == d && b == c), 2)
        });
        let star = ExactMatrix::from_fn(N * N, N * N, |row, col| {
            Scalar::from(self.star_omega(row / N, row % N, col / N, col % N))
        });
        let combo = p.scale(&Scalar::from(-4)) + m.scale(&Scalar::from(2));
        ProjectorReport {
            plus_idempotent: &p * &p == p,
            minus_idempotent: &m * &m == m,
            complementary: &p + &m == id,
            rank_plus: rank(&p),
            rank_minus: rank(&m),
            gamma_decomposition_matches: combo == id.scale(&Scalar::from(-2)) - star,
        }
    }

    /// Residuals of γ_μγ_ν e₈ = −δ_{μν} e₈ − ω_{μνκ} e_κ in an eight-dimensional
    /// representation; empty when the representation is adapted to this ω.
    pub fn adapted_rep_residuals(&self, rep: &CliffordRep) -> Vec<(usize, usize, Vec<Scalar>)> {
        let mut out = Vec::new();
        if rep.dim() != N || rep.spinor_dim() != N + 1 {
            return out;
        }
        let e8 = rep.basis_spinor(N);
        for mu in 0..N {
            for nu in 0..N {
                let mut v = rep.gamma(mu).apply(&rep.gamma(nu).apply(&e8));
                if mu == nu {
                    v[N] += Scalar::one();
                }
                for (k, x) in v.iter_mut().enumerate().take(N) {
                    *x += Scalar::from(self.omega(mu, nu, k));
                }
                if v.iter().any(|x| !x.is_zero()) {
                    out.push((mu, nu, v));
                }
            }
        }
        out
    }

    pub fn rep(&self) -> CliffordRep {
        build_rep_d7()
    }
}

fn permutations3() -> [[usize; 3]; 6] {
    [
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
    ]
}

fn all3(f: impl Fn(usize, usize, usize) -> bool) -> bool {
    (0..N).all(|a| (0..N).all(|b| (0..N).all(|c| f(a, b, c))))
}

fn all4(f: impl Fn(usize, usize, usize, usize) -> bool) -> bool {
    (0..N).all(|a| all3(|b, c, d| f(a, b, c, d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_is_totally_skew() {
        let g2 = G2Structure::standard();
        assert!(all3(|a, b, c| g2.omega(a, b, c) == -g2.omega(b, a, c)
            && g2.omega(a, b, c) == g2.omega(b, c, a)));
        assert_eq!(g2.omega(0, 6, 5), 1);
        assert_eq!(g2.omega(0, 5, 6), -1);
    }

    #[test]
    fn traces_hold() {
        let report = G2Structure::standard().verify_traces();
        assert!(report.all(), "{report:?}");
    }
}
