//! Right-combed nested brackets of D_{{·,·}} and ι(·), their counts and
//! their evaluation.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{d_pair, iota_map, strip_meta, SusyError};
use crate::clifford::binomial;
use crate::exactla::Scalar;
use crate::superfields::{Derivation, Engine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Leaf {
    /// D_{{η, ξ}}, consuming two spinors.
    DPair,
    /// ι(η), consuming one spinor.
    Iota,
}

/// [l₀, [l₁, [… , l_{k−1}]]] with arguments assigned left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrectionWord {
    pub leaves: Vec<Leaf>,
}

impl CorrectionWord {
    pub fn new(leaves: Vec<Leaf>) -> Self {
        CorrectionWord { leaves }
    }

    pub fn order(&self) -> usize {
        self.leaves.len()
    }

    pub fn arity(&self) -> usize {
        self.leaves
            .iter()
            .map(|l| if *l == Leaf::DPair { 2 } else { 1 })
            .sum()
    }

    /// j with arity 2k − j, i.e. the number of ι leaves.
    pub fn j_index(&self) -> usize {
        self.leaves.iter().filter(|l| **l == Leaf::Iota).count()
    }

    /// Mass dimension (2k − j)/2 of q^k times the word, doubled.
    pub fn doubled_mass(&self) -> i64 {
        self.arity() as i64
    }
}

impl fmt::Display for CorrectionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |l: &Leaf| if *l == Leaf::DPair { "D" } else { "ι" };
        let k = self.leaves.len();
        for (i, l) in self.leaves.iter().enumerate() {
            if i + 1 < k {
                write!(f, "[{},", name(l))?;
            } else {
                write!(f, "{}", name(l))?;
            }
        }
        for _ in 1..k {
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrectionBasis {
    pub k: usize,
    pub dim_s: usize,
    pub words: Vec<CorrectionWord>,
    /// a^k_j from the binomial formula, j = 0..=k.
    pub counts_formula: Vec<usize>,
    /// a^k_j counted from the generated words.
    pub counts_enumerated: Vec<usize>,
    pub total: usize,
    /// Types whose coefficients can be nonzero: j ≤ dim S.
    pub surviving: usize,
    /// Σ_{j=0}^{dim S} a^k_j.
    pub reduced_sum_to_dim_s: usize,
    /// Σ_{j=0}^{k − dim S} a^k_j.
    pub reduced_sum_to_k_minus_dim_s: usize,
}

/// a^k_j = C(k−3, j−3) + C(k−3, j−2) + C(k−3, j−1) + C(k−3, j) for k ≥ 3.
pub fn a_formula(k: usize, j: usize) -> usize {
    let c = |m: i64| {
        if m < 0 {
            0
        } else {
            binomial(k - 3, m as usize)
        }
    };
    let j = j as i64;
    c(j - 3) + c(j - 2) + c(j - 1) + c(j)
}

fn words_for(k: usize) -> Vec<CorrectionWord> {
    use Leaf::*;
    match k {
        2 => vec![
            CorrectionWord::new(vec![Iota, Iota]),
            CorrectionWord::new(vec![DPair, Iota]),
            CorrectionWord::new(vec![DPair, DPair]),
        ],
        3 => vec![
            CorrectionWord::new(vec![Iota, Iota, Iota]),
            CorrectionWord::new(vec![Iota, Iota, DPair]),
            CorrectionWord::new(vec![DPair, DPair, Iota]),
            CorrectionWord::new(vec![DPair, DPair, DPair]),
        ],
        _ => {
            let prev = words_for(k - 1);
            let mut out = Vec::with_capacity(2 * prev.len());
            for head in [Iota, DPair] {
                for w in &prev {
                    let mut leaves = vec![head];
                    leaves.extend(w.leaves.iter().copied());
                    out.push(CorrectionWord::new(leaves));
                }
            }
            out
        }
    }
}

pub fn generate_uk(k: usize, dim_s: usize) -> Result<CorrectionBasis, SusyError> {
    if k < 2 {
        return Err(SusyError::OrderTooSmall(k));
    }
    let words = words_for(k);
    let mut counts_enumerated = vec![0; k + 1];
    for w in &words {
        counts_enumerated[w.j_index()] += 1;
    }
    let counts_formula: Vec<usize> = if k >= 3 {
        (0..=k).map(|j| a_formula(k, j)).collect()
    } else {
        counts_enumerated.clone()
    };
    let partial = |upto: i64| -> usize {
        (0..=k as i64)
            .filter(|j| *j <= upto)
            .map(|j| counts_formula[j as usize])
            .sum()
    };
    Ok(CorrectionBasis {
        k,
        dim_s,
        total: words.len(),
        surviving: words.iter().filter(|w| w.j_index() <= dim_s).count(),
        reduced_sum_to_dim_s: partial(dim_s as i64),
        reduced_sum_to_k_minus_dim_s: partial(k as i64 - dim_s as i64),
        words,
        counts_formula,
        counts_enumerated,
    })
}

/// Evaluate the nested bracket of a word at the given spinors.
pub fn expand_correction(
    engine: &Engine,
    word: &CorrectionWord,
    args: &[Vec<Scalar>],
) -> Result<Derivation, SusyError> {
    if args.len() != word.arity() {
        return Err(SusyError::ArityMismatch {
            expected: word.arity(),
            got: args.len(),
        });
    }
    let bg = engine.bg;
    let mut leaves = Vec::with_capacity(word.order());
    let mut pos = 0;
    for l in &word.leaves {
        match l {
            Leaf::DPair => {
                leaves.push(d_pair(bg, &args[pos], &args[pos + 1]));
                pos += 2;
            }
            Leaf::Iota => {
                leaves.push(iota_map(bg, &args[pos]));
                pos += 1;
            }
        }
    }
    let mut acc = leaves.pop().expect("k >= 1");
    while let Some(l) = leaves.pop() {
        acc = strip_meta(&engine.bracket(&l, &acc)?);
    }
    Ok(acc)
}

/// All tuples over `basis` of length `len`.
pub fn tuples(basis: &[Vec<Scalar>], len: usize) -> Vec<Vec<Vec<Scalar>>> {
    let mut out: Vec<Vec<Vec<Scalar>>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * basis.len());
        for t in &out {
            for b in basis {
                let mut u = t.clone();
                u.push(b.clone());
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Images of the k = 2 words over all argument tuples from `k1`.
pub fn order_two_span(engine: &Engine, k1: &[Vec<Scalar>]) -> Result<Vec<Derivation>, SusyError> {
    let mut out = Vec::new();
    if k1.is_empty() {
        return Ok(out);
    }
    for w in words_for(2) {
        for args in tuples(k1, w.arity()) {
            let d = expand_correction(engine, &w, &args)?;
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Count word types that evaluate to something nonzero on random spinors.
pub fn enumerate_nonvanishing<R: Rng>(
    engine: &Engine,
    basis: &CorrectionBasis,
    rng: &mut R,
    trials: usize,
) -> Result<usize, SusyError> {
    let s = engine.bg.spinor_dim();
    let mut count = 0;
    for w in &basis.words {
        for _ in 0..trials {
            let args: Vec<Vec<Scalar>> = (0..w.arity())
                .map(|_| {
                    (0..s)
                        .map(|_| Scalar::from(rng.gen_range(-3i64..=3)))
                        .collect()
                })
                .collect();
            if !expand_correction(engine, w, &args)?.is_zero() {
                count += 1;
                break;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_three_types() {
        let b = generate_uk(3, 8).unwrap();
        assert_eq!(b.total, 4);
        let arities: Vec<usize> = b.words.iter().map(CorrectionWord::arity).collect();
        assert_eq!(arities, vec![3, 4, 5, 6]);
        assert_eq!(b.counts_formula, vec![1, 1, 1, 1]);
        assert_eq!(b.counts_enumerated, b.counts_formula);
    }

    #[test]
    fn order_four_counts() {
        let b = generate_uk(4, 8).unwrap();
        assert_eq!(b.counts_formula, vec![1, 2, 2, 2, 1]);
        assert_eq!(b.counts_enumerated, b.counts_formula);
    }

    #[test]
    fn totals_are_powers_of_two() {
        for k in 3..=8 {
            let b = generate_uk(k, 16).unwrap();
            assert_eq!(b.counts_formula.iter().sum::<usize>(), 1 << (k - 1));
            assert_eq!(b.counts_enumerated, b.counts_formula);
        }
    }

    #[test]
    fn display() {
        let b = generate_uk(3, 8).unwrap();
        assert_eq!(b.words[1].to_string(), "[ι,[ι,D]]");
        assert!(generate_uk(1, 2).is_err());
    }
}
