//! JSON rows and LaTeX text for computed objects.

use serde::{Deserialize, Serialize};

use crate::exactla::Scalar;
use crate::superfields::{Derivation, Slot};
use crate::susy::words::generate_uk;

/// One monomial of a derivation: q^q x^monomial e_{form} ⊗ slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRow {
    pub q: u32,
    /// `D<μ>` for frame directions, `e<b>` for spinor generators.
    pub slot: String,
    /// Exponent of each coordinate; empty for constant coefficients.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub monomial: Vec<u64>,
    /// Increasing spinor indices of the wedge word.
    pub form: Vec<usize>,
    pub coefficient: Scalar,
}

fn slot_name(slot: Slot) -> String {
    match slot {
        Slot::Vector(mu) => format!("D{mu}"),
        Slot::Spinor(b) => format!("e{b}"),
    }
}

fn word_indices(word: u64) -> Vec<usize> {
    (0..64).filter(|i| word & (1u64 << i) != 0).collect()
}

pub fn derivation_rows(d: &Derivation, dim: usize) -> Vec<TermRow> {
    let mut out = Vec::new();
    for (q, slot, coeff) in d.terms() {
        for (m, form) in coeff.parts() {
            let monomial: Vec<u64> = if m.total_degree() == 0 {
                Vec::new()
            } else {
                (0..dim).map(|mu| m.exponent(mu)).collect()
            };
            for (word, c) in form.terms() {
                out.push(TermRow {
                    q,
                    slot: slot_name(slot),
                    monomial: monomial.clone(),
                    form: word_indices(word),
                    coefficient: c.clone(),
                });
            }
        }
    }
    out
}

fn latex_scalar(c: &Scalar) -> String {
    let s = c.to_string().replace("*i", "i");
    // parenthesize a + bi so it reads as one factor
    if s.len() > 1 && s[1..].contains(['+', '-']) {
        format!("({s})")
    } else {
        s
    }
}

fn latex_row(row: &TermRow) -> String {
    let mut parts = Vec::new();
    if row.q > 0 {
        parts.push(if row.q == 1 {
            "q".to_string()
        } else {
            format!("q^{{{}}}", row.q)
        });
    }
    for (mu, e) in row.monomial.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x^{{{mu}}}")),
            _ => parts.push(format!("(x^{{{mu}}})^{{{e}}}")),
        }
    }
    if !row.form.is_empty() {
        parts.push(
            row.form
                .iter()
                .map(|i| format!("e_{{{i}}}"))
                .collect::<Vec<_>>()
                .join("\\wedge "),
        );
    }
    let slot = match row.slot.split_at(1) {
        ("D", mu) => format!("D_{{{mu}}}"),
        (_, b) => format!("\\partial_{{e_{{{b}}}}}"),
    };
    format!(
        "{}\\,{}\\otimes {}",
        latex_scalar(&row.coefficient),
        parts.join("\\,"),
        slot
    )
}

/// Sum of monomials, or `0` for the zero derivation.
pub fn derivation_latex(d: &Derivation, dim: usize) -> String {
    let rows = derivation_rows(d, dim);
    if rows.is_empty() {
        return "0".to_string();
    }
    rows.iter().map(latex_row).collect::<Vec<_>>().join("\n+ ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ATableRow {
    pub k: usize,
    /// a^k_j for j = 0..=k.
    pub counts: Vec<usize>,
    pub total: usize,
}

/// Counting rows for k = 3..=8.
pub fn a_table() -> Vec<ATableRow> {
    (3..=8)
        .map(|k| {
            let basis = generate_uk(k, 2 * k).expect("k ≥ 2");
            ATableRow {
                k,
                total: basis.counts_formula.iter().sum(),
                counts: basis.counts_formula,
            }
        })
        .collect()
}

pub fn a_table_latex() -> String {
    let rows = a_table();
    let width = rows.iter().map(|r| r.counts.len()).max().unwrap_or(0);
    let mut out = format!("\\begin{{tabular}}{{c|{}|c}}\n", "c".repeat(width));
    out.push('k');
    for j in 0..width {
        out.push_str(&format!(" & $a_{{{j}}}$"));
    }
    out.push_str(" & total \\\\\n\\hline\n");
    for r in rows {
        out.push_str(&r.k.to_string());
        for j in 0..width {
            match r.counts.get(j) {
                Some(c) => out.push_str(&format!(" & {c}")),
                None => out.push_str(" &"),
            }
        }
        out.push_str(&format!(" & {} \\\\\n", r.total));
    }
    out.push_str("\\end{tabular}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superfields::{PolySection, SuperForm};

    #[test]
    fn zero_is_zero() {
        assert_eq!(derivation_latex(&Derivation::zero(), 3), "0");
    }

    #[test]
    fn single_term() {
        let d = Derivation::term(
            1,
            Slot::Vector(2),
            PolySection::constant(SuperForm::monomial(0b11, Scalar::from(-2))),
        );
        assert_eq!(
            derivation_latex(&d, 3),
            "-2\\,q\\,e_{0}\\wedge e_{1}\\otimes D_{2}"
        );
        let rows = derivation_rows(&d, 3);
        assert_eq!(rows[0].form, vec![0, 1]);
        assert_eq!(rows[0].slot, "D2");
    }

    #[test]
    fn pascal_rows() {
        let t = a_table();
        assert_eq!(t[0].counts, vec![1, 1, 1, 1]);
        assert_eq!(t[1].counts, vec![1, 2, 2, 2, 1]);
        assert!(t.iter().all(|r| r.total == 1 << (r.k - 1)));
    }
}
