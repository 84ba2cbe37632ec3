//! Run reports and their json, text and LaTeX renderings. Everything except
//! `timings_ms` is a function of the scenario, the seed and the suite list.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;
use crate::suites::{SuiteId, SuiteReport};

/// Conventions every report is computed under.
pub const CONVENTIONS: [&str; 8] = [
    "scalars are exact elements of Q(i)",
    "gamma_mu gamma_nu + gamma_nu gamma_mu = 2 g_mu_nu, diagonal metric carried by the representation",
    "C(eta, xi) = eta^T C xi, C-adjoint Phi^C = C^-1 Phi^T C",
    "d7: (gamma_mu)_{nu kappa} = omega_{mu nu kappa}, gamma_mu e_8 = e_mu, metric -delta, C = 1",
    "d10 spinor index = 16 chirality + 2 n + alpha",
    "brackets are expanded in q and truncated at the configured q_max",
    "corrected closed forms replace printed ones whose expansion disagrees with the engine",
    "seeded draws use ChaCha8 so a seed reproduces the same backgrounds on every platform",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub q_max: u32,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
    pub conventions: Vec<String>,
    pub timings_ms: BTreeMap<SuiteId, u128>,
}

impl Report {
    pub fn new(
        scenario: &str,
        seed: u64,
        q_max: u32,
        runs: Vec<(SuiteReport, std::time::Duration)>,
    ) -> Self {
        let mut timings_ms = BTreeMap::new();
        let mut suites = Vec::with_capacity(runs.len());
        for (r, t) in runs {
            timings_ms.insert(r.suite, t.as_millis());
            suites.push(r);
        }
        Report {
            scenario: scenario.to_string(),
            seed,
            q_max,
            passed: suites.iter().all(|s| s.passed),
            suites,
            conventions: CONVENTIONS.iter().map(|s| s.to_string()).collect(),
            timings_ms,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                serde_json::to_string_pretty(self).expect("report serializes") + "\n"
            }
            OutputFormat::Text => self.text(),
            OutputFormat::Latex => self.latex(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "scenario {} (seed {}, q_max {}): {verdict}",
            self.scenario, self.seed, self.q_max
        );
        for s in &self.suites {
            let ok = s.checks.iter().filter(|c| c.passed).count();
            let ms = self.timings_ms.get(&s.suite).copied().unwrap_or(0);
            let _ = writeln!(
                out,
                "  {:<18} {} {ok}/{} checks  {ms} ms",
                s.suite.as_str(),
                if s.passed { "pass" } else { "FAIL" },
                s.checks.len()
            );
            for c in s.failures() {
                let _ = writeln!(out, "    failed: {}", c.identity);
                for line in &c.residual {
                    let _ = writeln!(out, "      {line}");
                }
            }
            for n in &s.notes {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        out
    }

    fn latex(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "% scenario {}, seed {}, q_max {}",
            self.scenario, self.seed, self.q_max
        );
        out.push_str("\\begin{longtable}{l l l}\n\\textbf{suite} & \\textbf{identity} & \\textbf{result} \\\\\n\\hline\n");
        for s in &self.suites {
            for c in &s.checks {
                let _ = writeln!(
                    out,
                    "{} & {} & {} \\\\",
                    latex_escape(s.suite.as_str()),
                    latex_escape(&c.identity),
                    if c.passed { "pass" } else { "fail" }
                );
            }
        }
        out.push_str("\\end{longtable}\n");
        out
    }
}

fn latex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '_' | '&' | '%' | '#' | '$' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            '\\' => out.push_str("\\textbackslash{}"),
            _ => out.push(ch),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes() {
        assert_eq!(latex_escape("a_b & 50%"), "a\\_b \\& 50\\%");
    }
}
