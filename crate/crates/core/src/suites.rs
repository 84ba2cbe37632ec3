//! Named verification suites shared by the command line tool and the tests.
//! A failing check carries the identity it tests, the offending indices and
//! the nonzero residual entries.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{build_rep_d10, build_rep_d3, build_rep_d7, CliffordRep, RepLabel};
use crate::exactla::{ExactMatrix, Scalar};
use crate::g2::G2Structure;
use crate::grading::{
    check_compatibility, filtration_identity_failures, mass_table_rows, mass_value_set,
    random_homogeneous, term_degrees, FiltrationFamily, SlotKind, TermDegree,
};
use crate::scenarios::Scenario;
use crate::superfields::{Derivation, Engine, Monomial, PolySection, Slot, SuperForm};
use crate::susy::g2h3::{example_g2h3_checks, random_g2_curvature, G2H3Params, G2H3Report};
use crate::susy::tagged::{
    classify_normal_form, closed_form, evaluate_closed_form, CLOSED_FORM_NAMES, CORRECTED_FORMS,
};
use crate::susy::words::{enumerate_nonvanishing, expand_correction, generate_uk};
use crate::susy::{compare_oo_bracket, strip_meta, verify_structure, SusyStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    CliffordAudit,
    G2Audit,
    FiltrationAudit,
    BackgroundAudit,
    BracketAudit,
    SusyAudit,
    CorrectionsAudit,
    ExampleG2h3,
}

impl SuiteId {
    pub const ALL: [SuiteId; 8] = [
        SuiteId::CliffordAudit,
        SuiteId::G2Audit,
        SuiteId::FiltrationAudit,
        SuiteId::BackgroundAudit,
        SuiteId::BracketAudit,
        SuiteId::SusyAudit,
        SuiteId::CorrectionsAudit,
        SuiteId::ExampleG2h3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::CliffordAudit => "clifford-audit",
            SuiteId::G2Audit => "g2-audit",
            SuiteId::FiltrationAudit => "filtration-audit",
            SuiteId::BackgroundAudit => "background-audit",
            SuiteId::BracketAudit => "bracket-audit",
            SuiteId::SusyAudit => "susy-audit",
            SuiteId::CorrectionsAudit => "corrections-audit",
            SuiteId::ExampleG2h3 => "example-g2h3",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| format!("unknown suite {s}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub identity: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residual: Vec<String>,
}

impl Check {
    pub fn holds(identity: impl Into<String>, passed: bool) -> Self {
        Check {
            identity: identity.into(),
            passed,
            residual: Vec::new(),
        }
    }

    /// Passes iff the residual listing is empty.
    pub fn residual(identity: impl Into<String>, residual: Vec<String>) -> Self {
        Check {
            identity: identity.into(),
            passed: residual.is_empty(),
            residual,
        }
    }

    fn detail(identity: impl Into<String>, passed: bool, detail: String) -> Self {
        Check {
            identity: identity.into(),
            passed,
            residual: if passed { Vec::new() } else { vec![detail] },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: SuiteId,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Findings that do not decide the outcome: printed forms that differ
    /// from the computation, vacuous draws, open counting comparisons.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: SuiteId) -> Self {
        SuiteReport {
            suite,
            passed: true,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    fn error(&mut self, context: &str, err: impl fmt::Display) {
        self.push(Check::detail(
            context.to_string(),
            false,
            format!("error: {err}"),
        ));
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, identity: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.identity == identity)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub q_max: u32,
    pub jacobi_triples: usize,
    pub compatibility_samples: usize,
    /// Random 𝔤₂-projected tensors for the curvature contraction.
    pub curvature_draws: usize,
    /// Probe caps for the operator reconstruction of brackets.
    pub probe_form_cap: usize,
    pub probe_poly_cap: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            q_max: 2,
            jacobi_triples: 100,
            compatibility_samples: 72,
            curvature_draws: 20,
            probe_form_cap: 4,
            probe_poly_cap: 2,
        }
    }
}

const RESIDUAL_LIMIT: usize = 12;

/// Nonzero entries of a residual matrix, at most [`RESIDUAL_LIMIT`] of them.
pub fn matrix_residual(label: &str, m: &ExactMatrix) -> Vec<String> {
    let mut out = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m.get(r, c).is_zero() && out.len() < RESIDUAL_LIMIT {
                out.push(format!("{label}[{r},{c}] = {}", m.get(r, c)));
            }
        }
    }
    out
}

fn vector_residual(label: &str, v: &[Scalar]) -> Vec<String> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .take(RESIDUAL_LIMIT)
        .map(|(k, x)| format!("{label}[{k}] = {x}"))
        .collect()
}

fn capped(mut lines: Vec<String>) -> Vec<String> {
    if lines.len() > RESIDUAL_LIMIT {
        let extra = lines.len() - RESIDUAL_LIMIT;
        lines.truncate(RESIDUAL_LIMIT);
        lines.push(format!("... {extra} more"));
    }
    lines
}

pub fn run_suite(id: SuiteId, scenario: &Scenario, opts: &SuiteOptions) -> SuiteReport {
    match id {
        SuiteId::CliffordAudit => clifford_audit(scenario),
        SuiteId::G2Audit => g2_audit(opts),
        SuiteId::FiltrationAudit => filtration_audit(scenario, opts),
        SuiteId::BackgroundAudit => background_audit(scenario),
        SuiteId::BracketAudit => bracket_audit(scenario, opts),
        SuiteId::SusyAudit => susy_audit(scenario, opts),
        SuiteId::CorrectionsAudit => corrections_audit(scenario, opts),
        SuiteId::ExampleG2h3 => example_g2h3(scenario),
    }
}

/// Run several suites; independent suites go through [`crate::par::map`] and
/// come back in the requested order.
pub fn run_suites(
    ids: &[SuiteId],
    scenario: &Scenario,
    opts: &SuiteOptions,
) -> Vec<(SuiteReport, std::time::Duration)> {
    crate::par::map(ids, |id| {
        let t0 = std::time::Instant::now();
        let report = run_suite(*id, scenario, opts);
        (report, t0.elapsed())
    })
}

// ---------------------------------------------------------------- clifford

fn relation_residuals(rep: &CliffordRep) -> Vec<String> {
    let n = rep.spinor_dim();
    let mut out = Vec::new();
    for mu in 0..rep.dim() {
        for nu in mu..rep.dim() {
            let mut ac = rep.gamma(mu).anticommutator(rep.gamma(nu));
            if mu == nu {
                ac = ac
                    - ExactMatrix::identity(n).scale(&Scalar::from(2 * i64::from(rep.metric[mu])));
            }
            out.extend(matrix_residual(&format!("({mu},{nu})"), &ac));
        }
    }
    capped(out)
}

fn rep_name(rep: &CliffordRep) -> &'static str {
    match rep.label {
        RepLabel::D3 => "D=3",
        RepLabel::D3Adapted => "D=3 adapted",
        RepLabel::D7 => "D=7",
        RepLabel::D10 => "D=10",
    }
}

fn audit_rep(
    report: &mut SuiteReport,
    rep: &CliffordRep,
    tag: &str,
    expected_delta: Option<&[i8]>,
) {
    let name = rep_name(rep);
    report.push(Check::residual(
        format!("{tag}{name}: γ_μγ_ν + γ_νγ_μ = 2g_μν"),
        relation_residuals(rep),
    ));
    match rep.delta_table() {
        Ok(table) => {
            if let Some(expected) = expected_delta {
                report.push(Check::detail(
                    format!("{tag}{name}: Δ table"),
                    table == expected,
                    format!("got {table:?}, expected {expected:?}"),
                ));
            }
            report.note(format!("{tag}{name}: Δ = {table:?}, Δ₁ = {:+}", table[1]));
        }
        Err(e) => report.error(&format!("{tag}{name}: Δ table"), e),
    }
    if rep.spinor_dim() <= 8 {
        let res: Vec<String> = rep
            .fierz_reconstruction_residuals()
            .iter()
            .flat_map(|(i, j, m)| matrix_residual(&format!("η=e{i},ξ=e{j}"), m))
            .collect();
        report.push(Check::residual(
            format!("{tag}{name}: Fierz rank-one reconstruction"),
            capped(res),
        ));
    }
    if rep.label == RepLabel::D7 {
        let res: Vec<String> = G2Structure::standard()
            .adapted_rep_residuals(rep)
            .iter()
            .flat_map(|(mu, nu, v)| vector_residual(&format!("γ_{mu}γ_{nu}e8"), v))
            .collect();
        report.push(Check::residual(
            format!("{tag}{name}: γ_μγ_ν e₈ = −δ_μν e₈ − ω_μνκ e_κ"),
            capped(res),
        ));
    }
}

/// The three standard representations plus the scenario's own.
pub fn clifford_audit(scenario: &Scenario) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteId::CliffordAudit);
    audit_rep(&mut report, &build_rep_d3(), "", Some(&[-1, 1, 1, -1]));
    audit_rep(
        &mut report,
        &build_rep_d7(),
        "",
        Some(&[1, -1, -1, 1, 1, -1, -1, 1]),
    );
    let d10 = build_rep_d10();
    audit_rep(&mut report, &d10, "", None);
    let special = d10.delta_table().map(|t| t[1] == 1).unwrap_or(false);
    report.push(Check::holds("D=10: Δ₁ = +1", special));
    report.push(Check::holds(
        "D=10: γ_I basis of End(S) complete",
        d10.fierz_basis_complete(),
    ));
    audit_rep(&mut report, &scenario.background.rep, "scenario ", None);
    report
}

// ---------------------------------------------------------------- g2

pub fn g2_audit(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteId::G2Audit);
    let g2 = G2Structure::standard();
    let traces = g2.verify_traces();
    report.push(Check::holds(
        "ω_μνρ ω_κλρ = δδ − δδ − *ω_μνκλ",
        traces.omega_omega,
    ));
    report.push(Check::holds(
        "ω_μνκ ω_ρνκ = 6δ_μρ",
        traces.omega_omega_double,
    ));
    report.push(Check::holds(
        "*ω_νκρλ ω_μσλ = 6δ_[ν[μ ω_κρ]σ]",
        traces.star_omega_omega,
    ));
    report.push(Check::holds(
        "*ω_νκρσ ω_μνκ = −4ω_μρσ",
        traces.star_omega_contract,
    ));
    let proj = g2.verify_projectors();
    report.push(Check::holds(
        "Π± idempotent and complementary",
        proj.plus_idempotent && proj.minus_idempotent && proj.complementary,
    ));
    report.push(Check::detail(
        "rank Π₊ = 14, rank Π₋ = 7",
        (proj.rank_plus, proj.rank_minus) == (14, 7),
        format!("ranks {} and {}", proj.rank_plus, proj.rank_minus),
    ));
    report.push(Check::holds(
        "−4Π₊ + 2Π₋ = −2I − *ω",
        proj.gamma_decomposition_matches,
    ));

    let rep = build_rep_d7();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut residual = Vec::new();
    let mut printed_differs = 0;
    for draw in 0..opts.curvature_draws {
        let r = random_g2_curvature(opts.seed.wrapping_mul(1000) + draw as u64);
        if !g2.first_pair_in_g2(&r) || !g2.second_pair_in_g2(&r) {
            residual.push(format!("draw {draw}: projection leaves 𝔤₂"));
            continue;
        }
        let xi: Vec<Scalar> = (0..8)
            .map(|_| Scalar::from(rng.gen_range(-3i64..=3)))
            .collect();
        let mut differs = false;
        for mu in 0..7 {
            for nu in 0..7 {
                let sides = g2.rgamma_sides(&rep, &r, &xi, mu, nu);
                if sides.lhs != sides.rhs {
                    let diff: Vec<Scalar> = sides
                        .lhs
                        .iter()
                        .zip(&sides.rhs)
                        .map(|(a, b)| a - b)
                        .collect();
                    residual.extend(vector_residual(
                        &format!("draw {draw} (μ,ν)=({mu},{nu})"),
                        &diff,
                    ));
                }
                differs |= sides.lhs != sides.rhs_as_printed;
            }
        }
        printed_differs += usize::from(differs);
    }
    report.push(Check::residual(
        format!(
            "R_μνκλ γ^κλ ξ = 4 ξ^θ R_μνθκ e^κ on {} 𝔤₂-projected tensors",
            opts.curvature_draws
        ),
        capped(residual),
    ));
    if printed_differs > 0 {
        report.note(format!(
            "contraction with the derivative pair placed first (4 ξ^θ R_θμνκ e^κ) differs on {printed_differs} of {} draws",
            opts.curvature_draws
        ));
    }
    report
}

// ---------------------------------------------------------------- filtration

pub fn filtration_audit(scenario: &Scenario, opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteId::FiltrationAudit);
    let table_dim = 4 * 3 + 4;
    for l in 0..=3 {
        let mut res = Vec::new();
        for ((p, odd), expected) in mass_table_rows(l) {
            let got = mass_value_set(p, odd, table_dim);
            if got != expected {
                res.push(format!(
                    "q^{p} {}: got {got:?}, expected {expected:?}",
                    if odd { "odd" } else { "even" }
                ));
            }
        }
        report.push(Check::residual(
            format!("mass-dimension value sets, ℓ = {l}"),
            res,
        ));
    }
    let failures = filtration_identity_failures(scenario.background.spinor_dim().min(10), 4);
    report.push(Check::residual(
        "G_k ⊕ U_k = W_{2k+1} = Ŵ_{2k} and companion identities, k ≤ 4",
        capped(failures),
    ));

    let engine = Engine::new(&scenario.background);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for family in [
        FiltrationFamily::Z,
        FiltrationFamily::W,
        FiltrationFamily::WHat,
        FiltrationFamily::WOdd,
        FiltrationFamily::WEven,
    ] {
        let c = check_compatibility(family, &engine, &mut rng, opts.compatibility_samples);
        let label = format!("{family:?} is {}-compatible", c.claimed);
        report.push(Check::detail(
            format!("{label}: upper bound"),
            c.upper_bound_holds,
            format!("max excess {:?}", c.max_excess),
        ));
        // the minimality witness is only required for the two main families
        if matches!(family, FiltrationFamily::Z | FiltrationFamily::W) {
            report.push(Check::detail(
                format!("{label}: witness"),
                c.witness.is_some(),
                format!("max excess {:?}", c.max_excess),
            ));
        }
        report.note(format!(
            "{label}: {} over {} samples, witness {:?}",
            c.verdict(),
            c.samples,
            c.witness
        ));
    }
    report
}

// ---------------------------------------------------------------- background

pub fn background_audit(scenario: &Scenario) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteId::BackgroundAudit);
    let bg = &scenario.background;
    let n = bg.dim();
    let mut res = Vec::new();
    for mu in 0..n {
        for nu in 0..n {
            res.extend(matrix_residual(
                &format!("({mu},{nu})"),
                &(bg.torsion(mu, nu) - bg.torsion_via_difference(mu, nu)),
            ));
        }
    }
    report.push(Check::residual(
        "torsion: 2 skew(D̂γ) = difference-tensor route",
        capped(res),
    ));
    if let Some(t) = &scenario.expect.torsion_gamma_factor {
        let mut res = Vec::new();
        for mu in 0..n {
            for nu in 0..n {
                let diff = bg.torsion(mu, nu) - bg.rep.gamma2(mu, nu).scale(t);
                res.extend(matrix_residual(&format!("({mu},{nu})"), &diff));
            }
        }
        report.push(Check::residual(format!("𝒯_μν = {t} γ_μν"), capped(res)));
    }
    let admissible = bg.is_admissible();
    let pair = bg.is_pair_admissible(&scenario.k1);
    report.push(Check::holds(
        "D̂γ totally skew on the parallel spinors",
        admissible || pair,
    ));
    report.note(format!(
        "fully admissible: {admissible}, admissible on K₁: {pair}"
    ));
    let mut res = Vec::new();
    for mu in 0..n {
        for nu in 0..n {
            res.extend(matrix_residual(
                &format!("sym ({mu},{nu})"),
                &bg.hat_d_gamma_symmetric(mu, nu),
            ));
        }
    }
    if admissible {
        report.push(Check::residual("D̂_(μ γ_ν) = 0", capped(res)));
    }
    let bianchi = bg.bianchi_check();
    report.push(Check::holds(
        "D̂_[κ𝒯_μν] = ad^C(R_[κμ})γ_ν]",
        bianchi.torsion,
    ));
    report.push(Check::holds(
        "D̂_[κ(ad^C_R γ)_μνρ] = ad^C(R_[κμ})𝒯_νρ]",
        bianchi.ad_curvature,
    ));
    report.push(Check::holds("D_[κ R_μν] = 0", bianchi.curvature));
    match bianchi.levi_civita_curvature {
        Some(weight) => {
            report.push(Check::detail(
                "R⁰_κμνλ γ^λ = ad^C_{R_κμ} γ_ν − D̂_[κ 𝒯_μ]ν",
                weight.is_some(),
                "no antisymmetrizer weight satisfies the identity".into(),
            ));
            if let Some(w) = weight {
                report.note(format!(
                    "Levi-Civita curvature identity holds with weight {w:?}"
                ));
            }
        }
        None => report.note("Levi-Civita curvature identity needs full admissibility; skipped"),
    }
    report.note(format!(
        "dim K₁ = {}, dim K₀ = {}",
        scenario.k1.len(),
        bg.killing_fields().dim()
    ));
    report
}

// ---------------------------------------------------------------- brackets

fn parity(t: &TermDegree) -> bool {
    t.is_odd()
}

fn random_term_degree<R: Rng>(rng: &mut R, s: usize) -> TermDegree {
    let slot = if rng.gen_bool(0.5) {
        SlotKind::Vector
    } else {
        SlotKind::Spinor
    };
    TermDegree::new(0, rng.gen_range(0..=s.min(3)), slot)
}

/// Graded Jacobi [X,[Y,Z]] = [[X,Y],Z] + (−1)^{|X||Y|}[Y,[X,Z]] on seeded
/// homogeneous triples. Returns the residual listing.
pub fn jacobi_residuals(
    engine: &Engine,
    seed: u64,
    triples: usize,
) -> Result<Vec<String>, crate::superfields::DerivationError> {
    let n = engine.bg.dim();
    let s = engine.bg.spinor_dim();
    let with_x = engine.bg.has_coordinates();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for k in 0..triples {
        let degrees: Vec<TermDegree> = (0..3).map(|_| random_term_degree(&mut rng, s)).collect();
        let ds: Vec<Derivation> = degrees
            .iter()
            .map(|t| random_homogeneous(&mut rng, n, s, *t, with_x))
            .collect();
        let (x, y, z) = (&ds[0], &ds[1], &ds[2]);
        let lhs = engine.bracket(x, &engine.bracket(y, z)?)?;
        let first = engine.bracket(&engine.bracket(x, y)?, z)?;
        let second = engine.bracket(y, &engine.bracket(x, z)?)?;
        let sign = if parity(&degrees[0]) && parity(&degrees[1]) {
            Scalar::from(-1)
        } else {
            Scalar::from(1)
        };
        let diff = strip_meta(&lhs.sub(&first).sub(&second.scale(&sign)));
        if !diff.is_zero() {
            out.push(format!(
                "triple {k} with degrees {degrees:?}: {} nonzero terms",
                diff.len()
            ));
        }
    }
    Ok(out)
}

/// Slot derivations at q⁰ with coefficient 1, x^ν or e^b.
pub fn generator_derivations(n: usize, s: usize, with_x: bool) -> Vec<Derivation> {
    let slots: Vec<Slot> = (0..n)
        .map(Slot::Vector)
        .chain((0..s).map(Slot::Spinor))
        .collect();
    let mut coeffs = vec![PolySection::scalar(Scalar::from(1))];
    if with_x {
        coeffs.extend((0..n).map(|nu| PolySection::term(Monomial::var(nu), SuperForm::one())));
    }
    coeffs.extend((0..s).map(|b| PolySection::constant(SuperForm::basis(b))));
    slots
        .iter()
        .flat_map(|slot| {
            coeffs
                .iter()
                .map(move |c| Derivation::term(0, *slot, c.clone()))
        })
        .collect()
}

/// Structural bracket against operator reconstruction on every generator pair.
pub fn dual_backend_residuals(
    engine: &Engine,
    form_cap: usize,
    poly_cap: usize,
) -> Result<Vec<String>, crate::superfields::DerivationError> {
    let gens = generator_derivations(
        engine.bg.dim(),
        engine.bg.spinor_dim(),
        engine.bg.has_coordinates(),
    );
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|a| (0..gens.len()).map(move |b| (a, b)))
        .collect();
    let results = crate::par::map(&pairs, |&(a, b)| {
        let structural = engine.bracket(&gens[a], &gens[b])?;
        let operator = engine.bracket_operator(&gens[a], &gens[b], poly_cap, form_cap)?;
        Ok::<_, crate::superfields::DerivationError>(
            (strip_meta(&structural) != strip_meta(&operator))
                .then(|| format!("generators ({a},{b})")),
        )
    });
    let mut out = Vec::new();
    for r in results {
        if let Some(line) = r? {
            out.push(line);
        }
    }
    Ok(out)
}

fn mass_additivity_residuals(
    engine: &Engine,
    seed: u64,
    samples: usize,
) -> Result<Vec<String>, crate::superfields::DerivationError> {
    let n = engine.bg.dim();
    let s = engine.bg.spinor_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut out = Vec::new();
    for _ in 0..samples {
        let ta = random_term_degree(&mut rng, s);
        let tb = random_term_degree(&mut rng, s);
        let a = random_homogeneous(&mut rng, n, s, ta, false);
        let b = random_homogeneous(&mut rng, n, s, tb, false);
        let expected = ta.mass_dimension() + tb.mass_dimension();
        for t in term_degrees(&engine.bracket(&a, &b)?) {
            if t.mass_dimension() != expected {
                out.push(format!(
                    "[{ta:?}, {tb:?}] has a term {t:?} of mass {}",
                    t.mass_dimension()
                ));
            }
        }
    }
    Ok(out)
}

pub fn bracket_audit(scenario: &Scenario, opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteId::BracketAudit);
    let engine = Engine::new(&scenario.background);
    match jacobi_residuals(&engine, opts.seed, opts.jacobi_triples) {
        Ok(res) => report.push(Check::residual(
            format!("graded Jacobi on {} seeded triples", opts.jacobi_triples),
            capped(res),
        )),
        Err(e) => report.error("graded Jacobi", e),
    }
    if scenario.background.has_coordinates() {
        match dual_backend_residuals(&engine, opts.probe_form_cap, opts.probe_poly_cap) {
            Ok(res) => report.push(Check::residual(
                "structural bracket = operator reconstruction on generator pairs",
                capped(res),
            )),
            Err(e) => report.error("dual backend", e),
        }
    } else {
        report.note("operator backend needs coordinates; dual-backend check skipped");
    }
    match mass_additivity_residuals(&engine, opts.seed, 40) {
        Ok(res) => report.push(Check::residual(
            "mass dimension is additive under the bracket",
            capped(res),
        )),
        Err(e) => report.error("mass additivity", e),
    }
    report
}

// ---------------------------------------------------------------- susy

pub fn susy_audit(scenario: &Scenario, opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteId::SusyAudit);
    let bg = &scenario.background;
    let st = SusyStructure {
        k0: bg.killing_fields(),
        k1: scenario.k1.clone(),
        q_max: opts.q_max,
    };
    match verify_structure(bg, &st) {
        Ok(sr) => {
            report.push(Check::holds("𝔢 and 𝔬 injective", sr.independent));
            report.push(Check::holds(
                "brackets mod q form the semidirect product",
                sr.table_mod_q,
            ));
            report.push(Check::holds(
                "[𝔬η, 𝔬ξ] = q ȷ({η,ξ}) and [𝔢X, qȷY] = qȷ[X,Y] mod q²",
                sr.table_mod_q2,
            ));
            report.push(Check::holds("{K₁, K₁} ⊂ K₀", sr.brackets_in_k0));
            report.push(Check::holds(
                "generators are mass homogeneous",
                sr.mass_preserving,
            ));
            report.push(Check::holds(
                "order-q² parts lie in span U₂",
                sr.pure_order2,
            ));
            report.push(Check::holds(
                "[𝔢, 𝔷₂] and [𝔬, 𝔷₂] stay in 𝔷₂",
                sr.module_order2,
            ));
            if let Some(expected) = scenario.expect.corrections_vanish {
                report.push(Check::holds(
                    "order-q² corrections vanish identically",
                    sr.corrections_vanish == expected,
                ));
                report.push(Check::holds(
                    "at q = 1 the odd brackets are exactly D_{η,ξ}",
                    sr.flat_algebra_at_q1 == expected,
                ));
            }
            report.notes.extend(sr.notes.iter().cloned());
            report
                .notes
                .extend(sr.failures.iter().map(|f| format!("structure: {f}")));
            report.note(format!("dim K₀ = {}, dim K₁ = {}", sr.dim_k0, sr.dim_k1));
        }
        Err(e) => report.error("SUSY structure", e),
    }
    let mut res = Vec::new();
    for (a, phi) in scenario.k1.iter().enumerate() {
        for (b, psi) in scenario.k1.iter().enumerate().skip(a) {
            match compare_oo_bracket(bg, phi, psi) {
                Ok(c) if c.agrees => {}
                Ok(c) => res.push(format!(
                    "(K₁[{a}], K₁[{b}]): closed form differs, admissible on pair {}",
                    c.admissible
                )),
                Err(e) => res.push(format!("(K₁[{a}], K₁[{b}]): {e}")),
            }
        }
    }
    report.push(Check::residual(
        "[𝔬φ, 𝔬ψ] = qD_{φ,ψ} + q²𝔅 + q²𝔇 mod q³ on K₁",
        capped(res),
    ));
    report
}

// ---------------------------------------------------------------- corrections

fn k1_combination<R: Rng>(rng: &mut R, k1: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); k1[0].len()];
    for v in k1 {
        let c = Scalar::from(rng.gen_range(-2i64..=2));
        for (o, x) in out.iter_mut().zip(v) {
            *o += &c * x;
        }
    }
    out
}

/// Compare a transcribed closed form with the nested bracket of its word on
/// seeded combinations of K₁. Returns the number of differing draws.
pub fn closed_form_mismatches(
    engine: &Engine,
    k1: &[Vec<Scalar>],
    name: &str,
    seed: u64,
    draws: usize,
) -> Result<usize, crate::susy::SusyError> {
    let form = closed_form(name)?;
    let basis = generate_uk(form.order, engine.bg.spinor_dim())?;
    let Some(word) = basis.words.iter().find(|w| w.arity() == form.arity) else {
        return Ok(0);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..draws {
        let args: Vec<Vec<Scalar>> = (0..form.arity)
            .map(|_| k1_combination(&mut rng, k1))
            .collect();
        let engine_value = expand_correction(engine, word, &args)?;
        let closed = evaluate_closed_form(engine.bg, &form, &args)?;
        if strip_meta(&engine_value) != strip_meta(&closed) {
            bad += 1;
        }
    }
    Ok(bad)
}

fn multilinearity_residuals(
    engine: &Engine,
    seed: u64,
) -> Result<Vec<String>, crate::susy::SusyError> {
    let s = engine.bg.spinor_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spinor = |rng: &mut ChaCha8Rng| -> Vec<Scalar> {
        (0..s)
            .map(|_| Scalar::from(rng.gen_range(-3i64..=3)))
            .collect()
    };
    let mut out = Vec::new();
    for k in 2..=4 {
        for word in generate_uk(k, s)?.words {
            let base: Vec<Vec<Scalar>> = (0..word.arity()).map(|_| spinor(&mut rng)).collect();
            let slot = rng.gen_range(0..word.arity());
            let extra = spinor(&mut rng);
            let scale = Scalar::from(rng.gen_range(1i64..=3));
            let mut summed = base.clone();
            summed[slot] = base[slot]
                .iter()
                .zip(&extra)
                .map(|(a, b)| a + &(&scale * b))
                .collect();
            let mut other = base.clone();
            other[slot] = extra;
            let lhs = expand_correction(engine, &word, &summed)?;
            let rhs = expand_correction(engine, &word, &base)?
                .add(&expand_correction(engine, &word, &other)?.scale(&scale));
            if strip_meta(&lhs) != strip_meta(&rhs) {
                out.push(format!("{word} not linear in argument {slot}"));
            }
        }
    }
    Ok(out)
}

pub fn counting_rows() -> Vec<(usize, Vec<usize>, Vec<usize>, usize)> {
    (3..=8)
        .map(|k| {
            let b = generate_uk(k, 2 * k).expect("k ≥ 2");
            (
                k,
                b.counts_formula.clone(),
                b.counts_enumerated.clone(),
                b.total,
            )
        })
        .collect()
}

pub fn corrections_audit(scenario: &Scenario, opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteId::CorrectionsAudit);
    let mut res = Vec::new();
    for (k, formula, enumerated, total) in counting_rows() {
        if formula != enumerated {
            res.push(format!(
                "k={k}: formula {formula:?}, enumerated {enumerated:?}"
            ));
        }
        if total != 1 << (k - 1) || formula.iter().sum::<usize>() != total {
            res.push(format!("k={k}: total {total}"));
        }
    }
    report.push(Check::residual(
        "a^k_j counts and 2^{k−1} totals for k = 3..8",
        res,
    ));

    let bg = &scenario.background;
    let engine = Engine::new(bg);
    let s = bg.spinor_dim();
    if s <= 4 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for k in 3..=4 {
            let Ok(basis) = generate_uk(k, s) else {
                continue;
            };
            match enumerate_nonvanishing(&engine, &basis, &mut rng, 4) {
                Ok(count) => report.note(format!(
                    "k={k}: {count} word types nonvanishing on random spinors; Σ_{{j≤dim S}} a^k_j = {}, Σ_{{j≤k−dim S}} a^k_j = {}, types with j ≤ dim S: {}",
                    basis.reduced_sum_to_dim_s, basis.reduced_sum_to_k_minus_dim_s, basis.surviving
                )),
                Err(e) => report.error(&format!("counting at k={k}"), e),
            }
        }
    }

    if scenario.k1.is_empty() {
        report.note("K₁ = 0: closed-form comparisons are vacuous");
    } else {
        let printed_ok = |name: &str| !CORRECTED_FORMS.iter().any(|(p, _)| *p == name);
        for name in CLOSED_FORM_NAMES {
            match closed_form_mismatches(&engine, &scenario.k1, name, opts.seed, 2) {
                Ok(bad) if printed_ok(name) => report.push(Check::detail(
                    format!("{name} = nested bracket on K₁"),
                    bad == 0,
                    format!("{bad} of 2 draws differ"),
                )),
                Ok(bad) => report.note(format!(
                    "printed {name}: {bad} of 2 draws differ from the nested bracket"
                )),
                Err(e) => report.error(name, e),
            }
        }
        for (printed, corrected) in CORRECTED_FORMS {
            match closed_form_mismatches(&engine, &scenario.k1, corrected, opts.seed, 2) {
                Ok(bad) => report.push(Check::detail(
                    format!("{corrected} (corrected {printed}) = nested bracket on K₁"),
                    bad == 0,
                    format!("{bad} of 2 draws differ"),
                )),
                Err(e) => report.error(corrected, e),
            }
        }
    }
    if s <= 4 {
        match multilinearity_residuals(&engine, opts.seed) {
            Ok(res) => report.push(Check::residual(
                "nested brackets are multilinear for k ≤ 4",
                res,
            )),
            Err(e) => report.error("multilinearity", e),
        }
    }
    let mut res = Vec::new();
    for name in CLOSED_FORM_NAMES
        .iter()
        .chain(CORRECTED_FORMS.iter().map(|(_, c)| c))
    {
        let Ok(form) = closed_form(name) else {
            continue;
        };
        let nf = classify_normal_form(&form);
        for s in &nf.summands {
            if s.pattern.is_none() || !s.violations.is_empty() || s.derivative_ledger != 0 {
                res.push(format!(
                    "{name}: {} ({:?}, ledger {}, {:?})",
                    s.source, s.pattern, s.derivative_ledger, s.violations
                ));
            }
        }
    }
    report.push(Check::residual(
        "every summand matches (AA) or (BB) with derivative ledger 0",
        capped(res),
    ));
    report
}

// ---------------------------------------------------------------- example

fn push_g2h3(report: &mut SuiteReport, tag: &str, r: &G2H3Report) {
    report.push(Check::holds(format!("{tag}: admissible"), r.admissible));
    report.push(Check::detail(
        format!("{tag}: dim(K₁ ∩ S⁺) = 2"),
        r.k1_positive_dim == 2,
        format!("dim {}", r.k1_positive_dim),
    ));
    report.push(Check::holds(
        format!("{tag}: K₁ ∩ S⁺ is horizontal"),
        r.k1_is_horizontal,
    ));
    report.push(Check::holds(
        format!("{tag}: X₁₁ = i(E₁−E₃), X₂₂ = i(E₁+E₃), X₁₂ = iE₂"),
        r.killing_vectors_match,
    ));
    report.push(Check::holds(
        format!("{tag}: 𝔇_c = f_abc γ^aη_α ∧ γ^bη_β"),
        r.d1_matches,
    ));
    report.push(Check::holds(
        format!("{tag}: Fierz reduction to f^abc γ̃_c"),
        r.fierz_matches,
    ));
    let bad: Vec<String> = r
        .ddd
        .iter()
        .filter(|d| !(d.vertical_matches && d.horizontal_matches))
        .map(|d| {
            format!(
                "(α,β)=({},{}): vertical {}, horizontal {}",
                d.alpha, d.beta, d.vertical_matches, d.horizontal_matches
            )
        })
        .collect();
    report.push(Check::residual(
        format!("{tag}: 𝔇(𝒯; η_α, η_β) with frozen prefactors"),
        bad,
    ));
    report.push(Check::holds(
        format!("{tag}: curvature contraction identity"),
        r.rgamma_holds,
    ));
    report.push(Check::holds(
        format!("{tag}: H-curvature B-term vanishes"),
        r.h_curvature_vanishes,
    ));
    if let Some(b) = &r.bbb {
        let ok = b.bbb_factor.is_some() || b.display_factor.is_some();
        report.push(Check::holds(
            format!("{tag}: 𝔅 action from first principles matches a printed reading"),
            ok,
        ));
        let show = |f: &Option<Scalar>| {
            f.as_ref()
                .map_or("no match".to_string(), |x| format!("factor {x}"))
        };
        report.note(format!(
            "{tag}: 𝔅 action vs corrected reading: {}; vs summarized form: {}; vs literal repeated index: {}",
            show(&b.bbb_factor),
            show(&b.display_factor),
            show(&b.literal_factor)
        ));
    }
    report.note(format!(
        "{tag}: prefactors vertical {}, horizontal {}",
        r.vertical_prefactor, r.horizontal_prefactor
    ));
}

pub fn example_g2h3(scenario: &Scenario) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteId::ExampleG2h3);
    let params = scenario.g2h3.clone().unwrap_or_else(G2H3Params::sl2);
    let tag = format!("λ={}, f₁₂₃={}", params.lambda, params.f123);
    match example_g2h3_checks(&params) {
        Ok(r) => push_g2h3(&mut report, &tag, &r),
        Err(e) => report.error(&tag, e),
    }
    report
}
