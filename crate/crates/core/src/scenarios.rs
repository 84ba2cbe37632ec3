//! Built-in backgrounds and the seeded generator of admissible D = 3 draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::background::{difference_from_shape, Background, BackgroundError, ShapeKind, ShapeTerm};
use crate::clifford::{build_rep_d3, CliffordRep};
use crate::exactla::{ExactMatrix, Scalar};
use crate::susy::g2h3::{build_g2h3, G2H3Params};

pub const BUILTIN_SCENARIOS: [&str; 5] = [
    "flat-d3",
    "flat-d3-killing",
    "random-admissible-d3",
    "g2h3",
    "g2h3-abelian",
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario {0}")]
    Unknown(String),
    #[error(transparent)]
    Background(#[from] BackgroundError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrawShape {
    /// 𝒜 = 0 on flat space.
    Zero,
    /// 𝒜 = X ∧ λ, i.e. λγ_μ.
    ScalarWedge,
    /// 𝒜 = X ⌋ (f vol).
    VolumeContraction,
    /// Flat 𝒜_μ = t A_μ with a one-dimensional parallel space.
    NullTranslation,
    /// Left-invariant frame on SL(2) with D-parallel frame, M = 0.
    HomogeneousParallel,
}

#[derive(Debug, Clone)]
pub struct AdmissibleDraw {
    pub seed: u64,
    pub shape: DrawShape,
    pub background: Background,
    pub shape_terms: Option<Vec<ShapeTerm>>,
}

/// c_{ab}^c = s ε_{abd} g^{dc} on a three-dimensional frame.
pub fn sl2_structure(rep: &CliffordRep, s: &Scalar) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(27);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                out.push(s * &(&Scalar::from(eps3(a, b, c)) * &rep.metric_sign(c)));
            }
        }
    }
    out
}

fn eps3(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (1, 0, 2) | (0, 2, 1) | (2, 1, 0) => -1,
        _ => 0,
    }
}

fn null_translation(t: &Scalar) -> Vec<ExactMatrix> {
    let a = [[[1, 1], [1, 1]], [[-1, 1], [-1, 1]], [[1, 1], [1, 1]]];
    a.iter()
        .map(|m| ExactMatrix::from_ints(&[&m[0][..], &m[1][..]]).scale(t))
        .collect()
}

fn nonzero_small<R: Rng>(rng: &mut R) -> Scalar {
    let p = loop {
        let p: i64 = rng.gen_range(-3..=3);
        if p != 0 {
            break p;
        }
    };
    Scalar::ratio(p, rng.gen_range(1..=2))
}

/// A seeded admissible D = 3 background drawn from the shape families above.
pub fn random_admissible_d3(seed: u64) -> AdmissibleDraw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rep = build_rep_d3();
    let shapes = [
        DrawShape::Zero,
        DrawShape::ScalarWedge,
        DrawShape::VolumeContraction,
        DrawShape::NullTranslation,
        DrawShape::HomogeneousParallel,
    ];
    let shape = shapes[rng.gen_range(0..shapes.len())];
    let s = rep.spinor_dim();
    let coeff = nonzero_small(&mut rng);
    let (background, shape_terms) = match shape {
        DrawShape::Zero => (
            Background::flat_type(rep.clone(), vec![ExactMatrix::zeros(s, s); 3]),
            None,
        ),
        DrawShape::ScalarWedge | DrawShape::VolumeContraction => {
            let term = if shape == DrawShape::ScalarWedge {
                ShapeTerm::scalar(ShapeKind::Wedge, coeff)
            } else {
                ShapeTerm::new(ShapeKind::Contraction, 3, vec![(vec![0, 1, 2], coeff)])
            };
            let diff = difference_from_shape(&rep, std::slice::from_ref(&term));
            (Background::flat_type(rep.clone(), diff), Some(vec![term]))
        }
        DrawShape::NullTranslation => (
            Background::flat_type(rep.clone(), null_translation(&coeff)),
            None,
        ),
        DrawShape::HomogeneousParallel => (
            Background::homogeneous_with_spin_connection(
                rep.clone(),
                sl2_structure(&rep, &coeff),
                vec![ExactMatrix::zeros(s, s); 3],
            ),
            None,
        ),
    };
    AdmissibleDraw {
        seed,
        shape,
        background: background.expect("draw background"),
        shape_terms,
    }
}

pub fn flat_d3() -> Background {
    let rep = build_rep_d3();
    Background::flat_type(rep, vec![ExactMatrix::zeros(2, 2); 3]).expect("flat background")
}

/// Flat D = 3 with 𝒜_μ = λγ_μ.
pub fn flat_d3_killing(lambda: &Scalar) -> Background {
    let rep = build_rep_d3();
    let diff = difference_from_shape(&rep, &[ShapeTerm::scalar(ShapeKind::Wedge, lambda.clone())]);
    Background::flat_type(rep, diff).expect("flat background")
}

/// Scenario-specific outcomes the suites check on top of the generic identities.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Expectations {
    /// 𝒯_{μν} = t γ_{μν} for this t.
    pub torsion_gamma_factor: Option<Scalar>,
    /// Every order-q² generator bracket vanishes.
    pub corrections_vanish: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub seed: Option<u64>,
    pub background: Background,
    /// Odd generators; the positive-chirality parallel spinors when the
    /// representation is chiral.
    pub k1: Vec<Vec<Scalar>>,
    pub g2h3: Option<G2H3Params>,
    pub expect: Expectations,
}

impl Scenario {
    pub fn new(name: &str, background: Background) -> Self {
        let k1 = background
            .parallel_chiral_spinors(true)
            .unwrap_or_else(|| background.parallel_spinors());
        Scenario {
            name: name.to_string(),
            seed: None,
            background,
            k1,
            g2h3: None,
            expect: Expectations::default(),
        }
    }
}

pub fn builtin(name: &str, seed: u64) -> Result<Scenario, ScenarioError> {
    let scenario = match name {
        "flat-d3" => Scenario {
            expect: Expectations {
                torsion_gamma_factor: Some(Scalar::from(0)),
                corrections_vanish: Some(true),
            },
            ..Scenario::new(name, flat_d3())
        },
        "flat-d3-killing" => Scenario {
            expect: Expectations {
                torsion_gamma_factor: Some(Scalar::from(4)),
                corrections_vanish: None,
            },
            ..Scenario::new(name, flat_d3_killing(&Scalar::from(1)))
        },
        "random-admissible-d3" => Scenario {
            seed: Some(seed),
            ..Scenario::new(name, random_admissible_d3(seed).background)
        },
        "g2h3" | "g2h3-abelian" => {
            let params = if name == "g2h3" {
                G2H3Params::sl2()
            } else {
                G2H3Params::abelian()
            };
            let (bg, _) = build_g2h3(&params)?;
            Scenario {
                g2h3: Some(params),
                ..Scenario::new(name, bg)
            }
        }
        other => return Err(ScenarioError::Unknown(other.to_string())),
    };
    Ok(scenario)
}
