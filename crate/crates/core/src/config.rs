//! Scenario configuration files. Unknown keys are rejected and exact scalars
//! are written as strings such as `"3/2"` or `"1/2-1*i"`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::background::{difference_from_shape, Background, ShapeTerm};
use crate::clifford::{
    build_rep_d10, build_rep_d3, build_rep_d3_adapted, build_rep_d7_signed, CliffordRep,
};
use crate::exactla::{ExactMatrix, Scalar};
use crate::scenarios::{builtin, Scenario, BUILTIN_SCENARIOS};
use crate::suites::{SuiteId, SuiteOptions};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("key `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepChoice {
    D3,
    D3Adapted,
    D7,
    D10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelChoice {
    FlatType,
    Homogeneous,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSpec {
    /// One square matrix per frame direction, rows of scalar strings.
    #[serde(default)]
    pub matrices: Option<Vec<Vec<Vec<Scalar>>>>,
    #[serde(default)]
    pub shapes: Option<Vec<ShapeTerm>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundSpec {
    /// Use a built-in scenario; the remaining fields must then be absent.
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub rep: Option<RepChoice>,
    #[serde(default)]
    pub dimension: Option<usize>,
    /// Diagonal metric signs; checked against the representation.
    #[serde(default)]
    pub signature: Option<Vec<i8>>,
    #[serde(default)]
    pub model: Option<ModelChoice>,
    /// Entries (a, b, c, value) of c_{ab}^c; the (b, a, c) entry is filled in.
    #[serde(default)]
    pub structure_constants: Vec<(usize, usize, usize, Scalar)>,
    #[serde(default)]
    pub connection: Option<ConnectionSpec>,
    /// Sign in front of ω in the seven-dimensional representation.
    #[serde(default)]
    pub omega_sign: Option<i64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default)]
    pub q_max: Option<u32>,
    #[serde(default)]
    pub p_form: Option<usize>,
    #[serde(default)]
    pub p_poly: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Json,
    Latex,
    Text,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub background: BackgroundSpec,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Suites to run; all of them when empty.
    #[serde(default)]
    pub suites: Vec<SuiteId>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ScenarioConfig {
    pub fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: shown.clone(),
            source,
        })?;
        Self::parse(&text, &shown)
    }

    /// Config for a built-in scenario with every suite selected.
    pub fn for_builtin(name: &str) -> Self {
        ScenarioConfig {
            name: name.to_string(),
            background: BackgroundSpec {
                builtin: Some(name.to_string()),
                rep: None,
                dimension: None,
                signature: None,
                model: None,
                structure_constants: Vec::new(),
                connection: None,
                omega_sign: None,
            },
            caps: Caps::default(),
            seed: None,
            suites: Vec::new(),
            output: OutputSpec::default(),
        }
    }

    pub fn build(&self, seed: u64) -> Result<Scenario, ConfigError> {
        let spec = &self.background;
        if let Some(name) = &spec.builtin {
            if spec.rep.is_some()
                || spec.connection.is_some()
                || !spec.structure_constants.is_empty()
                || spec.omega_sign.is_some()
            {
                return Err(invalid(
                    "background.builtin",
                    "cannot be combined with an explicit background",
                ));
            }
            if !BUILTIN_SCENARIOS.contains(&name.as_str()) {
                return Err(invalid(
                    "background.builtin",
                    format!("unknown scenario {name}"),
                ));
            }
            let mut sc =
                builtin(name, seed).map_err(|e| invalid("background.builtin", e.to_string()))?;
            sc.name = self.name.clone();
            return Ok(sc);
        }
        let rep = self.build_rep()?;
        let n = rep.dim();
        if let Some(d) = spec.dimension {
            if d != n {
                return Err(invalid(
                    "background.dimension",
                    format!("{d} does not match the representation dimension {n}"),
                ));
            }
        }
        if let Some(sig) = &spec.signature {
            if sig != &rep.metric {
                return Err(invalid(
                    "background.signature",
                    format!(
                        "{sig:?} does not match the representation metric {:?}",
                        rep.metric
                    ),
                ));
            }
        }
        let difference = self.difference(&rep)?;
        let model = spec.model.unwrap_or(ModelChoice::FlatType);
        let bg = match model {
            ModelChoice::FlatType => {
                if !spec.structure_constants.is_empty() {
                    return Err(invalid(
                        "background.structure_constants",
                        "flat-type backgrounds have none",
                    ));
                }
                Background::flat_type(rep, difference)
            }
            ModelChoice::Homogeneous => {
                Background::homogeneous(rep, self.structure(n)?, difference)
            }
        }
        .map_err(|e| invalid("background", e.to_string()))?;
        Ok(Scenario::new(&self.name, bg))
    }

    /// Suite options with this config's caps applied over the defaults.
    pub fn options(&self, seed: u64) -> SuiteOptions {
        let d = SuiteOptions::default();
        SuiteOptions {
            seed,
            q_max: self.caps.q_max.unwrap_or(d.q_max),
            probe_form_cap: self.caps.p_form.unwrap_or(d.probe_form_cap),
            probe_poly_cap: self.caps.p_poly.unwrap_or(d.probe_poly_cap),
            ..d
        }
    }

    fn build_rep(&self) -> Result<CliffordRep, ConfigError> {
        let spec = &self.background;
        let choice = spec
            .rep
            .ok_or_else(|| invalid("background.rep", "required unless `builtin` is given"))?;
        if spec.omega_sign.is_some() && choice != RepChoice::D7 {
            return Err(invalid(
                "background.omega_sign",
                "only the d7 representation carries ω",
            ));
        }
        Ok(match choice {
            RepChoice::D3 => build_rep_d3(),
            RepChoice::D3Adapted => build_rep_d3_adapted(),
            RepChoice::D7 => match spec.omega_sign.unwrap_or(1) {
                s @ (1 | -1) => build_rep_d7_signed(s),
                s => {
                    return Err(invalid(
                        "background.omega_sign",
                        format!("must be 1 or -1, got {s}"),
                    ))
                }
            },
            RepChoice::D10 => build_rep_d10(),
        })
    }

    fn structure(&self, n: usize) -> Result<Vec<Scalar>, ConfigError> {
        let mut out = vec![Scalar::from(0); n * n * n];
        for (k, (a, b, c, v)) in self.background.structure_constants.iter().enumerate() {
            if *a >= n || *b >= n || *c >= n {
                return Err(invalid(
                    &format!("background.structure_constants[{k}]"),
                    format!("index out of range for dimension {n}"),
                ));
            }
            out[(a * n + b) * n + c] = v.clone();
            out[(b * n + a) * n + c] = -v;
        }
        Ok(out)
    }

    fn difference(&self, rep: &CliffordRep) -> Result<Vec<ExactMatrix>, ConfigError> {
        let n = rep.dim();
        let s = rep.spinor_dim();
        let Some(conn) = &self.background.connection else {
            return Ok(vec![ExactMatrix::zeros(s, s); n]);
        };
        match (&conn.matrices, &conn.shapes) {
            (Some(_), Some(_)) => Err(invalid(
                "background.connection",
                "give either `matrices` or `shapes`, not both",
            )),
            (None, None) => Ok(vec![ExactMatrix::zeros(s, s); n]),
            (Some(ms), None) => {
                if ms.len() != n {
                    return Err(invalid(
                        "background.connection.matrices",
                        format!("expected {n} matrices, got {}", ms.len()),
                    ));
                }
                ms.iter()
                    .enumerate()
                    .map(|(mu, rows)| {
                        let key = format!("background.connection.matrices[{mu}]");
                        if rows.len() != s || rows.iter().any(|r| r.len() != s) {
                            return Err(invalid(&key, format!("expected a {s}x{s} matrix")));
                        }
                        ExactMatrix::from_rows(rows.clone())
                            .map_err(|e| invalid(&key, e.to_string()))
                    })
                    .collect()
            }
            (None, Some(shapes)) => {
                for (k, t) in shapes.iter().enumerate() {
                    let key = format!("background.connection.shapes[{k}]");
                    if t.degree > n {
                        return Err(invalid(
                            &key,
                            format!("degree {} exceeds dimension {n}", t.degree),
                        ));
                    }
                    for (idx, _) in &t.components {
                        if idx.len() != t.degree
                            || idx.windows(2).any(|w| w[0] >= w[1])
                            || idx.iter().any(|&i| i >= n)
                        {
                            return Err(invalid(&key, format!("component {idx:?} is not an increasing multi-index of length {}", t.degree)));
                        }
                    }
                }
                Ok(difference_from_shape(rep, shapes))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        let err = ScenarioConfig::parse(
            r#"{"name": "x", "background": {"builtin": "flat-d3"}, "sutes": []}"#,
            "cfg",
        )
        .unwrap_err();
        match err {
            ConfigError::Parse { line, message, .. } => {
                assert_eq!(line, 1);
                assert!(message.contains("sutes"));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn shapes_round_trip() {
        let text = r#"{
            "name": "killing",
            "background": {"rep": "d3", "model": "flat-type",
                "connection": {"shapes": [{"kind": "wedge", "degree": 0, "components": [[[], "1"]]}]}}
        }"#;
        let cfg = ScenarioConfig::parse(text, "cfg").unwrap();
        let sc = cfg.build(0).unwrap();
        let expected = crate::scenarios::flat_d3_killing(&Scalar::from(1));
        assert_eq!(sc.background.difference(0), expected.difference(0));
    }

    #[test]
    fn signature_must_match() {
        let text = r#"{"name": "x", "background": {"rep": "d3", "signature": [1, 1, 1]}}"#;
        let err = ScenarioConfig::parse(text, "cfg")
            .unwrap()
            .build(0)
            .unwrap_err();
        assert!(err.to_string().contains("signature"));
    }
}
