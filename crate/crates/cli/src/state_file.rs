//! JSON input formats: target states and shared-state overrides.

use std::path::Path;

use densecode_core::{target_from_amplitudes, ComplexScalar, Normalization, SharedState, TargetState};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum NormalizationField {
    #[default]
    Unit,
    Scaled,
}

/// `{"d": 2, "matrix": [[re, im], ...], "normalization": "unit"}`, row-major.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub d: usize,
    pub matrix: Vec<[f64; 2]>,
    #[serde(default)]
    pub normalization: NormalizationField,
}

/// `{"c": [[re, im], ...], "perm_a": [...], "perm_b": [...]}`; permutations default to identity.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharedFile {
    pub c: Vec<[f64; 2]>,
    pub perm_a: Option<Vec<usize>>,
    pub perm_b: Option<Vec<usize>>,
}

fn complex(z: &[f64; 2]) -> ComplexScalar {
    ComplexScalar::new(z[0], z[1])
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parse_json<'a, T: Deserialize<'a>>(path: &Path, bytes: &'a [u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes)
        .map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })
}

fn in_field(path: &Path, field: &str, e: densecode_core::Error) -> CliError {
    CliError::Core { context: format!("{}: field `{field}`: ", path.display()), source: e }
}

pub fn parse_state(path: &Path, bytes: &[u8], tol: f64) -> Result<TargetState, CliError> {
    let file: StateFile = parse_json(path, bytes)?;
    let amps: Vec<ComplexScalar> = file.matrix.iter().map(complex).collect();
    let normalization = match file.normalization {
        NormalizationField::Unit => Normalization::Unit,
        NormalizationField::Scaled => Normalization::Scaled,
    };
    target_from_amplitudes(file.d, &amps, normalization, tol).map_err(|e| {
        let field = match e {
            densecode_core::Error::ZeroDimension => "d",
            _ => "matrix",
        };
        in_field(path, field, e)
    })
}

pub fn parse_state_file(path: &Path, tol: f64) -> Result<TargetState, CliError> {
    parse_state(path, &read_bytes(path)?, tol)
}

pub fn parse_shared_file(path: &Path, tol: f64) -> Result<SharedState, CliError> {
    let bytes = read_bytes(path)?;
    let file: SharedFile = parse_json(path, &bytes)?;
    let d = file.c.len();
    let id: Vec<usize> = (0..d).collect();
    let c = file.c.iter().map(complex).collect();
    SharedState::with_permutations(
        c,
        file.perm_a.unwrap_or_else(|| id.clone()),
        file.perm_b.unwrap_or(id),
        tol,
    )
    .map_err(|e| in_field(path, "c", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<TargetState, CliError> {
        parse_state(Path::new("t.json"), s.as_bytes(), 1e-9)
    }

    #[test]
    fn bell() {
        let t = parse(r#"{"d":2,"matrix":[[0.7071067811865476,0],[0,0],[0,0],[0.7071067811865476,0]],"normalization":"unit"}"#)
            .unwrap();
        assert_eq!(t.dim(), 2);
        assert!((t.coefficients()[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalization_defaults_to_unit() {
        let t = parse(r#"{"d":1,"matrix":[[1,0]]}"#).unwrap();
        assert_eq!(t.dim(), 1);
    }

    #[test]
    fn bad_length() {
        let e = parse(r#"{"d":2,"matrix":[[1,0],[0,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(e, CliError::Core { source: densecode_core::Error::BadLength { expected: 4, found: 3 }, .. }));
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("`matrix`"));
    }

    #[test]
    fn not_normalized() {
        let e = parse(r#"{"d":2,"matrix":[[0.5,0],[0,0],[0,0],[0.5,0]]}"#).unwrap_err();
        match e {
            CliError::Core { source: densecode_core::Error::NotNormalized { deviation }, .. } => {
                assert!((deviation - 0.5).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_name_the_field() {
        let e = parse(r#"{"d":2}"#).unwrap_err();
        assert!(e.to_string().contains("missing field `matrix`"), "{e}");
        let e = parse(r#"{"d":2,"matrix":[],"normalisation":"unit"}"#).unwrap_err();
        assert!(e.to_string().contains("normalisation"), "{e}");
        let e = parse("{\"d\":2,\n\"matrix\":[[1,\"x\"]]}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert_eq!(e.exit_code(), 1);
    }
}
