//! JSON state files.
//!
//! ```json
//! {"dims": [2, 2], "kind": "pure", "amplitudes": [[0.7071067811865476, 0], [0, 0], [0.5, 0], [0.5, 0]]}
//! {"kind": "named", "family": "werner", "params": {"p": 0.25}}
//! ```
//!
//! Complex entries are `[re, im]` pairs. Dense matrices are nested row-major
//! arrays of pairs.

use std::path::Path;

use num_complex::Complex64;
use qcorr_core::{BellState, ComplexMatrix, DensityMatrix, Family, StateSpec};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStateFile {
    dims: Option<Vec<usize>>,
    kind: Kind,
    matrix: Option<Vec<Vec<[f64; 2]>>>,
    amplitudes: Option<Vec<[f64; 2]>>,
    family: Option<String>,
    #[serde(default)]
    params: Map<String, Value>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Dense,
    Pure,
    Named,
}

/// Reads and validates a state file.
pub fn load(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text, &path.display().to_string())
}

pub fn parse(text: &str, origin: &str) -> Result<DensityMatrix, CliError> {
    let raw: RawStateFile = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field_err = |field: &str, message: String| CliError::Field {
        origin: origin.to_string(),
        field: field.to_string(),
        message,
    };
    let (spec, expected_dims) = to_spec(raw, &field_err).map_err(|e| match e {
        CliError::State { source, .. } => CliError::State {
            origin: origin.to_string(),
            source,
        },
        e => e,
    })?;
    let rho = spec.build().map_err(|e| CliError::State {
        origin: origin.to_string(),
        source: e,
    })?;
    if let Some(dims) = expected_dims {
        if dims != rho.dims() {
            return Err(field_err(
                "dims",
                format!(
                    "{dims:?} does not match the named state's dims {:?}",
                    rho.dims()
                ),
            ));
        }
    }
    Ok(rho)
}

type FieldErr<'a> = dyn Fn(&str, String) -> CliError + 'a;

fn to_spec(raw: RawStateFile, err: &FieldErr) -> Result<(StateSpec, Option<Vec<usize>>), CliError> {
    let forbid = |present: bool, field: &str, kind: &str| {
        if present {
            Err(err(field, format!("not allowed for kind `{kind}`")))
        } else {
            Ok(())
        }
    };
    match raw.kind {
        Kind::Dense => {
            forbid(raw.amplitudes.is_some(), "amplitudes", "dense")?;
            forbid(raw.family.is_some(), "family", "dense")?;
            forbid(!raw.params.is_empty(), "params", "dense")?;
            let dims = raw
                .dims
                .ok_or_else(|| err("dims", "required for kind `dense`".into()))?;
            let rows = raw
                .matrix
                .ok_or_else(|| err("matrix", "required for kind `dense`".into()))?;
            let n = rows.len();
            let mut data = Vec::with_capacity(n * n);
            for (r, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(err(
                        &format!("matrix[{r}]"),
                        format!("row has {} entries, expected {n}", row.len()),
                    ));
                }
                data.extend(row.iter().map(|&[re, im]| Complex64::new(re, im)));
            }
            let matrix =
                ComplexMatrix::new(n, n, data).map_err(|e| err("matrix", e.to_string()))?;
            Ok((StateSpec::Dense { dims, matrix }, None))
        }
        Kind::Pure => {
            forbid(raw.matrix.is_some(), "matrix", "pure")?;
            forbid(raw.family.is_some(), "family", "pure")?;
            forbid(!raw.params.is_empty(), "params", "pure")?;
            let dims = raw
                .dims
                .ok_or_else(|| err("dims", "required for kind `pure`".into()))?;
            let amps = raw
                .amplitudes
                .ok_or_else(|| err("amplitudes", "required for kind `pure`".into()))?;
            let amplitudes = amps
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            Ok((StateSpec::Pure { dims, amplitudes }, None))
        }
        Kind::Named => {
            forbid(raw.matrix.is_some(), "matrix", "named")?;
            forbid(raw.amplitudes.is_some(), "amplitudes", "named")?;
            let name = raw
                .family
                .ok_or_else(|| err("family", "required for kind `named`".into()))?;
            let family = named_family(&name, &raw.params, raw.dims.as_deref(), err)?;
            Ok((StateSpec::Named(family), raw.dims))
        }
    }
}

fn named_family(
    name: &str,
    params: &Map<String, Value>,
    dims: Option<&[usize]>,
    err: &FieldErr,
) -> Result<Family, CliError> {
    let allow_only = |keys: &[&str]| {
        for k in params.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(err(
                    &format!("params.{k}"),
                    format!("unknown parameter for family `{name}`"),
                ));
            }
        }
        Ok(())
    };
    let get = |key: &str| params.get(key);
    let bad = |key: &str, what: &str| err(&format!("params.{key}"), format!("expected {what}"));
    match name {
        "paper_example" => {
            allow_only(&[])?;
            Ok(Family::PaperExample)
        }
        "bell" => {
            allow_only(&["which"])?;
            let which = match get("which") {
                None => BellState::PhiPlus,
                Some(Value::String(s)) => s
                    .parse()
                    .map_err(|e: qcorr_core::Error| err("params.which", e.to_string()))?,
                Some(_) => {
                    return Err(bad(
                        "which",
                        "one of \"phi+\", \"phi-\", \"psi+\", \"psi-\"",
                    ))
                }
            };
            Ok(Family::Bell(which))
        }
        "ghz" => {
            allow_only(&["n"])?;
            let n = match get("n") {
                Some(v) => v.as_u64().ok_or_else(|| bad("n", "a positive integer"))? as usize,
                None => dims
                    .map(<[usize]>::len)
                    .ok_or_else(|| err("params.n", "required when `dims` is absent".into()))?,
            };
            Ok(Family::Ghz(n))
        }
        "werner" => {
            allow_only(&["p"])?;
            let p = get("p")
                .ok_or_else(|| err("params.p", "required for family `werner`".into()))?
                .as_f64()
                .ok_or_else(|| bad("p", "a number in [0, 1]"))?;
            Ok(Family::Werner(p))
        }
        "product" => {
            allow_only(&["bloch"])?;
            let list = get("bloch")
                .ok_or_else(|| err("params.bloch", "required for family `product`".into()))?;
            let vectors: Vec<[f64; 3]> = serde_json::from_value(list.clone())
                .map_err(|_| bad("bloch", "a list of [x, y, z] Bloch vectors"))?;
            Ok(Family::Product(vectors))
        }
        "maximally_mixed" => {
            allow_only(&["dims"])?;
            let dims = match get("dims") {
                Some(v) => serde_json::from_value(v.clone())
                    .map_err(|_| bad("dims", "a list of subsystem dimensions"))?,
                None => dims
                    .ok_or_else(|| err("dims", "required for family `maximally_mixed`".into()))?
                    .to_vec(),
            };
            Ok(Family::MaximallyMixed(dims))
        }
        other => Err(CliError::State {
            origin: String::new(),
            source: qcorr_core::Error::UnknownFamily(format!(
                "`{other}`; expected one of {}",
                Family::NAMES.join(", ")
            )),
        }),
    }
}
