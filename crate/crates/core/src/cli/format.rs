//! Group files:
//!
//! ```json
//! {"cyclotomic_order": 4, "dim": 2,
//!  "generators": [[[[[0, 1], [1, 1]], 0], [0, [[0, 1], [-1, 1]]]]],
//!  "symplectic_form": [[0, 1], [-1, 0]]}
//! ```
//!
//! Each matrix entry is either an integer or the coefficient list
//! `[[p, q], ...]` of `sum (p/q) z^k` with `z` a primitive `N`-th root of
//! unity, `N = cyclotomic_order`. `symplectic_form` is optional.

use std::path::Path;

use serde_json::{Map, Value};

use crate::cyclo::{coeffs_from_json, coeffs_to_json, CycNum};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::linalg::ExactMatrix;

const FIELDS: [&str; 4] = ["cyclotomic_order", "dim", "generators", "symplectic_form"];

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGroupFile(msg.into())
}

fn entry_from_json(v: &Value, order: u32, at: &str) -> Result<CycNum> {
    if let Some(k) = v.as_i64() {
        return Ok(CycNum::from_int(k, order));
    }
    coeffs_from_json(v, order).map_err(|e| invalid(format!("{at}: {e}")))
}

fn matrix_from_json(v: &Value, dim: usize, order: u32, what: &str) -> Result<ExactMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid(format!("{what} must be an array of rows")))?;
    if rows.len() != dim {
        return Err(invalid(format!(
            "{what} has {} rows, expected {dim}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| invalid(format!("{what} row {i} must be an array")))?;
        if row.len() != dim {
            return Err(invalid(format!(
                "{what} row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        out.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| entry_from_json(x, order, &format!("{what} entry ({i}, {j})")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    ExactMatrix::from_rows(out)
}

pub fn group_from_value(v: &Value) -> Result<GroupSpec> {
    let obj: &Map<String, Value> = v
        .as_object()
        .ok_or_else(|| invalid("top level must be an object"))?;
    if let Some(k) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(invalid(format!("unknown field `{k}`")));
    }
    let order = obj
        .get("cyclotomic_order")
        .ok_or_else(|| invalid("missing `cyclotomic_order`"))?
        .as_u64()
        .filter(|&n| n > 0 && n <= u32::MAX as u64)
        .ok_or_else(|| invalid("`cyclotomic_order` must be a positive integer"))? as u32;
    let dim = obj
        .get("dim")
        .ok_or_else(|| invalid("missing `dim`"))?
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| invalid("`dim` must be a positive integer"))? as usize;
    let gens = obj
        .get("generators")
        .ok_or_else(|| invalid("missing `generators`"))?
        .as_array()
        .ok_or_else(|| invalid("`generators` must be an array of matrices"))?
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_from_json(m, dim, order, &format!("generator {i}")))
        .collect::<Result<Vec<_>>>()?;
    let form = match obj.get("symplectic_form") {
        None | Some(Value::Null) => None,
        Some(m) => Some(matrix_from_json(m, dim, order, "symplectic_form")?),
    };
    GroupSpec::new(dim, order, gens, form)
}

pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let v: Value = serde_json::from_str(text)?;
    group_from_value(&v)
}

pub fn parse_group_file(path: &Path) -> Result<GroupSpec> {
    parse_group(&std::fs::read_to_string(path)?)
}

fn matrix_to_json(m: &ExactMatrix) -> Value {
    Value::Array(
        (0..m.dim())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|x| match x.as_rational() {
                            Some(q) if q.is_integer() => {
                                i64::try_from(q.to_integer()).map_or_else(|_| coeffs_to_json(x), Value::from)
                            }
                            _ => coeffs_to_json(x),
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn group_to_value(spec: &GroupSpec) -> Value {
    let mut obj = Map::new();
    obj.insert("cyclotomic_order".into(), spec.cyclotomic_order.into());
    obj.insert("dim".into(), spec.dim.into());
    obj.insert(
        "generators".into(),
        Value::Array(spec.generators.iter().map(matrix_to_json).collect()),
    );
    if let Some(j) = &spec.symplectic_form {
        obj.insert("symplectic_form".into(), matrix_to_json(j));
    }
    Value::Object(obj)
}

pub fn group_to_string(spec: &GroupSpec) -> String {
    serde_json::to_string_pretty(&group_to_value(spec)).expect("values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::corpus;

    #[test]
    fn a1_file() {
        let spec = parse_group(
            r#"{"cyclotomic_order": 2, "dim": 2, "generators": [[[-1, 0], [0, -1]]]}"#,
        )
        .unwrap();
        assert_eq!((spec.dim, spec.cyclotomic_order), (2, 2));
        assert_eq!(
            spec.generators[0],
            ExactMatrix::from_ints(&[&[-1, 0], &[0, -1]], 2).unwrap()
        );
    }

    #[test]
    fn coefficient_entries() {
        // z_4 written as [[0, 1], [1, 1]]
        let spec = parse_group(
            r#"{"cyclotomic_order": 4, "dim": 1, "generators": [[[[[0, 1], [1, 1]]]]]}"#,
        )
        .unwrap();
        assert_eq!(
            spec.generators[0].get(0, 0),
            &CycNum::root_of_unity(1, 4).unwrap()
        );
    }

    #[test]
    fn corpus_round_trips() {
        for e in corpus::standard_corpus().unwrap() {
            let text = group_to_string(&e.spec);
            assert_eq!(parse_group(&text).unwrap(), e.spec, "{}", e.name);
        }
        let mu4 = corpus::mu4_counterexample().unwrap().spec;
        let back = parse_group(&group_to_string(&mu4)).unwrap();
        assert_eq!((back.dim, back.cyclotomic_order), (4, 4));
    }

    #[test]
    fn explicit_form_round_trips() {
        let text = r#"{"cyclotomic_order": 1, "dim": 2, "generators": [],
                       "symplectic_form": [[0, 1], [-1, 0]]}"#;
        let spec = parse_group(text).unwrap();
        assert!(spec.symplectic_form.is_some());
        assert_eq!(parse_group(&group_to_string(&spec)).unwrap(), spec);
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(parse_group("{"), Err(Error::Json(_))));
        assert!(matches!(
            parse_group(r#"{"cyclotomic_order": 1, "dim": 2, "generators": [[[1, 0]]]}"#),
            Err(Error::InvalidGroupFile(m)) if m.contains("rows")
        ));
        assert!(matches!(
            parse_group(r#"{"cyclotomic_order": 1, "dim": 2, "generators": [[[1, 1], [1, 1]]]}"#),
            Err(Error::SingularGenerator(0))
        ));
        assert!(matches!(
            parse_group(r#"{"cyclotomic_order": 1, "dim": 1, "generators": [], "extra": 1}"#),
            Err(Error::InvalidGroupFile(m)) if m.contains("extra")
        ));
        assert!(matches!(
            parse_group(r#"{"dim": 1, "generators": []}"#),
            Err(Error::InvalidGroupFile(_))
        ));
        assert!(matches!(
            parse_group(r#"{"cyclotomic_order": 2, "dim": 1, "generators": [[[[[1, 1], [1, 1], [1, 1]]]]]}"#),
            Err(Error::InvalidGroupFile(_))
        ));
        for e in [
            parse_group("{").unwrap_err(),
            parse_group(r#"{"cyclotomic_order": 1, "dim": 2, "generators": [[[1, 1], [1, 1]]]}"#)
                .unwrap_err(),
        ] {
            assert_eq!(e.exit_code(), 2);
        }
    }

    #[test]
    fn non_sl_generator_parses() {
        let spec = parse_group(
            r#"{"cyclotomic_order": 3, "dim": 2, "generators": [[[[[0, 1], [1, 1]], 0], [0, 1]]]}"#,
        )
        .unwrap();
        assert!(!spec.generators[0].det().is_one());
    }
}
