//! The field catalog: a JSON document per run listing number fields by
//! label, defining polynomial (constant term first), integral basis as
//! row-major rational strings parsed exactly, and optional units of
//! infinite order as integer coordinate vectors.

use std::path::Path;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;

#[derive(Debug, Serialize, Deserialize)]
struct CatalogDoc {
    schema_version: u32,
    fields: Vec<FieldDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FieldDoc {
    label: String,
    /// Integer coefficients, constant term first, monic.
    polynomial: Vec<i64>,
    /// Row-major rational strings, e.g. "1/2".
    integral_basis: Vec<Vec<String>>,
    #[serde(default)]
    units: Vec<Vec<i64>>,
}

/// An ordered collection of validated field descriptions.
pub struct Catalog {
    fields: Vec<FieldSpec>,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Catalog> {
        let doc: CatalogDoc = serde_json::from_str(text)
            .map_err(|e| Error::MalformedCatalog(e.to_string()))?;
        if doc.schema_version != 1 {
            return Err(Error::MalformedCatalog(format!(
                "unsupported schema_version {}",
                doc.schema_version
            )));
        }
        let mut fields = Vec::with_capacity(doc.fields.len());
        for fd in &doc.fields {
            let poly: Vec<Integer> = fd.polynomial.iter().map(|&c| Integer::from(c)).collect();
            let mut rows = Vec::with_capacity(fd.integral_basis.len());
            for row in &fd.integral_basis {
                let mut out = Vec::with_capacity(row.len());
                for s in row {
                    let q = Rational::from_str(s.trim()).map_err(|_| {
                        Error::MalformedCatalog(format!(
                            "{}: bad rational {s:?} in integral basis",
                            fd.label
                        ))
                    })?;
                    out.push(q);
                }
                rows.push(out);
            }
            let units: Vec<Vec<Integer>> = fd
                .units
                .iter()
                .map(|u| u.iter().map(|&c| Integer::from(c)).collect())
                .collect();
            let spec = FieldSpec::new(fd.label.clone(), poly, rows, units)
                .map_err(|e| Error::MalformedCatalog(format!("{}: {e}", fd.label)))?;
            fields.push(spec);
        }
        Ok(Catalog { fields })
    }

    pub fn from_path(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path)?;
        Catalog::from_json(&text)
    }

    /// The catalog shipped with the crate: every signature class with
    /// degree at most 4 that the bound table covers.
    pub fn builtin() -> Catalog {
        Catalog::from_json(include_str!("../data/catalog.json"))
            .expect("the shipped catalog is valid")
    }

    pub fn fields(&self) -> &[FieldSpec] {
        &self.fields
    }

    pub fn get(&self, label: &str) -> Result<&FieldSpec> {
        self.fields
            .iter()
            .find(|f| f.label() == label)
            .ok_or_else(|| Error::UnknownField(label.to_string()))
    }
}
