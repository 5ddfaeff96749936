//! JSON pencil files.
//!
//! ```json
//! {"name": "example", "field": {"kind": "prime", "p": 7}, "n": 3,
//!  "f": [[1, 1, "1"], [2, 3, "t"]], "g": [[3, 3, "1 + t^2"]]}
//! ```
//!
//! Monomials are listed as `[i, j, coefficient]` with `1 <= i <= j <= n`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pencil::{monomials, Pencil, QuadraticForm};
use crate::ring::{parse_literal, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub field: FieldSpec,
    pub n: usize,
    pub f: Vec<(usize, usize, String)>,
    pub g: Vec<(usize, usize, String)>,
}

impl PencilFile {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::File(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Builds the pencil, rejecting malformed indices, duplicate monomials and
    /// exponents above `degree_cap`.
    pub fn to_pencil(&self, degree_cap: i64) -> Result<Pencil> {
        self.field.validate()?;
        let form = |terms: &[(usize, usize, String)], which: &str| -> Result<QuadraticForm> {
            let mut seen = HashSet::new();
            let mut parsed = Vec::with_capacity(terms.len());
            for (i, j, lit) in terms {
                if *i < 1 || i > j || *j > self.n {
                    return Err(Error::File(format!("{which}: monomial [{i}, {j}] needs 1 <= i <= j <= {}", self.n)));
                }
                if !seen.insert((*i, *j)) {
                    return Err(Error::File(format!("{which}: monomial [{i}, {j}] listed twice")));
                }
                let c = parse_literal(self.field, lit, degree_cap).map_err(|e| match e {
                    Error::Literal { column, message } => {
                        Error::File(format!("{which}: [{i}, {j}] column {column}: {message}"))
                    }
                    other => other,
                })?;
                parsed.push((i - 1, j - 1, c));
            }
            QuadraticForm::from_monomials(self.field, self.n, &parsed)
        };
        Pencil::new(form(&self.f, "f")?, form(&self.g, "g")?)
    }

    /// Canonical file for a pencil: monomials in lexicographic order, zero
    /// coefficients omitted.
    pub fn from_pencil(p: &Pencil, name: Option<String>, comment: Option<String>) -> Self {
        let terms = |q: &QuadraticForm| {
            monomials(q.n())
                .into_iter()
                .filter_map(|(i, j)| {
                    let c = q.monomial_coeff(i, j);
                    (!c.is_zero()).then(|| (i + 1, j + 1, c.to_string()))
                })
                .collect()
        };
        PencilFile { name, comment, field: p.field(), n: p.n(), f: terms(&p.f), g: terms(&p.g) }
    }
}
