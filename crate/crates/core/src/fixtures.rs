//! The tabulated GL_3 metaplectic polynomials and comparison against the solver.

use rayon::prelude::*;
use serde::Serialize;

use crate::daha_gl::{e_poly, GLMetaData, GlRep, SolverOptions};
use crate::error::{Error, Result};
use crate::grouplalg::Laurent;
use crate::parse::{parse_laurent, parse_weight};
use crate::scalars::Scalar;
use crate::weight::Weight;

pub const GL3_TABLE: &str = include_str!("../data/gl3_table.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub m: u32,
    pub mu: Weight,
    pub poly: String,
    pub line: usize,
}

impl Fixture {
    pub fn label(&self) -> String {
        format!("E^({})_{}", self.m, self.mu)
    }

    pub fn parse(&self, eps: i8) -> Result<Laurent<Scalar>> {
        parse_laurent(&self.poly, self.mu.len(), Some(eps))
    }
}

/// Reads `m|mu|polynomial` lines; `#` starts a comment line.
pub fn load(text: &str) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.splitn(3, '|').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected m|mu|polynomial", i + 1)));
        }
        let m = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad m", i + 1)))?;
        out.push(Fixture { m, mu: parse_weight(parts[1])?, poly: parts[2].trim().to_string(), line: i + 1 });
    }
    Ok(out)
}

pub fn gl3_table() -> Vec<Fixture> {
    load(GL3_TABLE).expect("embedded table parses")
}

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub m: u32,
    pub mu: Vec<i32>,
    pub matched: bool,
    pub computed: Option<String>,
    pub expected: String,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub eps: i8,
    pub total: usize,
    pub matched: usize,
    pub entries: Vec<TableEntry>,
    #[serde(skip)]
    pub polys: Vec<Option<Laurent<Scalar>>>,
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.matched == self.total
    }

    pub fn mismatch_error(&self) -> Option<Error> {
        if self.all_match() {
            return None;
        }
        let names: Vec<String> = self
            .entries
            .iter()
            .filter(|e| !e.matched)
            .map(|e| format!("E^({})_{:?}", e.m, e.mu))
            .collect();
        Some(Error::FixtureMismatch { count: names.len(), entries: names.join(", ") })
    }
}

/// E^{(m)}_μ for GL_r with κ = 1.
pub fn compute_entry(m: u32, mu: &Weight, eps: i8, opts: SolverOptions) -> Result<Laurent<Scalar>> {
    let data = GLMetaData::new(mu.len(), m, 1, eps)?;
    let params = data.params();
    e_poly(&GlRep::new(&data, &params), mu, opts)
}

/// Computes every fixture and compares by exact equality of coefficients.
pub fn compare(fixtures: &[Fixture], eps: i8, opts: SolverOptions) -> TableReport {
    let results: Vec<(TableEntry, Option<Laurent<Scalar>>)> = fixtures
        .par_iter()
        .map(|f| {
            let computed = compute_entry(f.m, &f.mu, eps, opts);
            let expected = f.parse(eps);
            let (matched, error) = match (&computed, &expected) {
                (Ok(c), Ok(e)) => (c == e, None),
                (Err(e), _) | (_, Err(e)) => (false, Some(e.to_string())),
            };
            let entry = TableEntry {
                m: f.m,
                mu: f.mu.coords().to_vec(),
                matched,
                computed: computed.as_ref().ok().map(|p| p.to_string()),
                expected: f.poly.clone(),
                error,
            };
            (entry, computed.ok())
        })
        .collect();
    let (entries, polys): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let matched = entries.iter().filter(|e| e.matched).count();
    TableReport { eps, total: entries.len(), matched, entries, polys }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_table_shape() {
        let t = gl3_table();
        assert_eq!(t.len(), 50);
        for m in 1..=5 {
            assert_eq!(t.iter().filter(|f| f.m == m).count(), 10);
        }
        for f in &t {
            assert!(f.parse(1).is_ok(), "{}", f.label());
            assert!(f.parse(-1).is_ok(), "{}", f.label());
        }
    }

    #[test]
    fn perturbed_entry_is_named() {
        let text = "1|0,0,0|1\n1|1,0,0|x1 + q*x2\n";
        let fx = load(text).unwrap();
        let rep = compare(&fx, 1, SolverOptions::default());
        assert_eq!(rep.matched, 1);
        match rep.mismatch_error() {
            Some(Error::FixtureMismatch { count: 1, entries }) => assert!(entries.contains("[1, 0, 0]")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_lines_rejected() {
        assert!(load("1|0,0").is_err());
        assert!(load("x|0,0,0|1").is_err());
    }
}
