//! JSON form of complexes: a ring, a coefficient domain and either explicit
//! differentials or the edge maps of a scalar hypercube.

use serde::{Deserialize, Serialize};

use crate::complex::{FreeComplex, HyperComplex};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{make_ring, GradedElement, Ring, RingKind};
use crate::scalar::Coeff;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<Coeff>,
    #[serde(default)]
    pub lo: i64,
    #[serde(default)]
    pub ranks: Vec<usize>,
    /// `diffs[k]` is `D_{lo+k+1}` as rows of element strings.
    #[serde(default)]
    pub diffs: Vec<Vec<Vec<String>>>,
    /// Edge maps of a hypercube with rank-one entries; replaces `ranks`/`diffs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypercube: Option<Vec<String>>,
}

/// A parsed complex, keeping the hypercube when one was given.
#[derive(Clone, Debug)]
pub struct LoadedComplex {
    pub ring: Ring,
    pub complex: FreeComplex,
    pub hypercube: Option<(HyperComplex, Vec<usize>)>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<ComplexFile> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }

    pub fn from_complex(c: &FreeComplex) -> ComplexFile {
        let diffs = (c.lo() + 1..=c.hi())
            .map(|n| {
                let d = c.diff(n);
                (0..d.rows())
                    .map(|r| (0..d.cols()).map(|k| d.get(r, k).to_string()).collect())
                    .collect()
            })
            .collect();
        ComplexFile {
            ring: c.ring().kind.name().to_string(),
            coeff: Some(c.ring().coeff),
            lo: c.lo(),
            ranks: c.ranks().to_vec(),
            diffs,
            hypercube: None,
        }
    }

    /// Build the complex; `default_coeff` applies when the file has none.
    pub fn load(&self, default_coeff: Coeff) -> Result<LoadedComplex> {
        let ring = make_ring(RingKind::parse(&self.ring)?, self.coeff.unwrap_or(default_coeff))?;
        if let Some(edges) = &self.hypercube {
            let fs = edges
                .iter()
                .map(|s| GradedElement::parse(&ring, s))
                .collect::<Result<Vec<_>>>()?;
            let v = HyperComplex::scalar_edges(&ring, &fs);
            let order: Vec<usize> = (0..fs.len()).collect();
            let complex = v.totalize(&order)?.shift(self.lo);
            return Ok(LoadedComplex {
                ring,
                complex,
                hypercube: Some((v, order)),
            });
        }
        if self.diffs.len() + 1 != self.ranks.len().max(1) {
            return Err(Error::Shape(format!(
                "{} ranks need {} differentials, found {}",
                self.ranks.len(),
                self.ranks.len().saturating_sub(1),
                self.diffs.len()
            )));
        }
        let mut diffs = Vec::new();
        for (k, rows) in self.diffs.iter().enumerate() {
            let (r, c) = (self.ranks[k], self.ranks[k + 1]);
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(Error::Shape(format!("differential {} must be {r}×{c}", self.lo + k as i64 + 1)));
            }
            let m = if r == 0 || c == 0 {
                Matrix::zeros(&ring, r, c)
            } else {
                let refs: Vec<Vec<&str>> = rows.iter().map(|row| row.iter().map(String::as_str).collect()).collect();
                let refs: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
                Matrix::parse(&ring, &refs)?
            };
            diffs.push(m);
        }
        let complex = if self.ranks.is_empty() {
            FreeComplex::zero(&ring)
        } else {
            FreeComplex::new(&ring, self.lo, self.ranks.clone(), diffs)?
        };
        complex.validate()?;
        Ok(LoadedComplex {
            ring,
            complex,
            hypercube: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_laurent;

    const C: Coeff = Coeff::Prime(101);

    #[test]
    fn round_trip() {
        let l = make_laurent(C).unwrap();
        let d1 = Matrix::parse(&l, &[&["x", "-y"]]).unwrap();
        let d2 = Matrix::parse(&l, &[&["y"], &["x"]]).unwrap();
        let c = FreeComplex::new(&l, -1, vec![1, 2, 1], vec![d1, d2]).unwrap();
        let f = ComplexFile::from_complex(&c);
        let back = ComplexFile::parse(&f.to_json()).unwrap().load(Coeff::Rational).unwrap();
        assert_eq!(back.complex, c);
    }

    #[test]
    fn malformed_input_reports_location() {
        let e = ComplexFile::parse("{\"ring\": \"laurent\",\n \"ranks\": [1,}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let bad = ComplexFile::parse(r#"{"ring":"laurent","ranks":[1,1],"diffs":[[["x","y"]]]}"#).unwrap();
        assert!(matches!(bad.load(C), Err(Error::Shape(_))));
        let nc = ComplexFile::parse(r#"{"ring":"laurent","ranks":[1,1,1],"diffs":[[["x"]],[["y"]]]}"#).unwrap();
        assert!(matches!(nc.load(C), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn hypercube_input() {
        let f = ComplexFile::parse(r#"{"ring":"laurent","coeff":"zp:101","hypercube":["x","1 - y"]}"#).unwrap();
        let l = f.load(Coeff::Rational).unwrap();
        assert_eq!(l.complex.ranks(), &[1, 2, 1]);
        assert!(l.hypercube.is_some());
    }
}
