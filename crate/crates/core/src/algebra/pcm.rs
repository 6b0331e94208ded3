//! Finite partial commutative monoids.

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PcmError {
    #[error("pcm file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("conflicting products: {a}.{b} given as both {c1} and {c2}")]
    Conflict {
        a: String,
        b: String,
        c1: String,
        c2: String,
    },
    #[error("composition is not associative: ({x}.{y}).{z} ≠ {x}.({y}.{z})")]
    NotAssociative { x: String, y: String, z: String },
    #[error("{0}")]
    Malformed(String),
}

/// A finite PCM: elements are indices, composition is a symmetric partial
/// table with a total neutral unit. Associativity is checked in the
/// Kleisli sense at construction: both routes undefined, or both defined
/// and equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePcm {
    names: Vec<String>,
    unit: usize,
    table: Vec<Vec<Option<usize>>>,
}

impl FinitePcm {
    /// Builds a PCM from element names, the unit, and defined products of
    /// non-unit pairs. The symmetric closure and the unit row are filled
    /// in automatically; conflicts and associativity failures are errors.
    pub fn new(
        names: Vec<String>,
        unit_name: &str,
        products: &[(String, String, String)],
    ) -> Result<FinitePcm, PcmError> {
        let index: BTreeMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        if index.len() != names.len() {
            return Err(PcmError::Malformed("duplicate element names".into()));
        }
        let unit = *index
            .get(unit_name)
            .ok_or_else(|| PcmError::Malformed(format!("unit {unit_name:?} is not an element")))?;
        let n = names.len();
        let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            row[unit] = Some(i);
        }
        for (i, slot) in table[unit].iter_mut().enumerate() {
            *slot = Some(i);
        }
        let lookup = |name: &str| -> Result<usize, PcmError> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| PcmError::Malformed(format!("{name:?} is not an element")))
        };
        for (a, b, c) in products {
            let (i, j, k) = (lookup(a)?, lookup(b)?, lookup(c)?);
            for (x, y) in [(i, j), (j, i)] {
                match table[x][y] {
                    Some(prev) if prev != k => {
                        return Err(PcmError::Conflict {
                            a: names[x].clone(),
                            b: names[y].clone(),
                            c1: names[prev].clone(),
                            c2: names[k].clone(),
                        })
                    }
                    _ => table[x][y] = Some(k),
                }
            }
        }
        let pcm = FinitePcm { names, unit, table };
        pcm.check_associativity()?;
        Ok(pcm)
    }

    /// The one-element PCM `{e}`.
    pub fn trivial() -> FinitePcm {
        FinitePcm::new(vec!["e".into()], "e", &[]).expect("trivial pcm is lawful")
    }

    fn check_associativity(&self) -> Result<(), PcmError> {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let left = self.compose(x, y).and_then(|xy| self.compose(xy, z));
                    let right = self.compose(y, z).and_then(|yz| self.compose(x, yz));
                    if left != right {
                        return Err(PcmError::NotAssociative {
                            x: self.names[x].clone(),
                            y: self.names[y].clone(),
                            z: self.names[z].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses the PCM file format:
    ///
    /// ```text
    /// elements: e a b
    /// unit: e
    /// a.b = e
    /// ```
    ///
    /// Blank lines and `#` comments are skipped; the symmetric closure is
    /// applied automatically and conflicts are rejected.
    pub fn parse(text: &str) -> Result<FinitePcm, PcmError> {
        let mut names: Option<Vec<String>> = None;
        let mut unit: Option<String> = None;
        let mut products = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |msg: String| PcmError::Parse { line: idx + 1, msg };
            if let Some(rest) = line.strip_prefix("elements:") {
                names = Some(rest.split_whitespace().map(String::from).collect());
            } else if let Some(rest) = line.strip_prefix("unit:") {
                unit = Some(rest.trim().to_string());
            } else if let Some((lhs, rhs)) = line.split_once('=') {
                let (a, b) = lhs
                    .trim()
                    .split_once('.')
                    .ok_or_else(|| parse_err("expected `a.b = c`".into()))?;
                products.push((
                    a.trim().to_string(),
                    b.trim().to_string(),
                    rhs.trim().to_string(),
                ));
            } else {
                return Err(parse_err(format!("unrecognized line {line:?}")));
            }
        }
        let names = names.ok_or(PcmError::Malformed("missing `elements:` line".into()))?;
        let unit = unit.ok_or(PcmError::Malformed("missing `unit:` line".into()))?;
        FinitePcm::new(names, &unit, &products)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn compose(&self, x: usize, y: usize) -> Option<usize> {
        self.table[x][y]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_is_total_and_neutral() {
        let pcm = FinitePcm::new(vec!["e".into(), "m".into()], "e", &[]).unwrap();
        assert_eq!(pcm.compose(0, 1), Some(1));
        assert_eq!(pcm.compose(1, 0), Some(1));
        // m.m left undefined
        assert_eq!(pcm.compose(1, 1), None);
    }

    #[test]
    fn parse_applies_symmetric_closure_and_rejects_conflicts() {
        let pcm =
            FinitePcm::parse("elements: e a b\nunit: e\na.b = e\na.a = b\nb.b = a\n").unwrap();
        let a = pcm.element_index("a").unwrap();
        let b = pcm.element_index("b").unwrap();
        assert_eq!(pcm.compose(a, b), Some(pcm.unit()));
        assert_eq!(pcm.compose(b, a), Some(pcm.unit()));

        let err = FinitePcm::parse("elements: e a b\nunit: e\na.b = e\nb.a = b\n");
        assert!(matches!(err, Err(PcmError::Conflict { .. })));
    }

    #[test]
    fn associativity_is_enforced() {
        // a.a = a with a.b = e breaks: (b.a).a = a but b.(a.a) = e.
        let bad = FinitePcm::new(
            vec!["e".into(), "a".into(), "b".into()],
            "e",
            &[
                ("a".into(), "a".into(), "a".into()),
                ("a".into(), "b".into(), "e".into()),
            ],
        );
        assert!(matches!(bad, Err(PcmError::NotAssociative { .. })));
    }
}
