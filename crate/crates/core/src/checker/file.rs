//! Assignment files: subspace assignments as JSON.
//!
//! ```json
//! {"field": "Q", "d": 2, "assignment": {"x": [["1", "0"]], "y": []}}
//! ```
//!
//! Each variable maps to spanning rows, each row a list of field elements in
//! text form (`"3/4"`, `"1-2i"`, `"3 mod 7"`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::eval::Assignment;
use super::CheckError;
use crate::field::{Field, FieldElem, FieldTag};
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentFile {
    pub field: String,
    pub d: usize,
    pub assignment: BTreeMap<String, Vec<Vec<String>>>,
}

/// Basis rows of `s` in text form.
pub fn subspace_rows<F: Field>(s: &Subspace<F>) -> Vec<Vec<String>> {
    s.basis()
        .iter()
        .map(|row| row.iter().map(|x| x.to_elem().to_string()).collect())
        .collect()
}

impl AssignmentFile {
    pub fn from_assignment<F: Field>(d: usize, a: &Assignment<Subspace<F>>) -> Self {
        AssignmentFile {
            field: F::tag().to_string(),
            d,
            assignment: a.iter().map(|(v, s)| (v.to_string(), subspace_rows(s))).collect(),
        }
    }

    pub fn tag(&self) -> Result<FieldTag, CheckError> {
        Ok(self.field.parse::<FieldTag>()?)
    }

    /// Parses every entry over `F` and spans the rows.
    pub fn to_assignment<F: Field>(&self) -> Result<Assignment<Subspace<F>>, CheckError> {
        let tag = self.tag()?;
        if tag != F::tag() {
            return Err(CheckError::AssignmentFile(format!(
                "file is over {tag}, expected {}",
                F::tag()
            )));
        }
        self.assignment
            .iter()
            .map(|(v, rows)| {
                let rows = rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|x| Ok(F::from_elem(&FieldElem::parse(x, tag)?)?))
                            .collect::<Result<Vec<F>, CheckError>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let s = Subspace::from_rows(rows, self.d)?;
                Ok((v.clone(), s))
            })
            .collect::<Result<Vec<_>, CheckError>>()
            .map(|pairs| pairs.into_iter().collect())
    }

    pub fn from_json(text: &str) -> Result<Self, CheckError> {
        serde_json::from_str(text).map_err(|e| CheckError::AssignmentFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRational, Gf, Rational};

    #[test]
    fn round_trip_rational() {
        let a = Assignment::new()
            .with("x", Subspace::<Rational>::span_ints(&[&[1, 2]]))
            .with("y", Subspace::zero(2))
            .with("z", Subspace::full(2));
        let f = AssignmentFile::from_assignment(2, &a);
        assert_eq!(f.assignment["x"], vec![vec!["1".to_string(), "2".to_string()]]);
        let back = AssignmentFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let b: Assignment<Subspace<Rational>> = back.to_assignment().unwrap();
        for (v, s) in a.iter() {
            assert_eq!(b.get(v), Some(s));
        }
    }

    #[test]
    fn round_trip_gaussian_and_prime() {
        let i = GaussRational::new(Rational::from_i64(0), Rational::from_i64(1));
        let s = Subspace::from_rows(vec![vec![GaussRational::from_i64(1), i]], 2).unwrap();
        let a = Assignment::new().with("x", s.clone());
        let f = AssignmentFile::from_assignment(2, &a);
        assert_eq!(f.field, "Qi");
        let b: Assignment<Subspace<GaussRational>> = f.to_assignment().unwrap();
        assert_eq!(b.get("x"), Some(&s));
        assert!(f.to_assignment::<Rational>().is_err());

        let s = Subspace::from_rows(vec![vec![Gf::<7>::new(1), Gf::<7>::new(3)]], 2).unwrap();
        let f = AssignmentFile::from_assignment(2, &Assignment::new().with("x", s.clone()));
        let b: Assignment<Subspace<Gf<7>>> = f.to_assignment().unwrap();
        assert_eq!(b.get("x"), Some(&s));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(AssignmentFile::from_json("{\"field\":\"Q\"}").is_err());
        let f = AssignmentFile::from_json(r#"{"field":"Q","d":2,"assignment":{"x":[["1"]]}}"#).unwrap();
        assert!(matches!(f.to_assignment::<Rational>(), Err(CheckError::Subspace(_))));
        let f = AssignmentFile::from_json(r#"{"field":"Q","d":2,"assignment":{"x":[["1","q"]]}}"#).unwrap();
        assert!(matches!(f.to_assignment::<Rational>(), Err(CheckError::Field(_))));
    }
}
