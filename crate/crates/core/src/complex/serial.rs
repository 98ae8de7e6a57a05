use serde::{Deserialize, Serialize};

use super::{BifilteredComplex, Generator};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct GenDoc {
    id: String,
    i: i64,
    j: i64,
    gr: Option<i64>,
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    generators: Vec<GenDoc>,
    arrows: Vec<(String, String)>,
}

impl BifilteredComplex {
    /// Canonical document: generators sorted by id, arrows sorted.
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut generators: Vec<GenDoc> = self
            .generators()
            .iter()
            .map(|g| GenDoc { id: g.id.clone(), i: g.i, j: g.j, gr: g.gr })
            .collect();
        generators.sort_by(|a, b| a.id.cmp(&b.id));
        serde_json::to_value(ComplexDoc { generators, arrows: self.arrow_ids() }).unwrap()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).unwrap()
    }

    /// Parses a canonical document. Generators come back in id order, so
    /// `from_json(s)?.to_json() == s` for canonical `s`.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ComplexDoc = serde_json::from_str(s).map_err(|e| Error::Serde(e.to_string()))?;
        let mut gens: Vec<Generator> = doc.generators.into_iter().map(|g| Generator::new(g.id, g.i, g.j, g.gr)).collect();
        gens.sort_by(|a, b| a.id.cmp(&b.id));
        Self::new(gens, &doc.arrows)
    }
}

#[cfg(test)]
mod tests {
    use crate::complex::staircase_from_steps;
    use crate::seq::StepSequence;

    use super::*;

    #[test]
    fn round_trip() {
        let c = staircase_from_steps(&StepSequence::new(vec![1, 2, 3, 1, 1, 1])).unwrap();
        let t = c.tensor(&c.dual());
        for x in [c, t] {
            let s = x.to_json();
            let back = BifilteredComplex::from_json(&s).unwrap();
            assert_eq!(back.to_json(), s);
        }
    }

    #[test]
    fn bad_documents() {
        assert!(BifilteredComplex::from_json("{").is_err());
        let unknown = r#"{"generators":[{"id":"a","i":0,"j":0,"gr":null}],"arrows":[["a","b"]]}"#;
        assert!(matches!(BifilteredComplex::from_json(unknown), Err(Error::UnknownId(_))));
    }
}
