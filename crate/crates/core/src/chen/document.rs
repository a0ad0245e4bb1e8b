//! JSON documents for punctured lines, paths, words and connections.
//!
//! ```json
//! {
//!   "punctures": [["0", "0"], ["1", "0"]],
//!   "path": [
//!     { "type": "line", "from": ["0.2", "0"], "to": ["0.5", "0"] },
//!     { "type": "arc", "center": ["0", "0"], "radius": "1/2", "start": "0", "sweep": "1" },
//!     { "type": "bezier", "points": [["0.5", "0"], ["0.6", "0.1"], ["0.7", "0.1"], ["0.8", "0"]] }
//!   ],
//!   "words": [[0], [0, 1]],
//!   "classes": [{ "name": "li", "bound": 2, "terms": [[[0, 1], "1"]] }],
//!   "connection": { "rank": 3, "entries": [{ "row": 0, "col": 1, "form": 0, "coeff": ["1", "0"] }] },
//!   "splitting": [0, 1]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs of rationals or finite decimals; arc
//! angles are in turns. An empty `path` needs `base`, the point of the
//! constant path. Indices are zero-based. Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::geometry::{ExactComplex, Path, PuncturedLine, Segment};
use super::{ChenError, H0Class, UnipotentConnection};
use crate::lincomb::LinComb;
use crate::rational::{parse_rational, ParseRationalError};
use crate::word::Word;

/// Largest connection rank a document may request.
pub const MAX_RANK: usize = 32;

/// Longest word a document may contain.
pub const MAX_WORD_LEN: usize = 12;

pub type ComplexDoc = (String, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SegmentDoc {
    Line { from: ComplexDoc, to: ComplexDoc },
    Arc { center: ComplexDoc, radius: String, start: String, sweep: String },
    Bezier { points: [ComplexDoc; 4] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub name: String,
    pub bound: usize,
    pub terms: Vec<(Vec<usize>, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub row: usize,
    pub col: usize,
    pub form: usize,
    pub coeff: ComplexDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionDoc {
    pub rank: usize,
    #[serde(default)]
    pub entries: Vec<EntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChenDocument {
    pub punctures: Vec<ComplexDoc>,
    #[serde(default)]
    pub path: Vec<SegmentDoc>,
    #[serde(default)]
    pub base: Option<ComplexDoc>,
    #[serde(default)]
    pub words: Vec<Vec<usize>>,
    #[serde(default)]
    pub classes: Vec<ClassDoc>,
    #[serde(default)]
    pub connection: Option<ConnectionDoc>,
    #[serde(default)]
    pub splitting: Option<Vec<usize>>,
}

#[derive(Debug, Error)]
pub enum ChenDocumentError {
    #[error("malformed document: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("bad rational: {0}")]
    Rational(#[from] ParseRationalError),
    #[error("an empty path needs a base point")]
    MissingBase,
    #[error("connection rank {0} exceeds {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("word of length {0} exceeds {MAX_WORD_LEN}")]
    WordTooLong(usize),
    #[error(transparent)]
    Chen(#[from] ChenError),
}

/// The validated content of a document.
#[derive(Debug, Clone)]
pub struct ChenInput {
    pub line: PuncturedLine,
    pub path: Path,
    pub words: Vec<Word>,
    pub classes: Vec<(String, H0Class)>,
    pub connection: Option<UnipotentConnection>,
    pub splitting: Option<Vec<usize>>,
}

fn complex(doc: &ComplexDoc) -> Result<ExactComplex, ChenDocumentError> {
    Ok(ExactComplex::new(parse_rational(&doc.0)?, parse_rational(&doc.1)?))
}

fn word(letters: &[usize], forms: usize) -> Result<Word, ChenDocumentError> {
    if letters.len() > MAX_WORD_LEN {
        return Err(ChenDocumentError::WordTooLong(letters.len()));
    }
    if let Some(&form) = letters.iter().find(|&&k| k >= forms) {
        return Err(ChenError::UnknownForm { form, forms }.into());
    }
    Ok(Word(letters.to_vec()))
}

fn segment(doc: &SegmentDoc) -> Result<Segment, ChenDocumentError> {
    Ok(match doc {
        SegmentDoc::Line { from, to } => Segment::Line { from: complex(from)?, to: complex(to)? },
        SegmentDoc::Arc { center, radius, start, sweep } => Segment::Arc {
            center: complex(center)?,
            radius: parse_rational(radius)?,
            start: parse_rational(start)?,
            sweep: parse_rational(sweep)?,
        },
        SegmentDoc::Bezier { points } => Segment::Bezier {
            points: [complex(&points[0])?, complex(&points[1])?, complex(&points[2])?, complex(&points[3])?],
        },
    })
}

impl ChenDocument {
    pub fn validate(&self) -> Result<ChenInput, ChenDocumentError> {
        let punctures = self.punctures.iter().map(complex).collect::<Result<Vec<_>, _>>()?;
        let line = PuncturedLine::new(punctures)?;
        let forms = line.form_count();
        let path = if self.path.is_empty() {
            Path::constant(complex(self.base.as_ref().ok_or(ChenDocumentError::MissingBase)?)?)
        } else {
            let path = Path::new(self.path.iter().map(segment).collect::<Result<Vec<_>, _>>()?)?;
            if let Some(base) = &self.base {
                if !path.start().matches(&super::Endpoint::Exact(complex(base)?)) {
                    return Err(ChenError::EndpointMismatch { segment: 0 }.into());
                }
            }
            path
        };
        let words = self.words.iter().map(|w| word(w, forms)).collect::<Result<Vec<_>, _>>()?;
        let mut classes = Vec::new();
        for c in &self.classes {
            let mut terms = LinComb::zero();
            for (w, q) in &c.terms {
                terms.add_term(word(w, forms)?, parse_rational(q)?);
            }
            classes.push((c.name.clone(), H0Class::new(terms, c.bound)?));
        }
        let connection = match &self.connection {
            None => None,
            Some(doc) => {
                if doc.rank > MAX_RANK {
                    return Err(ChenDocumentError::RankTooLarge(doc.rank));
                }
                let terms = doc
                    .entries
                    .iter()
                    .map(|e| Ok((e.row, e.col, e.form, complex(&e.coeff)?)))
                    .collect::<Result<Vec<_>, ChenDocumentError>>()?;
                Some(UnipotentConnection::new(doc.rank, forms, terms)?)
            }
        };
        if let Some(split) = &self.splitting {
            if let Some(&form) = split.iter().find(|&&k| k >= forms) {
                return Err(ChenError::UnknownForm { form, forms }.into());
            }
        }
        Ok(ChenInput { line, path, words, classes, connection, splitting: self.splitting.clone() })
    }
}

pub fn parse_chen(text: &str) -> Result<ChenDocument, ChenDocumentError> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_chen(text: &str) -> Result<ChenInput, ChenDocumentError> {
    parse_chen(text)?.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "punctures": [["0", "0"], ["1", "0"]],
        "path": [
            { "type": "line", "from": ["0.2", "0"], "to": ["1/2", "0"] },
            { "type": "arc", "center": ["0", "0"], "radius": "1/2", "start": "0", "sweep": "1" }
        ],
        "words": [[0], [0, 1]],
        "classes": [{ "name": "c", "bound": 2, "terms": [[[0, 1], "1"], [[1, 0], "-1/2"]] }],
        "connection": { "rank": 3, "entries": [{ "row": 0, "col": 1, "form": 0, "coeff": ["1", "0"] }] },
        "splitting": [0]
    }"#;

    #[test]
    fn sample_round_trip() {
        let doc = parse_chen(SAMPLE).unwrap();
        let input = doc.validate().unwrap();
        assert_eq!(input.line.form_count(), 2);
        assert_eq!(input.path.segments().len(), 2);
        assert_eq!(input.words.len(), 2);
        assert_eq!(input.classes[0].1.terms().len(), 2);
        assert_eq!(input.connection.unwrap().rank(), 3);
        let again: ChenDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(load_chen("{"), Err(ChenDocumentError::Syntax(_))));
        assert!(matches!(load_chen(r#"{"punctures": [], "extra": 1}"#), Err(ChenDocumentError::Syntax(_))));
        assert!(matches!(load_chen(r#"{"punctures": []}"#), Err(ChenDocumentError::MissingBase)));
        assert!(matches!(
            load_chen(r#"{"punctures": [["0","0"]], "base": ["1","0"], "words": [[1]]}"#),
            Err(ChenDocumentError::Chen(ChenError::UnknownForm { .. }))
        ));
        let gap = r#"{"punctures": [], "path": [
            {"type": "line", "from": ["0","0"], "to": ["1","0"]},
            {"type": "line", "from": ["2","0"], "to": ["3","0"]}]}"#;
        assert!(matches!(load_chen(gap), Err(ChenDocumentError::Chen(ChenError::EndpointMismatch { segment: 1 }))));
        let lower = r#"{"punctures": [["0","0"]], "base": ["1","0"],
            "connection": {"rank": 2, "entries": [{"row": 1, "col": 0, "form": 0, "coeff": ["1","0"]}]}}"#;
        assert!(matches!(load_chen(lower), Err(ChenDocumentError::Chen(ChenError::NotStrictlyUpperTriangular { .. }))));
    }
}
