//! JSON documents describing a cdga.
//!
//! ```json
//! {
//!   "degrees": { "0": ["1", "t"], "1": ["omega", "dt"] },
//!   "unit": "1",
//!   "d": [["t", [["dt", "1"]]]],
//!   "product": [["t", "omega", []]],
//!   "augmentations": { "xi": { "t": "0" } }
//! }
//! ```
//!
//! * `degrees` maps a nonnegative degree (as a string key) to basis names.
//! * `d` lists `(source, vector)` pairs; unlisted elements are closed.
//! * `product` lists `(a, b, vector)` triples; the swapped pair follows from
//!   graded commutativity, products with the unit default to the identity,
//!   and every other pair is zero.
//! * vectors are lists of `(basis name, rational)` with rationals written
//!   `p`, `p/q` or as finite decimals.
//! * `augmentations` (optional) names degree-0 algebra maps to `ℚ`; missing
//!   degree-0 values are zero, the unit defaults to one.
//!
//! Unknown fields are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Augmentation, Cdga, CdgaError, GradedVectorSpace};
use crate::linalg::{add_entry, SparseVec};
use crate::rational::{parse_rational, ParseRationalError};

/// Largest degree a document may use.
pub const MAX_DEGREE: usize = 64;

pub type VectorDoc = Vec<(String, String)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdgaDocument {
    pub degrees: BTreeMap<usize, Vec<String>>,
    pub unit: String,
    #[serde(default)]
    pub d: Vec<(String, VectorDoc)>,
    #[serde(default)]
    pub product: Vec<(String, String, VectorDoc)>,
    #[serde(default)]
    pub augmentations: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("bad rational: {0}")]
    Rational(#[from] ParseRationalError),
    #[error("degree {0} exceeds the maximum of {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("differential of {0:?} given twice")]
    DuplicateDifferential(String),
    #[error("product {0:?}·{1:?} given twice")]
    DuplicateProduct(String, String),
    #[error("unknown augmentation {0:?}")]
    UnknownAugmentation(String),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
}

/// A parsed cdga with its named augmentations.
#[derive(Debug, Clone)]
pub struct CdgaInput {
    pub cdga: Cdga,
    pub augmentations: BTreeMap<String, Augmentation>,
}

impl CdgaInput {
    pub fn augmentation(&self, name: &str) -> Result<&Augmentation, DocumentError> {
        self.augmentations
            .get(name)
            .ok_or_else(|| DocumentError::UnknownAugmentation(name.to_string()))
    }
}

pub fn parse_cdga_document(text: &str) -> Result<CdgaDocument, DocumentError> {
    Ok(serde_json::from_str(text)?)
}

fn vector(space: &GradedVectorSpace, terms: &VectorDoc) -> Result<SparseVec, DocumentError> {
    let mut v = SparseVec::new();
    for (name, coeff) in terms {
        let id = space.lookup(name).ok_or_else(|| CdgaError::UnknownElement(name.clone()))?;
        add_entry(&mut v, id, parse_rational(coeff)?);
    }
    Ok(v)
}

impl CdgaDocument {
    /// Resolves names and builds the algebra. The cdga axioms are not checked
    /// here; see [`super::check_axioms`].
    pub fn build(&self) -> Result<CdgaInput, DocumentError> {
        if let Some(&d) = self.degrees.keys().find(|&&d| d > MAX_DEGREE) {
            return Err(DocumentError::DegreeTooLarge(d));
        }
        let degrees: Vec<(usize, Vec<String>)> =
            self.degrees.iter().map(|(d, names)| (*d, names.clone())).collect();
        let space = GradedVectorSpace::new(&degrees)?;
        let unit = space.lookup(&self.unit).ok_or_else(|| CdgaError::UnknownElement(self.unit.clone()))?;

        let mut dmap = BTreeMap::new();
        for (src, img) in &self.d {
            let id = space.lookup(src).ok_or_else(|| CdgaError::UnknownElement(src.clone()))?;
            if dmap.insert(id, vector(&space, img)?).is_some() {
                return Err(DocumentError::DuplicateDifferential(src.clone()));
            }
        }
        let mut pmap = BTreeMap::new();
        for (a, b, img) in &self.product {
            let ia = space.lookup(a).ok_or_else(|| CdgaError::UnknownElement(a.clone()))?;
            let ib = space.lookup(b).ok_or_else(|| CdgaError::UnknownElement(b.clone()))?;
            if pmap.insert((ia, ib), vector(&space, img)?).is_some() {
                return Err(DocumentError::DuplicateProduct(a.clone(), b.clone()));
            }
        }
        let cdga = Cdga::new(space, unit, dmap, pmap)?;

        let mut augmentations = BTreeMap::new();
        for (name, values) in &self.augmentations {
            let mut map = BTreeMap::new();
            for (elem, x) in values {
                let id = cdga.space().lookup(elem).ok_or_else(|| CdgaError::UnknownElement(elem.clone()))?;
                map.insert(id, parse_rational(x)?);
            }
            augmentations.insert(name.clone(), Augmentation::new(&cdga, map)?);
        }
        Ok(CdgaInput { cdga, augmentations })
    }
}

/// Parses and builds in one step.
pub fn load_cdga(text: &str) -> Result<CdgaInput, DocumentError> {
    parse_cdga_document(text)?.build()
}

/// Writes a cdga back out as a document (products only for stored pairs).
pub fn to_document(a: &Cdga, augmentations: &BTreeMap<String, Augmentation>) -> CdgaDocument {
    let sp = a.space();
    let vec_doc = |v: &SparseVec| -> VectorDoc {
        v.iter()
            .map(|(&i, x)| (sp.name(i).to_string(), crate::rational::format_rational(x)))
            .collect()
    };
    let mut degrees: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for e in sp.elements() {
        degrees.entry(e.degree).or_default().push(e.name.clone());
    }
    let d = (0..a.dim())
        .filter(|&i| !a.d_basis(i).is_empty())
        .map(|i| (sp.name(i).to_string(), vec_doc(a.d_basis(i))))
        .collect();
    let product = a
        .stored_products()
        .map(|(&(x, y), v)| (sp.name(x).to_string(), sp.name(y).to_string(), vec_doc(v)))
        .collect();
    let augmentations = augmentations
        .iter()
        .map(|(name, aug)| {
            let values = aug
                .values()
                .iter()
                .filter(|(&i, _)| i != a.unit())
                .map(|(&i, x)| (sp.name(i).to_string(), crate::rational::format_rational(x)))
                .collect();
            (name.clone(), values)
        })
        .collect();
    CdgaDocument { degrees, unit: sp.name(a.unit()).to_string(), d, product, augmentations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::check_axioms;
    use crate::linalg::rat;

    const EXACT: &str = r#"{
        "degrees": {"0": ["1", "t"], "1": ["omega", "dt"]},
        "unit": "1",
        "d": [["t", [["dt", "1"]]]],
        "augmentations": {"xi": {"t": "0"}}
    }"#;

    #[test]
    fn parses_and_builds() {
        let input = load_cdga(EXACT).unwrap();
        assert_eq!(input.cdga.dim(), 4);
        assert!(check_axioms(&input.cdga).is_valid());
        let xi = input.augmentation("xi").unwrap();
        assert_eq!(xi.value(input.cdga.unit()), rat(1));
        assert!(input.augmentation("eta").is_err());
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{"degrees": {"0": ["1"]}, "unit": "1", "extra": 3}"#;
        assert!(matches!(load_cdga(text), Err(DocumentError::Syntax(_))));
    }

    #[test]
    fn rejects_bad_references_and_numbers() {
        let unknown = r#"{"degrees": {"0": ["1"]}, "unit": "u"}"#;
        assert!(matches!(load_cdga(unknown), Err(DocumentError::Cdga(CdgaError::UnknownElement(_)))));
        let bad_q = r#"{"degrees": {"0": ["1"], "1": ["x"]}, "unit": "1", "product": [["x","1",[["x","1/0"]]]]}"#;
        assert!(matches!(load_cdga(bad_q), Err(DocumentError::Rational(_))));
        let dup = r#"{"degrees": {"0": ["1"], "1": ["x"]}, "unit": "1", "d": [["x", []], ["x", []]]}"#;
        assert!(matches!(load_cdga(dup), Err(DocumentError::DuplicateDifferential(_))));
        let deep = r#"{"degrees": {"0": ["1"], "65": ["x"]}, "unit": "1"}"#;
        assert!(matches!(load_cdga(deep), Err(DocumentError::DegreeTooLarge(65))));
        let neg = r#"{"degrees": {"-1": ["x"], "0": ["1"]}, "unit": "1"}"#;
        assert!(matches!(load_cdga(neg), Err(DocumentError::Syntax(_))));
    }

    #[test]
    fn document_round_trip() {
        let input = load_cdga(EXACT).unwrap();
        let doc = to_document(&input.cdga, &input.augmentations);
        let again = doc.build().unwrap();
        assert_eq!(again.cdga, input.cdga);
    }
}
