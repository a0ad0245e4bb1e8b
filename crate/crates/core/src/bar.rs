//! The two-sided reduced bar complex `B(ℚ_η, A, ℚ_ξ)`.
//!
//! Letters are a basis of the augmentation ideal `Ā = ker ξ`: each non-unit
//! degree-0 basis element `e` contributes `e - ξ(e)·1`, and every basis
//! element of positive degree contributes itself. Words containing the unit
//! are degenerate and never appear. A word `[a₁|…|aₙ]` sits in total degree
//! `Σ (|aᵢ| - 1)` and the complex is truncated to words of length `≤ N`,
//! which is a subcomplex because the differential never lengthens a word.
//!
//! # Signs
//!
//! With `εᵢ = Σ_{j<i} (|aⱼ| - 1)` the differential of `[a₁|…|aₙ]` is
//!
//! * `(-1)^(εᵢ+1) [a₁|…|daᵢ|…|aₙ]` for each letter,
//! * `(-1)^(εᵢ₊₁) [a₁|…|aᵢaᵢ₊₁|…|aₙ]` for each adjacent pair,
//! * `η(a₁) [a₂|…|aₙ]` from the left module `ℚ_η`.
//!
//! The matching right term `[a₁|…|aₙ₋₁] ξ(aₙ)` vanishes identically since
//! letters lie in `ker ξ`, which is also a dg ideal, so products and
//! differentials of letters need no further projection. Construction asserts
//! `D∘D = 0`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::cdga::{check_axioms, Augmentation, AxiomReport, Cdga, CdgaError};
use crate::lincomb::LinComb;
use crate::linalg::{
    kernel_basis, quotient_basis, rank_of, LinalgError, QuotientBasis, Rational, SparseMatrix,
    SparseVec,
};
use crate::report::{Rows, Verdict};
use crate::sign;
use crate::word::{all_words, word_count, Word};

pub const DEFAULT_BASIS_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BarError {
    #[error("invalid cdga: {0}")]
    InvalidCdga(AxiomReport),
    #[error("invalid augmentation: {0}")]
    InvalidAugmentation(String),
    #[error("bar basis would have {estimated} words, above the cap of {cap}")]
    BasisCapExceeded { estimated: usize, cap: usize },
    #[error("D∘D ≠ 0 starting in degree {degree}")]
    DifferentialSquareNonzero { degree: i64 },
    #[error("product leaves the truncation (length {length} > {truncation})")]
    TruncationExceeded { length: usize, truncation: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<CdgaError> for BarError {
    fn from(e: CdgaError) -> Self {
        match e {
            CdgaError::Invalid(r) => BarError::InvalidCdga(r),
            other => BarError::InvalidAugmentation(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedLetter {
    pub name: String,
    pub degree: usize,
    /// The letter as an element of the source algebra; lies in `ker ξ`.
    pub element: SparseVec,
}

/// Basis of `Ā = ker ξ` with the projection `A → Ā`.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    letters: Vec<ReducedLetter>,
    letter_of: HashMap<usize, usize>,
}

impl ReducedBasis {
    pub fn letters(&self) -> &[ReducedLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.letters.iter().map(|l| l.name.clone()).collect()
    }

    /// Letters of a given algebra degree.
    pub fn in_degree(&self, degree: usize) -> Vec<usize> {
        (0..self.letters.len()).filter(|&k| self.letters[k].degree == degree).collect()
    }

    /// Coordinates of `v - ξ(v)·1` in the letter basis. These are the
    /// non-unit coordinates of `v`.
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        v.iter()
            .filter_map(|(i, x)| self.letter_of.get(i).map(|&k| (k, x.clone())))
            .collect()
    }
}

/// Splits `A = ℚ·1 ⊕ ker ξ` and returns a basis of `ker ξ`.
pub fn reduce_letters(a: &Cdga, xi: &Augmentation) -> Result<ReducedBasis, BarError> {
    let xi = Augmentation::new(a, xi.values().clone())?;
    let sp = a.space();
    let mut letters = Vec::new();
    let mut letter_of = HashMap::new();
    for degree in 0..=a.max_degree() {
        for &e in sp.basis_in(degree) {
            if e == a.unit() {
                continue;
            }
            let mut element = SparseVec::from([(e, Rational::from_integer(1.into()))]);
            let c = xi.value(e);
            if !c.is_zero() {
                element.insert(a.unit(), -c);
            }
            letter_of.insert(e, letters.len());
            letters.push(ReducedLetter { name: sp.name(e).to_string(), degree, element });
        }
    }
    Ok(ReducedBasis { letters, letter_of })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BarOptions {
    pub basis_cap: usize,
}

impl Default for BarOptions {
    fn default() -> Self {
        BarOptions { basis_cap: DEFAULT_BASIS_CAP }
    }
}

/// Length-truncated reduced bar complex with its total differential.
#[derive(Debug, Clone)]
pub struct BarComplex {
    source: Cdga,
    left: Augmentation,
    right: Augmentation,
    truncation: usize,
    letters: ReducedBasis,
    letter_d: Vec<SparseVec>,
    letter_products: HashMap<(usize, usize), SparseVec>,
    letter_eta: Vec<Rational>,
    basis: BTreeMap<i64, Vec<Word>>,
    position: HashMap<Word, usize>,
    differential: BTreeMap<i64, SparseMatrix>,
}

/// Builds `B(ℚ_η, A, ℚ_ξ)` truncated to words of length `≤ truncation` with
/// the default basis cap.
pub fn build_bar(
    a: &Cdga,
    xi: &Augmentation,
    eta: &Augmentation,
    truncation: usize,
) -> Result<BarComplex, BarError> {
    build_bar_with(a, xi, eta, truncation, BarOptions::default())
}

pub fn build_bar_with(
    a: &Cdga,
    xi: &Augmentation,
    eta: &Augmentation,
    truncation: usize,
    options: BarOptions,
) -> Result<BarComplex, BarError> {
    let report = check_axioms(a);
    if !report.is_valid() {
        return Err(BarError::InvalidCdga(report));
    }
    let right = Augmentation::new(a, xi.values().clone())?;
    let left = Augmentation::new(a, eta.values().clone())?;
    let letters = reduce_letters(a, &right)?;

    let estimated = word_count(letters.len(), truncation);
    if estimated > options.basis_cap {
        return Err(BarError::BasisCapExceeded { estimated, cap: options.basis_cap });
    }

    let letter_d = letters.letters.iter().map(|l| letters.project(&a.d(&l.element))).collect();
    let mut letter_products = HashMap::new();
    for (k, x) in letters.letters.iter().enumerate() {
        for (l, y) in letters.letters.iter().enumerate() {
            let p = letters.project(&a.mul(&x.element, &y.element));
            if !p.is_empty() {
                letter_products.insert((k, l), p);
            }
        }
    }
    let letter_eta = letters.letters.iter().map(|l| left.evaluate(&l.element)).collect();

    let mut bar = BarComplex {
        source: a.clone(),
        left,
        right,
        truncation,
        letters,
        letter_d,
        letter_products,
        letter_eta,
        basis: BTreeMap::new(),
        position: HashMap::new(),
        differential: BTreeMap::new(),
    };

    for w in all_words(bar.letters.len(), truncation) {
        let deg = bar.word_degree(&w);
        let slot = bar.basis.entry(deg).or_default();
        bar.position.insert(w.clone(), slot.len());
        slot.push(w);
    }

    let degrees: Vec<i64> = bar.basis.keys().copied().collect();
    for &deg in &degrees {
        let columns: Vec<SparseVec> = bar.basis[&deg]
            .iter()
            .map(|w| {
                bar.differential_of(w)
                    .iter()
                    .map(|(v, c)| (bar.position[v], c.clone()))
                    .collect()
            })
            .collect();
        let rows = bar.dim_in(deg + 1);
        let m = SparseMatrix::from_columns(rows, &columns)?;
        bar.differential.insert(deg, m);
    }

    for &deg in &degrees {
        if !bar.differential(deg + 1).mul(&bar.differential(deg)).is_zero() {
            return Err(BarError::DifferentialSquareNonzero { degree: deg });
        }
    }
    Ok(bar)
}

impl BarComplex {
    pub fn source(&self) -> &Cdga {
        &self.source
    }

    pub fn left_augmentation(&self) -> &Augmentation {
        &self.left
    }

    pub fn right_augmentation(&self) -> &Augmentation {
        &self.right
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn letters(&self) -> &ReducedBasis {
        &self.letters
    }

    pub fn letter_shifted_degree(&self, k: usize) -> i64 {
        sign::shifted(self.letters.letters[k].degree as i64)
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        w.letters().iter().map(|&k| self.letter_shifted_degree(k)).sum()
    }

    /// Degrees carrying at least one word.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.basis.keys().copied()
    }

    pub fn basis_in(&self, degree: i64) -> &[Word] {
        self.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn dim_in(&self, degree: i64) -> usize {
        self.basis_in(degree).len()
    }

    pub fn total_dim(&self) -> usize {
        self.position.len()
    }

    /// `D : B^degree → B^{degree+1}`.
    pub fn differential(&self, degree: i64) -> SparseMatrix {
        self.differential
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim_in(degree + 1), self.dim_in(degree)))
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.position.get(w).copied()
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display_with(&self.letters.names()).to_string()
    }

    /// Total differential of a single word.
    pub fn differential_of(&self, w: &Word) -> LinComb<Word> {
        let letters = w.letters();
        let n = letters.len();
        let mut out = LinComb::zero();
        let mut eps = 0i64;
        for i in 0..n {
            let a = letters[i];
            let s = sign::as_rational(sign::parity(eps + 1));
            for (&b, c) in &self.letter_d[a] {
                let mut v = letters.to_vec();
                v[i] = b;
                out.add_term(Word(v), &s * c);
            }
            let eps_next = eps + self.letter_shifted_degree(a);
            if i + 1 < n {
                if let Some(prod) = self.letter_products.get(&(a, letters[i + 1])) {
                    let s = sign::as_rational(sign::parity(eps_next));
                    for (&b, c) in prod {
                        let mut v = letters[..i].to_vec();
                        v.push(b);
                        v.extend_from_slice(&letters[i + 2..]);
                        out.add_term(Word(v), &s * c);
                    }
                }
            }
            eps = eps_next;
        }
        if n > 0 {
            out.add_term(Word(letters[1..].to_vec()), self.letter_eta[letters[0]].clone());
        }
        out
    }

    /// Every entry of `D` either keeps the word length or lowers it by one.
    pub fn respects_length_filtration(&self) -> bool {
        self.differential.iter().all(|(&deg, m)| {
            m.entries().all(|(r, c, _)| {
                let src = self.basis_in(deg)[c].len();
                let dst = self.basis_in(deg + 1)[r].len();
                dst == src || dst + 1 == src
            })
        })
    }

    pub fn to_vector(&self, element: &LinComb<Word>) -> Result<(i64, SparseVec), BarError> {
        let mut degree = None;
        let mut v = SparseVec::new();
        for (w, c) in element.iter() {
            let Some(&p) = self.position.get(w) else {
                return Err(BarError::TruncationExceeded { length: w.len(), truncation: self.truncation });
            };
            let d = self.word_degree(w);
            if *degree.get_or_insert(d) != d {
                return Err(LinalgError::NotInSpan.into());
            }
            v.insert(p, c.clone());
        }
        Ok((degree.unwrap_or(0), v))
    }

    pub fn from_vector(&self, degree: i64, v: &SparseVec) -> LinComb<Word> {
        let basis = self.basis_in(degree);
        v.iter().map(|(&p, c)| (basis[p].clone(), c.clone())).collect()
    }

    /// Signed shuffle of two words, letters carrying their shifted degrees.
    pub fn shuffle_words(&self, u: &Word, v: &Word) -> LinComb<Word> {
        fn rec(bar: &BarComplex, u: &[usize], v: &[usize], prefix: &mut Vec<usize>, sign: i64, out: &mut LinComb<Word>) {
            if u.is_empty() || v.is_empty() {
                let mut w = prefix.clone();
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                out.add_term(Word(w), sign::as_rational(sign));
                return;
            }
            prefix.push(u[0]);
            rec(bar, &u[1..], v, prefix, sign, out);
            prefix.pop();
            // v[0] moves past all of u
            let su: i64 = u.iter().map(|&k| bar.letter_shifted_degree(k)).sum();
            let s = sign * sign::koszul(bar.letter_shifted_degree(v[0]), su);
            prefix.push(v[0]);
            rec(bar, u, &v[1..], prefix, s, out);
            prefix.pop();
        }
        let mut out = LinComb::zero();
        rec(self, u.letters(), v.letters(), &mut Vec::new(), 1, &mut out);
        out
    }

    pub fn shuffle(&self, x: &LinComb<Word>, y: &LinComb<Word>) -> LinComb<Word> {
        let mut out = LinComb::zero();
        for (u, a) in x.iter() {
            for (v, b) in y.iter() {
                out.add_scaled(&self.shuffle_words(u, v), &(a * b));
            }
        }
        out
    }
}

/// Cohomology of the truncated bar complex in one degree.
#[derive(Debug, Clone)]
pub struct BarCohomology {
    pub degree: i64,
    pub dimension: usize,
    pub representatives: Vec<LinComb<Word>>,
    quotient: QuotientBasis,
}

impl BarCohomology {
    /// Coordinates of a cocycle in the representative basis.
    pub fn coordinates(&self, bar: &BarComplex, cocycle: &LinComb<Word>) -> Result<Vec<Rational>, BarError> {
        if cocycle.is_zero() {
            return Ok(vec![Rational::zero(); self.dimension]);
        }
        let (degree, v) = bar.to_vector(cocycle)?;
        if degree != self.degree {
            return Err(LinalgError::NotInSpan.into());
        }
        Ok(self.quotient.coordinates(&v)?)
    }
}

pub fn bar_cohomology(bar: &BarComplex, degree: i64) -> BarCohomology {
    let cocycles = kernel_basis(&bar.differential(degree));
    let boundaries = bar.differential(degree - 1).column_vectors();
    let quotient = quotient_basis(bar.dim_in(degree), &boundaries, &cocycles)
        .expect("D∘D = 0 was asserted at construction");
    let representatives = quotient.representatives().iter().map(|v| bar.from_vector(degree, v)).collect();
    BarCohomology { degree, dimension: quotient.dim(), representatives, quotient }
}

/// Dimensions of `F_n H⁰ / F_{n-1} H⁰` where `F_n` holds classes represented
/// by cocycles of word length `≤ n`.
pub fn h0_length_dimensions(bar: &BarComplex) -> Vec<usize> {
    let words = bar.basis_in(0);
    let d0 = bar.differential(0);
    let boundaries = bar.differential(-1).column_vectors();
    let base = rank_of(&boundaries);
    let mut dims = Vec::new();
    let mut previous = 0usize;
    for n in 0..=bar.truncation() {
        let cols = words.iter().take_while(|w| w.len() <= n).count();
        let mut sub = SparseMatrix::zeros(d0.rows(), cols);
        for (r, c, x) in d0.entries() {
            if c < cols {
                sub.set(r, c, x.clone());
            }
        }
        let mut all = boundaries.clone();
        all.extend(kernel_basis(&sub));
        let filtered = rank_of(&all) - base;
        dims.push(filtered - previous);
        previous = filtered;
    }
    dims
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcentrationReport {
    pub truncation: usize,
    pub dimensions: BTreeMap<i64, usize>,
    pub h0_length_dimensions: Vec<usize>,
    pub verdict: Verdict,
}

impl ConcentrationReport {
    pub fn to_rows(&self) -> Rows {
        let mut r = Rows::new();
        r.push("truncation", self.truncation);
        for (d, dim) in &self.dimensions {
            r.push(format!("H^{d}"), dim);
        }
        for (n, dim) in self.h0_length_dimensions.iter().enumerate() {
            r.push(format!("H^0.length.{n}"), dim);
        }
        r.push("concentration", self.verdict);
        r
    }
}

/// Cohomology in every degree carrying words; passes iff only `H⁰` survives.
pub fn verify_concentration(bar: &BarComplex) -> ConcentrationReport {
    let mut dimensions = BTreeMap::new();
    dimensions.insert(0, 0);
    for d in bar.degrees().collect::<Vec<_>>() {
        dimensions.insert(d, bar_cohomology(bar, d).dimension);
    }
    dimensions.insert(0, bar_cohomology(bar, 0).dimension);
    let ok = dimensions.iter().all(|(&d, &dim)| d == 0 || dim == 0);
    ConcentrationReport {
        truncation: bar.truncation(),
        dimensions,
        h0_length_dimensions: h0_length_dimensions(bar),
        verdict: Verdict::from_bool(ok),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectednessReport {
    pub h0_dimension: usize,
    pub verdict: Verdict,
}

impl ConnectednessReport {
    pub fn to_rows(&self) -> Rows {
        let mut r = Rows::new();
        r.push("H^0", self.h0_dimension);
        r.push("connectedness", self.verdict);
        r
    }
}

pub fn verify_connectedness(bar: &BarComplex) -> ConnectednessReport {
    let h0_dimension = bar_cohomology(bar, 0).dimension;
    ConnectednessReport { h0_dimension, verdict: Verdict::from_bool(h0_dimension >= 1) }
}

/// Product of two `H⁰` basis classes, in `H⁰` coordinates.
pub fn h0_product(bar: &BarComplex, h0: &BarCohomology, i: usize, j: usize) -> Result<Vec<Rational>, BarError> {
    let x = &h0.representatives[i];
    let y = &h0.representatives[j];
    let longest = |c: &LinComb<Word>| c.keys().map(Word::len).max().unwrap_or(0);
    let length = longest(x) + longest(y);
    if length > bar.truncation() {
        return Err(BarError::TruncationExceeded { length, truncation: bar.truncation() });
    }
    h0.coordinates(bar, &bar.shuffle(x, y))
}
