//! The shuffle Hopf algebra on words in degree-one letters.
//!
//! This is `H⁰` of the bar complex of a formal model: the coordinate ring of
//! the unipotent fundamental group. Products are shuffles, the coproduct is
//! deconcatenation and the antipode is `S(w) = (-1)^|w| rev(w)`. All tables
//! are truncated at word length `N`; a product whose factors have total
//! length above `N` is reported rather than silently dropped.
//!
//! Level-`n` quotients of the fundamental group correspond to the
//! sub-coalgebra of words of length `< n`.
//!
//! The module also carries the groupoid bookkeeping for cocomposition, the
//! cotorsor checks and the Künneth concentration argument.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::bar::{bar_cohomology, h0_product, BarComplex, BarError};
use crate::lincomb::LinComb;
use crate::linalg::{rank, Rational, SparseMatrix};
use crate::rational::format_rational;
use crate::report::{Rows, Verdict};
use crate::word::{all_words, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("product leaves the truncation (length {length} > {truncation})")]
    TruncationExceeded { length: usize, truncation: usize },
    #[error("truncations differ: algebra {algebra}, cotorsor {cotorsor}")]
    TruncationMismatch { algebra: usize, cotorsor: usize },
    #[error("H^0 of the cotorsor vanishes")]
    ZeroH0,
    #[error("level {level} is outside 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("letter {letter} is outside an alphabet of {alphabet}")]
    UnknownLetter { letter: usize, alphabet: usize },
}

/// Signless shuffle of two words.
pub fn shuffle_words(u: &Word, v: &Word) -> LinComb<Word> {
    fn rec(u: &[usize], v: &[usize], prefix: &mut Vec<usize>, out: &mut LinComb<Word>) {
        if u.is_empty() || v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            out.add_term(Word(w), Rational::one());
            return;
        }
        prefix.push(u[0]);
        rec(&u[1..], v, prefix, out);
        prefix.pop();
        prefix.push(v[0]);
        rec(u, &v[1..], prefix, out);
        prefix.pop();
    }
    let mut out = LinComb::zero();
    rec(u.letters(), v.letters(), &mut Vec::with_capacity(u.len() + v.len()), &mut out);
    out
}

/// `Δ(w) = Σ_k w[..k] ⊗ w[k..]`.
pub fn deconcatenate(w: &Word) -> LinComb<(Word, Word)> {
    (0..=w.len()).map(|k| (w.split_at(k), Rational::one())).collect()
}

/// `S(w) = (-1)^|w| rev(w)`.
pub fn antipode(w: &Word) -> LinComb<Word> {
    let s = if w.len().is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    LinComb::from_iter([(w.reversed(), s)])
}

pub fn counit(w: &Word) -> Rational {
    if w.is_empty() {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Renders a formal sum of words as `c*[a|b] + …`, or `0`.
pub fn format_words(c: &LinComb<Word>, names: &[String]) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    c.iter()
        .map(|(w, x)| format!("{}*{}", format_rational(x), w.display_with(names)))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn format_pairs(c: &LinComb<(Word, Word)>, names: &[String]) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    c.iter()
        .map(|((u, v), x)| format!("{}*{}⊗{}", format_rational(x), u.display_with(names), v.display_with(names)))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorWordAlgebra {
    letters: Vec<String>,
    truncation: usize,
    basis: Vec<Word>,
}

impl TensorWordAlgebra {
    pub fn new(letters: Vec<String>, truncation: usize) -> Self {
        let basis = all_words(letters.len(), truncation);
        TensorWordAlgebra { letters, truncation, basis }
    }

    /// Letters named `w0, w1, …`.
    pub fn with_letter_count(m: usize, truncation: usize) -> Self {
        Self::new((0..m).map(|i| format!("w{i}")).collect(), truncation)
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Words of length `≤ N`, by length and then lexicographically.
    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() <= self.truncation && w.letters().iter().all(|&a| a < self.letters.len())
    }

    fn check(&self, w: &Word) -> Result<(), HopfError> {
        if let Some(&letter) = w.letters().iter().find(|&&a| a >= self.letters.len()) {
            return Err(HopfError::UnknownLetter { letter, alphabet: self.letters.len() });
        }
        if w.len() > self.truncation {
            return Err(HopfError::TruncationExceeded { length: w.len(), truncation: self.truncation });
        }
        Ok(())
    }

    pub fn shuffle_product(&self, u: &Word, v: &Word) -> Result<LinComb<Word>, HopfError> {
        self.check(u)?;
        self.check(v)?;
        let length = u.len() + v.len();
        if length > self.truncation {
            return Err(HopfError::TruncationExceeded { length, truncation: self.truncation });
        }
        Ok(shuffle_words(u, v))
    }

    pub fn multiply(&self, x: &LinComb<Word>, y: &LinComb<Word>) -> Result<LinComb<Word>, HopfError> {
        let mut out = LinComb::zero();
        for (u, a) in x.iter() {
            for (v, b) in y.iter() {
                out.add_scaled(&self.shuffle_product(u, v)?, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn deconcatenate(&self, w: &Word) -> Result<LinComb<(Word, Word)>, HopfError> {
        self.check(w)?;
        Ok(deconcatenate(w))
    }

    pub fn antipode(&self, w: &Word) -> Result<LinComb<Word>, HopfError> {
        self.check(w)?;
        Ok(antipode(w))
    }

    pub fn display(&self, w: &Word) -> String {
        w.display_with(&self.letters).to_string()
    }

    /// Words of length `< level`, as an algebra truncated at `level - 1`.
    pub fn length_quotient(&self, level: usize) -> Result<TensorWordAlgebra, HopfError> {
        if level == 0 || level > self.truncation + 1 {
            return Err(HopfError::LevelOutOfRange { level, max: self.truncation + 1 });
        }
        Ok(TensorWordAlgebra::new(self.letters.clone(), level - 1))
    }

    /// Shuffle and coproduct tables for inspection.
    pub fn tables(&self) -> Rows {
        let mut r = Rows::new();
        r.push("letters", self.letters.join(","));
        r.push("truncation", self.truncation);
        r.push("dim", self.dim());
        for u in &self.basis {
            for v in &self.basis {
                if u.len() + v.len() <= self.truncation && !u.is_empty() && !v.is_empty() && u <= v {
                    r.push(
                        format!("shuffle.{}.{}", self.display(u), self.display(v)),
                        format_words(&shuffle_words(u, v), &self.letters),
                    );
                }
            }
        }
        for w in &self.basis {
            r.push(format!("coproduct.{}", self.display(w)), format_pairs(&deconcatenate(w), &self.letters));
        }
        for w in &self.basis {
            r.push(format!("antipode.{}", self.display(w)), format_words(&antipode(w), &self.letters));
        }
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum HopfAxiom {
    Associativity,
    Commutativity,
    Unit,
    Coassociativity,
    Counit,
    Compatibility,
    Antipode,
}

impl fmt::Display for HopfAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HopfAxiom::Associativity => "associativity",
            HopfAxiom::Commutativity => "commutativity",
            HopfAxiom::Unit => "unit",
            HopfAxiom::Coassociativity => "coassociativity",
            HopfAxiom::Counit => "counit",
            HopfAxiom::Compatibility => "compatibility",
            HopfAxiom::Antipode => "antipode",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfViolation {
    pub axiom: HopfAxiom,
    pub words: Vec<Word>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HopfReport {
    pub violations: Vec<HopfViolation>,
    pub checked: BTreeMap<HopfAxiom, usize>,
}

impl HopfReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.is_empty())
    }

    fn record(&mut self, axiom: HopfAxiom, ok: bool, words: &[&Word]) {
        *self.checked.entry(axiom).or_default() += 1;
        if !ok {
            self.violations.push(HopfViolation { axiom, words: words.iter().map(|&w| w.clone()).collect() });
        }
    }

    pub fn to_rows(&self, names: &[String]) -> Rows {
        let mut r = Rows::new();
        for (axiom, n) in &self.checked {
            let bad = self.violations.iter().filter(|v| v.axiom == *axiom).count();
            r.push(format!("{axiom}.checked"), n);
            r.push(format!("{axiom}"), Verdict::from_bool(bad == 0));
        }
        for v in self.violations.iter().take(20) {
            let ws: Vec<String> = v.words.iter().map(|w| w.display_with(names).to_string()).collect();
            r.push(format!("violation.{}", v.axiom), ws.join(" "));
        }
        r.push("hopf", self.verdict());
        r
    }
}

fn apply_pairs(
    c: &LinComb<(Word, Word)>,
    mut f: impl FnMut(&Word, &Word) -> LinComb<Word>,
) -> LinComb<Word> {
    let mut out = LinComb::zero();
    for ((u, v), x) in c.iter() {
        out.add_scaled(&f(u, v), x);
    }
    out
}

fn tensor(x: &LinComb<(Word, Word)>, y: &LinComb<(Word, Word)>) -> LinComb<(Word, Word)> {
    let mut out = LinComb::zero();
    for ((a, b), p) in x.iter() {
        for ((c, d), q) in y.iter() {
            let left = shuffle_words(a, c);
            let right = shuffle_words(b, d);
            for (l, s) in left.iter() {
                for (r, t) in right.iter() {
                    out.add_term((l.clone(), r.clone()), p * q * s * t);
                }
            }
        }
    }
    out
}

pub fn check_hopf_axioms(h: &TensorWordAlgebra) -> HopfReport {
    check_hopf_axioms_with(h, antipode)
}

/// Checks every axiom on all basis words (and pairs, triples) whose total
/// length fits in the truncation, with a caller-supplied antipode.
pub fn check_hopf_axioms_with(h: &TensorWordAlgebra, s: impl Fn(&Word) -> LinComb<Word>) -> HopfReport {
    let n = h.truncation;
    let mut report = HopfReport::default();
    let basis = h.basis();
    let empty = Word::empty();

    for u in basis {
        report.record(HopfAxiom::Unit, shuffle_words(&empty, u) == LinComb::single(u.clone()), &[u]);

        let d = deconcatenate(u);
        let left: LinComb<Word> = d.iter().map(|((a, b), x)| (b.clone(), x * counit(a))).collect();
        let right: LinComb<Word> = d.iter().map(|((a, b), x)| (a.clone(), x * counit(b))).collect();
        let single = LinComb::single(u.clone());
        report.record(HopfAxiom::Counit, left == single && right == single, &[u]);

        let mut lhs: LinComb<(Word, Word, Word)> = LinComb::zero();
        let mut rhs: LinComb<(Word, Word, Word)> = LinComb::zero();
        for ((a, b), x) in d.iter() {
            for ((p, q), y) in deconcatenate(a).iter() {
                lhs.add_term((p.clone(), q.clone(), b.clone()), x * y);
            }
            for ((p, q), y) in deconcatenate(b).iter() {
                rhs.add_term((a.clone(), p.clone(), q.clone()), x * y);
            }
        }
        report.record(HopfAxiom::Coassociativity, lhs == rhs, &[u]);

        let unit_counit: LinComb<Word> = LinComb::from_iter([(Word::empty(), counit(u))]);
        let sl = apply_pairs(&d, |a, b| {
            let mut out = LinComb::zero();
            for (sa, x) in s(a).iter() {
                out.add_scaled(&shuffle_words(sa, b), x);
            }
            out
        });
        let sr = apply_pairs(&d, |a, b| {
            let mut out = LinComb::zero();
            for (sb, x) in s(b).iter() {
                out.add_scaled(&shuffle_words(a, sb), x);
            }
            out
        });
        report.record(HopfAxiom::Antipode, sl == unit_counit && sr == unit_counit, &[u]);
    }

    for u in basis {
        for v in basis.iter().filter(|v| u.len() + v.len() <= n) {
            let uv = shuffle_words(u, v);
            report.record(HopfAxiom::Commutativity, uv == shuffle_words(v, u), &[u, v]);

            let lhs = uv.map_linear(deconcatenate);
            let rhs = tensor(&deconcatenate(u), &deconcatenate(v));
            report.record(HopfAxiom::Compatibility, lhs == rhs, &[u, v]);

            for w in basis.iter().filter(|w| u.len() + v.len() + w.len() <= n) {
                let left = uv.map_linear(|x| shuffle_words(x, w));
                let right = shuffle_words(v, w).map_linear(|x| shuffle_words(u, x));
                report.record(HopfAxiom::Associativity, left == right, &[u, v, w]);
            }
        }
    }
    report
}

/// A word of the path ring from vertex `from` to vertex `to`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledWord {
    pub from: String,
    pub to: String,
    pub word: Word,
}

impl LabeledWord {
    pub fn new(from: &str, to: &str, word: Word) -> Self {
        LabeledWord { from: from.to_string(), to: to.to_string(), word }
    }
}

/// Cocomposition along `from → via → to`. Factors are listed in traversal
/// order: the first lives on `from → via`, the second on `via → to`.
pub fn cocomposition(
    h: &TensorWordAlgebra,
    w: &LabeledWord,
    via: &str,
) -> Result<LinComb<(LabeledWord, LabeledWord)>, HopfError> {
    Ok(h.deconcatenate(&w.word)?
        .iter()
        .map(|((a, b), x)| {
            (
                (LabeledWord::new(&w.from, via, a.clone()), LabeledWord::new(via, &w.to, b.clone())),
                x.clone(),
            )
        })
        .collect())
}

/// Counit at a vertex: defined on loops only, `[] ↦ 1`.
pub fn vertex_counit(w: &LabeledWord) -> Option<Rational> {
    (w.from == w.to).then(|| counit(&w.word))
}

/// `(Δ_η ⊗ id) Δ_ζ = (id ⊗ Δ_ζ) Δ_η` on a word from `vertices[0]` to
/// `vertices[3]` through `vertices[1]` and `vertices[2]`.
pub fn cocomposition_coassociative(
    h: &TensorWordAlgebra,
    w: &Word,
    vertices: [&str; 4],
) -> Result<bool, HopfError> {
    let [a, b, c, d] = vertices;
    let lw = LabeledWord::new(a, d, w.clone());
    let mut lhs: LinComb<(LabeledWord, LabeledWord, LabeledWord)> = LinComb::zero();
    for ((x, y), p) in cocomposition(h, &lw, c)?.iter() {
        for ((x1, x2), q) in cocomposition(h, x, b)?.iter() {
            lhs.add_term((x1.clone(), x2.clone(), y.clone()), p * q);
        }
    }
    let mut rhs: LinComb<(LabeledWord, LabeledWord, LabeledWord)> = LinComb::zero();
    for ((x, y), p) in cocomposition(h, &lw, b)?.iter() {
        for ((y1, y2), q) in cocomposition(h, y, c)?.iter() {
            rhs.add_term((x.clone(), y1.clone(), y2.clone()), p * q);
        }
    }
    Ok(lhs == rhs)
}

/// Counit on either side of a cocomposition recovers the word.
pub fn cocomposition_counital(h: &TensorWordAlgebra, w: &Word, from: &str, to: &str) -> Result<bool, HopfError> {
    let lw = LabeledWord::new(from, to, w.clone());
    let mut left = LinComb::zero();
    for ((x, y), p) in cocomposition(h, &lw, from)?.iter() {
        left.add_term(y.clone(), p * vertex_counit(x).unwrap_or_else(Rational::zero));
    }
    let mut right = LinComb::zero();
    for ((x, y), p) in cocomposition(h, &lw, to)?.iter() {
        right.add_term(x.clone(), p * vertex_counit(y).unwrap_or_else(Rational::zero));
    }
    let single = LinComb::single(lw);
    Ok(left == single && right == single)
}

/// Full groupoid check: coassociativity across three intermediate vertices
/// and counitality, for every basis word.
pub fn check_cocomposition(h: &TensorWordAlgebra) -> Result<Rows, HopfError> {
    let mut coassoc = 0usize;
    let mut counital = 0usize;
    let mut bad = Vec::new();
    for w in h.basis() {
        if cocomposition_coassociative(h, w, ["xi", "eta", "zeta", "theta"])? {
            coassoc += 1;
        } else {
            bad.push(h.display(w));
        }
        if cocomposition_counital(h, w, "xi", "eta")? {
            counital += 1;
        } else {
            bad.push(h.display(w));
        }
    }
    let mut r = Rows::new();
    r.push("cocomposition.coassociative", format!("{coassoc}/{}", h.dim()));
    r.push("cocomposition.counital", format!("{counital}/{}", h.dim()));
    for b in bad.iter().take(20) {
        r.push("cocomposition.violation", b);
    }
    r.push("cocomposition", Verdict::from_bool(bad.is_empty()));
    Ok(r)
}

/// A truncated algebra map `H → ℚ`, stored by its values on basis words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    values: BTreeMap<Word, Rational>,
}

impl Character {
    pub fn counit(h: &TensorWordAlgebra) -> Self {
        Character { values: h.basis().iter().map(|w| (w.clone(), counit(w))).collect() }
    }

    /// `w ↦ Π c_{wᵢ} / |w|!`, the exponential of the primitive `Σ c_a a*`.
    pub fn exponential(h: &TensorWordAlgebra, c: &[Rational]) -> Self {
        let values = h
            .basis()
            .iter()
            .map(|w| {
                let mut x = Rational::one();
                for (k, &a) in w.letters().iter().enumerate() {
                    x = x * &c[a] / Rational::from_integer((k as i64 + 1).into());
                }
                (w.clone(), x)
            })
            .collect();
        Character { values }
    }

    pub fn value(&self, w: &Word) -> Rational {
        self.values.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn evaluate(&self, x: &LinComb<Word>) -> Rational {
        x.iter().map(|(w, c)| c * self.value(w)).fold(Rational::zero(), |a, b| a + b)
    }

    /// Multiplicative on every shuffle within the truncation, unital.
    pub fn is_character(&self, h: &TensorWordAlgebra) -> bool {
        if self.value(&Word::empty()) != Rational::one() {
            return false;
        }
        h.basis().iter().all(|u| {
            h.basis()
                .iter()
                .filter(|v| u.len() + v.len() <= h.truncation())
                .all(|v| self.evaluate(&shuffle_words(u, v)) == self.value(u) * self.value(v))
        })
    }

    /// `(f ⋆ g)(w) = Σ f(w[..k]) g(w[k..])`.
    pub fn convolve(&self, other: &Character, h: &TensorWordAlgebra) -> Character {
        let values = h
            .basis()
            .iter()
            .map(|w| {
                let x = deconcatenate(w)
                    .iter()
                    .map(|((a, b), c)| c * self.value(a) * other.value(b))
                    .fold(Rational::zero(), |a, b| a + b);
                (w.clone(), x)
            })
            .collect();
        Character { values }
    }

    /// `f ∘ S`.
    pub fn inverse(&self, h: &TensorWordAlgebra) -> Character {
        Character { values: h.basis().iter().map(|w| (w.clone(), self.evaluate(&antipode(w)))).collect() }
    }
}

/// Identification of bar `H⁰` of a formal model with the word algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarConsistency {
    pub words_match: bool,
    pub products_checked: usize,
    pub products_matching: usize,
}

impl BarConsistency {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.words_match && self.products_checked == self.products_matching)
    }

    pub fn to_rows(&self) -> Rows {
        let mut r = Rows::new();
        r.push("bar.words_match", self.words_match);
        r.push("bar.products", format!("{}/{}", self.products_matching, self.products_checked));
        r.push("bar.consistency", self.verdict());
        r
    }
}

/// Checks that every `H⁰` representative of `bar` is a single word of `h`
/// (and every word occurs), and that the bar product of any two classes
/// whose lengths fit agrees with the shuffle product.
pub fn compare_with_bar(bar: &BarComplex, h: &TensorWordAlgebra) -> Result<BarConsistency, BarError> {
    let h0 = bar_cohomology(bar, 0);
    let mut words = Vec::new();
    for rep in &h0.representatives {
        let mut it = rep.iter();
        match (it.next(), it.next()) {
            (Some((w, c)), None) if c.is_one() => words.push(w.clone()),
            _ => {
                return Ok(BarConsistency { words_match: false, products_checked: 0, products_matching: 0 });
            }
        }
    }
    let mut sorted = words.clone();
    sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let words_match = sorted == h.basis() && bar.letters().len() == h.letter_count();
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();

    let mut checked = 0;
    let mut matching = 0;
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if u.len() + v.len() > h.truncation() {
                continue;
            }
            checked += 1;
            let coords = h0_product(bar, &h0, i, j)?;
            let mut expected = vec![Rational::zero(); words.len()];
            for (w, c) in shuffle_words(u, v).iter() {
                match index.get(w) {
                    Some(&k) => expected[k] += c,
                    None => continue,
                }
            }
            if coords == expected {
                matching += 1;
            }
        }
    }
    Ok(BarConsistency { words_match, products_checked: checked, products_matching: matching })
}

/// A comodule algebra over the word algebra, presented by tables.
///
/// Basis element `i` has length filtration `lengths[i]`. The product table
/// lists nonzero products of basis pairs; the coaction sends `i` to
/// `Σ (h, j)` meaning `h ⊗ e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotorsorData {
    pub name: String,
    pub basis: Vec<Word>,
    pub lengths: Vec<usize>,
    pub product: BTreeMap<(usize, usize), LinComb<usize>>,
    pub unit: Option<usize>,
    pub coaction: Vec<LinComb<(Word, usize)>>,
    pub truncation: usize,
}

impl CotorsorData {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn mul(&self, i: usize, j: usize) -> LinComb<usize> {
        self.product.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// `H` coacting on itself by deconcatenation.
    pub fn trivial(h: &TensorWordAlgebra) -> Self {
        Self::translated(h, &vec![Rational::zero(); h.letter_count()])
    }

    /// `H` with coaction `(id ⊗ φ) ∘ Δ ∘ φ⁻¹`, where `φ = (g ⊗ id) ∘ Δ` is
    /// left translation by the character `g = exp(Σ c_a a*)`. The map `φ` is
    /// an algebra automorphism with `φ(a) = a + c_a` on letters.
    pub fn translated(h: &TensorWordAlgebra, c: &[Rational]) -> Self {
        let g = Character::exponential(h, c);
        let g_inv = g.inverse(h);
        let index: BTreeMap<&Word, usize> = h.basis().iter().enumerate().map(|(i, w)| (w, i)).collect();
        let translate = |ch: &Character, x: &LinComb<Word>| -> LinComb<Word> {
            x.map_linear(|w| deconcatenate(w).iter().map(|((a, b), x)| (b.clone(), x * ch.value(a))).collect())
        };
        let psi = |x: &LinComb<Word>| translate(&g, x);
        let psi_inv = |x: &LinComb<Word>| translate(&g_inv, x);

        let mut product = BTreeMap::new();
        for (i, u) in h.basis().iter().enumerate() {
            for (j, v) in h.basis().iter().enumerate() {
                if u.len() + v.len() <= h.truncation() {
                    let p: LinComb<usize> = shuffle_words(u, v).iter().map(|(w, x)| (index[w], x.clone())).collect();
                    if !p.is_zero() {
                        product.insert((i, j), p);
                    }
                }
            }
        }

        let coaction = h
            .basis()
            .iter()
            .map(|w| {
                let mut out = LinComb::zero();
                for (v, x) in psi_inv(&LinComb::single(w.clone())).iter() {
                    for ((a, b), y) in deconcatenate(v).iter() {
                        for (r, z) in psi(&LinComb::single(b.clone())).iter() {
                            out.add_term((a.clone(), index[r]), x * y * z);
                        }
                    }
                }
                out
            })
            .collect();

        let twisted = c.iter().any(|x| !x.is_zero());
        CotorsorData {
            name: if twisted { "translated".into() } else { "trivial".into() },
            basis: h.basis().to_vec(),
            lengths: h.basis().iter().map(Word::len).collect(),
            product,
            unit: Some(0),
            coaction,
            truncation: h.truncation(),
        }
    }

    pub fn zero(truncation: usize) -> Self {
        CotorsorData {
            name: "zero".into(),
            basis: Vec::new(),
            lengths: Vec::new(),
            product: BTreeMap::new(),
            unit: None,
            coaction: Vec::new(),
            truncation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotorsorReport {
    pub name: String,
    pub coaction: Verdict,
    pub galois: Verdict,
    pub galois_rank: usize,
    pub galois_size: usize,
    pub nonzero: Verdict,
}

impl CotorsorReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.coaction.passed() && self.galois.passed() && self.nonzero.passed())
    }

    pub fn to_rows(&self) -> Rows {
        let mut r = Rows::new();
        r.push("coaction", self.coaction);
        r.push("galois.rank", format!("{}/{}", self.galois_rank, self.galois_size));
        r.push("galois", self.galois);
        r.push("nonzero", self.nonzero);
        r.push("cotorsor", self.verdict());
        r
    }
}

/// Checks (i) counit and coassociativity of the coaction, (ii) bijectivity
/// of the Galois map `x ⊗ y ↦ Σ h ⊗ p·y` on pairs of total length `≤ N`,
/// and (iii) that `P` is a nonzero unital algebra.
pub fn verify_cotorsor(p: &CotorsorData, h: &TensorWordAlgebra) -> Result<CotorsorReport, HopfError> {
    if p.truncation != h.truncation() {
        return Err(HopfError::TruncationMismatch { algebra: h.truncation(), cotorsor: p.truncation });
    }
    let mut coaction_ok = p.coaction.len() == p.dim();
    for (i, rho) in p.coaction.iter().enumerate() {
        if !coaction_ok {
            break;
        }
        let counit_side: LinComb<usize> = rho.iter().map(|((w, j), x)| (*j, x * counit(w))).collect();
        coaction_ok &= counit_side == LinComb::single(i);

        let mut lhs: LinComb<(Word, Word, usize)> = LinComb::zero();
        let mut rhs: LinComb<(Word, Word, usize)> = LinComb::zero();
        for ((w, j), x) in rho.iter() {
            for ((a, b), y) in deconcatenate(w).iter() {
                lhs.add_term((a.clone(), b.clone(), *j), x * y);
            }
            for ((v, k), y) in p.coaction[*j].iter() {
                rhs.add_term((w.clone(), v.clone(), *k), x * y);
            }
        }
        coaction_ok &= lhs == rhs;
    }

    let n = p.truncation;
    let pairs: Vec<(usize, usize)> = (0..p.dim())
        .flat_map(|i| (0..p.dim()).map(move |j| (i, j)))
        .filter(|&(i, j)| p.lengths[i] + p.lengths[j] <= n)
        .collect();
    let mut targets: BTreeMap<(Word, usize), usize> = BTreeMap::new();
    for w in h.basis() {
        for j in 0..p.dim() {
            if w.len() + p.lengths[j] <= n {
                let k = targets.len();
                targets.insert((w.clone(), j), k);
            }
        }
    }
    let mut m = SparseMatrix::zeros(targets.len(), pairs.len());
    let mut stays_filtered = true;
    for (col, &(i, j)) in pairs.iter().enumerate() {
        for ((w, k), x) in p.coaction.get(i).into_iter().flat_map(|c| c.iter()) {
            for (l, y) in p.mul(*k, j).iter() {
                match targets.get(&(w.clone(), *l)) {
                    Some(&row) => m.add_to(row, col, x * y),
                    None => stays_filtered = false,
                }
            }
        }
    }
    let galois_rank = rank(&m);
    let galois_ok = stays_filtered && pairs.len() == targets.len() && galois_rank == pairs.len();

    let nonzero = match p.unit {
        Some(u) if u < p.dim() => (0..p.dim()).all(|i| p.mul(u, i) == LinComb::single(i)),
        _ => false,
    };

    Ok(CotorsorReport {
        name: p.name.clone(),
        coaction: Verdict::from_bool(coaction_ok),
        galois: Verdict::from_bool(galois_ok),
        galois_rank,
        galois_size: pairs.len(),
        nonzero: Verdict::from_bool(nonzero),
    })
}

/// Outcome of the Künneth argument: from `H^i(B) ⊗ H⁰(P) ≅ H^i(P) ⊗ H⁰(P)`
/// and `H⁰(P) ≠ 0`, every `i ≠ 0` with `H^i(B) = 0` forces `H^i(P) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KunnethVerdict {
    pub forced_zero: Vec<i64>,
    pub undetermined: Vec<i64>,
    pub contradictions: Vec<i64>,
}

impl KunnethVerdict {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.contradictions.is_empty())
    }

    /// No degree is left undetermined and none contradicts the lemma.
    pub fn concentrated(&self) -> bool {
        self.undetermined.is_empty() && self.contradictions.is_empty()
    }

    pub fn to_rows(&self) -> Rows {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        let mut r = Rows::new();
        r.push("kunneth.forced_zero", join(&self.forced_zero));
        r.push("kunneth.undetermined", join(&self.undetermined));
        r.push("kunneth.contradictions", join(&self.contradictions));
        r.push("kunneth", self.verdict());
        r
    }
}

pub fn concentration_from_kunneth(
    h_dims: &BTreeMap<i64, usize>,
    p_dims: &BTreeMap<i64, usize>,
) -> Result<KunnethVerdict, HopfError> {
    if p_dims.get(&0).copied().unwrap_or(0) == 0 {
        return Err(HopfError::ZeroH0);
    }
    let mut degrees: Vec<i64> = h_dims.keys().chain(p_dims.keys()).copied().filter(|&i| i != 0).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut v = KunnethVerdict { forced_zero: Vec::new(), undetermined: Vec::new(), contradictions: Vec::new() };
    for i in degrees {
        if h_dims.get(&i).copied().unwrap_or(0) == 0 {
            if p_dims.get(&i).copied().unwrap_or(0) == 0 {
                v.forced_zero.push(i);
            } else {
                v.contradictions.push(i);
            }
        } else {
            v.undetermined.push(i);
        }
    }
    Ok(v)
}
