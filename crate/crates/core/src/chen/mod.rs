//! Iterated integrals of logarithmic forms on punctured lines.
//!
//! For a path `γ: [0, 1] → ℂ ∖ {a_0, …}` and a word `w = (w_1 … w_n)` of
//! form indices we compute
//!
//! ```text
//! I_γ(w) = ∫_{0 ≤ t_1 ≤ … ≤ t_n ≤ 1} f_{w_1}(t_1) ⋯ f_{w_n}(t_n) dt,
//! f_k(t) = γ'(t) / (γ(t) − a_k),
//! ```
//!
//! so the first letter is integrated first. With this ordering
//!
//! * `I_{γ₁γ₂}(w) = Σ_k I_{γ₁}(w_1…w_k) · I_{γ₂}(w_{k+1}…w_n)`,
//! * `I_{γ⁻¹}(w) = (−1)^n I_γ(w_n…w_1)`,
//! * transport solves `T' = T·Ω`, hence `T(γ₁γ₂) = T(γ₁)·T(γ₂)` and
//!   `T = Σ_w I_γ(w) M_{w_1}⋯M_{w_n}` where `Ω = Σ_k M_k ω_k`.

pub mod document;
pub mod geometry;
pub mod ode;
pub mod real;

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lincomb::LinComb;
use crate::linalg::Rational;
use crate::word::Word;

pub use geometry::{compose_paths, reverse_path, Endpoint, ExactComplex, Path, PuncturedLine, Segment};
pub use ode::StepStats;
pub use real::{Precision, Real};

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChenError {
    #[error("punctures {0} and {1} coincide")]
    DuplicatePuncture(usize, usize),
    #[error("segment {segment} passes within {distance:e} of puncture {puncture} (threshold {threshold:e})")]
    PathTooClose { segment: usize, puncture: usize, distance: f64, threshold: f64 },
    #[error("tolerance {tol:e} not met (estimate {achieved:e})")]
    ToleranceNotMet { achieved: f64, tol: f64 },
    #[error("segment {segment} does not start where the previous one ends")]
    EndpointMismatch { segment: usize },
    #[error("path has no segments")]
    EmptyPath,
    #[error("iterated integral of the empty word requested")]
    EmptyWord,
    #[error("form index {form} out of range ({forms} forms)")]
    UnknownForm { form: usize, forms: usize },
    #[error("connection entry ({row}, {col}) is not strictly upper triangular")]
    NotStrictlyUpperTriangular { row: usize, col: usize },
    #[error("word of length {len} exceeds the bound {bound}")]
    WordTooLong { len: usize, bound: usize },
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("unsupported precision of {0} bits (allowed 1..=106)")]
    UnsupportedPrecision(u32),
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn check_word(w: &Word, forms: usize) -> Result<(), ChenError> {
    match w.letters().iter().find(|&&k| k >= forms) {
        Some(&form) => Err(ChenError::UnknownForm { form, forms }),
        None => Ok(()),
    }
}

/// Integrates a linear system driven by the pulled-back forms along every
/// segment of `path`. `rhs(f, y, dy)` receives `f_k` for every form.
fn integrate_along<T: Real>(
    x: &PuncturedLine,
    path: &Path,
    y: &mut [Complex<T>],
    tol: f64,
    rhs: impl Fn(&[Complex<T>], &[Complex<T>], &mut [Complex<T>]),
) -> Result<(StepStats, f64), ChenError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(ChenError::InvalidTolerance);
    }
    let clearance = x.check_clearance(path)?;
    let punctures: Vec<Complex<T>> = x.punctures().iter().map(ExactComplex::to_real).collect();
    let per_segment = tol / path.segments().len().max(1) as f64;
    let mut stats = StepStats::zero();
    for seg in path.segments() {
        let piece = seg.piece::<T>();
        let field = |s: T, y: &[Complex<T>], dy: &mut [Complex<T>]| {
            let (z, dz) = piece.eval(s);
            let f: Vec<Complex<T>> = punctures
                .iter()
                .map(|a| {
                    let v = z - *a;
                    dz * v.conj() * v.norm_sqr().inv()
                })
                .collect();
            rhs(&f, y, dy);
        };
        stats.absorb(ode::integrate_unit(field, y, per_segment)?);
    }
    Ok((stats, clearance))
}

/// Prefix tree of the words to integrate; node 0 is the empty word.
struct WordTrie {
    parent: Vec<usize>,
    letter: Vec<usize>,
    index: BTreeMap<(usize, usize), usize>,
}

impl WordTrie {
    fn new() -> Self {
        WordTrie { parent: vec![0], letter: vec![usize::MAX], index: BTreeMap::new() }
    }

    fn insert(&mut self, w: &Word) -> usize {
        let mut node = 0;
        for &k in w.letters() {
            node = match self.index.get(&(node, k)) {
                Some(&next) => next,
                None => {
                    let next = self.parent.len();
                    self.parent.push(node);
                    self.letter.push(k);
                    self.index.insert((node, k), next);
                    next
                }
            };
        }
        node
    }

    fn len(&self) -> usize {
        self.parent.len()
    }
}

#[derive(Debug, Clone)]
pub struct Integrals<T> {
    pub words: Vec<Word>,
    pub values: Vec<Complex<T>>,
    pub stats: StepStats,
    pub clearance: f64,
}

impl<T: Real> Integrals<T> {
    pub fn get(&self, w: &Word) -> Option<Complex<T>> {
        self.words.iter().position(|u| u == w).map(|i| self.values[i])
    }
}

/// All requested iterated integrals from a single integration pass. The
/// empty word evaluates to 1.
pub fn iterated_integrals<T: Real>(x: &PuncturedLine, path: &Path, words: &[Word], tol: f64) -> Result<Integrals<T>, ChenError> {
    let mut trie = WordTrie::new();
    let mut nodes = Vec::with_capacity(words.len());
    for w in words {
        check_word(w, x.form_count())?;
        nodes.push(trie.insert(w));
    }
    let mut y = vec![czero::<T>(); trie.len()];
    y[0] = Complex::new(T::one(), T::zero());
    let (stats, clearance) = integrate_along(x, path, &mut y, tol, |f, y, dy| {
        dy[0] = czero();
        for n in 1..trie.len() {
            dy[n] = y[trie.parent[n]] * f[trie.letter[n]];
        }
    })?;
    Ok(Integrals { words: words.to_vec(), values: nodes.iter().map(|&n| y[n]).collect(), stats, clearance })
}

pub fn iterated_integral<T: Real>(x: &PuncturedLine, path: &Path, w: &Word, tol: f64) -> Result<(Complex<T>, StepStats), ChenError> {
    if w.is_empty() {
        return Err(ChenError::EmptyWord);
    }
    let r = iterated_integrals::<T>(x, path, std::slice::from_ref(w), tol)?;
    Ok((r.values[0], r.stats))
}

/// A rational combination of words, representing a class in `H⁰` of the
/// bar construction of the logarithmic forms.
#[derive(Debug, Clone, PartialEq)]
pub struct H0Class {
    terms: LinComb<Word>,
    bound: usize,
}

impl H0Class {
    pub fn new(terms: LinComb<Word>, bound: usize) -> Result<Self, ChenError> {
        if let Some(w) = terms.keys().find(|w| w.len() > bound) {
            return Err(ChenError::WordTooLong { len: w.len(), bound });
        }
        Ok(H0Class { terms, bound })
    }

    pub fn terms(&self) -> &LinComb<Word> {
        &self.terms
    }

    pub fn bound(&self) -> usize {
        self.bound
    }
}

/// `Ψ_γ(c)`, the linear extension of [`iterated_integrals`].
pub fn pair<T: Real>(x: &PuncturedLine, path: &Path, c: &H0Class, tol: f64) -> Result<(Complex<T>, StepStats), ChenError> {
    let words: Vec<Word> = c.terms.keys().cloned().collect();
    let scale = c.terms.iter().map(|(_, q)| num_traits::Signed::abs(q)).fold(Rational::zero(), |a, b| a + b);
    let tol_scaled = if scale.is_zero() { tol } else { tol / num_traits::ToPrimitive::to_f64(&scale).unwrap_or(1.0).max(1.0) };
    let r = iterated_integrals::<T>(x, path, &words, tol_scaled)?;
    let mut total = czero::<T>();
    for ((_, q), v) in c.terms.iter().zip(&r.values) {
        total = total + *v * T::of_rational(q);
    }
    Ok((total, r.stats))
}

fn cmul(a: &ExactComplex, b: &ExactComplex) -> ExactComplex {
    ExactComplex::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
}

fn cadd(a: &ExactComplex, b: &ExactComplex) -> ExactComplex {
    ExactComplex::new(&a.re + &b.re, &a.im + &b.im)
}

fn cis_zero(a: &ExactComplex) -> bool {
    a.re.is_zero() && a.im.is_zero()
}

type ExactMatrix = Vec<Vec<ExactComplex>>;

fn exact_zero() -> ExactComplex {
    ExactComplex::real(Rational::zero())
}

fn exact_identity(r: usize) -> ExactMatrix {
    (0..r)
        .map(|i| (0..r).map(|j| if i == j { ExactComplex::real(Rational::one()) } else { exact_zero() }).collect())
        .collect()
}

fn exact_mul(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let r = a.len();
    let mut out = vec![vec![exact_zero(); r]; r];
    for i in 0..r {
        for k in 0..r {
            if cis_zero(&a[i][k]) {
                continue;
            }
            for j in 0..r {
                if !cis_zero(&b[k][j]) {
                    out[i][j] = cadd(&out[i][j], &cmul(&a[i][k], &b[k][j]));
                }
            }
        }
    }
    out
}

/// A connection `d + Ω` on the trivial rank-`r` bundle, with `Ω` strictly
/// upper triangular. Entry `(i, j)` of `Ω` is `Σ_k c_{ijk} ω_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnipotentConnection {
    rank: usize,
    forms: usize,
    entries: BTreeMap<(usize, usize, usize), ExactComplex>,
}

impl UnipotentConnection {
    /// Terms are `(row, col, form, coefficient)`; repeated terms add up.
    pub fn new(rank: usize, forms: usize, terms: impl IntoIterator<Item = (usize, usize, usize, ExactComplex)>) -> Result<Self, ChenError> {
        let mut entries: BTreeMap<(usize, usize, usize), ExactComplex> = BTreeMap::new();
        for (row, col, form, c) in terms {
            if row >= col || col >= rank {
                return Err(ChenError::NotStrictlyUpperTriangular { row, col });
            }
            if form >= forms {
                return Err(ChenError::UnknownForm { form, forms });
            }
            let slot = entries.entry((row, col, form)).or_insert_with(exact_zero);
            *slot = cadd(slot, &c);
        }
        entries.retain(|_, c| !cis_zero(c));
        Ok(UnipotentConnection { rank, forms, entries })
    }

    pub fn zero(rank: usize, forms: usize) -> Self {
        UnipotentConnection { rank, forms, entries: BTreeMap::new() }
    }

    /// Rank 3 with `Ω₀₁ = ω_0` and `Ω₁₂ = ω_1`.
    pub fn polylog() -> Self {
        let one = ExactComplex::real(Rational::one());
        Self::new(3, 2, [(0, 1, 0, one.clone()), (1, 2, 1, one)]).expect("valid connection")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn forms(&self) -> usize {
        self.forms
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &ExactComplex)> {
        self.entries.iter()
    }

    /// Residue matrix of `ω_k`.
    pub fn residue(&self, form: usize) -> ExactMatrix {
        let mut m = vec![vec![exact_zero(); self.rank]; self.rank];
        for (&(i, j, k), c) in &self.entries {
            if k == form {
                m[i][j] = c.clone();
            }
        }
        m
    }

    /// Words whose residue product `M_{w_1}⋯M_{w_n}` is nonzero, with that
    /// product. Finite by nilpotence: every such word is shorter than the rank.
    pub fn dyson_words(&self) -> Vec<(Word, ExactMatrix)> {
        let residues: Vec<ExactMatrix> = (0..self.forms).map(|k| self.residue(k)).collect();
        let nonzero = |m: &ExactMatrix| m.iter().flatten().any(|c| !cis_zero(c));
        let mut out = vec![(Word::empty(), exact_identity(self.rank))];
        let mut frontier = 0;
        while frontier < out.len() {
            let (w, p) = out[frontier].clone();
            frontier += 1;
            for (k, m) in residues.iter().enumerate() {
                if !nonzero(m) {
                    continue;
                }
                let q = exact_mul(&p, m);
                if nonzero(&q) {
                    out.push((w.concat(&Word::letter(k)), q));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Transport<T> {
    pub matrix: Vec<Vec<Complex<T>>>,
    pub stats: StepStats,
}

/// Parallel transport as the finite Dyson sum of iterated integrals.
pub fn transport<T: Real>(x: &PuncturedLine, c: &UnipotentConnection, path: &Path, tol: f64) -> Result<Transport<T>, ChenError> {
    if c.forms > x.form_count() {
        return Err(ChenError::UnknownForm { form: c.forms - 1, forms: x.form_count() });
    }
    let terms = c.dyson_words();
    let weight = terms
        .iter()
        .map(|(_, p)| p.iter().flatten().map(|z| z.to_f64().norm()).fold(0.0, f64::max))
        .fold(1.0, f64::max);
    let words: Vec<Word> = terms.iter().map(|(w, _)| w.clone()).collect();
    let r = iterated_integrals::<T>(x, path, &words, tol / (weight * terms.len() as f64))?;
    let mut matrix = vec![vec![czero::<T>(); c.rank]; c.rank];
    for ((_, p), v) in terms.iter().zip(&r.values) {
        for i in 0..c.rank {
            for j in 0..c.rank {
                if !cis_zero(&p[i][j]) {
                    matrix[i][j] = matrix[i][j] + *v * p[i][j].to_real::<T>();
                }
            }
        }
    }
    Ok(Transport { matrix, stats: r.stats })
}

/// Parallel transport by integrating `T' = T·Ω` directly.
pub fn transport_ode<T: Real>(x: &PuncturedLine, c: &UnipotentConnection, path: &Path, tol: f64) -> Result<Transport<T>, ChenError> {
    if c.forms > x.form_count() {
        return Err(ChenError::UnknownForm { form: c.forms - 1, forms: x.form_count() });
    }
    let r = c.rank;
    let coeffs: Vec<(usize, usize, usize, Complex<T>)> = c.entries.iter().map(|(&(i, j, k), z)| (i, j, k, z.to_real())).collect();
    let mut y = vec![czero::<T>(); r * r];
    for i in 0..r {
        y[i * r + i] = Complex::new(T::one(), T::zero());
    }
    let (stats, _) = integrate_along(x, path, &mut y, tol, |f, y, dy| {
        dy.iter_mut().for_each(|v| *v = czero());
        for &(k, l, form, coef) in &coeffs {
            let w = coef * f[form];
            for i in 0..r {
                dy[i * r + l] = dy[i * r + l] + y[i * r + k] * w;
            }
        }
    })?;
    let matrix = (0..r).map(|i| y[i * r..(i + 1) * r].to_vec()).collect();
    Ok(Transport { matrix, stats })
}

/// Outcome of looking for a constant frame in which `Ω` takes values in the
/// span of the chosen forms.
#[derive(Debug, Clone, PartialEq)]
pub enum KForm {
    /// The standard frame works; the comparison with any fibre is the identity.
    Canonical { frame: Vec<Vec<Rational>> },
    /// Entries `(row, col, form)` that leave the span.
    Obstructed { entries: Vec<(usize, usize, usize)> },
}

pub fn canonical_k_form(c: &UnipotentConnection, splitting: &[usize]) -> KForm {
    let bad: Vec<(usize, usize, usize)> = c.entries.keys().filter(|(_, _, k)| !splitting.contains(k)).cloned().collect();
    if bad.is_empty() {
        let frame = (0..c.rank)
            .map(|i| (0..c.rank).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        KForm::Canonical { frame }
    } else {
        KForm::Obstructed { entries: bad }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::shuffle_words;
    use crate::linalg::{rat, ratio};
    use crate::word::all_words;
    use twofloat::TwoFloat;

    const TOL: f64 = DEFAULT_TOL;

    fn real_pt(q: Rational) -> ExactComplex {
        ExactComplex::real(q)
    }

    fn pt(re: Rational, im: Rational) -> ExactComplex {
        ExactComplex::new(re, im)
    }

    fn straight() -> Path {
        Path::line(real_pt(ratio(1, 5)), real_pt(ratio(1, 2)))
    }

    fn bent() -> Path {
        Path::new(vec![Segment::Bezier {
            points: [real_pt(ratio(1, 5)), pt(ratio(3, 10), ratio(1, 10)), pt(ratio(2, 5), ratio(-1, 10)), real_pt(ratio(1, 2))],
        }])
        .unwrap()
    }

    fn loop_around_zero() -> Path {
        Path::new(vec![Segment::Arc { center: real_pt(rat(0)), radius: ratio(1, 2), start: rat(0), sweep: rat(1) }]).unwrap()
    }

    fn li(s: u32, z: f64) -> f64 {
        (1..=200).map(|k| z.powi(k) / (k as f64).powi(s as i32)).sum()
    }

    #[test]
    fn log_closed_form() {
        let x = PuncturedLine::new(vec![real_pt(rat(0))]).unwrap();
        let (v, stats) = iterated_integral::<f64>(&x, &straight(), &Word::letter(0), TOL).unwrap();
        assert!((v - Complex::new(2.5f64.ln(), 0.0)).norm() < 1e-10);
        assert!(stats.error_estimate <= TOL);
    }

    #[test]
    fn empty_word_rejected_but_pairs_to_one() {
        let x = PuncturedLine::zero_one();
        assert!(matches!(iterated_integral::<f64>(&x, &straight(), &Word::empty(), TOL), Err(ChenError::EmptyWord)));
        let c = H0Class::new(LinComb::single(Word::empty()), 0).unwrap();
        assert_eq!(pair::<f64>(&x, &straight(), &c, TOL).unwrap().0, Complex::new(1.0, 0.0));
    }

    #[test]
    fn constant_path_gives_zero() {
        let x = PuncturedLine::zero_one();
        let k = Path::constant(real_pt(ratio(1, 3)));
        let r = iterated_integrals::<f64>(&x, &k, &all_words(2, 3)[1..], TOL).unwrap();
        assert!(r.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn full_loop_picks_up_residue() {
        let x = PuncturedLine::zero_one();
        let (v, _) = iterated_integral::<f64>(&x, &loop_around_zero(), &Word::letter(0), TOL).unwrap();
        assert!((v - Complex::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-10);
        let (v1, _) = iterated_integral::<f64>(&x, &loop_around_zero(), &Word::letter(1), TOL).unwrap();
        assert!(v1.norm() < 1e-10);
    }

    #[test]
    fn dilogarithm_difference() {
        let x = PuncturedLine::zero_one();
        let (v, _) = iterated_integral::<f64>(&x, &straight(), &Word::from([0, 1]), TOL).unwrap();
        let expected = -li(2, 0.5) + li(2, 0.8) - 0.2f64.ln() * (0.5f64.ln() - 0.8f64.ln());
        assert!((v.re - expected).abs() < 1e-9 && v.im.abs() < 1e-12, "{v} vs {expected}");
    }

    #[test]
    fn shuffle_relation() {
        let x = PuncturedLine::zero_one();
        let words = all_words(2, 3);
        let r = iterated_integrals::<f64>(&x, &bent(), &words, TOL).unwrap();
        for u in &words {
            for v in &words {
                if u.len() + v.len() > 3 {
                    continue;
                }
                let lhs = r.get(u).unwrap() * r.get(v).unwrap();
                let mut rhs = Complex::new(0.0, 0.0);
                for (w, q) in shuffle_words(u, v).iter() {
                    rhs += r.get(w).unwrap() * f64::of_rational(q);
                }
                assert!((lhs - rhs).norm() < 10.0 * TOL);
            }
        }
    }

    #[test]
    fn composition_and_reversal() {
        let x = PuncturedLine::zero_one();
        let a = real_pt(ratio(1, 5));
        let b = pt(ratio(1, 2), ratio(1, 2));
        let c = real_pt(ratio(3, 2));
        let g1 = Path::line(a.clone(), b.clone());
        let g2 = Path::line(b, c);
        let g = compose_paths(&g1, &g2).unwrap();
        let words = all_words(2, 3);
        let r1 = iterated_integrals::<f64>(&x, &g1, &words, TOL).unwrap();
        let r2 = iterated_integrals::<f64>(&x, &g2, &words, TOL).unwrap();
        let r = iterated_integrals::<f64>(&x, &g, &words, TOL).unwrap();
        let rev = iterated_integrals::<f64>(&x, &reverse_path(&g), &words, TOL).unwrap();
        for w in &words {
            let mut sum = Complex::new(0.0, 0.0);
            for k in 0..=w.len() {
                let (p, s) = w.split_at(k);
                sum += r1.get(&p).unwrap() * r2.get(&s).unwrap();
            }
            assert!((r.get(w).unwrap() - sum).norm() < 10.0 * TOL);
            let sign = if w.len() % 2 == 0 { 1.0 } else { -1.0 };
            assert!((rev.get(w).unwrap() - r.get(&w.reversed()).unwrap() * sign).norm() < 10.0 * TOL);
        }
    }

    #[test]
    fn homotopy_invariance() {
        let x = PuncturedLine::zero_one();
        let words = all_words(2, 3);
        let s = iterated_integrals::<f64>(&x, &straight(), &words, TOL).unwrap();
        let b = iterated_integrals::<f64>(&x, &bent(), &words, TOL).unwrap();
        for (u, v) in s.values.iter().zip(&b.values) {
            assert!((u - v).norm() < 10.0 * TOL);
        }
    }

    #[test]
    fn transport_dyson_matches_ode() {
        let x = PuncturedLine::zero_one();
        let c = UnipotentConnection::new(
            4,
            2,
            [
                (0, 1, 0, real_pt(rat(1))),
                (1, 2, 1, pt(ratio(1, 2), rat(2))),
                (0, 2, 1, real_pt(rat(-3))),
                (2, 3, 0, real_pt(ratio(5, 7))),
                (1, 3, 1, real_pt(rat(1))),
            ],
        )
        .unwrap();
        let path = compose_paths(&bent(), &Path::line(real_pt(ratio(1, 2)), pt(rat(2), rat(1)))).unwrap();
        let d = transport::<f64>(&x, &c, &path, TOL).unwrap();
        let o = transport_ode::<f64>(&x, &c, &path, TOL).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((d.matrix[i][j] - o.matrix[i][j]).norm() < 10.0 * TOL);
            }
        }
    }

    #[test]
    fn polylog_transport_and_composition() {
        let x = PuncturedLine::zero_one();
        let c = UnipotentConnection::polylog();
        let t = transport::<f64>(&x, &c, &straight(), TOL).unwrap();
        let (i01, _) = iterated_integral::<f64>(&x, &straight(), &Word::from([0, 1]), TOL).unwrap();
        assert!((t.matrix[0][2] - i01).norm() < 10.0 * TOL);
        assert!((t.matrix[0][1] - Complex::new(2.5f64.ln(), 0.0)).norm() < 10.0 * TOL);

        let g1 = Path::line(real_pt(ratio(1, 5)), pt(ratio(1, 2), ratio(1, 2)));
        let g2 = Path::line(pt(ratio(1, 2), ratio(1, 2)), real_pt(ratio(1, 2)));
        let t1 = transport::<f64>(&x, &c, &g1, TOL).unwrap().matrix;
        let t2 = transport::<f64>(&x, &c, &g2, TOL).unwrap().matrix;
        let t12 = transport::<f64>(&x, &c, &compose_paths(&g1, &g2).unwrap(), TOL).unwrap().matrix;
        for i in 0..3 {
            for j in 0..3 {
                let p: Complex<f64> = (0..3).map(|k| t1[i][k] * t2[k][j]).sum();
                assert!((t12[i][j] - p).norm() < 10.0 * TOL);
            }
        }
    }

    #[test]
    fn zero_connection_is_identity() {
        let x = PuncturedLine::zero_one();
        let t = transport::<f64>(&x, &UnipotentConnection::zero(3, 2), &bent(), TOL).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.matrix[i][j], Complex::new(if i == j { 1.0 } else { 0.0 }, 0.0));
            }
        }
    }

    #[test]
    fn connection_must_be_strictly_upper() {
        let one = real_pt(rat(1));
        assert!(matches!(UnipotentConnection::new(2, 1, [(1, 0, 0, one.clone())]), Err(ChenError::NotStrictlyUpperTriangular { .. })));
        assert!(matches!(UnipotentConnection::new(2, 1, [(0, 1, 1, one)]), Err(ChenError::UnknownForm { .. })));
    }

    #[test]
    fn pairing_is_linear() {
        let x = PuncturedLine::zero_one();
        let c: LinComb<Word> = [(Word::letter(0), rat(1)), (Word::letter(1), rat(1))].into_iter().collect();
        let (v, _) = pair::<f64>(&x, &straight(), &H0Class::new(c, 1).unwrap(), TOL).unwrap();
        let expected = 2.5f64.ln() + (0.5f64 / 0.8).ln();
        assert!((v - Complex::new(expected, 0.0)).norm() < 1e-10);
        let sh = shuffle_words(&Word::letter(0), &Word::letter(1));
        let (p, _) = pair::<f64>(&x, &straight(), &H0Class::new(sh, 2).unwrap(), TOL).unwrap();
        assert!((p - Complex::new(2.5f64.ln() * (0.5f64 / 0.8).ln(), 0.0)).norm() < 10.0 * TOL);
        assert!(H0Class::new(LinComb::single(Word::from([0, 0, 0])), 2).is_err());
    }

    #[test]
    fn canonical_frames() {
        let c = UnipotentConnection::polylog();
        assert!(matches!(canonical_k_form(&c, &[0, 1]), KForm::Canonical { .. }));
        assert_eq!(canonical_k_form(&c, &[0]), KForm::Obstructed { entries: vec![(1, 2, 1)] });
        assert!(matches!(canonical_k_form(&UnipotentConnection::zero(2, 2), &[]), KForm::Canonical { .. }));
    }

    #[test]
    fn double_double_log() {
        let x = PuncturedLine::new(vec![real_pt(rat(0))]).unwrap();
        let (v, _) = iterated_integral::<TwoFloat>(&x, &straight(), &Word::letter(0), 1e-18).unwrap();
        let exact = TwoFloat::of_rational(&crate::rational::parse_rational("0.9162907318741550651835272117680110714501").unwrap());
        assert!((v.re - exact).abs() < TwoFloat::from(1e-17));
    }
}
