//! Free graded-commutative algebras and the Bousfield–Guggenheim stages.
//!
//! A [`FreeCdga`] is `Λ(x₁, …, x_k)` on generators of positive degree with a
//! differential given on generators. Monomials are exponent vectors in
//! generator-creation order; odd generators appear with exponent at most
//! one. Everything is computed exactly, and bases are enumerated only up to
//! a degree cap.
//!
//! The replacement of a target cdga `C` starts from one free generator per
//! cocycle basis element of `C` and then, stage by stage, adjoins a
//! generator `β` with `dβ = w` and `ψ(β) = b` for each pair `(w, b)` with
//! `dw = 0` and `db = ψ(w)`. Pairs are taken over a basis of the cocycle
//! classes of `L` whose image under `ψ` is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::cdga::Cdga;
use crate::lincomb::LinComb;
use crate::linalg::{
    axpy, kernel_basis, quotient_basis, solve, unit_vector, Rational, SparseMatrix, SparseVec,
};
use crate::report::{Rows, Verdict};
use crate::sign;

pub const DEFAULT_DEGREE_CAP: usize = 4;
pub const DEFAULT_STAGES: usize = 3;
pub const DEFAULT_BASIS_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SullivanError {
    #[error("generators need degree at least 1, got {0}")]
    DegreeZeroGenerator(usize),
    #[error("d({name}) is not homogeneous of degree {expected}")]
    InhomogeneousDifferential { name: String, expected: usize },
    #[error("ψ is not a chain map on generator {0}")]
    NonChainMap(String),
    #[error("ψ({0}) has the wrong degree")]
    DegreeMismatch(String),
    #[error("more than {cap} monomials below the degree cap")]
    BasisCapExceeded { cap: usize },
    #[error("d∘d ≠ 0 on {0}")]
    DifferentialSquareNonzero(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

/// Exponent vector with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = 1;
        Monomial(v)
    }

    pub fn from_exponents(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Generator indices with multiplicity, in order.
    fn instances(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect()
    }
}

pub type Poly = LinComb<Monomial>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeCdga {
    generators: Vec<Generator>,
    differential: Vec<Poly>,
    degree_cap: usize,
    stage: usize,
}

impl FreeCdga {
    /// The ground field `ℚ`.
    pub fn ground(degree_cap: usize) -> Self {
        FreeCdga { generators: Vec::new(), differential: Vec::new(), degree_cap, stage: 0 }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn d_generator(&self, i: usize) -> &Poly {
        &self.differential[i]
    }

    /// Adjoins a generator; `d` may only involve earlier generators.
    pub fn adjoin(&mut self, name: &str, degree: usize, d: Poly) -> Result<usize, SullivanError> {
        if degree == 0 {
            return Err(SullivanError::DegreeZeroGenerator(degree));
        }
        let i = self.generators.len();
        self.generators.push(Generator { name: name.to_string(), degree });
        if d.keys().any(|m| m.0.len() > i || self.monomial_degree(m) != degree + 1) {
            self.generators.pop();
            return Err(SullivanError::InhomogeneousDifferential { name: name.to_string(), expected: degree + 1 });
        }
        self.differential.push(d);
        Ok(i)
    }

    fn is_odd(&self, i: usize) -> bool {
        self.generators[i].degree % 2 == 1
    }

    pub fn monomial_degree(&self, m: &Monomial) -> usize {
        m.0.iter().enumerate().map(|(i, &e)| e as usize * self.generators[i].degree).sum()
    }

    /// Product of monomials with its Koszul sign, or `None` when an odd
    /// generator would be squared.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(i64, Monomial)> {
        let n = a.0.len().max(b.0.len());
        let mut out = vec![0u32; n];
        let mut swaps = 0i64;
        // odd instances of b at index j pass odd instances of a at indices > j
        let mut odd_after = vec![0i64; n + 1];
        for i in (0..n).rev() {
            odd_after[i] = odd_after[i + 1] + if self.is_odd(i) { a.exponent(i) as i64 } else { 0 };
        }
        for (i, slot) in out.iter_mut().enumerate() {
            let (x, y) = (a.exponent(i), b.exponent(i));
            if self.is_odd(i) {
                if x + y > 1 {
                    return None;
                }
                swaps += y as i64 * odd_after[i + 1];
            }
            *slot = x + y;
        }
        Some((sign::parity(swaps), Monomial::from_exponents(out)))
    }

    pub fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in p.iter() {
            for (b, y) in q.iter() {
                if let Some((s, m)) = self.mul_monomials(a, b) {
                    out.add_term(m, x * y * sign::as_rational(s));
                }
            }
        }
        out
    }

    pub fn d_monomial(&self, m: &Monomial) -> Poly {
        let inst = m.instances();
        let mut out = Poly::zero();
        let mut deg_before = 0i64;
        for (k, &g) in inst.iter().enumerate() {
            let prefix = Poly::single(Monomial::from_exponents(count(&inst[..k])));
            let suffix = Poly::single(Monomial::from_exponents(count(&inst[k + 1..])));
            let term = self.mul(&self.mul(&prefix, &self.differential[g]), &suffix);
            out.add_scaled(&term, &sign::as_rational(sign::parity(deg_before)));
            deg_before += self.generators[g].degree as i64;
        }
        out
    }

    pub fn d(&self, p: &Poly) -> Poly {
        p.map_linear(|m| self.d_monomial(m))
    }

    /// Number of monomials of degree `k`.
    pub fn count_in(&self, k: usize) -> usize {
        // counts[j] = number of monomials of degree j in the generators seen so far
        let mut counts = vec![0usize; k + 1];
        counts[0] = 1;
        for g in &self.generators {
            let mut next = vec![0usize; k + 1];
            for (j, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let max_e = if g.degree % 2 == 1 { 1 } else { usize::MAX };
                let mut e = 0usize;
                while e <= max_e && j + e * g.degree <= k {
                    next[j + e * g.degree] = next[j + e * g.degree].saturating_add(c);
                    e += 1;
                }
            }
            counts = next;
        }
        counts[k]
    }

    /// Monomials of degree `k`, graded-lexicographic in generator order.
    pub fn basis_in(&self, k: usize) -> Vec<Monomial> {
        fn rec(gens: &[Generator], i: usize, remaining: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == gens.len() {
                if remaining == 0 {
                    out.push(Monomial::from_exponents(cur.clone()));
                }
                return;
            }
            let d = gens[i].degree;
            let max_e = if d % 2 == 1 { 1 } else { remaining / d };
            for e in (0..=max_e.min(remaining / d)).rev() {
                cur.push(e as u32);
                rec(gens, i + 1, remaining - e * d, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(&self.generators, 0, k, &mut Vec::new(), &mut out);
        out
    }

    /// Total monomial count in degrees `0..=cap + 1`, checked against `cap`.
    pub fn check_basis_cap(&self, basis_cap: usize) -> Result<usize, SullivanError> {
        let mut total = 0usize;
        for k in 0..=self.degree_cap + 1 {
            total = total.saturating_add(self.count_in(k));
        }
        if total > basis_cap {
            return Err(SullivanError::BasisCapExceeded { cap: basis_cap });
        }
        Ok(total)
    }

    fn index(basis: &[Monomial]) -> BTreeMap<&Monomial, usize> {
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect()
    }

    fn coords(index: &BTreeMap<&Monomial, usize>, p: &Poly) -> SparseVec {
        p.iter().map(|(m, x)| (index[m], x.clone())).collect()
    }

    /// `d : L^k → L^{k+1}` in monomial coordinates.
    pub fn differential_matrix(&self, k: usize) -> SparseMatrix {
        let src = self.basis_in(k);
        let dst = self.basis_in(k + 1);
        let index = Self::index(&dst);
        let cols: Vec<SparseVec> = src.iter().map(|m| Self::coords(&index, &self.d_monomial(m))).collect();
        SparseMatrix::from_columns(dst.len(), &cols).expect("d raises degree by one")
    }

    /// `dim H^k` for `k ≤ cap`.
    pub fn cohomology_dim(&self, k: usize) -> usize {
        let z = kernel_basis(&self.differential_matrix(k)).len();
        let b = if k == 0 { 0 } else { crate::linalg::rank(&self.differential_matrix(k - 1)) };
        z - b
    }

    /// `d∘d = 0` on every monomial of degree `≤ cap`.
    pub fn check_d_squared(&self) -> Result<(), SullivanError> {
        for k in 0..=self.degree_cap {
            for m in self.basis_in(k) {
                if !self.d(&self.d_monomial(&m)).is_zero() {
                    return Err(SullivanError::DifferentialSquareNonzero(self.format_monomial(&m)));
                }
            }
        }
        Ok(())
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.0.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let n = &self.generators[i].name;
                if e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn format_poly(&self, p: &Poly) -> String {
        crate::cdga::format_terms(p.iter().map(|(m, x)| (self.format_monomial(m), x.clone())))
    }
}

fn count(inst: &[usize]) -> Vec<u32> {
    let mut v = vec![0u32; inst.iter().max().map_or(0, |&m| m + 1)];
    for &i in inst {
        v[i] += 1;
    }
    v
}

/// `S(n)`: one closed generator `a` of degree `n`.
pub fn elementary_s(n: usize, degree_cap: usize) -> Result<FreeCdga, SullivanError> {
    let mut l = FreeCdga::ground(degree_cap);
    l.adjoin("a", n, Poly::zero())?;
    Ok(l)
}

/// `T(n)`: generators `b` in degree `n` and `c` in degree `n + 1` with `db = c`.
pub fn elementary_t(n: usize, degree_cap: usize) -> Result<FreeCdga, SullivanError> {
    if n == 0 {
        return Err(SullivanError::DegreeZeroGenerator(0));
    }
    Ok(FreeCdga {
        generators: vec![Generator { name: "b".into(), degree: n }, Generator { name: "c".into(), degree: n + 1 }],
        differential: vec![Poly::single(Monomial::generator(1)), Poly::zero()],
        degree_cap,
        stage: 0,
    })
}

/// A dga map from a free algebra, given on generators by vectors in the
/// target and extended multiplicatively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetMap {
    pub images: Vec<SparseVec>,
}

impl TargetMap {
    pub fn apply_monomial(&self, m: &Monomial, target: &Cdga) -> SparseVec {
        let mut acc = unit_vector(target.unit());
        for g in m.instances() {
            acc = target.mul(&acc, &self.images[g]);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    pub fn apply(&self, p: &Poly, target: &Cdga) -> SparseVec {
        let mut out = SparseVec::new();
        for (m, x) in p.iter() {
            axpy(&mut out, x, &self.apply_monomial(m, target));
        }
        out
    }

    /// Degrees match and `ψ(dx) = dψ(x)` on every generator.
    pub fn check_chain_map(&self, l: &FreeCdga, target: &Cdga) -> Result<(), SullivanError> {
        let sp = target.space();
        for (i, g) in l.generators().iter().enumerate() {
            let img = &self.images[i];
            if img.keys().any(|&e| sp.degree(e) != g.degree) {
                return Err(SullivanError::DegreeMismatch(g.name.clone()));
            }
            if self.apply(l.d_generator(i), target) != target.d(img) {
                return Err(SullivanError::NonChainMap(g.name.clone()));
            }
        }
        Ok(())
    }

    /// `ψ(m·n) = ψ(m)ψ(n)` on monomial pairs of total degree `≤ cap`.
    pub fn is_multiplicative(&self, l: &FreeCdga, target: &Cdga) -> bool {
        let cap = l.degree_cap();
        let bases: Vec<Vec<Monomial>> = (0..=cap).map(|k| l.basis_in(k)).collect();
        for i in 0..=cap {
            for j in 0..=cap - i {
                for a in &bases[i] {
                    for b in &bases[j] {
                        let lhs = match l.mul_monomials(a, b) {
                            Some((s, m)) => crate::linalg::scaled(&self.apply_monomial(&m, target), &sign::as_rational(s)),
                            None => SparseVec::new(),
                        };
                        let rhs = target.mul(&self.apply_monomial(a, target), &self.apply_monomial(b, target));
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// One adjoined generator `β` with `dβ = w` and `ψ(β) = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjoined {
    pub name: String,
    pub degree: usize,
    pub d: Poly,
    pub image: SparseVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub algebra: FreeCdga,
    pub psi: TargetMap,
    pub adjoined: Vec<Adjoined>,
    /// Obstruction classes in degree one; killing them would need a
    /// degree-0 generator, so they are left alone.
    pub skipped_degree_one: usize,
}

/// `L(1) = ⊗ S(|z|)` over a basis of the positive-degree cocycles of the
/// target, with `ψ₁` sending each generator to its cocycle.
pub fn bg_initial(target: &Cdga, degree_cap: usize) -> Result<Stage, SullivanError> {
    let sp = target.space();
    let mut l = FreeCdga::ground(degree_cap);
    l.stage = 1;
    let mut images = Vec::new();
    for degree in 1..=target.max_degree().min(degree_cap + 1) {
        for z in kernel_basis(&target.differential_matrix(degree)) {
            let name = format!("a{}", images.len() + 1);
            l.adjoin(&name, degree, Poly::zero())?;
            images.push(sp.from_local(&z, degree));
        }
    }
    let psi = TargetMap { images };
    psi.check_chain_map(&l, target)?;
    Ok(Stage { algebra: l, psi, adjoined: Vec::new(), skipped_degree_one: 0 })
}

/// One pushout step: adjoin a generator for every basis class `[w]` of
/// `H^k(L)` (`2 ≤ k ≤ cap`) whose image `ψ(w)` is exact, `ψ(w) = db`.
pub fn bg_step(prev: &Stage, target: &Cdga) -> Result<Stage, SullivanError> {
    let l = &prev.algebra;
    prev.psi.check_chain_map(l, target)?;
    let sp = target.space();
    let mut next = l.clone();
    next.stage = l.stage + 1;
    let mut psi = prev.psi.clone();
    let mut adjoined = Vec::new();
    let mut skipped = 0;
    let mut counter = l.generators().len();

    for k in 1..=l.degree_cap() {
        let basis = l.basis_in(k);
        if basis.is_empty() {
            continue;
        }
        let cocycles = kernel_basis(&l.differential_matrix(k));
        let boundaries = l.differential_matrix(k - 1).column_vectors();
        let classes = quotient_basis(basis.len(), &boundaries, &cocycles).expect("d∘d = 0 below the cap");

        // ψ on L^k, then keep classes whose image is d of something in C^{k-1}
        let d_target = if k - 1 <= target.max_degree() {
            Some(target.differential_matrix(k - 1))
        } else {
            None
        };
        let mut exact = Vec::new();
        for z in classes.representatives() {
            let w: Poly = z.iter().map(|(&i, x)| (basis[i].clone(), x.clone())).collect();
            let image = psi.apply(&w, target);
            let rhs = sp.to_local(&image, k);
            let b = match &d_target {
                Some(m) => solve(m, &rhs).expect("dimensions agree"),
                None if rhs.is_empty() => Some(SparseVec::new()),
                None => None,
            };
            if let Some(b) = b {
                exact.push((w, sp.from_local(&b, k - 1)));
            }
        }
        if k == 1 {
            skipped += exact.len();
            continue;
        }
        for (w, b) in exact {
            counter += 1;
            let name = format!("b{counter}");
            next.adjoin(&name, k - 1, w.clone())?;
            psi.images.push(b.clone());
            adjoined.push(Adjoined { name, degree: k - 1, d: w, image: b });
        }
    }
    next.check_d_squared()?;
    psi.check_chain_map(&next, target)?;
    Ok(Stage { algebra: next, psi, adjoined, skipped_degree_one: skipped })
}

/// `L(1), …, L(stages)`, each checked against the basis cap.
pub fn bg_stages(
    target: &Cdga,
    stages: usize,
    degree_cap: usize,
    basis_cap: usize,
) -> Result<Vec<Stage>, SullivanError> {
    let mut out = Vec::new();
    if stages == 0 {
        return Ok(out);
    }
    let first = bg_initial(target, degree_cap)?;
    first.algebra.check_basis_cap(basis_cap)?;
    out.push(first);
    while out.len() < stages {
        let s = bg_step(out.last().expect("nonempty"), target)?;
        s.algebra.check_basis_cap(basis_cap)?;
        out.push(s);
    }
    Ok(out)
}

/// Augmentations `L → ℚ`. Every generator has positive degree, so the only
/// dga map sends all of them to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentationCount {
    pub count: usize,
    pub witness: Vec<(String, Rational)>,
    pub compatible_with_d: bool,
}

pub fn augmentation_count(l: &FreeCdga) -> AugmentationCount {
    let witness = l.generators().iter().map(|g| (g.name.clone(), Rational::zero())).collect();
    // ε(dx) is the constant term of dx
    let compatible_with_d = (0..l.generators().len()).all(|i| l.d_generator(i).coeff(&Monomial::one()).is_zero());
    AugmentationCount { count: 1, witness, compatible_with_d }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.degree)
    }
}

/// Stage dump: generators, differentials, per-degree dimensions,
/// cohomology and the structural checks.
pub fn stage_rows(stage: &Stage, target: &Cdga) -> Rows {
    let l = &stage.algebra;
    let mut r = Rows::new();
    r.push("stage", l.stage());
    r.push("degree_cap", l.degree_cap());
    for (i, g) in l.generators().iter().enumerate() {
        r.push(format!("generator.{}", g.name), g.degree);
        r.push(format!("d.{}", g.name), l.format_poly(l.d_generator(i)));
        r.push(format!("psi.{}", g.name), target.space().format_vector(&stage.psi.images[i]));
    }
    for k in 0..=l.degree_cap() {
        r.push(format!("dim.{k}"), l.count_in(k));
    }
    for k in 0..=l.degree_cap() {
        r.push(format!("H^{k}"), l.cohomology_dim(k));
    }
    r.push("adjoined", stage.adjoined.len());
    r.push("skipped_degree_one", stage.skipped_degree_one);
    r.push("d_squared", Verdict::from_bool(l.check_d_squared().is_ok()));
    let chain = stage.psi.check_chain_map(l, target).is_ok() && stage.psi.is_multiplicative(l, target);
    r.push("chain_map", Verdict::from_bool(chain));
    let aug = augmentation_count(l);
    r.push("augmentations", aug.count);
    r.push("augmentation.compatible", Verdict::from_bool(aug.compatible_with_d));
    r.push("H^0_is_Q", Verdict::from_bool(l.cohomology_dim(0) == 1));
    r
}
