//! Finite-dimensional commutative differential graded algebras over `ℚ`.
//!
//! A [`Cdga`] has an explicit homogeneous basis indexed globally
//! `0..dim`. The differential is stored as the image of each basis element
//! and the product as a table of basis pairs; pairs that are not stored are
//! derived from graded commutativity or the unit, and are otherwise zero.

pub mod document;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{
    add_entry, axpy, kernel_basis, quotient_basis, rank_of, scaled, unit_vector, Rational,
    SparseMatrix, SparseVec,
};
use crate::sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdgaError {
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("empty basis name")]
    EmptyName,
    #[error("unknown basis element {0:?}")]
    UnknownElement(String),
    #[error("unit {0:?} is not in degree 0")]
    UnitNotInDegreeZero(String),
    #[error("{what} of {element:?} is not homogeneous of degree {expected}")]
    Inhomogeneous { what: &'static str, element: String, expected: usize },
    #[error("invalid cdga: {0}")]
    Invalid(AxiomReport),
    #[error("H^0 has dimension {0}, expected 1")]
    NotConnective(usize),
    #[error("H^{degree} has dimension {dim}, expected 0")]
    NotCurveLike { degree: usize, dim: usize },
    #[error("product {0} · {1} of degree-one representatives is not exact")]
    NonVanishingProducts(String, String),
    #[error("formal model inclusion is not a quasi-isomorphism")]
    NotQuasiIsomorphism,
    #[error("invalid augmentation: {0}")]
    InvalidAugmentation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: usize,
}

/// Graded vector space with named basis elements, unique across degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVectorSpace {
    elements: Vec<BasisElement>,
    by_degree: Vec<Vec<usize>>,
    local: Vec<usize>,
    index: HashMap<String, usize>,
}

impl GradedVectorSpace {
    /// Basis elements are numbered degree by degree in the given order.
    pub fn new(degrees: &[(usize, Vec<String>)]) -> Result<Self, CdgaError> {
        let mut sorted: Vec<(usize, &Vec<String>)> = degrees.iter().map(|(d, n)| (*d, n)).collect();
        sorted.sort_by_key(|(d, _)| *d);
        let max = sorted.last().map_or(0, |(d, _)| *d);
        let mut space = GradedVectorSpace {
            elements: Vec::new(),
            by_degree: vec![Vec::new(); max + 1],
            local: Vec::new(),
            index: HashMap::new(),
        };
        for (degree, names) in sorted {
            for name in names {
                if name.is_empty() {
                    return Err(CdgaError::EmptyName);
                }
                let id = space.elements.len();
                if space.index.insert(name.clone(), id).is_some() {
                    return Err(CdgaError::DuplicateName(name.clone()));
                }
                space.local.push(space.by_degree[degree].len());
                space.by_degree[degree].push(id);
                space.elements.push(BasisElement { name: name.clone(), degree });
            }
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len().saturating_sub(1)
    }

    pub fn dim_in(&self, degree: usize) -> usize {
        self.by_degree.get(degree).map_or(0, Vec::len)
    }

    /// Global indices of the basis in `degree`.
    pub fn basis_in(&self, degree: usize) -> &[usize] {
        self.by_degree.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn element(&self, id: usize) -> &BasisElement {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn name(&self, id: usize) -> &str {
        &self.elements[id].name
    }

    pub fn degree(&self, id: usize) -> usize {
        self.elements[id].degree
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Position of a basis element within its degree.
    pub fn local_index(&self, id: usize) -> usize {
        self.local[id]
    }

    /// Global vector to coordinates in `degree`; components of other
    /// degrees are dropped.
    pub fn to_local(&self, v: &SparseVec, degree: usize) -> SparseVec {
        v.iter()
            .filter(|(&i, _)| self.degree(i) == degree)
            .map(|(&i, x)| (self.local[i], x.clone()))
            .collect()
    }

    pub fn from_local(&self, v: &SparseVec, degree: usize) -> SparseVec {
        let basis = self.basis_in(degree);
        v.iter().map(|(&k, x)| (basis[k], x.clone())).collect()
    }

    fn homogeneous_of(&self, v: &SparseVec, degree: usize) -> bool {
        v.keys().all(|&i| self.degree(i) == degree)
    }

    /// Human-readable rendering such as `2*x - 1/3*y`.
    pub fn format_vector(&self, v: &SparseVec) -> String {
        format_terms(v.iter().map(|(&i, x)| (self.name(i).to_string(), x.clone())))
    }
}

pub(crate) fn format_terms(terms: impl Iterator<Item = (String, Rational)>) -> String {
    let mut out = String::new();
    for (name, x) in terms {
        let neg = x < Rational::zero();
        let mag = if neg { -x } else { x };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&crate::rational::format_rational(&mag));
            out.push('*');
        }
        out.push_str(&name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Which cdga axiom a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    DifferentialSquaresToZero,
    UnitIsClosed,
    Unit,
    GradedCommutativity,
    Associativity,
    Leibniz,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::DifferentialSquaresToZero => "d∘d = 0",
            Axiom::UnitIsClosed => "d(1) = 0",
            Axiom::Unit => "unit",
            Axiom::GradedCommutativity => "graded commutativity",
            Axiom::Associativity => "associativity",
            Axiom::Leibniz => "Leibniz rule",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    /// Offending basis tuple, by name.
    pub elements: Vec<String>,
}

/// Every violated axiom; empty iff the algebra is a valid cdga.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} fails on ({})", v.axiom, v.elements.join(", "))?;
        }
        Ok(())
    }
}

/// A vector written as `(basis name, coefficient)` pairs.
pub type NamedVector<'a> = &'a [(&'a str, Rational)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cdga {
    space: GradedVectorSpace,
    unit: usize,
    differential: Vec<SparseVec>,
    product: BTreeMap<(usize, usize), SparseVec>,
}

impl Cdga {
    /// Checks that indices are in range and that `d` and the product are
    /// homogeneous of the right degrees. The algebra axioms themselves are
    /// left to [`check_axioms`].
    pub fn new(
        space: GradedVectorSpace,
        unit: usize,
        differential: BTreeMap<usize, SparseVec>,
        product: BTreeMap<(usize, usize), SparseVec>,
    ) -> Result<Self, CdgaError> {
        let n = space.dim();
        let bad = |i: usize| CdgaError::UnknownElement(format!("#{i}"));
        if unit >= n {
            return Err(bad(unit));
        }
        if space.degree(unit) != 0 {
            return Err(CdgaError::UnitNotInDegreeZero(space.name(unit).to_string()));
        }
        let mut d = vec![SparseVec::new(); n];
        for (src, img) in differential {
            if src >= n {
                return Err(bad(src));
            }
            if let Some(&i) = img.keys().find(|&&i| i >= n) {
                return Err(bad(i));
            }
            let expected = space.degree(src) + 1;
            if !space.homogeneous_of(&img, expected) {
                return Err(CdgaError::Inhomogeneous {
                    what: "differential",
                    element: space.name(src).to_string(),
                    expected,
                });
            }
            d[src] = img.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        let mut table = BTreeMap::new();
        for ((a, b), img) in product {
            if a >= n || b >= n {
                return Err(bad(a.max(b)));
            }
            if let Some(&i) = img.keys().find(|&&i| i >= n) {
                return Err(bad(i));
            }
            let expected = space.degree(a) + space.degree(b);
            if !space.homogeneous_of(&img, expected) {
                return Err(CdgaError::Inhomogeneous {
                    what: "product",
                    element: format!("{}·{}", space.name(a), space.name(b)),
                    expected,
                });
            }
            table.insert((a, b), img.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        }
        Ok(Cdga { space, unit, differential: d, product: table })
    }

    /// Convenience constructor by basis names.
    pub fn from_names(
        degrees: &[(usize, &[&str])],
        unit: &str,
        d: &[(&str, NamedVector)],
        product: &[(&str, &str, NamedVector)],
    ) -> Result<Self, CdgaError> {
        let degrees: Vec<(usize, Vec<String>)> = degrees
            .iter()
            .map(|(k, names)| (*k, names.iter().map(|s| s.to_string()).collect()))
            .collect();
        let space = GradedVectorSpace::new(&degrees)?;
        let id = |name: &str| space.lookup(name).ok_or_else(|| CdgaError::UnknownElement(name.into()));
        let vector = |terms: &[(&str, Rational)]| -> Result<SparseVec, CdgaError> {
            let mut v = SparseVec::new();
            for (name, x) in terms {
                add_entry(&mut v, id(name)?, x.clone());
            }
            Ok(v)
        };
        let unit = id(unit)?;
        let mut dmap = BTreeMap::new();
        for (src, img) in d {
            dmap.insert(id(src)?, vector(img)?);
        }
        let mut pmap = BTreeMap::new();
        for (a, b, img) in product {
            pmap.insert((id(a)?, id(b)?), vector(img)?);
        }
        Cdga::new(space, unit, dmap, pmap)
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn max_degree(&self) -> usize {
        self.space.max_degree()
    }

    pub fn stored_products(&self) -> impl Iterator<Item = (&(usize, usize), &SparseVec)> {
        self.product.iter()
    }

    pub fn d_basis(&self, a: usize) -> &SparseVec {
        &self.differential[a]
    }

    pub fn d(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, x) in v {
            axpy(&mut out, x, &self.differential[i]);
        }
        out
    }

    /// Product of basis elements. Lookup order: the stored pair, the stored
    /// swapped pair with its Koszul sign, the unit, zero.
    pub fn mul_basis(&self, a: usize, b: usize) -> SparseVec {
        if let Some(v) = self.product.get(&(a, b)) {
            return v.clone();
        }
        if let Some(v) = self.product.get(&(b, a)) {
            let s = sign::koszul(self.space.degree(a) as i64, self.space.degree(b) as i64);
            return scaled(v, &sign::as_rational(s));
        }
        if a == self.unit {
            return unit_vector(b);
        }
        if b == self.unit {
            return unit_vector(a);
        }
        SparseVec::new()
    }

    pub fn mul(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, x) in u {
            for (&j, y) in v {
                axpy(&mut out, &(x * y), &self.mul_basis(i, j));
            }
        }
        out
    }

    /// `d_i : A^i → A^{i+1}` in local coordinates.
    pub fn differential_matrix(&self, degree: usize) -> SparseMatrix {
        let rows = self.space.dim_in(degree + 1);
        let cols: Vec<SparseVec> = self
            .space
            .basis_in(degree)
            .iter()
            .map(|&a| self.space.to_local(&self.differential[a], degree + 1))
            .collect();
        SparseMatrix::from_columns(rows, &cols).expect("homogeneous differential")
    }

    /// `Σ (-1)^i dim A^i`.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.max_degree())
            .map(|i| sign::parity(i as i64) * self.space.dim_in(i) as i64)
            .sum()
    }
}

/// Lists every violated axiom with the offending basis tuple.
pub fn check_axioms(a: &Cdga) -> AxiomReport {
    let sp = a.space();
    let n = a.dim();
    let name = |i: usize| sp.name(i).to_string();
    let mut violations = Vec::new();
    let mut push = |axiom, elements: Vec<String>| violations.push(Violation { axiom, elements });

    if !a.d_basis(a.unit()).is_empty() {
        push(Axiom::UnitIsClosed, vec![name(a.unit())]);
    }
    for x in 0..n {
        if !a.d(a.d_basis(x)).is_empty() {
            push(Axiom::DifferentialSquaresToZero, vec![name(x)]);
        }
    }
    let e = |i| unit_vector(i);
    for x in 0..n {
        if a.mul_basis(a.unit(), x) != e(x) || a.mul_basis(x, a.unit()) != e(x) {
            push(Axiom::Unit, vec![name(a.unit()), name(x)]);
        }
    }
    for x in 0..n {
        for y in x..n {
            let s = sign::koszul(sp.degree(x) as i64, sp.degree(y) as i64);
            let xy = a.mul_basis(x, y);
            let yx = a.mul_basis(y, x);
            if xy != scaled(&yx, &sign::as_rational(s)) {
                push(Axiom::GradedCommutativity, vec![name(x), name(y)]);
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = a.mul_basis(x, y);
            for z in 0..n {
                let left = a.mul(&xy, &e(z));
                let right = a.mul(&e(x), &a.mul_basis(y, z));
                if left != right {
                    push(Axiom::Associativity, vec![name(x), name(y), name(z)]);
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let lhs = a.d(&a.mul_basis(x, y));
            let mut rhs = a.mul(a.d_basis(x), &e(y));
            let s = sign::as_rational(sign::parity(sp.degree(x) as i64));
            axpy(&mut rhs, &s, &a.mul(&e(x), a.d_basis(y)));
            if lhs != rhs {
                push(Axiom::Leibniz, vec![name(x), name(y)]);
            }
        }
    }
    AxiomReport { violations }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cohomology {
    pub degree: usize,
    pub dimension: usize,
    /// Representative cocycles, as global vectors.
    pub representatives: Vec<SparseVec>,
}

/// `H^i` without re-validating the algebra.
pub(crate) fn cohomology_unchecked(a: &Cdga, degree: usize) -> (Cohomology, crate::linalg::QuotientBasis) {
    let sp = a.space();
    let cocycles = kernel_basis(&a.differential_matrix(degree));
    let boundaries = if degree == 0 {
        Vec::new()
    } else {
        a.differential_matrix(degree - 1).column_vectors()
    };
    let q = quotient_basis(sp.dim_in(degree), &boundaries, &cocycles)
        .expect("image of d lies in ker d when d∘d = 0");
    let representatives = q.representatives().iter().map(|v| sp.from_local(v, degree)).collect();
    (Cohomology { degree, dimension: q.dim(), representatives }, q)
}

/// Exact `ker d_i / im d_{i-1}` with deterministic representatives.
pub fn cohomology(a: &Cdga, degree: usize) -> Result<Cohomology, CdgaError> {
    let report = check_axioms(a);
    if !report.is_valid() {
        return Err(CdgaError::Invalid(report));
    }
    Ok(cohomology_unchecked(a, degree).0)
}

/// A degree-0 algebra map to `ℚ`, given on the degree-0 basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Augmentation {
    values: BTreeMap<usize, Rational>,
}

impl Augmentation {
    /// Validates unitality and multiplicativity on degree-0 products.
    /// Degree-0 basis elements without a value are sent to zero, except the
    /// unit which defaults to one.
    pub fn new(a: &Cdga, values: BTreeMap<usize, Rational>) -> Result<Self, CdgaError> {
        let sp = a.space();
        if let Some((&i, _)) = values.iter().find(|(&i, _)| i >= sp.dim() || sp.degree(i) != 0) {
            let what = if i < sp.dim() { sp.name(i).to_string() } else { format!("#{i}") };
            return Err(CdgaError::InvalidAugmentation(format!("{what} is not a degree-0 basis element")));
        }
        let mut aug = Augmentation { values };
        aug.values.entry(a.unit()).or_insert_with(Rational::one);
        aug.values.retain(|_, x| !x.is_zero());
        if aug.value(a.unit()) != Rational::one() {
            return Err(CdgaError::InvalidAugmentation("unit must map to 1".into()));
        }
        let deg0 = sp.basis_in(0);
        for &x in deg0 {
            for &y in deg0 {
                let lhs = aug.evaluate(&a.mul_basis(x, y));
                if lhs != aug.value(x) * aug.value(y) {
                    return Err(CdgaError::InvalidAugmentation(format!(
                        "not multiplicative on {}·{}",
                        sp.name(x),
                        sp.name(y)
                    )));
                }
            }
        }
        Ok(aug)
    }

    pub fn from_names(a: &Cdga, values: &[(&str, Rational)]) -> Result<Self, CdgaError> {
        let mut map = BTreeMap::new();
        for (name, x) in values {
            let id = a.space().lookup(name).ok_or_else(|| CdgaError::UnknownElement(name.to_string()))?;
            map.insert(id, x.clone());
        }
        Augmentation::new(a, map)
    }

    /// The augmentation of an algebra whose degree 0 is spanned by the unit.
    pub fn unit_only(a: &Cdga) -> Result<Self, CdgaError> {
        if a.space().dim_in(0) != 1 {
            return Err(CdgaError::InvalidAugmentation(format!(
                "degree 0 has dimension {}; the augmentation must be given explicitly",
                a.space().dim_in(0)
            )));
        }
        Augmentation::new(a, BTreeMap::new())
    }

    pub fn value(&self, basis: usize) -> Rational {
        self.values.get(&basis).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn evaluate(&self, v: &SparseVec) -> Rational {
        v.iter().map(|(i, x)| x * self.value(*i)).fold(Rational::zero(), |s, t| s + t)
    }

    pub fn values(&self) -> &BTreeMap<usize, Rational> {
        &self.values
    }
}

/// `′C = ℚ ⊕ C¹` with zero differential and zero products of letters,
/// included into the source through a chosen splitting of `Z¹ → H¹`.
#[derive(Debug, Clone)]
pub struct FormalModel {
    pub model: Cdga,
    /// Model basis index → vector in the source algebra.
    pub inclusion: Vec<SparseVec>,
    pub h1_letters: Vec<String>,
    /// Whether the chosen representatives also multiply to zero in the
    /// source, making the inclusion an honest algebra map.
    pub strictly_multiplicative: bool,
}

impl FormalModel {
    pub fn letter_count(&self) -> usize {
        self.h1_letters.len()
    }

    /// Induced maps on `H^0` and `H^1` are isomorphisms.
    pub fn is_quasi_isomorphism(&self, source: &Cdga) -> bool {
        let sp = source.space();
        let unit_ok = self.inclusion[self.model.unit()] == unit_vector(source.unit());
        let (h1, _) = cohomology_unchecked(source, 1);
        let (h0, _) = cohomology_unchecked(source, 0);
        let boundaries = source.differential_matrix(0).column_vectors();
        let images: Vec<SparseVec> = self
            .model
            .space()
            .basis_in(1)
            .iter()
            .map(|&k| sp.to_local(&self.inclusion[k], 1))
            .collect();
        let closed = images.iter().all(|v| source.differential_matrix(1).mul_vec(v).is_empty());
        let mut all = boundaries.clone();
        all.extend(images.iter().cloned());
        let independent = rank_of(&all) == rank_of(&boundaries) + images.len();
        unit_ok && h0.dimension == 1 && closed && independent && images.len() == h1.dimension
    }
}

/// Builds the formal model of an algebra with `H^0 = ℚ` and `H^{≥2} = 0`.
///
/// The degree-one letters are the `H^1` representatives picked by the
/// lowest-pivot rule on the row-reduced cocycle space.
pub fn formal_model(a: &Cdga) -> Result<FormalModel, CdgaError> {
    let report = check_axioms(a);
    if !report.is_valid() {
        return Err(CdgaError::Invalid(report));
    }
    let (h0, _) = cohomology_unchecked(a, 0);
    if h0.dimension != 1 {
        return Err(CdgaError::NotConnective(h0.dimension));
    }
    for degree in 2..=a.max_degree() {
        let (h, _) = cohomology_unchecked(a, degree);
        if h.dimension != 0 {
            return Err(CdgaError::NotCurveLike { degree, dim: h.dimension });
        }
    }
    let (h1, _) = cohomology_unchecked(a, 1);
    let sp = a.space();
    let (_, h2q) = cohomology_unchecked(a, 2);

    let mut strictly_multiplicative = true;
    for (i, u) in h1.representatives.iter().enumerate() {
        for v in &h1.representatives[i..] {
            let uv = a.mul(u, v);
            if uv.is_empty() {
                continue;
            }
            strictly_multiplicative = false;
            // the class of u·v in H^2 must vanish
            let coords = h2q.coordinates(&sp.to_local(&uv, 2)).map_err(|_| {
                CdgaError::NonVanishingProducts(sp.format_vector(u), sp.format_vector(v))
            })?;
            if coords.iter().any(|x| !x.is_zero()) {
                return Err(CdgaError::NonVanishingProducts(sp.format_vector(u), sp.format_vector(v)));
            }
        }
    }

    let unit_name = sp.name(a.unit()).to_string();
    let letters: Vec<String> = h1
        .representatives
        .iter()
        .enumerate()
        .map(|(k, v)| match v.iter().next() {
            Some((&i, x)) if v.len() == 1 && x.is_one() => sp.name(i).to_string(),
            _ => {
                let mut candidate = format!("h1_{k}");
                while sp.lookup(&candidate).is_some() {
                    candidate.push('\'');
                }
                candidate
            }
        })
        .collect();
    let space = GradedVectorSpace::new(&[(0, vec![unit_name]), (1, letters.clone())])?;
    let model = Cdga::new(space, 0, BTreeMap::new(), BTreeMap::new())?;
    let mut inclusion = vec![unit_vector(a.unit())];
    inclusion.extend(h1.representatives.iter().cloned());
    let fm = FormalModel { model, inclusion, h1_letters: letters, strictly_multiplicative };
    if !fm.is_quasi_isomorphism(a) {
        return Err(CdgaError::NotQuasiIsomorphism);
    }
    Ok(fm)
}

/// Augmentations of a formal model: degree 0 is spanned by the unit, so
/// there is exactly one.
pub fn augmentations_of_formal_model(m: &FormalModel) -> Vec<Augmentation> {
    vec![Augmentation::unit_only(&m.model).expect("formal model has one-dimensional degree 0")]
}

/// The formal model `ℚ ⊕ span(letters)[-1]` with zero differential and zero
/// products, named `unit` and `letters`.
pub fn formal_cdga(unit: &str, letters: &[String]) -> Cdga {
    let space = GradedVectorSpace::new(&[(0, vec![unit.to_string()]), (1, letters.to_vec())])
        .expect("distinct letter names");
    Cdga::new(space, 0, BTreeMap::new(), BTreeMap::new()).expect("well-formed formal cdga")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn letters(m: usize) -> Vec<String> {
        (0..m).map(|i| format!("w{i}")).collect()
    }

    fn p1_minus_three_points() -> Cdga {
        Cdga::from_names(&[(0, &["1"]), (1, &["w0", "w1"])], "1", &[], &[]).unwrap()
    }

    /// degree 0: 1, t; degree 1: ω, dt; d t = dt; all products of non-units zero.
    fn with_exact_direction() -> Cdga {
        Cdga::from_names(
            &[(0, &["1", "t"]), (1, &["omega", "dt"])],
            "1",
            &[("t", &[("dt", rat(1))])],
            &[],
        )
        .unwrap()
    }

    fn sphere() -> Cdga {
        Cdga::from_names(&[(0, &["1"]), (2, &["e"])], "1", &[], &[]).unwrap()
    }

    #[test]
    fn trivial_algebra_is_valid() {
        let a = Cdga::from_names(&[(0, &["1"])], "1", &[], &[]).unwrap();
        assert!(check_axioms(&a).is_valid());
        assert_eq!(cohomology(&a, 0).unwrap().dimension, 1);
    }

    #[test]
    fn planted_d_squared_is_reported() {
        let a = Cdga::from_names(
            &[(0, &["1"]), (1, &["x"]), (2, &["y"]), (3, &["z"])],
            "1",
            &[("x", &[("y", rat(1))]), ("y", &[("z", rat(1))])],
            &[],
        )
        .unwrap();
        let r = check_axioms(&a);
        assert!(r.violations.contains(&Violation {
            axiom: Axiom::DifferentialSquaresToZero,
            elements: vec!["x".into()]
        }));
        assert!(matches!(cohomology(&a, 1), Err(CdgaError::Invalid(_))));
    }

    #[test]
    fn punctured_line_model() {
        let a = p1_minus_three_points();
        assert!(check_axioms(&a).is_valid());
        assert_eq!(cohomology(&a, 1).unwrap().dimension, 2);
        assert_eq!(cohomology(&a, 2).unwrap().dimension, 0);
    }

    #[test]
    fn other_violations_are_named() {
        // odd element squaring to something nonzero, and a broken unit
        let a = Cdga::from_names(
            &[(0, &["1"]), (1, &["x"]), (2, &["y"])],
            "1",
            &[],
            &[("x", "x", &[("y", rat(1))]), ("1", "y", &[("y", rat(2))])],
        )
        .unwrap();
        let axioms: Vec<Axiom> = check_axioms(&a).violations.iter().map(|v| v.axiom).collect();
        assert!(axioms.contains(&Axiom::GradedCommutativity));
        assert!(axioms.contains(&Axiom::Unit));

        // d(x y) ≠ dx·y - x·dy
        let b = Cdga::from_names(
            &[(0, &["1"]), (1, &["x", "y"]), (2, &["z"])],
            "1",
            &[("x", &[("z", rat(1))])],
            &[],
        )
        .unwrap();
        // x·y = 0 but dx·y = z·y = 0 (degree 3 absent); so valid — now plant a product
        assert!(check_axioms(&b).is_valid());
        let c = Cdga::from_names(
            &[(0, &["1", "t"]), (1, &["u"])],
            "1",
            &[("t", &[("u", rat(1))])],
            &[("t", "t", &[("t", rat(1))])],
        )
        .unwrap();
        // t² = t forces d t = 2 t dt, which fails here
        assert!(check_axioms(&c).violations.iter().any(|v| v.axiom == Axiom::Leibniz));
    }

    #[test]
    fn inhomogeneous_data_is_rejected() {
        let err = Cdga::from_names(&[(0, &["1"]), (1, &["x"])], "1", &[("x", &[("x", rat(1))])], &[])
            .unwrap_err();
        assert!(matches!(err, CdgaError::Inhomogeneous { .. }));
        let err = Cdga::from_names(&[(0, &["1"]), (1, &["1"])], "1", &[], &[]).unwrap_err();
        assert_eq!(err, CdgaError::DuplicateName("1".into()));
        let err = Cdga::from_names(&[(1, &["u"])], "u", &[], &[]).unwrap_err();
        assert_eq!(err, CdgaError::UnitNotInDegreeZero("u".into()));
    }

    #[test]
    fn euler_characteristic_matches_cohomology() {
        for a in [p1_minus_three_points(), with_exact_direction(), sphere()] {
            let chi_h: i64 = (0..=a.max_degree())
                .map(|i| sign::parity(i as i64) * cohomology(&a, i).unwrap().dimension as i64)
                .sum();
            assert_eq!(a.euler_characteristic(), chi_h);
        }
    }

    #[test]
    fn formal_model_of_formal_algebra_is_identity() {
        let a = p1_minus_three_points();
        let m = formal_model(&a).unwrap();
        assert_eq!(m.h1_letters, vec!["w0".to_string(), "w1".to_string()]);
        assert_eq!(m.model, a);
        assert_eq!(m.inclusion, vec![unit_vector(0), unit_vector(1), unit_vector(2)]);
        assert!(m.strictly_multiplicative);
    }

    #[test]
    fn formal_model_drops_exact_direction() {
        let a = with_exact_direction();
        let m = formal_model(&a).unwrap();
        assert_eq!(m.h1_letters, vec!["omega".to_string()]);
        assert_eq!(m.model.space().dim_in(1), 1);
        assert!(m.is_quasi_isomorphism(&a));
    }

    #[test]
    fn formal_model_preconditions() {
        assert_eq!(formal_model(&sphere()).unwrap_err(), CdgaError::NotCurveLike { degree: 2, dim: 1 });
        let two_points = Cdga::from_names(&[(0, &["1", "e"])], "1", &[], &[("e", "e", &[("e", rat(1))])]).unwrap();
        assert_eq!(formal_model(&two_points).unwrap_err(), CdgaError::NotConnective(2));
    }

    #[test]
    fn formal_model_tolerates_exact_products() {
        // x·y = dz: H^2 = 0 but the representatives do not multiply to zero
        let a = Cdga::from_names(
            &[(0, &["1"]), (1, &["x", "y", "z"]), (2, &["p"])],
            "1",
            &[("z", &[("p", rat(1))])],
            &[("x", "y", &[("p", rat(1))])],
        )
        .unwrap();
        assert!(check_axioms(&a).is_valid());
        let m = formal_model(&a).unwrap();
        assert_eq!(m.letter_count(), 2);
        assert!(!m.strictly_multiplicative);
    }

    #[test]
    fn single_augmentation_for_formal_models() {
        for m in [0, 2, 3] {
            let model = FormalModel {
                model: formal_cdga("1", &letters(m)),
                inclusion: vec![],
                h1_letters: letters(m),
                strictly_multiplicative: true,
            };
            let augs = augmentations_of_formal_model(&model);
            assert_eq!(augs.len(), 1);
            assert_eq!(augs[0].value(0), rat(1));
        }
    }

    #[test]
    fn augmentation_validation() {
        let two_points = Cdga::from_names(&[(0, &["1", "e"])], "1", &[], &[("e", "e", &[("e", rat(1))])]).unwrap();
        assert!(Augmentation::from_names(&two_points, &[("e", rat(0))]).is_ok());
        assert!(Augmentation::from_names(&two_points, &[("e", rat(1))]).is_ok());
        assert!(Augmentation::from_names(&two_points, &[("e", rat(2))]).is_err());
        assert!(Augmentation::from_names(&two_points, &[("1", rat(3))]).is_err());
        assert!(Augmentation::unit_only(&two_points).is_err());
    }
}
