//! Punctured lines, piecewise paths and puncture clearance.

use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};

use super::real::Real;
use super::ChenError;
use crate::linalg::Rational;

/// Endpoints that are not stored exactly are matched within this distance.
pub const ENDPOINT_SLACK: f64 = 1e-12;

/// Clearance threshold relative to the closest pair of punctures.
pub const CLEARANCE_FACTOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    pub re: Rational,
    pub im: Rational,
}

impl ExactComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ExactComplex { re, im: Rational::zero() }
    }

    pub fn to_f64(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn to_real<T: Real>(&self) -> Complex<T> {
        Complex::new(T::of_rational(&self.re), T::of_rational(&self.im))
    }
}

/// `ℂ` minus finitely many distinct points, with the forms `dz/(z − a_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PuncturedLine {
    punctures: Vec<ExactComplex>,
}

impl PuncturedLine {
    pub fn new(punctures: Vec<ExactComplex>) -> Result<Self, ChenError> {
        for i in 0..punctures.len() {
            for j in i + 1..punctures.len() {
                if punctures[i] == punctures[j] {
                    return Err(ChenError::DuplicatePuncture(i, j));
                }
            }
        }
        Ok(PuncturedLine { punctures })
    }

    /// `ℂ ∖ {0, 1}`, the affine part of `P¹ ∖ {0, 1, ∞}`.
    pub fn zero_one() -> Self {
        PuncturedLine {
            punctures: vec![
                ExactComplex::real(Rational::zero()),
                ExactComplex::real(Rational::from_integer(1.into())),
            ],
        }
    }

    pub fn punctures(&self) -> &[ExactComplex] {
        &self.punctures
    }

    pub fn form_count(&self) -> usize {
        self.punctures.len()
    }

    /// Minimal admissible distance between a path and a puncture.
    pub fn clearance_threshold(&self) -> f64 {
        let pts: Vec<Complex<f64>> = self.punctures.iter().map(ExactComplex::to_f64).collect();
        let mut min = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                min = min.min((pts[i] - pts[j]).norm());
            }
        }
        if min.is_finite() {
            CLEARANCE_FACTOR * min
        } else {
            CLEARANCE_FACTOR
        }
    }

    /// Checks every segment against every puncture and returns the smallest
    /// certified distance.
    pub fn check_clearance(&self, path: &Path) -> Result<f64, ChenError> {
        let threshold = self.clearance_threshold();
        let mut best = f64::INFINITY;
        for (s, seg) in path.segments().iter().enumerate() {
            for (p, a) in self.punctures.iter().enumerate() {
                let d = seg.distance_lower_bound(a.to_f64(), threshold);
                if d < threshold {
                    return Err(ChenError::PathTooClose { segment: s, puncture: p, distance: d, threshold });
                }
                best = best.min(d);
            }
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Endpoint {
    Exact(ExactComplex),
    Approx(Complex<f64>),
}

impl Endpoint {
    pub fn to_f64(&self) -> Complex<f64> {
        match self {
            Endpoint::Exact(z) => z.to_f64(),
            Endpoint::Approx(z) => *z,
        }
    }

    pub fn matches(&self, other: &Endpoint) -> bool {
        match (self, other) {
            (Endpoint::Exact(a), Endpoint::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).norm() <= ENDPOINT_SLACK,
        }
    }
}

/// One smooth piece, parametrised by `[0, 1]`.
///
/// Arc angles are measured in turns: the point at parameter `s` is
/// `center + radius·exp(2πi(start + s·sweep))`.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Line { from: ExactComplex, to: ExactComplex },
    Arc { center: ExactComplex, radius: Rational, start: Rational, sweep: Rational },
    Bezier { points: [ExactComplex; 4] },
}

fn quarter_turn_point(center: &ExactComplex, radius: &Rational, turns: &Rational) -> Option<ExactComplex> {
    let quarters = turns * Rational::from_integer(4.into());
    if !quarters.is_integer() {
        return None;
    }
    let k = (quarters.to_integer() % 4i32 + 4i32) % 4i32;
    let k = k.to_i32().unwrap_or(0);
    let (c, s) = [(1, 0), (0, 1), (-1, 0), (0, -1)][k as usize];
    Some(ExactComplex::new(
        &center.re + radius * Rational::from_integer(c.into()),
        &center.im + radius * Rational::from_integer(s.into()),
    ))
}

fn turns_point(center: &ExactComplex, radius: &Rational, turns: &Rational) -> Endpoint {
    match quarter_turn_point(center, radius, turns) {
        Some(z) => Endpoint::Exact(z),
        None => {
            let theta = 2.0 * std::f64::consts::PI * turns.to_f64().unwrap_or(f64::NAN);
            let r = radius.to_f64().unwrap_or(f64::NAN);
            Endpoint::Approx(center.to_f64() + Complex::from_polar(r, theta))
        }
    }
}

impl Segment {
    pub fn validate(&self) -> Result<(), ChenError> {
        match self {
            Segment::Arc { radius, sweep, .. } => {
                if *radius <= Rational::zero() {
                    return Err(ChenError::InvalidSegment("arc radius must be positive".into()));
                }
                if sweep.is_zero() {
                    return Err(ChenError::InvalidSegment("arc sweep must be nonzero".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn start(&self) -> Endpoint {
        match self {
            Segment::Line { from, .. } => Endpoint::Exact(from.clone()),
            Segment::Arc { center, radius, start, .. } => turns_point(center, radius, start),
            Segment::Bezier { points } => Endpoint::Exact(points[0].clone()),
        }
    }

    pub fn end(&self) -> Endpoint {
        match self {
            Segment::Line { to, .. } => Endpoint::Exact(to.clone()),
            Segment::Arc { center, radius, start, sweep } => turns_point(center, radius, &(start + sweep)),
            Segment::Bezier { points } => Endpoint::Exact(points[3].clone()),
        }
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Line { from, to } => Segment::Line { from: to.clone(), to: from.clone() },
            Segment::Arc { center, radius, start, sweep } => Segment::Arc {
                center: center.clone(),
                radius: radius.clone(),
                start: start + sweep,
                sweep: -sweep,
            },
            Segment::Bezier { points } => {
                let mut p = points.clone();
                p.reverse();
                Segment::Bezier { points: p }
            }
        }
    }

    pub fn piece<T: Real>(&self) -> Piece<T> {
        match self {
            Segment::Line { from, to } => Piece::Line { from: from.to_real(), to: to.to_real() },
            Segment::Arc { center, radius, start, sweep } => Piece::Arc {
                center: center.to_real(),
                radius: T::of_rational(radius),
                start: T::of_rational(start),
                sweep: T::of_rational(sweep),
            },
            Segment::Bezier { points } => Piece::Bezier {
                points: [points[0].to_real(), points[1].to_real(), points[2].to_real(), points[3].to_real()],
            },
        }
    }

    /// A lower bound for the distance from `a` to the segment; exact for
    /// lines and arcs. Bézier bounds are refined until they clear
    /// `threshold` or the sample budget runs out.
    pub fn distance_lower_bound(&self, a: Complex<f64>, threshold: f64) -> f64 {
        match self {
            Segment::Line { from, to } => point_segment_distance(a, from.to_f64(), to.to_f64()),
            Segment::Arc { center, radius, start, sweep } => {
                let c = center.to_f64();
                let r = radius.to_f64().unwrap_or(f64::NAN);
                let st = start.to_f64().unwrap_or(f64::NAN);
                let sw = sweep.to_f64().unwrap_or(f64::NAN);
                arc_distance(a, c, r, st, sw)
            }
            Segment::Bezier { points } => {
                let p = points.clone().map(|z| z.to_f64());
                bezier_distance_bound(a, &p, threshold)
            }
        }
    }
}

fn point_segment_distance(a: Complex<f64>, p: Complex<f64>, q: Complex<f64>) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (a - p).norm();
    }
    let t = ((a - p) * d.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (a - (p + d * t)).norm()
}

fn arc_distance(a: Complex<f64>, c: Complex<f64>, r: f64, start: f64, sweep: f64) -> f64 {
    let v = a - c;
    let rho = v.norm();
    if rho == 0.0 {
        return r;
    }
    let inside = if sweep.abs() >= 1.0 {
        true
    } else {
        let phi = v.arg() / (2.0 * std::f64::consts::PI);
        let offset = if sweep > 0.0 { phi - start } else { start - phi };
        offset.rem_euclid(1.0) <= sweep.abs()
    };
    if inside {
        (rho - r).abs()
    } else {
        let tau = 2.0 * std::f64::consts::PI;
        let p = c + Complex::from_polar(r, tau * start);
        let q = c + Complex::from_polar(r, tau * (start + sweep));
        (a - p).norm().min((a - q).norm())
    }
}

fn bezier_point(p: &[Complex<f64>; 4], s: f64) -> Complex<f64> {
    let u = 1.0 - s;
    p[0] * (u * u * u) + p[1] * (3.0 * u * u * s) + p[2] * (3.0 * u * s * s) + p[3] * (s * s * s)
}

fn bezier_distance_bound(a: Complex<f64>, p: &[Complex<f64>; 4], threshold: f64) -> f64 {
    let lipschitz = 3.0 * (0..3).map(|i| (p[i + 1] - p[i]).norm()).fold(0.0, f64::max);
    let mut n = 256usize;
    loop {
        let sampled = (0..=n).map(|i| (bezier_point(p, i as f64 / n as f64) - a).norm()).fold(f64::INFINITY, f64::min);
        let bound = sampled - lipschitz / (2.0 * n as f64);
        if bound >= threshold || sampled < threshold || n >= 1 << 20 {
            return bound.max(0.0);
        }
        n *= 4;
    }
}

/// A segment converted to the working precision.
#[derive(Debug, Clone)]
pub enum Piece<T> {
    Line { from: Complex<T>, to: Complex<T> },
    Arc { center: Complex<T>, radius: T, start: T, sweep: T },
    Bezier { points: [Complex<T>; 4] },
}

impl<T: Real> Piece<T> {
    /// Point and velocity at parameter `s`.
    pub fn eval(&self, s: T) -> (Complex<T>, Complex<T>) {
        match self {
            Piece::Line { from, to } => {
                let d = *to - *from;
                (*from + d * s, d)
            }
            Piece::Arc { center, radius, start, sweep } => {
                let tau = T::PI() + T::PI();
                let theta = tau * (*start + s * *sweep);
                let e = Complex::new(theta.cos(), theta.sin()) * *radius;
                (*center + e, e * Complex::new(T::zero(), tau * *sweep))
            }
            Piece::Bezier { points: p } => {
                let one = T::one();
                let three = T::of_f64(3.0);
                let six = T::of_f64(6.0);
                let u = one - s;
                let z = p[0] * (u * u * u) + p[1] * (three * u * u * s) + p[2] * (three * u * s * s) + p[3] * (s * s * s);
                let dz = (p[1] - p[0]) * (three * u * u) + (p[2] - p[1]) * (six * u * s) + (p[3] - p[2]) * (three * s * s);
                (z, dz)
            }
        }
    }
}

/// A continuous concatenation of segments; an empty segment list is the
/// constant path at `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    base: Endpoint,
    segments: Vec<Segment>,
}

impl Path {
    pub fn new(segments: Vec<Segment>) -> Result<Self, ChenError> {
        let first = segments.first().ok_or(ChenError::EmptyPath)?;
        let base = first.start();
        for seg in &segments {
            seg.validate()?;
        }
        for i in 1..segments.len() {
            if !segments[i - 1].end().matches(&segments[i].start()) {
                return Err(ChenError::EndpointMismatch { segment: i });
            }
        }
        Ok(Path { base, segments })
    }

    pub fn constant(point: ExactComplex) -> Self {
        Path { base: Endpoint::Exact(point), segments: Vec::new() }
    }

    pub fn line(from: ExactComplex, to: ExactComplex) -> Self {
        Path { base: Endpoint::Exact(from.clone()), segments: vec![Segment::Line { from, to }] }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_constant(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn start(&self) -> Endpoint {
        self.base.clone()
    }

    pub fn end(&self) -> Endpoint {
        self.segments.last().map(Segment::end).unwrap_or_else(|| self.base.clone())
    }
}

/// `γ₁` followed by `γ₂`.
pub fn compose_paths(first: &Path, second: &Path) -> Result<Path, ChenError> {
    if !first.end().matches(&second.start()) {
        return Err(ChenError::EndpointMismatch { segment: first.segments.len() });
    }
    if first.is_constant() {
        return Ok(second.clone());
    }
    let mut segments = first.segments.clone();
    segments.extend(second.segments.iter().cloned());
    Ok(Path { base: first.base.clone(), segments })
}

pub fn reverse_path(path: &Path) -> Path {
    if path.is_constant() {
        return path.clone();
    }
    let segments: Vec<Segment> = path.segments.iter().rev().map(Segment::reversed).collect();
    let base = segments[0].start();
    Path { base, segments }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn pt(re: Rational, im: Rational) -> ExactComplex {
        ExactComplex::new(re, im)
    }

    #[test]
    fn duplicate_punctures_rejected() {
        let a = ExactComplex::real(rat(1));
        assert!(matches!(PuncturedLine::new(vec![a.clone(), a]), Err(ChenError::DuplicatePuncture(0, 1))));
    }

    #[test]
    fn quarter_turn_endpoints_are_exact() {
        let arc = Segment::Arc { center: pt(rat(0), rat(0)), radius: ratio(1, 2), start: rat(0), sweep: ratio(1, 2) };
        assert_eq!(arc.end(), Endpoint::Exact(pt(ratio(-1, 2), rat(0))));
        let odd = Segment::Arc { center: pt(rat(0), rat(0)), radius: rat(1), start: rat(0), sweep: ratio(1, 3) };
        assert!(matches!(odd.end(), Endpoint::Approx(_)));
    }

    #[test]
    fn line_through_puncture_is_too_close() {
        let x = PuncturedLine::zero_one();
        let path = Path::line(pt(ratio(-1, 2), rat(0)), pt(ratio(1, 2), rat(0)));
        assert!(matches!(x.check_clearance(&path), Err(ChenError::PathTooClose { puncture: 0, .. })));
    }

    #[test]
    fn arc_distance_respects_range() {
        let x = PuncturedLine::zero_one();
        // upper half circle of radius 1/2 around 1/2 passes through both punctures at its ends
        let arc = Segment::Arc { center: pt(ratio(1, 2), rat(0)), radius: ratio(1, 2), start: rat(0), sweep: ratio(1, 2) };
        let path = Path::new(vec![arc]).unwrap();
        assert!(x.check_clearance(&path).is_err());
        let small = Segment::Arc { center: pt(rat(0), rat(0)), radius: ratio(1, 4), start: rat(0), sweep: rat(1) };
        let d = x.check_clearance(&Path::new(vec![small]).unwrap()).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bezier_bound_is_below_true_distance() {
        let p = [pt(ratio(1, 5), rat(0)), pt(ratio(3, 10), ratio(1, 10)), pt(ratio(2, 5), ratio(1, 10)), pt(ratio(1, 2), rat(0))];
        let seg = Segment::Bezier { points: p };
        let bound = seg.distance_lower_bound(Complex::new(0.0, 0.0), 1e-3);
        assert!(bound <= 0.2 + 1e-15 && bound > 0.19);
    }

    #[test]
    fn composition_and_reversal() {
        let a = pt(ratio(1, 5), rat(0));
        let b = pt(ratio(7, 20), rat(0));
        let c = pt(ratio(1, 2), rat(0));
        let g = compose_paths(&Path::line(a.clone(), b.clone()), &Path::line(b.clone(), c.clone())).unwrap();
        assert_eq!(g.segments().len(), 2);
        assert_eq!(g.end(), Endpoint::Exact(c.clone()));
        assert!(matches!(compose_paths(&g, &Path::line(a.clone(), b.clone())), Err(ChenError::EndpointMismatch { .. })));
        let r = reverse_path(&g);
        assert_eq!(r.start(), Endpoint::Exact(c));
        assert_eq!(reverse_path(&r), g);
        let k = Path::constant(a.clone());
        assert_eq!(reverse_path(&k), k);
        assert_eq!(compose_paths(&k, &g).unwrap(), g);
        assert_eq!(compose_paths(&g, &Path::constant(pt(ratio(1, 2), rat(0)))).unwrap(), g);
    }

    #[test]
    fn piece_velocity_matches_difference_quotient() {
        let arc = Segment::Arc { center: pt(rat(0), rat(0)), radius: ratio(1, 2), start: ratio(1, 8), sweep: ratio(1, 3) };
        let bez = Segment::Bezier { points: [pt(rat(0), rat(1)), pt(rat(1), rat(2)), pt(rat(2), rat(-1)), pt(rat(3), rat(0))] };
        for seg in [arc, bez] {
            let piece = seg.piece::<f64>();
            let h = 1e-6;
            let (z1, _) = piece.eval(0.4 - h);
            let (z2, _) = piece.eval(0.4 + h);
            let (_, dz) = piece.eval(0.4);
            assert!(((z2 - z1) / (2.0 * h) - dz).norm() < 1e-6);
        }
    }
}
