//! Geometry in and around two-dimensional cycle spaces: beams, exact planar
//! cones, sequential cones, and rotation predicates.
//!
//! Planar cones are represented exactly over the integers. A sign-reflecting
//! projection makes the two tracked coordinates faithful for the whole
//! plane, so every cone computation happens on 2-vectors and lifts back.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::{in_span, span_basis, LinearSystem, Rational, Subspace};
use crate::projection::SrpWitness;
use crate::vector::IntVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeomError {
    /// `min_ray_distance` needs a nonzero direction.
    ZeroDirection,
    /// The exhaustive membership oracle refuses more than 6 vectors.
    TooManyVectors { got: usize },
    /// A vector handed to `seqcone` does not lie in the witness plane.
    VectorOutsidePlane { index: usize },
    /// `cone_intersect` needs both cones in the same plane.
    PlaneMismatch,
    /// `rot_membership` requires `rot_strict(u, v)`.
    NotStrictRotation,
    /// The witness vectors are not canonical for the nonnegative orthant.
    BadWitness,
    DimensionMismatch,
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::ZeroDirection => write!(f, "direction vector is zero"),
            GeomError::TooManyVectors { got } => {
                write!(f, "membership oracle supports at most 6 vectors, got {}", got)
            }
            GeomError::VectorOutsidePlane { index } => {
                write!(f, "vector {} lies outside the witness plane", index)
            }
            GeomError::PlaneMismatch => write!(f, "cones live in different planes"),
            GeomError::NotStrictRotation => write!(f, "u does not rotate strictly to v"),
            GeomError::BadWitness => {
                write!(f, "witness vectors are not canonical for the nonnegative orthant")
            }
            GeomError::DimensionMismatch => write!(f, "dimension mismatch"),
        }
    }
}

impl core::error::Error for GeomError {}

// ---------------------------------------------------------------------------
// Beams

/// The beam `B_{v,W}`: all `u in N^d` with `||u - alpha v|| <= W` for some
/// rational `alpha >= 0`. With a negative-`alpha` allowance it becomes the
/// generalized beam around the full line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Beam {
    pub direction: IntVector,
    pub width: BigInt,
}

impl Beam {
    pub fn new(direction: IntVector, width: BigInt) -> Self {
        assert!(!width.is_negative(), "beam width must be nonnegative");
        Beam { direction, width }
    }
}

/// Exact beam membership: intersects the per-coordinate intervals of
/// admissible `alpha` values. Points outside `N^d` are never in a beam.
pub fn in_beam(u: &IntVector, beam: &Beam, allow_negative_alpha: bool) -> bool {
    assert_eq!(u.dim(), beam.direction.dim(), "dimension mismatch");
    if !u.is_nonnegative() {
        return false;
    }
    let w = Rational::from_integer(beam.width.clone());
    // Admissible alphas form an interval; None bounds are infinite.
    let mut lo: Option<Rational> = if allow_negative_alpha { None } else { Some(Rational::zero()) };
    let mut hi: Option<Rational> = None;
    for i in 0..u.dim() {
        let vi = &beam.direction[i];
        let ui = Rational::from_integer(u[i].clone());
        if vi.is_zero() {
            if Rational::from_integer(u[i].abs()) > w {
                return false;
            }
            continue;
        }
        let v = Rational::from_integer(vi.clone());
        let a = (&ui - &w) / &v;
        let b = (&ui + &w) / &v;
        let (a, b) = if vi.is_negative() { (b, a) } else { (a, b) };
        if lo.as_ref().map_or(true, |l| &a > l) {
            lo = Some(a);
        }
        if hi.as_ref().map_or(true, |h| &b < h) {
            hi = Some(b);
        }
    }
    match (&lo, &hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

/// Splits the generalized beam around `v` into the two ordinary beams along
/// the positive and negative parts, which cover it: `B^Z_{v,W} ⊆ B_{v+,W} ∪
/// B_{v-,W}`, with both directions staying within `||v||`. The union can be
/// strictly larger.
pub fn split_generalized_beam(v: &IntVector, width: &BigInt) -> (Beam, Beam) {
    (
        Beam::new(v.positive_part(), width.clone()),
        Beam::new(v.negative_part(), width.clone()),
    )
}

/// `min { ||u - alpha v||_inf : alpha in Q }`, exactly. The objective is a
/// convex piecewise-linear function of `alpha`; its minimum sits at a kink
/// or at a crossing of two pieces, so those finitely many candidates are
/// enumerated.
pub fn min_ray_distance(u: &IntVector, v: &IntVector) -> Result<Rational, GeomError> {
    if u.dim() != v.dim() {
        return Err(GeomError::DimensionMismatch);
    }
    if v.is_zero() {
        return Err(GeomError::ZeroDirection);
    }
    let d = u.dim();
    let mut candidates: Vec<Rational> = Vec::new();
    for i in 0..d {
        if !v[i].is_zero() {
            candidates.push(Rational::new(u[i].clone(), v[i].clone()));
        }
        for j in (i + 1)..d {
            let dv = &v[i] - &v[j];
            if !dv.is_zero() {
                candidates.push(Rational::new(&u[i] - &u[j], dv));
            }
            let sv = &v[i] + &v[j];
            if !sv.is_zero() {
                candidates.push(Rational::new(&u[i] + &u[j], sv));
            }
        }
    }
    let objective = |alpha: &Rational| -> Rational {
        (0..d)
            .map(|i| (Rational::from_integer(u[i].clone()) - alpha * Rational::from_integer(v[i].clone())).abs())
            .max()
            .expect("dimension is positive here")
    };
    Ok(candidates
        .iter()
        .map(objective)
        .min()
        .expect("v is nonzero, so a kink candidate exists"))
}

// ---------------------------------------------------------------------------
// Exact planar cones

pub(crate) type I2 = [BigInt; 2];

pub(crate) fn ivec2(a: i64, b: i64) -> I2 {
    [BigInt::from(a), BigInt::from(b)]
}

pub(crate) fn cross2(a: &I2, b: &I2) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

pub(crate) fn dot2(a: &I2, b: &I2) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1]
}

fn is_zero2(a: &I2) -> bool {
    a[0].is_zero() && a[1].is_zero()
}

fn neg2(a: &I2) -> I2 {
    [-&a[0], -&a[1]]
}

fn primitive2(a: &I2) -> I2 {
    let g = a[0].gcd(&a[1]);
    if g.is_zero() {
        a.clone()
    } else {
        [&a[0] / &g, &a[1] / &g]
    }
}

/// Counterclockwise quarter turn.
fn rot_ccw(a: &I2) -> I2 {
    [-&a[1], a[0].clone()]
}

/// Clockwise quarter turn.
fn rot_cw(a: &I2) -> I2 {
    [a[1].clone(), -&a[0]]
}

fn line_canonical(g: &I2) -> I2 {
    if g[0].is_negative() || (g[0].is_zero() && g[1].is_negative()) {
        neg2(g)
    } else {
        g.clone()
    }
}

/// The kind of a planar cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeKind {
    Point,
    Ray,
    SalientCone,
    Line,
    Halfplane,
    FullPlane,
}

/// A convex cone in the plane, exact and canonical. Generators are
/// primitive; a salient cone stores its boundary rays counterclockwise with
/// angle strictly below pi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum PlanarCone {
    Point,
    Ray(I2),
    Salient(I2, I2),
    Line(I2),
    /// Inward normal: the halfplane is `{ x : <n, x> >= 0 }`.
    Halfplane(I2),
    Plane,
}

impl PlanarCone {
    pub(crate) fn kind(&self) -> ConeKind {
        match self {
            PlanarCone::Point => ConeKind::Point,
            PlanarCone::Ray(_) => ConeKind::Ray,
            PlanarCone::Salient(_, _) => ConeKind::SalientCone,
            PlanarCone::Line(_) => ConeKind::Line,
            PlanarCone::Halfplane(_) => ConeKind::Halfplane,
            PlanarCone::Plane => ConeKind::FullPlane,
        }
    }

    pub(crate) fn contains(&self, x: &I2) -> bool {
        match self {
            PlanarCone::Point => is_zero2(x),
            PlanarCone::Ray(g) => cross2(g, x).is_zero() && !dot2(g, x).is_negative(),
            PlanarCone::Salient(g1, g2) => {
                !cross2(g1, x).is_negative() && !cross2(x, g2).is_negative()
            }
            PlanarCone::Line(g) => cross2(g, x).is_zero(),
            PlanarCone::Halfplane(n) => !dot2(n, x).is_negative(),
            PlanarCone::Plane => true,
        }
    }

    /// Rays that conically generate the cone.
    pub(crate) fn generating_rays(&self) -> Vec<I2> {
        match self {
            PlanarCone::Point => alloc::vec![],
            PlanarCone::Ray(g) => alloc::vec![g.clone()],
            PlanarCone::Salient(g1, g2) => alloc::vec![g1.clone(), g2.clone()],
            PlanarCone::Line(g) => alloc::vec![g.clone(), neg2(g)],
            // Boundary rays plus the normal itself as an interior direction.
            PlanarCone::Halfplane(n) => alloc::vec![rot_cw(n), rot_ccw(n), n.clone()],
            PlanarCone::Plane => alloc::vec![ivec2(1, 0), ivec2(0, 1), ivec2(-1, 0), ivec2(0, -1)],
        }
    }

    /// Homogeneous halfplane constraints cutting out the cone.
    fn halfplane_constraints(&self) -> Vec<I2> {
        match self {
            PlanarCone::Point => alloc::vec![ivec2(1, 0), ivec2(-1, 0), ivec2(0, 1), ivec2(0, -1)],
            PlanarCone::Ray(g) => alloc::vec![rot_ccw(g), rot_cw(g), g.clone()],
            // x in cone iff cross(g1, x) >= 0 and cross(x, g2) >= 0.
            PlanarCone::Salient(g1, g2) => alloc::vec![rot_ccw(g1), rot_cw(g2)],
            PlanarCone::Line(g) => alloc::vec![rot_ccw(g), rot_cw(g)],
            PlanarCone::Halfplane(n) => alloc::vec![n.clone()],
            PlanarCone::Plane => alloc::vec![],
        }
    }

    /// The conic hull of `self` and one extra ray.
    pub(crate) fn hull_add_ray(&self, v: &I2) -> PlanarCone {
        if is_zero2(v) {
            return self.clone();
        }
        if let PlanarCone::Plane = self {
            return PlanarCone::Plane;
        }
        if self.contains(v) {
            return self.clone();
        }
        let mut rays = self.generating_rays();
        rays.push(v.clone());
        hull_of_rays(&rays)
    }

    pub(crate) fn intersect(&self, other: &PlanarCone) -> PlanarCone {
        let mut constraints = self.halfplane_constraints();
        constraints.extend(other.halfplane_constraints());
        cone_from_halfplanes(&constraints)
    }
}

/// The conic hull of finitely many rays.
pub(crate) fn hull_of_rays(rays: &[I2]) -> PlanarCone {
    let set: BTreeSet<I2> = rays
        .iter()
        .filter(|r| !is_zero2(r))
        .map(primitive2)
        .collect();
    if set.is_empty() {
        return PlanarCone::Point;
    }
    let rays: Vec<I2> = set.into_iter().collect();
    // A "start" ray has every other ray within pi counterclockwise of it;
    // one exists exactly when the rays fit in a closed halfplane.
    let Some(start) = rays
        .iter()
        .find(|r| rays.iter().all(|s| !cross2(r, s).is_negative()))
        .cloned()
    else {
        return PlanarCone::Plane;
    };
    let has_opposite = rays
        .iter()
        .any(|s| cross2(&start, s).is_zero() && dot2(&start, s).is_negative());
    if has_opposite {
        if rays.iter().any(|s| cross2(&start, s).is_positive()) {
            return PlanarCone::Halfplane(rot_ccw(&start));
        }
        return PlanarCone::Line(line_canonical(&start));
    }
    // All rays sit strictly within the open halfplane of `start` (plus the
    // start direction itself), where the cross product orders them totally.
    let mut end = start.clone();
    for s in &rays {
        if cross2(&end, s).is_positive() {
            end = s.clone();
        }
    }
    if end == start {
        PlanarCone::Ray(start)
    } else {
        PlanarCone::Salient(start, end)
    }
}

/// The cone `{ x : <n, x> >= 0 for every normal n }`.
pub(crate) fn cone_from_halfplanes(normals: &[I2]) -> PlanarCone {
    let nonzero: Vec<I2> = normals.iter().filter(|n| !is_zero2(n)).map(primitive2).collect();
    if nonzero.is_empty() {
        return PlanarCone::Plane;
    }
    let first = &nonzero[0];
    if nonzero.iter().all(|n| n == first) {
        return PlanarCone::Halfplane(first.clone());
    }
    // Candidate extreme rays lie on some constraint boundary.
    let mut candidates: Vec<I2> = Vec::new();
    for n in &nonzero {
        let b = rot_ccw(n);
        candidates.push(b.clone());
        candidates.push(neg2(&b));
    }
    let feasible: Vec<I2> = candidates
        .into_iter()
        .filter(|r| nonzero.iter().all(|n| !dot2(n, r).is_negative()))
        .collect();
    // With at least two non-parallel constraints the feasible cone spans
    // less than pi (or is a line), so its extreme rays generate it.
    hull_of_rays(&feasible)
}

pub(crate) fn quadrant() -> PlanarCone {
    PlanarCone::Salient(ivec2(1, 0), ivec2(0, 1))
}

// ---------------------------------------------------------------------------
// Lifted cones in a witness plane

/// A cone inside a rank-<=2 plane, carried together with the plane, the
/// witness coordinates it is computed in, and lifted generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone2 {
    plane: Subspace,
    i1: usize,
    i2: usize,
    planar: PlanarCone,
    generators: Vec<IntVector>,
}

impl Cone2 {
    pub fn kind(&self) -> ConeKind {
        self.planar.kind()
    }

    pub fn plane(&self) -> &Subspace {
        &self.plane
    }

    /// Lifted generators, aligned with the canonical planar generators:
    /// empty for a point, one vector for a ray, two for a salient cone.
    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Membership of a full-dimensional vector: it must lie in the plane and
    /// project into the planar cone.
    pub fn contains(&self, v: &IntVector) -> bool {
        if v.dim() != self.plane.ambient_dim() || !in_span(v, &self.plane) {
            return false;
        }
        self.planar.contains(&[v[self.i1].clone(), v[self.i2].clone()])
    }

    /// Whether the cone contains two linearly independent vectors.
    pub fn is_nontrivial(&self) -> bool {
        matches!(
            self.kind(),
            ConeKind::SalientCone | ConeKind::Halfplane | ConeKind::FullPlane
        )
    }

    /// Whether the cone contains a strictly positive vector. Defined for
    /// cones inside the nonnegative orthant (every sequential cone is one):
    /// there the generators are nonnegative and a positive combination
    /// exists iff their supports cover every coordinate.
    pub fn contains_positive_vector(&self) -> bool {
        match self.kind() {
            ConeKind::Point => false,
            ConeKind::Ray | ConeKind::SalientCone => {
                let d = self.plane.ambient_dim();
                let mut covered = alloc::vec![false; d];
                for g in &self.generators {
                    assert!(g.is_nonnegative(), "cone is not inside the nonnegative orthant");
                    for i in g.support() {
                        covered[i] = true;
                    }
                }
                covered.iter().all(|&c| c)
            }
            _ => unreachable!("orthant-clipped cones are points, rays, or salient cones"),
        }
    }
}

fn project2(v: &IntVector, i1: usize, i2: usize) -> I2 {
    [v[i1].clone(), v[i2].clone()]
}

/// Lifts the planar generators of an orthant-clipped cone back to the
/// plane. A generator parallel to a projected input vector lifts to that
/// vector; the axis directions lift to the canonical witness vectors.
fn lift_generators(
    planar: &PlanarCone,
    inputs: &[(I2, IntVector)],
    witness: &SrpWitness,
) -> Vec<IntVector> {
    let gens: Vec<I2> = match planar {
        PlanarCone::Point => alloc::vec![],
        PlanarCone::Ray(g) => alloc::vec![g.clone()],
        PlanarCone::Salient(g1, g2) => alloc::vec![g1.clone(), g2.clone()],
        _ => unreachable!("orthant-clipped cones are points, rays, or salient cones"),
    };
    gens.iter()
        .map(|g| {
            if let Some((_, v)) = inputs.iter().find(|(p, _)| p == g) {
                return v.clone();
            }
            if *g == ivec2(1, 0) {
                return witness.u1.clone();
            }
            if *g == ivec2(0, 1) {
                return witness.u2.clone();
            }
            unreachable!("clipped generators are projected inputs or axes")
        })
        .collect()
}

/// Canonical witnesses for the nonnegative orthant have nonnegative
/// vectors whose projections to the tracked pair hit the two axes. That
/// keeps every generator produced by `seqcone` nonnegative.
fn witness_usable(witness: &SrpWitness) -> bool {
    let d = witness.u1.dim();
    witness.u2.dim() == d
        && witness.i1 < d
        && witness.i2 < d
        && witness.i1 != witness.i2
        && witness.u1.is_nonnegative()
        && witness.u2.is_nonnegative()
        && witness.u1[witness.i1].is_positive()
        && witness.u1[witness.i2].is_zero()
        && witness.u2[witness.i2].is_positive()
        && witness.u2[witness.i1].is_zero()
}

/// The sequential cone of a vector sequence inside the witness plane: all
/// sums `a_1 v_1 + ... + a_k v_k` with `a_j >= 0` whose prefix sums are all
/// nonnegative. Computed incrementally in witness coordinates:
/// `C_j = (C_{j-1} + Cone{v_j})` clipped to the nonnegative quadrant.
pub fn seqcone(vectors: &[IntVector], witness: &SrpWitness) -> Result<Cone2, GeomError> {
    if !witness_usable(witness) {
        return Err(GeomError::BadWitness);
    }
    let plane = span_basis(witness.u1.dim(), &[witness.u1.clone(), witness.u2.clone()]);
    let mut inputs: Vec<(I2, IntVector)> = Vec::new();
    for (index, v) in vectors.iter().enumerate() {
        if v.dim() != plane.ambient_dim() {
            return Err(GeomError::DimensionMismatch);
        }
        if !in_span(v, &plane) {
            return Err(GeomError::VectorOutsidePlane { index });
        }
        inputs.push((primitive2(&project2(v, witness.i1, witness.i2)), v.clone()));
    }
    let mut cone = PlanarCone::Point;
    for v in vectors {
        cone = cone.hull_add_ray(&project2(v, witness.i1, witness.i2));
        cone = cone.intersect(&quadrant());
    }
    let generators = lift_generators(&cone, &inputs, witness);
    Ok(Cone2 { plane, i1: witness.i1, i2: witness.i2, planar: cone, generators })
}

/// Exhaustive sequential-cone membership by rational feasibility: does
/// `target` equal a nonnegative combination of the vectors with nonnegative
/// prefix sums? Exponential-ish Fourier-Motzkin; refuses more than 6
/// vectors. This is the oracle `seqcone` is tested against.
pub fn seqcone_member_oracle(vectors: &[IntVector], target: &IntVector) -> Result<bool, GeomError> {
    if vectors.len() > 6 {
        return Err(GeomError::TooManyVectors { got: vectors.len() });
    }
    let d = target.dim();
    if vectors.iter().any(|v| v.dim() != d) {
        return Err(GeomError::DimensionMismatch);
    }
    let k = vectors.len();
    let mut sys = LinearSystem::new(k);
    let coeff = |j: usize, c: usize| Rational::from_integer(vectors[j][c].clone());
    for j in 0..k {
        let mut row = alloc::vec![Rational::zero(); k];
        row[j] = Rational::from_integer(BigInt::from(1));
        sys.add_ge(row, Rational::zero());
    }
    for prefix in 1..=k {
        for c in 0..d {
            let mut row = alloc::vec![Rational::zero(); k];
            for (j, slot) in row.iter_mut().enumerate().take(prefix) {
                *slot = coeff(j, c);
            }
            sys.add_ge(row, Rational::zero());
        }
    }
    for c in 0..d {
        let t = Rational::from_integer(target[c].clone());
        let row: Vec<Rational> = (0..k).map(|j| coeff(j, c)).collect();
        let neg_row: Vec<Rational> = row.iter().map(|x| -x).collect();
        sys.add_ge(row, t.clone());
        sys.add_ge(neg_row, -t);
    }
    Ok(sys.is_feasible())
}

// ---------------------------------------------------------------------------
// Rotation predicates

/// `v` lies strictly within the counterclockwise halfturn after `u`, in
/// witness coordinates.
pub fn rot_strict(u: &IntVector, v: &IntVector, witness: &SrpWitness) -> bool {
    cross2(&project2(u, witness.i1, witness.i2), &project2(v, witness.i1, witness.i2)).is_positive()
}

/// Weak version of [`rot_strict`]: allows collinearity.
pub fn rot_weak(u: &IntVector, v: &IntVector, witness: &SrpWitness) -> bool {
    !cross2(&project2(u, witness.i1, witness.i2), &project2(v, witness.i1, witness.i2)).is_negative()
}

/// Membership of `w` in `Cone{u, v}` by the two rotation tests: requires
/// `u` to rotate strictly to `v`, and then `w` is in the cone iff
/// `u` rotates weakly to `w` and `w` rotates weakly to `v`.
pub fn rot_membership(
    u: &IntVector,
    v: &IntVector,
    w: &IntVector,
    witness: &SrpWitness,
) -> Result<bool, GeomError> {
    if !rot_strict(u, v, witness) {
        return Err(GeomError::NotStrictRotation);
    }
    Ok(rot_weak(u, w, witness) && rot_weak(w, v, witness))
}

/// Intersection of two cones in the same plane (and the same witness
/// coordinates). Generators of the result are lifted from the inputs.
pub fn cone_intersect(a: &Cone2, b: &Cone2) -> Result<Cone2, GeomError> {
    if a.plane != b.plane || a.i1 != b.i1 || a.i2 != b.i2 {
        return Err(GeomError::PlaneMismatch);
    }
    let planar = a.planar.intersect(&b.planar);
    let mut inputs: Vec<(I2, IntVector)> = Vec::new();
    for cone in [a, b] {
        let gens: Vec<I2> = match &cone.planar {
            PlanarCone::Point => alloc::vec![],
            PlanarCone::Ray(g) => alloc::vec![g.clone()],
            PlanarCone::Salient(g1, g2) => alloc::vec![g1.clone(), g2.clone()],
            _ => unreachable!("public cones are orthant-clipped"),
        };
        for (g, lifted) in gens.into_iter().zip(cone.generators.iter()) {
            inputs.push((g, lifted.clone()));
        }
    }
    let generators = match &planar {
        PlanarCone::Point => alloc::vec![],
        PlanarCone::Ray(g) => alloc::vec![lookup_lift(&inputs, g)],
        PlanarCone::Salient(g1, g2) => {
            alloc::vec![lookup_lift(&inputs, g1), lookup_lift(&inputs, g2)]
        }
        _ => unreachable!("intersection of orthant-clipped cones is orthant-clipped"),
    };
    Ok(Cone2 { plane: a.plane.clone(), i1: a.i1, i2: a.i2, planar, generators })
}

fn lookup_lift(inputs: &[(I2, IntVector)], g: &I2) -> IntVector {
    inputs
        .iter()
        .find(|(p, _)| p == g)
        .map(|(_, v)| v.clone())
        .expect("extreme rays of an intersection are extreme rays of an input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::{find_srp, Orthant};
    use alloc::vec;

    #[test]
    fn beam_membership_examples() {
        // v=(2,1), W=1: (5,2) fits at alpha=5/2; (0,9) does not.
        let beam = Beam::new(IntVector::from_i64(&[2, 1]), BigInt::from(1));
        assert!(in_beam(&IntVector::from_i64(&[5, 2]), &beam, false));
        assert!(!in_beam(&IntVector::from_i64(&[0, 9]), &beam, false));
        // Ball around the origin: zero direction, width 2.
        let ball = Beam::new(IntVector::zero(2), BigInt::from(2));
        assert!(in_beam(&IntVector::from_i64(&[2, 1]), &ball, false));
        assert!(!in_beam(&IntVector::from_i64(&[3, 0]), &ball, false));
    }

    #[test]
    fn generalized_beam_allows_negative_alpha() {
        let beam = Beam::new(IntVector::from_i64(&[1, -1]), BigInt::from(0));
        // (0,5) = -5 * (1,-1) + (5,0)? No: exact multiples only at width 0.
        assert!(!in_beam(&IntVector::from_i64(&[0, 5]), &beam, false));
        // alpha = -5 gives exactly (-5,5), not nonnegative... but (0,0) works.
        assert!(in_beam(&IntVector::zero(2), &beam, true));
        // With width 1 and alpha allowed negative, (0,1) is within reach of
        // alpha = -1/2: (−1/2, 1/2), distance 1/2.
        let wide = Beam::new(IntVector::from_i64(&[1, -1]), BigInt::from(1));
        assert!(in_beam(&IntVector::from_i64(&[0, 1]), &wide, true));
    }

    #[test]
    fn split_beam_parts() {
        let (plus, minus) = split_generalized_beam(&IntVector::from_i64(&[2, -3, 0]), &BigInt::from(4));
        assert_eq!(plus.direction, IntVector::from_i64(&[2, 0, 0]));
        assert_eq!(minus.direction, IntVector::from_i64(&[0, 3, 0]));
        assert_eq!(plus.width, BigInt::from(4));
    }

    #[test]
    fn ray_distance_matches_2d_closed_form() {
        // For u, v in N^2, v semipositive: |v1 u2 - u1 v2| / (v1 + v2).
        let u = IntVector::from_i64(&[3, 5]);
        let v = IntVector::from_i64(&[2, 1]);
        let expected = Rational::new(BigInt::from((2 * 5 - 3 * 1i64).abs()), BigInt::from(3));
        assert_eq!(min_ray_distance(&u, &v).unwrap(), expected);
        // Collinear points have distance zero.
        assert_eq!(
            min_ray_distance(&IntVector::from_i64(&[4, 2]), &v).unwrap(),
            Rational::zero()
        );
        assert!(matches!(
            min_ray_distance(&u, &IntVector::zero(2)),
            Err(GeomError::ZeroDirection)
        ));
    }

    #[test]
    fn planar_hull_cases() {
        let quarter = hull_of_rays(&[ivec2(1, 0), ivec2(0, 1)]);
        assert_eq!(quarter, PlanarCone::Salient(ivec2(1, 0), ivec2(0, 1)));
        assert!(quarter.contains(&ivec2(3, 4)));
        assert!(!quarter.contains(&ivec2(-1, 4)));

        assert_eq!(hull_of_rays(&[ivec2(2, 2), ivec2(1, 1)]), PlanarCone::Ray(ivec2(1, 1)));
        assert_eq!(hull_of_rays(&[ivec2(1, 1), ivec2(-1, -1)]), PlanarCone::Line(ivec2(1, 1)));
        assert_eq!(
            hull_of_rays(&[ivec2(1, 0), ivec2(-1, 0), ivec2(0, 1)]),
            PlanarCone::Halfplane(ivec2(0, 1))
        );
        assert_eq!(
            hull_of_rays(&[ivec2(1, 0), ivec2(0, 1), ivec2(-1, -1)]),
            PlanarCone::Plane
        );
        assert_eq!(hull_of_rays(&[]), PlanarCone::Point);
    }

    #[test]
    fn halfplane_intersection_cases() {
        // Normals (1,0) and (0,1) cut out the first quadrant.
        let quad = cone_from_halfplanes(&[ivec2(1, 0), ivec2(0, 1)]);
        assert_eq!(quad, quadrant());
        assert!(quad.contains(&ivec2(5, 0)));
        assert!(!quad.contains(&ivec2(-1, 3)));

        // Opposite normals leave a line; no normals leave the plane.
        assert_eq!(
            cone_from_halfplanes(&[ivec2(1, 1), ivec2(-1, -1)]),
            PlanarCone::Line(ivec2(1, -1))
        );
        assert_eq!(cone_from_halfplanes(&[]), PlanarCone::Plane);
        assert_eq!(cone_from_halfplanes(&[ivec2(0, 2)]), PlanarCone::Halfplane(ivec2(0, 1)));

        // Antipodal strictness: three normals pinning the origin.
        assert_eq!(
            cone_from_halfplanes(&[ivec2(1, 0), ivec2(-1, 1), ivec2(-1, -1)]),
            PlanarCone::Point
        );

        // Intersections through the halfplane representation.
        let upper = PlanarCone::Halfplane(ivec2(0, 1));
        assert_eq!(quadrant().intersect(&upper), quadrant());
        assert_eq!(
            quadrant().intersect(&PlanarCone::Line(ivec2(1, 1))),
            PlanarCone::Ray(ivec2(1, 1))
        );
        assert_eq!(
            PlanarCone::Salient(ivec2(1, 0), ivec2(1, 1))
                .intersect(&PlanarCone::Salient(ivec2(1, 1), ivec2(0, 1))),
            PlanarCone::Ray(ivec2(1, 1))
        );
    }

    #[test]
    fn seqcone_spec_shapes() {
        // d = 2, plane = whole space, witness over both coordinates.
        let plane = span_basis(2, &[IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[0, 1])]);
        let witness = find_srp(&plane, &Orthant::nonnegative(2)).unwrap();

        // SeqCone((0,1),(1,-1)) fills the whole quadrant.
        let c = seqcone(
            &[IntVector::from_i64(&[0, 1]), IntVector::from_i64(&[1, -1])],
            &witness,
        )
        .unwrap();
        assert_eq!(c.kind(), ConeKind::SalientCone);
        assert!(c.contains(&IntVector::from_i64(&[3, 0])));
        assert!(c.contains(&IntVector::from_i64(&[0, 3])));
        assert!(c.contains_positive_vector());

        // SeqCone((1,-1),(0,1)): the first vector alone dips negative, so
        // the cone stays inside { y <= x } union ... compute: C1 = {0},
        // then C2 = Cone{(0,1)} clipped: the vertical ray.
        let c = seqcone(
            &[IntVector::from_i64(&[1, -1]), IntVector::from_i64(&[0, 1])],
            &witness,
        )
        .unwrap();
        assert_eq!(c.kind(), ConeKind::Ray);
        assert!(c.contains(&IntVector::from_i64(&[0, 2])));
        assert!(!c.contains(&IntVector::from_i64(&[3, 0])));
        assert!(!c.contains_positive_vector());

        // Empty sequence: the origin.
        let c = seqcone(&[], &witness).unwrap();
        assert_eq!(c.kind(), ConeKind::Point);
        assert!(c.contains(&IntVector::zero(2)));
        assert!(!c.contains(&IntVector::from_i64(&[1, 0])));
    }

    #[test]
    fn seqcone_oracle_examples() {
        let v = [IntVector::from_i64(&[0, 1]), IntVector::from_i64(&[1, -1])];
        assert!(seqcone_member_oracle(&v, &IntVector::from_i64(&[3, 0])).unwrap());
        // (3,-1) has a negative entry: the final sum constraint fails.
        assert!(!seqcone_member_oracle(&v, &IntVector::from_i64(&[3, -1])).unwrap());
        // Reversed order cannot reach (3,0): the first prefix dips negative.
        let w = [IntVector::from_i64(&[1, -1]), IntVector::from_i64(&[0, 1])];
        assert!(!seqcone_member_oracle(&w, &IntVector::from_i64(&[3, 0])).unwrap());
        assert!(seqcone_member_oracle(&w, &IntVector::from_i64(&[0, 3])).unwrap());
        let too_many = vec![IntVector::zero(1); 7];
        assert!(matches!(
            seqcone_member_oracle(&too_many, &IntVector::zero(1)),
            Err(GeomError::TooManyVectors { got: 7 })
        ));
    }

    #[test]
    fn rotation_examples() {
        let plane = span_basis(2, &[IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[0, 1])]);
        let witness = find_srp(&plane, &Orthant::nonnegative(2)).unwrap();
        let u = IntVector::from_i64(&[1, 0]);
        let v = IntVector::from_i64(&[0, 1]);
        assert!(rot_strict(&u, &v, &witness));
        assert!(!rot_strict(&v, &u, &witness));
        assert!(rot_membership(&u, &v, &IntVector::from_i64(&[1, 1]), &witness).unwrap());
        assert!(!rot_membership(&u, &v, &IntVector::from_i64(&[-1, 1]), &witness).unwrap());
        assert!(matches!(
            rot_membership(&v, &u, &IntVector::from_i64(&[1, 1]), &witness),
            Err(GeomError::NotStrictRotation)
        ));
    }

    #[test]
    fn cone_intersection_examples() {
        let plane = span_basis(2, &[IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[0, 1])]);
        let witness = find_srp(&plane, &Orthant::nonnegative(2)).unwrap();
        // Cone{(1,0),(1,1)} and Cone{(1,1),(0,1)} share exactly the (1,1) ray.
        let a = seqcone(&[IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[1, 1])], &witness).unwrap();
        let b = seqcone(&[IntVector::from_i64(&[1, 1]), IntVector::from_i64(&[0, 1])], &witness).unwrap();
        let i = cone_intersect(&a, &b).unwrap();
        assert_eq!(i.kind(), ConeKind::Ray);
        assert_eq!(i.generators(), &[IntVector::from_i64(&[1, 1])]);
        assert!(!i.is_nontrivial());
        // Intersecting a cone with itself is the identity.
        let again = cone_intersect(&a, &a).unwrap();
        assert_eq!(again, a);
        assert!(a.is_nontrivial());
    }
}
