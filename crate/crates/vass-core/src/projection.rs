//! Sign-reflecting projections and the support projection.
//!
//! A pair of coordinates is sign-reflecting for a plane `P` with respect to
//! an orthant `Z` when membership of the projection in the projected orthant
//! already forces membership of the full vector: `v|_I in Z|_I` implies
//! `v in Z` for all `v in P`. Such a pair lets all cone computations in `P`
//! happen on two exact integer coordinates.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::geom::{cone_from_halfplanes, ConeKind, I2};
use crate::geodim::cycle_space_basis;
use crate::linalg::{span_basis, LinearSystem, Rational, Subspace};
use crate::model::{Transition, Vass};
use crate::vector::IntVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionError {
    /// `find_srp` needs a plane of rank exactly 2.
    NotPlanar { rank: usize },
    /// No coordinate pair verifies; cannot happen for a genuine plane.
    NoSignReflectingPair,
    /// The 2x2 minor of the basis at the chosen coordinates is singular.
    SingularMinor,
    /// A canonical vector cannot be sign-flipped into the orthant.
    NotSignReflecting,
    /// The support projection would exceed the state cap.
    ProjectionTooLarge { states: BigInt, cap: u64 },
    DimensionMismatch,
}

impl fmt::Display for ProjectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionError::NotPlanar { rank } => {
                write!(f, "expected a plane of rank 2, got rank {}", rank)
            }
            ProjectionError::NoSignReflectingPair => {
                write!(f, "no coordinate pair is sign-reflecting")
            }
            ProjectionError::SingularMinor => write!(f, "basis minor at the chosen pair is singular"),
            ProjectionError::NotSignReflecting => {
                write!(f, "canonical vector cannot be sign-flipped into the orthant")
            }
            ProjectionError::ProjectionTooLarge { states, cap } => {
                write!(f, "support projection needs {} states, cap is {}", states, cap)
            }
            ProjectionError::DimensionMismatch => write!(f, "dimension mismatch"),
        }
    }
}

impl core::error::Error for ProjectionError {}

/// An orthant of `R^d`: one closed halfline per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orthant {
    nonneg: Vec<bool>,
}

impl Orthant {
    pub fn new(nonneg: Vec<bool>) -> Self {
        Orthant { nonneg }
    }

    pub fn nonnegative(dim: usize) -> Self {
        Orthant { nonneg: alloc::vec![true; dim] }
    }

    pub fn dim(&self) -> usize {
        self.nonneg.len()
    }

    /// +1 for a nonnegative coordinate, -1 for a nonpositive one.
    pub fn sign(&self, i: usize) -> i64 {
        if self.nonneg[i] {
            1
        } else {
            -1
        }
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        assert_eq!(v.dim(), self.dim(), "dimension mismatch");
        (0..v.dim()).all(|i| {
            if self.nonneg[i] {
                !v[i].is_negative()
            } else {
                !v[i].is_positive()
            }
        })
    }
}

/// A verified sign-reflecting pair together with the canonical basis of the
/// plane adapted to it: `u1` vanishes at `i2`, `u2` vanishes at `i1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrpWitness {
    pub i1: usize,
    pub i2: usize,
    pub u1: IntVector,
    pub u2: IntVector,
}

/// Signed coefficient-space normal of the orthant constraint at
/// coordinate `j`: the combination `sum_k lambda_k b_k` satisfies the
/// orthant at `j` iff `<n_j, lambda> >= 0`.
fn coefficient_normal(basis: &[IntVector], orthant: &Orthant, j: usize) -> Vec<BigInt> {
    basis
        .iter()
        .map(|b| {
            if orthant.sign(j) >= 0 {
                b[j].clone()
            } else {
                -&b[j]
            }
        })
        .collect()
}

/// Decides whether `(i1, i2)` is sign-reflecting for the space with respect
/// to the orthant. Exact for every rank: rank 0 is trivial, rank above 2 is
/// impossible (the projection kernel contains a nonzero vector whose
/// projection is zero, and an orthant contains no nonzero opposite pair).
pub fn verify_srp(space: &Subspace, i1: usize, i2: usize, orthant: &Orthant) -> bool {
    let d = space.ambient_dim();
    assert_eq!(orthant.dim(), d, "dimension mismatch");
    assert!(i1 < d && i2 < d && i1 != i2, "need two distinct coordinates");
    match space.rank() {
        0 => true,
        1 => {
            let b = &space.basis_integer()[0];
            // Admissible scalars form a halfline (or just 0); check a
            // representative of each unbounded direction.
            let pos_ok = orthant.sign(i1) * sign_of(&b[i1]) >= 0
                && orthant.sign(i2) * sign_of(&b[i2]) >= 0;
            let neg_ok = orthant.sign(i1) * sign_of(&b[i1]) <= 0
                && orthant.sign(i2) * sign_of(&b[i2]) <= 0;
            (!pos_ok || orthant.contains(b)) && (!neg_ok || orthant.contains(&b.neg()))
        }
        2 => {
            let basis = space.basis_integer();
            let to_i2 = |v: Vec<BigInt>| -> I2 {
                let mut it = v.into_iter();
                [it.next().unwrap(), it.next().unwrap()]
            };
            let projected = cone_from_halfplanes(&[
                to_i2(coefficient_normal(&basis, orthant, i1)),
                to_i2(coefficient_normal(&basis, orthant, i2)),
            ]);
            // The pair is sign-reflecting iff the cone cut out by the two
            // projected constraints already satisfies every coordinate's
            // constraint; its generating rays witness that.
            let normals: Vec<I2> = (0..d)
                .map(|j| to_i2(coefficient_normal(&basis, orthant, j)))
                .collect();
            projected
                .generating_rays()
                .iter()
                .all(|r| normals.iter().all(|n| !crate::geom::dot2(n, r).is_negative()))
        }
        _ => false,
    }
}

fn sign_of(x: &BigInt) -> i64 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// The canonical adapted basis for a sign-reflecting pair: cross-eliminates
/// each basis vector's other tracked coordinate, sign-flips both results
/// into the orthant, and divides by the joint content. The outputs satisfy
/// `u1(i2) = u2(i1) = 0` and share `|u1(i1)| = |u2(i2)|`.
pub fn canonical_vectors(
    v1: &IntVector,
    v2: &IntVector,
    i1: usize,
    i2: usize,
    orthant: &Orthant,
) -> Result<(IntVector, IntVector), ProjectionError> {
    let d = v1.dim();
    if v2.dim() != d || orthant.dim() != d {
        return Err(ProjectionError::DimensionMismatch);
    }
    assert!(i1 < d && i2 < d && i1 != i2, "need two distinct coordinates");
    let det = &v1[i1] * &v2[i2] - &v1[i2] * &v2[i1];
    if det.is_zero() {
        return Err(ProjectionError::SingularMinor);
    }
    // One swap always suffices: a vanishing diagonal entry forces both
    // off-diagonal entries nonzero.
    let (v1, v2) = if v1[i1].is_zero() || v2[i2].is_zero() { (v2, v1) } else { (v1, v2) };
    let u1 = v1.scale(&v2[i2]).sub(&v2.scale(&v1[i2]));
    let u2 = v2.scale(&v1[i1]).sub(&v1.scale(&v2[i1]));
    let flip = |u: IntVector| -> Result<IntVector, ProjectionError> {
        if orthant.contains(&u) {
            Ok(u)
        } else {
            let n = u.neg();
            if orthant.contains(&n) {
                Ok(n)
            } else {
                Err(ProjectionError::NotSignReflecting)
            }
        }
    };
    let u1 = flip(u1)?;
    let u2 = flip(u2)?;
    let g = u1.content().gcd(&u2.content());
    if g.is_zero() || g.is_one() {
        return Ok((u1, u2));
    }
    let div = |u: &IntVector| -> IntVector {
        IntVector::new(u.entries().iter().map(|x| x / &g).collect())
    };
    Ok((div(&u1), div(&u2)))
}

/// Finds the lexicographically first sign-reflecting pair of a plane and
/// returns it with the canonical adapted basis. Every genuine plane has
/// one, so failure beyond the rank check signals a caller bug.
pub fn find_srp(space: &Subspace, orthant: &Orthant) -> Result<SrpWitness, ProjectionError> {
    let rank = space.rank();
    if rank != 2 {
        return Err(ProjectionError::NotPlanar { rank });
    }
    let d = space.ambient_dim();
    for i1 in 0..d {
        for i2 in (i1 + 1)..d {
            if verify_srp(space, i1, i2, orthant) {
                let basis = space.basis_integer();
                let (u1, u2) = canonical_vectors(&basis[0], &basis[1], i1, i2, orthant)?;
                return Ok(SrpWitness { i1, i2, u1, u2 });
            }
        }
    }
    Err(ProjectionError::NoSignReflectingPair)
}

/// For a rank-2 space: the cone of basis coefficients `(l1, l2)` whose
/// combination `l1 b1 + l2 b2` is nonnegative. Its image is the
/// intersection of the space with the nonnegative orthant.
pub(crate) fn nonneg_coefficient_cone(space: &Subspace) -> crate::geom::PlanarCone {
    assert_eq!(space.rank(), 2, "coefficient cone needs a plane");
    let d = space.ambient_dim();
    let basis = space.basis_integer();
    let orthant = Orthant::nonnegative(d);
    let to_i2 = |v: Vec<BigInt>| -> I2 {
        let mut it = v.into_iter();
        [it.next().unwrap(), it.next().unwrap()]
    };
    let normals: Vec<I2> = (0..d)
        .map(|j| to_i2(coefficient_normal(&basis, &orthant, j)))
        .collect();
    cone_from_halfplanes(&normals)
}

/// Whether the space meets the nonnegative orthant in two linearly
/// independent vectors.
pub fn is_proper(space: &Subspace) -> bool {
    let r = space.rank();
    if r < 2 {
        return false;
    }
    let d = space.ambient_dim();
    let basis = space.basis_integer();
    if r == 2 {
        return matches!(
            nonneg_coefficient_cone(space).kind(),
            ConeKind::SalientCone | ConeKind::Halfplane | ConeKind::FullPlane
        );
    }
    // General rank: the cone C = P meet the orthant spans P restricted to
    // the coordinates that some member of C makes positive. Its dimension
    // is at least 2 iff the space is proper.
    let mut saturated = alloc::vec![false; d];
    for i in 0..d {
        let mut sys = LinearSystem::new(r);
        for j in 0..d {
            let row: Vec<Rational> =
                basis.iter().map(|b| Rational::from_integer(b[j].clone())).collect();
            sys.add_ge(row, Rational::zero());
        }
        let row: Vec<Rational> =
            basis.iter().map(|b| Rational::from_integer(b[i].clone())).collect();
        sys.add_ge(row, Rational::one());
        if sys.is_feasible() {
            saturated[i] = true;
        }
    }
    // Coefficient vectors lambda with (B lambda) vanishing outside the
    // saturated set form the span of C in coefficient coordinates.
    let mut constraint_rows: Vec<IntVector> = Vec::new();
    for j in 0..d {
        if !saturated[j] {
            constraint_rows.push(IntVector::new(basis.iter().map(|b| b[j].clone()).collect()));
        }
    }
    let constraint_rank = span_basis(r, &constraint_rows).rank();
    r - constraint_rank >= 2
}

/// A support projection: the original VASS with the coordinates outside the
/// cycle-space support folded into the state.
#[derive(Clone, Debug)]
pub struct SupportProjection {
    pub vass: Vass,
    /// The support of the cycle space, ascending. The projected VASS lives
    /// in these coordinates.
    pub support: Vec<usize>,
    /// For each projected state: the original state and the folded counter
    /// values on the complement coordinates, ascending.
    pub decode: Vec<(usize, IntVector)>,
}

/// Folds the counters outside `supp(Cyc(G))` into the state, tracking them
/// exactly up to `2 * characteristic`. Cycles whose effects live in the
/// support survive around the centered box value, so the projected VASS has
/// the same cycle-space support, and traversal number and characteristic
/// never grow.
///
/// By default states are pruned to those reachable from the centered seeds
/// `(q, chi * 1)`; `unpruned` keeps the full box. `cap` bounds the number
/// of candidate states before enumeration.
pub fn support_projection(
    g: &Vass,
    cap: u64,
    unpruned: bool,
) -> Result<SupportProjection, ProjectionError> {
    let d = g.dim();
    let support = cycle_space_basis(g).support();
    let complement: Vec<usize> = (0..d).filter(|i| !support.contains(i)).collect();
    let chi = g.characteristic();
    let bound = BigInt::from(2) * &chi;

    let mut candidate_states = BigInt::from(g.num_states());
    let box_side = &bound + 1;
    for _ in &complement {
        candidate_states *= &box_side;
    }
    if candidate_states > BigInt::from(cap) {
        return Err(ProjectionError::ProjectionTooLarge { states: candidate_states, cap });
    }

    let in_box = |v: &IntVector| -> bool {
        v.entries().iter().all(|x| !x.is_negative() && x <= &bound)
    };
    let step = |q: usize, v: &IntVector, t: &Transition| -> Option<(usize, IntVector)> {
        if t.src != q {
            return None;
        }
        let next = v.add(&t.effect.restrict(&complement));
        if in_box(&next) {
            Some((t.dst, next))
        } else {
            None
        }
    };

    let mut kept: BTreeSet<(usize, IntVector)> = BTreeSet::new();
    if unpruned {
        // Odometer over the full box for every state.
        let mut v = alloc::vec![BigInt::zero(); complement.len()];
        loop {
            for q in 0..g.num_states() {
                kept.insert((q, IntVector::new(v.clone())));
            }
            let mut i = 0;
            loop {
                if i == v.len() {
                    break;
                }
                v[i] += 1;
                if v[i] <= bound {
                    break;
                }
                v[i] = BigInt::zero();
                i += 1;
            }
            if i == v.len() {
                break;
            }
        }
    } else {
        let center = IntVector::new(alloc::vec![chi.clone(); complement.len()]);
        let mut queue: VecDeque<(usize, IntVector)> = VecDeque::new();
        for q in 0..g.num_states() {
            let seed = (q, center.clone());
            if kept.insert(seed.clone()) {
                queue.push_back(seed);
            }
        }
        while let Some((q, v)) = queue.pop_front() {
            for t in g.transitions() {
                if let Some(nxt) = step(q, &v, t) {
                    if kept.insert(nxt.clone()) {
                        queue.push_back(nxt);
                    }
                }
            }
        }
    }

    let decode: Vec<(usize, IntVector)> = kept.into_iter().collect();
    let index: BTreeMap<&(usize, IntVector), usize> =
        decode.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut transitions = Vec::new();
    for (i, (q, v)) in decode.iter().enumerate() {
        for t in g.transitions() {
            if let Some(nxt) = step(*q, v, t) {
                if let Some(&j) = index.get(&nxt) {
                    transitions.push(Transition {
                        src: i,
                        effect: t.effect.restrict(&support),
                        dst: j,
                    });
                }
            }
        }
    }
    let vass = Vass::new(support.len(), decode.len(), transitions)
        .expect("projected transitions are well-formed by construction");
    Ok(SupportProjection { vass, support, decode })
}
