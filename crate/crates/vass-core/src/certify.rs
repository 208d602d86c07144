//! Checkable run certificates: thin runs confined to beam families and
//! thick 0-runs built from sequentially enabled cycle quadruples.
//!
//! Checkers recompute every geometric quantity from the graph; a
//! certificate only pins down discrete choices (split positions, cycle
//! words, thresholds). Rejection names the first violated clause.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::geodim::cycle_space_basis;
use crate::geom::{
    cone_intersect, in_beam, seqcone, split_generalized_beam, Beam, GeomError, PlanarCone,
};
use crate::model::{reverse_run, Configuration, ModelError, Run, Vass};
use crate::projection::{nonneg_coefficient_cone, ProjectionError, SrpWitness};
use crate::vector::IntVector;

/// First violated clause of a certificate check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A split index points past the end of the run.
    SplitOutOfRange { split: usize, length: usize },
    /// The four split indices must be nondecreasing.
    SplitsNotMonotone,
    /// A certificate word is empty, not a path, or not closed.
    NotACycle { which: usize },
    /// A cycle is closed but not anchored at its split configuration.
    AnchorMismatch { which: usize },
    /// A cycle word is longer than the threshold.
    CycleTooLong { which: usize },
    /// The first cycle effect is not semipositive on the tracked pair.
    FirstCycleNotSemipositive,
    /// The first cycle does not execute at its anchor.
    FirstCycleNotEnabled,
    /// A tracked coordinate exceeds the threshold before the first anchor.
    FirstSegmentCoordinateTooLarge { position: usize },
    /// The second cycle is not enabled at its anchor even after padding
    /// the coordinates the first cycle pumps.
    SecondCycleNotEnabled,
    /// A tracked coordinate the first cycle leaves untouched exceeds the
    /// threshold between the two anchors.
    SecondSegmentCoordinateTooLarge { position: usize },
    /// The sequential cone of the first two effects has no positive vector.
    ConeNotPositive,
    /// The halves of a thick certificate disagree on the threshold.
    ThresholdMismatch,
    /// A beam direction leaves the nonnegative orthant.
    BeamDirectionNegative { index: usize },
    /// A beam direction norm or width exceeds the threshold.
    BeamExceedsBound { index: usize },
    /// A configuration of the run lies outside every beam.
    OutsideBeams { step: usize },
    /// Forward and backward cones share no two independent vectors.
    IntersectionTrivial,
    /// A clause violated by the forward half of a thick certificate.
    Forward(Box<Violation>),
    /// A clause violated by the backward half of a thick certificate.
    Backward(Box<Violation>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SplitOutOfRange { split, length } => {
                write!(f, "split index {} exceeds run length {}", split, length)
            }
            Violation::SplitsNotMonotone => {
                write!(f, "cycle split indices are not nondecreasing")
            }
            Violation::NotACycle { which } => {
                write!(f, "word {} is not a cycle", which + 1)
            }
            Violation::AnchorMismatch { which } => {
                write!(f, "cycle {} is not anchored at its split configuration", which + 1)
            }
            Violation::CycleTooLong { which } => {
                write!(f, "cycle {} is longer than the threshold", which + 1)
            }
            Violation::FirstCycleNotSemipositive => {
                write!(f, "first cycle effect is not semipositive on the tracked coordinates")
            }
            Violation::FirstCycleNotEnabled => {
                write!(f, "first cycle is not enabled at its anchor")
            }
            Violation::FirstSegmentCoordinateTooLarge { position } => {
                write!(f, "tracked coordinate exceeds the threshold at step {}", position)
            }
            Violation::SecondCycleNotEnabled => {
                write!(f, "second cycle is not enabled at its anchor after padding")
            }
            Violation::SecondSegmentCoordinateTooLarge { position } => {
                write!(f, "untouched tracked coordinate exceeds the threshold at step {}", position)
            }
            Violation::ConeNotPositive => {
                write!(f, "sequential cone of the first two cycles contains no positive vector")
            }
            Violation::ThresholdMismatch => {
                write!(f, "certificate halves disagree on the threshold")
            }
            Violation::BeamDirectionNegative { index } => {
                write!(f, "beam {} has a direction outside the nonnegative orthant", index)
            }
            Violation::BeamExceedsBound { index } => {
                write!(f, "beam {} exceeds the threshold", index)
            }
            Violation::OutsideBeams { step } => {
                write!(f, "configuration at step {} lies outside every beam", step)
            }
            Violation::IntersectionTrivial => {
                write!(f, "forward and backward cones intersect trivially")
            }
            Violation::Forward(v) => write!(f, "forward half: {}", v),
            Violation::Backward(v) => write!(f, "backward half: {}", v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifyError {
    Model(ModelError),
    Geom(GeomError),
    Projection(ProjectionError),
    /// Thick certificates only apply to runs from zero counters to zero
    /// counters.
    NotZeroRun,
    /// The cycle space meets the orthant in a full two-dimensional cone,
    /// so no degenerate classification applies.
    NotDegenerate,
    /// Degenerate classification needs geometric dimension at most 2.
    DimensionTooHigh { gdim: usize },
    /// The certificate is well-formed but some clause fails.
    Rejected(Violation),
}

impl fmt::Display for CertifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyError::Model(e) => write!(f, "{}", e),
            CertifyError::Geom(e) => write!(f, "{}", e),
            CertifyError::Projection(e) => write!(f, "{}", e),
            CertifyError::NotZeroRun => {
                write!(f, "run must start and end with all counters zero")
            }
            CertifyError::NotDegenerate => {
                write!(f, "cycle space is proper, no degenerate classification applies")
            }
            CertifyError::DimensionTooHigh { gdim } => {
                write!(f, "geometric dimension {} exceeds 2", gdim)
            }
            CertifyError::Rejected(v) => write!(f, "certificate rejected: {}", v),
        }
    }
}

impl core::error::Error for CertifyError {}

impl From<ModelError> for CertifyError {
    fn from(e: ModelError) -> Self {
        CertifyError::Model(e)
    }
}

impl From<GeomError> for CertifyError {
    fn from(e: GeomError) -> Self {
        CertifyError::Geom(e)
    }
}

impl From<ProjectionError> for CertifyError {
    fn from(e: ProjectionError) -> Self {
        CertifyError::Projection(e)
    }
}

fn reject(v: Violation) -> Result<(), CertifyError> {
    Err(CertifyError::Rejected(v))
}

/// Whether the word executes from `c` as is.
pub fn is_enabled(g: &Vass, c: &Configuration, word: &[usize]) -> Result<bool, ModelError> {
    Ok(g.execute(c, word)?.is_some())
}

/// Whether the word executes from `c` after every coordinate outside
/// `guarded` is padded with an arbitrarily large stock. Padding frees a
/// coordinate completely, so only guarded coordinates constrain, each
/// through its worst prefix effect.
pub fn s_enabled(
    g: &Vass,
    c: &Configuration,
    word: &[usize],
    guarded: &[usize],
) -> Result<bool, ModelError> {
    assert!(guarded.iter().all(|&i| i < g.dim()), "guarded coordinate out of range");
    if c.counters().dim() != g.dim() {
        return Err(ModelError::DimensionMismatch { expected: g.dim(), got: c.counters().dim() });
    }
    let mut state = c.state();
    for &i in word {
        let t = g.transitions().get(i).ok_or(ModelError::NotAPath)?;
        if t.src != state {
            return Err(ModelError::NotAPath);
        }
        state = t.dst;
    }
    let mut acc = vec![BigInt::zero(); guarded.len()];
    let mut worst = vec![BigInt::zero(); guarded.len()];
    for &i in word {
        let effect = &g.transition(i).effect;
        for (k, &coord) in guarded.iter().enumerate() {
            acc[k] += &effect[coord];
            if acc[k] < worst[k] {
                worst[k] = acc[k].clone();
            }
        }
    }
    Ok(guarded
        .iter()
        .enumerate()
        .all(|(k, &coord)| !(&c.counters()[coord] + &worst[k]).is_negative()))
}

/// A beam family claimed to contain every configuration of a run.
#[derive(Clone, Debug)]
pub struct ThinCertificate {
    pub a: BigInt,
    pub beams: Vec<Beam>,
}

/// Checks that the run executes and every configuration vector lies in at
/// least one beam, with all beams within the threshold.
pub fn check_thin(g: &Vass, run: &Run, cert: &ThinCertificate) -> Result<(), CertifyError> {
    for (index, beam) in cert.beams.iter().enumerate() {
        if beam.direction.dim() != g.dim() {
            return Err(CertifyError::Model(ModelError::DimensionMismatch {
                expected: g.dim(),
                got: beam.direction.dim(),
            }));
        }
        if !beam.direction.is_nonnegative() {
            return reject(Violation::BeamDirectionNegative { index });
        }
        if beam.direction.norm() > cert.a || beam.width > cert.a {
            return reject(Violation::BeamExceedsBound { index });
        }
    }
    let configs = g
        .execute(&run.start, &run.word)?
        .ok_or(ModelError::RunDoesNotExecute)?;
    for (step, c) in configs.iter().enumerate() {
        if !cert.beams.iter().any(|b| in_beam(c.counters(), b, false)) {
            return reject(Violation::OutsideBeams { step });
        }
    }
    Ok(())
}

/// How a degenerate cycle space keeps all 0-runs inside few beams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegenerateCase {
    /// Geometric dimension below 2: runs stay near the line of the single
    /// generator (or near the origin).
    LowDimension,
    /// The plane meets the nonnegative orthant only in the origin: runs
    /// stay inside a ball.
    TrivialIntersection,
    /// The plane meets the orthant in a single ray: runs stay inside one
    /// beam along it.
    RayIntersection,
}

/// A degenerate classification together with a certificate accepting every
/// 0-run of the graph.
#[derive(Clone, Debug)]
pub struct DegenerateThinness {
    pub case: DegenerateCase,
    pub certificate: ThinCertificate,
}

/// Classifies a graph whose cycle space is not proper and produces the
/// matching beam family. Errors with `NotDegenerate` when the cycle space
/// meets the orthant two-dimensionally and with `DimensionTooHigh` above
/// geometric dimension 2.
pub fn degenerate_thinness(g: &Vass) -> Result<DegenerateThinness, CertifyError> {
    let plane = cycle_space_basis(g);
    let rank = plane.rank();
    if rank > 2 {
        return Err(CertifyError::DimensionTooHigh { gdim: rank });
    }
    let d = g.dim();
    let chi = g.characteristic();
    if rank < 2 {
        let beams = if rank == 0 {
            vec![Beam::new(IntVector::zero(d), chi.clone())]
        } else {
            let generator = plane.basis_integer().into_iter().next().unwrap();
            let (plus, minus) = split_generalized_beam(&generator, &chi);
            vec![plus, minus]
        };
        return Ok(DegenerateThinness {
            case: DegenerateCase::LowDimension,
            certificate: ThinCertificate { a: chi, beams },
        });
    }
    match nonneg_coefficient_cone(&plane) {
        PlanarCone::Point => {
            let inner = BigInt::from(d as u64 + 6) * &chi + BigInt::one();
            let bound = BigInt::from(2) * num_traits::pow(inner, d) * &chi + &chi;
            Ok(DegenerateThinness {
                case: DegenerateCase::TrivialIntersection,
                certificate: ThinCertificate {
                    a: bound.clone(),
                    beams: vec![Beam::new(IntVector::zero(d), bound)],
                },
            })
        }
        PlanarCone::Ray(l) => {
            let basis = plane.basis_integer();
            let direction = basis[0].scale(&l[0]).add(&basis[1].scale(&l[1])).primitive();
            let m = BigInt::from(g.num_states() as u64) * g.transition_norm();
            let inner = BigInt::from(d as u64 + 3) * &m + BigInt::from(2);
            let a = BigInt::from(2) * num_traits::pow(inner, d) * &m;
            Ok(DegenerateThinness {
                case: DegenerateCase::RayIntersection,
                certificate: ThinCertificate {
                    a: a.clone(),
                    beams: vec![Beam::new(direction, a)],
                },
            })
        }
        // A salient coefficient cone maps to two independent nonnegative
        // vectors, so the space is proper. Wider cones cannot occur: they
        // would put some `v` and `-v`, both nonzero, into the orthant.
        _ => Err(CertifyError::NotDegenerate),
    }
}

/// Four cycles claimed to be sequentially enabled along a run: split
/// positions pick their anchors, the shared threshold bounds cycle lengths
/// and the tracked coordinates of the early segments.
#[derive(Clone, Debug)]
pub struct SeqEnabledCertificate {
    pub a: BigInt,
    pub splits: [usize; 4],
    pub cycles: [Vec<usize>; 4],
}

/// A thick 0-run certificate: a split factoring the run into a forward and
/// a backward half, one cycle quadruple per half.
#[derive(Clone, Debug)]
pub struct ThickCertificate {
    pub a: BigInt,
    pub split: usize,
    pub forward: SeqEnabledCertificate,
    pub backward: SeqEnabledCertificate,
}

/// Validates that the word is a nonempty closed path and returns its
/// anchor state, ignoring counters.
fn cycle_anchor(g: &Vass, word: &[usize]) -> Option<usize> {
    let first = g.transitions().get(*word.first()?)?;
    let mut state = first.src;
    for &i in word {
        let t = g.transitions().get(i)?;
        if t.src != state {
            return None;
        }
        state = t.dst;
    }
    (state == first.src).then_some(state)
}

fn usable_witness(d: usize, witness: &SrpWitness) -> bool {
    witness.u1.dim() == d
        && witness.u2.dim() == d
        && witness.i1 < d
        && witness.i2 < d
        && witness.i1 != witness.i2
}

/// Checks that the certificate's four cycles are sequentially enabled
/// along the run, in the clause order of the definition. The witness fixes
/// the tracked coordinate pair and the plane of the sequential cone.
pub fn check_seq_enabled(
    g: &Vass,
    run: &Run,
    cert: &SeqEnabledCertificate,
    witness: &SrpWitness,
) -> Result<(), CertifyError> {
    if !usable_witness(g.dim(), witness) {
        return Err(CertifyError::Geom(GeomError::BadWitness));
    }
    let configs = g
        .execute(&run.start, &run.word)?
        .ok_or(ModelError::RunDoesNotExecute)?;
    let length = run.word.len();
    for &split in &cert.splits {
        if split > length {
            return reject(Violation::SplitOutOfRange { split, length });
        }
    }
    if cert.splits.windows(2).any(|w| w[0] > w[1]) {
        return reject(Violation::SplitsNotMonotone);
    }
    let mut effects = Vec::with_capacity(4);
    for which in 0..4 {
        let word = &cert.cycles[which];
        let anchor = match cycle_anchor(g, word) {
            Some(state) => state,
            None => return reject(Violation::NotACycle { which }),
        };
        if anchor != configs[cert.splits[which]].state() {
            return reject(Violation::AnchorMismatch { which });
        }
        effects.push(g.effect(word)?);
    }
    for which in 0..4 {
        if BigInt::from(cert.cycles[which].len() as u64) > cert.a {
            return reject(Violation::CycleTooLong { which });
        }
    }
    let (i1, i2) = (witness.i1, witness.i2);
    let first = &effects[0];
    let semipositive = !first[i1].is_negative()
        && !first[i2].is_negative()
        && !(first[i1].is_zero() && first[i2].is_zero());
    if !semipositive {
        return reject(Violation::FirstCycleNotSemipositive);
    }
    if !is_enabled(g, &configs[cert.splits[0]], &cert.cycles[0])? {
        return reject(Violation::FirstCycleNotEnabled);
    }
    for (position, c) in configs.iter().take(cert.splits[0] + 1).enumerate() {
        if c.counters()[i1] > cert.a || c.counters()[i2] > cert.a {
            return reject(Violation::FirstSegmentCoordinateTooLarge { position });
        }
    }
    if !(first[i1].is_positive() && first[i2].is_positive()) {
        // The first cycle pumps only part of the tracked pair: the second
        // must be enabled with the pumped coordinates padded, and the
        // untouched tracked coordinates stay below the threshold until its
        // anchor.
        let guarded: Vec<usize> = (0..g.dim()).filter(|&i| first[i].is_zero()).collect();
        if !s_enabled(g, &configs[cert.splits[1]], &cert.cycles[1], &guarded)? {
            return reject(Violation::SecondCycleNotEnabled);
        }
        for &coord in &[i1, i2] {
            if first[coord].is_zero() {
                for position in cert.splits[0]..=cert.splits[1] {
                    if configs[position].counters()[coord] > cert.a {
                        return reject(Violation::SecondSegmentCoordinateTooLarge { position });
                    }
                }
            }
        }
    }
    let cone = seqcone(&effects[..2], witness)?;
    if !cone.contains_positive_vector() {
        return reject(Violation::ConeNotPositive);
    }
    // The third and fourth cycles only need to be enabled after padding
    // every coordinate, which their anchoring already establishes.
    Ok(())
}

fn wrap_half(
    result: Result<(), CertifyError>,
    half: fn(Box<Violation>) -> Violation,
) -> Result<(), CertifyError> {
    match result {
        Err(CertifyError::Rejected(v)) => Err(CertifyError::Rejected(half(Box::new(v)))),
        other => other,
    }
}

/// Checks a thick certificate: the run is a 0-run, the forward quadruple
/// is sequentially enabled along the prefix, the backward quadruple along
/// the reversed suffix in the reverse graph, and the two sequential cones
/// intersect in two linearly independent vectors.
pub fn check_thick(
    g: &Vass,
    run: &Run,
    cert: &ThickCertificate,
    witness: &SrpWitness,
) -> Result<(), CertifyError> {
    let configs = g
        .execute(&run.start, &run.word)?
        .ok_or(ModelError::RunDoesNotExecute)?;
    if !run.start.counters().is_zero() || !configs.last().unwrap().counters().is_zero() {
        return Err(CertifyError::NotZeroRun);
    }
    if cert.forward.a != cert.a || cert.backward.a != cert.a {
        return reject(Violation::ThresholdMismatch);
    }
    let length = run.word.len();
    if cert.split > length {
        return reject(Violation::SplitOutOfRange { split: cert.split, length });
    }
    let prefix = Run::new(run.start.clone(), run.word[..cert.split].to_vec());
    wrap_half(check_seq_enabled(g, &prefix, &cert.forward, witness), Violation::Forward)?;
    let suffix = Run::new(configs[cert.split].clone(), run.word[cert.split..].to_vec());
    let reversed = reverse_run(g, &suffix)?;
    let rev = g.reverse();
    wrap_half(check_seq_enabled(&rev, &reversed, &cert.backward, witness), Violation::Backward)?;
    let forward_effects: Vec<IntVector> = cert
        .forward
        .cycles
        .iter()
        .map(|w| g.effect(w))
        .collect::<Result<_, _>>()?;
    let backward_effects: Vec<IntVector> = cert
        .backward
        .cycles
        .iter()
        .map(|w| rev.effect(w))
        .collect::<Result<_, _>>()?;
    let forward_cone = seqcone(&forward_effects, witness)?;
    let backward_cone = seqcone(&backward_effects, witness)?;
    if !cone_intersect(&forward_cone, &backward_cone)?.is_nontrivial() {
        return reject(Violation::IntersectionTrivial);
    }
    Ok(())
}
