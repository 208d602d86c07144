//! The VASS data model: states, transitions, configurations, runs.

use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::graph;
use crate::linalg::{chebyshev_distance_to_span, in_span, Subspace};
use crate::vector::IntVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    /// A transition references a state id outside the state set.
    UnknownState { transition: usize, state: usize },
    /// A vector has the wrong number of entries for this VASS.
    DimensionMismatch { expected: usize, got: usize },
    /// A word is not a path: consecutive transitions do not chain, or an
    /// index is out of range.
    NotAPath,
    /// A configuration counter is negative.
    NegativeCounter,
    /// A run does not execute (some intermediate counter drops below zero).
    RunDoesNotExecute,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::UnknownState { transition, state } => {
                write!(f, "transition {} references unknown state {}", transition, state)
            }
            ModelError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {}, got {}", expected, got)
            }
            ModelError::NotAPath => write!(f, "word is not a path"),
            ModelError::NegativeCounter => write!(f, "configuration has a negative counter"),
            ModelError::RunDoesNotExecute => write!(f, "run does not execute"),
        }
    }
}

impl core::error::Error for ModelError {}

/// A transition `src --effect--> dst`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub src: usize,
    pub effect: IntVector,
    pub dst: usize,
}

impl Transition {
    pub fn new(src: usize, effect: IntVector, dst: usize) -> Self {
        Transition { src, effect, dst }
    }
}

/// A `d`-dimensional VASS. States are the indices `0..num_states`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vass {
    dim: usize,
    num_states: usize,
    transitions: Vec<Transition>,
}

/// A configuration `q(u)` with `u >= 0` componentwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Configuration {
    state: usize,
    counters: IntVector,
}

impl Configuration {
    pub fn new(state: usize, counters: IntVector) -> Result<Self, ModelError> {
        if !counters.is_nonnegative() {
            return Err(ModelError::NegativeCounter);
        }
        Ok(Configuration { state, counters })
    }

    pub fn state(&self) -> usize {
        self.state
    }

    pub fn counters(&self) -> &IntVector {
        &self.counters
    }

    pub fn into_counters(self) -> IntVector {
        self.counters
    }
}

/// A candidate run: a start configuration and a word of transition indices.
/// Whether it actually executes is decided by [`Vass::execute`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: Configuration,
    pub word: Vec<usize>,
}

impl Run {
    pub fn new(start: Configuration, word: Vec<usize>) -> Self {
        Run { start, word }
    }
}

impl Vass {
    pub fn new(dim: usize, num_states: usize, transitions: Vec<Transition>) -> Result<Self, ModelError> {
        for (i, t) in transitions.iter().enumerate() {
            if t.src >= num_states {
                return Err(ModelError::UnknownState { transition: i, state: t.src });
            }
            if t.dst >= num_states {
                return Err(ModelError::UnknownState { transition: i, state: t.dst });
            }
            if t.effect.dim() != dim {
                return Err(ModelError::DimensionMismatch { expected: dim, got: t.effect.dim() });
            }
        }
        Ok(Vass { dim, num_states, transitions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, i: usize) -> &Transition {
        &self.transitions[i]
    }

    /// `||T||`: the largest transition-effect norm, 0 when there are no
    /// transitions.
    pub fn transition_norm(&self) -> BigInt {
        self.transitions
            .iter()
            .map(|t| t.effect.norm())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Outgoing adjacency lists of the state graph.
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = alloc::vec![Vec::new(); self.num_states];
        for t in &self.transitions {
            adj[t.src].push(t.dst);
        }
        adj
    }

    /// Checks that `word` is a path and returns its source state, or `None`
    /// for the empty word.
    fn path_source(&self, word: &[usize]) -> Result<Option<usize>, ModelError> {
        let mut prev_dst: Option<usize> = None;
        let mut src = None;
        for &i in word {
            let t = self.transitions.get(i).ok_or(ModelError::NotAPath)?;
            if let Some(d) = prev_dst {
                if t.src != d {
                    return Err(ModelError::NotAPath);
                }
            } else {
                src = Some(t.src);
            }
            prev_dst = Some(t.dst);
        }
        Ok(src)
    }

    /// The summed effect of a word of transition indices. Errors with
    /// `NotAPath` if consecutive transitions do not chain.
    pub fn effect(&self, word: &[usize]) -> Result<IntVector, ModelError> {
        self.path_source(word)?;
        let mut total = IntVector::zero(self.dim);
        for &i in word {
            total = total.add(&self.transitions[i].effect);
        }
        Ok(total)
    }

    /// Executes a word from a start configuration. Returns the full
    /// configuration sequence (length `|word| + 1`) if every intermediate
    /// counter vector stays nonnegative, `None` otherwise.
    pub fn execute(
        &self,
        start: &Configuration,
        word: &[usize],
    ) -> Result<Option<Vec<Configuration>>, ModelError> {
        if start.counters.dim() != self.dim {
            return Err(ModelError::DimensionMismatch { expected: self.dim, got: start.counters.dim() });
        }
        if start.state >= self.num_states {
            return Err(ModelError::UnknownState { transition: usize::MAX, state: start.state });
        }
        if let Some(src) = self.path_source(word)? {
            if src != start.state {
                return Err(ModelError::NotAPath);
            }
        }
        let mut configs = Vec::with_capacity(word.len() + 1);
        configs.push(start.clone());
        for &i in word {
            let t = &self.transitions[i];
            let next = configs.last().unwrap().counters.add(&t.effect);
            if !next.is_nonnegative() {
                return Ok(None);
            }
            configs.push(Configuration { state: t.dst, counters: next });
        }
        Ok(Some(configs))
    }

    /// The reverse VASS: every transition `(p, a, q)` becomes `(q, -a, p)`.
    /// Transition indices are preserved.
    pub fn reverse(&self) -> Vass {
        Vass {
            dim: self.dim,
            num_states: self.num_states,
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition::new(t.dst, t.effect.neg(), t.src))
                .collect(),
        }
    }

    /// The traversal number: the maximum number of distinct states visitable
    /// by a single path. Computed as the heaviest path in the condensation
    /// with components weighted by their size.
    pub fn traversal_number(&self) -> usize {
        if self.num_states == 0 {
            return 0;
        }
        graph::max_states_on_path(self.num_states, &self.adjacency())
    }

    /// The characteristic `traversal_number * ||T||`. Bounds the effect norm
    /// of every simple path and simple cycle.
    pub fn characteristic(&self) -> BigInt {
        BigInt::from(self.traversal_number()) * self.transition_norm()
    }
}

/// The run traversed backwards, as a run of `g.reverse()`. Requires the run
/// to execute in `g`; the result starts at the final configuration and uses
/// the same transition indices in reverse order.
pub fn reverse_run(g: &Vass, run: &Run) -> Result<Run, ModelError> {
    let configs = g
        .execute(&run.start, &run.word)?
        .ok_or(ModelError::RunDoesNotExecute)?;
    let mut word = run.word.clone();
    word.reverse();
    Ok(Run::new(configs.last().unwrap().clone(), word))
}

/// Checks the coset geometry of a run against a cycle-space basis: counter
/// vectors observed at the same state may differ only by vectors of the
/// span, and each state's first-visit offset from the start counters lies
/// within Chebyshev distance `characteristic(g)` of the span.
pub fn check_run_coset_invariant(g: &Vass, run: &Run, basis: &Subspace) -> Result<bool, ModelError> {
    let configs = g
        .execute(&run.start, &run.word)?
        .ok_or(ModelError::RunDoesNotExecute)?;
    let chi = num_rational::BigRational::from_integer(g.characteristic());
    let mut first_visit: Vec<Option<&IntVector>> = alloc::vec![None; g.num_states()];
    for c in &configs {
        match first_visit[c.state()] {
            None => {
                first_visit[c.state()] = Some(c.counters());
                let offset = c.counters().sub(run.start.counters());
                if chebyshev_distance_to_span(&offset, basis) > chi {
                    return Ok(false);
                }
            }
            Some(first) => {
                if !in_span(&c.counters().sub(first), basis) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_state() -> Vass {
        // p=0, q=1: p -(1,0)-> q, q -(0,1)-> p, q -(2,3)-> q
        Vass::new(
            2,
            2,
            vec![
                Transition::new(0, IntVector::from_i64(&[1, 0]), 1),
                Transition::new(1, IntVector::from_i64(&[0, 1]), 0),
                Transition::new(1, IntVector::from_i64(&[2, 3]), 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn effect_sums_along_path() {
        let g = two_state();
        assert_eq!(g.effect(&[0, 1]).unwrap(), IntVector::from_i64(&[1, 1]));
        assert_eq!(g.effect(&[0, 2, 1]).unwrap(), IntVector::from_i64(&[3, 4]));
        assert_eq!(g.effect(&[]).unwrap(), IntVector::zero(2));
        assert_eq!(g.effect(&[0, 0]), Err(ModelError::NotAPath));
        assert_eq!(g.effect(&[7]), Err(ModelError::NotAPath));
    }

    #[test]
    fn execute_tracks_nonnegativity() {
        let g = Vass::new(
            1,
            1,
            vec![
                Transition::new(0, IntVector::from_i64(&[-1]), 0),
                Transition::new(0, IntVector::from_i64(&[2]), 0),
            ],
        )
        .unwrap();
        let start = Configuration::new(0, IntVector::from_i64(&[1])).unwrap();
        let configs = g.execute(&start, &[0, 1, 0]).unwrap().unwrap();
        assert_eq!(configs.len(), 4);
        assert_eq!(configs[3].counters(), &IntVector::from_i64(&[1]));
        // Dropping below zero kills the run.
        assert_eq!(g.execute(&start, &[0, 0]).unwrap(), None);
    }

    #[test]
    fn reverse_is_an_involution() {
        let g = two_state();
        assert_eq!(g.reverse().reverse(), g);
        let r = g.reverse();
        assert_eq!(r.transition(0).src, 1);
        assert_eq!(r.transition(0).effect, IntVector::from_i64(&[-1, 0]));
    }

    #[test]
    fn reverse_run_executes_in_reverse_vass() {
        let g = two_state();
        let start = Configuration::new(0, IntVector::from_i64(&[0, 0])).unwrap();
        let run = Run::new(start, vec![0, 2, 1]);
        let rev = reverse_run(&g, &run).unwrap();
        assert_eq!(rev.word, vec![1, 2, 0]);
        assert_eq!(rev.start.state(), 0);
        assert_eq!(rev.start.counters(), &IntVector::from_i64(&[3, 4]));
        let back = g.reverse().execute(&rev.start, &rev.word).unwrap().unwrap();
        assert_eq!(back.last().unwrap().counters(), &IntVector::from_i64(&[0, 0]));
    }

    #[test]
    fn traversal_number_and_characteristic() {
        let g = two_state();
        assert_eq!(g.traversal_number(), 2);
        assert_eq!(g.characteristic(), BigInt::from(6));

        // Two disjoint 1-cycles joined by a bridge: 0 <-> 1 -> 2 <-> 3.
        let h = Vass::new(
            1,
            4,
            vec![
                Transition::new(0, IntVector::from_i64(&[1]), 1),
                Transition::new(1, IntVector::from_i64(&[0]), 0),
                Transition::new(1, IntVector::from_i64(&[5]), 2),
                Transition::new(2, IntVector::from_i64(&[0]), 3),
                Transition::new(3, IntVector::from_i64(&[0]), 2),
            ],
        )
        .unwrap();
        assert_eq!(h.traversal_number(), 4);
        assert_eq!(h.characteristic(), BigInt::from(20));
    }
}
