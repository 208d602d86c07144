//! Cycle spaces and geometric dimension.
//!
//! The cycle space of a VASS is the span of the effects of its simple
//! cycles. It is computed without enumerating cycles: inside each strongly
//! connected component, simple cycles are repeatedly contracted until one
//! state remains, and the surviving self-loop effects span the component's
//! contribution. Contraction preserves the cycle space, so the result equals
//! the span of all simple-cycle effects.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::tarjan_scc;
use crate::linalg::{span_basis, Subspace};
use crate::model::{ModelError, Transition, Vass};
use crate::vector::IntVector;

/// State-count cap for exhaustive simple-cycle enumeration.
pub const SIMPLE_CYCLE_STATE_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeodimError {
    /// The VASS exceeds the exhaustive-enumeration cap.
    TooLarge { states: usize, cap: usize },
    /// The word passed to `shrink_cycle` is not a simple cycle.
    NotASimpleCycle,
    Model(ModelError),
}

impl fmt::Display for GeodimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeodimError::TooLarge { states, cap } => {
                write!(f, "{} states exceed the simple-cycle enumeration cap of {}", states, cap)
            }
            GeodimError::NotASimpleCycle => write!(f, "word is not a simple cycle"),
            GeodimError::Model(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for GeodimError {}

impl From<ModelError> for GeodimError {
    fn from(e: ModelError) -> Self {
        GeodimError::Model(e)
    }
}

/// Effects of all simple cycles (no repeated state except the anchor),
/// deduplicated and sorted. Exponential; refuses more than
/// [`SIMPLE_CYCLE_STATE_CAP`] states. Intended as the oracle the contraction
/// algorithm is checked against.
pub fn simple_cycle_effects(g: &Vass) -> Result<Vec<IntVector>, GeodimError> {
    if g.num_states() > SIMPLE_CYCLE_STATE_CAP {
        return Err(GeodimError::TooLarge { states: g.num_states(), cap: SIMPLE_CYCLE_STATE_CAP });
    }
    let mut out: Vec<Vec<usize>> = alloc::vec![Vec::new(); g.num_states()];
    for (i, t) in g.transitions().iter().enumerate() {
        out[t.src].push(i);
    }
    let mut effects = BTreeSet::new();
    // Each cycle is enumerated once, anchored at its minimal state: the
    // search from `anchor` only walks states with a larger index.
    for anchor in 0..g.num_states() {
        let mut visited = alloc::vec![false; g.num_states()];
        visited[anchor] = true;
        let mut acc = IntVector::zero(g.dim());
        dfs_cycles(g, &out, anchor, anchor, &mut visited, &mut acc, &mut effects);
    }
    Ok(effects.into_iter().collect())
}

fn dfs_cycles(
    g: &Vass,
    out: &[Vec<usize>],
    anchor: usize,
    state: usize,
    visited: &mut Vec<bool>,
    acc: &mut IntVector,
    effects: &mut BTreeSet<IntVector>,
) {
    for &i in &out[state] {
        let t = g.transition(i);
        *acc = acc.add(&t.effect);
        if t.dst == anchor {
            effects.insert(acc.clone());
        } else if t.dst > anchor && !visited[t.dst] {
            visited[t.dst] = true;
            dfs_cycles(g, out, anchor, t.dst, visited, acc, effects);
            visited[t.dst] = false;
        }
        *acc = acc.sub(&t.effect);
    }
}

/// Result of contracting a simple cycle: the contracted VASS, the index of
/// the merged state, and the map from old state ids to new ones.
#[derive(Clone, Debug)]
pub struct ShrinkResult {
    pub vass: Vass,
    pub theta_state: usize,
    pub state_map: Vec<usize>,
}

/// Contracts the simple cycle given as a word of transition indices.
///
/// States on the cycle merge into a single state; a transition `(p, a, q)`
/// becomes `(h(p), s(p) + a - s(q), h(q))` where `s(x)` is the effect of the
/// cycle prefix ending at the visit of `x` (the anchor takes the full cycle
/// effect, off-cycle states take 0). This keeps the cycle space unchanged.
pub fn shrink_cycle(g: &Vass, cycle: &[usize]) -> Result<ShrinkResult, GeodimError> {
    if cycle.is_empty() {
        return Err(GeodimError::NotASimpleCycle);
    }
    for &i in cycle {
        if i >= g.transitions().len() {
            return Err(GeodimError::NotASimpleCycle);
        }
    }
    let anchor = g.transition(cycle[0]).src;
    if g.transition(*cycle.last().unwrap()).dst != anchor {
        return Err(GeodimError::NotASimpleCycle);
    }

    // s-values along the cycle; the anchor's slot ends up holding the full
    // cycle effect because it is written last.
    let mut shift: Vec<IntVector> = alloc::vec![IntVector::zero(g.dim()); g.num_states()];
    let mut on_cycle = alloc::vec![false; g.num_states()];
    on_cycle[anchor] = true;
    let mut prefix = IntVector::zero(g.dim());
    let mut at = anchor;
    for (k, &i) in cycle.iter().enumerate() {
        let t = g.transition(i);
        if t.src != at {
            return Err(GeodimError::NotASimpleCycle);
        }
        prefix = prefix.add(&t.effect);
        at = t.dst;
        let closing = k + 1 == cycle.len();
        if !closing && (on_cycle[at] || at == anchor) {
            return Err(GeodimError::NotASimpleCycle);
        }
        on_cycle[at] = true;
        shift[at] = prefix.clone();
    }

    let mut state_map = alloc::vec![0usize; g.num_states()];
    let mut fresh = 0usize;
    for q in 0..g.num_states() {
        if !on_cycle[q] {
            state_map[q] = fresh;
            fresh += 1;
        }
    }
    let theta_state = fresh;
    for q in 0..g.num_states() {
        if on_cycle[q] {
            state_map[q] = theta_state;
        }
    }

    let transitions = g
        .transitions()
        .iter()
        .map(|t| {
            let effect = shift[t.src].add(&t.effect).sub(&shift[t.dst]);
            Transition::new(state_map[t.src], effect, state_map[t.dst])
        })
        .collect();
    let vass = Vass::new(g.dim(), theta_state + 1, transitions)?;
    Ok(ShrinkResult { vass, theta_state, state_map })
}

/// Shortest path between two states by BFS, as a word of transition
/// indices. Deterministic: neighbors are scanned in transition order.
fn shortest_state_path(g: &Vass, from: usize, to: usize) -> Option<Vec<usize>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut via: Vec<Option<usize>> = alloc::vec![None; g.num_states()];
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(from);
    let mut seen = alloc::vec![false; g.num_states()];
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        for (i, t) in g.transitions().iter().enumerate() {
            if t.src == v && !seen[t.dst] {
                seen[t.dst] = true;
                via[t.dst] = Some(i);
                if t.dst == to {
                    let mut word = Vec::new();
                    let mut at = to;
                    while at != from {
                        let i = via[at].unwrap();
                        word.push(i);
                        at = g.transition(i).src;
                    }
                    word.reverse();
                    return Some(word);
                }
                queue.push_back(t.dst);
            }
        }
    }
    None
}

/// A canonical basis of the cycle space: the span of all simple-cycle
/// effects, computed by contraction inside each strongly connected
/// component.
pub fn cycle_space_basis(g: &Vass) -> Subspace {
    let mut effects: Vec<IntVector> = Vec::new();
    for component in tarjan_scc(g.num_states(), &g.adjacency()) {
        let mut local_of = alloc::vec![usize::MAX; g.num_states()];
        for (li, &q) in component.iter().enumerate() {
            local_of[q] = li;
        }
        let transitions: Vec<Transition> = g
            .transitions()
            .iter()
            .filter(|t| local_of[t.src] != usize::MAX && local_of[t.dst] != usize::MAX)
            .map(|t| Transition::new(local_of[t.src], t.effect.clone(), local_of[t.dst]))
            .collect();
        let mut sub = Vass::new(g.dim(), component.len(), transitions).expect("induced subgraph is well formed");
        while sub.num_states() > 1 {
            let (i, t) = sub
                .transitions()
                .iter()
                .enumerate()
                .find(|(_, t)| t.src != t.dst)
                .expect("a strongly connected component with several states has an inter-state transition");
            let mut cycle = alloc::vec![i];
            cycle.extend(
                shortest_state_path(&sub, t.dst, t.src)
                    .expect("component stays strongly connected under contraction"),
            );
            sub = shrink_cycle(&sub, &cycle)
                .expect("constructed cycle is simple")
                .vass;
        }
        for t in sub.transitions() {
            effects.push(t.effect.clone());
        }
    }
    span_basis(g.dim(), &effects)
}

/// Geometric dimension: the dimension of the cycle space.
pub fn gdim(g: &Vass) -> usize {
    cycle_space_basis(g).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::in_span;
    use alloc::vec;

    fn two_state() -> Vass {
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
    fn simple_cycles_of_two_state_example() {
        let g = two_state();
        let effects = simple_cycle_effects(&g).unwrap();
        assert_eq!(
            effects,
            vec![IntVector::from_i64(&[1, 1]), IntVector::from_i64(&[2, 3])]
        );
    }

    #[test]
    fn shrink_turns_cycle_into_self_loops() {
        let g = two_state();
        let shrunk = shrink_cycle(&g, &[0, 1]).unwrap();
        assert_eq!(shrunk.vass.num_states(), 1);
        assert_eq!(shrunk.theta_state, 0);
        assert_eq!(shrunk.state_map, vec![0, 0]);
        let effects: Vec<IntVector> =
            shrunk.vass.transitions().iter().map(|t| t.effect.clone()).collect();
        assert_eq!(
            effects,
            vec![
                IntVector::from_i64(&[1, 1]),
                IntVector::from_i64(&[0, 0]),
                IntVector::from_i64(&[2, 3]),
            ]
        );
    }

    #[test]
    fn shrink_rejects_non_cycles() {
        let g = two_state();
        assert!(matches!(shrink_cycle(&g, &[]), Err(GeodimError::NotASimpleCycle)));
        assert!(matches!(shrink_cycle(&g, &[0]), Err(GeodimError::NotASimpleCycle)));
        assert!(matches!(shrink_cycle(&g, &[0, 1, 0, 1]), Err(GeodimError::NotASimpleCycle)));
    }

    #[test]
    fn basis_matches_simple_cycle_span() {
        let g = two_state();
        let basis = cycle_space_basis(&g);
        assert_eq!(basis.rank(), 2);
        assert_eq!(gdim(&g), 2);
        for e in simple_cycle_effects(&g).unwrap() {
            assert!(in_span(&e, &basis));
        }
    }

    #[test]
    fn acyclic_graph_has_gdim_zero() {
        let g = Vass::new(
            3,
            3,
            vec![
                Transition::new(0, IntVector::from_i64(&[1, 2, 3]), 1),
                Transition::new(1, IntVector::from_i64(&[-1, 0, 4]), 2),
            ],
        )
        .unwrap();
        assert_eq!(gdim(&g), 0);
        assert!(simple_cycle_effects(&g).unwrap().is_empty());
    }

    #[test]
    fn cap_guards_enumeration() {
        let g = Vass::new(1, 9, vec![]).unwrap();
        assert!(matches!(
            simple_cycle_effects(&g),
            Err(GeodimError::TooLarge { states: 9, cap: 8 })
        ));
    }
}
