//! Seeded random instance generation. Every output is a deterministic
//! function of the parameters, including the seed.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vass_core::geodim::gdim;
use vass_core::{IntVector, Transition, Vass};

use crate::format::VassDocument;

#[derive(Clone, Debug)]
pub struct GeneratorParams {
    pub dim: usize,
    pub num_states: usize,
    pub num_transitions: usize,
    pub max_norm: u64,
    pub seed: u64,
    pub target_gdim: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("target geometric dimension {target} exceeds the dimension {dim}")]
    TargetTooHigh { target: usize, dim: usize },
    #[error("no instance with the target geometric dimension in {attempts} attempts")]
    Exhausted { attempts: usize },
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, max_norm: i64) -> IntVector {
    let entries = (0..dim).map(|_| BigInt::from(rng.gen_range(-max_norm..=max_norm))).collect();
    IntVector::new(entries)
}

fn random_nonzero(rng: &mut ChaCha8Rng, dim: usize, max_norm: i64) -> IntVector {
    loop {
        let v = random_vector(rng, dim, max_norm);
        if !v.is_zero() {
            return v;
        }
    }
}

/// An effect drawn from the integer lattice of a plane spanned by `basis`,
/// kept within the norm bound by retrying small combinations.
fn plane_effect(rng: &mut ChaCha8Rng, dim: usize, basis: &[IntVector], max_norm: i64) -> IntVector {
    let bound = BigInt::from(max_norm);
    for _ in 0..64 {
        let mut effect = IntVector::zero(dim);
        for b in basis {
            effect = effect.add(&b.scale(&BigInt::from(rng.gen_range(-1i64..=1))));
        }
        if effect.norm() <= bound {
            return effect;
        }
    }
    IntVector::zero(dim)
}

fn sample(params: &GeneratorParams, rng: &mut ChaCha8Rng, in_plane: Option<usize>) -> Vass {
    let max_norm = params.max_norm as i64;
    let basis: Vec<IntVector> = match in_plane {
        Some(g) => (0..g).map(|_| random_nonzero(rng, params.dim, max_norm)).collect(),
        None => Vec::new(),
    };
    let transitions = (0..params.num_transitions)
        .map(|_| {
            let src = rng.gen_range(0..params.num_states);
            let dst = rng.gen_range(0..params.num_states);
            let effect = if in_plane.is_some() {
                plane_effect(rng, params.dim, &basis, max_norm)
            } else {
                random_vector(rng, params.dim, max_norm)
            };
            Transition::new(src, effect, dst)
        })
        .collect();
    Vass::new(params.dim, params.num_states, transitions).unwrap()
}

pub fn generate(params: &GeneratorParams) -> Result<VassDocument, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let vass = match params.target_gdim {
        None => sample(params, &mut rng, None),
        Some(target) => {
            if target > params.dim {
                return Err(GenError::TargetTooHigh { target, dim: params.dim });
            }
            let attempts = 20_000;
            let mut found = None;
            for attempt in 0..attempts {
                // Plain rejection on even attempts; low targets additionally
                // get effects confined to a random plane of that dimension.
                let assist = attempt % 2 == 1 && target <= 2 && target < params.dim;
                let candidate = sample(params, &mut rng, assist.then_some(target));
                if gdim(&candidate) == target {
                    found = Some(candidate);
                    break;
                }
            }
            found.ok_or(GenError::Exhausted { attempts })?
        }
    };
    let state_names = (0..params.num_states).map(|i| format!("q{}", i)).collect();
    Ok(VassDocument { vass, state_names, configs: Default::default() })
}
