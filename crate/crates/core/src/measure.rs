//! Projective measurement of +-1 observables with Born-rule sampling,
//! forced outcomes, branch enumeration, and reproducible randomness.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{Operator, StateVector};
use crate::matrix::{c, vec_norm, CMat, SEQ_TOL};

/// Counter-based deterministic generator (splitmix64).
///
/// The per-shot substream is derived from `(seed, shot)` so results are
/// identical regardless of execution order or parallelism:
///
/// ```text
/// state0   = mix(seed XOR mix(shot * 0x9E3779B97F4A7C15 + 0xD1B54A32D192ED03))
/// next     = state += 0x9E3779B97F4A7C15; return mix(state)
/// mix(z)   = { z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///              z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
///              z ^ (z >> 31) }
/// uniform  = (next >> 11) * 2^-53
/// ```
#[derive(Debug, Clone)]
pub struct ShotRng {
    state: u64,
}

const GOLDEN: u64 = 0x9E3779B97F4A7C15;
const SHOT_SALT: u64 = 0xD1B54A32D192ED03;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl ShotRng {
    pub fn new(seed: u64, shot: u64) -> Self {
        let sub = mix(shot.wrapping_mul(GOLDEN).wrapping_add(SHOT_SALT));
        ShotRng {
            state: mix(seed ^ sub),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform double in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }
}

/// How measurement outcomes are chosen.
#[derive(Debug, Clone)]
pub enum OutcomePolicy {
    /// Born-rule sampling from the (seed, shot) substream.
    Sampled(ShotRng),
    /// Outcomes consumed in order from a fixed sequence of +-1.
    Forced { outcomes: Vec<i8>, cursor: usize },
    /// Both branches returned with their probabilities.
    Enumerate,
}

impl OutcomePolicy {
    pub fn sampled(seed: u64, shot: u64) -> Self {
        OutcomePolicy::Sampled(ShotRng::new(seed, shot))
    }

    pub fn forced(outcomes: &[i8]) -> Self {
        OutcomePolicy::Forced {
            outcomes: outcomes.to_vec(),
            cursor: 0,
        }
    }

    pub fn enumerate() -> Self {
        OutcomePolicy::Enumerate
    }
}

/// One projective measurement event.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    pub label: String,
    pub observable: String,
    pub outcome: i8,
    pub probability: f64,
    pub pre_norm: f64,
    pub post_norm: f64,
}

/// Result of a measurement under a policy.
#[derive(Debug, Clone)]
pub enum MeasureOutcome {
    Collapsed(MeasurementRecord, StateVector),
    Branches(Vec<(MeasurementRecord, StateVector)>),
}

fn project(state: &StateVector, observable: &CMat, sign: f64) -> (f64, Vec<Complex64>) {
    let image = observable.matvec(&state.amps);
    let proj: Vec<Complex64> = state
        .amps
        .iter()
        .zip(image.iter())
        .map(|(a, pa)| (a + c(sign, 0.0) * pa) * c(0.5, 0.0))
        .collect();
    let p = vec_norm(&proj).powi(2);
    (p, proj)
}

fn collapse(state: &StateVector, amps: Vec<Complex64>, norm: f64) -> StateVector {
    StateVector {
        space: state.space.clone(),
        amps: amps.into_iter().map(|a| a / norm).collect(),
        pairing: state.pairing.clone(),
    }
}

/// Projective measurement of a +-1 observable.
///
/// Projectors are P(+-) = (I +- observable)/2. Sampling draws the outcome
/// with Born probability; forcing applies the requested projector and errors
/// if its probability is below 1e-12; enumeration returns both branches.
pub fn measure(
    state: &StateVector,
    observable: &Operator,
    policy: &mut OutcomePolicy,
    label: &str,
    description: &str,
) -> Result<MeasureOutcome> {
    let defect = observable
        .mat
        .mul(&observable.mat)
        .max_abs_diff(&CMat::identity(observable.mat.dim()));
    if defect > SEQ_TOL || !observable.hermitian {
        return Err(Error::NotInvolutive(defect));
    }
    let pre_norm = state.norm();
    let (p_plus, proj_plus) = project(state, &observable.mat, 1.0);
    let (p_minus, proj_minus) = project(state, &observable.mat, -1.0);
    debug_assert!((p_plus + p_minus - 1.0).abs() < 1e-10);

    let rec = |outcome: i8, probability: f64, post_norm: f64| MeasurementRecord {
        label: label.to_string(),
        observable: description.to_string(),
        outcome,
        probability,
        pre_norm,
        post_norm,
    };

    match policy {
        OutcomePolicy::Sampled(rng) => {
            let u = rng.uniform();
            let (outcome, p, proj) = if u < p_plus {
                (1, p_plus, proj_plus)
            } else {
                (-1, p_minus, proj_minus)
            };
            let n = p.sqrt();
            Ok(MeasureOutcome::Collapsed(
                rec(outcome, p, 1.0),
                collapse(state, proj, n),
            ))
        }
        OutcomePolicy::Forced { outcomes, cursor } => {
            let outcome = *outcomes
                .get(*cursor)
                .ok_or_else(|| Error::ForcedSequenceExhausted(label.to_string()))?;
            *cursor += 1;
            let (p, proj) = if outcome >= 0 {
                (p_plus, proj_plus)
            } else {
                (p_minus, proj_minus)
            };
            if p < 1e-12 {
                return Err(Error::ForcedOutcomeUnreachable {
                    label: label.to_string(),
                    outcome,
                    prob: p,
                });
            }
            let n = p.sqrt();
            Ok(MeasureOutcome::Collapsed(
                rec(if outcome >= 0 { 1 } else { -1 }, p, 1.0),
                collapse(state, proj, n),
            ))
        }
        OutcomePolicy::Enumerate => {
            let mut branches = Vec::new();
            for (outcome, p, proj) in [(1i8, p_plus, proj_plus), (-1i8, p_minus, proj_minus)] {
                if p >= 1e-12 {
                    let n = p.sqrt();
                    branches.push((rec(outcome, p, 1.0), collapse(state, proj, n)));
                }
            }
            Ok(MeasureOutcome::Branches(branches))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::sp_basis;
    use crate::fock::{build_space, pair_parity_op, StateVector};
    use crate::matrix::ALG_TOL;

    #[test]
    fn rng_streams_are_deterministic_and_distinct() {
        let mut a = ShotRng::new(7, 3);
        let mut b = ShotRng::new(7, 3);
        let seq_a: Vec<u64> = (0..16).map(|_| a.next_u64()).collect();
        let seq_b: Vec<u64> = (0..16).map(|_| b.next_u64()).collect();
        assert_eq!(seq_a, seq_b);

        let mut d = ShotRng::new(7, 4);
        let seq_d: Vec<u64> = (0..16).map(|_| d.next_u64()).collect();
        assert_ne!(seq_a, seq_d);

        let mut e = ShotRng::new(8, 3);
        let seq_e: Vec<u64> = (0..16).map(|_| e.next_u64()).collect();
        assert_ne!(seq_a, seq_e);

        let mut r = ShotRng::new(1, 0);
        for _ in 0..1000 {
            let u = r.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn shot_order_permutation_gives_identical_counts() {
        let space = build_space(4).unwrap();
        let sp = sp_basis(&space).unwrap();
        let pi = pair_parity_op(&space, 4, 5).unwrap();
        let state = &sp.vectors[0];

        let run = |shots: &[u64]| -> Vec<i8> {
            let mut outcomes = vec![0i8; shots.len()];
            for (slot, &shot) in shots.iter().enumerate() {
                let mut policy = OutcomePolicy::sampled(99, shot);
                match measure(state, &pi, &mut policy, "M1", "pi(4,5)").unwrap() {
                    MeasureOutcome::Collapsed(rec, _) => outcomes[slot] = rec.outcome,
                    _ => unreachable!(),
                }
            }
            outcomes
        };
        let forward: Vec<u64> = (0..200).collect();
        let mut backward = forward.clone();
        backward.reverse();
        let mut a = run(&forward);
        let mut b = run(&backward);
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }

    #[test]
    fn born_probabilities_on_superposition_vectors() {
        let space = build_space(4).unwrap();
        let sp = sp_basis(&space).unwrap();
        let pi = pair_parity_op(&space, 4, 5).unwrap();
        for v in &sp.vectors {
            let mut policy = OutcomePolicy::enumerate();
            match measure(v, &pi, &mut policy, "M1", "pi(4,5)").unwrap() {
                MeasureOutcome::Branches(branches) => {
                    assert_eq!(branches.len(), 2);
                    for (rec, post) in &branches {
                        assert!((rec.probability - 0.5).abs() < ALG_TOL);
                        assert!((post.norm() - 1.0).abs() < ALG_TOL);
                        // Collapsed state is an eigenvector: remeasuring
                        // returns the same outcome with probability 1.
                        let mut forced = OutcomePolicy::forced(&[rec.outcome]);
                        match measure(post, &pi, &mut forced, "M1'", "pi(4,5)").unwrap() {
                            MeasureOutcome::Collapsed(r2, _) => {
                                assert!((r2.probability - 1.0).abs() < ALG_TOL)
                            }
                            _ => unreachable!(),
                        }
                    }
                    let total: f64 = branches.iter().map(|(r, _)| r.probability).sum();
                    assert!((total - 1.0).abs() < ALG_TOL);
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn forcing_an_absent_branch_errors() {
        let space = build_space(4).unwrap();
        let vac = StateVector::basis(&space, "0000").unwrap();
        let pi = pair_parity_op(&space, 1, 2).unwrap();
        let mut policy = OutcomePolicy::forced(&[-1]);
        match measure(&vac, &pi, &mut policy, "M", "pi(1,2)") {
            Err(Error::ForcedOutcomeUnreachable { prob, .. }) => assert!(prob < 1e-12),
            other => panic!("expected unreachable-branch error, got {other:?}"),
        }
        let mut empty = OutcomePolicy::forced(&[]);
        assert!(matches!(
            measure(&vac, &pi, &mut empty, "M", "pi(1,2)"),
            Err(Error::ForcedSequenceExhausted(_))
        ));
    }

    #[test]
    fn non_involutive_observable_rejected() {
        let space = build_space(2).unwrap();
        let bad = crate::gates::braid(&space, 2, 3, crate::gates::BraidConvention::Mem).unwrap();
        let v = StateVector::basis(&space, "00").unwrap();
        let mut policy = OutcomePolicy::enumerate();
        assert!(matches!(
            measure(&v, &bad, &mut policy, "M", "braid"),
            Err(Error::NotInvolutive(_))
        ));
    }
}
