//! Uniform random guessing against a verifier, and its failure probabilities.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::{error::bail, mbqc::pow2, Result};

/// Identifier of the generator behind [`random_search`], recorded in reports.
pub const RNG_ALGORITHM: &str = "chacha20 (rand_chacha::ChaCha20Rng::seed_from_u64)";

/// Mixes a base seed with a case index into an independent 64-bit seed
/// (SplitMix64 finalizer over `base + (index + 1) * golden`).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded generator used for every random draw in this crate.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// A deterministic accept/reject predicate over `bit_length`-bit strings.
pub struct VerifierOracle<F> {
    bit_length: u32,
    verify: F,
    call_budget: Option<u64>,
    exclusive: bool,
}

impl<F: Fn(u64) -> bool> VerifierOracle<F> {
    pub fn new(bit_length: u32, verify: F) -> Result<Self> {
        if bit_length == 0 || bit_length > 64 {
            bail!(Domain, "bit length must be 1 to 64, got {bit_length}");
        }
        Ok(Self { bit_length, verify, call_budget: None, exclusive: false })
    }

    /// Caps the number of verifier invocations across one search.
    pub fn with_call_budget(mut self, budget: u64) -> Self {
        self.call_budget = Some(budget);
        self
    }

    /// Marks the predicate as unsafe for concurrent invocation; harnesses
    /// then run its searches sequentially.
    pub fn exclusive(mut self) -> Self {
        self.exclusive = true;
        self
    }

    pub fn is_exclusive(&self) -> bool {
        self.exclusive
    }

    pub fn bit_length(&self) -> u32 {
        self.bit_length
    }

    pub fn call_budget(&self) -> Option<u64> {
        self.call_budget
    }

    pub fn verify(&self, candidate: u64) -> bool {
        (self.verify)(candidate)
    }

    fn mask(&self) -> u64 {
        if self.bit_length == 64 {
            u64::MAX
        } else {
            (1u64 << self.bit_length) - 1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<u64>,
    pub attempts_used: u64,
    /// Every candidate and verdict, when tracing was requested.
    pub attempt_log: Option<Vec<(u64, bool)>>,
}

/// Draws up to `t` fresh uniform strings (with replacement) and stops at the
/// first one the verifier accepts.
pub fn random_search<F: Fn(u64) -> bool>(oracle: &VerifierOracle<F>, t: u64, seed: u64) -> Result<SearchOutcome> {
    search(oracle, t, seed, false)
}

/// [`random_search`] with the full attempt log.
pub fn random_search_traced<F: Fn(u64) -> bool>(
    oracle: &VerifierOracle<F>,
    t: u64,
    seed: u64,
) -> Result<SearchOutcome> {
    search(oracle, t, seed, true)
}

fn search<F: Fn(u64) -> bool>(oracle: &VerifierOracle<F>, t: u64, seed: u64, trace: bool) -> Result<SearchOutcome> {
    if t == 0 {
        bail!(Domain, "need at least one repetition");
    }
    let mut rng = seeded_rng(seed);
    let mask = oracle.mask();
    let mut log = trace.then(Vec::new);
    for attempt in 1..=t {
        if let Some(budget) = oracle.call_budget {
            if attempt > budget {
                return Err(crate::Error::BudgetExhausted { budget, attempts: attempt - 1 });
            }
        }
        let candidate = rng.next_u64() & mask;
        let accepted = oracle.verify(candidate);
        if let Some(log) = log.as_mut() {
            log.push((candidate, accepted));
        }
        if accepted {
            return Ok(SearchOutcome { found: Some(candidate), attempts_used: attempt, attempt_log: log });
        }
    }
    Ok(SearchOutcome { found: None, attempts_used: t, attempt_log: log })
}

/// `ceil(2^{delta+1} ln(1/p_f))`, the number of guesses that drives the miss
/// probability below `p_f` when the solution density is at least `2^{-delta-1}`.
pub fn repetitions_for_failure(delta: f64, failure_target: f64) -> Result<u64> {
    if !(delta >= 0.0 && delta.is_finite()) {
        bail!(Domain, "delta must be finite and non-negative, got {delta}");
    }
    if !(failure_target > 0.0 && failure_target < 1.0) {
        bail!(Domain, "failure target must lie in (0, 1), got {failure_target}");
    }
    let raw = (delta + 1.0).exp2() * -failure_target.ln();
    // Products that are integers up to rounding noise, e.g. 2 ln(1/e^{-1}).
    let nearest = raw.round();
    let t = if (raw - nearest).abs() <= 64.0 * f64::EPSILON * raw { nearest } else { raw.ceil() };
    Ok((t as u64).max(1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FailureBounds {
    /// `(1 - |S|/2^n)^t`.
    pub exact: f64,
    /// `e^{-t 2^{-delta-1}}`.
    pub exp_bound: f64,
    /// Whether `|S|/2^n >= 2^{-delta-1}`, the condition under which `exact <= exp_bound`.
    pub bound_applies: bool,
}

pub fn failure_probability_bounds(solution_count: u64, bits: u32, t: u64, delta: f64) -> Result<FailureBounds> {
    if bits == 0 || bits > 63 {
        bail!(Domain, "bit length must be 1 to 63, got {bits}");
    }
    if solution_count > 1u64 << bits {
        bail!(Domain, "|S| = {solution_count} exceeds 2^{bits}");
    }
    if t == 0 {
        bail!(Domain, "need at least one repetition");
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        bail!(Domain, "delta must be finite and non-negative, got {delta}");
    }
    let density = solution_count as f64 / pow2(bits as i32);
    let floor = (-delta - 1.0).exp2();
    let exact = (1.0 - density).powf(t as f64);
    let exp_bound = (-(t as f64) * floor).exp();
    let bound_applies = density >= floor;
    if bound_applies && exact > exp_bound {
        bail!(Inconsistent, "miss probability {exact:e} exceeds e^(-t 2^(-delta-1)) = {exp_bound:e}");
    }
    Ok(FailureBounds { exact, exp_bound, bound_applies })
}

/// `(3/4)^t`, the miss probability bound when `|S| >= 2^{k-2}`.
pub fn dqc1k_failure_bound(t: u64) -> f64 {
    0.75f64.powf(t as f64)
}
