//! Real-amplitude recurrence for single-marked-state Grover search.
//!
//! The iteration keeps the state in the span of the marked basis state and
//! the uniform superposition of the unmarked ones, so two signed reals
//! (marked amplitude `alpha`, common unmarked amplitude `a`) describe it
//! exactly.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticState {
    pub n: u32,
    /// State count `2^n`.
    pub states: f64,
    pub alpha: f64,
    pub a: f64,
    /// Completed rotations.
    pub k: u64,
}

impl AnalyticState {
    /// `alpha² + (N−1)a²`, which rotations keep at 1.
    pub fn total_probability(&self) -> f64 {
        self.alpha * self.alpha + (self.states - 1.0) * self.a * self.a
    }

    pub fn marked_probability(&self) -> f64 {
        self.alpha * self.alpha
    }

    pub fn unmarked_probability(&self) -> f64 {
        self.a * self.a
    }
}

/// Uniform superposition over `2^n` states.
pub fn initial_state(n: u32) -> AnalyticState {
    let states = 2f64.powi(n as i32);
    let amp = 1.0 / states.sqrt();
    AnalyticState {
        n,
        states,
        alpha: amp,
        a: amp,
        k: 0,
    }
}

/// Mean amplitude once the oracle has negated the marked amplitude.
pub fn mean_after_oracle(state: &AnalyticState) -> f64 {
    ((state.states - 1.0) * state.a - state.alpha) / state.states
}

/// One oracle + inversion-about-the-mean step.
pub fn rotate(state: &AnalyticState) -> AnalyticState {
    let flipped = -state.alpha;
    let mean = mean_after_oracle(state);
    AnalyticState {
        alpha: 2.0 * mean - flipped,
        a: 2.0 * mean - state.a,
        k: state.k + 1,
        ..*state
    }
}

/// States after 0, 1, 2, ... rotations.
pub fn trajectory(n: u32) -> impl Iterator<Item = AnalyticState> {
    std::iter::successors(Some(initial_state(n)), |s| Some(rotate(s)))
}

pub fn state_after(n: u32, k: u64) -> AnalyticState {
    trajectory(n)
        .nth(k as usize)
        .expect("trajectory is infinite")
}

pub fn marked_probability_after(n: u32, k: u64) -> f64 {
    state_after(n, k).marked_probability()
}

/// `(k, marked probability)` for `k = 1..=max_k`.
pub fn probability_table(n: u32, max_k: u64) -> Vec<(u64, f64)> {
    trajectory(n)
        .skip(1)
        .take(max_k as usize)
        .map(|s| (s.k, s.marked_probability()))
        .collect()
}
