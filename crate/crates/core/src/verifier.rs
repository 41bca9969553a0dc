//! Instant / trajectory pre-opacity and current-state opacity on top of the
//! observer and the indicator sets.
//!
//! A violation witness is always the shortlex-least observation whose
//! estimate violates the condition (observer states are numbered in that
//! order), and for instant pre-opacity the smallest violating instant.

use crate::automaton::Automaton;
use crate::error::VerifyError;
use crate::indicator::{indicator_sequence, n_k_from, non_indicator_set, IndicatorSequence};
use crate::observer::{build_observer_capped, unobservable_reach, Observer, DEFAULT_OBSERVER_CAP};
use crate::verdict::Witness;
use crate::StateSet;

pub use crate::verdict::{Property, Verdict};

/// Default cap on `F` iterations spent looking for a repeat in `ℑ_n`.
pub const DEFAULT_INDICATOR_CAP: usize = 1 << 20;

/// Which instants the instant check sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    /// `{K}` when every event is observable, otherwise the general window.
    #[default]
    Auto,
    /// `{K, …, K+M}` with `M` taken from the period of `ℑ_n`.
    General,
    /// Only `n = K`. Exact only for fully observable systems.
    SingleStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub observer_cap: usize,
    pub indicator_cap: usize,
    pub window: Window,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            observer_cap: DEFAULT_OBSERVER_CAP,
            indicator_cap: DEFAULT_INDICATOR_CAP,
            window: Window::Auto,
        }
    }
}

/// Observer plus indicator data for one automaton, reusable across `K`.
#[derive(Debug, Clone)]
pub struct Analysis<'a> {
    automaton: &'a Automaton,
    observer: Observer,
    indicators: IndicatorSequence,
    non_indicator: StateSet,
    window: Window,
}

impl<'a> Analysis<'a> {
    pub fn new(a: &'a Automaton) -> Result<Self, VerifyError> {
        Self::with_options(a, &VerifyOptions::default())
    }

    pub fn with_options(a: &'a Automaton, opts: &VerifyOptions) -> Result<Self, VerifyError> {
        require_live(a)?;
        let observer = build_observer_capped(a, opts.observer_cap)?;
        let indicators = indicator_sequence(a, opts.indicator_cap);
        if indicators.cycle().is_none() {
            return Err(VerifyError::IndicatorCap {
                cap: opts.indicator_cap,
            });
        }
        Ok(Self {
            automaton: a,
            observer,
            non_indicator: non_indicator_set(a),
            indicators,
            window: opts.window,
        })
    }

    pub fn automaton(&self) -> &Automaton {
        self.automaton
    }

    pub fn observer(&self) -> &Observer {
        &self.observer
    }

    pub fn indicators(&self) -> &IndicatorSequence {
        &self.indicators
    }

    pub fn non_indicator(&self) -> &StateSet {
        &self.non_indicator
    }

    pub fn n_k(&self, k: u64) -> StateSet {
        n_k_from(self.automaton, self.non_indicator.clone(), k)
    }

    /// Inclusive range of instants swept for a given `K`.
    pub fn instant_window(&self, k: u64) -> (u64, u64) {
        let single = match self.window {
            Window::SingleStep => true,
            Window::General => false,
            Window::Auto => !self.automaton.alphabet().has_unobservable(),
        };
        if single {
            return (k, k);
        }
        let c = self
            .indicators
            .cycle()
            .expect("cycle checked at construction");
        let (start, len) = (c.start as u64, c.length as u64);
        (k, k.max(start) + len - 1)
    }

    pub fn instant(&self, k: u64) -> Verdict {
        let (lo, hi) = self.instant_window(k);
        for (id, q) in self.observer.states().iter().enumerate() {
            for n in lo..=hi {
                let ind = self.indicators.get(n).expect("cycle resolves every index");
                if q.is_subset(ind) {
                    return Verdict::violated(
                        Property::InstantPreOpacity,
                        Some(k),
                        Witness {
                            observation: self.observer.access_word(id),
                            instant: n,
                            estimate: q.clone(),
                        },
                    );
                }
            }
        }
        Verdict::holds(Property::InstantPreOpacity, Some(k))
    }

    pub fn trajectory(&self, k: u64) -> Verdict {
        let nk = self.n_k(k);
        for (id, q) in self.observer.states().iter().enumerate() {
            if q.is_disjoint(&nk) {
                return Verdict::violated(
                    Property::TrajectoryPreOpacity,
                    Some(k),
                    Witness {
                        observation: self.observer.access_word(id),
                        instant: k,
                        estimate: q.clone(),
                    },
                );
            }
        }
        Verdict::holds(Property::TrajectoryPreOpacity, Some(k))
    }

    pub fn current_state_opacity(&self) -> Verdict {
        current_state_opacity_of(self.automaton, &self.observer)
    }

    pub fn saturation_bound(&self) -> u64 {
        bound_from(self.automaton, &self.indicators)
    }
}

fn current_state_opacity_of(a: &Automaton, obs: &Observer) -> Verdict {
    for (id, q) in obs.states().iter().enumerate() {
        let full = unobservable_reach(a, q);
        if full.is_subset(a.secret()) {
            return Verdict::violated(
                Property::CurrentStateOpacity,
                None,
                Witness {
                    observation: obs.access_word(id),
                    instant: 0,
                    estimate: full,
                },
            );
        }
    }
    Verdict::holds(Property::CurrentStateOpacity, None)
}

fn bound_from(a: &Automaton, seq: &IndicatorSequence) -> u64 {
    let n = a.state_count() as u32;
    let subsets = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let repeat = seq.first_repeat().map_or(u64::MAX, |i| i as u64);
    subsets.min(repeat)
}

pub(crate) fn require_live(a: &Automaton) -> Result<(), VerifyError> {
    let dead = a.dead_states();
    if dead.is_empty() {
        Ok(())
    } else {
        Err(VerifyError::NotLive {
            dead_states: dead.iter().map(|x| a.state_name(x).into()).collect(),
        })
    }
}

/// K-step instant pre-opacity.
pub fn verify_instant(a: &Automaton, k: u64) -> Result<Verdict, VerifyError> {
    Ok(Analysis::new(a)?.instant(k))
}

/// K-step trajectory pre-opacity.
pub fn verify_trajectory(a: &Automaton, k: u64) -> Result<Verdict, VerifyError> {
    Ok(Analysis::new(a)?.trajectory(k))
}

/// Current-state opacity: no standard estimate lies entirely inside `X_S`.
/// Liveness is not required.
pub fn verify_current_state_opacity(a: &Automaton) -> Result<Verdict, VerifyError> {
    verify_current_state_opacity_capped(a, DEFAULT_OBSERVER_CAP)
}

pub fn verify_current_state_opacity_capped(
    a: &Automaton,
    observer_cap: usize,
) -> Result<Verdict, VerifyError> {
    let obs = build_observer_capped(a, observer_cap)?;
    Ok(current_state_opacity_of(a, &obs))
}

/// `K` beyond which the instant verdict no longer changes:
/// `min(2^|X| − 1, first repeated index of ℑ_n)`.
pub fn saturation_bound(a: &Automaton) -> Result<u64, VerifyError> {
    let seq = indicator_sequence(a, DEFAULT_INDICATOR_CAP);
    if seq.cycle().is_none() {
        return Err(VerifyError::IndicatorCap {
            cap: DEFAULT_INDICATOR_CAP,
        });
    }
    Ok(bound_from(a, &seq))
}
