//! SINR, instantaneous rates, and the proportional-fairness objective.
//!
//! A scheduling decision is a binary vector over users. Scheduled users are
//! served simultaneously on their assigned beams and interfere with each
//! other; each achieves `log2(1 + SINR)` bps/Hz. The proportional-fairness
//! objective weights instantaneous rate by the inverse of an exponentially
//! averaged historical rate so that starved users win priority.

use ndarray::Array2;
use num_complex::Complex64;

use crate::chanmod::{BeamAssignment, ChannelRealization};

/// Binary user-selection vector for one slot. Bit `t` set means user `t`
/// is served.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SchedulingVector {
    bits: Vec<bool>,
}

impl SchedulingVector {
    pub fn new(bits: Vec<bool>) -> Self {
        SchedulingVector { bits }
    }

    pub fn all_off(num_users: usize) -> Self {
        SchedulingVector {
            bits: vec![false; num_users],
        }
    }

    pub fn all_on(num_users: usize) -> Self {
        SchedulingVector {
            bits: vec![true; num_users],
        }
    }

    /// Decode a computational-basis index. User 0 occupies the most
    /// significant bit, matching the qubit ordering of the search circuit.
    pub fn from_basis_index(index: usize, num_users: usize) -> Self {
        assert!(index < (1usize << num_users), "basis index out of range");
        let bits = (0..num_users)
            .map(|t| (index >> (num_users - 1 - t)) & 1 == 1)
            .collect();
        SchedulingVector { bits }
    }

    /// Inverse of [`SchedulingVector::from_basis_index`].
    pub fn to_basis_index(&self) -> usize {
        self.bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_scheduled(&self, user: usize) -> bool {
        self.bits[user]
    }

    pub fn num_scheduled(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn set(&mut self, user: usize, on: bool) {
        self.bits[user] = on;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl std::fmt::Display for SchedulingVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Per-user exponentially averaged rates with their forgetting factor and
/// the division guard.
#[derive(Debug, Clone, PartialEq)]
pub struct PFState {
    pub avg_rates: Vec<f64>,
    /// Forgetting factor in (0, 1); larger means faster tracking.
    pub forgetting: f64,
    /// Small positive constant keeping denominators away from zero.
    pub guard: f64,
}

pub const DEFAULT_FORGETTING: f64 = 0.1;
pub const DEFAULT_GUARD: f64 = 1e-6;

impl PFState {
    pub fn new(num_users: usize, forgetting: f64, guard: f64) -> Self {
        assert!(
            forgetting > 0.0 && forgetting < 1.0,
            "forgetting factor {forgetting} outside (0, 1)"
        );
        assert!(guard > 0.0, "guard must be positive");
        PFState {
            avg_rates: vec![0.0; num_users],
            forgetting,
            guard,
        }
    }

    pub fn num_users(&self) -> usize {
        self.avg_rates.len()
    }
}

/// Rates achieved by one scheduling decision on one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// `log2(1 + SINR)` per user; zero for unscheduled users.
    pub per_user_rates: Vec<f64>,
    pub sum_rate: f64,
    /// Filled by [`pf_objective`]; zero straight out of the rate layer.
    pub pf_value: f64,
}

/// SINR of scheduled user `t`: beam gain over co-scheduled interference plus
/// noise, with per-user power `P = P_total / T`.
///
/// Panics when queried for an unscheduled user; that is a caller bug, not a
/// channel condition.
pub fn user_sinr(
    channel: &ChannelRealization,
    beams: &BeamAssignment,
    schedule: &SchedulingVector,
    user: usize,
) -> f64 {
    assert!(
        schedule.is_scheduled(user),
        "SINR queried for unscheduled user {user}"
    );
    let power = channel.config.per_user_power();
    let own = beam_gain(channel, beams, user, user);
    let mut interference = 0.0;
    for x in 0..schedule.len() {
        if x != user && schedule.is_scheduled(x) {
            interference += beam_gain(channel, beams, user, x);
        }
    }
    power * own / (power * interference + channel.config.noise_var)
}

/// `|n_t^H f_x|^2`: power user `t` receives from the beam serving user `x`.
fn beam_gain(channel: &ChannelRealization, beams: &BeamAssignment, t: usize, x: usize) -> f64 {
    let dot: Complex64 = channel
        .matrix
        .column(t)
        .iter()
        .zip(beams.beamforming.column(x).iter())
        .map(|(n, f)| n.conj() * f)
        .sum();
    dot.norm_sqr()
}

/// Shannon rates for one schedule on one slot. The all-zero schedule yields
/// an all-zero report.
pub fn instantaneous_rates(
    channel: &ChannelRealization,
    beams: &BeamAssignment,
    schedule: &SchedulingVector,
) -> RateReport {
    SlotGains::new(channel, beams).rates(schedule)
}

/// PF objective for a rate report: sum over scheduled users of
/// `rate / (avg_rate + guard)`. Unscheduled users contribute zero because
/// their instantaneous rate is zero.
pub fn pf_objective(report: &RateReport, pf: &PFState, schedule: &SchedulingVector) -> f64 {
    assert_eq!(report.per_user_rates.len(), pf.num_users());
    assert_eq!(schedule.len(), pf.num_users());
    report
        .per_user_rates
        .iter()
        .zip(pf.avg_rates.iter())
        .map(|(&rate, &avg)| rate / (avg + pf.guard))
        .sum()
}

/// EWMA update of the historical rates: scheduled users move toward their
/// instantaneous rate by the forgetting factor, unscheduled users keep their
/// average untouched. Returns a new state.
pub fn pf_update(pf: &PFState, report: &RateReport, schedule: &SchedulingVector) -> PFState {
    assert_eq!(report.per_user_rates.len(), pf.num_users());
    assert_eq!(schedule.len(), pf.num_users());
    let omega = pf.forgetting;
    let avg_rates = pf
        .avg_rates
        .iter()
        .enumerate()
        .map(|(t, &avg)| {
            if schedule.is_scheduled(t) {
                (1.0 - omega) * avg + omega * report.per_user_rates[t]
            } else {
                avg
            }
        })
        .collect();
    PFState {
        avg_rates,
        forgetting: pf.forgetting,
        guard: pf.guard,
    }
}

/// Precomputed cross-beam gains for one slot, `P * |n_t^H f_x|^2`, so that
/// evaluating many candidate schedules costs O(T^2) arithmetic each instead
/// of fresh inner products.
#[derive(Debug, Clone)]
pub struct SlotGains {
    /// `scaled_gain[[t, x]] = P * |n_t^H f_x|^2`.
    scaled_gain: Array2<f64>,
    noise_var: f64,
}

impl SlotGains {
    pub fn new(channel: &ChannelRealization, beams: &BeamAssignment) -> Self {
        let t_users = channel.config.num_users;
        let power = channel.config.per_user_power();
        let scaled_gain = Array2::from_shape_fn((t_users, t_users), |(t, x)| {
            power * beam_gain(channel, beams, t, x)
        });
        SlotGains {
            scaled_gain,
            noise_var: channel.config.noise_var,
        }
    }

    pub fn num_users(&self) -> usize {
        self.scaled_gain.nrows()
    }

    pub fn rates(&self, schedule: &SchedulingVector) -> RateReport {
        let t_users = self.num_users();
        assert_eq!(schedule.len(), t_users);
        let mut per_user_rates = vec![0.0; t_users];
        let mut sum_rate = 0.0;
        for t in 0..t_users {
            if !schedule.is_scheduled(t) {
                continue;
            }
            let mut interference = 0.0;
            for x in 0..t_users {
                if x != t && schedule.is_scheduled(x) {
                    interference += self.scaled_gain[[t, x]];
                }
            }
            let sinr = self.scaled_gain[[t, t]] / (interference + self.noise_var);
            let rate = (1.0 + sinr).log2();
            per_user_rates[t] = rate;
            sum_rate += rate;
        }
        RateReport {
            per_user_rates,
            sum_rate,
            pf_value: 0.0,
        }
    }

    /// PF objective of a candidate schedule under the given historical
    /// state. Pure; the state is not advanced.
    pub fn reward(&self, schedule: &SchedulingVector, pf: &PFState) -> f64 {
        let report = self.rates(schedule);
        pf_objective(&report, pf, schedule)
    }

    /// PF rewards for every candidate schedule, indexed by basis index.
    pub fn all_rewards(&self, pf: &PFState) -> Vec<f64> {
        let t_users = self.num_users();
        (0..1usize << t_users)
            .map(|index| self.reward(&SchedulingVector::from_basis_index(index, t_users), pf))
            .collect()
    }
}
