//! Grover-inspired reinforcement learning for user scheduling.
//!
//! Each training slot realizes a channel, scores every candidate schedule
//! with the proportional-fairness objective, marks the candidates clearing
//! the oracle threshold, amplifies them with Grover iterations, and measures
//! one schedule to act on. The historical-rate state advances with the
//! measured schedule, and the threshold tracks a quantile of the observed
//! rewards. Training samples the measurement (exploration); validation
//! scores the argmax-probability schedule (exploitation).

use rand::Rng;

use crate::chanmod::{select_beams, BeamAssignment, ChannelRealization, ChannelSampler};
use crate::error::{Error, Result};
use crate::grover::{grover_search, optimal_iterations, GroverPlan};
use crate::qsim::{MarkedSet, StateVector, MAX_QUBITS};
use crate::ratemod::{
    instantaneous_rates, pf_objective, pf_update, PFState, SchedulingVector, SlotGains,
};
use crate::rng::{derive_rng, STREAM_MEASURE};

/// Grover iteration budget per slot: a fixed count, or the closed-form
/// optimum for the current marked-set size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroverIters {
    Auto,
    Fixed(usize),
}

/// Oracle threshold policy: a fixed reward bar, or a quantile tracker that
/// follows the reward distribution as the historical rates evolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleThreshold {
    Adaptive,
    Fixed(f64),
}

/// Hyperparameters of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Threshold adaptation rate in (0, 1].
    pub learning_rate: f64,
    /// Slots per epoch.
    pub batch_size: usize,
    pub epochs: usize,
    pub grover_iters: GroverIters,
    pub oracle_threshold: OracleThreshold,
    /// Final reward quantile targeted by the adaptive threshold, in (0, 1).
    /// The schedule ramps linearly from 0.5 (or lower, if the target is
    /// lower) to this value across epochs.
    pub threshold_quantile: f64,
    /// Forgetting factor of the historical-rate average.
    pub forgetting: f64,
    /// Division guard of the PF objective.
    pub guard: f64,
    pub seed: u64,
    pub channel_config: crate::chanmod::ChannelConfig,
    /// Held-out slots scored after every epoch.
    pub validation_slots: usize,
}

pub const DEFAULT_LEARNING_RATE: f64 = 0.2;
pub const DEFAULT_BATCH_SIZE: usize = 8;
pub const DEFAULT_EPOCHS: usize = 500;
pub const DEFAULT_THRESHOLD_QUANTILE: f64 = 0.95;
pub const DEFAULT_VALIDATION_SLOTS: usize = 32;

/// Adaptive-threshold ramp start; see [`TrainConfig::threshold_quantile`].
const QUANTILE_RAMP_START: f64 = 0.5;

/// Validation channel slots live far above any reachable training slot
/// index, keeping the two sets disjoint by construction.
const VALIDATION_SLOT_BASE: u64 = 1 << 40;

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return fail(format!("learning_rate {} outside (0, 1]", self.learning_rate));
        }
        if self.batch_size == 0 || self.epochs == 0 || self.validation_slots == 0 {
            return fail("batch_size, epochs, and validation_slots must be positive".into());
        }
        if let GroverIters::Fixed(0) = self.grover_iters {
            return fail("fixed grover_iters must be at least 1".into());
        }
        if let OracleThreshold::Fixed(tau) = self.oracle_threshold {
            if !tau.is_finite() {
                return fail(format!("fixed oracle threshold {tau} is not finite"));
            }
        }
        if !(self.threshold_quantile > 0.0 && self.threshold_quantile < 1.0) {
            return fail(format!(
                "threshold_quantile {} outside (0, 1)",
                self.threshold_quantile
            ));
        }
        if !(self.forgetting > 0.0 && self.forgetting < 1.0) {
            return fail(format!("forgetting {} outside (0, 1)", self.forgetting));
        }
        if self.guard <= 0.0 {
            return fail(format!("guard {} must be positive", self.guard));
        }
        self.channel_config.validate()?;
        if self.channel_config.num_users > MAX_QUBITS {
            return fail(format!(
                "{} users exceed the {MAX_QUBITS}-qubit statevector cap",
                self.channel_config.num_users
            ));
        }
        Ok(())
    }
}

/// Agent triple: historical state plus last measured schedule, the Grover
/// amplify factor in force, and the last observed reward.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentParams {
    pub pf_state: PFState,
    pub last_policy: SchedulingVector,
    /// Most recent non-trivial iteration count; at least 1.
    pub amplify_factor: usize,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Threshold in force at the final slot of the epoch.
    pub tau_used: f64,
    /// Marked-set size at the final slot of the epoch.
    pub marked_count: usize,
    /// Argmax-probability schedule of the epoch's final state — the policy
    /// the agent would exploit.
    pub measured_policy: SchedulingVector,
    /// Mean sampled reward across the epoch's slots.
    pub train_reward: f64,
    /// Mean PF objective of `measured_policy` over the held-out slots,
    /// scored against the zeroed reference state so epochs are comparable.
    pub validation_reward: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainLog {
    pub records: Vec<EpochRecord>,
    /// Slots where a fixed iteration budget exceeded the closed-form
    /// optimum for the marked count.
    pub grover_overshoot: u64,
    /// Slots whose marked set came up empty (schedule sampled from the
    /// uniform state instead).
    pub empty_marked_slots: u64,
}

/// PF-weighted reward of one candidate schedule on one slot. Pure; the
/// historical state is read, never advanced.
pub fn evaluate_reward(
    channel: &ChannelRealization,
    beams: &BeamAssignment,
    schedule: &SchedulingVector,
    pf: &PFState,
) -> f64 {
    let report = instantaneous_rates(channel, beams, schedule);
    pf_objective(&report, pf, schedule)
}

/// Mark every schedule whose reward clears the threshold. The all-zero
/// schedule is excluded unconditionally so the agent cannot amplify
/// serving nobody.
pub fn marked_from_rewards(rewards: &[f64], tau: f64) -> MarkedSet {
    MarkedSet::new(
        rewards
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &r)| r >= tau)
            .map(|(i, _)| i),
    )
}

/// Scan all `2^T` candidates and mark those with reward at least `tau`.
/// A threshold above the slot's maximum reward yields an empty set, which
/// callers treat as "skip amplification".
pub fn build_marked_set(
    channel: &ChannelRealization,
    beams: &BeamAssignment,
    pf: &PFState,
    tau: f64,
) -> MarkedSet {
    assert!(tau.is_finite() || tau == f64::NEG_INFINITY, "tau must not be NaN");
    let gains = SlotGains::new(channel, beams);
    marked_from_rewards(&gains.all_rewards(pf), tau)
}

/// Linear-interpolation quantile of an unsorted sample.
fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("rewards are ordered"));
    if sorted.len() == 1 {
        return sorted[0];
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Exponential threshold update toward the `q`-quantile of the current
/// slot's rewards: `tau' = (1 - eta) * tau_prev + eta * quantile`.
/// Nondecreasing in `q`.
pub fn adapt_threshold(rewards: &[f64], q: f64, eta: f64, tau_prev: f64) -> f64 {
    (1.0 - eta) * tau_prev + eta * quantile(rewards, q)
}

/// Outcome of the amplify-and-measure stage on one slot.
#[derive(Debug, Clone)]
pub struct SlotDecision {
    pub policy: SchedulingVector,
    /// PF reward of the sampled schedule.
    pub reward: f64,
    pub marked_count: usize,
    pub iterations: usize,
    /// Post-amplification state, before the (simulated) collapse.
    pub state: StateVector,
}

/// Amplify the marked schedules and sample one measurement.
fn amplify_and_sample(
    num_users: usize,
    rewards: &[f64],
    marked: MarkedSet,
    grover_iters: GroverIters,
    rng: &mut impl Rng,
) -> Result<(SlotDecision, bool)> {
    let mut overshoot = false;
    let iterations = if marked.is_empty() {
        0
    } else {
        let k_opt =
            optimal_iterations(num_users, marked.len()).expect("marked set is non-empty");
        match grover_iters {
            GroverIters::Auto => k_opt,
            GroverIters::Fixed(g) => {
                overshoot = g > k_opt;
                g
            }
        }
    };
    let state = grover_search(&GroverPlan {
        num_qubits: num_users,
        marked: marked.clone(),
        iterations,
    })?;
    let index = state.sample(rng);
    Ok((
        SlotDecision {
            policy: SchedulingVector::from_basis_index(index, num_users),
            reward: rewards[index],
            marked_count: marked.len(),
            iterations,
            state,
        },
        overshoot,
    ))
}

/// One-shot Grover scheduling of a single slot with the threshold pinned to
/// the slot's maximum reward, i.e. the converged agent's behavior: only the
/// argmax set is marked and amplified.
pub fn grover_schedule_slot(
    gains: &SlotGains,
    pf: &PFState,
    grover_iters: GroverIters,
    rng: &mut impl Rng,
) -> Result<SlotDecision> {
    let rewards = gains.all_rewards(pf);
    let tau = rewards.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let marked = marked_from_rewards(&rewards, tau);
    let (decision, _) =
        amplify_and_sample(gains.num_users(), &rewards, marked, grover_iters, rng)?;
    Ok(decision)
}

/// Precomputed cross-beam gains of the held-out validation slots. Slot
/// indices start at a base far above the training range, so the two sets
/// never overlap.
pub fn validation_slot_gains(config: &TrainConfig) -> Result<Vec<SlotGains>> {
    let sampler = ChannelSampler::new(config.channel_config.clone())?;
    Ok((0..config.validation_slots)
        .map(|v| {
            let channel = sampler.realize(VALIDATION_SLOT_BASE + v as u64);
            let beams = select_beams(&channel);
            SlotGains::new(&channel, &beams)
        })
        .collect())
}

/// Mean PF objective of one schedule across the held-out validation slots,
/// scored against the supplied historical state.
pub fn validation_reward(
    policy: &SchedulingVector,
    config: &TrainConfig,
    pf: &PFState,
) -> Result<f64> {
    let gains = validation_slot_gains(config)?;
    Ok(gains.iter().map(|g| g.reward(policy, pf)).sum::<f64>() / gains.len() as f64)
}

fn quantile_for_epoch(config: &TrainConfig, epoch: usize) -> f64 {
    let q_final = config.threshold_quantile;
    let q_start = q_final.min(QUANTILE_RAMP_START);
    if config.epochs <= 1 {
        return q_final;
    }
    q_start + (q_final - q_start) * epoch as f64 / (config.epochs - 1) as f64
}

/// Run the training loop and return the final agent with its per-epoch log.
/// Deterministic: identical configs produce identical logs.
pub fn train(config: &TrainConfig) -> Result<(AgentParams, TrainLog)> {
    config.validate()?;
    let t_users = config.channel_config.num_users;
    let sampler = ChannelSampler::new(config.channel_config.clone())?;
    let val_gains = validation_slot_gains(config)?;

    let mut pf = PFState::new(t_users, config.forgetting, config.guard);
    // Fixed reference for validation scoring: a zeroed historical state, so
    // validation rewards of different epochs measure policy quality on the
    // same scale.
    let reference_pf = pf.clone();

    let mut tau_chain: Option<f64> = None;
    let mut log = TrainLog::default();
    let mut agent = AgentParams {
        pf_state: pf.clone(),
        last_policy: SchedulingVector::all_off(t_users),
        amplify_factor: 1,
        reward: 0.0,
    };

    for epoch in 0..config.epochs {
        let q = quantile_for_epoch(config, epoch);
        let mut reward_acc = 0.0;
        let mut last_tau = 0.0;
        let mut last_marked = 0usize;
        let mut last_state: Option<StateVector> = None;

        for b in 0..config.batch_size {
            let slot = (epoch * config.batch_size + b) as u64;
            let channel = sampler.realize(slot);
            let beams = select_beams(&channel);
            let gains = SlotGains::new(&channel, &beams);
            let rewards = gains.all_rewards(&pf);

            let tau = match config.oracle_threshold {
                OracleThreshold::Fixed(tau) => tau,
                OracleThreshold::Adaptive => {
                    let tau = match tau_chain {
                        // First observation seeds the chain with the raw quantile.
                        None => adapt_threshold(&rewards, q, 1.0, 0.0),
                        Some(prev) => adapt_threshold(&rewards, q, config.learning_rate, prev),
                    };
                    tau_chain = Some(tau);
                    tau
                }
            };

            let marked = marked_from_rewards(&rewards, tau);
            if marked.is_empty() {
                log.empty_marked_slots += 1;
            }
            let mut rng = derive_rng(config.seed, STREAM_MEASURE, slot);
            let (decision, overshoot) =
                amplify_and_sample(t_users, &rewards, marked, config.grover_iters, &mut rng)?;
            if overshoot {
                log.grover_overshoot += 1;
            }

            let report = gains.rates(&decision.policy);
            pf = pf_update(&pf, &report, &decision.policy);

            reward_acc += decision.reward;
            last_tau = tau;
            last_marked = decision.marked_count;
            if decision.iterations >= 1 {
                agent.amplify_factor = decision.iterations;
            }
            agent.reward = decision.reward;
            agent.last_policy = decision.policy;
            last_state = Some(decision.state);
        }

        let final_state = last_state.expect("batch_size >= 1");
        let measured_policy =
            SchedulingVector::from_basis_index(final_state.argmax_probability(), t_users);
        let validation_reward = val_gains
            .iter()
            .map(|g| g.reward(&measured_policy, &reference_pf))
            .sum::<f64>()
            / val_gains.len() as f64;

        log.records.push(EpochRecord {
            epoch,
            tau_used: last_tau,
            marked_count: last_marked,
            measured_policy,
            train_reward: reward_acc / config.batch_size as f64,
            validation_reward,
        });
    }

    agent.pf_state = pf;
    Ok((agent, log))
}
