//! Experiment execution: convergence runs and grid sweeps.
//!
//! Sweep tasks — one per (grid point, method, realization) — are
//! embarrassingly parallel and are farmed out to a rayon pool. Results are
//! reassembled in a fixed order, so the numbers never depend on thread
//! scheduling or worker count.

use rayon::prelude::*;

use crate::baselines::{exhaustive_best, greedy_pf, random_policy};
use crate::chanmod::{select_beams, ChannelSampler};
use crate::error::{Error, Result};
use crate::qrl::{grover_schedule_slot, train, validation_slot_gains};
use crate::ratemod::{pf_objective, pf_update, PFState, SlotGains};
use crate::rng::{derive_rng, derive_seed, STREAM_METHOD};

use super::config::{Axis, ExperimentSpec, Method};
use super::output::{mean_std, ResultRow};

/// Train once and emit one row per epoch: sum-rate statistics of the
/// epoch's exploitation policy over the held-out slots, plus the logged
/// validation reward.
pub fn run_convergence(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    if spec.axis != Axis::Epochs {
        return Err(Error::InvalidConfig(format!(
            "convergence runs need axis=epochs, config selects axis={}",
            spec.axis.name()
        )));
    }
    let (users, antennas, snr_db) = spec.grid()[0];
    let train_config = spec.train_config(users, antennas, snr_db, spec.seed)?;
    let (_, log) = train(&train_config)?;
    let val_gains = validation_slot_gains(&train_config)?;

    Ok(log
        .records
        .iter()
        .map(|record| {
            let rates: Vec<f64> = val_gains
                .iter()
                .map(|g| g.rates(&record.measured_policy).sum_rate)
                .collect();
            let (mean_sum_rate, std_sum_rate) = mean_std(&rates);
            ResultRow {
                method: Method::Qrl.label().to_string(),
                users,
                antennas,
                snr_db,
                epoch: record.epoch as i64,
                mean_sum_rate,
                std_sum_rate,
                pf_value: record.validation_reward,
                seed: spec.seed,
            }
        })
        .collect())
}

/// Per-slot decisions of one method over one realization's held-out slots.
/// Every method sees the same channels; the PF state evolves independently
/// per method with the schedules it actually picked.
fn evaluate_realization(
    spec: &ExperimentSpec,
    users: usize,
    antennas: usize,
    snr_db: f64,
    method: Method,
    realization: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let realization_seed = derive_seed(spec.seed, realization as u64);
    let channel_config = spec.channel_config(users, antennas, snr_db, realization_seed)?;
    let sampler = ChannelSampler::new(channel_config)?;
    let mut pf = PFState::new(users, spec.forgetting, spec.guard);
    let mut rng = derive_rng(realization_seed, STREAM_METHOD + method.stream_id(), 0);

    let mut sum_rates = Vec::with_capacity(spec.validation_slots);
    let mut pf_values = Vec::with_capacity(spec.validation_slots);
    for slot in 0..spec.validation_slots as u64 {
        let channel = sampler.realize(slot);
        let beams = select_beams(&channel);
        let gains = SlotGains::new(&channel, &beams);
        let policy = match method {
            Method::Exhaustive => exhaustive_best(&gains, &pf).0,
            Method::Greedy => greedy_pf(&gains, &pf),
            Method::Random => random_policy(users, &mut rng),
            Method::Qrl => {
                grover_schedule_slot(&gains, &pf, spec.grover_iters, &mut rng)?.policy
            }
        };
        let report = gains.rates(&policy);
        pf_values.push(pf_objective(&report, &pf, &policy));
        sum_rates.push(report.sum_rate);
        pf = pf_update(&pf, &report, &policy);
    }
    Ok((sum_rates, pf_values))
}

/// Sweep the configured axis: every method is scored on
/// `realizations x validation_slots` seeded slots per grid point. Rows come
/// out sorted by (method, axis value) with `epoch = -1`.
pub fn run_sweep(spec: &ExperimentSpec, workers: Option<usize>) -> Result<Vec<ResultRow>> {
    if spec.axis == Axis::Epochs {
        return Err(Error::InvalidConfig(
            "sweep runs need axis=users|antennas|snr; use the converge command for axis=epochs"
                .into(),
        ));
    }
    let grid = spec.grid();
    let mut tasks = Vec::new();
    for (grid_index, &(users, antennas, snr_db)) in grid.iter().enumerate() {
        for &method in &spec.methods {
            for realization in 0..spec.realizations {
                tasks.push((grid_index, users, antennas, snr_db, method, realization));
            }
        }
    }

    let run_tasks = || -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
        tasks
            .par_iter()
            .map(|&(_, users, antennas, snr_db, method, realization)| {
                evaluate_realization(spec, users, antennas, snr_db, method, realization)
            })
            .collect()
    };
    let outcomes = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?
            .install(run_tasks),
        None => run_tasks(),
    }?;

    // Regroup in task order, so the reduction is independent of scheduling.
    let mut samples: Vec<Vec<(Vec<f64>, Vec<f64>)>> =
        vec![Vec::new(); grid.len() * spec.methods.len()];
    for (&(grid_index, _, _, _, method, _), outcome) in tasks.iter().zip(outcomes) {
        let method_pos = spec.methods.iter().position(|&m| m == method).unwrap();
        samples[grid_index * spec.methods.len() + method_pos].push(outcome);
    }

    let mut method_order: Vec<Method> = spec.methods.clone();
    method_order.sort_by_key(|m| m.label());

    let mut rows = Vec::new();
    for method in method_order {
        let method_pos = spec.methods.iter().position(|&m| m == method).unwrap();
        for (grid_index, &(users, antennas, snr_db)) in grid.iter().enumerate() {
            let cell = &samples[grid_index * spec.methods.len() + method_pos];
            let mut sum_rates = Vec::new();
            let mut pf_values = Vec::new();
            for (rates, pfs) in cell {
                sum_rates.extend_from_slice(rates);
                pf_values.extend_from_slice(pfs);
            }
            let (mean_sum_rate, std_sum_rate) = mean_std(&sum_rates);
            let (pf_mean, _) = mean_std(&pf_values);
            rows.push(ResultRow {
                method: method.label().to_string(),
                users,
                antennas,
                snr_db,
                epoch: -1,
                mean_sum_rate,
                std_sum_rate,
                pf_value: pf_mean,
                seed: spec.seed,
            });
        }
    }
    Ok(rows)
}
