//! Classical reference schedulers: exhaustive search over all schedules,
//! greedy user addition, and conditioned random selection. These anchor the
//! quantum scheduler's results from above (the true optimum) and below.

use rand::Rng;

use crate::ratemod::{PFState, SchedulingVector, SlotGains};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Exhaustive,
    GreedyPf,
    Random,
}

/// Enumeration cap: 2^20 schedules is where a full scan stops being
/// interactive.
pub const MAX_EXHAUSTIVE_USERS: usize = 20;

/// Scan every schedule and return the PF maximizer with its value. Ties go
/// to the smallest basis index.
pub fn exhaustive_best(gains: &SlotGains, pf: &PFState) -> (SchedulingVector, f64) {
    let t_users = gains.num_users();
    assert!(
        t_users <= MAX_EXHAUSTIVE_USERS,
        "exhaustive scan over {t_users} users exceeds the 2^{MAX_EXHAUSTIVE_USERS} cap"
    );
    let mut best_index = 0usize;
    let mut best_value = f64::NEG_INFINITY;
    for index in 0..1usize << t_users {
        let value = gains.reward(&SchedulingVector::from_basis_index(index, t_users), pf);
        if value > best_value {
            best_value = value;
            best_index = index;
        }
    }
    (
        SchedulingVector::from_basis_index(best_index, t_users),
        best_value,
    )
}

/// Greedy PF scheduler: start from the empty schedule and keep adding the
/// user whose inclusion raises the objective the most, stopping at the first
/// step with no strict improvement.
pub fn greedy_pf(gains: &SlotGains, pf: &PFState) -> SchedulingVector {
    let t_users = gains.num_users();
    let mut schedule = SchedulingVector::all_off(t_users);
    let mut current = 0.0;
    loop {
        let mut best_user = None;
        let mut best_value = current;
        for t in 0..t_users {
            if schedule.is_scheduled(t) {
                continue;
            }
            let mut candidate = schedule.clone();
            candidate.set(t, true);
            let value = gains.reward(&candidate, pf);
            if value > best_value {
                best_value = value;
                best_user = Some(t);
            }
        }
        match best_user {
            Some(t) => {
                schedule.set(t, true);
                current = best_value;
            }
            None => return schedule,
        }
    }
}

/// Uniform random schedule with each bit Bernoulli(1/2), redrawn while the
/// result is all-zero so nobody-served is never returned.
pub fn random_policy(num_users: usize, rng: &mut impl Rng) -> SchedulingVector {
    assert!(num_users >= 1);
    loop {
        let bits: Vec<bool> = (0..num_users).map(|_| rng.random::<bool>()).collect();
        if bits.iter().any(|&b| b) {
            return SchedulingVector::new(bits);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chanmod::{
        default_user_angles, dft_matrix, generate_channel, select_beams, ChannelConfig,
        ChannelSampler,
    };
    use crate::rng::derive_rng;
    use ndarray::Array2;

    fn config(num_users: usize, num_antennas: usize, seed: u64) -> ChannelConfig {
        ChannelConfig {
            num_antennas,
            num_users,
            array_rows: 1,
            array_cols: num_antennas,
            rician_k: 3.0,
            corr_coeff: 0.5,
            noise_var: 0.01,
            total_power: 1.0,
            user_angles: default_user_angles(seed, num_users),
            seed,
        }
    }

    fn slot_gains(num_users: usize, num_antennas: usize, seed: u64, slot: u64) -> SlotGains {
        let cfg = config(num_users, num_antennas, seed);
        let channel = generate_channel(&cfg, slot).unwrap();
        let beams = select_beams(&channel);
        SlotGains::new(&channel, &beams)
    }

    #[test]
    fn single_user_is_scheduled_when_profitable() {
        let gains = slot_gains(1, 4, 3, 0);
        let pf = PFState::new(1, 0.1, 1e-6);
        let (best, value) = exhaustive_best(&gains, &pf);
        assert!(value > 0.0);
        assert_eq!(best.to_basis_index(), 1);
    }

    #[test]
    fn orthogonal_equal_gain_users_are_both_scheduled() {
        // Channels equal to distinct DFT columns: no cross interference, so
        // scheduling both strictly beats any single user.
        let cfg = config(2, 4, 0);
        let dft = dft_matrix(4);
        let mut matrix = Array2::zeros((4, 2));
        for m in 0..4 {
            matrix[[m, 0]] = dft[[m, 0]];
            matrix[[m, 1]] = dft[[m, 2]];
        }
        let channel = crate::chanmod::ChannelRealization { matrix, config: cfg };
        let beams = select_beams(&channel);
        let gains = SlotGains::new(&channel, &beams);
        let pf = PFState::new(2, 0.1, 1e-6);
        let (best, _) = exhaustive_best(&gains, &pf);
        assert_eq!(best.bits(), &[true, true]);
    }

    #[test]
    fn exhaustive_value_dominates_every_schedule() {
        let gains = slot_gains(6, 16, 11, 4);
        let pf = PFState::new(6, 0.1, 1e-6);
        let (_, best_value) = exhaustive_best(&gains, &pf);
        for index in 0..64usize {
            let value = gains.reward(&SchedulingVector::from_basis_index(index, 6), &pf);
            assert!(best_value >= value);
        }
    }

    #[test]
    fn greedy_schedules_a_lone_user() {
        let gains = slot_gains(1, 4, 5, 0);
        let pf = PFState::new(1, 0.1, 1e-6);
        assert_eq!(greedy_pf(&gains, &pf).to_basis_index(), 1);
    }

    #[test]
    fn greedy_never_beats_exhaustive_and_is_usually_close() {
        let cfg = config(8, 16, 77);
        let sampler = ChannelSampler::new(cfg).unwrap();
        let pf = PFState::new(8, 0.1, 1e-6);
        let mut close = 0usize;
        let slots = 1000u64;
        for slot in 0..slots {
            let channel = sampler.realize(slot);
            let beams = select_beams(&channel);
            let gains = SlotGains::new(&channel, &beams);
            let (_, best_value) = exhaustive_best(&gains, &pf);
            let greedy_value = gains.reward(&greedy_pf(&gains, &pf), &pf);
            assert!(greedy_value <= best_value + 1e-12, "slot {slot}");
            if greedy_value >= 0.9 * best_value {
                close += 1;
            }
        }
        assert!(
            close >= (slots as usize) * 9 / 10,
            "greedy within 0.9x optimum on only {close}/{slots} slots"
        );
    }

    #[test]
    fn random_policy_never_returns_all_zero() {
        let mut rng = derive_rng(0, 1, 2);
        for _ in 0..10_000 {
            assert!(random_policy(3, &mut rng).num_scheduled() > 0);
        }
    }

    #[test]
    fn random_policy_bits_are_balanced() {
        let num_users = 10;
        let draws = 100_000usize;
        let mut rng = derive_rng(5, 6, 7);
        let mut ones = vec![0usize; num_users];
        for _ in 0..draws {
            let policy = random_policy(num_users, &mut rng);
            for t in 0..num_users {
                if policy.is_scheduled(t) {
                    ones[t] += 1;
                }
            }
        }
        // Conditioned on non-zero, each bit's frequency is
        // 2^(T-1)/(2^T - 1); at T=10 that is within noise of 1/2.
        let sigma = (draws as f64 * 0.25).sqrt();
        for (t, &count) in ones.iter().enumerate() {
            assert!(
                (count as f64 - draws as f64 / 2.0).abs() <= 3.0 * sigma,
                "bit {t} frequency {count} off balance"
            );
        }
    }

    #[test]
    fn random_policy_is_deterministic_per_seed() {
        let a: Vec<usize> = {
            let mut rng = derive_rng(9, 9, 9);
            (0..50).map(|_| random_policy(5, &mut rng).to_basis_index()).collect()
        };
        let b: Vec<usize> = {
            let mut rng = derive_rng(9, 9, 9);
            (0..50).map(|_| random_policy(5, &mut rng).to_basis_index()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn expected_pf_ordering_holds() {
        // exhaustive >= greedy >= random in mean PF value over seeded slots.
        let cfg = config(6, 16, 123);
        let sampler = ChannelSampler::new(cfg).unwrap();
        let pf = PFState::new(6, 0.1, 1e-6);
        let mut rng = derive_rng(123, 0x52414e44, 0);
        let (mut acc_ex, mut acc_gr, mut acc_rn) = (0.0, 0.0, 0.0);
        let slots = 300u64;
        for slot in 0..slots {
            let channel = sampler.realize(slot);
            let beams = select_beams(&channel);
            let gains = SlotGains::new(&channel, &beams);
            let (_, ex) = exhaustive_best(&gains, &pf);
            acc_ex += ex;
            acc_gr += gains.reward(&greedy_pf(&gains, &pf), &pf);
            acc_rn += gains.reward(&random_policy(6, &mut rng), &pf);
        }
        assert!(acc_ex >= acc_gr && acc_gr >= acc_rn, "{acc_ex} {acc_gr} {acc_rn}");
    }
}
