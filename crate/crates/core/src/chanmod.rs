//! Correlated Rician fading channels and DFT beam-domain beamforming.
//!
//! A base station with `A` antennas serves `T` single-antenna users. Each
//! user's downlink channel is an `A`-vector combining a deterministic
//! line-of-sight steering component with a spatially correlated scattered
//! component, weighted by the Rician K-factor. Beamforming vectors are drawn
//! from the unitary DFT codebook: every user is assigned the codebook column
//! that captures the most energy of its realized channel, with conflicts
//! resolved greedily.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::rng::{derive_rng, STREAM_ANGLES, STREAM_CHANNEL};

/// Static description of one cell: array geometry, fading statistics, power
/// budget, and user placement. All channel draws are a pure function of the
/// config plus a slot index.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    /// Base-station antenna count `A`.
    pub num_antennas: usize,
    /// Served user count `T`, at most `A`.
    pub num_users: usize,
    /// Rectangular array rows `X`; `X * Y = A`.
    pub array_rows: usize,
    /// Rectangular array columns `Y`.
    pub array_cols: usize,
    /// Rician K-factor, linear scale. 0 is pure scattering, large values
    /// approach pure line of sight.
    pub rician_k: f64,
    /// Exponential spatial correlation coefficient of the scattered
    /// component, in `[0, 1)`.
    pub corr_coeff: f64,
    /// Receiver noise power (W).
    pub noise_var: f64,
    /// Total transmit power budget (W), split equally across users.
    pub total_power: f64,
    /// Line-of-sight departure angle per user, radians in `(-pi/2, pi/2)`.
    pub user_angles: Vec<f64>,
    pub seed: u64,
}

pub const DEFAULT_RICIAN_K: f64 = 3.0;
pub const DEFAULT_CORR_COEFF: f64 = 0.5;
/// Default angle spread: uniform over (-pi/3, pi/3).
pub const DEFAULT_ANGLE_SPREAD: f64 = PI / 3.0;

impl ChannelConfig {
    /// Default cell: unit power budget, noise set from the SNR
    /// (`sigma^2 = P_total * 10^(-snr_db/10)`), flat 1 x `A` array, and user
    /// angles drawn uniformly in `(-pi/3, pi/3)` from the seed.
    pub fn from_snr_db(
        num_users: usize,
        num_antennas: usize,
        snr_db: f64,
        rician_k: f64,
        corr_coeff: f64,
        seed: u64,
    ) -> Result<Self> {
        let config = ChannelConfig {
            num_antennas,
            num_users,
            array_rows: 1,
            array_cols: num_antennas,
            rician_k,
            corr_coeff,
            noise_var: 10f64.powf(-snr_db / 10.0),
            total_power: 1.0,
            user_angles: default_user_angles(seed, num_users),
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.num_antennas == 0 || self.num_users == 0 {
            return fail("antenna and user counts must be positive".into());
        }
        if self.num_users > self.num_antennas {
            return fail(format!(
                "users ({}) must not exceed antennas ({})",
                self.num_users, self.num_antennas
            ));
        }
        if self.array_rows * self.array_cols != self.num_antennas {
            return fail(format!(
                "array geometry {}x{} does not match {} antennas",
                self.array_rows, self.array_cols, self.num_antennas
            ));
        }
        if !(self.rician_k >= 0.0 && self.rician_k.is_finite()) {
            return fail(format!("rician_k must be finite and >= 0, got {}", self.rician_k));
        }
        if !(0.0..1.0).contains(&self.corr_coeff) {
            return fail(format!("corr_coeff must lie in [0, 1), got {}", self.corr_coeff));
        }
        if !(self.noise_var > 0.0 && self.noise_var.is_finite()) {
            return fail(format!("noise_var must be positive, got {}", self.noise_var));
        }
        if !(self.total_power > 0.0 && self.total_power.is_finite()) {
            return fail(format!("total_power must be positive, got {}", self.total_power));
        }
        if self.user_angles.len() != self.num_users {
            return fail(format!(
                "expected {} user angles, got {}",
                self.num_users,
                self.user_angles.len()
            ));
        }
        if let Some(bad) = self.user_angles.iter().find(|a| a.abs() >= FRAC_PI_2) {
            return fail(format!("user angle {bad} outside (-pi/2, pi/2)"));
        }
        Ok(())
    }

    /// Per-user transmit power `P = P_total / T`; every user gets the same
    /// share of the budget.
    pub fn per_user_power(&self) -> f64 {
        self.total_power / self.num_users as f64
    }
}

/// Draw `num_users` departure angles uniformly in `(-pi/3, pi/3)`.
pub fn default_user_angles(seed: u64, num_users: usize) -> Vec<f64> {
    let mut rng = derive_rng(seed, STREAM_ANGLES, 0);
    (0..num_users)
        .map(|_| (rng.random::<f64>() * 2.0 - 1.0) * DEFAULT_ANGLE_SPREAD)
        .collect()
}

/// One coherence slot's realized channel matrix (`A x T`, column `t` is user
/// `t`'s channel) together with the generating config.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub matrix: Array2<Complex64>,
    pub config: ChannelConfig,
}

/// DFT beam choice per user: `beam_indices[t]` is the codebook column
/// assigned to user `t`, `beamforming` stacks those unit-norm columns as an
/// `A x T` matrix.
#[derive(Debug, Clone)]
pub struct BeamAssignment {
    pub beam_indices: Vec<usize>,
    pub beamforming: Array2<Complex64>,
}

/// ULA steering response for a departure angle: element `m` is
/// `exp(i*pi*m*sin(angle)) / sqrt(A)`. Unit norm by construction.
pub fn steering_vector(angle: f64, num_antennas: usize) -> Array1<Complex64> {
    assert!(
        angle.abs() < FRAC_PI_2,
        "departure angle {angle} outside (-pi/2, pi/2)"
    );
    let scale = (num_antennas as f64).sqrt().recip();
    let phase_step = PI * angle.sin();
    Array1::from_iter(
        (0..num_antennas).map(|m| Complex64::from_polar(scale, phase_step * m as f64)),
    )
}

/// Exponential spatial correlation: `M[i][j] = rho^|i-j|`.
pub fn corr_matrix(dim: usize, rho: f64) -> Array2<Complex64> {
    corr_matrix_real(dim, rho).mapv(|x| Complex64::new(x, 0.0))
}

fn corr_matrix_real(dim: usize, rho: f64) -> Array2<f64> {
    assert!((0.0..1.0).contains(&rho), "corr_coeff {rho} outside [0, 1)");
    Array2::from_shape_fn((dim, dim), |(i, j)| rho.powi((i as i32 - j as i32).abs()))
}

/// Unitary DFT codebook: entry `(m, k)` is `exp(-i*2*pi*m*k/A) / sqrt(A)`.
pub fn dft_matrix(num_antennas: usize) -> Array2<Complex64> {
    assert!(num_antennas >= 1);
    let scale = (num_antennas as f64).sqrt().recip();
    let step = -2.0 * PI / num_antennas as f64;
    Array2::from_shape_fn((num_antennas, num_antennas), |(m, k)| {
        Complex64::from_polar(scale, step * (m * k) as f64)
    })
}

/// Lower-triangular `L` with `L * L^T = m`. Fails on non-positive-definite
/// input, which the exponential model cannot produce for `rho` in `[0, 1)`.
fn cholesky_lower(m: &Array2<f64>) -> Result<Array2<f64>> {
    let n = m.nrows();
    let mut l = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::InvalidConfig(
                        "correlation matrix is not positive definite".into(),
                    ));
                }
                l[[i, j]] = sum.sqrt();
            } else {
                l[[i, j]] = sum / l[[j, j]];
            }
        }
    }
    Ok(l)
}

/// Reusable channel generator for one config. Precomputes the scaled
/// line-of-sight columns and the correlation coloring factor so that
/// per-slot draws only cost the Gaussian sampling and one triangular
/// matrix-vector product per user.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    config: ChannelConfig,
    /// `A x T`, column t already scaled by `sqrt(K/(K+1)) * sqrt(A)`.
    los: Array2<Complex64>,
    /// Cholesky factor of the correlation matrix.
    chol: Array2<f64>,
    /// `sqrt(1/(K+1))` applied to the colored scattered component.
    nlos_coeff: f64,
}

impl ChannelSampler {
    pub fn new(config: ChannelConfig) -> Result<Self> {
        config.validate()?;
        let a = config.num_antennas;
        let k = config.rician_k;
        // Power split: LoS columns carry energy A*K/(K+1), the scattered part
        // A/(K+1) in expectation, so E||column||^2 = A for every K.
        let los_coeff = (k / (k + 1.0)).sqrt() * (a as f64).sqrt();
        let nlos_coeff = (1.0 / (k + 1.0)).sqrt();

        let mut los = Array2::zeros((a, config.num_users));
        for (t, &angle) in config.user_angles.iter().enumerate() {
            let sv = steering_vector(angle, a);
            for m in 0..a {
                los[[m, t]] = sv[m] * los_coeff;
            }
        }
        let chol = cholesky_lower(&corr_matrix_real(a, config.corr_coeff))?;
        Ok(ChannelSampler {
            config,
            los,
            chol,
            nlos_coeff,
        })
    }

    pub fn config(&self) -> &ChannelConfig {
        &self.config
    }

    /// Realize the channel for one coherence slot. Deterministic in
    /// `(config.seed, slot)`.
    pub fn realize(&self, slot: u64) -> ChannelRealization {
        let a = self.config.num_antennas;
        let t_users = self.config.num_users;
        let mut rng = derive_rng(self.config.seed, STREAM_CHANNEL, slot);
        let mut matrix = self.los.clone();
        let mut g = vec![Complex64::ZERO; a];
        for t in 0..t_users {
            // i.i.d. standard complex Gaussian: unit variance per entry.
            for entry in g.iter_mut() {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                *entry = Complex64::new(re / SQRT_2, im / SQRT_2);
            }
            // Color with the Cholesky factor; only the lower triangle is
            // populated.
            for i in 0..a {
                let mut acc = Complex64::ZERO;
                for j in 0..=i {
                    acc += self.chol[[i, j]] * g[j];
                }
                matrix[[i, t]] += self.nlos_coeff * acc;
            }
        }
        ChannelRealization {
            matrix,
            config: self.config.clone(),
        }
    }
}

/// One-shot channel draw; equivalent to building a [`ChannelSampler`] and
/// realizing a single slot.
pub fn generate_channel(config: &ChannelConfig, slot: u64) -> Result<ChannelRealization> {
    Ok(ChannelSampler::new(config.clone())?.realize(slot))
}

/// Energy captured by each DFT beam for user `t`: element `j` is
/// `|dft[:,j]^H n_t|^2`.
pub fn beam_energy(channel: &ChannelRealization, user: usize) -> Vec<f64> {
    let dft = dft_matrix(channel.config.num_antennas);
    beam_energy_with(&dft, channel, user)
}

fn beam_energy_with(dft: &Array2<Complex64>, channel: &ChannelRealization, user: usize) -> Vec<f64> {
    let column = channel.matrix.column(user);
    (0..dft.ncols())
        .map(|j| {
            let proj: Complex64 = dft
                .column(j)
                .iter()
                .zip(column.iter())
                .map(|(w, h)| w.conj() * h)
                .sum();
            proj.norm_sqr()
        })
        .collect()
}

/// Assign each user a distinct DFT beam. Users are handled in descending
/// order of their strongest beam energy; each takes its best still-free beam.
/// Ties go to the lowest beam index, then the lowest user index.
pub fn select_beams(channel: &ChannelRealization) -> BeamAssignment {
    let a = channel.config.num_antennas;
    let t_users = channel.config.num_users;
    let dft = dft_matrix(a);

    let energies: Vec<Vec<f64>> = (0..t_users)
        .map(|t| beam_energy_with(&dft, channel, t))
        .collect();
    let best: Vec<f64> = energies
        .iter()
        .map(|row| row.iter().cloned().fold(0.0, f64::max))
        .collect();

    let mut order: Vec<usize> = (0..t_users).collect();
    order.sort_by(|&u, &v| {
        best[v]
            .partial_cmp(&best[u])
            .expect("beam energies are finite")
            .then(u.cmp(&v))
    });

    let mut taken = vec![false; a];
    let mut beam_indices = vec![0usize; t_users];
    for &user in &order {
        let mut pick = None;
        let mut pick_energy = f64::NEG_INFINITY;
        for (j, &e) in energies[user].iter().enumerate() {
            if !taken[j] && e > pick_energy {
                pick = Some(j);
                pick_energy = e;
            }
        }
        let j = pick.expect("T <= A guarantees a free beam");
        taken[j] = true;
        beam_indices[user] = j;
    }

    let mut beamforming = Array2::zeros((a, t_users));
    for (t, &j) in beam_indices.iter().enumerate() {
        for m in 0..a {
            beamforming[[m, t]] = dft[[m, j]];
        }
    }
    BeamAssignment {
        beam_indices,
        beamforming,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn test_config(num_users: usize, num_antennas: usize, rician_k: f64, seed: u64) -> ChannelConfig {
        ChannelConfig {
            num_antennas,
            num_users,
            array_rows: 1,
            array_cols: num_antennas,
            rician_k,
            corr_coeff: DEFAULT_CORR_COEFF,
            noise_var: 0.01,
            total_power: 1.0,
            user_angles: default_user_angles(seed, num_users),
            seed,
        }
    }

    #[test]
    fn steering_at_broadside_is_flat() {
        let sv = steering_vector(0.0, 4);
        for m in 0..4 {
            assert_abs_diff_eq!(sv[m].re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(sv[m].im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn steering_at_thirty_degrees() {
        // sin(pi/6) = 1/2, so element 1 has phase pi/2.
        let sv = steering_vector(PI / 6.0, 2);
        let inv_sqrt2 = 1.0 / SQRT_2;
        assert_abs_diff_eq!(sv[0].re, inv_sqrt2, epsilon = 1e-12);
        assert_abs_diff_eq!(sv[0].im, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sv[1].re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sv[1].im, inv_sqrt2, epsilon = 1e-12);
    }

    #[test]
    fn steering_is_unit_norm() {
        for &(angle, a) in &[(0.3, 7usize), (-1.2, 16), (0.77, 33)] {
            let sv = steering_vector(angle, a);
            let norm: f64 = sv.iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn corr_matrix_uncorrelated_is_identity() {
        let m = corr_matrix(3, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(m[[i, j]].re, expect, epsilon = 1e-15);
                assert_eq!(m[[i, j]].im, 0.0);
            }
        }
    }

    #[test]
    fn corr_matrix_two_by_two() {
        let m = corr_matrix(2, 0.5);
        assert_eq!(m[[0, 0]].re, 1.0);
        assert_eq!(m[[0, 1]].re, 0.5);
        assert_eq!(m[[1, 0]].re, 0.5);
        assert_eq!(m[[1, 1]].re, 1.0);
    }

    #[test]
    fn corr_matrix_is_positive_definite() {
        // Oracle: independent symmetric eigendecomposition.
        let m = corr_matrix_real(8, 0.9);
        let nm = nalgebra::DMatrix::from_fn(8, 8, |i, j| m[[i, j]]);
        let eigs = nm.symmetric_eigen().eigenvalues;
        assert!(eigs.iter().all(|&e| e > 0.0), "eigenvalues {eigs:?}");
    }

    #[test]
    fn dft_trivial_sizes() {
        let d1 = dft_matrix(1);
        assert_abs_diff_eq!(d1[[0, 0]].re, 1.0, epsilon = 1e-15);
        let d2 = dft_matrix(2);
        let c = 1.0 / SQRT_2;
        assert_abs_diff_eq!(d2[[0, 0]].re, c, epsilon = 1e-12);
        assert_abs_diff_eq!(d2[[0, 1]].re, c, epsilon = 1e-12);
        assert_abs_diff_eq!(d2[[1, 0]].re, c, epsilon = 1e-12);
        assert_abs_diff_eq!(d2[[1, 1]].re, -c, epsilon = 1e-12);
    }

    fn unitarity_residual(a: usize) -> f64 {
        let d = dft_matrix(a);
        let mut worst = 0.0f64;
        for i in 0..a {
            for j in 0..a {
                let dot: Complex64 = (0..a).map(|m| d[[m, i]].conj() * d[[m, j]]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).norm());
            }
        }
        worst
    }

    #[test]
    fn dft_is_unitary_across_sizes() {
        for a in [1usize, 2, 4, 8, 16, 32, 64] {
            assert!(
                unitarity_residual(a) <= 1e-12,
                "unitarity residual for A={a} too large"
            );
        }
    }

    #[test]
    fn large_k_collapses_to_scaled_steering() {
        let config = test_config(3, 8, 1e6, 18);
        let channel = generate_channel(&config, 0).unwrap();
        for (t, &angle) in config.user_angles.iter().enumerate() {
            let expected = steering_vector(angle, 8).mapv(|z| z * (8f64).sqrt());
            let err: f64 = channel
                .matrix
                .column(t)
                .iter()
                .zip(expected.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let scale: f64 = expected.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(err / scale <= 1e-3, "relative LoS error {}", err / scale);
        }
    }

    #[test]
    fn zero_k_kills_los_exactly_and_preserves_mean_energy() {
        let config = test_config(2, 4, 0.0, 5);
        let sampler = ChannelSampler::new(config.clone()).unwrap();
        assert!(sampler.los.iter().all(|z| z.norm() == 0.0));

        // Monte-Carlo oracle: E||n_t||^2 should be A.
        let draws = 10_000;
        let mut acc = 0.0;
        for slot in 0..draws {
            let ch = sampler.realize(slot);
            for t in 0..config.num_users {
                acc += ch.matrix.column(t).iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
        }
        let mean = acc / (draws * config.num_users as u64) as f64;
        let a = config.num_antennas as f64;
        assert!(
            (mean - a).abs() <= 0.05 * a,
            "mean column energy {mean} deviates from {a} by more than 5%"
        );
    }

    #[test]
    fn same_seed_and_slot_is_bit_identical() {
        let config = test_config(4, 16, DEFAULT_RICIAN_K, 99);
        let a = generate_channel(&config, 7).unwrap();
        let b = generate_channel(&config, 7).unwrap();
        assert_eq!(a.matrix, b.matrix);
        let c = generate_channel(&config, 8).unwrap();
        assert_ne!(a.matrix, c.matrix);
    }

    #[test]
    fn beam_energy_of_codebook_column_is_a_spike() {
        let config = test_config(1, 8, DEFAULT_RICIAN_K, 1);
        let dft = dft_matrix(8);
        let scale = Complex64::new(0.0, 2.0);
        let mut matrix = Array2::zeros((8, 1));
        for m in 0..8 {
            matrix[[m, 0]] = dft[[m, 5]] * scale;
        }
        let channel = ChannelRealization { matrix, config };
        let energy = beam_energy(&channel, 0);
        for (j, &e) in energy.iter().enumerate() {
            if j == 5 {
                assert_abs_diff_eq!(e, 4.0, epsilon = 1e-10);
            } else {
                assert!(e <= 1e-20, "leakage into beam {j}: {e}");
            }
        }
    }

    #[test]
    fn beam_energies_satisfy_parseval() {
        let config = test_config(3, 16, DEFAULT_RICIAN_K, 21);
        let channel = generate_channel(&config, 2).unwrap();
        for t in 0..3 {
            let total: f64 = beam_energy(&channel, t).iter().sum();
            let norm: f64 = channel.matrix.column(t).iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(total, norm, epsilon = 1e-10);
        }
    }

    #[test]
    fn beam_energy_argmax_matches_column_scan() {
        // Oracle: recompute each projection with a bare loop over entries.
        let config = test_config(4, 8, DEFAULT_RICIAN_K, 33);
        for slot in 0..20 {
            let channel = generate_channel(&config, slot).unwrap();
            let dft = dft_matrix(8);
            for t in 0..4 {
                let energy = beam_energy(&channel, t);
                let argmax = energy
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .unwrap()
                    .0;
                let mut best_j = 0;
                let mut best_e = f64::NEG_INFINITY;
                for j in 0..8 {
                    let mut re = 0.0;
                    let mut im = 0.0;
                    for m in 0..8 {
                        let w = dft[[m, j]];
                        let h = channel.matrix[[m, t]];
                        // conj(w) * h expanded by hand
                        re += w.re * h.re + w.im * h.im;
                        im += w.re * h.im - w.im * h.re;
                    }
                    let e = re * re + im * im;
                    if e > best_e {
                        best_e = e;
                        best_j = j;
                    }
                }
                assert_eq!(argmax, best_j);
            }
        }
    }

    #[test]
    fn single_user_takes_global_best_beam() {
        let config = test_config(1, 8, DEFAULT_RICIAN_K, 3);
        let channel = generate_channel(&config, 0).unwrap();
        let energy = beam_energy(&channel, 0);
        let global = energy
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let assignment = select_beams(&channel);
        assert_eq!(assignment.beam_indices, vec![global]);
    }

    #[test]
    fn identical_users_get_distinct_beams() {
        let config = test_config(2, 8, DEFAULT_RICIAN_K, 3);
        let base = generate_channel(&config, 0).unwrap();
        let mut matrix = Array2::zeros((8, 2));
        for m in 0..8 {
            matrix[[m, 0]] = base.matrix[[m, 0]];
            matrix[[m, 1]] = base.matrix[[m, 0]];
        }
        let channel = ChannelRealization {
            matrix,
            config: config.clone(),
        };
        let energy = beam_energy(&channel, 0);
        let mut ranked: Vec<usize> = (0..8).collect();
        ranked.sort_by(|&a, &b| energy[b].partial_cmp(&energy[a]).unwrap());

        let assignment = select_beams(&channel);
        assert_ne!(assignment.beam_indices[0], assignment.beam_indices[1]);
        // Equal best energies tie-break to the lower user index, which takes
        // the best beam; the other user falls back to its second best.
        assert_eq!(assignment.beam_indices[0], ranked[0]);
        assert_eq!(assignment.beam_indices[1], ranked[1]);
    }

    #[test]
    fn assigned_beams_are_pairwise_distinct() {
        let config = test_config(6, 8, DEFAULT_RICIAN_K, 17);
        for slot in 0..50 {
            let channel = generate_channel(&config, slot).unwrap();
            let assignment = select_beams(&channel);
            let mut seen = vec![false; 8];
            for &j in &assignment.beam_indices {
                assert!(!seen[j], "beam {j} assigned twice in slot {slot}");
                seen[j] = true;
            }
        }
    }

    #[test]
    fn beamforming_columns_are_unit_norm() {
        let config = test_config(4, 16, DEFAULT_RICIAN_K, 8);
        let channel = generate_channel(&config, 1).unwrap();
        let assignment = select_beams(&channel);
        for t in 0..4 {
            let norm: f64 = assignment
                .beamforming
                .column(t)
                .iter()
                .map(|z| z.norm_sqr())
                .sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn snr_maps_to_noise_power_and_back() {
        // sigma^2 = P_total * 10^(-snr/10) with P_total = 1.
        for snr_db in [0.0, 5.0, 10.0, 20.0, 25.0] {
            let config = ChannelConfig::from_snr_db(4, 8, snr_db, 3.0, 0.5, 0).unwrap();
            assert_eq!(config.total_power, 1.0);
            assert_abs_diff_eq!(config.noise_var, 10f64.powf(-snr_db / 10.0), epsilon = 1e-15);
            let recovered = -10.0 * (config.noise_var / config.total_power).log10();
            assert_abs_diff_eq!(recovered, snr_db, epsilon = 1e-9);
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut config = test_config(4, 8, DEFAULT_RICIAN_K, 0);
        config.num_users = 9;
        config.user_angles = default_user_angles(0, 9);
        assert!(config.validate().is_err());

        let mut config = test_config(4, 8, DEFAULT_RICIAN_K, 0);
        config.corr_coeff = 1.0;
        assert!(config.validate().is_err());

        let mut config = test_config(4, 8, DEFAULT_RICIAN_K, 0);
        config.array_rows = 3;
        assert!(config.validate().is_err());
    }
}

