//! Experiment specification and the key=value config format.
//!
//! Configs are UTF-8 text: `key=value` tokens separated by whitespace or
//! newlines, `#` comments to end of line. List-valued keys take
//! comma-separated values; giving a list to exactly one of `users`,
//! `antennas`, or `snr_db` selects that key as the sweep axis unless `axis=`
//! names one explicitly. An empty file is a valid spec with every default
//! in place (a convergence run).

use std::path::PathBuf;

use crate::chanmod::{ChannelConfig, DEFAULT_CORR_COEFF, DEFAULT_RICIAN_K};
use crate::error::{Error, Result};
use crate::qrl::{
    GroverIters, OracleThreshold, TrainConfig, DEFAULT_BATCH_SIZE, DEFAULT_EPOCHS,
    DEFAULT_LEARNING_RATE, DEFAULT_THRESHOLD_QUANTILE, DEFAULT_VALIDATION_SLOTS,
};
use crate::qsim::MAX_QUBITS;
use crate::ratemod::{DEFAULT_FORGETTING, DEFAULT_GUARD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Epochs,
    Users,
    Antennas,
    Snr,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Epochs => "epochs",
            Axis::Users => "users",
            Axis::Antennas => "antennas",
            Axis::Snr => "snr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Qrl,
    Exhaustive,
    Greedy,
    Random,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Qrl,
        Method::Exhaustive,
        Method::Greedy,
        Method::Random,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::Qrl => "qrl",
            Method::Exhaustive => "exhaustive",
            Method::Greedy => "greedy",
            Method::Random => "random",
        }
    }

    /// Stable stream tag for RNG derivation; independent of listing order.
    pub fn stream_id(self) -> u64 {
        match self {
            Method::Qrl => 1,
            Method::Exhaustive => 2,
            Method::Greedy => 3,
            Method::Random => 4,
        }
    }
}

/// A fully resolved experiment: sweep axis and grid, fixed model and
/// training parameters, methods to compare, and output location.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub axis: Axis,
    pub users: Vec<usize>,
    pub antennas: Vec<usize>,
    pub snr_db: Vec<f64>,
    pub methods: Vec<Method>,
    pub realizations: usize,
    pub seed: u64,
    pub output: PathBuf,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub threshold_quantile: f64,
    pub grover_iters: GroverIters,
    pub oracle_threshold: OracleThreshold,
    pub rician_k: f64,
    pub corr_coeff: f64,
    pub forgetting: f64,
    pub guard: f64,
    pub validation_slots: usize,
    pub array_rows: usize,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            axis: Axis::Epochs,
            users: vec![6],
            antennas: vec![16],
            snr_db: vec![20.0],
            methods: Method::ALL.to_vec(),
            realizations: 200,
            seed: 0,
            output: PathBuf::from("results.csv"),
            epochs: DEFAULT_EPOCHS,
            batch_size: DEFAULT_BATCH_SIZE,
            learning_rate: DEFAULT_LEARNING_RATE,
            threshold_quantile: DEFAULT_THRESHOLD_QUANTILE,
            grover_iters: GroverIters::Auto,
            oracle_threshold: OracleThreshold::Adaptive,
            rician_k: DEFAULT_RICIAN_K,
            corr_coeff: DEFAULT_CORR_COEFF,
            forgetting: DEFAULT_FORGETTING,
            guard: DEFAULT_GUARD,
            validation_slots: DEFAULT_VALIDATION_SLOTS,
            array_rows: 1,
        }
    }
}

impl ExperimentSpec {
    /// Channel model for one grid point. The caller supplies the
    /// realization-specific seed.
    pub fn channel_config(
        &self,
        users: usize,
        antennas: usize,
        snr_db: f64,
        seed: u64,
    ) -> Result<ChannelConfig> {
        let config = ChannelConfig {
            num_antennas: antennas,
            num_users: users,
            array_rows: self.array_rows,
            array_cols: antennas / self.array_rows,
            rician_k: self.rician_k,
            corr_coeff: self.corr_coeff,
            noise_var: 10f64.powf(-snr_db / 10.0),
            total_power: 1.0,
            user_angles: crate::chanmod::default_user_angles(seed, users),
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    /// Training configuration for one grid point.
    pub fn train_config(
        &self,
        users: usize,
        antennas: usize,
        snr_db: f64,
        seed: u64,
    ) -> Result<TrainConfig> {
        Ok(TrainConfig {
            learning_rate: self.learning_rate,
            batch_size: self.batch_size,
            epochs: self.epochs,
            grover_iters: self.grover_iters,
            oracle_threshold: self.oracle_threshold,
            threshold_quantile: self.threshold_quantile,
            forgetting: self.forgetting,
            guard: self.guard,
            seed,
            channel_config: self.channel_config(users, antennas, snr_db, seed)?,
            validation_slots: self.validation_slots,
        })
    }

    /// Grid points along the sweep axis as `(users, antennas, snr_db)`.
    pub fn grid(&self) -> Vec<(usize, usize, f64)> {
        match self.axis {
            Axis::Epochs => vec![(self.users[0], self.antennas[0], self.snr_db[0])],
            Axis::Users => self
                .users
                .iter()
                .map(|&t| (t, self.antennas[0], self.snr_db[0]))
                .collect(),
            Axis::Antennas => self
                .antennas
                .iter()
                .map(|&a| (self.users[0], a, self.snr_db[0]))
                .collect(),
            Axis::Snr => self
                .snr_db
                .iter()
                .map(|&s| (self.users[0], self.antennas[0], s))
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.users.is_empty() || self.antennas.is_empty() || self.snr_db.is_empty() {
            return fail("users, antennas, and snr_db must be non-empty".into());
        }
        if self.methods.is_empty() {
            return fail("at least one method is required".into());
        }
        if self.realizations == 0 {
            return fail("realizations must be at least 1".into());
        }
        match self.axis {
            Axis::Users => ensure_increasing_usize(&self.users, "users")?,
            Axis::Antennas => ensure_increasing_usize(&self.antennas, "antennas")?,
            Axis::Snr => ensure_increasing_f64(&self.snr_db, "snr_db")?,
            Axis::Epochs => {}
        }
        let lists = [
            (self.users.len(), Axis::Users, "users"),
            (self.antennas.len(), Axis::Antennas, "antennas"),
            (self.snr_db.len(), Axis::Snr, "snr_db"),
        ];
        for (len, axis, key) in lists {
            if len > 1 && self.axis != axis {
                return fail(format!(
                    "key `{key}` lists multiple values but the sweep axis is `{}`",
                    self.axis.name()
                ));
            }
        }
        for &(users, antennas, _) in &self.grid() {
            if users > antennas {
                return fail(format!(
                    "infeasible combination: {users} users exceed {antennas} antennas"
                ));
            }
            if antennas % self.array_rows != 0 {
                return fail(format!(
                    "array_rows {} does not divide antenna count {antennas}",
                    self.array_rows
                ));
            }
            if users > MAX_QUBITS && self.methods.contains(&Method::Qrl) {
                return fail(format!(
                    "{users} users exceed the {MAX_QUBITS}-qubit cap of the qrl method"
                ));
            }
            if users > crate::baselines::MAX_EXHAUSTIVE_USERS
                && self.methods.contains(&Method::Exhaustive)
            {
                return fail(format!(
                    "{users} users exceed the exhaustive method's {} cap",
                    crate::baselines::MAX_EXHAUSTIVE_USERS
                ));
            }
        }
        // Remaining scalar ranges are enforced where they are consumed.
        self.train_config(self.users[0], self.antennas[0], self.snr_db[0], self.seed)?
            .validate()
    }
}

fn ensure_increasing_usize(values: &[usize], key: &str) -> Result<()> {
    if values.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "{key} values must be strictly increasing"
        )))
    }
}

fn ensure_increasing_f64(values: &[f64], key: &str) -> Result<()> {
    if values.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "{key} values must be strictly increasing"
        )))
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::ConfigSyntax {
        line,
        message: message.into(),
    }
}

fn parse_scalar<T: std::str::FromStr>(line: usize, key: &str, value: &str, what: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| syntax(line, format!("key `{key}`: invalid {what} `{value}`")))
}

fn parse_list<T: std::str::FromStr>(line: usize, key: &str, value: &str, what: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|item| parse_scalar(line, key, item.trim(), what))
        .collect()
}

/// Parse the documented key=value format into a validated spec with all
/// defaults filled in. Unknown and duplicate keys are rejected with their
/// line number.
pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::default();
    let mut seen: Vec<(String, usize)> = Vec::new();
    let mut explicit_axis: Option<Axis> = None;
    let mut list_keys: Vec<&'static str> = Vec::new();

    for (line_index, raw_line) in text.lines().enumerate() {
        let line = line_index + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        for token in content.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| syntax(line, format!("expected key=value, got `{token}`")))?;
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                return Err(syntax(line, format!("key `{key}` has an empty value")));
            }
            if let Some((_, first)) = seen.iter().find(|(k, _)| k == key) {
                return Err(syntax(
                    line,
                    format!("key `{key}` already given on line {first}"),
                ));
            }
            seen.push((key.to_string(), line));

            match key {
                "axis" => {
                    explicit_axis = Some(match value {
                        "epochs" => Axis::Epochs,
                        "users" => Axis::Users,
                        "antennas" => Axis::Antennas,
                        "snr" | "snr_db" => Axis::Snr,
                        other => {
                            return Err(syntax(
                                line,
                                format!("key `axis`: unknown axis `{other}` (expected epochs|users|antennas|snr)"),
                            ))
                        }
                    });
                }
                "users" => {
                    spec.users = parse_list(line, key, value, "integer")?;
                    if spec.users.len() > 1 {
                        list_keys.push("users");
                    }
                }
                "antennas" => {
                    spec.antennas = parse_list(line, key, value, "integer")?;
                    if spec.antennas.len() > 1 {
                        list_keys.push("antennas");
                    }
                }
                "snr_db" => {
                    spec.snr_db = parse_list(line, key, value, "number")?;
                    if spec.snr_db.len() > 1 {
                        list_keys.push("snr_db");
                    }
                }
                "methods" => {
                    let mut methods = Vec::new();
                    for item in value.split(',') {
                        let method = match item.trim() {
                            "qrl" => Method::Qrl,
                            "exhaustive" => Method::Exhaustive,
                            "greedy" => Method::Greedy,
                            "random" => Method::Random,
                            other => {
                                return Err(syntax(
                                    line,
                                    format!("key `methods`: unknown method `{other}`"),
                                ))
                            }
                        };
                        if methods.contains(&method) {
                            return Err(syntax(
                                line,
                                format!("key `methods`: method `{}` listed twice", method.label()),
                            ));
                        }
                        methods.push(method);
                    }
                    spec.methods = methods;
                }
                "epochs" => spec.epochs = parse_scalar(line, key, value, "integer")?,
                "batch_size" => spec.batch_size = parse_scalar(line, key, value, "integer")?,
                "learning_rate" => {
                    spec.learning_rate = parse_scalar(line, key, value, "number")?
                }
                "quantile" => {
                    spec.threshold_quantile = parse_scalar(line, key, value, "number")?
                }
                "grover_iters" => {
                    spec.grover_iters = if value == "auto" {
                        GroverIters::Auto
                    } else {
                        GroverIters::Fixed(parse_scalar(line, key, value, "integer")?)
                    };
                }
                "tau" => {
                    spec.oracle_threshold = if value == "adaptive" {
                        OracleThreshold::Adaptive
                    } else {
                        OracleThreshold::Fixed(parse_scalar(line, key, value, "number")?)
                    };
                }
                "rician_k" => spec.rician_k = parse_scalar(line, key, value, "number")?,
                "corr_coeff" => spec.corr_coeff = parse_scalar(line, key, value, "number")?,
                "forgetting" => spec.forgetting = parse_scalar(line, key, value, "number")?,
                "guard" => spec.guard = parse_scalar(line, key, value, "number")?,
                "realizations" => {
                    spec.realizations = parse_scalar(line, key, value, "integer")?
                }
                "validation_slots" => {
                    spec.validation_slots = parse_scalar(line, key, value, "integer")?
                }
                "seed" => spec.seed = parse_scalar(line, key, value, "integer")?,
                "out" => spec.output = PathBuf::from(value),
                "array_rows" => spec.array_rows = parse_scalar(line, key, value, "integer")?,
                other => {
                    return Err(syntax(line, format!("unknown key `{other}`")));
                }
            }
        }
    }

    spec.axis = match explicit_axis {
        Some(axis) => axis,
        None => match list_keys.as_slice() {
            [] => Axis::Epochs,
            ["users"] => Axis::Users,
            ["antennas"] => Axis::Antennas,
            ["snr_db"] => Axis::Snr,
            several => {
                return Err(Error::InvalidConfig(format!(
                    "multiple list-valued keys {several:?}; give `axis=` to pick the sweep axis"
                )))
            }
        },
    };

    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_all_defaults() {
        let spec = parse_config("").unwrap();
        assert_eq!(spec, ExperimentSpec::default());
        assert_eq!(spec.axis, Axis::Epochs);
        assert_eq!(spec.epochs, 500);
    }

    #[test]
    fn user_sweep_is_inferred_from_the_list() {
        let spec = parse_config("users=2,4,6 antennas=32 snr_db=20").unwrap();
        assert_eq!(spec.axis, Axis::Users);
        assert_eq!(spec.users, vec![2, 4, 6]);
        assert_eq!(spec.antennas, vec![32]);
        assert_eq!(spec.snr_db, vec![20.0]);
    }

    #[test]
    fn infeasible_user_antenna_combo_is_rejected() {
        let err = parse_config("antennas=8 users=16").unwrap_err();
        assert!(err.to_string().contains("16 users exceed 8 antennas"), "{err}");
    }

    #[test]
    fn unknown_keys_carry_line_numbers() {
        let err = parse_config("seed=1\nbogus=3\n").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("line 2"), "{message}");
        assert!(message.contains("bogus"), "{message}");
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let err = parse_config("seed=1\nseed=2\n").unwrap_err();
        assert!(err.to_string().contains("already given on line 1"), "{err}");
    }

    #[test]
    fn malformed_values_name_the_key() {
        let err = parse_config("users=two").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("`users`"), "{message}");
        assert!(message.contains("two"), "{message}");
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let spec = parse_config("# sweep\nseed=9 # trailing\n\nantennas=8,16,32\nusers=4\n").unwrap();
        assert_eq!(spec.seed, 9);
        assert_eq!(spec.axis, Axis::Antennas);
    }

    #[test]
    fn two_lists_without_axis_are_ambiguous() {
        assert!(parse_config("users=2,4 antennas=16,32").is_err());
        // An explicit axis resolves the ambiguity only if the other list goes.
        let spec = parse_config("axis=antennas users=4 antennas=16,32").unwrap();
        assert_eq!(spec.axis, Axis::Antennas);
    }

    #[test]
    fn non_increasing_axis_values_are_rejected() {
        assert!(parse_config("users=4,2,6").is_err());
        assert!(parse_config("snr_db=0,5,5").is_err());
    }

    #[test]
    fn threshold_and_iterations_accept_both_forms() {
        let spec = parse_config("tau=1.25 grover_iters=3").unwrap();
        assert_eq!(spec.oracle_threshold, OracleThreshold::Fixed(1.25));
        assert_eq!(spec.grover_iters, GroverIters::Fixed(3));
        let spec = parse_config("tau=adaptive grover_iters=auto").unwrap();
        assert_eq!(spec.oracle_threshold, OracleThreshold::Adaptive);
        assert_eq!(spec.grover_iters, GroverIters::Auto);
    }
}
