//! Scenario description and its flat `key = value` text format.
//!
//! ```text
//! # M=32 antennas, 16 pilots, 5 users
//! M = 32
//! K = 5
//! T_dl = 16
//! power_grid_db = -20:5:40
//! estimators = ls, lmmse, genie
//! precoders = zf, mf
//! channel.model = umi
//! channel.angle_spread_deg = 2
//! ```
//!
//! Lists are comma-separated; a power grid may also be written `start:step:stop`.
//! Unknown and duplicate keys are rejected.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::channel_model::{PathlossMode, UmiModelParams};
use crate::error::{Error, Result};
use crate::estimation::Estimator;
use crate::precoding::PrecoderScheme;
use crate::training::{FeedbackNoiseModel, PilotKind};

pub const DEFAULT_T_COH: usize = 200;
pub const DEFAULT_N_COV: usize = 100;
pub const DEFAULT_N_CH: usize = 200;
pub const DEFAULT_SEED: u64 = 20_240_101;
pub const DEFAULT_PATHLOSS_EXPONENT: f64 = 3.7;
pub const DEFAULT_CELL_RADIUS_M: f64 = 250.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelModelConfig {
    Umi(UmiModelParams),
    ScaledIdentity(f64),
    /// One covariance file shared by every user, or one per user.
    File(Vec<PathBuf>),
}

impl Default for ChannelModelConfig {
    fn default() -> Self {
        ChannelModelConfig::Umi(UmiModelParams::default())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub num_antennas: usize,
    pub num_users: usize,
    pub num_pilots: usize,
    pub coherence_length: usize,
    pub power_grid_db: Vec<f64>,
    pub feedback_power_db: Option<f64>,
    pub feedback_model: FeedbackNoiseModel,
    pub n_cov: usize,
    pub n_ch: usize,
    pub estimators: Vec<Estimator>,
    pub precoders: Vec<PrecoderScheme>,
    pub channel_model: ChannelModelConfig,
    /// ULA element spacing in wavelengths.
    pub antenna_spacing: f64,
    pub pilot_kind: PilotKind,
    pub master_seed: u64,
    /// Observe without training noise (the `P_dl → ∞` limit of the estimates);
    /// data-phase noise still follows the power grid.
    pub noiseless_training: bool,
}

/// `-20, -15, …, 40` dB.
pub fn default_power_grid() -> Vec<f64> {
    (0..13).map(|i| -20.0 + 5.0 * i as f64).collect()
}

impl ScenarioConfig {
    /// Scenario with every optional field at its default.
    pub fn new(num_antennas: usize, num_users: usize, num_pilots: usize) -> Self {
        Self {
            num_antennas,
            num_users,
            num_pilots,
            coherence_length: DEFAULT_T_COH,
            power_grid_db: default_power_grid(),
            feedback_power_db: None,
            feedback_model: FeedbackNoiseModel::default(),
            n_cov: DEFAULT_N_COV,
            n_ch: DEFAULT_N_CH,
            estimators: vec![Estimator::Ls, Estimator::Lmmse, Estimator::Genie],
            precoders: vec![PrecoderScheme::Zf, PrecoderScheme::Mf],
            channel_model: ChannelModelConfig::default(),
            antenna_spacing: 0.5,
            pilot_kind: PilotKind::DftSubset,
            master_seed: DEFAULT_SEED,
            noiseless_training: false,
        }
    }

    pub fn num_trials(&self) -> usize {
        self.n_cov * self.n_ch
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        if self.num_antennas == 0 || self.num_users == 0 || self.num_pilots == 0 {
            return fail("M, K and T_dl must be positive".into());
        }
        if self.num_users > self.num_antennas {
            return fail(format!(
                "K ≤ M violated: K = {}, M = {}",
                self.num_users, self.num_antennas
            ));
        }
        if self.num_pilots > self.num_antennas {
            return fail(format!(
                "T_dl ≤ M violated: T_dl = {}, M = {}",
                self.num_pilots, self.num_antennas
            ));
        }
        if self.num_pilots >= self.coherence_length {
            return fail(format!(
                "prelog requires T_dl < T_coh: T_dl = {}, T_coh = {}",
                self.num_pilots, self.coherence_length
            ));
        }
        if self.power_grid_db.is_empty() {
            return fail("power grid must not be empty".into());
        }
        if self.power_grid_db.iter().any(|p| !p.is_finite()) {
            return fail("power grid entries must be finite".into());
        }
        let distinct: BTreeSet<u64> = self.power_grid_db.iter().map(|p| p.to_bits()).collect();
        if distinct.len() != self.power_grid_db.len() {
            return fail("power grid contains duplicate values".into());
        }
        if let Some(p) = self.feedback_power_db {
            if !p.is_finite() {
                return fail("feedback power must be finite".into());
            }
        }
        if self.n_cov == 0 || self.n_ch == 0 {
            return fail("n_cov and n_ch must be positive".into());
        }
        if self.estimators.is_empty() || self.precoders.is_empty() {
            return fail("at least one estimator and one precoder are required".into());
        }
        for e in &self.estimators {
            if !matches!(e, Estimator::Ls | Estimator::Lmmse | Estimator::Genie) {
                return fail(format!(
                    "estimator `{e}` cannot be swept (use ls, lmmse, genie)"
                ));
            }
        }
        if has_duplicates(&self.estimators) || has_duplicates(&self.precoders) {
            return fail("estimator and precoder lists must not repeat entries".into());
        }
        if !(self.antenna_spacing > 0.0 && self.antenna_spacing.is_finite()) {
            return fail(format!(
                "antenna spacing must be positive, got {}",
                self.antenna_spacing
            ));
        }
        match &self.channel_model {
            ChannelModelConfig::Umi(p) => p.validate().or_else(|e| fail(e.to_string()))?,
            ChannelModelConfig::ScaledIdentity(c) => {
                if !(*c > 0.0 && c.is_finite()) {
                    return fail(format!("scaled identity needs c > 0, got {c}"));
                }
            }
            ChannelModelConfig::File(paths) => {
                if paths.len() != 1 && paths.len() != self.num_users {
                    return fail(format!(
                        "channel.path needs one file or K = {} files, got {}",
                        self.num_users,
                        paths.len()
                    ));
                }
            }
        }
        Ok(())
    }

    /// Serializes to the text format accepted by [`parse_config`].
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let join = |items: Vec<String>| items.join(", ");
        let _ = writeln!(s, "M = {}", self.num_antennas);
        let _ = writeln!(s, "K = {}", self.num_users);
        let _ = writeln!(s, "T_dl = {}", self.num_pilots);
        let _ = writeln!(s, "T_coh = {}", self.coherence_length);
        let _ = writeln!(
            s,
            "power_grid_db = {}",
            join(self.power_grid_db.iter().map(|p| p.to_string()).collect())
        );
        if let Some(p) = self.feedback_power_db {
            let _ = writeln!(s, "feedback_power_db = {p}");
        }
        let _ = writeln!(s, "feedback_model = {}", self.feedback_model.as_str());
        let _ = writeln!(s, "n_cov = {}", self.n_cov);
        let _ = writeln!(s, "n_ch = {}", self.n_ch);
        let _ = writeln!(
            s,
            "estimators = {}",
            join(self.estimators.iter().map(|e| e.to_string()).collect())
        );
        let _ = writeln!(
            s,
            "precoders = {}",
            join(self.precoders.iter().map(|p| p.to_string()).collect())
        );
        let _ = writeln!(s, "pilot_kind = {}", self.pilot_kind);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(s, "noiseless_training = {}", self.noiseless_training);
        let _ = writeln!(s, "channel.spacing = {}", self.antenna_spacing);
        match &self.channel_model {
            ChannelModelConfig::Umi(p) => {
                let _ = writeln!(s, "channel.model = umi");
                let _ = writeln!(s, "channel.num_paths = {}", p.num_paths);
                let _ = writeln!(s, "channel.num_rays = {}", p.num_rays);
                let _ = writeln!(s, "channel.cluster_power_decay = {}", p.cluster_power_decay);
                let _ = writeln!(
                    s,
                    "channel.angle_spread_deg = {}",
                    p.per_cluster_angle_spread.to_degrees()
                );
                let _ = writeln!(
                    s,
                    "channel.azimuth_min_deg = {}",
                    p.azimuth_range.0.to_degrees()
                );
                let _ = writeln!(
                    s,
                    "channel.azimuth_max_deg = {}",
                    p.azimuth_range.1.to_degrees()
                );
                match p.pathloss_mode {
                    PathlossMode::UnitTrace => {
                        let _ = writeln!(s, "channel.pathloss = unit_trace");
                    }
                    PathlossMode::DistanceBased {
                        exponent,
                        cell_radius_m,
                    } => {
                        let _ = writeln!(s, "channel.pathloss = distance_based");
                        let _ = writeln!(s, "channel.pathloss_exponent = {exponent}");
                        let _ = writeln!(s, "channel.cell_radius_m = {cell_radius_m}");
                    }
                }
            }
            ChannelModelConfig::ScaledIdentity(c) => {
                let _ = writeln!(s, "channel.model = scaled_identity");
                let _ = writeln!(s, "channel.scale = {c}");
            }
            ChannelModelConfig::File(paths) => {
                let _ = writeln!(s, "channel.model = file");
                let _ = writeln!(
                    s,
                    "channel.path = {}",
                    join(paths.iter().map(|p| p.display().to_string()).collect())
                );
            }
        }
        s
    }
}

fn has_duplicates<T: Ord + Copy>(items: &[T]) -> bool {
    items.iter().copied().collect::<BTreeSet<_>>().len() != items.len()
}

/// Reads and validates a scenario file. Relative covariance paths resolve
/// against the file's directory.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = parse_config(&text).map_err(|e| match e {
        Error::Parse { line, message, .. } => Error::Parse {
            path: Some(path.to_path_buf()),
            line,
            message,
        },
        other => other,
    })?;
    if let ChannelModelConfig::File(paths) = &mut cfg.channel_model {
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        for p in paths.iter_mut() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
    Ok(cfg)
}

/// Parses and validates the text format.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| parse_err(line_no, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim().to_string();
        if entries.iter().any(|(_, k, _)| *k == key) {
            return Err(parse_err(line_no, format!("duplicate key `{key}`")));
        }
        entries.push((line_no, key, value.trim().to_string()));
    }

    let mut get = |name: &str| -> Option<(usize, String)> {
        let pos = entries.iter().position(|(_, k, _)| k == name)?;
        let (line, _, value) = entries.remove(pos);
        Some((line, value))
    };

    let required = |v: Option<(usize, String)>, name: &str| -> Result<(usize, String)> {
        v.ok_or_else(|| parse_err(0, format!("missing required key `{name}`")))
    };

    let (l, v) = required(get("M"), "M")?;
    let m: usize = parse_num(l, "M", &v)?;
    let (l, v) = required(get("K"), "K")?;
    let k: usize = parse_num(l, "K", &v)?;
    let (l, v) = required(get("T_dl"), "T_dl")?;
    let t: usize = parse_num(l, "T_dl", &v)?;
    let mut cfg = ScenarioConfig::new(m, k, t);

    if let Some((l, v)) = get("T_coh") {
        cfg.coherence_length = parse_num(l, "T_coh", &v)?;
    }
    if let Some((l, v)) = get("power_grid_db") {
        cfg.power_grid_db = parse_grid(l, &v)?;
    }
    if let Some((l, v)) = get("feedback_power_db") {
        cfg.feedback_power_db = match v.as_str() {
            "none" | "" => None,
            _ => Some(parse_num(l, "feedback_power_db", &v)?),
        };
    }
    if let Some((l, v)) = get("feedback_model") {
        cfg.feedback_model = v.parse().map_err(|e: Error| parse_err(l, e.to_string()))?;
    }
    if let Some((l, v)) = get("n_cov") {
        cfg.n_cov = parse_num(l, "n_cov", &v)?;
    }
    if let Some((l, v)) = get("n_ch") {
        cfg.n_ch = parse_num(l, "n_ch", &v)?;
    }
    if let Some((l, v)) = get("estimators") {
        cfg.estimators = parse_list(l, &v)?;
    }
    if let Some((l, v)) = get("precoders") {
        cfg.precoders = parse_list(l, &v)?;
    }
    if let Some((l, v)) = get("pilot_kind") {
        cfg.pilot_kind = v.parse().map_err(|e: Error| parse_err(l, e.to_string()))?;
    }
    if let Some((l, v)) = get("master_seed") {
        cfg.master_seed = parse_num(l, "master_seed", &v)?;
    }
    if let Some((l, v)) = get("noiseless_training") {
        cfg.noiseless_training = parse_num(l, "noiseless_training", &v)?;
    }
    if let Some((l, v)) = get("channel.spacing") {
        cfg.antenna_spacing = parse_num(l, "channel.spacing", &v)?;
    }

    let model = get("channel.model");
    let model_name = model
        .as_ref()
        .map_or("umi", |(_, v)| v.as_str())
        .to_string();
    let model_line = model.map_or(0, |(l, _)| l);
    cfg.channel_model = match model_name.as_str() {
        "umi" => {
            let mut p = UmiModelParams::default();
            if let Some((l, v)) = get("channel.num_paths") {
                p.num_paths = parse_num(l, "channel.num_paths", &v)?;
            }
            if let Some((l, v)) = get("channel.num_rays") {
                p.num_rays = parse_num(l, "channel.num_rays", &v)?;
            }
            if let Some((l, v)) = get("channel.cluster_power_decay") {
                p.cluster_power_decay = parse_num(l, "channel.cluster_power_decay", &v)?;
            }
            if let Some((l, v)) = get("channel.angle_spread_deg") {
                p.per_cluster_angle_spread =
                    parse_num::<f64>(l, "channel.angle_spread_deg", &v)?.to_radians();
            }
            if let Some((l, v)) = get("channel.azimuth_min_deg") {
                p.azimuth_range.0 =
                    parse_num::<f64>(l, "channel.azimuth_min_deg", &v)?.to_radians();
            }
            if let Some((l, v)) = get("channel.azimuth_max_deg") {
                p.azimuth_range.1 =
                    parse_num::<f64>(l, "channel.azimuth_max_deg", &v)?.to_radians();
            }
            let exponent = match get("channel.pathloss_exponent") {
                Some((l, v)) => Some(parse_num(l, "channel.pathloss_exponent", &v)?),
                None => None,
            };
            let radius = match get("channel.cell_radius_m") {
                Some((l, v)) => Some(parse_num(l, "channel.cell_radius_m", &v)?),
                None => None,
            };
            p.pathloss_mode = match get("channel.pathloss") {
                None => PathlossMode::UnitTrace,
                Some((_, v)) if v == "unit_trace" => PathlossMode::UnitTrace,
                Some((_, v)) if v == "distance_based" => PathlossMode::DistanceBased {
                    exponent: exponent.unwrap_or(DEFAULT_PATHLOSS_EXPONENT),
                    cell_radius_m: radius.unwrap_or(DEFAULT_CELL_RADIUS_M),
                },
                Some((l, v)) => {
                    return Err(parse_err(l, format!("unknown pathloss mode `{v}`")));
                }
            };
            ChannelModelConfig::Umi(p)
        }
        "scaled_identity" => {
            let (l, v) = get("channel.scale").ok_or_else(|| {
                parse_err(model_line, "scaled_identity needs `channel.scale`".into())
            })?;
            ChannelModelConfig::ScaledIdentity(parse_num(l, "channel.scale", &v)?)
        }
        "file" => {
            let (_, v) = get("channel.path")
                .ok_or_else(|| parse_err(model_line, "file model needs `channel.path`".into()))?;
            ChannelModelConfig::File(
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from)
                    .collect(),
            )
        }
        other => {
            return Err(parse_err(
                model_line,
                format!("unknown channel model `{other}`"),
            ))
        }
    };

    if let Some((line, key, _)) = entries.first() {
        return Err(parse_err(*line, format!("unknown key `{key}`")));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_err(line: usize, message: String) -> Error {
    Error::Parse {
        path: None,
        line,
        message,
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.trim()
        .parse()
        .map_err(|e| parse_err(line, format!("bad value `{v}` for `{key}`: {e}")))
}

fn parse_list<T: std::str::FromStr<Err = Error>>(line: usize, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e: Error| parse_err(line, e.to_string())))
        .collect()
}

/// `a, b, c`, `start:step:stop` or `start..stop step s` (inclusive).
fn parse_grid(line: usize, v: &str) -> Result<Vec<f64>> {
    let v = v
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .trim();
    let range = if let Some((span, step)) = v.split_once("step") {
        span.split_once("..").map(|(a, b)| (a, step, b))
    } else {
        let parts: Vec<&str> = v.split(':').collect();
        (parts.len() == 3).then(|| (parts[0], parts[1], parts[2]))
    };
    if let Some((start, step, stop)) = range {
        let start: f64 = parse_num(line, "power_grid_db", start)?;
        let step: f64 = parse_num(line, "power_grid_db", step)?;
        let stop: f64 = parse_num(line, "power_grid_db", stop)?;
        if !(step > 0.0) || stop < start {
            return Err(parse_err(
                line,
                "power range needs step > 0 and stop >= start".into(),
            ));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| start + step * i as f64).collect());
    }
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(line, "power_grid_db", s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config("M = 32\nK = 5\nT_dl = 16\npower_grid_db = -20:5:40\n").unwrap();
        assert_eq!(cfg.coherence_length, 200);
        assert_eq!(cfg.n_cov, 100);
        assert_eq!(cfg.n_ch, 200);
        assert_eq!(cfg.pilot_kind, PilotKind::DftSubset);
        assert_eq!(cfg.power_grid_db, default_power_grid());
        assert_eq!(cfg.channel_model, ChannelModelConfig::default());
    }

    #[test]
    fn bracketed_range_syntax() {
        let cfg = parse_config("M: 32\nK: 5\nT_dl: 16\n").unwrap();
        assert_eq!(cfg.num_pilots, 16);
        let cfg =
            parse_config("M = 32\nK = 5\nT_dl = 16\npower_grid_db = [-20..40 step 5]\n").unwrap();
        assert_eq!(cfg.power_grid_db.len(), 13);
        assert_eq!(cfg.power_grid_db[12], 40.0);
    }

    #[test]
    fn too_many_pilots() {
        let err = parse_config("M = 32\nK = 5\nT_dl = 64\n").unwrap_err();
        assert!(
            matches!(&err, Error::Validation(m) if m.contains("T_dl ≤ M")),
            "{err}"
        );
    }

    #[test]
    fn no_data_symbols_left() {
        let err = parse_config("M = 256\nK = 5\nT_dl = 200\nT_coh = 200\n").unwrap_err();
        assert!(
            matches!(&err, Error::Validation(m) if m.contains("prelog")),
            "{err}"
        );
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_config("M = 32\nK = 5\nT_dl = 16\n\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }));
    }

    #[test]
    fn bad_value_reports_line() {
        let err = parse_config("M = 32\nK = five\nT_dl = 16\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_config("M = 32\nK = 5\nM = 16\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn missing_required_key() {
        assert!(matches!(
            parse_config("M = 32\nK = 5\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn channel_section() {
        let text = "M = 64\nK = 10\nT_dl = 32\nchannel.model = umi\nchannel.pathloss = distance_based\n\
                    channel.angle_spread_deg = 5\nchannel.azimuth_min_deg = -60\nchannel.azimuth_max_deg = 60\n";
        let cfg = parse_config(text).unwrap();
        let ChannelModelConfig::Umi(p) = &cfg.channel_model else {
            panic!("expected umi");
        };
        assert!((p.per_cluster_angle_spread - 5f64.to_radians()).abs() < 1e-15);
        assert_eq!(
            p.pathloss_mode,
            PathlossMode::DistanceBased {
                exponent: 3.7,
                cell_radius_m: 250.0
            }
        );
        let cfg = parse_config(
            "M = 4\nK = 2\nT_dl = 2\nchannel.model = scaled_identity\nchannel.scale = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.channel_model, ChannelModelConfig::ScaledIdentity(2.0));
        assert!(parse_config("M = 4\nK = 2\nT_dl = 2\nchannel.model = scaled_identity\n").is_err());
        // channel keys of another model are unknown keys
        assert!(parse_config("M = 4\nK = 2\nT_dl = 2\nchannel.model = scaled_identity\nchannel.scale = 1\nchannel.num_rays = 3\n").is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let mut cfg = ScenarioConfig::new(16, 3, 8);
        cfg.feedback_power_db = Some(10.0);
        cfg.estimators = vec![Estimator::Ls, Estimator::Genie];
        cfg.precoders = vec![PrecoderScheme::Mf];
        cfg.master_seed = 99;
        cfg.noiseless_training = true;
        cfg.channel_model = ChannelModelConfig::Umi(UmiModelParams {
            pathloss_mode: PathlossMode::DistanceBased {
                exponent: 3.0,
                cell_radius_m: 100.0,
            },
            ..Default::default()
        });
        let back = parse_config(&cfg.to_config_string()).unwrap();
        assert_eq!(back.num_antennas, cfg.num_antennas);
        assert_eq!(back.estimators, cfg.estimators);
        assert_eq!(back.precoders, cfg.precoders);
        assert_eq!(back.feedback_power_db, cfg.feedback_power_db);
        assert_eq!(back.master_seed, 99);
        assert!(back.noiseless_training);
        let (ChannelModelConfig::Umi(a), ChannelModelConfig::Umi(b)) =
            (&back.channel_model, &cfg.channel_model)
        else {
            panic!("expected umi");
        };
        assert_eq!(a.pathloss_mode, b.pathloss_mode);
        assert!((a.per_cluster_angle_spread - b.per_cluster_angle_spread).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_sweepable_estimator() {
        let err = parse_config("M = 8\nK = 2\nT_dl = 4\nestimators = asymptotic_ls\n").unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn file_model_needs_one_or_k_paths() {
        let mut cfg = ScenarioConfig::new(4, 3, 2);
        cfg.channel_model = ChannelModelConfig::File(vec!["a".into(), "b".into()]);
        assert!(cfg.validate().is_err());
        cfg.channel_model = ChannelModelConfig::File(vec!["a".into()]);
        assert!(cfg.validate().is_ok());
    }
}
