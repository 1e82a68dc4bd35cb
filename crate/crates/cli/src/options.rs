//! Flag/config-file resolution for `run`.
//!
//! A config file holds one `key = value` pair per line, `#` starts a
//! comment, and keys equal the long flag names (hyphens or underscores
//! both accepted). Command-line flags win over file entries.

use std::collections::HashMap;
use std::path::PathBuf;

use mq_spinsim_core::coupling::{CouplingKind, CouplingModel};
use mq_spinsim_core::experiment::{
    ExperimentConfig, OutputFormat, PairSelection, SignalConfig,
};
use mq_spinsim_core::{SimError, SimResult};

use crate::RunArgs;

pub struct RunOptions {
    pub config: ExperimentConfig,
    pub format: OutputFormat,
    pub out: PathBuf,
    pub strict: bool,
}

impl RunOptions {
    pub fn resolve(args: &RunArgs) -> SimResult<Self> {
        let file = match &args.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        let merged = Merged { file };

        let spins = merged.get("spins", args.spins.as_ref())?.unwrap_or(8);
        let kind = match merged
            .get_str("model", args.model.as_deref())?
            .unwrap_or_else(|| "nn".into())
            .as_str()
        {
            "nn" => CouplingKind::NearestNeighbor,
            "full" => CouplingKind::AllPairs,
            other => {
                return Err(SimError::Argument(format!(
                    "unknown model '{other}' (expected nn or full)"
                )))
            }
        };
        let d_nn = merged.get("d-nn", args.d_nn.as_ref())?.unwrap_or(1.0);
        let beta_norm = merged
            .get("beta-norm", args.beta_norm.as_ref())?
            .unwrap_or(10.0);
        let tau_max = merged.get("tau-max", args.tau_max.as_ref())?.unwrap_or(20.0);
        let tau_steps = merged
            .get("tau-steps", args.tau_steps.as_ref())?
            .unwrap_or(201);

        let mut config = ExperimentConfig::new(spins, CouplingModel { kind, d_nn });
        config.thermal.beta_h_norm = beta_norm;
        config.tau_end = tau_max;
        config.tau_steps = tau_steps;

        if let Some(spec) = merged.get_str("pairs", args.pairs.as_deref())? {
            config.pairs = parse_pairs(&spec)?;
        }
        if let Some(spec) = merged.get_str("observables", args.observables.as_deref())? {
            let (coherences, concurrences, eof) = parse_observables(&spec)?;
            config.outputs.coherences = coherences;
            config.outputs.concurrences = concurrences;
            config.outputs.eof = eof;
        }

        let offset = merged.get("signal-offset", args.signal_offset.as_ref())?;
        let s_tmax = merged.get("signal-tmax", args.signal_tmax.as_ref())?;
        let s_steps = merged.get("signal-steps", args.signal_steps.as_ref())?;
        config.outputs.signal = match (offset, s_tmax, s_steps) {
            (None, None, None) => None,
            (Some(delta_omega), Some(t_max), Some(t_steps)) => {
                Some(SignalConfig { delta_omega, t_max, t_steps })
            }
            _ => {
                return Err(SimError::Argument(
                    "signal output needs --signal-offset, --signal-tmax, and \
                     --signal-steps together"
                        .into(),
                ))
            }
        };

        let format: OutputFormat = merged
            .get_str("format", args.format.as_deref())?
            .unwrap_or_else(|| "csv".into())
            .parse()?;
        let out = merged
            .get_str("out", args.out.as_deref().and_then(|p| p.to_str()))?
            .map(PathBuf::from)
            .ok_or_else(|| SimError::Argument("--out is required".into()))?;
        let strict = args.strict
            || merged
                .file_value("strict")
                .map(|v| parse_value::<bool>("strict", v))
                .transpose()?
                .unwrap_or(false);

        config.validate()?;
        Ok(Self { config, format, out, strict })
    }
}

struct Merged {
    file: HashMap<String, String>,
}

impl Merged {
    fn file_value(&self, key: &str) -> Option<&str> {
        self.file.get(key).map(String::as_str)
    }

    /// Flag value if given, else the parsed file entry.
    fn get<T: std::str::FromStr + Copy>(&self, key: &str, flag: Option<&T>) -> SimResult<Option<T>> {
        if let Some(v) = flag {
            return Ok(Some(*v));
        }
        self.file_value(key)
            .map(|raw| parse_value(key, raw))
            .transpose()
    }

    fn get_str(&self, key: &str, flag: Option<&str>) -> SimResult<Option<String>> {
        if let Some(v) = flag {
            return Ok(Some(v.to_string()));
        }
        Ok(self.file_value(key).map(str::to_string))
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str) -> SimResult<T> {
    raw.parse()
        .map_err(|_| SimError::Argument(format!("bad value '{raw}' for {key}")))
}

fn parse_config_file(path: &std::path::Path) -> SimResult<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::io(path.display().to_string(), e))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            SimError::Argument(format!(
                "{}:{}: expected key = value",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(key.trim().replace('_', "-"), value.trim().to_string());
    }
    Ok(map)
}

/// "all" or a comma list of colon pairs like "1:2,1:8".
fn parse_pairs(spec: &str) -> SimResult<PairSelection> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("all") {
        return Ok(PairSelection::All);
    }
    let mut pairs = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        let (m, n) = item.split_once(':').ok_or_else(|| {
            SimError::Argument(format!("bad pair '{item}' (expected m:n)"))
        })?;
        let m: usize = parse_value("pairs", m.trim())?;
        let n: usize = parse_value("pairs", n.trim())?;
        pairs.push((m, n));
    }
    if pairs.is_empty() {
        return Err(SimError::Argument("empty pair list".into()));
    }
    Ok(PairSelection::List(pairs))
}

fn parse_observables(spec: &str) -> SimResult<(bool, bool, bool)> {
    let (mut coherences, mut concurrences, mut eof) = (false, false, false);
    for item in spec.split(',') {
        match item.trim() {
            "coherences" => coherences = true,
            "concurrence" | "concurrences" => concurrences = true,
            "eof" => eof = true,
            other => {
                return Err(SimError::Argument(format!(
                    "unknown observable '{other}' (expected coherences, concurrence, eof)"
                )))
            }
        }
    }
    if !(coherences || concurrences || eof) {
        return Err(SimError::Argument("empty observable list".into()));
    }
    Ok((coherences, concurrences, eof))
}
