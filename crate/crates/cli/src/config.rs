//! Key-value config files: `key = value` lines, `#` comments. Explicit
//! command-line flags always win over file entries.

use std::collections::BTreeMap;
use std::path::Path;

use sze_core::{SzeError, SzeResult};

use crate::{ModelArgs, SweepArgs};

pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> SzeResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SzeError::Parse {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| SzeError::Parse {
                line: lineno + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    pub fn empty() -> Self {
        ConfigFile { entries: BTreeMap::new() }
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> SzeResult<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| SzeError::Parse {
                line: 0,
                message: format!("config key `{key}`: invalid value `{raw}`"),
            }),
        }
    }

    fn get_list<T: std::str::FromStr>(&self, key: &str) -> SzeResult<Option<Vec<T>>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|tok| tok.trim().parse())
                .collect::<Result<Vec<T>, _>>()
                .map(Some)
                .map_err(|_| SzeError::Parse {
                    line: 0,
                    message: format!("config key `{key}`: invalid list `{raw}`"),
                }),
        }
    }
}

/// Fill unset model flags from the config file.
pub fn merge_model(args: &mut ModelArgs, cfg: &ConfigFile) -> SzeResult<()> {
    if args.model.is_none() {
        args.model = cfg.get("model")?;
    }
    if args.n.is_none() {
        args.n = cfg.get("n")?;
    }
    if args.coupling_j.is_none() {
        args.coupling_j = cfg.get("J")?;
    }
    if args.field_h.is_none() {
        args.field_h = cfg.get("h")?;
    }
    if args.hamiltonian.is_none() {
        args.hamiltonian = cfg.get::<String>("hamiltonian")?.map(Into::into);
    }
    if args.out.is_none() {
        args.out = cfg.get::<String>("out")?.map(Into::into);
    }
    Ok(())
}

/// Fill unset sweep flags from the config file.
pub fn merge_sweep(args: &mut SweepArgs, cfg: &ConfigFile) -> SzeResult<()> {
    if args.methods.is_empty() {
        if let Some(raw) = cfg.get::<String>("method")? {
            args.methods = raw.split(',').map(|s| s.trim().to_string()).collect();
        }
    }
    if args.t_values.is_empty() {
        if let Some(list) = cfg.get_list("t-values")? {
            args.t_values = list;
        }
    }
    if args.n_values.is_empty() {
        if let Some(list) = cfg.get_list("n-values")? {
            args.n_values = list;
        }
    }
    if args.r.is_none() {
        args.r = cfg.get("r")?;
    }
    if args.mode.is_none() {
        args.mode = cfg.get("mode")?;
    }
    if args.seed.is_none() {
        args.seed = cfg.get("seed")?;
    }
    Ok(())
}
