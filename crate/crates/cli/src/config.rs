//! Pipeline configuration: defaults, config-file parsing, and overrides.
//!
//! Precedence, lowest to highest: built-in defaults, config file,
//! `DISTSIM_OUTPUT_DIR` (output directory only), command-line flags.
//! Boolean variant flags are enabling-only: a flag turns the variant on, an
//! absent flag leaves the config-file value in place.

use std::fmt;
use std::path::{Path, PathBuf};

use distsim_core::{load_lexicon, load_rule_table, Lexicon, RuleTable};

/// Where the rewrite rules (or the lexicon) come from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Source {
    /// The table bundled with the library.
    #[default]
    Default,
    /// No table at all.
    None,
    /// An explicit file.
    Path(PathBuf),
}

impl Source {
    pub fn parse(value: &str) -> Source {
        match value {
            "default" => Source::Default,
            "none" => Source::None,
            other => Source::Path(PathBuf::from(other)),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Default => write!(f, "default"),
            Source::None => write!(f, "none"),
            Source::Path(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Fully resolved run configuration. The defaults are the published
/// parameters of the analysis: W = 0.75, cutoff = 0.95, min-count = 3,
/// separator `:` and sentinel `XXXX`.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub corpus_paths: Vec<PathBuf>,
    pub separator: char,
    pub sentinel: String,
    pub rules: Source,
    pub lexicon: Source,
    pub anchors: Option<PathBuf>,
    pub grid: Option<Vec<f64>>,
    pub weight: f64,
    pub min_count: u64,
    pub cutoff: f64,
    pub output_dir: PathBuf,
    pub pmi_mode: bool,
    pub clamp_negative: bool,
    pub unnormalized_similarity: bool,
    pub rank_objective: bool,
    pub zipf_max_rank: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus_paths: Vec::new(),
            separator: ':',
            sentinel: "XXXX".to_string(),
            rules: Source::Default,
            lexicon: Source::Default,
            anchors: None,
            grid: None,
            weight: 0.75,
            min_count: 3,
            cutoff: 0.95,
            output_dir: PathBuf::from("out"),
            pmi_mode: false,
            clamp_negative: false,
            unnormalized_similarity: false,
            rank_objective: false,
            zipf_max_rank: None,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(message.into()))
}

impl PipelineConfig {
    /// Apply `key = value` assignments from a config file. Blank lines and
    /// lines starting with `#` are skipped; `corpus` lines accumulate.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        for (i, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!(
                    "{}:{}: expected `key = value`",
                    path.display(),
                    i + 1
                ));
            };
            let key = key.trim();
            let value = value.trim();
            self.apply_key(key, value).map_err(|e| {
                ConfigError(format!("{}:{}: {}", path.display(), i + 1, e.0))
            })?;
        }
        Ok(())
    }

    fn apply_key(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "corpus" => self.corpus_paths.push(PathBuf::from(value)),
            "separator" => {
                let mut chars = value.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => self.separator = c,
                    _ => return err(format!("separator must be one character, got {value:?}")),
                }
            }
            "sentinel" => self.sentinel = value.to_string(),
            "rules" => self.rules = Source::parse(value),
            "lexicon" => self.lexicon = Source::parse(value),
            "anchors" => self.anchors = Some(PathBuf::from(value)),
            "grid" => self.grid = Some(parse_grid(value)?),
            "weight" => self.weight = parse_num(key, value)?,
            "min_count" => {
                self.min_count = value
                    .parse()
                    .map_err(|_| ConfigError(format!("min_count must be an integer, got {value:?}")))?
            }
            "cutoff" => self.cutoff = parse_num(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "pmi_mode" => self.pmi_mode = parse_bool(key, value)?,
            "clamp_negative" => self.clamp_negative = parse_bool(key, value)?,
            "unnormalized_similarity" => self.unnormalized_similarity = parse_bool(key, value)?,
            "rank_objective" => self.rank_objective = parse_bool(key, value)?,
            "zipf_max_rank" => {
                self.zipf_max_rank = match value {
                    "none" | "0" => None,
                    n => Some(n.parse().map_err(|_| {
                        ConfigError(format!("zipf_max_rank must be an integer or none, got {n:?}"))
                    })?),
                }
            }
            other => return err(format!("unknown config key {other:?}")),
        }
        Ok(())
    }

    /// Validate numeric domains and the presence of corpus paths.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.corpus_paths.is_empty() {
            return err("no corpus files given (positional arguments or `corpus =` lines)");
        }
        if !(0.0..=1.0).contains(&self.weight) {
            return err(format!("weight {} is outside [0, 1]", self.weight));
        }
        if !(0.0..=1.0).contains(&self.cutoff) {
            return err(format!("cutoff {} is outside [0, 1]", self.cutoff));
        }
        if self.min_count < 1 {
            return err("min_count must be at least 1");
        }
        if let Some(grid) = &self.grid {
            for &w in grid {
                if !(0.0..=1.0).contains(&w) {
                    return err(format!("grid weight {w} is outside [0, 1]"));
                }
            }
        }
        if self.sentinel.is_empty() {
            return err("sentinel must be nonempty");
        }
        if self.sentinel.contains(self.separator) {
            return err(format!(
                "separator {:?} occurs inside the sentinel {:?}",
                self.separator, self.sentinel
            ));
        }
        Ok(())
    }

    pub fn load_rules(&self) -> Result<RuleTable, String> {
        match &self.rules {
            Source::Default => Ok(RuleTable::bundled()),
            Source::None => Ok(RuleTable::empty()),
            Source::Path(p) => load_rule_table(p)
                .map_err(|e| format!("cannot load rules from {}: {e}", p.display())),
        }
    }

    pub fn load_lexicon(&self) -> Result<Lexicon, String> {
        match &self.lexicon {
            Source::Default => Ok(Lexicon::bundled()),
            Source::None => Ok(Lexicon::empty()),
            Source::Path(p) => load_lexicon(p)
                .map_err(|e| format!("cannot load lexicon from {}: {e}", p.display())),
        }
    }
}

fn parse_num(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("{key} must be a number, got {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => err(format!("{key} must be true or false, got {other:?}")),
    }
}

/// Parse a weight grid: either a single value or `start:stop:step`
/// (inclusive of `stop` up to floating-point slack).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![parse_num("grid", single)?]),
        [start, stop, step] => {
            let start = parse_num("grid start", start)?;
            let stop = parse_num("grid stop", stop)?;
            let step = parse_num("grid step", step)?;
            if step <= 0.0 {
                return err(format!("grid step must be positive, got {step}"));
            }
            if stop < start {
                return err(format!("grid stop {stop} is below start {start}"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            let mut grid = Vec::with_capacity(count + 1);
            for k in 0..=count {
                let mut w = start + k as f64 * step;
                // snap accumulated float error back onto the endpoint
                if w > stop {
                    w = stop;
                }
                grid.push(w);
            }
            Ok(grid)
        }
        _ => err(format!("grid must be `w` or `start:stop:step`, got {spec:?}")),
    }
}
