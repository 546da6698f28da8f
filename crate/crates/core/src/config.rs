//! Plain-text run configuration.
//!
//! One `key = value` pair per line; `#` starts a comment. Every run names
//! a builtin experiment and overrides some of its fields:
//!
//! ```text
//! experiment = twoeq_homogeneous
//! r = 3          # faster tumour growth
//! t_final = 10
//! ```
//!
//! Keys may appear in any order and at most once. Lists are
//! comma-separated; meshes are written `dx:dt`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::analysis::ShapeThresholds;
use crate::error::{Error, Result};
use crate::experiments::{builtin, ExperimentSpec, InitialProfile, SweepParameter, DEFAULT_ACID_RATE};
use crate::model::{ModelParams, Variant};
use crate::schemes::CflPolicy;

/// Accepted keys, in rendering order.
pub const KEYS: &[&str] = &[
    "experiment",
    "variant",
    "d",
    "r",
    "D",
    "c",
    "epsilon",
    "x_left",
    "x_right",
    "x_jump",
    "initial",
    "left",
    "right",
    "dx",
    "dt",
    "t_final",
    "snapshots",
    "speed",
    "shape",
    "exact",
    "cfl_policy",
    "tail_fraction",
    "eps_high",
    "eps_low",
    "eps_body",
    "k_sharp",
    "output_dir",
    "sweep_parameter",
    "sweep_values",
    "epsilon_values",
    "meshes",
];

/// Tumour diffusion used when a config switches another variant to the
/// full model.
pub const DEFAULT_DIFFUSION: f64 = 4e-5;
pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_EPSILON_VALUES: [f64; 4] = [1.0, 0.5, 0.1, 0.01];
pub const DEFAULT_MESHES: [(f64, f64); 2] = [(0.05, 0.001), (0.01, 0.0001)];

/// Payload of the [`Error::UnknownExperiment`] raised when no `experiment`
/// key is given.
pub const MISSING_EXPERIMENT: &str = "(no `experiment` key)";

/// Line number given to `key=value` overrides that do not come from a file.
pub const OVERRIDE_LINE: usize = 0;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: ExperimentSpec,
    pub output_dir: Option<PathBuf>,
    pub sweep_parameter: Option<SweepParameter>,
    pub sweep_values: Vec<f64>,
    pub epsilon_values: Vec<f64>,
    pub meshes: Vec<(f64, f64)>,
}

impl RunConfig {
    pub fn from_spec(spec: ExperimentSpec) -> Self {
        Self {
            spec,
            output_dir: None,
            sweep_parameter: None,
            sweep_values: Vec::new(),
            epsilon_values: DEFAULT_EPSILON_VALUES.to_vec(),
            meshes: DEFAULT_MESHES.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    line: usize,
    value: String,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, &[])
}

/// Parses `text`, then applies `overrides` (each `key=value`); an override
/// replaces the file's value for the same key.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        if let Some((key, entry)) = parse_line(raw, idx + 1)? {
            if entries.contains_key(key) {
                return Err(Error::ParseError {
                    line: idx + 1,
                    message: format!("duplicate key `{key}`"),
                });
            }
            entries.insert(key, entry);
        }
    }
    for raw in overrides {
        match parse_line(raw, OVERRIDE_LINE)? {
            Some((key, entry)) => {
                entries.insert(key, entry);
            }
            None => {
                return Err(Error::ParseError {
                    line: OVERRIDE_LINE,
                    message: format!("empty override `{raw}`"),
                })
            }
        }
    }
    build(&entries)
}

fn parse_line(raw: &str, line: usize) -> Result<Option<(&'static str, Entry)>> {
    let content = raw.split('#').next().unwrap_or("").trim();
    if content.is_empty() {
        return Ok(None);
    }
    let (key, value) = content.split_once('=').ok_or_else(|| Error::ParseError {
        line,
        message: format!("expected `key = value`, got `{content}`"),
    })?;
    let key = key.trim();
    let known = KEYS.iter().find(|k| **k == key).ok_or_else(|| Error::UnknownKey {
        line,
        key: key.to_string(),
    })?;
    let value = value.trim();
    if value.is_empty() {
        return Err(Error::ParseError {
            line,
            message: format!("missing value for `{key}`"),
        });
    }
    Ok(Some((
        known,
        Entry {
            line,
            value: value.to_string(),
        },
    )))
}

#[derive(Clone, Copy)]
enum Bound {
    Any,
    NonNegative,
    Positive,
    /// `(0, 1)`
    UnitOpen,
    /// `(0, 1]`
    UnitHalfOpen,
}

impl Bound {
    fn admits(self, x: f64) -> bool {
        match self {
            Bound::Any => true,
            Bound::NonNegative => x >= 0.0,
            Bound::Positive => x > 0.0,
            Bound::UnitOpen => x > 0.0 && x < 1.0,
            Bound::UnitHalfOpen => x > 0.0 && x <= 1.0,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Bound::Any => "finite",
            Bound::NonNegative => "non-negative",
            Bound::Positive => "positive",
            Bound::UnitOpen => "in (0, 1)",
            Bound::UnitHalfOpen => "in (0, 1]",
        }
    }
}

fn bad(line: usize, message: String) -> Error {
    Error::ParseError { line, message }
}

fn number(key: &str, text: &str, line: usize, bound: Bound) -> Result<f64> {
    let x: f64 = text
        .parse()
        .map_err(|_| bad(line, format!("`{key}`: `{text}` is not a number")))?;
    if !x.is_finite() || !bound.admits(x) {
        return Err(bad(line, format!("`{key}` must be {}, got {text}", bound.describe())));
    }
    Ok(x)
}

fn list(key: &str, text: &str, line: usize, bound: Bound) -> Result<Vec<f64>> {
    text.split(',').map(|t| number(key, t.trim(), line, bound)).collect()
}

fn flag(key: &str, text: &str, line: usize) -> Result<bool> {
    match text {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad(line, format!("`{key}` must be true or false, got `{text}`"))),
    }
}

fn build(entries: &BTreeMap<&'static str, Entry>) -> Result<RunConfig> {
    let name = entries
        .get("experiment")
        .ok_or_else(|| Error::UnknownExperiment(MISSING_EXPERIMENT.into()))?;
    let mut spec = builtin(&name.value)?;

    let num = |key: &str, bound: Bound| -> Result<Option<f64>> {
        entries
            .get(key)
            .map(|e| number(key, &e.value, e.line, bound))
            .transpose()
    };

    if let Some(e) = entries.get("variant") {
        let variant = Variant::from_name(&e.value).ok_or_else(|| {
            bad(e.line, format!("unknown variant `{}` (full, two_eq, one_eq, epsilon)", e.value))
        })?;
        if variant != spec.variant() {
            let p = spec.params;
            spec.params = match variant {
                Variant::FullModel => ModelParams::full(p.d, p.r, DEFAULT_DIFFUSION, DEFAULT_ACID_RATE),
                Variant::TwoEq => ModelParams::two_eq(p.d, p.r),
                Variant::OneEq => ModelParams::one_eq(p.d),
                Variant::EpsilonSystem => ModelParams::epsilon(p.d, DEFAULT_EPSILON),
            };
        }
    }
    if let Some(x) = num("d", Bound::NonNegative)? {
        spec.params.d = x;
    }
    if let Some(x) = num("r", Bound::NonNegative)? {
        spec.params.r = x;
    }
    if let Some(x) = num("D", Bound::NonNegative)? {
        spec.params.diffusion = Some(x);
    }
    if let Some(x) = num("c", Bound::NonNegative)? {
        spec.params.acid_rate = Some(x);
    }
    if let Some(x) = num("epsilon", Bound::Positive)? {
        spec.params.epsilon = Some(x);
    }
    if let Some(x) = num("x_left", Bound::Any)? {
        spec.x_left = x;
    }
    if let Some(x) = num("x_right", Bound::Any)? {
        spec.x_right = x;
    }
    if let Some(x) = num("x_jump", Bound::Any)? {
        spec.initial.x_jump = x;
    }
    if let Some(e) = entries.get("initial") {
        spec.initial.profile = InitialProfile::from_name(&e.value)
            .ok_or_else(|| bad(e.line, format!("unknown initial profile `{}` (riemann, exact)", e.value)))?;
    }
    if let Some(e) = entries.get("left") {
        spec.initial.left = Some(list("left", &e.value, e.line, Bound::Any)?);
    }
    if let Some(e) = entries.get("right") {
        spec.initial.right = Some(list("right", &e.value, e.line, Bound::Any)?);
    }
    if let Some(x) = num("dx", Bound::Positive)? {
        spec.dx = x;
    }
    if let Some(x) = num("dt", Bound::Positive)? {
        spec.dt = x;
    }
    if let Some(x) = num("t_final", Bound::NonNegative)? {
        spec.t_final = x;
    }
    if let Some(e) = entries.get("snapshots") {
        spec.snapshots = match e.value.parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => return Err(bad(e.line, format!("`snapshots` must be a positive integer, got `{}`", e.value))),
        };
    }
    for (key, slot) in [
        ("speed", &mut spec.analyses.speed),
        ("shape", &mut spec.analyses.shape),
        ("exact", &mut spec.analyses.exact),
    ] {
        if let Some(e) = entries.get(key) {
            *slot = flag(key, &e.value, e.line)?;
        }
    }
    if let Some(e) = entries.get("cfl_policy") {
        spec.options.cfl_policy = CflPolicy::from_name(&e.value)
            .ok_or_else(|| bad(e.line, format!("unknown cfl_policy `{}` (warn, fail)", e.value)))?;
    }
    if let Some(x) = num("tail_fraction", Bound::UnitHalfOpen)? {
        spec.tail_fraction = x;
    }
    let t: &mut ShapeThresholds = &mut spec.thresholds;
    for (key, slot, bound) in [
        ("eps_high", &mut t.eps_high, Bound::UnitOpen),
        ("eps_low", &mut t.eps_low, Bound::UnitOpen),
        ("eps_body", &mut t.eps_body, Bound::UnitOpen),
        ("k_sharp", &mut t.k_sharp, Bound::Positive),
    ] {
        if let Some(x) = num(key, bound)? {
            *slot = x;
        }
    }

    let mut config = RunConfig::from_spec(spec);
    if let Some(e) = entries.get("output_dir") {
        config.output_dir = Some(PathBuf::from(&e.value));
    }
    if let Some(e) = entries.get("sweep_parameter") {
        config.sweep_parameter = Some(
            SweepParameter::from_name(&e.value)
                .ok_or_else(|| bad(e.line, format!("unknown sweep_parameter `{}` (r, d, epsilon)", e.value)))?,
        );
    }
    if let Some(e) = entries.get("sweep_values") {
        config.sweep_values = list("sweep_values", &e.value, e.line, Bound::NonNegative)?;
    }
    if let Some(e) = entries.get("epsilon_values") {
        config.epsilon_values = list("epsilon_values", &e.value, e.line, Bound::Positive)?;
    }
    if let Some(e) = entries.get("meshes") {
        config.meshes = e
            .value
            .split(',')
            .map(|pair| {
                let (dx, dt) = pair
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| bad(e.line, format!("mesh `{}` must be written dx:dt", pair.trim())))?;
                Ok((
                    number("meshes", dx.trim(), e.line, Bound::Positive)?,
                    number("meshes", dt.trim(), e.line, Bound::Positive)?,
                ))
            })
            .collect::<Result<_>>()?;
    }
    Ok(config)
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Writes every field of `config` as a config file that parses back to it.
///
/// The experiment name must be a builtin.
pub fn render(config: &RunConfig) -> String {
    let s = &config.spec;
    let p = &s.params;
    let mut out = Vec::new();
    let mut put = |k: &str, v: String| out.push(format!("{k} = {v}"));
    put("experiment", s.name.clone());
    put("variant", p.variant.name().to_string());
    put("d", p.d.to_string());
    put("r", p.r.to_string());
    if let Some(x) = p.diffusion {
        put("D", x.to_string());
    }
    if let Some(x) = p.acid_rate {
        put("c", x.to_string());
    }
    if let Some(x) = p.epsilon {
        put("epsilon", x.to_string());
    }
    put("x_left", s.x_left.to_string());
    put("x_right", s.x_right.to_string());
    put("x_jump", s.initial.x_jump.to_string());
    put("initial", s.initial.profile.name().to_string());
    if let Some(l) = &s.initial.left {
        put("left", join(l));
    }
    if let Some(r) = &s.initial.right {
        put("right", join(r));
    }
    put("dx", s.dx.to_string());
    put("dt", s.dt.to_string());
    put("t_final", s.t_final.to_string());
    put("snapshots", s.snapshots.to_string());
    put("speed", s.analyses.speed.to_string());
    put("shape", s.analyses.shape.to_string());
    put("exact", s.analyses.exact.to_string());
    put("cfl_policy", s.options.cfl_policy.name().to_string());
    put("tail_fraction", s.tail_fraction.to_string());
    put("eps_high", s.thresholds.eps_high.to_string());
    put("eps_low", s.thresholds.eps_low.to_string());
    put("eps_body", s.thresholds.eps_body.to_string());
    put("k_sharp", s.thresholds.k_sharp.to_string());
    if let Some(dir) = &config.output_dir {
        put("output_dir", dir.display().to_string());
    }
    if let Some(sp) = config.sweep_parameter {
        put("sweep_parameter", sp.name().to_string());
    }
    if !config.sweep_values.is_empty() {
        put("sweep_values", join(&config.sweep_values));
    }
    put("epsilon_values", join(&config.epsilon_values));
    put(
        "meshes",
        config
            .meshes
            .iter()
            .map(|(dx, dt)| format!("{dx}:{dt}"))
            .collect::<Vec<_>>()
            .join(", "),
    );
    let mut text = out.join("\n");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::builtin_names;

    #[test]
    fn experiment_key_loads_builtin_defaults() {
        let c = parse_config("experiment = oneeq_heterogeneous\n").unwrap();
        assert_eq!(c.spec, builtin("oneeq_heterogeneous").unwrap());
        assert_eq!(c.spec.params.d, 0.5);
    }

    #[test]
    fn negative_step_is_a_parse_error() {
        let err = parse_config("experiment = oneeq_heterogeneous\ndt = -0.1").unwrap_err();
        assert!(matches!(err, Error::ParseError { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn empty_file_names_no_experiment() {
        assert_eq!(parse_config("# nothing\n"), Err(Error::UnknownExperiment(MISSING_EXPERIMENT.into())));
        assert!(matches!(
            parse_config("experiment = nope"),
            Err(Error::UnknownExperiment(n)) if n == "nope"
        ));
    }

    #[test]
    fn unknown_and_duplicate_keys() {
        let err = parse_config("experiment = oneeq_heterogeneous\n\n dtt = 1").unwrap_err();
        assert_eq!(err, Error::UnknownKey { line: 3, key: "dtt".into() });
        let err = parse_config("experiment = oneeq_heterogeneous\nd = 1\nd = 2").unwrap_err();
        assert!(matches!(err, Error::ParseError { line: 3, .. }));
        let err = parse_config("experiment = oneeq_heterogeneous\nd 1").unwrap_err();
        assert!(matches!(err, Error::ParseError { line: 2, .. }));
    }

    #[test]
    fn comments_order_and_overrides() {
        let text = "# header\nt_final = 5 # short\nexperiment = twoeq_homogeneous\n";
        let c = parse_config_with(text, &["t_final=2".into(), "variant = one_eq".into()]).unwrap();
        assert_eq!(c.spec.t_final, 2.0);
        assert_eq!(c.spec.params, ModelParams::one_eq(2.0));
    }

    #[test]
    fn lists_and_meshes() {
        let c = parse_config(
            "experiment = twoeq_homogeneous\nsweep_parameter = r\nsweep_values = 0.5, 1,2\nmeshes = 0.1:0.01, 0.05:0.001",
        )
        .unwrap();
        assert_eq!(c.sweep_parameter, Some(SweepParameter::R));
        assert_eq!(c.sweep_values, vec![0.5, 1.0, 2.0]);
        assert_eq!(c.meshes, vec![(0.1, 0.01), (0.05, 0.001)]);
        assert!(parse_config("experiment = twoeq_homogeneous\nmeshes = 0.1").is_err());
        assert!(parse_config("experiment = twoeq_homogeneous\nspeed = yes").is_err());
    }

    #[test]
    fn render_round_trips_builtins() {
        for (name, _) in builtin_names() {
            let c = parse_config(&format!("experiment = {name}")).unwrap();
            assert_eq!(parse_config(&render(&c)).unwrap(), c, "{name}");
        }
    }

    #[test]
    fn render_round_trips_edits() {
        let mut c = parse_config("experiment = full_homogeneous").unwrap();
        c.spec.params.d = 0.1 + 0.2;
        c.spec.initial.left = Some(vec![0.9, 1.0, 1.0]);
        c.spec.thresholds.eps_low = 1e-7;
        c.output_dir = Some("out dir/x".into());
        c.sweep_parameter = Some(SweepParameter::D);
        c.sweep_values = vec![1.0, 1.0 / 3.0];
        assert_eq!(parse_config(&render(&c)).unwrap(), c);
    }
}
