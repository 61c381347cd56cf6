//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Map,
    Geodesic,
    Connect,
    Congruence,
    Maslov,
    Verify,
}

impl Command {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "map" => Self::Map,
            "geodesic" => Self::Geodesic,
            "connect" => Self::Connect,
            "congruence" => Self::Congruence,
            "maslov" => Self::Maslov,
            "verify" => Self::Verify,
            _ => return None,
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Map => "map",
            Self::Geodesic => "geodesic",
            Self::Connect => "connect",
            Self::Congruence => "congruence",
            Self::Maslov => "maslov",
            Self::Verify => "verify",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Str(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Int,
    Real,
    Str,
}

/// `(key, kind, default)`; a `None` default marks a required key.
type KeySpec = (&'static str, Kind, Option<&'static str>);

const FAMILY_KEYS: &[KeySpec] = &[
    ("family", Kind::Str, None),
    ("radius", Kind::Real, Some("1")),
    ("a", Kind::Real, Some("1")),
    ("b", Kind::Real, Some("1.1")),
    ("c", Kind::Real, Some("1.3")),
    ("core", Kind::Real, Some("2")),
    ("tube", Kind::Real, Some("0.5")),
    ("h", Kind::Str, Some("0.5*x^2 + 0.5*y^2")),
    ("half_width", Kind::Real, Some("1")),
    ("path", Kind::Str, Some("")),
];

fn schema(cmd: Command) -> Vec<KeySpec> {
    let mut keys: Vec<KeySpec> = vec![("command", Kind::Str, None), ("output", Kind::Str, Some("linekit"))];
    match cmd {
        Command::Map => keys.extend([("samples", Kind::Int, Some("16")), ("seed", Kind::Int, Some("1"))]),
        Command::Geodesic => keys.extend([
            ("C1", Kind::Real, None),
            ("C2", Kind::Real, None),
            ("C5", Kind::Real, Some("0")),
            ("theta", Kind::Real, Some("0")),
            ("s_min", Kind::Real, Some("0")),
            ("s_max", Kind::Real, Some("1")),
            ("r_min", Kind::Real, Some("-1")),
            ("r_max", Kind::Real, Some("1")),
            ("n_s", Kind::Int, Some("33")),
            ("n_r", Kind::Int, Some("9")),
        ]),
        Command::Connect => keys.extend([
            ("point1", Kind::Str, None),
            ("direction1", Kind::Str, None),
            ("point2", Kind::Str, None),
            ("direction2", Kind::Str, None),
            ("turns", Kind::Int, Some("0")),
        ]),
        Command::Congruence => {
            keys.extend_from_slice(FAMILY_KEYS);
            keys.extend([("grid", Kind::Int, Some("32")), ("r_eval", Kind::Str, Some("reference"))]);
        }
        Command::Maslov => {
            keys.extend_from_slice(FAMILY_KEYS);
            keys.extend([
                ("grid", Kind::Int, Some("40")),
                ("curve", Kind::Str, Some("none")),
                ("curve_center", Kind::Str, Some("0 0")),
                ("curve_radius", Kind::Real, Some("0.1")),
                ("curve_lo", Kind::Str, Some("0 0")),
                ("curve_hi", Kind::Str, Some("1 1")),
                ("samples", Kind::Int, Some("256")),
            ]);
        }
        Command::Verify => keys.extend([("seed", Kind::Int, Some("20240917")), ("samples", Kind::Int, Some("100"))]),
    }
    keys
}

/// Validated configuration: every key of the command's schema is present.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    values: BTreeMap<String, (Value, usize)>,
}

fn typed(raw: &str, kind: Kind, line: usize, key: &str) -> Result<Value> {
    let mismatch = |what: &str| Error::Config { line, msg: format!("key '{key}' expects {what}, got '{raw}'") };
    Ok(match kind {
        Kind::Int => Value::Int(raw.parse().map_err(|_| mismatch("an integer"))?),
        Kind::Real => {
            let x: f64 = raw.parse().map_err(|_| mismatch("a real number"))?;
            if !x.is_finite() {
                return Err(mismatch("a finite real number"));
            }
            Value::Real(x)
        }
        Kind::Str => Value::Str(raw.to_string()),
    })
}

/// Parse `key = value` lines with `#` comments.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut raw: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let n = k + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| Error::Config { line: n, msg: format!("expected 'key = value', got '{body}'") })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(Error::Config { line: n, msg: "empty key".into() });
        }
        if let Some((_, first)) = raw.insert(key.to_string(), (value.to_string(), n)) {
            return Err(Error::Config { line: n, msg: format!("key '{key}' already set on line {first}") });
        }
    }
    let (cmd_text, cmd_line) =
        raw.get("command").cloned().ok_or_else(|| Error::Config { line: 0, msg: "missing key 'command'".into() })?;
    let command = Command::parse(&cmd_text)
        .ok_or_else(|| Error::Config { line: cmd_line, msg: format!("unknown command '{cmd_text}'") })?;

    let keys = schema(command);
    if let Some((key, (_, line))) = raw.iter().find(|(k, _)| !keys.iter().any(|s| s.0 == k.as_str())) {
        return Err(Error::Config { line: *line, msg: format!("unknown key '{key}' for command {command}") });
    }
    let mut values = BTreeMap::new();
    for (key, kind, default) in keys {
        let (text, line) = match (raw.get(key), default) {
            (Some((v, l)), _) => (v.clone(), *l),
            (None, Some(d)) => (d.to_string(), 0),
            (None, None) => {
                return Err(Error::Config { line: 0, msg: format!("missing key '{key}' for command {command}") })
            }
        };
        values.insert(key.to_string(), (typed(&text, kind, line, key)?, line));
    }
    Ok(RunConfig { command, values })
}

impl RunConfig {
    fn get(&self, key: &str) -> &Value {
        &self.values.get(key).unwrap_or_else(|| panic!("key '{key}' is not in the schema")).0
    }

    /// Line the key was set on, 0 for defaults.
    pub fn line(&self, key: &str) -> usize {
        self.values.get(key).map_or(0, |v| v.1)
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.line(key) > 0
    }

    pub fn real(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Real(x) => *x,
            other => panic!("key '{key}' is {other:?}"),
        }
    }

    pub fn int(&self, key: &str) -> i64 {
        match self.get(key) {
            Value::Int(x) => *x,
            other => panic!("key '{key}' is {other:?}"),
        }
    }

    pub fn string(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Str(s) => s,
            other => panic!("key '{key}' is {other:?}"),
        }
    }

    /// Non-negative integer key, at least `min`.
    pub fn count(&self, key: &str, min: usize) -> Result<usize> {
        let v = self.int(key);
        if v < min as i64 {
            return Err(Error::Config { line: self.line(key), msg: format!("key '{key}' must be at least {min}, got {v}") });
        }
        Ok(v as usize)
    }

    /// Whitespace- or comma-separated reals in a string key.
    pub fn reals<const N: usize>(&self, key: &str) -> Result<[f64; N]> {
        let text = self.string(key);
        let bad = || Error::Config { line: self.line(key), msg: format!("key '{key}' expects {N} numbers, got '{text}'") };
        let parts: Vec<f64> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        parts.try_into().map_err(|_| bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geodesic_defaults() {
        let c = parse_config("command = geodesic\nC1 = 1\nC2 = 0.5").unwrap();
        assert_eq!(c.command, Command::Geodesic);
        assert_eq!((c.real("C1"), c.real("C2"), c.real("C5"), c.real("theta")), (1.0, 0.5, 0.0, 0.0));
        assert_eq!(c.string("output"), "linekit");
        assert!(c.is_set("C1") && !c.is_set("C5"));
    }

    #[test]
    fn congruence_config() {
        let text = "# ellipsoid scan\ncommand = congruence\nfamily = ellipsoid\na = 1\nb = 1.1  # middle axis\nc = 1.3\ngrid = 64\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.string("family"), "ellipsoid");
        assert_eq!((c.real("a"), c.real("b"), c.real("c"), c.int("grid")), (1.0, 1.1, 1.3, 64));
        assert_eq!(c.line("b"), 5);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line = |t: &str| match parse_config(t) {
            Err(Error::Config { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("command = bogus"), 1);
        assert_eq!(line("\ncommand = geodesic\nC1 = 1\nC2 = 0.5\nC7 = 2"), 5);
        assert_eq!(line("command = geodesic\nC1 = one\nC2 = 0.5"), 2);
        assert_eq!(line("command = geodesic\nC1 = 1"), 0);
        assert_eq!(line("command = map\nthis line has no equals sign"), 2);
        assert_eq!(line("command = map\nseed = 1\nseed = 2"), 3);
        assert_eq!(line("command = verify\nsamples = 1.5"), 2);
        assert_eq!(line("C1 = 1"), 0);
    }

    #[test]
    fn vector_values() {
        let c = parse_config("command = connect\npoint1 = 0 0 0\ndirection1 = 0,0,1\npoint2 = 1 0 0\ndirection2 = 0 1 0").unwrap();
        assert_eq!(c.reals::<3>("direction1").unwrap(), [0.0, 0.0, 1.0]);
        assert!(c.reals::<2>("point1").is_err());
    }
}
