//! Scenario parameters: per-command key schema, defaults, config documents.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CommandName {
    Geom,
    Converge,
    Chain,
    Osc,
    Fastsum,
}

impl CommandName {
    pub const ALL: [CommandName; 5] = [
        CommandName::Geom,
        CommandName::Converge,
        CommandName::Chain,
        CommandName::Osc,
        CommandName::Fastsum,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CommandName::Geom => "geom",
            CommandName::Converge => "converge",
            CommandName::Chain => "chain",
            CommandName::Osc => "osc",
            CommandName::Fastsum => "fastsum",
        }
    }

    pub fn about(&self) -> &'static str {
        match self {
            CommandName::Geom => "Print the nesting factor and all derived bound constants",
            CommandName::Converge => "Single-interval interpolation error against its bound, per order",
            CommandName::Chain => "Iterated interpolation along a dyadic chain against its bounds",
            CommandName::Osc => "Oscillatory iterated interpolation against its bounds",
            CommandName::Fastsum => "Multilevel kernel summation against direct summation",
        }
    }
}

impl fmt::Display for CommandName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CommandName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CommandName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::Config(format!("unknown command `{s}`")))
    }
}

/// One configurable key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Param {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

const fn p(key: &'static str, default: &'static str, help: &'static str) -> Param {
    Param { key, default, help }
}

const COMMON: &[Param] = &[
    p("seed", "42", "seed for random scenario choices"),
    p("out", "-", "output file, `-` for stdout"),
];

const BOUNDS: &[Param] = &[
    p("rho0", "2", "smallest Bernstein radius of the bounds (> 1)"),
    p("delta0", "0.5", "maximal shrinking factor per level, in (0, 1)"),
    p("q", "auto", "rate in (1/sigma, 1]; auto = sigma^(-1/2)"),
    p("theta1", "auto", "radius split in (0, 1); auto = 1/2"),
    p("q1", "auto", "rate in (sigma^-theta1, 1); auto = sigma^(-theta1/2)"),
    p("p", "auto", "rate in (q, 1]; auto = sqrt(q)"),
    p("lebesgue_scale", "1", "Lambda in Lambda_m <= Lambda (1 + m)^lambda"),
    p("lebesgue_exponent", "1", "lambda in Lambda_m <= Lambda (1 + m)^lambda"),
];

const FUNCTION: &[Param] = &[
    p("fn", "pole", "test function: pole, constant or helmholtz"),
    p("pole_re", "3", "real part of the pole"),
    p("pole_im", "0", "imaginary part of the pole"),
    p("kappa", "40", "wave number of the helmholtz function"),
    p("y0", "-1", "source point of the helmholtz function"),
];

const GEOM: &[Param] = &[
    p("omega", "2", "direction budget for C_os"),
    p("delta1", "0.5", "slowest shrinking factor for the derivative threshold"),
    p("L", "4", "chain depth for the oscillatory order threshold"),
];

const CONVERGE: &[Param] = &[
    p("a", "-1", "left end of the interval"),
    p("b", "1", "right end of the interval"),
    p("rho", "2.5", "radius of the disc where f is bounded"),
    p("rho_hat", "1", "radius of the disc where the error is measured, in [1, rho)"),
    p("m_min", "2", "smallest order"),
    p("m_max", "25", "largest order"),
];

const CHAIN: &[Param] = &[
    p("mode", "error_first", "error_first, stability_first, uniform, varorder or derivative"),
    p("L", "4", "number of levels below the root"),
    p("a", "-1", "left end of the root interval"),
    p("b", "1", "right end of the root interval"),
    p("anchors", "center", "child position: left, center, right or random"),
    p("alpha", "auto", "constant order; auto = 8, or the stability threshold in uniform and derivative mode"),
    p("beta", "1", "order increment per level in varorder mode"),
    p("rho", "auto", "radius of the norms (>= rho0); auto = rho0"),
];

const OSC: &[Param] = &[
    p("omega", "2", "neighbour direction budget"),
    p("L", "4", "number of levels below the root"),
    p("a", "0", "left end of the root interval"),
    p("b", "1", "right end of the root interval"),
    p("anchors", "center", "child position: left, center, right or random"),
    p("alpha", "auto", "constant order; auto = oscillatory threshold, at least 10"),
    p("directions", "constant", "constant, zero, approach, saturate, random or a comma list"),
];

const FASTSUM: &[Param] = &[
    p("n", "2048", "number of sources and targets; comma list allowed"),
    p("kernel", "cauchy", "cauchy, log or helmholtz"),
    p("kappa", "40", "wave number of the helmholtz kernel"),
    p("order_mode", "constant", "constant or variable"),
    p("m", "8", "order in constant mode"),
    p("alpha", "4", "leaf order in variable mode"),
    p("beta", "1", "order increment per level in variable mode"),
    p("eta", "1", "admissibility parameter"),
    p("leaf", "16", "leaf capacity"),
    p("masses", "random", "random (uniform in [-1, 1]) or uniform (1/n)"),
];

/// Keys of `command` in display order.
pub fn schema(command: CommandName) -> Vec<Param> {
    let groups: &[&[Param]] = match command {
        CommandName::Geom => &[BOUNDS, GEOM, COMMON],
        CommandName::Converge => &[FUNCTION, CONVERGE, COMMON],
        CommandName::Chain => &[BOUNDS, FUNCTION, CHAIN, COMMON],
        CommandName::Osc => &[BOUNDS, FUNCTION, OSC, COMMON],
        CommandName::Fastsum => &[FASTSUM, COMMON],
    };
    groups.iter().flat_map(|g| g.iter().copied()).collect()
}

/// A command with a value for every key of its schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    command: CommandName,
    values: BTreeMap<String, String>,
}

impl Scenario {
    pub fn defaults(command: CommandName) -> Self {
        let values = schema(command)
            .into_iter()
            .map(|p| (p.key.to_string(), p.default.to_string()))
            .collect();
        Self { command, values }
    }

    pub fn command(&self) -> CommandName {
        self.command
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = value.trim().to_string();
                Ok(())
            }
            None => Err(CliError::Config(format!("`{key}` is not a parameter of `{}`", self.command))),
        }
    }

    /// Applies a `key = value` document; `#` starts a comment.
    pub fn apply_document(&mut self, text: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    /// Config document that reproduces this scenario.
    pub fn to_document(&self) -> String {
        let mut out = format!("# {}\n", self.command);
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or_else(|| panic!("unknown key {key}"))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self.raw(key);
        raw.parse()
            .map_err(|_| CliError::Config(format!("`{key}` has an invalid value `{raw}`")))
    }

    /// `None` for `auto`.
    pub fn get_auto<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        if self.raw(key) == "auto" {
            Ok(None)
        } else {
            self.get(key).map(Some)
        }
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, CliError> {
        self.raw(key)
            .split(',')
            .map(|item| {
                item.trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("`{key}` has an invalid entry `{item}`")))
            })
            .collect()
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.get("seed")
    }
}
