use std::fmt;

use ncforms::algebra::{Flavor, GradedAlgebra, Limits};
use ncforms::cache::Cache;
use ncforms::crossed::CrossedModule;
use ncforms::perm::CycleType;
use ncforms::Error;
use serde_json::{json, Value};

use crate::GlobalArgs;

pub const MAX_N: usize = 12;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource { message: String, required: u64 },
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource { .. } => 3,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Resource { message, required } => {
                write!(f, "{message}; estimated working set {required} bytes")
            }
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::InvalidCycleType(_)
            | Error::IdentityClass
            | Error::OutOfRange { .. }
            | Error::Parse(_)
            | Error::SignedNeedsTranspositions
            | Error::NotTranspositions
            | Error::Unsupported(_) => CliError::Usage(e.to_string()),
            Error::MemoryCap { required, .. } => CliError::Resource {
                message: e.to_string(),
                required,
            },
            Error::ClassTooLarge(m) => CliError::Resource {
                message: e.to_string(),
                required: 1 << m.min(63),
            },
            other => CliError::Core(other),
        }
    }
}

/// `123`, `64K`, `512M`, `2G`; plain numbers are bytes.
pub fn parse_size(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (digits, mult) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1u64 << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    digits
        .parse::<u64>()
        .map_err(|e| format!("bad size `{s}`: {e}"))?
        .checked_mul(mult)
        .ok_or_else(|| format!("size `{s}` overflows"))
}

/// Validated arguments shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub class: String,
    pub signed: bool,
    pub flavor: Flavor,
    pub max_degree: Option<usize>,
    pub heavy: bool,
    pub seed: u64,
    pub samples: usize,
    pub threads: Option<usize>,
    pub mem_limit: Option<u64>,
    pub cache: Option<Cache>,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<RunConfig, CliError> {
        if !(2..=MAX_N).contains(&g.n) {
            return Err(CliError::Usage(format!("--n {} is out of range 2..={MAX_N}", g.n)));
        }
        let t = CycleType::parse(g.n, &g.class)?;
        if t.is_identity() {
            return Err(Error::IdentityClass.into());
        }
        if g.signed && !t.is_transpositions() {
            return Err(Error::SignedNeedsTranspositions.into());
        }
        if g.threads == Some(0) {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        Ok(RunConfig {
            n: g.n,
            class: t.to_string(),
            signed: g.signed,
            flavor: if g.woronowicz { Flavor::Woronowicz } else { Flavor::Quadratic },
            max_degree: g.max_degree,
            heavy: g.heavy,
            seed: g.seed,
            samples: g.samples,
            threads: g.threads,
            mem_limit: g.mem_limit,
            cache: Cache::from_env(g.cache_dir.clone()),
        })
    }

    /// The configuration as it appears in reports. Thread count and cache
    /// location do not affect results and are left out.
    pub fn echo(&self) -> Value {
        json!({
            "n": self.n,
            "class": self.class,
            "signed": self.signed,
            "flavor": match self.flavor {
                Flavor::Quadratic => "quadratic",
                Flavor::Woronowicz => "woronowicz",
            },
            "max_degree": self.max_degree,
            "heavy": self.heavy,
            "seed": self.seed,
            "samples": self.samples,
            "mem_limit": self.mem_limit,
        })
    }

    pub fn limits(&self) -> Limits {
        let mut l = Limits::default_for(self.n, self.heavy);
        if self.max_degree.is_some() {
            l.max_degree = self.max_degree;
        }
        l.mem_limit = self.mem_limit;
        l
    }

    pub fn crossed_module(&self) -> Result<CrossedModule, CliError> {
        Ok(CrossedModule::from_class_str(self.n, &self.class, self.signed)?)
    }

    pub fn algebra(&self) -> Result<GradedAlgebra, CliError> {
        let alg = if self.signed {
            GradedAlgebra::fomin_kirillov(self.n, self.flavor)?
        } else {
            GradedAlgebra::exterior(self.n, &self.class, self.flavor)?
        };
        Ok(alg.with_limits(self.limits()))
    }

    /// Target degree when none is given: the cap, or 12 when uncapped.
    pub fn target_degree(&self) -> usize {
        self.limits().max_degree.unwrap_or(12)
    }

    pub fn require_transpositions(&self, what: &str) -> Result<(), CliError> {
        if self.class != "2" {
            return Err(CliError::Usage(format!("{what} is only available for the 2-cycle class")));
        }
        Ok(())
    }
}

/// Builds through `degree`, turning a degree cap into a refusal with the
/// estimated size of the next degree.
pub fn build(alg: &mut GradedAlgebra, degree: usize) -> Result<(), CliError> {
    match alg.ensure_degree(degree) {
        Ok(()) => Ok(()),
        Err(Error::DegreeCap { degree: d, cap }) => Err(CliError::Resource {
            message: format!("degree {d} exceeds the cap {cap}; pass --heavy or --max-degree to raise it"),
            required: alg.estimate_bytes(d),
        }),
        Err(e) => Err(e.into()),
    }
}

/// Restores cached degrees, builds, then writes back. Cache write failures
/// are reported on stderr and otherwise ignored.
pub fn build_cached(cfg: &RunConfig, alg: &mut GradedAlgebra, degree: usize) -> Result<(), CliError> {
    if let Some(c) = &cfg.cache {
        c.load(alg, degree);
    }
    let built = build(alg, degree);
    if let Some(c) = &cfg.cache {
        if let Err(e) = c.store(alg) {
            eprintln!("warning: {e}");
        }
    }
    built
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_size("0"), Ok(0));
        assert_eq!(parse_size("4k"), Ok(4096));
        assert_eq!(parse_size("2M"), Ok(2 << 20));
        assert!(parse_size("x").is_err());
    }
}
