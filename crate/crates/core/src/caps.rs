//! Size limits for the exponential parts of the library.
//!
//! Defaults can be overridden with `DCSPLIT_CAPS`, a comma separated list of
//! `key=value` pairs, for example `DCSPLIT_CAPS=enum_dim=14,braid_n=6`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub enum_dim: usize,
    pub enum_ineqs: usize,
    pub arrangement_dim: usize,
    pub arrangement_hyperplanes: usize,
    pub braid_n: usize,
    pub setfn_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enum_dim: 12,
            enum_ineqs: 40,
            arrangement_dim: 4,
            arrangement_hyperplanes: 12,
            braid_n: 5,
            setfn_n: 16,
        }
    }
}

impl Caps {
    pub fn parse(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad cap entry {part:?}")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad cap value {part:?}")))?;
            if v == 0 {
                return Err(Error::Parse(format!("cap {k} must be positive")));
            }
            match k.trim() {
                "enum_dim" => caps.enum_dim = v,
                "enum_ineqs" => caps.enum_ineqs = v,
                "arrangement_dim" => caps.arrangement_dim = v,
                "arrangement_hyperplanes" => caps.arrangement_hyperplanes = v,
                "braid_n" => caps.braid_n = v,
                "setfn_n" => caps.setfn_n = v,
                other => return Err(Error::Parse(format!("unknown cap {other:?}"))),
            }
        }
        Ok(caps)
    }

    /// Caps from `DCSPLIT_CAPS`, falling back to the defaults.
    pub fn from_env() -> Caps {
        static CAPS: OnceLock<Caps> = OnceLock::new();
        *CAPS.get_or_init(|| match std::env::var("DCSPLIT_CAPS") {
            Ok(s) => Caps::parse(&s).unwrap_or_default(),
            Err(_) => Caps::default(),
        })
    }

    pub fn check(what: &'static str, got: usize, limit: usize) -> Result<()> {
        if got > limit {
            Err(Error::CapExceeded { what, got, limit })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides() {
        let c = Caps::parse("enum_dim=14, braid_n=6").unwrap();
        assert_eq!(c.enum_dim, 14);
        assert_eq!(c.braid_n, 6);
        assert_eq!(c.enum_ineqs, 40);
        assert!(Caps::parse("nope=3").is_err());
        assert!(Caps::parse("braid_n=0").is_err());
    }
}
