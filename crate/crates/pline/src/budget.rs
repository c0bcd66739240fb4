use std::env;

use serde::Serialize;

use crate::error::{Error, Result};

pub const BUDGET_ENV: &str = "PLINE_BUDGET";

/// Resource limits for exhaustive group computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest ring whose `GL₂` may be enumerated from all `|R|⁴` matrices.
    pub gl2_ring_size: u64,
    /// Largest group a closure may produce.
    pub group_order: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            gl2_ring_size: 16,
            group_order: 1_000_000,
        }
    }
}

impl Budget {
    /// Defaults overridden by `PLINE_BUDGET`, e.g. `ring=27,group=5000000`.
    pub fn from_env() -> Result<Self> {
        match env::var(BUDGET_ENV) {
            Ok(s) => Self::default().with_overrides(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn with_overrides(mut self, s: &str) -> Result<Self> {
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("budget entry `{item}` is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("budget value `{value}` is not a number")))?;
            match key.trim() {
                "ring" | "gl2_ring_size" => self.gl2_ring_size = value,
                "group" | "group_order" => self.group_order = value,
                other => return Err(Error::Parse(format!("unknown budget key `{other}`"))),
            }
        }
        Ok(self)
    }

    pub fn check_ring(&self, size: usize) -> Result<()> {
        if size as u64 > self.gl2_ring_size {
            return Err(Error::Budget {
                name: "gl2_ring_size",
                needed: size as u64,
                limit: self.gl2_ring_size,
            });
        }
        Ok(())
    }

    pub fn check_group(&self, order: usize) -> Result<()> {
        if order as u64 > self.group_order {
            return Err(Error::Budget {
                name: "group_order",
                needed: order as u64,
                limit: self.group_order,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b = Budget::default()
            .with_overrides("ring=27, group=10")
            .unwrap();
        assert_eq!(b.gl2_ring_size, 27);
        assert_eq!(b.group_order, 10);
        assert!(Budget::default().with_overrides("bogus=1").is_err());
        assert!(Budget::default().with_overrides("ring").is_err());
        assert!(Budget::default().with_overrides("ring=x").is_err());
    }

    #[test]
    fn checks() {
        let b = Budget::default();
        assert!(b.check_ring(16).is_ok());
        assert!(matches!(
            b.check_ring(25),
            Err(Error::Budget {
                name: "gl2_ring_size",
                ..
            })
        ));
        assert!(b.check_group(1_000_001).is_err());
    }
}
