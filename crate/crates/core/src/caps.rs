//! Resource caps shared by the enumeration-heavy routines.

use crate::error::{HdxError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub group_order: usize,
    pub subspaces: usize,
    pub brute_force_configs: u64,
    pub linear_entries: usize,
    pub isomorphism_nodes: u64,
    pub field_size: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            group_order: 1_000_000,
            subspaces: 200_000,
            brute_force_configs: 1 << 24,
            linear_entries: 4_000_000,
            isomorphism_nodes: 50_000_000,
            field_size: 1024,
        }
    }
}

impl Caps {
    /// Parses overrides of the form `group=5000,subspaces=100,brute=65536`.
    pub fn parse_overrides(mut self, spec: &str) -> Result<Caps> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| HdxError::Malformed(format!("cap override `{item}` lacks `=`")))?;
            let v: u64 = val
                .trim()
                .parse()
                .map_err(|_| HdxError::Malformed(format!("cap value `{val}` is not an integer")))?;
            if v == 0 {
                return Err(HdxError::Malformed(format!("cap `{key}` must be positive")));
            }
            match key.trim() {
                "group" => self.group_order = v as usize,
                "subspaces" => self.subspaces = v as usize,
                "brute" => self.brute_force_configs = v,
                "linear" => self.linear_entries = v as usize,
                "iso" => self.isomorphism_nodes = v,
                "field" => self.field_size = v as u32,
                other => return Err(HdxError::Malformed(format!("unknown cap `{other}`"))),
            }
        }
        Ok(self)
    }

    pub fn from_env() -> Result<Caps> {
        match std::env::var("HDX_CAPS") {
            Ok(s) => Caps::default().parse_overrides(&s),
            Err(_) => Ok(Caps::default()),
        }
    }
}
