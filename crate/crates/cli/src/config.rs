//! Structured run configuration: one command or a suite of them, JSON in,
//! schema-validated with unknown keys rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Default expansion depth for checks that take one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    pub checks: Vec<CommandConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CommandConfig {
    Serre {
        preset: String,
        sites: u32,
    },
    Nilpotency {
        modulus: u32,
        sites: u32,
    },
    VolkovTwoPoint {
        order: usize,
        #[serde(default)]
        verify_lift: bool,
    },
    VolkovThreePoint {
        order: usize,
        #[serde(default)]
        verify_lift: bool,
    },
    VirasoroCheck {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expr: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        preset: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<u32>,
    },
    VirasoroLadder {
        preset: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pair_shift: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<u32>,
    },
    ClassicalHw {
        kind: String,
        expr: String,
    },
    Normalize {
        expr: String,
    },
}

/// Digest of the canonical serialization; two configs share a digest exactly
/// when every semantic field agrees.
pub fn config_digest<T: Serialize>(cfg: &T) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    let out = h.finalize();
    let mut s = String::with_capacity(16);
    for b in &out[..8] {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let bad = r#"{"checks": [{"command": "serre", "preset": "sl3", "sites": 2, "bogus": 1}]}"#;
        assert!(serde_json::from_str::<SuiteConfig>(bad).is_err());
        let good = r#"{"checks": [{"command": "serre", "preset": "sl3", "sites": 2}]}"#;
        assert!(serde_json::from_str::<SuiteConfig>(good).is_ok());
    }

    #[test]
    fn digest_tracks_semantics() {
        let a: SuiteConfig =
            serde_json::from_str(r#"{"checks": [{"command": "serre", "preset": "sl3", "sites": 2}]}"#)
                .unwrap();
        // formatting differences do not matter after parsing
        let b: SuiteConfig = serde_json::from_str(
            r#"{ "checks" : [ { "sites": 2, "preset": "sl3", "command": "serre" } ] }"#,
        )
        .unwrap();
        assert_eq!(config_digest(&a), config_digest(&b));
        let c: SuiteConfig =
            serde_json::from_str(r#"{"checks": [{"command": "serre", "preset": "sl3", "sites": 3}]}"#)
                .unwrap();
        assert_ne!(config_digest(&a), config_digest(&c));
    }
}
