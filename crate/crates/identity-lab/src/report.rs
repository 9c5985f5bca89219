//! The JSON envelope printed by `--json`.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = concat!("identity-lab ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub tool: String,
    /// Arguments after the program name, without `--threads`.
    pub command: Vec<String>,
    /// SHA-256 over the command and the bytes of every input file.
    pub inputs_digest: String,
    pub exit_code: i32,
    pub result: Value,
    /// Only present with `--timing`, so that reports are otherwise reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// Drops `--threads K` / `--threads=K`, which must not affect any output.
pub fn command_echo(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--threads" {
            it.next();
        } else if !a.starts_with("--threads=") {
            out.push(a.clone());
        }
    }
    out
}

/// Inputs are hashed as length-prefixed fields so that no two different
/// input lists collide by concatenation.
pub fn inputs_digest(command: &[String], inputs: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    let mut field = |bytes: &[u8]| {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    };
    field(b"command");
    for a in command {
        field(a.as_bytes());
    }
    for (name, bytes) in inputs {
        field(name.as_bytes());
        field(bytes);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threads_are_not_echoed() {
        let args: Vec<String> = ["--threads", "4", "check", "--threads=2", "--in", "a.json"].map(String::from).into();
        assert_eq!(command_echo(&args), ["check", "--in", "a.json"]);
    }

    #[test]
    fn digest_depends_on_field_boundaries() {
        let a = inputs_digest(&["ab".into()], &[]);
        let b = inputs_digest(&["a".into(), "b".into()], &[]);
        assert_ne!(a, b);
        assert_eq!(a, inputs_digest(&["ab".into()], &[]));
        assert_eq!(a.len(), 64);
    }
}
