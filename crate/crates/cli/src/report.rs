use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "superelliptic.run/1";

/// Failure to read or interpret the inputs; reported with exit code 2.
#[derive(Debug)]
pub struct InputError {
    pub kind: &'static str,
    pub message: String,
}

impl InputError {
    pub fn new(kind: &'static str, message: impl ToString) -> InputError {
        InputError { kind, message: message.to_string() }
    }
}

#[derive(Debug)]
pub struct RunReport {
    pub command: String,
    pub inputs: Json,
    pub seed: Option<u64>,
    pub findings: Json,
    pub pass: bool,
}

/// SHA-256 of the compact serialization; `serde_json` keeps object keys
/// sorted, so equal inputs hash equally.
pub fn digest(inputs: &Json) -> String {
    format!("{:x}", Sha256::digest(inputs.to_string().as_bytes()))
}

impl RunReport {
    pub fn to_json(&self) -> Json {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "inputsDigest": digest(&self.inputs),
            "seed": self.seed,
            "findings": self.findings,
            "pass": self.pass,
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

pub fn error_json(command: &str, err: &InputError) -> Json {
    json!({
        "schema": SCHEMA,
        "command": command,
        "error": {"kind": err.kind, "message": err.message},
    })
}
