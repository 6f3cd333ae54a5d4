use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde_json::{json, Map, Value};

use crate::{CharArg, Cli, Command, CongruenceCommand, FlagsCommand};

#[derive(Debug)]
pub enum CommandError {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for CommandError {
    fn from(e: E) -> Self {
        CommandError::Usage(e.to_string())
    }
}

/// Result payload of one subcommand. `ok` is false when an asserted identity failed.
pub struct Body {
    pub result: Value,
    pub provenance: Vec<Value>,
    pub ok: bool,
}

impl Body {
    pub fn checked(result: Value, ok: bool) -> Self {
        Self {
            result,
            provenance: Vec::new(),
            ok,
        }
    }

    pub fn with_provenance(mut self, p: Vec<Value>) -> Self {
        self.ok &= p.iter().all(|e| e["matches"].as_bool() != Some(false));
        self.provenance = p;
        self
    }
}

/// The JSON document every subcommand prints.
pub struct Report {
    doc: Value,
}

impl Report {
    pub fn new(query: Value, body: Body, wall: Duration) -> Self {
        let provenance = if body.provenance.is_empty() {
            json!("computed")
        } else {
            Value::Array(body.provenance)
        };
        Self {
            doc: json!({
                "query": query,
                "result": body.result,
                "ok": body.ok,
                "provenance": provenance,
                "wall_time_ms": wall.as_secs_f64() * 1e3,
            }),
        }
    }

    pub fn write(&self, out: Option<&Path>) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(&self.doc).expect("serializable");
        text.push('\n');
        match out {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

pub fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Ring => "ring".into(),
        Command::Hensel => "hensel".into(),
        Command::FourthRoot => "fourth-root".into(),
        Command::Decompose => "decompose".into(),
        Command::ElDiagonal => "el-diagonal".into(),
        Command::VerifyIdentities => "verify-identities".into(),
        Command::Congruence(c) => format!(
            "congruence {}",
            match c {
                CongruenceCommand::Order => "order",
                CongruenceCommand::Index => "index",
                CongruenceCommand::Abelianization => "abelianization",
                CongruenceCommand::ElIndex => "el-index",
                CongruenceCommand::NontrivialRep => "nontrivial-rep",
            }
        ),
        Command::Flags(f) => format!(
            "flags {}",
            match f {
                FlagsCommand::Jh => "jh",
                FlagsCommand::CheckInvariance => "check-invariance",
            }
        ),
        Command::NontrivialRep => "nontrivial-rep".into(),
        Command::VerifyPaper(_) => "verify-paper".into(),
    }
}

/// The command and every flag that was given or defaulted.
pub fn query_echo(cli: &Cli) -> Value {
    let o = &cli.opts;
    let mut args = Map::new();
    let mut put = |k: &str, v: Value| {
        if !v.is_null() {
            args.insert(k.to_string(), v);
        }
    };
    put("p", json!(o.p));
    put("precision", json!(o.precision));
    put(
        "char",
        json!(match o.characteristic {
            CharArg::Zero => "zero",
            CharArg::Positive => "positive",
        }),
    );
    put("n", json!(o.n));
    put("m", json!(o.m));
    put("k", json!(o.k));
    put("dim", json!(o.dim));
    put("input", json!(o.input.as_ref().map(|p| p.display().to_string())));
    put("seed", json!(o.seed));
    put("element_cap", json!(o.element_cap));
    if let Command::VerifyPaper(v) = &cli.command {
        put("regen_golden", json!(v.regen_golden));
        if !v.only.is_empty() {
            put("only", json!(v.only));
        }
    }
    json!({"command": command_name(&cli.command), "args": args})
}
