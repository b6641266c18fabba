//! Session files: a small declarative language for rings, ideals, modules
//! and submodules, followed by commands that run the filtration engine.

mod ast;
mod parser;
mod run;

pub use ast::{Command, Entry, ModuleExpr, Operand, Pos, Ring, Session, Statement};
pub use parser::{parse, parse_chain, Chain, ChainElem, NON_MONOMIAL};
pub use run::{
    run, CommandOutput, ExitStatus, OracleVerdict, RunOptions, RunReport, ORACLE_BOUND_VAR,
};

/// Parses and runs a session; a parse error becomes a single failed output.
pub fn run_text(text: &str, opts: &RunOptions) -> RunReport {
    match parse(text) {
        Ok(session) => run(&session, opts),
        Err(e) => RunReport {
            outputs: vec![CommandOutput {
                text: format!("error: {e}"),
                json: serde_json::json!({
                    "command": "parse",
                    "inputs": [],
                    "result": null,
                    "verdicts": {},
                    "error": e.to_string(),
                    "status": ExitStatus::InputError.code(),
                }),
                status: ExitStatus::InputError,
            }],
        },
    }
}
