//! Out-of-process oracles speaking newline-delimited JSON over stdio.
//!
//! Request:  `{"referent":[...],"tolerance":x}`
//! Response: `{"success":bool,"value":[...],"exact":bool}`

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use serde::{Deserialize, Serialize};

use super::{OracleError, OracleQuery, OracleResponse, ParetoOracle};
use crate::geometry::ValueVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireRequest {
    pub referent: Vec<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireResponse {
    pub success: bool,
    #[serde(default)]
    pub value: Option<Vec<f64>>,
    pub exact: bool,
}

impl From<&OracleQuery> for WireRequest {
    fn from(q: &OracleQuery) -> Self {
        WireRequest {
            referent: q.referent.to_vec(),
            tolerance: q.tolerance,
        }
    }
}

impl From<&OracleResponse> for WireResponse {
    fn from(r: &OracleResponse) -> Self {
        WireResponse {
            success: r.success,
            value: r.value.as_ref().map(|v| v.to_vec()),
            exact: r.exact,
        }
    }
}

impl WireResponse {
    pub fn into_response(self) -> Result<OracleResponse, OracleError> {
        match (self.success, self.value) {
            (true, Some(v)) => Ok(OracleResponse::found(ValueVec::new(v)?, None, self.exact)),
            (true, None) => Err(OracleError::External(
                "successful response without a value".into(),
            )),
            (false, _) => Ok(OracleResponse::not_found(self.exact)),
        }
    }
}

/// Answers wire requests from `input` with `oracle` until end of input.
pub fn serve<O: ParetoOracle, R: BufRead, W: Write>(
    oracle: &mut O,
    input: R,
    mut output: W,
) -> Result<(), OracleError> {
    for line in input.lines() {
        let line = line.map_err(|e| OracleError::External(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let req: WireRequest =
            serde_json::from_str(&line).map_err(|e| OracleError::External(e.to_string()))?;
        let query = OracleQuery {
            referent: ValueVec::new(req.referent)?,
            tolerance: req.tolerance,
        };
        let resp = oracle.query(&query)?;
        let encoded = serde_json::to_string(&WireResponse::from(&resp))
            .map_err(|e| OracleError::External(e.to_string()))?;
        writeln!(output, "{encoded}").map_err(|e| OracleError::External(e.to_string()))?;
        output
            .flush()
            .map_err(|e| OracleError::External(e.to_string()))?;
    }
    Ok(())
}

/// Oracle backed by a child process (run through `sh -c`).
pub struct ExternalOracle {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

impl ExternalOracle {
    pub fn spawn(command: &str) -> Result<Self, OracleError> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| OracleError::External(format!("cannot start `{command}`: {e}")))?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
        Ok(ExternalOracle {
            child,
            stdin,
            stdout,
        })
    }
}

impl ParetoOracle for ExternalOracle {
    fn query(&mut self, q: &OracleQuery) -> Result<OracleResponse, OracleError> {
        let io = |e: std::io::Error| OracleError::External(e.to_string());
        let line = serde_json::to_string(&WireRequest::from(q))
            .map_err(|e| OracleError::External(e.to_string()))?;
        writeln!(self.stdin, "{line}").map_err(io)?;
        self.stdin.flush().map_err(io)?;
        let mut reply = String::new();
        if self.stdout.read_line(&mut reply).map_err(io)? == 0 {
            return Err(OracleError::External("oracle process closed its output".into()));
        }
        let wire: WireResponse = serde_json::from_str(reply.trim())
            .map_err(|e| OracleError::External(format!("bad response {reply:?}: {e}")))?;
        wire.into_response()
    }
}

impl Drop for ExternalOracle {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
