//! Adapter for samplers running in a child process.
//!
//! The child reads one JSON request per line on stdin and writes one JSON
//! reply per line on stdout, answering ids in order:
//!
//! ```text
//! -> {"id": 0, "bqm": {"num_vars": 2, "linear": {...}, "quadratic": {"0,1": ...}, "offset": 0.0}, "num_reads": 10, "seed": 7}
//! <- {"id": 0, "samples": [{"assignment": [1, 0], "energy": -2.0, "num_occurrences": 3}]}
//! ```
//!
//! Every returned energy is recomputed locally; the local value is kept.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use serde::{Deserialize, Serialize};

use super::{SampleRecord, SampleSet, SamplerError};
use crate::bqm::Bqm;

/// Reported and recomputed energies may differ by at most this much.
pub const ENERGY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Request {
    pub id: u64,
    pub bqm: Bqm,
    pub num_reads: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reply {
    pub id: u64,
    pub samples: Vec<WireSample>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WireSample {
    pub assignment: Vec<u8>,
    pub energy: f64,
    #[serde(default = "one")]
    pub num_occurrences: u32,
}

fn one() -> u32 {
    1
}

impl From<&SampleRecord> for WireSample {
    fn from(r: &SampleRecord) -> Self {
        WireSample {
            assignment: r.assignment.iter().map(|&b| b as u8).collect(),
            energy: r.energy,
            num_occurrences: r.num_occurrences,
        }
    }
}

/// Handle to a running child sampler. Requests are strictly sequential.
pub struct ExternalSampler {
    command: String,
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
    next_id: u64,
}

impl ExternalSampler {
    /// Launches `command`, split on whitespace into program and arguments.
    pub fn spawn(command: &str) -> Result<Self, SamplerError> {
        let mut parts = command.split_whitespace();
        let program = parts
            .next()
            .ok_or_else(|| SamplerError::InvalidSpec("empty external command".into()))?;
        let mut child = Command::new(program)
            .args(parts)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|source| SamplerError::Spawn {
                command: command.to_string(),
                source,
            })?;
        let stdin = child.stdin.take();
        let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
        Ok(ExternalSampler {
            command: command.to_string(),
            child,
            stdin,
            stdout,
            next_id: 0,
        })
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    pub fn sample(&mut self, bqm: &Bqm, num_reads: usize, seed: u64) -> Result<SampleSet, SamplerError> {
        let id = self.next_id;
        self.next_id += 1;
        let request = Request {
            id,
            bqm: bqm.clone(),
            num_reads: u32::try_from(num_reads)
                .map_err(|_| SamplerError::InvalidSpec(format!("num_reads {num_reads} too large")))?,
            seed,
        };
        let mut line = serde_json::to_string(&request).expect("request serializes");
        line.push('\n');
        let stdin = self.stdin.as_mut().ok_or_else(|| SamplerError::Protocol {
            line: String::new(),
            reason: "child stdin closed".into(),
        })?;
        stdin.write_all(line.as_bytes())?;
        stdin.flush()?;

        let mut reply_line = String::new();
        if self.stdout.read_line(&mut reply_line)? == 0 {
            return Err(SamplerError::Protocol {
                line: String::new(),
                reason: "child closed stdout before replying".into(),
            });
        }
        parse_reply(bqm, id, reply_line.trim_end())
    }
}

impl Drop for ExternalSampler {
    fn drop(&mut self) {
        // Closing stdin lets a well-behaved child exit on EOF.
        self.stdin.take();
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Parses and verifies one reply line against the request it answers.
pub fn parse_reply(bqm: &Bqm, expected_id: u64, line: &str) -> Result<SampleSet, SamplerError> {
    let protocol = |reason: String| SamplerError::Protocol {
        line: line.to_string(),
        reason,
    };
    let reply: Reply = serde_json::from_str(line).map_err(|e| protocol(e.to_string()))?;
    if reply.id != expected_id {
        return Err(protocol(format!("expected id {expected_id}, got {}", reply.id)));
    }
    if reply.samples.is_empty() {
        return Err(protocol("reply has no samples".into()));
    }
    let mut records = Vec::with_capacity(reply.samples.len());
    for (index, s) in reply.samples.into_iter().enumerate() {
        if s.assignment.len() != bqm.num_vars() {
            return Err(protocol(format!(
                "sample {index} has {} values for {} variables",
                s.assignment.len(),
                bqm.num_vars()
            )));
        }
        if s.assignment.iter().any(|&v| v > 1) {
            return Err(protocol(format!("sample {index} is not binary")));
        }
        let assignment: Vec<bool> = s.assignment.iter().map(|&v| v == 1).collect();
        let energy = bqm.energy(&assignment)?;
        if !s.energy.is_finite() || (energy - s.energy).abs() > ENERGY_TOLERANCE {
            return Err(SamplerError::EnergyMismatch {
                index,
                reported: s.energy,
                computed: energy,
            });
        }
        records.push(SampleRecord {
            assignment,
            energy,
            num_occurrences: s.num_occurrences,
        });
    }
    Ok(SampleSet::from_records(records))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bqm() -> Bqm {
        let mut b = Bqm::new(2);
        b.add_linear(0, -2.0).unwrap();
        b.add_quadratic(0, 1, 1.0).unwrap();
        b.add_offset(0.5);
        b
    }

    #[test]
    fn parses_and_reverifies() {
        let line = r#"{"id":3,"samples":[{"assignment":[1,1],"energy":-0.5,"num_occurrences":2},{"assignment":[1,0],"energy":-1.5}]}"#;
        let set = parse_reply(&bqm(), 3, line).unwrap();
        assert_eq!(set.records()[0].assignment, vec![true, false]);
        assert_eq!(set.records()[0].energy, -1.5);
        assert_eq!(set.records()[0].num_occurrences, 1);
        assert_eq!(set.records()[1].num_occurrences, 2);
    }

    #[test]
    fn malformed_line_is_named() {
        match parse_reply(&bqm(), 0, "not json") {
            Err(SamplerError::Protocol { line, .. }) => assert_eq!(line, "not json"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_id_and_shape() {
        assert!(matches!(
            parse_reply(&bqm(), 1, r#"{"id":0,"samples":[]}"#),
            Err(SamplerError::Protocol { .. })
        ));
        assert!(matches!(
            parse_reply(&bqm(), 0, r#"{"id":0,"samples":[]}"#),
            Err(SamplerError::Protocol { .. })
        ));
        assert!(matches!(
            parse_reply(&bqm(), 0, r#"{"id":0,"samples":[{"assignment":[1],"energy":0}]}"#),
            Err(SamplerError::Protocol { .. })
        ));
        assert!(matches!(
            parse_reply(&bqm(), 0, r#"{"id":0,"samples":[{"assignment":[2,0],"energy":0}]}"#),
            Err(SamplerError::Protocol { .. })
        ));
    }

    #[test]
    fn energy_mismatch() {
        let r = parse_reply(&bqm(), 0, r#"{"id":0,"samples":[{"assignment":[1,0],"energy":3.0}]}"#);
        assert!(matches!(r, Err(SamplerError::EnergyMismatch { index: 0, .. })));
    }

    #[cfg(unix)]
    #[test]
    fn shell_child_round_trip() {
        // Commands are split on whitespace, so the child script lives in a file.
        let dir = std::env::temp_dir().join(format!("qega-ext-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let script = dir.join("child.sh");
        std::fs::write(
            &script,
            "#!/bin/sh\nwhile read l; do echo '{\"id\":0,\"samples\":[{\"assignment\":[0,0],\"energy\":0.5,\"num_occurrences\":1}]}'; done\n",
        )
        .unwrap();
        let mut ext = ExternalSampler::spawn(&format!("sh {}", script.display())).unwrap();
        let set = ext.sample(&bqm(), 1, 0).unwrap();
        assert_eq!(set.records().len(), 1);
        assert_eq!(set.records()[0].energy, 0.5);
        // Second request has id 1 but the script always answers 0.
        assert!(matches!(ext.sample(&bqm(), 1, 0), Err(SamplerError::Protocol { .. })));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn spawn_failure() {
        assert!(matches!(
            ExternalSampler::spawn("/nonexistent/qega-sampler"),
            Err(SamplerError::Spawn { .. })
        ));
        assert!(matches!(
            ExternalSampler::spawn("  "),
            Err(SamplerError::InvalidSpec(_))
        ));
    }
}
