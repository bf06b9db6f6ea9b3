//! Reference child process for the external sampler protocol.
//!
//! Reads one JSON request per line on stdin and answers each with one JSON
//! reply line, solving in process. `--mode` selects deliberately broken
//! replies for exercising the adapter's error paths:
//!
//! - `solve` (default): correct samples;
//! - `empty`: a reply with no samples;
//! - `malformed`: a line that is not JSON;
//! - `wrong-energy`: correct assignments with energies off by one;
//! - `wrong-id`: a reply for a different request id.

use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use qega::samplers::external::{Reply, Request, WireSample};
use qega::samplers::sample;
use qega::{SamplerKind, SamplerSpec};

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Solve,
    Empty,
    Malformed,
    WrongEnergy,
    WrongId,
}

fn parse_args() -> Result<(Mode, SamplerKind), String> {
    let mut mode = Mode::Solve;
    let mut kind = SamplerKind::SimulatedAnnealing;
    let mut args = std::env::args().skip(1);
    while let Some(flag) = args.next() {
        let value = args.next().ok_or_else(|| format!("{flag} needs a value"))?;
        match flag.as_str() {
            "--mode" => {
                mode = match value.as_str() {
                    "solve" => Mode::Solve,
                    "empty" => Mode::Empty,
                    "malformed" => Mode::Malformed,
                    "wrong-energy" => Mode::WrongEnergy,
                    "wrong-id" => Mode::WrongId,
                    other => return Err(format!("unknown mode {other:?}")),
                }
            }
            "--sampler" => {
                kind = serde_json::from_value(serde_json::Value::String(value.clone()))
                    .map_err(|_| format!("unknown sampler {value:?}"))?;
                if kind == SamplerKind::External {
                    return Err("the reference sampler cannot delegate to an external sampler".into());
                }
            }
            other => return Err(format!("unknown flag {other:?}")),
        }
    }
    Ok((mode, kind))
}

fn answer(req: Request, mode: Mode, kind: SamplerKind) -> Result<String, String> {
    if mode == Mode::Malformed {
        return Ok("this is not json".to_string());
    }
    let spec = SamplerSpec::new(kind, req.num_reads.max(1) as usize, req.seed);
    let set = sample(&req.bqm, &spec).map_err(|e| e.to_string())?;
    let mut samples: Vec<WireSample> = set.records().iter().map(WireSample::from).collect();
    match mode {
        Mode::Empty => samples.clear(),
        Mode::WrongEnergy => samples.iter_mut().for_each(|s| s.energy += 1.0),
        _ => {}
    }
    let id = if mode == Mode::WrongId {
        req.id.wrapping_add(1)
    } else {
        req.id
    };
    serde_json::to_string(&Reply { id, samples }).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let (mode, kind) = match parse_args() {
        Ok(parsed) => parsed,
        Err(e) => {
            eprintln!("reference-sampler: {e}");
            return ExitCode::from(1);
        }
    };
    let stdin = io::stdin();
    let mut stdout = io::stdout().lock();
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        if line.trim().is_empty() {
            continue;
        }
        let reply = serde_json::from_str::<Request>(&line)
            .map_err(|e| format!("bad request: {e}"))
            .and_then(|req| answer(req, mode, kind));
        match reply {
            Ok(text) => {
                if writeln!(stdout, "{text}").and_then(|_| stdout.flush()).is_err() {
                    break;
                }
            }
            Err(e) => {
                eprintln!("reference-sampler: {e}");
                return ExitCode::from(2);
            }
        }
    }
    ExitCode::SUCCESS
}
