use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use polybilliard::geometry::{Dir3, Point3, Polyhedron, RawPolyhedron, Vec3};
use polybilliard::Tolerances;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Parses `x,y,z`.
pub fn parse_vec3(text: &str) -> Result<Vec3, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {text:?}"));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .parse::<f64>()
            .map_err(|_| format!("not a number: {part:?}"))?;
        if !slot.is_finite() {
            return Err(format!("not a finite number: {part:?}"));
        }
    }
    Ok(Vec3::new(v[0], v[1], v[2]))
}

/// Parses `name=value` for a tolerance override.
pub fn parse_tolerance(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {text:?}"))?;
    let value = value
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("not a number: {value:?}"))?;
    Ok((name.trim().to_string(), value))
}

/// Parses a positive integer count that may be written like `1e6`.
pub fn parse_count(text: &str) -> Result<u64, String> {
    if let Ok(n) = text.parse::<u64>() {
        return Ok(n);
    }
    let x = text
        .parse::<f64>()
        .map_err(|_| format!("not a number: {text:?}"))?;
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(format!("not a non-negative integer: {text:?}"))
    }
}

pub fn tolerances(overrides: &[(String, f64)]) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    for (name, value) in overrides {
        let slot = match name.as_str() {
            "plane" => &mut tol.plane,
            "norm" => &mut tol.norm,
            "step" => &mut tol.step,
            "angle" => &mut tol.angle,
            "sing" => &mut tol.sing,
            "den" => &mut tol.den,
            "surf" => &mut tol.surf,
            "deg" => &mut tol.deg,
            other => return Err(CliError::Parse(format!("unknown tolerance {other:?}"))),
        };
        *slot = *value;
    }
    tol.check().map_err(CliError::Parse)?;
    Ok(tol)
}

/// Normalizes a direction, warning when the input was noticeably not unit.
pub fn direction(v: Vec3, flag: &str) -> Result<Dir3, CliError> {
    let norm = v.norm();
    let dir = Dir3::new(v).ok_or_else(|| CliError::Parse(format!("--{flag} must be a nonzero vector")))?;
    if (norm - 1.0).abs() > 1e-6 {
        eprintln!("warning: --{flag} has norm {norm}; normalized");
    }
    Ok(dir)
}

pub fn point(v: Vec3) -> Point3 {
    Point3::from(v)
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Precondition(format!("cannot read {}: {e}", path.display())))
}

pub fn load_polyhedron(text: &str, tol: Tolerances) -> Result<Polyhedron, CliError> {
    let raw = RawPolyhedron::from_json(text).map_err(|e| CliError::Parse(format!("malformed polyhedron file: {e}")))?;
    Ok(Polyhedron::validate_with(&raw, tol)?)
}

/// SHA-256 over the canonical JSON of everything that determines the output:
/// the subcommand parameters, seed, tolerances and input file bytes.
pub fn config_hash<P: Serialize>(params: &P, seed: u64, tol: &Tolerances, input: &str) -> Result<String, CliError> {
    let canonical = serde_json::json!({
        "params": params,
        "seed": seed,
        "tolerances": tol,
        "input_sha256": hex(&Sha256::digest(input.as_bytes())),
    });
    let digest = Sha256::digest(serde_json::to_vec(&canonical)?);
    Ok(hex(&digest))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Tags a record with the run's hash and seed.
#[derive(Serialize)]
pub struct Stamped<'a, T: Serialize> {
    pub config_hash: &'a str,
    pub seed: u64,
    #[serde(flatten)]
    pub record: T,
}

/// The artifact destination: a file, or standard output.
pub struct Sink {
    path: Option<PathBuf>,
    buf: Vec<u8>,
}

impl Sink {
    pub fn new(path: Option<PathBuf>) -> Self {
        Self { path, buf: Vec::new() }
    }

    pub fn line(&mut self, text: &str) {
        self.buf.extend_from_slice(text.as_bytes());
        self.buf.push(b'\n');
    }

    /// Writes everything at once so a failed run leaves no partial file.
    pub fn finish(self) -> Result<(), CliError> {
        match self.path {
            Some(p) => fs::write(&p, &self.buf)
                .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", p.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&self.buf)?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
