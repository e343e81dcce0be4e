//! Compact command-line notations for spaces, signatures and orbits.

use std::path::Path;

use serde::de::DeserializeOwned;
use theta_core::dual_pairs::{ClassicalSignature, Star};
use theta_core::formed_spaces::{Field, FormedSpace};
use theta_core::orbits::{ComplexOrbit, LieType, Partition};

use crate::CliError;

fn numbers(text: &str) -> Result<Vec<u32>, CliError> {
    let inner = text.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| CliError::usage(format!("'{x}' is not a non-negative integer"))))
        .collect()
}

/// `B,2,1` or `(B,2,1)`.
pub fn signature(text: &str) -> Result<ClassicalSignature, CliError> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    let [star, p, q] = parts.as_slice() else {
        return Err(CliError::usage(format!("expected a signature like B,2,1, got '{text}'")));
    };
    let star: Star = star.parse()?;
    let pq = numbers(&format!("{p},{q}"))?;
    Ok(ClassicalSignature::checked(star, pq[0], pq[1])?)
}

/// `O(p,q)`, `Sp(2n)`, `C(n)`, or a JSON object.
pub fn space(text: &str) -> Result<FormedSpace, CliError> {
    let t = text.trim();
    if t.starts_with('{') {
        return json(t, "space");
    }
    let lower = t.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix("sp") {
        let dims = numbers(rest)?;
        let [dim] = dims.as_slice() else {
            return Err(CliError::usage(format!("expected Sp(2n), got '{text}'")));
        };
        return Ok(FormedSpace::symplectic(Field::Real, *dim)?);
    }
    if let Some(rest) = lower.strip_prefix('o') {
        let pq = numbers(rest)?;
        let [p, q] = pq.as_slice() else {
            return Err(CliError::usage(format!("expected O(p,q), got '{text}'")));
        };
        return Ok(FormedSpace::real(*p, *q));
    }
    if let Some(rest) = lower.strip_prefix('c') {
        let dims = numbers(rest)?;
        let [dim] = dims.as_slice() else {
            return Err(CliError::usage(format!("expected C(n), got '{text}'")));
        };
        return Ok(FormedSpace::complex(*dim));
    }
    Err(CliError::usage(format!("unrecognised space '{text}' (try O(2,1) or Sp(4))")))
}

pub fn lie_type(text: &str) -> Result<LieType, CliError> {
    match text.trim() {
        "orth" | "o" => Ok(LieType::Orthogonal),
        "sp" | "symp" => Ok(LieType::Symplectic),
        other => Err(CliError::usage(format!("unknown type '{other}' (expected orth or sp)"))),
    }
}

/// `sp:4,2,2` or `orth:[3,1]`.
pub fn complex_orbit(text: &str) -> Result<ComplexOrbit, CliError> {
    let t = text.trim();
    if t.starts_with('{') {
        let orbit: ComplexOrbit = json(t, "orbit")?;
        orbit.validate()?;
        return Ok(orbit);
    }
    let (kind, parts) =
        t.split_once(':').ok_or_else(|| CliError::usage(format!("expected an orbit like sp:4,2,2, got '{text}'")))?;
    let orbit = ComplexOrbit::new(lie_type(kind)?, Partition::new(numbers(parts)?)?);
    orbit.validate()?;
    Ok(orbit)
}

/// Inline JSON, or the path of a file holding it.
pub fn json_or_file<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    let t = text.trim();
    if t.starts_with('{') || t.starts_with('[') {
        json(t, what)
    } else {
        let body = std::fs::read_to_string(Path::new(t))
            .map_err(|e| CliError::usage(format!("cannot read {what} file '{t}': {e}")))?;
        json(&body, what)
    }
}

pub fn json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        let problem = if e.is_syntax() || e.is_eof() { "malformed JSON" } else { "invalid" };
        CliError::usage(format!("{problem} {what}: {e}"))
    })
}
