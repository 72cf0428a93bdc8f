//! Parsing of CA, measure, character, window and budget arguments.

use std::path::Path;

use abca_core::builtins::builtin;
use abca_core::io::{ca_from_json, measure_from_json};
use abca_core::spectral::{trivial_character, MeasureSpec};
use abca_core::{AbelianCA, Error, FiniteConfiguration, GroupSpec, Result};

/// A builtin name, or a path to an automaton JSON document.
pub fn automaton(source: &str) -> Result<AbelianCA> {
    if Path::new(source).is_file() {
        let text = std::fs::read_to_string(source)
            .map_err(|e| Error::Parse(format!("{source}: {e}")))?;
        return ca_from_json(&text);
    }
    builtin(source)
}

/// Measure sources:
/// `uniform`, `bernoulli:w0,w1,..`, `zero-biased:p0`, `markov:r0;r1;..`
/// (rows comma separated), or a JSON path.
pub fn measure(source: &str, spec: &GroupSpec) -> Result<MeasureSpec> {
    if Path::new(source).is_file() {
        let text = std::fs::read_to_string(source)
            .map_err(|e| Error::Parse(format!("{source}: {e}")))?;
        let mu = measure_from_json(&text, Some(spec))?;
        if mu.spec() != spec {
            return Err(Error::SpecMismatch {
                expected: spec.to_string(),
                found: mu.spec().to_string(),
            });
        }
        return Ok(mu);
    }
    let (kind, rest) = source.split_once(':').unwrap_or((source, ""));
    match kind {
        "uniform" if rest.is_empty() => MeasureSpec::uniform(spec),
        "bernoulli" => MeasureSpec::bernoulli(spec, floats(rest)?),
        "zero-biased" => {
            let p = floats(rest)?;
            if p.len() != 1 {
                return Err(Error::Parse(format!("zero-biased takes one weight, got {rest:?}")));
            }
            MeasureSpec::zero_biased(spec, p[0])
        }
        "markov" => {
            let rows = rest.split(';').map(floats).collect::<Result<Vec<_>>>()?;
            MeasureSpec::markov_stationary(spec, rows)
        }
        _ => Err(Error::Parse(format!("unknown measure {source:?}"))),
    }
}

fn floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
        })
        .collect()
}

fn integers(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
        })
        .collect()
}

/// `trivial`, or `[@]offset:(a,b)(c,d)..`; a bare `(a,b)..` starts at 0.
pub fn configuration(text: &str, spec: &GroupSpec) -> Result<FiniteConfiguration> {
    let text = text.trim();
    if text == "trivial" || text == "0" {
        return Ok(trivial_character(spec));
    }
    let text = text.strip_prefix('@').unwrap_or(text);
    let (offset, cells) = match text.split_once(':') {
        Some((o, c)) => (
            o.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad offset {o:?}")))?,
            c,
        ),
        None => (0, text),
    };
    let cells = cells.trim();
    if !cells.starts_with('(') || !cells.ends_with(')') {
        return Err(Error::Parse(format!("cells must look like (a,b)(c,d): {cells:?}")));
    }
    let elements = cells[1..cells.len() - 1]
        .split(")(")
        .map(|c| spec.reduce(&integers(c)?))
        .collect::<Result<Vec<_>>>()?;
    FiniteConfiguration::new(spec, offset, elements)
}

/// `a:b`, inclusive.
pub fn window(text: &str) -> Result<(i64, i64)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("window must be a:b, got {text:?}")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad window bound {s:?}")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if b < a {
        return Err(Error::Parse(format!("empty window {a}:{b}")));
    }
    Ok((a, b))
}

/// `w,p,q`, all positive.
pub fn budget(text: &str) -> Result<(usize, u64, u64)> {
    let v = integers(text)?;
    match v[..] {
        [w, p, q] if w > 0 && p > 0 && q > 0 => Ok((w as usize, p as u64, q as u64)),
        _ => Err(Error::Parse(format!("budget must be three positive integers w,p,q, got {text:?}"))),
    }
}
