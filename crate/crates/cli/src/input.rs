use std::path::Path;

use entangle::ket::{expression_lines, parse_scalar, parse_state};
use entangle::statefile::parse_state_json;
use entangle::{Complex64, Error, PureState};

use crate::args::StateArgs;
use crate::failure::Failure;

/// Positional expression first, then `--file`.
pub fn load_state(args: &StateArgs, file: Option<&Path>) -> Result<PureState, Failure> {
    let dims = args.dims.as_deref();
    if let Some(text) = &args.expression {
        return parse_state(text, dims).map_err(|e| Failure::parse(text, &e, None));
    }
    let Some(path) = file else {
        return Err(Failure::usage("no state given: pass a ket expression or --file"));
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    if text.trim_start().starts_with('{') {
        let state = parse_state_json(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        if let Some(d) = dims {
            if d != state.dims() {
                return Err(Failure::usage(format!(
                    "--dims {d:?} disagrees with the state file dims {:?}",
                    state.dims()
                )));
            }
        }
        return Ok(state);
    }
    match expression_lines(&text).as_slice() {
        [] => Err(Failure::usage(format!("{}: no expression found", path.display()))),
        [(line, expr)] => parse_state(expr, dims).map_err(|e| Failure::parse(expr, &e, Some(*line))),
        many => Err(Failure::usage(format!(
            "{}: expected one expression, found {}",
            path.display(),
            many.len()
        ))),
    }
}

pub fn parse_direction(text: &str) -> Result<Vec<Complex64>, Failure> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match text.trim() {
        "x-plus" => return Ok(vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)]),
        "x-minus" => return Ok(vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)]),
        _ => {}
    }
    text.split(',')
        .map(|part| {
            parse_scalar(part.trim())
                .map_err(|e| Failure::parse(part.trim(), &Error::Parse(e), None))
        })
        .collect()
}

/// `"1:0"` style steps.
pub fn parse_chain(steps: &[String]) -> Result<Vec<(usize, usize)>, Failure> {
    steps
        .iter()
        .map(|step| {
            let bad = || Failure::usage(format!("chain step {step:?} is not SITE:OUTCOME"));
            let (site, outcome) = step.split_once(':').ok_or_else(bad)?;
            Ok((
                site.trim().parse().map_err(|_| bad())?,
                outcome.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}
