//! Grid flags: either a comma list (`0,0.5,1`) or `min:max:steps`, which
//! expands to `steps` evenly spaced points including both ends.

use crate::CliError;

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |what: &str| CliError::Usage(format!("invalid grid '{text}': {what}"));
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(&format!("'{s}' is not a number")))
    };
    let text = text.trim();
    if text.is_empty() {
        return Err(bad("empty"));
    }
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(bad("expected min:max:steps"));
        };
        let (lo, hi) = (number(lo)?, number(hi)?);
        let steps: usize = steps
            .trim()
            .parse()
            .map_err(|_| bad("steps must be a positive integer"))?;
        match steps {
            0 => return Err(bad("steps must be a positive integer")),
            1 if lo != hi => return Err(bad("a single step needs min == max")),
            1 => vec![lo],
            _ => (0..steps)
                .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
                .collect(),
        }
    } else {
        text.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    Ok(values)
}

pub fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    if text.contains(':') {
        return Err(CliError::Usage(format!("'{text}' must be a comma-separated list")));
    }
    parse_grid(text)
}
