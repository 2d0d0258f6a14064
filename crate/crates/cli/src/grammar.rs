//! Value grammar shared by all flags: comma-separated lists whose items are
//! numbers or inclusive ranges `min:max:step`.

/// Parses `"0.1,0.5"`, `"0.01:0.99:0.01"` or a mix such as `"0,0.1:0.3:0.1"`.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(format!("empty item in list '{s}'"));
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(number(v)?),
            [lo, hi, step] => out.extend(range(number(lo)?, number(hi)?, number(step)?)?),
            _ => return Err(format!("'{item}' is neither a number nor a range min:max:step")),
        }
    }
    Ok(out)
}

pub fn parse_u32_list(s: &str) -> Result<Vec<u32>, String> {
    parse_f64_list(s)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 && v <= f64::from(u32::MAX) {
                Ok(v as u32)
            } else {
                Err(format!("'{v}' is not a positive integer"))
            }
        })
        .collect()
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// Inclusive range; the endpoint is kept when it lies within a tiny fraction
/// of a step from the last grid point.
fn range(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0) {
        return Err(format!("range step {step} must be positive"));
    }
    if hi < lo {
        return Err(format!("range {lo}:{hi} is empty"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    // multiply rather than accumulate, then round to the step's precision
    let decimals = decimals_of(step).max(decimals_of(lo));
    let scale = 10f64.powi(decimals as i32);
    Ok((0..=count)
        .map(|i| {
            let v = lo + step * i as f64;
            if decimals <= 12 {
                (v * scale).round() / scale
            } else {
                v
            }
        })
        .collect())
}

fn decimals_of(v: f64) -> usize {
    let s = format!("{v}");
    s.split_once('.').map_or(0, |(_, frac)| frac.len())
}
