//! Plain-text k² grids: one value per line, `#` starts a comment.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("line {line}: {reason}")]
    Value { line: usize, reason: String },
    #[error("grid is empty")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn parse_k_grid(text: &str) -> Result<Vec<f64>, GridError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| GridError::Value {
            line: n + 1,
            reason: format!("not a number: {line:?}"),
        })?;
        if !v.is_finite() || v < 0.0 {
            return Err(GridError::Value {
                line: n + 1,
                reason: format!("k^2 must be finite and nonnegative, got {v}"),
            });
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(GridError::Empty);
    }
    Ok(out)
}

pub fn read_k_grid(path: &Path) -> Result<Vec<f64>, GridError> {
    parse_k_grid(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks() {
        let g = parse_k_grid("# k^2\n0\n\n0.5  # mid\n2.0\n").unwrap();
        assert_eq!(g, vec![0.0, 0.5, 2.0]);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            parse_k_grid("1\nabc\n"),
            Err(GridError::Value { line: 2, .. })
        ));
        assert!(matches!(parse_k_grid("-1\n"), Err(GridError::Value { line: 1, .. })));
        assert!(matches!(parse_k_grid("# nothing\n"), Err(GridError::Empty)));
    }
}
