use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Parse a dense matrix: one row per line, comma-separated entries.
///
/// Entries are real (`1.5`, `-2e-3`) or complex (`1+2i`, `-0.5i`, `3-j`).
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_matrix_csv(text: &str) -> Result<CMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut first_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut column = 1;
        for token in raw.split(',') {
            let trimmed = token.trim();
            let col = column + (token.len() - token.trim_start().len());
            let value = parse_entry(trimmed).ok_or_else(|| Error::Parse {
                line: line_no,
                column: col,
                message: format!("cannot parse entry {trimmed:?}"),
            })?;
            row.push(value);
            column += token.len() + 1;
        }
        if let Some(prev) = rows.first() {
            if prev.len() != row.len() {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: format!(
                        "row has {} entries but line {first_line} has {}",
                        row.len(),
                        prev.len()
                    ),
                });
            }
        } else {
            first_line = line_no;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "matrix is empty".into(),
        });
    }
    let cols = rows[0].len();
    Ok(CMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn parse_entry(s: &str) -> Option<Complex64> {
    if s.is_empty() {
        return None;
    }
    let finite = |v: f64| v.is_finite().then_some(v);
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return finite(s.parse().ok()?).map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not part of an exponent or the leading sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => finite(t.parse().ok()?),
        }
    };
    match split {
        Some(k) => {
            let re = finite(body[..k].trim().parse().ok()?)?;
            Some(Complex64::new(re, imag(body[k..].trim())?))
        }
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_and_complex_entries() {
        let m = parse_matrix_csv("1, 2.5\n-3e-1, 1+2i\n").unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m[(0, 1)], Complex64::new(2.5, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(-0.3, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(1.0, 2.0));
    }

    #[test]
    fn imaginary_forms() {
        for (s, z) in [
            ("i", Complex64::new(0.0, 1.0)),
            ("-j", Complex64::new(0.0, -1.0)),
            ("2.5i", Complex64::new(0.0, 2.5)),
            ("1e-2-3i", Complex64::new(0.01, -3.0)),
            ("-1-i", Complex64::new(-1.0, -1.0)),
            ("1e+1+1e-1i", Complex64::new(10.0, 0.1)),
        ] {
            assert_eq!(parse_entry(s), Some(z), "{s}");
        }
        assert_eq!(parse_entry("1+"), None);
        assert_eq!(parse_entry("nan"), None);
    }

    #[test]
    fn comments_and_blank_lines() {
        let m = parse_matrix_csv("# header\n\n1,0\n0,1\n").unwrap();
        assert_eq!(m.shape(), (2, 2));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_matrix_csv("1,2\n3,x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_matrix_csv("1,2\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_matrix_csv("\n# nothing\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix_csv("1,,2"), Err(Error::Parse { column: 3, .. })));
    }
}
