//! Text format for matrices: line one holds `rows cols`, then one line
//! per row with whitespace-separated tokens `a`, `a+bi`, or `a-bi` (no
//! spaces inside a token). Blank lines and `#` comments are ignored.

use std::fmt;

use radlab_core::linalg::ComplexMatrix;
use radlab_core::Complex64;

/// Parse failure with 1-based line and column of the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        message: message.into(),
    }
}

fn tokens_with_cols(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Parse one token: `a`, `a+bi`, or `a-bi`.
pub fn parse_complex(token: &str) -> Result<Complex64, String> {
    if let Some(body) = token.strip_suffix(['i', 'I']) {
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let ch = bytes[k];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let k = split.ok_or_else(|| {
            format!("`{token}` is not of the form a+bi or a-bi")
        })?;
        let re: f64 = body[..k]
            .parse()
            .map_err(|_| format!("bad real part in `{token}`"))?;
        let im: f64 = body[k..]
            .parse()
            .map_err(|_| format!("bad imaginary part in `{token}`"))?;
        Ok(Complex64::new(re, im))
    } else {
        token
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| format!("`{token}` is not a number"))
    }
}

/// Render one entry in the token syntax (shortest round-trip digits).
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// Parse a whole matrix document.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, ParseError> {
    let mut shape: Option<(usize, usize)> = None;
    let mut entries: Vec<Complex64> = Vec::new();
    let mut rows_read = 0usize;

    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let visible = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let tokens = tokens_with_cols(visible);
        if tokens.is_empty() {
            continue;
        }
        match shape {
            None => {
                if tokens.len() != 2 {
                    return Err(err(
                        line_no,
                        tokens[0].0,
                        "header must be exactly `rows cols`",
                    ));
                }
                let rows: usize = tokens[0]
                    .1
                    .parse()
                    .map_err(|_| err(line_no, tokens[0].0, "bad row count"))?;
                let cols: usize = tokens[1]
                    .1
                    .parse()
                    .map_err(|_| err(line_no, tokens[1].0, "bad column count"))?;
                if rows == 0 || cols == 0 {
                    return Err(err(line_no, tokens[0].0, "dimensions must be positive"));
                }
                shape = Some((rows, cols));
                entries.reserve(rows * cols);
            }
            Some((rows, cols)) => {
                if rows_read == rows {
                    return Err(err(
                        line_no,
                        tokens[0].0,
                        format!("expected only {rows} data rows"),
                    ));
                }
                if tokens.len() != cols {
                    return Err(err(
                        line_no,
                        tokens[0].0,
                        format!("expected {cols} entries on this row, found {}", tokens.len()),
                    ));
                }
                for (col, tok) in tokens {
                    let z = parse_complex(tok).map_err(|m| err(line_no, col, m))?;
                    entries.push(z);
                }
                rows_read += 1;
            }
        }
    }

    let (rows, cols) = shape.ok_or_else(|| err(1, 1, "empty input"))?;
    if rows_read != rows {
        return Err(err(
            text.lines().count().max(1),
            1,
            format!("expected {rows} data rows, found {rows_read}"),
        ));
    }
    ComplexMatrix::new(rows, cols, entries)
        .map_err(|e| err(1, 1, format!("invalid matrix: {e}")))
}

/// Render a matrix in the text format.
pub fn format_matrix(m: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_complex(z)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_complex_tokens() {
        let m = parse_matrix("2 2\n0 1\n0 0\n").unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m[(0, 1)], Complex64::new(1.0, 0.0));

        let m = parse_matrix("# radius test\n1 2\n\n1.5+2i -3e-2-1e-4i\n").unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(1.5, 2.0));
        assert_eq!(m[(0, 1)], Complex64::new(-3e-2, -1e-4));
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = parse_matrix("2 2\n0 1\n0 x\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 3));

        let e = parse_matrix("2 2\n0 1 5\n0 0\n").unwrap_err();
        assert_eq!(e.line, 2);

        let e = parse_matrix("2\n").unwrap_err();
        assert_eq!(e.line, 1);

        let e = parse_matrix("2 2\n1 2\n").unwrap_err();
        assert!(e.message.contains("expected 2 data rows"));
    }

    #[test]
    fn round_trips() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.1, -0.25),
                Complex64::new(3.0, 0.0),
                Complex64::new(-1e-9, 2e9),
                Complex64::new(0.0, 1.0),
            ],
        )
        .unwrap();
        let back = parse_matrix(&format_matrix(&m)).unwrap();
        assert_eq!(m, back);
    }
}
