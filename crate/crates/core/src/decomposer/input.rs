//! Plain-text tridiagonal matrix files.
//!
//! ```text
//! # comments and blank lines are ignored
//! class: real
//! c: 3, 1
//! a: 5
//! b: 5
//! ```
//!
//! The `c:`/`a:`/`b:` prefixes are optional; without them the three data
//! lines are read in that order. Complex values are written `re+imj`,
//! `re-imj`, `imj` or `re`.

use num_complex::Complex;

use super::{SymmetryClass, TridiagonalSpec};
use crate::error::{Error, Result};

/// Parsed matrix file.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    /// Class declared in the header.
    pub class: SymmetryClass,
    pub spec: TridiagonalSpec<f64>,
}

/// Parses `re`, `imj`, `re+imj` or `re-imj` (also accepts `i` for `j`).
pub fn parse_complex(s: &str) -> std::result::Result<Complex<f64>, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty value".into());
    }
    let bad = || format!("cannot parse `{s}` as a complex number");
    let Some(body) = t.strip_suffix(['j', 'i']) else {
        return t
            .parse::<f64>()
            .map(|re| Complex::new(re, 0.0))
            .map_err(|_| bad());
    };
    // Split at the last sign that is not the leading sign or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex::new(re, im))
}

fn parse_row(line: &str, lineno: usize) -> Result<Vec<Complex<f64>>> {
    if line.trim().is_empty() {
        return Ok(Vec::new());
    }
    line.split(',')
        .map(|v| parse_complex(v).map_err(|msg| Error::Parse { line: lineno, msg }))
        .collect()
}

/// Parses a matrix file. The declared class is checked against the entries.
pub fn parse_matrix_file(text: &str) -> Result<MatrixFile> {
    let mut class = None;
    let mut rows: [Option<(usize, Vec<Complex<f64>>)>; 3] = [None, None, None];
    let mut next = 0;
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        last_line = lineno;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = match line.split_once(':') {
            Some((key, rest)) => (Some(key.trim().to_ascii_lowercase()), rest),
            None => (None, line),
        };
        if class.is_none() {
            if key.as_deref() != Some("class") {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected `class: general|real|symmetric` header".into(),
                });
            }
            class = Some(SymmetryClass::parse(rest).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?);
            continue;
        }
        let slot = match key.as_deref() {
            Some("c") => 0,
            Some("a") => 1,
            Some("b") => 2,
            Some(other) => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown key `{other}`"),
                })
            }
            None if next < 3 => next,
            None => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "unexpected extra data line".into(),
                })
            }
        };
        if rows[slot].is_some() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("diagonal `{}` given twice", ["c", "a", "b"][slot]),
            });
        }
        rows[slot] = Some((lineno, parse_row(rest, lineno)?));
        next = slot + 1;
    }

    let class = class.ok_or(Error::Parse {
        line: last_line.max(1),
        msg: "missing `class:` header".into(),
    })?;
    let [c, a, b] = rows;
    let (c_line, c) = c.ok_or(Error::Parse {
        line: last_line.max(1),
        msg: "missing main diagonal `c`".into(),
    })?;
    let dim = c.len();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Parse {
            line: c_line,
            msg: format!("main diagonal has {dim} entries; need a power of two ≥ 2"),
        });
    }
    let n = dim.trailing_zeros() as usize;
    let take = |row: Option<(usize, Vec<Complex<f64>>)>, name: &str| -> Result<Vec<Complex<f64>>> {
        match row {
            Some((line, v)) if v.len() != dim - 1 => Err(Error::Parse {
                line,
                msg: format!("`{name}` has {} entries, expected {}", v.len(), dim - 1),
            }),
            Some((_, v)) => Ok(v),
            None => Err(Error::Parse {
                line: last_line,
                msg: format!("missing diagonal `{name}`"),
            }),
        }
    };
    let a = take(a, "a")?;
    let b = take(b, "b")?;
    let spec = TridiagonalSpec::new(n, c, a, b, class)?;
    Ok(MatrixFile { class, spec })
}
