//! Complex literals (`a+bi`, either part optional) and matrices written as
//! nested arrays of them, e.g. `[[2i,0.1],[0.1,2i]]`.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{msg} at position {pos} in {input:?}")]
pub struct ParseError {
    pub msg: String,
    /// Zero-based character offset into `input`.
    pub pos: usize,
    pub input: String,
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    input: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Self { s: input.as_bytes(), pos: 0, input }
    }

    fn err(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError { msg: msg.into(), pos, input: self.input.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(self.pos, format!("expected '{}'", b as char)))
        }
    }

    /// Unsigned decimal with optional exponent; `None` if no digits here.
    fn number(&mut self) -> Result<Option<f64>, ParseError> {
        let start = self.pos;
        let mut digits = 0;
        while let Some(b) = self.peek() {
            if b.is_ascii_digit() {
                digits += 1;
            } else if b != b'.' {
                break;
            }
            self.pos += 1;
        }
        if digits == 0 {
            if self.pos > start {
                return Err(self.err(start, "malformed number"));
            }
            return Ok(None);
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == exp_start {
                return Err(self.err(exp_start, "exponent has no digits"));
            }
        }
        let text = &self.input[start..self.pos];
        text.parse::<f64>().map(Some).map_err(|_| self.err(start, format!("malformed number {text:?}")))
    }

    /// One or two signed terms; a term ending in `i` is imaginary.
    fn complex(&mut self) -> Result<Complex64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let (mut re, mut im) = (None, None);
        for term in 0..2 {
            self.skip_ws();
            let term_start = self.pos;
            let sign = if self.eat(b'-') {
                -1.0
            } else if self.eat(b'+') || term == 0 {
                1.0
            } else {
                break;
            };
            self.skip_ws();
            let mag = self.number()?;
            let imaginary = self.eat(b'i') || self.eat(b'j');
            let v = match (mag, imaginary) {
                (Some(x), _) => sign * x,
                (None, true) => sign,
                (None, false) => return Err(self.err(self.pos, "expected a number or 'i'")),
            };
            let slot = if imaginary { &mut im } else { &mut re };
            if slot.is_some() {
                return Err(self.err(term_start, if imaginary { "imaginary part given twice" } else { "real part given twice" }));
            }
            *slot = Some(v);
        }
        if self.pos == start {
            return Err(self.err(start, "expected a complex number"));
        }
        let z = Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0));
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(self.err(start, "value is not finite"));
        }
        Ok(z)
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos < self.s.len() {
            Err(self.err(self.pos, "unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn row(&mut self) -> Result<Vec<Complex64>, ParseError> {
        self.expect(b'[')?;
        let mut out = vec![self.complex()?];
        loop {
            self.skip_ws();
            if self.eat(b']') {
                return Ok(out);
            }
            self.expect(b',')?;
            out.push(self.complex()?);
        }
    }
}

pub fn parse_complex(input: &str) -> Result<Complex64, ParseError> {
    let mut cur = Cursor::new(input);
    let z = cur.complex()?;
    cur.finish()?;
    Ok(z)
}

/// A square matrix `[[..],[..]]`, or a bare scalar read as a 1x1 matrix.
pub fn parse_matrix(input: &str) -> Result<Vec<Vec<Complex64>>, ParseError> {
    let mut cur = Cursor::new(input);
    cur.skip_ws();
    if cur.peek() != Some(b'[') {
        let z = cur.complex()?;
        cur.finish()?;
        return Ok(vec![vec![z]]);
    }
    cur.pos += 1;
    let mut rows = Vec::new();
    loop {
        let row_start = {
            cur.skip_ws();
            cur.pos
        };
        let row = cur.row()?;
        if let Some(first) = rows.first().map(|r: &Vec<Complex64>| r.len()) {
            if row.len() != first {
                return Err(cur.err(row_start, format!("row has {} entries, expected {first}", row.len())));
            }
        }
        rows.push(row);
        cur.skip_ws();
        if cur.eat(b']') {
            break;
        }
        cur.expect(b',')?;
    }
    cur.finish()?;
    if rows.len() != rows[0].len() {
        return Err(cur.err(0, format!("matrix is {}x{}, expected square", rows.len(), rows[0].len())));
    }
    Ok(rows)
}

/// Comma-separated complex literals, e.g. a projective point `1,0,0,0`.
pub fn parse_vector(input: &str) -> Result<Vec<Complex64>, ParseError> {
    let mut cur = Cursor::new(input);
    let mut out = vec![cur.complex()?];
    loop {
        cur.skip_ws();
        if cur.pos == cur.s.len() {
            return Ok(out);
        }
        cur.expect(b',')?;
        out.push(cur.complex()?);
    }
}
