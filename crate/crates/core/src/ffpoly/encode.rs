//! Text encodings.
//!
//! A field element or polynomial is a little-endian coefficient list such as
//! `[1,0,1]`. Each coefficient is either an integer code or, one level down,
//! another list: `[[1,0],[0,1]]` is a polynomial over F_4 whose coefficients
//! are given by their F_2 coordinates. A rational function is `f1/f2`.

use serde_json::Value;

use super::field::from_digits;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Level sizes from the top down: e.g. [Q, q, p] for a tower element. A list at
/// level i holds elements of the next level down, weighted by powers of size[i+1].
fn decode_value(v: &Value, sizes: &[u64]) -> Result<u64> {
    match v {
        Value::Number(n) => {
            let c = n.as_u64().ok_or_else(|| Error::Parse(format!("not a non-negative integer: {n}")))?;
            if c >= sizes[0] {
                return Err(Error::Parse(format!("code {c} out of range (field size {})", sizes[0])));
            }
            Ok(c)
        }
        Value::Array(items) => {
            if sizes.len() < 2 {
                return Err(Error::Parse("list nested too deeply".into()));
            }
            let sub = sizes[1];
            let width = (sizes[0] as f64).log(sub as f64).round() as usize;
            if items.len() > width {
                return Err(Error::Parse(format!("{} coordinates given, at most {width} allowed", items.len())));
            }
            let digits: Vec<u32> =
                items.iter().map(|x| decode_value(x, &sizes[1..]).map(|c| c as u32)).collect::<Result<_>>()?;
            Ok(from_digits(&digits, sub))
        }
        _ => Err(Error::Parse(format!("unexpected token {v}"))),
    }
}

/// Parse a field element code. `sizes` lists the tower sizes from this level
/// down to the prime field, e.g. `[8, 2]` for F_8 over F_2 or `[64, 4, 2]`.
pub fn parse_element(text: &str, sizes: &[u64]) -> Result<u64> {
    let v: Value = serde_json::from_str(text.trim()).map_err(|e| Error::Parse(format!("{text}: {e}")))?;
    decode_value(&v, sizes)
}

/// Parse a polynomial whose coefficients live in a field with the given
/// level sizes (coefficient field first).
pub fn parse_poly(text: &str, coeff_sizes: &[u64]) -> Result<Poly> {
    let v: Value = serde_json::from_str(text.trim()).map_err(|e| Error::Parse(format!("{text}: {e}")))?;
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("polynomial must be a list: {text}")))?;
    let coeffs = items.iter().map(|x| decode_value(x, coeff_sizes).map(|c| c as u32)).collect::<Result<Vec<u32>>>()?;
    Ok(Poly::new(coeffs))
}

/// Parse `f1/f2` (or just `f1`, meaning denominator 1).
pub fn parse_rational(text: &str, coeff_sizes: &[u64]) -> Result<(Poly, Poly)> {
    let text = text.trim();
    let depth_zero_slash = {
        let mut depth = 0i32;
        let mut pos = None;
        for (i, ch) in text.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                '/' if depth == 0 => pos = Some(i),
                _ => {}
            }
        }
        pos
    };
    match depth_zero_slash {
        Some(i) => Ok((parse_poly(&text[..i], coeff_sizes)?, parse_poly(&text[i + 1..], coeff_sizes)?)),
        None => Ok((parse_poly(text, coeff_sizes)?, Poly::one())),
    }
}

pub fn format_poly(p: &Poly) -> String {
    let body: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
    format!("[{}]", body.join(","))
}

pub fn format_rational(f1: &Poly, f2: &Poly) -> String {
    format!("{}/{}", format_poly(f1), format_poly(f2))
}
