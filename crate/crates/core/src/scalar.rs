//! Precision-parameterized scalars.
//!
//! Every numeric kernel in this crate is written against `Scalar`/`CScalar`
//! (MPFR/MPC floats via `rug`) with the working precision threaded through a
//! [`Prec`] handle. Tolerances are expressed relative to the mantissa size so
//! the whole suite scales when the precision is changed.

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::{Complex, Float};

pub type Scalar = Float;
pub type CScalar = Complex;

/// Working precision in mantissa bits. Copyable context handle.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Prec(u32);

pub const MIN_BITS: u32 = 64;
pub const DEFAULT_BITS: u32 = 256;

impl Default for Prec {
    fn default() -> Self {
        Prec(DEFAULT_BITS)
    }
}

impl Prec {
    pub fn new(bits: u32) -> Self {
        assert!(bits >= MIN_BITS, "precision must be at least {MIN_BITS} bits");
        Prec(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn f(self, v: f64) -> Scalar {
        Float::with_val(self.0, v)
    }

    pub fn int(self, v: i64) -> Scalar {
        Float::with_val(self.0, v)
    }

    pub fn zero(self) -> Scalar {
        Float::with_val(self.0, 0)
    }

    pub fn one(self) -> Scalar {
        Float::with_val(self.0, 1)
    }

    /// Exact rational `num/den` rounded once at working precision.
    pub fn ratio(self, num: i64, den: i64) -> Scalar {
        Float::with_val(self.0, num) / Float::with_val(self.0, den)
    }

    pub fn pi(self) -> Scalar {
        Float::with_val(self.0, Constant::Pi)
    }

    pub fn sqrt_pi(self) -> Scalar {
        self.pi().sqrt()
    }

    pub fn c(self, re: f64, im: f64) -> CScalar {
        Complex::with_val(self.0, (re, im))
    }

    pub fn c_zero(self) -> CScalar {
        Complex::with_val(self.0, (0, 0))
    }

    pub fn c_from(self, re: Scalar, im: Scalar) -> CScalar {
        Complex::with_val(self.0, (re, im))
    }

    pub fn c_real(self, re: &Scalar) -> CScalar {
        Complex::with_val(self.0, (re, &self.zero()))
    }

    /// `2^-(B - guard)`: the standard precision-relative tolerance.
    pub fn tol(self, guard: u32) -> Scalar {
        let mut t = self.one();
        t >>= self.0.saturating_sub(guard);
        t
    }

    /// `2^-(B/div)`.
    pub fn tol_div(self, div: u32) -> Scalar {
        let mut t = self.one();
        t >>= self.0 / div;
        t
    }

    /// Decimal digits sufficient to round-trip at this precision.
    pub fn digits(self) -> usize {
        (self.0 as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }

    /// Parse a decimal string at working precision.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let v = Float::parse(s).map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))?;
        Ok(v.complete(self.0))
    }

    /// Parse `a+bi` / `a-bi` / `a` as a complex number.
    pub fn parse_complex(self, s: &str) -> Result<CScalar> {
        let s = s.trim();
        let body = s.strip_suffix('i').unwrap_or(s);
        let has_i = body.len() != s.len();
        if !has_i {
            return Ok(self.c_from(self.parse(s)?, self.zero()));
        }
        // split at the last +/- that is not an exponent sign or leading sign
        let bytes = body.as_bytes();
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                let re = self.parse(&body[..k])?;
                let im_str = &body[k..];
                let im = if im_str == "+" || im_str == "-" {
                    let mut one = self.one();
                    if im_str == "-" {
                        one = -one;
                    }
                    one
                } else {
                    self.parse(im_str)?
                };
                return Ok(self.c_from(re, im));
            }
        }
        // pure imaginary, e.g. "2i" or "i"
        let im = if body.is_empty() { self.one() } else { self.parse(body)? };
        Ok(self.c_from(self.zero(), im))
    }
}

pub fn prec_of(x: &Scalar) -> Prec {
    Prec(x.prec())
}

pub fn cabs(z: &CScalar) -> Scalar {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Decimal string that round-trips through [`Prec::parse`] at the value's
/// own precision.
pub fn to_dec(x: &Scalar) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = prec_of(x).digits();
    let s = x.to_string_radix(10, Some(digits));
    s
}

pub fn complex_to_dec(z: &CScalar) -> (String, String) {
    (to_dec(z.real()), to_dec(z.imag()))
}

/// `a+bi` form accepted by [`Prec::parse_complex`].
pub fn c_to_dec(z: &CScalar) -> String {
    if z.imag().is_zero() {
        return to_dec(z.real());
    }
    let im = to_dec(z.imag());
    if im.starts_with('-') {
        format!("{}{}i", to_dec(z.real()), im)
    } else {
        format!("{}+{}i", to_dec(z.real()), im)
    }
}
