//! Canonical text encoding of field elements.
//!
//! * rationals: `num/den` (always with a denominator);
//! * cyclotomic and extension-field residues: `[c0,c1,...]`, lowest degree
//!   first, zero is `[0]`;
//! * rational functions: `[num]|[den]` with a monic denominator;
//! * prime-field elements: the least non-negative representative.
//!
//! Parsing also accepts plain integers and rationals (embedded through the
//! prime subfield) and the literal `q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Elem, FieldCtx, Kind, PrimeField, Rationals};
use crate::error::{Error, Result};
use crate::poly;

fn short_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn bracket<T, F: Fn(&T) -> String>(v: &[T], f: F) -> String {
    if v.is_empty() {
        return "[0]".to_string();
    }
    let parts: Vec<String> = v.iter().map(f).collect();
    format!("[{}]", parts.join(","))
}

fn parse_err(text: &str, reason: impl Into<String>) -> Error {
    Error::Parse { text: text.to_string(), reason: reason.into() }
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| parse_err(text, "bad integer"))?;
    let d: BigInt = d.parse().map_err(|_| parse_err(text, "bad integer"))?;
    if d.is_zero() {
        return Err(parse_err(text, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn parse_list(text: &str) -> Result<Vec<BigRational>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(text, "expected a bracketed coefficient list"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_rational).collect()
}

impl FieldCtx {
    /// Canonical text form of `a`.
    pub fn print(&self, a: &Elem) -> String {
        match a {
            Elem::Rat(r) => format!("{}/{}", r.numer(), r.denom()),
            Elem::Cyc(c) => bracket(c, short_rational),
            Elem::Func { num, den } => {
                format!("{}|{}", bracket(num, short_rational), bracket(den, short_rational))
            }
            Elem::Fp(v) => v.to_string(),
            Elem::Fq(v) => bracket(v, |c| c.to_string()),
        }
    }

    /// Parses the canonical encoding (and the shorthand forms listed in the
    /// module docs).
    pub fn parse(&self, text: &str) -> Result<Elem> {
        let t = text.trim();
        if t == "q" {
            return Ok(self.q());
        }
        if !t.starts_with('[') {
            let r = parse_rational(t)?;
            if self.characteristic() != 0 {
                let p = BigInt::from(self.characteristic());
                if (r.denom() % &p).is_zero() {
                    return Err(parse_err(text, "denominator divisible by the characteristic"));
                }
            }
            return Ok(self.from_rational(&r));
        }
        match &self.0.kind {
            Kind::Rational => {
                let v = parse_list(t)?;
                if v.len() > 1 {
                    return Err(parse_err(text, "rational field elements have one coefficient"));
                }
                Ok(Elem::Rat(v.into_iter().next().unwrap_or_else(BigRational::zero)))
            }
            Kind::Cyclotomic { modulus, .. } => {
                let v = poly::trim(&Rationals, parse_list(t)?);
                Ok(Elem::Cyc(poly::rem(&Rationals, &v, modulus)))
            }
            Kind::Function => {
                let (n, d) = match t.split_once('|') {
                    Some((n, d)) => (parse_list(n)?, parse_list(d)?),
                    None => (parse_list(t)?, vec![BigRational::one()]),
                };
                let n = poly::trim(&Rationals, n);
                let d = poly::trim(&Rationals, d);
                if d.is_empty() {
                    return Err(parse_err(text, "zero denominator"));
                }
                Ok(self.normalize_frac(n, d))
            }
            Kind::Prime { .. } => {
                let v = parse_list(t)?;
                if v.len() > 1 {
                    return Err(parse_err(text, "prime field elements have one coefficient"));
                }
                Ok(self.from_rational(&v.into_iter().next().unwrap_or_else(BigRational::zero)))
            }
            Kind::Ext { p, modulus } => {
                let fp = PrimeField { p: *p };
                let mut coeffs = Vec::new();
                for c in parse_list(t)? {
                    match self.from_rational(&c) {
                        Elem::Fq(v) => coeffs.push(v.first().copied().unwrap_or(0)),
                        _ => unreachable!(),
                    }
                }
                Ok(Elem::Fq(poly::rem(&fp, &poly::trim(&fp, coeffs), modulus)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::FieldSpec;
    use super::*;
    use crate::poly::Field;

    #[test]
    fn rational_encoding() {
        let f = FieldCtx::new(FieldSpec::Rational { q: BigRational::from_integer(2.into()) }).unwrap();
        let x = f.parse("-6/4").unwrap();
        assert_eq!(f.print(&x), "-3/2");
        assert_eq!(f.print(&f.from_int(5)), "5/1");
        assert_eq!(f.print(&f.q()), "2/1");
    }

    #[test]
    fn function_field_encoding() {
        let f = FieldCtx::new(FieldSpec::FunctionField).unwrap();
        let x = f.parse("[0,2]|[4]").unwrap();
        assert_eq!(f.print(&x), "[0,1/2]|[1]");
        assert_eq!(f.print(&f.zero()), "[0]|[1]");
        let y = f.parse("[-1,0,1]|[-1,1]").unwrap();
        assert_eq!(f.print(&y), "[1,1]|[1]");
    }

    #[test]
    fn ext_field_encoding() {
        let f = FieldCtx::new(FieldSpec::ExtField { p: 3, modulus: vec![1, 0, 1], q: vec![2] }).unwrap();
        assert_eq!(f.print(&f.parse("[1,0,1]").unwrap()), "[0]");
        assert_eq!(f.print(&f.parse("[0,1]").unwrap()), "[0,1]");
        assert_eq!(f.print(&f.parse("-1").unwrap()), "[2]");
        assert!(f.parse("1/3").is_err());
    }

    #[test]
    fn cyclotomic_encoding_reduces() {
        let f = FieldCtx::new(FieldSpec::Cyclotomic { n: 4 }).unwrap();
        // x^2 = -1 in Q(i)
        assert_eq!(f.print(&f.parse("[0,0,1]").unwrap()), "[-1]");
        assert_eq!(f.print(&f.q()), "[0,1]");
    }

    #[test]
    fn malformed_rejected() {
        let f = FieldCtx::new(FieldSpec::PrimeField { p: 5, q: 2 }).unwrap();
        assert!(f.parse("abc").is_err());
        assert!(f.parse("[1,2").is_err());
        assert_eq!(f.print(&f.parse("7").unwrap()), "2");
    }
}
