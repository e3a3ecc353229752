//! Coefficient fields with a distinguished unit `q`.
//!
//! Five concrete fields are supported: the rationals, cyclotomic fields
//! `Q[x]/Phi_n`, the rational function field `Q(t)` with `q = t`, prime
//! fields and small extension fields `F_p[t]/(f)`. A [`FieldCtx`] carries the
//! field description and performs all arithmetic; [`Elem`] values are plain
//! canonical data and compare structurally.

mod encoding;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{self, Field};

/// Largest extension degree accepted for `EXT_FIELD` (irreducibility is
/// checked by brute force).
pub const MAX_EXT_DEGREE: usize = 8;

/// Description of a coefficient field together with its `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational {
        q: BigRational,
    },
    /// `Q[x]/Phi_n(x)`; `q` is the class of `x`.
    Cyclotomic {
        n: u32,
    },
    /// `Q(t)`; `q = t`.
    FunctionField,
    PrimeField {
        p: u64,
        q: u64,
    },
    /// `F_p[t]/(f)` with `modulus` the coefficients of the monic `f`, lowest
    /// degree first.
    ExtField {
        p: u64,
        modulus: Vec<u64>,
        q: Vec<u64>,
    },
}

/// A field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Rat(BigRational),
    /// Residue modulo the cyclotomic polynomial, degree below `phi(n)`.
    Cyc(Vec<BigRational>),
    /// `num/den` with `gcd(num, den) = 1` and `den` monic.
    Func {
        num: Vec<BigRational>,
        den: Vec<BigRational>,
    },
    Fp(u64),
    /// Residue modulo the defining polynomial.
    Fq(Vec<u64>),
}

/// The rationals as a [`Field`] for the polynomial helpers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
}

/// `Z/p` as a [`Field`].
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    pub p: u64,
}

impl Field for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if (*a).is_multiple_of(self.p) {
            return None;
        }
        let ext = (*a as i128).extended_gcd(&(self.p as i128));
        Some(ext.x.rem_euclid(self.p as i128) as u64)
    }
}

#[derive(Debug)]
enum Kind {
    Rational,
    Cyclotomic { n: u32, modulus: Vec<BigRational> },
    Function,
    Prime { p: u64 },
    Ext { p: u64, modulus: Vec<u64> },
}

#[derive(Debug)]
struct Inner {
    spec: FieldSpec,
    kind: Kind,
    q: Elem,
}

/// A coefficient field with its distinguished `q`. Cheap to clone.
#[derive(Clone, Debug)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for FieldCtx {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Integer coefficients of the n-th cyclotomic polynomial, as rationals.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigRational> {
    let q = Rationals;
    let mut xn1 = vec![BigRational::zero(); n as usize + 1];
    xn1[0] = rat(-1);
    xn1[n as usize] = rat(1);
    let mut acc = xn1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            acc = poly::divrem(&q, &acc, &phi_d).0;
        }
    }
    acc
}

/// Brute-force irreducibility over `F_p` for small degree: no monic factor of
/// degree `1..=deg/2` divides `f`.
pub fn is_irreducible_mod_p(p: u64, f: &[u64]) -> bool {
    let fp = PrimeField { p };
    let f = poly::trim(&fp, f.to_vec());
    let deg = match poly::degree(&f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            if poly::rem(&fp, &f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Validates `spec` and builds the arithmetic context.
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let (kind, q) = match &spec {
            FieldSpec::Rational { q } => {
                if q.is_zero() {
                    return Err(Error::InvalidField("q must be nonzero".into()));
                }
                (Kind::Rational, Elem::Rat(q.clone()))
            }
            FieldSpec::Cyclotomic { n } => {
                if *n == 0 {
                    return Err(Error::InvalidField("cyclotomic order n must be >= 1".into()));
                }
                let modulus = cyclotomic_polynomial(*n);
                let x = poly::rem(&Rationals, &[rat(0), rat(1)], &modulus);
                (Kind::Cyclotomic { n: *n, modulus }, Elem::Cyc(x))
            }
            FieldSpec::FunctionField => (Kind::Function, Elem::Func { num: vec![rat(0), rat(1)], den: vec![rat(1)] }),
            FieldSpec::PrimeField { p, q } => {
                if !is_prime(*p) {
                    return Err(Error::InvalidField(format!("{p} is not prime")));
                }
                if q % p == 0 {
                    return Err(Error::InvalidField("q must be nonzero".into()));
                }
                (Kind::Prime { p: *p }, Elem::Fp(q % p))
            }
            FieldSpec::ExtField { p, modulus, q } => {
                if !is_prime(*p) {
                    return Err(Error::InvalidField(format!("{p} is not prime")));
                }
                let fp = PrimeField { p: *p };
                let f = poly::trim(&fp, modulus.iter().map(|c| c % p).collect());
                let deg = poly::degree(&f).unwrap_or(0);
                if deg == 0 {
                    return Err(Error::InvalidField("modulus must have degree >= 1".into()));
                }
                if deg > MAX_EXT_DEGREE {
                    return Err(Error::InvalidField(format!(
                        "modulus degree {deg} exceeds the supported {MAX_EXT_DEGREE}"
                    )));
                }
                if f[deg] != 1 {
                    return Err(Error::InvalidField("modulus must be monic".into()));
                }
                if (*p as f64).powi(deg as i32 / 2) > 5e7 {
                    return Err(Error::InvalidField("field too large for brute-force irreducibility check".into()));
                }
                if !is_irreducible_mod_p(*p, &f) {
                    return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
                }
                let qq = poly::rem(&fp, &poly::trim(&fp, q.iter().map(|c| c % p).collect()), &f);
                if qq.is_empty() {
                    return Err(Error::InvalidField("q must be nonzero".into()));
                }
                (Kind::Ext { p: *p, modulus: f }, Elem::Fq(qq))
            }
        };
        Ok(FieldCtx(Arc::new(Inner { spec, kind, q })))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn q(&self) -> Elem {
        self.0.q.clone()
    }

    pub fn characteristic(&self) -> u64 {
        match self.0.kind {
            Kind::Prime { p } | Kind::Ext { p, .. } => p,
            _ => 0,
        }
    }

    /// Number of elements, `None` for infinite fields.
    pub fn size(&self) -> Option<u128> {
        match &self.0.kind {
            Kind::Prime { p } => Some(*p as u128),
            Kind::Ext { p, modulus } => Some((*p as u128).pow(poly::degree(modulus).unwrap_or(0) as u32)),
            _ => None,
        }
    }

    /// Least `n >= 1` with `q^n = 1`, if any.
    pub fn q_order(&self) -> Option<u64> {
        let q = self.q();
        let limit: u64 = match &self.0.kind {
            Kind::Rational => {
                let Elem::Rat(r) = &q else { unreachable!() };
                return if r.is_one() {
                    Some(1)
                } else if *r == rat(-1) {
                    Some(2)
                } else {
                    None
                };
            }
            Kind::Function => return None,
            Kind::Cyclotomic { n, .. } => *n as u64,
            Kind::Prime { .. } | Kind::Ext { .. } => self.size().unwrap() as u64 - 1,
        };
        let one = self.one();
        let mut acc = q.clone();
        for k in 1..=limit {
            if acc == one {
                return Some(k);
            }
            acc = self.mul(&acc, &q);
        }
        None
    }

    pub fn from_int(&self, n: i64) -> Elem {
        match &self.0.kind {
            Kind::Prime { p } | Kind::Ext { p, .. } => {
                let v = n.rem_euclid(*p as i64) as u64;
                match self.0.kind {
                    Kind::Prime { .. } => Elem::Fp(v),
                    _ => Elem::Fq(if v == 0 { vec![] } else { vec![v] }),
                }
            }
            _ => self.from_rational(&rat(n)),
        }
    }

    /// Embeds a rational. In positive characteristic the denominator must be
    /// invertible.
    pub fn from_rational(&self, r: &BigRational) -> Elem {
        match &self.0.kind {
            Kind::Rational => Elem::Rat(r.clone()),
            Kind::Cyclotomic { .. } => Elem::Cyc(poly::trim(&Rationals, vec![r.clone()])),
            Kind::Function => Elem::Func { num: poly::trim(&Rationals, vec![r.clone()]), den: vec![rat(1)] },
            Kind::Prime { p } | Kind::Ext { p, .. } => {
                let p = *p;
                let reduce = |x: &BigInt| -> u64 { x.mod_floor(&BigInt::from(p)).to_u64().unwrap() };
                let n = reduce(r.numer());
                let d = reduce(r.denom());
                let v = PrimeField { p }.mul(&n, &PrimeField { p }.inv(&d).unwrap_or(0));
                match self.0.kind {
                    Kind::Prime { .. } => Elem::Fp(v),
                    _ => Elem::Fq(if v == 0 { vec![] } else { vec![v] }),
                }
            }
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// `a^e` for any integer `e` (negative powers need `a != 0`).
    pub fn pow(&self, a: &Elem, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv(a).ok_or(Error::DivisionByZero)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// `q^k`; always defined because `q != 0`.
    pub fn q_pow(&self, k: i64) -> Elem {
        self.pow(&self.q(), k).expect("q is a unit")
    }

    /// All elements of a finite field of at most `limit` elements.
    pub fn elements(&self, limit: u128) -> Option<Vec<Elem>> {
        let size = self.size()?;
        if size > limit {
            return None;
        }
        match &self.0.kind {
            Kind::Prime { p } => Some((0..*p).map(Elem::Fp).collect()),
            Kind::Ext { p, modulus } => {
                let k = poly::degree(modulus).unwrap();
                let fp = PrimeField { p: *p };
                Some(
                    (0..size as u64)
                        .map(|code| {
                            let mut c = code;
                            let mut v = Vec::with_capacity(k);
                            for _ in 0..k {
                                v.push(c % p);
                                c /= p;
                            }
                            Elem::Fq(poly::trim(&fp, v))
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// A pseudo-random element. Finite fields are sampled uniformly; infinite
    /// fields return integers in `[-bound, bound]`.
    pub fn random<R: Rng>(&self, rng: &mut R, bound: i64) -> Elem {
        match &self.0.kind {
            Kind::Prime { p } => Elem::Fp(rng.gen_range(0..*p)),
            Kind::Ext { p, modulus } => {
                let k = poly::degree(modulus).unwrap();
                let v = (0..k).map(|_| rng.gen_range(0..*p)).collect();
                Elem::Fq(poly::trim(&PrimeField { p: *p }, v))
            }
            _ => self.from_int(rng.gen_range(-bound..=bound)),
        }
    }

    fn check_kind(&self, a: &Elem) -> bool {
        matches!(
            (&self.0.kind, a),
            (Kind::Rational, Elem::Rat(_))
                | (Kind::Cyclotomic { .. }, Elem::Cyc(_))
                | (Kind::Function, Elem::Func { .. })
                | (Kind::Prime { .. }, Elem::Fp(_))
                | (Kind::Ext { .. }, Elem::Fq(_))
        )
    }

    fn normalize_frac(&self, num: Vec<BigRational>, den: Vec<BigRational>) -> Elem {
        let q = Rationals;
        if num.is_empty() {
            return Elem::Func { num, den: vec![rat(1)] };
        }
        let g = poly::gcd(&q, &num, &den);
        let mut num = poly::divrem(&q, &num, &g).0;
        let mut den = poly::divrem(&q, &den, &g).0;
        let lead = den.last().cloned().expect("nonzero denominator");
        if !lead.is_one() {
            let inv = lead.recip();
            num = poly::scale(&q, &num, &inv);
            den = poly::scale(&q, &den, &inv);
        }
        Elem::Func { num, den }
    }

    /// Short description used in reports, e.g. `EXT_FIELD(3,[1,0,1])`.
    pub fn describe(&self) -> String {
        match &self.0.spec {
            FieldSpec::Rational { .. } => "RATIONAL".into(),
            FieldSpec::Cyclotomic { n } => format!("CYCLOTOMIC({n})"),
            FieldSpec::FunctionField => "FUNCTION_FIELD".into(),
            FieldSpec::PrimeField { p, .. } => format!("PRIME_FIELD({p})"),
            FieldSpec::ExtField { p, modulus, .. } => {
                format!("EXT_FIELD({p},[{}])", modulus.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }

    /// Whether `a` is the image of an integer, i.e. lies in the prime
    /// subfield `Z_p` (characteristic p) or in `Z` (characteristic 0).
    pub fn is_integral(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_integer(),
            Elem::Cyc(c) => c.len() <= 1 && c.first().is_none_or(|r| r.is_integer()),
            Elem::Func { num, den } => den.len() == 1 && num.len() <= 1 && num.first().is_none_or(|r| r.is_integer()),
            Elem::Fp(_) => true,
            Elem::Fq(v) => v.len() <= 1,
        }
    }

    /// Whether `a` is a rational number with absolute value at most `bound`
    /// (used for sanity limits; finite-field elements always qualify).
    pub fn is_small(&self, a: &Elem, bound: i64) -> bool {
        match a {
            Elem::Rat(r) => r.abs() <= rat(bound),
            _ => true,
        }
    }
}

impl Field for FieldCtx {
    type Elem = Elem;

    fn zero(&self) -> Elem {
        match &self.0.kind {
            Kind::Rational => Elem::Rat(BigRational::zero()),
            Kind::Cyclotomic { .. } => Elem::Cyc(Vec::new()),
            Kind::Function => Elem::Func { num: Vec::new(), den: vec![rat(1)] },
            Kind::Prime { .. } => Elem::Fp(0),
            Kind::Ext { .. } => Elem::Fq(Vec::new()),
        }
    }

    fn one(&self) -> Elem {
        self.from_int(1)
    }

    fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Cyc(v) => v.is_empty(),
            Elem::Func { num, .. } => num.is_empty(),
            Elem::Fp(v) => *v == 0,
            Elem::Fq(v) => v.is_empty(),
        }
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        debug_assert!(self.check_kind(a) && self.check_kind(b));
        match (&self.0.kind, a, b) {
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (_, Elem::Cyc(x), Elem::Cyc(y)) => Elem::Cyc(poly::add(&Rationals, x, y)),
            (_, Elem::Func { num: n1, den: d1 }, Elem::Func { num: n2, den: d2 }) => {
                let q = Rationals;
                if d1 == d2 {
                    return self.normalize_frac(poly::add(&q, n1, n2), d1.clone());
                }
                let num = poly::add(&q, &poly::mul(&q, n1, d2), &poly::mul(&q, n2, d1));
                self.normalize_frac(num, poly::mul(&q, d1, d2))
            }
            (Kind::Prime { p }, Elem::Fp(x), Elem::Fp(y)) => Elem::Fp(PrimeField { p: *p }.add(x, y)),
            (Kind::Ext { p, .. }, Elem::Fq(x), Elem::Fq(y)) => Elem::Fq(poly::add(&PrimeField { p: *p }, x, y)),
            _ => panic!("element does not belong to {}", self.describe()),
        }
    }

    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        debug_assert!(self.check_kind(a) && self.check_kind(b));
        match (&self.0.kind, a, b) {
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Kind::Cyclotomic { modulus, .. }, Elem::Cyc(x), Elem::Cyc(y)) => {
                Elem::Cyc(poly::mul_mod(&Rationals, x, y, modulus))
            }
            (_, Elem::Func { num: n1, den: d1 }, Elem::Func { num: n2, den: d2 }) => {
                let q = Rationals;
                self.normalize_frac(poly::mul(&q, n1, n2), poly::mul(&q, d1, d2))
            }
            (Kind::Prime { p }, Elem::Fp(x), Elem::Fp(y)) => Elem::Fp(PrimeField { p: *p }.mul(x, y)),
            (Kind::Ext { p, modulus }, Elem::Fq(x), Elem::Fq(y)) => {
                Elem::Fq(poly::mul_mod(&PrimeField { p: *p }, x, y, modulus))
            }
            _ => panic!("element does not belong to {}", self.describe()),
        }
    }

    fn neg(&self, a: &Elem) -> Elem {
        match (&self.0.kind, a) {
            (_, Elem::Rat(x)) => Elem::Rat(-x),
            (_, Elem::Cyc(x)) => Elem::Cyc(x.iter().map(|c| -c).collect()),
            (_, Elem::Func { num, den }) => Elem::Func { num: num.iter().map(|c| -c).collect(), den: den.clone() },
            (Kind::Prime { p }, Elem::Fp(x)) => Elem::Fp(PrimeField { p: *p }.neg(x)),
            (Kind::Ext { p, .. }, Elem::Fq(x)) => {
                let fp = PrimeField { p: *p };
                Elem::Fq(x.iter().map(|c| fp.neg(c)).collect())
            }
            _ => panic!("element does not belong to {}", self.describe()),
        }
    }

    fn inv(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (&self.0.kind, a) {
            (_, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (Kind::Cyclotomic { modulus, .. }, Elem::Cyc(x)) => Elem::Cyc(poly::inv_mod(&Rationals, x, modulus)?),
            (_, Elem::Func { num, den }) => self.normalize_frac(den.clone(), num.clone()),
            (Kind::Prime { p }, Elem::Fp(x)) => Elem::Fp(PrimeField { p: *p }.inv(x)?),
            (Kind::Ext { p, modulus }, Elem::Fq(x)) => Elem::Fq(poly::inv_mod(&PrimeField { p: *p }, x, modulus)?),
            _ => panic!("element does not belong to {}", self.describe()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldCtx {
        FieldCtx::new(FieldSpec::ExtField { p: 3, modulus: vec![1, 0, 1], q: vec![2] }).unwrap()
    }

    #[test]
    fn prime_field_three() {
        let f = FieldCtx::new(FieldSpec::PrimeField { p: 3, q: 2 }).unwrap();
        assert_eq!(f.characteristic(), 3);
        assert_eq!(f.q_order(), Some(2));
    }

    #[test]
    fn ext_field_valid_and_order() {
        let f = FieldCtx::new(FieldSpec::ExtField { p: 3, modulus: vec![1, 0, 1], q: vec![0, 1] }).unwrap();
        assert_eq!(f.q_order(), Some(4));
        assert_eq!(f.size(), Some(9));
    }

    #[test]
    fn reducible_modulus_rejected() {
        let err = FieldCtx::new(FieldSpec::ExtField { p: 2, modulus: vec![1, 0, 1], q: vec![0, 1] }).unwrap_err();
        assert!(matches!(err, Error::InvalidField(_)));
    }

    #[test]
    fn zero_q_and_zero_n_rejected() {
        assert!(FieldCtx::new(FieldSpec::Rational { q: rat(0) }).is_err());
        assert!(FieldCtx::new(FieldSpec::Cyclotomic { n: 0 }).is_err());
        assert!(FieldCtx::new(FieldSpec::PrimeField { p: 5, q: 10 }).is_err());
        assert!(FieldCtx::new(FieldSpec::PrimeField { p: 4, q: 1 }).is_err());
    }

    #[test]
    fn characteristic_zero_fields() {
        assert_eq!(FieldCtx::new(FieldSpec::Rational { q: rat(2) }).unwrap().characteristic(), 0);
        assert_eq!(FieldCtx::new(FieldSpec::PrimeField { p: 5, q: 2 }).unwrap().characteristic(), 5);
        let f4 = FieldCtx::new(FieldSpec::ExtField { p: 2, modulus: vec![1, 1, 1], q: vec![0, 1] }).unwrap();
        assert_eq!(f4.characteristic(), 2);
        assert_eq!(f4.q_order(), Some(3));
    }

    #[test]
    fn q_orders() {
        assert_eq!(FieldCtx::new(FieldSpec::FunctionField).unwrap().q_order(), None);
        assert_eq!(FieldCtx::new(FieldSpec::Cyclotomic { n: 5 }).unwrap().q_order(), Some(5));
        assert_eq!(FieldCtx::new(FieldSpec::Cyclotomic { n: 12 }).unwrap().q_order(), Some(12));
        assert_eq!(FieldCtx::new(FieldSpec::Rational { q: rat(2) }).unwrap().q_order(), None);
        assert_eq!(FieldCtx::new(FieldSpec::Rational { q: rat(-1) }).unwrap().q_order(), Some(2));
    }

    #[test]
    fn cyclotomic_polynomials() {
        let phi6: Vec<_> = cyclotomic_polynomial(6);
        assert_eq!(phi6, vec![rat(1), rat(-1), rat(1)]);
        assert_eq!(cyclotomic_polynomial(5).len(), 5);
    }

    #[test]
    fn inverses_in_f9() {
        let f = f9();
        for a in f.elements(100).unwrap() {
            if f.is_zero(&a) {
                continue;
            }
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }

    #[test]
    fn function_field_canonical() {
        let f = FieldCtx::new(FieldSpec::FunctionField).unwrap();
        let t = f.q();
        let one = f.one();
        // (t^2 - 1)/(t - 1) = t + 1
        let num = f.sub(&f.mul(&t, &t), &one);
        let den = f.sub(&t, &one);
        let r = f.div(&num, &den).unwrap();
        assert_eq!(r, f.add(&t, &one));
    }

    #[test]
    fn from_rational_in_char_p() {
        let f = FieldCtx::new(FieldSpec::PrimeField { p: 7, q: 3 }).unwrap();
        let half = f.from_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(f.mul(&half, &f.from_int(2)), f.one());
    }
}
