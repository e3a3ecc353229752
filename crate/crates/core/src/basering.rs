//! The base ring `R = K[tau, sigma, sigma^-1]`, its automorphism `alpha` and
//! K-rational points `(a, b)` standing for the maximal ideals
//! `(tau - a, sigma - b)`.

use std::collections::BTreeMap;

use crate::coeffs::{Elem, FieldCtx};
use crate::error::{Error, Result};
use crate::poly::Field;

/// The point `(a, b)`; `b` is nonzero since `sigma` is a unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightPoint {
    pub a: Elem,
    pub b: Elem,
}

impl WeightPoint {
    pub fn new(ctx: &FieldCtx, a: Elem, b: Elem) -> Result<Self> {
        if ctx.is_zero(&b) {
            return Err(Error::InvalidArgument("weight point needs b != 0".into()));
        }
        Ok(WeightPoint { a, b })
    }
}

/// `alpha^k` applied to a point: `(a + k, q^k b)`.
pub fn alpha_point(ctx: &FieldCtx, w: &WeightPoint, k: i64) -> WeightPoint {
    WeightPoint { a: ctx.add(&w.a, &ctx.from_int(k)), b: ctx.mul(&w.b, &ctx.q_pow(k)) }
}

/// A finitely supported sum of monomials `c * tau^i * sigma^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<(u32, i32), Elem>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(ctx: &FieldCtx, c: Elem, i: u32, j: i32) -> Self {
        let mut p = Self::zero();
        if !ctx.is_zero(&c) {
            p.terms.insert((i, j), c);
        }
        p
    }

    pub fn constant(ctx: &FieldCtx, c: Elem) -> Self {
        Self::monomial(ctx, c, 0, 0)
    }

    pub fn tau(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 1, 0)
    }

    pub fn sigma(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 0, 1)
    }

    pub fn sigma_inv(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 0, -1)
    }

    /// `q sigma - 1`, the element `t` of the quantum subalgebra.
    pub fn t_quantum(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.q(), 0, 1).sub(ctx, &Self::constant(ctx, ctx.one()))
    }

    /// `tau`, the element `t` of the classical subalgebra.
    pub fn t_classical(ctx: &FieldCtx) -> Self {
        Self::tau(ctx)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, i32), &Elem)> {
        self.terms.iter()
    }

    pub fn from_terms(ctx: &FieldCtx, terms: impl IntoIterator<Item = ((u32, i32), Elem)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(ctx, k, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, ctx: &FieldCtx, key: (u32, i32), c: &Elem) {
        let v = match self.terms.get(&key) {
            Some(old) => ctx.add(old, c),
            None => c.clone(),
        };
        if ctx.is_zero(&v) {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(ctx, *k, c);
        }
        out
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Self) -> Self {
        self.add(ctx, &other.scale(ctx, &ctx.neg(&ctx.one())))
    }

    pub fn scale(&self, ctx: &FieldCtx, c: &Elem) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(ctx, *k, &ctx.mul(v, c));
        }
        out
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                out.add_term(ctx, (i1 + i2, j1 + j2), &ctx.mul(c1, c2));
            }
        }
        out
    }

    /// Substitutes `tau -> a`, `sigma -> b`.
    pub fn eval_at(&self, ctx: &FieldCtx, w: &WeightPoint) -> Elem {
        let mut acc = ctx.zero();
        for ((i, j), c) in &self.terms {
            let t = ctx.pow(&w.a, *i as i64).expect("non-negative power");
            let s = ctx.pow(&w.b, *j as i64).expect("b is nonzero");
            acc = ctx.add(&acc, &ctx.mul(c, &ctx.mul(&t, &s)));
        }
        acc
    }

    /// `alpha^k(f)`: substitutes `tau -> tau - k`, `sigma -> sigma / q^k`.
    ///
    /// Evaluating the result at `w` equals evaluating `f` at
    /// `alpha_point(w, -k)`.
    pub fn twist(&self, ctx: &FieldCtx, k: i64) -> Self {
        let shift = ctx.from_int(-k);
        let mut out = Self::zero();
        for ((i, j), c) in &self.terms {
            let c = ctx.mul(c, &ctx.q_pow(-k * *j as i64));
            // (tau - k)^i = sum_l binom(i, l) tau^l (-k)^(i-l)
            for l in 0..=*i {
                let coeff = ctx.mul(&binomial(ctx, *i, l), &ctx.pow(&shift, (*i - l) as i64).unwrap());
                out.add_term(ctx, (l, *j), &ctx.mul(&c, &coeff));
            }
        }
        out
    }
}

/// Binomial coefficient computed in the integers and then embedded.
fn binomial(ctx: &FieldCtx, n: u32, k: u32) -> Elem {
    let mut v = num_bigint::BigInt::from(1u32);
    for t in 0..k {
        v = v * (n - t) / (t + 1);
    }
    ctx.from_rational(&num_rational::BigRational::from_integer(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FieldSpec;
    use num_rational::BigRational;

    fn qq() -> FieldCtx {
        FieldCtx::new(FieldSpec::Rational { q: BigRational::from_integer(2.into()) }).unwrap()
    }

    #[test]
    fn alpha_point_values() {
        let f = qq();
        let w = WeightPoint::new(&f, f.from_int(0), f.from_int(1)).unwrap();
        let w1 = alpha_point(&f, &w, 1);
        assert_eq!((w1.a.clone(), w1.b.clone()), (f.from_int(1), f.from_int(2)));
        assert_eq!(alpha_point(&f, &w1, -1), w);
        assert_eq!(alpha_point(&f, &w, 0), w);

        let f3 = FieldCtx::new(FieldSpec::PrimeField { p: 3, q: 2 }).unwrap();
        let w = WeightPoint::new(&f3, f3.from_int(1), f3.from_int(1)).unwrap();
        assert_eq!(alpha_point(&f3, &w, 6), w);
    }

    #[test]
    fn eval_examples() {
        let f = qq();
        let t = LaurentPoly::t_quantum(&f);
        let w = WeightPoint::new(&f, f.from_int(5), f.inv(&f.q()).unwrap()).unwrap();
        assert!(f.is_zero(&t.eval_at(&f, &w)));
        let tau = LaurentPoly::tau(&f);
        let w0 = WeightPoint::new(&f, f.zero(), f.from_int(7)).unwrap();
        assert!(f.is_zero(&tau.eval_at(&f, &w0)));
        let g = LaurentPoly::monomial(&f, f.one(), 1, -1);
        let w = WeightPoint::new(&f, f.from_int(3), f.from_int(2)).unwrap();
        assert_eq!(g.eval_at(&f, &w), f.parse("3/2").unwrap());
    }

    #[test]
    fn twist_examples() {
        let f = qq();
        let one = LaurentPoly::constant(&f, f.one());
        assert_eq!(LaurentPoly::tau(&f).twist(&f, 1), LaurentPoly::tau(&f).sub(&f, &one));
        assert_eq!(LaurentPoly::sigma(&f).twist(&f, -1), LaurentPoly::monomial(&f, f.q(), 0, 1));
        assert_eq!(LaurentPoly::t_quantum(&f).twist(&f, 1), LaurentPoly::sigma(&f).sub(&f, &one));
    }

    #[test]
    fn twist_in_small_characteristic() {
        let f = FieldCtx::new(FieldSpec::PrimeField { p: 2, q: 1 }).unwrap();
        let tau = LaurentPoly::tau(&f);
        let cube = tau.mul(&f, &tau).mul(&f, &tau);
        let w = WeightPoint::new(&f, f.from_int(1), f.one()).unwrap();
        let lhs = cube.twist(&f, 3).eval_at(&f, &w);
        let rhs = cube.eval_at(&f, &alpha_point(&f, &w, -3));
        assert_eq!(lhs, rhs);
    }
}
