//! Dense univariate polynomials over an abstract field.
//!
//! Polynomials are `Vec<E>` stored lowest degree first and kept trimmed: the
//! zero polynomial is the empty vector and the last coefficient of any other
//! polynomial is nonzero. The same routines back the cyclotomic residues, the
//! rational function field, the extension fields and the minimal-polynomial
//! work done during module decomposition.

use std::fmt::Debug;

/// The arithmetic a coefficient domain must provide.
pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

pub fn trim<F: Field>(f: &F, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree, with `None` for the zero polynomial.
pub fn degree<E>(p: &[E]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => f.zero(),
        })
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let nb: Vec<_> = b.iter().map(|c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Euclidean division `a = q*b + r` with `deg r < deg b`.
///
/// Panics if `b` is zero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("trimmed polynomial has nonzero lead");
    let mut r: Vec<F::Elem> = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(f, r));
    }
    let mut q = vec![f.zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + db], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = f.inv(lead).expect("nonzero lead");
            scale(f, a, &inv)
        }
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.last() {
        None => (Vec::new(), s0, t0),
        Some(lead) => {
            let inv = f.inv(lead).expect("nonzero lead");
            (scale(f, &r0, &inv), scale(f, &s0, &inv), scale(f, &t0, &inv))
        }
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let (g, s, _) = ext_gcd(f, a, m);
    if g.len() == 1 {
        Some(rem(f, &s, m))
    } else {
        None
    }
}

pub fn mul_mod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

/// `a^e mod m` by square-and-multiply.
pub fn pow_mod<F: Field>(f: &F, a: &[F::Elem], mut e: u128, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[f.one()], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(f, &acc, &base, m);
        }
        base = mul_mod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub fn eval<F: Field>(f: &F, p: &[F::Elem], x: &F::Elem) -> F::Elem {
    p.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct F7;
    impl Field for F7 {
        type Elem = u64;
        fn zero(&self) -> u64 {
            0
        }
        fn one(&self) -> u64 {
            1
        }
        fn is_zero(&self, a: &u64) -> bool {
            *a == 0
        }
        fn add(&self, a: &u64, b: &u64) -> u64 {
            (a + b) % 7
        }
        fn sub(&self, a: &u64, b: &u64) -> u64 {
            (a + 7 - b) % 7
        }
        fn mul(&self, a: &u64, b: &u64) -> u64 {
            (a * b) % 7
        }
        fn neg(&self, a: &u64) -> u64 {
            (7 - a) % 7
        }
        fn inv(&self, a: &u64) -> Option<u64> {
            (1..7).find(|x| (x * a) % 7 == 1)
        }
    }

    #[test]
    fn divrem_reconstructs() {
        let a = vec![3, 0, 5, 1, 6];
        let b = vec![2, 1, 1];
        let (q, r) = divrem(&F7, &a, &b);
        assert!(r.len() < b.len());
        assert_eq!(add(&F7, &mul(&F7, &q, &b), &r), a);
    }

    #[test]
    fn ext_gcd_bezout() {
        // (x+1)(x+2) and (x+1)(x+3)
        let a = mul(&F7, &[1, 1], &[2, 1]);
        let b = mul(&F7, &[1, 1], &[3, 1]);
        let (g, s, t) = ext_gcd(&F7, &a, &b);
        assert_eq!(g, vec![1, 1]);
        assert_eq!(add(&F7, &mul(&F7, &s, &a), &mul(&F7, &t, &b)), g);
    }

    #[test]
    fn pow_mod_fermat() {
        // x^7 = x mod (x^2 + 1)? over F7, x^49 = x in F_49
        let m = vec![1, 0, 1];
        assert_eq!(pow_mod(&F7, &[0, 1], 49, &m), vec![0, 1]);
    }
}
