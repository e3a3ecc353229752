//! Orbits of weight points under `alpha`, and the breaks of the two
//! generalized Weyl subalgebras.
//!
//! Points on an orbit are addressed by their offset `k` from the base point,
//! i.e. `alpha_point(base, k)`. On a circular orbit of length `r` offsets are
//! taken modulo `r`.

use std::fmt;
use std::str::FromStr;

use crate::basering::{alpha_point, LaurentPoly, WeightPoint};
use crate::coeffs::FieldCtx;
use crate::error::{Error, Result};
use crate::poly::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubalgebraName {
    /// Generated by `X`, `Y1` over `R`; `t = q sigma - 1`, `T = Y1`.
    AQ,
    /// Generated by `X`, `Y` over `R`; `t = tau`, `T = Y`.
    A1,
    D,
}

impl SubalgebraName {
    /// The element `t` of a generalized Weyl subalgebra.
    pub fn t(self, ctx: &FieldCtx) -> Result<LaurentPoly> {
        match self {
            SubalgebraName::AQ => Ok(LaurentPoly::t_quantum(ctx)),
            SubalgebraName::A1 => Ok(LaurentPoly::t_classical(ctx)),
            SubalgebraName::D => {
                Err(Error::InvalidArgument("D is not a generalized Weyl algebra; use AQ or A1".into()))
            }
        }
    }
}

impl fmt::Display for SubalgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubalgebraName::AQ => "AQ",
            SubalgebraName::A1 => "A1",
            SubalgebraName::D => "D",
        })
    }
}

impl FromStr for SubalgebraName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "AQ" => Ok(SubalgebraName::AQ),
            "A1" => Ok(SubalgebraName::A1),
            "D" => Ok(SubalgebraName::D),
            _ => Err(Error::InvalidArgument(format!("unknown algebra {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitKind {
    Infinite,
    Circular(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub base: WeightPoint,
    pub kind: OrbitKind,
}

impl Orbit {
    pub fn length(&self) -> Option<u64> {
        match self.kind {
            OrbitKind::Infinite => None,
            OrbitKind::Circular(r) => Some(r),
        }
    }

    pub fn is_circular(&self) -> bool {
        matches!(self.kind, OrbitKind::Circular(_))
    }

    /// Reduces an offset modulo the orbit length (identity on linear orbits).
    pub fn normalize(&self, k: i64) -> i64 {
        match self.kind {
            OrbitKind::Infinite => k,
            OrbitKind::Circular(r) => k.rem_euclid(r as i64),
        }
    }

    pub fn point(&self, ctx: &FieldCtx, k: i64) -> WeightPoint {
        alpha_point(ctx, &self.base, self.normalize(k))
    }

    /// Offset of `w` on this orbit, searching `range` for linear orbits.
    pub fn offset_of(&self, ctx: &FieldCtx, w: &WeightPoint, range: (i64, i64)) -> Option<i64> {
        let (lo, hi) = match self.kind {
            OrbitKind::Infinite => range,
            OrbitKind::Circular(r) => (0, r as i64 - 1),
        };
        (lo..=hi).find(|&k| self.point(ctx, k) == *w)
    }
}

/// Computes the orbit through `base`.
pub fn compute_orbit(ctx: &FieldCtx, base: &WeightPoint) -> Orbit {
    let p = ctx.characteristic();
    let kind = match (p, ctx.q_order()) {
        (0, _) | (_, None) => OrbitKind::Infinite,
        (p, Some(d)) => {
            let bound = p * d;
            let r = (1..=bound as i64)
                .find(|&k| alpha_point(ctx, base, k) == *base)
                .expect("alpha has finite order p * ord(q) on points");
            OrbitKind::Circular(r as u64)
        }
    };
    Orbit { base: base.clone(), kind }
}

/// Offsets `k` in `window` (or the whole circular orbit) where the flavor's
/// `t` vanishes at `alpha_point(base, k)`.
pub fn breaks(
    ctx: &FieldCtx,
    orbit: &Orbit,
    flavor: SubalgebraName,
    window: (i64, i64),
) -> Result<Vec<(i64, WeightPoint)>> {
    let t = flavor.t(ctx)?;
    let (lo, hi) = match orbit.kind {
        OrbitKind::Infinite => window,
        OrbitKind::Circular(r) => (0, r as i64 - 1),
    };
    Ok((lo..=hi)
        .filter_map(|k| {
            let w = orbit.point(ctx, k);
            ctx.is_zero(&t.eval_at(ctx, &w)).then_some((k, w))
        })
        .collect())
}

/// Index `j` of the segment `(m_{j-1}, m_j]` containing the point at
/// `offset`, where `m_0` is the break with least non-negative offset and the
/// breaks are numbered in increasing offset order.
pub fn j_index(ctx: &FieldCtx, orbit: &Orbit, flavor: SubalgebraName, offset: i64) -> Result<usize> {
    let OrbitKind::Circular(r) = orbit.kind else {
        return Err(Error::NotApplicable("break index needs a circular orbit".into()));
    };
    let bs: Vec<i64> = breaks(ctx, orbit, flavor, (0, 0))?.into_iter().map(|(k, _)| k).collect();
    let b0 = *bs.first().ok_or_else(|| Error::NotApplicable("orbit has no breaks".into()))?;
    let rel = (offset - b0).rem_euclid(r as i64);
    if rel == 0 {
        return Ok(0);
    }
    Ok(bs.iter().position(|&b| b - b0 >= rel).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FieldSpec;
    use num_rational::BigRational;

    fn pt(ctx: &FieldCtx, a: &str, b: &str) -> WeightPoint {
        WeightPoint::new(ctx, ctx.parse(a).unwrap(), ctx.parse(b).unwrap()).unwrap()
    }

    #[test]
    fn orbit_kinds() {
        let qq = FieldCtx::new(FieldSpec::Rational { q: BigRational::from_integer(2.into()) }).unwrap();
        assert_eq!(compute_orbit(&qq, &pt(&qq, "0", "1")).kind, OrbitKind::Infinite);
        let f3 = FieldCtx::new(FieldSpec::PrimeField { p: 3, q: 2 }).unwrap();
        assert_eq!(compute_orbit(&f3, &pt(&f3, "1", "1")).kind, OrbitKind::Circular(6));
        let f5 = FieldCtx::new(FieldSpec::PrimeField { p: 5, q: 1 }).unwrap();
        assert_eq!(compute_orbit(&f5, &pt(&f5, "0", "1")).kind, OrbitKind::Circular(5));
    }

    #[test]
    fn break_examples() {
        let qq = FieldCtx::new(FieldSpec::Rational { q: BigRational::from_integer(2.into()) }).unwrap();
        let o = compute_orbit(&qq, &pt(&qq, "0", "1"));
        let b = breaks(&qq, &o, SubalgebraName::AQ, (-5, 5)).unwrap();
        assert_eq!(b, vec![(-1, pt(&qq, "-1", "1/2"))]);
        let o = compute_orbit(&qq, &pt(&qq, "1/2", "3"));
        assert!(breaks(&qq, &o, SubalgebraName::A1, (-5, 5)).unwrap().is_empty());
        assert!(breaks(&qq, &o, SubalgebraName::D, (-5, 5)).is_err());

        let f3 = FieldCtx::new(FieldSpec::PrimeField { p: 3, q: 2 }).unwrap();
        let o = compute_orbit(&f3, &pt(&f3, "1", "1"));
        let b = breaks(&f3, &o, SubalgebraName::A1, (0, 0)).unwrap();
        assert_eq!(b, vec![(2, pt(&f3, "0", "1")), (5, pt(&f3, "0", "2"))]);
    }

    #[test]
    fn j_index_examples() {
        let f3 = FieldCtx::new(FieldSpec::PrimeField { p: 3, q: 2 }).unwrap();
        let o = compute_orbit(&f3, &pt(&f3, "1", "1"));
        assert_eq!(j_index(&f3, &o, SubalgebraName::A1, 3).unwrap(), 1);
        assert_eq!(j_index(&f3, &o, SubalgebraName::A1, 2).unwrap(), 0);
        assert_eq!(j_index(&f3, &o, SubalgebraName::A1, 5).unwrap(), 1);
        assert_eq!(j_index(&f3, &o, SubalgebraName::A1, 0).unwrap(), 0);

        let f3one = FieldCtx::new(FieldSpec::PrimeField { p: 3, q: 1 }).unwrap();
        let o = compute_orbit(&f3one, &pt(&f3one, "0", "1"));
        for k in 0..3 {
            assert_eq!(j_index(&f3one, &o, SubalgebraName::A1, k).unwrap(), 0);
        }
    }
}
