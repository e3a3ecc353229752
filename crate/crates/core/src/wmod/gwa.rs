//! The indecomposable weight modules of the generalized Weyl subalgebras
//! `A_q` (`T = Y1`, `t = q sigma - 1`) and `A_1` (`T = Y`, `t = tau`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{EdgeFlags, GradedMap, Op, RawModule, WeightModule};
use crate::basering::WeightPoint;
use crate::coeffs::{Elem, FieldCtx};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::orbits::{breaks, compute_orbit, j_index, OrbitKind, SubalgebraName};
use crate::poly::Field;

/// A letter of the words labelling the circular families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
        s.chars()
            .map(|c| match c {
                'x' | 'X' => Ok(Letter::X),
                'y' | 'Y' => Ok(Letter::Y),
                _ => Err(Error::InvalidArgument(format!("word letter {c:?} is not x or y"))),
            })
            .collect()
    }

    pub fn format_word(w: &[Letter]) -> String {
        w.iter()
            .map(|l| match l {
                Letter::X => 'x',
                Letter::Y => 'y',
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GwaKind {
    /// Linear orbit without breaks in the window.
    SimpleNoBreak,
    /// Linear orbit with breaks; `j` is an interval of the extended break set
    /// and `j_prime` a subset of `j` avoiding its maximum (both as offsets).
    WithBreaks { j: Vec<i64>, j_prime: Vec<i64> },
    /// Circular orbit without breaks, twisted by `f` at the base point.
    CircNoBreak { f: Elem },
    /// Circular orbit with breaks: a string of segments glued by `w`.
    Family1 { j: usize, word: Vec<Letter> },
    /// Circular orbit with breaks: a band of segments closed up with `f`.
    Family2 { word: Vec<Letter>, f: Elem },
}

impl fmt::Display for GwaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GwaKind::SimpleNoBreak => write!(f, "SIMPLE_NO_BREAK"),
            GwaKind::WithBreaks { j, j_prime } => write!(f, "WITH_BREAKS(J={j:?}, J'={j_prime:?})"),
            GwaKind::CircNoBreak { .. } => write!(f, "CIRC_NO_BREAK"),
            GwaKind::Family1 { j, word } => write!(f, "FAMILY1(j={j}, w={})", Letter::format_word(word)),
            GwaKind::Family2 { word, .. } => write!(f, "FAMILY2(w={})", Letter::format_word(word)),
        }
    }
}

fn t_op(flavor: SubalgebraName) -> Result<Op> {
    match flavor {
        SubalgebraName::AQ => Ok(Op::Y1),
        SubalgebraName::A1 => Ok(Op::Y),
        SubalgebraName::D => Err(Error::InvalidArgument("construct_gwa needs flavor AQ or A1".into())),
    }
}

/// Sparse description of an operator: (source offset, source index) ->
/// list of (target index, coefficient).
type Entries = BTreeMap<(i64, usize), Vec<(usize, Elem)>>;

fn to_blocks(
    ctx: &FieldCtx,
    entries: &Entries,
    dims: &BTreeMap<i64, usize>,
    shift: i64,
    normalize: impl Fn(i64) -> i64,
) -> GradedMap {
    let mut blocks = GradedMap::new();
    for (&(k, j), targets) in entries {
        let t = normalize(k + shift);
        let m = blocks.entry(k).or_insert_with(|| Matrix::zeros(ctx, dims.get(&t).copied().unwrap_or(0), dims[&k]));
        for (i, c) in targets {
            m.set(*i, j, c.clone());
        }
    }
    blocks
}

/// Builds a module of the given kind over `A_q` or `A_1`.
pub fn construct_gwa(
    ctx: &FieldCtx,
    flavor: SubalgebraName,
    kind: &GwaKind,
    base: &WeightPoint,
    window: (i64, i64),
) -> Result<WeightModule> {
    let top = t_op(flavor)?;
    let t = flavor.t(ctx)?;
    let orbit = compute_orbit(ctx, base);
    let circular = orbit.is_circular();
    let tval = |k: i64| t.eval_at(ctx, &orbit.point(ctx, k));
    let name = format!("{flavor} {kind}");
    let mut raw = RawModule::new(base.clone(), window, name);
    let mut x = Entries::new();
    let mut tt = Entries::new();
    let one = ctx.one();

    match kind {
        GwaKind::SimpleNoBreak | GwaKind::WithBreaks { .. } if circular => {
            return Err(Error::SideCondition(format!("{kind} needs a linear orbit")));
        }
        GwaKind::CircNoBreak { .. } | GwaKind::Family1 { .. } | GwaKind::Family2 { .. } if !circular => {
            return Err(Error::SideCondition(format!("{kind} needs a circular orbit")));
        }
        _ => {}
    }
    let (lo, hi) = window;
    if !circular && lo > hi {
        return Err(Error::InvalidModule(format!("empty window [{lo},{hi}]")));
    }

    match kind {
        GwaKind::SimpleNoBreak => {
            if let Some((k, _)) = breaks(ctx, &orbit, flavor, window)?.first() {
                return Err(Error::SideCondition(format!("break at offset {k} inside the window")));
            }
            for k in lo..=hi {
                raw.spaces.insert(k, vec![format!("v{k}")]);
                if k < hi {
                    x.insert((k, 0), vec![(0, tval(k))]);
                }
                if k > lo {
                    tt.insert((k, 0), vec![(0, one.clone())]);
                }
            }
            raw.edges = EdgeFlags { low: true, high: true };
        }
        GwaKind::WithBreaks { j, j_prime } => {
            let bs: Vec<i64> = breaks(ctx, &orbit, flavor, window)?.into_iter().map(|(k, _)| k).collect();
            if bs.is_empty() {
                return Err(Error::SideCondition("no break inside the window".into()));
            }
            let periodic = flavor == SubalgebraName::AQ && ctx.q_order().is_some();
            let mut bprime = bs.clone();
            if !periodic {
                bprime.push(*bs.last().unwrap() + 1);
            }
            let jset: BTreeSet<i64> = j.iter().copied().collect();
            if jset.is_empty() {
                return Err(Error::SideCondition("J must be nonempty".into()));
            }
            let positions: Vec<usize> = jset
                .iter()
                .map(|k| {
                    bprime.iter().position(|b| b == k).ok_or_else(|| {
                        Error::SideCondition(format!("offset {k} is not in the extended break set {bprime:?}"))
                    })
                })
                .collect::<Result<_>>()?;
            if positions.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(Error::SideCondition("J must be an interval of the extended break set".into()));
            }
            let jmin = *jset.iter().next().unwrap();
            let jmax = *jset.iter().next_back().unwrap();
            if jmin < lo || jmax > hi {
                return Err(Error::SideCondition("J must lie inside the window".into()));
            }
            let jp: BTreeSet<i64> = j_prime.iter().copied().collect();
            if !jp.is_subset(&jset) || jp.contains(&jmax) {
                return Err(Error::SideCondition("J' must be a subset of J without its maximum".into()));
            }
            let n0 = bs.iter().copied().filter(|&b| b < jmin).max();
            let n1 = bs.contains(&jmax).then_some(jmax);
            let in_support = |k: i64| n0.is_none_or(|n| k > n) && n1.is_none_or(|n| k <= n);
            let is_break = |k: i64| bs.contains(&k);
            for k in lo..=hi {
                if !in_support(k) {
                    continue;
                }
                raw.spaces.insert(k, vec![format!("v{k}")]);
                if k < hi {
                    if !is_break(k) {
                        x.insert((k, 0), vec![(0, tval(k))]);
                    } else if jp.contains(&k) {
                        x.insert((k, 0), vec![(0, one.clone())]);
                    }
                }
                if k > lo && !jp.contains(&(k - 1)) && n0 != Some(k - 1) {
                    tt.insert((k, 0), vec![(0, one.clone())]);
                }
            }
            raw.edges = EdgeFlags { low: n0.is_none(), high: n1.is_none() };
        }
        GwaKind::CircNoBreak { f } => {
            if ctx.is_zero(f) {
                return Err(Error::SideCondition("f must be nonzero".into()));
            }
            if !breaks(ctx, &orbit, flavor, window)?.is_empty() {
                return Err(Error::SideCondition("orbit has breaks".into()));
            }
            let r = orbit.length().unwrap() as i64;
            let finv = ctx.inv(f).unwrap();
            for k in 0..r {
                raw.spaces.insert(k, vec![format!("v{k}")]);
                let c = if k == 0 { ctx.mul(f, &tval(k)) } else { tval(k) };
                x.insert((k, 0), vec![(0, c)]);
                let prev = orbit.normalize(k - 1);
                tt.insert((k, 0), vec![(0, if prev == 0 { finv.clone() } else { one.clone() })]);
            }
        }
        GwaKind::Family1 { j, word } => {
            let bs: Vec<i64> = breaks(ctx, &orbit, flavor, window)?.into_iter().map(|(k, _)| k).collect();
            let m = bs.len();
            if m == 0 {
                return Err(Error::SideCondition("orbit has no breaks".into()));
            }
            let r = orbit.length().unwrap() as i64;
            let n = word.len();
            let mut index: BTreeMap<(i64, usize), usize> = BTreeMap::new();
            for o in 0..r {
                let seg = j_index(ctx, &orbit, flavor, o)?;
                let ks: Vec<usize> = (0..=n).filter(|k| (k + j) % m == seg).collect();
                for (i, k) in ks.iter().enumerate() {
                    index.insert((o, *k), i);
                }
                if !ks.is_empty() {
                    raw.spaces.insert(o, ks.iter().map(|k| format!("e{k}")).collect());
                }
            }
            for (&(o, k), &i) in &index {
                let next = orbit.normalize(o + 1);
                let prev = orbit.normalize(o - 1);
                if !bs.contains(&o) {
                    x.insert((o, i), vec![(index[&(next, k)], tval(o))]);
                } else if k < n && word[k] == Letter::X {
                    x.insert((o, i), vec![(index[&(next, k + 1)], one.clone())]);
                }
                if !bs.contains(&prev) {
                    tt.insert((o, i), vec![(index[&(prev, k)], one.clone())]);
                } else if k >= 1 && word[k - 1] == Letter::Y {
                    tt.insert((o, i), vec![(index[&(prev, k - 1)], one.clone())]);
                }
            }
        }
        GwaKind::Family2 { word, f } => {
            if ctx.is_zero(f) {
                return Err(Error::SideCondition("f must be nonzero".into()));
            }
            let bs: Vec<i64> = breaks(ctx, &orbit, flavor, window)?.into_iter().map(|(k, _)| k).collect();
            let m = bs.len();
            if m == 0 {
                return Err(Error::SideCondition("orbit has no breaks".into()));
            }
            let n = word.len();
            if n == 0 || n % m != 0 {
                return Err(Error::SideCondition(format!(
                    "word length {n} must be a positive multiple of the break count {m}"
                )));
            }
            let r = orbit.length().unwrap() as i64;
            let mut index: BTreeMap<(i64, usize), usize> = BTreeMap::new();
            for o in 0..r {
                let seg = j_index(ctx, &orbit, flavor, o)?;
                let ks: Vec<usize> = (1..=n).filter(|k| k % m == seg).collect();
                for (i, k) in ks.iter().enumerate() {
                    index.insert((o, *k), i);
                }
                raw.spaces.insert(o, ks.iter().map(|k| format!("e{k}")).collect());
            }
            for (&(o, k), &i) in &index {
                let next = orbit.normalize(o + 1);
                let prev = orbit.normalize(o - 1);
                if !bs.contains(&o) {
                    x.insert((o, i), vec![(index[&(next, k)], tval(o))]);
                } else if k != n && word[k] == Letter::X {
                    x.insert((o, i), vec![(index[&(next, k + 1)], one.clone())]);
                } else if k == n && word[0] == Letter::X {
                    x.insert((o, i), vec![(index[&(next, 1)], f.clone())]);
                }
                if !bs.contains(&prev) {
                    tt.insert((o, i), vec![(index[&(prev, k)], one.clone())]);
                } else if k != 1 && word[k - 1] == Letter::Y {
                    tt.insert((o, i), vec![(index[&(prev, k - 1)], one.clone())]);
                } else if k == 1 && word[0] == Letter::Y {
                    tt.insert((o, i), vec![(index[&(prev, n)], f.clone())]);
                }
            }
        }
    }

    let dims: BTreeMap<i64, usize> = raw.spaces.iter().map(|(k, l)| (*k, l.len())).collect();
    let norm = |k: i64| if let OrbitKind::Circular(r) = orbit.kind { k.rem_euclid(r as i64) } else { k };
    raw.ops.insert(Op::X, to_blocks(ctx, &x, &dims, 1, norm));
    raw.ops.insert(top, to_blocks(ctx, &tt, &dims, -1, norm));
    WeightModule::new(ctx, raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FieldSpec;
    use num_rational::BigRational;

    fn qq() -> FieldCtx {
        FieldCtx::new(FieldSpec::Rational { q: BigRational::from_integer(2.into()) }).unwrap()
    }

    fn pt(ctx: &FieldCtx, a: &str, b: &str) -> WeightPoint {
        WeightPoint::new(ctx, ctx.parse(a).unwrap(), ctx.parse(b).unwrap()).unwrap()
    }

    #[test]
    fn simple_no_break_values() {
        let f = qq();
        let m = construct_gwa(&f, SubalgebraName::AQ, &GwaKind::SimpleNoBreak, &pt(&f, "5", "3"), (-1, 1)).unwrap();
        let (t, v) = m.apply(Op::X, 0, &[f.one()]).unwrap();
        assert_eq!((t, v), (1, vec![f.from_int(5)]));
        let (t, v) = m.apply(Op::Y1, 0, &[f.one()]).unwrap();
        assert_eq!((t, v), (-1, vec![f.one()]));
        assert!(!m.has_op(Op::Y));
    }

    #[test]
    fn simple_no_break_rejects_break() {
        let f = qq();
        let err = construct_gwa(&f, SubalgebraName::AQ, &GwaKind::SimpleNoBreak, &pt(&f, "0", "1"), (-2, 2));
        assert!(matches!(err, Err(Error::SideCondition(_))));
    }

    #[test]
    fn with_breaks_support() {
        let f = qq();
        // A1 break at offset 0 for base (0, 3); B' = {0, 1}.
        let base = pt(&f, "0", "3");
        let kind = GwaKind::WithBreaks { j: vec![0], j_prime: vec![] };
        let m = construct_gwa(&f, SubalgebraName::A1, &kind, &base, (-3, 3)).unwrap();
        assert_eq!(m.spaces().keys().copied().collect::<Vec<_>>(), vec![-3, -2, -1, 0]);
        assert!(m.edges().low && !m.edges().high);
        let kind = GwaKind::WithBreaks { j: vec![1], j_prime: vec![] };
        let m = construct_gwa(&f, SubalgebraName::A1, &kind, &base, (-3, 3)).unwrap();
        assert_eq!(m.spaces().keys().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(!m.edges().low && m.edges().high);
        let kind = GwaKind::WithBreaks { j: vec![0, 1], j_prime: vec![0] };
        let m = construct_gwa(&f, SubalgebraName::A1, &kind, &base, (-3, 3)).unwrap();
        assert_eq!(m.total_dim(), 7);
        assert_eq!(m.apply(Op::X, 0, &[f.one()]).unwrap().1, vec![f.one()]);
        assert_eq!(m.apply(Op::Y, 1, &[f.one()]).unwrap().1, vec![f.zero()]);
    }

    #[test]
    fn with_breaks_rejects_bad_sets() {
        let f = qq();
        let base = pt(&f, "0", "3");
        for kind in [
            GwaKind::WithBreaks { j: vec![], j_prime: vec![] },
            GwaKind::WithBreaks { j: vec![2], j_prime: vec![] },
            GwaKind::WithBreaks { j: vec![0, 1], j_prime: vec![1] },
        ] {
            assert!(construct_gwa(&f, SubalgebraName::A1, &kind, &base, (-3, 3)).is_err());
        }
    }

    #[test]
    fn circular_families() {
        let f9 = FieldCtx::new(FieldSpec::ExtField { p: 3, modulus: vec![1, 0, 1], q: vec![2] }).unwrap();
        let g = f9.parse("[0,1]").unwrap();
        let base = WeightPoint::new(&f9, g.clone(), g).unwrap();
        let m =
            construct_gwa(&f9, SubalgebraName::A1, &GwaKind::CircNoBreak { f: f9.from_int(2) }, &base, (0, 0)).unwrap();
        assert_eq!(m.total_dim(), 6);

        let f3 = FieldCtx::new(FieldSpec::PrimeField { p: 3, q: 2 }).unwrap();
        let base = pt(&f3, "1", "1");
        let empty = GwaKind::Family1 { j: 0, word: vec![] };
        let m = construct_gwa(&f3, SubalgebraName::A1, &empty, &base, (0, 0)).unwrap();
        assert_eq!(m.total_dim(), 3);
        let w = GwaKind::Family1 { j: 0, word: vec![Letter::X, Letter::Y] };
        let m = construct_gwa(&f3, SubalgebraName::A1, &w, &base, (0, 0)).unwrap();
        assert_eq!(m.total_dim(), 9);
        let band = GwaKind::Family2 { word: vec![Letter::X, Letter::Y], f: f3.one() };
        let m = construct_gwa(&f3, SubalgebraName::A1, &band, &base, (0, 0)).unwrap();
        assert_eq!(m.total_dim(), 6);
        let bad = GwaKind::Family2 { word: vec![Letter::X], f: f3.one() };
        assert!(construct_gwa(&f3, SubalgebraName::A1, &bad, &base, (0, 0)).is_err());
    }
}
