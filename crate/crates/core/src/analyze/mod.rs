//! Structural analysis of finite-dimensional and windowed weight modules:
//! weight dimensions, equidimensionality, irreducibility, endomorphisms,
//! decomposition and isomorphism.

mod hom;

pub use hom::{are_isomorphic, decompose, endomorphisms, hom_space, intertwines, Decomposition};

use std::collections::{BTreeMap, VecDeque};

use crate::coeffs::{Elem, FieldCtx};
use crate::error::Result;
use crate::orbits::SubalgebraName;
use crate::poly::Field;
use crate::wmod::{GradedMap, WeightModule};

/// Search limits and the seed for randomized searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub seed: u64,
    /// Random trials when an exhaustive search is too large.
    pub trials: usize,
    /// Largest solution space (in elements) searched exhaustively.
    pub exhaustive_limit: u128,
    /// Largest number of lines enumerated per weight space.
    pub line_limit: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { seed: 0, trials: 200, exhaustive_limit: 20_000, line_limit: 50_000 }
    }
}

impl Budget {
    pub fn with_seed(seed: u64) -> Self {
        Budget { seed, ..Default::default() }
    }
}

/// Per-offset subspace bases.
pub type SubspaceBases = BTreeMap<i64, Vec<Vec<Elem>>>;

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    None,
    /// A proper nonzero submodule (or the zero module for the zero module).
    Submodule(SubspaceBases),
    /// A graded idempotent endomorphism other than 0 and the identity.
    Idempotent(GradedMap),
    /// A graded invertible map commuting with the operators.
    Intertwiner(GradedMap),
    /// Two offsets with different dimensions, and the offsets grouped by
    /// dimension.
    Unequal {
        first: i64,
        second: i64,
        classes: Vec<(usize, Vec<i64>)>,
    },
    /// The weight spaces at this offset of the two modules differ in
    /// dimension.
    DimensionMismatch {
        offset: i64,
        left: usize,
        right: usize,
    },
    /// The intertwining space has this dimension and was searched
    /// exhaustively without finding an invertible element.
    NoInvertible {
        hom_dim: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Yes(Witness),
    No(Witness),
    Unknown(String),
    NotApplicable(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "YES",
            Verdict::No(_) => "NO",
            Verdict::Unknown(_) => "UNKNOWN",
            Verdict::NotApplicable(_) => "NOT_APPLICABLE",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }
}

/// Nonzero weight-space dimensions in offset order.
pub fn weight_dims(v: &WeightModule) -> Vec<(i64, usize)> {
    v.offsets().map(|k| (k, v.dim_at(k))).filter(|&(_, d)| d > 0).collect()
}

/// Whether all weight spaces over a circular orbit have the same dimension.
pub fn equidimension_check(v: &WeightModule) -> Verdict {
    if !v.is_circular() {
        return Verdict::NotApplicable("module lives on a window of a linear orbit".into());
    }
    let dims: Vec<(i64, usize)> = v.offsets().map(|k| (k, v.dim_at(k))).collect();
    let (k0, d0) = dims[0];
    match dims.iter().find(|(_, d)| *d != d0) {
        None => Verdict::Yes(Witness::None),
        Some(&(k1, _)) => {
            let mut classes: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
            for (k, d) in &dims {
                classes.entry(*d).or_default().push(*k);
            }
            Verdict::No(Witness::Unequal { first: k0, second: k1, classes: classes.into_iter().collect() })
        }
    }
}

/// A subspace in fully reduced echelon form.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Elem>)>,
}

impl Echelon {
    /// Reduces `v` against the stored rows; returns the remainder.
    fn reduce(&self, ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if ctx.is_zero(&v[*p]) {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(r) {
                *x = ctx.sub(x, &ctx.mul(&f, y));
            }
        }
        v
    }

    /// Adds `v` if independent; returns whether it was added.
    fn insert(&mut self, ctx: &FieldCtx, v: &[Elem]) -> bool {
        let r = self.reduce(ctx, v);
        let Some(p) = r.iter().position(|x| !ctx.is_zero(x)) else {
            return false;
        };
        let inv = ctx.inv(&r[p]).unwrap();
        let r: Vec<Elem> = r.iter().map(|x| ctx.mul(x, &inv)).collect();
        for (_, row) in self.rows.iter_mut() {
            if ctx.is_zero(&row[p]) {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                *x = ctx.sub(x, &ctx.mul(&f, y));
            }
        }
        self.rows.push((p, r));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn vectors(&self) -> Vec<Vec<Elem>> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(p, _)| *p);
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

/// The submodule generated by `vec` at offset `k` under the operators of
/// `algebra`, as per-offset bases.
pub fn generated_submodule(v: &WeightModule, algebra: SubalgebraName, k: i64, vec: &[Elem]) -> SubspaceBases {
    let ctx = v.ctx();
    let ops = WeightModule::algebra_ops(algebra);
    let mut spans: BTreeMap<i64, Echelon> = BTreeMap::new();
    let mut queue = VecDeque::new();
    if spans.entry(k).or_default().insert(ctx, vec) {
        queue.push_back((k, vec.to_vec()));
    }
    while let Some((k, x)) = queue.pop_front() {
        for op in ops {
            let Some((t, y)) = v.apply(*op, k, &x) else { continue };
            if y.iter().all(|e| ctx.is_zero(e)) {
                continue;
            }
            if spans.entry(t).or_default().insert(ctx, &y) {
                queue.push_back((t, y));
            }
        }
    }
    spans.into_iter().filter(|(_, e)| e.dim() > 0).map(|(k, e)| (k, e.vectors())).collect()
}

fn total(bases: &SubspaceBases) -> usize {
    bases.values().map(Vec::len).sum()
}

/// All lines of `K^d` as normalized representatives (first nonzero
/// coordinate 1), if there are at most `limit` of them.
fn all_lines(ctx: &FieldCtx, d: usize, limit: u128) -> Option<Vec<Vec<Elem>>> {
    let size = ctx.size()?;
    let count = (0..d as u32).try_fold(0u128, |acc, i| acc.checked_add(size.checked_pow(i)?))?;
    if count > limit {
        return None;
    }
    let elems = ctx.elements(size)?;
    let mut out = Vec::new();
    for lead in 0..d {
        // Coordinates after the leading one range over all of K.
        let tail = d - lead - 1;
        let n = size.pow(tail as u32);
        for code in 0..n {
            let mut v = vec![ctx.zero(); d];
            v[lead] = ctx.one();
            let mut c = code;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = elems[(c % size) as usize].clone();
                c /= size;
            }
            out.push(v);
        }
    }
    Some(out)
}

/// Whether every nonzero weight vector generates the module.
///
/// Submodules of weight modules are graded, so it suffices to test lines
/// inside single weight spaces. Over finite fields every line is tested
/// (within `budget.line_limit`); otherwise basis lines and their pairwise
/// sums are tested and spaces of dimension at least 2 leave the verdict
/// `UNKNOWN` unless a proper submodule turns up.
pub fn is_irreducible(v: &WeightModule, algebra: SubalgebraName, budget: &Budget) -> Result<Verdict> {
    v.require_ops(algebra)?;
    if !v.is_circular() {
        return Ok(Verdict::NotApplicable("module lives on a window of a linear orbit".into()));
    }
    let ctx = v.ctx();
    let n = v.total_dim();
    if n == 0 {
        return Ok(Verdict::No(Witness::Submodule(SubspaceBases::new())));
    }
    let mut exhaustive = true;
    for k in v.offsets() {
        let d = v.dim_at(k);
        if d == 0 {
            continue;
        }
        let lines = match all_lines(ctx, d, budget.line_limit) {
            Some(lines) => lines,
            None => {
                exhaustive = d <= 1 && exhaustive;
                let unit = |i: usize| {
                    let mut e = vec![ctx.zero(); d];
                    e[i] = ctx.one();
                    e
                };
                let mut lines: Vec<Vec<Elem>> = (0..d).map(unit).collect();
                for i in 0..d {
                    for j in i + 1..d {
                        lines.push(unit(i).iter().zip(unit(j)).map(|(a, b)| ctx.add(a, &b)).collect());
                    }
                }
                lines
            }
        };
        for line in lines {
            let sub = generated_submodule(v, algebra, k, &line);
            if total(&sub) < n {
                return Ok(Verdict::No(Witness::Submodule(sub)));
            }
        }
    }
    Ok(if exhaustive {
        Verdict::Yes(Witness::None)
    } else {
        Verdict::Unknown(
            "weight spaces of dimension at least 2 over an infinite field; sampled lines all generate".into(),
        )
    })
}

/// Whether the given per-offset subspaces are closed under the operators
/// of `algebra`.
pub fn is_closed(v: &WeightModule, algebra: SubalgebraName, bases: &SubspaceBases) -> bool {
    let ctx = v.ctx();
    let empty = Vec::new();
    bases.iter().all(|(k, vs)| {
        WeightModule::algebra_ops(algebra).iter().all(|op| {
            vs.iter().all(|x| match v.apply(*op, *k, x) {
                None => true,
                Some((t, y)) => {
                    let mut e = Echelon::default();
                    for b in bases.get(&t).unwrap_or(&empty) {
                        e.insert(ctx, b);
                    }
                    e.reduce(ctx, &y).iter().all(|c| ctx.is_zero(c))
                }
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::FieldSpec;
    use crate::families::{construct_family, FamilyId};
    use crate::wmod::Op;

    fn f9() -> FieldCtx {
        FieldCtx::new(FieldSpec::ExtField { p: 3, modulus: vec![1, 0, 1], q: vec![2] }).unwrap()
    }

    fn f4() -> FieldCtx {
        FieldCtx::new(FieldSpec::ExtField { p: 2, modulus: vec![1, 1, 1], q: vec![0, 1] }).unwrap()
    }

    #[test]
    fn remark_136_is_not_equidimensional() {
        let f = FieldCtx::new(FieldSpec::PrimeField { p: 3, q: 2 }).unwrap();
        let m = construct_family(&f, &FamilyId::Remark136, (0, 0)).unwrap();
        assert_eq!(weight_dims(&m), vec![(0, 1), (1, 1), (2, 1)]);
        match equidimension_check(&m) {
            Verdict::No(Witness::Unequal { first, second, classes }) => {
                assert_eq!((first, second), (0, 3));
                assert_eq!(classes, vec![(0, vec![3, 4, 5]), (1, vec![0, 1, 2])]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn chain_cycle_one_is_irreducible() {
        let f = f4();
        let id = FamilyId::ChainCycle { word: vec![Op::Y], a: vec![f.one()] };
        let m = construct_family(&f, &id, (0, 0)).unwrap();
        assert!(is_irreducible(&m, SubalgebraName::D, &Budget::default()).unwrap().is_yes());
    }

    #[test]
    fn chain_cycle_two_is_equidimensional() {
        let f = f9();
        let id = FamilyId::ChainCycle { word: vec![Op::Y, Op::Y1], a: vec![f.one(), f.one()] };
        let m = construct_family(&f, &id, (0, 0)).unwrap();
        assert!(equidimension_check(&m).is_yes());
    }

    #[test]
    fn windowed_modules_are_not_applicable() {
        let f = FieldCtx::new(FieldSpec::Rational { q: num_rational::BigRational::from_integer(2.into()) }).unwrap();
        let id = FamilyId::VqBA { b: f.from_int(3), a: f.from_int(5) };
        let m = construct_family(&f, &id, (-2, 2)).unwrap();
        assert!(matches!(equidimension_check(&m), Verdict::NotApplicable(_)));
        assert!(matches!(
            is_irreducible(&m, SubalgebraName::D, &Budget::default()).unwrap(),
            Verdict::NotApplicable(_)
        ));
    }

    #[test]
    fn submodule_witness_is_closed() {
        let f = f9();
        let id = FamilyId::ChainCycle { word: vec![Op::Y, Op::Y1], a: vec![f.one(), f.one()] };
        let m = construct_family(&f, &id, (0, 0)).unwrap().restrict(SubalgebraName::AQ);
        if let Verdict::No(Witness::Submodule(s)) = is_irreducible(&m, SubalgebraName::AQ, &Budget::default()).unwrap()
        {
            assert!(is_closed(&m, SubalgebraName::AQ, &s));
            assert!(total(&s) > 0 && total(&s) < m.total_dim());
        } else {
            panic!("expected a proper submodule");
        }
    }

    #[test]
    fn lines_over_f4() {
        let f = f4();
        assert_eq!(all_lines(&f, 2, 100).unwrap().len(), 5);
        assert_eq!(all_lines(&f, 3, 100).unwrap().len(), 21);
    }
}
