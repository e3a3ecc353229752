//! Weight modules supported on a single orbit.
//!
//! A module stores, for each offset `k` of its orbit, the basis labels of the
//! weight space at `alpha_point(base, k)` and, for each present operator,
//! one matrix per source offset. `X` raises the offset by one, `Y` and `Y1`
//! lower it by one. `tau` and `sigma` act on the space at offset `k` by the
//! coordinates of its point and are never stored.
//!
//! Modules on linear orbits are represented on a finite window of offsets.
//! Operator blocks whose target falls outside the window are not stored;
//! relation checks involving them are skipped.

mod gwa;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use gwa::{construct_gwa, GwaKind, Letter};

use crate::basering::{LaurentPoly, WeightPoint};
use crate::coeffs::{Elem, FieldCtx};
use crate::error::{Error, Result};
use crate::linalg::{LinearSystem, Matrix, SparseRow};
use crate::orbits::{compute_orbit, Orbit, OrbitKind, SubalgebraName};
use crate::poly::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    X,
    Y,
    Y1,
}

impl Op {
    pub const ALL: [Op; 3] = [Op::X, Op::Y, Op::Y1];

    /// Offset change caused by the operator.
    pub fn shift(self) -> i64 {
        match self {
            Op::X => 1,
            Op::Y | Op::Y1 => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::X => "X",
            Op::Y => "Y",
            Op::Y1 => "Y1",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" => Ok(Op::X),
            "Y" => Ok(Op::Y),
            "Y1" => Ok(Op::Y1),
            _ => Err(Error::InvalidArgument(format!("unknown operator {s:?}"))),
        }
    }
}

/// The offsets a module is represented on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Range {
    /// Offsets `lo..=hi` of a linear orbit.
    Window { lo: i64, hi: i64 },
    /// All offsets `0..r` of a circular orbit.
    Circular { r: u64 },
}

impl Range {
    pub fn offsets(&self) -> std::ops::RangeInclusive<i64> {
        match *self {
            Range::Window { lo, hi } => lo..=hi,
            Range::Circular { r } => 0..=(r as i64 - 1),
        }
    }

    pub fn contains(&self, k: i64) -> bool {
        self.offsets().contains(&k)
    }
}

/// Whether the true support continues past the low or high end of a window.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeFlags {
    pub low: bool,
    pub high: bool,
}

/// Graded blocks of a linear map, keyed by source offset. Missing blocks are
/// zero.
pub type GradedMap = BTreeMap<i64, Matrix>;

/// A weight module over `D` or one of its subalgebras.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightModule {
    ctx: FieldCtx,
    orbit: Orbit,
    range: Range,
    spaces: BTreeMap<i64, Vec<String>>,
    ops: BTreeMap<Op, GradedMap>,
    edges: EdgeFlags,
    kind: String,
}

/// Unvalidated module data, the input of [`WeightModule::new`].
#[derive(Clone, Debug)]
pub struct RawModule {
    pub base: WeightPoint,
    /// Window for linear orbits; ignored on circular orbits.
    pub window: (i64, i64),
    pub spaces: BTreeMap<i64, Vec<String>>,
    pub ops: BTreeMap<Op, GradedMap>,
    pub edges: EdgeFlags,
    pub kind: String,
}

impl RawModule {
    pub fn new(base: WeightPoint, window: (i64, i64), kind: impl Into<String>) -> Self {
        RawModule {
            base,
            window,
            spaces: BTreeMap::new(),
            ops: BTreeMap::new(),
            edges: EdgeFlags::default(),
            kind: kind.into(),
        }
    }
}

impl WeightModule {
    /// Validates raw data: shapes, offsets inside the range and nonzero `b`.
    pub fn new(ctx: &FieldCtx, raw: RawModule) -> Result<Self> {
        if ctx.is_zero(&raw.base.b) {
            return Err(Error::InvalidModule("base point needs b != 0".into()));
        }
        let orbit = compute_orbit(ctx, &raw.base);
        let range = match orbit.kind {
            OrbitKind::Circular(r) => Range::Circular { r },
            OrbitKind::Infinite => {
                let (lo, hi) = raw.window;
                if lo > hi {
                    return Err(Error::InvalidModule(format!("empty window [{lo},{hi}]")));
                }
                Range::Window { lo, hi }
            }
        };
        let circular = orbit.is_circular();
        let mut spaces = BTreeMap::new();
        for (k, labels) in raw.spaces {
            if !range.contains(k) {
                return Err(Error::InvalidModule(format!("weight space at offset {k} outside the module range")));
            }
            if !labels.is_empty() {
                spaces.insert(k, labels);
            }
        }
        let dim = |k: i64| spaces.get(&k).map_or(0, |l| l.len());
        let mut ops = BTreeMap::new();
        for (op, blocks) in raw.ops {
            let mut clean = GradedMap::new();
            for (k, m) in blocks {
                if !range.contains(k) {
                    return Err(Error::InvalidModule(format!("{op} block at offset {k} outside the module range")));
                }
                let t = if circular { orbit.normalize(k + op.shift()) } else { k + op.shift() };
                if !range.contains(t) {
                    return Err(Error::InvalidModule(format!("{op} block at offset {k} leaves the window")));
                }
                if m.rows() != dim(t) || m.cols() != dim(k) {
                    return Err(Error::Shape(format!(
                        "{op} at offset {k} is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        dim(t),
                        dim(k)
                    )));
                }
                if !m.is_zero(ctx) {
                    clean.insert(k, m);
                }
            }
            ops.insert(op, clean);
        }
        let edges = if circular { EdgeFlags::default() } else { raw.edges };
        Ok(WeightModule { ctx: ctx.clone(), orbit, range, spaces, ops, edges, kind: raw.kind })
    }

    /// The zero module on the orbit of `base`.
    pub fn zero(ctx: &FieldCtx, base: WeightPoint, window: (i64, i64)) -> Result<Self> {
        let mut raw = RawModule::new(base, window, "zero");
        for op in Op::ALL {
            raw.ops.insert(op, GradedMap::new());
        }
        Self::new(ctx, raw)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn range(&self) -> Range {
        self.range
    }

    pub fn edges(&self) -> EdgeFlags {
        self.edges
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn with_kind(mut self, kind: impl Into<String>) -> Self {
        self.kind = kind.into();
        self
    }

    pub fn is_circular(&self) -> bool {
        self.orbit.is_circular()
    }

    pub fn spaces(&self) -> &BTreeMap<i64, Vec<String>> {
        &self.spaces
    }

    pub fn dim_at(&self, k: i64) -> usize {
        self.spaces.get(&k).map_or(0, |l| l.len())
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(|l| l.len()).sum()
    }

    pub fn labels_at(&self, k: i64) -> &[String] {
        self.spaces.get(&k).map_or(&[], |l| l.as_slice())
    }

    pub fn point(&self, k: i64) -> WeightPoint {
        self.orbit.point(&self.ctx, k)
    }

    pub fn has_op(&self, op: Op) -> bool {
        self.ops.contains_key(&op)
    }

    pub fn op_blocks(&self, op: Op) -> Option<&GradedMap> {
        self.ops.get(&op)
    }

    pub fn present_ops(&self) -> Vec<Op> {
        self.ops.keys().copied().collect()
    }

    /// Ops the given algebra acts through.
    pub fn algebra_ops(algebra: SubalgebraName) -> &'static [Op] {
        match algebra {
            SubalgebraName::AQ => &[Op::X, Op::Y1],
            SubalgebraName::A1 => &[Op::X, Op::Y],
            SubalgebraName::D => &[Op::X, Op::Y, Op::Y1],
        }
    }

    pub fn require_ops(&self, algebra: SubalgebraName) -> Result<()> {
        for op in Self::algebra_ops(algebra) {
            if !self.has_op(*op) {
                return Err(Error::MissingOperator(format!("{op} (needed for {algebra})")));
            }
        }
        Ok(())
    }

    /// Target offset of `op` from `k`, or `None` if it leaves the window.
    pub fn target(&self, op: Op, k: i64) -> Option<i64> {
        let t = self.orbit.normalize(k + op.shift());
        self.range.contains(t).then_some(t)
    }

    /// The block of `op` from offset `k`, materialized as a zero matrix if
    /// not stored. `None` if the target leaves the window or the operator is
    /// absent.
    pub fn block(&self, op: Op, k: i64) -> Option<Matrix> {
        let blocks = self.ops.get(&op)?;
        let t = self.target(op, k)?;
        Some(blocks.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(&self.ctx, self.dim_at(t), self.dim_at(k))))
    }

    /// Applies `op` to a vector in the weight space at offset `k`.
    pub fn apply(&self, op: Op, k: i64, v: &[Elem]) -> Option<(i64, Vec<Elem>)> {
        let t = self.target(op, k)?;
        let m = self.block(op, k)?;
        Some((t, m.apply(&self.ctx, v)))
    }

    /// Scalar by which `r` acts on the weight space at offset `k`.
    pub fn scalar(&self, r: &LaurentPoly, k: i64) -> Elem {
        r.eval_at(&self.ctx, &self.point(k))
    }

    /// Offsets of all weight positions in the range, including zero spaces.
    pub fn offsets(&self) -> std::ops::RangeInclusive<i64> {
        self.range.offsets()
    }

    /// Drops the operator not belonging to the subalgebra.
    pub fn restrict(&self, flavor: SubalgebraName) -> WeightModule {
        let mut out = self.clone();
        match flavor {
            SubalgebraName::AQ => {
                out.ops.remove(&Op::Y);
            }
            SubalgebraName::A1 => {
                out.ops.remove(&Op::Y1);
            }
            SubalgebraName::D => {}
        }
        out
    }

    /// Replaces (or adds) an operator, validating shapes.
    pub fn with_op(&self, op: Op, blocks: GradedMap) -> Result<WeightModule> {
        let mut raw = self.to_raw();
        raw.ops.insert(op, blocks);
        WeightModule::new(&self.ctx, raw)
    }

    pub fn to_raw(&self) -> RawModule {
        RawModule {
            base: self.orbit.base.clone(),
            window: match self.range {
                Range::Window { lo, hi } => (lo, hi),
                Range::Circular { r } => (0, r as i64 - 1),
            },
            spaces: self.spaces.clone(),
            ops: self.ops.clone(),
            edges: self.edges,
            kind: self.kind.clone(),
        }
    }

    fn check_compatible(&self, other: &WeightModule) -> Result<()> {
        if self.ctx != other.ctx || self.orbit.kind != other.orbit.kind || self.range != other.range {
            return Err(Error::ContextMismatch);
        }
        if self.orbit.base != other.orbit.base {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// External direct sum on the same orbit and range. Only operators present
    /// in both summands are kept.
    pub fn direct_sum(&self, other: &WeightModule) -> Result<WeightModule> {
        self.check_compatible(other)?;
        let ctx = &self.ctx;
        let mut raw =
            RawModule::new(self.orbit.base.clone(), self.to_raw().window, format!("{} + {}", self.kind, other.kind));
        for k in self.offsets() {
            let mut labels: Vec<String> = self.labels_at(k).iter().map(|l| format!("{l}@1")).collect();
            labels.extend(other.labels_at(k).iter().map(|l| format!("{l}@2")));
            if !labels.is_empty() {
                raw.spaces.insert(k, labels);
            }
        }
        for op in Op::ALL {
            if !(self.has_op(op) && other.has_op(op)) {
                continue;
            }
            let mut blocks = GradedMap::new();
            for k in self.offsets() {
                let (Some(a), Some(b)) = (self.block(op, k), other.block(op, k)) else { continue };
                blocks.insert(k, block_diag(ctx, &a, &b));
            }
            raw.ops.insert(op, blocks);
        }
        raw.edges = EdgeFlags { low: self.edges.low || other.edges.low, high: self.edges.high || other.edges.high };
        WeightModule::new(ctx, raw)
    }

    /// Conjugates by a graded change of basis: the new basis at offset `k` is
    /// given by the columns of `p[k]` (identity where absent).
    pub fn change_basis(&self, p: &GradedMap) -> Result<WeightModule> {
        let ctx = &self.ctx;
        let mut inv = GradedMap::new();
        for (k, m) in p {
            if m.rows() != self.dim_at(*k) || m.cols() != self.dim_at(*k) {
                return Err(Error::Shape(format!("basis change at offset {k} has the wrong size")));
            }
            inv.insert(
                *k,
                m.inverse(ctx)
                    .ok_or_else(|| Error::InvalidArgument(format!("basis change at offset {k} is singular")))?,
            );
        }
        let mut raw = self.to_raw();
        for (op, blocks) in &self.ops {
            let mut nb = GradedMap::new();
            for (k, a) in blocks {
                let t = self.target(*op, *k).expect("stored blocks stay in range");
                let mut m = a.clone();
                if let Some(pk) = p.get(k) {
                    m = m.mul(ctx, pk);
                }
                if let Some(it) = inv.get(&t) {
                    m = it.mul(ctx, &m);
                }
                nb.insert(*k, m);
            }
            raw.ops.insert(*op, nb);
        }
        WeightModule::new(ctx, raw)
    }

    /// The submodule spanned at each offset by the given vectors, which must
    /// be linearly independent and closed under every present operator.
    pub fn submodule(&self, bases: &BTreeMap<i64, Vec<Vec<Elem>>>, kind: impl Into<String>) -> Result<WeightModule> {
        let ctx = &self.ctx;
        let mut raw = RawModule::new(self.orbit.base.clone(), self.to_raw().window, kind);
        raw.edges = self.edges;
        for (k, vs) in bases {
            if vs.is_empty() {
                continue;
            }
            let labels = self.labels_at(*k);
            raw.spaces.insert(
                *k,
                vs.iter()
                    .enumerate()
                    .map(|(i, v)| describe_vector(ctx, labels, v).unwrap_or_else(|| format!("u{i}@{k}")))
                    .collect(),
            );
        }
        for op in self.present_ops() {
            let mut blocks = GradedMap::new();
            for (k, vs) in bases {
                if vs.is_empty() {
                    continue;
                }
                let Some(t) = self.target(op, *k) else { continue };
                let empty = Vec::new();
                let tb = bases.get(&t).unwrap_or(&empty);
                let mut cols = Vec::new();
                for v in vs {
                    let (_, img) = self.apply(op, *k, v).expect("target in range");
                    cols.push(coordinates(ctx, tb, &img, self.dim_at(t)).ok_or_else(|| {
                        Error::InvalidArgument(format!("subspace is not closed under {op} at offset {k}"))
                    })?);
                }
                let mut m = Matrix::zeros(ctx, tb.len(), vs.len());
                for (j, c) in cols.iter().enumerate() {
                    for (i, x) in c.iter().enumerate() {
                        m.set(i, j, x.clone());
                    }
                }
                blocks.insert(*k, m);
            }
            raw.ops.insert(op, blocks);
        }
        WeightModule::new(ctx, raw)
    }

    /// A text picture of the module: one line per weight space with its
    /// point and the nonzero operator entries leaving it.
    pub fn diagram(&self) -> String {
        let ctx = &self.ctx;
        let mut out = format!(
            "{} over {} [{}]\n",
            self.kind,
            ctx.describe(),
            match self.range {
                Range::Window { lo, hi } => format!("window {lo}..{hi}"),
                Range::Circular { r } => format!("circular, length {r}"),
            }
        );
        for k in self.offsets() {
            let labels = self.labels_at(k);
            if labels.is_empty() {
                continue;
            }
            let w = self.point(k);
            out.push_str(&format!("  [{k}] (tau={}, sigma={})\n", ctx.print(&w.a), ctx.print(&w.b)));
            for (j, l) in labels.iter().enumerate() {
                let mut arrows = Vec::new();
                for op in self.present_ops() {
                    let Some(m) = self.block(op, k) else {
                        arrows.push(format!("{op} -> (outside window)"));
                        continue;
                    };
                    let t = self.target(op, k).unwrap();
                    let tl = self.labels_at(t);
                    let terms: Vec<String> = (0..m.rows())
                        .filter(|&i| !ctx.is_zero(m.get(i, j)))
                        .map(|i| format!("{}*{}", ctx.print(m.get(i, j)), tl[i]))
                        .collect();
                    arrows.push(format!("{op} -> {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") }));
                }
                out.push_str(&format!("    {l}: {}\n", arrows.join("; ")));
            }
        }
        out
    }
}

fn block_diag(ctx: &FieldCtx, a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(ctx, a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
        }
    }
    m
}

/// Coordinates of `v` in the span of `basis`, if it lies there.
pub fn coordinates(ctx: &FieldCtx, basis: &[Vec<Elem>], v: &[Elem], dim: usize) -> Option<Vec<Elem>> {
    let mut sys = LinearSystem::new(ctx, basis.len());
    for i in 0..dim {
        let row: SparseRow = basis.iter().enumerate().map(|(j, b)| (j, b[i].clone())).collect();
        if !sys.add(row, v[i].clone()) {
            return None;
        }
    }
    Some(sys.solve().particular)
}

/// Reuses a label when the vector is a basis vector.
fn describe_vector(ctx: &FieldCtx, labels: &[String], v: &[Elem]) -> Option<String> {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !ctx.is_zero(&v[i])).collect();
    match nz.as_slice() {
        [i] if v[*i] == ctx.one() => Some(labels[*i].clone()),
        _ => None,
    }
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
    fn zero_module() {
        let f = qq();
        let base = WeightPoint::new(&f, f.zero(), f.one()).unwrap();
        let m = WeightModule::zero(&f, base, (-1, 1)).unwrap();
        assert_eq!(m.total_dim(), 0);
    }

    #[test]
    fn single_point_on_double_break() {
        let f = qq();
        let base = WeightPoint::new(&f, f.zero(), f.inv(&f.q()).unwrap()).unwrap();
        let mut raw = RawModule::new(base, (0, 0), "point");
        raw.spaces.insert(0, vec!["v".into()]);
        for op in Op::ALL {
            raw.ops.insert(op, GradedMap::new());
        }
        let m = WeightModule::new(&f, raw).unwrap();
        assert_eq!(m.total_dim(), 1);
    }

    #[test]
    fn wrong_shape_rejected() {
        let f = qq();
        let base = WeightPoint::new(&f, f.from_int(3), f.from_int(5)).unwrap();
        let mut raw = RawModule::new(base, (0, 1), "bad");
        raw.spaces.insert(0, vec!["v0".into()]);
        raw.spaces.insert(1, vec!["v1".into()]);
        let mut x = GradedMap::new();
        x.insert(0, Matrix::zeros(&f, 2, 1));
        raw.ops.insert(Op::X, x);
        assert!(matches!(WeightModule::new(&f, raw), Err(Error::Shape(_))));
    }

    #[test]
    fn block_leaving_window_rejected() {
        let f = qq();
        let base = WeightPoint::new(&f, f.from_int(3), f.from_int(5)).unwrap();
        let mut raw = RawModule::new(base, (0, 0), "bad");
        raw.spaces.insert(0, vec!["v0".into()]);
        let mut x = GradedMap::new();
        x.insert(0, Matrix::zeros(&f, 0, 1));
        raw.ops.insert(Op::X, x);
        assert!(WeightModule::new(&f, raw).is_err());
    }
}
