//! Graded homomorphism spaces and what is built on them: endomorphism
//! rings, direct-sum decomposition and isomorphism testing.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Budget, SubspaceBases, Verdict, Witness};
use crate::coeffs::{Elem, FieldCtx};
use crate::error::{Error, Result};
use crate::linalg::{span_basis, LinearSystem, Matrix, SparseRow};
use crate::orbits::SubalgebraName;
use crate::poly::Field;
use crate::wmod::{GradedMap, WeightModule};

/// Offsets of `v` mapped to the offsets of `w` carrying the same point.
type Alignment = BTreeMap<i64, i64>;

/// Basis of the graded maps `v -> w` commuting with the operators of
/// `algebra`, where `align` sends each offset of `v` to the offset of `w`
/// with the same point. Only constraints whose operator applications stay
/// inside both ranges are imposed.
fn hom_basis(v: &WeightModule, w: &WeightModule, align: &Alignment, algebra: SubalgebraName) -> Vec<GradedMap> {
    let ctx = v.ctx();
    let mut start = BTreeMap::new();
    let mut nvars = 0;
    for (&k, &k2) in align {
        let (dv, dw) = (v.dim_at(k), w.dim_at(k2));
        if dv > 0 && dw > 0 {
            start.insert(k, nvars);
            nvars += dv * dw;
        }
    }
    let var = |k: i64, i: usize, j: usize| start.get(&k).map(|s| s + i * v.dim_at(k) + j);
    let mut sys = LinearSystem::new(ctx, nvars);
    for op in WeightModule::algebra_ops(algebra) {
        for (&k, &k2) in align {
            let dv = v.dim_at(k);
            if dv == 0 {
                continue;
            }
            let (Some(t), Some(t2)) = (v.target(*op, k), w.target(*op, k2)) else { continue };
            if align.get(&t) != Some(&t2) {
                continue;
            }
            let a = v.block(*op, k).unwrap();
            let b = w.block(*op, k2).unwrap();
            // (psi_t A)[i][j] - (B psi_k)[i][j] = 0
            for i in 0..w.dim_at(t2) {
                for j in 0..dv {
                    let mut row = SparseRow::new();
                    for l in 0..v.dim_at(t) {
                        if let Some(x) = var(t, i, l) {
                            let e = row.entry(x).or_insert_with(|| ctx.zero());
                            *e = ctx.add(e, a.get(l, j));
                        }
                    }
                    for l in 0..w.dim_at(k2) {
                        if let Some(x) = var(k, l, j) {
                            let e = row.entry(x).or_insert_with(|| ctx.zero());
                            *e = ctx.sub(e, b.get(i, l));
                        }
                    }
                    sys.add(row, ctx.zero());
                }
            }
        }
    }
    sys.solve()
        .homogeneous
        .iter()
        .map(|sol| {
            start
                .iter()
                .map(|(&k, &s)| {
                    let (dv, dw) = (v.dim_at(k), w.dim_at(align[&k]));
                    let rows = (0..dw).map(|i| sol[s + i * dv..s + (i + 1) * dv].to_vec()).collect();
                    (k, Matrix::from_rows(rows, dv).unwrap())
                })
                .collect()
        })
        .collect()
}

/// Basis of graded maps `v -> w` commuting with `algebra`, keyed by the
/// offsets of `v`. Fails if some nonzero weight space of either module has
/// no counterpart in the other.
pub fn hom_space(v: &WeightModule, w: &WeightModule, algebra: SubalgebraName) -> Result<Vec<GradedMap>> {
    check_pair(v, w, algebra)?;
    let align = align(v, w)?;
    Ok(hom_basis(v, w, &align, algebra))
}

fn check_pair(v: &WeightModule, w: &WeightModule, algebra: SubalgebraName) -> Result<()> {
    if v.ctx().spec() != w.ctx().spec() {
        return Err(Error::ContextMismatch);
    }
    v.require_ops(algebra)?;
    w.require_ops(algebra)
}

fn align(v: &WeightModule, w: &WeightModule) -> Result<Alignment> {
    let ctx = v.ctx();
    let wr = w.offsets();
    let wr = (*wr.start(), *wr.end());
    let mut out = Alignment::new();
    for k in v.offsets() {
        match w.orbit().offset_of(ctx, &v.point(k), wr) {
            Some(k2) => {
                out.insert(k, k2);
            }
            None if v.dim_at(k) > 0 => {
                return Err(Error::InvalidArgument(format!("offset {k} has no matching weight space")));
            }
            None => {}
        }
    }
    let hit: Vec<i64> = out.values().copied().collect();
    if let Some(k2) = w.offsets().find(|k2| w.dim_at(*k2) > 0 && !hit.contains(k2)) {
        return Err(Error::InvalidArgument(format!("offset {k2} of the second module has no matching weight space")));
    }
    Ok(out)
}

/// Basis of the graded endomorphisms commuting with `algebra`.
pub fn endomorphisms(v: &WeightModule, algebra: SubalgebraName) -> Result<Vec<GradedMap>> {
    v.require_ops(algebra)?;
    if !v.is_circular() {
        return Err(Error::NotApplicable("module lives on a window of a linear orbit".into()));
    }
    let align: Alignment = v.offsets().map(|k| (k, k)).collect();
    Ok(hom_basis(v, v, &align, algebra))
}

fn combine(ctx: &FieldCtx, basis: &[GradedMap], coeffs: &[Elem]) -> GradedMap {
    let mut out = GradedMap::new();
    for (b, c) in basis.iter().zip(coeffs) {
        if ctx.is_zero(c) {
            continue;
        }
        for (k, m) in b {
            let s = m.scale(ctx, c);
            let e = out.remove(k).map_or(s.clone(), |x: Matrix| x.add(ctx, &s));
            out.insert(*k, e);
        }
    }
    out
}

/// Graded identity on the nonzero weight spaces of `v`.
fn identity(v: &WeightModule) -> GradedMap {
    let ctx = v.ctx();
    v.offsets().filter(|k| v.dim_at(*k) > 0).map(|k| (k, Matrix::identity(ctx, v.dim_at(k)))).collect()
}

fn shift(v: &WeightModule, psi: &GradedMap, lambda: &Elem) -> GradedMap {
    let ctx = v.ctx();
    identity(v)
        .into_iter()
        .map(|(k, id)| {
            let m = psi.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(ctx, id.rows(), id.cols()));
            (k, m.sub(ctx, &id.scale(ctx, lambda)))
        })
        .collect()
}

/// Fitting decomposition `V = im(psi^n) + ker(psi^n)`, if both parts are
/// nonzero.
fn fitting(v: &WeightModule, psi: &GradedMap) -> Option<(SubspaceBases, SubspaceBases)> {
    let ctx = v.ctx();
    let mut im = SubspaceBases::new();
    let mut ker = SubspaceBases::new();
    for k in v.offsets() {
        let d = v.dim_at(k);
        if d == 0 {
            continue;
        }
        let m = psi.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(ctx, d, d));
        let mut p = m.clone();
        for _ in 1..d {
            p = p.mul(ctx, &m);
        }
        let cols: Vec<Vec<Elem>> = (0..d).map(|j| p.column(j)).collect();
        im.insert(k, span_basis(ctx, &cols, d));
        ker.insert(k, p.nullspace(ctx));
    }
    let n_im: usize = im.values().map(Vec::len).sum();
    (n_im > 0 && n_im < v.total_dim()).then_some((im, ker))
}

/// Projection onto `im` along `ker`.
fn projection(v: &WeightModule, im: &SubspaceBases, ker: &SubspaceBases) -> GradedMap {
    let ctx = v.ctx();
    let mut out = GradedMap::new();
    for k in v.offsets() {
        let d = v.dim_at(k);
        if d == 0 {
            continue;
        }
        let a = &im[&k];
        let mut b = Matrix::zeros(ctx, d, d);
        let mut diag = Matrix::zeros(ctx, d, d);
        for (j, col) in a.iter().chain(ker[&k].iter()).enumerate() {
            for (i, x) in col.iter().enumerate() {
                b.set(i, j, x.clone());
            }
            if j < a.len() {
                diag.set(j, j, ctx.one());
            }
        }
        let binv = b.inverse(ctx).expect("Fitting parts are complementary");
        out.insert(k, b.mul(ctx, &diag).mul(ctx, &binv));
    }
    out
}

/// Enumerates coefficient vectors of length `n` over the finite field, in
/// lexicographic order of element indices.
fn for_each_combination(elems: &[Elem], n: usize, mut f: impl FnMut(&[Elem]) -> bool) {
    let mut idx = vec![0usize; n];
    loop {
        let coeffs: Vec<Elem> = idx.iter().map(|&i| elems[i].clone()).collect();
        if f(&coeffs) {
            return;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Size of a full enumeration of `K^n`, if within `limit`.
fn exhaustive_elements(ctx: &FieldCtx, n: usize, limit: u128) -> Option<Vec<Elem>> {
    let size = ctx.size()?;
    let count = size.checked_pow(n as u32)?;
    if count > limit {
        return None;
    }
    ctx.elements(size)
}

/// Searches the span of `basis` for an element accepted by `accept`:
/// basis elements first, then every element when the space is small enough,
/// otherwise seeded random elements. Returns the hit and whether the search
/// was exhaustive.
fn search<T>(
    ctx: &FieldCtx,
    basis: &[GradedMap],
    budget: &Budget,
    mut accept: impl FnMut(&GradedMap) -> Option<T>,
) -> (Option<T>, bool) {
    for b in basis {
        if let Some(t) = accept(b) {
            return (Some(t), false);
        }
    }
    if let Some(elems) = exhaustive_elements(ctx, basis.len(), budget.exhaustive_limit) {
        let mut hit = None;
        for_each_combination(&elems, basis.len(), |c| {
            hit = accept(&combine(ctx, basis, c));
            hit.is_some()
        });
        let found = hit.is_some();
        return (hit, !found);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.trials {
        let c: Vec<Elem> = basis.iter().map(|_| ctx.random(&mut rng, 5)).collect();
        if let Some(t) = accept(&combine(ctx, basis, &c)) {
            return (Some(t), false);
        }
    }
    (None, false)
}

/// A direct-sum decomposition.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<WeightModule>,
    /// False if some summand could not be shown indecomposable within the
    /// budget.
    pub complete: bool,
    /// The idempotent of the first split, projecting onto the first part.
    pub idempotent: Option<GradedMap>,
}

/// Splits `v` into indecomposable summands over `algebra` using idempotents
/// obtained from Fitting decompositions of endomorphisms.
pub fn decompose(v: &WeightModule, algebra: SubalgebraName, budget: &Budget) -> Result<Decomposition> {
    v.require_ops(algebra)?;
    if !v.is_circular() {
        return Err(Error::NotApplicable("module lives on a window of a linear orbit".into()));
    }
    let v = v.restrict(algebra);
    decompose_rec(&v, algebra, budget, "")
}

fn decompose_rec(v: &WeightModule, algebra: SubalgebraName, budget: &Budget, path: &str) -> Result<Decomposition> {
    let ctx = v.ctx();
    if v.total_dim() == 0 {
        return Ok(Decomposition { summands: vec![], complete: true, idempotent: None });
    }
    let end = endomorphisms(v, algebra)?;
    if end.len() <= 1 {
        return Ok(Decomposition { summands: vec![v.clone()], complete: true, idempotent: None });
    }
    let lambdas = ctx.elements(256).unwrap_or_else(|| (-2..=2).map(|n| ctx.from_int(n)).collect());
    let (hit, exhaustive) = search(ctx, &end, budget, |psi| lambdas.iter().find_map(|l| fitting(v, &shift(v, psi, l))));
    let Some((im, ker)) = hit else {
        return Ok(Decomposition { summands: vec![v.clone()], complete: exhaustive, idempotent: None });
    };
    let idem = projection(v, &im, &ker);
    let base = if path.is_empty() { v.kind().to_string() } else { path.to_string() };
    let a = v.submodule(&im, format!("{base}.1"))?;
    let b = v.submodule(&ker, format!("{base}.2"))?;
    let da = decompose_rec(&a, algebra, budget, &format!("{base}.1"))?;
    let db = decompose_rec(&b, algebra, budget, &format!("{base}.2"))?;
    let mut summands = da.summands;
    summands.extend(db.summands);
    Ok(Decomposition { summands, complete: da.complete && db.complete, idempotent: Some(idem) })
}

/// Decides whether `v` and `w` are isomorphic over `algebra`, returning an
/// explicit intertwiner when they are.
pub fn are_isomorphic(v: &WeightModule, w: &WeightModule, algebra: SubalgebraName, budget: &Budget) -> Result<Verdict> {
    check_pair(v, w, algebra)?;
    let ctx = v.ctx();
    if v.is_circular() != w.is_circular() {
        return Ok(Verdict::NotApplicable("one module is circular and the other windowed".into()));
    }
    let windowed = !v.is_circular();
    let align = match align(v, w) {
        Ok(a) => a,
        Err(_) if windowed => return Ok(Verdict::NotApplicable("windows cover different weight points".into())),
        Err(_) => {
            // Some nonzero weight space has no counterpart at all.
            let offset = v.offsets().find(|k| v.dim_at(*k) > 0).unwrap_or(0);
            return Ok(Verdict::No(Witness::DimensionMismatch { offset, left: v.dim_at(offset), right: 0 }));
        }
    };
    for (&k, &k2) in &align {
        if v.dim_at(k) != w.dim_at(k2) {
            return Ok(Verdict::No(Witness::DimensionMismatch { offset: k, left: v.dim_at(k), right: w.dim_at(k2) }));
        }
    }
    let basis = hom_basis(v, w, &align, algebra);
    if v.total_dim() == 0 {
        return Ok(Verdict::Yes(Witness::Intertwiner(GradedMap::new())));
    }
    if basis.is_empty() {
        return Ok(Verdict::No(Witness::NoInvertible { hom_dim: 0 }));
    }
    let invertible = |psi: &GradedMap| {
        let ok = align.keys().filter(|k| v.dim_at(**k) > 0).all(|k| psi.get(k).is_some_and(|m| m.is_invertible(ctx)));
        ok.then(|| psi.clone())
    };
    let (hit, exhaustive) = search(ctx, &basis, budget, invertible);
    Ok(match hit {
        Some(psi) => Verdict::Yes(Witness::Intertwiner(psi)),
        None if exhaustive => Verdict::No(Witness::NoInvertible { hom_dim: basis.len() }),
        None => {
            Verdict::Unknown(format!("no invertible element found in a {}-dimensional intertwining space", basis.len()))
        }
    })
}

/// Whether `psi` commutes with the operators of `algebra` from `v` to `w`
/// under the identity alignment of offsets with equal points.
pub fn intertwines(v: &WeightModule, w: &WeightModule, algebra: SubalgebraName, psi: &GradedMap) -> bool {
    let Ok(align) = align(v, w) else { return false };
    let ctx = v.ctx();
    let block = |k: i64| psi.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(ctx, w.dim_at(align[&k]), v.dim_at(k)));
    WeightModule::algebra_ops(algebra).iter().all(|op| {
        align.iter().all(|(&k, &k2)| {
            let (Some(t), Some(t2)) = (v.target(*op, k), w.target(*op, k2)) else { return true };
            if align.get(&t) != Some(&t2) {
                return true;
            }
            block(t).mul(ctx, &v.block(*op, k).unwrap()) == w.block(*op, k2).unwrap().mul(ctx, &block(k))
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

    fn t(f: &FieldCtx) -> Elem {
        f.parse("[0,1]").unwrap()
    }

    #[test]
    fn simple_module_has_scalar_endomorphisms() {
        let f = f9();
        let id = FamilyId::VqFBA { f: f.one(), b: t(&f), a: t(&f) };
        let m = construct_family(&f, &id, (0, 0)).unwrap();
        assert_eq!(endomorphisms(&m, SubalgebraName::D).unwrap().len(), 1);
        let sum = m.direct_sum(&m).unwrap();
        assert_eq!(endomorphisms(&sum, SubalgebraName::D).unwrap().len(), 4);
        assert_eq!(decompose(&sum, SubalgebraName::D, &Budget::default()).unwrap().summands.len(), 2);
    }

    #[test]
    fn item_five_pair_is_isomorphic() {
        let f = f9();
        let a = construct_family(&f, &FamilyId::VqFBA { f: f.one(), b: t(&f), a: t(&f) }, (0, 0)).unwrap();
        let b = construct_family(&f, &FamilyId::V1FAB { f: f.one(), a: t(&f), b: t(&f) }, (0, 0)).unwrap();
        match are_isomorphic(&a, &b, SubalgebraName::D, &Budget::default()).unwrap() {
            Verdict::Yes(Witness::Intertwiner(psi)) => assert!(intertwines(&a, &b, SubalgebraName::D, &psi)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn periodic_chain_cycle_splits_over_d() {
        // With all a_i equal, swapping W1<->W3 and W2<->W4 is an involutive
        // automorphism, so the module splits over D in odd characteristic.
        let f = f9();
        let id = FamilyId::ChainCycle { word: vec![Op::Y, Op::Y1, Op::Y, Op::Y1], a: vec![f.one(); 4] };
        let m = construct_family(&f, &id, (0, 0)).unwrap();
        let d = decompose(&m, SubalgebraName::D, &Budget::default()).unwrap();
        assert_eq!(d.summands.iter().map(WeightModule::total_dim).collect::<Vec<_>>(), vec![12, 12]);
        let e = d.idempotent.unwrap();
        assert!(intertwines(&m, &m, SubalgebraName::D, &e));
        assert!(e.values().all(|b| b.mul(&f, b) == *b));
    }

    #[test]
    fn chain_cycle_four_splits_over_subalgebras_only() {
        let f = f9();
        let a = vec![f.one(), f.one(), f.one(), t(&f)];
        let id = FamilyId::ChainCycle { word: vec![Op::Y, Op::Y1, Op::Y, Op::Y1], a };
        let m = construct_family(&f, &id, (0, 0)).unwrap();
        let b = Budget::default();
        let d = decompose(&m, SubalgebraName::D, &b).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert!(d.complete);
        assert!(decompose(&m, SubalgebraName::AQ, &b).unwrap().summands.len() >= 2);
        assert!(decompose(&m, SubalgebraName::A1, &b).unwrap().summands.len() >= 2);
    }

    #[test]
    fn idempotent_is_an_endomorphism() {
        let f = f9();
        let id = FamilyId::ChainCycle { word: vec![Op::Y, Op::Y1], a: vec![f.one(); 2] };
        let m = construct_family(&f, &id, (0, 0)).unwrap().restrict(SubalgebraName::AQ);
        let d = decompose(&m, SubalgebraName::AQ, &Budget::default()).unwrap();
        let e = d.idempotent.expect("splits over AQ");
        assert!(intertwines(&m, &m, SubalgebraName::AQ, &e));
        for (k, blk) in &e {
            assert_eq!(&blk.mul(&f, blk), blk, "offset {k}");
        }
    }
}
