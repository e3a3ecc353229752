//! Extension of an `A_q`-module (X, Y1 given) or `A_1`-module (X, Y given)
//! to a `D`-module, solved as one exact linear system in the entries of the
//! missing operator.

use std::collections::{BTreeMap, BTreeSet};

use crate::basering::LaurentPoly;
use crate::coeffs::Elem;
use crate::error::{Error, Result};
use crate::linalg::{LinearSystem, Matrix, SparseRow};
use crate::orbits::SubalgebraName;
use crate::poly::Field;
use crate::verify::check_relations;
use crate::wmod::{GradedMap, Op, WeightModule};

/// The first equation found inconsistent with the earlier ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub offset: i64,
    pub relation: String,
    /// Basis vector the relation was applied to.
    pub label: String,
    /// Coordinate (row) of the result that cannot match.
    pub row: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Impossible(Conflict),
    Unique(WeightModule),
    /// `k` free parameters: `representative` plus any combination of the
    /// `basis` directions (blocks of the missing operator) is a `D`-module.
    Family {
        k: usize,
        representative: WeightModule,
        basis: Vec<GradedMap>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    pub missing: Op,
    pub outcome: Outcome,
    /// Offsets of blocks whose entries no checkable relation constrains
    /// (window edges); they are set to zero and not counted in `k`.
    pub unconstrained_offsets: Vec<i64>,
}

impl Extension {
    pub fn kind(&self) -> &'static str {
        match self.outcome {
            Outcome::Impossible(_) => "IMPOSSIBLE",
            Outcome::Unique(_) => "UNIQUE",
            Outcome::Family { .. } => "FAMILY",
        }
    }
}

struct Equation {
    row: SparseRow,
    rhs: Elem,
    conflict: Conflict,
}

/// Solves for the missing operator of `v`.
pub fn extend_to_d(v: &WeightModule) -> Result<Extension> {
    let ctx = v.ctx();
    let (missing, flavor) = match (v.has_op(Op::X), v.has_op(Op::Y), v.has_op(Op::Y1)) {
        (true, false, true) => (Op::Y, SubalgebraName::AQ),
        (true, true, false) => (Op::Y1, SubalgebraName::A1),
        _ => return Err(Error::InvalidArgument("extension needs X and exactly one of Y, Y1".into())),
    };
    let report = check_relations(v, flavor)?;
    if !report.passed() {
        let first = &report.violations[0];
        return Err(Error::InvalidModule(format!(
            "{flavor} relation {} fails at offset {} on {}",
            first.relation, first.offset, first.label
        )));
    }

    let (g, rel_tx, rel_xt) = if missing == Op::Y {
        (LaurentPoly::tau(ctx), "YX=tau", "XY=alpha(tau)")
    } else {
        (LaurentPoly::t_quantum(ctx), "Y1X=qsigma-1", "XY1=alpha(qsigma-1)")
    };
    let ag = g.twist(ctx, 1);
    let one = LaurentPoly::constant(ctx, ctx.one());
    let tau_m1 = LaurentPoly::tau(ctx).sub(ctx, &one);
    let sigma_m1 = LaurentPoly::sigma(ctx).sub(ctx, &one);

    // Unknown blocks of the missing operator, offset-major.
    let mut start: BTreeMap<i64, usize> = BTreeMap::new();
    let mut nvars = 0;
    for k in v.offsets() {
        if let Some(t) = v.target(missing, k) {
            if v.dim_at(k) > 0 && v.dim_at(t) > 0 {
                start.insert(k, nvars);
                nvars += v.dim_at(k) * v.dim_at(t);
            }
        }
    }
    // Entry (i, j) of the block leaving offset k.
    let var = |k: i64, i: usize, j: usize| start.get(&k).map(|s| s + i * v.dim_at(k) + j);

    let mut eqs = Vec::new();
    for k in v.offsets() {
        let dk = v.dim_at(k);
        let labels = v.labels_at(k);
        for j in 0..dk {
            let conflict = |relation: &str, row: usize| Conflict {
                offset: k,
                relation: relation.into(),
                label: labels[j].clone(),
                row,
            };
            let delta = |i: usize, c: &Elem| if i == j { c.clone() } else { ctx.zero() };
            // T' X e_j = g e_j
            if let Some(s) = v.target(Op::X, k) {
                if v.target(missing, s) == Some(k) {
                    let x = v.block(Op::X, k).unwrap().column(j);
                    let gk = v.scalar(&g, k);
                    for i in 0..dk {
                        let mut row = SparseRow::new();
                        for (l, xl) in x.iter().enumerate() {
                            if let Some(idx) = var(s, i, l) {
                                row.insert(idx, xl.clone());
                            }
                        }
                        eqs.push(Equation { row, rhs: delta(i, &gk), conflict: conflict(rel_tx, i) });
                    }
                }
            }
            // X T' e_j = alpha(g) e_j
            if let Some(t) = v.target(missing, k) {
                if v.target(Op::X, t) == Some(k) {
                    let xt = v.block(Op::X, t).unwrap();
                    let agk = v.scalar(&ag, k);
                    for i in 0..dk {
                        let mut row = SparseRow::new();
                        for l in 0..v.dim_at(t) {
                            if let Some(idx) = var(k, l, j) {
                                row.insert(idx, xt.get(i, l).clone());
                            }
                        }
                        eqs.push(Equation { row, rhs: delta(i, &agk), conflict: conflict(rel_xt, i) });
                    }
                }
                // Y1 (tau - 1) = Y (sigma - 1) with the known operator
                // substituted.
                let (own, other, known_op) = if missing == Op::Y {
                    (v.scalar(&sigma_m1, k), v.scalar(&tau_m1, k), Op::Y1)
                } else {
                    (v.scalar(&tau_m1, k), v.scalar(&sigma_m1, k), Op::Y)
                };
                let known = v.block(known_op, k).unwrap();
                for i in 0..v.dim_at(t) {
                    let mut row = SparseRow::new();
                    if let Some(idx) = var(k, i, j) {
                        row.insert(idx, own.clone());
                    }
                    let rhs = ctx.mul(&other, known.get(i, j));
                    eqs.push(Equation { row, rhs, conflict: conflict("Y1(tau-1)=Y(sigma-1)", i) });
                }
            }
        }
    }

    let mut sys = LinearSystem::new(ctx, nvars);
    let mut constrained = BTreeSet::new();
    for eq in eqs {
        // Zero coefficients still count: the equation was formed, so the
        // unknown is genuinely free rather than cut off by the window.
        constrained.extend(eq.row.keys().copied());
        if !sys.add(eq.row, eq.rhs) {
            return Ok(Extension { missing, outcome: Outcome::Impossible(eq.conflict), unconstrained_offsets: vec![] });
        }
    }
    let sol = sys.solve();
    let unconstrained_offsets: Vec<i64> = start
        .iter()
        .filter(|(&k, &s)| {
            let n = v.dim_at(k) * v.dim_at(v.target(missing, k).unwrap());
            (s..s + n).any(|x| !constrained.contains(&x))
        })
        .map(|(&k, _)| k)
        .collect();
    let to_blocks = |x: &[Elem]| -> GradedMap {
        start
            .iter()
            .map(|(&k, &s)| {
                let (dk, dt) = (v.dim_at(k), v.dim_at(v.target(missing, k).unwrap()));
                let rows = (0..dt).map(|i| x[s + i * dk..s + (i + 1) * dk].to_vec()).collect();
                (k, Matrix::from_rows(rows, dk).unwrap())
            })
            .collect()
    };
    let basis: Vec<GradedMap> = sol
        .free_vars
        .iter()
        .zip(&sol.homogeneous)
        .filter(|(f, _)| constrained.contains(f))
        .map(|(_, h)| to_blocks(h))
        .collect();
    let kind = format!("{} extended to D", v.kind());
    let representative = v.with_op(missing, to_blocks(&sol.particular))?.with_kind(kind);
    verify_extension(&representative)?;
    for b in &basis {
        let shifted: GradedMap = to_blocks(&sol.particular).into_iter().map(|(k, m)| (k, m.add(ctx, &b[&k]))).collect();
        verify_extension(&v.with_op(missing, shifted)?)?;
    }
    let outcome = if basis.is_empty() {
        Outcome::Unique(representative)
    } else {
        Outcome::Family { k: basis.len(), representative, basis }
    };
    Ok(Extension { missing, outcome, unconstrained_offsets })
}

fn verify_extension(m: &WeightModule) -> Result<()> {
    let report = check_relations(m, SubalgebraName::D)?;
    match report.violations.first() {
        None => Ok(()),
        Some(f) => {
            Err(Error::InvalidModule(format!("extension fails {} at offset {} on {}", f.relation, f.offset, f.label)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::{are_isomorphic, Budget};
    use crate::basering::WeightPoint;
    use crate::coeffs::{FieldCtx, FieldSpec};
    use crate::families::{construct_family, FamilyId};
    use crate::wmod::{construct_gwa, GwaKind};
    use num_rational::BigRational;

    fn qq() -> FieldCtx {
        FieldCtx::new(FieldSpec::Rational { q: BigRational::from_integer(2.into()) }).unwrap()
    }

    fn with_breaks(f: &FieldCtx, a: Elem) -> WeightModule {
        let base = WeightPoint::new(f, a, f.inv(&f.q()).unwrap()).unwrap();
        let kind = GwaKind::WithBreaks { j: vec![0, 1], j_prime: vec![] };
        construct_gwa(f, SubalgebraName::AQ, &kind, &base, (-3, 3)).unwrap()
    }

    #[test]
    fn nonzero_tau_at_break_is_impossible() {
        let f = qq();
        let e = extend_to_d(&with_breaks(&f, f.from_int(2))).unwrap();
        match e.outcome {
            Outcome::Impossible(c) => {
                assert_eq!(c.offset, 0);
                assert_eq!(c.relation, "YX=tau");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_tau_at_break_gives_one_parameter() {
        let f = qq();
        let e = extend_to_d(&with_breaks(&f, f.zero())).unwrap();
        let Outcome::Family { k, representative, .. } = e.outcome else { panic!("expected a family") };
        assert_eq!(k, 1);
        let jj = construct_family(&f, &FamilyId::VqJJCD { c: f.one(), d: f.zero() }, (-3, 3)).unwrap();
        assert_eq!(representative.op_blocks(Op::Y), jj.op_blocks(Op::Y));
    }

    #[test]
    fn invertible_x_gives_unique_extension() {
        let f = FieldCtx::new(FieldSpec::ExtField { p: 3, modulus: vec![1, 0, 1], q: vec![2] }).unwrap();
        let t = f.parse("[0,1]").unwrap();
        let base = WeightPoint::new(&f, t.clone(), t.clone()).unwrap();
        let m = construct_gwa(&f, SubalgebraName::AQ, &GwaKind::CircNoBreak { f: f.one() }, &base, (0, 0)).unwrap();
        let e = extend_to_d(&m).unwrap();
        let Outcome::Unique(u) = e.outcome else { panic!("expected a unique extension") };
        let fam = construct_family(&f, &FamilyId::VqFBA { f: f.one(), b: t.clone(), a: t }, (0, 0)).unwrap();
        assert!(are_isomorphic(&u, &fam, SubalgebraName::D, &Budget::default()).unwrap().is_yes());
    }

    #[test]
    fn both_operators_present_is_rejected() {
        let f = qq();
        let m = construct_family(&f, &FamilyId::VqBA { b: f.from_int(3), a: f.from_int(5) }, (-2, 2)).unwrap();
        assert!(matches!(extend_to_d(&m), Err(Error::InvalidArgument(_))));
    }
}
