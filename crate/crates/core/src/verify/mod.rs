//! Exact checking of the defining relations of `D` and of its two
//! generalized Weyl subalgebras on a weight module.

mod realization;

pub use realization::{polynomial_realization, Realization};

use crate::basering::LaurentPoly;
use crate::coeffs::{Elem, FieldCtx};
use crate::error::Result;
use crate::orbits::SubalgebraName;
use crate::poly::Field;
use crate::wmod::{Op, WeightModule};

/// A failed relation instance on one basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub relation: String,
    pub offset: i64,
    pub label: String,
    /// Coordinates in the target weight space.
    pub computed: Vec<Elem>,
    pub expected: Vec<Elem>,
    /// Labels of the target weight space basis.
    pub target_labels: Vec<String>,
}

/// A relation instance that could not be checked because an operator
/// application left the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skipped {
    pub relation: String,
    pub offset: i64,
    pub label: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub algebra: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub skipped: Vec<Skipped>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn sort(&mut self) {
        self.violations.sort_by(|a, b| (a.offset, &a.relation, &a.label).cmp(&(b.offset, &b.relation, &b.label)));
        self.skipped.sort_by(|a, b| (a.offset, &a.relation, &a.label).cmp(&(b.offset, &b.relation, &b.label)));
    }
}

/// Formats `coords` in terms of `labels`, e.g. `2*v1 + v3`; zero is `0`.
pub fn format_vector(ctx: &FieldCtx, labels: &[String], coords: &[Elem]) -> String {
    let terms: Vec<String> = coords
        .iter()
        .zip(labels)
        .filter(|(c, _)| !ctx.is_zero(c))
        .map(|(c, l)| format!("{}*{l}", ctx.print(c)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// One side of a relation: a word of operators (applied right to left, i.e.
/// the last element acts first) with an optional scalar from `R` acting
/// first.
struct Word<'a> {
    ops: &'a [Op],
    /// Multiplies by this element of `R` before applying `ops`.
    pre: Option<&'a LaurentPoly>,
    /// Multiplies by this element of `R` after applying `ops`.
    post: Option<&'a LaurentPoly>,
}

fn eval_word(v: &WeightModule, w: &Word, k: i64, vec: Vec<Elem>) -> Option<(i64, Vec<Elem>)> {
    let ctx = v.ctx();
    let mut cur = (k, vec);
    if let Some(r) = w.pre {
        let s = v.scalar(r, cur.0);
        cur.1 = cur.1.iter().map(|x| ctx.mul(x, &s)).collect();
    }
    for op in w.ops.iter().rev() {
        cur = v.apply(*op, cur.0, &cur.1)?;
    }
    if let Some(r) = w.post {
        let s = v.scalar(r, cur.0);
        cur.1 = cur.1.iter().map(|x| ctx.mul(x, &s)).collect();
    }
    Some(cur)
}

struct Relation {
    id: String,
    lhs_ops: Vec<Op>,
    lhs_pre: Option<LaurentPoly>,
    lhs_post: Option<LaurentPoly>,
    rhs_ops: Vec<Op>,
    rhs_pre: Option<LaurentPoly>,
    rhs_post: Option<LaurentPoly>,
}

impl Relation {
    /// `ops = r` with `r` in `R`.
    fn to_scalar(id: &str, ops: Vec<Op>, r: LaurentPoly) -> Self {
        Relation {
            id: id.into(),
            lhs_ops: ops,
            lhs_pre: None,
            lhs_post: None,
            rhs_ops: vec![],
            rhs_pre: Some(r),
            rhs_post: None,
        }
    }
}

fn relations(ctx: &FieldCtx, algebra: SubalgebraName) -> Vec<Relation> {
    let tau = LaurentPoly::tau(ctx);
    let tq = LaurentPoly::t_quantum(ctx);
    let one = LaurentPoly::constant(ctx, ctx.one());
    let gens =
        [("tau", LaurentPoly::tau(ctx)), ("sigma", LaurentPoly::sigma(ctx)), ("sigma^-1", LaurentPoly::sigma_inv(ctx))];
    let use_y = algebra != SubalgebraName::AQ;
    let use_y1 = algebra != SubalgebraName::A1;
    let mut out = Vec::new();
    if use_y {
        out.push(Relation::to_scalar("YX=tau", vec![Op::Y, Op::X], tau.clone()));
        out.push(Relation::to_scalar("XY=alpha(tau)", vec![Op::X, Op::Y], tau.twist(ctx, 1)));
    }
    if use_y1 {
        out.push(Relation::to_scalar("Y1X=qsigma-1", vec![Op::Y1, Op::X], tq.clone()));
        out.push(Relation::to_scalar("XY1=alpha(qsigma-1)", vec![Op::X, Op::Y1], tq.twist(ctx, 1)));
    }
    if use_y && use_y1 {
        out.push(Relation {
            id: "Y1(tau-1)=Y(sigma-1)".into(),
            lhs_ops: vec![Op::Y1],
            lhs_pre: Some(tau.sub(ctx, &one)),
            lhs_post: None,
            rhs_ops: vec![Op::Y],
            rhs_pre: Some(LaurentPoly::sigma(ctx).sub(ctx, &one)),
            rhs_post: None,
        });
    }
    let mut twisting = vec![(Op::X, 1i64)];
    if use_y {
        twisting.push((Op::Y, -1));
    }
    if use_y1 {
        twisting.push((Op::Y1, -1));
    }
    for (op, dir) in twisting {
        for (name, r) in &gens {
            let id = if dir == 1 {
                format!("{op}r=alpha(r){op}[r={name}]")
            } else {
                format!("{op}r=alpha^-1(r){op}[r={name}]")
            };
            out.push(Relation {
                id,
                lhs_ops: vec![op],
                lhs_pre: Some(r.clone()),
                lhs_post: None,
                rhs_ops: vec![op],
                rhs_pre: None,
                rhs_post: Some(r.twist(ctx, dir)),
            });
        }
    }
    out
}

/// Checks every relation of `algebra` on every basis vector of `v`.
pub fn check_relations(v: &WeightModule, algebra: SubalgebraName) -> Result<RelationReport> {
    v.require_ops(algebra)?;
    let ctx = v.ctx();
    let mut report = RelationReport { algebra: algebra.to_string(), ..Default::default() };
    let rels = relations(ctx, algebra);
    for k in v.offsets() {
        let labels = v.labels_at(k);
        for (j, label) in labels.iter().enumerate() {
            let mut e = vec![ctx.zero(); labels.len()];
            e[j] = ctx.one();
            for rel in &rels {
                let lhs = eval_word(
                    v,
                    &Word { ops: &rel.lhs_ops, pre: rel.lhs_pre.as_ref(), post: rel.lhs_post.as_ref() },
                    k,
                    e.clone(),
                );
                let rhs = eval_word(
                    v,
                    &Word { ops: &rel.rhs_ops, pre: rel.rhs_pre.as_ref(), post: rel.rhs_post.as_ref() },
                    k,
                    e.clone(),
                );
                match (lhs, rhs) {
                    (Some((tk, l)), Some((_, r))) => {
                        report.checked += 1;
                        if l != r {
                            report.violations.push(Violation {
                                relation: rel.id.clone(),
                                offset: k,
                                label: label.clone(),
                                computed: l,
                                expected: r,
                                target_labels: v.labels_at(tk).to_vec(),
                            });
                        }
                    }
                    _ => report.skipped.push(Skipped { relation: rel.id.clone(), offset: k, label: label.clone() }),
                }
            }
        }
    }
    report.sort();
    Ok(report)
}
