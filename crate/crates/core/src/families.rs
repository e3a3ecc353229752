//! Named constructors for the explicit `D`-module families.
//!
//! Linear families use offsets relative to a base point chosen so that the
//! module's index `i` matches the offset (`v_i` sits at offset `i`); circular
//! families put `v_1, ..., v_r` at offsets `0, ..., r-1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::basering::WeightPoint;
use crate::coeffs::{Elem, FieldCtx};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::orbits::compute_orbit;
use crate::poly::Field;
use crate::wmod::{EdgeFlags, GradedMap, Op, RawModule, WeightModule};

/// A family together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyId {
    VqBA {
        b: Elem,
        a: Elem,
    },
    VqJJ1 {
        a: Elem,
    },
    VqJJCD {
        c: Elem,
        d: Elem,
    },
    VqJJ3 {
        a: Elem,
    },
    VqJJ4 {
        a: Elem,
    },
    VqFBA {
        f: Elem,
        b: Elem,
        a: Elem,
    },
    V1AB {
        a: Elem,
        b: Elem,
    },
    V1JJ1 {
        b: Elem,
    },
    V1JJCD {
        c: Elem,
        d: Elem,
    },
    V1JJ3 {
        b: Elem,
    },
    V1JJ4 {
        b: Elem,
    },
    V1FAB {
        f: Elem,
        a: Elem,
        b: Elem,
    },
    /// `word[i]` is `Op::Y` or `Op::Y1`; `a[i]` the matching nonzero scalar.
    ChainCycle {
        word: Vec<Op>,
        a: Vec<Elem>,
    },
    VcdTwoRow {
        c: Elem,
        d: Elem,
    },
    Remark136,
}

impl FamilyId {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::VqBA { .. } => "VQ_B_A",
            FamilyId::VqJJ1 { .. } => "VQ_JJ_1",
            FamilyId::VqJJCD { .. } => "VQ_JJ_CD",
            FamilyId::VqJJ3 { .. } => "VQ_JJ_3",
            FamilyId::VqJJ4 { .. } => "VQ_JJ_4",
            FamilyId::VqFBA { .. } => "VQ_F_B_A",
            FamilyId::V1AB { .. } => "V1_A_B",
            FamilyId::V1JJ1 { .. } => "V1_JJ_1",
            FamilyId::V1JJCD { .. } => "V1_JJ_CD",
            FamilyId::V1JJ3 { .. } => "V1_JJ_3",
            FamilyId::V1JJ4 { .. } => "V1_JJ_4",
            FamilyId::V1FAB { .. } => "V1_F_A_B",
            FamilyId::ChainCycle { .. } => "CHAIN_CYCLE",
            FamilyId::VcdTwoRow { .. } => "VCD_TWOROW",
            FamilyId::Remark136 => "REMARK_136",
        }
    }

    /// Parameter names in order, as used by the scenario format.
    pub fn param_names(name: &str) -> Option<&'static [&'static str]> {
        catalog().into_iter().find(|e| e.name == name).map(|e| e.params)
    }

    /// Named parameters of this instance, except the word of `CHAIN_CYCLE`.
    pub fn params(&self) -> Vec<(&'static str, Elem)> {
        match self {
            FamilyId::VqBA { b, a } => vec![("b", b.clone()), ("a", a.clone())],
            FamilyId::VqJJ1 { a } | FamilyId::VqJJ3 { a } | FamilyId::VqJJ4 { a } => vec![("a", a.clone())],
            FamilyId::VqJJCD { c, d } | FamilyId::V1JJCD { c, d } | FamilyId::VcdTwoRow { c, d } => {
                vec![("c", c.clone()), ("d", d.clone())]
            }
            FamilyId::VqFBA { f, b, a } => vec![("f", f.clone()), ("b", b.clone()), ("a", a.clone())],
            FamilyId::V1AB { a, b } => vec![("a", a.clone()), ("b", b.clone())],
            FamilyId::V1JJ1 { b } | FamilyId::V1JJ3 { b } | FamilyId::V1JJ4 { b } => vec![("b", b.clone())],
            FamilyId::V1FAB { f, a, b } => vec![("f", f.clone()), ("a", a.clone()), ("b", b.clone())],
            FamilyId::ChainCycle { .. } | FamilyId::Remark136 => vec![],
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A catalog entry describing one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub notation: &'static str,
    pub params: &'static [&'static str],
    pub orbit: &'static str,
    pub side_conditions: &'static str,
}

/// The stable list of supported families.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "VQ_B_A",
            notation: "V_q(omega, b, a)",
            params: &["b", "a"],
            orbit: "linear",
            side_conditions: "b is not a power of q within reach of the window",
        },
        CatalogEntry {
            name: "VQ_JJ_1",
            notation: "V_q(omega, J, J', a), J = B', J' = {m_0}",
            params: &["a"],
            orbit: "linear",
            side_conditions: "q^i != 1 for offsets in the window",
        },
        CatalogEntry {
            name: "VQ_JJ_CD",
            notation: "V_q(omega, J, J', c, d), J = B', J' empty",
            params: &["c", "d"],
            orbit: "linear",
            side_conditions: "q^i != 1 for offsets in the window; tau-value 0 at the break",
        },
        CatalogEntry {
            name: "VQ_JJ_3",
            notation: "V_q(omega, J, J', a), J = {m_0}",
            params: &["a"],
            orbit: "linear",
            side_conditions: "a = 0; q^i != 1 for offsets in the window",
        },
        CatalogEntry {
            name: "VQ_JJ_4",
            notation: "V_q(omega, J, J', a), J = {m_1}",
            params: &["a"],
            orbit: "linear",
            side_conditions: "a = 0; q^i != 1 for offsets in the window",
        },
        CatalogEntry {
            name: "VQ_F_B_A",
            notation: "V_q(omega, f, b, a)",
            params: &["f", "b", "a"],
            orbit: "circular",
            side_conditions: "f != 0; b is not a power of q",
        },
        CatalogEntry {
            name: "V1_A_B",
            notation: "V_1(omega, a, b)",
            params: &["a", "b"],
            orbit: "linear",
            side_conditions: "a + i != 0 within reach of the window",
        },
        CatalogEntry {
            name: "V1_JJ_1",
            notation: "V_1(omega, J, J', b), J = B', J' = {m_0}",
            params: &["b"],
            orbit: "linear",
            side_conditions: "characteristic 0",
        },
        CatalogEntry {
            name: "V1_JJ_CD",
            notation: "V_1(omega, J, J', c, d), J = B', J' empty",
            params: &["c", "d"],
            orbit: "linear",
            side_conditions: "characteristic 0; sigma-value q^-1 at the break",
        },
        CatalogEntry {
            name: "V1_JJ_3",
            notation: "V_1(omega, J, J', b), J = {m_0}",
            params: &["b"],
            orbit: "linear",
            side_conditions: "b = q^-1; characteristic 0",
        },
        CatalogEntry {
            name: "V1_JJ_4",
            notation: "V_1(omega, J, J', b), J = {m_1}",
            params: &["b"],
            orbit: "linear",
            side_conditions: "b = q^-1; characteristic 0",
        },
        CatalogEntry {
            name: "V1_F_A_B",
            notation: "V_1(omega, f, a, b)",
            params: &["f", "a", "b"],
            orbit: "circular",
            side_conditions: "f != 0; a is not in the prime field",
        },
        CatalogEntry {
            name: "CHAIN_CYCLE",
            notation: "V(m; w, a_1, ..., a_m)",
            params: &["word", "a"],
            orbit: "circular",
            side_conditions: "positive characteristic, q a root of unity; word over {Y, Y1}; all a_i != 0",
        },
        CatalogEntry {
            name: "VCD_TWOROW",
            notation: "V(c, d)",
            params: &["c", "d"],
            orbit: "linear",
            side_conditions: "characteristic 0",
        },
        CatalogEntry {
            name: "REMARK_136",
            notation: "three-dimensional module with dims 1,1,1,0,0,0",
            params: &[],
            orbit: "circular",
            side_conditions: "characteristic 3 and q of order 2; fails one relation by construction",
        },
    ]
}

fn side(msg: impl Into<String>) -> Error {
    Error::SideCondition(msg.into())
}

fn divide(ctx: &FieldCtx, num: &Elem, den: &Elem, formula: &str, offset: i64) -> Result<Elem> {
    ctx.div(num, den).map_err(|_| Error::VanishingDenominator { formula: formula.into(), offset })
}

type Coeff<'a> = Box<dyn Fn(i64) -> Result<Elem> + 'a>;

/// A module with (at most) one basis vector per offset.
struct LineSpec<'a> {
    base: WeightPoint,
    window: (i64, i64),
    support: Box<dyn Fn(i64) -> bool + 'a>,
    label: Box<dyn Fn(i64) -> String + 'a>,
    x: Coeff<'a>,
    y: Coeff<'a>,
    y1: Coeff<'a>,
    edges: EdgeFlags,
    kind: String,
}

fn line_module(ctx: &FieldCtx, spec: LineSpec) -> Result<WeightModule> {
    let orbit = compute_orbit(ctx, &spec.base);
    let (lo, hi) = match orbit.length() {
        Some(r) => (0, r as i64 - 1),
        None => spec.window,
    };
    if lo > hi {
        return Err(Error::InvalidModule(format!("empty window [{lo},{hi}]")));
    }
    let mut raw = RawModule::new(spec.base.clone(), spec.window, spec.kind);
    let present: Vec<i64> = (lo..=hi).filter(|&k| (spec.support)(k)).collect();
    for &k in &present {
        raw.spaces.insert(k, vec![(spec.label)(k)]);
    }
    for (op, coeff) in [(Op::X, &spec.x), (Op::Y, &spec.y), (Op::Y1, &spec.y1)] {
        let mut blocks = GradedMap::new();
        for &k in &present {
            let t = orbit.normalize(k + op.shift());
            if !(lo..=hi).contains(&t) || !(spec.support)(t) {
                continue;
            }
            let c = coeff(k)?;
            if !ctx.is_zero(&c) {
                blocks.insert(k, Matrix::from_rows(vec![vec![c]], 1).unwrap());
            }
        }
        raw.ops.insert(op, blocks);
    }
    raw.edges = spec.edges;
    WeightModule::new(ctx, raw)
}

fn require_linear(ctx: &FieldCtx, name: &str) -> Result<()> {
    if ctx.characteristic() != 0 && ctx.q_order().is_some() {
        return Err(side(format!("{name} needs a linear orbit (characteristic 0 or q not a root of unity)")));
    }
    Ok(())
}

fn require_char0(ctx: &FieldCtx, name: &str) -> Result<()> {
    if ctx.characteristic() != 0 {
        return Err(side(format!("{name} needs characteristic 0")));
    }
    Ok(())
}

/// Offsets whose values must avoid a forbidden set: the window with a margin
/// of two, or a full period when `q` has finite order `d`.
fn reach(ctx: &FieldCtx, window: (i64, i64)) -> Vec<i64> {
    let m = window.0.abs().max(window.1.abs()) + 2;
    let mut ks: Vec<i64> = (-m..=m).collect();
    if let Some(d) = ctx.q_order() {
        ks.extend(0..d as i64);
    }
    ks
}

/// Builds the module of the given family.
pub fn construct_family(ctx: &FieldCtx, id: &FamilyId, window: (i64, i64)) -> Result<WeightModule> {
    let one = ctx.one();
    let zero = ctx.zero();
    let q = ctx.q();
    let qp = |k: i64| ctx.q_pow(k);
    let int = |k: i64| ctx.from_int(k);
    let name = id.name();
    let all = Box::new(|_: i64| true);
    let label_v = Box::new(|k: i64| format!("v{k}"));
    let both = EdgeFlags { low: true, high: true };
    let kind = |s: String| format!("{name}({s})");
    let show = |e: &Elem| ctx.print(e);

    match id {
        FamilyId::VqBA { b, a } => {
            require_linear(ctx, name)?;
            let base = WeightPoint::new(ctx, a.clone(), b.clone())?;
            for i in reach(ctx, window) {
                if ctx.mul(&qp(i), b) == one {
                    return Err(side(format!("b = q^{} is a power of q", -i)));
                }
            }
            line_module(
                ctx,
                LineSpec {
                    base,
                    window,
                    support: all,
                    label: label_v,
                    x: Box::new(|i| Ok(ctx.sub(&ctx.mul(&qp(i + 1), b), &one))),
                    y1: Box::new(|_| Ok(one.clone())),
                    y: Box::new(|i| {
                        divide(
                            ctx,
                            &ctx.add(a, &int(i - 1)),
                            &ctx.sub(&ctx.mul(&qp(i), b), &one),
                            "Y v_i = (a+i-1)/(q^i b-1) v_(i-1)",
                            i,
                        )
                    }),
                    edges: both,
                    kind: kind(format!("b={}, a={}", show(b), show(a))),
                },
            )
        }
        FamilyId::VqJJ1 { a } | FamilyId::VqJJ3 { a } | FamilyId::VqJJ4 { a } | FamilyId::VqJJCD { c: a, .. } => {
            require_linear(ctx, name)?;
            let qinv = ctx.inv(&q).unwrap();
            let (c, d) = match id {
                FamilyId::VqJJCD { c, d } => (Some(c.clone()), Some(d.clone())),
                _ => (None, None),
            };
            // VQ_JJ_CD has tau-value 0 at the break.
            let a = if c.is_some() { zero.clone() } else { a.clone() };
            if matches!(id, FamilyId::VqJJ3 { .. } | FamilyId::VqJJ4 { .. }) && !ctx.is_zero(&a) {
                return Err(side(format!("{name} needs a = 0 (YX = tau at the end of the support)")));
            }
            let base = WeightPoint::new(ctx, a.clone(), qinv)?;
            // Y v_i = (a+i-1)/(q^(i-1)-1) v_(i-1)
            let y_generic = |i: i64| {
                divide(
                    ctx,
                    &ctx.add(&a, &int(i - 1)),
                    &ctx.sub(&qp(i - 1), &one),
                    "Y v_i = (a+i-1)/(q^(i-1)-1) v_(i-1)",
                    i,
                )
            };
            let x_generic = |i: i64| ctx.sub(&qp(i), &one);
            let (support, edges, x, y1, y): (Box<dyn Fn(i64) -> bool>, EdgeFlags, Coeff, Coeff, Coeff) = match id {
                FamilyId::VqJJ1 { .. } => (
                    all,
                    both,
                    Box::new(|i| Ok(if i == 0 { one.clone() } else { x_generic(i) })),
                    Box::new(|i| Ok(if i == 1 { zero.clone() } else { one.clone() })),
                    Box::new(|i| if i == 1 { Ok(a.clone()) } else { y_generic(i) }),
                ),
                FamilyId::VqJJCD { .. } => {
                    let (c, d) = (c.clone().unwrap(), d.clone().unwrap());
                    let one = one.clone();
                    (
                        all,
                        both,
                        Box::new(move |i| Ok(x_generic(i))),
                        Box::new(move |i| Ok(if i == 1 { c.clone() } else { one.clone() })),
                        Box::new(move |i| if i == 1 { Ok(d.clone()) } else { y_generic(i) }),
                    )
                }
                FamilyId::VqJJ3 { .. } => (
                    Box::new(|i| i <= 0),
                    EdgeFlags { low: true, high: false },
                    Box::new(|i| Ok(x_generic(i))),
                    Box::new(|_| Ok(one.clone())),
                    Box::new(y_generic),
                ),
                _ => (
                    Box::new(|i| i >= 1),
                    EdgeFlags { low: false, high: true },
                    Box::new(|i| Ok(x_generic(i))),
                    Box::new(|i| Ok(if i == 1 { zero.clone() } else { one.clone() })),
                    Box::new(|i| if i == 1 { Ok(zero.clone()) } else { y_generic(i) }),
                ),
            };
            let params = match id {
                FamilyId::VqJJCD { c, d } => format!("c={}, d={}", show(c), show(d)),
                _ => format!("a={}", show(&a)),
            };
            line_module(ctx, LineSpec { base, window, support, label: label_v, x, y, y1, edges, kind: kind(params) })
        }
        FamilyId::V1AB { a, b } => {
            require_linear(ctx, name)?;
            let base = WeightPoint::new(ctx, a.clone(), b.clone())?;
            for i in reach(ctx, window) {
                if ctx.is_zero(&ctx.add(a, &int(i))) {
                    return Err(side(format!("a = {} is an integer within reach of the window", -i)));
                }
            }
            line_module(
                ctx,
                LineSpec {
                    base,
                    window,
                    support: all,
                    label: label_v,
                    x: Box::new(|i| Ok(ctx.add(a, &int(i)))),
                    y: Box::new(|_| Ok(one.clone())),
                    y1: Box::new(|i| {
                        divide(
                            ctx,
                            &ctx.sub(&ctx.mul(&qp(i), b), &one),
                            &ctx.add(a, &int(i - 1)),
                            "Y1 v_i = (q^i b-1)/(a+i-1) v_(i-1)",
                            i,
                        )
                    }),
                    edges: both,
                    kind: kind(format!("a={}, b={}", show(a), show(b))),
                },
            )
        }
        FamilyId::V1JJ1 { b } | FamilyId::V1JJ3 { b } | FamilyId::V1JJ4 { b } | FamilyId::V1JJCD { c: b, .. } => {
            require_char0(ctx, name)?;
            require_linear(ctx, name)?;
            let qinv = ctx.inv(&q).unwrap();
            let (c, d) = match id {
                FamilyId::V1JJCD { c, d } => (Some(c.clone()), Some(d.clone())),
                _ => (None, None),
            };
            let b = if c.is_some() { qinv.clone() } else { b.clone() };
            if matches!(id, FamilyId::V1JJ3 { .. } | FamilyId::V1JJ4 { .. }) && b != qinv {
                return Err(side(format!("{name} needs b = q^-1 (Y1 X = q sigma - 1 at the end of the support)")));
            }
            let base = WeightPoint::new(ctx, zero.clone(), b.clone())?;
            // Y1 v_i = (q^i b - 1)/(i-1) v_(i-1)
            let y1_generic = |i: i64| {
                divide(ctx, &ctx.sub(&ctx.mul(&qp(i), &b), &one), &int(i - 1), "Y1 v_i = (q^i b-1)/(i-1) v_(i-1)", i)
            };
            let (support, edges, x, y, y1): (Box<dyn Fn(i64) -> bool>, EdgeFlags, Coeff, Coeff, Coeff) = match id {
                FamilyId::V1JJ1 { .. } => (
                    all,
                    both,
                    Box::new(|i| Ok(if i == 0 { one.clone() } else { int(i) })),
                    Box::new(|i| Ok(if i == 1 { zero.clone() } else { one.clone() })),
                    Box::new(|i| if i == 1 { Ok(ctx.sub(&ctx.mul(&q, &b), &one)) } else { y1_generic(i) }),
                ),
                FamilyId::V1JJCD { .. } => {
                    let (c, d) = (c.clone().unwrap(), d.clone().unwrap());
                    let one = one.clone();
                    (
                        all,
                        both,
                        Box::new(|i| Ok(int(i))),
                        Box::new(move |i| Ok(if i == 1 { c.clone() } else { one.clone() })),
                        Box::new(move |i| if i == 1 { Ok(d.clone()) } else { y1_generic(i) }),
                    )
                }
                FamilyId::V1JJ3 { .. } => (
                    Box::new(|i| i <= 0),
                    EdgeFlags { low: true, high: false },
                    Box::new(|i| Ok(int(i))),
                    Box::new(|_| Ok(one.clone())),
                    Box::new(y1_generic),
                ),
                _ => (
                    Box::new(|i| i >= 1),
                    EdgeFlags { low: false, high: true },
                    Box::new(|i| Ok(int(i))),
                    Box::new(|i| Ok(if i == 1 { zero.clone() } else { one.clone() })),
                    Box::new(|i| if i == 1 { Ok(zero.clone()) } else { y1_generic(i) }),
                ),
            };
            let params = match id {
                FamilyId::V1JJCD { c, d } => format!("c={}, d={}", show(c), show(d)),
                _ => format!("b={}", show(&b)),
            };
            line_module(ctx, LineSpec { base, window, support, label: label_v, x, y, y1, edges, kind: kind(params) })
        }
        FamilyId::VqFBA { f, b, a } => {
            if ctx.is_zero(f) {
                return Err(side("f must be nonzero"));
            }
            let base = WeightPoint::new(ctx, a.clone(), b.clone())?;
            let orbit = compute_orbit(ctx, &base);
            let r = orbit.length().ok_or_else(|| side(format!("{name} needs a circular orbit")))? as i64;
            if (0..r).any(|i| ctx.mul(&qp(i), b) == one) {
                return Err(side("b must not be a power of q"));
            }
            let finv = ctx.inv(f).unwrap();
            // v_i at offset i-1.
            line_module(
                ctx,
                LineSpec {
                    base,
                    window,
                    support: all,
                    label: Box::new(|k| format!("v{}", k + 1)),
                    x: Box::new(|k| {
                        let i = k + 1;
                        let t = ctx.sub(&ctx.mul(&qp(i), b), &one);
                        Ok(if i == r { ctx.mul(f, &t) } else { t })
                    }),
                    y1: Box::new(|k| Ok(if k == 0 { finv.clone() } else { one.clone() })),
                    y: Box::new(|k| {
                        // Y v_(i+1) = (a+i-1)/(q^i b-1) v_i; wraps from v_1 to v_r.
                        let i = if k == 0 { r } else { k };
                        let den = ctx.sub(&ctx.mul(&qp(i), b), &one);
                        let den = if k == 0 { ctx.mul(f, &den) } else { den };
                        divide(ctx, &ctx.add(a, &int(i - 1)), &den, "Y v_(i+1) = (a+i-1)/(q^i b-1) v_i", k)
                    }),
                    edges: EdgeFlags::default(),
                    kind: kind(format!("f={}, b={}, a={}", show(f), show(b), show(a))),
                },
            )
        }
        FamilyId::V1FAB { f, a, b } => {
            if ctx.is_zero(f) {
                return Err(side("f must be nonzero"));
            }
            let base = WeightPoint::new(ctx, a.clone(), b.clone())?;
            let orbit = compute_orbit(ctx, &base);
            let r = orbit.length().ok_or_else(|| side(format!("{name} needs a circular orbit")))? as i64;
            if ctx.is_integral(a) {
                return Err(side("a must not lie in the prime field"));
            }
            let finv = ctx.inv(f).unwrap();
            line_module(
                ctx,
                LineSpec {
                    base,
                    window,
                    support: all,
                    label: Box::new(|k| format!("v{}", k + 1)),
                    x: Box::new(|k| {
                        let i = k + 1;
                        let t = ctx.add(a, &int(i - 1));
                        Ok(if i == r { ctx.mul(f, &t) } else { t })
                    }),
                    y: Box::new(|k| Ok(if k == 0 { finv.clone() } else { one.clone() })),
                    y1: Box::new(|k| {
                        // Y1 v_(i+1) = (q^i b-1)/(a+i-1) v_i; wraps from v_1 to v_r.
                        let i = if k == 0 { r } else { k };
                        let den = ctx.add(a, &int(i - 1));
                        let den = if k == 0 { ctx.mul(f, &den) } else { den };
                        divide(ctx, &ctx.sub(&ctx.mul(&qp(i), b), &one), &den, "Y1 v_(i+1) = (q^i b-1)/(a+i-1) v_i", k)
                    }),
                    edges: EdgeFlags::default(),
                    kind: kind(format!("f={}, a={}, b={}", show(f), show(a), show(b))),
                },
            )
        }
        FamilyId::ChainCycle { word, a } => chain_cycle(ctx, word, a),
        FamilyId::VcdTwoRow { c, d } => vcd_two_row(ctx, c, d, window),
        FamilyId::Remark136 => remark_136(ctx),
    }
}

fn chain_cycle(ctx: &FieldCtx, word: &[Op], a: &[Elem]) -> Result<WeightModule> {
    let m = word.len();
    if m == 0 || a.len() != m {
        return Err(side("CHAIN_CYCLE needs a nonempty word and one scalar per letter"));
    }
    if word.contains(&Op::X) {
        return Err(side("CHAIN_CYCLE words use only Y and Y1"));
    }
    if a.iter().any(|x| ctx.is_zero(x)) {
        return Err(side("CHAIN_CYCLE scalars must be nonzero"));
    }
    let base = WeightPoint::new(ctx, ctx.one(), ctx.one())?;
    let orbit = compute_orbit(ctx, &base);
    let r =
        orbit.length().ok_or_else(|| side("CHAIN_CYCLE needs positive characteristic and q a root of unity"))? as i64;
    let mut raw = RawModule::new(
        base,
        (0, r - 1),
        format!(
            "CHAIN_CYCLE(m={m}, w={}, a=[{}])",
            word.iter().map(|z| z.name()).collect::<Vec<_>>().join(""),
            a.iter().map(|x| ctx.print(x)).collect::<Vec<_>>().join(",")
        ),
    );
    for i in 0..r {
        raw.spaces.insert(i, (1..=m).map(|j| format!("W{j}.v{i}")).collect());
    }
    let mut x = GradedMap::new();
    let mut y = GradedMap::new();
    let mut y1 = GradedMap::new();
    for i in 0..r {
        if i < r - 1 {
            x.insert(i, Matrix::identity(ctx, m));
        }
        if i > 0 {
            y.insert(i, Matrix::scalar(ctx, m, &ctx.from_int(i)));
            y1.insert(i, Matrix::scalar(ctx, m, &ctx.sub(&ctx.q_pow(i), &ctx.one())));
        }
    }
    // Wrap terms from v_0 to v_(r-1): the letter's own operator stays in its
    // component with scalar a_j, the other operator moves to the next one.
    let mut wy = Matrix::zeros(ctx, m, m);
    let mut wy1 = Matrix::zeros(ctx, m, m);
    for (j, z) in word.iter().enumerate() {
        let next = (j + 1) % m;
        let (own, other) = if *z == Op::Y { (&mut wy, &mut wy1) } else { (&mut wy1, &mut wy) };
        own.set(j, j, a[j].clone());
        let v = ctx.add(other.get(next, j), &ctx.one());
        other.set(next, j, v);
    }
    y.insert(0, wy);
    y1.insert(0, wy1);
    raw.ops.insert(Op::X, x);
    raw.ops.insert(Op::Y, y);
    raw.ops.insert(Op::Y1, y1);
    WeightModule::new(ctx, raw)
}

fn vcd_two_row(ctx: &FieldCtx, c: &Elem, d: &Elem, window: (i64, i64)) -> Result<WeightModule> {
    require_char0(ctx, "VCD_TWOROW")?;
    let one = ctx.one();
    // Offset j carries tau = j and sigma = q^(j-1): two rows u, w for j <= 0
    // and one row v for j >= 1.
    let base = WeightPoint::new(ctx, ctx.zero(), ctx.inv(&ctx.q()).unwrap())?;
    let (lo, hi) = window;
    let mut raw = RawModule::new(base, window, format!("VCD_TWOROW(c={}, d={})", ctx.print(c), ctx.print(d)));
    raw.edges = EdgeFlags { low: true, high: true };
    for j in lo..=hi {
        let labels = if j <= 0 { vec![format!("u{j}"), format!("w{j}")] } else { vec![format!("v{j}")] };
        raw.spaces.insert(j, labels);
    }
    let dim = |j: i64| if j <= 0 { 2 } else { 1 };
    let mut x = GradedMap::new();
    let mut y = GradedMap::new();
    let mut y1 = GradedMap::new();
    for j in lo..=hi {
        if j < hi && j != 0 {
            x.insert(j, Matrix::identity(ctx, dim(j)));
        }
        if j > lo {
            let sy = ctx.from_int(j - 1);
            let sy1 = ctx.sub(&ctx.q_pow(j - 1), &one);
            if j == 1 {
                let mut my = Matrix::zeros(ctx, 2, 1);
                my.set(0, 0, c.clone());
                let mut my1 = Matrix::zeros(ctx, 2, 1);
                my1.set(1, 0, d.clone());
                y.insert(j, my);
                y1.insert(j, my1);
            } else {
                y.insert(j, Matrix::scalar(ctx, dim(j), &sy));
                y1.insert(j, Matrix::scalar(ctx, dim(j), &sy1));
            }
        }
    }
    raw.ops.insert(Op::X, x);
    raw.ops.insert(Op::Y, y);
    raw.ops.insert(Op::Y1, y1);
    WeightModule::new(ctx, raw)
}

fn remark_136(ctx: &FieldCtx) -> Result<WeightModule> {
    if ctx.characteristic() != 3 || ctx.q_order() != Some(2) {
        return Err(side("REMARK_136 needs characteristic 3 and q of order 2"));
    }
    let base = WeightPoint::new(ctx, ctx.one(), ctx.one())?;
    let mut raw = RawModule::new(base, (0, 5), "REMARK_136");
    for k in 0..3 {
        raw.spaces.insert(k, vec![format!("v{}", k + 1)]);
    }
    let e = |c: Elem| Matrix::from_rows(vec![vec![c]], 1).unwrap();
    let one = ctx.one();
    let x: GradedMap = BTreeMap::from([(0, e(one.clone())), (1, e(one.clone()))]);
    let y: GradedMap = BTreeMap::from([(1, e(one.clone())), (2, e(ctx.from_int(2)))]);
    let y1: GradedMap = BTreeMap::from([(1, e(ctx.sub(&ctx.q(), &one)))]);
    raw.ops.insert(Op::X, x);
    raw.ops.insert(Op::Y, y);
    raw.ops.insert(Op::Y1, y1);
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

    #[test]
    fn vq_b_a_values() {
        let f = qq();
        let id = FamilyId::VqBA { b: f.from_int(3), a: f.from_int(5) };
        let m = construct_family(&f, &id, (-1, 1)).unwrap();
        assert_eq!(m.apply(Op::X, 0, &[f.one()]).unwrap(), (1, vec![f.from_int(5)]));
        assert_eq!(m.apply(Op::Y, 0, &[f.one()]).unwrap(), (-1, vec![f.from_int(2)]));
        assert_eq!(m.apply(Op::Y1, 0, &[f.one()]).unwrap(), (-1, vec![f.one()]));
        let w = m.point(0);
        assert_eq!((w.a, w.b), (f.from_int(5), f.from_int(3)));
    }

    #[test]
    fn vq_b_a_rejects_power_of_q() {
        let f = qq();
        let id = FamilyId::VqBA { b: f.from_int(4), a: f.zero() };
        assert!(matches!(construct_family(&f, &id, (-3, 3)), Err(Error::SideCondition(_))));
    }

    #[test]
    fn chain_cycle_over_f4() {
        let f4 = FieldCtx::new(FieldSpec::ExtField { p: 2, modulus: vec![1, 1, 1], q: vec![0, 1] }).unwrap();
        let id = FamilyId::ChainCycle { word: vec![Op::Y], a: vec![f4.one()] };
        let m = construct_family(&f4, &id, (0, 0)).unwrap();
        assert_eq!(m.total_dim(), 6);
        assert_eq!(m.apply(Op::Y, 0, &[f4.one()]).unwrap(), (5, vec![f4.one()]));
        assert_eq!(m.apply(Op::Y1, 3, &[f4.one()]).unwrap(), (2, vec![f4.zero()]));
    }

    #[test]
    fn catalog_is_complete() {
        let c = catalog();
        assert!(c.len() >= 15);
        assert!(c.iter().all(|e| !e.side_conditions.is_empty()));
        assert!(c.iter().any(|e| e.name == "VQ_B_A"));
    }

    #[test]
    fn vanishing_denominator_reports_offset() {
        let f = FieldCtx::new(FieldSpec::Cyclotomic { n: 3 }).unwrap();
        let id = FamilyId::VqJJ1 { a: f.from_int(2) };
        match construct_family(&f, &id, (-4, 4)) {
            Err(Error::VanishingDenominator { offset, .. }) => assert!(offset == 4 || offset == -2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
