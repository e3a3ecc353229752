//! Property tests for the field arithmetic, the base ring and the module
//! algorithms.

use std::collections::BTreeMap;

use proptest::prelude::*;

use qdo_core::analyze::{are_isomorphic, decompose, intertwines, is_closed, is_irreducible, Budget, Verdict, Witness};
use qdo_core::basering::{alpha_point, LaurentPoly, WeightPoint};
use qdo_core::extend::extend_to_d;
use qdo_core::families::{construct_family, FamilyId};
use qdo_core::json::{module_from_json, module_to_json};
use qdo_core::linalg::Matrix;
use qdo_core::orbits::SubalgebraName;
use qdo_core::poly::Field;
use qdo_core::suite::{cyclotomic5, f4, f9, function_field, rational_q2};
use qdo_core::wmod::{construct_gwa, GradedMap, GwaKind, Op, WeightModule};
use qdo_core::{Elem, FieldCtx, FieldSpec};

fn f25() -> FieldCtx {
    FieldCtx::new(FieldSpec::ExtField { p: 5, modulus: vec![2, 0, 1], q: vec![0, 1] }).unwrap()
}

fn fields() -> Vec<FieldCtx> {
    vec![rational_q2(), cyclotomic5(), function_field(), f9(), f4(), f25()]
}

/// Encoded elements built from small integers, valid in every field kind.
fn elem_text(kind: usize) -> BoxedStrategy<String> {
    let small = -6i64..=6;
    match kind {
        0 => (small.clone(), 1i64..=5).prop_map(|(n, d)| format!("{n}/{d}")).boxed(),
        1 => prop::collection::vec(small, 0..=4)
            .prop_map(|v| format!("[{}]", v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")))
            .boxed(),
        2 => (prop::collection::vec(small.clone(), 0..=3), small, 1i64..=3)
            .prop_map(|(n, d0, d1)| {
                let num = n.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                format!("[{num}]|[{d0},{d1}]")
            })
            .boxed(),
        _ => (0u64..5, 0u64..5).prop_map(|(a, b)| format!("[{a},{b}]")).boxed(),
    }
}

fn field_and_elems(n: usize) -> impl Strategy<Value = (FieldCtx, Vec<Elem>)> {
    (0..fields().len()).prop_flat_map(move |i| {
        let ctx = fields()[i].clone();
        let kind = i.min(3);
        prop::collection::vec(elem_text(kind), n).prop_map(move |texts| {
            let v = texts.iter().map(|t| ctx.parse(t).expect("generated text parses")).collect();
            (ctx.clone(), v)
        })
    })
}

fn laurent(ctx: &FieldCtx, terms: &[(u32, i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(ctx, terms.iter().map(|&(i, j, c)| ((i, j), ctx.from_int(c))))
}

fn terms() -> impl Strategy<Value = Vec<(u32, i32, i64)>> {
    prop::collection::vec((0u32..3, -2i32..3, -4i64..5), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((ctx, v) in field_and_elems(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(ctx.add(a, b), ctx.add(b, a));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(&ctx.mul(a, b), c), ctx.mul(a, &ctx.mul(b, c)));
        prop_assert_eq!(ctx.mul(a, &ctx.add(b, c)), ctx.add(&ctx.mul(a, b), &ctx.mul(a, c)));
        prop_assert!(ctx.is_zero(&ctx.add(a, &ctx.neg(a))));
        match ctx.inv(a) {
            Some(i) => prop_assert_eq!(ctx.mul(a, &i), ctx.one()),
            None => prop_assert!(ctx.is_zero(a)),
        }
    }

    #[test]
    fn print_parse_round_trip((ctx, v) in field_and_elems(1)) {
        let text = ctx.print(&v[0]);
        prop_assert_eq!(ctx.parse(&text).unwrap(), v[0].clone());
        prop_assert_eq!(ctx.print(&ctx.parse(&text).unwrap()), text);
    }

    #[test]
    fn multiplicative_order_divides_group_order(i in 3usize..6, a in 0u64..5, b in 0u64..5) {
        let ctx = fields()[i].clone();
        let x = ctx.parse(&format!("[{a},{b}]")).unwrap();
        prop_assume!(!ctx.is_zero(&x));
        let n = ctx.size().unwrap() as i64 - 1;
        prop_assert_eq!(ctx.pow(&x, n).unwrap(), ctx.one());
    }

    #[test]
    fn twists_compose(i in 0usize..6, t in terms(), j in -3i64..4, k in -3i64..4) {
        let ctx = fields()[i].clone();
        let f = laurent(&ctx, &t);
        prop_assert_eq!(f.twist(&ctx, j).twist(&ctx, k), f.twist(&ctx, j + k));
        prop_assert_eq!(f.twist(&ctx, 0), f.clone());
    }

    #[test]
    fn twist_matches_the_shifted_point(t in terms(), a in -5i64..6, b in 1i64..6, k in -3i64..4) {
        let ctx = rational_q2();
        let f = laurent(&ctx, &t);
        let w = WeightPoint::new(&ctx, ctx.from_int(a), ctx.from_int(b)).unwrap();
        prop_assert_eq!(f.twist(&ctx, k).eval_at(&ctx, &w), f.eval_at(&ctx, &alpha_point(&ctx, &w, -k)));
    }

    #[test]
    fn extension_outcome_ignores_basis_scaling(a in -3i64..4, s in prop::collection::vec(1i64..5, 7)) {
        let ctx = rational_q2();
        let base = WeightPoint::new(&ctx, ctx.from_int(a), ctx.inv(&ctx.q()).unwrap()).unwrap();
        let kind = GwaKind::WithBreaks { j: vec![0, 1], j_prime: vec![] };
        let m = construct_gwa(&ctx, SubalgebraName::AQ, &kind, &base, (-3, 3)).unwrap();
        let p: GradedMap = m
            .offsets()
            .filter(|k| m.dim_at(*k) > 0)
            .map(|k| (k, Matrix::scalar(&ctx, m.dim_at(k), &ctx.from_int(s[(k + 3) as usize]))))
            .collect();
        let scaled = m.change_basis(&p).unwrap();
        let (e1, e2) = (extend_to_d(&m).unwrap(), extend_to_d(&scaled).unwrap());
        prop_assert_eq!(e1.kind(), e2.kind());
        prop_assert_eq!(e1.kind() == "IMPOSSIBLE", a != 0);
    }

    #[test]
    fn module_json_round_trip(i in 0usize..2, b in 3i64..9, a in -4i64..5) {
        let ctx = [rational_q2(), function_field()][i].clone();
        let id = FamilyId::VqBA { b: ctx.from_int(b), a: ctx.from_int(a) };
        prop_assume!(b != 4 && b != 8);
        let m = construct_family(&ctx, &id, (-2, 2)).unwrap();
        prop_assert_eq!(module_from_json(&module_to_json(&m)).unwrap(), m);
    }
}

fn chain_cycle(ctx: &FieldCtx, word: &[Op], a: &[Elem]) -> WeightModule {
    construct_family(ctx, &FamilyId::ChainCycle { word: word.to_vec(), a: a.to_vec() }, (0, 0)).unwrap()
}

fn nonzero(ctx: &FieldCtx, x: (u64, u64)) -> Elem {
    let e = ctx.parse(&format!("[{},{}]", x.0, x.1)).unwrap();
    if ctx.is_zero(&e) {
        ctx.one()
    } else {
        e
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn decomposition_witnesses_verify(
        word in prop::collection::vec(prop_oneof![Just(Op::Y), Just(Op::Y1)], 1..=2),
        raw in prop::collection::vec((0u64..3, 0u64..3), 2),
        algebra in prop_oneof![Just(SubalgebraName::AQ), Just(SubalgebraName::A1), Just(SubalgebraName::D)],
        seed in 0u64..1000,
    ) {
        let ctx = f9();
        let a: Vec<Elem> = raw.iter().take(word.len()).map(|x| nonzero(&ctx, *x)).collect();
        let m = chain_cycle(&ctx, &word, &a);
        let d = decompose(&m, algebra, &Budget::with_seed(seed)).unwrap();
        prop_assert_eq!(d.summands.iter().map(WeightModule::total_dim).sum::<usize>(), m.total_dim());
        if let Some(e) = &d.idempotent {
            prop_assert!(intertwines(&m, &m, algebra, e));
            for blk in e.values() {
                prop_assert_eq!(&blk.mul(&ctx, blk), blk);
            }
        }
        if let Verdict::No(Witness::Submodule(sub)) = is_irreducible(&m, algebra, &Budget::with_seed(seed)).unwrap() {
            prop_assert!(is_closed(&m, algebra, &sub));
        }
    }

    #[test]
    fn basis_change_gives_an_isomorphic_module(
        word in prop::collection::vec(prop_oneof![Just(Op::Y), Just(Op::Y1)], 1..=2),
        raw in prop::collection::vec((0u64..2, 0u64..2), 2),
        mix in prop::collection::vec((0u64..2, 0u64..2), 4),
    ) {
        let ctx = f4();
        let a: Vec<Elem> = raw.iter().take(word.len()).map(|x| nonzero(&ctx, *x)).collect();
        let m = chain_cycle(&ctx, &word, &a);
        let dim = word.len();
        // Unipotent upper triangular change of basis on every weight space.
        let mut p = BTreeMap::new();
        for k in m.offsets() {
            let mut blk = Matrix::identity(&ctx, dim);
            if dim == 2 {
                blk.set(0, 1, ctx.parse(&format!("[{},{}]", mix[(k % 4) as usize].0, mix[(k % 4) as usize].1)).unwrap());
            }
            p.insert(k, blk);
        }
        let w = m.change_basis(&p).unwrap();
        match are_isomorphic(&m, &w, SubalgebraName::D, &Budget::default()).unwrap() {
            Verdict::Yes(Witness::Intertwiner(psi)) => prop_assert!(intertwines(&m, &w, SubalgebraName::D, &psi)),
            other => prop_assert!(false, "unexpected verdict {:?}", other),
        }
    }
}
