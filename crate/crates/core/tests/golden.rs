//! Canonical JSON output pinned byte for byte.

use qdo_core::analyze::{are_isomorphic, Budget};
use qdo_core::basering::WeightPoint;
use qdo_core::extend::extend_to_d;
use qdo_core::families::{construct_family, FamilyId};
use qdo_core::json::{extension_to_json, module_to_json, to_canonical_string, verdict_to_json};
use qdo_core::orbits::SubalgebraName;
use qdo_core::poly::Field;
use qdo_core::suite::{f9, rational_q2};
use qdo_core::wmod::{construct_gwa, GwaKind};

#[test]
fn small_module() {
    let f = rational_q2();
    let m = construct_family(&f, &FamilyId::VqBA { b: f.from_int(3), a: f.from_int(5) }, (-1, 1)).unwrap();
    assert_eq!(
        to_canonical_string(&module_to_json(&m), false),
        concat!(
            r#"{"base":["5/1","3/1"],"circular":false,"edge_flags":{"high":true,"low":true},"#,
            r#""field":{"kind":"RATIONAL"},"kind":"VQ_B_A(b=3/1, a=5/1)","#,
            r#""ops":{"X":[{"matrix":[["2/1"]],"offset":-1},{"matrix":[["5/1"]],"offset":0}],"#,
            r#""Y":[{"matrix":[["2/1"]],"offset":0},{"matrix":[["1/1"]],"offset":1}],"#,
            r#""Y1":[{"matrix":[["1/1"]],"offset":0},{"matrix":[["1/1"]],"offset":1}]},"#,
            r#""q":"2/1","schema":"1","#,
            r#""spaces":[{"dim":1,"labels":["v-1"],"offset":-1},{"dim":1,"labels":["v0"],"offset":0},{"dim":1,"labels":["v1"],"offset":1}],"#,
            r#""window":[-1,1]}"#
        )
    );
}

#[test]
fn impossible_extension() {
    let f = rational_q2();
    let base = WeightPoint::new(&f, f.from_int(2), f.inv(&f.q()).unwrap()).unwrap();
    let kind = GwaKind::WithBreaks { j: vec![0, 1], j_prime: vec![] };
    let m = construct_gwa(&f, SubalgebraName::AQ, &kind, &base, (-3, 3)).unwrap();
    let e = extend_to_d(&m).unwrap();
    assert_eq!(
        to_canonical_string(&extension_to_json(&f, &e), false),
        r#"{"conflict":{"label":"v0","offset":0,"relation":"YX=tau","row":0},"kind":"IMPOSSIBLE","missing":"Y","unconstrained_offsets":[]}"#
    );
}

#[test]
fn isomorphism_verdict_is_stable_across_seeds() {
    let f = f9();
    let t = f.parse("[0,1]").unwrap();
    let a = construct_family(&f, &FamilyId::VqFBA { f: f.one(), b: t.clone(), a: t.clone() }, (0, 0)).unwrap();
    let b = construct_family(&f, &FamilyId::V1FAB { f: f.one(), a: t.clone(), b: t }, (0, 0)).unwrap();
    let render = |seed| {
        let v = are_isomorphic(&a, &b, SubalgebraName::D, &Budget::with_seed(seed)).unwrap();
        to_canonical_string(&verdict_to_json(&f, &v), false)
    };
    assert_eq!(render(1), render(1));
    assert!(render(42).starts_with(r#"{"verdict":"YES","witness":{"blocks":[{"matrix":[["[1]"]],"offset":0}"#));
}
