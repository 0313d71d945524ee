use std::f64::consts::PI;

use billiard_core::geom::TriangleShape;
use billiard_core::tri3060::{
    act, case_class, classify_vector, collinearity_probe, composed_row, decide_case, halfhex_pattern, probe_direction,
    pstar, Case, CaseTag, CaseVerdict, GMatrix, H3Class, H5Class, LatticeVector,
};
use billiard_core::Error;

fn g(a: i64, b: i64, c: i64, d: i64) -> GMatrix {
    GMatrix::new(a, b, c, d).unwrap()
}

fn sample_g() -> Vec<GMatrix> {
    vec![
        GMatrix::identity(),
        g(1, 2, 0, 1),
        g(1, 0, 2, 1),
        g(-1, 0, 0, -1),
        g(3, 4, 2, 3),
        g(-3, 8, -2, 5),
        g(5, 2, 2, 1),
    ]
}

#[test]
fn g_membership() {
    assert!(matches!(GMatrix::new(2, 1, 1, 1), Err(Error::NotInG(_))));
    assert!(matches!(GMatrix::new(1, 1, 0, 1), Err(Error::NotInG(_))));
    assert!(matches!(GMatrix::new(1, 2, 2, 1), Err(Error::NotInG(_))));
    let x = g(3, 4, 2, 3);
    assert_eq!(x.mul(&x.inverse()), GMatrix::identity());
}

#[test]
fn classify_base_vector() {
    let c = classify_vector(LatticeVector::new(1, 0)).unwrap();
    assert_eq!(c.g, GMatrix::identity());
    assert_eq!(c.cases, vec![Case::S1, Case::S2]);
    assert!(!c.rotated);
}

#[test]
fn classify_examples() {
    let c = classify_vector(LatticeVector::new(1, 2)).unwrap();
    assert_eq!(c.parity, (1, 0));
    assert_eq!(c.g.apply(c.base), LatticeVector::new(1, 2));
    assert_eq!(c.g.entries(), [1, 0, 2, 1]);
    let d = classify_vector(LatticeVector::new(3, 2)).unwrap();
    assert_eq!(d.parity, (1, 0));
    assert_eq!(d.base, c.base);
    assert_ne!(d.g, c.g);
    assert_eq!(d.g.apply(d.base), LatticeVector::new(3, 2));
    assert!(matches!(classify_vector(LatticeVector::new(2, 4)), Err(Error::NotPrimitive(2, 4))));
}

/// Every primitive vector up to height 50 is reached from one of three bases.
#[test]
fn parity_classes_cover_primitive_vectors() {
    let mut seen = std::collections::BTreeSet::new();
    for n in -50..=50i64 {
        for m in -50..=50i64 {
            let v = LatticeVector::new(n, m);
            if !v.is_primitive() {
                continue;
            }
            let c = classify_vector(v).unwrap();
            assert_eq!(c.g.apply(c.base), v);
            assert_eq!(c.parity, c.base.parity());
            // g must lie in G
            GMatrix::new(c.g.a, c.g.b, c.g.c, c.g.d).unwrap();
            seen.insert((c.base.n, c.base.m));
        }
    }
    assert_eq!(seen.len(), 3);
}

#[test]
fn act_examples() {
    let h = H3Class::new(3, -2, 5);
    assert_eq!(act(&GMatrix::identity(), h), h);
    let x = g(1, 2, 0, 1);
    assert_eq!(act(&x, H3Class::new(0, 1, 0)), H3Class::new(0, 1, 0));
    assert_eq!(act(&x, H3Class::new(0, 0, 1)), H3Class::new(-2, 2, 1));
}

#[test]
fn act_is_an_action() {
    let gs = sample_g();
    let hs = [H3Class::new(1, 0, 0), H3Class::new(0, 1, 0), H3Class::new(0, 0, 1), H3Class::new(4, -3, 7)];
    for a in &gs {
        for b in &gs {
            for &h in &hs {
                assert_eq!(act(&a.mul(b), h), act(a, act(b, h)));
            }
        }
    }
}

#[test]
fn pstar_examples() {
    assert_eq!(pstar(H3Class::new(0, 0, 0)), 0);
    assert_eq!(pstar(H3Class::new(1, 1, 0)), 0);
    for x in sample_g() {
        for s in -3..=3 {
            let row = composed_row(&x);
            assert_eq!(pstar(act(&x, H3Class::new(s, 1, 0))), s + row[1]);
            assert_eq!(row[1], 1 - 2 * x.a - 2 * x.c);
        }
    }
}

#[test]
fn h5_reduction() {
    let h = H5Class::from_p4([2, 1, 0, 1], 3, -1);
    assert_eq!((h.p1, h.p2, h.p3), (1, 0, -1));
    assert_eq!(h.reduce(), H3Class::new(0, 3, -1));
    assert_eq!(h.pstar(), pstar(h.reduce()));
}

#[test]
fn case_classes() {
    // s1 reaches x = 1 first at two repetitions, one clockwise semicircle at each vertex
    assert!(CaseTag::all(Case::S1, 1).iter().all(|t| t.x() != Some(1)));
    let s1 = CaseTag::new(Case::S1, 2, 1, 1, 1, 1).unwrap();
    assert_eq!(s1.x(), Some(1));
    assert_eq!(case_class(&s1).unwrap(), H3Class::new(2, 2, 0));
    let s3 = CaseTag::new(Case::S3, 1, 0, 0, 1, 1).unwrap();
    assert_eq!(s3.x(), Some(1));
    assert_eq!(case_class(&s3).unwrap(), H3Class::new(2, 1, 1));
    let s2 = CaseTag::new(Case::S2, 2, 0, 0, 4, 0).unwrap();
    assert_eq!(s2.x(), Some(2));
    assert_eq!(case_class(&s2).unwrap(), H3Class::new(4, 2, 0));
    assert!(matches!(CaseTag::new(Case::S2, 1, 1, 0, 1, 1), Err(Error::DecorationBound(_))));
    assert!(matches!(CaseTag::new(Case::S1, 0, 0, 0, 0, 0), Err(Error::DecorationBound(_))));
}

#[test]
fn s1_same_direction_never_trivial() {
    for n in 1..=4 {
        for t in CaseTag::all(Case::S1, n) {
            if t.mixed_at_v1() {
                continue;
            }
            for x in sample_g() {
                assert_eq!(decide_case(&t, &x).unwrap(), CaseVerdict::NotNullHomologous, "{t:?}");
            }
        }
    }
}

#[test]
fn case_verdicts() {
    let s2 = CaseTag::new(Case::S2, 1, 0, 0, 1, 1).unwrap();
    assert_eq!(decide_case(&s2, &g(1, 2, 0, 1)).unwrap(), CaseVerdict::AcuteOnly);
    let s4 = CaseTag::new(Case::S4, 2, 1, 1, 1, 1).unwrap();
    assert_eq!(s4.x(), Some(1));
    assert_eq!(decide_case(&s4, &GMatrix::identity()).unwrap(), CaseVerdict::RayExcluded);
    let v = serde_json::to_value(CaseVerdict::RayExcluded).unwrap();
    assert_eq!(v, "ray-excluded");
}

#[test]
fn halfhex_table() {
    assert_eq!(halfhex_pattern(0), (String::new(), String::new()));
    assert_eq!(halfhex_pattern(1), ("B".into(), "A".into()));
    assert_eq!(halfhex_pattern(2), ("BA".into(), "BA".into()));
    assert_eq!(halfhex_pattern(3), ("BBA".into(), "BAA".into()));
}

#[test]
fn probe_s2_on_306090() {
    let t = TriangleShape::t306090();
    for a in [1, 3, 5, 7, 9] {
        let r = collinearity_probe(Case::S2, a, &t, 1e-4).unwrap();
        assert!(r.residual < 1e-9, "a = {a}: {r:?}");
        assert!(r.signed_offset < 0.0);
        assert!(r.derivative.abs() > 1e-6);
    }
}

/// The traced s3 unfolding places `Y` below `XZ` once `theta1` drops.
#[test]
fn probe_s3_on_306090() {
    let t = TriangleShape::t306090();
    for ab in [3, 5, 7, 9] {
        let r = collinearity_probe(Case::S3, ab, &t, 1e-4).unwrap();
        assert!(r.residual < 1e-9);
        assert!(r.derivative.abs() > 1e-6);
        assert!(r.signed_offset < 0.0);
    }
}

#[test]
fn probe_on_other_right_triangles() {
    for t1 in [0.2, 0.7, 1.3] {
        let t = TriangleShape::from_radians(t1, PI / 2.0 - t1).unwrap();
        for case in [Case::S2, Case::S3] {
            assert!(collinearity_probe(case, 5, &t, 1e-4).unwrap().residual < 1e-9);
        }
    }
}

#[test]
fn probe_errors() {
    assert!(matches!(probe_direction(Case::S2, 4), Err(Error::Parity(4))));
    assert!(matches!(probe_direction(Case::S1, 3), Err(Error::Precondition(_))));
    let t = TriangleShape::t306090();
    assert!(matches!(collinearity_probe(Case::S3, 2, &t, 1e-4), Err(Error::Parity(2))));
}
