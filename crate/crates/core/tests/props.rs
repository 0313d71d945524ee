mod common;

use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;

use billiard_core::geom::{eval_word, in_tau, reflect_edge, EdgeWord, PlanarIsometry, TriangleShape};
use billiard_core::stability::{integer_relation, is_stable, winding_vector};
use billiard_core::tri3060::{act, classify_vector, composed_row, pstar, GMatrix, H3Class, LatticeVector};
use billiard_core::unfolding::{classify_word, Verdict};
use billiard_core::veech::{
    congruence_s, enumerate_cycles, homology_of_cycle, CycleClass, Constraints, DecoratedCycle,
};

fn triangle() -> impl Strategy<Value = (f64, f64)> {
    (0.1..1.5f64, 0.1..1.5f64).prop_filter("third angle", |(a, b)| a + b < PI - 0.1)
}

fn acute() -> impl Strategy<Value = (f64, f64)> {
    (0.05..1.52f64, 0.05..1.52f64).prop_filter("acute", |(a, b)| a + b > PI / 2.0 + 0.05)
}

/// Cyclic words of even length with no repeated neighbours.
fn cyclic_word(max_half: usize) -> impl Strategy<Value = EdgeWord> {
    (1..=3usize, prop::collection::vec(1..=2usize, 2..=2 * max_half))
        .prop_filter_map("cyclic even word", |(first, steps)| {
            let mut l = vec![first];
            for s in &steps[1..] {
                l.push((l.last().unwrap() - 1 + s) % 3 + 1);
            }
            if l.len() % 2 == 1 {
                l.pop();
            }
            EdgeWord::new(l, 3).ok().filter(|w| w.is_cyclic())
        })
}

fn dist_to_identity(g: &PlanarIsometry) -> f64 {
    g.distance(&PlanarIsometry::identity())
}

fn rotation_angle(g: &PlanarIsometry) -> f64 {
    let m = g.orthogonal.matrix();
    m[(1, 0)].atan2(m[(0, 0)])
}

fn circ(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn g_element() -> impl Strategy<Value = GMatrix> {
    let gens = [(1, 2, 0, 1), (1, -2, 0, 1), (1, 0, 2, 1), (1, 0, -2, 1), (-1, 0, 0, -1)];
    prop::collection::vec(0..gens.len(), 0..6).prop_map(move |idx| {
        idx.iter().fold(GMatrix::identity(), |acc, &i| {
            let (a, b, c, d) = gens[i];
            acc.mul(&GMatrix::new(a, b, c, d).unwrap())
        })
    })
}

fn h3() -> impl Strategy<Value = H3Class> {
    (-20..20i64, -20..20i64, -20..20i64).prop_map(|(s, u, v)| H3Class::new(s, u, v))
}

fn v8_cycles() -> &'static Vec<CycleClass> {
    static C: OnceLock<Vec<CycleClass>> = OnceLock::new();
    C.get_or_init(|| enumerate_cycles(8, 8, &Constraints::default()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reflection_is_an_involution((t1, t2) in triangle(), i in 1..=3usize) {
        let p = TriangleShape::from_radians(t1, t2).unwrap().polygon();
        let r = reflect_edge(&p, i).unwrap();
        prop_assert!(dist_to_identity(&r.compose(&r)) < 1e-9);
        prop_assert!(!r.orthogonal.is_identity(1e-9));
    }

    #[test]
    fn word_then_reverse_is_trivial((t1, t2) in triangle(), w in cyclic_word(8)) {
        let p = TriangleShape::from_radians(t1, t2).unwrap().polygon();
        let rev = EdgeWord::new(w.letters().iter().rev().copied().collect(), 3).unwrap();
        let g = eval_word(&p, &w).unwrap().compose(&eval_word(&p, &rev).unwrap());
        prop_assert!(dist_to_identity(&g) < 1e-8);
    }

    #[test]
    fn word_matches_mirror_products((t1, t2) in triangle(), w in cyclic_word(6)) {
        let p = TriangleShape::from_radians(t1, t2).unwrap().polygon();
        let g = eval_word(&p, &w).unwrap();
        let m = *common::placements(&common::triangle(t1, t2), w.letters()).last().unwrap();
        let o = g.orthogonal.matrix();
        let ours = [o[(0, 0)], o[(0, 1)], g.translation.x, o[(1, 0)], o[(1, 1)], g.translation.y];
        let theirs = [m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2]];
        for (a, b) in ours.iter().zip(theirs) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn stable_iff_null_homologous(w in cyclic_word(8)) {
        let wv = winding_vector(&w, None).unwrap();
        prop_assert_eq!(is_stable(&w), wv.is_null_homologous());
        prop_assert_eq!(in_tau(&w), wv.is_null_homologous());
        prop_assert_eq!(integer_relation(&w).is_ok(), !wv.is_null_homologous());
    }

    #[test]
    fn winding_predicts_closing_rotation((t1, t2) in triangle(), w in cyclic_word(8)) {
        let p = TriangleShape::from_radians(t1, t2).unwrap().polygon();
        let wv = winding_vector(&w, None).unwrap();
        let a = [t1, t2, PI - t1 - t2];
        let s: f64 = (0..3).map(|v| 2.0 * wv.w[v] as f64 * a[v]).sum();
        let rot = rotation_angle(&eval_word(&p, &w).unwrap());
        prop_assert!(circ(rot, s).min(circ(rot, -s)) < 1e-7, "rot {} vs {}", rot, s);
    }

    #[test]
    fn fagnano_is_open((t1, t2) in acute(), d1 in -1e-6..1e-6f64, d2 in -1e-6..1e-6f64) {
        let w = EdgeWord::new(vec![1, 2, 3, 1, 2, 3], 3).unwrap();
        let p = TriangleShape::from_radians(t1, t2).unwrap().polygon();
        prop_assert_eq!(classify_word(&p, &w).unwrap(), Verdict::Periodic);
        let q = TriangleShape::from_radians(t1 + d1, t2 + d2).unwrap().polygon();
        prop_assert_eq!(classify_word(&q, &w).unwrap(), Verdict::Periodic);
    }

    #[test]
    fn act_composes(a in g_element(), b in g_element(), h in h3()) {
        prop_assert_eq!(act(&a.mul(&b), h), act(&a, act(&b, h)));
        prop_assert_eq!(act(&a.inverse(), act(&a, h)), h);
    }

    #[test]
    fn pstar_after_act_is_the_composed_row(g in g_element(), h in h3()) {
        let r = composed_row(&g);
        prop_assert_eq!(pstar(act(&g, h)), r[0] * h.s + r[1] * h.u + r[2] * h.v);
    }

    #[test]
    fn classification_reaches_the_vector(n in -300..300i64, m in -300..300i64) {
        let v = LatticeVector::new(n, m);
        prop_assume!(v.is_primitive());
        let c = classify_vector(v).unwrap();
        prop_assert_eq!(c.g.apply(c.base), v);
        prop_assert_eq!(c.base.parity(), v.parity());
    }

    #[test]
    fn cycle_symmetries_preserve_validity(i in 0..10_000usize) {
        let all = v8_cycles();
        let c = &all[i % all.len()].cycle;
        for d in [c.mirror(), c.reverse_mirror(), c.rotate(i % c.len())] {
            prop_assert!(DecoratedCycle::new(d.n, d.components.clone(), d.decorations.clone()).is_ok());
        }
        prop_assert_eq!(c.mirror().mirror(), c.clone());
    }

    #[test]
    fn congruence_matches_homology(i in 0..10_000usize) {
        let all = v8_cycles();
        let c = &all[i % all.len()].cycle;
        // the affine unit here is -1
        prop_assert_eq!((-congruence_s(c)).rem_euclid(16), homology_of_cycle(c).residue());
        prop_assert_eq!(congruence_s(&c.rotate(1)), congruence_s(c));
    }
}
