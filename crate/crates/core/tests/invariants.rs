//! Cross-cutting invariants exercised over the whole golden corpus:
//! residuation adjunctions, the star laws, the filter–congruence
//! correspondence, the chain structure lemmas, and the classification
//! cross-checks between independent computation routes.

use demorgan::algebra::FiniteAlgebra;
use demorgan::classify::classify;
use demorgan::corpus::golden_corpus;
use demorgan::filter;
use demorgan::iso::are_isomorphic;
use demorgan::morphism;
use demorgan::set::ElemSet;
use demorgan::structure;
use demorgan::term::{check_equation, named_equation};
use demorgan::{construct, Term};

fn corpus() -> Vec<(&'static str, FiniteAlgebra)> {
    golden_corpus()
}

/// Totally ordered idempotent members, with involutive ones replaced by
/// their residuated-lattice reducts.
fn chain_idem_rls() -> Vec<(String, FiniteAlgebra)> {
    corpus()
        .into_iter()
        .filter(|(_, a)| a.is_totally_ordered() && a.is_idempotent())
        .map(|(k, a)| {
            if a.has_involution() {
                (format!("{k}-reduct"), a.reduct())
            } else {
                (k.to_string(), a)
            }
        })
        .collect()
}

#[test]
fn adjunction_holds_exhaustively() {
    for (key, a) in corpus() {
        for x in a.elements() {
            for y in a.elements() {
                for z in a.elements() {
                    assert_eq!(
                        a.le(a.fuse(x, y), z),
                        a.le(y, a.resid(x, z)),
                        "adjunction fails on {key} at ({x},{y},{z})"
                    );
                }
            }
        }
    }
}

#[test]
fn star_laws_hold_on_every_corpus_algebra() {
    for (key, a) in corpus() {
        for x in a.elements() {
            assert!(a.le(x, a.double_star(x)), "{key}: x ≤ x** fails at {x}");
            assert_eq!(
                a.star(a.double_star(x)),
                a.star(x),
                "{key}: x*** = x* fails at {x}"
            );
            assert!(a.le(a.e(), a.abs_of(x)), "{key}: e ≤ |x| fails at {x}");
        }
    }
}

#[test]
fn star_eval_matches_residual_into_e() {
    let star = Term::star(Term::var("x"));
    for (key, a) in corpus() {
        for v in a.elements() {
            let asg = [("x".to_string(), v)].into();
            assert_eq!(
                demorgan::term::eval(&a, &star, &asg).unwrap(),
                a.resid(v, a.e()),
                "{key} at {v}"
            );
        }
    }
}

#[test]
fn absolute_value_displays_on_idempotent_members() {
    for (key, a) in corpus().into_iter().filter(|(_, a)| a.is_idempotent()) {
        let e = a.e();
        for x in a.elements() {
            let abs = a.abs_of(x);
            let star = a.star(x);
            assert!(a.le(x, abs), "{key}: x ≤ |x| fails at {x}");
            assert_eq!(x == abs, a.le(e, x), "{key}: x = |x| ⟺ e ≤ x fails at {x}");
            assert_eq!(star == abs, a.le(x, e), "{key}: x* = |x| ⟺ x ≤ e fails at {x}");
            assert_eq!(x == star, x == e, "{key}: x = x* ⟺ x = e fails at {x}");
        }
    }
}

#[test]
fn sigma_equation_matches_gsm_flag_on_semilinear_idempotent_members() {
    let (lhs, rhs) = named_equation("sigma").unwrap();
    for (key, a) in corpus() {
        let r = classify(&a);
        if r.semilinear.holds && r.idempotent.holds {
            let holds = check_equation(&a, &lhs, &rhs).unwrap().holds();
            assert_eq!(holds, r.gsm.holds, "{key}");
        }
    }
}

#[test]
fn semilinear_members_are_fsi_iff_totally_ordered() {
    for (key, a) in corpus() {
        let r = classify(&a);
        if r.semilinear.holds {
            assert_eq!(r.fsi.holds, r.totally_ordered.holds, "{key}");
        }
    }
}

#[test]
fn square_increasing_irl_trichotomy() {
    for (key, a) in corpus().into_iter().filter(|(_, a)| a.has_involution()) {
        assert!(a.is_square_increasing(), "{key}");
        let f = a.f().unwrap();
        let f2 = a.fuse(f, f);
        let c1 = f2 == f;
        let c2 = a.le(f, a.e());
        let c3 = a.is_idempotent();
        assert!(c1 == c2 && c2 == c3, "{key}: trichotomy splits ({c1},{c2},{c3})");
    }
}

#[test]
fn de_morgan_laws_and_f_residual_on_involutive_members() {
    for (key, a) in corpus().into_iter().filter(|(_, a)| a.has_involution()) {
        let f = a.f().unwrap();
        for x in a.elements() {
            assert_eq!(a.resid(x, f), a.neg_of(x), "{key}: ¬x = x→f fails at {x}");
            for y in a.elements() {
                assert_eq!(
                    a.neg_of(a.meet(x, y)),
                    a.join(a.neg_of(x), a.neg_of(y)),
                    "{key}: De Morgan ∧ fails at ({x},{y})"
                );
                assert_eq!(
                    a.neg_of(a.join(x, y)),
                    a.meet(a.neg_of(x), a.neg_of(y)),
                    "{key}: De Morgan ∨ fails at ({x},{y})"
                );
                assert_eq!(
                    a.resid(x, y),
                    a.neg_of(a.fuse(x, a.neg_of(y))),
                    "{key}: x→y = ¬(x·¬y) fails at ({x},{y})"
                );
            }
        }
        let f3 = a.power(f, 3);
        assert_eq!(f3, a.fuse(f, f), "{key}: f³ = f²");
    }
}

#[test]
fn filter_congruence_is_a_lattice_isomorphism() {
    for (key, a) in corpus() {
        let lattice = filter::congruence_lattice(&a);
        for (g, cong) in &lattice {
            // Inverse direction: θ ↦ {a : (a∧e, e) ∈ θ}.
            let back = ElemSet::from_elems(
                a.elements()
                    .filter(|&x| cong.related(a.meet(x, a.e()), a.e())),
            );
            assert_eq!(back, *g, "{key}: inverse of the Leibniz map fails");
        }
        // Order preservation in both directions.
        for (g, cg) in &lattice {
            for (h, ch) in &lattice {
                let filter_le = g.is_subset(*h);
                let cong_le = a
                    .elements()
                    .all(|x| a.elements().all(|y| !cg.related(x, y) || ch.related(x, y)));
                assert_eq!(filter_le, cong_le, "{key}");
            }
        }
    }
}

#[test]
fn e_class_is_an_interval_subuniverse() {
    // Subuniverse in the residuated-lattice signature: the class of e need
    // not be closed under the involution (¬e lands in the class of f).
    for (key, a) in corpus() {
        let reduct = a.reduct();
        for g in filter::deductive_filters(&a) {
            let cong = filter::leibniz(&a, g).unwrap();
            let e_class = ElemSet::from_elems(
                a.elements().filter(|&x| cong.related(x, a.e())),
            );
            assert!(
                morphism::is_subuniverse(&reduct, e_class),
                "{key}: class of e is not a subuniverse"
            );
            // Interval: closed between its bounds.
            for x in e_class.iter() {
                for y in e_class.iter() {
                    for z in a.elements() {
                        if a.le(x, z) && a.le(z, y) {
                            assert!(e_class.contains(z), "{key}: class of e is not convex");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn classes_collapse_toward_e_on_idempotent_chains() {
    // On a totally ordered idempotent RL, distinct identified elements are
    // identified with e.
    for (key, a) in chain_idem_rls() {
        for g in filter::deductive_filters(&a) {
            let cong = filter::leibniz(&a, g).unwrap();
            for x in a.elements() {
                for y in a.elements() {
                    if x != y && cong.related(x, y) {
                        assert!(cong.related(y, a.e()), "{key} at ({x},{y})");
                    }
                }
            }
        }
    }
}

#[test]
fn simple_iff_two_deductive_filters() {
    for (key, a) in corpus() {
        if !a.is_trivial() {
            let r = classify(&a);
            assert_eq!(
                r.simple.holds,
                filter::deductive_filters(&a).len() == 2,
                "{key}"
            );
        }
    }
}

#[test]
fn star_closed_intervals_around_e_behave() {
    // On every totally ordered idempotent corpus member: a star-closed
    // interval I around e is a subuniverse; the set I⁎ of outside elements
    // whose star lands in I avoids double-star elements, sits strictly
    // below I, stars onto max I, and I ∪ I⁎ is again a star-closed interval.
    for (key, a) in chain_idem_rls() {
        let n = a.size();
        for lo in 0..n {
            for hi in 0..n {
                if !a.le(lo, hi) {
                    continue;
                }
                let i_set = a.interval(lo, hi);
                if !i_set.contains(a.e()) || i_set.iter().any(|x| !i_set.contains(a.star(x))) {
                    continue;
                }
                let i_star = ElemSet::from_elems(
                    a.elements()
                        .filter(|&x| !i_set.contains(x) && i_set.contains(a.star(x))),
                );
                assert!(morphism::is_subuniverse(&a, i_set), "{key}: not a subuniverse");
                for b in i_star.iter() {
                    assert_ne!(a.double_star(b), b, "{key}: I⁎ meets the double stars");
                    for x in i_set.iter() {
                        assert!(a.lt(b, x), "{key}: I⁎ not strictly below I");
                    }
                    assert_eq!(a.star(b), hi, "{key}: star of I⁎ is not max I");
                }
                let union = i_set.union(i_star);
                for x in union.iter() {
                    assert!(union.contains(a.star(x)), "{key}: union not star-closed");
                    for y in union.iter() {
                        for z in a.elements() {
                            if a.le(x, z) && a.le(z, y) {
                                assert!(union.contains(z), "{key}: union not convex");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn surjective_images_preserve_negative_generation() {
    for (key, a) in corpus() {
        if !classify(&a).negatively_generated.holds {
            continue;
        }
        for g in filter::deductive_filters(&a) {
            let (q, _) = filter::quotient(&a, g).unwrap();
            assert!(
                classify(&q).negatively_generated.holds,
                "{key}: quotient loses negative generation"
            );
        }
    }
}

#[test]
fn slaney_images_of_fsi_de_morgan_monoids() {
    // Surjective images of FSI De Morgan monoids that are nontrivial and
    // 0-generated are the algebra itself or a copy of C4.
    let c4 = construct::named_algebra("C4").unwrap();
    for (key, a) in corpus().into_iter().filter(|(_, a)| a.has_involution()) {
        if !classify(&a).fsi.holds {
            continue;
        }
        for g in filter::deductive_filters(&a) {
            let (q, _) = filter::quotient(&a, g).unwrap();
            let zero_generated =
                morphism::subuniverse_closure(&q, ElemSet::EMPTY) == ElemSet::full(q.size());
            if !q.is_trivial() && zero_generated {
                assert!(
                    are_isomorphic(&q, &a) || are_isomorphic(&q, &c4),
                    "{key}: unexpected 0-generated simple image"
                );
            }
        }
    }
}

#[test]
fn non_idempotent_involutive_members_have_no_idempotent_subalgebra() {
    for (key, a) in corpus().into_iter().filter(|(_, a)| a.has_involution()) {
        if a.is_idempotent() {
            continue;
        }
        for set in morphism::subuniverses(&a) {
            let (sub, _) = morphism::subalgebra_on(&a, set).unwrap();
            assert!(
                !sub.is_idempotent(),
                "{key}: idempotent subalgebra on {:?}",
                set.to_vec()
            );
        }
    }
}

#[test]
fn chains_generated_by_idempotents_are_idempotent() {
    for (key, a) in corpus() {
        let r = classify(&a);
        if !r.dunn_monoid.holds || !a.is_totally_ordered() {
            continue;
        }
        let idempotents: Vec<usize> =
            a.elements().filter(|&x| a.fuse(x, x) == x).collect();
        for mask in 0..(1u32 << idempotents.len()) {
            let seed = ElemSet::from_elems(
                idempotents
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &x)| x),
            );
            let (sub, _) = morphism::subalgebra_generated(&a, seed);
            assert!(sub.is_idempotent(), "{key}: Sg of idempotents not idempotent");
        }
    }
}

#[test]
fn fusion_above_f_squared_on_non_idempotent_chains() {
    for (key, a) in corpus().into_iter().filter(|(_, a)| a.has_involution()) {
        if a.is_idempotent() || !a.is_totally_ordered() {
            continue;
        }
        let f = a.f().unwrap();
        let f2 = a.fuse(f, f);
        for x in a.elements().filter(|&x| a.le(f2, x)) {
            assert_eq!(a.resid(x, x), x, "{key}: a→a = a fails above f²");
            for y in a.elements().filter(|&y| a.le(f2, y) && a.lt(x, y)) {
                assert_eq!(a.resid(x, y), y, "{key}: a→b = b fails above f²");
                assert_eq!(a.resid(y, x), a.neg_of(y), "{key}: b→a = ¬b fails above f²");
            }
        }
    }
}

#[test]
fn reflection_si_tracks_the_base() {
    for d in [
        construct::sugihara(1).reduct(),
        construct::named_algebra("2p").unwrap(),
        construct::named_algebra("RS3").unwrap(),
        construct::oplus(2),
        construct::ap_plus(2),
    ] {
        let r = construct::reflection(&d).unwrap();
        let dr = classify(&d);
        let rr = classify(&r);
        assert!(rr.de_morgan_monoid.holds && rr.anti_idempotent.holds);
        assert_eq!(rr.si.holds, d.is_trivial() || dr.si.holds);
    }
}

#[test]
fn ap_family_members_are_simple_and_generated_by_two() {
    for p in [2, 3, 5] {
        let a = construct::ap_family(p);
        assert!(classify(&a).simple.holds, "A{p} simple");
        if p > 2 {
            let sg = morphism::subuniverse_closure(&a, ElemSet::singleton(2));
            assert_eq!(sg, ElemSet::full(a.size()), "A{p} generated by 2");
        }
    }
}

#[test]
fn structure_reports_are_consistent_on_corpus() {
    for (key, a) in corpus() {
        let rc = structure::rigorous_compactness_suite(&a);
        assert!(rc.conditions_agree, "{key}: rigorous compactness splits");
        assert!(rc.fsi_dmm_consistent, "{key}: bounded FSI DMM not rigorously compact");
    }
}
