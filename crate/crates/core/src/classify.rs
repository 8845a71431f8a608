//! Classification predicates for validated algebras.
//!
//! Irreducibility follows the standard finite-algebra characterizations:
//! FSI is join-irreducibility of `e`; for square-increasing algebras SI
//! means a largest element strictly below `e` and simplicity means exactly
//! one strict lower bound of `e`.  Outside the square-increasing case both
//! fall back to the congruence lattice.

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::set::ElemSet;

/// A classification flag with an attached witness: a violating assignment
/// when the flag is false, or a certifying element when one is meaningful.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Flag {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Elem>>,
}

impl Flag {
    fn of(holds: bool) -> Flag {
        Flag {
            holds,
            witness: None,
        }
    }

    /// True without witness, or false pinned to the first violating tuple.
    fn unless(witness: Option<Vec<Elem>>) -> Flag {
        Flag {
            holds: witness.is_none(),
            witness,
        }
    }

    fn certified(witness: Option<Vec<Elem>>) -> Flag {
        Flag {
            holds: witness.is_some(),
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationReport {
    pub trivial: bool,
    pub square_increasing: Flag,
    pub idempotent: Flag,
    pub distributive: Flag,
    pub totally_ordered: Flag,
    pub semilinear: Flag,
    pub bounded: Flag,
    pub rigorously_compact: Flag,
    pub anti_idempotent: Flag,
    pub odd: Flag,
    pub integral: Flag,
    pub fsi: Flag,
    pub si: Flag,
    pub simple: Flag,
    pub negatively_generated: Flag,
    pub gsm: Flag,
    pub dunn_monoid: Flag,
    pub de_morgan_monoid: Flag,
    pub sugihara_monoid: Flag,
}

impl ClassificationReport {
    /// Flag names and values, for report printing.
    pub fn entries(&self) -> Vec<(&'static str, &Flag)> {
        vec![
            ("squareIncreasing", &self.square_increasing),
            ("idempotent", &self.idempotent),
            ("distributive", &self.distributive),
            ("totallyOrdered", &self.totally_ordered),
            ("semilinear", &self.semilinear),
            ("bounded", &self.bounded),
            ("rigorouslyCompact", &self.rigorously_compact),
            ("antiIdempotent", &self.anti_idempotent),
            ("odd", &self.odd),
            ("integral", &self.integral),
            ("fsi", &self.fsi),
            ("si", &self.si),
            ("simple", &self.simple),
            ("negativelyGenerated", &self.negatively_generated),
            ("gsm", &self.gsm),
            ("dunnMonoid", &self.dunn_monoid),
            ("deMorganMonoid", &self.de_morgan_monoid),
            ("sugiharaMonoid", &self.sugihara_monoid),
        ]
    }
}

/// The lower set of `e`.
pub fn negative_cone(a: &FiniteAlgebra) -> ElemSet {
    a.downset(a.e())
}

pub fn classify(a: &FiniteAlgebra) -> ClassificationReport {
    let n = a.size();
    let e = a.e();

    let square_increasing = Flag::unless(
        a.elements()
            .find(|&x| !a.le(x, a.fuse(x, x)))
            .map(|x| vec![x]),
    );
    let idempotent = Flag::unless(
        a.elements().find(|&x| a.fuse(x, x) != x).map(|x| vec![x]),
    );
    let distributive = Flag::unless(first_triple(n, |x, y, z| {
        a.meet(x, a.join(y, z)) != a.join(a.meet(x, y), a.meet(x, z))
    }));
    let totally_ordered = Flag::unless(first_pair(n, |x, y| !a.le(x, y) && !a.le(y, x)));
    let semilinear = if !distributive.holds {
        Flag {
            holds: false,
            witness: distributive.witness.clone(),
        }
    } else {
        Flag::unless(first_pair(n, |x, y| {
            !a.le(e, a.join(a.resid(x, y), a.resid(y, x)))
        }))
    };
    let bottom = a.bottom();
    let top = a.top();
    let bounded = Flag::certified(bottom.and_then(|b| top.map(|t| vec![b, t])));
    let rigorously_compact = match (bottom, top) {
        (Some(b), Some(t)) => Flag::unless(
            a.elements()
                .find(|&x| x != b && a.fuse(t, x) != t)
                .map(|x| vec![x]),
        ),
        _ => Flag::of(false),
    };
    let anti_idempotent = match a.f() {
        Some(f) => {
            let f2 = a.fuse(f, f);
            Flag::unless(a.elements().find(|&x| !a.le(x, f2)).map(|x| vec![x]))
        }
        None => Flag::of(false),
    };
    let odd = Flag::of(a.f() == Some(e));
    let integral = Flag::unless(a.elements().find(|&x| !a.le(x, e)).map(|x| vec![x]));

    let fsi = Flag::unless(first_pair(n, |x, y| {
        a.join(x, y) == e && x != e && y != e
    }));

    let strictly_below: Vec<Elem> = a.elements().filter(|&x| a.lt(x, e)).collect();
    let (si, simple) = if a.is_trivial() {
        (Flag::of(false), Flag::of(false))
    } else if square_increasing.holds {
        let max_below = strictly_below
            .iter()
            .copied()
            .find(|&m| strictly_below.iter().all(|&x| a.le(x, m)));
        (
            Flag::certified(max_below.map(|m| vec![m])),
            if strictly_below.len() == 1 {
                Flag::certified(Some(vec![strictly_below[0]]))
            } else {
                Flag::of(false)
            },
        )
    } else {
        let filters = crate::filter::deductive_filters(a);
        let least = a.upset(e);
        let monolith = filters
            .iter()
            .filter(|&&g| g != least)
            .fold(ElemSet::full(n), |acc, &g| acc.inter(g));
        (
            Flag::of(monolith != least),
            Flag::of(filters.len() == 2),
        )
    };

    let cone = negative_cone(a);
    let generated = crate::morphism::subuniverse_closure(a, cone);
    let negatively_generated = Flag::unless(
        a.elements()
            .find(|&x| !generated.contains(x))
            .map(|x| vec![x]),
    );

    let gsm = if !semilinear.holds || !idempotent.holds {
        Flag::of(false)
    } else {
        Flag::unless(
            a.elements()
                .find(|&x| {
                    let xe = a.join(x, e);
                    a.double_star(xe) != xe
                })
                .map(|x| vec![x]),
        )
    };

    let involutive = a.has_involution();
    let dunn_monoid =
        Flag::of(!involutive && distributive.holds && square_increasing.holds);
    let de_morgan_monoid =
        Flag::of(involutive && distributive.holds && square_increasing.holds);
    let sugihara_monoid = Flag::of(de_morgan_monoid.holds && idempotent.holds);

    ClassificationReport {
        trivial: a.is_trivial(),
        square_increasing,
        idempotent,
        distributive,
        totally_ordered,
        semilinear,
        bounded,
        rigorously_compact,
        anti_idempotent,
        odd,
        integral,
        fsi,
        si,
        simple,
        negatively_generated,
        gsm,
        dunn_monoid,
        de_morgan_monoid,
        sugihara_monoid,
    }
}

fn first_pair(n: usize, mut bad: impl FnMut(Elem, Elem) -> bool) -> Option<Vec<Elem>> {
    for x in 0..n {
        for y in 0..n {
            if bad(x, y) {
                return Some(vec![x, y]);
            }
        }
    }
    None
}

fn first_triple(n: usize, mut bad: impl FnMut(Elem, Elem, Elem) -> bool) -> Option<Vec<Elem>> {
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if bad(x, y, z) {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;

    #[test]
    fn c4_classification() {
        let report = classify(&construct::named_algebra("C4").unwrap());
        assert!(report.simple.holds);
        assert!(report.anti_idempotent.holds);
        assert!(report.negatively_generated.holds);
        assert!(!report.idempotent.holds);
        assert!(report.de_morgan_monoid.holds);
        assert!(!report.sugihara_monoid.holds);
    }

    #[test]
    fn s3_oplus_2_classification() {
        let report = classify(&construct::oplus(2));
        assert!(report.simple.holds);
        assert!(report.idempotent.holds);
        // The subuniverse generated by {−1, 0} misses c.
        assert!(!report.negatively_generated.holds);
        assert_eq!(report.negatively_generated.witness, Some(vec![2]));
        assert!(!report.gsm.holds);
        assert!(report.dunn_monoid.holds);
    }

    #[test]
    fn s4_classification() {
        let report = classify(&construct::sugihara(4));
        assert!(report.sugihara_monoid.holds);
        assert!(!report.odd.holds);
        assert!(report.negatively_generated.holds);
        assert!(report.gsm.holds);
        assert!(report.si.holds);
        assert!(!report.simple.holds);
    }

    #[test]
    fn trivial_is_fsi_but_not_si() {
        let report = classify(&construct::sugihara(1));
        assert!(report.trivial);
        assert!(report.fsi.holds);
        assert!(!report.si.holds);
        assert!(!report.simple.holds);
        // Negative generation is vacuously true: the cone generates.
        assert!(report.negatively_generated.holds);
    }

    #[test]
    fn negative_cones() {
        let s3 = construct::sugihara(3);
        assert_eq!(negative_cone(&s3).to_vec(), vec![0, 1]);
        let a3 = construct::ap_family(3);
        assert_eq!(negative_cone(&a3).to_vec(), vec![0, 1]);
        let trivial = construct::sugihara(1);
        assert_eq!(negative_cone(&trivial).to_vec(), vec![0]);
    }

    #[test]
    fn flags_are_mutually_consistent_on_small_algebras() {
        for a in [
            construct::sugihara(1),
            construct::sugihara(4),
            construct::sugihara(5),
            construct::oplus(2),
            construct::named_algebra("C4").unwrap(),
            construct::named_algebra("D4").unwrap(),
            construct::named_algebra("RS3").unwrap(),
            construct::ap_family(2),
            construct::ap_plus(2),
        ] {
            let r = classify(&a);
            assert!(!r.simple.holds || r.si.holds);
            assert!(!r.si.holds || r.fsi.holds);
            assert!(!r.totally_ordered.holds || r.semilinear.holds);
            assert!(!r.sugihara_monoid.holds || r.de_morgan_monoid.holds);
        }
    }

    #[test]
    fn non_square_increasing_algebras_use_the_congruence_fallback() {
        // The three-element chain with fusion x·y = max(0, x+y−1) is a
        // validated RL that is not square-increasing (½·½ = 0), so SI and
        // simplicity come from the filter lattice: {e} and the carrier are
        // the only deductive filters.
        let luk3 = crate::algebra::FiniteAlgebra::from_parts(
            None,
            vec![
                vec![true, true, true],
                vec![false, true, true],
                vec![false, false, true],
            ],
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 2]],
            2,
            None,
        )
        .unwrap();
        let r = classify(&luk3);
        assert!(!r.square_increasing.holds);
        assert_eq!(r.square_increasing.witness, Some(vec![1]));
        assert_eq!(crate::filter::deductive_filters(&luk3).len(), 2);
        assert!(r.simple.holds);
        assert!(r.si.holds);
        assert!(r.fsi.holds);
        assert!(r.integral.holds);
    }

    #[test]
    fn fsi_agrees_with_meet_irreducibility_in_the_congruence_lattice() {
        for a in [
            construct::sugihara(4),
            construct::oplus(2),
            construct::named_algebra("D4").unwrap(),
            construct::named_algebra("RS3").unwrap(),
            construct::ap_family(2),
        ] {
            let r = classify(&a);
            let filters = crate::filter::deductive_filters(&a);
            let least = a.upset(a.e());
            // id meet-irreducible: no two strictly larger filters intersect to [e).
            let mut irreducible = true;
            for (i, &g) in filters.iter().enumerate() {
                for &h in &filters[i + 1..] {
                    if g != least && h != least && g.inter(h) == least {
                        irreducible = false;
                    }
                }
            }
            assert_eq!(r.fsi.holds, irreducible, "on {:?}", a.name());
        }
    }
}
