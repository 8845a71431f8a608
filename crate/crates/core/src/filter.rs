//! Deductive filters, their congruences, quotients, and depth.
//!
//! A deductive filter is a lattice filter containing `e` that is also a
//! submonoid under fusion.  Filters are in bijection with congruences: a
//! filter `G` induces the congruence `{(a,b) : a→b ∈ G and b→a ∈ G}`, and a
//! congruence θ recovers its filter as `{a : (a∧e, e) ∈ θ}`.

use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::morphism::Homomorphism;
use crate::set::ElemSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error("the set {0:?} is not a deductive filter")]
    NotADeductiveFilter(Vec<Elem>),
    #[error("internal invariant violation: {0}")]
    InternalInvariantViolation(String),
}

/// A partition of the carrier into congruence classes.  `class_of[x]` is the
/// class index of `x`; class indices are assigned in order of each class's
/// least member, so the representation is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub class_of: Vec<usize>,
    pub num_classes: usize,
}

impl Congruence {
    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn is_identity(&self) -> bool {
        self.num_classes == self.class_of.len()
    }

    /// Classes as sorted element lists, indexed by class id.
    pub fn classes(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c].push(x);
        }
        out
    }
}

pub fn is_deductive_filter(a: &FiniteAlgebra, set: ElemSet) -> bool {
    if !set.contains(a.e()) {
        return false;
    }
    for x in set.iter() {
        for y in a.elements() {
            if a.le(x, y) && !set.contains(y) {
                return false;
            }
        }
        for y in set.iter() {
            if !set.contains(a.meet(x, y)) || !set.contains(a.fuse(x, y)) {
                return false;
            }
        }
    }
    true
}

/// The least deductive filter containing `seed`.
pub fn filter_closure(a: &FiniteAlgebra, seed: ElemSet) -> ElemSet {
    let mut set = seed.insert(a.e());
    loop {
        let mut next = set;
        for x in set.iter() {
            next = next.union(a.upset(x));
            for y in set.iter() {
                next = next.insert(a.meet(x, y)).insert(a.fuse(x, y));
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// All deductive filters, found by closing single-element extensions upward
/// from `[e)`.  Sorted by size and then by mask, so `[e)` comes first and the
/// whole carrier last; inclusion refines this order.
pub fn deductive_filters(a: &FiniteAlgebra) -> Vec<ElemSet> {
    let least = a.upset(a.e());
    let mut seen = vec![least];
    let mut frontier = vec![least];
    while let Some(filter) = frontier.pop() {
        for x in a.elements() {
            if !filter.contains(x) {
                let bigger = filter_closure(a, filter.insert(x));
                if !seen.contains(&bigger) {
                    seen.push(bigger);
                    frontier.push(bigger);
                }
            }
        }
    }
    seen.sort_by_key(|s| (s.len(), s.0));
    seen
}

/// The congruence `{(a,b) : a→b ∈ G and b→a ∈ G}` induced by a deductive
/// filter, verified to be compatible with every basic operation.
pub fn leibniz(a: &FiniteAlgebra, filter: ElemSet) -> Result<Congruence, FilterError> {
    if !is_deductive_filter(a, filter) {
        return Err(FilterError::NotADeductiveFilter(filter.to_vec()));
    }
    let n = a.size();
    let related =
        |x: Elem, y: Elem| filter.contains(a.resid(x, y)) && filter.contains(a.resid(y, x));
    let mut class_of = vec![usize::MAX; n];
    let mut num_classes = 0;
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        for y in x..n {
            if related(x, y) {
                if class_of[y] != usize::MAX {
                    return Err(FilterError::InternalInvariantViolation(
                        "relation is not transitive".into(),
                    ));
                }
                class_of[y] = num_classes;
            }
        }
        num_classes += 1;
    }
    let cong = Congruence {
        class_of,
        num_classes,
    };
    // Compatibility with the basic operations; a failure here indicates a
    // validation bug, never expected on a validated algebra.
    for x in 0..n {
        for y in 0..n {
            if !cong.related(x, y) {
                continue;
            }
            for z in 0..n {
                let ok = cong.related(a.fuse(x, z), a.fuse(y, z))
                    && cong.related(a.meet(x, z), a.meet(y, z))
                    && cong.related(a.join(x, z), a.join(y, z))
                    && cong.related(a.resid(x, z), a.resid(y, z))
                    && cong.related(a.resid(z, x), a.resid(z, y));
                if !ok {
                    return Err(FilterError::InternalInvariantViolation(format!(
                        "classes not compatible at ({x}, {y}, {z})"
                    )));
                }
            }
            if a.has_involution() && !cong.related(a.neg_of(x), a.neg_of(y)) {
                return Err(FilterError::InternalInvariantViolation(format!(
                    "classes not compatible with negation at ({x}, {y})"
                )));
            }
        }
    }
    Ok(cong)
}

/// The quotient algebra by a deductive filter, with its canonical
/// surjection.  Classes are ordered by least member; `a/G ≤ b/G` iff
/// `a→b ∈ G`.
pub fn quotient(
    a: &FiniteAlgebra,
    filter: ElemSet,
) -> Result<(FiniteAlgebra, Homomorphism), FilterError> {
    let cong = leibniz(a, filter)?;
    let m = cong.num_classes;
    let classes = cong.classes();
    let rep = |c: usize| classes[c][0];
    let le = (0..m)
        .map(|i| (0..m).map(|j| filter.contains(a.resid(rep(i), rep(j)))).collect())
        .collect();
    let fusion = (0..m)
        .map(|i| (0..m).map(|j| cong.class_of[a.fuse(rep(i), rep(j))]).collect())
        .collect();
    let neg = a
        .involution()
        .map(|neg| (0..m).map(|i| cong.class_of[neg[rep(i)]]).collect());
    let q = FiniteAlgebra::from_parts(None, le, fusion, cong.class_of[a.e()], neg)
        .map_err(|err| FilterError::InternalInvariantViolation(err.to_string()))?;
    let surjection = Homomorphism::new(a.clone(), q.clone(), cong.class_of.clone())
        .map_err(|err| FilterError::InternalInvariantViolation(err.to_string()))?;
    Ok((q, surjection))
}

/// The congruence of every deductive filter, in the filter order of
/// [`deductive_filters`].  The map `G ↦ ΩG` is a lattice isomorphism.
pub fn congruence_lattice(a: &FiniteAlgebra) -> Vec<(ElemSet, Congruence)> {
    deductive_filters(a)
        .into_iter()
        .map(|g| {
            let cong = leibniz(a, g).expect("deductive filters induce congruences");
            (g, cong)
        })
        .collect()
}

/// Deductive filters whose complement is closed under join.
pub fn prime_filters(a: &FiniteAlgebra) -> Vec<ElemSet> {
    deductive_filters(a)
        .into_iter()
        .filter(|&f| {
            a.elements().all(|x| {
                a.elements()
                    .all(|y| !f.contains(a.join(x, y)) || f.contains(x) || f.contains(y))
            })
        })
        .collect()
}

/// Longest chain in the poset of prime deductive filters, counted in edges.
pub fn depth(a: &FiniteAlgebra) -> usize {
    let primes = prime_filters(a);
    // Longest path in the strict-inclusion DAG, by memoized search.
    fn longest(primes: &[ElemSet], memo: &mut Vec<Option<usize>>, i: usize) -> usize {
        if let Some(d) = memo[i] {
            return d;
        }
        let mut best = 0;
        for j in 0..primes.len() {
            if i != j && primes[j].is_subset(primes[i]) {
                best = best.max(1 + longest(primes, memo, j));
            }
        }
        memo[i] = Some(best);
        best
    }
    let mut memo = vec![None; primes.len()];
    (0..primes.len())
        .map(|i| longest(&primes, &mut memo, i))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;

    #[test]
    fn filters_of_s3_oplus_2() {
        // Upward-closed e-containing subsets of the 4-chain −1 < 0 < c < 1,
        // checked against meet/fusion closure: exactly [e) and the carrier.
        let a = construct::oplus(2);
        let filters = deductive_filters(&a);
        assert_eq!(
            filters,
            vec![ElemSet::from_elems([1, 2, 3]), ElemSet::full(4)]
        );
    }

    #[test]
    fn trivial_algebra_has_one_filter() {
        let a = construct::sugihara(1);
        assert_eq!(deductive_filters(&a).len(), 1);
    }

    #[test]
    fn filters_of_a3() {
        // On the chain 0<1<2<4<8<16 only [1) and the whole carrier close.
        let a = construct::ap_family(3);
        let filters = deductive_filters(&a);
        assert_eq!(
            filters,
            vec![ElemSet::from_elems([1, 2, 3, 4, 5]), ElemSet::full(6)]
        );
    }

    #[test]
    fn leibniz_of_least_filter_is_identity() {
        for a in [
            construct::sugihara(4),
            construct::oplus(2),
            construct::ap_family(2),
        ] {
            let cong = leibniz(&a, a.upset(a.e())).unwrap();
            assert!(cong.is_identity());
        }
    }

    #[test]
    fn leibniz_of_whole_carrier_is_total() {
        let a = construct::oplus(2);
        let cong = leibniz(&a, ElemSet::full(4)).unwrap();
        assert_eq!(cong.num_classes, 1);
    }

    #[test]
    fn leibniz_on_three_chain_stone_algebra() {
        // ⊥ < a < e with G = {a, e}: classes {⊥} and {a, e}.
        let a = construct::named_algebra("RS3").unwrap();
        let cong = leibniz(&a, ElemSet::from_elems([1, 2])).unwrap();
        assert_eq!(cong.class_of, vec![0, 1, 1]);
    }

    #[test]
    fn quotient_by_least_filter_is_the_algebra() {
        let a = construct::oplus(3);
        let (q, pi) = quotient(&a, a.upset(a.e())).unwrap();
        assert_eq!(q.size(), a.size());
        assert!(crate::iso::are_isomorphic(&q, &a));
        assert!(pi.is_surjective());
    }

    #[test]
    fn quotient_order_matches_residual_membership() {
        let a = construct::sugihara(5);
        for g in deductive_filters(&a) {
            let (q, pi) = quotient(&a, g).unwrap();
            for x in a.elements() {
                for y in a.elements() {
                    assert_eq!(
                        q.le(pi.map()[x], pi.map()[y]),
                        g.contains(a.resid(x, y))
                    );
                }
            }
        }
    }

    #[test]
    fn quotients_of_a3() {
        // [¬(f²)) = [0) is the whole carrier, so that quotient is trivial;
        // the quotient by [e) is A₃ itself.
        let a = construct::ap_family(3);
        let nf2 = a.neg_of(a.power(a.f().unwrap(), 2));
        assert_eq!(nf2, 0);
        let (q, _) = quotient(&a, filter_closure(&a, ElemSet::singleton(nf2))).unwrap();
        assert!(q.is_trivial());
        let (q, _) = quotient(&a, a.upset(a.e())).unwrap();
        assert!(crate::iso::are_isomorphic(&q, &a));
    }

    #[test]
    fn filter_congruence_correspondence_is_bijective() {
        // G ↦ ΩG with inverse θ ↦ {a : (a∧e, e) ∈ θ}, exhaustively.
        for a in [
            construct::sugihara(4),
            construct::oplus(2),
            construct::named_algebra("C4").unwrap(),
            construct::named_algebra("RS3").unwrap(),
        ] {
            for (g, cong) in congruence_lattice(&a) {
                let back = ElemSet::from_elems(
                    a.elements()
                        .filter(|&x| cong.related(a.meet(x, a.e()), a.e())),
                );
                assert_eq!(back, g);
            }
        }
    }

    #[test]
    fn depth_counts_edges() {
        assert_eq!(depth(&construct::sugihara(1)), 0);
        assert_eq!(depth(&construct::sugihara(3)), 1);
        assert_eq!(depth(&construct::sugihara(5)), 2);
    }
}
