//! Subalgebra generation, exhaustive homomorphism search, the chain
//! homomorphism characterization, HS enumeration up to isomorphism,
//! epicness decisions, and the constructive separating-pair procedures.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::classify;
use crate::construct::{otimes, ChainFamilySpec};
use crate::filter;
use crate::iso::{canonical_key, CanonKey};
use crate::set::ElemSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("source and target have different signatures")]
    SignatureMismatch,
    #[error("map does not preserve {op} at {at:?}")]
    NotAHomomorphism { op: &'static str, at: Vec<Elem> },
    #[error("map is not a function into the target carrier")]
    BadMap,
    #[error("the set {0:?} is not a subuniverse")]
    NotASubuniverse(Vec<Elem>),
    #[error("element {0} lies in the given subuniverse")]
    ElementInB(Elem),
    #[error("operation requires {0}")]
    WrongClass(&'static str),
    #[error("separating construction failed: {0}")]
    ConstructionFailed(String),
}

/// A total map between two algebras of the same signature, verified at
/// construction to preserve fusion, residual, meet, join, `e`, and the
/// involution when present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: FiniteAlgebra,
    target: FiniteAlgebra,
    map: Vec<Elem>,
}

impl Homomorphism {
    pub fn new(
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        map: Vec<Elem>,
    ) -> Result<Homomorphism, MorphismError> {
        if source.has_involution() != target.has_involution() {
            return Err(MorphismError::SignatureMismatch);
        }
        if map.len() != source.size() || map.iter().any(|&v| v >= target.size()) {
            return Err(MorphismError::BadMap);
        }
        if map[source.e()] != target.e() {
            return Err(MorphismError::NotAHomomorphism {
                op: "e",
                at: vec![source.e()],
            });
        }
        for x in source.elements() {
            for y in source.elements() {
                let checks: [(&'static str, Elem, Elem); 4] = [
                    ("fusion", map[source.fuse(x, y)], target.fuse(map[x], map[y])),
                    ("residual", map[source.resid(x, y)], target.resid(map[x], map[y])),
                    ("meet", map[source.meet(x, y)], target.meet(map[x], map[y])),
                    ("join", map[source.join(x, y)], target.join(map[x], map[y])),
                ];
                for (op, lhs, rhs) in checks {
                    if lhs != rhs {
                        return Err(MorphismError::NotAHomomorphism { op, at: vec![x, y] });
                    }
                }
            }
            if source.has_involution() && map[source.neg_of(x)] != target.neg_of(map[x]) {
                return Err(MorphismError::NotAHomomorphism {
                    op: "negation",
                    at: vec![x],
                });
            }
        }
        Ok(Homomorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(a: &FiniteAlgebra) -> Homomorphism {
        Homomorphism {
            source: a.clone(),
            target: a.clone(),
            map: a.elements().collect(),
        }
    }

    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteAlgebra {
        &self.target
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn agrees_on(&self, other: &Homomorphism, set: ElemSet) -> bool {
        set.iter().all(|x| self.map[x] == other.map[x])
    }
}

/// The least subuniverse containing `seed` (and always `e`), closed under
/// fusion, residual, meet, join, and the involution when present.
pub fn subuniverse_closure(a: &FiniteAlgebra, seed: ElemSet) -> ElemSet {
    let mut set = seed.insert(a.e());
    loop {
        let mut next = set;
        for x in set.iter() {
            if a.has_involution() {
                next = next.insert(a.neg_of(x));
            }
            for y in set.iter() {
                next = next
                    .insert(a.fuse(x, y))
                    .insert(a.resid(x, y))
                    .insert(a.meet(x, y))
                    .insert(a.join(x, y));
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

pub fn is_subuniverse(a: &FiniteAlgebra, set: ElemSet) -> bool {
    if !set.contains(a.e()) {
        return false;
    }
    for x in set.iter() {
        if a.has_involution() && !set.contains(a.neg_of(x)) {
            return false;
        }
        for y in set.iter() {
            let closed = set.contains(a.fuse(x, y))
                && set.contains(a.resid(x, y))
                && set.contains(a.meet(x, y))
                && set.contains(a.join(x, y));
            if !closed {
                return false;
            }
        }
    }
    true
}

/// The subalgebra on a subuniverse, with the inclusion embedding.
/// Elements are re-indexed in ascending order of their ambient index.
pub fn subalgebra_on(
    a: &FiniteAlgebra,
    set: ElemSet,
) -> Result<(FiniteAlgebra, Homomorphism), MorphismError> {
    if !is_subuniverse(a, set) {
        return Err(MorphismError::NotASubuniverse(set.to_vec()));
    }
    let elems = set.to_vec();
    let pos = |x: Elem| elems.iter().position(|&v| v == x).unwrap();
    let m = elems.len();
    let le = (0..m)
        .map(|i| (0..m).map(|j| a.le(elems[i], elems[j])).collect())
        .collect();
    let fusion = (0..m)
        .map(|i| (0..m).map(|j| pos(a.fuse(elems[i], elems[j]))).collect())
        .collect();
    let neg = a
        .involution()
        .map(|neg| (0..m).map(|i| pos(neg[elems[i]])).collect());
    let sub = FiniteAlgebra::from_parts(None, le, fusion, pos(a.e()), neg)
        .expect("subuniverses restrict to valid algebras");
    let embedding = Homomorphism::new(sub.clone(), a.clone(), elems)
        .expect("inclusion of a subuniverse is a homomorphism");
    Ok((sub, embedding))
}

/// The subalgebra generated by a set of elements, with its embedding.
pub fn subalgebra_generated(
    a: &FiniteAlgebra,
    gens: ElemSet,
) -> (FiniteAlgebra, Homomorphism) {
    subalgebra_on(a, subuniverse_closure(a, gens)).expect("closures are subuniverses")
}

/// All subuniverses, sorted by size then mask.
pub fn subuniverses(a: &FiniteAlgebra) -> Vec<ElemSet> {
    let n = a.size();
    assert!(n <= 20, "subuniverse enumeration is for desk-scale algebras");
    let mut out: Vec<ElemSet> = (0..(1u32 << n))
        .map(ElemSet)
        .filter(|&s| s.contains(a.e()) && is_subuniverse(a, s))
        .collect();
    out.sort_by_key(|s| (s.len(), s.0));
    out
}

/// Every homomorphism from `a` to `b`, duplicate-free, sorted by map.
///
/// The search factors each candidate through its kernel: kernels are the
/// congruences of deductive filters of `a`, so we enumerate filters, form
/// the quotient, and then enumerate embeddings of the quotient into `b` in
/// lexicographic image order.
pub fn all_homomorphisms(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Homomorphism> {
    assert_eq!(
        a.has_involution(),
        b.has_involution(),
        "homomorphism search requires a common signature"
    );
    let mut out = Vec::new();
    for g in filter::deductive_filters(a) {
        let (q, pi) = filter::quotient(a, g).expect("filters quotient cleanly");
        if q.size() > b.size() {
            continue;
        }
        for emb in embeddings(&q, b) {
            let map: Vec<Elem> = pi.map().iter().map(|&c| emb[c]).collect();
            let hom = Homomorphism::new(a.clone(), b.clone(), map)
                .expect("kernel-embedding composites are homomorphisms");
            out.push(hom);
        }
    }
    out.sort_by(|g, h| g.map().cmp(h.map()));
    out
}

/// All embeddings of `q` into `b`, as image arrays in lexicographic order.
fn embeddings(q: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; q.size()];
    let mut used = vec![false; b.size()];
    embed_from(q, b, 0, &mut map, &mut used, &mut out);
    out
}

fn embed_from(
    q: &FiniteAlgebra,
    b: &FiniteAlgebra,
    x: usize,
    map: &mut Vec<Elem>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<Elem>>,
) {
    if x == q.size() {
        out.push(map.clone());
        return;
    }
    'cand: for y in b.elements() {
        if used[y] || ((x == q.e()) != (y == b.e())) {
            continue;
        }
        for z in 0..x {
            // Injective lattice maps preserve and reflect the order.
            if q.le(x, z) != b.le(y, map[z]) || q.le(z, x) != b.le(map[z], y) {
                continue 'cand;
            }
        }
        map[x] = y;
        used[y] = true;
        if embed_partial_ok(q, b, map, x) {
            embed_from(q, b, x + 1, map, used, out);
        }
        map[x] = usize::MAX;
        used[y] = false;
    }
}

fn embed_partial_ok(q: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Elem], x: usize) -> bool {
    for i in 0..=x {
        for j in 0..=x {
            let fz = q.fuse(i, j);
            if map[fz] != usize::MAX && b.fuse(map[i], map[j]) != map[fz] {
                return false;
            }
            let rz = q.resid(i, j);
            if map[rz] != usize::MAX && b.resid(map[i], map[j]) != map[rz] {
                return false;
            }
            let mz = q.meet(i, j);
            if map[mz] != usize::MAX && b.meet(map[i], map[j]) != map[mz] {
                return false;
            }
            let jz = q.join(i, j);
            if map[jz] != usize::MAX && b.join(map[i], map[j]) != map[jz] {
                return false;
            }
        }
        if q.has_involution() {
            let nz = q.neg_of(i);
            if map[nz] != usize::MAX && b.neg_of(map[i]) != map[nz] {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Chain homomorphism characterization
// ---------------------------------------------------------------------------

/// The four conditions characterizing homomorphisms between totally ordered
/// idempotent residuated lattices, evaluated on an arbitrary map:
///
/// 1. `I = h⁻¹[{e}]` is an interval containing `e`, closed under `*`;
/// 2. `h` order-embeds `I_* = {a ∉ I : a* ∈ I}` into the block of `e` in
///    the target, avoiding `e`;
/// 3. `h` order-embeds the double-star elements outside `I` into the
///    target's double-star elements, avoiding `e` and preserving `*`;
/// 4. for each double-star element `s ∉ I`, `h` order-embeds the block of
///    `s` into the block of `h(s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainHomReport {
    pub conditions: [bool; 4],
    pub satisfies: bool,
}

pub fn chain_hom_conditions(
    map: &[Elem],
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
) -> Result<ChainHomReport, MorphismError> {
    for alg in [a, b] {
        if alg.has_involution() || !alg.is_totally_ordered() || !alg.is_idempotent() {
            return Err(MorphismError::WrongClass(
                "totally ordered idempotent residuated lattices without involution",
            ));
        }
    }
    assert_eq!(map.len(), a.size());
    assert!(map.iter().all(|&v| v < b.size()));

    let i_set = ElemSet::from_elems(a.elements().filter(|&x| map[x] == b.e()));
    let interval = is_chain_interval(a, i_set);
    let c1 = interval
        && i_set.contains(a.e())
        && i_set.iter().all(|x| i_set.contains(a.star(x)));

    let i_star = ElemSet::from_elems(
        a.elements()
            .filter(|&x| !i_set.contains(x) && i_set.contains(a.star(x))),
    );
    let c2 = order_embedding(a, b, map, i_star)
        && i_star
            .iter()
            .all(|x| map[x] != b.e() && b.double_star(map[x]) == b.e());

    let dstars = ElemSet::from_elems(
        a.elements()
            .filter(|&x| a.double_star(x) == x && !i_set.contains(x)),
    );
    let c3 = order_embedding(a, b, map, dstars)
        && dstars.iter().all(|x| {
            map[x] != b.e()
                && b.double_star(map[x]) == map[x]
                && map[a.star(x)] == b.star(map[x])
        });

    let mut c4 = true;
    for s in dstars.iter() {
        let block = ElemSet::from_elems(a.elements().filter(|&x| a.double_star(x) == s));
        c4 &= order_embedding(a, b, map, block)
            && block.iter().all(|x| b.double_star(map[x]) == map[s]);
    }

    let conditions = [c1, c2, c3, c4];
    Ok(ChainHomReport {
        satisfies: conditions.iter().all(|&c| c),
        conditions,
    })
}

fn is_chain_interval(a: &FiniteAlgebra, set: ElemSet) -> bool {
    set.iter().all(|x| {
        set.iter().all(|y| {
            a.elements()
                .filter(|&z| a.le(x, z) && a.le(z, y))
                .all(|z| set.contains(z))
        })
    })
}

fn order_embedding(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Elem], set: ElemSet) -> bool {
    set.iter().all(|x| {
        set.iter()
            .all(|y| a.le(x, y) == b.le(map[x], map[y]))
    })
}

// ---------------------------------------------------------------------------
// HS enumeration and epicness
// ---------------------------------------------------------------------------

/// Homomorphic images of subalgebras of the generators, deduplicated up to
/// isomorphism and sorted canonically.  For a finite generator list this
/// covers every subdirectly irreducible member of the generated variety.
pub fn hs_up_to_iso(gens: &[FiniteAlgebra]) -> Vec<FiniteAlgebra> {
    assert!(!gens.is_empty(), "variety generators must be nonempty");
    assert!(
        gens.iter()
            .all(|g| g.has_involution() == gens[0].has_involution()),
        "variety generators must share one signature"
    );
    let mut seen: Vec<(CanonKey, FiniteAlgebra)> = Vec::new();
    for gen in gens {
        for set in subuniverses(gen) {
            let (sub, _) = subalgebra_on(gen, set).expect("enumerated subuniverses restrict");
            for g in filter::deductive_filters(&sub) {
                let (q, _) = filter::quotient(&sub, g).expect("filters quotient cleanly");
                let key = canonical_key(&q);
                if !seen.iter().any(|(k, _)| *k == key) {
                    seen.push((key, q));
                }
            }
        }
    }
    let mut out: Vec<FiniteAlgebra> = seen.into_iter().map(|(_, a)| a).collect();
    out.sort_by_key(|a| (a.size(), canonical_key(a)));
    out
}

/// The subdirectly irreducible members of [`hs_up_to_iso`].
pub fn si_members(gens: &[FiniteAlgebra]) -> Vec<FiniteAlgebra> {
    hs_up_to_iso(gens)
        .into_iter()
        .filter(|a| classify::classify(a).si.holds)
        .collect()
}

/// A witness that a subuniverse fails to be epic: two homomorphisms into an
/// SI member of the variety agreeing on the subuniverse but not globally.
#[derive(Debug, Clone)]
pub struct EpicWitness {
    pub g: Homomorphism,
    pub h: Homomorphism,
    pub disagrees_at: Elem,
}

#[derive(Debug, Clone)]
pub struct EpicVerdict {
    pub epic: bool,
    pub witness: Option<EpicWitness>,
}

/// Decides whether the subuniverse `b_set` is epic in `a` relative to the
/// variety generated by `gens`: every pair of homomorphisms from `a` into
/// an SI member of the variety that agree on `b_set` must be equal.
///
/// Sound relative to the generated variety; that `a` itself belongs to it
/// is the caller's responsibility.
pub fn is_epic(
    a: &FiniteAlgebra,
    b_set: ElemSet,
    gens: &[FiniteAlgebra],
) -> Result<EpicVerdict, MorphismError> {
    if !is_subuniverse(a, b_set) {
        return Err(MorphismError::NotASubuniverse(b_set.to_vec()));
    }
    for c in si_members(gens) {
        let homs = all_homomorphisms(a, &c);
        for (i, g) in homs.iter().enumerate() {
            for h in &homs[i + 1..] {
                if g.agrees_on(h, b_set) {
                    if let Some(x) = a.elements().find(|&x| g.apply(x) != h.apply(x)) {
                        return Ok(EpicVerdict {
                            epic: false,
                            witness: Some(EpicWitness {
                                g: g.clone(),
                                h: h.clone(),
                                disagrees_at: x,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(EpicVerdict {
        epic: true,
        witness: None,
    })
}

// ---------------------------------------------------------------------------
// Separating pairs
// ---------------------------------------------------------------------------

/// A verified pair of homomorphisms agreeing on a subuniverse and differing
/// at a designated element.
#[derive(Debug, Clone)]
pub struct SeparatingPair {
    pub target: FiniteAlgebra,
    pub g: Homomorphism,
    pub h: Homomorphism,
    pub separated_at: Elem,
    /// When the designated element sat above `e`, the construction ran on
    /// its star instead; this records that replacement.
    pub replaced_by: Option<Elem>,
    pub case: SeparatingCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeparatingCase {
    /// Quotient by the filter above the element, collapsing a star-closed
    /// interval to `e`.
    QuotientCollapse,
    /// A fresh immediate predecessor inside the element's block.
    FreshPredecessor,
    /// The single-element collapse available when the element lies
    /// strictly below its double star.
    SingleCollapse,
}

fn check_separating_inputs(
    a: &FiniteAlgebra,
    b_set: ElemSet,
    elem: Elem,
) -> Result<(), MorphismError> {
    if a.has_involution() || !a.is_totally_ordered() || !a.is_idempotent() {
        return Err(MorphismError::WrongClass(
            "totally ordered idempotent residuated lattices without involution",
        ));
    }
    if !is_subuniverse(a, b_set) {
        return Err(MorphismError::NotASubuniverse(b_set.to_vec()));
    }
    if b_set.contains(elem) {
        return Err(MorphismError::ElementInB(elem));
    }
    Ok(())
}

/// Separating pair for a totally ordered idempotent RL: the two-case
/// construction used to show that epimorphisms are surjective in the
/// variety of all idempotent semilinear RLs.
pub fn separating_pair_idem(
    a: &FiniteAlgebra,
    b_set: ElemSet,
    elem: Elem,
) -> Result<SeparatingPair, MorphismError> {
    check_separating_inputs(a, b_set, elem)?;
    if a.double_star(elem) == elem {
        quotient_collapse_pair(a, b_set, elem)
    } else {
        fresh_predecessor_pair(a, b_set, elem)
    }
}

/// Separating pair for a totally ordered generalized Sugihara monoid; when
/// the element lies strictly below its double star a single-element
/// collapse suffices, otherwise the quotient-collapse case applies.
pub fn separating_pair_gsm(
    a: &FiniteAlgebra,
    b_set: ElemSet,
    elem: Elem,
) -> Result<SeparatingPair, MorphismError> {
    check_separating_inputs(a, b_set, elem)?;
    if !classify::classify(a).gsm.holds {
        return Err(MorphismError::WrongClass(
            "totally ordered generalized Sugihara monoids",
        ));
    }
    if a.double_star(elem) == elem {
        return quotient_collapse_pair(a, b_set, elem);
    }
    // elem < elem**, which in a generalized Sugihara monoid forces elem < e.
    debug_assert!(a.lt(elem, a.e()));
    let above = ElemSet::from_elems(a.elements().filter(|&x| a.lt(elem, x)));
    let (c, q) = filter::quotient(a, above)
        .expect("the strict upset of a negative element is a deductive filter");
    let h_map: Vec<Elem> = a
        .elements()
        .map(|x| if x == elem { c.e() } else { q.apply(x) })
        .collect();
    let h = Homomorphism::new(a.clone(), c.clone(), h_map)
        .map_err(|e| MorphismError::ConstructionFailed(e.to_string()))?;
    finish_pair(b_set, elem, c, q, h, None, SeparatingCase::SingleCollapse)
}

/// Applies the generalized-Sugihara variant when `a` is a generalized
/// Sugihara monoid and the idempotent-RL construction otherwise.
pub fn separating_pair(
    a: &FiniteAlgebra,
    b_set: ElemSet,
    elem: Elem,
) -> Result<SeparatingPair, MorphismError> {
    if classify::classify(a).gsm.holds && !a.has_involution() {
        separating_pair_gsm(a, b_set, elem)
    } else {
        separating_pair_idem(a, b_set, elem)
    }
}

fn quotient_collapse_pair(
    a: &FiniteAlgebra,
    b_set: ElemSet,
    elem: Elem,
) -> Result<SeparatingPair, MorphismError> {
    // Work below e: if e ≤ elem, pass to its star, which again avoids the
    // subuniverse and is a double-star element.
    let (w, replaced_by) = if a.le(a.e(), elem) {
        (a.star(elem), Some(a.star(elem)))
    } else {
        (elem, None)
    };
    debug_assert!(a.lt(w, a.e()));
    debug_assert!(!b_set.contains(w));
    let above = ElemSet::from_elems(a.elements().filter(|&x| a.lt(w, x)));
    let (c, q) = filter::quotient(a, above)
        .expect("the strict upset of a negative element is a deductive filter");
    let w_star = a.star(w);
    let core = a.interval(w, w_star);
    let collapse = core.union(ElemSet::from_elems(a.elements().filter(|&x| {
        !core.contains(x) && core.contains(a.star(x))
    })));
    let h_map: Vec<Elem> = a
        .elements()
        .map(|x| if collapse.contains(x) { c.e() } else { q.apply(x) })
        .collect();
    let h = Homomorphism::new(a.clone(), c.clone(), h_map)
        .map_err(|e| MorphismError::ConstructionFailed(e.to_string()))?;
    finish_pair(b_set, elem, c, q, h, replaced_by, SeparatingCase::QuotientCollapse)
}

fn fresh_predecessor_pair(
    a: &FiniteAlgebra,
    b_set: ElemSet,
    elem: Elem,
) -> Result<SeparatingPair, MorphismError> {
    let s = a.double_star(elem);
    let dstars = ElemSet::from_elems(a.elements().filter(|&x| a.double_star(x) == x));
    let (base, base_embedding) =
        subalgebra_on(a, dstars).expect("the double-star image is a subuniverse");
    let ambient_block = |c: Elem| -> Vec<Elem> {
        // ascending chain order within the block of c
        let mut block: Vec<Elem> = a.elements().filter(|&x| a.double_star(x) == c).collect();
        block.sort_by_key(|&x| a.downset(x).len());
        block
    };
    let sizes: Vec<usize> = (0..base.size())
        .map(|k| {
            let c = base_embedding.apply(k);
            ambient_block(c).len() + usize::from(c == s)
        })
        .collect();
    let product = otimes(&ChainFamilySpec {
        base: base.clone(),
        sizes,
    })
    .expect("block extension yields a valid spec");
    let c = product.algebra;

    // Identify each original element with its slot in the rebuilt chain; in
    // the extended block, everything strictly below `elem` shifts down one
    // to make room for the fresh immediate predecessor.
    let mut g_map = vec![usize::MAX; a.size()];
    for k in 0..base.size() {
        let bc = base_embedding.apply(k);
        let block = ambient_block(bc);
        for (pos, &x) in block.iter().enumerate() {
            let pos_from_top = block.len() - 1 - pos;
            let shift = usize::from(bc == s && a.lt(x, elem));
            g_map[x] = product.top_of[k] - pos_from_top - shift;
        }
    }
    let fresh = g_map[elem] - 1;
    let g = Homomorphism::new(a.clone(), c.clone(), g_map.clone())
        .map_err(|e| MorphismError::ConstructionFailed(e.to_string()))?;
    let mut h_map = g_map;
    h_map[elem] = fresh;
    let h = Homomorphism::new(a.clone(), c.clone(), h_map)
        .map_err(|e| MorphismError::ConstructionFailed(e.to_string()))?;
    finish_pair(b_set, elem, c, g, h, None, SeparatingCase::FreshPredecessor)
}

fn finish_pair(
    b_set: ElemSet,
    elem: Elem,
    target: FiniteAlgebra,
    g: Homomorphism,
    h: Homomorphism,
    replaced_by: Option<Elem>,
    case: SeparatingCase,
) -> Result<SeparatingPair, MorphismError> {
    if !g.agrees_on(&h, b_set) {
        return Err(MorphismError::ConstructionFailed(
            "maps disagree on the subuniverse".into(),
        ));
    }
    if g.apply(elem) == h.apply(elem) {
        return Err(MorphismError::ConstructionFailed(
            "maps coincide at the designated element".into(),
        ));
    }
    Ok(SeparatingPair {
        target,
        g,
        h,
        separated_at: elem,
        replaced_by,
        case,
    })
}

// ---------------------------------------------------------------------------
// Weak-ES witnesses from a single equation
// ---------------------------------------------------------------------------

/// Report for the one-generator epic-subalgebra test: `a` generated by
/// `gen` with `gen = genⁿ → genⁿ⁺¹`, whose power `genⁿ⁺¹` generates a
/// proper — and then epic — subalgebra.
#[derive(Debug, Clone)]
pub struct ApsReport {
    pub generates: bool,
    pub hypothesis_holds: bool,
    pub subalgebra: Vec<Elem>,
    pub proper: bool,
    pub epic: bool,
}

impl ApsReport {
    pub fn passes(&self) -> bool {
        self.generates && self.hypothesis_holds && self.proper && self.epic
    }
}

pub fn aps_check(a: &FiniteAlgebra, gen: Elem, n: usize) -> Result<ApsReport, MorphismError> {
    assert!(n >= 1, "the power test needs a positive exponent");
    let generates = subuniverse_closure(a, ElemSet::singleton(gen)) == ElemSet::full(a.size());
    let pow_n = a.power(gen, n);
    let pow_n1 = a.power(gen, n + 1);
    let hypothesis_holds = a.resid(pow_n, pow_n1) == gen;
    let sub = subuniverse_closure(a, ElemSet::singleton(pow_n1));
    let proper = sub != ElemSet::full(a.size());
    let epic = proper && is_epic(a, sub, std::slice::from_ref(a))?.epic;
    Ok(ApsReport {
        generates,
        hypothesis_holds,
        subalgebra: sub.to_vec(),
        proper,
        epic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;
    use crate::iso::are_isomorphic;

    #[test]
    fn subalgebra_generated_examples() {
        // In A₃ both the empty set and {f} generate {0, 1, 2^p, 2^(p+1)}.
        let a3 = construct::ap_family(3);
        let (sub, emb) = subalgebra_generated(&a3, ElemSet::EMPTY);
        assert_eq!(emb.map(), &[0, 1, 4, 5]);
        assert!(are_isomorphic(&sub, &construct::named_algebra("C4").unwrap()));
        let (_, emb) = subalgebra_generated(&a3, ElemSet::singleton(4));
        assert_eq!(emb.map(), &[0, 1, 4, 5]);

        // c generates the whole of S₃⊕2: 4 elements from 1 generator.
        let a = construct::oplus(2);
        let (sub, _) = subalgebra_generated(&a, ElemSet::singleton(2));
        assert_eq!(sub.size(), 4);

        // In S₅, the element 2 generates {−2, 0, 2} ≅ S₃.
        let s5 = construct::sugihara(5);
        let (sub, emb) = subalgebra_generated(&s5, ElemSet::singleton(4));
        assert_eq!(emb.map(), &[0, 2, 4]);
        assert!(are_isomorphic(&sub, &construct::sugihara(3)));
    }

    #[test]
    fn homs_from_s3_oplus_2_to_s3() {
        // The source is simple and cannot embed, so only the collapse to e.
        let a = construct::oplus(2);
        let s3 = construct::sugihara(3).reduct();
        let homs = all_homomorphisms(&a, &s3);
        assert_eq!(homs.len(), 1);
        assert_eq!(homs[0].map(), &[1, 1, 1, 1]);
    }

    #[test]
    fn homs_contain_identity() {
        for a in [construct::oplus(2), construct::sugihara(4)] {
            let homs = all_homomorphisms(&a, &a);
            assert!(homs.iter().any(|h| h.map() == Homomorphism::identity(&a).map()));
        }
    }

    #[test]
    fn no_homs_from_a3_to_c4() {
        // A₃ is simple and too big to embed, and C₄ has no trivial
        // subalgebra, so the search comes back empty.
        let a3 = construct::ap_family(3);
        let c4 = construct::named_algebra("C4").unwrap();
        assert!(all_homomorphisms(&a3, &c4).is_empty());
    }

    #[test]
    fn chain_hom_conditions_examples() {
        let a = construct::oplus(2);
        let s3 = construct::sugihara(3).reduct();
        // Identity satisfies the conditions.
        let id: Vec<Elem> = a.elements().collect();
        assert!(chain_hom_conditions(&id, &a, &a).unwrap().satisfies);
        // The collapse to e satisfies them; I is the whole carrier.
        assert!(chain_hom_conditions(&[1, 1, 1, 1], &a, &s3).unwrap().satisfies);
        // Sending c ↦ 1 while fixing S₃ breaks the block condition (4).
        let report = chain_hom_conditions(&[0, 1, 2, 2], &a, &s3).unwrap();
        assert!(!report.satisfies);
        assert!(!report.conditions[3]);
        // And indeed it is not a homomorphism.
        assert!(Homomorphism::new(a.clone(), s3.clone(), vec![0, 1, 2, 2]).is_err());
    }

    #[test]
    fn hs_of_s3_oplus_2() {
        let gens = [construct::oplus(2)];
        let algebras = hs_up_to_iso(&gens);
        let sizes: Vec<usize> = algebras.iter().map(|a| a.size()).collect();
        assert_eq!(sizes, vec![1, 3, 4]);
        let si = si_members(&gens);
        let sizes: Vec<usize> = si.iter().map(|a| a.size()).collect();
        assert_eq!(sizes, vec![3, 4]);
    }

    #[test]
    fn hs_of_a3() {
        let gens = [construct::ap_family(3)];
        let algebras = hs_up_to_iso(&gens);
        let sizes: Vec<usize> = algebras.iter().map(|a| a.size()).collect();
        assert_eq!(sizes, vec![1, 4, 6]);
        assert!(are_isomorphic(&algebras[1], &construct::named_algebra("C4").unwrap()));
        let si = si_members(&gens);
        assert_eq!(si.len(), 2);
    }

    #[test]
    fn hs_of_two() {
        let gens = [construct::named_algebra("2").unwrap()];
        let sizes: Vec<usize> = hs_up_to_iso(&gens).iter().map(|a| a.size()).collect();
        assert_eq!(sizes, vec![1, 2]);
    }

    #[test]
    fn epic_example_single_generator() {
        // S₃ is epic in S₃⊕2 relative to the variety of S₃⊕2 alone…
        let a = construct::oplus(2);
        let b = ElemSet::from_elems([0, 1, 3]);
        assert!(is_epic(&a, b, &[a.clone()]).unwrap().epic);
        // …but not relative to the variety that also sees S₃⊕3.
        let verdict = is_epic(&a, b, &[a.clone(), construct::oplus(3)]).unwrap();
        assert!(!verdict.epic);
        let w = verdict.witness.unwrap();
        assert_eq!(w.disagrees_at, 2);
        assert_eq!(w.g.target().size(), 5);
    }

    #[test]
    fn epic_weak_es_failure_on_a3() {
        let a3 = construct::ap_family(3);
        let sub = subuniverse_closure(&a3, ElemSet::singleton(a3.f().unwrap()));
        assert!(is_epic(&a3, sub, &[a3.clone()]).unwrap().epic);
    }

    #[test]
    fn epic_rejects_non_subuniverse() {
        let a = construct::oplus(2);
        assert!(matches!(
            is_epic(&a, ElemSet::from_elems([0, 2]), &[a.clone()]),
            Err(MorphismError::NotASubuniverse(_))
        ));
    }

    #[test]
    fn separating_pair_on_relative_stone_chain() {
        // ⊥ < a < e with the subalgebra {e}: collapsing a to e against the
        // canonical quotient (which is the identity here).
        let rs3 = construct::named_algebra("RS3").unwrap();
        let pair = separating_pair_gsm(&rs3, ElemSet::singleton(2), 1).unwrap();
        assert_eq!(pair.case, SeparatingCase::SingleCollapse);
        assert_eq!(pair.target.size(), 3);
        assert_eq!(pair.g.map(), &[0, 1, 2]);
        assert_eq!(pair.h.map(), &[0, 2, 2]);
    }

    #[test]
    fn separating_pair_fresh_predecessor() {
        // S₃⊕2 over S₃ at c: a fresh predecessor inside the top block.
        let a = construct::oplus(2);
        let pair = separating_pair_idem(&a, ElemSet::from_elems([0, 1, 3]), 2).unwrap();
        assert_eq!(pair.case, SeparatingCase::FreshPredecessor);
        assert_eq!(pair.target.size(), 5);
        assert_eq!(pair.g.map(), &[0, 1, 3, 4]);
        assert_eq!(pair.h.map(), &[0, 1, 2, 4]);
    }

    #[test]
    fn separating_pair_rejects_element_in_b() {
        let a = construct::oplus(2);
        assert!(matches!(
            separating_pair_idem(&a, ElemSet::from_elems([0, 1, 3]), 3),
            Err(MorphismError::ElementInB(3))
        ));
    }

    #[test]
    fn aps_check_on_a3() {
        let a3 = construct::ap_family(3);
        let report = aps_check(&a3, 2, 2).unwrap();
        assert!(report.passes());
        assert_eq!(report.subalgebra, vec![0, 1, 4, 5]);
    }
}
