//! Isomorphism testing and canonical forms for up-to-isomorphism work.
//!
//! Deduplication uses a canonical key: the lexicographically minimal
//! `(le, fusion, e, neg)` tuple over all carrier permutations.  A full
//! factorial search is pruned by first refining an isomorphism-invariant
//! colouring of the elements; permutations are only enumerated within
//! colour classes, which at desk scale leaves almost nothing to permute.

use crate::algebra::{Elem, FiniteAlgebra};

/// Canonical encoding of an algebra up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonKey(Vec<u8>);

/// Isomorphism-invariant colours, refined to a fixpoint.
fn colour_classes(a: &FiniteAlgebra) -> Vec<usize> {
    let n = a.size();
    // Initial colour: order profile plus distinguished constants.
    let mut sig: Vec<Vec<u64>> = (0..n)
        .map(|x| {
            vec![
                a.downset(x).len() as u64,
                a.upset(x).len() as u64,
                u64::from(x == a.e()),
                u64::from(a.fuse(x, x) == x),
                a.involution().map_or(2, |neg| u64::from(neg[x] == x)),
            ]
        })
        .collect();
    let mut colours = rank(&sig);
    loop {
        sig = (0..n)
            .map(|x| {
                let mut s: Vec<u64> = vec![colours[x] as u64];
                let mut rows: Vec<[u64; 6]> = (0..n)
                    .map(|y| {
                        [
                            colours[y] as u64,
                            u64::from(a.le(x, y)),
                            u64::from(a.le(y, x)),
                            colours[a.fuse(x, y)] as u64,
                            colours[a.resid(x, y)] as u64,
                            colours[a.resid(y, x)] as u64,
                        ]
                    })
                    .collect();
                rows.sort_unstable();
                for row in rows {
                    s.extend_from_slice(&row);
                }
                if let Some(neg) = a.involution() {
                    s.push(colours[neg[x]] as u64);
                }
                s
            })
            .collect();
        let refined = rank(&sig);
        if refined == colours {
            return colours;
        }
        colours = refined;
    }
}

/// Replaces signature vectors by their rank in sorted order.
fn rank(sig: &[Vec<u64>]) -> Vec<usize> {
    let mut sorted: Vec<&Vec<u64>> = sig.iter().collect();
    sorted.sort();
    sorted.dedup();
    sig.iter()
        .map(|s| sorted.binary_search(&s).expect("signature present"))
        .collect()
}

fn encode(a: &FiniteAlgebra, perm: &[Elem]) -> Vec<u8> {
    // perm[new] = old element occupying the new position
    let n = a.size();
    let mut pos = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        pos[old] = new;
    }
    let mut out = Vec::with_capacity(2 * n * n + n + 2);
    for i in 0..n {
        for j in 0..n {
            out.push(u8::from(a.le(perm[i], perm[j])));
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.push(pos[a.fuse(perm[i], perm[j])] as u8);
        }
    }
    out.push(pos[a.e()] as u8);
    match a.involution() {
        Some(neg) => {
            out.push(1);
            out.extend((0..n).map(|i| pos[neg[perm[i]]] as u8));
        }
        None => out.push(0),
    }
    out
}

/// The minimal `(le, fusion, e, neg)` encoding over all relabelings.
pub fn canonical_key(a: &FiniteAlgebra) -> CanonKey {
    let n = a.size();
    let colours = colour_classes(a);
    let mut perm: Vec<Elem> = (0..n).collect();
    perm.sort_by_key(|&x| (colours[x], x));
    let mut best = encode(a, &perm);
    // Permute within colour classes only; colours are isomorphism-invariant,
    // so every automorphic relabeling respects them.
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || colours[perm[i]] != colours[perm[start]] {
            if i - start > 1 {
                blocks.push((start, i));
            }
            start = i;
        }
    }
    permute_blocks(a, &mut perm, &blocks, 0, &mut best);
    CanonKey(best)
}

fn permute_blocks(
    a: &FiniteAlgebra,
    perm: &mut Vec<Elem>,
    blocks: &[(usize, usize)],
    depth: usize,
    best: &mut Vec<u8>,
) {
    if depth == blocks.len() {
        let key = encode(a, perm);
        if key < *best {
            *best = key;
        }
        return;
    }
    let (lo, hi) = blocks[depth];
    permutations(perm, lo, hi, &mut |p| permute_blocks(a, p, blocks, depth + 1, best));
}

fn permutations(perm: &mut Vec<Elem>, lo: usize, hi: usize, visit: &mut impl FnMut(&mut Vec<Elem>)) {
    if lo + 1 >= hi {
        visit(perm);
        return;
    }
    for i in lo..hi {
        perm.swap(lo, i);
        permutations(perm, lo + 1, hi, visit);
        perm.swap(lo, i);
    }
}

/// Finds an isomorphism from `a` to `b`, as the image array of a bijection
/// preserving order, fusion, `e` and the involution.  Deterministic: the
/// first map in lexicographic backtracking order is returned.
pub fn isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<Elem>> {
    if a.size() != b.size() || a.has_involution() != b.has_involution() {
        return None;
    }
    let n = a.size();
    let ca = colour_profile(a);
    let cb = colour_profile(b);
    {
        let mut pa = ca.clone();
        let mut pb = cb.clone();
        pa.sort();
        pb.sort();
        if pa != pb {
            return None;
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        a: &FiniteAlgebra,
        b: &FiniteAlgebra,
        ca: &[Vec<u64>],
        cb: &[Vec<u64>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        x: usize,
    ) -> bool {
        let n = a.size();
        if x == n {
            return true;
        }
        'cand: for y in 0..n {
            if used[y] || ca[x] != cb[y] {
                continue;
            }
            if (x == a.e()) != (y == b.e()) {
                continue;
            }
            for z in 0..x {
                let w = map[z];
                if a.le(x, z) != b.le(y, w) || a.le(z, x) != b.le(w, y) {
                    continue 'cand;
                }
            }
            map[x] = y;
            used[y] = true;
            if check_partial(a, b, map, x) && extend(a, b, ca, cb, map, used, x + 1) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
    /// Checks every constraint among the first `x+1` assigned elements whose
    /// operation results are also assigned.
    fn check_partial(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize], x: usize) -> bool {
        for i in 0..=x {
            for j in 0..=x {
                let fz = a.fuse(i, j);
                if map[fz] != usize::MAX && b.fuse(map[i], map[j]) != map[fz] {
                    return false;
                }
                let rz = a.resid(i, j);
                if map[rz] != usize::MAX && b.resid(map[i], map[j]) != map[rz] {
                    return false;
                }
            }
            if let (Some(na), Some(nb)) = (a.involution(), b.involution()) {
                if map[na[i]] != usize::MAX && nb[map[i]] != map[na[i]] {
                    return false;
                }
            }
        }
        true
    }
    if extend(a, b, &ca, &cb, &mut map, &mut used, 0) {
        Some(map)
    } else {
        None
    }
}

fn colour_profile(a: &FiniteAlgebra) -> Vec<Vec<u64>> {
    let colours = colour_classes(a);
    // Re-express each colour as its full signature so profiles compare across
    // algebras (ranks alone are only meaningful within one algebra).
    let n = a.size();
    (0..n)
        .map(|x| {
            let mut s: Vec<u64> = vec![
                a.downset(x).len() as u64,
                a.upset(x).len() as u64,
                u64::from(x == a.e()),
                u64::from(a.fuse(x, x) == x),
            ];
            let mut rows: Vec<[u64; 4]> = (0..n)
                .map(|y| {
                    [
                        u64::from(a.le(x, y)),
                        u64::from(a.le(y, x)),
                        colours[a.fuse(x, y)] as u64,
                        colours[a.resid(x, y)] as u64,
                    ]
                })
                .collect();
            rows.sort_unstable();
            for r in rows {
                s.extend_from_slice(&r);
            }
            s
        })
        .collect()
}

pub fn are_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RawAlgebra;

    fn s3() -> FiniteAlgebra {
        crate::construct::sugihara(3)
    }

    #[test]
    fn identity_on_itself() {
        let a = s3();
        let map = isomorphism(&a, &a).unwrap();
        assert_eq!(map, vec![0, 1, 2]);
    }

    #[test]
    fn chain_vs_diamond_not_isomorphic() {
        let c4 = crate::construct::named_algebra("C4").unwrap();
        let d4 = crate::construct::named_algebra("D4").unwrap();
        assert!(isomorphism(&c4, &d4).is_none());
        assert_ne!(canonical_key(&c4), canonical_key(&d4));
    }

    #[test]
    fn canonical_key_is_permutation_invariant() {
        let a = FiniteAlgebra::validate(RawAlgebra {
            name: None,
            size: 3,
            le: vec![vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]],
            fusion: vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]],
            e: 1,
            neg: Some(vec![2, 1, 0]),
        })
        .unwrap();
        // Same algebra with the carrier listed as 1 < 2 < 0.
        let b = FiniteAlgebra::validate(RawAlgebra {
            name: None,
            size: 3,
            le: vec![vec![1, 0, 0], vec![1, 1, 1], vec![1, 0, 1]],
            fusion: vec![vec![0, 1, 0], vec![1, 1, 1], vec![0, 1, 2]],
            e: 2,
            neg: Some(vec![1, 0, 2]),
        })
        .unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert!(are_isomorphic(&a, &b));
    }
}
