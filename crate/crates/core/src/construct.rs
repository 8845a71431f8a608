//! Constructions: Sugihara chains, lexicographic chain sums, reflections,
//! rigorous extensions, the truncated-multiplication family, and a handful
//! of named small algebras.
//!
//! No construction is trusted: every algebra built here goes through full
//! validation, so the residuation law is re-checked exhaustively.

use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra, ValidateError};
use crate::classify;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("invalid chain-family spec: {0}")]
    SpecInvalid(String),
    #[error("expected a Dunn monoid (distributive square-increasing RL without involution)")]
    NotADunnMonoid,
    #[error("expected a totally ordered odd Sugihara monoid")]
    NotOddSugihara,
    #[error("expected a De Morgan monoid (distributive square-increasing IRL)")]
    NotDeMorgan,
    #[error("construction produced an invalid algebra: {0}")]
    Invalid(#[from] ValidateError),
}

fn chain_le(n: usize) -> Vec<Vec<bool>> {
    (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect()
}

/// The Sugihara chain with `n` elements: for even `n` the fragment
/// `{−n/2, …, −1, 1, …, n/2}` of the nonzero integers with `e = 1`, for odd
/// `n` the fragment `{−(n−1)/2, …, (n−1)/2}` of all integers with `e = 0`.
/// Fusion takes the argument of greater absolute value, and the meet on
/// ties; the involution is integer negation.  `n = 1` is the trivial
/// algebra.
pub fn sugihara(n: usize) -> FiniteAlgebra {
    assert!(n >= 1, "sugihara chains need at least one element");
    let values: Vec<i64> = if n % 2 == 1 {
        let m = (n as i64 - 1) / 2;
        (-m..=m).collect()
    } else {
        let m = n as i64 / 2;
        (-m..=m).filter(|&v| v != 0).collect()
    };
    let e_val = if n % 2 == 1 { 0 } else { 1 };
    let pos = |v: i64| values.iter().position(|&w| w == v).unwrap();
    let fusion = values
        .iter()
        .map(|&a| {
            values
                .iter()
                .map(|&b| {
                    let v = if a.abs() > b.abs() {
                        a
                    } else if b.abs() > a.abs() {
                        b
                    } else {
                        a.min(b)
                    };
                    pos(v)
                })
                .collect()
        })
        .collect();
    let neg = values.iter().map(|&a| pos(-a)).collect();
    FiniteAlgebra::from_parts(
        Some(format!("S{n}")),
        chain_le(n),
        fusion,
        pos(e_val),
        Some(neg),
    )
    .expect("sugihara chains validate")
}

/// A family of disjoint chains indexed by a totally ordered odd Sugihara
/// monoid: each base element `c` is the greatest element of a chain of
/// `sizes[c]` elements.  The base may be involutive or a plain reduct; what
/// matters is that `x ↦ x*` is an involution on it.
#[derive(Debug, Clone)]
pub struct ChainFamilySpec {
    pub base: FiniteAlgebra,
    /// Chain size per base element index; every entry must be ≥ 1.
    pub sizes: Vec<usize>,
}

impl ChainFamilySpec {
    pub fn uniform(base: FiniteAlgebra) -> ChainFamilySpec {
        let sizes = vec![1; base.size()];
        ChainFamilySpec { base, sizes }
    }

    fn check(&self) -> Result<(), ConstructError> {
        let s = &self.base;
        if self.sizes.len() != s.size() {
            return Err(ConstructError::SpecInvalid(
                "sizes must list one chain length per base element".into(),
            ));
        }
        if self.sizes.iter().any(|&k| k == 0) {
            return Err(ConstructError::SpecInvalid("every chain size must be ≥ 1".into()));
        }
        if !s.is_totally_ordered() || !s.is_idempotent() {
            return Err(ConstructError::SpecInvalid(
                "base must be a totally ordered idempotent algebra".into(),
            ));
        }
        if s.elements().any(|x| s.double_star(x) != x) {
            return Err(ConstructError::SpecInvalid(
                "base must satisfy x** = x (an odd Sugihara monoid up to term equivalence)".into(),
            ));
        }
        // The star map must make the base a genuine odd Sugihara chain.
        let n = s.size();
        let le = (0..n).map(|i| (0..n).map(|j| s.le(i, j)).collect()).collect();
        let fusion = (0..n).map(|i| (0..n).map(|j| s.fuse(i, j)).collect()).collect();
        let neg = (0..n).map(|x| s.star(x)).collect();
        let irl = FiniteAlgebra::from_parts(None, le, fusion, s.e(), Some(neg))
            .map_err(|e| ConstructError::SpecInvalid(format!("base star map: {e}")))?;
        let report = classify::classify(&irl);
        if !report.sugihara_monoid.holds || !report.odd.holds {
            return Err(ConstructError::SpecInvalid(
                "base is not an odd Sugihara monoid under x ↦ x*".into(),
            ));
        }
        Ok(())
    }

    /// Total carrier size of the product.
    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// The lexicographic sum of a chain family and its layout: which base
/// element each product element sits under, and where each block's top is.
#[derive(Debug, Clone)]
pub struct OtimesAlgebra {
    pub algebra: FiniteAlgebra,
    /// Base element index per product element.
    pub block_of: Vec<Elem>,
    /// Product element index of the top of each base element's block.
    pub top_of: Vec<Elem>,
}

/// Builds the totally ordered idempotent RL on the disjoint union of the
/// chains, ordered lexicographically.  For `x` in the block of `a` and `y`
/// in the block of `b`:
///
/// * fusion: `x∧y` if `a = b ≤ e`; `x∨y` if `e < a = b`; otherwise the
///   argument whose block wins the base fusion;
/// * residual: `a* ∨ y` if `x ≤ y`, else `a* ∧ y` — with `a*` read as the
///   top of the block of the base star.
///
/// The result has the base as its double-star subalgebra and the chains as
/// its blocks, which is re-checked here.
pub fn otimes(spec: &ChainFamilySpec) -> Result<OtimesAlgebra, ConstructError> {
    spec.check()?;
    let s = &spec.base;
    let base_order = s.chain_order();
    let n: usize = spec.total_size();

    // Lay out blocks in ascending base order; inside a block the top comes
    // last (depth index 0 is the top, serialized after its predecessors).
    let mut block_of = vec![0usize; n];
    let mut pos_in_block = vec![0usize; n]; // position from the bottom of the block
    let mut top_of = vec![0usize; s.size()];
    let mut idx = 0;
    for &c in &base_order {
        for i in 0..spec.sizes[c] {
            block_of[idx] = c;
            pos_in_block[idx] = i;
            idx += 1;
        }
        top_of[c] = idx - 1;
    }

    let le: Vec<Vec<bool>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let (a, b) = (block_of[x], block_of[y]);
                    s.lt(a, b) || (a == b && pos_in_block[x] <= pos_in_block[y])
                })
                .collect()
        })
        .collect();
    let lex_le = |x: usize, y: usize| le[x][y];
    let fusion: Vec<Vec<Elem>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let (a, b) = (block_of[x], block_of[y]);
                    if a == b && s.le(a, s.e()) {
                        if lex_le(x, y) {
                            x
                        } else {
                            y
                        }
                    } else if a == b {
                        if lex_le(x, y) {
                            y
                        } else {
                            x
                        }
                    } else if s.fuse(a, b) == a {
                        x
                    } else {
                        y
                    }
                })
                .collect()
        })
        .collect();
    let algebra = FiniteAlgebra::validate(crate::algebra::RawAlgebra {
        name: None,
        size: n,
        le: le
            .iter()
            .map(|row| row.iter().map(|&b| u8::from(b)).collect())
            .collect(),
        fusion,
        e: top_of[s.e()],
        neg: None,
    })?;

    // Residuals must follow the case formula: a* ∨ y below, a* ∧ y above.
    for x in 0..n {
        let a_star = top_of[s.star(block_of[x])];
        for y in 0..n {
            let expect = if lex_le(x, y) {
                algebra.join(a_star, y)
            } else {
                algebra.meet(a_star, y)
            };
            if algebra.resid(x, y) != expect {
                return Err(ConstructError::SpecInvalid(format!(
                    "residual at ({x}, {y}) deviates from the case formula"
                )));
            }
        }
    }
    // The base must come back as the double-star subalgebra, blockwise.
    for x in 0..n {
        if algebra.double_star(x) != top_of[block_of[x]] {
            return Err(ConstructError::SpecInvalid(format!(
                "double star of {x} is not its block top"
            )));
        }
    }
    Ok(OtimesAlgebra {
        algebra,
        block_of,
        top_of,
    })
}

/// `S₃ ⊕ P` for a `k`-element chain `P`: the Sugihara chain S₃ with the
/// block above `e` fattened to `k` elements.
pub fn oplus(k: usize) -> FiniteAlgebra {
    assert!(k >= 1);
    let spec = ChainFamilySpec {
        base: sugihara(3),
        sizes: vec![1, 1, k],
    };
    otimes(&spec)
        .expect("S3-plus-chain specs are valid")
        .algebra
        .with_name(&format!("S3o{k}"))
}

/// The reflection of a Dunn monoid: an inverted copy of the carrier stacked
/// above it, with new bounds and an involution swapping the copies.
/// Elements `0..n` are the original carrier, `n..2n` the copy (`a'` at
/// `n + a`), then the bottom and the top.  The result is an anti-idempotent
/// De Morgan monoid with top `f²` and bottom `¬(f²)`.
pub fn reflection(d: &FiniteAlgebra) -> Result<FiniteAlgebra, ConstructError> {
    let report = classify::classify(d);
    if d.has_involution() || !report.distributive.holds || !report.square_increasing.holds {
        return Err(ConstructError::NotADunnMonoid);
    }
    let n = d.size();
    let size = 2 * n + 2;
    let zero = 2 * n;
    let one = 2 * n + 1;
    let prime = |a: usize| n + a;
    let le = |x: usize, y: usize| -> bool {
        if x == y || x == zero || y == one {
            return true;
        }
        if y == zero || x == one {
            return false;
        }
        match (x < n, y < n) {
            (true, true) => d.le(x, y),
            (true, false) => true,                    // a < b'
            (false, true) => false,
            (false, false) => d.le(y - n, x - n),     // a' ≤ b' iff b ≤ a
        }
    };
    let fuse = |x: usize, y: usize| -> usize {
        if x == zero || y == zero {
            return zero;
        }
        if x == one || y == one {
            return one;
        }
        match (x < n, y < n) {
            (true, true) => d.fuse(x, y),
            (true, false) => prime(d.resid(x, y - n)), // a·b' = (a→b)'
            (false, true) => prime(d.resid(y, x - n)),
            (false, false) => one,
        }
    };
    let mut neg = vec![0usize; size];
    for a in 0..n {
        neg[a] = prime(a);
        neg[prime(a)] = a;
    }
    neg[zero] = one;
    neg[one] = zero;
    let out = FiniteAlgebra::from_parts(
        d.name().map(|s| format!("refl({s})")),
        (0..size).map(|x| (0..size).map(|y| le(x, y)).collect()).collect(),
        (0..size).map(|x| (0..size).map(|y| fuse(x, y)).collect()).collect(),
        d.e(),
        Some(neg),
    )?;
    Ok(out)
}

/// Substitutes a De Morgan monoid for the neutral element of a totally
/// ordered odd Sugihara monoid.  Elements are serialized with the strictly
/// negative part of the chain first, then the De Morgan monoid, then the
/// strictly positive part.  Mixed operations send `a ⋆ s` to `a` when
/// `e ⋆ s = e` in the chain and to `e ⋆ s` otherwise.
pub fn rigorous_extension(
    s: &FiniteAlgebra,
    a: &FiniteAlgebra,
) -> Result<FiniteAlgebra, ConstructError> {
    let rs = classify::classify(s);
    if !rs.sugihara_monoid.holds || !rs.odd.holds || !rs.totally_ordered.holds {
        return Err(ConstructError::NotOddSugihara);
    }
    // The chain must in addition be directly verified to never produce `e`
    // from non-`e` arguments under any basic operation.
    let se = s.e();
    for x in s.elements() {
        if x != se && s.neg_of(x) == se {
            return Err(ConstructError::NotOddSugihara);
        }
        for y in s.elements() {
            if x != se && y != se {
                let hits_e = s.fuse(x, y) == se || s.meet(x, y) == se || s.join(x, y) == se;
                if hits_e {
                    return Err(ConstructError::NotOddSugihara);
                }
            }
        }
    }
    let ra = classify::classify(a);
    if !ra.de_morgan_monoid.holds {
        return Err(ConstructError::NotDeMorgan);
    }

    let chain = s.chain_order();
    let below: Vec<Elem> = chain.iter().copied().filter(|&x| s.lt(x, se)).collect();
    let above: Vec<Elem> = chain.iter().copied().filter(|&x| s.lt(se, x)).collect();
    let na = a.size();
    let size = below.len() + na + above.len();

    // Composite index ↦ side: Err(chain element) or Ok(inner element).
    let part = |i: usize| -> Result<Elem, Elem> {
        if i < below.len() {
            Err(below[i])
        } else if i < below.len() + na {
            Ok(i - below.len())
        } else {
            Err(above[i - below.len() - na])
        }
    };
    let chain_pos = |x: Elem| -> usize {
        if s.lt(x, se) {
            below.iter().position(|&b| b == x).unwrap()
        } else {
            below.len() + na + above.iter().position(|&b| b == x).unwrap()
        }
    };
    let le = |i: usize, j: usize| -> bool {
        match (part(i), part(j)) {
            (Ok(x), Ok(y)) => a.le(x, y),
            (Err(x), Err(y)) => s.le(x, y),
            (Ok(_), Err(y)) => s.le(se, y),
            (Err(x), Ok(_)) => s.le(x, se),
        }
    };
    let fuse = |i: usize, j: usize| -> usize {
        match (part(i), part(j)) {
            (Ok(x), Ok(y)) => below.len() + a.fuse(x, y),
            (Err(x), Err(y)) => chain_pos(s.fuse(x, y)),
            // e·s ≠ e in the chain, so the mixed fusion is always the chain side.
            (Ok(_), Err(y)) | (Err(y), Ok(_)) => {
                let v = s.fuse(se, y);
                debug_assert_ne!(v, se);
                chain_pos(v)
            }
        }
    };
    let neg = (0..size)
        .map(|i| match part(i) {
            Ok(x) => below.len() + a.neg_of(x),
            Err(x) => chain_pos(s.neg_of(x)),
        })
        .collect();
    let name = match (s.name(), a.name()) {
        (Some(sn), Some(an)) => Some(format!("{sn}[{an}]")),
        _ => None,
    };
    let out = FiniteAlgebra::from_parts(
        name,
        (0..size).map(|i| (0..size).map(|j| le(i, j)).collect()).collect(),
        (0..size).map(|i| (0..size).map(|j| fuse(i, j)).collect()).collect(),
        below.len() + a.e(),
        Some(neg),
    )?;
    // The inner algebra must come back as a subalgebra, identically.
    let embed: Vec<Elem> = (0..na).map(|x| below.len() + x).collect();
    crate::morphism::Homomorphism::new(a.clone(), out.clone(), embed)
        .map_err(|e| ConstructError::SpecInvalid(format!("inner embedding fails: {e}")))?;
    Ok(out)
}

fn ap_values(p: usize) -> Vec<u64> {
    let mut v = vec![0u64];
    v.extend((0..=p as u32 + 1).map(|k| 2u64.pow(k)));
    v
}

fn ap_tables(p: usize) -> (Vec<Vec<bool>>, Vec<Vec<Elem>>, Elem) {
    let values = ap_values(p);
    let n = values.len();
    let cap = values[n - 1];
    let pos = |v: u64| values.iter().position(|&w| w == v).unwrap();
    let fusion = values
        .iter()
        .map(|&a| values.iter().map(|&b| pos((a * b).min(cap))).collect())
        .collect();
    (chain_le(n), fusion, pos(1))
}

/// The chain `0 < 1 < 2 < 4 < … < 2^(p+1)` with fusion the multiplication
/// truncated at `2^(p+1)` and involution `¬2^k = 2^(p−k)`, `¬0 = 2^(p+1)`.
/// Here `f = 2^p`.
pub fn ap_family(p: usize) -> FiniteAlgebra {
    assert!(p >= 1);
    let values = ap_values(p);
    let n = values.len();
    let (le, fusion, e) = ap_tables(p);
    let mut neg = vec![0usize; n];
    neg[0] = n - 1;
    neg[n - 1] = 0;
    for k in 0..=p {
        // index of 2^k is k + 1
        neg[k + 1] = (p - k) + 1;
    }
    FiniteAlgebra::from_parts(Some(format!("A{p}")), le, fusion, e, Some(neg))
        .expect("truncated-multiplication chains validate")
}

/// The involution-free reduct of [`ap_family`].
pub fn ap_plus(p: usize) -> FiniteAlgebra {
    assert!(p >= 1);
    let (le, fusion, e) = ap_tables(p);
    FiniteAlgebra::from_parts(Some(format!("A{p}p")), le, fusion, e, None)
        .expect("truncated-multiplication chains validate")
}

/// Small named algebras given directly by their diagrams:
///
/// * `2` — the two-element Boolean algebra, `f < e`;
/// * `2p` — the two-element Brouwerian algebra (no involution);
/// * `C4` — the chain `¬(f²) < e < f < f²`;
/// * `D4` — the diamond with incomparable `e, f`;
/// * `RS3` — the three-element relative Stone chain `⊥ < a < e`.
pub fn named_algebra(key: &str) -> Option<FiniteAlgebra> {
    let a = match key {
        "2" => FiniteAlgebra::from_parts(
            Some("2".into()),
            chain_le(2),
            vec![vec![0, 0], vec![0, 1]],
            1,
            Some(vec![1, 0]),
        ),
        "2p" => FiniteAlgebra::from_parts(
            Some("2p".into()),
            chain_le(2),
            vec![vec![0, 0], vec![0, 1]],
            1,
            None,
        ),
        "C4" => FiniteAlgebra::from_parts(
            Some("C4".into()),
            chain_le(4),
            vec![
                vec![0, 0, 0, 0],
                vec![0, 1, 2, 3],
                vec![0, 2, 3, 3],
                vec![0, 3, 3, 3],
            ],
            1,
            Some(vec![3, 2, 1, 0]),
        ),
        "D4" => {
            // 0 = ¬(f²) < 1 = e, 2 = f < 3 = f², with e and f incomparable.
            let le = vec![
                vec![true, true, true, true],
                vec![false, true, false, true],
                vec![false, false, true, true],
                vec![false, false, false, true],
            ];
            FiniteAlgebra::from_parts(
                Some("D4".into()),
                le,
                vec![
                    vec![0, 0, 0, 0],
                    vec![0, 1, 2, 3],
                    vec![0, 2, 3, 3],
                    vec![0, 3, 3, 3],
                ],
                1,
                Some(vec![3, 2, 1, 0]),
            )
        }
        "RS3" => FiniteAlgebra::from_parts(
            Some("RS3".into()),
            chain_le(3),
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]],
            2,
            None,
        ),
        _ => return None,
    };
    Some(a.expect("named algebras validate"))
}
