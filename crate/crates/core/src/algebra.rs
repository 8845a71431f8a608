//! Finite commutative residuated lattices.
//!
//! An algebra is supplied as raw tables: an order matrix `le`, a fusion
//! table, the neutral element `e`, and an optional involution `neg`.  The
//! lattice operations and the residual are *derived* during validation and
//! never trusted from the input; validation fails unless
//!
//! * `le` is a partial order in which every pair has a meet and a join,
//! * fusion is a commutative monoid with neutral element `e`,
//! * every pair `x, y` has a residual `x→y = max{z : x·z ≤ y}` and the law
//!   of residuation `x·y ≤ z ⟺ y ≤ x→z` holds, and
//! * when `neg` is present, `¬¬x = x` and `x·y ≤ z ⟺ ¬z·y ≤ ¬x`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::set::ElemSet;

/// Index of an element in the carrier `0..n`.
pub type Elem = usize;

/// Largest supported carrier; subsets are stored as 32-bit masks.
pub const MAX_SIZE: usize = 32;

/// The serialized form of an algebra.  `le` holds 0/1 entries, `fusion`
/// holds element indices, `neg` is `null` for a plain residuated lattice.
/// Residual, meet and join are never serialized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawAlgebra {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub size: usize,
    pub le: Vec<Vec<u8>>,
    pub fusion: Vec<Vec<Elem>>,
    pub e: Elem,
    pub neg: Option<Vec<Elem>>,
}

impl RawAlgebra {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("algebra documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<RawAlgebra, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidateError {
    #[error("carrier must contain at least one element")]
    EmptyCarrier,
    #[error("carrier size {0} exceeds the supported maximum {MAX_SIZE}")]
    CarrierTooLarge(usize),
    #[error("table `{table}` is not {size}x{size} (or `neg` not of length {size})")]
    BadShape { table: &'static str, size: usize },
    #[error("table `{table}` holds out-of-range entry {value}")]
    IndexOutOfRange { table: &'static str, value: usize },
    #[error("not a lattice ({defect} fails at {witness:?})")]
    NotALattice {
        defect: &'static str,
        witness: Vec<Elem>,
    },
    #[error("not a commutative monoid ({defect} fails at {witness:?})")]
    NotAMonoid {
        defect: &'static str,
        witness: Vec<Elem>,
    },
    #[error("not residuated: {{z : {x}·z ≤ {y}}} has no greatest element")]
    NotResiduated { x: Elem, y: Elem },
    #[error("law of residuation fails at x={x}, y={y}, z={z}")]
    ResiduationLawFails { x: Elem, y: Elem, z: Elem },
    #[error("bad involution ({defect} fails at {witness:?})")]
    BadInvolution {
        defect: &'static str,
        witness: Vec<Elem>,
    },
}

/// A validated finite commutative residuated lattice, optionally involutive.
///
/// Immutable after validation; all derived tables are precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: Option<String>,
    size: usize,
    le: Vec<bool>,
    fusion: Vec<Elem>,
    e: Elem,
    neg: Option<Vec<Elem>>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    residual: Vec<Elem>,
}

impl FiniteAlgebra {
    /// Validates raw tables and derives meet, join and the residual.
    pub fn validate(raw: RawAlgebra) -> Result<FiniteAlgebra, ValidateError> {
        let n = raw.size;
        if n == 0 {
            return Err(ValidateError::EmptyCarrier);
        }
        if n > MAX_SIZE {
            return Err(ValidateError::CarrierTooLarge(n));
        }
        check_square(&raw.le, n, "le", 1)?;
        check_square(&raw.fusion, n, "fusion", n - 1)?;
        if raw.e >= n {
            return Err(ValidateError::IndexOutOfRange {
                table: "e",
                value: raw.e,
            });
        }
        if let Some(neg) = &raw.neg {
            if neg.len() != n {
                return Err(ValidateError::BadShape {
                    table: "neg",
                    size: n,
                });
            }
            if let Some(&v) = neg.iter().find(|&&v| v >= n) {
                return Err(ValidateError::IndexOutOfRange {
                    table: "neg",
                    value: v,
                });
            }
        }

        let le: Vec<bool> = raw
            .le
            .iter()
            .flat_map(|row| row.iter().map(|&b| b != 0))
            .collect();
        let fusion: Vec<Elem> = raw.fusion.iter().flatten().copied().collect();
        let at = |m: &[bool], i: usize, j: usize| m[i * n + j];

        // Partial order.
        for i in 0..n {
            if !at(&le, i, i) {
                return Err(ValidateError::NotALattice {
                    defect: "reflexivity",
                    witness: vec![i],
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && at(&le, i, j) && at(&le, j, i) {
                    return Err(ValidateError::NotALattice {
                        defect: "antisymmetry",
                        witness: vec![i, j],
                    });
                }
                for k in 0..n {
                    if at(&le, i, j) && at(&le, j, k) && !at(&le, i, k) {
                        return Err(ValidateError::NotALattice {
                            defect: "transitivity",
                            witness: vec![i, j, k],
                        });
                    }
                }
            }
        }

        // Meets and joins.
        let mut meet = vec![0usize; n * n];
        let mut join = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                meet[i * n + j] = bound(&le, n, i, j, true).ok_or(ValidateError::NotALattice {
                    defect: "meet",
                    witness: vec![i, j],
                })?;
                join[i * n + j] = bound(&le, n, i, j, false).ok_or(ValidateError::NotALattice {
                    defect: "join",
                    witness: vec![i, j],
                })?;
            }
        }

        // Commutative monoid.
        let fuse = |x: usize, y: usize| fusion[x * n + y];
        for x in 0..n {
            if fuse(raw.e, x) != x {
                return Err(ValidateError::NotAMonoid {
                    defect: "neutrality",
                    witness: vec![raw.e, x],
                });
            }
            for y in 0..n {
                if fuse(x, y) != fuse(y, x) {
                    return Err(ValidateError::NotAMonoid {
                        defect: "commutativity",
                        witness: vec![x, y],
                    });
                }
                for z in 0..n {
                    if fuse(fuse(x, y), z) != fuse(x, fuse(y, z)) {
                        return Err(ValidateError::NotAMonoid {
                            defect: "associativity",
                            witness: vec![x, y, z],
                        });
                    }
                }
            }
        }

        // Residual: x→y is the greatest z with x·z ≤ y.
        let mut residual = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                let mut sup: Option<usize> = None;
                for z in 0..n {
                    if at(&le, fuse(x, z), y) {
                        sup = Some(match sup {
                            None => z,
                            Some(m) => join[m * n + z],
                        });
                    }
                }
                let m = sup.ok_or(ValidateError::NotResiduated { x, y })?;
                if !at(&le, fuse(x, m), y) {
                    // The lower set has an upper bound outside itself, so no maximum.
                    return Err(ValidateError::NotResiduated { x, y });
                }
                residual[x * n + y] = m;
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if at(&le, fuse(x, y), z) != at(&le, y, residual[x * n + z]) {
                        return Err(ValidateError::ResiduationLawFails { x, y, z });
                    }
                }
            }
        }

        // Involution.
        if let Some(neg) = &raw.neg {
            for x in 0..n {
                if neg[neg[x]] != x {
                    return Err(ValidateError::BadInvolution {
                        defect: "double negation",
                        witness: vec![x],
                    });
                }
            }
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if at(&le, fuse(x, y), z) != at(&le, fuse(neg[z], y), neg[x]) {
                            return Err(ValidateError::BadInvolution {
                                defect: "contraposition",
                                witness: vec![x, y, z],
                            });
                        }
                    }
                }
            }
        }

        Ok(FiniteAlgebra {
            name: raw.name,
            size: n,
            le,
            fusion,
            e: raw.e,
            neg: raw.neg,
            meet,
            join,
            residual,
        })
    }

    /// Validates tables given as Rust values; used by the constructions.
    pub fn from_parts(
        name: Option<String>,
        le: Vec<Vec<bool>>,
        fusion: Vec<Vec<Elem>>,
        e: Elem,
        neg: Option<Vec<Elem>>,
    ) -> Result<FiniteAlgebra, ValidateError> {
        let size = le.len();
        FiniteAlgebra::validate(RawAlgebra {
            name,
            size,
            le: le
                .into_iter()
                .map(|row| row.into_iter().map(u8::from).collect())
                .collect(),
            fusion,
            e,
            neg,
        })
    }

    pub fn to_raw(&self) -> RawAlgebra {
        let n = self.size;
        RawAlgebra {
            name: self.name.clone(),
            size: n,
            le: (0..n)
                .map(|i| (0..n).map(|j| u8::from(self.le[i * n + j])).collect())
                .collect(),
            fusion: (0..n)
                .map(|i| self.fusion[i * n..(i + 1) * n].to_vec())
                .collect(),
            e: self.e,
            neg: self.neg.clone(),
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    #[must_use]
    pub fn with_name(mut self, name: &str) -> FiniteAlgebra {
        self.name = Some(name.to_string());
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    #[inline]
    pub fn le(&self, i: Elem, j: Elem) -> bool {
        self.le[i * self.size + j]
    }

    pub fn lt(&self, i: Elem, j: Elem) -> bool {
        i != j && self.le(i, j)
    }

    #[inline]
    pub fn meet(&self, i: Elem, j: Elem) -> Elem {
        self.meet[i * self.size + j]
    }

    #[inline]
    pub fn join(&self, i: Elem, j: Elem) -> Elem {
        self.join[i * self.size + j]
    }

    #[inline]
    pub fn fuse(&self, i: Elem, j: Elem) -> Elem {
        self.fusion[i * self.size + j]
    }

    #[inline]
    pub fn resid(&self, i: Elem, j: Elem) -> Elem {
        self.residual[i * self.size + j]
    }

    pub fn e(&self) -> Elem {
        self.e
    }

    pub fn has_involution(&self) -> bool {
        self.neg.is_some()
    }

    pub fn involution(&self) -> Option<&[Elem]> {
        self.neg.as_deref()
    }

    /// ¬x; panics when the algebra has no involution.
    pub fn neg_of(&self, x: Elem) -> Elem {
        self.neg.as_ref().expect("algebra has no involution")[x]
    }

    /// f = ¬e, for involutive algebras.
    pub fn f(&self) -> Option<Elem> {
        self.neg.as_ref().map(|neg| neg[self.e])
    }

    /// x* = x → e.
    pub fn star(&self, x: Elem) -> Elem {
        self.resid(x, self.e)
    }

    pub fn double_star(&self, x: Elem) -> Elem {
        self.star(self.star(x))
    }

    /// |x| = x → x.
    pub fn abs_of(&self, x: Elem) -> Elem {
        self.resid(x, x)
    }

    /// xⁿ with x⁰ = e.
    pub fn power(&self, x: Elem, n: usize) -> Elem {
        let mut acc = self.e;
        for _ in 0..n {
            acc = self.fuse(acc, x);
        }
        acc
    }

    pub fn bottom(&self) -> Option<Elem> {
        self.elements().find(|&b| self.elements().all(|x| self.le(b, x)))
    }

    pub fn top(&self) -> Option<Elem> {
        self.elements().find(|&t| self.elements().all(|x| self.le(x, t)))
    }

    pub fn is_totally_ordered(&self) -> bool {
        self.elements()
            .all(|i| self.elements().all(|j| self.le(i, j) || self.le(j, i)))
    }

    pub fn is_idempotent(&self) -> bool {
        self.elements().all(|x| self.fuse(x, x) == x)
    }

    pub fn is_square_increasing(&self) -> bool {
        self.elements().all(|x| self.le(x, self.fuse(x, x)))
    }

    /// The lower set {a : a ≤ x}.
    pub fn downset(&self, x: Elem) -> ElemSet {
        ElemSet::from_elems(self.elements().filter(|&a| self.le(a, x)))
    }

    /// The upper set {a : x ≤ a}.
    pub fn upset(&self, x: Elem) -> ElemSet {
        ElemSet::from_elems(self.elements().filter(|&a| self.le(x, a)))
    }

    /// The interval [x, y].
    pub fn interval(&self, x: Elem, y: Elem) -> ElemSet {
        self.upset(x).inter(self.downset(y))
    }

    /// Forgets the involution; the residuated-lattice reduct.
    #[must_use]
    pub fn reduct(&self) -> FiniteAlgebra {
        let mut r = self.clone();
        r.neg = None;
        r.name = self.name.as_ref().map(|s| format!("{s}-reduct"));
        r
    }

    /// Elements in ascending chain order; only meaningful for total orders.
    pub fn chain_order(&self) -> Vec<Elem> {
        let mut order: Vec<Elem> = self.elements().collect();
        order.sort_by_key(|&x| self.downset(x).len());
        order
    }
}

fn check_square<T>(table: &[Vec<T>], n: usize, name: &'static str, max: usize) -> Result<(), ValidateError>
where
    T: Copy + Into<usize>,
{
    if table.len() != n || table.iter().any(|row| row.len() != n) {
        return Err(ValidateError::BadShape {
            table: name,
            size: n,
        });
    }
    for row in table {
        for &v in row {
            if v.into() > max {
                return Err(ValidateError::IndexOutOfRange {
                    table: name,
                    value: v.into(),
                });
            }
        }
    }
    Ok(())
}

/// Greatest lower bound (`lower`) or least upper bound of `{i, j}`, if any.
fn bound(le: &[bool], n: usize, i: usize, j: usize, lower: bool) -> Option<usize> {
    let cmp = |a: usize, b: usize| if lower { le[a * n + b] } else { le[b * n + a] };
    let cands: Vec<usize> = (0..n).filter(|&k| cmp(k, i) && cmp(k, j)).collect();
    cands
        .iter()
        .copied()
        .find(|&m| cands.iter().all(|&k| cmp(k, m)))
}
