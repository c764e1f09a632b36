//! Partitions of finite carriers and congruence machinery: generation,
//! validation, join/meet, relational composition, the semilattice
//! replica, and full congruence enumeration for tiny algebras.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra, Verdict};
use crate::equation::{semilattice_base, EquationError};

/// Bell-number guard for [`all_congruences`].
pub const ALL_CONGRUENCES_SIZE_LIMIT: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error("malformed partition `{0}`")]
    BadPartition(String),
    #[error("partitions are over different carriers")]
    CarrierMismatch,
    #[error("size {0} exceeds the limit {1} for congruence enumeration")]
    SizeLimit(usize, usize),
}

/// A partition of `{0..n-1}`. Internally every element points at the
/// least element of its block, which makes equality and refinement
/// checks cheap and the serialized form canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    repr: Vec<usize>,
}

impl Partition {
    pub fn identity(n: usize) -> Partition {
        Partition { repr: (0..n).collect() }
    }

    pub fn all(n: usize) -> Partition {
        Partition { repr: vec![0; n.max(1)] }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Partition {
        let mut uf = UnionFind::new(n);
        for &(a, b) in pairs {
            uf.union(a, b);
        }
        uf.into_partition()
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Partition, CongruenceError> {
        let mut seen = vec![false; n];
        let mut uf = UnionFind::new(n);
        for block in blocks {
            if block.is_empty() {
                return Err(CongruenceError::BadPartition("empty block".to_string()));
            }
            for &e in block {
                if e >= n || seen[e] {
                    return Err(CongruenceError::BadPartition(format!(
                        "element {e} repeated or out of range"
                    )));
                }
                seen[e] = true;
                uf.union(block[0], e);
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(CongruenceError::BadPartition(
                "blocks do not cover the carrier".to_string(),
            ));
        }
        Ok(uf.into_partition())
    }

    /// Parses the text form `{0,1|2,3|4,5|6}`.
    pub fn parse(text: &str) -> Result<Partition, CongruenceError> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| CongruenceError::BadPartition(text.to_string()))?;
        let mut blocks = Vec::new();
        let mut count = 0;
        for part in inner.split('|') {
            let mut block = Vec::new();
            for tok in part.split(',') {
                let e: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| CongruenceError::BadPartition(text.to_string()))?;
                block.push(e);
            }
            count += block.len();
            blocks.push(block);
        }
        Partition::from_blocks(count, &blocks)
    }

    pub fn len(&self) -> usize {
        self.repr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.repr.is_empty()
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.repr[a] == self.repr[b]
    }

    /// The least element of the block containing `e`.
    pub fn leader(&self, e: usize) -> usize {
        self.repr[e]
    }

    /// Blocks as sorted element lists, ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (e, &r) in self.repr.iter().enumerate() {
            map.entry(r).or_default().push(e);
        }
        map.into_values().collect()
    }

    pub fn block_count(&self) -> usize {
        let mut leaders: Vec<usize> = self.repr.clone();
        leaders.sort_unstable();
        leaders.dedup();
        leaders.len()
    }

    /// Index of `e`'s block in the [`Partition::blocks`] order.
    pub fn block_index(&self, e: usize) -> usize {
        let mut leaders: Vec<usize> = self.repr.clone();
        leaders.sort_unstable();
        leaders.dedup();
        leaders.binary_search(&self.repr[e]).expect("leader present")
    }

    /// Is every block of `self` contained in a block of `other`?
    pub fn refines(&self, other: &Partition) -> bool {
        self.repr.len() == other.repr.len()
            && (0..self.repr.len()).all(|e| other.same(e, self.repr[e]))
    }

    /// Blockwise intersection.
    pub fn meet(&self, other: &Partition) -> Partition {
        let n = self.repr.len();
        let mut first: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut repr = vec![0; n];
        for e in 0..n {
            let key = (self.repr[e], other.repr[e]);
            repr[e] = *first.entry(key).or_insert(e);
        }
        Partition { repr }
    }

    /// All related pairs `(leader, e)`, enough to regenerate the partition.
    pub fn generating_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.repr.len())
            .filter(|&e| self.repr[e] != e)
            .map(|e| (self.repr[e], e))
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{{{}}}", blocks.join("|"))
    }
}

/// Union-find keeping the least element as the root of each class.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn from_partition(p: &Partition) -> UnionFind {
        UnionFind { parent: p.repr.clone() }
    }

    pub(crate) fn find(&mut self, mut e: usize) -> usize {
        while self.parent[e] != e {
            self.parent[e] = self.parent[self.parent[e]];
            e = self.parent[e];
        }
        e
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn into_partition(mut self) -> Partition {
        let repr: Vec<usize> = (0..self.parent.len()).map(|e| self.find(e)).collect();
        Partition { repr }
    }
}

/// Compatibility of a partition with every operation table, checked one
/// coordinate at a time (equivalent to the blockwise condition by
/// chaining).
pub fn is_congruence(alg: &FiniteAlgebra, part: &Partition) -> bool {
    if part.len() != alg.size() {
        return false;
    }
    let n = alg.size();
    for (si, sym) in alg.signature().symbols().iter().enumerate() {
        let mut args = vec![0usize; sym.arity];
        loop {
            let out = alg.op(si, &args);
            for j in 0..sym.arity {
                let orig = args[j];
                for b in 0..n {
                    if b != orig && part.same(b, orig) {
                        args[j] = b;
                        let out2 = alg.op(si, &args);
                        args[j] = orig;
                        if !part.same(out, out2) {
                            return false;
                        }
                    }
                }
            }
            if !crate::algebra::next_assignment(&mut args, n) {
                break;
            }
        }
    }
    true
}

/// The least congruence containing the given pairs: union-find seeded
/// with the pairs, then closed under all operations to a fixpoint.
pub fn congruence_generated(alg: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Partition {
    let n = alg.size();
    let mut uf = UnionFind::new(n);
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    close_under_operations(alg, &mut uf);
    uf.into_partition()
}

fn close_under_operations(alg: &FiniteAlgebra, uf: &mut UnionFind) {
    let n = alg.size();
    loop {
        let mut changed = false;
        for (si, sym) in alg.signature().symbols().iter().enumerate() {
            let mut args = vec![0usize; sym.arity];
            loop {
                let out = alg.op(si, &args);
                for j in 0..sym.arity {
                    let orig = args[j];
                    for b in 0..n {
                        if b != orig && uf.find(b) == uf.find(orig) {
                            args[j] = b;
                            let out2 = alg.op(si, &args);
                            args[j] = orig;
                            if uf.union(out, out2) {
                                changed = true;
                            }
                        }
                    }
                }
                if !crate::algebra::next_assignment(&mut args, n) {
                    break;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Join in the congruence lattice: the congruence generated by the
/// union of the two partitions.
pub fn join(alg: &FiniteAlgebra, a: &Partition, b: &Partition) -> Result<Partition, CongruenceError> {
    if a.len() != b.len() || a.len() != alg.size() {
        return Err(CongruenceError::CarrierMismatch);
    }
    let mut pairs = a.generating_pairs();
    pairs.extend(b.generating_pairs());
    Ok(congruence_generated(alg, &pairs))
}

/// Meet in the congruence lattice: blockwise intersection.
pub fn meet(a: &Partition, b: &Partition) -> Result<Partition, CongruenceError> {
    if a.len() != b.len() {
        return Err(CongruenceError::CarrierMismatch);
    }
    Ok(a.meet(b))
}

/// A binary relation on `{0..n-1}`; composition of congruences is not
/// generally a congruence, so it lives here rather than in [`Partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn from_partition(p: &Partition) -> Relation {
        let n = p.len();
        let mut bits = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                bits[a * n + b] = p.same(a, b);
            }
        }
        Relation { n, bits }
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    /// Relational product: `(a, c)` whenever some `b` has
    /// `(a, b) in self` and `(b, c) in other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let n = self.n;
        let mut bits = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                if self.contains(a, b) {
                    for c in 0..n {
                        if other.contains(b, c) {
                            bits[a * n + c] = true;
                        }
                    }
                }
            }
        }
        Relation { n, bits }
    }
}

/// Relational product of two partitions.
pub fn compose(a: &Partition, b: &Partition) -> Relation {
    Relation::from_partition(a).compose(&Relation::from_partition(b))
}

/// The least congruence whose quotient is a semilattice. Starting from
/// the identity partition, the current quotient is tested against the
/// semilattice base; each failing instance forces a merge of the two
/// offending quotient blocks, after which the partition is re-closed
/// under the operations. Every merge is forced, so the fixpoint is the
/// replica; the all partition bounds the iteration.
pub fn semilattice_replica(alg: &FiniteAlgebra) -> Result<Partition, CongruenceError> {
    let base = semilattice_base(alg.signature())?;
    let mut part = Partition::identity(alg.size());
    loop {
        let (quot, _) = alg.quotient(&part)?;
        match quot.satisfies_all(&base)? {
            Verdict::Holds => return Ok(part),
            Verdict::Fails { formula, witness } => {
                let id = &base.identities[formula];
                let l = quot.eval(&id.lhs, &witness)?;
                let r = quot.eval(&id.rhs, &witness)?;
                debug_assert_ne!(l, r);
                let blocks = part.blocks();
                let mut uf = UnionFind::from_partition(&part);
                uf.union(blocks[l][0], blocks[r][0]);
                close_under_operations(alg, &mut uf);
                part = uf.into_partition();
            }
        }
    }
}

/// Every congruence of the algebra, in restricted-growth-string order.
/// Guarded to carriers of size at most [`ALL_CONGRUENCES_SIZE_LIMIT`].
pub fn all_congruences(alg: &FiniteAlgebra) -> Result<Vec<Partition>, CongruenceError> {
    let n = alg.size();
    if n > ALL_CONGRUENCES_SIZE_LIMIT {
        return Err(CongruenceError::SizeLimit(n, ALL_CONGRUENCES_SIZE_LIMIT));
    }
    Ok(all_partitions(n)
        .into_iter()
        .filter(|p| is_congruence(alg, p))
        .collect())
}

/// All partitions of `{0..n-1}` as restricted growth strings, in
/// lexicographic order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let mut first = BTreeMap::new();
        let mut repr = vec![0usize; n];
        for e in 0..n {
            repr[e] = *first.entry(rgs[e]).or_insert(e);
        }
        out.push(Partition { repr });
        // next RGS: increment rightmost position that can still grow
        let mut k = n;
        loop {
            if k <= 1 {
                return out;
            }
            k -= 1;
            let max_prefix = rgs[..k].iter().copied().max().unwrap_or(0);
            if rgs[k] <= max_prefix {
                rgs[k] += 1;
                for slot in rgs.iter_mut().skip(k + 1) {
                    *slot = 0;
                }
                break;
            }
            rgs[k] = 0;
        }
    }
}
