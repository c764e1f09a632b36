//! Construction of semilattice sums: Płonka sums from semilattice-ordered
//! systems, Lallement sums from extension data (binary type only), strict
//! Lallement sums derived from right units, and free semilattices.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{
    parse_algebra_block, parse_signature_block, AlgebraError, FiniteAlgebra, LineCursor,
};
use crate::congruence::{CongruenceError, Partition};
use crate::equation::{semilattice_base, EquationError};
use crate::maltsev::{decompose, DecomposedBlock, Decomposition};
use crate::signature::Signature;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SumError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error("the base algebra is not a semilattice")]
    NotASemilattice,
    #[error("expected {expected} summands, got {got}")]
    WrongSummandCount { expected: usize, got: usize },
    #[error("summand {0} uses a different signature")]
    SummandSignature(usize),
    #[error("map {r}->{s} given for a pair that is not r >= s")]
    NotComparable { r: usize, s: usize },
    #[error("missing map {r}->{s}")]
    MissingMap { r: usize, s: usize },
    #[error("map {r}->{s} has wrong length or entries out of range")]
    BadMap { r: usize, s: usize },
    #[error("map {s}->{s} must be the identity")]
    NotIdentityMap { s: usize },
    #[error("map {r}->{s} is not a homomorphism: sym `{sym}`, args {args:?}")]
    NotHomomorphism { r: usize, s: usize, sym: String, args: Vec<usize> },
    #[error("maps are not functorial at {r}>={s}>={u}, element {element}")]
    NotFunctorial { r: usize, s: usize, u: usize, element: usize },
    #[error("Lallement sums require a purely binary signature")]
    NotBinaryType,
    #[error("extension for `{sym}` at summand {s} does not contain the summand")]
    ExtensionMismatch { sym: String, s: usize },
    #[error("images multiply outside the target summand: sym `{sym}`, {s}*{t}, elements a={a} b={b} give {value}")]
    ProductEscapes { sym: String, s: usize, t: usize, a: usize, b: usize, value: usize },
    #[error("coherence fails: sym `{sym}`, {s}*{t} down to {u}, elements a={a} b={b}")]
    CoherenceFailure { sym: String, s: usize, t: usize, u: usize, a: usize, b: usize },
    #[error("element {unit} is not a right unit for `{sym}` in summand {s}: fails at {a}")]
    UnitLawFailure { sym: String, s: usize, unit: usize, a: usize },
    #[error("no unit given for `{sym}` in summand {s}")]
    MissingUnit { sym: String, s: usize },
    #[error("composition law fails for `{sym}` at blocks {s},{t} with unit block {u}: a={a} b={b}")]
    ConstFailure { sym: String, s: usize, t: usize, u: usize, a: usize, b: usize },
    #[error("derived sum does not reproduce the audited algebra")]
    RebuildMismatch,
    #[error("free semilattice limited to {1} generators, got {0}")]
    TooManyGenerators(usize, usize),
    #[error("generator names must be nonempty and distinct")]
    BadGenerators,
    #[error("malformed .sum input: {0}")]
    BadFormat(String),
}

/// Product of two elements in a validated Omega-semilattice, via the
/// first symbol of arity >= 2.
pub(crate) fn sl_product(s: &FiniteAlgebra, a: usize, b: usize) -> usize {
    let (si, sym) = s
        .signature()
        .symbols()
        .iter()
        .enumerate()
        .find(|(_, sym)| sym.arity >= 2)
        .expect("semilattice signature is plural");
    let mut args = vec![b; sym.arity];
    args[0] = a;
    s.op(si, &args)
}

fn check_semilattice(s: &FiniteAlgebra) -> Result<(), SumError> {
    let base = semilattice_base(s.signature())?;
    if !s.satisfies_all(&base)?.holds() {
        return Err(SumError::NotASemilattice);
    }
    Ok(())
}

/// A semilattice-ordered system: summands indexed by the elements of a
/// semilattice `S` and a homomorphism `A_r -> A_s` for every comparable
/// pair `r >= s` (where `r >= s` means `r*s = s`). The identity maps at
/// `(s, s)` are implicit; listing one is allowed but it must be the
/// identity.
#[derive(Debug, Clone)]
pub struct PlonkaSystem {
    pub semilattice: FiniteAlgebra,
    pub summands: Vec<FiniteAlgebra>,
    pub maps: BTreeMap<(usize, usize), Vec<usize>>,
}

impl PlonkaSystem {
    fn map_image(&self, r: usize, s: usize, a: usize) -> usize {
        if r == s {
            a
        } else {
            self.maps[&(r, s)][a]
        }
    }

    fn geq(&self, r: usize, s: usize) -> bool {
        sl_product(&self.semilattice, r, s) == s
    }

    pub fn validate(&self) -> Result<(), SumError> {
        check_semilattice(&self.semilattice)?;
        let k = self.semilattice.size();
        if self.summands.len() != k {
            return Err(SumError::WrongSummandCount { expected: k, got: self.summands.len() });
        }
        for (i, a) in self.summands.iter().enumerate() {
            if a.signature() != self.semilattice.signature() {
                return Err(SumError::SummandSignature(i));
            }
        }
        for (&(r, s), map) in &self.maps {
            if r >= k || s >= k || !self.geq(r, s) {
                return Err(SumError::NotComparable { r, s });
            }
            if map.len() != self.summands[r].size()
                || map.iter().any(|&v| v >= self.summands[s].size())
            {
                return Err(SumError::BadMap { r, s });
            }
            if r == s && map.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(SumError::NotIdentityMap { s });
            }
        }
        for r in 0..k {
            for s in 0..k {
                if r != s && self.geq(r, s) && !self.maps.contains_key(&(r, s)) {
                    return Err(SumError::MissingMap { r, s });
                }
            }
        }
        // every map is a homomorphism
        for &(r, s) in self.maps.keys() {
            if r == s {
                continue;
            }
            let ar = &self.summands[r];
            let as_ = &self.summands[s];
            for (si, sym) in ar.signature().symbols().iter().enumerate() {
                let mut args = vec![0usize; sym.arity];
                loop {
                    let image: Vec<usize> =
                        args.iter().map(|&a| self.map_image(r, s, a)).collect();
                    if self.map_image(r, s, ar.op(si, &args)) != as_.op(si, &image) {
                        return Err(SumError::NotHomomorphism {
                            r,
                            s,
                            sym: sym.name.clone(),
                            args,
                        });
                    }
                    if !crate::algebra::next_assignment(&mut args, ar.size()) {
                        break;
                    }
                }
            }
        }
        // functoriality along every chain r >= s >= u
        for r in 0..k {
            for s in 0..k {
                if !self.geq(r, s) {
                    continue;
                }
                for u in 0..k {
                    if !self.geq(s, u) {
                        continue;
                    }
                    for a in 0..self.summands[r].size() {
                        let through = self.map_image(s, u, self.map_image(r, s, a));
                        if through != self.map_image(r, u, a) {
                            return Err(SumError::NotFunctorial { r, s, u, element: a });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn offsets(summands: &[FiniteAlgebra]) -> Vec<usize> {
    let mut out = Vec::with_capacity(summands.len());
    let mut acc = 0;
    for a in summands {
        out.push(acc);
        acc += a.size();
    }
    out
}

fn sum_decomposition(
    name: &str,
    semilattice: &FiniteAlgebra,
    summands: &[FiniteAlgebra],
) -> Decomposition {
    let offs = offsets(summands);
    let total: usize = summands.iter().map(|a| a.size()).sum();
    let mut block_map = vec![0usize; total];
    let mut blocks = Vec::with_capacity(summands.len());
    let mut block_elems = Vec::with_capacity(summands.len());
    for (s, a) in summands.iter().enumerate() {
        let elements: Vec<usize> = (0..a.size()).map(|l| offs[s] + l).collect();
        for &e in &elements {
            block_map[e] = s;
        }
        block_elems.push(elements.clone());
        blocks.push(DecomposedBlock {
            algebra: a.clone().with_name(format!("{name}[{s}]")),
            elements,
        });
    }
    Decomposition {
        replica: Partition::from_blocks(total, &block_elems).expect("blocks partition the carrier"),
        quotient: semilattice.clone(),
        block_map,
        blocks,
    }
}

/// Builds the Płonka sum of a validated system: the operations first
/// push every argument down to the product of their summand indices,
/// then apply the summand operation there.
pub fn plonka_sum(sys: &PlonkaSystem) -> Result<(FiniteAlgebra, Decomposition), SumError> {
    sys.validate()?;
    let offs = offsets(&sys.summands);
    let total: usize = sys.summands.iter().map(|a| a.size()).sum();
    let block_of = |e: usize| -> (usize, usize) {
        let s = (0..sys.summands.len())
            .rfind(|&s| offs[s] <= e)
            .expect("element belongs to a summand");
        (s, e - offs[s])
    };
    let name = format!("plonka({})", sys.semilattice.name());
    let sum = FiniteAlgebra::from_fn(
        name.clone(),
        sys.semilattice.signature().clone(),
        total,
        |sym, args| {
            let parts: Vec<(usize, usize)> = args.iter().map(|&e| block_of(e)).collect();
            let sym_index = sys.semilattice.signature().index_of(sym).expect("symbol");
            let s_args: Vec<usize> = parts.iter().map(|&(s, _)| s).collect();
            let target = sys.semilattice.op(sym_index, &s_args);
            let local: Vec<usize> = parts
                .iter()
                .map(|&(s, a)| sys.map_image(s, target, a))
                .collect();
            offs[target] + sys.summands[target].op(sym_index, &local)
        },
    )?;
    let dec = sum_decomposition(&name, &sys.semilattice, &sys.summands);
    Ok((sum, dec))
}

/// A single-operation extension: a groupoid table on `{0..size-1}`
/// whose restriction to the first elements is a given summand reduct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub size: usize,
    pub table: Vec<usize>,
}

impl Extension {
    fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }
}

/// Data for a Lallement sum over a purely binary signature: per symbol
/// and summand an extension of the summand's reduct, and per symbol and
/// comparable pair `t <= s` a homomorphism `A_s -> E_t`. Embeddings at
/// `(s, s)` are implicit. Missing extensions default to the summand
/// itself (the strict case).
#[derive(Debug, Clone)]
pub struct LallementData {
    pub semilattice: FiniteAlgebra,
    pub summands: Vec<FiniteAlgebra>,
    pub extensions: BTreeMap<(usize, usize), Extension>,
    pub maps: BTreeMap<(usize, usize, usize), Vec<usize>>,
}

impl LallementData {
    fn extension(&self, sym: usize, s: usize) -> Extension {
        self.extensions.get(&(sym, s)).cloned().unwrap_or_else(|| Extension {
            size: self.summands[s].size(),
            table: self.summands[s].table(sym).to_vec(),
        })
    }

    fn map_image(&self, sym: usize, s: usize, t: usize, a: usize) -> usize {
        if s == t {
            a
        } else {
            self.maps[&(sym, s, t)][a]
        }
    }

    fn leq(&self, t: usize, s: usize) -> bool {
        sl_product(&self.semilattice, s, t) == t
    }

    pub fn is_strict(&self) -> bool {
        (0..self.semilattice.signature().symbols().len()).all(|sym| {
            (0..self.summands.len()).all(|s| self.extension(sym, s).size == self.summands[s].size())
        })
    }

    pub fn validate(&self) -> Result<(), SumError> {
        let sig = self.semilattice.signature();
        if sig.symbols().iter().any(|sym| sym.arity != 2) {
            return Err(SumError::NotBinaryType);
        }
        check_semilattice(&self.semilattice)?;
        let k = self.semilattice.size();
        if self.summands.len() != k {
            return Err(SumError::WrongSummandCount { expected: k, got: self.summands.len() });
        }
        for (i, a) in self.summands.iter().enumerate() {
            if a.signature() != sig {
                return Err(SumError::SummandSignature(i));
            }
        }
        // extensions contain the summand reducts
        for ((sym, s), ext) in &self.extensions {
            let summand = &self.summands[*s];
            let name = &sig.symbols()[*sym].name;
            let m = summand.size();
            let bad = ext.size < m
                || ext.table.len() != ext.size * ext.size
                || ext.table.iter().any(|&v| v >= ext.size)
                || (0..m).any(|a| (0..m).any(|b| ext.op(a, b) != summand.op(*sym, &[a, b])));
            if bad {
                return Err(SumError::ExtensionMismatch { sym: name.clone(), s: *s });
            }
        }
        // map domains: exactly the comparable pairs, embeddings implicit
        for (&(sym, s, t), map) in &self.maps {
            if sym >= sig.symbols().len() || s >= k || t >= k || !self.leq(t, s) {
                return Err(SumError::NotComparable { r: s, s: t });
            }
            let ext = self.extension(sym, t);
            if map.len() != self.summands[s].size() || map.iter().any(|&v| v >= ext.size) {
                return Err(SumError::BadMap { r: s, s: t });
            }
            if s == t && map.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(SumError::NotIdentityMap { s });
            }
        }
        for sym in 0..sig.symbols().len() {
            for s in 0..k {
                for t in 0..k {
                    if t != s && self.leq(t, s) && !self.maps.contains_key(&(sym, s, t)) {
                        return Err(SumError::MissingMap { r: s, s: t });
                    }
                }
            }
        }
        // each map is a homomorphism into the extension
        for &(sym, s, t) in self.maps.keys() {
            if s == t {
                continue;
            }
            let summand = &self.summands[s];
            let ext = self.extension(sym, t);
            let name = &sig.symbols()[sym].name;
            for a in 0..summand.size() {
                for b in 0..summand.size() {
                    let lhs = self.map_image(sym, s, t, summand.op(sym, &[a, b]));
                    let rhs = ext.op(self.map_image(sym, s, t, a), self.map_image(sym, s, t, b));
                    if lhs != rhs {
                        return Err(SumError::NotHomomorphism {
                            r: s,
                            s: t,
                            sym: name.clone(),
                            args: vec![a, b],
                        });
                    }
                }
            }
        }
        // conditions (2) and (3): images multiply into the target
        // summand, coherently with every further descent
        for sym in 0..sig.symbols().len() {
            let name = &sig.symbols()[sym].name;
            for s in 0..k {
                for t in 0..k {
                    let st = sl_product(&self.semilattice, s, t);
                    let ext_st = self.extension(sym, st);
                    for a in 0..self.summands[s].size() {
                        for b in 0..self.summands[t].size() {
                            let value = ext_st.op(
                                self.map_image(sym, s, st, a),
                                self.map_image(sym, t, st, b),
                            );
                            if value >= self.summands[st].size() {
                                return Err(SumError::ProductEscapes {
                                    sym: name.clone(),
                                    s,
                                    t,
                                    a,
                                    b,
                                    value,
                                });
                            }
                            for u in 0..k {
                                if !self.leq(u, st) {
                                    continue;
                                }
                                let ext_u = self.extension(sym, u);
                                let lhs = self.map_image(sym, st, u, value);
                                let rhs = ext_u.op(
                                    self.map_image(sym, s, u, a),
                                    self.map_image(sym, t, u, b),
                                );
                                if lhs != rhs {
                                    return Err(SumError::CoherenceFailure {
                                        sym: name.clone(),
                                        s,
                                        t,
                                        u,
                                        a,
                                        b,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the semilattice sum determined by Lallement data:
/// `a_s * b_t = phi(a_s) * phi(b_t)` computed in the extension at `s*t`.
/// The boolean result reports strictness (every extension equal to its
/// summand).
pub fn lallement_sum(
    data: &LallementData,
) -> Result<(FiniteAlgebra, Decomposition, bool), SumError> {
    data.validate()?;
    let offs = offsets(&data.summands);
    let total: usize = data.summands.iter().map(|a| a.size()).sum();
    let sig = data.semilattice.signature().clone();
    let block_of = |e: usize| -> (usize, usize) {
        let s = (0..data.summands.len())
            .rfind(|&s| offs[s] <= e)
            .expect("element belongs to a summand");
        (s, e - offs[s])
    };
    let name = format!("lallement({})", data.semilattice.name());
    let sum = FiniteAlgebra::from_fn(name.clone(), sig.clone(), total, |sym, args| {
        let sym = sig.index_of(sym).expect("symbol");
        let (s, a) = block_of(args[0]);
        let (t, b) = block_of(args[1]);
        let st = sl_product(&data.semilattice, s, t);
        let ext = data.extension(sym, st);
        let local = ext.op(
            data.map_image(sym, s, st, a),
            data.map_image(sym, t, st, b),
        );
        offs[st] + local
    })?;
    let dec = sum_decomposition(&name, &data.semilattice, &data.summands);
    Ok((sum, dec, data.is_strict()))
}

/// Right units per symbol and summand, by summand index of a decomposition.
#[derive(Debug, Clone, Default)]
pub struct UnitData {
    pub units: BTreeMap<(usize, usize), usize>,
}

/// For each binary symbol, the elements `e` with `a * e = a` for all `a`.
pub fn find_right_units(alg: &FiniteAlgebra) -> BTreeMap<String, Vec<usize>> {
    let mut out = BTreeMap::new();
    for (si, sym) in alg.signature().symbols().iter().enumerate() {
        if sym.arity != 2 {
            continue;
        }
        let units: Vec<usize> = (0..alg.size())
            .filter(|&e| (0..alg.size()).all(|a| alg.op(si, &[a, e]) == a))
            .collect();
        out.insert(sym.name.clone(), units);
    }
    out
}

/// Audits an existing algebra of purely binary type as a strict
/// Lallement sum over its replica decomposition, with the maps
/// `a -> a * e_t` derived from the given right units. Verifies the unit
/// laws and the composition law
/// `(a_s * b_t) * e_u = (a_s * e_u) * (b_t * e_u)` for all `u <= s*t`,
/// then rebuilds the sum and checks it reproduces the input (up to the
/// canonical renumbering of the carrier by blocks).
///
/// Units are indexed by summand position in the replica decomposition
/// and given as local elements of the summand.
pub fn strict_lallement_from_units(
    alg: &FiniteAlgebra,
    units: &UnitData,
) -> Result<(FiniteAlgebra, Decomposition), SumError> {
    let sig = alg.signature().clone();
    if sig.symbols().iter().any(|sym| sym.arity != 2) {
        return Err(SumError::NotBinaryType);
    }
    let dec = decompose(alg)?;
    let k = dec.blocks.len();
    // unit laws inside each summand
    let mut unit_global: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (si, sym) in sig.symbols().iter().enumerate() {
        for (s, block) in dec.blocks.iter().enumerate() {
            let &local = units
                .units
                .get(&(si, s))
                .ok_or_else(|| SumError::MissingUnit { sym: sym.name.clone(), s })?;
            if local >= block.elements.len() {
                return Err(SumError::MissingUnit { sym: sym.name.clone(), s });
            }
            let e = block.elements[local];
            for &a in &block.elements {
                if alg.op(si, &[a, e]) != a {
                    return Err(SumError::UnitLawFailure {
                        sym: sym.name.clone(),
                        s,
                        unit: e,
                        a,
                    });
                }
            }
            unit_global.insert((si, s), e);
        }
    }
    // composition law (with witnesses in original element labels)
    for (si, sym) in sig.symbols().iter().enumerate() {
        for s in 0..k {
            for t in 0..k {
                let st = dec.quotient.op(si, &[s, t]);
                for u in 0..k {
                    if dec.quotient.op(si, &[st, u]) != u {
                        continue;
                    }
                    let e = unit_global[&(si, u)];
                    for &a in &dec.blocks[s].elements {
                        for &b in &dec.blocks[t].elements {
                            let ab = alg.op(si, &[a, b]);
                            let lhs = alg.op(si, &[ab, e]);
                            let rhs =
                                alg.op(si, &[alg.op(si, &[a, e]), alg.op(si, &[b, e])]);
                            if lhs != rhs {
                                return Err(SumError::ConstFailure {
                                    sym: sym.name.clone(),
                                    s,
                                    t,
                                    u,
                                    a,
                                    b,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    // derive the maps and rebuild
    let global_to_local: BTreeMap<usize, (usize, usize)> = dec
        .blocks
        .iter()
        .enumerate()
        .flat_map(|(s, b)| {
            b.elements
                .iter()
                .enumerate()
                .map(move |(local, &e)| (e, (s, local)))
        })
        .collect();
    let mut maps = BTreeMap::new();
    for si in 0..sig.symbols().len() {
        for s in 0..k {
            for t in 0..k {
                if t == s || dec.quotient.op(si, &[s, t]) != t {
                    continue;
                }
                let e = unit_global[&(si, t)];
                let map: Vec<usize> = dec.blocks[s]
                    .elements
                    .iter()
                    .map(|&a| {
                        let img = alg.op(si, &[a, e]);
                        global_to_local[&img].1
                    })
                    .collect();
                maps.insert((si, s, t), map);
            }
        }
    }
    let data = LallementData {
        semilattice: dec.quotient.clone(),
        summands: dec.blocks.iter().map(|b| b.algebra.clone()).collect(),
        extensions: BTreeMap::new(),
        maps,
    };
    let (sum, sum_dec, strict) = lallement_sum(&data)?;
    debug_assert!(strict);
    // the rebuilt sum must agree with the input under block renumbering
    let new_to_old: Vec<usize> = dec
        .blocks
        .iter()
        .flat_map(|b| b.elements.iter().copied())
        .collect();
    let old_to_new: BTreeMap<usize, usize> =
        new_to_old.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    for si in 0..sig.symbols().len() {
        for x in 0..sum.size() {
            for y in 0..sum.size() {
                let expected = old_to_new[&alg.op(si, &[new_to_old[x], new_to_old[y]])];
                if sum.op(si, &[x, y]) != expected {
                    return Err(SumError::RebuildMismatch);
                }
            }
        }
    }
    Ok((sum, sum_dec))
}

/// The free semilattice on the given generators: all nonempty subsets
/// under union, ordered by size then lexicographically. Every signature
/// symbol acts as the union of its arguments' labels. Returns the
/// algebra together with the subset label of each element.
pub fn free_semilattice(
    sig: &Signature,
    names: &[String],
) -> Result<(FiniteAlgebra, Vec<Vec<String>>), SumError> {
    const MAX_GENERATORS: usize = 20;
    if names.len() > MAX_GENERATORS {
        return Err(SumError::TooManyGenerators(names.len(), MAX_GENERATORS));
    }
    if names.is_empty()
        || names.iter().any(String::is_empty)
        || (1..names.len()).any(|i| names[..i].contains(&names[i]))
    {
        return Err(SumError::BadGenerators);
    }
    let k = names.len();
    let mut masks: Vec<u32> = (1..(1u32 << k)).collect();
    masks.sort_by_key(|m| {
        let indices: Vec<usize> = (0..k).filter(|i| m & (1 << i) != 0).collect();
        (m.count_ones(), indices)
    });
    let index_of: BTreeMap<u32, usize> =
        masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let alg = FiniteAlgebra::from_fn(
        format!("freesl{k}"),
        sig.clone(),
        masks.len(),
        |_, args| {
            let union = args.iter().fold(0u32, |acc, &e| acc | masks[e]);
            index_of[&union]
        },
    )?;
    let labels: Vec<Vec<String>> = masks
        .iter()
        .map(|&m| {
            (0..k)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| names[i].clone())
                .collect()
        })
        .collect();
    Ok((alg, labels))
}

/// Parsed contents of a `.sum` file.
#[derive(Debug, Clone)]
pub struct SumFile {
    pub signature: Signature,
    pub semilattice: FiniteAlgebra,
    pub summands: Vec<FiniteAlgebra>,
    pub plonka_maps: Vec<(usize, usize, Vec<usize>)>,
    pub lallement_maps: Vec<(String, usize, usize, Vec<usize>)>,
    pub units: Vec<(String, usize, usize)>,
    pub extensions: Vec<(String, usize, Extension)>,
}

/// Parses a `.sum` file: a signature block, the base semilattice as an
/// algebra block, then `summand s` + algebra block per summand, and any
/// of `map r s : ...`, `map[sym] s t : ...`, `unit[sym] s = e`, and
/// `extension[sym] s` + algebra block.
pub fn parse_sum_file(text: &str) -> Result<SumFile, SumError> {
    let mut cur = LineCursor::new(text);
    let signature = parse_signature_block(&mut cur)?;
    let semilattice = parse_algebra_block(&mut cur, &signature)?;
    let mut summands: Vec<(usize, FiniteAlgebra)> = Vec::new();
    let mut plonka_maps = Vec::new();
    let mut lallement_maps = Vec::new();
    let mut units = Vec::new();
    let mut extensions = Vec::new();

    while let Some(line) = cur.peek() {
        if let Some(rest) = line.strip_prefix("summand") {
            let s: usize = rest
                .trim()
                .parse()
                .map_err(|_| SumError::BadFormat(format!("bad summand index in `{line}`")))?;
            cur.next();
            let alg = parse_algebra_block(&mut cur, &signature)?;
            summands.push((s, alg));
        } else if let Some(rest) = line.strip_prefix("extension[") {
            let (sym, rest) = rest
                .split_once(']')
                .ok_or_else(|| SumError::BadFormat(line.to_string()))?;
            let s: usize = rest
                .trim()
                .parse()
                .map_err(|_| SumError::BadFormat(format!("bad summand index in `{line}`")))?;
            cur.next();
            let ext_sig = Signature::new(vec![(sym.to_string(), 2usize)])
                .map_err(AlgebraError::from)?;
            let alg = parse_algebra_block(&mut cur, &ext_sig)?;
            extensions.push((
                sym.to_string(),
                s,
                Extension { size: alg.size(), table: alg.table(0).to_vec() },
            ));
        } else if let Some(rest) = line.strip_prefix("map[") {
            let (sym, rest) = rest
                .split_once(']')
                .ok_or_else(|| SumError::BadFormat(line.to_string()))?;
            let (pair, images) = rest
                .split_once(':')
                .ok_or_else(|| SumError::BadFormat(line.to_string()))?;
            let (s, t) = parse_index_pair(pair).ok_or_else(|| SumError::BadFormat(line.to_string()))?;
            lallement_maps.push((sym.to_string(), s, t, parse_images(images, line)?));
            cur.next();
        } else if let Some(rest) = line.strip_prefix("map") {
            let (pair, images) = rest
                .split_once(':')
                .ok_or_else(|| SumError::BadFormat(line.to_string()))?;
            let (r, s) = parse_index_pair(pair).ok_or_else(|| SumError::BadFormat(line.to_string()))?;
            plonka_maps.push((r, s, parse_images(images, line)?));
            cur.next();
        } else if let Some(rest) = line.strip_prefix("unit[") {
            let (sym, rest) = rest
                .split_once(']')
                .ok_or_else(|| SumError::BadFormat(line.to_string()))?;
            let (s, e) = rest
                .split_once('=')
                .and_then(|(s, e)| Some((s.trim().parse().ok()?, e.trim().parse().ok()?)))
                .ok_or_else(|| SumError::BadFormat(line.to_string()))?;
            units.push((sym.to_string(), s, e));
            cur.next();
        } else {
            return Err(SumError::BadFormat(format!("unexpected line `{line}`")));
        }
    }

    let expected = semilattice.size();
    let mut ordered: Vec<Option<FiniteAlgebra>> = vec![None; expected];
    let got = summands.len();
    for (s, alg) in summands {
        if s >= expected || ordered[s].is_some() {
            return Err(SumError::BadFormat(format!("summand {s} repeated or out of range")));
        }
        ordered[s] = Some(alg);
    }
    let summands: Vec<FiniteAlgebra> = ordered
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(SumError::WrongSummandCount { expected, got })?;
    Ok(SumFile {
        signature,
        semilattice,
        summands,
        plonka_maps,
        lallement_maps,
        units,
        extensions,
    })
}

fn parse_index_pair(text: &str) -> Option<(usize, usize)> {
    let mut it = text.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

fn parse_images(text: &str, line: &str) -> Result<Vec<usize>, SumError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| SumError::BadFormat(format!("bad image in `{line}`")))
        })
        .collect()
}

impl SumFile {
    pub fn into_plonka(self) -> Result<PlonkaSystem, SumError> {
        if !self.lallement_maps.is_empty() || !self.units.is_empty() || !self.extensions.is_empty()
        {
            return Err(SumError::BadFormat(
                "per-symbol maps, units or extensions are not Płonka system data".to_string(),
            ));
        }
        let maps = self
            .plonka_maps
            .into_iter()
            .map(|(r, s, map)| ((r, s), map))
            .collect();
        Ok(PlonkaSystem {
            semilattice: self.semilattice,
            summands: self.summands,
            maps,
        })
    }

    /// Plain `map r s` lines are replicated for every symbol.
    pub fn into_lallement(self) -> Result<LallementData, SumError> {
        let sig = self.signature.clone();
        let sym_index = |name: &str| -> Result<usize, SumError> {
            sig.index_of(name)
                .ok_or_else(|| SumError::BadFormat(format!("unknown symbol `{name}`")))
        };
        let mut maps: BTreeMap<(usize, usize, usize), Vec<usize>> = BTreeMap::new();
        for (r, s, map) in self.plonka_maps {
            for sym in 0..sig.symbols().len() {
                maps.insert((sym, r, s), map.clone());
            }
        }
        for (sym, s, t, map) in self.lallement_maps {
            maps.insert((sym_index(&sym)?, s, t), map);
        }
        let mut extensions = BTreeMap::new();
        for (sym, s, ext) in self.extensions {
            extensions.insert((sym_index(&sym)?, s), ext);
        }
        Ok(LallementData {
            semilattice: self.semilattice,
            summands: self.summands,
            extensions,
            maps,
        })
    }

    pub fn unit_data(&self, dec_blocks: usize) -> Result<UnitData, SumError> {
        let mut units = UnitData::default();
        for (sym, s, e) in &self.units {
            let si = self
                .signature
                .index_of(sym)
                .ok_or_else(|| SumError::BadFormat(format!("unknown symbol `{sym}`")))?;
            if *s >= dec_blocks {
                return Err(SumError::BadFormat(format!("unit for out-of-range summand {s}")));
            }
            units.units.insert((si, *s), *e);
        }
        Ok(units)
    }
}

/// A uniformly chosen parent array for a rooted tree on `1..=max_nodes`
/// nodes; node 0 is the root.
fn random_tree(rng: &mut impl Rng, max_nodes: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=max_nodes.max(1));
    let mut parent = vec![0usize; k];
    for node in 1..k {
        parent[node] = rng.gen_range(0..node);
    }
    parent
}

/// The meet semilattice of a rooted tree: node 0 is the bottom and the
/// meet of two nodes is their deepest common ancestor.
pub fn tree_semilattice(sig: &Signature, parent: &[usize]) -> FiniteAlgebra {
    let k = parent.len();
    let mut depth = vec![0usize; k];
    for node in 1..k {
        depth[node] = depth[parent[node]] + 1;
    }
    let ancestor = |mut a: usize, mut b: usize| -> usize {
        while depth[a] > depth[b] {
            a = parent[a];
        }
        while depth[b] > depth[a] {
            b = parent[b];
        }
        while a != b {
            a = parent[a];
            b = parent[b];
        }
        a
    };
    FiniteAlgebra::from_fn("tree-sl", sig.clone(), k, |_, args| {
        args.iter().skip(1).fold(args[0], |a, &b| ancestor(a, b))
    })
    .expect("tree semilattice tables are total")
}

/// A pseudorandom tree semilattice (see [`tree_semilattice`]).
pub fn random_tree_semilattice(
    rng: &mut impl Rng,
    sig: &Signature,
    max_nodes: usize,
) -> FiniteAlgebra {
    tree_semilattice(sig, &random_tree(rng, max_nodes))
}

/// Random summand sizes, one per semilattice element, totalling at most
/// `max_total`.
pub(crate) fn random_block_sizes(rng: &mut impl Rng, k: usize, max_total: usize) -> Vec<usize> {
    let mut sizes = vec![1usize; k];
    let mut budget = max_total.saturating_sub(k);
    for size in sizes.iter_mut() {
        if budget == 0 {
            break;
        }
        let extra = rng.gen_range(0..=budget.min(3));
        *size += extra;
        budget -= extra;
    }
    sizes
}

/// A pseudorandom Płonka system of left-zero bands over `{mul/2}` with
/// total carrier size at most `max_total`. The base semilattice is a
/// tree order, maps along tree edges are arbitrary random functions
/// (any function between left-zero bands is a homomorphism), and maps
/// between distant pairs are composites along the unique tree path, so
/// the system is functorial by construction.
pub fn random_left_zero_plonka_system(rng: &mut impl Rng, max_total: usize) -> PlonkaSystem {
    let sig = Signature::parse("mul 2").expect("valid signature");
    let parent = random_tree(rng, max_total.min(4).max(1));
    let semilattice = tree_semilattice(&sig, &parent);
    let k = semilattice.size();
    let sizes = random_block_sizes(rng, k, max_total);
    let summands: Vec<FiniteAlgebra> = sizes
        .iter()
        .enumerate()
        .map(|(s, &n)| {
            FiniteAlgebra::from_fn(format!("lz{s}"), sig.clone(), n, |_, args| args[0])
                .expect("left-zero tables are total")
        })
        .collect();
    let geq = |r: usize, s: usize| sl_product(&semilattice, r, s) == s;
    let mut edge_maps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for node in 1..k {
        let map: Vec<usize> = (0..sizes[node])
            .map(|_| rng.gen_range(0..sizes[parent[node]]))
            .collect();
        edge_maps.insert(node, map);
    }
    let mut maps: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for r in 0..k {
        for s in 0..k {
            if r == s || !geq(r, s) {
                continue;
            }
            // compose along the unique descending tree path
            let mut map: Vec<usize> = (0..sizes[r]).collect();
            let mut at = r;
            while at != s {
                let edge = &edge_maps[&at];
                map = map.iter().map(|&a| edge[a]).collect();
                at = parent[at];
            }
            maps.insert((r, s), map);
        }
    }
    PlonkaSystem {
        semilattice,
        summands,
        maps,
    }
}
