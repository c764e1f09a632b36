//! Bounded model enumeration and separating-model search: backtracking
//! over operation tables under axiom constraints, generation of
//! semilattice sums of left-zero bands, counterexample search, and the
//! band census.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use itertools::Itertools;
use rand::Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra, Verdict};
use crate::congruence::CongruenceError;
use crate::equation::{semilattice_base, AxiomSet, EquationError, Identity};
use crate::maltsev::{decompose, in_product_with_s};
use crate::signature::Signature;
use crate::sums::{random_block_sizes, random_tree_semilattice, sl_product, SumError};
use crate::term::Term;

/// Isomorphism deduplication is exact and exhaustive, so it is limited
/// to this carrier size.
pub const DEDUP_SIZE_LIMIT: usize = 5;

/// Total-size guard for [`enumerate_lz_sums`].
pub const LZ_SUM_SIZE_LIMIT: usize = 8;

/// Size guard for [`band_census`].
pub const BAND_CENSUS_SIZE_LIMIT: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Sum(#[from] SumError),
    #[error("bad search specification: {0}")]
    BadSpec(String),
    #[error("size {0} exceeds the limit {1} for this search")]
    SizeGuard(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dedup {
    None,
    /// Keep only tables that are lexicographically minimal among all
    /// carrier permutations; exact for sizes up to [`DEDUP_SIZE_LIMIT`].
    UpToIso,
}

/// A bounded enumeration problem over raw operation tables.
#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub signature: Signature,
    pub sizes: RangeInclusive<usize>,
    pub constraints: AxiomSet,
    pub dedup: Dedup,
    /// Cap on completed candidate tables; exceeding it marks the
    /// outcome incomplete rather than failing.
    pub max_tables: u64,
}

impl SearchSpec {
    pub fn new(signature: Signature, sizes: RangeInclusive<usize>, constraints: AxiomSet) -> SearchSpec {
        SearchSpec {
            signature,
            sizes,
            constraints,
            dedup: Dedup::None,
            max_tables: 10_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub models: Vec<FiniteAlgebra>,
    /// Completed candidate tables examined (after pruning).
    pub examined: u64,
    /// False when the table budget ran out; models found so far are kept.
    pub complete: bool,
}

/// Terms compiled against a signature and variable list, evaluable over
/// partially filled tables.
enum PTerm {
    Var(usize),
    App { sym: usize, args: Vec<PTerm> },
}

fn compile(t: &Term, vars: &[String], sig: &Signature) -> Result<PTerm, SearchError> {
    match t {
        Term::Var(name) => Ok(PTerm::Var(
            vars.iter()
                .position(|v| v == name)
                .ok_or_else(|| SearchError::BadSpec(format!("unbound variable {name}")))?,
        )),
        Term::App { sym, args } => Ok(PTerm::App {
            sym: sig
                .index_of(sym)
                .ok_or_else(|| SearchError::BadSpec(format!("unknown symbol {sym}")))?,
            args: args
                .iter()
                .map(|a| compile(a, vars, sig))
                .collect::<Result<_, _>>()?,
        }),
    }
}

fn eval_partial(tables: &[Vec<Option<usize>>], size: usize, t: &PTerm, asg: &[usize]) -> Option<usize> {
    match t {
        PTerm::Var(slot) => Some(asg[*slot]),
        PTerm::App { sym, args } => {
            let mut index = 0;
            for a in args {
                index = index * size + eval_partial(tables, size, a, asg)?;
            }
            tables[*sym][index]
        }
    }
}

struct Backtracker<'a> {
    spec: &'a SearchSpec,
    size: usize,
    tables: Vec<Vec<Option<usize>>>,
    /// (lhs, rhs, variable count) per constraint identity
    identities: Vec<(PTerm, PTerm, usize)>,
    entries: Vec<(usize, usize)>,
    models: Vec<FiniteAlgebra>,
    examined: u64,
    complete: bool,
}

impl<'a> Backtracker<'a> {
    fn consistent(&self) -> bool {
        for (lhs, rhs, nvars) in &self.identities {
            let mut asg = vec![0usize; *nvars];
            loop {
                if let (Some(l), Some(r)) = (
                    eval_partial(&self.tables, self.size, lhs, &asg),
                    eval_partial(&self.tables, self.size, rhs, &asg),
                ) {
                    if l != r {
                        return false;
                    }
                }
                if !crate::algebra::next_assignment(&mut asg, self.size) {
                    break;
                }
            }
        }
        true
    }

    fn lex_minimal(&self, alg: &FiniteAlgebra) -> bool {
        let flat: Vec<usize> = (0..self.spec.signature.symbols().len())
            .flat_map(|si| alg.table(si).to_vec())
            .collect();
        for perm in (0..self.size).permutations(self.size) {
            if perm.iter().enumerate().all(|(i, &p)| i == p) {
                continue;
            }
            let mut permuted = Vec::with_capacity(flat.len());
            for (si, sym) in self.spec.signature.symbols().iter().enumerate() {
                let mut args = vec![0usize; sym.arity];
                loop {
                    let pre: Vec<usize> = args.iter().map(|&a| inverse_at(&perm, a)).collect();
                    permuted.push(perm[alg.op(si, &pre)]);
                    if !crate::algebra::next_assignment(&mut args, self.size) {
                        break;
                    }
                }
            }
            if permuted < flat {
                return false;
            }
        }
        true
    }

    fn finish(&mut self) -> Result<bool, SearchError> {
        self.examined += 1;
        if self.examined > self.spec.max_tables {
            self.complete = false;
            return Ok(false);
        }
        let tables: Vec<Vec<usize>> = self
            .tables
            .iter()
            .map(|t| t.iter().map(|e| e.expect("table is complete")).collect())
            .collect();
        let alg = FiniteAlgebra::new(
            format!("model{}n{}", self.models.len(), self.size),
            self.spec.signature.clone(),
            self.size,
            tables,
        )?;
        if !alg.satisfies_all(&self.spec.constraints)?.holds() {
            return Ok(true);
        }
        if matches!(self.spec.dedup, Dedup::UpToIso) && !self.lex_minimal(&alg) {
            return Ok(true);
        }
        self.models.push(alg);
        Ok(true)
    }

    fn fill(&mut self, at: usize) -> Result<bool, SearchError> {
        if at == self.entries.len() {
            return self.finish();
        }
        let (sym, index) = self.entries[at];
        for value in 0..self.size {
            self.tables[sym][index] = Some(value);
            if self.consistent() && !self.fill(at + 1)? {
                self.tables[sym][index] = None;
                return Ok(false);
            }
            self.tables[sym][index] = None;
        }
        Ok(true)
    }
}

fn inverse_at(perm: &[usize], image: usize) -> usize {
    perm.iter().position(|&p| p == image).expect("bijection")
}

/// Enumerates all algebras in the spec's size range satisfying its
/// constraints, in lexicographic table order, by backtracking with
/// pruning on identity instances that are fully determined by the
/// partial tables.
pub fn enumerate_models(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    if matches!(spec.dedup, Dedup::UpToIso) && *spec.sizes.end() > DEDUP_SIZE_LIMIT {
        return Err(SearchError::SizeGuard(*spec.sizes.end(), DEDUP_SIZE_LIMIT));
    }
    if spec.constraints.signature != spec.signature {
        return Err(SearchError::BadSpec("constraint signature differs".to_string()));
    }
    let mut models = Vec::new();
    let mut examined = 0;
    let mut complete = true;
    for size in spec.sizes.clone() {
        if size == 0 {
            continue;
        }
        let identities = spec
            .constraints
            .identities
            .iter()
            .map(|id| {
                let vars = id.variables();
                Ok((
                    compile(&id.lhs, &vars, &spec.signature)?,
                    compile(&id.rhs, &vars, &spec.signature)?,
                    vars.len(),
                ))
            })
            .collect::<Result<Vec<_>, SearchError>>()?;
        let mut tables = Vec::new();
        let mut entries = Vec::new();
        for (si, sym) in spec.signature.symbols().iter().enumerate() {
            let len = size.pow(sym.arity as u32);
            tables.push(vec![None; len]);
            entries.extend((0..len).map(|i| (si, i)));
        }
        let mut bt = Backtracker {
            spec,
            size,
            tables,
            identities,
            entries,
            models: Vec::new(),
            examined: 0,
            complete: true,
        };
        bt.fill(0)?;
        examined += bt.examined;
        complete &= bt.complete;
        models.extend(bt.models);
        if !complete {
            break;
        }
    }
    Ok(SearchOutcome { models, examined, complete })
}

/// Streaming enumeration of semilattice sums of left-zero bands over a
/// given semilattice: within-block products are forced (`a*b = a`) and
/// every cross-block entry ranges over the full target block. Each
/// output is a member of the sums of left-zero bands by construction.
pub fn enumerate_lz_sums(
    semilattice: &FiniteAlgebra,
    block_sizes: &[usize],
) -> Result<LzSumIter, SearchError> {
    let sig = semilattice.signature().clone();
    if sig.symbols().len() != 1 || sig.symbols()[0].arity != 2 {
        return Err(SearchError::BadSpec(
            "left-zero sums need a single binary symbol".to_string(),
        ));
    }
    let base = semilattice_base(&sig)?;
    if !semilattice.satisfies_all(&base)?.holds() {
        return Err(SearchError::BadSpec("base algebra is not a semilattice".to_string()));
    }
    if block_sizes.len() != semilattice.size() {
        return Err(SearchError::BadSpec("one block size per semilattice element".to_string()));
    }
    if block_sizes.contains(&0) {
        return Err(SearchError::BadSpec("block sizes must be positive".to_string()));
    }
    let total: usize = block_sizes.iter().sum();
    if total > LZ_SUM_SIZE_LIMIT {
        return Err(SearchError::SizeGuard(total, LZ_SUM_SIZE_LIMIT));
    }
    let mut offsets = Vec::with_capacity(block_sizes.len());
    let mut acc = 0;
    for &b in block_sizes {
        offsets.push(acc);
        acc += b;
    }
    let block_of: Vec<usize> = (0..total)
        .map(|e| (0..block_sizes.len()).rfind(|&s| offsets[s] <= e).unwrap())
        .collect();
    // template table with forced within-block entries; free slots listed
    // row-major
    let mut template = vec![usize::MAX; total * total];
    let mut free = Vec::new();
    for a in 0..total {
        for b in 0..total {
            let (s, t) = (block_of[a], block_of[b]);
            if s == t {
                template[a * total + b] = a;
            } else {
                let target = sl_product(semilattice, s, t);
                free.push(FreeSlot {
                    index: a * total + b,
                    offset: offsets[target],
                    choices: block_sizes[target],
                });
            }
        }
    }
    Ok(LzSumIter {
        signature: sig,
        total,
        template,
        free,
        counters: None,
        produced: 0,
    })
}

struct FreeSlot {
    index: usize,
    offset: usize,
    choices: usize,
}

pub struct LzSumIter {
    signature: Signature,
    total: usize,
    template: Vec<usize>,
    free: Vec<FreeSlot>,
    counters: Option<Vec<usize>>,
    produced: u64,
}

impl Iterator for LzSumIter {
    type Item = FiniteAlgebra;

    fn next(&mut self) -> Option<FiniteAlgebra> {
        match &mut self.counters {
            None => self.counters = Some(vec![0; self.free.len()]),
            Some(counters) => {
                let mut k = counters.len();
                loop {
                    if k == 0 {
                        return None;
                    }
                    k -= 1;
                    counters[k] += 1;
                    if counters[k] < self.free[k].choices {
                        break;
                    }
                    counters[k] = 0;
                }
            }
        }
        let counters = self.counters.as_ref().expect("set above");
        let mut table = self.template.clone();
        for (slot, &c) in self.free.iter().zip(counters) {
            table[slot.index] = slot.offset + c;
        }
        let alg = FiniteAlgebra::new(
            format!("lzsum{}", self.produced),
            self.signature.clone(),
            self.total,
            vec![table],
        )
        .expect("template tables are total");
        self.produced += 1;
        Some(alg)
    }
}

/// First algebra in the stream that falsifies the identity, together
/// with the (lexicographically first) separating assignment.
pub fn find_separating_model(
    gen: impl Iterator<Item = FiniteAlgebra>,
    id: &Identity,
) -> Result<Option<(FiniteAlgebra, BTreeMap<String, usize>)>, AlgebraError> {
    for alg in gen {
        if let Verdict::Fails { witness, .. } = alg.satisfies_identity(id)? {
            return Ok(Some((alg, witness)));
        }
    }
    Ok(None)
}

/// Census over all bands (idempotent semigroups) up to `max_n`: for
/// each band it records whether the left-regularity law `xyx = xy`
/// holds, whether the band is a semilattice sum of left-zero bands, and
/// whether every replica block is rectangular (`xyx = x`). The first
/// two must coincide and the third must always hold.
#[derive(Debug, Clone)]
pub struct BandCensusReport {
    pub rows: Vec<BandCensusRow>,
    pub equivalence_violations: u64,
    pub rectangular_violations: u64,
}

#[derive(Debug, Clone)]
pub struct BandCensusRow {
    pub size: usize,
    pub bands: u64,
    pub left_regular: u64,
    pub members: u64,
}

impl fmt::Display for BandCensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(
                f,
                "size {}: bands {}, left-regular {}, sums of left-zero bands {}",
                row.size, row.bands, row.left_regular, row.members
            )?;
        }
        writeln!(f, "left-regularity vs membership mismatches: {}", self.equivalence_violations)?;
        write!(f, "non-rectangular replica blocks: {}", self.rectangular_violations)
    }
}

pub fn band_census(max_n: usize) -> Result<BandCensusReport, SearchError> {
    if max_n > BAND_CENSUS_SIZE_LIMIT {
        return Err(SearchError::SizeGuard(max_n, BAND_CENSUS_SIZE_LIMIT));
    }
    let sig = Signature::parse("mul 2").expect("valid signature");
    let band = AxiomSet::parse(
        "(mul x x) = x\n(mul (mul x y) z) = (mul x (mul y z))",
        "band",
        Some(&sig),
    )?;
    let left_regular = Identity::parse("(mul (mul x y) x) = (mul x y)", &sig)?;
    let rectangular = AxiomSet::parse("(mul (mul x y) x) = x", "rectangular", Some(&sig))?;
    let lz = AxiomSet::parse("(mul x y) = x", "lz", Some(&sig))?;

    let mut rows = Vec::new();
    let mut equivalence_violations = 0;
    let mut rectangular_violations = 0;
    for n in 1..=max_n {
        let outcome = enumerate_models(&SearchSpec::new(sig.clone(), n..=n, band.clone()))?;
        debug_assert!(outcome.complete);
        let mut row = BandCensusRow { size: n, bands: 0, left_regular: 0, members: 0 };
        for alg in &outcome.models {
            row.bands += 1;
            let lr = alg.satisfies_identity(&left_regular)?.holds();
            let member = in_product_with_s(alg, &lz)?.member;
            if lr {
                row.left_regular += 1;
            }
            if member {
                row.members += 1;
            }
            if lr != member {
                equivalence_violations += 1;
            }
            let dec = decompose(alg)?;
            for block in &dec.blocks {
                if !block.algebra.satisfies_all(&rectangular)?.holds() {
                    rectangular_violations += 1;
                }
            }
        }
        rows.push(row);
    }
    Ok(BandCensusReport { rows, equivalence_violations, rectangular_violations })
}

/// Scan of commutative idempotent groupoids satisfying
/// `x(y.yz) = (xy.y)z`, reporting how many also satisfy `x(x.yz) = (x.xy)z`.
/// Counts are reported, never asserted.
#[derive(Debug, Clone)]
pub struct SteinerScanReport {
    /// (size, models of the first identity, of those failing the second)
    pub per_size: Vec<(usize, u64, u64)>,
}

impl fmt::Display for SteinerScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (size, models, failing) in &self.per_size {
            writeln!(
                f,
                "size {size}: {models} commutative idempotent models of x(y.yz)=(xy.y)z, {failing} fail x(x.yz)=(x.xy)z"
            )?;
        }
        Ok(())
    }
}

pub fn steiner_scan(max_n: usize) -> Result<SteinerScanReport, SearchError> {
    if max_n > BAND_CENSUS_SIZE_LIMIT {
        return Err(SearchError::SizeGuard(max_n, BAND_CENSUS_SIZE_LIMIT));
    }
    let sig = Signature::parse("mul 2").expect("valid signature");
    let constraints = AxiomSet::parse(
        "(mul x x) = x\n(mul x y) = (mul y x)\n(mul x (mul y (mul y z))) = (mul (mul (mul x y) y) z)",
        "steiner-like",
        Some(&sig),
    )?;
    let second = Identity::parse(
        "(mul x (mul x (mul y z))) = (mul (mul x (mul x y)) z)",
        &sig,
    )?;
    let mut per_size = Vec::new();
    for n in 1..=max_n {
        let outcome = enumerate_models(&SearchSpec::new(sig.clone(), n..=n, constraints.clone()))?;
        let mut failing = 0;
        for alg in &outcome.models {
            if !alg.satisfies_identity(&second)?.holds() {
                failing += 1;
            }
        }
        per_size.push((n, outcome.models.len() as u64, failing));
    }
    Ok(SteinerScanReport { per_size })
}

/// Diagnostic comparing a bounded prolongation fragment with the exact
/// membership test over all raw groupoids of one size. Membership
/// implies the fragment; the reverse difference is reported, not
/// asserted.
#[derive(Debug, Clone)]
pub struct ProlongationScan {
    pub groupoids: u64,
    pub fragment_satisfiers: u64,
    pub members: u64,
    /// members failing the fragment; zero by soundness
    pub members_outside_fragment: u64,
    /// fragment satisfiers that are not members; unknown whether a
    /// deeper fragment would separate them
    pub fragment_non_members: u64,
}

impl fmt::Display for ProlongationScan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "groupoids: {}", self.groupoids)?;
        writeln!(f, "satisfy prolongation fragment: {}", self.fragment_satisfiers)?;
        writeln!(f, "members (sums of left-zero bands): {}", self.members)?;
        writeln!(f, "members outside the fragment: {}", self.members_outside_fragment)?;
        write!(f, "fragment satisfiers that are non-members: {}", self.fragment_non_members)
    }
}

pub fn prolongation_membership_scan(
    n: usize,
    max_m: usize,
    depth: usize,
) -> Result<ProlongationScan, SearchError> {
    if n > 3 {
        return Err(SearchError::SizeGuard(n, 3));
    }
    let sig = Signature::parse("mul 2").expect("valid signature");
    let lz = AxiomSet::parse("(mul x y) = x", "lz", Some(&sig))?;
    let fragment = crate::equation::prolong_set(&lz, max_m, depth);
    let everything = AxiomSet::new("all", sig.clone());
    let outcome = enumerate_models(&SearchSpec::new(sig.clone(), n..=n, everything))?;
    let mut scan = ProlongationScan {
        groupoids: 0,
        fragment_satisfiers: 0,
        members: 0,
        members_outside_fragment: 0,
        fragment_non_members: 0,
    };
    for alg in &outcome.models {
        scan.groupoids += 1;
        let in_fragment = alg.satisfies_all(&fragment)?.holds();
        let member = in_product_with_s(alg, &lz)?.member;
        if in_fragment {
            scan.fragment_satisfiers += 1;
        }
        if member {
            scan.members += 1;
        }
        if member && !in_fragment {
            scan.members_outside_fragment += 1;
        }
        if in_fragment && !member {
            scan.fragment_non_members += 1;
        }
    }
    Ok(scan)
}

/// A pseudorandom semilattice sum of commutative groupoids: blocks get
/// arbitrary symmetric tables, cross-block entries land anywhere in the
/// block of the product. Every output is a semilattice sum of
/// commutative groupoids by construction.
pub fn random_commutative_groupoid_sum(rng: &mut impl Rng, max_total: usize) -> FiniteAlgebra {
    let sig = Signature::parse("mul 2").expect("valid signature");
    let semilattice = random_tree_semilattice(rng, &sig, max_total.min(3).max(1));
    let k = semilattice.size();
    let sizes = random_block_sizes(rng, k, max_total);
    let total: usize = sizes.iter().sum();
    let mut offsets = Vec::with_capacity(k);
    let mut acc = 0;
    for &b in &sizes {
        offsets.push(acc);
        acc += b;
    }
    let block_of: Vec<usize> = (0..total)
        .map(|e| (0..k).rfind(|&s| offsets[s] <= e).unwrap())
        .collect();
    let mut table = vec![0usize; total * total];
    for a in 0..total {
        for b in a..total {
            let (s, t) = (block_of[a], block_of[b]);
            if s == t {
                // symmetric within the block
                let v = offsets[s] + rng.gen_range(0..sizes[s]);
                table[a * total + b] = v;
                table[b * total + a] = v;
            } else {
                let target = sl_product(&semilattice, s, t);
                table[a * total + b] = offsets[target] + rng.gen_range(0..sizes[target]);
                table[b * total + a] = offsets[target] + rng.gen_range(0..sizes[target]);
            }
        }
    }
    FiniteAlgebra::new("cg-sum", sig, total, vec![table]).expect("total table")
}
