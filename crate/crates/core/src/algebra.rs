//! Finite algebras as operation tables: term evaluation, identity and
//! quasi-identity satisfaction by exhaustive assignment, products,
//! subalgebras, quotients, isomorphism at small sizes, and the `.ualg`
//! file format.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::congruence::{is_congruence, Partition};
use crate::equation::{AxiomSet, Identity, QuasiIdentity};
use crate::signature::{strip_comment, Signature, SignatureError};
use crate::term::Term;

/// Default cap on the number of assignments examined per formula.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Exhaustive isomorphism search is limited to this carrier size.
pub const ISO_SIZE_LIMIT: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("algebra must have at least one element")]
    EmptyCarrier,
    #[error("table for `{symbol}` has {got} entries, expected {expected}")]
    BadTableLength {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("table for `{symbol}` contains entry {value} outside 0..{size}")]
    EntryOutOfRange {
        symbol: String,
        value: usize,
        size: usize,
    },
    #[error("table for `{0}` would be too large")]
    TableTooLarge(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("assignment maps a variable to {value}, outside 0..{size}")]
    BadAssignment { value: usize, size: usize },
    #[error("evaluation budget exceeded: {needed} assignments > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("partition is not a congruence")]
    NotACongruence,
    #[error("partition does not match carrier size")]
    CarrierMismatch,
    #[error("subset is not closed: {symbol} applied inside the subset yields {result}")]
    NotClosed { symbol: String, result: usize },
    #[error("subset is empty or out of range")]
    BadSubset,
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("size {0} exceeds the limit {1} for this operation")]
    SizeLimit(usize, usize),
    #[error("malformed .ualg input: {0}")]
    BadFormat(String),
}

/// Outcome of a satisfaction check. A witness is present exactly when
/// the property fails; `formula` indexes into the checked formula list
/// (0 for a single identity or quasi-identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails {
        formula: usize,
        witness: BTreeMap<String, usize>,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&BTreeMap<String, usize>> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails { witness, .. } => Some(witness),
        }
    }
}

pub fn format_assignment(asg: &BTreeMap<String, usize>) -> String {
    asg.iter().map(|(v, e)| format!("{v}={e}")).join(" ")
}

/// A finite algebra: carrier `{0..size-1}` with one total operation
/// table per signature symbol, stored row-major
/// (`index = ((a1*n + a2)*n + ...) + ak`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
}

fn table_len(size: usize, arity: usize) -> Option<usize> {
    let mut len: usize = 1;
    for _ in 0..arity {
        len = len.checked_mul(size)?;
        if len > (1 << 24) {
            return None;
        }
    }
    Some(len)
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<FiniteAlgebra, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyCarrier);
        }
        if tables.len() != signature.symbols().len() {
            return Err(AlgebraError::BadFormat(
                "one table per signature symbol required".to_string(),
            ));
        }
        for (sym, table) in signature.symbols().iter().zip(&tables) {
            let expected = table_len(size, sym.arity)
                .ok_or_else(|| AlgebraError::TableTooLarge(sym.name.clone()))?;
            if table.len() != expected {
                return Err(AlgebraError::BadTableLength {
                    symbol: sym.name.clone(),
                    expected,
                    got: table.len(),
                });
            }
            if let Some(&value) = table.iter().find(|&&v| v >= size) {
                return Err(AlgebraError::EntryOutOfRange {
                    symbol: sym.name.clone(),
                    value,
                    size,
                });
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            signature,
            size,
            tables,
        })
    }

    /// Builds the tables by evaluating `f` on every argument tuple.
    pub fn from_fn(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        f: impl Fn(&str, &[usize]) -> usize,
    ) -> Result<FiniteAlgebra, AlgebraError> {
        let mut tables = Vec::with_capacity(signature.symbols().len());
        for sym in signature.symbols() {
            let len = table_len(size, sym.arity)
                .ok_or_else(|| AlgebraError::TableTooLarge(sym.name.clone()))?;
            let mut table = Vec::with_capacity(len);
            let mut args = vec![0usize; sym.arity];
            for _ in 0..len {
                table.push(f(&sym.name, &args));
                for k in (0..sym.arity).rev() {
                    args[k] += 1;
                    if args[k] < size {
                        break;
                    }
                    args[k] = 0;
                }
            }
            tables.push(table);
        }
        FiniteAlgebra::new(name, signature, size, tables)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FiniteAlgebra {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, sym_index: usize) -> &[usize] {
        &self.tables[sym_index]
    }

    /// Table lookup by symbol index; arguments must match the arity.
    pub fn op(&self, sym_index: usize, args: &[usize]) -> usize {
        let mut index = 0;
        for &a in args {
            debug_assert!(a < self.size);
            index = index * self.size + a;
        }
        self.tables[sym_index][index]
    }

    pub fn op_by_name(&self, name: &str, args: &[usize]) -> Result<usize, AlgebraError> {
        let idx = self
            .signature
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))?;
        Ok(self.op(idx, args))
    }

    /// Same signature, size and tables; names may differ.
    pub fn same_tables(&self, other: &FiniteAlgebra) -> bool {
        self.signature == other.signature && self.size == other.size && self.tables == other.tables
    }

    /// Recursive table lookup under an assignment of the term variables.
    pub fn eval(&self, t: &Term, asg: &BTreeMap<String, usize>) -> Result<usize, AlgebraError> {
        match t {
            Term::Var(name) => {
                let &value = asg
                    .get(name)
                    .ok_or_else(|| AlgebraError::UnboundVariable(name.clone()))?;
                if value >= self.size {
                    return Err(AlgebraError::BadAssignment {
                        value,
                        size: self.size,
                    });
                }
                Ok(value)
            }
            Term::App { sym, args } => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(a, asg))
                    .collect::<Result<Vec<_>, _>>()?;
                self.op_by_name(sym, &vals)
            }
        }
    }

    fn compile(&self, t: &Term, vars: &[String]) -> Result<Compiled, AlgebraError> {
        match t {
            Term::Var(name) => {
                let slot = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| AlgebraError::UnboundVariable(name.clone()))?;
                Ok(Compiled::Var(slot))
            }
            Term::App { sym, args } => {
                let sym = self
                    .signature
                    .index_of(sym)
                    .ok_or_else(|| AlgebraError::UnknownSymbol(sym.clone()))?;
                let args = args
                    .iter()
                    .map(|a| self.compile(a, vars))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Compiled::App { sym, args })
            }
        }
    }

    fn eval_compiled(&self, c: &Compiled, asg: &[usize]) -> usize {
        match c {
            Compiled::Var(slot) => asg[*slot],
            Compiled::App { sym, args } => {
                let mut index = 0;
                for a in args {
                    index = index * self.size + self.eval_compiled(a, asg);
                }
                self.tables[*sym][index]
            }
        }
    }

    fn check_budget(&self, nvars: usize, budget: u64) -> Result<(), AlgebraError> {
        let needed = u32::try_from(nvars)
            .ok()
            .and_then(|n| (self.size as u128).checked_pow(n))
            .unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(AlgebraError::BudgetExceeded { needed, budget });
        }
        Ok(())
    }

    pub fn satisfies_identity(&self, id: &Identity) -> Result<Verdict, AlgebraError> {
        self.satisfies_identity_budget(id, DEFAULT_BUDGET)
    }

    /// Exhaustive check over all assignments; the first failing
    /// assignment in lexicographic order becomes the witness.
    pub fn satisfies_identity_budget(
        &self,
        id: &Identity,
        budget: u64,
    ) -> Result<Verdict, AlgebraError> {
        let vars = id.variables();
        self.check_budget(vars.len(), budget)?;
        let lhs = self.compile(&id.lhs, &vars)?;
        let rhs = self.compile(&id.rhs, &vars)?;
        let mut asg = vec![0usize; vars.len()];
        loop {
            if self.eval_compiled(&lhs, &asg) != self.eval_compiled(&rhs, &asg) {
                let witness = vars.iter().cloned().zip(asg.iter().copied()).collect();
                return Ok(Verdict::Fails { formula: 0, witness });
            }
            if !next_assignment(&mut asg, self.size) {
                return Ok(Verdict::Holds);
            }
        }
    }

    pub fn satisfies_quasi(&self, q: &QuasiIdentity) -> Result<Verdict, AlgebraError> {
        self.satisfies_quasi_budget(q, DEFAULT_BUDGET)
    }

    pub fn satisfies_quasi_budget(
        &self,
        q: &QuasiIdentity,
        budget: u64,
    ) -> Result<Verdict, AlgebraError> {
        let vars = q.variables();
        self.check_budget(vars.len(), budget)?;
        let premises = q
            .premises
            .iter()
            .map(|p| {
                Ok((
                    self.compile(&p.lhs, &vars)?,
                    self.compile(&p.rhs, &vars)?,
                ))
            })
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        let lhs = self.compile(&q.conclusion.lhs, &vars)?;
        let rhs = self.compile(&q.conclusion.rhs, &vars)?;
        let mut asg = vec![0usize; vars.len()];
        loop {
            let applicable = premises
                .iter()
                .all(|(l, r)| self.eval_compiled(l, &asg) == self.eval_compiled(r, &asg));
            if applicable && self.eval_compiled(&lhs, &asg) != self.eval_compiled(&rhs, &asg) {
                let witness = vars.iter().cloned().zip(asg.iter().copied()).collect();
                return Ok(Verdict::Fails { formula: 0, witness });
            }
            if !next_assignment(&mut asg, self.size) {
                return Ok(Verdict::Holds);
            }
        }
    }

    pub fn satisfies_all(&self, ax: &AxiomSet) -> Result<Verdict, AlgebraError> {
        self.satisfies_all_budget(ax, DEFAULT_BUDGET)
    }

    /// Checks every identity, then every quasi-identity, reporting the
    /// index of the first failing formula.
    pub fn satisfies_all_budget(
        &self,
        ax: &AxiomSet,
        budget: u64,
    ) -> Result<Verdict, AlgebraError> {
        for (i, id) in ax.identities.iter().enumerate() {
            if let Verdict::Fails { witness, .. } = self.satisfies_identity_budget(id, budget)? {
                return Ok(Verdict::Fails { formula: i, witness });
            }
        }
        let offset = ax.identities.len();
        for (i, q) in ax.quasi_identities.iter().enumerate() {
            if let Verdict::Fails { witness, .. } = self.satisfies_quasi_budget(q, budget)? {
                return Ok(Verdict::Fails {
                    formula: offset + i,
                    witness,
                });
            }
        }
        Ok(Verdict::Holds)
    }

    /// Quotient by a congruence. The carrier consists of the blocks
    /// ordered by least element; the returned map sends each element to
    /// its block index. The natural map is verified to be a homomorphism.
    pub fn quotient(
        &self,
        part: &Partition,
    ) -> Result<(FiniteAlgebra, Vec<usize>), AlgebraError> {
        if part.len() != self.size {
            return Err(AlgebraError::CarrierMismatch);
        }
        if !is_congruence(self, part) {
            return Err(AlgebraError::NotACongruence);
        }
        let blocks = part.blocks();
        let block_map: Vec<usize> = (0..self.size).map(|e| part.block_index(e)).collect();
        let reps: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
        let q = FiniteAlgebra::from_fn(
            format!("{}/q", self.name),
            self.signature.clone(),
            blocks.len(),
            |sym, args| {
                let concrete: Vec<usize> = args.iter().map(|&b| reps[b]).collect();
                block_map[self.op_by_name(sym, &concrete).expect("symbol exists")]
            },
        )?;
        // Natural-map homomorphism check over all tuples.
        for (si, sym) in self.signature.symbols().iter().enumerate() {
            let mut args = vec![0usize; sym.arity];
            loop {
                let img: Vec<usize> = args.iter().map(|&a| block_map[a]).collect();
                if block_map[self.op(si, &args)] != q.op(si, &img) {
                    return Err(AlgebraError::NotACongruence);
                }
                if !next_assignment(&mut args, self.size) {
                    break;
                }
            }
        }
        Ok((q, block_map))
    }

    /// Subalgebra on a closed subset, elements renumbered by increasing
    /// original label. Returns the algebra and the new-to-old labels.
    pub fn restrict(&self, subset: &[usize]) -> Result<(FiniteAlgebra, Vec<usize>), AlgebraError> {
        let mut elems: Vec<usize> = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.is_empty() || *elems.last().unwrap() >= self.size {
            return Err(AlgebraError::BadSubset);
        }
        let mut old_to_new = vec![usize::MAX; self.size];
        for (new, &old) in elems.iter().enumerate() {
            old_to_new[old] = new;
        }
        let mut tables = Vec::with_capacity(self.signature.symbols().len());
        for (si, sym) in self.signature.symbols().iter().enumerate() {
            let len = table_len(elems.len(), sym.arity)
                .ok_or_else(|| AlgebraError::TableTooLarge(sym.name.clone()))?;
            let mut table = Vec::with_capacity(len);
            let mut args = vec![0usize; sym.arity];
            for _ in 0..len {
                let concrete: Vec<usize> = args.iter().map(|&a| elems[a]).collect();
                let result = self.op(si, &concrete);
                if old_to_new[result] == usize::MAX {
                    return Err(AlgebraError::NotClosed {
                        symbol: sym.name.clone(),
                        result,
                    });
                }
                table.push(old_to_new[result]);
                for k in (0..sym.arity).rev() {
                    args[k] += 1;
                    if args[k] < elems.len() {
                        break;
                    }
                    args[k] = 0;
                }
            }
            tables.push(table);
        }
        let alg = FiniteAlgebra::new(
            format!("{}|{:?}", self.name, elems),
            self.signature.clone(),
            elems.len(),
            tables,
        )?;
        Ok((alg, elems))
    }

    /// Closure of a subset under all operations.
    pub fn generated_subuniverse(&self, seed: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.size];
        for &e in seed {
            if e < self.size {
                member[e] = true;
            }
        }
        loop {
            let current: Vec<usize> =
                (0..self.size).filter(|&e| member[e]).collect();
            let mut changed = false;
            for (si, sym) in self.signature.symbols().iter().enumerate() {
                if current.is_empty() && sym.arity > 0 {
                    continue;
                }
                let mut idx = vec![0usize; sym.arity];
                loop {
                    let args: Vec<usize> = idx.iter().map(|&i| current[i]).collect();
                    let r = self.op(si, &args);
                    if !member[r] {
                        member[r] = true;
                        changed = true;
                    }
                    if !next_assignment(&mut idx, current.len().max(1)) {
                        break;
                    }
                }
            }
            if !changed {
                return (0..self.size).filter(|&e| member[e]).collect();
            }
        }
    }

    /// Componentwise product; the pair `(a, b)` becomes `a*|B| + b`.
    pub fn direct_product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra, AlgebraError> {
        if self.signature != other.signature {
            return Err(AlgebraError::SignatureMismatch);
        }
        let m = other.size;
        FiniteAlgebra::from_fn(
            format!("{}x{}", self.name, other.name),
            self.signature.clone(),
            self.size * m,
            |sym, args| {
                let left: Vec<usize> = args.iter().map(|&p| p / m).collect();
                let right: Vec<usize> = args.iter().map(|&p| p % m).collect();
                self.op_by_name(sym, &left).expect("symbol exists") * m
                    + other.op_by_name(sym, &right).expect("symbol exists")
            },
        )
    }

    /// Exhaustive search over bijections, limited to size 6.
    pub fn is_isomorphic(&self, other: &FiniteAlgebra) -> Result<bool, AlgebraError> {
        if self.signature != other.signature {
            return Err(AlgebraError::SignatureMismatch);
        }
        if self.size != other.size {
            return Ok(false);
        }
        if self.size > ISO_SIZE_LIMIT {
            return Err(AlgebraError::SizeLimit(self.size, ISO_SIZE_LIMIT));
        }
        'perms: for perm in (0..self.size).permutations(self.size) {
            for (si, sym) in self.signature.symbols().iter().enumerate() {
                let mut args = vec![0usize; sym.arity];
                loop {
                    let img: Vec<usize> = args.iter().map(|&a| perm[a]).collect();
                    if perm[self.op(si, &args)] != other.op(si, &img) {
                        continue 'perms;
                    }
                    if !next_assignment(&mut args, self.size) {
                        break;
                    }
                }
            }
            return Ok(true);
        }
        Ok(false)
    }
}

enum Compiled {
    Var(usize),
    App { sym: usize, args: Vec<Compiled> },
}

/// Advances a fixed-radix odometer; the last slot moves fastest, so
/// successive tuples are in ascending lexicographic order. Returns
/// false after the last tuple.
pub(crate) fn next_assignment(asg: &mut [usize], radix: usize) -> bool {
    for k in (0..asg.len()).rev() {
        asg[k] += 1;
        if asg[k] < radix {
            return true;
        }
        asg[k] = 0;
    }
    false
}

/// Cursor over comment-stripped, non-empty lines of a block file.
pub(crate) struct LineCursor<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    pub(crate) fn new(text: &'a str) -> LineCursor<'a> {
        LineCursor {
            lines: text
                .lines()
                .map(strip_comment)
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect(),
            pos: 0,
        }
    }

    pub(crate) fn next(&mut self) -> Option<&'a str> {
        let line = self.lines.get(self.pos).copied();
        self.pos += 1;
        line
    }

    pub(crate) fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    pub(crate) fn expect(&mut self, keyword: &str) -> Result<(), AlgebraError> {
        match self.next() {
            Some(l) if l == keyword => Ok(()),
            other => Err(AlgebraError::BadFormat(format!(
                "expected `{keyword}`, found `{}`",
                other.unwrap_or("<eof>")
            ))),
        }
    }

    /// Consumes whitespace-separated integers across lines. Capacity is
    /// grown on demand so a bogus declared size cannot force a huge
    /// allocation up front.
    pub(crate) fn read_entries(&mut self, count: usize, what: &str) -> Result<Vec<usize>, AlgebraError> {
        let mut entries = Vec::with_capacity(count.min(1 << 16));
        while entries.len() < count {
            let line = self
                .next()
                .ok_or_else(|| AlgebraError::BadFormat(format!("table for `{what}` is short")))?;
            for tok in line.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| {
                    AlgebraError::BadFormat(format!("bad table entry `{tok}` for `{what}`"))
                })?;
                entries.push(v);
            }
        }
        if entries.len() != count {
            return Err(AlgebraError::BadFormat(format!(
                "table for `{what}` has {} entries, expected {count}",
                entries.len()
            )));
        }
        Ok(entries)
    }
}

/// Parses `signature ... end`.
pub(crate) fn parse_signature_block(cur: &mut LineCursor) -> Result<Signature, AlgebraError> {
    cur.expect("signature")?;
    let mut sig_lines = Vec::new();
    loop {
        match cur.next() {
            Some("end") => break,
            Some(l) => sig_lines.push(l),
            None => return Err(AlgebraError::BadFormat("unterminated signature".to_string())),
        }
    }
    Ok(Signature::parse(&sig_lines.join("\n"))?)
}

/// Parses `algebra NAME` / `size N` / one `op SYM` table per symbol / `end`.
pub(crate) fn parse_algebra_block(
    cur: &mut LineCursor,
    sig: &Signature,
) -> Result<FiniteAlgebra, AlgebraError> {
    let line = cur
        .next()
        .ok_or_else(|| AlgebraError::BadFormat("expected `algebra NAME`".to_string()))?;
    let name = line
        .strip_prefix("algebra")
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .ok_or_else(|| AlgebraError::BadFormat(format!("expected `algebra NAME`, found `{line}`")))?;
    let size_line = cur
        .next()
        .ok_or_else(|| AlgebraError::BadFormat("expected `size N`".to_string()))?;
    let size: usize = size_line
        .strip_prefix("size")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| AlgebraError::BadFormat(format!("expected `size N`, found `{size_line}`")))?;

    let mut tables: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    loop {
        let line = cur
            .next()
            .ok_or_else(|| AlgebraError::BadFormat("unterminated algebra block".to_string()))?;
        if line == "end" {
            break;
        }
        let sym = line
            .strip_prefix("op")
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| AlgebraError::BadFormat(format!("expected `op SYM`, found `{line}`")))?;
        let arity = sig
            .arity(sym)
            .ok_or_else(|| AlgebraError::UnknownSymbol(sym.to_string()))?;
        let expected = table_len(size, arity)
            .ok_or_else(|| AlgebraError::TableTooLarge(sym.to_string()))?;
        let entries = cur.read_entries(expected, sym)?;
        if tables.insert(sym.to_string(), entries).is_some() {
            return Err(AlgebraError::BadFormat(format!("duplicate table for `{sym}`")));
        }
    }
    let ordered = sig
        .symbols()
        .iter()
        .map(|s| {
            tables
                .remove(&s.name)
                .ok_or_else(|| AlgebraError::BadFormat(format!("missing table for `{}`", s.name)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    FiniteAlgebra::new(name, sig.clone(), size, ordered)
}

/// Parses a `.ualg` file: a `signature ... end` block followed by any
/// number of `algebra NAME ... end` blocks, each giving `size N` and
/// one row-major `op SYM` table per symbol.
pub fn parse_ualg_file(text: &str) -> Result<(Signature, Vec<FiniteAlgebra>), AlgebraError> {
    let mut cur = LineCursor::new(text);
    let sig = parse_signature_block(&mut cur)?;
    let mut algebras = Vec::new();
    while cur.peek().is_some() {
        algebras.push(parse_algebra_block(&mut cur, &sig)?);
    }
    if algebras.is_empty() {
        return Err(AlgebraError::BadFormat("no algebra blocks".to_string()));
    }
    Ok((sig, algebras))
}

/// Serializes algebras in the `.ualg` format; inverse of [`parse_ualg_file`].
pub fn write_ualg(sig: &Signature, algebras: &[FiniteAlgebra]) -> String {
    let mut out = String::from("signature\n");
    for sym in sig.symbols() {
        out.push_str(&format!("  {} {}\n", sym.name, sym.arity));
    }
    out.push_str("end\n");
    for alg in algebras {
        out.push_str(&format!("algebra {}\n  size {}\n", alg.name(), alg.size()));
        for (si, sym) in sig.symbols().iter().enumerate() {
            out.push_str(&format!("  op {}\n", sym.name));
            let row = alg.size().max(1);
            for chunk in alg.table(si).chunks(row) {
                out.push_str("    ");
                out.push_str(&chunk.iter().map(|v| v.to_string()).join(" "));
                out.push('\n');
            }
        }
        out.push_str("end\n");
    }
    out
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", write_ualg(&self.signature, std::slice::from_ref(self)))
    }
}
