//! Identities, quasi-identities and axiom sets, together with the
//! generators used throughout: regularity tests, strong-irregularity
//! witnesses, the bounded prolongation of an axiom set, semilattice
//! axioms, and the partition-operation identity schemes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::signature::{Signature, SignatureError};
use crate::term::{enumerate_terms, numbered_vars, Term, TermError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EquationError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("malformed formula `{0}`")]
    BadFormula(String),
    #[error("missing signature block")]
    MissingSignature,
    #[error("signature is not plural")]
    NotPlural,
    #[error("term `{0}` does not have exactly two variables")]
    NotBinaryTerm(String),
    #[error("unexpected line `{0}`")]
    BadLine(String),
}

/// An equation between two terms over a shared signature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Identity {
        Identity { lhs, rhs }
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Identity, EquationError> {
        let parts: Vec<&str> = text.split('=').collect();
        if parts.len() != 2 {
            return Err(EquationError::BadFormula(text.to_string()));
        }
        Ok(Identity {
            lhs: Term::parse(parts[0], sig)?,
            rhs: Term::parse(parts[1], sig)?,
        })
    }

    /// Variables of both sides in first-occurrence order, left side first.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = self.lhs.variables();
        for v in self.rhs.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }

    /// Precisely the same variables appear on both sides.
    pub fn is_regular(&self) -> bool {
        let lv: BTreeSet<_> = self.lhs.variables().into_iter().collect();
        let rv: BTreeSet<_> = self.rhs.variables().into_iter().collect();
        lv == rv
    }

    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Result<Identity, TermError> {
        Ok(Identity {
            lhs: self.lhs.substitute(env)?,
            rhs: self.rhs.substitute(env)?,
        })
    }

    /// Renames the variables of both sides to `x1, x2, ...` in
    /// first-occurrence order (left side first).
    pub fn canonicalize_variables(&self) -> Identity {
        let env: BTreeMap<String, Term> = self
            .variables()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, Term::var(format!("x{}", i + 1))))
            .collect();
        self.substitute(&env).expect("every variable is bound")
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        self.lhs.validate(sig)?;
        self.rhs.validate(sig)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A Horn formula `p1 & ... & pk -> conclusion`. With no premises it
/// degenerates to a plain identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuasiIdentity {
    pub premises: Vec<Identity>,
    pub conclusion: Identity,
}

impl QuasiIdentity {
    pub fn parse(text: &str, sig: &Signature) -> Result<QuasiIdentity, EquationError> {
        let parts: Vec<&str> = text.split("->").collect();
        match parts.len() {
            1 => Ok(QuasiIdentity {
                premises: Vec::new(),
                conclusion: Identity::parse(parts[0], sig)?,
            }),
            2 => {
                let premises = parts[0]
                    .split('&')
                    .map(|p| Identity::parse(p, sig))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(QuasiIdentity {
                    premises,
                    conclusion: Identity::parse(parts[1], sig)?,
                })
            }
            _ => Err(EquationError::BadFormula(text.to_string())),
        }
    }

    /// Variables in first-occurrence order across premises, then conclusion.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = Vec::new();
        for id in self.premises.iter().chain(std::iter::once(&self.conclusion)) {
            for v in id.variables() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        vars
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        for p in &self.premises {
            p.validate(sig)?;
        }
        self.conclusion.validate(sig)
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.premises.is_empty() {
            return write!(f, "{}", self.conclusion);
        }
        let premises: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        write!(f, "{} -> {}", premises.join(" & "), self.conclusion)
    }
}

/// A named collection of identities and quasi-identities over one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSet {
    pub name: String,
    pub signature: Signature,
    pub identities: Vec<Identity>,
    pub quasi_identities: Vec<QuasiIdentity>,
}

impl AxiomSet {
    pub fn new(name: impl Into<String>, signature: Signature) -> AxiomSet {
        AxiomSet {
            name: name.into(),
            signature,
            identities: Vec::new(),
            quasi_identities: Vec::new(),
        }
    }

    pub fn with_identities(
        name: impl Into<String>,
        signature: Signature,
        identities: Vec<Identity>,
    ) -> AxiomSet {
        AxiomSet {
            name: name.into(),
            signature,
            identities,
            quasi_identities: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), TermError> {
        for id in &self.identities {
            id.validate(&self.signature)?;
        }
        for q in &self.quasi_identities {
            q.validate(&self.signature)?;
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty() && self.quasi_identities.is_empty()
    }

    /// Parses the `.eq` format: an optional `signature ... end` block,
    /// then one formula per line (`=` for equations, `&` between
    /// premises, `->` before a conclusion). When the file has no
    /// signature block, `ambient` must supply one.
    pub fn parse(
        text: &str,
        name: impl Into<String>,
        ambient: Option<&Signature>,
    ) -> Result<AxiomSet, EquationError> {
        let lines: Vec<&str> = text
            .lines()
            .map(crate::signature::strip_comment)
            .map(str::trim)
            .collect();
        let mut i = 0;
        while i < lines.len() && lines[i].is_empty() {
            i += 1;
        }
        let signature = if i < lines.len() && lines[i] == "signature" {
            let start = i + 1;
            let end = lines[start..]
                .iter()
                .position(|l| *l == "end")
                .map(|p| start + p)
                .ok_or_else(|| EquationError::BadLine("signature".to_string()))?;
            let sig = Signature::parse(&lines[start..end].join("\n"))?;
            i = end + 1;
            sig
        } else {
            ambient.cloned().ok_or(EquationError::MissingSignature)?
        };

        let mut out = AxiomSet::new(name, signature);
        for line in &lines[i..] {
            if line.is_empty() {
                continue;
            }
            let q = QuasiIdentity::parse(line, &out.signature)?;
            if q.premises.is_empty() {
                out.identities.push(q.conclusion);
            } else {
                out.quasi_identities.push(q);
            }
        }
        out.validate()?;
        Ok(out)
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "signature")?;
        for sym in self.signature.symbols() {
            writeln!(f, "  {} {}", sym.name, sym.arity)?;
        }
        writeln!(f, "end")?;
        for id in &self.identities {
            writeln!(f, "{id}")?;
        }
        for q in &self.quasi_identities {
            writeln!(f, "{q}")?;
        }
        Ok(())
    }
}

/// Terms `t` witnessing that the set contains a strongly irregular
/// identity `t(x,y) = x` (or its mirror image). Detection is syntactic:
/// one side is a lone variable, the other a term with exactly two
/// variables including it. Witnesses are renamed so the retained
/// variable is `x` and the other is `y`.
pub fn strongly_irregular_witnesses(ax: &AxiomSet) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    let mut push = |t: &Term, kept: &str| {
        let vars = t.variables();
        if vars.len() != 2 || !vars.iter().any(|v| v == kept) {
            return;
        }
        let other = vars.iter().find(|v| *v != kept).unwrap();
        let env: BTreeMap<String, Term> = [
            (kept.to_string(), Term::var("x")),
            (other.clone(), Term::var("y")),
        ]
        .into();
        let witness = t.substitute(&env).expect("bound");
        if !out.contains(&witness) {
            out.push(witness);
        }
    };
    for id in &ax.identities {
        match (&id.lhs, &id.rhs) {
            (Term::Var(_), Term::Var(_)) => {}
            (t, Term::Var(v)) => push(t, v),
            (Term::Var(v), t) => push(t, v),
            _ => {}
        }
    }
    out
}

/// Prolongs a single identity: every variable `y_i` is replaced by a
/// term over `x1..xm` that uses all `m` variables, ranging over the
/// terms of `T_m` up to the given depth. Results are deduplicated after
/// canonical variable renaming; every output is regular.
pub fn prolong(id: &Identity, sig: &Signature, m: usize, depth: usize) -> Vec<Identity> {
    let ys = id.variables();
    let xs = numbered_vars(m);
    let choices = enumerate_terms(sig, &xs, depth, true);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    if choices.is_empty() {
        return out;
    }
    let mut idx = vec![0usize; ys.len()];
    loop {
        let env: BTreeMap<String, Term> = ys
            .iter()
            .cloned()
            .zip(idx.iter().map(|&i| choices[i].clone()))
            .collect();
        let inst = id.substitute(&env).expect("bound").canonicalize_variables();
        if seen.insert((inst.lhs.to_string(), inst.rhs.to_string())) {
            out.push(inst);
        }
        // Odometer over the substitution tuple.
        let mut k = idx.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// The bounded fragment of the prolongation of an axiom set: the union
/// of [`prolong`] over all identities and all `1 <= m <= max_m`. The
/// full prolongation is infinite; the bounds are recorded in the name.
/// Quasi-identities are not prolonged and do not appear in the output.
pub fn prolong_set(ax: &AxiomSet, max_m: usize, depth: usize) -> AxiomSet {
    let mut out = AxiomSet::new(
        format!("{}^p[m<={max_m},depth<={depth}]", ax.name),
        ax.signature.clone(),
    );
    let mut seen = BTreeSet::new();
    for m in 1..=max_m {
        for id in &ax.identities {
            for inst in prolong(id, &ax.signature, m, depth) {
                if seen.insert((inst.lhs.to_string(), inst.rhs.to_string())) {
                    out.identities.push(inst);
                }
            }
        }
    }
    out
}

/// The canonical binary term `t(x,y) = w(x,y,...,y)` where `w` is the
/// first symbol of minimal arity at least two.
pub fn canonical_binary(sig: &Signature) -> Result<Term, EquationError> {
    if !sig.is_plural() {
        return Err(EquationError::NotPlural);
    }
    let min_arity = sig
        .symbols()
        .iter()
        .filter(|s| s.arity >= 2)
        .map(|s| s.arity)
        .min()
        .expect("plural signature has a non-unary symbol");
    let sym = sig
        .symbols()
        .iter()
        .find(|s| s.arity == min_arity)
        .expect("symbol of minimal arity exists");
    let mut args = vec![Term::var("x")];
    args.extend(std::iter::repeat_n(Term::var("y"), sym.arity - 1));
    Ok(Term::app(sym.name.clone(), args))
}

/// Requires `t` to have exactly two distinct variables and returns them
/// in first-occurrence order.
fn binary_term_vars(t: &Term) -> Result<(String, String), EquationError> {
    let vars = t.variables();
    if vars.len() != 2 {
        return Err(EquationError::NotBinaryTerm(t.to_string()));
    }
    Ok((vars[0].clone(), vars[1].clone()))
}

/// `t(a, b)` for a binary term `t`.
pub fn apply_binary(t: &Term, a: &Term, b: &Term) -> Result<Term, EquationError> {
    let (x, y) = binary_term_vars(t)?;
    let env: BTreeMap<String, Term> = [(x, a.clone()), (y, b.clone())].into();
    Ok(t.substitute(&env).expect("bound"))
}

/// Left-associated product `a1 * a2 * ... * ak` under a binary term.
fn left_product(t: &Term, items: &[Term]) -> Result<Term, EquationError> {
    let mut acc = items[0].clone();
    for item in &items[1..] {
        acc = apply_binary(t, &acc, item)?;
    }
    Ok(acc)
}

/// A finite base whose finite models are exactly the Omega-semilattices:
/// the canonical binary product is idempotent, commutative and
/// associative, and every basic operation equals the left-associated
/// product of its arguments.
pub fn semilattice_base(sig: &Signature) -> Result<AxiomSet, EquationError> {
    let t = canonical_binary(sig)?;
    let x = Term::var("x");
    let y = Term::var("y");
    let z = Term::var("z");
    let mut ids = vec![
        Identity::new(apply_binary(&t, &x, &x)?, x.clone()),
        Identity::new(apply_binary(&t, &x, &y)?, apply_binary(&t, &y, &x)?),
        Identity::new(
            apply_binary(&t, &x, &apply_binary(&t, &y, &z)?)?,
            apply_binary(&t, &apply_binary(&t, &x, &y)?, &z)?,
        ),
    ];
    for sym in sig.symbols() {
        let xs: Vec<Term> = numbered_vars(sym.arity).into_iter().map(Term::var).collect();
        ids.push(Identity::new(
            Term::app(sym.name.clone(), xs.clone()),
            left_product(&t, &xs)?,
        ));
    }
    Ok(AxiomSet::with_identities("semilattice", sig.clone(), ids))
}

/// The identity schemes (P1)-(P5) instantiated for `x . y := t(x,y)`,
/// with (P4) and (P5) expanded for every symbol of the signature.
/// Labels are `P1..P3` and `P4[sym]`, `P5[sym]`.
pub fn plonka_axioms_labeled(
    sig: &Signature,
    t: &Term,
) -> Result<Vec<(String, Identity)>, EquationError> {
    binary_term_vars(t)?;
    let x = Term::var("x");
    let y = Term::var("y");
    let z = Term::var("z");
    let mut out = vec![
        (
            "P1".to_string(),
            Identity::new(apply_binary(t, &x, &x)?, x.clone()),
        ),
        (
            "P2".to_string(),
            Identity::new(
                apply_binary(t, &x, &apply_binary(t, &y, &z)?)?,
                apply_binary(t, &apply_binary(t, &x, &y)?, &z)?,
            ),
        ),
        (
            "P3".to_string(),
            Identity::new(
                apply_binary(t, &x, &apply_binary(t, &y, &z)?)?,
                apply_binary(t, &x, &apply_binary(t, &z, &y)?)?,
            ),
        ),
    ];
    for sym in sig.symbols() {
        let xs: Vec<Term> = numbered_vars(sym.arity).into_iter().map(Term::var).collect();
        let app = Term::app(sym.name.clone(), xs.clone());
        let mut chain = vec![y.clone()];
        chain.extend(xs.iter().cloned());
        out.push((
            format!("P4[{}]", sym.name),
            Identity::new(apply_binary(t, &y, &app)?, left_product(t, &chain)?),
        ));
    }
    for sym in sig.symbols() {
        let xs: Vec<Term> = numbered_vars(sym.arity).into_iter().map(Term::var).collect();
        let app = Term::app(sym.name.clone(), xs.clone());
        let mapped: Vec<Term> = xs
            .iter()
            .map(|xi| apply_binary(t, xi, &y))
            .collect::<Result<_, _>>()?;
        out.push((
            format!("P5[{}]", sym.name),
            Identity::new(
                apply_binary(t, &app, &y)?,
                Term::app(sym.name.clone(), mapped),
            ),
        ));
    }
    Ok(out)
}

/// (P1)-(P5) as an axiom set: the partition-operation laws for `t`.
pub fn plonka_axioms(sig: &Signature, t: &Term) -> Result<AxiomSet, EquationError> {
    let ids = plonka_axioms_labeled(sig, t)?.into_iter().map(|(_, id)| id).collect();
    Ok(AxiomSet::with_identities("partition-operation", sig.clone(), ids))
}

/// (P1)-(P4) only: the pseudopartition-operation laws for `t`.
pub fn pseudo_plonka_axioms(sig: &Signature, t: &Term) -> Result<AxiomSet, EquationError> {
    let ids = plonka_axioms_labeled(sig, t)?
        .into_iter()
        .filter(|(label, _)| !label.starts_with("P5"))
        .map(|(_, id)| id)
        .collect();
    Ok(AxiomSet::with_identities(
        "pseudopartition-operation",
        sig.clone(),
        ids,
    ))
}

/// The quasi-identity separating injective-map sums:
/// `(x.y=x & y.x=y & x.z=z & z.x=z & y.z=z & z.y=z) -> x=y`
/// with `.` given by `t`.
pub fn quasi_regularization_quasi_identity(
    sig: &Signature,
    t: &Term,
) -> Result<QuasiIdentity, EquationError> {
    binary_term_vars(t)?;
    t.validate(sig)?;
    let x = Term::var("x");
    let y = Term::var("y");
    let z = Term::var("z");
    let premises = vec![
        Identity::new(apply_binary(t, &x, &y)?, x.clone()),
        Identity::new(apply_binary(t, &y, &x)?, y.clone()),
        Identity::new(apply_binary(t, &x, &z)?, z.clone()),
        Identity::new(apply_binary(t, &z, &x)?, z.clone()),
        Identity::new(apply_binary(t, &y, &z)?, z.clone()),
        Identity::new(apply_binary(t, &z, &y)?, z.clone()),
    ];
    Ok(QuasiIdentity {
        premises,
        conclusion: Identity::new(x, y),
    })
}
