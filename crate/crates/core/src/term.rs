//! Terms over a signature: parsing, printing, variable accounting,
//! substitution, and bounded enumeration of the sets `T_n`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::signature::{is_identifier, strip_comment, Signature};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("symbol `{symbol}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("operation symbol `{0}` used as a variable")]
    SymbolAsVariable(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("no binding for variable `{0}`")]
    MissingBinding(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}

/// A term is a variable or the application of an operation symbol.
///
/// Application arity is enforced by the parser and by [`Term::validate`];
/// terms built directly with [`Term::app`] are trusted by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    App { sym: String, args: Vec<Term> },
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(sym: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App { sym: sym.into(), args }
    }

    /// Parses the prefix s-expression grammar
    /// `term := ident | '(' ident term+ ')'`. Identifiers found in `sig`
    /// are operation symbols, everything else is a variable.
    pub fn parse(text: &str, sig: &Signature) -> Result<Term, TermError> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let term = parse_tokens(&tokens, &mut pos, sig)?;
        if pos != tokens.len() {
            return Err(TermError::UnexpectedToken(tokens[pos].to_string()));
        }
        Ok(term)
    }

    /// Variables in first-occurrence order, each listed once.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(name) => {
                if !out.iter().any(|v| v == name) {
                    out.push(name.clone());
                }
            }
            Term::App { args, .. } => {
                for arg in args {
                    arg.collect_variables(out);
                }
            }
        }
    }

    /// Membership in `T_n`: does the term contain exactly `n` distinct variables?
    pub fn is_member_tn(&self, n: usize) -> bool {
        self.variables().len() == n
    }

    /// A lone variable has depth 0; an application adds one to the
    /// deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Simultaneous substitution. `env` must bind every variable of the term.
    pub fn substitute(&self, env: &BTreeMap<String, Term>) -> Result<Term, TermError> {
        match self {
            Term::Var(name) => env
                .get(name)
                .cloned()
                .ok_or_else(|| TermError::MissingBinding(name.clone())),
            Term::App { sym, args } => {
                let args = args
                    .iter()
                    .map(|a| a.substitute(env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::App { sym: sym.clone(), args })
            }
        }
    }

    /// Checks arities against `sig` and that no variable shadows a symbol.
    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Term::Var(name) => {
                if sig.contains(name) {
                    Err(TermError::SymbolAsVariable(name.clone()))
                } else if !is_identifier(name) {
                    Err(TermError::BadIdentifier(name.clone()))
                } else {
                    Ok(())
                }
            }
            Term::App { sym, args } => {
                let arity =
                    sig.arity(sym).ok_or_else(|| TermError::UnknownSymbol(sym.clone()))?;
                if arity != args.len() {
                    return Err(TermError::ArityMismatch {
                        symbol: sym.clone(),
                        expected: arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.validate(sig))
            }
        }
    }

    /// Renames variables to `x1, x2, ...` in first-occurrence order.
    pub fn canonicalize_variables(&self) -> Term {
        let vars = self.variables();
        let env: BTreeMap<String, Term> = vars
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, Term::var(format!("x{}", i + 1))))
            .collect();
        self.substitute(&env).expect("every variable is bound")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) => write!(f, "{name}"),
            Term::App { sym, args } => {
                if args.is_empty() {
                    return write!(f, "{sym}");
                }
                write!(f, "({sym}")?;
                for arg in args {
                    write!(f, " {arg}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, TermError> {
    let mut tokens = Vec::new();
    for raw in text.lines() {
        let line = strip_comment(raw);
        let mut cur = String::new();
        for c in line.chars() {
            match c {
                '(' | ')' => {
                    if !cur.is_empty() {
                        tokens.push(std::mem::take(&mut cur));
                    }
                    tokens.push(c.to_string());
                }
                c if c.is_whitespace() => {
                    if !cur.is_empty() {
                        tokens.push(std::mem::take(&mut cur));
                    }
                }
                c => cur.push(c),
            }
        }
        if !cur.is_empty() {
            tokens.push(cur);
        }
    }
    if tokens.is_empty() {
        return Err(TermError::UnexpectedEnd);
    }
    Ok(tokens)
}

fn parse_tokens(tokens: &[String], pos: &mut usize, sig: &Signature) -> Result<Term, TermError> {
    let tok = tokens.get(*pos).ok_or(TermError::UnexpectedEnd)?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let head = tokens.get(*pos).ok_or(TermError::Unbalanced)?;
            *pos += 1;
            let arity = sig
                .arity(head)
                .ok_or_else(|| TermError::UnknownSymbol(head.clone()))?;
            let mut args = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(TermError::Unbalanced),
                    Some(t) if t == ")" => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => args.push(parse_tokens(tokens, pos, sig)?),
                }
            }
            if args.len() != arity {
                return Err(TermError::ArityMismatch {
                    symbol: head.clone(),
                    expected: arity,
                    got: args.len(),
                });
            }
            Ok(Term::App { sym: head.clone(), args })
        }
        ")" => Err(TermError::Unbalanced),
        ident => {
            if let Some(arity) = sig.arity(ident) {
                // A bare symbol is only a term when nullary.
                if arity == 0 {
                    return Ok(Term::App { sym: ident.to_string(), args: Vec::new() });
                }
                return Err(TermError::SymbolAsVariable(ident.to_string()));
            }
            if !is_identifier(ident) {
                return Err(TermError::BadIdentifier(ident.to_string()));
            }
            Ok(Term::Var(ident.to_string()))
        }
    }
}

/// All terms of depth at most `max_depth` over the given variables, in
/// depth-major order and lexicographic on the printed form within each
/// depth. With `exact_vars` set, keeps only terms whose variable set is
/// exactly `vars` (the members of `T_|vars|`).
pub fn enumerate_terms(
    sig: &Signature,
    vars: &[String],
    max_depth: usize,
    exact_vars: bool,
) -> Vec<Term> {
    let mut by_depth: Vec<Vec<Term>> = Vec::with_capacity(max_depth + 1);
    let mut depth0: Vec<Term> = vars.iter().map(Term::var).collect();
    depth0.sort_by_key(|t| t.to_string());
    by_depth.push(depth0);

    for d in 1..=max_depth {
        let below: Vec<&Term> = by_depth.iter().flatten().collect();
        let deepest_start = below.len() - by_depth[d - 1].len();
        let mut level = Vec::new();
        for sym in sig.symbols() {
            if sym.arity == 0 {
                continue;
            }
            // Odometer over argument tuples; at least one argument must
            // come from the previous depth so the result has depth d.
            let mut idx = vec![0usize; sym.arity];
            loop {
                if idx.iter().any(|&i| i >= deepest_start) {
                    let args: Vec<Term> = idx.iter().map(|&i| below[i].clone()).collect();
                    level.push(Term::App { sym: sym.name.clone(), args });
                }
                let mut k = sym.arity;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < below.len() {
                        break;
                    }
                    idx[k] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        level.sort_by_key(|t| t.to_string());
        by_depth.push(level);
    }

    let mut out: Vec<Term> = by_depth.into_iter().flatten().collect();
    if exact_vars {
        out.retain(|t| {
            let tv = t.variables();
            tv.len() == vars.len() && vars.iter().all(|v| tv.contains(v))
        });
    }
    out
}

/// The variables `x1..xn`.
pub fn numbered_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::parse("mul 2").unwrap()
    }

    #[test]
    fn parse_app() {
        let t = Term::parse("(mul x y)", &sig()).unwrap();
        assert_eq!(t, Term::app("mul", vec![Term::var("x"), Term::var("y")]));
    }

    #[test]
    fn parse_bare_variable() {
        assert_eq!(Term::parse("x", &sig()).unwrap(), Term::var("x"));
    }

    #[test]
    fn nested_print_round_trip() {
        let text = "(mul (mul x y) y)";
        let t = Term::parse(text, &sig()).unwrap();
        assert_eq!(t.to_string(), text);
        assert_eq!(Term::parse(&t.to_string(), &sig()).unwrap(), t);
    }

    #[test]
    fn arity_mismatch_rejected() {
        assert!(matches!(
            Term::parse("(mul x)", &sig()),
            Err(TermError::ArityMismatch { .. })
        ));
        assert!(matches!(
            Term::parse("(mul x y z)", &sig()),
            Err(TermError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn unbalanced_rejected() {
        assert!(matches!(Term::parse("(mul x y", &sig()), Err(TermError::Unbalanced)));
        assert!(matches!(
            Term::parse("mul x y)", &sig()),
            Err(TermError::SymbolAsVariable(_))
        ));
    }

    #[test]
    fn variables_first_occurrence_order() {
        let t = Term::parse("(mul (mul y x) y)", &sig()).unwrap();
        assert_eq!(t.variables(), vec!["y".to_string(), "x".to_string()]);
    }

    #[test]
    fn repeated_variable_counted_once() {
        let t = Term::parse("(mul (mul x y) x)", &sig()).unwrap();
        assert_eq!(t.variables(), vec!["x".to_string(), "y".to_string()]);
        assert!(t.is_member_tn(2));
    }

    #[test]
    fn tn_membership() {
        let s = sig();
        assert!(Term::parse("(mul x1 x1)", &s).unwrap().is_member_tn(1));
        assert!(!Term::parse("(mul x1 x2)", &s).unwrap().is_member_tn(1));
        assert!(Term::parse("(mul x1 x2)", &s).unwrap().is_member_tn(2));
    }

    #[test]
    fn substitution_examples() {
        let s = sig();
        let t = Term::parse("(mul y1 y2)", &s).unwrap();
        let env: BTreeMap<String, Term> = [
            ("y1".to_string(), Term::parse("(mul x1 x2)", &s).unwrap()),
            ("y2".to_string(), Term::parse("(mul x2 x1)", &s).unwrap()),
        ]
        .into();
        assert_eq!(
            t.substitute(&env).unwrap().to_string(),
            "(mul (mul x1 x2) (mul x2 x1))"
        );

        let x = Term::var("x");
        let env: BTreeMap<String, Term> = [("x".to_string(), x.clone())].into();
        assert_eq!(x.substitute(&env).unwrap(), x);

        let t = Term::parse("(mul y1 y1)", &s).unwrap();
        let env: BTreeMap<String, Term> = [("y1".to_string(), Term::var("x"))].into();
        assert_eq!(t.substitute(&env).unwrap().to_string(), "(mul x x)");
    }

    #[test]
    fn missing_binding_is_an_error() {
        let t = Term::parse("(mul x y)", &sig()).unwrap();
        let env: BTreeMap<String, Term> = [("x".to_string(), Term::var("x"))].into();
        assert_eq!(
            t.substitute(&env),
            Err(TermError::MissingBinding("y".to_string()))
        );
    }

    #[test]
    fn depth_convention() {
        let s = sig();
        assert_eq!(Term::var("x").depth(), 0);
        assert_eq!(Term::parse("(mul x y)", &s).unwrap().depth(), 1);
        assert_eq!(Term::parse("(mul (mul x y) y)", &s).unwrap().depth(), 2);
    }

    #[test]
    fn enumerate_depth1_one_var_exact() {
        let terms = enumerate_terms(&sig(), &["x".to_string()], 1, true);
        let strs: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        assert_eq!(strs, vec!["x", "(mul x x)"]);
    }

    #[test]
    fn enumerate_depth1_two_vars_exact() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let terms = enumerate_terms(&sig(), &vars, 1, true);
        let strs: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        assert_eq!(strs, vec!["(mul x y)", "(mul y x)"]);
    }

    #[test]
    fn enumerate_depth0_two_vars_exact_is_empty() {
        let vars = vec!["x".to_string(), "y".to_string()];
        assert!(enumerate_terms(&sig(), &vars, 0, true).is_empty());
    }

    #[test]
    fn nullary_symbol_parses_as_constant() {
        let s = Signature::parse("c 0\nmul 2").unwrap();
        let t = Term::parse("(mul c x)", &s).unwrap();
        assert_eq!(t.to_string(), "(mul c x)");
        assert_eq!(t.variables(), vec!["x".to_string()]);
    }
}
