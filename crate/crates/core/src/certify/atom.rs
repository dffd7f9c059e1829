use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::CertifyError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Sym(String),
    Int(BigInt),
}

impl Term {
    pub fn sym(s: impl Into<String>) -> Self {
        Term::Sym(s.into())
    }

    pub fn int(v: impl Into<BigInt>) -> Self {
        Term::Int(v.into())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Sym(s) => f.write_str(s),
            Term::Int(v) => write!(f, "{v}"),
        }
    }
}

/// A ground atom `predicate(arg, ...)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Self {
            predicate: predicate.into(),
            args,
        }
    }

    /// Parses `pred(a, b)`; integer tokens become [`Term::Int`], anything
    /// else a symbol.
    pub fn parse(text: &str) -> Result<Self, CertifyError> {
        let (predicate, tokens) = split_atom(text)?;
        Ok(Self {
            predicate,
            args: tokens.into_iter().map(|t| constant(&t)).collect(),
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

/// An atom with variables. In rule text a variable is an identifier that
/// starts with an uppercase letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub predicate: String,
    pub args: Vec<PatternTerm>,
}

pub(crate) type Bindings = BTreeMap<String, Term>;

impl Pattern {
    pub fn parse(text: &str) -> Result<Self, CertifyError> {
        let (predicate, tokens) = split_atom(text)?;
        let args = tokens
            .into_iter()
            .map(|t| {
                let is_var = t.starts_with(|c: char| c.is_ascii_uppercase())
                    && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if is_var {
                    PatternTerm::Var(t)
                } else {
                    PatternTerm::Const(constant(&t))
                }
            })
            .collect();
        Ok(Self { predicate, args })
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|a| match a {
            PatternTerm::Var(v) => Some(v.as_str()),
            PatternTerm::Const(_) => None,
        })
    }

    /// Extends `bindings` so that the pattern equals `atom`, if possible.
    pub(crate) fn unify(&self, atom: &Atom, bindings: &Bindings) -> Option<Bindings> {
        if self.predicate != atom.predicate || self.args.len() != atom.args.len() {
            return None;
        }
        let mut out = bindings.clone();
        for (p, t) in self.args.iter().zip(&atom.args) {
            match p {
                PatternTerm::Const(c) if c != t => return None,
                PatternTerm::Const(_) => {}
                PatternTerm::Var(v) => match out.get(v) {
                    Some(bound) if bound != t => return None,
                    Some(_) => {}
                    None => {
                        out.insert(v.clone(), t.clone());
                    }
                },
            }
        }
        Some(out)
    }

    pub(crate) fn instantiate(&self, bindings: &Bindings) -> Option<Atom> {
        let args = self
            .args
            .iter()
            .map(|a| match a {
                PatternTerm::Const(c) => Some(c.clone()),
                PatternTerm::Var(v) => bindings.get(v).cloned(),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Atom::new(self.predicate.clone(), args))
    }
}

fn constant(token: &str) -> Term {
    match token.parse::<BigInt>() {
        Ok(v) => Term::Int(v),
        Err(_) => Term::Sym(token.to_string()),
    }
}

fn split_atom(text: &str) -> Result<(String, Vec<String>), CertifyError> {
    let err = |reason: &str| CertifyError::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let text = text.trim();
    let open = text.find('(').ok_or_else(|| err("missing `(`"))?;
    let inner = text
        .strip_suffix(')')
        .ok_or_else(|| err("missing closing `)`"))?;
    let predicate = text[..open].trim();
    if predicate.is_empty()
        || !predicate
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
    {
        return Err(err("bad predicate name"));
    }
    let body = &inner[open + 1..];
    if body.contains(['(', ')']) {
        return Err(err("nested parentheses"));
    }
    let tokens: Vec<String> = body.split(',').map(|s| s.trim().to_string()).collect();
    if tokens.iter().any(String::is_empty) {
        return Err(err("empty argument"));
    }
    Ok((predicate.to_string(), tokens))
}
