//! Quantifier-free formulas over relation symbols, written as
//! s-expressions: `(and (R x0 y0) (not (R y0 x0)))`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{FiniteStructure, ProductError};

/// Decides an atom from its relation name and argument variables.
pub type AtomOracle<'a> = dyn FnMut(&str, &[String]) -> Result<bool, ProductError> + 'a;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom { rel: String, args: Vec<String> },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn atom(rel: &str, args: &[&str]) -> Self {
        Formula::Atom {
            rel: rel.to_string(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn negate(self) -> Self {
        Formula::Not(Box::new(self))
    }

    /// Atomic or the negation of an atomic formula.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom { .. } => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom { .. }),
            _ => false,
        }
    }

    pub fn variables(&self) -> Vec<String> {
        fn go(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom { args, .. } => {
                    for a in args {
                        if !out.contains(a) {
                            out.push(a.clone());
                        }
                    }
                }
                Formula::Not(g) => go(g, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, out)),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out.sort();
        out
    }

    /// For a formula in `x0..x(k-1)` and `y0..y(k-1)`, the tuple arity `k`.
    pub fn pair_arity(&self) -> Result<usize, ProductError> {
        let mut k = 0;
        for v in self.variables() {
            let bad = || ProductError::Formula(format!("variable {v} is not of the form x<i> or y<i>"));
            let (head, idx) = v.split_at(1);
            if head != "x" && head != "y" {
                return Err(bad());
            }
            let i: usize = idx.parse().map_err(|_| bad())?;
            k = k.max(i + 1);
        }
        Ok(k.max(1))
    }

    /// Evaluates with the variables bound by `env`.
    pub fn eval(&self, s: &FiniteStructure, env: &BTreeMap<String, usize>) -> Result<bool, ProductError> {
        self.eval_with(&mut |rel, args| {
            let vals = args
                .iter()
                .map(|a| env.get(a).copied().ok_or_else(|| ProductError::Unbound(a.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            s.holds(rel, &vals)
        })
    }

    /// Classical evaluation with atoms decided by `atom`.
    pub fn eval_with(
        &self,
        atom: &mut AtomOracle<'_>,
    ) -> Result<bool, ProductError> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom { rel, args } => atom(rel, args)?,
            Formula::Not(g) => !g.eval_with(atom)?,
            Formula::And(gs) => {
                for g in gs {
                    if !g.eval_with(atom)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if g.eval_with(atom)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom { rel, args } => {
                write!(f, "({rel}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) | Formula::Or(gs) => {
                f.write_str(if matches!(self, Formula::And(_)) { "(and" } else { "(or" })?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Sym(String),
    List(Vec<Sexp>),
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

fn read(tokens: &[String], pos: &mut usize) -> Result<Sexp, ProductError> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| ProductError::Parse("unexpected end of formula".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                    None => return Err(ProductError::Parse("missing ')'".into())),
                }
            }
        }
        ")" => Err(ProductError::Parse("unexpected ')'".into())),
        sym => Ok(Sexp::Sym(sym.to_string())),
    }
}

fn to_formula(e: &Sexp) -> Result<Formula, ProductError> {
    match e {
        Sexp::Sym(s) if s == "true" => Ok(Formula::True),
        Sexp::Sym(s) if s == "false" => Ok(Formula::False),
        Sexp::Sym(s) => Err(ProductError::Parse(format!("bare symbol {s:?}"))),
        Sexp::List(items) => {
            let Some(Sexp::Sym(head)) = items.first() else {
                return Err(ProductError::Parse("a list must start with a symbol".into()));
            };
            let rest = &items[1..];
            match head.as_str() {
                "not" => {
                    if rest.len() != 1 {
                        return Err(ProductError::Parse("not takes one argument".into()));
                    }
                    Ok(Formula::Not(Box::new(to_formula(&rest[0])?)))
                }
                "and" | "or" => {
                    let gs = rest.iter().map(to_formula).collect::<Result<Vec<_>, _>>()?;
                    Ok(if head == "and" { Formula::And(gs) } else { Formula::Or(gs) })
                }
                rel => {
                    let args = rest
                        .iter()
                        .map(|a| match a {
                            Sexp::Sym(v) => Ok(v.clone()),
                            Sexp::List(_) => Err(ProductError::Parse(format!(
                                "arguments of {rel} must be variables"
                            ))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Formula::Atom {
                        rel: rel.to_string(),
                        args,
                    })
                }
            }
        }
    }
}

impl FromStr for Formula {
    type Err = ProductError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let e = read(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(ProductError::Parse("trailing tokens".into()));
        }
        to_formula(&e)
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_print_roundtrip() {
        let text = "(and (R x0 y0) (not (R y0 x0)))";
        let f: Formula = text.parse().unwrap();
        assert_eq!(f.to_string(), text);
        assert_eq!(f.variables(), vec!["x0", "y0"]);
        assert_eq!(f.pair_arity().unwrap(), 1);
        assert!(!f.is_literal());
        assert!("(not (R x0 y0))".parse::<Formula>().unwrap().is_literal());
    }

    #[test]
    fn parse_errors() {
        for bad in ["(R x0", "R", "(and (R x0) ))", "((R) x)", "(R (x0))"] {
            assert!(bad.parse::<Formula>().is_err(), "{bad}");
        }
    }

    #[test]
    fn bad_variable_names() {
        let f: Formula = "(R a b)".parse().unwrap();
        assert!(f.pair_arity().is_err());
    }
}
