//! Monadic second-order formulas over finite relational structures:
//! parsing, exhaustive evaluation, definable set families and definition
//! schemes.
//!
//! Variables starting with an uppercase letter range over sets, all others
//! over single elements.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::{RelStructure, Relation};
use crate::partitive::{Mask, SetFamily};

pub const DEFAULT_SO_DOMAIN_CAP: usize = 14;
/// Largest quantifier expansion evaluation will attempt.
pub const EXPANSION_BUDGET: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<String>),
    In(String, String),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ExistsFo(String, Box<Formula>),
    ForallFo(String, Box<Formula>),
    ExistsSo(String, Box<Formula>),
    ForallSo(String, Box<Formula>),
}

use Formula as F;

pub fn is_set_var(v: &str) -> bool {
    v.chars().next().is_some_and(|c| c.is_uppercase())
}

impl Formula {
    pub fn parse(text: &str) -> Result<Formula> {
        let toks = lex(text)?;
        let mut p = FParser { toks, i: 0 };
        let f = p.implication()?;
        if p.i != p.toks.len() {
            return Err(Error::input(format!("unexpected '{}' at offset {}", p.toks[p.i].1, p.toks[p.i].0)));
        }
        Ok(f)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            F::True | F::False => {}
            F::Atom(_, vs) => vs.iter().for_each(|v| see(v, bound)),
            F::In(a, b) | F::Eq(a, b) => {
                see(a, bound);
                see(b, bound);
            }
            F::Not(a) => a.collect_free(bound, out),
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            F::ExistsFo(v, a) | F::ForallFo(v, a) | F::ExistsSo(v, a) | F::ForallSo(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Relation symbols used, with their arities.
    pub fn relations(&self) -> BTreeMap<String, BTreeSet<usize>> {
        let mut out: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        self.walk(&mut |f| {
            if let F::Atom(r, vs) = f {
                out.entry(r.clone()).or_default().insert(vs.len());
            }
        });
        out
    }

    fn walk(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            F::Not(a) | F::ExistsFo(_, a) | F::ForallFo(_, a) | F::ExistsSo(_, a) | F::ForallSo(_, a) => a.walk(f),
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            _ => {}
        }
    }

    /// Counts of (set, element) quantifiers.
    pub fn quantifier_counts(&self) -> (usize, usize) {
        let (mut so, mut fo) = (0, 0);
        self.walk(&mut |f| match f {
            F::ExistsSo(..) | F::ForallSo(..) => so += 1,
            F::ExistsFo(..) | F::ForallFo(..) => fo += 1,
            _ => {}
        });
        (so, fo)
    }

    fn has_so(&self) -> bool {
        self.quantifier_counts().0 > 0
    }

    /// Branches explored by exhaustive evaluation on a domain of size n.
    pub fn expansion(&self, n: usize) -> u128 {
        match self {
            F::Not(a) => a.expansion(n),
            F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => a.expansion(n).saturating_add(b.expansion(n)),
            F::ExistsFo(_, a) | F::ForallFo(_, a) => (n as u128).max(1).saturating_mul(a.expansion(n)),
            F::ExistsSo(_, a) | F::ForallSo(_, a) => {
                let subsets = if n >= 127 { u128::MAX } else { 1u128 << n };
                subsets.saturating_mul(a.expansion(n))
            }
            _ => 1,
        }
    }

    /// Negation normal form: negations only on atoms, no implications.
    pub fn nnf(&self) -> Formula {
        self.nnf_pol(true)
    }

    fn nnf_pol(&self, pos: bool) -> Formula {
        let b = |f: Formula| Box::new(f);
        match (self, pos) {
            (F::True, true) | (F::False, false) => F::True,
            (F::True, false) | (F::False, true) => F::False,
            (F::Atom(..) | F::In(..) | F::Eq(..), true) => self.clone(),
            (F::Atom(..) | F::In(..) | F::Eq(..), false) => F::Not(b(self.clone())),
            (F::Not(a), _) => a.nnf_pol(!pos),
            (F::And(x, y), true) => F::And(b(x.nnf_pol(true)), b(y.nnf_pol(true))),
            (F::And(x, y), false) => F::Or(b(x.nnf_pol(false)), b(y.nnf_pol(false))),
            (F::Or(x, y), true) => F::Or(b(x.nnf_pol(true)), b(y.nnf_pol(true))),
            (F::Or(x, y), false) => F::And(b(x.nnf_pol(false)), b(y.nnf_pol(false))),
            (F::Implies(x, y), true) => F::Or(b(x.nnf_pol(false)), b(y.nnf_pol(true))),
            (F::Implies(x, y), false) => F::And(b(x.nnf_pol(true)), b(y.nnf_pol(false))),
            (F::ExistsFo(v, a), true) | (F::ForallFo(v, a), false) => F::ExistsFo(v.clone(), b(a.nnf_pol(pos))),
            (F::ForallFo(v, a), true) | (F::ExistsFo(v, a), false) => F::ForallFo(v.clone(), b(a.nnf_pol(pos))),
            (F::ExistsSo(v, a), true) | (F::ForallSo(v, a), false) => F::ExistsSo(v.clone(), b(a.nnf_pol(pos))),
            (F::ForallSo(v, a), true) | (F::ExistsSo(v, a), false) => F::ForallSo(v.clone(), b(a.nnf_pol(pos))),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    Formula::parse(text)
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

fn is_quant(f: &Formula) -> bool {
    matches!(f, F::ExistsFo(..) | F::ForallFo(..) | F::ExistsSo(..) | F::ForallSo(..))
}

fn is_binary(f: &Formula) -> bool {
    matches!(f, F::And(..) | F::Or(..) | F::Implies(..))
}

/// Quantifier bodies extend to the right, so a quantifier used as an
/// operand is parenthesised.
struct Operand<'a>(&'a Formula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if is_quant(self.0) {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let quant = |f: &mut fmt::Formatter<'_>, q: &str, v: &str, body: &Formula| {
            if is_binary(body) {
                write!(f, "{q} {v} {body}")
            } else {
                write!(f, "{q} {v} ({body})")
            }
        };
        match self {
            F::True => write!(f, "true"),
            F::False => write!(f, "false"),
            F::Atom(r, vs) => write!(f, "{r}({})", vs.join(",")),
            F::In(a, b) => write!(f, "{a} in {b}"),
            F::Eq(a, b) => write!(f, "{a} = {b}"),
            F::Not(a) => write!(f, "not {}", Operand(a)),
            F::And(a, b) => write!(f, "({} and {})", Operand(a), Operand(b)),
            F::Or(a, b) => write!(f, "({} or {})", Operand(a), Operand(b)),
            F::Implies(a, b) => write!(f, "({} -> {})", Operand(a), Operand(b)),
            F::ExistsFo(v, a) | F::ExistsSo(v, a) => quant(f, "exists", v, a),
            F::ForallFo(v, a) | F::ForallSo(v, a) => quant(f, "forall", v, a),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    let cs: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < cs.len() {
        let (pos, c) = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if "(),=[]{}".contains(c) {
            out.push((pos, c.to_string()));
            i += 1;
        } else if c == '-' && cs.get(i + 1).map(|p| p.1) == Some('>') {
            out.push((pos, "->".into()));
            i += 2;
        } else if c.is_alphanumeric() || c == '_' {
            let mut s = String::new();
            while i < cs.len() && (cs[i].1.is_alphanumeric() || "_.'".contains(cs[i].1)) {
                s.push(cs[i].1);
                i += 1;
            }
            out.push((pos, s));
        } else {
            return Err(Error::input(format!("unexpected character '{c}' at offset {pos}")));
        }
    }
    Ok(out)
}

const KEYWORDS: [&str; 8] = ["not", "and", "or", "exists", "forall", "in", "true", "false"];

struct FParser {
    toks: Vec<(usize, String)>,
    i: usize,
}

impl FParser {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.i).map(|t| t.1.as_str())
    }

    fn offset(&self) -> usize {
        self.toks.get(self.i).map(|t| t.0).unwrap_or(usize::MAX)
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        match self.toks.get(self.i) {
            Some((pos, t)) => Err(Error::input(format!("expected {what} at offset {pos}, found '{t}'"))),
            None => Err(Error::input(format!("expected {what} at end of input"))),
        }
    }

    fn eat(&mut self, t: &str) -> Result<()> {
        if self.peek() == Some(t) {
            self.i += 1;
            Ok(())
        } else {
            self.err(&format!("'{t}'"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(t) if t.chars().next().is_some_and(|c| c.is_alphanumeric() || c == '_') && !KEYWORDS.contains(&t) => {
                let t = t.to_string();
                self.i += 1;
                Ok(t)
            }
            _ => self.err("a name"),
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let a = self.disjunction()?;
        if self.peek() == Some("->") {
            self.i += 1;
            let b = self.implication()?;
            return Ok(F::Implies(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut a = self.conjunction()?;
        while self.peek() == Some("or") {
            self.i += 1;
            let b = self.conjunction()?;
            a = F::Or(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut a = self.unary()?;
        while self.peek() == Some("and") {
            self.i += 1;
            let b = self.unary()?;
            a = F::And(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            None => self.err("a formula"),
            Some("not") => {
                self.i += 1;
                Ok(F::Not(Box::new(self.unary()?)))
            }
            Some(q @ ("exists" | "forall")) => {
                let exists = q == "exists";
                self.i += 1;
                let mut vars = vec![self.ident()?];
                while self.peek() == Some(",") {
                    self.i += 1;
                    vars.push(self.ident()?);
                }
                let mut body = self.implication()?;
                for v in vars.into_iter().rev() {
                    let b = Box::new(body);
                    body = match (exists, is_set_var(&v)) {
                        (true, false) => F::ExistsFo(v, b),
                        (false, false) => F::ForallFo(v, b),
                        (true, true) => F::ExistsSo(v, b),
                        (false, true) => F::ForallSo(v, b),
                    };
                }
                Ok(body)
            }
            Some("true") => {
                self.i += 1;
                Ok(F::True)
            }
            Some("false") => {
                self.i += 1;
                Ok(F::False)
            }
            Some(open @ ("(" | "[" | "{")) => {
                let close = match open {
                    "(" => ")",
                    "[" => "]",
                    _ => "}",
                };
                self.i += 1;
                let f = self.implication()?;
                self.eat(close)?;
                Ok(f)
            }
            Some(_) => {
                let at = self.offset();
                let name = self.ident()?;
                match self.peek() {
                    Some("(") => {
                        self.i += 1;
                        let mut vs = Vec::new();
                        if self.peek() != Some(")") {
                            vs.push(self.ident()?);
                            while self.peek() == Some(",") {
                                self.i += 1;
                                vs.push(self.ident()?);
                            }
                        }
                        self.eat(")")?;
                        Ok(F::Atom(name, vs))
                    }
                    Some("in") => {
                        self.i += 1;
                        let set = self.ident()?;
                        if is_set_var(&name) || !is_set_var(&set) {
                            return Err(Error::input(format!("membership needs an element and a set variable at offset {at}")));
                        }
                        Ok(F::In(name, set))
                    }
                    Some("=") => {
                        self.i += 1;
                        let other = self.ident()?;
                        Ok(F::Eq(name, other))
                    }
                    _ => self.err("'(', 'in' or '='"),
                }
            }
        }
    }
}

/// Values of free variables: elements by domain index, sets as masks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub elems: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, Mask>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn elem(mut self, v: &str, d: usize) -> Self {
        self.elems.insert(v.into(), d);
        self
    }

    pub fn set(mut self, v: &str, m: Mask) -> Self {
        self.sets.insert(v.into(), m);
        self
    }

    /// Builds an assignment from element names.
    pub fn named(s: &RelStructure, elems: &[(&str, &str)], sets: &[(&str, &[&str])]) -> Result<Self> {
        let idx = |d: &str| s.index_of(d).ok_or_else(|| Error::input(format!("unknown element {d}")));
        let mut a = Assignment::new();
        for (v, d) in elems {
            a.elems.insert(v.to_string(), idx(d)?);
        }
        for (v, ds) in sets {
            let mut m = 0;
            for d in ds.iter() {
                m |= 1 << idx(d)?;
            }
            a.sets.insert(v.to_string(), m);
        }
        Ok(a)
    }
}

fn check_signature(s: &RelStructure, f: &Formula) -> Result<()> {
    for (r, arities) in f.relations() {
        let rel = s.relations.get(&r).ok_or_else(|| Error::input(format!("relation {r} is not in the structure")))?;
        if let Some(a) = arities.iter().find(|&&a| a != rel.arity) {
            return Err(Error::input(format!("relation {r} has arity {}, used with {a}", rel.arity)));
        }
    }
    Ok(())
}

fn check_budget(s: &RelStructure, f: &Formula) -> Result<()> {
    let n = s.domain.len();
    if f.has_so() {
        check_cap("domain", n, DEFAULT_SO_DOMAIN_CAP)?;
    }
    let e = f.expansion(n);
    if e > EXPANSION_BUDGET {
        return Err(Error::Capacity {
            what: "quantifier expansion".into(),
            size: usize::try_from(e).unwrap_or(usize::MAX),
            cap: EXPANSION_BUDGET as usize,
        });
    }
    Ok(())
}

/// Exhaustive truth value of `f` in `s` under `asg`.
pub fn eval_formula(s: &RelStructure, f: &Formula, asg: &Assignment) -> Result<bool> {
    check_signature(s, f)?;
    check_budget(s, f)?;
    for v in f.free_vars() {
        let bound = if is_set_var(&v) { asg.sets.contains_key(&v) } else { asg.elems.contains_key(&v) };
        if !bound {
            return Err(Error::input(format!("variable {v} is unbound")));
        }
    }
    let mut env = Env { elems: asg.elems.clone().into_iter().collect(), sets: asg.sets.clone().into_iter().collect() };
    Ok(holds(s, f, &mut env))
}

struct Env {
    elems: Vec<(String, usize)>,
    sets: Vec<(String, Mask)>,
}

impl Env {
    fn elem(&self, v: &str) -> usize {
        self.elems.iter().rev().find(|e| e.0 == v).unwrap().1
    }

    fn set(&self, v: &str) -> Mask {
        self.sets.iter().rev().find(|e| e.0 == v).unwrap().1
    }
}

fn holds(s: &RelStructure, f: &Formula, env: &mut Env) -> bool {
    let n = s.domain.len();
    match f {
        F::True => true,
        F::False => false,
        F::Atom(r, vs) => {
            let t: Vec<usize> = vs.iter().map(|v| env.elem(v)).collect();
            s.holds(r, &t)
        }
        F::In(x, set) => env.set(set) >> env.elem(x) & 1 == 1,
        F::Eq(a, b) => {
            if is_set_var(a) {
                env.set(a) == env.set(b)
            } else {
                env.elem(a) == env.elem(b)
            }
        }
        F::Not(a) => !holds(s, a, env),
        F::And(a, b) => holds(s, a, env) && holds(s, b, env),
        F::Or(a, b) => holds(s, a, env) || holds(s, b, env),
        F::Implies(a, b) => !holds(s, a, env) || holds(s, b, env),
        F::ExistsFo(v, a) | F::ForallFo(v, a) => {
            let want = matches!(f, F::ExistsFo(..));
            for d in 0..n {
                env.elems.push((v.clone(), d));
                let r = holds(s, a, env);
                env.elems.pop();
                if r == want {
                    return want;
                }
            }
            !want
        }
        F::ExistsSo(v, a) | F::ForallSo(v, a) => {
            let want = matches!(f, F::ExistsSo(..));
            for m in 0..(1u64 << n) {
                env.sets.push((v.clone(), m));
                let r = holds(s, a, env);
                env.sets.pop();
                if r == want {
                    return want;
                }
            }
            !want
        }
    }
}

/// All subsets A of the domain with S |= f(A), for f with the single free
/// set variable `var`.
pub fn definable_family(s: &RelStructure, f: &Formula, var: &str) -> Result<SetFamily> {
    check_cap("domain", s.domain.len(), DEFAULT_SO_DOMAIN_CAP)?;
    let free = f.free_vars();
    if free.iter().any(|v| v != var) {
        return Err(Error::input(format!("formula has free variables other than {var}: {free:?}")));
    }
    check_signature(s, f)?;
    let n = s.domain.len();
    let wrapped = F::ExistsSo(var.into(), Box::new(f.clone()));
    check_budget(s, &wrapped)?;
    let mut members = Vec::new();
    for m in 0..(1u64 << n) {
        let mut env = Env { elems: vec![], sets: vec![(var.into(), m)] };
        if holds(s, f, &mut env) {
            members.push(m);
        }
    }
    SetFamily::from_masks(s.domain.clone(), members)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitionScheme {
    pub k: usize,
    pub phi: Formula,
    /// One formula per copy, free element variable `x1`.
    pub psi: Vec<Formula>,
    /// Output relation and copy indices (1-based) to a formula in x1..xt.
    pub theta: BTreeMap<(String, Vec<usize>), Formula>,
    pub params: Vec<String>,
}

/// JSON form of a definition scheme, with formulas as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDoc {
    pub k: usize,
    pub phi: String,
    pub psi: Vec<String>,
    pub theta: Vec<ThetaDoc>,
    #[serde(default)]
    pub params: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaDoc {
    pub relation: String,
    pub copies: Vec<usize>,
    pub formula: String,
}

fn fo_var(i: usize) -> String {
    format!("x{i}")
}

impl DefinitionScheme {
    pub fn from_doc(d: &SchemeDoc) -> Result<Self> {
        let mut theta = BTreeMap::new();
        for t in &d.theta {
            theta.insert((t.relation.clone(), t.copies.clone()), Formula::parse(&t.formula)?);
        }
        let s = DefinitionScheme {
            k: d.k,
            phi: Formula::parse(&d.phi)?,
            psi: d.psi.iter().map(|p| Formula::parse(p)).collect::<Result<_>>()?,
            theta,
            params: d.params.clone(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn to_doc(&self) -> SchemeDoc {
        SchemeDoc {
            k: self.k,
            phi: self.phi.to_string(),
            psi: self.psi.iter().map(|p| p.to_string()).collect(),
            theta: self
                .theta
                .iter()
                .map(|((r, c), f)| ThetaDoc { relation: r.clone(), copies: c.clone(), formula: f.to_string() })
                .collect(),
            params: self.params.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: SchemeDoc = serde_json::from_str(text).map_err(|e| Error::input(format!("scheme JSON: {e}")))?;
        Self::from_doc(&d)
    }

    /// Output relations with their arities.
    pub fn output_signature(&self) -> Result<BTreeMap<String, usize>> {
        let mut out = BTreeMap::new();
        for (r, c) in self.theta.keys() {
            if *out.entry(r.clone()).or_insert(c.len()) != c.len() {
                return Err(Error::input(format!("output relation {r} used with two arities")));
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.psi.len() != self.k {
            return Err(Error::input("a scheme needs k >= 1 and one domain formula per copy"));
        }
        self.output_signature()?;
        let params: BTreeSet<String> = self.params.iter().cloned().collect();
        if let Some(p) = params.iter().find(|p| !is_set_var(p)) {
            return Err(Error::input(format!("parameter {p} is not a set variable")));
        }
        let within = |f: &Formula, extra: &[String], what: &str| -> Result<()> {
            for v in f.free_vars() {
                if !params.contains(&v) && !extra.contains(&v) {
                    return Err(Error::input(format!("{what} has free variable {v}")));
                }
            }
            Ok(())
        };
        within(&self.phi, &[], "phi")?;
        for p in &self.psi {
            within(p, &[fo_var(1)], "psi")?;
        }
        for ((r, c), f) in &self.theta {
            if c.iter().any(|&i| i == 0 || i > self.k) {
                return Err(Error::input(format!("copy index out of range for {r}")));
            }
            let vars: Vec<String> = (1..=c.len()).map(fo_var).collect();
            within(f, &vars, &format!("theta for {r}"))?;
        }
        Ok(())
    }
}

/// Name of copy i of element d in a scheme's output.
pub fn copy_name(d: &str, i: usize) -> String {
    format!("({d},{i})")
}

/// The output structure of `d` on `(s, gamma)`, or None when phi fails.
pub fn apply_scheme(d: &DefinitionScheme, s: &RelStructure, gamma: &Assignment) -> Result<Option<RelStructure>> {
    d.validate()?;
    for p in &d.params {
        if !gamma.sets.contains_key(p) {
            return Err(Error::input(format!("parameter {p} is unassigned")));
        }
    }
    let all: Vec<&Formula> = std::iter::once(&d.phi).chain(&d.psi).chain(d.theta.values()).collect();
    for f in &all {
        check_signature(s, f)?;
    }
    if !eval_formula(s, &d.phi, gamma)? {
        return Ok(None);
    }
    let mut copies: Vec<(usize, usize)> = Vec::new();
    for dd in 0..s.domain.len() {
        for (i, p) in d.psi.iter().enumerate() {
            if eval_formula(s, p, &gamma.clone().elem(&fo_var(1), dd))? {
                copies.push((dd, i + 1));
            }
        }
    }
    let mut t = RelStructure::new(copies.iter().map(|&(dd, i)| copy_name(&s.domain[dd], i)));
    for (r, arity) in d.output_signature()? {
        t.relations.insert(r, Relation { arity, tuples: BTreeSet::new() });
    }
    for ((r, c), f) in &d.theta {
        let cands: Vec<Vec<usize>> = c
            .iter()
            .map(|&ci| (0..copies.len()).filter(|&x| copies[x].1 == ci).collect())
            .collect();
        let mut tuple = vec![0; c.len()];
        tuples(&cands, 0, &mut tuple, &mut |tup| {
            let mut asg = gamma.clone();
            for (j, &x) in tup.iter().enumerate() {
                asg = asg.elem(&fo_var(j + 1), copies[x].0);
            }
            if eval_formula(s, f, &asg)? {
                t.insert(r, tup.to_vec())?;
            }
            Ok(())
        })?;
    }
    Ok(Some(t))
}

fn tuples(c: &[Vec<usize>], i: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if i == c.len() {
        return f(cur);
    }
    for &x in &c[i] {
        cur[i] = x;
        tuples(c, i + 1, cur, f)?;
    }
    Ok(())
}

/// Reflexive-transitive closure of the binary relation `rel`, free in x, y.
pub fn tc_formula(rel: &str) -> Formula {
    Formula::parse(&format!("forall X ((x in X and forall u, v ((u in X and {rel}(u,v)) -> v in X)) -> y in X)")).unwrap()
}

/// Def-2.4-style module condition on the free set X for relation `edg`.
pub fn module_formula() -> Formula {
    Formula::parse(
        "(exists x (x in X)) and forall z (not z in X -> forall x, y ((x in X and y in X) -> \
         ((edg(z,x) -> edg(z,y)) and (edg(x,z) -> edg(y,z)))))",
    )
    .unwrap()
}

/// {X, V-X} is a split: both sides have two elements and the arcs between
/// them in each direction form a product.
pub fn split_formula() -> Formula {
    let side = |inside: bool, v: &str| if inside { format!("{v} in X") } else { format!("not {v} in X") };
    let two = |inside: bool| format!("exists a, b (not a = b and {} and {})", side(inside, "a"), side(inside, "b"));
    let product = |from: bool| {
        format!(
            "forall x, y, u, v (({} and {} and {} and {} and edg(x,u) and edg(y,v)) -> edg(x,v))",
            side(from, "x"),
            side(from, "y"),
            side(!from, "u"),
            side(!from, "v")
        )
    };
    let parts = [two(true), two(false), product(true), product(false)];
    Formula::parse(&parts.map(|p| format!("({p})")).join(" and ")).unwrap()
}

/// The edge-contraction scheme: the parameter Y picks one element per
/// class of the symmetric closure of `eps`; output arcs join classes
/// holding an `edg` arc.
pub fn edge_contraction_scheme() -> DefinitionScheme {
    let xi = |a: &str, b: &str| {
        format!("(forall X (({a} in X and forall u, v ((u in X and (eps(u,v) or eps(v,u))) -> v in X)) -> {b} in X))")
    };
    let phi = format!(
        "forall x exists y (y in Y and {} and forall z ((z in Y and {}) -> z = y))",
        xi("x", "y"),
        xi("x", "z")
    );
    let theta = format!("exists u, v (x1 in Y and x2 in Y and edg(u,v) and {} and {})", xi("x1", "u"), xi("x2", "v"));
    DefinitionScheme {
        k: 1,
        phi: Formula::parse(&phi).unwrap(),
        psi: vec![Formula::parse("x1 in Y").unwrap()],
        theta: BTreeMap::from([(("edg".to_string(), vec![1, 1]), Formula::parse(&theta).unwrap())]),
        params: vec!["Y".into()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SimpleDigraph;

    #[test]
    fn round_trips() {
        for text in [
            "exists X (x in X)",
            "forall x (x = x)",
            "not (R(x) and S(x,y)) -> T()",
            "exists x R(x) and true",
            "(exists x R(x)) and false",
        ] {
            let f = Formula::parse(text).unwrap();
            let again = Formula::parse(&f.to_string()).unwrap();
            assert_eq!(f, again, "{text} -> {f}");
        }
        let f = Formula::parse("exists X (x in X)").unwrap();
        assert_eq!(f.to_string(), "exists X (x in X)");
    }

    #[test]
    fn malformed_input() {
        for bad in ["", "x in", "R(x", "exists (R(x))", "X in x", "R(x) and", "a = b)"] {
            assert!(Formula::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn closure_formula_shape() {
        let f = tc_formula("A");
        assert_eq!(f.quantifier_counts(), (1, 2));
        assert_eq!(f.free_vars(), BTreeSet::from(["x".to_string(), "y".to_string()]));
    }

    #[test]
    fn closure_on_a_path() {
        let g = SimpleDigraph::from_arcs([("1", "2"), ("2", "3")]).unwrap();
        let s = RelStructure::from_digraph(&g);
        let f = tc_formula("edg");
        let at = |x: &str, y: &str| eval_formula(&s, &f, &Assignment::named(&s, &[("x", x), ("y", y)], &[]).unwrap());
        assert!(at("1", "3").unwrap());
        assert!(!at("3", "1").unwrap());
        assert!(at("2", "2").unwrap());
    }

    #[test]
    fn evaluation_errors() {
        let s = RelStructure::from_digraph(&SimpleDigraph::from_arcs([("a", "b")]).unwrap());
        assert!(eval_formula(&s, &Formula::parse("forall x (x = x)").unwrap(), &Assignment::new()).unwrap());
        assert!(eval_formula(&s, &Formula::parse("edg(x,y)").unwrap(), &Assignment::new()).is_err());
        assert!(eval_formula(&s, &Formula::parse("edg(x)").unwrap(), &Assignment::new().elem("x", 0)).is_err());
        assert!(eval_formula(&s, &Formula::parse("foo(x)").unwrap(), &Assignment::new().elem("x", 0)).is_err());
        let big = RelStructure::new((0..15).map(|i| i.to_string()));
        assert!(matches!(
            eval_formula(&big, &Formula::parse("exists X true").unwrap(), &Assignment::new()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn trivial_families() {
        let s = RelStructure::from_digraph(&SimpleDigraph::from_arcs([("a", "b"), ("b", "c")]).unwrap());
        assert!(definable_family(&s, &F::False, "X").unwrap().members.is_empty());
        assert_eq!(definable_family(&s, &F::True, "X").unwrap().members.len(), 8);
    }

    #[test]
    fn identity_and_empty_schemes() {
        let g = SimpleDigraph::from_arcs([("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let s = RelStructure::from_digraph(&g);
        let mut d = DefinitionScheme {
            k: 1,
            phi: F::True,
            psi: vec![F::True],
            theta: BTreeMap::from([(("edg".to_string(), vec![1, 1]), Formula::parse("edg(x1,x2)").unwrap())]),
            params: vec![],
        };
        let t = apply_scheme(&d, &s, &Assignment::new()).unwrap().unwrap();
        assert_eq!(t.domain, vec!["(a,1)", "(b,1)", "(c,1)"]);
        assert_eq!(t.relations["edg"], s.relations["edg"]);
        d.phi = F::False;
        assert_eq!(apply_scheme(&d, &s, &Assignment::new()).unwrap(), None);
        let doc = serde_json::to_string(&d.to_doc()).unwrap();
        assert_eq!(DefinitionScheme::from_json(&doc).unwrap(), d);
    }
}
