//! Tiny expression grammar shared by scenario files:
//!
//! ```text
//! expr := term ('+' term)*
//! term := atom ('*' atom)*
//! atom := integer | name | 'd(' name ')' | atom '^' integer
//! ```
//!
//! Expressions evaluate either in a presented algebra (where `d(name)` is
//! illegal) or in a bar-complex homology (where `name` is a length-0 class
//! and `d(name)` the 1-tensor class, multiplied by shuffles).

use algebra::bar::{BarChain, BarError, HhResult};
use algebra::{Element, Presentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Num(i64),
    Gen(String),
    DGen(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub atom: Atom,
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expr {
    /// Sum of products of factors.
    pub terms: Vec<Vec<Factor>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError(pub String);

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parse an expression; column offsets are relative to `text`.
pub fn parse_expr(text: &str) -> Result<Expr, ExprError> {
    let mut p = Lexer { text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(ExprError(format!("unexpected `{}`", &text[p.pos..])));
    }
    Ok(e)
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(' ') || self.text[self.pos..].starts_with('\t') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> Result<Vec<Factor>, ExprError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some('*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(factors)
    }

    fn factor(&mut self) -> Result<Factor, ExprError> {
        let atom = self.atom()?;
        let mut power = 1u32;
        if self.peek() == Some('^') {
            self.pos += 1;
            power = self.number()? as u32;
        }
        Ok(Factor { atom, power })
    }

    fn atom(&mut self) -> Result<Atom, ExprError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Atom::Num(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.name();
                if name == "d" && self.text[self.pos..].starts_with('(') {
                    self.pos += 1;
                    let inner = self.name();
                    if inner.is_empty() {
                        return Err(ExprError("expected a generator name inside d(...)".into()));
                    }
                    if !self.text[self.pos..].starts_with(')') {
                        return Err(ExprError("missing `)` after d(...".into()));
                    }
                    self.pos += 1;
                    Ok(Atom::DGen(inner))
                } else {
                    Ok(Atom::Gen(name))
                }
            }
            Some(c) => Err(ExprError(format!("unexpected character `{c}`"))),
            None => Err(ExprError("unexpected end of expression".into())),
        }
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        for (i, c) in self.text[self.pos..].char_indices() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos = start + i + c.len_utf8();
            } else {
                break;
            }
        }
        self.text[start..self.pos].to_string()
    }

    fn number(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        for (i, c) in self.text[self.pos..].char_indices() {
            if c.is_ascii_digit() {
                self.pos = start + i + 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(ExprError("expected a number".into()));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| ExprError("number out of range".into()))
    }
}

impl Expr {
    /// Evaluate in a presented algebra; `d(...)` atoms are rejected.
    pub fn eval_element(&self, pres: &Presentation) -> Result<Element, ExprError> {
        self.eval_element_with(pres, &Default::default())
    }

    /// Evaluate with named bindings taking precedence over generator lookup.
    pub fn eval_element_with(
        &self,
        pres: &Presentation,
        env: &std::collections::BTreeMap<String, Element>,
    ) -> Result<Element, ExprError> {
        let mut acc = Element::zero();
        for term in &self.terms {
            let mut prod = pres.one();
            for factor in term {
                let base = match &factor.atom {
                    Atom::Num(c) => pres.scale(&pres.one(), *c),
                    Atom::Gen(name) => match env.get(name) {
                        Some(el) => el.clone(),
                        None => {
                            let idx = pres.gen_index(name).ok_or_else(|| {
                                ExprError(format!("unknown generator `{name}`"))
                            })?;
                            pres.gen_element(idx)
                        }
                    },
                    Atom::DGen(name) => {
                        return Err(ExprError(format!(
                            "d({name}) is a bar-complex class, not an algebra element"
                        )))
                    }
                };
                prod = pres.mul(&prod, &pres.pow(&base, factor.power));
            }
            acc = pres.add(&acc, &prod);
        }
        Ok(acc)
    }

    /// Evaluate in the homology of a bar complex, via shuffle products.
    pub fn eval_bar(&self, hh: &HhResult<'_>) -> Result<BarChain, ExprError> {
        let pres = hh.pres();
        let mut acc: Option<BarChain> = None;
        for term in &self.terms {
            let mut prod = hh.class_of_element(&pres.one());
            for factor in term {
                let base: BarChain = match &factor.atom {
                    Atom::Num(c) => hh.class_of_element(&pres.scale(&pres.one(), *c)),
                    Atom::Gen(name) => {
                        let idx = pres
                            .gen_index(name)
                            .ok_or_else(|| ExprError(format!("unknown generator `{name}`")))?;
                        hh.class_of_element(&pres.gen_element(idx))
                    }
                    Atom::DGen(name) => {
                        let idx = pres
                            .gen_index(name)
                            .ok_or_else(|| ExprError(format!("unknown generator `{name}`")))?;
                        hh.class_d(idx)
                    }
                };
                for _ in 0..factor.power {
                    prod = hh.shuffle(&prod, &base).map_err(|e: BarError| ExprError(e.to_string()))?;
                }
            }
            acc = Some(match acc {
                None => prod,
                Some(a) => {
                    if (a.internal, a.k) != (prod.internal, prod.k) && !a.is_zero() && !prod.is_zero()
                    {
                        return Err(ExprError(
                            "sum of bar classes in different slots".to_string(),
                        ));
                    }
                    let mut terms = a.terms;
                    let field = pres.field();
                    for (t, c) in prod.terms {
                        let prev = terms.get(&t).copied().unwrap_or(0);
                        let nc = field.add(prev, c);
                        if nc == 0 {
                            terms.remove(&t);
                        } else {
                            terms.insert(t, nc);
                        }
                    }
                    BarChain { internal: prod.internal, k: prod.k, terms }
                }
            });
        }
        acc.ok_or_else(|| ExprError("empty expression".into()))
    }

    /// Generator names referenced by the expression.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for term in &self.terms {
            for factor in term {
                match &factor.atom {
                    Atom::Gen(n) | Atom::DGen(n) => out.push(n.as_str()),
                    Atom::Num(_) => {}
                }
            }
        }
        out
    }
}
