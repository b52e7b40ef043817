//! Signature-function expressions.
//!
//! Grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := '-'? (INT '*')? atom
//! atom  := NAME | '@' PATH | 'zero' | 'cable' '(' expr ',' INT ')' | '(' expr ')'
//! ```
//!
//! `NAME` is a catalog knot and `@PATH` a Seifert matrix or step-function file.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use concordia::catalog::Catalog;
use concordia::seifert::SeifertMatrix;
use concordia::sigfn::{RationalStepFn, SignatureFunction};
use concordia::signature::{profile_with, SignatureConfig};

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn matrix_file(path: &Path) -> Result<SeifertMatrix> {
    read(path)?.parse().with_context(|| format!("parsing matrix file {}", path.display()))
}

pub fn step_file(path: &Path) -> Result<RationalStepFn> {
    read(path)?.parse().with_context(|| format!("parsing step file {}", path.display()))
}

pub fn from_matrix(s: &SeifertMatrix, config: SignatureConfig) -> Result<SignatureFunction> {
    Ok(SignatureFunction::from_profile(profile_with(s, config)?))
}

pub fn knot_matrix(name: &str) -> Result<SeifertMatrix> {
    Ok(Catalog::builtin().get(name)?.seifert.clone())
}

/// Loads a file holding either a Seifert matrix or a step function.
fn any_file(path: &Path, config: SignatureConfig) -> Result<SignatureFunction> {
    let text = read(path)?;
    match text.parse::<SeifertMatrix>() {
        Ok(s) => from_matrix(&s, config),
        Err(matrix_err) => match text.parse::<RationalStepFn>() {
            Ok(f) => Ok(f.to_function()),
            Err(step_err) => Err(anyhow!(
                "{}: not a matrix file ({matrix_err}) nor a step file ({step_err})",
                path.display()
            )),
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Name(String),
    File(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let word = |i: &mut usize, stop: &dyn Fn(char) -> bool| {
        let start = *i;
        while *i < chars.len() && !stop(chars[*i]) {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '+' | '-' | '*' | '(' | ')' | ',' => {
                out.push(Tok::Sym(c));
                i += 1;
            }
            '@' => {
                i += 1;
                let path = word(&mut i, &|c| c.is_whitespace() || c == ',' || c == ')');
                if path.is_empty() {
                    bail!("empty path after '@'");
                }
                out.push(Tok::File(path));
            }
            _ if c.is_alphanumeric() || c == '_' => {
                let w = word(&mut i, &|c| !(c.is_alphanumeric() || c == '_' || c == '.'));
                match w.parse::<i64>() {
                    Ok(n) => out.push(Tok::Int(n)),
                    Err(_) => out.push(Tok::Name(w)),
                }
            }
            _ => bail!("unexpected character {c:?} in expression"),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    config: SignatureConfig,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.next() {
            Some(Tok::Sym(x)) if x == c => Ok(()),
            other => bail!("expected {c:?}, found {other:?}"),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.peek() == Some(&Tok::Sym('-'));
        if neg {
            self.pos += 1;
        }
        match self.next() {
            Some(Tok::Int(n)) => Ok(if neg { -n } else { n }),
            other => bail!("expected an integer, found {other:?}"),
        }
    }

    fn expr(&mut self) -> Result<SignatureFunction> {
        let mut acc = self.term()?;
        while let Some(Tok::Sym(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SignatureFunction> {
        let mut coeff = 1;
        if self.peek() == Some(&Tok::Sym('-')) {
            self.pos += 1;
            coeff = -1;
        }
        if let (Some(Tok::Int(n)), Some(Tok::Sym('*'))) = (self.peek().cloned(), self.toks.get(self.pos + 1)) {
            self.pos += 2;
            coeff *= n;
        }
        let atom = self.atom()?;
        Ok(if coeff == 1 { atom } else { atom.scale(coeff) })
    }

    fn atom(&mut self) -> Result<SignatureFunction> {
        match self.next() {
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::File(path)) => any_file(Path::new(&path), self.config),
            Some(Tok::Name(name)) if name == "cable" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(',')?;
                let k = self.int()?;
                self.expect(')')?;
                Ok(inner.cable(k)?)
            }
            Some(Tok::Name(name)) if name == "zero" => Ok(SignatureFunction::zero()),
            Some(Tok::Name(name)) => from_matrix(&knot_matrix(&name)?, self.config),
            Some(Tok::Int(n)) => from_matrix(&knot_matrix(&n.to_string())?, self.config),
            other => bail!("expected a knot name, file, or cable(...), found {other:?}"),
        }
    }
}

pub fn parse_expr(s: &str, config: SignatureConfig) -> Result<SignatureFunction> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0, config };
    let f = p.expr().with_context(|| format!("in expression {s:?}"))?;
    if p.pos != p.toks.len() {
        bail!("trailing input in expression {s:?}");
    }
    Ok(f)
}
