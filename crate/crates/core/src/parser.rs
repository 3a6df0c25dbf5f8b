//! Text syntax for clauses.
//!
//! ```text
//! clause  := literal ('|' literal)* | '$false'
//! literal := '~'? atom | term '=' term | term '!=' term
//! atom    := ident | ident '(' term (',' term)* ')'
//! term    := ident | ident '(' term (',' term)* ')'
//! ```
//!
//! Identifiers are `[A-Za-z0-9_]+`; an uppercase first letter makes a
//! variable. `s = t` is sugar for the symmetric predicate `=`.

use crate::error::ParseError;
use crate::symbol::{Scope, SymbolTable};
use crate::term::{normalize, Clause, Literal, Normalized, Term};

/// Parses one clause, opening a fresh variable scope for it.
pub fn parse_clause(text: &str, symbols: &mut SymbolTable) -> Result<Clause, ParseError> {
    let scope = symbols.new_scope();
    parse_clause_in(text, symbols, scope)
}

/// Parses one clause with variables interned in `scope`.
pub fn parse_clause_in(text: &str, symbols: &mut SymbolTable, scope: Scope) -> Result<Clause, ParseError> {
    let literals = Parser {
        src: text.as_bytes(),
        pos: 0,
        symbols,
        scope,
    }
    .clause()?;
    match normalize(literals) {
        Normalized::Clause(c) => Ok(c),
        Normalized::Tautology => Err(ParseError::Tautology),
    }
}

/// A parsed identifier applied to zero or more arguments, not yet
/// classified as term or atom.
struct Application {
    name: String,
    offset: usize,
    args: Vec<Term>,
    has_parens: bool,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    symbols: &'a mut SymbolTable,
    scope: Scope,
}

impl Parser<'_> {
    fn clause(&mut self) -> Result<Vec<Literal>, ParseError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(b"$false") {
            self.pos += "$false".len();
            self.expect_end()?;
            return Ok(Vec::new());
        }
        let mut lits = vec![self.literal()?];
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(lits),
                Some(b'|') => {
                    self.pos += 1;
                    lits.push(self.literal()?);
                }
                Some(_) => return Err(self.error("expected `|` or end of clause")),
            }
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("unexpected trailing input")),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        self.skip_ws();
        let mut positive = true;
        if self.peek() == Some(b'~') {
            self.pos += 1;
            positive = false;
            self.skip_ws();
        }
        let head = self.application()?;
        self.skip_ws();
        let negated_eq = self.src[self.pos..].starts_with(b"!=");
        if negated_eq || self.peek() == Some(b'=') {
            self.pos += if negated_eq { 2 } else { 1 };
            let lhs = self.build_term(head)?;
            let rhs_app = self.application()?;
            let rhs = self.build_term(rhs_app)?;
            let eq = self.symbols.predicate(SymbolTable::EQUALITY, 2)?;
            let symmetric = self.symbols.is_symmetric(eq);
            return Ok(Literal::new(eq, positive != negated_eq, symmetric, vec![lhs, rhs]));
        }
        if is_variable_name(&head.name) {
            return Err(ParseError::Syntax {
                offset: head.offset,
                message: format!("variable `{}` used as a predicate", head.name),
            });
        }
        let pred = self.symbols.predicate(&head.name, head.args.len() as u32)?;
        let symmetric = self.symbols.is_symmetric(pred);
        Ok(Literal::new(pred, positive, symmetric, head.args))
    }

    fn build_term(&mut self, app: Application) -> Result<Term, ParseError> {
        if is_variable_name(&app.name) {
            if app.has_parens {
                return Err(ParseError::Syntax {
                    offset: app.offset,
                    message: format!("variable `{}` cannot take arguments", app.name),
                });
            }
            return Ok(Term::var(self.symbols.variable(self.scope, &app.name)));
        }
        let f = self.symbols.function(&app.name, app.args.len() as u32)?;
        Ok(Term::app(f, app.args))
    }

    fn application(&mut self) -> Result<Application, ParseError> {
        self.skip_ws();
        let offset = self.pos;
        let name = self.ident()?;
        self.skip_ws();
        let mut args = Vec::new();
        let mut has_parens = false;
        if self.peek() == Some(b'(') {
            has_parens = true;
            self.pos += 1;
            loop {
                let a = self.application()?;
                args.push(self.build_term(a)?);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        Ok(Application {
            name,
            offset,
            args,
            has_parens,
        })
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_alphanumeric() || b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }
}

fn is_variable_name(name: &str) -> bool {
    name.as_bytes()[0].is_ascii_uppercase()
}
