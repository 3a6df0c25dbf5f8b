//! Interned symbols.
//!
//! Function and predicate symbols are interned by name and carry a fixed
//! arity. Variables are interned per *scope*: every parsed clause opens a
//! fresh scope, so `X` in a side premise and `X` in a main premise are
//! different variables. All three kinds use dense ids, which lets the filter
//! and the solver index plain arrays.

use std::collections::HashMap;
use std::fmt;

use crate::error::ParseError;

macro_rules! dense_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

dense_id!(
    /// First-order variable.
    VarId
);
dense_id!(
    /// Function symbol (constants are functions of arity 0).
    FunId
);
dense_id!(
    /// Predicate symbol.
    PredId
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Variable,
    Function,
    Predicate,
}

/// Description of one interned symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub id: u32,
    pub kind: SymbolKind,
    pub arity: u32,
    pub name: String,
}

/// Handle of a variable namespace. Variables interned under different scopes
/// never coincide, even when they share a name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scope(u32);

#[derive(Clone, Debug)]
struct Entry {
    name: String,
    arity: u32,
}

/// Registry of every symbol seen so far.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    functions: Vec<Entry>,
    predicates: Vec<Entry>,
    variables: Vec<String>,
    function_ids: HashMap<String, FunId>,
    predicate_ids: HashMap<String, PredId>,
    variable_ids: HashMap<(Scope, String), VarId>,
    symmetric_names: Vec<String>,
    symmetric: Vec<bool>,
    next_scope: u32,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    /// Name of the infix equality predicate produced by `s = t`.
    pub const EQUALITY: &'static str = "=";

    pub fn new() -> Self {
        Self::with_symmetric(&[Self::EQUALITY, "eq"])
    }

    /// Creates a table where predicates with any of `names` (and arity 2)
    /// are treated as symmetric.
    pub fn with_symmetric(names: &[&str]) -> Self {
        SymbolTable {
            functions: Vec::new(),
            predicates: Vec::new(),
            variables: Vec::new(),
            function_ids: HashMap::new(),
            predicate_ids: HashMap::new(),
            variable_ids: HashMap::new(),
            symmetric_names: names.iter().map(|s| s.to_string()).collect(),
            symmetric: Vec::new(),
            next_scope: 0,
        }
    }

    pub fn new_scope(&mut self) -> Scope {
        let s = Scope(self.next_scope);
        self.next_scope += 1;
        s
    }

    pub fn variable(&mut self, scope: Scope, name: &str) -> VarId {
        if let Some(&v) = self.variable_ids.get(&(scope, name.to_string())) {
            return v;
        }
        let v = VarId(self.variables.len() as u32);
        self.variables.push(name.to_string());
        self.variable_ids.insert((scope, name.to_string()), v);
        v
    }

    pub fn function(&mut self, name: &str, arity: u32) -> Result<FunId, ParseError> {
        if let Some(&f) = self.function_ids.get(name) {
            let expected = self.functions[f.index()].arity;
            if expected != arity {
                return Err(ParseError::ArityMismatch {
                    name: name.to_string(),
                    expected,
                    found: arity,
                });
            }
            return Ok(f);
        }
        let f = FunId(self.functions.len() as u32);
        self.functions.push(Entry {
            name: name.to_string(),
            arity,
        });
        self.function_ids.insert(name.to_string(), f);
        Ok(f)
    }

    pub fn predicate(&mut self, name: &str, arity: u32) -> Result<PredId, ParseError> {
        if let Some(&p) = self.predicate_ids.get(name) {
            let expected = self.predicates[p.index()].arity;
            if expected != arity {
                return Err(ParseError::ArityMismatch {
                    name: name.to_string(),
                    expected,
                    found: arity,
                });
            }
            return Ok(p);
        }
        let p = PredId(self.predicates.len() as u32);
        self.predicates.push(Entry {
            name: name.to_string(),
            arity,
        });
        self.predicate_ids.insert(name.to_string(), p);
        self.symmetric
            .push(arity == 2 && self.symmetric_names.iter().any(|n| n == name));
        Ok(p)
    }

    pub fn is_symmetric(&self, p: PredId) -> bool {
        self.symmetric[p.index()]
    }

    pub fn function_name(&self, f: FunId) -> &str {
        &self.functions[f.index()].name
    }

    pub fn function_arity(&self, f: FunId) -> u32 {
        self.functions[f.index()].arity
    }

    pub fn predicate_name(&self, p: PredId) -> &str {
        &self.predicates[p.index()].name
    }

    pub fn predicate_arity(&self, p: PredId) -> u32 {
        self.predicates[p.index()].arity
    }

    pub fn variable_name(&self, v: VarId) -> &str {
        &self.variables[v.index()]
    }

    pub fn num_predicates(&self) -> usize {
        self.predicates.len()
    }

    pub fn num_functions(&self) -> usize {
        self.functions.len()
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn lookup_predicate(&self, name: &str) -> Option<PredId> {
        self.predicate_ids.get(name).copied()
    }

    pub fn lookup_function(&self, name: &str) -> Option<FunId> {
        self.function_ids.get(name).copied()
    }

    pub fn symbol(&self, kind: SymbolKind, id: u32) -> Symbol {
        let (name, arity) = match kind {
            SymbolKind::Variable => (self.variables[id as usize].clone(), 0),
            SymbolKind::Function => {
                let e = &self.functions[id as usize];
                (e.name.clone(), e.arity)
            }
            SymbolKind::Predicate => {
                let e = &self.predicates[id as usize];
                (e.name.clone(), e.arity)
            }
        };
        Symbol {
            id,
            kind,
            arity,
            name,
        }
    }
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Variable => "variable",
            SymbolKind::Function => "function",
            SymbolKind::Predicate => "predicate",
        })
    }
}
