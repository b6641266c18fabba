use std::fmt;

use num_bigint::BigInt;

use crate::monomial::Monomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ring {
    /// A polynomial ring over a field, e.g. `Q[x,y,z]`.
    Polynomial {
        field: String,
        vars: Vec<String>,
    },
    Integers,
}

impl Ring {
    pub fn vars(&self) -> &[String] {
        match self {
            Ring::Polynomial { vars, .. } => vars,
            Ring::Integers => &[],
        }
    }

    /// Symbol for the ring as a module over itself.
    pub fn symbol(&self) -> &'static str {
        match self {
            Ring::Polynomial { .. } => "R",
            Ring::Integers => "Z",
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Polynomial { field, vars } => write!(f, "{field}[{}]", vars.join(",")),
            Ring::Integers => write!(f, "Z"),
        }
    }
}

/// One generator or vector entry: a monomial over a polynomial ring, an
/// integer over `Z`, or zero over either.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Zero,
    Monomial(Monomial),
    Integer(BigInt),
}

impl Entry {
    pub fn is_zero(&self) -> bool {
        matches!(self, Entry::Zero)
    }

    pub fn render(&self, vars: &[String]) -> String {
        match self {
            Entry::Zero => "0".into(),
            Entry::Monomial(m) => m.render(vars),
            Entry::Integer(n) => n.to_string(),
        }
    }
}

fn render_entries(entries: &[Entry], vars: &[String]) -> String {
    entries
        .iter()
        .map(|e| e.render(vars))
        .collect::<Vec<_>>()
        .join(", ")
}

/// `R^rank` or `Z^rank`, optionally modulo integer relation vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleExpr {
    pub rank: usize,
    pub relations: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Name(String),
    /// An inline ideal `(g_1, …, g_k)` of the declared ring.
    Ideal(Vec<Entry>),
}

impl Operand {
    pub fn render(&self, vars: &[String]) -> String {
        match self {
            Operand::Name(n) => n.clone(),
            Operand::Ideal(gens) => format!("({})", render_entries(gens, vars).replace(", ", ",")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Factor(Operand),
    Filtration(Operand),
    Ass(Operand),
    Colon(Operand, Operand),
    Intersect(Operand, Operand),
    Ann(Operand),
    CompareAnn(Operand),
    CompareIntersection(Operand, Operand),
    Verify(String),
}

impl Command {
    pub fn keyword(&self) -> &'static str {
        match self {
            Command::Factor(_) => "factor",
            Command::Filtration(_) => "filtration",
            Command::Ass(_) => "ass",
            Command::Colon(..) => "colon",
            Command::Intersect(..) => "intersect",
            Command::Ann(_) => "ann",
            Command::CompareAnn(_) => "compare-ann",
            Command::CompareIntersection(..) => "compare-intersection",
            Command::Verify(_) => "verify",
        }
    }

    pub fn operands(&self) -> Vec<&Operand> {
        match self {
            Command::Factor(a)
            | Command::Filtration(a)
            | Command::Ass(a)
            | Command::Ann(a)
            | Command::CompareAnn(a) => {
                vec![a]
            }
            Command::Colon(a, b)
            | Command::Intersect(a, b)
            | Command::CompareIntersection(a, b) => vec![a, b],
            Command::Verify(_) => Vec::new(),
        }
    }

    pub fn render(&self, vars: &[String]) -> String {
        match self {
            Command::Verify(path) => format!("verify \"{path}\""),
            _ => {
                let ops: Vec<String> = self.operands().iter().map(|o| o.render(vars)).collect();
                format!("{} {}", self.keyword(), ops.join(" "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Ring(Ring),
    Ideal {
        name: String,
        gens: Vec<Entry>,
    },
    Module {
        name: String,
        module: ModuleExpr,
    },
    Sub {
        name: String,
        of: String,
        vectors: Vec<Vec<Entry>>,
    },
    Command(Command),
}

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A parsed session. Equality ignores source positions.
#[derive(Clone, Debug, Default)]
pub struct Session {
    pub statements: Vec<Statement>,
    pub positions: Vec<Pos>,
}

impl PartialEq for Session {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl Eq for Session {}

impl Session {
    pub fn ring(&self) -> Option<&Ring> {
        self.statements.iter().find_map(|s| match s {
            Statement::Ring(r) => Some(r),
            _ => None,
        })
    }

    pub fn commands(&self) -> impl Iterator<Item = (&Command, Pos)> {
        self.statements
            .iter()
            .zip(&self.positions)
            .filter_map(|(s, p)| match s {
                Statement::Command(c) => Some((c, *p)),
                _ => None,
            })
    }
}

impl fmt::Display for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.ring().cloned().unwrap_or(Ring::Integers);
        let vars = ring.vars();
        for s in &self.statements {
            match s {
                Statement::Ring(r) => writeln!(f, "ring {r};")?,
                Statement::Ideal { name, gens } => {
                    writeln!(f, "ideal {name} = {};", render_entries(gens, vars))?
                }
                Statement::Module { name, module } => {
                    write!(f, "module {name} = {}^{}", ring.symbol(), module.rank)?;
                    if !module.relations.is_empty() {
                        let rels: Vec<String> = module
                            .relations
                            .iter()
                            .map(|r| {
                                format!(
                                    "[{}]",
                                    r.iter()
                                        .map(ToString::to_string)
                                        .collect::<Vec<_>>()
                                        .join(",")
                                )
                            })
                            .collect();
                        write!(f, " / [{}]", rels.join(","))?;
                    }
                    writeln!(f, ";")?;
                }
                Statement::Sub { name, of, vectors } => {
                    let vs: Vec<String> = vectors
                        .iter()
                        .map(|v| format!("[{}]", render_entries(v, vars)))
                        .collect();
                    writeln!(f, "sub {name} of {of} = {};", vs.join(", "))?;
                }
                Statement::Command(c) => writeln!(f, "{};", c.render(vars))?,
            }
        }
        Ok(())
    }
}
