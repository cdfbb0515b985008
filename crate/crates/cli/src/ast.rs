//! Statements of the circuit DSL.

use std::fmt;

/// Signed rational multiple of pi, e.g. `-pi/4`, `2pi/5`, `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Angle {
    pub neg: bool,
    /// Numerator multiplier of pi; 0 encodes the zero angle.
    pub num: u64,
    pub den: u64,
}

impl Angle {
    pub fn zero() -> Self {
        Angle {
            neg: false,
            num: 0,
            den: 1,
        }
    }

    pub fn value(&self) -> f64 {
        let v = self.num as f64 * std::f64::consts::PI / self.den as f64;
        if self.neg {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            return write!(f, "0");
        }
        if self.neg {
            write!(f, "-")?;
        }
        if self.num != 1 {
            write!(f, "{}", self.num)?;
        }
        write!(f, "pi")?;
        if self.den != 1 {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityWord {
    Even,
    Odd,
}

impl ParityWord {
    pub fn tag(self) -> &'static str {
        match self {
            ParityWord::Even => "even",
            ParityWord::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PrintKind {
    State,
    Matrix(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Space {
        n_majoranas: usize,
    },
    Pair {
        name: String,
        a: usize,
        b: usize,
    },
    Prepare {
        ket: String,
    },
    Braid {
        i: usize,
        j: usize,
    },
    Phase {
        pair: String,
        angle: Angle,
    },
    Gate {
        name: String,
        pairs: Vec<String>,
    },
    Measure2 {
        a: usize,
        b: usize,
        var: String,
    },
    Measure4 {
        a: usize,
        b: usize,
        c: usize,
        d: usize,
        var: String,
    },
    If {
        var: String,
        parity: ParityWord,
        body: Vec<Spanned>,
    },
    Print(PrintKind),
}

/// Statement plus its source location for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub stmt: Stmt,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub stmts: Vec<Spanned>,
}

impl Circuit {
    /// Canonical text rendering; reparses to a structurally identical circuit.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for s in &self.stmts {
            pretty_stmt(&mut out, s, 0);
        }
        out
    }
}

fn pretty_stmt(out: &mut String, s: &Spanned, depth: usize) {
    let indent = "  ".repeat(depth);
    match &s.stmt {
        Stmt::Space { n_majoranas } => out.push_str(&format!("{indent}space {n_majoranas}\n")),
        Stmt::Pair { name, a, b } => out.push_str(&format!("{indent}pair {name} {a} {b}\n")),
        Stmt::Prepare { ket } => out.push_str(&format!("{indent}prepare |{ket}>\n")),
        Stmt::Braid { i, j } => out.push_str(&format!("{indent}braid {i} {j}\n")),
        Stmt::Phase { pair, angle } => out.push_str(&format!("{indent}phase {pair} {angle}\n")),
        Stmt::Gate { name, pairs } => {
            out.push_str(&format!("{indent}gate {name} {}\n", pairs.join(" ")))
        }
        Stmt::Measure2 { a, b, var } => {
            out.push_str(&format!("{indent}measure2 {a} {b} -> {var}\n"))
        }
        Stmt::Measure4 { a, b, c, d, var } => {
            out.push_str(&format!("{indent}measure4 {a} {b} {c} {d} -> {var}\n"))
        }
        Stmt::If { var, parity, body } => {
            out.push_str(&format!("{indent}if {var} == {} {{\n", parity.tag()));
            for inner in body {
                pretty_stmt(out, inner, depth + 1);
            }
            out.push_str(&format!("{indent}}}\n"));
        }
        Stmt::Print(PrintKind::State) => out.push_str(&format!("{indent}print state\n")),
        Stmt::Print(PrintKind::Matrix(name)) => {
            out.push_str(&format!("{indent}print matrix {name}\n"))
        }
    }
}
