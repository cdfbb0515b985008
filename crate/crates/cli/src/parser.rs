//! Lexer, recursive-descent parser, and semantic checks for the circuit DSL.
//!
//! Newlines and `#` comments are trivia; every statement is self-delimiting
//! from its keyword, so several statements may share a line inside blocks.

use std::fmt;

use crate::ast::{Angle, Circuit, ParityWord, PrintKind, Spanned, Stmt};

/// Gate names usable in `gate` statements (with their pair arity).
pub const DSL_GATES: [(&str, usize); 11] = [
    ("H", 2),
    ("X", 2),
    ("Y", 2),
    ("Z", 2),
    ("B23", 2),
    ("SWAP", 2),
    ("SWAP'", 2),
    ("CNOT+", 3),
    ("CNOT-", 3),
    ("CY", 3),
    ("CiZ", 3),
];

/// Gate names accepted by `print matrix`.
pub const PRINTABLE_GATES: [&str; 12] = [
    "H", "X", "Y", "Z", "B23", "SWAP", "SWAP'", "CNOT+", "CNOT-", "CY", "CiZ", "Y2",
];

#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Ident(String),
    Int(u64),
    Ket(String),
    Arrow,
    EqEq,
    LBrace,
    RBrace,
    Minus,
    Plus,
    Slash,
    Apostrophe,
}

impl TokKind {
    fn describe(&self) -> String {
        match self {
            TokKind::Ident(s) => format!("identifier `{s}`"),
            TokKind::Int(n) => format!("integer `{n}`"),
            TokKind::Ket(k) => format!("ket `|{k}>`"),
            TokKind::Arrow => "`->`".into(),
            TokKind::EqEq => "`==`".into(),
            TokKind::LBrace => "`{`".into(),
            TokKind::RBrace => "`}`".into(),
            TokKind::Minus => "`-`".into(),
            TokKind::Plus => "`+`".into(),
            TokKind::Slash => "`/`".into(),
            TokKind::Apostrophe => "`'`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    line: usize,
    col: usize,
    end_col: usize,
}

fn lex(text: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0usize;
        while i < chars.len() {
            let col = i + 1;
            let ch = chars[i];
            match ch {
                ' ' | '\t' | '\r' => i += 1,
                '#' => break,
                '{' => {
                    toks.push(Tok {
                        kind: TokKind::LBrace,
                        line: line_no,
                        col,
                        end_col: col + 1,
                    });
                    i += 1;
                }
                '}' => {
                    toks.push(Tok {
                        kind: TokKind::RBrace,
                        line: line_no,
                        col,
                        end_col: col + 1,
                    });
                    i += 1;
                }
                '/' => {
                    toks.push(Tok {
                        kind: TokKind::Slash,
                        line: line_no,
                        col,
                        end_col: col + 1,
                    });
                    i += 1;
                }
                '+' => {
                    toks.push(Tok {
                        kind: TokKind::Plus,
                        line: line_no,
                        col,
                        end_col: col + 1,
                    });
                    i += 1;
                }
                '\'' => {
                    toks.push(Tok {
                        kind: TokKind::Apostrophe,
                        line: line_no,
                        col,
                        end_col: col + 1,
                    });
                    i += 1;
                }
                '-' => {
                    if chars.get(i + 1) == Some(&'>') {
                        toks.push(Tok {
                            kind: TokKind::Arrow,
                            line: line_no,
                            col,
                            end_col: col + 2,
                        });
                        i += 2;
                    } else {
                        toks.push(Tok {
                            kind: TokKind::Minus,
                            line: line_no,
                            col,
                            end_col: col + 1,
                        });
                        i += 1;
                    }
                }
                '=' => {
                    if chars.get(i + 1) == Some(&'=') {
                        toks.push(Tok {
                            kind: TokKind::EqEq,
                            line: line_no,
                            col,
                            end_col: col + 2,
                        });
                        i += 2;
                    } else {
                        return err(line_no, col, "lexical error: expected `==`");
                    }
                }
                '|' => {
                    let mut j = i + 1;
                    let mut bits = String::new();
                    while j < chars.len() && (chars[j] == '0' || chars[j] == '1') {
                        bits.push(chars[j]);
                        j += 1;
                    }
                    if chars.get(j) != Some(&'>') {
                        return err(
                            line_no,
                            col,
                            "lexical error: malformed ket, expected `|` [01]+ `>`",
                        );
                    }
                    if bits.is_empty() {
                        return err(line_no, col, "lexical error: empty ket");
                    }
                    toks.push(Tok {
                        kind: TokKind::Ket(bits),
                        line: line_no,
                        col,
                        end_col: j + 2,
                    });
                    i = j + 1;
                }
                c if c.is_ascii_digit() => {
                    let mut j = i;
                    let mut v: u64 = 0;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        v = v * 10 + (chars[j] as u64 - '0' as u64);
                        j += 1;
                    }
                    toks.push(Tok {
                        kind: TokKind::Int(v),
                        line: line_no,
                        col,
                        end_col: j + 1,
                    });
                    i = j;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut j = i;
                    let mut s = String::new();
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        s.push(chars[j]);
                        j += 1;
                    }
                    toks.push(Tok {
                        kind: TokKind::Ident(s),
                        line: line_no,
                        col,
                        end_col: j + 1,
                    });
                    i = j;
                }
                other => {
                    return err(line_no, col, format!("lexical error: unexpected `{other}`"));
                }
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .or_else(|| self.toks.last().map(|t| (t.line, t.end_col)))
            .unwrap_or((1, 1))
    }

    fn expect_int(&mut self, what: &str) -> Result<(u64, usize, usize), ParseError> {
        let (line, col) = self.here();
        match self.next() {
            Some(Tok {
                kind: TokKind::Int(v),
                line,
                col,
                ..
            }) => Ok((v, line, col)),
            Some(t) => err(
                t.line,
                t.col,
                format!(
                    "syntax error: expected {what} (an integer), found {}",
                    t.kind.describe()
                ),
            ),
            None => err(
                line,
                col,
                format!("syntax error: expected {what}, found end of input"),
            ),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        let (line, col) = self.here();
        match self.next() {
            Some(Tok {
                kind: TokKind::Ident(s),
                line,
                col,
                ..
            }) => Ok((s, line, col)),
            Some(t) => err(
                t.line,
                t.col,
                format!("syntax error: expected {what}, found {}", t.kind.describe()),
            ),
            None => err(
                line,
                col,
                format!("syntax error: expected {what}, found end of input"),
            ),
        }
    }

    fn expect_kind(&mut self, kind: &TokKind, what: &str) -> Result<(), ParseError> {
        let (line, col) = self.here();
        match self.next() {
            Some(t) if &t.kind == kind => Ok(()),
            Some(t) => err(
                t.line,
                t.col,
                format!("syntax error: expected {what}, found {}", t.kind.describe()),
            ),
            None => err(
                line,
                col,
                format!("syntax error: expected {what}, found end of input"),
            ),
        }
    }

    /// Gate name: identifier optionally glued to `+`, `-`, or `'`.
    fn gate_name(&mut self) -> Result<(String, usize, usize), ParseError> {
        let (base, line, col) = self.expect_ident("a gate name")?;
        let end = self.toks[self.pos - 1].end_col;
        let mut name = base;
        if let Some(t) = self.peek() {
            if t.line == line && t.col == end {
                match t.kind {
                    TokKind::Plus => {
                        name.push('+');
                        self.pos += 1;
                    }
                    TokKind::Minus => {
                        name.push('-');
                        self.pos += 1;
                    }
                    TokKind::Apostrophe => {
                        name.push('\'');
                        self.pos += 1;
                    }
                    _ => {}
                }
            }
        }
        Ok((name, line, col))
    }

    /// ANGLE := "0" | ["-"] [INT] "pi" ["/" INT]
    fn angle(&mut self) -> Result<Angle, ParseError> {
        let (line, col) = self.here();
        let mut neg = false;
        if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Minus)) {
            neg = true;
            self.pos += 1;
        }
        let mut num: u64 = 1;
        let mut saw_num = false;
        if let Some(Tok {
            kind: TokKind::Int(v),
            ..
        }) = self.peek().cloned()
        {
            num = v;
            saw_num = true;
            self.pos += 1;
        }
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokKind::Ident(s)) if s == "pi" => {
                self.pos += 1;
                let mut den = 1;
                if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Slash)) {
                    self.pos += 1;
                    let (d, dl, dc) = self.expect_int("an angle denominator")?;
                    if d == 0 {
                        return err(dl, dc, "semantic error: zero angle denominator");
                    }
                    den = d;
                }
                if num == 0 {
                    return err(line, col, "semantic error: use `0` for the zero angle");
                }
                Ok(Angle { neg, num, den })
            }
            _ if saw_num && num == 0 && !neg => Ok(Angle::zero()),
            _ => err(
                line,
                col,
                "syntax error: expected an angle (a signed rational multiple of pi, e.g. `-pi/4`)",
            ),
        }
    }

    fn stmt(&mut self) -> Result<Spanned, ParseError> {
        let (kw, line, col) = self.expect_ident("a statement keyword")?;
        let stmt = match kw.as_str() {
            "space" => {
                let (n, l, c) = self.expect_int("the Majorana count")?;
                if n == 0 || n % 2 != 0 || n > 24 {
                    return err(l, c, format!(
                        "semantic error: space must declare an even Majorana count in 2..=24, got {n}"
                    ));
                }
                Stmt::Space {
                    n_majoranas: n as usize,
                }
            }
            "pair" => {
                let (name, ..) = self.expect_ident("a pair name")?;
                let (a, ..) = self.expect_int("the first Majorana index")?;
                let (b, ..) = self.expect_int("the second Majorana index")?;
                Stmt::Pair {
                    name,
                    a: a as usize,
                    b: b as usize,
                }
            }
            "prepare" => {
                let (l, c) = self.here();
                match self.next() {
                    Some(Tok {
                        kind: TokKind::Ket(bits),
                        ..
                    }) => Stmt::Prepare { ket: bits },
                    Some(t) => {
                        return err(
                            t.line,
                            t.col,
                            format!(
                                "syntax error: expected a ket like `|0000>`, found {}",
                                t.kind.describe()
                            ),
                        )
                    }
                    None => return err(l, c, "syntax error: expected a ket, found end of input"),
                }
            }
            "braid" => {
                let (i, ..) = self.expect_int("a Majorana index")?;
                let (j, ..) = self.expect_int("a Majorana index")?;
                Stmt::Braid {
                    i: i as usize,
                    j: j as usize,
                }
            }
            "phase" => {
                let (pair, ..) = self.expect_ident("a pair name")?;
                let angle = self.angle()?;
                Stmt::Phase { pair, angle }
            }
            "gate" => {
                let (name, l, c) = self.gate_name()?;
                let arity = match DSL_GATES.iter().find(|(g, _)| *g == name) {
                    Some((_, arity)) => *arity,
                    None => {
                        return err(
                            l,
                            c,
                            format!(
                                "semantic error: unknown gate `{name}` (expected one of {})",
                                DSL_GATES.map(|(g, _)| g).join(", ")
                            ),
                        )
                    }
                };
                let mut pairs = Vec::with_capacity(arity);
                for _ in 0..arity {
                    let (p, ..) = self.expect_ident("a pair name")?;
                    pairs.push(p);
                }
                Stmt::Gate { name, pairs }
            }
            "measure2" => {
                let (a, ..) = self.expect_int("a Majorana index")?;
                let (b, ..) = self.expect_int("a Majorana index")?;
                self.expect_kind(&TokKind::Arrow, "`->`")?;
                let (var, ..) = self.expect_ident("an outcome variable")?;
                Stmt::Measure2 {
                    a: a as usize,
                    b: b as usize,
                    var,
                }
            }
            "measure4" => {
                let (a, ..) = self.expect_int("a Majorana index")?;
                let (b, ..) = self.expect_int("a Majorana index")?;
                let (c_, ..) = self.expect_int("a Majorana index")?;
                let (d, ..) = self.expect_int("a Majorana index")?;
                self.expect_kind(&TokKind::Arrow, "`->`")?;
                let (var, ..) = self.expect_ident("an outcome variable")?;
                Stmt::Measure4 {
                    a: a as usize,
                    b: b as usize,
                    c: c_ as usize,
                    d: d as usize,
                    var,
                }
            }
            "if" => {
                let (var, ..) = self.expect_ident("an outcome variable")?;
                self.expect_kind(&TokKind::EqEq, "`==`")?;
                let (word, l, c) = self.expect_ident("`even` or `odd`")?;
                let parity = match word.as_str() {
                    "even" => ParityWord::Even,
                    "odd" => ParityWord::Odd,
                    other => {
                        return err(
                            l,
                            c,
                            format!("syntax error: expected `even` or `odd`, found `{other}`"),
                        )
                    }
                };
                self.expect_kind(&TokKind::LBrace, "`{`")?;
                let mut body = Vec::new();
                loop {
                    match self.peek() {
                        Some(t) if t.kind == TokKind::RBrace => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => body.push(self.stmt()?),
                        None => {
                            let (l, c) = self.here();
                            return err(l, c, "syntax error: unterminated block, expected `}`");
                        }
                    }
                }
                Stmt::If { var, parity, body }
            }
            "print" => {
                let (what, l, c) = self.expect_ident("`state` or `matrix`")?;
                match what.as_str() {
                    "state" => Stmt::Print(PrintKind::State),
                    "matrix" => {
                        let (name, gl, gc) = self.gate_name()?;
                        if !PRINTABLE_GATES.contains(&name.as_str()) {
                            return err(
                                gl,
                                gc,
                                format!("semantic error: unknown gate `{name}` in print matrix"),
                            );
                        }
                        Stmt::Print(PrintKind::Matrix(name))
                    }
                    other => {
                        return err(
                            l,
                            c,
                            format!("syntax error: expected `state` or `matrix`, found `{other}`"),
                        )
                    }
                }
            }
            other => {
                return err(
                    line,
                    col,
                    format!(
                    "syntax error: unknown statement `{other}` (expected space, pair, prepare, \
                     braid, phase, gate, measure2, measure4, if, or print)"
                ),
                )
            }
        };
        Ok(Spanned { stmt, line, col })
    }
}

/// Parse and semantically check a program.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut stmts = Vec::new();
    while p.peek().is_some() {
        stmts.push(p.stmt()?);
    }
    let circuit = Circuit { stmts };
    analyze(&circuit)?;
    Ok(circuit)
}

struct Analyzer {
    n_majoranas: Option<usize>,
    pairs: std::collections::BTreeMap<String, (usize, usize)>,
    bound: std::collections::BTreeSet<String>,
    prepared: bool,
}

impl Analyzer {
    fn index_ok(&self, s: &Spanned, idx: usize) -> Result<(), ParseError> {
        let n = self.n_majoranas.ok_or(ParseError {
            line: s.line,
            col: s.col,
            message: "semantic error: no space declared".into(),
        })?;
        if idx == 0 || idx > n {
            return err(
                s.line,
                s.col,
                format!("semantic error: Majorana index {idx} outside declared range 1..={n}"),
            );
        }
        Ok(())
    }

    fn need_state(&self, s: &Spanned) -> Result<(), ParseError> {
        if !self.prepared {
            return err(s.line, s.col, "semantic error: no state prepared");
        }
        Ok(())
    }

    fn walk(&mut self, stmts: &[Spanned], in_block: bool) -> Result<(), ParseError> {
        for s in stmts {
            match &s.stmt {
                Stmt::Space { n_majoranas } => {
                    if in_block {
                        return err(s.line, s.col, "semantic error: space must be top level");
                    }
                    if self.n_majoranas.is_some() {
                        return err(s.line, s.col, "semantic error: space already declared");
                    }
                    self.n_majoranas = Some(*n_majoranas);
                }
                Stmt::Pair { name, a, b } => {
                    self.index_ok(s, *a)?;
                    self.index_ok(s, *b)?;
                    if a == b {
                        return err(s.line, s.col, "semantic error: pair indices must differ");
                    }
                    if self.pairs.contains_key(name) {
                        return err(
                            s.line,
                            s.col,
                            format!("semantic error: pair `{name}` already declared"),
                        );
                    }
                    self.pairs.insert(name.clone(), (*a, *b));
                }
                Stmt::Prepare { ket } => {
                    let n = self.n_majoranas.ok_or(ParseError {
                        line: s.line,
                        col: s.col,
                        message: "semantic error: no space declared".into(),
                    })?;
                    if ket.len() != n / 2 {
                        return err(
                            s.line,
                            s.col,
                            format!(
                                "semantic error: ket `|{ket}>` describes {} modes, space has {}",
                                ket.len(),
                                n / 2
                            ),
                        );
                    }
                    self.prepared = true;
                }
                Stmt::Braid { i, j } => {
                    self.need_state(s)?;
                    self.index_ok(s, *i)?;
                    self.index_ok(s, *j)?;
                    if i == j {
                        return err(s.line, s.col, "semantic error: braid indices must differ");
                    }
                }
                Stmt::Phase { pair, .. } => {
                    self.need_state(s)?;
                    if !self.pairs.contains_key(pair) {
                        return err(
                            s.line,
                            s.col,
                            format!("semantic error: undeclared pair `{pair}`"),
                        );
                    }
                }
                Stmt::Gate { name, pairs } => {
                    self.need_state(s)?;
                    for p in pairs {
                        if !self.pairs.contains_key(p) {
                            return err(
                                s.line,
                                s.col,
                                format!("semantic error: undeclared pair `{p}` in gate {name}"),
                            );
                        }
                    }
                }
                Stmt::Measure2 { a, b, var } => {
                    self.need_state(s)?;
                    self.index_ok(s, *a)?;
                    self.index_ok(s, *b)?;
                    if a == b {
                        return err(
                            s.line,
                            s.col,
                            "semantic error: measure2 indices must differ",
                        );
                    }
                    if !self.bound.insert(var.clone()) {
                        return err(
                            s.line,
                            s.col,
                            format!(
                            "semantic error: variable `{var}` is already bound by a measurement"
                        ),
                        );
                    }
                }
                Stmt::Measure4 { a, b, c, d, var } => {
                    self.need_state(s)?;
                    let idx = [*a, *b, *c, *d];
                    for &i in &idx {
                        self.index_ok(s, i)?;
                    }
                    for x in 0..4 {
                        for y in (x + 1)..4 {
                            if idx[x] == idx[y] {
                                return err(
                                    s.line,
                                    s.col,
                                    "semantic error: measure4 indices must be distinct",
                                );
                            }
                        }
                    }
                    if !self.bound.insert(var.clone()) {
                        return err(
                            s.line,
                            s.col,
                            format!(
                            "semantic error: variable `{var}` is already bound by a measurement"
                        ),
                        );
                    }
                }
                Stmt::If { var, body, .. } => {
                    if !self.bound.contains(var) {
                        return err(
                            s.line,
                            s.col,
                            format!(
                                "semantic error: conditional references `{var}` before any \
                             measurement binds it"
                            ),
                        );
                    }
                    self.walk(body, true)?;
                }
                Stmt::Print(PrintKind::State) => self.need_state(s)?,
                Stmt::Print(PrintKind::Matrix(_)) => {}
            }
        }
        Ok(())
    }
}

fn analyze(circuit: &Circuit) -> Result<(), ParseError> {
    let mut a = Analyzer {
        n_majoranas: None,
        pairs: Default::default(),
        bound: Default::default(),
        prepared: false,
    };
    a.walk(&circuit.stmts, false)
}
