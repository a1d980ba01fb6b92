// SPDX-License-Identifier: Apache-2.0

//! OpenQASM 2.0 subset: reading into a [`Circuit`] and writing routed output.
//!
//! Quantum registers are flattened into one index space in declaration order.
//! `measure`, `reset` and classical registers are accepted and dropped.
//! `gate`/`opaque` declarations are skipped; calls to a declared single-qubit
//! gate become opaque single-qubit gates, calls to anything wider than two
//! qubits (or to a two-qubit gate other than `cx`, `cz`, `swap`) are rejected.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(&'static str),
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Number(s) => s.clone(),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(s) => (*s).to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 15] = [
    "->", "==", ";", ",", "[", "]", "(", ")", "{", "}", "+", "-", "*", "/", "^",
];

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let begin = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[begin..i].iter().collect())
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            Tok::Number(chars[begin..i].iter().collect())
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if chars.get(i) != Some(&'"') {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    message: "unterminated string".into(),
                });
            }
            i += 1;
            Tok::Str(chars[begin + 1..i - 1].iter().collect())
        } else {
            let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    i += s.len();
                    Tok::Sym(s)
                }
                None => {
                    return Err(Error::Syntax {
                        line,
                        column: col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        col += i - begin;
        out.push(Token {
            tok,
            line: start.0,
            col: start.1,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct Register {
    offset: usize,
    size: usize,
}

/// One operand: a whole register or a single element of it.
#[derive(Debug, Clone, Copy)]
enum Operand {
    Whole(Register),
    Single(usize),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    qregs: HashMap<String, Register>,
    qreg_order: Vec<String>,
    cregs: HashMap<String, usize>,
    /// Declared `gate`/`opaque` names and their qubit arity.
    declared: HashMap<String, usize>,
    num_qubits: usize,
    gates: Vec<Gate>,
    dropped: usize,
}

/// Standard gates of `qelib1.inc` that take more than one qubit and are not
/// `cx`, `cz` or `swap`.
const WIDE_STANDARD: [(&str, usize); 14] = [
    ("ccx", 3),
    ("cswap", 3),
    ("cy", 2),
    ("ch", 2),
    ("crx", 2),
    ("cry", 2),
    ("crz", 2),
    ("cu1", 2),
    ("cu3", 2),
    ("cp", 2),
    ("cu", 2),
    ("rxx", 2),
    ("rzz", 2),
    ("csx", 2),
];

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.col),
            None => self
                .tokens
                .last()
                .map(|t| (t.line, t.col + t.tok.text().len()))
                .unwrap_or((1, 1)),
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn next(&mut self) -> Result<Token> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.syntax("unexpected end of input"),
        }
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(x), .. }) if *x == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.at_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            let found = self
                .peek()
                .map(|t| t.tok.text())
                .unwrap_or_else(|| "end of input".into());
            self.syntax(format!("expected `{s}`, found `{found}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            other => {
                let found = other.map(|t| t.tok.text()).unwrap_or_else(|| "end of input".into());
                self.syntax(format!("expected identifier, found `{found}`"))
            }
        }
    }

    fn integer(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Token {
                tok: Tok::Number(s), ..
            }) if s.chars().all(|c| c.is_ascii_digit()) => {
                let v = s.parse().map_err(|_| ());
                match v {
                    Ok(v) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    Err(()) => self.syntax("integer out of range"),
                }
            }
            _ => self.syntax("expected integer"),
        }
    }

    fn skip_past(&mut self, s: &str) -> Result<()> {
        while !self.at_sym(s) {
            self.next()?;
        }
        self.pos += 1;
        Ok(())
    }

    fn program(&mut self) -> Result<()> {
        if matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == "OPENQASM") {
            self.pos += 1;
            match self.next()?.tok {
                Tok::Number(v) if v.starts_with('2') => {}
                _ => {
                    self.pos -= 1;
                    return self.syntax("only OPENQASM 2.x is supported");
                }
            }
            self.expect_sym(";")?;
        }
        while self.peek().is_some() {
            self.statement()?;
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<()> {
        let line = self.here().0;
        let word = self.ident()?;
        match word.as_str() {
            "include" => {
                match self.next()?.tok {
                    Tok::Str(_) => {}
                    _ => {
                        self.pos -= 1;
                        return self.syntax("expected file name string");
                    }
                }
                self.expect_sym(";")
            }
            "qreg" | "creg" => {
                let name = self.ident()?;
                self.expect_sym("[")?;
                let size = self.integer()?;
                self.expect_sym("]")?;
                self.expect_sym(";")?;
                if self.qregs.contains_key(&name) || self.cregs.contains_key(&name) {
                    return Err(Error::Semantic {
                        line,
                        message: format!("register `{name}` declared twice"),
                    });
                }
                if word == "qreg" {
                    self.qregs.insert(
                        name.clone(),
                        Register {
                            offset: self.num_qubits,
                            size,
                        },
                    );
                    self.qreg_order.push(name);
                    self.num_qubits += size;
                } else {
                    self.cregs.insert(name, size);
                }
                Ok(())
            }
            "gate" | "opaque" => self.declaration(word == "gate"),
            "measure" => {
                self.operand(line)?;
                self.expect_sym("->")?;
                self.classical(line)?;
                self.expect_sym(";")?;
                self.dropped += 1;
                Ok(())
            }
            "reset" => {
                self.operand(line)?;
                self.expect_sym(";")?;
                self.dropped += 1;
                Ok(())
            }
            "barrier" => {
                let ops = self.operands(line)?;
                self.expect_sym(";")?;
                let mut qubits = Vec::new();
                for op in ops {
                    match op {
                        Operand::Whole(r) => qubits.extend(r.offset..r.offset + r.size),
                        Operand::Single(q) => qubits.push(q),
                    }
                }
                qubits.sort_unstable();
                qubits.dedup();
                if !qubits.is_empty() {
                    self.gates.push(Gate::barrier(qubits));
                }
                Ok(())
            }
            "if" => Err(Error::UnsupportedGate {
                name: "if".into(),
                line,
                reason: "classically controlled operations are not supported".into(),
            }),
            _ => self.application(word, line),
        }
    }

    fn classical(&mut self, line: usize) -> Result<()> {
        let name = self.ident()?;
        let Some(&size) = self.cregs.get(&name) else {
            return Err(Error::Semantic {
                line,
                message: format!("undeclared classical register `{name}`"),
            });
        };
        if self.at_sym("[") {
            self.pos += 1;
            let i = self.integer()?;
            self.expect_sym("]")?;
            if i >= size {
                return Err(Error::Semantic {
                    line,
                    message: format!("index {i} out of range for `{name}[{size}]`"),
                });
            }
        }
        Ok(())
    }

    fn declaration(&mut self, has_body: bool) -> Result<()> {
        let name = self.ident()?;
        if self.at_sym("(") {
            self.skip_past(")")?;
        }
        let mut arity = 0;
        loop {
            self.ident()?;
            arity += 1;
            if self.at_sym(",") {
                self.pos += 1;
            } else {
                break;
            }
        }
        if has_body {
            self.expect_sym("{")?;
            let mut nesting = 1;
            while nesting > 0 {
                let t = self.next()?;
                match t.tok {
                    Tok::Sym("{") => nesting += 1,
                    Tok::Sym("}") => nesting -= 1,
                    _ => {}
                }
            }
        } else {
            self.expect_sym(";")?;
        }
        self.declared.insert(name, arity);
        Ok(())
    }

    fn operand(&mut self, line: usize) -> Result<Operand> {
        let name = self.ident()?;
        let Some(&reg) = self.qregs.get(&name) else {
            return Err(Error::Semantic {
                line,
                message: format!("undeclared quantum register `{name}`"),
            });
        };
        if self.at_sym("[") {
            self.pos += 1;
            let i = self.integer()?;
            self.expect_sym("]")?;
            if i >= reg.size {
                return Err(Error::Semantic {
                    line,
                    message: format!("index {i} out of range for `{name}[{}]`", reg.size),
                });
            }
            Ok(Operand::Single(reg.offset + i))
        } else {
            Ok(Operand::Whole(reg))
        }
    }

    fn operands(&mut self, line: usize) -> Result<Vec<Operand>> {
        let mut ops = vec![self.operand(line)?];
        while self.at_sym(",") {
            self.pos += 1;
            ops.push(self.operand(line)?);
        }
        Ok(ops)
    }

    /// Parameter expressions as whitespace-free text, split at top-level commas.
    fn params(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        if !self.at_sym("(") {
            return Ok(out);
        }
        self.pos += 1;
        if self.at_sym(")") {
            self.pos += 1;
            return Ok(out);
        }
        let mut current = String::new();
        let mut depth = 0usize;
        loop {
            let t = self.next()?;
            match t.tok {
                Tok::Sym("(") => depth += 1,
                Tok::Sym(")") if depth == 0 => {
                    if current.is_empty() {
                        self.pos -= 1;
                        return self.syntax("empty parameter");
                    }
                    out.push(current);
                    return Ok(out);
                }
                Tok::Sym(")") => depth -= 1,
                Tok::Sym(",") if depth == 0 => {
                    if current.is_empty() {
                        self.pos -= 1;
                        return self.syntax("empty parameter");
                    }
                    out.push(std::mem::take(&mut current));
                    continue;
                }
                Tok::Sym(";") | Tok::Sym("{") | Tok::Sym("}") | Tok::Str(_) => {
                    self.pos -= 1;
                    return self.syntax("malformed parameter list");
                }
                _ => {}
            }
            current.push_str(&t.tok.text());
        }
    }

    fn application(&mut self, name: String, line: usize) -> Result<()> {
        let params = self.params()?;
        let ops = self.operands(line)?;
        self.expect_sym(";")?;

        let kind = match name.as_str() {
            "cx" | "CX" => Some(GateKind::Cx),
            "cz" => Some(GateKind::Cz),
            "swap" => Some(GateKind::Swap),
            _ => None,
        };
        let arity = match &kind {
            Some(_) => 2,
            None => {
                let declared = self.declared.get(&name).copied();
                let standard = WIDE_STANDARD.iter().find(|(n, _)| *n == name).map(|&(_, a)| a);
                declared.or(standard).unwrap_or(1)
            }
        };
        if ops.len() != arity {
            if arity > 1 || ops.len() > 2 {
                return Err(Error::UnsupportedGate {
                    name,
                    line,
                    reason: format!("{} operands given", ops.len()),
                });
            }
            return Err(Error::Semantic {
                line,
                message: format!("`{name}` takes {arity} qubit(s), {} given", ops.len()),
            });
        }
        if kind.is_none() && arity > 1 {
            return Err(Error::UnsupportedGate {
                reason: format!("{arity}-qubit gates other than cx, cz and swap must be decomposed first"),
                name,
                line,
            });
        }
        let kind = kind.unwrap_or(GateKind::OneQubit { name, params });

        // Broadcast over whole registers; their sizes must agree.
        let width = ops
            .iter()
            .filter_map(|op| match op {
                Operand::Whole(r) => Some(r.size),
                Operand::Single(_) => None,
            })
            .try_fold(None, |acc: Option<usize>, size| match acc {
                Some(s) if s != size => Err(()),
                _ => Ok(Some(size)),
            })
            .map_err(|()| Error::Semantic {
                line,
                message: "broadcast over registers of different sizes".into(),
            })?;
        for i in 0..width.unwrap_or(1) {
            let qubits: Vec<usize> = ops
                .iter()
                .map(|op| match *op {
                    Operand::Whole(r) => r.offset + i,
                    Operand::Single(q) => q,
                })
                .collect();
            if qubits.len() == 2 && qubits[0] == qubits[1] {
                return Err(Error::Semantic {
                    line,
                    message: "two-qubit gate applied to the same qubit twice".into(),
                });
            }
            self.gates.push(Gate::new(kind.clone(), qubits));
        }
        Ok(())
    }
}

/// Parses OpenQASM 2.0 text into a circuit over the flattened quantum registers.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
        qregs: HashMap::new(),
        qreg_order: Vec::new(),
        cregs: HashMap::new(),
        declared: HashMap::new(),
        num_qubits: 0,
        gates: Vec::new(),
        dropped: 0,
    };
    p.program()?;
    if p.dropped > 0 {
        log::warn!("dropped {} measure/reset statement(s)", p.dropped);
    }
    log::debug!("quantum registers in order: {:?}", p.qreg_order);
    Circuit::with_gates(p.num_qubits, p.gates)
}

/// Writes `circuit` over a single register `q` of `width` qubits. SWAPs are
/// written as three `cx`.
pub fn emit_qasm(circuit: &Circuit, width: usize) -> String {
    let width = width.max(circuit.num_qubits());
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{width}];");
    for g in circuit.decompose_swaps().gates() {
        let args: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        let head = match &g.kind {
            GateKind::OneQubit { name, params } if !params.is_empty() => {
                format!("{name}({})", params.join(","))
            }
            kind => kind.name().to_string(),
        };
        let _ = writeln!(out, "{head} {};", args.join(","));
    }
    out
}

/// Evaluates a parameter expression: numbers, `pi`, `+ - * / ^`, unary minus,
/// parentheses and `sin cos tan exp ln sqrt`.
pub fn eval_param(text: &str) -> Result<f64> {
    let tokens = lex(text)?;
    let mut e = Eval { tokens, pos: 0 };
    let v = e.sum()?;
    if e.pos != e.tokens.len() {
        return Err(Error::Config(format!("trailing input in expression `{text}`")));
    }
    Ok(v)
}

struct Eval {
    tokens: Vec<Token>,
    pos: usize,
}

impl Eval {
    fn sym(&self) -> Option<&'static str> {
        match self.tokens.get(self.pos) {
            Some(Token { tok: Tok::Sym(s), .. }) => Some(s),
            _ => None,
        }
    }

    fn sum(&mut self) -> Result<f64> {
        let mut v = self.product()?;
        while let Some(op @ ("+" | "-")) = self.sym() {
            self.pos += 1;
            let r = self.product()?;
            v = if op == "+" { v + r } else { v - r };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        while let Some(op @ ("*" | "/")) = self.sym() {
            self.pos += 1;
            let r = self.unary()?;
            v = if op == "*" { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64> {
        if self.sym() == Some("-") {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.sym() == Some("+") {
            self.pos += 1;
            return self.unary();
        }
        let base = self.atom()?;
        if self.sym() == Some("^") {
            self.pos += 1;
            return Ok(base.powf(self.unary()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Config("incomplete expression".into()))?;
        self.pos += 1;
        match t.tok {
            Tok::Number(s) => s.parse().map_err(|_| Error::Config(format!("bad number `{s}`"))),
            Tok::Sym("(") => {
                let v = self.sum()?;
                self.close()?;
                Ok(v)
            }
            Tok::Ident(name) if name == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(name) => {
                let f: fn(f64) -> f64 = match name.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => return Err(Error::Config(format!("unknown symbol `{name}`"))),
                };
                if self.sym() != Some("(") {
                    return Err(Error::Config(format!("`{name}` needs an argument")));
                }
                self.pos += 1;
                let v = self.sum()?;
                self.close()?;
                Ok(f(v))
            }
            other => Err(Error::Config(format!("unexpected `{}`", other.text()))),
        }
    }

    fn close(&mut self) -> Result<()> {
        if self.sym() == Some(")") {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Config("missing `)`".into()))
        }
    }
}
