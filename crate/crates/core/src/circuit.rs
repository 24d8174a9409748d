//! Gate-list circuit IR, an OpenQASM 2.0 subset reader/writer, and gate
//! composition statistics.
//!
//! The accepted dialect is deliberately small:
//!
//! - mandatory `OPENQASM 2.0;` header, optional `include "...";` (ignored);
//! - `qreg name[n];` (several registers are flattened in declaration order);
//! - `creg`, `measure`, `barrier`, `reset` and `if (...) ...;` are accepted
//!   and dropped;
//! - gate applications from a fixed vocabulary (see [`GATE_VOCABULARY`]) with
//!   real-literal or `k*pi/m` parameters, and register broadcasting;
//! - `gate` / `opaque` definitions are rejected.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `(name, arity, parameter count)` for every gate the parser and writer know.
pub const GATE_VOCABULARY: &[(&str, usize, usize)] = &[
    ("h", 1, 0),
    ("x", 1, 0),
    ("y", 1, 0),
    ("z", 1, 0),
    ("s", 1, 0),
    ("sdg", 1, 0),
    ("t", 1, 0),
    ("tdg", 1, 0),
    ("rx", 1, 1),
    ("ry", 1, 1),
    ("rz", 1, 1),
    ("u", 1, 3),
    ("cx", 2, 0),
    ("cz", 2, 0),
    ("cp", 2, 1),
    ("crz", 2, 1),
    ("swap", 2, 0),
    ("ccx", 3, 0),
    ("cswap", 3, 0),
];

fn gate_signature(name: &str) -> Option<(usize, usize)> {
    GATE_VOCABULARY
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(_, arity, params)| (arity, params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Origin {
    Real,
    Random,
    Generated,
}

impl Origin {
    pub const ALL: [Origin; 3] = [Origin::Real, Origin::Random, Origin::Generated];

    pub fn as_str(&self) -> &'static str {
        match self {
            Origin::Real => "Real",
            Origin::Random => "Random",
            Origin::Generated => "Generated",
        }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown circuit origin `{0}` (expected real, random or generated)")]
pub struct UnknownOrigin(pub String);

impl FromStr for Origin {
    type Err = UnknownOrigin;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "real" => Ok(Origin::Real),
            "random" => Ok(Origin::Random),
            "generated" => Ok(Origin::Generated),
            _ => Err(UnknownOrigin(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: String,
    pub qubits: Vec<usize>,
    /// Angles in radians.
    pub params: Vec<f64>,
}

impl Gate {
    pub fn new(name: impl Into<String>, qubits: Vec<usize>, params: Vec<f64>) -> Self {
        Gate {
            name: name.into(),
            qubits,
            params,
        }
    }

    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_multiqubit(&self) -> bool {
        self.qubits.len() >= 2
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("a circuit needs at least one qubit")]
    NoQubits,
    #[error("gate `{name}` has no qubits")]
    EmptyGate { name: String },
    #[error("gate `{name}` repeats qubit {qubit}")]
    RepeatedQubit { name: String, qubit: usize },
    #[error("gate `{name}` uses qubit {qubit} but the circuit has {num_qubits}")]
    QubitOutOfRange {
        name: String,
        qubit: usize,
        num_qubits: usize,
    },
}

/// A quantum circuit as an ordered list of gates over `num_qubits` qubits.
///
/// Every stored gate is non-empty, has pairwise distinct qubits and stays
/// inside `0..num_qubits`; [`Circuit::push`] enforces this.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub id: String,
    pub origin: Origin,
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(id: impl Into<String>, origin: Origin, num_qubits: usize) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        Ok(Circuit {
            id: id.into(),
            origin,
            num_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(
        id: impl Into<String>,
        origin: Origin,
        num_qubits: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(id, origin, num_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if gate.qubits.is_empty() {
            return Err(CircuitError::EmptyGate { name: gate.name });
        }
        for (i, &q) in gate.qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    name: gate.name,
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
            if gate.qubits[..i].contains(&q) {
                return Err(CircuitError::RepeatedQubit { name: gate.name, qubit: q });
            }
        }
        self.gates.push(gate);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GateStats {
    pub total_gates: usize,
    pub multiqubit_gates: usize,
    pub multiqubit_fraction: f64,
    pub max_arity: usize,
}

pub fn gate_stats(c: &Circuit) -> GateStats {
    let total_gates = c.gates.len();
    let multiqubit_gates = c.gates.iter().filter(|g| g.is_multiqubit()).count();
    let max_arity = c.gates.iter().map(Gate::arity).max().unwrap_or(0);
    let multiqubit_fraction = if total_gates > 0 {
        multiqubit_gates as f64 / total_gates as f64
    } else {
        0.0
    };
    GateStats {
        total_gates,
        multiqubit_gates,
        multiqubit_fraction,
        max_arity,
    }
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

#[derive(Debug, Error, PartialEq)]
pub enum QasmError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unsupported construct: {construct}")]
    Unsupported {
        line: usize,
        col: usize,
        construct: String,
    },
    #[error("{line}:{col}: undeclared qubit {qubit}")]
    UndeclaredQubit { line: usize, col: usize, qubit: String },
    #[error("{line}:{col}: invalid gate: {msg}")]
    InvalidGate { line: usize, col: usize, msg: String },
    #[error("cannot write gate `{0}`: not in the supported vocabulary")]
    UnsupportedGate(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
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
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
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
            Tok::Number(chars[start..i].iter().collect())
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if chars.get(i) != Some(&'"') {
                return Err(QasmError::Syntax {
                    line: tl,
                    col: tc,
                    msg: "unterminated string".into(),
                });
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else {
            let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let sym = match two.as_str() {
                "->" => Some("->"),
                "==" => Some("=="),
                _ => None,
            };
            if let Some(s) = sym {
                i += 2;
                Tok::Sym(s)
            } else {
                i += 1;
                Tok::Sym(match c {
                    '[' => "[",
                    ']' => "]",
                    '(' => "(",
                    ')' => ")",
                    ',' => ",",
                    ';' => ";",
                    '*' => "*",
                    '/' => "/",
                    '+' => "+",
                    '-' => "-",
                    '{' => "{",
                    '}' => "}",
                    '^' => "^",
                    _ => {
                        return Err(QasmError::Syntax {
                            line: tl,
                            col: tc,
                            msg: format!("unexpected character `{c}`"),
                        })
                    }
                })
            }
        };
        col += i - start;
        out.push(Spanned { tok, line: tl, col: tc });
    }
    Ok(out)
}

struct Register {
    offset: usize,
    size: usize,
}

enum Arg {
    Single(usize),
    Whole { offset: usize, size: usize },
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    qregs: HashMap<String, Register>,
    cregs: HashMap<String, usize>,
    width: usize,
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or(self.end)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, QasmError> {
        let (line, col) = self.here();
        Err(QasmError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn describe_next(&self) -> String {
        match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".into(),
        }
    }

    fn expect_sym(&mut self, sym: &str) -> Result<(), QasmError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == sym => {
                self.pos += 1;
                Ok(())
            }
            _ => self.syntax(format!("expected `{sym}`, found {}", self.describe_next())),
        }
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self) -> Result<String, QasmError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.syntax(format!("expected identifier, found {}", self.describe_next())),
        }
    }

    fn expect_uint(&mut self) -> Result<usize, QasmError> {
        match self.peek() {
            Some(Tok::Number(s)) if s.bytes().all(|b| b.is_ascii_digit()) => match s.parse() {
                Ok(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                Err(_) => self.syntax(format!("integer `{s}` out of range")),
            },
            _ => self.syntax(format!("expected integer, found {}", self.describe_next())),
        }
    }

    fn skip_statement(&mut self) -> Result<(), QasmError> {
        loop {
            match self.next() {
                Some(Tok::Sym(";")) => return Ok(()),
                Some(_) => {}
                None => return self.syntax("expected `;` before end of input"),
            }
        }
    }

    fn header(&mut self) -> Result<(), QasmError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "OPENQASM" => self.pos += 1,
            _ => return self.syntax("missing `OPENQASM 2.0;` header"),
        }
        let (line, col) = self.here();
        match self.next() {
            Some(Tok::Number(v)) if v == "2.0" || v == "2" => {}
            Some(Tok::Number(v)) => {
                return Err(QasmError::Unsupported {
                    line,
                    col,
                    construct: format!("OPENQASM version {v}"),
                })
            }
            _ => return Err(QasmError::Syntax {
                line,
                col,
                msg: "expected version number after OPENQASM".into(),
            }),
        }
        self.expect_sym(";")
    }

    fn declaration(&mut self, quantum: bool) -> Result<(), QasmError> {
        let (line, col) = self.here();
        let name = self.expect_ident()?;
        self.expect_sym("[")?;
        let size = self.expect_uint()?;
        self.expect_sym("]")?;
        self.expect_sym(";")?;
        if self.qregs.contains_key(&name) || self.cregs.contains_key(&name) {
            return Err(QasmError::Syntax {
                line,
                col,
                msg: format!("register `{name}` declared twice"),
            });
        }
        if quantum {
            if size == 0 {
                return Err(QasmError::Syntax {
                    line,
                    col,
                    msg: format!("quantum register `{name}` has size 0"),
                });
            }
            self.qregs.insert(
                name,
                Register {
                    offset: self.width,
                    size,
                },
            );
            self.width += size;
        } else {
            self.cregs.insert(name, size);
        }
        Ok(())
    }

    fn param_factor(&mut self) -> Result<f64, QasmError> {
        let (line, col) = self.here();
        match self.next() {
            Some(Tok::Ident(s)) if s == "pi" => Ok(PI),
            Some(Tok::Number(s)) => s.parse::<f64>().or_else(|_| {
                Err(QasmError::Syntax {
                    line,
                    col,
                    msg: format!("malformed number `{s}`"),
                })
            }),
            Some(t) => Err(QasmError::Unsupported {
                line,
                col,
                construct: format!("parameter expression containing {t}"),
            }),
            None => self.syntax("unexpected end of input in parameter"),
        }
    }

    /// `[-] factor (('*' | '/') factor)*` with factors being literals or `pi`.
    fn param(&mut self) -> Result<f64, QasmError> {
        let negate = self.eat_sym("-");
        let mut v = self.param_factor()?;
        loop {
            if self.eat_sym("*") {
                v *= self.param_factor()?;
            } else if self.eat_sym("/") {
                v /= self.param_factor()?;
            } else {
                break;
            }
        }
        match self.peek() {
            Some(Tok::Sym(",")) | Some(Tok::Sym(")")) => Ok(if negate { -v } else { v }),
            Some(Tok::Sym(s)) if matches!(*s, "+" | "-" | "(" | "^") => {
                let (line, col) = self.here();
                Err(QasmError::Unsupported {
                    line,
                    col,
                    construct: format!("parameter expression operator `{s}`"),
                })
            }
            _ => self.syntax(format!("unexpected {} in parameter list", self.describe_next())),
        }
    }

    fn qubit_arg(&mut self) -> Result<Arg, QasmError> {
        let (line, col) = self.here();
        let name = self.expect_ident()?;
        let Some(reg) = self.qregs.get(&name) else {
            return Err(QasmError::UndeclaredQubit {
                line,
                col,
                qubit: name,
            });
        };
        let (offset, size) = (reg.offset, reg.size);
        if self.eat_sym("[") {
            let idx = self.expect_uint()?;
            self.expect_sym("]")?;
            if idx >= size {
                return Err(QasmError::UndeclaredQubit {
                    line,
                    col,
                    qubit: format!("{name}[{idx}]"),
                });
            }
            Ok(Arg::Single(offset + idx))
        } else {
            Ok(Arg::Whole { offset, size })
        }
    }

    fn gate_application(&mut self, gates: &mut Vec<Gate>, name: String, line: usize, col: usize) -> Result<(), QasmError> {
        let Some((arity, nparams)) = gate_signature(&name) else {
            return Err(QasmError::Unsupported {
                line,
                col,
                construct: format!("gate `{name}`"),
            });
        };
        let mut params = Vec::new();
        if self.eat_sym("(") {
            if !self.eat_sym(")") {
                loop {
                    params.push(self.param()?);
                    if self.eat_sym(")") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
        }
        let mut args = vec![self.qubit_arg()?];
        while self.eat_sym(",") {
            args.push(self.qubit_arg()?);
        }
        self.expect_sym(";")?;

        let invalid = |msg: String| QasmError::InvalidGate { line, col, msg };
        if params.len() != nparams {
            return Err(invalid(format!(
                "`{name}` takes {nparams} parameter(s), got {}",
                params.len()
            )));
        }
        if args.len() != arity {
            return Err(invalid(format!(
                "`{name}` acts on {arity} qubit(s), got {}",
                args.len()
            )));
        }
        let mut width = None;
        for a in &args {
            if let Arg::Whole { size, .. } = a {
                match width {
                    None => width = Some(*size),
                    Some(w) if w != *size => {
                        return Err(invalid("broadcast over registers of different sizes".into()))
                    }
                    _ => {}
                }
            }
        }
        for rep in 0..width.unwrap_or(1) {
            let qubits: Vec<usize> = args
                .iter()
                .map(|a| match *a {
                    Arg::Single(q) => q,
                    Arg::Whole { offset, .. } => offset + rep,
                })
                .collect();
            if let Some(i) = (1..qubits.len()).find(|&i| qubits[..i].contains(&qubits[i])) {
                return Err(invalid(format!("`{name}` repeats qubit {}", qubits[i])));
            }
            gates.push(Gate::new(name.clone(), qubits, params.clone()));
        }
        Ok(())
    }
}

/// Parses OpenQASM 2.0 text in the supported subset.
///
/// The returned circuit has an empty id and origin [`Origin::Real`]; callers
/// that know better overwrite both.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let toks = lex(text)?;
    let end = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        qregs: HashMap::new(),
        cregs: HashMap::new(),
        width: 0,
    };
    p.header()?;

    // A qreg may follow earlier gates, so the width is only final at the end.
    let mut gates = Vec::new();
    while let Some(t) = p.peek().cloned() {
        let (line, col) = p.here();
        match t {
            Tok::Ident(kw) => {
                p.pos += 1;
                match kw.as_str() {
                    "include" => {
                        match p.next() {
                            Some(Tok::Str(_)) => {}
                            _ => return p.syntax("expected file name string after include"),
                        }
                        p.expect_sym(";")?;
                    }
                    "qreg" => p.declaration(true)?,
                    "creg" => p.declaration(false)?,
                    "measure" | "barrier" | "reset" => p.skip_statement()?,
                    "if" => {
                        p.expect_sym("(")?;
                        p.skip_statement()?;
                    }
                    "gate" | "opaque" => {
                        return Err(QasmError::Unsupported {
                            line,
                            col,
                            construct: format!("`{kw}` definition"),
                        })
                    }
                    "OPENQASM" => return Err(QasmError::Syntax {
                        line,
                        col,
                        msg: "duplicate OPENQASM header".into(),
                    }),
                    _ => p.gate_application(&mut gates, kw, line, col)?,
                }
            }
            other => {
                return Err(QasmError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected {other} at start of statement"),
                })
            }
        }
    }

    if p.width == 0 {
        return Err(QasmError::Syntax {
            line: end.0,
            col: end.1,
            msg: "no quantum register declared".into(),
        });
    }
    Ok(Circuit::from_gates(String::new(), Origin::Real, p.width, gates)
        .expect("qubit indices were validated against declared registers"))
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

/// Formats an angle so that [`parse_qasm`] reads back the identical `f64`.
/// Multiples `k*pi/m` (m a power of two) are emitted symbolically.
fn format_param(v: f64) -> String {
    if v.is_finite() && v != 0.0 {
        let mag = v.abs();
        let mut m = 1u64;
        while m <= 1 << 30 {
            let k = (mag * m as f64 / PI).round();
            if k >= 1.0 && k <= 4096.0 {
                let num = if k == 1.0 { PI } else { k * PI };
                let val = if m == 1 { num } else { num / m as f64 };
                if val == mag {
                    let sign = if v < 0.0 { "-" } else { "" };
                    let num = if k == 1.0 { "pi".to_string() } else { format!("{}*pi", k as u64) };
                    return if m == 1 {
                        format!("{sign}{num}")
                    } else {
                        format!("{sign}{num}/{m}")
                    };
                }
            }
            m <<= 1;
        }
    }
    // Display for f64 is the shortest text that round-trips.
    format!("{v}")
}

/// Emits the circuit as OpenQASM 2.0 over a single register `q`.
pub fn write_qasm(c: &Circuit) -> Result<String, QasmError> {
    use std::fmt::Write as _;

    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits);
    for g in &c.gates {
        match gate_signature(&g.name) {
            Some((arity, nparams)) if arity == g.qubits.len() && nparams == g.params.len() => {}
            _ => return Err(QasmError::UnsupportedGate(g.name.clone())),
        }
        out.push_str(&g.name);
        if !g.params.is_empty() {
            let ps: Vec<String> = g.params.iter().map(|&v| format_param(v)).collect();
            let _ = write!(out, "({})", ps.join(","));
        }
        let qs: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", qs.join(","));
    }
    Ok(out)
}
