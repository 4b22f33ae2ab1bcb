//! Text form of model functions and simple currents.
//!
//! ```text
//! spec    := func | current
//! func    := radpow(s=REAL[, center=point]) | radlog([center=point]) | quad()
//!          | affine(c0=REAL, c1=REAL[, center=point]) | fund([center=point])
//!          | cyl(s=REAL, k=INT[, center=point]) | cyllog(k=INT[, center=point])
//!          | sum(REAL*func {, REAL*func})
//! current := cur(coef=(func | 1), ddc=func^(expo) {* func^(expo)}[, beta=INT])
//! expo    := INT | m-1 | m+p-n
//! point   := REAL {, REAL}      real and imaginary parts interleaved
//! ```
//!
//! Keyword arguments may appear in any order. Whitespace is ignored.

use std::fmt::Write as _;

use super::{ModelFunction, Point, Profile};
use crate::error::{Error, Result};
use crate::integrate::{Coefficient, SimpleCurrent};
use crate::setting::Setting;

#[derive(Debug, Clone, PartialEq)]
pub enum Spec {
    Function(ModelFunction),
    Current(SimpleCurrent),
}

/// Parses a function or current spec for the given setting.
pub fn parse_function_spec(text: &str, setting: &Setting) -> Result<Spec> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, setting };
    let spec = if p.peek_ident().as_deref() == Some("cur") {
        Spec::Current(p.current()?)
    } else {
        Spec::Function(p.func()?)
    };
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("end of input"));
    }
    Ok(spec)
}

pub fn render_function(f: &ModelFunction) -> String {
    let mut out = String::new();
    write_function(&mut out, f);
    out
}

pub fn render_current(t: &SimpleCurrent) -> String {
    let mut out = String::from("cur(coef=");
    match t.coefficient() {
        Coefficient::Unit => out.push('1'),
        Coefficient::Function(f) => write_function(&mut out, f),
    }
    out.push_str(", ddc=");
    for (i, (f, e)) in t.factors().iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        write_function(&mut out, f);
        let _ = write!(out, "^({e})");
    }
    let _ = write!(out, ", beta={})", t.beta_power());
    out
}

fn write_center(out: &mut String, c: &Point, first: bool) {
    if !c.is_origin() {
        out.push_str(if first { "center=" } else { ", center=" });
        let reals: Vec<String> = c.to_reals().iter().map(|x| x.to_string()).collect();
        out.push_str(&reals.join(","));
    }
}

fn write_function(out: &mut String, f: &ModelFunction) {
    match f {
        ModelFunction::Radial { center, profile } => {
            match *profile {
                Profile::Power { s } => {
                    let _ = write!(out, "radpow(s={s}");
                }
                Profile::Log => out.push_str("radlog("),
                Profile::Affine { c0, c1 } if c0 == 0.0 && c1 == 1.0 && center.is_origin() => {
                    out.push_str("quad()");
                    return;
                }
                Profile::Affine { c0, c1 } => {
                    let _ = write!(out, "affine(c0={c0}, c1={c1}");
                }
            }
            write_center(out, center, matches!(profile, Profile::Log));
            out.push(')');
        }
        ModelFunction::Cylindrical { center, k, profile } => {
            match *profile {
                Profile::Power { s } => {
                    let _ = write!(out, "cyl(s={s}, k={k}");
                }
                _ => {
                    let _ = write!(out, "cyllog(k={k}");
                }
            }
            write_center(out, center, false);
            out.push(')');
        }
        ModelFunction::ScaledSum(terms) => {
            out.push_str("sum(");
            for (i, (c, g)) in terms.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{c}*");
                write_function(out, g);
            }
            out.push(')');
        }
    }
}

enum Expo {
    Fixed(usize),
    Deferred,
}

enum Arg {
    Real(f64),
    Int(usize),
    Point(Point),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    setting: &'a Setting,
}

impl Parser<'_> {
    fn syntax(&self, expected: &str) -> Error {
        Error::Syntax { position: self.pos, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("'{}'", c as char)))
        }
    }

    fn peek_ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        while end < self.src.len() && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_') {
            end += 1;
        }
        if end == start || self.src[start].is_ascii_digit() {
            return None;
        }
        Some(String::from_utf8_lossy(&self.src[start..end]).into_owned())
    }

    fn ident(&mut self, expected: &str) -> Result<String> {
        let id = self.peek_ident().ok_or_else(|| self.syntax(expected))?;
        self.pos += id.len();
        Ok(id)
    }

    fn number_ahead(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' || c == b'.')
    }

    fn real(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        while end < self.src.len() {
            let c = self.src[end];
            let sign_ok = (c == b'-' || c == b'+') && (end == start || matches!(self.src[end - 1], b'e' | b'E'));
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || sign_ok {
                end += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..end]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = end;
                Ok(v)
            }
            _ => Err(self.syntax("a real number")),
        }
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("").parse().map_err(|_| {
            self.pos = start;
            self.syntax("an integer")
        })
    }

    fn point(&mut self) -> Result<Point> {
        let start = self.pos;
        let mut reals = vec![self.real()?];
        loop {
            let save = self.pos;
            if self.eat(b',') && self.number_ahead() {
                reals.push(self.real()?);
            } else {
                self.pos = save;
                break;
            }
        }
        let n = self.setting.n();
        if reals.len() != 2 * n {
            self.pos = start;
            return Err(Error::Semantic(format!("center needs {} reals for n = {n}, got {}", 2 * n, reals.len())));
        }
        Point::from_reals(&reals)
    }

    /// Parses `key=value` pairs up to and including the closing parenthesis.
    fn kwargs(&mut self, allowed: &[(&str, u8)]) -> Result<Vec<(String, Arg)>> {
        let mut out: Vec<(String, Arg)> = Vec::new();
        if self.eat(b')') {
            return Ok(out);
        }
        loop {
            let names: Vec<&str> = allowed.iter().map(|(k, _)| *k).collect();
            let key = self.ident(&names.join(" | "))?;
            let Some(&(_, kind)) = allowed.iter().find(|(k, _)| *k == key) else {
                self.pos -= key.len();
                return Err(self.syntax(&names.join(" | ")));
            };
            if out.iter().any(|(k, _)| *k == key) {
                return Err(Error::Semantic(format!("argument '{key}' given twice")));
            }
            self.expect(b'=')?;
            let v = match kind {
                b'r' => Arg::Real(self.real()?),
                b'i' => Arg::Int(self.int()?),
                _ => Arg::Point(self.point()?),
            };
            out.push((key, v));
            if self.eat(b')') {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }

    fn func(&mut self) -> Result<ModelFunction> {
        const FUNCS: &str = "radpow | radlog | quad | affine | fund | cyl | cyllog | sum";
        let start = self.pos;
        let name = self.ident(FUNCS)?;
        self.expect(b'(')?;
        let n = self.setting.n();
        if name == "sum" {
            let mut terms = Vec::new();
            loop {
                let c = self.real()?;
                self.expect(b'*')?;
                terms.push((c, self.func()?));
                if self.eat(b')') {
                    break;
                }
                self.expect(b',')?;
            }
            return ModelFunction::scaled_sum(terms);
        }
        let allowed: &[(&str, u8)] = match name.as_str() {
            "radpow" => &[("s", b'r'), ("center", b'p')],
            "radlog" | "fund" => &[("center", b'p')],
            "quad" => &[],
            "affine" => &[("c0", b'r'), ("c1", b'r'), ("center", b'p')],
            "cyl" => &[("s", b'r'), ("k", b'i'), ("center", b'p')],
            "cyllog" => &[("k", b'i'), ("center", b'p')],
            _ => {
                self.pos = start;
                self.skip_ws();
                return Err(self.syntax(FUNCS));
            }
        };
        let args = self.kwargs(allowed)?;
        let real = |k: &str| {
            args.iter().find_map(|(key, v)| match v {
                Arg::Real(x) if key == k => Some(*x),
                _ => None,
            })
        };
        let need = |k: &str| real(k).ok_or_else(|| Error::Semantic(format!("{name} needs argument '{k}'")));
        let center = args
            .iter()
            .find_map(|(_, v)| match v {
                Arg::Point(p) => Some(p.clone()),
                _ => None,
            })
            .unwrap_or_else(|| Point::origin(n));
        let k = args.iter().find_map(|(_, v)| match v {
            Arg::Int(k) => Some(*k),
            _ => None,
        });
        let need_k = || k.ok_or_else(|| Error::Semantic(format!("{name} needs argument 'k'")));
        match name.as_str() {
            "radpow" => ModelFunction::radial(center, Profile::power(need("s")?)?),
            "radlog" => ModelFunction::radial(center, Profile::Log),
            "quad" => Ok(ModelFunction::quadratic(n)),
            "affine" => ModelFunction::radial(center, Profile::Affine { c0: need("c0")?, c1: need("c1")? }),
            "fund" => Ok(ModelFunction::fundamental(self.setting, center)),
            "cyl" => ModelFunction::cylindrical(center, need_k()?, Profile::power(need("s")?)?),
            _ => ModelFunction::cylindrical(center, need_k()?, Profile::Log),
        }
    }

    fn expo(&mut self) -> Result<Expo> {
        self.expect(b'(')?;
        let e = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            Expo::Fixed(self.int()?)
        } else {
            let start = self.pos;
            let mut word = String::new();
            while let Some(c) = self.peek() {
                if c == b')' {
                    break;
                }
                word.push(c as char);
                self.pos += 1;
            }
            match word.as_str() {
                "m-1" => Expo::Fixed(self.setting.m() - 1),
                "m+p-n" => Expo::Deferred,
                _ => {
                    self.pos = start;
                    return Err(self.syntax("INT | m-1 | m+p-n"));
                }
            }
        };
        self.expect(b')')?;
        Ok(e)
    }

    fn current(&mut self) -> Result<SimpleCurrent> {
        self.ident("cur")?;
        self.expect(b'(')?;
        let mut coef = None;
        let mut ddc: Option<Vec<(ModelFunction, Expo)>> = None;
        let mut beta = None;
        loop {
            let key = self.ident("coef | ddc | beta")?;
            self.expect(b'=')?;
            match key.as_str() {
                "coef" if coef.is_none() => {
                    coef = Some(if self.number_ahead() {
                        let at = self.pos;
                        if self.real()? != 1.0 {
                            self.pos = at;
                            return Err(self.syntax("1 or a function"));
                        }
                        Coefficient::Unit
                    } else {
                        Coefficient::Function(self.func()?)
                    });
                }
                "ddc" if ddc.is_none() => {
                    let mut list = Vec::new();
                    loop {
                        let f = self.func()?;
                        self.expect(b'^')?;
                        list.push((f, self.expo()?));
                        if !self.eat(b'*') {
                            break;
                        }
                    }
                    ddc = Some(list);
                }
                "beta" if beta.is_none() => beta = Some(self.int()?),
                "coef" | "ddc" | "beta" => return Err(Error::Semantic(format!("argument '{key}' given twice"))),
                _ => {
                    self.pos -= key.len() + 1;
                    return Err(self.syntax("coef | ddc | beta"));
                }
            }
            if self.eat(b')') {
                break;
            }
            self.expect(b',')?;
        }
        let coef = coef.ok_or_else(|| Error::Semantic("cur needs 'coef'".into()))?;
        let ddc = ddc.ok_or_else(|| Error::Semantic("cur needs 'ddc'".into()))?;
        let beta = beta.unwrap_or(0);
        let fixed: usize = ddc.iter().map(|(_, e)| if let Expo::Fixed(k) = e { *k } else { 0 }).sum();
        let deferred = ddc.iter().filter(|(_, e)| matches!(e, Expo::Deferred)).count();
        if deferred > 1 {
            return Err(Error::Semantic("at most one factor may use the exponent m+p-n".into()));
        }
        let m = self.setting.m();
        let resolved = if deferred == 1 {
            // p is the bidimension of the remaining factors and beta power.
            m.checked_sub(fixed + beta)
                .ok_or_else(|| Error::Semantic(format!("m+p-n is negative: m = {m}, other degree = {}", fixed + beta)))?
        } else {
            0
        };
        let factors = ddc
            .into_iter()
            .map(|(f, e)| match e {
                Expo::Fixed(k) => (f, k),
                Expo::Deferred => (f, resolved),
            })
            .collect();
        SimpleCurrent::new(coef, factors, beta)
    }
}
