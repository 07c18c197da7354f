//! Code-specification files.
//!
//! ```text
//! # comment
//! field: p=2 m=2 modulus=[1,1,1]
//! length: k=3
//! g1: u*(x-1)^6 + u^2*(x-1)*(1+(x-1)) + u^3*a*(x-1)^2
//! ```
//!
//! Each generator expression is evaluated to a ring element and then split into
//! its canonical components, so equal elements parse to equal codes however written.

use std::sync::Arc;

use rrcyclic::chain::{RingElement, U_LEVELS};
use rrcyclic::codes::{correction_index, validate_canonical, CodeError, CyclicCode, GeneratorForm};
use rrcyclic::galois::{Field, FieldError, FieldSpec};
use rrcyclic::sring::SPoly;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeFileError {
    #[error("empty code file")]
    Empty,
    #[error("line {line}, column {col}: expected {expected}")]
    SyntaxError { line: usize, col: usize, expected: String },
    #[error("line {line}: unknown directive {name:?}")]
    UnknownDirective { line: usize, name: String },
    #[error("line {line}: duplicate {what}")]
    DuplicateDirective { line: usize, what: String },
    #[error("line {line}: generator g{level} given twice")]
    DuplicateGenerator { line: usize, level: usize },
    #[error("missing {0} line")]
    MissingDirective(&'static str),
    #[error("line {line}: {source}")]
    Field { line: usize, source: FieldError },
    #[error("line {line}: g{level} is not of the form u^{level}*(x-1)^r*(unit) + higher u-powers")]
    LevelMismatch { line: usize, level: usize },
    #[error("not canonical: {0}")]
    NotCanonical(#[from] CodeError),
}

/// Recursive-descent evaluator for generator expressions over a fixed field and length.
struct ExprParser<'a> {
    field: &'a Field,
    n: usize,
    line: usize,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn err(&self, expected: &str) -> CodeFileError {
        CodeFileError::SyntaxError {
            line: self.line,
            col: self.pos + 1,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<u64, CodeFileError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| {
            self.pos = start;
            self.err("integer that fits in 64 bits")
        })
    }

    fn parse(mut self) -> Result<RingElement, CodeFileError> {
        let v = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("'+', '-', '*' or end of expression"));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<RingElement, CodeFileError> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RingElement, CodeFileError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RingElement, CodeFileError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.int()?;
            Ok(ring_pow(&base, e))
        } else {
            Ok(base)
        }
    }

    fn constant(&self, c: rrcyclic::galois::FieldElement) -> RingElement {
        RingElement::monomial(self.field, self.n, 0, 0, c)
    }

    fn atom(&mut self) -> Result<RingElement, CodeFileError> {
        let f = self.field;
        let n = self.n;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("')'"));
                }
                Ok(v)
            }
            Some('u') => {
                self.pos += 1;
                Ok(RingElement::monomial(f, n, 1, 0, f.one()))
            }
            Some('s') => {
                self.pos += 1;
                Ok(RingElement::monomial(f, n, 0, 1, f.one()))
            }
            Some('x') => {
                self.pos += 1;
                Ok(&RingElement::one(f, n) + &RingElement::monomial(f, n, 0, 1, f.one()))
            }
            Some('a') => {
                self.pos += 1;
                Ok(self.constant(f.generator()))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                let p = f.characteristic() as u64;
                Ok(self.constant(f.from_int((v % p) as i64)))
            }
            _ => Err(self.err("'u', 's', 'x', 'a', integer or '('")),
        }
    }
}

fn ring_pow(base: &RingElement, mut e: u64) -> RingElement {
    let mut acc = RingElement::one(base.field(), base.len());
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Evaluates a generator expression to a ring element of length `n`.
pub fn parse_element(field: &Field, n: usize, line: usize, text: &str) -> Result<RingElement, CodeFileError> {
    ExprParser {
        field,
        n,
        line,
        chars: text.chars().collect(),
        pos: 0,
    }
    .parse()
}

/// Splits `g = u^level s^r h + (higher u-powers)` into the form's degree and corrections.
/// A unit `h` != 1 is divided out; the ideal is unchanged.
fn add_generator(
    form: GeneratorForm,
    level: usize,
    g: &RingElement,
    line: usize,
) -> Result<GeneratorForm, CodeFileError> {
    let n = g.len();
    if g.u_valuation() != level {
        return Err(CodeFileError::LevelMismatch { line, level });
    }
    let lead = g.part(level).decompose();
    let inv = lead.unit_part.inverse().expect("leading part is a unit after decompose");
    let g = g.scale(&inv);
    let mut form = form.with_generator(level, lead.valuation);
    for upow in level + 1..U_LEVELS {
        let d = g.part(upow).decompose();
        if d.valuation < n {
            let index = correction_index(level, upow).expect("slot above the leading level");
            form = form.with_correction(index, d.valuation, d.unit_part);
        }
    }
    Ok(form)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// `key=value` pairs of a directive body; returns the value text for `key`.
fn kv<'t>(body: &'t str, line: usize, offset: usize) -> Result<Vec<(&'t str, &'t str, usize)>, CodeFileError> {
    let mut out = Vec::new();
    let mut rest = body;
    let mut col = offset;
    loop {
        let trimmed = rest.trim_start();
        col += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            return Ok(out);
        }
        let Some(eq) = trimmed.find('=') else {
            return Err(CodeFileError::SyntaxError {
                line,
                col: col + 1,
                expected: "key=value".into(),
            });
        };
        let key = trimmed[..eq].trim();
        let after = &trimmed[eq + 1..];
        let value_len = if after.trim_start().starts_with('[') {
            after.find(']').map(|i| i + 1).ok_or(CodeFileError::SyntaxError {
                line,
                col: col + eq + 2,
                expected: "']'".into(),
            })?
        } else {
            after.find(char::is_whitespace).unwrap_or(after.len())
        };
        out.push((key, after[..value_len].trim(), col + eq + 2));
        col += eq + 1 + value_len;
        rest = &after[value_len..];
    }
}

fn parse_uint(text: &str, line: usize, col: usize) -> Result<u32, CodeFileError> {
    text.parse().map_err(|_| CodeFileError::SyntaxError {
        line,
        col,
        expected: "non-negative integer".into(),
    })
}

fn parse_field_line(body: &str, line: usize, offset: usize) -> Result<Field, CodeFileError> {
    let (mut p, mut m, mut modulus) = (None, None, None);
    for (key, value, col) in kv(body, line, offset)? {
        match key {
            "p" => p = Some(parse_uint(value, line, col)?),
            "m" => m = Some(parse_uint(value, line, col)?),
            "modulus" => {
                let inner = value
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or(CodeFileError::SyntaxError {
                        line,
                        col,
                        expected: "[c0,c1,...]".into(),
                    })?;
                let coeffs = inner
                    .split(',')
                    .map(|c| parse_uint(c.trim(), line, col))
                    .collect::<Result<Vec<_>, _>>()?;
                modulus = Some(coeffs);
            }
            _ => {
                return Err(CodeFileError::SyntaxError {
                    line,
                    col,
                    expected: "p, m or modulus".into(),
                })
            }
        }
    }
    let missing = |what: &str| CodeFileError::SyntaxError {
        line,
        col: offset + body.len() + 1,
        expected: what.to_string(),
    };
    let p = p.ok_or_else(|| missing("p=<prime>"))?;
    let m = m.unwrap_or(1);
    let spec = match modulus {
        Some(coeffs) => FieldSpec::new(p, m, &coeffs),
        None => FieldSpec::with_default_modulus(p, m),
    }
    .map_err(|source| CodeFileError::Field { line, source })?;
    Ok(Arc::new(spec))
}

fn parse_length_line(body: &str, line: usize, offset: usize) -> Result<u32, CodeFileError> {
    let pairs = kv(body, line, offset)?;
    match pairs.as_slice() {
        [("k", value, col)] => parse_uint(value, line, *col),
        _ => Err(CodeFileError::SyntaxError {
            line,
            col: offset + 1,
            expected: "k=<integer>".into(),
        }),
    }
}

/// Parses a code file into its field and validated code.
pub fn parse_code_file(text: &str) -> Result<(Field, CyclicCode), CodeFileError> {
    let mut field: Option<Field> = None;
    let mut k: Option<u32> = None;
    let mut gens: Vec<(usize, usize, String, usize)> = Vec::new();
    let mut any = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw);
        if content.trim().is_empty() {
            continue;
        }
        any = true;
        let Some(colon) = content.find(':') else {
            return Err(CodeFileError::SyntaxError {
                line,
                col: content.len() + 1,
                expected: "':'".into(),
            });
        };
        let name = content[..colon].trim();
        let body = &content[colon + 1..];
        let offset = colon + 1;
        match name {
            "field" => {
                if field.is_some() {
                    return Err(CodeFileError::DuplicateDirective { line, what: "field line".into() });
                }
                field = Some(parse_field_line(body, line, offset)?);
            }
            "length" => {
                if k.is_some() {
                    return Err(CodeFileError::DuplicateDirective { line, what: "length line".into() });
                }
                k = Some(parse_length_line(body, line, offset)?);
            }
            "g0" | "g1" | "g2" | "g3" => {
                let level = (name.as_bytes()[1] - b'0') as usize;
                if gens.iter().any(|g| g.0 == level) {
                    return Err(CodeFileError::DuplicateGenerator { line, level });
                }
                gens.push((level, line, body.to_string(), offset));
            }
            _ => return Err(CodeFileError::UnknownDirective { line, name: name.to_string() }),
        }
    }
    if !any {
        return Err(CodeFileError::Empty);
    }
    let field = field.ok_or(CodeFileError::MissingDirective("field"))?;
    let k = k.ok_or(CodeFileError::MissingDirective("length"))?;
    if gens.is_empty() {
        return Err(CodeFileError::NotCanonical(CodeError::EmptyGeneratorSet));
    }
    let n = (field.characteristic() as usize)
        .checked_pow(k)
        .filter(|&n| k >= 1 && n <= rrcyclic::codes::MAX_LENGTH)
        .ok_or(CodeFileError::NotCanonical(CodeError::BadLength))?;
    let mut form = GeneratorForm::new();
    for (level, line, body, offset) in gens {
        let g = parse_element(&field, n, line, &body).map_err(|e| match e {
            CodeFileError::SyntaxError { line, col, expected } => CodeFileError::SyntaxError {
                line,
                col: col + offset,
                expected,
            },
            other => other,
        })?;
        form = add_generator(form, level, &g, line)?;
    }
    let code = validate_canonical(&field, k, form)?;
    Ok((field, code))
}

fn format_poly(p: &SPoly) -> String {
    // field elements print in `a` only, so every `s` is the ring variable
    p.to_string().replace('s', "(x-1)")
}

fn format_spow(e: usize) -> String {
    match e {
        0 => String::new(),
        1 => "(x-1)".into(),
        _ => format!("(x-1)^{e}"),
    }
}

fn format_upow(b: usize) -> &'static str {
    ["", "u", "u^2", "u^3"][b]
}

fn join_factors(factors: &[String]) -> String {
    let nonempty: Vec<&str> = factors.iter().map(String::as_str).filter(|f| !f.is_empty()).collect();
    if nonempty.is_empty() {
        "1".into()
    } else {
        nonempty.join("*")
    }
}

/// The generator `g_level` in the file grammar.
pub fn format_generator(code: &CyclicCode, level: usize) -> Option<String> {
    let r = code.degree(level)?;
    let mut terms = vec![join_factors(&[format_upow(level).into(), format_spow(r)])];
    for upow in level + 1..U_LEVELS {
        let index = correction_index(level, upow).expect("slot above the leading level");
        if let Some(c) = code.correction(index) {
            let unit = if c.unit == SPoly::one(code.field(), code.n()) {
                String::new()
            } else {
                format!("({})", format_poly(&c.unit))
            };
            terms.push(join_factors(&[format_upow(upow).into(), format_spow(c.exponent), unit]));
        }
    }
    Some(terms.join(" + "))
}

/// A code file that parses back to `code`.
pub fn format_code_file(code: &CyclicCode) -> String {
    let f = code.field();
    let modulus: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
    let mut out = format!(
        "field: p={} m={} modulus=[{}]\nlength: k={}\n",
        f.characteristic(),
        f.degree(),
        modulus.join(","),
        code.k()
    );
    for level in code.ideal_type().levels() {
        out.push_str(&format!("g{level}: {}\n", format_generator(code, level).expect("present")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_example_parses() {
        let text = "field: p=2 m=2 modulus=[1,1,1]\nlength: k=3\ng1: u*(x-1)^6 + u^2*(x-1)*(1+(x-1)) + u^3*a*(x-1)^2";
        let (f, code) = parse_code_file(text).unwrap();
        assert_eq!(code.ideal_type().to_string(), "<g1>");
        assert_eq!(code.degree(1), Some(6));
        let c4 = code.correction(4).unwrap();
        assert_eq!((c4.exponent, c4.unit.clone()), (1, SPoly::from_ints(&f, 8, &[1, 1])));
        let c5 = code.correction(5).unwrap();
        assert_eq!(c5.exponent, 2);
        assert_eq!(c5.unit, SPoly::monomial(&f, 8, 0, f.generator()));
    }

    #[test]
    fn bare_g3() {
        let (_, code) = parse_code_file("field: p=2 m=1 modulus=[0,1]\nlength: k=2\ng3: u^3*(x-1)^2").unwrap();
        assert_eq!(code.ideal_type().to_string(), "<g3>");
        assert_eq!(code.degree(3), Some(2));
    }

    #[test]
    fn level_mismatch() {
        let err = parse_code_file("field: p=2 m=1\nlength: k=2\ng1: u^2*(x-1)").unwrap_err();
        assert!(matches!(err, CodeFileError::LevelMismatch { line: 3, level: 1 }));
    }

    #[test]
    fn semantic_equality() {
        let a = "field: p=3 m=1\nlength: k=2\ng2: u^2*((x-1)^4 + (x-1)^5)";
        let b = "field: p=3\nlength: k=2\n# same\ng2: u^2*(x-1)^4*(1+(x-1))";
        let c = "field: p=3\nlength: k=2\ng2: u^2*s^4 # leading unit divides out\n";
        let (_, ca) = parse_code_file(a).unwrap();
        let (_, cb) = parse_code_file(b).unwrap();
        let (_, cc) = parse_code_file(c).unwrap();
        assert_eq!(ca, cb);
        assert_eq!(ca, cc);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_code_file(""), Err(CodeFileError::Empty));
        assert_eq!(parse_code_file("# only\n\n"), Err(CodeFileError::Empty));
        assert!(matches!(
            parse_code_file("field: p=2\nlength: k=2\ng3: u^3*(x-1"),
            Err(CodeFileError::SyntaxError { line: 3, expected, .. }) if expected == "')'"
        ));
        assert!(matches!(
            parse_code_file("field: p=2\nlength: k=2\nweight: 3"),
            Err(CodeFileError::UnknownDirective { line: 3, .. })
        ));
        assert!(matches!(
            parse_code_file("field: p=2\nlength: k=2\ng3: u^3\ng3: u^3*s"),
            Err(CodeFileError::DuplicateGenerator { line: 4, level: 3 })
        ));
        assert!(matches!(
            parse_code_file("field: p=4\nlength: k=2\ng3: u^3"),
            Err(CodeFileError::Field { line: 1, .. })
        ));
        assert!(matches!(
            parse_code_file("field: p=2\nlength: k=2\ng1: u*s\ng2: u^2*s^2"),
            Err(CodeFileError::NotCanonical(CodeError::DegreeOrderViolated { .. }))
        ));
        assert_eq!(
            parse_code_file("field: p=2\ng3: u^3"),
            Err(CodeFileError::MissingDirective("length"))
        );
    }

    #[test]
    fn syntax_error_column() {
        let err = parse_code_file("field: p=2\nlength: k=2\ng3: u^3 * ?").unwrap_err();
        assert_eq!(
            err,
            CodeFileError::SyntaxError {
                line: 3,
                col: 11,
                expected: "'u', 's', 'x', 'a', integer or '('".into()
            }
        );
    }

    #[test]
    fn format_round_trip() {
        let text = "field: p=5 m=2 modulus=[2,1,1]\nlength: k=3\ng2: u^2*(x-1)^51 + u^3*(x-1)^67*(1 + a*(x-1))";
        let (_, code) = parse_code_file(text).unwrap();
        let again = format_code_file(&code);
        let (_, code2) = parse_code_file(&again).unwrap();
        assert_eq!(code, code2);
    }
}
