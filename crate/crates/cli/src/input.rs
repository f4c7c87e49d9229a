//! The JSON input document and its validation into presentations.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use tateforge::poly::Polynomial;
use tateforge::presentation::{validate_presentation, GradedPresentation, RawPresentation};
use tateforge::{Error, Field, Window};

pub const DEFAULT_HDEG: u32 = 6;
pub const DEFAULT_IDEG: u32 = 12;
pub const DEFAULT_SERIES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    #[serde(default = "default_hdeg")]
    pub hdeg_max: u32,
    #[serde(default = "default_ideg")]
    pub ideg_max: u32,
    #[serde(default = "default_series")]
    pub series_max: usize,
}

fn default_hdeg() -> u32 {
    DEFAULT_HDEG
}
fn default_ideg() -> u32 {
    DEFAULT_IDEG
}
fn default_series() -> usize {
    DEFAULT_SERIES
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec { hdeg_max: DEFAULT_HDEG, ideg_max: DEFAULT_IDEG, series_max: DEFAULT_SERIES }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    #[serde(default)]
    pub ideal: Vec<String>,
    #[serde(rename = "I1", default, skip_serializing_if = "Option::is_none")]
    pub i1: Option<Vec<String>>,
    #[serde(rename = "I2", default, skip_serializing_if = "Option::is_none")]
    pub i2: Option<Vec<String>>,
    #[serde(default)]
    pub window: WindowSpec,
}

/// An input problem with its position in the source document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at `{}`)", self.token)?;
        }
        Ok(())
    }
}

impl std::error::Error for InputError {}

/// Line and column (both 1-based, columns in characters) of a byte offset.
fn line_column(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[start..].chars().count() + 1)
}

/// Byte offset just past the closing quote of the JSON string starting at `start`.
fn skip_string(src: &[u8], start: usize) -> usize {
    let mut i = start + 1;
    while i < src.len() {
        match src[i] {
            b'\\' => i += 2,
            b'"' => return i + 1,
            _ => i += 1,
        }
    }
    src.len()
}

/// Offset of the value of top-level key `key`.
fn find_key(src: &str, key: &str) -> Option<usize> {
    let bytes = src.as_bytes();
    let mut depth = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'{' | b'[' => depth += 1,
            b'}' | b']' => depth = depth.saturating_sub(1),
            b'"' => {
                let end = skip_string(bytes, i);
                if depth == 1 && &src[i + 1..end - 1] == key {
                    let rest = &src[end..];
                    let colon = rest.find(|c: char| !c.is_whitespace())?;
                    if rest[colon..].starts_with(':') {
                        let after = &rest[colon + 1..];
                        return Some(end + colon + 1 + (after.len() - after.trim_start().len()));
                    }
                }
                i = end;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    None
}

/// Offset of the opening quote of the `index`-th string in the array value of `key`.
fn find_entry(src: &str, key: &str, index: usize) -> Option<usize> {
    let start = find_key(src, key)?;
    let bytes = src.as_bytes();
    if bytes.get(start) != Some(&b'[') {
        return None;
    }
    let mut seen = 0;
    let mut i = start + 1;
    while i < bytes.len() && bytes[i] != b']' {
        if bytes[i] == b'"' {
            if seen == index {
                return Some(i);
            }
            seen += 1;
            i = skip_string(bytes, i);
        } else {
            i += 1;
        }
    }
    None
}

fn located(src: &str, offset: Option<usize>, token: impl Into<String>, message: impl Into<String>) -> InputError {
    let (line, column) = offset.map_or((1, 1), |o| line_column(src, o));
    InputError { line, column, token: token.into(), message: message.into() }
}

pub fn parse_input(src: &str) -> Result<InputDoc, InputError> {
    serde_json::from_str(src).map_err(|e| {
        let line_text = src.lines().nth(e.line().saturating_sub(1)).unwrap_or("");
        let token: String = line_text.chars().skip(e.column().saturating_sub(1)).take(12).collect();
        let full = e.to_string();
        let message = full.rfind(" at line ").map_or(full.as_str(), |i| &full[..i]).to_string();
        InputError { line: e.line(), column: e.column(), token: token.trim().to_string(), message }
    })
}

/// A validated document: the base ring, the pair ideals and the window.
#[derive(Clone, Debug)]
pub struct Problem {
    pub doc: InputDoc,
    pub base: Arc<GradedPresentation>,
    pub i1: Option<Vec<Polynomial>>,
    pub i2: Option<Vec<Polynomial>>,
    pub window: Window,
    pub series_max: usize,
}

fn field_of(doc: &InputDoc, src: &str) -> Result<Field, InputError> {
    let at = find_key(src, "field");
    match &doc.field {
        FieldSpec::Named(name) if name == "Q" || name == "QQ" => Ok(Field::Rational),
        FieldSpec::Named(name) => {
            Err(located(src, at, name.clone(), format!("unknown field `{name}`; use \"Q\" or {{\"Fp\": p}}")))
        }
        FieldSpec::Prime { p } => {
            let p32 = u32::try_from(*p).map_err(|_| located(src, at, p.to_string(), format!("{p} is too large")))?;
            Field::prime(p32).map_err(|e| located(src, at, p.to_string(), e.to_string()))
        }
    }
}

/// Maps a generator-level error onto the string it came from.
fn locate_generator(src: &str, key: &str, index: usize, text: &str, err: Error) -> InputError {
    let at = find_entry(src, key, index);
    match err {
        Error::Parse(p) => {
            let (line, column) = at.map_or((1, 1), |o| line_column(src, o));
            InputError {
                line,
                column: column + p.column,
                token: p.token,
                message: format!("{key}[{index}]: {}", p.message),
            }
        }
        // The generator was validated alone, so the engine's own index is always 0.
        other => located(
            src,
            at,
            text,
            format!("{key}[{index}]: {}", other.to_string().replacen("generator 0 ", "generator ", 1)),
        ),
    }
}

impl Problem {
    pub fn from_source(src: &str) -> Result<Problem, InputError> {
        let doc = parse_input(src)?;
        Self::new(doc, src)
    }

    /// Validates `doc`; `src` is the text it was parsed from, used to locate errors.
    pub fn new(doc: InputDoc, src: &str) -> Result<Problem, InputError> {
        let field = field_of(&doc, src)?;
        let vars_at = find_key(src, "vars");
        let raw = |ideal: Vec<String>| RawPresentation { field, vars: doc.vars.clone(), ideal };
        // Each base generator is checked on its own first so errors point at it.
        for (k, g) in doc.ideal.iter().enumerate() {
            if let Err(e) = validate_presentation(&raw(vec![g.clone()])) {
                return Err(match e {
                    Error::BadVariableName(_) | Error::EmptyGenerators => located(src, vars_at, "", e.to_string()),
                    e => locate_generator(src, "ideal", k, g, e),
                });
            }
        }
        let base =
            validate_presentation(&raw(doc.ideal.clone())).map_err(|e| located(src, vars_at, "", e.to_string()))?;
        let base = Arc::new(base);
        let pair = |key: &str, gens: &Option<Vec<String>>| -> Result<Option<Vec<Polynomial>>, InputError> {
            let Some(gens) = gens else { return Ok(None) };
            let mut out = Vec::with_capacity(gens.len());
            for (k, g) in gens.iter().enumerate() {
                validate_presentation(&raw(vec![g.clone()])).map_err(|e| locate_generator(src, key, k, g, e))?;
                out.push(base.parse(g).map_err(|e| locate_generator(src, key, k, g, e))?);
            }
            Ok(Some(out))
        };
        let i1 = pair("I1", &doc.i1)?;
        let i2 = pair("I2", &doc.i2)?;
        let w = doc.window;
        if w.hdeg_max == 0 || w.ideg_max == 0 || w.series_max == 0 {
            return Err(located(src, find_key(src, "window"), "", "window bounds must be positive"));
        }
        Ok(Problem { window: Window::new(w.hdeg_max, w.ideg_max), series_max: w.series_max, doc, base, i1, i2 })
    }

    /// Both pair ideals, or an error naming the missing one.
    pub fn pair(&self) -> Result<(&[Polynomial], &[Polynomial]), InputError> {
        match (&self.i1, &self.i2) {
            (Some(a), Some(b)) => Ok((a, b)),
            (None, _) => {
                Err(InputError { line: 1, column: 1, token: String::new(), message: "this command needs `I1`".into() })
            }
            (_, None) => {
                Err(InputError { line: 1, column: 1, token: String::new(), message: "this command needs `I2`".into() })
            }
        }
    }

    /// Caveats about the run, printed on stderr.
    pub fn warnings(&self) -> Vec<String> {
        let p = self.base.field().characteristic();
        if p != 0 && self.window.hdeg_max >= p {
            vec![format!(
                "homological bound {} reaches the characteristic {p}; divided powers and p-th powers behave differently there",
                self.window.hdeg_max
            )]
        } else {
            Vec::new()
        }
    }

    /// The echoed input with the effective window.
    pub fn echo(&self) -> InputDoc {
        let mut doc = self.doc.clone();
        doc.window =
            WindowSpec { hdeg_max: self.window.hdeg_max, ideg_max: self.window.ideg_max, series_max: self.series_max };
        doc
    }
}
