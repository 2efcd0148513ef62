//! Array and code file formats.
//!
//! Text format: a header line `q d n_1 ... n_d` (space-separated decimal)
//! followed by the `n_1 * ... * n_d` entries in row-major order, axis 1
//! slowest, whitespace-separated, symbols 0-based. A JSON mirror with the
//! same field names is accepted interchangeably; the first non-whitespace
//! byte decides which parser runs.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use hyperdel_core::tensor::{Alphabet, NdArray, Shape};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrayDoc {
    pub q: u64,
    pub d: usize,
    pub n: Vec<usize>,
    pub entries: Vec<u64>,
}

impl ArrayDoc {
    pub fn of(a: &NdArray) -> Self {
        ArrayDoc {
            q: a.alphabet().size(),
            d: a.dim(),
            n: a.shape().dims().to_vec(),
            entries: a.data().to_vec(),
        }
    }

    pub fn to_array(&self) -> Result<NdArray> {
        if self.d != self.n.len() {
            bail!("header says d = {}, but {} extents given", self.d, self.n.len());
        }
        if self.d == 0 {
            bail!("arrays must have at least one axis");
        }
        let alphabet = Alphabet::new(self.q)?;
        Ok(NdArray::new(alphabet, Shape::new(self.n.clone()), self.entries.clone())?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeDoc {
    pub q: u64,
    pub d: usize,
    pub n: Vec<usize>,
    pub words: Vec<Vec<u64>>,
}

fn parse_array_text(text: &str) -> Result<NdArray> {
    let mut tokens = text.split_whitespace();
    let q: u64 = tokens
        .next()
        .context("missing alphabet size")?
        .parse()
        .context("bad alphabet size")?;
    let d: usize = tokens
        .next()
        .context("missing dimension")?
        .parse()
        .context("bad dimension")?;
    if d == 0 {
        bail!("arrays must have at least one axis");
    }
    let mut dims = Vec::with_capacity(d);
    for k in 0..d {
        let n: usize = tokens
            .next()
            .with_context(|| format!("missing extent {}", k + 1))?
            .parse()
            .with_context(|| format!("bad extent {}", k + 1))?;
        dims.push(n);
    }
    let entries: Vec<u64> = tokens
        .map(|tok| tok.parse::<u64>().with_context(|| format!("bad entry {tok:?}")))
        .collect::<Result<_>>()?;
    let alphabet = Alphabet::new(q)?;
    Ok(NdArray::new(alphabet, Shape::new(dims), entries)?)
}

/// Parse an array from text or its JSON mirror.
pub fn parse_array(input: &str) -> Result<NdArray> {
    match input.trim_start().bytes().next() {
        Some(b'{') => {
            let doc: ArrayDoc = serde_json::from_str(input).context("bad array JSON")?;
            doc.to_array()
        }
        Some(_) => parse_array_text(input),
        None => bail!("empty array file"),
    }
}

/// Render an array in the text format: header line, then one line of
/// entries per hyperplane of the last axis.
pub fn render_array(a: &NdArray) -> String {
    let dims = a.shape().dims();
    let mut out = format!("{} {}", a.alphabet().size(), a.dim());
    for n in dims {
        out.push_str(&format!(" {n}"));
    }
    out.push('\n');
    let row = dims.last().copied().unwrap_or(0).max(1);
    for (k, s) in a.data().iter().enumerate() {
        if k > 0 {
            out.push(if k % row == 0 { '\n' } else { ' ' });
        }
        out.push_str(&s.to_string());
    }
    if !a.data().is_empty() {
        out.push('\n');
    }
    out
}

/// Parse a code file: JSON `{q, d, n, words}`.
pub fn parse_code(input: &str) -> Result<Vec<NdArray>> {
    let doc: CodeDoc = serde_json::from_str(input).context("bad code JSON")?;
    if doc.d != doc.n.len() {
        bail!("header says d = {}, but {} extents given", doc.d, doc.n.len());
    }
    let alphabet = Alphabet::new(doc.q)?;
    doc.words
        .into_iter()
        .map(|entries| {
            Ok(NdArray::new(
                alphabet,
                Shape::new(doc.n.clone()),
                entries,
            )?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let text = "2 2 3 3\n1 0 0\n1 1 1\n1 0 1\n";
        let json = r#"{"q":2,"d":2,"n":[3,3],"entries":[1,0,0,1,1,1,1,0,1]}"#;
        let a = parse_array(text).unwrap();
        let b = parse_array(json).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_array(&render_array(&a)).unwrap(), a);
    }

    #[test]
    fn rejects_wrong_volume_and_symbols() {
        assert!(parse_array("2 1 3\n0 1\n").is_err());
        assert!(parse_array("2 1 2\n0 2\n").is_err());
        assert!(parse_array("1 1 2\n0 0\n").is_err());
        assert!(parse_array("2 0\n").is_err());
    }
}
