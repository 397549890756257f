//! Text file formats for codes and witnesses.
//!
//! Code files:
//!
//! ```text
//! field p=3 h=2
//! kind linear k=3 n=8
//! 1 0 0 1 e e^6 e^6 e
//! ...
//! ```
//!
//! Additive codes use `kind additive k=<k> h-rows=<kh>` followed by `kh`
//! rows of `F_q` tokens, or the `kh x nh` prime-field integer matrix with
//! `expanded=true`. Witness files start with
//! `witness kind=general|semilinear|additive n=<n>`, then `alpha:` as a
//! 1-based image list, then the per-kind payload. Whitespace is lenient,
//! tokens are strict; `#` starts a comment line.

use crate::additive::{regroup_matrix, AdditiveCode};
use crate::code::{GeneratorMatrix, LinearCode};
use crate::error::Error;
use crate::field::{Fe, Field};
use crate::mat::{Mat, Perm};
use crate::witness::{
    AdditiveWitness, GeneralWitness, SemiLinearWitness, SymbolPerm, Witness,
};
use crate::{LinearizedMap, Result};

/// A parsed code file.
#[derive(Clone, Debug)]
pub enum CodeFile {
    Linear(LinearCode),
    Additive(AdditiveCode),
}

impl CodeFile {
    pub fn field(&self) -> &Field {
        match self {
            CodeFile::Linear(c) => c.field(),
            CodeFile::Additive(c) => c.field(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            CodeFile::Linear(c) => c.n(),
            CodeFile::Additive(c) => c.n(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CodeFile::Linear(_) => "linear",
            CodeFile::Additive(_) => "additive",
        }
    }
}

struct Lines<'a> {
    label: &'a str,
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(label: &'a str, text: &'a str) -> Self {
        Lines {
            label,
            iter: text.lines().enumerate(),
        }
    }

    /// Next significant line with its 1-based number.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.iter.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((i + 1, t));
        }
        None
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.label.to_string(),
            line,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next()
            .ok_or_else(|| self.err(0, format!("unexpected end of file, expected {what}")))
    }
}

fn kv(line: &str) -> Vec<(&str, &str)> {
    line.split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .collect()
}

fn kv_get<'a>(pairs: &[(&'a str, &'a str)], key: &str) -> Option<&'a str> {
    pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn parse_usize(lines: &Lines, line: usize, what: &str, v: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| lines.err(line, format!("bad {what}: {v:?}")))
}

/// Parse a code file; `label` names the source in error messages.
pub fn parse_code(text: &str, label: &str) -> Result<CodeFile> {
    let mut lines = Lines::new(label, text);

    let (ln, header) = lines.expect("'field p=<p> h=<h>'")?;
    if !header.starts_with("field") {
        return Err(lines.err(ln, "expected 'field p=<p> h=<h>'"));
    }
    let pairs = kv(header);
    let p: u64 = kv_get(&pairs, "p")
        .ok_or_else(|| lines.err(ln, "missing p="))?
        .parse()
        .map_err(|_| lines.err(ln, "bad p="))?;
    let h = parse_usize(
        &lines,
        ln,
        "h=",
        kv_get(&pairs, "h").ok_or_else(|| lines.err(ln, "missing h="))?,
    )?;
    let field = Field::new(p, h).map_err(|e| lines.err(ln, e.to_string()))?;

    let (ln, kind_line) = lines.expect("'kind ...'")?;
    let mut words = kind_line.split_whitespace();
    if words.next() != Some("kind") {
        return Err(lines.err(ln, "expected 'kind linear ...' or 'kind additive ...'"));
    }
    let kind = words.next().unwrap_or("");
    let pairs = kv(kind_line);
    match kind {
        "linear" => {
            let k = parse_usize(
                &lines,
                ln,
                "k=",
                kv_get(&pairs, "k").ok_or_else(|| lines.err(ln, "missing k="))?,
            )?;
            let n = parse_usize(
                &lines,
                ln,
                "n=",
                kv_get(&pairs, "n").ok_or_else(|| lines.err(ln, "missing n="))?,
            )?;
            let rows = read_rows(&mut lines, &field, k, Some(n))?;
            let gen = GeneratorMatrix::from_rows(&field, rows)
                .map_err(|e| lines.err(ln, e.to_string()))?;
            Ok(CodeFile::Linear(LinearCode::new(gen)))
        }
        "additive" => {
            let k = parse_usize(
                &lines,
                ln,
                "k=",
                kv_get(&pairs, "k").ok_or_else(|| lines.err(ln, "missing k="))?,
            )?;
            let kh = parse_usize(
                &lines,
                ln,
                "h-rows=",
                kv_get(&pairs, "h-rows").ok_or_else(|| lines.err(ln, "missing h-rows="))?,
            )?;
            if kh != k * h {
                return Err(lines.err(ln, format!("h-rows={kh} but k*h = {}", k * h)));
            }
            let expanded = kv_get(&pairs, "expanded") == Some("true");
            if expanded {
                let fp = field.prime_field();
                let rows = read_rows_in(&mut lines, &fp, kh, None)?;
                let mat = Mat::from_rows(&fp, rows).map_err(|e| lines.err(ln, e.to_string()))?;
                let regrouped =
                    regroup_matrix(&field, &mat).map_err(|e| lines.err(ln, e.to_string()))?;
                let code = AdditiveCode::new(&field, regrouped)
                    .map_err(|e| lines.err(ln, e.to_string()))?;
                Ok(CodeFile::Additive(code))
            } else {
                let rows = read_rows(&mut lines, &field, kh, None)?;
                let code = AdditiveCode::from_rows(&field, rows)
                    .map_err(|e| lines.err(ln, e.to_string()))?;
                Ok(CodeFile::Additive(code))
            }
        }
        other => Err(lines.err(ln, format!("unknown code kind {other:?}"))),
    }
}

fn read_rows(lines: &mut Lines, field: &Field, count: usize, n: Option<usize>) -> Result<Vec<Vec<Fe>>> {
    read_rows_in(lines, field, count, n)
}

fn read_rows_in(
    lines: &mut Lines,
    field: &Field,
    count: usize,
    n: Option<usize>,
) -> Result<Vec<Vec<Fe>>> {
    let mut rows = Vec::with_capacity(count);
    let mut width = n;
    for _ in 0..count {
        let (ln, line) = lines.expect("a matrix row")?;
        let row: Vec<Fe> = line
            .split_whitespace()
            .map(|tok| {
                field
                    .parse_element(tok)
                    .map_err(|e| lines.err(ln, e.to_string()))
            })
            .collect::<Result<_>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(lines.err(ln, format!("expected {w} entries, got {}", row.len())));
            }
            _ => {}
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Render a linear code in the file format.
pub fn render_linear_code(c: &LinearCode) -> String {
    let f = c.field();
    let mut out = format!(
        "field p={} h={}\nkind linear k={} n={}\n",
        f.p(),
        f.h(),
        c.k(),
        c.n()
    );
    for r in 0..c.k() {
        push_row(&mut out, f, c.generator().mat().row(r));
    }
    out
}

/// Render an additive code; `expanded` selects the prime-field integer form.
pub fn render_additive_code(c: &AdditiveCode, expanded: bool) -> String {
    let f = c.field();
    let mut out = format!(
        "field p={} h={}\nkind additive k={} h-rows={}{}\n",
        f.p(),
        f.h(),
        c.k(),
        c.generators().rows(),
        if expanded { " expanded=true" } else { "" }
    );
    if expanded {
        let exp = c.expanded();
        let fp = f.prime_field();
        for r in 0..exp.rows() {
            push_row(&mut out, &fp, exp.row(r));
        }
    } else {
        for r in 0..c.generators().rows() {
            push_row(&mut out, f, c.generators().row(r));
        }
    }
    out
}

/// Render any code file.
pub fn render_code(c: &CodeFile) -> String {
    match c {
        CodeFile::Linear(l) => render_linear_code(l),
        CodeFile::Additive(a) => render_additive_code(a, a.field().h() > 1),
    }
}

fn push_row(out: &mut String, field: &Field, row: &[Fe]) {
    let toks: Vec<String> = row.iter().map(|&x| field.format_element(x)).collect();
    out.push_str(&toks.join(" "));
    out.push('\n');
}

/// Parse a witness file against a known field.
pub fn parse_witness(field: &Field, text: &str, label: &str) -> Result<Witness> {
    let mut lines = Lines::new(label, text);
    let (ln, header) = lines.expect("'witness kind=<kind> n=<n>'")?;
    if !header.starts_with("witness") {
        return Err(lines.err(ln, "expected 'witness kind=<kind> n=<n>'"));
    }
    let pairs = kv(header);
    let kind = kv_get(&pairs, "kind").ok_or_else(|| lines.err(ln, "missing kind="))?;
    let n = parse_usize(
        &lines,
        ln,
        "n=",
        kv_get(&pairs, "n").ok_or_else(|| lines.err(ln, "missing n="))?,
    )?;

    let (ln, alpha_line) = lines.expect("'alpha: ...'")?;
    let alpha_body = alpha_line
        .strip_prefix("alpha:")
        .ok_or_else(|| lines.err(ln, "expected 'alpha: i1 i2 ... in'"))?;
    let images: Vec<usize> = alpha_body
        .split_whitespace()
        .map(|t| parse_usize(&lines, ln, "alpha image", t))
        .collect::<Result<_>>()?;
    if images.len() != n {
        return Err(lines.err(ln, format!("alpha needs {n} images, got {}", images.len())));
    }
    if images.iter().any(|&i| i == 0 || i > n) {
        return Err(lines.err(ln, "alpha images are 1-based coordinates"));
    }
    let alpha = Perm::from_images(images.into_iter().map(|i| i - 1).collect())
        .map_err(|e| lines.err(ln, e.to_string()))?;

    match kind {
        "general" => {
            let mut sigmas = Vec::with_capacity(n);
            for i in 0..n {
                let want = format!("sigma{}:", i + 1);
                let (ln, line) = lines.expect(&want)?;
                let body = line
                    .strip_prefix(want.as_str())
                    .ok_or_else(|| lines.err(ln, format!("expected '{want} ...'")))?;
                let table: Vec<Fe> = body
                    .split_whitespace()
                    .map(|t| field.parse_element(t).map_err(|e| lines.err(ln, e.to_string())))
                    .collect::<Result<_>>()?;
                let sp =
                    SymbolPerm::new(field, table).map_err(|e| lines.err(ln, e.to_string()))?;
                sigmas.push(sp);
            }
            Ok(Witness::General(
                GeneralWitness::new(field, alpha, sigmas)
                    .map_err(|e| lines.err(0, e.to_string()))?,
            ))
        }
        "semilinear" => {
            let (ln, tline) = lines.expect("'t=<t>'")?;
            let t = parse_usize(
                &lines,
                ln,
                "t=",
                kv_get(&kv(tline), "t").ok_or_else(|| lines.err(ln, "expected 't=<t>'"))?,
            )?;
            let (ln, lline) = lines.expect("'lambda: ...'")?;
            let body = lline
                .strip_prefix("lambda:")
                .ok_or_else(|| lines.err(ln, "expected 'lambda: ...'"))?;
            let lambdas: Vec<Fe> = body
                .split_whitespace()
                .map(|t| field.parse_element(t).map_err(|e| lines.err(ln, e.to_string())))
                .collect::<Result<_>>()?;
            Ok(Witness::SemiLinear(
                SemiLinearWitness::new(field, alpha, lambdas, t)
                    .map_err(|e| lines.err(ln, e.to_string()))?,
            ))
        }
        "additive" => {
            let mut maps = Vec::with_capacity(n);
            for i in 0..n {
                let want = format!("c{}:", i + 1);
                let (ln, line) = lines.expect(&want)?;
                let body = line
                    .strip_prefix(want.as_str())
                    .ok_or_else(|| lines.err(ln, format!("expected '{want} ...'")))?;
                let coeffs: Vec<Fe> = body
                    .split_whitespace()
                    .map(|t| field.parse_element(t).map_err(|e| lines.err(ln, e.to_string())))
                    .collect::<Result<_>>()?;
                let m = LinearizedMap::new(field, coeffs)
                    .map_err(|e| lines.err(ln, e.to_string()))?;
                maps.push(m);
            }
            Ok(Witness::Additive(
                AdditiveWitness::new(field, alpha, maps)
                    .map_err(|e| lines.err(0, e.to_string()))?,
            ))
        }
        other => Err(lines.err(ln, format!("unknown witness kind {other:?}"))),
    }
}

/// Render a witness in the file format.
pub fn render_witness(w: &Witness) -> String {
    let field = w.field();
    let n = w.n();
    let mut out = format!("witness kind={} n={}\n", w.kind(), n);
    let images: Vec<String> = w
        .alpha()
        .images()
        .iter()
        .map(|&i| (i + 1).to_string())
        .collect();
    out.push_str(&format!("alpha: {}\n", images.join(" ")));
    match w {
        Witness::General(g) => {
            for (i, s) in g.sigmas().iter().enumerate() {
                let toks: Vec<String> = s
                    .table()
                    .iter()
                    .map(|&x| field.format_element(x))
                    .collect();
                out.push_str(&format!("sigma{}: {}\n", i + 1, toks.join(" ")));
            }
        }
        Witness::SemiLinear(s) => {
            out.push_str(&format!("t={}\n", s.t()));
            let toks: Vec<String> = s
                .lambdas()
                .iter()
                .map(|&x| field.format_element(x))
                .collect();
            out.push_str(&format!("lambda: {}\n", toks.join(" ")));
        }
        Witness::Additive(a) => {
            for (i, m) in a.maps().iter().enumerate() {
                let toks: Vec<String> = m
                    .coeffs()
                    .iter()
                    .map(|&x| field.format_element(x))
                    .collect();
                out.push_str(&format!("c{}: {}\n", i + 1, toks.join(" ")));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn linear_code_roundtrip() {
        let c1 = corpus::c1().unwrap();
        let text = render_linear_code(&c1);
        match parse_code(&text, "roundtrip").unwrap() {
            CodeFile::Linear(c) => assert_eq!(c.generator(), c1.generator()),
            _ => panic!("kind changed"),
        }
    }

    #[test]
    fn additive_code_roundtrip_both_forms() {
        let c3 = corpus::c3().unwrap();
        for expanded in [false, true] {
            let text = render_additive_code(&c3, expanded);
            match parse_code(&text, "roundtrip").unwrap() {
                CodeFile::Additive(c) => assert_eq!(c.generators(), c3.generators()),
                _ => panic!("kind changed"),
            }
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "field p=3 h=2\nkind linear k=2 n=3\n1 0 e\n1 bogus e\n";
        match parse_code(text, "bad.code") {
            Err(Error::Parse { path, line, .. }) => {
                assert_eq!(path, "bad.code");
                assert_eq!(line, 4);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# a comment\n\nfield p=2 h=2\n# another\nkind linear k=1 n=2\n1 e\n";
        assert!(parse_code(text, "c").is_ok());
    }

    #[test]
    fn witness_roundtrip_all_kinds() {
        let f = Field::new(2, 2).unwrap();
        let alpha = Perm::from_images(vec![1, 0, 2]).unwrap();
        let gen = Witness::General(
            GeneralWitness::new(
                &f,
                alpha.clone(),
                vec![
                    SymbolPerm::identity(&f),
                    SymbolPerm::from_fn(&f, |x| f.mul(f.e(), x)).unwrap(),
                    SymbolPerm::from_fn(&f, |x| f.add(x, f.one())).unwrap(),
                ],
            )
            .unwrap(),
        );
        let semi = Witness::SemiLinear(
            SemiLinearWitness::new(&f, alpha.clone(), vec![f.one(), f.e(), f.e_pow(2)], 1)
                .unwrap(),
        );
        let addw = Witness::Additive(
            AdditiveWitness::new(
                &f,
                alpha,
                vec![
                    LinearizedMap::identity(&f),
                    LinearizedMap::new(&f, vec![f.zero(), f.one()]).unwrap(),
                    LinearizedMap::new(&f, vec![f.zero(), f.e()]).unwrap(),
                ],
            )
            .unwrap(),
        );
        for w in [gen, semi, addw] {
            let text = render_witness(&w);
            let back = parse_witness(&f, &text, "roundtrip").unwrap();
            assert_eq!(back, w);
        }
    }

    #[test]
    fn alpha_must_be_one_based() {
        let f = Field::new(2, 2).unwrap();
        let text = "witness kind=semilinear n=2\nalpha: 0 1\nt=0\nlambda: 1 1\n";
        assert!(matches!(
            parse_witness(&f, text, "w"),
            Err(Error::Parse { .. })
        ));
    }
}
