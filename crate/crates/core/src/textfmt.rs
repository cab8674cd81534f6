//! Plain-text formats for matrices and Clifford elements.
//!
//! Matrix: optional field prefix (`R:`, `C:`, `H:`), rows separated by `;`,
//! entries by `,`, each entry written `a+bi+cj+dk` with rational or decimal
//! coefficients. Without a prefix the field is the smallest one that
//! contains every unit used.
//!
//! Clifford: signed terms such as `-3*e1e2 + 1/2*e3e4 - 2`; a bare rational
//! is a scalar term.

use crate::algebra::{FieldTag, HyperComplex, MatF, Scalar};
use crate::clifford::CliffordElement;
use crate::error::{Error, Result};

const UNITS: [&str; 4] = ["", "i", "j", "k"];

pub fn format_scalar<T: Scalar>(h: &HyperComplex<T>) -> String {
    let mut out = String::new();
    for (c, v) in h.coeffs().iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let s = v.to_string();
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, s),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        out.push_str(&body);
        out.push_str(UNITS[c]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Splits `s` into signed terms at top-level `+`/`-`, keeping exponent
/// signs (`1e-3`) attached.
fn split_terms(s: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        let exponent_sign = matches!(prev, Some('e') | Some('E'))
            && cur.chars().rev().nth(1).is_some_and(|c| c.is_ascii_digit() || c == '.');
        if (ch == '+' || ch == '-') && !cur.is_empty() && !exponent_sign {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
        prev = Some(ch);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    terms
}

/// Parses one entry; returns the coefficients `[a, b, c, d]` and the
/// highest unit index used.
fn parse_entry<T: Scalar>(s: &str) -> Result<([T; 4], usize)> {
    let mut coeffs = [T::zero(), T::zero(), T::zero(), T::zero()];
    let mut top = 0;
    let terms = split_terms(s);
    if terms.is_empty() {
        return Err(Error::Parse("empty matrix entry".into()));
    }
    for term in terms {
        let (unit, body) = match term.chars().last() {
            Some('i') => (1, &term[..term.len() - 1]),
            Some('j') => (2, &term[..term.len() - 1]),
            Some('k') => (3, &term[..term.len() - 1]),
            _ => (0, term.as_str()),
        };
        let body = body.trim_end_matches('*');
        let v = match body {
            "" | "+" => T::one(),
            "-" => -T::one(),
            b => T::parse_token(b)
                .ok_or_else(|| Error::Parse(format!("bad coefficient `{b}` in `{s}`")))?,
        };
        coeffs[unit] += v;
        top = top.max(unit);
    }
    Ok((coeffs, top))
}

pub fn format_matrix<T: Scalar>(m: &MatF<T>) -> String {
    let rows: Vec<String> = (0..m.n())
        .map(|i| {
            (0..m.n())
                .map(|j| format_scalar(&m.get(i, j)))
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect();
    format!("{}: {}", m.tag(), rows.join("; "))
}

pub fn parse_matrix<T: Scalar>(s: &str) -> Result<MatF<T>> {
    let s = s.trim();
    let (explicit, body) = match s.split_once(':') {
        Some((p, b)) => (Some(p.parse::<FieldTag>()?), b),
        None => (None, s),
    };
    let rows: Vec<&str> = body
        .split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .collect();
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    let mut top = 0;
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != n {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {n}",
                cells.len()
            )));
        }
        for cell in cells {
            let (c, t) = parse_entry::<T>(cell)?;
            top = top.max(t);
            entries.push(c);
        }
    }
    let tag = match explicit {
        Some(FieldTag::O) => {
            return Err(Error::UnsupportedField(FieldTag::O, "no octonion matrices".into()))
        }
        Some(tag) => {
            if top >= tag.dim() {
                return Err(Error::Parse(format!("unit outside {tag} in matrix")));
            }
            tag
        }
        None => match top {
            0 => FieldTag::R,
            1 => FieldTag::C,
            _ => FieldTag::H,
        },
    };
    let d = tag.dim();
    let hc: Vec<HyperComplex<T>> = entries
        .into_iter()
        .map(|c| HyperComplex::new(tag, c.into_iter().take(d).collect()).expect("width"))
        .collect();
    MatF::from_entries(tag, n, &hc)
}

pub fn format_clifford(x: &CliffordElement) -> String {
    x.to_string()
}

pub fn parse_clifford(n: usize, s: &str) -> Result<CliffordElement> {
    CliffordElement::parse(n, s)
}

/// Parses a vector: entries separated by `,`, `;` or line breaks, with an
/// optional field prefix as for matrices.
pub fn parse_vector<T: Scalar>(s: &str) -> Result<Vec<HyperComplex<T>>> {
    let s = s.trim();
    let (explicit, body) = match s.split_once(':') {
        Some((p, b)) => (Some(p.trim().parse::<FieldTag>()?), b),
        None => (None, s),
    };
    let mut entries = Vec::new();
    let mut top = 0;
    for cell in body.split([',', ';', '\n']).map(str::trim).filter(|c| !c.is_empty()) {
        let (c, t) = parse_entry::<T>(cell)?;
        top = top.max(t);
        entries.push(c);
    }
    if entries.is_empty() {
        return Err(Error::Parse("empty vector".into()));
    }
    let tag = match explicit {
        Some(tag) if tag.dim() > 4 || top >= tag.dim() => {
            return Err(Error::Parse(format!("vector entries do not fit in {tag}")))
        }
        Some(tag) => tag,
        None => match top {
            0 => FieldTag::R,
            1 => FieldTag::C,
            _ => FieldTag::H,
        },
    };
    let d = tag.dim();
    Ok(entries
        .into_iter()
        .map(|c| HyperComplex::new(tag, c.into_iter().take(d).collect()).expect("width"))
        .collect())
}

/// [`parse_vector`], widened to `tag`; fails if an entry needs a larger field.
pub fn parse_vector_in<T: Scalar>(tag: FieldTag, s: &str) -> Result<Vec<HyperComplex<T>>> {
    let v = parse_vector::<T>(s)?;
    v.into_iter()
        .map(|x| {
            if x.tag().dim() > tag.dim() {
                return Err(Error::Parse(format!("entry {} does not lie in {tag}", format_scalar(&x))));
            }
            let mut c = x.into_coeffs();
            c.resize(tag.dim(), T::zero());
            HyperComplex::new(tag, c)
        })
        .collect()
}

pub fn format_vector<T: Scalar>(v: &[HyperComplex<T>]) -> String {
    let tag = v.first().map_or(FieldTag::R, HyperComplex::tag);
    let cells: Vec<String> = v.iter().map(format_scalar).collect();
    format!("{tag}: {}", cells.join(", "))
}

/// Named matrices, one `# name` header line followed by one matrix line.
pub fn format_matrix_list<T: Scalar>(items: &[(String, MatF<T>)]) -> String {
    let mut out = String::new();
    for (name, m) in items {
        out.push_str("# ");
        out.push_str(name);
        out.push('\n');
        out.push_str(&format_matrix(m));
        out.push('\n');
    }
    out
}

pub fn parse_matrix_list<T: Scalar>(s: &str) -> Result<Vec<(String, MatF<T>)>> {
    let mut out = Vec::new();
    let mut name: Option<String> = None;
    for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(h) = line.strip_prefix('#') {
            name = Some(h.trim().to_string());
            continue;
        }
        let m = parse_matrix(line)?;
        out.push((name.take().unwrap_or_else(|| format!("m{}", out.len())), m));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi, Rational};

    #[test]
    fn entry_formatting() {
        let h = HyperComplex::new(FieldTag::H, vec![qi(1), q(-1, 2), qi(0), qi(3)]).unwrap();
        assert_eq!(format_scalar(&h), "1-1/2i+3k");
        assert_eq!(format_scalar(&HyperComplex::<Rational>::zero(FieldTag::C)), "0");
        let neg = HyperComplex::new(FieldTag::C, vec![qi(0), qi(-1)]).unwrap();
        assert_eq!(format_scalar(&neg), "-1i");
    }

    #[test]
    fn matrix_roundtrip_exact() {
        let m: MatF<Rational> = parse_matrix("0, -1/2+i; 1/2+i, 3k").unwrap();
        assert_eq!(m.tag(), FieldTag::H);
        assert_eq!(m.get(0, 1).coeffs(), &[q(-1, 2), qi(1), qi(0), qi(0)]);
        let again: MatF<Rational> = parse_matrix(&format_matrix(&m)).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn matrix_roundtrip_float() {
        let m = MatF::from_real(2, &[0.1, -1e-300, 2.5, 1.0 / 3.0]).unwrap();
        let again: MatF<f64> = parse_matrix(&format_matrix(&m)).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn vector_and_list_roundtrip() {
        let v: Vec<HyperComplex<Rational>> = parse_vector("0+3i, 4\n-1/2j; 0").unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0].tag(), FieldTag::H);
        assert_eq!(parse_vector::<Rational>(&format_vector(&v)).unwrap(), v);
        assert!(parse_vector::<Rational>("C: j").is_err());
        let w: Vec<HyperComplex<Rational>> = parse_vector_in(FieldTag::C, "0, 3, 4").unwrap();
        assert_eq!(w[1].tag(), FieldTag::C);
        assert!(parse_vector_in::<Rational>(FieldTag::C, "j").is_err());
        let m: MatF<Rational> = parse_matrix("0, 1; -1, 0").unwrap();
        let items = vec![("a".to_string(), m.clone()), ("b".to_string(), m.neg())];
        assert_eq!(parse_matrix_list::<Rational>(&format_matrix_list(&items)).unwrap(), items);
    }

    #[test]
    fn decimals_and_exponents() {
        let m: MatF<Rational> = parse_matrix("C: 1e-2-2.5e1i").unwrap();
        assert_eq!(m.get(0, 0).coeffs(), &[q(1, 100), qi(-25)]);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(parse_matrix::<Rational>("1, 2; 3").is_err());
        assert!(parse_matrix::<Rational>("C: j").is_err());
        assert!(parse_matrix::<Rational>("1, x; 0, 0").is_err());
    }
}
