//! Shared helpers for the `kind:args` spec strings.

use crate::error::{parse_err, Result};
use crate::Real;

/// Splits `kind:rest` and lowercases nothing: kinds are matched verbatim.
pub(crate) fn split_kind(s: &str) -> Result<(&str, &str)> {
    let s = s.trim();
    s.split_once(':')
        .map(|(k, r)| (k.trim(), r.trim()))
        .ok_or_else(|| parse_err(s, "expected `kind:arguments`"))
}

pub(crate) fn number<T: Real>(tok: &str) -> Result<T> {
    let tok = tok.trim();
    let v: f64 = tok.parse().map_err(|_| parse_err(tok, "not a number"))?;
    if !v.is_finite() {
        return Err(parse_err(tok, "number must be finite"));
    }
    Ok(T::lit(v))
}

/// Comma separated numbers, exactly `count` of them.
pub(crate) fn numbers<T: Real>(args: &str, count: usize) -> Result<Vec<T>> {
    let out = args.split(',').map(number).collect::<Result<Vec<T>>>()?;
    if out.len() != count {
        return Err(parse_err(args, format!("expected {count} comma-separated numbers")));
    }
    Ok(out)
}

/// Splits on `sep` at parenthesis depth zero only. Sub-specs may be wrapped
/// in parentheses to nest mixtures and sums.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Removes one pair of enclosing parentheses, if present.
pub(crate) fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        let inner = &t[1..t.len() - 1];
        // only strip if the parentheses actually match each other
        let mut depth = 0i32;
        for c in inner.chars() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return t;
                    }
                }
                _ => {}
            }
        }
        if depth == 0 {
            return inner.trim();
        }
    }
    t
}

/// `weight*rest` with the weight in front of the first top-level `*`.
pub(crate) fn weighted<T: Real>(s: &str) -> Result<(T, &str)> {
    let s = s.trim();
    let (w, rest) = s.split_once('*').ok_or_else(|| parse_err(s, "expected `<weight>*<spec>`"))?;
    Ok((number(w)?, strip_parens(rest)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_errors() {
        let v: Vec<f64> = numbers("1, 2.5,-3", 3).unwrap();
        assert_eq!(v, vec![1.0, 2.5, -3.0]);
        assert!(numbers::<f64>("1,2", 3).is_err());
        match number::<f64>("x1") {
            Err(crate::Error::Parse { token, .. }) => assert_eq!(token, "x1"),
            other => panic!("{other:?}"),
        }
        assert!(number::<f64>("inf").is_err());
    }

    #[test]
    fn top_level_split_respects_parentheses() {
        assert_eq!(split_top("a+(b+c)+d", '+'), vec!["a", "(b+c)", "d"]);
        assert_eq!(strip_parens(" (a+b) "), "a+b");
        assert_eq!(strip_parens("(a)+(b)"), "(a)+(b)");
    }
}
