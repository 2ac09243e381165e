//! Small helpers for the `name(arg, arg, ...)` expression grammars.

use crate::error::{Error, Result};

/// Splits `s` on commas that are not nested inside parentheses.
pub(crate) fn split_args(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
                }
            }
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
    }
    out.push(s[start..].trim());
    Ok(out)
}

/// `name(inner)` -> `(name, inner)`; a bare word yields `(word, None)`.
pub(crate) fn parse_call(s: &str) -> Result<(&str, Option<&str>)> {
    let s = s.trim();
    match s.find('(') {
        None => Ok((s, None)),
        Some(open) => {
            if !s.ends_with(')') {
                return Err(Error::Parse(format!("expected closing `)` in {s:?}")));
            }
            let inner = &s[open + 1..s.len() - 1];
            // rejects `f(a)(b)` and similar
            split_args(inner)?;
            Ok((s[..open].trim(), Some(inner)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_split() {
        assert_eq!(split_args("a, f(b,c), d").unwrap(), vec!["a", "f(b,c)", "d"]);
        assert_eq!(split_args("").unwrap(), vec![""]);
        assert!(split_args("f(a").is_err());
        assert!(split_args("a)").is_err());
    }

    #[test]
    fn calls() {
        assert_eq!(parse_call("sum(a,b)").unwrap(), ("sum", Some("a,b")));
        assert_eq!(parse_call(" squares ").unwrap(), ("squares", None));
        assert!(parse_call("sum(a,b").is_err());
        assert!(parse_call("f(a))(").is_err());
    }
}
