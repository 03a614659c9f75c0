//! Shared token syntax for words typed by people: whitespace separated
//! letters, each optionally followed by `^k`.

use crate::error::{Error, Result};

/// Splits `s` into `(letter, exponent)` pairs. Letters are kept as typed.
pub fn tokens(s: &str) -> Result<Vec<(String, i64)>> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
                (n, e)
            }
            None => (tok, 1),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::Parse(format!("bad letter {tok:?}")));
        }
        out.push((name.to_string(), exp));
    }
    Ok(out)
}

/// Splits a letter into its lowercase form and whether it was written in
/// uppercase (meaning the inverse).
pub fn case_split(name: &str) -> (String, bool) {
    let upper = name.chars().next().is_some_and(|c| c.is_uppercase());
    (name.to_lowercase(), upper)
}
