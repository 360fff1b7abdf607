use thiserror::Error;

use crate::scalars::Scalar;

use super::{State, StateBuilder, VacuumModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("state parse error at {position}: {message}")]
pub struct ParseStateError {
    pub position: usize,
    pub message: String,
}

fn err(position: usize, message: impl Into<String>) -> ParseStateError {
    ParseStateError { position, message: message.into() }
}

impl VacuumModule {
    /// Parse `h[-1]h[-2]vac`, `2*e[-1]f[-2]vac - 1/3*h[-2]vac`, `vac` or `0`.
    ///
    /// Factors may be given in any order and with any indices; the result is
    /// computed by acting on the vacuum from the right.
    pub fn parse_state(&self, text: &str) -> Result<State, ParseStateError> {
        let mut acc = StateBuilder::new();
        for (start, negative, term) in split_terms(text)? {
            let s = self.parse_term(start, term)?;
            acc.add_scaled(&s, &Scalar::from(if negative { -1 } else { 1 }));
        }
        Ok(acc.finish())
    }

    fn parse_term(&self, start: usize, term: &str) -> Result<State, ParseStateError> {
        let trimmed = term.trim();
        let offset = start + (term.len() - term.trim_start().len());
        if trimmed.is_empty() {
            return Err(err(offset, "empty term"));
        }
        if trimmed == "0" {
            return Ok(State::zero());
        }
        let Some(mono_at) = self.monomial_start(trimmed) else {
            return Err(err(offset, "expected a monomial ending in `vac`"));
        };
        let coeff = if mono_at == 0 {
            Scalar::one()
        } else {
            let head = trimmed[..mono_at].trim_end();
            let Some(head) = head.strip_suffix('*') else {
                return Err(err(offset + mono_at, "expected `*` between coefficient and monomial"));
            };
            head.trim().parse::<Scalar>().map_err(|e| err(offset + e.position, e.message))?
        };
        let factors = self.parse_factors(offset + mono_at, &trimmed[mono_at..])?;
        let mut v = State::vacuum();
        for &(g, n) in factors.iter().rev() {
            v = self.mode_act(g, n, &v);
        }
        Ok(v.scale(&coeff))
    }

    fn monomial_start(&self, s: &str) -> Option<usize> {
        let bytes = s.as_bytes();
        (0..s.len()).find(|&i| {
            if i > 0 && bytes[i - 1].is_ascii_alphanumeric() {
                return false;
            }
            let rest = &s[i..];
            if rest.starts_with("vac") {
                return true;
            }
            self.spec().generators().any(|g| {
                let l = self.spec().label(g);
                rest.starts_with(l) && rest[l.len()..].starts_with('[')
            })
        })
    }

    fn parse_factors(&self, offset: usize, s: &str) -> Result<Vec<(super::Gen, i64)>, ParseStateError> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < s.len() {
            let rest = &s[i..];
            if rest.trim() == "vac" {
                return Ok(out);
            }
            let label_len = rest.find('[').ok_or_else(|| err(offset + i, "expected `label[index]` or `vac`"))?;
            let label = rest[..label_len].trim();
            let g = self
                .spec()
                .gen_by_label(label)
                .ok_or_else(|| err(offset + i, format!("unknown generator `{label}` for {}", self.spec())))?;
            let close = rest.find(']').ok_or_else(|| err(offset + i + label_len, "unclosed `[`"))?;
            let index: i64 = rest[label_len + 1..close]
                .trim()
                .parse()
                .map_err(|_| err(offset + i + label_len + 1, "mode index must be an integer"))?;
            out.push((g, index));
            i += close + 1;
        }
        Err(err(offset + s.len(), "monomial must end in `vac`"))
    }
}

/// Split at top-level `+` / `-`, keeping brackets and parentheses intact.
fn split_terms(text: &str) -> Result<Vec<(usize, bool, &str)>, ParseStateError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let mut seen_content = false;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(err(i, "unbalanced bracket"));
                }
            }
            '+' | '-' if depth == 0 => {
                if seen_content {
                    out.push((start, negative, &text[start..i]));
                    seen_content = false;
                } else if ch == '-' {
                    negative = !negative;
                    start = i + 1;
                    continue;
                }
                negative = ch == '-';
                start = i + 1;
                continue;
            }
            c if c.is_whitespace() => {}
            _ => seen_content = true,
        }
    }
    if depth != 0 {
        return Err(err(text.len(), "unbalanced bracket"));
    }
    if !seen_content {
        return Err(err(text.len(), "expected a term"));
    }
    out.push((start, negative, &text[start..]));
    Ok(out)
}
