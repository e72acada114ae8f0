use thiserror::Error;

use crate::prompt::FINAL_ANSWER_MARKER;
use crate::types::{ChoiceQuery, ParsedChoice, PromptMode};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("no valid answer token found in reply")]
    NoToken,
    #[error("no number in [0, 1] found in reply")]
    NoNumber,
    #[error("reasoning reply lacks the `Final answer:` marker")]
    MissingFinalAnswer,
}

/// Extracts the agent's choice from a raw completion.
///
/// In reasoning modes only text after the literal `Final answer:` marker is
/// scanned. Discrete kinds return the first valid token at a word boundary;
/// numeric kinds return the first decimal in [0, 1], rounded to two places.
/// Completions of a stub ending in `0.` may answer with bare fraction
/// digits (`86` completes to 0.86).
pub fn parse_reply(
    raw: &str,
    query: &ChoiceQuery,
    mode: PromptMode,
) -> Result<ParsedChoice, ParseError> {
    let region = match mode {
        PromptMode::Base => raw,
        PromptMode::Cot | PromptMode::Sb => match raw.find(FINAL_ANSWER_MARKER) {
            Some(pos) => &raw[pos + FINAL_ANSWER_MARKER.len()..],
            None => return Err(ParseError::MissingFinalAnswer),
        },
    };
    if query.answer_kind.is_numeric() {
        parse_number(region, &query.answer_prefix)
            .map(ParsedChoice::Value)
            .ok_or(ParseError::NoNumber)
    } else {
        parse_token(region, &query.valid_tokens)
            .map(ParsedChoice::Token)
            .ok_or(ParseError::NoToken)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn parse_token(region: &str, valid: &[String]) -> Option<String> {
    let chars: Vec<char> = region.chars().collect();
    for start in 0..chars.len() {
        if start > 0 && is_word_char(chars[start - 1]) {
            continue;
        }
        // Longest token wins at a given position so e.g. `10` beats `1`.
        let mut hit: Option<&String> = None;
        for token in valid {
            let tok: Vec<char> = token.chars().collect();
            if chars[start..].starts_with(&tok) {
                let end = start + tok.len();
                let bounded = end >= chars.len() || !is_word_char(chars[end]);
                if bounded && hit.is_none_or(|h| h.chars().count() < tok.len()) {
                    hit = Some(token);
                }
            }
        }
        if let Some(token) = hit {
            return Some(token.clone());
        }
    }
    None
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

fn parse_number(region: &str, answer_prefix: &str) -> Option<f64> {
    // First preference: a dotted decimal literal in range.
    let bytes: Vec<char> = region.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() || (bytes[i] == '.' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit()) {
            let start = i;
            let mut saw_dot = false;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || (bytes[i] == '.' && !saw_dot)) {
                if bytes[i] == '.' {
                    // A trailing period is sentence punctuation, not a decimal point.
                    if i + 1 >= bytes.len() || !bytes[i + 1].is_ascii_digit() {
                        break;
                    }
                    saw_dot = true;
                }
                i += 1;
            }
            let literal: String = bytes[start..i].iter().collect();
            if saw_dot {
                if let Ok(v) = literal.parse::<f64>() {
                    if (0.0..=1.0).contains(&v) {
                        return Some(round2(v));
                    }
                }
            }
        } else {
            i += 1;
        }
    }

    // A stub ending in `0.` turns leading digits into fraction digits.
    if answer_prefix.ends_with("0.") {
        let trimmed = region.trim_start();
        let digits: String = trimmed.chars().take_while(char::is_ascii_digit).collect();
        if !digits.is_empty() {
            if let Ok(v) = format!("0.{digits}").parse::<f64>() {
                return Some(round2(v));
            }
        }
    }

    // Last resort: a standalone 0 or 1.
    for (idx, c) in region.char_indices() {
        if c == '0' || c == '1' {
            let before_ok = region[..idx]
                .chars()
                .next_back()
                .is_none_or(|p| !is_word_char(p) && p != '.');
            let after = region[idx + 1..].chars().next();
            let after_ok = after.is_none_or(|n| !is_word_char(n) && n != '.');
            if before_ok && after_ok {
                return Some(if c == '0' { 0.0 } else { 1.0 });
            }
        }
    }
    None
}
