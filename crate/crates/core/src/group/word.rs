//! Outer commutator words: bracketings of distinct variables `x1..xt`.

use std::fmt;

use super::table::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    /// Zero-based variable index.
    Var(usize),
    Bracket(Box<Word>, Box<Word>),
}

impl Word {
    pub fn weight(&self) -> usize {
        match self {
            Word::Var(_) => 1,
            Word::Bracket(u, v) => u.weight() + v.weight(),
        }
    }

    /// `[x1, x2]`.
    pub fn commutator() -> Word {
        Word::Bracket(Box::new(Word::Var(0)), Box::new(Word::Var(1)))
    }

    pub fn parse(text: &str) -> Result<Word> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let mut next_var = 0;
        let w = parse_word(&chars, &mut pos, &mut next_var)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("unexpected trailing input at {pos}")));
        }
        Ok(w)
    }
}

fn parse_word(chars: &[char], pos: &mut usize, next_var: &mut usize) -> Result<Word> {
    match chars.get(*pos) {
        Some('x') => {
            *pos += 1;
            let start = *pos;
            while chars.get(*pos).is_some_and(char::is_ascii_digit) {
                *pos += 1;
            }
            if start == *pos {
                return Err(Error::Parse(format!("variable index expected at {start}")));
            }
            let digits: String = chars[start..*pos].iter().collect();
            let k: usize = digits.parse().map_err(|_| Error::Parse(format!("bad index {digits}")))?;
            if k != *next_var + 1 {
                return Err(Error::Variable(format!(
                    "found x{k} where x{} was expected; variables must be distinct and read x1..xt in order",
                    *next_var + 1
                )));
            }
            *next_var += 1;
            Ok(Word::Var(k - 1))
        }
        Some('[') => {
            *pos += 1;
            let u = parse_word(chars, pos, next_var)?;
            expect(chars, pos, ',')?;
            let v = parse_word(chars, pos, next_var)?;
            expect(chars, pos, ']')?;
            Ok(Word::Bracket(Box::new(u), Box::new(v)))
        }
        Some(c) => Err(Error::Parse(format!("unexpected {c:?} at {}", *pos))),
        None => Err(Error::Parse("unexpected end of word".into())),
    }
}

fn expect(chars: &[char], pos: &mut usize, want: char) -> Result<()> {
    if chars.get(*pos) == Some(&want) {
        *pos += 1;
        Ok(())
    } else {
        Err(Error::Parse(format!("expected {want:?} at {}", *pos)))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Var(i) => write!(f, "x{}", i + 1),
            Word::Bracket(u, v) => write!(f, "[{u},{v}]"),
        }
    }
}

/// `w(K_1, ..., K_t)`: leaves become the arguments, brackets become
/// commutator subgroups. All arguments must be normal subgroups.
pub fn verbal_subgroup(g: &FiniteGroup, w: &Word, args: &[Subgroup]) -> Result<Subgroup> {
    if args.len() != w.weight() {
        return Err(Error::ArityMismatch { expected: w.weight(), got: args.len() });
    }
    if args.iter().any(|a| !g.is_subgroup(a) || !g.is_normal(a)) {
        return Err(Error::NotNormal);
    }
    Ok(verbal_unchecked(g, w, args))
}

/// As [`verbal_subgroup`] without the argument checks.
pub(crate) fn verbal_unchecked(g: &FiniteGroup, w: &Word, args: &[Subgroup]) -> Subgroup {
    match w {
        Word::Var(i) => args[*i].clone(),
        Word::Bracket(u, v) => {
            let a = verbal_unchecked(g, u, args);
            let b = verbal_unchecked(g, v, args);
            g.commutator_subgroup(&a, &b)
        }
    }
}
