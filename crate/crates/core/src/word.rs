//! Free-group words, alphabets and presentations.
//!
//! A [`Letter`] packs a generator index and an inversion bit into one `u32`
//! (`2 * gen + inv`), which is also the column index used by coset tables.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A signed generator reference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    #[inline]
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter((gen as u32) << 1 | inverse as u32)
    }

    #[inline]
    pub fn pos(gen: usize) -> Self {
        Letter::new(gen, false)
    }

    #[inline]
    pub fn neg(gen: usize) -> Self {
        Letter::new(gen, true)
    }

    #[inline]
    pub fn gen(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Column index in a table with `2 * rank` columns.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        Letter(i as u32)
    }

    /// +1 or -1.
    #[inline]
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }
}

/// A word in a free group. Not necessarily freely reduced; most constructors
/// reduce, [`Word::raw`] does not.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Builds a word and freely reduces it.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// Builds a word exactly as given.
    pub fn raw(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn free_reduce(&self) -> Word {
        Word::new(self.0.iter().copied())
    }

    /// Removes cancelling pairs between the two ends as well.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.free_reduce().0;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == w[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            for &l in &base.0 {
                push_reduced(&mut out, l);
            }
        }
        Word(out)
    }

    /// `g^{-1} * self * g`, the convention behind `u^g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        &(&g.inverse() * self) * g
    }

    /// `[u, v] = u^{-1} v^{-1} u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        Word::new(
            u.inverse()
                .0
                .into_iter()
                .chain(v.inverse().0)
                .chain(u.0.iter().copied())
                .chain(v.0.iter().copied()),
        )
    }

    /// Image under the endomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        let mut out = Vec::new();
        for &l in &self.0 {
            let img = images.get(l.gen()).ok_or(Error::MissingImage(l.gen()))?;
            if l.is_inverse() {
                for &m in img.0.iter().rev() {
                    push_reduced(&mut out, m.inverse());
                }
            } else {
                for &m in &img.0 {
                    push_reduced(&mut out, m);
                }
            }
        }
        Ok(Word(out))
    }

    /// Smallest `root` with `self == root^k`; returns `(root, k)`.
    pub fn root(&self) -> (Word, usize) {
        let n = self.len();
        for p in 1..=n {
            if n % p == 0 && (p..n).all(|i| self.0[i] == self.0[i - p]) {
                return (Word(self.0[..p].to_vec()), n / p);
            }
        }
        (self.clone(), 1)
    }

    /// Largest generator index used plus one.
    pub fn rank_bound(&self) -> usize {
        self.0.iter().map(|l| l.gen() + 1).max().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }
}

#[inline]
pub(crate) fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &rhs.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::new(iter)
    }
}

/// A named generator of an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub index: usize,
}

/// An ordered list of distinct generator names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            let valid = n.chars().next().is_some_and(|c| c.is_alphabetic())
                && n.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Parse(format!("invalid generator name {n:?}")));
            }
            if seen.insert(n.to_string(), i).is_some() {
                return Err(Error::Parse(format!("duplicate generator name {n:?}")));
            }
            out.push(n.to_string());
        }
        Ok(Alphabet { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.names.iter().enumerate().map(|(index, name)| Generator {
            name: name.clone(),
            index,
        })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        parse_word(text, self)
    }
}

/// An alphabet together with relator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        let relators: Vec<Word> = relators.into_iter().map(|r| r.free_reduce()).collect();
        if let Some(r) = relators.iter().find(|r| r.rank_bound() > alphabet.len()) {
            return Err(Error::Parse(format!(
                "relator uses generator {} outside the alphabet",
                r.rank_bound() - 1
            )));
        }
        Ok(Presentation { alphabet, relators })
    }

    pub fn parse<S: AsRef<str>>(gens: &[S], relators: &[S]) -> Result<Self> {
        let alphabet = Alphabet::new(gens)?;
        let rels = relators
            .iter()
            .map(|r| parse_word(r.as_ref(), &alphabet))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(alphabet, rels)
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word(text, &self.alphabet)
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        if w.rank_bound() > self.rank() {
            return Err(Error::InvalidWord(format!(
                "word uses generator {} but the alphabet has {}",
                w.rank_bound() - 1,
                self.rank()
            )));
        }
        Ok(())
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign();
            if !first {
                f.write_str("*")?;
            }
            first = false;
            let name = self
                .alphabet
                .names
                .get(l.gen())
                .map(String::as_str)
                .unwrap_or("?");
            if run == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{run}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Parses the word grammar
/// `word := term (('*' | ε) term)*`, `term := atom ('^' int)?`,
/// `atom := name | '(' word ')' | '(' word ',' word ')'`,
/// where the two-argument form is the commutator `u^-1 v^-1 u v`.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser {
        s: &chars,
        pos: 0,
        alphabet,
    };
    let w = p.word()?;
    if p.pos != chars.len() {
        return Err(match chars[p.pos] {
            ')' | ',' => Error::Parse(format!("unbalanced parenthesis at offset {}", p.pos)),
            c => Error::Parse(format!("unexpected {c:?} at offset {}", p.pos)),
        });
    }
    Ok(w)
}

struct Parser<'a> {
    s: &'a [char],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word> {
        let mut out = Word::identity();
        loop {
            match self.peek() {
                None | Some(')') | Some(',') => return Ok(out),
                Some('*') => {
                    self.pos += 1;
                    if matches!(self.peek(), None | Some(')') | Some(',') | Some('*')) {
                        return Err(Error::Parse(format!(
                            "expected a term after '*' at offset {}",
                            self.pos
                        )));
                    }
                }
                Some(_) => {
                    let t = self.term()?;
                    out = &out * &t;
                }
            }
        }
    }

    fn term(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.int()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(Error::Parse(format!("malformed exponent at offset {start}")));
        }
        let txt: String = self.s[start..self.pos].iter().collect();
        txt.parse::<i64>()
            .map_err(|_| Error::Parse(format!("malformed exponent {txt:?}")))
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('(') => {
                let open = self.pos;
                self.pos += 1;
                let u = self.word()?;
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(u)
                    }
                    Some(',') => {
                        self.pos += 1;
                        let v = self.word()?;
                        if self.peek() != Some(')') {
                            return Err(Error::Parse(format!(
                                "unbalanced parenthesis opened at offset {open}"
                            )));
                        }
                        self.pos += 1;
                        Ok(Word::commutator(&u, &v))
                    }
                    _ => Err(Error::Parse(format!(
                        "unbalanced parenthesis opened at offset {open}"
                    ))),
                }
            }
            Some(c) if c.is_alphabetic() => {
                // longest alphabet name matching here
                let mut best: Option<(usize, usize)> = None;
                for (i, name) in self.alphabet.names.iter().enumerate() {
                    let n: Vec<char> = name.chars().collect();
                    if self.s[self.pos..].starts_with(&n) && best.map_or(true, |(_, l)| n.len() > l)
                    {
                        best = Some((i, n.len()));
                    }
                }
                match best {
                    Some((g, l)) => {
                        self.pos += l;
                        Ok(Word::gen(g))
                    }
                    None => {
                        let tail: String = self.s[self.pos..]
                            .iter()
                            .take_while(|c| c.is_alphanumeric() || **c == '_')
                            .collect();
                        Err(Error::UnknownSymbol(tail))
                    }
                }
            }
            Some('1') if !self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(c) => Err(match c {
                ')' => Error::Parse(format!("unbalanced parenthesis at offset {}", self.pos)),
                '^' => Error::Parse(format!("exponent without base at offset {}", self.pos)),
                _ => Error::UnknownSymbol(c.to_string()),
            }),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    #[test]
    fn parses_caret_and_bracket_words() {
        let al = ab();
        let w = parse_word("(b^-2*a)^4", &al).unwrap();
        assert_eq!(w.len(), 12);
        let unit = Word::new([Letter::neg(1), Letter::neg(1), Letter::pos(0)]);
        assert_eq!(w, unit.pow(4));
        assert_eq!(parse_word("", &al).unwrap(), Word::identity());
        assert_eq!(parse_word("a*a^-1*b", &al).unwrap(), Word::gen(1));
        assert_eq!(parse_word("ab^3a^2b^4", &al).unwrap().len(), 10);
        assert_eq!(parse_word(" a b ", &al).unwrap().len(), 2);
    }

    #[test]
    fn commutator_syntax_expands() {
        let al = ab();
        let w = parse_word("(a^2,b^2)^2", &al).unwrap();
        assert_eq!(w.display(&al).to_string(), "a^-2*b^-2*a^2*b^2*a^-2*b^-2*a^2*b^2");
    }

    #[test]
    fn parse_errors() {
        let al = ab();
        assert!(matches!(parse_word("c", &al), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_word("(ab", &al), Err(Error::Parse(_))));
        assert!(matches!(parse_word("ab)", &al), Err(Error::Parse(_))));
        assert!(matches!(parse_word("a^", &al), Err(Error::Parse(_))));
        assert!(matches!(parse_word("a^x", &al), Err(Error::Parse(_))));
        assert!(matches!(parse_word("a**b", &al), Err(Error::Parse(_))));
    }

    #[test]
    fn multi_char_names_use_longest_match() {
        let al = Alphabet::new(&["x", "x1", "y"]).unwrap();
        let w = parse_word("x1x y", &al).unwrap();
        assert_eq!(w.letters(), &[Letter::pos(1), Letter::pos(0), Letter::pos(2)]);
    }

    #[test]
    fn free_reduction_cases() {
        let (a, b) = (Letter::pos(0), Letter::pos(1));
        let w = Word::raw(vec![a, b, b.inverse(), a]);
        assert_eq!(w.free_reduce(), Word::raw(vec![a, a]));
        assert!(Word::raw(vec![a, a.inverse()]).free_reduce().is_empty());
        let ab = Word::raw(vec![a, b]);
        let back = Word::raw(
            [ab.letters(), ab.inverse().letters(), ab.letters()].concat(),
        );
        assert_eq!(back.free_reduce(), ab);
    }

    #[test]
    fn substitution_examples() {
        let al = ab();
        let w = parse_word("ab^3a^2b^4", &al).unwrap();
        let mirror = [parse_word("a^-1", &al).unwrap(), parse_word("a^2b", &al).unwrap()];
        let got = w.substitute(&mirror).unwrap();
        let expected = parse_word("a^-1(a^2b)^3a^-2(a^2b)^4", &al).unwrap();
        assert_eq!(got, expected);
        let id = [Word::gen(0), Word::gen(1)];
        assert_eq!(Word::gen(0).substitute(&id).unwrap(), Word::gen(0));
        let swap = [Word::gen(1), Word::gen(0)];
        assert_eq!(
            parse_word("ab", &al).unwrap().substitute(&swap).unwrap(),
            parse_word("ba", &al).unwrap()
        );
        assert!(matches!(w.substitute(&[Word::gen(0)]), Err(Error::MissingImage(1))));
    }

    #[test]
    fn root_detects_proper_powers() {
        let al = ab();
        let w = parse_word("(ab^3a^2b^4)^2", &al).unwrap();
        let (r, k) = w.root();
        assert_eq!(k, 2);
        assert_eq!(r, parse_word("ab^3a^2b^4", &al).unwrap());
        assert_eq!(parse_word("ab", &al).unwrap().root().1, 1);
    }

    #[test]
    fn cyclic_reduce_strips_ends() {
        let al = ab();
        let w = parse_word("b^-1 a b", &al).unwrap();
        assert_eq!(w.cyclic_reduce(), Word::gen(0));
    }
}
