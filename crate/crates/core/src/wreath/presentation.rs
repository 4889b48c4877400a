// SPDX-License-Identifier: Apache-2.0

//! Wreath-recursion presentations and their text format.
//!
//! ```text
//! # the first Grigorchuk group
//! degree: 2
//! involutions: a, b, c, d
//! gen a = perm (1 2) | e, e
//! gen b = perm () | a, c
//! gen c = perm () | a, d
//! gen d = perm () | e, b
//! ```
//!
//! Each `gen` line gives the root permutation in disjoint-cycle notation on
//! `1..=d` and then the `d` section words, separated by `, `. A word is `e`
//! (the identity) or space-separated tokens `name` / `name^-1`. Sections may
//! refer to generators declared further down.

use std::collections::HashMap;
use std::fmt;

use super::word::{reduce_with, Letter, Word, WordDisplay};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::MAX_DEGREE;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorRule {
    name: String,
    root_perm: Permutation,
    root_inverse: Permutation,
    sections: Vec<Word>,
}

impl GeneratorRule {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Root permutation on 0-based letters.
    pub fn root_perm(&self) -> &Permutation {
        &self.root_perm
    }

    pub fn root_inverse(&self) -> &Permutation {
        &self.root_inverse
    }

    /// `sections()[i]` is the section at the (0-based) letter `i`.
    pub fn sections(&self) -> &[Word] {
        &self.sections
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathPresentation {
    degree: usize,
    rules: Vec<GeneratorRule>,
    names: Vec<String>,
    involutive: Vec<bool>,
}

impl WreathPresentation {
    /// Assembles a presentation from already resolved parts.
    ///
    /// `rules` holds `(name, root permutation, sections)`; section words must
    /// only reference indices into `rules`.
    pub fn new(
        degree: usize,
        rules: Vec<(String, Permutation, Vec<Word>)>,
        involutions: &[&str],
    ) -> Result<Self> {
        if !(2..=MAX_DEGREE).contains(&degree) {
            return Err(Error::DegreeOutOfRange { degree });
        }
        if rules.is_empty() {
            return Err(Error::Integrity("presentation has no generators".into()));
        }
        let count = rules.len();
        let mut names: Vec<String> = Vec::with_capacity(count);
        let mut built = Vec::with_capacity(count);
        for (line, (name, root_perm, sections)) in rules.into_iter().enumerate() {
            if names.contains(&name) {
                return Err(Error::DuplicateGenerator {
                    name,
                    line: line + 1,
                });
            }
            if root_perm.len() != degree || sections.len() != degree {
                return Err(Error::Integrity(format!(
                    "generator `{name}` needs a permutation of {degree} letters and {degree} sections"
                )));
            }
            if let Some(bad) = sections
                .iter()
                .flat_map(|w| w.letters())
                .find(|l| l.generator >= count)
            {
                return Err(Error::UndeclaredGenerator {
                    name: format!("#{}", bad.generator),
                    line: line + 1,
                });
            }
            names.push(name.clone());
            built.push(GeneratorRule {
                name,
                root_inverse: root_perm.inverse(),
                root_perm,
                sections,
            });
        }
        let mut involutive = vec![false; count];
        for inv in involutions {
            let g =
                names
                    .iter()
                    .position(|n| n == inv)
                    .ok_or_else(|| Error::UndeclaredGenerator {
                        name: inv.to_string(),
                        line: 0,
                    })?;
            involutive[g] = true;
        }
        Ok(WreathPresentation {
            degree,
            rules: built,
            names,
            involutive,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_presentation(text)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rules(&self) -> &[GeneratorRule] {
        &self.rules
    }

    pub fn rule(&self, g: usize) -> &GeneratorRule {
        &self.rules[g]
    }

    pub fn generator_count(&self) -> usize {
        self.rules.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_involutive(&self, g: usize) -> bool {
        self.involutive[g]
    }

    /// The generators as one-letter words, in declaration order.
    pub fn generators(&self) -> Vec<Word> {
        (0..self.rules.len()).map(Word::generator).collect()
    }

    /// Free reduction, plus `g g → e` for declared involutions.
    pub fn reduce(&self, w: &Word) -> Word {
        reduce_with(w.letters().iter().copied(), |g| self.involutive[g])
    }

    /// Parses a word in the token syntax of the presentation format.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word_tokens(text, |name| self.generator_index(name)).map_err(|message| {
            Error::InvalidWord {
                text: text.to_string(),
                message,
            }
        })
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> WordDisplay<'a> {
        WordDisplay {
            word: w,
            names: &self.names,
        }
    }

    pub fn render_word(&self, w: &Word) -> String {
        self.display(w).to_string()
    }
}

/// Canonical text in the presentation file format.
impl fmt::Display for WreathPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree: {}", self.degree)?;
        let invols: Vec<&str> = self
            .names
            .iter()
            .zip(&self.involutive)
            .filter(|(_, &i)| i)
            .map(|(n, _)| n.as_str())
            .collect();
        if !invols.is_empty() {
            writeln!(f, "involutions: {}", invols.join(", "))?;
        }
        for rule in &self.rules {
            let sections: Vec<String> = rule.sections.iter().map(|w| self.render_word(w)).collect();
            writeln!(
                f,
                "gen {} = perm {} | {}",
                rule.name,
                rule.root_perm,
                sections.join(", ")
            )?;
        }
        Ok(())
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_word_tokens(
    text: &str,
    resolve: impl Fn(&str) -> Option<usize>,
) -> std::result::Result<Word, String> {
    let text = text.trim();
    if text == "e" {
        return Ok(Word::empty());
    }
    if text.is_empty() {
        return Err("empty word; write `e` for the identity".into());
    }
    let mut word = Word::empty();
    for token in text.split_whitespace() {
        let (name, inverse) = match token.strip_suffix("^-1") {
            Some(base) => (base, true),
            None => (token, false),
        };
        if !is_name(name) {
            return Err(format!("`{token}` is not a generator token"));
        }
        if name == "e" {
            return Err("`e` denotes the empty word and cannot appear inside a product".into());
        }
        let g = resolve(name).ok_or_else(|| format!("unknown generator `{name}`"))?;
        word.push(Letter {
            generator: g,
            inverse,
        });
    }
    Ok(word)
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Cursor { line, text, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_spaces(&mut self) -> usize {
        let start = self.pos;
        while self.rest().starts_with([' ', '\t']) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn require_space(&mut self) -> Result<()> {
        if self.skip_spaces() == 0 {
            Err(self.error("expected a space"))
        } else {
            Ok(())
        }
    }

    fn expect(&mut self, literal: &str) -> Result<()> {
        if self.rest().starts_with(literal) {
            self.pos += literal.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{literal}`")))
        }
    }

    fn name(&mut self) -> Result<&'a str> {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(i, c)| {
                !(c.is_ascii_alphanumeric() || c == '_') || (i == 0 && !c.is_ascii_alphabetic())
            })
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn int(&mut self) -> Result<usize> {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(_, c)| !c.is_ascii_digit())
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("expected an integer"));
        }
        let value = rest[..len]
            .parse()
            .map_err(|_| self.error("integer out of range"))?;
        self.pos += len;
        Ok(value)
    }

    fn at_end(&self) -> bool {
        self.rest().trim().is_empty()
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_spaces();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing text"))
        }
    }
}

struct RawGen {
    line: usize,
    name: String,
    cycles: Vec<Vec<usize>>,
    // raw section words with the column where each starts
    sections: Vec<(String, usize)>,
}

fn parse_presentation(text: &str) -> Result<WreathPresentation> {
    let mut degree: Option<usize> = None;
    let mut involutions: Option<(usize, Vec<(String, usize)>)> = None;
    let mut gens: Vec<RawGen> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim_end();
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(line, content);
        cur.skip_spaces();

        if degree.is_none() {
            cur.expect("degree:")
                .map_err(|_| cur.error("file must start with `degree: <d>`"))?;
            cur.require_space()?;
            let d = cur.int()?;
            cur.finish()?;
            if !(2..=MAX_DEGREE).contains(&d) {
                return Err(Error::DegreeOutOfRange { degree: d });
            }
            degree = Some(d);
            continue;
        }

        if cur.rest().starts_with("involutions:") {
            if involutions.is_some() || !gens.is_empty() {
                return Err(cur.error("`involutions:` must appear once, right after the header"));
            }
            cur.expect("involutions:")?;
            cur.require_space()?;
            let mut names = Vec::new();
            loop {
                let col = cur.pos;
                names.push((cur.name()?.to_string(), col));
                if cur.rest().starts_with(',') {
                    cur.expect(",")?;
                    cur.require_space()?;
                } else {
                    break;
                }
            }
            cur.finish()?;
            involutions = Some((line, names));
            continue;
        }

        if cur.rest().starts_with("degree:") {
            return Err(cur.error("duplicate `degree:` header"));
        }
        gens.push(parse_gen_line(&mut cur, degree.unwrap_or(2))?);
    }

    let degree = degree.ok_or(Error::Syntax {
        line: 1,
        column: 1,
        message: "missing `degree:` header".into(),
    })?;
    if gens.is_empty() {
        return Err(Error::Syntax {
            line: text.lines().count().max(1),
            column: 1,
            message: "at least one `gen` line is required".into(),
        });
    }

    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, g) in gens.iter().enumerate() {
        if index.insert(g.name.as_str(), i).is_some() {
            return Err(Error::DuplicateGenerator {
                name: g.name.clone(),
                line: g.line,
            });
        }
    }

    let mut rules = Vec::with_capacity(gens.len());
    for g in &gens {
        let mut sections = Vec::with_capacity(degree);
        for (text, column) in &g.sections {
            let word =
                parse_word_tokens(text, |n| index.get(n).copied()).map_err(
                    |message| match message.strip_prefix("unknown generator `") {
                        Some(rest) => Error::UndeclaredGenerator {
                            name: rest.trim_end_matches('`').to_string(),
                            line: g.line,
                        },
                        None => Error::Syntax {
                            line: g.line,
                            column: *column,
                            message,
                        },
                    },
                )?;
            sections.push(word);
        }
        let root = Permutation::from_cycles(
            degree,
            &g.cycles
                .iter()
                .map(|c| c.iter().map(|p| p - 1).collect())
                .collect::<Vec<_>>(),
        )
        .ok_or_else(|| Error::Syntax {
            line: g.line,
            column: 1,
            message: "cycles must be disjoint".into(),
        })?;
        rules.push((g.name.clone(), root, sections));
    }

    let invol_names: Vec<&str> = match &involutions {
        Some((line, names)) => {
            for (n, _) in names {
                if !index.contains_key(n.as_str()) {
                    return Err(Error::UndeclaredGenerator {
                        name: n.clone(),
                        line: *line,
                    });
                }
            }
            names.iter().map(|(n, _)| n.as_str()).collect()
        }
        None => Vec::new(),
    };
    WreathPresentation::new(degree, rules, &invol_names)
}

fn parse_gen_line(cur: &mut Cursor<'_>, degree: usize) -> Result<RawGen> {
    let line = cur.line;
    cur.expect("gen")?;
    cur.require_space()?;
    let name_col = cur.pos;
    let name = cur.name()?.to_string();
    if name == "e" {
        cur.pos = name_col;
        return Err(cur.error("`e` is reserved for the empty word"));
    }
    cur.require_space()?;
    cur.expect("=")?;
    cur.require_space()?;
    cur.expect("perm")?;
    cur.require_space()?;

    let mut cycles: Vec<Vec<usize>> = Vec::new();
    if cur.rest().starts_with("()") {
        cur.expect("()")?;
    } else {
        while cur.rest().starts_with('(') {
            cur.expect("(")?;
            let mut cycle = Vec::new();
            loop {
                let col = cur.pos;
                let p = cur.int()?;
                if p == 0 || p > degree {
                    cur.pos = col;
                    return Err(cur.error(format!("point {p} outside 1..={degree}")));
                }
                cycle.push(p);
                if cur.rest().starts_with(')') {
                    break;
                }
                cur.require_space()?;
            }
            if cycle.len() < 2 {
                return Err(cur.error("a cycle needs at least two points"));
            }
            cur.expect(")")?;
            cycles.push(cycle);
        }
        if cycles.is_empty() {
            return Err(cur.error("expected a cycle or `()`"));
        }
    }
    cur.require_space()?;
    cur.expect("|")?;
    cur.require_space()?;

    let mut sections = Vec::new();
    let start = cur.pos;
    let mut offset = start;
    for piece in cur.rest().split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let column = cur.text[..offset + lead].chars().count() + 1;
        sections.push((piece.trim().to_string(), column));
        offset += piece.len() + 1;
    }
    cur.pos = cur.text.len();
    if sections.len() != degree {
        return Err(Error::Syntax {
            line,
            column: start + 1,
            message: format!("expected {degree} section words, found {}", sections.len()),
        });
    }
    for (s, col) in &sections {
        if s.is_empty() {
            return Err(Error::Syntax {
                line,
                column: *col,
                message: "empty section word; write `e` for the identity".into(),
            });
        }
    }
    Ok(RawGen {
        line,
        name,
        cycles,
        sections,
    })
}
