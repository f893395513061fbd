//! Cable-words: signed region-transition symbols recorded along a cable,
//! the linear-scan reduction to a single `n(home, inf)` term, simplicity
//! diagnostics and the degree-weighted volume aggregate.
//!
//! A word line looks like
//!
//! ```text
//! 4: 4>2:+ 2>3:+ 3>inf:+
//! ```
//!
//! where the leading label is both the cable id and its home region, and each
//! symbol `a>b:s` records a crossing from region `a` into region `b` with sign
//! `s`. Barred symbols are written with `-`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WordError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("chain break between {} and symbol {position}: expected a crossing out of {expected}, found one out of {found}", if *.position == 1 { "home".to_string() } else { format!("symbol {}", .position - 1) })]
    ChainBreak {
        position: usize,
        expected: RegionId,
        found: RegionId,
    },
    #[error("symbol {position} crosses from {region} into itself")]
    SelfLoop { position: usize, region: RegionId },
    #[error("region {0} has more than one cable word")]
    DuplicateHome(RegionId),
    #[error("no volume entry for region {0}")]
    MissingVolume(RegionId),
    #[error("region {region} has negative volume {volume}")]
    NegativeVolume { region: RegionId, volume: f64 },
}

/// Error for a whole word file; carries the 1-based line number.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {source}")]
pub struct WordFileError {
    pub line: usize,
    #[source]
    pub source: WordError,
}

/// A complementary region. Bounded regions carry a decimal label; the
/// unbounded region is a single distinguished value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionId(u32);

impl RegionId {
    pub const EXTERIOR: RegionId = RegionId(u32::MAX);

    /// # Panics
    /// If `label` collides with the exterior sentinel (`u32::MAX`).
    pub const fn bounded(label: u32) -> Self {
        assert!(label != u32::MAX, "label reserved for the exterior region");
        RegionId(label)
    }

    pub fn is_exterior(self) -> bool {
        self == Self::EXTERIOR
    }

    /// Numeric label of a bounded region, `None` for the exterior.
    pub fn label(self) -> Option<u32> {
        (!self.is_exterior()).then_some(self.0)
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(l) => write!(f, "{l}"),
            None => f.write_str("inf"),
        }
    }
}

impl FromStr for RegionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Self::EXTERIOR);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("expected a decimal region label or `inf`, got `{s}`"));
        }
        match s.parse::<u32>() {
            Ok(l) if l != u32::MAX => Ok(Self(l)),
            _ => Err(format!("region label `{s}` out of range")),
        }
    }
}

impl Serialize for RegionId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.label() {
            Some(l) => serializer.serialize_u32(l),
            None => serializer.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn of(x: f64) -> Option<Sign> {
        if x > 0.0 {
            Some(Sign::Plus)
        } else if x < 0.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One oriented crossing from `from` into `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub from: RegionId,
    pub to: RegionId,
    pub sign: Sign,
}

impl Symbol {
    pub fn new(from: RegionId, to: RegionId, sign: Sign) -> Self {
        Symbol { from, to, sign }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{}>{}:{}", self.from, self.to, s)
    }
}

/// The ordered crossings of one cable, starting in its home region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CableWord {
    cable_id: String,
    home: RegionId,
    symbols: Vec<Symbol>,
}

impl CableWord {
    /// Builds a word, checking that the symbols chain from `home`.
    pub fn new(
        cable_id: impl Into<String>,
        home: RegionId,
        symbols: Vec<Symbol>,
    ) -> Result<Self, WordError> {
        check_chain(home, &symbols)?;
        Ok(CableWord {
            cable_id: cable_id.into(),
            home,
            symbols,
        })
    }

    pub fn cable_id(&self) -> &str {
        &self.cable_id
    }

    pub fn home(&self) -> RegionId {
        self.home
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Region the cable ends in.
    pub fn terminal(&self) -> RegionId {
        self.symbols.last().map_or(self.home, |s| s.to)
    }
}

impl fmt::Display for CableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.cable_id)?;
        for s in &self.symbols {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

fn check_chain(home: RegionId, symbols: &[Symbol]) -> Result<(), WordError> {
    let mut at = home;
    for (i, s) in symbols.iter().enumerate() {
        if s.from != at {
            return Err(WordError::ChainBreak {
                position: i + 1,
                expected: at,
                found: s.from,
            });
        }
        if s.from == s.to {
            return Err(WordError::SelfLoop {
                position: i + 1,
                region: s.from,
            });
        }
        at = s.to;
    }
    Ok(())
}

/// Parses one line of the word grammar
/// `<cable-id> ":" (<from> ">" <to> ":" ("+"|"-"))*`.
pub fn parse_word(text: &str) -> Result<CableWord, WordError> {
    let syntax = |column: usize, message: String| WordError::Syntax { column, message };

    let colon = text
        .find(':')
        .ok_or_else(|| syntax(1, "missing `:` after cable id".into()))?;
    let id = text[..colon].trim();
    let id_col = text[..colon].find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
    let home: RegionId = id.parse().map_err(|m| syntax(id_col, m))?;

    let mut symbols = Vec::new();
    for (offset, token) in tokens(&text[colon + 1..]) {
        let column = colon + 1 + offset + 1;
        let (regions, sign) = token
            .rsplit_once(':')
            .ok_or_else(|| syntax(column, format!("expected `from>to:sign`, got `{token}`")))?;
        let sign = match sign {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            other => {
                let col = column + regions.len() + 1;
                return Err(syntax(col, format!("expected `+` or `-`, got `{other}`")));
            }
        };
        let (from, to) = regions
            .split_once('>')
            .ok_or_else(|| syntax(column, format!("missing `>` in `{token}`")))?;
        let from: RegionId = from.parse().map_err(|m| syntax(column, m))?;
        let to: RegionId = to
            .parse()
            .map_err(|m| syntax(column + regions.find('>').unwrap_or(0) + 1, m))?;
        symbols.push(Symbol::new(from, to, sign));
    }
    CableWord::new(id, home, symbols)
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split(char::is_whitespace)
        .scan(0usize, |pos, tok| {
            let start = *pos;
            *pos += tok.len() + 1;
            Some((start, tok))
        })
        .filter(|(_, t)| !t.is_empty())
}

/// Parses a word file. Blank lines and lines starting with `#` are skipped.
pub fn parse_word_file(text: &str) -> Result<Vec<CableWord>, WordFileError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_word(l).map_err(|source| WordFileError { line: i + 1, source }))
        .collect()
}

/// Sum of the crossing signs along the word.
pub fn signed_sum(word: &CableWord) -> i64 {
    word.symbols.iter().map(|s| s.sign.value()).sum()
}

/// A composite transition `coefficient (from, to)`. A zero coefficient with
/// `from == to` is the empty word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ReducedTerm {
    pub coefficient: i64,
    pub from: RegionId,
    pub to: RegionId,
}

impl ReducedTerm {
    pub fn is_empty(&self) -> bool {
        self.coefficient == 0 && self.from == self.to
    }
}

impl fmt::Display for ReducedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("()")
        } else {
            write!(f, "{}({},{})", self.coefficient, self.from, self.to)
        }
    }
}

/// Which local rule a reduction step applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// First symbol of the word becomes the running term.
    Open,
    /// `c(a,b)` followed by `(b,a)` whose sign brings the coefficient to zero.
    Cancel,
    /// `c(a,b)` followed by `(b,d)` becomes `(c+s)(a,d)`.
    Transitive,
}

/// Left-to-right reduction state: one running term and nothing else.
#[derive(Debug, Clone, Copy)]
pub struct Reducer {
    term: ReducedTerm,
    steps: usize,
}

impl Reducer {
    pub fn new(home: RegionId) -> Self {
        Reducer {
            term: ReducedTerm {
                coefficient: 0,
                from: home,
                to: home,
            },
            steps: 0,
        }
    }

    /// Folds one symbol into the running term.
    #[inline]
    pub fn push(&mut self, symbol: &Symbol) -> Result<Rule, WordError> {
        self.steps += 1;
        if symbol.from != self.term.to {
            return Err(WordError::ChainBreak {
                position: self.steps,
                expected: self.term.to,
                found: symbol.from,
            });
        }
        if symbol.from == symbol.to {
            return Err(WordError::SelfLoop {
                position: self.steps,
                region: symbol.from,
            });
        }
        let rule = if self.steps == 1 {
            Rule::Open
        } else if symbol.to == self.term.from && self.term.coefficient + symbol.sign.value() == 0 {
            Rule::Cancel
        } else {
            Rule::Transitive
        };
        self.term.coefficient += symbol.sign.value();
        self.term.to = symbol.to;
        Ok(rule)
    }

    pub fn term(&self) -> ReducedTerm {
        self.term
    }
}

/// Reduces a word to a single composite transition out of its home region.
pub fn reduce(word: &CableWord) -> ReducedTerm {
    let mut r = Reducer::new(word.home);
    for s in &word.symbols {
        r.push(s).expect("CableWord is chain-valid by construction");
    }
    r.term()
}

/// Reduces an unchecked symbol sequence.
pub fn reduce_symbols<'a>(
    home: RegionId,
    symbols: impl IntoIterator<Item = &'a Symbol>,
) -> Result<ReducedTerm, WordError> {
    let mut r = Reducer::new(home);
    for s in symbols {
        r.push(s)?;
    }
    Ok(r.term())
}

/// The words of a whole cable system, one per bounded region.
#[derive(Debug, Clone)]
pub struct CableSystemWord {
    words: Vec<CableWord>,
    region_set: BTreeSet<RegionId>,
}

impl CableSystemWord {
    /// Rejects two words sharing a home region.
    pub fn new(words: Vec<CableWord>) -> Result<Self, WordError> {
        let mut homes = HashSet::new();
        for w in &words {
            if !homes.insert(w.home) {
                return Err(WordError::DuplicateHome(w.home));
            }
        }
        let region_set = words
            .iter()
            .flat_map(|w| {
                std::iter::once(w.home).chain(w.symbols.iter().flat_map(|s| [s.from, s.to]))
            })
            .chain(std::iter::once(RegionId::EXTERIOR))
            .collect();
        Ok(CableSystemWord { words, region_set })
    }

    pub fn words(&self) -> &[CableWord] {
        &self.words
    }

    pub fn region_set(&self) -> &BTreeSet<RegionId> {
        &self.region_set
    }

    /// Bounded regions that are crossed by some cable but have no word of
    /// their own.
    pub fn regions_without_word(&self) -> Vec<RegionId> {
        let homes: HashSet<_> = self.words.iter().map(|w| w.home).collect();
        self.region_set
            .iter()
            .copied()
            .filter(|r| !r.is_exterior() && !homes.contains(r))
            .collect()
    }

    pub fn reduce_all(&self) -> Vec<ReducedEntry> {
        self.words
            .iter()
            .map(|w| ReducedEntry {
                cable_id: w.cable_id.clone(),
                home: w.home,
                coefficient: reduce(w).coefficient,
            })
            .collect()
    }
}

/// One line of the reduced output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedEntry {
    pub cable_id: String,
    pub home: RegionId,
    pub coefficient: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimplicityViolation {
    HomeIsExterior,
    DoesNotReachExterior { ends_in: RegionId },
    ReEntered { region: RegionId, symbol: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Checkability {
    NotCheckableAtWordLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CableSimplicity {
    pub cable_id: String,
    pub endpoints_ok: bool,
    pub violations: Vec<SimplicityViolation>,
    pub disjointness: Checkability,
}

impl CableSimplicity {
    pub fn is_simple(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub cables: Vec<CableSimplicity>,
}

impl SimplicityReport {
    pub fn all_simple(&self) -> bool {
        self.cables.iter().all(CableSimplicity::is_simple)
    }
}

/// Checks the word-level simplicity conditions for each cable: bounded home,
/// exterior terminal, and no bounded region entered again after the cable
/// has left it. Pairwise disjointness needs geometry and is not checked.
pub fn validate_simple(system: &CableSystemWord) -> SimplicityReport {
    let cables = system.words.iter().map(check_simple).collect();
    SimplicityReport { cables }
}

fn check_simple(word: &CableWord) -> CableSimplicity {
    let mut violations = Vec::new();
    if word.home.is_exterior() {
        violations.push(SimplicityViolation::HomeIsExterior);
    }
    if !word.terminal().is_exterior() {
        violations.push(SimplicityViolation::DoesNotReachExterior {
            ends_in: word.terminal(),
        });
    }
    let endpoints_ok = violations.is_empty();

    let mut departed = HashSet::new();
    for (i, s) in word.symbols.iter().enumerate() {
        if !s.from.is_exterior() {
            departed.insert(s.from);
        }
        if !s.to.is_exterior() && departed.contains(&s.to) {
            violations.push(SimplicityViolation::ReEntered {
                region: s.to,
                symbol: i + 1,
            });
        }
    }
    CableSimplicity {
        cable_id: word.cable_id.clone(),
        endpoints_ok,
        violations,
        disjointness: Checkability::NotCheckableAtWordLevel,
    }
}

/// Degree-weighted volume `sum |n_i| Vol(home_i)`.
pub fn vdeg(reduced: &[ReducedTerm], volumes: &HashMap<RegionId, f64>) -> Result<f64, WordError> {
    reduced.iter().try_fold(0.0, |acc, t| {
        let v = *volumes
            .get(&t.from)
            .ok_or(WordError::MissingVolume(t.from))?;
        if v < 0.0 {
            return Err(WordError::NegativeVolume {
                region: t.from,
                volume: v,
            });
        }
        Ok(acc + t.coefficient.unsigned_abs() as f64 * v)
    })
}
