use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::automaton::{Automaton, Word};
use crate::error::{Error, Result};

/// Largest alphabet whose codewords can be written as single digits.
pub const MAX_CODE_ALPHABET: usize = 10;

fn digits(w: &Word) -> String {
    w.letters().iter().map(|&a| char::from(b'0' + a as u8)).collect()
}

/// A maximal finite prefix code over `{0, …, k−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrefixCode {
    k: usize,
    /// Lexicographically sorted.
    words: Vec<Word>,
}

impl PrefixCode {
    /// Validates that `words` is prefix-free and that every internal node
    /// of its code tree has all `k` children.
    pub fn new(k: usize, words: Vec<Word>) -> Result<Self> {
        if !(2..=MAX_CODE_ALPHABET).contains(&k) {
            return Err(Error::InvalidCode(format!(
                "alphabet size {k} is outside 2..={MAX_CODE_ALPHABET}"
            )));
        }
        if words.is_empty() {
            return Err(Error::InvalidCode("a code needs at least one codeword".into()));
        }
        let mut words = words;
        for w in &words {
            if w.is_empty() {
                return Err(Error::InvalidCode("the empty word is not a codeword".into()));
            }
            if let Some(a) = w.max_letter().filter(|&a| a >= k) {
                return Err(Error::InvalidWord { letter: a, k });
            }
        }
        words.sort_by(|x, y| x.letters().cmp(y.letters()));
        // in lexicographic order every extension of w directly follows w or another extension
        for pair in words.windows(2) {
            if pair[1].letters().starts_with(pair[0].letters()) {
                return Err(Error::InvalidCode(format!(
                    "`{}` is a prefix of `{}`",
                    digits(&pair[0]),
                    digits(&pair[1])
                )));
            }
        }
        let code = PrefixCode { k, words };
        let prefixes = code.proper_prefixes();
        let index: HashMap<&Word, ()> = prefixes.iter().map(|p| (p, ())).collect();
        let members: HashMap<&Word, ()> = code.words.iter().map(|w| (w, ())).collect();
        for p in &prefixes {
            for a in 0..k {
                let child = p.with_letter(a);
                if !index.contains_key(&child) && !members.contains_key(&child) {
                    return Err(Error::InvalidCode(format!(
                        "not maximal: no codeword starts with `{}`",
                        digits(&child)
                    )));
                }
            }
        }
        Ok(code)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Proper prefixes of codewords in shortlex order, starting with `ε`.
    pub fn proper_prefixes(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self
            .words
            .iter()
            .flat_map(|w| (0..w.len()).map(move |i| Word::from_letters(w.letters()[..i].iter().copied())))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.k);
        for w in &self.words {
            out.push_str(&digits(w));
            out.push('\n');
        }
        out
    }

    /// Parses `k` on the first line and one digit-string codeword per line.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing alphabet size"))?;
        let k: usize = header
            .parse()
            .map_err(|_| Error::parse(hline, format!("bad alphabet size `{header}`")))?;
        if !(2..=MAX_CODE_ALPHABET).contains(&k) {
            return Err(Error::parse(
                hline,
                format!("alphabet size {k} is outside 2..={MAX_CODE_ALPHABET}"),
            ));
        }
        let mut words = Vec::new();
        for (line, l) in lines {
            let mut w = Word::empty();
            for ch in l.chars() {
                match ch.to_digit(10) {
                    Some(a) if (a as usize) < k => w.push(a as usize),
                    _ => {
                        return Err(Error::parse(
                            line,
                            format!("`{ch}` is not a letter of a {k}-letter alphabet"),
                        ))
                    }
                }
            }
            words.push(w);
        }
        PrefixCode::new(k, words)
    }
}

impl fmt::Display for PrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for PrefixCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PrefixCode::parse(s)
    }
}

/// The automaton on proper prefixes of a prefix code: `v` moves to `va`
/// when that is a proper prefix and back to the root otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoder {
    automaton: Automaton,
    /// Proper prefix of every state.
    labels: Vec<Word>,
    root: usize,
}

impl Decoder {
    /// States are numbered in shortlex order of their labels, root first.
    pub fn from_code(code: &PrefixCode) -> Result<Self> {
        let labels = code.proper_prefixes();
        let index: HashMap<Word, usize> = labels.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let letters: Vec<Vec<usize>> = (0..code.k())
            .map(|a| {
                labels
                    .iter()
                    .map(|v| index.get(&v.with_letter(a)).copied().unwrap_or(0))
                    .collect()
            })
            .collect();
        let automaton = Automaton::from_letters(labels.len(), &letters)?;
        Ok(Decoder {
            automaton,
            labels,
            root: 0,
        })
    }

    /// Recognizes an automaton that is the decoder of some maximal prefix
    /// code, keeping its state numbering. Candidate roots are tried in
    /// increasing order.
    pub fn from_automaton(a: &Automaton) -> Option<Self> {
        (0..a.n()).find_map(|root| Decoder::with_root(a, root))
    }

    fn with_root(a: &Automaton, root: usize) -> Option<Self> {
        let n = a.n();
        let mut indeg = vec![0usize; n];
        for q in 0..n {
            for l in 0..a.k() {
                let t = a.step(q, l);
                if t != root {
                    indeg[t] += 1;
                }
            }
        }
        if (0..n).any(|q| q != root && indeg[q] != 1) {
            return None;
        }
        let mut labels: Vec<Option<Word>> = vec![None; n];
        labels[root] = Some(Word::empty());
        let mut queue = VecDeque::from([root]);
        while let Some(q) = queue.pop_front() {
            let v = labels[q].clone().expect("queued states are labeled");
            for l in 0..a.k() {
                let t = a.step(q, l);
                if t != root && labels[t].is_none() {
                    labels[t] = Some(v.with_letter(l));
                    queue.push_back(t);
                }
            }
        }
        let labels: Option<Vec<Word>> = labels.into_iter().collect();
        Some(Decoder {
            automaton: a.clone(),
            labels: labels?,
            root,
        })
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn into_automaton(self) -> Automaton {
        self.automaton
    }

    pub fn labels(&self) -> &[Word] {
        &self.labels
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn n(&self) -> usize {
        self.automaton.n()
    }

    pub fn k(&self) -> usize {
        self.automaton.k()
    }

    /// Largest level of a state, that is, the longest label.
    pub fn height(&self) -> usize {
        self.labels.iter().map(Word::len).max().unwrap_or(0)
    }

    /// The code whose decoder this is: the words `v a` leading back to the root.
    pub fn code(&self) -> Result<PrefixCode> {
        let a = &self.automaton;
        let mut words = Vec::new();
        for (q, v) in self.labels.iter().enumerate() {
            for l in 0..a.k() {
                if a.step(q, l) == self.root {
                    words.push(v.with_letter(l));
                }
            }
        }
        PrefixCode::new(a.k(), words)
    }

    /// One `<state> <label>` line per state; the root's empty label is `-`.
    pub fn labels_text(&self) -> String {
        let mut out = String::new();
        for (q, v) in self.labels.iter().enumerate() {
            let label = if v.is_empty() { "-".to_string() } else { digits(v) };
            out.push_str(&format!("{q} {label}\n"));
        }
        out
    }
}
