//! Complete deterministic automata, words, and dense state sets.
//!
//! States are `0..n` and letters are `0..k`. Examples written with 1-based
//! state names (as is common in the literature) shift down by one here; the
//! text format is 0-based throughout.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Largest state count accepted by the library.
pub const MAX_STATES: usize = 1 << 16;
/// Largest transition table accepted by the text parser.
const MAX_TABLE: usize = 1 << 24;

/// A finite word, stored as letter indices.
///
/// Words order by length first and lexicographically within a length
/// (shortlex), which is the enumeration order used everywhere in the crate.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(a: usize) -> Self {
        Word(vec![a])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = usize>) -> Self {
        Word(letters.into_iter().collect())
    }

    /// `a^times`
    pub fn power(a: usize, times: usize) -> Self {
        Word(vec![a; times])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, a: usize) {
        self.0.push(a);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn append(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn with_letter(&self, a: usize) -> Word {
        let mut w = self.clone();
        w.push(a);
        w
    }

    /// Proper suffixes, shortest first (always includes `ε` for a non-empty word).
    pub fn proper_suffixes(&self) -> impl Iterator<Item = Word> + '_ {
        (1..=self.len()).rev().map(move |i| Word(self.0[i..].to_vec()))
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }

    /// Space-separated indices, the machine-readable form. Empty word is `-`.
    pub fn to_machine(&self) -> String {
        if self.0.is_empty() {
            return "-".to_string();
        }
        self.0.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
    }

    /// `a<j>` tokens joined without separators for alphabets of at most ten
    /// letters, space-separated indices otherwise. Empty word is `ε`.
    pub fn to_human(&self, k: usize) -> String {
        if self.0.is_empty() {
            return "ε".to_string();
        }
        if k <= 10 {
            self.0.iter().map(|a| format!("a{a}")).collect()
        } else {
            self.to_machine()
        }
    }

    /// Parses the machine form produced by [`Word::to_machine`].
    pub fn parse_machine(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Word::empty());
        }
        s.split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::parse(1, format!("bad letter `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_machine())
    }
}

impl FromIterator<usize> for Word {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// All words of length at most `d` over `k` letters, in shortlex order.
pub fn words_up_to(k: usize, d: usize) -> impl Iterator<Item = Word> {
    (0..=d).flat_map(move |len| words_of_length(k, len))
}

/// All words of exactly `len` letters in lexicographic order.
pub fn words_of_length(k: usize, len: usize) -> impl Iterator<Item = Word> {
    let mut cur: Option<Vec<usize>> = if k == 0 && len > 0 { None } else { Some(vec![0; len]) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        // odometer increment
        let next = {
            let mut v = out.clone();
            let mut i = v.len();
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                v[i] += 1;
                if v[i] < k {
                    break Some(v);
                }
                v[i] = 0;
            }
        };
        cur = next;
        Some(Word(out))
    })
}

/// A subset of `0..n` backed by a fixed-width bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        StateSet(b)
    }

    pub fn singleton(n: usize, q: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(q);
        s
    }

    pub fn from_states(n: usize, states: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for q in states {
            s.insert(q);
        }
        s
    }

    /// Size of the ambient state range.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, q: usize) {
        self.0.insert(q);
    }

    pub fn remove(&mut self, q: usize) {
        self.0.set(q, false);
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.contains(q)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        StateSet(&self.0 & &other.0)
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|q| q.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A complete DFA `(Q, Σ, δ)` with `Q = 0..n` and `Σ = 0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automaton {
    n: usize,
    k: usize,
    delta: Vec<usize>,
}

impl Automaton {
    /// Builds an automaton from a row-major table (`delta[q * k + a]`).
    pub fn new(n: usize, k: usize, delta: Vec<usize>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidAutomaton(format!(
                "need n >= 1 and k >= 1, got n={n}, k={k}"
            )));
        }
        if n > MAX_STATES {
            return Err(Error::InvalidAutomaton(format!(
                "n={n} exceeds the cap of {MAX_STATES} states"
            )));
        }
        if delta.len() != n * k {
            return Err(Error::LengthMismatch {
                expected: n * k,
                got: delta.len(),
            });
        }
        if let Some(pos) = delta.iter().position(|&t| t >= n) {
            return Err(Error::InvalidAutomaton(format!(
                "transition ({}, {}) -> {} is out of range",
                pos / k,
                pos % k,
                delta[pos]
            )));
        }
        Ok(Automaton { n, k, delta })
    }

    /// Builds an automaton from one transformation per letter (`letters[a][q] = δ(q, a)`).
    pub fn from_letters(n: usize, letters: &[Vec<usize>]) -> Result<Self> {
        let k = letters.len();
        let mut delta = vec![0; n * k];
        for (a, map) in letters.iter().enumerate() {
            if map.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: map.len(),
                });
            }
            for (q, &t) in map.iter().enumerate() {
                delta[q * k + a] = t;
            }
        }
        Self::new(n, k, delta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.k + a]
    }

    pub fn table(&self) -> &[usize] {
        &self.delta
    }

    /// The transformation of `Q` induced by letter `a`.
    pub fn letter_map(&self, a: usize) -> Vec<usize> {
        (0..self.n).map(|q| self.step(q, a)).collect()
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|&&a| a >= self.k) {
            Some(&letter) => Err(Error::InvalidWord { letter, k: self.k }),
            None => Ok(()),
        }
    }

    /// `δ(q, w)` without validating `w`.
    #[inline]
    pub fn run(&self, q: usize, w: &Word) -> usize {
        w.letters().iter().fold(q, |s, &a| self.step(s, a))
    }

    /// The action of `w` on every state.
    pub fn word_map(&self, w: &Word) -> Result<Vec<usize>> {
        self.check_word(w)?;
        Ok((0..self.n).map(|q| self.run(q, w)).collect())
    }

    /// `S.w`
    pub fn apply_word(&self, s: &StateSet, w: &Word) -> Result<StateSet> {
        self.check_word(w)?;
        Ok(StateSet::from_states(self.n, s.iter().map(|q| self.run(q, w))))
    }

    /// `S.w⁻¹ = { q : δ(q, w) ∈ S }`
    pub fn preimage(&self, s: &StateSet, w: &Word) -> Result<StateSet> {
        self.check_word(w)?;
        Ok(StateSet::from_states(
            self.n,
            (0..self.n).filter(|&q| s.contains(self.run(q, w))),
        ))
    }

    /// `|Q.w|`
    pub fn rank_of_word(&self, w: &Word) -> Result<usize> {
        Ok(self.apply_word(&StateSet::full(self.n), w)?.len())
    }

    pub fn is_reset_word(&self, w: &Word) -> Result<bool> {
        Ok(self.rank_of_word(w)? == 1)
    }

    /// True iff some word has rank one. Uses the pairwise criterion: every
    /// pair of states must be compressible.
    pub fn is_synchronizing(&self) -> bool {
        self.incompressible_pair().is_none()
    }

    /// Some pair of distinct states that no word merges, if one exists.
    pub fn incompressible_pair(&self) -> Option<(usize, usize)> {
        if self.n == 1 {
            return None;
        }
        let pg = PairGraph::new(self);
        for p in 0..self.n {
            for q in p + 1..self.n {
                if pg.distance(p, q).is_none() {
                    return Some((p, q));
                }
            }
        }
        None
    }

    fn scc_components(&self) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.n, self.n * self.k);
        let nodes: Vec<_> = (0..self.n).map(|_| g.add_node(())).collect();
        for q in 0..self.n {
            let mut seen = Vec::with_capacity(self.k);
            for a in 0..self.k {
                let t = self.step(q, a);
                if !seen.contains(&t) {
                    seen.push(t);
                    g.add_edge(nodes[q], nodes[t], ());
                }
            }
        }
        tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Strongly connected components with no transition leaving them,
    /// ordered by their smallest state.
    pub fn sink_components(&self) -> SinkComponents {
        let comps = self.scc_components();
        let mut owner = vec![0usize; self.n];
        for (i, c) in comps.iter().enumerate() {
            for &q in c {
                owner[q] = i;
            }
        }
        let mut sinks: Vec<StateSet> = comps
            .iter()
            .enumerate()
            .filter(|(i, c)| c.iter().all(|&q| (0..self.k).all(|a| owner[self.step(q, a)] == *i)))
            .map(|(_, c)| StateSet::from_states(self.n, c.iter().copied()))
            .collect();
        sinks.sort_by_key(|s| s.first());
        SinkComponents {
            unique: sinks.len() == 1,
            components: sinks,
        }
    }

    /// The sink component when it is unique.
    pub fn sink_component(&self) -> Option<StateSet> {
        let s = self.sink_components();
        if s.unique {
            s.components.into_iter().next()
        } else {
            None
        }
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.scc_components().len() == 1
    }

    /// BFS distances from every state to the nearest state of `target`.
    pub fn distances_to(&self, target: &StateSet) -> Vec<Option<usize>> {
        let inv = self.inverse();
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for q in target.iter() {
            dist[q] = Some(0);
            queue.push_back(q);
        }
        while let Some(s) = queue.pop_front() {
            let ds = dist[s].unwrap();
            for a in 0..self.k {
                for &p in &inv[a][s] {
                    if dist[p].is_none() {
                        dist[p] = Some(ds + 1);
                        queue.push_back(p);
                    }
                }
            }
        }
        dist
    }

    /// `inv[a][s]` lists the states `p` with `δ(p, a) = s`, ascending.
    pub fn inverse(&self) -> Vec<Vec<Vec<usize>>> {
        let mut inv = vec![vec![Vec::new(); self.n]; self.k];
        for q in 0..self.n {
            for a in 0..self.k {
                inv[a][self.step(q, a)].push(q);
            }
        }
        inv
    }

    /// Minimum rank over single letters, with the first letter attaining it.
    pub fn min_letter_rank(&self) -> (usize, usize) {
        (0..self.k)
            .map(|a| {
                (
                    StateSet::from_states(self.n, (0..self.n).map(|q| self.step(q, a))).len(),
                    a,
                )
            })
            .min()
            .unwrap()
    }

    /// Hex SHA-256 of the canonical text serialization.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    /// Serializes to the text format: a header line `n k`, then one line per
    /// state listing its `k` successors.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for q in 0..self.n {
            let row: Vec<String> = (0..self.k).map(|a| self.step(q, a).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text format. Lines whose first non-blank character is `#`
    /// and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `n k` header"))?;
        let nums = parse_usizes(hline, header)?;
        let [n, k] = nums[..] else {
            return Err(Error::parse(
                hline,
                format!("header must have two fields, found {}", nums.len()),
            ));
        };
        if n == 0 || k == 0 {
            return Err(Error::parse(hline, "n and k must be positive"));
        }
        if n > MAX_STATES || n.saturating_mul(k) > MAX_TABLE {
            return Err(Error::parse(hline, format!("table {n}x{k} exceeds the size cap")));
        }

        let mut delta = Vec::new();
        for q in 0..n {
            let (lno, line) = lines
                .next()
                .ok_or_else(|| Error::parse(hline, format!("expected {n} rows, found {q}")))?;
            let row = parse_usizes(lno, line)?;
            if row.len() != k {
                return Err(Error::parse(lno, format!("expected {k} entries, found {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= n) {
                return Err(Error::parse(lno, format!("state {bad} out of range 0..{n}")));
            }
            delta.extend(row);
        }
        if let Some((lno, _)) = lines.next() {
            return Err(Error::parse(lno, "trailing data after the transition table"));
        }
        Automaton::new(n, k, delta)
    }

    /// Graphviz rendering; parallel edges are merged into one labeled edge.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
        for q in 0..self.n {
            let mut targets: Vec<(usize, Vec<usize>)> = Vec::new();
            for a in 0..self.k {
                let t = self.step(q, a);
                match targets.iter_mut().find(|(s, _)| *s == t) {
                    Some((_, ls)) => ls.push(a),
                    None => targets.push((t, vec![a])),
                }
            }
            for (t, ls) in targets {
                let label: Vec<String> = ls.iter().map(|a| format!("a{a}")).collect();
                out.push_str(&format!("  {q} -> {t} [label=\"{}\"];\n", label.join(",")));
            }
        }
        out.push_str("}\n");
        out
    }
}

impl FromStr for Automaton {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Automaton::parse(s)
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_usizes(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| Error::parse(line_no, format!("`{t}`: {e}")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkComponents {
    pub components: Vec<StateSet>,
    pub unique: bool,
}

/// Shortest merging words for all pairs of states.
///
/// Distances are computed by a backward BFS from the diagonal; the stored
/// letter for each pair is the smallest one on a shortest path, so
/// [`PairGraph::merging_word`] yields the shortlex-minimal shortest word.
#[derive(Debug, Clone)]
pub struct PairGraph<'a> {
    a: &'a Automaton,
    dist: Vec<u32>,
}

const UNREACHED: u32 = u32::MAX;

impl<'a> PairGraph<'a> {
    pub fn new(a: &'a Automaton) -> Self {
        let n = a.n;
        let idx = |p: usize, q: usize| if p < q { p * n + q } else { q * n + p };
        let mut dist = vec![UNREACHED; n * n];
        let inv = a.inverse();
        let mut queue = VecDeque::new();
        for s in 0..n {
            dist[s * n + s] = 0;
        }
        // level 1: pairs merged by one letter
        for s in 0..n {
            for ia in inv.iter() {
                let pre = &ia[s];
                for i in 0..pre.len() {
                    for j in i + 1..pre.len() {
                        let e = idx(pre[i], pre[j]);
                        if dist[e] == UNREACHED {
                            dist[e] = 1;
                            queue.push_back((pre[i].min(pre[j]), pre[i].max(pre[j])));
                        }
                    }
                }
            }
        }
        while let Some((x, y)) = queue.pop_front() {
            let dxy = dist[x * n + y];
            for ia in inv.iter() {
                for &p in &ia[x] {
                    for &q in &ia[y] {
                        if p == q {
                            continue;
                        }
                        let e = idx(p, q);
                        if dist[e] == UNREACHED {
                            dist[e] = dxy + 1;
                            queue.push_back((p.min(q), p.max(q)));
                        }
                    }
                }
            }
        }
        PairGraph { a, dist }
    }

    /// Length of a shortest word merging `p` and `q`; `Some(0)` when equal.
    pub fn distance(&self, p: usize, q: usize) -> Option<usize> {
        let d = self.dist[p.min(q) * self.a.n + p.max(q)];
        (d != UNREACHED).then_some(d as usize)
    }

    /// The shortlex-minimal shortest word merging `p` and `q`.
    pub fn merging_word(&self, p: usize, q: usize) -> Option<Word> {
        let mut left = self.distance(p, q)?;
        let (mut x, mut y) = (p, q);
        let mut w = Word::empty();
        while left > 0 {
            let a = (0..self.a.k)
                .find(|&a| self.distance(self.a.step(x, a), self.a.step(y, a)) == Some(left - 1))
                .expect("BFS distances are consistent");
            w.push(a);
            x = self.a.step(x, a);
            y = self.a.step(y, a);
            left -= 1;
        }
        Some(w)
    }

    /// The pair inside `s` with the smallest merging distance (ties to the
    /// lexicographically smallest pair), or `None` if `|s| < 2` or no pair
    /// of `s` is compressible.
    pub fn closest_pair_in(&self, s: &StateSet) -> Option<(usize, usize, usize)> {
        let states = s.to_vec();
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..states.len() {
            for j in i + 1..states.len() {
                if let Some(d) = self.distance(states[i], states[j]) {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, states[i], states[j]));
                    }
                }
            }
        }
        best
    }

    /// Largest finite pairwise distance, or `None` if some pair is incompressible.
    pub fn max_distance(&self) -> Option<usize> {
        let n = self.a.n;
        let mut m = 0;
        for p in 0..n {
            for q in p + 1..n {
                m = m.max(self.distance(p, q)?);
            }
        }
        Some(m)
    }
}

/// Distinct actions of the words of `Σ^{≤d}` on the given states.
///
/// Each action is represented by its shortlex-smallest word. Only words
/// whose action is new are extended, since extensions of action-equivalent
/// words are action-equivalent. `cap` bounds the number of actions kept.
pub fn distinct_actions(a: &Automaton, states: &[usize], d: usize, cap: usize) -> Result<Vec<(Word, Vec<usize>)>> {
    use std::collections::HashSet;
    let start: Vec<usize> = states.to_vec();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(start.clone());
    let mut out = vec![(Word::empty(), start)];
    let mut frontier = vec![0usize];
    for _ in 0..d {
        let mut next = Vec::new();
        for &i in &frontier {
            for letter in 0..a.k() {
                let img: Vec<usize> = out[i].1.iter().map(|&q| a.step(q, letter)).collect();
                if seen.insert(img.clone()) {
                    if out.len() >= cap {
                        return Err(Error::Budget(format!("more than {cap} distinct word actions")));
                    }
                    let w = out[i].0.with_letter(letter);
                    next.push(out.len());
                    out.push((w, img));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cerny4() -> Automaton {
        // a: cycle, b: 3 -> 0, rest fixed (0-based form of the 4-state Černý automaton)
        Automaton::from_letters(4, &[vec![1, 2, 3, 0], vec![0, 1, 2, 0]]).unwrap()
    }

    fn w(s: &str) -> Word {
        // 'a' -> 0, 'b' -> 1
        s.chars().map(|c| (c as u8 - b'a') as usize).collect()
    }

    #[test]
    fn cerny4_known_reset_word() {
        let c = cerny4();
        let word = w("baaabaaab");
        let img = c.apply_word(&StateSet::full(4), &word).unwrap();
        assert_eq!(img.len(), 1);
        assert_eq!(c.rank_of_word(&word).unwrap(), 1);
    }

    #[test]
    fn apply_and_preimage_examples() {
        let c = cerny4();
        let s = StateSet::full(4);
        assert_eq!(c.apply_word(&s, &Word::empty()).unwrap(), s);
        assert_eq!(
            c.apply_word(&StateSet::singleton(4, 3), &w("b")).unwrap(),
            StateSet::singleton(4, 0)
        );
        assert_eq!(
            c.preimage(&StateSet::singleton(4, 0), &w("b")).unwrap(),
            StateSet::from_states(4, [0, 3])
        );
        assert_eq!(
            c.preimage(&StateSet::singleton(4, 1), &w("a")).unwrap(),
            StateSet::singleton(4, 0)
        );
        assert_eq!(c.preimage(&s, &w("abba")).unwrap(), s);
        assert_eq!(c.rank_of_word(&Word::empty()).unwrap(), 4);
        assert_eq!(c.rank_of_word(&w("b")).unwrap(), 3);
    }

    #[test]
    fn invalid_letter_is_rejected() {
        let c = cerny4();
        assert_eq!(
            c.rank_of_word(&Word::letter(2)),
            Err(Error::InvalidWord { letter: 2, k: 2 })
        );
        assert!(c.preimage(&StateSet::full(4), &Word::letter(7)).is_err());
    }

    #[test]
    fn synchronization_examples() {
        assert!(cerny4().is_synchronizing());
        let one = Automaton::new(1, 2, vec![0, 0]).unwrap();
        assert!(one.is_synchronizing());
        let perm = Automaton::from_letters(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!perm.is_synchronizing());
        assert_eq!(perm.incompressible_pair(), Some((0, 1)));
    }

    #[test]
    fn sink_components_examples() {
        let c = cerny4();
        let s = c.sink_components();
        assert!(s.unique);
        assert_eq!(s.components[0], StateSet::full(4));
        assert!(c.is_strongly_connected());

        // two disjoint 2-cycles
        let two = Automaton::from_letters(4, &[vec![1, 0, 3, 2]]).unwrap();
        let s = two.sink_components();
        assert!(!s.unique);
        assert_eq!(s.components.len(), 2);
        assert!(!two.is_strongly_connected());

        // transient state 2 feeding a sink {0, 1}
        let t = Automaton::from_letters(3, &[vec![1, 0, 0]]).unwrap();
        assert_eq!(t.sink_component(), Some(StateSet::from_states(3, [0, 1])));
    }

    #[test]
    fn text_format_roundtrip_and_errors() {
        let c = cerny4();
        let text = c.to_text();
        assert_eq!(text, "4 2\n1 0\n2 1\n3 2\n0 0\n");
        assert_eq!(Automaton::parse(&text).unwrap(), c);
        let commented = "# Černý\n4 2\n# row 0\n1 0\n2 1\n\n3 2\n0 0\n";
        assert_eq!(Automaton::parse(commented).unwrap(), c);

        assert!(matches!(Automaton::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(Automaton::parse("2 1\n0\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            Automaton::parse("2 1\n0\n2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(Automaton::parse("1 1\n0 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(Automaton::parse("1 1\n0\n0\n"), Err(Error::Parse { .. })));
        assert!(matches!(Automaton::parse("0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            Automaton::parse("99999999 99999999\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn dot_merges_parallel_edges() {
        let dot = cerny4().to_dot();
        assert!(dot.contains("3 -> 0 [label=\"a0,a1\"]"));
        assert!(dot.contains("0 -> 0 [label=\"a1\"]"));
    }

    #[test]
    fn shortlex_enumeration() {
        let all: Vec<Word> = words_up_to(2, 2).collect();
        assert_eq!(all.len(), 7);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(all[0], Word::empty());
        assert_eq!(all[3], w("aa"));
        assert_eq!(words_up_to(3, 3).count(), 1 + 3 + 9 + 27);
    }

    #[test]
    fn pair_graph_words_merge() {
        let c = cerny4();
        let pg = PairGraph::new(&c);
        for p in 0..4 {
            for q in p + 1..4 {
                let word = pg.merging_word(p, q).unwrap();
                assert_eq!(word.len(), pg.distance(p, q).unwrap());
                assert_eq!(c.run(p, &word), c.run(q, &word));
            }
        }
        assert_eq!(pg.distance(0, 3), Some(1));
    }

    #[test]
    fn distinct_actions_cover_all_words() {
        let c = cerny4();
        let acts = distinct_actions(&c, &[0, 1, 2, 3], 3, 1000).unwrap();
        for word in words_up_to(2, 3) {
            let m = c.word_map(&word).unwrap();
            let rep = acts.iter().find(|(_, act)| *act == m).expect("action present");
            assert!(rep.0 <= word);
        }
    }
}
