use crate::automaton::{Automaton, Word};
use crate::error::{Error, Result};
use crate::induced::{build_induced, WordSet};
use crate::synthesis::{bounds, greedy_extension, reduce_general, BoundKind, ResetCertificate};

use super::route_to_sink;

/// One connected component of a letter's functional graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    /// Cycle states in letter order, starting from the smallest.
    pub cycle: Vec<usize>,
    /// All states of the cluster, sorted.
    pub states: Vec<usize>,
    /// Largest distance from a state of the cluster to its cycle.
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterStructure {
    pub letter: usize,
    /// Ordered by smallest state.
    pub clusters: Vec<Cluster>,
    /// Distance of every state to its cycle.
    pub heights: Vec<usize>,
    /// Index of the cluster with the largest cycle (ties to the smallest state).
    pub chosen: usize,
    /// Largest height over all clusters.
    pub h: usize,
    /// Number of cycle states outside the chosen cluster.
    pub other_cycle_states: usize,
}

impl ClusterStructure {
    pub fn largest_cycle(&self) -> &[usize] {
        &self.clusters[self.chosen].cycle
    }

    pub fn chosen_height(&self) -> usize {
        self.clusters[self.chosen].height
    }

    pub fn is_one_cluster(&self) -> bool {
        self.clusters.len() == 1
    }
}

/// Decomposes the functional graph of `letter` into clusters.
pub fn letter_clusters(a: &Automaton, letter: usize) -> Result<ClusterStructure> {
    if letter >= a.k() {
        return Err(Error::InvalidWord { letter, k: a.k() });
    }
    let n = a.n();
    let f = a.letter_map(letter);
    // a state is cyclic iff it is its own image under f^n
    let mut on_cycle = vec![false; n];
    for q in 0..n {
        let mut x = q;
        for _ in 0..n {
            x = f[x];
        }
        on_cycle[x] = true;
    }
    let mut cycle_id = vec![usize::MAX; n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for q in 0..n {
        if on_cycle[q] && cycle_id[q] == usize::MAX {
            let mut cyc = vec![q];
            cycle_id[q] = cycles.len();
            let mut x = f[q];
            while x != q {
                cycle_id[x] = cycles.len();
                cyc.push(x);
                x = f[x];
            }
            cycles.push(cyc);
        }
    }
    let mut heights = vec![0; n];
    let mut owner = vec![0; n];
    for q in 0..n {
        let (mut x, mut h) = (q, 0);
        while !on_cycle[x] {
            x = f[x];
            h += 1;
        }
        heights[q] = h;
        owner[q] = cycle_id[x];
    }
    let mut clusters: Vec<Cluster> = cycles
        .into_iter()
        .enumerate()
        .map(|(i, cycle)| {
            let states: Vec<usize> = (0..n).filter(|&q| owner[q] == i).collect();
            let height = states.iter().map(|&q| heights[q]).max().unwrap_or(0);
            Cluster { cycle, states, height }
        })
        .collect();
    clusters.sort_by_key(|c| c.states[0]);
    let chosen = (0..clusters.len())
        .max_by(|&i, &j| clusters[i].cycle.len().cmp(&clusters[j].cycle.len()).then(j.cmp(&i)))
        .expect("a functional graph has a cycle");
    let h = heights.iter().copied().max().unwrap_or(0);
    let other_cycle_states = clusters
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != chosen)
        .map(|(_, c)| c.cycle.len())
        .sum();
    Ok(ClusterStructure {
        letter,
        clusters,
        heights,
        chosen,
        h,
        other_cycle_states,
    })
}

/// The `r` used by the one-cluster bound for a cycle of length `m`: `m`
/// when `m` is prime, otherwise the conservative `min(2, m)`.
pub fn cycle_dimension(m: usize) -> usize {
    let prime = m >= 2 && (2..).take_while(|p| p * p <= m).all(|p| !m.is_multiple_of(p));
    if prime {
        m
    } else {
        m.min(2)
    }
}

#[derive(Debug, Clone)]
pub struct OneClusterRun {
    pub certificate: ResetCertificate,
    pub letter: usize,
    /// Cycle states outside the chosen cluster.
    pub c: usize,
    pub cycle_len: usize,
    pub h: usize,
    pub r: usize,
    /// `DS(β)`, or its cap.
    pub ds: u128,
    /// Set when the input was reduced to its sink component first.
    pub prefix: Option<Word>,
}

/// The first letter with at most `c` cycle states outside its largest cluster.
fn qualifying_letter(a: &Automaton, c: usize) -> Result<ClusterStructure> {
    for l in 0..a.k() {
        let cs = letter_clusters(a, l)?;
        if cs.other_cycle_states <= c {
            return Ok(cs);
        }
    }
    Err(Error::ClassMismatch(format!(
        "no letter has at most {c} cycle states outside one cluster"
    )))
}

fn one_cluster_strongly_connected(a: &Automaton, c: usize) -> Result<OneClusterRun> {
    let n = a.n();
    let cs = qualifying_letter(a, c)?;
    let letter = cs.letter;
    let m = cs.largest_cycle().len();
    let c_eff = cs.other_cycle_states;
    let r = cycle_dimension(m);
    let w1 = WordSet::new((0..m).map(|i| Word::power(letter, cs.h + i)))?;
    let d2 = if c_eff == 0 { n - r + 1 } else { n - 1 };
    let w2 = reduce_general(a, d2)?.word_set();
    let (beta, _) = build_induced(a, &w1, &w2)?.stationary()?;
    let run = greedy_extension(a, &w1, &w2, &beta, &Word::power(letter, cs.h))?;
    let certificate =
        run.certificate
            .recertify(a, BoundKind::QuasiOneCluster, bounds::quasi_one_cluster(c_eff, n, r))?;
    Ok(OneClusterRun {
        certificate,
        letter,
        c: c_eff,
        cycle_len: m,
        h: cs.h,
        r,
        ds: run.ds,
        prefix: None,
    })
}

/// Reset word for an automaton with a letter that has at most `c` cycle
/// states outside its largest cluster.
///
/// Inputs that are not strongly connected are first mapped into the sink
/// component; the bound is then the prefix length plus the bound for the sink.
pub fn quasi_one_cluster_reset(a: &Automaton, c: usize) -> Result<OneClusterRun> {
    if a.n() == 1 {
        let certificate = ResetCertificate::new(a, Word::empty(), BoundKind::Trivial, 0, Vec::new())?;
        return Ok(OneClusterRun {
            certificate,
            letter: 0,
            c: 0,
            cycle_len: 1,
            h: 0,
            r: 1,
            ds: 1,
            prefix: None,
        });
    }
    if let Some(pair) = a.incompressible_pair() {
        return Err(Error::NotSynchronizing { pair: Some(pair) });
    }
    qualifying_letter(a, c)?;
    let Some(route) = route_to_sink(a)? else {
        return one_cluster_strongly_connected(a, c);
    };
    let inner = quasi_one_cluster_reset(&route.sub, c)?;
    let word = route.v.concat(inner.certificate.word());
    let bound = route.v.len() as u128 + inner.certificate.bound();
    let mut steps = vec![route.v.clone()];
    steps.extend(inner.certificate.steps().iter().cloned());
    let certificate = ResetCertificate::new(a, word, BoundKind::QuasiOneCluster, bound, steps)?;
    Ok(OneClusterRun {
        certificate,
        prefix: Some(route.v),
        ..inner
    })
}
