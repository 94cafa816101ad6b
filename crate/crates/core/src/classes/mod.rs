//! Quasi-Eulerian and quasi-one-cluster automata: detection and
//! specialized reset-word synthesis.

mod cluster;
mod eulerian;

pub use cluster::{
    cycle_dimension, letter_clusters, quasi_one_cluster_reset, Cluster, ClusterStructure, OneClusterRun,
};
pub use eulerian::{
    detect_quasi_eulerian, quasi_eulerian_reset, suffix_expansion, EulerianRun, QuasiEulerianWitness,
    EULERIAN_CANDIDATE_BUDGET,
};

use crate::automaton::{Automaton, StateSet, Word};
use crate::error::{Error, Result};

/// The sink component as its own automaton, for inputs that are not
/// strongly connected.
pub(crate) struct SinkRoute {
    /// Sub-state `i` is the `i`-th smallest state of the sink.
    pub sub: Automaton,
    /// A word with `Q.v ⊆ S`.
    pub v: Word,
}

/// `None` when `a` is strongly connected.
pub(crate) fn route_to_sink(a: &Automaton) -> Result<Option<SinkRoute>> {
    if a.is_strongly_connected() {
        return Ok(None);
    }
    let sink = a.sink_component().ok_or(Error::NotSynchronizing { pair: None })?;
    let states = sink.to_vec();
    let mut pos = vec![usize::MAX; a.n()];
    for (i, &q) in states.iter().enumerate() {
        pos[q] = i;
    }
    let letters: Vec<Vec<usize>> = (0..a.k())
        .map(|l| states.iter().map(|&q| pos[a.step(q, l)]).collect())
        .collect();
    let sub = Automaton::from_letters(states.len(), &letters)?;

    let dist = a.distances_to(&sink);
    let mut image = StateSet::full(a.n());
    let mut v = Word::empty();
    loop {
        let outside = image.iter().find(|&q| !sink.contains(q));
        let Some(p) = outside else { break };
        // walk a shortest path from p into the sink, smallest letter first
        let mut cur = p;
        let mut u = Word::empty();
        while let Some(d) = dist[cur].filter(|&d| d > 0) {
            let l = (0..a.k())
                .find(|&l| dist[a.step(cur, l)] == Some(d - 1))
                .expect("BFS distances are consistent");
            u.push(l);
            cur = a.step(cur, l);
        }
        if dist[p].is_none() {
            return Err(Error::NotSynchronizing { pair: None });
        }
        image = a.apply_word(&image, &u)?;
        v.append(&u);
    }
    Ok(Some(SinkRoute { sub, v }))
}
