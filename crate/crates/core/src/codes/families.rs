use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::prefix::{Decoder, PrefixCode};
use crate::automaton::{Automaton, Word};
use crate::error::{Error, Result};

/// The Černý automaton: `a` is the cycle `i → i+1 mod n`, `b` sends `n−1`
/// to `0` and fixes every other state.
pub fn gen_cerny(n: usize) -> Result<Automaton> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "the Černý family starts at n = 2, got {n}"
        )));
    }
    let a: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let b: Vec<usize> = (0..n).map(|i| if i == n - 1 { 0 } else { i }).collect();
    Automaton::from_letters(n, &[a, b])
}

/// `⌈n/(k+1)⌉ − 1`.
pub fn xnk_ell(n: usize, k: usize) -> usize {
    n.div_ceil(k + 1) - 1
}

fn check_xnk(n: usize, k: usize) -> Result<()> {
    if k < 3 || n < k + 2 {
        return Err(Error::Precondition(format!(
            "X_{{n,k}} needs k ≥ 3 and n ≥ k + 2, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// The `k`-ary decoder `X_{n,k}` with reset threshold `2⌈n/(k+1)⌉`.
///
/// Letter `j` (0-based) stands for `a_{j+1}`. With `ℓ = ⌈n/(k+1)⌉ − 1`, for
/// `i < ℓ` the state `(k+1)i` has children `(k+1)i + j` under `a_j`, and
/// `(k+1)i + 1` continues under `a_1` to `(k+1)(i+1)`; from `(k+1)ℓ` an
/// `a_1`-chain runs to `n − 1`. Every other transition goes to `0`.
pub fn gen_xnk(n: usize, k: usize) -> Result<Automaton> {
    check_xnk(n, k)?;
    let ell = xnk_ell(n, k);
    let mut letters = vec![vec![0usize; n]; k];
    for i in 0..ell {
        let base = (k + 1) * i;
        for j in 1..=k {
            letters[j - 1][base] = base + j;
        }
        letters[0][base + 1] = base + k + 1;
    }
    for i in (k + 1) * ell..n - 1 {
        letters[0][i] = i + 1;
    }
    Automaton::from_letters(n, &letters)
}

/// `a_k a_1^{2ℓ} a_k`, a reset word of `X_{n,k}` of length `2ℓ + 2`.
pub fn xnk_reset_word(n: usize, k: usize) -> Result<Word> {
    check_xnk(n, k)?;
    let mut w = Word::letter(k - 1);
    w.append(&Word::power(0, 2 * xnk_ell(n, k)));
    w.push(k - 1);
    Ok(w)
}

/// Every transition drawn uniformly and independently, row by row.
pub fn gen_random_dfa(n: usize, k: usize, seed: u64) -> Result<Automaton> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition("random automata need n, k ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = (0..n * k).map(|_| rng.gen_range(0..n)).collect();
    Automaton::new(n, k, delta)
}

/// A random automaton in which every state has exactly `k` incoming
/// transitions: the multiset of targets, each state `k` times, is shuffled
/// onto the `n·k` transitions.
pub fn gen_random_eulerian(n: usize, k: usize, seed: u64) -> Result<Automaton> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition("random automata need n, k ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta: Vec<usize> = (0..n).flat_map(|q| std::iter::repeat_n(q, k)).collect();
    delta.shuffle(&mut rng);
    Automaton::new(n, k, delta)
}

/// A uniformly random full binary tree with `n` internal nodes, as the
/// lexicographically sorted codewords of its leaves.
///
/// Rémy's growth process: each round picks one of the `2i + 1` nodes
/// uniformly, puts a new internal node in its place and hangs the picked
/// subtree and a fresh leaf below it, on a uniformly chosen side.
pub fn random_binary_code<R: Rng>(n: usize, rng: &mut R) -> Result<PrefixCode> {
    if n == 0 {
        return Err(Error::Precondition("a decoder has at least one state".into()));
    }
    // children[v] = Some((left, right)) for internal nodes
    let mut children: Vec<Option<(usize, usize)>> = vec![None];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut root = 0;
    for _ in 0..n {
        let x = rng.gen_range(0..children.len());
        let leaf = children.len();
        children.push(None);
        parent.push(None);
        let node = children.len();
        let pair = if rng.gen::<bool>() { (x, leaf) } else { (leaf, x) };
        children.push(Some(pair));
        parent.push(parent[x]);
        match parent[x] {
            None => root = node,
            Some(p) => {
                let (l, r) = children[p].expect("parents are internal");
                children[p] = Some(if l == x { (node, r) } else { (l, node) });
            }
        }
        parent[x] = Some(node);
        parent[leaf] = Some(node);
    }
    let mut words = Vec::new();
    let mut stack = vec![(root, Word::empty())];
    while let Some((v, w)) = stack.pop() {
        match children[v] {
            None => words.push(w),
            Some((l, r)) => {
                stack.push((r, w.with_letter(1)));
                stack.push((l, w.with_letter(0)));
            }
        }
    }
    PrefixCode::new(2, words)
}

/// A uniformly random `n`-state binary decoder.
pub fn gen_random_decoder(n: usize, seed: u64) -> Result<Decoder> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Decoder::from_code(&random_binary_code(n, &mut rng)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cerny_four() {
        let a = gen_cerny(4).unwrap();
        assert_eq!(a.letter_map(0), vec![1, 2, 3, 0]);
        assert_eq!(a.letter_map(1), vec![0, 1, 2, 0]);
        assert!(gen_cerny(1).is_err());
    }

    #[test]
    fn x73_shape() {
        let a = gen_xnk(7, 3).unwrap();
        assert_eq!(xnk_ell(7, 3), 1);
        assert_eq!(a.letter_map(0), vec![1, 4, 0, 0, 5, 6, 0]);
        assert_eq!(a.letter_map(1), vec![2, 0, 0, 0, 0, 0, 0]);
        assert_eq!(a.letter_map(2), vec![3, 0, 0, 0, 0, 0, 0]);
        let w = xnk_reset_word(7, 3).unwrap();
        assert_eq!(w, Word::from_letters([2, 0, 0, 2]));
        assert!(a.is_reset_word(&w).unwrap());
        assert!(Decoder::from_automaton(&a).is_some());
        assert!(gen_xnk(4, 3).is_err());
    }

    #[test]
    fn random_dfa_is_reproducible() {
        let a = gen_random_dfa(6, 2, 7).unwrap();
        assert_eq!(a, gen_random_dfa(6, 2, 7).unwrap());
        assert_ne!(a, gen_random_dfa(6, 2, 8).unwrap());
        assert_eq!(gen_random_dfa(1, 3, 0).unwrap().table(), &[0, 0, 0]);
    }

    #[test]
    fn eulerian_in_degrees() {
        let a = gen_random_eulerian(7, 3, 11).unwrap();
        let mut indeg = vec![0; 7];
        for &t in a.table() {
            indeg[t] += 1;
        }
        assert!(indeg.iter().all(|&d| d == 3));
    }

    #[test]
    fn random_decoders_have_n_states() {
        for n in 1..20 {
            let d = gen_random_decoder(n, n as u64).unwrap();
            assert_eq!(d.n(), n);
            let code = d.code().unwrap();
            assert_eq!(code.len(), n + 1);
        }
        assert_eq!(gen_random_decoder(1, 3).unwrap().code().unwrap().to_text(), "2\n0\n1\n");
    }
}
