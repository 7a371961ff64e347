//! Uniform rooted labelled trees: a uniform Prüfer word of length `n - 2`
//! decodes to a uniform labelled tree, and an independent uniform root
//! makes the rooted tree uniform over all `n^{n-1}` of them.

use rand::Rng;

use super::rng::replicate_rng;
use super::tree::{Tree, TreeStats};
use crate::error::{Error, Result};

/// Linear-time Prüfer decoding.
pub fn prufer_decode(n: usize, code: &[usize]) -> Result<Vec<(usize, usize)>> {
    if n < 2 || code.len() != n - 2 {
        return Err(Error::InvalidArgument(format!(
            "Prüfer code for {n} vertices must have length {}",
            n.saturating_sub(2)
        )));
    }
    if let Some(&bad) = code.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidArgument(format!("label {bad} out of range")));
    }
    let mut degree = vec![1u32; n];
    for &v in code {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = degree.iter().position(|&d| d == 1).unwrap_or(0);
    let mut leaf = ptr;
    for &v in code {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    Ok(edges)
}

/// Uniform rooted labelled tree on `n ≥ 1` vertices.
pub fn labelled_tree_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Tree> {
    match n {
        0 => Err(Error::InvalidArgument(
            "a tree needs at least one vertex".into(),
        )),
        1 => Tree::from_edges(1, &[], 0),
        _ => {
            let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
            let edges = prufer_decode(n, &code)?;
            let root = rng.random_range(0..n);
            Tree::from_edges(n, &edges, root)
        }
    }
}

pub fn sample_labelled_tree(n: usize, seed: u64) -> Result<TreeStats> {
    let mut rng = replicate_rng(seed, 0);
    Ok(labelled_tree_with(&mut rng, n)?.stats())
}
