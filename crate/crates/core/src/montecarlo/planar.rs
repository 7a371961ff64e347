//! Uniform rooted planar trees through their contour (Dyck) paths.
//!
//! A uniform arrangement of `n - 1` up-steps and `n` down-steps has exactly
//! one cyclic rotation whose partial sums stay nonnegative until the final
//! step; dropping that final step leaves a uniform Dyck path of length
//! `2(n - 1)`, the contour of a uniform planar tree with `n` vertices.

use rand::seq::SliceRandom;
use rand::Rng;

use super::excursion::scan_height_diameter;
use super::rng::replicate_rng;
use super::tree::{Tree, TreeStats};
use crate::error::{Error, Result};

/// Uniform Dyck path with `n - 1` up-steps (`+1`) and as many down-steps.
pub fn dyck_path_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Vec<i8>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a tree needs at least one vertex".into(),
        ));
    }
    let mut steps: Vec<i8> = std::iter::repeat_n(1, n - 1)
        .chain(std::iter::repeat_n(-1, n))
        .collect();
    steps.shuffle(rng);
    // Rotate to start right after the first minimum of the partial sums.
    let (mut level, mut min_level, mut cut) = (0i64, 0i64, 0usize);
    for (i, &s) in steps.iter().enumerate() {
        level += s as i64;
        if level < min_level {
            min_level = level;
            cut = i + 1;
        }
    }
    let len = steps.len();
    steps.rotate_left(cut % len);
    debug_assert_eq!(steps.last(), Some(&-1));
    steps.pop();
    Ok(steps)
}

/// Contour heights `C_0, …, C_{2(n-1)}`.
pub fn contour(steps: &[i8]) -> Vec<u32> {
    let mut c = Vec::with_capacity(steps.len() + 1);
    let mut level = 0i64;
    c.push(0);
    for &s in steps {
        level += s as i64;
        c.push(level as u32);
    }
    c
}

/// Rebuild the planar tree explored by the contour; vertex 0 is the root
/// and vertices are numbered in depth-first order.
pub fn tree_from_dyck(steps: &[i8]) -> Result<Tree> {
    let n = steps.len() / 2 + 1;
    let mut edges = Vec::with_capacity(n - 1);
    let mut stack = vec![0usize];
    let mut next = 1usize;
    for &s in steps {
        if s > 0 {
            let parent = *stack
                .last()
                .ok_or_else(|| Error::NotATree("path dips below zero".into()))?;
            edges.push((parent, next));
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
            if stack.is_empty() {
                return Err(Error::NotATree("path dips below zero".into()));
            }
        }
    }
    Tree::from_edges(n, &edges, 0)
}

/// Height and diameter read directly off the contour.
pub fn contour_stats(steps: &[i8]) -> TreeStats {
    let c = contour(steps);
    let (_, height, diameter) = scan_height_diameter(&c);
    TreeStats {
        n_vertices: steps.len() / 2 + 1,
        height,
        diameter,
    }
}

pub fn sample_planar_tree(n: usize, seed: u64) -> Result<TreeStats> {
    let mut rng = replicate_rng(seed, 0);
    Ok(contour_stats(&dyck_path_with(&mut rng, n)?))
}
