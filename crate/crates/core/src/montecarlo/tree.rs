//! Rooted trees in compressed adjacency form, with exact height and
//! diameter.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Height and diameter of one sampled finite tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub n_vertices: usize,
    pub height: u32,
    pub diameter: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    root: usize,
    offsets: Vec<u32>,
    adjacency: Vec<u32>,
}

/// Outcome of the two-pass farthest-vertex search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diameter {
    pub diameter: u32,
    /// A pair realising the diameter, deeper endpoint first.
    pub endpoints: (usize, usize),
    /// Depths of `endpoints` from the root, deeper first.
    pub endpoint_depths: (u32, u32),
    pub height: u32,
}

impl Diameter {
    /// Whether the deeper endpoint of the diameter sits at the tree height.
    pub fn endpoint_attains_height(&self) -> bool {
        self.endpoint_depths.0 == self.height
    }
}

impl Tree {
    /// Build from an undirected edge list on vertices `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotATree("empty vertex set".into()));
        }
        if root >= n {
            return Err(Error::NotATree(format!(
                "root {root} out of range for {n} vertices"
            )));
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{} edges for {n} vertices",
                edges.len()
            )));
        }
        let mut degree = vec![0u32; n + 1];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::NotATree(format!("bad edge ({u}, {v})")));
            }
            degree[u + 1] += 1;
            degree[v + 1] += 1;
        }
        for i in 1..=n {
            degree[i] += degree[i - 1];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut adjacency = vec![0u32; 2 * (n - 1)];
        for &(u, v) in edges {
            adjacency[fill[u] as usize] = v as u32;
            fill[u] += 1;
            adjacency[fill[v] as usize] = u as u32;
            fill[v] += 1;
        }
        let tree = Self {
            root,
            offsets,
            adjacency,
        };
        let (depths, _) = tree.bfs(root);
        if depths.iter().any(|&d| d == u32::MAX) {
            return Err(Error::NotATree("graph is disconnected".into()));
        }
        Ok(tree)
    }

    /// Build from adjacency lists; every edge must appear in both lists.
    pub fn from_adjacency(adjacency: &[Vec<usize>], root: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for (u, list) in adjacency.iter().enumerate() {
            for &v in list {
                if v >= adjacency.len() || !adjacency[v].contains(&u) {
                    return Err(Error::NotATree(format!("edge ({u}, {v}) is not symmetric")));
                }
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Self::from_edges(adjacency.len(), &edges, root)
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let (a, b) = (self.offsets[v] as usize, self.offsets[v + 1] as usize);
        self.adjacency[a..b].iter().map(|&w| w as usize)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|u| {
                self.neighbors(u)
                    .filter(move |&v| u < v)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    /// Distances from `source` (`u32::MAX` when unreachable) and the first
    /// vertex found at maximal distance.
    pub fn bfs(&self, source: usize) -> (Vec<u32>, usize) {
        let n = self.len();
        let mut depth = vec![u32::MAX; n];
        let mut queue = VecDeque::with_capacity(n);
        depth[source] = 0;
        queue.push_back(source);
        let mut far = source;
        while let Some(u) = queue.pop_front() {
            if depth[u] > depth[far] {
                far = u;
            }
            for v in self.neighbors(u) {
                if depth[v] == u32::MAX {
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (depth, far)
    }

    pub fn height(&self) -> u32 {
        let (depth, far) = self.bfs(self.root);
        depth[far]
    }

    pub fn stats(&self) -> TreeStats {
        let d = tree_diameter_double_bfs(self);
        TreeStats {
            n_vertices: self.len(),
            height: d.height,
            diameter: d.diameter,
        }
    }
}

/// Exact diameter by two farthest-vertex passes from vertex 0, plus the
/// root depths of the two endpoints found.
pub fn tree_diameter_double_bfs(tree: &Tree) -> Diameter {
    let (_, u) = tree.bfs(0);
    let (from_u, v) = tree.bfs(u);
    let (root_depth, deepest) = tree.bfs(tree.root());
    let (du, dv) = (root_depth[u], root_depth[v]);
    let (endpoints, endpoint_depths) = if du >= dv {
        ((u, v), (du, dv))
    } else {
        ((v, u), (dv, du))
    };
    let out = Diameter {
        diameter: from_u[v],
        endpoints,
        endpoint_depths,
        height: root_depth[deepest],
    };
    debug_assert!(out.endpoint_attains_height());
    out
}
