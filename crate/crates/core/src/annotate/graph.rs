//! Occlusion order graph: layering, cycle detection and grasp order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ooam::Ooam;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layer {
    /// Not occluded by anything; graspable now.
    Top,
    /// Occluded, and occludes something else.
    Intermediate,
    /// Occluded, occludes nothing.
    Bottom,
}

/// Directed occlusion graph; an edge `(i, j)` means `i` occludes `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Oodag {
    pub nodes: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub is_cyclic: bool,
    pub layers: BTreeMap<u32, Layer>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("occlusion graph contains a directed cycle")]
pub struct CyclicGraph;

/// Graph over nodes `0..M` following the OOAM's own indexing.
pub fn build_oodag(ooam: &Ooam) -> Oodag {
    let ids: Vec<u32> = (0..ooam.size() as u32).collect();
    build_oodag_with_ids(ooam, &ids)
}

/// Graph whose node `k` is labelled `ids[k]`.
pub fn build_oodag_with_ids(ooam: &Ooam, ids: &[u32]) -> Oodag {
    assert_eq!(ids.len(), ooam.size(), "one id per OOAM row");
    let edges: Vec<(u32, u32)> = ooam.edges().map(|(i, j)| (ids[i], ids[j])).collect();
    let mut g = Oodag {
        nodes: ids.to_vec(),
        edges,
        is_cyclic: false,
        layers: BTreeMap::new(),
    };
    g.is_cyclic = has_cycle(&g);
    g.layers = classify_layers(&g);
    g
}

fn adjacency(g: &Oodag) -> (BTreeMap<u32, usize>, Vec<Vec<usize>>) {
    let index: BTreeMap<u32, usize> = g.nodes.iter().enumerate().map(|(k, &id)| (id, k)).collect();
    let mut adj = vec![Vec::new(); g.nodes.len()];
    for (a, b) in &g.edges {
        adj[index[a]].push(index[b]);
    }
    (index, adj)
}

/// Iterative three-color depth-first search for a back edge.
fn has_cycle(g: &Oodag) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Grey,
        Black,
    }
    let (_, adj) = adjacency(g);
    let mut color = vec![Color::White; adj.len()];
    for start in 0..adj.len() {
        if color[start] != Color::White {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        color[start] = Color::Grey;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&succ) = adj[node].get(*next) {
                *next += 1;
                match color[succ] {
                    Color::Grey => return true,
                    Color::White => {
                        color[succ] = Color::Grey;
                        stack.push((succ, 0));
                    }
                    Color::Black => {}
                }
            } else {
                color[node] = Color::Black;
                stack.pop();
            }
        }
    }
    false
}

pub fn classify_layers(g: &Oodag) -> BTreeMap<u32, Layer> {
    let mut indeg: BTreeMap<u32, usize> = g.nodes.iter().map(|&n| (n, 0)).collect();
    let mut outdeg = indeg.clone();
    for (a, b) in &g.edges {
        *outdeg.get_mut(a).expect("edge source is a node") += 1;
        *indeg.get_mut(b).expect("edge target is a node") += 1;
    }
    g.nodes
        .iter()
        .map(|&n| {
            let layer = match (indeg[&n], outdeg[&n]) {
                (0, _) => Layer::Top,
                (_, 0) => Layer::Bottom,
                _ => Layer::Intermediate,
            };
            (n, layer)
        })
        .collect()
}

/// Topological order (occluders before occludees), smallest id first among
/// ready nodes. Fails on a cyclic graph.
pub fn grasp_order(g: &Oodag) -> Result<Vec<u32>, CyclicGraph> {
    let (_, adj) = adjacency(g);
    let mut indeg = vec![0usize; adj.len()];
    for succs in &adj {
        for &s in succs {
            indeg[s] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<(u32, usize)>> = indeg
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(k, _)| Reverse((g.nodes[k], k)))
        .collect();
    let mut order = Vec::with_capacity(adj.len());
    while let Some(Reverse((id, k))) = ready.pop() {
        order.push(id);
        for &s in &adj[k] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                ready.push(Reverse((g.nodes[s], s)));
            }
        }
    }
    if order.len() == adj.len() {
        Ok(order)
    } else {
        Err(CyclicGraph)
    }
}
