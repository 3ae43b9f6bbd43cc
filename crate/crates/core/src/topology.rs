//! Directed interaction graphs.
//!
//! An arc `(j, i)` means oscillator `j` influences oscillator `i`. Every
//! in-neighborhood implicitly contains the node itself, so self-loops need
//! not be stored. Rootedness (a node with directed walks to all others,
//! equivalently a directed spanning tree) is the minimal connectivity under
//! which pulse coupling synchronizes; a graph without roots splits into two
//! or more source groups with no incoming arcs, which evolve independently.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Topology {
    n: usize,
    arcs: Vec<(usize, usize)>,
    in_neighbors: Vec<Vec<usize>>,
    components: Vec<Vec<usize>>,
    source_components: Vec<usize>,
}

impl Topology {
    /// Builds a graph on `n` nodes (0-based) from influence arcs
    /// `(from, to)`. Duplicate arcs and explicit self-loops are idempotent.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("a network needs at least one node".into()));
        }
        for &(from, to) in arcs {
            if from >= n {
                return Err(Error::NodeIndex { index: from, n });
            }
            if to >= n {
                return Err(Error::NodeIndex { index: to, n });
            }
        }
        let mut stored: Vec<(usize, usize)> = arcs.to_vec();
        stored.sort_unstable();
        stored.dedup();

        let mut in_neighbors = vec![Vec::new(); n];
        let mut out = vec![Vec::new(); n];
        for i in 0..n {
            in_neighbors[i].push(i);
        }
        for &(from, to) in &stored {
            if from != to {
                in_neighbors[to].push(from);
            }
            out[from].push(to);
        }
        for nbrs in &mut in_neighbors {
            nbrs.sort_unstable();
        }

        let (comp_of, mut components) = tarjan_scc(n, &out);
        components.sort_by_key(|c| c[0]);
        // Remap after sorting so source detection uses stable ids.
        let mut comp_of_sorted = vec![0usize; n];
        for (id, comp) in components.iter().enumerate() {
            for &v in comp {
                comp_of_sorted[v] = id;
            }
        }
        let _ = comp_of;

        let mut has_incoming = vec![false; components.len()];
        for &(from, to) in &stored {
            let (cf, ct) = (comp_of_sorted[from], comp_of_sorted[to]);
            if cf != ct {
                has_incoming[ct] = true;
            }
        }
        let source_components = (0..components.len())
            .filter(|&c| !has_incoming[c])
            .collect();

        Ok(Topology {
            n,
            arcs: stored,
            in_neighbors,
            components,
            source_components,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// The set of oscillators affecting node `i`, always including `i`
    /// itself. Sorted ascending.
    pub fn in_neighbors(&self, i: usize) -> Result<&[usize]> {
        self.in_neighbors
            .get(i)
            .map(|v| v.as_slice())
            .ok_or(Error::NodeIndex {
                index: i,
                n: self.n,
            })
    }

    /// Strongly connected components, each sorted, ordered by smallest
    /// member.
    pub fn strongly_connected_components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// All nodes from which every other node is reachable. Empty iff the
    /// graph is not rooted.
    pub fn roots(&self) -> Vec<usize> {
        if self.source_components.len() == 1 {
            self.components[self.source_components[0]].clone()
        } else {
            Vec::new()
        }
    }

    pub fn is_rooted(&self) -> bool {
        self.source_components.len() == 1
    }

    /// Every node is a root: a single strongly connected component.
    pub fn is_strongly_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// The source components of the condensation — groups of nodes with no
    /// incoming arcs from outside. More than one group means the graph is
    /// not rooted and the groups evolve independently of each other.
    pub fn isolated_source_groups(&self) -> Vec<Vec<usize>> {
        self.source_components
            .iter()
            .map(|&c| self.components[c].clone())
            .collect()
    }
}

/// Iterative single-pass Tarjan. Returns the component id per node and the
/// component node lists (each sorted).
fn tarjan_scc(n: usize, out: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comp_of = vec![UNSET; n];
    let mut components: Vec<Vec<usize>> = Vec::new();

    // (node, next out-neighbor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < out[v].len() {
                let w = out[v][*pos];
                *pos += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("stack holds the component");
                        on_stack[w] = false;
                        comp_of[w] = components.len();
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }
    (comp_of, components)
}
