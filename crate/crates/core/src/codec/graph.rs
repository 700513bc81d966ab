use super::encoder::CodedSymbol;
use crate::error::{Error, Result};

/// Bipartite graph between `k` input nodes and the received coded symbols.
///
/// Edges are numbered in output order: output `j` owns the contiguous edge
/// range `check_offsets[j]..check_offsets[j + 1]`. Each input node keeps the
/// list of its edge ids, which is what the decoder walks.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorGraph {
    k: usize,
    symbols: Vec<CodedSymbol>,
    observations: Vec<i8>,
    input_observations: Option<Vec<i8>>,
    adjacency: Vec<Vec<usize>>,
    edge_input: Vec<usize>,
    check_offsets: Vec<usize>,
    input_edges: Vec<Vec<usize>>,
}

impl FactorGraph {
    /// Assembles the graph from symbols and their channel observations
    /// (`+1` for a received 0, `-1` for a received 1).
    pub fn build(symbols: Vec<CodedSymbol>, observations: Vec<i8>, k: usize) -> Result<Self> {
        if symbols.len() != observations.len() {
            return Err(Error::LengthMismatch {
                symbols: symbols.len(),
                observations: observations.len(),
            });
        }
        if symbols.is_empty() {
            return Err(Error::param("symbols", "need at least one coded symbol"));
        }
        if k == 0 {
            return Err(Error::param("k", "need at least one input node"));
        }
        if let Some(&o) = observations.iter().find(|&&o| o != 1 && o != -1) {
            return Err(Error::param("observations", format!("{o} is not ±1")));
        }

        let total: usize = symbols.iter().map(|s| s.neighbors.len()).sum();
        let mut adjacency = vec![Vec::new(); k];
        let mut input_edges = vec![Vec::new(); k];
        let mut edge_input = Vec::with_capacity(total);
        let mut check_offsets = Vec::with_capacity(symbols.len() + 1);
        check_offsets.push(0);
        for (j, s) in symbols.iter().enumerate() {
            if s.neighbors.is_empty() {
                return Err(Error::param("symbols", format!("symbol {j} has no neighbors")));
            }
            if s.degree != s.neighbors.len() {
                return Err(Error::param(
                    "symbols",
                    format!("symbol {j} declares degree {} but has {} neighbors", s.degree, s.neighbors.len()),
                ));
            }
            for &i in &s.neighbors {
                if i >= k {
                    return Err(Error::param("symbols", format!("symbol {j} references input {i} ≥ k = {k}")));
                }
                input_edges[i].push(edge_input.len());
                adjacency[i].push(j);
                edge_input.push(i);
            }
            check_offsets.push(edge_input.len());
        }

        Ok(Self {
            k,
            symbols,
            observations,
            input_observations: None,
            adjacency,
            edge_input,
            check_offsets,
            input_edges,
        })
    }

    /// Attaches a direct (systematic) observation to every input node. The
    /// decoder weighs these votes by its `channel_weight`.
    pub fn with_input_observations(mut self, obs: Vec<i8>) -> Result<Self> {
        if obs.len() != self.k {
            return Err(Error::param("input_observations", format!("expected {} values", self.k)));
        }
        if obs.iter().any(|&o| o != 1 && o != -1) {
            return Err(Error::param("input_observations", "values must be ±1"));
        }
        self.input_observations = Some(obs);
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[CodedSymbol] {
        &self.symbols
    }

    pub fn observations(&self) -> &[i8] {
        &self.observations
    }

    pub fn input_observations(&self) -> Option<&[i8]> {
        self.input_observations.as_deref()
    }

    /// Output nodes adjacent to each input node, in increasing order.
    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn input_degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_input.len()
    }

    pub(crate) fn check_edges(&self, j: usize) -> std::ops::Range<usize> {
        self.check_offsets[j]..self.check_offsets[j + 1]
    }

    pub(crate) fn input_edge_ids(&self, i: usize) -> &[usize] {
        &self.input_edges[i]
    }

    /// Same graph with every output observation negated.
    pub fn with_flipped_observations(&self) -> Self {
        let mut g = self.clone();
        g.observations.iter_mut().for_each(|o| *o = -*o);
        g
    }

    /// Same graph with the observations that a complemented message would
    /// produce: odd-degree outputs flip, even-degree outputs keep their sign.
    pub fn with_complemented_message(&self) -> Self {
        let mut g = self.clone();
        for (o, s) in g.observations.iter_mut().zip(&g.symbols) {
            if s.degree % 2 == 1 {
                *o = -*o;
            }
        }
        if let Some(obs) = g.input_observations.as_mut() {
            obs.iter_mut().for_each(|o| *o = -*o);
        }
        g
    }
}
