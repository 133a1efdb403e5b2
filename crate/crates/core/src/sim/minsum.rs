//! Flooding Min-Sum decoder over an edge-indexed Tanner graph.

use crate::lifting::SparseBinaryMatrix;

/// Edges are numbered in column-major order; `check_edges` lists, per check,
/// the edge ids touching it.
#[derive(Debug, Clone)]
pub struct MinSumDecoder {
    n_vars: usize,
    var_offsets: Vec<usize>,
    edge_check: Vec<u32>,
    edge_var: Vec<u32>,
    check_offsets: Vec<usize>,
    check_edges: Vec<u32>,
    alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub bits: Vec<bool>,
    pub iterations: u32,
    pub converged: bool,
}

/// Per-thread message buffers.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    var_to_check: Vec<f64>,
    check_to_var: Vec<f64>,
    totals: Vec<f64>,
}

impl MinSumDecoder {
    /// `alpha` scales every check-node output; 1.0 is plain Min-Sum.
    pub fn new(h: &SparseBinaryMatrix, alpha: f64) -> Self {
        let mut var_offsets = Vec::with_capacity(h.n_cols() + 1);
        let mut edge_check = Vec::with_capacity(h.nnz());
        let mut edge_var = Vec::with_capacity(h.nnz());
        var_offsets.push(0);
        for j in 0..h.n_cols() {
            edge_check.extend_from_slice(h.column(j));
            edge_var.resize(edge_check.len(), j as u32);
            var_offsets.push(edge_check.len());
        }
        let mut per_check: Vec<Vec<u32>> = vec![Vec::new(); h.n_rows()];
        for (edge, &c) in edge_check.iter().enumerate() {
            per_check[c as usize].push(edge as u32);
        }
        let mut check_offsets = Vec::with_capacity(h.n_rows() + 1);
        check_offsets.push(0);
        let mut check_edges = Vec::with_capacity(edge_check.len());
        for edges in per_check {
            check_edges.extend(edges);
            check_offsets.push(check_edges.len());
        }
        Self {
            n_vars: h.n_cols(),
            var_offsets,
            edge_check,
            edge_var,
            check_offsets,
            check_edges,
            alpha,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn workspace(&self) -> Workspace {
        Workspace {
            var_to_check: vec![0.0; self.edge_check.len()],
            check_to_var: vec![0.0; self.edge_check.len()],
            totals: vec![0.0; self.n_vars],
        }
    }

    /// Decodes channel LLRs (positive favours bit 0). Stops as soon as the
    /// hard decision satisfies every check, after at least one iteration.
    pub fn decode(&self, llr: &[f64], max_iterations: u32, ws: &mut Workspace) -> DecodeOutcome {
        assert_eq!(llr.len(), self.n_vars, "one LLR per variable node");
        if ws.var_to_check.len() != self.edge_check.len() || ws.totals.len() != self.n_vars {
            *ws = self.workspace();
        }
        for (j, &v) in llr.iter().enumerate() {
            ws.var_to_check[self.var_offsets[j]..self.var_offsets[j + 1]].fill(v);
        }
        let mut bits = vec![false; self.n_vars];
        for it in 1..=max_iterations {
            self.check_update(ws);
            for j in 0..self.n_vars {
                let range = self.var_offsets[j]..self.var_offsets[j + 1];
                let total = llr[j] + ws.check_to_var[range.clone()].iter().sum::<f64>();
                ws.totals[j] = total;
                for e in range {
                    ws.var_to_check[e] = total - ws.check_to_var[e];
                }
                bits[j] = total < 0.0;
            }
            if self.syndrome_check(&bits) {
                return DecodeOutcome {
                    bits,
                    iterations: it,
                    converged: true,
                };
            }
        }
        DecodeOutcome {
            bits,
            iterations: max_iterations,
            converged: false,
        }
    }

    fn syndrome_check(&self, bits: &[bool]) -> bool {
        self.check_offsets.windows(2).all(|w| {
            !self.check_edges[w[0]..w[1]].iter().fold(false, |acc, &e| {
                acc ^ bits[self.edge_var[e as usize] as usize]
            })
        })
    }

    fn check_update(&self, ws: &mut Workspace) {
        for w in self.check_offsets.windows(2) {
            let edges = &self.check_edges[w[0]..w[1]];
            let mut negative = false;
            let (mut min1, mut min2) = (f64::INFINITY, f64::INFINITY);
            let mut argmin = u32::MAX;
            for &e in edges {
                let m = ws.var_to_check[e as usize];
                negative ^= m < 0.0;
                let mag = m.abs();
                if mag < min1 {
                    min2 = min1;
                    min1 = mag;
                    argmin = e;
                } else if mag < min2 {
                    min2 = mag;
                }
            }
            for &e in edges {
                let m = ws.var_to_check[e as usize];
                let mag = if e == argmin { min2 } else { min1 };
                let sign_negative = negative ^ (m < 0.0);
                let out = self.alpha * mag;
                ws.check_to_var[e as usize] = if sign_negative { -out } else { out };
            }
        }
    }
}
