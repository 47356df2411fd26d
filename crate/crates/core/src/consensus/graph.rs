use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use super::{expect_len, DynamicsError};

/// Undirected weighted graph without self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: DMatrix<f64>,
    laplacian: DMatrix<f64>,
}

impl Graph {
    pub fn new(adjacency: DMatrix<f64>) -> Result<Self, DynamicsError> {
        let n = adjacency.nrows();
        if n == 0 || adjacency.ncols() != n {
            return Err(DynamicsError::Graph(format!(
                "adjacency must be square and non-empty, got {}x{}",
                n,
                adjacency.ncols()
            )));
        }
        for i in 0..n {
            if adjacency[(i, i)] != 0.0 {
                return Err(DynamicsError::Graph(format!("self-edge on node {}", i + 1)));
            }
            for j in 0..n {
                let w = adjacency[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(DynamicsError::Graph(format!(
                        "weight a[{}][{}] = {w} must be finite and nonnegative",
                        i + 1,
                        j + 1
                    )));
                }
                if w != adjacency[(j, i)] {
                    return Err(DynamicsError::Graph(format!(
                        "adjacency is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut laplacian = -adjacency.clone();
        for i in 0..n {
            laplacian[(i, i)] = adjacency.row(i).sum();
        }
        Ok(Self {
            adjacency,
            laplacian,
        })
    }

    /// Builds a graph from `(i, j, weight)` triples with 0-based node indices.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, DynamicsError> {
        let mut adjacency = DMatrix::zeros(n, n);
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(DynamicsError::Graph(format!(
                    "edge ({}, {}) references a node outside 1..={n}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(DynamicsError::Graph(format!("self-edge on node {}", i + 1)));
            }
            adjacency[(i, j)] = w;
            adjacency[(j, i)] = w;
        }
        Self::new(adjacency)
    }

    /// Path `1 – 2 – … – n` with unit weights.
    pub fn path(n: usize) -> Result<Self, DynamicsError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn len(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn laplacian(&self) -> &DMatrix<f64> {
        &self.laplacian
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for (j, visited) in seen.iter_mut().enumerate() {
                if !*visited && self.adjacency[(i, j)] > 0.0 {
                    *visited = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `e = L·x`, i.e. `e_i = Σ_j a_ij (x_i − x_j)`.
    pub fn combined_error(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        expect_len("x", x.len(), self.len())?;
        let e = &self.laplacian * DVector::from_column_slice(x);
        Ok(e.iter().copied().collect())
    }

    /// `xᵀ L x`.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64, DynamicsError> {
        let e = self.combined_error(x)?;
        Ok(x.iter().zip(&e).map(|(a, b)| a * b).sum())
    }
}
