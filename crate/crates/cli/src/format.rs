//! On-disk matrix format: a JSON object with explicit real and
//! imaginary entry arrays. Values round-trip bit-exactly through the
//! standard shortest-representation float serialization.

use serde::{Deserialize, Serialize};
use traceorth::{CMatrix, HermitianMatrix, C64};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    /// Subsystem dimensions for bipartite inputs; product must be `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_hermitian(h: &HermitianMatrix, dims: Option<Vec<usize>>) -> Self {
        let n = h.dim();
        let m = h.matrix();
        Self {
            n,
            dims,
            re: (0..n)
                .map(|i| (0..n).map(|j| m[(i, j)].re).collect())
                .collect(),
            im: (0..n)
                .map(|i| (0..n).map(|j| m[(i, j)].im).collect())
                .collect(),
        }
    }

    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let bytes = std::fs::read(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_slice(&bytes)
            .map_err(|e| format!("cannot parse {}: {e}", path.display()))
    }

    /// Validates rectangularity and Hermiticity, producing the matrix.
    pub fn to_hermitian(&self) -> Result<HermitianMatrix, String> {
        if self.re.len() != self.n || self.im.len() != self.n {
            return Err(format!(
                "row count mismatch: declared n = {}, re has {} rows, im has {}",
                self.n,
                self.re.len(),
                self.im.len()
            ));
        }
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != self.n {
                    return Err(format!(
                        "{name} row {i} has {} entries, expected {}",
                        row.len(),
                        self.n
                    ));
                }
            }
        }
        if let Some(dims) = &self.dims {
            let product: usize = dims.iter().product();
            if product != self.n {
                return Err(format!(
                    "subsystem dims {dims:?} multiply to {product}, expected {}",
                    self.n
                ));
            }
        }
        let mat = CMatrix::from_fn(self.n, self.n, |i, j| {
            C64::new(self.re[i][j], self.im[i][j])
        });
        HermitianMatrix::new(mat).map_err(|e| e.to_string())
    }
}
