//! Dense complex operators on small truncated-mode Hilbert spaces.

mod expm;
mod matrix;

pub use expm::expm;
pub use matrix::CMatrix;

use num_traits::Zero;

use crate::error::{arg_err, dim_err, Result};
use crate::scalar::{re, Cx, Real};

/// Tensor product of truncated bosonic modes; mode 0 is the leftmost factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    mode_dims: Vec<usize>,
}

impl HilbertSpace {
    pub fn new(mode_dims: Vec<usize>) -> Result<Self> {
        if mode_dims.is_empty() {
            return arg_err("Hilbert space needs at least one mode");
        }
        if let Some(d) = mode_dims.iter().find(|&&d| d < 2) {
            return arg_err(format!("mode truncation {d} < 2"));
        }
        Ok(Self { mode_dims })
    }

    /// `n` modes truncated to `d` levels each.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    /// Four two-level modes: target pair then spectator pair.
    pub fn four_qubits() -> Self {
        Self {
            mode_dims: vec![2; 4],
        }
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn n_modes(&self) -> usize {
        self.mode_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.mode_dims.iter().product()
    }
}

/// Truncated lowering operator: `a[n-1, n] = √n`.
pub fn annihilation<T: Real>(d: usize) -> Result<CMatrix<T>> {
    if d < 2 {
        return arg_err(format!("annihilation operator needs d >= 2, got {d}"));
    }
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = re(T::lit(n as f64).sqrt());
    }
    Ok(a)
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` acting on `mode_index`.
pub fn embed<T: Real>(
    op: &CMatrix<T>,
    mode_index: usize,
    space: &HilbertSpace,
) -> Result<CMatrix<T>> {
    let dims = space.mode_dims();
    let Some(&d) = dims.get(mode_index) else {
        return arg_err(format!(
            "mode index {mode_index} out of range for {} modes",
            dims.len()
        ));
    };
    if op.shape() != (d, d) {
        return dim_err(format!(
            "operator {:?} does not act on mode {mode_index} of dimension {d}",
            op.shape()
        ));
    }
    let left: usize = dims[..mode_index].iter().product();
    let right: usize = dims[mode_index + 1..].iter().product();
    Ok(CMatrix::identity(left)
        .kron(op)
        .kron(&CMatrix::identity(right)))
}

/// Embedded lowering operator for every mode of `space`.
pub fn lowering_operators<T: Real>(space: &HilbertSpace) -> Result<Vec<CMatrix<T>>> {
    space
        .mode_dims()
        .iter()
        .enumerate()
        .map(|(k, &d)| embed(&annihilation(d)?, k, space))
        .collect()
}

/// Hilbert–Schmidt pairing `Tr(A† B)`.
pub fn hs_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<Cx<T>> {
    if a.shape() != b.shape() {
        return dim_err(format!("hs_inner: {:?} vs {:?}", a.shape(), b.shape()));
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .fold(Cx::zero(), |acc, (&x, &y)| acc + x.conj() * y))
}

/// Ascending eigenvalues of a Hermitian matrix (only the Hermitian part is read).
pub fn hermitian_eigenvalues<T>(h: &CMatrix<T>) -> Result<Vec<T>>
where
    T: Real + nalgebra::RealField,
{
    if !h.is_square() {
        return dim_err(format!("eigenvalues of non-square {:?}", h.shape()));
    }
    let n = h.rows();
    let half = T::lit(0.5);
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * half);
    let mut ev: Vec<T> = m.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(ev)
}
