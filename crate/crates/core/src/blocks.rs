//! Block operator matrices: assembly, standard layouts, flips and pinchings.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE, ZERO};
use crate::range::{numerical_radius, DEFAULT_TOL};

/// Tolerance on `w(B) ≤ 1/2` in [`equality_model`].
pub const EQUALITY_MODEL_TOL: f64 = 1e-9;

/// An `n × n` grid of blocks; `None` is a zero block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSpec {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    blocks: Vec<Option<ComplexMatrix>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinchMode {
    /// Keep only the diagonal blocks.
    Diagonal,
    /// Keep only the off-diagonal blocks.
    OffDiagonal,
}

impl BlockSpec {
    /// `blocks` is row-major with `row_dims.len()²` entries.
    pub fn new(row_dims: Vec<usize>, col_dims: Vec<usize>, blocks: Vec<Option<ComplexMatrix>>) -> Result<Self> {
        let n = row_dims.len();
        if n == 0 || col_dims.len() != n {
            return Err(Error::InvalidArgument("row and column dimension vectors must have the same nonzero length"));
        }
        if blocks.len() != n * n {
            return Err(Error::EntryCount {
                rows: n,
                cols: n,
                actual: blocks.len(),
            });
        }
        if blocks.iter().all(Option::is_none) {
            return Err(Error::EmptyBlockGrid);
        }
        for (k, b) in blocks.iter().enumerate() {
            if let Some(b) = b {
                let (i, j) = (k / n, k % n);
                let expected = (row_dims[i], col_dims[j]);
                if b.shape() != expected {
                    return Err(Error::BlockShape {
                        row: i,
                        col: j,
                        expected,
                        actual: b.shape(),
                    });
                }
            }
        }
        Ok(Self {
            row_dims,
            col_dims,
            blocks,
        })
    }

    /// Builds a spec from rows of optional blocks, inferring the dimensions.
    /// Every block row and block column needs at least one present block.
    pub fn from_grid(grid: Vec<Vec<Option<ComplexMatrix>>>) -> Result<Self> {
        let n = grid.len();
        if n == 0 {
            return Err(Error::EmptyBlockGrid);
        }
        for (i, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow {
                    row: i,
                    expected: n,
                    actual: row.len(),
                });
            }
        }
        let mut row_dims = vec![None; n];
        let mut col_dims = vec![None; n];
        for (i, row) in grid.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    row_dims[i].get_or_insert(b.rows());
                    col_dims[j].get_or_insert(b.cols());
                }
            }
        }
        let unwrap = |d: Vec<Option<usize>>| -> Result<Vec<usize>> {
            d.into_iter()
                .map(|x| x.ok_or(Error::InvalidArgument("cannot infer the size of an all-zero block row or column")))
                .collect()
        };
        Self::new(unwrap(row_dims)?, unwrap(col_dims)?, grid.into_iter().flatten().collect())
    }

    /// First-row operator matrix `[[A_11, …, A_1n], [0, …], …]` acting on
    /// `H_1 ⊕ … ⊕ H_n`, where `A_1j : H_j → H_1`.
    pub fn first_row(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        let first = blocks.first().ok_or(Error::NoBlocks)?;
        let d1 = first.require_square()?;
        let dims: Vec<usize> = blocks.iter().map(ComplexMatrix::cols).collect();
        let n = blocks.len();
        let mut grid = vec![None; n * n];
        for (j, b) in blocks.into_iter().enumerate() {
            if b.rows() != d1 {
                return Err(Error::BlockShape {
                    row: 0,
                    col: j,
                    expected: (d1, b.cols()),
                    actual: b.shape(),
                });
            }
            grid[j] = Some(b);
        }
        Self::new(dims.clone(), dims, grid)
    }

    pub fn n(&self) -> usize {
        self.row_dims.len()
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    pub fn block(&self, i: usize, j: usize) -> Option<&ComplexMatrix> {
        self.blocks[i * self.n() + j].as_ref()
    }

    /// Block `(i, j)`, materializing absent blocks as zeros.
    pub fn block_or_zero(&self, i: usize, j: usize) -> ComplexMatrix {
        self.block(i, j)
            .cloned()
            .unwrap_or_else(|| ComplexMatrix::zeros(self.row_dims[i], self.col_dims[j]))
    }

    pub fn has_blocks(&self) -> bool {
        self.blocks.iter().any(Option::is_some)
    }
}

/// Materializes the block matrix.
pub fn assemble(spec: &BlockSpec) -> ComplexMatrix {
    let offsets = |dims: &[usize]| {
        let mut acc = 0;
        dims.iter()
            .map(|&d| {
                let o = acc;
                acc += d;
                o
            })
            .collect::<Vec<_>>()
    };
    let (ro, co) = (offsets(&spec.row_dims), offsets(&spec.col_dims));
    let rows: usize = spec.row_dims.iter().sum();
    let cols: usize = spec.col_dims.iter().sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let n = spec.n();
    for i in 0..n {
        for j in 0..n {
            if let Some(b) = spec.block(i, j) {
                let data = out.data_mut();
                for r in 0..b.rows() {
                    let start = (ro[i] + r) * cols + co[j];
                    data[start..start + b.cols()].copy_from_slice(b.row(r));
                }
            }
        }
    }
    out
}

fn require_same_square(blocks: &[&ComplexMatrix], op: &'static str) -> Result<usize> {
    let d = blocks.first().ok_or(Error::NoBlocks)?.require_square()?;
    for b in blocks {
        b.require_square()?;
        if b.rows() != d {
            return Err(Error::ShapeMismatch {
                op,
                left: (d, d),
                right: b.shape(),
            });
        }
    }
    Ok(d)
}

/// `[[A, B], [C, D]]` with equal square blocks.
pub fn two_by_two(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, d: &ComplexMatrix) -> Result<ComplexMatrix> {
    let k = require_same_square(&[a, b, c, d], "two_by_two")?;
    let spec = BlockSpec::new(
        vec![k, k],
        vec![k, k],
        vec![Some(a.clone()), Some(b.clone()), Some(c.clone()), Some(d.clone())],
    )?;
    Ok(assemble(&spec))
}

/// `[[0, A], [B, 0]]`.
pub fn off_diagonal(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let k = require_same_square(&[a, b], "off_diagonal")?;
    let spec = BlockSpec::new(vec![k, k], vec![k, k], vec![None, Some(a.clone()), Some(b.clone()), None])?;
    Ok(assemble(&spec))
}

/// Block anti-diagonal matrix with `A_1` in the top-right corner and `A_n`
/// in the bottom-left.
pub fn anti_diagonal(blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
    let k = require_same_square(&refs, "anti_diagonal")?;
    let n = blocks.len();
    let mut grid = vec![None; n * n];
    for (i, b) in blocks.iter().enumerate() {
        grid[i * n + (n - 1 - i)] = Some(b.clone());
    }
    Ok(assemble(&BlockSpec::new(vec![k; n], vec![k; n], grid)?))
}

/// Block anti-diagonal of identities; block `i` (from the top) maps the
/// summand of size `dims[n-1-i]` onto the one of size `dims[i]`, so the
/// result is a permutation matrix and hence unitary.
pub fn flip_unitary(dims: &[usize]) -> Result<ComplexMatrix> {
    if dims.is_empty() {
        return Err(Error::NoBlocks);
    }
    let total: usize = dims.iter().sum();
    // reversing the summand order: position p in output summand i comes from
    // position p in input summand n-1-i
    let mut in_offsets = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &d in dims {
        in_offsets.push(acc);
        acc += d;
    }
    let mut u = ComplexMatrix::zeros(total, total);
    let n = dims.len();
    let mut row = 0;
    for i in 0..n {
        let src = n - 1 - i;
        for p in 0..dims[src] {
            u.data_mut()[row * total + in_offsets[src] + p] = ONE;
            row += 1;
        }
    }
    Ok(u)
}

/// Keeps the diagonal or the off-diagonal blocks. The result may contain no
/// blocks at all; it then assembles to zero.
///
/// The diagonal pinching never increases `w`. The off-diagonal one does not
/// either for two block rows, but can for three or more.
pub fn pinch(spec: &BlockSpec, mode: PinchMode) -> BlockSpec {
    let n = spec.n();
    let blocks = spec
        .blocks
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let diag = k / n == k % n;
            match mode {
                PinchMode::Diagonal if diag => b.clone(),
                PinchMode::OffDiagonal if !diag => b.clone(),
                _ => None,
            }
        })
        .collect();
    BlockSpec {
        row_dims: spec.row_dims.clone(),
        col_dims: spec.col_dims.clone(),
        blocks,
    }
}

/// `[[0, s], [0, 0]] ⊕ sB`, which has norm `s` and numerical radius `s/2`
/// whenever `w(B) ≤ 1/2`. `B` may be empty.
pub fn equality_model(s: f64, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument("s must be positive and finite"));
    }
    let head = ComplexMatrix::from_vec(2, 2, vec![ZERO, ONE * s, ZERO, ZERO])?;
    if b.is_empty() {
        return Ok(head);
    }
    b.require_square()?;
    let w = numerical_radius(b, DEFAULT_TOL)?.value;
    if w > 0.5 + EQUALITY_MODEL_TOL {
        return Err(Error::EqualityModelPrecondition { w });
    }
    Ok(head.direct_sum(&b.scale_real(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::I;
    use crate::spectral::op_norm;

    fn c(x: f64) -> ComplexMatrix {
        ComplexMatrix::from_real(1, 1, &[x]).unwrap()
    }

    fn real(r: usize, k: usize, d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(r, k, d).unwrap()
    }

    #[test]
    fn assemble_examples() {
        let m = two_by_two(&c(0.0), &c(1.0), &c(2.0), &c(0.0)).unwrap();
        assert_eq!(m, real(2, 2, &[0.0, 1.0, 2.0, 0.0]));

        let fr = BlockSpec::first_row(vec![c(0.0), c(1.0)]).unwrap();
        assert_eq!(assemble(&fr), real(2, 2, &[0.0, 1.0, 0.0, 0.0]));

        let a = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let m = off_diagonal(&a, &a).unwrap();
        assert_eq!(m.shape(), (4, 4));
        assert_eq!(m.submatrix(0, 2, 2, 2), a);
        assert_eq!(m.submatrix(2, 0, 2, 2), a);
        assert!(m.submatrix(0, 0, 2, 2).is_zero());
    }

    #[test]
    fn assemble_rejects_bad_block() {
        let err = BlockSpec::new(vec![1, 2], vec![1, 2], vec![Some(c(1.0)), Some(c(1.0)), None, None]).unwrap_err();
        assert_eq!(
            err,
            Error::BlockShape {
                row: 0,
                col: 1,
                expected: (1, 2),
                actual: (1, 1)
            }
        );
        assert_eq!(BlockSpec::new(vec![1], vec![1], vec![None]).unwrap_err(), Error::EmptyBlockGrid);
    }

    #[test]
    fn first_row_with_rectangular_blocks() {
        let a11 = real(1, 1, &[2.0]);
        let a12 = real(1, 2, &[1.0, -1.0]);
        let spec = BlockSpec::first_row(vec![a11, a12]).unwrap();
        let m = assemble(&spec);
        assert_eq!(m, real(3, 3, &[2.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        assert!(BlockSpec::first_row(vec![real(1, 2, &[1.0, 1.0])]).is_err());
    }

    #[test]
    fn anti_diagonal_examples() {
        assert_eq!(anti_diagonal(&[c(1.0)]).unwrap(), c(1.0));
        assert_eq!(anti_diagonal(&[c(1.0), c(2.0)]).unwrap(), real(2, 2, &[0.0, 1.0, 2.0, 0.0]));
        let id = ComplexMatrix::identity(2);
        let m = anti_diagonal(&[id.clone(), id.clone(), id.clone()]).unwrap();
        assert_eq!(m, flip_unitary(&[2, 2, 2]).unwrap());
        assert!(anti_diagonal(&[c(1.0), id]).is_err());
        assert!(anti_diagonal(&[]).is_err());
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip_unitary(&[1, 1]).unwrap(), real(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let id = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        assert_eq!(flip_unitary(&[2, 2]).unwrap(), two_by_two(&z, &id, &id, &z).unwrap());
        for dims in [vec![1, 2], vec![3, 1, 2], vec![2]] {
            let u = flip_unitary(&dims).unwrap();
            assert_eq!(u.adjoint().matmul(&u).unwrap(), ComplexMatrix::identity(dims.iter().sum()));
        }
    }

    #[test]
    fn flip_swaps_unequal_summands() {
        // U (X ⊕ Y) U* = Y ⊕ X
        let x = c(3.0);
        let y = real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let u = flip_unitary(&[1, 2]).unwrap();
        let conj = u.matmul(&x.direct_sum(&y)).unwrap().matmul(&u.adjoint()).unwrap();
        assert_eq!(conj, y.direct_sum(&x));
    }

    #[test]
    fn pinch_examples() {
        let (a, b, cc, d) = (c(1.0), c(2.0), c(3.0), c(4.0));
        let spec = BlockSpec::new(vec![1, 1], vec![1, 1], vec![Some(a), Some(b), Some(cc), Some(d)]).unwrap();
        let diag = pinch(&spec, PinchMode::Diagonal);
        let off = pinch(&spec, PinchMode::OffDiagonal);
        assert_eq!(assemble(&diag), real(2, 2, &[1.0, 0.0, 0.0, 4.0]));
        assert_eq!(assemble(&off), real(2, 2, &[0.0, 2.0, 3.0, 0.0]));
        assert_eq!(assemble(&diag).add(&assemble(&off)).unwrap(), assemble(&spec));
        let gone = pinch(&diag, PinchMode::OffDiagonal);
        assert!(!gone.has_blocks());
        assert!(assemble(&gone).is_zero());
    }

    #[test]
    fn off_diagonal_pinching_can_grow_with_three_rows() {
        let h = real(3, 3, &[-0.5, 1.0, 1.0, 1.0, -0.5, 1.0, 1.0, 1.0, -0.5]);
        let blocks = (0..9).map(|k| Some(c(h.get(k / 3, k % 3).re))).collect();
        let spec = BlockSpec::new(vec![1; 3], vec![1; 3], blocks).unwrap();
        let w = |m: &ComplexMatrix| numerical_radius(m, DEFAULT_TOL).unwrap().value;
        assert!((w(&assemble(&spec)) - 1.5).abs() < 1e-9);
        assert!((w(&assemble(&pinch(&spec, PinchMode::OffDiagonal))) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn equality_model_examples() {
        let m = equality_model(1.0, &ComplexMatrix::zeros(0, 0)).unwrap();
        assert_eq!(m, real(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        let w = numerical_radius(&m, DEFAULT_TOL).unwrap();
        assert!((w.value - 0.5).abs() < 1e-9);

        let m = equality_model(2.0, &c(0.5)).unwrap();
        assert_eq!(m.shape(), (3, 3));
        assert!((numerical_radius(&m, DEFAULT_TOL).unwrap().value - 1.0).abs() < 1e-9);
        assert!((op_norm(&m).value - 2.0).abs() < 1e-12);

        match equality_model(1.0, &c(1.0)) {
            Err(Error::EqualityModelPrecondition { w }) => assert!((w - 1.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert!(equality_model(0.0, &c(0.1)).is_err());
        let rot = ComplexMatrix::diag(&[I * 0.5, ONE * -0.5]);
        assert!(equality_model(3.0, &rot).is_ok());
    }
}
