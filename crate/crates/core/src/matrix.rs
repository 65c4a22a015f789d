//! Lower-triangular storage for symmetric place relations.

/// A symmetric relation over `n` items stored as its lower half, diagonal
/// included: row `i` (0-based) holds the cells `(i, 0) ..= (i, i)`, for
/// `n * (n + 1) / 2` cells in total.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfMatrix<T> {
    dim: usize,
    cells: Vec<T>,
}

impl<T: Clone> HalfMatrix<T> {
    pub fn new(dim: usize, fill: T) -> Self {
        HalfMatrix {
            dim,
            cells: vec![fill; cell_count(dim)],
        }
    }
}

impl<T> HalfMatrix<T> {
    /// Builds a matrix from its rows; row `i` must have exactly `i + 1` cells.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let dim = rows.len();
        let mut cells = Vec::with_capacity(cell_count(dim));
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != i + 1 {
                return None;
            }
            cells.extend(row);
        }
        Some(HalfMatrix { dim, cells })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cell `(i, j)`, in either argument order.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.cells[offset(i, j)]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.cells[offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.cells[offset(i, j)] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        let start = i * (i + 1) / 2;
        &self.cells[start..start + i + 1]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.dim).map(move |i| self.row(i))
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    /// Applies `f` cell by cell, keeping the shape.
    pub fn map<U>(&self, mut f: impl FnMut(usize, usize, &T) -> U) -> HalfMatrix<U> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for i in 0..self.dim {
            for (j, cell) in self.row(i).iter().enumerate() {
                cells.push(f(i, j, cell));
            }
        }
        HalfMatrix {
            dim: self.dim,
            cells,
        }
    }
}

/// Number of cells in a half matrix of dimension `dim`.
pub fn cell_count(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

#[inline]
fn offset(i: usize, j: usize) -> usize {
    let (hi, lo) = if j <= i { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_row_major_lower_triangle() {
        let mut m = HalfMatrix::new(3, 0u8);
        let mut k = 0;
        for i in 0..3 {
            for j in 0..=i {
                m.set(i, j, k);
                k += 1;
            }
        }
        assert_eq!(m.cells(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(m.row(2), &[3, 4, 5]);
        assert_eq!(*m.get(0, 2), 3);
        assert_eq!(cell_count(2000), 2_001_000);
    }

    #[test]
    fn from_rows_rejects_ragged_shapes() {
        assert!(HalfMatrix::from_rows(vec![vec![1], vec![1, 2]]).is_some());
        assert!(HalfMatrix::from_rows(vec![vec![1], vec![1, 2, 3]]).is_none());
        assert_eq!(HalfMatrix::<u8>::from_rows(vec![]).unwrap().dim(), 0);
    }
}
