use std::ops::{Index, IndexMut};

/// Dense row-major matrix, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Submatrix on the given (ordered) row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.rows {
            self.data.swap(k * self.cols + a, k * self.cols + b);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix<i64> {
    /// Rank over the rationals via fraction-free elimination on `i128`.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i128>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&v| v as i128).collect())
            .collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| a[r][c] != 0) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..self.rows {
                if r != rank && a[r][c] != 0 {
                    let (f, g) = (a[r][c], a[rank][c]);
                    for k in 0..self.cols {
                        a[r][k] = a[r][k] * g - a[rank][k] * f;
                    }
                    let gcd = a[r].iter().fold(0i128, |acc, &v| gcd(acc, v.abs()));
                    if gcd > 1 {
                        a[r].iter_mut().for_each(|v| *v /= gcd);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn matmul(&self, other: &Matrix<i64>) -> Matrix<i64> {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        })
    }

    pub fn identity(n: usize) -> Matrix<i64> {
        Matrix::from_fn(n, n, |i, j| i64::from(i == j))
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_nilpotent_shift() {
        let mut m = Matrix::filled(4, 4, 0i64);
        m[(0, 1)] = 1;
        m[(1, 2)] = 1;
        assert_eq!(m.rank(), 2);
        assert_eq!(m.matmul(&m).rank(), 1);
        assert_eq!(Matrix::identity(3).rank(), 3);
    }

    #[test]
    fn select_and_transpose() {
        let m = Matrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(m.select(&[1], &[2, 0]), Matrix::from_rows(vec![vec![6, 4]]));
        assert_eq!(m.transpose()[(2, 1)], 6);
    }
}
