//! Exact determinants and Pfaffians of polynomial matrices.
//!
//! [`laplace_det`] expands along rows with memoisation over the set of
//! columns already used, so each of the `2^n` column subsets is expanded
//! once. Products are truncated by [`DegreeBounds`], which is what makes
//! single-coefficient extraction from the pencil affordable.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::{DegreeBounds, Poly, Q};

/// Determinant by memoised Laplace expansion, keeping only terms admitted
/// by `bounds`.
pub fn laplace_det(m: &Matrix<Poly>, bounds: &DegreeBounds) -> Poly {
    let n = m.rows();
    assert!(m.is_square(), "determinant of non-square matrix");
    assert!(n <= 63, "matrix too large for subset memoisation");
    if n == 0 {
        return Poly::one();
    }
    // Nonzero entries per row, so sparse rows cost little.
    let support: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| !m[(i, j)].is_zero()).collect())
        .collect();
    let mut memo: HashMap<u64, Poly> = HashMap::new();
    laplace_rec(m, &support, bounds, 0, &mut memo)
}

fn laplace_rec(
    m: &Matrix<Poly>,
    support: &[Vec<usize>],
    bounds: &DegreeBounds,
    used: u64,
    memo: &mut HashMap<u64, Poly>,
) -> Poly {
    let row = used.count_ones() as usize;
    if row == m.rows() {
        return Poly::one();
    }
    if let Some(p) = memo.get(&used) {
        return p.clone();
    }
    let mut acc = Poly::zero();
    for &c in &support[row] {
        if used & (1 << c) != 0 {
            continue;
        }
        let minor = laplace_rec(m, support, bounds, used | (1 << c), memo);
        if minor.is_zero() {
            continue;
        }
        // Sign of column c among the still-free columns.
        let before = (!used & ((1u64 << c) - 1)).count_ones();
        let mut term = m[(row, c)].mul_truncated(&minor, bounds);
        if before % 2 == 1 {
            term = -term;
        }
        acc = &acc + &term;
    }
    memo.insert(used, acc.clone());
    acc
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_det(m: &Matrix<Poly>) -> Poly {
    assert!(m.is_square(), "determinant of non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Poly::one();
    }
    let mut a = m.clone();
    let mut prev = Poly::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return Poly::zero();
            };
            a.swap_rows(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[(i, j)] * &a[(k, k)]) - &(&a[(i, k)] * &a[(k, j)]);
                a[(i, j)] = num
                    .div_exact(&prev)
                    .expect("Bareiss quotients are exact");
            }
            a[(i, k)] = Poly::zero();
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Pfaffian by expansion along the first remaining row, memoised over the
/// remaining index set. Normalised by `Pf([[0, a], [-a, 0]]) = a`. Only the
/// upper triangle is read.
pub fn pfaffian(m: &Matrix<Poly>) -> Result<Poly> {
    pfaffian_truncated(m, &DegreeBounds::none())
}

pub fn pfaffian_truncated(m: &Matrix<Poly>, bounds: &DegreeBounds) -> Result<Poly> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::InvalidInput("Pfaffian of non-square matrix".into()));
    }
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    assert!(n <= 64, "matrix too large for subset memoisation");
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    Ok(pf_rec(m, bounds, full, &mut memo))
}

fn pf_rec(m: &Matrix<Poly>, bounds: &DegreeBounds, set: u64, memo: &mut HashMap<u64, Poly>) -> Poly {
    if set == 0 {
        return Poly::one();
    }
    if let Some(p) = memo.get(&set) {
        return p.clone();
    }
    let i = set.trailing_zeros() as usize;
    let rest = set & !(1 << i);
    let mut acc = Poly::zero();
    let mut bits = rest;
    let mut k = 0;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        k += 1;
        if m[(i, j)].is_zero() {
            continue;
        }
        let sub = pf_rec(m, bounds, rest & !(1 << j), memo);
        if sub.is_zero() {
            continue;
        }
        let mut term = m[(i, j)].mul_truncated(&sub, bounds);
        if k % 2 == 0 {
            term = -term;
        }
        acc = &acc + &term;
    }
    memo.insert(set, acc.clone());
    acc
}

/// Converts a rational matrix to constant polynomials.
pub fn constant_matrix(m: &Matrix<Q>) -> Matrix<Poly> {
    m.map(|c| Poly::constant(c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarId;

    fn ints(rows: Vec<Vec<i64>>) -> Matrix<Poly> {
        Matrix::from_rows(rows).map(|&v| Poly::int(v))
    }

    #[test]
    fn lambda_identity() {
        let l = Poly::var(VarId::Lambda);
        let m = Matrix::from_fn(4, 4, |i, j| if i == j { l.clone() } else { Poly::zero() });
        assert_eq!(laplace_det(&m, &DegreeBounds::none()), l.pow(4));
        assert_eq!(bareiss_det(&m), l.pow(4));
    }

    #[test]
    fn integer_determinants() {
        let m = ints(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(laplace_det(&m, &DegreeBounds::none()), Poly::int(4));
        assert_eq!(bareiss_det(&m), Poly::int(4));
        let m = ints(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(laplace_det(&m, &DegreeBounds::none()), Poly::int(-1));
        assert_eq!(bareiss_det(&m), Poly::int(-1));
        let m = ints(vec![vec![1, 2], vec![2, 4]]);
        assert!(bareiss_det(&m).is_zero());
    }

    #[test]
    fn pfaffian_small() {
        let a = Poly::var(VarId::a(1, 1));
        let m = Matrix::from_rows(vec![vec![Poly::zero(), a.clone()], vec![-&a, Poly::zero()]]);
        assert_eq!(pfaffian(&m).unwrap(), a);
        let odd = Matrix::filled(3, 3, Poly::zero());
        assert_eq!(pfaffian(&odd), Err(Error::OddSize(3)));
    }

    #[test]
    fn pfaffian_4x4_classical() {
        let v = |i: usize, j: usize| Poly::var(VarId::a(i, j));
        let m = Matrix::from_fn(4, 4, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => v(i + 1, j + 1),
            std::cmp::Ordering::Greater => -v(j + 1, i + 1),
            std::cmp::Ordering::Equal => Poly::zero(),
        });
        let expected = &(&(&v(1, 2) * &v(3, 4)) - &(&v(1, 3) * &v(2, 4))) + &(&v(1, 4) * &v(2, 3));
        assert_eq!(pfaffian(&m).unwrap(), expected);
        let det = laplace_det(&m, &DegreeBounds::none());
        assert_eq!(det, &expected * &expected);
    }

    #[test]
    fn truncation_keeps_low_t() {
        let t = Poly::var(VarId::T);
        let one = Poly::one();
        // det [[1, t], [t, 1]] = 1 - t^2
        let m = Matrix::from_rows(vec![vec![one.clone(), t.clone()], vec![t.clone(), one.clone()]]);
        let b = DegreeBounds {
            t: Some(1),
            ..Default::default()
        };
        assert_eq!(laplace_det(&m, &b), one);
        assert_eq!(laplace_det(&m, &DegreeBounds::none()), &one - &t.pow(2));
    }
}
