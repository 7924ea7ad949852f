//! Arithmetic and dense linear algebra over a prime field `F_p` with a
//! word-sized modulus. This is the evaluation domain for probabilistic
//! identity testing: a nonzero polynomial of degree `d` vanishes at a
//! uniformly random point with probability at most `d / p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Q;

/// `2^61 - 1`.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: MERSENNE_61 }
    }
}

impl PrimeField {
    /// Accepts primes in `(2^60, 2^63)`.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 1 << 60 || p >= 1 << 63 {
            return Err(Error::Config(format!("modulus {p} outside (2^60, 2^63)")));
        }
        if !is_prime(p) {
            return Err(Error::Config(format!("modulus {p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in F_p");
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = (v as i128).rem_euclid(self.p as i128);
        r as u64
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        v.mod_floor(&m).to_u64().expect("reduced value fits")
    }

    /// `None` when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &Q) -> Option<u64> {
        let d = self.from_bigint(q.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_bigint(q.numer()), self.inv(d)))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            -((self.p - a) as i64)
        } else {
            a as i64
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, m: &Matrix<u64>) -> u64 {
        let n = m.rows();
        assert_eq!(n, m.cols(), "determinant of non-square matrix");
        let mut a = m.clone();
        let mut d = 1u64;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| a[(r, c)] != 0) else {
                return 0;
            };
            if piv != c {
                a.swap_rows(piv, c);
                d = self.neg(d);
            }
            let pv = a[(c, c)];
            d = self.mul(d, pv);
            let inv = self.inv(pv);
            for r in c + 1..n {
                let f = self.mul(a[(r, c)], inv);
                if f == 0 {
                    continue;
                }
                for k in c..n {
                    let v = self.sub(a[(r, k)], self.mul(f, a[(c, k)]));
                    a[(r, k)] = v;
                }
            }
        }
        d
    }

    /// Pfaffian of an antisymmetric matrix by skew Gaussian elimination,
    /// normalised so that `Pf([[0, a], [-a, 0]]) = a`.
    pub fn pfaffian(&self, m: &Matrix<u64>) -> Result<u64> {
        let n = m.rows();
        if n % 2 == 1 {
            return Err(Error::OddSize(n));
        }
        let mut a = m.clone();
        let mut pf = 1u64;
        let mut k = 0;
        while k < n {
            let Some(piv) = (k + 1..n).find(|&c| a[(k, c)] != 0) else {
                return Ok(0);
            };
            if piv != k + 1 {
                a.swap_rows(piv, k + 1);
                a.swap_cols(piv, k + 1);
                pf = self.neg(pf);
            }
            let x = a[(k, k + 1)];
            pf = self.mul(pf, x);
            let xinv = self.inv(x);
            for i in k + 2..n {
                for j in k + 2..n {
                    // C + B^T S^{-1} B for the leading 2x2 block S.
                    let num = self.sub(
                        self.mul(a[(k + 1, i)], a[(k, j)]),
                        self.mul(a[(k, i)], a[(k + 1, j)]),
                    );
                    let v = self.add(a[(i, j)], self.mul(num, xinv));
                    a[(i, j)] = v;
                }
            }
            k += 2;
        }
        Ok(pf)
    }

    /// Coefficients (lowest degree first) of the unique polynomial of degree
    /// `< xs.len()` through the given points. `xs` must be distinct.
    pub fn interpolate(&self, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        // Newton divided differences, then expand.
        let mut coef = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = self.sub(coef[i], coef[i - 1]);
                let den = self.sub(xs[i], xs[i - level]);
                coef[i] = self.mul(num, self.inv(den));
            }
        }
        let mut out = vec![0u64; n];
        for i in (0..n).rev() {
            // out = out * (x - xs[i]) + coef[i]
            let mut next = vec![0u64; n];
            for d in 0..n {
                if out[d] == 0 {
                    continue;
                }
                if d + 1 < n {
                    next[d + 1] = self.add(next[d + 1], out[d]);
                }
                next[d] = self.sub(next[d], self.mul(out[d], xs[i]));
            }
            next[0] = self.add(next[0], coef[i]);
            out = next;
        }
        out
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mersenne_is_prime() {
        assert!(is_prime(MERSENNE_61));
        assert!(!is_prime(MERSENNE_61 - 2));
        assert!(PrimeField::new(MERSENNE_61).is_ok());
        assert!(PrimeField::new(1_000_000_007).is_err());
    }

    #[test]
    fn interpolation_recovers_coefficients() {
        let f = PrimeField::default();
        let coeffs = [5u64, 0, f.from_i64(-3), 7];
        let xs: Vec<u64> = (1..=4).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| {
                coeffs
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
            })
            .collect();
        assert_eq!(f.interpolate(&xs, &ys), coeffs.to_vec());
    }

    #[test]
    fn pfaffian_squares_to_det() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 4, 6, 8] {
            let mut m = Matrix::filled(n, n, 0u64);
            for i in 0..n {
                for j in i + 1..n {
                    let v = f.random(&mut rng);
                    m[(i, j)] = v;
                    m[(j, i)] = f.neg(v);
                }
            }
            let pf = f.pfaffian(&m).unwrap();
            assert_eq!(f.mul(pf, pf), f.det(&m));
        }
    }

    #[test]
    fn pfaffian_normalisation() {
        let f = PrimeField::default();
        let mut m = Matrix::filled(2, 2, 0u64);
        m[(0, 1)] = 5;
        m[(1, 0)] = f.neg(5);
        assert_eq!(f.pfaffian(&m).unwrap(), 5);
    }
}
