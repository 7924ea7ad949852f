//! Matrices in the block form `[[A, B], [C, -A^T]]` with `B`, `C`
//! antisymmetric: basis elements, the nilpotent attached to a pairing, the
//! generic symbolic element, and conversion to antisymmetric form.
//!
//! Indices are 0-based internally. Index `i < N` is a top-half index and its
//! partner is `i + N`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::partition::{BlockShape, LegoSet, Partition};
use crate::poly::{Poly, VarId, Q};

/// Partner of `i` under `i <-> i +- N`.
pub fn partner(i: usize, half: usize) -> usize {
    if i < half {
        i + half
    } else {
        i - half
    }
}

/// A `2N x 2N` matrix of polynomials in so-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoMatrix {
    half: usize,
    m: Matrix<Poly>,
}

impl SoMatrix {
    pub fn zero(half: usize) -> Self {
        SoMatrix {
            half,
            m: Matrix::filled(2 * half, 2 * half, Poly::zero()),
        }
    }

    /// Checks the so-form invariant.
    pub fn new(m: Matrix<Poly>) -> Result<Self> {
        if !m.is_square() || m.rows() % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "{}x{} matrix cannot be in so(2N)",
                m.rows(),
                m.cols()
            )));
        }
        let half = m.rows() / 2;
        check_so_form(&m, half)?;
        Ok(SoMatrix { half, m })
    }

    pub fn from_int(m: &Matrix<i64>) -> Result<Self> {
        Self::new(m.map(|&v| Poly::int(v)))
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn size(&self) -> usize {
        2 * self.half
    }

    pub fn matrix(&self) -> &Matrix<Poly> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<Poly> {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.m[(i, j)]
    }

    /// `M J` with `J = [[0, I], [I, 0]]`: column `j` of the result is column
    /// `partner(j)` of `M`.
    pub fn times_j(&self) -> Matrix<Poly> {
        let n = self.half;
        Matrix::from_fn(2 * n, 2 * n, |i, j| self.m[(i, partner(j, n))].clone())
    }
}

fn check_so_form(m: &Matrix<Poly>, half: usize) -> Result<()> {
    // M J antisymmetric: M[i][partner(j)] = -M[j][partner(i)].
    for i in 0..2 * half {
        for j in i..2 * half {
            if m[(i, partner(j, half))] != -&m[(j, partner(i, half))] {
                return Err(Error::NotSoForm(i + 1, partner(j, half) + 1));
            }
        }
    }
    Ok(())
}

/// Whether an integer matrix is in so-form.
pub fn is_so_form(m: &Matrix<i64>) -> bool {
    m.is_square()
        && m.rows() % 2 == 0
        && (0..m.rows()).all(|i| {
            let half = m.rows() / 2;
            (0..m.rows()).all(|j| m[(i, partner(j, half))] == -m[(j, partner(i, half))])
        })
}

fn check_basis_index(i: usize, j: usize, n: usize) -> Result<()> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexError { i, j, n });
    }
    Ok(())
}

fn add_xminus(m: &mut Matrix<i64>, i: usize, j: usize, n: usize) {
    // 1-based: E_{i,j} - E_{j+n,i+n}
    m[(i - 1, j - 1)] += 1;
    m[(j + n - 1, i + n - 1)] -= 1;
}

fn add_xplus(m: &mut Matrix<i64>, i: usize, j: usize, n: usize) {
    // 1-based: E_{i,j+n} - E_{j,i+n}
    m[(i - 1, j + n - 1)] += 1;
    m[(j - 1, i + n - 1)] -= 1;
}

/// `X^-_{i,j} = E_{i,j} - E_{j+n,i+n}` in so(2n), 1-based, `1 <= i, j <= n`.
pub fn basis_xminus(i: usize, j: usize, n: usize) -> Result<Matrix<i64>> {
    check_basis_index(i, j, n)?;
    let mut m = Matrix::filled(2 * n, 2 * n, 0);
    add_xminus(&mut m, i, j, n);
    Ok(m)
}

/// `X^+_{i,j} = E_{i,j+n} - E_{j,i+n}` in so(2n), 1-based, `1 <= i < j <= n`.
pub fn basis_xplus(i: usize, j: usize, n: usize) -> Result<Matrix<i64>> {
    check_basis_index(i, j, n)?;
    if i >= j {
        return Err(Error::IndexError { i, j, n });
    }
    let mut m = Matrix::filled(2 * n, 2 * n, 0);
    add_xplus(&mut m, i, j, n);
    Ok(m)
}

/// The local `2r x 2r` block for one shape.
///
/// `Chain(r)` is `sum_{k<r} X^-_{k,k+1}`; `Hook(r)` adds `X^+_{r-1,r}`, and
/// `Hook(1)` is zero. `OddPair` is built by [`odd_pair_block`].
pub fn shape_block(shape: BlockShape) -> Matrix<i64> {
    if let BlockShape::OddPair { a, b } = shape {
        return odd_pair_block(a, b);
    }
    let n = shape.half_width();
    let mut m = Matrix::filled(2 * n, 2 * n, 0);
    for k in 1..n {
        add_xminus(&mut m, k, k + 1, n);
    }
    if let BlockShape::Hook(r) = shape {
        if r >= 2 {
            add_xplus(&mut m, r - 1, r, n);
        }
    }
    m
}

/// A nilpotent of Jordan type `[2a+1, 2b+1]` in so(2(a+b+1)), `a > b >= 1`.
///
/// Start from two odd Jordan chains `u_0 -> .. -> u_{2a}` and
/// `w_0 -> .. -> w_{2b}` with forms `B(u_i, u_{2a-i}) = (-1)^i` and
/// `B(w_i, w_{2b-i}) = k (-1)^i`, where `k` makes the middle vectors `u_a`
/// and `w_b` have opposite norms. Outer vectors pair off directly; the middle
/// pair becomes `E = u_a + w_b`, `F = (-1)^a (u_a - w_b) / 2`. The matrix in
/// the resulting split basis is scaled to clear denominators, which stays in
/// the same orbit.
pub fn odd_pair_block(a: usize, b: usize) -> Matrix<i64> {
    assert!(a > b && b >= 1, "odd pair needs a > b >= 1");
    let (lu, lw) = (2 * a + 1, 2 * b + 1);
    let dim = lu + lw;
    let sign = |i: usize| if i % 2 == 0 { 1 } else { -1 };
    let kappa = -sign(a + b);
    // Gram matrix and shift on the model basis u_0..u_{2a}, w_0..w_{2b}.
    let gram = |x: usize, y: usize| -> i64 {
        match (x < lu, y < lu) {
            (true, true) if x + y == 2 * a => sign(x),
            (false, false) if (x - lu) + (y - lu) == 2 * b => kappa * sign(x - lu),
            _ => 0,
        }
    };
    let bilinear = |v: &[Q], w: &[Q]| -> Q {
        let mut acc = Q::from_integer(0.into());
        for (x, vx) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (y, wy) in w.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let gxy = gram(x, y);
                if gxy != 0 {
                    acc += vx * wy * Q::from_integer(gxy.into());
                }
            }
        }
        acc
    };
    let shift = |v: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::from_integer(0.into()); dim];
        for x in 0..dim {
            let last = x == lu - 1 || x == dim - 1;
            if !last {
                out[x + 1] = v[x].clone();
            }
        }
        out
    };
    let unit = |x: usize, c: Q| -> Vec<Q> {
        let mut v = vec![Q::from_integer(0.into()); dim];
        v[x] = c;
        v
    };
    let q = |v: i64| Q::from_integer(v.into());
    let n = a + b + 1;
    let mut es = Vec::with_capacity(n);
    let mut fs = Vec::with_capacity(n);
    for k in 0..a {
        es.push(unit(k, q(1)));
        fs.push(unit(2 * a - k, q(sign(k))));
    }
    let mut e_mid = unit(a, q(1));
    e_mid[lu + b] = q(1);
    let mut f_mid = unit(a, Q::new(sign(a).into(), 2.into()));
    f_mid[lu + b] = Q::new((-sign(a)).into(), 2.into());
    es.push(e_mid);
    fs.push(f_mid);
    for i in 0..b {
        es.push(unit(lu + i, q(1)));
        fs.push(unit(lu + 2 * b - i, q(kappa * sign(i))));
    }
    let basis: Vec<&Vec<Q>> = es.iter().chain(fs.iter()).collect();
    // Coefficient on e_k is B(v, f_k); on f_k it is B(v, e_k).
    let dual: Vec<&Vec<Q>> = fs.iter().chain(es.iter()).collect();
    let mut m = Matrix::filled(2 * n, 2 * n, q(0));
    for (l, bl) in basis.iter().enumerate() {
        let xb = shift(bl);
        for (k, dk) in dual.iter().enumerate() {
            m[(k, l)] = bilinear(&xb, dk);
        }
    }
    let scale = (0..2 * n)
        .flat_map(|i| (0..2 * n).map(move |j| (i, j)))
        .fold(num_bigint::BigInt::from(1), |acc, (i, j)| {
            num_integer::Integer::lcm(&acc, m[(i, j)].denom())
        });
    let scale = Q::from_integer(scale);
    m.map(|c| {
        let v = (c * &scale).to_integer();
        i64::try_from(v).expect("odd pair entries fit in i64")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlacedBlock {
    pub shape: BlockShape,
    /// 0-based offset into the top half.
    pub offset: usize,
}

impl PlacedBlock {
    pub fn half_width(&self) -> usize {
        self.shape.half_width()
    }
}

/// Consecutive placement of so-blocks along the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockLayout {
    pub half: usize,
    pub blocks: Vec<PlacedBlock>,
}

impl BlockLayout {
    pub fn new(shapes: &[BlockShape]) -> Self {
        let mut offset = 0;
        let blocks = shapes
            .iter()
            .map(|&shape| {
                let b = PlacedBlock { shape, offset };
                offset += shape.half_width();
                b
            })
            .collect();
        BlockLayout { half: offset, blocks }
    }

    /// Global index of local index `local` (0-based, `< 2n`) of block `b`.
    pub fn global(&self, b: usize, local: usize) -> usize {
        let blk = &self.blocks[b];
        let n = blk.half_width();
        debug_assert!(local < 2 * n);
        if local < n {
            blk.offset + local
        } else {
            self.half + blk.offset + local - n
        }
    }

    /// Jordan type realised by the layout, descending.
    pub fn jordan_type(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.blocks.iter().flat_map(|b| b.shape.jordan_type()).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// An integer nilpotent in so(2N) together with its block layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nilpotent {
    pub matrix: Matrix<i64>,
    pub layout: BlockLayout,
}

impl Nilpotent {
    pub fn from_layout(layout: BlockLayout) -> Self {
        let n = layout.half;
        let mut matrix = Matrix::filled(2 * n, 2 * n, 0);
        for (b, blk) in layout.blocks.iter().enumerate() {
            let local = shape_block(blk.shape);
            let w = 2 * blk.half_width();
            for i in 0..w {
                for j in 0..w {
                    let v = local[(i, j)];
                    if v != 0 {
                        matrix[(layout.global(b, i), layout.global(b, j))] = v;
                    }
                }
            }
        }
        Nilpotent { matrix, layout }
    }

    pub fn half(&self) -> usize {
        self.layout.half
    }

    pub fn so_matrix(&self) -> SoMatrix {
        SoMatrix::from_int(&self.matrix).expect("block nilpotents are in so-form")
    }

    /// 1-based `(i, j, v)` for every nonzero entry, row-major.
    pub fn nonzeros(&self) -> Vec<(usize, usize, i64)> {
        let n = self.matrix.rows();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = self.matrix[(i, j)];
                if v != 0 {
                    out.push((i + 1, j + 1, v));
                }
            }
        }
        out
    }
}

/// The direct realisation of `P`: one so-block per pair, in pairing order.
/// Every odd pair must be of the form `[2a+1, 1]`.
pub fn build_nilpotent(p: &Partition) -> Result<Nilpotent> {
    let shapes = p.pairing()?.shapes()?;
    Ok(Nilpotent::from_layout(BlockLayout::new(&shapes)))
}

/// The realisation of the augmented partition of a Lego set, blocks laid
/// out in Lego order.
pub fn lego_nilpotent(lego: &LegoSet) -> Nilpotent {
    Nilpotent::from_layout(BlockLayout::new(&lego.shapes))
}

/// Jordan block sizes of a nilpotent integer matrix, descending, read off
/// from the ranks of its powers.
pub fn jordan_type(x: &Matrix<i64>) -> Vec<usize> {
    let n = x.rows();
    let mut ranks = vec![n];
    let mut power = Matrix::identity(n);
    while *ranks.last().unwrap() > 0 {
        power = power.matmul(x);
        let r = power.rank();
        if r == *ranks.last().unwrap() {
            // Not nilpotent; report what was seen.
            break;
        }
        ranks.push(r);
    }
    ranks.push(0);
    // #blocks of size >= e is rank(X^{e-1}) - rank(X^e).
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for e in 1..=at_least.len() {
        let here = at_least[e - 1] - at_least.get(e).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(e, here));
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// The generic element of so(2N): independent `A[i,j]`, `B[i,j]` (`i<j`),
/// `C[i,j]` (`i<j`), dependent entries filled by the so-form relations.
pub fn generic_g(half: usize) -> SoMatrix {
    let n = half;
    let mut m = Matrix::filled(2 * n, 2 * n, Poly::zero());
    for i in 0..n {
        for j in 0..n {
            let a = Poly::var(VarId::a(i + 1, j + 1));
            m[(n + j, n + i)] = -&a;
            m[(i, j)] = a;
        }
        for j in i + 1..n {
            let b = Poly::var(VarId::b(i + 1, j + 1));
            m[(j, n + i)] = -&b;
            m[(i, n + j)] = b;
            let c = Poly::var(VarId::c(i + 1, j + 1));
            m[(n + j, i)] = -&c;
            m[(n + i, j)] = c;
        }
    }
    SoMatrix { half: n, m }
}

/// `(i, j)` positions (0-based, in the `2N x 2N` grid) of the independent
/// coordinates of so(2N), in variable order.
pub fn independent_positions(half: usize) -> Vec<(VarId, usize, usize)> {
    let n = half;
    let mut out = Vec::with_capacity(n * (2 * n - 1));
    for i in 0..n {
        for j in 0..n {
            out.push((VarId::a(i + 1, j + 1), i, j));
        }
        for j in i + 1..n {
            out.push((VarId::b(i + 1, j + 1), i, n + j));
            out.push((VarId::c(i + 1, j + 1), n + i, j));
        }
    }
    out.sort_by_key(|x| x.0);
    out
}

/// An antisymmetric matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntisymMatrix {
    m: Matrix<Poly>,
}

impl AntisymMatrix {
    pub fn new(m: Matrix<Poly>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("non-square antisymmetric matrix".into()));
        }
        for i in 0..m.rows() {
            for j in i..m.rows() {
                if m[(i, j)] != -&m[(j, i)] {
                    return Err(Error::InvalidInput(format!(
                        "entry ({}, {}) breaks antisymmetry",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(AntisymMatrix { m })
    }

    pub fn matrix(&self) -> &Matrix<Poly> {
        &self.m
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn pfaffian(&self) -> Result<Poly> {
        crate::det::pfaffian(&self.m)
    }
}

/// `(M J, det J)`, so that `det M = sign * det(M J)` and `M J` is
/// antisymmetric.
pub fn antisymmetrize(m: &SoMatrix) -> Result<(AntisymMatrix, i32)> {
    check_so_form(&m.m, m.half)?;
    let sign = if m.half % 2 == 0 { 1 } else { -1 };
    Ok((AntisymMatrix { m: m.times_j() }, sign))
}
