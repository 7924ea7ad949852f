//! The homogeneous pencil `sX + tg + lI`, extraction of the coefficients
//! `c_{2k}` and the t-valuation check.
//!
//! Since `det(sX + tg + lI)` is homogeneous of degree `2N` in `(s, t, l)`,
//! the coefficient of `s^a t^b l^e` equals the coefficient of `t^b l^e` at
//! `s = 1`. All extraction works at `s = 1`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::det::laplace_det;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::partition::{BlockShape, Partition};
use crate::poly::{DegreeBounds, Poly, VarId};
use crate::somatrix::{generic_g, independent_positions, lego_nilpotent, BlockLayout, Nilpotent, SoMatrix};

/// How coefficients are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Symbolic expansion over a generic g.
    Exact,
    /// Evaluation at `trials` random points of `F_p`.
    Numeric { trials: usize, seed: u64, field: PrimeField },
}

impl Mode {
    pub fn numeric(trials: usize, seed: u64) -> Self {
        Mode::Numeric {
            trials,
            seed,
            field: PrimeField::default(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Mode::Exact)
    }
}

/// The g of a pencil: symbolic, or one random point of `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GInstance {
    Symbolic(SoMatrix),
    Numeric { field: PrimeField, values: Matrix<u64> },
}

/// Uniformly random element of so(2N) over `F_p`, drawn in variable order.
pub fn random_g(half: usize, field: &PrimeField, rng: &mut ChaCha8Rng) -> Matrix<u64> {
    let n = half;
    let mut m = Matrix::filled(2 * n, 2 * n, 0u64);
    for (v, i, j) in independent_positions(n) {
        let x = field.random(rng);
        m[(i, j)] = x;
        let neg = field.neg(x);
        match v.coord().map(|c| c.quadrant) {
            Some(crate::poly::Quadrant::A) => m[(n + j, n + i)] = neg,
            Some(crate::poly::Quadrant::B) => m[(j - n, i + n)] = neg,
            Some(crate::poly::Quadrant::C) => m[(j + n, i - n)] = neg,
            None => unreachable!(),
        }
    }
    m
}

/// A coefficient: a polynomial in the g-coordinates, or its value at a
/// sampled point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coeff {
    Exact(Poly),
    Field(u64),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(p) => p.is_zero(),
            Coeff::Field(v) => *v == 0,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(p) => write!(f, "{p}"),
            Coeff::Field(v) => write!(f, "{v}"),
        }
    }
}

/// The realisation used for a partition: its own pairing when every odd
/// pair is `[2a+1, 1]`, otherwise the Lego augmentation.
pub fn realize(p: &Partition) -> Result<(Nilpotent, Partition)> {
    if !p.is_special() {
        return Err(Error::NotSpecial(p.parts().to_vec()));
    }
    match p.pairing()?.shapes() {
        Ok(shapes) => Ok((Nilpotent::from_layout(BlockLayout::new(&shapes)), p.clone())),
        Err(Error::UnsupportedPair(..)) => {
            let lego = p.lego_set()?;
            Ok((lego_nilpotent(&lego), lego.augmented))
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone)]
pub struct Pencil {
    /// The partition whose coefficients are wanted.
    pub original: Partition,
    /// Jordan type of `x`; `original` followed by zero or more 1's.
    pub realized: Partition,
    pub x: Nilpotent,
    pub g: GInstance,
}

/// Pencil for a special partition, with g symbolic (`Mode::Exact`) or drawn
/// from the first trial's seed.
pub fn build_pencil(p: &Partition, mode: &Mode) -> Result<Pencil> {
    let (x, realized) = realize(p)?;
    let g = match *mode {
        Mode::Exact => GInstance::Symbolic(generic_g(x.half())),
        Mode::Numeric { seed, field, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            GInstance::Numeric {
                field,
                values: random_g(x.half(), &field, &mut rng),
            }
        }
    };
    Ok(Pencil {
        original: p.clone(),
        realized,
        x,
        g,
    })
}

impl Pencil {
    pub fn new(original: Partition, realized: Partition, x: Nilpotent, g: GInstance) -> Self {
        Pencil {
            original,
            realized,
            x,
            g,
        }
    }

    pub fn half(&self) -> usize {
        self.x.half()
    }

    pub fn size(&self) -> usize {
        2 * self.half()
    }

    /// `sX + tg + lI` (or `X + tg + lI` when not `homogeneous`). Symbolic g only.
    pub fn symbolic_matrix(&self, homogeneous: bool) -> Result<Matrix<Poly>> {
        let GInstance::Symbolic(g) = &self.g else {
            return Err(Error::Config("symbolic matrix of a numeric pencil".into()));
        };
        let s = Poly::var(VarId::S);
        let t = Poly::var(VarId::T);
        let l = Poly::var(VarId::Lambda);
        let n = self.size();
        Ok(Matrix::from_fn(n, n, |i, j| {
            let mut e = g.entry(i, j) * &t;
            let xv = self.x.matrix[(i, j)];
            if xv != 0 {
                let xs = if homogeneous { s.scale(&crate::poly::q(xv)) } else { Poly::int(xv) };
                e = &e + &xs;
            }
            if i == j {
                e = &e + &l;
            }
            e
        }))
    }

    /// Full homogeneous determinant. Only sensible for small sizes.
    pub fn determinant(&self) -> Result<Poly> {
        Ok(laplace_det(&self.symbolic_matrix(true)?, &DegreeBounds::none()))
    }

    /// Coefficient of `t^t_deg l^lambda_deg` (any matching power of s).
    pub fn coefficient(&self, t_deg: u32, lambda_deg: u32) -> Result<Coeff> {
        match &self.g {
            GInstance::Symbolic(_) => {
                let m = self.symbolic_matrix(false)?;
                let bounds = DegreeBounds {
                    s: None,
                    t: Some(t_deg),
                    lambda: Some(lambda_deg),
                };
                let d = laplace_det(&m, &bounds);
                Ok(Coeff::Exact(d.coeff_of(VarId::T, t_deg).coeff_of(VarId::Lambda, lambda_deg)))
            }
            GInstance::Numeric { .. } => {
                let table = self.numeric_table()?;
                Ok(Coeff::Field(
                    table
                        .get(t_deg as usize)
                        .and_then(|row| row.get(lambda_deg as usize))
                        .copied()
                        .unwrap_or(0),
                ))
            }
        }
    }

    /// `table[b][e]` = coefficient of `t^b l^e` in `det(X + tg + lI)` over
    /// `F_p`, by interpolation on a `(2N+1) x (2N+1)` grid.
    pub fn numeric_table(&self) -> Result<Vec<Vec<u64>>> {
        let GInstance::Numeric { field, values } = &self.g else {
            return Err(Error::Config("numeric table of a symbolic pencil".into()));
        };
        let n = self.size();
        let pts: Vec<u64> = (1..=n as u64 + 1).collect();
        let x = self.x.matrix.map(|&v| field.from_i64(v));
        // For each t, the polynomial in l.
        let by_t: Vec<Vec<u64>> = pts
            .iter()
            .map(|&t| {
                let ys: Vec<u64> = pts
                    .iter()
                    .map(|&l| {
                        let m = Matrix::from_fn(n, n, |i, j| {
                            let v = field.add(x[(i, j)], field.mul(t, values[(i, j)]));
                            if i == j {
                                field.add(v, l)
                            } else {
                                v
                            }
                        });
                        field.det(&m)
                    })
                    .collect();
                field.interpolate(&pts, &ys)
            })
            .collect();
        let mut table = vec![vec![0u64; n + 1]; n + 1];
        for e in 0..=n {
            let ys: Vec<u64> = by_t.iter().map(|row| row[e]).collect();
            for (b, c) in field.interpolate(&pts, &ys).into_iter().enumerate() {
                table[b][e] = c;
            }
        }
        Ok(table)
    }

    /// `chi_{2k}` for `k` up to the pencil's half size, from the realised
    /// partition. For `k <= N` of the original this agrees with the
    /// original's recipe.
    pub fn chi(&self, k: usize) -> Result<usize> {
        self.realized.chi(k)
    }

    /// `c_{2k}`: the coefficient of `s^{2k-chi} t^chi l^{2(N'-k)}`, with chi
    /// computed from the original partition.
    pub fn extract_c(&self, k: usize) -> Result<Coeff> {
        let chi = self.original.chi(k)?;
        let e = 2 * (self.half() - k);
        self.coefficient(chi as u32, e as u32)
    }

    /// All `c_{2k}` for `k = 1..=N` of the original partition.
    pub fn coefficient_table(&self) -> Result<CoefficientTable> {
        let n = self.original.half();
        let mut entries = Vec::with_capacity(n);
        let numeric = match &self.g {
            GInstance::Numeric { .. } => Some(self.numeric_table()?),
            GInstance::Symbolic(_) => None,
        };
        for k in 1..=n {
            let chi = self.original.chi(k)?;
            let e = 2 * (self.half() - k);
            let c = match &numeric {
                Some(t) => Coeff::Field(t[chi][e]),
                None => self.coefficient(chi as u32, e as u32)?,
            };
            entries.push(CoefficientEntry { k, chi, c });
        }
        Ok(CoefficientTable { entries })
    }

    /// Per `k = 1..=N'`, the t-valuation of the `l^{2(N'-k)}` coefficient.
    ///
    /// Symbolic pencils are expanded only up to `t^chi`; a valuation above
    /// chi is reported as `None`, the same as the zero polynomial.
    pub fn valuations(&self) -> Result<Vec<(usize, usize, Option<u32>)>> {
        let n = self.half();
        let mut out = Vec::with_capacity(n);
        match &self.g {
            GInstance::Symbolic(_) => {
                let m = self.symbolic_matrix(false)?;
                for k in 1..=n {
                    let chi = self.chi(k)?;
                    let e = (2 * (n - k)) as u32;
                    let bounds = DegreeBounds {
                        s: None,
                        t: Some(chi as u32),
                        lambda: Some(e),
                    };
                    let c = laplace_det(&m, &bounds).coeff_of(VarId::Lambda, e);
                    out.push((k, chi, c.valuation(VarId::T)));
                }
            }
            GInstance::Numeric { .. } => {
                let table = self.numeric_table()?;
                for k in 1..=n {
                    let chi = self.chi(k)?;
                    let e = 2 * (n - k);
                    let v = (0..=2 * n).find(|&b| table[b][e] != 0).map(|b| b as u32);
                    out.push((k, chi, v));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientEntry {
    pub k: usize,
    pub chi: usize,
    pub c: Coeff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    pub entries: Vec<CoefficientEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationEntry {
    pub two_k: usize,
    pub chi: usize,
    /// Smallest valuation seen; `None` means above chi in every trial.
    pub valuation: Option<u32>,
    /// Whether some trial (or the symbolic g) attains exactly chi.
    pub attained: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationReport {
    pub partition: Partition,
    pub realized: Partition,
    pub entries: Vec<ValuationEntry>,
}

impl ValuationReport {
    /// Equality achieved at every k.
    pub fn all_attained(&self) -> bool {
        self.entries.iter().all(|e| e.attained)
    }
}

fn merge_valuations(acc: &mut Vec<ValuationEntry>, vals: Vec<(usize, usize, Option<u32>)>) -> Result<()> {
    for (idx, (k, chi, v)) in vals.into_iter().enumerate() {
        if let Some(v) = v {
            if (v as usize) < chi {
                return Err(Error::ValuationViolation {
                    two_k: 2 * k,
                    chi,
                    valuation: v as usize,
                });
            }
        }
        if acc.len() <= idx {
            acc.push(ValuationEntry {
                two_k: 2 * k,
                chi,
                valuation: None,
                attained: false,
            });
        }
        let entry = &mut acc[idx];
        entry.valuation = match (entry.valuation, v) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        entry.attained |= v == Some(chi as u32);
    }
    Ok(())
}

/// Checks that the `l^{2(N-k)}` coefficient has t-valuation at least
/// `chi_{2k}` for every k, and records whether equality is attained.
pub fn check_valuation(p: &Partition, mode: &Mode) -> Result<ValuationReport> {
    let mut entries = Vec::new();
    let (x, realized) = realize(p)?;
    match *mode {
        Mode::Exact => {
            let pencil = Pencil::new(p.clone(), realized.clone(), x.clone(), GInstance::Symbolic(generic_g(x.half())));
            merge_valuations(&mut entries, pencil.valuations()?)?;
        }
        Mode::Numeric { trials, seed, field } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials.max(1) {
                let g = GInstance::Numeric {
                    field,
                    values: random_g(x.half(), &field, &mut rng),
                };
                let pencil = Pencil::new(p.clone(), realized.clone(), x.clone(), g);
                merge_valuations(&mut entries, pencil.valuations()?)?;
            }
        }
    }
    Ok(ValuationReport {
        partition: p.clone(),
        realized,
        entries,
    })
}

/// Result of embedding so(2N) into so(2N') by appending `(1,1)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AugmentationCheck {
    pub partition: Partition,
    pub augmented: Partition,
    /// `det` over the embedded g equals the small determinant times `l^{2(N'-N)}`.
    pub factorizes: bool,
    /// Per `k = 1..=N`: the big coefficient at the embedded g equals the
    /// small one.
    pub embedded_agree: Vec<bool>,
    /// Per `k`: the big coefficient over a fully generic g, restricted to
    /// the small coordinates, equals the small one. Empty when skipped.
    pub restricted_agree: Vec<bool>,
}

impl AugmentationCheck {
    pub fn passed(&self) -> bool {
        self.factorizes
            && self.embedded_agree.iter().all(|&b| b)
            && self.restricted_agree.iter().all(|&b| b)
    }
}

/// Appends `extra_pairs` `(1,1)` pairs to the direct realisation of `p` and
/// compares pencils. The generic-then-restrict comparison runs only when
/// the augmented size is at most `generic_limit`.
pub fn embed_and_restrict(p: &Partition, extra_pairs: usize, generic_limit: usize) -> Result<AugmentationCheck> {
    let shapes = p.pairing()?.shapes()?;
    let small_x = Nilpotent::from_layout(BlockLayout::new(&shapes));
    let n = small_x.half();
    let mut big_shapes = shapes.clone();
    big_shapes.extend(std::iter::repeat_n(BlockShape::Chain(1), extra_pairs));
    let big_x = Nilpotent::from_layout(BlockLayout::new(&big_shapes));
    let big_n = big_x.half();
    let augmented = p.augment(2 * extra_pairs)?;

    let g = generic_g(n);
    let embed = |i: usize| if i < n { i } else { big_n + i - n };
    let mut emb = Matrix::filled(2 * big_n, 2 * big_n, Poly::zero());
    for i in 0..2 * n {
        for j in 0..2 * n {
            emb[(embed(i), embed(j))] = g.entry(i, j).clone();
        }
    }
    let small = Pencil::new(p.clone(), p.clone(), small_x, GInstance::Symbolic(g));
    let big = Pencil::new(
        p.clone(),
        augmented.clone(),
        big_x.clone(),
        GInstance::Symbolic(SoMatrix::new(emb)?),
    );

    let lam = Poly::var(VarId::Lambda).pow(2 * extra_pairs as u32);
    let factorizes = big.determinant()? == &small.determinant()? * &lam;

    let mut embedded_agree = Vec::with_capacity(n);
    let mut small_c = Vec::with_capacity(n);
    for k in 1..=n {
        let c = small.extract_c(k)?;
        embedded_agree.push(big.extract_c(k)? == c);
        small_c.push(c);
    }

    let mut restricted_agree = Vec::new();
    if 2 * big_n <= generic_limit {
        let generic = Pencil::new(p.clone(), augmented.clone(), big_x, GInstance::Symbolic(generic_g(big_n)));
        for k in 1..=n {
            let Coeff::Exact(c) = generic.extract_c(k)? else { unreachable!() };
            let r = c.restrict(|v| v.coord().is_some_and(|c| c.max_index() <= n));
            restricted_agree.push(Coeff::Exact(r) == small_c[k - 1]);
        }
    }
    Ok(AugmentationCheck {
        partition: p.clone(),
        augmented,
        factorizes,
        embedded_agree,
        restricted_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pencil_22_is_homogeneous() {
        let pen = build_pencil(&part(&[2, 2]), &Mode::Exact).unwrap();
        assert_eq!(pen.size(), 4);
        let d = pen.determinant().unwrap();
        for (m, _) in d.terms() {
            let deg = m.exponent(VarId::S) + m.exponent(VarId::T) + m.exponent(VarId::Lambda);
            assert_eq!(deg, 4);
            assert_eq!(m.exponent(VarId::Lambda) % 2, 0);
        }
    }

    #[test]
    fn pencil_4431_is_direct() {
        let pen = build_pencil(&part(&[4, 4, 3, 1]), &Mode::numeric(1, 3)).unwrap();
        assert_eq!(pen.size(), 12);
        assert_eq!(pen.realized, part(&[4, 4, 3, 1]));
        let aug = build_pencil(&part(&[5, 3]), &Mode::numeric(1, 3)).unwrap();
        assert_eq!(aug.realized, part(&[5, 3, 1, 1]));
    }

    #[test]
    fn numeric_pencils_repeat() {
        let a = build_pencil(&part(&[3, 3, 1, 1]), &Mode::numeric(1, 99)).unwrap();
        let b = build_pencil(&part(&[3, 3, 1, 1]), &Mode::numeric(1, 99)).unwrap();
        assert_eq!(a.g, b.g);
        let c = build_pencil(&part(&[3, 3, 1, 1]), &Mode::numeric(1, 100)).unwrap();
        assert_ne!(a.g, c.g);
    }

    #[test]
    fn c4_of_2211_is_a_square() {
        let pen = build_pencil(&part(&[2, 2, 1, 1]), &Mode::Exact).unwrap();
        let Coeff::Exact(c) = pen.extract_c(2).unwrap() else { panic!() };
        let a21 = Poly::var(VarId::a(2, 1));
        assert!(c == &a21 * &a21 || c == -(&a21 * &a21), "c_4 = {c}");
    }

    #[test]
    fn c4_of_22_matches_chi_recipe() {
        // chi_4 = 2 for [2,2], so c_4 is the s^2 t^2 coefficient.
        let pen = build_pencil(&part(&[2, 2]), &Mode::Exact).unwrap();
        let Coeff::Exact(c) = pen.extract_c(2).unwrap() else { panic!() };
        let a21 = Poly::var(VarId::a(2, 1));
        assert_eq!(c, (&a21 * &a21).scale(&q(1)));
    }

    #[test]
    fn first_part_has_chi_one() {
        let p = part(&[4, 4, 3, 1]);
        for k in 1..=2 {
            assert_eq!(p.chi(k).unwrap(), 1);
        }
    }

    #[test]
    fn valuations_small() {
        let r = check_valuation(&part(&[2, 2]), &Mode::Exact).unwrap();
        let v: Vec<_> = r.entries.iter().map(|e| e.valuation).collect();
        assert_eq!(v, vec![Some(1), Some(2)]);
        assert!(r.all_attained());
    }

    #[test]
    fn valuations_4431_numeric() {
        let r = check_valuation(&part(&[4, 4, 3, 1]), &Mode::numeric(3, 1)).unwrap();
        let v: Vec<_> = r.entries.iter().map(|e| e.valuation).collect();
        assert_eq!(v, vec![Some(1), Some(1), Some(2), Some(2), Some(3), Some(4)]);
        assert!(r.all_attained());
    }

    #[test]
    fn zero_g_has_infinite_valuation() {
        let (x, realized) = realize(&part(&[2, 2])).unwrap();
        let pen = Pencil::new(part(&[2, 2]), realized, x, GInstance::Symbolic(SoMatrix::zero(2)));
        assert!(pen.valuations().unwrap().iter().all(|(_, _, v)| v.is_none()));
    }

    #[test]
    fn numeric_matches_symbolic() {
        let p = part(&[3, 1]);
        let field = PrimeField::default();
        let sym = build_pencil(&p, &Mode::Exact).unwrap();
        let num = build_pencil(&p, &Mode::Numeric { trials: 1, seed: 5, field }).unwrap();
        let GInstance::Numeric { values, .. } = &num.g else { panic!() };
        let assign = |v: VarId| {
            independent_positions(2)
                .into_iter()
                .find(|(w, _, _)| *w == v)
                .map(|(_, i, j)| values[(i, j)])
        };
        for k in 1..=2 {
            let Coeff::Exact(c) = sym.extract_c(k).unwrap() else { panic!() };
            let Coeff::Field(f) = num.extract_c(k).unwrap() else { panic!() };
            assert_eq!(c.eval_mod(&field, assign).unwrap(), f);
        }
    }

    #[test]
    fn augmentation_small() {
        let r = embed_and_restrict(&part(&[3, 1]), 1, 6).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.restricted_agree.len(), 2);
    }
}
