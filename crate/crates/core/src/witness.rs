//! Tapped blocks, the optimal elimination, the residual minor `z` and the
//! Pfaffian witness for `c_{k_j}`.
//!
//! For a conjecture index `j` the first `j` Lego blocks are tapped. Each
//! tapped block spends its `s` entries on a forced set of rows and columns
//! and leaves one surviving row and one surviving column, so the surviving
//! `j x j` submatrix `z` of `g` carries all remaining `t`'s. Type II blocks
//! admit two equally good `s` choices, which is where the `2^{b_j}` comes
//! from.
//!
//! When the cut at `j` falls inside the 1's appended by the Lego
//! conversion (only possible for `j = 2m`), the witness is instead the
//! lowest t-coefficient of `Pf((X + tg) J)` over a direct realisation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::det::{laplace_det, pfaffian, pfaffian_truncated};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::partition::{BlockShape, LegoBlock, LegoKind, LegoSet, Partition, Sign};
use crate::pencil::{random_g, Coeff, GInstance, Mode, Pencil};
use crate::poly::{q, DegreeBounds, Poly, VarId};
use crate::somatrix::{generic_g, lego_nilpotent, partner, BlockLayout, Nilpotent, SoMatrix};

/// The first `j` blocks of the Lego set. `j` must be a conjecture index of
/// the original partition.
pub fn greedy_select(lego: &LegoSet, j: usize) -> Result<&[LegoBlock]> {
    if !lego.original.conjecture_indices()?.contains(&j) {
        return Err(Error::NotAConjectureIndex {
            j,
            parts: lego.original.parts().to_vec(),
        });
    }
    Ok(&lego.blocks[..j])
}

/// One tapped block after elimination. Indices are 0-based and global.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TappedBlock {
    pub block: LegoBlock,
    /// Entries of X used by the `s`'s (one representative choice).
    pub s_entries: Vec<(usize, usize)>,
    /// Diagonal positions taken by `l`.
    pub lambda: Vec<usize>,
    pub survivor_row: usize,
    pub survivor_col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub half: usize,
    pub tapped: Vec<TappedBlock>,
    /// Surviving rows, ascending.
    pub rows: Vec<usize>,
    /// Surviving columns, ascending.
    pub cols: Vec<usize>,
}

impl Elimination {
    pub fn s_count(&self) -> usize {
        self.tapped.iter().map(|t| t.s_entries.len()).sum()
    }

    pub fn lambda_count(&self) -> usize {
        self.tapped.iter().map(|t| t.lambda.len()).sum()
    }
}

/// An `s`-choice for a Hook block, in local 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookChoice {
    pub s_entries: Vec<(usize, usize)>,
    pub lambda: usize,
    pub survivor_row: usize,
    pub survivor_col: usize,
}

/// Enumerates every way to place `2r - 2` of the `2r` nonzero entries of the
/// `Hook(r)` block on distinct rows and columns, and returns the ones that
/// leave exactly one diagonal slot for `l` plus one surviving row and column.
pub fn hook_choices(r: usize) -> Vec<HookChoice> {
    assert!(r >= 2, "Hook(1) has no s entries");
    let local = crate::somatrix::shape_block(BlockShape::Hook(r));
    let w = 2 * r;
    let entries: Vec<(usize, usize)> = (0..w)
        .flat_map(|i| (0..w).map(move |j| (i, j)))
        .filter(|&(i, j)| local[(i, j)] != 0)
        .collect();
    let mut out = Vec::new();
    // Choose the 2 entries to drop.
    for a in 0..entries.len() {
        for b in a + 1..entries.len() {
            let kept: Vec<(usize, usize)> = entries
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != a && k != b)
                .map(|(_, &e)| e)
                .collect();
            let mut rows: Vec<usize> = kept.iter().map(|e| e.0).collect();
            let mut cols: Vec<usize> = kept.iter().map(|e| e.1).collect();
            rows.sort_unstable();
            cols.sort_unstable();
            rows.dedup();
            cols.dedup();
            if rows.len() != kept.len() || cols.len() != kept.len() {
                continue;
            }
            let free_rows: Vec<usize> = (0..w).filter(|i| !rows.contains(i)).collect();
            let free_cols: Vec<usize> = (0..w).filter(|i| !cols.contains(i)).collect();
            let common: Vec<usize> = free_rows.iter().copied().filter(|i| free_cols.contains(i)).collect();
            if common.len() != 1 {
                continue;
            }
            let lambda = common[0];
            let survivor_row = *free_rows.iter().find(|&&i| i != lambda).unwrap();
            let survivor_col = *free_cols.iter().find(|&&i| i != lambda).unwrap();
            out.push(HookChoice {
                s_entries: kept,
                lambda,
                survivor_row,
                survivor_col,
            });
        }
    }
    out
}

fn tap(block: LegoBlock, layout: &BlockLayout) -> TappedBlock {
    let n = layout.half;
    let o = layout.blocks[block.unit].offset;
    let g = |local: usize| layout.global(block.unit, local);
    match block.kind {
        LegoKind::TypeI { r, sign: Sign::Plus } => TappedBlock {
            block,
            s_entries: (0..r - 1).map(|k| (o + k, o + k + 1)).collect(),
            lambda: vec![],
            survivor_row: o + r - 1,
            survivor_col: o,
        },
        LegoKind::TypeI { r, sign: Sign::Minus } => TappedBlock {
            block,
            s_entries: (0..r - 1).map(|k| (n + o + k + 1, n + o + k)).collect(),
            lambda: vec![],
            survivor_row: n + o,
            survivor_col: n + o + r - 1,
        },
        LegoKind::TypeII { p } => {
            let r = p.div_ceil(2);
            if r == 1 {
                return TappedBlock {
                    block,
                    s_entries: vec![],
                    lambda: vec![],
                    survivor_row: g(1),
                    survivor_col: g(0),
                };
            }
            // The choice that keeps the whole upper chain.
            let mut s: Vec<(usize, usize)> = (0..r - 1).map(|k| (g(k), g(k + 1))).collect();
            s.extend((0..r - 2).map(|k| (g(r + k + 1), g(r + k))));
            s.push((g(r - 1), g(2 * r - 2)));
            TappedBlock {
                block,
                s_entries: s,
                lambda: vec![g(2 * r - 1)],
                survivor_row: g(r),
                survivor_col: g(0),
            }
        }
    }
}

/// Applies the elimination to the first `j` blocks of the Lego set.
pub fn eliminate(lego: &LegoSet, layout: &BlockLayout, j: usize) -> Result<Elimination> {
    let tapped: Vec<TappedBlock> = greedy_select(lego, j)?.iter().map(|&b| tap(b, layout)).collect();
    let mut rows: Vec<usize> = tapped.iter().map(|t| t.survivor_row).collect();
    let mut cols: Vec<usize> = tapped.iter().map(|t| t.survivor_col).collect();
    rows.sort_unstable();
    cols.sort_unstable();
    Ok(Elimination {
        half: layout.half,
        tapped,
        rows,
        cols,
    })
}

/// The surviving `j x j` minor of g.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualMinor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Columns reordered as the partners of `rows`.
    pub paired_cols: Vec<usize>,
    /// `det z = sigma * det(g[rows, paired_cols])`.
    pub sigma: i32,
    pub z: Option<Matrix<Poly>>,
    /// `g[rows, paired_cols]`, antisymmetric.
    pub antisym: Option<Matrix<Poly>>,
}

impl Serialize for Matrix<Poly> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows())
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

fn permutation_sign(from: &[usize], to: &[usize]) -> i32 {
    // Sign of the permutation taking `to` to `from` (same elements).
    let pos: Vec<usize> = from.iter().map(|x| to.iter().position(|y| y == x).unwrap()).collect();
    let mut seen = vec![false; pos.len()];
    let mut sign = 1;
    for start in 0..pos.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = pos[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Index data of the residual minor, with the pairing check.
pub fn residual_indices(elim: &Elimination) -> Result<ResidualMinor> {
    let n = elim.half;
    let paired_cols: Vec<usize> = elim.rows.iter().map(|&r| partner(r, n)).collect();
    let mut check = paired_cols.clone();
    check.sort_unstable();
    if check != elim.cols {
        return Err(Error::PairingViolation {
            rows: elim.rows.iter().map(|r| r + 1).collect(),
            cols: elim.cols.iter().map(|c| c + 1).collect(),
        });
    }
    Ok(ResidualMinor {
        rows: elim.rows.clone(),
        cols: elim.cols.clone(),
        sigma: permutation_sign(&paired_cols, &elim.cols),
        paired_cols,
        z: None,
        antisym: None,
    })
}

/// `z = g[rows, cols]` and its antisymmetric column permutation.
pub fn residual_minor(g: &SoMatrix, elim: &Elimination) -> Result<ResidualMinor> {
    let mut r = residual_indices(elim)?;
    let z = g.matrix().select(&r.rows, &r.cols);
    let a = g.matrix().select(&r.rows, &r.paired_cols);
    let size = a.rows();
    for i in 0..size {
        for k in i..size {
            if a[(i, k)] != -&a[(k, i)] {
                return Err(Error::PairingViolation {
                    rows: r.rows.iter().map(|x| x + 1).collect(),
                    cols: r.cols.iter().map(|x| x + 1).collect(),
                });
            }
        }
    }
    r.z = Some(z);
    r.antisym = Some(a);
    Ok(r)
}

fn pow2(e: usize) -> Poly {
    Poly::constant(q(2).pow(e as i32))
}

/// `2^{b/2} Pf(z')`, normalised to a positive leading coefficient.
pub fn witness_sqrt(z: &ResidualMinor, b: usize) -> Result<Poly> {
    if b % 2 != 0 {
        return Err(Error::OddTypeIICount(b));
    }
    let a = z
        .antisym
        .as_ref()
        .ok_or_else(|| Error::Config("residual minor without entries".into()))?;
    Ok((&pow2(b / 2) * &pfaffian(a)?).normalized())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Residual minor of the Lego elimination.
    Lego,
    /// Lowest t-coefficient of the pencil Pfaffian.
    Pfaffian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub partition: Partition,
    pub j: usize,
    pub k_j: usize,
    pub b_j: usize,
    pub route: Route,
    pub mode: &'static str,
    pub trials: usize,
    /// Size `2N'` of the matrices the check ran at.
    pub size: usize,
    /// Surviving rows and columns, 1-based (Lego route).
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det_z: Option<Poly>,
    pub pfaffian_z: Option<Poly>,
    pub witness: Option<Poly>,
    pub observed_c: Option<Poly>,
    /// `observed = sign * witness^2`.
    pub sign: Option<i32>,
    /// `observed = det_sign * 2^b * det z` (Lego route).
    pub det_sign: Option<i32>,
    pub sigma: Option<i32>,
    pub status: Status,
    pub failure: Option<String>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// `Err(VerificationFailed)` for a failing report.
    pub fn into_result(self) -> Result<WitnessReport> {
        match self.status {
            Status::Pass => Ok(self),
            Status::Fail => Err(Error::VerificationFailed {
                parts: self.partition.parts().to_vec(),
                j: self.j,
                identity: self.failure.unwrap_or_default(),
            }),
        }
    }

    fn fail(&mut self, why: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Fail;
            self.failure = Some(why.into());
        }
    }
}

fn stream_id(p: &Partition, j: usize) -> u64 {
    p.parts()
        .iter()
        .fold(j as u64, |h, &x| h.wrapping_mul(1_000_003).wrapping_add(x as u64))
}

/// Deterministic per-`(P, j)` generator, independent of call order.
pub fn rng_for(seed: u64, p: &Partition, j: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(p, j));
    rng
}

/// A nilpotent of Jordan type exactly `P`. Equal parts pair as `Chain`;
/// a leftover odd part pairs with a 1 as `Hook` while 1's last, and any odd
/// parts still left pair with each other as `OddPair`.
pub fn direct_realization(p: &Partition) -> Result<Nilpotent> {
    let mut shapes = Vec::new();
    let mut ones = p.parts().iter().filter(|&&x| x == 1).count();
    let mut leftover = Vec::new();
    for run in p.parts().chunk_by(|a, b| a == b) {
        let v = run[0];
        if v == 1 {
            continue;
        }
        shapes.extend(std::iter::repeat_n(BlockShape::Chain(v), run.len() / 2));
        if run.len() % 2 == 1 {
            if v % 2 == 0 {
                return Err(Error::PairingImpossible(p.parts().to_vec()));
            }
            if ones > 0 {
                ones -= 1;
                shapes.push(BlockShape::Hook(v.div_ceil(2)));
            } else {
                leftover.push(v);
            }
        }
    }
    for pair in leftover.chunks(2) {
        match *pair {
            [x, y] => shapes.push(BlockShape::OddPair { a: x / 2, b: y / 2 }),
            _ => return Err(Error::PairingImpossible(p.parts().to_vec())),
        }
    }
    shapes.extend(std::iter::repeat_n(BlockShape::Chain(1), ones / 2));
    let x = Nilpotent::from_layout(BlockLayout::new(&shapes));
    debug_assert_eq!(x.layout.jordan_type(), p.parts());
    Ok(x)
}

struct Prepared {
    lego: LegoSet,
    k_j: usize,
    b_j: usize,
}

fn prepare(p: &Partition, j: usize) -> Result<Prepared> {
    let lego = p.lego_set()?;
    greedy_select(&lego, j)?;
    let b_j = lego.type_ii_count(j);
    if b_j % 2 != 0 {
        return Err(Error::OddTypeIICount(b_j));
    }
    let k_j = p.partial_sums()[j];
    if lego.minor_dim_sum(j) - b_j != k_j {
        return Err(Error::VerificationFailed {
            parts: p.parts().to_vec(),
            j,
            identity: format!(
                "counting identity: sum s_beta - b_j = {} but k_j = {k_j}",
                lego.minor_dim_sum(j) - b_j
            ),
        });
    }
    Ok(Prepared { lego, k_j, b_j })
}

fn empty_report(p: &Partition, j: usize, prep: &Prepared, route: Route, mode: &Mode, size: usize) -> WitnessReport {
    let (mode_name, trials) = match mode {
        Mode::Exact => ("exact", 1),
        Mode::Numeric { trials, .. } => ("numeric", *trials),
    };
    WitnessReport {
        partition: p.clone(),
        j,
        k_j: prep.k_j,
        b_j: prep.b_j,
        route,
        mode: mode_name,
        trials,
        size,
        rows: vec![],
        cols: vec![],
        det_z: None,
        pfaffian_z: None,
        witness: None,
        observed_c: None,
        sign: None,
        det_sign: None,
        sigma: None,
        status: Status::Pass,
        failure: None,
    }
}

/// The witness polynomial for `c_{k_j}`, without computing `c_{k_j}`.
pub fn witness(p: &Partition, j: usize) -> Result<Poly> {
    let prep = prepare(p, j)?;
    if prep.lego.cut_is_realized(j) {
        let x = lego_nilpotent(&prep.lego);
        let elim = eliminate(&prep.lego, &x.layout, j)?;
        let z = residual_minor(&generic_g(x.half()), &elim)?;
        witness_sqrt(&z, prep.b_j)
    } else {
        let x = direct_realization(p)?;
        let m = p.len() / 2;
        let pf = pencil_pfaffian(&x, &generic_g(x.half()), m as u32)?;
        Ok(pf.coeff_of(VarId::T, m as u32).normalized())
    }
}

/// `Pf((X + tg) J)` truncated at `t^max_t`.
fn pencil_pfaffian(x: &Nilpotent, g: &SoMatrix, max_t: u32) -> Result<Poly> {
    let n = x.half();
    let t = Poly::var(VarId::T);
    let m = Matrix::from_fn(2 * n, 2 * n, |i, j| {
        let c = partner(j, n);
        let mut e = g.entry(i, c) * &t;
        let xv = x.matrix[(i, c)];
        if xv != 0 {
            e = &e + &Poly::int(xv);
        }
        e
    });
    pfaffian_truncated(
        &m,
        &DegreeBounds {
            s: None,
            t: Some(max_t),
            lambda: None,
        },
    )
}

/// Checks the witness identity for `(P, j)`.
///
/// Structural errors (not a conjecture index, odd Type II count, pairing
/// violation) are returned as `Err`; a failed identity yields a report with
/// `status = Fail`.
pub fn verify(p: &Partition, j: usize, mode: &Mode) -> Result<WitnessReport> {
    if !p.is_special() {
        return Err(Error::NotSpecial(p.parts().to_vec()));
    }
    let prep = prepare(p, j)?;
    if prep.lego.cut_is_realized(j) {
        verify_lego(p, j, &prep, mode)
    } else {
        verify_pfaffian(p, j, &prep, mode)
    }
}

/// [`verify`] at every conjecture index.
pub fn verify_all(p: &Partition, mode: &Mode) -> Result<Vec<WitnessReport>> {
    p.conjecture_indices()?
        .into_iter()
        .map(|j| verify(p, j, mode))
        .collect()
}

fn verify_lego(p: &Partition, j: usize, prep: &Prepared, mode: &Mode) -> Result<WitnessReport> {
    let x = lego_nilpotent(&prep.lego);
    let n = x.half();
    let elim = eliminate(&prep.lego, &x.layout, j)?;
    let idx = residual_indices(&elim)?;
    let k_j = prep.k_j;
    let b = prep.b_j;
    let mut report = empty_report(p, j, prep, Route::Lego, mode, 2 * n);
    report.rows = idx.rows.iter().map(|r| r + 1).collect();
    report.cols = idx.cols.iter().map(|c| c + 1).collect();
    report.sigma = Some(idx.sigma);
    let expected_s = k_j - j;
    // Each tapped Type II block holds one l; untapped blocks supply the rest.
    if elim.s_count() != expected_s || elim.lambda_count() != b {
        report.fail(format!(
            "elimination uses {} s and {} l, expected {expected_s} and {b}",
            elim.s_count(),
            elim.lambda_count(),
        ));
        return Ok(report);
    }
    let lam = (2 * n - k_j) as u32;
    match *mode {
        Mode::Exact => {
            let g = generic_g(n);
            let z = residual_minor(&g, &elim)?;
            let det_z = laplace_det(z.z.as_ref().unwrap(), &DegreeBounds::none());
            let pf = pfaffian(z.antisym.as_ref().unwrap())?;
            let w = witness_sqrt(&z, b)?;
            let pencil = Pencil::new(p.clone(), prep.lego.augmented.clone(), x, GInstance::Symbolic(g));
            let Coeff::Exact(observed) = pencil.coefficient(j as u32, lam)? else { unreachable!() };
            report.det_z = Some(det_z.clone());
            report.pfaffian_z = Some(pf.clone());
            report.witness = Some(w.clone());
            report.observed_c = Some(observed.clone());
            if det_z != (&pf * &pf).scale(&q(z.sigma as i64)) {
                report.fail("det z != sigma * Pf(z')^2");
                return Ok(report);
            }
            let predicted = &pow2(b) * &det_z;
            let det_sign = if observed == predicted {
                1
            } else if observed == -&predicted {
                -1
            } else {
                report.fail(format!("c_{k_j} != +-2^{b} det z"));
                return Ok(report);
            };
            let sign = det_sign * z.sigma;
            report.det_sign = Some(det_sign);
            report.sign = Some(sign);
            match observed.scale(&q(sign as i64)).sqrt() {
                Ok(root) if root == w => {}
                Ok(root) => report.fail(format!("sqrt(sign * c_{k_j}) = {root} differs from the witness")),
                Err(_) => report.fail(format!("sign * c_{k_j} is not a square")),
            }
        }
        Mode::Numeric { trials, seed, field } => {
            let mut rng = rng_for(seed, p, j);
            let two_b2 = field.pow(2, (b / 2) as u64);
            let mut sign: Option<i32> = None;
            for trial in 0..trials {
                let values = random_g(n, &field, &mut rng);
                let zf = values.select(&idx.rows, &idx.cols);
                let af = values.select(&idx.rows, &idx.paired_cols);
                let det_z = field.det(&zf);
                let pf = field.pfaffian(&af)?;
                let sig = if idx.sigma == 1 { 1 } else { field.neg(1) };
                if det_z != field.mul(sig, field.mul(pf, pf)) {
                    report.fail(format!("trial {trial}: det z != sigma * Pf(z')^2"));
                    break;
                }
                let pencil = Pencil::new(
                    p.clone(),
                    prep.lego.augmented.clone(),
                    x.clone(),
                    GInstance::Numeric { field, values },
                );
                let Coeff::Field(observed) = pencil.coefficient(j as u32, lam)? else { unreachable!() };
                let w = field.mul(two_b2, pf);
                let w2 = field.mul(w, w);
                let this = if w2 == 0 {
                    if observed != 0 {
                        report.fail(format!("trial {trial}: witness vanishes but c_{k_j} does not"));
                        break;
                    }
                    continue;
                } else if observed == w2 {
                    1
                } else if observed == field.neg(w2) {
                    -1
                } else {
                    report.fail(format!("trial {trial}: c_{k_j} != +-witness^2"));
                    break;
                };
                match sign {
                    None => sign = Some(this),
                    Some(s) if s != this => {
                        report.fail(format!("trial {trial}: sign flipped"));
                        break;
                    }
                    _ => {}
                }
            }
            if report.passed() && sign.is_none() {
                report.fail("witness vanished in every trial");
            }
            report.sign = sign;
            report.det_sign = sign.map(|s| s * idx.sigma);
        }
    }
    Ok(report)
}

fn verify_pfaffian(p: &Partition, j: usize, prep: &Prepared, mode: &Mode) -> Result<WitnessReport> {
    let m = p.len() / 2;
    if j != 2 * m {
        return Err(Error::CutNotRealized {
            j,
            augmented: prep.lego.augmented.parts().to_vec(),
        });
    }
    let x = direct_realization(p)?;
    let n = x.half();
    let mut report = empty_report(p, j, prep, Route::Pfaffian, mode, 2 * n);
    let parity = if n % 2 == 0 { 1 } else { -1 };
    report.sign = Some(parity);
    match *mode {
        Mode::Exact => {
            let g = generic_g(n);
            let pf = pencil_pfaffian(&x, &g, m as u32)?;
            if let Some(i) = (0..m as u32).find(|&i| !pf.coeff_of(VarId::T, i).is_zero()) {
                report.fail(format!("Pf((X+tg)J) has a t^{i} term below t^{m}"));
                return Ok(report);
            }
            let w = pf.coeff_of(VarId::T, m as u32);
            let pencil = Pencil::new(p.clone(), p.clone(), x, GInstance::Symbolic(g));
            let Coeff::Exact(observed) = pencil.coefficient(j as u32, 0)? else { unreachable!() };
            report.pfaffian_z = Some(w.clone());
            report.witness = Some(w.normalized());
            report.observed_c = Some(observed.clone());
            if w.is_zero() {
                report.fail("lowest Pfaffian coefficient vanishes");
            } else if observed != (&w * &w).scale(&q(parity as i64)) {
                report.fail(format!("c_{} != (-1)^N w^2", prep.k_j));
            } else {
                match observed.scale(&q(parity as i64)).sqrt() {
                    Ok(root) if root == w.normalized() => {}
                    _ => report.fail(format!("sqrt((-1)^N c_{}) differs from the witness", prep.k_j)),
                }
            }
        }
        Mode::Numeric { trials, seed, field } => {
            let mut rng = rng_for(seed, p, j);
            let sig = if parity == 1 { 1 } else { field.neg(1) };
            let mut nonzero = false;
            for trial in 0..trials {
                let values = random_g(n, &field, &mut rng);
                let ws = numeric_pencil_pfaffian(&x, &values, &field)?;
                if let Some(i) = (0..m).find(|&i| ws[i] != 0) {
                    report.fail(format!("trial {trial}: Pf((X+tg)J) has a t^{i} term below t^{m}"));
                    break;
                }
                let w = ws[m];
                let pencil = Pencil::new(p.clone(), p.clone(), x.clone(), GInstance::Numeric { field, values });
                let Coeff::Field(observed) = pencil.coefficient(j as u32, 0)? else { unreachable!() };
                if observed != field.mul(sig, field.mul(w, w)) {
                    report.fail(format!("trial {trial}: c_{} != (-1)^N w^2", prep.k_j));
                    break;
                }
                nonzero |= w != 0;
            }
            if report.passed() && !nonzero {
                report.fail("witness vanished in every trial");
            }
        }
    }
    Ok(report)
}

/// Coefficients in t of `Pf((X + tg) J)` over `F_p`.
fn numeric_pencil_pfaffian(x: &Nilpotent, g: &Matrix<u64>, field: &PrimeField) -> Result<Vec<u64>> {
    let n = x.half();
    let pts: Vec<u64> = (1..=n as u64 + 1).collect();
    let ys = pts
        .iter()
        .map(|&t| {
            let m = Matrix::from_fn(2 * n, 2 * n, |i, j| {
                let c = partner(j, n);
                field.add(field.from_i64(x.matrix[(i, c)]), field.mul(t, g[(i, c)]))
            });
            field.pfaffian(&m)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(field.interpolate(&pts, &ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let l = part(&[7, 5, 2, 2]).lego_set().unwrap();
        let sel = greedy_select(&l, 2).unwrap();
        assert_eq!(sel.iter().map(|b| b.to_string()).collect::<Vec<_>>(), ["(7,1)", "(5,1)"]);
        assert_eq!(l.type_ii_count(2), 2);
        assert_eq!(l.minor_dim_sum(2) - 2, 12);

        let l = part(&[4, 4, 3, 1]).lego_set().unwrap();
        assert_eq!(greedy_select(&l, 2).unwrap().len(), 2);
        assert_eq!(l.minor_dim_sum(2) - l.type_ii_count(2), 8);
        assert!(matches!(greedy_select(&l, 3), Err(Error::NotAConjectureIndex { .. })));

        let l = part(&[2, 2, 2, 2]).lego_set().unwrap();
        assert!(matches!(greedy_select(&l, 2), Err(Error::NotAConjectureIndex { .. })));
    }

    fn survivors(v: &[usize], j: usize) -> (Vec<usize>, Vec<usize>) {
        let l = part(v).lego_set().unwrap();
        let x = lego_nilpotent(&l);
        let e = eliminate(&l, &x.layout, j).unwrap();
        (
            e.rows.iter().map(|r| r + 1).collect(),
            e.cols.iter().map(|c| c + 1).collect(),
        )
    }

    #[test]
    fn elimination_examples() {
        assert_eq!(survivors(&[2, 2, 1, 1], 2), (vec![2, 4], vec![1, 5]));
        assert_eq!(survivors(&[2, 2], 2), (vec![2, 3], vec![1, 4]));
    }

    #[test]
    fn hook_choices_agree() {
        for r in 2..=4 {
            let c = hook_choices(r);
            assert_eq!(c.len(), 2, "r = {r}");
            for ch in &c {
                assert_eq!((ch.survivor_row, ch.survivor_col), (r, 0));
                assert_eq!(ch.s_entries.len(), 2 * r - 2);
            }
            let mut l: Vec<usize> = c.iter().map(|ch| ch.lambda).collect();
            l.sort_unstable();
            assert_eq!(l, vec![r - 1, 2 * r - 1]);
        }
    }

    #[test]
    fn residual_2211() {
        let l = part(&[2, 2, 1, 1]).lego_set().unwrap();
        let x = lego_nilpotent(&l);
        let e = eliminate(&l, &x.layout, 2).unwrap();
        let z = residual_minor(&generic_g(3), &e).unwrap();
        let a21 = Poly::var(VarId::a(2, 1));
        let zm = z.z.as_ref().unwrap();
        assert_eq!(zm[(0, 0)], a21);
        assert!(zm[(0, 1)].is_zero() && zm[(1, 0)].is_zero());
        assert_eq!(zm[(1, 1)], -&a21);
        assert_eq!(witness_sqrt(&z, 0).unwrap(), a21);
        let w2 = witness_sqrt(&z, 2).unwrap();
        assert_eq!(w2, a21.scale(&q(2)));
        assert_eq!(witness_sqrt(&z, 1), Err(Error::OddTypeIICount(1)));
    }

    #[test]
    fn pairing_violation_detected() {
        let e = Elimination {
            half: 2,
            tapped: vec![],
            rows: vec![0, 1],
            cols: vec![0, 1],
        };
        assert!(matches!(residual_indices(&e), Err(Error::PairingViolation { .. })));
    }

    #[test]
    fn verify_small_exact() {
        let r = verify(&part(&[2, 2]), 2, &Mode::Exact).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.witness, Some(Poly::var(VarId::a(2, 1))));
        let r = verify(&part(&[2, 2, 1, 1]), 2, &Mode::Exact).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.witness, Some(Poly::var(VarId::a(2, 1))));
        let r = verify(&part(&[3, 1]), 2, &Mode::Exact).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.route, Route::Pfaffian);
    }

    #[test]
    fn verify_5_3_carries_factor_two() {
        let r = verify(&part(&[5, 3]), 2, &Mode::Exact).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.b_j, 2);
        let w = r.witness.unwrap();
        let pf = r.pfaffian_z.unwrap();
        assert_eq!(w, pf.scale(&q(2)).normalized());
    }

    #[test]
    fn verify_numeric_4431() {
        for j in [2, 4] {
            let r = verify(&part(&[4, 4, 3, 1]), j, &Mode::numeric(4, 1)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn verify_refuses_non_indices() {
        assert!(matches!(
            verify(&part(&[2, 2, 2, 2]), 2, &Mode::Exact),
            Err(Error::NotAConjectureIndex { .. })
        ));
        assert!(verify(&part(&[4, 3, 2, 1]), 2, &Mode::Exact).is_err());
    }

    #[test]
    fn direct_realization_pairs_with_ones() {
        let x = direct_realization(&part(&[5, 3, 1, 1])).unwrap();
        assert_eq!(x.layout.jordan_type(), vec![5, 3, 1, 1]);
        assert_eq!(crate::somatrix::jordan_type(&x.matrix), vec![5, 3, 1, 1]);
        for parts in [&[5, 3][..], &[7, 5, 3, 1]] {
            let x = direct_realization(&part(parts)).unwrap();
            assert!(x.layout.blocks.iter().any(|b| matches!(b.shape, BlockShape::OddPair { .. })));
            assert_eq!(crate::somatrix::jordan_type(&x.matrix), parts.to_vec());
        }
    }

    #[test]
    fn witness_matches_verify() {
        let p = part(&[3, 3, 1, 1]);
        for j in p.conjecture_indices().unwrap() {
            let r = verify(&p, j, &Mode::Exact).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(Some(witness(&p, j).unwrap()), r.witness);
        }
    }
}
