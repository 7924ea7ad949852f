//! Combinatorics of D-partitions: validity, specialness, partial sums and
//! the chi recipe, pairing into so-blocks, augmentation, and conversion to
//! Lego sets.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Parts in nonincreasing order, all positive, even total `2N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

fn check_shape(parts: &[usize]) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::InvalidInput("empty partition".into()));
    }
    if parts.contains(&0) {
        return Err(Error::InvalidInput(format!("nonpositive part in {parts:?}")));
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput(format!("{parts:?} is not in descending order")));
    }
    Ok(())
}

/// Every even value occurs an even number of times.
pub fn is_d_partition(parts: &[usize]) -> Result<bool> {
    check_shape(parts)?;
    Ok(parts
        .chunk_by(|a, b| a == b)
        .all(|run| run[0] % 2 == 1 || run.len() % 2 == 0))
}

/// Every maximal run of odd parts, delimited by even parts or the ends of
/// the descending list, has even length.
///
/// This is the run criterion alone; combine with [`is_d_partition`] (or use
/// [`Partition::is_special`]) for special D-partitions.
pub fn is_special(parts: &[usize]) -> Result<bool> {
    check_shape(parts)?;
    Ok(parts
        .split(|p| p % 2 == 0)
        .all(|run| run.len() % 2 == 0))
}

impl Partition {
    /// Validates shape (descending, positive) and an even total.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        check_shape(&parts)?;
        if parts.iter().sum::<usize>() % 2 != 0 {
            return Err(Error::InvalidInput(format!("{parts:?} has odd total")));
        }
        Ok(Partition { parts })
    }

    /// A special D-partition, or the reason it is not one.
    pub fn special(parts: Vec<usize>) -> Result<Self> {
        let p = Self::new(parts)?;
        if !p.is_d() {
            return Err(Error::NotDPartition(p.parts));
        }
        if !p.is_special() {
            return Err(Error::NotSpecial(p.parts));
        }
        Ok(p)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of parts (`2m` for a D-partition).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `N` with `total = 2N`.
    pub fn half(&self) -> usize {
        self.total() / 2
    }

    /// 1-based part `p_i`; zero past the end.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return usize::MAX;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn is_d(&self) -> bool {
        is_d_partition(&self.parts).unwrap_or(false)
    }

    /// Special D-partition.
    pub fn is_special(&self) -> bool {
        self.is_d() && is_special(&self.parts).unwrap_or(false)
    }

    /// `k[j] = p_1 + ... + p_j` for `j = 0..=len`.
    pub fn partial_sums(&self) -> Vec<usize> {
        std::iter::once(0)
            .chain(self.parts.iter().scan(0, |acc, &p| {
                *acc += p;
                Some(*acc)
            }))
            .collect()
    }

    /// `chi_{2k}`: the unique `j` with `k_{j-1} < 2k <= k_j`.
    pub fn chi(&self, k: usize) -> Result<usize> {
        let n = self.half();
        if k == 0 || k > n {
            return Err(Error::OutOfRange { index: k, max: n });
        }
        let sums = self.partial_sums();
        let j = sums.partition_point(|&s| s < 2 * k);
        Ok(j)
    }

    /// Even `j` with `p_j > p_{j+1}`, ascending. Always ends with `2m`.
    pub fn conjecture_indices(&self) -> Result<Vec<usize>> {
        if !self.is_special() {
            return Err(Error::NotSpecial(self.parts.clone()));
        }
        Ok((2..=self.len())
            .step_by(2)
            .filter(|&j| self.part(j) > self.part(j + 1))
            .collect())
    }

    /// `P` followed by `ones` copies of 1.
    pub fn augment(&self, ones: usize) -> Result<Partition> {
        if ones % 2 != 0 {
            return Err(Error::ParityViolation(ones));
        }
        let mut parts = self.parts.clone();
        parts.extend(std::iter::repeat_n(1, ones));
        Ok(Partition { parts })
    }

    /// Deterministic pairing: equal even parts pair up, odd parts pair with
    /// the next odd part in descending order; equal odd parts become an
    /// [`Pair::Equal`].
    pub fn pairing(&self) -> Result<Pairing> {
        if !self.is_d() {
            return Err(Error::PairingImpossible(self.parts.clone()));
        }
        let mut pairs = Vec::with_capacity(self.len() / 2);
        let mut pending_odd: Option<usize> = None;
        let mut evens = self.parts.iter().filter(|p| *p % 2 == 0).peekable();
        // Walk in descending order, emitting a pair when its larger member
        // is reached so the pair list stays ordered by leading part.
        let mut i = 0;
        let parts = &self.parts;
        let mut even_seen = 0usize;
        while i < parts.len() {
            let p = parts[i];
            if p % 2 == 0 {
                even_seen += 1;
                if even_seen % 2 == 1 {
                    pairs.push(Pair::Equal(p));
                }
                evens.next();
            } else {
                match pending_odd.take() {
                    None => {
                        pending_odd = Some(pairs.len());
                        pairs.push(Pair::Equal(p)); // placeholder until partner is found
                    }
                    Some(slot) => {
                        let Pair::Equal(big) = pairs[slot] else { unreachable!() };
                        pairs[slot] = if big == p {
                            Pair::Equal(p)
                        } else {
                            Pair::Odd {
                                a: (big - 1) / 2,
                                b: (p - 1) / 2,
                            }
                        };
                    }
                }
            }
            i += 1;
        }
        if pending_odd.is_some() {
            // Odd total count of odd parts means an odd sum, rejected by new().
            return Err(Error::PairingImpossible(self.parts.clone()));
        }
        Ok(Pairing { pairs })
    }

    /// The Lego set and the augmented partition it realises.
    pub fn lego_set(&self) -> Result<LegoSet> {
        if !self.is_special() {
            return Err(Error::NotSpecial(self.parts.clone()));
        }
        let pairing = self.pairing()?;
        let mut blocks = Vec::with_capacity(self.len());
        let mut shapes = Vec::with_capacity(self.len());
        let mut odd_pairs = 0;
        for pair in &pairing.pairs {
            match *pair {
                Pair::Equal(r) => {
                    let unit = shapes.len();
                    shapes.push(BlockShape::Chain(r));
                    blocks.push(LegoBlock::new(LegoKind::TypeI { r, sign: Sign::Plus }, unit));
                    blocks.push(LegoBlock::new(LegoKind::TypeI { r, sign: Sign::Minus }, unit));
                }
                Pair::Odd { a, b } => {
                    odd_pairs += 1;
                    for half in [a, b] {
                        let unit = shapes.len();
                        shapes.push(BlockShape::Hook(half + 1));
                        blocks.push(LegoBlock::new(LegoKind::TypeII { p: 2 * half + 1 }, unit));
                    }
                }
            }
        }
        blocks.sort_by_key(|b| b.sort_key());
        // Lay so-blocks out in order of first appearance in the sorted set.
        let mut order: Vec<usize> = Vec::with_capacity(shapes.len());
        for b in &blocks {
            if !order.contains(&b.unit) {
                order.push(b.unit);
            }
        }
        let mut remap = vec![0; shapes.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        for b in &mut blocks {
            b.unit = remap[b.unit];
        }
        let shapes = order.iter().map(|&o| shapes[o]).collect();
        Ok(LegoSet {
            blocks,
            shapes,
            original: self.clone(),
            augmented: self.augment(2 * odd_pairs)?,
        })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated descending integers, whitespace ignored.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let cleaned = cleaned.trim_start_matches('[').trim_end_matches(']');
        let parts = cleaned
            .split(',')
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// One pair `q_alpha` of a pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pair {
    /// `[r, r]`, any parity.
    Equal(usize),
    /// `[2a+1, 2b+1]` with `a > b`.
    Odd { a: usize, b: usize },
}

impl Pair {
    pub fn members(&self) -> [usize; 2] {
        match *self {
            Pair::Equal(r) => [r, r],
            Pair::Odd { a, b } => [2 * a + 1, 2 * b + 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub pairs: Vec<Pair>,
}

impl Pairing {
    /// so-block shapes for a direct realisation. Only `[r, r]` and
    /// `[2a+1, 1]` pairs have a direct block.
    pub fn shapes(&self) -> Result<Vec<BlockShape>> {
        self.pairs
            .iter()
            .map(|p| match *p {
                Pair::Equal(r) => Ok(BlockShape::Chain(r)),
                Pair::Odd { a, b: 0 } => Ok(BlockShape::Hook(a + 1)),
                Pair::Odd { a, b } => Err(Error::UnsupportedPair(2 * a + 1, 2 * b + 1)),
            })
            .collect()
    }

    pub fn flatten(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pairs.iter().flat_map(Pair::members).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Shape of one diagonal block of the nilpotent, in so(2n) for half-width n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BlockShape {
    /// The `[r, r]` pair: half-width `r`.
    Chain(usize),
    /// The `[2r-1, 1]` pair: half-width `r`.
    Hook(usize),
    /// The `[2a+1, 2b+1]` pair with `a > b >= 1`: half-width `a + b + 1`.
    /// Not produced by the Lego construction.
    OddPair { a: usize, b: usize },
}

impl BlockShape {
    pub fn half_width(&self) -> usize {
        match *self {
            BlockShape::Chain(r) | BlockShape::Hook(r) => r,
            BlockShape::OddPair { a, b } => a + b + 1,
        }
    }

    /// Jordan block sizes realised by this shape.
    pub fn jordan_type(&self) -> [usize; 2] {
        match *self {
            BlockShape::Chain(r) => [r, r],
            BlockShape::Hook(r) => [2 * r - 1, 1],
            BlockShape::OddPair { a, b } => [2 * a + 1, 2 * b + 1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LegoKind {
    /// One signed minor of an `[r, r]` pair.
    TypeI { r: usize, sign: Sign },
    /// The full minor of a `[p, 1]` pair, `p` odd.
    TypeII { p: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LegoBlock {
    pub kind: LegoKind,
    /// Index of the so-block (in layout order) this block lives in.
    pub unit: usize,
}

impl LegoBlock {
    fn new(kind: LegoKind, unit: usize) -> Self {
        LegoBlock { kind, unit }
    }

    pub fn highest(&self) -> usize {
        match self.kind {
            LegoKind::TypeI { r, .. } => r,
            LegoKind::TypeII { p } => p,
        }
    }

    /// `s_beta`: `r` for Type I, `p + 1` for Type II.
    pub fn minor_dim(&self) -> usize {
        match self.kind {
            LegoKind::TypeI { r, .. } => r,
            LegoKind::TypeII { p } => p + 1,
        }
    }

    pub fn is_type_ii(&self) -> bool {
        matches!(self.kind, LegoKind::TypeII { .. })
    }

    // Descending highest element; Type I before Type II; + before -.
    fn sort_key(&self) -> (std::cmp::Reverse<usize>, u8, u8) {
        let (kind, sign) = match self.kind {
            LegoKind::TypeI { sign, .. } => (0, sign as u8),
            LegoKind::TypeII { .. } => (1, 0),
        };
        (std::cmp::Reverse(self.highest()), kind, sign)
    }
}

impl fmt::Display for LegoBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LegoKind::TypeI { r, sign } => write!(f, "({r},{sign})"),
            LegoKind::TypeII { p } => write!(f, "({p},1)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegoSet {
    pub blocks: Vec<LegoBlock>,
    /// so-block shapes in layout order; `blocks[i].unit` indexes this.
    pub shapes: Vec<BlockShape>,
    pub original: Partition,
    pub augmented: Partition,
}

impl LegoSet {
    /// `b_j`: Type II blocks among the first `j`.
    pub fn type_ii_count(&self, j: usize) -> usize {
        self.blocks.iter().take(j).filter(|b| b.is_type_ii()).count()
    }

    /// `sum_{beta <= j} s_beta`.
    pub fn minor_dim_sum(&self, j: usize) -> usize {
        self.blocks.iter().take(j).map(LegoBlock::minor_dim).sum()
    }

    /// Whether `j` is also a valid cut of the augmented partition, i.e. the
    /// first `j` blocks do not include a block whose highest element is one
    /// of the appended 1's partners.
    pub fn cut_is_realized(&self, j: usize) -> bool {
        self.augmented.part(j) > self.augmented.part(j + 1)
    }
}

impl fmt::Display for LegoSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.blocks.iter().map(ToString::to_string).collect();
        write!(f, "{}", s.join(" "))
    }
}

/// All special D-partitions of `two_n`, lexicographically descending.
pub fn enumerate_special(two_n: usize) -> Result<Vec<Partition>> {
    if two_n < 2 || two_n % 2 != 0 {
        return Err(Error::InvalidSize(two_n));
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(rest: usize, max: usize, stack: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            let p = Partition { parts: stack.clone() };
            if p.is_special() {
                out.push(p);
            }
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            stack.push(part);
            rec(rest - part, part, stack, out);
            stack.pop();
        }
    }
    rec(two_n, two_n, &mut stack, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn d_partition_examples() {
        assert!(is_d_partition(&[4, 4, 3, 1]).unwrap());
        assert!(!is_d_partition(&[4, 3, 1]).unwrap());
        assert!(is_d_partition(&[2, 2, 1, 1]).unwrap());
        assert!(is_d_partition(&[3, 1, 4]).is_err());
        assert!(is_d_partition(&[2, 0]).is_err());
    }

    #[test]
    fn special_examples() {
        assert!(is_special(&[4, 4, 3, 1]).unwrap());
        assert!(is_special(&[4, 3, 3, 2]).unwrap());
        assert!(!is_special(&[4, 3, 2, 1]).unwrap());
    }

    #[test]
    fn chi_examples() {
        let x = p(&[4, 4, 3, 1]);
        assert_eq!(x.chi(4).unwrap(), 2);
        assert_eq!(x.chi(1).unwrap(), 1);
        assert_eq!(x.chi(6).unwrap(), 4);
        assert!(matches!(x.chi(7), Err(Error::OutOfRange { .. })));
        assert!(x.chi(0).is_err());
    }

    #[test]
    fn conjecture_index_examples() {
        assert_eq!(p(&[4, 4, 3, 1]).conjecture_indices().unwrap(), vec![2, 4]);
        assert_eq!(p(&[2, 2]).conjecture_indices().unwrap(), vec![2]);
        assert_eq!(p(&[7, 5, 2, 2]).conjecture_indices().unwrap(), vec![2, 4]);
        assert!(p(&[4, 3, 2, 1]).conjecture_indices().is_err());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(
            p(&[7, 5, 2, 2]).pairing().unwrap().pairs,
            vec![Pair::Odd { a: 3, b: 2 }, Pair::Equal(2)]
        );
        assert_eq!(
            p(&[4, 4, 3, 1]).pairing().unwrap().pairs,
            vec![Pair::Equal(4), Pair::Odd { a: 1, b: 0 }]
        );
        assert_eq!(p(&[1, 1]).pairing().unwrap().pairs, vec![Pair::Equal(1)]);
        assert!(matches!(p(&[4, 2]).pairing(), Err(Error::PairingImpossible(_))));
    }

    #[test]
    fn lego_examples() {
        let l = p(&[7, 5, 2, 2]).lego_set().unwrap();
        assert_eq!(l.to_string(), "(7,1) (5,1) (2,+) (2,-)");
        assert_eq!(l.augmented.parts(), &[7, 5, 2, 2, 1, 1]);

        let l = p(&[4, 4, 3, 1]).lego_set().unwrap();
        assert_eq!(l.to_string(), "(4,+) (4,-) (3,1) (1,1)");
        assert_eq!(l.augmented.parts(), &[4, 4, 3, 1, 1, 1]);

        let l = p(&[2, 2]).lego_set().unwrap();
        assert_eq!(l.to_string(), "(2,+) (2,-)");
        assert_eq!(l.augmented.parts(), &[2, 2]);
    }

    #[test]
    fn augment_examples() {
        assert_eq!(p(&[7, 5, 2, 2]).augment(2).unwrap().parts(), &[7, 5, 2, 2, 1, 1]);
        assert_eq!(p(&[2, 2]).augment(0).unwrap().parts(), &[2, 2]);
        assert_eq!(p(&[3, 1]).augment(2).unwrap().parts(), &[3, 1, 1, 1]);
        assert_eq!(p(&[3, 1]).augment(1), Err(Error::ParityViolation(1)));
    }

    #[test]
    fn enumerate_small() {
        let four: Vec<Vec<usize>> = enumerate_special(4)
            .unwrap()
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(four, vec![vec![3, 1], vec![2, 2], vec![1, 1, 1, 1]]);
        assert_eq!(enumerate_special(2).unwrap(), vec![p(&[1, 1])]);
        assert!(enumerate_special(12).unwrap().contains(&p(&[4, 4, 3, 1])));
        assert!(enumerate_special(5).is_err());
    }

    #[test]
    fn parse() {
        assert_eq!(" 4, 4,3 ,1".parse::<Partition>().unwrap(), p(&[4, 4, 3, 1]));
        assert!("4,x".parse::<Partition>().is_err());
        assert!("1,3".parse::<Partition>().is_err());
    }
}
