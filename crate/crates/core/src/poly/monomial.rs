use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::VarId;

/// A power product, stored as `(variable, exponent)` pairs sorted by
/// variable with no zero exponents.
///
/// `Ord` is graded lexicographic: total degree first, then the exponent of
/// the earliest variable (in `VarId` order) decides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(VarId, u32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarId) -> Self {
        Self::pow(v, 1)
    }

    pub fn pow(v: VarId, e: u32) -> Self {
        let mut m = SmallVec::new();
        if e > 0 {
            m.push((v, e));
        }
        Monomial(m)
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping
    /// zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut v: SmallVec<[(VarId, u32); 6]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: SmallVec<[(VarId, u32); 6]> = SmallVec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by(|p| p.0.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let d = other.0[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - d)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Square root when every exponent is even.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.0.iter().any(|p| p.1 % 2 != 0) {
            return None;
        }
        Some(Monomial(self.0.iter().map(|&(v, e)| (v, e / 2)).collect()))
    }

    /// Removes `v` from the monomial, returning its former exponent.
    pub fn without(&self, v: VarId) -> (Monomial, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|p| {
                if p.0 == v {
                    e = p.1;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (Monomial(rest), e)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|p| p.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a.0 != b.0 {
                // The one carrying the earlier variable is larger.
                return if a.0 < b.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            if a.1 != b.1 {
                return a.1.cmp(&b.1);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> VarId {
        VarId::a(1, 1)
    }
    fn y() -> VarId {
        VarId::a(1, 2)
    }

    #[test]
    fn grlex() {
        let x2 = Monomial::pow(x(), 2);
        let xy = Monomial::from_pairs([(x(), 1), (y(), 1)]);
        let y2 = Monomial::pow(y(), 2);
        let x = Monomial::var(x());
        assert!(x2 > xy && xy > y2 && y2 > x);
        assert!(x > Monomial::one());
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Monomial::from_pairs([(VarId::S, 2), (y(), 1)]);
        let b = Monomial::from_pairs([(VarId::T, 1), (y(), 3)]);
        let p = a.mul(&b);
        assert_eq!(p.exponent(y()), 4);
        assert_eq!(p.div(&a), Some(b.clone()));
        assert_eq!(a.div(&b), None);
    }

    #[test]
    fn display_order() {
        let m = Monomial::from_pairs([(VarId::b(1, 3), 1), (VarId::Lambda, 2), (VarId::S, 1), (VarId::T, 3)]);
        assert_eq!(m.to_string(), "s*t^3*l^2*B[1,3]");
    }
}
