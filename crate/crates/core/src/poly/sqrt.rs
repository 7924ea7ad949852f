use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed};
use thiserror::Error;

use super::{Poly, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("polynomial is not a perfect square")]
pub struct NotASquare;

fn sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn sqrt_rational(c: &Q) -> Option<Q> {
    if c.is_negative() {
        return None;
    }
    Some(Q::new(sqrt_int(c.numer())?, sqrt_int(c.denom())?))
}

impl Poly {
    /// Square root with positive leading coefficient, or [`NotASquare`].
    ///
    /// Works from the top: the leading term of the root is the square root
    /// of the leading term, and each further term is `LT(r) / (2 LT(q))`
    /// where `r = p - q^2` is the current remainder. Leading monomials of
    /// the remainder strictly decrease, so this terminates.
    pub fn sqrt(&self) -> Result<Poly, NotASquare> {
        let Some((lm, lc)) = self.leading_term() else {
            return Ok(Poly::zero());
        };
        let root_m = lm.sqrt().ok_or(NotASquare)?;
        let root_c = sqrt_rational(lc).ok_or(NotASquare)?;
        let two_lead_c = &root_c + &root_c;
        let mut root = Poly::term(root_c, root_m.clone());
        let mut rem = self - &(&root * &root);
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.div(&root_m).ok_or(NotASquare)?;
            if m >= root_m {
                return Err(NotASquare);
            }
            let c = rc / &two_lead_c;
            let step = Poly::term(c, m);
            // rem -= 2 * root * step + step^2
            let cross = &root * &step;
            rem.add_scaled(&cross, &Q::from_integer(BigInt::from(-2)));
            rem.add_scaled(&(&step * &step), &-Q::one());
            root = &root + &step;
        }
        Ok(root)
    }
}
