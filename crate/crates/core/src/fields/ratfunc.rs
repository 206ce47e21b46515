//! Reduced fractions of polynomials: elements of k0(t).
//!
//! Canonical form: gcd(num, den) = 1 and den monic, so equality is
//! structural. The coefficient field handle is passed to every operation.

use super::poly::Poly;
use super::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    /// Builds the reduced fraction num/den; panics on zero denominator.
    pub fn new(num: Poly, den: Poly, f: &Field) -> Self {
        assert!(!den.is_zero(), "zero denominator in rational function");
        if num.is_zero() {
            return RatFunc { num: Poly::zero(), den: Poly::one(f) };
        }
        let g = num.gcd(&den, f);
        let (num, _) = num.divrem(&g, f);
        let (den, _) = den.divrem(&g, f);
        let lead_inv = f.inv(den.leading().unwrap()).unwrap();
        RatFunc {
            num: num.scale(&lead_inv, f),
            den: den.scale(&lead_inv, f),
        }
    }

    pub fn from_poly(p: Poly, f: &Field) -> Self {
        RatFunc { num: p, den: Poly::one(f) }
    }

    pub fn zero(f: &Field) -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one(f) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.deg() == Some(0)
    }

    pub fn add(&self, other: &RatFunc, f: &Field) -> RatFunc {
        let num = self
            .num
            .mul(&other.den, f)
            .add(&other.num.mul(&self.den, f), f);
        let den = self.den.mul(&other.den, f);
        RatFunc::new(num, den, f)
    }

    pub fn neg(&self, f: &Field) -> RatFunc {
        RatFunc { num: self.num.neg(f), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc, f: &Field) -> RatFunc {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &RatFunc, f: &Field) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.num, f),
            self.den.mul(&other.den, f),
            f,
        )
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, f: &Field) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone(), f))
    }

    /// Exact square root in k0(t): both reduced parts must be squares.
    pub fn sqrt(&self, f: &Field) -> Option<RatFunc> {
        let n = self.num.sqrt(f)?;
        let d = self.den.sqrt(f)?;
        Some(RatFunc::new(n, d, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf3() -> Field {
        Field::prime(3).unwrap()
    }

    fn poly(f: &Field, cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| f.from_i64(c)).collect())
    }

    #[test]
    fn reduction_is_canonical() {
        let f = gf3();
        // (t^2-1)/(t-1) = t+1
        let a = RatFunc::new(poly(&f, &[-1, 0, 1]), poly(&f, &[-1, 1]), &f);
        assert_eq!(a.num, poly(&f, &[1, 1]));
        assert!(a.is_polynomial());
    }

    #[test]
    fn field_ops() {
        let f = gf3();
        let t = RatFunc::from_poly(poly(&f, &[0, 1]), &f);
        let inv_t = t.inv(&f).unwrap();
        let prod = t.mul(&inv_t, &f);
        assert_eq!(prod, RatFunc::from_poly(Poly::one(&f), &f));
        let s = t.add(&t.neg(&f), &f);
        assert!(s.is_zero());
    }

    #[test]
    fn sqrt_detects_squares() {
        let f = Field::prime(2).unwrap();
        let t = poly(&f, &[0, 1]);
        let sq = RatFunc::new(t.mul(&t, &f), poly(&f, &[1, 0, 1]), &f); // t^2/(t+1)^2
        let r = sq.sqrt(&f).unwrap();
        assert_eq!(r.mul(&r, &f), sq);
        assert!(RatFunc::from_poly(t, &f).sqrt(&f).is_none());
    }
}
