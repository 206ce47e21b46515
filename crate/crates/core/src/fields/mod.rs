//! Exact arithmetic for the supported base fields and their separable
//! quadratic extensions.
//!
//! Base fields are GF(p), GF(2^k), the rationals, and rational function
//! fields k0(t) over a finite field. A quadratic extension K = F(eta) is
//! either radical (eta^2 = d, characteristic != 2) or Artin-Schreier
//! (eta^2 + eta = delta, characteristic 2); both are separable. The
//! extension carries the conjugation iota, norm, trace and the canonical
//! functional s(x + y*eta) = y, which is F-linear, nonzero and kills F.
//!
//! Field descriptors and elements are immutable after construction and can
//! be shared freely across threads.

pub mod fp;
pub mod gf2k;
pub mod poly;
pub mod ratfunc;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Decision, Error, Result};
use poly::Poly;
use ratfunc::RatFunc;

/// A shareable handle to a field descriptor.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldRepr>);

#[derive(Debug)]
enum FieldRepr {
    /// GF(p), p prime.
    Prime { p: u64 },
    /// GF(2^k) as GF(2)[x]/(poly), poly irreducible of degree k.
    Binary { k: u32, poly: u64 },
    /// The rational numbers.
    Rationals,
    /// k0(t) over a finite coefficient field.
    RatFunc { coeff: Field },
    /// Separable quadratic extension of `base`.
    Quad { base: Field, ext: ExtKind },
}

/// Which kind of separable quadratic extension.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtKind {
    /// eta^2 = d with d a non-square; requires characteristic != 2.
    Radical { d: Elem },
    /// eta^2 + eta = delta with delta outside the Artin-Schreier set
    /// {x^2 + x}; requires characteristic 2.
    ArtinSchreier { delta: Elem },
}

/// A field element in canonical reduced representation, so equality is
/// structural. Elements do not carry their field; operations take the
/// field handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elem {
    Fp(u64),
    F2k(u64),
    Rat(BigRational),
    Fun(Box<RatFunc>),
    /// x + y*eta over the base field of a quadratic extension.
    Ext(Box<(Elem, Elem)>),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Fp(v) => *v == 0,
            Elem::F2k(v) => *v == 0,
            Elem::Rat(r) => r.is_zero(),
            Elem::Fun(f) => f.is_zero(),
            Elem::Ext(p) => p.0.is_zero() && p.1.is_zero(),
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (FieldRepr::Prime { p: a }, FieldRepr::Prime { p: b }) => a == b,
            (FieldRepr::Binary { k: k1, poly: p1 }, FieldRepr::Binary { k: k2, poly: p2 }) => {
                k1 == k2 && p1 == p2
            }
            (FieldRepr::Rationals, FieldRepr::Rationals) => true,
            (FieldRepr::RatFunc { coeff: a }, FieldRepr::RatFunc { coeff: b }) => a == b,
            (FieldRepr::Quad { base: b1, ext: e1 }, FieldRepr::Quad { base: b2, ext: e2 }) => {
                b1 == b2 && e1 == e2
            }
            _ => false,
        }
    }
}

impl Eq for Field {}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldRepr::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !fp::is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field(Arc::new(FieldRepr::Prime { p })))
    }

    /// GF(2^k) with the modulus given as a bitmask (bit i = coefficient of x^i).
    /// Degree 1 collapses to the canonical GF(2).
    pub fn binary(k: u32, poly: u64) -> Result<Field> {
        if k == 1 {
            if !gf2k::is_irreducible(poly, 1) {
                return Err(Error::InvalidField("reducible degree-1 modulus".into()));
            }
            return Field::prime(2);
        }
        if k == 0 || k > 32 {
            return Err(Error::InvalidField(format!("unsupported binary field degree {k}")));
        }
        if !gf2k::is_irreducible(poly, k) {
            return Err(Error::InvalidField(format!(
                "modulus {poly:#b} is not irreducible of degree {k} over GF(2)"
            )));
        }
        Ok(Field(Arc::new(FieldRepr::Binary { k, poly })))
    }

    /// GF(2^k) with the modulus as an ascending coefficient list.
    pub fn binary_from_coeffs(coeffs: &[u8]) -> Result<Field> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        let mut bits = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if c > 1 {
                return Err(Error::InvalidField("modulus coefficients must be 0 or 1".into()));
            }
            if c == 1 {
                bits |= 1 << i;
            }
        }
        Field::binary((coeffs.len() - 1) as u32, bits)
    }

    /// The rational function field coeff(t); the coefficient field must be finite.
    pub fn rational_function(coeff: &Field) -> Result<Field> {
        match &*coeff.0 {
            FieldRepr::Prime { .. } | FieldRepr::Binary { .. } => Ok(Field(Arc::new(
                FieldRepr::RatFunc { coeff: coeff.clone() },
            ))),
            _ => Err(Error::InvalidField(
                "function fields are supported over finite coefficient fields only".into(),
            )),
        }
    }

    /// Adjoins eta with eta^2 = d; requires characteristic != 2 and d a non-square.
    pub fn radical_extension(&self, d: Elem) -> Result<Field> {
        if self.char2() {
            return Err(Error::RequiresCharNotTwo);
        }
        if self.is_quad_ext() {
            return Err(Error::InvalidField("towers of height > 2 are not supported".into()));
        }
        if !self.contains(&d) {
            return Err(Error::NotInField(self.fmt_elem(&d)));
        }
        if d.is_zero() {
            return Err(Error::InvalidField("radical extension by zero".into()));
        }
        if self.is_square(&d).is_some() {
            return Err(Error::InvalidField(
                "radical extension requires a non-square".into(),
            ));
        }
        Ok(Field(Arc::new(FieldRepr::Quad {
            base: self.clone(),
            ext: ExtKind::Radical { d },
        })))
    }

    /// Adjoins eta with eta^2 + eta = delta; requires characteristic 2 and
    /// delta outside {x^2 + x}.
    pub fn artin_schreier_extension(&self, delta: Elem) -> Result<Field> {
        if !self.char2() {
            return Err(Error::RequiresCharTwo);
        }
        if self.is_quad_ext() {
            return Err(Error::InvalidField("towers of height > 2 are not supported".into()));
        }
        if !self.contains(&delta) {
            return Err(Error::NotInField(self.fmt_elem(&delta)));
        }
        match self.wp_membership(&delta)? {
            (Decision::No, _) => Ok(Field(Arc::new(FieldRepr::Quad {
                base: self.clone(),
                ext: ExtKind::ArtinSchreier { delta },
            }))),
            (Decision::Yes, _) => Err(Error::InvalidField(
                "Artin-Schreier extension requires delta outside {x^2 + x}".into(),
            )),
            (Decision::Undecided, _) => Err(Error::Undecided(
                "could not certify that delta is outside {x^2 + x}".into(),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// descriptors
// ---------------------------------------------------------------------------

impl Field {
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldRepr::Prime { p } => *p,
            FieldRepr::Binary { .. } => 2,
            FieldRepr::Rationals => 0,
            FieldRepr::RatFunc { coeff } => coeff.characteristic(),
            FieldRepr::Quad { base, .. } => base.characteristic(),
        }
    }

    pub fn char2(&self) -> bool {
        self.characteristic() == 2
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u128> {
        match &*self.0 {
            FieldRepr::Prime { p } => Some(*p as u128),
            FieldRepr::Binary { k, .. } => Some(1u128 << *k),
            FieldRepr::Rationals | FieldRepr::RatFunc { .. } => None,
            FieldRepr::Quad { base, .. } => base.order().map(|q| q * q),
        }
    }

    pub fn is_quad_ext(&self) -> bool {
        matches!(&*self.0, FieldRepr::Quad { .. })
    }

    /// The base field of a quadratic extension.
    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            FieldRepr::Quad { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn ext_kind(&self) -> Option<&ExtKind> {
        match &*self.0 {
            FieldRepr::Quad { ext, .. } => Some(ext),
            _ => None,
        }
    }

    /// The finite coefficient field of a rational function field.
    pub fn function_coefficient_field(&self) -> Option<&Field> {
        match &*self.0 {
            FieldRepr::RatFunc { coeff } => Some(coeff),
            _ => None,
        }
    }

    /// True for function fields and elements thereof.
    pub fn is_function_field(&self) -> bool {
        match &*self.0 {
            FieldRepr::RatFunc { .. } => true,
            FieldRepr::Quad { base, .. } => base.is_function_field(),
            _ => false,
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.0, FieldRepr::Rationals)
    }

}

// ---------------------------------------------------------------------------
// element construction and membership
// ---------------------------------------------------------------------------

impl Field {
    pub fn zero(&self) -> Elem {
        match &*self.0 {
            FieldRepr::Prime { .. } => Elem::Fp(0),
            FieldRepr::Binary { .. } => Elem::F2k(0),
            FieldRepr::Rationals => Elem::Rat(BigRational::zero()),
            FieldRepr::RatFunc { coeff } => Elem::Fun(Box::new(RatFunc::zero(coeff))),
            FieldRepr::Quad { base, .. } => {
                Elem::Ext(Box::new((base.zero(), base.zero())))
            }
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &*self.0 {
            FieldRepr::Prime { p } => Elem::Fp(n.rem_euclid(*p as i64) as u64),
            FieldRepr::Binary { .. } => Elem::F2k((n.rem_euclid(2)) as u64),
            FieldRepr::Rationals => Elem::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldRepr::RatFunc { coeff } => {
                let c = coeff.from_i64(n);
                Elem::Fun(Box::new(RatFunc::from_poly(Poly::constant(c), coeff)))
            }
            FieldRepr::Quad { base, .. } => {
                Elem::Ext(Box::new((base.from_i64(n), base.zero())))
            }
        }
    }

    /// The generator eta of a quadratic extension.
    pub fn eta(&self) -> Result<Elem> {
        match &*self.0 {
            FieldRepr::Quad { base, .. } => {
                Ok(Elem::Ext(Box::new((base.zero(), base.one()))))
            }
            _ => Err(Error::NoExtension),
        }
    }

    /// The variable t of a function field (also valid inside an extension of one).
    pub fn var_t(&self) -> Result<Elem> {
        match &*self.0 {
            FieldRepr::RatFunc { coeff } => Ok(Elem::Fun(Box::new(RatFunc::from_poly(
                Poly::var(coeff),
                coeff,
            )))),
            FieldRepr::Quad { base, .. } => Ok(self.lift(&base.var_t()?)),
            _ => Err(Error::InvalidField("field has no variable t".into())),
        }
    }

    /// The generator x of a binary coefficient field, lifted to this field.
    pub fn var_x(&self) -> Result<Elem> {
        match &*self.0 {
            FieldRepr::Binary { k, poly } => {
                if *k == 1 {
                    // x reduces to a scalar in GF(2)
                    Ok(Elem::F2k(0b10 % poly))
                } else {
                    Ok(Elem::F2k(0b10))
                }
            }
            FieldRepr::RatFunc { coeff } => {
                let c = coeff.var_x()?;
                Ok(Elem::Fun(Box::new(RatFunc::from_poly(Poly::constant(c), coeff))))
            }
            FieldRepr::Quad { base, .. } => Ok(self.lift(&base.var_x()?)),
            _ => Err(Error::InvalidField("field has no generator x".into())),
        }
    }

    /// Embeds a base-field element into the quadratic extension.
    pub fn lift(&self, x: &Elem) -> Elem {
        match &*self.0 {
            FieldRepr::Quad { base, .. } => Elem::Ext(Box::new((x.clone(), base.zero()))),
            _ => panic!("lift on a field without extension"),
        }
    }

    pub fn from_coords(&self, x: Elem, y: Elem) -> Elem {
        match &*self.0 {
            FieldRepr::Quad { .. } => Elem::Ext(Box::new((x, y))),
            _ => panic!("from_coords on a field without extension"),
        }
    }

    /// Coordinates (x, y) with respect to the basis {1, eta}.
    pub fn coords(&self, a: &Elem) -> (Elem, Elem) {
        match (a, &*self.0) {
            (Elem::Ext(p), FieldRepr::Quad { .. }) => (p.0.clone(), p.1.clone()),
            _ => panic!("coords on a non-extension element"),
        }
    }

    /// Returns the base-field representative when the element lies in F.
    pub fn in_base(&self, a: &Elem) -> Option<Elem> {
        match (a, &*self.0) {
            (Elem::Ext(p), FieldRepr::Quad { .. }) => {
                if p.1.is_zero() {
                    Some(p.0.clone())
                } else {
                    None
                }
            }
            _ => panic!("in_base on a non-extension element"),
        }
    }

    pub fn contains(&self, a: &Elem) -> bool {
        match (&*self.0, a) {
            (FieldRepr::Prime { p }, Elem::Fp(v)) => v < p,
            (FieldRepr::Binary { k, .. }, Elem::F2k(v)) => *k == 64 || v >> k == 0,
            (FieldRepr::Rationals, Elem::Rat(_)) => true,
            (FieldRepr::RatFunc { coeff }, Elem::Fun(rf)) => {
                rf.num.coeffs.iter().all(|c| coeff.contains(c))
                    && rf.den.coeffs.iter().all(|c| coeff.contains(c))
                    && !rf.den.is_zero()
            }
            (FieldRepr::Quad { base, .. }, Elem::Ext(p)) => {
                base.contains(&p.0) && base.contains(&p.1)
            }
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// arithmetic
// ---------------------------------------------------------------------------

macro_rules! dispatch2 {
    ($self:ident, $a:ident, $b:ident, $fp:expr, $f2k:expr, $rat:expr, $fun:expr, $ext:expr) => {
        match (&*$self.0, $a, $b) {
            (FieldRepr::Prime { p }, Elem::Fp(x), Elem::Fp(y)) => Elem::Fp($fp(*x, *y, *p)),
            (FieldRepr::Binary { k, poly }, Elem::F2k(x), Elem::F2k(y)) => {
                Elem::F2k($f2k(*x, *y, *poly, *k))
            }
            (FieldRepr::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat($rat(x, y)),
            (FieldRepr::RatFunc { coeff }, Elem::Fun(x), Elem::Fun(y)) => {
                Elem::Fun(Box::new($fun(x, y, coeff)))
            }
            (FieldRepr::Quad { base, ext }, Elem::Ext(x), Elem::Ext(y)) => $ext(base, ext, x, y),
            _ => panic!("mixed operands in field arithmetic"),
        }
    };
}

impl Field {
    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        dispatch2!(
            self,
            a,
            b,
            fp::add,
            |x, y, _, _| x ^ y,
            |x: &BigRational, y: &BigRational| x + y,
            |x: &RatFunc, y: &RatFunc, c: &Field| x.add(y, c),
            |base: &Field, _ext: &ExtKind, x: &(Elem, Elem), y: &(Elem, Elem)| {
                Elem::Ext(Box::new((base.add(&x.0, &y.0), base.add(&x.1, &y.1))))
            }
        )
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&*self.0, a) {
            (FieldRepr::Prime { p }, Elem::Fp(x)) => Elem::Fp(fp::neg(*x, *p)),
            (FieldRepr::Binary { .. }, Elem::F2k(x)) => Elem::F2k(*x),
            (FieldRepr::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (FieldRepr::RatFunc { coeff }, Elem::Fun(x)) => Elem::Fun(Box::new(x.neg(coeff))),
            (FieldRepr::Quad { base, .. }, Elem::Ext(x)) => {
                Elem::Ext(Box::new((base.neg(&x.0), base.neg(&x.1))))
            }
            _ => panic!("element does not belong to this field"),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        dispatch2!(
            self,
            a,
            b,
            fp::mul,
            gf2k::mul,
            |x: &BigRational, y: &BigRational| x * y,
            |x: &RatFunc, y: &RatFunc, c: &Field| x.mul(y, c),
            |base: &Field, ext: &ExtKind, x: &(Elem, Elem), y: &(Elem, Elem)| {
                let (x1, y1) = (&x.0, &x.1);
                let (x2, y2) = (&y.0, &y.1);
                let cross = base.add(&base.mul(x1, y2), &base.mul(y1, x2));
                let yy = base.mul(y1, y2);
                match ext {
                    ExtKind::Radical { d } => Elem::Ext(Box::new((
                        base.add(&base.mul(x1, x2), &base.mul(&yy, d)),
                        cross,
                    ))),
                    ExtKind::ArtinSchreier { delta } => Elem::Ext(Box::new((
                        base.add(&base.mul(x1, x2), &base.mul(&yy, delta)),
                        base.add(&cross, &yy),
                    ))),
                }
            }
        )
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&*self.0, a) {
            (FieldRepr::Prime { p }, Elem::Fp(x)) => Elem::Fp(fp::inv(*x, *p)),
            (FieldRepr::Binary { k, poly }, Elem::F2k(x)) => Elem::F2k(gf2k::inv(*x, *poly, *k)),
            (FieldRepr::Rationals, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (FieldRepr::RatFunc { coeff }, Elem::Fun(x)) => {
                Elem::Fun(Box::new(x.inv(coeff).ok_or(Error::DivisionByZero)?))
            }
            (FieldRepr::Quad { base, .. }, Elem::Ext(_)) => {
                // a^{-1} = iota(a) / N(a)
                let conj = self.conj(a);
                let n = self.norm_to_base(a);
                let n_inv = base.inv(&n)?;
                let n_inv_lifted = self.lift(&n_inv);
                self.mul(&conj, &n_inv_lifted)
            }
            _ => panic!("element does not belong to this field"),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow_i64(&self, a: &Elem, n: i64) -> Result<Elem> {
        if n < 0 {
            let inv = self.inv(a)?;
            return self.pow_u128(&inv, (-(n as i128)) as u128);
        }
        self.pow_u128(a, n as u128)
    }

    pub fn pow_u128(&self, a: &Elem, mut n: u128) -> Result<Elem> {
        let mut acc = self.one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Checked arithmetic entry point with membership validation; this is the
    /// public surface for scenario-driven computation.
    pub fn arith(&self, a: &Elem, b: &Elem, op: ArithOp) -> Result<Elem> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::MixedOperands);
        }
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

// ---------------------------------------------------------------------------
// tower operations
// ---------------------------------------------------------------------------

impl Field {
    /// The nontrivial automorphism iota of K/F.
    pub fn conj(&self, a: &Elem) -> Elem {
        match (&*self.0, a) {
            (FieldRepr::Quad { base, ext }, Elem::Ext(p)) => match ext {
                ExtKind::Radical { .. } => {
                    Elem::Ext(Box::new((p.0.clone(), base.neg(&p.1))))
                }
                ExtKind::ArtinSchreier { .. } => {
                    // iota(x + y*eta) = (x + y) + y*eta
                    Elem::Ext(Box::new((base.add(&p.0, &p.1), p.1.clone())))
                }
            },
            _ => panic!("conj on a field without extension"),
        }
    }

    /// N(a) = a * iota(a), landing in the base field.
    pub fn norm_to_base(&self, a: &Elem) -> Elem {
        match (&*self.0, a) {
            (FieldRepr::Quad { base, ext }, Elem::Ext(p)) => {
                let (x, y) = (&p.0, &p.1);
                let yy = base.mul(y, y);
                match ext {
                    // x^2 - d y^2
                    ExtKind::Radical { d } => {
                        base.sub(&base.mul(x, x), &base.mul(&yy, d))
                    }
                    // x^2 + x y + delta y^2
                    ExtKind::ArtinSchreier { delta } => base.add(
                        &base.add(&base.mul(x, x), &base.mul(x, y)),
                        &base.mul(&yy, delta),
                    ),
                }
            }
            _ => panic!("norm on a field without extension"),
        }
    }

    /// Tr(a) = a + iota(a), landing in the base field.
    pub fn trace_to_base(&self, a: &Elem) -> Elem {
        match (&*self.0, a) {
            (FieldRepr::Quad { base, ext }, Elem::Ext(p)) => match ext {
                ExtKind::Radical { .. } => base.add(&p.0, &p.0),
                ExtKind::ArtinSchreier { .. } => p.1.clone(),
            },
            _ => panic!("trace on a field without extension"),
        }
    }

    /// The canonical functional s(x + y*eta) = y, an F-linear map with
    /// s(1) = 0 whose kernel is exactly F.
    pub fn s_apply(&self, a: &Elem) -> Elem {
        match (a, &*self.0) {
            (Elem::Ext(p), FieldRepr::Quad { .. }) => p.1.clone(),
            _ => panic!("s on a non-extension element"),
        }
    }
}

// ---------------------------------------------------------------------------
// squares
// ---------------------------------------------------------------------------

impl Field {
    /// Decides whether `a` is a square, returning an exact witness root.
    pub fn is_square(&self, a: &Elem) -> Option<Elem> {
        match (&*self.0, a) {
            (FieldRepr::Prime { p }, Elem::Fp(x)) => fp::sqrt(*x, *p).map(Elem::Fp),
            (FieldRepr::Binary { k, poly }, Elem::F2k(x)) => {
                Some(Elem::F2k(gf2k::sqrt(*x, *poly, *k)))
            }
            (FieldRepr::Rationals, Elem::Rat(x)) => rational_sqrt(x).map(Elem::Rat),
            (FieldRepr::RatFunc { coeff }, Elem::Fun(x)) => {
                x.sqrt(coeff).map(|r| Elem::Fun(Box::new(r)))
            }
            (FieldRepr::Quad { base, ext }, Elem::Ext(_)) => {
                if a.is_zero() {
                    return Some(self.zero());
                }
                match ext {
                    ExtKind::ArtinSchreier { delta } => {
                        // (x + y*eta)^2 = (x^2 + delta*y^2) + y^2*eta
                        let (av, bv) = self.coords(a);
                        let y = base.is_square(&bv)?;
                        let target = base.add(&av, &base.mul(delta, &bv));
                        let x = base.is_square(&target)?;
                        let cand = self.from_coords(x, y);
                        debug_assert_eq!(self.mul(&cand, &cand), *a);
                        Some(cand)
                    }
                    ExtKind::Radical { d } => self.radical_sqrt(base, d, a),
                }
            }
            _ => panic!("element does not belong to this field"),
        }
    }

    /// Square root of a + b*eta over a radical extension (characteristic != 2):
    /// solve (x + y*eta)^2 = a + b*eta through the norm a^2 - d b^2.
    fn radical_sqrt(&self, base: &Field, d: &Elem, target: &Elem) -> Option<Elem> {
        let (a, b) = self.coords(target);
        let half = base.inv(&base.from_i64(2)).expect("char != 2");
        if b.is_zero() {
            if let Some(x) = base.is_square(&a) {
                return Some(self.lift(&x));
            }
            if let Some(y) = base.div(&a, d).ok().and_then(|q| base.is_square(&q)) {
                return Some(self.from_coords(base.zero(), y));
            }
            return None;
        }
        let norm = base.sub(&base.mul(&a, &a), &base.mul(&base.mul(&b, &b), d));
        let c = base.is_square(&norm)?;
        for cc in [c.clone(), base.neg(&c)] {
            let x2 = base.mul(&base.add(&a, &cc), &half);
            if x2.is_zero() {
                continue;
            }
            if let Some(x) = base.is_square(&x2) {
                let y = base
                    .div(&b, &base.mul(&base.from_i64(2), &x))
                    .expect("x nonzero");
                let cand = self.from_coords(x, y);
                if self.mul(&cand, &cand) == *target {
                    return Some(cand);
                }
            }
        }
        None
    }

    /// Total square root in perfect fields of characteristic 2 (finite fields).
    pub fn sqrt_char2(&self, a: &Elem) -> Elem {
        match (&*self.0, a) {
            (FieldRepr::Prime { p: 2 }, Elem::Fp(x)) => Elem::Fp(*x),
            (FieldRepr::Binary { k, poly }, Elem::F2k(x)) => Elem::F2k(gf2k::sqrt(*x, *poly, *k)),
            _ => panic!("sqrt_char2 requires a perfect field of characteristic 2"),
        }
    }
}

/// Exact square root of a rational: numerator and denominator must both be
/// perfect squares.
fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Artin-Schreier membership
// ---------------------------------------------------------------------------

impl Field {
    /// Decides delta in {x^2 + x} for characteristic-2 fields, with witness.
    ///
    /// Finite fields: exact via the absolute trace. k0(t): exact by a
    /// complete bounded linear solve over GF(2) (any solution x = p/q in
    /// lowest terms must have q^2 equal to the reduced denominator of delta
    /// and deg p bounded, so a failed solve is a proof of non-membership).
    pub fn wp_membership(&self, delta: &Elem) -> Result<(Decision, Option<Elem>)> {
        if !self.char2() {
            return Err(Error::RequiresCharTwo);
        }
        match (&*self.0, delta) {
            (FieldRepr::Prime { p: 2 }, Elem::Fp(v)) => {
                if *v == 0 {
                    Ok((Decision::Yes, Some(Elem::Fp(0))))
                } else {
                    Ok((Decision::No, None))
                }
            }
            (FieldRepr::Binary { k, poly }, Elem::F2k(v)) => {
                if gf2k::abs_trace(*v, *poly, *k) != 0 {
                    return Ok((Decision::No, None));
                }
                for x in 0..(1u64 << *k) {
                    if gf2k::mul(x, x, *poly, *k) ^ x == *v {
                        return Ok((Decision::Yes, Some(Elem::F2k(x))));
                    }
                }
                unreachable!("trace-zero element must be in the image of x^2 + x")
            }
            (FieldRepr::RatFunc { coeff }, Elem::Fun(rf)) => {
                self.wp_membership_function_field(coeff, rf)
            }
            (FieldRepr::Quad { .. }, Elem::Ext(_)) => {
                let order = match self.order() {
                    Some(o) => o,
                    None => {
                        return Ok((Decision::Undecided, None));
                    }
                };
                // absolute trace to GF(2): sum of Frobenius iterates
                let n = order.trailing_zeros(); // order = 2^n
                let mut acc = self.zero();
                let mut t = delta.clone();
                for _ in 0..n {
                    acc = self.add(&acc, &t);
                    t = self.mul(&t, &t);
                }
                if !acc.is_zero() {
                    return Ok((Decision::No, None));
                }
                for x in self.elements().expect("finite") {
                    if self.add(&self.mul(&x, &x), &x) == *delta {
                        return Ok((Decision::Yes, Some(x)));
                    }
                }
                unreachable!("trace-zero element must be in the image of x^2 + x")
            }
            _ => Err(Error::NotInField(self.fmt_elem(delta))),
        }
    }

    fn wp_membership_function_field(
        &self,
        coeff: &Field,
        delta: &RatFunc,
    ) -> Result<(Decision, Option<Elem>)> {
        let num = &delta.num;
        let den = &delta.den;
        let deg_n = num.deg().map_or(0, |d| d);
        let deg_d = den.deg().map_or(0, |d| d);
        // odd-order pole at infinity
        if deg_n > deg_d && (deg_n - deg_d) % 2 == 1 {
            return Ok((Decision::No, None));
        }
        // odd-order pole at a finite place: the denominator must be a square
        let r = match den.sqrt(coeff) {
            Some(r) => r,
            None => return Ok((Decision::No, None)),
        };
        // Solve p^2 + p*r = num with deg p <= max(deg r, ceil(deg n / 2)).
        let deg_r = r.deg().map_or(0, |d| d);
        let bound = deg_r.max(deg_n.div_ceil(2));
        if bound > 64 {
            return Ok((Decision::Undecided, None));
        }
        match solve_artin_schreier_poly(coeff, &r, num, bound) {
            Some(p) => {
                let x = RatFunc::new(p, r, coeff);
                let witness = Elem::Fun(Box::new(x));
                debug_assert_eq!(
                    self.add(&self.mul(&witness, &witness), &witness),
                    Elem::Fun(Box::new(delta.clone()))
                );
                Ok((Decision::Yes, Some(witness)))
            }
            None => Ok((Decision::No, None)),
        }
    }
}

/// Solves p^2 + p*r = n for a polynomial p of degree <= bound over a finite
/// field of characteristic 2, as a GF(2)-linear system on the coefficient
/// bits of p.
fn solve_artin_schreier_poly(coeff: &Field, r: &Poly, n: &Poly, bound: usize) -> Option<Poly> {
    let m = match &*coeff.0 {
        FieldRepr::Prime { p: 2 } => 1usize,
        FieldRepr::Binary { k, .. } => *k as usize,
        _ => unreachable!("function field coefficients are finite"),
    };
    let basis: Vec<Elem> = (0..m)
        .map(|j| match &*coeff.0 {
            FieldRepr::Prime { .. } => Elem::Fp(1),
            FieldRepr::Binary { .. } => Elem::F2k(1 << j),
            _ => unreachable!(),
        })
        .collect();
    let bits_of = |e: &Elem| -> Vec<u8> {
        match e {
            Elem::Fp(v) => vec![(*v & 1) as u8],
            Elem::F2k(v) => (0..m).map(|j| ((*v >> j) & 1) as u8).collect(),
            _ => unreachable!(),
        }
    };
    let n_cols = (bound + 1) * m;
    let deg_r = r.deg().map_or(0, |d| d);
    let max_deg = (2 * bound).max(bound + deg_r).max(n.deg().map_or(0, |d| d));
    let n_rows = (max_deg + 1) * m;
    // column c = image of the unknown basis monomial basis[j] * t^i
    let mut cols: Vec<Vec<u8>> = Vec::with_capacity(n_cols);
    for i in 0..=bound {
        for bj in &basis {
            // (bj t^i)^2 + (bj t^i) r = bj^2 t^{2i} + bj * t^i * r
            let sq = coeff.mul(bj, bj);
            let mut image = vec![coeff.zero(); max_deg + 1];
            image[2 * i] = coeff.add(&image[2 * i], &sq);
            for (l, rl) in r.coeffs.iter().enumerate() {
                image[i + l] = coeff.add(&image[i + l], &coeff.mul(bj, rl));
            }
            let mut colbits = Vec::with_capacity(n_rows);
            for e in &image {
                colbits.extend(bits_of(e));
            }
            cols.push(colbits);
        }
    }
    let mut rhs = Vec::with_capacity(n_rows);
    for i in 0..=max_deg {
        rhs.extend(bits_of(&n.coeff(i, coeff)));
    }
    // Gaussian elimination over GF(2) on the augmented system.
    let mut mat: Vec<Vec<u8>> = (0..n_rows)
        .map(|row| {
            let mut v: Vec<u8> = cols.iter().map(|c| c[row]).collect();
            v.push(rhs[row]);
            v
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..n_cols {
        if let Some(sel) = (rank..n_rows).find(|&i| mat[i][col] == 1) {
            mat.swap(rank, sel);
            for i in 0..n_rows {
                if i != rank && mat[i][col] == 1 {
                    for j in col..=n_cols {
                        mat[i][j] ^= mat[rank][j];
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
    }
    // inconsistent?
    for row in rank..n_rows {
        if mat[row][n_cols] == 1 {
            return None;
        }
    }
    let mut solution_bits = vec![0u8; n_cols];
    for (i, &col) in pivot_cols.iter().enumerate() {
        solution_bits[col] = mat[i][n_cols];
    }
    let mut coeffs = Vec::with_capacity(bound + 1);
    for i in 0..=bound {
        let mut c = coeff.zero();
        for (j, bj) in basis.iter().enumerate() {
            if solution_bits[i * m + j] == 1 {
                c = coeff.add(&c, bj);
            }
        }
        coeffs.push(c);
    }
    let p = Poly::new(coeffs);
    // verify (the linear model is exact, this is a cheap safety net)
    let lhs = p.mul(&p, coeff).add(&p.mul(r, coeff), coeff);
    if lhs == *n {
        Some(p)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// enumeration and randomness
// ---------------------------------------------------------------------------

const ENUM_LIMIT: u128 = 1 << 20;

impl Field {
    /// Materializes all elements of a small finite field.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        let order = self.order()?;
        if order > ENUM_LIMIT {
            return None;
        }
        match &*self.0 {
            FieldRepr::Prime { p } => Some((0..*p).map(Elem::Fp).collect()),
            FieldRepr::Binary { k, .. } => Some((0..(1u64 << *k)).map(Elem::F2k).collect()),
            FieldRepr::Quad { base, .. } => {
                let base_elems = base.elements()?;
                let mut out = Vec::with_capacity(base_elems.len() * base_elems.len());
                for x in &base_elems {
                    for y in &base_elems {
                        out.push(Elem::Ext(Box::new((x.clone(), y.clone()))));
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Elem {
        match &*self.0 {
            FieldRepr::Prime { p } => Elem::Fp(rng.gen_range(0..*p)),
            FieldRepr::Binary { k, .. } => Elem::F2k(rng.gen_range(0..(1u64 << *k))),
            FieldRepr::Rationals => {
                let n = rng.gen_range(-9i64..=9);
                let d = rng.gen_range(1i64..=3);
                Elem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            FieldRepr::RatFunc { coeff } => {
                let deg = rng.gen_range(0..=2usize);
                let num = Poly::new((0..=deg).map(|_| coeff.random(rng)).collect());
                let den = if rng.gen_bool(0.25) {
                    Poly::new(vec![coeff.random(rng), coeff.one()])
                } else {
                    Poly::one(coeff)
                };
                Elem::Fun(Box::new(RatFunc::new(num, den, coeff)))
            }
            FieldRepr::Quad { base, .. } => {
                Elem::Ext(Box::new((base.random(rng), base.random(rng))))
            }
        }
    }

    pub fn random_nonzero<R: Rng>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// formatting
// ---------------------------------------------------------------------------

impl fmt::Display for Field {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldRepr::Prime { p } => write!(out, "GF({p})"),
            FieldRepr::Binary { k, .. } => write!(out, "GF(2^{k})"),
            FieldRepr::Rationals => write!(out, "Q"),
            FieldRepr::RatFunc { coeff } => write!(out, "{coeff}(t)"),
            FieldRepr::Quad { base, ext } => match ext {
                ExtKind::Radical { d } => {
                    write!(out, "{base}(e), e^2 = {}", base.fmt_elem(d))
                }
                ExtKind::ArtinSchreier { delta } => {
                    write!(out, "{base}(e), e^2 + e = {}", base.fmt_elem(delta))
                }
            },
        }
    }
}

fn fmt_poly(coeff: &Field, p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = coeff.fmt_elem(c);
        let term = match i {
            0 => cs,
            _ => {
                let v = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                if cs == "1" {
                    v
                } else if cs.contains('+') || cs.contains('-') {
                    format!("({cs})*{v}")
                } else {
                    format!("{cs}*{v}")
                }
            }
        };
        terms.push(term);
    }
    terms.join("+")
}

impl Field {
    /// Canonical, re-parseable textual form of an element.
    pub fn fmt_elem(&self, a: &Elem) -> String {
        match (&*self.0, a) {
            (FieldRepr::Prime { .. }, Elem::Fp(v)) => format!("{v}"),
            (FieldRepr::Binary { .. }, Elem::F2k(v)) => {
                if *v == 0 {
                    return "0".into();
                }
                let mut terms = Vec::new();
                for i in (0..64).rev() {
                    if (v >> i) & 1 == 1 {
                        terms.push(match i {
                            0 => "1".to_string(),
                            1 => "x".to_string(),
                            _ => format!("x^{i}"),
                        });
                    }
                }
                terms.join("+")
            }
            (FieldRepr::Rationals, Elem::Rat(r)) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (FieldRepr::RatFunc { coeff }, Elem::Fun(rf)) => {
                let ns = fmt_poly(coeff, &rf.num, "t");
                if rf.den.is_one(coeff) {
                    ns
                } else {
                    format!("({ns})/({})", fmt_poly(coeff, &rf.den, "t"))
                }
            }
            (FieldRepr::Quad { base, .. }, Elem::Ext(p)) => {
                let (x, y) = (&p.0, &p.1);
                if y.is_zero() {
                    return base.fmt_elem(x);
                }
                let ey = if *y == base.one() {
                    "e".to_string()
                } else {
                    let ys = base.fmt_elem(y);
                    if ys.chars().all(|ch| ch.is_ascii_digit()) {
                        format!("{ys}*e")
                    } else {
                        format!("({ys})*e")
                    }
                };
                if x.is_zero() {
                    ey
                } else {
                    format!("{}+{}", base.fmt_elem(x), ey)
                }
            }
            _ => panic!("element does not belong to this field"),
        }
    }
}

// ---------------------------------------------------------------------------
// field tower
// ---------------------------------------------------------------------------

/// A base field F together with an optional separable quadratic extension K/F.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTower {
    base: Field,
    ext: Option<Field>,
}

impl FieldTower {
    pub fn base_only(base: Field) -> FieldTower {
        FieldTower { base, ext: None }
    }

    pub fn with_radical(base: Field, d: Elem) -> Result<FieldTower> {
        let ext = base.radical_extension(d)?;
        Ok(FieldTower { base, ext: Some(ext) })
    }

    pub fn with_artin_schreier(base: Field, delta: Elem) -> Result<FieldTower> {
        let ext = base.artin_schreier_extension(delta)?;
        Ok(FieldTower { base, ext: Some(ext) })
    }

    pub fn f(&self) -> &Field {
        &self.base
    }

    pub fn k(&self) -> Result<&Field> {
        self.ext.as_ref().ok_or(Error::NoExtension)
    }

    pub fn has_extension(&self) -> bool {
        self.ext.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q_sqrt2() -> Field {
        let q = Field::rationals();
        q.radical_extension(q.from_i64(2)).unwrap()
    }

    fn f2t_eta() -> Field {
        // F_2(t) with eta^2 + eta = t
        let f2 = Field::prime(2).unwrap();
        let f2t = Field::rational_function(&f2).unwrap();
        let t = f2t.var_t().unwrap();
        f2t.artin_schreier_extension(t).unwrap()
    }

    #[test]
    fn gf5_basic() {
        let f = Field::prime(5).unwrap();
        let two = f.from_i64(2);
        let four = f.from_i64(4);
        assert_eq!(f.mul(&two, &four), f.from_i64(3));
        assert!(f.div(&two, &f.zero()).is_err());
    }

    #[test]
    fn conjugate_product_in_q_sqrt2() {
        let k = q_sqrt2();
        let a = k.from_coords(k.base().unwrap().from_i64(3), k.base().unwrap().from_i64(1));
        let prod = k.mul(&a, &k.conj(&a));
        assert_eq!(prod, k.from_i64(7));
        assert_eq!(k.norm_to_base(&a), Field::rationals().from_i64(7));
    }

    #[test]
    fn artin_schreier_defining_relation() {
        let k = f2t_eta();
        let eta = k.eta().unwrap();
        let t = k.var_t().unwrap();
        // eta * eta = t + eta
        assert_eq!(k.mul(&eta, &eta), k.add(&t, &eta));
        // trace(eta) = 1
        let f = k.base().unwrap();
        assert_eq!(k.trace_to_base(&eta), f.one());
        assert_eq!(k.s_apply(&k.one()), f.zero());
    }

    #[test]
    fn remark_norm_value() {
        // N(1 + t^2 + t*eta) = 1 + t + t^4 over F_2(t), eta^2 + eta = t
        let k = f2t_eta();
        let f = k.base().unwrap().clone();
        let t = f.var_t().unwrap();
        let x = f.add(&f.one(), &f.mul(&t, &t));
        let a = k.from_coords(x, t.clone());
        let n = k.norm_to_base(&a);
        let t4 = f.pow_i64(&t, 4).unwrap();
        let expected = f.add(&f.add(&f.one(), &t), &t4);
        assert_eq!(n, expected);
        assert!(f.is_square(&n).is_none());
    }

    #[test]
    fn iota_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in [q_sqrt2(), f2t_eta()] {
            for _ in 0..50 {
                let a = k.random(&mut rng);
                assert_eq!(k.conj(&k.conj(&a)), a);
                assert_eq!(k.norm_to_base(&a), k.norm_to_base(&k.conj(&a)));
            }
        }
    }

    #[test]
    fn s_kernel_is_the_base_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = q_sqrt2();
        for _ in 0..1000 {
            let a = k.random(&mut rng);
            let in_f = k.in_base(&a).is_some();
            assert_eq!(k.s_apply(&a).is_zero(), in_f);
        }
    }

    #[test]
    fn square_witnesses() {
        let f2t = Field::rational_function(&Field::prime(2).unwrap()).unwrap();
        let t = f2t.var_t().unwrap();
        assert!(f2t.is_square(&t).is_none());
        let t2p1 = f2t.add(&f2t.mul(&t, &t), &f2t.one());
        let w = f2t.is_square(&t2p1).unwrap();
        assert_eq!(f2t.mul(&w, &w), t2p1);
        assert_eq!(w, f2t.add(&t, &f2t.one()));

        // 3 + 2*sqrt(2) = (1 + sqrt(2))^2
        let k = q_sqrt2();
        let q = Field::rationals();
        let a = k.from_coords(q.from_i64(3), q.from_i64(2));
        let w = k.is_square(&a).unwrap();
        assert_eq!(k.mul(&w, &w), a);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [k, f2t_eta(), Field::prime(13).unwrap()] {
            for _ in 0..50 {
                let a = field.random(&mut rng);
                let sq = field.mul(&a, &a);
                let w = field.is_square(&sq).expect("squares are squares");
                assert_eq!(field.mul(&w, &w), sq);
            }
        }
    }

    #[test]
    fn wp_membership_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.wp_membership(&f2.one()).unwrap().0, Decision::No);

        let f2t = Field::rational_function(&f2).unwrap();
        let t = f2t.var_t().unwrap();
        assert_eq!(f2t.wp_membership(&t).unwrap().0, Decision::No);

        let t2t = f2t.add(&f2t.mul(&t, &t), &t);
        let (dec, wit) = f2t.wp_membership(&t2t).unwrap();
        assert_eq!(dec, Decision::Yes);
        let x = wit.unwrap();
        assert_eq!(f2t.add(&f2t.mul(&x, &x), &x), t2t);

        // finite-field witness
        let gf8 = Field::binary(3, 0b1011).unwrap();
        let mut members = 0;
        for v in 0..8u64 {
            let e = Elem::F2k(v);
            let (dec, wit) = gf8.wp_membership(&e).unwrap();
            if dec == Decision::Yes {
                members += 1;
                let x = wit.unwrap();
                assert_eq!(gf8.add(&gf8.mul(&x, &x), &x), e);
            }
        }
        assert_eq!(members, 4);
    }

    #[test]
    fn gf2k_matches_log_table_oracle() {
        // multiplication agrees with a discrete-log table for k <= 8
        for (k, poly) in [
            (2u32, 0b111u64),
            (3, 0b1011),
            (4, 0b10011),
            (5, 0b100101),
            (6, 0b1000011),
            (7, 0b10000011),
            (8, 0x11d),
        ] {
            let f = Field::binary(k, poly).unwrap();
            let order = (1u64 << k) - 1;
            // find a generator
            let mut gen = 0;
            'outer: for g in 2..(1u64 << k) {
                let mut seen = vec![false; 1 << k];
                let mut acc = 1u64;
                for _ in 0..order {
                    if seen[acc as usize] {
                        continue 'outer;
                    }
                    seen[acc as usize] = true;
                    acc = gf2k::mul(acc, g, poly, k);
                }
                gen = g;
                break;
            }
            assert_ne!(gen, 0);
            let mut log = vec![0u64; 1 << k];
            let mut acc = 1u64;
            for i in 0..order {
                log[acc as usize] = i;
                acc = gf2k::mul(acc, gen, poly, k);
            }
            let mut exp = vec![0u64; order as usize];
            let mut acc = 1u64;
            for item in exp.iter_mut() {
                *item = acc;
                acc = gf2k::mul(acc, gen, poly, k);
            }
            for a in 0..(1u64 << k) {
                for b in 0..(1u64 << k) {
                    let prod = match (a, b) {
                        (0, _) | (_, 0) => 0,
                        _ => exp[((log[a as usize] + log[b as usize]) % order) as usize],
                    };
                    assert_eq!(f.mul(&Elem::F2k(a), &Elem::F2k(b)), Elem::F2k(prod));
                }
            }
        }
    }

    #[test]
    fn element_formatting_is_canonical() {
        let k = q_sqrt2();
        let q = Field::rationals();
        let a = k.from_coords(q.from_i64(3), q.from_i64(2));
        assert_eq!(k.fmt_elem(&a), "3+2*e");
        let f2te = f2t_eta();
        let f2t = f2te.base().unwrap();
        let t = f2t.var_t().unwrap();
        let one_pl_t = f2t.add(&f2t.one(), &t);
        let b = f2te.from_coords(t.clone(), one_pl_t);
        assert_eq!(f2te.fmt_elem(&b), "t+(t+1)*e");
    }

    #[test]
    fn mixed_operand_rejection() {
        let f5 = Field::prime(5).unwrap();
        let q = Field::rationals();
        let a = f5.from_i64(2);
        let b = q.from_i64(2);
        assert_eq!(
            f5.arith(&a, &b, ArithOp::Mul),
            Err(Error::MixedOperands)
        );
        // value out of range is also rejected
        assert_eq!(
            f5.arith(&Elem::Fp(7), &a, ArithOp::Add),
            Err(Error::MixedOperands)
        );
    }
}
