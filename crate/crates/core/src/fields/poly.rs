//! Dense univariate polynomials over a finite coefficient field.
//!
//! Coefficients are stored ascending; the invariant is that the leading
//! coefficient (last entry) is nonzero, with the zero polynomial represented
//! by an empty vector. Every operation takes the coefficient field handle.

use super::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(Elem::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::new(vec![c])
    }

    pub fn one(f: &Field) -> Self {
        Poly::constant(f.one())
    }

    /// The variable t.
    pub fn var(f: &Field) -> Self {
        Poly::new(vec![f.zero(), f.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with deg 0 = None.
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize, f: &Field) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn is_one(&self, f: &Field) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == f.one()
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| f.zero());
            out.push(f.add(&a, &b));
        }
        Poly::new(out)
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Elem, f: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Poly, f: &Field) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.deg().unwrap();
        let lead_inv = f.inv(divisor.leading().unwrap()).expect("nonzero leading");
        let mut rem = self.clone();
        let mut quot = vec![f.zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.deg() {
            if dr < dd {
                break;
            }
            let factor = f.mul(rem.leading().unwrap(), &lead_inv);
            let shift = dr - dd;
            quot[shift] = f.add(&quot[shift], &factor);
            // rem -= factor * t^shift * divisor
            let mut new = rem.coeffs.clone();
            for (j, b) in divisor.coeffs.iter().enumerate() {
                let t = f.mul(&factor, b);
                new[shift + j] = f.sub(&new[shift + j], &t);
            }
            rem = Poly::new(new);
        }
        (Poly::new(quot), rem)
    }

    pub fn rem(&self, divisor: &Poly, f: &Field) -> Poly {
        self.divrem(divisor, f).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.make_monic(f)
    }

    pub fn make_monic(&self, f: &Field) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = f.inv(l).expect("nonzero leading");
                self.scale(&inv, f)
            }
        }
    }

    pub fn eval(&self, x: &Elem, f: &Field) -> Elem {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// Exact polynomial square root, if one exists.
    ///
    /// In characteristic 2 a polynomial is a square iff all odd-degree
    /// coefficients vanish and the even ones are squares in the coefficient
    /// field (automatic over finite fields). Otherwise the root is computed
    /// by matching coefficients from the top and verified by squaring.
    pub fn sqrt(&self, f: &Field) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let d = self.deg().unwrap();
        if d % 2 != 0 {
            return None;
        }
        if f.char2() {
            let mut out = Vec::with_capacity(d / 2 + 1);
            for i in 0..=d {
                let c = self.coeff(i, f);
                if i % 2 == 1 {
                    if !c.is_zero() {
                        return None;
                    }
                } else {
                    out.push(f.sqrt_char2(&c));
                }
            }
            return Some(Poly::new(out));
        }
        let m = d / 2;
        let lead_root = f.is_square(self.leading().unwrap())?;
        let mut root = vec![f.zero(); m + 1];
        root[m] = lead_root;
        // Solve for lower coefficients: coefficient of t^(m+k) in root^2
        // involves 2*root[m]*root[k] plus already-known terms.
        let two_lead_inv = f
            .inv(&f.add(&root[m], &root[m]))
            .expect("leading coefficient nonzero, char != 2");
        for k in (0..m).rev() {
            // coefficient of t^(m+k) in root^2 is 2*root[m]*root[k] plus
            // products of already-determined coefficients
            let mut acc = self.coeff(m + k, f);
            let mut known = f.zero();
            for i in 0..=m {
                if m + k < i {
                    continue;
                }
                let j = m + k - i;
                if j > m {
                    continue;
                }
                if i == k || j == k {
                    continue;
                }
                known = f.add(&known, &f.mul(&root[i], &root[j]));
            }
            acc = f.sub(&acc, &known);
            root[k] = f.mul(&acc, &two_lead_inv);
        }
        let candidate = Poly::new(root);
        if candidate.mul(&candidate, f) == *self {
            Some(candidate)
        } else {
            None
        }
    }
}
