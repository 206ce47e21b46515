//! Witt decomposition of regular quadratic forms.
//!
//! Finite fields: dimension plus discriminant class (odd characteristic) or
//! dimension plus Arf class (characteristic 2). Rationals: signature,
//! discriminant and Hasse invariants at the finitely many relevant places,
//! splitting hyperbolic planes off invariant-by-invariant, so no isotropic
//! vector ever needs to be constructed. Quadratic extensions of the
//! rationals get a bounded search path that reports undecided when neither
//! the search nor the definiteness screen is conclusive.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Decision, Error, Result};
use crate::fields::{Elem, ExtKind, Field};

use super::hilbert::{self, Place};
use super::QuadraticForm;

pub const DEFAULT_FACTOR_BUDGET: u64 = 1 << 22;
const SEARCH_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WittReport {
    pub dim: usize,
    pub witt_index: usize,
    pub hyperbolic: bool,
    pub kernel_dim: usize,
    pub kernel: KernelInvariants,
}

/// Complete isometry invariants of the anisotropic kernel, per field kind.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum KernelInvariants {
    Trivial,
    /// Finite field, odd characteristic: discriminant class.
    FiniteOdd { disc: String, disc_is_square: bool },
    /// Finite field, characteristic 2: Arf class.
    FiniteChar2 { arf: String, arf_trivial: bool },
    /// Rationals: signature, signed squarefree discriminant, and the finite
    /// places with Hasse invariant -1.
    Rational {
        signature: (usize, usize),
        disc: String,
        hasse_minus: Vec<String>,
    },
    /// Quadratic extension of the rationals: anisotropy certified by
    /// definiteness under a real embedding.
    ExtensionDefinite,
}

impl WittReport {
    /// Whether two reports certify the same isometry class (same field
    /// assumed). Over finite fields and the rationals these invariants are
    /// complete.
    pub fn same_class(&self, other: &WittReport) -> bool {
        self.dim == other.dim
            && self.witt_index == other.witt_index
            && match (&self.kernel, &other.kernel) {
                (KernelInvariants::Trivial, KernelInvariants::Trivial) => true,
                (
                    KernelInvariants::FiniteOdd { disc_is_square: a, .. },
                    KernelInvariants::FiniteOdd { disc_is_square: b, .. },
                ) => a == b,
                (
                    KernelInvariants::FiniteChar2 { arf_trivial: a, .. },
                    KernelInvariants::FiniteChar2 { arf_trivial: b, .. },
                ) => a == b,
                (
                    KernelInvariants::Rational { signature: s1, disc: d1, hasse_minus: h1 },
                    KernelInvariants::Rational { signature: s2, disc: d2, hasse_minus: h2 },
                ) => s1 == s2 && d1 == d2 && h1 == h2,
                _ => false,
            }
    }
}

/// Congruence diagonalization of a symmetric Gram matrix, characteristic != 2.
pub fn symmetric_diagonalize(f: &Field, gram: &[Vec<Elem>]) -> Vec<Elem> {
    let n = gram.len();
    let mut b: Vec<Vec<Elem>> = gram.to_vec();
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        if b[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !b[j][j].is_zero()) {
                // swap basis vectors i and j
                b.swap(i, j);
                for row in b.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !b[i][j].is_zero()) {
                // basis_i += basis_j turns the diagonal entry into 2*b_ij
                for c in 0..n {
                    let t = b[j][c].clone();
                    b[i][c] = f.add(&b[i][c], &t);
                }
                for r in 0..n {
                    let t = b[r][j].clone();
                    b[r][i] = f.add(&b[r][i], &t);
                }
            }
        }
        if b[i][i].is_zero() {
            diag.push(f.zero());
            continue;
        }
        let pivot_inv = f.inv(&b[i][i]).unwrap();
        for j in i + 1..n {
            if b[i][j].is_zero() {
                continue;
            }
            let factor = f.mul(&b[i][j], &pivot_inv);
            for c in 0..n {
                let t = f.mul(&factor, &b[i][c]);
                b[j][c] = f.sub(&b[j][c], &t);
            }
            for r in 0..n {
                let t = f.mul(&factor, &b[r][i]);
                b[r][j] = f.sub(&b[r][j], &t);
            }
        }
        diag.push(b[i][i].clone());
    }
    diag
}

pub fn witt_decompose(q: &QuadraticForm) -> Result<WittReport> {
    witt_decompose_budgeted(q, DEFAULT_FACTOR_BUDGET)
}

pub fn witt_decompose_budgeted(q: &QuadraticForm, budget: u64) -> Result<WittReport> {
    if !q.is_regular() {
        return Err(Error::NotRegular);
    }
    let f = q.field().clone();
    if q.dim() == 0 {
        return Ok(WittReport {
            dim: 0,
            witt_index: 0,
            hyperbolic: true,
            kernel_dim: 0,
            kernel: KernelInvariants::Trivial,
        });
    }
    if f.is_finite() {
        if f.char2() {
            witt_finite_char2(q, &f)
        } else {
            witt_finite_odd(q, &f)
        }
    } else if f.is_rationals() {
        witt_rationals(q, budget)
    } else if f.is_quad_ext() && f.base().unwrap().is_rationals() {
        witt_extension_search(q, &f, SEARCH_BUDGET)
    } else {
        Err(Error::Unsupported(format!(
            "Witt decomposition over {f} is not supported"
        )))
    }
}

pub fn is_hyperbolic(q: &QuadraticForm) -> Result<Decision> {
    match witt_decompose(q) {
        Ok(r) => Ok(if r.hyperbolic { Decision::Yes } else { Decision::No }),
        Err(Error::Undecided(_)) => Ok(Decision::Undecided),
        Err(e) => Err(e),
    }
}

/// Exact isometry decision over finite fields and the rationals, where the
/// Witt invariants are complete; undecided elsewhere.
pub fn isometric(q1: &QuadraticForm, q2: &QuadraticForm) -> Result<Decision> {
    if q1.field() != q2.field() {
        return Err(Error::MixedOperands);
    }
    if q1.dim() != q2.dim() {
        return Ok(Decision::No);
    }
    let f = q1.field();
    if f.is_finite() || f.is_rationals() {
        let r1 = witt_decompose(q1);
        let r2 = witt_decompose(q2);
        match (r1, r2) {
            (Ok(a), Ok(b)) => Ok(if a.same_class(&b) { Decision::Yes } else { Decision::No }),
            (Err(Error::Undecided(_)), _) | (_, Err(Error::Undecided(_))) => {
                Ok(Decision::Undecided)
            }
            (Err(e), _) | (_, Err(e)) => Err(e),
        }
    } else {
        Ok(Decision::Undecided)
    }
}

fn witt_finite_odd(q: &QuadraticForm, f: &Field) -> Result<WittReport> {
    let gram_halved = {
        // B = (U + U^T)/2 so that q(v) = v^T B v
        let polar = q.polar();
        let half = f.inv(&f.from_i64(2)).unwrap();
        (0..q.dim())
            .map(|i| {
                (0..q.dim())
                    .map(|j| f.mul(polar.gram(i, j), &half))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let diag = symmetric_diagonalize(f, &gram_halved);
    let mut disc = f.one();
    for d in &diag {
        debug_assert!(!d.is_zero());
        disc = f.mul(&disc, d);
    }
    let dim = q.dim();
    let mut n = dim;
    let mut k = 0usize;
    while n >= 3 {
        n -= 2;
        k += 1;
        disc = f.neg(&disc);
    }
    if n == 2 && f.is_square(&f.neg(&disc)).is_some() {
        n = 0;
        k += 1;
        // disc of the empty kernel
        disc = f.one();
    }
    let kernel = if n == 0 {
        KernelInvariants::Trivial
    } else {
        KernelInvariants::FiniteOdd {
            disc: f.fmt_elem(&disc),
            disc_is_square: f.is_square(&disc).is_some(),
        }
    };
    Ok(WittReport {
        dim,
        witt_index: k,
        hyperbolic: n == 0,
        kernel_dim: n,
        kernel,
    })
}

fn witt_finite_char2(q: &QuadraticForm, f: &Field) -> Result<WittReport> {
    let dim = q.dim();
    debug_assert!(dim % 2 == 0, "regular characteristic-2 forms are even-dimensional");
    // symplectic pair decomposition of the polar form
    let mut rest: Vec<Vec<Elem>> = (0..dim)
        .map(|i| {
            let mut v = vec![f.zero(); dim];
            v[i] = f.one();
            v
        })
        .collect();
    let mut arf = f.zero();
    let mut pairs = 0usize;
    while !rest.is_empty() {
        let e = rest[0].clone();
        let partner = (1..rest.len())
            .find(|&i| !q.polar_eval(&e, &rest[i]).is_zero())
            .expect("regular alternating form has a symplectic partner");
        let mut fv = rest[partner].clone();
        let scale = f.inv(&q.polar_eval(&e, &fv)).unwrap();
        for c in fv.iter_mut() {
            *c = f.mul(c, &scale);
        }
        arf = f.add(&arf, &f.mul(&q.evaluate(&e), &q.evaluate(&fv)));
        pairs += 1;
        let mut next = Vec::with_capacity(rest.len() - 2);
        for (i, w) in rest.iter().enumerate() {
            if i == 0 || i == partner {
                continue;
            }
            // project onto the orthogonal complement of (e, fv)
            let a = q.polar_eval(w, &fv);
            let b = q.polar_eval(w, &e);
            let mut proj = w.clone();
            for c in 0..dim {
                proj[c] = f.add(&proj[c], &f.mul(&a, &e[c]));
                proj[c] = f.add(&proj[c], &f.mul(&b, &fv[c]));
            }
            next.push(proj);
        }
        rest = next;
    }
    let (member, _) = f.wp_membership(&arf)?;
    let hyperbolic = member == Decision::Yes;
    let (witt_index, kernel_dim) = if hyperbolic { (pairs, 0) } else { (pairs - 1, 2) };
    let kernel = if hyperbolic {
        KernelInvariants::Trivial
    } else {
        KernelInvariants::FiniteChar2 {
            arf: f.fmt_elem(&arf),
            arf_trivial: false,
        }
    };
    Ok(WittReport { dim, witt_index, hyperbolic, kernel_dim, kernel })
}

struct RationalInvariants {
    n: usize,
    disc: BigInt,
    signature: (usize, usize),
    /// (place, hasse invariant) over the fixed candidate set
    eps: Vec<(BigInt, i8)>,
}

fn witt_rationals(q: &QuadraticForm, budget: u64) -> Result<WittReport> {
    let f = q.field();
    let polar = q.polar();
    let half = f.inv(&f.from_i64(2)).unwrap();
    let gram: Vec<Vec<Elem>> = (0..q.dim())
        .map(|i| {
            (0..q.dim())
                .map(|j| f.mul(polar.gram(i, j), &half))
                .collect()
        })
        .collect();
    let diag = symmetric_diagonalize(f, &gram);
    let mut entries: Vec<BigInt> = Vec::with_capacity(diag.len());
    let mut signature = (0usize, 0usize);
    for d in &diag {
        let r = match d {
            Elem::Rat(r) => r.clone(),
            _ => unreachable!("rational field elements"),
        };
        if r.is_positive() {
            signature.0 += 1;
        } else {
            signature.1 += 1;
        }
        entries.push(hilbert::squarefree_part(&BigRational::from(r), budget)?);
    }
    // candidate places: 2 and every odd prime dividing an entry
    let mut places: Vec<BigInt> = vec![BigInt::from(2u32)];
    for e in &entries {
        for (p, _) in hilbert::factor(e, budget)? {
            if !places.contains(&p) {
                places.push(p);
            }
        }
    }
    places.sort();
    let mut eps: Vec<(BigInt, i8)> = Vec::with_capacity(places.len());
    for p in &places {
        let place = Place::Prime(p.clone());
        let mut sym = 1i8;
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                sym *= hilbert::hilbert_symbol_squarefree(&entries[i], &entries[j], &place);
            }
        }
        eps.push((p.clone(), sym));
    }
    let mut disc = BigInt::from(1u32);
    for e in &entries {
        disc *= e;
    }
    let disc = hilbert::squarefree_part(&BigRational::from_integer(disc), budget)?;
    let mut inv = RationalInvariants { n: q.dim(), disc, signature, eps };

    let mut witt_index = 0usize;
    while inv.n >= 2 && rational_isotropic(&inv) {
        // split off <1, -1>: disc flips sign, eps gains (-1, new disc)
        inv.n -= 2;
        inv.disc = -inv.disc.clone();
        for (p, e) in inv.eps.iter_mut() {
            *e *= hilbert::hilbert_symbol_squarefree(
                &BigInt::from(-1i32),
                &inv.disc,
                &Place::Prime(p.clone()),
            );
        }
        inv.signature.0 -= 1;
        inv.signature.1 -= 1;
        witt_index += 1;
    }
    let hyperbolic = inv.n == 0;
    let kernel = if hyperbolic {
        KernelInvariants::Trivial
    } else {
        KernelInvariants::Rational {
            signature: inv.signature,
            disc: inv.disc.to_string(),
            hasse_minus: inv
                .eps
                .iter()
                .filter(|(_, e)| *e == -1)
                .map(|(p, _)| p.to_string())
                .collect(),
        }
    };
    Ok(WittReport {
        dim: q.dim(),
        witt_index,
        hyperbolic,
        kernel_dim: inv.n,
        kernel,
    })
}

/// Local square test for a signed squarefree integer.
fn is_local_square(d: &BigInt, p: &BigInt) -> bool {
    use num_integer::Integer;
    use num_traits::Zero;
    if p == &BigInt::from(2u32) {
        if d.is_even() {
            return false;
        }
        d.mod_floor(&BigInt::from(8u32)) == BigInt::from(1u32)
    } else {
        if (d % p).is_zero() {
            return false;
        }
        hilbert::legendre(d, p) == 1
    }
}

/// Isotropy of a regular rational form from its invariants, by the
/// local-global classification.
fn rational_isotropic(inv: &RationalInvariants) -> bool {
    let (r, s) = inv.signature;
    if inv.n <= 1 {
        return false;
    }
    if r == 0 || s == 0 {
        return false; // definite
    }
    match inv.n {
        2 => inv.disc == BigInt::from(-1i32),
        3 => {
            // isotropic at p iff eps_p = (-1, -disc)_p
            let md = -inv.disc.clone();
            inv.eps.iter().all(|(p, e)| {
                *e == hilbert::hilbert_symbol_squarefree(
                    &BigInt::from(-1i32),
                    &md,
                    &Place::Prime(p.clone()),
                )
            })
        }
        4 => {
            // anisotropic at p iff disc is a local square and
            // eps_p != (-1,-1)_p
            inv.eps.iter().all(|(p, e)| {
                !(is_local_square(&inv.disc, p)
                    && *e != hilbert::hilbert_symbol_squarefree(
                        &BigInt::from(-1i32),
                        &BigInt::from(-1i32),
                        &Place::Prime(p.clone()),
                    ))
            })
        }
        _ => true, // n >= 5 and indefinite
    }
}

/// Sign of an element of Q(sqrt d), d > 0, under the real embedding sending
/// eta to +sqrt(d) (positive = true branch) or -sqrt(d).
pub fn sign_under_embedding(k: &Field, a: &Elem, positive_root: bool) -> i8 {
    let Some(ExtKind::Radical { d }) = k.ext_kind() else {
        panic!("sign_under_embedding requires a radical extension");
    };
    let base = k.base().unwrap();
    let (x, y) = k.coords(a);
    let y = if positive_root { y } else { base.neg(&y) };
    let sign_of = |e: &Elem| -> i8 {
        match e {
            Elem::Rat(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
            _ => panic!("rational base expected"),
        }
    };
    let sx = sign_of(&x);
    let sy = sign_of(&y);
    if sy == 0 {
        return sx;
    }
    if sx == 0 {
        return sy;
    }
    if sx == sy {
        return sx;
    }
    // compare x^2 against d y^2
    let x2 = base.mul(&x, &x);
    let dy2 = base.mul(d, &base.mul(&y, &y));
    let diff = base.sub(&x2, &dy2);
    let sd = sign_of(&diff);
    if sd == 0 {
        0
    } else if sd > 0 {
        sx
    } else {
        sy
    }
}

/// Bounded search over a quadratic extension of the rationals: split
/// hyperbolic planes while explicit isotropic vectors are found; certify the
/// remainder anisotropic by real-embedding definiteness where possible.
fn witt_extension_search(q: &QuadraticForm, k: &Field, budget: u64) -> Result<WittReport> {
    let dim = q.dim();
    let mut current = q.clone();
    let mut witt_index = 0usize;
    loop {
        if current.dim() == 0 {
            return Ok(WittReport {
                dim,
                witt_index,
                hyperbolic: true,
                kernel_dim: 0,
                kernel: KernelInvariants::Trivial,
            });
        }
        match find_isotropic_vector(&current, budget) {
            Some(v) => {
                current = split_hyperbolic(&current, &v);
                witt_index += 1;
            }
            None => {
                if current.dim() >= 1 && extension_definite(&current, k) {
                    return Ok(WittReport {
                        dim,
                        witt_index,
                        hyperbolic: false,
                        kernel_dim: current.dim(),
                        kernel: KernelInvariants::ExtensionDefinite,
                    });
                }
                return Err(Error::Undecided(
                    "isotropy search budget exhausted over the extension field".into(),
                ));
            }
        }
    }
}

/// Definiteness of a diagonalized form under one of the real embeddings of
/// Q(sqrt d), d > 0; a conclusive anisotropy certificate.
fn extension_definite(q: &QuadraticForm, k: &Field) -> bool {
    let Some(ExtKind::Radical { d }) = k.ext_kind() else {
        return false;
    };
    let base = k.base().unwrap();
    let d_rat = match d {
        Elem::Rat(r) => r.clone(),
        _ => return false,
    };
    if !d_rat.is_positive() {
        return false;
    }
    let _ = base;
    let polar = q.polar();
    let half = k.inv(&k.from_i64(2)).unwrap();
    let gram: Vec<Vec<Elem>> = (0..q.dim())
        .map(|i| (0..q.dim()).map(|j| k.mul(polar.gram(i, j), &half)).collect())
        .collect();
    let diag = symmetric_diagonalize(k, &gram);
    for branch in [true, false] {
        let signs: Vec<i8> = diag
            .iter()
            .map(|e| sign_under_embedding(k, e, branch))
            .collect();
        if signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0) {
            return true;
        }
    }
    false
}

/// Deterministic bounded sweep for an isotropic vector.
fn find_isotropic_vector(q: &QuadraticForm, budget: u64) -> Option<Vec<Elem>> {
    let k = q.field();
    let n = q.dim();
    let mut tried = 0u64;
    for v in crate::search::vector_sweep(k, n) {
        if tried >= budget {
            return None;
        }
        tried += 1;
        if v.iter().all(Elem::is_zero) {
            continue;
        }
        if q.evaluate(&v).is_zero() {
            return Some(v);
        }
    }
    None
}

/// Splits the hyperbolic plane spanned by an isotropic vector and returns
/// the form induced on its orthogonal complement (characteristic != 2 path
/// is general; the pairing normalization below works in any characteristic).
pub fn split_hyperbolic(q: &QuadraticForm, v: &[Elem]) -> QuadraticForm {
    let f = q.field().clone();
    let n = q.dim();
    debug_assert!(q.evaluate(v).is_zero());
    // find u with b(v, u) != 0 among the standard basis
    let mut u = None;
    for i in 0..n {
        let mut cand = vec![f.zero(); n];
        cand[i] = f.one();
        if !q.polar_eval(v, &cand).is_zero() {
            u = Some(cand);
            break;
        }
    }
    let mut u = u.expect("regular form: isotropic vector has a pairing partner");
    let scale = f.inv(&q.polar_eval(v, &u)).unwrap();
    for c in u.iter_mut() {
        *c = f.mul(c, &scale);
    }
    // make u isotropic: u' = u - q(u) v  (b(v,u) = 1)
    let qu = q.evaluate(&u);
    let mut u2 = u.clone();
    for i in 0..n {
        u2[i] = f.sub(&u2[i], &f.mul(&qu, &v[i]));
    }
    debug_assert!(q.evaluate(&u2).is_zero());
    // complement basis: take n-2 independent projections of the standard basis
    let mut complement: Vec<Vec<Elem>> = Vec::with_capacity(n.saturating_sub(2));
    let mut chosen: Vec<Vec<Elem>> = vec![v.to_vec(), u2.clone()];
    for i in 0..n {
        if complement.len() == n - 2 {
            break;
        }
        let mut w = vec![f.zero(); n];
        w[i] = f.one();
        // w' = w - b(w, u2) v - b(w, v) u2
        let a = q.polar_eval(&w, &u2);
        let b = q.polar_eval(&w, v);
        for c in 0..n {
            let t1 = f.mul(&a, &v[c]);
            let t2 = f.mul(&b, &u2[c]);
            w[c] = f.sub(&f.sub(&w[c], &t1), &t2);
        }
        // keep only if it extends the span of {v, u2, complement...}
        let mut all = chosen.clone();
        all.push(w.clone());
        if crate::linalg::independent(&f, &all) {
            chosen.push(w.clone());
            complement.push(w);
        }
    }
    q.apply_basis(&complement)
}
