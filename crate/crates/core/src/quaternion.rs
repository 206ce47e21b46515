//! Quaternion algebras with involutions of the first kind.
//!
//! Characteristic != 2 uses the presentation (a, b): i^2 = a, j^2 = b,
//! ji = -ij. Characteristic 2 uses [a, b): i^2 + i = a, j^2 = b,
//! j i j^{-1} = i + 1. Elements are coordinate 4-tuples w + xi + yj + zk
//! with k = ij.
//!
//! The corestriction of a K-algebra along a separable quadratic K/F is
//! handled at the level of its Brauer class: once a presentation with first
//! slot in F is found (directly or by slot reduction), the class of the
//! corestriction is that of the F-quaternion built from the slot and the
//! norm of the other slot, and splitness of that F-algebra is decided
//! exactly over the rationals and finite fields.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Decision, Error, Result};
use crate::fields::{Elem, Field};
use crate::linalg;
use crate::quadforms::{witt, QuadraticForm};
use crate::search;

pub type QuatElem = [Elem; 4];

#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionAlgebra {
    center: Field,
    a: Elem,
    b: Elem,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InvolutionKind {
    /// The canonical (conjugation) involution; the unique symplectic one.
    Canonical,
    /// Int(u) composed with the canonical involution; orthogonal.
    IntU(QuatElem),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraWithInvolution {
    pub alg: QuaternionAlgebra,
    pub involution: InvolutionKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InvolutionClass {
    Symplectic,
    Orthogonal,
}

impl InvolutionClass {
    /// Type epsilon: -1 for symplectic, +1 for orthogonal, so that the
    /// associated quadratic form of an even lambda-hermitian space with
    /// lambda = -epsilon is a single form.
    pub fn epsilon(self) -> i8 {
        match self {
            InvolutionClass::Symplectic => -1,
            InvolutionClass::Orthogonal => 1,
        }
    }
}

impl QuaternionAlgebra {
    pub fn new(center: Field, a: Elem, b: Elem) -> Result<Self> {
        if !center.contains(&a) || !center.contains(&b) {
            return Err(Error::NotInField("quaternion presentation slot".into()));
        }
        if b.is_zero() || (!center.char2() && a.is_zero()) {
            return Err(Error::InvalidInput(
                "quaternion presentation slots must be nonzero".into(),
            ));
        }
        Ok(QuaternionAlgebra { center, a, b })
    }

    pub fn center(&self) -> &Field {
        &self.center
    }

    pub fn slots(&self) -> (&Elem, &Elem) {
        (&self.a, &self.b)
    }

    pub fn char2(&self) -> bool {
        self.center.char2()
    }

    pub fn zero(&self) -> QuatElem {
        std::array::from_fn(|_| self.center.zero())
    }

    pub fn one(&self) -> QuatElem {
        let mut e = self.zero();
        e[0] = self.center.one();
        e
    }

    pub fn basis_elem(&self, idx: usize) -> QuatElem {
        let mut e = self.zero();
        e[idx] = self.center.one();
        e
    }

    pub fn scalar(&self, c: &Elem) -> QuatElem {
        let mut e = self.zero();
        e[0] = c.clone();
        e
    }

    pub fn as_scalar(&self, u: &QuatElem) -> Option<Elem> {
        if u[1].is_zero() && u[2].is_zero() && u[3].is_zero() {
            Some(u[0].clone())
        } else {
            None
        }
    }

    pub fn is_zero(&self, u: &QuatElem) -> bool {
        u.iter().all(Elem::is_zero)
    }

    pub fn add(&self, u: &QuatElem, v: &QuatElem) -> QuatElem {
        std::array::from_fn(|i| self.center.add(&u[i], &v[i]))
    }

    pub fn sub(&self, u: &QuatElem, v: &QuatElem) -> QuatElem {
        std::array::from_fn(|i| self.center.sub(&u[i], &v[i]))
    }

    pub fn neg(&self, u: &QuatElem) -> QuatElem {
        std::array::from_fn(|i| self.center.neg(&u[i]))
    }

    pub fn scale(&self, c: &Elem, u: &QuatElem) -> QuatElem {
        std::array::from_fn(|i| self.center.mul(c, &u[i]))
    }

    /// Product of two basis elements as a coordinate vector.
    fn basis_product(&self, alpha: usize, beta: usize) -> QuatElem {
        let f = &self.center;
        let a = &self.a;
        let b = &self.b;
        let mut out = self.zero();
        let put = |out: &mut QuatElem, idx: usize, v: Elem| {
            out[idx] = f.add(&out[idx], &v);
        };
        if alpha == 0 {
            put(&mut out, beta, f.one());
            return out;
        }
        if beta == 0 {
            put(&mut out, alpha, f.one());
            return out;
        }
        if !self.char2() {
            match (alpha, beta) {
                (1, 1) => put(&mut out, 0, a.clone()),
                (1, 2) => put(&mut out, 3, f.one()),
                (1, 3) => put(&mut out, 2, a.clone()),
                (2, 1) => put(&mut out, 3, f.from_i64(-1)),
                (2, 2) => put(&mut out, 0, b.clone()),
                (2, 3) => put(&mut out, 1, f.neg(b)),
                (3, 1) => put(&mut out, 2, f.neg(a)),
                (3, 2) => put(&mut out, 1, b.clone()),
                (3, 3) => put(&mut out, 0, f.neg(&f.mul(a, b))),
                _ => unreachable!(),
            }
        } else {
            match (alpha, beta) {
                (1, 1) => {
                    put(&mut out, 0, a.clone());
                    put(&mut out, 1, f.one());
                }
                (1, 2) => put(&mut out, 3, f.one()),
                (1, 3) => {
                    put(&mut out, 2, a.clone());
                    put(&mut out, 3, f.one());
                }
                (2, 1) => {
                    put(&mut out, 2, f.one());
                    put(&mut out, 3, f.one());
                }
                (2, 2) => put(&mut out, 0, b.clone()),
                (2, 3) => {
                    put(&mut out, 0, b.clone());
                    put(&mut out, 1, b.clone());
                }
                (3, 1) => put(&mut out, 2, a.clone()),
                (3, 2) => put(&mut out, 1, b.clone()),
                (3, 3) => put(&mut out, 0, f.mul(a, b)),
                _ => unreachable!(),
            }
        }
        out
    }

    pub fn mul(&self, u: &QuatElem, v: &QuatElem) -> QuatElem {
        let f = &self.center;
        let mut out = self.zero();
        for alpha in 0..4 {
            if u[alpha].is_zero() {
                continue;
            }
            for beta in 0..4 {
                if v[beta].is_zero() {
                    continue;
                }
                let coeff = f.mul(&u[alpha], &v[beta]);
                let prod = self.basis_product(alpha, beta);
                for idx in 0..4 {
                    if prod[idx].is_zero() {
                        continue;
                    }
                    let t = f.mul(&coeff, &prod[idx]);
                    out[idx] = f.add(&out[idx], &t);
                }
            }
        }
        out
    }

    /// Reduced trace.
    pub fn trd(&self, u: &QuatElem) -> Elem {
        let f = &self.center;
        if self.char2() {
            u[1].clone()
        } else {
            f.add(&u[0], &u[0])
        }
    }

    /// The canonical involution gamma(u) = trd(u) - u.
    pub fn conj_gamma(&self, u: &QuatElem) -> QuatElem {
        let t = self.scalar(&self.trd(u));
        self.sub(&t, u)
    }

    /// Reduced norm nrd(u) = u * gamma(u), a central scalar.
    pub fn nrd(&self, u: &QuatElem) -> Elem {
        let f = &self.center;
        let [w, x, y, z] = u;
        let a = &self.a;
        let b = &self.b;
        if self.char2() {
            // w^2 + wx + a x^2 + b (y^2 + yz + a z^2)
            let mut acc = f.mul(w, w);
            acc = f.add(&acc, &f.mul(w, x));
            acc = f.add(&acc, &f.mul(a, &f.mul(x, x)));
            let mut inner = f.mul(y, y);
            inner = f.add(&inner, &f.mul(y, z));
            inner = f.add(&inner, &f.mul(a, &f.mul(z, z)));
            f.add(&acc, &f.mul(b, &inner))
        } else {
            // w^2 - a x^2 - b y^2 + a b z^2
            let mut acc = f.mul(w, w);
            acc = f.sub(&acc, &f.mul(a, &f.mul(x, x)));
            acc = f.sub(&acc, &f.mul(b, &f.mul(y, y)));
            f.add(&acc, &f.mul(&f.mul(a, b), &f.mul(z, z)))
        }
    }

    pub fn inv(&self, u: &QuatElem) -> Result<QuatElem> {
        let n = self.nrd(u);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n_inv = self.center.inv(&n)?;
        Ok(self.scale(&n_inv, &self.conj_gamma(u)))
    }

    /// The reduced norm as a 4-dimensional quadratic form over the center.
    pub fn norm_form(&self) -> QuadraticForm {
        let f = &self.center;
        let a = &self.a;
        let b = &self.b;
        let ab = f.mul(a, b);
        if self.char2() {
            let mut coeffs = vec![f.zero(); 16];
            coeffs[0] = f.one(); // w^2
            coeffs[1] = f.one(); // wx
            coeffs[5] = a.clone(); // x^2
            coeffs[10] = b.clone(); // y^2
            coeffs[11] = b.clone(); // yz
            coeffs[15] = ab; // z^2
            QuadraticForm::new(f.clone(), 4, coeffs).unwrap()
        } else {
            QuadraticForm::diagonal(f.clone(), &[f.one(), f.neg(a), f.neg(b), ab]).unwrap()
        }
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> QuatElem {
        std::array::from_fn(|_| self.center.random(rng))
    }

    /// Reads the algebra over the quadratic extension K of its center.
    pub fn extend_scalars(&self, k: &Field) -> QuaternionAlgebra {
        assert_eq!(k.base(), Some(&self.center));
        QuaternionAlgebra {
            center: k.clone(),
            a: k.lift(&self.a),
            b: k.lift(&self.b),
        }
    }

    /// When both slots are F-rational, the same presentation over F.
    pub fn restrict_to_base(&self) -> Option<QuaternionAlgebra> {
        let k = &self.center;
        let f = k.base()?;
        let a = k.in_base(&self.a)?;
        let b = k.in_base(&self.b)?;
        Some(QuaternionAlgebra { center: f.clone(), a, b })
    }

    pub fn fmt_elem(&self, u: &QuatElem) -> String {
        let f = &self.center;
        format!(
            "({},{},{},{})",
            f.fmt_elem(&u[0]),
            f.fmt_elem(&u[1]),
            f.fmt_elem(&u[2]),
            f.fmt_elem(&u[3])
        )
    }

    pub fn fmt_presentation(&self) -> String {
        let f = &self.center;
        if self.char2() {
            format!("[{},{})", f.fmt_elem(&self.a), f.fmt_elem(&self.b))
        } else {
            format!("({},{})", f.fmt_elem(&self.a), f.fmt_elem(&self.b))
        }
    }
}

impl AlgebraWithInvolution {
    pub fn new(alg: QuaternionAlgebra, involution: InvolutionKind) -> Result<Self> {
        if let InvolutionKind::IntU(u) = &involution {
            for c in u.iter() {
                if !alg.center().contains(c) {
                    return Err(Error::NotInField("involution unit coordinate".into()));
                }
            }
            if alg.nrd(u).is_zero() {
                return Err(Error::InvalidInput("involution unit must be invertible".into()));
            }
            if alg.char2() {
                // gamma(u) = u and u not central
                if !alg.trd(u).is_zero() || alg.as_scalar(u).is_some() {
                    return Err(Error::InvalidInput(
                        "characteristic 2: the unit must have reduced trace 0 and not be central"
                            .into(),
                    ));
                }
            } else {
                // gamma(u) = -u: u is a nonzero pure quaternion
                if !u[0].is_zero() || alg.as_scalar(u).is_some() {
                    return Err(Error::InvalidInput(
                        "the unit must be a nonzero pure quaternion".into(),
                    ));
                }
            }
        }
        Ok(AlgebraWithInvolution { alg, involution })
    }

    pub fn canonical(alg: QuaternionAlgebra) -> Self {
        AlgebraWithInvolution { alg, involution: InvolutionKind::Canonical }
    }

    /// Applies the involution.
    pub fn theta(&self, x: &QuatElem) -> QuatElem {
        match &self.involution {
            InvolutionKind::Canonical => self.alg.conj_gamma(x),
            InvolutionKind::IntU(u) => {
                let g = self.alg.conj_gamma(x);
                let u_inv = self.alg.inv(u).expect("unit is invertible");
                self.alg.mul(&self.alg.mul(u, &g), &u_inv)
            }
        }
    }

    /// Symplectic iff the involution acts as the canonical one.
    pub fn involution_class(&self) -> InvolutionClass {
        for idx in 0..4 {
            let e = self.alg.basis_elem(idx);
            if self.theta(&e) != self.alg.conj_gamma(&e) {
                return InvolutionClass::Orthogonal;
            }
        }
        InvolutionClass::Symplectic
    }

    /// Basis of Symd_lambda = {x + lambda * theta(x)} as a space over the
    /// center, found by row-reducing the images of the algebra basis.
    pub fn symd_basis(&self, lambda: i8) -> Vec<QuatElem> {
        let f = self.alg.center().clone();
        let mut rows: linalg::Matrix = Vec::with_capacity(4);
        for idx in 0..4 {
            let e = self.alg.basis_elem(idx);
            let te = self.theta(&e);
            let te = if lambda == -1 { self.alg.neg(&te) } else { te };
            let img = self.alg.add(&e, &te);
            rows.push(img.to_vec());
        }
        let pivots = linalg::row_reduce(&f, &mut rows);
        pivots
            .iter()
            .enumerate()
            .map(|(r, _)| {
                let row = &rows[r];
                [row[0].clone(), row[1].clone(), row[2].clone(), row[3].clone()]
            })
            .collect()
    }

    pub fn extend_scalars(&self, k: &Field) -> AlgebraWithInvolution {
        let alg = self.alg.extend_scalars(k);
        let involution = match &self.involution {
            InvolutionKind::Canonical => InvolutionKind::Canonical,
            InvolutionKind::IntU(u) => {
                InvolutionKind::IntU(std::array::from_fn(|i| k.lift(&u[i])))
            }
        };
        AlgebraWithInvolution { alg, involution }
    }

    pub fn restrict_to_base(&self) -> Option<AlgebraWithInvolution> {
        let alg = self.alg.restrict_to_base()?;
        let k = self.alg.center();
        let involution = match &self.involution {
            InvolutionKind::Canonical => InvolutionKind::Canonical,
            InvolutionKind::IntU(u) => {
                let mut down = Vec::with_capacity(4);
                for c in u.iter() {
                    down.push(k.in_base(c)?);
                }
                InvolutionKind::IntU([
                    down[0].clone(),
                    down[1].clone(),
                    down[2].clone(),
                    down[3].clone(),
                ])
            }
        };
        Some(AlgebraWithInvolution { alg, involution })
    }
}

// ---------------------------------------------------------------------------
// split test
// ---------------------------------------------------------------------------

const SPLIT_SEARCH_BUDGET: u64 = 60_000;

/// Decides whether the algebra splits: the reduced norm form is isotropic
/// iff it does. Finite centers always split; the rationals are exact via the
/// Witt machinery; quadratic extensions of the rationals run exact screens
/// (rational presentation, real-embedding definiteness, transfer) around a
/// bounded isotropy search; function fields are search-only.
pub fn is_split(q: &QuaternionAlgebra) -> Result<Decision> {
    let center = q.center();
    if center.is_finite() {
        return Ok(Decision::Yes);
    }
    if center.is_rationals() {
        let report = witt::witt_decompose(&q.norm_form())?;
        return Ok(if report.witt_index >= 1 { Decision::Yes } else { Decision::No });
    }
    if center.is_quad_ext() && center.base().unwrap().is_rationals() {
        // exact route when both slots are rational
        if let Some(q0) = q.restrict_to_base() {
            return split_after_quadratic_extension(&q0, center);
        }
        if norm_form_definite(q) {
            return Ok(Decision::No);
        }
        if isotropy_search(&q.norm_form(), SPLIT_SEARCH_BUDGET) {
            return Ok(Decision::Yes);
        }
        // transfer screen: a split algebra has hyperbolic norm form, so a
        // non-hyperbolic transfer rules splitness out
        let transfer = crate::quadforms::transfer_form(&q.norm_form());
        match witt::witt_decompose(&transfer) {
            Ok(r) if !r.hyperbolic => return Ok(Decision::No),
            _ => {}
        }
        return Ok(Decision::Undecided);
    }
    // function fields: bounded search only
    if isotropy_search(&q.norm_form(), SPLIT_SEARCH_BUDGET) {
        return Ok(Decision::Yes);
    }
    Ok(Decision::Undecided)
}

/// Splitness of an F-algebra after extending to K = F(eta): it splits over K
/// iff it splits over F or K embeds into it, i.e. the pure-part square form
/// represents the extension constant.
fn split_after_quadratic_extension(q0: &QuaternionAlgebra, k: &Field) -> Result<Decision> {
    let f = q0.center().clone();
    let base_split = is_split(q0)?;
    if base_split == Decision::Yes {
        return Ok(Decision::Yes);
    }
    if base_split == Decision::Undecided {
        return Ok(Decision::Undecided);
    }
    let (a, b) = q0.slots();
    // pure quaternions square to the values of <a, b, -ab> (char != 2);
    // K = F(eta) embeds iff that form represents the square of eta
    let target = match k.ext_kind().unwrap() {
        crate::fields::ExtKind::Radical { d } => d.clone(),
        crate::fields::ExtKind::ArtinSchreier { .. } => {
            return Ok(Decision::Undecided);
        }
    };
    let ab = f.mul(a, b);
    let rep = QuadraticForm::diagonal(
        f.clone(),
        &[a.clone(), b.clone(), f.neg(&ab), f.neg(&target)],
    )?;
    let report = witt::witt_decompose(&rep)?;
    Ok(if report.witt_index >= 1 { Decision::Yes } else { Decision::No })
}

/// Definiteness of the norm form under a real embedding of Q(sqrt d), d > 0.
fn norm_form_definite(q: &QuaternionAlgebra) -> bool {
    let k = q.center();
    let Some(crate::fields::ExtKind::Radical { d }) = k.ext_kind() else {
        return false;
    };
    let base = k.base().unwrap();
    let Elem::Rat(dr) = d else { return false };
    if !num_traits::Signed::is_positive(dr) {
        return false;
    }
    let _ = base;
    let (a, b) = q.slots();
    let ab = k.mul(a, b);
    for branch in [true, false] {
        let signs = [
            1i8,
            -witt::sign_under_embedding(k, a, branch),
            -witt::sign_under_embedding(k, b, branch),
            witt::sign_under_embedding(k, &ab, branch),
        ];
        if signs.iter().all(|&s| s > 0) {
            return true;
        }
    }
    false
}

fn isotropy_search(form: &QuadraticForm, budget: u64) -> bool {
    let mut tried = 0u64;
    for v in search::vector_sweep(form.field(), form.dim()) {
        if tried >= budget {
            return false;
        }
        tried += 1;
        if v.iter().all(Elem::is_zero) {
            continue;
        }
        if form.evaluate(&v).is_zero() {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// corestriction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, serde::Serialize)]
pub struct CorSplitReport {
    pub verdict: Decision,
    pub method: String,
    /// Slots of the F-quaternion representing the corestriction class.
    pub witness_class: Option<(String, String)>,
    /// A place with Hilbert symbol -1 when the class is nonsplit over Q.
    pub obstruction_place: Option<String>,
}

/// Split test for the corestriction of a quaternion K-algebra along K/F,
/// through the projection formula once a presentation with first slot in F
/// is available.
pub fn cor_split_test(q: &QuaternionAlgebra, budget: u64, seed: u64) -> Result<CorSplitReport> {
    let k = q.center().clone();
    if !k.is_quad_ext() {
        return Err(Error::NoExtension);
    }
    let f = k.base().unwrap().clone();
    if !(f.is_rationals() || f.is_finite()) {
        return Err(Error::Unsupported(
            "corestriction split test requires a rational or finite base field".into(),
        ));
    }
    if f.is_finite() {
        return Ok(CorSplitReport {
            verdict: Decision::Yes,
            method: "finite-base".into(),
            witness_class: None,
            obstruction_place: None,
        });
    }
    let (slot, other, method) = match rational_first_slot(q, budget, seed)? {
        Some(t) => t,
        None => {
            return Ok(CorSplitReport {
                verdict: Decision::Undecided,
                method: "search-exhausted".into(),
                witness_class: None,
                obstruction_place: None,
            });
        }
    };
    let norm_other = k.norm_to_base(&other);
    let witness = QuaternionAlgebra::new(f.clone(), slot.clone(), norm_other.clone())?;
    let verdict = is_split(&witness)?;
    let obstruction_place = if verdict == Decision::No {
        nonsplit_place(&witness)?
    } else {
        None
    };
    Ok(CorSplitReport {
        verdict,
        method,
        witness_class: Some((f.fmt_elem(&slot), f.fmt_elem(&norm_other))),
        obstruction_place,
    })
}

/// Finds a presentation of Q with the first slot in F. Returns
/// (first slot in F, second slot in K, method).
fn rational_first_slot(
    q: &QuaternionAlgebra,
    budget: u64,
    seed: u64,
) -> Result<Option<(Elem, Elem, String)>> {
    let k = q.center().clone();
    let (a, b) = q.slots();
    if !q.char2() {
        if let Some(a0) = k.in_base(a) {
            return Ok(Some((a0, b.clone(), "direct".into())));
        }
        if let Some(b0) = k.in_base(b) {
            // (a, b) and (b, a) present the same algebra
            return Ok(Some((b0, a.clone(), "slot-swap".into())));
        }
        // slot reduction: pure x with x^2 in F, then an anticommuting partner
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some((x, y)) = two_slot_candidates(q, budget, &mut rng, |alg, x| {
            let sq = alg.mul(x, x);
            let s = alg.as_scalar(&sq).expect("pure squares are central");
            k.in_base(&s).is_some() && !s.is_zero()
        }) {
            let a0 = k
                .in_base(&q.as_scalar(&q.mul(&x, &x)).unwrap())
                .expect("selected to be rational");
            let b_new = q.as_scalar(&q.mul(&y, &y)).expect("pure squares are central");
            return Ok(Some((a0, b_new, "slot-reduction".into())));
        }
        return Ok(None);
    }
    // characteristic 2: the Artin-Schreier slot restricts along K/F
    if let Some(a0) = k.in_base(a) {
        return Ok(Some((a0, b.clone(), "direct".into())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Some((x, y)) = char2_presentation_search(q, budget, &mut rng, |alg, x| {
        let n = alg.nrd(x);
        k.in_base(&n).is_some()
    }) {
        let a0 = k.in_base(&q.nrd(&x)).expect("selected to be rational");
        let b_new = q.as_scalar(&q.mul(&y, &y)).expect("twisted partner squares centrally");
        return Ok(Some((a0, b_new, "slot-reduction".into())));
    }
    Ok(None)
}

/// Sweeps pure quaternions x subject to `accept`, then completes x to a
/// presentation pair (x, y) with xy = -yx; characteristic != 2.
fn two_slot_candidates<R: Rng>(
    q: &QuaternionAlgebra,
    budget: u64,
    rng: &mut R,
    accept: impl Fn(&QuaternionAlgebra, &QuatElem) -> bool,
) -> Option<(QuatElem, QuatElem)> {
    let k = q.center().clone();
    let mut tried = 0u64;
    let consider = |x: QuatElem| -> Option<(QuatElem, QuatElem)> {
        if q.is_zero(&x) || !accept(q, &x) || q.nrd(&x).is_zero() {
            return None;
        }
        let y = anticommutant_partner(q, &x)?;
        Some((x, y))
    };
    for coords in search::vector_sweep_structured(&k, 3) {
        if tried >= budget / 2 {
            break;
        }
        tried += 1;
        let x: QuatElem = [k.zero(), coords[0].clone(), coords[1].clone(), coords[2].clone()];
        if let Some(pair) = consider(x) {
            return Some(pair);
        }
    }
    while tried < budget {
        tried += 1;
        let x: QuatElem = [k.zero(), k.random(rng), k.random(rng), k.random(rng)];
        if let Some(pair) = consider(x) {
            return Some(pair);
        }
    }
    None
}

/// A pure y with xy + yx = 0 and y^2 != 0, for pure invertible x.
fn anticommutant_partner(q: &QuaternionAlgebra, x: &QuatElem) -> Option<QuatElem> {
    let k = q.center().clone();
    // one linear condition on the three pure coordinates of y
    let mut row = Vec::with_capacity(3);
    for idx in 1..4 {
        let e = q.basis_elem(idx);
        let anti = q.add(&q.mul(x, &e), &q.mul(&e, x));
        let s = q.as_scalar(&anti).expect("anticommutator of pures is central");
        row.push(s);
    }
    let kernel = linalg::kernel(&k, &vec![row]);
    for v in &kernel {
        let y: QuatElem = [k.zero(), v[0].clone(), v[1].clone(), v[2].clone()];
        if !q.nrd(&y).is_zero() {
            return Some(y);
        }
    }
    // combinations of the kernel basis
    if kernel.len() == 2 {
        let y: QuatElem = [
            k.zero(),
            k.add(&kernel[0][0], &kernel[1][0]),
            k.add(&kernel[0][1], &kernel[1][1]),
            k.add(&kernel[0][2], &kernel[1][2]),
        ];
        if !q.nrd(&y).is_zero() {
            return Some(y);
        }
    }
    None
}

/// Characteristic 2: sweeps elements x with trd(x) = 1 subject to `accept`
/// (so x^2 + x = nrd(x)), then finds y with yx = (x+1)y and y^2 central.
fn char2_presentation_search<R: Rng>(
    q: &QuaternionAlgebra,
    budget: u64,
    rng: &mut R,
    accept: impl Fn(&QuaternionAlgebra, &QuatElem) -> bool,
) -> Option<(QuatElem, QuatElem)> {
    let k = q.center().clone();
    let mut tried = 0u64;
    let consider = |x: QuatElem| -> Option<(QuatElem, QuatElem)> {
        if !accept(q, &x) {
            return None;
        }
        let y = twisted_partner(q, &x)?;
        Some((x, y))
    };
    for coords in search::vector_sweep_structured(&k, 3) {
        if tried >= budget / 2 {
            break;
        }
        tried += 1;
        let x: QuatElem = [coords[0].clone(), k.one(), coords[1].clone(), coords[2].clone()];
        if let Some(pair) = consider(x) {
            return Some(pair);
        }
    }
    while tried < budget {
        tried += 1;
        let x: QuatElem = [k.random(rng), k.one(), k.random(rng), k.random(rng)];
        if let Some(pair) = consider(x) {
            return Some(pair);
        }
    }
    None
}

/// y with y x = (x + 1) y and y invertible; its square is central.
fn twisted_partner(q: &QuaternionAlgebra, x: &QuatElem) -> Option<QuatElem> {
    let k = q.center().clone();
    // linear condition: y x + x y + y = 0
    let mut rows: linalg::Matrix = vec![Vec::new(); 4];
    for idx in 0..4 {
        let e = q.basis_elem(idx);
        let img = q.add(&q.add(&q.mul(&e, x), &q.mul(x, &e)), &e);
        for (r, row) in rows.iter_mut().enumerate() {
            row.push(img[r].clone());
        }
    }
    let kernel = linalg::kernel(&k, &rows);
    let mut candidates: Vec<QuatElem> = kernel
        .iter()
        .map(|v| [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
        .collect();
    if candidates.len() >= 2 {
        let sum = q.add(&candidates[0].clone(), &candidates[1].clone());
        candidates.push(sum);
    }
    candidates.into_iter().find(|y| {
        !q.nrd(y).is_zero() && q.as_scalar(&q.mul(y, y)).is_some()
    })
}

/// A place of Q where the algebra's class is nonsplit, for obstruction
/// reports.
fn nonsplit_place(q0: &QuaternionAlgebra) -> Result<Option<String>> {
    use crate::quadforms::hilbert;
    let f = q0.center();
    let (a, b) = q0.slots();
    let (Elem::Rat(ar), Elem::Rat(br)) = (a, b) else {
        return Ok(None);
    };
    let budget = witt::DEFAULT_FACTOR_BUDGET;
    if hilbert::hilbert_symbol(ar, br, &hilbert::Place::Infinity, budget)? == -1 {
        return Ok(Some("infinity".into()));
    }
    let sa = hilbert::squarefree_part(ar, budget)?;
    let sb = hilbert::squarefree_part(br, budget)?;
    for place in hilbert::candidate_places(&sa, &sb, budget)? {
        if hilbert::hilbert_symbol_squarefree(&sa, &sb, &place) == -1 {
            return Ok(Some(place.to_string()));
        }
    }
    let _ = f;
    Ok(None)
}

// ---------------------------------------------------------------------------
// descent of the algebra with involution
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct AlgDescentOutcome {
    pub decision: Decision,
    pub cor: CorSplitReport,
    /// Present for orthogonal involutions: whether the skew line contains an
    /// element squaring into F.
    pub skew_line_rational: Option<Decision>,
    pub descended: Option<AlgebraWithInvolution>,
    /// Presentation basis (1, X, Y, XY) inside the input algebra realizing
    /// the descended presentation.
    pub presentation: Option<Vec<QuatElem>>,
}

/// Descent of (Q, sigma) along K/F: symplectic involutions descend iff the
/// corestriction splits; orthogonal ones additionally need an element of
/// the one-dimensional skew line squaring into F, which is decided exactly
/// through a norm-one square test with an explicit witness.
pub fn alg_descent(
    qi: &AlgebraWithInvolution,
    budget: u64,
    seed: u64,
) -> Result<AlgDescentOutcome> {
    let q = &qi.alg;
    let k = q.center().clone();
    if !k.is_quad_ext() {
        return Err(Error::NoExtension);
    }
    let cor = cor_split_test(q, budget, seed)?;
    let class = qi.involution_class();
    match class {
        InvolutionClass::Symplectic => {
            if cor.verdict != Decision::Yes {
                return Ok(AlgDescentOutcome {
                    decision: cor.verdict,
                    cor,
                    skew_line_rational: None,
                    descended: None,
                    presentation: None,
                });
            }
            let constructed = construct_rational_presentation(q, None, budget, seed)?;
            let (descended, presentation) = match constructed {
                Some((alg0, basis)) => (
                    Some(AlgebraWithInvolution::canonical(alg0)),
                    Some(basis),
                ),
                None => (None, None),
            };
            Ok(AlgDescentOutcome {
                decision: Decision::Yes,
                cor,
                skew_line_rational: None,
                descended,
                presentation,
            })
        }
        InvolutionClass::Orthogonal => {
            let skew = skew_line_rational_element(qi)?;
            let skew_decision = match &skew {
                Some(_) => Decision::Yes,
                None => Decision::No,
            };
            let decision = cor.verdict.and(skew_decision);
            if decision != Decision::Yes {
                return Ok(AlgDescentOutcome {
                    decision,
                    cor,
                    skew_line_rational: Some(skew_decision),
                    descended: None,
                    presentation: None,
                });
            }
            let u = skew.unwrap();
            let constructed = construct_rational_presentation(q, Some(&u), budget, seed)?;
            let (descended, presentation) = match constructed {
                Some((alg0, basis)) => {
                    // the involution descends with u landing on a pure slot
                    let f = alg0.center().clone();
                    let inv0 = if alg0.char2() {
                        // u maps to the j-slot
                        InvolutionKind::IntU([f.zero(), f.zero(), f.one(), f.zero()])
                    } else {
                        // u maps to the i-slot
                        InvolutionKind::IntU([f.zero(), f.one(), f.zero(), f.zero()])
                    };
                    (
                        Some(AlgebraWithInvolution::new(alg0, inv0)?),
                        Some(basis),
                    )
                }
                None => (None, None),
            };
            Ok(AlgDescentOutcome {
                decision: Decision::Yes,
                cor,
                skew_line_rational: Some(skew_decision),
                descended,
                presentation,
            })
        }
    }
}

/// Whether the one-dimensional line Symd_{-1}(Q, sigma) contains u with
/// u^2 in F; exact via a square-and-norm test plus an explicit norm-one
/// witness. Returns the element when it exists.
pub fn skew_line_rational_element(qi: &AlgebraWithInvolution) -> Result<Option<QuatElem>> {
    let q = &qi.alg;
    let k = q.center().clone();
    let basis = qi.symd_basis(-1);
    if basis.len() != 1 {
        return Err(Error::InvalidInput(format!(
            "expected a one-dimensional skew line, found dimension {}",
            basis.len()
        )));
    }
    let u0 = basis[0].clone();
    debug_assert!(q.trd(&u0).is_zero());
    let mu = q
        .as_scalar(&q.mul(&u0, &u0))
        .expect("trace-zero elements square centrally");
    if mu.is_zero() {
        return Err(Error::InvalidInput("skew line element is not invertible".into()));
    }
    // (c u0)^2 = c^2 mu lies in F for some c iff mu / iota(mu) is the square
    // of a norm-one element w, in which case Hilbert 90 gives c with
    // iota(c)/c = w.
    let ratio = k.div(&mu, &k.conj(&mu))?;
    let Some(w) = k.is_square(&ratio) else {
        return Ok(None);
    };
    let nw = k.norm_to_base(&w);
    let f = k.base().unwrap();
    let c = if nw == f.one() {
        if k.add(&w, &k.one()).is_zero() {
            // w = -1: any c with iota(c) = -c works; eta does
            k.eta()?
        } else {
            // iota(c) = w c for c = 1 + iota(w)
            let c = k.add(&k.one(), &k.conj(&w));
            if c.is_zero() {
                return Ok(None);
            }
            c
        }
    } else {
        // both square roots have norm -1: no norm-one root exists
        let minus_w = k.neg(&w);
        debug_assert_ne!(k.norm_to_base(&minus_w), f.one());
        return Ok(None);
    };
    let u = q.scale(&c, &u0);
    let usq = q.as_scalar(&q.mul(&u, &u)).expect("still central");
    debug_assert!(k.in_base(&usq).is_some());
    if k.in_base(&usq).is_none() {
        return Ok(None);
    }
    Ok(Some(u))
}

/// Finds a presentation of Q with both slots in F, optionally forcing a
/// given trace-zero element onto a pure slot, and returns the descended
/// algebra together with the presentation basis (1, X, Y, XY).
fn construct_rational_presentation(
    q: &QuaternionAlgebra,
    forced: Option<&QuatElem>,
    budget: u64,
    seed: u64,
) -> Result<Option<(QuaternionAlgebra, Vec<QuatElem>)>> {
    let k = q.center().clone();
    let f = k.base().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    if !q.char2() {
        // X pure with X^2 in F, Y anticommuting with Y^2 in F
        let found = match forced {
            Some(u) => anticommutant_rational(q, u, budget.min(20_000), &mut rng)
                .map(|y| (u.clone(), y)),
            None => {
                let mut result = None;
                let mut tried = 0u64;
                'outer: for coords in search::vector_sweep_structured(&k, 3) {
                    if tried >= budget {
                        break 'outer;
                    }
                    tried += 1;
                    let x: QuatElem =
                        [k.zero(), coords[0].clone(), coords[1].clone(), coords[2].clone()];
                    if q.is_zero(&x) || q.nrd(&x).is_zero() {
                        continue;
                    }
                    let sq = q.as_scalar(&q.mul(&x, &x)).unwrap();
                    if k.in_base(&sq).is_none() {
                        continue;
                    }
                    if let Some(y) = anticommutant_rational(q, &x, 2_000, &mut rng) {
                        result = Some((x, y));
                        break 'outer;
                    }
                }
                result
            }
        };
        let Some((x, y)) = found else { return Ok(None) };
        let a0 = k.in_base(&q.as_scalar(&q.mul(&x, &x)).unwrap()).unwrap();
        let b0 = k.in_base(&q.as_scalar(&q.mul(&y, &y)).unwrap()).unwrap();
        let alg0 = QuaternionAlgebra::new(f.clone(), a0, b0)?;
        let xy = q.mul(&x, &y);
        let basis = vec![q.one(), x, y, xy];
        if !presentation_is_faithful(q, &basis) {
            return Ok(None);
        }
        return Ok(Some((alg0, basis)));
    }
    // characteristic 2: X with trd = 1 and nrd in F; Y twisted partner with
    // Y^2 in F; an optionally forced element lands on the Y slot.
    let mut tried = 0u64;
    for coords in search::vector_sweep_structured(&k, 3) {
        if tried >= budget {
            break;
        }
        tried += 1;
        let x: QuatElem = [coords[0].clone(), k.one(), coords[1].clone(), coords[2].clone()];
        let n = q.nrd(&x);
        if k.in_base(&n).is_none() {
            continue;
        }
        let y = match forced {
            Some(u) => {
                // u must satisfy the twisted relation with this x
                let lhs = q.mul(u, &x);
                let rhs = q.add(&q.mul(&x, u), u);
                if lhs != rhs {
                    continue;
                }
                u.clone()
            }
            None => match twisted_partner(q, &x) {
                Some(y) => y,
                None => continue,
            },
        };
        let Some(b_sc) = q.as_scalar(&q.mul(&y, &y)) else { continue };
        let Some(b0) = k.in_base(&b_sc) else { continue };
        if b0.is_zero() {
            continue;
        }
        let a0 = k.in_base(&n).unwrap();
        let alg0 = QuaternionAlgebra::new(f.clone(), a0, b0)?;
        let xy = q.mul(&x, &y);
        let basis = vec![q.one(), x, y, xy];
        if !presentation_is_faithful(q, &basis) {
            continue;
        }
        return Ok(Some((alg0, basis)));
    }
    Ok(None)
}

/// Anticommuting partner of x whose square is F-rational (char != 2):
/// sweeps the two-dimensional anticommutant.
fn anticommutant_rational<R: Rng>(
    q: &QuaternionAlgebra,
    x: &QuatElem,
    budget: u64,
    rng: &mut R,
) -> Option<QuatElem> {
    let k = q.center().clone();
    let mut row = Vec::with_capacity(3);
    for idx in 1..4 {
        let e = q.basis_elem(idx);
        let anti = q.add(&q.mul(x, &e), &q.mul(&e, x));
        row.push(q.as_scalar(&anti).expect("anticommutator of pures is central"));
    }
    let kernel = linalg::kernel(&k, &vec![row]);
    if kernel.is_empty() {
        return None;
    }
    let to_elem = |coords: &[Elem]| -> QuatElem {
        [k.zero(), coords[0].clone(), coords[1].clone(), coords[2].clone()]
    };
    let accept = |y: &QuatElem| -> bool {
        if q.nrd(y).is_zero() {
            return false;
        }
        let sq = q.as_scalar(&q.mul(y, y)).unwrap();
        !sq.is_zero() && k.in_base(&sq).is_some()
    };
    let mut tried = 0u64;
    for c in search::vector_sweep_structured(&k, kernel.len()) {
        if tried >= budget {
            break;
        }
        tried += 1;
        let mut coords = vec![k.zero(); 3];
        for (ci, kv) in c.iter().zip(kernel.iter()) {
            for (pos, val) in kv.iter().enumerate() {
                coords[pos] = k.add(&coords[pos], &k.mul(ci, val));
            }
        }
        let y = to_elem(&coords);
        if !q.is_zero(&y) && accept(&y) {
            return Some(y);
        }
    }
    for _ in 0..budget.min(2_000) {
        let c: Vec<Elem> = (0..kernel.len()).map(|_| k.random(rng)).collect();
        let mut coords = vec![k.zero(); 3];
        for (ci, kv) in c.iter().zip(kernel.iter()) {
            for (pos, val) in kv.iter().enumerate() {
                coords[pos] = k.add(&coords[pos], &k.mul(ci, val));
            }
        }
        let y = to_elem(&coords);
        if !q.is_zero(&y) && accept(&y) {
            return Some(y);
        }
    }
    None
}

/// Verifies that (1, X, Y, XY) is a basis and X, Y satisfy the defining
/// relations of the presentation they produce.
fn presentation_is_faithful(q: &QuaternionAlgebra, basis: &[QuatElem]) -> bool {
    let k = q.center().clone();
    let rows: linalg::Matrix = basis.iter().map(|e| e.to_vec()).collect();
    if linalg::rank(&k, &rows) != 4 {
        return false;
    }
    let x = &basis[1];
    let y = &basis[2];
    if !q.char2() {
        // YX = -XY
        q.mul(y, x) == q.neg(&q.mul(x, y))
    } else {
        // YX = XY + Y
        q.mul(y, x) == q.add(&q.mul(x, y), y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamilton() -> QuaternionAlgebra {
        let f = Field::rationals();
        QuaternionAlgebra::new(f.clone(), f.from_i64(-1), f.from_i64(-1)).unwrap()
    }

    fn q_sqrt2() -> Field {
        let q = Field::rationals();
        q.radical_extension(q.from_i64(2)).unwrap()
    }

    fn char2_quat() -> QuaternionAlgebra {
        // [t, t) over F_2(t)
        let f2 = Field::prime(2).unwrap();
        let f2t = Field::rational_function(&f2).unwrap();
        let t = f2t.var_t().unwrap();
        QuaternionAlgebra::new(f2t, t.clone(), t).unwrap()
    }

    #[test]
    fn hamilton_relations() {
        let q = hamilton();
        let i = q.basis_elem(1);
        let j = q.basis_elem(2);
        let k = q.basis_elem(3);
        assert_eq!(q.mul(&i, &j), k);
        assert_eq!(q.mul(&j, &i), q.neg(&k));
        assert_eq!(q.as_scalar(&q.mul(&i, &i)).unwrap(), Field::rationals().from_i64(-1));
    }

    #[test]
    fn associativity_and_norm_multiplicativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for alg in [hamilton(), char2_quat()] {
            for _ in 0..500 {
                let u = alg.random(&mut rng);
                let v = alg.random(&mut rng);
                let w = alg.random(&mut rng);
                let lhs = alg.mul(&alg.mul(&u, &v), &w);
                let rhs = alg.mul(&u, &alg.mul(&v, &w));
                assert_eq!(lhs, rhs);
                let nn = alg.center().mul(&alg.nrd(&u), &alg.nrd(&v));
                assert_eq!(alg.nrd(&alg.mul(&u, &v)), nn);
                // nrd agrees with u * gamma(u)
                let prod = alg.mul(&u, &alg.conj_gamma(&u));
                assert_eq!(alg.as_scalar(&prod).unwrap(), alg.nrd(&u));
            }
        }
    }

    #[test]
    fn norm_form_matches_nrd() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for alg in [hamilton(), char2_quat()] {
            let nf = alg.norm_form();
            for _ in 0..30 {
                let u = alg.random(&mut rng);
                assert_eq!(nf.evaluate(&u.to_vec()), alg.nrd(&u));
            }
        }
    }

    #[test]
    fn hamilton_is_division_over_q() {
        assert_eq!(is_split(&hamilton()).unwrap(), Decision::No);
    }

    #[test]
    fn unit_slot_always_splits() {
        let f = Field::rationals();
        let q = QuaternionAlgebra::new(f.clone(), f.one(), f.from_i64(-7)).unwrap();
        assert_eq!(is_split(&q).unwrap(), Decision::Yes);
    }

    #[test]
    fn finite_quaternions_split_with_exhaustive_witness() {
        // Wedderburn: no finite division quaternions; verified for small q
        for p in [3u64, 5, 7] {
            let f = Field::prime(p).unwrap();
            let q = QuaternionAlgebra::new(f.clone(), f.from_i64(-1), f.from_i64(-1)).unwrap();
            assert_eq!(is_split(&q).unwrap(), Decision::Yes);
            let nf = q.norm_form();
            let mut found = false;
            'search: for v in search::vector_sweep(&f, 4) {
                if v.iter().all(Elem::is_zero) {
                    continue;
                }
                if nf.evaluate(&v).is_zero() {
                    found = true;
                    break 'search;
                }
            }
            assert!(found, "norm form isotropic over GF({p})");
        }
    }

    #[test]
    fn hamilton_stays_division_over_sqrt2_splits_over_i() {
        let k2 = q_sqrt2();
        let ext = hamilton().extend_scalars(&k2);
        assert_eq!(is_split(&ext).unwrap(), Decision::No);

        let q = Field::rationals();
        let ki = q.radical_extension(q.from_i64(-1)).unwrap();
        let ext = hamilton().extend_scalars(&ki);
        assert_eq!(is_split(&ext).unwrap(), Decision::Yes);
    }

    #[test]
    fn symd_dimensions() {
        let alg = AlgebraWithInvolution::canonical(hamilton());
        let plus = alg.symd_basis(1);
        assert_eq!(plus.len(), 1);
        assert_eq!(plus[0], hamilton().one());
        let minus = alg.symd_basis(-1);
        assert_eq!(minus.len(), 3, "pure quaternions");

        let alg2 = AlgebraWithInvolution::canonical(char2_quat());
        let plus2 = alg2.symd_basis(1);
        assert_eq!(plus2.len(), 1);
        assert_eq!(plus2[0], char2_quat().one());
    }

    #[test]
    fn involution_classification() {
        let h = hamilton();
        let gamma = AlgebraWithInvolution::canonical(h.clone());
        assert_eq!(gamma.involution_class(), InvolutionClass::Symplectic);
        assert_eq!(gamma.involution_class().epsilon(), -1);

        let i_unit = h.basis_elem(1);
        let orth = AlgebraWithInvolution::new(h.clone(), InvolutionKind::IntU(i_unit)).unwrap();
        assert_eq!(orth.involution_class(), InvolutionClass::Orthogonal);
        // theta is an involution: theta(theta(x)) = x
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let x = h.random(&mut rng);
            assert_eq!(orth.theta(&orth.theta(&x)), x);
        }

        let c2 = AlgebraWithInvolution::canonical(char2_quat());
        assert_eq!(c2.involution_class(), InvolutionClass::Symplectic);
    }

    #[test]
    fn cor_examples_over_q_sqrt2() {
        let k = q_sqrt2();
        let qf = Field::rationals();
        // Hamilton extended: class (-1, N(-1)) = (-1, 1), split
        let ext = hamilton().extend_scalars(&k);
        let rep = cor_split_test(&ext, 50_000, 1).unwrap();
        assert_eq!(rep.verdict, Decision::Yes);

        // (-1, sqrt 2): class (-1, -2), nonsplit at infinity
        let q2 = QuaternionAlgebra::new(k.clone(), k.from_i64(-1), k.eta().unwrap()).unwrap();
        let rep = cor_split_test(&q2, 50_000, 1).unwrap();
        assert_eq!(rep.verdict, Decision::No);
        assert_eq!(rep.obstruction_place.as_deref(), Some("infinity"));
        let (ws, wn) = rep.witness_class.unwrap();
        assert_eq!(ws, "-1");
        assert_eq!(wn, "-2");

        // (-1, 3 + 2 sqrt 2): norm 1, split
        let alpha = k.from_coords(qf.from_i64(3), qf.from_i64(2));
        let q3 = QuaternionAlgebra::new(k.clone(), k.from_i64(-1), alpha).unwrap();
        let rep = cor_split_test(&q3, 50_000, 1).unwrap();
        assert_eq!(rep.verdict, Decision::Yes);
    }

    #[test]
    fn alg_descent_roundtrip_symplectic() {
        let k = q_sqrt2();
        let ext = AlgebraWithInvolution::canonical(hamilton().extend_scalars(&k));
        let out = alg_descent(&ext, 50_000, 3).unwrap();
        assert_eq!(out.decision, Decision::Yes);
        let descended = out.descended.unwrap();
        assert_eq!(descended.involution_class(), InvolutionClass::Symplectic);
        // the sparse rational-first sweep recovers the original presentation
        let r1 = witt::witt_decompose(&descended.alg.norm_form()).unwrap();
        let r2 = witt::witt_decompose(&hamilton().norm_form()).unwrap();
        assert!(r1.same_class(&r2));
        assert_eq!(is_split(&descended.alg).unwrap(), Decision::No);
    }

    #[test]
    fn alg_descent_rejects_nonsplit_cor() {
        let k = q_sqrt2();
        let q2 = QuaternionAlgebra::new(k.clone(), k.from_i64(-1), k.eta().unwrap()).unwrap();
        let out = alg_descent(&AlgebraWithInvolution::canonical(q2), 50_000, 3).unwrap();
        assert_eq!(out.decision, Decision::No);
        assert_eq!(out.cor.verdict, Decision::No);
    }

    #[test]
    fn alg_descent_orthogonal_with_skew_line() {
        let k = q_sqrt2();
        let h = hamilton().extend_scalars(&k);
        let i_unit = h.basis_elem(1);
        let qi = AlgebraWithInvolution::new(h, InvolutionKind::IntU(i_unit)).unwrap();
        let u = skew_line_rational_element(&qi).unwrap().unwrap();
        // u^2 must be a rational scalar
        let sq = qi.alg.as_scalar(&qi.alg.mul(&u, &u)).unwrap();
        assert!(k.in_base(&sq).is_some());
        let out = alg_descent(&qi, 50_000, 3).unwrap();
        assert_eq!(out.decision, Decision::Yes);
        let descended = out.descended.unwrap();
        assert_eq!(descended.involution_class(), InvolutionClass::Orthogonal);
    }

    #[test]
    fn char2_finite_tower_descent() {
        // [x, x) over GF(8) extended along an Artin-Schreier extension
        let gf8 = Field::binary(3, 0b1011).unwrap();
        let x = gf8.var_x().unwrap();
        let alg0 = QuaternionAlgebra::new(gf8.clone(), x.clone(), x.clone()).unwrap();
        // delta with absolute trace 1: x has trace... find one by scan
        let delta = (1..8u64)
            .map(Elem::F2k)
            .find(|d| {
                matches!(
                    gf8.wp_membership(d),
                    Ok((Decision::No, _))
                )
            })
            .unwrap();
        let k = gf8.artin_schreier_extension(delta).unwrap();
        let ext = AlgebraWithInvolution::canonical(alg0.extend_scalars(&k));
        let out = alg_descent(&ext, 60_000, 5).unwrap();
        assert_eq!(out.decision, Decision::Yes);
        assert!(out.descended.is_some());
        let basis = out.presentation.unwrap();
        assert!(presentation_is_faithful(&ext.alg, &basis));
    }
}
