//! Systems of quadratic forms: joint regularity, metabolicity, transfer and
//! descent as a single F-structure for the whole system.
//!
//! The componentwise picture is deliberately weaker: every component of a
//! system can descend while the system itself does not, so the descent
//! search here looks for one basis on which all values and all pairings of
//! every component are F-rational. A failed necessary condition (the
//! transferred system not metabolic) is a proof of non-descent.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Decision, Error, Result};
use crate::fields::{Elem, Field};
use crate::linalg;
use crate::search;

use super::{transfer_form_scaled, QuadraticForm};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSystem {
    field: Field,
    dim: usize,
    components: Vec<QuadraticForm>,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SystemRegularity {
    pub regular: bool,
    pub totally_regular: bool,
}

impl QuadraticSystem {
    pub fn new(components: Vec<QuadraticForm>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidInput("a system needs at least one component".into()));
        };
        let field = first.field().clone();
        let dim = first.dim();
        for c in &components {
            if c.field() != &field || c.dim() != dim {
                return Err(Error::MixedOperands);
            }
        }
        Ok(QuadraticSystem { field, dim, components })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[QuadraticForm] {
        &self.components
    }

    pub fn into_components(self) -> Vec<QuadraticForm> {
        self.components
    }

    pub fn evaluate(&self, v: &[Elem]) -> Vec<Elem> {
        self.components.iter().map(|q| q.evaluate(v)).collect()
    }

    pub fn polar_eval(&self, u: &[Elem], v: &[Elem]) -> Vec<Elem> {
        self.components.iter().map(|q| q.polar_eval(u, v)).collect()
    }

    /// Common radical: vectors orthogonal to everything under every polar.
    pub fn radical(&self) -> Vec<Vec<Elem>> {
        if self.dim == 0 {
            return Vec::new();
        }
        let mut stacked: linalg::Matrix = Vec::new();
        for q in &self.components {
            stacked.extend(q.polar().gram_rows());
        }
        linalg::kernel(&self.field, &stacked)
    }

    pub fn regularity(&self) -> SystemRegularity {
        SystemRegularity {
            regular: self.dim == 0 || self.radical().is_empty(),
            totally_regular: self.components.iter().all(QuadraticForm::is_regular),
        }
    }

    pub fn extend_scalars(&self, k: &Field) -> QuadraticSystem {
        QuadraticSystem {
            field: k.clone(),
            dim: self.dim,
            components: self.components.iter().map(|q| q.extend_scalars(k)).collect(),
        }
    }

    pub fn apply_basis(&self, vectors: &[Vec<Elem>]) -> QuadraticSystem {
        QuadraticSystem {
            field: self.field.clone(),
            dim: vectors.len(),
            components: self.components.iter().map(|q| q.apply_basis(vectors)).collect(),
        }
    }

    pub fn is_zero_system(&self) -> bool {
        self.components.iter().all(QuadraticForm::is_zero_form)
    }
}

/// Componentwise transfer of a K-system down to F.
pub fn transfer_system(sys: &QuadraticSystem, scale: &Elem) -> QuadraticSystem {
    let components = sys
        .components
        .iter()
        .map(|q| transfer_form_scaled(q, scale))
        .collect();
    QuadraticSystem::new(components).expect("componentwise transfer keeps shape")
}

// ---------------------------------------------------------------------------
// metabolicity
// ---------------------------------------------------------------------------

/// Gate under which exhaustive subspace enumeration is attempted.
const METABOLIC_ENUM_LIMIT: u128 = 1_000_000;

/// Decides whether the system vanishes identically on a subspace of at
/// least half the dimension, with a witness basis on success.
pub fn system_is_metabolic(
    sys: &QuadraticSystem,
    budget: u64,
    seed: u64,
) -> Result<(Decision, Option<Vec<Vec<Elem>>>)> {
    let f = sys.field().clone();
    let n = sys.dim();
    let required = n.div_ceil(2);
    if n == 0 || sys.is_zero_system() {
        let basis: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                let mut v = vec![f.zero(); n];
                v[i] = f.one();
                v
            })
            .collect();
        return Ok((Decision::Yes, Some(basis)));
    }
    if let Some(order) = f.order() {
        if order.checked_pow(n as u32).is_some_and(|c| c <= METABOLIC_ENUM_LIMIT) {
            return Ok(metabolic_exhaustive(sys, required));
        }
    }
    if required == 1 {
        // n <= 2: exact analysis of the common zero lines
        return metabolic_lines(sys);
    }
    // witness search only: a success is a proof, exhaustion is not
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Some(basis) = metabolic_witness_search(sys, required, budget, &mut rng) {
        return Ok((Decision::Yes, Some(basis)));
    }
    Ok((Decision::Undecided, None))
}

fn totally_zero_on(sys: &QuadraticSystem, basis: &[Vec<Elem>], v: &[Elem]) -> bool {
    sys.evaluate(v).iter().all(Elem::is_zero)
        && basis
            .iter()
            .all(|w| sys.polar_eval(w, v).iter().all(Elem::is_zero))
}

fn metabolic_exhaustive(
    sys: &QuadraticSystem,
    required: usize,
) -> (Decision, Option<Vec<Vec<Elem>>>) {
    let f = sys.field().clone();
    let n = sys.dim();
    let zero_locus: Vec<Vec<Elem>> = search::vector_sweep(&f, n)
        .filter(|v| !v.iter().all(Elem::is_zero))
        .filter(|v| sys.evaluate(v).iter().all(Elem::is_zero))
        .collect();
    let mut chosen: Vec<Vec<Elem>> = Vec::new();
    if dfs_zero_flag(sys, &f, &zero_locus, 0, required, &mut chosen) {
        (Decision::Yes, Some(chosen))
    } else {
        (Decision::No, None)
    }
}

fn dfs_zero_flag(
    sys: &QuadraticSystem,
    f: &Field,
    locus: &[Vec<Elem>],
    start: usize,
    required: usize,
    chosen: &mut Vec<Vec<Elem>>,
) -> bool {
    if chosen.len() == required {
        return true;
    }
    for idx in start..locus.len() {
        let v = &locus[idx];
        if !chosen.iter().all(|w| sys.polar_eval(w, v).iter().all(Elem::is_zero)) {
            continue;
        }
        chosen.push(v.clone());
        if !linalg::independent(f, chosen) {
            chosen.pop();
            continue;
        }
        if dfs_zero_flag(sys, f, locus, idx + 1, required, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Exact decision for one-dimensional witnesses: the zero set of a nonzero
/// binary quadratic form is a union of at most two rational lines, all of
/// which are computable.
fn metabolic_lines(sys: &QuadraticSystem) -> Result<(Decision, Option<Vec<Vec<Elem>>>)> {
    let n = sys.dim();
    if n == 1 {
        // some component is nonzero on the line
        return Ok((Decision::No, None));
    }
    debug_assert_eq!(n, 2);
    let lead = sys
        .components
        .iter()
        .find(|q| !q.is_zero_form())
        .expect("zero system handled earlier");
    let lines = match binary_zero_lines(lead)? {
        Some(lines) => lines,
        None => return Ok((Decision::Undecided, None)),
    };
    for line in lines {
        if sys.evaluate(&line).iter().all(Elem::is_zero) {
            return Ok((Decision::Yes, Some(vec![line])));
        }
    }
    Ok((Decision::No, None))
}

/// The rational zero lines of a nonzero binary form a x^2 + b xy + c y^2;
/// `None` when root-finding is undecidable (Artin-Schreier search over a
/// function field).
fn binary_zero_lines(q: &QuadraticForm) -> Result<Option<Vec<Vec<Elem>>>> {
    let f = q.field().clone();
    let a = q.coeff(0, 0).clone();
    let b = q.coeff(0, 1).clone();
    let c = q.coeff(1, 1).clone();
    let mut lines: Vec<Vec<Elem>> = Vec::new();
    let push = |x: Elem, y: Elem, lines: &mut Vec<Vec<Elem>>| {
        let cand = vec![x, y];
        if !lines.contains(&cand) {
            lines.push(cand);
        }
    };
    if a.is_zero() {
        push(f.one(), f.zero(), &mut lines);
        if !b.is_zero() {
            // b x + c y = 0 with y = 1
            let x = f.neg(&f.div(&c, &b)?);
            push(x, f.one(), &mut lines);
        }
        return Ok(Some(lines));
    }
    // a != 0: roots of a x^2 + b x + c (y = 1)
    if f.char2() {
        if b.is_zero() {
            // x^2 = c/a
            if let Some(r) = f.is_square(&f.div(&c, &a)?) {
                push(r, f.one(), &mut lines);
            }
            return Ok(Some(lines));
        }
        // substitute x = (b/a) z: z^2 + z = a c / b^2
        let b2 = f.mul(&b, &b);
        let rhs = f.div(&f.mul(&a, &c), &b2)?;
        match f.wp_membership(&rhs)? {
            (Decision::Yes, Some(z)) => {
                let scale = f.div(&b, &a)?;
                push(f.mul(&scale, &z), f.one(), &mut lines);
                let z1 = f.add(&z, &f.one());
                push(f.mul(&scale, &z1), f.one(), &mut lines);
                Ok(Some(lines))
            }
            (Decision::No, _) => Ok(Some(lines)),
            _ => Ok(None),
        }
    } else {
        // discriminant b^2 - 4ac
        let four = f.from_i64(4);
        let disc = f.sub(&f.mul(&b, &b), &f.mul(&four, &f.mul(&a, &c)));
        if let Some(r) = f.is_square(&disc) {
            let two_a = f.mul(&f.from_i64(2), &a);
            for root in [r.clone(), f.neg(&r)] {
                let x = f.div(&f.sub(&root, &b), &two_a)?;
                push(x, f.one(), &mut lines);
            }
        }
        Ok(Some(lines))
    }
}

fn metabolic_witness_search(
    sys: &QuadraticSystem,
    required: usize,
    budget: u64,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<Elem>>> {
    let f = sys.field().clone();
    let n = sys.dim();
    let mut tried = 0u64;
    let mut chosen: Vec<Vec<Elem>> = Vec::new();
    // deterministic sweep first
    for v in search::vector_sweep(&f, n) {
        if tried >= budget / 2 {
            break;
        }
        tried += 1;
        if v.iter().all(Elem::is_zero) || !totally_zero_on(sys, &chosen, &v) {
            continue;
        }
        chosen.push(v);
        if !linalg::independent(&f, &chosen) {
            chosen.pop();
            continue;
        }
        if chosen.len() == required {
            return Some(chosen);
        }
    }
    // random restarts
    while tried < budget {
        tried += 1;
        let v = search::random_vector(&f, n, rng);
        if v.iter().all(Elem::is_zero) || !totally_zero_on(sys, &chosen, &v) {
            continue;
        }
        chosen.push(v);
        if !linalg::independent(&f, &chosen) {
            chosen.pop();
            continue;
        }
        if chosen.len() == required {
            return Some(chosen);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// descent of systems
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SystemDescentOutcome {
    pub decision: Decision,
    pub descended: Option<QuadraticSystem>,
    pub basis: Option<Vec<Vec<Elem>>>,
    /// Necessary-condition report: metabolicity of the transferred system.
    pub transfer_metabolic: Option<Decision>,
    /// True when a complete enumeration backed the verdict.
    pub exhausted: bool,
}

const F_STRUCTURE_ENUM_LIMIT: u128 = 1_000_000;

/// Searches for an F-structure of the whole system: a K-basis on which all
/// values and all polar values of every component are F-rational.
pub fn f_structure_search(
    sys: &QuadraticSystem,
    budget: u64,
    seed: u64,
) -> Result<Option<(QuadraticSystem, Vec<Vec<Elem>>)>> {
    let k = sys.field().clone();
    if !k.is_quad_ext() {
        return Err(Error::NoExtension);
    }
    let (basis, _) = f_structure_driver(sys, budget, seed)?;
    match basis {
        Some(b) => {
            let descended = descend_by_basis(sys, &b)?;
            Ok(Some((descended, b)))
        }
        None => Ok(None),
    }
}

/// Returns (basis-if-found, search-was-complete).
fn f_structure_driver(
    sys: &QuadraticSystem,
    budget: u64,
    seed: u64,
) -> Result<(Option<Vec<Vec<Elem>>>, bool)> {
    let k = sys.field().clone();
    let n = sys.dim();
    if n == 0 {
        return Ok((Some(Vec::new()), true));
    }
    if let Some(order) = k.order() {
        if order.checked_pow(n as u32).is_some_and(|c| c <= F_STRUCTURE_ENUM_LIMIT) {
            let candidates: Vec<Vec<Elem>> = search::vector_sweep(&k, n)
                .filter(|v| !v.iter().all(Elem::is_zero))
                .filter(|v| values_rational(sys, v))
                .collect();
            let mut chosen = Vec::new();
            let found = dfs_f_structure(sys, &k, &candidates, 0, n, &mut chosen);
            return Ok((if found { Some(chosen) } else { None }, true));
        }
    }
    // bounded sweep + seeded random candidates, completeness not claimed
    let mut candidates: Vec<Vec<Elem>> = Vec::new();
    let mut tried = 0u64;
    for v in search::vector_sweep(&k, n) {
        if tried >= budget {
            break;
        }
        tried += 1;
        if !v.iter().all(Elem::is_zero) && values_rational(sys, &v) && !candidates.contains(&v) {
            candidates.push(v);
            if candidates.len() >= 4000 {
                break;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while tried < budget && candidates.len() < 6000 {
        tried += 1;
        let v = search::random_vector(&k, n, &mut rng);
        if !v.iter().all(Elem::is_zero) && values_rational(sys, &v) && !candidates.contains(&v) {
            candidates.push(v);
        }
    }
    let mut chosen = Vec::new();
    let found = dfs_f_structure(sys, &k, &candidates, 0, n, &mut chosen);
    Ok((if found { Some(chosen) } else { None }, false))
}

fn values_rational(sys: &QuadraticSystem, v: &[Elem]) -> bool {
    let k = sys.field();
    sys.evaluate(v).iter().all(|val| k.s_apply(val).is_zero())
}

fn pairings_rational(sys: &QuadraticSystem, u: &[Elem], v: &[Elem]) -> bool {
    let k = sys.field();
    sys.polar_eval(u, v).iter().all(|val| k.s_apply(val).is_zero())
}

fn dfs_f_structure(
    sys: &QuadraticSystem,
    k: &Field,
    candidates: &[Vec<Elem>],
    start: usize,
    need: usize,
    chosen: &mut Vec<Vec<Elem>>,
) -> bool {
    if chosen.len() == need {
        return true;
    }
    for idx in start..candidates.len() {
        let v = &candidates[idx];
        if !chosen.iter().all(|w| pairings_rational(sys, w, v)) {
            continue;
        }
        chosen.push(v.clone());
        if !linalg::independent(k, chosen) {
            chosen.pop();
            continue;
        }
        if dfs_f_structure(sys, k, candidates, idx + 1, need, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Reads off the descended system from an F-rational basis.
pub fn descend_by_basis(sys: &QuadraticSystem, basis: &[Vec<Elem>]) -> Result<QuadraticSystem> {
    let k = sys.field().clone();
    let f = k.base().ok_or(Error::NoExtension)?.clone();
    let over_k = sys.apply_basis(basis);
    let mut components = Vec::with_capacity(over_k.len());
    for q in over_k.components() {
        let mut coeffs = Vec::with_capacity(q.dim() * q.dim());
        for i in 0..q.dim() {
            for j in 0..q.dim() {
                let c = q.coeff(i, j);
                let down = k.in_base(c).ok_or_else(|| {
                    Error::InvalidInput("basis is not F-rational for the system".into())
                })?;
                coeffs.push(down);
            }
        }
        components.push(QuadraticForm::new(f.clone(), q.dim(), coeffs)?);
    }
    QuadraticSystem::new(components)
}

/// Full decision driver for system descent: explicit F-structure for yes,
/// exhausted enumeration or a failed necessary condition for no, undecided
/// otherwise.
pub fn system_descent_search(
    sys: &QuadraticSystem,
    budget: u64,
    seed: u64,
) -> Result<SystemDescentOutcome> {
    let k = sys.field().clone();
    if !k.is_quad_ext() {
        return Err(Error::NoExtension);
    }
    let (basis, exhausted) = f_structure_driver(sys, budget, seed)?;
    if let Some(basis) = basis {
        let descended = descend_by_basis(sys, &basis)?;
        return Ok(SystemDescentOutcome {
            decision: Decision::Yes,
            descended: Some(descended),
            basis: Some(basis),
            transfer_metabolic: None,
            exhausted,
        });
    }
    // necessary condition: the transferred system must be metabolic
    let one = k.base().unwrap().one();
    let transferred = transfer_system(sys, &one);
    let (metabolic, _) = system_is_metabolic(&transferred, budget, seed)?;
    if metabolic == Decision::No {
        return Ok(SystemDescentOutcome {
            decision: Decision::No,
            descended: None,
            basis: None,
            transfer_metabolic: Some(metabolic),
            exhausted,
        });
    }
    if exhausted {
        return Ok(SystemDescentOutcome {
            decision: Decision::No,
            descended: None,
            basis: None,
            transfer_metabolic: Some(metabolic),
            exhausted,
        });
    }
    Ok(SystemDescentOutcome {
        decision: Decision::Undecided,
        descended: None,
        basis: None,
        transfer_metabolic: Some(metabolic),
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_sqrt2() -> Field {
        let q = Field::rationals();
        q.radical_extension(q.from_i64(2)).unwrap()
    }

    fn alpha(k: &Field) -> Elem {
        // 3 + 2 sqrt(2) = (1 + sqrt 2)^2
        let f = k.base().unwrap();
        k.from_coords(f.from_i64(3), f.from_i64(2))
    }

    #[test]
    fn regularity_example_char2() {
        // (x^2, xy) over GF(2): regular as a system, not totally regular
        let f = Field::prime(2).unwrap();
        let x2 = QuadraticForm::new(f.clone(), 2, vec![f.one(), f.zero(), f.zero(), f.zero()])
            .unwrap();
        let xy = QuadraticForm::hyperbolic_plane(f.clone());
        let sys = QuadraticSystem::new(vec![x2, xy]).unwrap();
        let reg = sys.regularity();
        assert!(reg.regular);
        assert!(!reg.totally_regular);
    }

    #[test]
    fn zero_system_is_metabolic() {
        let f = Field::rationals();
        let sys =
            QuadraticSystem::new(vec![QuadraticForm::zero_form(f.clone(), 3)]).unwrap();
        let (dec, basis) = system_is_metabolic(&sys, 1000, 0).unwrap();
        assert_eq!(dec, Decision::Yes);
        assert_eq!(basis.unwrap().len(), 3);
    }

    #[test]
    fn hyperbolic_plus_zero_has_isotropic_line() {
        let f = Field::rationals();
        let sys = QuadraticSystem::new(vec![
            QuadraticForm::hyperbolic_plane(f.clone()),
            QuadraticForm::zero_form(f.clone(), 2),
        ])
        .unwrap();
        let (dec, basis) = system_is_metabolic(&sys, 1000, 0).unwrap();
        assert_eq!(dec, Decision::Yes);
        let basis = basis.unwrap();
        assert_eq!(basis.len(), 1);
        assert!(sys.evaluate(&basis[0]).iter().all(Elem::is_zero));
    }

    #[test]
    fn erratum_counterexample_transfer_not_metabolic() {
        // transfer of (<1>, <3 + 2 sqrt 2>) over Q(sqrt 2): the two binary
        // forms 2xy and 2x^2 + 6xy + 4y^2 share no zero line
        let k = q_sqrt2();
        let sys = QuadraticSystem::new(vec![
            QuadraticForm::diagonal(k.clone(), &[k.one()]).unwrap(),
            QuadraticForm::diagonal(k.clone(), &[alpha(&k)]).unwrap(),
        ])
        .unwrap();
        let one = Field::rationals().one();
        let t = transfer_system(&sys, &one);
        assert_eq!(t.dim(), 2);
        let (dec, _) = system_is_metabolic(&t, 1000, 0).unwrap();
        assert_eq!(dec, Decision::No);
    }

    #[test]
    fn erratum_counterexample_no_system_descent() {
        let k = q_sqrt2();
        let sys = QuadraticSystem::new(vec![
            QuadraticForm::diagonal(k.clone(), &[k.one()]).unwrap(),
            QuadraticForm::diagonal(k.clone(), &[alpha(&k)]).unwrap(),
        ])
        .unwrap();
        let out = system_descent_search(&sys, 20_000, 7).unwrap();
        assert_eq!(out.decision, Decision::No);
        assert_eq!(out.transfer_metabolic, Some(Decision::No));
        // while each component descends on its own
        for q in sys.components() {
            let d = super::super::descent_decide(q).unwrap();
            assert_eq!(d.decision, Decision::Yes);
        }
    }

    #[test]
    fn extended_system_descends() {
        // a 2-fold system extended from GF(7) descends, found exhaustively
        let f = Field::prime(7).unwrap();
        let k = f.radical_extension(Elem::Fp(3)).unwrap(); // 3 is a non-square mod 7
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho1 = QuadraticForm::random(&f, 2, &mut rng);
        let rho2 = QuadraticForm::random(&f, 2, &mut rng);
        let sys = QuadraticSystem::new(vec![
            rho1.extend_scalars(&k),
            rho2.extend_scalars(&k),
        ])
        .unwrap();
        let out = system_descent_search(&sys, 100_000, 1).unwrap();
        assert_eq!(out.decision, Decision::Yes);
        let basis = out.basis.unwrap();
        assert!(linalg::independent(&k, &basis));
        // Lemma-style check: a descended system has metabolic transfer
        let one = f.one();
        let t = transfer_system(&sys, &one);
        let (dec, _) = system_is_metabolic(&t, 100_000, 1).unwrap();
        assert_eq!(dec, Decision::Yes);
    }

    #[test]
    fn transfer_of_empty_dim_system() {
        let k = q_sqrt2();
        let sys = QuadraticSystem::new(vec![QuadraticForm::zero_form(k, 0)]).unwrap();
        let one = Field::rationals().one();
        let t = transfer_system(&sys, &one);
        assert_eq!(t.dim(), 0);
        assert_eq!(t.len(), 1);
    }
}
