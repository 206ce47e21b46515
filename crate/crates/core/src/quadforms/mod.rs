//! Quadratic forms, bilinear forms and systems of quadratic forms in
//! arbitrary characteristic, with transfer across a quadratic extension and
//! the descent criterion through hyperbolicity of the transfer.
//!
//! A quadratic form is stored as an upper-triangular coefficient matrix U
//! with q(v) = sum_{i<=j} U[i][j] v_i v_j, which keeps characteristic 2
//! first-class. The polar form b_q(u,v) = q(u+v) - q(u) - q(v) has Gram
//! matrix U + U^T.

pub mod hilbert;
pub mod systems;
pub mod witt;

use rand::Rng;

use crate::error::{Decision, Error, Result};
use crate::fields::{Elem, Field};
use crate::linalg;

pub use systems::QuadraticSystem;
pub use witt::WittReport;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    field: Field,
    dim: usize,
    /// Row-major n x n, zero below the diagonal.
    coeffs: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBilinearForm {
    field: Field,
    dim: usize,
    /// Row-major n x n symmetric Gram matrix.
    gram: Vec<Elem>,
}

impl QuadraticForm {
    /// Builds a form from an upper-triangular coefficient matrix.
    pub fn new(field: Field, dim: usize, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                dim * dim,
                coeffs.len()
            )));
        }
        for i in 0..dim {
            for j in 0..i {
                if !coeffs[i * dim + j].is_zero() {
                    return Err(Error::InvalidInput(
                        "coefficient matrix must be upper-triangular".into(),
                    ));
                }
            }
        }
        for c in &coeffs {
            if !field.contains(c) {
                return Err(Error::NotInField(field.fmt_elem(c)));
            }
        }
        Ok(QuadraticForm { field, dim, coeffs })
    }

    /// Folds an arbitrary coefficient matrix into the canonical
    /// upper-triangular representative of the same quadratic map.
    pub fn from_matrix(field: Field, dim: usize, m: &[Elem]) -> Result<Self> {
        if m.len() != dim * dim {
            return Err(Error::InvalidInput("coefficient matrix has wrong size".into()));
        }
        let mut coeffs = vec![field.zero(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let target = if i <= j { i * dim + j } else { j * dim + i };
                coeffs[target] = field.add(&coeffs[target], &m[i * dim + j]);
            }
        }
        QuadraticForm::new(field, dim, coeffs)
    }

    pub fn diagonal(field: Field, entries: &[Elem]) -> Result<Self> {
        let dim = entries.len();
        let mut coeffs = vec![field.zero(); dim * dim];
        for (i, e) in entries.iter().enumerate() {
            coeffs[i * dim + i] = e.clone();
        }
        QuadraticForm::new(field, dim, coeffs)
    }

    /// The hyperbolic plane q(x, y) = xy.
    pub fn hyperbolic_plane(field: Field) -> Self {
        let coeffs = vec![field.zero(), field.one(), field.zero(), field.zero()];
        QuadraticForm { field, dim: 2, coeffs }
    }

    pub fn zero_form(field: Field, dim: usize) -> Self {
        let coeffs = vec![field.zero(); dim * dim];
        QuadraticForm { field, dim, coeffs }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Elem {
        &self.coeffs[i * self.dim + j]
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero_form(&self) -> bool {
        self.coeffs.iter().all(Elem::is_zero)
    }

    pub fn evaluate(&self, v: &[Elem]) -> Elem {
        assert_eq!(v.len(), self.dim);
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..self.dim {
            if v[i].is_zero() {
                continue;
            }
            for j in i..self.dim {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                let t = f.mul(&f.mul(c, &v[i]), &v[j]);
                acc = f.add(&acc, &t);
            }
        }
        acc
    }

    /// Polar form b_q(u, v) = q(u+v) - q(u) - q(v), with Gram U + U^T.
    pub fn polar(&self) -> SymmetricBilinearForm {
        let f = &self.field;
        let n = self.dim;
        let mut gram = vec![f.zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let a = if i <= j { self.coeff(i, j) } else { self.coeff(j, i) };
                let sym = if i == j { f.add(a, a) } else { a.clone() };
                gram[i * n + j] = sym;
            }
        }
        SymmetricBilinearForm { field: f.clone(), dim: n, gram }
    }

    pub fn polar_eval(&self, u: &[Elem], v: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                // contribution of U_ij to b(u,v): u_i v_j + u_j v_i
                let t = f.add(&f.mul(&u[i], &v[j]), &f.mul(&u[j], &v[i]));
                acc = f.add(&acc, &f.mul(c, &t));
            }
        }
        acc
    }

    /// Basis of the radical V^perp of the polar form.
    pub fn radical(&self) -> Vec<Vec<Elem>> {
        if self.dim == 0 {
            return Vec::new();
        }
        let gram = self.polar().gram_rows();
        linalg::kernel(&self.field, &gram)
    }

    pub fn is_regular(&self) -> bool {
        self.dim == 0 || self.radical().is_empty()
    }

    /// The form q' on F^m with q'(x) = q(sum x_a v_a).
    pub fn apply_basis(&self, vectors: &[Vec<Elem>]) -> QuadraticForm {
        let f = &self.field;
        let m = vectors.len();
        let mut coeffs = vec![f.zero(); m * m];
        for a in 0..m {
            coeffs[a * m + a] = self.evaluate(&vectors[a]);
            for b in a + 1..m {
                coeffs[a * m + b] = self.polar_eval(&vectors[a], &vectors[b]);
            }
        }
        QuadraticForm { field: f.clone(), dim: m, coeffs }
    }

    pub fn scale(&self, c: &Elem) -> QuadraticForm {
        let f = &self.field;
        QuadraticForm {
            field: f.clone(),
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|x| f.mul(x, c)).collect(),
        }
    }

    pub fn neg(&self) -> QuadraticForm {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn direct_sum(&self, other: &QuadraticForm) -> QuadraticForm {
        assert_eq!(self.field, other.field);
        let f = &self.field;
        let n = self.dim + other.dim;
        let mut coeffs = vec![f.zero(); n * n];
        for i in 0..self.dim {
            for j in i..self.dim {
                coeffs[i * n + j] = self.coeff(i, j).clone();
            }
        }
        for i in 0..other.dim {
            for j in i..other.dim {
                coeffs[(self.dim + i) * n + (self.dim + j)] = other.coeff(i, j).clone();
            }
        }
        QuadraticForm { field: f.clone(), dim: n, coeffs }
    }

    /// Reads an F-form in the quadratic extension K.
    pub fn extend_scalars(&self, k: &Field) -> QuadraticForm {
        assert_eq!(k.base(), Some(&self.field));
        QuadraticForm {
            field: k.clone(),
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| k.lift(c)).collect(),
        }
    }

    pub fn random<R: Rng>(field: &Field, dim: usize, rng: &mut R) -> QuadraticForm {
        let mut coeffs = vec![field.zero(); dim * dim];
        for i in 0..dim {
            for j in i..dim {
                coeffs[i * dim + j] = field.random(rng);
            }
        }
        QuadraticForm { field: field.clone(), dim, coeffs }
    }

    pub fn random_regular<R: Rng>(field: &Field, dim: usize, rng: &mut R) -> QuadraticForm {
        loop {
            let q = QuadraticForm::random(field, dim, rng);
            if q.is_regular() {
                return q;
            }
        }
    }
}

impl SymmetricBilinearForm {
    pub fn new(field: Field, dim: usize, gram: Vec<Elem>) -> Result<Self> {
        if gram.len() != dim * dim {
            return Err(Error::InvalidInput("Gram matrix has wrong size".into()));
        }
        for i in 0..dim {
            for j in 0..dim {
                if gram[i * dim + j] != gram[j * dim + i] {
                    return Err(Error::InvalidInput("Gram matrix must be symmetric".into()));
                }
            }
        }
        for c in &gram {
            if !field.contains(c) {
                return Err(Error::NotInField(field.fmt_elem(c)));
            }
        }
        Ok(SymmetricBilinearForm { field, dim, gram })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self, i: usize, j: usize) -> &Elem {
        &self.gram[i * self.dim + j]
    }

    pub fn gram_rows(&self) -> linalg::Matrix {
        (0..self.dim)
            .map(|i| self.gram[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    pub fn evaluate(&self, u: &[Elem], v: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..self.dim {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let t = f.mul(&f.mul(&u[i], self.gram(i, j)), &v[j]);
                acc = f.add(&acc, &t);
            }
        }
        acc
    }

    pub fn is_regular(&self) -> bool {
        self.dim == 0 || linalg::kernel(&self.field, &self.gram_rows()).is_empty()
    }

    pub fn det(&self) -> Elem {
        linalg::det(&self.field, &self.gram_rows())
    }

    /// The quadratic form v -> b(v, v).
    pub fn associated_quadratic(&self) -> QuadraticForm {
        let f = &self.field;
        let n = self.dim;
        let mut coeffs = vec![f.zero(); n * n];
        for i in 0..n {
            coeffs[i * n + i] = self.gram(i, i).clone();
            for j in i + 1..n {
                coeffs[i * n + j] = f.add(self.gram(i, j), self.gram(i, j));
            }
        }
        QuadraticForm { field: f.clone(), dim: n, coeffs }
    }

    /// Whether the form is alternating (b(v, v) = 0 for all v).
    pub fn is_alternating(&self) -> bool {
        // b(v,v) = 0 on a basis plus symmetry implies alternating only in
        // characteristic 2; in general check the diagonal and 2 b_ij terms.
        self.associated_quadratic().is_zero_form()
            || (0..self.dim).all(|i| self.gram(i, i).is_zero()) && self.field.char2()
    }
}

// ---------------------------------------------------------------------------
// transfer across a quadratic extension
// ---------------------------------------------------------------------------

/// The F-basis of K^n used by every transfer: e_1, ..., e_n, eta e_1, ...,
/// eta e_n.
pub fn transfer_basis(k: &Field, n: usize) -> Vec<Vec<Elem>> {
    let eta = k.eta().expect("quadratic extension");
    let mut basis = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut v = vec![k.zero(); n];
        v[i] = k.one();
        basis.push(v);
    }
    for i in 0..n {
        let mut v = vec![k.zero(); n];
        v[i] = eta.clone();
        basis.push(v);
    }
    basis
}

/// Transfer s_*(q) of a K-form along the scaled canonical functional
/// c * s; the result is a quadratic form over F on the 2n-dimensional
/// F-space underlying K^n, and its polar form is the transfer of the polar.
pub fn transfer_form_scaled(q: &QuadraticForm, scale: &Elem) -> QuadraticForm {
    let k = q.field();
    let f = k.base().expect("transfer requires a quadratic extension").clone();
    assert!(f.contains(scale), "scale must lie in the base field");
    let basis = transfer_basis(k, q.dim());
    let m = basis.len();
    let mut coeffs = vec![f.zero(); m * m];
    for a in 0..m {
        let val = k.s_apply(&q.evaluate(&basis[a]));
        coeffs[a * m + a] = f.mul(&val, scale);
        for b in a + 1..m {
            let val = k.s_apply(&q.polar_eval(&basis[a], &basis[b]));
            coeffs[a * m + b] = f.mul(&val, scale);
        }
    }
    QuadraticForm { field: f, dim: m, coeffs }
}

pub fn transfer_form(q: &QuadraticForm) -> QuadraticForm {
    let f = q.field().base().expect("transfer requires a quadratic extension");
    let one = f.one();
    transfer_form_scaled(q, &one)
}

/// Transfer of a symmetric bilinear K-form.
pub fn transfer_bilinear(b: &SymmetricBilinearForm, scale: &Elem) -> SymmetricBilinearForm {
    let k = b.field();
    let f = k.base().expect("transfer requires a quadratic extension").clone();
    let basis = transfer_basis(k, b.dim());
    let m = basis.len();
    let mut gram = vec![f.zero(); m * m];
    for a in 0..m {
        for c in 0..m {
            let val = k.s_apply(&b.evaluate(&basis[a], &basis[c]));
            gram[a * m + c] = f.mul(&val, scale);
        }
    }
    SymmetricBilinearForm { field: f, dim: m, gram }
}

// ---------------------------------------------------------------------------
// descent of a single regular form
// ---------------------------------------------------------------------------

/// Decision data for quadratic-form descent: yes iff the transfer is
/// hyperbolic; the Witt report of the transfer is the obstruction.
pub struct QuadDescentDecision {
    pub decision: Decision,
    pub transfer_report: Option<WittReport>,
}

pub fn descent_decide(q: &QuadraticForm) -> Result<QuadDescentDecision> {
    let k = q.field();
    if !k.is_quad_ext() {
        return Err(Error::NoExtension);
    }
    if !q.is_regular() {
        return Err(Error::NotRegular);
    }
    let f = k.base().unwrap();
    if !(f.is_finite() || f.is_rationals()) {
        return Err(Error::Unsupported(
            "descent decision requires a finite or rational base field".into(),
        ));
    }
    let t = transfer_form(q);
    match witt::witt_decompose(&t) {
        Ok(report) => {
            let decision = if report.hyperbolic { Decision::Yes } else { Decision::No };
            Ok(QuadDescentDecision { decision, transfer_report: Some(report) })
        }
        Err(Error::Undecided(_)) => Ok(QuadDescentDecision {
            decision: Decision::Undecided,
            transfer_report: None,
        }),
        Err(e) => Err(e),
    }
}

/// Searches for an explicit F-structure (a K-basis on which all values and
/// pairings are F-rational) and returns the descended form.
pub fn descent_construct(
    q: &QuadraticForm,
    budget: u64,
    seed: u64,
) -> Result<Option<QuadraticForm>> {
    let system = QuadraticSystem::new(vec![q.clone()])?;
    Ok(systems::f_structure_search(&system, budget, seed)?
        .map(|(descended, _)| descended.into_components().swap_remove(0)))
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

    #[test]
    fn polar_of_char2_square_is_zero() {
        let f2 = Field::prime(2).unwrap();
        let q = QuadraticForm::diagonal(f2.clone(), &[f2.one()]).unwrap();
        assert!(q.polar().gram_rows()[0][0].is_zero());
        assert!(!q.is_regular());
    }

    #[test]
    fn polar_of_xy_is_offdiagonal() {
        let f = Field::rationals();
        let q = QuadraticForm::hyperbolic_plane(f.clone());
        let p = q.polar();
        assert_eq!(p.gram(0, 1), &f.one());
        assert_eq!(p.gram(1, 0), &f.one());
        assert!(p.gram(0, 0).is_zero());
        assert!(q.is_regular());
    }

    #[test]
    fn polar_by_expansion_on_gf2() {
        // q = x^2 + xy + y^2 over GF(2): polar Gram [[0,1],[1,0]]
        let f = Field::prime(2).unwrap();
        let q = QuadraticForm::new(
            f.clone(),
            2,
            vec![f.one(), f.one(), f.zero(), f.one()],
        )
        .unwrap();
        // oracle: expand b(u,v) = q(u+v)-q(u)-q(v) on all four vectors
        let vecs: Vec<Vec<Elem>> = vec![
            vec![f.from_i64(0), f.from_i64(0)],
            vec![f.from_i64(1), f.from_i64(0)],
            vec![f.from_i64(0), f.from_i64(1)],
            vec![f.from_i64(1), f.from_i64(1)],
        ];
        let p = q.polar();
        for u in &vecs {
            for v in &vecs {
                let sum: Vec<Elem> = u.iter().zip(v).map(|(a, b)| f.add(a, b)).collect();
                let direct = f.sub(&f.sub(&q.evaluate(&sum), &q.evaluate(u)), &q.evaluate(v));
                assert_eq!(p.evaluate(u, v), direct);
            }
        }
        assert_eq!(p.gram(0, 1), &f.one());
        assert!(p.gram(0, 0).is_zero());
        assert!(q.is_regular());
    }

    #[test]
    fn radical_of_mixed_system_component() {
        // <1> over GF(2) is not regular: radical is the whole line
        let f = Field::prime(2).unwrap();
        let q = QuadraticForm::diagonal(f, &[Elem::Fp(1)]).unwrap();
        assert_eq!(q.radical().len(), 1);
    }

    #[test]
    fn transfer_of_unit_form_is_hyperbolic_plane() {
        // s_*(<1>) over Q(sqrt(2)) has value map (a, b) -> 2ab
        let k = q_sqrt2();
        let q = QuadraticForm::diagonal(k.clone(), &[k.one()]).unwrap();
        let t = transfer_form(&q);
        let f = Field::rationals();
        assert_eq!(t.dim(), 2);
        assert!(t.coeff(0, 0).is_zero());
        assert!(t.coeff(1, 1).is_zero());
        assert_eq!(t.coeff(0, 1), &f.from_i64(2));
    }

    #[test]
    fn transfer_of_sqrt2_form() {
        // s_*(<sqrt 2>) = a^2 + 2 b^2
        let k = q_sqrt2();
        let q = QuadraticForm::diagonal(k.clone(), &[k.eta().unwrap()]).unwrap();
        let t = transfer_form(&q);
        let f = Field::rationals();
        assert_eq!(t.coeff(0, 0), &f.one());
        assert_eq!(t.coeff(1, 1), &f.from_i64(2));
        assert!(t.coeff(0, 1).is_zero());
    }

    #[test]
    fn transfer_polar_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let towers: Vec<Field> = vec![
            q_sqrt2(),
            Field::prime(5)
                .unwrap()
                .radical_extension(Elem::Fp(2))
                .unwrap(),
        ];
        for k in towers {
            for dim in 1..=3 {
                for _ in 0..10 {
                    let q = QuadraticForm::random(&k, dim, &mut rng);
                    let one = k.base().unwrap().one();
                    let lhs = transfer_form(&q).polar();
                    let rhs = transfer_bilinear(&q.polar(), &one);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn apply_basis_matches_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = Field::prime(7).unwrap();
        let q = QuadraticForm::random(&f, 3, &mut rng);
        let basis: Vec<Vec<Elem>> = (0..3)
            .map(|_| (0..3).map(|_| f.random(&mut rng)).collect())
            .collect();
        let q2 = q.apply_basis(&basis);
        for _ in 0..20 {
            let x: Vec<Elem> = (0..3).map(|_| f.random(&mut rng)).collect();
            let mut v = vec![f.zero(); 3];
            for (a, xa) in x.iter().enumerate() {
                for i in 0..3 {
                    v[i] = f.add(&v[i], &f.mul(xa, &basis[a][i]));
                }
            }
            assert_eq!(q2.evaluate(&x), q.evaluate(&v));
        }
    }
}
