//! Lambda-hermitian forms over (D, theta) with D the base field itself or a
//! quaternion algebra with involution of the first kind.
//!
//! Forms carry a Gram matrix G with G = lambda * theta(G)^T. The associated
//! system of quadratic forms reads off the coordinates of h(v, v) with
//! respect to a basis of the symmetrized elements; for quaternion algebras
//! with type epsilon and lambda = -epsilon that basis is a single element
//! and the system collapses to one quadratic form over the center.

use rand::Rng;

use crate::error::{Decision, Error, Result};
use crate::fields::{Elem, Field};
use crate::linalg;
use crate::quadforms::{witt, QuadraticForm, QuadraticSystem};
use crate::quaternion::{AlgebraWithInvolution, InvolutionClass, QuatElem};

/// Coefficient algebra (D, theta): the field itself with the identity, or a
/// quaternion algebra with involution.
#[derive(Debug, Clone, PartialEq)]
pub enum DivisionAlgebra {
    Field(Field),
    Quaternion(AlgebraWithInvolution),
}

/// An element of D in coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum DElem {
    Scalar(Elem),
    Quat(QuatElem),
}

impl DivisionAlgebra {
    pub fn center(&self) -> &Field {
        match self {
            DivisionAlgebra::Field(f) => f,
            DivisionAlgebra::Quaternion(q) => q.alg.center(),
        }
    }

    /// Dimension of D over its center (1 or 4).
    pub fn degree_sq(&self) -> usize {
        match self {
            DivisionAlgebra::Field(_) => 1,
            DivisionAlgebra::Quaternion(_) => 4,
        }
    }

    pub fn is_field_case(&self) -> bool {
        matches!(self, DivisionAlgebra::Field(_))
    }

    pub fn zero(&self) -> DElem {
        match self {
            DivisionAlgebra::Field(f) => DElem::Scalar(f.zero()),
            DivisionAlgebra::Quaternion(q) => DElem::Quat(q.alg.zero()),
        }
    }

    pub fn one(&self) -> DElem {
        match self {
            DivisionAlgebra::Field(f) => DElem::Scalar(f.one()),
            DivisionAlgebra::Quaternion(q) => DElem::Quat(q.alg.one()),
        }
    }

    pub fn from_center(&self, c: &Elem) -> DElem {
        match self {
            DivisionAlgebra::Field(_) => DElem::Scalar(c.clone()),
            DivisionAlgebra::Quaternion(q) => DElem::Quat(q.alg.scalar(c)),
        }
    }

    pub fn coords(&self, x: &DElem) -> Vec<Elem> {
        match (self, x) {
            (DivisionAlgebra::Field(_), DElem::Scalar(e)) => vec![e.clone()],
            (DivisionAlgebra::Quaternion(_), DElem::Quat(u)) => u.to_vec(),
            _ => panic!("element does not belong to this algebra"),
        }
    }

    pub fn from_coords(&self, coords: &[Elem]) -> DElem {
        match self {
            DivisionAlgebra::Field(_) => DElem::Scalar(coords[0].clone()),
            DivisionAlgebra::Quaternion(_) => DElem::Quat([
                coords[0].clone(),
                coords[1].clone(),
                coords[2].clone(),
                coords[3].clone(),
            ]),
        }
    }

    pub fn is_zero(&self, x: &DElem) -> bool {
        self.coords(x).iter().all(Elem::is_zero)
    }

    pub fn add(&self, x: &DElem, y: &DElem) -> DElem {
        match (self, x, y) {
            (DivisionAlgebra::Field(f), DElem::Scalar(a), DElem::Scalar(b)) => {
                DElem::Scalar(f.add(a, b))
            }
            (DivisionAlgebra::Quaternion(q), DElem::Quat(a), DElem::Quat(b)) => {
                DElem::Quat(q.alg.add(a, b))
            }
            _ => panic!("mixed operands"),
        }
    }

    pub fn neg(&self, x: &DElem) -> DElem {
        match (self, x) {
            (DivisionAlgebra::Field(f), DElem::Scalar(a)) => DElem::Scalar(f.neg(a)),
            (DivisionAlgebra::Quaternion(q), DElem::Quat(a)) => DElem::Quat(q.alg.neg(a)),
            _ => panic!("mixed operands"),
        }
    }

    pub fn sub(&self, x: &DElem, y: &DElem) -> DElem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &DElem, y: &DElem) -> DElem {
        match (self, x, y) {
            (DivisionAlgebra::Field(f), DElem::Scalar(a), DElem::Scalar(b)) => {
                DElem::Scalar(f.mul(a, b))
            }
            (DivisionAlgebra::Quaternion(q), DElem::Quat(a), DElem::Quat(b)) => {
                DElem::Quat(q.alg.mul(a, b))
            }
            _ => panic!("mixed operands"),
        }
    }

    pub fn theta(&self, x: &DElem) -> DElem {
        match (self, x) {
            (DivisionAlgebra::Field(_), DElem::Scalar(a)) => DElem::Scalar(a.clone()),
            (DivisionAlgebra::Quaternion(q), DElem::Quat(a)) => DElem::Quat(q.theta(a)),
            _ => panic!("mixed operands"),
        }
    }

    pub fn is_invertible(&self, x: &DElem) -> bool {
        match (self, x) {
            (DivisionAlgebra::Field(_), DElem::Scalar(a)) => !a.is_zero(),
            (DivisionAlgebra::Quaternion(q), DElem::Quat(a)) => !q.alg.nrd(a).is_zero(),
            _ => panic!("mixed operands"),
        }
    }

    pub fn inv(&self, x: &DElem) -> Result<DElem> {
        match (self, x) {
            (DivisionAlgebra::Field(f), DElem::Scalar(a)) => Ok(DElem::Scalar(f.inv(a)?)),
            (DivisionAlgebra::Quaternion(q), DElem::Quat(a)) => Ok(DElem::Quat(q.alg.inv(a)?)),
            _ => panic!("mixed operands"),
        }
    }

    pub fn scale(&self, c: &Elem, x: &DElem) -> DElem {
        self.mul(&self.from_center(c), x)
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> DElem {
        match self {
            DivisionAlgebra::Field(f) => DElem::Scalar(f.random(rng)),
            DivisionAlgebra::Quaternion(q) => DElem::Quat(q.alg.random(rng)),
        }
    }

    /// Basis of Symd_lambda(D, theta) = {x + lambda theta(x)} over the center.
    pub fn symd_basis(&self, lambda: i8) -> Vec<DElem> {
        match self {
            DivisionAlgebra::Field(f) => {
                // x + lambda x: the whole field unless it collapses
                let two_like = if lambda == 1 {
                    f.add(&f.one(), &f.one())
                } else {
                    f.zero()
                };
                if two_like.is_zero() {
                    Vec::new()
                } else {
                    vec![DElem::Scalar(f.one())]
                }
            }
            DivisionAlgebra::Quaternion(q) => {
                q.symd_basis(lambda).into_iter().map(DElem::Quat).collect()
            }
        }
    }

    /// Basis of the eigenspace Sym_lambda(D, theta) = {x : theta(x) = lambda x}.
    pub fn sym_basis(&self, lambda: i8) -> Vec<DElem> {
        match self {
            DivisionAlgebra::Field(f) => {
                if lambda == 1 || f.char2() {
                    vec![DElem::Scalar(f.one())]
                } else {
                    Vec::new()
                }
            }
            DivisionAlgebra::Quaternion(q) => {
                let f = q.alg.center().clone();
                let mut rows: linalg::Matrix = Vec::with_capacity(4);
                for idx in 0..4 {
                    let e = q.alg.basis_elem(idx);
                    let te = q.theta(&e);
                    let le = if lambda == -1 { q.alg.neg(&e) } else { e.clone() };
                    // theta(e) - lambda e as a row
                    let diff = q.alg.sub(&te, &le);
                    rows.push(diff.to_vec());
                }
                // kernel of the transpose: coordinates c with theta(sum c e) =
                // lambda sum c e
                let cols = linalg::transpose(&f, &rows);
                linalg::kernel(&f, &cols)
                    .into_iter()
                    .map(|v| DElem::Quat([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]))
                    .collect()
            }
        }
    }

    pub fn extend_scalars(&self, k: &Field) -> DivisionAlgebra {
        match self {
            DivisionAlgebra::Field(f) => {
                assert_eq!(k.base(), Some(f));
                DivisionAlgebra::Field(k.clone())
            }
            DivisionAlgebra::Quaternion(q) => DivisionAlgebra::Quaternion(q.extend_scalars(k)),
        }
    }

    /// The F-form of an algebra extended from the base field, when the
    /// presentation data is F-rational.
    pub fn restrict_to_base(&self) -> Option<DivisionAlgebra> {
        match self {
            DivisionAlgebra::Field(k) => k.base().cloned().map(DivisionAlgebra::Field),
            DivisionAlgebra::Quaternion(q) => {
                q.restrict_to_base().map(DivisionAlgebra::Quaternion)
            }
        }
    }

    pub fn lift_elem(&self, extended: &DivisionAlgebra, x: &DElem) -> DElem {
        let k = extended.center();
        let coords = self.coords(x);
        extended.from_coords(&coords.iter().map(|c| k.lift(c)).collect::<Vec<_>>())
    }

    /// Coordinatewise transfer s_D scaled by c: D_K -> D, extracting the
    /// eta-coordinate of each center coordinate.
    pub fn s_d(&self, restricted: &DivisionAlgebra, x: &DElem, scale: &Elem) -> DElem {
        let k = self.center();
        let f = restricted.center();
        let coords = self.coords(x);
        let down: Vec<Elem> = coords
            .iter()
            .map(|c| f.mul(&k.s_apply(c), scale))
            .collect();
        restricted.from_coords(&down)
    }

    pub fn fmt_elem(&self, x: &DElem) -> String {
        match (self, x) {
            (DivisionAlgebra::Field(f), DElem::Scalar(e)) => f.fmt_elem(e),
            (DivisionAlgebra::Quaternion(q), DElem::Quat(u)) => q.alg.fmt_elem(u),
            _ => panic!("mixed operands"),
        }
    }
}

// ---------------------------------------------------------------------------
// hermitian forms
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianForm {
    ring: DivisionAlgebra,
    lambda: i8,
    dim: usize,
    gram: Vec<DElem>,
}

impl HermitianForm {
    pub fn new(ring: DivisionAlgebra, lambda: i8, dim: usize, gram: Vec<DElem>) -> Result<Self> {
        if lambda != 1 && lambda != -1 {
            return Err(Error::InvalidInput("lambda must be +1 or -1".into()));
        }
        if gram.len() != dim * dim {
            return Err(Error::InvalidInput("Gram matrix has wrong size".into()));
        }
        let h = HermitianForm { ring, lambda, dim, gram };
        for i in 0..dim {
            for j in 0..dim {
                let expect = h.lambda_theta(h.gram(j, i));
                if &expect != h.gram(i, j) {
                    return Err(Error::InvalidInput(
                        "Gram matrix must satisfy G = lambda * theta(G)^T".into(),
                    ));
                }
            }
        }
        Ok(h)
    }

    pub fn diagonal(ring: DivisionAlgebra, lambda: i8, entries: &[DElem]) -> Result<Self> {
        let dim = entries.len();
        let mut gram = vec![ring.zero(); dim * dim];
        for (i, e) in entries.iter().enumerate() {
            gram[i * dim + i] = e.clone();
        }
        HermitianForm::new(ring, lambda, dim, gram)
    }

    /// The hyperbolic plane with Gram [[0, 1], [lambda, 0]].
    pub fn hyperbolic_plane(ring: DivisionAlgebra, lambda: i8) -> Self {
        let one = ring.one();
        let lam = if lambda == -1 { ring.neg(&one) } else { one.clone() };
        let gram = vec![ring.zero(), one, lam, ring.zero()];
        HermitianForm { ring, lambda, dim: 2, gram }
    }

    fn lambda_theta(&self, x: &DElem) -> DElem {
        let t = self.ring.theta(x);
        if self.lambda == -1 {
            self.ring.neg(&t)
        } else {
            t
        }
    }

    pub fn ring(&self) -> &DivisionAlgebra {
        &self.ring
    }

    pub fn lambda(&self) -> i8 {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self, i: usize, j: usize) -> &DElem {
        &self.gram[i * self.dim + j]
    }

    pub fn gram_entries(&self) -> &[DElem] {
        &self.gram
    }

    /// h(u, v) = sum theta(u_i) G_ij v_j on coordinate vectors over D.
    pub fn evaluate(&self, u: &[DElem], v: &[DElem]) -> DElem {
        let d = &self.ring;
        let mut acc = d.zero();
        for i in 0..self.dim {
            if d.is_zero(&u[i]) {
                continue;
            }
            let tu = d.theta(&u[i]);
            for j in 0..self.dim {
                if d.is_zero(&v[j]) {
                    continue;
                }
                let t = d.mul(&d.mul(&tu, self.gram(i, j)), &v[j]);
                acc = d.add(&acc, &t);
            }
        }
        acc
    }

    /// Regularity: the Gram matrix is invertible over the division ring.
    pub fn is_regular(&self) -> Result<bool> {
        if self.dim == 0 {
            return Ok(true);
        }
        let rows: Vec<Vec<DElem>> = (0..self.dim)
            .map(|i| self.gram[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect();
        division_ring_invertible(&self.ring, &rows)
    }

    /// Evenness: every diagonal Gram entry lies in Symd_lambda. Off-diagonal
    /// contributions to h(v, v) are of the form x + lambda theta(x), so the
    /// diagonal criterion is equivalent.
    pub fn is_even(&self) -> bool {
        let basis = self.ring.symd_basis(self.lambda);
        (0..self.dim).all(|i| {
            symd_coordinates(&self.ring, &basis, self.gram(i, i)).is_some()
        })
    }

    /// Splits off the line spanned by v: h = <h(v,v)> perp h' with h' on the
    /// orthogonal complement. Errors when h(v, v) is not invertible.
    pub fn split_off(&self, v: &[DElem]) -> Result<(DElem, HermitianForm)> {
        let (alpha, rest, _) = self.split_off_with_basis(v)?;
        Ok((alpha, rest))
    }

    /// As `split_off`, additionally returning the complement basis in the
    /// coordinates of the ambient space.
    pub fn split_off_with_basis(
        &self,
        v: &[DElem],
    ) -> Result<(DElem, HermitianForm, Vec<Vec<DElem>>)> {
        let d = &self.ring;
        let alpha = self.evaluate(v, v);
        if !d.is_invertible(&alpha) {
            return Err(Error::InvalidInput(
                "split vector must have invertible length".into(),
            ));
        }
        // row r_j = sum_i theta(v_i) G_ij; the complement is its right kernel
        let mut row = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut acc = d.zero();
            for i in 0..self.dim {
                let t = d.mul(&d.theta(&v[i]), self.gram(i, j));
                acc = d.add(&acc, &t);
            }
            row.push(acc);
        }
        let pivot = (0..self.dim)
            .find(|&j| d.is_invertible(&row[j]))
            .ok_or_else(|| Error::Unsupported(
                "no invertible pivot; coefficient algebra is not division".into(),
            ))?;
        let pivot_inv = d.inv(&row[pivot])?;
        let mut complement: Vec<Vec<DElem>> = Vec::with_capacity(self.dim - 1);
        for j in 0..self.dim {
            if j == pivot {
                continue;
            }
            let mut w = vec![d.zero(); self.dim];
            w[j] = d.one();
            w[pivot] = d.neg(&d.mul(&pivot_inv, &row[j]));
            complement.push(w);
        }
        let m = complement.len();
        let mut gram = vec![d.zero(); m * m];
        for a in 0..m {
            for b in 0..m {
                gram[a * m + b] = self.evaluate(&complement[a], &complement[b]);
            }
        }
        let rest = HermitianForm {
            ring: d.clone(),
            lambda: self.lambda,
            dim: m,
            gram,
        };
        Ok((alpha, rest, complement))
    }

    pub fn direct_sum(&self, other: &HermitianForm) -> HermitianForm {
        assert_eq!(self.ring, other.ring);
        assert_eq!(self.lambda, other.lambda);
        let d = &self.ring;
        let n = self.dim + other.dim;
        let mut gram = vec![d.zero(); n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                gram[i * n + j] = self.gram(i, j).clone();
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                gram[(self.dim + i) * n + (self.dim + j)] = other.gram(i, j).clone();
            }
        }
        HermitianForm { ring: d.clone(), lambda: self.lambda, dim: n, gram }
    }

    pub fn extend_scalars(&self, k: &Field) -> (HermitianForm, Option<String>) {
        let ring = self.ring.extend_scalars(k);
        let gram = self
            .gram
            .iter()
            .map(|g| self.ring.lift_elem(&ring, g))
            .collect();
        let warning = match &ring {
            DivisionAlgebra::Quaternion(q) => {
                match crate::quaternion::is_split(&q.alg) {
                    Ok(Decision::Yes) => {
                        Some("the coefficient algebra splits after extension".to_string())
                    }
                    _ => None,
                }
            }
            _ => None,
        };
        (
            HermitianForm { ring, lambda: self.lambda, dim: self.dim, gram },
            warning,
        )
    }

    pub fn random_even_regular<R: Rng>(
        ring: &DivisionAlgebra,
        lambda: i8,
        dim: usize,
        rng: &mut R,
    ) -> HermitianForm {
        loop {
            let d = ring;
            let mut gram = vec![d.zero(); dim * dim];
            for i in 0..dim {
                // diagonal entries from Symd: x + lambda theta(x)
                let x = d.random(rng);
                let tx = d.theta(&x);
                let tx = if lambda == -1 { d.neg(&tx) } else { tx };
                gram[i * dim + i] = d.add(&x, &tx);
                for j in i + 1..dim {
                    let g = d.random(rng);
                    gram[i * dim + j] = g.clone();
                    let tg = d.theta(&g);
                    gram[j * dim + i] = if lambda == -1 { d.neg(&tg) } else { tg };
                }
            }
            let h = HermitianForm { ring: ring.clone(), lambda, dim, gram };
            if matches!(h.is_regular(), Ok(true)) {
                return h;
            }
        }
    }
}

/// Row reduction over a division ring by left multiplications.
fn division_ring_invertible(d: &DivisionAlgebra, rows: &[Vec<DElem>]) -> Result<bool> {
    let n = rows.len();
    let mut m: Vec<Vec<DElem>> = rows.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| d.is_invertible(&m[r][col]));
        let pivot = match pivot {
            Some(p) => p,
            None => {
                if (col..n).all(|r| d.is_zero(&m[r][col])) {
                    return Ok(false);
                }
                return Err(Error::Unsupported(
                    "matrix reduction stuck on a zero divisor; algebra is not division".into(),
                ));
            }
        };
        m.swap(col, pivot);
        let inv = d.inv(&m[col][col])?;
        for j in col..n {
            m[col][j] = d.mul(&inv, &m[col][j]);
        }
        for r in 0..n {
            if r != col && !d.is_zero(&m[r][col]) {
                let factor = m[r][col].clone();
                for j in col..n {
                    let t = d.mul(&factor, &m[col][j]);
                    m[r][j] = d.sub(&m[r][j], &t);
                }
            }
        }
    }
    Ok(true)
}

/// Coordinates of `value` with respect to `basis` inside the center-span of
/// the symmetrized elements; `None` when the value is outside the span.
pub fn symd_coordinates(
    d: &DivisionAlgebra,
    basis: &[DElem],
    value: &DElem,
) -> Option<Vec<Elem>> {
    let f = d.center();
    if basis.is_empty() {
        return if d.is_zero(value) { Some(Vec::new()) } else { None };
    }
    let deg = d.degree_sq();
    let mut mat = vec![vec![f.zero(); basis.len()]; deg];
    for (col, b) in basis.iter().enumerate() {
        for (row, c) in d.coords(b).into_iter().enumerate() {
            mat[row][col] = c;
        }
    }
    let rhs = d.coords(value);
    let sol = linalg::solve(f, &mat, &rhs)?;
    // verify exactly (solve only guarantees consistency on reduced system)
    let mut acc = d.zero();
    for (c, b) in sol.iter().zip(basis) {
        acc = d.add(&acc, &d.scale(c, b));
    }
    if acc == *value {
        Some(sol)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// associated systems
// ---------------------------------------------------------------------------

/// The system of quadratic forms reading h(v, v) through the dual basis of
/// a basis of symmetrized elements.
#[derive(Debug, Clone)]
pub struct AssociatedSystem {
    pub system: QuadraticSystem,
    pub basis: Vec<DElem>,
}

/// Center-space basis of D^n: module index outer, algebra coordinate inner.
pub fn flattened_basis(d: &DivisionAlgebra, dim: usize) -> Vec<Vec<DElem>> {
    let deg = d.degree_sq();
    let mut out = Vec::with_capacity(dim * deg);
    for r in 0..dim {
        for s in 0..deg {
            let mut coords = vec![d.center().zero(); deg];
            coords[s] = d.center().one();
            let e = d.from_coords(&coords);
            let mut v = vec![d.zero(); dim];
            v[r] = e;
            out.push(v);
        }
    }
    out
}

/// Builds q_{h,B} for a basis B of (a subspace containing the values of) the
/// symmetrized elements. The components are quadratic forms over the center
/// on the flattened space underlying V.
pub fn associated_system(h: &HermitianForm, basis: &[DElem]) -> Result<AssociatedSystem> {
    let d = h.ring();
    let f = d.center().clone();
    if basis.is_empty() {
        return Err(Error::ExcludedCase(
            "the symmetrized elements vanish, so the associated system carries no information"
                .into(),
        ));
    }
    // basis must be center-independent
    let rows: linalg::Matrix = basis.iter().map(|b| d.coords(b)).collect();
    if linalg::rank(&f, &rows) != basis.len() {
        return Err(Error::InvalidInput("basis elements are dependent".into()));
    }
    let flat = flattened_basis(d, h.dim());
    let n = flat.len();
    let m = basis.len();
    let mut comp_coeffs: Vec<Vec<Elem>> = vec![vec![f.zero(); n * n]; m];
    let mut write = |a: usize, b: usize, value: &DElem| -> Result<()> {
        let coords = symd_coordinates(d, basis, value).ok_or_else(|| {
            Error::InvalidInput(
                "a value of the form lies outside the span of the given basis".into(),
            )
        })?;
        for (i, c) in coords.into_iter().enumerate() {
            comp_coeffs[i][a * n + b] = c;
        }
        Ok(())
    };
    for a in 0..n {
        let val = h.evaluate(&flat[a], &flat[a]);
        write(a, a, &val)?;
        for b in a + 1..n {
            let cross = h.evaluate(&flat[a], &flat[b]);
            let polar = d.add(&cross, &h.lambda_theta(&cross));
            write(a, b, &polar)?;
        }
    }
    let components = comp_coeffs
        .into_iter()
        .map(|coeffs| QuadraticForm::new(f.clone(), n, coeffs))
        .collect::<Result<Vec<_>>>()?;
    Ok(AssociatedSystem {
        system: QuadraticSystem::new(components)?,
        basis: basis.to_vec(),
    })
}

/// The canonical associated system over the Symd basis; requires an even
/// form and errors on the degenerate cases where Symd vanishes.
pub fn associated_system_canonical(h: &HermitianForm) -> Result<AssociatedSystem> {
    let basis = h.ring().symd_basis(h.lambda());
    if basis.is_empty() {
        return Err(Error::ExcludedCase(
            "for D = F with this lambda the symmetrized elements vanish and the associated \
             system carries no information"
                .into(),
        ));
    }
    if !h.is_even() {
        return Err(Error::InvalidInput(
            "associated system over a Symd basis requires an even form".into(),
        ));
    }
    associated_system(h, &basis)
}

/// The single associated quadratic form of an even hermitian form over a
/// quaternion algebra with symplectic involution (the trace form), basis {1}.
pub fn jacobson_form(h: &HermitianForm) -> Result<QuadraticForm> {
    let DivisionAlgebra::Quaternion(q) = h.ring() else {
        return Err(Error::InvalidInput("trace form requires a quaternion algebra".into()));
    };
    if q.involution_class() != InvolutionClass::Symplectic || h.lambda() != 1 {
        return Err(Error::InvalidInput(
            "trace form requires a symplectic involution and lambda = +1".into(),
        ));
    }
    let basis = vec![h.ring().one()];
    let assoc = associated_system(h, &basis)?;
    Ok(assoc.system.into_components().swap_remove(0))
}

/// The single associated quadratic form q_{h,u} of a skew-hermitian form
/// over a quaternion algebra with orthogonal involution; u must span the
/// skew line Symd_{-1}.
pub fn skew_form(h: &HermitianForm, u: &DElem) -> Result<QuadraticForm> {
    let DivisionAlgebra::Quaternion(q) = h.ring() else {
        return Err(Error::InvalidInput("skew form requires a quaternion algebra".into()));
    };
    if q.involution_class() != InvolutionClass::Orthogonal || h.lambda() != -1 {
        return Err(Error::InvalidInput(
            "this trace form requires an orthogonal involution and lambda = -1".into(),
        ));
    }
    let line = h.ring().symd_basis(-1);
    if line.len() != 1 {
        return Err(Error::InvalidInput("skew line is not one-dimensional".into()));
    }
    if symd_coordinates(h.ring(), std::slice::from_ref(u), &line[0]).is_none() {
        return Err(Error::InvalidInput("u does not span the skew line".into()));
    }
    let assoc = associated_system(h, std::slice::from_ref(u))?;
    Ok(assoc.system.into_components().swap_remove(0))
}

/// The associated quadratic form used by the hyperbolicity decision, for
/// the supported pairings: (F, id, +1) away from characteristic 2, and a
/// quaternion algebra with lambda = -epsilon.
pub fn decision_form(h: &HermitianForm) -> Result<QuadraticForm> {
    match h.ring() {
        DivisionAlgebra::Field(f) => {
            if h.lambda() == -1 {
                return Err(Error::ExcludedCase(
                    "for D = F and lambda = -1 the associated system is trivial and carries \
                     no information about the form"
                        .into(),
                ));
            }
            if f.char2() {
                return Err(Error::ExcludedCase(
                    "for D = F in characteristic 2 the symmetrized elements vanish".into(),
                ));
            }
            let assoc = associated_system(h, &[h.ring().one()])?;
            Ok(assoc.system.into_components().swap_remove(0))
        }
        DivisionAlgebra::Quaternion(q) => {
            let class = q.involution_class();
            let expected_lambda = -class.epsilon();
            if h.lambda() != expected_lambda {
                return Err(Error::Unsupported(format!(
                    "hyperbolicity through a single trace form needs lambda = {expected_lambda} \
                     for this involution type"
                )));
            }
            match class {
                InvolutionClass::Symplectic => jacobson_form(h),
                InvolutionClass::Orthogonal => {
                    let line = h.ring().symd_basis(-1);
                    if line.len() != 1 {
                        return Err(Error::InvalidInput(
                            "skew line is not one-dimensional".into(),
                        ));
                    }
                    skew_form(h, &line[0])
                }
            }
        }
    }
}

/// Hyperbolicity of a regular even form, decided through the associated
/// quadratic form over the center.
pub fn hermitian_is_hyperbolic(h: &HermitianForm) -> Result<Decision> {
    if !h.is_regular()? {
        return Err(Error::NotRegular);
    }
    if !h.is_even() {
        return Err(Error::InvalidInput("hyperbolicity requires an even form".into()));
    }
    let q = decision_form(h)?;
    witt::is_hyperbolic(&q)
}

// ---------------------------------------------------------------------------
// transfer
// ---------------------------------------------------------------------------

/// Transfer s_*(h) of a form over (D, theta)_K down to (D, theta), along
/// the canonical functional scaled by `scale`. The underlying space is V
/// viewed as a D-module of twice the dimension, with basis e_1, ..., e_n,
/// eta e_1, ..., eta e_n.
pub fn transfer_hermitian(h: &HermitianForm, scale: &Elem) -> Result<HermitianForm> {
    let d_ext = h.ring().clone();
    let k = d_ext.center().clone();
    if !k.is_quad_ext() {
        return Err(Error::NoExtension);
    }
    let d0 = d_ext.restrict_to_base().ok_or_else(|| {
        Error::Unsupported("coefficient algebra is not extended from the base field".into())
    })?;
    let f = d0.center();
    if !f.contains(scale) {
        return Err(Error::NotInField(
            "transfer scale must lie in the base field".into(),
        ));
    }
    let eta = k.eta()?;
    let n = h.dim();
    let m = 2 * n;
    let mut gram = vec![d0.zero(); m * m];
    for eps in 0..2usize {
        for r in 0..n {
            for zeta in 0..2usize {
                for t in 0..n {
                    // h(e_r eta^eps, e_t eta^zeta) = eta^{eps+zeta} G_rt
                    let mut val = h.gram(r, t).clone();
                    for _ in 0..(eps + zeta) {
                        val = d_ext.scale(&eta, &val);
                    }
                    let a = eps * n + r;
                    let b = zeta * n + t;
                    gram[a * m + b] = d_ext.s_d(&d0, &val, scale);
                }
            }
        }
    }
    HermitianForm::new(d0, h.lambda(), m, gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadforms;
    use crate::quaternion::{InvolutionKind, QuaternionAlgebra};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hamilton() -> AlgebraWithInvolution {
        let f = Field::rationals();
        AlgebraWithInvolution::canonical(
            QuaternionAlgebra::new(f.clone(), f.from_i64(-1), f.from_i64(-1)).unwrap(),
        )
    }

    fn q_sqrt2() -> Field {
        let q = Field::rationals();
        q.radical_extension(q.from_i64(2)).unwrap()
    }

    fn unit_form(ring: &DivisionAlgebra, lambda: i8, n: usize) -> HermitianForm {
        let entries = vec![ring.one(); n];
        HermitianForm::diagonal(ring.clone(), lambda, &entries).unwrap()
    }

    #[test]
    fn unit_form_is_regular_and_even() {
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let h = unit_form(&ring, 1, 1);
        assert!(h.is_regular().unwrap());
        assert!(h.is_even());
    }

    #[test]
    fn degenerate_gram_is_not_regular() {
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let h = HermitianForm::diagonal(ring.clone(), 1, &[ring.one(), ring.zero()]).unwrap();
        assert!(!h.is_regular().unwrap());
    }

    #[test]
    fn split_off_unit_vector() {
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let h = unit_form(&ring, 1, 2);
        let v = vec![ring.one(), ring.zero()];
        let (alpha, rest) = h.split_off(&v).unwrap();
        assert_eq!(alpha, ring.one());
        assert_eq!(rest.dim(), 1);
        assert_eq!(rest.gram(0, 0), &ring.one());
        // diagonal sum vector has length 2
        let w = vec![ring.one(), ring.one()];
        let (alpha, rest) = h.split_off(&w).unwrap();
        assert_eq!(alpha, ring.from_center(&Field::rationals().from_i64(2)));
        assert_eq!(rest.dim(), 1);
        // isotropic vector is rejected
        let hyp = HermitianForm::hyperbolic_plane(ring.clone(), 1);
        let iso = vec![ring.one(), ring.zero()];
        assert!(hyp.split_off(&iso).is_err());
    }

    #[test]
    fn jacobson_form_of_unit_is_the_norm_form() {
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let h = unit_form(&ring, 1, 1);
        let q = jacobson_form(&h).unwrap();
        let f = Field::rationals();
        let expected =
            QuadraticForm::diagonal(f.clone(), &[f.one(), f.one(), f.one(), f.one()]).unwrap();
        assert_eq!(q, expected);
        // dim 2: block diagonal of units
        let h2 = unit_form(&ring, 1, 2);
        let q2 = jacobson_form(&h2).unwrap();
        let expected2 = QuadraticForm::diagonal(f.clone(), &vec![f.one(); 8]).unwrap();
        assert_eq!(q2, expected2);
    }

    #[test]
    fn field_case_associated_form_is_the_form_itself() {
        let f = Field::rationals();
        let ring = DivisionAlgebra::Field(f.clone());
        let h = HermitianForm::new(
            ring.clone(),
            1,
            2,
            vec![
                DElem::Scalar(f.from_i64(1)),
                DElem::Scalar(f.from_i64(3)),
                DElem::Scalar(f.from_i64(3)),
                DElem::Scalar(f.from_i64(-2)),
            ],
        )
        .unwrap();
        let q = decision_form(&h).unwrap();
        // q(v) = h(v, v): diagonal 1, -2, cross coefficient 2*3
        assert_eq!(q.coeff(0, 0), &f.from_i64(1));
        assert_eq!(q.coeff(1, 1), &f.from_i64(-2));
        assert_eq!(q.coeff(0, 1), &f.from_i64(6));
    }

    #[test]
    fn skew_form_matches_direct_evaluation() {
        // sigma = Int(i) gamma on Hamilton, u = i, h = <i> skew-hermitian
        let f = Field::rationals();
        let halg = QuaternionAlgebra::new(f.clone(), f.from_i64(-1), f.from_i64(-1)).unwrap();
        let i_unit = halg.basis_elem(1);
        let qi = AlgebraWithInvolution::new(halg.clone(), InvolutionKind::IntU(i_unit.clone()))
            .unwrap();
        let ring = DivisionAlgebra::Quaternion(qi.clone());
        let h = HermitianForm::diagonal(ring.clone(), -1, &[DElem::Quat(i_unit.clone())])
            .unwrap();
        let u = DElem::Quat(i_unit.clone());
        let q = skew_form(&h, &u).unwrap();
        assert_eq!(q.dim(), 4);
        // cross-check on 20 random vectors: q(coords) = pi(theta(v) i v)
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let v = halg.random(&mut rng);
            let val = qi.alg.mul(&qi.alg.mul(&qi.theta(&v), &i_unit), &v);
            // val = c * i for rational c
            let coords = symd_coordinates(&ring, &[u.clone()], &DElem::Quat(val)).unwrap();
            assert_eq!(q.evaluate(&v.to_vec()), coords[0]);
        }
    }

    #[test]
    fn extension_compatibility_of_associated_systems() {
        // q_{h_K, B_K} = (q_{h, B})_K as coefficient matrices
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = q_sqrt2();
        for _ in 0..10 {
            let h = HermitianForm::random_even_regular(&ring, 1, 2, &mut rng);
            let (hk, warn) = h.extend_scalars(&k);
            assert!(warn.is_none(), "Hamilton stays division over Q(sqrt 2)");
            let base_sys = associated_system_canonical(&h).unwrap();
            let ext_sys = associated_system_canonical(&hk).unwrap();
            let lifted = base_sys.system.extend_scalars(&k);
            assert_eq!(ext_sys.system, lifted);
        }
    }

    #[test]
    fn component_values_match_dual_functionals() {
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let h = HermitianForm::random_even_regular(&ring, 1, 2, &mut rng);
        let assoc = associated_system_canonical(&h).unwrap();
        let f = Field::rationals();
        for _ in 0..20 {
            // random vector in flattened coordinates
            let coords: Vec<Elem> = (0..8).map(|_| f.random(&mut rng)).collect();
            let flat = flattened_basis(&ring, 2);
            let mut v = vec![ring.zero(); 2];
            for (c, fv) in coords.iter().zip(&flat) {
                for r in 0..2 {
                    v[r] = ring.add(&v[r], &ring.scale(c, &fv[r]));
                }
            }
            let value = h.evaluate(&v, &v);
            let pi = symd_coordinates(&ring, &assoc.basis, &value).unwrap();
            let sys_val = assoc.system.evaluate(&coords);
            assert_eq!(sys_val, pi);
        }
    }

    #[test]
    fn transfer_of_extended_form_is_hyperbolic() {
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let k = q_sqrt2();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let one = Field::rationals().one();
        for dim in 1..=2 {
            let h0 = HermitianForm::random_even_regular(&ring, 1, dim, &mut rng);
            let (hk, _) = h0.extend_scalars(&k);
            let t = transfer_hermitian(&hk, &one).unwrap();
            assert_eq!(t.dim(), 2 * dim);
            assert!(t.is_regular().unwrap());
            assert_eq!(hermitian_is_hyperbolic(&t).unwrap(), Decision::Yes);
        }
    }

    #[test]
    fn transfer_of_sqrt2_line_is_anisotropic() {
        // s_*(<sqrt 2>) over (Hamilton_K, gamma) has Gram diag(1, 2); its
        // trace form is positive definite, so it is not hyperbolic, matching
        // the fact that <sqrt 2> has no descent (its values have mixed signs
        // under the two real embeddings).
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let k = q_sqrt2();
        let (hk_ring, _) = unit_form(&ring, 1, 1).extend_scalars(&k);
        let ext_ring = hk_ring.ring().clone();
        let eta = k.eta().unwrap();
        let h = HermitianForm::diagonal(
            ext_ring.clone(),
            1,
            &[ext_ring.from_center(&eta)],
        )
        .unwrap();
        let one = Field::rationals().one();
        let t = transfer_hermitian(&h, &one).unwrap();
        let f = Field::rationals();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.gram(0, 0), &t.ring().from_center(&f.from_i64(1)));
        assert_eq!(t.gram(1, 1), &t.ring().from_center(&f.from_i64(2)));
        assert!(t.ring().is_zero(t.gram(0, 1)));
        assert_eq!(hermitian_is_hyperbolic(&t).unwrap(), Decision::No);
    }

    #[test]
    fn field_case_transfer_reduces_to_form_transfer() {
        let k = q_sqrt2();
        let ring = DivisionAlgebra::Field(k.clone());
        let f = Field::rationals();
        // h = <1, 3 + 2 sqrt 2> symmetric bilinear over K
        let alpha = k.from_coords(f.from_i64(3), f.from_i64(2));
        let h = HermitianForm::diagonal(
            ring.clone(),
            1,
            &[DElem::Scalar(k.one()), DElem::Scalar(alpha.clone())],
        )
        .unwrap();
        let one = f.one();
        let t = transfer_hermitian(&h, &one).unwrap();
        // compare against the quadratic transfer of the associated K-form
        let qk = QuadraticForm::diagonal(k.clone(), &[k.one(), alpha]).unwrap();
        let tq = quadforms::transfer_form(&qk);
        let td = decision_form(&t).unwrap();
        let r1 = witt::witt_decompose(&td).unwrap();
        let r2 = witt::witt_decompose(&tq).unwrap();
        assert!(r1.same_class(&r2));
    }

    #[test]
    fn excluded_case_is_rejected() {
        let f = Field::rationals();
        let ring = DivisionAlgebra::Field(f.clone());
        let h = HermitianForm::new(
            ring.clone(),
            -1,
            2,
            vec![
                DElem::Scalar(f.zero()),
                DElem::Scalar(f.from_i64(1)),
                DElem::Scalar(f.from_i64(-1)),
                DElem::Scalar(f.zero()),
            ],
        )
        .unwrap();
        match hermitian_is_hyperbolic(&h) {
            Err(Error::ExcludedCase(_)) => {}
            other => panic!("expected the excluded case, got {other:?}"),
        }
    }

    #[test]
    fn hyperbolic_plane_over_hamilton() {
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let hyp = HermitianForm::hyperbolic_plane(ring.clone(), 1);
        assert_eq!(hermitian_is_hyperbolic(&hyp).unwrap(), Decision::Yes);
        let pos = unit_form(&ring, 1, 2);
        assert_eq!(hermitian_is_hyperbolic(&pos).unwrap(), Decision::No);
        let f = Field::rationals();
        let mixed = HermitianForm::diagonal(
            ring.clone(),
            1,
            &[ring.one(), ring.from_center(&f.from_i64(-1))],
        )
        .unwrap();
        assert_eq!(hermitian_is_hyperbolic(&mixed).unwrap(), Decision::Yes);
    }

    #[test]
    fn total_regularity_of_associated_systems() {
        // regular even forms with D != F or lambda != -1 give totally
        // regular systems
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ring = DivisionAlgebra::Quaternion(hamilton());
        for _ in 0..25 {
            let h = HermitianForm::random_even_regular(&ring, 1, 2, &mut rng);
            let assoc = associated_system_canonical(&h).unwrap();
            let reg = assoc.system.regularity();
            assert!(reg.totally_regular);
        }
        let f5 = Field::prime(5).unwrap();
        let ring = DivisionAlgebra::Field(f5);
        for _ in 0..25 {
            let h = HermitianForm::random_even_regular(&ring, 1, 3, &mut rng);
            let assoc = associated_system_canonical(&h).unwrap();
            assert!(assoc.system.regularity().totally_regular);
        }
    }

    #[test]
    fn gram_symmetry_preserved_by_split_off() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let ring = DivisionAlgebra::Quaternion(hamilton());
        for _ in 0..10 {
            let h = HermitianForm::random_even_regular(&ring, 1, 3, &mut rng);
            // find an anisotropic vector among the basis
            for r in 0..3 {
                let mut v = vec![ring.zero(); 3];
                v[r] = ring.one();
                if ring.is_invertible(&h.evaluate(&v, &v)) {
                    let (alpha, rest) = h.split_off(&v).unwrap();
                    // constructor-level symmetry re-validated here
                    let again = HermitianForm::new(
                        rest.ring().clone(),
                        rest.lambda(),
                        rest.dim(),
                        rest.gram_entries().to_vec(),
                    );
                    assert!(again.is_ok());
                    // splitting preserves the isometry class: <alpha> perp
                    // rest has the same trace-form Witt data as h
                    let line =
                        HermitianForm::diagonal(ring.clone(), 1, &[alpha]).unwrap();
                    let rebuilt = line.direct_sum(&rest);
                    let q1 = decision_form(&h).unwrap();
                    let q2 = decision_form(&rebuilt).unwrap();
                    let r1 = witt::witt_decompose(&q1).unwrap();
                    let r2 = witt::witt_decompose(&q2).unwrap();
                    assert!(r1.same_class(&r2));
                    break;
                }
            }
        }
    }

    #[test]
    fn extension_warns_when_the_algebra_splits() {
        // Hamilton splits over Q(i)
        let q = Field::rationals();
        let ki = q.radical_extension(q.from_i64(-1)).unwrap();
        let ring = DivisionAlgebra::Quaternion(hamilton());
        let h = unit_form(&ring, 1, 1);
        let (_, warning) = h.extend_scalars(&ki);
        assert!(warning.is_some());
    }
}
