//! Deterministic bounded-height sweeps and seeded random sampling used by
//! every search-based engine. Identical inputs and seeds reproduce identical
//! searches.

use rand::Rng;

use crate::fields::{Elem, Field};

/// Elements of bounded height, smallest first. Finite fields return the
/// whole field regardless of the requested height.
pub fn small_elements(f: &Field, height: u32) -> Vec<Elem> {
    if let Some(all) = f.elements() {
        return all;
    }
    if f.is_quad_ext() {
        let base = f.base().unwrap();
        let pool = small_elements(base, height);
        let mut out = Vec::with_capacity(pool.len() * pool.len());
        for x in &pool {
            for y in &pool {
                out.push(f.from_coords(x.clone(), y.clone()));
            }
        }
        return out;
    }
    if f.is_rationals() {
        let h = height as i64;
        let mut out = Vec::new();
        // smallest height first so searches prefer simple witnesses
        for level in 0..=h {
            for n in [level, -level] {
                for d in 1..=h.min(2) {
                    let e = match f.from_i64(n) {
                        v if d == 1 => v,
                        v => f.div(&v, &f.from_i64(d)).unwrap(),
                    };
                    if !out.contains(&e) {
                        out.push(e);
                    }
                }
            }
        }
        return out;
    }
    // function field: polynomials of small degree over the finite
    // coefficient field
    let deg = (height.saturating_sub(1)).min(2) as usize;
    let t = f.var_t().expect("function field");
    let coeff_pool: Vec<Elem> = {
        // constants, lifted
        let mut consts = vec![f.zero(), f.one()];
        if let Ok(x) = f.var_x() {
            if !consts.contains(&x) {
                consts.push(x);
            }
        }
        consts
    };
    let mut out = vec![f.zero()];
    let mut powers = vec![f.one()];
    for _ in 0..deg {
        let last = powers.last().unwrap().clone();
        powers.push(f.mul(&last, &t));
    }
    // all coefficient combinations over the small constant pool
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..=deg {
        let mut next = Vec::new();
        for partial in &stack {
            for c in 0..coeff_pool.len() {
                let mut p = partial.clone();
                p.push(c);
                next.push(p);
            }
        }
        stack = next;
    }
    for combo in stack {
        let mut acc = f.zero();
        for (i, &ci) in combo.iter().enumerate() {
            acc = f.add(&acc, &f.mul(&coeff_pool[ci], &powers[i]));
        }
        if !out.contains(&acc) {
            out.push(acc);
        }
    }
    out
}

/// Deterministic sweep of coordinate vectors: finite fields are enumerated
/// exhaustively once; infinite fields sweep growing heights.
pub fn vector_sweep(f: &Field, n: usize) -> Box<dyn Iterator<Item = Vec<Elem>>> {
    if f.is_finite() {
        if let Some(pool) = f.elements() {
            return Box::new(odometer(pool, n));
        }
    }
    let f = f.clone();
    let heights: Vec<u32> = vec![1, 2, 3];
    Box::new(heights.into_iter().flat_map(move |h| {
        let pool = small_elements(&f, h);
        odometer(pool, n)
    }))
}

/// Cartesian product of `pool` over `n` coordinates, lexicographic.
pub fn odometer(pool: Vec<Elem>, n: usize) -> impl Iterator<Item = Vec<Elem>> {
    let base = pool.len() as u128;
    let total = base.checked_pow(n as u32).unwrap_or(u128::MAX);
    (0..total).map(move |mut idx| {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(pool[(idx % base) as usize].clone());
            idx /= base;
        }
        v
    })
}

pub fn random_vector<R: Rng>(f: &Field, n: usize, rng: &mut R) -> Vec<Elem> {
    (0..n).map(|_| f.random(rng)).collect()
}

/// Sweep tuned for searches over a quadratic extension K/F: sparse vectors
/// with base-field coordinates come first, so objects extended from F yield
/// their original presentation before denser candidates are tried.
pub fn vector_sweep_structured(k: &Field, n: usize) -> Box<dyn Iterator<Item = Vec<Elem>>> {
    if !k.is_quad_ext() {
        return vector_sweep(k, n);
    }
    let base = k.base().unwrap().clone();
    let rational_pool: Vec<Elem> = small_elements(&base, 2)
        .into_iter()
        .map(|e| k.lift(&e))
        .collect();
    let k_pool = small_elements(k, 1);
    let kc = k.clone();
    let singletons = {
        let kc = kc.clone();
        let mut pools = rational_pool.clone();
        for e in &k_pool {
            if !pools.contains(e) {
                pools.push(e.clone());
            }
        }
        (0..n).flat_map(move |pos| {
            let kc = kc.clone();
            pools.clone().into_iter().filter_map(move |c| {
                if c.is_zero() {
                    return None;
                }
                let mut v = vec![kc.zero(); n];
                v[pos] = c;
                Some(v)
            })
        })
    };
    let zero = std::iter::once(vec![k.zero(); n]);
    let rational_dense = odometer(rational_pool, n);
    Box::new(zero.chain(singletons).chain(rational_dense).chain(vector_sweep(k, n)))
}
