//! Arithmetic in GF(2^k) with elements packed into `u64` bitmasks.
//!
//! Bit `i` of an element is the coefficient of `x^i` in its polynomial
//! representative modulo the defining irreducible polynomial.

/// Degree of a GF(2)[x] polynomial given as a bitmask; 0 maps to 0.
fn deg(p: u64) -> u32 {
    debug_assert!(p != 0);
    63 - p.leading_zeros()
}

/// Carry-less multiplication of GF(2)[x] polynomials (no reduction).
fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut b = b as u128;
    let mut a = a;
    while a != 0 {
        if a & 1 == 1 {
            acc ^= b;
        }
        a >>= 1;
        b <<= 1;
    }
    acc
}

/// Reduces a product of two degree < k polynomials modulo `poly` (degree k).
fn reduce(mut v: u128, poly: u64, k: u32) -> u64 {
    let pd = k;
    while v >> pd != 0 {
        let shift = 127 - v.leading_zeros() - pd;
        v ^= (poly as u128) << shift;
    }
    v as u64
}

pub fn mul(a: u64, b: u64, poly: u64, k: u32) -> u64 {
    reduce(clmul(a, b), poly, k)
}

pub fn pow(mut base: u64, mut exp: u128, poly: u64, k: u32) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, poly, k);
        }
        base = mul(base, base, poly, k);
        exp >>= 1;
    }
    acc
}

/// Inverse via a^(2^k - 2); caller guarantees `a != 0`.
pub fn inv(a: u64, poly: u64, k: u32) -> u64 {
    let order = (1u128 << k) - 2;
    pow(a, order, poly, k)
}

/// Every element of a finite field of characteristic 2 is a square;
/// the root is a^(2^(k-1)).
pub fn sqrt(a: u64, poly: u64, k: u32) -> u64 {
    pow(a, 1u128 << (k - 1), poly, k)
}

/// Remainder of GF(2)[x] division.
fn poly_rem(mut a: u128, b: u64) -> u64 {
    let db = deg(b);
    while a != 0 && (127 - a.leading_zeros()) >= db {
        let shift = 127 - a.leading_zeros() - db;
        a ^= (b as u128) << shift;
    }
    a as u64
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a as u128, b);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility of `poly` (degree k) over GF(2): x^(2^k) = x mod poly and
/// gcd(x^(2^(k/q)) - x, poly) = 1 for every prime q dividing k.
pub fn is_irreducible(poly: u64, k: u32) -> bool {
    if k == 0 || poly == 0 || deg(poly) != k {
        return false;
    }
    if poly & 1 == 0 {
        // divisible by x
        return k == 1 && poly == 0b10;
    }
    // x^(2^i) mod poly by repeated squaring of x.
    let x = if k == 1 { poly_rem(0b10, poly) } else { 0b10 };
    let frob = |i: u32| -> u64 {
        let mut t = x;
        for _ in 0..i {
            t = mul(t, t, poly, k);
        }
        t
    };
    if frob(k) != frob(0) {
        return false;
    }
    let mut m = k;
    let mut primes = Vec::new();
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            primes.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for q in primes {
        let x_pow = frob(k / q);
        let diff = x_pow ^ frob(0);
        if poly_gcd(poly, diff) != 1 {
            return false;
        }
    }
    true
}

/// Absolute trace to GF(2): sum of the Frobenius orbit.
pub fn abs_trace(a: u64, poly: u64, k: u32) -> u64 {
    let mut acc = 0u64;
    let mut t = a;
    for _ in 0..k {
        acc ^= t;
        t = mul(t, t, poly, k);
    }
    acc & 1
}

#[cfg(test)]
mod tests {
    use super::*;

    const AES_POLY: u64 = 0x11b; // x^8+x^4+x^3+x+1

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(0b111, 2)); // x^2+x+1
        assert!(is_irreducible(0b1011, 3)); // x^3+x+1
        assert!(is_irreducible(0b1101, 3)); // x^3+x^2+1
        assert!(!is_irreducible(0b1111, 3)); // x^3+x^2+x+1 = (x+1)(x^2+1)
        assert!(is_irreducible(AES_POLY, 8));
        assert!(is_irreducible(0x11d, 8)); // x^8+x^4+x^3+x^2+1
        assert!(!is_irreducible(0x101, 8)); // x^8+1 = (x+1)^8
    }

    #[test]
    fn field_axioms_gf8() {
        let (poly, k) = (0b1011u64, 3);
        for a in 1..8u64 {
            assert_eq!(mul(a, inv(a, poly, k), poly, k), 1);
            let r = sqrt(a, poly, k);
            assert_eq!(mul(r, r, poly, k), a);
        }
        // associativity, distributivity on the full field
        for a in 0..8u64 {
            for b in 0..8u64 {
                for c in 0..8u64 {
                    let ab_c = mul(mul(a, b, poly, k), c, poly, k);
                    let a_bc = mul(a, mul(b, c, poly, k), poly, k);
                    assert_eq!(ab_c, a_bc);
                    let d1 = mul(a, b ^ c, poly, k);
                    let d2 = mul(a, b, poly, k) ^ mul(a, c, poly, k);
                    assert_eq!(d1, d2);
                }
            }
        }
    }

    #[test]
    fn trace_counts() {
        // Exactly half the elements of GF(2^k) have absolute trace 0.
        for (poly, k) in [(0b111u64, 2u32), (0b1011, 3), (AES_POLY, 8)] {
            let zero_trace = (0..(1u64 << k)).filter(|&a| abs_trace(a, poly, k) == 0).count();
            assert_eq!(zero_trace, 1 << (k - 1));
        }
    }
}
