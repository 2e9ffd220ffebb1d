//! Factoring univariate polynomials over `F_q`: squarefree decomposition
//! (with the characteristic-`p` descent for vanishing derivatives),
//! distinct-degree splitting by Frobenius powers, and equal-degree splitting
//! by random quadratic characters (odd `q`).
//!
//! Factoring is deterministic: the equal-degree step draws its randomness
//! from a stream keyed by the polynomial being split, so the factorization
//! of a given polynomial never depends on what else was factored before it.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use super::FieldDesc;

/// `true` iff `f` has no repeated roots in the algebraic closure. A constant
/// is squarefree; a nonconstant with zero derivative is a `p`-th power.
pub fn is_squarefree(fd: &FieldDesc, f: &Poly) -> bool {
    if f.is_zero() {
        return false;
    }
    let d = f.derivative(fd);
    if d.is_zero() {
        return f.deg() == 0;
    }
    f.gcd(fd, &d).deg() == 0
}

/// Rabin irreducibility test. Degree-0 polynomials are units, not irreducible.
pub fn is_irreducible(fd: &FieldDesc, f: &Poly) -> bool {
    let n = match f.degree().finite() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let x = Poly::x(fd);
    // Frobenius powers x^(q^j) mod f, built by iterating j -> j+1.
    let mut frob = x.pow_mod(fd, fd.q, f);
    let mut powers = vec![Poly::zero(); n + 1];
    powers[1] = frob.clone();
    for j in 2..=n {
        frob = frob.pow_mod(fd, fd.q, f);
        powers[j] = frob.clone();
    }
    if powers[n] != x.rem(fd, f).expect("f nonconstant") {
        return false;
    }
    let mut m = n;
    let mut ell = 2;
    while ell * ell <= m {
        if m % ell == 0 {
            let g = powers[n / ell].sub(fd, &x).gcd(fd, f);
            if g.deg() != 0 {
                return false;
            }
            while m % ell == 0 {
                m /= ell;
            }
        }
        ell += 1;
    }
    if m > 1 && m < n {
        let g = powers[n / m].sub(fd, &x).gcd(fd, f);
        if g.deg() != 0 {
            return false;
        }
    } else if m == n {
        let g = powers[1].sub(fd, &x).gcd(fd, f);
        if g.deg() != 0 {
            return false;
        }
    }
    true
}

/// Coefficient-wise `p`-th root of a polynomial in `x^p`; callable only when
/// every exponent with a nonzero coefficient is a multiple of `p`.
fn pth_root(fd: &FieldDesc, f: &Poly) -> Poly {
    let p = fd.p as usize;
    let mut out = Vec::with_capacity(f.coeffs().len() / p + 1);
    for (i, &c) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            // a^(p^(k-1)) inverts the Frobenius a -> a^p on F_{p^k}.
            out.push(fd.pow(c, fd.q / fd.p));
        } else {
            debug_assert_eq!(c.rep, 0, "not a polynomial in x^p");
        }
    }
    Poly::from_coeffs(out)
}

/// Squarefree decomposition of a monic `f`: pairs `(g_i, m_i)` with the
/// `g_i` monic squarefree, pairwise coprime, and `f = prod g_i^{m_i}`.
pub fn squarefree_parts(fd: &FieldDesc, f: &Poly) -> Vec<(Poly, u32)> {
    debug_assert!(f.is_monic());
    let mut result = Vec::new();
    if f.deg() == 0 {
        return result;
    }
    let deriv = f.derivative(fd);
    if deriv.is_zero() {
        // f = v^p with v = pth_root(f).
        let v = pth_root(fd, f);
        for (g, m) in squarefree_parts(fd, &v) {
            result.push((g, m * fd.p as u32));
        }
        return result;
    }
    let mut c = f.gcd(fd, &deriv);
    let mut w = f.divmod(fd, &c).expect("gcd nonzero").0;
    let mut i = 1u32;
    while w.deg() != 0 {
        let y = w.gcd(fd, &c);
        let fac = w.divmod(fd, &y).expect("gcd nonzero").0;
        if fac.deg() != 0 {
            result.push((fac, i));
        }
        w = y;
        c = c.divmod(fd, &w).expect("w nonzero").0;
        i += 1;
    }
    if c.deg() != 0 {
        // Remaining part is a polynomial in x^p.
        let v = pth_root(fd, &c);
        for (g, m) in squarefree_parts(fd, &v) {
            result.push((g, m * fd.p as u32));
        }
    }
    result
}

/// Distinct-degree splitting of a monic squarefree `f`: pairs `(h_d, d)`
/// where `h_d` is the product of the irreducible factors of degree `d`.
fn distinct_degree(fd: &FieldDesc, f: &Poly) -> Vec<(Poly, usize)> {
    let mut result = Vec::new();
    let mut v = f.clone();
    let x = Poly::x(fd);
    let mut h = x.clone();
    let mut d = 0usize;
    while v.deg() > 0 && 2 * (d + 1) <= v.deg() {
        d += 1;
        h = h.pow_mod(fd, fd.q, &v);
        let g = h.sub(fd, &x).gcd(fd, &v);
        if g.deg() != 0 {
            result.push((g.clone(), d));
            v = v.divmod(fd, &g).expect("g nonzero").0;
            h = h.rem(fd, &v).expect("v nonzero");
        }
    }
    if v.deg() != 0 {
        let d = v.deg();
        result.push((v, d));
    }
    result
}

/// Stream key for the equal-degree split of `v`: FNV-1a over the degree and
/// coefficient reps, so the randomness is a pure function of `v`.
fn edf_stream_key(v: &Poly) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(v.coeffs().len() as u64);
    for &c in v.coeffs() {
        eat(c.rep);
    }
    h
}

fn random_poly_below(fd: &FieldDesc, deg_bound: usize, rng: &mut ChaCha8Rng) -> Poly {
    // Rejection sampling per coefficient keeps the draw uniform.
    let mut c = Vec::with_capacity(deg_bound);
    let mask = (fd.q as u128).next_power_of_two() as u64 - 1;
    for _ in 0..deg_bound {
        let r = loop {
            let draw = rng.next_u64() & mask;
            if draw < fd.q {
                break draw;
            }
        };
        c.push(fd.elem(r));
    }
    Poly::from_coeffs(c)
}

/// Equal-degree splitting (odd `q`): `v` is monic, squarefree, a product of
/// irreducibles all of degree `d`. Appends the factors to `out`.
fn equal_degree(fd: &FieldDesc, v: &Poly, d: usize, out: &mut Vec<Poly>) {
    debug_assert!(fd.p != 2, "equal-degree split assumes odd q");
    if v.deg() == d {
        out.push(v.clone());
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(edf_stream_key(v));
    loop {
        let t = random_poly_below(fd, v.deg(), &mut rng);
        if t.degree().finite().map_or(true, |td| td == 0) {
            continue;
        }
        // t^((q^d - 1)/2) = (t^(1 + q + ... + q^(d-1)))^((q-1)/2): the inner
        // norm-style product keeps every exponent within u64.
        let mut frob = t.clone();
        let mut acc = t.clone();
        for _ in 1..d {
            frob = frob.pow_mod(fd, fd.q, v);
            acc = acc.mul(fd, &frob).rem(fd, v).expect("v nonzero");
        }
        let w = acc.pow_mod(fd, (fd.q - 1) / 2, v);
        let g = w.sub(fd, &Poly::one(fd)).gcd(fd, v);
        if g.deg() != 0 && g.deg() < v.deg() {
            let rest = v.divmod(fd, &g).expect("g nonzero").0;
            equal_degree(fd, &g, d, out);
            equal_degree(fd, &rest, d, out);
            return;
        }
    }
}

/// Full factorization of a monic nonconstant polynomial over odd `q`:
/// `(irreducible, multiplicity)` pairs sorted by degree then canonical index,
/// with `f = prod g^m`. Deterministic.
pub fn factor_monic(fd: &FieldDesc, f: &Poly) -> Vec<(Poly, u32)> {
    debug_assert!(f.is_monic());
    let mut out = Vec::new();
    for (sf, mult) in squarefree_parts(fd, f) {
        for (prod, d) in distinct_degree(fd, &sf) {
            let mut irreds = Vec::new();
            equal_degree(fd, &prod, d, &mut irreds);
            for g in irreds {
                out.push((g, mult));
            }
        }
    }
    out.sort_by_key(|(g, _)| (g.deg(), g.monic_index(fd)));
    out
}
