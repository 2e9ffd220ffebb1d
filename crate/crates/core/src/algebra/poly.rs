//! Dense univariate polynomials over a finite field.
//!
//! Coefficients are stored low degree first with no trailing zeros, so the
//! zero polynomial is the empty vector and `deg` is `len - 1`. All arithmetic
//! goes through a [`FieldDesc`] passed explicitly; polynomials themselves are
//! plain data.

use alloc::vec;
use alloc::vec::Vec;

use super::{AlgebraError, FieldDesc, FieldElem};

/// Degree with the usual convention `deg 0 = -infinity`, ordered below all
/// finite degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<FieldElem>,
}

// Keep Debug readable: just the coefficient reps, low degree first.
impl core::fmt::Debug for Poly {
    fn fmt(&self, fm: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let reps: Vec<u64> = self.c.iter().map(|e| e.rep).collect();
        write!(fm, "Poly{reps:?}")
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one(fd: &FieldDesc) -> Self {
        Poly { c: vec![fd.one()] }
    }

    pub fn x(fd: &FieldDesc) -> Self {
        Poly {
            c: vec![fd.zero(), fd.one()],
        }
    }

    pub fn constant(e: FieldElem) -> Self {
        let mut p = Poly { c: vec![e] };
        p.trim();
        p
    }

    /// Build from low-first coefficients, trimming trailing zeros.
    pub fn from_coeffs(c: Vec<FieldElem>) -> Self {
        let mut p = Poly { c };
        p.trim();
        p
    }

    /// Build from integer reps, low-first.
    pub fn from_reps(fd: &FieldDesc, reps: &[u64]) -> Self {
        Poly::from_coeffs(reps.iter().map(|&r| fd.elem(r)).collect())
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|e| e.rep == 0) {
            self.c.pop();
        }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Degree {
        if self.c.is_empty() {
            Degree::MinusInfinity
        } else {
            Degree::Finite(self.c.len() - 1)
        }
    }

    /// Finite degree, for callers that have excluded zero.
    pub fn deg(&self) -> usize {
        debug_assert!(!self.is_zero());
        self.c.len() - 1
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.c.last().copied()
    }

    pub fn coeff(&self, fd: &FieldDesc, i: usize) -> FieldElem {
        self.c.get(i).copied().unwrap_or_else(|| fd.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|e| e.rep == 1)
    }

    pub fn add(&self, fd: &FieldDesc, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(fd.add(self.coeff(fd, i), other.coeff(fd, i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self, fd: &FieldDesc) -> Poly {
        Poly {
            c: self.c.iter().map(|&e| fd.neg(e)).collect(),
        }
    }

    pub fn sub(&self, fd: &FieldDesc, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(fd.sub(self.coeff(fd, i), other.coeff(fd, i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn mul(&self, fd: &FieldDesc, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![fd.zero(); self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.rep == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = fd.add(out[i + j], fd.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn mul_scalar(&self, fd: &FieldDesc, s: FieldElem) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|&e| fd.mul(e, s)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, fd: &FieldDesc, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![fd.zero(); k];
        out.extend_from_slice(&self.c);
        Poly { c: out }
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    pub fn divmod(&self, fd: &FieldDesc, div: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        if div.is_zero() {
            return Err(AlgebraError::DivideByZero);
        }
        if self.c.len() < div.c.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let dlen = div.c.len();
        let lcinv = fd.inv(*div.c.last().unwrap())?;
        let mut rem = self.c.clone();
        let mut quo = vec![fd.zero(); rem.len() - dlen + 1];
        for i in (dlen - 1..rem.len()).rev() {
            let c = fd.mul(rem[i], lcinv);
            if c.rep == 0 {
                continue;
            }
            quo[i - (dlen - 1)] = c;
            // rem[i] is cleared by construction; skip writing it.
            for (j, &d) in div.c[..dlen - 1].iter().enumerate() {
                let idx = i - (dlen - 1) + j;
                rem[idx] = fd.sub(rem[idx], fd.mul(c, d));
            }
        }
        rem.truncate(dlen - 1);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, fd: &FieldDesc, div: &Poly) -> Result<Poly, AlgebraError> {
        Ok(self.divmod(fd, div)?.1)
    }

    /// Scale to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self, fd: &FieldDesc) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) if lc.rep == 1 => self.clone(),
            Some(lc) => self.mul_scalar(fd, fd.inv(lc).expect("nonzero leading")),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, fd: &FieldDesc, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(fd, &b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic(fd)
    }

    /// Extended gcd: returns monic `g` and `(s, t)` with `s*self + t*other = g`.
    pub fn xgcd(&self, fd: &FieldDesc, other: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Poly::one(fd);
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one(fd);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(fd, &r1).expect("r1 nonzero");
            let s = s0.sub(fd, &q.mul(fd, &s1));
            let t = t0.sub(fd, &q.mul(fd, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if let Some(lc) = r0.leading() {
            if lc.rep != 1 {
                let inv = fd.inv(lc).expect("nonzero leading");
                r0 = r0.mul_scalar(fd, inv);
                s0 = s0.mul_scalar(fd, inv);
                t0 = t0.mul_scalar(fd, inv);
            }
        }
        (r0, s0, t0)
    }

    pub fn eval(&self, fd: &FieldDesc, x: FieldElem) -> FieldElem {
        let mut acc = fd.zero();
        for &c in self.c.iter().rev() {
            acc = fd.add(fd.mul(acc, x), c);
        }
        acc
    }

    pub fn derivative(&self, fd: &FieldDesc) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        let out: Vec<FieldElem> = self.c[1..]
            .iter()
            .enumerate()
            .map(|(i, &e)| fd.mul(fd.from_int(i as u64 + 1), e))
            .collect();
        Poly::from_coeffs(out)
    }

    /// `self^e mod m` by square and multiply; `e` fits u64 (enough for
    /// exponent `q`; larger exponents are assembled from Frobenius steps).
    pub fn pow_mod(&self, fd: &FieldDesc, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(fd, m).expect("modulus nonzero");
        let mut acc = Poly::one(fd).rem(fd, m).expect("modulus nonzero");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(fd, &base).rem(fd, m).expect("modulus nonzero");
            }
            base = base.mul(fd, &base).rem(fd, m).expect("modulus nonzero");
            e >>= 1;
        }
        acc
    }

    /// Canonical index of a monic polynomial of degree `d`: the `d` low
    /// coefficients read as base-`q` digits, `x^{d-1}` most significant.
    /// Index order therefore refines lexicographic order on coefficients
    /// from the top down.
    pub fn monic_index(&self, fd: &FieldDesc) -> u64 {
        debug_assert!(self.is_monic());
        let d = self.deg();
        let mut idx = 0u64;
        for i in (0..d).rev() {
            idx = idx * fd.q + self.coeff(fd, i).rep;
        }
        idx
    }

    /// Inverse of [`Poly::monic_index`] for the given degree.
    pub fn monic_from_index(fd: &FieldDesc, d: usize, mut idx: u64) -> Poly {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(fd.elem(idx % fd.q));
            idx /= fd.q;
        }
        debug_assert_eq!(idx, 0, "index out of range for degree");
        c.push(fd.one());
        Poly { c }
    }
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;

    #[test]
    fn divmod_reconstructs() {
        let fd = make_field(7, 1).unwrap();
        let a = Poly::from_reps(&fd, &[3, 0, 2, 5, 1]);
        let b = Poly::from_reps(&fd, &[4, 1, 6]);
        let (q, r) = a.divmod(&fd, &b).unwrap();
        assert!(r.degree() < b.degree());
        assert_eq!(q.mul(&fd, &b).add(&fd, &r), a);
        assert_eq!(
            a.divmod(&fd, &Poly::zero()).unwrap_err(),
            AlgebraError::DivideByZero
        );
    }

    #[test]
    fn gcd_of_products() {
        let fd = make_field(5, 1).unwrap();
        let p = Poly::from_reps(&fd, &[1, 1]); // x + 1
        let q = Poly::from_reps(&fd, &[2, 1]); // x + 2
        let r = Poly::from_reps(&fd, &[3, 1]); // x + 3
        let a = p.mul(&fd, &q);
        let b = p.mul(&fd, &r);
        assert_eq!(a.gcd(&fd, &b), p);
        // coprime pair
        assert_eq!(q.gcd(&fd, &r), Poly::one(&fd));
    }

    #[test]
    fn xgcd_bezout() {
        let fd = make_field(13, 1).unwrap();
        let a = Poly::from_reps(&fd, &[1, 2, 0, 4, 1]);
        let b = Poly::from_reps(&fd, &[7, 0, 1, 3]);
        let (g, s, t) = a.xgcd(&fd, &b);
        let lhs = s.mul(&fd, &a).add(&fd, &t.mul(&fd, &b));
        assert_eq!(lhs, g);
        assert!(g.is_monic() || g.is_zero());
        assert_eq!(a.rem(&fd, &g).unwrap(), Poly::zero());
        assert_eq!(b.rem(&fd, &g).unwrap(), Poly::zero());
    }

    #[test]
    fn eval_matches_expansion() {
        let fd = make_field(11, 1).unwrap();
        // (x + 3)(x + 7) = x^2 + 10x + 21
        let p = Poly::from_reps(&fd, &[3, 1]).mul(&fd, &Poly::from_reps(&fd, &[7, 1]));
        for x in fd.elements() {
            let direct = fd.mul(fd.add(x, fd.elem(3)), fd.add(x, fd.elem(7)));
            assert_eq!(p.eval(&fd, x), direct);
        }
    }

    #[test]
    fn derivative_in_char_p() {
        let fd = make_field(3, 1).unwrap();
        // d/dx (x^3 + 2x + 1) = 3x^2 + 2 = 2 in char 3
        let p = Poly::from_reps(&fd, &[1, 2, 0, 1]);
        assert_eq!(p.derivative(&fd), Poly::from_reps(&fd, &[2]));
        // x^3 exactly: derivative vanishes
        let c = Poly::from_reps(&fd, &[0, 0, 0, 1]);
        assert_eq!(c.derivative(&fd), Poly::zero());
    }

    #[test]
    fn pow_mod_fermat() {
        let fd = make_field(5, 1).unwrap();
        let m = Poly::from_reps(&fd, &[2, 0, 1]); // x^2 + 2, irreducible over F_5
        let x = Poly::x(&fd);
        // x^(q^2) = x mod m for irreducible m of degree 2
        let xq = x.pow_mod(&fd, 5, &m);
        let xq2 = xq.pow_mod(&fd, 5, &m);
        assert_eq!(xq2, x);
        assert_ne!(xq, x);
    }

    #[test]
    fn monic_index_roundtrip() {
        let fd = make_field(3, 1).unwrap();
        for d in 1..4usize {
            let count = fd.q.pow(d as u32);
            let mut seen = Vec::new();
            for idx in 0..count {
                let p = Poly::monic_from_index(&fd, d, idx);
                assert!(p.is_monic());
                assert_eq!(p.deg(), d);
                assert_eq!(p.monic_index(&fd), idx);
                seen.push(p);
            }
            seen.dedup();
            assert_eq!(seen.len() as u64, count);
        }
        // Index order is lex order on (c_{d-1}, ..., c_0).
        let a = Poly::monic_from_index(&fd, 2, 3); // x^2 + x
        let b = Poly::monic_from_index(&fd, 2, 4); // x^2 + x + 1
        assert_eq!(a.coeff(&fd, 1).rep, 1);
        assert_eq!(a.coeff(&fd, 0).rep, 0);
        assert_eq!(b.coeff(&fd, 1).rep, 1);
        assert_eq!(b.coeff(&fd, 0).rep, 1);
    }
}
