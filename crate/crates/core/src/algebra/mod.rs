//! Arithmetic in small finite fields `F_q`, `q = p^k <= 2^31`.
//!
//! Elements are stored packed in a `u64`: an element `a_0 + a_1*t + ... +
//! a_{k-1}*t^{k-1}` of `F_{p^k}` (with `t` the class of `x` modulo the field
//! modulus) is encoded as the integer `sum a_i p^i`. Encodings are exactly the
//! integers in `[0, q)`, so element enumeration is iteration over reps and the
//! canonical element order is integer order on reps. Prime fields (`k = 1`)
//! take a fast path throughout; modular reduction uses a precomputed Barrett
//! constant rather than hardware division.
//!
//! A field is described by a [`FieldDesc`] and every element carries a
//! [`FieldTag`] identifying its field. Operations go through the descriptor;
//! mixing elements from different fields is a logic error checked by
//! `debug_assert` on the hot paths and reported as a real error by the
//! public checked entry point [`FieldDesc::checked_add`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub mod ext;
pub mod factor;
pub mod poly;
pub mod sieve;
pub mod sqrt;

/// Largest admissible field size; `q^2` must fit in a `u64` with headroom.
pub const MAX_Q: u64 = 1 << 31;

/// Identifies a finite field: the characteristic in the low 40 bits and the
/// extension degree above them. Two descriptors built from the same `(p, k)`
/// produce equal tags (the modulus is deterministic, so this is sound).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldTag(u64);

impl FieldTag {
    fn new(p: u64, k: u32) -> Self {
        FieldTag(p | (u64::from(k) << 40))
    }

    pub fn characteristic(self) -> u64 {
        self.0 & ((1 << 40) - 1)
    }

    pub fn degree(self) -> u32 {
        (self.0 >> 40) as u32
    }
}

impl fmt::Debug for FieldTag {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "F_{{{}^{}}}", self.characteristic(), self.degree())
    }
}

/// An element of the field identified by `tag`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    pub rep: u64,
    pub tag: FieldTag,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}@{:?}", self.rep, self.tag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    /// `p` was not prime.
    CompositeCharacteristic(u64),
    /// `p^k` exceeds the `2^31` cap (or overflows entirely).
    FieldTooLarge { p: u64, k: u32 },
    /// Extension degree 0 makes no sense.
    ZeroDegree,
    /// Operands belong to different fields.
    FieldMismatch { left: FieldTag, right: FieldTag },
    /// Division by zero.
    DivideByZero,
    /// Quadratic-residue queries need odd characteristic.
    EvenCharacteristic,
    /// Embedding requested between incompatible fields.
    NotASubfield { base: FieldTag, ext: FieldTag },
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::CompositeCharacteristic(p) => {
                write!(fm, "CompositeCharacteristic: {p} is not prime")
            }
            AlgebraError::FieldTooLarge { p, k } => {
                write!(fm, "FieldTooLarge: {p}^{k} exceeds 2^31")
            }
            AlgebraError::ZeroDegree => write!(fm, "ZeroDegree: extension degree must be >= 1"),
            AlgebraError::FieldMismatch { left, right } => {
                write!(fm, "FieldMismatch: {left:?} vs {right:?}")
            }
            AlgebraError::DivideByZero => write!(fm, "DivideByZero"),
            AlgebraError::EvenCharacteristic => {
                write!(fm, "EvenCharacteristic: quadratic residues need odd q")
            }
            AlgebraError::NotASubfield { base, ext } => {
                write!(fm, "NotASubfield: {base:?} does not embed in {ext:?}")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for AlgebraError {}

/// Description of `F_{p^k}`: sizes, the Barrett constant for reduction mod
/// `p`, and (for `k > 1`) the digit vector of the monic degree-`k` modulus.
#[derive(Clone, Debug)]
pub struct FieldDesc {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    tag: FieldTag,
    /// floor(2^64 / p); see [`FieldDesc::reduce`].
    barrett: u64,
    /// Coefficients `m_0..m_{k-1}` of the modulus `x^k + sum m_i x^i`,
    /// elements of `F_p`. Empty when `k = 1`.
    modulus_low: Vec<u64>,
}

/// Build `F_{p^k}`. The modulus for `k > 1` is the lexicographically least
/// monic irreducible of degree `k` (coefficients compared from the constant
/// term upward as a base-`p` integer), so the construction is deterministic
/// and two calls agree element-for-element.
pub fn make_field(p: u64, k: u32) -> Result<FieldDesc, AlgebraError> {
    if k == 0 {
        return Err(AlgebraError::ZeroDegree);
    }
    if !is_prime_u64(p) {
        return Err(AlgebraError::CompositeCharacteristic(p));
    }
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.checked_mul(p).ok_or(AlgebraError::FieldTooLarge { p, k })?;
        if q > MAX_Q {
            return Err(AlgebraError::FieldTooLarge { p, k });
        }
    }
    let barrett = ((1u128 << 64) / p as u128) as u64;
    if k == 1 {
        return Ok(FieldDesc {
            p,
            k,
            q,
            tag: FieldTag::new(p, 1),
            barrett,
            modulus_low: Vec::new(),
        });
    }

    // Scan monic degree-k polynomials over F_p in base-p index order for the
    // first irreducible; indices enumerate the k low coefficients.
    let base = make_field(p, 1)?;
    let mut idx: u64 = 0;
    let modulus_low = loop {
        debug_assert!(idx < q, "no irreducible of degree {k} over F_{p}");
        let mut digits = Vec::with_capacity(k as usize + 1);
        let mut r = idx;
        for _ in 0..k {
            digits.push(base.elem(r % p));
            r /= p;
        }
        digits.push(base.one());
        let cand = poly::Poly::from_coeffs(digits);
        if factor::is_irreducible(&base, &cand) {
            break cand.coeffs()[..k as usize]
                .iter()
                .map(|c| c.rep)
                .collect::<Vec<u64>>();
        }
        idx += 1;
    };
    Ok(FieldDesc {
        p,
        k,
        q,
        tag: FieldTag::new(p, k),
        barrett,
        modulus_low,
    })
}

impl FieldDesc {
    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    /// Reduce `a < 2^62` modulo `p` by Barrett multiplication.
    #[inline]
    fn reduce(&self, a: u64) -> u64 {
        debug_assert!(a < 1 << 62);
        let q0 = ((a as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = a - q0 * self.p;
        // barrett underestimates 2^64/p by < 1, so r < 2p here.
        if r >= self.p {
            r -= self.p;
        }
        debug_assert!(r < self.p);
        r
    }

    /// The element encoded by `rep`; `rep` must lie in `[0, q)`.
    #[inline]
    pub fn elem(&self, rep: u64) -> FieldElem {
        debug_assert!(rep < self.q);
        FieldElem { rep, tag: self.tag }
    }

    /// The element with the given integer value reduced mod `p` (prime
    /// fields); for extensions this embeds `n mod p` as a constant.
    pub fn from_int(&self, n: u64) -> FieldElem {
        self.elem(if n < 1 << 62 {
            self.reduce(n)
        } else {
            n % self.p
        })
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    /// All field elements in canonical (integer rep) order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |r| self.elem(r))
    }

    #[inline]
    fn own(&self, a: FieldElem) {
        debug_assert_eq!(a.tag, self.tag, "element from wrong field");
    }

    fn digits(&self, a: FieldElem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut r = a.rep;
        for _ in 0..self.k {
            out.push(r % self.p);
            r /= self.p;
        }
        out
    }

    fn undigits(&self, d: &[u64]) -> FieldElem {
        let mut rep = 0u64;
        for &di in d.iter().rev() {
            rep = rep * self.p + di;
        }
        self.elem(rep)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.own(a);
        self.own(b);
        if self.k == 1 {
            let s = a.rep + b.rep;
            return self.elem(if s >= self.p { s - self.p } else { s });
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            })
            .collect();
        self.undigits(&sum)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.own(a);
        if self.k == 1 {
            return self.elem(if a.rep == 0 { 0 } else { self.p - a.rep });
        }
        let da = self.digits(a);
        let nd: Vec<u64> = da
            .iter()
            .map(|&x| if x == 0 { 0 } else { self.p - x })
            .collect();
        self.undigits(&nd)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.own(a);
        self.own(b);
        if self.k == 1 {
            // p <= 2^31 so the product is < 2^62 and Barrett applies.
            return self.elem(self.reduce(a.rep * b.rep));
        }
        self.mul_ext(a, b)
    }

    fn mul_ext(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        // Column accumulation without intermediate reduction: digits are < p
        // <= 2^16 (since p^2 <= q <= 2^31), so each column is < k*2^32.
        let mut col = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                col[i + j] += x * y;
            }
        }
        for c in col.iter_mut() {
            *c = self.reduce(*c);
        }
        // Fold down using x^k = -(m_0 + ... + m_{k-1} x^{k-1}).
        for i in (k..2 * k - 1).rev() {
            let c = col[i];
            if c == 0 {
                continue;
            }
            col[i] = 0;
            for (j, &m) in self.modulus_low.iter().enumerate() {
                if m != 0 {
                    col[i - k + j] = self.reduce(col[i - k + j] + c * (self.p - m));
                }
            }
        }
        self.undigits(&col[..k])
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        self.own(a);
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, AlgebraError> {
        self.own(a);
        if a.rep == 0 {
            return Err(AlgebraError::DivideByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, AlgebraError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Addition with a real (non-debug) cross-field check; the checked
    /// entry point for callers holding elements of unknown provenance.
    pub fn checked_add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, AlgebraError> {
        if a.tag != self.tag || b.tag != self.tag {
            return Err(AlgebraError::FieldMismatch {
                left: a.tag,
                right: b.tag,
            });
        }
        Ok(self.add(a, b))
    }

    /// Euler criterion. `Ok(true)` iff `a` is a nonzero square; zero is
    /// reported as a square. Requires odd characteristic.
    pub fn is_square(&self, a: FieldElem) -> Result<bool, AlgebraError> {
        if self.p == 2 {
            return Err(AlgebraError::EvenCharacteristic);
        }
        self.own(a);
        if a.rep == 0 {
            return Ok(true);
        }
        Ok(self.pow(a, (self.q - 1) / 2) == self.one())
    }

    /// Quadratic character: 0 on zero, +1 on squares, -1 on nonsquares.
    pub fn chi(&self, a: FieldElem) -> Result<i64, AlgebraError> {
        if a.rep == 0 {
            return Ok(0);
        }
        Ok(if self.is_square(a)? { 1 } else { -1 })
    }

    /// Square root by Tonelli-Shanks, `None` for nonsquares. Odd `q` only.
    pub fn sqrt(&self, a: FieldElem) -> Result<Option<FieldElem>, AlgebraError> {
        if self.p == 2 {
            return Err(AlgebraError::EvenCharacteristic);
        }
        self.own(a);
        if a.rep == 0 {
            return Ok(Some(self.zero()));
        }
        if !self.is_square(a)? {
            return Ok(None);
        }
        // q - 1 = 2^s * t with t odd.
        let mut t = self.q - 1;
        let mut s = 0u32;
        while t & 1 == 0 {
            t >>= 1;
            s += 1;
        }
        if s == 1 {
            // q = 3 mod 4: direct exponent.
            return Ok(Some(self.pow(a, (self.q + 1) / 4)));
        }
        // Any nonsquare serves as the 2-group generator seed; scan reps.
        let n = self
            .elements()
            .find(|&e| e.rep != 0 && !self.is_square(e).unwrap())
            .expect("odd field has a nonsquare");
        let mut c = self.pow(n, t);
        let mut r = self.pow(a, (t + 1) / 2);
        let mut u = self.pow(a, t);
        let mut m = s;
        while u != self.one() {
            let mut v = u;
            let mut i = 0u32;
            while v != self.one() {
                v = self.mul(v, v);
                i += 1;
            }
            debug_assert!(i < m);
            let mut b = c;
            for _ in 0..m - i - 1 {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            u = self.mul(u, c);
            r = self.mul(r, b);
        }
        debug_assert_eq!(self.mul(r, r), a);
        Ok(Some(r))
    }
}

/// Deterministic Miller-Rabin, valid for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == sp {
            return true;
        }
        if n % sp == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        a %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    };
    // This witness set decides primality for all n < 3.3 * 10^24.
    'wit: for &w in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(w, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            make_field(6, 1).unwrap_err(),
            AlgebraError::CompositeCharacteristic(6)
        );
        assert_eq!(make_field(5, 0).unwrap_err(), AlgebraError::ZeroDegree);
        assert!(matches!(
            make_field(3, 21).unwrap_err(),
            AlgebraError::FieldTooLarge { .. }
        ));
        assert!(matches!(
            make_field(2_147_483_659, 1).unwrap_err(),
            AlgebraError::FieldTooLarge { .. }
        ));
    }

    #[test]
    fn prime_field_table_f7() {
        let f = make_field(7, 1).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f.add(f.elem(a), f.elem(b)).rep, (a + b) % 7);
                assert_eq!(f.mul(f.elem(a), f.elem(b)).rep, (a * b) % 7);
                assert_eq!(f.sub(f.elem(a), f.elem(b)).rep, (7 + a - b) % 7);
            }
        }
    }

    #[test]
    fn barrett_handles_large_primes() {
        let p = 2_147_483_647u64; // 2^31 - 1
        let f = make_field(p, 1).unwrap();
        let a = f.elem(p - 1);
        assert_eq!(f.mul(a, a), f.one()); // (-1)^2
        let b = f.elem(1_234_567_890);
        assert_eq!(f.mul(b, f.inv(b).unwrap()), f.one());
    }

    #[test]
    fn field_axioms_f9() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.q, 9);
        // Every nonzero element invertible, multiplication commutative and
        // associative over the whole field.
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(a, b), f.add(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
            if a.rep != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn deterministic_modulus() {
        // x^2 + 1 is the first monic irreducible over F_3 in base-3 index
        // order (index 1 = constant coeff 1, linear coeff 0).
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus_low, vec![1, 0]);
        let g = make_field(3, 2).unwrap();
        assert_eq!(f.modulus_low, g.modulus_low);
        // F_25: x^2 + 2 (indices 0 and 1 give reducible x^2, x^2 + 1 = (x+2)(x+3)).
        let f25 = make_field(5, 2).unwrap();
        assert_eq!(f25.modulus_low, vec![2, 0]);
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        let f = make_field(5, 3).unwrap();
        for r in 0..5 {
            let a = f.elem(r);
            assert_eq!(f.pow(a, 5), a);
        }
        // and x^q = x for every element
        for a in f.elements() {
            assert_eq!(f.pow(a, f.q), a);
        }
    }

    #[test]
    fn square_counts() {
        // Exactly (q-1)/2 nonzero squares in odd characteristic.
        for (p, k) in [(3, 1), (7, 1), (3, 2), (5, 2), (3, 3)] {
            let f = make_field(p, k).unwrap();
            let squares = f
                .elements()
                .filter(|&a| a.rep != 0 && f.is_square(a).unwrap())
                .count() as u64;
            assert_eq!(squares, (f.q - 1) / 2, "q = {}", f.q);
        }
    }

    #[test]
    fn sqrt_roundtrip() {
        for (p, k) in [(3, 1), (5, 1), (13, 1), (17, 1), (3, 2), (5, 2), (7, 2), (3, 4)] {
            let f = make_field(p, k).unwrap();
            for a in f.elements() {
                let sq = f.mul(a, a);
                let r = f.sqrt(sq).unwrap().expect("square has a root");
                assert!(r == a || r == f.neg(a));
                if a.rep != 0 && !f.is_square(a).unwrap() {
                    assert!(f.sqrt(a).unwrap().is_none());
                }
            }
        }
    }

    #[test]
    fn even_characteristic_rejected_for_quadratic_queries() {
        let f = make_field(2, 3).unwrap();
        assert_eq!(
            f.is_square(f.one()).unwrap_err(),
            AlgebraError::EvenCharacteristic
        );
    }

    #[test]
    fn checked_add_reports_mismatch() {
        let f3 = make_field(3, 1).unwrap();
        let f5 = make_field(5, 1).unwrap();
        let err = f3.checked_add(f3.one(), f5.one()).unwrap_err();
        assert!(matches!(err, AlgebraError::FieldMismatch { .. }));
    }

    #[test]
    fn primality_oracle() {
        let primes: Vec<u64> = (2..200).filter(|&n| is_prime_u64(n)).collect();
        let sieve: Vec<u64> = (2u64..200)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(primes, sieve);
        assert!(is_prime_u64(2_147_483_647));
        assert!(!is_prime_u64(2_147_483_649));
    }
}
