//! Square roots in residue fields `F_q[x]/(m)` and Hensel lifting of roots
//! to prime-power moduli.
//!
//! The residue field can have order far beyond `u64` (`q^deg m`), so the
//! Tonelli-Shanks exponents are big integers; the quadratic character itself
//! is cheaper, going through the norm to `F_q` so every exponent stays in
//! `u64`.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::poly::Poly;
use super::{AlgebraError, FieldDesc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SqrtError {
    /// The element is not a square in its residue field.
    NotASquare,
    /// Hensel lifting hit a root not coprime to the modulus (`p` divides
    /// `2v`), which cannot be refined.
    RamifiedLift,
    Algebra(AlgebraError),
}

impl core::fmt::Display for SqrtError {
    fn fmt(&self, fm: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SqrtError::NotASquare => write!(fm, "NotASquare"),
            SqrtError::RamifiedLift => write!(fm, "RamifiedLift"),
            SqrtError::Algebra(e) => write!(fm, "{e}"),
        }
    }
}

impl From<AlgebraError> for SqrtError {
    fn from(e: AlgebraError) -> Self {
        SqrtError::Algebra(e)
    }
}

/// `base^e mod m` with a big-integer exponent.
pub fn pow_mod_big(fd: &FieldDesc, base: &Poly, e: &BigUint, m: &Poly) -> Poly {
    let mut acc = Poly::one(fd).rem(fd, m).expect("modulus nonzero");
    let mut sq = base.rem(fd, m).expect("modulus nonzero");
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = acc.mul(fd, &sq).rem(fd, m).expect("modulus nonzero");
        }
        if i + 1 < e.bits() {
            sq = sq.mul(fd, &sq).rem(fd, m).expect("modulus nonzero");
        }
    }
    acc
}

/// Quadratic character of `a` in `F_q[x]/(m)`, `m` irreducible, odd `q`:
/// `0` if `m | a`, else `+1`/`-1`. Uses `chi(a) = chi_{F_q}(Norm(a))`, with
/// the norm computed by a Frobenius product, so no exponent exceeds `q`.
pub fn residue_chi(fd: &FieldDesc, a: &Poly, m: &Poly) -> Result<i32, AlgebraError> {
    if fd.p == 2 {
        return Err(AlgebraError::EvenCharacteristic);
    }
    let a = a.rem(fd, m)?;
    if a.is_zero() {
        return Ok(0);
    }
    let d = m.deg();
    // norm = a^(1 + q + ... + q^(d-1))
    let mut frob = a.clone();
    let mut norm = a.clone();
    for _ in 1..d {
        frob = frob.pow_mod(fd, fd.q, m);
        norm = norm.mul(fd, &frob).rem(fd, m).expect("modulus nonzero");
    }
    debug_assert_eq!(norm.degree().finite(), Some(0), "norm lands in F_q");
    Ok(if fd.is_square(norm.coeff(fd, 0))? { 1 } else { -1 })
}

/// Canonical square root of `a` in `F_q[x]/(m)`: of the two roots `±v`, the
/// one with the lexicographically smaller coefficient vector (compared from
/// the constant term up, by rep). `m` must be irreducible and `q` odd.
pub fn residue_sqrt(fd: &FieldDesc, a: &Poly, m: &Poly) -> Result<Poly, SqrtError> {
    let a = a.rem(fd, m).map_err(SqrtError::from)?;
    if a.is_zero() {
        return Ok(Poly::zero());
    }
    match residue_chi(fd, &a, m)? {
        -1 => return Err(SqrtError::NotASquare),
        1 => {}
        _ => unreachable!("zero handled above"),
    }
    let d = m.deg() as u32;
    let qq = BigUint::from(fd.q).pow(d);
    let one = BigUint::one();
    // qq - 1 = 2^s * t
    let mut t = &qq - &one;
    let mut s = 0u64;
    while !t.bit(0) {
        t >>= 1;
        s += 1;
    }
    let root = if s == 1 {
        // residue order 3 mod 4
        pow_mod_big(fd, &a, &((&qq + &one) >> 2), m)
    } else {
        // Smallest nonresidue by scanning x + c, then constants are covered
        // by c scanning the whole prime field image; x + c for growing c is
        // guaranteed to hit a nonresidue since residues are half the field.
        let mut n = None;
        let mut c = 0u64;
        while n.is_none() {
            let cand = Poly::from_coeffs(alloc::vec![fd.elem(c % fd.q), fd.one()]);
            if residue_chi(fd, &cand, m)? == -1 {
                n = Some(cand);
            }
            c += 1;
            debug_assert!(c <= 2 * fd.q, "nonresidue scan must terminate");
        }
        let n = n.unwrap();
        let mut cc = pow_mod_big(fd, &n, &t, m);
        let mut r = pow_mod_big(fd, &a, &((&t + &one) >> 1), m);
        let mut u = pow_mod_big(fd, &a, &t, m);
        let mut mm = s;
        let one_p = Poly::one(fd);
        while u != one_p {
            let mut v = u.clone();
            let mut i = 0u64;
            while v != one_p {
                v = v.mul(fd, &v).rem(fd, m).expect("modulus nonzero");
                i += 1;
            }
            debug_assert!(i < mm);
            let mut b = cc.clone();
            for _ in 0..mm - i - 1 {
                b = b.mul(fd, &b).rem(fd, m).expect("modulus nonzero");
            }
            mm = i;
            cc = b.mul(fd, &b).rem(fd, m).expect("modulus nonzero");
            u = u.mul(fd, &cc).rem(fd, m).expect("modulus nonzero");
            r = r.mul(fd, &b).rem(fd, m).expect("modulus nonzero");
        }
        r
    };
    debug_assert_eq!(
        root.mul(fd, &root).rem(fd, m).expect("modulus nonzero"),
        a
    );
    Ok(canonical_of_pair(fd, root, m))
}

/// The smaller of `v` and `-v` by low-first coefficient reps.
fn canonical_of_pair(fd: &FieldDesc, v: Poly, m: &Poly) -> Poly {
    let neg = v.neg(fd).rem(fd, m).expect("modulus nonzero");
    let key = |p: &Poly| -> Vec<u64> { p.coeffs().iter().map(|e| e.rep).collect() };
    if key(&neg) < key(&v) {
        neg
    } else {
        v
    }
}

/// Newton-lift a square root: given `v` with `v^2 = f mod p`, returns `V`
/// with `V^2 = f mod p^e`. Fails with `RamifiedLift` when `p | v` (then `v`
/// is not a unit direction and no refinement exists). Odd `q`.
pub fn hensel_lift(
    fd: &FieldDesc,
    f: &Poly,
    p: &Poly,
    v: &Poly,
    e: u32,
) -> Result<Poly, SqrtError> {
    debug_assert!(e >= 1);
    let mut cur = v.rem(fd, p).map_err(SqrtError::from)?;
    debug_assert!(
        cur.mul(fd, &cur).sub(fd, f).rem(fd, p).unwrap().is_zero(),
        "v is a root mod p"
    );
    let mut prec = 1u32;
    while prec < e {
        prec = (2 * prec).min(e);
        let mut modulus = Poly::one(fd);
        for _ in 0..prec {
            modulus = modulus.mul(fd, p);
        }
        // v' = (v^2 + f) / (2v) mod p^prec
        let two_v = cur.add(fd, &cur);
        let (g, inv, _) = two_v.xgcd(fd, &modulus);
        if g.deg() != 0 {
            return Err(SqrtError::RamifiedLift);
        }
        let num = cur.mul(fd, &cur).add(fd, f);
        cur = num
            .mul(fd, &inv)
            .rem(fd, &modulus)
            .expect("modulus nonzero");
    }
    Ok(cur)
}
