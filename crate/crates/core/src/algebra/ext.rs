//! Subfield embeddings `F_{p^k} -> F_{p^{km}}` and root finding.
//!
//! Both fields are built independently with their own deterministic moduli,
//! so the embedding is computed, not structural: the class `t` generating the
//! small field is sent to the least root `rho` of the small modulus inside
//! the big field, and elements follow by linearity. "Least" is by integer
//! rep, which makes the embedding itself deterministic.

use alloc::vec::Vec;

use super::factor::factor_monic;
use super::poly::Poly;
use super::{AlgebraError, FieldDesc, FieldElem, FieldTag};

/// All roots of `f` in the field, ascending by rep. Brute force is avoided:
/// the linear factors of `f` are read off its factorization.
pub fn roots_in(fd: &FieldDesc, f: &Poly) -> Vec<FieldElem> {
    if f.is_zero() {
        // Convention: the zero polynomial has every root; callers never ask.
        return fd.elements().collect();
    }
    let monic = f.monic(fd);
    if monic.deg() == 0 {
        return Vec::new();
    }
    let mut roots: Vec<FieldElem> = factor_monic(fd, &monic)
        .into_iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| fd.neg(g.coeff(fd, 0)))
        .collect();
    roots.sort();
    roots
}

/// An embedding of `base` into `ext`, precomputed as the powers of the image
/// of the base field generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    base_tag: FieldTag,
    ext_tag: FieldTag,
    base_p: u64,
    /// rho^i for i < k_base, elements of the extension.
    pow: Vec<FieldElem>,
}

impl Embedding {
    pub fn new(base: &FieldDesc, ext: &FieldDesc) -> Result<Embedding, AlgebraError> {
        if base.p != ext.p || ext.k % base.k != 0 {
            return Err(AlgebraError::NotASubfield {
                base: base.tag(),
                ext: ext.tag(),
            });
        }
        let k = base.k as usize;
        let mut pow = Vec::with_capacity(k);
        pow.push(ext.one());
        if k > 1 {
            let rho = if base.tag() == ext.tag() {
                // Same field: use the canonical generator so the embedding is
                // the identity map, not a conjugate automorphism.
                ext.elem(base.p)
            } else {
                // Base modulus, coefficients viewed as prime-field constants
                // of the extension (reps < p encode the same constants
                // everywhere).
                let mut c: Vec<FieldElem> = base
                    .modulus_coeffs()
                    .iter()
                    .map(|&r| ext.elem(r))
                    .collect();
                c.push(ext.one());
                let modulus = Poly::from_coeffs(c);
                let roots = roots_in(ext, &modulus);
                *roots.first().expect("k divides ext degree, so the modulus splits")
            };
            for i in 1..k {
                pow.push(ext.mul(pow[i - 1], rho));
            }
        }
        Ok(Embedding {
            base_tag: base.tag(),
            ext_tag: ext.tag(),
            base_p: base.p,
            pow,
        })
    }

    pub fn base_tag(&self) -> FieldTag {
        self.base_tag
    }

    pub fn ext_tag(&self) -> FieldTag {
        self.ext_tag
    }

    /// Image of a base-field element.
    pub fn embed(&self, ext: &FieldDesc, a: FieldElem) -> FieldElem {
        debug_assert_eq!(a.tag, self.base_tag);
        debug_assert_eq!(ext.tag(), self.ext_tag);
        let mut acc = ext.zero();
        let mut rep = a.rep;
        for &pw in &self.pow {
            let digit = rep % self.base_p;
            rep /= self.base_p;
            if digit != 0 {
                acc = ext.add(acc, ext.mul(ext.elem(digit), pw));
            }
        }
        acc
    }

    /// Coefficient-wise image of a base-field polynomial.
    pub fn embed_poly(&self, ext: &FieldDesc, f: &Poly) -> Poly {
        Poly::from_coeffs(f.coeffs().iter().map(|&c| self.embed(ext, c)).collect())
    }
}

impl FieldDesc {
    /// Low coefficients of the field modulus (empty for prime fields);
    /// exposed for embedding construction and for reporting.
    pub fn modulus_coeffs(&self) -> &[u64] {
        &self.modulus_low
    }
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;

    #[test]
    fn roots_of_split_polynomial() {
        let fd = make_field(7, 1).unwrap();
        // (x-2)(x-5)^2 has roots {2, 5}
        let f = Poly::from_reps(&fd, &[5, 1])
            .mul(&fd, &Poly::from_reps(&fd, &[2, 1]))
            .mul(&fd, &Poly::from_reps(&fd, &[2, 1]));
        let r = roots_in(&fd, &f);
        assert_eq!(r, alloc::vec![fd.elem(2), fd.elem(5)]);
        // irreducible quadratic: no roots
        assert!(roots_in(&fd, &Poly::from_reps(&fd, &[1, 0, 1])).is_empty());
    }

    #[test]
    fn embedding_is_a_ring_hom() {
        let base = make_field(3, 2).unwrap();
        let ext = make_field(3, 4).unwrap();
        let emb = Embedding::new(&base, &ext).unwrap();
        for a in base.elements() {
            for b in base.elements() {
                assert_eq!(
                    emb.embed(&ext, base.add(a, b)),
                    ext.add(emb.embed(&ext, a), emb.embed(&ext, b))
                );
                assert_eq!(
                    emb.embed(&ext, base.mul(a, b)),
                    ext.mul(emb.embed(&ext, a), emb.embed(&ext, b))
                );
            }
        }
        assert_eq!(emb.embed(&ext, base.one()), ext.one());
    }

    #[test]
    fn embedding_is_injective_and_lands_in_fixed_field() {
        let base = make_field(5, 1).unwrap();
        let ext = make_field(5, 2).unwrap();
        let emb = Embedding::new(&base, &ext).unwrap();
        let mut images: Vec<u64> = base.elements().map(|a| emb.embed(&ext, a).rep).collect();
        images.sort_unstable();
        images.dedup();
        assert_eq!(images.len() as u64, base.q);
        // Image elements are fixed by x -> x^(q_base).
        for a in base.elements() {
            let im = emb.embed(&ext, a);
            assert_eq!(ext.pow(im, base.q), im);
        }
    }

    #[test]
    fn incompatible_fields_rejected() {
        let f9 = make_field(3, 2).unwrap();
        let f27 = make_field(3, 3).unwrap();
        assert!(matches!(
            Embedding::new(&f9, &f27).unwrap_err(),
            AlgebraError::NotASubfield { .. }
        ));
        let f5 = make_field(5, 1).unwrap();
        assert!(matches!(
            Embedding::new(&f5, &f27).unwrap_err(),
            AlgebraError::NotASubfield { .. }
        ));
    }

    #[test]
    fn same_field_embedding_is_identity() {
        for (p, k) in [(3u64, 2u32), (5, 1), (7, 3)] {
            let fd = make_field(p, k).unwrap();
            let emb = Embedding::new(&fd, &fd).unwrap();
            for a in fd.elements() {
                assert_eq!(emb.embed(&fd, a), a);
            }
        }
    }

    #[test]
    fn embedding_deterministic() {
        let base = make_field(3, 2).unwrap();
        let ext = make_field(3, 4).unwrap();
        let e1 = Embedding::new(&base, &ext).unwrap();
        let e2 = Embedding::new(&base, &ext).unwrap();
        for a in base.elements() {
            assert_eq!(e1.embed(&ext, a), e2.embed(&ext, a));
        }
    }
}
