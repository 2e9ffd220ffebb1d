//! A sieve of least irreducible factors over the monic polynomials of
//! bounded degree, plus the per-degree irreducible lists it yields.
//!
//! Built once per field, the sieve factors any monic polynomial of degree
//! `<= max_deg` by repeated table lookups and exact divisions, which is what
//! makes full divisor-class enumerations (millions of candidate `u`) and
//! place-indexed point counts affordable. Construction marks every composite
//! with its least factor by walking irreducibles in ascending `(degree,
//! index)` order, exactly like the integer sieve it is named after.

use alloc::vec;
use alloc::vec::Vec;

use super::poly::Poly;
use super::{FieldDesc, FieldTag};

const NO_FACTOR: u32 = u32::MAX;

pub struct PolySieve {
    tag: FieldTag,
    max_deg: usize,
    /// `base[d]` = global code of the first degree-`d` monic; codes pack
    /// `(degree, index)` into one u32.
    base: Vec<u32>,
    /// Per degree `d` (1-based), the least-factor code of each monic by
    /// index, `NO_FACTOR` for irreducibles.
    lpf: Vec<Vec<u32>>,
    /// Per degree `d`, ascending indices of the irreducible monics.
    irred: Vec<Vec<u32>>,
}

impl PolySieve {
    /// Sieve all monic polynomials of degree `1..=max_deg`. Requires
    /// `q^max_deg` to fit comfortably in a `u32` table.
    pub fn build(fd: &FieldDesc, max_deg: usize) -> PolySieve {
        assert!(max_deg >= 1);
        let q = fd.q;
        let mut total: u64 = 0;
        let mut base = vec![0u32; max_deg + 2];
        for d in 1..=max_deg {
            base[d] = total as u32;
            total += q.pow(d as u32);
            assert!(total < NO_FACTOR as u64, "sieve table too large");
        }
        base[max_deg + 1] = total as u32;

        let mut lpf: Vec<Vec<u32>> = Vec::with_capacity(max_deg + 1);
        lpf.push(Vec::new()); // degree 0 unused
        for d in 1..=max_deg {
            lpf.push(vec![NO_FACTOR; q.pow(d as u32) as usize]);
        }
        let mut irred: Vec<Vec<u32>> = vec![Vec::new(); max_deg + 1];

        for dd in 1..=max_deg {
            for j in 0..q.pow(dd as u32) {
                if lpf[dd][j as usize] != NO_FACTOR {
                    continue; // marked composite
                }
                irred[dd].push(j as u32);
                let code = base[dd] + j as u32;
                if 2 * dd > max_deg {
                    continue; // no multiple fits in the table
                }
                let p = Poly::monic_from_index(fd, dd, j);
                for dm in 1..=max_deg - dd {
                    for jm in 0..q.pow(dm as u32) {
                        let m = Poly::monic_from_index(fd, dm, jm);
                        let prod = p.mul(fd, &m);
                        let slot = &mut lpf[dd + dm][prod.monic_index(fd) as usize];
                        if *slot == NO_FACTOR {
                            *slot = code;
                        }
                    }
                }
            }
        }
        PolySieve {
            tag: fd.tag(),
            max_deg,
            base,
            lpf,
            irred,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.max_deg
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    /// Ascending indices of the monic irreducibles of degree `d`.
    pub fn irreducibles(&self, d: usize) -> &[u32] {
        &self.irred[d]
    }

    pub fn is_irreducible_index(&self, d: usize, idx: u64) -> bool {
        self.lpf[d][idx as usize] == NO_FACTOR
    }

    fn decode(&self, code: u32) -> (usize, u64) {
        let mut d = 1;
        while self.base[d + 1] <= code {
            d += 1;
        }
        (d, u64::from(code - self.base[d]))
    }

    /// Factor a monic polynomial of degree `1..=max_deg` into
    /// `(irreducible, multiplicity)` pairs, ascending by `(degree, index)`.
    /// Equivalent to the general factoring routine, but a handful of lookups.
    pub fn factor(&self, fd: &FieldDesc, f: &Poly) -> Vec<(Poly, u32)> {
        debug_assert!(f.is_monic());
        debug_assert_eq!(fd.tag(), self.tag);
        debug_assert!(f.deg() <= self.max_deg);
        let mut out: Vec<(Poly, u32)> = Vec::new();
        let mut cur = f.clone();
        while cur.deg() > 0 {
            let d = cur.deg();
            let code = self.lpf[d][cur.monic_index(fd) as usize];
            let p = if code == NO_FACTOR {
                cur.clone()
            } else {
                let (pd, pj) = self.decode(code);
                Poly::monic_from_index(fd, pd, pj)
            };
            let (quot, rem) = cur.divmod(fd, &p).expect("factor nonzero");
            debug_assert!(rem.is_zero());
            // Least factors repeat consecutively, so run-length grouping
            // keeps the output sorted.
            match out.last_mut() {
                Some((last, m)) if *last == p => *m += 1,
                _ => out.push((p, 1)),
            }
            cur = quot;
        }
        out
    }
}
