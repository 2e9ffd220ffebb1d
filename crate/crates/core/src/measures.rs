//! Measures on the space of rank-2 bundle types over P¹ and their empirical
//! counterparts pushed forward from divisor-class enumeration.
//!
//! A line bundle `L` on a hyperelliptic curve pushes forward to a rank-2
//! bundle `O(-a) ⊕ O(-b)` on P¹; the invariant recorded here is the type
//! `|a - b|`.  The module provides:
//!
//! * [`natural_point_mass`] — the limiting ("natural") measure on types,
//!   with geometric tails `1/(2q^(d-1))`;
//! * [`empirical_single`] — the exact pushforward of normalized counting
//!   measure on `Pic⁰ × {two parities}` under the type map;
//! * [`empirical_pair`] — the joint pushforward of `L ↦ (type L, type M-L)`
//!   for a fixed auxiliary class `M`;
//! * [`theta_intersection_ratio`] — the normalized count of classes lying in
//!   one theta set whose `M`-complement lies in another;
//! * [`tv_distance`] / [`tv_to_natural`] — total-variation diagnostics;
//! * [`discriminant_locus_count`] — exhaustive size of `Θ_r + 2·Θ_s`.
//!
//! All masses are exact rationals; denominators divide `2·#J` (or its square
//! for pair tables), so acceptance identities are bit-exact.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::sieve::PolySieve;
use crate::curve::Curve;
use crate::jacobian::{
    bundle_type, cantor_add, cantor_double, total_u_indices, Census, ClassEnumerator, JacClass,
    JacError,
};

/// Errors for measure construction and experiments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureError {
    /// The requested enumeration exceeds the configured cost ceiling.
    BudgetExceeded,
    /// The auxiliary class degree does not match the required normalization.
    DegreeMismatch,
    /// Group arithmetic failed (propagated).
    Jac(JacError),
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::BudgetExceeded => write!(f, "BudgetExceeded"),
            MeasureError::DegreeMismatch => {
                write!(f, "DegreeMismatch: deg M must equal 2g - a - b")
            }
            MeasureError::Jac(e) => write!(f, "{e}"),
        }
    }
}

impl From<JacError> for MeasureError {
    fn from(e: JacError) -> Self {
        MeasureError::Jac(e)
    }
}

fn rat(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

// ---------------------------------------------------------------------------
// The natural measure
// ---------------------------------------------------------------------------

/// Mass of the single type `d` under the natural measure at field size `q`:
/// `(1 - 1/q)/2` for `d = 0` and `(1 - 1/q²)/(2q^(d-1))` for `d ≥ 1`.
///
/// These telescope against the tails [`natural_tail_mass`]; the measure has
/// total mass 1 and gives each parity class mass exactly 1/2.
pub fn natural_point_mass(q: u64, d: usize) -> BigRational {
    let qr = rat(q, 1);
    let half = rat(1, 2);
    if d == 0 {
        (BigRational::one() - qr.recip()) * half
    } else {
        let q2 = &qr * &qr;
        (BigRational::one() - q2.recip()) * half / qr.pow(d as i32 - 1)
    }
}

/// Tail mass `μ({d, d+2, d+4, …}) = 1/(2q^(d-1))` for `d ≥ 1`.
pub fn natural_tail_mass(q: u64, d: usize) -> BigRational {
    debug_assert!(d >= 1);
    rat(1, 2) / rat(q, 1).pow(d as i32 - 1)
}

// ---------------------------------------------------------------------------
// Measure tables
// ---------------------------------------------------------------------------

/// A finitely supported measure with exact rational masses, keyed by a
/// bundle type or a pair of them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MeasureTable<K: Ord> {
    masses: BTreeMap<K, BigRational>,
    total: BigRational,
}

impl<K: Ord + Clone> MeasureTable<K> {
    pub fn new() -> Self {
        MeasureTable {
            masses: BTreeMap::new(),
            total: BigRational::zero(),
        }
    }

    /// Deposit nonnegative mass at a key.
    pub fn add_mass(&mut self, key: K, mass: BigRational) {
        debug_assert!(!mass.is_negative());
        self.total += &mass;
        let slot = self.masses.entry(key).or_insert_with(BigRational::zero);
        *slot += mass;
    }

    /// Mass at one key (zero off the support).
    pub fn mass(&self, key: &K) -> BigRational {
        self.masses.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> &BigRational {
        &self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigRational)> {
        self.masses.iter()
    }

    pub fn support_len(&self) -> usize {
        self.masses.len()
    }

    /// Associative merge (sum of measures); partition-independent folding
    /// for worker splits.
    pub fn merge(&mut self, other: MeasureTable<K>) {
        for (k, m) in other.masses {
            self.total += &m;
            let slot = self.masses.entry(k).or_insert_with(BigRational::zero);
            *slot += m;
        }
    }
}

/// Total variation distance `(1/2)·Σ_k |t1(k) - t2(k)|` over the union of
/// supports.
pub fn tv_distance<K: Ord + Clone>(t1: &MeasureTable<K>, t2: &MeasureTable<K>) -> BigRational {
    let mut keys: BTreeSet<&K> = t1.masses.keys().collect();
    keys.extend(t2.masses.keys());
    let mut acc = BigRational::zero();
    for k in keys {
        acc += (t1.mass(k) - t2.mass(k)).abs();
    }
    acc / rat(2, 1)
}

/// Total variation distance from a type table to the natural measure at
/// field size `q`, truncated at types `d ≤ g + 3` with the remaining natural
/// tail lumped into one comparison cell.  (Empirical support never exceeds
/// `g + 1`, so the cutoff loses nothing on the empirical side.)
pub fn tv_to_natural(table: &MeasureTable<u64>, q: u64, g: usize) -> BigRational {
    let cutoff = (g + 3) as u64;
    let mut acc = BigRational::zero();
    for d in 0..=cutoff {
        acc += (table.mass(&d) - natural_point_mass(q, d as usize)).abs();
    }
    let emp_beyond: BigRational = table
        .masses
        .iter()
        .filter(|(k, _)| **k > cutoff)
        .map(|(_, m)| m.clone())
        .sum();
    let nat_beyond =
        natural_tail_mass(q, cutoff as usize + 1) + natural_tail_mass(q, cutoff as usize + 2);
    acc += (emp_beyond - nat_beyond).abs();
    acc / rat(2, 1)
}

/// Mass of `{d, d+2, d+4, …}` (the same-parity tail from `d` upward).
pub fn parity_tail_mass(table: &MeasureTable<u64>, d: u64) -> BigRational {
    table
        .masses
        .iter()
        .filter(|(k, _)| **k >= d && (**k - d) % 2 == 0)
        .map(|(_, m)| m.clone())
        .sum()
}

// ---------------------------------------------------------------------------
// Empirical single-type measure
// ---------------------------------------------------------------------------

/// Assemble the single-type table from a class census: a class of reduced
/// degree `d` contributes mass `1/(2·total)` at the type of its `(g-1)`-shift
/// and the same at its `(g-2)`-shift (the two parity components).  The type
/// depends on the class only through `d`, so the census carries everything.
pub fn single_from_census(g: usize, census: &Census) -> MeasureTable<u64> {
    let mut table = MeasureTable::new();
    let den = 2 * census.total;
    for (d, &count) in census.by_degree.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let mass = rat(count, den);
        table.add_mass(bundle_type(g, d, g as i64 - 1), mass.clone());
        table.add_mass(bundle_type(g, d, g as i64 - 2), mass);
    }
    table
}

/// Census restricted to classes whose `u`-index lies in `[lo, hi)`; disjoint
/// ranges partition the group, and censuses merge by vector addition.
pub fn census_range(
    curve: &Curve,
    sieve: &PolySieve,
    lo: u64,
    hi: u64,
) -> Result<Census, MeasureError> {
    let mut by_degree = alloc::vec![0u64; curve.genus() + 1];
    for c in ClassEnumerator::over_range(curve, sieve, lo, hi)? {
        by_degree[c.degree()] += 1;
    }
    Ok(Census {
        total: by_degree.iter().sum(),
        by_degree,
    })
}

/// Exact pushforward of normalized counting measure on
/// `Pic⁰ × {deg g-1, deg g-2}` under the bundle-type map: one enumeration
/// pass, mass `1/(2·#J)` per (class, parity).  Total mass is exactly 1.
pub fn empirical_single(
    curve: &Curve,
    sieve: &PolySieve,
) -> Result<MeasureTable<u64>, MeasureError> {
    let total = total_u_indices(curve.field().q, curve.genus());
    let census = census_range(curve, sieve, 0, total)?;
    Ok(single_from_census(curve.genus(), &census))
}

// ---------------------------------------------------------------------------
// Empirical pair measure
// ---------------------------------------------------------------------------

/// Integer-count accumulator for the pair experiment; exact masses are
/// produced only at finalization so the per-class work stays in `u64`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairCounts {
    counts: BTreeMap<(u64, u64), u64>,
    classes: u64,
}

impl PairCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn classes(&self) -> u64 {
        self.classes
    }

    /// Associative merge for worker splits.
    pub fn merge(&mut self, other: PairCounts) {
        self.classes += other.classes;
        for (k, n) in other.counts {
            *self.counts.entry(k).or_insert(0) += n;
        }
    }

    /// Convert counts to exact masses with denominator `2·classes`.
    pub fn finalize(&self) -> MeasureTable<(u64, u64)> {
        let mut table = MeasureTable::new();
        let den = 2 * self.classes;
        for (&k, &n) in &self.counts {
            table.add_mass(k, rat(n, den));
        }
        table
    }
}

/// Pair counts over the classes with `u`-index in `[lo, hi)`: for each class
/// `c` compute `diff = M - c` with a single group addition, then record the
/// type pair for both parities of `deg L` (`L = c + n_L·∞` with
/// `n_L ∈ {g-1, g-2}`, so `deg(M - L) = m_deg - n_L`).
pub fn pair_counts_range(
    curve: &Curve,
    sieve: &PolySieve,
    m: &JacClass,
    m_deg: i64,
    lo: u64,
    hi: u64,
) -> Result<PairCounts, MeasureError> {
    let g = curve.genus();
    let mut acc = PairCounts::new();
    for c in ClassEnumerator::over_range(curve, sieve, lo, hi)? {
        let diff = cantor_add(curve, m, &c.negate(curve))?;
        let d1 = c.degree();
        let d2 = diff.degree();
        for n_l in [g as i64 - 1, g as i64 - 2] {
            let key = (bundle_type(g, d1, n_l), bundle_type(g, d2, m_deg - n_l));
            *acc.counts.entry(key).or_insert(0) += 1;
        }
        acc.classes += 1;
    }
    Ok(acc)
}

/// Exact joint pushforward of `L ↦ (type L, type M-L)` over both parity
/// components, with mass `1/(2·#J)` per (class, parity).  Total mass 1; the
/// marginals reproduce [`empirical_single`] exactly.
pub fn empirical_pair(
    curve: &Curve,
    sieve: &PolySieve,
    m: &JacClass,
    m_deg: i64,
) -> Result<MeasureTable<(u64, u64)>, MeasureError> {
    let total = total_u_indices(curve.field().q, curve.genus());
    Ok(pair_counts_range(curve, sieve, m, m_deg, 0, total)?.finalize())
}

// ---------------------------------------------------------------------------
// Theta intersection ratio
// ---------------------------------------------------------------------------

/// Hits and class totals for [`theta_intersection_ratio`] over a `u`-index
/// range: a hit is a class `c` with `deg_red(c) ≤ g-a` and
/// `deg_red(M - c) ≤ g-b`.
pub fn theta_hits_range(
    curve: &Curve,
    sieve: &PolySieve,
    m: &JacClass,
    a: usize,
    b: usize,
    lo: u64,
    hi: u64,
) -> Result<(u64, u64), MeasureError> {
    let g = curve.genus();
    let mut hits = 0u64;
    let mut classes = 0u64;
    for c in ClassEnumerator::over_range(curve, sieve, lo, hi)? {
        classes += 1;
        if c.degree() + a > g {
            continue;
        }
        let diff = cantor_add(curve, m, &c.negate(curve))?;
        if diff.degree() + b <= g {
            hits += 1;
        }
    }
    Ok((hits, classes))
}

/// `#(Θ_(g-a) ∩ (M - Θ_(g-b))) / #J`: the normalized number of degree-`g-a`
/// classes `L` with an effective representative whose complement `M - L`
/// (of degree `g-b`) also has one.  Requires the normalization
/// `deg M = 2g - a - b`, under which membership is exactly the reduced-degree
/// condition `deg_red ≤ g-a` (resp. `≤ g-b`) on the `Pic⁰` parts.
pub fn theta_intersection_ratio(
    curve: &Curve,
    sieve: &PolySieve,
    m: &JacClass,
    m_deg: i64,
    a: usize,
    b: usize,
) -> Result<BigRational, MeasureError> {
    let g = curve.genus();
    if m_deg != 2 * g as i64 - a as i64 - b as i64 {
        return Err(MeasureError::DegreeMismatch);
    }
    let total = total_u_indices(curve.field().q, g);
    let (hits, classes) = theta_hits_range(curve, sieve, m, a, b, 0, total)?;
    Ok(rat(hits, classes))
}

// ---------------------------------------------------------------------------
// Discriminant locus
// ---------------------------------------------------------------------------

/// Exhaustive size of the sumset `Θ_r + 2·Θ_s ⊂ Pic⁰`: the number of
/// distinct classes `x + 2y` with `deg_red(x) ≤ r` and `deg_red(y) ≤ s`.
/// Cost is `#Θ_r · #Θ_s` group operations, so the budget is capped at
/// `g ≤ 3, q ≤ 5`.
pub fn discriminant_locus_count(
    curve: &Curve,
    sieve: &PolySieve,
    r: usize,
    s: usize,
) -> Result<u64, MeasureError> {
    let g = curve.genus();
    let q = curve.field().q;
    if g > 3 || q > 5 {
        return Err(MeasureError::BudgetExceeded);
    }
    let fd = curve.field();
    let all: Vec<JacClass> = ClassEnumerator::new(curve, sieve)?.collect();
    let xs: Vec<&JacClass> = all.iter().filter(|c| c.degree() <= r).collect();
    let mut seen = BTreeSet::new();
    for y in all.iter().filter(|c| c.degree() <= s) {
        let y2 = cantor_double(curve, y)?;
        for x in &xs {
            seen.insert(cantor_add(curve, x, &y2)?.sort_index(fd));
        }
    }
    Ok(seen.len() as u64)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::algebra::poly::Poly;
    use crate::divisors::h0_class_by_counting;
    use crate::jacobian::enumerate_classes_brute;

    fn curve(p: u64, coeffs: &[u64]) -> Curve {
        let fd = make_field(p, 1).unwrap();
        let f = Poly::from_reps(&fd, coeffs);
        Curve::new(fd, f).unwrap()
    }

    fn sieve_for(c: &Curve, depth: usize) -> PolySieve {
        PolySieve::build(c.field(), depth)
    }

    #[test]
    fn natural_masses_examples_and_telescoping() {
        assert_eq!(natural_point_mass(5, 0), rat(2, 5));
        assert_eq!(natural_tail_mass(5, 3), rat(1, 50));
        for q in [3u64, 5, 53] {
            // point masses telescope against the tails
            for d in 1..8 {
                assert_eq!(
                    natural_point_mass(q, d),
                    natural_tail_mass(q, d) - natural_tail_mass(q, d + 2)
                );
            }
            // partial sum + two residual tails = 1, any cut position
            for cut in 1..6usize {
                let mut acc: BigRational = (0..=cut).map(|d| natural_point_mass(q, d)).sum();
                acc += natural_tail_mass(q, cut + 1) + natural_tail_mass(q, cut + 2);
                assert!(acc.is_one(), "q={q} cut={cut}");
            }
            // each parity carries mass exactly 1/2
            let mut odd = natural_tail_mass(q, 1);
            let mut even = natural_point_mass(q, 0) + natural_tail_mass(q, 2);
            assert!(odd.is_one() == false && even == rat(1, 2) && odd == rat(1, 2), "q={q}");
            odd += BigRational::zero();
            even += BigRational::zero();
        }
    }

    #[test]
    fn elliptic_single_table_exact() {
        // y² = x³ + x over F_5: #J = 4 (Klein four), only the identity has a
        // section in degree 0, so types split {0: 3/8, 2: 1/8} on the even
        // component and all of {1: 1/2} on the odd one.
        let c = curve(5, &[0, 1, 0, 1]);
        let sv = sieve_for(&c, 1);
        let table = empirical_single(&c, &sv).unwrap();
        assert_eq!(table.mass(&0), rat(3, 8));
        assert_eq!(table.mass(&1), rat(1, 2));
        assert_eq!(table.mass(&2), rat(1, 8));
        assert!(table.total().is_one());
        assert_eq!(table.support_len(), 3);
    }

    #[test]
    fn single_total_and_odd_mass_and_denominators() {
        for (p, coeffs) in [
            (3u64, &[1, 2, 0, 0, 1, 1][..]), // g = 2
            (3, &[2, 2, 1, 0, 0, 0, 0, 1]),  // g = 3
            (5, &[1, 1, 0, 0, 0, 1]),        // g = 2
        ] {
            let c = curve(p, coeffs);
            let sv = sieve_for(&c, c.genus());
            let table = empirical_single(&c, &sv).unwrap();
            assert!(table.total().is_one());
            // odd types carry exactly half the mass (the curve has a point)
            let odd: BigRational = table
                .iter()
                .filter(|(k, _)| *k % 2 == 1)
                .map(|(_, m)| m.clone())
                .sum();
            assert_eq!(odd, rat(1, 2));
            // denominators divide 2·#J
            let census = census_range(&c, &sv, 0, total_u_indices(c.field().q, c.genus())).unwrap();
            let den = BigInt::from(2 * census.total);
            for (_, m) in table.iter() {
                assert!((m * BigRational::from_integer(den.clone())).is_integer());
            }
        }
    }

    #[test]
    fn single_census_route_matches_per_class_fold() {
        let c = curve(3, &[1, 2, 0, 0, 1, 1]);
        let sv = sieve_for(&c, 2);
        let table = empirical_single(&c, &sv).unwrap();
        // literal definition: one deposit per (class, parity) over the brute
        // enumeration
        let g = c.genus();
        let classes = enumerate_classes_brute(&c);
        let mut lit = MeasureTable::new();
        for cl in &classes {
            let mass = rat(1, 2 * classes.len() as u64);
            lit.add_mass(bundle_type(g, cl.degree(), g as i64 - 1), mass.clone());
            lit.add_mass(bundle_type(g, cl.degree(), g as i64 - 2), mass);
        }
        assert_eq!(table, lit);
    }

    #[test]
    fn bridge_identity_even_tails_match_theta_counts() {
        for (p, coeffs) in [
            (3u64, &[1, 2, 0, 0, 1, 1][..]),
            (3, &[2, 2, 1, 0, 0, 0, 0, 1]),
            (5, &[1, 1, 0, 0, 0, 1]),
        ] {
            let mut c = curve(p, coeffs);
            let g = c.genus();
            let sv = sieve_for(&c, g);
            let table = empirical_single(&c, &sv).unwrap();
            let hj = c.class_number(Some(&sv)).unwrap();
            let two_hj = BigRational::from_integer(2 * hj);
            let mut d = 2usize;
            while d <= g + 1 {
                let lhs = parity_tail_mass(&table, d as u64);
                let theta = c.theta_count((g + 1 - d) as u32, Some(&sv)).unwrap();
                assert_eq!(
                    lhs,
                    BigRational::from_integer(theta) / two_hj.clone(),
                    "p={p} g={g} d={d}"
                );
                d += 2;
            }
        }
    }

    /// Normalize a shift to the parity representative in `{g-1, g-2}`.
    fn norm_shift(g: usize, n: i64) -> i64 {
        let target = g as i64 - 1;
        if (n - target).rem_euclid(2) == 0 {
            target
        } else {
            target - 1
        }
    }

    /// Bundle type computed through the section-counting oracle rather than
    /// the closed form.
    fn type_via_counting(c: &Curve, sv: &PolySieve, cls: &JacClass, n: i64) -> u64 {
        let g = c.genus();
        let n0 = norm_shift(g, n);
        let h = h0_class_by_counting(c, sv, cls, n0).unwrap();
        if n0 == g as i64 - 1 {
            2 * h
        } else {
            2 * h + 1
        }
    }

    #[test]
    fn pair_table_matches_brute_force_oracle() {
        let c = curve(3, &[1, 2, 0, 0, 1, 1]);
        let g = c.genus();
        let sv = sieve_for(&c, 2);
        let classes = enumerate_classes_brute(&c);
        // one even-degree and one odd-degree auxiliary class M
        for (mi, m_deg) in [(3usize, 2i64), (5, 3)] {
            let m = &classes[mi % classes.len()];
            let table = empirical_pair(&c, &sv, m, m_deg).unwrap();
            assert!(table.total().is_one());

            let mut brute = MeasureTable::new();
            for cl in &classes {
                let diff = cantor_add(&c, m, &cl.negate(&c)).unwrap();
                let mass = rat(1, 2 * classes.len() as u64);
                for n_l in [g as i64 - 1, g as i64 - 2] {
                    let key = (
                        type_via_counting(&c, &sv, cl, n_l),
                        type_via_counting(&c, &sv, &diff, m_deg - n_l),
                    );
                    brute.add_mass(key, mass.clone());
                }
            }
            assert_eq!(table, brute, "m_deg={m_deg}");
        }
    }

    #[test]
    fn pair_marginals_and_parity_law() {
        for (p, coeffs) in [(3u64, &[1, 2, 0, 0, 1, 1][..]), (5, &[1, 1, 0, 0, 0, 1])] {
            let c = curve(p, coeffs);
            let sv = sieve_for(&c, c.genus());
            let single = empirical_single(&c, &sv).unwrap();
            let classes: Vec<JacClass> = ClassEnumerator::new(&c, &sv).unwrap().collect();
            for (mi, m_deg) in [(1usize, 4i64), (2, 1), (4, 0), (0, 3)] {
                let m = &classes[mi % classes.len()];
                let table = empirical_pair(&c, &sv, m, m_deg).unwrap();
                assert!(table.total().is_one());
                // both marginals reproduce the single-type table
                let mut first = MeasureTable::new();
                let mut second = MeasureTable::new();
                for (&(t1, t2), mass) in table.iter() {
                    first.add_mass(t1, mass.clone());
                    second.add_mass(t2, mass.clone());
                }
                assert_eq!(first, single, "first marginal p={p} m_deg={m_deg}");
                assert_eq!(second, single, "second marginal p={p} m_deg={m_deg}");
                // parity law: deg M even → (even,even) ∪ (odd,odd);
                // deg M odd → mixed parities only
                for (&(t1, t2), mass) in table.iter() {
                    if mass.is_zero() {
                        continue;
                    }
                    let same = t1 % 2 == t2 % 2;
                    assert_eq!(
                        same,
                        m_deg % 2 == 0,
                        "parity p={p} m_deg={m_deg} pair=({t1},{t2})"
                    );
                }
            }
        }
    }

    #[test]
    fn theta_ratio_full_and_counting_cross_check() {
        let c = curve(3, &[1, 2, 0, 0, 1, 1]);
        let g = c.genus();
        let sv = sieve_for(&c, 2);
        let classes: Vec<JacClass> = ClassEnumerator::new(&c, &sv).unwrap().collect();
        let m = &classes[5 % classes.len()];

        // a = b = 0 at deg M = 2g: every class hits, ratio = 1
        let full = theta_intersection_ratio(&c, &sv, m, 2 * g as i64, 0, 0).unwrap();
        assert!(full.is_one());

        // degree mismatch is rejected by name
        let err = theta_intersection_ratio(&c, &sv, m, 2 * g as i64, 1, 0).unwrap_err();
        assert_eq!(err, MeasureError::DegreeMismatch);

        // cross-check small (a, b) against section-counting membership:
        // c ∈ Θ_(g-a) iff h⁰(c + (g-a)∞) > 0, same for the complement
        for (a, b) in [(1usize, 0usize), (0, 1), (1, 1), (2, 0)] {
            let m_deg = 2 * g as i64 - a as i64 - b as i64;
            let ratio = theta_intersection_ratio(&c, &sv, m, m_deg, a, b).unwrap();
            let mut hits = 0u64;
            for cl in &classes {
                let in_first = h0_class_by_counting(&c, &sv, cl, (g - a) as i64).unwrap() > 0;
                if !in_first {
                    continue;
                }
                let diff = cantor_add(&c, m, &cl.negate(&c)).unwrap();
                if h0_class_by_counting(&c, &sv, &diff, (g - b) as i64).unwrap() > 0 {
                    hits += 1;
                }
            }
            assert_eq!(ratio, rat(hits, classes.len() as u64), "a={a} b={b}");
        }
    }

    #[test]
    fn tv_metric_axioms_and_natural_distance() {
        let c5 = curve(5, &[0, 1, 0, 1]);
        let sv5 = sieve_for(&c5, 1);
        let t_ell = empirical_single(&c5, &sv5).unwrap();
        assert!(tv_distance(&t_ell, &t_ell).is_zero());

        let c3 = curve(3, &[1, 2, 0, 0, 1, 1]);
        let sv3 = sieve_for(&c3, 2);
        let t_g2 = empirical_single(&c3, &sv3).unwrap();
        let d12 = tv_distance(&t_ell, &t_g2);
        assert_eq!(d12, tv_distance(&t_g2, &t_ell));

        let c32 = curve(3, &[2, 2, 1, 0, 0, 0, 0, 1]);
        let sv32 = sieve_for(&c32, 3);
        let t_g3 = empirical_single(&c32, &sv32).unwrap();
        let d13 = tv_distance(&t_ell, &t_g3);
        let d23 = tv_distance(&t_g2, &t_g3);
        assert!(d13 <= &d12 + &d23, "triangle inequality");
        assert!(!d13.is_negative() && !d23.is_negative());

        // frozen exact value: elliptic table vs natural measure at q = 5,
        // cutoff g + 3 = 4 with lumped tail
        assert_eq!(tv_to_natural(&t_ell, 5, 1), BigRational::new(49.into(), 1000.into()));
    }

    #[test]
    fn discriminant_locus_counts() {
        let mut c = curve(3, &[1, 2, 0, 0, 1, 1]);
        let g = c.genus();
        let sv = sieve_for(&c, g);
        // r = s = 0: identity only
        assert_eq!(discriminant_locus_count(&c, &sv, 0, 0).unwrap(), 1);
        // r = g, s = 0: all of Θ_g, which is the whole group
        let full = discriminant_locus_count(&c, &sv, g, 0).unwrap();
        let theta_g = c.theta_count(g as u32, Some(&sv)).unwrap();
        assert_eq!(BigInt::from(full), theta_g);
        assert_eq!(BigInt::from(full), c.class_number(Some(&sv)).unwrap());
        // monotone in each argument
        let mut prev = 0;
        for r in 0..=g {
            let n = discriminant_locus_count(&c, &sv, r, 0).unwrap();
            assert!(n >= prev);
            prev = n;
        }
        let base = discriminant_locus_count(&c, &sv, 1, 0).unwrap();
        assert!(discriminant_locus_count(&c, &sv, 1, 1).unwrap() >= base);
        // budget guard: q too large
        let cbig = curve(7, &[2, 1, 0, 0, 0, 1]);
        let svb = sieve_for(&cbig, 2);
        assert_eq!(
            discriminant_locus_count(&cbig, &svb, 0, 0).unwrap_err(),
            MeasureError::BudgetExceeded
        );
    }

    #[test]
    fn measure_table_merge_is_partition_independent() {
        let c = curve(3, &[1, 2, 0, 0, 1, 1]);
        let sv = sieve_for(&c, 2);
        let classes: Vec<JacClass> = ClassEnumerator::new(&c, &sv).unwrap().collect();
        let m = &classes[2];
        let m_deg = 3i64;
        let total = total_u_indices(c.field().q, c.genus());
        let whole = pair_counts_range(&c, &sv, m, m_deg, 0, total).unwrap();
        // split at several cut points, merge in both orders
        for cut in [1u64, total / 3, total / 2, total - 1] {
            let lo = pair_counts_range(&c, &sv, m, m_deg, 0, cut).unwrap();
            let hi = pair_counts_range(&c, &sv, m, m_deg, cut, total).unwrap();
            // counts merge associatively in either order, and only the
            // merged counts are finalized (denominators are global)
            let mut ab = lo.clone();
            ab.merge(hi.clone());
            assert_eq!(ab, whole);
            let mut ba = hi;
            ba.merge(lo);
            assert_eq!(ba.finalize(), whole.finalize());
        }
    }
}
