//! Subcommand implementations.  Each command returns the full report as one
//! `String`; the caller decides whether it goes to stdout or a file.  Worker
//! parallelism only ever splits the `u`-index range into chunks whose partial
//! results are merged by commutative sums, so the emitted bytes never depend
//! on `--workers`.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use bun2_core::algebra::poly::Poly;
use bun2_core::algebra::sieve::PolySieve;
use bun2_core::algebra::{is_prime_u64, make_field};
use bun2_core::charclass::{bound_audit, chi_general_fiber, polar_coeff, AuditReport};
use bun2_core::curve::{Curve, CurveError};
use bun2_core::divisors::{canonical_decomposition, extend, tangent_dim, tangent_dim_via_h0};
use bun2_core::jacobian::{total_u_indices, Census, ClassEnumerator, JacClass};
use bun2_core::measures::{
    census_range, natural_point_mass, pair_counts_range, single_from_census, theta_hits_range,
    tv_to_natural, MeasureTable, PairCounts,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::formats::{
    class_literal, csv_row, curve_id, divisor_literal, parse_class_literal,
    parse_divisor_literal, parse_range_spec, rational_f64, rational_str, CliError, CurveSpec,
    CSV_HEADER,
};

// ---------------------------------------------------------------------------
// Shared run context and helpers
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    /// Human-oriented default; picks the natural shape per command.
    Text,
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Global flags every subcommand sees.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub budget: u64,
    pub workers: usize,
    pub format: Format,
}

fn json_doc(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// Refuse any full-group enumeration larger than the configured budget.
fn check_budget(curve: &Curve, budget: u64) -> Result<u64, CliError> {
    let total = total_u_indices(curve.field().q, curve.genus());
    if total > budget {
        return Err(CliError::budget(format!(
            "BudgetExceeded: enumeration needs {total} u-indices, budget is {budget}"
        )));
    }
    Ok(total)
}

/// Cost of building the polynomial sieve to `depth`: all monic polynomials
/// of degree up to `depth`.
fn sieve_cost(q: u64, depth: usize) -> u128 {
    let mut c: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..=depth {
        c = c.saturating_add(pw);
        pw = pw.saturating_mul(q as u128);
    }
    c
}

fn build_sieve(curve: &Curve, depth: usize, budget: u64) -> Result<PolySieve, CliError> {
    let q = curve.field().q;
    if sieve_cost(q, depth) > budget as u128 {
        return Err(CliError::budget(format!(
            "BudgetExceeded: sieve of depth {depth} over F_{q} needs {} polynomials, budget is {budget}",
            sieve_cost(q, depth)
        )));
    }
    Ok(PolySieve::build(curve.field(), depth))
}

/// Deterministic split of `[0, total)` into chunk ranges.  The chunk count
/// depends only on `total` (never on `--workers`), so partial results merge
/// into the same bytes at any parallelism.
fn chunk_ranges(total: u64) -> Vec<(u64, u64)> {
    const TARGET: u64 = 1 << 16;
    if total == 0 {
        return vec![(0, 0)];
    }
    let n = (total / TARGET).clamp(1, 1024);
    let base = total / n;
    let rem = total % n;
    let mut out = Vec::with_capacity(n as usize);
    let mut lo = 0u64;
    for i in 0..n {
        let len = base + u64::from(i < rem);
        out.push((lo, lo + len));
        lo += len;
    }
    out
}

/// Run `job` over every chunk of `[0, total)`, in parallel when
/// `workers > 1`, returning partial results in chunk order.
fn run_chunks<T, F>(workers: usize, total: u64, job: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(u64, u64) -> Result<T, CliError> + Sync,
{
    let chunks = chunk_ranges(total);
    if workers <= 1 {
        let mut out = Vec::with_capacity(chunks.len());
        for (lo, hi) in chunks {
            out.push(job(lo, hi)?);
        }
        return Ok(out);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError {
            code: 1,
            msg: format!("threads: {e}"),
        })?;
    pool.install(|| {
        chunks
            .par_iter()
            .map(|&(lo, hi)| job(lo, hi))
            .collect::<Result<Vec<_>, _>>()
    })
}

fn parallel_census(
    curve: &Curve,
    sieve: &PolySieve,
    workers: usize,
    total: u64,
) -> Result<Census, CliError> {
    let parts = run_chunks(workers, total, |lo, hi| {
        census_range(curve, sieve, lo, hi).map_err(CliError::from)
    })?;
    let g = curve.genus();
    let mut merged = Census {
        total: 0,
        by_degree: vec![0; g + 1],
    };
    for p in parts {
        merged.total += p.total;
        for (d, c) in p.by_degree.iter().enumerate() {
            merged.by_degree[d] += c;
        }
    }
    Ok(merged)
}

// ---------------------------------------------------------------------------
// Seeded randomness
// ---------------------------------------------------------------------------

/// Uniform draw from `0..n` by masked rejection; exact, no modulo bias.
fn uniform_below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    debug_assert!(n > 0);
    if n == 1 {
        return 0;
    }
    let mask = u64::MAX >> (n - 1).leading_zeros();
    loop {
        let x = rng.next_u64() & mask;
        if x < n {
            return x;
        }
    }
}

/// Factor `q` as `p^k` with `p` prime, or `None`.
pub fn split_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = q;
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    // p is now the smallest prime factor of q (or q itself when prime).
    if !is_prime_u64(p) {
        return None;
    }
    let mut rest = q;
    let mut k = 0u32;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest == 1 {
        Some((p, k))
    } else {
        None
    }
}

/// Uniform monic squarefree `f` of degree `2·genus + 1` over `F_q` by
/// rejection: resample the whole coefficient block until squarefree, so the
/// accepted draw is uniform on the squarefree stratum.  Deterministic per
/// `(q, genus, seed)`.
pub fn random_curve(q: u64, genus: usize, seed: u64) -> Result<(CurveSpec, Curve), CliError> {
    if genus < 1 {
        return Err(CliError::validation("GenusRange: genus must be at least 1"));
    }
    let (p, k) = split_prime_power(q)
        .ok_or_else(|| CliError::validation(format!("NotPrimePower: q = {q}")))?;
    if p == 2 {
        return Err(CliError::validation(
            "EvenCharacteristic: the model y^2 = f(x) needs odd q",
        ));
    }
    let fd = make_field(p, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deg = 2 * genus + 1;
    loop {
        let mut reps: Vec<u64> = (0..deg).map(|_| uniform_below(&mut rng, q)).collect();
        reps.push(1);
        let f = Poly::from_reps(&fd, &reps);
        match Curve::new(fd.clone(), f) {
            Ok(curve) => return Ok((CurveSpec { p, k, f: reps }, curve)),
            Err(CurveError::NotSquarefree) => continue,
            Err(e) => return Err(e.into()),
        }
    }
}

/// Uniform class from one enumeration pass (reservoir of size one),
/// optionally restricted to a fixed reduced degree.  Deterministic per seed.
pub fn reservoir_class(
    curve: &Curve,
    sieve: &PolySieve,
    seed: u64,
    want_deg: Option<usize>,
) -> Result<JacClass, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = 0u64;
    let mut pick: Option<JacClass> = None;
    for c in ClassEnumerator::new(curve, sieve)? {
        if let Some(d) = want_deg {
            if c.degree() != d {
                continue;
            }
        }
        seen += 1;
        if uniform_below(&mut rng, seen) == 0 {
            pick = Some(c);
        }
    }
    pick.ok_or_else(|| {
        CliError::validation("EmptyReservoir: no class matches the requested degree")
    })
}

// ---------------------------------------------------------------------------
// Natural pair measure and its total-variation distance
// ---------------------------------------------------------------------------

/// Limit mass of the pair `(type L, type M−L)` at `(t1, t2)`: the bundle
/// types are independent in the limit, each natural, conditioned on the
/// parity constraint `t1 + t2 ≡ deg M (mod 2)`; the conditioning doubles
/// the product mass on the allowed parity class.
pub fn natural_pair_mass(q: u64, m_deg: i64, t1: u64, t2: u64) -> BigRational {
    if ((t1 + t2) as i64 - m_deg).rem_euclid(2) != 0 {
        return BigRational::zero();
    }
    natural_point_mass(q, t1 as usize)
        * natural_point_mass(q, t2 as usize)
        * BigRational::from_integer(BigInt::from(2))
}

/// Exact total variation between an empirical pair table and the natural
/// pair law, truncated on a `(g+3)²` grid; empirical types never exceed
/// `g + 1`, so only natural tail mass lives outside the grid and it is
/// lumped into one term.
pub fn tv_pair_to_natural(
    table: &MeasureTable<(u64, u64)>,
    q: u64,
    g: usize,
    m_deg: i64,
) -> BigRational {
    let cutoff = (g + 3) as u64;
    let mut acc = BigRational::zero();
    let mut nat_grid = BigRational::zero();
    let mut emp_grid = BigRational::zero();
    for t1 in 0..=cutoff {
        for t2 in 0..=cutoff {
            let nat = natural_pair_mass(q, m_deg, t1, t2);
            let emp = table.mass(&(t1, t2));
            acc += (emp.clone() - nat.clone()).abs();
            nat_grid += nat;
            emp_grid += emp;
        }
    }
    let one = BigRational::one();
    acc += ((one.clone() - emp_grid) - (one - nat_grid)).abs();
    acc / BigRational::from_integer(BigInt::from(2))
}

/// `e`-invariant of a class of declared twist degree `n` whose reduced
/// representative has degree `d`: `⌊(n − d)/2⌋`.
fn e_of(m_deg: i64, reduced_deg: usize) -> i64 {
    (m_deg - reduced_deg as i64).div_euclid(2)
}

// ---------------------------------------------------------------------------
// zeta
// ---------------------------------------------------------------------------

pub fn cmd_zeta(ctx: &Ctx, spec_path: &Path, max_n: Option<u32>) -> Result<String, CliError> {
    let spec = CurveSpec::load(spec_path)?;
    let mut curve = spec.build()?;
    let g = curve.genus();
    let top = max_n.unwrap_or(g as u32);
    let sieve = build_sieve(&curve, (top as usize).max(g), ctx.budget)?;
    let pnum = curve.zeta_numerator(Some(&sieve))?;
    let hj = curve.class_number(Some(&sieve))?;
    let mut theta = Vec::with_capacity(top as usize + 1);
    for n in 0..=top {
        theta.push(curve.theta_count(n, Some(&sieve))?);
    }
    let id = curve_id(&curve);
    let fd = curve.field();
    let p_strs: Vec<String> = pnum.iter().map(|c| c.to_string()).collect();
    match ctx.format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "curve = {id}");
            let _ = writeln!(
                out,
                "q = {}; p = {}; k = {}; genus = {g}",
                fd.q, fd.p, fd.k
            );
            let _ = writeln!(out, "P = [{}]; #J = {hj}", p_strs.join(", "));
            for (n, t) in theta.iter().enumerate() {
                let _ = writeln!(out, "theta[{n}] = {t}");
            }
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::from("field,value\n");
            let _ = writeln!(out, "curve_id,{id}");
            let _ = writeln!(out, "q,{}", fd.q);
            let _ = writeln!(out, "p,{}", fd.p);
            let _ = writeln!(out, "k,{}", fd.k);
            let _ = writeln!(out, "genus,{g}");
            let _ = writeln!(out, "P,{}", p_strs.join("|"));
            let _ = writeln!(out, "class_number,{hj}");
            for (n, t) in theta.iter().enumerate() {
                let _ = writeln!(out, "theta{n},{t}");
            }
            Ok(out)
        }
        Format::Json => {
            let theta_strs: Vec<Value> =
                theta.iter().map(|t| Value::from(t.to_string())).collect();
            Ok(json_doc(&json!({
                "curve_id": id,
                "q": fd.q,
                "p": fd.p,
                "k": fd.k,
                "genus": g,
                "P": p_strs,
                "class_number": hj.to_string(),
                "theta": theta_strs,
            })))
        }
    }
}

// ---------------------------------------------------------------------------
// randcurve
// ---------------------------------------------------------------------------

pub fn cmd_randcurve(ctx: &Ctx, q: u64, genus: usize) -> Result<String, CliError> {
    let (spec, curve) = random_curve(q, genus, ctx.seed)?;
    // The output doubles as a curve spec file: `p`, `k`, `f` are exactly the
    // loadable fields, the rest are echoes.
    Ok(json_doc(&json!({
        "p": spec.p,
        "k": spec.k,
        "f": spec.f,
        "q": q,
        "genus": curve.genus(),
        "curve_id": curve_id(&curve),
        "seed": ctx.seed,
    })))
}

// ---------------------------------------------------------------------------
// jacobian-enumerate
// ---------------------------------------------------------------------------

/// Full listings are capped harder than censuses: every class becomes an
/// output line, so the report itself is the cost.
const LISTING_CAP: u64 = 5_000_000;

pub fn cmd_jacobian_enumerate(
    ctx: &Ctx,
    spec_path: &Path,
    census_only: bool,
    limit: Option<u64>,
) -> Result<String, CliError> {
    let spec = CurveSpec::load(spec_path)?;
    let mut curve = spec.build()?;
    let total = check_budget(&curve, ctx.budget)?;
    let g = curve.genus();
    let sieve = build_sieve(&curve, g, ctx.budget)?;
    let id = curve_id(&curve);
    if census_only {
        let census = parallel_census(&curve, &sieve, ctx.workers, total)?;
        let hj = curve.class_number(Some(&sieve))?;
        return Ok(match ctx.format {
            Format::Json => json_doc(&json!({
                "curve_id": id,
                "q": curve.field().q,
                "genus": g,
                "total": census.total,
                "by_degree": census.by_degree,
                "class_number": hj.to_string(),
            })),
            _ => {
                let mut out = String::from("deg,count\n");
                for (d, c) in census.by_degree.iter().enumerate() {
                    let _ = writeln!(out, "{d},{c}");
                }
                let _ = writeln!(out, "total,{}", census.total);
                let _ = writeln!(out, "class_number,{hj}");
                out
            }
        });
    }
    let cap = limit.unwrap_or(LISTING_CAP);
    if limit.is_none() && total > LISTING_CAP {
        return Err(CliError::budget(format!(
            "BudgetExceeded: listing {total} classes exceeds the listing cap {LISTING_CAP}; use --census or --limit"
        )));
    }
    // Listing streams the canonical enumeration order, so it is sequential
    // by construction; parallelism only serves the census path.
    let mut lits: Vec<String> = Vec::new();
    for c in ClassEnumerator::new(&curve, &sieve)? {
        if (lits.len() as u64) >= cap {
            break;
        }
        lits.push(class_literal(&c));
    }
    Ok(match ctx.format {
        Format::Json => json_doc(&json!({
            "curve_id": id,
            "count": lits.len(),
            "classes": lits,
        })),
        _ => {
            let mut out = String::new();
            for l in &lits {
                let _ = writeln!(out, "{l}");
            }
            out
        }
    })
}

// ---------------------------------------------------------------------------
// equid-single
// ---------------------------------------------------------------------------

fn single_report(
    ctx: &Ctx,
    curve: &Curve,
    sieve: &PolySieve,
    total: u64,
    class_number: &BigInt,
) -> Result<String, CliError> {
    let g = curve.genus();
    let q = curve.field().q;
    let census = parallel_census(curve, sieve, ctx.workers, total)?;
    let table = single_from_census(g, &census);
    let tv = tv_to_natural(&table, q, g);
    let id = curve_id(curve);
    let types: Vec<u64> = (0..=(g as u64 + 1)).collect();
    match ctx.format {
        Format::Json => {
            let mut masses = Map::new();
            let mut natural = Map::new();
            for &t in &types {
                masses.insert(t.to_string(), Value::from(rational_str(&table.mass(&t))));
                natural.insert(
                    t.to_string(),
                    Value::from(rational_str(&natural_point_mass(q, t as usize))),
                );
            }
            Ok(json_doc(&json!({
                "q": q,
                "genus": g,
                "curve_id": id,
                "seed": ctx.seed,
                "class_number": class_number.to_string(),
                "enumerated": census.total,
                "masses": masses,
                "natural": natural,
                "tv_to_natural": rational_str(&tv),
                "tv_float": rational_f64(&tv),
            })))
        }
        _ => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for &t in &types {
                csv_row(
                    &mut out,
                    q,
                    g,
                    &id,
                    ctx.seed,
                    "single",
                    &t.to_string(),
                    &table.mass(&t),
                    &natural_point_mass(q, t as usize),
                );
            }
            // Summary row: the exact tv distance in the empirical columns.
            csv_row(
                &mut out,
                q,
                g,
                &id,
                ctx.seed,
                "single-tv",
                "tv",
                &tv,
                &BigRational::zero(),
            );
            Ok(out)
        }
    }
}

pub fn cmd_equid_single(
    ctx: &Ctx,
    spec_path: Option<&Path>,
    q_opt: Option<u64>,
    ladder: Option<&str>,
) -> Result<String, CliError> {
    match (spec_path, ladder) {
        (Some(path), None) => {
            let spec = CurveSpec::load(path)?;
            let mut curve = spec.build()?;
            let total = check_budget(&curve, ctx.budget)?;
            let sieve = build_sieve(&curve, curve.genus(), ctx.budget)?;
            let hj = curve.class_number(Some(&sieve))?;
            single_report(ctx, &curve, &sieve, total, &hj)
        }
        (None, Some(range)) => {
            let q = q_opt.ok_or_else(|| {
                CliError::validation("ArgumentMissing: --q is required with --genus-ladder")
            })?;
            let (lo, hi) = parse_range_spec(range)?;
            if lo < 1 {
                return Err(CliError::validation("GenusRange: genus must be at least 1"));
            }
            let mut series: Vec<(usize, String, BigRational)> = Vec::new();
            for g in lo..=hi {
                // One fresh curve per rung, seeded reproducibly.
                let (_, mut curve) = random_curve(q, g as usize, ctx.seed + g)?;
                let total = check_budget(&curve, ctx.budget)?;
                let sieve = build_sieve(&curve, curve.genus(), ctx.budget)?;
                let _ = curve.class_number(Some(&sieve))?;
                let census = parallel_census(&curve, &sieve, ctx.workers, total)?;
                let table = single_from_census(curve.genus(), &census);
                let tv = tv_to_natural(&table, q, curve.genus());
                series.push((g as usize, curve_id(&curve), tv));
            }
            match ctx.format {
                Format::Json => {
                    let rows: Vec<Value> = series
                        .iter()
                        .map(|(g, id, tv)| {
                            json!({
                                "genus": g,
                                "curve_id": id,
                                "tv": rational_str(tv),
                                "tv_float": rational_f64(tv),
                            })
                        })
                        .collect();
                    Ok(json_doc(&json!({
                        "q": q,
                        "seed": ctx.seed,
                        "series": rows,
                    })))
                }
                _ => {
                    let mut out = String::from(CSV_HEADER);
                    out.push('\n');
                    for (g, id, tv) in &series {
                        csv_row(
                            &mut out,
                            q,
                            *g,
                            id,
                            ctx.seed,
                            "ladder-tv",
                            "tv",
                            tv,
                            &BigRational::zero(),
                        );
                    }
                    Ok(out)
                }
            }
        }
        _ => Err(CliError::validation(
            "ArgumentConflict: pass exactly one of --curve or --genus-ladder",
        )),
    }
}

// ---------------------------------------------------------------------------
// equid-pair
// ---------------------------------------------------------------------------

pub fn cmd_equid_pair(
    ctx: &Ctx,
    spec_path: &Path,
    m_literal: Option<&str>,
    m_deg_opt: Option<i64>,
    random_m: bool,
) -> Result<String, CliError> {
    let spec = CurveSpec::load(spec_path)?;
    let curve = spec.build()?;
    let total = check_budget(&curve, ctx.budget)?;
    let g = curve.genus();
    let q = curve.field().q;
    let sieve = build_sieve(&curve, g, ctx.budget)?;
    let m = match (m_literal, random_m) {
        (Some(lit), false) => parse_class_literal(&curve, lit)?,
        (None, true) => reservoir_class(&curve, &sieve, ctx.seed, None)?,
        _ => {
            return Err(CliError::validation(
                "ArgumentConflict: pass exactly one of --m or --random-m",
            ))
        }
    };
    let m_deg = m_deg_opt.unwrap_or(2 * g as i64 - 2);
    let e_m = e_of(m_deg, m.degree());
    let m_lit = class_literal(&m);
    let parts = run_chunks(ctx.workers, total, |lo, hi| {
        pair_counts_range(&curve, &sieve, &m, m_deg, lo, hi).map_err(CliError::from)
    })?;
    let mut counts = PairCounts::new();
    for p in parts {
        counts.merge(p);
    }
    let classes = counts.classes();
    let table = counts.finalize();
    let tv = tv_pair_to_natural(&table, q, g, m_deg);
    let id = curve_id(&curve);
    match ctx.format {
        Format::Json => {
            let mut masses = Map::new();
            let mut natural = Map::new();
            for ((t1, t2), mass) in table.iter() {
                let key = format!("{t1}|{t2}");
                masses.insert(key.clone(), Value::from(rational_str(mass)));
                natural.insert(
                    key,
                    Value::from(rational_str(&natural_pair_mass(q, m_deg, *t1, *t2))),
                );
            }
            Ok(json_doc(&json!({
                "q": q,
                "genus": g,
                "curve_id": id,
                "seed": ctx.seed,
                "m": m_lit,
                "deg_m": m_deg,
                "e_m": e_m,
                "classes": classes,
                "masses": masses,
                "natural": natural,
                "tv_to_natural_product": rational_str(&tv),
                "tv_float": rational_f64(&tv),
            })))
        }
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "# m={m_lit} deg_m={m_deg} e_m={e_m}");
            out.push_str(CSV_HEADER);
            out.push('\n');
            for ((t1, t2), mass) in table.iter() {
                csv_row(
                    &mut out,
                    q,
                    g,
                    &id,
                    ctx.seed,
                    "pair",
                    &format!("{t1}|{t2}"),
                    mass,
                    &natural_pair_mass(q, m_deg, *t1, *t2),
                );
            }
            csv_row(
                &mut out,
                q,
                g,
                &id,
                ctx.seed,
                "pair-tv",
                "tv",
                &tv,
                &BigRational::zero(),
            );
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// theta-ratio
// ---------------------------------------------------------------------------

pub fn cmd_theta_ratio(
    ctx: &Ctx,
    spec_path: &Path,
    a: usize,
    b: usize,
    m_literal: Option<&str>,
    random_m: bool,
) -> Result<String, CliError> {
    let spec = CurveSpec::load(spec_path)?;
    let curve = spec.build()?;
    let total = check_budget(&curve, ctx.budget)?;
    let g = curve.genus();
    let q = curve.field().q;
    if a > g || b > g {
        return Err(CliError::validation(format!(
            "DomainError: theta shifts need a <= genus and b <= genus (a = {a}, b = {b}, genus = {g})"
        )));
    }
    let sieve = build_sieve(&curve, g, ctx.budget)?;
    let m = match (m_literal, random_m) {
        (Some(lit), false) => parse_class_literal(&curve, lit)?,
        // Maximal-generic draw: reduced degree exactly g.
        (None, true) => reservoir_class(&curve, &sieve, ctx.seed, Some(g))?,
        _ => {
            return Err(CliError::validation(
                "ArgumentConflict: pass exactly one of --m or --random-m",
            ))
        }
    };
    let m_deg = 2 * g as i64 - a as i64 - b as i64;
    let e_m = e_of(m_deg, m.degree());
    let parts = run_chunks(ctx.workers, total, |lo, hi| {
        theta_hits_range(&curve, &sieve, &m, a, b, lo, hi).map_err(CliError::from)
    })?;
    let (hits, classes) = parts
        .iter()
        .fold((0u64, 0u64), |(h, c), &(ph, pc)| (h + ph, c + pc));
    let ratio = BigRational::new(BigInt::from(hits), BigInt::from(classes));
    let scale = BigRational::from_integer(BigInt::from(q).pow((a + b) as u32));
    let scaled = &ratio * &scale;
    let abs_dev = (scaled.clone() - BigRational::one()).abs();
    let tol = 10.0 * (q as f64).powf((e_m - (a + b + g) as i64) as f64 / 4.0);
    let within = rational_f64(&abs_dev) <= tol;
    let id = curve_id(&curve);
    let m_lit = class_literal(&m);
    match ctx.format {
        Format::Csv => {
            let mut out = String::from(
                "q,genus,curve_id,seed,a,b,deg_m,e_m,hits,classes,ratio,scaled,abs_dev,tol,within_tol\n",
            );
            let _ = writeln!(
                out,
                "{q},{g},{id},{},{a},{b},{m_deg},{e_m},{hits},{classes},{},{},{},{},{}",
                ctx.seed,
                rational_str(&ratio),
                rational_f64(&scaled),
                rational_f64(&abs_dev),
                tol,
                within
            );
            Ok(out)
        }
        _ => Ok(json_doc(&json!({
            "q": q,
            "genus": g,
            "curve_id": id,
            "seed": ctx.seed,
            "a": a,
            "b": b,
            "m": m_lit,
            "deg_m": m_deg,
            "e_m": e_m,
            "hits": hits,
            "classes": classes,
            "ratio": rational_str(&ratio),
            "scaled": rational_f64(&scaled),
            "abs_dev": rational_f64(&abs_dev),
            "tol": tol,
            "within_tol": within,
        }))),
    }
}

// ---------------------------------------------------------------------------
// chi / polar / audit
// ---------------------------------------------------------------------------

fn ratio_to_bound(value: &BigInt, bound: &BigInt) -> BigRational {
    BigRational::new(value.abs(), bound.clone())
}

pub fn cmd_chi(ctx: &Ctx, g: u32, a: u32, b: u32) -> Result<String, CliError> {
    if a + b > g {
        return Err(CliError::validation(format!(
            "DomainError: the general-fiber characteristic needs a + b <= g (a = {a}, b = {b}, g = {g})"
        )));
    }
    if g > 1000 {
        return Err(CliError::validation("DomainError: g must be at most 1000"));
    }
    let value = chi_general_fiber(g, a, b);
    let bound = BigInt::from(8u32).pow(g);
    let ratio = ratio_to_bound(&value, &bound);
    match ctx.format {
        Format::Csv => Ok(format!(
            "g,a,b,value,bound,ratio\n{g},{a},{b},{value},{bound},{}\n",
            rational_f64(&ratio)
        )),
        _ => Ok(json_doc(&json!({
            "g": g,
            "a": a,
            "b": b,
            "value": value.to_string(),
            "bound": bound.to_string(),
            "ratio": rational_str(&ratio),
            "ratio_float": rational_f64(&ratio),
        }))),
    }
}

pub fn cmd_polar(ctx: &Ctx, g: u32, k: u32, r: u32, s: u32) -> Result<String, CliError> {
    let value = polar_coeff(g, k, r, s).map_err(|e| match e {
        bun2_core::charclass::CharError::DomainError => CliError::validation(format!(
            "DomainError: polar coefficients need r + s <= g - 1 and g - 1 - r - s <= k <= g - 1 (g = {g}, k = {k}, r = {r}, s = {s})"
        )),
        other => other.into(),
    })?;
    let bound = BigInt::from(g) * BigInt::from(g) * BigInt::from(24u32).pow(g);
    let ratio = ratio_to_bound(&value, &bound);
    match ctx.format {
        Format::Csv => Ok(format!(
            "g,k,r,s,value,bound,ratio\n{g},{k},{r},{s},{value},{bound},{}\n",
            rational_f64(&ratio)
        )),
        _ => Ok(json_doc(&json!({
            "g": g,
            "k": k,
            "r": r,
            "s": s,
            "value": value.to_string(),
            "bound": bound.to_string(),
            "ratio": rational_str(&ratio),
            "ratio_float": rational_f64(&ratio),
        }))),
    }
}

fn audit_json(rep: &AuditReport) -> Value {
    json!({
        "g": rep.g,
        "max_chi_abs": rep.max_chi_abs.to_string(),
        "chi_bound": rep.chi_bound.to_string(),
        "max_chi_ratio": rational_str(&rep.max_chi_ratio),
        "max_chi_ratio_float": rational_f64(&rep.max_chi_ratio),
        "max_chi_at": [rep.max_chi_at.0, rep.max_chi_at.1],
        "max_polar": rep.max_polar.to_string(),
        "polar_bound": rep.polar_bound.to_string(),
        "max_polar_ratio": rational_str(&rep.max_polar_ratio),
        "max_polar_ratio_float": rational_f64(&rep.max_polar_ratio),
        "max_polar_at": [rep.max_polar_at.0, rep.max_polar_at.1, rep.max_polar_at.2],
        "stratum_count_bound": rep.stratum_count_bound.to_string(),
        "per_stratum_bound": rep.per_stratum_bound.to_string(),
        "composite_product": rep.composite_product.to_string(),
        "headline_bound": rep.headline_bound.to_string(),
    })
}

pub fn cmd_audit(ctx: &Ctx, g_spec: &str) -> Result<String, CliError> {
    let (lo, hi) = parse_range_spec(g_spec)?;
    if lo < 1 || hi > 40 {
        return Err(CliError::validation(
            "DomainError: audit genus must lie in 1..=40",
        ));
    }
    let gs: Vec<u32> = (lo as u32..=hi as u32).collect();
    let reports: Vec<AuditReport> = if ctx.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(ctx.workers)
            .build()
            .map_err(|e| CliError {
                code: 1,
                msg: format!("threads: {e}"),
            })?;
        pool.install(|| {
            gs.par_iter()
                .map(|&g| bound_audit(g).map_err(CliError::from))
                .collect::<Result<Vec<_>, _>>()
        })?
    } else {
        let mut v = Vec::with_capacity(gs.len());
        for &g in &gs {
            v.push(bound_audit(g)?);
        }
        v
    };
    match ctx.format {
        Format::Csv => {
            let mut out = String::from(
                "g,max_chi_ratio,chi_a,chi_b,max_polar_ratio,polar_k,polar_r,polar_s\n",
            );
            for rep in &reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    rep.g,
                    rational_f64(&rep.max_chi_ratio),
                    rep.max_chi_at.0,
                    rep.max_chi_at.1,
                    rational_f64(&rep.max_polar_ratio),
                    rep.max_polar_at.0,
                    rep.max_polar_at.1,
                    rep.max_polar_at.2
                );
            }
            Ok(out)
        }
        _ => {
            let rows: Vec<Value> = reports.iter().map(audit_json).collect();
            Ok(json_doc(&Value::from(rows)))
        }
    }
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

pub fn cmd_decompose(
    ctx: &Ctx,
    spec_path: &Path,
    ext_degree: u32,
    d1_lit: &str,
    d2_lit: &str,
) -> Result<String, CliError> {
    let spec = CurveSpec::load(spec_path)?;
    let curve = spec.build()?;
    let ext = extend(&curve, ext_degree)?;
    let fd = ext.curve.field();
    let d1 = parse_divisor_literal(fd, d1_lit)?;
    let d2 = parse_divisor_literal(fd, d2_lit)?;
    d1.validate_on(&ext.curve)?;
    d2.validate_on(&ext.curve)?;
    let g = ext.curve.genus();
    let sep = canonical_decomposition(fd, &d1, &d2)?;
    let dim = tangent_dim(fd, g, &d1, &d2)?;
    let dim_h0 = tangent_dim_via_h0(fd, g, &d1, &d2);
    let id = curve_id(&curve);
    match ctx.format {
        Format::Csv => {
            let mut out = String::from("part,literal\n");
            let _ = writeln!(out, "d1,{}", divisor_literal(&d1));
            let _ = writeln!(out, "d2,{}", divisor_literal(&d2));
            let _ = writeln!(out, "h_cap,{}", divisor_literal(&sep.h_cap));
            let _ = writeln!(out, "h_1,{}", divisor_literal(&sep.h_1));
            let _ = writeln!(out, "h_2,{}", divisor_literal(&sep.h_2));
            let _ = writeln!(out, "s,{}", divisor_literal(&sep.s));
            let _ = writeln!(out, "r_cap,{}", divisor_literal(&sep.r_cap));
            let _ = writeln!(out, "r_1,{}", divisor_literal(&sep.r_1));
            let _ = writeln!(out, "r_2,{}", divisor_literal(&sep.r_2));
            let _ = writeln!(out, "tangent_dim,{dim}");
            let _ = writeln!(out, "tangent_dim_via_h0,{dim_h0}");
            Ok(out)
        }
        _ => Ok(json_doc(&json!({
            "curve_id": id,
            "ext_degree": ext_degree,
            "q_ext": fd.q,
            "d1": divisor_literal(&d1),
            "d2": divisor_literal(&d2),
            "parts": {
                "h_cap": divisor_literal(&sep.h_cap),
                "h_1": divisor_literal(&sep.h_1),
                "h_2": divisor_literal(&sep.h_2),
                "s": divisor_literal(&sep.s),
                "r_cap": divisor_literal(&sep.r_cap),
                "r_1": divisor_literal(&sep.r_1),
                "r_2": divisor_literal(&sep.r_2),
            },
            "tangent_dim": dim,
            "tangent_dim_via_h0": dim_h0,
            "agree": dim == dim_h0,
        }))),
    }
}
