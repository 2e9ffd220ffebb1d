//! File formats and literal syntaxes shared by every subcommand: curve spec
//! JSON, Mumford class literals, point-divisor literals, rational and CSV
//! rendering, and the mapping from library errors to process exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bun2_core::algebra::poly::Poly;
use bun2_core::algebra::{make_field, AlgebraError, FieldDesc};
use bun2_core::charclass::CharError;
use bun2_core::curve::{Curve, CurveError};
use bun2_core::divisors::{DivError, GeomPoint, PointDivisor};
use bun2_core::jacobian::{JacClass, JacError};
use bun2_core::measures::MeasureError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Exit discipline: 2 = invalid input (message names the violated
/// invariant), 3 = configured budget exceeded, 4 = a proved bound was
/// measured violated, 1 = environment failure (I/O and the like).
#[derive(Debug, Clone)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            msg: msg.into(),
        }
    }

    pub fn budget(msg: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            msg: msg.into(),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> CliError {
        CliError::validation(e.to_string())
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> CliError {
        CliError::validation(e.to_string())
    }
}

impl From<JacError> for CliError {
    fn from(e: JacError) -> CliError {
        CliError::validation(e.to_string())
    }
}

impl From<DivError> for CliError {
    fn from(e: DivError) -> CliError {
        let code = match e {
            DivError::BudgetExceeded => 3,
            _ => 2,
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> CliError {
        let code = match e {
            MeasureError::BudgetExceeded => 3,
            _ => 2,
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> CliError {
        let code = match e {
            CharError::BudgetExceeded => 3,
            CharError::BoundViolated => 4,
            _ => 2,
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError {
            code: 1,
            msg: format!("io: {e}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Curve spec files
// ---------------------------------------------------------------------------

/// On-disk curve description: `{"p": 5, "k": 1, "f": [0, 1, 0, 1]}` means
/// y² = x³ + x over F_5.  Coefficients are ascending; each is the packed
/// representative of an F_{p^k} element and must lie below q = p^k.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSpec {
    pub p: u64,
    pub k: u32,
    pub f: Vec<u64>,
}

impl CurveSpec {
    pub fn parse(text: &str) -> Result<CurveSpec, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::validation(format!("InvalidSpec: {e}")))
    }

    pub fn load(path: &Path) -> Result<CurveSpec, CliError> {
        let text = fs::read_to_string(path)?;
        CurveSpec::parse(&text)
    }

    /// Validate and construct the curve; every violated invariant is named
    /// in the error message.
    pub fn build(&self) -> Result<Curve, CliError> {
        let fd = make_field(self.p, self.k)?;
        for (i, &c) in self.f.iter().enumerate() {
            if c >= fd.q {
                return Err(CliError::validation(format!(
                    "CoefficientRange: f[{i}] = {c} is not below q = {}",
                    fd.q
                )));
            }
        }
        let f = Poly::from_reps(&fd, &self.f);
        Ok(Curve::new(fd, f)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec serializes");
        s.push('\n');
        s
    }
}

/// Stable identifier used in report rows: field size, genus, and the
/// defining coefficients, e.g. `q5g1f0.1.0.1`.
pub fn curve_id(curve: &Curve) -> String {
    let reps: Vec<String> = curve
        .f()
        .coeffs()
        .iter()
        .map(|e| e.rep.to_string())
        .collect();
    format!(
        "q{}g{}f{}",
        curve.field().q,
        curve.genus(),
        reps.join(".")
    )
}

// ---------------------------------------------------------------------------
// Rational rendering
// ---------------------------------------------------------------------------

/// Exact form used in JSON and CSV: `num/den` with den > 0, e.g. `3/8`.
pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn bigint_str(n: &BigInt) -> String {
    n.to_string()
}

// ---------------------------------------------------------------------------
// Class literals
// ---------------------------------------------------------------------------

fn poly_reps(p: &Poly) -> Vec<u64> {
    p.coeffs().iter().map(|e| e.rep).collect()
}

fn reps_block(reps: &[u64]) -> String {
    let parts: Vec<String> = reps.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Mumford pair as text: `u=[c0,c1,...];v=[c0,...]`, coefficients ascending
/// packed representatives.  The identity renders as `u=[1];v=[]`.
pub fn class_literal(cls: &JacClass) -> String {
    format!(
        "u={};v={}",
        reps_block(&poly_reps(cls.u())),
        reps_block(&poly_reps(cls.v()))
    )
}

fn parse_rep_block(fd: &FieldDesc, block: &str, what: &str) -> Result<Vec<u64>, CliError> {
    let inner = block
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| {
            CliError::validation(format!(
                "ClassLiteral: {what} coefficients must be bracketed, got `{block}`"
            ))
        })?;
    let mut reps = Vec::new();
    if inner.trim().is_empty() {
        return Ok(reps);
    }
    for tok in inner.split(',') {
        let c: u64 = tok.trim().parse().map_err(|_| {
            CliError::validation(format!("ClassLiteral: bad coefficient `{tok}` in {what}"))
        })?;
        if c >= fd.q {
            return Err(CliError::validation(format!(
                "CoefficientRange: {what} coefficient {c} is not below q = {}",
                fd.q
            )));
        }
        reps.push(c);
    }
    Ok(reps)
}

/// Parse and validate a class literal against `curve`; the Mumford
/// invariants (monic u, deg v < deg u, u | v² − f) are enforced by the
/// group layer and reported by name.
pub fn parse_class_literal(curve: &Curve, lit: &str) -> Result<JacClass, CliError> {
    let text: String = lit.chars().filter(|c| !c.is_whitespace()).collect();
    let u_part = text.strip_prefix("u=").ok_or_else(|| {
        CliError::validation(format!("ClassLiteral: expected `u=[...];v=[...]`, got `{lit}`"))
    })?;
    let (u_block, v_part) = u_part.split_once(";v=").ok_or_else(|| {
        CliError::validation(format!("ClassLiteral: expected `u=[...];v=[...]`, got `{lit}`"))
    })?;
    let fd = curve.field();
    let u = Poly::from_reps(fd, &parse_rep_block(fd, u_block, "u")?);
    let v = Poly::from_reps(fd, &parse_rep_block(fd, v_part, "v")?);
    Ok(JacClass::from_mumford(curve, u, v)?)
}

// ---------------------------------------------------------------------------
// Point-divisor literals
// ---------------------------------------------------------------------------

/// Effective divisor as text: affine points `x,y` separated by `;`, each
/// repeated per multiplicity, with an optional trailing `inf:k`; the empty
/// divisor is `0`.  Example: `2,1;2,1;4,0;inf:1`.
pub fn divisor_literal(d: &PointDivisor) -> String {
    let mut parts: Vec<String> = Vec::new();
    for ((x, y), m) in d.affine_iter() {
        for _ in 0..m {
            parts.push(format!("{},{}", x.rep, y.rep));
        }
    }
    if d.inf_mult() > 0 {
        parts.push(format!("inf:{}", d.inf_mult()));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(";")
    }
}

/// Parse a divisor literal over `fd`.  Group membership (each affine point
/// on the curve) is not checked here; call `validate_on` afterwards.
pub fn parse_divisor_literal(fd: &FieldDesc, lit: &str) -> Result<PointDivisor, CliError> {
    let text: String = lit.chars().filter(|c| !c.is_whitespace()).collect();
    let mut d = PointDivisor::empty();
    if text == "0" || text.is_empty() {
        return Ok(d);
    }
    for seg in text.split(';') {
        if let Some(k) = seg.strip_prefix("inf:") {
            let m: u32 = k.parse().map_err(|_| {
                CliError::validation(format!("DivisorLiteral: bad infinity multiplicity `{k}`"))
            })?;
            d.push(GeomPoint::Infinity, m);
            continue;
        }
        let (xs, ys) = seg.split_once(',').ok_or_else(|| {
            CliError::validation(format!(
                "DivisorLiteral: expected `x,y` or `inf:k`, got `{seg}`"
            ))
        })?;
        let parse_coord = |s: &str| -> Result<u64, CliError> {
            let c: u64 = s.parse().map_err(|_| {
                CliError::validation(format!("DivisorLiteral: bad coordinate `{s}`"))
            })?;
            if c >= fd.q {
                return Err(CliError::validation(format!(
                    "CoefficientRange: coordinate {c} is not below q = {}",
                    fd.q
                )));
            }
            Ok(c)
        };
        let x = fd.elem(parse_coord(xs)?);
        let y = fd.elem(parse_coord(ys)?);
        d.push(GeomPoint::Affine { x, y }, 1);
    }
    Ok(d)
}

// ---------------------------------------------------------------------------
// Range specs and CSV
// ---------------------------------------------------------------------------

/// Parse `N` or `LO:HI` into an inclusive range.
pub fn parse_range_spec(s: &str) -> Result<(u64, u64), CliError> {
    let parse_one = |t: &str| -> Result<u64, CliError> {
        t.trim()
            .parse()
            .map_err(|_| CliError::validation(format!("RangeSpec: bad integer `{t}` in `{s}`")))
    };
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let n = parse_one(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(CliError::validation(format!(
            "RangeSpec: empty range `{s}` (lo > hi)"
        )));
    }
    Ok((lo, hi))
}

/// Fixed column schema shared by the equidistribution reports.
pub const CSV_HEADER: &str =
    "q,genus,curve_id,seed,component,type_or_pair,empirical_mass_num,empirical_mass_den,natural_mass,abs_err";

#[allow(clippy::too_many_arguments)]
pub fn csv_row(
    out: &mut String,
    q: u64,
    genus: usize,
    curve_id: &str,
    seed: u64,
    component: &str,
    type_or_pair: &str,
    emp: &BigRational,
    natural: &BigRational,
) {
    let abs_err = rational_f64(&(emp - natural)).abs();
    let _ = writeln!(
        out,
        "{q},{genus},{curve_id},{seed},{component},{type_or_pair},{},{},{},{}",
        emp.numer(),
        emp.denom(),
        rational_f64(natural),
        abs_err
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use bun2_core::jacobian::enumerate_classes_brute;
    use num_traits::Zero;

    fn house() -> Curve {
        CurveSpec {
            p: 3,
            k: 1,
            f: vec![1, 2, 0, 0, 1, 1],
        }
        .build()
        .unwrap()
    }

    #[test]
    fn range_spec_parses_singletons_and_closed_ranges() {
        assert_eq!(parse_range_spec("5").unwrap(), (5, 5));
        assert_eq!(parse_range_spec("2:7").unwrap(), (2, 7));
        assert_eq!(parse_range_spec(" 3 : 9 ").unwrap(), (3, 9));
        assert_eq!(parse_range_spec("0:0").unwrap(), (0, 0));
    }

    #[test]
    fn range_spec_rejects_garbage_and_inverted_ranges() {
        let err = parse_range_spec("x").unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.msg.contains("RangeSpec: bad integer"), "{}", err.msg);

        let err = parse_range_spec("7:2").unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.msg.contains("lo > hi"), "{}", err.msg);

        assert!(parse_range_spec("").is_err());
        assert!(parse_range_spec("1:2:3").is_err());
    }

    #[test]
    fn curve_id_packs_field_genus_and_coefficients() {
        assert_eq!(curve_id(&house()), "q3g2f1.2.0.0.1.1");
    }

    #[test]
    fn class_literals_round_trip_every_class_of_a_small_jacobian() {
        let curve = house();
        let classes = enumerate_classes_brute(&curve);
        assert!(!classes.is_empty());
        for cls in &classes {
            let lit = class_literal(cls);
            let back = parse_class_literal(&curve, &lit).unwrap();
            assert_eq!(&back, cls, "literal `{lit}` did not round-trip");
        }
        let identity = classes
            .iter()
            .find(|c| class_literal(c) == "u=[1];v=[]");
        assert!(identity.is_some(), "identity class missing its canonical literal");
    }

    #[test]
    fn class_literal_parser_names_the_violated_invariant() {
        let curve = house();

        let err = parse_class_literal(&curve, "u=[1]").unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.msg.contains("ClassLiteral"), "{}", err.msg);

        let err = parse_class_literal(&curve, "u=[5];v=[]").unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.msg.contains("CoefficientRange"), "{}", err.msg);

        // u = x^2 does not divide v^2 - f for v = 0 (f has unit constant term).
        let err = parse_class_literal(&curve, "u=[0,0,1];v=[]").unwrap_err();
        assert_eq!(err.code, 2);
    }

    #[test]
    fn divisor_literals_round_trip_multiplicities_and_infinity() {
        let curve = house();
        let fd = curve.field();

        let mut d = PointDivisor::empty();
        d.push(
            GeomPoint::Affine {
                x: fd.elem(0),
                y: fd.elem(1),
            },
            2,
        );
        d.push(GeomPoint::Infinity, 1);

        let lit = divisor_literal(&d);
        assert_eq!(lit, "0,1;0,1;inf:1");
        assert_eq!(parse_divisor_literal(fd, &lit).unwrap(), d);

        let empty = PointDivisor::empty();
        assert_eq!(divisor_literal(&empty), "0");
        assert_eq!(parse_divisor_literal(fd, "0").unwrap(), empty);
    }

    #[test]
    fn divisor_literal_parser_rejects_malformed_segments() {
        let curve = house();
        let fd = curve.field();

        let err = parse_divisor_literal(fd, "1").unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.msg.contains("DivisorLiteral"), "{}", err.msg);

        let err = parse_divisor_literal(fd, "7,0").unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.msg.contains("CoefficientRange"), "{}", err.msg);

        let err = parse_divisor_literal(fd, "inf:x").unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.msg.contains("infinity multiplicity"), "{}", err.msg);
    }

    #[test]
    fn rational_rendering_is_exact_and_reduced() {
        let r = BigRational::new(BigInt::from(6), BigInt::from(14));
        assert_eq!(rational_str(&r), "3/7");
        assert_eq!(rational_str(&BigRational::zero()), "0/1");
        assert!((rational_f64(&r) - 3.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn csv_rows_match_the_fixed_header_schema() {
        let header_cols = CSV_HEADER.split(',').count();
        let mut row = String::new();
        let emp = BigRational::new(BigInt::from(1), BigInt::from(8));
        let nat = BigRational::new(BigInt::from(1), BigInt::from(8));
        csv_row(&mut row, 53, 2, "q53g2f1.1.0.0.0.1", 7, "single", "0", &emp, &nat);
        let line = row.trim_end();
        assert_eq!(line.split(',').count(), header_cols);
        assert!(line.starts_with("53,2,q53g2f1.1.0.0.0.1,7,single,0,1,8,"));
        assert!(line.ends_with(",0"), "abs_err of an exact match must be 0: {line}");
    }
}
