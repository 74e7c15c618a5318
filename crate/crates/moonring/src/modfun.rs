//! q-expansions of the modular functions used elsewhere in the crate:
//! Delta = eta^24, E4, j, and the Hauptmodul catalog for the conjugacy
//! classes 1A, 2A, 2B, 3A, 4A, 4B, 6A, together with the power maps of the
//! cyclic groups those classes generate.
//!
//! Catalog entries are normalized to `q^-1 + 0 + O(q)`: the constant term
//! is always zero, and only [`j_series`] exposes the 744.
//!
//! Provenance: 1A, 2B, 4A come from the classical eta-quotient formulas;
//! 2A and 3A from Fricke-symmetrized eta quotients; 4B and 6A ship as
//! embedded coefficient data generated once by an independent script
//! (`tools/generate_series_data.py`). Every entry is validated at load
//! against published low-order coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num::{One, Zero};
use thiserror::Error;

use crate::series::{rational_from_int, LaurentSeries, Rational, SeriesError};

/// Environment variable that points at a directory of replacement
/// coefficient tables (`1a.csv`, ..., `6a.csv`).
pub const DATA_DIR_ENV: &str = "MOONRING_DATA";

/// Highest exponent stored in the embedded tables.
pub const EMBEDDED_MAX_EXPONENT: i64 = 200;

#[derive(Debug, Error)]
pub enum ModfunError {
    #[error("unknown class label `{0}`")]
    UnknownClass(String),
    #[error("class {class} is backed by embedded data up to q^{max}; requested truncation {trunc}")]
    BeyondEmbeddedData { class: ClassLabel, trunc: i64, max: i64 },
    #[error("truncation {0} is too small (need at least {1})")]
    TruncationTooSmall(i64, i64),
    #[error("coefficient table for {class}: {reason}")]
    BadTable { class: ClassLabel, reason: String },
    #[error("catalog validation failed for {class}: {reason}")]
    Validation { class: ClassLabel, reason: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Monster conjugacy classes covered by the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    C1A,
    C2A,
    C2B,
    C3A,
    C4A,
    C4B,
    C6A,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 7] = [
        ClassLabel::C1A,
        ClassLabel::C2A,
        ClassLabel::C2B,
        ClassLabel::C3A,
        ClassLabel::C4A,
        ClassLabel::C4B,
        ClassLabel::C6A,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ClassLabel::C1A => "1A",
            ClassLabel::C2A => "2A",
            ClassLabel::C2B => "2B",
            ClassLabel::C3A => "3A",
            ClassLabel::C4A => "4A",
            ClassLabel::C4B => "4B",
            ClassLabel::C6A => "6A",
        }
    }

    /// Order of an element in this class.
    pub fn order(&self) -> u64 {
        match self {
            ClassLabel::C1A => 1,
            ClassLabel::C2A | ClassLabel::C2B => 2,
            ClassLabel::C3A => 3,
            ClassLabel::C4A | ClassLabel::C4B => 4,
            ClassLabel::C6A => 6,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassLabel {
    type Err = ModfunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "1A" => Ok(ClassLabel::C1A),
            "2A" => Ok(ClassLabel::C2A),
            "2B" => Ok(ClassLabel::C2B),
            "3A" => Ok(ClassLabel::C3A),
            "4A" => Ok(ClassLabel::C4A),
            "4B" => Ok(ClassLabel::C4B),
            "6A" => Ok(ClassLabel::C6A),
            _ => Err(ModfunError::UnknownClass(s.to_string())),
        }
    }
}

/// How a catalog entry is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    EtaFormula,
    EmbeddedData,
}

/// `prod_{n >= 1} (1 - q^(step*n))` to the requested truncation.
fn euler_product(step: i64, trunc: i64) -> LaurentSeries {
    assert!(step >= 1 && trunc >= 1);
    let n = trunc as usize;
    let mut coeffs = vec![Rational::zero(); n];
    coeffs[0] = Rational::one();
    let mut k = step as usize;
    while k < n {
        for i in (k..n).rev() {
            let lower = coeffs[i - k].clone();
            coeffs[i] -= lower;
        }
        k += step as usize;
    }
    LaurentSeries::new(0, coeffs)
}

/// Delta(q) = q * prod (1-q^n)^24. Only 24th powers of eta appear in this
/// crate, so everything stays inside integer-exponent Laurent series.
pub fn eta_pow24(trunc: i64) -> Result<LaurentSeries, ModfunError> {
    if trunc < 2 {
        return Err(ModfunError::TruncationTooSmall(trunc, 2));
    }
    let p = euler_product(1, trunc - 1);
    Ok(p.pow(24)?.shifted(1))
}

/// E4 = 1 + 240 sum sigma_3(n) q^n.
pub fn eisenstein_e4(trunc: i64) -> LaurentSeries {
    let n = trunc.max(1) as usize;
    let mut coeffs = vec![Rational::zero(); n];
    coeffs[0] = Rational::one();
    for m in 1..n {
        let mut s: i64 = 0;
        for d in 1..=m {
            if m % d == 0 {
                s += (d as i64).pow(3);
            }
        }
        coeffs[m] = rational_from_int(240 * s);
    }
    LaurentSeries::new(0, coeffs)
}

/// The full j-function `q^-1 + 744 + 196884q + ...` as E4^3 / Delta.
pub fn j_series(trunc: i64) -> Result<LaurentSeries, ModfunError> {
    if trunc < 0 {
        return Err(ModfunError::TruncationTooSmall(trunc, 0));
    }
    let e4 = eisenstein_e4(trunc + 1);
    let delta = eta_pow24(trunc + 2)?;
    Ok(e4.pow(3)?.mul(&delta.inverse()?).truncated(trunc))
}

/// Weight-zero eta quotient `prod_d eta(d*tau)^(e_d)`; the weighted
/// exponent sum must be divisible by 24 so the result has integer
/// q-powers.
fn eta_quotient(exponents: &[(i64, i64)], trunc: i64) -> Result<LaurentSeries, ModfunError> {
    let weighted: i64 = exponents.iter().map(|&(d, e)| d * e).sum();
    assert!(weighted % 24 == 0, "eta quotient with fractional q-power");
    let offset = weighted / 24;
    let t0 = trunc - offset;
    let mut acc = LaurentSeries::one(t0);
    for &(d, e) in exponents {
        let base = euler_product(d, t0);
        let factor = if e >= 0 { base.pow(e)? } else { base.inverse()?.pow(-e)? };
        acc = acc.mul(&factor);
    }
    Ok(acc.shifted(offset))
}

/// `t + c/t`, the Fricke symmetrization of an eta quotient.
fn symmetrize(t: &LaurentSeries, c: i64) -> Result<LaurentSeries, ModfunError> {
    Ok(t.add(&t.inverse()?.scaled(&rational_from_int(c))))
}

/// Compute a catalog entry from its eta formula, normalized to constant
/// term zero. Returns `None` for the embedded-data classes.
fn eta_route(class: ClassLabel, trunc: i64) -> Result<Option<LaurentSeries>, ModfunError> {
    let series = match class {
        ClassLabel::C1A => {
            let j = j_series(trunc)?;
            let c0 = j.coeff(0).unwrap_or_else(Rational::zero);
            j.sub(&LaurentSeries::monomial(c0, 0, trunc))
        }
        ClassLabel::C2B => {
            let t = eta_quotient(&[(1, 24), (2, -24)], trunc)?;
            t.add(&LaurentSeries::monomial(rational_from_int(24), 0, trunc))
        }
        ClassLabel::C4A => {
            let t = eta_quotient(&[(2, 48), (1, -24), (4, -24)], trunc)?;
            t.sub(&LaurentSeries::monomial(rational_from_int(24), 0, trunc))
        }
        ClassLabel::C2A => {
            let t = eta_quotient(&[(1, 24), (2, -24)], trunc)?;
            let s = symmetrize(&t, 4096)?;
            let c0 = s.coeff(0).unwrap_or_else(Rational::zero);
            s.sub(&LaurentSeries::monomial(c0, 0, trunc)).truncated(trunc)
        }
        ClassLabel::C3A => {
            let t = eta_quotient(&[(1, 12), (3, -12)], trunc)?;
            let s = symmetrize(&t, 729)?;
            let c0 = s.coeff(0).unwrap_or_else(Rational::zero);
            s.sub(&LaurentSeries::monomial(c0, 0, trunc)).truncated(trunc)
        }
        ClassLabel::C4B | ClassLabel::C6A => return Ok(None),
    };
    Ok(Some(series.truncated(trunc)))
}

/// Published low-order coefficients (q^1, q^2, q^3) used to pin every entry.
pub fn reference_coefficients(class: ClassLabel) -> [i64; 3] {
    match class {
        ClassLabel::C1A => [196884, 21493760, 864299970],
        ClassLabel::C2A => [4372, 96256, 1240002],
        ClassLabel::C2B => [276, -2048, 11202],
        ClassLabel::C3A => [783, 8672, 65367],
        ClassLabel::C4A => [276, 2048, 11202],
        ClassLabel::C4B => [52, 0, 834],
        ClassLabel::C6A => [79, 352, 1431],
    }
}

fn embedded_csv(class: ClassLabel) -> &'static str {
    match class {
        ClassLabel::C1A => include_str!("data/hauptmodul/1a.csv"),
        ClassLabel::C2A => include_str!("data/hauptmodul/2a.csv"),
        ClassLabel::C2B => include_str!("data/hauptmodul/2b.csv"),
        ClassLabel::C3A => include_str!("data/hauptmodul/3a.csv"),
        ClassLabel::C4A => include_str!("data/hauptmodul/4a.csv"),
        ClassLabel::C4B => include_str!("data/hauptmodul/4b.csv"),
        ClassLabel::C6A => include_str!("data/hauptmodul/6a.csv"),
    }
}

fn parse_table(class: ClassLabel, text: &str) -> Result<LaurentSeries, ModfunError> {
    let bad = |reason: String| ModfunError::BadTable { class, reason };
    let mut coeffs = Vec::new();
    let mut expected = -1i64;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with('n')) {
            continue;
        }
        let (n, c) = line
            .split_once(',')
            .ok_or_else(|| bad(format!("line {} is not `n,coefficient`", lineno + 1)))?;
        let n: i64 = n.trim().parse().map_err(|_| bad("bad exponent".into()))?;
        if n != expected {
            return Err(bad(format!("exponent {n} out of order, expected {expected}")));
        }
        coeffs.push(crate::series::parse_rational(c.trim())?);
        expected += 1;
    }
    if coeffs.is_empty() {
        return Err(bad("empty table".into()));
    }
    Ok(LaurentSeries::new(-1, coeffs))
}

fn load_table(class: ClassLabel) -> Result<LaurentSeries, ModfunError> {
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        let path = PathBuf::from(dir)
            .join("hauptmodul")
            .join(format!("{}.csv", class.name().to_ascii_lowercase()));
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| ModfunError::BadTable {
                class,
                reason: format!("{}: {e}", path.display()),
            })?;
            return parse_table(class, &text);
        }
    }
    parse_table(class, embedded_csv(class))
}

/// The catalog of Hauptmodul q-expansions, validated at construction.
#[derive(Debug, Clone)]
pub struct HauptmodulCatalog {
    tables: BTreeMap<ClassLabel, LaurentSeries>,
}

impl HauptmodulCatalog {
    /// Load the embedded (or `MOONRING_DATA`-overridden) tables and verify
    /// every entry: valuation -1, leading coefficient 1, constant term 0,
    /// integer coefficients, and the published q^1..q^3 values.
    pub fn load() -> Result<Self, ModfunError> {
        let mut tables = BTreeMap::new();
        for class in ClassLabel::ALL {
            let s = load_table(class)?;
            let fail = |reason: String| ModfunError::Validation { class, reason };
            if s.coeff(-1) != Some(Rational::one()) {
                return Err(fail("leading coefficient at q^-1 is not 1".into()));
            }
            if s.coeff(0) != Some(Rational::zero()) {
                return Err(fail("constant term is not 0".into()));
            }
            if !s.is_integral() {
                return Err(fail("non-integer coefficient".into()));
            }
            for (i, want) in reference_coefficients(class).iter().enumerate() {
                let e = i as i64 + 1;
                if s.coeff(e) != Some(rational_from_int(*want)) {
                    return Err(fail(format!(
                        "q^{e} coefficient does not match published value {want}"
                    )));
                }
            }
            tables.insert(class, s);
        }
        Ok(HauptmodulCatalog { tables })
    }

    pub fn provenance(&self, class: ClassLabel) -> Provenance {
        match class {
            ClassLabel::C4B | ClassLabel::C6A => Provenance::EmbeddedData,
            _ => Provenance::EtaFormula,
        }
    }

    /// The Hauptmodul for `class` with constant term 0, known strictly
    /// below `trunc`. Classes with eta formulas are recomputed at any
    /// truncation; embedded-data classes are capped at the table range.
    pub fn hauptmodul(&self, class: ClassLabel, trunc: i64) -> Result<LaurentSeries, ModfunError> {
        if trunc < 0 {
            return Err(ModfunError::TruncationTooSmall(trunc, 0));
        }
        let table = &self.tables[&class];
        if trunc <= table.trunc() {
            return Ok(table.truncated(trunc));
        }
        match eta_route(class, trunc)? {
            Some(s) => {
                if !s.is_integral() {
                    return Err(ModfunError::Validation {
                        class,
                        reason: "eta formula produced a non-integer coefficient".into(),
                    });
                }
                Ok(s)
            }
            None => Err(ModfunError::BeyondEmbeddedData { class, trunc, max: table.trunc() - 1 }),
        }
    }

    /// Cross-check the eta-formula entries against the embedded tables on
    /// `-1..upto` (both routes must agree exactly).
    pub fn validate_deep(&self, upto: i64) -> Result<(), ModfunError> {
        for class in ClassLabel::ALL {
            if self.provenance(class) != Provenance::EtaFormula {
                continue;
            }
            let computed = eta_route(class, upto)?.expect("eta classes have formulas");
            let table = self.tables[&class].truncated(upto);
            if !computed.agrees_with(&table, -1, upto) {
                return Err(ModfunError::Validation {
                    class,
                    reason: format!("eta formula disagrees with embedded data below q^{upto}"),
                });
            }
        }
        Ok(())
    }
}

/// The map `k -> class of g^k` for a cyclic group generated by an element
/// of the named class. Entries depend only on gcd(k, order).
#[derive(Debug, Clone)]
pub struct PowerMap {
    group: ClassLabel,
    classes: Vec<ClassLabel>,
}

/// Power map of the cyclic subgroup generated by an element of `group`.
pub fn power_map(group: ClassLabel) -> PowerMap {
    use ClassLabel::*;
    let classes = match group {
        C1A => vec![C1A],
        C2A => vec![C2A, C1A],
        C2B => vec![C2B, C1A],
        C3A => vec![C3A, C3A, C1A],
        C4A => vec![C4A, C2B, C4A, C1A],
        C4B => vec![C4B, C2A, C4B, C1A],
        C6A => vec![C6A, C3A, C2A, C3A, C6A, C1A],
    };
    PowerMap { group, classes }
}

impl PowerMap {
    pub fn group(&self) -> ClassLabel {
        self.group
    }

    pub fn order(&self) -> u64 {
        self.classes.len() as u64
    }

    /// Class of `g^k`; any `k` divisible by the order gives 1A.
    pub fn at(&self, k: u64) -> ClassLabel {
        let n = self.order();
        let idx = ((k % n) + n - 1) % n;
        self.classes[idx as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct finite-product oracle for prod (1-q^n)^24, independent of the
    /// series module's multiplication.
    fn delta_oracle(upto: usize) -> Vec<i64> {
        let n = upto + 1;
        let mut p = vec![0i128; n];
        p[0] = 1;
        for step in 1..n {
            for i in (step..n).rev() {
                let v = p[i - step];
                p[i] -= v;
            }
        }
        let mut out = vec![0i128; n];
        out[0] = 1;
        for _ in 0..24 {
            let mut next = vec![0i128; n];
            for i in 0..n {
                if out[i] == 0 {
                    continue;
                }
                for j in 0..n - i {
                    next[i + j] += out[i] * p[j];
                }
            }
            out = next;
        }
        out.iter().map(|&x| x as i64).collect()
    }

    #[test]
    fn eta_pow24_low_coefficients() {
        let d = eta_pow24(12).unwrap();
        let oracle = delta_oracle(11);
        assert_eq!(d.coeff(1).unwrap(), rational_from_int(1));
        assert_eq!(d.coeff(2).unwrap(), rational_from_int(-24));
        assert_eq!(d.coeff(3).unwrap(), rational_from_int(252));
        for e in 1..12 {
            assert_eq!(d.coeff(e).unwrap(), rational_from_int(oracle[(e - 1) as usize]), "q^{e}");
        }
        assert!(eta_pow24(1).is_err());
    }

    #[test]
    fn tau_multiplicativity_spot_check() {
        // Delta = sum tau(n) q^n; tau(6) = tau(2) * tau(3)
        let d = eta_pow24(8).unwrap();
        let tau = |n: i64| d.coeff(n).unwrap();
        assert_eq!(tau(6), tau(2) * tau(3));
        assert_eq!(tau(6), rational_from_int(-6048));
    }

    #[test]
    fn j_series_published_values() {
        let j = j_series(3).unwrap();
        assert_eq!(j.coeff(-1).unwrap(), rational_from_int(1));
        assert_eq!(j.coeff(0).unwrap(), rational_from_int(744));
        assert_eq!(j.coeff(1).unwrap(), rational_from_int(196884));
        assert_eq!(j.coeff(2).unwrap(), rational_from_int(21493760));
    }

    #[test]
    fn catalog_published_coefficients() {
        let cat = HauptmodulCatalog::load().unwrap();
        for class in ClassLabel::ALL {
            let s = cat.hauptmodul(class, 4).unwrap();
            let want = reference_coefficients(class);
            assert_eq!(s.coeff(-1).unwrap(), rational_from_int(1), "{class} leading");
            assert_eq!(s.coeff(0).unwrap(), rational_from_int(0), "{class} constant");
            for (i, w) in want.iter().enumerate() {
                assert_eq!(
                    s.coeff(i as i64 + 1).unwrap(),
                    rational_from_int(*w),
                    "{class} q^{}",
                    i + 1
                );
            }
        }
    }

    #[test]
    fn eta_routes_agree_with_embedded_data() {
        let cat = HauptmodulCatalog::load().unwrap();
        cat.validate_deep(101).unwrap();
    }

    #[test]
    fn eta_classes_extend_beyond_embedded_range() {
        let cat = HauptmodulCatalog::load().unwrap();
        let s = cat.hauptmodul(ClassLabel::C2B, EMBEDDED_MAX_EXPONENT + 10).unwrap();
        assert_eq!(s.trunc(), EMBEDDED_MAX_EXPONENT + 10);
        let err = cat.hauptmodul(ClassLabel::C4B, EMBEDDED_MAX_EXPONENT + 10);
        assert!(matches!(err, Err(ModfunError::BeyondEmbeddedData { .. })));
    }

    #[test]
    fn power_map_examples() {
        assert_eq!(power_map(ClassLabel::C4A).at(2), ClassLabel::C2B);
        assert_eq!(power_map(ClassLabel::C6A).at(3), ClassLabel::C2A);
        assert_eq!(power_map(ClassLabel::C4B).at(2), ClassLabel::C2A);
        for class in ClassLabel::ALL {
            let pm = power_map(class);
            assert_eq!(pm.at(pm.order()), ClassLabel::C1A, "{class} at order");
            // entries depend only on gcd(k, order)
            for k in 1..=3 * pm.order() {
                let g = num::integer::gcd(k, pm.order());
                assert_eq!(pm.at(k), pm.at(g), "{class} k = {k}");
            }
        }
    }

    #[test]
    fn class_label_round_trip() {
        for class in ClassLabel::ALL {
            assert_eq!(class.name().parse::<ClassLabel>().unwrap(), class);
        }
        assert!("5Z".parse::<ClassLabel>().is_err());
    }
}
