//! Replicate families, Hecke-style bracket series, the bivariate
//! exponential, and the quasi-replicability vanishing verdict.
//!
//! A replicate family attaches a catalog series `f^(k)` to every power
//! index `k` (periodically). The bracket series
//! `f^[m] = (1/m) sum_{ad=m} d sum_j c_a(jd) q^(ja)`
//! is the coefficient-level form of averaging `f^(a)((a tau + b)/d)` over
//! `0 <= b < d`. Exponentiating `-sum_m p^m f^[m]` row by row gives the
//! two-variable series whose `p^a q^b` coefficients must vanish whenever
//! `(a-1)b` is nonzero and coprime to the exponent N. The exponent-1 case
//! for the J family is the Koike-Norton-Zagier identity
//! `p (f(sigma) - f(tau)) = exp(-sum p^m f^[m](tau))`, which
//! [`knz_check`] verifies against an independently assembled right side.

use num::{Integer, One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::modfun::{power_map, ClassLabel, HauptmodulCatalog, ModfunError};
use crate::series::{
    format_rational, rational_from_int, BiSeries, LaurentSeries, Rational, SeriesError,
};

#[derive(Debug, Error)]
pub enum QuasiRepError {
    #[error("family member {k} must have valuation -1 with leading coefficient 1")]
    BadFamilyMember { k: u64 },
    #[error("bracket series needs m >= 1")]
    BracketIndex,
    #[error("the vanishing check needs pmax >= 2, got {0}")]
    PmaxTooSmall(usize),
    #[error(
        "family truncation {have} is insufficient: rows reach q^{got}, need q^{need} \
         (build the family with truncation at least {family_needed})"
    )]
    InsufficientTruncation { have: i64, got: i64, need: i64, family_needed: i64 },
    #[error("the {kind} family is not defined for group {group}")]
    UnsupportedFamily { group: ClassLabel, kind: String },
    #[error(transparent)]
    Modfun(#[from] ModfunError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Which ring homomorphism a family realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// The rank homomorphism: every replicate is T_1A.
    Rank,
    /// Trace of `g^j`: replicate k is the series of the class of `g^(jk)`.
    TraceOfPower(u64),
    /// Total dimension of Tate cohomology (4A only, where its series
    /// coincides with the trace-of-g series T_4A).
    Tate,
}

impl FamilyKind {
    pub fn name(&self) -> String {
        match self {
            FamilyKind::Rank => "rank".to_string(),
            FamilyKind::TraceOfPower(j) => format!("trace-g^{j}"),
            FamilyKind::Tate => "tate".to_string(),
        }
    }
}

/// A periodic family of replicates `f^(k)`, each a series with leading
/// term `q^-1`.
#[derive(Debug, Clone)]
pub struct ReplicateFamily {
    members: Vec<LaurentSeries>,
    classes: Vec<ClassLabel>,
    notes: Vec<String>,
}

impl ReplicateFamily {
    /// Period of the family (the group order).
    pub fn period(&self) -> u64 {
        self.members.len() as u64
    }

    /// `f^(a)`; indices wrap with the period, so `a = 0` means the
    /// identity-class member at index `period`.
    pub fn member(&self, a: u64) -> &LaurentSeries {
        let p = self.period();
        let idx = ((a % p) + p - 1) % p;
        &self.members[idx as usize]
    }

    /// Class labels behind the members (index k-1 for `f^(k)`).
    pub fn classes(&self) -> &[ClassLabel] {
        &self.classes
    }

    /// Assumptions recorded while assembling the family.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}

/// The class map `k -> class of the replicate f^(k)` realizing `kind` for
/// the cyclic group generated by `group`.
pub fn class_map_for(
    group: ClassLabel,
    kind: FamilyKind,
) -> Result<Vec<ClassLabel>, QuasiRepError> {
    let pm = power_map(group);
    let order = pm.order();
    match kind {
        FamilyKind::Rank => Ok(vec![ClassLabel::C1A; order as usize]),
        FamilyKind::TraceOfPower(j) => Ok((1..=order).map(|k| pm.at(j * k)).collect()),
        // On the subring spanned by the 4A decomposition the Tate character
        // agrees with trace of g, so its series is T_4A and its replicate
        // family is the trace family.
        FamilyKind::Tate => {
            if group != ClassLabel::C4A {
                return Err(QuasiRepError::UnsupportedFamily { group, kind: kind.name() });
            }
            Ok((1..=order).map(|k| pm.at(k)).collect())
        }
    }
}

/// Assemble a replicate family from a class map, pulling each member from
/// the catalog at truncation `qtrunc`.
pub fn family_from_power_map(
    catalog: &HauptmodulCatalog,
    group: ClassLabel,
    class_map: &[ClassLabel],
    qtrunc: i64,
) -> Result<ReplicateFamily, QuasiRepError> {
    let mut members = Vec::with_capacity(class_map.len());
    for (idx, &class) in class_map.iter().enumerate() {
        let s = catalog.hauptmodul(class, qtrunc)?;
        if s.coeff(-1) != Some(Rational::one()) {
            return Err(QuasiRepError::BadFamilyMember { k: idx as u64 + 1 });
        }
        members.push(s);
    }
    let order = class_map.len() as u64;
    let mut notes = Vec::new();
    for k in 2..order {
        if k.gcd(&order) == 1 && class_map[(k - 1) as usize] == class_map[0] {
            notes.push(format!(
                "replicate {k} for group {group} reuses the primitive series: g^{k} is a \
                 conjugate generator and all catalog coefficients are integers"
            ));
            break;
        }
    }
    Ok(ReplicateFamily { members, classes: class_map.to_vec(), notes })
}

/// Convenience builder: the family of `kind` for `group`, with members
/// truncated at `qtrunc`.
pub fn standard_family(
    catalog: &HauptmodulCatalog,
    group: ClassLabel,
    kind: FamilyKind,
    qtrunc: i64,
) -> Result<ReplicateFamily, QuasiRepError> {
    let map = class_map_for(group, kind)?;
    family_from_power_map(catalog, group, &map, qtrunc)
}

/// The bracket series `f^[m]`, with leading term `(1/m) q^-m`. The result
/// truncation is the largest exponent range fully determined by the
/// members: exponent `e` needs `c_a(e m / a^2)` for every divisor `a | m`
/// with `a | e`.
pub fn bracket_series(
    fam: &ReplicateFamily,
    m: u64,
    qtrunc: i64,
) -> Result<LaurentSeries, QuasiRepError> {
    if m == 0 {
        return Err(QuasiRepError::BracketIndex);
    }
    let mut trunc = qtrunc;
    for a in 1..=m {
        if m % a != 0 {
            continue;
        }
        let ta = fam.member(a).trunc();
        // exponents e with e * m / a^2 < ta are safe
        let cap = (ta * (a as i64) * (a as i64)).div_euclid(m as i64)
            + i64::from((ta * (a as i64) * (a as i64)) % (m as i64) != 0);
        trunc = trunc.min(cap);
    }
    let val = -(m as i64);
    let len = (trunc - val).max(0) as usize;
    let mut coeffs = vec![Rational::zero(); len];
    for a in 1..=m {
        if m % a != 0 {
            continue;
        }
        let d = m / a;
        let member = fam.member(a);
        let j_min: i64 = if d == 1 { -1 } else { 0 };
        let mut j = j_min;
        while j * (a as i64) < trunc {
            let e = j * (a as i64);
            if e >= val {
                let c = member
                    .coeff(j * (d as i64))
                    .expect("bracket truncation keeps sources in range");
                if !c.is_zero() {
                    coeffs[(e - val) as usize] += c * rational_from_int(d as i64);
                }
            }
            j += 1;
        }
    }
    let scale = Rational::one() / rational_from_int(m as i64);
    Ok(LaurentSeries::new(val, coeffs).scaled(&scale))
}

/// `exp(-sum_{m=1}^{pmax} p^m f^[m])` as a bivariate series whose rows are
/// exact at least up to `q^(qtrunc-1)` when the family is deep enough.
pub fn assemble_biexp(
    fam: &ReplicateFamily,
    pmax: usize,
    qtrunc: i64,
) -> Result<BiSeries, QuasiRepError> {
    let headroom = qtrunc + pmax as i64;
    let mut rows = Vec::with_capacity(pmax + 1);
    rows.push(LaurentSeries::zero(headroom));
    for m in 1..=pmax {
        rows.push(bracket_series(fam, m as u64, headroom)?.neg());
    }
    Ok(BiSeries::new(rows).exp()?)
}

/// One offending coefficient: `p^a q^b` with `(a-1)b` nonzero and coprime
/// to the exponent, where the coefficient failed to vanish.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub a: usize,
    pub b: i64,
    pub coefficient: String,
}

/// Result of the vanishing scan.
#[derive(Debug, Clone, Serialize)]
pub struct QuasiRepReport {
    pub exponent: u64,
    pub pmax: usize,
    pub qmax: i64,
    pub violations: Vec<Violation>,
    pub passed: bool,
    pub notes: Vec<String>,
}

/// Scan all `p^a q^b` coefficients with `0 <= a <= pmax` and
/// `valuation <= b < qtrunc`: whenever `(a-1)b != 0` and
/// `gcd((a-1)b, N) = 1` the coefficient must vanish. `gcd(0, N) = N`, so
/// the `a = 1` row and `b = 0` column are never tested.
pub fn check_quasirep(
    fam: &ReplicateFamily,
    exponent: u64,
    pmax: usize,
    qtrunc: i64,
) -> Result<QuasiRepReport, QuasiRepError> {
    if pmax < 2 {
        return Err(QuasiRepError::PmaxTooSmall(pmax));
    }
    let bi = assemble_biexp(fam, pmax, qtrunc)?;
    if bi.qtrunc() < qtrunc {
        let member_trunc = fam.member(1).trunc();
        return Err(QuasiRepError::InsufficientTruncation {
            have: member_trunc,
            got: bi.qtrunc(),
            need: qtrunc,
            family_needed: (qtrunc + pmax as i64) * pmax as i64,
        });
    }
    let mut violations = Vec::new();
    for a in 0..=pmax {
        let row = bi.row(a);
        for b in row.valuation()..qtrunc {
            let weight = (a as i64 - 1) * b;
            if weight == 0 || weight.unsigned_abs().gcd(&exponent) != 1 {
                continue;
            }
            let c = row.coeff(b).expect("row known below qtrunc");
            if !c.is_zero() {
                violations.push(Violation { a, b, coefficient: format_rational(&c) });
            }
        }
    }
    Ok(QuasiRepReport {
        exponent,
        pmax,
        qmax: qtrunc,
        passed: violations.is_empty(),
        violations,
        notes: fam.notes().to_vec(),
    })
}

/// Verify the Koike-Norton-Zagier identity to truncation: the bivariate
/// exponential of the J family equals `1 + sum c(n) p^(n+1) - p f(q)`
/// with `f = j - 744`, the two sides assembled by independent code paths.
pub fn knz_check(
    catalog: &HauptmodulCatalog,
    pmax: usize,
    qtrunc: i64,
) -> Result<bool, QuasiRepError> {
    if pmax < 2 {
        return Err(QuasiRepError::PmaxTooSmall(pmax));
    }
    let family_trunc = (qtrunc + pmax as i64) * pmax as i64;
    let fam = standard_family(catalog, ClassLabel::C1A, FamilyKind::Rank, family_trunc)?;
    let left = assemble_biexp(&fam, pmax, qtrunc)?;
    if left.qtrunc() < qtrunc {
        return Ok(false);
    }

    let f = catalog.hauptmodul(ClassLabel::C1A, qtrunc)?;
    let mut rows = vec![LaurentSeries::one(qtrunc)];
    rows.push(f.neg());
    for a in 2..=pmax {
        let c = f.coeff(a as i64 - 1).expect("within truncation");
        rows.push(LaurentSeries::monomial(c, 0, qtrunc));
    }
    let right = BiSeries::new(rows);

    let lo = -(pmax as i64) - 1;
    Ok((0..=pmax).all(|a| left.row(a).agrees_with(right.row(a), lo, qtrunc)))
}

/// Residuals of the 4B multiplicity recursion
/// `s(4k+3) = s(2k+3) + sum_{i=1}^k s(i+1) s(2k+2-i)`
/// when `s(n)` is read off the q^(n-1) coefficients of a candidate series
/// `x`. A zero residual for every k is necessary for `x` to be the 4B
/// extra function; the residuals themselves are exact.
pub fn recursion_probe_4b(
    x: &LaurentSeries,
    kmax: u64,
) -> Result<Vec<(u64, Rational)>, QuasiRepError> {
    if x.coeff(-1) != Some(Rational::one()) {
        return Err(QuasiRepError::BadFamilyMember { k: 1 });
    }
    let needed = 4 * kmax as i64 + 3;
    if x.trunc() < needed {
        return Err(QuasiRepError::InsufficientTruncation {
            have: x.trunc(),
            got: x.trunc(),
            need: needed,
            family_needed: needed,
        });
    }
    let s = |n: i64| x.coeff(n - 1).expect("within truncation");
    let mut out = Vec::with_capacity(kmax as usize);
    for k in 1..=kmax {
        let k_ = k as i64;
        let mut residual = s(4 * k_ + 3) - s(2 * k_ + 3);
        for i in 1..=k_ {
            residual -= s(i + 1) * s(2 * k_ + 2 - i);
        }
        out.push((k, residual));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational_from_int;
    use num::BigInt;

    fn catalog() -> HauptmodulCatalog {
        HauptmodulCatalog::load().unwrap()
    }

    #[test]
    fn family_class_maps() {
        use ClassLabel::*;
        assert_eq!(
            class_map_for(C4A, FamilyKind::TraceOfPower(1)).unwrap(),
            vec![C4A, C2B, C4A, C1A]
        );
        assert_eq!(
            class_map_for(C6A, FamilyKind::TraceOfPower(1)).unwrap(),
            vec![C6A, C3A, C2A, C3A, C6A, C1A]
        );
        assert_eq!(class_map_for(C1A, FamilyKind::Rank).unwrap(), vec![C1A]);
        assert_eq!(
            class_map_for(C4A, FamilyKind::TraceOfPower(2)).unwrap(),
            vec![C2B, C1A, C2B, C1A]
        );
        assert!(class_map_for(C6A, FamilyKind::Tate).is_err());
    }

    #[test]
    fn family_member_wraparound() {
        let cat = catalog();
        let fam = standard_family(&cat, ClassLabel::C4A, FamilyKind::TraceOfPower(1), 10).unwrap();
        assert_eq!(fam.period(), 4);
        assert_eq!(fam.member(1), fam.member(5));
        assert_eq!(fam.member(4), fam.member(8));
        assert_eq!(fam.member(0), fam.member(4)); // identity-class member
        assert!(!fam.notes().is_empty()); // k = 3 reuses the primitive series
    }

    #[test]
    fn bracket_identity_at_m_one() {
        let cat = catalog();
        let fam = standard_family(&cat, ClassLabel::C4A, FamilyKind::TraceOfPower(1), 12).unwrap();
        let b1 = bracket_series(&fam, 1, 12).unwrap();
        assert!(b1.agrees_with(fam.member(1), -1, 12));
        assert!(bracket_series(&fam, 0, 12).is_err());
    }

    #[test]
    fn bracket_leading_coefficient() {
        let cat = catalog();
        let fam = standard_family(&cat, ClassLabel::C6A, FamilyKind::TraceOfPower(1), 64).unwrap();
        for m in 1..=6u64 {
            let b = bracket_series(&fam, m, 8).unwrap();
            let lead = b.coeff(-(m as i64)).unwrap();
            assert_eq!(lead, Rational::one() / rational_from_int(m as i64), "m = {m}");
            for e in -(m as i64) * 2..-(m as i64) {
                assert_eq!(b.coeff(e).unwrap(), Rational::zero(), "below leading, m = {m}");
            }
        }
    }

    #[test]
    fn bracket_coprime_coefficients_match() {
        // for the rank family every replicate is J, and the q^n coefficient
        // of f^[m] with gcd(m, n) = 1 equals the q^(mn) coefficient of J
        let cat = catalog();
        let fam = standard_family(&cat, ClassLabel::C4A, FamilyKind::Rank, 128).unwrap();
        let j = cat.hauptmodul(ClassLabel::C1A, 128).unwrap();
        for m in 2..=4u64 {
            let b = bracket_series(&fam, m, 10).unwrap();
            for n in 1..10i64 {
                if num::integer::gcd(m as i64, n) != 1 {
                    continue;
                }
                assert_eq!(
                    b.coeff(n).unwrap(),
                    j.coeff((m as i64) * n).unwrap(),
                    "m = {m}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn biexp_rows_expand_the_exponential() {
        let cat = catalog();
        let fam = standard_family(&cat, ClassLabel::C1A, FamilyKind::Rank, 60).unwrap();
        let bi = assemble_biexp(&fam, 3, 6).unwrap();
        // row 0 = 1, row 1 = -f^[1], row 2 = -f^[2] + (f^[1])^2/2
        let f1 = bracket_series(&fam, 1, 10).unwrap();
        let f2 = bracket_series(&fam, 2, 10).unwrap();
        assert!(bi.row(0).agrees_with(&LaurentSeries::one(6), -3, 6));
        assert!(bi.row(1).agrees_with(&f1.neg(), -3, 6));
        let half = Rational::one() / rational_from_int(2);
        let row2 = f2.neg().add(&f1.mul(&f1).scaled(&half));
        assert!(bi.row(2).agrees_with(&row2, -3, 6));
    }

    #[test]
    fn quasirep_j_family_exponent_one() {
        let cat = catalog();
        let fam = standard_family(&cat, ClassLabel::C1A, FamilyKind::Rank, 84).unwrap();
        let report = check_quasirep(&fam, 1, 6, 8).unwrap();
        assert!(report.passed, "violations: {:?}", report.violations);
        assert!(check_quasirep(&fam, 1, 1, 8).is_err());
    }

    #[test]
    fn quasirep_4b_trace_family() {
        // the 4B trace family (T_4B, T_2A, T_4B, T_1A) must vanish at
        // exponent 4; this exercises the embedded 4B data deeply
        let cat = catalog();
        let fam = standard_family(&cat, ClassLabel::C4B, FamilyKind::TraceOfPower(1), 84).unwrap();
        assert_eq!(
            fam.classes(),
            [ClassLabel::C4B, ClassLabel::C2A, ClassLabel::C4B, ClassLabel::C1A]
        );
        let report = check_quasirep(&fam, 4, 6, 8).unwrap();
        assert!(report.passed, "violations: {:?}", report.violations);
    }

    #[test]
    fn quasirep_insufficient_truncation_is_reported() {
        let cat = catalog();
        let fam = standard_family(&cat, ClassLabel::C4A, FamilyKind::TraceOfPower(1), 10).unwrap();
        let err = check_quasirep(&fam, 4, 6, 12).unwrap_err();
        assert!(matches!(err, QuasiRepError::InsufficientTruncation { .. }));
    }

    #[test]
    fn knz_holds_to_truncation() {
        let cat = catalog();
        assert!(knz_check(&cat, 6, 8).unwrap());
        assert!(knz_check(&cat, 1, 8).is_err());
    }

    #[test]
    fn recursion_probe_examples() {
        let cat = catalog();
        let kmax = 6u64;
        let needed = 4 * kmax as i64 + 3;
        // T_2A read as a candidate for the 4B extra function: residuals are
        // exact integers, and they all vanish, because the recursion is a
        // universal consequence of replicability and T_2A is replicable.
        // The probe cannot eliminate T_2A; only the sandwich bounds can.
        let t2a = cat.hauptmodul(ClassLabel::C2A, needed).unwrap();
        let res = recursion_probe_4b(&t2a, kmax).unwrap();
        assert!(res.iter().all(|(_, r)| r.denom() == &BigInt::one()));
        assert!(res.iter().all(|(_, r)| r.is_zero()));

        // a non-replicable candidate (all coefficients 1) fails the probe
        let mut ones = vec![Rational::one(); (needed + 1) as usize];
        ones[1] = Rational::zero(); // constant term 0
        let fake = LaurentSeries::new(-1, ones);
        let res = recursion_probe_4b(&fake, kmax).unwrap();
        assert!(res.iter().any(|(_, r)| !r.is_zero()));

        // bare q^-1 satisfies the recursion trivially (all s(n >= 2) vanish)
        // but violates the positive lower bound from T_4B
        let bare = LaurentSeries::monomial(Rational::one(), -1, needed);
        let res = recursion_probe_4b(&bare, kmax).unwrap();
        assert!(res.iter().all(|(_, r)| r.is_zero()));
        let t4b = cat.hauptmodul(ClassLabel::C4B, 2).unwrap();
        assert!(t4b.coeff(1).unwrap() > bare.coeff(1).unwrap());

        // truncation too small is an error
        assert!(recursion_probe_4b(&t2a.truncated(10), kmax).is_err());
    }
}
