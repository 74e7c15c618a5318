//! The full reproduction suite: every headline computation with its
//! published expected values, runnable at two depths. `desk` finishes in
//! seconds; `deep` pushes the same checks to larger truncations.
//!
//! Each check reports pass/fail with a one-line detail, and the acceptance
//! test target drives exactly these functions.

use std::fmt::Write as _;
use std::time::Instant;

use num::{BigInt, Zero};

use crate::decomp::{d_series_4b, decompose_4a, feasibility_6a, multiplicities_6a, trace_check};
use crate::greenring::GreenRing;
use crate::homfinder::{enumerate_characters, integer_rank, Character, CharacterTag};
use crate::modfun::{ClassLabel, HauptmodulCatalog};
use crate::quasirep::{check_quasirep, knz_check, standard_family, FamilyKind};
use crate::series::{rational_from_int, LaurentSeries, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Desk,
    Deep,
}

impl Level {
    pub fn name(&self) -> &'static str {
        match self {
            Level::Desk => "desk",
            Level::Deep => "deep",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CheckResult {
    fn run(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> CheckResult {
        let start = Instant::now();
        let outcome = f();
        let millis = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => CheckResult { name, passed: true, detail, millis },
            Err(detail) => CheckResult { name, passed: false, detail, millis },
        }
    }
}

/// Criterion 1: the complete character lists of Z4 and Z6_6A, in under a
/// second.
pub fn check_character_enumeration() -> CheckResult {
    CheckResult::run("character-enumeration", || {
        let start = Instant::now();
        let z4 = GreenRing::builtin("Z4").map_err(|e| e.to_string())?;
        let z4_chars = enumerate_characters(&z4);
        let expected_z4: Vec<Vec<i64>> = vec![
            vec![1, 1, 2, 4, 2, 3, 3, 4, 4],
            vec![1, 1, -2, 0, 2, -1, -1, 0, 0],
            vec![1, 1, 2, 0, 2, 1, 1, 2, 2],
            vec![1, -1, 0, 0, 0, 1, -1, 0, 0],
            vec![1, -1, 0, 0, 0, -1, 1, 0, 0],
            vec![1, 1, 0, 0, 0, 1, 1, 0, 0],
            vec![1, 1, 0, 0, 0, -1, -1, 0, 0],
            vec![1, 1, 0, 0, 0, 1, 1, 2, 2],
        ];
        let got: std::collections::BTreeSet<Vec<i64>> =
            z4_chars.iter().map(|c| c.values().to_vec()).collect();
        if got != expected_z4.into_iter().collect() {
            return Err(format!("Z4 tuples differ: {got:?}"));
        }
        let z6 = GreenRing::builtin("Z6_6A").map_err(|e| e.to_string())?;
        let z6_chars = enumerate_characters(&z6);
        let expected_z6: Vec<Vec<i64>> = vec![
            vec![1, 2, 3, 4, 6],
            vec![1, 0, 3, 2, 0],
            vec![1, 2, 0, 1, 0],
            vec![1, 0, 0, -1, 0],
            vec![1, 0, 0, 1, 0],
        ];
        let got6: std::collections::BTreeSet<Vec<i64>> =
            z6_chars.iter().map(|c| c.values().to_vec()).collect();
        if got6 != expected_z6.into_iter().collect() {
            return Err(format!("Z6_6A tuples differ: {got6:?}"));
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs_f64() >= 1.0 {
            return Err(format!("enumeration took {:.2}s, budget 1s", elapsed.as_secs_f64()));
        }
        Ok(format!("8 + 5 tuples in {:.0}ms", elapsed.as_secs_f64() * 1e3))
    })
}

fn adams_expected_rows() -> Vec<(&'static str, Vec<&'static str>)> {
    // rows psi^(2k+1), psi^(4k+2), psi^(8k+4), psi^(8k) on the seven basis
    // elements A, B, C, D, E, C^A, C^B. The C^B column of the second row
    // is forced by the Newton recursion and the trace identity.
    vec![
        ("2k+1", vec!["A", "B", "C", "D", "E", "C^A", "C^B"]),
        ("4k+2", vec!["A", "A", "2E-2A", "2D-2C", "2E-2B", "A+2D-2C^A", "A+2D-2C^A"]),
        ("8k+4", vec!["A", "A", "2A", "4E-4B", "2A", "3A", "3A"]),
        ("8k", vec!["A", "A", "2A", "4A", "2A", "3A", "3A"]),
    ]
}

/// Criterion 2: the Newton recursion reproduces the Adams periodicity
/// table for k = 1..16, and both non-closure counterexamples hold.
pub fn check_adams_tables() -> CheckResult {
    CheckResult::run("adams-tables", || {
        let ring = GreenRing::builtin("Z4").map_err(|e| e.to_string())?;
        let rows = adams_expected_rows();
        let mut entries = 0usize;
        for k in 1..=16u64 {
            for (row_name, expected) in &rows {
                let n = match *row_name {
                    "2k+1" => 2 * k + 1,
                    "4k+2" => 4 * k + 2,
                    "8k+4" => 8 * k + 4,
                    _ => 8 * k,
                };
                for (i, want) in expected.iter().enumerate() {
                    let x = ring.basis_element(i);
                    let got = x.adams(n).map_err(|e| e.to_string())?;
                    let want = ring.parse_element(want).map_err(|e| e.to_string())?;
                    if got != want {
                        return Err(format!(
                            "psi^{n}({}) = {got}, expected {want}",
                            ring.labels()[i]
                        ));
                    }
                    entries += 1;
                }
            }
        }
        let c = ring.element_by_label("C").map_err(|e| e.to_string())?;
        let twice = c.adams(2).and_then(|y| y.adams(2)).map_err(|e| e.to_string())?;
        let want_twice = ring.parse_element("4E-4B-2A").map_err(|e| e.to_string())?;
        let psi4 = c.adams(4).map_err(|e| e.to_string())?;
        let want_psi4 = ring.parse_element("2A").map_err(|e| e.to_string())?;
        if twice != want_twice || psi4 != want_psi4 || twice == psi4 {
            return Err("composition counterexample failed".to_string());
        }
        let sq_then = c.tensor(&c).and_then(|y| y.adams(2)).map_err(|e| e.to_string())?;
        let then_sq = c
            .adams(2)
            .and_then(|y| y.tensor(&y))
            .map_err(|e| e.to_string())?;
        if sq_then != ring.parse_element("4E-4B").map_err(|e| e.to_string())?
            || then_sq != ring.parse_element("4A").map_err(|e| e.to_string())?
            || sq_then == then_sq
        {
            return Err("multiplicativity counterexample failed".to_string());
        }
        Ok(format!("{entries} table entries for k = 1..16, plus both counterexamples"))
    })
}

/// Criterion 3: every published Hauptmodul coefficient, and agreement of
/// the eta formulas with the embedded tables.
pub fn check_hauptmodul_coefficients(
    catalog: &HauptmodulCatalog,
    crosscheck_upto: i64,
) -> CheckResult {
    CheckResult::run("hauptmodul-coefficients", || {
        for class in ClassLabel::ALL {
            let s = catalog.hauptmodul(class, 4).map_err(|e| e.to_string())?;
            let want = crate::modfun::reference_coefficients(class);
            for (i, w) in want.iter().enumerate() {
                let e = i as i64 + 1;
                if s.coeff(e) != Some(rational_from_int(*w)) {
                    return Err(format!("{class} q^{e}: expected {w}"));
                }
            }
        }
        catalog.validate_deep(crosscheck_upto).map_err(|e| e.to_string())?;
        Ok(format!(
            "7 classes pinned; eta routes match embedded data below q^{crosscheck_upto}"
        ))
    })
}

/// Criterion 4: the 4A decomposition is effective up to `nmax` and the
/// three reconstructed trace series equal T_1A, T_2B, T_4A, within 5 s.
pub fn check_decomposition_4a(catalog: &HauptmodulCatalog, nmax: i64) -> CheckResult {
    CheckResult::run("decomposition-4a", || {
        let start = Instant::now();
        let dec = decompose_4a(catalog, nmax).map_err(|e| e.to_string())?;
        for n in 0..=nmax {
            if !dec.grade(n).is_effective() {
                return Err(format!("negative multiplicity at grade {n}"));
            }
        }
        let ring = dec.ring().clone();
        let chars = enumerate_characters(&ring);
        let find = |vals: &[i64]| {
            chars
                .iter()
                .find(|c| c.values() == vals)
                .cloned()
                .ok_or_else(|| "missing character".to_string())
        };
        let pairs: Vec<(Character, ClassLabel)> = vec![
            (find(&[1, 1, 2, 4, 2, 3, 3, 4, 4])?, ClassLabel::C1A),
            (find(&[1, 1, -2, 0, 2, -1, -1, 0, 0])?, ClassLabel::C2B),
            (find(&[1, -1, 0, 0, 0, 1, -1, 0, 0])?, ClassLabel::C4A),
        ];
        for (phi, class) in &pairs {
            if !trace_check(catalog, &dec, phi, *class).map_err(|e| e.to_string())? {
                return Err(format!("trace series does not reproduce T_{class}"));
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed >= 5.0 {
            return Err(format!("took {elapsed:.2}s, budget 5s"));
        }
        Ok(format!("grades 0..={nmax} effective; 3 trace series match in {elapsed:.2}s"))
    })
}

/// Criterion 5: the 4B group-ring multiplicity series, with its published
/// first values, non-negative and integral throughout.
pub fn check_d_series_4b(catalog: &HauptmodulCatalog, nmax: i64) -> CheckResult {
    CheckResult::run("d-series-4b", || {
        let d = d_series_4b(catalog, nmax).map_err(|e| e.to_string())?;
        for (e, want) in [(1i64, 48128i64), (2, 5349376), (3, 215764992)] {
            if d.coeff(e) != Some(rational_from_int(want)) {
                return Err(format!("q^{e}: expected {want}, got {:?}", d.coeff(e)));
            }
        }
        // the group-ring share of the graded dimension, reported not asserted
        let t1a = catalog.hauptmodul(ClassLabel::C1A, nmax).map_err(|e| e.to_string())?;
        let mut trend = String::new();
        for e in [10i64, 40, nmax - 1] {
            let ratio = rational_from_int(4) * d.coeff(e).unwrap() / t1a.coeff(e).unwrap();
            let approx = ratio.numer().to_string().len() as i64 - ratio.denom().to_string().len() as i64;
            let _ = approx;
            let f = rational_to_f64(&ratio);
            let _ = write!(trend, " {f:.6}@q^{e}");
        }
        Ok(format!("q^1..q^3 pinned; 4d/t1A trend{trend}"))
    })
}

fn rational_to_f64(x: &Rational) -> f64 {
    // good enough for reporting: split through big-digit strings
    let n = x.numer();
    let d = x.denom();
    let scale = BigInt::from(1_000_000i64);
    let scaled = (n * &scale) / d;
    scaled.to_string().parse::<f64>().unwrap_or(f64::NAN) / 1e6
}

/// Criterion 6: the Koike-Norton-Zagier identity at the stated depth,
/// within 30 s, plus vanishing of every p^a q^b with a != 1, b >= 1.
pub fn check_knz(catalog: &HauptmodulCatalog, pmax: usize, qtrunc: i64) -> CheckResult {
    CheckResult::run("knz-denominator-identity", || {
        let start = Instant::now();
        if !knz_check(catalog, pmax, qtrunc).map_err(|e| e.to_string())? {
            return Err("two-variable identity failed".to_string());
        }
        // the same expansion must pass the exponent-1 vanishing scan
        let family_trunc = (qtrunc + pmax as i64) * pmax as i64;
        let fam = standard_family(catalog, ClassLabel::C1A, FamilyKind::Rank, family_trunc)
            .map_err(|e| e.to_string())?;
        let report = check_quasirep(&fam, 1, pmax, qtrunc).map_err(|e| e.to_string())?;
        if !report.passed {
            return Err(format!("exponent-1 vanishing failed: {:?}", report.violations));
        }
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed >= 30.0 {
            return Err(format!("took {elapsed:.2}s, budget 30s"));
        }
        Ok(format!("pmax {pmax}, q-depth {qtrunc} in {elapsed:.2}s"))
    })
}

/// Criterion 7: the quasi-replicability scans for the 4A families at
/// exponent 4 and the 6A families at exponent 6.
pub fn check_quasirep_families(
    catalog: &HauptmodulCatalog,
    pmax: usize,
    qtrunc: i64,
) -> CheckResult {
    CheckResult::run("quasirep-families", || {
        let family_trunc = (qtrunc + pmax as i64) * pmax as i64;
        let cases: Vec<(ClassLabel, FamilyKind, u64)> = vec![
            (ClassLabel::C4A, FamilyKind::Rank, 4),
            (ClassLabel::C4A, FamilyKind::TraceOfPower(1), 4),
            (ClassLabel::C4A, FamilyKind::TraceOfPower(2), 4),
            (ClassLabel::C4A, FamilyKind::Tate, 4),
            (ClassLabel::C6A, FamilyKind::Rank, 6),
            (ClassLabel::C6A, FamilyKind::TraceOfPower(1), 6),
        ];
        for (group, kind, exponent) in &cases {
            let fam = standard_family(catalog, *group, *kind, family_trunc)
                .map_err(|e| e.to_string())?;
            let report =
                check_quasirep(&fam, *exponent, pmax, qtrunc).map_err(|e| e.to_string())?;
            if !report.passed {
                return Err(format!(
                    "{group} {} at exponent {exponent}: {} violations, first {:?}",
                    kind.name(),
                    report.violations.len(),
                    report.violations.first()
                ));
            }
        }
        Ok(format!("{} families pass at pmax {pmax}, q-depth {qtrunc}", cases.len()))
    })
}

/// Criterion 8: the 6A feasibility intervals for 2 <= n <= nmax.
pub fn check_feasibility_6a(catalog: &HauptmodulCatalog, nmax: i64) -> CheckResult {
    CheckResult::run("feasibility-6a", || {
        for n in 2..=nmax {
            let iv = feasibility_6a(catalog, n).map_err(|e| e.to_string())?;
            let t6a = catalog
                .hauptmodul(ClassLabel::C6A, n)
                .map_err(|e| e.to_string())?
                .coeff(n - 1)
                .unwrap();
            let t3a = catalog
                .hauptmodul(ClassLabel::C3A, n)
                .map_err(|e| e.to_string())?
                .coeff(n - 1)
                .unwrap();
            let t6a = t6a.numer().clone();
            let t3a = t3a.numer().clone();
            if iv.lower > iv.upper {
                return Err(format!("empty interval at n = {n}"));
            }
            if !iv.contains(&t6a) {
                return Err(format!("T_6A coefficient not feasible at n = {n}"));
            }
            if iv.lower < t6a || iv.upper > t3a {
                return Err(format!("interval escapes the sandwich at n = {n}"));
            }
            let m = multiplicities_6a(catalog, n, &t6a).map_err(|e| e.to_string())?;
            if !m[3].is_zero() {
                return Err(format!("G(1,2,3) multiplicity nonzero at the witness, n = {n}"));
            }
        }
        Ok(format!("grades 2..={nmax}: non-empty, witness feasible, sandwich respected"))
    })
}

/// A tiny deterministic generator for the randomized property checks,
/// so reruns see the same series.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }

    fn rational(&mut self) -> Rational {
        Rational::new(BigInt::from(self.int(-9, 9)), BigInt::from(self.int(1, 9)))
    }
}

/// Criterion 9: ring axioms on every built-in table, restriction
/// homomorphisms, exp/log properties on randomized series, and the
/// Adams-trace compatibility on Z4.
pub fn check_property_suites(catalog: &HauptmodulCatalog) -> CheckResult {
    let _ = catalog;
    CheckResult::run("property-suites", || {
        // exhaustive ring axioms on all built-ins
        for name in GreenRing::BUILTIN_NAMES {
            let r = GreenRing::builtin(name).map_err(|e| e.to_string())?;
            let n = r.dimension();
            for i in 0..n {
                for j in 0..n {
                    let xy = r.basis_element(i).tensor(&r.basis_element(j)).unwrap();
                    let yx = r.basis_element(j).tensor(&r.basis_element(i)).unwrap();
                    if xy != yx {
                        return Err(format!("{name}: commutativity fails at ({i},{j})"));
                    }
                    for k in 0..n {
                        let z = r.basis_element(k);
                        let left = xy.tensor(&z).unwrap();
                        let right = r
                            .basis_element(i)
                            .tensor(&r.basis_element(j).tensor(&z).unwrap())
                            .unwrap();
                        if left != right {
                            return Err(format!("{name}: associativity fails at ({i},{j},{k})"));
                        }
                    }
                }
            }
            // restriction maps are ring homomorphisms
            for restriction in r.restrictions() {
                let t = restriction.target().clone();
                for i in 0..n {
                    for j in i..n {
                        let x = r.basis_element(i);
                        let y = r.basis_element(j);
                        let lhs = x.tensor(&y).unwrap().restrict(&t).unwrap();
                        let rhs =
                            x.restrict(&t).unwrap().tensor(&y.restrict(&t).unwrap()).unwrap();
                        if lhs != rhs {
                            return Err(format!("{name}: restriction breaks at ({i},{j})"));
                        }
                    }
                }
            }
            // enumerated characters stay linearly independent
            let chars = enumerate_characters(&r);
            let rows: Vec<Vec<i64>> = chars.iter().map(|c| c.values().to_vec()).collect();
            if integer_rank(&rows) != rows.len() {
                return Err(format!("{name}: characters are linearly dependent"));
            }
        }

        // exp/log inverse and homomorphism properties on randomized series
        let mut rng = SplitMix(0x6d6f6f6e72696e67);
        let trunc = 14i64;
        for round in 0..100 {
            let mut xs = Vec::new();
            for _ in 0..2 {
                let coeffs: Vec<Rational> =
                    (1..trunc).map(|_| rng.rational()).collect();
                xs.push(LaurentSeries::from_parts(1, trunc, coeffs).unwrap());
            }
            let (x, y) = (&xs[0], &xs[1]);
            let ex = x.exp().map_err(|e| e.to_string())?;
            let back = ex.log().map_err(|e| e.to_string())?;
            if !back.agrees_with(x, 1, trunc) {
                return Err(format!("log(exp(x)) != x at round {round}"));
            }
            let sum = x.add(y).exp().map_err(|e| e.to_string())?;
            let prod = ex.mul(&y.exp().map_err(|e| e.to_string())?);
            if !sum.agrees_with(&prod, 0, trunc) {
                return Err(format!("exp(x+y) != exp(x)exp(y) at round {round}"));
            }
        }

        // Adams-trace compatibility on Z4: phi_j(psi^k x) = phi_(jk)(x)
        let z4 = GreenRing::builtin("Z4").map_err(|e| e.to_string())?;
        for j in 0..4u64 {
            let phi = Character::from_trace(&z4, j);
            if j == 0 && phi.tag() != CharacterTag::Rank {
                return Err("trace row 0 should be the rank character".to_string());
            }
            for k in 1..=8u64 {
                let want = z4.trace_tuple(j * k);
                for i in 0..7 {
                    let got = phi
                        .apply(&z4.basis_element(i).adams(k).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                    if got != BigInt::from(want[i]) {
                        return Err(format!(
                            "phi_{j}(psi^{k} {}) != tr g^{}",
                            z4.labels()[i],
                            j * k
                        ));
                    }
                }
            }
        }
        Ok("ring axioms, restrictions, 100 exp/log rounds, Adams-trace compatibility".to_string())
    })
}

/// Run the whole suite at the chosen level. Returns results and overall
/// success.
pub fn run_all(level: Level) -> (Vec<CheckResult>, bool) {
    let (dec_n, cross, knz_p, knz_q, qr_q, feas_n, d_n) = match level {
        Level::Desk => (100, 101, 8, 8, 12, 60, 101),
        Level::Deep => (200, 160, 10, 10, 16, 100, 200),
    };
    let mut out = Vec::new();
    out.push(check_character_enumeration());
    out.push(check_adams_tables());
    match HauptmodulCatalog::load() {
        Ok(catalog) => {
            out.push(check_hauptmodul_coefficients(&catalog, cross));
            out.push(check_decomposition_4a(&catalog, dec_n));
            out.push(check_d_series_4b(&catalog, d_n));
            out.push(check_knz(&catalog, knz_p, knz_q));
            out.push(check_quasirep_families(&catalog, 6, qr_q));
            out.push(check_feasibility_6a(&catalog, feas_n));
            out.push(check_property_suites(&catalog));
        }
        Err(e) => {
            out.push(CheckResult {
                name: "catalog-load",
                passed: false,
                detail: e.to_string(),
                millis: 0,
            });
        }
    }
    let ok = out.iter().all(|r| r.passed);
    (out, ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_level_passes() {
        // the full desk suite is exercised by the acceptance test target;
        // here we spot-run the two cheapest checks
        let r = check_character_enumeration();
        assert!(r.passed, "{}", r.detail);
        let r = check_adams_tables();
        assert!(r.passed, "{}", r.detail);
    }
}
