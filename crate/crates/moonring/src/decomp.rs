//! Indecomposable multiplicities of the graded Moonshine module.
//!
//! For a 4A generator the decomposition is exact: grade n splits as
//! `a_n A + d_n D + c_n C^A` with the multiplicities given by a fixed
//! rational matrix applied to the coefficient vectors of (T_1A, T_2B,
//! T_4A) at q^(n-1). For 4B only the group-ring multiplicity d_n is
//! determined, as the q^(n-1) coefficient of (T_1A - T_2A)/4. For 6A the
//! multiplicities are underdetermined by one integer X, and this module
//! solves the 5x5 integer system for the exact feasible set of X.
//!
//! Grade indexing: grade n corresponds to the q^(n-1) coefficient, and
//! grade 1 is identically zero.

use std::sync::Arc;

use num::traits::Euclid;
use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::greenring::{GreenRing, GreenRingError, RingElement};
use crate::homfinder::Character;
use crate::modfun::{ClassLabel, HauptmodulCatalog, ModfunError};
use crate::series::LaurentSeries;

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("grade {0} multiplicity is not a non-negative integer: {1}")]
    BadMultiplicity(i64, String),
    #[error("grade {0}: rank does not reproduce the graded dimension")]
    RankMismatch(i64),
    #[error("feasibility needs grade n >= 2, got {0}")]
    GradeTooSmall(i64),
    #[error("the 6A system is infeasible at grade {n}: {reason}")]
    Infeasible { n: i64, reason: String },
    #[error(transparent)]
    Modfun(#[from] ModfunError),
    #[error(transparent)]
    Ring(#[from] GreenRingError),
}

/// The multiplicities of the indecomposables in each grade, as elements of
/// the relevant Green ring.
#[derive(Debug, Clone)]
pub struct Decomposition {
    ring: Arc<GreenRing>,
    nmax: i64,
    mults: Vec<RingElement>,
}

impl Decomposition {
    pub fn ring(&self) -> &Arc<GreenRing> {
        &self.ring
    }

    pub fn nmax(&self) -> i64 {
        self.nmax
    }

    /// Multiplicity element of grade `n` (`0 <= n <= nmax`).
    pub fn grade(&self, n: i64) -> &RingElement {
        &self.mults[n as usize]
    }

    pub fn grades(&self) -> &[RingElement] {
        &self.mults
    }
}

fn integer_part(x: &BigRational, n: i64) -> Result<BigInt, DecompError> {
    if !x.denom().is_one() {
        return Err(DecompError::BadMultiplicity(n, x.to_string()));
    }
    Ok(x.numer().clone())
}

/// Exact 4A decomposition for grades `0..=nmax`:
/// `a = (t2B + t4A)/2`, `d = (t1A + t2B - 2 t4A)/4`, `c = (t4A - t2B)/2`,
/// all read off the q^(n-1) coefficients. Fails if any multiplicity is
/// negative or non-integral, or if the ranks do not add back up to the
/// graded dimension.
pub fn decompose_4a(
    catalog: &HauptmodulCatalog,
    nmax: i64,
) -> Result<Decomposition, DecompError> {
    let ring = GreenRing::builtin("Z4")?;
    let t1a = catalog.hauptmodul(ClassLabel::C1A, nmax)?;
    let t2b = catalog.hauptmodul(ClassLabel::C2B, nmax)?;
    let t4a = catalog.hauptmodul(ClassLabel::C4A, nmax)?;
    let idx_a = ring.label_index("A")?;
    let idx_d = ring.label_index("D")?;
    let idx_ca = ring.label_index("C^A")?;
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));

    let mut mults = Vec::with_capacity(nmax as usize + 1);
    for n in 0..=nmax {
        let e = n - 1;
        let x1 = t1a.coeff(e).expect("within truncation");
        let x2 = t2b.coeff(e).expect("within truncation");
        let x4 = t4a.coeff(e).expect("within truncation");
        let a = integer_part(&((&x2 + &x4) / &two), n)?;
        let d = integer_part(&((&x1 + &x2 - &two * &x4) / &four), n)?;
        let c = integer_part(&((&x4 - &x2) / &two), n)?;
        for m in [&a, &d, &c] {
            if m.is_negative() {
                return Err(DecompError::BadMultiplicity(n, m.to_string()));
            }
        }
        let mut coeffs = vec![BigInt::zero(); ring.dimension()];
        coeffs[idx_a] = a;
        coeffs[idx_d] = d;
        coeffs[idx_ca] = c;
        let element = ring.element_from_coeffs(coeffs);
        if BigRational::from_integer(element.rank()) != x1 {
            return Err(DecompError::RankMismatch(n));
        }
        mults.push(element);
    }
    Ok(Decomposition { ring, nmax, mults })
}

/// The group-ring multiplicity series for 4B:
/// `sum d_n q^(n-1) = (T_1A - T_2A)/4`, known up to `q^(nmax-1)`.
pub fn d_series_4b(
    catalog: &HauptmodulCatalog,
    nmax: i64,
) -> Result<LaurentSeries, DecompError> {
    let t1a = catalog.hauptmodul(ClassLabel::C1A, nmax)?;
    let t2a = catalog.hauptmodul(ClassLabel::C2A, nmax)?;
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let d = t1a.sub(&t2a).scaled(&quarter);
    for e in -1..d.trunc() {
        let c = d.coeff(e).unwrap();
        if !c.denom().is_one() {
            return Err(DecompError::BadMultiplicity(e + 1, c.to_string()));
        }
        if c.is_negative() {
            return Err(DecompError::BadMultiplicity(e + 1, c.to_string()));
        }
    }
    Ok(d)
}

/// The exact set of values X of the undetermined 6A character for which
/// all five multiplicities are non-negative integers:
/// `{lower, lower + stride, ..., upper}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityInterval {
    pub n: i64,
    pub lower: BigInt,
    pub upper: BigInt,
    pub stride: BigInt,
}

impl FeasibilityInterval {
    pub fn contains(&self, x: &BigInt) -> bool {
        if x < &self.lower || x > &self.upper {
            return false;
        }
        ((x - &self.lower) % &self.stride).is_zero()
    }
}

struct GradeData {
    t1a: BigInt,
    t2a: BigInt,
    t3a: BigInt,
    t6a: BigInt,
}

fn grade_data(catalog: &HauptmodulCatalog, n: i64) -> Result<GradeData, DecompError> {
    let e = n - 1;
    let get = |class: ClassLabel| -> Result<BigInt, DecompError> {
        let s = catalog.hauptmodul(class, n)?;
        let c = s.coeff(e).expect("within truncation");
        Ok(c.numer().clone())
    };
    Ok(GradeData {
        t1a: get(ClassLabel::C1A)?,
        t2a: get(ClassLabel::C2A)?,
        t3a: get(ClassLabel::C3A)?,
        t6a: get(ClassLabel::C6A)?,
    })
}

/// Multiplicities `(m1, m12, m13, m123, mD)` of
/// `(G1, G(1,2), G(1,3), G(1,2,3), D)` at grade `n`, given the value `x`
/// of the undetermined character. Errors if any entry fails to be a
/// non-negative integer.
pub fn multiplicities_6a(
    catalog: &HauptmodulCatalog,
    n: i64,
    x: &BigInt,
) -> Result<[BigInt; 5], DecompError> {
    if n < 2 {
        return Err(DecompError::GradeTooSmall(n));
    }
    let g = grade_data(catalog, n)?;
    let exact_div = |num: BigInt, den: i64| -> Result<BigInt, DecompError> {
        let den = BigInt::from(den);
        if (&num % &den).is_zero() {
            Ok(num / den)
        } else {
            Err(DecompError::BadMultiplicity(n, format!("{num}/{den}")))
        }
    };
    let m1 = exact_div(&g.t6a + x, 2)?;
    let m123 = exact_div(x - &g.t6a, 2)?;
    let m12 = exact_div(&g.t3a - x, 2)?;
    let m13 = exact_div(BigInt::from(2) * &g.t2a + &g.t6a - BigInt::from(3) * x, 6)?;
    let md = exact_div(&g.t1a - &g.t2a - &g.t3a + &g.t6a, 6)?;
    let out = [m1, m12, m13, m123, md];
    for m in &out {
        if m.is_negative() {
            return Err(DecompError::BadMultiplicity(n, m.to_string()));
        }
    }
    // the five character equations, re-checked directly
    let [ref m1, ref m12, ref m13, ref m123, ref md] = out;
    let rank = m1 + BigInt::from(2) * m12 + BigInt::from(3) * m13
        + BigInt::from(4) * m123
        + BigInt::from(6) * md;
    debug_assert_eq!(rank, g.t1a);
    let tr_g3 = m1 + BigInt::from(3) * m13 + BigInt::from(2) * m123;
    debug_assert_eq!(tr_g3, g.t2a);
    Ok(out)
}

/// Solve the 6A system at grade `n` for the feasible set of the
/// undetermined character value X. The returned interval always contains
/// the T_6A coefficient (with zero G(1,2,3) multiplicity) and sits inside
/// the sandwich `[t6A(n), t3A(n)]`.
pub fn feasibility_6a(
    catalog: &HauptmodulCatalog,
    n: i64,
) -> Result<FeasibilityInterval, DecompError> {
    if n < 2 {
        return Err(DecompError::GradeTooSmall(n));
    }
    let g = grade_data(catalog, n)?;
    let infeasible = |reason: &str| DecompError::Infeasible { n, reason: reason.to_string() };

    // parity and congruence conditions that do not involve X
    if !((&g.t3a - &g.t6a) % BigInt::from(2)).is_zero() {
        return Err(infeasible("t3A and t6A have different parity"));
    }
    if !((&g.t2a - &g.t6a) % BigInt::from(3)).is_zero() {
        return Err(infeasible("t2A and t6A differ modulo 3"));
    }
    let md6 = &g.t1a - &g.t2a - &g.t3a + &g.t6a;
    if !(&md6 % BigInt::from(6)).is_zero() || md6.is_negative() {
        return Err(infeasible("group-ring multiplicity is not a non-negative integer"));
    }

    // m1 >= 0:   x >= -t6A;  m123 >= 0: x >= t6A
    // m12 >= 0:  x <= t3A;   m13 >= 0:  x <= (2 t2A + t6A)/3
    let lower = std::cmp::max(g.t6a.clone(), -g.t6a.clone());
    let cap = (BigInt::from(2) * &g.t2a + &g.t6a).div_euclid(&BigInt::from(3));
    let mut upper = std::cmp::min(g.t3a.clone(), cap);
    // feasible X shares the parity of t6A
    let misalign = (&upper - &lower).modpow(&BigInt::one(), &BigInt::from(2));
    upper -= misalign;
    if lower > upper {
        return Err(infeasible("empty feasible interval"));
    }
    Ok(FeasibilityInterval { n, lower, upper, stride: BigInt::from(2) })
}

/// True iff the series `sum phi(grade n) q^(n-1)` rebuilt from the
/// decomposition equals the catalog Hauptmodul of `class_of_phi` over the
/// whole computed range.
pub fn trace_check(
    catalog: &HauptmodulCatalog,
    dec: &Decomposition,
    phi: &Character,
    class_of_phi: ClassLabel,
) -> Result<bool, DecompError> {
    let target = catalog.hauptmodul(class_of_phi, dec.nmax())?;
    for n in 0..=dec.nmax() {
        let value = phi.apply(dec.grade(n))?;
        let want = target.coeff(n - 1).expect("within truncation");
        if BigRational::from_integer(value) != want {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homfinder::{enumerate_characters, CharacterTag};

    fn catalog() -> HauptmodulCatalog {
        HauptmodulCatalog::load().unwrap()
    }

    fn triple(dec: &Decomposition, n: i64) -> (BigInt, BigInt, BigInt) {
        let g = dec.grade(n);
        (
            g.coeff("A").unwrap(),
            g.coeff("D").unwrap(),
            g.coeff("C^A").unwrap(),
        )
    }

    #[test]
    fn decompose_4a_low_grades() {
        // hand-applied matrix: grade 0 from (1,1,1), grade 2 from
        // (196884, 276, 276), grade 3 from (21493760, -2048, 2048)
        let dec = decompose_4a(&catalog(), 5).unwrap();
        assert_eq!(triple(&dec, 0), (BigInt::one(), BigInt::zero(), BigInt::zero()));
        assert!(dec.grade(1).is_zero());
        assert_eq!(
            triple(&dec, 2),
            (BigInt::from(276), BigInt::from(49152), BigInt::zero())
        );
        assert_eq!(
            triple(&dec, 3),
            (BigInt::zero(), BigInt::from(5371904), BigInt::from(2048))
        );
        // rank cross-check of the frozen grade-2 values
        assert_eq!(276 + 4 * 49152, 196884);
    }

    #[test]
    fn decompose_4a_is_effective_and_traces_back() {
        let cat = catalog();
        let dec = decompose_4a(&cat, 60).unwrap();
        for n in 0..=60 {
            assert!(dec.grade(n).is_effective(), "grade {n}");
        }
        let ring = dec.ring().clone();
        let chars = enumerate_characters(&ring);
        let by_values = |v: &[i64]| {
            chars
                .iter()
                .find(|c| c.values() == v)
                .cloned()
                .expect("character present")
        };
        let rank = by_values(&[1, 1, 2, 4, 2, 3, 3, 4, 4]);
        let tr_g2 = by_values(&[1, 1, -2, 0, 2, -1, -1, 0, 0]);
        let tr_g = by_values(&[1, -1, 0, 0, 0, 1, -1, 0, 0]);
        assert!(trace_check(&cat, &dec, &rank, ClassLabel::C1A).unwrap());
        assert!(trace_check(&cat, &dec, &tr_g2, ClassLabel::C2B).unwrap());
        assert!(trace_check(&cat, &dec, &tr_g, ClassLabel::C4A).unwrap());
        // and a deliberately wrong pairing fails
        assert!(!trace_check(&cat, &dec, &tr_g, ClassLabel::C2B).unwrap());
    }

    #[test]
    fn tate_series_splits_into_a_plus_c() {
        // Tate = a + c and trace-of-g^2 = a - c, coefficientwise
        let cat = catalog();
        let dec = decompose_4a(&cat, 40).unwrap();
        let ring = dec.ring().clone();
        let chars = enumerate_characters(&ring);
        let tate = chars.iter().find(|c| c.tag() == CharacterTag::Tate).unwrap();
        let tr_g2 = chars.iter().find(|c| c.tag() == CharacterTag::TraceOfPower(2)).unwrap();
        for n in 0..=40 {
            let (a, _, c) = triple(&dec, n);
            assert_eq!(tate.apply(dec.grade(n)).unwrap(), &a + &c, "tate at {n}");
            assert_eq!(tr_g2.apply(dec.grade(n)).unwrap(), &a - &c, "tr g^2 at {n}");
        }
    }

    #[test]
    fn d_series_4b_published_values() {
        let d = d_series_4b(&catalog(), 5).unwrap();
        assert_eq!(d.coeff(0).unwrap(), BigRational::zero());
        assert_eq!(d.coeff(1).unwrap(), BigRational::from_integer(BigInt::from(48128)));
        assert_eq!(d.coeff(2).unwrap(), BigRational::from_integer(BigInt::from(5349376)));
        assert_eq!(
            d.coeff(3).unwrap(),
            BigRational::from_integer(BigInt::from(215764992))
        );
    }

    #[test]
    fn feasibility_6a_grade_two() {
        let cat = catalog();
        let interval = feasibility_6a(&cat, 2).unwrap();
        let x = BigInt::from(79);
        assert!(interval.contains(&x));
        assert_eq!(interval.lower, x); // lower bound is the T_6A coefficient
        let m = multiplicities_6a(&cat, 2, &x).unwrap();
        let want = [79, 352, 1431, 0, 31968].map(BigInt::from);
        assert_eq!(m, want);
        assert!(feasibility_6a(&cat, 1).is_err());
    }

    #[test]
    fn feasibility_6a_sandwich() {
        let cat = catalog();
        for n in 2..=30 {
            let t6a = cat.hauptmodul(ClassLabel::C6A, n).unwrap();
            let t3a = cat.hauptmodul(ClassLabel::C3A, n).unwrap();
            let lo = t6a.coeff(n - 1).unwrap();
            let hi = t3a.coeff(n - 1).unwrap();
            let iv = feasibility_6a(&cat, n).unwrap();
            assert!(iv.lower <= iv.upper, "non-empty at {n}");
            assert_eq!(BigRational::from_integer(iv.lower.clone()), lo, "lower at {n}");
            assert!(BigRational::from_integer(iv.upper.clone()) <= hi, "upper at {n}");
            // the conjectured witness: X = t6A with zero G(1,2,3) part
            let c = iv.lower.clone();
            let m = multiplicities_6a(&cat, n, &c).unwrap();
            assert!(m[3].is_zero(), "m123 at {n}");
        }
    }
}
