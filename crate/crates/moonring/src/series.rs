//! Exact Laurent series and truncated bivariate series over big rationals.
//!
//! A [`LaurentSeries`] stores coefficients for exponents `valuation..trunc`;
//! exponents at or above `trunc` are *unknown*, not zero. Every operation
//! propagates truncation pessimistically, so each reported coefficient is
//! fully determined by the inputs. Coefficients are `num::BigRational`, so
//! no operation ever rounds.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact coefficient type used throughout the crate.
pub type Rational = BigRational;

/// Schoolbook multiplication switches to divide-and-conquer above this size.
const KARATSUBA_THRESHOLD: usize = 48;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("exponential needs valuation >= 1; nonzero coefficient at q^{0}")]
    ExpDomain(i64),
    #[error("logarithm needs constant term 1 (and no negative exponents)")]
    LogDomain,
    #[error("cannot invert a series that vanishes to its truncation")]
    InvertZero,
    #[error("dilation factor must be >= 1, got {0}")]
    DilationFactor(i64),
    #[error("bivariate exponential needs an identically zero p^0 row")]
    BiExpRowZero,
    #[error("coefficient at q^{0} is beyond the truncation {1}")]
    BeyondTruncation(i64, i64),
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
    #[error("coefficient list has {got} entries, expected trunc - valuation = {want}")]
    LengthMismatch { got: usize, want: i64 },
}

pub fn rational_from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"num/den"` or a plain integer literal.
pub fn parse_rational(s: &str) -> Result<Rational, SeriesError> {
    let bad = || SeriesError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.trim().parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Render exactly: integers as `n`, fractions as `num/den`.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A Laurent series with explicit truncation.
///
/// `coeffs[i]` is the coefficient of `q^(valuation + i)` and
/// `coeffs.len() == trunc - valuation`. Leading zeros may be stored;
/// equality ignores them.
#[derive(Debug, Clone)]
pub struct LaurentSeries {
    valuation: i64,
    trunc: i64,
    coeffs: Vec<Rational>,
}

impl LaurentSeries {
    pub fn new(valuation: i64, coeffs: Vec<Rational>) -> Self {
        let trunc = valuation + coeffs.len() as i64;
        LaurentSeries { valuation, trunc, coeffs }
    }

    pub fn from_parts(
        valuation: i64,
        trunc: i64,
        coeffs: Vec<Rational>,
    ) -> Result<Self, SeriesError> {
        if coeffs.len() as i64 != trunc - valuation {
            return Err(SeriesError::LengthMismatch { got: coeffs.len(), want: trunc - valuation });
        }
        Ok(LaurentSeries { valuation, trunc, coeffs })
    }

    /// The zero series known up to `trunc`.
    pub fn zero(trunc: i64) -> Self {
        LaurentSeries { valuation: trunc, trunc, coeffs: Vec::new() }
    }

    pub fn constant(value: Rational, trunc: i64) -> Self {
        if trunc <= 0 {
            return Self::zero(trunc);
        }
        let mut coeffs = vec![Rational::zero(); trunc as usize];
        coeffs[0] = value;
        LaurentSeries { valuation: 0, trunc, coeffs }
    }

    pub fn one(trunc: i64) -> Self {
        Self::constant(Rational::one(), trunc)
    }

    /// `c * q^e`, known up to `trunc`.
    pub fn monomial(c: Rational, e: i64, trunc: i64) -> Self {
        if e >= trunc {
            return Self::zero(trunc);
        }
        let mut coeffs = vec![Rational::zero(); (trunc - e) as usize];
        coeffs[0] = c;
        LaurentSeries { valuation: e, trunc, coeffs }
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Lowest exponent with a nonzero known coefficient, if any.
    pub fn order(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.valuation + i as i64)
    }

    /// Coefficient of `q^e`; `None` when `e >= trunc` (unknown).
    pub fn coeff(&self, e: i64) -> Option<Rational> {
        if e >= self.trunc {
            return None;
        }
        if e < self.valuation {
            return Some(Rational::zero());
        }
        Some(self.coeffs[(e - self.valuation) as usize].clone())
    }

    /// Coefficient of `q^e`, or an error when unknown.
    pub fn coeff_checked(&self, e: i64) -> Result<Rational, SeriesError> {
        self.coeff(e).ok_or(SeriesError::BeyondTruncation(e, self.trunc))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when all known coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// Drop knowledge above `t` (no-op if `t >= trunc`).
    pub fn truncated(&self, t: i64) -> Self {
        if t >= self.trunc {
            return self.clone();
        }
        if t <= self.valuation {
            return Self::zero(t);
        }
        let len = (t - self.valuation) as usize;
        LaurentSeries {
            valuation: self.valuation,
            trunc: t,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// Multiply by `q^k`.
    pub fn shifted(&self, k: i64) -> Self {
        LaurentSeries {
            valuation: self.valuation + k,
            trunc: self.trunc + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            valuation: self.valuation,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        LaurentSeries {
            valuation: self.valuation,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let valuation = self.valuation.min(other.valuation).min(trunc);
        let len = (trunc - valuation) as usize;
        let mut coeffs = vec![Rational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.valuation + i as i64;
            if e < trunc {
                coeffs[(e - valuation) as usize] += c;
            }
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let e = other.valuation + i as i64;
            if e < trunc {
                coeffs[(e - valuation) as usize] += c;
            }
        }
        LaurentSeries { valuation, trunc, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Cauchy product. The result truncation is chosen so that every
    /// reported coefficient is fully determined:
    /// `trunc = min(trunc_a + val_b, trunc_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let valuation = self.valuation + other.valuation;
        let trunc = (self.trunc + other.valuation).min(other.trunc + self.valuation);
        let len = (trunc - valuation).max(0) as usize;
        if len == 0 {
            return LaurentSeries { valuation, trunc: valuation, coeffs: Vec::new() };
        }
        let coeffs = if self.coeffs.len().min(other.coeffs.len()) >= KARATSUBA_THRESHOLD {
            let mut full = karatsuba(&self.coeffs, &other.coeffs);
            full.truncate(len);
            full.resize(len, Rational::zero());
            full
        } else {
            convolve_prefix(&self.coeffs, &other.coeffs, len)
        };
        LaurentSeries { valuation, trunc, coeffs }
    }

    /// Multiplicative inverse; needs a nonzero known coefficient.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let v0 = self.order().ok_or(SeriesError::InvertZero)?;
        let lead = self.coeff(v0).unwrap();
        let n = (self.trunc - v0) as usize;
        let x = |e: i64| -> Rational {
            self.coeff(e).unwrap_or_else(Rational::zero)
        };
        // y has valuation -v0 and trunc - 2*v0; y[m] indexes q^(-v0 + m)
        let mut y = vec![Rational::zero(); n];
        y[0] = Rational::one() / &lead;
        for m in 1..n {
            let mut acc = Rational::zero();
            for (k, yk) in y.iter().enumerate().take(m) {
                if !yk.is_zero() {
                    acc += yk * x(v0 + (m - k) as i64);
                }
            }
            y[m] = -acc / &lead;
        }
        Ok(LaurentSeries { valuation: -v0, trunc: self.trunc - 2 * v0, coeffs: y })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, n: i64) -> Result<Self, SeriesError> {
        if n == 0 {
            return Ok(Self::one(self.trunc));
        }
        let (mut base, mut e) = if n < 0 {
            (self.inverse()?, (-n) as u64)
        } else {
            (self.clone(), n as u64)
        };
        let mut acc: Option<LaurentSeries> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc.unwrap())
    }

    /// Substitution q -> q^k; the coefficient of `q^(k*n)` in the output is
    /// the coefficient of `q^n` in the input, and truncation scales by `k`.
    pub fn dilate(&self, k: i64) -> Result<Self, SeriesError> {
        if k < 1 {
            return Err(SeriesError::DilationFactor(k));
        }
        let valuation = self.valuation * k;
        let trunc = self.trunc * k;
        let mut coeffs = vec![Rational::zero(); (trunc - valuation) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        Ok(LaurentSeries { valuation, trunc, coeffs })
    }

    /// Formal exponential, defined for valuation >= 1, via
    /// `(exp x)' = x' exp x`. The constant term is 1.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.valuation + i as i64;
            if e <= 0 && !c.is_zero() {
                return Err(SeriesError::ExpDomain(e));
            }
        }
        let trunc = self.trunc.max(1);
        let n = trunc as usize;
        let mut out = vec![Rational::zero(); n];
        out[0] = Rational::one();
        for m in 1..n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                if let Some(xk) = self.coeff(k as i64) {
                    if !xk.is_zero() {
                        acc += xk * rational_from_int(k as i64) * &out[m - k];
                    }
                }
            }
            out[m] = acc / rational_from_int(m as i64);
        }
        Ok(LaurentSeries { valuation: 0, trunc, coeffs: out })
    }

    /// Formal logarithm, defined for constant term 1; the result has
    /// constant term 0 and `exp(log x) = x` to truncation.
    pub fn log(&self) -> Result<Self, SeriesError> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.valuation + (i as i64) < 0 && !c.is_zero() {
                return Err(SeriesError::LogDomain);
            }
        }
        match self.coeff(0) {
            Some(c) if c.is_one() => {}
            _ => return Err(SeriesError::LogDomain),
        }
        let n = self.trunc as usize;
        let mut y = vec![Rational::zero(); n];
        for m in 1..n {
            let xm = self.coeff(m as i64).unwrap();
            let mut acc = Rational::zero();
            for (k, yk) in y.iter().enumerate().take(m).skip(1) {
                if !yk.is_zero() {
                    let xmk = self.coeff((m - k) as i64).unwrap();
                    if !xmk.is_zero() {
                        acc += rational_from_int(k as i64) * yk * xmk;
                    }
                }
            }
            y[m] = xm - acc / rational_from_int(m as i64);
        }
        Ok(LaurentSeries { valuation: 0, trunc: self.trunc, coeffs: y })
    }

    /// True when the two series have the same truncation and the same
    /// coefficients after dropping leading zeros.
    fn normalized(&self) -> (i64, &[Rational], i64) {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => (self.valuation + i as i64, &self.coeffs[i..], self.trunc),
            None => (self.trunc, &[], self.trunc),
        }
    }

    /// Compare known coefficients on `lo..hi`; both series must know the
    /// whole range.
    pub fn agrees_with(&self, other: &Self, lo: i64, hi: i64) -> bool {
        if hi > self.trunc || hi > other.trunc {
            return false;
        }
        (lo..hi).all(|e| self.coeff(e) == other.coeff(e))
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            valuation: self.valuation,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self, SeriesError> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(j.valuation, j.trunc, coeffs)
    }
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

impl Eq for LaurentSeries {}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.valuation + i as i64;
            if wrote {
                if c.is_positive() {
                    write!(f, " + ")?;
                } else {
                    write!(f, " - ")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match e {
                0 => write!(f, "{}", format_rational(&a))?,
                1 if a.is_one() => write!(f, "q")?,
                1 => write!(f, "{}*q", format_rational(&a))?,
                _ if a.is_one() => write!(f, "q^{e}")?,
                _ => write!(f, "{}*q^{e}", format_rational(&a))?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc)
    }
}

/// Serialized form: `{valuation, trunc, coeffs: ["num/den" | "n", ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub valuation: i64,
    pub trunc: i64,
    pub coeffs: Vec<String>,
}

fn convolve_prefix(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if i >= len {
            break;
        }
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Full product of two coefficient slices, divide-and-conquer.
fn karatsuba(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD {
        return convolve_prefix(a, b, a.len() + b.len() - 1);
    }
    let m = a.len().min(b.len()) / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let asum = slice_add(a0, a1);
    let bsum = slice_add(b0, b1);
    let mut z1 = karatsuba(&asum, &bsum);
    for (i, v) in z0.iter().enumerate() {
        z1[i] -= v;
    }
    for (i, v) in z2.iter().enumerate() {
        z1[i] -= v;
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, v) in z0.into_iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in z1.into_iter().enumerate() {
        out[i + m] += v;
    }
    for (i, v) in z2.into_iter().enumerate() {
        out[i + 2 * m] += v;
    }
    out
}

fn slice_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] += v;
    }
    out
}

/// A truncated series in `p` whose coefficients are Laurent series in `q`.
///
/// `rows[m]` is the coefficient of `p^m` for `0 <= m <= pmax`; rows beyond
/// `pmax` are unknown. All rows share a common q-truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    rows: Vec<LaurentSeries>,
}

impl BiSeries {
    /// Build from rows, lowering all rows to the common q-truncation.
    pub fn new(rows: Vec<LaurentSeries>) -> Self {
        assert!(!rows.is_empty(), "a BiSeries needs at least the p^0 row");
        let common = rows.iter().map(|r| r.trunc()).min().unwrap();
        BiSeries { rows: rows.into_iter().map(|r| r.truncated(common)).collect() }
    }

    pub fn pmax(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn qtrunc(&self) -> i64 {
        self.rows[0].trunc()
    }

    pub fn row(&self, m: usize) -> &LaurentSeries {
        &self.rows[m]
    }

    pub fn rows(&self) -> &[LaurentSeries] {
        &self.rows
    }

    /// Coefficient of `p^a q^b`; `None` when outside the known region.
    pub fn coeff(&self, a: usize, b: i64) -> Option<Rational> {
        self.rows.get(a).and_then(|r| r.coeff(b))
    }

    /// Exponential in the p-adic sense: requires row 0 to vanish, and then
    /// output row m depends only on input rows 1..=m. Row 0 of the output
    /// is the constant 1.
    pub fn exp(&self) -> Result<BiSeries, SeriesError> {
        if !self.rows[0].is_zero() {
            return Err(SeriesError::BiExpRowZero);
        }
        let pmax = self.pmax();
        let qt = self.qtrunc();
        let mut out: Vec<LaurentSeries> = Vec::with_capacity(pmax + 1);
        out.push(LaurentSeries::one(qt + pmax as i64 + 1));
        for m in 1..=pmax {
            let mut acc = LaurentSeries::zero(qt + pmax as i64 + 1);
            for j in 1..=m {
                let term = self.rows[j].scaled(&rational_from_int(j as i64));
                acc = acc.add(&term.mul(&out[m - j]));
            }
            out.push(acc.scaled(&(Rational::one() / rational_from_int(m as i64))));
        }
        Ok(BiSeries::new(out))
    }

    pub fn to_json(&self) -> Vec<SeriesJson> {
        self.rows.iter().map(|r| r.to_json()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(val: i64, ints: &[i64]) -> LaurentSeries {
        LaurentSeries::new(val, ints.iter().map(|&n| rational_from_int(n)).collect())
    }

    #[test]
    fn add_examples() {
        let qinv = series(-1, &[1]);
        let two_qinv = qinv.add(&qinv);
        assert_eq!(two_qinv.coeff(-1).unwrap(), rational_from_int(2));

        let x = series(0, &[3, 1, 4]);
        let zero = LaurentSeries::zero(3);
        assert_eq!(x.add(&zero), x);

        let a = series(0, &[1, 1]);
        let b = series(0, &[1, -1]);
        let sum = a.add(&b);
        assert_eq!(sum, series(0, &[2, 0]));
    }

    #[test]
    fn mul_examples() {
        let a = series(0, &[1, 1, 0, 0]);
        let b = series(0, &[1, -1, 0, 0]);
        let p = a.mul(&b);
        assert_eq!(p.coeff(0).unwrap(), rational_from_int(1));
        assert_eq!(p.coeff(1).unwrap(), rational_from_int(0));
        assert_eq!(p.coeff(2).unwrap(), rational_from_int(-1));

        let qinv = series(-1, &[1, 0]);
        let q = series(1, &[1]);
        assert_eq!(qinv.mul(&q).coeff(0).unwrap(), rational_from_int(1));
    }

    #[test]
    fn mul_truncation_is_pessimistic() {
        // (1+q) known to q^2 times q^3 known to q^5: product known to q^5
        let a = series(0, &[1, 1]);
        let b = series(3, &[1, 0]);
        let p = a.mul(&b);
        assert_eq!(p.valuation(), 3);
        assert_eq!(p.trunc(), 5);
    }

    #[test]
    fn geometric_series_identity() {
        // (sum q^n) * (1 - q) = 1, checked against a direct convolution oracle
        let n = 30usize;
        let geo = series(0, &vec![1; n]);
        let one_minus_q = series(0, &{
            let mut v = vec![0i64; n];
            v[0] = 1;
            v[1] = -1;
            v
        });
        let prod = geo.mul(&one_minus_q);
        // independent oracle: coefficient k of the product is
        // sum_{i+j=k} geo_i * (1,-1,0,...)_j = 1 - 1 = 0 for k >= 1
        for k in 0..n as i64 {
            let mut oracle = 0i64;
            for i in 0..=k {
                let gi = if (0..n as i64).contains(&i) { 1 } else { 0 };
                let oj = match k - i {
                    0 => 1,
                    1 => -1,
                    _ => 0,
                };
                oracle += gi * oj;
            }
            assert_eq!(prod.coeff(k).unwrap(), rational_from_int(oracle), "k = {k}");
        }
        assert_eq!(prod.coeff(0).unwrap(), rational_from_int(1));
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let n = KARATSUBA_THRESHOLD + 13;
        let a: Vec<Rational> = (0..n).map(|i| rational_from_int((i as i64 % 7) - 3)).collect();
        let b: Vec<Rational> = (0..n).map(|i| rational_from_int((i as i64 % 5) - 2)).collect();
        let fast = karatsuba(&a, &b);
        let slow = convolve_prefix(&a, &b, 2 * n - 1);
        assert_eq!(fast, slow);
    }

    #[test]
    fn exp_factorial_oracle() {
        let q = series(1, &[1, 0, 0, 0, 0, 0, 0]);
        let e = q.exp().unwrap();
        // independent oracle: coefficient of q^k in exp(q) is 1/k!
        let mut factorial = Rational::one();
        for k in 0..e.trunc() {
            if k > 0 {
                factorial = factorial * rational_from_int(k);
            }
            assert_eq!(e.coeff(k).unwrap(), Rational::one() / &factorial, "k = {k}");
        }
    }

    #[test]
    fn exp_rejects_bad_valuation() {
        let x = series(0, &[1, 1]);
        assert_eq!(x.exp().unwrap_err(), SeriesError::ExpDomain(0));
        let y = series(-2, &[5, 0, 0, 1]);
        assert_eq!(y.exp().unwrap_err(), SeriesError::ExpDomain(-2));
        // stored leading zeros at exponent <= 0 are fine
        let z = series(-1, &[0, 0, 1]);
        assert!(z.exp().is_ok());
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = LaurentSeries::zero(6).exp().unwrap();
        assert_eq!(e, LaurentSeries::one(6));
    }

    #[test]
    fn log_alternating_harmonic_oracle() {
        let one_plus_q = series(0, &[1, 1, 0, 0, 0, 0, 0, 0]);
        let l = one_plus_q.log().unwrap();
        assert_eq!(l.coeff(0).unwrap(), Rational::zero());
        for k in 1..l.trunc() {
            // independent oracle: (-1)^(k+1) / k
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let want = rational_from_int(sign) / rational_from_int(k);
            assert_eq!(l.coeff(k).unwrap(), want, "k = {k}");
        }
    }

    #[test]
    fn log_of_one_is_zero() {
        let l = LaurentSeries::one(5).log().unwrap();
        assert!(l.is_zero());
    }

    #[test]
    fn log_rejects_bad_constant() {
        let x = series(0, &[2, 1]);
        assert_eq!(x.log().unwrap_err(), SeriesError::LogDomain);
        let y = series(-1, &[1, 1, 1]);
        assert_eq!(y.log().unwrap_err(), SeriesError::LogDomain);
    }

    #[test]
    fn exp_log_roundtrip() {
        let x = series(0, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let roundtrip = x.log().unwrap().exp().unwrap();
        assert!(roundtrip.agrees_with(&x, 0, x.trunc()));

        let log_squared = x.mul(&x).log().unwrap();
        let twice_log = x.log().unwrap().scaled(&rational_from_int(2));
        assert!(log_squared.agrees_with(&twice_log, 0, log_squared.trunc()));
    }

    #[test]
    fn dilate_examples() {
        let x = series(-1, &[1, 0, 1]); // q^-1 + q
        let d = x.dilate(2).unwrap();
        assert_eq!(d.coeff(-2).unwrap(), rational_from_int(1));
        assert_eq!(d.coeff(2).unwrap(), rational_from_int(1));
        assert_eq!(d.coeff(0).unwrap(), Rational::zero());
        assert_eq!(d.trunc(), 4);

        assert_eq!(x.dilate(1).unwrap(), x);

        let y = series(0, &[1, 1, 1]); // 1 + q + q^2
        let d3 = y.dilate(3).unwrap();
        for (e, want) in [(0, 1), (3, 1), (6, 1), (1, 0), (2, 0), (4, 0), (5, 0)] {
            assert_eq!(d3.coeff(e).unwrap(), rational_from_int(want), "e = {e}");
        }
        assert!(x.dilate(0).is_err());
    }

    #[test]
    fn inverse_and_division() {
        let x = series(1, &[1, -1, 0, 0, 0]); // q - q^2
        let inv = x.inverse().unwrap();
        assert_eq!(inv.valuation(), -1);
        let prod = x.mul(&inv);
        assert_eq!(prod.coeff(0).unwrap(), rational_from_int(1));
        for e in 1..prod.trunc() {
            assert_eq!(prod.coeff(e).unwrap(), Rational::zero());
        }
        assert!(LaurentSeries::zero(4).inverse().is_err());
    }

    #[test]
    fn equality_ignores_leading_zeros() {
        let a = series(-2, &[0, 0, 1, 2]);
        let b = series(0, &[1, 2]);
        assert_eq!(a, b);
        let c = series(0, &[1, 2, 0]);
        assert_ne!(a, c); // different truncation
    }

    #[test]
    fn bi_exp_of_zero_is_one() {
        let rows = vec![LaurentSeries::zero(5), LaurentSeries::zero(5)];
        let e = BiSeries::new(rows).exp().unwrap();
        assert!(e.row(0).agrees_with(&LaurentSeries::one(5), 0, 5));
        assert!(e.row(1).is_zero());
    }

    #[test]
    fn bi_exp_single_row_power_expansion() {
        // exp(p*f) rows are 1, f, f^2/2, f^3/6 — direct power oracle
        let f = series(-1, &[1, 0, 3, 5, 0, 2, 0, 0, 0, 0]);
        let trunc = f.trunc();
        let rows = vec![LaurentSeries::zero(trunc), f.clone(), LaurentSeries::zero(trunc), LaurentSeries::zero(trunc)];
        let e = BiSeries::new(rows).exp().unwrap();
        let qt = e.qtrunc();
        let f2 = f.mul(&f).scaled(&(Rational::one() / rational_from_int(2)));
        let f3 = f.mul(&f).mul(&f).scaled(&(Rational::one() / rational_from_int(6)));
        assert!(e.row(1).agrees_with(&f, -1, qt));
        assert!(e.row(2).agrees_with(&f2, -2, qt));
        assert!(e.row(3).agrees_with(&f3, -3, qt));
    }

    #[test]
    fn bi_exp_multinomial_oracle() {
        // exp(p*a + p^2*b) row 2 = b + a^2/2
        let a = series(0, &[2, 1, 0, 0, 0, 0]);
        let b = series(0, &[0, 4, -1, 0, 0, 0]);
        let rows = vec![LaurentSeries::zero(6), a.clone(), b.clone()];
        let e = BiSeries::new(rows).exp().unwrap();
        let want = b.add(&a.mul(&a).scaled(&(Rational::one() / rational_from_int(2))));
        assert!(e.row(2).agrees_with(&want, 0, e.qtrunc()));
    }

    #[test]
    fn bi_exp_rejects_nonzero_row0() {
        let rows = vec![series(0, &[1, 0]), series(0, &[0, 1])];
        assert_eq!(BiSeries::new(rows).exp().unwrap_err(), SeriesError::BiExpRowZero);
    }

    #[test]
    fn json_roundtrip() {
        let x = LaurentSeries::new(
            -1,
            vec![
                rational_from_int(1),
                Rational::new(BigInt::from(-3), BigInt::from(2)),
                Rational::zero(),
            ],
        );
        let j = x.to_json();
        assert_eq!(j.coeffs, vec!["1", "-3/2", "0"]);
        let back = LaurentSeries::from_json(&j).unwrap();
        assert_eq!(back, x);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.starts_with("{\"valuation\":-1,\"trunc\":2,"));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("5").unwrap(), rational_from_int(5));
        assert_eq!(parse_rational("-7/2").unwrap(), Rational::new(BigInt::from(-7), BigInt::from(2)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
