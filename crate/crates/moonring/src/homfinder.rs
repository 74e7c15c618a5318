//! Complete enumeration of the integer-valued ring homomorphisms from a
//! [`GreenRing`] to the complex numbers.
//!
//! The value of a homomorphism at a basis element is an eigenvalue of the
//! left-multiplication matrix of that element, so candidates are the
//! integer roots of exact characteristic polynomials. A depth-first search
//! with multiplicativity constraint propagation walks the candidate tuples,
//! and every survivor is re-verified against the whole structure-constant
//! table independently of the search path.
//!
//! Characteristic polynomials are monic with integer coefficients, so any
//! rational root is already an integer; the integer-root search is
//! therefore complete for rational values.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{BigInt, One, ToPrimitive, Zero};

use crate::greenring::{GreenRing, GreenRingError, RingElement};

/// Identification of an enumerated character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterTag {
    /// The rank homomorphism (trace of the identity).
    Rank,
    /// Trace of `g^k` for the stored power `k`.
    TraceOfPower(u64),
    /// Total dimension of Tate cohomology.
    Tate,
    /// A sign twist of a trace character.
    Twisted,
    /// None of the above.
    Exotic,
}

impl CharacterTag {
    pub fn name(&self) -> String {
        match self {
            CharacterTag::Rank => "rank".to_string(),
            CharacterTag::TraceOfPower(k) => format!("trace-g^{k}"),
            CharacterTag::Tate => "tate".to_string(),
            CharacterTag::Twisted => "twisted".to_string(),
            CharacterTag::Exotic => "exotic".to_string(),
        }
    }
}

/// An integer-valued ring homomorphism, given by its values on the basis.
#[derive(Debug, Clone)]
pub struct Character {
    ring: Arc<GreenRing>,
    values: Vec<i64>,
    tag: CharacterTag,
}

impl Character {
    pub fn ring(&self) -> &Arc<GreenRing> {
        &self.ring
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn tag(&self) -> CharacterTag {
        self.tag
    }

    /// `sum coeffs[i] * values[i]`.
    pub fn apply(&self, x: &RingElement) -> Result<BigInt, GreenRingError> {
        if x.ring().name() != self.ring.name() {
            return Err(GreenRingError::RingMismatch(
                self.ring.name().to_string(),
                x.ring().name().to_string(),
            ));
        }
        Ok(x.coeffs()
            .iter()
            .zip(&self.values)
            .map(|(c, &v)| c * BigInt::from(v))
            .sum())
    }

    /// Re-check full multiplicativity against the structure constants.
    pub fn verify(&self) -> bool {
        verify_values(&self.ring, &self.values)
    }

    /// Build a character directly from a trace tuple of the ring.
    pub fn from_trace(ring: &Arc<GreenRing>, power: u64) -> Character {
        let values = ring.trace_tuple(power);
        let tag = assign_tag(ring, &values);
        Character { ring: ring.clone(), values, tag }
    }
}

fn verify_values(ring: &GreenRing, values: &[i64]) -> bool {
    if values[ring.unit_index()] != 1 {
        return false;
    }
    let n = ring.dimension();
    for i in 0..n {
        for j in i..n {
            let lhs = BigInt::from(values[i]) * BigInt::from(values[j]);
            let rhs: BigInt = ring
                .product_vector(i, j)
                .iter()
                .zip(values)
                .map(|(&c, &v)| BigInt::from(c) * BigInt::from(v))
                .sum();
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

fn assign_tag(ring: &GreenRing, values: &[i64]) -> CharacterTag {
    if values == ring.ranks() {
        return CharacterTag::Rank;
    }
    for p in 1..ring.order() {
        if values == ring.trace_tuple(p) {
            return CharacterTag::TraceOfPower(p);
        }
    }
    for (tag, tuple) in ring.special_tuples() {
        if values == tuple.as_slice() {
            return match tag.as_str() {
                "tate" => CharacterTag::Tate,
                "exotic" => CharacterTag::Exotic,
                _ => CharacterTag::Twisted,
            };
        }
    }
    CharacterTag::Twisted
}

/// Characteristic polynomial of an integer matrix by Faddeev-LeVerrier;
/// all divisions are exact. Returns `[c_0, ..., c_n]` with
/// `p(x) = sum c_k x^k`, monic (`c_n = 1`).
fn characteristic_polynomial(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let big: Vec<Vec<BigInt>> =
        a.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // m = identity, c accumulates the coefficients from the trace recursion
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut c_prev = BigInt::one();
    for k in 1..=n {
        // m <- A * (m + c_prev * I) for k > 1; for k = 1, m = A
        if k > 1 {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += &c_prev;
            }
            let mut next = vec![vec![BigInt::zero(); n]; n];
            for i in 0..n {
                for l in 0..n {
                    if big[i][l].is_zero() {
                        continue;
                    }
                    for j_ in 0..n {
                        if !m[l][j_].is_zero() {
                            let add = &big[i][l] * &m[l][j_];
                            next[i][j_] += add;
                        }
                    }
                }
            }
            m = next;
        } else {
            m = big.clone();
        }
        let trace: BigInt = (0..n).map(|i| m[i][i].clone()).sum();
        let ck = -trace / BigInt::from(k as i64);
        coeffs[n - k] = ck.clone();
        c_prev = ck;
    }
    coeffs
}

fn poly_eval(coeffs: &[BigInt], x: i64) -> BigInt {
    let mut acc = BigInt::zero();
    let xb = BigInt::from(x);
    for c in coeffs.iter().rev() {
        acc = acc * &xb + c;
    }
    acc
}

/// All integer roots of a monic integer polynomial: divisors of the
/// constant term (after stripping powers of x).
fn integer_roots(coeffs: &[BigInt]) -> Vec<i64> {
    let mut roots = BTreeSet::new();
    let first_nonzero = coeffs.iter().position(|c| !c.is_zero());
    let Some(v) = first_nonzero else {
        return Vec::new();
    };
    if v > 0 {
        roots.insert(0i64);
    }
    let reduced = &coeffs[v..];
    let constant = reduced[0].magnitude().clone();
    let limit = constant.to_i64().unwrap_or(i64::MAX);
    let mut d = 1i64;
    while (d as i128) * (d as i128) <= limit as i128 {
        if limit % d == 0 {
            for cand in [d, -d, limit / d, -(limit / d)] {
                if poly_eval(reduced, cand).is_zero() {
                    roots.insert(cand);
                }
            }
        }
        d += 1;
    }
    roots.into_iter().collect()
}

/// The complete, duplicate-free list of integer-valued characters of the
/// ring, sorted lexicographically by value tuple.
pub fn enumerate_characters(ring: &Arc<GreenRing>) -> Vec<Character> {
    let n = ring.dimension();
    // candidate values per basis element: integer eigenvalues of the
    // left-multiplication matrix
    let mut candidates: Vec<Vec<i64>> = Vec::with_capacity(n);
    for i in 0..n {
        if i == ring.unit_index() {
            candidates.push(vec![1]);
            continue;
        }
        let m = ring.multiplication_matrix(i);
        candidates.push(integer_roots(&characteristic_polynomial(&m)));
    }

    // visit positions with fewest candidates first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| candidates[i].len());

    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut values = vec![0i64; n];
    let mut assigned = vec![false; n];
    dfs(ring, &order, 0, &candidates, &mut values, &mut assigned, &mut found);

    found
        .into_iter()
        .filter(|vals| verify_values(ring, vals))
        .map(|values| {
            let tag = assign_tag(ring, &values);
            Character { ring: ring.clone(), values, tag }
        })
        .collect()
}

fn dfs(
    ring: &GreenRing,
    order: &[usize],
    depth: usize,
    candidates: &[Vec<i64>],
    values: &mut Vec<i64>,
    assigned: &mut Vec<bool>,
    found: &mut BTreeSet<Vec<i64>>,
) {
    if depth == order.len() {
        found.insert(values.clone());
        return;
    }
    let pos = order[depth];
    'next_candidate: for &cand in &candidates[pos] {
        values[pos] = cand;
        assigned[pos] = true;
        // propagate: every fully-assigned product constraint must hold
        for i in 0..ring.dimension() {
            if !assigned[i] {
                continue;
            }
            for j in i..ring.dimension() {
                if !assigned[j] {
                    continue;
                }
                let row = ring.product_vector(i, j);
                if row.iter().enumerate().any(|(k, &c)| c != 0 && !assigned[k]) {
                    continue;
                }
                let lhs = (values[i] as i128) * (values[j] as i128);
                let rhs: i128 = row
                    .iter()
                    .zip(values.iter())
                    .map(|(&c, &v)| (c as i128) * (v as i128))
                    .sum();
                if lhs != rhs {
                    assigned[pos] = false;
                    continue 'next_candidate;
                }
            }
        }
        dfs(ring, order, depth + 1, candidates, values, assigned, found);
        assigned[pos] = false;
    }
}

/// Rank over the rationals of a list of integer row vectors, by
/// fraction-free Gaussian elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let pivot = (row..nrows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for r in row + 1..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let a = m[row][col].clone();
            let b = m[r][col].clone();
            for c in col..ncols {
                let val = &m[r][c] * &a - &m[row][c] * &b;
                m[r][c] = val;
            }
        }
        rank += 1;
        row += 1;
    }
    rank
}
