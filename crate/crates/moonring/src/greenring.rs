//! Finite-basis commutative rings with integer structure constants,
//! modelling the subrings of integral representation rings spanned by the
//! indecomposable modules that occur in the graded Moonshine module.
//!
//! Built-in tables: `Z2`, `Z3`, `Z4`, and `Z6_6A` (the five-element subring
//! for a 6A generator). Tables live in JSON data files and are re-validated
//! on every load: commutativity, unit law, rank multiplicativity, trace
//! multiplicativity, exterior-power rank/trace consistency, and the ring
//! homomorphism property of every registered restriction map.
//!
//! Adams operations are defined operationally: on a basis element by the
//! Newton recursion
//! `psi^n = sum_{j=1}^{n-1} (-1)^(j+1) psi^(n-j) Lambda^j - (-1)^n n Lambda^n`
//! against the exterior table, extended additively to virtual elements.
//! `Z6_6A` carries no exterior table; exterior data there is derived, when
//! possible, as the unique non-negative combination compatible with the
//! restrictions to `Z2` and `Z3`, and reported unavailable otherwise.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, BigUint, One, Signed, ToPrimitive, Zero};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GreenRingError {
    #[error("unknown ring `{0}` (built-ins: Z2, Z3, Z4, Z6_6A)")]
    UnknownRing(String),
    #[error("ring table `{ring}` is invalid: {reason}")]
    TableInvalid { ring: String, reason: String },
    #[error("elements belong to different rings ({0} vs {1})")]
    RingMismatch(String, String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("cannot parse `{0}` as a ring element")]
    ParseElement(String),
    #[error("exterior powers of virtual elements are undefined (negative coefficient at {0})")]
    VirtualElement(String),
    #[error("exterior power {k} of `{label}` is not available in ring {ring}")]
    ExteriorUnavailable { ring: String, label: String, k: u32 },
    #[error("Adams operations need k >= 1")]
    AdamsIndex,
    #[error("no restriction map registered from {from} to {to}")]
    NoRestriction { from: String, to: String },
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[derive(Debug, Deserialize)]
struct RingJson {
    name: String,
    order: u64,
    labels: Vec<String>,
    unit: usize,
    ranks: Vec<i64>,
    products: BTreeMap<String, BTreeMap<String, i64>>,
    exterior: BTreeMap<String, BTreeMap<String, i64>>,
    traces: Vec<Vec<i64>>,
    special: BTreeMap<String, Vec<i64>>,
    restrictions: BTreeMap<String, BTreeMap<String, BTreeMap<String, i64>>>,
}

/// A restriction map to a smaller built-in ring, stored on the basis.
#[derive(Debug, Clone)]
pub struct Restriction {
    target: Arc<GreenRing>,
    /// `images[i]` = restriction of basis element i over the target basis.
    images: Vec<Vec<i64>>,
}

impl Restriction {
    pub fn target(&self) -> &Arc<GreenRing> {
        &self.target
    }

    pub fn image_of(&self, i: usize) -> &[i64] {
        &self.images[i]
    }
}

/// A commutative ring with distinguished basis and integer structure
/// constants, validated at construction and immutable afterwards.
#[derive(Debug)]
pub struct GreenRing {
    name: String,
    order: u64,
    labels: Vec<String>,
    unit: usize,
    ranks: Vec<i64>,
    /// Upper-triangular product table: entry for (i, j) with i <= j.
    products: Vec<Vec<i64>>,
    exterior: BTreeMap<(u32, usize), Vec<i64>>,
    traces: Vec<Vec<i64>>,
    special: BTreeMap<String, Vec<i64>>,
    restrictions: Vec<Restriction>,
}

fn builtin_json(name: &str) -> Option<&'static str> {
    match name {
        "Z2" => Some(include_str!("data/rings/z2.json")),
        "Z3" => Some(include_str!("data/rings/z3.json")),
        "Z4" => Some(include_str!("data/rings/z4.json")),
        "Z6_6A" => Some(include_str!("data/rings/z6_6a.json")),
        _ => None,
    }
}

fn load_json(name: &str) -> Result<String, GreenRingError> {
    if let Ok(dir) = std::env::var(crate::modfun::DATA_DIR_ENV) {
        let path = std::path::PathBuf::from(dir)
            .join("rings")
            .join(format!("{}.json", name.to_ascii_lowercase()));
        if path.exists() {
            return std::fs::read_to_string(&path).map_err(|e| GreenRingError::TableInvalid {
                ring: name.to_string(),
                reason: format!("{}: {e}", path.display()),
            });
        }
    }
    builtin_json(name)
        .map(str::to_string)
        .ok_or_else(|| GreenRingError::UnknownRing(name.to_string()))
}

impl GreenRing {
    /// Names of the built-in rings.
    pub const BUILTIN_NAMES: [&'static str; 4] = ["Z2", "Z3", "Z4", "Z6_6A"];

    /// Load and validate a built-in ring: `Z2`, `Z3`, `Z4`, or `Z6_6A`.
    pub fn builtin(name: &str) -> Result<Arc<GreenRing>, GreenRingError> {
        let text = load_json(name)?;
        Self::from_json(&text)
    }

    /// Parse a ring table and check every structural invariant. Fails
    /// loudly on any violation.
    pub fn from_json(text: &str) -> Result<Arc<GreenRing>, GreenRingError> {
        let j: RingJson = serde_json::from_str(text).map_err(|e| GreenRingError::TableInvalid {
            ring: "<unparsed>".to_string(),
            reason: e.to_string(),
        })?;
        let fail = |reason: String| GreenRingError::TableInvalid { ring: j.name.clone(), reason };
        let n = j.labels.len();
        if n == 0 {
            return Err(fail("no basis labels".into()));
        }
        if j.unit >= n || j.ranks.len() != n {
            return Err(fail("unit index or rank list out of range".into()));
        }
        let index_of = |label: &str| -> Result<usize, GreenRingError> {
            j.labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| GreenRingError::UnknownLabel(label.to_string()))
        };
        let vector_of = |m: &BTreeMap<String, i64>| -> Result<Vec<i64>, GreenRingError> {
            let mut v = vec![0i64; n];
            for (label, c) in m {
                v[index_of(label)?] = *c;
            }
            Ok(v)
        };

        let pair_slot = |i: usize, j_: usize| -> usize {
            let (a, b) = if i <= j_ { (i, j_) } else { (j_, i) };
            a * n - a * (a + 1) / 2 + b
        };
        let mut products = vec![Vec::new(); n * (n + 1) / 2];
        let mut seen = vec![false; n * (n + 1) / 2];
        for (key, value) in &j.products {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| fail(format!("bad product key `{key}`")))?;
            let a: usize = a.parse().map_err(|_| fail(format!("bad product key `{key}`")))?;
            let b: usize = b.parse().map_err(|_| fail(format!("bad product key `{key}`")))?;
            if a >= n || b >= n || a > b {
                return Err(fail(format!("product key `{key}` out of range or not i<=j")));
            }
            let slot = pair_slot(a, b);
            if seen[slot] {
                return Err(fail(format!("duplicate product entry `{key}`")));
            }
            seen[slot] = true;
            products[slot] = vector_of(value)?;
        }
        if !seen.iter().all(|&s| s) {
            return Err(fail("product table is missing entries".into()));
        }

        // unit acts as identity
        for k in 0..n {
            let row = &products[pair_slot(j.unit, k)];
            for (l, &c) in row.iter().enumerate() {
                if c != i64::from(l == k) {
                    return Err(fail(format!("unit law fails on basis {k}")));
                }
            }
        }

        // rank positivity and multiplicativity
        if j.ranks.iter().any(|&r| r < 1) || j.ranks[j.unit] != 1 {
            return Err(fail("ranks must be positive with rank(unit) = 1".into()));
        }
        for a in 0..n {
            for b in a..n {
                let row = &products[pair_slot(a, b)];
                let total: i64 = row.iter().zip(&j.ranks).map(|(c, r)| c * r).sum();
                if total != j.ranks[a] * j.ranks[b] {
                    return Err(fail(format!(
                        "rank multiplicativity fails on ({}, {})",
                        j.labels[a], j.labels[b]
                    )));
                }
            }
        }

        // traces: one tuple per power of the generator, each multiplicative
        if j.order == 0 || j.traces.len() != j.order as usize {
            return Err(fail("need one trace tuple per power of the generator".into()));
        }
        for (p, row) in j.traces.iter().enumerate() {
            if row.len() != n {
                return Err(fail(format!("trace row {p} has wrong length")));
            }
            if row[j.unit] != 1 {
                return Err(fail(format!("trace row {p} is not 1 on the unit")));
            }
            if p == 0 && row != &j.ranks {
                return Err(fail("trace row 0 must equal the rank tuple".into()));
            }
            for a in 0..n {
                for b in a..n {
                    let prod = &products[pair_slot(a, b)];
                    let rhs: i64 = prod.iter().zip(row).map(|(c, t)| c * t).sum();
                    if row[a] * row[b] != rhs {
                        return Err(fail(format!(
                            "trace row {p} is not multiplicative on ({}, {})",
                            j.labels[a], j.labels[b]
                        )));
                    }
                }
            }
        }

        // exterior table: rank and trace consistency for every entry
        let mut exterior = BTreeMap::new();
        for (key, value) in &j.exterior {
            let (k, i) = key
                .split_once(',')
                .ok_or_else(|| fail(format!("bad exterior key `{key}`")))?;
            let k: u32 = k.parse().map_err(|_| fail(format!("bad exterior key `{key}`")))?;
            let i: usize = i.parse().map_err(|_| fail(format!("bad exterior key `{key}`")))?;
            if i >= n || k < 2 || (k as i64) > j.ranks[i] {
                return Err(fail(format!("exterior key `{key}` out of range")));
            }
            let v = vector_of(value)?;
            let rank: i64 = v.iter().zip(&j.ranks).map(|(c, r)| c * r).sum();
            if BigInt::from(rank) != binomial(j.ranks[i], k as i64) {
                return Err(fail(format!("exterior entry `{key}` has wrong rank")));
            }
            // e_k(eigenvalues) from the power sums tr(g^(p*m)), by Newton's
            // identity, must match the traces of the table entry
            for p in 0..j.order as usize {
                let power_sum = |m: usize| {
                    let row = &j.traces[(p * m) % j.order as usize];
                    BigRational::from_integer(BigInt::from(row[i]))
                };
                let mut elem = vec![BigRational::one()];
                for m in 1..=k as usize {
                    let mut acc = BigRational::zero();
                    for (idx, e_prev) in elem.iter().enumerate().take(m) {
                        let sign = if (m - idx) % 2 == 1 { 1 } else { -1 };
                        acc += BigRational::from_integer(BigInt::from(sign))
                            * e_prev
                            * power_sum(m - idx);
                    }
                    elem.push(acc / BigRational::from_integer(BigInt::from(m as i64)));
                }
                let want: i64 = v.iter().zip(&j.traces[p]).map(|(c, t)| c * t).sum();
                if elem[k as usize] != BigRational::from_integer(BigInt::from(want)) {
                    return Err(fail(format!(
                        "exterior entry `{key}` fails the trace check at power {p}"
                    )));
                }
            }
            exterior.insert((k, i), v);
        }

        for (tag, row) in &j.special {
            if row.len() != n {
                return Err(fail(format!("special tuple `{tag}` has wrong length")));
            }
        }

        // restrictions: resolve targets and verify compatibility
        let mut restrictions = Vec::new();
        for (target_name, table) in &j.restrictions {
            let target = GreenRing::builtin(target_name)?;
            if j.order % target.order != 0 {
                return Err(fail(format!(
                    "restriction target {target_name} order does not divide {}",
                    j.order
                )));
            }
            let step = (j.order / target.order) as usize;
            let mut images = Vec::with_capacity(n);
            for label in &j.labels {
                let m = table.get(label).ok_or_else(|| {
                    fail(format!("restriction to {target_name} misses `{label}`"))
                })?;
                let mut v = vec![0i64; target.labels.len()];
                for (tl, c) in m {
                    v[target.label_index(tl)?] = *c;
                }
                images.push(v);
            }
            for a in 0..n {
                let ra: i64 = images[a].iter().zip(&target.ranks).map(|(c, r)| c * r).sum();
                if ra != j.ranks[a] {
                    return Err(fail(format!(
                        "restriction to {target_name} changes the rank of {}",
                        j.labels[a]
                    )));
                }
                // tr(h^p | res x) = tr(g^(p*step) | x)
                for p in 0..target.order as usize {
                    let got: i64 =
                        images[a].iter().zip(&target.traces[p]).map(|(c, t)| c * t).sum();
                    let want = j.traces[(p * step) % j.order as usize][a];
                    if got != want {
                        return Err(fail(format!(
                            "restriction to {target_name} breaks traces on {}",
                            j.labels[a]
                        )));
                    }
                }
            }
            // ring homomorphism on all basis pairs
            for a in 0..n {
                for b in a..n {
                    let mut lhs = vec![BigInt::zero(); target.labels.len()];
                    for (k_, &c) in products[pair_slot(a, b)].iter().enumerate() {
                        if c != 0 {
                            for (t, &ik) in images[k_].iter().enumerate() {
                                lhs[t] += BigInt::from(c) * BigInt::from(ik);
                            }
                        }
                    }
                    let ea: Vec<BigInt> = images[a].iter().map(|&c| BigInt::from(c)).collect();
                    let eb: Vec<BigInt> = images[b].iter().map(|&c| BigInt::from(c)).collect();
                    if lhs != target.tensor_vectors(&ea, &eb) {
                        return Err(fail(format!(
                            "restriction to {target_name} is not a ring homomorphism on ({}, {})",
                            j.labels[a], j.labels[b]
                        )));
                    }
                }
            }
            restrictions.push(Restriction { target, images });
        }

        Ok(Arc::new(GreenRing {
            name: j.name,
            order: j.order,
            labels: j.labels,
            unit: j.unit,
            ranks: j.ranks,
            products,
            exterior,
            traces: j.traces,
            special: j.special,
            restrictions,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn ranks(&self) -> &[i64] {
        &self.ranks
    }

    /// Trace tuple of `g^p` on the basis.
    pub fn trace_tuple(&self, p: u64) -> Vec<i64> {
        self.traces[(p % self.order) as usize].clone()
    }

    pub fn special_tuples(&self) -> &BTreeMap<String, Vec<i64>> {
        &self.special
    }

    pub fn restrictions(&self) -> &[Restriction] {
        &self.restrictions
    }

    pub fn label_index(&self, label: &str) -> Result<usize, GreenRingError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| GreenRingError::UnknownLabel(label.to_string()))
    }

    fn pair_slot(&self, i: usize, j: usize) -> usize {
        let n = self.labels.len();
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        a * n - a * (a + 1) / 2 + b
    }

    /// Structure constants of `e_i * e_j`.
    pub fn product_vector(&self, i: usize, j: usize) -> &[i64] {
        &self.products[self.pair_slot(i, j)]
    }

    fn tensor_vectors(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.labels.len();
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai * bj;
                for (k, &c) in self.product_vector(i, j).iter().enumerate() {
                    if c != 0 {
                        out[k] += &prod * BigInt::from(c);
                    }
                }
            }
        }
        out
    }

    /// Left-multiplication matrix of `e_i`: column `j` holds `e_i * e_j`.
    pub fn multiplication_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.labels.len();
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            for (k, &c) in self.product_vector(i, j).iter().enumerate() {
                m[k][j] = c;
            }
        }
        m
    }

    /// Whether exterior powers of basis element `i` are available up to its
    /// rank (from the table or by derivation).
    pub fn has_exterior_data(&self, i: usize) -> bool {
        (2..=self.ranks[i] as u32).all(|k| self.exterior_vector(i, k).is_ok())
    }

    /// Exterior power of a basis element as a coefficient vector.
    /// `k > rank` gives 0 and `k <= 1` the trivial answers; otherwise the
    /// table entry, or a derived value for rings without exterior tables.
    fn exterior_vector(&self, i: usize, k: u32) -> Result<Vec<BigInt>, GreenRingError> {
        let n = self.labels.len();
        if k == 0 {
            let mut v = vec![BigInt::zero(); n];
            v[self.unit] = BigInt::one();
            return Ok(v);
        }
        if k == 1 {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            return Ok(v);
        }
        if (k as i64) > self.ranks[i] {
            return Ok(vec![BigInt::zero(); n]);
        }
        if let Some(v) = self.exterior.get(&(k, i)) {
            return Ok(v.iter().map(|&c| BigInt::from(c)).collect());
        }
        self.derive_exterior(i, k)
    }

    /// Search for the unique non-negative integer combination whose rank is
    /// `C(rank_i, k)` and whose image under every registered restriction
    /// equals the exterior power of the restricted element. Anything short
    /// of a unique solution is reported unavailable, never guessed.
    fn derive_exterior(&self, i: usize, k: u32) -> Result<Vec<BigInt>, GreenRingError> {
        let unavailable = || GreenRingError::ExteriorUnavailable {
            ring: self.name.clone(),
            label: self.labels[i].clone(),
            k,
        };
        if self.restrictions.is_empty() {
            return Err(unavailable());
        }
        let mut targets = Vec::new();
        for r in &self.restrictions {
            let image = RingElement {
                ring: r.target.clone(),
                coeffs: r.images[i].iter().map(|&c| BigInt::from(c)).collect(),
            };
            let lam = image.exterior_power(k).map_err(|_| unavailable())?;
            targets.push((r, lam.coeffs));
        }
        let goal = binomial(self.ranks[i], k as i64).to_i64().ok_or_else(unavailable)?;
        let n = self.labels.len();
        let mut solutions: Vec<Vec<BigInt>> = Vec::new();
        let mut current = vec![0i64; n];
        self.exterior_dfs(0, goal, &mut current, &mut solutions, &targets);
        if solutions.len() == 1 {
            Ok(solutions.pop().unwrap())
        } else {
            Err(unavailable())
        }
    }

    fn exterior_dfs(
        &self,
        pos: usize,
        remaining: i64,
        current: &mut Vec<i64>,
        solutions: &mut Vec<Vec<BigInt>>,
        targets: &[(&Restriction, Vec<BigInt>)],
    ) {
        let n = self.labels.len();
        if pos == n {
            if remaining != 0 {
                return;
            }
            for (r, want) in targets {
                let mut got = vec![BigInt::zero(); r.target.labels.len()];
                for (l, &c) in current.iter().enumerate() {
                    if c != 0 {
                        for (t, &im) in r.images[l].iter().enumerate() {
                            got[t] += BigInt::from(c) * BigInt::from(im);
                        }
                    }
                }
                if &got != want {
                    return;
                }
            }
            solutions.push(current.iter().map(|&c| BigInt::from(c)).collect());
            return;
        }
        let max = remaining / self.ranks[pos];
        for c in 0..=max {
            current[pos] = c;
            self.exterior_dfs(
                pos + 1,
                remaining - c * self.ranks[pos],
                current,
                solutions,
                targets,
            );
        }
        current[pos] = 0;
    }

    pub fn zero_element(self: &Arc<Self>) -> RingElement {
        RingElement { ring: self.clone(), coeffs: vec![BigInt::zero(); self.labels.len()] }
    }

    pub fn unit_element(self: &Arc<Self>) -> RingElement {
        self.basis_element(self.unit)
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> RingElement {
        let mut coeffs = vec![BigInt::zero(); self.labels.len()];
        coeffs[i] = BigInt::one();
        RingElement { ring: self.clone(), coeffs }
    }

    pub fn element_from_coeffs(self: &Arc<Self>, coeffs: Vec<BigInt>) -> RingElement {
        assert_eq!(coeffs.len(), self.labels.len());
        RingElement { ring: self.clone(), coeffs }
    }

    pub fn element_by_label(self: &Arc<Self>, label: &str) -> Result<RingElement, GreenRingError> {
        Ok(self.basis_element(self.label_index(label)?))
    }

    /// Parse expressions like `D`, `2E-2A`, or `4E - 4B - 2A`.
    pub fn parse_element(self: &Arc<Self>, expr: &str) -> Result<RingElement, GreenRingError> {
        let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(GreenRingError::ParseElement(expr.to_string()));
        }
        let mut coeffs = vec![BigInt::zero(); self.labels.len()];
        let mut rest: &str = &compact;
        let mut sign = 1i64;
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
                sign = 1;
                continue;
            }
            if let Some(r) = rest.strip_prefix('-') {
                rest = r;
                sign = -1;
                continue;
            }
            let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            let coeff: i64 = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| GreenRingError::ParseElement(expr.to_string()))?
            };
            rest = &rest[digits.len()..];
            // the label runs to the next top-level + or -
            let mut depth = 0i32;
            let mut end = rest.len();
            for (pos, ch) in rest.char_indices() {
                match ch {
                    '(' | '[' => depth += 1,
                    ')' | ']' => depth -= 1,
                    '+' | '-' if depth == 0 => {
                        end = pos;
                        break;
                    }
                    _ => {}
                }
            }
            let label = &rest[..end];
            if label.is_empty() {
                return Err(GreenRingError::ParseElement(expr.to_string()));
            }
            let idx = self.label_index(label)?;
            coeffs[idx] += BigInt::from(sign * coeff);
            rest = &rest[end..];
            sign = 1;
        }
        Ok(RingElement { ring: self.clone(), coeffs })
    }
}

/// An element of a [`GreenRing`]: an integer vector over the basis
/// (a virtual module when coefficients go negative).
#[derive(Debug, Clone)]
pub struct RingElement {
    ring: Arc<GreenRing>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.name == other.ring.name && self.coeffs == other.coeffs
    }
}

impl Eq for RingElement {}

impl RingElement {
    pub fn ring(&self) -> &Arc<GreenRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, label: &str) -> Result<BigInt, GreenRingError> {
        Ok(self.coeffs[self.ring.label_index(label)?].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True when every coefficient is non-negative (an actual module).
    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    fn check_same_ring(&self, other: &Self) -> Result<(), GreenRingError> {
        if self.ring.name != other.ring.name {
            return Err(GreenRingError::RingMismatch(
                self.ring.name.clone(),
                other.ring.name.clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, GreenRingError> {
        self.check_same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(RingElement { ring: self.ring.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GreenRingError> {
        self.check_same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(RingElement { ring: self.ring.clone(), coeffs })
    }

    pub fn scaled(&self, s: &BigInt) -> Self {
        RingElement { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn scaled_i64(&self, s: i64) -> Self {
        self.scaled(&BigInt::from(s))
    }

    /// Tensor product: the bilinear extension of the structure constants.
    pub fn tensor(&self, other: &Self) -> Result<Self, GreenRingError> {
        self.check_same_ring(other)?;
        Ok(RingElement {
            ring: self.ring.clone(),
            coeffs: self.ring.tensor_vectors(&self.coeffs, &other.coeffs),
        })
    }

    /// `sum coeffs[i] * rank(e_i)`.
    pub fn rank(&self) -> BigInt {
        self.coeffs.iter().zip(&self.ring.ranks).map(|(c, &r)| c * BigInt::from(r)).sum()
    }

    /// Exterior power. Basis elements come from the table (or derived
    /// data); sums use the lambda-ring convolution
    /// `Lambda^n(X + Y) = sum_{i+j=n} Lambda^i(X) Lambda^j(Y)`.
    /// Virtual input is rejected for `k >= 2`.
    pub fn exterior_power(&self, k: u32) -> Result<Self, GreenRingError> {
        let n = self.ring.labels.len();
        if k == 0 {
            return Ok(self.ring.unit_element());
        }
        if k == 1 {
            return Ok(self.clone());
        }
        if let Some(bad) = self.coeffs.iter().position(|c| c.is_negative()) {
            return Err(GreenRingError::VirtualElement(self.ring.labels[bad].clone()));
        }
        // generating polynomial in t, truncated at t^k:
        // prod_i (sum_j Lambda^j(e_i) t^j)^(m_i)
        let mut poly: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; k as usize + 1];
        poly[0][self.ring.unit] = BigInt::one();
        for (i, m) in self.coeffs.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let top = (k as i64).min(self.ring.ranks[i]) as u32;
            let mut base: Vec<Vec<BigInt>> = Vec::with_capacity(top as usize + 1);
            for j in 0..=top {
                base.push(self.ring.exterior_vector(i, j)?);
            }
            // poly *= base^m, binary powering on the multiplicity
            let mut exp = m.magnitude().clone();
            let mut sq = base;
            let two = BigUint::from(2u32);
            loop {
                if (&exp % &two).is_one() {
                    poly = poly_mul_trunc(&self.ring, &poly, &sq, k as usize);
                }
                exp /= &two;
                if exp.is_zero() {
                    break;
                }
                sq = poly_mul_trunc(&self.ring, &sq, &sq, k as usize);
            }
        }
        let coeffs = poly.into_iter().nth(k as usize).unwrap();
        Ok(RingElement { ring: self.ring.clone(), coeffs })
    }

    /// Adams operation psi^k via the Newton recursion on each basis
    /// element, extended additively to virtual elements.
    pub fn adams(&self, k: u64) -> Result<Self, GreenRingError> {
        if k == 0 {
            return Err(GreenRingError::AdamsIndex);
        }
        let mut out = self.ring.zero_element();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let psi = adams_on_basis(&self.ring, i, k)?;
            out = out.add(&psi.scaled(c))?;
        }
        Ok(out)
    }

    /// Apply the registered restriction map to `target`.
    pub fn restrict(&self, target: &Arc<GreenRing>) -> Result<Self, GreenRingError> {
        let r = self
            .ring
            .restrictions
            .iter()
            .find(|r| r.target.name == target.name)
            .ok_or_else(|| GreenRingError::NoRestriction {
                from: self.ring.name.clone(),
                to: target.name.clone(),
            })?;
        let mut coeffs = vec![BigInt::zero(); target.labels.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, &im) in r.images[i].iter().enumerate() {
                if im != 0 {
                    coeffs[t] += c * BigInt::from(im);
                }
            }
        }
        Ok(RingElement { ring: target.clone(), coeffs })
    }
}

fn poly_mul_trunc(
    ring: &GreenRing,
    a: &[Vec<BigInt>],
    b: &[Vec<BigInt>],
    top: usize,
) -> Vec<Vec<BigInt>> {
    let n = ring.labels.len();
    let mut out = vec![vec![BigInt::zero(); n]; top + 1];
    for (i, ai) in a.iter().enumerate().take(top + 1) {
        if ai.iter().all(Zero::is_zero) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > top {
                break;
            }
            if bj.iter().all(Zero::is_zero) {
                continue;
            }
            let prod = ring.tensor_vectors(ai, bj);
            for (k, v) in prod.into_iter().enumerate() {
                out[i + j][k] += v;
            }
        }
    }
    out
}

fn adams_on_basis(ring: &Arc<GreenRing>, i: usize, k: u64) -> Result<RingElement, GreenRingError> {
    let rank = ring.ranks[i];
    let mut lambdas = Vec::with_capacity(rank as usize + 1);
    for j in 0..=rank as u32 {
        lambdas.push(RingElement { ring: ring.clone(), coeffs: ring.exterior_vector(i, j)? });
    }
    let mut psi: Vec<RingElement> = vec![ring.basis_element(i)]; // psi[0] = psi^1
    for n in 2..=k {
        let mut acc = ring.zero_element();
        for j in 1..=(n - 1).min(rank as u64) {
            let term = psi[(n - j - 1) as usize].tensor(&lambdas[j as usize])?;
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&term.scaled_i64(sign))?;
        }
        if n <= rank as u64 {
            // - (-1)^n n Lambda^n
            let sign = if n % 2 == 0 { -1i64 } else { 1i64 };
            acc = acc.add(&lambdas[n as usize].scaled(&(BigInt::from(sign) * BigInt::from(n))))?;
        }
        psi.push(acc);
    }
    Ok(psi.pop().unwrap())
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.magnitude();
            if a.is_one() {
                write!(f, "{}", self.ring.labels[i])?;
            } else {
                write!(f, "{}{}", a, self.ring.labels[i])?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> Arc<GreenRing> {
        GreenRing::builtin("Z4").unwrap()
    }

    fn z6() -> Arc<GreenRing> {
        GreenRing::builtin("Z6_6A").unwrap()
    }

    #[test]
    fn builtins_load_and_validate() {
        for name in GreenRing::BUILTIN_NAMES {
            let ring = GreenRing::builtin(name).unwrap();
            assert_eq!(ring.name(), name);
        }
        assert!(GreenRing::builtin("Z8").is_err());
    }

    #[test]
    fn tensor_table_examples() {
        let r = z4();
        let c = r.element_by_label("C").unwrap();
        assert_eq!(c.tensor(&c).unwrap(), r.parse_element("2E").unwrap());
        let ca = r.element_by_label("C^A").unwrap();
        let cb = r.element_by_label("C^B").unwrap();
        assert_eq!(ca.tensor(&cb).unwrap(), r.parse_element("B+2D").unwrap());

        let s = z6();
        let g123 = s.element_by_label("G(1,2,3)").unwrap();
        assert_eq!(g123.tensor(&g123).unwrap(), s.parse_element("2D+G(1,3)+G1").unwrap());
    }

    #[test]
    fn unit_and_known_products() {
        let r = z4();
        let a = r.unit_element();
        for i in 0..r.dimension() {
            let x = r.basis_element(i);
            assert_eq!(a.tensor(&x).unwrap(), x);
        }
        let d = r.element_by_label("D").unwrap();
        let e = r.element_by_label("E").unwrap();
        assert_eq!(d.tensor(&e).unwrap(), r.parse_element("2D").unwrap());
    }

    #[test]
    fn virtual_square_counterexample() {
        // (2E - 2A)^2 = 4A
        let r = z4();
        let x = r.parse_element("2E-2A").unwrap();
        assert_eq!(x.tensor(&x).unwrap(), r.parse_element("4A").unwrap());
    }

    #[test]
    fn tensor_associativity_exhaustive() {
        for name in GreenRing::BUILTIN_NAMES {
            let r = GreenRing::builtin(name).unwrap();
            for i in 0..r.dimension() {
                for j in 0..r.dimension() {
                    for k in 0..r.dimension() {
                        let (x, y, z) =
                            (r.basis_element(i), r.basis_element(j), r.basis_element(k));
                        let left = x.tensor(&y).unwrap().tensor(&z).unwrap();
                        let right = x.tensor(&y.tensor(&z).unwrap()).unwrap();
                        assert_eq!(left, right, "{name} ({i},{j},{k})");
                    }
                }
            }
        }
    }

    #[test]
    fn exterior_power_examples() {
        let r = z4();
        let d = r.element_by_label("D").unwrap();
        assert_eq!(d.exterior_power(2).unwrap(), r.parse_element("C+D").unwrap());
        assert_eq!(d.exterior_power(4).unwrap(), r.parse_element("B").unwrap());
        assert_eq!(d.exterior_power(5).unwrap(), r.zero_element());

        // Lambda^2(A + A) = A tensor A = A
        let aa = r.parse_element("2A").unwrap();
        assert_eq!(aa.exterior_power(2).unwrap(), r.unit_element());

        // virtual elements are rejected for k >= 2
        let v = r.parse_element("A-B").unwrap();
        assert!(matches!(v.exterior_power(2), Err(GreenRingError::VirtualElement(_))));
        assert_eq!(v.exterior_power(1).unwrap(), v);
        assert_eq!(v.exterior_power(0).unwrap(), r.unit_element());
    }

    #[test]
    fn adams_newton_examples() {
        let r = z4();
        let c = r.element_by_label("C").unwrap();
        let d = r.element_by_label("D").unwrap();
        assert_eq!(c.adams(1).unwrap(), c);
        assert_eq!(c.adams(2).unwrap(), r.parse_element("2E-2A").unwrap());
        assert_eq!(d.adams(4).unwrap(), r.parse_element("4E-4B").unwrap());
        assert_eq!(d.adams(8).unwrap(), r.parse_element("4A").unwrap());
        assert!(c.adams(0).is_err());
    }

    #[test]
    fn adams_not_multiplicative_or_composable() {
        let r = z4();
        let c = r.element_by_label("C").unwrap();
        // psi^2(psi^2 C) = 4E - 4B - 2A, different from psi^4(C) = 2A
        let twice = c.adams(2).unwrap().adams(2).unwrap();
        assert_eq!(twice, r.parse_element("4E-4B-2A").unwrap());
        let psi4 = c.adams(4).unwrap();
        assert_eq!(psi4, r.parse_element("2A").unwrap());
        assert_ne!(twice, psi4);
        // psi^2(C^2) = 4E - 4B, different from (psi^2 C)^2 = 4A
        let sq_then = c.tensor(&c).unwrap().adams(2).unwrap();
        assert_eq!(sq_then, r.parse_element("4E-4B").unwrap());
        let then_sq = c.adams(2).unwrap().tensor(&c.adams(2).unwrap()).unwrap();
        assert_eq!(then_sq, r.parse_element("4A").unwrap());
        assert_ne!(sq_then, then_sq);
    }

    #[test]
    fn adams_forced_value_on_cb() {
        // Newton from Lambda^2(C^B) = C^A forces psi^2(C^B) = A + 2D - 2C^A;
        // the trace identity tr(g|psi^2 X) = tr(g^2|X) pins it.
        let r = z4();
        let cb = r.element_by_label("C^B").unwrap();
        let psi2 = cb.adams(2).unwrap();
        assert_eq!(psi2, r.parse_element("A+2D-2C^A").unwrap());
        let tr_g = r.trace_tuple(1);
        let got: BigInt =
            psi2.coeffs().iter().zip(&tr_g).map(|(c, &t)| c * BigInt::from(t)).sum();
        assert_eq!(got, BigInt::from(-1)); // tr(g^2 | C^B)
    }

    #[test]
    fn adams_period_eight() {
        let r = z4();
        for i in 0..7 {
            // the seven indecomposables with exterior data
            let x = r.basis_element(i);
            for k in 1..=8u64 {
                assert_eq!(
                    x.adams(k).unwrap(),
                    x.adams(k + 8).unwrap(),
                    "{} psi^{k}",
                    r.labels()[i]
                );
            }
        }
    }

    #[test]
    fn adams_unavailable_without_exterior_data() {
        let r = z4();
        for label in ["C^E", "C^AB"] {
            let x = r.element_by_label(label).unwrap();
            assert!(x.tensor(&x).is_ok());
            assert!(!x.rank().is_zero());
            assert!(matches!(x.adams(2), Err(GreenRingError::ExteriorUnavailable { .. })));
        }
    }

    #[test]
    fn z6_derived_adams() {
        let s = z6();
        let g1 = s.element_by_label("G1").unwrap();
        assert_eq!(g1.adams(5).unwrap(), g1);
        // Lambda data for G(1,3) is forced by restriction to Z2 and Z3
        let g13 = s.element_by_label("G(1,3)").unwrap();
        assert_eq!(g13.adams(5).unwrap(), g13);
        assert_eq!(g13.adams(7).unwrap(), g13);
        // G(1,2) needs Lambda^2 outside the five-element span: unavailable
        let g12 = s.element_by_label("G(1,2)").unwrap();
        assert!(matches!(g12.adams(5), Err(GreenRingError::ExteriorUnavailable { .. })));
        let d = s.element_by_label("D").unwrap();
        assert!(matches!(d.adams(5), Err(GreenRingError::ExteriorUnavailable { .. })));
    }

    #[test]
    fn restriction_examples() {
        let r = z4();
        let z2 = GreenRing::builtin("Z2").unwrap();
        let c = r.element_by_label("C").unwrap();
        assert_eq!(c.restrict(&z2).unwrap(), z2.parse_element("2I").unwrap());
        let d = r.element_by_label("D").unwrap();
        assert_eq!(d.restrict(&z2).unwrap(), z2.parse_element("2Z[H]").unwrap());
        let a = r.element_by_label("A").unwrap();
        assert_eq!(a.restrict(&z2).unwrap(), z2.parse_element("Z").unwrap());
        // no map from Z4 to Z3
        let z3 = GreenRing::builtin("Z3").unwrap();
        assert!(matches!(a.restrict(&z3), Err(GreenRingError::NoRestriction { .. })));
    }

    #[test]
    fn restriction_is_ring_homomorphism() {
        for name in ["Z4", "Z6_6A"] {
            let r = GreenRing::builtin(name).unwrap();
            for restriction in r.restrictions() {
                let target = restriction.target().clone();
                for i in 0..r.dimension() {
                    for j in i..r.dimension() {
                        let x = r.basis_element(i);
                        let y = r.basis_element(j);
                        let lhs = x.tensor(&y).unwrap().restrict(&target).unwrap();
                        let rhs = x
                            .restrict(&target)
                            .unwrap()
                            .tensor(&y.restrict(&target).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs, "{name} -> {} on ({i},{j})", target.name());
                    }
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        let r = z4();
        assert_eq!(r.element_by_label("D").unwrap().rank(), BigInt::from(4));
        assert_eq!(r.parse_element("A-B").unwrap().rank(), BigInt::zero());
        let s = z6();
        assert_eq!(s.element_by_label("G(1,2,3)").unwrap().rank(), BigInt::from(4));
    }

    #[test]
    fn ring_mismatch_is_rejected() {
        let r = z4();
        let s = z6();
        let a = r.unit_element();
        let b = s.unit_element();
        assert!(matches!(a.tensor(&b), Err(GreenRingError::RingMismatch(_, _))));
    }

    #[test]
    fn corrupted_table_fails_loudly() {
        let text = builtin_json("Z2").unwrap().replace("\"Z[H]\": 2", "\"Z[H]\": 3");
        assert!(matches!(GreenRing::from_json(&text), Err(GreenRingError::TableInvalid { .. })));
    }

    #[test]
    fn element_parsing_and_display() {
        let r = z4();
        let x = r.parse_element("4E - 4B - 2A").unwrap();
        assert_eq!(x.to_string(), "-2A - 4B + 4E");
        assert!(r.parse_element("2Q").is_err());
        assert!(r.parse_element("").is_err());
        let s = z6();
        let y = s.parse_element("2D+G(1,3)+G1").unwrap();
        assert_eq!(y.coeff("D").unwrap(), BigInt::from(2));
        assert_eq!(y.coeff("G(1,3)").unwrap(), BigInt::one());
    }
}
