//! Strictly increasing sequences of naturals, 1-indexed.
//!
//! The three schema kinds (`explicit`, `affine`, `geometric`) round-trip
//! through JSON. `derived` sequences are rule-backed and lazily memoized;
//! envelope and dominator constructions produce them. Derived terms are
//! materialized in order behind a read-safe lock and never change once
//! computed.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::{Arc, RwLock};

use super::rat::Rat;

/// Materialization cap for derived sequences and for segment searches. Walks
/// beyond this many terms signal that a computation left desk scale.
pub const MATERIALIZE_CAP: u64 = 1 << 17;

/// Index cap for geometric sequences (term sizes grow linearly in bits).
pub const GEOMETRIC_INDEX_CAP: u64 = 1 << 22;

pub type DerivedRule = dyn Fn(&[BigInt]) -> Result<BigInt, SeqError> + Send + Sync;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    #[error("sequence indices start at 1")]
    ZeroIndex,
    #[error("index {index} out of range for explicit sequence of length {len}")]
    OutOfRange { index: u64, len: usize },
    #[error("index {index} exceeds the materialization cap {cap}")]
    TooDeep { index: u64, cap: u64 },
    #[error("invalid sequence: {0}")]
    Invalid(String),
    #[error("derived rule produced a non-increasing term at index {index}")]
    NotIncreasing { index: u64 },
}

enum Rule {
    Explicit(Vec<BigInt>),
    Affine { start: BigInt, step: BigInt },
    Geometric { start: BigInt, ratio: BigInt },
    Derived { label: String, gen: Box<DerivedRule> },
}

struct SeqInner {
    rule: Rule,
    memo: RwLock<Vec<BigInt>>,
}

/// A strictly increasing sequence of naturals. Cheap to clone; clones share
/// the memoized materialization.
#[derive(Clone)]
pub struct Seq {
    inner: Arc<SeqInner>,
}

impl Seq {
    fn from_rule(rule: Rule) -> Seq {
        Seq {
            inner: Arc::new(SeqInner {
                rule,
                memo: RwLock::new(Vec::new()),
            }),
        }
    }

    pub fn explicit(terms: Vec<BigInt>) -> Result<Seq, SeqError> {
        if terms.is_empty() {
            return Err(SeqError::Invalid("explicit sequence is empty".into()));
        }
        if terms[0] < BigInt::one() {
            return Err(SeqError::Invalid("terms must be naturals >= 1".into()));
        }
        for w in terms.windows(2) {
            if w[1] <= w[0] {
                return Err(SeqError::Invalid(format!(
                    "not strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Seq::from_rule(Rule::Explicit(terms)))
    }

    pub fn explicit_u64(terms: &[u64]) -> Result<Seq, SeqError> {
        Seq::explicit(terms.iter().map(|&t| BigInt::from(t)).collect())
    }

    /// `a_n = start + step * (n - 1)`, `start >= 1`, `step >= 1`.
    pub fn affine(start: u64, step: u64) -> Result<Seq, SeqError> {
        if start < 1 || step < 1 {
            return Err(SeqError::Invalid(
                "affine sequences need start >= 1 and step >= 1".into(),
            ));
        }
        Ok(Seq::from_rule(Rule::Affine {
            start: start.into(),
            step: step.into(),
        }))
    }

    /// `a_n = start * ratio^(n - 1)`, `start >= 1`, `ratio >= 2`.
    pub fn geometric(start: u64, ratio: u64) -> Result<Seq, SeqError> {
        if start < 1 || ratio < 2 {
            return Err(SeqError::Invalid(
                "geometric sequences need start >= 1 and ratio >= 2".into(),
            ));
        }
        Ok(Seq::from_rule(Rule::Geometric {
            start: start.into(),
            ratio: ratio.into(),
        }))
    }

    /// Rule-backed sequence; `gen` receives the materialized prefix and must
    /// return the next term, strictly greater than the last.
    pub fn derived(
        label: impl Into<String>,
        gen: impl Fn(&[BigInt]) -> Result<BigInt, SeqError> + Send + Sync + 'static,
    ) -> Seq {
        Seq::from_rule(Rule::Derived {
            label: label.into(),
            gen: Box::new(gen),
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.inner.rule {
            Rule::Explicit(_) => "explicit",
            Rule::Affine { .. } => "affine",
            Rule::Geometric { .. } => "geometric",
            Rule::Derived { .. } => "derived",
        }
    }

    /// Length when the sequence is finite (explicit), else `None`.
    pub fn finite_len(&self) -> Option<u64> {
        match &self.inner.rule {
            Rule::Explicit(t) => Some(t.len() as u64),
            _ => None,
        }
    }

    pub(crate) fn schema_parts(&self) -> SchemaParts<'_> {
        match &self.inner.rule {
            Rule::Explicit(t) => SchemaParts::Explicit(t),
            Rule::Affine { start, step } => SchemaParts::Affine(start, step),
            Rule::Geometric { start, ratio } => SchemaParts::Geometric(start, ratio),
            Rule::Derived { label, .. } => SchemaParts::Derived(label),
        }
    }

    /// `a_n` for 1-indexed `n`.
    pub fn at(&self, n: u64) -> Result<BigInt, SeqError> {
        if n == 0 {
            return Err(SeqError::ZeroIndex);
        }
        match &self.inner.rule {
            Rule::Explicit(t) => t
                .get(n as usize - 1)
                .cloned()
                .ok_or(SeqError::OutOfRange { index: n, len: t.len() }),
            Rule::Affine { start, step } => Ok(start + step * BigInt::from(n - 1)),
            Rule::Geometric { start, ratio } => {
                if n > GEOMETRIC_INDEX_CAP {
                    return Err(SeqError::TooDeep { index: n, cap: GEOMETRIC_INDEX_CAP });
                }
                Ok(start * num_traits::pow::pow(ratio.clone(), (n - 1) as usize))
            }
            Rule::Derived { .. } => {
                self.materialize_to(n)?;
                Ok(self.inner.memo.read().unwrap()[n as usize - 1].clone())
            }
        }
    }

    fn materialize_to(&self, n: u64) -> Result<(), SeqError> {
        if n > MATERIALIZE_CAP {
            return Err(SeqError::TooDeep { index: n, cap: MATERIALIZE_CAP });
        }
        if self.inner.memo.read().unwrap().len() as u64 >= n {
            return Ok(());
        }
        let gen = match &self.inner.rule {
            Rule::Derived { gen, .. } => gen,
            _ => return Ok(()),
        };
        let mut memo = self.inner.memo.write().unwrap();
        while (memo.len() as u64) < n {
            let next = gen(&memo)?;
            if let Some(last) = memo.last() {
                if next <= *last {
                    return Err(SeqError::NotIncreasing { index: memo.len() as u64 + 1 });
                }
            } else if next < BigInt::one() {
                return Err(SeqError::Invalid("derived term below 1".into()));
            }
            memo.push(next);
        }
        Ok(())
    }

    /// Largest `k >= 1` with `a_k <= x`, together with `a_k`.
    /// `None` when `x < a_1`.
    pub fn last_index_le(&self, x: &Rat) -> Result<Option<(u64, BigInt)>, SeqError> {
        if x.is_negative() {
            return Ok(None);
        }
        let xf = x.floor().to_integer();
        match &self.inner.rule {
            Rule::Explicit(t) => {
                // partition_point: number of terms <= xf
                let k = t.partition_point(|a| *a <= xf) as u64;
                Ok(if k == 0 { None } else { Some((k, t[k as usize - 1].clone())) })
            }
            Rule::Affine { start, step } => {
                if xf < *start {
                    return Ok(None);
                }
                let k = (&xf - start) / step; // floor division of nonnegatives
                let n = k.to_u64().ok_or(SeqError::TooDeep {
                    index: u64::MAX,
                    cap: u64::MAX,
                })? + 1;
                Ok(Some((n, start + step * k)))
            }
            Rule::Geometric { start, ratio } => {
                if xf < *start {
                    return Ok(None);
                }
                let mut term = start.clone();
                let mut n = 1u64;
                loop {
                    let next = &term * ratio;
                    if next > xf {
                        return Ok(Some((n, term)));
                    }
                    term = next;
                    n += 1;
                }
            }
            Rule::Derived { .. } => {
                let mut n = {
                    let memo = self.inner.memo.read().unwrap();
                    let k = memo.partition_point(|a| *a <= xf) as u64;
                    if k > 0 && (k as usize) < memo.len() {
                        // next term already known to exceed x
                        return Ok(Some((k, memo[k as usize - 1].clone())));
                    }
                    memo.len() as u64
                };
                if n == 0 {
                    self.materialize_to(1)?;
                    n = 1;
                    if self.inner.memo.read().unwrap()[0] > xf {
                        return Ok(None);
                    }
                }
                loop {
                    if n + 1 > MATERIALIZE_CAP {
                        return Err(SeqError::TooDeep { index: n + 1, cap: MATERIALIZE_CAP });
                    }
                    self.materialize_to(n + 1)?;
                    let memo = self.inner.memo.read().unwrap();
                    if memo[n as usize] > xf {
                        return Ok(Some((n, memo[n as usize - 1].clone())));
                    }
                    n += 1;
                }
            }
        }
    }

    /// First `terms` entries, materializing as needed.
    pub fn prefix(&self, terms: u64) -> Result<Vec<BigInt>, SeqError> {
        (1..=terms).map(|n| self.at(n)).collect()
    }
}

pub(crate) enum SchemaParts<'a> {
    Explicit(&'a [BigInt]),
    Affine(&'a BigInt, &'a BigInt),
    Geometric(&'a BigInt, &'a BigInt),
    Derived(&'a str),
}

impl std::fmt::Debug for Seq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.inner.rule {
            Rule::Explicit(t) => write!(f, "Seq::explicit({t:?})"),
            Rule::Affine { start, step } => write!(f, "Seq::affine({start}, {step})"),
            Rule::Geometric { start, ratio } => write!(f, "Seq::geometric({start}, {ratio})"),
            Rule::Derived { label, .. } => {
                let memo = self.inner.memo.read().unwrap();
                let shown: Vec<_> = memo.iter().take(6).collect();
                write!(f, "Seq::derived({label:?}, prefix {shown:?}...)")
            }
        }
    }
}

impl PartialEq for Seq {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        match (&self.inner.rule, &other.inner.rule) {
            (Rule::Explicit(a), Rule::Explicit(b)) => a == b,
            (Rule::Affine { start: s1, step: d1 }, Rule::Affine { start: s2, step: d2 }) => {
                s1 == s2 && d1 == d2
            }
            (
                Rule::Geometric { start: s1, ratio: r1 },
                Rule::Geometric { start: s2, ratio: r2 },
            ) => s1 == s2 && r1 == r2,
            _ => false,
        }
    }
}

impl Eq for Seq {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfn::rat::rat_int;

    #[test]
    fn affine_terms() {
        let a = Seq::affine(2, 2).unwrap();
        assert_eq!(a.at(1).unwrap(), BigInt::from(2));
        assert_eq!(a.at(4).unwrap(), BigInt::from(8));
        assert_eq!(a.at(10_000).unwrap(), BigInt::from(20_000));
    }

    #[test]
    fn geometric_terms() {
        let g = Seq::geometric(1, 2).unwrap();
        assert_eq!(g.at(1).unwrap(), BigInt::from(1));
        assert_eq!(g.at(11).unwrap(), BigInt::from(1024));
        // deep indexing stays fast
        let big = g.at(10_000).unwrap();
        assert_eq!(big.bits(), 10_000);
    }

    #[test]
    fn explicit_bounds() {
        let e = Seq::explicit_u64(&[2, 4]).unwrap();
        assert_eq!(e.at(2).unwrap(), BigInt::from(4));
        assert!(matches!(e.at(3), Err(SeqError::OutOfRange { .. })));
        assert!(Seq::explicit_u64(&[3, 3]).is_err());
        assert!(Seq::explicit_u64(&[]).is_err());
        assert!(Seq::explicit_u64(&[0, 1]).is_err());
    }

    #[test]
    fn derived_materializes_in_order() {
        let s = Seq::derived("squares-plus", |prefix| {
            let n = prefix.len() as u64 + 1;
            Ok(BigInt::from(n * n))
        });
        assert_eq!(s.at(3).unwrap(), BigInt::from(9));
        assert_eq!(s.at(1).unwrap(), BigInt::from(1));
        let (k, a_k) = s.last_index_le(&rat_int(10)).unwrap().unwrap();
        assert_eq!((k, a_k), (3, BigInt::from(9)));
    }

    #[test]
    fn derived_rejects_non_increasing() {
        let s = Seq::derived("bad", |_| Ok(BigInt::from(5)));
        assert!(s.at(1).is_ok());
        assert!(matches!(s.at(2), Err(SeqError::NotIncreasing { .. })));
    }

    #[test]
    fn last_index_le_closed_forms() {
        let a = Seq::affine(2, 2).unwrap(); // 2, 4, 6, ...
        assert_eq!(a.last_index_le(&rat_int(1)).unwrap(), None);
        assert_eq!(
            a.last_index_le(&rat_int(7)).unwrap(),
            Some((3, BigInt::from(6)))
        );
        let g = Seq::geometric(2, 3).unwrap(); // 2, 6, 18, ...
        assert_eq!(
            g.last_index_le(&rat_int(18)).unwrap(),
            Some((3, BigInt::from(18)))
        );
        assert_eq!(
            g.last_index_le(&crate::realfn::rat::rat(35, 2)).unwrap(),
            Some((2, BigInt::from(6)))
        );
    }
}
