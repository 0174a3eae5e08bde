use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{build_ring, Graph};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, render, to_f64};
use crate::seed::{derive_seed, mix64};

/// Parameters of the `(n, k, p)` Newman–Watts small world with `p = c / n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    pub n: usize,
    pub k: usize,
    pub c: BigRational,
    pub seed: u64,
}

impl GraphSpec {
    pub fn new(n: usize, k: usize, c: BigRational, seed: u64) -> Result<Self> {
        let spec = GraphSpec { n, k, c, seed };
        spec.validate()?;
        Ok(spec)
    }

    /// Convenience constructor for integer `c`.
    pub fn with_integer_c(n: usize, k: usize, c: u64, seed: u64) -> Result<Self> {
        Self::new(n, k, BigRational::from_integer(BigInt::from(c)), seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if self.n <= 2 * self.k {
            return Err(Error::DegenerateRing { n: self.n, k: self.k });
        }
        if self.c < BigRational::zero() || self.c > BigRational::from_integer(BigInt::from(self.n)) {
            return Err(Error::invalid(format!("c = {} must lie in [0, n]", render(&self.c))));
        }
        Ok(())
    }

    /// Edge probability `p = c / n`, exactly.
    pub fn p_exact(&self) -> BigRational {
        &self.c / BigRational::from_integer(BigInt::from(self.n))
    }

    pub fn p(&self) -> f64 {
        to_f64(&self.p_exact())
    }

    pub fn c_f64(&self) -> f64 {
        to_f64(&self.c)
    }

    /// Number of non-ring pairs, each of which is a potential shortcut.
    pub fn shortcut_slots(&self) -> usize {
        self.n * (self.n - 1) / 2 - self.n * self.k
    }
}

impl fmt::Display for GraphSpec {
    /// One `key=value` per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "c={}", render(&self.c))?;
        writeln!(f, "seed={}", self.seed)
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    /// Accepts `key=value` pairs separated by newlines and/or commas.
    fn from_str(s: &str) -> Result<Self> {
        let (mut n, mut k, mut c, mut seed) = (None, None, None, None);
        for item in s.split(['\n', ',']).map(str::trim).filter(|t| !t.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got {item:?}")))?;
            let value = value.trim();
            let int = |v: &str| v.parse::<u64>().map_err(|_| Error::invalid(format!("bad integer {v:?}")));
            match key.trim() {
                "n" => n = Some(int(value)? as usize),
                "k" => k = Some(int(value)? as usize),
                "c" => c = Some(parse_rational(value)?),
                "seed" => seed = Some(int(value)?),
                other => return Err(Error::invalid(format!("unknown key {other:?}"))),
            }
        }
        let missing = |name: &str| Error::invalid(format!("missing key {name}"));
        GraphSpec::new(
            n.ok_or_else(|| missing("n"))?,
            k.ok_or_else(|| missing("k"))?,
            c.ok_or_else(|| missing("c"))?,
            seed.ok_or_else(|| missing("seed"))?,
        )
    }
}

/// `floor(p * 2^64)` as a `u128`, so that a uniform `u64` `h` is a success iff `h < threshold`.
fn bernoulli_threshold(p: &BigRational) -> u128 {
    let scaled = p * BigRational::from_integer(BigInt::from(1u128 << 64));
    scaled.floor().to_integer().to_u128().unwrap_or(u128::MAX)
}

/// Samples `H_{n,k,p}`: the `(n,k)`-ring plus every non-ring pair independently with
/// probability `p = c/n`.
///
/// Each pair `{u,v}` with `u < v` draws its own uniform variate from a counter-based
/// hash of `(seed, u, v)`, so the output does not depend on how rows are scheduled.
pub fn sample_small_world(spec: &GraphSpec) -> Result<Graph> {
    spec.validate()?;
    let (n, k) = (spec.n, spec.k);
    let ring = build_ring(n, k)?;
    let threshold = bernoulli_threshold(&spec.p_exact());
    if threshold == 0 {
        return Ok(ring);
    }
    let key = derive_seed(spec.seed, &[n as u64, k as u64]);

    // Row u holds the shortcuts {u, v} with v > u; non-ring partners form the
    // contiguous range u+k+1 ..= u+n-k-1 clipped to < n.
    let upper: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let hi = (u + n - k - 1).min(n - 1);
            let row = mix64(key ^ (u as u64).wrapping_mul(0xd6e8_feb8_6659_fd93));
            (u + k + 1..=hi)
                .filter(|&v| (mix64(row ^ v as u64) as u128) < threshold)
                .collect()
        })
        .collect();

    let mut adjacency: Vec<Vec<usize>> = (0..n).map(|u| ring.neighbors(u).to_vec()).collect();
    for (u, row) in upper.iter().enumerate() {
        for &v in row {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(Graph::from_sorted_adjacency(adjacency, Some(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_ring;

    #[test]
    fn c_zero_is_the_ring() {
        let spec = GraphSpec::with_integer_c(30, 2, 0, 7).unwrap();
        assert_eq!(sample_small_world(&spec).unwrap(), build_ring(30, 2).unwrap());
    }

    #[test]
    fn c_equal_n_is_complete() {
        let spec = GraphSpec::with_integer_c(9, 1, 9, 3).unwrap();
        let g = sample_small_world(&spec).unwrap();
        assert_eq!(g.m(), 36);
        assert_eq!(g, Graph::complete(9).with_ring_tag(1).unwrap());
    }

    #[test]
    fn same_seed_same_graph() {
        let spec = GraphSpec::with_integer_c(200, 2, 3, 11).unwrap();
        let a = sample_small_world(&spec).unwrap();
        let b = sample_small_world(&spec).unwrap();
        assert_eq!(a, b);
        let other = GraphSpec { seed: 12, ..spec };
        assert_ne!(a, sample_small_world(&other).unwrap());
    }

    #[test]
    fn spec_validation() {
        assert!(GraphSpec::with_integer_c(4, 2, 1, 0).is_err());
        assert!(GraphSpec::with_integer_c(10, 1, 11, 0).is_err());
        assert!(GraphSpec::new(10, 1, BigRational::new((-1).into(), 2.into()), 0).is_err());
    }

    #[test]
    fn spec_text_round_trip() {
        let spec = GraphSpec::new(100, 3, BigRational::new(7.into(), 2.into()), 99).unwrap();
        let text = spec.to_string();
        assert_eq!(text, "n=100\nk=3\nc=7/2\nseed=99\n");
        assert_eq!(text.parse::<GraphSpec>().unwrap(), spec);
        assert_eq!("n=100, k=3, c=3.5, seed=99".parse::<GraphSpec>().unwrap(), spec);
        assert!("n=100, k=3, seed=99".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(bernoulli_threshold(&BigRational::zero()), 0);
        assert_eq!(bernoulli_threshold(&BigRational::from_integer(1.into())), 1u128 << 64);
        assert_eq!(bernoulli_threshold(&BigRational::new(1.into(), 2.into())), 1u128 << 63);
    }
}
