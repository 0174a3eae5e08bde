//! Expected root subtree counts of Galton–Watson trees.
//!
//! For an offspring law `B` with factorial moments `q_j = E[(B)_j]`, the
//! generating function `F = Σ μ_j z^j` satisfies `F(z) = z Q(F(z))`. With
//! `Q = Σ q_j z^j` the coefficients count root subtrees together with an ordering
//! of each vertex's kept children ([`Convention::Ordered`]); with
//! `Q = Σ q_j z^j / j!` they are plain root subtree counts
//! ([`Convention::Unordered`]). The ordered count dominates the plain one, so
//! bounds proved for it transfer.
//!
//! `μ` is computed two independent ways (coefficient recursion and Lagrange
//! inversion), checked against closed forms, and estimated by sampling trees.

mod bjv;
mod sample;
mod series;

pub use bjv::{count_bjv, sample_bjv, BjvRow};
pub use sample::{brute_force_mu, count_root_subtrees, MonteCarloEstimate};
pub use series::{
    closed_form_mu, factorial_moments, mu_by_functional_equation, mu_by_lagrange, mu_upper_bound, series_coefficients,
    CoeffSeq, Convention, MuBound, DEFAULT_ORDER,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, render};

/// Offspring distribution of a Galton–Watson tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OffspringLaw {
    Poisson { mean: BigRational },
    Binomial { trials: u64, p: BigRational },
    /// `Bin(trials, p) + shift`.
    BinomialPlus { trials: u64, p: BigRational, shift: u64 },
    Deterministic { children: u64 },
    /// `pmf[m] = P(B = m)`.
    Explicit { pmf: Vec<BigRational> },
}

fn check_probability(p: &BigRational) -> Result<()> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(Error::invalid(format!("probability {} outside [0, 1]", render(p))));
    }
    Ok(())
}

impl OffspringLaw {
    pub fn poisson(mean: BigRational) -> Result<Self> {
        if !mean.is_positive() {
            return Err(Error::invalid("Poisson mean must be positive"));
        }
        Ok(OffspringLaw::Poisson { mean })
    }

    pub fn binomial(trials: u64, p: BigRational) -> Result<Self> {
        check_probability(&p)?;
        Ok(OffspringLaw::Binomial { trials, p })
    }

    pub fn binomial_plus(trials: u64, p: BigRational, shift: u64) -> Result<Self> {
        check_probability(&p)?;
        Ok(OffspringLaw::BinomialPlus { trials, p, shift })
    }

    pub fn deterministic(children: u64) -> Result<Self> {
        if children == 0 {
            return Err(Error::invalid("deterministic branching needs at least one child"));
        }
        Ok(OffspringLaw::Deterministic { children })
    }

    pub fn explicit(pmf: Vec<BigRational>) -> Result<Self> {
        if pmf.is_empty() || pmf.iter().any(Signed::is_negative) {
            return Err(Error::invalid("pmf must be nonempty and nonnegative"));
        }
        let total: BigRational = pmf.iter().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!("pmf sums to {}, not 1", render(&total))));
        }
        Ok(OffspringLaw::Explicit { pmf })
    }

    /// A constant `C` with `q_j ≤ C^j` for every `j`.
    pub fn growth_constant(&self) -> BigRational {
        let int = |v: u64| BigRational::from_integer(BigInt::from(v));
        match self {
            OffspringLaw::Poisson { mean } => mean.clone(),
            OffspringLaw::Binomial { trials, p } => int(*trials) * p,
            OffspringLaw::BinomialPlus { trials, p, shift } => int(*trials) * p + int(*shift),
            OffspringLaw::Deterministic { children } => int(*children),
            OffspringLaw::Explicit { pmf } => {
                int(pmf.iter().rposition(|w| !w.is_zero()).unwrap_or(0) as u64)
            }
        }
    }

    /// `E[B]`.
    pub fn mean(&self) -> BigRational {
        match self {
            OffspringLaw::Explicit { pmf } => pmf
                .iter()
                .enumerate()
                .map(|(m, w)| w * BigRational::from_integer(BigInt::from(m)))
                .sum(),
            other => other.growth_constant(),
        }
    }
}

impl fmt::Display for OffspringLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OffspringLaw::Poisson { mean } => write!(f, "poisson:{}", render(mean)),
            OffspringLaw::Binomial { trials, p } => write!(f, "binomial:{trials}:{}", render(p)),
            OffspringLaw::BinomialPlus { trials, p, shift } => write!(f, "binomial-plus:{trials}:{}:{shift}", render(p)),
            OffspringLaw::Deterministic { children } => write!(f, "deterministic:{children}"),
            OffspringLaw::Explicit { pmf } => {
                let parts: Vec<String> = pmf.iter().map(render).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for OffspringLaw {
    type Err = Error;

    /// `poisson:7/2`, `binomial:50:1/10`, `binomial-plus:50:1/10:2`,
    /// `deterministic:3`, `explicit:1/2,0,1/2`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let kind = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let int = |v: &str| v.trim().parse::<u64>().map_err(|_| Error::invalid(format!("bad integer {v:?} in law {s:?}")));
        match (kind, args.as_slice()) {
            ("poisson", [c]) => Self::poisson(parse_rational(c)?),
            ("binomial", [n, p]) => Self::binomial(int(n)?, parse_rational(p)?),
            ("binomial-plus", [n, p, l]) => Self::binomial_plus(int(n)?, parse_rational(p)?, int(l)?),
            ("deterministic", [d]) => Self::deterministic(int(d)?),
            ("explicit", [pmf]) => Self::explicit(pmf.split(',').map(parse_rational).collect::<Result<_>>()?),
            _ => Err(Error::invalid(format!("unrecognized offspring law {s:?}"))),
        }
    }
}
