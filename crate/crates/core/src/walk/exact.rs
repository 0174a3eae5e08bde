//! Exact-rational lazy walk, for certifying the float path on small graphs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::mixing::{MixingResult, StartTau, Starts};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph accepted by the exact routines.
pub const EXACT_MAX_N: usize = 64;

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn stationary_exact(g: &Graph) -> Result<Vec<BigRational>> {
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.n() == 1 {
        return Ok(vec![ratio(1, 1)]);
    }
    Ok((0..g.n()).map(|v| ratio(g.degree(v), 2 * g.m())).collect())
}

pub fn step_exact(g: &Graph, mu: &[BigRational]) -> Vec<BigRational> {
    let outflow: Vec<BigRational> = (0..g.n())
        .map(|x| if g.degree(x) == 0 { BigRational::zero() } else { &mu[x] / ratio(2 * g.degree(x), 1) })
        .collect();
    (0..g.n())
        .map(|y| {
            let hold = if g.degree(y) == 0 { mu[y].clone() } else { &mu[y] / ratio(2, 1) };
            g.neighbors(y).iter().fold(hold, |acc, &x| acc + &outflow[x])
        })
        .collect()
}

pub fn tv_distance_exact(mu: &[BigRational], nu: &[BigRational]) -> Result<BigRational> {
    if mu.len() != nu.len() {
        return Err(Error::LengthMismatch { left: mu.len(), right: nu.len() });
    }
    let l1 = mu.iter().zip(nu).fold(BigRational::zero(), |acc, (a, b)| acc + (a - b).abs());
    Ok(l1 / ratio(2, 1))
}

/// τ_mix at threshold exactly 1/4, in exact arithmetic. Limited to `n ≤ 64`.
pub fn mixing_time_exact(g: &Graph, starts: &Starts, cap: u64) -> Result<MixingResult> {
    if g.n() > EXACT_MAX_N {
        return Err(Error::invalid(format!("exact mode supports n <= {EXACT_MAX_N}, got {}", g.n())));
    }
    if cap == 0 {
        return Err(Error::invalid("cap must be at least 1"));
    }
    let pi = stationary_exact(g)?;
    let quarter = ratio(1, 4);
    let (list, mode) = starts.resolve(g.n())?;
    let mut per_start = Vec::with_capacity(list.len());
    for x in list {
        let mut mu = vec![BigRational::zero(); g.n()];
        mu[x] = ratio(1, 1);
        let mut tv = tv_distance_exact(&mu, &pi)?;
        let mut tau = (tv <= quarter).then_some(0);
        let mut k = 0;
        while tau.is_none() && k < cap {
            k += 1;
            mu = step_exact(g, &mu);
            let now = tv_distance_exact(&mu, &pi)?;
            if now > tv {
                return Err(Error::NotMonotone { step: k, before: crate::rational::to_f64(&tv), after: crate::rational::to_f64(&now) });
            }
            tv = now;
            if tv <= quarter {
                tau = Some(k);
            }
        }
        per_start.push(StartTau { start: x, tau });
    }
    Ok(MixingResult::from_per_start(g.n(), mode, cap, per_start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;

    #[test]
    fn exact_k2() {
        let r = mixing_time_exact(&Graph::complete(2), &Starts::All, 10).unwrap();
        assert_eq!(r.tau, Some(1));
    }

    #[test]
    fn exact_four_cycle_step() {
        let g = cycle(4).unwrap();
        let mut mu = vec![BigRational::zero(); 4];
        mu[0] = ratio(1, 1);
        let next = step_exact(&g, &mu);
        assert_eq!(next, vec![ratio(1, 2), ratio(1, 4), ratio(0, 1), ratio(1, 4)]);
        let pi = stationary_exact(&g).unwrap();
        assert_eq!(step_exact(&g, &pi), pi);
    }

    #[test]
    fn rejects_large_graphs() {
        assert!(mixing_time_exact(&cycle(65).unwrap(), &Starts::All, 10).is_err());
    }
}
