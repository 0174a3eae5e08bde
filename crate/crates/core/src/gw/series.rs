use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::OffspringLaw;
use crate::error::{Error, Result};
use crate::rational::{binomial, falling, int, render};

/// Default truncation order for series work.
pub const DEFAULT_ORDER: usize = 30;

fn big(u: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(u))
}

/// What a "`j`-vertex subtree" counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// Embeddings of plane trees: each subtree is weighted by the product over its
    /// vertices of (children kept)!. Series coefficients are `q_j` themselves.
    /// This is an upper bound on the plain count.
    #[default]
    Ordered,
    /// Plain count of root subtrees. Series coefficients are `q_j / j!`.
    Unordered,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Ordered => "ordered",
            Convention::Unordered => "unordered",
        }
    }
}

/// Coefficients of `Q` for `convention`: `q_j`, or `q_j / j!`.
pub fn series_coefficients(q: &[BigRational], convention: Convention) -> Vec<BigRational> {
    match convention {
        Convention::Ordered => q.to_vec(),
        Convention::Unordered => {
            let mut fact = BigRational::one();
            q.iter()
                .enumerate()
                .map(|(j, x)| {
                    if j > 0 {
                        fact *= int(j as u64);
                    }
                    x / &fact
                })
                .collect()
        }
    }
}

/// `q_0 ..= q_order` with `q_j = E[(B)_j]`, exactly.
pub fn factorial_moments(law: &OffspringLaw, order: usize) -> Vec<BigRational> {
    (0..=order as u64)
        .map(|j| match law {
            OffspringLaw::Poisson { mean } => num_traits::pow(mean.clone(), j as usize),
            OffspringLaw::Binomial { trials, p } => big(falling(*trials, j)) * num_traits::pow(p.clone(), j as usize),
            OffspringLaw::BinomialPlus { trials, p, shift } => (0..=j)
                .map(|s| {
                    big(binomial(j, s) * falling(*shift, s) * falling(*trials, j - s))
                        * num_traits::pow(p.clone(), (j - s) as usize)
                })
                .sum(),
            OffspringLaw::Deterministic { children } => big(falling(*children, j)),
            OffspringLaw::Explicit { pmf } => pmf
                .iter()
                .enumerate()
                .map(|(m, w)| w * big(falling(m as u64, j)))
                .sum(),
        })
        .collect()
}

fn mul_truncated(a: &[BigRational], b: &[BigRational], degree: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); degree + 1];
    for (i, x) in a.iter().enumerate().take(degree + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(degree + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `μ_0 ..= μ_order` by extracting coefficients from `F(z) = z Q(F(z))`, where
/// `q` holds the coefficients of `Q` (see [`series_coefficients`]):
///
/// `μ_{r+1} = Σ_{j ≤ r} q_j Σ_{r_1+…+r_j = r, r_i ≥ 1} μ_{r_1}⋯μ_{r_j}`,
///
/// where the inner sum is `[z^r] F(z)^j` and the `j = 0` term is `q_0 [r = 0]`.
pub fn mu_by_functional_equation(q: &[BigRational], order: usize) -> Result<Vec<BigRational>> {
    check_q(q, order)?;
    let mut mu = vec![BigRational::zero(); order + 1];
    if order == 0 {
        return Ok(mu);
    }
    // powers[j][t] = [z^t] F(z)^j, filled column by column as μ becomes known.
    let mut powers = vec![vec![BigRational::zero(); order]; order];
    powers[0][0] = BigRational::one();
    mu[1] = q[0].clone();
    for r in 1..order {
        // Column r needs μ_1..μ_r only.
        for j in 1..=r {
            let mut acc = BigRational::zero();
            for s in 1..=r + 1 - j {
                if !mu[s].is_zero() && !powers[j - 1][r - s].is_zero() {
                    acc += &mu[s] * &powers[j - 1][r - s];
                }
            }
            powers[j][r] = acc;
        }
        mu[r + 1] = (1..=r).map(|j| &q[j] * &powers[j][r]).sum();
    }
    Ok(mu)
}

/// `μ_j = (1/j) [z^{j-1}] Q(z)^j` by truncated power-series powers.
pub fn mu_by_lagrange(q: &[BigRational], order: usize) -> Result<Vec<BigRational>> {
    check_q(q, order)?;
    let mut mu = vec![BigRational::zero(); order + 1];
    if order == 0 {
        return Ok(mu);
    }
    let degree = order - 1;
    let series = &q[..=degree];
    let mut power = series.to_vec();
    for j in 1..=order {
        if j > 1 {
            power = mul_truncated(&power, series, degree);
        }
        mu[j] = &power[j - 1] / int(j as u64);
    }
    Ok(mu)
}

fn check_q(q: &[BigRational], order: usize) -> Result<()> {
    if q.len() < order.max(1) {
        return Err(Error::invalid(format!("need q_0..q_{}, got {} terms", order.max(1) - 1, q.len())));
    }
    Ok(())
}

/// Closed forms for `μ_j`, where one is known:
///
/// * Poisson(c), ordered: `c^{j-1}/j · C(2j-2, j-1)`;
/// * Poisson(c), unordered: `c^{j-1} j^{j-2} / (j-1)!`;
/// * deterministic `d`-ary, unordered: `C(dj, j-1)/j`.
pub fn closed_form_mu(law: &OffspringLaw, j: u64, convention: Convention) -> Option<BigRational> {
    if j == 0 {
        return Some(BigRational::zero());
    }
    match (law, convention) {
        (OffspringLaw::Poisson { mean }, Convention::Ordered) => Some(
            num_traits::pow(mean.clone(), (j - 1) as usize) * big(binomial(2 * j - 2, j - 1)) / int(j),
        ),
        (OffspringLaw::Poisson { mean }, Convention::Unordered) => {
            let jj = BigRational::from_integer(BigInt::from(j)).pow(j as i32 - 2);
            Some(num_traits::pow(mean.clone(), (j - 1) as usize) * jj / big(falling(j - 1, j - 1)))
        }
        (OffspringLaw::Deterministic { children }, Convention::Unordered) => {
            Some(big(binomial(children * j, j - 1)) / int(j))
        }
        _ => None,
    }
}

/// Upper bounds on `μ_j` when `q_i ≤ C^i` for all `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuBound {
    /// `(1/j) C(2j-2, j-1) C^{j-1}`
    pub catalan: BigRational,
    /// `(4C)^{j-1}`
    pub coarse: BigRational,
}

pub fn mu_upper_bound(growth: &BigRational, j: u64) -> Result<MuBound> {
    if growth <= &BigRational::zero() {
        return Err(Error::invalid("growth constant must be positive"));
    }
    if j == 0 {
        return Err(Error::invalid("bound is stated for j >= 1"));
    }
    let power = num_traits::pow(growth.clone(), (j - 1) as usize);
    Ok(MuBound {
        catalan: big(binomial(2 * j - 2, j - 1)) * &power / int(j),
        coarse: power * num_traits::pow(int(4), (j - 1) as usize),
    })
}

/// Factorial moments and subtree counts of one law to a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffSeq {
    pub law: OffspringLaw,
    pub q: Vec<BigRational>,
    /// Ordered convention.
    pub mu: Vec<BigRational>,
    /// Unordered convention.
    pub subtrees: Vec<BigRational>,
}

impl CoeffSeq {
    /// Computes `q` and both `μ` sequences via Lagrange inversion, cross-checking
    /// each against the coefficient recursion.
    pub fn compute(law: &OffspringLaw, order: usize) -> Result<Self> {
        let q = factorial_moments(law, order);
        let solve = |convention| -> Result<Vec<BigRational>> {
            let coeffs = series_coefficients(&q, convention);
            let mu = mu_by_lagrange(&coeffs, order)?;
            if mu != mu_by_functional_equation(&coeffs, order)? {
                return Err(Error::Validation(format!("series methods disagree for {law} ({})", convention.name())));
            }
            Ok(mu)
        };
        let mu = solve(Convention::Ordered)?;
        let subtrees = solve(Convention::Unordered)?;
        Ok(CoeffSeq { law: law.clone(), q, mu, subtrees })
    }

    pub fn order(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn mu(&self, convention: Convention) -> &[BigRational] {
        match convention {
            Convention::Ordered => &self.mu,
            Convention::Unordered => &self.subtrees,
        }
    }

    /// Rows `j,q_j,mu_j,subtrees_j,bound_j` for `j = 0..=order`, exact `p/q`
    /// strings. The bound column uses the law's growth constant and is empty at `j = 0`.
    pub fn to_csv(&self) -> String {
        let growth = self.law.growth_constant();
        let mut out = String::from("j,q_j,mu_j,subtrees_j,bound_j\n");
        for j in 0..=self.order() {
            let bound = mu_upper_bound(&growth, j as u64).map(|b| render(&b.catalan)).unwrap_or_default();
            let _ = writeln!(
                out,
                "{j},{},{},{},{bound}",
                render(&self.q[j]),
                render(&self.mu[j]),
                render(&self.subtrees[j])
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law(s: &str) -> OffspringLaw {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn poisson_factorial_moments() {
        assert_eq!(factorial_moments(&law("poisson:3"), 3), ints(&[1, 3, 9, 27]));
    }

    #[test]
    fn deterministic_and_explicit_moments() {
        assert_eq!(factorial_moments(&law("deterministic:3"), 4), ints(&[1, 3, 6, 6, 0]));
        let q = factorial_moments(&law("explicit:1/2,0,1/2"), 3);
        assert_eq!(q, ints(&[1, 1, 1, 0]));
    }

    #[test]
    fn binomial_plus_convolution_by_hand() {
        // Bin(2, 1/2) + 1: B ∈ {1, 2, 3} w.p. 1/4, 1/2, 1/4.
        let direct = factorial_moments(&law("explicit:0,1/4,1/2,1/4"), 4);
        assert_eq!(factorial_moments(&law("binomial-plus:2:1/2:1"), 4), direct);
    }

    #[test]
    fn all_ones_gives_catalan() {
        let q = ints(&[1; 7]);
        let expect = ints(&[0, 1, 1, 2, 5, 14, 42]);
        assert_eq!(mu_by_functional_equation(&q, 6).unwrap(), expect);
        assert_eq!(mu_by_lagrange(&q, 6).unwrap(), expect);
    }

    #[test]
    fn mu_starts_with_root_alone() {
        for s in ["poisson:7/2", "binomial:5:1/3", "deterministic:2", "explicit:1/3,2/3"] {
            let seq = CoeffSeq::compute(&law(s), 8).unwrap();
            assert!(seq.mu[0].is_zero());
            assert!(seq.mu[1].is_one());
            assert!(seq.q[0].is_one());
        }
    }

    #[test]
    fn poisson_one_mu3() {
        let q = factorial_moments(&law("poisson:1"), 3);
        assert_eq!(mu_by_lagrange(&q, 3).unwrap()[3], int(2));
    }

    #[test]
    fn bound_values() {
        let b = mu_upper_bound(&int(1), 3).unwrap();
        assert_eq!(b.catalan, int(2));
        assert_eq!(b.coarse, int(16));
        assert!(mu_upper_bound(&BigRational::zero(), 3).is_err());
        assert!(mu_upper_bound(&int(1), 0).is_err());
    }

    #[test]
    fn csv_rows_are_exact() {
        let seq = CoeffSeq::compute(&law("poisson:1/2"), 3).unwrap();
        assert_eq!(
            seq.to_csv(),
            "j,q_j,mu_j,subtrees_j,bound_j\n0,1,0,0,\n1,1/2,1,1,1\n2,1/4,1/2,1/2,1/2\n3,1/8,1/2,3/8,1/2\n"
        );
    }

    #[test]
    fn binary_tree_conventions_differ() {
        let seq = CoeffSeq::compute(&law("deterministic:2"), 3).unwrap();
        assert_eq!(seq.subtrees[3], int(5));
        assert_eq!(seq.mu[3], int(6));
    }

    #[test]
    fn closed_forms_small_j() {
        for convention in [Convention::Ordered, Convention::Unordered] {
            for s in ["poisson:3/2", "deterministic:3"] {
                let seq = CoeffSeq::compute(&law(s), 10).unwrap();
                for j in 0..=10u64 {
                    if let Some(exact) = closed_form_mu(&law(s), j, convention) {
                        assert_eq!(seq.mu(convention)[j as usize], exact, "{s} {convention:?} j={j}");
                    }
                }
            }
        }
    }
}
