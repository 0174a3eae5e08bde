use std::fmt::Write as _;

use num_rational::BigRational;

use super::VERSION;
use crate::conductance::DEFAULT_BUDGET;
use crate::error::Result;
use crate::graph::GraphSpec;
use crate::gw::{
    brute_force_mu, closed_form_mu, mu_upper_bound, sample_bjv, CoeffSeq, Convention, OffspringLaw,
};
use crate::rational::{int, render, to_f64};

/// Laws whose two series computations must agree exactly.
pub const IDENTITY_LAWS: &[&str] =
    &["poisson:1", "poisson:7/2", "binomial:50:1/10", "binomial-plus:50:1/10:2", "deterministic:3", "explicit:1/2,0,1/2"];

/// Laws with a known growth constant `C` (`q_j ≤ C^j`).
pub const BOUND_LAWS: &[&str] = &["poisson:1", "poisson:7/2", "binomial:50:1/10", "binomial-plus:50:1/10:2"];

/// Sizes of the verification battery.
#[derive(Clone, Debug)]
pub struct VerificationOptions {
    pub order: usize,
    pub bound_order: usize,
    pub mc_samples: usize,
    pub mc_max_j: usize,
    pub bjv_n: usize,
    pub bjv_k: usize,
    pub bjv_c: u64,
    pub bjv_graphs: usize,
    pub bjv_max_j: usize,
    pub seed: u64,
    pub budget: u64,
}

impl Default for VerificationOptions {
    fn default() -> Self {
        VerificationOptions {
            order: 30,
            bound_order: 25,
            mc_samples: 100_000,
            mc_max_j: 5,
            bjv_n: 14,
            bjv_k: 1,
            bjv_c: 1,
            bjv_graphs: 500,
            bjv_max_j: 6,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// One check of the battery.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    /// Exact checks must never fail; Monte Carlo ones can by chance.
    pub exact: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exact_failures(&self) -> Vec<&CheckOutcome> {
        self.checks.iter().filter(|c| c.exact && !c.passed).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,kind,passed,detail,version\n");
        for c in &self.checks {
            let kind = if c.exact { "exact" } else { "monte-carlo" };
            let _ = writeln!(out, "{},{kind},{},\"{}\",{VERSION}", c.name, c.passed, c.detail.replace('"', "'"));
        }
        out
    }
}

fn law(s: &str) -> OffspringLaw {
    s.parse().expect("built-in law")
}

fn push(checks: &mut Vec<CheckOutcome>, name: String, exact: bool, passed: bool, detail: String) {
    checks.push(CheckOutcome { name, exact, passed, detail });
}

/// Runs the subtree-counting battery: series identities, closed forms, the
/// Catalan-type bound, Monte Carlo trees against exact `μ_j`, and `|B_{j,v}|` on
/// sampled small worlds against its bounds.
pub fn run_subtree_verification(options: &VerificationOptions) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let conventions = [Convention::Ordered, Convention::Unordered];

    for &name in IDENTITY_LAWS {
        let outcome = CoeffSeq::compute(&law(name), options.order);
        push(
            &mut checks,
            format!("identity {name}"),
            true,
            outcome.is_ok(),
            outcome.map_or_else(|e| e.to_string(), |_| format!("both conventions, order {}", options.order)),
        );
    }

    for (name, convention) in [
        ("poisson:1", Convention::Ordered),
        ("poisson:7/2", Convention::Ordered),
        ("poisson:7/2", Convention::Unordered),
        ("deterministic:2", Convention::Unordered),
        ("deterministic:3", Convention::Unordered),
    ] {
        let l = law(name);
        let seq = CoeffSeq::compute(&l, options.order)?;
        let bad: Vec<usize> = (0..=options.order)
            .filter(|&j| closed_form_mu(&l, j as u64, convention).as_ref() != Some(&seq.mu(convention)[j]))
            .collect();
        push(
            &mut checks,
            format!("closed-form {name} {}", convention.name()),
            true,
            bad.is_empty(),
            format!("j <= {}, mismatches at {bad:?}", options.order),
        );
    }

    let catalan = CoeffSeq::compute(&law("poisson:1"), 6)?;
    let expect: Vec<BigRational> = [1, 1, 2, 5, 14, 42].iter().map(|&v| int(v)).collect();
    push(
        &mut checks,
        "catalan poisson:1".into(),
        true,
        catalan.mu[1..] == expect[..],
        format!("mu_1..6 = {}", catalan.mu[1..].iter().map(render).collect::<Vec<_>>().join(" ")),
    );

    for &name in BOUND_LAWS {
        let l = law(name);
        let growth = l.growth_constant();
        let seq = CoeffSeq::compute(&l, options.bound_order)?;
        let mut problems = Vec::new();
        for j in 0..=options.bound_order {
            if seq.q[j] > num_traits::pow(growth.clone(), j) {
                problems.push(format!("q_{j} > C^{j}"));
            }
            if j == 0 {
                continue;
            }
            let bound = mu_upper_bound(&growth, j as u64)?;
            for convention in conventions {
                if seq.mu(convention)[j] > bound.catalan {
                    problems.push(format!("mu_{j} ({}) above bound", convention.name()));
                }
            }
            if j >= 2 && bound.catalan >= bound.coarse {
                problems.push(format!("bound_{j} not below (4C)^{}", j - 1));
            }
        }
        push(
            &mut checks,
            format!("bound {name}"),
            true,
            problems.is_empty(),
            format!("C = {}, j <= {}; {}", render(&growth), options.bound_order, problems.join("; ")),
        );
    }

    let poisson = law("poisson:1");
    let seq = CoeffSeq::compute(&poisson, options.mc_max_j)?;
    for convention in conventions {
        for j in 1..=options.mc_max_j {
            let est = brute_force_mu(&poisson, j, options.mc_samples, options.seed, convention)?;
            let exact = to_f64(&seq.mu(convention)[j]);
            push(
                &mut checks,
                format!("monte-carlo poisson:1 {} j={j}", convention.name()),
                false,
                est.within(exact, 3.0),
                format!("mean {} stderr {} exact {exact}", est.mean, est.stderr),
            );
        }
    }

    let spec = GraphSpec::with_integer_c(options.bjv_n, options.bjv_k, options.bjv_c, 0)?;
    let rows = sample_bjv(&spec, 0, options.bjv_max_j, options.bjv_graphs, options.seed, options.budget)?;
    for row in rows {
        let bound = to_f64(&row.bjv_bound);
        let mu = to_f64(&row.dominating_mu);
        push(
            &mut checks,
            format!("bjv n={} j={}", options.bjv_n, row.j),
            false,
            row.bjv.mean <= bound && row.bjv.mean <= mu + 3.0 * row.bjv.stderr,
            format!(
                "mean {} stderr {} bound {bound} mu {mu} subtrees {} |B_j| mean {} bound {}",
                row.bjv.mean,
                row.bjv.stderr,
                to_f64(&row.dominating_subtrees),
                row.bj.mean,
                to_f64(&row.bj_bound)
            ),
        );
    }

    Ok(VerificationReport { checks })
}
