//! Explicit constants from the mixing-time proofs, solved numerically and re-checked.

mod cycle;

use std::f64::consts::{E, LN_2};
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{self, int, render, to_f64};

pub use cycle::{arcs, cycle_cut, cycle_component_histogram, cycle_subset_count, cycle_subset_tally, BRUTE_FORCE_MAX_N};

/// Tolerance on the `x_k` equation residual.
pub const XK_TOLERANCE: f64 = 1e-9;

/// `φ(x) = (1+x) ln(1+x) − x`, the Chernoff rate function.
pub fn chernoff_phi(x: f64) -> Result<f64> {
    if x.is_nan() || x <= -1.0 {
        return Err(Error::invalid(format!("chernoff rate needs x > -1, got {x}")));
    }
    Ok((1.0 + x) * x.ln_1p() - x)
}

/// Bound on `P(X ≥ (1+x)mq)` for a sum with mean `mq`: `exp(−mq φ(x))`.
pub fn upper_tail(mean: f64, x: f64) -> Result<f64> {
    Ok((-mean * chernoff_phi(x)?).exp())
}

/// Bound on `P(X ≤ (1−x)mq)`: `exp(−mq φ(−x))`, for `0 ≤ x < 1`.
pub fn lower_tail(mean: f64, x: f64) -> Result<f64> {
    Ok((-mean * chernoff_phi(-x)?).exp())
}

/// `exp(−mq x² / (2(1+x)))`, the weaker form of [`upper_tail`].
pub fn upper_tail_coarse(mean: f64, x: f64) -> f64 {
    (-mean * x * x / (2.0 * (1.0 + x))).exp()
}

/// `exp(−mq x² / 2)`, the weaker form of [`lower_tail`].
pub fn lower_tail_coarse(mean: f64, x: f64) -> f64 {
    (-mean * x * x / 2.0).exp()
}

fn xk_residual(x: f64, k: usize) -> f64 {
    x / 720.0 - (4.0 * (x + 2.0 * k as f64)).ln() - 5.0
}

/// Positive root of `x/720 − ln(4(x+2k)) = 5`, by bisection.
pub fn solve_xk(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let f = |x: f64| xk_residual(x, k);
    let mut lo = 720.0 * 5.0;
    let mut hi = 1e6;
    assert!(f(lo) < 0.0, "left bracket must sit below the root");
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    assert!(f(x).abs() <= XK_TOLERANCE, "bisection residual {} too large", f(x));
    assert!(x >= 40.0);
    Ok(x)
}

/// A value `base · 2^(−halvings)`, kept in this form because the small constants
/// underflow `f64` long before the proofs stop asking for smaller ones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridValue {
    pub base: f64,
    pub halvings: u64,
}

impl GridValue {
    pub fn new(base: f64, halvings: u64) -> Self {
        GridValue { base, halvings }
    }

    pub fn ln(&self) -> f64 {
        self.base.ln() - self.halvings as f64 * LN_2
    }

    /// The value as `f64`; zero once it underflows.
    pub fn value(&self) -> f64 {
        self.ln().exp()
    }

    pub fn halved(&self) -> Self {
        GridValue { halvings: self.halvings + 1, ..*self }
    }
}

impl fmt::Display for GridValue {
    /// Scientific notation computed through `log10`, so underflowing values still render.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l10 = self.ln() / std::f64::consts::LN_10;
        let exp = l10.floor();
        write!(f, "{:.6}e{}", 10f64.powf(l10 - exp), exp as i64)
    }
}

/// One named inequality `lhs > rhs` (or `≥`), re-evaluated at the returned constants.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
}

impl Check {
    fn new(name: &'static str, lhs: f64, rhs: f64, strict: bool) -> Self {
        Check { name, lhs, rhs, strict }
    }

    pub fn holds(&self) -> bool {
        if self.strict {
            self.lhs > self.rhs
        } else {
            self.lhs >= self.rhs
        }
    }

    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }

    fn to_json(&self) -> Value {
        json!({"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack(), "holds": self.holds()})
    }
}

/// The three conditions on `β`, evaluated at `β`.
pub fn beta_checks(beta: &GridValue, c: f64, k: usize) -> Vec<Check> {
    let b = beta.value();
    let y = 1.0 / (3.0 * b);
    let phi_y = chernoff_phi(y).unwrap_or(f64::NAN);
    vec![
        Check::new("1/(2b) - 8k/c > 1 + 1/(3b)", 1.0 / (2.0 * b) - 8.0 * k as f64 / c, 1.0 + y, true),
        Check::new("phi(1/(3b)) > ln(1/(3b))/(6b)", phi_y, y.ln() / (6.0 * b), true),
        Check::new("b < c/36", c / 36.0, b, true),
        Check::new("b < 1/(3e)", 1.0 / (3.0 * E), b, true),
    ]
}

/// Largest `β` on the grid `2^(−t)/(3e)`, `t ≥ 1`, satisfying every [`beta_checks`] condition.
pub fn solve_beta(c: f64, k: usize) -> Result<GridValue> {
    if c.is_nan() || c <= 0.0 || k == 0 {
        return Err(Error::invalid("solve_beta needs c > 0 and k >= 1"));
    }
    let mut beta = GridValue::new(1.0 / (3.0 * E), 1);
    while !beta_checks(&beta, c, k).iter().all(Check::holds) {
        beta = beta.halved();
        if beta.value() == 0.0 {
            return Err(Error::invalid(format!("no representable beta for c = {c}, k = {k}")));
        }
    }
    Ok(beta)
}

/// Which half of the argument the parameters fall in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    LargeC,
    SmallC,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::LargeC => "large-c",
            Regime::SmallC => "small-c",
        }
    }
}

/// Constants used only when `c ≤ x_k`.
#[derive(Clone, Debug)]
pub struct SmallCConstants {
    pub r: u64,
    pub epsilon: BigRational,
    pub delta: GridValue,
    pub gamma: GridValue,
    pub alpha: GridValue,
    /// Which of `γ`, `ε`, `δ` attains the minimum.
    pub alpha_from: &'static str,
}

/// Every constant for one `(c, k)`, with the inequalities that pin them down.
#[derive(Clone, Debug)]
pub struct ConstantSet {
    pub c: BigRational,
    pub k: usize,
    pub x_k: f64,
    pub x_1: f64,
    pub x_k_residual: f64,
    pub m: f64,
    pub beta: GridValue,
    pub regime: Regime,
    pub small_c: Option<SmallCConstants>,
    pub checks: Vec<Check>,
}

impl ConstantSet {
    /// Solves everything that applies in the regime of `(c, k)`.
    pub fn solve(c: &BigRational, k: usize) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::invalid("c must be positive"));
        }
        let cf = to_f64(c);
        let x_k = solve_xk(k)?;
        let x_1 = solve_xk(1)?;
        let beta = solve_beta(cf, k)?;
        let regime = if cf > x_k { Regime::LargeC } else { Regime::SmallC };
        let mut checks = beta_checks(&beta, cf, k);
        let small_c = match regime {
            Regime::SmallC => {
                let (consts, more) = small_c_with_checks(c, k, x_1, x_k, &beta)?;
                checks.extend(more);
                Some(consts)
            }
            Regime::LargeC => None,
        };
        Ok(ConstantSet {
            c: c.clone(),
            k,
            x_k,
            x_1,
            x_k_residual: xk_residual(x_k, k),
            m: k as f64 + 1.0 + 10.0 * x_k.max(cf),
            beta,
            regime,
            small_c,
            checks,
        })
    }

    pub fn all_hold(&self) -> bool {
        self.x_k_residual.abs() <= XK_TOLERANCE && self.checks.iter().all(Check::holds)
    }

    pub fn to_json(&self) -> Value {
        let grid = |g: &GridValue| json!({"decimal": g.to_string(), "base": g.base, "halvings": g.halvings});
        let mut v = json!({
            "c": {"decimal": to_f64(&self.c), "exact": render(&self.c)},
            "k": self.k,
            "regime": self.regime.name(),
            "x_k": self.x_k,
            "x_k_residual": self.x_k_residual,
            "x_1": self.x_1,
            "M": self.m,
            "beta": grid(&self.beta),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "all_hold": self.all_hold(),
        });
        if let Some(s) = &self.small_c {
            let obj = v.as_object_mut().expect("object literal");
            obj.insert("R".into(), json!(s.r));
            obj.insert("epsilon".into(), json!({"decimal": to_f64(&s.epsilon), "exact": render(&s.epsilon)}));
            obj.insert("delta".into(), grid(&s.delta));
            obj.insert("gamma".into(), grid(&s.gamma));
            obj.insert("alpha".into(), json!({"decimal": s.alpha.to_string(), "base": s.alpha.base,
                "halvings": s.alpha.halvings, "attained_by": s.alpha_from}));
        }
        v
    }
}

/// `R`, `ε`, `δ`, `γ`, `α` for `0 < c ≤ x_k`.
pub fn solve_small_c_constants(c: &BigRational, k: usize) -> Result<SmallCConstants> {
    if !c.is_positive() || k == 0 {
        return Err(Error::invalid("need c > 0 and k >= 1"));
    }
    let x_k = solve_xk(k)?;
    let x_1 = solve_xk(1)?;
    let beta = solve_beta(to_f64(c), k)?;
    Ok(small_c_with_checks(c, k, x_1, x_k, &beta)?.0)
}

/// `c / (12 R (2Rc + 1))`.
pub fn epsilon(c: &BigRational, r: u64) -> BigRational {
    let r = int(r);
    c / (int(12) * &r * (int(2) * &r * c + int(1)))
}

fn small_c_with_checks(
    c: &BigRational,
    k: usize,
    x_1: f64,
    x_k: f64,
    beta: &GridValue,
) -> Result<(SmallCConstants, Vec<Check>)> {
    let cf = to_f64(c);
    if cf > x_k {
        return Err(Error::Regime(format!(
            "c = {cf} exceeds x_k = {x_k}; these constants belong to the small-c argument, use the large-c regime"
        )));
    }
    let kf = k as f64;
    let r = (kf.max(2.0 * x_1 / cf)).ceil() as u64;
    let rf = r as f64;
    let eps = epsilon(c, r);
    let ln_eps = rational::ln(&eps);
    let eps_f = to_f64(&eps);

    // δ = ε 2^(−t): the first condition caps δ, the second needs t ln 2 large enough.
    let need = 1.0 + (5.0 + (4.0 * (cf + 2.0 * kf)).ln()) / (eps_f * rf * cf);
    let mut t = ((need / LN_2).ceil() as u64).max(1);
    let delta_checks = |t: u64| {
        let delta = GridValue::new(eps_f, t);
        vec![
            Check::new("eps c >= 2k delta", ln_eps + cf.ln(), (2.0 * kf).ln() + delta.ln(), false),
            Check::new(
                "eps R c (ln(eps/delta) - 1) >= 5 + ln(4(c+2k))",
                eps_f * rf * cf * (t as f64 * LN_2 - 1.0),
                5.0 + (4.0 * (cf + 2.0 * kf)).ln(),
                false,
            ),
        ]
    };
    while t > 1 && delta_checks(t - 1).iter().all(Check::holds) {
        t -= 1;
    }
    while !delta_checks(t).iter().all(Check::holds) {
        t += 1;
    }
    let delta = GridValue::new(eps_f, t);

    let gamma_cap = 9.0 * beta.value() * cf / (20.0 * rf);
    let gamma_checks = |g: &GridValue| {
        let gv = g.value();
        vec![
            Check::new("gamma < 9 b c / (20R)", gamma_cap, gv, true),
            Check::new(
                "2 gamma (1 + ln(1 + 1/(2 gamma))) <= 9 b c / (320R)",
                9.0 * beta.value() * cf / (320.0 * rf),
                2.0 * gv * (1.0 + (1.0 + 1.0 / (2.0 * gv)).ln()),
                false,
            ),
        ]
    };
    let mut gamma = GridValue::new(gamma_cap, 1);
    while !gamma_checks(&gamma).iter().all(Check::holds) {
        gamma = gamma.halved();
        if gamma.value() == 0.0 {
            return Err(Error::invalid("gamma underflowed"));
        }
    }

    let eps_grid = GridValue::new(eps_f, 0);
    let (alpha, alpha_from) = [(gamma, "gamma"), (eps_grid, "epsilon"), (delta, "delta")]
        .into_iter()
        .min_by(|a, b| a.0.ln().total_cmp(&b.0.ln()))
        .expect("three candidates");

    let mut checks = vec![Check::new(
        "epsilon 12R(2Rc+1) = c",
        0.0,
        {
            let rr = int(r);
            let back = &eps * int(12) * &rr * (int(2) * &rr * c + int(1));
            if &back == c { 0.0 } else { 1.0 }
        },
        false,
    )];
    checks.extend(delta_checks(t));
    checks.extend(gamma_checks(&gamma));
    checks.push(Check::new("R >= max(k, 2 x_1 / c)", rf, kf.max(2.0 * x_1 / cf), false));
    Ok((SmallCConstants { r, epsilon: eps, delta, gamma, alpha, alpha_from }, checks))
}

/// `n (4(c + 2k))^j`, the bound on the expected number of connected `j`-sets.
pub fn expected_bj_bound(n: usize, c: &BigRational, k: usize, j: usize) -> BigRational {
    int(n as u64) * num_traits::pow(int(4) * (c + int(2 * k as u64)), j)
}
