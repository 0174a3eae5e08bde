use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use nwmix::gw::{
    factorial_moments, mu_by_functional_equation, mu_by_lagrange, series_coefficients, CoeffSeq, Convention,
    OffspringLaw,
};

fn explicit_law() -> impl Strategy<Value = OffspringLaw> {
    proptest::collection::vec(0u32..6, 1..6).prop_filter_map("non-zero weights", |w| {
        let total: u32 = w.iter().sum();
        (total > 0).then(|| {
            OffspringLaw::explicit(w.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(total))).collect())
                .unwrap()
        })
    })
}

proptest! {
    #[test]
    fn recursion_and_lagrange_agree(law in explicit_law(), order in 1usize..12) {
        let q = factorial_moments(&law, order);
        for convention in [Convention::Ordered, Convention::Unordered] {
            let c = series_coefficients(&q, convention);
            prop_assert_eq!(mu_by_lagrange(&c, order).unwrap(), mu_by_functional_equation(&c, order).unwrap());
        }
    }

    #[test]
    fn ordered_count_dominates_plain_count(law in explicit_law()) {
        let seq = CoeffSeq::compute(&law, 10).unwrap();
        for j in 0..=10 {
            prop_assert!(seq.mu[j] >= seq.subtrees[j]);
        }
        prop_assert_eq!(&seq.mu[..3], &seq.subtrees[..3]);
    }

    #[test]
    fn explicit_moments_are_falling_factorial_sums(law in explicit_law()) {
        let OffspringLaw::Explicit { pmf } = &law else { unreachable!() };
        let q = factorial_moments(&law, 6);
        for (j, qj) in q.iter().enumerate() {
            let mut direct = BigRational::from_integer(BigInt::from(0));
            for (m, w) in pmf.iter().enumerate() {
                let falling: i64 = (0..j as i64).map(|i| m as i64 - i).product();
                direct += w * BigRational::from_integer(BigInt::from(falling.max(0)));
            }
            prop_assert_eq!(qj, &direct);
        }
    }
}

#[test]
fn law_syntax_round_trips() {
    for text in ["poisson:7/2", "binomial:50:1/10", "binomial-plus:50:1/10:2", "deterministic:3", "explicit:1/2,0,1/2"] {
        let law: OffspringLaw = text.parse().unwrap();
        assert_eq!(law.to_string(), text);
    }
    for bad in ["poisson:-1", "binomial:3:2", "explicit:1/2,1/3", "geometric:1/2", "deterministic:x"] {
        assert!(bad.parse::<OffspringLaw>().is_err(), "{bad}");
    }
}
