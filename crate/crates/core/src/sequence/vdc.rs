use crate::chain::DivisibilityChain;
use crate::error::Result;
use crate::rational::Rational;

/// `γ(n) = a_0/Q_1 + a_1/Q_2 + ... + a_k/Q_{k+1}` for the digits of `n`.
pub fn vdc(n: u64, chain: &DivisibilityChain) -> Result<Rational> {
    let (numer, denom) = chain.reflect(n)?;
    // both parts are below 2^64
    Ok(Rational::new(numer as i128, denom as i128))
}

/// Floating point `γ(n)`, exact whenever `Q_{k+1}` is a power of two below 2^53.
pub fn vdc_f64(n: u64, chain: &DivisibilityChain) -> Result<f64> {
    let (numer, denom) = chain.reflect(n)?;
    Ok(numer as f64 / denom as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::decompose;
    use crate::rational::ratio;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn chain(s: &str) -> DivisibilityChain {
        s.parse().unwrap()
    }

    // Oracle: the printed digit formula, summed term by term.
    fn digit_formula(n: u64, c: &DivisibilityChain) -> Rational {
        let d = decompose(n, c).unwrap();
        d.digits()
            .iter()
            .enumerate()
            .map(|(j, &a)| ratio(a as i128, c.terms()[j + 1] as i128))
            .sum()
    }

    #[test]
    fn examples() {
        assert_eq!(vdc(0, &chain("geometric:2")).unwrap(), ratio(0, 1));
        assert_eq!(vdc(6, &chain("1,2,4,8")).unwrap(), ratio(3, 8));
        assert_eq!(digit_formula(6, &chain("1,2,4,8")), ratio(3, 8));
        assert_eq!(vdc(5, &chain("1,2,6,24")).unwrap(), ratio(5, 6));
        assert_eq!(digit_formula(5, &chain("1,2,6,24")), ratio(5, 6));
        assert!(vdc(8, &chain("1,2,4,8")).is_err());
    }

    #[test]
    fn full_period_is_a_permutation_of_the_grid() {
        for c in ["geometric:2,10", "geometric:3,6", "factorial:5", "1,2,6,12,60"] {
            let c = chain(c);
            for (k, &q) in c.terms().iter().enumerate().take(c.depth() + 1) {
                let mut got: Vec<Rational> = (0..q).map(|n| vdc(n, &c).unwrap()).collect();
                got.sort();
                let grid: Vec<Rational> = (0..q).map(|j| ratio(j as i128, q as i128)).collect();
                assert_eq!(got, grid, "chain {c}, k = {k}");
            }
        }
    }

    #[test]
    fn congruent_inputs_are_close() {
        let c = chain("geometric:2,12");
        for k in 0..=5 {
            let q = c.terms()[k];
            for a in 0..512u64 {
                for b in (a % q..512).step_by(q as usize) {
                    let gap = (vdc(a, &c).unwrap() - vdc(b, &c).unwrap()).abs();
                    assert!(gap <= ratio(1, q as i128));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn matches_digit_formula(n in 0u64..(1 << 40), which in 0usize..4) {
            let c = [chain("geometric:2"), chain("geometric:3"), chain("factorial"), chain("1,2,6,12,60,120,840,1680,5040,10080,110880")][which].clone();
            let n = n % c.capacity();
            let v = vdc(n, &c).unwrap();
            prop_assert_eq!(v, digit_formula(n, &c));
            prop_assert!(v >= ratio(0, 1) && v < ratio(1, 1));
            let f = vdc_f64(n, &c).unwrap();
            prop_assert!((f - crate::rational::to_f64(&v)).abs() <= 1e-15);
        }
    }
}
