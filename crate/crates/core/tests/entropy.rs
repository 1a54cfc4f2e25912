use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snumbers::entropy::{entropy_bounds, regime_envelope, BoundPair, EntropyOptions, Regime};
use snumbers::linalg::CMatrix;
use snumbers::operators::{add, compose, op_norm};
use snumbers::spaces::quasi_constant;
use snumbers::{Exponent, Field, LinOp};

fn e(p: f64) -> Exponent {
    Exponent::new(p).unwrap()
}

fn opts(seed: u64) -> EntropyOptions {
    EntropyOptions {
        cloud: 600,
        budget: 400,
        seed,
    }
}

fn random_op(rng: &mut ChaCha8Rng, n: usize, p: Exponent, q: Exponent) -> LinOp {
    let m = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
    LinOp::new(m, p, q, Field::Real).unwrap()
}

fn pq() -> impl Strategy<Value = (Exponent, Exponent)> {
    prop::sample::select(vec![(1.0, 1.0), (1.0, 2.0), (2.0, 2.0), (0.5, 1.0), (2.0, f64::INFINITY), (f64::INFINITY, 1.0)])
        .prop_map(|(p, q)| (e(p), e(q)))
}

/// `e_{m+n−1}` is bounded through the `m`-th and `n`-th bounds of the factors.
fn combined_index(a: &[BoundPair], b: &[BoundPair], f: impl Fn(f64, f64) -> f64) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let k = x.k + y.k - 1;
            if k <= a.len() {
                out.push((k, f(x.upper_with_margin(), y.upper_with_margin())));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bounds_are_ordered_and_monotone(seed in any::<u64>(), n in 1usize..=3, (p, q) in pq()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_op(&mut rng, n, p, q);
        let bounds = entropy_bounds(&t, 5, opts(seed)).unwrap();
        for b in &bounds {
            let upper = b.upper_with_margin();
            prop_assert!(b.lower <= upper * (1.0 + 1e-9), "k={}: {} > {}", b.k, b.lower, upper);
        }
        for w in bounds.windows(2) {
            prop_assert!(w[1].lower <= w[0].lower);
            prop_assert!(w[1].upper.unwrap() <= w[0].upper.unwrap());
        }
    }

    #[test]
    fn first_entropy_number_brackets_the_norm(seed in any::<u64>(), n in 1usize..=3, (p, q) in pq()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_op(&mut rng, n, p, q);
        let norm = op_norm(&t, 200, seed);
        prop_assume!(norm.exact);
        let b = entropy_bounds(&t, 1, opts(seed)).unwrap()[0];
        prop_assert!(b.lower <= norm.value * (1.0 + 1e-9));
        prop_assert!(norm.value <= quasi_constant(q) * b.upper_with_margin() * (1.0 + 1e-9));
    }

    #[test]
    fn additive_and_multiplicative_forms(seed in any::<u64>(), n in 1usize..=2, (p, q) in pq()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_op(&mut rng, n, p, q);
        let t = random_op(&mut rng, n, p, q);
        let k_max = 4;
        let bs = entropy_bounds(&s, k_max, opts(seed)).unwrap();
        let bt = entropy_bounds(&t, k_max, opts(seed)).unwrap();
        let sum = entropy_bounds(&add(&s, &t).unwrap(), k_max, opts(seed)).unwrap();
        let c = quasi_constant(q);
        for (k, rhs) in combined_index(&bs, &bt, |a, b| c * (a + b)) {
            prop_assert!(sum[k - 1].lower <= rhs * (1.0 + 1e-9), "A_e at {k}");
        }
        // S: ℓ_q → ℓ_q after T: ℓ_p → ℓ_q
        let outer = random_op(&mut rng, n, q, q);
        let bo = entropy_bounds(&outer, k_max, opts(seed)).unwrap();
        let prod = entropy_bounds(&compose(&outer, &t).unwrap(), k_max, opts(seed)).unwrap();
        for (k, rhs) in combined_index(&bo, &bt, |a, b| a * b) {
            prop_assert!(prod[k - 1].lower <= rhs * (1.0 + 1e-9), "P_e at {k}");
        }
    }

    #[test]
    fn envelope_regimes_follow_the_boundaries(n in 1usize..=512, k in 1usize..=2048) {
        let env = regime_envelope(Exponent::ONE, Exponent::TWO, n, k, Field::Complex).unwrap();
        let big_n = 2.0 * n as f64;
        let expected = if (k as f64) < big_n.log2() {
            Regime::SmallK
        } else if k as f64 <= big_n {
            Regime::MidK
        } else {
            Regime::LargeK
        };
        prop_assert_eq!(env.regime, expected);
        prop_assert!(!env.constants_known);
        prop_assert!(env.value > 0.0 && env.value <= 1.0);
    }
}

#[test]
fn real_field_uses_n_for_the_boundaries() {
    let real = regime_envelope(Exponent::ONE, Exponent::INFINITY, 8, 10, Field::Real).unwrap();
    let complex = regime_envelope(Exponent::ONE, Exponent::INFINITY, 8, 10, Field::Complex).unwrap();
    assert_eq!(real.regime, Regime::LargeK);
    assert_eq!(complex.regime, Regime::MidK);
}
