use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snumbers::linalg::CMatrix;
use snumbers::operators::{add, compose, numerical_rank, op_norm, op_norm_upper, NormMethod};
use snumbers::spaces::lp_norm;
use snumbers::{Exponent, Field, LinOp};

fn e(p: f64) -> Exponent {
    Exponent::new(p).unwrap()
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop::sample::select(vec![0.5, 1.0, 1.5, 2.0, 3.0, f64::INFINITY]).prop_map(e)
}

fn random_op(rng: &mut ChaCha8Rng, rows: usize, cols: usize, p: Exponent, q: Exponent) -> LinOp {
    let m = CMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.random_range(-2.0..2.0), 0.0));
    LinOp::new(m, p, q, Field::Real).unwrap()
}

fn low_rank(rng: &mut ChaCha8Rng, n: usize, r: usize) -> LinOp {
    let a = CMatrix::from_fn(n, r, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
    let b = CMatrix::from_fn(r, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
    LinOp::new(a * b, Exponent::TWO, Exponent::TWO, Field::Real).unwrap()
}

proptest! {
    #[test]
    fn submultiplicative_when_exact(
        seed in any::<u64>(),
        n in 1usize..=4,
        // triples where both factors have a closed-form norm
        (p, r, q) in prop::sample::select(vec![
            (0.5, 0.8, 1.0), (0.5, 1.0, 2.0), (0.8, 1.0, f64::INFINITY), (0.5, 0.5, 0.8),
            (1.0, 1.0, 3.0), (0.8, 0.8, 0.8), (2.0, 2.0, 2.0),
        ]),
    ) {
        let (p, r, q) = (e(p), e(r), e(q));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_op(&mut rng, n, n, p, r);
        let s = random_op(&mut rng, n, n, r, q);
        let (ns, nt) = (op_norm(&s, 200, seed), op_norm(&t, 200, seed));
        prop_assume!(ns.exact && nt.exact);
        let st = op_norm(&compose(&s, &t).unwrap(), 200, seed);
        prop_assert!(st.value <= ns.value * nt.value * (1.0 + 1e-9));
    }

    #[test]
    fn rank_is_subadditive(seed in any::<u64>(), n in 2usize..=6, r1 in 0usize..=3, r2 in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = low_rank(&mut rng, n, r1.min(n));
        let t = low_rank(&mut rng, n, r2.min(n));
        let sum = add(&s, &t).unwrap();
        let tol = 1e-10;
        prop_assert!(numerical_rank(&sum, tol) <= numerical_rank(&s, tol) + numerical_rank(&t, tol));
        prop_assert!(numerical_rank(&s, tol) <= r1.min(n));
    }

    #[test]
    fn samples_never_beat_the_exact_norm(seed in any::<u64>(), n in 1usize..=5, p in prop::sample::select(vec![0.5, 0.8, 1.0]), q in prop::sample::select(vec![1.0, 2.0, f64::INFINITY])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = (e(p), e(q));
        let t = random_op(&mut rng, n, n, p, q);
        let exact = op_norm(&t, 100, seed);
        prop_assert!(exact.exact);
        prop_assert_eq!(exact.method, NormMethod::ColumnMax);
        for _ in 0..200 {
            let x: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0)).collect();
            let norm = lp_norm(&x, p);
            if norm == 0.0 {
                continue;
            }
            let ratio = lp_norm(&t.apply(&x), q) / norm;
            prop_assert!(ratio <= exact.value * (1.0 + 1e-12));
        }
    }

    #[test]
    fn exact_flag_matches_method(seed in any::<u64>(), n in 1usize..=4, p in exponent(), q in exponent()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_op(&mut rng, n, n, p, q);
        let r = op_norm(&t, 100, seed);
        prop_assert_eq!(r.exact, r.method != NormMethod::SampledAscent);
        // the certified upper bound dominates whatever ascent found
        prop_assert!(r.value <= op_norm_upper(&t) * (1.0 + 1e-12));
    }
}

#[test]
fn mismatched_spaces_are_rejected() {
    let a = LinOp::identity(2, Exponent::ONE, Exponent::TWO, Field::Real).unwrap();
    let b = LinOp::identity(2, Exponent::TWO, Exponent::TWO, Field::Real).unwrap();
    assert!(add(&a, &b).is_err());
    assert!(compose(&a, &a).is_err());
    assert!(compose(&b, &a).is_ok());
}
