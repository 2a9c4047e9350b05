use curved_koszul::graded::{koszul_parity, suspend, sym_canonicalize, GradedGenerator, Stratum};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    /// Moving by `τ` then by `σ` costs the sum of the two Koszul parities.
    #[test]
    fn koszul_sign_is_multiplicative(
        (degrees, sigma, tau) in (1usize..7).prop_flat_map(|n| (prop::collection::vec(-3i64..=3, n), perm(n), perm(n)))
    ) {
        let n = degrees.len();
        let mut moved = vec![0; n];
        for i in 0..n {
            moved[tau[i]] = degrees[i];
        }
        let composite: Vec<usize> = (0..n).map(|i| sigma[tau[i]]).collect();
        prop_assert_eq!(
            koszul_parity(&composite, &degrees),
            koszul_parity(&tau, &degrees) ^ koszul_parity(&sigma, &moved)
        );
    }

    #[test]
    fn canonical_words_are_fixed(
        degrees in prop::collection::vec(-2i64..=2, 1..5),
        raw in prop::collection::vec(0usize..5, 0..6),
    ) {
        let word: Vec<usize> = raw.into_iter().map(|g| g % degrees.len()).collect();
        if let Some(w) = sym_canonicalize(&word, &degrees) {
            let again = sym_canonicalize(&w.gens, &degrees).unwrap();
            prop_assert_eq!(&again.gens, &w.gens);
            prop_assert!(!again.negative);
            prop_assert_eq!(w.sign() * w.sign(), curved_koszul::qlinalg::q(1));
            let mut reversed = word.clone();
            reversed.reverse();
            prop_assert_eq!(sym_canonicalize(&reversed, &degrees).unwrap().gens, w.gens);
        }
    }

    #[test]
    fn suspension_round_trips(degrees in prop::collection::vec(-5i64..=5, 0..6), k in -4i64..=4) {
        let basis = degrees.iter().enumerate().map(|(i, d)| GradedGenerator::new(format!("g{i}"), *d)).collect();
        let s = Stratum::new(1, 2, basis);
        prop_assert_eq!(suspend(&suspend(&s, k), -k), s);
    }
}
