use curved_koszul::operad_core::*;
use curved_koszul::qlinalg::q;

/// Number of set partitions of an n-set into blocks, weighted by a per-block
/// dimension, computed by the exponential-formula recursion.
fn partition_weighted(n: usize, block_dim: impl Fn(usize) -> u64) -> u64 {
    // f(m) = sum over the block containing element 1 of size s: C(m-1, s-1) * d(s) * f(m-s)
    let mut f = vec![0u64; n + 1];
    f[0] = 1;
    for m in 1..=n {
        let mut acc = 0;
        for s in 1..=m {
            acc += binom(m - 1, s - 1) * block_dim(s) * f[m - s];
        }
        f[m] = acc;
    }
    f[n]
}

fn binom(n: usize, k: usize) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[test]
fn lie_dimensions_match_factorials() {
    for n in [1, 2, 3] {
        let p = lie_n(n);
        for k in 1..=5 {
            assert_eq!(operad_stratum(&p, k, 6).unwrap().dim() as u64, factorial(k - 1), "lie_{n} arity {k}");
        }
    }
}

#[test]
fn poisson_dimensions_match_partition_oracle() {
    for n in [1, 2, 3] {
        let p = pois_n(n);
        for k in 1..=5 {
            let expected = partition_weighted(k, |s| factorial(s - 1));
            assert_eq!(expected, factorial(k));
            assert_eq!(operad_stratum(&p, k, 6).unwrap().dim() as u64, expected, "pois_{n} arity {k}");
        }
    }
}

#[test]
fn com_is_one_dimensional() {
    for k in 1..=5 {
        assert_eq!(operad_stratum(&com(), k, 6).unwrap().dim(), 1);
    }
}

#[test]
fn quadratic_unital_matches_unit_plus_operad() {
    for p in [ucom(), clie_n(2), upois_n(2), upois_n(3)] {
        assert_eq!(quadratic_unital_dim(&p, 0, 1), 1);
        assert_eq!(quadratic_unital_dim(&p, 0, 2), 0);
        for k in 1..=4 {
            let base = operad_stratum(&p.augmented(), k, 6).unwrap().dim();
            assert_eq!(quadratic_unital_dim(&p, k, 0), base);
            assert_eq!(quadratic_unital_dim(&p, k, 1), 0);
        }
    }
}

#[test]
fn free_algebra_examples() {
    assert_eq!(free_algebra_stratum(&ucom(), &[0], 3, 6).unwrap().dim(), 1);
    assert_eq!(free_algebra_stratum(&lie_n(1), &[0], 2, 6).unwrap().dim(), 0);
    // x (degree 0) and ξ (degree −1): x², xξ, {x,x}, {x,ξ}; ξ² and {ξ,ξ} vanish.
    assert_eq!(free_algebra_stratum(&pois_n(2), &[0, -1], 2, 6).unwrap().dim(), 4);
}

fn symplectic_relations(p: &OperadPresentation, n: i64) -> Vec<QlcRelation> {
    let _ = n;
    let la = p.generator_index("lambda").unwrap() as u8;
    let mut out = Vec::new();
    for (a, b, c) in [(0u16, 0u16, 0i64), (1, 1, 0), (0, 1, 1)] {
        let g = p.grading().with_leaves(vec![0, 1 - n]);
        let mut quad = LinComb::new();
        g.push(&mut quad, &[Sym::Op(la), Sym::Leaf(a), Sym::Leaf(b)], q(1));
        out.push(QlcRelation { quadratic: quad, linear: Default::default(), constant: q(-c) });
    }
    out
}

#[test]
fn symplectic_quotient_weight_two() {
    for (n, expected) in [(2, 2), (3, 3)] {
        let p = upois_n(n);
        let rels = symplectic_relations(&p, n);
        let fq = quotient_algebra_stratum(&p, &[0, 1 - n], &rels, 2, 6).unwrap();
        assert_eq!(fq.graded_dim(0), 1);
        assert_eq!(fq.graded_dim(1), 2);
        assert_eq!(fq.graded_dim(2), expected, "n = {n}");
    }
}

#[test]
fn empty_ideal_gives_free_algebra() {
    let p = upois_n(2);
    let fq = quotient_algebra_stratum(&p, &[0, -1], &[], 2, 6).unwrap();
    assert_eq!(fq.graded_dim(2), free_algebra_stratum(&p, &[0, -1], 2, 6).unwrap().dim());
}

mod reduction {
    use curved_koszul::operad_core::*;
    use curved_koszul::qlinalg::q;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// Normal forms are linear, idempotent, and kill every relation instance.
        #[test]
        fn reduction_is_a_linear_projection(
            n in 1i64..=3,
            k in 3usize..=4,
            picks in prop::collection::vec((0usize..200, -3i64..=3), 1..6),
            c in -3i64..=3,
        ) {
            let p = pois_n(n);
            let g = p.grading();
            let trees = free_operad_trees(&g, k);
            let s = operad_stratum(&p, k, 4).unwrap();
            let mut a = LinComb::new();
            let mut b = LinComb::new();
            for (i, (t, x)) in picks.iter().enumerate() {
                let target = if i % 2 == 0 { &mut a } else { &mut b };
                g.push(target, &trees[t % trees.len()], q(*x));
            }
            let mut sum = a.clone();
            add_comb(&mut sum, &b, &q(c));
            prop_assert_eq!(s.normal_form(&sum), s.normal_form(&a).axpy(&q(c), &s.normal_form(&b)));
            let nf = s.normal_form(&a);
            prop_assert_eq!(s.normal_form(&s.to_comb(&nf)), nf);
            for rel in relation_instances(&g, &g, &trees, &p.relation_basis()) {
                prop_assert!(s.normal_form(&rel).is_zero());
            }
        }
    }

    #[test]
    fn poisson_dimensions_do_not_depend_on_n() {
        for k in 1..=5 {
            let dims: Vec<usize> = [-1, 0, 1, 2, 3].iter().map(|&n| operad_stratum(&pois_n(n), k, 6).unwrap().dim()).collect();
            assert!(dims.windows(2).all(|w| w[0] == w[1]), "arity {k}: {dims:?}");
        }
    }
}
