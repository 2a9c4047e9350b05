use curved_koszul::qlinalg::{homology_dim, kernel_basis, q, rref, Scalar, SparseMatrix, SparseVec};
use proptest::prelude::*;

fn dense(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    // Mostly zeros, so that ranks vary.
    prop::collection::vec(prop::collection::vec(prop_oneof![4 => Just(0i64), 1 => -3i64..=3], cols), rows)
}

fn matrix() -> impl Strategy<Value = SparseMatrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| dense(r, c)).prop_map(|m| SparseMatrix::from_i64(&m))
}

/// `row_i += c·row_j` on `d_in` and the inverse column operation on `d_out`.
fn conjugate(d_out: &mut [Vec<Scalar>], d_in: &mut [Vec<Scalar>], i: usize, j: usize, c: &Scalar) {
    let src = d_in[j].clone();
    for (x, y) in d_in[i].iter_mut().zip(&src) {
        *x += c * y;
    }
    for row in d_out.iter_mut() {
        let t = c * &row[i];
        row[j] -= t;
    }
}

fn to_dense(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    (0..m.nrows()).map(|r| m.row(r).to_dense(m.ncols())).collect()
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix()) {
        let ker = kernel_basis(&m);
        prop_assert_eq!(m.rank() + ker.len(), m.ncols());
        for v in &ker {
            prop_assert!(m.apply(v).is_zero());
        }
    }

    #[test]
    fn rref_is_idempotent(m in matrix()) {
        let (r, pivots) = rref(&m);
        let (rr, pivots2) = rref(&r);
        prop_assert_eq!(&r, &rr);
        prop_assert_eq!(pivots, pivots2);
    }

    #[test]
    fn homology_is_invariant_under_change_of_basis(
        d_out in (1usize..5, 2usize..7).prop_flat_map(|(r, b)| dense(r, b)),
        mix in prop::collection::vec((0usize..7, 0usize..7, -2i64..=2), 0..12),
        picks in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 1..4),
    ) {
        let d_out = SparseMatrix::from_i64(&d_out);
        let b = d_out.ncols();
        // d_in has columns in ker d_out, so the pair is a complex.
        let ker = kernel_basis(&d_out);
        let cols: Vec<SparseVec> = picks
            .iter()
            .map(|p| ker.iter().zip(p).fold(SparseVec::new(), |acc, (k, c)| acc.axpy(&q(*c), k)))
            .collect();
        let d_in = SparseMatrix::from_columns(b, &cols);
        let h = homology_dim(&d_out, &d_in).unwrap();
        let (mut o, mut i) = (to_dense(&d_out), to_dense(&d_in));
        for (x, y, c) in mix {
            let (x, y) = (x % b, y % b);
            if x != y {
                conjugate(&mut o, &mut i, x, y, &q(c));
            }
        }
        let (o, i) = (SparseMatrix::from_dense(&o), SparseMatrix::from_dense(&i));
        prop_assert!(o.mul(&i).unwrap().is_zero());
        prop_assert_eq!(homology_dim(&o, &i).unwrap(), h);
    }
}
