use curved_koszul::koszul_dual::{check_maurer_cartan_kappa, kappa, koszul_complex_strand, koszul_dual_stratum};
use curved_koszul::operad_core::{com, lie_n, operad_stratum, pois_n, Sym};
use curved_koszul::qlinalg::SparseVec;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn cooperad_dimensions() {
    for k in 1..=5 {
        assert_eq!(koszul_dual_stratum(&com(), k).unwrap().dim(), factorial(k - 1), "Com^¡({k})");
        assert_eq!(koszul_dual_stratum(&lie_n(1), k).unwrap().dim(), 1, "Lie^¡({k})");
    }
    for n in 1..=3 {
        for k in 1..=4 {
            assert_eq!(koszul_dual_stratum(&pois_n(n), k).unwrap().dim(), factorial(k), "Pois_{n}^¡({k})");
        }
    }
}

#[test]
fn cooperad_dims_match_dual_operads() {
    for k in 2..=4 {
        assert_eq!(koszul_dual_stratum(&com(), k).unwrap().dim(), operad_stratum(&lie_n(1), k, 6).unwrap().dim());
        assert_eq!(koszul_dual_stratum(&lie_n(1), k).unwrap().dim(), operad_stratum(&com(), k, 6).unwrap().dim());
        assert_eq!(koszul_dual_stratum(&pois_n(2), k).unwrap().dim(), operad_stratum(&pois_n(2), k, 6).unwrap().dim());
    }
}

#[test]
fn kappa_desuspends_cogenerators() {
    let p = pois_n(2);
    let c2 = koszul_dual_stratum(&p, 2).unwrap();
    for i in 0..c2.dim() {
        let img = kappa(&c2, &c2.basis()[i]);
        assert_eq!(img.len(), 1);
        let (t, _) = img.iter().next().unwrap();
        let Sym::Op(g) = t[0] else { panic!() };
        assert_eq!(c2.basis_degree(i) - 1, p.generators[g as usize].degree);
    }
    let c3 = koszul_dual_stratum(&p, 3).unwrap();
    assert!(kappa(&c3, &c3.basis()[0]).is_empty());
    assert!(kappa(&c3, &SparseVec::new()).is_empty());
}

#[test]
fn kappa_is_maurer_cartan() {
    for p in [com(), lie_n(1), pois_n(1), pois_n(2), pois_n(3)] {
        check_maurer_cartan_kappa(&p).unwrap_or_else(|e| panic!("{}: {e}", p.name));
    }
}

#[test]
fn koszul_complex_is_acyclic() {
    for p in [com(), lie_n(1), pois_n(2)] {
        for k in 2..=4 {
            let strand = koszul_complex_strand(&p, k).unwrap();
            strand.squares_to_zero().unwrap_or_else(|e| panic!("{} arity {k}: {e}", p.name));
            let h = strand.homology().unwrap();
            assert!(h.iter().all(|&x| x == 0), "{} arity {k}: homology {h:?}", p.name);
        }
    }
}
