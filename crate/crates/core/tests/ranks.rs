use oddtown_core::constructions::binomial;
use oddtown_core::ranks::{
    build_inclusion_matrix, sample_mstar_rank, wilson_rank, KneserGraphView, OrderedKneserView,
};

#[test]
fn ordered_kneser_is_a_blow_up() {
    for n in 2..=6 {
        for k in 1..=2.min(n / 2) {
            let ok = OrderedKneserView::new(n, k).unwrap();
            let kn = KneserGraphView::new(n, k).unwrap().adjacency();
            let proj = ok.projection();
            let adj = ok.adjacency();
            assert_eq!(proj.len() as u128, ok.vertex_count().unwrap());
            for (u, &pu) in proj.iter().enumerate() {
                for (v, &pv) in proj.iter().enumerate() {
                    assert_eq!(adj.get(u, v), kn.get(pu, pv));
                }
            }
            assert_eq!(adj.rank(), kn.rank(), "n={n} k={k}");
        }
    }
}

#[test]
fn kneser_is_disjointness_matrix() {
    for n in 2..=8 {
        for k in 1..=n / 2 {
            let a = KneserGraphView::new(n, k).unwrap().adjacency();
            assert_eq!(a.rows() as u128, binomial(n as u64, k as u64).unwrap());
            assert_eq!(a.transpose(), a);
        }
    }
}

#[test]
fn sampled_rank_is_reproducible_and_bounded() {
    for (n, k, l) in [(6, 2, 3), (7, 2, 4), (8, 3, 4)] {
        let m = build_inclusion_matrix(n, k, l).unwrap();
        let side = m.matrix.rows().min(m.matrix.cols());
        for p in [2, 3, 5] {
            let full = m.rank_mod(p).unwrap();
            assert_eq!(full as u128, wilson_rank(n, k, l, p).unwrap());
            let sampled = sample_mstar_rank(n, k, l, p, 5).unwrap();
            assert!(sampled <= side);
            assert_eq!(sampled, sample_mstar_rank(n, k, l, p, 5).unwrap());
            if p == 2 {
                assert_eq!(sampled, full);
            }
        }
    }
}
