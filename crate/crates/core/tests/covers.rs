mod common;

use oddtown_core::covers::{
    cover_to_tuple, link_cover_at, tuple_to_cover, verify_mod2_cover, Mod2Cover,
};
use oddtown_core::ranks::cover_size_lower_bound;
use oddtown_core::set_systems::verify_bollobas_tuple;

fn without(c: &Mod2Cover, drop: usize) -> Mod2Cover {
    let mut products = c.products().to_vec();
    products.remove(drop);
    Mod2Cover::new(c.k(), c.t(), c.n(), products).unwrap()
}

#[test]
fn tuple_verdict_tracks_cover_verdict() {
    for (name, c) in common::valid_covers() {
        assert!(verify_bollobas_tuple(&cover_to_tuple(&c).unwrap()).valid, "{name}");
        for drop in [0, c.len() / 2, c.len() - 1] {
            let broken = without(&c, drop);
            let cover_ok = verify_mod2_cover(&broken).valid;
            let tuple_ok = verify_bollobas_tuple(&cover_to_tuple(&broken).unwrap()).valid;
            assert_eq!(cover_ok, tuple_ok, "{name} without product {drop}");
        }
    }
}

#[test]
fn doubled_product_cancels() {
    for (name, c) in common::valid_covers().into_iter().take(12) {
        let mut products = c.products().to_vec();
        products.push(products[0].clone());
        products.push(products[0].clone());
        let padded = Mod2Cover::new(c.k(), c.t(), c.n(), products).unwrap();
        assert!(verify_mod2_cover(&padded).valid, "{name}");
        let back = tuple_to_cover(&cover_to_tuple(&padded).unwrap()).unwrap();
        assert_eq!(back.cover.len(), padded.len());
    }
}

#[test]
fn restriction_keeps_validity() {
    for (name, c) in common::valid_covers() {
        for n in 1..=c.n() {
            let r = c.restricted(n).unwrap();
            assert_eq!(r.n(), n);
            assert!(r.len() <= c.len(), "{name} restricted to {n} grew");
            assert!(verify_mod2_cover(&r).valid, "{name} restricted to {n}");
        }
    }
}

#[test]
fn h44_covers_respect_rank_bound() {
    for (name, c) in common::valid_covers() {
        if c.k() == 4 && c.t() == 4 && c.n() >= 4 {
            let lb = cover_size_lower_bound(c.n(), 2).unwrap();
            assert!(c.len() >= lb, "{name}: {} < {lb}", c.len());
        }
    }
}

#[test]
fn every_link_is_valid() {
    for (name, c) in common::valid_covers() {
        if c.t() == c.k() && c.k() >= 3 {
            for coord in 1..=c.k() {
                for v in 1..=c.n() {
                    let l = link_cover_at(&c, v, coord).unwrap();
                    assert_eq!((l.k(), l.t()), (c.k() - 1, c.t() - 1));
                    assert!(verify_mod2_cover(&l).valid, "{name} link at {v}/{coord}");
                }
            }
        }
    }
}
