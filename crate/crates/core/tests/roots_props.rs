//! Structural checks for the simply-laced root systems: counts, reflection
//! properties, Coxeter orbit shapes, and Weyl-word transport.

use adeh_core::{AdeType, RootSystem};
use proptest::prelude::*;

fn all_types() -> Vec<AdeType> {
    AdeType::verification_set()
}

#[test]
fn counts_and_norms() {
    for t in all_types() {
        let rs = RootSystem::build(t).unwrap();
        let n = rs.rank() as u32;
        let h = rs.h();
        assert_eq!(rs.num_roots() as u32, n * h, "{t}: |roots| == rank * h");
        assert_eq!(rs.positive_roots().len() * 2, rs.num_roots(), "{t}");
        for idx in 0..rs.num_roots() {
            assert_eq!(rs.pair_roots(idx, idx), 2, "{t}: all roots have norm 2");
            let neg = rs.negation(idx);
            assert_ne!(neg, idx);
            assert_eq!(rs.negation(neg), idx);
            assert_eq!(rs.is_positive(idx), !rs.is_positive(neg), "{t}");
        }
    }
}

#[test]
fn simple_roots_give_cartan_matrix() {
    for t in all_types() {
        let rs = RootSystem::build(t).unwrap();
        let n = rs.rank();
        for i in 0..n {
            for j in 0..n {
                let pairing = rs.pair_roots(rs.simple_root(i), rs.simple_root(j));
                assert_eq!(pairing, rs.cartan()[i][j], "{t}: cartan[{i}][{j}]");
                if i == j {
                    assert_eq!(pairing, 2);
                } else {
                    assert!(pairing == 0 || pairing == -1, "{t}: off-diagonal in {{0,-1}}");
                }
            }
        }
        // connected diagram: every simple root has a neighbor (rank > 1)
        if n > 1 {
            for i in 0..n {
                let deg = (0..n).filter(|&j| j != i && rs.cartan()[i][j] == -1).count();
                assert!(deg >= 1, "{t}: node {i} disconnected");
            }
        }
    }
}

#[test]
fn reflections_are_involutive_isometries() {
    for t in all_types() {
        let rs = RootSystem::build(t).unwrap();
        for i in 0..rs.rank() {
            for idx in 0..rs.num_roots() {
                let r = rs.reflect_root(i, idx);
                assert_eq!(rs.reflect_root(i, r), idx, "{t}: s_{i} involutive");
            }
            // s_i fixes exactly the roots orthogonal to alpha_i, negates alpha_i
            let si = rs.simple_root(i);
            assert_eq!(rs.reflect_root(i, si), rs.negation(si), "{t}");
            for idx in 0..rs.num_roots() {
                let fixed = rs.reflect_root(i, idx) == idx;
                let orthogonal = rs.pair_roots(si, idx) == 0;
                assert_eq!(fixed, orthogonal, "{t}: fixed-point set of s_{i}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reflections_preserve_pairings(
        which in 0usize..16,
        i_seed in any::<usize>(),
        a_seed in any::<usize>(),
        b_seed in any::<usize>(),
    ) {
        let t = AdeType::verification_set()[which];
        let rs = RootSystem::build(t).unwrap();
        let i = i_seed % rs.rank();
        let a = a_seed % rs.num_roots();
        let b = b_seed % rs.num_roots();
        let ra = rs.reflect_root(i, a);
        let rb = rs.reflect_root(i, b);
        prop_assert_eq!(rs.pair_roots(ra, rb), rs.pair_roots(a, b));
    }

    #[test]
    fn coxeter_preserves_pairings_and_has_order_h(
        which in 0usize..16,
        a_seed in any::<usize>(),
        b_seed in any::<usize>(),
    ) {
        let t = AdeType::verification_set()[which];
        let rs = RootSystem::build(t).unwrap();
        let perm = rs.coxeter_permutation();
        let a = a_seed % rs.num_roots();
        let b = b_seed % rs.num_roots();
        prop_assert_eq!(rs.pair_roots(perm[a], perm[b]), rs.pair_roots(a, b));
        // order divides h and no root is fixed by any nontrivial power
        let mut cur: Vec<usize> = (0..rs.num_roots()).collect();
        for step in 1..=rs.h() {
            cur = cur.iter().map(|&r| perm[r]).collect();
            let fixed = cur.iter().enumerate().any(|(r, &img)| img == r);
            if step < rs.h() {
                prop_assert!(!fixed, "{}: M^{} has a fixed root", t, step);
            } else {
                prop_assert!(cur.iter().enumerate().all(|(r, &img)| img == r), "{}: M^h != id", t);
            }
        }
    }
}

#[test]
fn coxeter_orbits_partition_roots_evenly() {
    for t in all_types() {
        let rs = RootSystem::build(t).unwrap();
        let orbits = rs.coxeter_orbits().unwrap();
        assert_eq!(orbits.len(), rs.rank(), "{t}: rank orbits");
        let mut seen = vec![false; rs.num_roots()];
        for orbit in &orbits {
            assert_eq!(orbit.len() as u32, rs.h(), "{t}: orbit size h");
            for &r in orbit {
                assert!(!seen[r], "{t}: orbits overlap");
                seen[r] = true;
            }
            // consecutive elements are M-translates
            let perm = rs.coxeter_permutation();
            for w in orbit.windows(2) {
                assert_eq!(perm[w[0]], w[1], "{t}: orbit ordered by M");
            }
        }
        assert!(seen.iter().all(|&s| s), "{t}: orbits cover all roots");
    }
}

#[test]
fn weyl_word_transport_is_exhaustive_on_small_types() {
    for t in [AdeType::A(2), AdeType::A(3), AdeType::D(4)] {
        let rs = RootSystem::build(t).unwrap();
        for src in 0..rs.num_roots() {
            for tgt in 0..rs.num_roots() {
                let word = rs.weyl_word(src, tgt).unwrap();
                assert_eq!(rs.apply_word_root(&word, src), tgt, "{t}: {src}->{tgt}");
            }
        }
    }
}

#[test]
fn type_parsing_roundtrips() {
    for t in all_types() {
        let shown = t.to_string();
        let parsed: AdeType = shown.parse().unwrap();
        assert_eq!(parsed, t);
        let underscored = format!("{}_{}", &shown[..1], &shown[1..]);
        assert_eq!(underscored.parse::<AdeType>().unwrap(), t);
        assert_eq!(shown.to_lowercase().parse::<AdeType>().unwrap(), t);
    }
    assert!("B3".parse::<AdeType>().is_err());
    assert!("E9".parse::<AdeType>().is_err());
    assert!("A0".parse::<AdeType>().is_err());
    assert!("".parse::<AdeType>().is_err());
}
