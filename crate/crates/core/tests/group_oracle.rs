use proptest::prelude::*;
use qdouble::{GroupElement, Irrep};

// Permutations of {0,1,2}; composition applies the right factor first.
type Perm = [usize; 3];

fn compose(a: Perm, b: Perm) -> Perm {
    [a[b[0]], a[b[1]], a[b[2]]]
}

fn perm(g: GroupElement) -> Perm {
    let mut p = [0, 1, 2];
    for _ in 0..g.t_exp() {
        p = compose(p, [0, 2, 1]);
    }
    for _ in 0..g.c_exp() {
        p = compose(p, [1, 2, 0]);
    }
    p
}

fn sign(p: Perm) -> f64 {
    let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 { 1.0 } else { -1.0 }
}

fn fixed_points(p: Perm) -> usize {
    (0..3).filter(|&i| p[i] == i).count()
}

fn element() -> impl Strategy<Value = GroupElement> {
    (0usize..6).prop_map(|i| GroupElement::from_index(i).unwrap())
}

#[test]
fn cayley_table_matches_permutations() {
    for a in GroupElement::ALL {
        for b in GroupElement::ALL {
            assert_eq!(perm(a * b), compose(perm(a), perm(b)), "{a} * {b}");
        }
    }
}

#[test]
fn characters_from_the_permutation_action() {
    for g in GroupElement::ALL {
        let p = perm(g);
        assert_eq!(Irrep::Trivial.character(g), 1.0);
        assert_eq!(Irrep::Sign.character(g), sign(p));
        assert_eq!(Irrep::TwoDim.character(g), fixed_points(p) as f64 - 1.0);
    }
}

#[test]
fn column_orthogonality() {
    for g in GroupElement::ALL {
        for h in GroupElement::ALL {
            let s: f64 = Irrep::ALL.iter().map(|r| r.character(g) * r.character(h)).sum();
            let centralizer = GroupElement::ALL.iter().filter(|&&x| x * g == g * x).count() as f64;
            let expected = if g.class() == h.class() { centralizer } else { 0.0 };
            assert_eq!(s, expected, "{g} {h}");
        }
    }
}

#[test]
fn names_round_trip() {
    for g in GroupElement::ALL {
        assert_eq!(g.to_string().parse::<GroupElement>().unwrap(), g);
    }
    assert!("x".parse::<GroupElement>().is_err());
}

proptest! {
    #[test]
    fn associativity(a in element(), b in element(), c in element()) {
        prop_assert_eq!((a * b) * c, a * (b * c));
    }

    #[test]
    fn inverses(a in element()) {
        prop_assert_eq!(a * a.inverse(), GroupElement::E);
        prop_assert_eq!(a.inverse() * a, GroupElement::E);
    }

    #[test]
    fn conjugation_preserves_class_and_characters(a in element(), g in element()) {
        let b = a.conjugate_by(g);
        prop_assert_eq!(b.class(), a.class());
        for r in Irrep::ALL {
            prop_assert_eq!(r.character(b), r.character(a));
        }
    }

    #[test]
    fn one_dimensional_characters_are_homomorphisms(a in element(), b in element()) {
        prop_assert_eq!(Irrep::Sign.character(a * b), Irrep::Sign.character(a) * Irrep::Sign.character(b));
    }

    #[test]
    fn exponents_rebuild_the_element(a in element()) {
        prop_assert_eq!(GroupElement::from_exponents(a.t_exp(), a.c_exp()), a);
    }
}
