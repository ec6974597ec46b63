use nodal_mirror::exact_linalg::rat;
use nodal_mirror::floer::{all_generators, FloerClass, Gen, Parity, Scenario};
use proptest::prelude::*;

fn scenarios() -> Vec<Scenario> {
    vec![
        Scenario::closed(2, 8).unwrap(),
        Scenario::closed(3, 8).unwrap(),
        Scenario::punctured(2, 1, 8, 6).unwrap(),
        Scenario::punctured(2, 2, 8, 6).unwrap(),
        Scenario::multi_twist(3, 2, 8).unwrap(),
    ]
}

fn sign(a: Gen, b: Gen) -> i64 {
    if a.parity() == Parity::Odd && b.parity() == Parity::Odd {
        -1
    } else {
        1
    }
}

// Products may leave the index cutoff; such triples are skipped on both sides.
fn prod(s: &Scenario, a: &FloerClass, b: &FloerClass) -> Option<FloerClass> {
    s.product(a, b).ok()
}

#[test]
fn graded_commutativity_on_all_pairs() {
    for s in scenarios() {
        let gens = all_generators(&s, 8).unwrap();
        for &(a, m) in &gens {
            for &(b, n) in &gens {
                if m + n > 8 {
                    continue;
                }
                let x = FloerClass::gen(a, m);
                let y = FloerClass::gen(b, n);
                let (Some(p), Some(q)) = (prod(&s, &x, &y), prod(&s, &y, &x)) else { continue };
                assert_eq!(p, q.scale(&rat(sign(a, b))), "{a:?}@{m} {b:?}@{n} in {s:?}");
            }
        }
    }
}

#[test]
fn associativity_on_all_triples() {
    for s in scenarios() {
        let gens = all_generators(&s, 8).unwrap();
        for &(a, m) in &gens {
            for &(b, n) in &gens {
                if m + n > 8 {
                    continue;
                }
                let x = FloerClass::gen(a, m);
                let y = FloerClass::gen(b, n);
                let Some(xy) = prod(&s, &x, &y) else { continue };
                for &(c, k) in &gens {
                    if m + n + k > 8 {
                        continue;
                    }
                    let z = FloerClass::gen(c, k);
                    let Some(yz) = prod(&s, &y, &z) else { continue };
                    let (Some(l), Some(r)) = (prod(&s, &xy, &z), prod(&s, &x, &yz)) else {
                        continue;
                    };
                    assert_eq!(l, r, "({a:?}@{m} {b:?}@{n}) {c:?}@{k} in {s:?}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn seidel_class_acts_injectively_on_even_classes(d in 1usize..7, seed in 0usize..64) {
        let s = Scenario::closed(2, 8).unwrap();
        let basis = s.basis(d, Parity::Even).unwrap();
        let coeffs: Vec<_> = (0..basis.len()).map(|i| rat(((seed >> i) & 1) as i64)).collect();
        let x = FloerClass::from_coords(d, Parity::Even, &basis, &coeffs);
        let y = s.product(&s.seidel_class(), &x).unwrap();
        prop_assert_eq!(x.is_zero(), y.is_zero());
    }

    #[test]
    fn unit_acts_as_identity(d in 0usize..8, idx in 0usize..16) {
        let s = Scenario::closed(3, 8).unwrap();
        let basis = s.basis(d, Parity::Odd).unwrap();
        let g = basis[idx % basis.len()];
        let x = FloerClass::gen(g, d);
        prop_assert_eq!(s.product(&FloerClass::gen(Gen::F, 0), &x).unwrap(), x);
    }
}
