use std::sync::Arc;

use proptest::prelude::*;

use recon_core::coefficients::{Coefficients, FiniteRing};
use recon_core::constructions::{pair, pair_relabelling};
use recon_core::corpus::{corrupt_composition, relabel, standard_groupoids};
use recon_core::domination::Domination;
use recon_core::morphism;
use recon_core::report::{Budget, Status};
use recon_core::schema::builtin_coefficients;
use recon_core::ultrafilter::verify_recovery;
use recon_core::{FiniteGroupoid, FnFamily, PartialFn};

/// Convolution written out from the definition, with no support tricks:
/// `(a*b)(g) = Σ_{hk = g} a(h)b(k)` over all composable pairs, in ring
/// arithmetic.
fn convolution_oracle(g: &FiniteGroupoid, c: &Coefficients, a: &PartialFn, b: &PartialFn) -> PartialFn {
    let r = c.as_ring().unwrap();
    let value = |f: &PartialFn, x: usize| f.get(x).map_or(r.zero(), |v| c.to_ring(v));
    let mut total = vec![r.zero(); g.len()];
    for h in 0..g.len() {
        for k in 0..g.len() {
            if let Some(hk) = g.compose(h, k) {
                total[hk] = r.add(total[hk], r.mul(value(a, h), value(b, k)));
            }
        }
    }
    PartialFn::from_pairs(total.into_iter().enumerate().filter_map(|(x, v)| c.from_ring(v).map(|y| (x, y)))).unwrap()
}

fn steinberg(n: usize, q: usize) -> FnFamily {
    let k = Coefficients::ring(FiniteRing::galois_field(q).unwrap());
    FnFamily::steinberg(Arc::new(pair(n)), Arc::new(k)).unwrap()
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn family_product_matches_the_convolution_oracle(i in 0usize..81, j in 0usize..81) {
        let f = steinberg(2, 3);
        let expected = convolution_oracle(f.groupoid(), f.coefficients(), f.element(i), f.element(j));
        prop_assert_eq!(f.element(f.product(i, j).unwrap()), &expected);
    }

    #[test]
    fn product_is_associative_on_sampled_triples(a in 0usize..512, b in 0usize..512, c in 0usize..512) {
        let f = steinberg(3, 2);
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    }

    #[test]
    fn point_permutations_induce_diagonal_isomorphisms(perm in permutation(3)) {
        let f = steinberg(3, 2);
        let phi = morphism::induced_by_arrow_map(&f, &f, &pair_relabelling(3, &perm)).unwrap();
        let report = morphism::verify_diagonal_iso(&f, &f, &phi, false, &Budget::unlimited());
        prop_assert_eq!(report.status(), Status::Pass);
        let (_, map) = morphism::verify_induced(&f, &f, &phi, false);
        prop_assert_eq!(map.unwrap(), pair_relabelling(3, &perm));
    }

    #[test]
    fn recovery_survives_relabelling(entry in 0usize..20, seed in any::<u64>(), coeff in prop::sample::select(vec!["trivial", "F2", "Z/4"])) {
        let corpus = standard_groupoids();
        let g = relabel(&corpus[entry % corpus.len()].groupoid, seed);
        let arrows = g.len();
        let f = FnFamily::canonical_bumpy(Arc::new(g), Arc::new(builtin_coefficients(coeff).unwrap())).unwrap();
        let d = Domination::new(&f);
        let (report, rec) = verify_recovery(&d, &Budget::unlimited());
        prop_assert_eq!(report.status(), Status::Pass);
        prop_assert_eq!(rec.unwrap().ultrafilters.len(), arrows);
    }

    #[test]
    fn relabelling_preserves_the_canonical_digest(entry in 0usize..40, seed in any::<u64>()) {
        let corpus = standard_groupoids();
        let g = &corpus[entry % corpus.len()].groupoid;
        prop_assert_eq!(relabel(g, seed).canonical_digest(), g.canonical_digest());
    }

    #[test]
    fn corrupted_tables_never_validate(entry in 0usize..46, seed in any::<u64>()) {
        let corpus = standard_groupoids();
        let raw = corpus[entry % corpus.len()].groupoid.to_raw();
        if let Some(bad) = corrupt_composition(&raw, seed) {
            prop_assert!(FiniteGroupoid::validate(&bad).is_err());
        }
    }
}
