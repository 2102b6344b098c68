//! Maps between families: verification of diagonal-preserving
//! isomorphisms and the groupoid isomorphism they induce.

use std::collections::HashMap;

use crate::error::{FamilyError, MorphismError};
use crate::family::{FnFamily, ProductMode, Role};
use crate::function::PartialFn;
use crate::report::{Budget, Check, Report};

/// The identity on a family.
pub fn identity(a: &FnFamily) -> Vec<usize> {
    (0..a.len()).collect()
}

/// The map `f ↦ f∘σ⁻¹` induced by an arrow bijection `σ: G → G'` (given by
/// index), with coefficients matched by name.
pub fn induced_by_arrow_map(a: &FnFamily, b: &FnFamily, sigma: &[usize]) -> Result<Vec<usize>, MorphismError> {
    if sigma.len() != a.groupoid().len() {
        return Err(MorphismError::NotBijective("arrow map has the wrong length".into()));
    }
    let values: Vec<usize> = (0..a.y().len())
        .map(|v| b.y().element(a.y().name(v)).ok_or_else(|| MorphismError::NotBijective(format!("coefficient {} missing", a.y().name(v)))))
        .collect::<Result<_, _>>()?;
    (0..a.len())
        .map(|i| {
            let image = PartialFn::from_pairs(a.element(i).iter().map(|(x, v)| (sigma[x], values[v])))
                .map_err(|_| MorphismError::NotBijective("arrow map is not injective".into()))?;
            b.index_of(&image).ok_or_else(|| MorphismError::NotBijective(format!("image of {} is not in the target", a.render(i))))
        })
        .collect()
}

/// Injective and onto.
pub fn bijectivity_witness(a: &FnFamily, b: &FnFamily, phi: &[usize]) -> Option<String> {
    if phi.len() != a.len() || a.len() != b.len() {
        return Some(format!("|A| = {}, |A'| = {}, map has {} entries", a.len(), b.len(), phi.len()));
    }
    let mut seen = vec![false; b.len()];
    for (i, &p) in phi.iter().enumerate() {
        if p >= b.len() || std::mem::replace(&mut seen[p], true) {
            return Some(format!("not injective at {}", a.render(i)));
        }
    }
    None
}

/// `φ[D] = D'`.
pub fn diagonal_witness(a: &FnFamily, b: &FnFamily, phi: &[usize]) -> Option<String> {
    if let Some(&i) = a.d().iter().find(|&&i| !b.has(phi[i], Role::D)) {
        return Some(format!("{} maps outside D'", a.render(i)));
    }
    (a.d().len() != b.d().len()).then(|| format!("|D| = {}, |D'| = {}", a.d().len(), b.d().len()))
}

/// `c(a) = c'(φ(a))` on nonempty elements, with both gradings into the
/// same groupoid `Γ`.
pub fn grading_witness(a: &FnFamily, b: &FnFamily, phi: &[usize]) -> Option<String> {
    let (Some(ca), Some(cb)) = (a.groupoid().grading(), b.groupoid().grading()) else {
        return Some("both groupoids must be graded".into());
    };
    if ca.gamma().canonical_digest() != cb.gamma().canonical_digest() || ca.gamma().names() != cb.gamma().names() {
        return Some("gradings take values in different groupoids".into());
    }
    (0..a.len())
        .filter(|&i| !a.element(i).is_empty())
        .find(|&i| a.grade(i).is_none() || a.grade(i) != b.grade(phi[i]))
        .map(|i| format!("{} and its image {}", a.render(i), b.render(phi[i])))
}

/// Multiplicativity, including that a product is defined exactly when the
/// product of the images is.
pub fn multiplicativity_witness(a: &FnFamily, b: &FnFamily, phi: &[usize], budget: &Budget) -> Result<Option<String>, FamilyError> {
    if let (Some(_), Some(_), ProductMode::Convolution, ProductMode::Convolution) = (a.radix(), b.radix(), a.mode(), b.mode()) {
        return radix_multiplicativity(a, b, phi, budget);
    }
    a.cache_products();
    b.cache_products();
    for i in 0..a.len() {
        budget.spend(a.len() as u64)?;
        for j in 0..a.len() {
            let ok = match (a.product(i, j), b.product(phi[i], phi[j])) {
                (Ok(p), Ok(q)) => phi[p] == q,
                (Err(FamilyError::IllDefined(..)), Err(FamilyError::IllDefined(..))) => true,
                (Err(e @ FamilyError::NotClosed(..)), _) | (_, Err(e @ FamilyError::NotClosed(..))) => return Err(e),
                _ => false,
            };
            if !ok {
                return Ok(Some(format!("({}, {})", a.render(i), a.render(j))));
            }
        }
    }
    Ok(None)
}

/// Multiplicativity on full convolution families. For a fixed right factor
/// `y`, the product `xy` is the digit-disjoint sum over range blocks `β` of
/// `(x|β)y`, so tabulating `(x|β)y` for every block value turns each
/// product into a few table lookups.
fn radix_multiplicativity(a: &FnFamily, b: &FnFamily, phi: &[usize], budget: &Budget) -> Result<Option<String>, FamilyError> {
    let (ra, rb) = (a.radix().expect("radix"), b.radix().expect("radix"));
    let block_values = |r: &crate::family::Radix, ids: &mut dyn Iterator<Item = usize>| -> Vec<u32> {
        ids.flat_map(|id| (0..r.blocks().len()).map(move |k| r.block_value(id, k) as u32)).collect()
    };
    let (ka, kb) = (ra.blocks().len(), rb.blocks().len());
    let a_blocks = block_values(ra, &mut (0..a.len()));
    let image_blocks = block_values(rb, &mut phi.iter().copied());
    let table = |f: &FnFamily, r: &crate::family::Radix, right: &PartialFn| -> Result<Vec<Vec<u32>>, FamilyError> {
        r.blocks()
            .iter()
            .enumerate()
            .map(|(k, &(_, len))| {
                (0..r.pow(len))
                    .map(|v| {
                        let p = f.product_fn(&r.block_function(k, v), right)?;
                        Ok(f.index_of(&p).expect("convolution family is total") as u32)
                    })
                    .collect()
            })
            .collect()
    };
    for y in 0..a.len() {
        budget.spend(a.len() as u64)?;
        let ta = table(a, ra, a.element(y))?;
        let tb = table(b, rb, b.element(phi[y]))?;
        for x in 0..a.len() {
            let xy: u32 = (0..ka).map(|k| ta[k][a_blocks[x * ka + k] as usize]).sum();
            let images: u32 = (0..kb).map(|k| tb[k][image_blocks[x * kb + k] as usize]).sum();
            if phi[xy as usize] as u32 != images {
                return Ok(Some(format!("({}, {})", a.render(x), a.render(y))));
            }
        }
    }
    Ok(None)
}

/// Checks that `φ: A → A'` is a diagonal-preserving semigroup isomorphism,
/// graded when asked.
pub fn verify_diagonal_iso(a: &FnFamily, b: &FnFamily, phi: &[usize], graded: bool, budget: &Budget) -> Report {
    let mut r = Report::new("diagonal-preserving isomorphism");
    let bij = bijectivity_witness(a, b, phi);
    let is_bij = bij.is_none();
    r.conclusion(Check::from_witness("bijective", bij));
    if !is_bij {
        return r;
    }
    r.conclusion(Check::from_result("multiplicative", multiplicativity_witness(a, b, phi, budget)));
    r.conclusion(Check::from_witness("diagonal onto diagonal", diagonal_witness(a, b, phi)));
    if graded {
        r.conclusion(Check::from_witness("graded", grading_witness(a, b, phi)));
    }
    r
}

/// `φ̃(g)`: the unique arrow in `⋂_{a ∈ S_g} dom(φ(a))`, for `φ` between
/// bumpy families.
pub fn induced_iso(a: &FnFamily, b: &FnFamily, phi: &[usize]) -> Result<Vec<usize>, MorphismError> {
    let g = a.groupoid();
    let y = a.y();
    (0..g.len())
        .map(|x| {
            let mut common = b.groupoid().all();
            for &i in a.s() {
                if a.element(i).get(x).is_some_and(|v| y.is_invertible(v)) {
                    common = common.intersection(b.dom(phi[i]));
                }
            }
            match common.len() {
                1 => Ok(common.first().expect("singleton")),
                size => Err(MorphismError::NotSingleton { arrow: g.name(x).to_string(), size }),
            }
        })
        .collect()
}

/// Computes `φ̃` and checks it is a groupoid isomorphism (graded when
/// asked).
pub fn verify_induced(a: &FnFamily, b: &FnFamily, phi: &[usize], graded: bool) -> (Report, Option<Vec<usize>>) {
    let mut r = Report::new("induced groupoid isomorphism");
    let map = match induced_iso(a, b, phi) {
        Ok(m) => m,
        Err(e) => {
            r.conclusion(Check::fail("image domains meet in one arrow", e.to_string(), vec![]));
            return (r, None);
        }
    };
    r.conclusion(Check::pass("image domains meet in one arrow"));
    let (g, h) = (a.groupoid(), b.groupoid());
    r.conclusion(Check::from_witness("groupoid isomorphism", g.ungraded().check_isomorphism(&h.ungraded(), &map).err()));
    if graded {
        let bad = match (g.grading(), h.grading()) {
            (Some(c), Some(c2)) => (0..g.len()).find(|&x| c.grade(x) != c2.grade(map[x])).map(|x| g.name(x).to_string()),
            _ => Some("both groupoids must be graded".into()),
        };
        r.conclusion(Check::from_witness("grade preserving", bad));
    }
    (r, Some(map))
}

/// Names of `φ̃` as `(arrow, image)` pairs.
pub fn render_arrow_map(a: &FnFamily, b: &FnFamily, map: &[usize]) -> Vec<(String, String)> {
    map.iter().enumerate().map(|(x, &y)| (a.groupoid().name(x).to_string(), b.groupoid().name(y).to_string())).collect()
}

/// Map between families given by rendered element names.
pub fn map_from_names(a: &FnFamily, b: &FnFamily, pairs: &[(String, String)]) -> Result<Vec<usize>, MorphismError> {
    let index_a: HashMap<String, usize> = (0..a.len()).map(|i| (a.render(i), i)).collect();
    let index_b: HashMap<String, usize> = (0..b.len()).map(|i| (b.render(i), i)).collect();
    let mut phi = vec![usize::MAX; a.len()];
    for (x, y) in pairs {
        let i = *index_a.get(x).ok_or_else(|| MorphismError::NotBijective(format!("unknown source element {x}")))?;
        let j = *index_b.get(y).ok_or_else(|| MorphismError::NotBijective(format!("unknown target element {y}")))?;
        phi[i] = j;
    }
    if let Some(i) = phi.iter().position(|&p| p == usize::MAX) {
        return Err(MorphismError::NotBijective(format!("no image for {}", a.render(i))));
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coefficients::{Coefficients, FiniteRing, Semigroupoid};
    use crate::constructions::pair;
    use crate::report::Status;

    fn f2() -> Arc<Coefficients> {
        Arc::new(Coefficients::ring(FiniteRing::galois_field(2).unwrap()))
    }

    fn transposition(g: &crate::FiniteGroupoid) -> Vec<usize> {
        // (i,j) ↦ (σi,σj) with σ swapping 1 and 2
        (0..g.len())
            .map(|x| {
                let name = g.name(x);
                let swapped: String = name
                    .chars()
                    .map(|c| match c {
                        '1' => '2',
                        '2' => '1',
                        c => c,
                    })
                    .collect();
                g.arrow(&swapped).unwrap()
            })
            .collect()
    }

    #[test]
    fn identity_is_a_diagonal_iso() {
        let a = FnFamily::steinberg(Arc::new(pair(2)), f2()).unwrap();
        let r = verify_diagonal_iso(&a, &a, &identity(&a), false, &Budget::unlimited());
        assert_eq!(r.status(), Status::Pass);
        let c = FnFamily::canonical_bumpy(Arc::new(pair(2)), f2()).unwrap();
        let (rep, map) = verify_induced(&c, &c, &identity(&c), false);
        assert_eq!(rep.status(), Status::Pass);
        assert_eq!(map.unwrap(), (0..4).collect::<Vec<_>>());
    }

    #[test]
    fn relabelling_induces_itself() {
        let g = Arc::new(pair(2));
        let sigma = transposition(&g);
        let c = FnFamily::canonical_bumpy(g.clone(), f2()).unwrap();
        let phi = induced_by_arrow_map(&c, &c, &sigma).unwrap();
        let (rep, map) = verify_induced(&c, &c, &phi, false);
        assert_eq!(rep.status(), Status::Pass);
        assert_eq!(map.unwrap(), sigma);
    }

    #[test]
    fn radix_and_table_multiplicativity_agree() {
        let g = Arc::new(pair(2));
        let f3 = Arc::new(Coefficients::ring(FiniteRing::galois_field(3).unwrap()));
        let a = FnFamily::steinberg(g.clone(), f3).unwrap();
        let sigma = transposition(&g);
        let phi = induced_by_arrow_map(&a, &a, &sigma).unwrap();
        assert_eq!(radix_multiplicativity(&a, &a, &phi, &Budget::unlimited()).unwrap(), None);
        // a bijection that swaps two non-zero scalars on one arrow only is not multiplicative
        let two = a.y().element("2").unwrap();
        let one = a.y().element("1").unwrap();
        let bad: Vec<usize> = (0..a.len())
            .map(|i| {
                let f = a.element(i);
                let swapped =
                    PartialFn::from_pairs(f.iter().map(|(x, v)| if x == 0 { (x, if v == one { two } else { one }) } else { (x, v) }))
                        .unwrap();
                a.index_of(&swapped).unwrap()
            })
            .collect();
        let fast = radix_multiplicativity(&a, &a, &bad, &Budget::unlimited()).unwrap();
        // oracle: direct scan over all pairs with fresh convolutions
        let slow = (0..a.len()).flat_map(|i| (0..a.len()).map(move |j| (i, j))).find(|&(i, j)| {
            let p = a.index_of(&a.product_fn(a.element(i), a.element(j)).unwrap()).unwrap();
            let q = a.index_of(&a.product_fn(a.element(bad[i]), a.element(bad[j])).unwrap()).unwrap();
            bad[p] != q
        });
        assert_eq!(fast.is_some(), slow.is_some());
        assert!(slow.is_some());
    }

    #[test]
    fn scaling_the_diagonal_by_a_central_unit() {
        // φ(a) = 2·a for every a over F3: multiplicative iff 2·2 = 2, which fails
        let f3 = Arc::new(Coefficients::ring(FiniteRing::galois_field(3).unwrap()));
        let c = FnFamily::canonical_bumpy(Arc::new(pair(2)), f3).unwrap();
        let y = c.y();
        let two = y.element("2").unwrap();
        let phi: Vec<usize> = (0..c.len())
            .map(|i| {
                c.index_of(&PartialFn::from_pairs(c.element(i).iter().map(|(x, v)| (x, y.product(two, v).unwrap()))).unwrap()).unwrap()
            })
            .collect();
        let r = verify_diagonal_iso(&c, &c, &phi, false, &Budget::unlimited());
        assert_eq!(r.status(), Status::Fail);
        let failed: Vec<&str> = r.conclusions.iter().filter(|c| !c.status.is_pass()).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["multiplicative"]);
    }

    #[test]
    fn mismatched_sizes_are_not_bijective() {
        let y = Arc::new(Coefficients::semigroupoid(Semigroupoid::trivial()));
        let a = FnFamily::canonical_bumpy(Arc::new(pair(2)), y.clone()).unwrap();
        let b = FnFamily::canonical_bumpy(Arc::new(crate::constructions::discrete_units(2)), y).unwrap();
        assert!(bijectivity_witness(&a, &b, &identity(&a)).is_some());
    }
}
