//! The domination relation `a ≺_s b ⇔ asb = a = bsa, as, sa ∈ D` on the
//! bisection-domain part `S` of a family, and its two characterisations.

use fixedbitset::FixedBitSet;

use crate::arrowset::ArrowSet;
use crate::bumpy::BumpyProfile;
use crate::error::FamilyError;
use crate::family::{FnFamily, Role};
use crate::report::{Budget, Check, Report};

/// `a ≺_s b` checked literally from products (family indices, all in `S`).
pub fn dominates_via(f: &FnFamily, a: usize, s: usize, b: usize) -> bool {
    let as_ = f.mul(a, s);
    let sa = f.mul(s, a);
    f.has(as_, Role::D) && f.has(sa, Role::D) && f.mul(as_, b) == a && f.mul(b, sa) == a
}

/// The relation `≺` on `S`, precomputed. Elements are addressed by their
/// position in `f.s()` ("local" indices).
#[derive(Debug)]
pub struct Domination<'a> {
    family: &'a FnFamily,
    local: Vec<u32>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    /// `left[s]`: all `t` with `t ≺_s r` for some `r`.
    left: Vec<FixedBitSet>,
    empty: Option<usize>,
}

const NOT_IN_S: u32 = u32::MAX;

impl<'a> Domination<'a> {
    pub fn new(family: &'a FnFamily) -> Self {
        family.cache_products();
        let s = family.s();
        let n = s.len();
        let mut local = vec![NOT_IN_S; family.len()];
        for (i, &x) in s.iter().enumerate() {
            local[x] = i as u32;
        }
        let loc = |x: usize| local[x] as usize;
        // For each diagonal d: (d·b, b) and (b·d, b) sorted by product.
        let d_local: Vec<usize> = family.d().iter().map(|&d| loc(d)).collect();
        let mut d_slot = vec![usize::MAX; n];
        let mut left_inv: Vec<Vec<(u32, u32)>> = Vec::with_capacity(d_local.len());
        let mut right_inv: Vec<Vec<(u32, u32)>> = Vec::with_capacity(d_local.len());
        for (k, &d) in family.d().iter().enumerate() {
            d_slot[d_local[k]] = k;
            let mut l: Vec<(u32, u32)> = s.iter().enumerate().map(|(j, &b)| (local[family.mul(d, b)], j as u32)).collect();
            let mut r: Vec<(u32, u32)> = s.iter().enumerate().map(|(j, &b)| (local[family.mul(b, d)], j as u32)).collect();
            l.sort_unstable();
            r.sort_unstable();
            left_inv.push(l);
            right_inv.push(r);
        }
        let range = |v: &[(u32, u32)], a: u32| -> std::ops::Range<usize> {
            let lo = v.partition_point(|&(p, _)| p < a);
            let hi = v.partition_point(|&(p, _)| p <= a);
            lo..hi
        };
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut left = vec![FixedBitSet::with_capacity(n); n];
        let mut memo: std::collections::HashMap<(usize, usize), Option<FixedBitSet>> = std::collections::HashMap::new();
        for (ai, &a) in s.iter().enumerate() {
            memo.clear();
            for (si, &sx) in s.iter().enumerate() {
                let (as_, sa) = (loc(family.mul(a, sx)), loc(family.mul(sx, a)));
                let (k1, k2) = (d_slot[as_], d_slot[sa]);
                if k1 == usize::MAX || k2 == usize::MAX {
                    continue;
                }
                let found = memo.entry((k1, k2)).or_insert_with(|| {
                    let l = &left_inv[k1][range(&left_inv[k1], ai as u32)];
                    let r = &right_inv[k2][range(&right_inv[k2], ai as u32)];
                    let mut set = FixedBitSet::with_capacity(n);
                    // both slices are sorted by b
                    let (mut i, mut j) = (0, 0);
                    while i < l.len() && j < r.len() {
                        match l[i].1.cmp(&r[j].1) {
                            std::cmp::Ordering::Less => i += 1,
                            std::cmp::Ordering::Greater => j += 1,
                            std::cmp::Ordering::Equal => {
                                set.insert(l[i].1 as usize);
                                i += 1;
                                j += 1;
                            }
                        }
                    }
                    (!set.is_clear()).then_some(set)
                });
                if let Some(set) = found {
                    left[si].insert(ai);
                    up[ai].union_with(set);
                }
            }
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        let empty = family.empty().filter(|&e| local[e] != NOT_IN_S).map(|e| local[e] as usize);
        Domination { family, local, up, down, left, empty }
    }

    pub fn family(&self) -> &'a FnFamily {
        self.family
    }

    /// Number of elements of `S`.
    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// Family index of local element `i`.
    pub fn global(&self, i: usize) -> usize {
        self.family.s()[i]
    }

    /// Local index of a family element, if it lies in `S`.
    pub fn local(&self, x: usize) -> Option<usize> {
        (self.local[x] != NOT_IN_S).then_some(self.local[x] as usize)
    }

    /// Local index of the empty function.
    pub fn empty(&self) -> Option<usize> {
        self.empty
    }

    pub fn dominates(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// `{b : a ≺ b}`.
    pub fn up(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// `{c : c ≺ a}`.
    pub fn down(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    /// `{t : ∃r t ≺_s r}`.
    pub fn left(&self, s: usize) -> &FixedBitSet {
        &self.left[s]
    }

    pub fn new_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn render(&self, a: usize) -> String {
        self.family.render(self.global(a))
    }
}

/// The set on the right of the domination lemma:
/// `dom(b')⁻¹(G⁰ ∩ [1]b'b) ∩ (G⁰ ∩ [1]bb')dom(b')⁻¹`.
pub fn domination_region(f: &FnFamily, bp: usize, b: usize) -> ArrowSet {
    let g = f.groupoid();
    let y = f.y();
    let inv = g.set_inverse(f.dom(bp));
    let right_units = g.units().intersection(f.element(f.mul(bp, b)).ones(y));
    let left_units = g.units().intersection(f.element(f.mul(b, bp)).ones(y));
    g.set_product(inv, right_units).intersection(g.set_product(left_units, inv))
}

/// 1-cancellativity restricted to the values that occur in `S`, which is
/// all the domination lemma uses.
pub fn values_one_cancellative(f: &FnFamily) -> Option<String> {
    let y = f.y();
    let mut vals: Vec<usize> = f.s().iter().flat_map(|&a| f.element(a).iter().map(|(_, v)| v)).collect();
    vals.sort_unstable();
    vals.dedup();
    let one = y.unit();
    for &x in &vals {
        for &z in &vals {
            let is_one = Some(z) == one;
            if (y.product(x, z) == Some(x)) != is_one || (y.product(z, x) == Some(x)) != is_one {
                return Some(format!("x={}, y={}", y.name(x), y.name(z)));
            }
        }
    }
    None
}

/// The domination lemma over all triples of `S`:
/// `a ≺_{b'} b ⇔ dom(a) ⊆ domination_region(b', b)`.
pub fn check_domination_lemma(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("domination lemma");
    r.hypothesis(Check::from_witness("values 1-cancellative", values_one_cancellative(f)));
    f.cache_products();
    let s = f.s();
    let result = (|| {
        for &bp in s {
            for &b in s {
                budget.spend(s.len() as u64)?;
                let region = domination_region(f, bp, b);
                for &a in s {
                    if dominates_via(f, a, bp, b) != f.dom(a).is_subset(region) {
                        return Ok(Some(format!("a={}, b'={}, b={}", f.render(a), f.render(bp), f.render(b))));
                    }
                }
            }
        }
        Ok::<_, FamilyError>(None)
    })();
    r.conclusion(Check::from_result("biconditional on all triples", result));
    r
}

/// `a ≺ b ⇔ dom(a) ⊆ [Y^×]b` over all pairs of `S`.
pub fn check_prec_containment(dom: &Domination<'_>, profile: &BumpyProfile) -> Report {
    let f = dom.family();
    let mut r = Report::new("domination as containment");
    r.hypothesis(Check::from_witness("compact-bumpy", (!profile.is_compact_bumpy()).then(|| "S is not compact-bumpy".to_string())));
    let mut witness = None;
    'outer: for a in 0..dom.len() {
        let da = f.dom(dom.global(a));
        for b in 0..dom.len() {
            let contained = da.is_subset(f.element(dom.global(b)).invertible_part(f.y()));
            if dom.dominates(a, b) != contained {
                witness = Some(format!("a={}, b={}", dom.render(a), dom.render(b)));
                break 'outer;
            }
        }
    }
    r.conclusion(Check::from_witness("biconditional on all pairs", witness));
    r
}

/// Transitivity `a ≺_{b'} b ≺_{c'} c ⇒ a ≺_{c'} c` and switching
/// `a ≺_b c ⇒ bab ≺_c b`, over every instance of the premises.
pub fn check_domination_laws(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("domination laws");
    f.cache_products();
    let s = f.s();
    // triples[b] = all (a, b') with a ≺_{b'} b; from[a] = all (b', b)
    let mut triples: Vec<Vec<(usize, usize)>> = vec![Vec::new(); f.len()];
    let mut from: Vec<Vec<(usize, usize)>> = vec![Vec::new(); f.len()];
    let collect = (|| {
        for &a in s {
            budget.spend((s.len() * s.len()) as u64)?;
            for &bp in s {
                for &b in s {
                    if dominates_via(f, a, bp, b) {
                        triples[b].push((a, bp));
                        from[a].push((bp, b));
                    }
                }
            }
        }
        Ok::<_, FamilyError>(())
    })();
    if let Err(e) = collect {
        r.conclusion(Check::from_result("transitivity", Err(e.clone())));
        r.conclusion(Check::from_result("switch", Err(e)));
        return r;
    }
    let mut trans = None;
    'outer: for &b in s {
        for &(a, bp) in &triples[b] {
            for &(cp, c) in &from[b] {
                {
                    if !dominates_via(f, a, cp, c) {
                        trans = Some(format!(
                            "a={}, b'={}, b={}, c'={}, c={}",
                            f.render(a),
                            f.render(bp),
                            f.render(b),
                            f.render(cp),
                            f.render(c)
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    r.conclusion(Check::from_witness("transitivity", trans));
    let mut switch = None;
    'sw: for &c in s {
        for &(a, b) in &triples[c] {
            let bab = f.mul(f.mul(b, a), b);
            if !dominates_via(f, bab, c, b) {
                switch = Some(format!("a={}, b={}, c={}", f.render(a), f.render(b), f.render(c)));
                break 'sw;
            }
        }
    }
    r.conclusion(Check::from_witness("switch", switch));
    if let Some(e) = f.empty().filter(|&e| f.has(e, Role::D)) {
        let bottom = s.iter().all(|&a| s.iter().all(|&b| dominates_via(f, e, a, b)));
        r.conclusion(Check::from_witness("empty function is dominated via anything", (!bottom).then(|| "∅".to_string())));
    }
    r
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coefficients::{Coefficients, FiniteRing, Semigroupoid};
    use crate::constructions::{group, pair, FiniteGroup};
    use crate::report::Status;

    fn trivial() -> Arc<Coefficients> {
        Arc::new(Coefficients::semigroupoid(Semigroupoid::trivial()))
    }

    /// Independent oracle: search `s` directly.
    fn brute_dominates(f: &FnFamily, a: usize, b: usize) -> bool {
        f.s().iter().any(|&s| dominates_via(f, a, s, b))
    }

    #[test]
    fn relation_matches_brute_force() {
        let f3 = Arc::new(Coefficients::ring(FiniteRing::galois_field(3).unwrap()));
        for f in [
            FnFamily::canonical_bumpy(Arc::new(pair(2)), trivial()).unwrap(),
            FnFamily::canonical_bumpy(Arc::new(group(&FiniteGroup::cyclic(2))), f3).unwrap(),
        ] {
            let d = Domination::new(&f);
            for a in 0..d.len() {
                for b in 0..d.len() {
                    assert_eq!(d.dominates(a, b), brute_dominates(&f, d.global(a), d.global(b)));
                }
            }
        }
    }

    #[test]
    fn off_diagonal_dominates_itself() {
        let g = Arc::new(pair(2));
        let f = FnFamily::canonical_bumpy(g.clone(), trivial()).unwrap();
        let x = f.index_of(&crate::PartialFn::constant(ArrowSet::singleton(g.arrow("(1,2)").unwrap()), 0)).unwrap();
        let s = f.index_of(&crate::PartialFn::constant(ArrowSet::singleton(g.arrow("(2,1)").unwrap()), 0)).unwrap();
        assert!(dominates_via(&f, x, s, x));
    }

    #[test]
    fn lemma_and_laws_on_pair2() {
        let f = FnFamily::canonical_bumpy(Arc::new(pair(2)), trivial()).unwrap();
        assert_eq!(f.s().len().pow(3), 343);
        assert_eq!(check_domination_lemma(&f, &Budget::unlimited()).status(), Status::Pass);
        assert_eq!(check_domination_laws(&f, &Budget::unlimited()).status(), Status::Pass);
        let d = Domination::new(&f);
        let p = BumpyProfile::of(&f);
        assert_eq!(check_prec_containment(&d, &p).status(), Status::Pass);
    }

    #[test]
    fn non_invertible_values_limit_domination() {
        let z4 = Arc::new(Coefficients::ring(FiniteRing::integers_mod(4)));
        let f = FnFamily::all_on_bisections(Arc::new(group(&FiniteGroup::cyclic(2))), z4).unwrap();
        let d = Domination::new(&f);
        let two = f.y().element("2").unwrap();
        let a = f.index_of(&crate::PartialFn::from_pairs([(0, two)]).unwrap()).unwrap();
        let la = d.local(a).unwrap();
        // dom(a) ⊄ [Y^×]a, so a does not dominate itself
        assert!(!d.dominates(la, la));
        assert!(!brute_dominates(&f, a, a));
    }
}
