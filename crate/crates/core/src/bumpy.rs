//! The bumpy axioms and their compact and `Z` strengthenings, instantiated
//! for finite discrete groupoids where interiors are the sets themselves
//! and every set is compact.
//!
//! Each axiom has a fast check, which quantifies only over the decisive
//! cases (singleton neighbourhoods, maximal compact sets), and a literal
//! check over every quantified pair. The two are compared in the
//! finite-case lemma tests.

use crate::arrowset::ArrowSet;
use crate::error::FamilyError;
use crate::family::{FnFamily, Role};
use crate::report::{Budget, Check, Report};

/// Bisections the axioms quantify over: homogeneous ones when the host
/// groupoid is graded, since then every domain in the family is.
fn quantified_bisections(f: &FnFamily) -> Vec<ArrowSet> {
    let g = f.groupoid();
    g.bisections(g.grading().is_some())
}

/// `(arrow, value)` pairs realised by members of `S`.
fn realised_pairs(f: &FnFamily) -> Vec<bool> {
    let ylen = f.y().len();
    let mut hit = vec![false; f.groupoid().len() * ylen];
    for &a in f.s() {
        for (x, v) in f.element(a).iter() {
            hit[x * ylen + v] = true;
        }
    }
    hit
}

/// Urysohn: `∅ ∈ S` and every arrow `g` lies in `[Y^×]a` for some `a ∈ S`
/// with `dom(a) ⊆ {g}`. The singleton neighbourhood is the smallest open
/// set around `g`, so it decides the axiom.
pub fn urysohn_witness(f: &FnFamily) -> Option<String> {
    let g = f.groupoid();
    if !f.empty().is_some_and(|e| f.has(e, Role::S)) {
        return Some("empty function not in S".into());
    }
    let y = f.y();
    let mut covered = ArrowSet::EMPTY;
    for &a in f.s() {
        let e = f.element(a);
        if e.dom().len() == 1 && e.invertible_part(y) == e.dom() {
            covered = covered.union(e.dom());
        }
    }
    g.all().difference(covered).first().map(|x| g.name(x).to_string())
}

/// Urysohn quantified literally over every bisection `O ∋ g`.
pub fn urysohn_literal(f: &FnFamily, budget: &Budget) -> Result<Option<String>, FamilyError> {
    let g = f.groupoid();
    if !f.empty().is_some_and(|e| f.has(e, Role::S)) {
        return Ok(Some("empty function not in S".into()));
    }
    let y = f.y();
    for o in g.bisections(false) {
        budget.spend(f.s().len() as u64)?;
        for x in o.iter() {
            let found = f.s().iter().any(|&a| {
                let e = f.element(a);
                e.dom().is_subset(o) && e.invertible_part(y).contains(x)
            });
            if !found {
                return Ok(Some(format!("arrow {} in {}", g.name(x), g.render_set(o))));
            }
        }
    }
    Ok(None)
}

/// Involutive: whenever `a(g) ∈ Y^×` some `b ∈ S` has `b(g⁻¹) = a(g)⁻¹`.
/// In the discrete topology `{g⁻¹}` is a neighbourhood, so a pointwise
/// match suffices.
pub fn involutive_witness(f: &FnFamily) -> Option<String> {
    let g = f.groupoid();
    let y = f.y();
    let hit = realised_pairs(f);
    for &a in f.s() {
        for (x, v) in f.element(a).iter() {
            if let Some(inv) = y.inverse_of(v) {
                if !hit[g.inverse(x) * y.len() + inv] {
                    return Some(format!("{} at {}", f.render(a), g.name(x)));
                }
            }
        }
    }
    None
}

/// For each `b ∈ S`, whether `ab, ba ∈ Z`.
fn z_partners(f: &FnFamily, a: usize) -> impl Iterator<Item = usize> + '_ {
    f.s().iter().copied().filter(move |&b| f.has(f.mul(a, b), Role::Z) && f.has(f.mul(b, a), Role::Z))
}

/// Whether `b(g⁻¹) = a(g)⁻¹` for every `g ∈ c`.
fn inverts_on(f: &FnFamily, a: usize, b: usize, c: ArrowSet) -> bool {
    let (g, y) = (f.groupoid(), f.y());
    let (ea, eb) = (f.element(a), f.element(b));
    c.iter().all(|x| match (ea.get(x).and_then(|v| y.inverse_of(v)), eb.get(g.inverse(x))) {
        (Some(inv), Some(w)) => inv == w,
        _ => false,
    })
}

/// Z-Involutive: as Involutive with the witness also satisfying
/// `ab, ba ∈ Z`.
pub fn z_involutive_witness(f: &FnFamily) -> Option<String> {
    let g = f.groupoid();
    for &a in f.s() {
        let inv_part = f.element(a).invertible_part(f.y());
        if inv_part.is_empty() {
            continue;
        }
        let mut covered = ArrowSet::EMPTY;
        for b in z_partners(f, a) {
            for x in inv_part.difference(covered).iter() {
                if inverts_on(f, a, b, ArrowSet::singleton(x)) {
                    covered.insert(x);
                }
            }
            if covered == inv_part {
                break;
            }
        }
        if let Some(x) = inv_part.difference(covered).first() {
            return Some(format!("{} at {}", f.render(a), g.name(x)));
        }
    }
    None
}

/// Compact-Urysohn: for bisections `C ⊆ O` some `a ∈ S` has `dom(a) ⊆ O`
/// and `C ⊆ [Y^×]a`. Taking `O = C` shows it is equivalent to every
/// (quantified) bisection being the domain of a `Y^×`-valued member.
pub fn compact_urysohn_witness(f: &FnFamily) -> Option<String> {
    let y = f.y();
    let mut realised = std::collections::HashSet::new();
    for &a in f.s() {
        let e = f.element(a);
        if e.invertible_part(y) == e.dom() {
            realised.insert(e.dom());
        }
    }
    quantified_bisections(f).into_iter().find(|c| !realised.contains(c)).map(|c| f.groupoid().render_set(c))
}

/// Compact-Urysohn over every pair `C ⊆ O` of quantified bisections.
pub fn compact_urysohn_literal(f: &FnFamily, budget: &Budget) -> Result<Option<String>, FamilyError> {
    let g = f.groupoid();
    let y = f.y();
    for o in quantified_bisections(f) {
        let parts: Vec<ArrowSet> =
            f.s().iter().map(|&a| f.element(a)).filter(|e| e.dom().is_subset(o)).map(|e| e.invertible_part(y)).collect();
        for c in o.subsets() {
            budget.spend(parts.len() as u64 + 1)?;
            if !parts.iter().any(|p| c.is_subset(*p)) {
                return Ok(Some(format!("{} inside {}", g.render_set(c), g.render_set(o))));
            }
        }
    }
    Ok(None)
}

/// Compact-Involutive: for `a ∈ S` and `C ⊆ [Y^×]a` some `b ∈ S` inverts
/// `a` along `C`. A witness for `C = [Y^×]a` serves every smaller `C`.
pub fn compact_involutive_witness(f: &FnFamily) -> Option<String> {
    f.s()
        .iter()
        .find(|&&a| {
            let c = f.element(a).invertible_part(f.y());
            !f.s().iter().any(|&b| inverts_on(f, a, b, c))
        })
        .map(|&a| f.render(a))
}

/// Compact-Involutive over every `C ⊆ [Y^×]a`.
pub fn compact_involutive_literal(f: &FnFamily, budget: &Budget) -> Result<Option<String>, FamilyError> {
    for &a in f.s() {
        for c in f.element(a).invertible_part(f.y()).subsets() {
            budget.spend(f.s().len() as u64)?;
            if !f.s().iter().any(|&b| inverts_on(f, a, b, c)) {
                return Ok(Some(format!("{} on {}", f.render(a), f.groupoid().render_set(c))));
            }
        }
    }
    Ok(None)
}

/// Compact-Z-Involutive: Compact-Involutive with `ab, ba ∈ Z`.
pub fn compact_z_involutive_witness(f: &FnFamily) -> Option<String> {
    f.s()
        .iter()
        .find(|&&a| {
            let c = f.element(a).invertible_part(f.y());
            !z_partners(f, a).any(|b| inverts_on(f, a, b, c))
        })
        .map(|&a| f.render(a))
}

/// All bumpy-type axioms evaluated on one family.
#[derive(Clone, Debug)]
pub struct BumpyProfile {
    pub proper: Check,
    pub urysohn: Check,
    pub involutive: Check,
    pub compact_urysohn: Check,
    pub compact_involutive: Check,
    pub z_involutive: Check,
    pub compact_z_involutive: Check,
}

impl BumpyProfile {
    pub fn of(f: &FnFamily) -> Self {
        BumpyProfile {
            // every finite set is compact
            proper: Check::pass("1-proper").with_detail("vacuous: every set is compact"),
            urysohn: Check::from_witness("urysohn", urysohn_witness(f)),
            involutive: Check::from_witness("involutive", involutive_witness(f)),
            compact_urysohn: Check::from_witness("compact-urysohn", compact_urysohn_witness(f)),
            compact_involutive: Check::from_witness("compact-involutive", compact_involutive_witness(f)),
            z_involutive: Check::from_witness("z-involutive", z_involutive_witness(f)),
            compact_z_involutive: Check::from_witness("compact-z-involutive", compact_z_involutive_witness(f)),
        }
    }

    pub fn is_bumpy(&self) -> bool {
        self.proper.status.is_pass() && self.urysohn.status.is_pass() && self.involutive.status.is_pass()
    }

    pub fn is_compact_bumpy(&self) -> bool {
        self.is_bumpy() && self.compact_urysohn.status.is_pass() && self.compact_involutive.status.is_pass()
    }

    pub fn is_z_bumpy(&self) -> bool {
        self.is_bumpy() && self.z_involutive.status.is_pass()
    }

    pub fn is_compact_z_bumpy(&self) -> bool {
        self.is_compact_bumpy() && self.compact_z_involutive.status.is_pass()
    }

    /// The three defining axioms.
    pub fn bumpy_report(&self) -> Report {
        let mut r = Report::new("bumpy");
        r.conclusion(self.proper.clone()).conclusion(self.urysohn.clone()).conclusion(self.involutive.clone());
        r
    }

    /// Compact and `Z` strengthenings, plus the implications between
    /// them, which must hold on every instance.
    pub fn compact_report(&self) -> Report {
        let mut r = Report::new("compact-bumpy");
        for c in [&self.compact_urysohn, &self.compact_involutive, &self.z_involutive, &self.compact_z_involutive] {
            r.conclusion(c.clone());
        }
        let implies = |name: &str, p: &Check, q: &Check| {
            if p.status.is_pass() && !q.status.is_pass() {
                Check::fail(name, format!("{} holds but {} fails", p.name, q.name), q.witnesses.clone())
            } else {
                Check::pass(name)
            }
        };
        r.conclusion(implies("compact-involutive implies involutive", &self.compact_involutive, &self.involutive));
        r.conclusion(implies("compact-urysohn implies urysohn", &self.compact_urysohn, &self.urysohn));
        r.conclusion(implies("compact-z-involutive implies compact-involutive", &self.compact_z_involutive, &self.compact_involutive));
        r.conclusion(implies("z-involutive implies involutive", &self.z_involutive, &self.involutive));
        r
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coefficients::{Coefficients, FiniteRing, Semigroupoid};
    use crate::constructions::{group, pair, FiniteGroup};
    use crate::family::ProductMode;
    use crate::function::PartialFn;
    use crate::groupoid::FiniteGroupoid;
    use crate::report::Status;

    fn trivial() -> Arc<Coefficients> {
        Arc::new(Coefficients::semigroupoid(Semigroupoid::trivial()))
    }

    #[test]
    fn canonical_family_is_compact_z_bumpy() {
        for g in [pair(2), group(&FiniteGroup::cyclic(3))] {
            let f = FnFamily::canonical_bumpy(Arc::new(g), trivial()).unwrap();
            let p = BumpyProfile::of(&f);
            assert!(p.is_compact_z_bumpy(), "{p:?}");
            assert_eq!(p.compact_report().status(), Status::Pass);
        }
        let z4 = Arc::new(Coefficients::ring(FiniteRing::integers_mod(4)));
        let f = FnFamily::canonical_bumpy(Arc::new(pair(2)), z4).unwrap();
        assert!(BumpyProfile::of(&f).is_compact_z_bumpy());
    }

    #[test]
    fn missing_singletons_break_urysohn() {
        let g = Arc::new(pair(2));
        let x = g.arrow("(1,2)").unwrap();
        let keep: Vec<PartialFn> = g
            .bisections(false)
            .into_iter()
            .filter(|b| !b.contains(x) && !b.contains(g.inverse(x)))
            .map(|b| PartialFn::constant(b, 0))
            .collect();
        let f = FnFamily::classify(g.clone(), trivial(), ProductMode::Bisection, keep, &Budget::unlimited()).unwrap();
        let w = urysohn_witness(&f).unwrap();
        // oracle: the arrows never covered by a singleton domain
        assert!(w == "(1,2)" || w == "(2,1)");
    }

    #[test]
    fn lone_empty_function_is_not_bumpy() {
        let g: Arc<FiniteGroupoid> = Arc::new(pair(2));
        let f = FnFamily::classify(g, trivial(), ProductMode::Bisection, vec![PartialFn::empty()], &Budget::unlimited()).unwrap();
        assert!(urysohn_witness(&f).is_some());
        assert!(involutive_witness(&f).is_none());
    }

    #[test]
    fn non_invertible_values_fail_compact_urysohn_only_when_needed() {
        // Y = Z/4 \ 0, family of all functions on bisections: invertible-valued
        // members still exist for every bisection
        let z4 = Arc::new(Coefficients::ring(FiniteRing::integers_mod(4)));
        let f = FnFamily::all_on_bisections(Arc::new(group(&FiniteGroup::cyclic(2))), z4).unwrap();
        assert!(compact_urysohn_witness(&f).is_none());
        assert!(compact_urysohn_literal(&f, &Budget::unlimited()).unwrap().is_none());
    }
}
