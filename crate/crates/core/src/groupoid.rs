//! Finite groupoids given by explicit composition tables.
//!
//! Every finite groupoid is treated as a discrete topological groupoid, so
//! every subset of arrows is open and compact and `int(X) = X` throughout.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arrowset::{ArrowSet, MAX_ARROWS};
use crate::error::GroupoidError;

pub const GROUPOID_SCHEMA: &str = "groupoid/v1";

const NONE: u8 = u8::MAX;

fn default_groupoid_schema() -> String {
    GROUPOID_SCHEMA.to_string()
}

/// The `groupoid/v1` JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroupoid {
    #[serde(default = "default_groupoid_schema")]
    pub schema: String,
    pub arrows: Vec<String>,
    pub compose: Vec<(String, String, String)>,
    pub inverse: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<RawGrading>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrading {
    pub gamma: Box<RawGroupoid>,
    pub map: Vec<(String, String)>,
}

/// A functor from a groupoid into a designated finite groupoid `gamma`.
#[derive(Clone, Debug)]
pub struct Grading {
    gamma: Box<FiniteGroupoid>,
    map: Vec<usize>,
}

impl Grading {
    pub fn gamma(&self) -> &FiniteGroupoid {
        &self.gamma
    }

    pub fn grade(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

/// A validated finite groupoid.
///
/// Arrows are indices `0..len()`, each carrying an opaque name. Values are
/// immutable once built.
#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    names: Vec<String>,
    index: HashMap<String, usize>,
    table: Vec<u8>,
    inverse: Vec<usize>,
    source: Vec<usize>,
    range: Vec<usize>,
    units: ArrowSet,
    // h such that g·h is defined, i.e. r(h) = s(g)
    right_composable: Vec<ArrowSet>,
    grading: Option<Grading>,
}

/// A unit together with its (interior) isotropy group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyGroup {
    pub unit: usize,
    pub arrows: ArrowSet,
}

impl FiniteGroupoid {
    /// Checks every groupoid axiom on a raw document and builds the
    /// groupoid, reporting the first violated axiom with its witnesses.
    pub fn validate(raw: &RawGroupoid) -> Result<Self, GroupoidError> {
        let mut g = Self::validate_ungraded(raw)?;
        if let Some(rg) = &raw.grading {
            let gamma = Self::validate(&rg.gamma)?;
            let mut map = vec![usize::MAX; g.len()];
            for (a, c) in &rg.map {
                let ai = g.arrow(a).ok_or_else(|| GroupoidError::UnknownArrow(a.clone()))?;
                let ci = gamma.arrow(c).ok_or_else(|| GroupoidError::UnknownArrow(c.clone()))?;
                map[ai] = ci;
            }
            if let Some(a) = map.iter().position(|&c| c == usize::MAX) {
                return Err(GroupoidError::GradingNotTotal(g.names[a].clone()));
            }
            g = g.with_grading(gamma, map)?;
        }
        Ok(g)
    }

    fn validate_ungraded(raw: &RawGroupoid) -> Result<Self, GroupoidError> {
        let n = raw.arrows.len();
        if n == 0 {
            return Err(GroupoidError::Empty);
        }
        if n > MAX_ARROWS {
            return Err(GroupoidError::TooManyArrows(n));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, a) in raw.arrows.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(GroupoidError::DuplicateArrow(a.clone()));
            }
        }
        let lookup = |a: &String| index.get(a).copied().ok_or_else(|| GroupoidError::UnknownArrow(a.clone()));

        let mut table = vec![NONE; n * n];
        for (g, h, gh) in &raw.compose {
            let (gi, hi, ghi) = (lookup(g)?, lookup(h)?, lookup(gh)?);
            let slot = &mut table[gi * n + hi];
            if *slot != NONE && *slot as usize != ghi {
                return Err(GroupoidError::ConflictingProduct(g.clone(), h.clone()));
            }
            *slot = ghi as u8;
        }

        let mut inverse = vec![usize::MAX; n];
        for (g, gi) in &raw.inverse {
            let (a, b) = (lookup(g)?, lookup(gi)?);
            if inverse[a] != usize::MAX && inverse[a] != b {
                return Err(GroupoidError::MissingInverse(g.clone()));
            }
            inverse[a] = b;
        }
        if let Some(a) = inverse.iter().position(|&i| i == usize::MAX) {
            return Err(GroupoidError::MissingInverse(raw.arrows[a].clone()));
        }
        let name = |i: usize| raw.arrows[i].clone();
        let comp = |g: usize, h: usize| {
            let v = table[g * n + h];
            (v != NONE).then_some(v as usize)
        };

        for g in 0..n {
            if inverse[inverse[g]] != g {
                return Err(GroupoidError::InverseNotInvolutive(name(g)));
            }
        }

        let mut source = vec![0; n];
        let mut range = vec![0; n];
        for g in 0..n {
            let gi = inverse[g];
            source[g] = comp(gi, g).ok_or_else(|| GroupoidError::UndefinedUnitProduct(name(gi), name(g)))?;
            range[g] = comp(g, gi).ok_or_else(|| GroupoidError::UndefinedUnitProduct(name(g), name(gi)))?;
        }
        let units: ArrowSet = source.iter().copied().collect();

        // units are self-inverse and act as identities wherever a product is defined
        for u in units.iter() {
            if inverse[u] != u || source[u] != u {
                return Err(GroupoidError::UnitLaw { arrow: name(u), unit: name(u) });
            }
        }
        for g in 0..n {
            if comp(range[g], g) != Some(g) {
                return Err(GroupoidError::UnitLaw { arrow: name(g), unit: name(range[g]) });
            }
            if comp(g, source[g]) != Some(g) {
                return Err(GroupoidError::UnitLaw { arrow: name(g), unit: name(source[g]) });
            }
            for u in units.iter() {
                if let Some(x) = comp(u, g) {
                    if x != g {
                        return Err(GroupoidError::UnitLaw { arrow: name(g), unit: name(u) });
                    }
                }
                if let Some(x) = comp(g, u) {
                    if x != g {
                        return Err(GroupoidError::UnitLaw { arrow: name(g), unit: name(u) });
                    }
                }
            }
        }

        for g in 0..n {
            for h in 0..n {
                if comp(g, h).is_some() != (source[g] == range[h]) {
                    return Err(GroupoidError::Composability(name(g), name(h)));
                }
            }
        }

        for g in 0..n {
            for h in 0..n {
                let gh = comp(g, h);
                for k in 0..n {
                    let left = gh.and_then(|x| comp(x, k));
                    let right = comp(h, k).and_then(|x| comp(g, x));
                    if left != right {
                        return Err(GroupoidError::Associativity(name(g), name(h), name(k)));
                    }
                }
            }
        }

        let right_composable = (0..n).map(|g| (0..n).filter(|&h| range[h] == source[g]).collect()).collect();

        Ok(FiniteGroupoid { names: raw.arrows.clone(), index, table, inverse, source, range, units, right_composable, grading: None })
    }

    /// Attaches a grading after checking it is a functor.
    pub fn with_grading(mut self, gamma: FiniteGroupoid, map: Vec<usize>) -> Result<Self, GroupoidError> {
        if map.len() != self.len() || map.iter().any(|&c| c >= gamma.len()) {
            return Err(GroupoidError::BadParameters("grading map has wrong shape".into()));
        }
        self.check_grading(&map, &gamma)?;
        self.grading = Some(Grading { gamma: Box::new(gamma), map });
        Ok(self)
    }

    /// Returns the groupoid with its grading removed.
    pub fn ungraded(&self) -> Self {
        let mut g = self.clone();
        g.grading = None;
        g
    }

    /// Whether `map` (arrow index to `gamma` arrow index) is a functor; the
    /// error names a composable pair where it fails.
    pub fn check_grading(&self, map: &[usize], gamma: &FiniteGroupoid) -> Result<(), GroupoidError> {
        for g in 0..self.len() {
            for h in self.right_composable[g].iter() {
                let gh = self.compose(g, h).expect("composable");
                if gamma.compose(map[g], map[h]) != Some(map[gh]) {
                    return Err(GroupoidError::GradingNotFunctor(self.names[g].clone(), self.names[h].clone()));
                }
            }
        }
        Ok(())
    }

    pub fn validate_grading(&self, map: &[usize], gamma: &FiniteGroupoid) -> bool {
        map.len() == self.len() && map.iter().all(|&c| c < gamma.len()) && self.check_grading(map, gamma).is_ok()
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn grade(&self, g: usize) -> Option<usize> {
        self.grading.as_ref().map(|c| c.map[g])
    }

    /// Whether all arrows of `set` carry the same grade (vacuous when ungraded).
    pub fn is_homogeneous(&self, set: ArrowSet) -> bool {
        match &self.grading {
            None => true,
            Some(c) => {
                let mut grades = set.iter().map(|g| c.map[g]);
                match grades.next() {
                    None => true,
                    Some(first) => grades.all(|x| x == first),
                }
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arrow(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn all(&self) -> ArrowSet {
        ArrowSet::full(self.len())
    }

    #[inline]
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        let v = self.table[g * self.len() + h];
        (v != NONE).then_some(v as usize)
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    #[inline]
    pub fn source(&self, g: usize) -> usize {
        self.source[g]
    }

    #[inline]
    pub fn range(&self, g: usize) -> usize {
        self.range[g]
    }

    /// Arrows `h` with `g·h` defined.
    #[inline]
    pub fn right_composable(&self, g: usize) -> ArrowSet {
        self.right_composable[g]
    }

    /// The unit space `G⁰`.
    pub fn units(&self) -> ArrowSet {
        self.units
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.units.contains(g)
    }

    /// `UV = {gh : g ∈ U, h ∈ V, gh defined}`.
    pub fn set_product(&self, u: ArrowSet, v: ArrowSet) -> ArrowSet {
        let mut out = ArrowSet::EMPTY;
        for g in u.iter() {
            for h in v.intersection(self.right_composable[g]).iter() {
                out.insert(self.compose(g, h).expect("composable"));
            }
        }
        out
    }

    pub fn set_inverse(&self, u: ArrowSet) -> ArrowSet {
        u.iter().map(|g| self.inverse[g]).collect()
    }

    /// `{name,...}` with names sorted, for reports.
    pub fn render_set(&self, u: ArrowSet) -> String {
        let mut names: Vec<&str> = u.iter().map(|g| self.name(g)).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }

    /// `s[U]`.
    pub fn sources(&self, u: ArrowSet) -> ArrowSet {
        u.iter().map(|g| self.source[g]).collect()
    }

    /// `r[U]`.
    pub fn ranges(&self, u: ArrowSet) -> ArrowSet {
        u.iter().map(|g| self.range[g]).collect()
    }

    /// `UU⁻¹ ∪ U⁻¹U ⊆ G⁰`, tested as injectivity of `s` and `r` on `U`.
    pub fn is_bisection(&self, u: ArrowSet) -> bool {
        let mut srcs = ArrowSet::EMPTY;
        let mut rngs = ArrowSet::EMPTY;
        for g in u.iter() {
            let (s, r) = (self.source[g], self.range[g]);
            if srcs.contains(s) || rngs.contains(r) {
                return false;
            }
            srcs.insert(s);
            rngs.insert(r);
        }
        true
    }

    /// `G^iso = {g : s(g) = r(g)}`.
    pub fn isotropy(&self) -> ArrowSet {
        (0..self.len()).filter(|&g| self.source[g] == self.range[g]).collect()
    }

    /// `II⁻¹ ∪ I⁻¹I ⊆ G^iso`.
    pub fn is_isosection(&self, u: ArrowSet) -> bool {
        let iso = self.isotropy();
        let inv = self.set_inverse(u);
        self.set_product(u, inv).union(self.set_product(inv, u)).is_subset(iso)
    }

    /// Discrete case: the interior of the isotropy is the isotropy, so this
    /// is `G^iso = G⁰`.
    pub fn is_effective(&self) -> bool {
        self.isotropy() == self.units
    }

    /// The part of `o2` whose sources avoid `s[o]`; a bisection whose
    /// sources are exactly `s[o2] ∖ s[o]`.
    pub fn splitting(&self, o: ArrowSet, o2: ArrowSet) -> Result<ArrowSet, GroupoidError> {
        if !self.is_bisection(o) || !self.is_bisection(o2) {
            return Err(GroupoidError::NotBisection);
        }
        let taken = self.sources(o);
        Ok(o2.iter().filter(|&g| !taken.contains(self.source[g])).collect())
    }

    /// `H_x = {g ∈ G^iso : s(g) = x = r(g)}`.
    pub fn interior_isotropy_group(&self, x: usize) -> Result<IsotropyGroup, GroupoidError> {
        if x >= self.len() || !self.is_unit(x) {
            let label = self.names.get(x).cloned().unwrap_or_else(|| x.to_string());
            return Err(GroupoidError::NotAUnit(label));
        }
        let arrows = (0..self.len()).filter(|&g| self.source[g] == x && self.range[g] == x).collect();
        Ok(IsotropyGroup { unit: x, arrows })
    }

    /// All bisections, or all homogeneous bisections when `homogeneous` is
    /// set and the groupoid is graded, in a deterministic order starting
    /// with the empty set.
    pub fn bisections(&self, homogeneous: bool) -> Vec<ArrowSet> {
        let grading = if homogeneous { self.grading.as_ref() } else { None };
        let mut out = Vec::new();
        self.bisections_rec(0, ArrowSet::EMPTY, ArrowSet::EMPTY, ArrowSet::EMPTY, None, grading, &mut out);
        out.sort_by_key(|b| (b.len(), b.bits()));
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn bisections_rec(
        &self,
        next: usize,
        cur: ArrowSet,
        srcs: ArrowSet,
        rngs: ArrowSet,
        grade: Option<usize>,
        grading: Option<&Grading>,
        out: &mut Vec<ArrowSet>,
    ) {
        if next == self.len() {
            out.push(cur);
            return;
        }
        self.bisections_rec(next + 1, cur, srcs, rngs, grade, grading, out);
        let (s, r) = (self.source[next], self.range[next]);
        if srcs.contains(s) || rngs.contains(r) {
            return;
        }
        let g_grade = grading.map(|c| c.map[next]);
        if let (Some(a), Some(b)) = (grade, g_grade) {
            if a != b {
                return;
            }
        }
        self.bisections_rec(next + 1, cur.with(next), srcs.with(s), rngs.with(r), grade.or(g_grade), grading, out);
    }

    /// Serialises back to a `groupoid/v1` document.
    pub fn to_raw(&self) -> RawGroupoid {
        let n = self.len();
        let mut compose = Vec::new();
        for g in 0..n {
            for h in self.right_composable[g].iter() {
                let gh = self.compose(g, h).expect("composable");
                compose.push((self.names[g].clone(), self.names[h].clone(), self.names[gh].clone()));
            }
        }
        let inverse = (0..n).map(|g| (self.names[g].clone(), self.names[self.inverse[g]].clone())).collect();
        let grading = self.grading.as_ref().map(|c| RawGrading {
            gamma: Box::new(c.gamma.to_raw()),
            map: (0..n).map(|g| (self.names[g].clone(), c.gamma.names[c.map[g]].clone())).collect(),
        });
        RawGroupoid { schema: GROUPOID_SCHEMA.to_string(), arrows: self.names.clone(), compose, inverse, grading }
    }

    /// SHA-256 of the tables relabelled in sorted-name order; invariant
    /// under reordering of the declared arrows.
    pub fn canonical_digest(&self) -> String {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        let mut hasher = Sha256::new();
        for &g in &order {
            hasher.update(self.names[g].as_bytes());
            hasher.update([0]);
        }
        for &g in &order {
            for &h in &order {
                match self.compose(g, h) {
                    Some(x) => hasher.update(self.names[x].as_bytes()),
                    None => hasher.update([1]),
                }
                hasher.update([0]);
            }
            hasher.update(self.names[self.inverse[g]].as_bytes());
            hasher.update([2]);
        }
        if let Some(c) = &self.grading {
            hasher.update(c.gamma.canonical_digest().as_bytes());
            for &g in &order {
                hasher.update(c.gamma.names[c.map[g]].as_bytes());
                hasher.update([3]);
            }
        }
        hex::encode(hasher.finalize())
    }

    /// The same groupoid with arrows declared in the order `perm`
    /// (`perm[i]` is the old index of the new arrow `i`).
    pub fn reordered(&self, perm: &[usize]) -> Self {
        let mut raw = self.to_raw();
        raw.arrows = perm.iter().map(|&g| self.names[g].clone()).collect();
        Self::validate(&raw).expect("reordering preserves validity")
    }

    /// Checks that `map` (arrow of `self` to arrow of `other`) is a groupoid
    /// isomorphism.
    pub fn check_isomorphism(&self, other: &FiniteGroupoid, map: &[usize]) -> Result<(), String> {
        let n = self.len();
        if map.len() != n || other.len() != n {
            return Err(format!("sizes differ: {} vs {}", n, other.len()));
        }
        let image: ArrowSet = map.iter().copied().collect();
        if image.len() != n {
            return Err("map is not injective".into());
        }
        for g in 0..n {
            if map[self.inverse[g]] != other.inverse[map[g]] {
                return Err(format!("inverse not preserved at `{}`", self.names[g]));
            }
            for h in 0..n {
                let lhs = self.compose(g, h).map(|x| map[x]);
                let rhs = other.compose(map[g], map[h]);
                if lhs != rhs {
                    return Err(format!("product not preserved at (`{}`, `{}`)", self.names[g], self.names[h]));
                }
            }
        }
        Ok(())
    }

    fn arrow_invariant(&self, g: usize) -> (bool, bool, usize, usize, usize) {
        // order of g in its isotropy group, or 0 off the isotropy
        let order = if self.source[g] == self.range[g] {
            let mut k = 1;
            let mut x = g;
            while x != self.source[g] {
                x = self.compose(x, g).expect("isotropy arrows compose");
                k += 1;
            }
            k
        } else {
            0
        };
        let fibre = |u: usize| (0..self.len()).filter(|&h| self.source[h] == u).count();
        (self.is_unit(g), self.source[g] == self.range[g], order, fibre(self.source[g]), fibre(self.range[g]))
    }

    /// Exhaustive backtracking search for an isomorphism onto `other`.
    /// Intended for small groupoids only.
    pub fn find_isomorphism(&self, other: &FiniteGroupoid) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.units.len() != other.units.len() {
            return None;
        }
        let inv_a: Vec<_> = (0..n).map(|g| self.arrow_invariant(g)).collect();
        let inv_b: Vec<_> = (0..n).map(|g| other.arrow_invariant(g)).collect();
        let mut sa = inv_a.clone();
        let mut sb = inv_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
        // units first, then remaining arrows
        let mut order: Vec<usize> = self.units.iter().collect();
        order.extend((0..n).filter(|&g| !self.is_unit(g)));
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if self.iso_rec(other, &order, 0, &inv_a, &inv_b, &mut map, &mut used) {
            debug_assert!(self.check_isomorphism(other, &map).is_ok());
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn iso_rec(
        &self,
        other: &FiniteGroupoid,
        order: &[usize],
        depth: usize,
        inv_a: &[(bool, bool, usize, usize, usize)],
        inv_b: &[(bool, bool, usize, usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return self.check_isomorphism(other, map).is_ok();
        }
        let g = order[depth];
        for h in 0..other.len() {
            if used[h] || inv_a[g] != inv_b[h] {
                continue;
            }
            map[g] = h;
            if self.consistent(other, map, g) {
                used[h] = true;
                if self.iso_rec(other, order, depth + 1, inv_a, inv_b, map, used) {
                    return true;
                }
                used[h] = false;
            }
            map[g] = usize::MAX;
        }
        false
    }

    fn consistent(&self, other: &FiniteGroupoid, map: &[usize], g: usize) -> bool {
        let h = map[g];
        let gi = self.inverse[g];
        if map[gi] != usize::MAX && map[gi] != other.inverse[h] {
            return false;
        }
        if map[self.source[g]] != usize::MAX && map[self.source[g]] != other.source[h] {
            return false;
        }
        if map[self.range[g]] != usize::MAX && map[self.range[g]] != other.range[h] {
            return false;
        }
        for k in 0..self.len() {
            let mk = map[k];
            if mk == usize::MAX {
                continue;
            }
            for (x, y, mx, my) in [(g, k, h, mk), (k, g, mk, h)] {
                let lhs = self.compose(x, y);
                let rhs = other.compose(mx, my);
                if lhs.is_some() != rhs.is_some() {
                    return false;
                }
                if let (Some(l), Some(r)) = (lhs, rhs) {
                    if map[l] != usize::MAX && map[l] != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_isomorphic(&self, other: &FiniteGroupoid) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(arrows: &[&str], compose: &[(&str, &str, &str)], inverse: &[(&str, &str)]) -> RawGroupoid {
        RawGroupoid {
            schema: GROUPOID_SCHEMA.into(),
            arrows: arrows.iter().map(|s| s.to_string()).collect(),
            compose: compose.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect(),
            inverse: inverse.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            grading: None,
        }
    }

    fn z2() -> FiniteGroupoid {
        FiniteGroupoid::validate(&raw(
            &["e", "g"],
            &[("e", "e", "e"), ("e", "g", "g"), ("g", "e", "g"), ("g", "g", "e")],
            &[("e", "e"), ("g", "g")],
        ))
        .unwrap()
    }

    #[test]
    fn unit_groupoid_is_valid() {
        let g = FiniteGroupoid::validate(&raw(&["e"], &[("e", "e", "e")], &[("e", "e")])).unwrap();
        assert_eq!(g.units(), ArrowSet::singleton(0));
    }

    #[test]
    fn group_of_order_two_is_one_unit_groupoid() {
        let g = z2();
        assert_eq!(g.units().len(), 1);
        assert_eq!(g.source(1), 0);
        assert_eq!(g.isotropy(), g.all());
        assert!(!g.is_effective());
    }

    /// Direct scan for a unit-law violation: some unit `u` and arrow `g`
    /// with `ug` or `gu` defined but different from `g`.
    fn scan_unit_law(raw: &RawGroupoid) -> bool {
        let prod: HashMap<(&str, &str), &str> = raw.compose.iter().map(|(a, b, c)| ((a.as_str(), b.as_str()), c.as_str())).collect();
        let inv: HashMap<&str, &str> = raw.inverse.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let units: Vec<&str> = raw.arrows.iter().filter_map(|g| prod.get(&(inv[g.as_str()], g.as_str())).copied()).collect();
        raw.arrows.iter().any(|g| {
            units.iter().any(|u| prod.get(&(u, g.as_str())).is_some_and(|x| x != g) || prod.get(&(g.as_str(), u)).is_some_and(|x| x != g))
        })
    }

    #[test]
    fn idempotent_non_unit_is_rejected() {
        let bad = raw(&["e", "g"], &[("e", "e", "e"), ("e", "g", "g"), ("g", "e", "g"), ("g", "g", "g")], &[("e", "e"), ("g", "g")]);
        assert!(scan_unit_law(&bad));
        let err = FiniteGroupoid::validate(&bad).unwrap_err();
        assert!(matches!(err, GroupoidError::UnitLaw { .. }), "{err:?}");
    }

    #[test]
    fn broken_associativity_is_reported_with_triple() {
        // pair groupoid on {1,2} with (1,2)(2,1) pointing at the wrong unit
        let mut r = crate::constructions::pair(2).to_raw();
        for t in r.compose.iter_mut() {
            if t.0 == "(1,2)" && t.1 == "(2,1)" {
                t.2 = "(2,2)".into();
            }
        }
        assert!(FiniteGroupoid::validate(&r).is_err());
    }

    #[test]
    fn missing_inverse_is_reported() {
        let r = raw(&["e", "g"], &[("e", "e", "e")], &[("e", "e")]);
        assert_eq!(FiniteGroupoid::validate(&r).unwrap_err(), GroupoidError::MissingInverse("g".into()));
    }

    #[test]
    fn set_products_in_small_groupoids() {
        let g = z2();
        let gs = ArrowSet::singleton(1);
        assert_eq!(g.set_product(gs, gs), ArrowSet::singleton(0));
        let p = crate::constructions::pair(2);
        let a = p.arrow("(1,2)").unwrap();
        let b = p.arrow("(2,1)").unwrap();
        // oracle: enumerate composable pairs by name
        let mut expected = ArrowSet::EMPTY;
        for x in [a] {
            for y in [b] {
                if let Some(z) = p.compose(x, y) {
                    expected.insert(z);
                }
            }
        }
        assert_eq!(expected, ArrowSet::singleton(p.arrow("(1,1)").unwrap()));
        assert_eq!(p.set_product(ArrowSet::singleton(a), ArrowSet::singleton(b)), expected);
        for w in p.all().subsets() {
            assert_eq!(p.set_product(p.units(), w), w);
            assert_eq!(p.set_product(w, p.units()), w);
        }
    }

    #[test]
    fn bisection_examples() {
        let g = z2();
        assert!(g.is_bisection(ArrowSet::EMPTY));
        assert!(!g.is_bisection(g.all()));
        let uu = g.set_product(g.all(), g.set_inverse(g.all()));
        assert!(!uu.is_subset(g.units()));
        for a in 0..g.len() {
            assert!(g.is_bisection(ArrowSet::singleton(a)));
        }
    }

    #[test]
    fn splitting_examples() {
        let p = crate::constructions::pair(2);
        let a = |s: &str| p.arrow(s).unwrap();
        let o2: ArrowSet = [a("(1,2)"), a("(2,1)")].into_iter().collect();
        assert_eq!(p.splitting(ArrowSet::EMPTY, o2).unwrap(), o2);
        assert_eq!(p.splitting(o2, o2).unwrap(), ArrowSet::EMPTY);
        // s(1,2) = (2,2), s(2,1) = (1,1); removing source (1,1) keeps (1,2)
        let o = ArrowSet::singleton(a("(1,1)"));
        assert_eq!(p.splitting(o, o2).unwrap(), ArrowSet::singleton(a("(1,2)")));
        // {(1,2),(2,2)} shares the source (2,2): not a bisection
        let bad: ArrowSet = [a("(1,2)"), a("(2,2)")].into_iter().collect();
        assert_eq!(p.splitting(o, bad).unwrap_err(), GroupoidError::NotBisection);
    }

    #[test]
    fn isotropy_groups() {
        let p = crate::constructions::pair(2);
        for x in p.units().iter() {
            assert_eq!(p.interior_isotropy_group(x).unwrap().arrows, ArrowSet::singleton(x));
        }
        let g = z2();
        assert_eq!(g.interior_isotropy_group(0).unwrap().arrows, g.all());
        assert!(g.interior_isotropy_group(1).is_err());
    }

    #[test]
    fn pair_two_has_seven_bisections() {
        assert_eq!(crate::constructions::pair(2).bisections(false).len(), 7);
    }
}
