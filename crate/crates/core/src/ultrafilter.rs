//! Filters and ultrafilters of `(S, ≺)` and the groupoid they form.
//!
//! Sets of elements of `S` are bitsets over the local indices of a
//! [`Domination`].

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::domination::Domination;
use crate::error::FamilyError;
use crate::groupoid::{FiniteGroupoid, RawGroupoid, GROUPOID_SCHEMA};
use crate::report::{Budget, Check, Report};

/// Largest `S` the subset-enumeration oracle accepts.
pub const ORACLE_LIMIT: usize = 20;

/// `T^≺ = {a : ∃t ∈ T, t ≺ a}`.
pub fn up_closure(d: &Domination<'_>, t: &FixedBitSet) -> FixedBitSet {
    let mut out = d.new_set();
    for x in t.ones() {
        out.union_with(d.up(x));
    }
    out
}

/// The literal filter condition `a, b ∈ F ⇔ ∃c ∈ F (c ≺ a, c ≺ b)`.
pub fn is_filter(d: &Domination<'_>, f: &FixedBitSet) -> bool {
    // ⇐ direction with a = b: F is an up-set
    if !up_closure(d, f).is_subset(f) {
        return false;
    }
    // ⇒ direction: every member is above some member ...
    if f.ones().any(|x| d.down(x).is_disjoint(f)) {
        return false;
    }
    // ... and a member below everything settles all pairs at once
    if f.ones().any(|c| f.is_subset(d.up(c))) {
        return true;
    }
    let members: Vec<usize> = f.ones().collect();
    members.iter().enumerate().all(|(i, &a)| {
        members[i + 1..].iter().all(|&b| {
            let mut common = d.down(a).clone();
            common.intersect_with(d.down(b));
            !common.is_disjoint(f)
        })
    })
}

/// A proper set misses something (for `∅ ∈ S`, exactly when it misses `∅`).
pub fn is_proper(d: &Domination<'_>, f: &FixedBitSet) -> bool {
    f.count_ones(..) < d.len()
}

/// Nonempty proper filters containing `f` strictly, if any: every
/// candidate is tried as a one-element extension followed by closure.
fn strict_proper_extension(d: &Domination<'_>, f: &FixedBitSet) -> Option<FixedBitSet> {
    for x in 0..d.len() {
        if f.contains(x) {
            continue;
        }
        // Any filter containing F ∪ {x} contains a lower bound c of it
        // together with c's up-set.
        for c in 0..d.len() {
            let up = d.up(c);
            if up.contains(x) && f.is_subset(up) {
                let mut g = up.clone();
                g.insert(c);
                if is_proper(d, &g) && is_filter(d, &g) {
                    return Some(g);
                }
            }
        }
    }
    None
}

/// Maximal among nonempty proper filters. The empty set is a proper filter
/// vacuously and is never an ultrafilter.
pub fn is_ultrafilter(d: &Domination<'_>, f: &FixedBitSet) -> bool {
    !f.is_clear() && is_proper(d, f) && is_filter(d, f) && strict_proper_extension(d, f).is_none()
}

/// `{a} ∪ {a}^≺`.
pub fn generated(d: &Domination<'_>, a: usize) -> FixedBitSet {
    let mut g = d.up(a).clone();
    g.insert(a);
    g
}

fn keep_maximal(mut sets: Vec<FixedBitSet>) -> Vec<FixedBitSet> {
    sets.sort_by(|a, b| a.ones().cmp(b.ones()));
    sets.dedup();
    let maximal: Vec<FixedBitSet> = sets.iter().filter(|s| !sets.iter().any(|t| t != *s && s.is_subset(t))).cloned().collect();
    maximal
}

/// Ultrafilters from the sets generated by single elements: every nonempty
/// filter on a finite `S` is generated by one of its members.
pub fn enumerate_ultrafilters(d: &Domination<'_>, budget: &Budget) -> Result<Vec<FixedBitSet>, FamilyError> {
    let mut candidates = Vec::new();
    for a in 0..d.len() {
        if Some(a) == d.empty() {
            continue;
        }
        budget.spend(d.len() as u64)?;
        let g = generated(d, a);
        if is_proper(d, &g) && is_filter(d, &g) {
            candidates.push(g);
        }
    }
    Ok(keep_maximal(candidates))
}

/// Ultrafilters by enumerating every subset of `S`; only for small `S`.
pub fn enumerate_ultrafilters_oracle(d: &Domination<'_>) -> Option<Vec<FixedBitSet>> {
    let n = d.len();
    if n > ORACLE_LIMIT {
        return None;
    }
    let mut filters = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let mut f = d.new_set();
        for i in (0..n).filter(|i| mask >> i & 1 == 1) {
            f.insert(i);
        }
        if is_proper(d, &f) && is_filter(d, &f) {
            filters.push(f);
        }
    }
    Some(keep_maximal(filters))
}

/// `T^* = {s : ∃t ∈ T ∃r (t ≺_s r)}`.
pub fn star(d: &Domination<'_>, t: &FixedBitSet) -> FixedBitSet {
    let mut out = d.new_set();
    for s in 0..d.len() {
        if !d.left(s).is_disjoint(t) {
            out.insert(s);
        }
    }
    out
}

/// `(UV)^≺`, or `None` when that is not a nonempty proper filter (the
/// arrows are not composable).
pub fn filter_product(d: &Domination<'_>, u: &FixedBitSet, v: &FixedBitSet) -> Option<FixedBitSet> {
    let f = d.family();
    let mut prod = d.new_set();
    let vs: Vec<usize> = v.ones().map(|x| d.global(x)).collect();
    for a in u.ones().map(|x| d.global(x)) {
        for &b in &vs {
            prod.insert(d.local(f.mul(a, b)).expect("S is closed"));
        }
    }
    let w = up_closure(d, &prod);
    (!w.is_clear() && is_proper(d, &w) && is_filter(d, &w)).then_some(w)
}

/// `S_g = {a ∈ S : a(g) ∈ Y^×}`.
pub fn unit_map(d: &Domination<'_>, g: usize) -> FixedBitSet {
    let f = d.family();
    let y = f.y();
    let mut out = d.new_set();
    for i in 0..d.len() {
        if f.element(d.global(i)).get(g).is_some_and(|v| y.is_invertible(v)) {
            out.insert(i);
        }
    }
    out
}

/// Sorted rendered members, the external form of a filter.
pub fn render_filter(d: &Domination<'_>, u: &FixedBitSet) -> Vec<String> {
    d.family().render_set(u.ones().map(|x| d.global(x)))
}

/// The groupoid of ultrafilters and how the original arrows map onto it.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub ultrafilters: Vec<FixedBitSet>,
    /// `S_g` as an index into `ultrafilters`.
    pub arrow_map: Vec<Option<usize>>,
    /// Ultrafilter groupoid built from products and stars, when the tables
    /// satisfy the groupoid axioms.
    pub groupoid: Result<FiniteGroupoid, String>,
}

/// One row of the serialised bijection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionRow {
    pub arrow: String,
    pub ultrafilter: Option<String>,
    pub members: Vec<String>,
}

impl Reconstruction {
    pub fn bijection(&self, d: &Domination<'_>) -> Vec<BijectionRow> {
        let g = d.family().groupoid();
        (0..g.len())
            .map(|x| BijectionRow {
                arrow: g.name(x).to_string(),
                ultrafilter: self.arrow_map[x].map(|u| format!("u{u}")),
                members: render_filter(d, &unit_map(d, x)),
            })
            .collect()
    }
}

fn ultrafilter_groupoid(d: &Domination<'_>, ufs: &[FixedBitSet]) -> Result<FiniteGroupoid, String> {
    let index = |w: &FixedBitSet| ufs.iter().position(|u| u == w);
    let name = |i: usize| format!("u{i}");
    let mut raw = RawGroupoid {
        schema: GROUPOID_SCHEMA.to_string(),
        arrows: (0..ufs.len()).map(name).collect(),
        compose: Vec::new(),
        inverse: Vec::new(),
        grading: None,
    };
    for (i, u) in ufs.iter().enumerate() {
        let inv = index(&star(d, u)).ok_or_else(|| format!("star of {} is not an ultrafilter", name(i)))?;
        raw.inverse.push((name(i), name(inv)));
        for (j, v) in ufs.iter().enumerate() {
            if let Some(w) = filter_product(d, u, v) {
                let k = index(&w).ok_or_else(|| format!("product of {} and {} is not an ultrafilter", name(i), name(j)))?;
                raw.compose.push((name(i), name(j), name(k)));
            }
        }
    }
    FiniteGroupoid::validate(&raw).map_err(|e| e.to_string())
}

/// Recovers the groupoid from the ultrafilters of `S` and checks the
/// recovery theorem clause by clause.
pub fn verify_recovery(d: &Domination<'_>, budget: &Budget) -> (Report, Option<Reconstruction>) {
    let f = d.family();
    let g = f.groupoid();
    let mut r = Report::new("groupoid recovery");
    let ufs = match enumerate_ultrafilters(d, budget) {
        Ok(u) => u,
        Err(e) => {
            r.conclusion(Check::from_result("enumerate ultrafilters", Err(e)));
            return (r, None);
        }
    };
    let n = g.len();
    let count = if ufs.len() == n {
        Check::pass("ultrafilter count equals arrow count")
    } else {
        Check::fail("ultrafilter count equals arrow count", format!("{} ultrafilters, {} arrows", ufs.len(), n), vec![])
    };
    r.conclusion(count);

    let sg: Vec<FixedBitSet> = (0..n).map(|x| unit_map(d, x)).collect();
    let arrow_map: Vec<Option<usize>> = sg.iter().map(|s| ufs.iter().position(|u| u == s)).collect();
    let not_uf: Vec<String> = (0..n).filter(|&x| arrow_map[x].is_none()).map(|x| g.name(x).to_string()).collect();
    r.conclusion(if not_uf.is_empty() {
        Check::pass("each S_g is an ultrafilter")
    } else {
        Check::fail("each S_g is an ultrafilter", "not among the enumerated ultrafilters", not_uf)
    });
    let mut hit: Vec<usize> = arrow_map.iter().flatten().copied().collect();
    hit.sort_unstable();
    hit.dedup();
    r.conclusion(if hit.len() == n && n == ufs.len() {
        Check::pass("g -> S_g is a bijection")
    } else {
        Check::fail("g -> S_g is a bijection", format!("{} distinct images of {} arrows onto {}", hit.len(), n, ufs.len()), vec![])
    });

    let inv_bad = (0..n).find(|&x| star(d, &sg[x]) != sg[g.inverse(x)]);
    r.conclusion(Check::from_witness("S_{g^-1} = S_g^*", inv_bad.map(|x| g.name(x).to_string())));

    let mut prod_bad = None;
    let mut partial_bad = None;
    'pairs: for x in 0..n {
        for z in 0..n {
            let w = filter_product(d, &sg[x], &sg[z]);
            match (g.compose(x, z), w) {
                (Some(xz), Some(w)) if w == sg[xz] => {}
                (Some(_), _) => {
                    prod_bad = Some(format!("({}, {})", g.name(x), g.name(z)));
                    break 'pairs;
                }
                (None, Some(_)) => {
                    partial_bad.get_or_insert_with(|| format!("({}, {})", g.name(x), g.name(z)));
                }
                (None, None) => {}
            }
        }
    }
    r.conclusion(Check::from_witness("S_gh = (S_g S_h)^<", prod_bad));
    r.conclusion(Check::from_witness("non-composable products undefined", partial_bad));

    // basis: each ultrafilter is the only one containing all of its members
    let basis_bad = ufs.iter().enumerate().find(|(i, u)| ufs.iter().enumerate().any(|(j, v)| j != *i && u.is_subset(v)));
    r.conclusion(Check::from_witness("basis sets separate ultrafilters", basis_bad.map(|(i, _)| format!("u{i}"))));

    if let Some(c) = g.grading() {
        let bad = (0..n).find(|&x| {
            sg[x].ones().any(|i| {
                let a = d.global(i);
                f.grade(a) != Some(c.grade(x))
            })
        });
        r.conclusion(Check::from_witness("c[S_g] = {c(g)}", bad.map(|x| g.name(x).to_string())));
    }

    let groupoid = ultrafilter_groupoid(d, &ufs);
    let iso = match (&groupoid, arrow_map.iter().copied().collect::<Option<Vec<usize>>>()) {
        (Ok(u), Some(map)) => g.ungraded().check_isomorphism(u, &map).err(),
        (Err(e), _) => Some(e.clone()),
        (_, None) => Some("some S_g is not an ultrafilter".to_string()),
    };
    r.conclusion(Check::from_witness("ultrafilter groupoid isomorphic via g -> S_g", iso));
    (r, Some(Reconstruction { ultrafilters: ufs, arrow_map, groupoid }))
}
