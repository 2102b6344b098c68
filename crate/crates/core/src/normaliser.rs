//! Subsets of an ambient family defined algebraically from its diagonal:
//! normalisers, commutants and centres, the set `M`, `Z`-regular elements
//! and the extraction of `R`, together with checkers for the statements
//! relating them.

use crate::arrowset::ArrowSet;
use crate::bumpy::BumpyProfile;
use crate::error::FamilyError;
use crate::family::{FnFamily, ProductMode, Role};
use crate::function::PartialFn;
use crate::report::{Budget, Check, Report};

/// `Ok(None)` when the product is ill-defined in bisection mode.
fn try_mul(f: &FnFamily, i: usize, j: usize) -> Result<Option<usize>, FamilyError> {
    match f.product(i, j) {
        Ok(p) => Ok(Some(p)),
        Err(FamilyError::IllDefined(..)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn mask(f: &FnFamily, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; f.len()];
    for &i in set {
        m[i] = true;
    }
    m
}

/// `N(E) = {a ∈ A : aE = Ea}`, comparing the two sides as sets.
pub fn normalisers(f: &FnFamily, e: &[usize], budget: &Budget) -> Result<Vec<usize>, FamilyError> {
    let mut out = Vec::new();
    let (mut left, mut right) = (Vec::with_capacity(e.len()), Vec::with_capacity(e.len()));
    for a in 0..f.len() {
        budget.spend(2 * e.len() as u64)?;
        left.clear();
        right.clear();
        for &x in e {
            left.push(f.product(a, x)?);
            right.push(f.product(x, a)?);
        }
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        if left == right {
            out.push(a);
        }
    }
    Ok(out)
}

fn commutes_with_all(f: &FnFamily, a: usize, e: &[usize], budget: &Budget) -> Result<bool, FamilyError> {
    budget.spend(2 * e.len() as u64)?;
    for &d in e {
        if f.product(a, d)? != f.product(d, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `C(E) = {a ∈ A : ad = da for all d ∈ E}`.
pub fn commutant(f: &FnFamily, e: &[usize], budget: &Budget) -> Result<Vec<usize>, FamilyError> {
    let mut out = Vec::new();
    for a in 0..f.len() {
        if commutes_with_all(f, a, e, budget)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// `Z(E) = E ∩ C(E)`.
pub fn centre_of(f: &FnFamily, e: &[usize], budget: &Budget) -> Result<Vec<usize>, FamilyError> {
    let mut out = Vec::new();
    for &a in e {
        if commutes_with_all(f, a, e, budget)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// A partner `a' ∈ X` with `aa'a = a` and `a'aa' = a'`, and with `aa'`,
/// `a'a` in `z` when given. Candidates are tried in index order.
fn regular_partner(f: &FnFamily, x: &[usize], z: Option<&[bool]>, a: usize, budget: &Budget) -> Result<Option<usize>, FamilyError> {
    budget.spend(x.len() as u64)?;
    for &b in x {
        let Some(ab) = try_mul(f, a, b)? else { continue };
        if z.is_some_and(|z| !z[ab]) {
            continue;
        }
        let Some(ba) = try_mul(f, b, a)? else { continue };
        if z.is_some_and(|z| !z[ba]) {
            continue;
        }
        if try_mul(f, ab, a)? == Some(a) && try_mul(f, ba, b)? == Some(b) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// `X^R = {a ∈ X : ∃a' ∈ X (aa'a = a, a'aa' = a')}`.
pub fn regular(f: &FnFamily, x: &[usize], budget: &Budget) -> Result<Vec<usize>, FamilyError> {
    let mut out = Vec::new();
    for &a in x {
        if regular_partner(f, x, None, a, budget)?.is_some() {
            out.push(a);
        }
    }
    Ok(out)
}

/// `X^R_Z = {a ∈ X : ∃a' ∈ X (aa', a'a ∈ Z, aa'a = a, a'aa' = a')}`.
pub fn z_regular(f: &FnFamily, x: &[usize], z: &[usize], budget: &Budget) -> Result<Vec<usize>, FamilyError> {
    let zm = mask(f, z);
    let mut out = Vec::new();
    for &a in x {
        if regular_partner(f, x, Some(&zm), a, budget)?.is_some() {
            out.push(a);
        }
    }
    Ok(out)
}

/// Pairs `(s, t)` of `S` with `st, ts ∈ Z`.
fn z_pairs(f: &FnFamily, budget: &Budget) -> Result<Vec<(usize, usize)>, FamilyError> {
    let mut pairs = Vec::new();
    for &s in f.s() {
        budget.spend(f.s().len() as u64)?;
        for &t in f.s() {
            if f.has(f.product(s, t)?, Role::Z) && f.has(f.product(t, s)?, Role::Z) {
                pairs.push((s, t));
            }
        }
    }
    Ok(pairs)
}

fn m_witness_among(f: &FnFamily, pairs: &[(usize, usize)], n: usize) -> Result<Option<(usize, usize)>, FamilyError> {
    for &(s, t) in pairs {
        let (tn, nt) = (f.product(t, n)?, f.product(n, t)?);
        if f.has(tn, Role::C) && f.has(nt, Role::C) && f.product(s, tn)? == n && f.product(nt, s)? == n {
            return Ok(Some((s, t)));
        }
    }
    Ok(None)
}

/// `M = {n ∈ N : ∃s,t ∈ S (stn = n = nts, tn, nt ∈ C, st, ts ∈ Z)}`.
pub fn compute_m(f: &FnFamily, budget: &Budget) -> Result<Vec<usize>, FamilyError> {
    let pairs = z_pairs(f, budget)?;
    let mut out = Vec::new();
    for &n in f.n() {
        budget.spend(pairs.len() as u64)?;
        if m_witness_among(f, &pairs, n)?.is_some() {
            out.push(n);
        }
    }
    Ok(out)
}

/// Bisections the compact-bisection characterisation of `M` ranges over:
/// the same ones the compact axioms quantify over.
fn candidate_bisections(f: &FnFamily) -> Vec<ArrowSet> {
    let g = f.groupoid();
    g.bisections(g.grading().is_some())
}

fn satisfies_m_conditions(f: &FnFamily, dom: ArrowSet, b: ArrowSet) -> bool {
    let g = f.groupoid();
    g.sources(dom).is_subset(g.ranges(b))
        && g.ranges(dom).is_subset(g.sources(b))
        && g.set_product(b, dom).union(g.set_product(dom, b)).is_subset(g.isotropy())
}

/// A bisection `B` with `s[dom a] ⊆ r[B]`, `r[dom a] ⊆ s[B]` and
/// `B·dom(a) ∪ dom(a)·B ⊆ G^iso`, if one exists.
pub fn m_via_compact_bisection(f: &FnFamily, a: usize) -> Option<ArrowSet> {
    let dom = f.dom(a);
    candidate_bisections(f).into_iter().find(|&b| satisfies_m_conditions(f, dom, b))
}

/// Compares `M` with its compact-bisection characterisation and, on
/// effective groupoids, with `{a : dom(a) lies in a bisection}`.
pub fn m_effective_characterisation(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("characterisations of M");
    let profile = BumpyProfile::of(f);
    r.hypothesis(Check::from_witness("S is compact-Z-bumpy", (!profile.is_compact_z_bumpy()).then(|| "see bumpy profile".to_string())));
    let m = match compute_m(f, budget) {
        Ok(m) => mask(f, &m),
        Err(e) => {
            r.conclusion(Check::from_result("M computed", Err(e)));
            return r;
        }
    };
    let bisections = candidate_bisections(f);
    let by_bisection = (0..f.len()).find(|&a| {
        let dom = f.dom(a);
        m[a] != bisections.iter().any(|&b| satisfies_m_conditions(f, dom, b))
    });
    r.conclusion(Check::from_witness("a ∈ M iff some compact bisection satisfies the M conditions", by_bisection.map(|a| f.render(a))));
    if f.groupoid().is_effective() {
        let bad = (0..f.len()).find(|&a| m[a] != bisections.iter().any(|&b| f.dom(a).is_subset(b)));
        r.conclusion(Check::from_witness("effective: M = {a : dom(a) inside a compact bisection}", bad.map(|a| f.render(a))));
    }
    r
}

/// `a* (g) = ι(a(g⁻¹))`.
pub fn star(f: &FnFamily, a: &PartialFn, iota: &[usize]) -> PartialFn {
    let g = f.groupoid();
    PartialFn::from_pairs(a.iter().map(|(x, v)| (g.inverse(x), iota[v]))).expect("inversion is injective")
}

/// `N*(D) = {a : aDa* ∪ a*Da ⊆ D}` for an involutive anti-automorphism `ι`
/// of the coefficients. A product that is ill-defined or leaves the family
/// counts as leaving `D`.
pub fn star_normalisers(f: &FnFamily, iota: &[usize], budget: &Budget) -> Result<Vec<usize>, FamilyError> {
    f.y().check_involution(iota)?;
    let units = f.groupoid().units();
    let in_d = |p: Result<PartialFn, FamilyError>| -> Result<bool, FamilyError> {
        match p {
            Ok(p) => Ok(p.dom().is_subset(units) && f.index_of(&p).is_some()),
            Err(FamilyError::IllDefined(..)) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let mut out = Vec::new();
    'outer: for a in 0..f.len() {
        budget.spend(4 * f.d().len() as u64)?;
        let af = f.element(a);
        let astar = star(f, af, iota);
        for &d in f.d() {
            let df = f.element(d);
            let ad = f.product_fn(af, df)?;
            let sd = f.product_fn(&astar, df)?;
            if !in_d(f.product_fn(&ad, &astar))? || !in_d(f.product_fn(&sd, af))? {
                continue 'outer;
            }
        }
        out.push(a);
    }
    Ok(out)
}

/// `dom(ab) ⊆ dom(a)dom(b)` for all `a, b ∈ N` whose product is defined.
pub fn domain_product_witness(f: &FnFamily, budget: &Budget) -> Result<Option<String>, FamilyError> {
    let g = f.groupoid();
    for &a in f.n() {
        budget.spend(f.n().len() as u64)?;
        for &b in f.n() {
            if let Some(p) = try_mul(f, a, b)? {
                if !f.dom(p).is_subset(g.set_product(f.dom(a), f.dom(b))) {
                    return Ok(Some(format!("({}, {})", f.render(a), f.render(b))));
                }
            }
        }
    }
    Ok(None)
}

/// `C^R_Z ⊆ S`.
pub fn isotropy_regular_witness(f: &FnFamily, budget: &Budget) -> Result<Option<String>, FamilyError> {
    let crz = z_regular(f, f.c(), f.z(), budget)?;
    Ok(crz.into_iter().find(|&a| !f.has(a, Role::S)).map(|a| f.render(a)))
}

/// `N(Z(D)^R)^R_{Z(D)}`, which equals `R` under the hypotheses of
/// [`check_r_formula`].
pub fn r_formula(f: &FnFamily, budget: &Budget) -> Result<Vec<usize>, FamilyError> {
    let zd = centre_of(f, f.d(), budget)?;
    let zdr = regular(f, &zd, budget)?;
    let n = normalisers(f, &zdr, budget)?;
    z_regular(f, &n, &zd, budget)
}

fn first_difference(f: &FnFamily, lhs: &[usize], rhs: &[usize]) -> Option<String> {
    let (l, r) = (mask(f, lhs), mask(f, rhs));
    (0..f.len()).find(|&i| l[i] != r[i]).map(|i| {
        let side = if l[i] { "only on the left" } else { "only on the right" };
        format!("{} ({side})", f.render(i))
    })
}

fn first_escape(f: &FnFamily, lhs: &[usize], rhs: &[usize]) -> Option<String> {
    let r = mask(f, rhs);
    lhs.iter().find(|&&i| !r[i]).map(|&i| f.render(i))
}

/// Runs a computation that may exhaust the budget, turning it into a check.
fn settle(name: &str, r: Result<Option<String>, FamilyError>) -> Check {
    Check::from_result(name, r)
}

fn compact_bumpy_hypothesis(f: &FnFamily) -> Check {
    let p = BumpyProfile::of(f);
    let problem = [&p.proper, &p.urysohn, &p.involutive, &p.compact_urysohn, &p.compact_involutive]
        .into_iter()
        .find(|c| !c.status.is_pass())
        .map(|c| format!("{} fails: {}", c.name, c.witnesses.join(", ")));
    Check::from_witness("S is compact-bumpy", problem)
}

fn indecomposable_hypothesis(f: &FnFamily) -> Check {
    let y = f.y();
    Check::from_witness(
        "coefficients are indecomposable",
        (!y.is_indecomposable())
            .then(|| format!("central idempotents {:?}", y.central_idempotents().iter().map(|&v| y.name(v)).collect::<Vec<_>>())),
    )
}

fn t0_hypothesis(f: &FnFamily) -> Check {
    Check::from_witness("dom[Z] is T0", (!f.z_domains_are_t0()).then(|| "two units share every Z-domain".to_string()))
}

fn exhaustive_hypothesis(f: &FnFamily) -> Check {
    let w = f.exhaustive_witness().map(|(x, v)| format!("no diagonal element takes {} at {}", f.y().name(v), f.groupoid().name(x)));
    Check::from_witness("D is exhaustive", w)
}

/// `M ⊆ N(Z) ⊆ N`, and the chain `D ⊆ C ⊆ C(Z) ⊆ N(Z)`.
pub fn check_sandwich(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("normaliser sandwich");
    r.hypothesis(t0_hypothesis(f));
    let computed = (|| -> Result<_, FamilyError> {
        let m = compute_m(f, budget)?;
        let nz = normalisers(f, f.z(), budget)?;
        let cz = commutant(f, f.z(), budget)?;
        Ok((m, nz, cz))
    })();
    let (m, nz, cz) = match computed {
        Ok(x) => x,
        Err(e) => {
            r.conclusion(settle("subsets computed", Err(e)));
            return r;
        }
    };
    r.conclusion(Check::from_witness("M ⊆ N(Z)", first_escape(f, &m, &nz)));
    r.conclusion(Check::from_witness("N(Z) ⊆ N", first_escape(f, &nz, f.n())));
    r.conclusion(Check::from_witness("D ⊆ C", first_escape(f, f.d(), f.c())));
    r.conclusion(Check::from_witness("C ⊆ C(Z)", first_escape(f, f.c(), &cz)));
    r.conclusion(Check::from_witness("C(Z) ⊆ N(Z)", first_escape(f, &cz, &nz)));
    r
}

/// `Z = Z(D)` when `D` is exhaustive.
pub fn check_ze(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("centre of the diagonal");
    r.hypothesis(exhaustive_hypothesis(f));
    r.conclusion(settle("Z = Z(D)", centre_of(f, f.d(), budget).map(|zd| first_difference(f, f.z(), &zd))));
    r
}

/// `C = C(Z)` when `dom[Z]` is T0.
pub fn check_c_commutant(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("commutant of Z");
    r.hypothesis(t0_hypothesis(f));
    r.conclusion(settle("C = C(Z)", commutant(f, f.z(), budget).map(|cz| first_difference(f, f.c(), &cz))));
    r
}

/// `M = N = S` on effective groupoids.
pub fn check_effective_identities(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("effective identities");
    r.hypothesis(Check::from_witness("G is effective", (!f.groupoid().is_effective()).then(|| "non-trivial isotropy".to_string())));
    let profile = BumpyProfile::of(f);
    r.hypothesis(Check::from_witness("S is compact-Z-bumpy", (!profile.is_compact_z_bumpy()).then(|| "see bumpy profile".to_string())));
    r.conclusion(Check::from_witness("N = S", first_difference(f, f.n(), f.s())));
    r.conclusion(settle("M = N", compute_m(f, budget).map(|m| first_difference(f, &m, f.n()))));
    r
}

/// `R = S^R_Z` on compact-bumpy families.
pub fn check_rzs(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("R is the Z-regular part of S");
    r.hypothesis(compact_bumpy_hypothesis(f));
    r.hypothesis(indecomposable_hypothesis(f));
    r.conclusion(settle("R = S^R_Z", z_regular(f, f.s(), f.z(), budget).map(|srz| first_difference(f, f.r(), &srz))));
    r
}

/// `C^R_Z ⊆ S ⟹ N^R_Z ⊆ S`, with the implication's premise as a
/// hypothesis.
pub fn check_rzc(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("Z-regular normalisers lie in S");
    r.hypothesis(compact_bumpy_hypothesis(f));
    r.hypothesis(indecomposable_hypothesis(f));
    r.hypothesis(settle("dom(ab) ⊆ dom(a)dom(b) on N", domain_product_witness(f, budget)));
    r.hypothesis(settle("C^R_Z ⊆ S", isotropy_regular_witness(f, budget)));
    if r.hypotheses_hold() {
        r.conclusion(settle("N^R_Z ⊆ S", z_regular(f, f.n(), f.z(), budget).map(|nrz| first_escape(f, &nrz, f.s()))));
    }
    r
}

/// `R = N(Z(D)^R)^R_{Z(D)}` under compact-bumpiness, exhaustiveness,
/// the domain-product condition and `C^R_Z ⊆ S`.
pub fn check_r_formula(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("R from the diagonal");
    r.hypothesis(compact_bumpy_hypothesis(f));
    r.hypothesis(indecomposable_hypothesis(f));
    r.hypothesis(exhaustive_hypothesis(f));
    r.hypothesis(settle("dom(ab) ⊆ dom(a)dom(b) on N", domain_product_witness(f, budget)));
    r.hypothesis(settle("C^R_Z ⊆ S", isotropy_regular_witness(f, budget)));
    if r.hypotheses_hold() {
        r.conclusion(settle("R = N(Z(D)^R)^R_Z(D)", r_formula(f, budget).map(|rf| first_difference(f, f.r(), &rf))));
    }
    r
}

/// Restrictions of `C` and `S` to the isotropy group `H_x` at a unit, and
/// the invertible elements of `C_x`.
#[derive(Clone, Debug)]
pub struct IsotropyFibre {
    pub unit: usize,
    pub h: ArrowSet,
    pub c_x: Vec<PartialFn>,
    pub s_x: Vec<PartialFn>,
    pub units: Vec<PartialFn>,
}

impl IsotropyFibre {
    /// Units supported on more than one arrow.
    pub fn nontrivial_units(&self) -> impl Iterator<Item = &PartialFn> {
        self.units.iter().filter(|u| u.dom().len() != 1)
    }

    /// `C_x^× ⊆ S_x`.
    pub fn units_in_s_x(&self) -> bool {
        self.units.iter().all(|u| self.s_x.binary_search(u).is_ok())
    }
}

fn restrictions(f: &FnFamily, set: &[usize], h: ArrowSet) -> Vec<PartialFn> {
    let mut v: Vec<PartialFn> = set.iter().map(|&i| f.element(i).restrict(h)).collect();
    v.sort();
    v.dedup();
    v
}

/// `C_x`, `S_x` and `C_x^×` at the unit `x`, the unit group found by
/// brute force over `C_x × C_x`.
pub fn isotropy_fibre_data(f: &FnFamily, x: usize, budget: &Budget) -> Result<IsotropyFibre, FamilyError> {
    let h = f.groupoid().interior_isotropy_group(x)?.arrows;
    let c_x = restrictions(f, f.c(), h);
    let s_x = restrictions(f, f.s(), h);
    let mut units = Vec::new();
    if let Some(one) = f.y().unit() {
        let e = PartialFn::constant(ArrowSet::singleton(x), one);
        let times = |a: &PartialFn, b: &PartialFn| match f.product_fn(a, b) {
            Ok(p) => Ok(Some(p)),
            Err(FamilyError::IllDefined(..)) => Ok(None),
            Err(e) => Err(e),
        };
        for u in &c_x {
            budget.spend(c_x.len() as u64)?;
            for v in &c_x {
                if times(u, v)?.as_ref() == Some(&e) && times(v, u)?.as_ref() == Some(&e) {
                    units.push(u.clone());
                    break;
                }
            }
        }
    }
    Ok(IsotropyFibre { unit: x, h, c_x, s_x, units })
}

/// Per-unit values of the checkable links in the chain leading to
/// `C^R_Z ⊆ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreLinks {
    pub unit: String,
    pub trivial_group: bool,
    pub no_nontrivial_units: bool,
    pub units_in_s_x: bool,
    pub nontrivial_unit: Option<String>,
}

/// The isotropy chain on one family: per-unit link values, the aggregated
/// verdict, the direct evaluation of `C^R_Z ⊆ S`, and a report checking
/// each implication of the chain.
#[derive(Clone, Debug)]
pub struct IsotropyChain {
    pub fibres: Vec<FibreLinks>,
    pub chain_verdict: bool,
    pub direct: Option<bool>,
    pub report: Report,
}

/// Evaluates effectiveness, triviality of units and `C_x^× ⊆ S_x` at every
/// unit, and checks that each implies the next and finally `C^R_Z ⊆ S`.
/// The implications are asserted for convolution families whose isotropy
/// algebras are full group rings.
pub fn steinberg_hypothesis(f: &FnFamily, budget: &Budget) -> IsotropyChain {
    let g = f.groupoid();
    let mut report = Report::new("isotropy chain");
    let full = f.mode() == ProductMode::Convolution
        && f.coefficients().as_ring().is_some_and(|k| {
            g.units().iter().all(|x| {
                let h = g.interior_isotropy_group(x).expect("unit").arrows;
                let expected = (k.len() as u128).checked_pow(h.len() as u32);
                expected == Some(restrictions(f, f.c(), h).len() as u128)
            })
        });
    report.hypothesis(Check::from_witness(
        "isotropy algebras are full group rings",
        (!full).then(|| "not a convolution family over all functions on the isotropy".to_string()),
    ));
    let mut fibres = Vec::new();
    for x in g.units().iter() {
        let data = match isotropy_fibre_data(f, x, budget) {
            Ok(d) => d,
            Err(e) => {
                report.conclusion(settle("unit groups computed", Err(e)));
                return IsotropyChain { fibres, chain_verdict: false, direct: None, report };
            }
        };
        fibres.push(FibreLinks {
            unit: g.name(x).to_string(),
            trivial_group: data.h.len() == 1,
            no_nontrivial_units: data.nontrivial_units().next().is_none(),
            units_in_s_x: data.units_in_s_x(),
            nontrivial_unit: data.nontrivial_units().next().map(|u| u.render(g, f.y())),
        });
    }
    let chain_verdict = fibres.iter().all(|l| l.units_in_s_x);
    let direct = isotropy_regular_witness(f, budget).ok().map(|w| w.is_none());
    let first = |p: &dyn Fn(&FibreLinks) -> bool| fibres.iter().find(|l| p(l)).map(|l| l.unit.clone());
    report.conclusion(Check::from_witness(
        "effective implies trivial isotropy groups",
        if g.is_effective() { first(&|l| !l.trivial_group) } else { None },
    ));
    report.conclusion(Check::from_witness(
        "trivial isotropy group implies no non-trivial units",
        first(&|l| l.trivial_group && !l.no_nontrivial_units),
    ));
    report
        .conclusion(Check::from_witness("no non-trivial units implies units in S_x", first(&|l| l.no_nontrivial_units && !l.units_in_s_x)));
    report.conclusion(match direct {
        None => Check::unverified("units in S_x everywhere implies C^R_Z ⊆ S", "budget exhausted"),
        Some(d) => Check::from_witness(
            "units in S_x everywhere implies C^R_Z ⊆ S",
            (chain_verdict && !d).then(|| "chain holds but C^R_Z escapes S".to_string()),
        ),
    });
    IsotropyChain { fibres, chain_verdict, direct, report }
}
