//! Families of partial functions closed under a product, with the
//! designated subsets `Z ⊆ D ⊆ C`, `D ⊆ S ⊆ N` and `R ⊆ S`.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arrowset::ArrowSet;
use crate::coefficients::{Coefficients, Semigroupoid};
use crate::error::FamilyError;
use crate::function::PartialFn;
use crate::groupoid::FiniteGroupoid;
use crate::report::Budget;

/// Default element cap for generated families.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

/// Families up to this size get a full Cayley table on demand.
pub const TABLE_LIMIT: usize = 4096;

/// Upper bound on the size of a constructed Steinberg family.
pub const STEINBERG_LIMIT: usize = 1 << 21;

const UNDEFINED: u32 = u32::MAX;
const OUTSIDE: u32 = u32::MAX - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductMode {
    /// `ab` is the bisection product, defined only when one of the domains
    /// is a bisection.
    Bisection,
    /// Convolution over a ring, defined everywhere.
    Convolution,
}

/// Which designated subset an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    /// Domain in the units, values central.
    Z,
    /// Domain in the units: the diagonal.
    D,
    /// Domain a bisection.
    S,
    /// Domain in the isotropy.
    C,
    /// Domain an isosection.
    N,
    /// Domain a bisection and values invertible.
    R,
}

impl Role {
    fn bit(self) -> u8 {
        match self {
            Role::Z => 1,
            Role::D => 2,
            Role::S => 4,
            Role::C => 8,
            Role::N => 16,
            Role::R => 32,
        }
    }

    pub const ALL: [Role; 6] = [Role::Z, Role::D, Role::S, Role::C, Role::N, Role::R];
}

/// Positional encoding of all functions `G → R` (zero encoded as digit 0)
/// with arrows ordered so that each range fibre is a contiguous digit block.
#[derive(Clone, Debug)]
pub struct Radix {
    base: usize,
    pos: Vec<usize>,
    order: Vec<usize>,
    pow: Vec<usize>,
    blocks: Vec<(usize, usize)>,
}

impl Radix {
    fn new(g: &FiniteGroupoid, base: usize) -> Self {
        let mut order: Vec<usize> = (0..g.len()).collect();
        order.sort_by_key(|&x| (g.range(x), x));
        let mut pos = vec![0; g.len()];
        for (p, &x) in order.iter().enumerate() {
            pos[x] = p;
        }
        let pow = (0..=g.len()).map(|i| base.pow(i as u32)).collect();
        let mut blocks = Vec::new();
        let mut start = 0;
        while start < order.len() {
            let r = g.range(order[start]);
            let len = order[start..].iter().take_while(|&&x| g.range(x) == r).count();
            blocks.push((start, len));
            start += len;
        }
        Radix { base, pos, order, pow, blocks }
    }

    /// The function whose digits outside `block` are zero and whose digits
    /// inside it spell `value`.
    pub fn block_function(&self, block: usize, mut value: usize) -> PartialFn {
        let (start, len) = self.blocks[block];
        let mut pairs = Vec::new();
        for p in start..start + len {
            let digit = value % self.base;
            value /= self.base;
            if digit != 0 {
                pairs.push((self.order[p], digit - 1));
            }
        }
        PartialFn::from_pairs(pairs).expect("distinct arrows")
    }

    #[inline]
    pub fn encode(&self, f: &PartialFn) -> usize {
        f.iter().map(|(x, y)| (y + 1) * self.pow[self.pos[x]]).sum()
    }

    fn decode(&self, g: &FiniteGroupoid, mut id: usize) -> PartialFn {
        let mut digits = vec![0; g.len()];
        for d in digits.iter_mut() {
            *d = id % self.base;
            id /= self.base;
        }
        PartialFn::from_pairs((0..g.len()).filter(|&x| digits[self.pos[x]] != 0).map(|x| (x, digits[self.pos[x]] - 1)))
            .expect("distinct arrows")
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// `(first digit, number of digits)` of each range fibre.
    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    #[inline]
    pub fn pow(&self, i: usize) -> usize {
        self.pow[i]
    }

    /// Value of the digits of `block` in `id`.
    #[inline]
    pub fn block_value(&self, id: usize, block: usize) -> usize {
        let (start, len) = self.blocks[block];
        id / self.pow[start] % self.pow[len]
    }
}

#[derive(Clone, Debug)]
enum Lookup {
    Hash(HashMap<PartialFn, usize>),
    Radix(Radix),
}

/// A finite set `A` of partial functions on a groupoid, closed under its
/// product, with designated subsets computed on construction.
#[derive(Debug)]
pub struct FnFamily {
    groupoid: Arc<FiniteGroupoid>,
    coeffs: Arc<Coefficients>,
    mode: ProductMode,
    elements: Vec<PartialFn>,
    lookup: Lookup,
    roles: Vec<u8>,
    subsets: [Vec<usize>; 6],
    table: OnceLock<Option<Vec<u32>>>,
}

impl Clone for FnFamily {
    fn clone(&self) -> Self {
        FnFamily {
            groupoid: self.groupoid.clone(),
            coeffs: self.coeffs.clone(),
            mode: self.mode,
            elements: self.elements.clone(),
            lookup: self.lookup.clone(),
            roles: self.roles.clone(),
            subsets: self.subsets.clone(),
            table: OnceLock::new(),
        }
    }
}

fn role_index(r: Role) -> usize {
    Role::ALL.iter().position(|&x| x == r).expect("role")
}

impl FnFamily {
    fn assemble(
        groupoid: Arc<FiniteGroupoid>,
        coeffs: Arc<Coefficients>,
        mode: ProductMode,
        elements: Vec<PartialFn>,
        lookup: Lookup,
    ) -> Self {
        let g = &groupoid;
        let y = coeffs.y();
        let units = g.units();
        let iso = g.isotropy();
        let mut roles = Vec::with_capacity(elements.len());
        let mut subsets: [Vec<usize>; 6] = Default::default();
        for (i, f) in elements.iter().enumerate() {
            let dom = f.dom();
            let mut bits = 0u8;
            if dom.is_subset(units) {
                bits |= Role::D.bit();
                if f.all_values(|v| y.is_central(v)) {
                    bits |= Role::Z.bit();
                }
            }
            if g.is_bisection(dom) {
                bits |= Role::S.bit();
                if f.all_values(|v| y.is_invertible(v)) {
                    bits |= Role::R.bit();
                }
            }
            if dom.is_subset(iso) {
                bits |= Role::C.bit();
            }
            if g.is_isosection(dom) {
                bits |= Role::N.bit();
            }
            for r in Role::ALL {
                if bits & r.bit() != 0 {
                    subsets[role_index(r)].push(i);
                }
            }
            roles.push(bits);
        }
        FnFamily { groupoid, coeffs, mode, elements, lookup, roles, subsets, table: OnceLock::new() }
    }

    fn hashed(groupoid: Arc<FiniteGroupoid>, coeffs: Arc<Coefficients>, mode: ProductMode, mut elements: Vec<PartialFn>) -> Self {
        elements.sort_by(|a, b| (a.dom().len(), a).cmp(&(b.dom().len(), b)));
        let map = elements.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        Self::assemble(groupoid, coeffs, mode, elements, Lookup::Hash(map))
    }

    /// Classifies a user-supplied set `A`, checking it is closed under the
    /// product wherever the product is defined. `budget` caps the number of
    /// products examined.
    pub fn classify(
        groupoid: Arc<FiniteGroupoid>,
        coeffs: Arc<Coefficients>,
        mode: ProductMode,
        elements: Vec<PartialFn>,
        budget: &Budget,
    ) -> Result<Self, FamilyError> {
        if mode == ProductMode::Convolution && coeffs.as_ring().is_none() {
            return Err(FamilyError::NeedsRing);
        }
        let ylen = coeffs.y().len();
        let mut seen = std::collections::HashSet::new();
        for f in &elements {
            if f.dom().iter().any(|x| x >= groupoid.len()) {
                return Err(FamilyError::UnknownValue("arrow out of range".into()));
            }
            if let Some((_, v)) = f.iter().find(|&(_, v)| v >= ylen) {
                return Err(FamilyError::UnknownValue(v.to_string()));
            }
            if !seen.insert(f.clone()) {
                return Err(FamilyError::DuplicateElement(f.render(&groupoid, coeffs.y())));
            }
        }
        let fam = Self::hashed(groupoid, coeffs, mode, elements);
        fam.verify_closure(budget)?;
        Ok(fam)
    }

    /// Every product that is defined stays in the family.
    pub fn verify_closure(&self, budget: &Budget) -> Result<(), FamilyError> {
        for i in 0..self.len() {
            budget.spend(self.len() as u64)?;
            for j in 0..self.len() {
                match self.product(i, j) {
                    Ok(_) | Err(FamilyError::IllDefined(..)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    /// All functions on (homogeneous, if requested) bisections whose values
    /// pass `keep`.
    fn on_bisections(g: &FiniteGroupoid, homogeneous: bool, values: &[usize], cap: usize) -> Result<Vec<PartialFn>, FamilyError> {
        let mut out = Vec::new();
        for b in g.bisections(homogeneous) {
            let arrows: Vec<usize> = b.iter().collect();
            let count = values.len().checked_pow(arrows.len() as u32).unwrap_or(usize::MAX);
            if out.len().saturating_add(count) > cap {
                return Err(FamilyError::Truncated(cap));
            }
            let mut digits = vec![0usize; arrows.len()];
            loop {
                out.push(PartialFn::from_pairs(arrows.iter().zip(&digits).map(|(&x, &d)| (x, values[d]))).expect("distinct"));
                // odometer increment
                let mut k = 0;
                while k < digits.len() {
                    digits[k] += 1;
                    if digits[k] < values.len() {
                        break;
                    }
                    digits[k] = 0;
                    k += 1;
                }
                if k == digits.len() {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// All `Y^×`-valued functions on bisections: for `Y = {1}` the
    /// characteristic functions of bisections. Graded groupoids use
    /// homogeneous bisections only.
    pub fn canonical_bumpy(groupoid: Arc<FiniteGroupoid>, coeffs: Arc<Coefficients>) -> Result<Self, FamilyError> {
        let values = coeffs.y().invertibles();
        let homogeneous = groupoid.grading().is_some();
        let elements = Self::on_bisections(&groupoid, homogeneous, &values, DEFAULT_ELEMENT_CAP)?;
        Ok(Self::hashed(groupoid, coeffs, ProductMode::Bisection, elements))
    }

    /// All `Y`-valued functions on bisections, invertible or not.
    pub fn all_on_bisections(groupoid: Arc<FiniteGroupoid>, coeffs: Arc<Coefficients>) -> Result<Self, FamilyError> {
        let values: Vec<usize> = (0..coeffs.y().len()).collect();
        let homogeneous = groupoid.grading().is_some();
        let elements = Self::on_bisections(&groupoid, homogeneous, &values, DEFAULT_ELEMENT_CAP)?;
        Ok(Self::hashed(groupoid, coeffs, ProductMode::Bisection, elements))
    }

    /// The Steinberg algebra `R^G` under convolution, each function
    /// identified with its restriction to its support. For graded
    /// groupoids only functions supported in a single grade are kept, which
    /// is again a semigroup.
    pub fn steinberg(groupoid: Arc<FiniteGroupoid>, coeffs: Arc<Coefficients>) -> Result<Self, FamilyError> {
        let r = coeffs.as_ring().ok_or(FamilyError::NeedsRing)?;
        let base = r.len();
        let size = base.checked_pow(groupoid.len() as u32).filter(|&s| s <= STEINBERG_LIMIT);
        let Some(size) = size else {
            return Err(FamilyError::Truncated(STEINBERG_LIMIT));
        };
        if let Some(c) = groupoid.grading() {
            let mut fibres: HashMap<usize, ArrowSet> = HashMap::new();
            for x in 0..groupoid.len() {
                fibres.entry(c.grade(x)).or_default().insert(x);
            }
            let values: Vec<usize> = (0..coeffs.y().len()).collect();
            let mut elements = vec![PartialFn::empty()];
            let mut grades: Vec<_> = fibres.into_iter().collect();
            grades.sort();
            for (_, fibre) in grades {
                for support in fibre.subsets().filter(|s| !s.is_empty()) {
                    let arrows: Vec<usize> = support.iter().collect();
                    let mut digits = vec![0usize; arrows.len()];
                    loop {
                        elements.push(PartialFn::from_pairs(arrows.iter().zip(&digits).map(|(&x, &d)| (x, values[d]))).expect("distinct"));
                        let mut k = 0;
                        while k < digits.len() {
                            digits[k] += 1;
                            if digits[k] < values.len() {
                                break;
                            }
                            digits[k] = 0;
                            k += 1;
                        }
                        if k == digits.len() {
                            break;
                        }
                    }
                }
            }
            return Ok(Self::hashed(groupoid, coeffs, ProductMode::Convolution, elements));
        }
        let radix = Radix::new(&groupoid, base);
        let elements = (0..size).map(|id| radix.decode(&groupoid, id)).collect();
        Ok(Self::assemble(groupoid, coeffs, ProductMode::Convolution, elements, Lookup::Radix(radix)))
    }

    /// Closure of `generators` under the product, capped at `cap` elements.
    pub fn generate(
        groupoid: Arc<FiniteGroupoid>,
        coeffs: Arc<Coefficients>,
        mode: ProductMode,
        generators: Vec<PartialFn>,
        cap: usize,
    ) -> Result<Self, FamilyError> {
        if mode == ProductMode::Convolution && coeffs.as_ring().is_none() {
            return Err(FamilyError::NeedsRing);
        }
        let mut elements: Vec<PartialFn> = Vec::new();
        let mut index: HashMap<PartialFn, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for f in generators {
            if !index.contains_key(&f) {
                index.insert(f.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(f);
            }
        }
        while let Some(i) = queue.pop_front() {
            let mut j = 0;
            while j < elements.len() {
                for (a, b) in [(i, j), (j, i)] {
                    let p = match Self::raw_product(&groupoid, &coeffs, mode, &elements[a], &elements[b]) {
                        Ok(p) => p,
                        Err(FamilyError::IllDefined(..)) => continue,
                        Err(e) => return Err(e),
                    };
                    if !index.contains_key(&p) {
                        if elements.len() >= cap {
                            return Err(FamilyError::Truncated(cap));
                        }
                        index.insert(p.clone(), elements.len());
                        queue.push_back(elements.len());
                        elements.push(p);
                    }
                }
                j += 1;
            }
        }
        Ok(Self::hashed(groupoid, coeffs, mode, elements))
    }

    /// The sub-family on `members`, which must be closed under the product.
    /// Members that all have bisection domains give a bisection-mode family.
    pub fn restrict(&self, members: &[usize]) -> Result<Self, FamilyError> {
        let elements: Vec<PartialFn> = members.iter().map(|&i| self.elements[i].clone()).collect();
        let mode = if members.iter().all(|&i| self.has(i, Role::S)) { ProductMode::Bisection } else { self.mode };
        let fam = Self::hashed(self.groupoid.clone(), self.coeffs.clone(), mode, elements);
        fam.verify_closure(&Budget::unlimited())?;
        Ok(fam)
    }

    fn raw_product(
        g: &FiniteGroupoid,
        c: &Coefficients,
        mode: ProductMode,
        a: &PartialFn,
        b: &PartialFn,
    ) -> Result<PartialFn, FamilyError> {
        match mode {
            ProductMode::Convolution => PartialFn::convolve(g, c, a, b),
            ProductMode::Bisection => {
                if !g.is_bisection(a.dom()) && !g.is_bisection(b.dom()) {
                    return Err(FamilyError::IllDefined(usize::MAX, usize::MAX));
                }
                Ok(PartialFn::multiply_unchecked(g, c.y(), a, b))
            }
        }
    }

    /// The family's product of two arbitrary functions (not necessarily
    /// members).
    pub fn product_fn(&self, a: &PartialFn, b: &PartialFn) -> Result<PartialFn, FamilyError> {
        Self::raw_product(&self.groupoid, &self.coeffs, self.mode, a, b)
    }

    fn compute_product(&self, i: usize, j: usize) -> Result<usize, FamilyError> {
        if self.mode == ProductMode::Bisection && !self.has(i, Role::S) && !self.has(j, Role::S) {
            return Err(FamilyError::IllDefined(i, j));
        }
        let p = self.product_fn(&self.elements[i], &self.elements[j])?;
        self.index_of(&p).ok_or(FamilyError::NotClosed(i, j))
    }

    /// Index of `a·b`; errors when the product is undefined in bisection
    /// mode or leaves the family.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> Result<usize, FamilyError> {
        if let Some(Some(t)) = self.table.get() {
            return match t[i * self.len() + j] {
                UNDEFINED => Err(FamilyError::IllDefined(i, j)),
                OUTSIDE => Err(FamilyError::NotClosed(i, j)),
                v => Ok(v as usize),
            };
        }
        self.compute_product(i, j)
    }

    /// Product that must exist (both factors known to multiply inside the
    /// family, e.g. members of `S`).
    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.product(i, j).expect("product defined and inside the family")
    }

    /// Builds the Cayley table when the family is small enough; returns
    /// whether a table is available.
    pub fn cache_products(&self) -> bool {
        self.table
            .get_or_init(|| {
                let n = self.len();
                (n <= TABLE_LIMIT).then(|| {
                    let mut t = Vec::with_capacity(n * n);
                    for i in 0..n {
                        for j in 0..n {
                            t.push(match self.compute_product(i, j) {
                                Ok(v) => v as u32,
                                Err(FamilyError::IllDefined(..)) => UNDEFINED,
                                Err(_) => OUTSIDE,
                            });
                        }
                    }
                    t
                })
            })
            .is_some()
    }

    pub fn index_of(&self, f: &PartialFn) -> Option<usize> {
        match &self.lookup {
            Lookup::Hash(m) => m.get(f).copied(),
            Lookup::Radix(r) => {
                if f.iter().any(|(x, v)| x >= self.groupoid.len() || v + 1 >= r.base) {
                    return None;
                }
                Some(r.encode(f))
            }
        }
    }

    pub fn radix(&self) -> Option<&Radix> {
        match &self.lookup {
            Lookup::Radix(r) => Some(r),
            Lookup::Hash(_) => None,
        }
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn groupoid_arc(&self) -> Arc<FiniteGroupoid> {
        self.groupoid.clone()
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn coefficients_arc(&self) -> Arc<Coefficients> {
        self.coeffs.clone()
    }

    pub fn y(&self) -> &Semigroupoid {
        self.coeffs.y()
    }

    pub fn mode(&self) -> ProductMode {
        self.mode
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn element(&self, i: usize) -> &PartialFn {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[PartialFn] {
        &self.elements
    }

    #[inline]
    pub fn dom(&self, i: usize) -> ArrowSet {
        self.elements[i].dom()
    }

    /// Index of the empty function, if present.
    pub fn empty(&self) -> Option<usize> {
        self.index_of(&PartialFn::empty())
    }

    #[inline]
    pub fn has(&self, i: usize, r: Role) -> bool {
        self.roles[i] & r.bit() != 0
    }

    /// Members of a designated subset in increasing index order.
    pub fn subset(&self, r: Role) -> &[usize] {
        &self.subsets[role_index(r)]
    }

    pub fn z(&self) -> &[usize] {
        self.subset(Role::Z)
    }

    pub fn d(&self) -> &[usize] {
        self.subset(Role::D)
    }

    pub fn s(&self) -> &[usize] {
        self.subset(Role::S)
    }

    pub fn c(&self) -> &[usize] {
        self.subset(Role::C)
    }

    pub fn n(&self) -> &[usize] {
        self.subset(Role::N)
    }

    pub fn r(&self) -> &[usize] {
        self.subset(Role::R)
    }

    pub fn render(&self, i: usize) -> String {
        self.elements[i].render(&self.groupoid, self.coeffs.y())
    }

    pub fn render_set(&self, members: impl IntoIterator<Item = usize>) -> Vec<String> {
        let mut v: Vec<String> = members.into_iter().map(|i| self.render(i)).collect();
        v.sort();
        v
    }

    /// Common grade of a non-empty homogeneous domain.
    pub fn grade(&self, i: usize) -> Option<usize> {
        let c = self.groupoid.grading()?;
        let dom = self.dom(i);
        let first = dom.first()?;
        self.groupoid.is_homogeneous(dom).then(|| c.grade(first))
    }

    /// For every unit `x` and coefficient `y` some `d ∈ D` has `d(x) = y`.
    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive_witness().is_none()
    }

    /// A `(unit, coefficient)` pair no diagonal element realises.
    pub fn exhaustive_witness(&self) -> Option<(usize, usize)> {
        let mut hit = vec![false; self.groupoid.len() * self.y().len()];
        for &d in self.d() {
            for (x, v) in self.elements[d].iter() {
                hit[x * self.y().len() + v] = true;
            }
        }
        for x in self.groupoid.units().iter() {
            for v in 0..self.y().len() {
                if !hit[x * self.y().len() + v] {
                    return Some((x, v));
                }
            }
        }
        None
    }

    /// Whether `dom[Z]` separates the units.
    pub fn z_domains_are_t0(&self) -> bool {
        let doms: Vec<ArrowSet> = self.z().iter().map(|&z| self.dom(z)).collect();
        is_t0(self.groupoid.units(), &doms)
    }
}

/// The sets separate every pair of distinct points of `points`.
pub fn is_t0(points: ArrowSet, sets: &[ArrowSet]) -> bool {
    let pts: Vec<usize> = points.iter().collect();
    pts.iter().enumerate().all(|(i, &g)| pts[i + 1..].iter().all(|&h| sets.iter().any(|p| p.contains(g) != p.contains(h))))
}
