//! Coefficient-valued partial functions on the arrows of a groupoid.

use std::fmt::Write as _;

use crate::arrowset::ArrowSet;
use crate::coefficients::{Coefficients, FiniteRing, Semigroupoid};
use crate::error::{FamilyError, IllDefinedProduct};
use crate::groupoid::FiniteGroupoid;

/// A partial function from arrows to coefficients. Values are stored in
/// increasing arrow order, so equal functions have equal representations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialFn {
    dom: ArrowSet,
    values: Vec<u16>,
}

impl PartialFn {
    /// The empty function.
    pub fn empty() -> Self {
        PartialFn::default()
    }

    /// From `(arrow, coefficient)` pairs; fails on a repeated arrow.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, usize> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        let mut dom = ArrowSet::EMPTY;
        for &(g, _) in &pairs {
            if dom.contains(g) {
                return Err(g);
            }
            dom.insert(g);
        }
        Ok(PartialFn { dom, values: pairs.into_iter().map(|(_, y)| y as u16).collect() })
    }

    /// The constant function with value `y` on `dom`.
    pub fn constant(dom: ArrowSet, y: usize) -> Self {
        PartialFn { dom, values: vec![y as u16; dom.len()] }
    }

    #[inline]
    pub fn dom(&self) -> ArrowSet {
        self.dom
    }

    pub fn is_empty(&self) -> bool {
        self.dom.is_empty()
    }

    #[inline]
    pub fn get(&self, g: usize) -> Option<usize> {
        self.dom.contains(g).then(|| self.values[self.dom.rank(g)] as usize)
    }

    /// `(arrow, value)` pairs in increasing arrow order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.dom.iter().zip(self.values.iter().map(|&y| y as usize))
    }

    /// `[W]a`: arrows whose value satisfies `pred`.
    pub fn preimage(&self, pred: impl Fn(usize) -> bool) -> ArrowSet {
        self.iter().filter(|&(_, y)| pred(y)).map(|(g, _)| g).collect()
    }

    /// `[Y^×]a`.
    pub fn invertible_part(&self, y: &Semigroupoid) -> ArrowSet {
        self.preimage(|v| y.is_invertible(v))
    }

    /// `[1]a`.
    pub fn ones(&self, y: &Semigroupoid) -> ArrowSet {
        match y.unit() {
            Some(u) => self.preimage(|v| v == u),
            None => ArrowSet::EMPTY,
        }
    }

    /// Whether every value satisfies `pred`.
    pub fn all_values(&self, pred: impl Fn(usize) -> bool) -> bool {
        self.values.iter().all(|&v| pred(v as usize))
    }

    pub fn restrict(&self, u: ArrowSet) -> Self {
        PartialFn::from_pairs(self.iter().filter(|&(g, _)| u.contains(g))).expect("restriction of a function")
    }

    /// The bisection product `ab(gh) = a(g)b(h)`, defined when at least one
    /// domain is a bisection. Pairs whose coefficient product is undefined
    /// are dropped, so `dom(ab) ⊆ dom(a)dom(b)`.
    pub fn multiply(g: &FiniteGroupoid, y: &Semigroupoid, a: &PartialFn, b: &PartialFn) -> Result<PartialFn, IllDefinedProduct> {
        if !g.is_bisection(a.dom) && !g.is_bisection(b.dom) {
            return Err(IllDefinedProduct);
        }
        Ok(Self::multiply_unchecked(g, y, a, b))
    }

    /// The pointwise product formula without the bisection check. With
    /// neither domain a bisection two pairs may land on the same arrow;
    /// the first one (in arrow order of the left factor) wins.
    pub fn multiply_unchecked(g: &FiniteGroupoid, y: &Semigroupoid, a: &PartialFn, b: &PartialFn) -> PartialFn {
        let mut out: Vec<(usize, usize)> = Vec::new();
        let mut seen = ArrowSet::EMPTY;
        for (x, ax) in a.iter() {
            for (z, bz) in b.iter().filter(|&(z, _)| g.right_composable(x).contains(z)) {
                let xz = g.compose(x, z).expect("composable");
                if seen.contains(xz) {
                    continue;
                }
                if let Some(v) = y.product(ax, bz) {
                    seen.insert(xz);
                    out.push((xz, v));
                }
            }
        }
        PartialFn::from_pairs(out).expect("distinct arrows")
    }

    /// Convolution `ab(f) = Σ_{f=gh} a(g)b(h)` of the ring-valued functions
    /// whose supports are `a` and `b`, restricted back to its support.
    pub fn convolve(g: &FiniteGroupoid, c: &Coefficients, a: &PartialFn, b: &PartialFn) -> Result<PartialFn, FamilyError> {
        let r = c.as_ring().ok_or(FamilyError::NeedsRing)?;
        let mut acc = vec![r.zero(); g.len()];
        let mut touched = ArrowSet::EMPTY;
        for (x, ax) in a.iter() {
            let rx = c.to_ring(ax);
            for (z, bz) in b.iter().filter(|&(z, _)| g.right_composable(x).contains(z)) {
                let xz = g.compose(x, z).expect("composable");
                acc[xz] = r.add(acc[xz], r.mul(rx, c.to_ring(bz)));
                touched.insert(xz);
            }
        }
        Ok(PartialFn::from_pairs(touched.iter().filter_map(|f| c.from_ring(acc[f]).map(|v| (f, v)))).expect("distinct arrows"))
    }

    /// Renders as `{name:value,...}` with arrows sorted by name; the
    /// canonical external identifier of a function.
    pub fn render(&self, g: &FiniteGroupoid, y: &Semigroupoid) -> String {
        let mut pairs: Vec<(&str, &str)> = self.iter().map(|(x, v)| (g.name(x), y.name(v))).collect();
        pairs.sort_unstable();
        let mut s = String::from("{");
        for (i, (x, v)) in pairs.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{x}:{v}");
        }
        s.push('}');
        s
    }
}

/// Convolution of total ring-valued functions on arrows (`a[g]` is a ring
/// element index).
pub fn convolve_total(g: &FiniteGroupoid, r: &FiniteRing, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![r.zero(); g.len()];
    for x in 0..g.len() {
        for z in g.right_composable(x).iter() {
            let f = g.compose(x, z).expect("composable");
            out[f] = r.add(out[f], r.mul(a[x], b[z]));
        }
    }
    out
}

/// `a|supp(a)` as a partial function into `R ∖ {0}`.
pub fn support_restrict(c: &Coefficients, a: &[usize]) -> PartialFn {
    PartialFn::from_pairs(a.iter().enumerate().filter_map(|(g, &x)| c.from_ring(x).map(|v| (g, v)))).expect("distinct arrows")
}

/// The total function whose support restriction is `a`.
pub fn extend_by_zero(g: &FiniteGroupoid, c: &Coefficients, a: &PartialFn) -> Vec<usize> {
    let r = c.as_ring().expect("ring coefficients");
    let mut out = vec![r.zero(); g.len()];
    for (x, v) in a.iter() {
        out[x] = c.to_ring(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{group, pair, FiniteGroup};

    #[test]
    fn empty_function_absorbs() {
        let g = pair(2);
        let y = Semigroupoid::trivial();
        let a = PartialFn::constant(ArrowSet::singleton(1), 0);
        let e = PartialFn::empty();
        assert_eq!(PartialFn::multiply(&g, &y, &a, &e).unwrap(), e);
        assert_eq!(PartialFn::multiply(&g, &y, &e, &a).unwrap(), e);
    }

    #[test]
    fn characteristic_functions_multiply_like_sets() {
        let g = pair(2);
        let y = Semigroupoid::trivial();
        let bis = g.bisections(false);
        for &u in &bis {
            for &v in &bis {
                let ab = PartialFn::multiply(&g, &y, &PartialFn::constant(u, 0), &PartialFn::constant(v, 0)).unwrap();
                assert_eq!(ab, PartialFn::constant(g.set_product(u, v), 0));
            }
        }
    }

    #[test]
    fn non_bisection_product_is_ill_defined() {
        let g = group(&FiniteGroup::cyclic(2));
        let y = Semigroupoid::trivial();
        let all = PartialFn::constant(g.all(), 0);
        assert_eq!(PartialFn::multiply(&g, &y, &all, &all), Err(IllDefinedProduct));
    }

    #[test]
    fn zero_divisors_shrink_domains() {
        let g = group(&FiniteGroup::cyclic(2));
        let c = Coefficients::ring(FiniteRing::integers_mod(4));
        let two = c.y().element("2").unwrap();
        let a = PartialFn::from_pairs([(1, two)]).unwrap();
        let ab = PartialFn::multiply(&g, c.y(), &a, &a).unwrap();
        assert!(ab.is_empty());
        assert_eq!(g.set_product(a.dom(), a.dom()).len(), 1);
        assert!(PartialFn::convolve(&g, &c, &a, &a).unwrap().is_empty());
        // oracle: direct sum over the single factorisation 0 = 1·1
        let r = c.as_ring().unwrap();
        assert_eq!(r.mul(c.to_ring(two), c.to_ring(two)), r.zero());
    }

    #[test]
    fn unit_characteristic_function_is_idempotent() {
        let g = pair(2);
        let r = FiniteRing::galois_field(3).unwrap();
        let chi: Vec<usize> = (0..4).map(|x| if g.is_unit(x) { r.one() } else { r.zero() }).collect();
        assert_eq!(convolve_total(&g, &r, &chi, &chi), chi);
    }

    #[test]
    fn rendering_sorts_by_name() {
        let g = pair(2);
        let y = Semigroupoid::trivial();
        let a = PartialFn::constant(g.units(), 0);
        assert_eq!(a.render(&g, &y), "{(1,1):1,(2,2):1}");
        assert_eq!(PartialFn::empty().render(&g, &y), "{}");
    }
}
