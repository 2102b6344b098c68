//! Finite coefficient systems: semigroupoids with a partial associative
//! product, and finite rings from which semigroupoids are derived by
//! removing zero.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::CoefficientError;

pub const SEMIGROUPOID_SCHEMA: &str = "semigroupoid/v1";
pub const RING_SCHEMA: &str = "ring/v1";

const NONE: u16 = u16::MAX;

fn default_semigroupoid_schema() -> String {
    SEMIGROUPOID_SCHEMA.to_string()
}

fn default_ring_schema() -> String {
    RING_SCHEMA.to_string()
}

/// The `semigroupoid/v1` document: elements, defined products, optional unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSemigroupoid {
    #[serde(default = "default_semigroupoid_schema")]
    pub schema: String,
    pub elements: Vec<String>,
    pub product: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

/// The `ring/v1` document: square addition and multiplication tables
/// indexed by the element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRing {
    #[serde(default = "default_ring_schema")]
    pub schema: String,
    pub elements: Vec<String>,
    pub add: Vec<Vec<String>>,
    pub mul: Vec<Vec<String>>,
}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>, CoefficientError> {
    if names.is_empty() {
        return Err(CoefficientError::Empty);
    }
    if names.len() >= NONE as usize {
        return Err(CoefficientError::BadTable(format!("{} elements is too many", names.len())));
    }
    let mut index = HashMap::with_capacity(names.len());
    for (i, e) in names.iter().enumerate() {
        if index.insert(e.clone(), i).is_some() {
            return Err(CoefficientError::DuplicateElement(e.clone()));
        }
    }
    Ok(index)
}

/// A finite semigroupoid `Y`, optionally unital.
#[derive(Clone, Debug)]
pub struct Semigroupoid {
    names: Vec<String>,
    index: HashMap<String, usize>,
    table: Vec<u16>,
    unit: Option<usize>,
    inverse: Vec<Option<usize>>,
    central: Vec<bool>,
}

impl Semigroupoid {
    pub fn validate(raw: &RawSemigroupoid) -> Result<Self, CoefficientError> {
        let index = index_names(&raw.elements)?;
        let n = raw.elements.len();
        let lookup = |e: &String| index.get(e).copied().ok_or_else(|| CoefficientError::UnknownElement(e.clone()));
        let mut table = vec![NONE; n * n];
        for (y, z, yz) in &raw.product {
            let (a, b, c) = (lookup(y)?, lookup(z)?, lookup(yz)?);
            let slot = &mut table[a * n + b];
            if *slot != NONE && *slot as usize != c {
                return Err(CoefficientError::ConflictingProduct(y.clone(), z.clone()));
            }
            *slot = c as u16;
        }
        let unit = raw.unit.as_ref().map(lookup).transpose()?;
        Self::from_parts(raw.elements.clone(), index, table, unit)
    }

    /// Builds from a product function; `None` means undefined.
    pub fn from_fn(
        names: Vec<String>,
        unit: Option<usize>,
        product: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, CoefficientError> {
        let index = index_names(&names)?;
        let n = names.len();
        let mut table = vec![NONE; n * n];
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = product(a, b) {
                    table[a * n + b] = c as u16;
                }
            }
        }
        Self::from_parts(names, index, table, unit)
    }

    fn from_parts(
        names: Vec<String>,
        index: HashMap<String, usize>,
        table: Vec<u16>,
        unit: Option<usize>,
    ) -> Result<Self, CoefficientError> {
        let n = names.len();
        let mul = |a: usize, b: usize| {
            let v = table[a * n + b];
            (v != NONE).then_some(v as usize)
        };
        for x in 0..n {
            for y in 0..n {
                let xy = mul(x, y);
                for z in 0..n {
                    let left = xy.and_then(|p| mul(p, z));
                    let right = mul(y, z).and_then(|p| mul(x, p));
                    if left != right {
                        return Err(CoefficientError::Associativity(names[x].clone(), names[y].clone(), names[z].clone()));
                    }
                }
            }
        }
        if let Some(u) = unit {
            if (0..n).any(|y| mul(u, y) != Some(y) || mul(y, u) != Some(y)) {
                return Err(CoefficientError::BadUnit(names[u].clone()));
            }
        }
        let inverse = (0..n).map(|y| unit.and_then(|u| (0..n).find(|&z| mul(y, z) == Some(u) && mul(z, y) == Some(u)))).collect();
        let central = (0..n).map(|z| (0..n).all(|y| mul(y, z) == mul(z, y))).collect();
        Ok(Semigroupoid { names, index, table, unit, inverse, central })
    }

    /// The trivial coefficient system `{1}`.
    pub fn trivial() -> Self {
        Self::from_fn(vec!["1".into()], Some(0), |_, _| Some(0)).expect("trivial monoid")
    }

    pub fn to_raw(&self) -> RawSemigroupoid {
        let n = self.len();
        let mut product = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.product(a, b) {
                    product.push((self.names[a].clone(), self.names[b].clone(), self.names[c].clone()));
                }
            }
        }
        RawSemigroupoid {
            schema: SEMIGROUPOID_SCHEMA.into(),
            elements: self.names.clone(),
            product,
            unit: self.unit.map(|u| self.names[u].clone()),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, y: usize) -> &str {
        &self.names[y]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    #[inline]
    pub fn product(&self, y: usize, z: usize) -> Option<usize> {
        let v = self.table[y * self.len() + z];
        (v != NONE).then_some(v as usize)
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn is_total(&self) -> bool {
        !self.table.contains(&NONE)
    }

    /// `xy = x ⟺ y = 1 ⟺ yx = x`, with a witness pair on failure.
    pub fn one_cancellative_witness(&self) -> Option<(usize, usize)> {
        let Some(u) = self.unit else {
            return Some((0, 0));
        };
        for x in 0..self.len() {
            for y in 0..self.len() {
                let left = self.product(x, y) == Some(x);
                let right = self.product(y, x) == Some(x);
                if left != (y == u) || right != (y == u) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_one_cancellative(&self) -> bool {
        self.one_cancellative_witness().is_none()
    }

    #[inline]
    pub fn is_invertible(&self, y: usize) -> bool {
        self.inverse[y].is_some()
    }

    #[inline]
    pub fn inverse_of(&self, y: usize) -> Option<usize> {
        self.inverse[y]
    }

    /// `Y^×`.
    pub fn invertibles(&self) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.is_invertible(y)).collect()
    }

    #[inline]
    pub fn is_central(&self, y: usize) -> bool {
        self.central[y]
    }

    /// `Z(Y)`, where `yz = zy` means both sides are defined or undefined
    /// together and agree when defined.
    pub fn centre(&self) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.central[y]).collect()
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.product(y, y) == Some(y)).collect()
    }

    pub fn central_idempotents(&self) -> Vec<usize> {
        self.idempotents().into_iter().filter(|&y| self.central[y]).collect()
    }

    /// Unital with `1` the only central idempotent.
    pub fn is_indecomposable(&self) -> bool {
        match self.unit {
            Some(u) => self.central_idempotents() == vec![u],
            None => false,
        }
    }

    fn triple(&self, x: usize, y: usize, z: usize) -> Option<usize> {
        self.product(x, y).and_then(|p| self.product(p, z))
    }

    fn quasi_inverse(&self, y: usize, z_set: Option<&[bool]>) -> Option<usize> {
        (0..self.len()).find(|&w| {
            self.triple(y, w, y) == Some(y)
                && self.triple(w, y, w) == Some(w)
                && z_set.is_none_or(|z| matches!(self.product(y, w), Some(p) if z[p]) && matches!(self.product(w, y), Some(p) if z[p]))
        })
    }

    /// `Y^R`: elements with some `y'` such that `yy'y = y` and `y'yy' = y'`.
    pub fn regular_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.quasi_inverse(y, None).is_some()).collect()
    }

    /// `Y^R_Z` for a central subset `Z`.
    pub fn z_regular_elements(&self, z: &[usize]) -> Result<Vec<usize>, CoefficientError> {
        let mut member = vec![false; self.len()];
        for &c in z {
            if c >= self.len() {
                return Err(CoefficientError::UnknownElement(c.to_string()));
            }
            if !self.central[c] {
                return Err(CoefficientError::NotCentral(self.names[c].clone()));
            }
            member[c] = true;
        }
        Ok((0..self.len()).filter(|&y| self.quasi_inverse(y, Some(&member)).is_some()).collect())
    }

    /// Checks that `map` is an involutive anti-automorphism:
    /// `ι(ι(y)) = y` and `ι(yz) = ι(z)ι(y)` with matching definedness.
    pub fn check_involution(&self, map: &[usize]) -> Result<(), CoefficientError> {
        let n = self.len();
        if map.len() != n || map.iter().any(|&y| y >= n) {
            return Err(CoefficientError::NotInvolution("shape".into()));
        }
        for y in 0..n {
            if map[map[y]] != y {
                return Err(CoefficientError::NotInvolution(self.names[y].clone()));
            }
            for z in 0..n {
                if self.product(y, z).map(|p| map[p]) != self.product(map[z], map[y]) {
                    return Err(CoefficientError::NotInvolution(format!("{}·{}", self.names[y], self.names[z])));
                }
            }
        }
        Ok(())
    }
}

/// A finite unital ring given by full tables.
#[derive(Clone, Debug)]
pub struct FiniteRing {
    names: Vec<String>,
    index: HashMap<String, usize>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
}

impl FiniteRing {
    /// Checks all ring axioms on explicit tables.
    pub fn validate(raw: &RawRing) -> Result<Self, CoefficientError> {
        let index = index_names(&raw.elements)?;
        let n = raw.elements.len();
        let parse = |t: &Vec<Vec<String>>, what: &str| -> Result<Vec<u16>, CoefficientError> {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return Err(CoefficientError::BadTable(format!("{what} table is not {n}×{n}")));
            }
            t.iter().flatten().map(|e| index.get(e).map(|&i| i as u16).ok_or_else(|| CoefficientError::UnknownElement(e.clone()))).collect()
        };
        let add = parse(&raw.add, "addition")?;
        let mul = parse(&raw.mul, "multiplication")?;
        Self::from_tables(raw.elements.clone(), index, add, mul, true)
    }

    fn from_tables(
        names: Vec<String>,
        index: HashMap<String, usize>,
        add: Vec<u16>,
        mul: Vec<u16>,
        check: bool,
    ) -> Result<Self, CoefficientError> {
        let n = names.len();
        let a = |x: usize, y: usize| add[x * n + y] as usize;
        let m = |x: usize, y: usize| mul[x * n + y] as usize;
        let axiom = |axiom: &'static str, w: String| CoefficientError::RingAxiom { axiom, witness: w };
        let zero =
            (0..n).find(|&z| (0..n).all(|x| a(z, x) == x && a(x, z) == x)).ok_or_else(|| axiom("additive identity", "none".into()))?;
        let one = (0..n)
            .find(|&u| (0..n).all(|x| m(u, x) == x && m(x, u) == x))
            .ok_or_else(|| axiom("multiplicative identity", "none".into()))?;
        let mut neg = vec![0; n];
        for x in 0..n {
            neg[x] = (0..n).find(|&y| a(x, y) == zero).ok_or_else(|| axiom("additive inverse", names[x].clone()))?;
        }
        if check {
            for x in 0..n {
                for y in 0..n {
                    if a(x, y) != a(y, x) {
                        return Err(axiom("additive commutativity", format!("({}, {})", names[x], names[y])));
                    }
                    for z in 0..n {
                        let w = || format!("({}, {}, {})", names[x], names[y], names[z]);
                        if a(a(x, y), z) != a(x, a(y, z)) {
                            return Err(axiom("additive associativity", w()));
                        }
                        if m(m(x, y), z) != m(x, m(y, z)) {
                            return Err(axiom("multiplicative associativity", w()));
                        }
                        if m(x, a(y, z)) != a(m(x, y), m(x, z)) || m(a(y, z), x) != a(m(y, x), m(z, x)) {
                            return Err(axiom("distributivity", w()));
                        }
                    }
                }
            }
        }
        Ok(FiniteRing { names, index, add, mul, neg, zero, one })
    }

    fn from_fns(names: Vec<String>, add: impl Fn(usize, usize) -> usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let n = names.len();
        let index = index_names(&names).expect("generated names are distinct");
        let mut at = Vec::with_capacity(n * n);
        let mut mt = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                at.push(add(x, y) as u16);
                mt.push(mul(x, y) as u16);
            }
        }
        // generated rings are checked in the test suite, not on every build
        Self::from_tables(names, index, at, mt, false).expect("generated ring has identities")
    }

    /// `ℤ/n`.
    pub fn integers_mod(n: usize) -> Self {
        assert!(n >= 2, "ℤ/n needs n ≥ 2");
        Self::from_fns((0..n).map(|i| i.to_string()).collect(), |x, y| (x + y) % n, |x, y| (x * y) % n)
    }

    /// The field with `q` elements for `q ∈ {2,3,4,5,7,8,9}` and any other
    /// prime `q < 256`. Non-prime fields are `F_p[a]/(f)` with `f` equal to
    /// `a²+a+1`, `a³+a+1` and `a²+1` for `q = 4, 8, 9`; elements are
    /// polynomials in `a`.
    pub fn galois_field(q: usize) -> Result<Self, CoefficientError> {
        let (p, modulus): (usize, Vec<usize>) = match q {
            4 => (2, vec![1, 1, 1]),
            8 => (2, vec![1, 1, 0, 1]),
            9 => (3, vec![1, 0, 1]),
            _ if (2..256).contains(&q) && (2..q).all(|d| !q.is_multiple_of(d)) => return Ok(Self::integers_mod(q)),
            _ => return Err(CoefficientError::UnsupportedField(q)),
        };
        let k = modulus.len() - 1;
        let digits = |x: usize| (0..k).map(|i| x / p.pow(i as u32) % p).collect::<Vec<_>>();
        let encode = |d: &[usize]| d.iter().enumerate().map(|(i, c)| c * p.pow(i as u32)).sum::<usize>();
        let name = |x: usize| {
            let d = digits(x);
            let mut terms = Vec::new();
            for i in (0..k).rev() {
                let c = d[i];
                if c == 0 {
                    continue;
                }
                let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
                terms.push(match i {
                    0 => c.to_string(),
                    1 => format!("{coeff}a"),
                    _ => format!("{coeff}a^{i}"),
                });
            }
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join("+")
            }
        };
        let add = |x: usize, y: usize| {
            let (dx, dy) = (digits(x), digits(y));
            encode(&(0..k).map(|i| (dx[i] + dy[i]) % p).collect::<Vec<_>>())
        };
        let mul = |x: usize, y: usize| {
            let (dx, dy) = (digits(x), digits(y));
            let mut prod = vec![0; 2 * k - 1];
            for i in 0..k {
                for j in 0..k {
                    prod[i + j] = (prod[i + j] + dx[i] * dy[j]) % p;
                }
            }
            // reduce by the monic modulus from the top degree down
            for deg in (k..prod.len()).rev() {
                let c = prod[deg];
                if c != 0 {
                    for (i, m) in modulus.iter().enumerate() {
                        let slot = deg - k + i;
                        prod[slot] = (prod[slot] + (p - c) * m) % p;
                    }
                }
            }
            encode(&prod[..k])
        };
        Ok(Self::from_fns((0..q).map(name).collect(), add, mul))
    }

    /// `R × S` with componentwise operations, elements named `(r,s)`.
    pub fn product(&self, other: &FiniteRing) -> Self {
        let m = other.len();
        let names = (0..self.len() * m).map(|x| format!("({},{})", self.names[x / m], other.names[x % m])).collect();
        Self::from_fns(
            names,
            |x, y| self.add(x / m, y / m) * m + other.add(x % m, y % m),
            |x, y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m),
        )
    }

    /// The group ring `K[H]`, elements named by their coefficient lists
    /// `[c_h, ...]` in the order of `H`'s elements.
    pub fn group_ring(k: &FiniteRing, h: &crate::constructions::FiniteGroup) -> Self {
        let (q, m) = (k.len(), h.len());
        let size = q.pow(m as u32);
        let coeffs = |x: usize| (0..m).map(|i| x / q.pow(i as u32) % q).collect::<Vec<_>>();
        let encode = |c: &[usize]| c.iter().enumerate().map(|(i, v)| v * q.pow(i as u32)).sum::<usize>();
        let names = (0..size)
            .map(|x| {
                let c = coeffs(x);
                format!("[{}]", c.iter().map(|&v| k.names[v].as_str()).collect::<Vec<_>>().join(","))
            })
            .collect();
        // index encoding uses the ring's own element order, so remap the
        // zero of K to digit 0 when it is not already there
        assert_eq!(k.zero, 0, "group rings need the coefficient zero listed first");
        Self::from_fns(
            names,
            |x, y| {
                let (cx, cy) = (coeffs(x), coeffs(y));
                encode(&(0..m).map(|i| k.add(cx[i], cy[i])).collect::<Vec<_>>())
            },
            |x, y| {
                let (cx, cy) = (coeffs(x), coeffs(y));
                let mut out = vec![k.zero; m];
                for a in 0..m {
                    for b in 0..m {
                        let ab = h.mul(a, b);
                        out[ab] = k.add(out[ab], k.mul(cx[a], cy[b]));
                    }
                }
                encode(&out)
            },
        )
    }

    pub fn to_raw(&self) -> RawRing {
        let n = self.len();
        let table = |t: &[u16]| (0..n).map(|x| (0..n).map(|y| self.names[t[x * n + y] as usize].clone()).collect()).collect();
        RawRing { schema: RING_SCHEMA.into(), elements: self.names.clone(), add: table(&self.add), mul: table(&self.mul) }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.len() + y] as usize
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.len() + y] as usize
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    /// Units by exhaustive scan.
    pub fn units(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| (0..self.len()).any(|y| self.mul(x, y) == self.one && self.mul(y, x) == self.one)).collect()
    }

    /// Whether the ring has no zero divisors.
    pub fn is_domain(&self) -> bool {
        (0..self.len()).all(|x| x == self.zero || (0..self.len()).all(|y| y == self.zero || self.mul(x, y) != self.zero))
    }

    /// Non-zero elements in ring order.
    pub fn nonzero(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| x != self.zero).collect()
    }

    /// `Y = R ∖ {0}` with `yz` defined iff the ring product is non-zero.
    pub fn to_semigroupoid(&self) -> Semigroupoid {
        let nz = self.nonzero();
        let mut back = vec![usize::MAX; self.len()];
        for (i, &x) in nz.iter().enumerate() {
            back[x] = i;
        }
        let names = nz.iter().map(|&x| self.names[x].clone()).collect();
        Semigroupoid::from_fn(names, Some(back[self.one]), |a, b| {
            let p = self.mul(nz[a], nz[b]);
            (p != self.zero).then(|| back[p])
        })
        .expect("non-zero part of a ring is a semigroupoid")
    }
}

/// The coefficient system of a family: a semigroupoid `Y`, and when `Y`
/// came from a ring `R` (as `R ∖ {0}`), the ring with index translations.
#[derive(Clone, Debug)]
pub struct Coefficients {
    y: Semigroupoid,
    ring: Option<FiniteRing>,
    y_to_ring: Vec<usize>,
    ring_to_y: Vec<Option<usize>>,
}

impl Coefficients {
    pub fn semigroupoid(y: Semigroupoid) -> Self {
        Coefficients { y, ring: None, y_to_ring: Vec::new(), ring_to_y: Vec::new() }
    }

    pub fn ring(r: FiniteRing) -> Self {
        let y = r.to_semigroupoid();
        let y_to_ring = r.nonzero();
        let mut ring_to_y = vec![None; r.len()];
        for (i, &x) in y_to_ring.iter().enumerate() {
            ring_to_y[x] = Some(i);
        }
        Coefficients { y, ring: Some(r), y_to_ring, ring_to_y }
    }

    pub fn y(&self) -> &Semigroupoid {
        &self.y
    }

    pub fn as_ring(&self) -> Option<&FiniteRing> {
        self.ring.as_ref()
    }

    /// Ring element of a coefficient.
    #[inline]
    pub fn to_ring(&self, y: usize) -> usize {
        self.y_to_ring[y]
    }

    /// Coefficient of a ring element, `None` for zero.
    #[inline]
    pub fn from_ring(&self, x: usize) -> Option<usize> {
        self.ring_to_y[x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(y: &Semigroupoid, names: &[&str]) -> Vec<usize> {
        names.iter().map(|n| y.element(n).unwrap()).collect()
    }

    #[test]
    fn trivial_monoid() {
        let y = Semigroupoid::trivial();
        assert!(y.is_one_cancellative());
        assert_eq!(y.regular_elements(), vec![0]);
        assert_eq!(y.z_regular_elements(&[0]).unwrap(), vec![0]);
        assert!(y.is_indecomposable());
        assert_eq!(FiniteRing::galois_field(2).unwrap().to_semigroupoid().len(), 1);
    }

    #[test]
    fn integers_mod_four() {
        let r = FiniteRing::integers_mod(4);
        let y = r.to_semigroupoid();
        assert_eq!(y.len(), 3);
        let two = y.element("2").unwrap();
        assert_eq!(y.product(two, two), None);
        // oracle: ring table says 2·3 = 2
        assert_eq!(r.mul(2, 3), 2);
        assert_eq!(y.product(two, y.element("3").unwrap()), Some(two));
        assert_eq!(y.invertibles(), ids(&y, &["1", "3"]));
        assert!(y.is_indecomposable());
        assert!(!y.is_one_cancellative());
        let z: Vec<usize> = ids(&y, &["1", "3"]).into_iter().filter(|&c| y.is_central(c)).collect();
        assert_eq!(y.z_regular_elements(&z).unwrap(), y.invertibles());
    }

    #[test]
    fn idempotent_monoid_is_not_cancellative() {
        let raw = RawSemigroupoid {
            schema: SEMIGROUPOID_SCHEMA.into(),
            elements: vec!["1".into(), "a".into()],
            product: vec![
                ("1".into(), "1".into(), "1".into()),
                ("1".into(), "a".into(), "a".into()),
                ("a".into(), "1".into(), "a".into()),
                ("a".into(), "a".into(), "a".into()),
            ],
            unit: Some("1".into()),
        };
        let y = Semigroupoid::validate(&raw).unwrap();
        assert_eq!(y.one_cancellative_witness(), Some((1, 1)));
    }

    #[test]
    fn finite_fields_are_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = FiniteRing::galois_field(q).unwrap();
            FiniteRing::validate(&f.to_raw()).unwrap();
            assert_eq!(f.len(), q);
            assert_eq!(f.units().len(), q - 1, "F_{q}");
            let y = f.to_semigroupoid();
            assert!(y.is_total());
            assert_eq!(y.invertibles().len(), q - 1);
            assert!(y.is_indecomposable());
            assert!(y.is_one_cancellative());
        }
        assert!(FiniteRing::galois_field(6).is_err());
    }

    #[test]
    fn f3_is_cyclic_of_order_two() {
        let y = FiniteRing::galois_field(3).unwrap().to_semigroupoid();
        let two = y.element("2").unwrap();
        assert_eq!(y.product(two, two), y.unit());
    }

    #[test]
    fn product_ring_is_decomposable() {
        let f2 = FiniteRing::galois_field(2).unwrap();
        let r = f2.product(&f2);
        FiniteRing::validate(&r.to_raw()).unwrap();
        let y = r.to_semigroupoid();
        let e = y.element("(1,0)").unwrap();
        assert!(y.central_idempotents().contains(&e));
        assert!(!y.is_indecomposable());
    }

    #[test]
    fn group_ring_units() {
        use crate::constructions::FiniteGroup;
        let f2 = FiniteRing::galois_field(2).unwrap();
        let r = FiniteRing::group_ring(&f2, &FiniteGroup::cyclic(2));
        FiniteRing::validate(&r.to_raw()).unwrap();
        let names: Vec<&str> = r.units().iter().map(|&u| r.name(u)).collect();
        assert_eq!(names, vec!["[1,0]", "[0,1]"]);
    }

    #[test]
    fn broken_ring_is_rejected() {
        let mut raw = FiniteRing::integers_mod(3).to_raw();
        raw.mul[2][2] = "2".into();
        assert!(matches!(FiniteRing::validate(&raw), Err(CoefficientError::RingAxiom { .. })));
    }

    #[test]
    fn involution_checks() {
        let y = FiniteRing::galois_field(3).unwrap().to_semigroupoid();
        assert!(y.check_involution(&[0, 1]).is_ok());
        let z4 = FiniteRing::integers_mod(4).to_semigroupoid();
        // swapping 1 and 3 does not fix the unit
        assert!(z4.check_involution(&[2, 1, 0]).is_err());
    }
}
