//! Standard finite groupoids: groups, pair groupoids, transformation
//! groupoids, group bundles and disjoint unions.
//!
//! Conventions: the pair groupoid on `{1..n}` has arrows `(i,j)` with
//! `s(i,j) = (j,j)`, `r(i,j) = (i,i)` and `(i,j)(j,k) = (i,k)`. The
//! transformation groupoid of `H` acting on `X` has arrows `(h,x)` with
//! `s(h,x) = (e,x)`, `r(h,x) = (e,h·x)`, `(h,k·x)(k,x) = (hk,x)` and
//! `(h,x)⁻¹ = (h⁻¹,h·x)`.

use crate::error::GroupoidError;
use crate::groupoid::{FiniteGroupoid, RawGroupoid, GROUPOID_SCHEMA};

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates group axioms on an explicit table (`table[i][j] = i·j`).
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        let n = names.len();
        let bad = |m: &str| GroupoidError::BadParameters(m.to_string());
        if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(bad("group table has wrong shape"));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| flat[a * n + b];
        let identity = (0..n).find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a)).ok_or_else(|| bad("group has no identity"))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] =
                (0..n).find(|&b| mul(a, b) == identity && mul(b, a) == identity).ok_or_else(|| bad("group element without inverse"))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(bad("group table is not associative"));
                    }
                }
            }
        }
        Ok(FiniteGroup { names, table: flat, identity, inverse })
    }

    /// The cyclic group `ℤ/n` with elements named `0..n-1`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(names, table).expect("cyclic table is a group")
    }

    /// Direct product, elements named `(a,b)`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.len(), other.len());
        let mut names = Vec::with_capacity(n * m);
        for a in 0..n {
            for b in 0..m {
                names.push(format!("({},{})", self.names[a], other.names[b]));
            }
        }
        let table = (0..n * m).map(|x| (0..n * m).map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m)).collect()).collect();
        Self::from_table(names, table).expect("product of groups is a group")
    }

    /// The subgroup of `Sym(k)` generated by the given permutations (in
    /// one-line notation over `0..k`); elements are named by their 1-based
    /// one-line notation, identity first.
    pub fn permutations(k: usize, generators: &[Vec<usize>]) -> Self {
        let id: Vec<usize> = (0..k).collect();
        let mut elems = vec![id.clone()];
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                // composition "g after elems[i]"
                let p: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !elems.contains(&p) {
                    elems.push(p);
                }
            }
            i += 1;
        }
        elems[1..].sort();
        let name = |p: &[usize]| p.iter().map(|x| (x + 1).to_string()).collect::<String>();
        let names = elems.iter().map(|p| name(p)).collect();
        let table = elems
            .iter()
            .map(|p| {
                elems
                    .iter()
                    .map(|q| {
                        // (p·q)(x) = p(q(x))
                        let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                        elems.iter().position(|e| *e == pq).expect("closed")
                    })
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("permutation group")
    }

    pub fn klein_four() -> Self {
        Self::cyclic(2).product(&Self::cyclic(2))
    }

    pub fn symmetric3() -> Self {
        Self::permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    /// The symmetries of a square, order 8.
    pub fn dihedral4() -> Self {
        Self::permutations(4, &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len() + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Sign of a permutation group element, from its one-line name.
    pub fn permutation_sign(&self, a: usize) -> Option<bool> {
        let digits: Vec<u32> = self.names[a].chars().map(|c| c.to_digit(10)).collect::<Option<_>>()?;
        let mut inversions = 0;
        for i in 0..digits.len() {
            for j in i + 1..digits.len() {
                if digits[i] > digits[j] {
                    inversions += 1;
                }
            }
        }
        Some(inversions % 2 == 0)
    }
}

fn build(arrows: Vec<String>, compose: Vec<(String, String, String)>, inverse: Vec<(String, String)>) -> FiniteGroupoid {
    let raw = RawGroupoid { schema: GROUPOID_SCHEMA.to_string(), arrows, compose, inverse, grading: None };
    FiniteGroupoid::validate(&raw).expect("standard construction is a groupoid")
}

/// The arrow map `(i,j) ↦ (π(i),π(j))` of `pair(n)` induced by a
/// permutation `π` of the points (0-based).
pub fn pair_relabelling(n: usize, perm: &[usize]) -> Vec<usize> {
    assert_eq!(perm.len(), n, "permutation of the wrong size");
    let g = pair(n);
    (0..g.len())
        .map(|a| {
            let (i, j) = (a / n, a % n);
            g.arrow(&format!("({},{})", perm[i] + 1, perm[j] + 1)).expect("pair arrow")
        })
        .collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A group as a one-unit groupoid; arrows carry the group's element names.
pub fn group(h: &FiniteGroup) -> FiniteGroupoid {
    let n = h.len();
    let mut compose = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            compose.push((h.names[a].clone(), h.names[b].clone(), h.names[h.mul(a, b)].clone()));
        }
    }
    let inverse = (0..n).map(|a| (h.names[a].clone(), h.names[h.inverse(a)].clone())).collect();
    build(h.names.clone(), compose, inverse)
}

/// The pair groupoid `{1..n}²`.
pub fn pair(n: usize) -> FiniteGroupoid {
    assert!(n > 0, "pair groupoid on the empty set");
    let name = |i: usize, j: usize| format!("({},{})", i + 1, j + 1);
    let mut arrows = Vec::with_capacity(n * n);
    let mut compose = Vec::new();
    let mut inverse = Vec::new();
    for i in 0..n {
        for j in 0..n {
            arrows.push(name(i, j));
            inverse.push((name(i, j), name(j, i)));
            for k in 0..n {
                compose.push((name(i, j), name(j, k), name(i, k)));
            }
        }
    }
    build(arrows, compose, inverse)
}

/// The transformation groupoid of `h` acting on points `1..=points`,
/// where `action[g][x]` is the image of point `x` under `g` (0-based).
pub fn transformation(h: &FiniteGroup, points: usize, action: &[Vec<usize>]) -> Result<FiniteGroupoid, GroupoidError> {
    let bad = |m: &str| GroupoidError::BadParameters(m.to_string());
    if points == 0 || action.len() != h.len() || action.iter().any(|row| row.len() != points || row.iter().any(|&y| y >= points)) {
        return Err(bad("action table has wrong shape"));
    }
    for x in 0..points {
        if action[h.identity()][x] != x {
            return Err(bad("identity does not act trivially"));
        }
        for a in 0..h.len() {
            for b in 0..h.len() {
                if action[h.mul(a, b)][x] != action[a][action[b][x]] {
                    return Err(bad("action table is not an action"));
                }
            }
        }
    }
    let name = |a: usize, x: usize| format!("({},{})", h.names[a], x + 1);
    let mut arrows = Vec::new();
    let mut compose = Vec::new();
    let mut inverse = Vec::new();
    for a in 0..h.len() {
        for x in 0..points {
            arrows.push(name(a, x));
            inverse.push((name(a, x), name(h.inverse(a), action[a][x])));
            // (b, a·x)(a, x) = (ba, x)
            for b in 0..h.len() {
                compose.push((name(b, action[a][x]), name(a, x), name(h.mul(b, a), x)));
            }
        }
    }
    Ok(build(arrows, compose, inverse))
}

/// Disjoint union of groups over points `1..`, arrows named `x:h`.
pub fn group_bundle(fibres: &[FiniteGroup]) -> FiniteGroupoid {
    assert!(!fibres.is_empty(), "group bundle over no points");
    let mut arrows = Vec::new();
    let mut compose = Vec::new();
    let mut inverse = Vec::new();
    for (x, h) in fibres.iter().enumerate() {
        let name = |a: usize| format!("{}:{}", x + 1, h.names[a]);
        for a in 0..h.len() {
            arrows.push(name(a));
            inverse.push((name(a), name(h.inverse(a))));
            for b in 0..h.len() {
                compose.push((name(a), name(b), name(h.mul(a, b))));
            }
        }
    }
    build(arrows, compose, inverse)
}

/// Disjoint union; arrows of the `i`-th part (1-based) are named `i:name`.
pub fn disjoint_union(parts: &[FiniteGroupoid]) -> FiniteGroupoid {
    assert!(!parts.is_empty(), "empty disjoint union");
    let mut arrows = Vec::new();
    let mut compose = Vec::new();
    let mut inverse = Vec::new();
    for (i, g) in parts.iter().enumerate() {
        let name = |a: usize| format!("{}:{}", i + 1, g.name(a));
        for a in 0..g.len() {
            arrows.push(name(a));
            inverse.push((name(a), name(g.inverse(a))));
            for b in g.right_composable(a).iter() {
                compose.push((name(a), name(b), name(g.compose(a, b).expect("composable"))));
            }
        }
    }
    build(arrows, compose, inverse)
}

/// The one-arrow groupoid.
pub fn unit_groupoid() -> FiniteGroupoid {
    group(&FiniteGroup::cyclic(1))
}

/// `n` units and nothing else.
pub fn discrete_units(n: usize) -> FiniteGroupoid {
    group_bundle(&vec![FiniteGroup::cyclic(1); n])
}

/// The pair groupoid graded by `ℤ/m` via `(i,j) ↦ i - j mod m`.
pub fn graded_pair(n: usize, m: usize) -> FiniteGroupoid {
    let g = pair(n);
    let map = (0..g.len())
        .map(|a| {
            let (i, j) = (a / n, a % n);
            (i + m * n - j) % m
        })
        .collect();
    g.with_grading(group(&FiniteGroup::cyclic(m)), map).expect("difference grading is a functor")
}

/// `ℤ/n` acting on `n` points by rotation, graded by the group coordinate.
pub fn graded_rotation(n: usize) -> FiniteGroupoid {
    let h = FiniteGroup::cyclic(n);
    let action: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|x| (x + a) % n).collect()).collect();
    let g = transformation(&h, n, &action).expect("rotation is an action");
    let map = (0..g.len()).map(|arrow| arrow / n).collect();
    g.with_grading(group(&h), map).expect("group coordinate is a functor")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrowset::ArrowSet;

    #[test]
    fn pair_two_has_four_arrows_two_units() {
        let p = pair(2);
        assert_eq!(p.len(), 4);
        assert_eq!(p.units().len(), 2);
        assert!(p.is_effective());
        let expected: ArrowSet = ["(1,1)", "(2,2)"].iter().map(|s| p.arrow(s).unwrap()).collect();
        assert_eq!(p.isotropy(), expected);
    }

    #[test]
    fn swap_action_is_pair_groupoid() {
        let h = FiniteGroup::cyclic(2);
        let t = transformation(&h, 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(t.is_effective());
        let map = t.find_isomorphism(&pair(2)).expect("isomorphic");
        assert!(t.check_isomorphism(&pair(2), &map).is_ok());
    }

    #[test]
    fn transformation_conventions() {
        let h = FiniteGroup::cyclic(3);
        let action: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|x| (x + a) % 3).collect()).collect();
        let t = transformation(&h, 3, &action).unwrap();
        let g = t.arrow("(1,1)").unwrap();
        assert_eq!(t.name(t.source(g)), "(0,1)");
        assert_eq!(t.name(t.range(g)), "(0,2)");
        assert_eq!(t.name(t.inverse(g)), "(2,2)");
    }

    #[test]
    fn non_action_is_rejected() {
        let h = FiniteGroup::cyclic(3);
        let err = transformation(&h, 2, &[vec![0, 1], vec![1, 0], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, GroupoidError::BadParameters(_)));
    }

    #[test]
    fn union_of_pair_and_group() {
        let u = disjoint_union(&[pair(2), group(&FiniteGroup::cyclic(2))]);
        assert_eq!(u.len(), 6);
        assert_eq!(u.units().len(), 3);
        assert!(!u.is_effective());
        // oracle: isotropy scan by hand
        let iso: Vec<&str> = u.isotropy().iter().map(|g| u.name(g)).collect();
        assert_eq!(iso, vec!["1:(1,1)", "1:(2,2)", "2:0", "2:1"]);
    }

    #[test]
    fn bundle_isotropy_differs_per_point() {
        let b = group_bundle(&[FiniteGroup::cyclic(2), FiniteGroup::cyclic(1)]);
        let sizes: Vec<usize> = b.units().iter().map(|x| b.interior_isotropy_group(x).unwrap().arrows.len()).collect();
        assert_eq!(sizes, vec![2, 1]);
    }

    #[test]
    fn small_groups_have_expected_orders() {
        assert_eq!(FiniteGroup::symmetric3().len(), 6);
        assert_eq!(FiniteGroup::dihedral4().len(), 8);
        assert_eq!(FiniteGroup::klein_four().len(), 4);
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.name(s3.identity()), "123");
        let odd = (0..6).filter(|&a| s3.permutation_sign(a) == Some(false)).count();
        assert_eq!(odd, 3);
    }

    #[test]
    fn gradings() {
        let g = graded_pair(2, 2);
        assert!(g.grading().is_some());
        let p = pair(2);
        let map: Vec<usize> = (0..4).map(|a| (a / 2 + 2 - a % 2) % 2).collect();
        // composable pairs checked by hand: 2 units × 2 arrows each side
        let composable = (0..4).flat_map(|a| p.right_composable(a).iter().map(move |b| (a, b))).count();
        assert_eq!(composable, 8);
        assert!(p.validate_grading(&map, &group(&FiniteGroup::cyclic(2))));
        assert!(!p.validate_grading(&map, &group(&FiniteGroup::cyclic(3))));
        assert!(p.validate_grading(&[0; 4], &unit_groupoid()));
        assert_eq!(graded_rotation(3).len(), 9);
    }
}
