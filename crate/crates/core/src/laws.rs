//! Algebraic laws of the function product, checked by exhaustive scan.

use crate::coefficients::Coefficients;
use crate::error::FamilyError;
use crate::family::FnFamily;
use crate::function::{convolve_total, extend_by_zero, support_restrict, PartialFn};
use crate::groupoid::FiniteGroupoid;
use crate::report::{Budget, Check, Report};

/// `(ab)c = a(bc)` for all triples of `S`, recomputing every product from
/// the functions themselves.
pub fn check_associativity(f: &FnFamily, budget: &Budget) -> Report {
    let mut r = Report::new("associativity on S");
    let (g, y) = (f.groupoid(), f.y());
    let mul = |a: &PartialFn, b: &PartialFn| PartialFn::multiply_unchecked(g, y, a, b);
    let scan = || -> Result<Option<String>, FamilyError> {
        let s = f.s();
        for &a in s {
            for &b in s {
                budget.spend(s.len() as u64)?;
                let ab = mul(f.element(a), f.element(b));
                for &c in s {
                    let bc = mul(f.element(b), f.element(c));
                    if mul(&ab, f.element(c)) != mul(f.element(a), &bc) {
                        return Ok(Some(format!("({}, {}, {})", f.render(a), f.render(b), f.render(c))));
                    }
                }
            }
        }
        Ok(None)
    };
    r.conclusion(Check::from_result("(ab)c = a(bc)", scan()));
    r
}

/// Restricting bisection-supported ring-valued functions to their supports
/// turns convolution into the bisection product of `R ∖ {0}`-valued
/// partial functions, injectively.
pub fn check_support_restriction(g: &FiniteGroupoid, c: &Coefficients, budget: &Budget) -> Report {
    let mut r = Report::new("support restriction");
    let Some(ring) = c.as_ring() else {
        r.hypothesis(Check::fail("ring coefficients", "coefficients are not a ring", vec![]));
        return r;
    };
    r.hypothesis(Check::from_witness("R is a domain", (!ring.is_domain()).then(|| "zero divisors present".to_string())));
    let y = c.y();
    let mut functions: Vec<Vec<usize>> = Vec::new();
    for b in g.bisections(false) {
        let arrows: Vec<usize> = b.iter().collect();
        let nonzero = ring.nonzero();
        let mut digits = vec![0usize; arrows.len()];
        loop {
            let mut total = vec![ring.zero(); g.len()];
            for (&x, &d) in arrows.iter().zip(&digits) {
                total[x] = nonzero[d];
            }
            functions.push(total);
            let Some(k) = digits.iter().position(|&d| d + 1 < nonzero.len()) else { break };
            digits[k] += 1;
            digits[..k].iter_mut().for_each(|d| *d = 0);
        }
    }
    let restricted: Vec<PartialFn> = functions.iter().map(|a| support_restrict(c, a)).collect();
    let mut sorted = restricted.clone();
    sorted.sort();
    sorted.dedup();
    let injective = sorted.len() == restricted.len();
    r.conclusion(Check::from_witness("restriction is injective", (!injective).then(|| "two functions share a restriction".to_string())));
    let back = restricted.iter().zip(&functions).find(|(p, a)| &extend_by_zero(g, c, p) != *a);
    r.conclusion(Check::from_witness("extension by zero inverts restriction", back.map(|(p, _)| p.render(g, y))));
    let scan = || -> Result<Option<String>, FamilyError> {
        for (i, a) in functions.iter().enumerate() {
            budget.spend(functions.len() as u64)?;
            for (j, b) in functions.iter().enumerate() {
                let lhs = support_restrict(c, &convolve_total(g, ring, a, b));
                let rhs = PartialFn::multiply_unchecked(g, y, &restricted[i], &restricted[j]);
                if lhs != rhs {
                    return Ok(Some(format!("({}, {})", restricted[i].render(g, y), restricted[j].render(g, y))));
                }
            }
        }
        Ok(None)
    };
    r.conclusion(Check::from_result("supp(a * b) restriction equals the bisection product", scan()));
    r
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coefficients::FiniteRing;
    use crate::constructions::{group, pair, FiniteGroup};
    use crate::report::Status;

    #[test]
    fn laws_hold_on_small_instances() {
        let c = Coefficients::ring(FiniteRing::galois_field(3).unwrap());
        assert_eq!(check_support_restriction(&pair(2), &c, &Budget::unlimited()).status(), Status::Pass);
        let f = FnFamily::canonical_bumpy(Arc::new(group(&FiniteGroup::cyclic(3))), Arc::new(c)).unwrap();
        assert_eq!(check_associativity(&f, &Budget::unlimited()).status(), Status::Pass);
    }

    #[test]
    fn zero_divisors_leave_the_hypothesis_unmet() {
        let c = Coefficients::ring(FiniteRing::integers_mod(4));
        let r = check_support_restriction(&group(&FiniteGroup::cyclic(2)), &c, &Budget::unlimited());
        assert_eq!(r.status(), Status::HypothesisUnmet);
    }
}
