use crate::chains::{CoefficientGroup, GroupChain};
use crate::simplicial::Complex;

use super::{ConeFunction, Verdict};

/// An integral cone read with coefficients in a finitely generated group:
/// `Cone(a·1_σ) = a ⊙ Cone(1_σ)`, reduced componentwise.
#[derive(Clone, Debug)]
pub struct GroupCone {
    pub base: ConeFunction,
    pub group: CoefficientGroup,
}

pub fn transport_coefficients(c: &ConeFunction, group: &CoefficientGroup) -> GroupCone {
    GroupCone { base: c.clone(), group: group.clone() }
}

impl GroupCone {
    pub fn eval(&self, a: &GroupChain) -> GroupChain {
        let mut out = GroupChain::zero(a.degree + 1, &self.group);
        for (s, coeff) in &a.terms {
            let img = GroupChain::from_integral(&self.base.generator(s), coeff, &self.group);
            out.add(&img);
        }
        out
    }

    /// Coefficients used for the generator checks: each basis element and the all-ones element.
    pub fn test_coefficients(&self) -> Vec<Vec<i64>> {
        let r = self.group.rank();
        let mut out: Vec<Vec<i64>> = (0..r).map(|j| self.group.basis_element(j)).collect();
        out.push(self.group.embed_int(1));
        out.dedup();
        out
    }

    pub fn verify(&self, x: &Complex) -> Verdict {
        if let v @ Verdict::Violation { .. } = self.base.verify_structure(x) {
            return v;
        }
        for a in self.test_coefficients() {
            let mut empty = GroupChain::zero(-1, &self.group);
            empty.add_term(Vec::new(), &a, 1);
            let mut apex = GroupChain::zero(0, &self.group);
            apex.add_term(vec![self.base.apex()], &a, 1);
            if self.eval(&empty) != apex {
                return Verdict::Violation { simplex: vec![], detail: "Cone(a·1_∅) is not a·1_[v]".into() };
            }
            for j in 0..=self.base.degree().min(x.dim()) {
                for s in x.faces(j) {
                    let mut one = GroupChain::zero(j, &self.group);
                    one.add_term(s.clone(), &a, 1);
                    let mut lhs = self.eval(&one).boundary();
                    lhs.add(&self.eval(&one.boundary()));
                    if lhs != one {
                        return Verdict::Violation {
                            simplex: s.clone(),
                            detail: format!("cone equation fails for coefficient {a:?}"),
                        };
                    }
                }
            }
        }
        Verdict::Ok
    }

    /// Rad_j over the group: the all-ones coefficient has the largest support.
    pub fn radius_profile(&self) -> Vec<usize> {
        let ones = self.group.embed_int(1);
        let mut r = vec![0usize; (self.base.degree() + 2).max(0) as usize];
        for (s, c) in self.base.table() {
            let j = s.len();
            if j < r.len() {
                r[j] = r[j].max(GroupChain::from_integral(c, &ones, &self.group).support_size());
            }
        }
        r
    }

    /// Whether `supp Cone(a·1_σ) ⊆ supp Cone_ℤ(1_σ)` for every generator and tested a.
    pub fn support_contained(&self) -> bool {
        self.test_coefficients().iter().all(|a| {
            self.base.table().values().all(|c| {
                let g = GroupChain::from_integral(c, a, &self.group);
                g.terms.keys().all(|s| c.coeff(s) != 0)
            })
        })
    }
}
