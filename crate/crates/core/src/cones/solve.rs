use std::collections::HashMap;

use crate::chains::{boundary, boundary_matrix, Chain};
use crate::error::{HdxError, Result};
use crate::simplicial::{Complex, Simplex};
use crate::snf::{self, IntMatrix};

use super::ConeFunction;

/// Builds a k-cone degree by degree by solving `∂x = 1_σ − Cone(∂1_σ)` over ℤ.
/// Fails with `NoCone` when some system has no integral solution.
pub fn solve_cone_linear(x: &Complex, k: i32, apex: u32, entry_cap: usize) -> Result<ConeFunction> {
    if x.vertex_index(apex).is_none() {
        return Err(HdxError::Domain(format!("apex {apex} is not a vertex")));
    }
    let mut cone = ConeFunction::new(apex, k);
    for j in 0..=k.min(x.dim()) {
        let rows = x.faces(j);
        let cols = x.faces(j + 1);
        let size = rows.len().saturating_mul(cols.len() + rows.len());
        if size > entry_cap {
            return Err(HdxError::Resource(format!(
                "degree {j} system needs {size} entries, above the cap of {entry_cap}"
            )));
        }
        let index: HashMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut rhs = IntMatrix::zeros(rows.len(), rows.len());
        for (c, s) in rows.iter().enumerate() {
            let one = Chain::basis(s)?;
            let mut target = one.clone();
            target.add_scaled(&cone.eval(&boundary(&one, None)?)?, -1)?;
            for (t, &v) in target.iter() {
                rhs.set(index[t], c, v as i128);
            }
        }
        let a = boundary_matrix(x, j + 1);
        let sols = snf::solve(&a, &rhs)?;
        for (s, sol) in rows.iter().zip(sols) {
            let sol = sol.ok_or_else(|| {
                HdxError::NoCone(format!("no integral solution at degree {j} for {s:?}; reduced homology obstructs"))
            })?;
            let mut ch = Chain::zero(j + 1);
            for (i, v) in sol.into_iter().enumerate() {
                if v != 0 {
                    let v = i64::try_from(v).map_err(|_| HdxError::Overflow("cone coefficient exceeds 64 bits".into()))?;
                    ch.add_term(cols[i].clone(), v);
                }
            }
            cone.set(s.clone(), ch)?;
        }
    }
    Ok(cone)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filled_and_hollow_triangle() {
        let t = Complex::from_labelled_faces(&[vec!["a", "b", "c"]]).unwrap();
        let c = solve_cone_linear(&t, 1, 0, 1 << 20).unwrap();
        assert!(c.verify(&t).is_ok());
        let h = t.skeleton(1).unwrap();
        assert!(matches!(solve_cone_linear(&h, 1, 0, 1 << 20), Err(HdxError::NoCone(_))));
        assert!(solve_cone_linear(&h, 0, 0, 1 << 20).unwrap().verify(&h).is_ok());
    }
}
