//! Random-walk spectra, brute-force coboundary and cosystolic constants, and
//! the cone-radius lower bound on coboundary expansion.

mod brute;
mod spectral;

pub use brute::{
    coboundary_constant, cosystolic_constant, expansion_degree, expansion_report, systole, DegreeExpansion,
    ExpansionReport, ExpansionValue, Systole,
};
pub use spectral::{
    jacobi, local_spectral_profile, second_eigenvalue, walk_matrix, Eigenvalue, LinkSpectrum, SpectralReport,
    WalkMatrix,
};

use serde::{Serialize, Serializer};

use crate::error::{HdxError, Result};
use crate::simplicial::{binomial, Complex, Rational};

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVerdict {
    /// Facet transitivity was not established.
    HypothesisUnverified,
    /// The automorphism group is known not to be facet-transitive.
    HypothesisFails,
    /// Hypotheses hold; no exact constant to compare with.
    BoundOnly,
    Holds,
    Violated,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeBound {
    pub k: i32,
    pub n: i32,
    pub radius: u64,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    #[serde(serialize_with = "ser_opt_rational")]
    pub measured: Option<Rational>,
    pub verdict: BoundVerdict,
}

/// The lower bound 1/(R·C(n+1, k+1)) on h^k_cb for a facet-transitive X with a
/// cone of k-radius R, compared against `measured` when given.
/// `transitive` is None when transitivity is unknown.
pub fn cone_bound_check(
    x: &Complex,
    radius: u64,
    k: i32,
    transitive: Option<bool>,
    measured: Option<Rational>,
) -> Result<ConeBound> {
    let n = x.dim();
    if k < 0 || k >= n {
        return Err(HdxError::Domain(format!("degree {k} outside 0..{n}")));
    }
    if radius == 0 {
        return Err(HdxError::Domain("cone radius must be positive".into()));
    }
    let denom = radius as i64 * binomial((n + 1) as u64, (k + 1) as u64) as i64;
    let bound = Rational::new(1, denom);
    let verdict = match (transitive, measured) {
        (None, _) => BoundVerdict::HypothesisUnverified,
        (Some(false), _) => BoundVerdict::HypothesisFails,
        (Some(true), None) => BoundVerdict::BoundOnly,
        (Some(true), Some(h)) if h >= bound => BoundVerdict::Holds,
        (Some(true), Some(_)) => BoundVerdict::Violated,
    };
    Ok(ConeBound { k, n, radius, bound, measured, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    #[test]
    fn triangle_bound() {
        let x = standard::simplex(3).unwrap();
        let c = cone_bound_check(&x, 1, 0, Some(true), Some(Rational::from_integer(2))).unwrap();
        assert_eq!(c.bound, Rational::new(1, 3));
        assert_eq!(c.verdict, BoundVerdict::Holds);
        let c = cone_bound_check(&x, 1, 1, None, None).unwrap();
        assert_eq!(c.bound, Rational::new(1, 3));
        assert_eq!(c.verdict, BoundVerdict::HypothesisUnverified);
        assert_eq!(format_rational(&Rational::from_integer(2)), "2/1");
    }
}
