use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HdxError, Result};
use crate::simplicial::{Complex, Rational, Simplex};

const TOL: f64 = 1e-9;
const SWEEPS: usize = 100;
const DENSE_LIMIT: usize = 400;
const LANCZOS_STEPS: usize = 300;

/// The random walk on the 1-skeleton, with exact rational entries.
#[derive(Clone, Debug)]
pub struct WalkMatrix {
    pub vertices: Vec<u32>,
    /// Sparse rows: (column position, M(v, u)).
    pub rows: Vec<Vec<(usize, Rational)>>,
    /// Σ_u w(uv) scaled by the common weight denominator.
    pub degrees: Vec<i64>,
}

impl WalkMatrix {
    /// Checks that every row sums to exactly 1.
    pub fn is_stochastic(&self) -> bool {
        self.rows.iter().all(|r| r.iter().map(|(_, a)| *a).sum::<Rational>() == Rational::from_integer(1))
    }

    fn symmetric(&self, x: &Complex) -> Vec<Vec<(usize, f64)>> {
        let counts = x.facet_counts(1);
        let mut rows = vec![Vec::new(); self.vertices.len()];
        for (e, &c) in x.faces(1).iter().zip(&counts) {
            let a = x.vertex_index(e[0]).unwrap();
            let b = x.vertex_index(e[1]).unwrap();
            let s = c as f64 / ((self.degrees[a] as f64) * (self.degrees[b] as f64)).sqrt();
            rows[a].push((b, s));
            rows[b].push((a, s));
        }
        rows
    }
}

pub fn walk_matrix(x: &Complex) -> Result<WalkMatrix> {
    if !x.is_pure() || x.dim() < 1 {
        return Err(HdxError::Domain("the walk needs a pure complex of dimension at least 1".into()));
    }
    let n = x.num_vertices();
    let counts = x.facet_counts(1);
    let mut degrees = vec![0i64; n];
    let mut nbrs: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (e, &c) in x.faces(1).iter().zip(&counts) {
        let a = x.vertex_index(e[0]).unwrap();
        let b = x.vertex_index(e[1]).unwrap();
        degrees[a] += c as i64;
        degrees[b] += c as i64;
        nbrs[a].push((b, c as i64));
        nbrs[b].push((a, c as i64));
    }
    let rows = nbrs
        .into_iter()
        .enumerate()
        .map(|(v, r)| {
            let mut r: Vec<(usize, Rational)> = r.into_iter().map(|(u, c)| (u, Rational::new(c, degrees[v]))).collect();
            r.sort_by_key(|p| p.0);
            r
        })
        .collect();
    Ok(WalkMatrix { vertices: x.vertices().to_vec(), rows, degrees })
}

/// An eigenvalue estimate with an a-posteriori error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub error_bound: f64,
    pub method: &'static str,
}

/// Second largest eigenvalue of the random walk on a connected pure complex.
pub fn second_eigenvalue(x: &Complex) -> Result<Eigenvalue> {
    let walk = walk_matrix(x)?;
    if !walk.is_stochastic() {
        return Err(HdxError::Domain("walk matrix rows do not sum to 1".into()));
    }
    if !x.is_connected()? {
        return Err(HdxError::Domain("complex is disconnected: second eigenvalue is 1".into()));
    }
    let s = walk.symmetric(x);
    let n = s.len();
    if n <= DENSE_LIMIT {
        let mut a = vec![0.0; n * n];
        for (i, r) in s.iter().enumerate() {
            for &(j, v) in r {
                a[i * n + j] = v;
            }
        }
        let (vals, _, off) = jacobi(&mut a, n, false);
        Ok(Eigenvalue { value: vals[1], error_bound: off, method: "jacobi" })
    } else {
        Ok(lanczos_second(&s, &walk.degrees))
    }
}

/// Cyclic Jacobi on a dense symmetric matrix. Returns the eigenvalues in
/// decreasing order, the eigenvectors (columns, if requested, matching that
/// order) and the final off-diagonal Frobenius norm, which bounds the error.
pub fn jacobi(a: &mut [f64], n: usize, vectors: bool) -> (Vec<f64>, Vec<f64>, f64) {
    let mut v = if vectors {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    } else {
        Vec::new()
    };
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..SWEEPS {
        if off(a) < TOL * 1e-3 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                if vectors {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let vals = idx.iter().map(|&i| a[i * n + i]).collect();
    let vecs = if vectors {
        let mut out = vec![0.0; n * n];
        for (c, &i) in idx.iter().enumerate() {
            for k in 0..n {
                out[k * n + c] = v[k * n + i];
            }
        }
        out
    } else {
        Vec::new()
    };
    (vals, vecs, off(a))
}

fn matvec(s: &[Vec<(usize, f64)>], x: &[f64]) -> Vec<f64> {
    s.par_iter().map(|r| r.iter().map(|&(j, v)| v * x[j]).sum()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Lanczos with full reorthogonalisation on the complement of the top
/// eigenvector √d; the largest Ritz value approximates λ₂.
fn lanczos_second(s: &[Vec<(usize, f64)>], degrees: &[i64]) -> Eigenvalue {
    let n = s.len();
    let mut top: Vec<f64> = degrees.iter().map(|&d| (d as f64).sqrt()).collect();
    let norm = dot(&top, &top).sqrt();
    top.iter_mut().for_each(|x| *x /= norm);
    let mut q: Vec<f64> = (0..n).map(|i| ((i as f64 + 1.0) * 0.618_033_988_75).fract() - 0.5).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let steps = LANCZOS_STEPS.min(n - 1);
    let orth = |w: &mut Vec<f64>, basis: &[Vec<f64>]| {
        for _ in 0..2 {
            let c = dot(w, &top);
            axpy(w, -c, &top);
            for b in basis {
                let c = dot(w, b);
                axpy(w, -c, b);
            }
        }
    };
    orth(&mut q, &basis);
    let qn = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|x| *x /= qn);
    for _ in 0..steps {
        let mut w = matvec(s, &q);
        let alpha = dot(&w, &q);
        alphas.push(alpha);
        basis.push(q);
        orth(&mut w, &basis);
        let beta = dot(&w, &w).sqrt();
        if beta < 1e-12 || basis.len() == steps {
            betas.push(beta);
            break;
        }
        betas.push(beta);
        q = w.into_iter().map(|x| x / beta).collect();
    }
    let m = alphas.len();
    let mut t = vec![0.0; m * m];
    for i in 0..m {
        t[i * m + i] = alphas[i];
        if i + 1 < m {
            t[i * m + i + 1] = betas[i];
            t[(i + 1) * m + i] = betas[i];
        }
    }
    let (vals, vecs, off) = jacobi(&mut t, m, true);
    let residual = betas[m - 1].abs() * vecs[(m - 1) * m].abs();
    Eigenvalue { value: vals[0], error_bound: residual + off, method: "lanczos" }
}

/// Spectrum of one link X_τ.
#[derive(Clone, Debug, Serialize)]
pub struct LinkSpectrum {
    pub face: Simplex,
    pub labels: Vec<String>,
    pub vertices: usize,
    pub connected: bool,
    pub second: Option<Eigenvalue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub dimension: i32,
    pub links: Vec<LinkSpectrum>,
    pub all_connected: bool,
    /// Maximum second eigenvalue over all links.
    pub lambda: Option<f64>,
    pub error_bound: f64,
    pub verdict: String,
}

/// Second eigenvalues of X_τ for every τ of dimension −1..=n−2.
pub fn local_spectral_profile(x: &Complex) -> Result<SpectralReport> {
    let n = x.dim();
    if !x.is_pure() || n < 1 {
        return Err(HdxError::Domain("local spectra need a pure complex of dimension at least 1".into()));
    }
    let faces: Vec<&Simplex> = (-1..=n - 2).flat_map(|k| x.faces(k)).collect();
    let links = faces
        .par_iter()
        .map(|tau| {
            let lk = x.link(tau)?;
            let labels = tau.iter().map(|v| x.label(*v).unwrap_or("").to_string()).collect();
            let connected = lk.is_connected()?;
            let second = if connected { Some(second_eigenvalue(&lk)?) } else { None };
            Ok(LinkSpectrum { face: (*tau).clone(), labels, vertices: lk.num_vertices(), connected, second })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_connected = links.iter().all(|l| l.connected);
    let lambda = links.iter().filter_map(|l| l.second.map(|e| e.value)).reduce(f64::max);
    let error_bound = links.iter().filter_map(|l| l.second.map(|e| e.error_bound)).fold(0.0, f64::max);
    let verdict = match (all_connected, lambda) {
        (true, Some(l)) => format!("{l:.9}-local spectral expander"),
        _ => format!(
            "not a local spectral expander: {} disconnected links",
            links.iter().filter(|l| !l.connected).count()
        ),
    };
    Ok(SpectralReport { dimension: n, links, all_connected, lambda, error_bound, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    #[test]
    fn complete_graphs() {
        for m in 3..=6 {
            let x = standard::simplex(m).unwrap().skeleton(1).unwrap();
            let e = second_eigenvalue(&x).unwrap();
            assert!((e.value + 1.0 / (m as f64 - 1.0)).abs() < 1e-9, "{m}: {e:?}");
        }
    }

    #[test]
    fn cycles() {
        let e = second_eigenvalue(&standard::cycle(4).unwrap()).unwrap();
        assert!(e.value.abs() < 1e-9);
        let e = second_eigenvalue(&standard::cycle(6).unwrap()).unwrap();
        assert!((e.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn lanczos_agrees_with_cycle_spectrum() {
        let n = 600;
        let e = second_eigenvalue(&standard::cycle(n).unwrap()).unwrap();
        assert_eq!(e.method, "lanczos");
        let expect = (2.0 * std::f64::consts::PI / n as f64).cos();
        assert!((e.value - expect).abs() < 1e-6, "{e:?} vs {expect}");
    }

    #[test]
    fn disconnected_fails() {
        let x = Complex::from_labelled_faces(&[vec!["a", "b"], vec!["c", "d"]]).unwrap();
        assert!(matches!(second_eigenvalue(&x), Err(HdxError::Domain(_))));
        let r = local_spectral_profile(&x).unwrap();
        assert!(!r.all_connected);
    }

    #[test]
    fn tetrahedron_profile() {
        let r = local_spectral_profile(&standard::simplex(4).unwrap()).unwrap();
        assert_eq!(r.links.len(), 1 + 4 + 6);
        assert!((r.lambda.unwrap() + 1.0 / 3.0).abs() < 1e-9);
    }
}
