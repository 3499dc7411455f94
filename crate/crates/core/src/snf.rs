//! Integer matrix diagonalisation (Smith normal form) and linear solving over ℤ.

use crate::error::{HdxError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

fn ov() -> HdxError {
    HdxError::Overflow("integer elimination exceeded 128-bit range".into())
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }
    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
    /// row[dst] -= k * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        for c in 0..self.cols {
            let s = self.data[src * self.cols + c];
            if s != 0 {
                let d = &mut self.data[dst * self.cols + c];
                *d = d.checked_sub(k.checked_mul(s).ok_or_else(ov)?).ok_or_else(ov)?;
            }
        }
        Ok(())
    }
    /// col[dst] -= k * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, k: i128) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        for r in 0..self.rows {
            let s = self.data[r * self.cols + src];
            if s != 0 {
                let d = &mut self.data[r * self.cols + dst];
                *d = d.checked_sub(k.checked_mul(s).ok_or_else(ov)?).ok_or_else(ov)?;
            }
        }
        Ok(())
    }
    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            self.data[r * self.cols + c] = -self.data[r * self.cols + c];
        }
    }
}

/// Result of diagonalising `A`: `U A V = D` with `D` diagonal.
pub struct Diagonalization {
    pub diagonal: Vec<i128>,
    /// Right-hand sides after the row operations (`U B`), if any were given.
    pub rhs: Option<IntMatrix>,
    /// Accumulated column operations `V`, if requested.
    pub col_ops: Option<IntMatrix>,
}

/// Diagonalises `a` by unimodular row and column operations, choosing as
/// pivot the entry of smallest absolute value. With `full_snf` the diagonal
/// is further normalised so each entry divides the next.
pub fn diagonalize(mut a: IntMatrix, mut rhs: Option<IntMatrix>, track_cols: bool, full_snf: bool) -> Result<Diagonalization> {
    let mut v = if track_cols { Some(IntMatrix::identity(a.cols)) } else { None };
    let mut t = 0;
    let limit = a.rows.min(a.cols);
    while t < limit {
        // Find the smallest nonzero entry in the trailing block.
        let mut best: Option<(usize, usize, i128)> = None;
        for r in t..a.rows {
            for c in t..a.cols {
                let x = a.get(r, c).abs();
                if x != 0 && best.map_or(true, |b| x < b.2) {
                    best = Some((r, c, x));
                    if x == 1 {
                        break;
                    }
                }
            }
            if matches!(best, Some((_, _, 1))) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else { break };
        a.swap_rows(t, pr);
        if let Some(b) = rhs.as_mut() {
            b.swap_rows(t, pr);
        }
        a.swap_cols(t, pc);
        if let Some(vm) = v.as_mut() {
            vm.swap_cols(t, pc);
        }
        loop {
            let p = a.get(t, t);
            let mut dirty = false;
            for r in t + 1..a.rows {
                let x = a.get(r, t);
                if x != 0 {
                    let k = x.div_euclid(p);
                    a.row_axpy(r, t, k)?;
                    if let Some(b) = rhs.as_mut() {
                        b.row_axpy(r, t, k)?;
                    }
                    if a.get(r, t) != 0 {
                        dirty = true;
                    }
                }
            }
            for c in t + 1..a.cols {
                let x = a.get(t, c);
                if x != 0 {
                    let k = x.div_euclid(p);
                    a.col_axpy(c, t, k)?;
                    if let Some(vm) = v.as_mut() {
                        vm.col_axpy(c, t, k)?;
                    }
                    if a.get(t, c) != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
            // Move the smallest remaining entry of row/column t to the pivot.
            let mut best = (t, t, a.get(t, t).abs());
            for r in t + 1..a.rows {
                let x = a.get(r, t).abs();
                if x != 0 && x < best.2 {
                    best = (r, t, x);
                }
            }
            for c in t + 1..a.cols {
                let x = a.get(t, c).abs();
                if x != 0 && x < best.2 {
                    best = (t, c, x);
                }
            }
            if best.0 != t {
                a.swap_rows(t, best.0);
                if let Some(b) = rhs.as_mut() {
                    b.swap_rows(t, best.0);
                }
            }
            if best.1 != t {
                a.swap_cols(t, best.1);
                if let Some(vm) = v.as_mut() {
                    vm.swap_cols(t, best.1);
                }
            }
        }
        if full_snf {
            let p = a.get(t, t);
            let mut fix = None;
            'outer: for r in t + 1..a.rows {
                for c in t + 1..a.cols {
                    if a.get(r, c) % p != 0 {
                        fix = Some(r);
                        break 'outer;
                    }
                }
            }
            if let Some(r) = fix {
                // row t += row r, then redo this pivot.
                a.row_axpy(t, r, -1)?;
                if let Some(b) = rhs.as_mut() {
                    b.row_axpy(t, r, -1)?;
                }
                continue;
            }
        }
        if a.get(t, t) < 0 {
            a.negate_row(t);
            if let Some(b) = rhs.as_mut() {
                b.negate_row(t);
            }
        }
        t += 1;
    }
    let diagonal = (0..limit).map(|i| a.get(i, i)).take_while(|&x| x != 0).collect();
    Ok(Diagonalization { diagonal, rhs, col_ops: v })
}

/// Invariant factors (nonzero diagonal of the Smith normal form).
pub fn invariant_factors(a: IntMatrix) -> Result<Vec<i128>> {
    Ok(diagonalize(a, None, false, true)?.diagonal)
}

/// Solves `A X = B` over ℤ. Returns `None` for columns that have no integer solution.
pub fn solve(a: &IntMatrix, b: &IntMatrix) -> Result<Vec<Option<Vec<i128>>>> {
    assert_eq!(a.rows, b.rows);
    let d = diagonalize(a.clone(), Some(b.clone()), true, false)?;
    let ub = d.rhs.unwrap();
    let vm = d.col_ops.unwrap();
    let rank = d.diagonal.len();
    let mut out = Vec::with_capacity(b.cols);
    for col in 0..b.cols {
        let mut ok = true;
        let mut y = vec![0i128; a.cols];
        for i in 0..a.rows {
            let val = ub.get(i, col);
            if i < rank {
                if val % d.diagonal[i] != 0 {
                    ok = false;
                    break;
                }
                y[i] = val / d.diagonal[i];
            } else if val != 0 {
                ok = false;
                break;
            }
        }
        if !ok {
            out.push(None);
            continue;
        }
        let mut x = vec![0i128; a.cols];
        for (r, xr) in x.iter_mut().enumerate() {
            let mut acc: i128 = 0;
            for (c, &yc) in y.iter().enumerate().take(rank) {
                if yc != 0 {
                    acc = acc.checked_add(vm.get(r, c).checked_mul(yc).ok_or_else(ov)?).ok_or_else(ov)?;
                }
            }
            *xr = acc;
        }
        out.push(Some(x));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[i128]) -> IntMatrix {
        IntMatrix { rows, cols, data: v.to_vec() }
    }

    #[test]
    fn snf_small() {
        let a = m(2, 2, &[2, 4, 6, 8]);
        assert_eq!(invariant_factors(a).unwrap(), vec![2, 4]);
        let a = m(3, 3, &[2, 0, 0, 0, 3, 0, 0, 0, 0]);
        assert_eq!(invariant_factors(a).unwrap(), vec![1, 6]);
    }

    #[test]
    fn solve_small() {
        let a = m(2, 2, &[2, 0, 0, 1]);
        let b = m(2, 2, &[4, 1, 3, 0]);
        let s = solve(&a, &b).unwrap();
        assert_eq!(s[0], Some(vec![2, 3]));
        assert_eq!(s[1], None);
    }
}
