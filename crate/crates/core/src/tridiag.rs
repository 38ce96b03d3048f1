//! Real symmetric tridiagonal eigenproblems.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
//! iteration on a pivoted LU factorization of `T − λI`. The matrix is first
//! split wherever an off-diagonal entry is negligible, so an exactly diagonal
//! matrix returns coordinate unit vectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    /// `offdiag[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Domain("empty tridiagonal matrix".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "off-diagonal length {} does not match dimension {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite matrix entry".into()));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `y = T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Infinity norm.
    pub fn norm(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.offdiag[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.offdiag[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        Block::whole(self).count_below(self, x)
    }
}

/// An unreduced diagonal block `start..end`.
#[derive(Debug, Clone, Copy)]
struct Block {
    start: usize,
    end: usize,
    pivmin: f64,
}

impl Block {
    fn whole(t: &SymTridiagonal) -> Block {
        Block::new(t, 0, t.dim())
    }

    fn new(t: &SymTridiagonal, start: usize, end: usize) -> Block {
        let max_e2 = t.offdiag[start..end - 1]
            .iter()
            .map(|e| e * e)
            .fold(1.0, f64::max);
        Block {
            start,
            end,
            pivmin: f64::MIN_POSITIVE * max_e2,
        }
    }

    fn len(&self) -> usize {
        self.end - self.start
    }

    fn count_below(&self, t: &SymTridiagonal, x: f64) -> usize {
        let mut count = 0;
        let mut p = 1.0;
        for i in self.start..self.end {
            let coupling = if i > self.start {
                let e = t.offdiag[i - 1];
                e * e / p
            } else {
                0.0
            };
            p = t.diag[i] - x - coupling;
            if p.abs() < self.pivmin {
                p = -self.pivmin;
            }
            if p < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self, t: &SymTridiagonal) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in self.start..self.end {
            let mut r = 0.0;
            if i > self.start {
                r += t.offdiag[i - 1].abs();
            }
            if i + 1 < self.end {
                r += t.offdiag[i].abs();
            }
            lo = lo.min(t.diag[i] - r);
            hi = hi.max(t.diag[i] + r);
        }
        let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) * self.len() as f64;
        (lo - pad, hi + pad)
    }

    /// The `k`-th smallest (0-based) eigenvalue of this block.
    fn bisect(&self, t: &SymTridiagonal, k: usize) -> Result<f64> {
        if self.len() == 1 {
            return Ok(t.diag[self.start]);
        }
        let (mut lo, mut hi) = self.gershgorin(t);
        // absolute floor relative to the block's scale, so a zero eigenvalue
        // does not need to be bisected down to the subnormals
        let floor = ABS_BISECTION_FLOOR * lo.abs().max(hi.abs()).max(1.0);
        for _ in 0..MAX_BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let width = hi - lo;
            let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + floor;
            if width <= tol || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.count_below(t, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NonConvergence(format!(
            "bisection for eigenvalue {k} stalled in [{lo:e}, {hi:e}]"
        )))
    }
}

const MAX_BISECTION_STEPS: usize = 400;
const ABS_BISECTION_FLOOR: f64 = 1e-30;
const INVERSE_ITERATIONS: usize = 3;

/// Split `t` into unreduced blocks.
fn blocks(t: &SymTridiagonal) -> Vec<Block> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..t.offdiag.len() {
        let e = t.offdiag[i].abs();
        let scale = (t.diag[i].abs() * t.diag[i + 1].abs()).sqrt();
        if e == 0.0 || e <= f64::EPSILON * scale {
            out.push(Block::new(t, start, i + 1));
            start = i + 1;
        }
    }
    out.push(Block::new(t, start, t.dim()));
    out
}

/// One eigenpair; `vector` has unit 2-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// The `count` smallest eigenvalues, ascending.
pub fn lowest_eigenvalues(t: &SymTridiagonal, count: usize) -> Result<Vec<f64>> {
    Ok(select_lowest(t, count)?
        .into_iter()
        .map(|(value, _, _)| value)
        .collect())
}

/// `(value, block index, index within block)` for the `count` smallest eigenvalues.
fn select_lowest(t: &SymTridiagonal, count: usize) -> Result<Vec<(f64, usize, usize)>> {
    if count > t.dim() {
        return Err(Error::Domain(format!(
            "requested {count} eigenvalues of a {}-dimensional matrix",
            t.dim()
        )));
    }
    let mut all = Vec::new();
    for (b, block) in blocks(t).iter().enumerate() {
        for k in 0..count.min(block.len()) {
            all.push((block.bisect(t, k)?, b, k));
        }
    }
    // stable: equal eigenvalues keep block (row) order
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.truncate(count);
    Ok(all)
}

/// The `count` smallest eigenpairs in ascending order, orthonormal, with the
/// sign fixed so the largest-magnitude component is positive.
pub fn lowest_eigenpairs(t: &SymTridiagonal, count: usize) -> Result<Vec<EigenPair>> {
    let selected = select_lowest(t, count)?;
    let blocks = blocks(t);
    let norm = t.norm().max(f64::MIN_POSITIVE);
    let mut pairs: Vec<(usize, EigenPair)> = Vec::with_capacity(selected.len());
    for &(value, b, _) in &selected {
        let block = blocks[b];
        let mut vector = vec![0.0; t.dim()];
        if block.len() == 1 {
            vector[block.start] = 1.0;
        } else {
            let earlier: Vec<&[f64]> = pairs
                .iter()
                .filter(|(pb, _)| *pb == b)
                .map(|(_, p)| &p.vector[block.start..block.end])
                .collect();
            let local = inverse_iteration(t, &block, value, norm, &earlier)?;
            vector[block.start..block.end].copy_from_slice(&local);
        }
        fix_sign(&mut vector);
        let residual = residual_norm(t, value, &vector);
        if residual > 1e-9 * norm.max(1.0) {
            return Err(Error::NonConvergence(format!(
                "inverse iteration for eigenvalue {value:e} left residual {residual:e} (|T| = {norm:e})"
            )));
        }
        pairs.push((b, EigenPair { value, vector }));
    }
    Ok(pairs.into_iter().map(|(_, p)| p).collect())
}

fn residual_norm(t: &SymTridiagonal, value: f64, v: &[f64]) -> f64 {
    t.apply(v)
        .iter()
        .zip(v)
        .map(|(tv, x)| (tv - value * x).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Make the largest-magnitude component positive; components within a
/// relative 1e-10 of the maximum count as ties, resolved by the lowest index.
pub fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let lead = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - 1e-10))
        .expect("max is attained");
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn inverse_iteration(
    t: &SymTridiagonal,
    block: &Block,
    value: f64,
    norm: f64,
    earlier: &[&[f64]],
) -> Result<Vec<f64>> {
    let n = block.len();
    let diag: Vec<f64> = t.diag[block.start..block.end]
        .iter()
        .map(|d| d - value)
        .collect();
    let off = &t.offdiag[block.start..block.end - 1];
    let lu = TridiagLu::factor(&diag, off, f64::EPSILON * norm);

    // deterministic, non-degenerate start vector
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64) * 0.7548776662).sin())
        .collect();
    normalize(&mut x)?;
    for _ in 0..INVERSE_ITERATIONS {
        lu.solve(&mut x);
        for prev in earlier {
            let dot: f64 = x.iter().zip(prev.iter()).map(|(a, b)| a * b).sum();
            x.iter_mut()
                .zip(prev.iter())
                .for_each(|(a, b)| *a -= dot * b);
        }
        normalize(&mut x)?;
    }
    Ok(x)
}

fn normalize(x: &mut [f64]) -> Result<()> {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::NonConvergence(
            "inverse iteration produced a zero or non-finite vector".into(),
        ));
    }
    x.iter_mut().for_each(|v| *v /= scale);
    let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= len);
    Ok(())
}

/// LU with partial pivoting of a (nonsymmetric-storage) tridiagonal matrix.
/// Row interchanges create one extra superdiagonal.
struct TridiagLu {
    /// U diagonal, first and second superdiagonals.
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    /// multipliers and whether rows `i`, `i+1` were swapped at step `i`
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], tiny: f64) -> Self {
        let n = diag.len();
        let mut u0 = diag.to_vec();
        let mut u1: Vec<f64> = off.to_vec();
        let mut u2 = vec![0.0; n.saturating_sub(2)];
        let mut sub: Vec<f64> = off.to_vec();
        let mut mult = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if sub[i].abs() > u0[i].abs() {
                // swap rows i and i+1
                swapped[i] = true;
                let m = u0[i] / sub[i];
                mult[i] = m;
                let (r0, r1) = (sub[i], u0[i + 1]);
                let r2 = if i + 2 < n { u1[i + 1] } else { 0.0 };
                let (s1, s2) = (u1[i], 0.0);
                u0[i] = r0;
                u1[i] = r1;
                if i + 2 < n {
                    u2[i] = r2;
                }
                u0[i + 1] = s1 - m * r1;
                if i + 2 < n {
                    u1[i + 1] = s2 - m * r2;
                }
            } else {
                let pivot = if u0[i] == 0.0 { tiny } else { u0[i] };
                u0[i] = pivot;
                let m = sub[i] / pivot;
                mult[i] = m;
                u0[i + 1] -= m * u1[i];
            }
            sub[i] = 0.0;
        }
        for p in u0.iter_mut() {
            if p.abs() < tiny {
                *p = if *p < 0.0 { -tiny } else { tiny };
            }
        }
        TridiagLu {
            u0,
            u1,
            u2,
            mult,
            swapped,
        }
    }

    fn solve(&self, x: &mut [f64]) {
        let n = x.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= self.mult[i] * x[i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
        }
    }
}
