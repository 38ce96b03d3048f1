//! Independent references for integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

/// Values from a 60-digit mpmath diagonalization of the truncated matrix at
/// K = 30 (band values) or K = 25 (gaps), rounded to f64.
pub mod frozen {
    pub const A0_Q1: f64 = -0.455_138_604_107_413_5;
    pub const NU_6_7_Q1: f64 = -0.133_232_942_137_105_07;
    /// `M = 7, q = 1`: lowest λ at ν = 2/7 and the three-particle sum.
    pub const M7_L1: f64 = -0.403_413_433_694_257_6;
    pub const M7_SUM3: f64 = -1.261_965_471_495_928_7;
    /// `M = 9, q = 1`: (l, band 0, band 1).
    pub const M9_BANDS: [(i64, f64, f64); 5] = [
        (0, -0.455_138_604_107_413_5, 3.917_024_772_998_471),
        (1, -0.423_482_881_190_316_4, 3.323_869_882_163_280_4),
        (2, -0.335_586_643_988_994_6, 2.677_611_965_176_559_7),
        (3, -0.217_358_842_627_703_9, 2.180_518_301_707_609),
        (4, -0.124_365_847_011_695_38, 1.897_069_744_363_592_4),
    ];
    /// Zone-edge gap `λ₁ − λ₀` at `l = (M−1)/2`, `q = 1`.
    pub const EDGE_GAPS: [(usize, f64); 3] = [
        (9, 2.021_435_591_375_287_7),
        (27, 1.975_210_860_658_81),
        (81, 1.970_008_185_268_72),
    ];
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Dense form of the truncated Mathieu matrix: diagonal `(ν + 2n)²`,
/// off-diagonal `q`, `n ∈ [−K, K]`.
pub fn dense_mathieu(nu: f64, q: f64, k: usize) -> Vec<Vec<f64>> {
    let dim = 2 * k + 1;
    let mut a = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        let n = i as f64 - k as f64;
        a[i][i] = (nu + 2.0 * n).powi(2);
        if i + 1 < dim {
            a[i][i + 1] = q;
            a[i + 1][i] = q;
        }
    }
    a
}
