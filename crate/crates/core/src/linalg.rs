//! Dense helpers for the 1-, 2- and 3-dimensional objects used across the crate.
//!
//! Vectors are plain slices; the symmetric eigenvalue routines work on fixed
//! 2×2 and 3×3 arrays and need no external linear-algebra dependency.

pub type Mat2 = [[f64; 2]; 2];
pub type Mat3 = [[f64; 3]; 3];

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

/// `a - b`, componentwise.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `x + alpha * y`, componentwise.
pub fn axpy(x: &[f64], alpha: f64, y: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a + alpha * b).collect()
}

pub fn scale(alpha: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| alpha * v).collect()
}

/// Eigenvalues of a symmetric 2×2 matrix, ascending.
pub fn sym2_eigenvalues(m: &Mat2) -> [f64; 2] {
    let mean = 0.5 * (m[0][0] + m[1][1]);
    let half_diff = 0.5 * (m[0][0] - m[1][1]);
    let radius = half_diff.hypot(m[0][1]);
    [mean - radius, mean + radius]
}

/// Eigenvalues of a symmetric 3×3 matrix, ascending.
///
/// Uses the trigonometric solution of the characteristic polynomial. The
/// result is accepted only when it reproduces the trace and the Frobenius
/// norm of the input and its eigenvalues are well separated, since the
/// trigonometric form loses half the digits near a repeated eigenvalue;
/// otherwise cyclic Jacobi rotations are used.
pub fn sym3_eigenvalues(m: &Mat3) -> [f64; 3] {
    let closed = sym3_eigenvalues_closed_form(m);
    let scale = frobenius(m).max(f64::MIN_POSITIVE);
    let trace = m[0][0] + m[1][1] + m[2][2];
    let trace_err = (closed.iter().sum::<f64>() - trace).abs();
    let fro_err = (closed.iter().map(|e| e * e).sum::<f64>().sqrt() - frobenius(m)).abs();
    let min_gap = (closed[1] - closed[0]).min(closed[2] - closed[1]);
    if closed.iter().all(|e| e.is_finite())
        && trace_err <= 1e-12 * scale
        && fro_err <= 1e-12 * scale
        && min_gap > 1e-4 * scale
    {
        closed
    } else {
        sym3_eigenvalues_jacobi(m)
    }
}

fn frobenius(m: &Mat3) -> f64 {
    m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn sym3_eigenvalues_closed_form(m: &Mat3) -> [f64; 3] {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    if p1 == 0.0 {
        let mut d = [m[0][0], m[1][1], m[2][2]];
        d.sort_by(f64::total_cmp);
        return d;
    }
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q, q, q];
    }
    let mut b = [[0.0; 3]; 3];
    for (i, row) in b.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (m[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (0.5 * det_b).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let largest = q + 2.0 * p * phi.cos();
    let smallest = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let middle = 3.0 * q - largest - smallest;
    let mut e = [smallest, middle, largest];
    e.sort_by(f64::total_cmp);
    e
}

pub(crate) fn sym3_eigenvalues_jacobi(m: &Mat3) -> [f64; 3] {
    let mut a = *m;
    for _sweep in 0..64 {
        let off = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
        if off <= f64::EPSILON * f64::EPSILON * frobenius(&a).powi(2) {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut next = a;
            for k in 0..3 {
                next[k][p] = c * a[k][p] - s * a[k][q];
                next[k][q] = s * a[k][p] + c * a[k][q];
            }
            a = next;
            for k in 0..3 {
                next[p][k] = c * a[p][k] - s * a[q][k];
                next[q][k] = s * a[p][k] + c * a[q][k];
            }
            a = next;
        }
    }
    let mut d = [a[0][0], a[1][1], a[2][2]];
    d.sort_by(f64::total_cmp);
    d
}

/// Singular values of a symmetric matrix, descending.
pub fn sym3_singular_values(m: &Mat3) -> [f64; 3] {
    let mut s = sym3_eigenvalues(m).map(f64::abs);
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn outer3(v: &[f64; 3]) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = v[i] * v[j];
        }
    }
    m
}

pub fn max_abs_diff3(a: &Mat3, b: &Mat3) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
