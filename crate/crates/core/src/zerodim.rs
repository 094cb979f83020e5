//! Point extraction from a zero-dimensional ideal of quadrics.
//!
//! Once the Hilbert function of S/I stabilizes at m, the graded pieces
//! carry multiplication operators whose simultaneous eigenvectors are the
//! point evaluations. Eigenvalues of x_i relative to a generic linear
//! form recover the coordinates, all by exact linear algebra plus
//! univariate root finding.

use std::collections::BTreeMap;

use crate::field::Fp;
use crate::matrix::Mat;
use crate::poly::{monomials_of_degree, Monomial, Poly};
use crate::univariate::UPoly;

struct GradedPiece {
    monos: Vec<Monomial>,
    rref: Mat<Fp>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

fn graded_piece(quadrics: &[Poly], nvars: usize, p: u32, t: usize) -> GradedPiece {
    let monos = monomials_of_degree(nvars, t);
    let index: BTreeMap<Monomial, usize> = monos
        .iter()
        .copied()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mults = monomials_of_degree(nvars, t - 2);
    let mut rows = Vec::with_capacity(quadrics.len() * mults.len());
    for q in quadrics {
        for m in &mults {
            let prod = q.mul_monomial(m, Fp::one(p));
            let mut row = vec![Fp::zero(p); monos.len()];
            for (mono, &c) in prod.terms() {
                row[index[mono]] = c;
            }
            rows.push(row);
        }
    }
    let (rref, pivots) = Mat::from_rows(&rows, p).rref();
    let mut pivot_set = vec![false; monos.len()];
    for &c in &pivots {
        pivot_set[c] = true;
    }
    let free = (0..monos.len()).filter(|&i| !pivot_set[i]).collect();
    GradedPiece {
        monos,
        rref,
        pivots,
        free,
    }
}

impl GradedPiece {
    /// Quotient coordinates of a coefficient vector.
    fn reduce(&self, mut v: Vec<Fp>) -> Vec<Fp> {
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            for j in 0..v.len() {
                v[j] -= c * self.rref[(row, j)];
            }
        }
        self.free.iter().map(|&i| v[i]).collect()
    }

    fn dim(&self) -> usize {
        self.free.len()
    }
}

/// Multiplication by a linear form as a map between quotient pieces of
/// degree t and t+1.
fn mult_matrix(src: &GradedPiece, dst: &GradedPiece, lin: &[Fp], nvars: usize, p: u32) -> Mat<Fp> {
    let dst_index: BTreeMap<Monomial, usize> = dst
        .monos
        .iter()
        .copied()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut cols = Vec::with_capacity(src.dim());
    for &fm in &src.free {
        let mono = src.monos[fm];
        let mut v = vec![Fp::zero(p); dst.monos.len()];
        for (i, &c) in lin.iter().enumerate().take(nvars) {
            if c.is_zero() {
                continue;
            }
            let mut exps = mono.exps;
            exps[i] += 1;
            v[dst_index[&Monomial { exps }]] += c;
        }
        cols.push(dst.reduce(v));
    }
    Mat::from_fn(dst.dim(), src.dim(), p, |i, j| cols[j][i])
}

/// Characteristic polynomial by the trace recurrence; p exceeds the
/// matrix size so the divisions are safe.
fn char_poly(b: &Mat<Fp>) -> UPoly {
    let n = b.nrows();
    let p = b.modulus();
    let mut m = Mat::<Fp>::identity(n, p);
    let mut coeffs = vec![Fp::one(p)];
    for k in 1..=n {
        m = b.matmul(&m);
        let mut tr = Fp::zero(p);
        for i in 0..n {
            tr += m[(i, i)];
        }
        let ck = -(tr * Fp::new(k as i64, p).inv().unwrap());
        coeffs.push(ck);
        for i in 0..n {
            m[(i, i)] += ck;
        }
    }
    // coeffs[k] multiplies x^{n-k}.
    let mut out = vec![Fp::zero(p); n + 1];
    for (k, &c) in coeffs.iter().enumerate() {
        out[n - k] = c;
    }
    UPoly::new(out, p)
}

/// Extracts the points of V(quadrics) in P^{nvars-1} when the locus is
/// reduced, zero-dimensional of the expected length, and fully rational.
/// Returns normalized projective coordinates, deterministically sorted.
pub fn extract_points(
    quadrics: &[Poly],
    nvars: usize,
    p: u32,
    expected: usize,
) -> Option<Vec<Vec<Fp>>> {
    // Locate the stabilization degree, extending the Hilbert function
    // only as far as needed (high graded pieces are the expensive part).
    let mut t0 = None;
    for cutoff in [4usize, 6] {
        let hf = crate::focal::hilbert_function(quadrics, nvars, p, cutoff);
        for t in 2..hf.len() {
            if hf[t - 1] == hf[t] && hf[t - 1] == expected {
                t0 = Some(t); // hf[t-1] is the value in degree t
                break;
            }
        }
        if t0.is_some() {
            break;
        }
    }
    let t0 = t0?;
    let src = graded_piece(quadrics, nvars, p, t0);
    let dst = graded_piece(quadrics, nvars, p, t0 + 1);
    if src.dim() != expected || dst.dim() != expected {
        return None;
    }
    // Generic invertible denominator form.
    let mut denom = None;
    for attempt in 0..50i64 {
        let lin: Vec<Fp> = (0..nvars)
            .map(|i| Fp::new(1 + (attempt + 1) * (i as i64 + 1) * (i as i64 + 3) % 97, p))
            .collect();
        let a = mult_matrix(&src, &dst, &lin, nvars, p);
        if a.rank() == expected {
            denom = Some(a);
            break;
        }
    }
    let a_den_inv = invert(&denom?)?;
    // Commuting coordinate operators.
    let mut ops = Vec::with_capacity(nvars);
    for i in 0..nvars {
        let mut lin = vec![Fp::zero(p); nvars];
        lin[i] = Fp::one(p);
        ops.push(a_den_inv.matmul(&mult_matrix(&src, &dst, &lin, nvars, p)));
    }
    // Generic combination with squarefree characteristic polynomial.
    for attempt in 1..60i64 {
        let mut b = Mat::<Fp>::zeros(expected, expected, p);
        for (i, op) in ops.iter().enumerate() {
            let c = Fp::new(1 + attempt * (i as i64 + 1) * (i as i64 + 2), p);
            for r in 0..expected {
                for s in 0..expected {
                    b[(r, s)] += c * op[(r, s)];
                }
            }
        }
        let cp = char_poly(&b);
        if !cp.is_squarefree() {
            continue;
        }
        let roots = cp.roots_in_fp();
        if roots.len() != expected {
            continue;
        }
        let mut points = Vec::with_capacity(expected);
        for (lambda, _) in roots {
            let shifted = Mat::from_fn(expected, expected, p, |r, s| {
                b[(r, s)] - if r == s { lambda } else { Fp::zero(p) }
            });
            let kernel = shifted.right_kernel();
            if kernel.len() != 1 {
                return None;
            }
            let v = &kernel[0];
            let j = (0..expected).find(|&j| !v[j].is_zero())?;
            let mut coords = Vec::with_capacity(nvars);
            for op in &ops {
                let image = op.mul_vec(v);
                coords.push(image[j] * v[j].inv().unwrap());
            }
            // v must be a simultaneous eigenvector.
            for (op, &mu) in ops.iter().zip(&coords) {
                let image = op.mul_vec(v);
                for r in 0..expected {
                    if image[r] != mu * v[r] {
                        return None;
                    }
                }
            }
            points.push(normalize(coords));
        }
        points.sort_by_key(|pt| pt.iter().map(|c| c.residue()).collect::<Vec<_>>());
        return Some(points);
    }
    None
}

fn normalize(mut v: Vec<Fp>) -> Vec<Fp> {
    if let Some(c) = v.iter().find(|c| !c.is_zero()) {
        let inv = c.inv().unwrap();
        for x in v.iter_mut() {
            *x *= inv;
        }
    }
    v
}

fn invert(m: &Mat<Fp>) -> Option<Mat<Fp>> {
    let p = m.modulus();
    let n = m.nrows();
    if m.rank() != n {
        return None;
    }
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut b = vec![Fp::zero(p); n];
        b[j] = Fp::one(p);
        cols.push(m.particular_solution(&b).ok()?);
    }
    Some(Mat::from_fn(n, n, p, |i, j| cols[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_small() {
        let p = 101;
        let m = Mat::from_rows(
            &[
                vec![Fp::new(2, p), Fp::new(1, p)],
                vec![Fp::new(0, p), Fp::new(3, p)],
            ],
            p,
        );
        let cp = char_poly(&m);
        // (x-2)(x-3) = x^2 - 5x + 6
        assert_eq!(cp.coeff(2).residue(), 1);
        assert_eq!(cp.coeff(1), Fp::new(-5, p));
        assert_eq!(cp.coeff(0).residue(), 6);
    }

    #[test]
    fn extract_three_planted_points_in_p2() {
        // Quadrics through 3 general points of P^2 cut exactly those points.
        let p = 32003;
        let pts = [
            [Fp::new(1, p), Fp::new(2, p), Fp::new(5, p)],
            [Fp::new(1, p), Fp::new(7, p), Fp::new(11, p)],
            [Fp::new(1, p), Fp::new(13, p), Fp::new(4, p)],
        ];
        let monos = monomials_of_degree(3, 2);
        let rows: Vec<Vec<Fp>> = pts
            .iter()
            .map(|pt| {
                monos
                    .iter()
                    .map(|m| {
                        let mut v = Fp::one(p);
                        for i in 0..3 {
                            v *= pt[i].pow(m.exps[i] as u64);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let kernel = Mat::from_rows(&rows, p).right_kernel();
        let quadrics: Vec<Poly> = kernel
            .iter()
            .map(|coeffs| {
                Poly::from_terms(
                    &monos
                        .iter()
                        .copied()
                        .zip(coeffs.iter().copied())
                        .collect::<Vec<_>>(),
                    3,
                    p,
                )
            })
            .collect();
        let found = extract_points(&quadrics, 3, p, 3).expect("extraction");
        assert_eq!(found.len(), 3);
        for pt in &pts {
            let inv = pt[0].inv().unwrap();
            let norm: Vec<Fp> = pt.iter().map(|&c| c * inv).collect();
            assert!(found.contains(&norm), "missing {:?} in {:?}", norm, found);
        }
    }
}
