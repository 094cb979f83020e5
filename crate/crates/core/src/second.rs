//! Second-order foci on the rational normal curves cut out by the
//! first-order theory.
//!
//! For a tangent direction v the whole span pipeline is recomputed over
//! the dual numbers, moving each divisor point to first order along its
//! curve tangent. Points of the rank-one locus are lifted through the
//! deformed minors; the lift class splits into a component leaving the
//! span (the A block, degree d-2 forms) and a component inside the span
//! normal to the curve (the B block, degree d forms). The rank-one locus
//! of the reduced matrix [w; B] is a finite divisor on P^1 of degree at
//! most d + rho, matched against the divisor points and the scroll
//! vertex.

use crate::canonical::{PencilDivisor, SecantData};
use crate::curve::NodalPlaneCurve;
use crate::dual::Dual;
use crate::error::SkipReason;
use crate::field::{Fp, Ring};
use crate::focal::{combinations, FocalTensor, RncCurve, TangentSpaceS};
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::univariate::{BinaryForm, UPoly};

/// The focal tensor of a first-order deformed fiber: value part equals
/// the undeformed tensor exactly; the eps part carries the derivative.
#[derive(Debug, Clone)]
pub struct DeformedTensor {
    pub base: FocalTensor,
    /// eps[a][b][j]: eps-coefficient of y_j in entry (a, b).
    pub eps: Vec<Vec<Vec<Fp>>>,
    /// Deformed point matrix over the dual numbers (g x d).
    pub m_eps: Mat<Dual>,
}

/// Recomputes the span data and focal matrix over F_p[eps] after moving
/// divisor point i to p_i + eps * c_i * tangent_i, where c is the tangent
/// vector with coordinates `v` in the given basis. The value parts
/// reproduce the undeformed computation bit for bit.
pub fn chi_deformed(
    curve: &NodalPlaneCurve,
    frame: &crate::canonical::CanonicalFrame,
    fiber: &PencilDivisor,
    secant: &SecantData,
    ts: &TangentSpaceS,
    v: &[Fp],
) -> Result<DeformedTensor, SkipReason> {
    let p = curve.p;
    let g = frame.g;
    let d = secant.degree();
    let n = secant.w.nrows();
    assert_eq!(v.len(), ts.basis.len());
    // Motion coefficients c = sum_b v_b basis_b.
    let mut c = vec![Fp::zero(p); d];
    for (b, coef) in v.iter().enumerate() {
        for i in 0..d {
            c[i] += *coef * ts.basis[b][i];
        }
    }
    // Deformed points and tangents over the dual numbers.
    let mut dual_points = Vec::with_capacity(d);
    for i in 0..d {
        let pt = fiber.points[i];
        let tan = fiber.tangents[i];
        let dp: [Dual; 3] = std::array::from_fn(|k| Dual::new(pt[k], c[i] * tan[k]));
        dual_points.push(dp);
    }
    let mut m_eps = Mat::<Dual>::zeros(g, d, p);
    let mut mjet_eps = Mat::<Dual>::zeros(g, d, p);
    for (i, dp) in dual_points.iter().enumerate() {
        let tan = dual_tangent(curve, dp).ok_or(SkipReason::SingularValuePart)?;
        for (j, adj) in frame.adjoints.iter().enumerate() {
            m_eps[(j, i)] = adj.eval(&dp[..]);
            let mut jet = Dual::zero(p);
            for k in 0..3 {
                jet = jet + adj.partial(k).eval(&dp[..]) * tan[k];
            }
            mjet_eps[(j, i)] = jet;
        }
    }
    // Value parts must agree with the plain computation.
    for j in 0..g {
        for i in 0..d {
            debug_assert_eq!(m_eps[(j, i)].val, secant.m[(j, i)]);
            debug_assert_eq!(mjet_eps[(j, i)].val, secant.mjet[(j, i)]);
        }
    }
    // kappa_eps = kappa + eps kdot with M kdot = -Mdot kappa.
    let m_dot = Mat::from_fn(g, d, p, |j, i| m_eps[(j, i)].eps);
    let rhs: Vec<Fp> = m_dot.mul_vec(&secant.kappa).iter().map(|&x| -x).collect();
    let kdot = secant
        .m
        .particular_solution(&rhs)
        .map_err(|_| SkipReason::SingularValuePart)?;
    let kappa_eps: Vec<Dual> = (0..d)
        .map(|i| Dual::new(secant.kappa[i], kdot[i]))
        .collect();
    // W_eps = W + eps Wdot with Wdot M = -W Mdot, row by row through the
    // transpose.
    let mt = secant.m.transpose();
    let w_mdot = secant.w.matmul(&m_dot);
    let mut w_eps = Mat::<Dual>::zeros(n, g, p);
    for r in 0..n {
        let rhs: Vec<Fp> = (0..d).map(|i| -w_mdot[(r, i)]).collect();
        let row = mt
            .particular_solution(&rhs)
            .map_err(|_| SkipReason::SingularValuePart)?;
        for j in 0..g {
            w_eps[(r, j)] = Dual::new(secant.w[(r, j)], row[j]);
        }
    }
    // Deformed tangent basis: c_b + eps delta_b solving the deformed
    // conditions; the value-part condition matrix has full rank n, so a
    // correction always exists.
    let wmjet_eps = w_eps.matmul(&mjet_eps);
    let cond_val = Mat::from_fn(n, d, p, |a, j| wmjet_eps[(a, j)].val * secant.kappa[j]);
    let mut basis_eps: Vec<Vec<Dual>> = Vec::with_capacity(ts.basis.len());
    for cb in &ts.basis {
        let residual: Vec<Dual> = (0..n)
            .map(|a| {
                let mut acc = Dual::zero(p);
                for j in 0..d {
                    acc = acc + wmjet_eps[(a, j)] * kappa_eps[j] * Dual::constant(cb[j]);
                }
                acc
            })
            .collect();
        debug_assert!(residual.iter().all(|r| r.val.is_zero()));
        let rhs: Vec<Fp> = residual.iter().map(|r| -r.eps).collect();
        let delta = cond_val
            .particular_solution(&rhs)
            .map_err(|_| SkipReason::SingularValuePart)?;
        basis_eps.push((0..d).map(|j| Dual::new(cb[j], delta[j])).collect());
    }
    // Assemble the deformed tensor entries.
    let mut eps = vec![vec![vec![Fp::zero(p); d - 1]; ts.basis.len()]; n];
    for a in 0..n {
        for (b, cb) in basis_eps.iter().enumerate() {
            for j in 0..(d - 1) {
                let entry = cb[j] * wmjet_eps[(a, j)];
                debug_assert_eq!(entry.val, ts.basis[b][j] * wmjet_eps[(a, j)].val);
                eps[a][b][j] = entry.eps;
            }
        }
    }
    let base = crate::focal::focal_matrix(secant, &ts.basis);
    Ok(DeformedTensor { base, eps, m_eps })
}

/// Chart-consistent tangent direction over the dual numbers.
fn dual_tangent(curve: &NodalPlaneCurve, pt: &[Dual; 3]) -> Option<[Dual; 3]> {
    let p = curve.p;
    let grad: [Dual; 3] = std::array::from_fn(|i| curve.f.partial(i).eval(&pt[..]));
    let chart = (0..3).find(|&i| !pt[i].val.is_zero())?;
    let zero = Dual::zero(p);
    let tangent = match chart {
        0 => [zero, -grad[2], grad[1]],
        1 => [-grad[2], zero, grad[0]],
        _ => [-grad[1], grad[0], zero],
    };
    if tangent.iter().all(Ring::is_zero) {
        None
    } else {
        Some(tangent)
    }
}

/// The two blocks of the second-order focal matrix.
#[derive(Debug, Clone)]
pub struct PsiMatrix {
    /// n x (rho+1) binary forms of degree d-2: the restriction of the
    /// first-order focal matrix to the rational normal curve.
    pub a: Vec<Vec<BinaryForm>>,
    /// (d-3) x (rho+1) binary forms of degree d: the deformation
    /// component inside the span, normal to the curve.
    pub b: Vec<Vec<BinaryForm>>,
    /// The A block computed through the dual-number lift agrees exactly
    /// with direct substitution of gamma into the focal tensor.
    pub a_identity: bool,
    /// (samples with rank >= 2, total samples).
    pub rank_ge2: (usize, usize),
}

/// Assembles psi by sampling the first-order motion of the rank-one
/// locus at 2d+3 parameters per tangent direction and interpolating the
/// B block; the two extra nodes beyond the degree bound act as
/// consistency checks.
pub fn psi_assemble(
    curve: &NodalPlaneCurve,
    frame: &crate::canonical::CanonicalFrame,
    fiber: &PencilDivisor,
    secant: &SecantData,
    ts: &TangentSpaceS,
    tensor: &FocalTensor,
    rnc: &RncCurve,
) -> Result<PsiMatrix, SkipReason> {
    let p = curve.p;
    let d = secant.degree();
    let n = tensor.rows;
    let dirs = tensor.cols;
    let deg_gamma = d - 2;
    let sample_target = 2 * d + 3;
    // A block by substitution: entry (a, b) = sum_j entries[a][b][j] gamma_j.
    let mut a_block = vec![vec![BinaryForm::zero(deg_gamma, p); dirs]; n];
    for a in 0..n {
        for b in 0..dirs {
            let mut acc = BinaryForm::zero(deg_gamma, p);
            for j in 0..(d - 1) {
                let coef = tensor.entries[a][b][j];
                if !coef.is_zero() {
                    acc = acc.sub(&rnc.gamma[j].scale(-coef));
                }
            }
            a_block[a][b] = acc;
        }
    }
    // Inverse of the parametrization coefficient matrix: the bridge
    // between binary forms and span functionals.
    let phi = rnc.coefficient_matrix();
    let phi_inv = invert(&phi).ok_or(SkipReason::ParamRankDrop)?;
    // Fixed retraction onto the span: complete U with standard basis
    // vectors, invert, keep the U-coordinate rows. Changing the
    // complement only adds function multiples of A-rows to B, which
    // leaves the rank-one locus untouched.
    let g_dim = secant.m.nrows();
    let retraction = {
        let mut cols: Vec<Vec<Fp>> = (0..d - 1)
            .map(|j| (0..g_dim).map(|r| secant.u[(r, j)]).collect())
            .collect();
        let mut full = Mat::from_fn(g_dim, d - 1, p, |r, j| cols[j][r]);
        for i in 0..g_dim {
            if full.ncols() == g_dim {
                break;
            }
            let mut e = vec![Fp::zero(p); g_dim];
            e[i] = Fp::one(p);
            let cand = full.augment_col(&e);
            if cand.rank() == cand.ncols() {
                full = cand;
                cols.push(e);
            }
        }
        if full.ncols() != g_dim {
            return Err(SkipReason::SpanRankUnexpected);
        }
        let inv = invert(&full).ok_or(SkipReason::SpanRankUnexpected)?;
        Mat::from_fn(d - 1, g_dim, p, |r, j| inv[(r, j)])
    };
    // One deformation per tangent-basis direction.
    let mut deformed = Vec::with_capacity(dirs);
    for b in 0..dirs {
        let mut v = vec![Fp::zero(p); dirs];
        v[b] = Fp::one(p);
        deformed.push(chi_deformed(curve, frame, fiber, secant, ts, &v)?);
    }
    // Shared minor list (value and eps parts must pair up).
    let pair_list: Vec<(Vec<usize>, Vec<usize>)> = combinations(n, 2)
        .into_iter()
        .flat_map(|r| {
            combinations(dirs, 2)
                .into_iter()
                .map(move |c| (r.clone(), c))
        })
        .collect();
    let lin_poly = |coeffs: &Vec<Fp>| -> Poly {
        let mut f = Poly::zero(d - 1, p);
        for (j, &cj) in coeffs.iter().enumerate() {
            if !cj.is_zero() {
                f = f.add(&Poly::var(j, d - 1, p).scale(cj));
            }
        }
        f
    };
    let val_minors: Vec<Poly> = pair_list
        .iter()
        .map(|(r, c)| {
            lin_poly(&tensor.entries[r[0]][c[0]])
                .mul(&lin_poly(&tensor.entries[r[1]][c[1]]))
                .sub(
                    &lin_poly(&tensor.entries[r[0]][c[1]])
                        .mul(&lin_poly(&tensor.entries[r[1]][c[0]])),
                )
        })
        .collect();
    let minor_grads: Vec<Vec<Poly>> = val_minors
        .iter()
        .map(|q| (0..d - 1).map(|k| q.partial(k)).collect())
        .collect();
    let eps_minors: Vec<Vec<Poly>> = deformed
        .iter()
        .map(|def| {
            pair_list
                .iter()
                .map(|(r, c)| {
                    let l = |a: usize, b: usize| lin_poly(&tensor.entries[a][b]);
                    let e = |a: usize, b: usize| lin_poly(&def.eps[a][b]);
                    l(r[0], c[0])
                        .mul(&e(r[1], c[1]))
                        .add(&e(r[0], c[0]).mul(&l(r[1], c[1])))
                        .sub(&l(r[0], c[1]).mul(&e(r[1], c[0])))
                        .sub(&e(r[0], c[1]).mul(&l(r[1], c[0])))
                })
                .collect()
        })
        .collect();
    // Sample sweep: collect lifts at parameters where the tangent plane
    // of the rank-one locus is cut out cleanly.
    let mut samples: Vec<Fp> = Vec::with_capacity(sample_target);
    let mut b_samples: Vec<Vec<Vec<Fp>>> = vec![vec![Vec::new(); dirs]; d - 3];
    let mut a_identity = true;
    let mut rank_hi = 0usize;
    let mut u_try = 0i64;
    while samples.len() < sample_target {
        if u_try > 6 * d as i64 + 40 {
            return Err(SkipReason::LiftObstructed);
        }
        let u = Fp::new(u_try, p);
        u_try += 1;
        let point = rnc.eval(Fp::one(p), u);
        let jac = Mat::from_fn(val_minors.len(), d - 1, p, |q, k| {
            minor_grads[q][k].eval(&point)
        });
        if jac.rank() != d - 3 {
            continue;
        }
        let mut lift_per_dir = Vec::with_capacity(dirs);
        for b in 0..dirs {
            let rhs: Vec<Fp> = eps_minors[b].iter().map(|q| -q.eval(&point)).collect();
            match jac.particular_solution(&rhs) {
                Ok(y) => lift_per_dir.push(y),
                Err(_) => return Err(SkipReason::LiftObstructed),
            }
        }
        // In-span component of the span's own motion, pulled back to
        // span coordinates through the fixed retraction: the full in-U
        // velocity of the tracked point is y + sigma(Udot_v gamma).
        let mut inspan_per_dir = Vec::with_capacity(dirs);
        for b in 0..dirs {
            let cb = &ts.basis[b];
            let mut udot_gamma = vec![Fp::zero(p); g_dim];
            for j in 0..(d - 1) {
                let factor = point[j] * cb[j];
                if factor.is_zero() {
                    continue;
                }
                for r in 0..g_dim {
                    udot_gamma[r] += factor * secant.mjet[(r, j)];
                }
            }
            let alpha = retraction.mul_vec(&udot_gamma);
            let total: Vec<Fp> = (0..d - 1).map(|j| lift_per_dir[b][j] + alpha[j]).collect();
            inspan_per_dir.push(total);
        }
        // A-block cross-check through the embedded deformation: the eps
        // part of W (U_eps (gamma + eps y)) equals the substituted column.
        for (b, def) in deformed.iter().enumerate() {
            let x_eps: Vec<Dual> = (0..d - 1)
                .map(|j| Dual::new(point[j], lift_per_dir[b][j]))
                .collect();
            for a in 0..n {
                let mut acc = Fp::zero(p);
                for row in 0..secant.m.nrows() {
                    let mut z = Dual::zero(p);
                    for j in 0..(d - 1) {
                        z = z + def.m_eps[(row, j)] * x_eps[j];
                    }
                    acc += secant.w[(a, row)] * z.eps;
                }
                if acc != a_block[a][b].eval(Fp::one(p), u) {
                    a_identity = false;
                }
            }
        }
        // B-block samples: pair the lift class with the functionals whose
        // pullbacks through gamma are (x - u)^2 * x^k; these kill gamma(u)
        // and gamma'(u), so the value is independent of the lift choice.
        for k in 0..(d - 3) {
            let lin = UPoly::new(vec![-u, Fp::one(p)], p);
            let f = lin.mul(&lin).mul(&UPoly::monomial(Fp::one(p), k));
            let mut fc = vec![Fp::zero(p); d - 1];
            for (i, &cf) in f.coeffs().iter().enumerate() {
                fc[i] = cf;
            }
            let functional: Vec<Fp> = (0..d - 1)
                .map(|j| {
                    let mut acc = Fp::zero(p);
                    for (i, &cf) in fc.iter().enumerate() {
                        acc += cf * phi_inv[(i, j)];
                    }
                    acc
                })
                .collect();
            for (b, velocity) in inspan_per_dir.iter().enumerate() {
                let mut acc = Fp::zero(p);
                for j in 0..(d - 1) {
                    acc += functional[j] * velocity[j];
                }
                b_samples[k][b].push(acc);
            }
        }
        // psi rank at this sample.
        let mut psi_vals = Mat::<Fp>::zeros(n + d - 3, dirs, p);
        for a in 0..n {
            for b in 0..dirs {
                psi_vals[(a, b)] = a_block[a][b].eval(Fp::one(p), u);
            }
        }
        for k in 0..(d - 3) {
            for b in 0..dirs {
                psi_vals[(n + k, b)] = *b_samples[k][b].last().unwrap();
            }
        }
        if psi_vals.rank() >= 2 {
            rank_hi += 1;
        }
        samples.push(u);
    }
    // Interpolate the B block to degree d; extra nodes check consistency.
    let mut b_block = vec![vec![BinaryForm::zero(d, p); dirs]; d - 3];
    for k in 0..(d - 3) {
        for b in 0..dirs {
            let poly = UPoly::interpolate(&samples, &b_samples[k][b], d)
                .map_err(|_| SkipReason::DegreeMismatch)?;
            b_block[k][b] = BinaryForm::from_upoly(&poly, d);
        }
    }
    Ok(PsiMatrix {
        a: a_block,
        b: b_block,
        a_identity,
        rank_ge2: (rank_hi, samples.len()),
    })
}

fn invert(m: &Mat<Fp>) -> Option<Mat<Fp>> {
    let p = m.modulus();
    let nr = m.nrows();
    if m.rank() != nr {
        return None;
    }
    let mut cols = Vec::with_capacity(nr);
    for j in 0..nr {
        let mut b = vec![Fp::zero(p); nr];
        b[j] = Fp::one(p);
        cols.push(m.particular_solution(&b).ok()?);
    }
    Some(Mat::from_fn(nr, nr, p, |i, j| cols[j][i]))
}

/// The second-order rank-one locus as a divisor on P^1.
#[derive(Debug, Clone)]
pub struct SecondFociResult {
    /// gcd of all 2x2 minors of the reduced matrix [w; B]; None when all
    /// minors vanish identically (the locus degenerates to the curve).
    pub locus_form: Option<BinaryForm>,
    pub total_degree: Option<usize>,
    /// Rational roots with multiplicity; conjugate factors are accounted
    /// for by divisibility in the partition report.
    pub rational_roots: Vec<((Fp, Fp), usize)>,
    /// The catalecticant generator row w extracted from the A block.
    pub w_row: Vec<BinaryForm>,
}

/// Reduces A to its rank-one factorization A = u * w^T, forms the
/// reduced matrix N = [w; B] and computes the gcd-supported common zero
/// locus of its 2x2 minors. `NormalformFailed` flags an A block that is
/// not catalecticant-equivalent; it is never swallowed.
pub fn second_foci_locus(psi: &PsiMatrix, rho: usize) -> Result<SecondFociResult, SkipReason> {
    let n = psi.a.len();
    let dirs = psi.a[0].len();
    let p = psi.a[0][0].p;
    // All 2x2 minors of A must vanish identically.
    for rows in combinations(n, 2) {
        for cols in combinations(dirs, 2) {
            let m = psi.a[rows[0]][cols[0]]
                .mul(&psi.a[rows[1]][cols[1]])
                .sub(&psi.a[rows[0]][cols[1]].mul(&psi.a[rows[1]][cols[0]]));
            if !m.is_zero() {
                return Err(SkipReason::NormalformFailed);
            }
        }
    }
    // Factor A = u w^T: primitive part of the first nonzero row gives w.
    let row_star = (0..n)
        .find(|&a| psi.a[a].iter().any(|f| !f.is_zero()))
        .ok_or(SkipReason::NormalformFailed)?;
    let mut row_gcd = psi.a[row_star][0].clone();
    for f in &psi.a[row_star][1..] {
        row_gcd = row_gcd.gcd(f);
    }
    if row_gcd.is_zero() {
        return Err(SkipReason::NormalformFailed);
    }
    let w_row: Vec<BinaryForm> = psi.a[row_star]
        .iter()
        .map(|f| {
            if f.is_zero() {
                Ok(BinaryForm::zero(rho, p))
            } else {
                f.div_exact(&row_gcd)
            }
        })
        .collect::<Result<_, _>>()
        .map_err(|_| SkipReason::NormalformFailed)?;
    if w_row.iter().any(|f| f.degree != rho) {
        return Err(SkipReason::NormalformFailed);
    }
    // Column factors u_a and the exact rank-one identity.
    let b_star = (0..dirs)
        .find(|&b| !w_row[b].is_zero())
        .ok_or(SkipReason::NormalformFailed)?;
    let mut u_vec = Vec::with_capacity(n);
    for a in 0..n {
        let u_a = if psi.a[a][b_star].is_zero() {
            BinaryForm::zero(n - 1, p)
        } else {
            psi.a[a][b_star]
                .div_exact(&w_row[b_star])
                .map_err(|_| SkipReason::NormalformFailed)?
        };
        u_vec.push(u_a);
    }
    for a in 0..n {
        for b in 0..dirs {
            if psi.a[a][b] != u_vec[a].mul(&w_row[b]) {
                return Err(SkipReason::NormalformFailed);
            }
        }
    }
    // The column factor must have no common zero (including infinity);
    // otherwise the reduction to [w; B] would miss locus points.
    let mut u_gcd = u_vec[0].clone();
    for f in &u_vec[1..] {
        u_gcd = u_gcd.gcd(f);
    }
    if u_gcd.degree > 0 {
        return Err(SkipReason::NormalformFailed);
    }
    // gcd of the 2x2 minors of N = [w; B].
    let mut rows: Vec<Vec<BinaryForm>> = vec![w_row.clone()];
    rows.extend(psi.b.iter().cloned());
    let mut gcd_form: Option<BinaryForm> = None;
    for pair in combinations(rows.len(), 2) {
        for cols in combinations(dirs, 2) {
            let m = rows[pair[0]][cols[0]]
                .mul(&rows[pair[1]][cols[1]])
                .sub(&rows[pair[0]][cols[1]].mul(&rows[pair[1]][cols[0]]));
            if m.is_zero() {
                continue;
            }
            gcd_form = Some(match gcd_form {
                None => m,
                Some(g) => g.gcd(&m),
            });
        }
    }
    match gcd_form {
        None => Ok(SecondFociResult {
            locus_form: None,
            total_degree: None,
            rational_roots: Vec::new(),
            w_row,
        }),
        Some(g) => Ok(SecondFociResult {
            total_degree: Some(g.degree),
            rational_roots: g.rational_roots(),
            locus_form: Some(g),
            w_row,
        }),
    }
}

/// Verdict of the divisor + vertex partition of the second-order foci.
#[derive(Debug, Clone)]
pub struct PartitionReport {
    pub pass: bool,
    pub degenerate: bool,
    pub total_degree: Option<usize>,
    pub bound: usize,
    pub within_bound: bool,
    pub equality_at_bound: bool,
    pub divisor_factor_divides: bool,
    pub vertex_factor_degree: Option<usize>,
    pub vertex_factor_matches: bool,
    /// A divisor point lying in the vertex (logged, not partitioned).
    pub overlap: bool,
    pub diagnostics: String,
}

/// Matches the second-order locus against the divisor points and the
/// scroll vertex: PASS iff the locus form is exactly (product of the d
/// divisor-point parameters) times (the degree-rho vertex intersection
/// form). Conjugate vertex points are handled as polynomial factors.
pub fn vertex_partition_check(
    result: &SecondFociResult,
    rnc: &RncCurve,
    secant: &SecantData,
    vertex: &Mat<Fp>,
    rho: usize,
    d: usize,
) -> PartitionReport {
    let p = secant.m.modulus();
    let mut report = PartitionReport {
        pass: false,
        degenerate: result.locus_form.is_none(),
        total_degree: result.total_degree,
        bound: d + rho,
        within_bound: false,
        equality_at_bound: false,
        divisor_factor_divides: false,
        vertex_factor_degree: None,
        vertex_factor_matches: false,
        overlap: false,
        diagnostics: String::new(),
    };
    let Some(locus) = &result.locus_form else {
        report.diagnostics = "rank-one locus is the whole curve".into();
        return report;
    };
    report.within_bound = locus.degree <= d + rho;
    report.equality_at_bound = locus.degree == d + rho;
    // Product of the divisor-point linear forms.
    let mut divisor_form = BinaryForm::new(vec![Fp::one(p)], p);
    for t in &rnc.divisor_params {
        // Linear form vanishing at (t0 : t1).
        divisor_form = divisor_form.mul(&BinaryForm::new(vec![t.1, -t.0], p));
    }
    let quotient = match locus.div_exact(&divisor_form) {
        Ok(q) => {
            report.divisor_factor_divides = true;
            q
        }
        Err(_) => {
            report.diagnostics = "divisor points not all in the locus".into();
            return report;
        }
    };
    report.vertex_factor_degree = Some(quotient.degree);
    // Vertex intersection divisor: common vanishing of the annihilator
    // functionals pulled back through the embedded parametrization.
    let embedded = embed_curve(rnc, secant);
    let ann = vertex.transpose().right_kernel();
    let mut vertex_form: Option<BinaryForm> = None;
    for eta in &ann {
        let mut f = BinaryForm::zero(d - 2, p);
        for (i, z) in embedded.iter().enumerate() {
            if !eta[i].is_zero() {
                f = f.sub(&z.scale(-eta[i]));
            }
        }
        if f.is_zero() {
            continue;
        }
        vertex_form = Some(match vertex_form {
            None => f,
            Some(g) => g.gcd(&f),
        });
    }
    let Some(vertex_form) = vertex_form else {
        report.diagnostics = "curve contained in a vertex hyperplane".into();
        return report;
    };
    report.overlap = divisor_form.gcd(&vertex_form).degree > 0;
    report.vertex_factor_matches = quotient.degree == rho
        && vertex_form.degree == rho
        && proportional_forms(&quotient, &vertex_form);
    report.pass = report.within_bound
        && report.equality_at_bound
        && report.divisor_factor_divides
        && report.vertex_factor_matches
        && !report.overlap;
    if !report.pass && report.diagnostics.is_empty() {
        report.diagnostics = format!(
            "degree {} (bound {}), vertex factor degree {:?} vs rho = {}",
            locus.degree,
            d + rho,
            report.vertex_factor_degree,
            rho
        );
    }
    report
}

/// Coordinates of the embedded curve U * gamma(t) in k^g.
pub fn embed_curve(rnc: &RncCurve, secant: &SecantData) -> Vec<BinaryForm> {
    let p = secant.m.modulus();
    let deg = rnc.gamma[0].degree;
    let g = secant.u.nrows();
    (0..g)
        .map(|row| {
            let mut acc = BinaryForm::zero(deg, p);
            for j in 0..secant.u.ncols() {
                let c = secant.u[(row, j)];
                if !c.is_zero() {
                    acc = acc.sub(&rnc.gamma[j].scale(-c));
                }
            }
            acc
        })
        .collect()
}

fn proportional_forms(a: &BinaryForm, b: &BinaryForm) -> bool {
    if a.degree != b.degree {
        return false;
    }
    let n = a.degree + 1;
    let p = a.p;
    let mut m = Mat::<Fp>::zeros(2, n, p);
    for i in 0..n {
        m[(0, i)] = a.coeffs()[i];
        m[(1, i)] = b.coeffs()[i];
    }
    m.rank() <= 1
}
