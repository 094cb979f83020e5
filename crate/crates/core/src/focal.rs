//! First-order focal theory.
//!
//! The tangent space to the divisor family at a split fiber is cut out
//! inside k^d by the linearized rank condition W M'(c) kappa = 0. The
//! focal matrix is the induced n x (rho+1) matrix of linear forms on the
//! span: entry (a, b) at span coordinates y is row a of W M'(c_b) (y, 0).
//! Its rank-one locus is classified by Hilbert-function signatures into
//! the divisor itself or a rational normal curve through it.

use serde::Serialize;

use crate::canonical::{PencilDivisor, PencilParam, SecantData};
use crate::curve::NodalPlaneCurve;
use crate::error::SkipReason;
use crate::field::Fp;
use crate::matrix::Mat;
use crate::poly::{monomials_of_degree, Monomial, Poly};
use crate::univariate::{BinaryForm, UPoly};

/// Basis of T_{S,s} in point-motion coordinates, plus the distinguished
/// direction tangent to the pencil itself.
#[derive(Debug, Clone)]
pub struct TangentSpaceS {
    /// rho+1 vectors in k^d, reduced echelon basis.
    pub basis: Vec<Vec<Fp>>,
    /// The pencil direction as a raw motion vector in k^d.
    pub pencil_motion: Vec<Fp>,
    /// The same direction expressed in `basis` coordinates.
    pub pencil_in_basis: Vec<Fp>,
}

/// Linearization of the rank-(d-1) condition: solutions c of
/// W M'(c) kappa = 0, where point i moves with velocity c_i * tangent_i.
/// The dimension must be rho + 1.
pub fn tangent_space_s(
    curve: &NodalPlaneCurve,
    fiber: &PencilDivisor,
    secant: &SecantData,
    rho: usize,
) -> Result<TangentSpaceS, SkipReason> {
    let p = curve.p;
    let d = secant.degree();
    let wmjet = secant.w.matmul(&secant.mjet);
    let condition = Mat::from_fn(wmjet.nrows(), d, p, |a, j| wmjet[(a, j)] * secant.kappa[j]);
    let basis = condition.right_kernel();
    if basis.len() != rho + 1 {
        return Err(SkipReason::TsDimUnexpected);
    }
    let pencil_motion = pencil_direction(curve, fiber)?;
    // Express the pencil motion in the basis; it must lie in the span.
    let basis_mat = Mat::from_fn(d, basis.len(), p, |i, b| basis[b][i]);
    let pencil_in_basis = basis_mat
        .particular_solution(&pencil_motion)
        .map_err(|_| SkipReason::TsDimUnexpected)?;
    Ok(TangentSpaceS {
        basis,
        pencil_motion,
        pencil_in_basis,
    })
}

/// Velocity coefficients of the divisor points as the pencil parameter
/// moves to first order: point i moves with velocity c_i * tangent_i
/// modulo rescaling of the representative.
fn pencil_direction(curve: &NodalPlaneCurve, fiber: &PencilDivisor) -> Result<Vec<Fp>, SkipReason> {
    let p = curve.p;
    let q = crate::curve::normalize_point(curve.marked_node());
    let (a_axis, b_axis) = crate::canonical::pencil_axes(&q);
    let dir = fiber.dir_point;
    // Derivative of the direction point in the pencil chart.
    let mut ddir = [Fp::zero(p); 3];
    if fiber.param.0.is_zero() {
        ddir[a_axis] = Fp::one(p);
    } else {
        ddir[b_axis] = Fp::one(p);
    }
    let mut motion = Vec::with_capacity(fiber.points.len());
    for (i, &u) in fiber.roots.iter().enumerate() {
        let raw = [q[0] + u * dir[0], q[1] + u * dir[1], q[2] + u * dir[2]];
        let grad = curve.gradient_at(&raw);
        let g_u = dot3(&grad, &dir);
        if g_u.is_zero() {
            return Err(SkipReason::DegenerateLine);
        }
        let g_t = dot3(&grad, &[u * ddir[0], u * ddir[1], u * ddir[2]]);
        let du_dt = -(g_t * g_u.inv().unwrap());
        let velocity = [
            du_dt * dir[0] + u * ddir[0],
            du_dt * dir[1] + u * ddir[1],
            du_dt * dir[2] + u * ddir[2],
        ];
        // Rescale to the normalized representative stored in the fiber.
        let lambda = raw.iter().find(|c| !c.is_zero()).unwrap().inv().unwrap();
        let scaled = [
            velocity[0] * lambda,
            velocity[1] * lambda,
            velocity[2] * lambda,
        ];
        // Decompose: velocity = c * tangent + mu * point.
        let pt = fiber.points[i];
        let tan = fiber.tangents[i];
        let system = Mat::from_fn(3, 2, p, |r, c| if c == 0 { tan[r] } else { pt[r] });
        let sol = system
            .particular_solution(&scaled)
            .map_err(|_| SkipReason::TsDimUnexpected)?;
        motion.push(sol[0]);
    }
    Ok(motion)
}

fn dot3(a: &[Fp; 3], b: &[Fp; 3]) -> Fp {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// The focal matrix as a 3-tensor: n x (rho+1) linear forms in the d-1
/// span coordinates, together with the structural data it was built from.
#[derive(Debug, Clone)]
pub struct FocalTensor {
    pub p: u32,
    /// n (the V/U side).
    pub rows: usize,
    /// rho + 1 (the tangent side).
    pub cols: usize,
    /// d - 1 span coordinates.
    pub nvars: usize,
    /// entries[a][b][j]: coefficient of y_j in the (a, b) linear form.
    pub entries: Vec<Vec<Vec<Fp>>>,
    /// Tangent basis vectors c_b in k^d.
    pub tangent_basis: Vec<Vec<Fp>>,
    /// W * Mjet, the normal images of the point motions (n x d).
    pub wmjet: Mat<Fp>,
}

impl FocalTensor {
    /// Scalar matrix obtained by evaluating all entries at span
    /// coordinates y.
    pub fn eval_at(&self, y: &[Fp]) -> Mat<Fp> {
        Mat::from_fn(self.rows, self.cols, self.p, |a, b| {
            let mut acc = Fp::zero(self.p);
            for j in 0..self.nvars {
                acc += self.entries[a][b][j] * y[j];
            }
            acc
        })
    }

    /// The n x (d-1) scalar matrix H^0(chi)(v) for a tangent vector v in
    /// basis coordinates.
    pub fn row_matrix_at(&self, v: &[Fp]) -> Mat<Fp> {
        Mat::from_fn(self.rows, self.nvars, self.p, |a, j| {
            let mut acc = Fp::zero(self.p);
            for b in 0..self.cols {
                acc += v[b] * self.entries[a][b][j];
            }
            acc
        })
    }

    /// True when the entries agree with the structural product form
    /// entries[a][b][j] = (c_b)_j * wmjet[a][j].
    fn has_product_structure(&self) -> bool {
        if self.tangent_basis.len() != self.cols || self.wmjet.nrows() != self.rows {
            return false;
        }
        for a in 0..self.rows {
            for b in 0..self.cols {
                for j in 0..self.nvars {
                    if self.entries[a][b][j] != self.tangent_basis[b][j] * self.wmjet[(a, j)] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Assembles the focal matrix from the span data and a tangent basis.
pub fn focal_matrix(secant: &SecantData, tangent_basis: &[Vec<Fp>]) -> FocalTensor {
    let p = secant.m.modulus();
    let d = secant.degree();
    let n = secant.w.nrows();
    let wmjet = secant.w.matmul(&secant.mjet);
    let entries = (0..n)
        .map(|a| {
            tangent_basis
                .iter()
                .map(|c| (0..d - 1).map(|j| c[j] * wmjet[(a, j)]).collect())
                .collect()
        })
        .collect();
    FocalTensor {
        p,
        rows: n,
        cols: tangent_basis.len(),
        nvars: d - 1,
        entries,
        tangent_basis: tangent_basis.to_vec(),
        wmjet,
    }
}

/// 1-genericity verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum OneGenericVerdict {
    /// No nonzero tangent vector drops the rank of H^0(chi)(v); decided
    /// exactly.
    GenericExact,
    /// Verified only on the given number of sampled directions.
    GenericSampled(usize),
    /// A rank-dropping direction exists; rational witness when available.
    NotGeneric {
        witness: Option<Vec<Fp>>,
        note: String,
    },
}

impl OneGenericVerdict {
    pub fn is_generic(&self) -> bool {
        !matches!(self, OneGenericVerdict::NotGeneric { .. })
    }
}

/// Decides surjectivity of H^0(chi)(v) for every nonzero v.
///
/// For tensors carrying their structural data the decision is exact for
/// every rho: H^0(chi)(v) is W Mjet with column j scaled by the linear
/// form l_j(v), so a rank drop happens iff zeroing some simultaneously
/// annihilable column set leaves fewer than n independent columns. That
/// is a finite subset enumeration with rational witnesses. Tensors
/// without the product structure fall back to symbolic minors: exact gcd
/// for a 2-column tangent side, sampling otherwise.
pub fn one_generic_test(tensor: &FocalTensor) -> OneGenericVerdict {
    if tensor.has_product_structure() {
        structural_decision(tensor)
    } else {
        generic_decision(tensor)
    }
}

fn structural_decision(tensor: &FocalTensor) -> OneGenericVerdict {
    let p = tensor.p;
    let n = tensor.rows;
    let m = tensor.nvars;
    // cmat[j] = the linear form l_j as a vector over tangent coordinates.
    let cmat: Vec<Vec<Fp>> = (0..m)
        .map(|j| tensor.tangent_basis.iter().map(|c| c[j]).collect())
        .collect();
    for mask in 0u32..(1 << m) {
        let z: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
        let vz: Vec<Vec<Fp>> = if z.is_empty() {
            // V_empty = everything.
            Mat::<Fp>::zeros(1, tensor.cols, p).right_kernel()
        } else {
            let rows: Vec<Vec<Fp>> = z.iter().map(|&j| cmat[j].clone()).collect();
            Mat::from_rows(&rows, p).right_kernel()
        };
        if vz.is_empty() {
            continue;
        }
        // Keep the columns whose form does not vanish on all of V_Z.
        let keep: Vec<usize> = (0..m)
            .filter(|&j| {
                vz.iter().any(|v| {
                    let mut acc = Fp::zero(p);
                    for (b, &vb) in v.iter().enumerate() {
                        acc += cmat[j][b] * vb;
                    }
                    !acc.is_zero()
                })
            })
            .collect();
        if tensor.wmjet.select_cols(&keep).rank() < n {
            return OneGenericVerdict::NotGeneric {
                witness: Some(vz[0].clone()),
                note: format!("columns {:?} annihilated", z),
            };
        }
    }
    OneGenericVerdict::GenericExact
}

fn generic_decision(tensor: &FocalTensor) -> OneGenericVerdict {
    let p = tensor.p;
    let vvars = tensor.cols;
    let minors = symbolic_row_minors(tensor);
    if minors.iter().all(Poly::is_zero) {
        let mut witness = vec![Fp::zero(p); vvars];
        witness[0] = Fp::one(p);
        return OneGenericVerdict::NotGeneric {
            witness: Some(witness),
            note: "all maximal minors vanish identically".into(),
        };
    }
    if vvars == 2 {
        // Binary forms: exact via gcd.
        let deg = tensor.rows;
        let nonzero: Vec<&Poly> = minors.iter().filter(|q| !q.is_zero()).collect();
        let mut g = binary_from_poly(nonzero[0], deg);
        for q in &nonzero[1..] {
            g = g.gcd(&binary_from_poly(q, deg));
            if g.degree == 0 {
                break;
            }
        }
        if g.degree == 0 {
            return OneGenericVerdict::GenericExact;
        }
        let witness = g
            .rational_roots()
            .first()
            .map(|&((t0, t1), _)| vec![t0, t1]);
        OneGenericVerdict::NotGeneric {
            witness,
            note: format!("common minor factor of degree {}", g.degree),
        }
    } else {
        // Monte Carlo over a deterministic stream plus basis vectors.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1337);
        let samples = 10 * p as usize;
        for b in 0..vvars {
            let mut v = vec![Fp::zero(p); vvars];
            v[b] = Fp::one(p);
            if tensor.row_matrix_at(&v).rank() < tensor.rows {
                return OneGenericVerdict::NotGeneric {
                    witness: Some(v),
                    note: "basis direction drops rank".into(),
                };
            }
        }
        for _ in 0..samples {
            let v: Vec<Fp> = (0..vvars)
                .map(|_| Fp::new(rng.random_range(0..p as i64), p))
                .collect();
            if v.iter().all(|c| c.is_zero()) {
                continue;
            }
            if tensor.row_matrix_at(&v).rank() < tensor.rows {
                return OneGenericVerdict::NotGeneric {
                    witness: Some(v),
                    note: "sampled direction drops rank".into(),
                };
            }
        }
        OneGenericVerdict::GenericSampled(samples + vvars)
    }
}

/// The n x n minors of H^0(chi)(v) as polynomials in the tangent
/// coordinates v.
fn symbolic_row_minors(tensor: &FocalTensor) -> Vec<Poly> {
    let p = tensor.p;
    let n = tensor.rows;
    let vvars = tensor.cols;
    let lin = |a: usize, j: usize| -> Poly {
        let mut f = Poly::zero(vvars, p);
        for b in 0..vvars {
            if !tensor.entries[a][b][j].is_zero() {
                f = f.add(&Poly::var(b, vvars, p).scale(tensor.entries[a][b][j]));
            }
        }
        f
    };
    let mut out = Vec::new();
    for cols in combinations(tensor.nvars, n) {
        out.push(det_poly(&|a, k| lin(a, cols[k]), n, vvars, p));
    }
    out
}

fn det_poly(entry: &dyn Fn(usize, usize) -> Poly, n: usize, nvars: usize, p: u32) -> Poly {
    // Permutation expansion; n <= 3 in practice.
    let mut acc = Poly::zero(nvars, p);
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut term = Poly::constant(Fp::one(p), nvars);
        for (r, &c) in perm.iter().enumerate() {
            term = term.mul(&entry(r, c));
        }
        if permutation_sign(&perm) < 0 {
            term = term.neg();
        }
        acc = acc.add(&term);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    acc
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Interpret a 2-variable polynomial as a binary form of the stated
/// degree, variable 0 playing t0.
fn binary_from_poly(q: &Poly, degree: usize) -> BinaryForm {
    let p = q.p;
    let mut coeffs = vec![Fp::zero(p); degree + 1];
    for (m, &c) in q.terms() {
        coeffs[m.exps[1] as usize] = c;
    }
    BinaryForm::new(coeffs, p)
}

/// Direct rank evaluation of H^0(chi)(v): re-verification of
/// 1-genericity witnesses.
pub fn rank_drop_at(tensor: &FocalTensor, v: &[Fp]) -> usize {
    tensor.row_matrix_at(v).rank()
}

/// Evaluates the focal matrix at the d divisor points; the matrix must
/// have rank at most 1 at each.
pub fn divisor_containment(tensor: &FocalTensor, secant: &SecantData) -> (bool, Vec<usize>) {
    let mut ranks = Vec::new();
    for coords in secant.divisor_lambda_coords() {
        ranks.push(tensor.eval_at(&coords).rank());
    }
    (ranks.iter().all(|&r| r <= 1), ranks)
}

/// All 2x2 minors of the focal matrix: quadrics in the span coordinates,
/// in deterministic pair order, duplicates retained.
pub fn rank_locus_minors(tensor: &FocalTensor) -> Vec<Poly> {
    let p = tensor.p;
    let nv = tensor.nvars;
    let lin = |a: usize, b: usize| -> Poly {
        let mut f = Poly::zero(nv, p);
        for j in 0..nv {
            if !tensor.entries[a][b][j].is_zero() {
                f = f.add(&Poly::var(j, nv, p).scale(tensor.entries[a][b][j]));
            }
        }
        f
    };
    let mut out = Vec::new();
    for rows in combinations(tensor.rows, 2) {
        for cols in combinations(tensor.cols, 2) {
            let q = lin(rows[0], cols[0])
                .mul(&lin(rows[1], cols[1]))
                .sub(&lin(rows[0], cols[1]).mul(&lin(rows[1], cols[0])));
            out.push(q);
        }
    }
    out
}

/// Deduplicated, monic-normalized generators of the rank-one locus ideal.
pub fn rank_locus_ideal(tensor: &FocalTensor) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for q in rank_locus_minors(tensor) {
        if q.is_zero() {
            continue;
        }
        let lead = *q.terms().next_back().expect("nonzero").1;
        let qn = q.scale(lead.inv().unwrap());
        if !out.contains(&qn) {
            out.push(qn);
        }
    }
    out
}

/// Hilbert function of S/(quadrics) in degrees 1..=t_max, computed as
/// dim S_t minus the rank of the monomial-multiples matrix.
pub fn hilbert_function(quadrics: &[Poly], nvars: usize, p: u32, t_max: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let monos_t = monomials_of_degree(nvars, t);
        if t < 2 || quadrics.is_empty() {
            out.push(monos_t.len());
            continue;
        }
        let index: std::collections::BTreeMap<Monomial, usize> = monos_t
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
                let mut row = vec![Fp::zero(p); monos_t.len()];
                for (mono, &c) in prod.terms() {
                    row[index[mono]] = c;
                }
                rows.push(row);
            }
        }
        let rank = Mat::from_rows(&rows, p).rank();
        out.push(monos_t.len() - rank);
    }
    out
}

/// Reference Hilbert signature of the rank-one locus of the generic
/// catalecticant (Hankel) matrix of the same shape: entry (a, b) is the
/// coordinate x_{a+b}. Computed per shape, not assumed.
pub fn hilbert_reference_rnc(rows: usize, cols: usize, p: u32, t_max: usize) -> Vec<usize> {
    let nvars = rows + cols - 1;
    let lin = |a: usize, b: usize| Poly::var(a + b, nvars, p);
    let mut quadrics = Vec::new();
    for r in combinations(rows, 2) {
        for c in combinations(cols, 2) {
            let q = lin(r[0], c[0])
                .mul(&lin(r[1], c[1]))
                .sub(&lin(r[0], c[1]).mul(&lin(r[1], c[0])));
            quadrics.push(q);
        }
    }
    hilbert_function(&quadrics, nvars, p, t_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    DivisorOnly,
    Rnc,
    Degenerate,
}

/// A parametrized rational normal curve inside the span.
#[derive(Debug, Clone)]
pub struct RncCurve {
    /// Coordinate forms of degree d-2 in the curve parameter.
    pub gamma: Vec<BinaryForm>,
    /// Parameter of each divisor point on the curve.
    pub divisor_params: Vec<PencilParam>,
}

impl RncCurve {
    pub fn eval(&self, t0: Fp, t1: Fp) -> Vec<Fp> {
        self.gamma.iter().map(|f| f.eval(t0, t1)).collect()
    }

    /// Coefficient matrix of the parametrization; full rank iff the
    /// image spans the whole P^{d-2}.
    pub fn coefficient_matrix(&self) -> Mat<Fp> {
        let p = self.gamma[0].p;
        let deg = self.gamma[0].degree;
        Mat::from_fn(self.gamma.len(), deg + 1, p, |i, j| {
            self.gamma[i].coeffs()[j]
        })
    }
}

/// Full first-order report for one fiber.
#[derive(Debug, Clone)]
pub struct RankLocusReport {
    pub minors: Vec<Poly>,
    pub raw_minor_count: usize,
    pub divisor_contained: bool,
    pub ranks_at_divisor: Vec<usize>,
    pub hilbert: Vec<usize>,
    pub reference_rnc: Vec<usize>,
    pub classification: Classification,
    pub rnc: Option<RncCurve>,
}

/// Classifies the rank-one locus by its Hilbert signature: the computed
/// catalecticant reference means a rational normal curve (confirmed by
/// parametrization), a stabilized value at most d means the divisor
/// alone, anything else is degenerate and the fiber is skipped.
pub fn hilbert_classify(
    tensor: &FocalTensor,
    secant: &SecantData,
    d: usize,
    t_max: usize,
) -> Result<RankLocusReport, SkipReason> {
    let reference = hilbert_reference_rnc(tensor.rows, tensor.cols, tensor.p, t_max);
    hilbert_classify_with_reference(tensor, secant, d, t_max, &reference)
}

/// As `hilbert_classify` with the reference signature precomputed once
/// per shape (it only depends on rows, cols and t_max).
pub fn hilbert_classify_with_reference(
    tensor: &FocalTensor,
    secant: &SecantData,
    d: usize,
    t_max: usize,
    reference: &[usize],
) -> Result<RankLocusReport, SkipReason> {
    let p = tensor.p;
    let raw_minor_count = rank_locus_minors(tensor).len();
    let minors = rank_locus_ideal(tensor);
    let (divisor_contained, ranks_at_divisor) = divisor_containment(tensor, secant);
    let hilbert = hilbert_function(&minors, tensor.nvars, p, t_max);
    let reference_rnc = reference.to_vec();
    // The two signatures must be distinguishable at t_max.
    assert!(
        (d - 2) * t_max + 1 > d,
        "t_max too small to separate signatures for d = {}",
        d
    );
    let looks_rnc = hilbert == reference_rnc;
    let looks_divisor = stabilizes_at_most(&hilbert, d);
    let classification = match (looks_rnc, looks_divisor) {
        (true, true) => return Err(SkipReason::ClassifyAmbiguous),
        (true, false) => Classification::Rnc,
        (false, true) => Classification::DivisorOnly,
        (false, false) => return Err(SkipReason::ClassifyDegenerate),
    };
    let rnc = if classification == Classification::Rnc {
        Some(rnc_parametrize(tensor, secant)?)
    } else {
        None
    };
    Ok(RankLocusReport {
        minors,
        raw_minor_count,
        divisor_contained,
        ranks_at_divisor,
        hilbert,
        reference_rnc,
        classification,
        rnc,
    })
}

fn stabilizes_at_most(hf: &[usize], bound: usize) -> bool {
    for i in 0..hf.len().saturating_sub(1) {
        if hf[i] == hf[i + 1] {
            return hf[i] <= bound && hf[i..].iter().all(|&v| v == hf[i]);
        }
    }
    false
}

/// Parametrizes the rank-one locus when one side of the focal matrix has
/// length 2: gamma(t) is the kernel of the (d-2) x (d-1) moving system
/// t1 * side_1(y) - t0 * side_2(y) = 0, computed as signed maximal
/// minors, a vector of binary forms of degree d-2. Post-conditions: no
/// base locus, nondegenerate image, all minors vanish on gamma, and all
/// d divisor points lie on it.
pub fn rnc_parametrize(tensor: &FocalTensor, secant: &SecantData) -> Result<RncCurve, SkipReason> {
    let p = tensor.p;
    let m = tensor.nvars; // d - 1
    let deg = m - 1; // d - 2
    let use_cols = if tensor.cols == 2 {
        true
    } else if tensor.rows == 2 {
        false
    } else {
        return Err(SkipReason::UnsupportedShape);
    };
    // The moving system as two (d-2) x (d-1) coefficient matrices:
    // stacked(t) = t1 * s1 - t0 * s2.
    let (s1, s2) = if use_cols {
        (
            Mat::from_fn(tensor.rows, m, p, |a, j| tensor.entries[a][0][j]),
            Mat::from_fn(tensor.rows, m, p, |a, j| tensor.entries[a][1][j]),
        )
    } else {
        (
            Mat::from_fn(tensor.cols, m, p, |b, j| tensor.entries[0][b][j]),
            Mat::from_fn(tensor.cols, m, p, |b, j| tensor.entries[1][b][j]),
        )
    };
    debug_assert_eq!(s1.nrows(), deg);
    let stacked_at = |t0: Fp, t1: Fp| -> Mat<Fp> {
        Mat::from_fn(deg, m, p, |r, j| t1 * s1[(r, j)] - t0 * s2[(r, j)])
    };
    // Corank must be exactly 1 for at least 3 sampled parameters.
    let mut good = 0;
    for u in 0..(deg as i64 + 5) {
        if stacked_at(Fp::one(p), Fp::new(u, p)).rank() == deg {
            good += 1;
        }
    }
    if good < 3 {
        return Err(SkipReason::ParamRankDrop);
    }
    // Signed maximal minors via evaluation-interpolation.
    let nodes: Vec<Fp> = (0..deg as i64 + 1).map(|u| Fp::new(u, p)).collect();
    let mut gamma = Vec::with_capacity(m);
    for j in 0..m {
        let keep: Vec<usize> = (0..m).filter(|&c| c != j).collect();
        let vals: Vec<Fp> = nodes
            .iter()
            .map(|&u| {
                let det = stacked_at(Fp::one(p), u).select_cols(&keep).det();
                if j % 2 == 0 {
                    det
                } else {
                    -det
                }
            })
            .collect();
        let poly = UPoly::interpolate(&nodes, &vals, deg).expect("degree bound exact");
        gamma.push(BinaryForm::from_upoly(&poly, deg));
    }
    if gamma.iter().all(BinaryForm::is_zero) {
        return Err(SkipReason::ParamRankDrop);
    }
    // No base locus: coordinate forms have no common factor.
    let mut common = gamma[0].clone();
    for f in &gamma[1..] {
        common = common.gcd(f);
    }
    if common.degree > 0 {
        return Err(SkipReason::ParamRankDrop);
    }
    let rnc = RncCurve {
        gamma,
        divisor_params: Vec::new(),
    };
    // Nondegeneracy: the image must span P^{d-2}.
    if rnc.coefficient_matrix().rank() != m {
        return Err(SkipReason::ParamRankDrop);
    }
    // All minors vanish identically on gamma.
    for q in rank_locus_ideal(tensor) {
        if !quadric_on_curve(&q, &rnc.gamma).is_zero() {
            return Err(SkipReason::ParamRankDrop);
        }
    }
    // Locate the divisor points on the curve.
    let mut divisor_params = Vec::with_capacity(m + 1);
    for coords in secant.divisor_lambda_coords() {
        let e = tensor.eval_at(&coords);
        let (v1, v2): (Vec<Fp>, Vec<Fp>) = if use_cols {
            (
                (0..tensor.rows).map(|a| e[(a, 0)]).collect(),
                (0..tensor.rows).map(|a| e[(a, 1)]).collect(),
            )
        } else {
            (
                (0..tensor.cols).map(|b| e[(0, b)]).collect(),
                (0..tensor.cols).map(|b| e[(1, b)]).collect(),
            )
        };
        let Some(k) = (0..v1.len()).find(|&k| !v1[k].is_zero() || !v2[k].is_zero()) else {
            return Err(SkipReason::ParamRankDrop);
        };
        // (t0 : t1) proportional to (v1[k] : v2[k]); consistency across k.
        for l in 0..v1.len() {
            if v1[k] * v2[l] != v1[l] * v2[k] {
                return Err(SkipReason::ParamRankDrop);
            }
        }
        let t = if v1[k].is_zero() {
            PencilParam::infinity(p)
        } else {
            PencilParam::finite(v2[k] * v1[k].inv().unwrap())
        };
        let img = rnc.eval(t.0, t.1);
        if !proportional(&img, &coords) {
            return Err(SkipReason::ParamRankDrop);
        }
        divisor_params.push(t);
    }
    // Distinct parameters: the divisor supports are distinct points.
    for i in 0..divisor_params.len() {
        for j in (i + 1)..divisor_params.len() {
            if divisor_params[i] == divisor_params[j] {
                return Err(SkipReason::ParamRankDrop);
            }
        }
    }
    Ok(RncCurve {
        gamma: rnc.gamma,
        divisor_params,
    })
}

/// Substitute a parametrized curve into a quadric, giving a binary form
/// of degree 2 deg(gamma).
pub fn quadric_on_curve(q: &Poly, gamma: &[BinaryForm]) -> BinaryForm {
    let p = q.p;
    let deg = gamma[0].degree;
    let mut acc = BinaryForm::zero(2 * deg, p);
    for (mono, &c) in q.terms() {
        let mut factors = Vec::new();
        for (i, &e) in mono.exps.iter().enumerate() {
            for _ in 0..e {
                factors.push(i);
            }
        }
        debug_assert_eq!(factors.len(), 2);
        let prod = gamma[factors[0]].mul(&gamma[factors[1]]).scale(c);
        acc = add_forms(&acc, &prod);
    }
    acc
}

fn add_forms(a: &BinaryForm, b: &BinaryForm) -> BinaryForm {
    a.sub(&b.scale(-Fp::one(b.p)))
}

pub fn proportional(a: &[Fp], b: &[Fp]) -> bool {
    assert_eq!(a.len(), b.len());
    let p = a[0].modulus();
    let mut m = Mat::zeros(2, a.len(), p);
    for i in 0..a.len() {
        m[(0, i)] = a[i];
        m[(1, i)] = b[i];
    }
    m.rank() <= 1
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::canonical::{adjoint_basis, pencil_fiber, secant_span, CanonicalFrame};
    use crate::curve::{feasibility_params, random_nodal_curve, CaseParams};

    pub struct FiberCtx {
        pub params: CaseParams,
        pub curve: NodalPlaneCurve,
        pub frame: CanonicalFrame,
        pub fiber: PencilDivisor,
        pub secant: SecantData,
        pub ts: TangentSpaceS,
        pub tensor: FocalTensor,
    }

    pub fn fiber_ctx(g: usize, d: usize, seed: u64, skip: usize) -> FiberCtx {
        let params = feasibility_params(g, d).unwrap();
        let curve = random_nodal_curve(&params, 32003, seed).unwrap();
        let frame = adjoint_basis(&curve).unwrap();
        let mut found = 0;
        for t in PencilParam::sweep(curve.p) {
            let Ok(fiber) = pencil_fiber(&curve, t) else {
                continue;
            };
            let Ok(secant) = secant_span(&frame, &fiber) else {
                continue;
            };
            let Ok(ts) = tangent_space_s(&curve, &fiber, &secant, params.rho) else {
                continue;
            };
            if found < skip {
                found += 1;
                continue;
            }
            let tensor = focal_matrix(&secant, &ts.basis);
            return FiberCtx {
                params,
                curve,
                frame,
                fiber,
                secant,
                ts,
                tensor,
            };
        }
        panic!("no usable fiber found for ({}, {})", g, d);
    }
}
