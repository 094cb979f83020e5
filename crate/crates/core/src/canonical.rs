//! Canonical embedding and pencil geometry.
//!
//! The canonical map is realized by the adjoint system: the g independent
//! forms of degree e-3 through all nodes. Pencil fibers are residual
//! intersections of lines through the marked node; a fiber is usable when
//! its residual polynomial splits into d distinct rational roots, in
//! which case each point carries a tangent direction (a first-order jet
//! of the canonical map).

use serde::Serialize;

use crate::curve::{normalize_point, NodalPlaneCurve};
use crate::error::{AlgebraError, LabError, SkipReason};
use crate::field::Fp;
use crate::matrix::Mat;
use crate::poly::{monomials_of_degree, Poly};
use crate::univariate::UPoly;

/// Basis of the adjoint system: g forms of degree e-3 realizing the
/// canonical embedding into P^{g-1}.
#[derive(Debug, Clone)]
pub struct CanonicalFrame {
    pub g: usize,
    pub p: u32,
    pub adjoints: Vec<Poly>,
}

impl CanonicalFrame {
    /// Canonical coordinates of a plane point (a vector in k^g).
    pub fn image(&self, pt: &[Fp; 3]) -> Vec<Fp> {
        self.adjoints.iter().map(|a| a.eval(&pt[..])).collect()
    }

    /// Directional derivative of the canonical map at a point.
    pub fn jet(&self, pt: &[Fp; 3], dir: &[Fp; 3]) -> Vec<Fp> {
        self.adjoints
            .iter()
            .map(|a| {
                let mut acc = Fp::zero(self.p);
                for i in 0..3 {
                    acc += a.partial(i).eval(&pt[..]) * dir[i];
                }
                acc
            })
            .collect()
    }
}

/// Kernel of the node-evaluation matrix on degree-(e-3) forms, in
/// reduced echelon form. Errors if the dimension is not exactly g.
pub fn adjoint_basis(curve: &NodalPlaneCurve) -> Result<CanonicalFrame, LabError> {
    let p = curve.p;
    let monos = monomials_of_degree(3, curve.e - 3);
    let rows: Vec<Vec<Fp>> = curve
        .nodes
        .iter()
        .map(|node| {
            monos
                .iter()
                .map(|m| {
                    let mut v = Fp::one(p);
                    for (i, &c) in node.iter().enumerate() {
                        v *= c.pow(m.exps[i] as u64);
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mat = Mat::from_rows(&rows, p);
    let kernel = mat.right_kernel();
    if kernel.len() != curve.g {
        return Err(LabError::CanonicalDimMismatch {
            found: kernel.len(),
            expected: curve.g,
        });
    }
    let adjoints = kernel
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
    Ok(CanonicalFrame {
        g: curve.g,
        p,
        adjoints,
    })
}

/// A point of the pencil P^1, normalized to (1 : t) or (0 : 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PencilParam(pub Fp, pub Fp);

impl PencilParam {
    pub fn finite(t: Fp) -> Self {
        PencilParam(Fp::one(t.modulus()), t)
    }

    pub fn infinity(p: u32) -> Self {
        PencilParam(Fp::zero(p), Fp::one(p))
    }

    /// Deterministic sweep order: (1:0), (1:1), ..., (1:p-1), (0:1).
    pub fn sweep(p: u32) -> impl Iterator<Item = PencilParam> {
        (0..=p as i64).map(move |i| {
            if i < p as i64 {
                PencilParam::finite(Fp::new(i, p))
            } else {
                PencilParam::infinity(p)
            }
        })
    }

    pub fn label(&self) -> String {
        if self.0.is_zero() {
            "inf".to_string()
        } else {
            format!("{}", self.1)
        }
    }
}

impl Serialize for PencilParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// Indices of the two coordinate points spanning the reference line of
/// the pencil (the line avoiding the marked node).
pub fn pencil_axes(q: &[Fp; 3]) -> (usize, usize) {
    let pivot = (0..3).find(|&i| !q[i].is_zero()).expect("nonzero point");
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    (others[0], others[1])
}

/// A split fiber of the node-projection pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilDivisor {
    pub param: PencilParam,
    /// The direction point D(t) on the reference line; the fiber's line
    /// is spanned by the marked node and this point.
    pub dir_point: [Fp; 3],
    /// Residual polynomial of degree d in the line parameter u.
    pub residual: UPoly,
    /// The d distinct roots; point i is q + roots[i] * dir_point.
    pub roots: Vec<Fp>,
    pub points: Vec<[Fp; 3]>,
    /// Tangent direction of the curve at each point, from the rotated
    /// gradient in a chart where the point is affine.
    pub tangents: Vec<[Fp; 3]>,
}

/// Tangent direction at a smooth point: rotate the gradient inside the
/// chart of the first nonvanishing coordinate.
pub fn tangent_at(curve: &NodalPlaneCurve, pt: &[Fp; 3]) -> Option<[Fp; 3]> {
    let grad = curve.gradient_at(pt);
    if grad.iter().all(|c| c.is_zero()) {
        return None;
    }
    let zero = Fp::zero(curve.p);
    let chart = (0..3).find(|&i| !pt[i].is_zero())?;
    let tangent = match chart {
        0 => [zero, -grad[2], grad[1]],
        1 => [-grad[2], zero, grad[0]],
        _ => [-grad[1], grad[0], zero],
    };
    if tangent.iter().all(|c| c.is_zero()) {
        None
    } else {
        Some(tangent)
    }
}

/// Cuts the fiber of the pencil at parameter t. The line meets the curve
/// in the marked node (twice) plus a residual divisor of degree d; the
/// fiber is returned when that divisor splits into d distinct smooth
/// points, `NotSplit` when the residual is squarefree but not fully
/// rational, and `DegenerateLine` for tangency at the node, degree drop,
/// repeated roots, or a second node on the line.
pub fn pencil_fiber(curve: &NodalPlaneCurve, t: PencilParam) -> Result<PencilDivisor, SkipReason> {
    let p = curve.p;
    let d = curve.d;
    let q = normalize_point(curve.marked_node());
    let (a, b) = pencil_axes(&q);
    let mut dir = [Fp::zero(p); 3];
    dir[a] = t.0;
    dir[b] = t.1;
    let g_u = curve.f.restrict_to_line(&q, &dir);
    if g_u.degree() != Some(curve.e) {
        return Err(SkipReason::DegenerateLine);
    }
    // The marked node is a double point, so u^2 divides; more means the
    // line is tangent to a node branch.
    if !g_u.coeff(0).is_zero() || !g_u.coeff(1).is_zero() {
        return Err(SkipReason::DegenerateLine);
    }
    let residual = UPoly::new(g_u.coeffs()[2..].to_vec(), p);
    if residual.coeff(0).is_zero() {
        return Err(SkipReason::DegenerateLine);
    }
    if !residual.is_squarefree() {
        return Err(SkipReason::DegenerateLine);
    }
    let roots: Vec<Fp> = residual.roots_in_fp().into_iter().map(|(r, _)| r).collect();
    if roots.len() != d {
        return Err(SkipReason::NotSplit);
    }
    let mut points = Vec::with_capacity(d);
    let mut tangents = Vec::with_capacity(d);
    for &u in &roots {
        let pt = normalize_point([q[0] + u * dir[0], q[1] + u * dir[1], q[2] + u * dir[2]]);
        match tangent_at(curve, &pt) {
            Some(tan) => {
                points.push(pt);
                tangents.push(tan);
            }
            None => return Err(SkipReason::DegenerateLine),
        }
    }
    Ok(PencilDivisor {
        param: t,
        dir_point: dir,
        residual,
        roots,
        points,
        tangents,
    })
}

/// The span data of a divisor: canonical point matrix M (g x d), jets,
/// the relation vector kappa, the left kernel W (n x g rows), and the
/// span basis U = first d-1 columns of M.
#[derive(Debug, Clone)]
pub struct SecantData {
    pub m: Mat<Fp>,
    pub mjet: Mat<Fp>,
    pub kappa: Vec<Fp>,
    /// Rows span the left kernel of M; identifies V/U with k^n.
    pub w: Mat<Fp>,
    /// Span basis: columns 1..d-1 of M (valid since kappa is dense).
    pub u: Mat<Fp>,
}

impl SecantData {
    pub fn degree(&self) -> usize {
        self.m.ncols()
    }

    /// Lambda-coordinates of the d divisor points in the U basis:
    /// e_1, ..., e_{d-1} and (kappa_1, ..., kappa_{d-1}).
    pub fn divisor_lambda_coords(&self) -> Vec<Vec<Fp>> {
        let d = self.degree();
        let p = self.m.modulus();
        let mut coords = Vec::with_capacity(d);
        for i in 0..(d - 1) {
            let mut e = vec![Fp::zero(p); d - 1];
            e[i] = Fp::one(p);
            coords.push(e);
        }
        coords.push(self.kappa[..d - 1].to_vec());
        coords
    }

    /// Embed lambda-coordinates back into k^g.
    pub fn embed(&self, lambda: &[Fp]) -> Vec<Fp> {
        self.u.mul_vec(lambda)
    }
}

/// Builds the span data of a split fiber. Fails with
/// `SpanRankUnexpected` when rank(M) != d-1 (the divisor leaves the
/// expected Brill-Noether stratum) and `KappaZero` when some relation
/// entry vanishes (points not in linearly general position in the span).
pub fn secant_span(
    frame: &CanonicalFrame,
    fiber: &PencilDivisor,
) -> Result<SecantData, SkipReason> {
    let p = frame.p;
    let g = frame.g;
    let d = fiber.points.len();
    let mut m = Mat::<Fp>::zeros(g, d, p);
    let mut mjet = Mat::<Fp>::zeros(g, d, p);
    for (i, (pt, tan)) in fiber.points.iter().zip(&fiber.tangents).enumerate() {
        let col = frame.image(pt);
        let jet = frame.jet(pt, tan);
        for j in 0..g {
            m[(j, i)] = col[j];
            mjet[(j, i)] = jet[j];
        }
    }
    if m.rank() != d - 1 {
        return Err(SkipReason::SpanRankUnexpected);
    }
    let kernel = m.right_kernel();
    debug_assert_eq!(kernel.len(), 1);
    let kappa = kernel.into_iter().next().unwrap();
    if kappa.iter().any(|c| c.is_zero()) {
        return Err(SkipReason::KappaZero);
    }
    let w_rows = m.left_kernel();
    let w = Mat::from_rows(&w_rows, p);
    let u = m.select_cols(&(0..d - 1).collect::<Vec<_>>());
    Ok(SecantData {
        m,
        mjet,
        kappa,
        w,
        u,
    })
}

/// A vanishing condition for `h0_twisted`: multiplicity 1 imposes the
/// value, multiplicity 2 also the derivative along the curve tangent.
#[derive(Debug, Clone)]
pub struct VanishingConstraint {
    pub point: [Fp; 3],
    pub tangent: Option<[Fp; 3]>,
    pub multiplicity: usize,
}

/// Dimension of the subspace of the canonical system vanishing on the
/// prescribed divisor (multiplicities at most 2, counted along the
/// curve). This computes h^0(K - D') for D' supported on smooth points,
/// and via Riemann-Roch exposes h^0(D') = deg D' - g + 1 + h^0(K - D').
pub fn h0_twisted(
    frame: &CanonicalFrame,
    constraints: &[VanishingConstraint],
) -> Result<usize, AlgebraError> {
    let p = frame.p;
    let g = frame.g;
    let mut rows: Vec<Vec<Fp>> = Vec::new();
    for c in constraints {
        match c.multiplicity {
            1 => rows.push(frame.image(&c.point)),
            2 => {
                let tangent = c.tangent.expect("multiplicity 2 needs a tangent direction");
                rows.push(frame.image(&c.point));
                rows.push(frame.jet(&c.point, &tangent));
            }
            m => return Err(AlgebraError::MultiplicityUnsupported(m)),
        }
    }
    if rows.is_empty() {
        return Ok(g);
    }
    let mat = Mat::from_rows(&rows, p);
    Ok(g - mat.rank())
}

/// Constraints describing the full fiber with uniform multiplicity.
pub fn fiber_constraints(fiber: &PencilDivisor, multiplicity: usize) -> Vec<VanishingConstraint> {
    fiber
        .points
        .iter()
        .zip(&fiber.tangents)
        .map(|(pt, tan)| VanishingConstraint {
            point: *pt,
            tangent: Some(*tan),
            multiplicity,
        })
        .collect()
}

/// Image of mu_0 and the tangent space to W^1_d at the pencil.
#[derive(Debug, Clone)]
pub struct Mu0 {
    /// Rows span H^0(K-D) + H^0(K-D') inside the coefficient space k^g.
    pub image: Mat<Fp>,
    /// Rows span the annihilator of the image in the dual space: the
    /// tangent space T_L W^1_d in evaluation coordinates.
    pub tangent_space: Mat<Fp>,
}

/// Computes Im(mu_0) by the base-point-free pencil trick as the sum of
/// the adjoint subspaces vanishing on two distinct fibers, and the
/// tangent space T_L W^1_d as its annihilator. The tangent dimension
/// must come out rho.
pub fn mu0_tangent(
    frame: &CanonicalFrame,
    fiber1: &PencilDivisor,
    fiber2: &PencilDivisor,
    rho: usize,
) -> Result<Mu0, SkipReason> {
    let p = frame.p;
    let g = frame.g;
    let sub1 = vanishing_subspace(frame, fiber1);
    let sub2 = vanishing_subspace(frame, fiber2);
    let stacked = Mat::from_rows(&[sub1, sub2].concat(), p);
    let image = stacked.row_basis();
    if image.nrows() != g - rho {
        return Err(SkipReason::TangentDimUnexpected);
    }
    let ann = image.right_kernel();
    debug_assert_eq!(ann.len(), rho);
    let tangent_space = Mat::from_rows(&ann, p);
    Ok(Mu0 {
        image,
        tangent_space,
    })
}

/// Coefficient vectors of adjoint sections vanishing on the fiber:
/// the kernel of M^T, i.e. H^0(K - D).
pub fn vanishing_subspace(frame: &CanonicalFrame, fiber: &PencilDivisor) -> Vec<Vec<Fp>> {
    let rows: Vec<Vec<Fp>> = fiber.points.iter().map(|pt| frame.image(pt)).collect();
    Mat::from_rows(&rows, frame.p).right_kernel()
}

/// Intersection of the spans of several fibers of one pencil: the vertex
/// of the scroll swept out by the pencil. Returns a g x rho matrix whose
/// columns span the vertex (projective dimension rho - 1).
pub fn scroll_vertex(secants: &[&SecantData], rho: usize) -> Result<Mat<Fp>, SkipReason> {
    assert!(secants.len() >= 2, "need at least two spans to intersect");
    let mut acc = secants[0].m.clone();
    for s in &secants[1..] {
        acc = acc.col_space_intersection(&s.m);
    }
    if acc.ncols() != rho {
        return Err(SkipReason::VertexDimUnexpected);
    }
    Ok(acc)
}

/// Membership of a vector in the column space of a matrix.
pub fn in_column_space(space: &Mat<Fp>, v: &[Fp]) -> bool {
    if space.ncols() == 0 {
        return v.iter().all(|c| c.is_zero());
    }
    space.augment_col(v).rank() == space.rank()
}
