//! Random nodal plane models.
//!
//! A genus-g curve carrying a base-point-free pencil of degree d is
//! realized as a plane curve of degree e = d+2 with delta = d(d+1)/2 - g
//! ordinary nodes; the pencil is cut by the lines through a marked node.
//! Generation is plain linear algebra: impose a double point at each of
//! delta random points, draw a random member of the solution space, and
//! validate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::LabError;
use crate::field::Fp;
use crate::matrix::Mat;
use crate::poly::{monomials_of_degree, Monomial, Poly};
use crate::univariate::UPoly;

/// Derived constants of a case (g, d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseParams {
    pub g: usize,
    pub d: usize,
    /// Plane degree e = d + 2.
    pub e: usize,
    /// Node count delta = d(d+1)/2 - g.
    pub delta: usize,
    /// Brill-Noether number rho = g - 2(g - d + 1).
    pub rho: usize,
    /// n = g - d + 1 = h^1 of the pencil bundle.
    pub n: usize,
    /// Random node placement is possible iff 3*delta <= e(e+3)/2.
    pub feasible: bool,
}

/// Checks the standing range hypotheses and derives all case constants.
pub fn feasibility_params(g: usize, d: usize) -> Result<CaseParams, LabError> {
    if g < 5 {
        return Err(LabError::RangeViolation(format!("genus {} < 5", g)));
    }
    let lo = (g + 3).div_ceil(2);
    if d < lo || d > g - 1 {
        return Err(LabError::RangeViolation(format!(
            "d = {} outside [{}, {}] for g = {}",
            d,
            lo,
            g - 1,
            g
        )));
    }
    let rho = g as i64 - 2 * (g as i64 - d as i64 + 1);
    if rho < 1 {
        return Err(LabError::RangeViolation(format!("rho = {} < 1", rho)));
    }
    let e = d + 2;
    let delta = d * (d + 1) / 2 - g;
    let params = CaseParams {
        g,
        d,
        e,
        delta,
        rho: rho as usize,
        n: g - d + 1,
        feasible: 3 * delta <= e * (e + 3) / 2,
    };
    debug_assert_eq!((e - 1) * (e - 2) / 2 - delta, g, "genus formula");
    Ok(params)
}

/// A plane model of degree e with delta prescribed ordinary nodes.
/// `f` is homogeneous in (x, y, z); nodes are projective points with the
/// marked node (projection center of the pencil) listed first by default.
#[derive(Debug, Clone)]
pub struct NodalPlaneCurve {
    pub p: u32,
    pub e: usize,
    pub g: usize,
    pub d: usize,
    pub f: Poly,
    pub nodes: Vec<[Fp; 3]>,
    pub marked_node_index: usize,
    pub seed: Option<u64>,
}

impl NodalPlaneCurve {
    pub fn marked_node(&self) -> [Fp; 3] {
        self.nodes[self.marked_node_index]
    }

    pub fn gradient_at(&self, pt: &[Fp; 3]) -> [Fp; 3] {
        [
            self.f.partial(0).eval(&pt[..]),
            self.f.partial(1).eval(&pt[..]),
            self.f.partial(2).eval(&pt[..]),
        ]
    }
}

/// Scale a projective representative so its first nonzero coordinate is 1.
pub fn normalize_point(pt: [Fp; 3]) -> [Fp; 3] {
    for c in pt {
        if !c.is_zero() {
            let inv = c.inv().unwrap();
            return [pt[0] * inv, pt[1] * inv, pt[2] * inv];
        }
    }
    pt
}

pub fn points_equal_projective(a: &[Fp; 3], b: &[Fp; 3]) -> bool {
    normalize_point(*a) == normalize_point(*b)
}

/// Rows of the double-point condition matrix: for each node, the three
/// partial derivatives of a generic degree-e form must vanish (vanishing
/// of the form itself follows by the Euler relation).
pub fn singular_system_matrix(e: usize, nodes: &[[Fp; 3]], p: u32) -> Mat<Fp> {
    let monos = monomials_of_degree(3, e);
    let mut rows: Vec<Vec<Fp>> = Vec::with_capacity(3 * nodes.len());
    for node in nodes {
        for var in 0..3 {
            let row = monos
                .iter()
                .map(|m| {
                    let ex = m.exps[var];
                    if ex == 0 {
                        return Fp::zero(p);
                    }
                    let mut exps = m.exps;
                    exps[var] -= 1;
                    let mut v = Fp::new(ex as i64, p);
                    for (i, &c) in node.iter().enumerate() {
                        v *= c.pow(exps[i] as u64);
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
    }
    Mat::from_rows(&rows, p)
}

/// Dimension of the space of degree-(e-3) forms vanishing at all nodes:
/// the adjoint system. Must equal the genus for an accepted curve.
pub fn adjoint_dimension(curve: &NodalPlaneCurve) -> usize {
    let monos = monomials_of_degree(3, curve.e - 3);
    let rows: Vec<Vec<Fp>> = curve
        .nodes
        .iter()
        .map(|node| {
            monos
                .iter()
                .map(|m| {
                    let mut v = Fp::one(curve.p);
                    for (i, &c) in node.iter().enumerate() {
                        v *= c.pow(m.exps[i] as u64);
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mat = Mat::from_rows(&rows, curve.p);
    monos.len() - mat.rank()
}

/// Outcome of one validation check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name)
            .collect()
    }
}

/// Validates the curve invariants:
/// (a) every node is an ordinary double point,
/// (b) no two nodes are collinear with the marked node,
/// (c) a resultant probe finds no singular points besides the nodes,
/// (d) the adjoint system has dimension exactly g.
pub fn validate_curve(curve: &NodalPlaneCurve) -> ValidationReport {
    let mut checks = Vec::new();
    checks.push(check_ordinary_nodes(curve));
    checks.push(check_node_collinearity(curve));
    checks.push(check_singular_locus_probe(curve));
    let dim = adjoint_dimension(curve);
    checks.push(CheckResult {
        name: "adjoint_dimension",
        pass: dim == curve.g,
        detail: format!("dim = {}, genus = {}", dim, curve.g),
    });
    ValidationReport { checks }
}

fn check_ordinary_nodes(curve: &NodalPlaneCurve) -> CheckResult {
    let p = curve.p;
    for (idx, node) in curve.nodes.iter().enumerate() {
        if curve.f.eval(&node[..]) != Fp::zero(p) {
            return fail("ordinary_nodes", format!("node {} not on curve", idx));
        }
        let grad = curve.gradient_at(node);
        if grad.iter().any(|c| !c.is_zero()) {
            return fail("ordinary_nodes", format!("node {} not singular", idx));
        }
        // Nondegeneracy of the quadratic term in an affine chart around
        // the node: the 2x2 Hessian block in the chart variables must be
        // invertible.
        let chart = (0..3).find(|&i| !node[i].is_zero()).expect("nonzero point");
        let others: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
        let (u, v) = (others[0], others[1]);
        let fuu = curve.f.partial(u).partial(u).eval(&node[..]);
        let fuv = curve.f.partial(u).partial(v).eval(&node[..]);
        let fvv = curve.f.partial(v).partial(v).eval(&node[..]);
        if (fuu.is_zero() && fuv.is_zero() && fvv.is_zero()) || (fuv * fuv - fuu * fvv).is_zero() {
            return fail(
                "ordinary_nodes",
                format!("node {} degenerate quadratic term", idx),
            );
        }
    }
    pass("ordinary_nodes")
}

fn check_node_collinearity(curve: &NodalPlaneCurve) -> CheckResult {
    let p = curve.p;
    let q = curve.marked_node();
    for i in 0..curve.nodes.len() {
        if i == curve.marked_node_index {
            continue;
        }
        for j in (i + 1)..curve.nodes.len() {
            if j == curve.marked_node_index {
                continue;
            }
            let a = curve.nodes[i];
            let b = curve.nodes[j];
            let det = Mat::from_rows(&[q.to_vec(), a.to_vec(), b.to_vec()], p).det();
            if det.is_zero() {
                return fail(
                    "node_collinearity",
                    format!("nodes {} and {} collinear with marked node", i, j),
                );
            }
        }
    }
    pass("node_collinearity")
}

/// Discriminant-based probe for extra singular points. On a seeded random
/// chart, the multiple-root part of Res_y(f, f_y) must be supported on
/// node images only (and symmetrically for Res_x(f, f_x)).
fn check_singular_locus_probe(curve: &NodalPlaneCurve) -> CheckResult {
    let p = curve.p;
    let e = curve.e;
    let mut rng = ChaCha8Rng::seed_from_u64(curve.seed.unwrap_or(0) ^ 0x9e3779b97f4a7c15);
    'charts: for _attempt in 0..20 {
        // Random invertible coordinate change.
        let t = Mat::from_fn(3, 3, p, |_, _| Fp::new(rng.random_range(0..p as i64), p));
        if t.det().is_zero() {
            continue;
        }
        let t_inv = match invert3(&t) {
            Some(m) => m,
            None => continue,
        };
        // g(x) = f(T x); singular points of g are T^{-1}(nodes).
        let images: Vec<Poly> = (0..3)
            .map(|i| {
                let mut lin = Poly::zero(3, p);
                for j in 0..3 {
                    lin = lin.add(&Poly::var(j, 3, p).scale(t[(i, j)]));
                }
                lin
            })
            .collect();
        let gc = curve.f.substitute_linear(&images);
        // Leading coefficients in y and x must be constants.
        if gc.coeff(&Monomial::new(&[0, e as u16, 0])).is_zero()
            || gc.coeff(&Monomial::new(&[e as u16, 0, 0])).is_zero()
        {
            continue;
        }
        let moved: Vec<[Fp; 3]> = curve
            .nodes
            .iter()
            .map(|n| {
                let v = t_inv.mul_vec(n.as_ref());
                [v[0], v[1], v[2]]
            })
            .collect();
        // All node images must be affine with distinct x and distinct y.
        let mut affine = Vec::new();
        for m in &moved {
            if m[2].is_zero() {
                continue 'charts;
            }
            let inv = m[2].inv().unwrap();
            affine.push((m[0] * inv, m[1] * inv));
        }
        for i in 0..affine.len() {
            for j in (i + 1)..affine.len() {
                if affine[i].0 == affine[j].0 || affine[i].1 == affine[j].1 {
                    continue 'charts;
                }
            }
        }
        let node_xs: Vec<Fp> = affine.iter().map(|a| a.0).collect();
        let node_ys: Vec<Fp> = affine.iter().map(|a| a.1).collect();
        let ok_x = match multiple_root_support(&gc, true, &node_xs) {
            Some(b) => b,
            None => continue 'charts,
        };
        let ok_y = match multiple_root_support(&gc, false, &node_ys) {
            Some(b) => b,
            None => continue 'charts,
        };
        return CheckResult {
            name: "singular_locus_probe",
            pass: ok_x && ok_y,
            detail: if ok_x && ok_y {
                "multiple discriminant roots supported on nodes".into()
            } else {
                "extra singularity detected by discriminant probe".into()
            },
        };
    }
    fail("singular_locus_probe", "no usable probe chart found".into())
}

/// Interpolates D = Res_y(g, g_y) (or the x-side analog), extracts its
/// multiple-root part gcd(D, D') and strips the node factors; returns
/// whether nothing remains. `None` means the chart degenerated.
fn multiple_root_support(g: &Poly, resultant_in_y: bool, node_coords: &[Fp]) -> Option<bool> {
    let p = g.p;
    let e = g.total_degree();
    let dmax = e * (e - 1);
    let xs: Vec<Fp> = (0..(dmax as i64 + 3)).map(|v| Fp::new(v, p)).collect();
    let mut ys = Vec::with_capacity(xs.len());
    for &x0 in &xs {
        let f = if resultant_in_y {
            g.slice_in_y(x0)
        } else {
            g.slice_in_x(x0)
        };
        if f.degree() != Some(e) {
            return None;
        }
        ys.push(f.resultant(&f.derivative()));
    }
    let disc = UPoly::interpolate(&xs, &ys, dmax).ok()?;
    if disc.is_zero() {
        return Some(false);
    }
    let mut m = disc.gcd(&disc.derivative());
    for &c in node_coords {
        let lin = UPoly::new(vec![-c, Fp::one(p)], p);
        loop {
            let (q, r) = m.divrem(&lin);
            if r.is_zero() {
                m = q;
            } else {
                break;
            }
        }
    }
    Some(m.degree() == Some(0))
}

fn invert3(t: &Mat<Fp>) -> Option<Mat<Fp>> {
    let p = t.modulus();
    t.det().inv()?;
    let mut cols = Vec::new();
    for j in 0..3 {
        let mut b = vec![Fp::zero(p); 3];
        b[j] = Fp::one(p);
        cols.push(t.particular_solution(&b).ok()?);
    }
    Some(Mat::from_fn(3, 3, p, |i, j| cols[j][i]))
}

fn pass(name: &'static str) -> CheckResult {
    CheckResult {
        name,
        pass: true,
        detail: String::new(),
    }
}

fn fail(name: &'static str, detail: String) -> CheckResult {
    CheckResult {
        name,
        pass: false,
        detail,
    }
}

/// Draws node sets and curve candidates until validation passes.
/// Deterministic in (params, p, seed).
pub fn random_nodal_curve(
    params: &CaseParams,
    p: u32,
    seed: u64,
) -> Result<NodalPlaneCurve, LabError> {
    random_nodal_curve_budget(params, p, seed, 50)
}

pub fn random_nodal_curve_budget(
    params: &CaseParams,
    p: u32,
    seed: u64,
    budget: usize,
) -> Result<NodalPlaneCurve, LabError> {
    if !params.feasible {
        return Err(LabError::Infeasible {
            g: params.g,
            d: params.d,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = monomials_of_degree(3, params.e);
    for _attempt in 0..budget {
        // Distinct random affine nodes.
        let mut nodes: Vec<[Fp; 3]> = Vec::with_capacity(params.delta);
        while nodes.len() < params.delta {
            let cand = [
                Fp::new(rng.random_range(0..p as i64), p),
                Fp::new(rng.random_range(0..p as i64), p),
                Fp::one(p),
            ];
            if !nodes.iter().any(|n| points_equal_projective(n, &cand)) {
                nodes.push(cand);
            }
        }
        let system = singular_system_matrix(params.e, &nodes, p);
        let kernel = system.right_kernel();
        if kernel.len() != monos.len() - 3 * params.delta {
            continue;
        }
        // Random member of the solution space.
        let mut coeffs = vec![Fp::zero(p); monos.len()];
        for k in &kernel {
            let c = Fp::new(rng.random_range(0..p as i64), p);
            for (i, &v) in k.iter().enumerate() {
                coeffs[i] += c * v;
            }
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        let f = Poly::from_terms(
            &monos
                .iter()
                .copied()
                .zip(coeffs)
                .collect::<Vec<(Monomial, Fp)>>(),
            3,
            p,
        );
        let curve = NodalPlaneCurve {
            p,
            e: params.e,
            g: params.g,
            d: params.d,
            f,
            nodes,
            marked_node_index: 0,
            seed: Some(seed),
        };
        if validate_curve(&curve).all_pass() {
            return Ok(curve);
        }
    }
    Err(LabError::GenerationExhausted { attempts: budget })
}

// ---------------------------------------------------------------------------
// Curve file schema
// ---------------------------------------------------------------------------

/// On-disk curve document. Field order is fixed by this struct, making
/// export -> import -> export byte-identical.
#[derive(Debug, Serialize, Deserialize)]
pub struct CurveFile {
    pub p: u32,
    pub e: usize,
    pub g: usize,
    pub d: usize,
    pub monomial_order: String,
    pub coeffs: Vec<[i64; 4]>,
    pub nodes: Vec<[i64; 3]>,
    pub marked_node_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl NodalPlaneCurve {
    pub fn to_file(&self) -> CurveFile {
        // Descending grlex for the coefficient list.
        let mut coeffs: Vec<[i64; 4]> = self
            .f
            .terms()
            .map(|(m, c)| {
                [
                    m.exps[0] as i64,
                    m.exps[1] as i64,
                    m.exps[2] as i64,
                    c.residue() as i64,
                ]
            })
            .collect();
        coeffs.reverse();
        CurveFile {
            p: self.p,
            e: self.e,
            g: self.g,
            d: self.d,
            monomial_order: "grlex-xyz".to_string(),
            coeffs,
            nodes: self
                .nodes
                .iter()
                .map(|n| {
                    [
                        n[0].residue() as i64,
                        n[1].residue() as i64,
                        n[2].residue() as i64,
                    ]
                })
                .collect(),
            marked_node_index: self.marked_node_index,
            seed: self.seed,
        }
    }

    pub fn from_file(file: &CurveFile) -> Result<NodalPlaneCurve, LabError> {
        if file.monomial_order != "grlex-xyz" {
            return Err(LabError::Schema(format!(
                "unsupported monomial order {:?}",
                file.monomial_order
            )));
        }
        let p = file.p;
        let params = feasibility_params(file.g, file.d)?;
        if params.e != file.e {
            return Err(LabError::Schema(format!(
                "e = {} does not match d + 2",
                file.e
            )));
        }
        let mut f = Poly::zero(3, p);
        for (idx, &[i, j, k, c]) in file.coeffs.iter().enumerate() {
            if i < 0 || j < 0 || k < 0 {
                return Err(LabError::Schema(format!(
                    "coeffs[{}]: negative exponent",
                    idx
                )));
            }
            if (i + j + k) as usize != file.e {
                return Err(LabError::Schema(format!(
                    "coeffs[{}]: monomial degree {} != e = {}",
                    idx,
                    i + j + k,
                    file.e
                )));
            }
            f.add_term(
                Monomial::new(&[i as u16, j as u16, k as u16]),
                Fp::new(c, p),
            );
        }
        let mut nodes = Vec::with_capacity(file.nodes.len());
        for (idx, n) in file.nodes.iter().enumerate() {
            let pt = [Fp::new(n[0], p), Fp::new(n[1], p), Fp::new(n[2], p)];
            if pt.iter().all(|c| c.is_zero()) {
                return Err(LabError::Schema(format!(
                    "nodes[{}]: zero projective triple",
                    idx
                )));
            }
            nodes.push(pt);
        }
        if nodes.len() != params.delta {
            return Err(LabError::Schema(format!(
                "{} nodes listed, delta = {}",
                nodes.len(),
                params.delta
            )));
        }
        if file.marked_node_index >= nodes.len() {
            return Err(LabError::Schema(format!(
                "marked_node_index {} out of range",
                file.marked_node_index
            )));
        }
        let curve = NodalPlaneCurve {
            p,
            e: file.e,
            g: file.g,
            d: file.d,
            f,
            nodes,
            marked_node_index: file.marked_node_index,
            seed: file.seed,
        };
        // Invariants must re-verify on load (full probe included).
        let report = validate_curve(&curve);
        if !report.all_pass() {
            return Err(LabError::Schema(format!(
                "curve invariants failed on load: {:?}",
                report.failed()
            )));
        }
        Ok(curve)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<NodalPlaneCurve, LabError> {
        let file: CurveFile =
            serde_json::from_str(s).map_err(|e| LabError::Schema(e.to_string()))?;
        NodalPlaneCurve::from_file(&file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_8_6() {
        let p = feasibility_params(8, 6).unwrap();
        assert_eq!((p.e, p.delta, p.rho, p.n), (8, 13, 2, 3));
        assert!(p.feasible);
        // Genus formula cross-check: (7*6)/2 - 13 = 8.
        assert_eq!(7 * 6 / 2 - p.delta, 8);
    }

    #[test]
    fn params_5_4() {
        let p = feasibility_params(5, 4).unwrap();
        assert_eq!((p.e, p.delta, p.rho, p.n), (6, 5, 1, 2));
        assert!(p.feasible);
    }

    #[test]
    fn params_9_7_infeasible() {
        let p = feasibility_params(9, 7).unwrap();
        assert_eq!((p.e, p.delta), (9, 19));
        assert!(!p.feasible);
        assert!(3 * p.delta > p.e * (p.e + 3) / 2);
    }

    #[test]
    fn params_out_of_range() {
        assert!(matches!(
            feasibility_params(8, 8),
            Err(LabError::RangeViolation(_))
        ));
        assert!(matches!(
            feasibility_params(8, 4),
            Err(LabError::RangeViolation(_))
        ));
        assert!(matches!(
            feasibility_params(4, 3),
            Err(LabError::RangeViolation(_))
        ));
    }

    #[test]
    fn generation_is_deterministic() {
        let params = feasibility_params(5, 4).unwrap();
        let a = random_nodal_curve(&params, 32003, 42).unwrap();
        let b = random_nodal_curve(&params, 32003, 42).unwrap();
        assert_eq!(a.f, b.f);
        assert_eq!(a.nodes, b.nodes);
    }

    #[test]
    fn generation_infeasible_case_errors() {
        let params = feasibility_params(9, 7).unwrap();
        assert!(matches!(
            random_nodal_curve(&params, 32003, 1),
            Err(LabError::Infeasible { .. })
        ));
    }

    #[test]
    fn singular_system_rank_8_6() {
        // For random nodes the 39 x 45 condition matrix has full rank 39,
        // so the solution space of singular octics has affine dimension 6.
        let params = feasibility_params(8, 6).unwrap();
        let curve = random_nodal_curve(&params, 32003, 42).unwrap();
        let m = singular_system_matrix(params.e, &curve.nodes, 32003);
        assert_eq!(m.nrows(), 39);
        assert_eq!(m.ncols(), 45);
        assert_eq!(m.rank(), 39);
        assert_eq!(m.right_kernel().len(), 6);
    }

    #[test]
    fn validation_detects_tacnode() {
        // y^2 z^4 - x^4 z^2 + x^6: double point at (0:0:1) with quadratic
        // term y^2, a degenerate (tacnodal) tangent cone.
        let p = 32003;
        let mut f = Poly::zero(3, p);
        f.add_term(Monomial::new(&[0, 2, 4]), Fp::one(p));
        f.add_term(Monomial::new(&[4, 0, 2]), -Fp::one(p));
        f.add_term(Monomial::new(&[6, 0, 0]), Fp::one(p));
        let curve = NodalPlaneCurve {
            p,
            e: 6,
            g: 5,
            d: 4,
            f,
            nodes: vec![[Fp::zero(p), Fp::zero(p), Fp::one(p)]],
            marked_node_index: 0,
            seed: None,
        };
        let report = validate_curve(&curve);
        assert!(report.failed().contains(&"ordinary_nodes"));
    }

    #[test]
    fn validation_detects_collinear_nodes() {
        let p = 32003;
        let fp = |v: i64| Fp::new(v, p);
        // Node list with marked node (0:0:1) and two others on the line x = y.
        let curve = NodalPlaneCurve {
            p,
            e: 6,
            g: 5,
            d: 4,
            f: Poly::zero(3, p),
            nodes: vec![
                [fp(0), fp(0), fp(1)],
                [fp(1), fp(1), fp(1)],
                [fp(2), fp(2), fp(1)],
            ],
            marked_node_index: 0,
            seed: None,
        };
        let report = validate_curve(&curve);
        assert!(report.failed().contains(&"node_collinearity"));
    }

    #[test]
    fn accepted_curve_passes_and_round_trips() {
        let params = feasibility_params(5, 4).unwrap();
        let curve = random_nodal_curve(&params, 32003, 7).unwrap();
        assert!(validate_curve(&curve).all_pass());
        assert_eq!(adjoint_dimension(&curve), 5);
        let json = curve.to_json();
        let reloaded = NodalPlaneCurve::from_json(&json).unwrap();
        assert_eq!(reloaded.to_json(), json);
        assert_eq!(reloaded.f, curve.f);
    }

    #[test]
    fn duplicate_node_breaks_adjoint_dimension() {
        let params = feasibility_params(8, 6).unwrap();
        let mut curve = random_nodal_curve(&params, 32003, 42).unwrap();
        // Duplicating a node leaves only 12 independent conditions on the
        // 21-dimensional space of quintics.
        let last = curve.nodes.len() - 1;
        curve.nodes[last] = curve.nodes[0];
        assert_eq!(adjoint_dimension(&curve), 9);
    }

    #[test]
    fn malformed_curve_file_is_rejected() {
        let params = feasibility_params(5, 4).unwrap();
        let curve = random_nodal_curve(&params, 32003, 7).unwrap();
        let mut file = curve.to_file();
        file.nodes[2] = [0, 0, 0];
        let err = NodalPlaneCurve::from_file(&file).unwrap_err();
        let msg = format!("{}", err);
        assert!(msg.contains("nodes[2]"), "got: {}", msg);
    }
}
