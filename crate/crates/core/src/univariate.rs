//! Univariate polynomials over F_p and homogeneous binary forms.
//!
//! Root finding uses exhaustive evaluation for small p and the
//! gcd-with-x^p-x route plus deterministic equal-degree splitting for
//! large p, so runs are reproducible without any randomness.

use crate::error::AlgebraError;
use crate::field::Fp;

/// Threshold below which roots are found by exhaustive evaluation.
const EXHAUSTIVE_ROOT_BOUND: u32 = 4096;

/// Dense univariate polynomial; `coeffs[i]` multiplies x^i, trailing
/// zeros trimmed, zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    pub p: u32,
    coeffs: Vec<Fp>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Fp>, p: u32) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { p, coeffs }
    }

    pub fn zero(p: u32) -> Self {
        UPoly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Fp) -> Self {
        UPoly::new(vec![c], c.modulus())
    }

    pub fn x(p: u32) -> Self {
        UPoly::new(vec![Fp::zero(p), Fp::one(p)], p)
    }

    pub fn monomial(c: Fp, e: usize) -> Self {
        let p = c.modulus();
        let mut coeffs = vec![Fp::zero(p); e + 1];
        coeffs[e] = c;
        UPoly::new(coeffs, p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fp {
        self.coeffs
            .get(i)
            .copied()
            .unwrap_or_else(|| Fp::zero(self.p))
    }

    pub fn leading(&self) -> Fp {
        self.coeffs
            .last()
            .copied()
            .unwrap_or_else(|| Fp::zero(self.p))
    }

    pub fn eval(&self, x: Fp) -> Fp {
        let mut acc = Fp::zero(self.p);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Fp::zero(self.p); n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(i) + other.coeff(i);
        }
        UPoly::new(out, self.p)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Fp::zero(self.p); n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(i) - other.coeff(i);
        }
        UPoly::new(out, self.p)
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(self.p);
        }
        let mut out = vec![Fp::zero(self.p); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out, self.p)
    }

    pub fn scale(&self, c: Fp) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|&a| a * c).collect(), self.p)
    }

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero(self.p);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * Fp::new(i as i64, self.p))
            .collect();
        UPoly::new(out, self.p)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn divrem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        if self.degree().is_none_or(|d| d < dd) {
            return (UPoly::zero(self.p), self.clone());
        }
        let lead_inv = divisor.leading().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Fp::zero(self.p); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i] * lead_inv;
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (k, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + k] -= c * dc;
            }
        }
        (UPoly::new(quot, self.p), UPoly::new(rem, self.p))
    }

    pub fn div_exact(&self, divisor: &UPoly) -> Result<UPoly, AlgebraError> {
        let (q, r) = self.divrem(divisor);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::InexactDivision)
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.leading().inv().unwrap();
            a.scale(inv)
        }
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// self^e modulo `m`.
    pub fn powmod(&self, mut e: u64, m: &UPoly) -> UPoly {
        let mut base = self.divrem(m).1;
        let mut acc = UPoly::constant(Fp::one(self.p));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).divrem(m).1;
            }
            base = base.mul(&base).divrem(m).1;
            e >>= 1;
        }
        acc
    }

    /// All roots in F_p with multiplicities, sorted by residue.
    pub fn roots_in_fp(&self) -> Vec<(Fp, usize)> {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let p = self.p;
        let simple_roots: Vec<Fp> = if p <= EXHAUSTIVE_ROOT_BOUND {
            (0..p as i64)
                .map(|v| Fp::new(v, p))
                .filter(|&r| self.eval(r).is_zero())
                .collect()
        } else {
            // gcd with x^p - x isolates the rational-root part.
            let xp = UPoly::x(p).powmod(p as u64, self);
            let lin = xp.sub(&UPoly::x(p));
            let split = self.gcd(&lin);
            let mut roots = Vec::new();
            split_distinct_linear(&split, &mut roots);
            roots.sort_by_key(|r| r.residue());
            roots
        };
        let mut out = Vec::new();
        for r in simple_roots {
            let lin = UPoly::new(vec![-r, Fp::one(p)], p);
            let mut mult = 0;
            let mut f = self.clone();
            loop {
                let (q, rem) = f.divrem(&lin);
                if !rem.is_zero() {
                    break;
                }
                mult += 1;
                f = q;
            }
            if mult > 0 {
                out.push((r, mult));
            }
        }
        out
    }

    /// Unique interpolating polynomial of degree <= max_degree through the
    /// nodes. Extra nodes act as consistency checks; if the data does not
    /// fit the degree bound the call fails with DegreeOverflow.
    pub fn interpolate(xs: &[Fp], ys: &[Fp], max_degree: usize) -> Result<UPoly, AlgebraError> {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() > max_degree, "need max_degree+1 nodes");
        let p = xs[0].modulus();
        for i in 0..xs.len() {
            for j in (i + 1)..xs.len() {
                assert!(xs[i] != xs[j], "interpolation nodes must be distinct");
            }
        }
        // Newton form on the first max_degree+1 nodes.
        let n = max_degree + 1;
        let mut coef: Vec<Fp> = ys[..n].to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                coef[i] = (coef[i] - coef[i - 1]) * (xs[i] - xs[i - level]).inv().unwrap();
            }
        }
        let mut poly = UPoly::zero(p);
        let mut basis = UPoly::constant(Fp::one(p));
        for i in 0..n {
            poly = poly.add(&basis.scale(coef[i]));
            basis = basis.mul(&UPoly::new(vec![-xs[i], Fp::one(p)], p));
        }
        for i in n..xs.len() {
            if poly.eval(xs[i]) != ys[i] {
                return Err(AlgebraError::DegreeOverflow {
                    needed: xs.len() - 1,
                    max: max_degree,
                });
            }
        }
        Ok(poly)
    }

    /// Resultant via the Euclidean recurrence; exact over F_p.
    pub fn resultant(&self, other: &UPoly) -> Fp {
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return Fp::zero(p);
        }
        let mut f = self.clone();
        let mut g = other.clone();
        let mut acc = Fp::one(p);
        loop {
            let m = f.degree().unwrap();
            let n = g.degree().unwrap();
            if n == 0 {
                return acc * g.leading().pow(m as u64);
            }
            let (_, r) = f.divrem(&g);
            if r.is_zero() {
                return Fp::zero(p);
            }
            let k = r.degree().unwrap();
            // res(f,g) = (-1)^{mn} lc(g)^{m-k} res(g,r)
            let mut sign = Fp::one(p);
            if (m * n) % 2 == 1 {
                sign = -sign;
            }
            acc = acc * sign * g.leading().pow((m - k) as u64);
            f = g;
            g = r;
        }
    }
}

/// Splits a product of distinct monic linear factors into its roots,
/// using a deterministic sweep of quadratic-residue tests.
fn split_distinct_linear(f: &UPoly, out: &mut Vec<Fp>) {
    let p = f.p;
    match f.degree() {
        None | Some(0) => {}
        Some(1) => {
            // x + c -> root -c (f is monic after gcd).
            out.push(-f.coeff(0));
        }
        Some(_) => {
            let half = (p as u64 - 1) / 2;
            for a in 0..p as i64 {
                let shift = UPoly::new(vec![Fp::new(a, p), Fp::one(p)], p);
                let w = shift.powmod(half, f).sub(&UPoly::constant(Fp::one(p)));
                let g = f.gcd(&w);
                let gd = g.degree().unwrap_or(0);
                if gd > 0 && gd < f.degree().unwrap() {
                    let rest = f.div_exact(&g).expect("gcd divides");
                    split_distinct_linear(&g, out);
                    split_distinct_linear(&rest, out);
                    return;
                }
            }
            unreachable!("a splitting shift always exists for distinct roots");
        }
    }
}

impl std::fmt::Debug for UPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*u^{}", c, i)?;
            first = false;
        }
        Ok(())
    }
}

/// A homogeneous binary form of fixed degree D in (t0, t1):
/// `coeffs[i]` multiplies t0^(D-i) t1^i. The degree is part of the data,
/// so the zero form of degree D is representable.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryForm {
    pub p: u32,
    pub degree: usize,
    coeffs: Vec<Fp>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Fp>, p: u32) -> Self {
        let degree = coeffs.len().saturating_sub(1);
        BinaryForm { p, degree, coeffs }
    }

    pub fn zero(degree: usize, p: u32) -> Self {
        BinaryForm {
            p,
            degree,
            coeffs: vec![Fp::zero(p); degree + 1],
        }
    }

    /// Homogenize a univariate polynomial (in u = t1/t0) to the given degree.
    pub fn from_upoly(f: &UPoly, degree: usize) -> Self {
        let inner = f.degree().map_or(0, |d| d);
        assert!(
            f.is_zero() || inner <= degree,
            "degree too small to homogenize"
        );
        let mut coeffs = vec![Fp::zero(f.p); degree + 1];
        for (i, &c) in f.coeffs().iter().enumerate() {
            coeffs[i] = c;
        }
        BinaryForm {
            p: f.p,
            degree,
            coeffs,
        }
    }

    /// Dehomogenization f(1, u).
    pub fn dehomogenize(&self) -> UPoly {
        UPoly::new(self.coeffs.clone(), self.p)
    }

    /// Multiplicity of the root at infinity (0:1), i.e. the power of t0
    /// dividing the form.
    pub fn infinity_multiplicity(&self) -> usize {
        if self.is_zero() {
            return self.degree;
        }
        self.degree - self.dehomogenize().degree().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    pub fn eval(&self, t0: Fp, t1: Fp) -> Fp {
        let p = self.p;
        let mut acc = Fp::zero(p);
        let mut pow0 = Fp::one(p);
        // Build t0^(D-i) t1^i incrementally from the i = D end.
        let mut terms = vec![Fp::zero(p); self.degree + 1];
        for i in (0..=self.degree).rev() {
            terms[i] = pow0;
            pow0 *= t0;
        }
        let mut pow1 = Fp::one(p);
        for i in 0..=self.degree {
            acc += self.coeffs[i] * terms[i] * pow1;
            pow1 *= t1;
        }
        acc
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![Fp::zero(self.p); degree + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        BinaryForm {
            p: self.p,
            degree,
            coeffs,
        }
    }

    pub fn sub(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, other.degree);
        let coeffs = (0..=self.degree)
            .map(|i| self.coeffs[i] - other.coeffs[i])
            .collect();
        BinaryForm {
            p: self.p,
            degree: self.degree,
            coeffs,
        }
    }

    pub fn scale(&self, c: Fp) -> BinaryForm {
        BinaryForm {
            p: self.p,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// Monic-normalized gcd as a binary form; the common power of t0
    /// (roots at infinity) is accounted for exactly.
    pub fn gcd(&self, other: &BinaryForm) -> BinaryForm {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let inf = self
            .infinity_multiplicity()
            .min(other.infinity_multiplicity());
        let g = self.dehomogenize().gcd(&other.dehomogenize());
        let gd = g.degree().unwrap_or(0);
        BinaryForm::from_upoly(&g, gd + inf)
    }

    pub fn div_exact(&self, other: &BinaryForm) -> Result<BinaryForm, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::InexactDivision);
        }
        let inf_self = self.infinity_multiplicity();
        let inf_other = other.infinity_multiplicity();
        if !self.is_zero() && inf_self < inf_other {
            return Err(AlgebraError::InexactDivision);
        }
        let q = self.dehomogenize().div_exact(&other.dehomogenize())?;
        Ok(BinaryForm::from_upoly(&q, self.degree - other.degree))
    }

    /// Partial derivative with respect to t0 (degree drops by one).
    pub fn partial_t0(&self) -> BinaryForm {
        assert!(self.degree >= 1);
        let p = self.p;
        let coeffs = (0..self.degree)
            .map(|i| self.coeffs[i] * Fp::new((self.degree - i) as i64, p))
            .collect();
        BinaryForm {
            p,
            degree: self.degree - 1,
            coeffs,
        }
    }

    /// Partial derivative with respect to t1.
    pub fn partial_t1(&self) -> BinaryForm {
        assert!(self.degree >= 1);
        let p = self.p;
        let coeffs = (1..=self.degree)
            .map(|i| self.coeffs[i] * Fp::new(i as i64, p))
            .collect();
        BinaryForm {
            p,
            degree: self.degree - 1,
            coeffs,
        }
    }

    fn normalized(&self) -> BinaryForm {
        if self.is_zero() {
            return self.clone();
        }
        let lead = *self.coeffs.iter().rev().find(|c| !c.is_zero()).unwrap();
        self.scale(lead.inv().unwrap())
    }

    /// Rational projective roots (t0:t1) with multiplicities, the point
    /// at infinity reported as (0:1). Conjugate (irrational) factors are
    /// not enumerated here; callers account for them by divisibility.
    pub fn rational_roots(&self) -> Vec<((Fp, Fp), usize)> {
        assert!(!self.is_zero());
        let p = self.p;
        let mut out = Vec::new();
        let inf = self.infinity_multiplicity();
        if inf > 0 {
            out.push(((Fp::zero(p), Fp::one(p)), inf));
        }
        for (r, m) in self.dehomogenize().roots_in_fp() {
            out.push(((Fp::one(p), r), m));
        }
        out
    }
}

impl std::fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[deg {}] {:?}", self.degree, self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(v: i64, p: u32) -> Fp {
        Fp::new(v, p)
    }

    fn upoly(coeffs: &[i64], p: u32) -> UPoly {
        UPoly::new(coeffs.iter().map(|&c| fp(c, p)).collect(), p)
    }

    #[test]
    fn gcd_shared_linear_factor() {
        let p = 7;
        // gcd(x^2 - 1, x - 1) = x - 1 over F_7, monic.
        let f = upoly(&[-1, 0, 1], p);
        let g = upoly(&[-1, 1], p);
        let d = f.gcd(&g);
        assert_eq!(d, upoly(&[-1, 1], p));
    }

    #[test]
    fn roots_of_x3_minus_x_mod_5() {
        let p = 5;
        let f = upoly(&[0, -1, 0, 1], p);
        let roots = f.roots_in_fp();
        let expected: Vec<(u32, usize)> = vec![(0, 1), (1, 1), (4, 1)];
        let got: Vec<(u32, usize)> = roots.iter().map(|&(r, m)| (r.residue(), m)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn roots_large_p_with_multiplicity() {
        let p = 32003;
        // (x - 3)^2 (x - 5) (x^2 + 1): x^2 + 1 has no root mod 32003 iff
        // -1 is a non-residue; either way the rational part is found.
        let a = upoly(&[-3, 1], p);
        let f = a
            .mul(&a)
            .mul(&upoly(&[-5, 1], p))
            .mul(&upoly(&[1, 0, 1], p));
        let roots = f.roots_in_fp();
        let got: Vec<(u32, usize)> = roots.iter().map(|&(r, m)| (r.residue(), m)).collect();
        let has_i = Fp::new(-1, p).pow((p as u64 - 1) / 2).residue() == 1;
        if !has_i {
            assert_eq!(got, vec![(3, 2), (5, 1)]);
        } else {
            assert_eq!(got.len(), 4);
            assert!(got.contains(&(3, 2)) && got.contains(&(5, 1)));
        }
    }

    #[test]
    fn split_fully_rational_sextic() {
        let p = 32003;
        let roots = [2i64, 77, 300, 5000, 17000, 31000];
        let mut f = UPoly::constant(fp(4, p));
        for &r in &roots {
            f = f.mul(&upoly(&[-r, 1], p));
        }
        let found = f.roots_in_fp();
        assert_eq!(found.len(), 6);
        for (i, &(r, m)) in found.iter().enumerate() {
            assert_eq!(r.residue() as i64, roots[i]);
            assert_eq!(m, 1);
        }
    }

    /// Sylvester-matrix determinant oracle for resultants.
    fn sylvester_resultant(f: &UPoly, g: &UPoly) -> Fp {
        let p = f.p;
        let m = f.degree().unwrap();
        let n = g.degree().unwrap();
        let size = m + n;
        let mut s = Mat::<Fp>::zeros(size, size, p);
        for i in 0..n {
            for (k, &c) in f.coeffs().iter().enumerate() {
                s[(i, i + m - k)] = c;
            }
        }
        for i in 0..m {
            for (k, &c) in g.coeffs().iter().enumerate() {
                s[(n + i, i + n - k)] = c;
            }
        }
        s.det()
    }

    #[test]
    fn resultant_matches_sylvester_oracle() {
        let p = 101;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..40 {
            let f = UPoly::new(
                (0..4)
                    .map(|i| {
                        fp(
                            if i == 3 {
                                rng.random_range(1..p as i64)
                            } else {
                                rng.random_range(0..p as i64)
                            },
                            p,
                        )
                    })
                    .collect(),
                p,
            );
            let g = UPoly::new(
                (0..4)
                    .map(|i| {
                        fp(
                            if i == 3 {
                                rng.random_range(1..p as i64)
                            } else {
                                rng.random_range(0..p as i64)
                            },
                            p,
                        )
                    })
                    .collect(),
                p,
            );
            assert_eq!(f.resultant(&g), sylvester_resultant(&f, &g));
        }
    }

    #[test]
    fn interpolation_round_trip_and_overflow() {
        let p = 101;
        let f = upoly(&[3, 0, 5, 7], p);
        let xs: Vec<Fp> = (0..6).map(|i| fp(i, p)).collect();
        let ys: Vec<Fp> = xs.iter().map(|&x| f.eval(x)).collect();
        let g = UPoly::interpolate(&xs, &ys, 3).unwrap();
        assert_eq!(f, g);
        // Degree bound 2 cannot fit a cubic.
        assert!(matches!(
            UPoly::interpolate(&xs, &ys, 2),
            Err(AlgebraError::DegreeOverflow { .. })
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(max_deg: usize) -> impl Strategy<Value = UPoly> {
            let p = 101u32;
            proptest::collection::vec(0..p as i64, 1..=max_deg + 1)
                .prop_map(move |cs| UPoly::new(cs.into_iter().map(|c| fp(c, p)).collect(), p))
        }

        proptest! {
            #[test]
            fn gcd_divides_both(f in arb_poly(6), g in arb_poly(6)) {
                if f.is_zero() || g.is_zero() {
                    return Ok(());
                }
                let d = f.gcd(&g);
                prop_assert!(f.div_exact(&d).is_ok());
                prop_assert!(g.div_exact(&d).is_ok());
            }

            #[test]
            fn interpolation_inverts_evaluation(f in arb_poly(5)) {
                let p = 101;
                let deg = f.degree().unwrap_or(0);
                let xs: Vec<Fp> = (0..=(deg as i64 + 2)).map(|i| fp(i, p)).collect();
                let ys: Vec<Fp> = xs.iter().map(|&x| f.eval(x)).collect();
                let g = UPoly::interpolate(&xs, &ys, deg).unwrap();
                prop_assert_eq!(f, g);
            }
        }
    }

    #[test]
    fn binary_form_gcd_with_infinity_root() {
        let p = 101;
        // f = t0^2 * t1 (degree 3), g = t0 * (t0 + t1): gcd = t0.
        let f = BinaryForm::new(vec![fp(0, p), fp(1, p), fp(0, p), fp(0, p)], p);
        let g = BinaryForm::new(vec![fp(1, p), fp(1, p), fp(0, p)], p);
        let d = f.gcd(&g);
        assert_eq!(d.degree, 1);
        assert_eq!(d.infinity_multiplicity(), 1);
        assert!(d.eval(fp(0, p), fp(1, p)).is_zero());
        assert!(!d.eval(fp(1, p), fp(5, p)).is_zero());
    }

    #[test]
    fn binary_roots_with_infinity() {
        let p = 101;
        // t0^2 * (t1 - 2 t0): roots inf^2 and u=2.
        let lin = BinaryForm::new(vec![fp(-2, p), fp(1, p)], p);
        let t0 = BinaryForm::new(vec![fp(1, p), fp(0, p)], p);
        let f = t0.mul(&t0).mul(&lin);
        let roots = f.rational_roots();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].1, 2); // infinity with multiplicity 2
        assert!(roots[0].0 .0.is_zero());
        assert_eq!((roots[1].0 .1).residue(), 2);
    }
}
