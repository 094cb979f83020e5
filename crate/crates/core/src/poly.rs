//! Sparse multivariate polynomials in up to five variables over F_p.
//!
//! Monomials are ordered graded-lexicographically with x > y > z > w > v;
//! no zero coefficients are stored, so representations are canonical.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Fp, Ring};

pub const MAX_VARS: usize = 5;

/// Exponent vector. Unused variable slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exps: [u16; MAX_VARS],
}

impl Monomial {
    pub fn new(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut e = [0u16; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Monomial { exps: e }
    }

    pub fn one() -> Self {
        Monomial {
            exps: [0; MAX_VARS],
        }
    }

    pub fn total_degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.exps[i] + other.exps[i];
        }
        Monomial { exps: e }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: lower total degree first, then lexicographic
    /// with the first variable dominating. Iterating a BTreeMap therefore
    /// yields terms in ascending grlex order.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z", "w", "v"];
        let mut wrote = false;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "{}^{}", names[i], e)?;
                wrote = true;
            }
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of the given total degree in `nvars` variables,
/// in descending grlex order.
pub fn monomials_of_degree(nvars: usize, degree: usize) -> Vec<Monomial> {
    assert!((1..=MAX_VARS).contains(&nvars));
    let mut out = Vec::new();
    let mut cur = [0u16; MAX_VARS];
    fn rec(
        out: &mut Vec<Monomial>,
        cur: &mut [u16; MAX_VARS],
        var: usize,
        nvars: usize,
        left: usize,
    ) {
        if var == nvars - 1 {
            cur[var] = left as u16;
            out.push(Monomial { exps: *cur });
            cur[var] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e as u16;
            rec(out, cur, var + 1, nvars, left - e);
        }
        cur[var] = 0;
    }
    rec(&mut out, &mut cur, 0, nvars, degree);
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub p: u32,
    terms: BTreeMap<Monomial, Fp>,
}

impl Poly {
    pub fn zero(nvars: usize, p: u32) -> Self {
        Poly {
            nvars,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Fp, nvars: usize) -> Self {
        let mut poly = Poly::zero(nvars, c.modulus());
        if !c.is_zero() {
            poly.terms.insert(Monomial::one(), c);
        }
        poly
    }

    pub fn var(i: usize, nvars: usize, p: u32) -> Self {
        let mut e = [0u16; MAX_VARS];
        e[i] = 1;
        let mut poly = Poly::zero(nvars, p);
        poly.terms.insert(Monomial { exps: e }, Fp::one(p));
        poly
    }

    pub fn from_terms(terms: &[(Monomial, Fp)], nvars: usize, p: u32) -> Self {
        let mut poly = Poly::zero(nvars, p);
        for &(m, c) in terms {
            poly.add_term(m, c);
        }
        poly
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Fp)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Fp {
        self.terms
            .get(m)
            .copied()
            .unwrap_or_else(|| Fp::zero(self.p))
    }

    pub fn add_term(&mut self, m: Monomial, c: Fp) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(|| Fp::zero(self.p));
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.add_term(m, -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn scale(&self, c: Fp) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.p);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars.max(other.nvars), self.p);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: Fp) -> Poly {
        let mut out = Poly::zero(self.nvars, self.p);
        for (ma, &ca) in &self.terms {
            out.add_term(ma.mul(m), ca * c);
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars, self.p);
        for (m, &c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps;
            exps[i] -= 1;
            out.add_term(Monomial { exps }, c * Fp::new(e as i64, self.p));
        }
        out
    }

    /// Evaluation over any coefficient ring that the base field maps into
    /// (F_p itself or the dual numbers).
    pub fn eval<T: Ring>(&self, point: &[T]) -> T {
        assert!(point.len() >= self.nvars);
        let p = self.p;
        // Precompute powers of each coordinate up to the needed degree.
        let mut max_exp = [0u16; MAX_VARS];
        for m in self.terms.keys() {
            for i in 0..self.nvars {
                max_exp[i] = max_exp[i].max(m.exps[i]);
            }
        }
        let mut powers: Vec<Vec<T>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let mut pw = Vec::with_capacity(max_exp[i] as usize + 1);
            pw.push(T::one(p));
            for e in 1..=max_exp[i] as usize {
                let prev = pw[e - 1];
                pw.push(prev * point[i]);
            }
            powers.push(pw);
        }
        let mut acc = T::zero(p);
        for (m, &c) in &self.terms {
            let mut term = T::from_base(c);
            for i in 0..self.nvars {
                term = term * powers[i][m.exps[i] as usize];
            }
            acc = acc + term;
        }
        acc
    }

    /// Gradient evaluated at a point.
    pub fn gradient_at(&self, point: &[Fp]) -> Vec<Fp> {
        (0..self.nvars)
            .map(|i| self.partial(i).eval(point))
            .collect()
    }

    /// Substitute a linear form for each variable (projective coordinate
    /// change). The images must all live in the same variable count.
    pub fn substitute_linear(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let nvars = images.first().map_or(self.nvars, |f| f.nvars);
        let p = self.p;
        let deg = self.total_degree();
        // Precompute powers of each image.
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(self.nvars);
        for img in images {
            let mut pw = vec![Poly::constant(Fp::one(p), nvars)];
            for e in 1..=deg {
                let next = pw[e - 1].mul(img);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = Poly::zero(nvars, p);
        for (m, &c) in &self.terms {
            let mut term = Poly::constant(c, nvars);
            for i in 0..self.nvars {
                if m.exps[i] > 0 {
                    term = term.mul(&powers[i][m.exps[i] as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// For a 3-variable polynomial: fix x = x0, z = 1 and collect the
    /// result as a univariate polynomial in y.
    pub fn slice_in_y(&self, x0: Fp) -> crate::univariate::UPoly {
        assert_eq!(self.nvars, 3);
        let p = self.p;
        let mut coeffs = vec![Fp::zero(p); self.total_degree() + 1];
        for (m, &c) in &self.terms {
            let a = m.exps[0] as u64;
            let b = m.exps[1] as usize;
            coeffs[b] += c * x0.pow(a);
        }
        crate::univariate::UPoly::new(coeffs, p)
    }

    /// For a 3-variable polynomial: fix y = y0, z = 1 and collect the
    /// result as a univariate polynomial in x.
    pub fn slice_in_x(&self, y0: Fp) -> crate::univariate::UPoly {
        assert_eq!(self.nvars, 3);
        let p = self.p;
        let mut coeffs = vec![Fp::zero(p); self.total_degree() + 1];
        for (m, &c) in &self.terms {
            let a = m.exps[0] as usize;
            let b = m.exps[1] as u64;
            coeffs[a] += c * y0.pow(b);
        }
        crate::univariate::UPoly::new(coeffs, p)
    }

    /// Restrict a 3-variable polynomial to a parametrized line
    /// `base + u * dir`, returning a univariate polynomial in `u`.
    pub fn restrict_to_line(&self, base: &[Fp; 3], dir: &[Fp; 3]) -> crate::univariate::UPoly {
        assert_eq!(self.nvars, 3);
        let p = self.p;
        let deg = self.total_degree();
        // Evaluate at deg+1 values of u and interpolate.
        let xs: Vec<Fp> = (0..=deg as i64).map(|u| Fp::new(u, p)).collect();
        let ys: Vec<Fp> = xs
            .iter()
            .map(|&u| {
                let pt = [
                    base[0] + u * dir[0],
                    base[1] + u * dir[1],
                    base[2] + u * dir[2],
                ];
                self.eval(&pt)
            })
            .collect();
        crate::univariate::UPoly::interpolate(&xs, &ys, deg).expect("degree bound is exact")
    }
}

/// Value and first directional derivative of `f` at `point` along `direction`.
pub fn jet_eval(f: &Poly, point: &[Fp], direction: &[Fp]) -> (Fp, Fp) {
    let value = f.eval(point);
    let mut deriv = Fp::zero(f.p);
    for i in 0..f.nvars {
        deriv += f.partial(i).eval(point) * direction[i];
    }
    (value, deriv)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*{:?}", c, m)?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Dual;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::new(&[2, 0, 0]);
        let b = Monomial::new(&[1, 1, 0]);
        let c = Monomial::new(&[0, 0, 1]);
        assert!(c < b); // degree 1 < degree 2
        assert!(b < a); // same degree, x^2 dominates xy
    }

    #[test]
    fn monomial_enumeration_counts() {
        // C(t + n - 1, n - 1) monomials of degree t in n variables.
        assert_eq!(monomials_of_degree(3, 5).len(), 21);
        assert_eq!(monomials_of_degree(5, 2).len(), 15);
        assert_eq!(monomials_of_degree(2, 0).len(), 1);
    }

    #[test]
    fn jet_eval_square() {
        let p = 101;
        let f = Poly::var(0, 1, p).mul(&Poly::var(0, 1, p));
        let (v, d) = jet_eval(&f, &[Fp::new(3, p)], &[Fp::one(p)]);
        assert_eq!(v.residue(), 9);
        assert_eq!(d.residue(), 6);
    }

    #[test]
    fn jet_eval_constant_has_zero_derivative() {
        let p = 101;
        let f = Poly::constant(Fp::new(42, p), 3);
        for dir in [[1, 0, 0], [3, 5, 7]] {
            let direction: Vec<Fp> = dir.iter().map(|&x| Fp::new(x, p)).collect();
            let (v, d) = jet_eval(
                &f,
                &[Fp::new(1, p), Fp::new(2, p), Fp::new(3, p)],
                &direction,
            );
            assert_eq!(v.residue(), 42);
            assert!(d.is_zero());
        }
    }

    #[test]
    fn jet_matches_dual_evaluation_oracle() {
        // Random quintics in 3 variables: derivative equals the eps
        // coefficient of evaluation at point + eps * direction.
        let p = 32003;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut f = Poly::zero(3, p);
            for m in monomials_of_degree(3, 5) {
                f.add_term(m, Fp::new(rng.random_range(0..p as i64), p));
            }
            let point: Vec<Fp> = (0..3)
                .map(|_| Fp::new(rng.random_range(0..p as i64), p))
                .collect();
            let dir: Vec<Fp> = (0..3)
                .map(|_| Fp::new(rng.random_range(0..p as i64), p))
                .collect();
            let (v, d) = jet_eval(&f, &point, &dir);
            let dual_point: Vec<Dual> = (0..3).map(|i| Dual::new(point[i], dir[i])).collect();
            let dv = f.eval(&dual_point);
            assert_eq!(dv.val, v);
            assert_eq!(dv.eps, d);
        }
    }

    #[test]
    fn restrict_to_line_degree() {
        let p = 101;
        // F = x^2 z + y^3 restricted to (1, u, 2).
        let x = Poly::var(0, 3, p);
        let y = Poly::var(1, 3, p);
        let z = Poly::var(2, 3, p);
        let f = x.mul(&x).mul(&z).add(&y.mul(&y).mul(&y));
        let base = [Fp::one(p), Fp::zero(p), Fp::new(2, p)];
        let dir = [Fp::zero(p), Fp::one(p), Fp::zero(p)];
        let r = f.restrict_to_line(&base, &dir);
        // r(u) = 2 + u^3
        assert_eq!(r.degree(), Some(3));
        assert_eq!(r.eval(Fp::zero(p)).residue(), 2);
        assert_eq!(r.eval(Fp::new(2, p)).residue(), 10);
    }
}
