//! Homogeneous polynomials in two or three variables over exact rationals.
//!
//! Coefficient vectors are indexed by a fixed enumeration of the degree-m
//! monomials. For three variables X^a Y^b Z^c the enumeration is ascending
//! lexicographic in (a, b); for two variables it is ascending in the X
//! exponent. The leading (smallest) index of a polynomial's support is then
//! exactly its flag-valuation vector for the standard flag, so one row
//! echelon pass enumerates all achievable valuation vectors of a subspace.

use num_traits::{One, Zero};

use crate::exact::{rat, Rat};

/// Enumeration of the degree-`degree` monomials in `nvars` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialBasis {
    pub nvars: usize,
    pub degree: usize,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        assert!(nvars == 2 || nvars == 3, "only 2 or 3 variables supported");
        MonomialBasis { nvars, degree }
    }

    pub fn dim(&self) -> usize {
        let m = self.degree;
        match self.nvars {
            2 => m + 1,
            3 => (m + 1) * (m + 2) / 2,
            _ => unreachable!(),
        }
    }

    /// Exponent tuple of the monomial at `idx`.
    pub fn exponents(&self, idx: usize) -> Vec<usize> {
        let m = self.degree;
        match self.nvars {
            2 => {
                debug_assert!(idx <= m);
                vec![idx, m - idx]
            }
            3 => {
                // idx = a*(m+1) - a(a-1)/2 + b
                let mut a = 0;
                let mut rem = idx;
                loop {
                    let block = m - a + 1;
                    if rem < block {
                        return vec![a, rem, m - a - rem];
                    }
                    rem -= block;
                    a += 1;
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn index(&self, exps: &[usize]) -> usize {
        let m = self.degree;
        debug_assert_eq!(exps.iter().sum::<usize>(), m);
        match self.nvars {
            2 => exps[0],
            3 => {
                let a = exps[0];
                a * (m + 1) - a * (a.saturating_sub(1)) / 2 + exps[1]
            }
            _ => unreachable!(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Vec<usize>)> + '_ {
        (0..self.dim()).map(move |i| (i, self.exponents(i)))
    }
}

/// Homogeneous polynomial; `coeffs` is indexed by [`MonomialBasis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub basis: MonomialBasis,
    pub coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        let basis = MonomialBasis::new(nvars, degree);
        Poly {
            basis,
            coeffs: vec![Rat::zero(); basis.dim()],
        }
    }

    pub fn from_coeffs(nvars: usize, degree: usize, coeffs: Vec<Rat>) -> Self {
        let basis = MonomialBasis::new(nvars, degree);
        assert_eq!(coeffs.len(), basis.dim());
        Poly { basis, coeffs }
    }

    /// Single monomial with the given exponents.
    pub fn monomial(nvars: usize, exps: &[usize]) -> Self {
        let degree = exps.iter().sum();
        let mut p = Poly::zero(nvars, degree);
        let idx = p.basis.index(exps);
        p.coeffs[idx] = Rat::one();
        p
    }

    /// Linear form c0*X + c1*Y (+ c2*Z).
    pub fn linear_form(coeffs: &[Rat]) -> Self {
        let nvars = coeffs.len();
        let mut p = Poly::zero(nvars, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exps = vec![0; nvars];
            exps[i] = 1;
            let idx = p.basis.index(&exps);
            p.coeffs[idx] = c.clone();
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn nvars(&self) -> usize {
        self.basis.nvars
    }

    pub fn degree(&self) -> usize {
        self.basis.degree
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.basis, other.basis);
        Poly {
            basis: self.basis,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars(), other.nvars());
        let nvars = self.nvars();
        let mut out = Poly::zero(nvars, self.degree() + other.degree());
        for (i, ei) in self.basis.iter() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for (j, ej) in other.basis.iter() {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let exps: Vec<usize> = ei.iter().zip(&ej).map(|(a, b)| a + b).collect();
                let idx = out.basis.index(&exps);
                let prod = &self.coeffs[i] * &other.coeffs[j];
                out.coeffs[idx] += prod;
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::from_coeffs(self.nvars(), 0, vec![Rat::one()]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Rat::zero();
        for (i, exps) in self.basis.iter() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            let mut term = self.coeffs[i].clone();
            for (p, e) in point.iter().zip(&exps) {
                for _ in 0..*e {
                    term *= p;
                }
            }
            acc += term;
        }
        acc
    }

    /// Evaluates the mixed partial derivative of the given orders at `point`.
    pub fn derivative_eval(&self, orders: &[usize], point: &[Rat]) -> Rat {
        assert_eq!(orders.len(), self.nvars());
        let mut acc = Rat::zero();
        'mono: for (i, exps) in self.basis.iter() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            let mut term = self.coeffs[i].clone();
            for v in 0..self.nvars() {
                let (e, o) = (exps[v], orders[v]);
                if o > e {
                    continue 'mono;
                }
                // falling factorial e (e-1) ... (e-o+1)
                for j in 0..o {
                    term *= rat((e - j) as i64);
                }
                for _ in 0..(e - o) {
                    term *= &point[v];
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitutes each variable by the linear form `forms[v]`.
    pub fn substitute_linear(&self, forms: &[Poly]) -> Poly {
        assert_eq!(forms.len(), self.nvars());
        let m = self.degree();
        // Power tables of the substituted linear forms, degree 0..=m.
        let tables: Vec<Vec<Poly>> = forms
            .iter()
            .map(|f| {
                let mut t = Vec::with_capacity(m + 1);
                t.push(Poly::from_coeffs(self.nvars(), 0, vec![Rat::one()]));
                for e in 1..=m {
                    let prev = &t[e - 1];
                    t.push(prev.mul(f));
                }
                t
            })
            .collect();
        let mut out = Poly::zero(self.nvars(), m);
        for (i, exps) in self.basis.iter() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            let mut term = tables[0][exps[0]].clone();
            for v in 1..self.nvars() {
                if exps[v] > 0 {
                    term = term.mul(&tables[v][exps[v]]);
                }
            }
            for (idx, c) in term.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out.coeffs[idx] += &self.coeffs[i] * c;
                }
            }
        }
        out
    }

    fn lead_term(&self) -> Option<(usize, Vec<usize>)> {
        // Descending lex on the exponent tuple = largest basis index for
        // 2 variables; for 3 variables the basis order is ascending (a, b),
        // so descending lex is the last nonzero index.
        for i in (0..self.coeffs.len()).rev() {
            if !self.coeffs[i].is_zero() {
                return Some((i, self.basis.exponents(i)));
            }
        }
        None
    }

    /// Division by a single homogeneous divisor: returns (quotient, remainder)
    /// with self = q * g + r and no monomial of r divisible by the leading
    /// term of g. For a principal ideal the remainder is zero exactly when g
    /// divides self.
    pub fn div_rem(&self, g: &Poly) -> (Poly, Poly) {
        assert_eq!(self.nvars(), g.nvars());
        assert!(self.degree() >= g.degree(), "divisor degree too large");
        let (glead_idx, glead) = g.lead_term().expect("division by zero polynomial");
        let gc = g.coeffs[glead_idx].clone();
        let mut f = self.clone();
        let mut q = Poly::zero(self.nvars(), self.degree() - g.degree());
        let mut r = Poly::zero(self.nvars(), self.degree());
        while let Some((fi, fexp)) = f.lead_term() {
            let divisible = fexp.iter().zip(&glead).all(|(a, b)| a >= b);
            if divisible {
                let qexp: Vec<usize> = fexp.iter().zip(&glead).map(|(a, b)| a - b).collect();
                let c = &f.coeffs[fi] / &gc;
                let qi = q.basis.index(&qexp);
                q.coeffs[qi] += &c;
                let mono = Poly::monomial(self.nvars(), &qexp).scale(&c);
                let sub = mono.mul(g);
                f = f.add(&sub.scale(&rat(-1)));
            } else {
                r.coeffs[fi] = f.coeffs[fi].clone();
                f.coeffs[fi] = Rat::zero();
            }
        }
        (q, r)
    }

    /// Order of vanishing along the irreducible form g: the largest j with
    /// g^j dividing self. Returns None for the zero polynomial.
    pub fn order_along(&self, g: &Poly) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut f = self.clone();
        let mut ord = 0;
        while f.degree() >= g.degree() {
            let (q, r) = f.div_rem(g);
            if !r.is_zero() {
                break;
            }
            ord += 1;
            f = q;
        }
        Some(ord)
    }

    /// Multiplicity at a projective point (order of vanishing of the local
    /// Taylor expansion). Returns None for the zero polynomial.
    pub fn mult_at_point(&self, point: &[Rat]) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        assert_eq!(point.len(), self.nvars());
        let chart = point
            .iter()
            .position(|c| !c.is_zero())
            .expect("projective point must be nonzero");
        // Normalize the chart coordinate to 1 so derivative values are the
        // local Taylor coefficients up to factorials.
        let scale = &point[chart];
        let p: Vec<Rat> = point.iter().map(|c| c / scale).collect();
        let others: Vec<usize> = (0..self.nvars()).filter(|&v| v != chart).collect();
        for t in 0..=self.degree() {
            for k in 0..=t {
                let mut orders = vec![0usize; self.nvars()];
                orders[others[0]] = k;
                if others.len() == 2 {
                    orders[others[1]] = t - k;
                } else if t - k != 0 {
                    continue;
                }
                if !self.derivative_eval(&orders, &p).is_zero() {
                    return Some(t);
                }
            }
        }
        // A nonzero form of degree m cannot vanish to order > m at a point
        // unless it is divisible by more linear forms than its degree allows.
        Some(self.degree() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratq;

    #[test]
    fn basis_roundtrip() {
        for m in 0..6 {
            let b = MonomialBasis::new(3, m);
            for (i, e) in b.iter() {
                assert_eq!(b.index(&e), i);
                assert_eq!(e.iter().sum::<usize>(), m);
            }
            let b2 = MonomialBasis::new(2, m);
            for (i, e) in b2.iter() {
                assert_eq!(b2.index(&e), i);
            }
        }
    }

    #[test]
    fn basis_order_is_lex_in_ab() {
        let b = MonomialBasis::new(3, 2);
        let exps: Vec<Vec<usize>> = b.iter().map(|(_, e)| e).collect();
        for w in exps.windows(2) {
            let (a0, b0) = (w[0][0], w[0][1]);
            let (a1, b1) = (w[1][0], w[1][1]);
            assert!(a0 < a1 || (a0 == a1 && b0 < b1));
        }
    }

    #[test]
    fn mul_and_eval() {
        // (X + Y)(X - Y) = X^2 - Y^2
        let f = Poly::linear_form(&[rat(1), rat(1)]);
        let g = Poly::linear_form(&[rat(1), rat(-1)]);
        let h = f.mul(&g);
        assert_eq!(h.eval(&[rat(3), rat(2)]), rat(5));
    }

    #[test]
    fn division_detects_divisibility() {
        // X | X*Y^2 + X^2*Z but X does not divide X*Y + Z^2
        let x = Poly::monomial(3, &[1, 0, 0]);
        let f = Poly::monomial(3, &[1, 2, 0]).add(&Poly::monomial(3, &[2, 0, 1]));
        let (_, r) = f.div_rem(&x);
        assert!(r.is_zero());
        let g = Poly::monomial(3, &[1, 1, 0]).add(&Poly::monomial(3, &[0, 0, 2]));
        let (_, r) = g.div_rem(&x);
        assert!(!r.is_zero());
    }

    #[test]
    fn order_along_line() {
        // X^2 * (Y + Z) has order 2 along X.
        let x = Poly::monomial(3, &[1, 0, 0]);
        let yz = Poly::linear_form(&[rat(0), rat(1), rat(1)]);
        let f = x.pow(2).mul(&yz);
        assert_eq!(f.order_along(&x), Some(2));
        assert_eq!(yz.order_along(&x), Some(0));
    }

    #[test]
    fn mult_at_points() {
        // (Y - Z)(X - Z) has multiplicity 2 at [1:1:1], 1 at [1:0:0].
        let l1 = Poly::linear_form(&[rat(0), rat(1), rat(-1)]);
        let l2 = Poly::linear_form(&[rat(1), rat(0), rat(-1)]);
        let f = l1.mul(&l2);
        assert_eq!(f.mult_at_point(&[rat(1), rat(1), rat(1)]), Some(2));
        assert_eq!(f.mult_at_point(&[rat(1), rat(0), rat(0)]), Some(1));
        assert_eq!(f.mult_at_point(&[rat(0), rat(1), rat(0)]), Some(1));
        // neither factor vanishes at [0:0:1]
        assert_eq!(f.mult_at_point(&[rat(0), rat(0), rat(1)]), Some(0));
        // scaling the point must not change multiplicity
        assert_eq!(f.mult_at_point(&[ratq(1, 2), ratq(1, 2), ratq(1, 2)]), Some(2));
    }

    #[test]
    fn substitute_swap() {
        // F(X,Y,Z) = X^2 Y, swap X and Y -> Y^2 X
        let f = Poly::monomial(3, &[2, 1, 0]);
        let forms = vec![
            Poly::linear_form(&[rat(0), rat(1), rat(0)]),
            Poly::linear_form(&[rat(1), rat(0), rat(0)]),
            Poly::linear_form(&[rat(0), rat(0), rat(1)]),
        ];
        let g = f.substitute_linear(&forms);
        assert_eq!(g, Poly::monomial(3, &[1, 2, 0]));
    }
}
