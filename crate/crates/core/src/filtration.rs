//! Filtrations of section spaces by geometric valuations.
//!
//! A geometric valuation (order of vanishing at a point, along a curve, or
//! along an exceptional divisor) filters each graded piece by
//! F_t = { s : nu(s) >= t }. Jumping numbers are scanned at integer t only:
//! on these models the filtration is an integer step function. Asymptotic
//! quantities come back as (certified one-sided bound, estimate) pairs,
//! certified by super/subadditivity and Fekete's lemma.

use num_traits::Zero;

use crate::error::CoreError;
use crate::exact::{rat, ratq, sparse_dot, Echelon, Rat};
use crate::poly::Poly;
use crate::series::{
    curve_condition_rows, point_condition_layer, point_condition_rows, LinearSeries, ProjPoint,
    SeriesFamily,
};

/// A geometric valuation, defined over the rationals in the fixed
/// coordinates. Values on nonzero sections are non-negative integers.
#[derive(Debug, Clone)]
pub enum ValuationSpec {
    OrderAtPoint(ProjPoint),
    OrderAlongCurve(Poly),
    /// Order along the exceptional divisor over blown-up point i: for a
    /// section of level k this is mult(F) - k*lambda_i.
    OrderAlongExceptional(usize),
}

impl ValuationSpec {
    pub fn order_at(p: &[i64]) -> Self {
        ValuationSpec::OrderAtPoint(p.iter().map(|&c| rat(c)).collect())
    }

    /// nu(f) for a nonzero section of the series.
    pub fn value(&self, series: &LinearSeries, f: &Poly) -> Result<i64, CoreError> {
        if f.is_zero() {
            return Err(CoreError::ZeroSection);
        }
        match self {
            ValuationSpec::OrderAtPoint(p) => Ok(f.mult_at_point(p).unwrap() as i64),
            ValuationSpec::OrderAlongCurve(g) => Ok(f.order_along(g).unwrap() as i64),
            ValuationSpec::OrderAlongExceptional(i) => {
                let m = f.mult_at_point(&series.geometry.blown_up_points()[*i]).unwrap() as i64;
                Ok(m - series.required_mult(*i) as i64)
            }
        }
    }

    /// Sparse rows over the monomial basis cutting out { nu >= t }.
    pub fn condition_rows(&self, series: &LinearSeries, t: usize) -> Vec<Vec<(usize, Rat)>> {
        let mb = series.monomial_basis();
        match self {
            ValuationSpec::OrderAtPoint(p) => point_condition_rows(mb, p, t),
            ValuationSpec::OrderAlongCurve(g) => curve_condition_rows(mb, g, t),
            ValuationSpec::OrderAlongExceptional(i) => point_condition_rows(
                mb,
                &series.geometry.blown_up_points()[*i],
                series.required_mult(*i) + t,
            ),
        }
    }

    /// Rows added when passing from { nu >= t } to { nu >= t+1 }, for the
    /// valuations whose conditions nest row-wise (points). Curve conditions
    /// are recomputed whole.
    fn layer_rows(&self, series: &LinearSeries, t: usize) -> Option<Vec<Vec<(usize, Rat)>>> {
        let mb = series.monomial_basis();
        match self {
            ValuationSpec::OrderAtPoint(p) => Some(point_condition_layer(mb, p, t)),
            ValuationSpec::OrderAlongExceptional(i) => Some(point_condition_layer(
                mb,
                &series.geometry.blown_up_points()[*i],
                series.required_mult(*i) + t,
            )),
            ValuationSpec::OrderAlongCurve(_) => None,
        }
    }
}

fn apply_rows(rows: &[Vec<(usize, Rat)>], basis: &[Vec<Rat>]) -> Vec<Vec<(usize, Rat)>> {
    rows.iter()
        .map(|row| {
            basis
                .iter()
                .enumerate()
                .filter_map(|(j, b)| {
                    let v = sparse_dot(row, b);
                    (!v.is_zero()).then_some((j, v))
                })
                .collect()
        })
        .collect()
}

/// dim F_t for t = 0, 1, 2, ... until the space dies; the returned vector
/// ends with its first zero.
pub fn dims_profile(series: &LinearSeries, val: &ValuationSpec) -> Vec<usize> {
    let dim = series.dim();
    let mut dims = vec![dim];
    if dim == 0 {
        return dims;
    }
    let cap = series.degree + 2;
    let full = series.is_full_space();
    let basis = if full { Vec::new() } else { series.basis_vectors() };
    let cols = if full { series.monomial_basis().dim() } else { dim };
    let mut ech = Echelon::new(cols);
    for t in 1..=cap {
        let d = match val.layer_rows(series, t - 1) {
            Some(layer) => {
                let rows = if full { layer } else { apply_rows(&layer, &basis) };
                for r in rows {
                    ech.insert_sparse(r);
                }
                dim - ech.rank()
            }
            None => {
                let rows = val.condition_rows(series, t);
                let rows = if full { rows } else { apply_rows(&rows, &basis) };
                let mut e = Echelon::new(cols);
                for r in rows {
                    e.insert_sparse(r);
                }
                dim - e.rank()
            }
        };
        dims.push(d);
        if d == 0 {
            return dims;
        }
    }
    unreachable!("geometric valuations are linearly bounded at each level");
}

/// Non-increasing jumping numbers e_1 >= ... >= e_dim and their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpingProfile {
    pub jumps: Vec<i64>,
    pub mass: Rat,
}

impl JumpingProfile {
    pub fn e_max(&self) -> i64 {
        *self.jumps.first().unwrap()
    }

    pub fn e_min(&self) -> i64 {
        *self.jumps.last().unwrap()
    }
}

pub fn jumping_numbers(
    series: &LinearSeries,
    val: &ValuationSpec,
) -> Result<JumpingProfile, CoreError> {
    let dim = series.dim();
    if dim == 0 {
        return Err(CoreError::EmptyInput("jumping numbers of the zero space".into()));
    }
    let dims = dims_profile(series, val);
    let mut jumps = Vec::with_capacity(dim);
    for j in 1..=dim {
        let e = (0..dims.len()).rev().find(|&t| dims[t] >= j).unwrap();
        jumps.push(e as i64);
    }
    let mass = jumps.iter().map(|&e| rat(e)).fold(Rat::zero(), |s, t| s + t);
    Ok(JumpingProfile { jumps, mass })
}

/// Largest t with F_t nonzero at this level.
pub fn emax_level(series: &LinearSeries, val: &ValuationSpec) -> i64 {
    let dims = dims_profile(series, val);
    (dims.len() as i64) - 2
}

/// nu(V_k): the minimum of the valuation over nonzero sections, i.e. the
/// largest t with F_t = V_k.
pub fn numin_level(series: &LinearSeries, val: &ValuationSpec) -> i64 {
    let dim = series.dim();
    let dims = dims_profile(series, val);
    (0..dims.len()).rev().find(|&t| dims[t] == dim).unwrap() as i64
}

/// A (certified one-sided bound, estimate) pair for an asymptotic limit,
/// with the per-level normalized values it was read from.
#[derive(Debug, Clone)]
pub struct AsymptoticReport {
    pub certified: Rat,
    pub estimate: Rat,
    pub per_level: Vec<(usize, Rat)>,
}

fn richardson(per_level: &[(usize, Rat)]) -> Rat {
    let (k_last, r_last) = per_level.last().unwrap();
    if k_last % 2 == 0 {
        if let Some((_, r_half)) = per_level.iter().find(|(k, _)| 2 * k == *k_last) {
            return rat(2) * r_last - r_half;
        }
    }
    r_last.clone()
}

/// limsup e_max(V_k)/k: the running sup over k <= K is a certified lower
/// bound by superadditivity and Fekete's lemma.
pub fn emax_asymptotic(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    max_level: usize,
) -> Result<AsymptoticReport, CoreError> {
    let mut per_level = Vec::new();
    for k in fam.levels_up_to(max_level) {
        let v = fam.series(k)?;
        if v.dim() == 0 {
            continue;
        }
        per_level.push((k, ratq(emax_level(&v, val), k as i64)));
    }
    if per_level.is_empty() {
        return Err(CoreError::EmptyInput("no nonzero graded piece up to the level budget".into()));
    }
    let certified = per_level.iter().map(|(_, r)| r.clone()).max().unwrap();
    let estimate = richardson(&per_level).max(certified.clone());
    Ok(AsymptoticReport { certified, estimate, per_level })
}

/// liminf nu(V_k)/k: the running inf over k <= K is a certified upper bound
/// by subadditivity and Fekete's lemma.
pub fn emin_asymptotic(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    max_level: usize,
) -> Result<AsymptoticReport, CoreError> {
    let mut per_level = Vec::new();
    for k in fam.levels_up_to(max_level) {
        let v = fam.series(k)?;
        if v.dim() == 0 {
            continue;
        }
        per_level.push((k, ratq(numin_level(&v, val), k as i64)));
    }
    if per_level.is_empty() {
        return Err(CoreError::EmptyInput("no nonzero graded piece up to the level budget".into()));
    }
    let certified = per_level.iter().map(|(_, r)| r.clone()).min().unwrap();
    let estimate = richardson(&per_level).min(certified.clone());
    Ok(AsymptoticReport { certified, estimate, per_level })
}

/// Linear bound constant C with e_max(V_k) <= C k for the valuation on this
/// family (degree bound divided by the degree of the valuation center).
pub fn linear_bound_constant(fam: &SeriesFamily, val: &ValuationSpec) -> Rat {
    match val {
        ValuationSpec::OrderAtPoint(_) => fam.divisor.degree.clone(),
        ValuationSpec::OrderAlongCurve(g) => &fam.divisor.degree / rat(g.degree() as i64),
        ValuationSpec::OrderAlongExceptional(i) => &fam.divisor.degree - &fam.divisor.mults[*i],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{DivisorClass, GeometrySpec};

    fn p2_o1() -> SeriesFamily {
        SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1))).unwrap()
    }

    #[test]
    fn jumping_numbers_on_lines_at_flag_point() {
        // order of vanishing at P0 = [0:0:1] on H^0(O(1))
        let fam = p2_o1();
        let v = fam.series(1).unwrap();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let prof = jumping_numbers(&v, &val).unwrap();
        assert_eq!(prof.jumps, vec![1, 1, 0]);
        assert_eq!(prof.mass, rat(2));
        assert_eq!(prof.e_max(), 1);
        assert_eq!(prof.e_min(), 0);
    }

    #[test]
    fn jumping_numbers_on_p1() {
        let fam = SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let v = fam.series(1).unwrap();
        let val = ValuationSpec::order_at(&[0, 1]);
        let prof = jumping_numbers(&v, &val).unwrap();
        assert_eq!(prof.jumps, vec![1, 0]);
        assert_eq!(prof.mass, rat(1));
    }

    #[test]
    fn jumping_numbers_on_conics() {
        // Counting oracle at P0 = [0:0:1]: mult(X^aY^bZ^c) = a+b, so
        // dim F_t = #{(a,b,c) : a+b+c = 2, a+b >= t} = 6, 5, 3, 0.
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(2)))
            .unwrap();
        let v = fam.series(1).unwrap();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        assert_eq!(dims_profile(&v, &val), vec![6, 5, 3, 0]);
        let prof = jumping_numbers(&v, &val).unwrap();
        // e_j = sup{t : dim F_t >= j} read off the dims: e_3 = 2 since
        // dim F_2 = 3, and the mass is the sum over t >= 1 of dim F_t = 8
        assert_eq!(prof.jumps, vec![2, 2, 2, 1, 1, 0]);
        assert_eq!(prof.mass, rat(8));
    }

    #[test]
    fn emax_along_flag_line() {
        // X^k vanishes to order k along {X = 0}
        let fam = p2_o1();
        let x = Poly::monomial(3, &[1, 0, 0]);
        let val = ValuationSpec::OrderAlongCurve(x);
        let rep = emax_asymptotic(&fam, &val, 8).unwrap();
        assert_eq!(rep.certified, rat(1));
        assert_eq!(rep.estimate, rat(1));
    }

    #[test]
    fn emax_at_point_off_flag() {
        // lines through P1 give e_max(V_k) = k; the bigness threshold of
        // H - t E1 on the blow-up is t = 1
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[1, 0, 0]);
        let rep = emax_asymptotic(&fam, &val, 8).unwrap();
        assert_eq!(rep.certified, rat(1));
        assert_eq!(rep.estimate, rat(1));
    }

    #[test]
    fn emin_vanishes_for_points_off_base_locus() {
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let rep = emin_asymptotic(&fam, &val, 6).unwrap();
        assert_eq!(rep.certified, rat(0));
        let fam1 = SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let rep = emin_asymptotic(&fam1, &ValuationSpec::order_at(&[0, 1]), 6).unwrap();
        assert_eq!(rep.certified, rat(0));
    }

    #[test]
    fn emin_along_exceptional_is_zero() {
        // D = H - (1/2) E1: sections with excess 0 over the imposed
        // multiplicity exist (oracle: Y^(k/2) Z^(k/2) has mult exactly k/2)
        let fam = SeriesFamily::new(
            GeometrySpec::blowup_one_point(),
            DivisorClass::with_mults(rat(1), vec![ratq(1, 2)]),
        )
        .unwrap();
        let val = ValuationSpec::OrderAlongExceptional(0);
        let rep = emin_asymptotic(&fam, &val, 6).unwrap();
        assert_eq!(rep.certified, rat(0));
        assert_eq!(rep.estimate, rat(0));
    }

    #[test]
    fn p1_emax_at_point_off_flag() {
        // (P1, O(2), ord at q=[1:1], K=8) -> 2: X^k - ... sections vanishing
        // only at q: (X - Y)^(2k) has order 2k at q
        let fam = SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(2)))
            .unwrap();
        let val = ValuationSpec::order_at(&[1, 1]);
        let rep = emax_asymptotic(&fam, &val, 8).unwrap();
        assert_eq!(rep.certified, rat(2));
    }

    #[test]
    fn filtration_axioms_on_a_sample() {
        let fam = SeriesFamily::new(
            GeometrySpec::blowup_two_generic(),
            DivisorClass::with_mults(rat(2), vec![rat(1), rat(1)]),
        )
        .unwrap();
        let v = fam.series(2).unwrap();
        let val = ValuationSpec::order_at(&[0, 1, 1]);
        let dims = dims_profile(&v, &val);
        assert_eq!(dims[0], v.dim());
        assert!(dims.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(*dims.last().unwrap(), 0);
    }
}
