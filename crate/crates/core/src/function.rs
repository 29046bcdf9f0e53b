//! Okounkov functions: level-k approximations by both constructions
//! (concave envelope of filtration sup-values, and slice-body superlevel
//! sets), plus the structural identities they satisfy (Veronese
//! homogeneity and reduction to the boundary).

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::exact::{rat, rat_ceil, Rat};
use crate::filtration::{linear_bound_constant, ValuationSpec};
use crate::geometry::{concave_envelope, ConcavePL, Polytope};
use crate::okbody::{okounkov_body, slice_body, OkounkovBodyApprox};
use crate::poly::Poly;
use crate::series::{subspace_with_vanishing, SeriesFamily};
use crate::valuation::achievable_vectors;

/// Value of the filtration sup at a normalized valuation vector and level:
/// (1/k) max { t : some s in F_t V_k has valuation vector k v }.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSample {
    pub vector: Vec<Rat>,
    pub level: usize,
    pub value: Rat,
}

fn integral_target(v: &[Rat], k: usize) -> Option<Vec<i64>> {
    let kk = rat(k as i64);
    v.iter()
        .map(|c| {
            let kc = c * &kk;
            kc.is_integer().then(|| i64::try_from(kc.to_integer()).unwrap())
        })
        .collect()
}

fn achievable_in_subspace(
    series: &crate::series::LinearSeries,
    basis: &[Vec<Rat>],
    target: &[i64],
) -> bool {
    achievable_vectors(series, basis).iter().any(|f| f.entries == target)
}

/// The sample at one vector and level, by binary search over t (valid since
/// the feasible t-set is downward closed). Returns None when the vector is
/// not achievable at this level.
pub fn phi_sample(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    v: &[Rat],
    k: usize,
) -> Result<Option<FunctionSample>, CoreError> {
    let series = fam.series(k)?;
    if series.dim() == 0 {
        return Ok(None);
    }
    let Some(target) = integral_target(v, k) else {
        return Ok(None);
    };
    let feasible = |t: usize| -> bool {
        let basis = subspace_with_vanishing(&series, val, t);
        !basis.is_empty() && achievable_in_subspace(&series, &basis, &target)
    };
    if !feasible(0) {
        return Ok(None);
    }
    let mut lo = 0usize;
    let mut hi = series.degree + 2;
    debug_assert!(!feasible(hi));
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(FunctionSample {
        vector: v.to_vec(),
        level: k,
        value: rat(lo as i64) / rat(k as i64),
    }))
}

/// All samples of one level in a single downward sweep over t: the pivot
/// sets of the nested subspaces F_t shrink with t, so the last t at which a
/// vector is present is its sup.
pub fn phi_samples_at_level(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    k: usize,
) -> Result<Vec<FunctionSample>, CoreError> {
    let series = fam.series(k)?;
    if series.dim() == 0 {
        return Ok(Vec::new());
    }
    let kk = rat(k as i64);
    let mut best: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for t in 0..=(series.degree + 1) {
        let basis = subspace_with_vanishing(&series, val, t);
        if basis.is_empty() {
            break;
        }
        for fv in achievable_vectors(&series, &basis) {
            best.insert(fv.entries, t);
        }
    }
    Ok(best
        .into_iter()
        .map(|(entries, t)| FunctionSample {
            vector: entries.iter().map(|&e| rat(e) / &kk).collect(),
            level: k,
            value: rat(t as i64) / &kk,
        })
        .collect())
}

/// Concave envelope of all level samples up to the budget, over the
/// level-truncated body: a certified pointwise lower approximation of the
/// Okounkov function.
pub fn okounkov_function_envelope(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    max_level: usize,
) -> Result<ConcavePL, CoreError> {
    let body = okounkov_body(fam, max_level)?;
    let mut merged: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
    for k in fam.levels_up_to(max_level) {
        for s in phi_samples_at_level(fam, val, k)? {
            match merged.get(&s.vector) {
                Some(old) if *old >= s.value => {}
                _ => {
                    merged.insert(s.vector, s.value);
                }
            }
        }
    }
    let samples: Vec<(Vec<Rat>, Rat)> = merged.into_iter().collect();
    concave_envelope(&samples, &body.body)
}

/// Step approximation by superlevel sets: psi(x) = max { t in grid : x in
/// the t-slice body }.
pub struct SliceFunction {
    pub domain: Polytope,
    pub slices: Vec<(Rat, OkounkovBodyApprox)>,
}

impl SliceFunction {
    pub fn eval(&self, x: &[Rat]) -> Result<Rat, CoreError> {
        if !self.domain.contains(x) {
            return Err(CoreError::PointOutsideDomain(format!("{x:?}")));
        }
        let mut best = Rat::zero();
        for (t, b) in &self.slices {
            if b.body.contains(x) && t > &best {
                best = t.clone();
            }
        }
        Ok(best)
    }
}

pub fn okounkov_function_slices(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    max_level: usize,
    t_grid: &[Rat],
) -> Result<SliceFunction, CoreError> {
    if t_grid.iter().any(|t| t.is_negative()) {
        return Err(CoreError::Unsupported("slice grid values must be non-negative".into()));
    }
    let domain = okounkov_body(fam, max_level)?.body;
    let mut grid: Vec<Rat> = t_grid.to_vec();
    grid.sort();
    grid.dedup();
    let mut slices = Vec::with_capacity(grid.len());
    for t in grid {
        let b = slice_body(fam, val, &t, max_level)?;
        slices.push((t, b));
    }
    Ok(SliceFunction { domain, slices })
}

/// Grid of multiples of 1/denominator covering [0, linear bound].
pub fn default_t_grid(fam: &SeriesFamily, val: &ValuationSpec, denominator: usize) -> Vec<Rat> {
    let cap = linear_bound_constant(fam, val);
    let steps = rat_ceil(&(cap * rat(denominator as i64)));
    let steps = usize::try_from(steps).unwrap();
    (0..=steps).map(|j| rat(j as i64) / rat(denominator as i64)).collect()
}

#[derive(Debug, Clone)]
pub struct ReductionRow {
    pub x: Vec<Rat>,
    pub lhs: Rat,
    pub rhs: Rat,
    pub residual: Rat,
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub nu_of_flag_divisor: i64,
    pub rows: Vec<ReductionRow>,
    pub max_abs_residual: Rat,
}

/// Reduction to the boundary for a flag whose divisorial part lies in |L|:
/// phi(x1, x2) = (1 - x1) phi(0, x2/(1-x1)) + x1 nu(Y1), checked on
/// envelope approximations. Samples with x1 = 1 are skipped (the homothety
/// degenerates there).
pub fn check_reduction(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    samples: &[Vec<Rat>],
    max_level: usize,
) -> Result<ReductionReport, CoreError> {
    if fam.geometry.variety_dim() != 2
        || !fam.geometry.blown_up_points().is_empty()
        || fam.divisor.degree != Rat::one()
    {
        return Err(CoreError::Unsupported(
            "boundary reduction needs the flag line inside the linear system (degree-1 class on the plane)"
                .into(),
        ));
    }
    let env = okounkov_function_envelope(fam, val, max_level)?;
    // nu applied to the section cutting out the flag line
    let line = fam.geometry.flag_line().unwrap().to_vec();
    let section = Poly::linear_form(&line);
    let level_one = fam.series(1)?;
    let nu_line = val.value(&level_one, &section)?;
    let mut rows = Vec::new();
    let mut max_abs = Rat::zero();
    for x in samples {
        if x[0] == Rat::one() {
            continue;
        }
        let lhs = env.eval(x)?;
        let scale = Rat::one() - &x[0];
        let boundary_pt = vec![Rat::zero(), &x[1] / &scale];
        let rhs = &scale * env.eval(&boundary_pt)? + &x[0] * rat(nu_line);
        let residual = &lhs - &rhs;
        if residual.abs() > max_abs {
            max_abs = residual.abs();
        }
        rows.push(ReductionRow { x: x.clone(), lhs, rhs, residual });
    }
    Ok(ReductionReport {
        nu_of_flag_divisor: nu_line,
        rows,
        max_abs_residual: max_abs,
    })
}

#[derive(Debug, Clone)]
pub struct HomogeneityRow {
    pub x: Vec<Rat>,
    pub veronese_value: Rat,
    pub scaled_value: Rat,
    pub residual: Rat,
}

/// Veronese homogeneity phi_m(m x) = m phi(x) at matched level budgets.
pub fn check_homogeneity(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    m: usize,
    samples: &[Vec<Rat>],
    max_level: usize,
) -> Result<Vec<HomogeneityRow>, CoreError> {
    let env = okounkov_function_envelope(fam, val, max_level)?;
    let env_m = okounkov_function_envelope(&fam.veronese(m), val, max_level)?;
    let mm = rat(m as i64);
    let mut rows = Vec::new();
    for x in samples {
        let mx: Vec<Rat> = x.iter().map(|c| c * &mm).collect();
        let lhs = env_m.eval(&mx)?;
        let rhs = &mm * env.eval(x)?;
        let residual = &lhs - &rhs;
        rows.push(HomogeneityRow {
            x: x.clone(),
            veronese_value: lhs,
            scaled_value: rhs,
            residual,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratq;
    use crate::series::{DivisorClass, GeometrySpec};

    fn p2_o1() -> SeriesFamily {
        SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1))).unwrap()
    }

    fn p1_o1() -> SeriesFamily {
        SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(1))).unwrap()
    }

    #[test]
    fn sample_for_flag_point_valuation() {
        // phi at (1/3, 1/3), level 3, ord at P0: X Y Z achieves mult 2
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let s = phi_sample(&fam, &val, &[ratq(1, 3), ratq(1, 3)], 3)
            .unwrap()
            .unwrap();
        assert_eq!(s.value, ratq(2, 3));
    }

    #[test]
    fn sample_for_point_off_flag() {
        // phi^1(0,0) = 1: the line through P1 avoiding the flag data
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[1, 0, 0]);
        let s = phi_sample(&fam, &val, &[rat(0), rat(0)], 1).unwrap().unwrap();
        assert_eq!(s.value, rat(1));
    }

    #[test]
    fn sample_on_curve_identity() {
        // (P1, O(1), ord at p, v = 1/2, k = 2) -> 1/2
        let fam = p1_o1();
        let val = ValuationSpec::order_at(&[0, 1]);
        let s = phi_sample(&fam, &val, &[ratq(1, 2)], 2).unwrap().unwrap();
        assert_eq!(s.value, ratq(1, 2));
    }

    #[test]
    fn sample_absent_when_not_achievable() {
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        // (1/2, 1/2) needs an even level
        assert!(phi_sample(&fam, &val, &[ratq(1, 2), ratq(1, 2)], 3).unwrap().is_none());
    }

    #[test]
    fn sweep_agrees_with_binary_search() {
        let fam = p2_o1();
        for val in [
            ValuationSpec::order_at(&[0, 0, 1]),
            ValuationSpec::order_at(&[1, 0, 0]),
            ValuationSpec::order_at(&[1, 1, 1]),
        ] {
            for k in 1..=3 {
                for s in phi_samples_at_level(&fam, &val, k).unwrap() {
                    let direct = phi_sample(&fam, &val, &s.vector, k).unwrap().unwrap();
                    assert_eq!(direct.value, s.value);
                }
            }
        }
    }

    #[test]
    fn envelope_is_sum_of_coordinates_for_flag_point() {
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let env = okounkov_function_envelope(&fam, &val, 3).unwrap();
        for (a, b) in [(0, 0), (1, 0), (0, 1)] {
            let v = vec![rat(a), rat(b)];
            assert_eq!(env.eval(&v).unwrap(), rat(a + b));
        }
        for s in &env.samples {
            assert_eq!(env.eval(&s.0).unwrap(), &s.0[0] + &s.0[1]);
        }
        assert_eq!(env.eval(&[ratq(1, 6), ratq(1, 2)]).unwrap(), ratq(2, 3));
    }

    #[test]
    fn envelope_is_one_minus_a_for_point_off_flag() {
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[1, 0, 0]);
        let env = okounkov_function_envelope(&fam, &val, 3).unwrap();
        for s in &env.samples {
            assert_eq!(env.eval(&s.0).unwrap(), Rat::one() - &s.0[0]);
        }
        assert_eq!(env.eval(&[ratq(1, 3), ratq(1, 2)]).unwrap(), ratq(2, 3));
    }

    #[test]
    fn curve_envelopes() {
        let fam = p1_o1();
        let id = okounkov_function_envelope(&fam, &ValuationSpec::order_at(&[0, 1]), 6).unwrap();
        let refl = okounkov_function_envelope(&fam, &ValuationSpec::order_at(&[1, 1]), 6).unwrap();
        for j in 0..=6 {
            let x = ratq(j, 6);
            assert_eq!(id.eval(&[x.clone()]).unwrap(), x);
            assert_eq!(refl.eval(&[x.clone()]).unwrap(), Rat::one() - &x);
        }
    }

    #[test]
    fn midpoint_superadditivity_of_samples() {
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[1, 1, 1]);
        let k = 2;
        let samples = phi_samples_at_level(&fam, &val, k).unwrap();
        for a in &samples {
            for b in &samples {
                let mid: Vec<Rat> = a
                    .vector
                    .iter()
                    .zip(&b.vector)
                    .map(|(x, y)| (x + y) / rat(2))
                    .collect();
                let s = phi_sample(&fam, &val, &mid, 2 * k).unwrap().unwrap();
                assert!(
                    s.value >= (&a.value + &b.value) / rat(2),
                    "superadditivity failed at {mid:?}"
                );
            }
        }
    }

    #[test]
    fn slice_function_tracks_envelope() {
        // |envelope - psi| <= 1/6 at sixth-grid points for ord at P0
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let grid = default_t_grid(&fam, &val, 6);
        let psi = okounkov_function_slices(&fam, &val, 6, &grid).unwrap();
        let env = okounkov_function_envelope(&fam, &val, 6).unwrap();
        for i in 0..=6i64 {
            for j in 0..=(6 - i) {
                let x = vec![ratq(i, 6), ratq(j, 6)];
                let d = (env.eval(&x).unwrap() - psi.eval(&x).unwrap()).abs();
                assert!(d <= ratq(1, 6), "gap {d} too large at ({i}/6, {j}/6)");
            }
        }
    }

    #[test]
    fn slice_function_zero_grid() {
        let fam = p1_o1();
        let val = ValuationSpec::order_at(&[0, 1]);
        let psi = okounkov_function_slices(&fam, &val, 3, &[rat(0)]).unwrap();
        assert_eq!(psi.eval(&[ratq(1, 3)]).unwrap(), rat(0));
    }

    #[test]
    fn reduction_identity_for_both_valuations() {
        let fam = p2_o1();
        // ord at P0 (on the flag line): nu(line) = 1
        let rep = check_reduction(
            &fam,
            &ValuationSpec::order_at(&[0, 0, 1]),
            &[vec![ratq(1, 2), ratq(1, 4)], vec![rat(0), ratq(1, 2)]],
            3,
        )
        .unwrap();
        assert_eq!(rep.nu_of_flag_divisor, 1);
        assert!(rep.max_abs_residual.is_zero());
        // phi^0(1/2, 1/4) = 3/4 = (1/2)(1/2) + (1/2)(1)
        assert_eq!(rep.rows[0].lhs, ratq(3, 4));
        // ord at P1 (off the line): nu(line) = 0
        let rep = check_reduction(
            &fam,
            &ValuationSpec::order_at(&[1, 0, 0]),
            &[vec![ratq(1, 2), ratq(1, 4)]],
            3,
        )
        .unwrap();
        assert_eq!(rep.nu_of_flag_divisor, 0);
        assert!(rep.max_abs_residual.is_zero());
        assert_eq!(rep.rows[0].lhs, ratq(1, 2));
    }

    #[test]
    fn homogeneity_on_p2_and_p1() {
        let fam = p2_o1();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let rows = check_homogeneity(&fam, &val, 2, &[vec![ratq(1, 2), ratq(1, 2)]], 2).unwrap();
        assert_eq!(rows[0].veronese_value, rat(2));
        assert!(rows[0].residual.is_zero());
        let fam1 = p1_o1();
        let rows = check_homogeneity(
            &fam1,
            &ValuationSpec::order_at(&[0, 1]),
            3,
            &[vec![ratq(1, 3)]],
            3,
        )
        .unwrap();
        assert!(rows[0].residual.is_zero());
        assert_eq!(rows[0].veronese_value, rat(1));
    }
}
