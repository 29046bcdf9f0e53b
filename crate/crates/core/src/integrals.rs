//! The integral invariant of an Okounkov function: exact integration over
//! the body, mass-sequence convergence data, and homogeneity / family scans.

use num_traits::Zero;

use crate::error::CoreError;
use crate::exact::{rat, Rat};
use crate::filtration::{jumping_numbers, ValuationSpec};
use crate::function::okounkov_function_envelope;
use crate::geometry::ConcavePL;
use crate::series::SeriesFamily;

#[derive(Debug, Clone)]
pub struct IntegralReport {
    /// Exact integral of the level-truncated envelope over the body.
    pub integral: Rat,
    /// Integral divided by the body volume (zero for degenerate bodies).
    pub normalized: Rat,
    pub body_volume: Rat,
    /// (k, mass(V_k) / k^(n+1)) for the levels used.
    pub mass_sequence: Vec<(usize, Rat)>,
    pub max_level: usize,
}

/// mass(V_k) / k^(n+1) for each integral level in the range.
pub fn mass_sequence(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    levels: impl IntoIterator<Item = usize>,
) -> Result<Vec<(usize, Rat)>, CoreError> {
    let n = fam.variety_dim();
    let mut out = Vec::new();
    for k in levels {
        if !fam.level_is_integral(k) {
            continue;
        }
        let series = fam.series(k)?;
        if series.dim() == 0 {
            continue;
        }
        let prof = jumping_numbers(&series, val)?;
        let mut denom = rat(1);
        for _ in 0..=n {
            denom = denom * rat(k as i64);
        }
        out.push((k, prof.mass / denom));
    }
    Ok(out)
}

pub fn integral(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    max_level: usize,
) -> Result<IntegralReport, CoreError> {
    let env = okounkov_function_envelope(fam, val, max_level)?;
    report_from_envelope(fam, val, max_level, &env)
}

/// Integral report built from a given envelope (used with closed-form
/// envelopes on golden scenarios).
pub fn report_from_envelope(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    max_level: usize,
    env: &ConcavePL,
) -> Result<IntegralReport, CoreError> {
    let integral = env.integrate();
    let body_volume = env.domain.measure();
    let normalized = if body_volume.is_zero() {
        Rat::zero()
    } else {
        &integral / &body_volume
    };
    let mass_sequence = mass_sequence(fam, val, 1..=max_level)?;
    Ok(IntegralReport {
        integral,
        normalized,
        body_volume,
        mass_sequence,
        max_level,
    })
}

/// Exact comparison of the integral on the m-th Veronese against
/// m^(n+1) times the integral, at matched level budgets.
pub fn check_integral_homogeneity(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    m: usize,
    max_level: usize,
) -> Result<(Rat, Rat), CoreError> {
    let base = integral(fam, val, max_level)?;
    let ver = integral(&fam.veronese(m), val, max_level)?;
    let mut factor = rat(1);
    for _ in 0..=fam.variety_dim() {
        factor = factor * rat(m as i64);
    }
    Ok((ver.integral, factor * base.integral))
}

/// A one-parameter family of (series, valuation) pairs, with an optional
/// closed-form envelope where one is known.
pub struct DivisorFamily {
    pub name: String,
    #[allow(clippy::type_complexity)]
    pub instance: Box<dyn Fn(&Rat) -> Option<(SeriesFamily, ValuationSpec)> + Send + Sync>,
    #[allow(clippy::type_complexity)]
    pub closed_form: Option<Box<dyn Fn(&Rat) -> ConcavePL + Send + Sync>>,
}

#[derive(Debug, Clone)]
pub enum FamilyOutcome {
    /// Parameter outside the bigness window.
    Flagged(String),
    Computed {
        /// Exact integral of the known closed-form envelope, when available.
        closed_form: Option<Rat>,
        report: IntegralReport,
    },
}

#[derive(Debug, Clone)]
pub struct FamilyPoint {
    pub lambda: Rat,
    pub outcome: FamilyOutcome,
}

pub fn family_scan(
    family: &DivisorFamily,
    grid: &[Rat],
    max_level: usize,
) -> Result<Vec<FamilyPoint>, CoreError> {
    let mut out = Vec::new();
    for lambda in grid {
        let Some((fam, val)) = (family.instance)(lambda) else {
            out.push(FamilyPoint {
                lambda: lambda.clone(),
                outcome: FamilyOutcome::Flagged("outside the bigness window".into()),
            });
            continue;
        };
        let report = integral(&fam, &val, max_level)?;
        let closed_form = family
            .closed_form
            .as_ref()
            .map(|f| f(lambda).integrate());
        out.push(FamilyPoint {
            lambda: lambda.clone(),
            outcome: FamilyOutcome::Computed { closed_form, report },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratq;
    use crate::series::{DivisorClass, GeometrySpec};
    use num_traits::Signed;

    #[test]
    fn integral_on_p2_is_one_third() {
        // ord at a generic point: phi = 1 - a, integral 1/3
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val = ValuationSpec::order_at(&[1, 2, 1]);
        let rep = integral(&fam, &val, 4).unwrap();
        assert_eq!(rep.integral, ratq(1, 3));
        assert_eq!(rep.body_volume, ratq(1, 2));
        assert_eq!(rep.normalized, ratq(2, 3));
    }

    #[test]
    fn integral_on_p1_is_one_half() {
        // identity function on [0,1]
        let fam = SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val = ValuationSpec::order_at(&[0, 1]);
        let rep = integral(&fam, &val, 4).unwrap();
        assert_eq!(rep.integral, ratq(1, 2));
        assert_eq!(rep.normalized, ratq(1, 2));
    }

    #[test]
    fn integral_flag_independence() {
        // recomputing (P^2, O(1), ord at [0:0:1]) with the alternative flag
        // line {Y=0} through the same flag point gives the same integral
        let standard = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let alt = SeriesFamily::new(
            GeometrySpec::P2 {
                flag_line: vec![rat(0), rat(1), rat(0)],
                flag_point: vec![rat(0), rat(0), rat(1)],
            },
            DivisorClass::of_degree(rat(1)),
        )
        .unwrap();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let a = integral(&standard, &val, 3).unwrap();
        let b = integral(&alt, &val, 3).unwrap();
        assert_eq!(a.integral, b.integral);
        assert_eq!(a.integral, ratq(1, 3));
    }

    #[test]
    fn homogeneity_of_integral() {
        // 2^3 * integral(O(1)) = integral of a+b over twice the simplex
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let (lhs, rhs) = check_integral_homogeneity(&fam, &val, 2, 3).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, ratq(8, 3));
        // P1: 4 * 1/2 = integral of x over [0,2]
        let fam1 = SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val1 = ValuationSpec::order_at(&[0, 1]);
        let (lhs, rhs) = check_integral_homogeneity(&fam1, &val1, 2, 4).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, rat(2));
    }

    #[test]
    fn normalized_integral_scales_linearly() {
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let base = integral(&fam, &val, 3).unwrap();
        let ver = integral(&fam.veronese(3), &val, 3).unwrap();
        assert_eq!(ver.normalized, rat(3) * base.normalized);
    }

    #[test]
    fn mass_sequence_tracks_the_integral() {
        // exact identity mass(V_k) = k(k+1)(k+2)/3 for ord at a point on
        // O(1): within 3C/k of the limit 1/3 with C = 1
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val = ValuationSpec::order_at(&[1, 0, 0]);
        for (k, m) in mass_sequence(&fam, &val, [4, 8, 12]).unwrap() {
            let kk = rat(k as i64);
            let expect = &kk * (&kk + rat(1)) * (&kk + rat(2)) / rat(3) / (&kk * &kk * &kk);
            assert_eq!(m, expect);
            assert!((m - ratq(1, 3)).abs() <= rat(3) / kk);
        }
    }
}
