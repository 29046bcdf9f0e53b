//! Level-truncated Okounkov bodies and the t-slice bodies of a filtration.

use num_traits::Signed;

use crate::error::CoreError;
use crate::exact::{rat, rat_ceil, Rat};
use crate::filtration::ValuationSpec;
use crate::geometry::{convex_hull, Polytope};
use crate::series::{subspace_with_vanishing, SeriesFamily};
use crate::valuation::{achievable_vectors, normalized_points, valuation_points};

/// Convex hull of the normalized valuation vectors seen up to a level
/// budget. By density this is an inner approximation, monotone in the
/// budget; `exact` is set only when a golden scenario certifies the hull.
#[derive(Debug, Clone)]
pub struct OkounkovBodyApprox {
    pub body: Polytope,
    pub max_level: usize,
    pub exact: bool,
}

pub fn okounkov_body(fam: &SeriesFamily, max_level: usize) -> Result<OkounkovBodyApprox, CoreError> {
    if max_level == 0 {
        return Err(CoreError::EmptyInput("level budget must be positive".into()));
    }
    let pts = valuation_points(fam, max_level)?;
    let normalized = normalized_points(&pts);
    Ok(OkounkovBodyApprox {
        body: convex_hull(&normalized, fam.variety_dim()),
        max_level,
        exact: false,
    })
}

/// Okounkov body of the graded subseries k -> { s in V_k : nu(s) >= t k },
/// truncated at the level budget. The slice can be empty.
pub fn slice_body(
    fam: &SeriesFamily,
    val: &ValuationSpec,
    t: &Rat,
    max_level: usize,
) -> Result<OkounkovBodyApprox, CoreError> {
    if t.is_negative() {
        return Err(CoreError::Unsupported("slice parameter must be non-negative".into()));
    }
    let mut normalized = Vec::new();
    for k in fam.levels_up_to(max_level) {
        let series = fam.series(k)?;
        if series.dim() == 0 {
            continue;
        }
        let tk = t * rat(k as i64);
        let need = usize::try_from(rat_ceil(&tk)).unwrap();
        let basis = subspace_with_vanishing(&series, val, need);
        if basis.is_empty() {
            continue;
        }
        for fv in achievable_vectors(&series, &basis) {
            normalized.push(fv.normalized());
        }
    }
    let body = if normalized.is_empty() {
        Polytope::empty(fam.variety_dim())
    } else {
        convex_hull(&normalized, fam.variety_dim())
    };
    Ok(OkounkovBodyApprox {
        body,
        max_level,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratq;
    use crate::geometry::Point;
    use crate::series::{DivisorClass, GeometrySpec};
    use std::collections::BTreeSet;

    fn pts(v: &[(i64, i64)]) -> BTreeSet<Point> {
        v.iter().map(|&(a, b)| vec![rat(a), rat(b)]).collect()
    }

    #[test]
    fn body_of_o2_is_twice_the_simplex() {
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(2)))
            .unwrap();
        let b = okounkov_body(&fam, 2).unwrap();
        assert_eq!(b.body.vertex_set(), pts(&[(0, 0), (2, 0), (0, 2)]));
    }

    #[test]
    fn body_of_blowup_one_point() {
        // 2H - E1: quadrilateral with vertex (1,1)
        let fam = SeriesFamily::new(
            GeometrySpec::blowup_one_point(),
            DivisorClass::with_mults(rat(2), vec![rat(1)]),
        )
        .unwrap();
        let b = okounkov_body(&fam, 4).unwrap();
        assert_eq!(b.body.vertex_set(), pts(&[(0, 0), (1, 0), (1, 1), (0, 2)]));
    }

    #[test]
    fn body_of_blowup_two_points() {
        let generic = SeriesFamily::new(
            GeometrySpec::blowup_two_generic(),
            DivisorClass::with_mults(rat(2), vec![rat(1), rat(1)]),
        )
        .unwrap();
        let b = okounkov_body(&generic, 6).unwrap();
        assert_eq!(b.body.vertex_set(), pts(&[(0, 0), (1, 0), (0, 2)]));

        let collinear = SeriesFamily::new(
            GeometrySpec::blowup_two_collinear(),
            DivisorClass::with_mults(rat(2), vec![rat(1), rat(1)]),
        )
        .unwrap();
        let b = okounkov_body(&collinear, 6).unwrap();
        assert_eq!(b.body.vertex_set(), pts(&[(0, 0), (1, 1), (0, 2)]));
    }

    #[test]
    fn body_monotone_in_level_budget() {
        let fam = SeriesFamily::new(
            GeometrySpec::blowup_one_point(),
            DivisorClass::with_mults(rat(2), vec![rat(1)]),
        )
        .unwrap();
        let small = okounkov_body(&fam, 2).unwrap();
        let large = okounkov_body(&fam, 4).unwrap();
        for v in &small.body.vertices {
            assert!(large.body.contains(v));
        }
    }

    #[test]
    fn slice_at_zero_is_whole_body() {
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let b0 = slice_body(&fam, &val, &rat(0), 3).unwrap();
        let b = okounkov_body(&fam, 3).unwrap();
        assert_eq!(b0.body.vertex_set(), b.body.vertex_set());
    }

    #[test]
    fn slice_at_top_for_flag_point() {
        // mult at P0 >= k forces a+b >= k: the segment from (1,0) to (0,1)
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let b = slice_body(&fam, &val, &rat(1), 4).unwrap();
        assert_eq!(b.body.affine_dim, 1);
        assert_eq!(b.body.vertex_set(), pts(&[(0, 1), (1, 0)]));
    }

    #[test]
    fn slice_at_top_for_point_off_flag() {
        // mult at P1 = [1:0:0] >= k forces a = 0 and leaves the whole
        // segment {0} x [0,1] (enumeration oracle: Y^b Z^(k-b) all survive)
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val = ValuationSpec::order_at(&[1, 0, 0]);
        let b = slice_body(&fam, &val, &rat(1), 4).unwrap();
        assert_eq!(b.body.vertex_set(), pts(&[(0, 0), (0, 1)]));
    }

    #[test]
    fn slices_non_increasing_in_t() {
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let val = ValuationSpec::order_at(&[0, 0, 1]);
        let grid = [rat(0), ratq(1, 4), ratq(1, 2), ratq(3, 4), rat(1)];
        let bodies: Vec<_> = grid
            .iter()
            .map(|t| slice_body(&fam, &val, t, 4).unwrap())
            .collect();
        for w in bodies.windows(2) {
            for v in &w[1].body.vertices {
                assert!(w[0].body.contains(v), "slice not nested at {v:?}");
            }
        }
        // beyond the top value the slice is empty
        let empty = slice_body(&fam, &val, &rat(2), 4).unwrap();
        assert!(empty.body.is_empty());
    }

    #[test]
    fn veronese_scaling_on_golden_scenario() {
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let b1 = okounkov_body(&fam, 2).unwrap();
        let b2 = okounkov_body(&fam.veronese(2), 2).unwrap();
        let scaled: BTreeSet<Point> = b1
            .body
            .vertices
            .iter()
            .map(|v| v.iter().map(|c| c * rat(2)).collect())
            .collect();
        assert_eq!(b2.body.vertex_set(), scaled);
    }
}
