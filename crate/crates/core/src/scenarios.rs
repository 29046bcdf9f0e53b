//! Built-in scenarios: the model series with their known bodies, functions
//! and integrals, plus the one-parameter blow-up family. Golden answers
//! live here so the command line and the acceptance suite share one source.

use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::exact::{rat, ratq, Rat};
use crate::filtration::ValuationSpec;
use crate::geometry::{convex_hull, AffinePiece, Body, ConcavePL, Point, Polytope, QuadraticCapBody};
use crate::integrals::DivisorFamily;
use crate::poly::Poly;
use crate::series::{DivisorClass, GeometrySpec, SeriesFamily};

fn pt(x: i64, y: i64) -> Point {
    vec![rat(x), rat(y)]
}

/// Closed-form concave piecewise-linear function from explicit pieces.
fn closed_form(domain: Polytope, pieces: Vec<(Vec<Rat>, Rat, Vec<Point>)>) -> ConcavePL {
    let mut out_pieces = Vec::new();
    let mut samples = Vec::new();
    for (gradient, constant, cell_pts) in pieces {
        let cell = convex_hull(&cell_pts, domain.ambient);
        for v in &cell.vertices {
            let val = gradient
                .iter()
                .zip(v)
                .map(|(g, x)| g * x)
                .fold(Rat::zero(), |s, t| s + t)
                + &constant;
            samples.push((v.clone(), val));
        }
        out_pieces.push(AffinePiece { gradient, constant, cell });
    }
    ConcavePL { domain, pieces: out_pieces, samples }
}

/// phi(x) = x on [0, d] (order of vanishing at the flag point on the line).
pub fn p1_identity_phi(d: i64) -> ConcavePL {
    let domain = Polytope::segment(rat(0), rat(d));
    closed_form(
        domain,
        vec![(vec![rat(1)], rat(0), vec![vec![rat(0)], vec![rat(d)]])],
    )
}

/// phi(x) = d - x on [0, d] (order of vanishing at a point off the flag).
pub fn p1_reflection_phi(d: i64) -> ConcavePL {
    let domain = Polytope::segment(rat(0), rat(d));
    closed_form(
        domain,
        vec![(vec![rat(-1)], rat(d), vec![vec![rat(0)], vec![rat(d)]])],
    )
}

/// phi(a, b) = a + b on the degree-d simplex.
pub fn p2_sum_phi(d: i64) -> ConcavePL {
    let domain = convex_hull(&[pt(0, 0), pt(d, 0), pt(0, d)], 2);
    closed_form(
        domain.clone(),
        vec![(vec![rat(1), rat(1)], rat(0), domain.vertices)],
    )
}

/// phi(a, b) = d - a on the degree-d simplex.
pub fn p2_one_minus_a_phi(d: i64) -> ConcavePL {
    let domain = convex_hull(&[pt(0, 0), pt(d, 0), pt(0, d)], 2);
    closed_form(
        domain.clone(),
        vec![(vec![rat(-1), rat(0)], rat(d), domain.vertices)],
    )
}

/// Okounkov body of H - lambda E1 on the one-point blow-up:
/// the quadrilateral (0,0), (1-lambda,0), (1-lambda,lambda), (0,1).
pub fn blowup_domain(lambda: &Rat) -> Polytope {
    let u = Rat::one() - lambda;
    convex_hull(
        &[
            pt(0, 0),
            vec![u.clone(), Rat::zero()],
            vec![u, lambda.clone()],
            pt(0, 1),
        ],
        2,
    )
}

/// phi(a,b) = a + b over the blow-up body (valuation at the flag point).
pub fn blowup_phi0(lambda: &Rat) -> ConcavePL {
    let domain = blowup_domain(lambda);
    closed_form(
        domain.clone(),
        vec![(vec![rat(1), rat(1)], rat(0), domain.vertices)],
    )
}

/// The piecewise function for the valuation at a generic point:
/// 1 - a on { a + b <= 1 - lambda }, 2 - 2a - b - lambda beyond.
pub fn blowup_phi1(lambda: &Rat) -> ConcavePL {
    let domain = blowup_domain(lambda);
    let u = Rat::one() - lambda;
    let cell1 = vec![pt(0, 0), vec![u.clone(), Rat::zero()], vec![Rat::zero(), u.clone()]];
    let cell2 = vec![
        vec![u.clone(), Rat::zero()],
        vec![u.clone(), lambda.clone()],
        pt(0, 1),
        vec![Rat::zero(), u],
    ];
    closed_form(
        domain,
        vec![
            (vec![rat(-1), rat(0)], rat(1), cell1),
            (vec![rat(-2), rat(-1)], rat(2) - lambda, cell2),
        ],
    )
}

/// The closed-form value of the blow-up integral: 1/3 - lambda^2/2 +
/// lambda^3/6.
pub fn blowup_integral_formula(lambda: &Rat) -> Rat {
    ratq(1, 3) - lambda * lambda / rat(2) + lambda * lambda * lambda / rat(6)
}

/// Valuation at the generic point [1:1:1] (off the exceptional locus and
/// off the line joining the flag point and the blown-up point).
pub fn generic_point_valuation() -> ValuationSpec {
    ValuationSpec::order_at(&[1, 1, 1])
}

/// The one-parameter blow-up family H - lambda E1 with the given valuation
/// center; carries the known closed-form envelope.
pub fn blowup_family(at_flag_point: bool) -> DivisorFamily {
    let name = if at_flag_point {
        "blowup1-family-ordP0"
    } else {
        "blowup1-family-ordP2"
    };
    DivisorFamily {
        name: name.into(),
        instance: Box::new(move |lambda: &Rat| {
            if lambda.is_negative() || lambda >= &Rat::one() {
                return None; // big iff 0 <= lambda < 1
            }
            let fam = SeriesFamily::new(
                GeometrySpec::blowup_one_point(),
                DivisorClass::with_mults(rat(1), vec![lambda.clone()]),
            )
            .expect("valid family member");
            let val = if at_flag_point {
                ValuationSpec::order_at(&[0, 0, 1])
            } else {
                generic_point_valuation()
            };
            Some((fam, val))
        }),
        closed_form: Some(Box::new(move |lambda: &Rat| {
            if at_flag_point {
                blowup_phi0(lambda)
            } else {
                blowup_phi1(lambda)
            }
        })),
    }
}

/// A series scenario with its golden answers.
pub struct SeriesScenario {
    pub name: &'static str,
    pub family: SeriesFamily,
    pub valuation: ValuationSpec,
    pub default_level: usize,
    /// Exact vertex set of the body, certified for any budget at least the
    /// default level.
    pub golden_body: Option<Vec<Point>>,
    /// Known exact Okounkov function.
    pub closed_phi: Option<ConcavePL>,
    /// Known exact integral of the Okounkov function.
    pub golden_integral: Option<Rat>,
}

/// The synthetic curved-boundary demo: body, discontinuity center, probe
/// budget, and the polytope control case.
pub struct DiskScenario {
    pub name: &'static str,
    pub body: Body,
    pub center: Point,
    pub control_body: Body,
    pub control_center: Point,
}

pub struct SemigroupScenario {
    pub name: &'static str,
    pub generators: Vec<Vec<i64>>,
    pub box_bound: i64,
    pub golden_gap: Vec<Vec<i64>>,
}

pub struct FeketeScenario {
    pub name: &'static str,
    pub function: &'static str,
    pub point: Vec<Rat>,
    pub steps: usize,
    pub golden_value: Rat,
    pub bracket_width: Rat,
}

pub enum Scenario {
    Series(SeriesScenario),
    Disk(DiskScenario),
    Semigroup(SemigroupScenario),
    Fekete(FeketeScenario),
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Series(s) => s.name,
            Scenario::Disk(s) => s.name,
            Scenario::Semigroup(s) => s.name,
            Scenario::Fekete(s) => s.name,
        }
    }
}

pub const SCENARIO_NAMES: &[&str] = &[
    "p1-curve",
    "p2-deg2",
    "p2-ordP0",
    "p2-ordP1",
    "blowup1",
    "blowup2-generic",
    "blowup2-collinear",
    "disk-demo",
    "semigroup-gap",
    "fekete-demo",
];

/// Resolves a built-in scenario. `lambda` feeds the blow-up scenario (the
/// body demo uses degree 2; default lambda is 1).
pub fn by_name(name: &str, lambda: Option<&Rat>) -> Result<Scenario, CoreError> {
    let p0 = ValuationSpec::order_at(&[0, 0, 1]);
    let p1_point = ValuationSpec::order_at(&[1, 0, 0]);
    match name {
        "p1-curve" => Ok(Scenario::Series(SeriesScenario {
            name: "p1-curve",
            family: SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(1)))?,
            valuation: ValuationSpec::order_at(&[0, 1]),
            default_level: 6,
            golden_body: Some(vec![vec![rat(0)], vec![rat(1)]]),
            closed_phi: Some(p1_identity_phi(1)),
            golden_integral: Some(ratq(1, 2)),
        })),
        "p2-deg2" => Ok(Scenario::Series(SeriesScenario {
            name: "p2-deg2",
            family: SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(2)))?,
            valuation: p0,
            default_level: 2,
            golden_body: Some(vec![pt(0, 0), pt(2, 0), pt(0, 2)]),
            closed_phi: Some(p2_sum_phi(2)),
            golden_integral: Some(ratq(8, 3)),
        })),
        "p2-ordP0" => Ok(Scenario::Series(SeriesScenario {
            name: "p2-ordP0",
            family: SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))?,
            valuation: p0,
            default_level: 3,
            golden_body: Some(vec![pt(0, 0), pt(1, 0), pt(0, 1)]),
            closed_phi: Some(p2_sum_phi(1)),
            golden_integral: Some(ratq(1, 3)),
        })),
        "p2-ordP1" => Ok(Scenario::Series(SeriesScenario {
            name: "p2-ordP1",
            family: SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))?,
            valuation: p1_point,
            default_level: 3,
            golden_body: Some(vec![pt(0, 0), pt(1, 0), pt(0, 1)]),
            closed_phi: Some(p2_one_minus_a_phi(1)),
            golden_integral: Some(ratq(1, 3)),
        })),
        "blowup1" => {
            let lam = lambda.cloned().unwrap_or_else(|| rat(1));
            if lam.is_negative() || lam > rat(2) {
                return Err(CoreError::NotBig(format!(
                    "lambda = {lam} outside [0, 2) for 2H - lambda E1"
                )));
            }
            let golden_body = (lam == rat(1)).then(|| vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 2)]);
            Ok(Scenario::Series(SeriesScenario {
                name: "blowup1",
                family: SeriesFamily::new(
                    GeometrySpec::blowup_one_point(),
                    DivisorClass::with_mults(rat(2), vec![lam]),
                )?,
                valuation: generic_point_valuation(),
                default_level: 4,
                golden_body,
                closed_phi: None,
                golden_integral: None,
            }))
        }
        "blowup2-generic" => Ok(Scenario::Series(SeriesScenario {
            name: "blowup2-generic",
            family: SeriesFamily::new(
                GeometrySpec::blowup_two_generic(),
                DivisorClass::with_mults(rat(2), vec![rat(1), rat(1)]),
            )?,
            valuation: p0,
            default_level: 6,
            golden_body: Some(vec![pt(0, 0), pt(1, 0), pt(0, 2)]),
            closed_phi: None,
            golden_integral: None,
        })),
        "blowup2-collinear" => Ok(Scenario::Series(SeriesScenario {
            name: "blowup2-collinear",
            family: SeriesFamily::new(
                GeometrySpec::blowup_two_collinear(),
                DivisorClass::with_mults(rat(2), vec![rat(1), rat(1)]),
            )?,
            valuation: p0,
            default_level: 6,
            golden_body: Some(vec![pt(0, 0), pt(1, 1), pt(0, 2)]),
            closed_phi: None,
            golden_integral: None,
        })),
        "disk-demo" => Ok(Scenario::Disk(DiskScenario {
            name: "disk-demo",
            body: Body::Cap(QuadraticCapBody::half_disk_cap()),
            center: pt(0, 2),
            control_body: Body::Poly(convex_hull(
                &[pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)],
                2,
            )),
            control_center: pt(0, 0),
        })),
        "semigroup-gap" => Ok(Scenario::Semigroup(SemigroupScenario {
            name: "semigroup-gap",
            generators: vec![vec![2], vec![3]],
            box_bound: 20,
            golden_gap: vec![vec![1]],
        })),
        "fekete-demo" => Ok(Scenario::Fekete(FeketeScenario {
            name: "fekete-demo",
            function: "ceil-norm",
            point: vec![rat(3), rat(4)],
            steps: 32,
            golden_value: rat(5),
            bracket_width: ratq(1, 32),
        })),
        other => Err(CoreError::Parse(format!("unknown scenario `{other}`"))),
    }
}

/// Named valuations for overriding a scenario's default from the CLI.
pub fn valuation_by_name(fam: &SeriesFamily, name: &str) -> Result<ValuationSpec, CoreError> {
    match (name, fam.geometry.variety_dim()) {
        ("ord-p", 1) => Ok(ValuationSpec::order_at(&[0, 1])),
        ("ord-q", 1) => Ok(ValuationSpec::order_at(&[1, 1])),
        ("ord-p0", 2) => Ok(ValuationSpec::order_at(&[0, 0, 1])),
        ("ord-p1", 2) => Ok(ValuationSpec::order_at(&[1, 0, 0])),
        ("ord-p2", 2) => Ok(generic_point_valuation()),
        ("ord-line", 2) => Ok(ValuationSpec::OrderAlongCurve(Poly::monomial(3, &[1, 0, 0]))),
        ("ord-e1", 2) if !fam.geometry.blown_up_points().is_empty() => {
            Ok(ValuationSpec::OrderAlongExceptional(0))
        }
        _ => Err(CoreError::Parse(format!("unknown valuation `{name}` for this geometry"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_integrate_to_the_cubic() {
        // independent symbolic check of the family formula at several
        // parameters, for both valuation choices
        for (n, d) in [(0i64, 1i64), (1, 4), (1, 2), (3, 4), (2, 3)] {
            let lam = ratq(n, d);
            let i0 = blowup_phi0(&lam).integrate();
            let i1 = blowup_phi1(&lam).integrate();
            let expect = blowup_integral_formula(&lam);
            assert_eq!(i0, expect, "phi0 at {lam}");
            assert_eq!(i1, expect, "phi1 at {lam}");
        }
    }

    #[test]
    fn formula_values_on_the_acceptance_grid() {
        assert_eq!(blowup_integral_formula(&rat(0)), ratq(1, 3));
        assert_eq!(blowup_integral_formula(&ratq(1, 4)), ratq(117, 384));
        assert_eq!(blowup_integral_formula(&ratq(1, 2)), ratq(11, 48));
        assert_eq!(blowup_integral_formula(&ratq(3, 4)), ratq(47, 384));
    }

    #[test]
    fn blowup_phi1_matches_the_piecewise_formula() {
        let lam = ratq(1, 2);
        let phi = blowup_phi1(&lam);
        // a+b <= 1/2: 1 - a
        assert_eq!(phi.eval(&[ratq(1, 4), ratq(1, 8)]).unwrap(), ratq(3, 4));
        // a+b >= 1/2: 2 - 2a - b - 1/2
        assert_eq!(phi.eval(&[ratq(1, 4), ratq(1, 2)]).unwrap(), ratq(1, 2));
        assert_eq!(phi.eval(&[rat(0), rat(1)]).unwrap(), ratq(1, 2));
        assert_eq!(phi.eval(&[ratq(1, 2), ratq(1, 2)]).unwrap(), rat(0));
    }

    #[test]
    fn all_scenarios_resolve() {
        for name in SCENARIO_NAMES {
            assert!(by_name(name, None).is_ok(), "scenario {name}");
        }
        assert!(by_name("nope", None).is_err());
    }

    #[test]
    fn blowup_scenario_rejects_non_big() {
        assert!(by_name("blowup1", Some(&rat(3))).is_err());
    }
}
