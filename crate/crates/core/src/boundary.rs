//! Boundary discontinuity analysis via homothety families.
//!
//! For a body with a strictly curved boundary arc, the homothety-family
//! function x -> sup { t : x in t p + (1-t) body } jumps from 1 at the
//! center p to exactly 0 at nearby arc points: the chord from p leaves the
//! body exactly at the probe, so no positive shrinking keeps the probe
//! inside. Polytopes, being locally cones everywhere, get a continuity
//! certificate instead.

use num_traits::{One, Zero};

use crate::error::CoreError;
use crate::exact::{rat, ratq, Rat};
use crate::geometry::{homothety_sup, is_locally_cone, Body, Point, Value, DEFAULT_BRACKET_BITS};

/// The homothety-family function of a body with a marked boundary center.
#[derive(Debug, Clone)]
pub struct HomothetyFunction {
    pub body: Body,
    pub center: Point,
}

impl HomothetyFunction {
    pub fn new(body: Body, center: Point) -> Result<Self, CoreError> {
        if !body.on_boundary(&center) {
            return Err(CoreError::NotOnBoundary);
        }
        Ok(HomothetyFunction { body, center })
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Value, CoreError> {
        homothety_sup(&self.body, &self.center, x, DEFAULT_BRACKET_BITS)
    }
}

#[derive(Debug, Clone)]
pub struct ProbeRecord {
    pub point: Point,
    pub value: Value,
    /// Squared distance to the center (exact).
    pub dist2: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Probes on the boundary converge to the center while their values
    /// stay exactly 0 and the center value is 1.
    Discontinuous,
    /// Probe values converge to 1 along the boundary.
    ContinuityCertificate,
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub locally_cone: bool,
    pub center_value: Value,
    pub probes: Vec<ProbeRecord>,
    pub verdict: Verdict,
}

fn dist2(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            &d * &d
        })
        .fold(Rat::zero(), |s, t| s + t)
}

/// Probe points approaching the center along the boundary.
fn boundary_probes(body: &Body, p: &[Rat], n_probes: usize) -> Result<Vec<Point>, CoreError> {
    match body {
        Body::Cap(cap) if cap.quad_value(p).is_zero() => {
            // chord construction: rotate the chord direction toward the
            // tangent so the second intersection walks into p
            let grad = cap.quad_gradient(p);
            let tangent = vec![-grad[1].clone(), grad[0].clone()];
            let mut out = Vec::new();
            for sign in [rat(1), rat(-1)] {
                out.clear();
                let inward: Vec<Rat> = grad.iter().map(|g| -(g * &sign)).collect();
                for i in 1..=n_probes {
                    let eps = ratq(1, (i as i64) * 2);
                    let dir: Vec<Rat> = tangent
                        .iter()
                        .zip(&inward)
                        .map(|(t, n)| t + n * &eps)
                        .collect();
                    match cap.second_arc_point(p, &dir) {
                        Some(q) if cap.contains(&q) && q != p => out.push(q),
                        _ => break,
                    }
                }
                if out.len() == n_probes {
                    return Ok(out);
                }
            }
            Err(CoreError::Unsupported(
                "could not generate arc probes inside the body".into(),
            ))
        }
        Body::Cap(_) | Body::Poly(_) => {
            // walk along a boundary segment toward p
            let probe_dir = match body {
                Body::Poly(poly) => {
                    let other = poly
                        .vertices
                        .iter()
                        .find(|v| v.as_slice() != p)
                        .ok_or(CoreError::Unsupported("degenerate body".into()))?;
                    direction(p, other)
                }
                Body::Cap(cap) => {
                    // p is on a flat piece; slide along the active facet
                    let f = cap
                        .linear
                        .iter()
                        .find(|f| {
                            f.normal.iter().zip(p).map(|(a, b)| a * b).fold(Rat::zero(), |s, t| s + t)
                                == f.offset
                        })
                        .expect("boundary point has an active constraint");
                    vec![-f.normal[1].clone(), f.normal[0].clone()]
                }
            };
            let mut out = Vec::new();
            let mut step = ratq(1, 2);
            for _ in 0..n_probes {
                let candidates = [
                    offset_point(p, &probe_dir, &step),
                    offset_point(p, &probe_dir, &(-&step)),
                ];
                let q = candidates.into_iter().find(|q| body.contains(q));
                match q {
                    Some(q) => out.push(q),
                    None => {
                        return Err(CoreError::Unsupported(
                            "could not generate boundary probes".into(),
                        ))
                    }
                }
                step = &step / rat(2);
            }
            Ok(out)
        }
    }
}

fn direction(from: &[Rat], to: &[Rat]) -> Vec<Rat> {
    from.iter().zip(to).map(|(a, b)| b - a).collect()
}

fn offset_point(p: &[Rat], d: &[Rat], s: &Rat) -> Point {
    p.iter().zip(d).map(|(a, b)| a + b * s).collect()
}

/// Certifies discontinuity (or continuity) of the homothety function at a
/// boundary point by probing along the boundary.
pub fn discontinuity_witness(
    body: &Body,
    p: &[Rat],
    n_probes: usize,
) -> Result<WitnessReport, CoreError> {
    if !body.on_boundary(p) {
        return Err(CoreError::NotOnBoundary);
    }
    let f = HomothetyFunction::new(body.clone(), p.to_vec())?;
    let cone = is_locally_cone(body, p)?;
    let center_value = f.eval(p)?;
    debug_assert!(center_value.is_exactly(&Rat::one()));
    let pts = boundary_probes(body, p, n_probes)?;
    let mut probes = Vec::with_capacity(pts.len());
    for q in pts {
        let value = f.eval(&q)?;
        probes.push(ProbeRecord {
            dist2: dist2(&q, p),
            point: q,
            value,
        });
    }
    // distances must shrink toward p
    for w in probes.windows(2) {
        if w[1].dist2 >= w[0].dist2 {
            return Err(CoreError::Unsupported("probe distances fail to decrease".into()));
        }
    }
    let all_zero = probes.iter().all(|r| r.value.is_exactly(&Rat::zero()));
    let verdict = if !cone && all_zero {
        Verdict::Discontinuous
    } else {
        // continuity evidence: values approach 1 monotonically
        let mut prev = Rat::zero();
        for r in &probes {
            let lo = r.value.lo();
            if lo < &prev {
                return Err(CoreError::Unsupported(
                    "probe values neither vanish nor converge to 1".into(),
                ));
            }
            prev = lo.clone();
        }
        Verdict::ContinuityCertificate
    };
    Ok(WitnessReport {
        locally_cone: cone,
        center_value,
        probes,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{convex_hull, Polytope, QuadraticCapBody};

    fn pt(x: i64, y: i64) -> Point {
        vec![rat(x), rat(y)]
    }

    #[test]
    fn square_vertex_is_continuous() {
        let square = convex_hull(&[pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)], 2);
        let rep = discontinuity_witness(&Body::Poly(square), &pt(0, 0), 8).unwrap();
        assert!(rep.locally_cone);
        assert_eq!(rep.verdict, Verdict::ContinuityCertificate);
        assert!(rep.center_value.is_exactly(&rat(1)));
        // values 1 - 2^-i approach 1
        let last = rep.probes.last().unwrap();
        assert!(last.value.lo() > &ratq(9, 10));
    }

    #[test]
    fn segment_endpoint_is_continuous() {
        let seg = Polytope::segment(rat(0), rat(1));
        let rep = discontinuity_witness(&Body::Poly(seg), &[rat(1)], 6).unwrap();
        assert_eq!(rep.verdict, Verdict::ContinuityCertificate);
    }

    #[test]
    fn cap_arc_point_is_discontinuous() {
        let cap = QuadraticCapBody::half_disk_cap();
        let p = pt(0, 2);
        let rep = discontinuity_witness(&Body::Cap(cap), &p, 10).unwrap();
        assert!(!rep.locally_cone);
        assert_eq!(rep.verdict, Verdict::Discontinuous);
        assert!(rep.center_value.is_exactly(&rat(1)));
        assert_eq!(rep.probes.len(), 10);
        for r in &rep.probes {
            assert!(r.value.is_exactly(&rat(0)));
        }
    }

    #[test]
    fn interior_point_rejected() {
        let cap = QuadraticCapBody::half_disk_cap();
        let err = discontinuity_witness(&Body::Cap(cap), &ptq_half(), 4);
        assert!(matches!(err, Err(CoreError::NotOnBoundary)));
    }

    fn ptq_half() -> Point {
        vec![ratq(1, 2), rat(1)]
    }

    #[test]
    fn upper_semicontinuity_at_center() {
        // limsup over probes <= 1 = value at p
        let cap = QuadraticCapBody::half_disk_cap();
        let f = HomothetyFunction::new(Body::Cap(cap), pt(0, 2)).unwrap();
        assert!(f.eval(&pt(0, 2)).unwrap().is_exactly(&rat(1)));
        let rep = discontinuity_witness(&f.body, &pt(0, 2), 5).unwrap();
        for r in rep.probes {
            assert!(r.value.hi() <= &rat(1));
        }
    }
}
