//! Seeded randomized property suites, shared by the command line and the
//! acceptance tests: filtration axioms, multiplicativity containment,
//! midpoint superadditivity of function samples, hull idempotence, and
//! envelope domination with a Caratheodory oracle.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{rat, ratq, Rat};
use crate::filtration::{dims_profile, linear_bound_constant, ValuationSpec};
use crate::function::phi_sample;
use crate::geometry::{concave_envelope, convex_hull, orient2d, Point};
use crate::poly::Poly;
use crate::series::{DivisorClass, GeometrySpec, SeriesFamily};
use crate::valuation::{achievable_vectors, flag_valuation};

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn random_family(rng: &mut ChaCha8Rng) -> (SeriesFamily, Vec<usize>) {
    // (family, levels with integral data to draw from)
    match rng.gen_range(0..4) {
        0 => {
            let d = rng.gen_range(1..=3);
            let fam = SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(d)))
                .unwrap();
            (fam, vec![1, 2, 3])
        }
        1 => {
            let d = rng.gen_range(1..=2);
            let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(d)))
                .unwrap();
            (fam, vec![1, 2, 3])
        }
        2 => {
            let fam = SeriesFamily::new(
                GeometrySpec::blowup_one_point(),
                DivisorClass::with_mults(rat(2), vec![rat(1)]),
            )
            .unwrap();
            (fam, vec![1, 2, 3])
        }
        _ => {
            let fam = SeriesFamily::new(
                GeometrySpec::blowup_one_point(),
                DivisorClass::with_mults(rat(1), vec![ratq(1, 2)]),
            )
            .unwrap();
            (fam, vec![2, 4])
        }
    }
}

fn random_valuation(rng: &mut ChaCha8Rng, fam: &SeriesFamily) -> ValuationSpec {
    if fam.geometry.variety_dim() == 1 {
        let pts: [&[i64]; 3] = [&[0, 1], &[1, 1], &[1, 0]];
        return ValuationSpec::order_at(pts[rng.gen_range(0..pts.len())]);
    }
    match rng.gen_range(0..6) {
        0 => ValuationSpec::order_at(&[0, 0, 1]),
        1 => ValuationSpec::order_at(&[1, 0, 0]),
        2 => ValuationSpec::order_at(&[1, 1, 1]),
        3 => ValuationSpec::order_at(&[2, 1, 1]),
        4 => {
            let forms: [&[i64; 3]; 3] = [&[1, 0, 0], &[0, 0, 1], &[1, 1, 1]];
            let f = forms[rng.gen_range(0..forms.len())];
            ValuationSpec::OrderAlongCurve(Poly::linear_form(&[rat(f[0]), rat(f[1]), rat(f[2])]))
        }
        _ => {
            if fam.geometry.blown_up_points().is_empty() {
                ValuationSpec::order_at(&[0, 1, 1])
            } else {
                ValuationSpec::OrderAlongExceptional(0)
            }
        }
    }
}

/// Filtration axioms: F_0 is everything, dims are non-increasing, the
/// filtration dies, and e_max respects the linear bound.
pub fn suite_filtration_axioms(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let (fam, levels) = random_family(&mut rng);
        let val = random_valuation(&mut rng, &fam);
        let k = levels[rng.gen_range(0..levels.len())];
        let series = fam.series(k).unwrap();
        if series.dim() == 0 {
            continue;
        }
        let dims = dims_profile(&series, &val);
        let fail = |msg: String| SuiteReport {
            name: "filtration-axioms",
            cases: case + 1,
            failure: Some(msg),
        };
        if dims[0] != series.dim() {
            return fail(format!("case {case}: F_0 is not everything"));
        }
        if !dims.windows(2).all(|w| w[0] >= w[1]) {
            return fail(format!("case {case}: dims not monotone: {dims:?}"));
        }
        if *dims.last().unwrap() != 0 {
            return fail(format!("case {case}: filtration does not die"));
        }
        let emax = rat(dims.len() as i64 - 2);
        let bound = linear_bound_constant(&fam, &val) * rat(k as i64);
        if emax > bound {
            return fail(format!("case {case}: e_max {emax} exceeds linear bound {bound}"));
        }
    }
    SuiteReport { name: "filtration-axioms", cases, failure: None }
}

fn random_section(rng: &mut ChaCha8Rng, series: &crate::series::LinearSeries) -> Poly {
    let dim = series.dim();
    loop {
        let coords: Vec<Rat> = (0..dim).map(|_| rat(rng.gen_range(-2..=2))).collect();
        let f = series.section(&coords);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Products: flag vectors add, valuations add, and the product of graded
/// pieces lands in the expected graded piece.
pub fn suite_multiplicativity(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let (fam, levels) = random_family(&mut rng);
        let val = random_valuation(&mut rng, &fam);
        let k = levels[rng.gen_range(0..levels.len())];
        let m = levels[rng.gen_range(0..levels.len())];
        let (vk, vm) = (fam.series(k).unwrap(), fam.series(m).unwrap());
        if vk.dim() == 0 || vm.dim() == 0 {
            continue;
        }
        let vkm = fam.series(k + m).unwrap();
        let s = random_section(&mut rng, &vk);
        let t = random_section(&mut rng, &vm);
        let prod = s.mul(&t);
        let fail = |msg: String| SuiteReport {
            name: "multiplicativity",
            cases: case + 1,
            failure: Some(msg),
        };
        if !vkm.contains_form(&prod) {
            return fail(format!("case {case}: product leaves the graded piece"));
        }
        let fs = flag_valuation(&s, &vk).unwrap();
        let ft = flag_valuation(&t, &vm).unwrap();
        let fp = flag_valuation(&prod, &vkm).unwrap();
        for i in 0..fs.entries.len() {
            if fp.entries[i] != fs.entries[i] + ft.entries[i] {
                return fail(format!("case {case}: flag vectors do not add"));
            }
        }
        let a = val.value(&vk, &s).unwrap();
        let b = val.value(&vm, &t).unwrap();
        let c = val.value(&vkm, &prod).unwrap();
        if c != a + b {
            return fail(format!("case {case}: valuation not additive ({a} + {b} vs {c})"));
        }
    }
    SuiteReport { name: "multiplicativity", cases, failure: None }
}

/// Midpoint superadditivity of the raw samples: the sample at the midpoint
/// of two level-k vectors, taken at level 2k, dominates the average.
pub fn suite_midpoint_superadditivity(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let (fam, levels) = random_family(&mut rng);
        let val = random_valuation(&mut rng, &fam);
        let k = levels[0];
        let series = fam.series(k).unwrap();
        if series.dim() == 0 {
            continue;
        }
        let vecs = achievable_vectors(&series, &series.basis_vectors());
        let u = &vecs[rng.gen_range(0..vecs.len())];
        let v = &vecs[rng.gen_range(0..vecs.len())];
        let su = phi_sample(&fam, &val, &u.normalized(), k).unwrap().unwrap();
        let sv = phi_sample(&fam, &val, &v.normalized(), k).unwrap().unwrap();
        let mid: Vec<Rat> = u
            .normalized()
            .iter()
            .zip(&v.normalized())
            .map(|(x, y)| (x + y) / rat(2))
            .collect();
        let sm = phi_sample(&fam, &val, &mid, 2 * k).unwrap();
        let Some(sm) = sm else {
            return SuiteReport {
                name: "midpoint-superadditivity",
                cases: case + 1,
                failure: Some(format!("case {case}: midpoint not achievable at doubled level")),
            };
        };
        if sm.value < (&su.value + &sv.value) / rat(2) {
            return SuiteReport {
                name: "midpoint-superadditivity",
                cases: case + 1,
                failure: Some(format!(
                    "case {case}: phi({mid:?}) = {} below the average of {} and {}",
                    sm.value, su.value, sv.value
                )),
            };
        }
    }
    SuiteReport { name: "midpoint-superadditivity", cases, failure: None }
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    (0..dim)
        .map(|_| ratq(rng.gen_range(-8..=8), rng.gen_range(1..=4)))
        .collect()
}

/// Hull idempotence and H/V cross-checks in dimensions 1-3.
pub fn suite_hull_idempotence(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let dim = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=9);
        let pts: Vec<Point> = (0..n).map(|_| random_point(&mut rng, dim)).collect();
        let h = convex_hull(&pts, dim);
        let h2 = convex_hull(&h.vertices, dim);
        let fail = |msg: String| SuiteReport {
            name: "hull-idempotence",
            cases: case + 1,
            failure: Some(msg),
        };
        if h.vertex_set() != h2.vertex_set() {
            return fail(format!("case {case}: hull not idempotent on {pts:?}"));
        }
        if h.affine_dim == h.ambient {
            // V- and H-representations describe the same set
            for p in &pts {
                if !h.contains(p) {
                    return fail(format!("case {case}: generating point {p:?} outside H-rep"));
                }
            }
            for f in &h.facets {
                let touched = h.vertices.iter().any(|v| {
                    f.normal
                        .iter()
                        .zip(v)
                        .map(|(a, b)| a * b)
                        .fold(Rat::zero(), |s, t| s + t)
                        == f.offset
                });
                if !touched {
                    return fail(format!("case {case}: facet touches no vertex"));
                }
            }
        }
    }
    SuiteReport { name: "hull-idempotence", cases, failure: None }
}

/// Envelope dominates its samples and agrees with the brute-force
/// Caratheodory oracle (best convex combination of at most three lifted
/// points) at samples and random queries.
pub fn suite_envelope_dominates(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        // full-dimensional planar domain
        let domain = loop {
            let n = rng.gen_range(3..=5);
            let pts: Vec<Point> = (0..n).map(|_| random_point(&mut rng, 2)).collect();
            let h = convex_hull(&pts, 2);
            if h.affine_dim == 2 {
                break h;
            }
        };
        let interior = |rng: &mut ChaCha8Rng| -> Point {
            // random convex combination of the vertices
            let w: Vec<i64> = (0..domain.vertices.len()).map(|_| rng.gen_range(0..=3)).collect();
            let total: i64 = w.iter().sum::<i64>().max(1);
            let mut p = vec![Rat::zero(), Rat::zero()];
            for (wi, v) in w.iter().zip(&domain.vertices) {
                for c in 0..2 {
                    p[c] += ratq(*wi, total) * &v[c];
                }
            }
            p
        };
        let n_samples = rng.gen_range(1..=6);
        let samples: Vec<(Point, Rat)> = (0..n_samples)
            .map(|_| (interior(&mut rng), ratq(rng.gen_range(0..=6), rng.gen_range(1..=2))))
            .collect();
        let env = concave_envelope(&samples, &domain).unwrap();
        let fail = |msg: String| SuiteReport {
            name: "envelope-dominates",
            cases: case + 1,
            failure: Some(msg),
        };
        // lifted point set the oracle works over
        let mut lifted = samples.clone();
        for v in &domain.vertices {
            lifted.push((v.clone(), Rat::zero()));
        }
        let oracle = |x: &Point| -> Rat {
            let mut best = Rat::zero();
            for (p, v) in &lifted {
                if p == x && v > &best {
                    best = v.clone();
                }
            }
            let n = lifted.len();
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let (a, b, c) = (&lifted[i], &lifted[j], &lifted[k]);
                        let det = orient2d(&a.0, &b.0, &c.0);
                        if det.is_zero() {
                            continue;
                        }
                        let wa = orient2d(x, &b.0, &c.0) / &det;
                        let wb = orient2d(&a.0, x, &c.0) / &det;
                        let wc = Rat::one() - &wa - &wb;
                        if wa.is_negative() || wb.is_negative() || wc.is_negative() {
                            continue;
                        }
                        let v = wa * &a.1 + wb * &b.1 + wc * &c.1;
                        if v > best {
                            best = v;
                        }
                    }
                }
            }
            best
        };
        for (p, v) in &samples {
            let got = env.eval(p).unwrap();
            if &got < v {
                return fail(format!("case {case}: envelope {got} below sample {v} at {p:?}"));
            }
            if got != oracle(p) {
                return fail(format!("case {case}: envelope differs from oracle at sample {p:?}"));
            }
        }
        for _ in 0..3 {
            let q = interior(&mut rng);
            let got = env.eval(&q).unwrap();
            let want = oracle(&q);
            if got != want {
                return fail(format!("case {case}: envelope {got} vs oracle {want} at {q:?}"));
            }
        }
    }
    SuiteReport { name: "envelope-dominates", cases, failure: None }
}

/// Runs all five suites with the given seed and case budget.
pub fn run_all(seed: u64, cases: usize) -> Vec<SuiteReport> {
    vec![
        suite_filtration_axioms(seed, cases),
        suite_multiplicativity(seed.wrapping_add(1), cases),
        suite_midpoint_superadditivity(seed.wrapping_add(2), cases),
        suite_hull_idempotence(seed.wrapping_add(3), cases),
        suite_envelope_dominates(seed.wrapping_add(4), cases),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_runs_pass() {
        for rep in run_all(0xA11CE, 40) {
            assert!(rep.passed(), "{}: {:?}", rep.name, rep.failure);
        }
    }
}
