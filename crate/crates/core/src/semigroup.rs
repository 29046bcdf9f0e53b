//! Discrete subsemigroups of Z^n (n <= 3): spanned group, cone,
//! regularization, gap sets, and the general Fekete machinery for
//! subadditive functions on semigroups.
//!
//! The canonical code path is the subadditive/convex orientation;
//! superadditive uses negation adapters. Asymptotic answers are
//! (certified one-sided bound, estimate) pairs, never bare limits.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::CoreError;
use crate::exact::{rat, ratq, Rat};

/// Hermite-style integer row reduction: returns a basis (as rows) of the
/// lattice spanned by the input rows.
fn hermite_basis(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let mut work: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for col in 0..cols {
        loop {
            let mut nonzero: Vec<usize> = (0..work.len()).filter(|&i| work[i][col] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let r = work.remove(nonzero[0]);
                basis.push(r);
                break;
            }
            // reduce the larger pivot by the smaller
            nonzero.sort_by_key(|&i| work[i][col].abs());
            let (small, large) = (nonzero[0], nonzero[1]);
            let q = work[large][col] / work[small][col];
            for c in 0..cols {
                work[large][c] -= q * work[small][c];
            }
        }
        // clear the processed column from remaining rows using the basis row
        if let Some(b) = basis.last() {
            if b[col] != 0 {
                for r in work.iter_mut() {
                    if r[col] != 0 && r[col] % b[col] == 0 {
                        let q = r[col] / b[col];
                        for c in 0..cols {
                            r[c] -= q * b[c];
                        }
                    }
                }
            }
        }
    }
    basis
}

/// Solves "x in the integer row span of basis" by back-reduction.
fn in_lattice(basis: &[Vec<i64>], x: &[i64]) -> bool {
    let cols = x.len();
    let mut rem: Vec<i64> = x.to_vec();
    for b in basis {
        let col = (0..cols).position(|c| b[c] != 0).unwrap();
        if rem[col] != 0 {
            if rem[col] % b[col] != 0 {
                return false;
            }
            let q = rem[col] / b[col];
            for c in 0..cols {
                rem[c] -= q * b[c];
            }
        }
    }
    rem.iter().all(|&c| c == 0)
}

/// Finitely generated discrete subsemigroup of Z^n.
#[derive(Debug, Clone)]
pub struct DiscreteSemigroup {
    pub generators: Vec<Vec<i64>>,
    pub dim: usize,
    group_basis: Vec<Vec<i64>>,
}

impl DiscreteSemigroup {
    pub fn new(generators: Vec<Vec<i64>>) -> Result<Self, CoreError> {
        if generators.is_empty() {
            return Err(CoreError::EmptyInput("semigroup needs generators".into()));
        }
        let dim = generators[0].len();
        if dim == 0 || dim > 3 || generators.iter().any(|g| g.len() != dim) {
            return Err(CoreError::Unsupported("generators must live in Z^n, n <= 3".into()));
        }
        let group_basis = hermite_basis(&generators, dim);
        Ok(DiscreteSemigroup { generators, dim, group_basis })
    }

    pub fn from_naturals(gens: &[i64]) -> Result<Self, CoreError> {
        Self::new(gens.iter().map(|&g| vec![g]).collect())
    }

    /// Membership in the spanned group ZS.
    pub fn in_group(&self, x: &[i64]) -> bool {
        in_lattice(&self.group_basis, x)
    }

    /// Membership in the closed cone C(S) spanned by the generators, by
    /// searching for a non-negative rational combination supported on an
    /// independent generator subset (Caratheodory).
    pub fn in_cone(&self, x: &[i64]) -> bool {
        if x.iter().all(|&c| c == 0) {
            return true;
        }
        let n = self.dim;
        let gens = &self.generators;
        // singletons
        for g in gens {
            if let Some(c) = ray_coefficient(g, x) {
                if !c.is_negative() {
                    return true;
                }
            }
        }
        if n == 1 {
            return false;
        }
        // pairs
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if let Some((a, b)) = solve_2(&gens[i], &gens[j], x, n) {
                    if !a.is_negative() && !b.is_negative() {
                        return true;
                    }
                }
            }
        }
        if n == 2 {
            return false;
        }
        // triples
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                for k in j + 1..gens.len() {
                    if let Some((a, b, c)) = solve_3(&gens[i], &gens[j], &gens[k], x) {
                        if !a.is_negative() && !b.is_negative() && !c.is_negative() {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Membership in the regularization S^reg = ZS intersect closure C(S).
    pub fn regularization_membership(&self, x: &[i64]) -> bool {
        self.in_group(x) && self.in_cone(x)
    }

    /// Exact enumeration of S inside the box [0, bound]^n by dynamic
    /// programming; needs componentwise non-negative generators so that the
    /// reachability is monotone.
    pub fn enumerate_in_box(&self, bound: i64) -> Result<BTreeSet<Vec<i64>>, CoreError> {
        if self.generators.iter().any(|g| g.iter().any(|&c| c < 0)) {
            return Err(CoreError::Unsupported(
                "box enumeration needs componentwise non-negative generators".into(),
            ));
        }
        let n = self.dim;
        let inside = |p: &[i64]| p.iter().all(|&c| c <= bound);
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut frontier = vec![vec![0i64; n]];
        seen.insert(frontier[0].clone());
        while let Some(p) = frontier.pop() {
            for g in &self.generators {
                let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| a + b).collect();
                if inside(&q) && seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        Ok(seen)
    }
}

fn ray_coefficient(g: &[i64], x: &[i64]) -> Option<Rat> {
    // x = c g for a single rational c
    let pivot = (0..g.len()).find(|&i| g[i] != 0)?;
    let c = ratq(x[pivot], g[pivot]);
    for i in 0..g.len() {
        if rat(x[i]) != rat(g[i]) * &c {
            return None;
        }
    }
    Some(c)
}

fn solve_2(g1: &[i64], g2: &[i64], x: &[i64], n: usize) -> Option<(Rat, Rat)> {
    // x = a g1 + b g2: solve a 2x2 subsystem, then verify all coordinates
    for i in 0..n {
        for j in i + 1..n {
            let det = g1[i] * g2[j] - g1[j] * g2[i];
            if det == 0 {
                continue;
            }
            let a = ratq(x[i] * g2[j] - x[j] * g2[i], det);
            let b = ratq(g1[i] * x[j] - g1[j] * x[i], det);
            for c in 0..n {
                if rat(x[c]) != rat(g1[c]) * &a + rat(g2[c]) * &b {
                    return None;
                }
            }
            return Some((a, b));
        }
    }
    None
}

fn solve_3(g1: &[i64], g2: &[i64], g3: &[i64], x: &[i64]) -> Option<(Rat, Rat, Rat)> {
    let det = |a: &[i64], b: &[i64], c: &[i64]| -> i64 {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
    };
    let d = det(g1, g2, g3);
    if d == 0 {
        return None;
    }
    let a = ratq(det(x, g2, g3), d);
    let b = ratq(det(g1, x, g3), d);
    let c = ratq(det(g1, g2, x), d);
    Some((a, b, c))
}

#[derive(Debug, Clone)]
pub struct GapReport {
    /// (S^reg \ S) within the box, sorted.
    pub gap: Vec<Vec<i64>>,
    /// True when the gap set sits well inside the box (all coordinates at
    /// most half the bound), so growing the box cannot move it.
    pub stabilized: bool,
}

/// Gap set of the regularization inside [0, bound]^n.
pub fn gordan_gap(s: &DiscreteSemigroup, bound: i64) -> Result<GapReport, CoreError> {
    if bound < 0 {
        return Err(CoreError::EmptyInput("box bound must be non-negative".into()));
    }
    let members = s.enumerate_in_box(bound)?;
    let mut gap = Vec::new();
    let mut point = vec![0i64; s.dim];
    loop {
        if s.regularization_membership(&point) && !members.contains(&point) {
            gap.push(point.clone());
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == s.dim {
                let stabilized = gap
                    .iter()
                    .all(|p| p.iter().all(|&c| 2 * c <= bound));
                gap.sort();
                return Ok(GapReport { gap, stabilized });
            }
            point[i] += 1;
            if point[i] <= bound {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// A named subadditive function on a semigroup. Subadditivity is the
/// caller's assertion; it is spot-checked wherever the function is used.
pub struct SubadditiveFn {
    pub name: String,
    pub eval: Box<dyn Fn(&[i64]) -> Rat + Send + Sync>,
}

impl SubadditiveFn {
    pub fn linear(coeffs: Vec<Rat>) -> Self {
        SubadditiveFn {
            name: "linear".into(),
            eval: Box::new(move |u| {
                u.iter()
                    .zip(&coeffs)
                    .map(|(&x, c)| rat(x) * c)
                    .fold(Rat::zero(), |s, t| s + t)
            }),
        }
    }

    /// Euclidean length rounded up: ceil(sqrt(u . u)).
    pub fn ceil_norm() -> Self {
        SubadditiveFn {
            name: "ceil-norm".into(),
            eval: Box::new(|u| {
                let sq: i64 = u.iter().map(|&x| x * x).sum();
                let s = BigInt::from(sq).sqrt();
                let r = if &s * &s == BigInt::from(sq) { s } else { s + 1 };
                Rat::from_integer(r)
            }),
        }
    }

    /// floor(q * u_1) for a fixed rational q (on N).
    pub fn floor_multiple(q: Rat) -> Self {
        SubadditiveFn {
            name: "floor-multiple".into(),
            eval: Box::new(move |u| {
                Rat::from_integer(crate::exact::rat_floor(&(rat(u[0]) * &q)))
            }),
        }
    }

    /// ceil(q * u_1) for a fixed rational q (on N); subadditive.
    pub fn ceil_multiple(q: Rat) -> Self {
        SubadditiveFn {
            name: "ceil-multiple".into(),
            eval: Box::new(move |u| {
                Rat::from_integer(crate::exact::rat_ceil(&(rat(u[0]) * &q)))
            }),
        }
    }
}

/// Named built-in functions accessible from the command line. `linear`
/// takes its coefficients, `floor-multiple`/`ceil-multiple` take one ratio.
pub fn builtin_function(name: &str, params: &[Rat]) -> Option<SubadditiveFn> {
    match name {
        "linear" => Some(SubadditiveFn::linear(params.to_vec())),
        "ceil-norm" => Some(SubadditiveFn::ceil_norm()),
        "floor-multiple" => params.first().cloned().map(SubadditiveFn::floor_multiple),
        "ceil-multiple" => params.first().cloned().map(SubadditiveFn::ceil_multiple),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct HatfReport {
    /// Tail estimate of eps_k f(u_k).
    pub estimate: Rat,
    /// Observed oscillation over the tail window (min, max); collapses to a
    /// point for homogeneous f on exact schedules.
    pub bracket: (Rat, Rat),
}

/// Evaluates the regularized limit of a subadditive function along a
/// schedule eps_k u_k -> x with eps_k -> 0. The schedule must stay in the
/// relative interior of the cone; subadditivity is spot-checked on pairs.
pub fn hatf_estimate(
    s: &DiscreteSemigroup,
    f: &SubadditiveFn,
    x: &[Rat],
    schedule: &[(Rat, Vec<i64>)],
) -> Result<HatfReport, CoreError> {
    if schedule.len() < 2 {
        return Err(CoreError::EmptyInput("schedule needs at least two steps".into()));
    }
    for (i, (eps, u)) in schedule.iter().enumerate() {
        if !eps.is_positive() {
            return Err(CoreError::Unsupported("schedule weights must be positive".into()));
        }
        if !s.in_cone(u) || !relint_cone_member(s, u) {
            return Err(CoreError::ScheduleOutsideCone(i));
        }
    }
    let _ = x;
    // spot-check subadditivity on consecutive pairs
    for w in schedule.windows(2) {
        let u = &w[0].1;
        let v = &w[1].1;
        let sum: Vec<i64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
        let lhs = (f.eval)(&sum);
        let rhs = (f.eval)(u) + (f.eval)(v);
        if lhs > rhs {
            return Err(CoreError::SubadditivityViolation(format!(
                "f({sum:?}) = {lhs} > f(u)+f(v) = {rhs}"
            )));
        }
    }
    let values: Vec<Rat> = schedule.iter().map(|(e, u)| e * (f.eval)(u)).collect();
    let tail_start = values.len() - (values.len() / 4).max(1);
    let tail = &values[tail_start..];
    let lo = tail.iter().min().unwrap().clone();
    let hi = tail.iter().max().unwrap().clone();
    Ok(HatfReport {
        estimate: values.last().unwrap().clone(),
        bracket: (lo, hi),
    })
}

/// Relative-interior membership: u is in the relative interior of C(S) iff
/// u minus a small positive multiple of the generator sum stays in the cone.
fn relint_cone_member(s: &DiscreteSemigroup, u: &[i64]) -> bool {
    // scale so integer arithmetic applies: N u - (sum of generators) in cone
    // for large N exactly captures the relative interior for rational data
    let total: Vec<i64> = (0..s.dim)
        .map(|c| s.generators.iter().map(|g| g[c]).sum())
        .collect();
    let scale = 1 + u.iter().map(|&c| c.abs()).max().unwrap_or(0)
        + total.iter().map(|&c| c.abs()).max().unwrap_or(0);
    let shifted: Vec<i64> = u
        .iter()
        .zip(&total)
        .map(|(&a, &b)| a * 4 * scale - b)
        .collect();
    s.in_cone(&shifted)
}

/// Uniform schedule eps_k = 1/(kL), u_k = kL x for integral L x.
pub fn standard_schedule(x: &[Rat], steps: usize) -> Vec<(Rat, Vec<i64>)> {
    let lcm = x
        .iter()
        .map(|c| c.denom().clone())
        .fold(BigInt::from(1), |l, d| l.lcm(&d));
    let l = i64::try_from(lcm).unwrap();
    (1..=steps)
        .map(|k| {
            let kl = (k as i64) * l;
            let u: Vec<i64> = x
                .iter()
                .map(|c| i64::try_from((c * rat(kl)).to_integer()).unwrap())
                .collect();
            (ratq(1, kl), u)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Superadditive,
    Subadditive,
}

#[derive(Debug, Clone)]
pub struct FeketeReport {
    /// Certified one-sided bound: a lower bound for superadditive input,
    /// an upper bound for subadditive input.
    pub certified: Rat,
    /// Richardson-style extrapolation of a_k/k.
    pub estimate: Rat,
    /// Set when a_k/k keeps growing (resp. falling) at a non-shrinking
    /// rate: the sequence is not in the linear regime.
    pub nonlinear: bool,
}

/// Fekete bound for a super- or subadditive sequence sampled at 1..=K.
/// The declared orientation is spot-checked on sampled index pairs and a
/// violation is a named error.
pub fn fekete_limit(
    a: &dyn Fn(usize) -> Rat,
    orientation: Orientation,
    max_index: usize,
) -> Result<FeketeReport, CoreError> {
    if max_index < 4 {
        return Err(CoreError::EmptyInput("need at least 4 terms".into()));
    }
    // spot-check on pairs (i, j) with i + j <= K
    let mut i = 1;
    while 2 * i <= max_index {
        let j = i.max((max_index - i) / 2).min(max_index - i);
        let lhs = a(i) + a(j);
        let rhs = a(i + j);
        let bad = match orientation {
            Orientation::Superadditive => lhs > rhs,
            Orientation::Subadditive => lhs < rhs,
        };
        if bad {
            return Err(CoreError::OrientationViolation(format!(
                "a({i}) + a({j}) vs a({})",
                i + j
            )));
        }
        i *= 2;
    }
    let r = |k: usize| a(k) / rat(k as i64);
    let ratios: Vec<Rat> = (1..=max_index).map(r).collect();
    let certified = match orientation {
        Orientation::Superadditive => ratios.iter().max(),
        Orientation::Subadditive => ratios.iter().min(),
    }
    .unwrap()
    .clone();
    let (rk, rk2, rk4) = (
        ratios[max_index - 1].clone(),
        ratios[max_index / 2 - 1].clone(),
        ratios[max_index / 4 - 1].clone(),
    );
    let estimate = rat(2) * &rk - &rk2;
    let d1 = &rk - &rk2;
    let d0 = &rk2 - &rk4;
    let nonlinear = match orientation {
        Orientation::Superadditive => d1.is_positive() && d0.is_positive() && d1 > d0,
        Orientation::Subadditive => d1.is_negative() && d0.is_negative() && d1 < d0,
    };
    Ok(FeketeReport { certified, estimate, nonlinear })
}
