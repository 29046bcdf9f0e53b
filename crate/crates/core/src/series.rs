//! Graded linear series on the model varieties.
//!
//! The graded piece at level k of a divisor class of degree d with imposed
//! multiplicities lambda_i is the space of homogeneous forms of degree k*d
//! vanishing to order at least k*lambda_i at each blown-up point, realized as
//! the kernel of the jet-evaluation matrix. Coordinates are fixed once and
//! for all: on the plane the flag is the line {X = 0} with flag point
//! [0:0:1]; default blown-up points are [1:0:0] and either [1:1:1] (generic)
//! or [1:0:1] (collinear with the flag point and [1:0:0]).

use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::exact::{rat, Echelon, Rat};
use crate::poly::{MonomialBasis, Poly};

pub type ProjPoint = Vec<Rat>;

/// Projective equality: proportional nonzero coordinate vectors.
pub fn proj_eq(a: &[Rat], b: &[Rat]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    for i in 0..n {
        for j in i + 1..n {
            if !(&a[i] * &b[j] - &a[j] * &b[i]).is_zero() {
                return false;
            }
        }
    }
    true
}

fn line_value(line: &[Rat], p: &[Rat]) -> Rat {
    line.iter().zip(p).map(|(a, b)| a * b).fold(Rat::zero(), |s, t| s + t)
}

/// Model variety together with its admissible flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometrySpec {
    /// The projective line with a flag point.
    P1 { flag_point: ProjPoint },
    /// The plane with flag (line, point on the line).
    P2 { flag_line: Vec<Rat>, flag_point: ProjPoint },
    /// Blow-up of the plane at one or two points away from the flag line.
    BlowupP2 {
        flag_line: Vec<Rat>,
        flag_point: ProjPoint,
        blown_up: Vec<ProjPoint>,
    },
}

impl GeometrySpec {
    pub fn standard_p1() -> Self {
        GeometrySpec::P1 {
            flag_point: vec![rat(0), rat(1)],
        }
    }

    pub fn standard_p2() -> Self {
        GeometrySpec::P2 {
            flag_line: vec![rat(1), rat(0), rat(0)],
            flag_point: vec![rat(0), rat(0), rat(1)],
        }
    }

    pub fn standard_blowup(blown_up: Vec<ProjPoint>) -> Self {
        GeometrySpec::BlowupP2 {
            flag_line: vec![rat(1), rat(0), rat(0)],
            flag_point: vec![rat(0), rat(0), rat(1)],
            blown_up,
        }
    }

    /// One blown-up point [1:0:0].
    pub fn blowup_one_point() -> Self {
        Self::standard_blowup(vec![vec![rat(1), rat(0), rat(0)]])
    }

    /// Two blown-up points, the second in general position ([1:1:1]).
    pub fn blowup_two_generic() -> Self {
        Self::standard_blowup(vec![
            vec![rat(1), rat(0), rat(0)],
            vec![rat(1), rat(1), rat(1)],
        ])
    }

    /// Two blown-up points collinear with the flag point ([1:0:1] lies on
    /// the line {Y = 0} through [0:0:1] and [1:0:0]).
    pub fn blowup_two_collinear() -> Self {
        Self::standard_blowup(vec![
            vec![rat(1), rat(0), rat(0)],
            vec![rat(1), rat(0), rat(1)],
        ])
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let nonzero = |p: &[Rat]| p.iter().any(|c| !c.is_zero());
        match self {
            GeometrySpec::P1 { flag_point } => {
                if flag_point.len() != 2 || !nonzero(flag_point) {
                    return Err(CoreError::InvalidGeometry("flag point must be a nonzero pair".into()));
                }
            }
            GeometrySpec::P2 { flag_line, flag_point } => {
                if flag_line.len() != 3 || !nonzero(flag_line) || flag_point.len() != 3 || !nonzero(flag_point) {
                    return Err(CoreError::InvalidGeometry("flag data must be nonzero triples".into()));
                }
                if !line_value(flag_line, flag_point).is_zero() {
                    return Err(CoreError::InvalidGeometry("flag point must lie on the flag line".into()));
                }
            }
            GeometrySpec::BlowupP2 { flag_line, flag_point, blown_up } => {
                GeometrySpec::P2 {
                    flag_line: flag_line.clone(),
                    flag_point: flag_point.clone(),
                }
                .validate()?;
                if blown_up.is_empty() || blown_up.len() > 2 {
                    return Err(CoreError::InvalidGeometry("one or two blown-up points required".into()));
                }
                for (i, p) in blown_up.iter().enumerate() {
                    if p.len() != 3 || !nonzero(p) {
                        return Err(CoreError::InvalidGeometry("blown-up point must be a nonzero triple".into()));
                    }
                    if line_value(flag_line, p).is_zero() {
                        return Err(CoreError::InvalidGeometry(
                            "blown-up points must avoid the flag line".into(),
                        ));
                    }
                    if proj_eq(p, flag_point) {
                        return Err(CoreError::InvalidGeometry(
                            "blown-up points must differ from the flag point".into(),
                        ));
                    }
                    for q in &blown_up[..i] {
                        if proj_eq(p, q) {
                            return Err(CoreError::InvalidGeometry(
                                "blown-up points must be pairwise distinct".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        match self {
            GeometrySpec::P1 { .. } => 2,
            _ => 3,
        }
    }

    /// Dimension of the variety = length of flag valuation vectors.
    pub fn variety_dim(&self) -> usize {
        match self {
            GeometrySpec::P1 { .. } => 1,
            _ => 2,
        }
    }

    pub fn flag_line(&self) -> Option<&[Rat]> {
        match self {
            GeometrySpec::P1 { .. } => None,
            GeometrySpec::P2 { flag_line, .. } | GeometrySpec::BlowupP2 { flag_line, .. } => {
                Some(flag_line)
            }
        }
    }

    pub fn flag_point(&self) -> &[Rat] {
        match self {
            GeometrySpec::P1 { flag_point }
            | GeometrySpec::P2 { flag_point, .. }
            | GeometrySpec::BlowupP2 { flag_point, .. } => flag_point,
        }
    }

    pub fn blown_up_points(&self) -> &[ProjPoint] {
        match self {
            GeometrySpec::BlowupP2 { blown_up, .. } => blown_up,
            _ => &[],
        }
    }

    fn is_standard_flag(&self) -> bool {
        match self {
            GeometrySpec::P1 { flag_point } => {
                flag_point[0].is_zero() && !flag_point[1].is_zero()
            }
            GeometrySpec::P2 { flag_line, flag_point, .. }
            | GeometrySpec::BlowupP2 { flag_line, flag_point, .. } => {
                proj_eq(flag_line, &[rat(1), rat(0), rat(0)])
                    && proj_eq(flag_point, &[rat(0), rat(0), rat(1)])
            }
        }
    }

    /// Substitution forms mapping a section into flag-adapted coordinates
    /// (flag line becomes {U = 0}, flag point becomes the last coordinate
    /// point), or None when the flag is already standard.
    pub fn flag_substitution(&self) -> Option<Vec<Poly>> {
        if self.is_standard_flag() {
            return None;
        }
        let a = match self {
            GeometrySpec::P1 { flag_point } => {
                // U vanishes at p; W independent
                let u = vec![flag_point[1].clone(), -flag_point[0].clone()];
                let w = if !flag_point[0].is_zero() {
                    vec![rat(1), rat(0)]
                } else {
                    vec![rat(0), rat(1)]
                };
                vec![u, w]
            }
            GeometrySpec::P2 { flag_line, flag_point }
            | GeometrySpec::BlowupP2 { flag_line, flag_point, .. } => {
                // rows: U = flag line, V = another form vanishing at the flag
                // point, W completing an invertible matrix
                let p = flag_point;
                let vanishing = crate::exact::Matrix::from_rows(vec![p.clone()]).kernel_basis();
                let v = vanishing
                    .into_iter()
                    .find(|v| {
                        // independent from the flag line row
                        (0..3).any(|i| {
                            (0..3).any(|j| {
                                i < j && !(&flag_line[i] * &v[j] - &flag_line[j] * &v[i]).is_zero()
                            })
                        })
                    })
                    .expect("flag point admits two independent vanishing forms");
                let mut rows = vec![flag_line.clone(), v];
                let w = (0..3)
                    .map(|i| {
                        let mut e = vec![rat(0), rat(0), rat(0)];
                        e[i] = rat(1);
                        e
                    })
                    .find(|e| !det3(&rows[0], &rows[1], e).is_zero())
                    .expect("unit vector completes the basis");
                rows.push(w);
                rows
            }
        };
        // sections transform through the inverse matrix
        let inv = match a.len() {
            2 => invert_2x2(&a),
            _ => invert_3x3(&a),
        };
        Some(inv.into_iter().map(|row| Poly::linear_form(&row)).collect())
    }
}

fn det3(a: &[Rat], b: &[Rat], c: &[Rat]) -> Rat {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn invert_2x2(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    assert!(!det.is_zero());
    vec![
        vec![&m[1][1] / &det, -&m[0][1] / &det],
        vec![-&m[1][0] / &det, &m[0][0] / &det],
    ]
}

fn invert_3x3(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let det = det3(&m[0], &m[1], &m[2]);
    assert!(!det.is_zero());
    let cof = |r: usize, c: usize| -> Rat {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = &m[rs[0]][cs[0]] * &m[rs[1]][cs[1]] - &m[rs[0]][cs[1]] * &m[rs[1]][cs[0]];
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    // adjugate transpose
    (0..3)
        .map(|i| (0..3).map(|j| cof(j, i) / &det).collect())
        .collect()
}

/// Degree plus one imposed multiplicity per blown-up point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    pub degree: Rat,
    pub mults: Vec<Rat>,
}

impl DivisorClass {
    pub fn of_degree(d: Rat) -> Self {
        DivisorClass { degree: d, mults: Vec::new() }
    }

    pub fn with_mults(d: Rat, mults: Vec<Rat>) -> Self {
        DivisorClass { degree: d, mults }
    }

    pub fn validate_for(&self, g: &GeometrySpec) -> Result<(), CoreError> {
        if self.degree.is_negative() {
            return Err(CoreError::InvalidGeometry("degree must be non-negative".into()));
        }
        if self.mults.iter().any(|m| m.is_negative()) {
            return Err(CoreError::InvalidGeometry("multiplicities must be non-negative".into()));
        }
        if self.mults.len() != g.blown_up_points().len() {
            return Err(CoreError::InvalidGeometry(
                "one multiplicity per blown-up point required".into(),
            ));
        }
        Ok(())
    }

    /// Bigness on the one-point blow-up: degree > 0 and lambda < degree.
    pub fn is_big_on(&self, g: &GeometrySpec) -> bool {
        match g {
            GeometrySpec::BlowupP2 { blown_up, .. } if blown_up.len() == 1 => {
                self.degree.is_positive() && self.mults[0] < self.degree
            }
            _ => self.degree.is_positive(),
        }
    }
}

/// One graded piece V_k: an exact basis of the space of degree-(k d) forms
/// with the imposed multiplicities.
#[derive(Debug, Clone)]
pub struct LinearSeries {
    pub geometry: GeometrySpec,
    pub divisor: DivisorClass,
    pub level: usize,
    pub degree: usize,
    basis: Vec<Vec<Rat>>,
    full_space: bool,
}

impl LinearSeries {
    pub fn monomial_basis(&self) -> MonomialBasis {
        MonomialBasis::new(self.geometry.nvars(), self.degree)
    }

    pub fn dim(&self) -> usize {
        if self.full_space {
            self.monomial_basis().dim()
        } else {
            self.basis.len()
        }
    }

    pub fn is_full_space(&self) -> bool {
        self.full_space
    }

    /// Basis as coefficient vectors over the monomial basis.
    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        if self.full_space {
            let n = self.monomial_basis().dim();
            (0..n)
                .map(|i| {
                    let mut v = vec![Rat::zero(); n];
                    v[i] = Rat::one();
                    v
                })
                .collect()
        } else {
            self.basis.clone()
        }
    }

    pub fn section(&self, coords: &[Rat]) -> Poly {
        let mb = self.monomial_basis();
        let mut coeffs = vec![Rat::zero(); mb.dim()];
        if self.full_space {
            assert_eq!(coords.len(), mb.dim());
            coeffs.clone_from_slice(coords);
        } else {
            assert_eq!(coords.len(), self.basis.len());
            for (c, b) in coords.iter().zip(&self.basis) {
                if c.is_zero() {
                    continue;
                }
                for (i, bc) in b.iter().enumerate() {
                    if !bc.is_zero() {
                        coeffs[i] += c * bc;
                    }
                }
            }
        }
        Poly::from_coeffs(self.geometry.nvars(), self.degree, coeffs)
    }

    /// Does the form satisfy the defining multiplicity conditions?
    pub fn contains_form(&self, f: &Poly) -> bool {
        if f.nvars() != self.geometry.nvars() || f.degree() != self.degree {
            return false;
        }
        self.geometry
            .blown_up_points()
            .iter()
            .zip(&self.divisor.mults)
            .all(|(p, lam)| {
                let need = (lam * rat(self.level as i64)).to_integer();
                let need = usize::try_from(need).unwrap();
                need == 0
                    || f.is_zero()
                    || f.mult_at_point(p).unwrap() >= need
            })
    }

    /// Required multiplicity k * lambda_i at blown-up point i.
    pub fn required_mult(&self, i: usize) -> usize {
        let m = &self.divisor.mults[i] * rat(self.level as i64);
        usize::try_from(m.to_integer()).unwrap()
    }
}

/// A divisor class on a fixed geometry; produces the graded pieces.
#[derive(Debug, Clone)]
pub struct SeriesFamily {
    pub geometry: GeometrySpec,
    pub divisor: DivisorClass,
}

impl SeriesFamily {
    pub fn new(geometry: GeometrySpec, divisor: DivisorClass) -> Result<Self, CoreError> {
        geometry.validate()?;
        divisor.validate_for(&geometry)?;
        Ok(SeriesFamily { geometry, divisor })
    }

    pub fn variety_dim(&self) -> usize {
        self.geometry.variety_dim()
    }

    pub fn level_is_integral(&self, k: usize) -> bool {
        let kk = rat(k as i64);
        (&self.divisor.degree * &kk).is_integer()
            && self.divisor.mults.iter().all(|m| (m * &kk).is_integer())
    }

    pub fn levels_up_to(&self, max_level: usize) -> Vec<usize> {
        (1..=max_level).filter(|&k| self.level_is_integral(k)).collect()
    }

    pub fn series(&self, k: usize) -> Result<LinearSeries, CoreError> {
        build_series(&self.geometry, &self.divisor, k)
    }

    /// The Veronese subfamily: level k of the result is level m*k here.
    pub fn veronese(&self, m: usize) -> SeriesFamily {
        let mm = rat(m as i64);
        SeriesFamily {
            geometry: self.geometry.clone(),
            divisor: DivisorClass {
                degree: &self.divisor.degree * &mm,
                mults: self.divisor.mults.iter().map(|l| l * &mm).collect(),
            },
        }
    }
}

/// Sparse condition rows over the degree-m monomial basis imposing
/// vanishing to order >= `mult` at the projective point: one row per mixed
/// derivative of total order < mult in the local (non-chart) variables.
pub fn point_condition_rows(
    mb: MonomialBasis,
    point: &[Rat],
    mult: usize,
) -> Vec<Vec<(usize, Rat)>> {
    let mut rows = Vec::new();
    for t in 0..mult {
        rows.extend(point_condition_layer(mb, point, t));
    }
    rows
}

/// The rows of derivative order exactly t (incremental layer).
pub fn point_condition_layer(
    mb: MonomialBasis,
    point: &[Rat],
    t: usize,
) -> Vec<Vec<(usize, Rat)>> {
    let nvars = mb.nvars;
    let chart = point
        .iter()
        .position(|c| !c.is_zero())
        .expect("projective point must be nonzero");
    let scale = point[chart].clone();
    let p: Vec<Rat> = point.iter().map(|c| c / &scale).collect();
    let others: Vec<usize> = (0..nvars).filter(|&v| v != chart).collect();
    let mut rows = Vec::new();
    for k in 0..=t {
        let mut orders = vec![0usize; nvars];
        orders[others[0]] = k;
        if others.len() == 2 {
            orders[others[1]] = t - k;
        } else if t - k != 0 {
            continue;
        }
        let mut row: Vec<(usize, Rat)> = Vec::new();
        for (idx, exps) in mb.iter() {
            let mut entry = Rat::one();
            let mut zero = false;
            for v in 0..nvars {
                let (e, o) = (exps[v], orders[v]);
                if o > e {
                    zero = true;
                    break;
                }
                for j in 0..o {
                    entry *= rat((e - j) as i64);
                }
                if e - o > 0 {
                    if p[v].is_zero() {
                        zero = true;
                        break;
                    }
                    for _ in 0..(e - o) {
                        entry *= &p[v];
                    }
                }
            }
            if !zero {
                row.push((idx, entry));
            }
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    rows
}

/// Condition rows for divisibility g^t | F, as the coordinates of the
/// remainder map F -> F mod g^t (a linear map; zero remainder is exactly
/// divisibility since {g^t} generates a principal ideal).
pub fn curve_condition_rows(mb: MonomialBasis, g: &Poly, t: usize) -> Vec<Vec<(usize, Rat)>> {
    if t == 0 {
        return Vec::new();
    }
    let gt = g.pow(t);
    if gt.degree() > mb.degree {
        // divisibility impossible at this degree: the only solution is 0
        return (0..mb.dim()).map(|i| vec![(i, Rat::one())]).collect();
    }
    // remainder of each monomial, transposed into rows per remainder monomial
    let mut cols: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(mb.dim());
    for (i, exps) in mb.iter() {
        let mono = Poly::monomial(mb.nvars, &exps);
        let (_, r) = mono.div_rem(&gt);
        cols.push(
            r.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j, c.clone()))
                .collect(),
        );
        let _ = i;
    }
    let mut rows: std::collections::BTreeMap<usize, Vec<(usize, Rat)>> =
        std::collections::BTreeMap::new();
    for (col, entries) in cols.into_iter().enumerate() {
        for (j, c) in entries {
            rows.entry(j).or_default().push((col, c));
        }
    }
    rows.into_values().collect()
}

/// Builds the graded piece V_k. Requires k*d and every k*lambda_i integral.
pub fn build_series(
    geometry: &GeometrySpec,
    divisor: &DivisorClass,
    k: usize,
) -> Result<LinearSeries, CoreError> {
    geometry.validate()?;
    divisor.validate_for(geometry)?;
    if k == 0 {
        return Err(CoreError::NonIntegralLevel("level must be positive".into()));
    }
    let kk = rat(k as i64);
    let kd = &divisor.degree * &kk;
    if !kd.is_integer() {
        return Err(CoreError::NonIntegralLevel(format!(
            "k*d = {} is not an integer at level {k}",
            kd
        )));
    }
    let mut mults = Vec::new();
    for lam in &divisor.mults {
        let kl = lam * &kk;
        if !kl.is_integer() {
            return Err(CoreError::NonIntegralLevel(format!(
                "k*lambda = {} is not an integer at level {k}",
                kl
            )));
        }
        mults.push(usize::try_from(kl.to_integer()).unwrap());
    }
    let degree = usize::try_from(kd.to_integer()).unwrap();
    let mb = MonomialBasis::new(geometry.nvars(), degree);
    if mults.iter().all(|&m| m == 0) {
        return Ok(LinearSeries {
            geometry: geometry.clone(),
            divisor: divisor.clone(),
            level: k,
            degree,
            basis: Vec::new(),
            full_space: true,
        });
    }
    let mut ech = Echelon::new(mb.dim());
    for (p, &m) in geometry.blown_up_points().iter().zip(&mults) {
        for row in point_condition_rows(mb, p, m) {
            ech.insert_sparse(row);
        }
    }
    Ok(LinearSeries {
        geometry: geometry.clone(),
        divisor: divisor.clone(),
        level: k,
        degree,
        basis: ech.kernel_basis(),
        full_space: false,
    })
}

/// Basis of { s in V : nu(s) >= t } as coefficient vectors over the
/// monomial basis. Beyond the linear bound this is empty.
pub fn subspace_with_vanishing(
    series: &LinearSeries,
    val: &crate::filtration::ValuationSpec,
    t: usize,
) -> Vec<Vec<Rat>> {
    if t == 0 {
        return series.basis_vectors();
    }
    let mb = series.monomial_basis();
    let rows = val.condition_rows(series, t);
    if series.is_full_space() {
        let mut ech = Echelon::new(mb.dim());
        for r in rows {
            ech.insert_sparse(r);
        }
        return ech.kernel_basis();
    }
    let basis = series.basis_vectors();
    let mut ech = Echelon::new(basis.len());
    for row in &rows {
        let applied: Vec<(usize, Rat)> = basis
            .iter()
            .enumerate()
            .filter_map(|(j, b)| {
                let v = crate::exact::sparse_dot(row, b);
                (!v.is_zero()).then_some((j, v))
            })
            .collect();
        ech.insert_sparse(applied);
    }
    ech.kernel_basis()
        .into_iter()
        .map(|coords| {
            let mut out = vec![Rat::zero(); mb.dim()];
            for (c, b) in coords.iter().zip(&basis) {
                if c.is_zero() {
                    continue;
                }
                for (i, bc) in b.iter().enumerate() {
                    if !bc.is_zero() {
                        out[i] += c * bc;
                    }
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratq;
    use crate::filtration::ValuationSpec;

    #[test]
    fn full_space_dims_on_p2() {
        // dim V_k for O(d) on P^2 equals C(kd+2, 2)
        let fam = SeriesFamily::new(
            GeometrySpec::standard_p2(),
            DivisorClass::of_degree(rat(2)),
        )
        .unwrap();
        for k in 1..=4 {
            let v = fam.series(k).unwrap();
            let kd = 2 * k;
            assert_eq!(v.dim(), (kd + 1) * (kd + 2) / 2);
        }
    }

    #[test]
    fn one_point_mult_one_on_conics() {
        // (P^2, O(2), k=1) with one point of multiplicity 1: one linear
        // condition on 6 coefficients
        let g = GeometrySpec::blowup_one_point();
        let d = DivisorClass::with_mults(rat(2), vec![rat(1)]);
        let v = build_series(&g, &d, 1).unwrap();
        assert_eq!(v.dim(), 5);
    }

    #[test]
    fn half_multiplicity_needs_even_level() {
        // d=1, lambda=1/2: level 2 gives degree-2 forms with mult >= 1,
        // dimension 5 (hand oracle: one point condition on 6 coefficients)
        let g = GeometrySpec::blowup_one_point();
        let d = DivisorClass::with_mults(rat(1), vec![ratq(1, 2)]);
        assert!(build_series(&g, &d, 1).is_err());
        let v = build_series(&g, &d, 2).unwrap();
        assert_eq!(v.dim(), 5);
        // every basis element really vanishes at [1:0:0]
        for b in v.basis_vectors() {
            let f = Poly::from_coeffs(3, 2, b);
            assert!(f.mult_at_point(&[rat(1), rat(0), rat(0)]).unwrap() >= 1);
        }
    }

    #[test]
    fn jet_matrix_rank_at_generic_point() {
        // mult >= 2 at [1:1:1] imposes 3 independent conditions on conics
        let g = GeometrySpec::standard_blowup(vec![vec![rat(1), rat(1), rat(1)]]);
        let d = DivisorClass::with_mults(rat(2), vec![rat(2)]);
        let v = build_series(&g, &d, 1).unwrap();
        assert_eq!(v.dim(), 3); // 6 - C(3,2)
        for b in v.basis_vectors() {
            let f = Poly::from_coeffs(3, 2, b);
            assert!(f.mult_at_point(&[rat(1), rat(1), rat(1)]).unwrap() >= 2);
        }
    }

    #[test]
    fn multiplicativity_of_products() {
        let g = GeometrySpec::blowup_one_point();
        let d = DivisorClass::with_mults(rat(1), vec![ratq(1, 2)]);
        let fam = SeriesFamily::new(g, d).unwrap();
        let v2 = fam.series(2).unwrap();
        let v4 = fam.series(4).unwrap();
        let s = v2.section(&vec![rat(1); v2.dim()]);
        let t = v2.section(&{
            let mut c = vec![rat(0); v2.dim()];
            c[0] = rat(1);
            c[1] = rat(-2);
            c
        });
        let prod = s.mul(&t);
        assert!(v4.contains_form(&prod));
    }

    #[test]
    fn flag_substitution_swaps_coordinates() {
        // alternative flag: line {Y=0}, point [0:0:1]
        let g = GeometrySpec::P2 {
            flag_line: vec![rat(0), rat(1), rat(0)],
            flag_point: vec![rat(0), rat(0), rat(1)],
        };
        g.validate().unwrap();
        let forms = g.flag_substitution().unwrap();
        // F = Y^2 Z should become U^2 W-ish: its transform must have the
        // exponent pattern (2, ., .) in the new first variable
        let f = Poly::monomial(3, &[0, 2, 1]);
        let t = f.substitute_linear(&forms);
        // ord along {first new variable} is 2
        let u = Poly::monomial(3, &[1, 0, 0]);
        assert_eq!(t.order_along(&u), Some(2));
    }

    #[test]
    fn admissibility_rejected() {
        // blown-up point on the flag line
        let g = GeometrySpec::standard_blowup(vec![vec![rat(0), rat(1), rat(0)]]);
        assert!(g.validate().is_err());
        // flag point off the line
        let g = GeometrySpec::P2 {
            flag_line: vec![rat(1), rat(0), rat(0)],
            flag_point: vec![rat(1), rat(0), rat(1)],
        };
        assert!(g.validate().is_err());
    }

    #[test]
    fn curve_conditions_give_divisible_subspace() {
        // {F in O(2): X | F} has dimension 3 spanned by X*(linear forms)
        let mb = MonomialBasis::new(3, 2);
        let x = Poly::monomial(3, &[1, 0, 0]);
        let mut ech = Echelon::new(mb.dim());
        for row in curve_condition_rows(mb, &x, 1) {
            ech.insert_sparse(row);
        }
        let ker = ech.kernel_basis();
        assert_eq!(ker.len(), 3);
        for v in ker {
            let f = Poly::from_coeffs(3, 2, v);
            assert!(f.order_along(&x).unwrap() >= 1);
        }
    }

    #[test]
    fn vanishing_subspaces_on_lines() {
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let v = fam.series(1).unwrap();
        let p0 = ValuationSpec::order_at(&[0, 0, 1]);
        assert_eq!(subspace_with_vanishing(&v, &p0, 0).len(), 3);
        assert_eq!(subspace_with_vanishing(&v, &p0, 1).len(), 2);
        // a line cannot have a double point
        assert_eq!(subspace_with_vanishing(&v, &p0, 2).len(), 0);
    }

    #[test]
    fn vanishing_subspace_along_flag_line() {
        // (O(2), ord along X, t=1): X * (linear forms), checked against the
        // divisibility oracle over the monomial basis
        let fam = SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(2)))
            .unwrap();
        let v = fam.series(1).unwrap();
        let x = Poly::monomial(3, &[1, 0, 0]);
        let sub = subspace_with_vanishing(&v, &ValuationSpec::OrderAlongCurve(x.clone()), 1);
        assert_eq!(sub.len(), 3);
        for c in sub {
            let f = Poly::from_coeffs(3, 2, c);
            assert!(f.order_along(&x).unwrap() >= 1);
        }
    }

    #[test]
    fn vanishing_subspace_non_increasing_in_t() {
        let fam = SeriesFamily::new(
            GeometrySpec::blowup_one_point(),
            DivisorClass::with_mults(rat(2), vec![rat(1)]),
        )
        .unwrap();
        let v = fam.series(2).unwrap();
        let val = ValuationSpec::order_at(&[1, 1, 1]);
        let mut prev = usize::MAX;
        for t in 0..=5 {
            let d = subspace_with_vanishing(&v, &val, t).len();
            assert!(d <= prev);
            prev = d;
        }
    }
}
