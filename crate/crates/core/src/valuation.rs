//! The rank-n flag valuation, achievable valuation vectors, and level
//! semigroups.
//!
//! In flag-adapted coordinates the valuation vector of a section is the
//! lexicographic minimum of (a, b) over the monomials X^a Y^b Z^c in its
//! support (just the minimal X exponent on the line). Since the monomial
//! basis is ordered ascending in (a, b), the achievable vectors of a
//! subspace are exactly the leading indices of its row echelon form, so a
//! single elimination pass enumerates them level by level.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::CoreError;
use crate::exact::{rat, Echelon, Rat};
use crate::poly::Poly;
use crate::series::{LinearSeries, SeriesFamily};

/// Integer valuation vector of a section at a level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlagVector {
    pub entries: Vec<i64>,
    pub level: usize,
}

impl FlagVector {
    pub fn normalized(&self) -> Vec<Rat> {
        let k = rat(self.level as i64);
        self.entries.iter().map(|&e| rat(e) / &k).collect()
    }
}

fn exponents_of_index(series: &LinearSeries, idx: usize) -> Vec<i64> {
    let exps = series.monomial_basis().exponents(idx);
    match series.geometry.variety_dim() {
        1 => vec![exps[0] as i64],
        _ => vec![exps[0] as i64, exps[1] as i64],
    }
}

/// Flag valuation of a nonzero section: the recursive restriction order
/// along the flag, computed as the lex-min exponent pattern in flag-adapted
/// coordinates.
pub fn flag_valuation(f: &Poly, series: &LinearSeries) -> Result<FlagVector, CoreError> {
    if f.is_zero() {
        return Err(CoreError::ZeroSection);
    }
    if f.degree() != series.degree || f.nvars() != series.geometry.nvars() {
        return Err(CoreError::Unsupported(format!(
            "section of degree {} does not live at level {}",
            f.degree(),
            series.level
        )));
    }
    let adapted = match series.geometry.flag_substitution() {
        Some(forms) => f.substitute_linear(&forms),
        None => f.clone(),
    };
    let lead = adapted
        .coeffs
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial has support");
    Ok(FlagVector {
        entries: exponents_of_index(series, lead),
        level: series.level,
    })
}

/// All valuation vectors achievable by sections of the given subspace
/// (coefficient vectors over the monomial basis), via one echelon pass.
pub fn achievable_vectors(series: &LinearSeries, basis: &[Vec<Rat>]) -> Vec<FlagVector> {
    let mb = series.monomial_basis();
    let forms = series.geometry.flag_substitution();
    let mut ech = Echelon::new(mb.dim());
    match (&forms, series.is_full_space() && basis.len() == mb.dim()) {
        (None, true) => {
            // identity basis: every monomial is achievable
            return (0..mb.dim())
                .map(|i| FlagVector {
                    entries: exponents_of_index(series, i),
                    level: series.level,
                })
                .collect();
        }
        _ => {
            for b in basis {
                let row = match &forms {
                    None => b.clone(),
                    Some(fs) => {
                        Poly::from_coeffs(mb.nvars, mb.degree, b.clone())
                            .substitute_linear(fs)
                            .coeffs
                    }
                };
                ech.insert_rat_row(&row);
            }
        }
    }
    ech.pivots()
        .into_iter()
        .map(|i| FlagVector {
            entries: exponents_of_index(series, i),
            level: series.level,
        })
        .collect()
}

/// All achievable vectors of the full graded pieces up to the level budget.
pub fn valuation_points(
    fam: &SeriesFamily,
    max_level: usize,
) -> Result<Vec<FlagVector>, CoreError> {
    let mut out = Vec::new();
    for k in fam.levels_up_to(max_level) {
        let v = fam.series(k)?;
        if v.dim() == 0 {
            continue;
        }
        let basis = v.basis_vectors();
        out.extend(achievable_vectors(&v, &basis));
    }
    if out.is_empty() {
        return Err(CoreError::EmptyInput(
            "no sections at any level within the budget".into(),
        ));
    }
    Ok(out)
}

/// Normalized vectors, deduplicated.
pub fn normalized_points(points: &[FlagVector]) -> Vec<Vec<Rat>> {
    let set: BTreeSet<Vec<Rat>> = points.iter().map(|fv| fv.normalized()).collect();
    set.into_iter().collect()
}

/// The set S_v of levels at which a fixed normalized vector is achieved,
/// with its eventual period.
#[derive(Debug, Clone)]
pub struct LevelSemigroup {
    pub vector: Vec<Rat>,
    pub members: Vec<usize>,
    /// gcd of the members; the eventual period once membership stabilizes
    pub exponent: usize,
    /// largest multiple of the exponent within the budget that is missing
    pub largest_gap: usize,
    /// false when membership has not become periodic within the budget
    pub stable: bool,
}

pub fn level_semigroup(
    fam: &SeriesFamily,
    v: &[Rat],
    max_level: usize,
) -> Result<LevelSemigroup, CoreError> {
    let mut members = Vec::new();
    for k in fam.levels_up_to(max_level) {
        let kk = rat(k as i64);
        let target: Option<Vec<i64>> = v
            .iter()
            .map(|c| {
                let kc = c * &kk;
                kc.is_integer().then(|| i64::try_from(kc.to_integer()).unwrap())
            })
            .collect();
        let Some(target) = target else { continue };
        let series = fam.series(k)?;
        if series.dim() == 0 {
            continue;
        }
        let basis = series.basis_vectors();
        if achievable_vectors(&series, &basis)
            .iter()
            .any(|fv| fv.entries == target)
        {
            members.push(k);
        }
    }
    if members.is_empty() {
        return Ok(LevelSemigroup {
            vector: v.to_vec(),
            members,
            exponent: 0,
            largest_gap: max_level,
            stable: false,
        });
    }
    let exponent = members.iter().fold(0usize, |g, &k| g.gcd(&k));
    let member_set: BTreeSet<usize> = members.iter().copied().collect();
    let largest_gap = (1..=max_level / exponent)
        .map(|j| j * exponent)
        .filter(|k| !member_set.contains(k))
        .max()
        .unwrap_or(0);
    // stable when the whole upper half of the budget is gap-free
    let stable = 2 * largest_gap <= max_level;
    Ok(LevelSemigroup {
        vector: v.to_vec(),
        members,
        exponent,
        largest_gap,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratq;
    use crate::series::{DivisorClass, GeometrySpec};

    fn o_d(d: i64) -> SeriesFamily {
        SeriesFamily::new(GeometrySpec::standard_p2(), DivisorClass::of_degree(rat(d))).unwrap()
    }

    #[test]
    fn monomial_valuations() {
        let fam = o_d(2);
        let v = fam.series(1).unwrap();
        let f = Poly::monomial(3, &[2, 0, 0]);
        assert_eq!(flag_valuation(&f, &v).unwrap().entries, vec![2, 0]);
    }

    #[test]
    fn recursive_restriction_oracle() {
        // Hand recursion for F = X Y^2 + Y^3: ord along {X=0} is 0, the
        // restriction to the line is Y^3, which vanishes to order 3 at the
        // flag point, so the vector is (0, 3).
        let fam = o_d(3);
        let v = fam.series(1).unwrap();
        let f = Poly::monomial(3, &[1, 2, 0]).add(&Poly::monomial(3, &[0, 3, 0]));
        assert_eq!(flag_valuation(&f, &v).unwrap().entries, vec![0, 3]);
        // F = XYZ + XY^2: ord along {X=0} is 1; (YZ + Y^2)|_{X=0} vanishes
        // to order 1 at [0:0:1], giving (1, 1).
        let g = Poly::monomial(3, &[1, 1, 1]).add(&Poly::monomial(3, &[1, 2, 0]));
        assert_eq!(flag_valuation(&g, &v).unwrap().entries, vec![1, 1]);
    }

    #[test]
    fn zero_section_rejected() {
        let fam = o_d(1);
        let v = fam.series(1).unwrap();
        assert!(flag_valuation(&Poly::zero(3, 1), &v).is_err());
    }

    #[test]
    fn achievable_vectors_of_o1() {
        // basis {Z, Y, X} triangularized: each monomial its own vector
        let fam = o_d(1);
        let v = fam.series(1).unwrap();
        let vecs = achievable_vectors(&v, &v.basis_vectors());
        let set: BTreeSet<Vec<i64>> = vecs.into_iter().map(|f| f.entries).collect();
        let expect: BTreeSet<Vec<i64>> =
            [vec![0, 0], vec![0, 1], vec![1, 0]].into_iter().collect();
        assert_eq!(set, expect);
    }

    #[test]
    fn achievable_vectors_of_o2_level1() {
        // the six lattice points of twice the standard simplex
        let fam = o_d(2);
        let v = fam.series(1).unwrap();
        let vecs = achievable_vectors(&v, &v.basis_vectors());
        assert_eq!(vecs.len(), 6);
        for fv in vecs {
            assert!(fv.entries[0] + fv.entries[1] <= 2);
        }
    }

    #[test]
    fn valuation_additive_on_products() {
        let fam = o_d(1);
        let v1 = fam.series(1).unwrap();
        let v2 = fam.series(2).unwrap();
        let f = Poly::monomial(3, &[0, 1, 0]).add(&Poly::monomial(3, &[0, 0, 1]));
        let g = Poly::monomial(3, &[1, 0, 0]).add(&Poly::monomial(3, &[0, 1, 0]));
        let vf = flag_valuation(&f, &v1).unwrap();
        let vg = flag_valuation(&g, &v1).unwrap();
        let vfg = flag_valuation(&f.mul(&g), &v2).unwrap();
        for i in 0..2 {
            assert_eq!(vfg.entries[i], vf.entries[i] + vg.entries[i]);
        }
    }

    #[test]
    fn p1_vanishing_orders() {
        // (P1, O(1), K=2): normalized vectors {0, 1/2, 1}
        let fam = SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        let pts = valuation_points(&fam, 2).unwrap();
        let set = normalized_points(&pts);
        let expect = vec![vec![rat(0)], vec![ratq(1, 2)], vec![rat(1)]];
        assert_eq!(set, expect);
    }

    #[test]
    fn level_semigroup_on_p1() {
        let fam = SeriesFamily::new(GeometrySpec::standard_p1(), DivisorClass::of_degree(rat(1)))
            .unwrap();
        // v = 1/2: exponent is the denominator
        let s = level_semigroup(&fam, &[ratq(1, 2)], 12).unwrap();
        assert_eq!(s.members, vec![2, 4, 6, 8, 10, 12]);
        assert_eq!(s.exponent, 2);
        assert!(s.stable);
        assert_eq!(s.largest_gap, 0);
        // v = 1 = deg L: achieved at every level on the rational curve
        let s = level_semigroup(&fam, &[rat(1)], 6).unwrap();
        assert_eq!(s.members, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(s.exponent, 1);
        assert!(s.stable);
    }

    #[test]
    fn level_semigroup_on_p2_third() {
        // constructive witness at level 3: XYZ has vector (1,1) = 3*(1/3,1/3)
        let fam = o_d(1);
        let s = level_semigroup(&fam, &[ratq(1, 3), ratq(1, 3)], 9).unwrap();
        assert_eq!(s.members, vec![3, 6, 9]);
        assert_eq!(s.exponent, 3);
        assert!(s.stable);
    }

    #[test]
    fn midpoint_closure() {
        // midpoints of normalized vectors are normalized vectors (within a
        // doubled level budget)
        let fam = o_d(1);
        let pts2 = normalized_points(&valuation_points(&fam, 2).unwrap());
        // midpoints of level <= 2 vectors are reached by level 2*2*2 = 8
        let pts8: BTreeSet<Vec<Rat>> = normalized_points(&valuation_points(&fam, 8).unwrap())
            .into_iter()
            .collect();
        for a in &pts2 {
            for b in &pts2 {
                let mid: Vec<Rat> = a.iter().zip(b).map(|(x, y)| (x + y) / rat(2)).collect();
                assert!(pts8.contains(&mid), "midpoint {mid:?} missing");
            }
        }
    }
}
