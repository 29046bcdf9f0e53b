//! Exact polyhedral geometry in ambient dimensions 1-3.
//!
//! Convex hulls use exact orientation determinants over rationals; the
//! concave envelope of a finite sample set is computed as the upper facets
//! of the convex hull of the lifted points, found by gift wrapping. Facets
//! come out as polygons (coplanar lifted points are merged), which is what
//! exact integration over the facet cells wants.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::exact::{rat, Rat};

pub type Point = Vec<Rat>;

pub fn point2(x: Rat, y: Rat) -> Point {
    vec![x, y]
}

fn sub(a: &[Rat], b: &[Rat]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rat::zero(), |s, t| s + t)
}

/// Cross product of 2-vectors; sign of the turn a -> b.
fn cross2(a: &[Rat], b: &[Rat]) -> Rat {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Orientation of the triangle (a, b, c) in the plane: positive = CCW.
pub fn orient2d(a: &[Rat], b: &[Rat], c: &[Rat]) -> Rat {
    cross2(&sub(b, a), &sub(c, a))
}

/// Triple product det(b-a, c-a, d-a); positive = d on the positive side of
/// the plane through a, b, c oriented by the right-hand rule.
pub fn orient3d(a: &[Rat], b: &[Rat], c: &[Rat], d: &[Rat]) -> Rat {
    let u = sub(b, a);
    let v = sub(c, a);
    let w = sub(d, a);
    &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
        + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0])
}

/// A facet inequality normal . x <= offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

/// Convex polytope in V-representation with facets derived at construction
/// time for full-dimensional bodies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    pub ambient: usize,
    pub affine_dim: usize,
    /// Canonical order: ambient 2 full-dim -> CCW from the lex-min vertex;
    /// otherwise sorted lexicographically.
    pub vertices: Vec<Point>,
    pub facets: Vec<Facet>,
}

impl Polytope {
    pub fn empty(ambient: usize) -> Self {
        Polytope {
            ambient,
            affine_dim: 0,
            vertices: Vec::new(),
            facets: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn segment(lo: Rat, hi: Rat) -> Self {
        convex_hull(&[vec![lo], vec![hi]], 1)
    }

    pub fn vertex_set(&self) -> BTreeSet<Point> {
        self.vertices.iter().cloned().collect()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        if self.is_empty() || x.len() != self.ambient {
            return false;
        }
        match (self.ambient, self.affine_dim) {
            (_, 0) => self.vertices[0] == x,
            (1, 1) => self.vertices[0][0] <= x[0] && x[0] <= self.vertices[1][0],
            (2, 1) | (3, 1) => {
                let a = &self.vertices[0];
                let b = self.vertices.last().unwrap();
                let d = sub(b, a);
                let r = sub(x, a);
                // parallel and within the parameter range
                let along = dot(&r, &d);
                let len2 = dot(&d, &d);
                let parallel = (0..self.ambient).all(|i| {
                    (&r[i] * &len2 - &d[i] * &along).is_zero()
                });
                parallel && !along.is_negative() && along <= len2
            }
            (2, 2) | (3, 3) => self
                .facets
                .iter()
                .all(|f| dot(&f.normal, x) <= f.offset),
            (3, 2) => {
                // planar polygon (vertices in cyclic order): on the plane
                // and inside some fan triangle
                let a = &self.vertices[0];
                let b = &self.vertices[1];
                let c = self
                    .vertices
                    .iter()
                    .find(|v| !orient_cross_is_zero(a, b, v.as_slice()))
                    .expect("affine_dim 2 needs a non-collinear vertex");
                if !orient3d(a, b, c, x).is_zero() {
                    return false;
                }
                (1..self.vertices.len() - 1).any(|i| {
                    in_triangle3(a, &self.vertices[i], &self.vertices[i + 1], x)
                })
            }
            _ => false,
        }
    }

    pub fn on_boundary(&self, x: &[Rat]) -> bool {
        if !self.contains(x) {
            return false;
        }
        match (self.ambient, self.affine_dim) {
            (_, 0) => true,
            (_, 1) => x == self.vertices[0].as_slice() || x == self.vertices.last().unwrap().as_slice(),
            (2, 2) | (3, 3) => self.facets.iter().any(|f| dot(&f.normal, x) == f.offset),
            _ => true,
        }
    }

    /// Lebesgue measure in the ambient dimension: zero for degenerate
    /// bodies, length on R^1, area on R^2.
    pub fn measure(&self) -> Rat {
        if self.affine_dim < self.ambient {
            return Rat::zero();
        }
        match self.ambient {
            1 => (&self.vertices[1][0] - &self.vertices[0][0]).abs(),
            2 => {
                let v = &self.vertices;
                let mut twice = Rat::zero();
                for i in 0..v.len() {
                    let j = (i + 1) % v.len();
                    twice += &v[i][0] * &v[j][1] - &v[j][0] * &v[i][1];
                }
                twice / rat(2)
            }
            _ => panic!("measure unsupported in R^{}", self.ambient),
        }
    }

    pub fn centroid(&self) -> Point {
        let n = rat(self.vertices.len() as i64);
        (0..self.ambient)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v[i].clone())
                    .fold(Rat::zero(), |s, t| s + t)
                    / &n
            })
            .collect()
    }
}

fn orient_cross_is_zero(a: &[Rat], b: &[Rat], c: &[Rat]) -> bool {
    let u = sub(b, a);
    let v = sub(c, a);
    (&u[1] * &v[2] - &u[2] * &v[1]).is_zero()
        && (&u[2] * &v[0] - &u[0] * &v[2]).is_zero()
        && (&u[0] * &v[1] - &u[1] * &v[0]).is_zero()
}

fn in_triangle3(a: &[Rat], b: &[Rat], c: &[Rat], x: &[Rat]) -> bool {
    // solve x = a + s(b-a) + t(c-a) exactly; inside iff s,t >= 0, s+t <= 1
    let u = sub(b, a);
    let v = sub(c, a);
    let r = sub(x, a);
    // pick two coordinates where (u, v) has nonzero 2x2 minor
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let det = &u[i] * &v[j] - &u[j] * &v[i];
        if det.is_zero() {
            continue;
        }
        let s = (&r[i] * &v[j] - &r[j] * &v[i]) / &det;
        let t = (&u[i] * &r[j] - &u[j] * &r[i]) / &det;
        return !s.is_negative() && !t.is_negative() && &s + &t <= Rat::one();
    }
    false
}

fn dedup_points(points: &[Point]) -> Vec<Point> {
    let set: BTreeSet<Point> = points.iter().cloned().collect();
    set.into_iter().collect()
}

/// Convex hull with exact predicates. Degenerate input yields a polytope
/// flagged with its affine dimension.
pub fn convex_hull(points: &[Point], ambient: usize) -> Polytope {
    assert!(!points.is_empty(), "convex_hull of empty set");
    assert!(points.iter().all(|p| p.len() == ambient));
    let pts = dedup_points(points);
    if pts.len() == 1 {
        return Polytope {
            ambient,
            affine_dim: 0,
            vertices: pts,
            facets: Vec::new(),
        };
    }
    match ambient {
        1 => {
            let lo = pts.first().unwrap().clone();
            let hi = pts.last().unwrap().clone();
            Polytope {
                ambient,
                affine_dim: 1,
                vertices: vec![lo.clone(), hi.clone()],
                facets: vec![
                    Facet { normal: vec![rat(-1)], offset: -lo[0].clone() },
                    Facet { normal: vec![rat(1)], offset: hi[0].clone() },
                ],
            }
        }
        2 => hull_2d(&pts),
        3 => hull_3d(&pts),
        _ => panic!("ambient dimension must be 1, 2 or 3"),
    }
}

fn hull_2d(pts: &[Point]) -> Polytope {
    // monotone chain on lex-sorted points (pts arrive sorted from dedup)
    let chain = |iter: &mut dyn Iterator<Item = &Point>| -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for p in iter {
            while out.len() >= 2
                && !orient2d(&out[out.len() - 2], &out[out.len() - 1], p).is_positive()
            {
                out.pop();
            }
            out.push(p.clone());
        }
        out
    };
    let mut lower = chain(&mut pts.iter());
    let mut upper = chain(&mut pts.iter().rev());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // all points collinear: extremes are the lex min and max
        let vertices = vec![pts.first().unwrap().clone(), pts.last().unwrap().clone()];
        let dim = usize::from(vertices[0] != vertices[1]);
        return Polytope {
            ambient: 2,
            affine_dim: dim,
            vertices,
            facets: Vec::new(),
        };
    }
    // lower starts at the lex-min vertex and runs CCW
    let verts = lower;
    let mut facets = Vec::with_capacity(verts.len());
    for i in 0..verts.len() {
        let j = (i + 1) % verts.len();
        let dir = sub(&verts[j], &verts[i]);
        let normal = vec![dir[1].clone(), -dir[0].clone()];
        let offset = dot(&normal, &verts[i]);
        facets.push(Facet { normal, offset });
    }
    Polytope {
        ambient: 2,
        affine_dim: 2,
        vertices: verts,
        facets,
    }
}

/// One upper facet of the hull of lifted points: the graph of an affine
/// function over its cell.
#[derive(Debug, Clone)]
pub struct UpperFacet {
    pub gradient: Vec<Rat>,
    pub constant: Rat,
    /// Hull (CCW) of the projections of the points lying on the facet plane.
    pub cell_indices: Vec<usize>,
}

impl UpperFacet {
    pub fn value(&self, x: &[Rat]) -> Rat {
        dot(&self.gradient, x) + &self.constant
    }
}

fn proj(p: &[Rat]) -> Point {
    p[..p.len() - 1].to_vec()
}

/// Upper hull facets of a lifted point set in R^3 by gift wrapping.
/// Projections must not be all collinear; input must be free of duplicate
/// projections (callers dedup keeping the max lift).
fn upper_facets_3d(pts: &[Point]) -> Vec<UpperFacet> {
    let n = pts.len();
    let projs: Vec<Point> = pts.iter().map(|p| proj(p)).collect();

    // Seed: an edge of the 2-D upper chain in the (x, z) plane (or (y, z) if
    // all x agree) lies in a supporting plane of the lifted set.
    let use_y = projs.iter().all(|p| p[0] == projs[0][0]);
    let coord = usize::from(use_y);
    let mut best: BTreeMap<Rat, (Rat, usize)> = BTreeMap::new();
    for (i, p) in pts.iter().enumerate() {
        let key = p[coord].clone();
        let z = p[2].clone();
        match best.get(&key) {
            Some((bz, _)) if *bz >= z => {}
            _ => {
                best.insert(key, (z, i));
            }
        }
    }
    let chain_pts: Vec<(Rat, Rat, usize)> =
        best.into_iter().map(|(x, (z, i))| (x, z, i)).collect();
    let mut chain: Vec<usize> = Vec::new();
    for (k, &(ref x, ref z, _)) in chain_pts.iter().enumerate() {
        while chain.len() >= 2 {
            let (ref xa, ref za, _) = chain_pts[chain[chain.len() - 2]];
            let (ref xb, ref zb, _) = chain_pts[chain[chain.len() - 1]];
            // pop b unless (a, b, new) makes a strict right turn (upper chain)
            let turn = (xb - xa) * (z - za) - (zb - za) * (x - xa);
            if turn.is_negative() {
                break;
            }
            chain.pop();
        }
        chain.push(k);
        let _ = z;
    }
    assert!(chain.len() >= 2, "projections were collinear");
    let (sa, sb) = (chain_pts[chain[0]].2, chain_pts[chain[1]].2);
    // supporting plane z = alpha * x_coord + beta through lifted sa, sb
    let alpha = (&pts[sb][2] - &pts[sa][2]) / (&pts[sb][coord] - &pts[sa][coord]);
    let beta = &pts[sa][2] - &alpha * &pts[sa][coord];
    let contacts: Vec<usize> = (0..n)
        .filter(|&i| pts[i][2] == &alpha * &pts[i][coord] + &beta)
        .collect();

    let mut facets: Vec<UpperFacet> = Vec::new();
    let mut seen_planes: BTreeSet<(Vec<Rat>, Rat)> = BTreeSet::new();
    let mut processed: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();

    let contact_projs: Vec<&Point> = contacts.iter().map(|&i| &projs[i]).collect();
    let collinear = contact_projs.len() < 3
        || contact_projs
            .iter()
            .all(|p| orient2d(contact_projs[0], contact_projs[1], p).is_zero());
    if !collinear {
        // the contact set itself is the first facet
        emit_facet(
            pts, &projs, &contacts, &mut facets, &mut seen_planes, &mut processed, &mut queue,
        );
    } else {
        // contacts span an edge; wrap from both orientations of its extremes
        let d = sub(contact_projs.last().unwrap(), contact_projs[0]);
        let mut ext = contacts.clone();
        ext.sort_by(|&i, &j| dot(&projs[i], &d).cmp(&dot(&projs[j], &d)));
        let (a, b) = (*ext.first().unwrap(), *ext.last().unwrap());
        queue.push_back((a, b));
        queue.push_back((b, a));
    }

    while let Some((a, b)) = queue.pop_front() {
        if processed.contains(&(a, b)) {
            continue;
        }
        // candidates strictly left of the directed edge in projection
        let left: Vec<usize> = (0..n)
            .filter(|&i| i != a && i != b && orient2d(&projs[a], &projs[b], &projs[i]).is_positive())
            .collect();
        if left.is_empty() {
            processed.insert((a, b));
            continue; // silhouette edge
        }
        let mut c = left[0];
        for &d in &left[1..] {
            if orient3d(&pts[a], &pts[b], &pts[c], &pts[d]).is_positive() {
                c = d;
            }
        }
        let on_plane: Vec<usize> = (0..n)
            .filter(|&i| orient3d(&pts[a], &pts[b], &pts[c], &pts[i]).is_zero())
            .collect();
        debug_assert!((0..n).all(|i| !orient3d(&pts[a], &pts[b], &pts[c], &pts[i]).is_positive()));
        emit_facet(
            pts, &projs, &on_plane, &mut facets, &mut seen_planes, &mut processed, &mut queue,
        );
        processed.insert((a, b));
    }
    facets
}

fn emit_facet(
    pts: &[Point],
    projs: &[Point],
    members: &[usize],
    facets: &mut Vec<UpperFacet>,
    seen: &mut BTreeSet<(Vec<Rat>, Rat)>,
    processed: &mut BTreeSet<(usize, usize)>,
    queue: &mut VecDeque<(usize, usize)>,
) {
    // affine function through three non-collinear members
    let a = members[0];
    let b = members
        .iter()
        .copied()
        .find(|&i| projs[i] != projs[a])
        .expect("degenerate facet");
    let c = members
        .iter()
        .copied()
        .find(|&i| !orient2d(&projs[a], &projs[b], &projs[i]).is_zero())
        .expect("degenerate facet");
    let u = sub(&pts[b], &pts[a]);
    let v = sub(&pts[c], &pts[a]);
    let nx = &u[1] * &v[2] - &u[2] * &v[1];
    let ny = &u[2] * &v[0] - &u[0] * &v[2];
    let nz = &u[0] * &v[1] - &u[1] * &v[0];
    debug_assert!(!nz.is_zero());
    let gx = -&nx / &nz;
    let gy = -&ny / &nz;
    let constant = &pts[a][2] - &gx * &pts[a][0] - &gy * &pts[a][1];
    let key = (vec![gx.clone(), gy.clone()], constant.clone());
    if !seen.insert(key) {
        return;
    }
    // cell = CCW hull of the member projections; recover indices by lookup
    let member_pts: Vec<Point> = members.iter().map(|&i| projs[i].clone()).collect();
    let cell = hull_2d(&dedup_points(&member_pts));
    let mut cell_indices = Vec::with_capacity(cell.vertices.len());
    for v in &cell.vertices {
        let idx = members
            .iter()
            .copied()
            .find(|&i| &projs[i] == v)
            .expect("cell vertex must be a member");
        cell_indices.push(idx);
    }
    for i in 0..cell_indices.len() {
        let u = cell_indices[i];
        let w = cell_indices[(i + 1) % cell_indices.len()];
        processed.insert((u, w));
        if !processed.contains(&(w, u)) {
            queue.push_back((w, u));
        }
    }
    facets.push(UpperFacet {
        gradient: vec![gx, gy],
        constant,
        cell_indices,
    });
}

fn hull_3d(pts: &[Point]) -> Polytope {
    // affine dimension
    let p0 = &pts[0];
    let mut dir1: Option<Point> = None;
    let mut dir2: Option<(Point, Point)> = None;
    let mut full = false;
    for p in &pts[1..] {
        let d = sub(p, p0);
        match (&dir1, &dir2) {
            (None, _) => dir1 = Some(d),
            (Some(u), None) => {
                if !orient_cross_is_zero(p0, &add(p0, u), p) {
                    dir2 = Some((u.clone(), d));
                }
            }
            (Some(_), Some((u, v))) => {
                let det = orient3d(p0, &add(p0, u), &add(p0, v), p);
                if !det.is_zero() {
                    full = true;
                    break;
                }
            }
        }
    }
    match (dir1, dir2, full) {
        (None, _, _) => Polytope {
            ambient: 3,
            affine_dim: 0,
            vertices: pts.to_vec(),
            facets: Vec::new(),
        },
        (Some(d), None, _) => {
            // collinear: extremes along d
            let mut idx: Vec<usize> = (0..pts.len()).collect();
            idx.sort_by(|&i, &j| dot(&pts[i], &d).cmp(&dot(&pts[j], &d)));
            Polytope {
                ambient: 3,
                affine_dim: 1,
                vertices: vec![pts[*idx.first().unwrap()].clone(), pts[*idx.last().unwrap()].clone()],
                facets: Vec::new(),
            }
        }
        (_, Some((u, v)), false) => {
            // coplanar: hull inside the plane via a 2-coordinate chart
            let n = vec![
                &u[1] * &v[2] - &u[2] * &v[1],
                &u[2] * &v[0] - &u[0] * &v[2],
                &u[0] * &v[1] - &u[1] * &v[0],
            ];
            let drop = (0..3).max_by_key(|&i| n[i].abs()).unwrap();
            let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
            let flat: Vec<Point> = pts
                .iter()
                .map(|p| vec![p[keep[0]].clone(), p[keep[1]].clone()])
                .collect();
            let h = hull_2d(&dedup_points(&flat));
            // keep the chart's cyclic order so fan containment tests work
            let verts: Vec<Point> = h
                .vertices
                .iter()
                .map(|f| {
                    pts.iter()
                        .find(|p| p[keep[0]] == f[0] && p[keep[1]] == f[1])
                        .unwrap()
                        .clone()
                })
                .collect();
            Polytope {
                ambient: 3,
                affine_dim: 2,
                vertices: verts,
                facets: Vec::new(),
            }
        }
        (_, _, true) => {
            let upper = upper_facets_3d(pts);
            let flipped: Vec<Point> = pts
                .iter()
                .map(|p| vec![p[0].clone(), p[1].clone(), -p[2].clone()])
                .collect();
            let lower = upper_facets_3d(&flipped);
            let mut verts: BTreeSet<Point> = BTreeSet::new();
            let mut facets = Vec::new();
            for f in &upper {
                for &i in &f.cell_indices {
                    verts.insert(pts[i].clone());
                }
                facets.push(Facet {
                    normal: vec![-f.gradient[0].clone(), -f.gradient[1].clone(), rat(1)],
                    offset: f.constant.clone(),
                });
            }
            for f in &lower {
                for &i in &f.cell_indices {
                    verts.insert(pts[i].clone());
                }
                facets.push(Facet {
                    normal: vec![-f.gradient[0].clone(), -f.gradient[1].clone(), rat(-1)],
                    offset: f.constant.clone(),
                });
            }
            // vertical facets over the silhouette edges of the projection
            let projs: Vec<Point> = pts.iter().map(|p| proj(p)).collect();
            let sil = hull_2d(&dedup_points(&projs));
            if sil.affine_dim == 2 {
                for i in 0..sil.vertices.len() {
                    let a2 = &sil.vertices[i];
                    let b2 = &sil.vertices[(i + 1) % sil.vertices.len()];
                    let on_line: Vec<usize> = (0..pts.len())
                        .filter(|&k| orient2d(a2, b2, &projs[k]).is_zero())
                        .collect();
                    // 2-D hull in (parameter along edge, z)
                    let d2 = sub(b2, a2);
                    let lifted: Vec<Point> = on_line
                        .iter()
                        .map(|&k| vec![dot(&projs[k], &d2), pts[k][2].clone()])
                        .collect();
                    let side = hull_2d(&dedup_points(&lifted));
                    if side.affine_dim == 2 {
                        for v in &side.vertices {
                            let k = on_line
                                .iter()
                                .copied()
                                .find(|&k| dot(&projs[k], &d2) == v[0] && pts[k][2] == v[1])
                                .unwrap();
                            verts.insert(pts[k].clone());
                        }
                        let normal = vec![d2[1].clone(), -d2[0].clone(), Rat::zero()];
                        let offset = &normal[0] * &a2[0] + &normal[1] * &a2[1];
                        facets.push(Facet { normal, offset });
                    }
                }
            }
            facets.sort_by(|a, b| (a.normal.clone(), a.offset.clone()).cmp(&(b.normal.clone(), b.offset.clone())));
            facets.dedup();
            Polytope {
                ambient: 3,
                affine_dim: 3,
                vertices: verts.into_iter().collect(),
                facets,
            }
        }
    }
}

fn add(a: &[Rat], b: &[Rat]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// One affine piece of a piecewise-linear concave function.
#[derive(Debug, Clone)]
pub struct AffinePiece {
    pub gradient: Vec<Rat>,
    pub constant: Rat,
    pub cell: Polytope,
}

impl AffinePiece {
    pub fn value(&self, x: &[Rat]) -> Rat {
        dot(&self.gradient, x) + &self.constant
    }
}

/// Piecewise-linear concave function over a polytope, stored as the upper
/// facets of the hull of its lifted samples. The function value everywhere
/// is the minimum of the facet affine pieces.
#[derive(Debug, Clone)]
pub struct ConcavePL {
    pub domain: Polytope,
    pub pieces: Vec<AffinePiece>,
    pub samples: Vec<(Point, Rat)>,
}

impl ConcavePL {
    pub fn eval(&self, x: &[Rat]) -> Result<Rat, CoreError> {
        if !self.domain.contains(x) {
            return Err(CoreError::PointOutsideDomain(format!("{x:?}")));
        }
        Ok(self
            .pieces
            .iter()
            .map(|p| p.value(x))
            .min()
            .expect("concave function with no pieces"))
    }

    pub fn min_value(&self) -> Rat {
        // concave => min over the domain is attained at a vertex
        self.domain
            .vertices
            .iter()
            .map(|v| self.eval(v).unwrap())
            .min()
            .expect("empty domain")
    }

    /// Exact Lebesgue integral over the domain via facet-cell triangulation
    /// and the vertex-mean rule for affine integrands.
    pub fn integrate(&self) -> Rat {
        let mut total = Rat::zero();
        for piece in &self.pieces {
            match piece.cell.affine_dim {
                2 => {
                    let v = &piece.cell.vertices;
                    for i in 1..v.len() - 1 {
                        let area = orient2d(&v[0], &v[i], &v[i + 1]) / rat(2);
                        let mean = (piece.value(&v[0]) + piece.value(&v[i]) + piece.value(&v[i + 1]))
                            / rat(3);
                        total += area * mean;
                    }
                }
                1 if piece.cell.ambient == 1 => {
                    let a = &piece.cell.vertices[0];
                    let b = &piece.cell.vertices[1];
                    let len = (&b[0] - &a[0]).abs();
                    let mean = (piece.value(a) + piece.value(b)) / rat(2);
                    total += len * mean;
                }
                _ => {} // measure-zero cells contribute nothing
            }
        }
        total
    }
}

/// Closed concave envelope of the function equal to the sample values at the
/// sample points and 0 at the domain vertices, as the upper facets of the
/// hull of the lifted point set.
pub fn concave_envelope(samples: &[(Point, Rat)], domain: &Polytope) -> Result<ConcavePL, CoreError> {
    for (p, v) in samples {
        if !domain.contains(p) {
            return Err(CoreError::PointOutsideDomain(format!("{p:?}")));
        }
        if v.is_negative() {
            return Err(CoreError::Unsupported(
                "concave envelope requires non-negative sample values".into(),
            ));
        }
    }
    // adjoin domain vertices at value 0, keep max value per point
    let mut by_point: BTreeMap<Point, Rat> = BTreeMap::new();
    for v in &domain.vertices {
        by_point.insert(v.clone(), Rat::zero());
    }
    for (p, v) in samples {
        match by_point.get(p) {
            Some(old) if old >= v => {}
            _ => {
                by_point.insert(p.clone(), v.clone());
            }
        }
    }
    let merged: Vec<(Point, Rat)> = by_point.into_iter().collect();

    let pieces = match (domain.ambient, domain.affine_dim) {
        (_, 0) => {
            let val = merged.iter().map(|(_, v)| v.clone()).max().unwrap();
            vec![AffinePiece {
                gradient: vec![Rat::zero(); domain.ambient],
                constant: val,
                cell: domain.clone(),
            }]
        }
        (1, 1) => envelope_1d(&merged, domain, None),
        (2, 1) => {
            let o = domain.vertices[0].clone();
            let d = sub(domain.vertices.last().unwrap(), &o);
            envelope_1d(&merged, domain, Some((o, d)))
        }
        (2, 2) => {
            let lifted: Vec<Point> = merged
                .iter()
                .map(|(p, v)| vec![p[0].clone(), p[1].clone(), v.clone()])
                .collect();
            let facets = upper_facets_3d(&lifted);
            facets
                .into_iter()
                .map(|f| {
                    let cell_pts: Vec<Point> =
                        f.cell_indices.iter().map(|&i| proj(&lifted[i])).collect();
                    AffinePiece {
                        gradient: f.gradient,
                        constant: f.constant,
                        cell: hull_2d(&cell_pts),
                    }
                })
                .collect()
        }
        (a, d) => {
            return Err(CoreError::Unsupported(format!(
                "envelope over affine_dim {d} in R^{a}"
            )))
        }
    };
    Ok(ConcavePL {
        domain: domain.clone(),
        pieces,
        samples: samples.to_vec(),
    })
}

/// Upper chain over an interval; `chart` parametrizes segments embedded in
/// the plane by (origin, direction).
fn envelope_1d(
    merged: &[(Point, Rat)],
    domain: &Polytope,
    chart: Option<(Point, Point)>,
) -> Vec<AffinePiece> {
    let param = |p: &Point| -> Rat {
        match &chart {
            None => p[0].clone(),
            Some((o, d)) => dot(&sub(p, o), d) / dot(d, d),
        }
    };
    let lifted: Vec<Point> = merged.iter().map(|(p, v)| vec![param(p), v.clone()]).collect();
    // upper chain, left to right
    let mut pts = dedup_points(&lifted);
    pts.sort();
    let mut keyed: Vec<Point> = Vec::new();
    for p in pts {
        if let Some(last) = keyed.last() {
            if last[0] == p[0] {
                keyed.pop();
            }
        }
        keyed.push(p); // sorted: the later one has the larger value
    }
    let mut chain: Vec<Point> = Vec::new();
    for p in keyed {
        while chain.len() >= 2
            && !orient2d(&chain[chain.len() - 2], &chain[chain.len() - 1], &p).is_negative()
        {
            chain.pop();
        }
        chain.push(p);
    }
    let mut pieces = Vec::new();
    for w in chain.windows(2) {
        let (s0, v0) = (&w[0][0], &w[0][1]);
        let (s1, v1) = (&w[1][0], &w[1][1]);
        let slope = (v1 - v0) / (s1 - s0);
        match &chart {
            None => {
                let c = v0 - &slope * s0;
                pieces.push(AffinePiece {
                    gradient: vec![slope],
                    constant: c,
                    cell: Polytope::segment(s0.clone(), s1.clone()),
                });
            }
            Some((o, d)) => {
                let len2 = dot(d, d);
                let grad: Vec<Rat> = d.iter().map(|di| &slope * di / &len2).collect();
                // constant chosen so grad . x + c = v0 + slope (param(x) - s0)
                let a = add(o, &d.iter().map(|di| di * s0).collect::<Vec<_>>());
                let c = v0 - dot(&grad, &a);
                let b = add(o, &d.iter().map(|di| di * s1).collect::<Vec<_>>());
                let mut vs = vec![a, b];
                vs.sort();
                pieces.push(AffinePiece {
                    gradient: grad,
                    constant: c,
                    cell: Polytope {
                        ambient: domain.ambient,
                        affine_dim: 1,
                        vertices: vs,
                        facets: Vec::new(),
                    },
                });
            }
        }
    }
    pieces
}

/// Convex body cut out by linear inequalities and one concave quadratic
/// constraint x^T Q x + L.x + c >= 0 with Q negative definite.
#[derive(Debug, Clone)]
pub struct QuadraticCapBody {
    pub linear: Vec<Facet>,
    pub q: Vec<Vec<Rat>>,
    pub l: Vec<Rat>,
    pub c: Rat,
}

impl QuadraticCapBody {
    pub fn new(linear: Vec<Facet>, q: Vec<Vec<Rat>>, l: Vec<Rat>, c: Rat) -> Result<Self, CoreError> {
        if q.len() != 2 || q[0].len() != 2 || q[0][1] != q[1][0] {
            return Err(CoreError::Unsupported("quadratic form must be symmetric 2x2".into()));
        }
        let det = &q[0][0] * &q[1][1] - &q[0][1] * &q[1][0];
        if !q[0][0].is_negative() || !det.is_positive() {
            return Err(CoreError::Unsupported(
                "quadratic form must be negative definite (bounded convex cap)".into(),
            ));
        }
        Ok(QuadraticCapBody { linear, q, l, c })
    }

    /// The spec demo body: right half of the unit disk centered at (0, 1),
    /// {0 <= a <= 1, b >= 0, a^2 + (b-1)^2 <= 1}.
    pub fn half_disk_cap() -> Self {
        QuadraticCapBody::new(
            vec![
                Facet { normal: vec![rat(-1), rat(0)], offset: rat(0) },
                Facet { normal: vec![rat(1), rat(0)], offset: rat(1) },
                Facet { normal: vec![rat(0), rat(-1)], offset: rat(0) },
            ],
            vec![vec![rat(-1), rat(0)], vec![rat(0), rat(-1)]],
            vec![rat(0), rat(2)],
            rat(0),
        )
        .unwrap()
    }

    /// Quarter of the unit disk: {a, b >= 0, a^2 + b^2 <= 1}.
    pub fn unit_disk_cap() -> Self {
        QuadraticCapBody::new(
            vec![
                Facet { normal: vec![rat(-1), rat(0)], offset: rat(0) },
                Facet { normal: vec![rat(0), rat(-1)], offset: rat(0) },
            ],
            vec![vec![rat(-1), rat(0)], vec![rat(0), rat(-1)]],
            vec![rat(0), rat(0)],
            rat(1),
        )
        .unwrap()
    }

    pub fn quad_value(&self, x: &[Rat]) -> Rat {
        let qx: Vec<Rat> = (0..2)
            .map(|i| &self.q[i][0] * &x[0] + &self.q[i][1] * &x[1])
            .collect();
        dot(x, &qx) + dot(&self.l, x) + &self.c
    }

    pub fn quad_gradient(&self, x: &[Rat]) -> Vec<Rat> {
        (0..2)
            .map(|i| rat(2) * (&self.q[i][0] * &x[0] + &self.q[i][1] * &x[1]) + &self.l[i])
            .collect()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.linear.iter().all(|f| dot(&f.normal, x) <= f.offset)
            && !self.quad_value(x).is_negative()
    }

    pub fn on_boundary(&self, x: &[Rat]) -> bool {
        self.contains(x)
            && (self.quad_value(x).is_zero()
                || self.linear.iter().any(|f| dot(&f.normal, x) == f.offset))
    }

    pub fn on_arc(&self, x: &[Rat]) -> bool {
        self.contains(x) && self.quad_value(x).is_zero()
    }

    /// Second intersection of the conic with the line through the boundary
    /// point `p` in direction `d` (chord construction; exact rational).
    pub fn second_arc_point(&self, p: &[Rat], d: &[Rat]) -> Option<Point> {
        debug_assert!(self.quad_value(p).is_zero());
        let qd: Vec<Rat> = (0..2)
            .map(|i| &self.q[i][0] * &d[0] + &self.q[i][1] * &d[1])
            .collect();
        let a2 = dot(d, &qd);
        if a2.is_zero() {
            return None;
        }
        let a1 = rat(2) * dot(p, &qd) + dot(&self.l, d);
        let s = -a1 / a2;
        Some(add(p, &d.iter().map(|di| di * &s).collect::<Vec<_>>()))
    }
}

/// A convex body: polytope or quadratic cap.
#[derive(Debug, Clone)]
pub enum Body {
    Poly(Polytope),
    Cap(QuadraticCapBody),
}

impl Body {
    pub fn contains(&self, x: &[Rat]) -> bool {
        match self {
            Body::Poly(p) => p.contains(x),
            Body::Cap(c) => c.contains(x),
        }
    }

    pub fn on_boundary(&self, x: &[Rat]) -> bool {
        match self {
            Body::Poly(p) => p.on_boundary(x),
            Body::Cap(c) => c.on_boundary(x),
        }
    }
}

/// Exact rational or an isolating interval for an algebraic value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Exact(Rat),
    Bracket { lo: Rat, hi: Rat },
}

impl Value {
    pub fn lo(&self) -> &Rat {
        match self {
            Value::Exact(r) => r,
            Value::Bracket { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rat {
        match self {
            Value::Exact(r) => r,
            Value::Bracket { hi, .. } => hi,
        }
    }

    pub fn is_exactly(&self, r: &Rat) -> bool {
        matches!(self, Value::Exact(x) if x == r)
    }
}

pub const DEFAULT_BRACKET_BITS: u32 = 40;

fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

/// sup { t in [0,1] : x in t*p + (1-t)*body } for p, x in the body.
///
/// Linear constraints give closed-form rationals; the quadratic constraint
/// contributes either an exact rational root or an isolating interval of
/// width at most 2^-bits.
pub fn homothety_sup(body: &Body, p: &[Rat], x: &[Rat], bits: u32) -> Result<Value, CoreError> {
    if !body.contains(p) || !body.contains(x) {
        return Err(CoreError::OutsideBody);
    }
    if p == x {
        return Ok(Value::Exact(Rat::one()));
    }
    let linear: Vec<&Facet> = match body {
        Body::Poly(poly) => {
            if poly.affine_dim != poly.ambient {
                return Err(CoreError::Unsupported(
                    "homothety needs a full-dimensional body".into(),
                ));
            }
            poly.facets.iter().collect()
        }
        Body::Cap(cap) => cap.linear.iter().collect(),
    };
    let mut exact_min = Rat::one();
    for f in linear {
        let slack_p = &f.offset - dot(&f.normal, p);
        if slack_p.is_zero() {
            continue; // p on the facet: no cap from it
        }
        let slack_x = &f.offset - dot(&f.normal, x);
        let bound = slack_x / slack_p;
        if bound < exact_min {
            exact_min = bound;
        }
    }
    let Body::Cap(cap) = body else {
        return Ok(Value::Exact(exact_min));
    };
    // (x - t p)^T Q (x - t p) + (1 - t) L.(x - t p) + c (1 - t)^2 >= 0
    let qp: Vec<Rat> = (0..2)
        .map(|i| &cap.q[i][0] * &p[0] + &cap.q[i][1] * &p[1])
        .collect();
    let c0 = cap.quad_value(x);
    let c2 = cap.quad_value(p);
    let c1 = rat(-2) * dot(x, &qp) - dot(&cap.l, p) - dot(&cap.l, x) - rat(2) * &cap.c;
    debug_assert!(!c0.is_negative() && !c2.is_negative());

    let quad_sup: Value = if c0.is_zero() {
        // poly(t) = t (c1 + c2 t) with c2 >= 0
        if c1.is_negative() {
            Value::Exact(Rat::zero())
        } else {
            Value::Exact(Rat::one())
        }
    } else if c2.is_zero() {
        if c1.is_negative() {
            let r = -&c0 / &c1;
            Value::Exact(if r < Rat::one() { r } else { Rat::one() })
        } else {
            Value::Exact(Rat::one())
        }
    } else {
        // parabola opening up, poly(0) > 0 > poly(1): unique root in (0,1)
        let disc = &c1 * &c1 - rat(4) * &c0 * &c2;
        debug_assert!(disc.is_positive());
        match rational_sqrt(&disc) {
            Some(s) => Value::Exact((-&c1 - s) / (rat(2) * &c2)),
            None => {
                let poly = |t: &Rat| -> Rat { &c0 + &c1 * t + &c2 * (t * t) };
                let mut lo = Rat::zero();
                let mut hi = Rat::one();
                let width_goal = Rat::new(BigInt::one(), BigInt::one() << bits);
                while &hi - &lo > width_goal {
                    let mid = (&lo + &hi) / rat(2);
                    if poly(&mid).is_negative() {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Value::Bracket { lo, hi }
            }
        }
    };
    Ok(match quad_sup {
        Value::Exact(q) => Value::Exact(q.min(exact_min)),
        Value::Bracket { lo, hi } => {
            if hi <= exact_min {
                Value::Bracket { lo, hi }
            } else if lo >= exact_min {
                Value::Exact(exact_min)
            } else {
                Value::Bracket { lo, hi: exact_min }
            }
        }
    })
}

/// True iff a neighborhood of the boundary point p in the body coincides
/// with p + a convex cone. Polytopes are locally cones everywhere; a cap
/// body fails exactly on the strictly curved active arc.
pub fn is_locally_cone(body: &Body, p: &[Rat]) -> Result<bool, CoreError> {
    if !body.on_boundary(p) {
        return Err(CoreError::NotOnBoundary);
    }
    match body {
        Body::Poly(_) => Ok(true),
        Body::Cap(cap) => {
            if !cap.quad_value(p).is_zero() {
                return Ok(true);
            }
            let g = cap.quad_gradient(p);
            let tangent = vec![-g[1].clone(), g[0].clone()];
            let qt: Vec<Rat> = (0..2)
                .map(|i| &cap.q[i][0] * &tangent[0] + &cap.q[i][1] * &tangent[1])
                .collect();
            Ok(dot(&tangent, &qt).is_zero())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratq;

    fn pt(x: i64, y: i64) -> Point {
        point2(rat(x), rat(y))
    }

    fn ptq(x: (i64, i64), y: (i64, i64)) -> Point {
        point2(ratq(x.0, x.1), ratq(y.0, y.1))
    }

    #[test]
    fn hull_absorbs_interior_and_edge_points() {
        let pts = vec![pt(0, 0), pt(2, 0), pt(0, 2), pt(1, 1), pt(1, 0)];
        let h = convex_hull(&pts, 2);
        assert_eq!(h.affine_dim, 2);
        let expect: BTreeSet<Point> = [pt(0, 0), pt(2, 0), pt(0, 2)].into_iter().collect();
        assert_eq!(h.vertex_set(), expect);
        assert_eq!(h.measure(), rat(2));
    }

    #[test]
    fn hull_single_point() {
        let h = convex_hull(&[pt(3, 4)], 2);
        assert_eq!(h.affine_dim, 0);
        assert_eq!(h.vertices.len(), 1);
    }

    #[test]
    fn hull_collinear() {
        let h = convex_hull(&[pt(0, 0), pt(1, 1), pt(3, 3), pt(2, 2)], 2);
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.vertices, vec![pt(0, 0), pt(3, 3)]);
        assert!(h.contains(&pt(2, 2)));
        assert!(!h.contains(&pt(1, 2)));
    }

    #[test]
    fn hull_idempotent() {
        let pts = vec![pt(0, 0), pt(4, 0), pt(4, 3), pt(0, 3), pt(2, 1), pt(1, 1)];
        let h = convex_hull(&pts, 2);
        let h2 = convex_hull(&h.vertices, 2);
        assert_eq!(h.vertex_set(), h2.vertex_set());
    }

    #[test]
    fn hull_3d_cube() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(vec![rat(x), rat(y), rat(z)]);
                }
            }
        }
        pts.push(vec![ratq(1, 2), ratq(1, 2), ratq(1, 2)]); // interior
        let h = convex_hull(&pts, 3);
        assert_eq!(h.affine_dim, 3);
        assert_eq!(h.vertices.len(), 8);
        assert!(h.contains(&vec![ratq(1, 2), ratq(1, 2), ratq(1, 2)]));
        assert!(!h.contains(&vec![rat(2), rat(0), rat(0)]));
        // idempotent
        let h2 = convex_hull(&h.vertices, 3);
        assert_eq!(h.vertex_set(), h2.vertex_set());
    }

    #[test]
    fn hull_3d_simplex_with_face_points() {
        let pts = vec![
            vec![rat(0), rat(0), rat(0)],
            vec![rat(2), rat(0), rat(0)],
            vec![rat(0), rat(2), rat(0)],
            vec![rat(0), rat(0), rat(2)],
            vec![ratq(1, 2), ratq(1, 2), rat(0)],  // on bottom face
            vec![ratq(2, 3), ratq(2, 3), ratq(2, 3)], // on slanted face
        ];
        let h = convex_hull(&pts, 3);
        assert_eq!(h.vertices.len(), 4);
    }

    fn env(samples: Vec<(Point, (i64, i64))>, domain: &Polytope) -> ConcavePL {
        let s: Vec<(Point, Rat)> = samples
            .into_iter()
            .map(|(p, (n, d))| (p, ratq(n, d)))
            .collect();
        concave_envelope(&s, domain).unwrap()
    }

    #[test]
    fn envelope_affine_data_1d() {
        let domain = Polytope::segment(rat(0), rat(1));
        let f = env(vec![(vec![rat(0)], (0, 1)), (vec![rat(1)], (1, 1))], &domain);
        assert_eq!(f.eval(&[ratq(1, 3)]).unwrap(), ratq(1, 3));
        assert_eq!(f.integrate(), ratq(1, 2));
    }

    #[test]
    fn envelope_tent() {
        // Oracle (brute-force hull of the 3 hypograph points): the envelope of
        // a single sample (1, 3) over [0, 2] is the tent through (0,0), (1,3),
        // (2,0).
        let domain = Polytope::segment(rat(0), rat(2));
        let f = env(vec![(vec![rat(1)], (3, 1))], &domain);
        assert_eq!(f.eval(&[rat(0)]).unwrap(), rat(0));
        assert_eq!(f.eval(&[rat(1)]).unwrap(), rat(3));
        assert_eq!(f.eval(&[rat(2)]).unwrap(), rat(0));
        assert_eq!(f.eval(&[ratq(1, 2)]).unwrap(), ratq(3, 2));
        assert_eq!(f.eval(&[ratq(3, 2)]).unwrap(), ratq(3, 2));
    }

    #[test]
    fn envelope_plane_on_triangle() {
        // samples (a, b) -> a + b on the 1/3-grid of the unit triangle
        let domain = convex_hull(&[pt(0, 0), pt(1, 0), pt(0, 1)], 2);
        let mut samples = Vec::new();
        for i in 0..=3i64 {
            for j in 0..=(3 - i) {
                samples.push((ptq((i, 3), (j, 3)), Rat::new(BigInt::from(i + j), BigInt::from(3))));
            }
        }
        let f = concave_envelope(&samples, &domain).unwrap();
        for (p, v) in &samples {
            assert_eq!(&f.eval(p).unwrap(), v);
        }
        assert_eq!(f.eval(&ptq((1, 5), (1, 7))).unwrap(), ratq(1, 5) + ratq(1, 7));
        // integral of a+b over the unit triangle
        assert_eq!(f.integrate(), ratq(1, 3));
    }

    #[test]
    fn envelope_dominates_and_matches_caratheodory_oracle() {
        // Independent oracle: the concave envelope value at x is the best
        // convex combination of at most three lifted points hitting x.
        let domain = convex_hull(&[pt(0, 0), pt(2, 0), pt(0, 2)], 2);
        let samples = vec![
            (pt(1, 0), rat(2)),
            (ptq((1, 2), (1, 2)), rat(1)),
            (pt(0, 1), rat(1)),
            (ptq((1, 4), (1, 4)), rat(3)),
        ];
        let f = concave_envelope(&samples, &domain).unwrap();
        let mut lifted: Vec<(Point, Rat)> = samples.clone();
        for v in &domain.vertices {
            lifted.push((v.clone(), rat(0)));
        }
        let oracle = |x: &Point| -> Rat {
            let mut best = Rat::zero();
            let n = lifted.len();
            for i in 0..n {
                if &lifted[i].0 == x && lifted[i].1 > best {
                    best = lifted[i].1.clone();
                }
                for j in i + 1..n {
                    for k in j + 1..n {
                        let (a, b, c) = (&lifted[i], &lifted[j], &lifted[k]);
                        let det = orient2d(&a.0, &b.0, &c.0);
                        if det.is_zero() {
                            continue;
                        }
                        let w_a = orient2d(x, &b.0, &c.0) / &det;
                        let w_b = orient2d(&a.0, x, &c.0) / &det;
                        let w_c = Rat::one() - &w_a - &w_b;
                        if w_a.is_negative() || w_b.is_negative() || w_c.is_negative() {
                            continue;
                        }
                        let v = w_a * &a.1 + w_b * &b.1 + w_c * &c.1;
                        if v > best {
                            best = v;
                        }
                    }
                }
            }
            best
        };
        for (p, v) in &samples {
            let fv = f.eval(p).unwrap();
            assert!(&fv >= v);
            assert_eq!(fv, oracle(p));
        }
        for x in [pt(0, 0), ptq((1, 2), (1, 4)), ptq((3, 4), (3, 4)), pt(1, 1)] {
            assert_eq!(f.eval(&x).unwrap(), oracle(&x));
        }
    }

    #[test]
    fn envelope_rejects_outside_sample() {
        let domain = Polytope::segment(rat(0), rat(1));
        let r = concave_envelope(&[(vec![rat(2)], rat(1))], &domain);
        assert!(matches!(r, Err(CoreError::PointOutsideDomain(_))));
    }

    #[test]
    fn integrate_one_minus_a_on_triangle() {
        // f(a,b) = 1-a on the unit triangle integrates to 1/3; independent
        // centroid-rule oracle on the fan triangulation agrees.
        let domain = convex_hull(&[pt(0, 0), pt(1, 0), pt(0, 1)], 2);
        let samples = vec![
            (pt(0, 0), rat(1)),
            (pt(0, 1), rat(1)),
            (pt(1, 0), rat(0)),
        ];
        let f = concave_envelope(&samples, &domain).unwrap();
        assert_eq!(f.integrate(), ratq(1, 3));
        // centroid rule: integral of an affine g over triangle T is
        // area(T) * g(centroid)
        let mut total = Rat::zero();
        for piece in &f.pieces {
            let v = &piece.cell.vertices;
            for i in 1..v.len() - 1 {
                let area = orient2d(&v[0], &v[i], &v[i + 1]) / rat(2);
                let cx = (&v[0][0] + &v[i][0] + &v[i + 1][0]) / rat(3);
                let cy = (&v[0][1] + &v[i][1] + &v[i + 1][1]) / rat(3);
                total += area * piece.value(&[cx, cy]);
            }
        }
        assert_eq!(total, ratq(1, 3));
    }

    #[test]
    fn homothety_on_segment() {
        // body [0,2], p = 0, x = 1: 1 in [0, 2(1-t)] iff t <= 1/2
        let body = Body::Poly(Polytope::segment(rat(0), rat(2)));
        let v = homothety_sup(&body, &[rat(0)], &[rat(1)], DEFAULT_BRACKET_BITS).unwrap();
        assert!(v.is_exactly(&ratq(1, 2)));
        let v = homothety_sup(&body, &[rat(0)], &[rat(0)], DEFAULT_BRACKET_BITS).unwrap();
        assert!(v.is_exactly(&rat(1)));
    }

    #[test]
    fn homothety_on_cap_arc() {
        let cap = QuadraticCapBody::unit_disk_cap();
        let body = Body::Cap(cap);
        // p = (1,0), x = another arc point (3/5, 4/5): sup is exactly 0
        let p = pt(1, 0);
        let x = ptq((3, 5), (4, 5));
        assert!(body.on_boundary(&x));
        let v = homothety_sup(&body, &p, &x, DEFAULT_BRACKET_BITS).unwrap();
        assert!(v.is_exactly(&rat(0)));
        // the center itself
        let v = homothety_sup(&body, &p, &p, DEFAULT_BRACKET_BITS).unwrap();
        assert!(v.is_exactly(&rat(1)));
    }

    #[test]
    fn homothety_interior_point_of_cap() {
        let body = Body::Cap(QuadraticCapBody::unit_disk_cap());
        let p = pt(1, 0);
        let x = ptq((1, 2), (0, 1));
        let v = homothety_sup(&body, &p, &x, DEFAULT_BRACKET_BITS).unwrap();
        // x = (1/2, 0): y(t) = (x - t)/(1-t) stays on the segment [0,1] x {0};
        // the quadratic leaves when y = 0... actually y(t) of first coord:
        // (1/2 - t)/(1 - t) >= 0 iff t <= 1/2; quadratic holds inside.
        assert!(v.is_exactly(&ratq(1, 2)));
    }

    #[test]
    fn locally_cone_polytope_everywhere() {
        let square = convex_hull(&[pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)], 2);
        let body = Body::Poly(square);
        assert!(is_locally_cone(&body, &pt(0, 0)).unwrap());
        assert!(is_locally_cone(&body, &ptq((1, 2), (0, 1))).unwrap());
        assert!(is_locally_cone(&body, &ptq((1, 2), (1, 2))).is_err());
    }

    #[test]
    fn locally_cone_cap_fails_on_arc() {
        let body = Body::Cap(QuadraticCapBody::unit_disk_cap());
        assert!(!is_locally_cone(&body, &pt(1, 0)).unwrap());
        assert!(!is_locally_cone(&body, &ptq((3, 5), (4, 5))).unwrap());
        // flat part of the boundary
        assert!(is_locally_cone(&body, &ptq((1, 2), (0, 1))).unwrap());
    }

    #[test]
    fn bracket_width_for_irrational_root() {
        // p strictly inside the arc region: root is irrational, bracket tight
        let body = Body::Cap(QuadraticCapBody::unit_disk_cap());
        let p = pt(0, 0);
        let x = ptq((1, 3), (1, 3));
        match homothety_sup(&body, &p, &x, 20).unwrap() {
            Value::Exact(_) => {} // fine if it happens to be rational
            Value::Bracket { lo, hi } => {
                assert!(&hi - &lo <= Rat::new(BigInt::one(), BigInt::one() << 20));
                // t* solves |x|/(1-t) = 1 => t = 1 - |x| = 1 - sqrt(2)/3
                // which is irrational, so a bracket is expected
                assert!(lo < hi);
            }
        }
    }
}
