//! Finite abstract simplicial complexes and their simplicial cohomology.
//!
//! Simplices are strictly increasing vertex index tuples, stored per
//! dimension in lexicographic order, so a simplex is addressed by the pair
//! (dimension, index) everywhere in the crate. Cohomology is ordered
//! simplicial cohomology with the Alexander-Whitney cup product.

use crate::algebra::{FieldSpec, Matrix, Scalar, Solver};
use crate::cuplength::GradedRing;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("complex must have at least one vertex")]
    Empty,
    #[error("vertex labels must be distinct non-empty tokens without whitespace; offender: {0:?}")]
    BadLabel(String),
    #[error("simplex {0:?} references vertex index {1} out of range")]
    VertexOutOfRange(Vec<usize>, usize),
    #[error("simplex {0:?} repeats a vertex")]
    DegenerateSimplex(Vec<usize>),
    #[error("cochain degree {0} does not match expected {1}")]
    DegreeMismatch(usize, usize),
}

/// Abstract simplicial complex on an ordered, labeled vertex set.
///
/// Every declared vertex is a 0-simplex of the complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    /// simplices[d] lists the d-simplices as strictly increasing tuples,
    /// sorted lexicographically.
    simplices: Vec<Vec<Vec<usize>>>,
}

fn validate_labels(labels: &[String]) -> Result<(), ComplexError> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if l.is_empty() || l.chars().any(|c| c.is_whitespace() || c == '#') {
            return Err(ComplexError::BadLabel(l.clone()));
        }
        if !seen.insert(l) {
            return Err(ComplexError::BadLabel(l.clone()));
        }
    }
    Ok(())
}

impl SimplicialComplex {
    /// Builds the downward closure of the given maximal simplices. Tuples may
    /// be unsorted and may include redundant faces; vertices not mentioned in
    /// any tuple still enter as isolated points.
    pub fn from_maximal(
        labels: Vec<String>,
        maximal: &[Vec<usize>],
    ) -> Result<Self, ComplexError> {
        if labels.is_empty() {
            return Err(ComplexError::Empty);
        }
        validate_labels(&labels)?;
        let n = labels.len();
        let mut normalized = Vec::with_capacity(maximal.len());
        for tuple in maximal {
            let mut t = tuple.clone();
            for &v in &t {
                if v >= n {
                    return Err(ComplexError::VertexOutOfRange(tuple.clone(), v));
                }
            }
            t.sort_unstable();
            t.dedup();
            if t.len() != tuple.len() {
                return Err(ComplexError::DegenerateSimplex(tuple.clone()));
            }
            normalized.push(t);
        }
        Ok(Self::from_simplex_sets(labels, normalized))
    }

    /// Internal constructor from arbitrary (sorted, distinct-vertex) tuples.
    /// Completes the downward closure, adds all vertices, sorts and dedups.
    pub(crate) fn from_simplex_sets(labels: Vec<String>, tuples: Vec<Vec<usize>>) -> Self {
        let n = labels.len();
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        let push = |by_dim: &mut Vec<BTreeSet<Vec<usize>>>, t: Vec<usize>| {
            let d = t.len() - 1;
            while by_dim.len() <= d {
                by_dim.push(BTreeSet::new());
            }
            by_dim[d].insert(t);
        };
        for v in 0..n {
            push(&mut by_dim, vec![v]);
        }
        for t in tuples {
            debug_assert!(t.windows(2).all(|w| w[0] < w[1]));
            // All non-empty subsets of t, as the closure of a single simplex.
            let card = t.len();
            for mask in 1u32..(1 << card) {
                let face: Vec<usize> =
                    (0..card).filter(|i| mask >> i & 1 == 1).map(|i| t[i]).collect();
                push(&mut by_dim, face);
            }
        }
        let simplices = by_dim.into_iter().map(|set| set.into_iter().collect()).collect();
        SimplicialComplex { labels, simplices }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    /// The d-simplices; empty above the dimension.
    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn simplex_count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    /// Index of a sorted tuple among the d-simplices.
    pub fn simplex_index(&self, d: usize, tuple: &[usize]) -> Option<usize> {
        self.simplices(d).binary_search_by(|s| s.as_slice().cmp(tuple)).ok()
    }

    pub fn is_simplex(&self, tuple: &[usize]) -> bool {
        !tuple.is_empty() && self.simplex_index(tuple.len() - 1, tuple).is_some()
    }

    /// Simplices that are not a proper face of another simplex.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for d in 0..=self.dim() {
            for s in self.simplices(d) {
                let covered = self.simplices(d + 1).iter().any(|t| is_subset(s, t));
                if !covered {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim())
            .map(|d| {
                let c = self.simplex_count(d) as i64;
                if d % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Number of connected components of the 1-skeleton.
    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a] = b;
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect::<BTreeSet<_>>().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Coboundary matrix from degree d to d+1: rows index (d+1)-simplices,
    /// columns index d-simplices, entry (t, s) = (-1)^i when s is the i-th
    /// face of t.
    pub fn coboundary(&self, d: usize, f: FieldSpec) -> Matrix {
        let rows = self.simplex_count(d + 1);
        let cols = self.simplex_count(d);
        let mut m = Matrix::zero(rows, cols, f);
        for (r, t) in self.simplices(d + 1).iter().enumerate() {
            for i in 0..t.len() {
                let mut face = t.clone();
                face.remove(i);
                let c = self
                    .simplex_index(d, &face)
                    .expect("faces of a simplex belong to the complex");
                m.set(r, c, f.from_i64(if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        m
    }

    /// Betti numbers over f in degrees 0..=dim.
    pub fn betti_numbers(&self, f: FieldSpec) -> Vec<usize> {
        let dim = self.dim();
        let mut ranks = Vec::with_capacity(dim + 1);
        for d in 0..=dim {
            ranks.push(self.coboundary(d, f).rank(f));
        }
        (0..=dim)
            .map(|d| {
                let cocycles = self.simplex_count(d) - ranks[d];
                let coboundaries = if d == 0 { 0 } else { ranks[d - 1] };
                cocycles - coboundaries
            })
            .collect()
    }

    /// Alexander-Whitney cup product of cochains of degrees p and q:
    /// (x cup y)([v0..v_{p+q}]) = x([v0..vp]) * y([vp..v_{p+q}]).
    /// Degrees beyond the dimension give the zero cochain.
    pub fn cup_product(&self, x: &Cochain, y: &Cochain, f: FieldSpec) -> Cochain {
        assert_eq!(x.coeffs.len(), self.simplex_count(x.degree), "x does not fit this complex");
        assert_eq!(y.coeffs.len(), self.simplex_count(y.degree), "y does not fit this complex");
        let (p, q) = (x.degree, y.degree);
        let deg = p + q;
        let mut coeffs = Vec::with_capacity(self.simplex_count(deg));
        for s in self.simplices(deg) {
            let front = &s[..=p];
            let back = &s[p..];
            let xi = self.simplex_index(p, front).expect("front face present");
            let yi = self.simplex_index(q, back).expect("back face present");
            coeffs.push(f.mul(&x.coeffs[xi], &y.coeffs[yi]));
        }
        Cochain { degree: deg, coeffs }
    }

    /// Applies the coboundary to a cochain.
    pub fn coboundary_of(&self, x: &Cochain, f: FieldSpec) -> Cochain {
        let m = self.coboundary(x.degree, f);
        Cochain { degree: x.degree + 1, coeffs: m.apply(&x.coeffs, f) }
    }

    /// Full cohomology ring over f: per-degree class bases with cocycle
    /// representatives, and all structure constants.
    pub fn cohomology_ring(&self, f: FieldSpec) -> CohomologyRing {
        let dim = self.dim();
        let mut degrees: Vec<DegreeData> = Vec::with_capacity(dim + 1);
        for d in 0..=dim {
            let cocycles = self.coboundary(d, f).kernel_basis(f);
            let coboundaries: Vec<Vec<Scalar>> = if d == 0 {
                Vec::new()
            } else {
                let delta = self.coboundary(d - 1, f);
                let ech = delta.transpose().rref(f);
                (0..ech.rank()).map(|r| ech.matrix.row(r).to_vec()).collect()
            };
            // Representatives: cocycles completing the coboundary basis,
            // chosen by echelon insertion so the pick is deterministic.
            let mut span = crate::algebra::RowSpace::new(self.simplex_count(d), f);
            for b in &coboundaries {
                span.insert(b);
            }
            let mut reps = Vec::new();
            for z in &cocycles {
                if span.insert(z) {
                    reps.push(Cochain { degree: d, coeffs: z.clone() });
                }
            }
            // One solver per degree answers "coordinates of this cocycle in
            // the chosen basis modulo coboundaries".
            let n = self.simplex_count(d);
            let mut b = Matrix::zero(n, reps.len() + coboundaries.len(), f);
            for (j, rep) in reps.iter().enumerate() {
                for i in 0..n {
                    b.set(i, j, rep.coeffs[i].clone());
                }
            }
            for (j, cb) in coboundaries.iter().enumerate() {
                for i in 0..n {
                    b.set(i, reps.len() + j, cb[i].clone());
                }
            }
            let solver = Solver::new(&b, f);
            degrees.push(DegreeData { reps, solver });
        }

        let dims: Vec<usize> = degrees.iter().map(|dd| dd.reps.len()).collect();
        let mut ring = GradedRing::new(f, dims.clone());
        for d1 in 0..=dim {
            for d2 in 0..=dim - d1 {
                for i in 0..dims[d1] {
                    for j in 0..dims[d2] {
                        let cup = self.cup_product(
                            &degrees[d1].reps[i],
                            &degrees[d2].reps[j],
                            f,
                        );
                        let coords = degrees[d1 + d2]
                            .class_coordinates(&cup)
                            .expect("cup of cocycles is a cocycle");
                        ring.set_product(d1, i, d2, j, coords);
                    }
                }
            }
        }
        let unit_cochain = Cochain {
            degree: 0,
            coeffs: vec![f.one(); self.simplex_count(0)],
        };
        let unit = degrees[0]
            .class_coordinates(&unit_cochain)
            .expect("the all-ones cochain is a cocycle");
        ring.set_unit(unit);
        CohomologyRing { field: f, ring, degrees }
    }

    /// Barycentric subdivision. The new vertex set is the set of simplices of
    /// self ordered by (dimension, index); the new simplices are the chains
    /// of proper inclusions.
    pub fn barycentric_subdivision(&self) -> Subdivision {
        let dim = self.dim();
        let mut base = vec![0usize; dim + 2];
        for d in 0..=dim {
            base[d + 1] = base[d] + self.simplex_count(d);
        }
        let id_of = |d: usize, idx: usize| base[d] + idx;
        let mut vertex_origin = Vec::with_capacity(base[dim + 1]);
        let mut labels = Vec::with_capacity(base[dim + 1]);
        for d in 0..=dim {
            for (idx, s) in self.simplices(d).iter().enumerate() {
                vertex_origin.push((d, idx));
                let name: Vec<&str> = s.iter().map(|&v| self.label(v)).collect();
                labels.push(format!("b({})", name.join(",")));
            }
        }
        // chains[id] = all inclusion chains ending at the simplex `id`,
        // as increasing vertex-id tuples. Proper faces have smaller ids.
        let total = base[dim + 1];
        let mut chains: Vec<Vec<Vec<usize>>> = vec![Vec::new(); total];
        let mut all = Vec::new();
        for d in 0..=dim {
            for (idx, s) in self.simplices(d).iter().enumerate() {
                let id = id_of(d, idx);
                let mut ending = vec![vec![id]];
                let card = s.len();
                for mask in 1u32..(1 << card) {
                    if mask == (1 << card) - 1 {
                        continue;
                    }
                    let face: Vec<usize> =
                        (0..card).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                    let fid = id_of(face.len() - 1, self.simplex_index(face.len() - 1, &face).unwrap());
                    for c in &chains[fid] {
                        let mut ext = c.clone();
                        ext.push(id);
                        ending.push(ext);
                    }
                }
                all.extend(ending.iter().cloned());
                chains[id] = ending;
            }
        }
        let complex = SimplicialComplex::from_simplex_sets(labels, all);
        Subdivision { complex, vertex_origin }
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Barycentric subdivision with provenance: new vertex index -> (dimension,
/// index) of the original simplex it is the barycenter of.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    pub vertex_origin: Vec<(usize, usize)>,
}

/// A cochain in one degree; coefficient i belongs to the i-th d-simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    pub degree: usize,
    pub coeffs: Vec<Scalar>,
}

impl Cochain {
    pub fn zero(c: &SimplicialComplex, degree: usize, f: FieldSpec) -> Self {
        Cochain { degree, coeffs: vec![f.zero(); c.simplex_count(degree)] }
    }

    pub fn is_zero(&self, f: FieldSpec) -> bool {
        self.coeffs.iter().all(|e| f.is_zero(e))
    }

    pub fn add(&self, other: &Cochain, f: FieldSpec) -> Cochain {
        assert_eq!(self.degree, other.degree);
        Cochain {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, by: &Scalar, f: FieldSpec) -> Cochain {
        Cochain {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| f.mul(a, by)).collect(),
        }
    }
}

#[derive(Debug, Clone)]
struct DegreeData {
    reps: Vec<Cochain>,
    solver: Solver,
}

impl DegreeData {
    /// Coordinates of a cocycle in the representative basis, modulo
    /// coboundaries. None when the cochain is not a cocycle of this span.
    fn class_coordinates(&self, z: &Cochain) -> Option<Vec<Scalar>> {
        let sol = self.solver.solve(&z.coeffs)?;
        Some(sol[..self.reps.len()].to_vec())
    }
}

/// Cohomology of a fixed complex: the abstract graded ring plus enough data
/// to express new cocycles in the chosen basis.
#[derive(Debug, Clone)]
pub struct CohomologyRing {
    pub field: FieldSpec,
    pub ring: GradedRing,
    degrees: Vec<DegreeData>,
}

impl CohomologyRing {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.reps.len()).collect()
    }

    pub fn representative(&self, degree: usize, index: usize) -> &Cochain {
        &self.degrees[degree].reps[index]
    }

    pub fn representatives(&self, degree: usize) -> &[Cochain] {
        &self.degrees[degree].reps
    }

    /// Coordinates of a cocycle's class in the degree basis; None if the
    /// input is not in the cocycle-plus-coboundary span (i.e. not a cocycle).
    pub fn class_coordinates(&self, z: &Cochain) -> Option<Vec<Scalar>> {
        self.degrees.get(z.degree)?.class_coordinates(z)
    }
}

/// Product complex with the staircase triangulation and the two projections.
#[derive(Debug, Clone)]
pub struct ProductComplex {
    pub complex: SimplicialComplex,
    /// Product vertex -> vertex of the left factor.
    pub proj_left: Vec<usize>,
    /// Product vertex -> vertex of the right factor.
    pub proj_right: Vec<usize>,
}

/// Staircase (ordered-product) triangulation of |a| x |b|. Product vertices
/// are pairs ordered lexicographically; each pair of maximal simplices
/// contributes one top simplex per monotone lattice path.
pub fn product_complex(a: &SimplicialComplex, b: &SimplicialComplex) -> ProductComplex {
    let bn = b.vertex_count();
    let pair_id = |va: usize, vb: usize| va * bn + vb;
    let mut labels = Vec::with_capacity(a.vertex_count() * bn);
    let mut proj_left = Vec::with_capacity(labels.capacity());
    let mut proj_right = Vec::with_capacity(labels.capacity());
    for va in 0..a.vertex_count() {
        for vb in 0..bn {
            labels.push(format!("({},{})", a.label(va), b.label(vb)));
            proj_left.push(va);
            proj_right.push(vb);
        }
    }
    let mut tuples = Vec::new();
    for s in a.maximal_simplices() {
        for t in b.maximal_simplices() {
            staircases(&s, &t, &mut |path| {
                tuples.push(path.iter().map(|&(i, j)| pair_id(s[i], t[j])).collect());
            });
        }
    }
    let complex = SimplicialComplex::from_simplex_sets(labels, tuples);
    ProductComplex { complex, proj_left, proj_right }
}

/// Enumerates monotone lattice paths from (0,0) to (p,q) as index pairs.
fn staircases(s: &[usize], t: &[usize], emit: &mut impl FnMut(&[(usize, usize)])) {
    let (p, q) = (s.len() - 1, t.len() - 1);
    let mut path = vec![(0usize, 0usize)];
    fn rec(
        p: usize,
        q: usize,
        path: &mut Vec<(usize, usize)>,
        emit: &mut impl FnMut(&[(usize, usize)]),
    ) {
        let &(i, j) = path.last().unwrap();
        if i == p && j == q {
            emit(path);
            return;
        }
        if i < p {
            path.push((i + 1, j));
            rec(p, q, path, emit);
            path.pop();
        }
        if j < q {
            path.push((i, j + 1));
            rec(p, q, path, emit);
            path.pop();
        }
    }
    rec(p, q, &mut path, emit);
}
