//! Finite groups acting simplicially on complexes: validation, regularity,
//! orbit complexes, fixed subcomplexes, the saturated diagonal, and the
//! induced action on cohomology.

use crate::algebra::{FieldSpec, Matrix};
use crate::complex::{Cochain, SimplicialComplex};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("multiplication table is not a group: {0}")]
    BadGroup(String),
    #[error("expected {expected} vertex maps, found {found}")]
    WrongMapCount { expected: usize, found: usize },
    #[error("vertex map for element {0} is not a permutation of the vertices")]
    NotPermutation(usize),
    #[error("identity element does not act as the identity map")]
    IdentityMoves,
    #[error("vertex maps do not compose along the multiplication table")]
    NotHomomorphism,
    #[error("element {element} is not simplicial: image of {simplex:?} is not a simplex")]
    NotSimplicial { element: usize, simplex: Vec<usize> },
    #[error("action is not regular; subdivide first")]
    NotRegular,
    #[error("action is still not regular after {0} barycentric subdivisions")]
    StillIrregular(usize),
}

/// Finite group given by its multiplication table. Element 0 is the
/// identity; `table[g][h]` is the product g h.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, ActionError> {
        let n = names.len();
        if n == 0 {
            return Err(ActionError::BadGroup("empty element list".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(ActionError::BadGroup(format!("table is not {n} x {n}")));
        }
        if table.iter().flatten().any(|&e| e >= n) {
            return Err(ActionError::BadGroup("entry out of range".into()));
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(ActionError::BadGroup("element 0 is not an identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(ActionError::BadGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
                Some(h) => inverses[g] = h,
                None => {
                    return Err(ActionError::BadGroup(format!("element {g} has no inverse")))
                }
            }
        }
        Ok(FiniteGroup { names, table, inverses })
    }

    pub fn trivial() -> Self {
        FiniteGroup::new(vec!["e".into()], vec![vec![0]]).unwrap()
    }

    pub fn cyclic(order: usize) -> Self {
        assert!(order >= 1);
        let names = (0..order)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let table = (0..order).map(|a| (0..order).map(|b| (a + b) % order).collect()).collect();
        FiniteGroup::new(names, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// Simplicial action of a finite group: one vertex permutation per element,
/// compatible with the multiplication table and carrying simplices to
/// simplices.
#[derive(Debug, Clone)]
pub struct SimplicialAction {
    complex: SimplicialComplex,
    group: FiniteGroup,
    vertex_maps: Vec<Vec<usize>>,
}

impl SimplicialAction {
    pub fn new(
        complex: SimplicialComplex,
        group: FiniteGroup,
        vertex_maps: Vec<Vec<usize>>,
    ) -> Result<Self, ActionError> {
        let n = complex.vertex_count();
        if vertex_maps.len() != group.order() {
            return Err(ActionError::WrongMapCount {
                expected: group.order(),
                found: vertex_maps.len(),
            });
        }
        for (g, m) in vertex_maps.iter().enumerate() {
            if m.len() != n {
                return Err(ActionError::NotPermutation(g));
            }
            let mut seen = vec![false; n];
            for &v in m {
                if v >= n || seen[v] {
                    return Err(ActionError::NotPermutation(g));
                }
                seen[v] = true;
            }
        }
        if vertex_maps[0].iter().enumerate().any(|(v, &w)| v != w) {
            return Err(ActionError::IdentityMoves);
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                for v in 0..n {
                    if vertex_maps[gh][v] != vertex_maps[g][vertex_maps[h][v]] {
                        return Err(ActionError::NotHomomorphism);
                    }
                }
            }
        }
        let action = SimplicialAction { complex, group, vertex_maps };
        for g in 0..action.group.order() {
            for d in 1..=action.complex.dim() {
                for s in action.complex.simplices(d) {
                    let image = action.apply_simplex(g, s);
                    if !action.complex.is_simplex(&image) {
                        return Err(ActionError::NotSimplicial { element: g, simplex: s.clone() });
                    }
                }
            }
        }
        Ok(action)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn vertex_map(&self, g: usize) -> &[usize] {
        &self.vertex_maps[g]
    }

    pub fn apply_vertex(&self, g: usize, v: usize) -> usize {
        self.vertex_maps[g][v]
    }

    /// Image of a simplex as a sorted tuple.
    pub fn apply_simplex(&self, g: usize, s: &[usize]) -> Vec<usize> {
        let mut image: Vec<usize> = s.iter().map(|&v| self.vertex_maps[g][v]).collect();
        image.sort_unstable();
        image
    }

    /// Vertex -> orbit id, with orbits numbered by their smallest member.
    pub fn vertex_orbits(&self) -> Vec<usize> {
        let n = self.complex.vertex_count();
        let mut orbit = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if orbit[v] != usize::MAX {
                continue;
            }
            for g in 0..self.group.order() {
                orbit[self.vertex_maps[g][v]] = next;
            }
            next += 1;
        }
        orbit
    }

    /// True when only the identity fixes any simplex, even setwise.
    pub fn is_free(&self) -> bool {
        for g in 1..self.group.order() {
            if self.vertex_maps[g].iter().enumerate().any(|(v, &w)| v == w) {
                return false;
            }
            for d in 1..=self.complex.dim() {
                for s in self.complex.simplices(d) {
                    if self.apply_simplex(g, s) == *s {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Regularity in the sense required for the orbit complex to compute the
    /// quotient: (a) no simplex meets an orbit twice, and (b) simplices with
    /// the same vertex-orbit set all lie in one orbit of simplices.
    pub fn is_regular(&self) -> bool {
        let orbit = self.vertex_orbits();
        for d in 1..=self.complex.dim() {
            for s in self.complex.simplices(d) {
                let mut key: Vec<usize> = s.iter().map(|&v| orbit[v]).collect();
                key.sort_unstable();
                key.dedup();
                if key.len() != s.len() {
                    return false;
                }
            }
        }
        for d in 1..=self.complex.dim() {
            let count = self.complex.simplex_count(d);
            let mut simplex_orbit = vec![usize::MAX; count];
            let mut next = 0;
            for idx in 0..count {
                if simplex_orbit[idx] != usize::MAX {
                    continue;
                }
                for g in 0..self.group.order() {
                    let image = self.apply_simplex(g, &self.complex.simplices(d)[idx]);
                    let j = self.complex.simplex_index(d, &image).unwrap();
                    simplex_orbit[j] = next;
                }
                next += 1;
            }
            let mut by_key: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for (idx, s) in self.complex.simplices(d).iter().enumerate() {
                let mut key: Vec<usize> = s.iter().map(|&v| orbit[v]).collect();
                key.sort_unstable();
                match by_key.get(&key) {
                    Some(&o) if o != simplex_orbit[idx] => return false,
                    Some(_) => {}
                    None => {
                        by_key.insert(key, simplex_orbit[idx]);
                    }
                }
            }
        }
        true
    }
}

/// A regular action reached by barycentric subdivision, with the number of
/// subdivisions that were applied.
#[derive(Debug, Clone)]
pub struct Regularized {
    pub action: SimplicialAction,
    pub subdivisions: usize,
}

/// Subdivides until the action is regular. Two barycentric subdivisions
/// always suffice for a simplicial action; more than two means the input was
/// not an action and is reported as an error.
pub fn regularize(a: &SimplicialAction) -> Result<Regularized, ActionError> {
    let mut action = a.clone();
    for subdivisions in 0..=2 {
        if action.is_regular() {
            return Ok(Regularized { action, subdivisions });
        }
        action = subdivide_action(&action)?;
    }
    if action.is_regular() {
        return Ok(Regularized { action, subdivisions: 2 });
    }
    Err(ActionError::StillIrregular(2))
}

/// Transports an action to the barycentric subdivision: the barycenter of s
/// goes to the barycenter of g s.
pub fn subdivide_action(a: &SimplicialAction) -> Result<SimplicialAction, ActionError> {
    let sub = a.complex().barycentric_subdivision();
    let mut id_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (new_v, &origin) in sub.vertex_origin.iter().enumerate() {
        id_of.insert(origin, new_v);
    }
    let mut maps = Vec::with_capacity(a.group().order());
    for g in 0..a.group().order() {
        let mut m = Vec::with_capacity(sub.vertex_origin.len());
        for &(d, idx) in &sub.vertex_origin {
            let image = a.apply_simplex(g, &a.complex().simplices(d)[idx]);
            let j = a.complex().simplex_index(d, &image).unwrap();
            m.push(id_of[&(d, j)]);
        }
        maps.push(m);
    }
    SimplicialAction::new(sub.complex, a.group().clone(), maps)
}

/// Orbit complex of a regular action, with the vertex quotient map.
#[derive(Debug, Clone)]
pub struct OrbitComplex {
    pub complex: SimplicialComplex,
    /// Original vertex -> orbit vertex.
    pub vertex_orbit: Vec<usize>,
    /// Orbit vertex -> smallest original vertex in the orbit.
    pub representative: Vec<usize>,
}

/// Quotient by a regular action: vertices are vertex orbits, labeled by
/// their smallest representative; simplices are orbit images of simplices.
pub fn orbit_complex(a: &SimplicialAction) -> Result<OrbitComplex, ActionError> {
    if !a.is_regular() {
        return Err(ActionError::NotRegular);
    }
    let orbit = a.vertex_orbits();
    let classes = orbit.iter().max().map_or(0, |m| m + 1);
    let mut representative = vec![usize::MAX; classes];
    for v in 0..orbit.len() {
        if representative[orbit[v]] == usize::MAX {
            representative[orbit[v]] = v;
        }
    }
    let labels: Vec<String> =
        representative.iter().map(|&v| a.complex().label(v).to_string()).collect();
    let mut tuples = Vec::new();
    for d in 0..=a.complex().dim() {
        for s in a.complex().simplices(d) {
            let mut image: Vec<usize> = s.iter().map(|&v| orbit[v]).collect();
            image.sort_unstable();
            tuples.push(image);
        }
    }
    let complex = SimplicialComplex::from_simplex_sets(labels, tuples);
    Ok(OrbitComplex { complex, vertex_orbit: orbit, representative })
}

/// Full subcomplex on a set of vertices, with the inclusion map back into
/// the original complex.
#[derive(Debug, Clone)]
pub struct Subcomplex {
    pub complex: SimplicialComplex,
    /// New vertex -> original vertex.
    pub inclusion: Vec<usize>,
}

fn full_subcomplex(c: &SimplicialComplex, keep: &[bool]) -> Subcomplex {
    let inclusion: Vec<usize> = (0..c.vertex_count()).filter(|&v| keep[v]).collect();
    let mut new_id = vec![usize::MAX; c.vertex_count()];
    for (i, &v) in inclusion.iter().enumerate() {
        new_id[v] = i;
    }
    let labels: Vec<String> = inclusion.iter().map(|&v| c.label(v).to_string()).collect();
    let mut tuples = vec![Vec::new(); 0];
    for d in 0..=c.dim() {
        for s in c.simplices(d) {
            if s.iter().all(|&v| keep[v]) {
                tuples.push(s.iter().map(|&v| new_id[v]).collect());
            }
        }
    }
    Subcomplex { complex: SimplicialComplex::from_simplex_sets(labels, tuples), inclusion }
}

/// Subcomplex fixed pointwise by one group element.
pub fn fixed_subcomplex_of(a: &SimplicialAction, g: usize) -> Option<Subcomplex> {
    let keep: Vec<bool> =
        (0..a.complex().vertex_count()).map(|v| a.apply_vertex(g, v) == v).collect();
    if keep.iter().all(|&k| !k) {
        return None;
    }
    Some(full_subcomplex(a.complex(), &keep))
}

/// Subcomplex fixed pointwise by the whole group; None when no vertex is
/// fixed by every element.
pub fn fixed_subcomplex(a: &SimplicialAction) -> Option<Subcomplex> {
    let keep: Vec<bool> = (0..a.complex().vertex_count())
        .map(|v| (0..a.group().order()).all(|g| a.apply_vertex(g, v) == v))
        .collect();
    if keep.iter().all(|&k| !k) {
        return None;
    }
    Some(full_subcomplex(a.complex(), &keep))
}

/// The saturated diagonal: one sheet per group element, each a copy of the
/// complex, glued along fixed subcomplexes. The sheet of k meets the sheet
/// of k' in the fixed complex of k'^{-1} k.
#[derive(Debug, Clone)]
pub struct DalethComplex {
    pub complex: SimplicialComplex,
    /// sheet_map[k][v] is the glued vertex holding (v, k).
    pub sheet_map: Vec<Vec<usize>>,
}

/// Builds the saturated diagonal. Vertices are classes (v, k Stab(v)) of
/// left stabilizer cosets, ordered by vertex then by smallest coset member
/// and labeled `label@element`.
pub fn daleth_complex(a: &SimplicialAction) -> DalethComplex {
    let n = a.complex().vertex_count();
    let order = a.group().order();
    let mut class_id: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for v in 0..n {
        let stab: Vec<usize> = (0..order).filter(|&g| a.apply_vertex(g, v) == v).collect();
        for k in 0..order {
            let mut coset: Vec<usize> = stab.iter().map(|&s| a.group().mul(k, s)).collect();
            coset.sort_unstable();
            class_id.entry((v, coset)).or_insert(usize::MAX);
        }
    }
    let mut labels = Vec::with_capacity(class_id.len());
    for (i, ((v, coset), id)) in class_id.iter_mut().enumerate() {
        *id = i;
        labels.push(format!("{}@{}", a.complex().label(*v), a.group().name(coset[0])));
    }
    let mut sheet_map = vec![vec![usize::MAX; n]; order];
    for ((v, coset), &id) in &class_id {
        for &k in coset {
            sheet_map[k][*v] = id;
        }
    }
    let mut tuples = Vec::new();
    for sheet in &sheet_map {
        for d in 0..=a.complex().dim() {
            for s in a.complex().simplices(d) {
                let mut image: Vec<usize> = s.iter().map(|&v| sheet[v]).collect();
                image.sort_unstable();
                tuples.push(image);
            }
        }
    }
    DalethComplex {
        complex: SimplicialComplex::from_simplex_sets(labels, tuples),
        sheet_map,
    }
}

/// Matrices of the induced action on cohomology, one per group element and
/// degree, acting on class coordinate columns. Composition is reversed:
/// the matrix of g h is (matrix of h)(matrix of g).
#[derive(Debug, Clone)]
pub struct InducedAction {
    pub field: FieldSpec,
    /// matrices[g][d] acts on degree-d class coordinates.
    pub matrices: Vec<Vec<Matrix>>,
    pub trivial: bool,
}

/// Pullback of a cochain along one group element, with the orientation sign
/// of the vertex sort permutation.
fn pullback_cochain(
    a: &SimplicialAction,
    g: usize,
    x: &Cochain,
    f: FieldSpec,
) -> Cochain {
    let d = x.degree;
    let simplices = a.complex().simplices(d);
    let mut coeffs = vec![f.zero(); simplices.len()];
    for (idx, s) in simplices.iter().enumerate() {
        let mapped: Vec<usize> = s.iter().map(|&v| a.apply_vertex(g, v)).collect();
        let mut inversions = 0usize;
        for i in 0..mapped.len() {
            for j in i + 1..mapped.len() {
                if mapped[i] > mapped[j] {
                    inversions += 1;
                }
            }
        }
        let mut sorted = mapped;
        sorted.sort_unstable();
        let j = a.complex().simplex_index(d, &sorted).unwrap();
        let val = x.coeffs[j].clone();
        coeffs[idx] = if inversions % 2 == 1 { f.neg(&val) } else { val };
    }
    Cochain { degree: d, coeffs }
}

/// Induced action on the cohomology of the complex the group acts on.
pub fn induced_cohomology_action(
    a: &SimplicialAction,
    f: FieldSpec,
) -> Result<InducedAction, ActionError> {
    let cohomology = a.complex().cohomology_ring(f);
    let dims = cohomology.dims();
    let mut matrices = Vec::with_capacity(a.group().order());
    let mut trivial = true;
    for g in 0..a.group().order() {
        let mut per_degree = Vec::with_capacity(dims.len());
        for (d, &k) in dims.iter().enumerate() {
            let mut m = Matrix::zero(k, k, f);
            for i in 0..k {
                let pulled = pullback_cochain(a, g, cohomology.representative(d, i), f);
                let coords = cohomology
                    .class_coordinates(&pulled)
                    .expect("pullback of a cocycle is a cocycle");
                for (r, c) in coords.into_iter().enumerate() {
                    m.set(r, i, c);
                }
            }
            if m != Matrix::identity(k, f) {
                trivial = false;
            }
            per_degree.push(m);
        }
        matrices.push(per_degree);
    }
    Ok(InducedAction { field: f, matrices, trivial })
}
