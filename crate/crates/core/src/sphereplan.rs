//! Unit spheres with linear finite-group actions, symbolic paths, explicit
//! motion planners, and the planner combinators.
//!
//! A (G,k)-planner covers the sphere-pair space by charts; each chart's
//! section produces a k-segment plan whose consecutive segments are aligned
//! by group elements (leaps). The constructions here realize the known
//! upper bounds for classical, reflection, orientation-reversing, and free
//! involution cases, plus the extend/merge/transport/product combinators.

use crate::gaction::FiniteGroup;
use nalgebra::{DMatrix, DVector};
use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

/// Construction tolerance: exactness of closed-form data.
pub const TOL_CONSTRUCTION: f64 = 1e-12;
/// Verification tolerance: endpoint and leap contracts.
pub const TOL_VERIFY: f64 = 1e-9;
/// Map and homotopy contract tolerance: sampled functional identities.
pub const TOL_MAP: f64 = 1e-6;
/// Margins below this are counted as boundary flags, not failures.
pub const BOUNDARY_FLAG: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("points are antipodal; no unique shortest arc")]
    AntipodalPoints,
    #[error("invalid planner parameters: {0}")]
    BadParameters(String),
    #[error("matrices do not define an orthogonal action: {0}")]
    BadAction(String),
    #[error("the action has a fixed point on the sphere; it is not free")]
    NotFree,
    #[error("no group element aligns the junction within tolerance")]
    NoMatch,
    #[error("several group elements align the junction; the action is not free there")]
    AmbiguousMatch,
    #[error("homotopy endpoints do not match the identity and the round trip")]
    HomotopyEndpointMismatch,
    #[error("map is not equivariant within tolerance")]
    NotEquivariant,
}

/// Point on the unit sphere S^n, stored as an (n+1)-vector renormalized on
/// construction to within 1e-12 of unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: DVector<f64>,
}

impl SpherePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, PlanError> {
        SpherePoint::from_vector(DVector::from_vec(coords))
    }

    pub fn from_vector(v: DVector<f64>) -> Result<Self, PlanError> {
        if v.len() < 2 {
            return Err(PlanError::BadParameters("ambient dimension must be at least 2".into()));
        }
        let norm = v.norm();
        if !norm.is_finite() || norm < 1e-9 {
            return Err(PlanError::BadParameters("cannot normalize a near-zero vector".into()));
        }
        Ok(SpherePoint { coords: v / norm })
    }

    /// The i-th standard basis vector in the given ambient dimension.
    pub fn basis(ambient: usize, i: usize) -> Self {
        let mut v = DVector::zeros(ambient);
        v[i] = 1.0;
        SpherePoint { coords: v }
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn sphere_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.coords.dot(&other.coords)
    }

    pub fn dist(&self, other: &SpherePoint) -> f64 {
        (&self.coords - &other.coords).norm()
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint { coords: -&self.coords }
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|&v| format!("{:.6}", if v.abs() < 5e-7 { 0.0 } else { v }))
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Linear action of a finite group by orthogonal matrices, validated at
/// construction tolerance.
#[derive(Debug, Clone)]
pub struct OrthoAction {
    group: FiniteGroup,
    matrices: Vec<DMatrix<f64>>,
}

impl OrthoAction {
    pub fn new(group: FiniteGroup, matrices: Vec<DMatrix<f64>>) -> Result<Self, PlanError> {
        if matrices.len() != group.order() {
            return Err(PlanError::BadAction(format!(
                "expected {} matrices, found {}",
                group.order(),
                matrices.len()
            )));
        }
        let dim = matrices[0].nrows();
        for (g, m) in matrices.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(PlanError::BadAction(format!("matrix {g} is not {dim} x {dim}")));
            }
            let gram = m.transpose() * m;
            if (gram - DMatrix::identity(dim, dim)).amax() > TOL_CONSTRUCTION {
                return Err(PlanError::BadAction(format!("matrix {g} is not orthogonal")));
            }
        }
        if (&matrices[0] - DMatrix::identity(dim, dim)).amax() > TOL_CONSTRUCTION {
            return Err(PlanError::BadAction("identity element maps to a non-identity matrix".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if (&matrices[g] * &matrices[h] - &matrices[gh]).amax() > TOL_CONSTRUCTION {
                    return Err(PlanError::BadAction(format!(
                        "matrices of {g} and {h} do not compose to their product"
                    )));
                }
            }
        }
        Ok(OrthoAction { group, matrices })
    }

    /// Trivial group acting on S^n.
    pub fn trivial(n: usize) -> Self {
        OrthoAction::new(FiniteGroup::trivial(), vec![DMatrix::identity(n + 1, n + 1)]).unwrap()
    }

    /// The antipodal involution on S^n, the free linear involution.
    pub fn antipodal(n: usize) -> Self {
        let dim = n + 1;
        OrthoAction::new(
            FiniteGroup::cyclic(2),
            vec![DMatrix::identity(dim, dim), -DMatrix::identity(dim, dim)],
        )
        .unwrap()
    }

    /// Reflection negating the last coordinate, interchanging hemispheres.
    pub fn reflection_last(n: usize) -> Self {
        let dim = n + 1;
        let mut m = DMatrix::identity(dim, dim);
        m[(dim - 1, dim - 1)] = -1.0;
        OrthoAction::new(FiniteGroup::cyclic(2), vec![DMatrix::identity(dim, dim), m]).unwrap()
    }

    /// Involution negating coordinates 0..=r_tilde; orientation-reversing on
    /// S^n when r_tilde is even, with fixed sphere of dimension n-r_tilde-1.
    pub fn coordinate_negation(n: usize, r_tilde: usize) -> Result<Self, PlanError> {
        if r_tilde > n {
            return Err(PlanError::BadParameters(format!(
                "cannot negate {} coordinates in ambient dimension {}",
                r_tilde + 1,
                n + 1
            )));
        }
        let dim = n + 1;
        let mut m = DMatrix::identity(dim, dim);
        for i in 0..=r_tilde {
            m[(i, i)] = -1.0;
        }
        OrthoAction::new(FiniteGroup::cyclic(2), vec![DMatrix::identity(dim, dim), m])
    }

    /// Z/p rotating the (0,1) coordinate plane by multiples of 2 pi / p.
    pub fn rotation_xy(n: usize, p: usize) -> Result<Self, PlanError> {
        if p < 2 {
            return Err(PlanError::BadParameters("rotation order must be at least 2".into()));
        }
        let dim = n + 1;
        let mut matrices = Vec::with_capacity(p);
        for k in 0..p {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / p as f64;
            let mut m = DMatrix::identity(dim, dim);
            m[(0, 0)] = theta.cos();
            m[(0, 1)] = -theta.sin();
            m[(1, 0)] = theta.sin();
            m[(1, 1)] = theta.cos();
            matrices.push(m);
        }
        OrthoAction::new(FiniteGroup::cyclic(p), matrices)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self, g: usize) -> &DMatrix<f64> {
        &self.matrices[g]
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn sphere_dim(&self) -> usize {
        self.ambient_dim() - 1
    }

    pub fn apply(&self, g: usize, x: &SpherePoint) -> SpherePoint {
        SpherePoint::from_vector(&self.matrices[g] * x.coords()).expect("orthogonal image")
    }

    /// True when no non-identity element has a fixed point on the sphere,
    /// i.e. no eigenvalue 1.
    pub fn is_free(&self) -> bool {
        for g in 1..self.group.order() {
            let eigen = self.matrices[g].complex_eigenvalues();
            if eigen.iter().any(|l| (l.re - 1.0).abs() < 1e-9 && l.im.abs() < 1e-9) {
                return false;
            }
        }
        true
    }
}

/// Named continuous map between spheres.
#[derive(Clone)]
pub struct MapHandle {
    pub name: String,
    map: Arc<dyn Fn(&SpherePoint) -> SpherePoint + Send + Sync>,
}

impl MapHandle {
    pub fn new(
        name: impl Into<String>,
        map: impl Fn(&SpherePoint) -> SpherePoint + Send + Sync + 'static,
    ) -> Self {
        MapHandle { name: name.into(), map: Arc::new(map) }
    }

    pub fn identity() -> Self {
        MapHandle::new("id", |x: &SpherePoint| x.clone())
    }

    pub fn from_matrix(name: impl Into<String>, m: DMatrix<f64>) -> Self {
        MapHandle::new(name, move |x: &SpherePoint| {
            SpherePoint::from_vector(&m * x.coords()).expect("matrix image")
        })
    }

    pub fn apply(&self, x: &SpherePoint) -> SpherePoint {
        (self.map)(x)
    }
}

impl fmt::Debug for MapHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MapHandle({})", self.name)
    }
}

/// Named homotopy on one sphere: (point, time) -> point.
#[derive(Clone)]
pub struct HomotopyHandle {
    pub name: String,
    map: Arc<dyn Fn(&SpherePoint, f64) -> SpherePoint + Send + Sync>,
}

impl HomotopyHandle {
    pub fn new(
        name: impl Into<String>,
        map: impl Fn(&SpherePoint, f64) -> SpherePoint + Send + Sync + 'static,
    ) -> Self {
        HomotopyHandle { name: name.into(), map: Arc::new(map) }
    }

    pub fn stationary() -> Self {
        HomotopyHandle::new("stationary", |x: &SpherePoint, _t: f64| x.clone())
    }

    pub fn apply(&self, x: &SpherePoint, t: f64) -> SpherePoint {
        (self.map)(x, t)
    }
}

impl fmt::Debug for HomotopyHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomotopyHandle({})", self.name)
    }
}

/// Symbolic path on a sphere: a closed-form expression tree evaluated
/// exactly at any t in [0,1].
#[derive(Debug, Clone)]
pub enum PathExpr {
    Const(SpherePoint),
    /// Shortest arc at constant speed; callers guarantee non-antipodal ends.
    Geodesic { from: SpherePoint, to: SpherePoint },
    /// Left half on [0,1/2], right half on [1/2,1].
    Concat(Box<PathExpr>, Box<PathExpr>),
    /// Image under a fixed matrix, labeled for display.
    Mapped { label: String, matrix: DMatrix<f64>, inner: Box<PathExpr> },
    Reversed(Box<PathExpr>),
    /// Trace of a homotopy at a fixed point, forward or backward in time.
    Track { homotopy: HomotopyHandle, point: SpherePoint, backward: bool },
    /// Image under a named map handle.
    Composed { map: MapHandle, inner: Box<PathExpr> },
}

/// Shortest constant-speed arc between non-antipodal points.
pub fn geodesic(x: &SpherePoint, y: &SpherePoint) -> Result<PathExpr, PlanError> {
    if x.dot(y) <= -1.0 + TOL_VERIFY {
        return Err(PlanError::AntipodalPoints);
    }
    Ok(arc(x, y))
}

/// Arc constructor for chart sections, whose domains already exclude
/// antipodal pairs.
fn arc(x: &SpherePoint, y: &SpherePoint) -> PathExpr {
    PathExpr::Geodesic { from: x.clone(), to: y.clone() }
}

impl PathExpr {
    pub fn eval(&self, t: f64) -> SpherePoint {
        let t = t.clamp(0.0, 1.0);
        match self {
            PathExpr::Const(p) => p.clone(),
            PathExpr::Geodesic { from, to } => {
                let d = from.dot(to).clamp(-1.0, 1.0);
                let theta = d.acos();
                if theta < 1e-14 {
                    return from.clone();
                }
                let u = to.coords() - d * from.coords();
                let un = u.norm();
                if un < 1e-14 {
                    return from.clone();
                }
                let dir = u / un;
                let v = from.coords() * (theta * t).cos() + dir * (theta * t).sin();
                SpherePoint::from_vector(v).expect("slerp stays on the sphere")
            }
            PathExpr::Concat(a, b) => {
                if t <= 0.5 {
                    a.eval(2.0 * t)
                } else {
                    b.eval(2.0 * t - 1.0)
                }
            }
            PathExpr::Mapped { matrix, inner, .. } => {
                SpherePoint::from_vector(matrix * inner.eval(t).coords())
                    .expect("mapped image")
            }
            PathExpr::Reversed(inner) => inner.eval(1.0 - t),
            PathExpr::Track { homotopy, point, backward } => {
                homotopy.apply(point, if *backward { 1.0 - t } else { t })
            }
            PathExpr::Composed { map, inner } => map.apply(&inner.eval(t)),
        }
    }

    /// Upper bound on the parametric speed, when one is known in closed
    /// form. None for tracks and composed maps.
    pub fn speed_bound(&self) -> Option<f64> {
        match self {
            PathExpr::Const(_) => Some(0.0),
            PathExpr::Geodesic { from, to } => Some(from.dot(to).clamp(-1.0, 1.0).acos()),
            PathExpr::Concat(a, b) => Some(2.0 * a.speed_bound()?.max(b.speed_bound()?)),
            PathExpr::Mapped { matrix, inner, .. } => {
                let sigma = matrix.clone().singular_values().max();
                Some(sigma * inner.speed_bound()?)
            }
            PathExpr::Reversed(inner) => inner.speed_bound(),
            PathExpr::Track { .. } | PathExpr::Composed { .. } => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            PathExpr::Const(p) => format!("const({})", p.render()),
            PathExpr::Geodesic { from, to } => {
                format!("geodesic({} -> {})", from.render(), to.render())
            }
            PathExpr::Concat(a, b) => format!("concat({}, {})", a.render(), b.render()),
            PathExpr::Mapped { label, inner, .. } => {
                format!("mapped({}, {})", label, inner.render())
            }
            PathExpr::Reversed(inner) => format!("reversed({})", inner.render()),
            PathExpr::Track { homotopy, point, backward } => format!(
                "track({}, {}, {})",
                homotopy.name,
                point.render(),
                if *backward { "backward" } else { "forward" }
            ),
            PathExpr::Composed { map, inner } => {
                format!("compose({}, {})", map.name, inner.render())
            }
        }
    }
}

/// A k-segment plan: consecutive segments are aligned by the recorded group
/// elements (the leaps), so the whole is one G-path.
#[derive(Debug, Clone)]
pub struct PlanK {
    pub segments: Vec<PathExpr>,
    /// leaps[i] aligns segments[i](1) with segments[i+1](0).
    pub leaps: Vec<usize>,
}

impl PlanK {
    pub fn new(segments: Vec<PathExpr>, leaps: Vec<usize>) -> Self {
        assert_eq!(leaps.len() + 1, segments.len(), "a k-plan has k-1 leaps");
        PlanK { segments, leaps }
    }

    pub fn k(&self) -> usize {
        self.segments.len()
    }

    /// Evaluates segment i at time t. Panics when i is out of range.
    pub fn eval(&self, i: usize, t: f64) -> SpherePoint {
        self.segments[i].eval(t)
    }

    pub fn start(&self) -> SpherePoint {
        self.segments[0].eval(0.0)
    }

    pub fn end(&self) -> SpherePoint {
        self.segments[self.segments.len() - 1].eval(1.0)
    }
}

/// Evaluates one segment of a plan; the standalone form of [`PlanK::eval`].
pub fn eval_plan(p: &PlanK, i: usize, t: f64) -> SpherePoint {
    p.eval(i, t)
}

type MarginFn = Arc<dyn Fn(&SpherePoint, &SpherePoint) -> f64 + Send + Sync>;
type SectionFn = Arc<dyn Fn(&SpherePoint, &SpherePoint) -> PlanK + Send + Sync>;

/// One chart of a planner: an open domain described by a margin function
/// (positive inside, zero outside) and a section producing plans on it.
#[derive(Clone)]
pub struct PlannerChart {
    pub label: String,
    margin: MarginFn,
    section: SectionFn,
}

impl PlannerChart {
    pub fn new(label: impl Into<String>, margin: MarginFn, section: SectionFn) -> Self {
        PlannerChart { label: label.into(), margin, section }
    }

    pub fn margin(&self, x: &SpherePoint, y: &SpherePoint) -> f64 {
        (self.margin)(x, y)
    }

    pub fn section(&self, x: &SpherePoint, y: &SpherePoint) -> PlanK {
        (self.section)(x, y)
    }
}

impl fmt::Debug for PlannerChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlannerChart({})", self.label)
    }
}

/// Which chart handles a query, with its margin and a boundary flag for
/// margins below the flag threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub chart: usize,
    pub margin: f64,
    pub boundary: bool,
}

/// An ordered list of charts with a common segment count k and the group
/// action the leaps refer to.
#[derive(Debug, Clone)]
pub struct PlannerSuite {
    pub name: String,
    pub k: usize,
    pub action: OrthoAction,
    pub charts: Vec<PlannerChart>,
}

impl PlannerSuite {
    pub fn ambient_dim(&self) -> usize {
        self.action.ambient_dim()
    }

    pub fn sphere_dim(&self) -> usize {
        self.action.sphere_dim()
    }

    /// First chart whose margin is positive at the pair. Margins at or
    /// below construction tolerance count as outside, so renormalization
    /// noise never claims a pair for a chart it sits on the edge of.
    pub fn select(&self, x: &SpherePoint, y: &SpherePoint) -> Option<Selection> {
        for (i, chart) in self.charts.iter().enumerate() {
            let m = chart.margin(x, y);
            if m > TOL_CONSTRUCTION {
                return Some(Selection { chart: i, margin: m, boundary: m < BOUNDARY_FLAG });
            }
        }
        None
    }

    /// Plan for the first chart containing the pair.
    pub fn plan(&self, x: &SpherePoint, y: &SpherePoint) -> Option<(Selection, PlanK)> {
        let sel = self.select(x, y)?;
        Some((sel, self.charts[sel.chart].section(x, y)))
    }
}

fn margin_not_antipodal() -> MarginFn {
    Arc::new(|x: &SpherePoint, y: &SpherePoint| (x.coords() + y.coords()).norm())
}

/// Tangent direction that never vanishes on an odd sphere: rotate each
/// consecutive coordinate pair a quarter turn.
fn odd_tangent(x: &SpherePoint) -> SpherePoint {
    let c = x.coords();
    let mut w = DVector::zeros(c.len());
    for i in 0..c.len() / 2 {
        w[2 * i] = -c[2 * i + 1];
        w[2 * i + 1] = c[2 * i];
    }
    SpherePoint::from_vector(w).expect("tangent of a unit vector is unit")
}

/// Unit tangent direction on an even sphere, defined away from one pole:
/// the normalized stereographic transport of a constant planar field. With
/// c the point and m its last coordinate, the direction is
/// (e_0 - c_0 / (1 - m) * c_head, c_0), which is exactly unit and exactly
/// tangent. `from_south` uses the mirror pole.
fn stereographic_tangent(x: &SpherePoint, from_south: bool) -> Option<SpherePoint> {
    let dim = x.ambient_dim();
    let mut c = x.coords().clone();
    if from_south {
        c[dim - 1] = -c[dim - 1];
    }
    let last = c[dim - 1];
    if last > 1.0 - 1e-12 {
        return None;
    }
    let ratio = c[0] / (1.0 - last);
    let mut field = DVector::zeros(dim);
    for i in 0..dim - 1 {
        field[i] = -ratio * c[i];
    }
    field[0] += 1.0;
    field[dim - 1] = c[0];
    if from_south {
        field[dim - 1] = -field[dim - 1];
    }
    SpherePoint::from_vector(field).ok()
}

/// The half great circle from x to its antipode passing through the tangent
/// direction w at the midpoint.
fn semicircle(x: &SpherePoint, w: &SpherePoint) -> PathExpr {
    PathExpr::Concat(Box::new(arc(x, w)), Box::new(arc(w, &x.antipode())))
}

/// Motion planner for the trivial group with k = 1, realizing the classical
/// upper bound: 2 charts on odd spheres, 3 on even spheres.
pub fn planner_classical_sphere(n: usize) -> PlannerSuite {
    assert!(n >= 1, "the sphere must be at least one-dimensional");
    let action = OrthoAction::trivial(n);
    let mut charts = Vec::new();
    charts.push(PlannerChart::new(
        "geodesic on y != -x",
        margin_not_antipodal(),
        Arc::new(|x: &SpherePoint, y: &SpherePoint| PlanK::new(vec![arc(x, y)], vec![])),
    ));
    if n % 2 == 1 {
        charts.push(PlannerChart::new(
            "semicircle then geodesic on y != x",
            Arc::new(|x: &SpherePoint, y: &SpherePoint| x.dist(y)),
            Arc::new(|x: &SpherePoint, y: &SpherePoint| {
                let w = odd_tangent(x);
                let half = semicircle(x, &w);
                PlanK::new(
                    vec![PathExpr::Concat(Box::new(half), Box::new(arc(&x.antipode(), y)))],
                    vec![],
                )
            }),
        ));
    } else {
        let dim = n + 1;
        for (pole_label, from_south) in [("north", false), ("south", true)] {
            let mut pole = SpherePoint::basis(dim, dim - 1);
            if from_south {
                pole = pole.antipode();
            }
            let pole_for_margin = pole.clone();
            charts.push(PlannerChart::new(
                format!("semicircle avoiding the {pole_label} pole, on y != x"),
                Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
                    x.dist(y).min(x.dist(&pole_for_margin))
                }),
                Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
                    let w = stereographic_tangent(x, from_south)
                        .expect("chart domain excludes the pole");
                    let half = semicircle(x, &w);
                    PlanK::new(
                        vec![PathExpr::Concat(Box::new(half), Box::new(arc(&x.antipode(), y)))],
                        vec![],
                    )
                }),
            ));
        }
    }
    PlannerSuite {
        name: format!("classical sphere planner, n = {n}"),
        k: 1,
        action,
        charts,
    }
}

/// Single-chart (Z/2, 3)-planner for the hemisphere reflection: lift both
/// endpoints to the closed upper hemisphere and route through the north
/// pole. Realizes the value 1 for the reflection action.
pub fn planner_reflection(n: usize) -> PlannerSuite {
    assert!(n >= 1, "the sphere must be at least one-dimensional");
    let action = OrthoAction::reflection_last(n);
    let dim = n + 1;
    let section_action = action.clone();
    let chart = PlannerChart::new(
        "whole product, through the north pole",
        Arc::new(|_x: &SpherePoint, _y: &SpherePoint| 1.0),
        Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
            let north = SpherePoint::basis(dim, dim - 1);
            let lift = |p: &SpherePoint| if p.coords()[dim - 1] >= 0.0 { 0 } else { 1 };
            let gx = lift(x);
            let gy = lift(y);
            let px = section_action.apply(gx, x);
            let py = section_action.apply(gy, y);
            let middle =
                PathExpr::Concat(Box::new(arc(&px, &north)), Box::new(arc(&north, &py)));
            PlanK::new(
                vec![PathExpr::Const(x.clone()), middle, PathExpr::Const(y.clone())],
                vec![gx, gy],
            )
        }),
    );
    PlannerSuite {
        name: format!("reflection planner, n = {n}"),
        k: 3,
        action,
        charts: vec![chart],
    }
}

/// The auxiliary rotation used by the orientation-reversing planner: negate
/// coordinates 0..=r_tilde, then rotate the remaining coordinates in
/// consecutive pairs (a, b) -> (-b, a).
pub fn orientation_reversing_tau(n: usize, r_tilde: usize) -> Result<DMatrix<f64>, PlanError> {
    check_orientation_reversing_parameters(n, r_tilde)?;
    let dim = n + 1;
    let mut tau = DMatrix::zeros(dim, dim);
    for i in 0..=r_tilde {
        tau[(i, i)] = -1.0;
    }
    let mut i = r_tilde + 1;
    while i < dim {
        tau[(i, i + 1)] = -1.0;
        tau[(i + 1, i)] = 1.0;
        i += 2;
    }
    Ok(tau)
}

fn check_orientation_reversing_parameters(n: usize, r_tilde: usize) -> Result<(), PlanError> {
    if n % 2 != 0 {
        return Err(PlanError::BadParameters(format!("n = {n} must be even")));
    }
    if r_tilde % 2 != 0 || r_tilde < 2 {
        return Err(PlanError::BadParameters(format!(
            "r_tilde = {r_tilde} must be even and at least 2"
        )));
    }
    if n < r_tilde + 2 {
        return Err(PlanError::BadParameters(format!(
            "need n - r_tilde >= 2, got n = {n}, r_tilde = {r_tilde}"
        )));
    }
    Ok(())
}

/// Two-chart (Z/2, 2)-planner for the orientation-reversing involution
/// negating coordinates 0..=r_tilde, realizing the upper bound 2.
pub fn planner_orientation_reversing(n: usize, r_tilde: usize) -> Result<PlannerSuite, PlanError> {
    check_orientation_reversing_parameters(n, r_tilde)?;
    let action = OrthoAction::coordinate_negation(n, r_tilde)?;
    let tau = orientation_reversing_tau(n, r_tilde)?;
    let tau_for_margin = tau.clone();
    let chart1 = PlannerChart::new(
        "geodesic on y != -x",
        margin_not_antipodal(),
        Arc::new(|x: &SpherePoint, y: &SpherePoint| {
            PlanK::new(vec![arc(x, y), PathExpr::Const(y.clone())], vec![0])
        }),
    );
    let section_action = action.clone();
    let chart2 = PlannerChart::new(
        "leap, then through tau(x), on y != -tau(x)",
        Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
            (&tau_for_margin * x.coords() + y.coords()).norm()
        }),
        Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
            let gx = section_action.apply(1, x);
            let tx = SpherePoint::from_vector(&tau * x.coords()).expect("tau is orthogonal");
            let middle = PathExpr::Concat(Box::new(arc(&gx, &tx)), Box::new(arc(&tx, y)));
            PlanK::new(vec![PathExpr::Const(x.clone()), middle], vec![1])
        }),
    );
    Ok(PlannerSuite {
        name: format!("orientation-reversing planner, n = {n}, r_tilde = {r_tilde}"),
        k: 2,
        action,
        charts: vec![chart1, chart2],
    })
}

/// Two-chart (Z/2, 2)-planner for a free involution: geodesic where
/// possible, otherwise leap to gx and take the geodesic from there.
pub fn planner_free_involution(n: usize, action: OrthoAction) -> Result<PlannerSuite, PlanError> {
    if action.group().order() != 2 {
        return Err(PlanError::BadParameters("the group must have order 2".into()));
    }
    if action.ambient_dim() != n + 1 {
        return Err(PlanError::BadParameters(format!(
            "action ambient dimension {} does not match n = {n}",
            action.ambient_dim()
        )));
    }
    if !action.is_free() {
        return Err(PlanError::NotFree);
    }
    let chart1 = PlannerChart::new(
        "geodesic on y != -x",
        margin_not_antipodal(),
        Arc::new(|x: &SpherePoint, y: &SpherePoint| {
            PlanK::new(vec![arc(x, y), PathExpr::Const(y.clone())], vec![0])
        }),
    );
    let margin_action = action.clone();
    let section_action = action.clone();
    let chart2 = PlannerChart::new(
        "leap, then geodesic, on y != -gx",
        Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
            (margin_action.apply(1, x).coords() + y.coords()).norm()
        }),
        Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
            let gx = section_action.apply(1, x);
            PlanK::new(vec![PathExpr::Const(x.clone()), arc(&gx, y)], vec![1])
        }),
    );
    Ok(PlannerSuite {
        name: format!("free involution planner, n = {n}"),
        k: 2,
        action,
        charts: vec![chart1, chart2],
    })
}

/// Appends a constant segment at the terminal point of every plan: a
/// (G,k)-planner becomes a (G,k+1)-planner on the same charts.
pub fn extend_plan(suite: &PlannerSuite) -> PlannerSuite {
    let charts = suite
        .charts
        .iter()
        .map(|chart| {
            let inner = chart.clone();
            PlannerChart::new(
                chart.label.clone(),
                Arc::new(move |x: &SpherePoint, y: &SpherePoint| inner.margin(x, y)),
                {
                    let inner = chart.clone();
                    Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
                        let mut plan = inner.section(x, y);
                        let end = plan.end();
                        plan.segments.push(PathExpr::Const(end));
                        plan.leaps.push(0);
                        plan
                    })
                },
            )
        })
        .collect();
    PlannerSuite {
        name: format!("{}, extended", suite.name),
        k: suite.k + 1,
        action: suite.action.clone(),
        charts,
    }
}

/// Merges the last two segments of a plan: finds the unique group element
/// aligning them and concatenates. Errors when no element or more than one
/// element matches within tolerance.
pub fn merge_plan(plan: &PlanK, action: &OrthoAction) -> Result<PlanK, PlanError> {
    let k = plan.segments.len();
    if k < 2 {
        return Err(PlanError::BadParameters("nothing to merge in a one-segment plan".into()));
    }
    let junction_end = plan.segments[k - 2].eval(1.0);
    let next_start = plan.segments[k - 1].eval(0.0);
    let mut matches = Vec::new();
    for g in 0..action.group().order() {
        if action.apply(g, &junction_end).dist(&next_start) <= TOL_MAP {
            matches.push(g);
        }
    }
    let gamma = match matches.len() {
        0 => return Err(PlanError::NoMatch),
        1 => matches[0],
        _ => return Err(PlanError::AmbiguousMatch),
    };
    let mapped = PathExpr::Mapped {
        label: action.group().name(gamma).to_string(),
        matrix: action.matrix(gamma).clone(),
        inner: Box::new(plan.segments[k - 2].clone()),
    };
    let merged = PathExpr::Concat(Box::new(mapped), Box::new(plan.segments[k - 1].clone()));
    let mut segments: Vec<PathExpr> = plan.segments[..k - 2].to_vec();
    segments.push(merged);
    let mut leaps: Vec<usize> = plan.leaps[..plan.leaps.len().saturating_sub(1)].to_vec();
    if let Some(last) = leaps.pop() {
        leaps.push(action.group().mul(gamma, last));
    }
    Ok(PlanK::new(segments, leaps))
}

/// For a free action, turns a (G,k+1)-planner into a (G,k)-planner by
/// merging the last two segments of every plan.
pub fn merge_free(suite: &PlannerSuite) -> Result<PlannerSuite, PlanError> {
    if suite.k < 3 {
        return Err(PlanError::BadParameters(
            "merging needs at least three segments so the result keeps k >= 2".into(),
        ));
    }
    if !suite.action.is_free() {
        return Err(PlanError::NotFree);
    }
    let action = suite.action.clone();
    let charts = suite
        .charts
        .iter()
        .map(|chart| {
            let margin_chart = chart.clone();
            let section_chart = chart.clone();
            let section_action = action.clone();
            PlannerChart::new(
                chart.label.clone(),
                Arc::new(move |x: &SpherePoint, y: &SpherePoint| margin_chart.margin(x, y)),
                Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
                    let plan = section_chart.section(x, y);
                    merge_plan(&plan, &section_action)
                        .expect("a free action aligns valid junctions uniquely")
                }),
            )
        })
        .collect();
    Ok(PlannerSuite {
        name: format!("{}, merged", suite.name),
        k: suite.k - 1,
        action,
        charts,
    })
}

/// Deterministic sample points for the sampled functional checks in
/// [`transport_planner`].
fn probe_points(ambient: usize, count: usize) -> Vec<SpherePoint> {
    let mut points = Vec::with_capacity(count);
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    while points.len() < count {
        let v = DVector::from_fn(ambient, |_, _| next());
        if let Ok(p) = SpherePoint::from_vector(v) {
            points.push(p);
        }
    }
    points
}

/// Carries a planner across a homotopy equivalence: f: X -> Y equivariant,
/// g: Y -> X, and H a homotopy on Y from the identity to f after g. Charts
/// pull back through g x g; plans are composed with f, prefixed by the
/// H-track at x, and suffixed by the reversed H-track at y.
pub fn transport_planner(
    suite: &PlannerSuite,
    target_action: OrthoAction,
    f: MapHandle,
    g: MapHandle,
    h: HomotopyHandle,
) -> Result<PlannerSuite, PlanError> {
    if target_action.group().order() != suite.action.group().order() {
        return Err(PlanError::BadParameters(
            "source and target actions must share the group".into(),
        ));
    }
    for y in probe_points(target_action.ambient_dim(), 32) {
        if h.apply(&y, 0.0).dist(&y) > TOL_MAP {
            return Err(PlanError::HomotopyEndpointMismatch);
        }
        if h.apply(&y, 1.0).dist(&f.apply(&g.apply(&y))) > TOL_MAP {
            return Err(PlanError::HomotopyEndpointMismatch);
        }
    }
    for x in probe_points(suite.action.ambient_dim(), 32) {
        for elt in 0..suite.action.group().order() {
            let lhs = f.apply(&suite.action.apply(elt, &x));
            let rhs = target_action.apply(elt, &f.apply(&x));
            if lhs.dist(&rhs) > TOL_MAP {
                return Err(PlanError::NotEquivariant);
            }
        }
    }
    let k = suite.k;
    let charts = suite
        .charts
        .iter()
        .map(|chart| {
            let margin_chart = chart.clone();
            let margin_g = g.clone();
            let section_chart = chart.clone();
            let section_f = f.clone();
            let section_g = g.clone();
            let section_h = h.clone();
            PlannerChart::new(
                format!("{}, transported", chart.label),
                Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
                    margin_chart.margin(&margin_g.apply(x), &margin_g.apply(y))
                }),
                Arc::new(move |x: &SpherePoint, y: &SpherePoint| {
                    let inner =
                        section_chart.section(&section_g.apply(x), &section_g.apply(y));
                    let mut segments = Vec::with_capacity(k);
                    for (i, seg) in inner.segments.iter().enumerate() {
                        let mut expr = PathExpr::Composed {
                            map: section_f.clone(),
                            inner: Box::new(seg.clone()),
                        };
                        if i == 0 {
                            expr = PathExpr::Concat(
                                Box::new(PathExpr::Track {
                                    homotopy: section_h.clone(),
                                    point: x.clone(),
                                    backward: false,
                                }),
                                Box::new(expr),
                            );
                        }
                        if i == k - 1 {
                            expr = PathExpr::Concat(
                                Box::new(expr),
                                Box::new(PathExpr::Track {
                                    homotopy: section_h.clone(),
                                    point: y.clone(),
                                    backward: true,
                                }),
                            );
                        }
                        segments.push(expr);
                    }
                    PlanK::new(segments, inner.leaps)
                }),
            )
        })
        .collect();
    Ok(PlannerSuite {
        name: format!("{}, transported", suite.name),
        k,
        action: target_action,
        charts,
    })
}

/// Cell assignment for a product query: the chart is cell.0 + cell.1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductSelection {
    pub cell: (usize, usize),
    pub chart: usize,
    pub score: f64,
    pub boundary: bool,
}

/// Plan on a product of spheres: one component plan per factor, moving
/// simultaneously.
#[derive(Debug, Clone)]
pub struct ProductPlan {
    pub left: PlanK,
    pub right: PlanK,
    pub selection: ProductSelection,
}

/// Planner on a product of two spheres, combining one suite per factor.
/// Queries are assigned to the cell maximizing the product of the two
/// partition-of-unity values; the m + n - 1 charts collect the cells of
/// constant index sum.
#[derive(Debug, Clone)]
pub struct ProductSuite {
    pub left: PlannerSuite,
    pub right: PlannerSuite,
    pub k: usize,
}

impl ProductSuite {
    pub fn chart_count(&self) -> usize {
        self.left.charts.len() + self.right.charts.len() - 1
    }

    /// Argmax of f_i * h_j with lexicographic tie-break; None when either
    /// factor suite fails to cover its pair.
    pub fn select(
        &self,
        x: &(SpherePoint, SpherePoint),
        y: &(SpherePoint, SpherePoint),
    ) -> Option<ProductSelection> {
        let clip = |m: f64| if m > TOL_CONSTRUCTION { m } else { 0.0 };
        let left_margins: Vec<f64> =
            self.left.charts.iter().map(|c| clip(c.margin(&x.0, &y.0))).collect();
        let right_margins: Vec<f64> =
            self.right.charts.iter().map(|c| clip(c.margin(&x.1, &y.1))).collect();
        let left_total: f64 = left_margins.iter().sum();
        let right_total: f64 = right_margins.iter().sum();
        if left_total <= 0.0 || right_total <= 0.0 {
            return None;
        }
        let mut best: Option<((usize, usize), f64)> = None;
        let mut runner_up = 0.0f64;
        for (i, lm) in left_margins.iter().enumerate() {
            for (j, rm) in right_margins.iter().enumerate() {
                let score = (lm / left_total) * (rm / right_total);
                match best {
                    None => best = Some(((i, j), score)),
                    Some((_, s)) if score > s => {
                        runner_up = s;
                        best = Some(((i, j), score));
                    }
                    Some(_) => runner_up = runner_up.max(score),
                }
            }
        }
        let (cell, score) = best?;
        if score <= 0.0 {
            return None;
        }
        Some(ProductSelection {
            cell,
            chart: cell.0 + cell.1,
            score,
            boundary: score - runner_up < BOUNDARY_FLAG,
        })
    }

    pub fn plan(
        &self,
        x: &(SpherePoint, SpherePoint),
        y: &(SpherePoint, SpherePoint),
    ) -> Option<ProductPlan> {
        let selection = self.select(x, y)?;
        let left = self.left.charts[selection.cell.0].section(&x.0, &y.0);
        let right = self.right.charts[selection.cell.1].section(&x.1, &y.1);
        Some(ProductPlan { left, right, selection })
    }
}

/// Combines planners on two spheres into a planner on their product with
/// m + n - 1 charts, first normalizing both to a common k.
pub fn product_combine(suite_x: &PlannerSuite, suite_y: &PlannerSuite) -> ProductSuite {
    let k = suite_x.k.max(suite_y.k);
    let mut left = suite_x.clone();
    while left.k < k {
        left = extend_plan(&left);
    }
    let mut right = suite_y.clone();
    while right.k < k {
        right = extend_plan(&right);
    }
    ProductSuite { left, right, k }
}

/// Text dump of a plan: constructor trees, leap elements, and a sampled
/// polyline per segment at the given resolution.
pub fn render_plan(plan: &PlanK, group: &FiniteGroup, resolution: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "plan k={}", plan.k());
    for (i, seg) in plan.segments.iter().enumerate() {
        let _ = writeln!(out, "segment {i}: {}", seg.render());
        if i < plan.leaps.len() {
            let _ = writeln!(out, "leap {i}: {}", group.name(plan.leaps[i]));
        }
    }
    if resolution > 0 {
        for (i, seg) in plan.segments.iter().enumerate() {
            let samples: Vec<String> = (0..=resolution)
                .map(|s| seg.eval(s as f64 / resolution as f64).render())
                .collect();
            let _ = writeln!(out, "polyline {i}: {}", samples.join(" "));
        }
    }
    out
}
