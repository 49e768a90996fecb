//! Built-in complexes and group actions used by the test suites, the
//! command-line catalogue, and the certified table scenarios.

use crate::complex::{product_complex, ProductComplex, SimplicialComplex};
use crate::gaction::{FiniteGroup, SimplicialAction};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn cyclic_action(c: SimplicialComplex, order: usize, generator: Vec<usize>) -> SimplicialAction {
    let mut maps: Vec<Vec<usize>> = vec![(0..c.vertex_count()).collect()];
    for i in 1..order {
        let prev = &maps[i - 1];
        maps.push(prev.iter().map(|&v| generator[v]).collect());
    }
    SimplicialAction::new(c, FiniteGroup::cyclic(order), maps).unwrap()
}

/// Circle on three vertices: the boundary of a triangle.
pub fn triangle_circle() -> SimplicialComplex {
    SimplicialComplex::from_maximal(
        labels(&["a", "b", "c"]),
        &[vec![0, 1], vec![0, 2], vec![1, 2]],
    )
    .unwrap()
}

/// Filled triangle: a two-dimensional disk.
pub fn filled_triangle() -> SimplicialComplex {
    SimplicialComplex::from_maximal(labels(&["a", "b", "c"]), &[vec![0, 1, 2]]).unwrap()
}

/// Hexagonal circle with vertices in cyclic order v0 v1 v2 v3 v4 v5.
pub fn hexagon() -> SimplicialComplex {
    SimplicialComplex::from_maximal(
        labels(&["v0", "v1", "v2", "v3", "v4", "v5"]),
        &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![0, 5]],
    )
    .unwrap()
}

/// Hexagonal circle with vertices in cyclic order v0 v1 v3 v5 v4 v2. Every
/// edge is increasing in the vertex order, so order-preserving symmetries of
/// this model act simplicially on staircase products built from it.
pub fn hexagon_compat() -> SimplicialComplex {
    SimplicialComplex::from_maximal(
        labels(&["v0", "v1", "v2", "v3", "v4", "v5"]),
        &[vec![0, 1], vec![1, 3], vec![3, 5], vec![4, 5], vec![2, 4], vec![0, 2]],
    )
    .unwrap()
}

/// Boundary of the octahedron: the two-sphere on six vertices, with opposite
/// vertex pairs (x+, x-), (y+, y-), (z+, z-).
pub fn octahedron() -> SimplicialComplex {
    SimplicialComplex::from_maximal(
        labels(&["x+", "x-", "y+", "y-", "z+", "z-"]),
        &[
            vec![0, 2, 4],
            vec![0, 2, 5],
            vec![0, 3, 4],
            vec![0, 3, 5],
            vec![1, 2, 4],
            vec![1, 2, 5],
            vec![1, 3, 4],
            vec![1, 3, 5],
        ],
    )
    .unwrap()
}

/// Real projective plane on six vertices: the antipodal quotient of the
/// icosahedron boundary.
pub fn rp2_six() -> SimplicialComplex {
    SimplicialComplex::from_maximal(
        labels(&["v1", "v2", "v3", "v4", "v5", "v6"]),
        &[
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 4],
            vec![0, 3, 5],
            vec![0, 4, 5],
            vec![1, 2, 5],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![2, 3, 4],
            vec![2, 3, 5],
        ],
    )
    .unwrap()
}

/// Torus as the staircase product of two order-compatible hexagons.
pub fn hexagon_torus_product() -> ProductComplex {
    let h = hexagon_compat();
    product_complex(&h, &h)
}

/// Torus as a plain complex (36 vertices, 108 edges, 72 triangles).
pub fn hexagon_torus() -> SimplicialComplex {
    hexagon_torus_product().complex
}

/// Suspension of the order-compatible hexagon: a two-sphere with poles
/// n and s, invariant under the hexagon's rotations.
pub fn suspension_hexagon() -> SimplicialComplex {
    let mut maximal = Vec::new();
    for edge in hexagon_compat().simplices(1) {
        maximal.push(vec![edge[0], edge[1], 6]);
        maximal.push(vec![edge[0], edge[1], 7]);
    }
    SimplicialComplex::from_maximal(
        labels(&["v0", "v1", "v2", "v3", "v4", "v5", "n", "s"]),
        &maximal,
    )
    .unwrap()
}

/// The group acting only through the identity.
pub fn trivial_action(c: SimplicialComplex) -> SimplicialAction {
    let n = c.vertex_count();
    SimplicialAction::new(c, FiniteGroup::trivial(), vec![(0..n).collect()]).unwrap()
}

/// Reflection of the hexagon across the v0-v3 axis, fixing v0 and v3.
pub fn hexagon_reflection() -> SimplicialAction {
    cyclic_action(hexagon(), 2, vec![0, 5, 4, 3, 2, 1])
}

/// Rotation of order three on the order-compatible hexagon (two steps along
/// the cycle v0 v1 v3 v5 v4 v2); a free action.
pub fn hexagon_rotation3() -> SimplicialAction {
    cyclic_action(hexagon_compat(), 3, vec![3, 5, 1, 4, 0, 2])
}

/// The antipodal involution of the octahedron; free.
pub fn octahedron_antipodal() -> SimplicialAction {
    cyclic_action(octahedron(), 2, vec![1, 0, 3, 2, 5, 4])
}

/// Half turn of the octahedron about the z axis, fixing the two poles.
pub fn octahedron_halfturn() -> SimplicialAction {
    cyclic_action(octahedron(), 2, vec![1, 0, 3, 2, 4, 5])
}

/// Reflection of the octahedron across the equatorial plane, swapping the
/// two poles and fixing the equator.
pub fn octahedron_reflection() -> SimplicialAction {
    cyclic_action(octahedron(), 2, vec![0, 1, 2, 3, 5, 4])
}

/// Diagonal reflection of the torus: the order-compatible hexagon
/// reflection applied to both factors at once.
pub fn torus_diag_reflection() -> SimplicialAction {
    let r = [0usize, 2, 1, 4, 3, 5];
    let mut generator = Vec::with_capacity(36);
    for a in 0..6 {
        for b in 0..6 {
            generator.push(6 * r[a] + r[b]);
        }
    }
    cyclic_action(hexagon_torus(), 2, generator)
}

/// Order-three rotation of the suspended hexagon, fixing the poles.
pub fn suspension_rotation3() -> SimplicialAction {
    cyclic_action(suspension_hexagon(), 3, vec![3, 5, 1, 4, 0, 2, 6, 7])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    #[test]
    fn catalogue_euler_characteristics() {
        assert_eq!(triangle_circle().euler_characteristic(), 0);
        assert_eq!(filled_triangle().euler_characteristic(), 1);
        assert_eq!(hexagon().euler_characteristic(), 0);
        assert_eq!(hexagon_compat().euler_characteristic(), 0);
        assert_eq!(octahedron().euler_characteristic(), 2);
        assert_eq!(rp2_six().euler_characteristic(), 1);
        assert_eq!(hexagon_torus().euler_characteristic(), 0);
        assert_eq!(suspension_hexagon().euler_characteristic(), 2);
    }

    #[test]
    fn hexagon_variants_are_circles() {
        let f = FieldSpec::Rationals;
        assert_eq!(hexagon().betti_numbers(f), vec![1, 1]);
        assert_eq!(hexagon_compat().betti_numbers(f), vec![1, 1]);
    }

    #[test]
    fn suspension_is_a_two_sphere() {
        let s = suspension_hexagon();
        assert_eq!(s.betti_numbers(FieldSpec::Rationals), vec![1, 0, 1]);
        assert_eq!(s.simplices(2).len(), 12);
    }

    #[test]
    fn compat_hexagon_edges_all_increase() {
        for e in hexagon_compat().simplices(1) {
            assert!(e[0] < e[1]);
        }
    }

    #[test]
    fn catalogue_actions_validate() {
        for a in [
            hexagon_reflection(),
            hexagon_rotation3(),
            octahedron_antipodal(),
            octahedron_halfturn(),
            torus_diag_reflection(),
            suspension_rotation3(),
        ] {
            assert!(a.group().order() >= 2);
        }
    }

    #[test]
    fn torus_reflection_fixes_four_vertices() {
        let a = torus_diag_reflection();
        let fixed: Vec<usize> =
            (0..36).filter(|&v| a.apply_vertex(1, v) == v).collect();
        assert_eq!(fixed, vec![0, 5, 30, 35]);
    }
}
