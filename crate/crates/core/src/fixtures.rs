//! Bundled example systems, parsed from the JSON files in `fixtures/`.

use num_complex::Complex64;

use crate::geometry::{Point, Similarity};
use crate::system::{parse_system, PolygonalTreeSystem, DEFAULT_EPSILON_REL};

pub const EX22_JSON: &str = include_str!("../fixtures/ex22.json");
pub const HATA_JSON: &str = include_str!("../fixtures/hata.json");
pub const OVERLAP_JSON: &str = include_str!("../fixtures/overlap.json");
pub const EX22_VARIANT_JSON: &str = include_str!("../fixtures/ex22_variant.json");
pub const ZIPPER_JSON: &str = include_str!("../fixtures/zipper.json");
pub const DISJOINT_JSON: &str = include_str!("../fixtures/disjoint.json");
pub const EX24_JSON: &str = include_str!("../fixtures/ex24.json");

fn load(text: &str) -> PolygonalTreeSystem {
    parse_system(text).expect("bundled fixture parses")
}

/// Quadrilateral dendrite with `S_1(z) = z/2`, `S_2(z) = iz/√2 + 1`.
pub fn ex22() -> PolygonalTreeSystem {
    load(EX22_JSON)
}

/// Hata's tree-like set on its 7-gon.
pub fn hata() -> PolygonalTreeSystem {
    load(HATA_JSON)
}

/// `ex22` with the second map replaced by `z/2 + 1/2`; images overlap.
pub fn overlap() -> PolygonalTreeSystem {
    load(OVERLAP_JSON)
}

/// Same incidence pattern as `ex22` with side parameter 0.6.
pub fn ex22_variant() -> PolygonalTreeSystem {
    load(EX22_VARIANT_JSON)
}

/// Two reflected halves of a triangle; the main tree is a single arc.
pub fn zipper() -> PolygonalTreeSystem {
    load(ZIPPER_JSON)
}

/// Two far-apart squares inside the unit square.
pub fn disjoint() -> PolygonalTreeSystem {
    load(DISJOINT_JSON)
}

/// Nine-map system on a kite with angles 30°, 110°, 110°, 110°.
pub fn ex24() -> PolygonalTreeSystem {
    load(EX24_JSON)
}

pub fn unit_square() -> Vec<Point> {
    vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ]
}

fn sim(a: Complex64, b: Complex64) -> Similarity {
    Similarity::new(a, b, false).expect("contraction")
}

/// Unit square with two corner squares of ratio `0.1` and a third one at
/// horizontal offset `0.1 + gap`, so the closest pair of disjoint cells is
/// exactly `gap` apart.
pub fn gap_system(gap: f64) -> PolygonalTreeSystem {
    let r = Complex64::new(0.1, 0.0);
    let maps = vec![
        sim(r, Complex64::new(0.0, 0.0)),
        sim(r, Complex64::new(0.9, 0.0)),
        sim(r, Complex64::new(0.1 + gap, 0.0)),
    ];
    PolygonalTreeSystem::new("gap", unit_square(), maps, DEFAULT_EPSILON_REL).expect("valid")
}

/// Unit square with `[0, ½]²` and `[½, 1]²`, meeting at a right angle.
pub fn corner_squares() -> PolygonalTreeSystem {
    let h = Complex64::new(0.5, 0.0);
    let maps = vec![
        sim(h, Complex64::new(0.0, 0.0)),
        sim(h, Complex64::new(0.5, 0.5)),
    ];
    PolygonalTreeSystem::new("corner-squares", unit_square(), maps, DEFAULT_EPSILON_REL)
        .expect("valid")
}

/// Quadrilateral family sharing the incidence pattern of [`ex22`]:
/// `P = (0,0), (1,0), (1,s), (1−s², s)`, `S_1(z) = (1−s²)z`, `S_2(z) = isz + 1`.
/// `s = 1/√2` gives `ex22`.
pub fn quad_family(s: f64) -> PolygonalTreeSystem {
    let k = 1.0 - s * s;
    let vertices = vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, s),
        Point::new(k, s),
    ];
    let maps = vec![
        sim(Complex64::new(k, 0.0), Complex64::new(0.0, 0.0)),
        sim(Complex64::new(0.0, s), Complex64::new(1.0, 0.0)),
    ];
    PolygonalTreeSystem::new(format!("quad-{s}"), vertices, maps, DEFAULT_EPSILON_REL)
        .expect("valid")
}
