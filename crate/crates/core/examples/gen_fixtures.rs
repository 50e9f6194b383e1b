//! Regenerate the JSON fixture complexes under `fixtures/`.
//!
//! Usage: `cargo run -p dihom-core --example gen_fixtures [dir]`

use dihom_core::pcs::{
    hollow_cube, standard_cube, CubeWord, PcsBuilder, PrecubicalSet, StandardCubeIndex,
};

fn pinned_squares() -> PrecubicalSet {
    // Two squares identified on both diagonal corner pairs (-+ and +-).
    let mut b = PcsBuilder::new();
    let v = b.add_vertices(4); // x, y, p (-+ corner), q (+- corner)
    let e_a = b.add_edge(v[0], v[2]);
    let e_b = b.add_edge(v[2], v[1]);
    let e_bp = b.add_edge(v[0], v[3]);
    let e_ap = b.add_edge(v[3], v[1]);
    b.add_square(e_a, e_ap, e_bp, e_b);
    let x2 = b.add_vertex();
    let y2 = b.add_vertex();
    let f_a = b.add_edge(x2, v[2]);
    let f_b = b.add_edge(v[2], y2);
    let f_bp = b.add_edge(x2, v[3]);
    let f_ap = b.add_edge(v[3], y2);
    b.add_square(f_a, f_ap, f_bp, f_b);
    b.finish().expect("pinned squares")
}

fn cylinder() -> PrecubicalSet {
    // Two loops joined by an edge and a square whose parallel faces coincide.
    let mut b = PcsBuilder::new();
    let v = b.add_vertices(2);
    let a = b.add_edge(v[0], v[1]);
    let lx = b.add_edge(v[0], v[0]);
    let ly = b.add_edge(v[1], v[1]);
    b.add_square(lx, ly, a, a);
    b.finish().expect("cylinder")
}

fn pcs_geom(which: usize) -> PrecubicalSet {
    let mut b = PcsBuilder::new();
    match which {
        1 => {
            let v = b.add_vertices(2);
            b.add_edge(v[0], v[1]);
            b.add_edge(v[0], v[1]);
        }
        2 => {
            let v = b.add_vertex();
            b.add_edge(v, v);
        }
        3 => {
            let v = b.add_vertices(2);
            b.add_edge(v[0], v[1]);
            b.add_edge(v[1], v[0]);
        }
        4 => {
            let v = b.add_vertices(3);
            b.add_edge(v[0], v[1]);
            b.add_edge(v[1], v[2]);
            b.add_edge(v[2], v[0]);
        }
        _ => unreachable!(),
    }
    b.finish().expect("pcs-geom")
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".to_string());
    std::fs::create_dir_all(&dir).expect("fixtures dir");
    let write = |name: &str, c: &PrecubicalSet| {
        let path = format!("{dir}/{name}.json");
        let pretty = serde_json::to_string_pretty(&c.to_json()).expect("json");
        std::fs::write(&path, pretty + "\n").expect("write fixture");
        println!("wrote {path}");
    };
    for n in 0..=4 {
        write(&format!("y{n}"), &standard_cube(n).expect("yn"));
    }
    write("boundary_y3", &hollow_cube(3).expect("dy3"));
    let dy3 = hollow_cube(3).expect("dy3");
    let idx = StandardCubeIndex::new(3);
    let bottom = idx.id_of(&CubeWord::parse("0-0").unwrap()).unwrap();
    let (cwb, _) = dy3.subcomplex(|cell| cell != bottom);
    write("cube_without_bottom", &cwb);
    write("pinned_squares", &pinned_squares());
    // A half hollow cube anchored at a corner where the four-template cube
    // property passes vacuously while the link condition fails.
    write(
        "half_cube_noncanonical",
        &dihom_core::pcs::lambda_complex(&[
            dihom_core::pcs::Sign::Neg,
            dihom_core::pcs::Sign::Pos,
            dihom_core::pcs::Sign::Pos,
        ])
        .expect("lambda"),
    );
    write("cylinder", &cylinder());
    for i in 1..=4 {
        write(&format!("pcs_geom_{i}"), &pcs_geom(i));
    }
}
