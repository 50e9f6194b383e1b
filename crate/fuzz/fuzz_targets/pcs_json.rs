#![no_main]

use libfuzzer_sys::fuzz_target;

use dihom_core::npc;
use dihom_core::pcs::{tiles, PrecubicalSet};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(complex) = PrecubicalSet::from_json_str(text) else { return };
    // Decoded complexes are structurally sound: every operation below must be
    // panic-free even when the presheaf relations fail.
    let report = complex.validate();
    let back = PrecubicalSet::from_json_str(&complex.to_json_string()).unwrap();
    assert_eq!(back, complex);
    if complex.total_cells() <= 300 {
        let _ = tiles(&complex);
        let _ = complex.truncate(2);
        let _ = complex.to_dot("fuzz");
        if report.is_ok() && complex.cell_count(0) > 0 {
            let _ = npc::link(&complex, 0);
            let geometric = npc::check_geometric_via_elements(&complex).0;
            if geometric && complex.total_cells() <= 40 && complex.dim() <= 3 {
                if let Ok(rg) =
                    dihom_core::gms::realize_grid(&complex, 2, dihom_core::gms::CubeMetric::Linf, false)
                {
                    assert!(rg.space.validate().is_empty());
                    let sym = dihom_core::gms::symmetrize_left(&rg.space);
                    assert!(sym.validate().is_empty());
                    if rg.space.len() >= 2 {
                        let _ = dihom_core::gms::chain_distance(&rg.space, &[(0, 1)]);
                    }
                }
            }
        }
    }
});
