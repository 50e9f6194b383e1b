#![no_main]

use libfuzzer_sys::fuzz_target;

use dihom_core::paths::TileIndex;
use dihom_core::pcs::standard_cube;
use dihom_core::twocells::{rewrite_to_canonical, validate_cell, FormalTwoCell};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cell) = FormalTwoCell::from_json_str(text) else { return };
    let back = FormalTwoCell::from_json_str(&cell.to_json_string()).unwrap();
    assert_eq!(back, cell);
    if cell.cell_length() <= 8 && cell.source.len() <= 6 {
        let c = standard_cube(2).unwrap();
        let tiles = TileIndex::new(&c);
        if validate_cell(&c, &tiles, &cell).is_empty() {
            // Valid cells must canonicalize without panicking.
            let _ = rewrite_to_canonical(&c, &tiles, &cell);
        }
    }
});
