#![no_main]

use libfuzzer_sys::fuzz_target;

use dihom_core::paths::{PathT, TileIndex};
use dihom_core::pcs::standard_cube;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(path) = PathT::parse(text) else { return };
    let c = standard_cube(3).unwrap();
    if path.validate(&c).is_ok() && path.len() <= 6 {
        let tiles = TileIndex::new(&c);
        let _ = dihom_core::paths::dihomotopy_neighbors(&c, &tiles, &path);
        let printed = path.display(&c);
        assert_eq!(PathT::parse(&printed).unwrap(), path);
    }
});
