#![no_main]

use libfuzzer_sys::fuzz_target;

use dihom_core::lang::{self, Program};

// Parallel width bounds the tensor dimension of the semantics.
fn width(p: &Program) -> usize {
    match p {
        Program::One | Program::Action(_) | Program::Lock(_) | Program::Unlock(_) => 1,
        Program::Seq(a, b) | Program::Or(a, b) => width(a).max(width(b)),
        Program::Par(a, b) => width(a) + width(b),
        Program::Star(a) => width(a),
    }
}

fn size(p: &Program) -> usize {
    match p {
        Program::One | Program::Action(_) | Program::Lock(_) | Program::Unlock(_) => 1,
        Program::Seq(a, b) | Program::Or(a, b) | Program::Par(a, b) => 1 + size(a) + size(b),
        Program::Star(a) => 1 + size(a),
    }
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(program) = lang::parse(text) else { return };
    let _ = lang::lint(&program);
    let _ = lang::delta(&program);
    if width(&program) <= 4 && size(&program) <= 40 {
        let cs = lang::cs_semantics(&program);
        assert!(cs.pcs.validate().is_ok());
        let _ = lang::semantics(&program);
    }
});
