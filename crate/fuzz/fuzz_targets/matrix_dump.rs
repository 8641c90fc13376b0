#![no_main]

use libfuzzer_sys::fuzz_target;
use sieveforge::algebra::{dump_matrix, parse_matrix_dump, PathMatrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(m) = parse_matrix_dump(text) else {
        return;
    };
    let again = parse_matrix_dump(&dump_matrix(&m)).expect("dumps parse");
    // NaN entries never compare equal, so only exact kinds are checked.
    if matches!(m, PathMatrix::BigInt(_) | PathMatrix::Rational(_)) {
        assert_eq!(again, m);
    }
});
