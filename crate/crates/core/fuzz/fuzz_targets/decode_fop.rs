#![no_main]

use ftconv::formats::{decode_fop, encode_fop};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(plane) = decode_fop(data) {
        if plane.n_rows() > 0 {
            assert_eq!(encode_fop(&plane).unwrap(), data);
        }
    }
});
