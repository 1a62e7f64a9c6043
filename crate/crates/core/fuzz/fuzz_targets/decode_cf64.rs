#![no_main]

use ftconv::formats::{decode_cf64, encode_cf64};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(buf) = decode_cf64(data) {
        assert_eq!(encode_cf64(&buf), data);
    }
});
