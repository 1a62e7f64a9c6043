#![no_main]

use ftconv::formats::{decode_cf32, encode_cf32};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(buf) = decode_cf32(data) {
        assert_eq!(encode_cf32(&buf), data);
    }
});
