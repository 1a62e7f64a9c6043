#![no_main]

use ftconv::formats::{decode_bank, encode_bank};
use libfuzzer_sys::fuzz_target;

// First byte picks the template length, the rest is the bank file.
fuzz_target!(|data: &[u8]| {
    let Some((&taps, body)) = data.split_first() else { return };
    if let Ok(bank) = decode_bank(body, taps as usize) {
        assert_eq!(bank.max_taps(), taps as usize);
        assert_eq!(encode_bank(&bank).unwrap(), body);
    }
});
