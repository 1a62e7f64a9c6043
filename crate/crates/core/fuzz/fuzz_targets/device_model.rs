#![no_main]

use ftconv::costmodel::{presets, sweep, DeviceModel};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(device) = DeviceModel::from_json(text) {
            let _ = sweep(&device, &presets::power_kernels(), presets::task_problem(84));
        }
    }
});
