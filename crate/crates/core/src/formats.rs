//! File formats.
//!
//! * `.cf32` / `.cf64`: raw interleaved little-endian `re, im, re, im, ...`
//!   in 32- or 64-bit floats, no header.
//! * Filter banks: one `.cf32` holding the templates back to back, each
//!   `taps` samples long.
//! * Filter-output-plane: 16-byte header (`b"FOP1"`, `u32` rows, `u32`
//!   columns, `u32` reserved = 0, all little-endian) followed by the rows as
//!   little-endian `f32`.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::{Complex32, Complex64};

use crate::buffer::first_non_finite;
use crate::fdfir::FilterOutputPlane;
use crate::{ComplexBuffer, DoubleBuffer, Error, FilterBank, Result, SingleBuffer};

pub const FOP_MAGIC: &[u8; 4] = b"FOP1";
pub const FOP_HEADER_LEN: usize = 16;

pub fn encode_cf32(samples: &[Complex32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len() * 8);
    for c in samples {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

pub fn encode_cf64(samples: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len() * 16);
    for c in samples {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

/// Decodes `.cf32` bytes without checking the values.
pub fn decode_cf32_raw(bytes: &[u8]) -> Result<Vec<Complex32>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::Malformed(format!("{} bytes is not a whole number of cf32 samples", bytes.len())));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|b| {
            Complex32::new(f32::from_le_bytes([b[0], b[1], b[2], b[3]]), f32::from_le_bytes([b[4], b[5], b[6], b[7]]))
        })
        .collect())
}

pub fn decode_cf32(bytes: &[u8]) -> Result<SingleBuffer> {
    ComplexBuffer::new(decode_cf32_raw(bytes)?)
}

pub fn decode_cf64(bytes: &[u8]) -> Result<DoubleBuffer> {
    if !bytes.len().is_multiple_of(16) {
        return Err(Error::Malformed(format!("{} bytes is not a whole number of cf64 samples", bytes.len())));
    }
    let data = bytes
        .chunks_exact(16)
        .map(|b| {
            let (re, im) = b.split_at(8);
            Complex64::new(
                f64::from_le_bytes(re.try_into().expect("8 bytes")),
                f64::from_le_bytes(im.try_into().expect("8 bytes")),
            )
        })
        .collect();
    ComplexBuffer::new(data)
}

/// Decodes a bank of `taps`-long templates. A non-finite coefficient is
/// reported with its 1-based filter index.
pub fn decode_bank(bytes: &[u8], taps: usize) -> Result<FilterBank> {
    let coeffs = decode_cf32_raw(bytes)?;
    if taps > 0 && coeffs.len() % taps == 0 {
        if let Some(i) = first_non_finite(&coeffs) {
            return Err(Error::Malformed(format!("filter {}: coefficient {} is not finite", i / taps + 1, i % taps)));
        }
    }
    FilterBank::from_flat(coeffs, taps)
}

pub fn encode_bank(bank: &FilterBank) -> Result<Vec<u8>> {
    let taps = bank.max_taps();
    if bank.templates().iter().any(|t| t.len() != taps) {
        return Err(Error::invalid("bank files need templates of equal length"));
    }
    Ok(bank.templates().iter().flat_map(|t| encode_cf32(t)).collect())
}

pub fn encode_fop(plane: &FilterOutputPlane) -> Result<Vec<u8>> {
    let rows = u32::try_from(plane.n_rows()).map_err(|_| Error::invalid("too many rows"))?;
    let cols = u32::try_from(plane.n_cols()).map_err(|_| Error::invalid("too many columns"))?;
    let mut out = Vec::with_capacity(FOP_HEADER_LEN + plane.n_rows() * plane.n_cols() * 4);
    out.extend_from_slice(FOP_MAGIC);
    out.extend_from_slice(&rows.to_le_bytes());
    out.extend_from_slice(&cols.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    for row in plane.rows() {
        for v in row {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_fop(bytes: &[u8]) -> Result<FilterOutputPlane> {
    if bytes.len() < FOP_HEADER_LEN {
        return Err(Error::Malformed("plane file shorter than its header".into()));
    }
    if &bytes[..4] != FOP_MAGIC {
        return Err(Error::Malformed("bad plane file magic".into()));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes")) as usize;
    let (rows, cols, reserved) = (word(4), word(8), word(12));
    if reserved != 0 {
        return Err(Error::Malformed("reserved header field is not zero".into()));
    }
    let payload = rows
        .checked_mul(cols)
        .and_then(|v| v.checked_mul(4))
        .ok_or_else(|| Error::Malformed("plane dimensions overflow".into()))?;
    if bytes.len() - FOP_HEADER_LEN != payload {
        return Err(Error::Malformed(format!(
            "{rows}x{cols} plane needs {payload} payload bytes, found {}",
            bytes.len() - FOP_HEADER_LEN
        )));
    }
    let values: Vec<f32> =
        bytes[FOP_HEADER_LEN..].chunks_exact(4).map(|b| f32::from_le_bytes(b.try_into().expect("4 bytes"))).collect();
    let data = if cols == 0 { vec![Vec::new(); rows] } else { values.chunks(cols).map(<[f32]>::to_vec).collect() };
    FilterOutputPlane::new(data)
}

/// Plane as CSV: one line per row, `row,v0,v1,...`.
pub fn write_fop_csv<W: Write>(plane: &FilterOutputPlane, mut w: W) -> Result<()> {
    for (r, row) in plane.rows().iter().enumerate() {
        write!(w, "{r}")?;
        for v in row {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_cf32(path: impl AsRef<Path>) -> Result<SingleBuffer> {
    decode_cf32(&fs::read(path)?)
}

pub fn write_cf32(path: impl AsRef<Path>, samples: &[Complex32]) -> Result<()> {
    Ok(fs::write(path, encode_cf32(samples))?)
}

pub fn read_cf64(path: impl AsRef<Path>) -> Result<DoubleBuffer> {
    decode_cf64(&fs::read(path)?)
}

pub fn write_cf64(path: impl AsRef<Path>, samples: &[Complex64]) -> Result<()> {
    Ok(fs::write(path, encode_cf64(samples))?)
}

pub fn read_bank(path: impl AsRef<Path>, taps: usize) -> Result<FilterBank> {
    decode_bank(&fs::read(path)?, taps)
}

pub fn write_bank(path: impl AsRef<Path>, bank: &FilterBank) -> Result<()> {
    Ok(fs::write(path, encode_bank(bank)?)?)
}

pub fn read_fop(path: impl AsRef<Path>) -> Result<FilterOutputPlane> {
    decode_fop(&fs::read(path)?)
}

pub fn write_fop(path: impl AsRef<Path>, plane: &FilterOutputPlane) -> Result<()> {
    Ok(fs::write(path, encode_fop(plane)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{generate_bank, SignalRng};
    use proptest::prelude::*;

    #[test]
    fn cf32_layout() {
        let bytes = encode_cf32(&[Complex32::new(1.0, -2.0)]);
        assert_eq!(bytes, [1.0f32.to_le_bytes(), (-2.0f32).to_le_bytes()].concat());
        assert!(decode_cf32(&bytes[..7]).is_err());
        let nan = encode_cf32(&[Complex32::new(f32::NAN, 0.0)]);
        assert!(decode_cf32(&nan).is_err());
        assert!(decode_cf32(&[]).unwrap().is_empty());
    }

    #[test]
    fn cf64_round_trip() {
        let x: Vec<Complex64> = (0..10).map(|i| Complex64::new(i as f64 / 3.0, -(i as f64).sqrt())).collect();
        assert_eq!(decode_cf64(&encode_cf64(&x)).unwrap().as_slice(), &x[..]);
        assert!(decode_cf64(&[0u8; 15]).is_err());
    }

    #[test]
    fn bank_round_trip_and_corruption() {
        let bank = generate_bank(4, 5, 9).unwrap();
        let mut bytes = encode_bank(&bank).unwrap();
        assert_eq!(decode_bank(&bytes, 9).unwrap(), bank);
        // poison filter 4, coefficient 2
        let at = (3 * 9 + 2) * 8;
        bytes[at..at + 4].copy_from_slice(&f32::NAN.to_le_bytes());
        let err = decode_bank(&bytes, 9).unwrap_err().to_string();
        assert!(err.contains("filter 4"), "{err}");
        assert!(decode_bank(&bytes, 7).is_err());
        assert!(decode_bank(&bytes, 0).is_err());
    }

    #[test]
    fn fop_round_trip_and_header_checks() {
        let plane = FilterOutputPlane::new(vec![vec![0.0, 1.5], vec![2.0, 3.0], vec![4.0, 5.25]]).unwrap();
        let bytes = encode_fop(&plane).unwrap();
        assert_eq!(&bytes[..4], b"FOP1");
        assert_eq!(bytes.len(), 16 + 6 * 4);
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 3);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 2);
        assert_eq!(decode_fop(&bytes).unwrap(), plane);

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode_fop(&bad).is_err());
        assert!(decode_fop(&bytes[..bytes.len() - 1]).is_err());
        let mut reserved = bytes.clone();
        reserved[12] = 1;
        assert!(decode_fop(&reserved).is_err());
        let mut negative = bytes.clone();
        negative[16..20].copy_from_slice(&(-1.0f32).to_le_bytes());
        assert!(decode_fop(&negative).is_err());
        let mut huge = bytes;
        huge[4..12].copy_from_slice(&[0xff; 8]);
        assert!(decode_fop(&huge).is_err());
    }

    #[test]
    fn csv_export() {
        let plane = FilterOutputPlane::new(vec![vec![0.5, 1.0], vec![2.0, 0.0]]).unwrap();
        let mut out = Vec::new();
        write_fop_csv(&plane, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0,0.5,1\n1,2,0\n");
    }

    proptest! {
        #[test]
        fn cf32_file_round_trip_is_bit_identical(seed in any::<u64>(), n in 0usize..2000) {
            let x = SignalRng::new(seed).fill(n);
            let dir = std::env::temp_dir().join(format!("ftconv-cf32-{}-{seed}-{n}", std::process::id()));
            write_cf32(&dir, &x).unwrap();
            let back = read_cf32(&dir).unwrap();
            std::fs::remove_file(&dir).ok();
            prop_assert_eq!(back.as_slice(), &x[..]);
        }

        #[test]
        fn decoders_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..200), taps in 0usize..8) {
            let _ = decode_cf32(&bytes);
            let _ = decode_cf64(&bytes);
            let _ = decode_bank(&bytes, taps);
            let _ = decode_fop(&bytes);
        }
    }
}
