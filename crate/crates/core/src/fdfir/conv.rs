use num_complex::Complex32;
use rayon::prelude::*;

use super::fft::{FftPlan, Ordering};
use crate::{Error, Result};

const ZERO: Complex32 = Complex32::new(0.0, 0.0);

/// Full-length frequency-domain convolution: both operands are padded to
/// the smallest power of two holding the linear convolution, multiplied as
/// spectra, and the first `x.len()` samples of the result returned.
pub fn conv_naive_fd(x: &[Complex32], h: &[Complex32]) -> Result<Vec<Complex32>> {
    if x.is_empty() || h.is_empty() {
        return Err(Error::invalid("convolution operands must be nonempty"));
    }
    let n_full = (x.len() + h.len() - 1).next_power_of_two().max(8);
    let plan = FftPlan::natural(n_full)?;
    let mut xs = padded(x, n_full);
    let mut hs = padded(h, n_full);
    plan.forward_in_place(&mut xs);
    plan.forward_in_place(&mut hs);
    for (a, b) in xs.iter_mut().zip(&hs) {
        *a *= b;
    }
    plan.inverse_in_place(&mut xs);
    xs.truncate(x.len());
    Ok(xs)
}

fn padded(x: &[Complex32], n: usize) -> Vec<Complex32> {
    let mut v = Vec::with_capacity(n);
    v.extend_from_slice(x);
    v.resize(n, ZERO);
    v
}

/// The spectrum of a filter zero-padded to the transform length, stored in
/// the ordering the multiply stage sees.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedTemplate {
    spectrum: Vec<Complex32>,
    ordering: Ordering,
    taps: usize,
}

impl PreparedTemplate {
    pub fn spectrum(&self) -> &[Complex32] {
        &self.spectrum
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn taps(&self) -> usize {
        self.taps
    }

    pub fn n_ft(&self) -> usize {
        self.spectrum.len()
    }
}

pub fn prepare_template(h: &[Complex32], plan: &FftPlan) -> Result<PreparedTemplate> {
    if h.is_empty() {
        return Err(Error::invalid("empty filter"));
    }
    if h.len() >= plan.n_ft() {
        return Err(Error::invalid(format!(
            "filter of {} taps does not fit a {}-point transform",
            h.len(),
            plan.n_ft()
        )));
    }
    let mut spectrum = padded(h, plan.n_ft());
    plan.forward_in_place(&mut spectrum);
    Ok(PreparedTemplate { spectrum, ordering: plan.ordering(), taps: h.len() })
}

/// Chunking of an input stream for overlap-save.
///
/// Chunk `c` reads input samples `[c*stride - overlap, c*stride - overlap + n_ft)`
/// (zeros outside the input) and contributes the `stride` valid samples
/// `[c*stride, (c+1)*stride)` after its first `overlap` results are
/// discarded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OlsGeometry {
    pub n_ft: usize,
    pub overlap: usize,
    pub stride: usize,
    pub chunks: usize,
}

impl OlsGeometry {
    pub fn new(n: usize, n_ft: usize, overlap: usize) -> Result<Self> {
        if overlap >= n_ft {
            return Err(Error::invalid(format!("overlap {overlap} leaves no valid samples in a {n_ft}-point chunk")));
        }
        let stride = n_ft - overlap;
        Ok(Self { n_ft, overlap, stride, chunks: n.div_ceil(stride) })
    }

    /// Geometry for filters of up to `taps` coefficients.
    pub fn for_taps(n: usize, n_ft: usize, taps: usize) -> Result<Self> {
        if taps == 0 || taps >= n_ft {
            return Err(Error::invalid(format!("transform length {n_ft} must exceed the filter length {taps}")));
        }
        Self::new(n, n_ft, taps - 1)
    }

    fn load_chunk(&self, x: &[Complex32], chunk: usize, buf: &mut [Complex32]) {
        let start = (chunk * self.stride) as isize - self.overlap as isize;
        for (j, slot) in buf.iter_mut().enumerate() {
            let idx = start + j as isize;
            *slot = if idx >= 0 && (idx as usize) < x.len() { x[idx as usize] } else { ZERO };
        }
    }
}

/// Forward spectra of every chunk of `x`, in the plan's ordering.
pub fn chunk_spectra(x: &[Complex32], plan: &FftPlan, geometry: &OlsGeometry) -> Vec<Vec<Complex32>> {
    (0..geometry.chunks)
        .into_par_iter()
        .map(|c| {
            let mut buf = vec![ZERO; plan.n_ft()];
            geometry.load_chunk(x, c, &mut buf);
            plan.forward_in_place(&mut buf);
            buf
        })
        .collect()
}

fn check_template(tmpl: &PreparedTemplate, plan: &FftPlan, geometry: &OlsGeometry) -> Result<()> {
    if tmpl.n_ft() != plan.n_ft() {
        return Err(Error::invalid(format!("template prepared for {} points, plan uses {}", tmpl.n_ft(), plan.n_ft())));
    }
    if tmpl.ordering != plan.ordering() {
        return Err(Error::invalid(format!(
            "template spectrum is {:?} but the plan produces {:?} spectra",
            tmpl.ordering,
            plan.ordering()
        )));
    }
    if tmpl.taps > geometry.overlap + 1 {
        return Err(Error::invalid(format!("overlap {} too short for a {}-tap filter", geometry.overlap, tmpl.taps)));
    }
    Ok(())
}

/// Multiplies each chunk spectrum by the template, inverse-transforms, and
/// stitches the valid samples into `n` outputs.
pub fn filter_chunk_spectra(
    spectra: &[Vec<Complex32>],
    tmpl: &PreparedTemplate,
    plan: &FftPlan,
    geometry: &OlsGeometry,
    n: usize,
) -> Result<Vec<Complex32>> {
    check_template(tmpl, plan, geometry)?;
    let mut y = vec![ZERO; n];
    let mut buf = vec![ZERO; plan.n_ft()];
    for (c, spectrum) in spectra.iter().enumerate() {
        for ((b, s), t) in buf.iter_mut().zip(spectrum).zip(&tmpl.spectrum) {
            *b = s * t;
        }
        plan.inverse_in_place(&mut buf);
        write_valid(&buf, c, geometry, &mut y);
    }
    Ok(y)
}

fn write_valid(buf: &[Complex32], chunk: usize, geometry: &OlsGeometry, y: &mut [Complex32]) {
    let start = chunk * geometry.stride;
    if start >= y.len() {
        return;
    }
    let count = geometry.stride.min(y.len() - start);
    y[start..start + count].copy_from_slice(&buf[geometry.overlap..geometry.overlap + count]);
}

/// Overlap-save convolution with `K - 1` samples of overlap per chunk.
pub fn conv_ols_fd(x: &[Complex32], tmpl: &PreparedTemplate, plan: &FftPlan) -> Result<Vec<Complex32>> {
    conv_ols_fd_with_overlap(x, tmpl, plan, tmpl.taps.saturating_sub(1))
}

/// Overlap-save with an explicit overlap, which may exceed `K - 1` when
/// several filters of different lengths share one chunking.
pub fn conv_ols_fd_with_overlap(
    x: &[Complex32],
    tmpl: &PreparedTemplate,
    plan: &FftPlan,
    overlap: usize,
) -> Result<Vec<Complex32>> {
    if x.is_empty() {
        return Err(Error::invalid("empty input"));
    }
    if tmpl.taps >= plan.n_ft() {
        return Err(Error::invalid(format!(
            "transform length {} must exceed the filter length {}",
            plan.n_ft(),
            tmpl.taps
        )));
    }
    let geometry = OlsGeometry::new(x.len(), plan.n_ft(), overlap)?;
    check_template(tmpl, plan, &geometry)?;
    let mut y = vec![ZERO; x.len()];
    let mut buf = vec![ZERO; plan.n_ft()];
    for c in 0..geometry.chunks {
        geometry.load_chunk(x, c, &mut buf);
        plan.forward_in_place(&mut buf);
        for (b, t) in buf.iter_mut().zip(&tmpl.spectrum) {
            *b *= t;
        }
        plan.inverse_in_place(&mut buf);
        write_valid(&buf, c, &geometry, &mut y);
    }
    Ok(y)
}

/// `re^2 + im^2` per sample.
pub fn spectral_power(y: &[Complex32]) -> Vec<f32> {
    y.iter().map(|v| v.re * v.re + v.im * v.im).collect()
}
