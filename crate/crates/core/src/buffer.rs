use std::ops::Deref;

use num_complex::Complex;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Single,
    Double,
}

/// Scalar types a [`ComplexBuffer`] can hold.
pub trait Real: Copy + Send + Sync + PartialEq + std::fmt::Debug + 'static {
    const PRECISION: Precision;
    fn is_finite(self) -> bool;
}

impl Real for f32 {
    const PRECISION: Precision = Precision::Single;
    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Double;
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

/// A sequence of complex samples with uniform precision.
///
/// Buffers built through [`ComplexBuffer::new`] are checked to contain only
/// finite samples; everything downstream assumes that.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComplexBuffer<T: Real> {
    data: Vec<Complex<T>>,
}

pub type SingleBuffer = ComplexBuffer<f32>;
pub type DoubleBuffer = ComplexBuffer<f64>;

impl<T: Real> ComplexBuffer<T> {
    pub fn new(data: Vec<Complex<T>>) -> Result<Self> {
        if let Some(i) = first_non_finite(&data) {
            return Err(Error::Malformed(format!("sample {i} is not finite")));
        }
        Ok(Self { data })
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<Complex<T>> {
        self.data
    }
}

impl SingleBuffer {
    pub fn to_double(&self) -> DoubleBuffer {
        ComplexBuffer { data: self.data.iter().map(|c| Complex::new(c.re as f64, c.im as f64)).collect() }
    }
}

impl DoubleBuffer {
    /// Rounds every sample to single precision.
    pub fn to_single(&self) -> SingleBuffer {
        ComplexBuffer { data: self.data.iter().map(|c| Complex::new(c.re as f32, c.im as f32)).collect() }
    }
}

impl<T: Real> Deref for ComplexBuffer<T> {
    type Target = [Complex<T>];

    fn deref(&self) -> &Self::Target {
        &self.data
    }
}

pub(crate) fn first_non_finite<T: Real>(data: &[Complex<T>]) -> Option<usize> {
    data.iter().position(|c| !(c.re.is_finite() && c.im.is_finite()))
}

/// An ordered bank of `M` filter templates of at most `K` taps each.
///
/// Templates are numbered 1..=M when they appear as rows of a
/// filter-output-plane; row 0 holds the unfiltered input.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterBank {
    templates: Vec<SingleBuffer>,
    max_taps: usize,
}

impl FilterBank {
    pub fn new(templates: Vec<SingleBuffer>) -> Result<Self> {
        if templates.is_empty() {
            return Err(Error::invalid("filter bank needs at least one template"));
        }
        if let Some(i) = templates.iter().position(|t| t.is_empty()) {
            return Err(Error::invalid(format!("template {} is empty", i + 1)));
        }
        let max_taps = templates.iter().map(|t| t.len()).max().unwrap_or(0);
        Ok(Self { templates, max_taps })
    }

    /// Builds a bank from `taps`-long rows of a flat coefficient array. Rows
    /// containing non-finite coefficients are rejected by their 1-based
    /// filter index.
    pub fn from_flat(coeffs: Vec<Complex<f32>>, taps: usize) -> Result<Self> {
        if taps == 0 {
            return Err(Error::invalid("tap count must be at least 1"));
        }
        if coeffs.is_empty() || !coeffs.len().is_multiple_of(taps) {
            return Err(Error::Malformed(format!(
                "{} coefficients do not split into {taps}-tap templates",
                coeffs.len()
            )));
        }
        let templates = coeffs
            .chunks(taps)
            .enumerate()
            .map(|(i, row)| {
                ComplexBuffer::new(row.to_vec())
                    .map_err(|e| Error::Malformed(format!("filter {}: {}", i + 1, strip_malformed(e))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(templates)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn max_taps(&self) -> usize {
        self.max_taps
    }

    pub fn templates(&self) -> &[SingleBuffer] {
        &self.templates
    }

    /// Template by filter number (1-based).
    pub fn filter(&self, index: usize) -> Option<&SingleBuffer> {
        index.checked_sub(1).and_then(|i| self.templates.get(i))
    }
}

fn strip_malformed(e: Error) -> String {
    match e {
        Error::Malformed(m) => m,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        let err = SingleBuffer::new(vec![Complex::new(0.0, 0.0), Complex::new(f32::NAN, 1.0)]);
        assert!(matches!(err, Err(Error::Malformed(_))));
        assert!(SingleBuffer::new(vec![Complex::new(f32::INFINITY, 0.0)]).is_err());
        assert!(SingleBuffer::new(vec![]).is_ok());
    }

    #[test]
    fn precision_tags() {
        assert_eq!(SingleBuffer::default().precision(), Precision::Single);
        assert_eq!(DoubleBuffer::default().precision(), Precision::Double);
    }

    #[test]
    fn bank_from_flat_names_bad_filter() {
        let mut coeffs = vec![Complex::new(1.0f32, 0.0); 12];
        coeffs[7].im = f32::NAN;
        let err = FilterBank::from_flat(coeffs, 4).unwrap_err().to_string();
        assert!(err.contains("filter 2"), "{err}");
    }

    #[test]
    fn bank_shape() {
        let bank = FilterBank::from_flat(vec![Complex::new(0.5f32, 0.0); 12], 3).unwrap();
        assert_eq!(bank.len(), 4);
        assert_eq!(bank.max_taps(), 3);
        assert!(bank.filter(0).is_none());
        assert_eq!(bank.filter(4).unwrap().len(), 3);
        assert!(FilterBank::from_flat(vec![Complex::new(0.5f32, 0.0); 10], 3).is_err());
        assert!(FilterBank::new(vec![]).is_err());
    }
}
