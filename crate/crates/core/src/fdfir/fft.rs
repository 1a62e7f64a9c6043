//! Iterative power-of-two FFT: radix-4 decimation-in-time stages, preceded
//! by a single radix-2 stage when `log2(n)` is odd.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex32;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Order of the spectrum samples a transform produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    #[default]
    Natural,
    BitReversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Debug)]
pub struct FftPlan {
    n_ft: usize,
    points_per_cycle: usize,
    ordering: Ordering,
    // exp(-2*pi*i*j/n) for j in 0..n, rounded from double precision
    twiddles: Arc<[Complex32]>,
    bitrev: Arc<[u32]>,
}

impl PartialEq for FftPlan {
    fn eq(&self, other: &Self) -> bool {
        self.n_ft == other.n_ft && self.points_per_cycle == other.points_per_cycle && self.ordering == other.ordering
    }
}

impl FftPlan {
    pub fn new(n_ft: usize, points_per_cycle: usize, ordering: Ordering) -> Result<Self> {
        if !n_ft.is_power_of_two() || n_ft < 8 {
            return Err(Error::invalid(format!("transform length must be a power of two >= 8, got {n_ft}")));
        }
        if n_ft > u32::MAX as usize {
            return Err(Error::invalid("transform length too large"));
        }
        if !matches!(points_per_cycle, 4 | 8) {
            return Err(Error::invalid(format!("points per cycle must be 4 or 8, got {points_per_cycle}")));
        }
        let twiddles = (0..n_ft)
            .map(|j| {
                let phase = -2.0 * PI * j as f64 / n_ft as f64;
                Complex32::new(phase.cos() as f32, phase.sin() as f32)
            })
            .collect();
        let bits = n_ft.trailing_zeros();
        let bitrev = (0..n_ft).map(|i| reverse_bits(i, bits) as u32).collect();
        Ok(Self { n_ft, points_per_cycle, ordering, twiddles, bitrev })
    }

    pub fn natural(n_ft: usize) -> Result<Self> {
        Self::new(n_ft, 8, Ordering::Natural)
    }

    pub fn n_ft(&self) -> usize {
        self.n_ft
    }

    pub fn points_per_cycle(&self) -> usize {
        self.points_per_cycle
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn with_ordering(&self, ordering: Ordering) -> Self {
        Self { ordering, ..self.clone() }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_ft {
            return Err(Error::invalid(format!("expected {} samples for this plan, got {len}", self.n_ft)));
        }
        Ok(())
    }

    /// Time samples (natural order) to a spectrum in the plan's ordering.
    pub(crate) fn forward_in_place(&self, data: &mut [Complex32]) {
        self.permute(data);
        self.butterflies(data, false);
        if self.ordering == Ordering::BitReversed {
            self.permute(data);
        }
    }

    /// Spectrum in the plan's ordering to time samples in natural order,
    /// scaled by `1/n`. A bit-reversed spectrum feeds the butterflies
    /// directly, so both orderings run the identical arithmetic.
    pub(crate) fn inverse_in_place(&self, data: &mut [Complex32]) {
        if self.ordering == Ordering::Natural {
            self.permute(data);
        }
        self.butterflies(data, true);
        let scale = 1.0 / self.n_ft as f32;
        data.iter_mut().for_each(|v| *v *= scale);
    }

    fn permute(&self, data: &mut [Complex32]) {
        for (i, &j) in self.bitrev.iter().enumerate() {
            let j = j as usize;
            if i < j {
                data.swap(i, j);
            }
        }
    }

    fn butterflies(&self, data: &mut [Complex32], inverse: bool) {
        let n = self.n_ft;
        let tw = |idx: usize| {
            let w = self.twiddles[idx];
            if inverse {
                w.conj()
            } else {
                w
            }
        };
        // multiply by -i (forward) or +i (inverse)
        let rot = |v: Complex32| {
            if inverse {
                Complex32::new(-v.im, v.re)
            } else {
                Complex32::new(v.im, -v.re)
            }
        };

        let mut len = 1;
        if n.trailing_zeros() % 2 == 1 {
            for pair in data.chunks_exact_mut(2) {
                let (a, b) = (pair[0], pair[1]);
                pair[0] = a + b;
                pair[1] = a - b;
            }
            len = 2;
        }
        while len < n {
            let step = n / (4 * len);
            for block in data.chunks_exact_mut(4 * len) {
                let (q0, rest) = block.split_at_mut(len);
                let (q1, rest) = rest.split_at_mut(len);
                let (q2, q3) = rest.split_at_mut(len);
                for k in 0..len {
                    // q0/q1/q2/q3 hold sub-spectra of samples 0, 2, 1, 3 (mod 4)
                    let t0 = q0[k];
                    let t1 = q2[k] * tw(k * step);
                    let t2 = q1[k] * tw(2 * k * step);
                    let t3 = q3[k] * tw(3 * k * step);
                    let s02 = t0 + t2;
                    let d02 = t0 - t2;
                    let s13 = t1 + t3;
                    let d13 = rot(t1 - t3);
                    q0[k] = s02 + s13;
                    q1[k] = d02 + d13;
                    q2[k] = s02 - s13;
                    q3[k] = d02 - d13;
                }
            }
            len *= 4;
        }
    }
}

fn reverse_bits(i: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - bits)
    }
}

/// Forward: natural-order samples to a spectrum in `plan.ordering()`.
/// Inverse: a spectrum in `plan.ordering()` to natural-order samples,
/// scaled by `1/n`. Forward then inverse with the same plan is the identity.
pub fn fft(x: &[Complex32], plan: &FftPlan, direction: Direction) -> Result<Vec<Complex32>> {
    plan.check_len(x.len())?;
    let mut data = x.to_vec();
    match direction {
        Direction::Forward => plan.forward_in_place(&mut data),
        Direction::Inverse => plan.inverse_in_place(&mut data),
    }
    Ok(data)
}

/// Moves element `i` to the index whose `log2(n_ft)`-bit representation is
/// `i` reversed. Applying it twice restores the input.
pub fn bit_reverse_permute<T: Copy>(x: &[T], n_ft: usize) -> Result<Vec<T>> {
    if !n_ft.is_power_of_two() {
        return Err(Error::invalid(format!("{n_ft} is not a power of two")));
    }
    if x.len() != n_ft {
        return Err(Error::invalid(format!("expected {n_ft} elements, got {}", x.len())));
    }
    let bits = n_ft.trailing_zeros();
    Ok((0..n_ft).map(|i| x[reverse_bits(i, bits)]).collect())
}
