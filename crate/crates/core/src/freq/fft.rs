//! One-dimensional transforms used row by row and column by column.
//!
//! Power-of-two lengths use an iterative radix-2 FFT. Any other length falls
//! back to the direct O(n²) sum.

use std::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone)]
pub(crate) struct Plan {
    len: usize,
    /// `roots[k] = exp(-2πi·k/len)`
    roots: Vec<Complex64>,
    /// Bit-reversal permutation, empty when the direct sum is used.
    bitrev: Vec<usize>,
}

impl Plan {
    pub(crate) fn new(len: usize) -> Self {
        assert!(len > 0);
        let roots = (0..len)
            .map(|k| {
                let theta = -2.0 * PI * k as f64 / len as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let bitrev = if len.is_power_of_two() && len > 1 {
            let bits = len.trailing_zeros();
            (0..len).map(|i| i.reverse_bits() >> (usize::BITS - bits)).collect()
        } else {
            Vec::new()
        };
        Self { len, roots, bitrev }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    fn root(&self, index: usize, direction: Direction) -> Complex64 {
        let r = self.roots[index];
        match direction {
            Direction::Forward => r,
            Direction::Inverse => r.conj(),
        }
    }

    /// Unnormalized transform of `buf` in place.
    pub(crate) fn process(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>, direction: Direction) {
        debug_assert_eq!(buf.len(), self.len);
        if self.len == 1 {
            return;
        }
        if self.bitrev.is_empty() {
            self.direct(buf, scratch, direction);
        } else {
            self.radix2(buf, direction);
        }
    }

    fn direct(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>, direction: Direction) {
        let n = self.len;
        scratch.clear();
        scratch.extend_from_slice(buf);
        for (k, out) in buf.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0;
            for x in scratch.iter() {
                acc += x * self.root(idx, direction);
                idx += k;
                if idx >= n {
                    idx -= n;
                }
            }
            *out = acc;
        }
    }

    fn radix2(&self, buf: &mut [Complex64], direction: Direction) {
        let n = self.len;
        for (i, &j) in self.bitrev.iter().enumerate() {
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut span = 2;
        while span <= n {
            let half = span / 2;
            let stride = n / span;
            for start in (0..n).step_by(span) {
                for k in 0..half {
                    let w = self.root(k * stride, direction);
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            span *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(t, v)| {
                        let th = sign * 2.0 * PI * (k * t) as f64 / n as f64;
                        v * Complex64::new(th.cos(), th.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn both_paths_match_naive_sum() {
        for n in [1usize, 2, 3, 5, 8, 12, 16, 31, 64] {
            let x: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let plan = Plan::new(n);
            let mut scratch = Vec::new();
            for (dir, sign) in [(Direction::Forward, -1.0), (Direction::Inverse, 1.0)] {
                let mut buf = x.clone();
                plan.process(&mut buf, &mut scratch, dir);
                let expected = naive(&x, sign);
                for (a, b) in buf.iter().zip(&expected) {
                    assert!((a - b).norm() < 1e-10, "n={n}");
                }
            }
        }
    }
}
