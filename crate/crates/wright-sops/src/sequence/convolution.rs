use crate::error::Result;
use crate::interval::{ComplexInterval, Interval};

/// Enclosures of `e^{-i omega j}` for `j = 0..=n`.
pub fn unit_phases(omega: Interval, n: usize) -> Result<Vec<ComplexInterval>> {
    (0..=n).map(|j| ComplexInterval::expi(-(omega * Interval::point(j as f64)))).collect()
}

/// Finite part of `(U_ω a) * b` under `a_{-j} = a_j*`, truncated to modes `1..=M`:
///
/// `Σ_{j<k} e^{-iωj} a_j b_{k-j} + Σ_{j=1}^{M-k} (e^{iωj} a_j* b_{j+k} + e^{-iω(j+k)} a_{j+k} b_j*)`.
pub fn convolve_truncated(
    a: &[ComplexInterval],
    b: &[ComplexInterval],
    omega: Interval,
) -> Result<Vec<ComplexInterval>> {
    assert_eq!(a.len(), b.len(), "convolution operands must share M");
    let m = a.len();
    let phase = unit_phases(omega, 2 * m)?;
    Ok(convolve_with_phases(a, b, &phase))
}

fn convolve_with_phases(
    a: &[ComplexInterval],
    b: &[ComplexInterval],
    phase: &[ComplexInterval],
) -> Vec<ComplexInterval> {
    let m = a.len();
    let c = |v: &[ComplexInterval], j: usize| v[j - 1];
    (1..=m)
        .map(|k| {
            let mut acc = ComplexInterval::ZERO;
            for j in 1..k {
                acc += phase[j] * c(a, j) * c(b, k - j);
            }
            for j in 1..=m - k {
                acc += phase[j].conj() * (c(a, j).conj() * c(b, j + k));
                acc += phase[j + k] * (c(a, j + k) * c(b, j).conj());
            }
            acc
        })
        .collect()
}

/// `convolve_with_phases(c, c, phase)` with the two mirrored terms of the
/// second sum factored as `(e^{-iω(j+k)} + e^{iωj}) c_j* c_{j+k}`, which keeps
/// the enclosure tighter.
pub(crate) fn square_with_phases(c: &[ComplexInterval], phase: &[ComplexInterval]) -> Vec<ComplexInterval> {
    let m = c.len();
    let at = |j: usize| c[j - 1];
    (1..=m)
        .map(|k| {
            let mut acc = ComplexInterval::ZERO;
            for j in 1..k {
                acc += phase[j] * at(j) * at(k - j);
            }
            for j in 1..=m - k {
                let weight = phase[j + k] + phase[j].conj();
                acc += weight * (at(j).conj() * at(j + k));
            }
            acc
        })
        .collect()
}
