//! Matrix exponential of small dense matrices by Taylor series with
//! scaling and squaring.

use crate::Mat3;

/// Number of Taylor terms after scaling.
pub const TAYLOR_TERMS: usize = 20;

/// Target 1-norm of the scaled argument.
pub const SCALED_NORM: f64 = 0.5;

fn norm1(a: &Mat3) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)`. The argument is scaled by `2^-s` so that its 1-norm is at most
/// [`SCALED_NORM`], expanded to [`TAYLOR_TERMS`] terms and squared back `s`
/// times.
pub fn expm(a: &Mat3) -> Mat3 {
    let norm = norm1(a);
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * 2f64.powi(-squarings);

    // Horner form: I + A(I + A/2(I + A/3(...)))
    let id = Mat3::identity();
    let mut acc = id;
    for k in (1..=TAYLOR_TERMS).rev() {
        acc = id + scaled * acc / k as f64;
    }
    for _ in 0..squarings {
        acc = acc * acc;
    }
    acc
}
