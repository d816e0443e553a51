//! Shared pencils for unit tests. The first has one column and one row
//! minimal index; the second is a 6x5 pencil with finite eigenvalues
//! {1, 2}, one nilpotent coordinate, and row minimal index 2.

use crate::matrix::Matrix;
use crate::pencil::MatrixPencil;

pub(crate) fn example1_pencil() -> MatrixPencil {
    let f = Matrix::from_i64(&[
        &[2, 1, 1, 0, 0, 0, 0],
        &[1, 3, 1, 1, 0, 0, 0],
        &[1, 1, 2, 1, 0, 0, 0],
        &[0, 1, 1, 1, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 1, 0, 0, 0, 0, 1],
    ]);
    let g = Matrix::from_i64(&[
        &[1, 1, 1, 0, 0, 0, 1],
        &[0, 3, 2, 2, 0, 1, 1],
        &[1, 2, 3, 2, 0, 0, 0],
        &[0, 2, 2, 2, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
    ]);
    MatrixPencil::new(f, g).unwrap()
}

pub(crate) fn example2_pencil() -> MatrixPencil {
    let f = Matrix::from_i64(&[
        &[1, 1, 1, 1, 1],
        &[0, 1, 1, 0, 1],
        &[1, 1, 1, 1, 1],
        &[0, 1, 1, 0, 1],
        &[1, 0, 1, 0, 0],
        &[0, 0, 1, 1, 1],
    ]);
    let g = Matrix::from_i64(&[
        &[1, 2, 2, 1, 2],
        &[0, 2, 2, 0, 2],
        &[1, 2, 2, 2, 3],
        &[0, 2, 3, 1, 3],
        &[0, 0, 0, 0, 0],
        &[1, 0, 1, 0, 0],
    ]);
    MatrixPencil::new(f, g).unwrap()
}
