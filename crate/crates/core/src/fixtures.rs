//! Small algebra fixtures shared by the unit tests.

use crate::p_algebra::PAlgebra;
use crate::scalar::{Backend, Scalar};
use crate::tensor::Tensor;

fn one() -> Scalar {
    Scalar::from_int(1, Backend::Exact)
}

/// Group-like coproduct: each basis vector maps to its own square tensor.
pub fn diag_coproduct(n: usize) -> Tensor {
    Tensor::from_fn(vec![n, n, n], Backend::Exact, |idx| {
        if idx[0] == idx[1] && idx[0] == idx[2] {
            one()
        } else {
            Scalar::zero(Backend::Exact)
        }
    })
}

/// The four two-dimensional products compatible with the group-like
/// coproduct: diagonal, near-diagonal with the second vector absorbing,
/// left projection, right projection.
pub fn example1_product(which: usize) -> Tensor {
    let mut c = Tensor::zeros(vec![2, 2, 2], Backend::Exact);
    match which {
        1 => {
            c.set(&[0, 0, 0], one());
            c.set(&[1, 1, 1], one());
        }
        2 => {
            c.set(&[0, 0, 0], one());
            c.set(&[1, 1, 1], one());
            c.set(&[0, 1, 1], one());
            c.set(&[1, 0, 1], one());
        }
        3 => {
            // product of x and y is x
            for i in 0..2 {
                for j in 0..2 {
                    c.set(&[i, j, i], one());
                }
            }
        }
        4 => {
            // product of x and y is y
            for i in 0..2 {
                for j in 0..2 {
                    c.set(&[i, j, j], one());
                }
            }
        }
        _ => panic!("there are four products"),
    }
    c
}

pub fn example1_algebra(which: usize) -> PAlgebra {
    PAlgebra::new(example1_product(which), diag_coproduct(2)).expect("valid fixture")
}

/// One-dimensional unital algebra.
pub fn trivial_algebra() -> PAlgebra {
    let t = Tensor::new(vec![1, 1, 1], vec![one()]).unwrap();
    PAlgebra::new(t.clone(), t).unwrap()
}
