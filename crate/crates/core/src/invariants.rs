//! The projector family `P_N` on tensor powers of `W`, its trace
//! invariants, and the small transfer matrices whose powers compute the same
//! traces without materializing anything.

use crate::constructions::{SemisimpleData, ZeroOneMatrix};
use crate::envelope::pair_index;
use crate::error::{Error, Result};
use crate::representations::{EnRepresentation, MultMatrix};
use crate::scalar::{Backend, Scalar};
use crate::tensor::Tensor;

/// Square matrix of exact scalars with `tr(P_N) = tr(T^N)`.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    matrix: Tensor,
}

impl TransferMatrix {
    pub fn matrix(&self) -> &Tensor {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.shape()[0]
    }
}

/// Materializes `P_N` on the `N`-th tensor power of `W` as the cyclic sum of
/// generator products, and verifies its idempotency.
///
/// The matrix has `dim(W)^(2N)` entries; the cap bounds that count.
pub fn build_p_n(rho: &EnRepresentation, n_steps: usize, cap: usize) -> Result<Tensor> {
    let p_n = materialize_p_n(rho, n_steps, cap)?;
    if !p_n.is_idempotent() {
        return Err(Error::IdempotencyFailure { n: n_steps });
    }
    Ok(p_n)
}

fn materialize_p_n(rho: &EnRepresentation, n_steps: usize, cap: usize) -> Result<Tensor> {
    assert!(n_steps >= 1, "the projector family starts at one copy");
    let n = rho.parent().n();
    let w = rho.dim_w();
    if w == 0 {
        return Err(Error::ShapeMismatch(
            "empty representation has no projector matrix".into(),
        ));
    }
    w.checked_pow(n_steps as u32)
        .filter(|d| d.checked_mul(*d).is_some_and(|e| e <= cap))
        .ok_or(Error::DimensionOverflow {
            needed: w.checked_pow(2 * n_steps as u32).unwrap_or(usize::MAX),
            cap,
        })?;

    // one open chain row at a time: row_k[j] sums, over index strings from
    // a fixed start i to j, the tensor products of generators along the
    // string; only the final closed-loop term is accumulated, which keeps
    // the footprint at one tensor-power matrix
    let mut p_n: Option<Tensor> = None;
    for i in 0..n {
        let mut row: Vec<Tensor> = (0..n)
            .map(|j| rho.matrix(pair_index(n, i, j)).clone())
            .collect();
        for _level in 2..n_steps {
            let mut next = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc: Option<Tensor> = None;
                for t in 0..n {
                    let term = Tensor::kron(&row[t], rho.matrix(pair_index(n, t, j)))?;
                    acc = Some(match acc {
                        None => term,
                        Some(sum) => sum.add(&term)?,
                    });
                }
                next.push(acc.expect("n >= 1"));
            }
            row = next;
        }
        // close the loop back to the start; only this single entry reaches
        // full tensor-power size
        let closed = if n_steps == 1 {
            row.into_iter().nth(i).expect("square chain row")
        } else {
            let mut acc: Option<Tensor> = None;
            for (t, chain) in row.iter().enumerate() {
                let term = Tensor::kron(chain, rho.matrix(pair_index(n, t, i)))?;
                acc = Some(match acc {
                    None => term,
                    Some(sum) => sum.add(&term)?,
                });
            }
            acc.expect("n >= 1")
        };
        p_n = Some(match p_n {
            None => closed,
            Some(sum) => sum.add(&closed)?,
        });
    }
    Ok(p_n.expect("n >= 1"))
}

/// `tr(P_N)` by materializing the projector matrix; exact on the exact
/// backend, an integer whenever the projector is idempotent.
pub fn trace_p_n_direct(rho: &EnRepresentation, n_steps: usize, cap: usize) -> Result<Scalar> {
    if rho.dim_w() == 0 {
        return Ok(Scalar::zero(rho.backend()));
    }
    Ok(materialize_p_n(rho, n_steps, cap)?.trace())
}

/// `tr(P_N)` without materializing the tensor power: the trace of a tensor
/// product factorizes, so the cyclic sum collapses to `tr(G^N)` where
/// `G[i][j] = tr rho(e_i^j)`. An independent route for the transfer-matrix
/// identities.
pub fn trace_p_n_network(rho: &EnRepresentation, n_steps: usize) -> Scalar {
    assert!(n_steps >= 1, "the projector family starts at one copy");
    let n = rho.parent().n();
    let backend = rho.backend();
    if rho.dim_w() == 0 {
        return Scalar::zero(backend);
    }
    let gram = Tensor::from_fn(vec![n, n], backend, |idx| {
        rho.matrix(pair_index(n, idx[0], idx[1])).trace()
    });
    gram.mat_pow(n_steps as u64).trace()
}

/// Transfer matrix of the commutative recipe: `T = m r` entrywise over the
/// integers.
pub fn transfer_matrix_commutative(r: &ZeroOneMatrix, m: &MultMatrix) -> Result<TransferMatrix> {
    let n = r.n();
    if m.rows() != n || m.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "multiplicities must be {n} x {n}"
        )));
    }
    let matrix = m
        .to_tensor(Backend::Exact)
        .matmul(&r.to_tensor(Backend::Exact))
        .expect("shapes agree");
    Ok(TransferMatrix { matrix })
}

/// Transfer matrix of the semisimple recipe:
/// `T[a1][a2] = sum_b m[a1][b] tr(Qbar[a2][b])`.
pub fn transfer_matrix_semisimple(d: &SemisimpleData, m: &MultMatrix) -> Result<TransferMatrix> {
    let (r, t) = (d.l_dims().len(), d.m_dims().len());
    if m.rows() != r || m.cols() != t {
        return Err(Error::ShapeMismatch(format!(
            "multiplicities must be {r} x {t}"
        )));
    }
    let backend = d.backend();
    let traces: Vec<Vec<Scalar>> = (0..r)
        .map(|alpha| (0..t).map(|beta| d.qbar_trace(alpha, beta)).collect())
        .collect();
    let matrix = Tensor::from_fn(vec![r, r], backend, |idx| {
        let (a1, a2) = (idx[0], idx[1]);
        let mut acc = Scalar::zero(backend);
        for beta in 0..t {
            let mult = Scalar::from_int(m.get(a1, beta) as i64, backend);
            acc = &acc + &(&mult * &traces[a2][beta]);
        }
        acc
    });
    Ok(TransferMatrix { matrix })
}

/// `tr(T^N)` by exact repeated squaring.
pub fn trace_via_transfer(t: &TransferMatrix, n_steps: usize) -> Scalar {
    assert!(n_steps >= 1, "the projector family starts at one copy");
    t.matrix.mat_pow(n_steps as u64).trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::from_zero_one_matrix;
    use crate::envelope::envelope;
    use crate::fixtures;
    use crate::representations::rep_from_multiplicities_commutative;
    use crate::DEFAULT_CAP;

    fn diagonal_2d() -> crate::p_algebra::PAlgebra {
        from_zero_one_matrix(&ZeroOneMatrix::identity(2)).unwrap()
    }

    fn triangular_2d() -> crate::p_algebra::PAlgebra {
        from_zero_one_matrix(&ZeroOneMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap()).unwrap()
    }

    #[test]
    fn first_projector_acts_by_matrix_entries() {
        // P_1 scales the (j, k) summand by r[k][j]
        let p = triangular_2d();
        let m = MultMatrix::ones(2, 2);
        let rho = rep_from_multiplicities_commutative(&p, &m).unwrap();
        let p1 = build_p_n(&rho, 1, DEFAULT_CAP).unwrap();
        let expected = Tensor::from_int_rows(
            // summands in order (0,0), (0,1), (1,0), (1,1); r = [[1,1],[0,1]]
            &[
                vec![1, 0, 0, 0],
                vec![0, 0, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
            Backend::Exact,
        )
        .unwrap();
        assert!(p1.approx_eq(&expected));
    }

    #[test]
    fn trivial_algebra_has_constant_projectors() {
        let p = fixtures::trivial_algebra();
        let env = envelope(&p);
        let rho = env.left_regular_representation();
        for n_steps in 1..=4 {
            let p_n = build_p_n(&rho, n_steps, DEFAULT_CAP).unwrap();
            assert!(p_n.approx_eq(&Tensor::identity(1, Backend::Exact)));
        }
    }

    #[test]
    fn second_projector_for_kron_wiring_of_trivial_algebra() {
        // on a one-dimensional algebra the cyclic wiring of two copies is
        // the plain Kronecker square of the first projector
        let p = fixtures::trivial_algebra();
        let env = envelope(&p);
        let rho = env.left_regular_representation();
        let p1 = build_p_n(&rho, 1, DEFAULT_CAP).unwrap();
        let p2 = build_p_n(&rho, 2, DEFAULT_CAP).unwrap();
        assert!(p2.approx_eq(&Tensor::kron(&p1, &p1).unwrap()));
    }

    #[test]
    fn projectors_are_idempotent_across_small_multiplicities() {
        for p in [diagonal_2d(), triangular_2d()] {
            for mask in [0b0001u32, 0b0110, 0b1111] {
                let rows = vec![
                    vec![u64::from(mask & 1), u64::from((mask >> 1) & 1)],
                    vec![u64::from((mask >> 2) & 1), u64::from((mask >> 3) & 1)],
                ];
                let m = MultMatrix::from_rows(&rows).unwrap();
                let rho = rep_from_multiplicities_commutative(&p, &m).unwrap();
                for n_steps in 1..=3 {
                    assert!(build_p_n(&rho, n_steps, DEFAULT_CAP).is_ok());
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let p = diagonal_2d();
        let rho = rep_from_multiplicities_commutative(&p, &MultMatrix::ones(2, 2)).unwrap();
        assert!(matches!(
            build_p_n(&rho, 4, 100),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn network_trace_agrees_with_direct_trace() {
        for p in [diagonal_2d(), triangular_2d()] {
            let m = MultMatrix::ones(2, 2);
            let rho = rep_from_multiplicities_commutative(&p, &m).unwrap();
            for n_steps in 1..=4 {
                let direct = trace_p_n_direct(&rho, n_steps, DEFAULT_CAP).unwrap();
                let network = trace_p_n_network(&rho, n_steps);
                assert!(direct.approx_eq(&network), "N = {n_steps}");
            }
        }
    }

    #[test]
    fn zero_generators_have_zero_traces() {
        let p = diagonal_2d();
        let zero = Tensor::zeros(vec![2, 2], Backend::Exact);
        let rho =
            crate::representations::EnRepresentation::from_matrices(p.clone(), 2, vec![zero; 4])
                .unwrap();
        for n_steps in 1..=3 {
            assert!(trace_p_n_network(&rho, n_steps).is_zero());
            assert!(trace_p_n_direct(&rho, n_steps, DEFAULT_CAP)
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn transfer_matrix_of_identity_data_is_identity() {
        let r = ZeroOneMatrix::identity(2);
        let t = transfer_matrix_commutative(&r, &MultMatrix::identity(2)).unwrap();
        assert!(t.matrix().approx_eq(&Tensor::identity(2, Backend::Exact)));
        for n_steps in 1..=5 {
            assert_eq!(trace_via_transfer(&t, n_steps).to_usize(), Some(2));
        }
    }

    #[test]
    fn transfer_matrix_reduces_to_r_for_unit_multiplicities() {
        let r = ZeroOneMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let t = transfer_matrix_commutative(&r, &MultMatrix::identity(2)).unwrap();
        assert!(t.matrix().approx_eq(&r.to_tensor(Backend::Exact)));
    }

    #[test]
    fn zero_multiplicities_give_the_zero_transfer_matrix() {
        let r = ZeroOneMatrix::identity(3);
        let t = transfer_matrix_commutative(&r, &MultMatrix::zeros(3, 3)).unwrap();
        assert!(t.matrix().is_zero());
    }

    #[test]
    fn all_ones_cube_example() {
        // identity r, all-ones multiplicities: T is the all-ones matrix and
        // tr(T^3) = 8; the direct summation agrees
        let p = diagonal_2d();
        let m = MultMatrix::ones(2, 2);
        let r = ZeroOneMatrix::identity(2);
        let t = transfer_matrix_commutative(&r, &m).unwrap();
        assert_eq!(trace_via_transfer(&t, 3).to_usize(), Some(8));
        let rho = rep_from_multiplicities_commutative(&p, &m).unwrap();
        assert_eq!(
            trace_p_n_direct(&rho, 3, DEFAULT_CAP).unwrap().to_usize(),
            Some(8)
        );
    }

    #[test]
    fn semisimple_transfer_matches_commutative_under_index_swap() {
        // all-one-dimensional semisimple data with transposed multiplicities
        // has the same trace invariants as the commutative recipe
        let r = ZeroOneMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let d = SemisimpleData::commutative(&r.to_tensor(Backend::Exact)).unwrap();
        let m = MultMatrix::from_rows(&[vec![1, 2], vec![0, 1]]).unwrap();
        let m_swapped = MultMatrix::from_rows(&[vec![1, 0], vec![2, 1]]).unwrap();
        let t_comm = transfer_matrix_commutative(&r, &m).unwrap();
        let t_ss = transfer_matrix_semisimple(&d, &m_swapped).unwrap();
        for n_steps in 1..=4 {
            assert!(
                trace_via_transfer(&t_comm, n_steps).approx_eq(&trace_via_transfer(&t_ss, n_steps))
            );
        }
    }

    #[test]
    fn rank_equals_trace_for_materialized_projectors() {
        let p = triangular_2d();
        let m = MultMatrix::ones(2, 2);
        let rho = rep_from_multiplicities_commutative(&p, &m).unwrap();
        for n_steps in 1..=3 {
            let p_n = build_p_n(&rho, n_steps, DEFAULT_CAP).unwrap();
            assert_eq!(p_n.rank(), p_n.trace().to_usize().unwrap());
        }
    }
}
