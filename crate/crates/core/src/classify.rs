//! Classification of nonsingular (0,1)-matrices up to independent row and
//! column permutations: canonical forms, exhaustive class enumeration, and
//! cheap permutation invariants for census output.

use crate::constructions::ZeroOneMatrix;
use crate::error::{Error, Result};
use itertools::Itertools;
use rayon::prelude::*;
use std::collections::HashSet;

/// Largest matrix size the exhaustive enumerator accepts by default.
pub const DEFAULT_ENUM_LIMIT: usize = 5;

/// One equivalence class: its lexicographically minimal member, the orbit
/// size, and a deterministic id (position in canonical-form order).
#[derive(Clone, Debug)]
pub struct MatrixClass {
    pub representative: ZeroOneMatrix,
    pub orbit_size: u64,
    pub class_id: usize,
}

/// Permutation-invariant quantities of a class, used to label census output
/// and as a secondary check that no two classes were merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInvariants {
    /// Row sums, sorted ascending.
    pub row_sums: Vec<usize>,
    /// Column sums, sorted ascending.
    pub col_sums: Vec<usize>,
    pub det_abs: u64,
    pub permanent: u64,
}

/// The lexicographic minimum of the row-and-column permutation orbit,
/// comparing matrices by their row-major flattening with `0 < 1`.
///
/// For a fixed row order the minimum over column permutations is reached by
/// sorting columns by their top-down bit vectors, so the search runs over
/// row orders only, depth-first with prefix pruning and deduplication of
/// equal candidate rows.
pub fn canonical_form(r: &ZeroOneMatrix) -> ZeroOneMatrix {
    let n = r.n();
    let rows: Vec<Vec<u8>> = r.rows().map(<[u8]>::to_vec).collect();

    struct Search<'a> {
        n: usize,
        rows: &'a [Vec<u8>],
        chosen: Vec<usize>,
        used: Vec<bool>,
        best: Option<Vec<u8>>,
    }

    impl Search<'_> {
        /// Flattening of the chosen rows with columns sorted by their
        /// prefix restricted to those rows.
        fn prefix(&self) -> Vec<u8> {
            let d = self.chosen.len();
            let mut cols: Vec<Vec<u8>> = (0..self.n)
                .map(|j| self.chosen.iter().map(|&i| self.rows[i][j]).collect())
                .collect();
            cols.sort_unstable();
            let mut flat = Vec::with_capacity(d * self.n);
            for row in 0..d {
                for col in cols.iter() {
                    flat.push(col[row]);
                }
            }
            flat
        }

        fn descend(&mut self) {
            let d = self.chosen.len();
            let prefix = self.prefix();
            if let Some(best) = &self.best {
                if prefix.as_slice() > &best[..d * self.n] {
                    return;
                }
            }
            if d == self.n {
                if self.best.as_deref().is_none_or(|b| prefix.as_slice() < b) {
                    self.best = Some(prefix);
                }
                return;
            }
            let mut tried: HashSet<&[u8]> = HashSet::new();
            for i in 0..self.n {
                if self.used[i] || !tried.insert(&self.rows[i]) {
                    continue;
                }
                self.used[i] = true;
                self.chosen.push(i);
                self.descend();
                self.chosen.pop();
                self.used[i] = false;
            }
        }
    }

    let mut search = Search {
        n,
        rows: &rows,
        chosen: Vec::new(),
        used: vec![false; n],
        best: None,
    };
    search.descend();
    let flat = search.best.expect("search visits at least one leaf");
    ZeroOneMatrix::from_rows(&flat.chunks(n).map(<[u8]>::to_vec).collect::<Vec<_>>())
        .expect("canonical form stays a 0/1 matrix")
}

// ---- fast bit-level kernel used by the enumerator --------------------------

/// Row bitmasks (bit `c` of `rows[r]` is entry `(r, c)`) from a row-major
/// mask with entry `(r, c)` at bit `r * n + c`.
fn mask_to_rows(n: usize, mask: u64) -> [u8; 8] {
    let mut rows = [0u8; 8];
    for (r, row) in rows.iter_mut().enumerate().take(n) {
        *row = ((mask >> (r * n)) & ((1 << n) - 1)) as u8;
    }
    rows
}

/// Key with entry `(0, 0)` most significant, so integer order is
/// lexicographic order on the flattening.
fn rows_to_key(n: usize, rows: &[u8]) -> u64 {
    let mut key = 0u64;
    for &row in rows.iter().take(n) {
        for c in 0..n {
            key = (key << 1) | u64::from((row >> c) & 1);
        }
    }
    key
}

fn key_to_matrix(n: usize, key: u64) -> ZeroOneMatrix {
    let total = n * n;
    let rows: Vec<Vec<u8>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| ((key >> (total - 1 - (r * n + c))) & 1) as u8)
                .collect()
        })
        .collect();
    ZeroOneMatrix::from_rows(&rows).expect("bits are 0/1")
}

/// Minimum key over the permutation orbit; stops early once a key strictly
/// below `stop_below` is seen (useful for the is-canonical test).
fn canonical_key(n: usize, rows: &[u8], perms: &[Vec<u8>], stop_below: Option<u64>) -> u64 {
    let mut best = u64::MAX;
    let mut cols = [0u8; 8];
    for perm in perms {
        for (j, col) in cols.iter_mut().enumerate().take(n) {
            let mut v = 0u8;
            for (pos, &pr) in perm.iter().enumerate() {
                v |= ((rows[pr as usize] >> j) & 1) << (n - 1 - pos);
            }
            *col = v;
        }
        cols[..n].sort_unstable();
        let mut key = 0u64;
        for r in 0..n {
            for col in cols.iter().take(n) {
                key = (key << 1) | u64::from((col >> (n - 1 - r)) & 1);
            }
        }
        if key < best {
            best = key;
            if let Some(limit) = stop_below {
                if best < limit {
                    return best;
                }
            }
        }
    }
    best
}

/// Exact nonsingularity over the rationals by integer fraction-free
/// elimination on a small stack matrix.
fn nonsingular_bits(n: usize, rows: &[u8]) -> bool {
    let mut a = [[0i64; 8]; 8];
    for r in 0..n {
        for c in 0..n {
            a[r][c] = i64::from((rows[r] >> c) & 1);
        }
    }
    let mut prev = 1i64;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r][col] != 0) else {
            return false;
        };
        a.swap(col, pivot);
        for r in col + 1..n {
            for c in col + 1..n {
                a[r][c] = (a[col][col] * a[r][c] - a[r][col] * a[col][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[col][col];
    }
    true
}

fn row_perms(n: usize) -> Vec<Vec<u8>> {
    (0..n as u8).permutations(n).collect()
}

/// All classes of nonsingular `n x n` (0,1)-matrices under the default
/// enumeration limit.
pub fn enumerate_classes(n: usize) -> Result<Vec<MatrixClass>> {
    enumerate_classes_with_limit(n, DEFAULT_ENUM_LIMIT)
}

/// Exhaustive class enumeration: walks all `2^(n*n)` matrices, keeps the
/// nonsingular ones, and emits each class once via its canonical member.
/// The scan is partitioned by first-row value across worker threads; the
/// merge is order-independent, so results match single-threaded runs.
pub fn enumerate_classes_with_limit(n: usize, limit: usize) -> Result<Vec<MatrixClass>> {
    if n == 0 || n > limit || n > 7 {
        return Err(Error::LimitExceeded {
            n,
            limit: limit.min(7),
        });
    }
    let perms = row_perms(n);
    let rest_bits = n * n - n;
    let canonical_keys: Vec<u64> = (0u64..1 << n)
        .into_par_iter()
        .flat_map_iter(|first_row| {
            let perms = &perms;
            (0u64..1 << rest_bits).filter_map(move |rest| {
                let mask = first_row | (rest << n);
                let rows = mask_to_rows(n, mask);
                if !nonsingular_bits(n, &rows[..n]) {
                    return None;
                }
                let own_key = rows_to_key(n, &rows[..n]);
                let best = canonical_key(n, &rows[..n], perms, Some(own_key));
                (best == own_key).then_some(own_key)
            })
        })
        .collect();

    let mut keys = canonical_keys;
    keys.sort_unstable();
    keys.dedup();

    let classes = keys
        .into_iter()
        .enumerate()
        .map(|(class_id, key)| {
            let representative = key_to_matrix(n, key);
            let orbit_size = orbit_size(&representative, &perms);
            MatrixClass {
                representative,
                orbit_size,
                class_id,
            }
        })
        .collect();
    Ok(classes)
}

/// Number of distinct matrices in the row-and-column permutation orbit.
fn orbit_size(m: &ZeroOneMatrix, perms: &[Vec<u8>]) -> u64 {
    let n = m.n();
    let mut rows = [0u8; 8];
    for r in 0..n {
        for c in 0..n {
            rows[r] |= m.get(r, c) << c;
        }
    }
    let mut seen = HashSet::new();
    let mut permuted = [0u8; 8];
    for rp in perms {
        for (pos, &pr) in rp.iter().enumerate() {
            permuted[pos] = rows[pr as usize];
        }
        for cp in perms {
            let mut key = 0u64;
            for &row in permuted.iter().take(n) {
                for &c in cp {
                    key = (key << 1) | u64::from((row >> c) & 1);
                }
            }
            seen.insert(key);
        }
    }
    seen.len() as u64
}

/// Total number of nonsingular `n x n` (0,1)-matrices, counted directly.
/// Cross-checks the orbit sizes of [`enumerate_classes`].
pub fn count_nonsingular(n: usize) -> Result<u64> {
    if n == 0 || n > 7 {
        return Err(Error::LimitExceeded { n, limit: 7 });
    }
    let rest_bits = n * n - n;
    Ok((0u64..1 << n)
        .into_par_iter()
        .map(|first_row| {
            (0u64..1 << rest_bits)
                .filter(|rest| {
                    let mask = first_row | (rest << n);
                    let rows = mask_to_rows(n, mask);
                    nonsingular_bits(n, &rows[..n])
                })
                .count() as u64
        })
        .sum())
}

/// The permutation-invariant labels of a class representative.
pub fn class_invariants(cls: &MatrixClass) -> ClassInvariants {
    let m = &cls.representative;
    let n = m.n();
    let mut row_sums: Vec<usize> = (0..n)
        .map(|r| (0..n).filter(|&c| m.get(r, c) == 1).count())
        .collect();
    let mut col_sums: Vec<usize> = (0..n)
        .map(|c| (0..n).filter(|&r| m.get(r, c) == 1).count())
        .collect();
    row_sums.sort_unstable();
    col_sums.sort_unstable();

    let mut a = [[0i128; 8]; 8];
    for r in 0..n {
        for c in 0..n {
            a[r][c] = i128::from(m.get(r, c));
        }
    }
    let det_abs = det_bareiss(n, &mut a).unsigned_abs() as u64;

    let permanent = (0..n)
        .permutations(n)
        .map(|perm| {
            perm.iter()
                .enumerate()
                .map(|(r, &c)| u64::from(m.get(r, c)))
                .product::<u64>()
        })
        .sum();

    ClassInvariants {
        row_sums,
        col_sums,
        det_abs,
        permanent,
    }
}

fn det_bareiss(n: usize, a: &mut [[i128; 8]; 8]) -> i128 {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            a.swap(col, pivot);
            sign = -sign;
        }
        for r in col + 1..n {
            for c in col + 1..n {
                a[r][c] = (a[col][col] * a[r][c] - a[r][col] * a[col][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[col][col];
    }
    sign * a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn canonicalization_is_idempotent_on_the_identity() {
        let id = ZeroOneMatrix::identity(3);
        let c = canonical_form(&id);
        assert_eq!(canonical_form(&c), c);
    }

    #[test]
    fn the_two_small_classes_have_distinct_canonical_forms() {
        let id = ZeroOneMatrix::identity(2);
        let tri = ZeroOneMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_ne!(canonical_form(&id), canonical_form(&tri));
    }

    #[test]
    fn row_swap_preserves_the_canonical_form() {
        let a = ZeroOneMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        let b = ZeroOneMatrix::from_rows(&[vec![0, 1, 1], vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn canonical_form_constant_on_random_orbits() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 1..=4usize {
            for _ in 0..200 {
                let rows: Vec<Vec<u8>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..2u8)).collect())
                    .collect();
                let m = ZeroOneMatrix::from_rows(&rows).unwrap();
                let base = canonical_form(&m);
                // random row and column permutations
                let mut rp: Vec<usize> = (0..n).collect();
                let mut cp: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    rp.swap(i, rng.gen_range(0..=i));
                    cp.swap(i, rng.gen_range(0..=i));
                }
                let permuted: Vec<Vec<u8>> = (0..n)
                    .map(|r| (0..n).map(|c| m.get(rp[r], cp[c])).collect())
                    .collect();
                let pm = ZeroOneMatrix::from_rows(&permuted).unwrap();
                assert_eq!(canonical_form(&pm), base);
                assert_eq!(
                    canonical_form(&base),
                    base,
                    "canonicalization is idempotent"
                );
                // the canonical form is the orbit minimum
                assert!(base.entries() <= m.entries());
            }
        }
    }

    #[test]
    fn fast_key_agrees_with_reference_canonicalization() {
        let mut rng = StdRng::seed_from_u64(3);
        for n in 1..=4usize {
            let perms = row_perms(n);
            for _ in 0..100 {
                let mask: u64 = rng.gen_range(0..1u64 << (n * n));
                let rows = mask_to_rows(n, mask);
                let key = canonical_key(n, &rows[..n], &perms, None);
                let fast = key_to_matrix(n, key);
                let reference = canonical_form(&key_to_matrix(n, rows_to_key(n, &rows[..n])));
                assert_eq!(fast, reference);
            }
        }
    }

    #[test]
    fn class_counts_for_tiny_sizes() {
        assert_eq!(enumerate_classes(1).unwrap().len(), 1);
        assert_eq!(enumerate_classes(2).unwrap().len(), 2);
        assert_eq!(enumerate_classes(3).unwrap().len(), 8);
    }

    #[test]
    fn orbit_sizes_sum_to_the_nonsingular_count() {
        for n in 1..=3 {
            let classes = enumerate_classes(n).unwrap();
            let total: u64 = classes.iter().map(|c| c.orbit_size).sum();
            assert_eq!(total, count_nonsingular(n).unwrap());
        }
    }

    #[test]
    fn nonsingular_counts_match_known_values() {
        assert_eq!(count_nonsingular(1).unwrap(), 1);
        assert_eq!(count_nonsingular(2).unwrap(), 6);
        assert_eq!(count_nonsingular(3).unwrap(), 174);
    }

    #[test]
    fn representatives_are_nonsingular_and_canonical() {
        for cls in enumerate_classes(3).unwrap() {
            assert!(cls.representative.is_nonsingular());
            assert_eq!(canonical_form(&cls.representative), cls.representative);
        }
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(
            enumerate_classes(6),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn invariants_of_identity_and_triangular() {
        let classes = enumerate_classes(3).unwrap();
        let id_class = classes
            .iter()
            .find(|c| c.representative == canonical_form(&ZeroOneMatrix::identity(3)))
            .unwrap();
        let inv = class_invariants(id_class);
        assert_eq!(inv.row_sums, vec![1, 1, 1]);
        assert_eq!(inv.det_abs, 1);
        assert_eq!(inv.permanent, 1);

        let tri = ZeroOneMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let cls = MatrixClass {
            representative: canonical_form(&tri),
            orbit_size: 4,
            class_id: 0,
        };
        let inv = class_invariants(&cls);
        assert_eq!(inv.row_sums, vec![1, 2]);
        assert_eq!(inv.det_abs, 1);
    }

    #[test]
    fn distinct_classes_for_n3_are_separated_by_invariants_or_forms() {
        let classes = enumerate_classes(3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for cls in &classes {
            let inv = class_invariants(cls);
            seen.insert((cls.representative.bitstring(), inv.row_sums.clone()));
        }
        assert_eq!(seen.len(), 8);
    }
}
