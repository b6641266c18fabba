//! Lattices as lists of row vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Vector = Vec<BigInt>;

fn axpy(target: &mut [BigInt], q: &BigInt, source: &[BigInt]) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is the unique echelon basis: pivot columns strictly increase,
/// pivots are positive and every entry above a pivot lies in `[0, pivot)`.
/// Zero rows are dropped.
pub fn row_hnf(mut rows: Vec<Vector>, ncols: usize) -> Vec<Vector> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(pivot) = pivot else { break };
            rows.swap(r, pivot);
            let (head, tail) = rows.split_at_mut(r + 1);
            let prow = &head[r];
            let mut clean = true;
            for row in tail.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let q = row[c].div_floor(&prow[c]);
                axpy(row, &q, prow);
                if !row[c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let prow = &tail[0];
        for row in head.iter_mut() {
            let q = row[c].div_floor(&prow[c]);
            if !q.is_zero() {
                axpy(row, &q, prow);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Membership of `v` in the lattice with HNF basis `basis`.
pub fn is_member(basis: &[Vector], v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for row in basis {
        let c = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("HNF rows are nonzero");
        if v[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = v[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        axpy(&mut v, &q, row);
    }
    v.iter().all(Zero::is_zero)
}

/// HNF basis of `L1 ∩ L2` by the Zassenhaus construction: the rows `[a | a]`
/// and `[b | 0]` are echelonized and rows vanishing on the first block carry
/// the intersection in the second.
pub fn lattice_intersection(a: &[Vector], b: &[Vector], n: usize) -> Vec<Vector> {
    let mut rows = Vec::with_capacity(a.len() + b.len());
    for v in a {
        let mut row = v.clone();
        row.extend(v.iter().cloned());
        rows.push(row);
    }
    for v in b {
        let mut row = v.clone();
        row.extend(std::iter::repeat_n(BigInt::zero(), n));
        rows.push(row);
    }
    let h = row_hnf(rows, 2 * n);
    let inter: Vec<Vector> = h
        .into_iter()
        .filter(|row| row[..n].iter().all(Zero::is_zero))
        .map(|row| row[n..].to_vec())
        .collect();
    row_hnf(inter, n)
}

/// Smith normal form data of a row lattice `L ⊆ ℤ^n`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Positive diagonal entries `d_1 | d_2 | …`, one per rank.
    pub diagonal: Vec<BigInt>,
    /// Unimodular `n × n` matrix `Q` (row-major) such that `x ↦ x·Q` maps `L`
    /// onto `d_1ℤ ⊕ … ⊕ d_rℤ ⊕ 0`.
    pub transform: Vec<Vector>,
}

pub fn smith_form(rows: &[Vector], n: usize) -> SmithForm {
    let mut a: Vec<Vector> = rows.to_vec();
    let mut q: Vec<Vector> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let k = a.len();

    let swap_cols = |a: &mut Vec<Vector>, q: &mut Vec<Vector>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in q.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_j -= f * col_t
    let col_op = |a: &mut Vec<Vector>, q: &mut Vec<Vector>, j: usize, t: usize, f: &BigInt| {
        for row in a.iter_mut() {
            let d = f * &row[t];
            row[j] -= d;
        }
        for row in q.iter_mut() {
            let d = f * &row[t];
            row[j] -= d;
        }
    };

    let mut diagonal = Vec::new();
    for t in 0..k.min(n) {
        let best = (t..k)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i1, j1), &(i2, j2)| a[i1][j1].abs().cmp(&a[i2][j2].abs()));
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, &mut q, t, bj);
        loop {
            for i in t + 1..k {
                if !a[i][t].is_zero() {
                    let f = a[i][t].div_floor(&a[t][t]);
                    let (head, tail) = a.split_at_mut(i);
                    axpy(&mut tail[0], &f, &head[t]);
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let f = a[t][j].div_floor(&a[t][t]);
                    col_op(&mut a, &mut q, j, t, &f);
                }
            }
            let leftover = (t + 1..k)
                .map(|i| (i, t))
                .chain((t + 1..n).map(|j| (t, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i1, j1), &(i2, j2)| a[i1][j1].abs().cmp(&a[i2][j2].abs()));
            if let Some((i, j)) = leftover {
                if j == t {
                    a.swap(t, i);
                } else {
                    swap_cols(&mut a, &mut q, t, j);
                }
                continue;
            }
            // enforce divisibility of the remaining block
            let bad = (t + 1..k).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].abs());
    }
    SmithForm {
        diagonal,
        transform: q,
    }
}
