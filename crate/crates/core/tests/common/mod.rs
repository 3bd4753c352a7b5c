//! Reference computations that share no code with the library.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

/// Largest eigenvalue of a symmetric matrix of size at most 3, in closed form.
pub fn sym_top_eigenvalue(t: &[Vec<f64>]) -> f64 {
    match t.len() {
        1 => t[0][0],
        2 => {
            let (a, b, d) = (t[0][0], t[0][1], t[1][1]);
            (a + d) / 2.0 + (((a - d) / 2.0).powi(2) + b * b).sqrt()
        }
        3 => {
            let p1 = t[0][1].powi(2) + t[0][2].powi(2) + t[1][2].powi(2);
            if p1 == 0.0 {
                return t[0][0].max(t[1][1]).max(t[2][2]);
            }
            let q = (t[0][0] + t[1][1] + t[2][2]) / 3.0;
            let p2 =
                (t[0][0] - q).powi(2) + (t[1][1] - q).powi(2) + (t[2][2] - q).powi(2) + 2.0 * p1;
            let p = (p2 / 6.0).sqrt();
            let b = |i: usize, j: usize| (t[i][j] - if i == j { q } else { 0.0 }) / p;
            let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
                - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
                + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
            let r = (det / 2.0).clamp(-1.0, 1.0);
            q + 2.0 * p * (r.acos() / 3.0).cos()
        }
        k => panic!("closed form only up to 3x3, got {k}"),
    }
}

pub fn gram(n: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let k = n.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| n[i].iter().zip(&n[j]).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(n: &[Vec<u64>]) -> Vec<Vec<u64>> {
    (0..n[0].len())
        .map(|j| n.iter().map(|r| r[j]).collect())
        .collect()
}

fn bool_square_power_positive(t: &[Vec<bool>]) -> bool {
    let k = t.len();
    let bound = (k - 1) * (k - 1) + 1;
    let mut p = t.to_vec();
    for _ in 0..bound {
        if p.iter().all(|r| r.iter().all(|&b| b)) {
            return true;
        }
        p = (0..k)
            .map(|i| (0..k).map(|j| (0..k).any(|m| p[i][m] && t[m][j])).collect())
            .collect();
    }
    false
}

/// Some power `(N·Nᵀ)^m`, `m ≤ (k−1)²+1`, is entrywise positive, and likewise
/// for `Nᵀ·N`. The second half catches zero columns, which leave `N·Nᵀ`
/// untouched.
pub fn brute_force_primitive(n: &[Vec<u64>]) -> bool {
    let pos = |m: Vec<Vec<u64>>| -> Vec<Vec<bool>> {
        m.into_iter()
            .map(|r| r.into_iter().map(|x| x > 0).collect())
            .collect()
    };
    bool_square_power_positive(&pos(gram(n)))
        && bool_square_power_positive(&pos(gram(&transpose(n))))
}

/// Vertices of the square tiling by gluing the four corners of every cell.
/// Returns the number of corners at each vertex.
pub fn corner_classes(h: &[usize], v: &[usize]) -> Vec<usize> {
    let n = h.len();
    // corners: 4c + {0: BL, 1: BR, 2: TL, 3: TR}
    let mut parent: Vec<usize> = (0..4 * n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut union = |a: usize, b: usize| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    };
    for c in 0..n {
        union(4 * c + 1, 4 * h[c]);
        union(4 * c + 3, 4 * h[c] + 2);
        union(4 * c + 2, 4 * v[c]);
        union(4 * c + 3, 4 * v[c] + 1);
    }
    let mut counts = std::collections::BTreeMap::new();
    for x in 0..4 * n {
        *counts.entry(find(&mut parent, x)).or_insert(0) += 1;
    }
    counts.into_values().collect()
}

pub fn transitive(h: &[usize], v: &[usize]) -> bool {
    let n = h.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for d in [h[c], v[c]] {
            if !seen[d] {
                seen[d] = true;
                stack.push(d);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// A random transitive pair of permutations on `n` cells.
pub fn random_transitive_pair(rng: &mut impl Rng, n: usize) -> (Vec<usize>, Vec<usize>) {
    loop {
        let mut h: Vec<usize> = (0..n).collect();
        let mut v: Vec<usize> = (0..n).collect();
        h.shuffle(rng);
        v.shuffle(rng);
        if transitive(&h, &v) {
            return (h, v);
        }
    }
}

/// Random matrix with the given shape and entries in `0..=max`.
pub fn random_matrix(rng: &mut impl Rng, k: usize, l: usize, max: u64) -> Vec<Vec<u64>> {
    (0..k)
        .map(|_| (0..l).map(|_| rng.random_range(0..=max)).collect())
        .collect()
}
