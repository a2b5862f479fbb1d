//! Enumeration of small lattices up to isomorphism.
//!
//! Every finite poset has a linear extension, so it suffices to scan orders
//! contained in the natural order of `0..n`, keep the lattices, and drop
//! isomorphic copies by comparing a canonical form over all relabelings.

use super::{Algebra, Signature};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn go(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, out);
            p.swap(k, i);
        }
    }
    go(0, &mut p, &mut out);
    out
}

fn bound(le: &[Vec<bool>], a: usize, b: usize, upper: bool) -> Option<usize> {
    let n = le.len();
    let rel = |x: usize, y: usize| if upper { le[x][y] } else { le[y][x] };
    let common: Vec<usize> = (0..n).filter(|&c| rel(a, c) && rel(b, c)).collect();
    common.iter().copied().find(|&c| common.iter().all(|&d| rel(c, d)))
}

/// All lattices with `1..=max` elements up to isomorphism, ordered by size
/// and then by discovery order.
pub fn small_lattices(max: usize) -> Vec<Algebra> {
    let mut out = Vec::new();
    for n in 1..=max {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let perms = permutations(n);
        let mut seen: Vec<Vec<bool>> = Vec::new();
        for mask in 0u64..1 << pairs.len() {
            let mut le = vec![vec![false; n]; n];
            for (i, row) in le.iter_mut().enumerate() {
                row[i] = true;
            }
            for (k, &(i, j)) in pairs.iter().enumerate() {
                le[i][j] = mask >> k & 1 == 1;
            }
            let transitive = (0..n).all(|i| (0..n).all(|j| !le[i][j] || (0..n).all(|k| !le[j][k] || le[i][k])));
            if !transitive {
                continue;
            }
            let mut meet = vec![0; n * n];
            let mut join = vec![0; n * n];
            let mut lattice = true;
            'pairs: for a in 0..n {
                for b in 0..n {
                    match (bound(&le, a, b, false), bound(&le, a, b, true)) {
                        (Some(m), Some(j)) => {
                            meet[a * n + b] = m;
                            join[a * n + b] = j;
                        }
                        _ => {
                            lattice = false;
                            break 'pairs;
                        }
                    }
                }
            }
            if !lattice {
                continue;
            }
            let canon = perms
                .iter()
                .map(|p| (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| le[p[i]][p[j]]).collect::<Vec<bool>>())
                .min()
                .expect("at least one permutation");
            if seen.contains(&canon) {
                continue;
            }
            seen.push(canon);
            let name = format!("lattice{n}-{}", seen.len());
            let tables = vec![super::Table::new(2, meet), super::Table::new(2, join)];
            out.push(Algebra::new(name, n, None, Signature::lat(), tables).expect("tables are total"));
        }
    }
    out
}
