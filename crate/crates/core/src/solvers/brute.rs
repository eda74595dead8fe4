use super::SolverError;
use crate::graph::Graph;

pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Width of one ordering, simulated on an explicit adjacency-matrix copy.
fn ordering_width(matrix: &[[bool; BRUTE_FORCE_LIMIT]; BRUTE_FORCE_LIMIT], n: usize, order: &[usize]) -> usize {
    let mut m = *matrix;
    let mut gone = [false; BRUTE_FORCE_LIMIT];
    let mut worst = 0;
    for &v in order {
        let nb: Vec<usize> = (0..n).filter(|&u| !gone[u] && m[v][u]).collect();
        worst = worst.max(nb.len());
        for &a in &nb {
            for &b in &nb {
                if a != b {
                    m[a][b] = true;
                }
            }
        }
        gone[v] = true;
    }
    worst
}

/// Minimum width over all `n!` elimination orderings (Heap's algorithm).
pub fn brute_force_treewidth(g: &Graph) -> Result<usize, SolverError> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(SolverError::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut matrix = [[false; BRUTE_FORCE_LIMIT]; BRUTE_FORCE_LIMIT];
    for (u, v) in g.edges() {
        matrix[u][v] = true;
        matrix[v][u] = true;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = ordering_width(&matrix, n, &perm);
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(ordering_width(&matrix, n, &perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}
