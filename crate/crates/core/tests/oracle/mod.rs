#![allow(dead_code)]

//! Reference total chromatic number by plain enumeration: elements in input
//! order, colors in ascending order, each element checked against every
//! earlier element straight from the definition. No ordering heuristics, no
//! symmetry breaking, and nothing shared with the library's solver.

#[derive(Clone, Copy, PartialEq)]
enum El {
    V(usize),
    E(usize, usize),
}

fn conflict(a: El, b: El, adjacent: &dyn Fn(usize, usize) -> bool) -> bool {
    match (a, b) {
        (El::V(x), El::V(y)) => adjacent(x, y),
        (El::V(x), El::E(p, q)) | (El::E(p, q), El::V(x)) => x == p || x == q,
        (El::E(p, q), El::E(r, s)) => p == r || p == s || q == r || q == s,
    }
}

/// χ″ of the graph on vertices `0..n` with the given edges.
pub fn brute_chi(n: usize, edges: &[(usize, usize)]) -> usize {
    if n == 0 {
        return 0;
    }
    let adjacent = |x: usize, y: usize| edges.iter().any(|&(p, q)| (p, q) == (x, y) || (p, q) == (y, x));
    let els: Vec<El> = (0..n).map(El::V).chain(edges.iter().map(|&(p, q)| El::E(p, q))).collect();
    let m = els.len();
    // conflicts[i]: earlier elements conflicting with element i
    let conflicts: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..i).filter(|&j| conflict(els[i], els[j], &adjacent)).collect())
        .collect();
    (1..).find(|&k| colorable(&conflicts, k)).unwrap()
}

fn colorable(conflicts: &[Vec<usize>], k: usize) -> bool {
    let m = conflicts.len();
    let mut col = vec![0usize; m];
    let mut i = 0;
    loop {
        // advance element i to its next admissible color
        col[i] += 1;
        while col[i] <= k && conflicts[i].iter().any(|&j| col[j] == col[i]) {
            col[i] += 1;
        }
        if col[i] <= k {
            if i + 1 == m {
                return true;
            }
            i += 1;
        } else {
            col[i] = 0;
            if i == 0 {
                return false;
            }
            i -= 1;
        }
    }
}
