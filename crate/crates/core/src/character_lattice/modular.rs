//! Smith normal form over `Z/n`.
//!
//! Kernels mod `n` only depend on residues, and eliminating over `Z/n` keeps
//! every entry of `A`, `U` and `V` below `n`. Integer transforms, by contrast,
//! can outgrow `i64` on 3×3 matrices with entries near `2^16`.

/// `U·A·V ≡ diag(pivots)` over `Z/n`, with `U`, `V` invertible mod `n` and
/// `gcd(p_k, n) | gcd(p_{k+1}, n)`.
#[derive(Clone, Debug)]
pub(crate) struct ModSnf {
    #[cfg_attr(not(test), allow(dead_code))]
    pub u: Vec<Vec<u64>>,
    pub v: Vec<Vec<u64>>,
    /// Nonzero diagonal entries, in order.
    pub pivots: Vec<u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(g, x, y)` with `g = gcd(a, b) = a·x + b·y`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn md(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// Replaces rows `(p, q)` of `m` by `(x·p + y·q, z·p + w·q)` mod `n`.
fn mix_rows(m: &mut [Vec<u64>], p: usize, q: usize, [x, y, z, w]: [i128; 4], n: u64) {
    for c in 0..m[p].len() {
        let (a, b) = (m[p][c] as i128, m[q][c] as i128);
        m[p][c] = md(x * a + y * b, n);
        m[q][c] = md(z * a + w * b, n);
    }
}

fn mix_cols(m: &mut [Vec<u64>], p: usize, q: usize, [x, y, z, w]: [i128; 4], n: u64) {
    for row in m.iter_mut() {
        let (a, b) = (row[p] as i128, row[q] as i128);
        row[p] = md(x * a + y * b, n);
        row[q] = md(z * a + w * b, n);
    }
}

/// Unimodular 2×2 step sending `(a, b)` to `(gcd(a, b), 0)`.
fn bezout(a: u64, b: u64) -> [i128; 4] {
    let (a, b) = (a as i128, b as i128);
    if b % a == 0 {
        return [1, 0, -(b / a), 1];
    }
    let (g, x, y) = ext_gcd(a, b);
    [x, y, -(b / g), a / g]
}

fn identity(k: usize) -> Vec<Vec<u64>> {
    (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect()
}

/// Nonzero entry of the trailing block with the smallest ideal `gcd(a, n)`.
fn pivot(a: &[Vec<u64>], t: usize, n: u64) -> Option<(usize, usize)> {
    let mut best: Option<(u64, u64, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 {
                let key = (gcd(x, n), x);
                if best.is_none_or(|b| key < (b.0, b.1)) {
                    best = Some((key.0, key.1, i, j));
                }
            }
        }
    }
    best.map(|b| (b.2, b.3))
}

/// Requires `1 <= n <= u32::MAX` and a rectangular input.
pub(crate) fn smith_normal_form_mod(rows: &[Vec<u64>], cols: usize, n: u64) -> ModSnf {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x % n).collect())
        .collect();
    let mut u = identity(a.len());
    let mut v = identity(cols);
    let mut pivots = Vec::new();

    for t in 0..a.len().min(cols) {
        let Some((pi, pj)) = pivot(&a, t, n) else {
            break;
        };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(t, pj);
        }

        // Each Bezout step that does not clear by exact division strictly
        // lowers the integer value of the pivot, so this terminates.
        loop {
            for i in t + 1..a.len() {
                if a[i][t] != 0 {
                    let step = bezout(a[t][t], a[i][t]);
                    mix_rows(&mut a, t, i, step, n);
                    mix_rows(&mut u, t, i, step, n);
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let step = bezout(a[t][t], a[t][j]);
                    mix_cols(&mut a, t, j, step, n);
                    mix_cols(&mut v, t, j, step, n);
                }
            }
            if (t + 1..a.len()).any(|i| a[i][t] != 0) {
                continue;
            }
            let ideal = gcd(a[t][t], n);
            let bad = (t + 1..a.len()).find(|&i| a[i][t + 1..].iter().any(|&x| x % ideal != 0));
            match bad {
                Some(i) => {
                    let add = [1, 1, 0, 1];
                    mix_rows(&mut a, t, i, add, n);
                    mix_rows(&mut u, t, i, add, n);
                }
                None => break,
            }
        }
        pivots.push(a[t][t]);
    }

    ModSnf { u, v, pivots }
}
