//! Independent oracles for the acceptance suite.
//!
//! Everything here recomputes results through routes the library does not
//! use: invariant factors from minor gcds, kernels from a textbook column
//! Hermite form, and class counting in a bounded box. Arithmetic is plain
//! `i128`, which is exact at the desk scales exercised.

use loop_homology::IntMatrix;

pub type Mat = Vec<Vec<i128>>;

pub fn to_i128(m: &IntMatrix) -> Mat {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| i128::try_from(&m[(i, j)]).expect("oracle entries fit i128"))
                .collect()
        })
        .collect()
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact determinant by fraction-free elimination over `i128`.
pub fn det(m: &Mat) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Invariant factors by brute force over all k-minors:
/// `d_1 ... d_k = gcd of k x k minors`.
pub fn minor_gcd_invariant_factors(m: &Mat) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let max_k = rows.min(cols);
    let mut out = Vec::new();
    let mut prev_gcd = 1i128;
    for k in 1..=max_k {
        let mut g = 0i128;
        for rsel in subsets(rows, k) {
            for csel in subsets(cols, k) {
                let minor: Mat = rsel
                    .iter()
                    .map(|&i| csel.iter().map(|&j| m[i][j]).collect())
                    .collect();
                g = gcd(g, det(&minor));
                if g == 1 {
                    break;
                }
            }
            if g == 1 {
                break;
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev_gcd);
        prev_gcd = g;
    }
    out
}

/// Column Hermite form: returns `(h, t)` with `m * t = h`, `t` unimodular,
/// and `h` in column staircase form.
pub fn column_hermite(m: &Mat) -> (Mat, Mat) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h = m.clone();
    let mut t: Mat = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivot_col = 0;
    for row in 0..rows {
        if pivot_col >= cols {
            break;
        }
        // Clear the row right of pivot_col by gcd steps on columns.
        loop {
            let mut best: Option<usize> = None;
            for j in pivot_col..cols {
                if h[row][j] != 0 {
                    best = match best {
                        None => Some(j),
                        Some(b) if h[row][j].abs() < h[row][b].abs() => Some(j),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            swap_cols(&mut h, &mut t, pivot_col, b);
            let p = h[row][pivot_col];
            let mut dirty = false;
            for j in pivot_col + 1..cols {
                if h[row][j] != 0 {
                    let q = h[row][j].div_euclid(p);
                    col_axpy(&mut h, &mut t, j, pivot_col, -q);
                    if h[row][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        if h[row][pivot_col] != 0 {
            if h[row][pivot_col] < 0 {
                negate_col(&mut h, &mut t, pivot_col);
            }
            pivot_col += 1;
        }
    }
    (h, t)
}

fn swap_cols(h: &mut Mat, t: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in h.iter_mut() {
        row.swap(a, b);
    }
    for row in t.iter_mut() {
        row.swap(a, b);
    }
}

fn col_axpy(h: &mut Mat, t: &mut Mat, dst: usize, src: usize, c: i128) {
    for row in h.iter_mut() {
        row[dst] += c * row[src];
    }
    for row in t.iter_mut() {
        row[dst] += c * row[src];
    }
}

fn negate_col(h: &mut Mat, t: &mut Mat, j: usize) {
    for row in h.iter_mut() {
        row[j] = -row[j];
    }
    for row in t.iter_mut() {
        row[j] = -row[j];
    }
}

/// Kernel basis of `m` through the Hermite route: the transform columns
/// over the zero columns of the staircase.
pub fn hermite_kernel(m: &Mat) -> Mat {
    let cols = m.first().map_or(0, Vec::len);
    let (h, t) = column_hermite(m);
    let rows = m.len();
    let mut kernel_cols = Vec::new();
    for j in 0..cols {
        if (0..rows).all(|i| h[i][j] == 0) {
            kernel_cols.push((0..cols).map(|i| t[i][j]).collect::<Vec<_>>());
        }
    }
    // Transpose the collected columns into a cols x k matrix.
    let k = kernel_cols.len();
    (0..cols)
        .map(|i| (0..k).map(|j| kernel_cols[j][i]).collect())
        .collect()
}

/// Solve `k_mat * x = v` exactly; `None` when `v` is outside the span.
pub fn solve_in_span(k_mat: &Mat, v: &[i128]) -> Option<Vec<i128>> {
    let rows = k_mat.len();
    let cols = k_mat.first().map_or(0, Vec::len);
    let (h, t) = column_hermite(k_mat);
    let mut rest: Vec<i128> = v.to_vec();
    let mut y = vec![0i128; cols];
    // Staircase forward-substitution: for each column, its topmost
    // nonzero entry is the pivot.
    for j in 0..cols {
        let Some(pivot_row) = (0..rows).find(|&i| h[i][j] != 0) else {
            continue;
        };
        let p = h[pivot_row][j];
        if rest[pivot_row] % p != 0 {
            return None;
        }
        let q = rest[pivot_row] / p;
        y[j] = q;
        for i in 0..rows {
            rest[i] -= q * h[i][j];
        }
    }
    if rest.iter().any(|&r| r != 0) {
        return None;
    }
    // x = t * y
    Some(
        (0..cols)
            .map(|i| (0..cols).map(|j| t[i][j] * y[j]).sum())
            .collect(),
    )
}

/// Middle homology `ker(d1) / im(d2)` of `Z^a --d2--> Z^b --d1--> Z^c`,
/// computed entirely through the Hermite/minor-gcd route.
/// Returns `(free_rank, torsion_chain)`.
pub fn homology_oracle(d1: &Mat, d2: &Mat) -> (usize, Vec<i128>) {
    let b = d1.first().map_or(0, Vec::len);
    let kernel = hermite_kernel(d1); // b x k
    let k = kernel.first().map_or(0, Vec::len);
    let a = d2.first().map_or(0, Vec::len);
    // Express the image columns in kernel coordinates.
    let mut x: Mat = vec![vec![0; a]; k];
    for col in 0..a {
        let v: Vec<i128> = (0..b).map(|i| d2[i][col]).collect();
        let sol = solve_in_span(&kernel, &v).expect("image must lie in the kernel");
        for i in 0..k {
            x[i][col] = sol[i];
        }
    }
    let factors = minor_gcd_invariant_factors(&x);
    let rank = factors.len();
    let torsion: Vec<i128> = factors.into_iter().filter(|&f| f > 1).collect();
    (k - rank, torsion)
}

/// Classify a finite quotient `Z^n / span(columns)` by enumerating the
/// classes of a box of representatives; only valid when the quotient is
/// finite. Returns `(order, max_element_order)`.
pub fn box_quotient_classify(columns: &Mat, radius: i128) -> (usize, i128) {
    let n = columns.len();
    let in_lattice = |v: &[i128]| -> bool { solve_in_span(columns, v).is_some() };
    // Collect distinct classes from the box by pairwise comparison.
    let mut reps: Vec<Vec<i128>> = Vec::new();
    let mut stack = vec![0i128; n];
    enumerate_box(&mut stack, 0, radius, &mut |v| {
        let known = reps
            .iter()
            .any(|r| in_lattice(&diff_vec(r, v)));
        if !known {
            reps.push(v.to_vec());
        }
    });
    let mut max_order = 0i128;
    for r in &reps {
        let mut m = 1i128;
        loop {
            let scaled: Vec<i128> = r.iter().map(|x| x * m).collect();
            if in_lattice(&scaled) {
                break;
            }
            m += 1;
            assert!(m < 10_000, "quotient not finite at the probed radius");
        }
        max_order = max_order.max(m);
    }
    (reps.len(), max_order)
}

fn diff_vec(a: &[i128], b: &[i128]) -> Vec<i128> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn enumerate_box(stack: &mut Vec<i128>, idx: usize, radius: i128, sink: &mut impl FnMut(&[i128])) {
    if idx == stack.len() {
        sink(stack);
        return;
    }
    for v in -radius..=radius {
        stack[idx] = v;
        enumerate_box(stack, idx + 1, radius, sink);
    }
    stack[idx] = 0;
}
