//! Integer kernels of small integer matrices and the parity test used for
//! sharpness certificates.

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A basis of `{m ∈ Z^r : A m = 0}` for a `k × r` integer matrix given by rows.
///
/// Column-style Hermite reduction: unimodular column operations bring `A` to
/// echelon form `A U = [H | 0]`; the columns of `U` matching the zero block
/// span the kernel lattice. Returns `None` on `i128` overflow.
pub fn integer_kernel(rows: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let r = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|row| row.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..r)
        .map(|i| (0..r).map(|j| i128::from(i == j)).collect())
        .collect();

    // Column operation on (p, c): [col_p, col_c] <- [col_p, col_c] * [[x, -b/g], [y, a/g]].
    let combine = |m: &mut Vec<Vec<i128>>, p: usize, c: usize, x: i128, y: i128, s: i128, t: i128| -> Option<()> {
        for row in m.iter_mut() {
            let (vp, vc) = (row[p], row[c]);
            row[p] = vp.checked_mul(x)?.checked_add(vc.checked_mul(y)?)?;
            row[c] = vp.checked_mul(s)?.checked_add(vc.checked_mul(t)?)?;
        }
        Some(())
    };

    let mut pivot = 0;
    for i in 0..a.len() {
        if pivot >= r {
            break;
        }
        for c in pivot + 1..r {
            let (ap, ac) = (a[i][pivot], a[i][c]);
            if ac == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(ap, ac);
            let (s, t) = (-ac / g, ap / g);
            combine(&mut a, pivot, c, x, y, s, t)?;
            combine(&mut u, pivot, c, x, y, s, t)?;
        }
        if a[i][pivot] != 0 {
            pivot += 1;
        }
    }
    (pivot..r)
        .map(|c| (0..r).map(|row| i64::try_from(u[row][c]).ok()).collect())
        .collect()
}

/// Whether every integer solution `m` of `Σ_j m_j x_j = 0` (for each
/// coordinate row `x`) and `Σ_j m_j = 0` has `Σ_{j ∈ S} m_j` even.
///
/// `coords[j]` are integer coordinates of the `j`-th support eigenvalue in a
/// fixed basis of a `Q`-vector space containing the spectrum (for an integer
/// spectrum that is just `[λ_j]`). Parity of a linear functional is decided on
/// a lattice basis. `None` means the arithmetic overflowed.
pub fn parity_forced_even(coords: &[Vec<i64>], in_s: &[bool]) -> Option<bool> {
    assert_eq!(coords.len(), in_s.len(), "one coordinate vector per eigenvalue");
    let r = coords.len();
    let dims = coords.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<i64>> = (0..dims).map(|b| coords.iter().map(|c| c[b]).collect()).collect();
    rows.push(vec![1; r]);
    let kernel = integer_kernel(&rows)?;
    Some(kernel.iter().all(|m| {
        let s: i64 = m.iter().zip(in_s).filter(|(_, &s)| s).map(|(x, _)| x).sum();
        s.rem_euclid(2) == 0
    }))
}
