//! Exact linear algebra over a `Coeff` field.

use super::coeff::Coeff;

/// Determinant by Gaussian elimination; exact over any field.
pub fn det<F: Coeff>(mut a: Vec<Vec<F>>, ctx: &F::Ctx) -> F {
    let n = a.len();
    let mut d = F::one_in(ctx);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return F::zero_in(ctx);
        };
        if p != col {
            a.swap(p, col);
            d = d.neg();
        }
        let piv = a[col][col].clone();
        d = d.mul(&piv);
        let pinv = piv.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].mul(&pinv);
            for c in col..n {
                let v = a[col][c].mul(&f);
                a[r][c] = a[r][c].sub(&v);
            }
        }
    }
    d
}

/// Solves `a x = b` for square nonsingular `a`.
pub fn solve_square<F: Coeff>(a: Vec<Vec<F>>, b: Vec<F>) -> Option<Vec<F>> {
    let n = a.len();
    let rows: Vec<Vec<F>> = a
        .into_iter()
        .zip(b)
        .map(|(mut r, v)| {
            r.push(v);
            r
        })
        .collect();
    let ech = Echelon::reduce(rows, n);
    if ech.pivots.len() < n || ech.inconsistent_row.is_some() {
        return None;
    }
    Some((0..n).map(|i| ech.rows[i][n].clone()).collect())
}

/// Reduced row echelon form of an augmented matrix.
#[derive(Debug, Clone)]
pub struct Echelon<F: Coeff> {
    pub rows: Vec<Vec<F>>,
    /// pivot column of each leading row
    pub pivots: Vec<usize>,
    /// index (into the original rows) of a row reduced to 0 = nonzero
    pub inconsistent_row: Option<usize>,
}

impl<F: Coeff> Echelon<F> {
    /// Row-reduces `rows` whose first `ncols` entries are the coefficient part
    /// and any remaining entries are right-hand sides.
    pub fn reduce(rows: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
        let mut tagged: Vec<(usize, Vec<F>)> = rows.into_iter().enumerate().collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            let Some(p) = (r..tagged.len()).find(|&i| !tagged[i].1[col].is_zero()) else {
                continue;
            };
            tagged.swap(r, p);
            let pinv = tagged[r].1[col].inv().expect("nonzero pivot");
            let prow: Vec<F> = tagged[r].1.iter().map(|v| v.mul(&pinv)).collect();
            tagged[r].1 = prow.clone();
            for (i, (_, row)) in tagged.iter_mut().enumerate() {
                if i == r || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (c, pv) in prow.iter().enumerate().skip(col) {
                    if !pv.is_zero() {
                        let v = pv.mul(&f);
                        row[c] = row[c].sub(&v);
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == tagged.len() {
                break;
            }
        }
        let inconsistent_row = tagged[r..]
            .iter()
            .filter(|(_, row)| row[ncols..].iter().any(|v| !v.is_zero()))
            .map(|(i, _)| *i)
            .min();
        Echelon { rows: tagged.into_iter().map(|(_, row)| row).collect(), pivots, inconsistent_row }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn det_small() {
        let a = vec![vec![q(2), q(1)], vec![q(7), q(4)]];
        assert_eq!(det(a, &()), q(1));
        let a = vec![vec![q(0), q(1), q(2)], vec![q(1), q(0), q(3)], vec![q(4), q(-3), q(8)]];
        assert_eq!(det(a, &()), q(-2));
        let sing = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(det(sing, &()), q(0));
    }

    #[test]
    fn solve_small() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let x = solve_square(a, vec![q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
    }

    #[test]
    fn echelon_detects_inconsistency() {
        let rows = vec![vec![q(1), q(1), q(1)], vec![q(2), q(2), q(3)]];
        let e = Echelon::reduce(rows, 2);
        assert_eq!(e.pivots, vec![0]);
        assert_eq!(e.inconsistent_row, Some(1));
    }
}
