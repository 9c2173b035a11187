//! Exact Gaussian elimination over the Gaussian rationals.

use crate::scalar::GaussRational;

/// Solves `m · x = rhs` for a dense `rows × cols` matrix. Returns one solution
/// (free variables set to zero) or `None` if the system is inconsistent.
pub fn solve(mut m: Vec<Vec<GaussRational>>, mut rhs: Vec<GaussRational>) -> Option<Vec<GaussRational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        rhs.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for k in c..cols {
            m[r][k] = &m[r][k] * &inv;
        }
        rhs[r] = &rhs[r] * &inv;
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let t = &f * &m[r][k];
                    m[i][k] = &m[i][k] - &t;
                }
                let t = &f * &rhs[r];
                rhs[i] = &rhs[i] - &t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![GaussRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let m = vec![vec![g(1), g(1)], vec![g(1), g(-1)], vec![g(2), g(0)]];
        let x = solve(m.clone(), vec![g(3), g(1), g(4)]).unwrap();
        assert_eq!(x, vec![g(2), g(1)]);
        assert!(solve(m, vec![g(3), g(1), g(5)]).is_none());
    }

    #[test]
    fn complex_pivot() {
        let i = GaussRational::i();
        let x = solve(vec![vec![i.clone()]], vec![g(2)]).unwrap();
        assert_eq!(&x[0] * &i, g(2));
    }

    #[test]
    fn underdetermined_sets_free_to_zero() {
        let x = solve(vec![vec![g(1), g(1)]], vec![g(5)]).unwrap();
        assert_eq!(x, vec![g(5), g(0)]);
    }
}
