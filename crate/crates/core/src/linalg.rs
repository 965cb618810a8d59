//! Fraction-free elimination over integral domains with exact division.

use crate::poly::Poly;

pub trait ExactRing: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact quotient; None if `d` does not divide.
    fn div_exact(&self, d: &Self) -> Option<Self>;
    fn one_like(&self) -> Self;
    /// Size heuristic used to pick pivots.
    fn weight(&self) -> usize;
}

impl ExactRing for Poly {
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        Poly::div_exact(self, d)
    }
    fn one_like(&self) -> Self {
        Poly::one()
    }
    fn weight(&self) -> usize {
        self.len()
    }
}

/// Row echelon form by Bareiss elimination. Returns the pivot columns.
/// Rows of the result beyond the rank are zero.
pub fn bareiss_echelon<T: ExactRing>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut prev: Option<T> = None;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let piv = (row..rows)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].weight());
        let Some(piv) = piv else { continue };
        m.swap(row, piv);
        let p = m[row][col].clone();
        for r in row + 1..rows {
            let f = m[r][col].clone();
            for c in col..cols {
                let v = if f.is_zero() {
                    m[r][c].mul(&p)
                } else {
                    m[r][c].mul(&p).sub(&m[row][c].mul(&f))
                };
                m[r][c] = match &prev {
                    Some(d) => v.div_exact(d).expect("Bareiss division is exact"),
                    None => v,
                };
            }
        }
        prev = Some(p);
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Determinant of a square matrix.
pub fn determinant<T: ExactRing>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return None;
    }
    let mut sign = false;
    let mut prev: Option<T> = None;
    for k in 0..n {
        let piv = (k..n).find(|&r| !m[r][k].is_zero());
        let Some(piv) = piv else {
            return Some(m[0][0].sub(&m[0][0]));
        };
        if piv != k {
            m.swap(piv, k);
            sign = !sign;
        }
        let p = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&p).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = match &prev {
                    Some(d) => v.div_exact(d).expect("Bareiss division is exact"),
                    None => v,
                };
            }
        }
        prev = Some(p);
    }
    let d = m[n - 1][n - 1].clone();
    Some(if sign { d.neg() } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{VAR_K_LG, VAR_Q};

    fn k() -> Poly {
        Poly::var(VAR_K_LG)
    }
    fn q() -> Poly {
        Poly::var(VAR_Q)
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = vec![
            vec![k(), q(), Poly::one()],
            vec![Poly::from_i64(2), k().mul(&q()), Poly::zero()],
            vec![Poly::one(), Poly::zero(), q()],
        ];
        // expansion along the last column
        let minor13 = Poly::zero().sub(&k().mul(&q()));
        let minor33 = k().mul(&k()).mul(&q()).sub(&q().mul(&Poly::from_i64(2)));
        let expect = minor13.add(&q().mul(&minor33));
        assert_eq!(determinant(m).unwrap(), expect);
    }

    #[test]
    fn echelon_rank() {
        let r1 = vec![k(), q(), Poly::one()];
        let r2: Vec<Poly> = r1.iter().map(|x| x.mul(&q())).collect();
        let r3 = vec![Poly::one(), Poly::zero(), k()];
        let mut m = vec![r1, r2, r3];
        let piv = bareiss_echelon(&mut m);
        assert_eq!(piv.len(), 2);
        assert!(m[2].iter().all(|x| x.is_zero()));
    }
}
