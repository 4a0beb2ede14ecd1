use super::Matrix;
use crate::scalars::{Laurent, Ring};

/// Smith normal form `U·A·V = D` over K[x, x⁻¹].
///
/// `D` is diagonal with `d₁ | d₂ | … | d_r` followed by zeros; every nonzero
/// `dᵢ` is a monic ordinary polynomial with nonzero constant term. The
/// inverses of `U` and `V` are tracked alongside.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: Matrix<Laurent>,
    pub u_inv: Matrix<Laurent>,
    pub d: Matrix<Laurent>,
    pub v: Matrix<Laurent>,
    pub v_inv: Matrix<Laurent>,
    pub rank: usize,
}

impl Snf {
    pub fn invariant_factors(&self) -> Vec<Laurent> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Checks `U·A·V = D`, invertibility, diagonal shape and divisibility.
    pub fn verify(&self, a: &Matrix<Laurent>) -> bool {
        let (m, n) = a.shape();
        let diag_ok = (0..m).all(|i| {
            (0..n).all(|j| {
                let e = self.d.get(i, j);
                if i == j && i < self.rank {
                    !e.is_zero() && e.normalized() == *e
                } else {
                    e.is_zero()
                }
            })
        });
        let chain_ok = (1..self.rank).all(|i| self.d.get(i - 1, i - 1).divides(self.d.get(i, i)));
        diag_ok
            && chain_ok
            && self.u.mul(a).mul(&self.v) == self.d
            && self.u.mul(&self.u_inv).is_identity()
            && self.v.mul(&self.v_inv).is_identity()
    }
}

struct Calc {
    a: Matrix<Laurent>,
    u: Matrix<Laurent>,
    u_inv: Matrix<Laurent>,
    v: Matrix<Laurent>,
    v_inv: Matrix<Laurent>,
}

impl Calc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// `row[dst] += f·row[src]`
    fn add_row(&mut self, dst: usize, src: usize, f: &Laurent) {
        self.a.add_row_multiple(dst, src, f);
        self.u.add_row_multiple(dst, src, f);
        self.u_inv.add_col_multiple(src, dst, &f.neg());
    }

    /// `col[dst] += f·col[src]`
    fn add_col(&mut self, dst: usize, src: usize, f: &Laurent) {
        self.a.add_col_multiple(dst, src, f);
        self.v.add_col_multiple(dst, src, f);
        self.v_inv.add_row_multiple(src, dst, &f.neg());
    }

    /// Rows `t`, `i` ← `m·[row t; row i]` for `m` of determinant 1.
    fn mix_rows(&mut self, t: usize, i: usize, m: [[Laurent; 2]; 2]) {
        let [[a, b], [c, d]] = &m;
        let inv = [[d.clone(), b.neg()], [c.neg(), a.clone()]];
        self.a.mix_rows(t, i, &m);
        self.u.mix_rows(t, i, &m);
        self.u_inv.mix_cols(t, i, &inv);
    }

    /// Columns `t`, `j` ← `[col t, col j]·m` for `m` of determinant 1.
    fn mix_cols(&mut self, t: usize, j: usize, m: [[Laurent; 2]; 2]) {
        let [[a, b], [c, d]] = &m;
        let inv = [[d.clone(), b.neg()], [c.neg(), a.clone()]];
        self.a.mix_cols(t, j, &m);
        self.v.mix_cols(t, j, &m);
        self.v_inv.mix_rows(t, j, &inv);
    }

    fn scale_row(&mut self, i: usize, unit: &Laurent) {
        let inv = unit.unit_inverse().expect("scaling by a unit");
        self.a.scale_row(i, unit);
        self.u.scale_row(i, unit);
        self.u_inv.scale_col(i, &inv);
    }

    /// Position of a nonzero entry of least width in the trailing block, ties by position.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let (m, n) = self.a.shape();
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if let Some(w) = self.a.get(i, j).width() {
                    if best.is_none_or(|(bw, _, _)| w < bw) {
                        best = Some((w, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Clears row and column `t` and makes the pivot divide the trailing block.
    /// An entry the pivot does not divide is merged into it by a Bézout
    /// transformation, so the pivot becomes their gcd.
    fn eliminate(&mut self, t: usize) {
        let (m, n) = self.a.shape();
        loop {
            for i in t + 1..m {
                let (p, b) = (self.a.get(t, t).clone(), self.a.get(i, t).clone());
                if b.is_zero() {
                    continue;
                }
                match b.div_exact(&p) {
                    Some(q) => self.add_row(i, t, &q.neg()),
                    None => {
                        let (g, s, r) = p.xgcd(&b);
                        let (pg, bg) =
                            (p.div_exact(&g).expect("gcd"), b.div_exact(&g).expect("gcd"));
                        self.mix_rows(t, i, [[s, r], [bg.neg(), pg]]);
                    }
                }
            }
            let mut row_changed = false;
            for j in t + 1..n {
                let (p, b) = (self.a.get(t, t).clone(), self.a.get(t, j).clone());
                if b.is_zero() {
                    continue;
                }
                match b.div_exact(&p) {
                    Some(q) => self.add_col(j, t, &q.neg()),
                    None => {
                        let (g, s, r) = p.xgcd(&b);
                        let (pg, bg) =
                            (p.div_exact(&g).expect("gcd"), b.div_exact(&g).expect("gcd"));
                        self.mix_cols(t, j, [[s, bg.neg()], [r, pg]]);
                        // the column step may refill column t below the pivot
                        row_changed = true;
                    }
                }
            }
            if row_changed {
                continue;
            }
            // row and column are clear; enforce divisibility of the rest
            let pivot = self.a.get(t, t).clone();
            let offender =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !pivot.divides(self.a.get(i, j))));
            match offender {
                Some(i) => self.add_row(t, i, &Laurent::one()),
                None => break,
            }
        }
        let (unit, _) = self.a.get(t, t).associate_split();
        self.scale_row(t, &unit.unit_inverse().expect("unit"));
    }
}

pub fn snf(a: &Matrix<Laurent>) -> Snf {
    let (m, n) = a.shape();
    let mut c = Calc {
        a: a.clone(),
        u: Matrix::identity(m),
        u_inv: Matrix::identity(m),
        v: Matrix::identity(n),
        v_inv: Matrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some((i, j)) = c.pivot(t) else { break };
        c.swap_rows(t, i);
        c.swap_cols(t, j);
        c.eliminate(t);
        t += 1;
    }
    let out = Snf {
        u: c.u,
        u_inv: c.u_inv,
        d: c.a,
        v: c.v,
        v_inv: c.v_inv,
        rank: t,
    };
    debug_assert!(out.verify(a), "Smith normal form failed verification");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldKind;

    fn l(s: &str) -> Laurent {
        Laurent::parse(s, FieldKind::Rational).unwrap()
    }

    #[test]
    fn unit_entries_are_absorbed() {
        let a = Matrix::diagonal(&[l("x"), l("1+x")]);
        let s = snf(&a);
        assert!(s.verify(&a));
        assert_eq!(s.invariant_factors(), vec![l("1"), l("1+x")]);
    }

    #[test]
    fn zero_matrix() {
        let a = Matrix::<Laurent>::zeros(2, 3);
        let s = snf(&a);
        assert_eq!(s.rank, 0);
        assert!(s.u.is_identity() && s.v.is_identity() && s.d.is_zero());
    }

    #[test]
    fn single_entry() {
        let a = Matrix::from_rows(vec![vec![l("1+x")]]);
        assert_eq!(snf(&a).invariant_factors(), vec![l("1+x")]);
    }

    #[test]
    fn coprime_diagonal_collapses() {
        // diag(1+x, 1-x) ~ diag(1, 1-x²)
        let a = Matrix::diagonal(&[l("1+x"), l("1-x")]);
        let s = snf(&a);
        assert!(s.verify(&a));
        assert_eq!(s.invariant_factors(), vec![l("1"), l("-1+x^2")]);
    }

    #[test]
    fn rectangular_with_dependent_rows() {
        let a = Matrix::from_rows(vec![
            vec![l("1+x"), l("1+x"), l("0")],
            vec![l("2+2*x"), l("2+2*x"), l("0")],
        ]);
        let s = snf(&a);
        assert!(s.verify(&a));
        assert_eq!(s.invariant_factors(), vec![l("1+x")]);
    }
}
