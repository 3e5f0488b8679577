//! Exact two-phase simplex with Bland's rule.
//!
//! The solver is generic over an exact field whose operations may fail
//! (checked fixed-width rationals); a failed operation aborts the solve and
//! the caller retries with arbitrary precision.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::flow::Rational;

pub(crate) trait Field: Clone + PartialOrd + Zero + One + Signed {
    fn add_(&self, o: &Self) -> Option<Self>;
    fn sub_(&self, o: &Self) -> Option<Self>;
    fn mul_(&self, o: &Self) -> Option<Self>;
    fn div_(&self, o: &Self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn to_rational(&self) -> Rational;
}

impl Field for Ratio<i128> {
    fn add_(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub_(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul_(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div_(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Field for Rational {
    fn add_(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub_(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, solution: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// Minimizes `c·z` subject to `A z = b`, `z ≥ 0`, with integer data.
pub fn minimize(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> LpOutcome {
    if let Some(out) = Simplex::<Ratio<i128>>::solve(a, b, c) {
        return out;
    }
    Simplex::<Rational>::solve(a, b, c).expect("arbitrary precision never overflows")
}

struct Simplex<T: Field> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Field> Simplex<T> {
    fn solve(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> Option<LpOutcome> {
        let m = a.len();
        let n = c.len();
        let width = n + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (i, (row, &bi)) in a.iter().zip(b).enumerate() {
            let flip = if bi < 0 { -1 } else { 1 };
            let mut r: Vec<T> = row.iter().map(|&x| T::from_i64(flip * x)).collect();
            r.resize(width, T::zero());
            r[n + i] = T::one();
            rows.push(r);
            rhs.push(T::from_i64(flip * bi));
        }
        let mut s = Simplex { rows, rhs, basis: (n..n + m).collect() };

        // phase 1: minimize the sum of artificials
        let mut cost1 = vec![0i64; width];
        for j in n..width {
            cost1[j] = 1;
        }
        if !s.optimize(&cost1, width)? {
            unreachable!("phase 1 is bounded");
        }
        let mut infeas = T::zero();
        for (i, &bv) in s.basis.iter().enumerate() {
            if bv >= n {
                infeas = infeas.add_(&s.rhs[i])?;
            }
        }
        if !infeas.is_zero() {
            return Some(LpOutcome::Infeasible);
        }
        // drive zero-level artificials out of the basis or drop their rows
        let mut i = 0;
        while i < s.rows.len() {
            if s.basis[i] >= n {
                match (0..n).find(|&j| !s.rows[i][j].is_zero()) {
                    Some(j) => s.pivot(i, j)?,
                    None => {
                        s.rows.remove(i);
                        s.rhs.remove(i);
                        s.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for r in &mut s.rows {
            r.truncate(n);
        }

        // phase 2
        if !s.optimize(c, n)? {
            return Some(LpOutcome::Unbounded);
        }
        let mut solution = vec![Rational::zero(); n];
        let mut value = T::zero();
        for (i, &bv) in s.basis.iter().enumerate() {
            solution[bv] = s.rhs[i].to_rational();
            value = value.add_(&T::from_i64(c[bv]).mul_(&s.rhs[i])?)?;
        }
        Some(LpOutcome::Optimal { value: value.to_rational(), solution })
    }

    /// Bland's rule pivoting over the first `width` columns. Returns
    /// `Some(false)` when unbounded, `None` on arithmetic overflow.
    fn optimize(&mut self, cost: &[i64], width: usize) -> Option<bool> {
        loop {
            let mut entering = None;
            for j in 0..width {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut r = T::from_i64(cost[j]);
                for (i, &bv) in self.basis.iter().enumerate() {
                    if cost[bv] != 0 && !self.rows[i][j].is_zero() {
                        r = r.sub_(&T::from_i64(cost[bv]).mul_(&self.rows[i][j])?)?;
                    }
                }
                if r.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return Some(true) };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][j].is_positive() {
                    let ratio = self.rhs[i].div_(&self.rows[i][j])?;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((i, _)) = leave else { return Some(false) };
            self.pivot(i, j)?;
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) -> Option<()> {
        let p = self.rows[pr][pc].clone();
        if !p.is_one() {
            for x in self.rows[pr].iter_mut() {
                if !x.is_zero() {
                    *x = x.div_(&p)?;
                }
            }
            self.rhs[pr] = self.rhs[pr].div_(&p)?;
        }
        let prow = self.rows[pr].clone();
        let prhs = self.rhs[pr].clone();
        for i in 0..self.rows.len() {
            if i == pr || self.rows[i][pc].is_zero() {
                continue;
            }
            let f = self.rows[i][pc].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = x.sub_(&f.mul_(y)?)?;
                }
            }
            self.rhs[i] = self.rhs[i].sub_(&f.mul_(&prhs)?)?;
        }
        self.basis[pr] = pc;
        Some(())
    }
}
