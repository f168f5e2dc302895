//! Exact rational linear programming: dense two-phase primal simplex with
//! Bland's anti-cycling rule.
//!
//! All variables are free; internally each is split into a difference of two
//! nonnegative variables. Inequality rows get slack variables, every row gets
//! an artificial for phase 1. Everything is `BigRational`; there is no
//! floating point and no randomized pivoting, so runs are deterministic.

use num_traits::{One, Signed, Zero};

use crate::cyclo::Rational;

/// maximize `objective . x` subject to `eq` rows (a . x = b) and `ub` rows
/// (a . x <= u), x free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub eq: Vec<(Vec<Rational>, Rational)>,
    pub ub: Vec<(Vec<Rational>, Rational)>,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        /// Dual multipliers: y . A_eq + w . A_ub = objective, w >= 0,
        /// value = y . b + w . u.
        dual_eq: Vec<Rational>,
        dual_ub: Vec<Rational>,
    },
    /// Farkas certificate: y . A_eq + w . A_ub = 0, w >= 0,
    /// y . b + w . u < 0.
    Infeasible {
        farkas_eq: Vec<Rational>,
        farkas_ub: Vec<Rational>,
    },
    Unbounded,
}

struct Tableau {
    /// m rows of ncols coefficients plus the rhs in the last slot.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, length ncols.
    red: Vec<Rational>,
    value: Rational,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x / &piv;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(prow.iter()) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        let factor = self.red[c].clone();
        if !factor.is_zero() {
            self.value = &self.value + &(&factor * &prow[self.ncols]);
            for (x, p) in self.red.iter_mut().zip(prow.iter()) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland: lowest-index column below `limit` with positive reduced cost.
    fn entering(&self, limit: usize) -> Option<usize> {
        self.red[..limit].iter().position(|r| r.is_positive())
    }

    /// Min-ratio row; ties broken by the lowest basic variable index.
    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(Rational, usize, usize)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[c].is_positive() {
                continue;
            }
            let ratio = self.rhs(i) / &row[c];
            let key = (ratio, self.basis[i], i);
            match &best {
                Some(b) if (&key.0, key.1) >= (&b.0, b.1) => {}
                _ => best = Some(key),
            }
        }
        best.map(|(_, _, i)| i)
    }

    /// Runs to optimality; false means unbounded.
    fn run(&mut self, limit: usize) -> bool {
        while let Some(c) = self.entering(limit) {
            match self.leaving(c) {
                Some(r) => self.pivot(r, c),
                None => return false,
            }
        }
        true
    }
}

pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let n2 = 2 * lp.num_vars;
    let m_eq = lp.eq.len();
    let m_ub = lp.ub.len();
    let m = m_eq + m_ub;
    let slack0 = n2;
    let art0 = n2 + m_ub;
    let ncols = art0 + m;
    let zero = Rational::zero();

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut flipped = vec![false; m];
    for (i, (a, b)) in lp.eq.iter().chain(lp.ub.iter()).enumerate() {
        assert_eq!(a.len(), lp.num_vars, "row length mismatch");
        let mut row = vec![Rational::zero(); ncols + 1];
        for (j, aj) in a.iter().enumerate() {
            row[2 * j] = aj.clone();
            row[2 * j + 1] = -aj.clone();
        }
        if i >= m_eq {
            row[slack0 + (i - m_eq)] = Rational::one();
        }
        row[ncols] = b.clone();
        if row[ncols].is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
            flipped[i] = true;
        }
        row[art0 + i] = Rational::one();
        rows.push(row);
    }

    // Phase 1: maximize minus the sum of artificials, which start basic.
    // With basic costs all -1 and real costs 0, the reduced cost of a real
    // column is the column sum, and the objective starts at minus the rhs sum.
    let mut red = vec![Rational::zero(); ncols];
    let mut value = Rational::zero();
    for row in &rows {
        for (c, x) in row[..art0].iter().enumerate() {
            if !x.is_zero() {
                red[c] = &red[c] + x;
            }
        }
        value = &value - &row[ncols];
    }
    let mut tab = Tableau {
        rows,
        red,
        value,
        basis: (art0..art0 + m).collect(),
        ncols,
    };
    let optimal = tab.run(art0);
    assert!(optimal, "phase 1 is bounded by construction");

    // Duals of the tableau system sit in the reduced costs of the artificial
    // columns (cost c_a minus y_i); undo any row sign flips when reading off.
    let unflip = |tab: &Tableau, art_cost: &Rational| -> (Vec<Rational>, Vec<Rational>) {
        let mut y = Vec::with_capacity(m);
        for i in 0..m {
            let yi = art_cost - &tab.red[art0 + i];
            y.push(if flipped[i] { -yi } else { yi });
        }
        let w = y.split_off(m_eq);
        (y, w)
    };

    if tab.value.is_negative() {
        let (farkas_eq, farkas_ub) = unflip(&tab, &-Rational::one());
        return LpOutcome::Infeasible {
            farkas_eq,
            farkas_ub,
        };
    }

    // Drive any leftover basic artificials (value 0) out of the basis so that
    // phase 2 pivots cannot re-activate them. Rows with no real coefficients
    // are redundant and stay inert.
    for r in 0..m {
        if tab.basis[r] >= art0 {
            if let Some(c) = (0..art0).position(|c| !tab.rows[r][c].is_zero()) {
                tab.pivot(r, c);
            }
        }
    }

    // Phase 2: real objective. Recompute reduced costs against the current
    // basis; the tableau body already equals B^{-1} A.
    let cost = |col: usize| -> Rational {
        if col < n2 {
            let j = col / 2;
            if col % 2 == 0 {
                lp.objective[j].clone()
            } else {
                -lp.objective[j].clone()
            }
        } else {
            Rational::zero()
        }
    };
    let basic_costs: Vec<Rational> = tab.basis.iter().map(|&b| cost(b)).collect();
    for c in 0..ncols {
        let mut rc = cost(c);
        for (cb, row) in basic_costs.iter().zip(tab.rows.iter()) {
            if !cb.is_zero() && !row[c].is_zero() {
                rc = &rc - &(cb * &row[c]);
            }
        }
        tab.red[c] = rc;
    }
    tab.value = Rational::zero();
    for (cb, row) in basic_costs.iter().zip(tab.rows.iter()) {
        if !cb.is_zero() {
            tab.value = &tab.value + &(cb * &row[ncols]);
        }
    }

    if !tab.run(art0) {
        return LpOutcome::Unbounded;
    }

    let mut col_vals = vec![Rational::zero(); ncols];
    for (r, &b) in tab.basis.iter().enumerate() {
        col_vals[b] = tab.rhs(r).clone();
    }
    let x: Vec<Rational> = (0..lp.num_vars)
        .map(|j| &col_vals[2 * j] - &col_vals[2 * j + 1])
        .collect();
    let (dual_eq, dual_ub) = unflip(&tab, &zero);
    LpOutcome::Optimal {
        x,
        value: tab.value.clone(),
        dual_eq,
        dual_ub,
    }
}
