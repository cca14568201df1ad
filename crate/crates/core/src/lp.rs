//! Dense two-phase simplex over exact rationals.
//!
//! All variables are implicitly non-negative. Every row is first brought to
//! the canonical form `a·x ≥ b` (`≤` rows are negated, `=` rows become a
//! pair), then each canonical row gets one surplus column and, when its
//! right-hand side is positive, one artificial column. Pivoting follows
//! Bland's rule, so the solver terminates on degenerate inputs.
//!
//! Returned points and rays are re-checked against the original program by
//! exact substitution before they leave this module.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    GreaterEq,
    LessEq,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `coefficients · x  (relation)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coefficients: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coefficients,
            relation,
            rhs,
        }
    }

    fn lhs(&self, x: &[Rational]) -> Rational {
        dot(&self.coefficients, x)
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::GreaterEq => lhs >= self.rhs,
            Relation::LessEq => lhs <= self.rhs,
            Relation::Equal => lhs == self.rhs,
        }
    }

    /// Does direction `r` keep the homogeneous version of this row?
    fn admits_direction(&self, r: &[Rational]) -> bool {
        let lhs = self.lhs(r);
        match self.relation {
            Relation::GreaterEq => !lhs.is_negative(),
            Relation::LessEq => !lhs.is_positive(),
            Relation::Equal => lhs.is_zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    /// A program with a zero objective over `num_vars` variables.
    pub fn feasibility(num_vars: usize) -> Self {
        LinearProgram::new(Sense::Minimize, vec![Rational::zero(); num_vars])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint::new(coefficients, relation, rhs));
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coefficients.len() != n {
                return Err(Error::Contract(format!(
                    "constraint {i} has {} coefficients, program has {n} variables",
                    row.coefficients.len()
                )));
            }
        }
        Ok(())
    }

    fn improves(&self, ray: &[Rational]) -> bool {
        let delta = dot(&self.objective, ray);
        match self.sense {
            Sense::Minimize => delta.is_negative(),
            Sense::Maximize => delta.is_positive(),
        }
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }

    pub fn is_improving_ray(&self, r: &[Rational]) -> bool {
        r.len() == self.num_vars()
            && r.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| c.admits_direction(r))
            && self.improves(r)
    }

    pub fn value_at(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
    /// `point + t·ray` is feasible for every `t ≥ 0` and the objective
    /// improves without bound along it.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let outcome = Tableau::build(lp).run(lp);
    verify(lp, &outcome)?;
    Ok(outcome)
}

/// Any point satisfying `constraints` with all variables non-negative.
pub fn feasible(constraints: &[Constraint], num_vars: usize) -> Result<Option<Vec<Rational>>> {
    let mut lp = LinearProgram::feasibility(num_vars);
    lp.constraints = constraints.to_vec();
    match solve(&lp)? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Optimal { point, .. } => Ok(Some(point)),
        LpOutcome::Unbounded { .. } => Err(Error::Internal("zero objective reported unbounded".into())),
    }
}

fn verify(lp: &LinearProgram, outcome: &LpOutcome) -> Result<()> {
    let ok = match outcome {
        LpOutcome::Infeasible => true,
        LpOutcome::Optimal { point, value } => lp.is_feasible_point(point) && lp.value_at(point) == *value,
        LpOutcome::Unbounded { point, ray } => lp.is_feasible_point(point) && lp.is_improving_ray(ray),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "simplex result failed exact re-verification: {outcome:?}"
        )))
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

struct Tableau {
    /// Each row is `[columns..., rhs]`.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_vars: usize,
    /// First artificial column; everything at or after it is artificial.
    artificial_start: usize,
    num_cols: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars();
        let mut canonical: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for c in &lp.constraints {
            let negated = || -> Vec<Rational> { c.coefficients.iter().map(|v| -v.clone()).collect() };
            match c.relation {
                Relation::GreaterEq => canonical.push((c.coefficients.clone(), c.rhs.clone())),
                Relation::LessEq => canonical.push((negated(), -c.rhs.clone())),
                Relation::Equal => {
                    canonical.push((c.coefficients.clone(), c.rhs.clone()));
                    canonical.push((negated(), -c.rhs.clone()));
                }
            }
        }

        let m = canonical.len();
        let needs_artificial: Vec<bool> = canonical.iter().map(|(_, b)| b.is_positive()).collect();
        let num_artificial = needs_artificial.iter().filter(|&&a| a).count();
        let artificial_start = n + m;
        let num_cols = artificial_start + num_artificial;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_artificial = artificial_start;
        for (r, (a, b)) in canonical.into_iter().enumerate() {
            let mut row = vec![Rational::zero(); num_cols + 1];
            if needs_artificial[r] {
                // a·x − s + art = b, b > 0
                for (j, v) in a.into_iter().enumerate() {
                    row[j] = v;
                }
                row[n + r] = -Rational::one();
                row[next_artificial] = Rational::one();
                row[num_cols] = b;
                basis.push(next_artificial);
                next_artificial += 1;
            } else {
                // −a·x + s = −b ≥ 0
                for (j, v) in a.into_iter().enumerate() {
                    row[j] = -v;
                }
                row[n + r] = Rational::one();
                row[num_cols] = -b;
                basis.push(n + r);
            }
            rows.push(row);
        }

        Tableau {
            rows,
            basis,
            num_vars: n,
            artificial_start,
            num_cols,
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        if self.num_cols > self.artificial_start {
            let mut phase1_cost = vec![Rational::zero(); self.num_cols];
            for c in phase1_cost.iter_mut().skip(self.artificial_start) {
                *c = Rational::one();
            }
            let mut reduced = self.price(&phase1_cost);
            match self.optimize(&mut reduced, self.num_cols) {
                Phase::Optimal => {}
                Phase::Unbounded(_) => unreachable!("phase one is bounded below by zero"),
            }
            let infeasibility = self
                .rows
                .iter()
                .zip(&self.basis)
                .filter(|(_, &b)| b >= self.artificial_start)
                .fold(Rational::zero(), |acc, (row, _)| acc + &row[self.num_cols]);
            if infeasibility.is_positive() {
                return LpOutcome::Infeasible;
            }
            self.evict_artificials();
        }

        let mut cost = vec![Rational::zero(); self.num_cols];
        for (j, c) in lp.objective.iter().enumerate() {
            cost[j] = match lp.sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => -c.clone(),
            };
        }
        let mut reduced = self.price(&cost);
        match self.optimize(&mut reduced, self.artificial_start) {
            Phase::Optimal => {
                let point = self.point();
                let value = lp.value_at(&point);
                LpOutcome::Optimal { point, value }
            }
            Phase::Unbounded(entering) => {
                let mut ray = vec![Rational::zero(); self.num_vars];
                if entering < self.num_vars {
                    ray[entering] = Rational::one();
                }
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if b < self.num_vars {
                        ray[b] = -row[entering].clone();
                    }
                }
                LpOutcome::Unbounded {
                    point: self.point(),
                    ray,
                }
            }
        }
    }

    /// Reduced costs `c − c_B·B⁻¹A`; the last entry holds minus the objective.
    fn price(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut reduced: Vec<Rational> = cost.to_vec();
        reduced.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (r, v) in reduced.iter_mut().zip(row) {
                if !v.is_zero() {
                    *r -= cb * v;
                }
            }
        }
        reduced
    }

    /// Bland's rule over columns `0..allowed`.
    fn optimize(&mut self, reduced: &mut [Rational], allowed: usize) -> Phase {
        loop {
            let Some(entering) = (0..allowed).find(|&j| reduced[j].is_negative()) else {
                return Phase::Optimal;
            };
            let rhs = self.num_cols;
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[entering].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[entering];
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((pivot_row, _)) = leaving else {
                return Phase::Unbounded(entering);
            };
            self.pivot(pivot_row, entering, reduced);
        }
    }

    fn pivot(&mut self, r: usize, c: usize, reduced: &mut [Rational]) {
        let pivot = self.rows[r][c].clone();
        if !pivot.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &pivot;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |target: &mut [Rational]| {
            let factor = target[c].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &nonzero {
                target[j] -= &factor * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(reduced);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// After a successful phase one every artificial sits at zero. Pivot
    /// each basic artificial onto a structural column, or drop its row when
    /// the row is a linear combination of the others.
    fn evict_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.artificial_start {
                r += 1;
                continue;
            }
            match (0..self.artificial_start).find(|&j| !self.rows[r][j].is_zero()) {
                Some(j) => {
                    let mut scratch = vec![Rational::zero(); self.num_cols + 1];
                    self.pivot(r, j, &mut scratch);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }

    fn point(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.num_vars {
                x[b] = row[self.num_cols].clone();
            }
        }
        x
    }
}
