use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Direction of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `sum coeffs[k].1 * x[coeffs[k].0]  (relation)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

/// Maximize `objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn maximize(mut self, objective: Vec<f64>) -> Self {
        self.objective = objective;
        self
    }

    pub fn push(&mut self, constraint: Constraint) {
        self.constraints.push(constraint);
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::InvalidParameter(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        let finite = |x: f64| x.is_finite();
        if !self.objective.iter().all(|&c| finite(c)) {
            return Err(Error::InvalidParameter("objective is not finite".into()));
        }
        for c in &self.constraints {
            if !finite(c.rhs) || c.coeffs.iter().any(|&(v, a)| v >= self.num_vars || !finite(a)) {
                return Err(Error::InvalidParameter("malformed constraint".into()));
            }
        }
        Ok(())
    }
}

/// Which number type the simplex pivots in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arithmetic {
    /// Exact rationals up to [`EXACT_VAR_LIMIT`] variables, floats beyond.
    #[default]
    Auto,
    Float,
    Exact,
}

/// Largest program solved in exact arithmetic under [`Arithmetic::Auto`].
pub const EXACT_VAR_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
    pub exact: bool,
    /// The optimum as a rational, when solved exactly.
    pub exact_value: Option<BigRational>,
    pub pivots: usize,
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    solve_lp_with(lp, Arithmetic::Auto)
}

pub fn solve_lp_with(lp: &LinearProgram, arithmetic: Arithmetic) -> Result<LpSolution> {
    lp.validate()?;
    let exact = match arithmetic {
        Arithmetic::Auto => lp.num_vars <= EXACT_VAR_LIMIT,
        Arithmetic::Float => false,
        Arithmetic::Exact => true,
    };
    if exact {
        Simplex::<BigRational>::build(lp)?.solve(true)
    } else {
        Simplex::<f64>::build(lp)?.solve(false)
    }
}

trait Scalar: Clone + Debug + Zero + One + Signed {
    fn from_f64(x: f64) -> Result<Self>;
    fn to_f64(&self) -> f64;
    fn positive(&self) -> bool;
    fn negative(&self) -> bool;
    /// Ordering with ties decided by tolerance for inexact types.
    fn compare(&self, other: &Self) -> Ordering;
    fn rational(&self) -> Option<BigRational>;
}

const FLOAT_TOL: f64 = 1e-11;

impl Scalar for f64 {
    fn from_f64(x: f64) -> Result<Self> {
        Ok(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn positive(&self) -> bool {
        *self > FLOAT_TOL
    }
    fn negative(&self) -> bool {
        *self < -FLOAT_TOL
    }
    fn compare(&self, other: &Self) -> Ordering {
        if (self - other).abs() <= FLOAT_TOL {
            Ordering::Equal
        } else {
            self.partial_cmp(other).unwrap_or(Ordering::Equal)
        }
    }
    fn rational(&self) -> Option<BigRational> {
        None
    }
}

impl Scalar for BigRational {
    fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .ok_or_else(|| Error::InvalidParameter(format!("{x} has no rational value")))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
    fn positive(&self) -> bool {
        self.is_positive()
    }
    fn negative(&self) -> bool {
        self.is_negative()
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Dense two-phase tableau simplex with Bland's rule.
///
/// Columns are the structural variables, then one slack or surplus per
/// inequality, then one artificial per row that needs it.
struct Simplex<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    num_vars: usize,
    first_artificial: usize,
    cols: usize,
    objective: Vec<S>,
    pivots: usize,
}

impl<S: Scalar> Simplex<S> {
    fn build(lp: &LinearProgram) -> Result<Self> {
        let n = lp.num_vars;
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let mut normalized = Vec::with_capacity(lp.constraints.len());
        for c in &lp.constraints {
            let mut dense = vec![S::zero(); n];
            for &(v, a) in &c.coeffs {
                dense[v] = dense[v].clone() + S::from_f64(a)?;
            }
            let mut rhs = S::from_f64(c.rhs)?;
            let mut relation = c.relation;
            if rhs.negative() {
                dense.iter_mut().for_each(|x| *x = -x.clone());
                rhs = -rhs;
                relation = match relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            normalized.push((dense, relation, rhs));
        }
        let artificial_count = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Le)
            .count();
        let first_artificial = n + slack_count;
        let cols = first_artificial + artificial_count;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut rhs_col = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut slack, mut art) = (n, first_artificial);
        for (dense, relation, rhs) in normalized {
            let mut row = dense;
            row.resize(cols, S::zero());
            match relation {
                Relation::Le => {
                    row[slack] = S::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -S::one();
                    slack += 1;
                    row[art] = S::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = S::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
            rhs_col.push(rhs);
        }
        let mut objective = Vec::with_capacity(n);
        for &c in &lp.objective {
            objective.push(S::from_f64(c)?);
        }
        Ok(Simplex {
            rows,
            rhs: rhs_col,
            basis,
            num_vars: n,
            first_artificial,
            cols,
            objective,
            pivots: 0,
        })
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for x in self.rows[row].iter_mut() {
            *x = x.clone() / p.clone();
        }
        self.rhs[row] = self.rhs[row].clone() / p;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let f = self.rows[r][col].clone();
            for (x, y) in self.rows[r].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            self.rhs[r] = self.rhs[r].clone() - f * pivot_rhs.clone();
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Maximize `cost . x` over columns `< allowed`, starting from the
    /// current basis.
    fn optimize(&mut self, cost: &[S], allowed: usize) -> Result<()> {
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[r][j].is_zero() {
                        reduced = reduced - cost[b].clone() * self.rows[r][j].clone();
                    }
                }
                if reduced.positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, S)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][col].positive() {
                    continue;
                }
                let ratio = self.rhs[r].clone() / self.rows[r][col].clone();
                leaving = match leaving {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => match ratio.compare(&best_ratio) {
                        Ordering::Less => Some((r, ratio)),
                        Ordering::Equal if self.basis[r] < self.basis[best] => Some((r, ratio)),
                        _ => Some((best, best_ratio)),
                    },
                };
            }
            let Some((row, _)) = leaving else {
                return Err(Error::Unbounded);
            };
            self.pivot(row, col);
        }
    }

    fn solve(mut self, exact: bool) -> Result<LpSolution> {
        if self.cols > self.first_artificial {
            let mut phase1 = vec![S::zero(); self.cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = -S::one();
            }
            self.optimize(&phase1, self.cols)?;
            let infeasibility = self
                .basis
                .iter()
                .zip(&self.rhs)
                .filter(|(&b, _)| b >= self.first_artificial)
                .fold(S::zero(), |acc, (_, v)| acc + v.clone());
            if infeasibility.positive() {
                return Err(Error::Infeasible);
            }
            self.evict_artificials();
        }
        let mut cost = self.objective.clone();
        cost.resize(self.cols, S::zero());
        self.optimize(&cost, self.first_artificial)?;
        let mut x = vec![0.0; self.num_vars];
        let mut value = S::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                x[b] = self.rhs[r].to_f64().max(0.0);
                value = value + self.objective[b].clone() * self.rhs[r].clone();
            }
        }
        Ok(LpSolution {
            value: value.to_f64(),
            x,
            exact,
            exact_value: value.rational(),
            pivots: self.pivots,
        })
    }

    /// Pivot zero-valued artificials out of the basis, dropping rows that
    /// turn out to be redundant.
    fn evict_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.first_artificial {
                r += 1;
                continue;
            }
            let col = (0..self.first_artificial).find(|&j| {
                let v = &self.rows[r][j];
                v.positive() || v.negative()
            });
            match col {
                Some(col) => {
                    self.pivot(r, col);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }
}

/// `p / q` as a rational.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
