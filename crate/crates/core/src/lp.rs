//! Thin wrapper over the `minilp` simplex solver.

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Solution, Variable};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Var(Variable);

pub(crate) struct Program {
    problem: Problem,
}

pub(crate) struct Solved {
    solution: Solution,
}

impl Program {
    pub fn minimize() -> Self {
        Program {
            problem: Problem::new(OptimizationDirection::Minimize),
        }
    }

    pub fn maximize() -> Self {
        Program {
            problem: Problem::new(OptimizationDirection::Maximize),
        }
    }

    pub fn var(&mut self, objective: f64, lo: f64, hi: f64) -> Var {
        Var(self.problem.add_var(objective, (lo, hi)))
    }

    fn add(&mut self, terms: &[(Var, f64)], op: ComparisonOp, rhs: f64) {
        let mut expr = LinearExpr::empty();
        for (v, c) in terms {
            expr.add(v.0, *c);
        }
        self.problem.add_constraint(expr, op, rhs);
    }

    pub fn le(&mut self, terms: &[(Var, f64)], rhs: f64) {
        self.add(terms, ComparisonOp::Le, rhs)
    }

    pub fn ge(&mut self, terms: &[(Var, f64)], rhs: f64) {
        self.add(terms, ComparisonOp::Ge, rhs)
    }

    pub fn eq(&mut self, terms: &[(Var, f64)], rhs: f64) {
        self.add(terms, ComparisonOp::Eq, rhs)
    }

    /// `None` when infeasible or unbounded.
    pub fn solve(&self) -> Option<Solved> {
        self.problem.solve().ok().map(|solution| Solved { solution })
    }
}

impl Solved {
    pub fn value(&self, v: Var) -> f64 {
        self.solution[v.0]
    }

    pub fn objective(&self) -> f64 {
        self.solution.objective()
    }
}
