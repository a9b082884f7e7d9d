//! Satisfiable conjunctions of literals of formulas in negation normal
//! form. A SAT solver works on the boolean skeleton and linear arithmetic
//! is checked lazily: each model is justified by some of its true atoms,
//! and when those are infeasible a clause excluding an unsatisfiable core
//! of them is learned.
//!
//! The skeleton is monotone in the atoms, so the encoding only needs one
//! direction of each definition.

use std::collections::{BTreeSet, HashMap};

use varisat::{ExtendFormula, Lit, Solver};

use super::linear::Clause;
use super::lra::Lra;
use crate::arith::Config;
use crate::error::{Error, Result};
use crate::formula::{Atom, Canon, Formula, LinAtom};

enum Node {
    Atom(usize),
    And(Vec<Node>),
    Or(Vec<Node>, Lit),
}

pub struct Skeleton<'a> {
    cfg: &'a Config,
    solver: Solver<'static>,
    atoms: Vec<LinAtom>,
    index: HashMap<LinAtom, usize>,
    vars: Vec<Lit>,
    /// Conjuncts, and whether their literals are reported.
    roots: Vec<(Node, bool)>,
    unsat: bool,
    lra: Lra<'a>,
}

impl<'a> Skeleton<'a> {
    pub fn new(cfg: &'a Config) -> Self {
        Skeleton {
            cfg,
            solver: Solver::new(),
            atoms: Vec::new(),
            index: HashMap::new(),
            vars: Vec::new(),
            roots: Vec::new(),
            unsat: false,
            lra: Lra::new(cfg),
        }
    }

    /// Adds a conjunct; `own` marks the formulas whose literals are
    /// returned by [`Skeleton::next`].
    pub fn add(&mut self, f: &Formula, own: bool) -> Result<()> {
        match self.encode(f)? {
            None => {}
            Some(None) => self.unsat = true,
            Some(Some(node)) => {
                let lit = self.lit(&node);
                self.solver.add_clause(&[lit]);
                self.roots.push((node, own));
            }
        }
        Ok(())
    }

    fn lit(&self, n: &Node) -> Lit {
        match n {
            Node::Atom(i) => self.vars[*i],
            Node::Or(_, l) => *l,
            Node::And(_) => unreachable!("conjunctions are encoded by their parts"),
        }
    }

    fn atom(&mut self, a: LinAtom) -> usize {
        if let Some(&i) = self.index.get(&a) {
            return i;
        }
        let i = self.atoms.len();
        self.vars.push(self.solver.new_lit());
        self.lra.atom(&a);
        self.index.insert(a.clone(), i);
        self.atoms.push(a);
        i
    }

    /// `None` for true, `Some(None)` for false.
    fn encode(&mut self, f: &Formula) -> Result<Option<Option<Node>>> {
        Ok(match f {
            Formula::True => None,
            Formula::False => Some(None),
            Formula::Atom(Atom::Lin(a)) => match a.canonical(self.cfg) {
                Canon::True => None,
                Canon::False => Some(None),
                Canon::Atom(a) => Some(Some(Node::Atom(self.atom(a)))),
            },
            Formula::And(gs) => {
                let mut parts = Vec::new();
                for g in gs {
                    match self.encode(g)? {
                        None => {}
                        Some(None) => return Ok(Some(None)),
                        Some(Some(n)) => parts.push(n),
                    }
                }
                match parts.len() {
                    0 => None,
                    1 => parts.pop().map(Some),
                    _ => Some(Some(Node::And(parts))),
                }
            }
            Formula::Or(gs) => {
                let mut parts = Vec::new();
                for g in gs {
                    match self.encode(g)? {
                        None => return Ok(None),
                        Some(None) => {}
                        Some(Some(n)) => parts.push(n),
                    }
                }
                match parts.len() {
                    0 => Some(None),
                    1 => parts.pop().map(Some),
                    _ => {
                        let t = self.solver.new_lit();
                        let mut clause = vec![!t];
                        for p in &parts {
                            clause.push(self.guard(p));
                        }
                        self.solver.add_clause(&clause);
                        Some(Some(Node::Or(parts, t)))
                    }
                }
            }
            other => {
                return Err(Error::CheckFailed(format!(
                    "unexpected subformula during elimination: {other}"
                )))
            }
        })
    }

    /// A literal implying `n`.
    fn guard(&mut self, n: &Node) -> Lit {
        match n {
            Node::And(parts) => {
                let t = self.solver.new_lit();
                for p in parts {
                    let l = self.guard(p);
                    self.solver.add_clause(&[!t, l]);
                }
                t
            }
            other => self.lit(other),
        }
    }

    /// Atoms true in the model that suffice for `n`, preferring ones
    /// already chosen.
    fn justify(n: &Node, truth: &dyn Fn(Lit) -> bool, vars: &[Lit], out: &mut BTreeSet<usize>) {
        let holds = |n: &Node| Self::holds(n, truth, vars);
        match n {
            Node::Atom(i) => {
                out.insert(*i);
            }
            Node::And(parts) => parts
                .iter()
                .for_each(|p| Self::justify(p, truth, vars, out)),
            Node::Or(parts, _) => {
                let pick = parts
                    .iter()
                    .find(|p| matches!(p, Node::Atom(i) if out.contains(i)))
                    .or_else(|| parts.iter().find(|p| holds(p)))
                    .expect("a true disjunction has a true disjunct");
                Self::justify(pick, truth, vars, out);
            }
        }
    }

    /// Truth of `n` when its atoms take their values in the model.
    fn holds(n: &Node, truth: &dyn Fn(Lit) -> bool, vars: &[Lit]) -> bool {
        match n {
            Node::Atom(i) => truth(vars[*i]),
            Node::And(parts) => parts.iter().all(|p| Self::holds(p, truth, vars)),
            Node::Or(parts, _) => parts.iter().any(|p| Self::holds(p, truth, vars)),
        }
    }

    /// The literals of the own conjuncts in a satisfiable conjunction of
    /// literals implying every conjunct, or `None`. Each round counts
    /// against `budget`.
    pub fn next(&mut self, budget: &mut usize, limit: usize) -> Result<Option<Clause>> {
        if self.unsat {
            return Ok(None);
        }
        loop {
            *budget += 1;
            if *budget > limit {
                return Err(Error::ResourceLimit {
                    what: "DNF branches",
                    limit,
                });
            }
            if !self
                .solver
                .solve()
                .map_err(|e| Error::CheckFailed(format!("sat solver: {e}")))?
            {
                return Ok(None);
            }
            let model: BTreeSet<Lit> = self
                .solver
                .model()
                .expect("satisfiable")
                .into_iter()
                .collect();
            let truth = |l: Lit| model.contains(&l);
            let mut own = BTreeSet::new();
            for (n, mine) in &self.roots {
                if *mine {
                    Self::justify(n, &truth, &self.vars, &mut own);
                }
            }
            let mut chosen = own.clone();
            for (n, mine) in &self.roots {
                if !*mine {
                    Self::justify(n, &truth, &self.vars, &mut chosen);
                }
            }
            let chosen: Vec<usize> = chosen.into_iter().collect();
            match self.lra.check(&chosen) {
                Ok(()) => {
                    let atoms = own.iter().map(|&i| &self.atoms[i]);
                    return Clause::from_atoms(atoms, self.cfg)
                        .map(Some)
                        .ok_or_else(|| {
                            Error::CheckFailed("a feasible conjunction fell apart".into())
                        });
                }
                Err(bad) => {
                    let block: Vec<Lit> = bad.iter().map(|&i| !self.vars[i]).collect();
                    self.solver.add_clause(&block);
                }
            }
        }
    }
}
