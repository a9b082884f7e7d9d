//! Incremental feasibility of conjunctions of linear atoms: the general
//! simplex method on a tableau with bounded variables. Each distinct
//! linear form gets a slack variable and atoms become bounds on slacks;
//! strict bounds are shifted by a positive infinitesimal. An infeasible
//! row is explained by the bounds it mentions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::arith::{Config, Quad};
use crate::formula::{LinAtom, LinExpr, Rel, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Lt,
    Le,
    Eq,
}

/// `a + b * delta` for an infinitesimal `delta > 0`.
#[derive(Clone, Debug, Default)]
struct D(Quad, Quad);

impl D {
    fn real(q: Quad) -> Self {
        D(q, Quad::zero())
    }

    fn add(&self, o: &D) -> D {
        D(&self.0 + &o.0, &self.1 + &o.1)
    }

    fn sub(&self, o: &D) -> D {
        D(&self.0 - &o.0, &self.1 - &o.1)
    }

    fn times(&self, k: &Quad, cfg: &Config) -> D {
        D(self.0.mul(k, cfg), self.1.mul(k, cfg))
    }

    fn cmp(&self, o: &D, cfg: &Config) -> Ordering {
        self.0
            .cmp_in(&o.0, cfg)
            .then_with(|| self.1.cmp_in(&o.1, cfg))
    }
}

#[derive(Clone, Copy)]
enum Side {
    Upper,
    Lower,
    Both,
}

/// Whether some point of `F^n` satisfies every `e ~ 0`. Constraints
/// without variables are decided directly.
pub fn feasible(system: &[(LinExpr, Kind)], cfg: &Config) -> bool {
    let mut l = Lra::new(cfg);
    let mut ids = Vec::new();
    for (e, k) in system {
        if e.coeffs.is_empty() {
            let s = e.constant.sign(cfg);
            let ok = match k {
                Kind::Lt => s < 0,
                Kind::Le => s <= 0,
                Kind::Eq => s == 0,
            };
            if !ok {
                return false;
            }
        } else {
            ids.push(l.constraint(e, *k));
        }
    }
    l.check(&ids).is_ok()
}

pub struct Lra<'a> {
    cfg: &'a Config,
    cols: HashMap<Var, usize>,
    slacks: HashMap<BTreeMap<Var, Quad>, usize>,
    /// `rows[r]` gives the basic variable `basic[r]` in terms of the
    /// nonbasic ones.
    rows: Vec<Vec<Quad>>,
    basic: Vec<usize>,
    row_of: Vec<Option<usize>>,
    value: Vec<D>,
    lower: Vec<Option<(D, usize)>>,
    upper: Vec<Option<(D, usize)>>,
    /// Per atom: its variable, bound and side.
    atoms: Vec<(usize, D, Side)>,
}

impl<'a> Lra<'a> {
    pub fn new(cfg: &'a Config) -> Self {
        Lra {
            cfg,
            cols: HashMap::new(),
            slacks: HashMap::new(),
            rows: Vec::new(),
            basic: Vec::new(),
            row_of: Vec::new(),
            value: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            atoms: Vec::new(),
        }
    }

    fn new_var(&mut self) -> usize {
        for r in &mut self.rows {
            r.push(Quad::zero());
        }
        self.row_of.push(None);
        self.value.push(D::default());
        self.lower.push(None);
        self.upper.push(None);
        self.value.len() - 1
    }

    fn column(&mut self, v: &Var) -> usize {
        if let Some(&j) = self.cols.get(v) {
            return j;
        }
        let j = self.new_var();
        self.cols.insert(v.clone(), j);
        j
    }

    /// A variable equal to `sum form`, whose leading coefficient is 1.
    fn slack(&mut self, form: BTreeMap<Var, Quad>) -> usize {
        if let Some(&s) = self.slacks.get(&form) {
            return s;
        }
        let cfg = self.cfg;
        let cols: Vec<(usize, Quad)> = form
            .iter()
            .map(|(v, c)| (self.column(v), c.clone()))
            .collect();
        let s = self.new_var();
        let mut row = vec![Quad::zero(); self.value.len()];
        let mut value = D::default();
        for (j, c) in cols {
            value = value.add(&self.value[j].times(&c, cfg));
            match self.row_of[j] {
                Some(r) => {
                    for (x, y) in row.iter_mut().zip(&self.rows[r]) {
                        if !y.is_zero() {
                            *x = &*x + &c.mul(y, cfg);
                        }
                    }
                }
                None => row[j] = &row[j] + &c,
            }
        }
        self.row_of[s] = Some(self.rows.len());
        self.rows.push(row);
        self.basic.push(s);
        self.value[s] = value;
        self.slacks.insert(form, s);
        s
    }

    /// Registers an atom mentioning some variable; atoms are numbered in
    /// order of registration.
    pub fn atom(&mut self, a: &LinAtom) -> usize {
        let kind = match a.rel {
            Rel::Lt => Kind::Lt,
            Rel::Eq => Kind::Eq,
        };
        self.constraint(&a.expr, kind)
    }

    /// Registers `e ~ 0` like [`Lra::atom`].
    pub fn constraint(&mut self, e: &LinExpr, kind: Kind) -> usize {
        let cfg = self.cfg;
        let lead = e
            .coeffs
            .values()
            .next()
            .expect("atom mentions a variable")
            .clone();
        let inv = lead.inv(cfg).expect("nonzero coefficient");
        let form: BTreeMap<Var, Quad> = e
            .coeffs
            .iter()
            .map(|(v, c)| (v.clone(), c.mul(&inv, cfg)))
            .collect();
        let s = self.slack(form);
        // lead * (s + k) ~ 0 with k = constant / lead.
        let bound = -&e.constant.mul(&inv, cfg);
        let positive = lead.sign(cfg) > 0;
        let (b, side) = match (kind, positive) {
            (Kind::Eq, _) => (D::real(bound), Side::Both),
            (Kind::Le, true) => (D::real(bound), Side::Upper),
            (Kind::Le, false) => (D::real(bound), Side::Lower),
            (Kind::Lt, true) => (D(bound, -Quad::one()), Side::Upper),
            (Kind::Lt, false) => (D(bound, Quad::one()), Side::Lower),
        };
        self.atoms.push((s, b, side));
        self.atoms.len() - 1
    }

    /// Whether the atoms with these numbers have a common solution;
    /// otherwise some of them that have none.
    pub fn check(&mut self, ids: &[usize]) -> Result<(), Vec<usize>> {
        self.lower.iter_mut().for_each(|b| *b = None);
        self.upper.iter_mut().for_each(|b| *b = None);
        for &id in ids {
            let (x, b, side) = self.atoms[id].clone();
            if matches!(side, Side::Upper | Side::Both) {
                self.assert_upper(x, b.clone(), id)?;
            }
            if matches!(side, Side::Lower | Side::Both) {
                self.assert_lower(x, b, id)?;
            }
        }
        self.solve()
    }

    fn assert_upper(&mut self, x: usize, b: D, id: usize) -> Result<(), Vec<usize>> {
        let cfg = self.cfg;
        if let Some((u, _)) = &self.upper[x] {
            if u.cmp(&b, cfg) != Ordering::Greater {
                return Ok(());
            }
        }
        if let Some((l, why)) = &self.lower[x] {
            if l.cmp(&b, cfg) == Ordering::Greater {
                return Err(vec![*why, id]);
            }
        }
        if self.row_of[x].is_none() && self.value[x].cmp(&b, cfg) == Ordering::Greater {
            self.update(x, b.clone());
        }
        self.upper[x] = Some((b, id));
        Ok(())
    }

    fn assert_lower(&mut self, x: usize, b: D, id: usize) -> Result<(), Vec<usize>> {
        let cfg = self.cfg;
        if let Some((l, _)) = &self.lower[x] {
            if l.cmp(&b, cfg) != Ordering::Less {
                return Ok(());
            }
        }
        if let Some((u, why)) = &self.upper[x] {
            if u.cmp(&b, cfg) == Ordering::Less {
                return Err(vec![*why, id]);
            }
        }
        if self.row_of[x].is_none() && self.value[x].cmp(&b, cfg) == Ordering::Less {
            self.update(x, b.clone());
        }
        self.lower[x] = Some((b, id));
        Ok(())
    }

    /// Moves nonbasic `x` to `v`, keeping the rows satisfied.
    fn update(&mut self, x: usize, v: D) {
        let cfg = self.cfg;
        let d = v.sub(&self.value[x]);
        for (r, row) in self.rows.iter().enumerate() {
            if !row[x].is_zero() {
                let b = self.basic[r];
                self.value[b] = self.value[b].add(&d.times(&row[x], cfg));
            }
        }
        self.value[x] = v;
    }

    fn below(&self, x: usize) -> bool {
        matches!(&self.lower[x], Some((l, _)) if self.value[x].cmp(l, self.cfg) == Ordering::Less)
    }

    fn above(&self, x: usize) -> bool {
        matches!(&self.upper[x], Some((u, _)) if self.value[x].cmp(u, self.cfg) == Ordering::Greater)
    }

    fn can_rise(&self, x: usize) -> bool {
        !matches!(&self.upper[x], Some((u, _)) if self.value[x].cmp(u, self.cfg) != Ordering::Less)
    }

    fn can_fall(&self, x: usize) -> bool {
        !matches!(&self.lower[x], Some((l, _)) if self.value[x].cmp(l, self.cfg) != Ordering::Greater)
    }

    /// Bland's rule: always the violated basic variable and the entering
    /// variable of least index.
    fn solve(&mut self) -> Result<(), Vec<usize>> {
        let cfg = self.cfg;
        loop {
            let Some(x) = (0..self.value.len())
                .find(|&x| self.row_of[x].is_some() && (self.below(x) || self.above(x)))
            else {
                return Ok(());
            };
            let r = self.row_of[x].expect("basic");
            let rise = self.below(x);
            let entering = (0..self.value.len()).find(|&j| {
                let a = self.rows[r][j].sign(cfg);
                match (a, rise) {
                    (0, _) => false,
                    (1, true) | (-1, false) => self.can_rise(j),
                    _ => self.can_fall(j),
                }
            });
            let Some(j) = entering else {
                let own = if rise { &self.lower[x] } else { &self.upper[x] };
                let mut why = vec![own.as_ref().expect("violated bound").1];
                for (j, a) in self.rows[r].iter().enumerate() {
                    let bound = match (a.sign(cfg), rise) {
                        (0, _) => continue,
                        (1, true) | (-1, false) => &self.upper[j],
                        _ => &self.lower[j],
                    };
                    why.push(bound.as_ref().expect("blocking bound").1);
                }
                why.sort_unstable();
                why.dedup();
                return Err(why);
            };
            let target = if rise { &self.lower[x] } else { &self.upper[x] };
            let target = target.as_ref().expect("violated bound").0.clone();
            self.pivot_and_update(r, j, target);
        }
    }

    /// Makes `j` basic in row `r`, whose basic variable moves to `v`.
    fn pivot_and_update(&mut self, r: usize, j: usize, v: D) {
        let cfg = self.cfg;
        let x = self.basic[r];
        let a = self.rows[r][j].clone();
        let inv = a.inv(cfg).expect("nonzero pivot");
        let theta = v.sub(&self.value[x]).times(&inv, cfg);
        self.value[x] = v;
        self.value[j] = self.value[j].add(&theta);
        for (k, row) in self.rows.iter().enumerate() {
            if k != r && !row[j].is_zero() {
                let b = self.basic[k];
                self.value[b] = self.value[b].add(&theta.times(&row[j], cfg));
            }
        }
        // x = a j + rest  becomes  j = (x - rest) / a.
        let mut new = std::mem::take(&mut self.rows[r]);
        for y in new.iter_mut() {
            if !y.is_zero() {
                *y = -&y.mul(&inv, cfg);
            }
        }
        new[j] = Quad::zero();
        new[x] = inv;
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[j].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut row[j]);
            for (y, n) in row.iter_mut().zip(&new) {
                if !n.is_zero() {
                    *y = &*y + &c.mul(n, cfg);
                }
            }
        }
        self.rows[r] = new;
        self.basic[r] = j;
        self.row_of[j] = Some(r);
        self.row_of[x] = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::LinExpr;

    fn atom(pairs: &[(&str, &str)], c: &str, rel: Rel) -> LinAtom {
        let mut e = LinExpr::constant(c.parse().unwrap());
        for (v, q) in pairs {
            e.add_term(v, &q.parse().unwrap());
        }
        LinAtom { expr: e, rel }
    }

    #[test]
    fn bounds_and_explanations() {
        let cfg = Config::default();
        let mut l = Lra::new(&cfg);
        // 0: x + y < 0, 1: -x < 0, 2: -y < 0, 3: -x - y < 0, 4: x - rt = 0, 5: y - 1 < 0
        let ids: Vec<usize> = [
            atom(&[("x", "1"), ("y", "1")], "0", Rel::Lt),
            atom(&[("x", "-1")], "0", Rel::Lt),
            atom(&[("y", "-1")], "0", Rel::Lt),
            atom(&[("x", "-1"), ("y", "-1")], "0", Rel::Lt),
            atom(&[("x", "1")], "-rt", Rel::Eq),
            atom(&[("y", "1")], "-1", Rel::Lt),
            atom(&[("x", "1"), ("y", "1")], "-3", Rel::Lt),
        ]
        .iter()
        .map(|a| l.atom(a))
        .collect();
        assert_eq!(ids, vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(l.check(&[0, 1, 2]), Err(vec![0, 1, 2]));
        assert_eq!(l.check(&[1, 2, 5]), Ok(()));
        assert_eq!(l.check(&[0, 3]), Err(vec![0, 3]));
        assert_eq!(l.check(&[4, 5, 2]), Ok(()));
        // x = rt, 0 < y < 1 forces x + y > rt > 1 but not > 3
        assert_eq!(l.check(&[4, 5, 2, 6]), Ok(()));
        let bad = atom(&[("x", "-1"), ("y", "-1")], "3", Rel::Lt);
        let i = l.atom(&bad);
        assert_eq!(l.check(&[4, 5, i]), Err(vec![4, 5, i]));
        assert_eq!(l.check(&[1, 2, 5, 4]), Ok(()));
    }
}
