//! A small CDCL solver: two watched literals, first-UIP learning, assumptions
//! as pseudo-decisions, and a static decision order (ascending variable index)
//! with per-variable preferred phases. No restarts, so the model found for a
//! given query is a deterministic function of the formula, the phases, and the
//! learned clauses.

use crate::model::{FeatureModel, Lit};

use super::SatEngine;

const NO_REASON: u32 = u32::MAX;
const MAX_LEARNTS: usize = 20_000;

#[derive(Debug, Clone)]
pub struct CdclSolver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    original: usize,
    watchers: Vec<Vec<u32>>,
    /// 0 unassigned, 1 true, -1 false
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    phase: Vec<bool>,
    cursor: usize,
    seen: Vec<bool>,
    unsat: bool,
    model: Vec<bool>,
    calls: u64,
    conflicts: u64,
}

impl CdclSolver {
    pub fn new(model: &FeatureModel) -> CdclSolver {
        let n = model.num_vars();
        let mut s = CdclSolver {
            num_vars: n,
            clauses: Vec::with_capacity(model.clauses().len()),
            original: 0,
            watchers: vec![Vec::new(); 2 * n],
            value: vec![0; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            phase: vec![false; n],
            cursor: 0,
            seen: vec![false; n],
            unsat: false,
            model: Vec::new(),
            calls: 0,
            conflicts: 0,
        };
        for clause in model.clauses() {
            s.add_original(clause.clone());
        }
        s.original = s.clauses.len();
        if !s.unsat && s.propagate().is_some() {
            s.unsat = true;
        }
        s
    }

    pub fn conflicts(&self) -> u64 {
        self.conflicts
    }

    fn add_original(&mut self, clause: Vec<Lit>) {
        match clause.len() {
            0 => self.unsat = true,
            1 => match self.lit_value(clause[0]) {
                0 => self.enqueue(clause[0], NO_REASON),
                -1 => self.unsat = true,
                _ => {}
            },
            _ => {
                let id = self.clauses.len() as u32;
                self.watchers[clause[0].code()].push(id);
                self.watchers[clause[1].code()].push(id);
                self.clauses.push(clause);
            }
        }
    }

    #[inline]
    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[l.var()];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    #[inline]
    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = l.var();
        self.value[v] = if l.is_positive() { 1 } else { -1 };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn new_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn backtrack(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for i in (start..self.trail.len()).rev() {
            let v = self.trail[i].var();
            self.value[v] = 0;
            self.reason[v] = NO_REASON;
            if v < self.cursor {
                self.cursor = v;
            }
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.qhead = start;
    }

    /// Returns the id of a conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watchers[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let cid = ws[i];
                i += 1;
                let clause = &mut self.clauses[cid as usize];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                let first_value = {
                    let v = self.value[first.var()];
                    if first.is_positive() {
                        v
                    } else {
                        -v
                    }
                };
                if first_value == 1 {
                    ws[j] = cid;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let v = self.value[l.var()];
                    let lv = if l.is_positive() { v } else { -v };
                    if lv != -1 {
                        clause.swap(1, k);
                        self.watchers[l.code()].push(cid);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = cid;
                j += 1;
                if first_value == -1 {
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                    conflict = Some(cid);
                } else {
                    self.enqueue(first, cid);
                }
            }
            ws.truncate(j);
            self.watchers[false_lit.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, conflict: u32) -> (Vec<Lit>, usize) {
        let current = self.decision_level() as u32;
        let mut learnt = vec![Lit::pos(0)];
        let mut pending = 0usize;
        let mut idx = self.trail.len();
        let mut clause_id = conflict;
        let mut asserting: Option<Lit> = None;
        loop {
            let skip = usize::from(asserting.is_some());
            for k in skip..self.clauses[clause_id as usize].len() {
                let q = self.clauses[clause_id as usize][k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] == current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let p = self.trail[idx];
            self.seen[p.var()] = false;
            pending -= 1;
            asserting = Some(p);
            if pending == 0 {
                break;
            }
            clause_id = self.reason[p.var()];
            debug_assert_ne!(clause_id, NO_REASON);
        }
        learnt[0] = !asserting.expect("conflict at a positive level");
        for l in &learnt[1..] {
            self.seen[l.var()] = false;
        }
        let mut backjump = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var()] > self.level[learnt[best].var()] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            backjump = self.level[learnt[1].var()] as usize;
        }
        (learnt, backjump)
    }

    fn learn(&mut self, learnt: Vec<Lit>) {
        if learnt.len() == 1 {
            self.enqueue(learnt[0], NO_REASON);
            return;
        }
        let id = self.clauses.len() as u32;
        self.watchers[learnt[0].code()].push(id);
        self.watchers[learnt[1].code()].push(id);
        let first = learnt[0];
        self.clauses.push(learnt);
        self.enqueue(first, id);
    }

    /// Drops every learned clause. Only valid at decision level 0.
    fn reduce_learnts(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        self.clauses.truncate(self.original);
        for w in &mut self.watchers {
            w.clear();
        }
        for (id, c) in self.clauses.iter().enumerate() {
            self.watchers[c[0].code()].push(id as u32);
            self.watchers[c[1].code()].push(id as u32);
        }
        for l in &self.trail {
            self.reason[l.var()] = NO_REASON;
        }
    }

    fn pick_branch_var(&mut self) -> Option<usize> {
        while self.cursor < self.num_vars && self.value[self.cursor] != 0 {
            self.cursor += 1;
        }
        (self.cursor < self.num_vars).then_some(self.cursor)
    }
}

impl SatEngine for CdclSolver {
    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn solve(&mut self, assumptions: &[Lit]) -> bool {
        self.calls += 1;
        if self.unsat {
            return false;
        }
        self.backtrack(0);
        if self.clauses.len() - self.original > MAX_LEARNTS {
            self.reduce_learnts();
        }
        loop {
            if let Some(conflict) = self.propagate() {
                self.conflicts += 1;
                if self.decision_level() == 0 {
                    self.unsat = true;
                    return false;
                }
                let (learnt, level) = self.analyze(conflict);
                self.backtrack(level);
                self.learn(learnt);
                continue;
            }
            let level = self.decision_level();
            if level < assumptions.len() {
                let a = assumptions[level];
                match self.lit_value(a) {
                    1 => self.new_level(),
                    -1 => {
                        self.backtrack(0);
                        return false;
                    }
                    _ => {
                        self.new_level();
                        self.enqueue(a, NO_REASON);
                    }
                }
                continue;
            }
            match self.pick_branch_var() {
                Some(v) => {
                    self.new_level();
                    self.enqueue(Lit::new(v, self.phase[v]), NO_REASON);
                }
                None => {
                    self.model.clear();
                    self.model.extend(self.value.iter().map(|&v| v == 1));
                    self.backtrack(0);
                    return true;
                }
            }
        }
    }

    fn model(&self) -> &[bool] {
        &self.model
    }

    fn implied(&mut self, assumptions: &[Lit]) -> Option<Vec<Lit>> {
        if self.unsat {
            return None;
        }
        self.backtrack(0);
        for &a in assumptions {
            match self.lit_value(a) {
                1 => continue,
                -1 => {
                    self.backtrack(0);
                    return None;
                }
                _ => {
                    self.new_level();
                    self.enqueue(a, NO_REASON);
                    if self.propagate().is_some() {
                        self.backtrack(0);
                        return None;
                    }
                }
            }
        }
        let out = self.trail.clone();
        self.backtrack(0);
        Some(out)
    }

    fn set_phase(&mut self, var: usize, positive: bool) {
        self.phase[var] = positive;
    }

    fn solve_calls(&self) -> u64 {
        self.calls
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize, clauses: &[&[i64]]) -> FeatureModel {
        FeatureModel::new(
            (1..=n).map(|i| format!("x{i}")).collect(),
            clauses
                .iter()
                .map(|c| c.iter().map(|&l| Lit::from_dimacs(l)).collect())
                .collect(),
            0,
        )
        .unwrap()
    }

    fn brute_force(m: &FeatureModel, assumptions: &[Lit]) -> bool {
        let n = m.num_vars();
        (0u32..1 << n).any(|bits| {
            let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            assumptions.iter().all(|l| a[l.var()] == l.is_positive()) && m.satisfied_by(&a)
        })
    }

    #[test]
    fn pigeonhole_3_into_2_is_unsat() {
        // p_ij: pigeon i in hole j, var = 2*i + j + 1
        let mut cs: Vec<Vec<i64>> = (0..3).map(|i| vec![2 * i + 1, 2 * i + 2]).collect();
        for j in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    cs.push(vec![-(2 * a + j + 1), -(2 * b + j + 1)]);
                }
            }
        }
        let refs: Vec<&[i64]> = cs.iter().map(|c| c.as_slice()).collect();
        let m = model(6, &refs);
        let mut s = CdclSolver::new(&m);
        assert!(!s.solve(&[]));
        assert!(!s.solve(&[]));
    }

    #[test]
    fn assumptions_do_not_stick() {
        let m = model(3, &[&[1, 2], &[-1, 3]]);
        let mut s = CdclSolver::new(&m);
        assert!(!s.solve(&[Lit::neg(0), Lit::neg(1)]));
        assert!(s.solve(&[Lit::pos(0)]));
        assert!(s.model()[2]);
        assert!(s.solve(&[]));
        // prefer-false phases with ascending order
        assert_eq!(s.model(), &[false, true, false]);
        assert!(m.satisfied_by(s.model()));
    }

    #[test]
    fn implied_literals() {
        let m = model(3, &[&[-1, 2], &[-2, 3]]);
        let mut s = CdclSolver::new(&m);
        let imp = s.implied(&[Lit::pos(0)]).unwrap();
        assert_eq!(imp, vec![Lit::pos(0), Lit::pos(1), Lit::pos(2)]);
        assert_eq!(s.implied(&[Lit::pos(0), Lit::neg(2)]), None);
    }

    #[test]
    fn agrees_with_brute_force_on_random_3cnf() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(3..=10);
            let k = rng.gen_range(1..=(4 * n));
            let cs: Vec<Vec<i64>> = (0..k)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.gen_range(1..=n as i64);
                            if rng.gen_bool(0.5) { v } else { -v }
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<&[i64]> = cs.iter().map(|c| c.as_slice()).collect();
            let m = model(n, &refs);
            let mut s = CdclSolver::new(&m);
            for _ in 0..5 {
                let a: Vec<Lit> = (0..rng.gen_range(0..3))
                    .map(|_| Lit::new(rng.gen_range(0..n), rng.gen_bool(0.5)))
                    .collect();
                let expected = brute_force(&m, &a);
                assert_eq!(s.solve(&a), expected);
                if expected {
                    assert!(m.satisfied_by(s.model()));
                    assert!(a.iter().all(|l| s.model()[l.var()] == l.is_positive()));
                }
            }
        }
    }
}
