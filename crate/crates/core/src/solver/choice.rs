//! Exact maximum-weight selection of at most one candidate assignment per
//! group (beam), where candidates of linked groups must not collide under
//! the intra/inter overlap rules. This is the shape of the iterative
//! optimizer's subproblem.
//!
//! Depth-first search over groups with candidates tried in descending
//! weight. The bound adds, for every remaining group, its best candidate
//! compatible with the choices already made.

use crate::error::{Error, Result};
use crate::model::{pair_conflict, Assignment};

#[derive(Debug, Clone, PartialEq)]
struct Group {
    required: bool,
    options: Vec<(Assignment, f64)>,
    /// Candidate indices by descending weight, ties by insertion order.
    order: Vec<usize>,
    /// Linked groups with their (intra, inter) restriction flags.
    links: Vec<(usize, bool, bool)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceProblem {
    groups: Vec<Group>,
    n_p: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceSolution {
    /// Per group, the index of the chosen candidate within the group.
    pub selection: Vec<Option<usize>>,
    pub objective: f64,
    pub nodes: u64,
    /// False when the node limit stopped the search early.
    pub proven: bool,
}

impl ChoiceProblem {
    pub fn new(n_p: u32) -> Self {
        ChoiceProblem { groups: Vec::new(), n_p }
    }

    /// Adds a group. A required group must select exactly one candidate.
    pub fn add_group(&mut self, required: bool) -> usize {
        self.groups.push(Group { required, options: Vec::new(), order: Vec::new(), links: Vec::new() });
        self.groups.len() - 1
    }

    /// Adds a candidate to a group and returns its index within the group.
    pub fn add_option(&mut self, group: usize, assignment: Assignment, weight: f64) -> usize {
        let g = &mut self.groups[group];
        g.options.push((assignment, weight));
        let idx = g.options.len() - 1;
        let pos = g.order.partition_point(|&o| g.options[o].1 >= weight);
        g.order.insert(pos, idx);
        idx
    }

    /// Declares a restriction between two groups.
    pub fn link(&mut self, a: usize, b: usize, intra: bool, inter: bool) {
        if a == b || !(intra || inter) {
            return;
        }
        self.groups[a].links.push((b, intra, inter));
        self.groups[b].links.push((a, intra, inter));
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn options(&self, group: usize) -> &[(Assignment, f64)] {
        &self.groups[group].options
    }

    pub fn is_required(&self, group: usize) -> bool {
        self.groups[group].required
    }

    /// Whether candidate `u` of group `a` collides with candidate `v` of
    /// group `b`.
    pub fn collides(&self, a: usize, u: usize, b: usize, v: usize) -> bool {
        self.groups[a].links.iter().any(|&(g, intra, inter)| {
            if g != b {
                return false;
            }
            let (x, y) =
                pair_conflict(&self.groups[a].options[u].0, &self.groups[b].options[v].0, intra, inter, self.n_p);
            x || y
        })
    }

    /// Objective of a selection, or `None` if it is infeasible.
    pub fn evaluate(&self, selection: &[Option<usize>]) -> Option<f64> {
        if selection.len() != self.groups.len() {
            return None;
        }
        let mut total = 0.0;
        for (a, (g, sel)) in self.groups.iter().zip(selection).enumerate() {
            match sel {
                Some(u) => {
                    total += g.options.get(*u)?.1;
                    for &(b, _, _) in &g.links {
                        if let Some(v) = selection[b] {
                            if self.collides(a, *u, b, v) {
                                return None;
                            }
                        }
                    }
                }
                None if g.required => return None,
                None => {}
            }
        }
        Some(total)
    }

    /// Groups split into connected components of the link graph, each in
    /// ascending order, components ordered by their first group.
    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.groups.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut i = 0;
            while i < comp.len() {
                for &(h, _, _) in &self.groups[comp[i]].links {
                    if !seen[h] {
                        seen[h] = true;
                        comp.push(h);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Finds a maximum-weight selection. `start` seeds the incumbent and must
    /// be feasible; `max_nodes = 0` means unlimited. Groups that share no
    /// link are solved independently and the node limit applies to each such
    /// component. Returns an error when no feasible selection exists.
    pub fn solve(&self, start: Option<&[Option<usize>]>, max_nodes: u64) -> Result<ChoiceSolution> {
        if let Some(s) = start {
            self.evaluate(s).ok_or_else(|| Error::Configuration("starting selection is infeasible".into()))?;
        }
        let mut selection = vec![None; self.groups.len()];
        let mut objective = 0.0;
        let mut nodes = 0;
        let mut proven = true;
        for comp in self.components() {
            // Most linked groups first.
            let mut order = comp.clone();
            order.sort_by_key(|&g| (std::cmp::Reverse(self.groups[g].links.len()), g));
            let best = start.map(|s| {
                let mut sel = vec![None; self.groups.len()];
                let mut value = 0.0;
                for &g in &comp {
                    sel[g] = s[g];
                    value += s[g].map_or(0.0, |u| self.groups[g].options[u].1);
                }
                (value, sel)
            });
            let mut search = Search {
                problem: self,
                order,
                current: vec![None; self.groups.len()],
                picks: Vec::new(),
                best,
                nodes: 0,
                max_nodes,
                stopped: false,
            };
            search.run(0, 0.0);
            nodes += search.nodes;
            proven &= !search.stopped;
            let Some((value, sel)) = search.best else {
                return Err(Error::Configuration("no feasible selection".into()));
            };
            objective += value;
            for g in comp {
                selection[g] = sel[g];
            }
        }
        Ok(ChoiceSolution { selection, objective, nodes, proven })
    }
}

const TOL: f64 = 1e-9;

struct Search<'p> {
    problem: &'p ChoiceProblem,
    /// Groups of the component in branching order.
    order: Vec<usize>,
    current: Vec<Option<usize>>,
    /// Scratch: per remaining group, its best compatible candidate.
    picks: Vec<(usize, Option<usize>)>,
    best: Option<(f64, Vec<Option<usize>>)>,
    nodes: u64,
    max_nodes: u64,
    stopped: bool,
}

impl Search<'_> {
    fn fits(&self, g: usize, u: usize) -> bool {
        let group = &self.problem.groups[g];
        let a = &group.options[u].0;
        group.links.iter().all(|&(h, intra, inter)| match self.current[h] {
            Some(v) => {
                let (x, y) = pair_conflict(a, &self.problem.groups[h].options[v].0, intra, inter, self.problem.n_p);
                !(x || y)
            }
            None => true,
        })
    }

    /// Upper bound on what the groups at positions `k..` can add, with the
    /// per-group picks left in `self.picks`. `None` if a required group has
    /// no compatible candidate left.
    fn bound(&mut self, k: usize) -> Option<f64> {
        let mut total = 0.0;
        self.picks.clear();
        for &g in &self.order[k..] {
            let group = &self.problem.groups[g];
            let pick = group.order.iter().copied().find(|&u| self.fits(g, u));
            match pick {
                Some(u) => {
                    let w = group.options[u].1;
                    if group.required || w > 0.0 {
                        total += w;
                        self.picks.push((g, Some(u)));
                    } else {
                        self.picks.push((g, None));
                    }
                }
                None if group.required => return None,
                None => self.picks.push((g, None)),
            }
        }
        Some(total)
    }

    /// Position (within `picks`) of the first group whose pick collides with
    /// a later pick, or `None` when the picks are pairwise compatible.
    fn first_clash(&self) -> Option<usize> {
        let p = self.problem;
        for (i, &(g, u)) in self.picks.iter().enumerate() {
            let Some(u) = u else { continue };
            for &(h, v) in &self.picks[i + 1..] {
                let Some(v) = v else { continue };
                if p.collides(g, u, h, v) {
                    return Some(i);
                }
            }
        }
        None
    }

    fn run(&mut self, k: usize, acc: f64) {
        self.nodes += 1;
        if self.max_nodes > 0 && self.nodes > self.max_nodes {
            self.stopped = true;
            return;
        }
        let Some(bound) = self.bound(k) else { return };
        if let Some((best, _)) = &self.best {
            if acc + bound <= best + TOL {
                return;
            }
        }
        // Branch on a group whose pick is contested; if none is, the bound
        // is reached by the picks themselves.
        let Some(clash) = self.first_clash() else {
            let mut sel = self.current.clone();
            for &(g, u) in &self.picks {
                sel[g] = u;
            }
            self.best = Some((acc + bound, sel));
            return;
        };
        self.order.swap(k, k + clash);
        let g = self.order[k];
        let group = &self.problem.groups[g];
        for &u in &group.order {
            if !self.fits(g, u) {
                continue;
            }
            self.current[g] = Some(u);
            self.run(k + 1, acc + group.options[u].1);
            self.current[g] = None;
            if self.stopped {
                break;
            }
        }
        if !group.required && !self.stopped {
            self.run(k + 1, acc);
        }
        self.order.swap(k, k + clash);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn picks_best_compatible_pair() {
        let mut p = ChoiceProblem::new(1);
        let a = p.add_group(true);
        let b = p.add_group(true);
        p.link(a, b, true, false);
        p.add_option(a, Assignment::new(1, 1, 3), 5.0);
        p.add_option(a, Assignment::new(1, 1, 1), 3.0);
        p.add_option(b, Assignment::new(2, 1, 2), 4.0);
        p.add_option(b, Assignment::new(1, 1, 1), 1.0);
        let s = p.solve(None, 0).unwrap();
        assert_eq!(s.objective, 7.0);
        assert_eq!(s.selection, vec![Some(1), Some(0)]);
        assert!(s.proven);
        assert!(p.collides(a, 0, b, 0));
    }

    #[test]
    fn optional_groups_may_stay_empty() {
        let mut p = ChoiceProblem::new(1);
        let a = p.add_group(false);
        p.add_option(a, Assignment::new(1, 1, 1), -2.0);
        let s = p.solve(None, 0).unwrap();
        assert_eq!(s.selection, vec![None]);
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn required_group_without_options_is_infeasible() {
        let mut p = ChoiceProblem::new(1);
        p.add_group(true);
        assert!(p.solve(None, 0).is_err());
    }

    #[test]
    fn start_is_kept_on_ties() {
        let mut p = ChoiceProblem::new(1);
        let a = p.add_group(true);
        p.add_option(a, Assignment::new(1, 1, 2), 2.0);
        p.add_option(a, Assignment::new(2, 1, 2), 2.0);
        let s = p.solve(Some(&[Some(1)]), 0).unwrap();
        assert_eq!(s.selection, vec![Some(1)]);
        assert!(p.solve(Some(&[None]), 0).is_err());
    }

    #[test]
    fn matches_enumeration_on_random_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let mut p = ChoiceProblem::new(2);
            let n_groups = rng.gen_range(1..=4);
            for _ in 0..n_groups {
                let g = p.add_group(rng.gen_bool(0.5));
                for _ in 0..rng.gen_range(0..=3) {
                    let f = rng.gen_range(1..=4);
                    let a = Assignment::new(f, rng.gen_range(1..=2), rng.gen_range(1..=5 - f));
                    p.add_option(g, a, rng.gen_range(-3..=6) as f64);
                }
            }
            for a in 0..n_groups {
                for b in a + 1..n_groups {
                    p.link(a, b, rng.gen_bool(0.5), rng.gen_bool(0.3));
                }
            }
            let sizes: Vec<usize> = (0..n_groups).map(|g| p.options(g).len() + 1).collect();
            let total: usize = sizes.iter().product();
            let mut best: Option<f64> = None;
            for mut code in 0..total {
                let sel: Vec<Option<usize>> = sizes
                    .iter()
                    .map(|&s| {
                        let c = code % s;
                        code /= s;
                        c.checked_sub(1)
                    })
                    .collect();
                if let Some(v) = p.evaluate(&sel) {
                    best = Some(best.map_or(v, |b: f64| b.max(v)));
                }
            }
            match (best, p.solve(None, 0)) {
                (Some(b), Ok(s)) => {
                    assert_eq!(s.objective, b);
                    assert_eq!(p.evaluate(&s.selection), Some(b));
                }
                (None, Err(_)) => {}
                (b, s) => panic!("enumeration {b:?} vs solver {s:?}"),
            }
        }
    }
}
