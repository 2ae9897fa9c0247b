//! Multilevel kernel summation in one dimension.
//!
//! Computes `phi(y_i) = sum_j g(y_i, x_j) m_j` with nested interpolation
//! bases. Sources and targets are organised in dyadic cluster trees. Every
//! cluster carries a Chebyshev rule; source moments
//! `sum_j m_j l_nu(x_j)` are formed at the leaves and transferred to parents
//! by re-interpolation, admissible blocks couple target and source
//! interpolation points through the kernel, and the target expansions are
//! pushed back down with the transposed transfers before being evaluated at
//! the targets. Blocks that are not admissible are summed directly.
//!
//! The oscillatory kernel `exp(i kappa |y - x|) / |y - x|` is handled with
//! two plane-wave directions `+kappa` and `-kappa`: moments and target
//! expansions are kept per direction, and a block uses the pair of
//! directions that demodulates the kernel on its side of the diagonal.
//!
//! Coincident source and target points do not interact.
//!
//! Operation counts: one kernel evaluation is 1, one complex multiply-add
//! is 1, wherever it occurs (near field, moments, transfers, coupling,
//! evaluation). Direct summation therefore costs `2 n_t n_s`.
//!
//! Parallelism: the upward and downward passes process the clusters of one
//! tree level in parallel, far-field coupling runs in parallel over target
//! clusters, and the near field over target leaves. Every accumulator is
//! written by exactly one task in a fixed order, so results do not depend on
//! the thread schedule.

use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::chebyshev::ChebyshevRule;
use crate::error::{Error, Result};
use crate::geometry::Interval;
use crate::oscillatory::plane_wave;

/// Trees stop splitting at this depth even if leaves are over capacity.
pub const MAX_TREE_DEPTH: usize = 48;

/// Largest instance for which [`SummationPlan::audit_coverage`] builds the
/// full pair table.
pub const AUDIT_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `1 / (y - x)`.
    Cauchy,
    /// `log |y - x|`.
    Log,
    /// `exp(i kappa |y - x|) / |y - x|`.
    Helmholtz { kappa: f64 },
}

impl Kernel {
    pub fn eval(&self, y: f64, x: f64) -> Complex64 {
        let d = y - x;
        if d == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match *self {
            Kernel::Cauchy => Complex64::new(1.0 / d, 0.0),
            Kernel::Log => Complex64::new(d.abs().ln(), 0.0),
            Kernel::Helmholtz { kappa } => Complex64::from_polar(1.0 / d.abs(), kappa * d.abs()),
        }
    }

    /// Plane-wave directions of the expansions.
    pub fn directions(&self) -> Vec<f64> {
        match *self {
            Kernel::Helmholtz { kappa } => vec![kappa, -kappa],
            _ => vec![0.0],
        }
    }

    /// `(target, source)` direction indices for a block whose target
    /// cluster lies right of (`true`) or left of the source cluster.
    fn block_directions(&self, target_right: bool) -> (usize, usize) {
        match self {
            Kernel::Helmholtz { .. } if target_right => (0, 1),
            Kernel::Helmholtz { .. } => (1, 0),
            _ => (0, 0),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Kernel::Cauchy => "cauchy".into(),
            Kernel::Log => "log".into(),
            Kernel::Helmholtz { kappa } => format!("helmholtz(kappa={kappa})"),
        }
    }
}

/// Interpolation order per tree depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSchedule {
    Constant(usize),
    /// `alpha + beta (D - depth)` for a tree of depth `D`.
    Variable { alpha: usize, beta: usize },
}

impl OrderSchedule {
    pub fn order(&self, depth: usize, tree_depth: usize) -> usize {
        match *self {
            OrderSchedule::Constant(m) => m,
            OrderSchedule::Variable { alpha, beta } => alpha + beta * (tree_depth - depth),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterNode {
    pub interval: Interval,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    /// Indices into the tree's sorted point list.
    pub range: Range<usize>,
    pub depth: usize,
    pub rule: ChebyshevRule,
}

impl ClusterNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_empty()
    }

    pub fn order(&self) -> usize {
        self.rule.order()
    }

    /// Interpolation points mapped to the cluster interval.
    pub fn interpolation_points(&self) -> Vec<f64> {
        self.rule.points().iter().map(|&t| self.interval.map(t)).collect()
    }

    /// `l_nu(x)` for all `nu`.
    pub fn basis(&self, x: f64) -> Vec<Complex64> {
        self.rule.lagrange_basis(self.interval.pullback(Complex64::new(x, 0.0)))
    }
}

/// Dyadic cluster tree over sorted points.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterTree {
    nodes: Vec<ClusterNode>,
    points: Vec<f64>,
    levels: Vec<Vec<usize>>,
    leaf_capacity: usize,
}

/// Splits `root` at midpoints until every leaf holds at most
/// `leaf_capacity` points. `points` must be sorted and inside `root`.
pub fn build_tree(points: &[f64], root: Interval, leaf_capacity: usize, orders: OrderSchedule) -> Result<ClusterTree> {
    if points.is_empty() {
        return Err(Error::domain("cannot build a cluster tree without points"));
    }
    if leaf_capacity == 0 {
        return Err(Error::domain("leaf capacity must be positive"));
    }
    if points.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::domain("points must be sorted ascending"));
    }
    if !root.contains(points[0]) || !root.contains(points[points.len() - 1]) {
        return Err(Error::domain("points must lie inside the root interval"));
    }
    if let OrderSchedule::Constant(0) | OrderSchedule::Variable { alpha: 0, .. } = orders {
        return Err(Error::domain("interpolation orders must be positive"));
    }

    struct Raw {
        interval: Interval,
        children: Vec<usize>,
        parent: Option<usize>,
        range: Range<usize>,
        depth: usize,
    }
    let mut raw = vec![Raw {
        interval: root,
        children: Vec::new(),
        parent: None,
        range: 0..points.len(),
        depth: 0,
    }];
    let mut stack = vec![0];
    while let Some(idx) = stack.pop() {
        let (interval, range, depth) = (raw[idx].interval, raw[idx].range.clone(), raw[idx].depth);
        if range.len() <= leaf_capacity || depth >= MAX_TREE_DEPTH {
            continue;
        }
        let mid = interval.midpoint();
        let split = range.start + points[range.clone()].partition_point(|&x| x < mid);
        let halves = [
            (Interval::new(interval.a(), mid)?, range.start..split),
            (Interval::new(mid, interval.b())?, split..range.end),
        ];
        for (child_interval, child_range) in halves {
            raw.push(Raw {
                interval: child_interval,
                children: Vec::new(),
                parent: Some(idx),
                range: child_range,
                depth: depth + 1,
            });
            let child = raw.len() - 1;
            raw[idx].children.push(child);
            stack.push(child);
        }
    }

    let tree_depth = raw.iter().map(|r| r.depth).max().unwrap_or(0);
    let mut levels = vec![Vec::new(); tree_depth + 1];
    let nodes = raw
        .into_iter()
        .enumerate()
        .map(|(idx, r)| {
            levels[r.depth].push(idx);
            ClusterNode {
                rule: ChebyshevRule::new(orders.order(r.depth, tree_depth)),
                interval: r.interval,
                children: r.children,
                parent: r.parent,
                range: r.range,
                depth: r.depth,
            }
        })
        .collect();
    Ok(ClusterTree {
        nodes,
        points: points.to_vec(),
        levels,
        leaf_capacity,
    })
}

impl ClusterTree {
    pub fn nodes(&self) -> &[ClusterNode] {
        &self.nodes
    }

    pub fn node(&self, idx: usize) -> &ClusterNode {
        &self.nodes[idx]
    }

    pub fn root(&self) -> &ClusterNode {
        &self.nodes[0]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Depth of the deepest leaf.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn leaf_capacity(&self) -> usize {
        self.leaf_capacity
    }

    /// Node indices by depth.
    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_leaf())
    }
}

/// Per-direction, per-node coefficient vectors.
pub type Expansions = Vec<Vec<Vec<Complex64>>>;

fn zero_expansions(tree: &ClusterTree, directions: usize) -> Expansions {
    let per_node: Vec<Vec<Complex64>> = tree
        .nodes
        .iter()
        .map(|n| vec![Complex64::new(0.0, 0.0); n.order() + 1])
        .collect();
    vec![per_node; directions]
}

/// `sum_j m_j exp(i c x_j) l_nu(x_j)` over the points of one cluster.
pub fn direct_moments(tree: &ClusterTree, masses: &[Complex64], node: usize, direction: f64) -> Vec<Complex64> {
    let n = tree.node(node);
    let mut out = vec![Complex64::new(0.0, 0.0); n.order() + 1];
    for j in n.range.clone() {
        let x = tree.points[j];
        let weight = masses[j] * plane_wave(direction, Complex64::new(x, 0.0));
        for (o, l) in out.iter_mut().zip(n.basis(x)) {
            *o += weight * l;
        }
    }
    out
}

/// Transfer vectors `l_{parent}(xi_{child,nu1})` for every child node `nu1`.
fn transfer_rows(tree: &ClusterTree, parent: usize, child: usize) -> Vec<Vec<Complex64>> {
    let p = tree.node(parent);
    tree.node(child)
        .interpolation_points()
        .into_iter()
        .map(|xi| p.basis(xi))
        .collect()
}

/// Moments of every cluster: leaves from their points, parents only from
/// their children by re-interpolation. Masses follow the tree's point order.
pub fn upward_pass(tree: &ClusterTree, masses: &[Complex64], directions: &[f64]) -> Result<(Expansions, u64)> {
    if masses.len() != tree.points.len() {
        return Err(Error::domain(format!(
            "{} masses for {} points",
            masses.len(),
            tree.points.len()
        )));
    }
    let mut moments = zero_expansions(tree, directions.len());
    let mut ops = 0_u64;
    for level in tree.levels.iter().rev() {
        let computed: Vec<(usize, Vec<Vec<Complex64>>, u64)> = level
            .par_iter()
            .map(|&idx| {
                let node = tree.node(idx);
                if node.is_leaf() {
                    let vecs = directions.iter().map(|&c| direct_moments(tree, masses, idx, c)).collect();
                    let cost = (directions.len() * node.len() * (node.order() + 1)) as u64;
                    return (idx, vecs, cost);
                }
                let mut vecs = vec![vec![Complex64::new(0.0, 0.0); node.order() + 1]; directions.len()];
                let mut cost = 0_u64;
                for &child in &node.children {
                    let rows = transfer_rows(tree, idx, child);
                    for (d, out) in vecs.iter_mut().enumerate() {
                        for (row, &x) in rows.iter().zip(&moments[d][child]) {
                            for (o, &l) in out.iter_mut().zip(row) {
                                *o += l * x;
                            }
                        }
                    }
                    cost += (directions.len() * rows.len() * (node.order() + 1)) as u64;
                }
                (idx, vecs, cost)
            })
            .collect();
        for (idx, vecs, cost) in computed {
            for (d, v) in vecs.into_iter().enumerate() {
                moments[d][idx] = v;
            }
            ops += cost;
        }
    }
    Ok((moments, ops))
}

/// Admissibility parameters of a [`SummationPlan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationConfig {
    pub eta: f64,
    pub leaf_capacity: usize,
    pub orders: OrderSchedule,
}

impl Default for SummationConfig {
    fn default() -> Self {
        Self {
            eta: 1.0,
            leaf_capacity: 16,
            orders: OrderSchedule::Constant(8),
        }
    }
}

impl SummationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::domain(format!("eta must be positive, got {}", self.eta)));
        }
        if self.leaf_capacity == 0 {
            return Err(Error::domain("leaf capacity must be positive"));
        }
        match self.orders {
            OrderSchedule::Constant(0) | OrderSchedule::Variable { alpha: 0, .. } => {
                Err(Error::domain("interpolation orders must be positive"))
            }
            _ => Ok(()),
        }
    }
}

fn interval_distance(a: &Interval, b: &Interval) -> f64 {
    (b.a() - a.b()).max(a.a() - b.b()).max(0.0)
}

/// Target and source trees with the block partition of their product.
#[derive(Debug, Clone, PartialEq)]
pub struct SummationPlan {
    pub targets: ClusterTree,
    pub sources: ClusterTree,
    /// Admissible `(target node, source node)` pairs.
    pub far: Vec<(usize, usize)>,
    /// Leaf pairs summed directly.
    pub near: Vec<(usize, usize)>,
    pub eta: f64,
}

impl SummationPlan {
    pub fn new(targets: ClusterTree, sources: ClusterTree, eta: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::domain(format!("eta must be positive, got {eta}")));
        }
        let mut far = Vec::new();
        let mut near = Vec::new();
        let mut stack = vec![(0_usize, 0_usize)];
        while let Some((t, s)) = stack.pop() {
            let (tn, sn) = (targets.node(t), sources.node(s));
            if tn.is_empty() || sn.is_empty() {
                continue;
            }
            let diam = tn.interval.length().max(sn.interval.length());
            if interval_distance(&tn.interval, &sn.interval) >= eta * diam {
                far.push((t, s));
                continue;
            }
            let split_target = match (tn.is_leaf(), sn.is_leaf()) {
                (true, true) => {
                    near.push((t, s));
                    continue;
                }
                (false, true) => true,
                (true, false) => false,
                (false, false) => tn.interval.length() >= sn.interval.length(),
            };
            if split_target {
                stack.extend(tn.children.iter().rev().map(|&c| (c, s)));
            } else {
                stack.extend(sn.children.iter().rev().map(|&c| (t, c)));
            }
        }
        far.sort_unstable();
        near.sort_unstable();
        Ok(Self {
            targets,
            sources,
            far,
            near,
            eta,
        })
    }

    /// Checks that every (target, source) pair lies in exactly one block and
    /// that every far block is admissible.
    pub fn audit_coverage(&self) -> Result<()> {
        let (nt, ns) = (self.targets.points.len(), self.sources.points.len());
        if nt * ns > AUDIT_LIMIT * AUDIT_LIMIT {
            return Err(Error::domain("instance too large for a coverage audit"));
        }
        let mut count = vec![0_u8; nt * ns];
        for &(t, s) in self.far.iter().chain(&self.near) {
            for i in self.targets.node(t).range.clone() {
                for j in self.sources.node(s).range.clone() {
                    count[i * ns + j] = count[i * ns + j].saturating_add(1);
                }
            }
        }
        if let Some(k) = count.iter().position(|&c| c != 1) {
            return Err(Error::Audit(format!(
                "pair (target {}, source {}) is covered {} times",
                k / ns,
                k % ns,
                count[k]
            )));
        }
        for &(t, s) in &self.far {
            let (a, b) = (&self.targets.node(t).interval, &self.sources.node(s).interval);
            if interval_distance(a, b) < self.eta * a.length().max(b.length()) {
                return Err(Error::Audit(format!("block ({t}, {s}) is not admissible")));
            }
        }
        Ok(())
    }

    fn far_by_target(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.targets.nodes.len()];
        for &(t, s) in &self.far {
            lists[t].push(s);
        }
        lists
    }

    fn near_by_target(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.targets.nodes.len()];
        for &(t, s) in &self.near {
            lists[t].push(s);
        }
        lists
    }
}

/// Couples source moments to target expansions for all admissible blocks.
/// Kernel values are demodulated with the block's direction pair.
pub fn evaluate_farfield(plan: &SummationPlan, moments: &Expansions, kernel: &Kernel) -> Result<(Expansions, u64)> {
    let directions = kernel.directions();
    let lists = plan.far_by_target();
    let results: Vec<Result<(Vec<Vec<Complex64>>, u64)>> = lists
        .par_iter()
        .enumerate()
        .map(|(t, sources)| {
            let tn = plan.targets.node(t);
            let mut acc = vec![vec![Complex64::new(0.0, 0.0); tn.order() + 1]; directions.len()];
            let mut cost = 0_u64;
            let etas = tn.interpolation_points();
            for &s in sources {
                let sn = plan.sources.node(s);
                let (dt, ds) = kernel.block_directions(tn.interval.midpoint() > sn.interval.midpoint());
                let (ct, cs) = (directions[dt], directions[ds]);
                let xis = sn.interpolation_points();
                let source_phase: Vec<Complex64> = xis.iter().map(|&x| plane_wave(-cs, Complex64::new(x, 0.0))).collect();
                for (mu, &y) in etas.iter().enumerate() {
                    let target_phase = plane_wave(-ct, Complex64::new(y, 0.0));
                    let mut sum = Complex64::new(0.0, 0.0);
                    for ((&x, &phase), &m) in xis.iter().zip(&source_phase).zip(&moments[ds][s]) {
                        let g = kernel.eval(y, x);
                        if !g.is_finite() || y == x {
                            return Err(Error::Audit(format!(
                                "kernel singular at ({y}, {x}) in admissible block ({t}, {s})"
                            )));
                        }
                        sum += g * phase * m;
                    }
                    acc[dt][mu] += target_phase * sum;
                }
                // Kernel evaluations plus multiply-adds.
                cost += 2 * (etas.len() * xis.len()) as u64;
            }
            Ok((acc, cost))
        })
        .collect();
    let mut expansions = zero_expansions(&plan.targets, directions.len());
    let mut ops = 0;
    for (t, r) in results.into_iter().enumerate() {
        let (acc, cost) = r?;
        for (d, v) in acc.into_iter().enumerate() {
            expansions[d][t] = v;
        }
        ops += cost;
    }
    Ok((expansions, ops))
}

/// Pushes target expansions from parents to children with the transposed
/// transfers.
pub fn downward_pass(tree: &ClusterTree, expansions: &mut Expansions) -> u64 {
    let mut ops = 0_u64;
    for level in tree.levels.iter().skip(1) {
        let updates: Vec<(usize, Vec<Vec<Complex64>>, u64)> = level
            .par_iter()
            .map(|&child| {
                let parent = tree.node(child).parent.expect("non-root node has a parent");
                let rows = transfer_rows(tree, parent, child);
                let vecs: Vec<Vec<Complex64>> = expansions
                    .iter()
                    .map(|per_node| {
                        rows.iter()
                            .zip(&per_node[child])
                            .map(|(row, &own)| own + row.iter().zip(&per_node[parent]).map(|(&l, &p)| l * p).sum::<Complex64>())
                            .collect()
                    })
                    .collect();
                let cost = (expansions.len() * rows.len() * (tree.node(parent).order() + 1)) as u64;
                (child, vecs, cost)
            })
            .collect();
        for (child, vecs, cost) in updates {
            for (d, v) in vecs.into_iter().enumerate() {
                expansions[d][child] = v;
            }
            ops += cost;
        }
    }
    ops
}

/// Result of [`summation`]: potentials in the caller's target order.
#[derive(Debug, Clone, PartialEq)]
pub struct SummationResult {
    pub potentials: Vec<Complex64>,
    pub op_count: u64,
    pub far_blocks: usize,
    pub near_blocks: usize,
    pub tree_depth: usize,
}

fn sorted_with_permutation(points: &[f64]) -> Result<(Vec<f64>, Vec<usize>)> {
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("points must be finite"));
    }
    let mut perm: Vec<usize> = (0..points.len()).collect();
    perm.sort_by(|&a, &b| points[a].total_cmp(&points[b]));
    Ok((perm.iter().map(|&i| points[i]).collect(), perm))
}

/// Common root interval of all points; degenerate sets get unit length.
fn bounding_interval(sources: &[f64], targets: &[f64]) -> Result<Interval> {
    let all = sources.iter().chain(targets);
    let lo = all.clone().copied().fold(f64::INFINITY, f64::min);
    let hi = all.copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        Interval::new(lo, hi)
    } else {
        Interval::new(lo - 0.5, lo + 0.5)
    }
}

/// Evaluates `phi(y_i) = sum_j g(y_i, x_j) m_j` with the multilevel scheme.
pub fn summation(
    sources: &[f64],
    masses: &[Complex64],
    targets: &[f64],
    kernel: &Kernel,
    config: &SummationConfig,
) -> Result<SummationResult> {
    config.validate()?;
    if sources.len() != masses.len() {
        return Err(Error::domain(format!("{} masses for {} sources", masses.len(), sources.len())));
    }
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::domain("sources and targets must be non-empty"));
    }
    let root = bounding_interval(sources, targets)?;
    let (sorted_sources, source_perm) = sorted_with_permutation(sources)?;
    let (sorted_targets, target_perm) = sorted_with_permutation(targets)?;
    let sorted_masses: Vec<Complex64> = source_perm.iter().map(|&j| masses[j]).collect();
    let source_tree = build_tree(&sorted_sources, root, config.leaf_capacity, config.orders)?;
    let target_tree = build_tree(&sorted_targets, root, config.leaf_capacity, config.orders)?;
    let plan = SummationPlan::new(target_tree, source_tree, config.eta)?;
    let (sorted, op_count) = execute(&plan, &sorted_masses, kernel)?;
    let mut potentials = vec![Complex64::new(0.0, 0.0); targets.len()];
    for (k, &i) in target_perm.iter().enumerate() {
        potentials[i] = sorted[k];
    }
    Ok(SummationResult {
        potentials,
        op_count,
        far_blocks: plan.far.len(),
        near_blocks: plan.near.len(),
        tree_depth: plan.targets.depth().max(plan.sources.depth()),
    })
}

/// Runs a prepared plan. Masses and potentials follow the trees' point order.
pub fn execute(plan: &SummationPlan, masses: &[Complex64], kernel: &Kernel) -> Result<(Vec<Complex64>, u64)> {
    let directions = kernel.directions();
    let (moments, up_ops) = upward_pass(&plan.sources, masses, &directions)?;
    let (mut expansions, far_ops) = evaluate_farfield(plan, &moments, kernel)?;
    let down_ops = downward_pass(&plan.targets, &mut expansions);

    let targets = &plan.targets;
    let near = plan.near_by_target();
    let leaves: Vec<usize> = targets.leaves().collect();
    let per_leaf: Vec<(usize, Vec<Complex64>, u64)> = leaves
        .par_iter()
        .map(|&t| {
            let tn = targets.node(t);
            let mut cost = 0_u64;
            let values = tn
                .range
                .clone()
                .map(|i| {
                    let y = targets.points[i];
                    let basis = tn.basis(y);
                    let mut phi = Complex64::new(0.0, 0.0);
                    for (d, &c) in directions.iter().enumerate() {
                        let local: Complex64 = basis.iter().zip(&expansions[d][t]).map(|(&l, &e)| l * e).sum();
                        phi += plane_wave(c, Complex64::new(y, 0.0)) * local;
                    }
                    for &s in &near[t] {
                        for j in plan.sources.node(s).range.clone() {
                            phi += kernel.eval(y, plan.sources.points[j]) * masses[j];
                        }
                    }
                    phi
                })
                .collect();
            cost += (directions.len() * tn.len() * (tn.order() + 1)) as u64;
            for &s in &near[t] {
                cost += 2 * (tn.len() * plan.sources.node(s).len()) as u64;
            }
            (t, values, cost)
        })
        .collect();

    let mut potentials = vec![Complex64::new(0.0, 0.0); targets.points.len()];
    let mut ops = up_ops + far_ops + down_ops;
    for (t, values, cost) in per_leaf {
        potentials[targets.node(t).range.clone()].copy_from_slice(&values);
        ops += cost;
    }
    Ok((potentials, ops))
}

/// `O(n_t n_s)` reference summation and its operation count `2 n_t n_s`.
pub fn direct_summation(sources: &[f64], masses: &[Complex64], targets: &[f64], kernel: &Kernel) -> Result<(Vec<Complex64>, u64)> {
    if sources.len() != masses.len() {
        return Err(Error::domain(format!("{} masses for {} sources", masses.len(), sources.len())));
    }
    let potentials = targets
        .par_iter()
        .map(|&y| sources.iter().zip(masses).map(|(&x, &m)| kernel.eval(y, x) * m).sum())
        .collect();
    Ok((potentials, 2 * (sources.len() * targets.len()) as u64))
}

/// `max |approx - exact| / max |exact|`.
pub fn relative_error(approx: &[Complex64], exact: &[Complex64]) -> f64 {
    let diff = approx.iter().zip(exact).map(|(a, e)| (a - e).norm()).fold(0.0, f64::max);
    let scale = exact.iter().map(|e| e.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Sources at `(j + 1/4)/n` and targets at `(i + 3/4)/n` on `[0, 1]`.
pub fn interleaved_points(n: usize) -> (Vec<f64>, Vec<f64>) {
    let sources = (0..n).map(|j| (j as f64 + 0.25) / n as f64).collect();
    let targets = (0..n).map(|i| (i as f64 + 0.75) / n as f64).collect();
    (sources, targets)
}
