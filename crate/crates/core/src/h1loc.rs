//! Significant clusters and H1 generator localisation by vertex removal.
//!
//! The workflow is:
//!
//! 1. walk the components tree in birth order and score each cluster by the
//!    H1 persistence of its own points ([`first_significant_cluster`]);
//! 2. list the cycles of the cluster's 1-skeleton that were not present in
//!    the previous cluster's skeleton ([`new_cycles`]);
//! 3. delete the vertices of each cycle in turn and check whether the target
//!    H1 interval survives ([`localize_generator`]).
//!
//! All point sets are index lists into one [`DistanceMatrix`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::comptree::ComponentsTree;
use crate::error::{Error, Result};
use crate::filtration::{build_filtration, DistanceMatrix, DEFAULT_SIMPLEX_LIMIT};
use crate::persistence::{barcode_of, Barcode, Interval};

/// Default longest cycle reported by [`new_cycles`].
pub const DEFAULT_MAX_CYCLE_LEN: usize = 6;

/// Default cap on enumerated cycles.
pub const DEFAULT_CYCLE_CAP: usize = 100_000;

/// H1 barcode of the sub-cloud `points`, built up to triangles and cut off at
/// `cutoff`.
pub fn h1_barcode(dm: &DistanceMatrix, points: &[usize], cutoff: f64) -> Result<Barcode> {
    let sub = dm.restrict(points);
    let fc = build_filtration(&sub, 2, cutoff, DEFAULT_SIMPLEX_LIMIT)?;
    Ok(barcode_of(&fc)?.truncated(1))
}

/// Sum of H1 interval lengths, intervals alive at `cutoff` counted up to it.
fn h1_total(bc: &Barcode, cutoff: f64) -> f64 {
    bc.clipped_total(1, cutoff)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SignificanceScore {
    pub cluster: usize,
    /// Radius at which the cluster's persistence was cut off.
    pub cutoff: f64,
    pub h1_total_persistence: f64,
    /// Longest H1 interval (clipped at the cutoff), if any.
    pub longest: Option<Interval>,
}

/// Scale up to which a cluster's own topology is examined: its parent's
/// birth, or the enclosing radius of its points for the root.
pub fn cluster_cutoff(tree: &ComponentsTree, dm: &DistanceMatrix, id: usize) -> f64 {
    tree.parent_birth(id)
        .unwrap_or_else(|| dm.restrict(&tree.cluster(id).members).enclosing_radius())
}

pub fn cluster_score(tree: &ComponentsTree, dm: &DistanceMatrix, id: usize) -> Result<SignificanceScore> {
    let cutoff = cluster_cutoff(tree, dm, id);
    let members = &tree.cluster(id).members;
    if members.len() < 4 {
        return Ok(SignificanceScore {
            cluster: id,
            cutoff,
            h1_total_persistence: 0.0,
            longest: None,
        });
    }
    let bc = h1_barcode(dm, members, cutoff)?;
    let longest = bc
        .dim(1)
        .iter()
        .copied()
        .max_by(|a, b| a.clipped_length(cutoff).total_cmp(&b.clipped_length(cutoff)).then(b.birth.total_cmp(&a.birth)));
    Ok(SignificanceScore {
        cluster: id,
        cutoff,
        h1_total_persistence: h1_total(&bc, cutoff),
        longest,
    })
}

/// Cluster ids in order of birth (ties by id).
fn birth_order(tree: &ComponentsTree) -> Vec<usize> {
    let mut ids: Vec<usize> = tree.clusters().iter().map(|c| c.id).collect();
    ids.sort_by(|&a, &b| {
        tree.cluster(a)
            .birth
            .total_cmp(&tree.cluster(b).birth)
            .then(a.cmp(&b))
    });
    ids
}

/// First cluster, in birth order, with an H1 interval of (clipped) length at
/// least `min_persistence`. `Ok(None)` when there is none.
pub fn first_significant_cluster(
    tree: &ComponentsTree,
    dm: &DistanceMatrix,
    min_persistence: f64,
) -> Result<Option<usize>> {
    if !(min_persistence >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "min_persistence {min_persistence} must be nonnegative"
        )));
    }
    if min_persistence.is_infinite() {
        return Ok(None);
    }
    for id in birth_order(tree) {
        let score = cluster_score(tree, dm, id)?;
        if let Some(iv) = score.longest {
            if iv.clipped_length(score.cutoff) >= min_persistence {
                return Ok(Some(id));
            }
        }
    }
    Ok(None)
}

/// A closed walk without repeated vertices, or a user-chosen vertex group.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CandidateCycle {
    /// Cycle order for cycles; ascending for groups.
    pub vertices: Vec<usize>,
    /// Longest edge of the cycle, or the diameter of a group.
    pub max_edge: f64,
    pub is_group: bool,
}

impl CandidateCycle {
    /// A removal group instead of a cycle.
    pub fn group(dm: &DistanceMatrix, vertices: &[usize]) -> Self {
        let set: BTreeSet<usize> = vertices.iter().copied().collect();
        let vertices: Vec<usize> = set.into_iter().collect();
        let mut max_edge: f64 = 0.0;
        for (k, &a) in vertices.iter().enumerate() {
            for &b in &vertices[k + 1..] {
                max_edge = max_edge.max(dm.get(a, b));
            }
        }
        Self {
            vertices,
            max_edge,
            is_group: true,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn members(&self) -> Vec<usize> {
        let mut m = self.vertices.clone();
        m.sort_unstable();
        m
    }

    fn is_clique_at(&self, dm: &DistanceMatrix, radius: f64) -> bool {
        let v = &self.vertices;
        (0..v.len()).all(|i| (i + 1..v.len()).all(|j| dm.get(v[i], v[j]) <= radius))
    }
}

/// Parameters of [`new_cycles`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleQuery {
    /// Radius of the new 1-skeleton.
    pub radius: f64,
    /// Radius of the previous skeleton; `None` or anything above `radius`
    /// means `radius`.
    pub prev_radius: Option<f64>,
    pub max_len: usize,
    pub cap: usize,
}

impl CycleQuery {
    pub fn at(radius: f64) -> Self {
        Self {
            radius,
            prev_radius: None,
            max_len: DEFAULT_MAX_CYCLE_LEN,
            cap: DEFAULT_CYCLE_CAP,
        }
    }
}

/// Simple cycles of length `3..=max_len` in the skeleton of `new_points` at
/// `radius` that use at least one edge missing from the skeleton of
/// `prev_points` at the previous radius.
///
/// Each cycle starts at its smallest vertex and runs in the direction whose
/// second vertex is smaller. Output is sorted by length, then member set,
/// then sequence.
pub fn new_cycles(
    prev_points: &[usize],
    new_points: &[usize],
    dm: &DistanceMatrix,
    query: &CycleQuery,
) -> Result<Vec<CandidateCycle>> {
    let radius = query.radius;
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }
    if query.max_len < 3 {
        return Err(Error::InvalidArgument(format!(
            "max_len {} must be at least 3",
            query.max_len
        )));
    }
    let mut verts: Vec<usize> = new_points.to_vec();
    verts.sort_unstable();
    verts.dedup();
    let prev: BTreeSet<usize> = prev_points.iter().copied().collect();
    if let Some(p) = prev.iter().find(|p| verts.binary_search(p).is_err()) {
        return Err(Error::InvalidArgument(format!(
            "previous point {p} is not among the new points"
        )));
    }
    let prev_radius = query.prev_radius.map_or(radius, |r| r.min(radius));
    let old_flag: Vec<bool> = verts.iter().map(|v| prev.contains(v)).collect();

    let m = verts.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for a in 0..m {
        for b in a + 1..m {
            if dm.get(verts[a], verts[b]) <= radius {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let is_new = |a: usize, b: usize| -> bool {
        !(old_flag[a] && old_flag[b] && dm.get(verts[a], verts[b]) <= prev_radius)
    };

    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut path: Vec<usize> = Vec::with_capacity(query.max_len);
    let mut on_path = vec![false; m];
    // Explicit DFS: frames of (vertex, next neighbour slot).
    for start in 0..m {
        path.clear();
        path.push(start);
        on_path[start] = true;
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(&mut (v, ref mut slot)) = stack.last_mut() {
            if *slot >= adj[v].len() {
                stack.pop();
                on_path[v] = false;
                path.pop();
                continue;
            }
            let w = adj[v][*slot];
            *slot += 1;
            if w == start && path.len() >= 3 && path[1] < v {
                if path.windows(2).any(|e| is_new(e[0], e[1])) || is_new(v, start) {
                    if found.len() >= query.cap {
                        return Err(Error::ResourceLimit {
                            what: "candidate cycles",
                            limit: query.cap,
                            count: found.len() + 1,
                        });
                    }
                    found.push(path.clone());
                }
                continue;
            }
            if w > start && !on_path[w] && path.len() < query.max_len {
                on_path[w] = true;
                path.push(w);
                stack.push((w, 0));
            }
        }
    }

    let mut cycles: Vec<CandidateCycle> = found
        .into_iter()
        .map(|c| {
            let k = c.len();
            let max_edge = (0..k)
                .map(|i| dm.get(verts[c[i]], verts[c[(i + 1) % k]]))
                .fold(0.0, f64::max);
            CandidateCycle {
                vertices: c.into_iter().map(|i| verts[i]).collect(),
                max_edge,
                is_group: false,
            }
        })
        .collect();
    cycles.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.members().cmp(&b.members()))
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    Ok(cycles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    /// Removing the cycle's vertices kills the target interval.
    Generator,
    /// The target survives unchanged (or was never present).
    Boundary,
    /// The target survives shifted, or several disjoint removals kill it.
    HomologousAmbiguity,
    /// Nothing left to compute after removal.
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Generator => "generator",
            Verdict::Boundary => "boundary",
            Verdict::HomologousAmbiguity => "homologous_ambiguity",
            Verdict::Skipped => "skipped",
        }
    }
}

/// How the H1 barcode changed under a removal.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BarcodeDelta {
    pub total_before: f64,
    pub total_after: f64,
    /// Intervals present before with no counterpart after (within tolerance).
    pub vanished: Vec<Interval>,
    /// Intervals present after with no counterpart before.
    pub appeared: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RemovalVerdict {
    pub cycle: CandidateCycle,
    pub verdict: Verdict,
    pub delta: BarcodeDelta,
    pub note: Option<String>,
}

/// Settings for [`localize_generator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizeParams {
    /// Matching tolerance on births and deaths, normally half a grid step.
    pub tolerance: f64,
    /// Persistence cutoff shared by all recomputations; `None` means the
    /// enclosing radius of the full point set.
    pub cutoff: Option<f64>,
}

fn ends_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        a == b
    } else {
        (a - b).abs() <= tol
    }
}

fn matches(a: &Interval, b: &Interval, tol: f64) -> bool {
    ends_close(a.birth, b.birth, tol) && ends_close(a.death, b.death, tol)
}

fn overlaps(a: &Interval, b: &Interval) -> bool {
    a.birth < b.death && b.birth < a.death
}

/// Intervals of `from` left over after greedily pairing each with a
/// matching interval of `against`.
fn unmatched(from: &[Interval], against: &[Interval], tol: f64) -> Vec<Interval> {
    let mut used = vec![false; against.len()];
    let mut out = Vec::new();
    for iv in from {
        match (0..against.len()).find(|&j| !used[j] && matches(iv, &against[j], tol)) {
            Some(j) => used[j] = true,
            None => out.push(*iv),
        }
    }
    out
}

enum TargetState {
    Unchanged,
    Shifted,
    Gone,
}

fn target_state(target: &Interval, after: &[Interval], cutoff: f64, tol: f64) -> TargetState {
    if after.iter().any(|iv| matches(iv, target, tol)) {
        return TargetState::Unchanged;
    }
    let half = target.clipped_length(cutoff) / 2.0;
    let shifted = after.iter().any(|iv| {
        overlaps(iv, target)
            && (ends_close(iv.birth, target.birth, tol)
                || ends_close(iv.death, target.death, tol)
                || iv.clipped_length(cutoff) >= half)
    });
    if shifted {
        TargetState::Shifted
    } else {
        TargetState::Gone
    }
}

struct Outcome {
    verdict: Verdict,
    delta: BarcodeDelta,
    note: Option<String>,
}

fn evaluate(
    points: &[usize],
    dm: &DistanceMatrix,
    target: &Interval,
    before: &Barcode,
    present_before: bool,
    cycle: &CandidateCycle,
    cutoff: f64,
    tol: f64,
) -> Result<Outcome> {
    let removed: BTreeSet<usize> = cycle.vertices.iter().copied().collect();
    let rest: Vec<usize> = points.iter().copied().filter(|p| !removed.contains(p)).collect();
    let total_before = h1_total(before, cutoff);
    if rest.is_empty() {
        return Ok(Outcome {
            verdict: Verdict::Skipped,
            delta: BarcodeDelta {
                total_before,
                total_after: 0.0,
                vanished: before.dim(1).to_vec(),
                appeared: Vec::new(),
            },
            note: Some("removal leaves no points".into()),
        });
    }
    let after = h1_barcode(dm, &rest, cutoff)?;
    let delta = BarcodeDelta {
        total_before,
        total_after: h1_total(&after, cutoff),
        vanished: unmatched(before.dim(1), after.dim(1), tol),
        appeared: unmatched(after.dim(1), before.dim(1), tol),
    };
    if !present_before {
        return Ok(Outcome {
            verdict: Verdict::Boundary,
            delta,
            note: Some("target interval absent before removal".into()),
        });
    }
    let state = target_state(target, after.dim(1), cutoff, tol);
    let (verdict, note) = if !cycle.is_group && cycle.is_clique_at(dm, target.birth) {
        (Verdict::Boundary, Some(String::from("cycle spans a clique at the target birth")))
    } else {
        match state {
            TargetState::Unchanged => (Verdict::Boundary, None),
            TargetState::Shifted => (
                Verdict::HomologousAmbiguity,
                Some(String::from("target persists with shifted endpoints")),
            ),
            TargetState::Gone if delta.total_after < delta.total_before => (Verdict::Generator, None),
            TargetState::Gone => (
                Verdict::HomologousAmbiguity,
                Some(String::from("target vanished but total H1 persistence did not drop")),
            ),
        }
    };
    Ok(Outcome { verdict, delta, note })
}

#[cfg(feature = "std")]
fn evaluate_all(
    points: &[usize],
    dm: &DistanceMatrix,
    target: &Interval,
    before: &Barcode,
    present_before: bool,
    cycles: &[CandidateCycle],
    cutoff: f64,
    tol: f64,
) -> Result<Vec<Outcome>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cycles.len().max(1));
    let chunk = cycles.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = cycles
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|c| evaluate(points, dm, target, before, present_before, c, cutoff, tol))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(cycles.len());
        for h in handles {
            out.extend(h.join().expect("removal worker panicked")?);
        }
        Ok(out)
    })
}

#[cfg(not(feature = "std"))]
fn evaluate_all(
    points: &[usize],
    dm: &DistanceMatrix,
    target: &Interval,
    before: &Barcode,
    present_before: bool,
    cycles: &[CandidateCycle],
    cutoff: f64,
    tol: f64,
) -> Result<Vec<Outcome>> {
    cycles
        .iter()
        .map(|c| evaluate(points, dm, target, before, present_before, c, cutoff, tol))
        .collect()
}

/// Removes each candidate's vertices from `points` in turn and classifies
/// the effect on the H1 interval `target`.
pub fn localize_generator(
    points: &[usize],
    dm: &DistanceMatrix,
    target: Interval,
    cycles: &[CandidateCycle],
    params: &LocalizeParams,
) -> Result<Vec<RemovalVerdict>> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    if !(params.tolerance >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {} must be nonnegative",
            params.tolerance
        )));
    }
    let cutoff = params
        .cutoff
        .unwrap_or_else(|| dm.restrict(points).enclosing_radius());
    let tol = params.tolerance;
    let before = h1_barcode(dm, points, cutoff)?;
    let present_before = before.dim(1).iter().any(|iv| matches(iv, &target, tol));

    let outcomes = evaluate_all(points, dm, &target, &before, present_before, cycles, cutoff, tol)?;

    // A kill by one of several vertex-disjoint candidates is ambiguous.
    let killers: Vec<usize> = (0..outcomes.len())
        .filter(|&i| outcomes[i].verdict == Verdict::Generator)
        .collect();
    let mut ambiguous = vec![false; outcomes.len()];
    for &i in &killers {
        let vi: BTreeSet<usize> = cycles[i].vertices.iter().copied().collect();
        ambiguous[i] = killers
            .iter()
            .any(|&j| j != i && cycles[j].vertices.iter().all(|v| !vi.contains(v)));
    }

    Ok(outcomes
        .into_iter()
        .zip(cycles)
        .enumerate()
        .map(|(i, (o, c))| {
            let (verdict, note) = if ambiguous[i] {
                (
                    Verdict::HomologousAmbiguity,
                    Some(String::from("a vertex-disjoint candidate also kills the target")),
                )
            } else {
                (o.verdict, o.note)
            };
            RemovalVerdict {
                cycle: c.clone(),
                verdict,
                delta: o.delta,
                note,
            }
        })
        .collect())
}

/// Result of running the whole localisation on one cluster.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct H1Report {
    pub cluster: usize,
    pub target_interval: Interval,
    pub candidates: Vec<RemovalVerdict>,
}

/// Settings for [`analyze_cluster`].
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeParams {
    pub tolerance: f64,
    pub max_len: usize,
    pub cap: usize,
    /// Extra removal groups, as point indices.
    pub groups: Vec<Vec<usize>>,
}

/// Localises the longest H1 interval of cluster `id`.
///
/// The previous cluster is the largest child of `id` (ties to the lowest
/// id), taken at the birth radius of `id`; the new skeleton is taken at the
/// target's birth. `Ok(None)` when the cluster has no H1 interval.
pub fn analyze_cluster(
    tree: &ComponentsTree,
    dm: &DistanceMatrix,
    id: usize,
    params: &AnalyzeParams,
) -> Result<Option<H1Report>> {
    let score = cluster_score(tree, dm, id)?;
    let Some(target) = score.longest else {
        return Ok(None);
    };
    let cluster = tree.cluster(id);
    let prev: Vec<usize> = cluster
        .children
        .iter()
        .map(|&c| tree.cluster(c))
        .max_by(|a, b| a.members.len().cmp(&b.members.len()).then(b.id.cmp(&a.id)))
        .map(|c| c.members.clone())
        .unwrap_or_default();
    let query = CycleQuery {
        radius: target.birth,
        prev_radius: Some(cluster.birth),
        max_len: params.max_len,
        cap: params.cap,
    };
    let mut cycles = new_cycles(&prev, &cluster.members, dm, &query)?;
    cycles.extend(params.groups.iter().map(|g| CandidateCycle::group(dm, g)));
    let verdicts = localize_generator(
        &cluster.members,
        dm,
        target,
        &cycles,
        &LocalizeParams {
            tolerance: params.tolerance,
            cutoff: Some(score.cutoff),
        },
    )?;
    Ok(Some(H1Report {
        cluster: id,
        target_interval: target,
        candidates: verdicts,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comptree::build_tree;
    use crate::filtration::{critical_radius, radius_grid};

    fn hexagon(extra: &[[f64; 2]]) -> DistanceMatrix {
        let mut coords = Vec::new();
        for k in 0..6 {
            let a = core::f64::consts::PI / 3.0 * k as f64;
            coords.extend_from_slice(&[libm::cos(a), libm::sin(a)]);
        }
        for p in extra {
            coords.extend_from_slice(p);
        }
        DistanceMatrix::from_coords(2, &coords)
    }

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn hexagon_cluster_is_significant() {
        let dm = hexagon(&[[10.0, 0.0], [-10.0, 0.0], [0.0, 12.0]]);
        let grid = radius_grid(critical_radius(&dm), 100).unwrap();
        let tree = build_tree(&dm, &grid).unwrap();
        let id = first_significant_cluster(&tree, &dm, 0.3).unwrap().unwrap();
        let mut members = tree.cluster(id).members.clone();
        members.sort_unstable();
        assert_eq!(members, all(6));
        assert_eq!(first_significant_cluster(&tree, &dm, f64::INFINITY).unwrap(), None);
    }

    #[test]
    fn closing_a_path_gives_one_cycle() {
        // Path A-B-C-D; E is adjacent to A and D only.
        let coords = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.5, 0.2, 0.8, -0.4];
        let dm = DistanceMatrix::from_coords(2, &coords);
        let cycles = new_cycles(&[0, 1, 2, 3], &all(5), &dm, &CycleQuery::at(1.0)).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].vertices, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn pendant_point_closes_nothing() {
        let coords = [0.0, 0.0, 1.0, 0.0, 2.0, 0.0, 3.0, 0.0];
        let dm = DistanceMatrix::from_coords(2, &coords);
        assert!(new_cycles(&[0, 1, 2], &all(4), &dm, &CycleQuery::at(1.0))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn cycle_cap_is_enforced() {
        let dm = hexagon(&[]);
        let q = CycleQuery {
            radius: 1.8,
            prev_radius: Some(0.0),
            max_len: 6,
            cap: 5,
        };
        assert!(matches!(
            new_cycles(&[], &all(6), &dm, &q),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(new_cycles(&[5], &[0, 1], &dm, &q).is_err());
    }

    #[test]
    fn hexagon_is_its_own_generator() {
        let dm = hexagon(&[[6.0, 0.0]]);
        let pts = all(7);
        let bc = h1_barcode(&dm, &pts, dm.enclosing_radius()).unwrap();
        assert_eq!(bc.dim(1).len(), 1);
        let target = bc.dim(1)[0];
        assert!((target.birth - 1.0).abs() < 1e-12);
        let cycles = new_cycles(&[], &all(6), &dm, &CycleQuery::at(target.birth)).unwrap();
        assert_eq!(cycles.len(), 1);
        let v = localize_generator(
            &pts,
            &dm,
            target,
            &cycles,
            &LocalizeParams {
                tolerance: 0.01,
                cutoff: None,
            },
        )
        .unwrap();
        assert_eq!(v[0].verdict, Verdict::Generator);
        assert!(v[0].delta.total_after < v[0].delta.total_before);
        assert_eq!(v[0].delta.vanished, vec![target]);
    }

    #[test]
    fn coned_square_is_boundary() {
        let h = 0.5;
        let coords = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, h, h];
        let dm = DistanceMatrix::from_coords(2, &coords);
        let square = CandidateCycle {
            vertices: vec![0, 1, 2, 3],
            max_edge: 1.0,
            is_group: false,
        };
        let target = Interval::new(1.0, core::f64::consts::SQRT_2);
        let v = localize_generator(
            &all(5),
            &dm,
            target,
            &[square],
            &LocalizeParams {
                tolerance: 0.01,
                cutoff: None,
            },
        )
        .unwrap();
        assert_eq!(v[0].verdict, Verdict::Boundary);
    }

    #[test]
    fn removing_everything_is_skipped() {
        let dm = hexagon(&[]);
        let g = CandidateCycle::group(&dm, &all(6));
        let v = localize_generator(
            &all(6),
            &dm,
            Interval::new(1.0, 3f64.sqrt()),
            &[g],
            &LocalizeParams {
                tolerance: 0.01,
                cutoff: None,
            },
        )
        .unwrap();
        assert_eq!(v[0].verdict, Verdict::Skipped);
        assert!(v[0].note.is_some());
    }

    #[test]
    fn disjoint_killers_are_ambiguous() {
        let dm = hexagon(&[]);
        let target = Interval::new(1.0, 3f64.sqrt());
        let groups = [
            CandidateCycle::group(&dm, &[0, 1]),
            CandidateCycle::group(&dm, &[3, 4]),
        ];
        let v = localize_generator(
            &all(6),
            &dm,
            target,
            &groups,
            &LocalizeParams {
                tolerance: 0.01,
                cutoff: None,
            },
        )
        .unwrap();
        assert!(v.iter().all(|r| r.verdict == Verdict::HomologousAmbiguity));
    }
}
