//! Algebraic Morse theory on based complexes.
//!
//! A matching pairs basis elements along invertible differential entries.
//! Reversing the matched edges gives a digraph whose zig-zag paths define
//! the reduced differential on the unmatched (critical) cells. A reversed
//! edge of weight `w` contributes `-w⁻¹`; weights along a path multiply in
//! path order, which is map-composition order for left modules.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};

use crate::complex::{BasedComplex, BasisLabel};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::ring::Ring;

/// A matched differential entry `source → target`. For chain complexes the
/// source is the upper cell; for cochain complexes it is the lower one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchedEdge {
    pub source: BasisLabel,
    pub target: BasisLabel,
}

#[derive(Clone, Debug, Default)]
pub struct Matching {
    edges: Vec<MatchedEdge>,
    by_source: HashMap<BasisLabel, usize>,
    by_target: HashMap<BasisLabel, usize>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (BasisLabel, BasisLabel)>) -> Self {
        let mut m = Matching::new();
        for (s, t) in edges {
            m.push(s, t);
        }
        m
    }

    pub fn push(&mut self, source: BasisLabel, target: BasisLabel) {
        let i = self.edges.len();
        self.by_source.entry(source.clone()).or_insert(i);
        self.by_target.entry(target.clone()).or_insert(i);
        self.edges.push(MatchedEdge { source, target });
    }

    pub fn edges(&self) -> &[MatchedEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The source matched with `target`, if any.
    pub fn source_of(&self, target: &BasisLabel) -> Option<&BasisLabel> {
        self.by_target.get(target).map(|&i| &self.edges[i].source)
    }

    /// The target matched with `source`, if any.
    pub fn target_of(&self, source: &BasisLabel) -> Option<&BasisLabel> {
        self.by_source.get(source).map(|&i| &self.edges[i].target)
    }

    pub fn is_matched(&self, label: &BasisLabel) -> bool {
        self.by_source.contains_key(label) || self.by_target.contains_key(label)
    }
}

/// Matched pairs between two adjacent degrees, as positions.
#[derive(Clone, Debug, Default)]
struct PairBlock {
    /// matched target position → source position
    partner: HashMap<usize, usize>,
    /// matched targets in an order compatible with the reversed digraph
    order: Vec<usize>,
}

/// Outcome of a successful `check_matching`.
#[derive(Clone, Debug)]
pub struct MorseCertificate {
    /// Unmatched labels per degree, in basis order.
    pub critical: Vec<Vec<BasisLabel>>,
    blocks: Vec<PairBlock>,
}

impl MorseCertificate {
    pub fn critical_count(&self) -> usize {
        self.critical.iter().map(Vec::len).sum()
    }
}

/// Validates `m` against `c`: labels used at most once, every edge an
/// invertible entry of the differential, and no directed cycle after
/// reversal in any pair of adjacent degrees.
pub fn check_matching<R: Ring>(c: &BasedComplex<R>, m: &Matching) -> Result<MorseCertificate> {
    let ring = c.ring();
    let mut seen = HashSet::new();
    for e in m.edges() {
        for label in [&e.source, &e.target] {
            if !seen.insert(label) {
                return Err(Error::NotAMatching { label: label.to_string() });
            }
        }
    }
    let mut blocks = vec![PairBlock::default(); c.degrees()];
    for e in m.edges() {
        let (s, y) = c.locate(&e.source).ok_or_else(|| Error::UnknownLabel(e.source.to_string()))?;
        let missing = || Error::EdgeNotInDifferential { source_label: e.source.to_string(), target: e.target.to_string() };
        let t = c.target_degree(s).ok_or_else(missing)?;
        let x = c.position(t, &e.target).ok_or_else(missing)?;
        let d = c.differential(s).ok_or_else(missing)?;
        let w = d.get(x, y).ok_or_else(missing)?;
        if ring.inverse(w).is_none() {
            return Err(Error::NonInvertibleWeight {
                source_label: e.source.to_string(),
                target: e.target.to_string(),
                weight: ring.render(w),
            });
        }
        blocks[s].partner.insert(x, y);
    }
    for s in 0..c.degrees() {
        if blocks[s].partner.is_empty() {
            continue;
        }
        let t = c.target_degree(s).expect("matched degrees have a target");
        let order = topological_order(c, s, t, &blocks[s].partner)?;
        blocks[s].order = order;
    }
    let critical = (0..c.degrees())
        .map(|k| c.basis(k).iter().filter(|l| !m.is_matched(l)).cloned().collect())
        .collect();
    Ok(MorseCertificate { critical, blocks })
}

/// Orders the matched targets of degree `t` so that every reversed path
/// `x → partner(x) → x'` goes forward in the order. Depth-first search with
/// an explicit stack; a back edge yields the witness cycle.
fn topological_order<R: Ring>(
    c: &BasedComplex<R>,
    s: usize,
    t: usize,
    partner: &HashMap<usize, usize>,
) -> Result<Vec<usize>> {
    let d = c.differential(s).expect("checked by caller");
    let successors = |x: usize| -> Vec<usize> {
        let y = partner[&x];
        d.column(y).iter().map(|(r, _)| *r).filter(|r| *r != x && partner.contains_key(r)).collect()
    };
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark: HashMap<usize, Mark> = partner.keys().map(|&x| (x, Mark::New)).collect();
    let mut roots: Vec<usize> = partner.keys().copied().collect();
    roots.sort_unstable();
    let mut postorder = Vec::with_capacity(roots.len());
    for root in roots {
        if mark[&root] != Mark::New {
            continue;
        }
        // stack of (node, remaining successors)
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, successors(root))];
        mark.insert(root, Mark::Active);
        while let Some((node, pending)) = stack.last_mut() {
            let node = *node;
            match pending.pop() {
                Some(next) => match mark[&next] {
                    Mark::New => {
                        mark.insert(next, Mark::Active);
                        let succ = successors(next);
                        stack.push((next, succ));
                    }
                    Mark::Active => {
                        let start = stack.iter().position(|(v, _)| *v == next).unwrap();
                        let mut witness = Vec::new();
                        for (v, _) in &stack[start..] {
                            witness.push(c.basis(t)[*v].to_string());
                            witness.push(c.basis(s)[partner[v]].to_string());
                        }
                        witness.push(c.basis(t)[next].to_string());
                        return Err(Error::CycleDetected { witness });
                    }
                    Mark::Done => {}
                },
                None => {
                    mark.insert(node, Mark::Done);
                    postorder.push(node);
                    stack.pop();
                }
            }
        }
    }
    postorder.reverse();
    Ok(postorder)
}

/// Result of pushing one critical cell through the zig-zag paths of a
/// degree pair.
struct Propagation<E> {
    /// accumulated weights on target positions (critical ones survive)
    boundary: BTreeMap<usize, E>,
    /// accumulated weights on matched source positions (the transfer map)
    transfer: BTreeMap<usize, E>,
}

fn propagate<R: Ring>(
    ring: &R,
    d: &SparseMatrix<R::Elem>,
    block: &PairBlock,
    start: usize,
) -> Propagation<R::Elem> {
    let rank: HashMap<usize, usize> = block.order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut vec: BTreeMap<usize, R::Elem> = d.column(start).iter().cloned().collect();
    let mut transfer = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    let mut queued = HashSet::new();
    for x in vec.keys() {
        if let Some(&r) = rank.get(x) {
            heap.push(Reverse((r, *x)));
            queued.insert(*x);
        }
    }
    while let Some(Reverse((_, x))) = heap.pop() {
        queued.remove(&x);
        let Some(a) = vec.remove(&x) else { continue };
        let y = block.partner[&x];
        let w = d.get(x, y).expect("matched entry present");
        let inv = ring.inverse(w).expect("checked invertible");
        let b = ring.mul(&a, &ring.neg(&inv));
        let slot = transfer.entry(y).or_insert_with(|| ring.zero());
        *slot = ring.add(slot, &b);
        for (r, dw) in d.column(y) {
            if *r == x {
                continue;
            }
            let term = ring.mul(&b, dw);
            let entry = vec.entry(*r).or_insert_with(|| ring.zero());
            *entry = ring.add(entry, &term);
            if ring.is_zero(entry) {
                vec.remove(r);
            } else if let Some(&rk) = rank.get(r) {
                if queued.insert(*r) {
                    heap.push(Reverse((rk, *r)));
                }
            }
        }
    }
    transfer.retain(|_, v| !ring.is_zero(v));
    Propagation { boundary: vec, transfer }
}

/// The Morse complex: critical cells with the zig-zag path-sum differential.
pub fn reduce<R: Ring>(c: &BasedComplex<R>, m: &Matching) -> Result<BasedComplex<R>> {
    let cert = check_matching(c, m)?;
    let ring = c.ring();
    let crit_pos: Vec<Vec<usize>> = (0..c.degrees())
        .map(|k| (0..c.rank(k)).filter(|&i| !m.is_matched(&c.basis(k)[i])).collect())
        .collect();
    let mut differentials = Vec::with_capacity(c.differentials().len());
    for (s, d) in c.differentials().iter().enumerate() {
        let t = c.target_degree(s).filter(|_| d.rows() > 0);
        let Some(t) = t else {
            differentials.push(SparseMatrix::zero(0, crit_pos[s].len()));
            continue;
        };
        let new_row: HashMap<usize, usize> = crit_pos[t].iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut triplets = Vec::new();
        for (col, &cell) in crit_pos[s].iter().enumerate() {
            let p = propagate(ring, d, &cert.blocks[s], cell);
            for (x, w) in p.boundary {
                if let Some(&row) = new_row.get(&x) {
                    triplets.push((row, col, w));
                }
            }
        }
        differentials.push(SparseMatrix::from_triplets(ring, crit_pos[t].len(), crit_pos[s].len(), triplets));
    }
    let bases = cert.critical;
    match c.orientation() {
        crate::complex::Orientation::Chain => {
            let lowering = differentials.into_iter().skip(1).collect();
            BasedComplex::chain(ring.clone(), bases, lowering)
        }
        crate::complex::Orientation::Cochain => BasedComplex::cochain(ring.clone(), bases, differentials),
    }
}

/// Image of the critical cell `cell` under the inclusion of the Morse
/// complex: `cell` plus the weighted sum over zig-zag paths ending at
/// matched cells of the same degree.
pub fn transfer_h<R: Ring>(c: &BasedComplex<R>, m: &Matching, cell: &BasisLabel) -> Result<Vec<(BasisLabel, R::Elem)>> {
    let cert = check_matching(c, m)?;
    let (k, pos) = c.locate(cell).ok_or_else(|| Error::UnknownLabel(cell.to_string()))?;
    if m.is_matched(cell) {
        return Err(Error::NotCritical(cell.to_string()));
    }
    let ring = c.ring();
    let mut out = vec![(cell.clone(), ring.one())];
    let has_target = c.target_degree(k).is_some() && c.differential(k).is_some_and(|d| d.rows() > 0);
    if has_target {
        let p = propagate(ring, c.differential(k).unwrap(), &cert.blocks[k], pos);
        out.extend(p.transfer.into_iter().map(|(y, w)| (c.basis(k)[y].clone(), w)));
    }
    Ok(out)
}

/// A complex with a matching, explored on demand from individual labels.
pub trait LazyMorseGraph {
    type Ring: Ring;

    fn ring(&self) -> &Self::Ring;

    /// Differential of a basis element as `(target, weight)` pairs.
    fn boundary(&self, label: &BasisLabel) -> Vec<(BasisLabel, <Self::Ring as Ring>::Elem)>;

    /// The source matched with `target`, when `target` is the target side of
    /// a matched edge.
    fn matched_source(&self, target: &BasisLabel) -> Option<BasisLabel>;

    /// The target matched with `source`, when `source` is the source side
    /// of a matched edge.
    fn matched_target(&self, source: &BasisLabel) -> Option<BasisLabel>;
}

/// Path count and summed weight of the zig-zag paths reaching one label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTally<E> {
    pub paths: usize,
    pub weight: E,
}

/// Enumerates every zig-zag path `start → x₁ ⇢ y₁ → x₂ ⇢ y₂ …` (forward
/// differential steps, reversed matched steps) and tallies the paths by
/// endpoint `y_j`, in the degree of `start`. The trivial path is included.
/// Stops with `CycleDetected` if more than `max_steps` reversals are chained.
pub fn enumerate_paths<G: LazyMorseGraph>(
    graph: &G,
    start: &BasisLabel,
    max_steps: usize,
) -> Result<BTreeMap<BasisLabel, PathTally<<G::Ring as Ring>::Elem>>> {
    let ring = graph.ring();
    let mut tallies: BTreeMap<BasisLabel, PathTally<_>> = BTreeMap::new();
    tallies.insert(start.clone(), PathTally { paths: 1, weight: ring.one() });
    // (cell in the start degree, path weight so far, depth, trail)
    let mut stack = vec![(start.clone(), ring.one(), 0usize, vec![start.to_string()])];
    while let Some((cell, weight, depth, trail)) = stack.pop() {
        for (x, dw) in graph.boundary(&cell) {
            let Some(y) = graph.matched_source(&x) else { continue };
            if y == cell {
                continue;
            }
            if depth >= max_steps {
                let mut witness = trail.clone();
                witness.push(x.to_string());
                return Err(Error::CycleDetected { witness });
            }
            let back = graph.boundary(&y).into_iter().find(|(t, _)| *t == x).map(|(_, w)| w);
            let Some(inv) = back.as_ref().and_then(|w| ring.inverse(w)) else {
                return Err(Error::NonInvertibleWeight {
                    source_label: y.to_string(),
                    target: x.to_string(),
                    weight: back.map_or("0".into(), |w| ring.render(&w)),
                });
            };
            let w = ring.mul(&ring.mul(&weight, &dw), &ring.neg(&inv));
            let entry = tallies.entry(y.clone()).or_insert_with(|| PathTally { paths: 0, weight: ring.zero() });
            entry.paths += 1;
            entry.weight = ring.add(&entry.weight, &w);
            let mut next_trail = trail.clone();
            next_trail.push(x.to_string());
            next_trail.push(y.to_string());
            stack.push((y, w, depth + 1, next_trail));
        }
    }
    Ok(tallies)
}

/// A materialized complex and matching, viewed as a lazy graph.
pub struct MaterializedGraph<'a, R: Ring> {
    complex: &'a BasedComplex<R>,
    matching: &'a Matching,
}

impl<'a, R: Ring> MaterializedGraph<'a, R> {
    pub fn new(complex: &'a BasedComplex<R>, matching: &'a Matching) -> Self {
        MaterializedGraph { complex, matching }
    }
}

impl<R: Ring> LazyMorseGraph for MaterializedGraph<'_, R> {
    type Ring = R;

    fn ring(&self) -> &R {
        self.complex.ring()
    }

    fn boundary(&self, label: &BasisLabel) -> Vec<(BasisLabel, R::Elem)> {
        match self.complex.locate(label) {
            Some((k, _)) => self.complex.boundary_of(k, label).unwrap_or_default(),
            None => Vec::new(),
        }
    }

    fn matched_source(&self, target: &BasisLabel) -> Option<BasisLabel> {
        self.matching.source_of(target).cloned()
    }

    fn matched_target(&self, source: &BasisLabel) -> Option<BasisLabel> {
        self.matching.target_of(source).cloned()
    }
}

/// Outcome of [`certify_lazy`].
#[derive(Clone, Debug, Default)]
pub struct LazyCertificate {
    /// Unmatched labels per degree.
    pub critical: Vec<Vec<BasisLabel>>,
    /// Matched labels whose partner lies beyond the supplied degrees.
    pub beyond: Vec<BasisLabel>,
    pub edges: usize,
}

/// [`check_matching`] for a matching given by a rule. `bases[k]` lists the
/// cells of degree `k`; differentials are evaluated on demand. Partners are
/// checked to be mutual, edges to be invertible entries of the
/// differential, and the reversed graph to be acyclic on every pair of
/// supplied degrees.
pub fn certify_lazy<G: LazyMorseGraph>(graph: &G, bases: &[Vec<BasisLabel>]) -> Result<LazyCertificate> {
    let ring = graph.ring();
    let degree_of: HashMap<&BasisLabel, usize> =
        bases.iter().enumerate().flat_map(|(k, b)| b.iter().map(move |l| (l, k))).collect();
    let mut cert = LazyCertificate { critical: vec![Vec::new(); bases.len()], ..Default::default() };
    for basis in bases {
        for label in basis {
            let up = graph.matched_source(label);
            let down = graph.matched_target(label);
            match (up, down) {
                (Some(_), Some(_)) => return Err(Error::NotAMatching { label: label.to_string() }),
                (None, None) => cert.critical[degree_of[label]].push(label.clone()),
                (Some(source), None) => {
                    if graph.matched_target(&source).as_ref() != Some(label) {
                        return Err(Error::NotAMatching { label: source.to_string() });
                    }
                    if !degree_of.contains_key(&source) {
                        cert.beyond.push(label.clone());
                    }
                }
                (None, Some(target)) => {
                    if graph.matched_source(&target).as_ref() != Some(label) {
                        return Err(Error::NotAMatching { label: target.to_string() });
                    }
                    let weight = graph.boundary(label).into_iter().find(|(t, _)| *t == target).map(|(_, w)| w);
                    let Some(weight) = weight else {
                        return Err(Error::EdgeNotInDifferential { source_label: label.to_string(), target: target.to_string() });
                    };
                    if ring.inverse(&weight).is_none() {
                        return Err(Error::NonInvertibleWeight {
                            source_label: label.to_string(),
                            target: target.to_string(),
                            weight: ring.render(&weight),
                        });
                    }
                    cert.edges += 1;
                    if !degree_of.contains_key(&target) {
                        cert.beyond.push(label.clone());
                    }
                }
            }
        }
    }
    // acyclicity: matched targets x, successors through their sources
    let successors = |x: &BasisLabel| -> Vec<BasisLabel> {
        let y = graph.matched_source(x).expect("matched target");
        graph
            .boundary(&y)
            .into_iter()
            .map(|(t, _)| t)
            .filter(|t| t != x && graph.matched_source(t).is_some())
            .collect()
    };
    let mut done: HashSet<BasisLabel> = HashSet::new();
    for basis in bases {
        for root in basis {
            let Some(source) = graph.matched_source(root) else { continue };
            if done.contains(root) || !degree_of.contains_key(&source) {
                continue;
            }
            let mut active: HashSet<BasisLabel> = HashSet::from([root.clone()]);
            let mut stack = vec![(root.clone(), successors(root))];
            while let Some((node, pending)) = stack.last_mut() {
                match pending.pop() {
                    Some(next) if done.contains(&next) => {}
                    Some(next) if active.contains(&next) => {
                        let start = stack.iter().position(|(v, _)| *v == next).unwrap();
                        let mut witness = Vec::new();
                        for (v, _) in &stack[start..] {
                            witness.push(v.to_string());
                            witness.push(graph.matched_source(v).unwrap().to_string());
                        }
                        witness.push(next.to_string());
                        return Err(Error::CycleDetected { witness });
                    }
                    Some(next) => {
                        active.insert(next.clone());
                        let succ = successors(&next);
                        stack.push((next, succ));
                    }
                    None => {
                        let node = node.clone();
                        active.remove(&node);
                        done.insert(node);
                        stack.pop();
                    }
                }
            }
        }
    }
    Ok(cert)
}
