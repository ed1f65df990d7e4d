//! Graver bases by completion.
//!
//! The default engine is project-and-lift: pick a coordinate set on which the
//! kernel lattice projects injectively, obtain the Graver basis of that
//! projection, then add the remaining coordinates one at a time. Each lift is
//! a completion in which only pairs that are sign-compatible on the already
//! lifted coordinates and opposite on the new one are critical. The Pottier
//! engine runs a single normal-form completion over all coordinates; it is
//! slower and serves as an independent cross-check.
//!
//! Vectors are stored up to sign (one representative per `±` pair), so
//! reducibility tests query both `s` and `−s`.

use std::collections::{BTreeMap, VecDeque};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{kernel_lattice_basis, norm_lex_cmp, IntMatrix, SignedVector};
use crate::scalar::{with_fallback, ExactInt, Overflow};

/// Completion strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Engine {
    #[default]
    ProjectAndLift,
    Pottier,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GraverOptions {
    pub engine: Engine,
    /// Abort with [`Error::Timeout`] once this instant has passed.
    pub deadline: Option<Instant>,
}

/// The Graver basis of a matrix, one canonical representative per `±` pair,
/// sorted by 1-norm then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraverBasis<T = BigInt> {
    matrix: IntMatrix<T>,
    elements: Vec<SignedVector<T>>,
}

impl<T: ExactInt> GraverBasis<T> {
    pub fn matrix(&self) -> &IntMatrix<T> {
        &self.matrix
    }

    pub fn elements(&self) -> &[SignedVector<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Both sign representatives of every element.
    pub fn full_set(&self) -> Result<Vec<SignedVector<T>>, Overflow> {
        let mut out = Vec::with_capacity(2 * self.elements.len());
        for g in &self.elements {
            out.push(g.clone());
            out.push(g.negated()?);
        }
        Ok(out)
    }

    /// Membership of `u` or `−u`.
    pub fn contains(&self, u: &SignedVector<T>) -> bool {
        let Ok(c) = u.canonical() else { return false };
        self.elements
            .binary_search_by(|g| norm_lex_cmp(g, &c))
            .is_ok()
    }

    pub fn max_one_norm(&self) -> BigInt {
        self.elements
            .iter()
            .map(|g| g.base().iter().map(|x| x.to_big().abs()).sum::<BigInt>())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn to_big(&self) -> GraverBasis<BigInt> {
        GraverBasis {
            matrix: self.matrix.to_big(),
            elements: self.elements.iter().map(SignedVector::to_big).collect(),
        }
    }
}

/// The Graver basis of `a`, computed exactly.
pub fn graver_basis(a: &IntMatrix) -> GraverBasis {
    graver_basis_with(a, &GraverOptions::default()).expect("no deadline was set")
}

/// [`graver_basis`] with an explicit engine and deadline. Runs on machine
/// integers and repeats on `BigInt` if an intermediate value overflows.
pub fn graver_basis_with(a: &IntMatrix, opts: &GraverOptions) -> Result<GraverBasis> {
    let elements = with_fallback(
        || match a.convert::<i64>() {
            Some(small) => Ok(compute_graver(&small, opts)?
                .iter()
                .map(SignedVector::to_big)
                .collect()),
            None => Err(Error::Overflow),
        },
        || compute_graver(a, opts),
    )?;
    Ok(GraverBasis {
        matrix: a.clone(),
        elements,
    })
}

/// Maximum 1-norm over the elements (0 for an empty basis).
pub fn max_one_norm<T: ExactInt>(g: &GraverBasis<T>) -> BigInt {
    g.max_one_norm()
}

/// Whether `u` is primitive for `a`, i.e. `±u` lies in the Graver basis.
pub fn is_primitive(u: &SignedVector, a: &IntMatrix) -> Result<bool> {
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !crate::lattice::matvec(a, u.base())?.is_zero() {
        return Err(Error::NotInKernel);
    }
    Ok(graver_basis(a).contains(u))
}

/// Runs the completion over scalar type `T` and returns canonical,
/// sorted representatives.
pub fn compute_graver<T: ExactInt>(
    a: &IntMatrix<T>,
    opts: &GraverOptions,
) -> Result<Vec<SignedVector<T>>> {
    let n = a.cols();
    if opts.deadline.is_some_and(|d| Instant::now() >= d) {
        return Err(Error::Timeout);
    }
    let basis = kernel_lattice_basis(&a.to_big());
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let rows: Vec<Vec<BigInt>> = basis.into_iter().map(|v| v.into_vec()).collect();
    let (rows, pivots, unimodular) = echelon_for_projection(rows, n);

    let mut work = Completion::<T>::new(n, opts.deadline);
    for row in rows {
        let v = row
            .iter()
            .map(|x| T::from_big(x).ok_or(Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        work.push_raw(v)?;
    }

    match opts.engine {
        Engine::ProjectAndLift => {
            let mut active = Mask::empty(work.words);
            for &p in &pivots {
                active.set(p);
            }
            if !unimodular {
                work.pottier(&active)?;
            }
            for j in 0..n {
                if !active.get(j) {
                    work.lift(&active, j)?;
                    active.set(j);
                }
            }
        }
        Engine::Pottier => {
            let mut active = Mask::empty(work.words);
            for j in 0..n {
                active.set(j);
            }
            work.pottier(&active)?;
        }
    }

    let mut out = work
        .elems
        .into_iter()
        .map(|e| SignedVector::new(e.v.into()).canonical())
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by(norm_lex_cmp);
    Ok(out)
}

/// Integer row echelon form of a lattice basis, preferring unit pivots.
/// Returns the rows, the pivot columns and whether every pivot is `±1`
/// (then the basis restricted to the pivots is the identity).
fn echelon_for_projection(
    mut rows: Vec<Vec<BigInt>>,
    n: usize,
) -> (Vec<Vec<BigInt>>, Vec<usize>, bool) {
    let r = rows.len();
    let mut pivots = Vec::with_capacity(r);
    let mut unimodular = true;
    for k in 0..r {
        let unit = (0..n)
            .filter(|c| !pivots.contains(c))
            .find_map(|c| (k..r).find(|&i| rows[i][c].abs().is_one()).map(|i| (c, i)));
        if let Some((c, i)) = unit {
            rows.swap(i, k);
            if rows[k][c].is_negative() {
                for x in rows[k].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                if i != k && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for col in 0..n {
                        let delta = &f * &rows[k][col];
                        rows[i][col] -= delta;
                    }
                }
            }
            pivots.push(c);
            continue;
        }
        unimodular = false;
        let c = (0..n)
            .filter(|c| !pivots.contains(c))
            .find(|&c| (k..r).any(|i| !rows[i][c].is_zero()))
            .expect("basis rows are independent");
        // Euclid on column c among rows k..r.
        loop {
            let p = (k..r)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&x, &y| rows[x][c].abs().cmp(&rows[y][c].abs()).then(x.cmp(&y)))
                .expect("column has a nonzero entry");
            let mut done = true;
            for i in k..r {
                if i != p && !rows[i][c].is_zero() {
                    let q = rows[i][c].div_floor(&rows[p][c]);
                    for col in 0..n {
                        let delta = &q * &rows[p][col];
                        rows[i][col] -= delta;
                    }
                    if !rows[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                rows.swap(p, k);
                break;
            }
        }
        if rows[k][c].is_negative() {
            for x in rows[k].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..k {
            let q = rows[i][c].div_floor(&rows[k][c]);
            if !q.is_zero() {
                for col in 0..n {
                    let delta = &q * &rows[k][col];
                    rows[i][col] -= delta;
                }
            }
        }
        pivots.push(c);
    }
    (rows, pivots, unimodular)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Mask(Vec<u64>);

impl Mask {
    fn empty(words: usize) -> Self {
        Mask(vec![0; words])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &bits) in self.0.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                let t = b.trailing_zeros() as usize;
                out.push(w * 64 + t);
                b &= b - 1;
            }
        }
        out
    }
}

struct Elem<T> {
    v: Vec<T>,
    pos: Vec<u64>,
    neg: Vec<u64>,
    norm: u64,
}

impl<T: ExactInt> Elem<T> {
    fn new(v: Vec<T>, words: usize) -> Self {
        let mut pos = vec![0u64; words];
        let mut neg = vec![0u64; words];
        for (i, x) in v.iter().enumerate() {
            if x.is_positive() {
                pos[i / 64] |= 1 << (i % 64);
            } else if x.is_negative() {
                neg[i / 64] |= 1 << (i % 64);
            }
        }
        Elem {
            v,
            pos,
            neg,
            norm: 0,
        }
    }

    fn negate(&mut self) -> Result<(), Overflow> {
        for x in self.v.iter_mut() {
            *x = x.neg_c()?;
        }
        std::mem::swap(&mut self.pos, &mut self.neg);
        Ok(())
    }

    fn set_norm(&mut self, coords: &[usize]) {
        self.norm = coords
            .iter()
            .map(|&c| self.v[c].abs().to_u64().unwrap_or(u64::MAX))
            .fold(0u64, u64::saturating_add);
    }
}

/// A sign trie over the active coordinates: each level branches on whether
/// the element is zero, positive or negative there. Finding a reducer for
/// `s` only descends into branches whose signs are compatible with `s`.
struct SupportTree {
    coords: Vec<usize>,
    nodes: Vec<[u32; 3]>,
    leaves: Vec<Vec<u32>>,
}

const NO_LEAF: u32 = u32::MAX;

impl SupportTree {
    fn new(coords: Vec<usize>) -> Self {
        let root = if coords.is_empty() {
            [NO_LEAF, 0, 0]
        } else {
            [0, 0, 0]
        };
        SupportTree {
            coords,
            nodes: vec![root],
            leaves: Vec::new(),
        }
    }

    fn insert<T: ExactInt>(&mut self, idx: u32, v: &[T]) {
        let depth = self.coords.len();
        let mut node = 0usize;
        for d in 0..depth {
            let branch = sign_branch(&v[self.coords[d]]);
            let mut child = self.nodes[node][branch];
            if child == 0 {
                child = self.nodes.len() as u32;
                self.nodes.push(if d + 1 == depth {
                    [NO_LEAF, 0, 0]
                } else {
                    [0, 0, 0]
                });
                self.nodes[node][branch] = child;
            }
            node = child as usize;
        }
        if self.nodes[node][0] == NO_LEAF {
            self.nodes[node][0] = self.leaves.len() as u32;
            self.leaves.push(Vec::new());
        }
        let leaf = self.nodes[node][0] as usize;
        self.leaves[leaf].push(idx);
    }

    /// Some element `g ≠ exclude` with `g ⊑ s` (or `g ⊑ −s` when `flip`).
    fn find<T: ExactInt>(
        &self,
        s: &[T],
        flip: bool,
        exclude: Option<u32>,
        elems: &[Elem<T>],
    ) -> Option<u32> {
        let depth = self.coords.len();
        let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
        while let Some((node, d)) = stack.pop() {
            if d == depth {
                let leaf = self.nodes[node as usize][0];
                if leaf == NO_LEAF {
                    continue;
                }
                for &idx in &self.leaves[leaf as usize] {
                    if Some(idx) == exclude {
                        continue;
                    }
                    let g = &elems[idx as usize].v;
                    if self.coords.iter().all(|&c| g[c].abs() <= s[c].abs()) {
                        return Some(idx);
                    }
                }
                continue;
            }
            let children = self.nodes[node as usize];
            let x = &s[self.coords[d]];
            let branch = match (x.is_positive(), x.is_negative(), flip) {
                (true, _, false) | (_, true, true) => 1,
                (_, true, false) | (true, _, true) => 2,
                _ => 0,
            };
            if branch != 0 && children[branch] != 0 {
                stack.push((children[branch], d + 1));
            }
            if children[0] != 0 {
                stack.push((children[0], d + 1));
            }
        }
        None
    }
}

fn sign_branch<T: ExactInt>(x: &T) -> usize {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        2
    } else {
        0
    }
}

struct Completion<T> {
    n: usize,
    words: usize,
    elems: Vec<Elem<T>>,
    deadline: Option<Instant>,
    ticks: u32,
}

impl<T: ExactInt> Completion<T> {
    fn new(n: usize, deadline: Option<Instant>) -> Self {
        Completion {
            n,
            words: n.div_ceil(64).max(1),
            elems: Vec::new(),
            deadline,
            ticks: 0,
        }
    }

    fn push_raw(&mut self, v: Vec<T>) -> Result<()> {
        debug_assert_eq!(v.len(), self.n);
        self.elems.push(Elem::new(v, self.words));
        Ok(())
    }

    fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(Error::Timeout);
                }
            }
        }
        Ok(())
    }

    fn build_tree(&self, coords: &[usize]) -> SupportTree {
        let mut tree = SupportTree::new(coords.to_vec());
        for (i, e) in self.elems.iter().enumerate() {
            tree.insert(i as u32, &e.v);
        }
        tree
    }

    fn reducible(&self, tree: &SupportTree, s: &[T], exclude: Option<u32>) -> Option<(u32, bool)> {
        if let Some(i) = tree.find(s, false, exclude, &self.elems) {
            return Some((i, false));
        }
        tree.find(s, true, exclude, &self.elems).map(|i| (i, true))
    }

    /// Drops every element reducible by another one on `coords`.
    fn minimize(&mut self, coords: &[usize]) -> Result<()> {
        let tree = self.build_tree(coords);
        let mut keep = Vec::with_capacity(self.elems.len());
        for i in 0..self.elems.len() {
            self.tick()?;
            keep.push(
                self.reducible(&tree, &self.elems[i].v, Some(i as u32))
                    .is_none(),
            );
        }
        let mut flags = keep.into_iter();
        self.elems.retain(|_| flags.next().unwrap_or(true));
        Ok(())
    }

    /// Normal-form completion on the coordinates in `active`.
    fn pottier(&mut self, active: &Mask) -> Result<()> {
        let coords = active.ones();
        for e in self.elems.iter_mut() {
            e.set_norm(&coords);
        }
        let mut tree = self.build_tree(&coords);
        let act = &active.0;
        let mut i = 0;
        while i < self.elems.len() {
            for k in 0..i {
                self.tick()?;
                let (f, g) = (&self.elems[i], &self.elems[k]);
                let mut sum_ok = false;
                let mut diff_ok = false;
                for w in 0..self.words {
                    if (f.pos[w] & g.neg[w] | f.neg[w] & g.pos[w]) & act[w] != 0 {
                        sum_ok = true;
                    }
                    if (f.pos[w] & g.pos[w] | f.neg[w] & g.neg[w]) & act[w] != 0 {
                        diff_ok = true;
                    }
                }
                for (wanted, subtract) in [(sum_ok, false), (diff_ok, true)] {
                    if !wanted {
                        continue;
                    }
                    let (f, g) = (&self.elems[i].v, &self.elems[k].v);
                    let mut s = combine(f, g, subtract)?;
                    while let Some((r, flip)) = self.reducible(&tree, &s, None) {
                        s = combine(&s, &self.elems[r as usize].v, !flip)?;
                    }
                    if coords.iter().any(|&c| !s[c].is_zero()) {
                        let mut e = Elem::new(s, self.words);
                        e.set_norm(&coords);
                        tree.insert(self.elems.len() as u32, &e.v);
                        self.elems.push(e);
                    }
                }
            }
            i += 1;
        }
        self.minimize(&coords)
    }

    /// Extends the Graver property from `sigma` to `sigma ∪ {j}`.
    fn lift(&mut self, sigma: &Mask, j: usize) -> Result<()> {
        let mut active = sigma.clone();
        active.set(j);
        let coords = active.ones();
        for e in self.elems.iter_mut() {
            if e.v[j].is_negative() {
                e.negate()?;
            }
            e.set_norm(&coords);
        }
        let mut state = LiftState {
            tree: self.build_tree(&coords),
            buckets: BTreeMap::new(),
            coords,
            sigma: sigma.0.clone(),
            j,
            queue: VecDeque::new(),
        };
        for (i, e) in self.elems.iter().enumerate() {
            if e.v[j].is_positive() {
                state.buckets.entry(e.norm).or_default().push(i as u32);
            }
        }

        // Critical pairs are visited by increasing sum of norms. Elements
        // created at a level are immediately paired with everything whose
        // norm sum does not exceed that level.
        let mut floor = 0u64;
        while let Some(level) = next_level(&state.buckets, floor) {
            let snapshot: Vec<(u64, usize)> =
                state.buckets.iter().map(|(&k, v)| (k, v.len())).collect();
            for &(a, la) in &snapshot {
                if a.saturating_mul(2) > level {
                    break;
                }
                let b = level - a;
                let Some(&(_, lb)) = snapshot.iter().find(|&&(k, _)| k == b) else {
                    continue;
                };
                for ia in 0..la {
                    let start = if a == b { ia + 1 } else { 0 };
                    for ib in start..lb {
                        let p = state.buckets[&a][ia];
                        let q = state.buckets[&b][ib];
                        self.lift_pair(&mut state, p, q)?;
                        self.drain(&mut state, level)?;
                    }
                }
            }
            floor = level + 1;
        }
        self.minimize(&state.coords)
    }

    fn drain(&mut self, state: &mut LiftState, level: u64) -> Result<()> {
        while let Some(e) = state.queue.pop_front() {
            let ne = self.elems[e as usize].norm;
            let partners: Vec<u32> = state
                .buckets
                .range(..=level.saturating_sub(ne))
                .flat_map(|(_, v)| v.iter().copied().filter(|&x| x < e))
                .collect();
            for x in partners {
                self.lift_pair(state, e, x)?;
            }
        }
        Ok(())
    }

    fn lift_pair(&mut self, state: &mut LiftState, p: u32, q: u32) -> Result<()> {
        self.tick()?;
        let (f, g) = (&self.elems[p as usize], &self.elems[q as usize]);
        for w in 0..self.words {
            if (f.pos[w] & g.pos[w] | f.neg[w] & g.neg[w]) & state.sigma[w] != 0 {
                return Ok(());
            }
        }
        let mut s = combine(&f.v, &g.v, true)?;
        if s[state.j].is_negative() {
            for x in s.iter_mut() {
                *x = x.neg_c()?;
            }
        }
        if s.iter().all(Zero::is_zero) || self.reducible(&state.tree, &s, None).is_some() {
            return Ok(());
        }
        let idx = self.elems.len() as u32;
        let mut e = Elem::new(s, self.words);
        e.set_norm(&state.coords);
        state.tree.insert(idx, &e.v);
        if e.v[state.j].is_positive() {
            state.buckets.entry(e.norm).or_default().push(idx);
            state.queue.push_back(idx);
        }
        self.elems.push(e);
        Ok(())
    }
}

struct LiftState {
    tree: SupportTree,
    buckets: BTreeMap<u64, Vec<u32>>,
    coords: Vec<usize>,
    sigma: Vec<u64>,
    j: usize,
    queue: VecDeque<u32>,
}

fn next_level(buckets: &BTreeMap<u64, Vec<u32>>, floor: u64) -> Option<u64> {
    let mut best: Option<u64> = None;
    for (&a, va) in buckets {
        for (&b, _) in buckets.range(a..) {
            if a == b && va.len() < 2 {
                continue;
            }
            let s = a.saturating_add(b);
            if s >= floor {
                best = Some(best.map_or(s, |x| x.min(s)));
                break;
            }
        }
    }
    best
}

fn combine<T: ExactInt>(f: &[T], g: &[T], subtract: bool) -> Result<Vec<T>, Overflow> {
    f.iter()
        .zip(g)
        .map(|(a, b)| if subtract { a.sub_c(b) } else { a.add_c(b) })
        .collect()
}
