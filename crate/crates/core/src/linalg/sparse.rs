use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Rat;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVec(Vec<(usize, Rat)>);

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec(Vec::new())
    }

    pub fn unit(i: usize) -> SparseVec {
        SparseVec(vec![(i, Rat::one())])
    }

    /// Builds from arbitrary (index, value) pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Rat)>>(pairs: I) -> SparseVec {
        let mut map: BTreeMap<usize, Rat> = BTreeMap::new();
        for (i, x) in pairs {
            *map.entry(i).or_insert_with(Rat::zero) += x;
        }
        SparseVec::from_map(map)
    }

    pub fn from_map(map: BTreeMap<usize, Rat>) -> SparseVec {
        SparseVec(map.into_iter().filter(|(_, x)| !x.is_zero()).collect())
    }

    pub fn from_dense(v: &[Rat]) -> SparseVec {
        SparseVec(
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        )
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); len];
        for (i, x) in &self.0 {
            out[*i] = x.clone();
        }
        out
    }

    pub fn to_map(&self) -> BTreeMap<usize, Rat> {
        self.0.iter().cloned().collect()
    }

    pub fn entries(&self) -> &[(usize, Rat)] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Rat)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> Rat {
        match self.0.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(p) => self.0[p].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().map(|(i, _)| *i)
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Rat) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    /// self + c * other
    pub fn axpy(&self, c: &Rat, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut p, mut q) = (0, 0);
        while p < self.0.len() || q < other.0.len() {
            let take_left = q >= other.0.len() || (p < self.0.len() && self.0[p].0 < other.0[q].0);
            let take_right = p >= self.0.len() || (q < other.0.len() && other.0[q].0 < self.0[p].0);
            if take_left {
                out.push(self.0[p].clone());
                p += 1;
            } else if take_right {
                out.push((other.0[q].0, c * &other.0[q].1));
                q += 1;
            } else {
                let s = &self.0[p].1 + &(c * &other.0[q].1);
                if !s.is_zero() {
                    out.push((self.0[p].0, s));
                }
                p += 1;
                q += 1;
            }
        }
        SparseVec(out)
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Rat::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&-Rat::one(), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Rat {
        let (mut p, mut q) = (0, 0);
        let mut acc = Rat::zero();
        while p < self.0.len() && q < other.0.len() {
            match self.0[p].0.cmp(&other.0[q].0) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    acc += &self.0[p].1 * &other.0[q].1;
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }

    /// Relabels indices through `f`, summing collisions.
    pub fn map_indices<F: Fn(usize) -> usize>(&self, f: F) -> SparseVec {
        SparseVec::from_pairs(self.0.iter().map(|(i, x)| (f(*i), x.clone())))
    }
}

/// Which end of a row carries its pivot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PivotSide {
    /// Pivot at the smallest index (classical row echelon).
    Low,
    /// Pivot at the largest index; the non-pivot columns then form the
    /// lexicographically least complement.
    High,
}

/// Incrementally built echelon basis of a subspace of sparse vectors.
///
/// Rows are normalized to pivot coefficient 1 and have distinct pivots; a
/// row with pivot `p` has no entries beyond `p` (for `High`) or before `p`
/// (for `Low`). Reduction sweeps pivots monotonically, so the remainder of a
/// vector is canonical for the subspace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Echelon {
    side: PivotSide,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(side: PivotSide) -> Echelon {
        Echelon {
            side,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn side(&self) -> PivotSide {
        self.side
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// The row whose pivot is `col`.
    pub fn row(&self, col: usize) -> Option<&SparseVec> {
        self.rows.get(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    fn reduce_map(&self, v: &mut BTreeMap<usize, Rat>) {
        match self.side {
            PivotSide::High => {
                let mut bound = usize::MAX;
                loop {
                    let Some((&k, _)) = v.range(..bound).next_back() else {
                        break;
                    };
                    if let Some(row) = self.rows.get(&k) {
                        let c = v[&k].clone();
                        subtract_row(v, &c, row);
                    }
                    bound = k;
                }
            }
            PivotSide::Low => {
                let mut next = 0usize;
                loop {
                    let Some((&k, _)) = v.range(next..).next() else {
                        break;
                    };
                    if let Some(row) = self.rows.get(&k) {
                        let c = v[&k].clone();
                        subtract_row(v, &c, row);
                    }
                    next = k + 1;
                }
            }
        }
    }

    /// Canonical remainder of `v` modulo the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if self.rows.is_empty() {
            return v.clone();
        }
        let mut map = v.to_map();
        self.reduce_map(&mut map);
        SparseVec::from_map(map)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        if r.is_zero() {
            return false;
        }
        let pivot = match self.side {
            PivotSide::High => r.last().unwrap(),
            PivotSide::Low => r.first().unwrap(),
        };
        let lead = r.get(pivot).recip();
        self.rows.insert(pivot, r.scale(&lead));
        true
    }

    /// Fully reduces every row against the others (reduced echelon form).
    pub fn make_reduced(&mut self) {
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        let ordered: Vec<usize> = match self.side {
            PivotSide::High => keys,
            PivotSide::Low => keys.into_iter().rev().collect(),
        };
        for k in ordered {
            let row = self.rows.remove(&k).unwrap();
            let mut map = row.to_map();
            let one = map.remove(&k).unwrap();
            self.reduce_map(&mut map);
            map.insert(k, one);
            self.rows.insert(k, SparseVec::from_map(map));
        }
    }
}

fn subtract_row(v: &mut BTreeMap<usize, Rat>, c: &Rat, row: &SparseVec) {
    for (i, x) in row.iter() {
        let e = v.entry(*i).or_insert_with(Rat::zero);
        *e -= &(c * x);
        if e.is_zero() {
            v.remove(i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_pairs(pairs.iter().map(|&(i, x)| (i, Rat::from_int(x))))
    }

    #[test]
    fn axpy_cancels() {
        let a = sv(&[(0, 1), (3, 2)]);
        let b = sv(&[(3, 1), (5, 1)]);
        assert_eq!(a.axpy(&Rat::from_int(-2), &b), sv(&[(0, 1), (5, -2)]));
    }

    #[test]
    fn high_pivots_leave_least_complement() {
        let mut e = Echelon::new(PivotSide::High);
        assert!(e.insert(&sv(&[(0, 1), (2, -1)])));
        assert!(e.insert(&sv(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&sv(&[(0, 1), (1, 1)])));
        assert_eq!(e.rank(), 2);
        // columns 0 survives as the quotient basis
        assert_eq!(e.reduce(&sv(&[(2, 1)])), sv(&[(0, 1)]));
        assert_eq!(e.reduce(&sv(&[(1, 1)])), sv(&[(0, -1)]));
    }

    #[test]
    fn low_pivots() {
        let mut e = Echelon::new(PivotSide::Low);
        e.insert(&sv(&[(0, 2), (1, 2)]));
        e.insert(&sv(&[(0, 1), (2, 1)]));
        e.make_reduced();
        assert!(e.is_pivot(0) && e.is_pivot(1));
        assert!(e.contains(&sv(&[(1, 1), (2, -1)])));
    }
}
