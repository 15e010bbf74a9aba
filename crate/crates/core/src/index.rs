use std::collections::HashMap;

use crate::space::{sup_norm, ComplexFunction, ToleranceConfig};

/// Grid used to bucket function values. Lookups probe every cell within the
/// tolerance radius, so no tolerance match is missed.
const QUANTUM: f64 = 1e-6;
/// Above this many probe keys a lookup falls back to a linear scan.
const MAX_PROBES: usize = 64;

type Key = Vec<(i64, i64)>;

/// Hash index over a list of functions for approximate-equality lookups.
#[derive(Debug, Default, Clone)]
pub(crate) struct FunctionIndex {
    buckets: HashMap<Key, Vec<usize>>,
}

fn cell(v: f64) -> i64 {
    (v / QUANTUM).round() as i64
}

fn key(f: &ComplexFunction) -> Key {
    f.values().iter().map(|v| (cell(v.re), cell(v.im))).collect()
}

/// Every key a function within `radius` (per component) of `f` can have,
/// or `None` when there are too many.
fn probe_keys(f: &ComplexFunction, radius: f64) -> Option<Vec<Key>> {
    let mut keys: Vec<Key> = vec![Vec::with_capacity(f.values().len())];
    for v in f.values() {
        let re = cell(v.re - radius)..=cell(v.re + radius);
        let im = cell(v.im - radius)..=cell(v.im + radius);
        let choices = (re.end() - re.start() + 1).saturating_mul(im.end() - im.start() + 1);
        if choices as usize * keys.len() > MAX_PROBES {
            return None;
        }
        let mut next = Vec::with_capacity(keys.len() * choices as usize);
        for k in &keys {
            for a in re.clone() {
                for b in im.clone() {
                    let mut k = k.clone();
                    k.push((a, b));
                    next.push(k);
                }
            }
        }
        keys = next;
    }
    Some(keys)
}

impl FunctionIndex {
    pub(crate) fn build(list: &[ComplexFunction]) -> Self {
        let mut index = Self::default();
        for (i, f) in list.iter().enumerate() {
            index.insert(f, i);
        }
        index
    }

    fn insert(&mut self, f: &ComplexFunction, i: usize) {
        self.buckets.entry(key(f)).or_default().push(i);
    }

    /// Lowest-indexed listed function approximately equal to `f`.
    pub(crate) fn find(&self, list: &[ComplexFunction], f: &ComplexFunction, tol: &ToleranceConfig) -> Option<usize> {
        // approx_eq(a, f) bounds each component gap by eq_tol·(1 + max norm),
        // which is below twice eq_tol·(1 + ‖f‖) since eq_tol < 1e-3
        let radius = 2.0 * tol.eq_tol * (1.0 + sup_norm(f));
        match probe_keys(f, radius) {
            Some(keys) => keys
                .iter()
                .filter_map(|k| self.buckets.get(k))
                .flatten()
                .copied()
                .filter(|&i| list[i].approx_eq(f, tol))
                .min(),
            None => list.iter().position(|g| g.approx_eq(f, tol)),
        }
    }
}

/// Appends functions to a list, skipping approximate duplicates.
#[derive(Debug, Default)]
pub(crate) struct DedupList {
    items: Vec<ComplexFunction>,
    index: FunctionIndex,
}

impl DedupList {
    pub(crate) fn push(&mut self, f: ComplexFunction, tol: &ToleranceConfig) -> usize {
        if let Some(i) = self.index.find(&self.items, &f, tol) {
            return i;
        }
        let i = self.items.len();
        self.index.insert(&f, i);
        self.items.push(f);
        i
    }

    pub(crate) fn into_vec(self) -> Vec<ComplexFunction> {
        self.items
    }
}
