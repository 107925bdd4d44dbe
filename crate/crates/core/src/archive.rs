//! Archive of every observation told to an optimizer.
//!
//! Points are keyed by their exact bit pattern, so a candidate told twice
//! accumulates two observations instead of two entries.

use std::collections::HashMap;

/// Exact-bit key of a point.
pub type PointKey = Vec<u64>;

pub fn point_key(point: &[f64]) -> PointKey {
    point.iter().map(|x| x.to_bits()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    point: Vec<f64>,
    values: Vec<f64>,
    sum: f64,
}

impl ArchiveEntry {
    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// UCB1 half-width `sqrt(2 ln(total) / count)`.
    pub fn confidence_width(&self, total: usize) -> f64 {
        let total = total.max(1) as f64;
        (2.0 * total.ln() / self.count() as f64).sqrt()
    }

    pub fn lower_bound(&self, total: usize) -> f64 {
        self.mean() - self.confidence_width(total)
    }

    pub fn upper_bound(&self, total: usize) -> f64 {
        self.mean() + self.confidence_width(total)
    }
}

/// Multiset of (point, observed values), in first-insertion order.
#[derive(Debug, Clone, Default)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    index: HashMap<PointKey, usize>,
    total: usize,
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, point: &[f64], value: f64) {
        let key = point_key(point);
        let slot = match self.index.get(&key) {
            Some(&i) => i,
            None => {
                self.entries.push(ArchiveEntry { point: point.to_vec(), values: Vec::new(), sum: 0.0 });
                self.index.insert(key, self.entries.len() - 1);
                self.entries.len() - 1
            }
        };
        let entry = &mut self.entries[slot];
        entry.values.push(value);
        entry.sum += value;
        self.total += 1;
    }

    pub fn get(&self, point: &[f64]) -> Option<&ArchiveEntry> {
        self.index.get(&point_key(point)).map(|&i| &self.entries[i])
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    /// Number of distinct points.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of observations.
    pub fn total_observations(&self) -> usize {
        self.total
    }

    /// Entry minimizing `score`; ties go to the earliest inserted point.
    pub fn argmin_by<F: Fn(&ArchiveEntry) -> f64>(&self, score: F) -> Option<&ArchiveEntry> {
        let mut best: Option<(&ArchiveEntry, f64)> = None;
        for entry in &self.entries {
            let s = score(entry);
            match best {
                Some((_, b)) if !(s < b) => {}
                _ => best = Some((entry, s)),
            }
        }
        best.map(|(e, _)| e)
    }

    /// Point with the smallest mean observed value.
    pub fn best_mean(&self) -> Option<&ArchiveEntry> {
        self.argmin_by(ArchiveEntry::mean)
    }

    /// Smallest single observation.
    pub fn best_value(&self) -> Option<f64> {
        self.entries.iter().map(ArchiveEntry::min).reduce(f64::min)
    }

    pub fn lower_bound_argmin(&self) -> Option<&ArchiveEntry> {
        let total = self.total;
        self.argmin_by(|e| e.lower_bound(total))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_observations_accumulate() {
        let mut a = Archive::new();
        a.add(&[1.0, 2.0], 3.0);
        a.add(&[1.0, 2.0], 5.0);
        a.add(&[0.0, 2.0], 1.0);
        let e = a.get(&[1.0, 2.0]).unwrap();
        assert_eq!(e.values(), &[3.0, 5.0]);
        assert_eq!(e.mean(), 4.0);
        assert_eq!(a.len(), 2);
        assert_eq!(a.total_observations(), 3);
        assert_eq!(a.best_mean().unwrap().point(), &[0.0, 2.0]);
    }

    #[test]
    fn keys_are_exact_bits() {
        let mut a = Archive::new();
        a.add(&[0.0], 1.0);
        a.add(&[-0.0], 1.0);
        a.add(&[0.1 + 0.2], 1.0);
        a.add(&[0.3], 1.0);
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn ties_go_to_first_inserted() {
        let mut a = Archive::new();
        a.add(&[1.0], 2.0);
        a.add(&[2.0], 2.0);
        assert_eq!(a.best_mean().unwrap().point(), &[1.0]);
    }

    #[test]
    fn bounds_bracket_the_mean() {
        let mut a = Archive::new();
        for v in [1.0, 2.0, 3.0] {
            a.add(&[0.0], v);
        }
        let e = a.get(&[0.0]).unwrap();
        let w = (2.0 * 3f64.ln() / 3.0).sqrt();
        assert!((e.lower_bound(3) - (2.0 - w)).abs() < 1e-15);
        assert!((e.upper_bound(3) - (2.0 + w)).abs() < 1e-15);
    }
}
