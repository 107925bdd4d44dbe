use std::collections::{HashMap, VecDeque};

use crate::archive::{point_key, Archive, PointKey};
use crate::error::{Error, Result};
use crate::optimizer::{BoxedOptimizer, Candidate, Optimizer};
use crate::seed;

pub type Factory = Box<dyn Fn(u64) -> Result<BoxedOptimizer> + Send + Sync>;

/// `k >= 2` competitors and the fraction of the budget spent on selection.
pub struct CompeteSpec {
    competitors: Vec<Factory>,
    selection_fraction: f64,
}

impl CompeteSpec {
    pub fn new(competitors: Vec<Factory>, selection_fraction: f64) -> Result<Self> {
        if competitors.len() < 2 {
            return Err(Error::InvalidSpec("competition needs at least two competitors".into()));
        }
        if !(selection_fraction > 0.0 && selection_fraction < 1.0) {
            return Err(Error::InvalidSpec(format!("selection fraction {selection_fraction} is outside (0, 1)")));
        }
        Ok(Self { competitors, selection_fraction })
    }
}

/// Active selection: round-robin over the competitors for the first
/// `selection_asks` asks, then the competitor with the smallest best observed
/// value (lowest index on ties) answers every remaining ask. Competitor `i`
/// is seeded with `derive(seed, i)`.
pub struct Compete {
    competitors: Vec<BoxedOptimizer>,
    selection_asks: usize,
    total: usize,
    winner: Option<usize>,
    owners: HashMap<PointKey, VecDeque<usize>>,
    asks_per_competitor: Vec<usize>,
    archive: Archive,
    num_ask: usize,
    num_tell: usize,
}

pub fn compete(spec: CompeteSpec, total_budget: usize, parallelism: usize, seed: u64) -> Result<Compete> {
    if parallelism == 0 || parallelism > total_budget {
        return Err(Error::InvalidSpec(format!("parallelism {parallelism} must lie in 1..={total_budget}")));
    }
    let selection = (spec.selection_fraction * total_budget as f64).floor() as usize;
    compete_with_selection_asks(spec.competitors, selection, total_budget, seed)
}

/// Same as [`compete`] with an explicit number of selection asks.
pub fn compete_with_selection_asks(
    competitors: Vec<Factory>,
    selection_asks: usize,
    total_budget: usize,
    seed: u64,
) -> Result<Compete> {
    let k = competitors.len();
    if k < 2 {
        return Err(Error::InvalidSpec("competition needs at least two competitors".into()));
    }
    if selection_asks < k || selection_asks > total_budget {
        return Err(Error::InvalidSpec(format!(
            "{selection_asks} selection asks cannot serve {k} competitors within budget {total_budget}"
        )));
    }
    let competitors = competitors
        .iter()
        .enumerate()
        .map(|(i, f)| f(seed::derive(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Compete {
        competitors,
        selection_asks,
        total: total_budget,
        winner: None,
        owners: HashMap::new(),
        asks_per_competitor: vec![0; k],
        archive: Archive::new(),
        num_ask: 0,
        num_tell: 0,
    })
}

impl Compete {
    pub fn winner(&self) -> Option<usize> {
        self.winner
    }

    pub fn selection_asks(&self) -> usize {
        self.selection_asks
    }

    pub fn asks_per_competitor(&self) -> &[usize] {
        &self.asks_per_competitor
    }

    pub fn competitors(&self) -> &[BoxedOptimizer] {
        &self.competitors
    }

    /// Index of the competitor with the smallest best observed value.
    fn leader(&self) -> usize {
        let mut best = 0;
        let mut best_value = f64::INFINITY;
        for (i, c) in self.competitors.iter().enumerate() {
            let v = c.archive().best_value().unwrap_or(f64::INFINITY);
            if v < best_value {
                best = i;
                best_value = v;
            }
        }
        best
    }
}

impl Optimizer for Compete {
    fn name(&self) -> String {
        let names: Vec<String> = self.competitors.iter().map(|c| c.name()).collect();
        format!("Compete({})", names.join(","))
    }

    fn dimension(&self) -> usize {
        self.competitors[0].dimension()
    }

    fn ask(&mut self) -> Result<Candidate> {
        if self.num_ask >= self.total {
            return Err(Error::BudgetExhausted { budget: self.total });
        }
        let index = if self.num_ask < self.selection_asks {
            self.num_ask % self.competitors.len()
        } else {
            match self.winner {
                Some(w) => w,
                None => {
                    let w = self.leader();
                    self.winner = Some(w);
                    w
                }
            }
        };
        let candidate = self.competitors[index].ask()?;
        self.owners.entry(point_key(candidate.point())).or_default().push_back(index);
        self.asks_per_competitor[index] += 1;
        self.num_ask += 1;
        Ok(candidate)
    }

    fn tell(&mut self, candidate: &Candidate, value: f64) -> Result<()> {
        let key = point_key(candidate.point());
        let owner = self.owners.get_mut(&key).and_then(VecDeque::pop_front);
        if self.owners.get(&key).is_some_and(VecDeque::is_empty) {
            self.owners.remove(&key);
        }
        match (owner, self.winner) {
            (Some(i), _) | (None, Some(i)) => self.competitors[i].tell(candidate, value)?,
            (None, None) => {
                for c in &mut self.competitors {
                    c.tell(candidate, value)?;
                }
            }
        }
        self.archive.add(candidate.point(), value);
        self.num_tell += 1;
        Ok(())
    }

    fn recommend(&self) -> Result<Candidate> {
        if self.num_tell == 0 {
            return Err(Error::NothingObserved);
        }
        let index = self.winner.unwrap_or_else(|| self.leader());
        self.competitors[index].recommend()
    }

    fn num_ask(&self) -> usize {
        self.num_ask
    }

    fn num_tell(&self) -> usize {
        self.num_tell
    }

    fn archive(&self) -> &Archive {
        &self.archive
    }

    fn budget(&self) -> Option<usize> {
        Some(self.total)
    }
}
