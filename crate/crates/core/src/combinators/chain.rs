use crate::archive::Archive;
use crate::error::{Error, Result};
use crate::optimizer::{BoxedOptimizer, Candidate, Optimizer};
use crate::seed;

/// What a stage factory receives when its stage starts.
#[derive(Debug, Clone, PartialEq)]
pub struct StageContext {
    pub seed: u64,
    /// Asks this stage will answer.
    pub budget: usize,
    /// Recommendation of the previous stage, if any.
    pub start: Option<Vec<f64>>,
}

pub type StageFactory = Box<dyn Fn(&StageContext) -> Result<BoxedOptimizer> + Send + Sync>;

/// Ordered stages with the fraction of the total budget each one receives.
pub struct ChainSpec {
    stages: Vec<(StageFactory, f64)>,
}

impl ChainSpec {
    pub fn new(stages: Vec<(StageFactory, f64)>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidSpec("a chain needs at least one stage".into()));
        }
        if let Some((_, f)) = stages.iter().find(|(_, f)| !(*f > 0.0 && *f <= 1.0)) {
            return Err(Error::InvalidSpec(format!("stage fraction {f} is outside (0, 1]")));
        }
        let total: f64 = stages.iter().map(|(_, f)| f).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpec(format!("stage fractions sum to {total}, not 1")));
        }
        Ok(Self { stages })
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Per-stage ask counts: `floor(fraction * total)`, remainder to the last stage.
    pub fn stage_budgets(&self, total: usize) -> Vec<usize> {
        let mut budgets: Vec<usize> = self.stages.iter().map(|(_, f)| (f * total as f64).floor() as usize).collect();
        let last = budgets.len() - 1;
        let head: usize = budgets[..last].iter().sum();
        budgets[last] = total.saturating_sub(head);
        budgets
    }
}

/// Runs stages one after the other. Stage 0 uses the chain seed, stage `i > 0`
/// uses `derive(seed, i)`. Each later stage starts from the previous
/// recommendation and is told every observation made so far.
pub struct Chain {
    factories: Vec<StageFactory>,
    budgets: Vec<usize>,
    index: usize,
    stage_asks: usize,
    current: BoxedOptimizer,
    archive: Archive,
    seed: u64,
    total: usize,
    num_ask: usize,
    num_tell: usize,
    stage_names: Vec<String>,
}

fn stage_seed(seed: u64, index: usize) -> u64 {
    if index == 0 {
        seed
    } else {
        seed::derive(seed, index as u64)
    }
}

pub fn chain(spec: ChainSpec, total_budget: usize, seed: u64) -> Result<Chain> {
    let budgets = spec.stage_budgets(total_budget);
    let factories: Vec<StageFactory> = spec.stages.into_iter().map(|(f, _)| f).collect();
    let first = StageContext { seed: stage_seed(seed, 0), budget: budgets[0], start: None };
    let current = factories[0](&first)?;
    let stage_names = vec![current.name()];
    let mut chain = Chain {
        factories,
        budgets,
        index: 0,
        stage_asks: 0,
        current,
        archive: Archive::new(),
        seed,
        total: total_budget,
        num_ask: 0,
        num_tell: 0,
        stage_names,
    };
    chain.skip_empty_stages()?;
    Ok(chain)
}

impl Chain {
    pub fn stage_index(&self) -> usize {
        self.index
    }

    pub fn stage_budgets(&self) -> &[usize] {
        &self.budgets
    }

    pub fn current_stage(&self) -> &dyn Optimizer {
        self.current.as_ref()
    }

    fn skip_empty_stages(&mut self) -> Result<()> {
        while self.stage_asks >= self.budgets[self.index] && self.index + 1 < self.budgets.len() {
            self.next_stage()?;
        }
        Ok(())
    }

    fn next_stage(&mut self) -> Result<()> {
        self.index += 1;
        let start = self.current.recommend().ok().map(Candidate::into_point);
        let ctx = StageContext { seed: stage_seed(self.seed, self.index), budget: self.budgets[self.index], start };
        let mut next = self.factories[self.index](&ctx)?;
        for entry in self.archive.entries() {
            let candidate = Candidate::new(entry.point().to_vec(), Vec::new());
            for &value in entry.values() {
                next.tell(&candidate, value)?;
            }
        }
        if self.stage_names.len() <= self.index {
            self.stage_names.push(next.name());
        }
        self.current = next;
        self.stage_asks = 0;
        Ok(())
    }
}

impl Optimizer for Chain {
    fn name(&self) -> String {
        let mut names = self.stage_names.clone();
        for _ in names.len()..self.factories.len() {
            names.push("?".into());
        }
        format!("Chain({})", names.join(","))
    }

    fn dimension(&self) -> usize {
        self.current.dimension()
    }

    fn ask(&mut self) -> Result<Candidate> {
        if self.num_ask >= self.total {
            return Err(Error::BudgetExhausted { budget: self.total });
        }
        self.skip_empty_stages()?;
        let candidate = self.current.ask()?;
        self.stage_asks += 1;
        self.num_ask += 1;
        Ok(candidate)
    }

    fn tell(&mut self, candidate: &Candidate, value: f64) -> Result<()> {
        self.current.tell(candidate, value)?;
        self.archive.add(candidate.point(), value);
        self.num_tell += 1;
        Ok(())
    }

    fn recommend(&self) -> Result<Candidate> {
        if self.num_tell == 0 {
            return Err(Error::NothingObserved);
        }
        self.current.recommend()
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
