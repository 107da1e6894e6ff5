use super::ScopeSpec;

/// A child branch at a target level with its accumulated SO.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch<'a> {
    pub id: usize,
    /// Base relation of the branch root to the target node.
    pub deprel: &'a str,
    pub so: f64,
}

/// The constituents an operation can act on when it is applied at a node.
#[derive(Clone, Debug, PartialEq)]
pub struct Level<'a> {
    pub node: usize,
    pub head_so: f64,
    /// Dependents in surface order.
    pub branches: Vec<Branch<'a>>,
    /// Net effect of operations applied to the whole level.
    pub adjustment: f64,
}

impl Level<'_> {
    pub fn total(&self) -> f64 {
        self.head_so + self.branches.iter().map(|b| b.so).sum::<f64>() + self.adjustment
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Head,
    /// Index into [`Level::branches`].
    Branch(usize),
    Level,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScopeMatch {
    /// Index of the scope entry that matched.
    pub spec: usize,
    pub selection: Selection,
}

/// Tries each scope in order and returns the first one that selects a
/// constituent.
///
/// `origin` is the position the operation arrived from: the branch holding
/// the trigger, or the target node itself when the trigger is the target.
/// Branch selectors skip the origin branch; `subjl` and `subjr` look
/// strictly left and right of it.
pub fn resolve_scope(scopes: &[ScopeSpec], level: &Level<'_>, origin: usize) -> Option<ScopeMatch> {
    let nonzero = |b: &&Branch<'_>| b.so != 0.0;
    scopes.iter().enumerate().find_map(|(spec, scope)| {
        let selection = match scope {
            ScopeSpec::TargetNode => (level.head_so != 0.0).then_some(Selection::Head),
            ScopeSpec::Branch(rel) => level
                .branches
                .iter()
                .position(|b| b.id != origin && b.deprel == rel && b.so != 0.0)
                .map(Selection::Branch),
            ScopeSpec::SubjL => level
                .branches
                .iter()
                .filter(|b| b.id < origin)
                .find(nonzero)
                .map(|b| Selection::Branch(index_of(level, b.id))),
            ScopeSpec::SubjR => level
                .branches
                .iter()
                .filter(|b| b.id > origin)
                .find(nonzero)
                .map(|b| Selection::Branch(index_of(level, b.id))),
            ScopeSpec::All => Some(Selection::Level),
        }?;
        Some(ScopeMatch { spec, selection })
    })
}

fn index_of(level: &Level<'_>, id: usize) -> usize {
    level
        .branches
        .iter()
        .position(|b| b.id == id)
        .expect("branch taken from the same level")
}
