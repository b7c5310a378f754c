//! Exhaustive search for solution-free colorings, and Rado numbers by
//! upward scan.
//!
//! Integers are decided in increasing order, Red before Blue, with `1`
//! fixed Red (swapping colors is an automorphism). After every decision each
//! unassigned value is tested against both colors: if giving `v` color `g`
//! would complete a monochromatic solution among the values already colored
//! `g`, then `v` is forced to the other color. A value forced both ways is a
//! conflict. This runs to fixpoint before the next decision.
//!
//! Each color keeps a [`SumTable`] over its assigned values. Testing `v`
//! extends the table by one summand into scratch rows, so one test costs
//! `m` shift-or passes over `W/64` words.
//!
//! With several threads the tree is cut at a shallow depth and subtrees run
//! in parallel. Results are merged in subtree order, so the coloring found
//! and every node count equal the single-threaded run.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::checker::{find_mono_solution, SumTable};
use crate::coloring::{Color, Coloring};
use crate::error::{domain, Result};
use crate::formula::{EquationParams, RadoValue};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_n: u64,
    pub max_nodes: u64,
    pub max_wall: Duration,
    pub threads: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_n: 1000,
            max_nodes: u64::MAX,
            max_wall: Duration::from_secs(600),
            threads: 1,
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_n == 0 || self.max_nodes == 0 || self.max_wall.is_zero() || self.threads == 0 {
            return domain("search budget fields must all be positive");
        }
        Ok(())
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_max_n(mut self, max_n: u64) -> Self {
        self.max_n = max_n;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetLimit {
    Nodes,
    WallClock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhausted {
    pub n: u64,
    pub limit: BudgetLimit,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    ValidColoring(Coloring),
    NoValidColoring { nodes: u64 },
    BudgetExhausted(Exhausted),
}

/// Diagnostic progress, reported every [`PROGRESS_EVERY`] nodes per worker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProgressEvent {
    pub n: u64,
    pub nodes: u64,
    pub depth: u64,
}

pub const PROGRESS_EVERY: u64 = 1 << 18;

pub type Observer<'a> = &'a (dyn Fn(ProgressEvent) + Sync);

/// Immutable per-instance data.
struct Instance {
    n: u64,
    m: usize,
    a: i128,
    c: i128,
    width: usize,
}

impl Instance {
    fn new(n: u64, params: &EquationParams) -> Self {
        let (a, c) = (params.a as i128, params.c as i128);
        let target_max = a * n as i128 - c;
        let sum_max = params.m as i128 * n as i128;
        Instance {
            n,
            m: params.lhs_len(),
            a,
            c,
            width: target_max.min(sum_max).max(0) as usize,
        }
    }

    fn target(&self, v: u64) -> Option<usize> {
        let t = self.a * v as i128 - self.c;
        (t >= 0 && t <= self.width as i128).then_some(t as usize)
    }
}

#[derive(Clone)]
struct State {
    colors: Vec<Option<Color>>,
    tables: [SumTable; 2],
    targets: [BitRow; 2],
    next: u64,
    depth: u64,
}

struct Scratch {
    prev: BitRow,
    cur: BitRow,
}

impl State {
    fn new(inst: &Instance) -> Self {
        let table = SumTable::new(inst.m, inst.width);
        let targets = BitRow::zeros(inst.width + 1);
        State {
            colors: vec![None; inst.n as usize],
            tables: [table.clone(), table],
            targets: [targets.clone(), targets],
            next: 1,
            depth: 0,
        }
    }

    fn get(&self, v: u64) -> Option<Color> {
        self.colors[(v - 1) as usize]
    }

    fn assign(&mut self, inst: &Instance, v: u64, color: Color) {
        self.colors[(v - 1) as usize] = Some(color);
        let i = color.index();
        self.tables[i].add(v);
        if let Some(t) = inst.target(v) {
            self.targets[i].set(t);
        }
    }

    /// Would coloring `v` with `color` complete a monochromatic solution?
    fn completes(&self, inst: &Instance, scratch: &mut Scratch, v: u64, color: Color) -> bool {
        let i = color.index();
        let table = &self.tables[i];
        let Scratch { prev, cur } = scratch;
        prev.copy_from(table.row(0));
        for j in 1..=table.depth() {
            cur.copy_from(table.row(j));
            cur.or_shifted(prev, v as usize);
            std::mem::swap(prev, cur);
        }
        prev.intersects(&self.targets[i]) || inst.target(v).is_some_and(|t| prev.get(t))
    }

    /// Forced-color propagation to fixpoint. `false` on conflict.
    fn propagate(&mut self, inst: &Instance, scratch: &mut Scratch) -> bool {
        loop {
            let mut changed = false;
            for v in self.next..=inst.n {
                if self.get(v).is_some() {
                    continue;
                }
                let red_bad = self.completes(inst, scratch, v, Color::Red);
                let blue_bad = self.completes(inst, scratch, v, Color::Blue);
                match (red_bad, blue_bad) {
                    (true, true) => return false,
                    (true, false) => self.assign(inst, v, Color::Blue),
                    (false, true) => self.assign(inst, v, Color::Red),
                    (false, false) => continue,
                }
                changed = true;
            }
            if !changed {
                return true;
            }
        }
    }

    fn advance(&mut self) -> Option<u64> {
        while (self.next as usize) <= self.colors.len() && self.get(self.next).is_some() {
            self.next += 1;
        }
        ((self.next as usize) <= self.colors.len()).then_some(self.next)
    }

    fn to_coloring(&self) -> Coloring {
        Coloring::from_fn(self.colors.len() as u64, |v| self.get(v).expect("complete"))
    }
}

/// Why a DFS stopped early.
#[derive(Debug)]
enum Stop {
    Budget(BudgetLimit),
    Cancelled,
}

/// Node accounting and budget enforcement for one worker.
struct Meter<'a> {
    nodes: u64,
    shared: &'a AtomicU64,
    max_nodes: u64,
    deadline: Instant,
    n: u64,
    observer: Option<Observer<'a>>,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl Meter<'_> {
    fn tick(&mut self, depth: u64) -> std::result::Result<(), Stop> {
        self.nodes += 1;
        let total = self.shared.fetch_add(1, Ordering::Relaxed) + 1;
        if total > self.max_nodes {
            return Err(Stop::Budget(BudgetLimit::Nodes));
        }
        if self.nodes.is_multiple_of(1024) {
            if Instant::now() >= self.deadline {
                return Err(Stop::Budget(BudgetLimit::WallClock));
            }
            if let Some((best, me)) = self.cancel {
                if best.load(Ordering::Relaxed) < me {
                    return Err(Stop::Cancelled);
                }
            }
        }
        if let Some(obs) = self.observer {
            if total.is_multiple_of(PROGRESS_EVERY) {
                obs(ProgressEvent { n: self.n, nodes: total, depth });
            }
        }
        Ok(())
    }
}

fn dfs(
    inst: &Instance,
    state: State,
    scratch: &mut Scratch,
    meter: &mut Meter<'_>,
) -> std::result::Result<Option<Coloring>, Stop> {
    let mut state = state;
    let Some(v) = state.advance() else {
        return Ok(Some(state.to_coloring()));
    };
    for color in Color::BOTH {
        meter.tick(state.depth + 1)?;
        let mut child = state.clone();
        child.depth += 1;
        child.assign(inst, v, color);
        if !child.propagate(inst, scratch) {
            continue;
        }
        if let Some(found) = dfs(inst, child, scratch, meter)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Root state with `1` fixed Red and propagation applied. `None` if even
/// that is impossible.
fn root(inst: &Instance, scratch: &mut Scratch) -> Option<State> {
    let mut state = State::new(inst);
    if state.completes(inst, scratch, 1, Color::Red) {
        return None;
    }
    state.assign(inst, 1, Color::Red);
    state.propagate(inst, scratch).then_some(state)
}

fn scratch_for(inst: &Instance) -> Scratch {
    Scratch {
        prev: BitRow::zeros(inst.width + 1),
        cur: BitRow::zeros(inst.width + 1),
    }
}

/// Search for a solution-free coloring of `[1, n]`.
pub fn find_valid_coloring(n: u64, params: &EquationParams, budget: &SearchBudget) -> SearchOutcome {
    find_valid_coloring_observed(n, params, budget, None, Instant::now() + budget.max_wall)
}

pub(crate) fn find_valid_coloring_observed(
    n: u64,
    params: &EquationParams,
    budget: &SearchBudget,
    observer: Option<Observer<'_>>,
    deadline: Instant,
) -> SearchOutcome {
    let inst = Instance::new(n, params);
    let mut scratch = scratch_for(&inst);
    let Some(start) = root(&inst, &mut scratch) else {
        return SearchOutcome::NoValidColoring { nodes: 0 };
    };
    let shared = AtomicU64::new(0);
    let threads = if par::parallel_enabled() { budget.threads.max(1) } else { 1 };
    let outcome = if threads == 1 {
        let mut meter = Meter {
            nodes: 0,
            shared: &shared,
            max_nodes: budget.max_nodes,
            deadline,
            n,
            observer,
            cancel: None,
        };
        match dfs(&inst, start, &mut scratch, &mut meter) {
            Ok(Some(x)) => SearchOutcome::ValidColoring(x),
            Ok(None) => SearchOutcome::NoValidColoring { nodes: meter.nodes },
            Err(Stop::Budget(limit)) => SearchOutcome::BudgetExhausted(Exhausted {
                n,
                limit,
                nodes: meter.nodes,
            }),
            Err(Stop::Cancelled) => unreachable!("sequential search is never cancelled"),
        }
    } else {
        split_search(&inst, start, &mut scratch, budget, threads, &shared, deadline, observer)
    };
    if let SearchOutcome::ValidColoring(x) = &outcome {
        debug_assert!(find_mono_solution(x, params).is_none());
    }
    outcome
}

/// A subtree root of the split search, in DFS order, with the number of
/// nodes the sequential DFS visits between the previous item and this one.
enum Item {
    Open(State),
    Solved(Coloring),
}

struct Frontier {
    items: Vec<(u64, Item)>,
    tail: u64,
}

fn expand(
    inst: &Instance,
    state: State,
    depth_left: u32,
    scratch: &mut Scratch,
    meter: &mut Meter<'_>,
    out: &mut Frontier,
    pending: &mut u64,
) -> std::result::Result<(), Stop> {
    let mut state = state;
    let Some(v) = state.advance() else {
        out.items.push((std::mem::take(pending), Item::Solved(state.to_coloring())));
        return Ok(());
    };
    if depth_left == 0 {
        out.items.push((std::mem::take(pending), Item::Open(state)));
        return Ok(());
    }
    for color in Color::BOTH {
        meter.tick(state.depth + 1)?;
        *pending += 1;
        let mut child = state.clone();
        child.depth += 1;
        child.assign(inst, v, color);
        if !child.propagate(inst, scratch) {
            continue;
        }
        expand(inst, child, depth_left - 1, scratch, meter, out, pending)?;
    }
    Ok(())
}

enum SubResult {
    Found(Coloring, u64),
    Empty(u64),
    Stopped(Stop, u64),
}

#[allow(clippy::too_many_arguments)]
fn split_search(
    inst: &Instance,
    start: State,
    scratch: &mut Scratch,
    budget: &SearchBudget,
    threads: usize,
    shared: &AtomicU64,
    deadline: Instant,
    observer: Option<Observer<'_>>,
) -> SearchOutcome {
    let split_depth = (threads * 16).next_power_of_two().trailing_zeros();
    let mut frontier = Frontier { items: Vec::new(), tail: 0 };
    let mut pending = 0;
    let mut meter = Meter {
        nodes: 0,
        shared,
        max_nodes: budget.max_nodes,
        deadline,
        n: inst.n,
        observer,
        cancel: None,
    };
    if let Err(stop) = expand(inst, start, split_depth, scratch, &mut meter, &mut frontier, &mut pending) {
        let Stop::Budget(limit) = stop else { unreachable!() };
        return SearchOutcome::BudgetExhausted(Exhausted { n: inst.n, limit, nodes: meter.nodes });
    }
    frontier.tail = pending;

    let best = AtomicUsize::new(usize::MAX);
    let indexed: Vec<(usize, &Item)> = frontier.items.iter().map(|(_, it)| it).enumerate().collect();
    let results = par::map_ordered(&indexed, threads, |&(i, item)| {
        if best.load(Ordering::Relaxed) < i {
            return SubResult::Stopped(Stop::Cancelled, 0);
        }
        match item {
            Item::Solved(x) => {
                best.fetch_min(i, Ordering::Relaxed);
                SubResult::Found(x.clone(), 0)
            }
            Item::Open(state) => {
                let mut scratch = scratch_for(inst);
                let mut meter = Meter {
                    nodes: 0,
                    shared,
                    max_nodes: budget.max_nodes,
                    deadline,
                    n: inst.n,
                    observer,
                    cancel: Some((&best, i)),
                };
                match dfs(inst, state.clone(), &mut scratch, &mut meter) {
                    Ok(Some(x)) => {
                        best.fetch_min(i, Ordering::Relaxed);
                        SubResult::Found(x, meter.nodes)
                    }
                    Ok(None) => SubResult::Empty(meter.nodes),
                    Err(stop) => SubResult::Stopped(stop, meter.nodes),
                }
            }
        }
    });

    let mut total = 0u64;
    for ((pre, _), result) in frontier.items.iter().zip(results) {
        total += pre;
        match result {
            SubResult::Found(x, nodes) => {
                let _ = total + nodes;
                return SearchOutcome::ValidColoring(x);
            }
            SubResult::Empty(nodes) => total += nodes,
            SubResult::Stopped(Stop::Budget(limit), nodes) => {
                return SearchOutcome::BudgetExhausted(Exhausted {
                    n: inst.n,
                    limit,
                    nodes: total + nodes,
                });
            }
            SubResult::Stopped(Stop::Cancelled, _) => {
                unreachable!("only subtrees after a found coloring are cancelled")
            }
        }
    }
    SearchOutcome::NoValidColoring { nodes: total + frontier.tail }
}

/// Full record of an upward scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteReport {
    pub params: EquationParams,
    pub value: RadoValue,
    /// A valid coloring of `[1, R-1]` when finite, else the largest valid
    /// coloring reached.
    pub certificate: Option<Coloring>,
    /// Nodes of the exhaustive search that refuted `[1, R]`.
    pub refutation_nodes: u64,
    /// Nodes over every size scanned.
    pub total_nodes: u64,
    pub exhausted: Option<Exhausted>,
}

/// Least `n` with no valid coloring of `[1, n]`, scanning `n = 1, 2, ...`.
pub fn rado_brute(params: &EquationParams, budget: &SearchBudget) -> RadoValue {
    rado_brute_report(params, budget, None).value
}

pub fn rado_brute_report(
    params: &EquationParams,
    budget: &SearchBudget,
    observer: Option<Observer<'_>>,
) -> BruteReport {
    let deadline = Instant::now() + budget.max_wall;
    let mut report = BruteReport {
        params: *params,
        value: RadoValue::UnknownAbove(budget.max_n),
        certificate: None,
        refutation_nodes: 0,
        total_nodes: 0,
        exhausted: None,
    };
    let mut last_valid = Coloring::uniform(0, Color::Red);
    for n in 1..=budget.max_n {
        // A valid coloring of [1, n-1] that extends is enough; it never
        // replaces the exhaustive search that proves a failure.
        let extension = Color::BOTH
            .into_iter()
            .map(|c| last_valid.extended(c))
            .find(|x| find_mono_solution(x, params).is_none());
        if let Some(x) = extension {
            last_valid = x;
            continue;
        }
        let mut remaining = budget.clone();
        remaining.max_nodes = budget.max_nodes.saturating_sub(report.total_nodes).max(1);
        match find_valid_coloring_observed(n, params, &remaining, observer, deadline) {
            SearchOutcome::ValidColoring(x) => last_valid = x,
            SearchOutcome::NoValidColoring { nodes } => {
                report.total_nodes += nodes;
                report.refutation_nodes = nodes;
                report.value = RadoValue::Finite(n);
                report.certificate = Some(last_valid);
                return report;
            }
            SearchOutcome::BudgetExhausted(ex) => {
                report.total_nodes += ex.nodes;
                report.value = RadoValue::UnknownAbove(n - 1);
                report.exhausted = Some(ex);
                report.certificate = Some(last_valid);
                return report;
            }
        }
    }
    report.certificate = Some(last_valid);
    report
}

/// Upward scan for `x1 + ... + xm + c = 2*x0` with `-m < c < 0`.
pub fn explore_negative_c(m: u32, c: i64, budget: &SearchBudget) -> Result<BruteReport> {
    if c >= 0 {
        return domain(format!("exploration mode is for c < 0, got c={c}"));
    }
    if c <= -(m as i64) {
        return domain(format!("need c > -m, got m={m}, c={c}"));
    }
    let params = EquationParams::with_two(m, c)?;
    Ok(rado_brute_report(&params, budget, None))
}
