//! Predicate dependency graph, tightness and private recursion.

use std::fmt::Write as _;

use indexmap::{IndexMap, IndexSet};
use serde::Serialize;

use crate::{
    completion::IoProgram,
    error::CompletionError,
    syntax::{BodyItem, Head, Negation, PredicateSymbol, Program},
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: PredicateSymbol,
    pub to: PredicateSymbol,
    pub positive: bool,
}

#[derive(Clone, Debug, Default)]
pub struct DependencyGraph {
    vertices: IndexSet<PredicateSymbol>,
    edges: IndexMap<(PredicateSymbol, PredicateSymbol), bool>,
}

impl DependencyGraph {
    pub fn of(program: &Program) -> Self {
        let mut graph = DependencyGraph {
            vertices: program.predicates(),
            edges: IndexMap::new(),
        };
        for rule in &program.rules {
            let head = match &rule.head {
                Head::Basic(atom) | Head::Choice(atom) => atom.symbol(),
                Head::Empty => continue,
            };
            for item in &rule.body {
                let BodyItem::Literal(literal) = item else {
                    continue;
                };
                let positive = literal.negation == Negation::None;
                let entry = graph
                    .edges
                    .entry((head.clone(), literal.atom.symbol()))
                    .or_insert(false);
                *entry |= positive;
            }
        }
        graph
    }

    pub fn vertices(&self) -> impl Iterator<Item = &PredicateSymbol> {
        self.vertices.iter()
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.edges
            .iter()
            .map(|((from, to), positive)| Edge {
                from: from.clone(),
                to: to.clone(),
                positive: *positive,
            })
            .collect()
    }

    pub fn has_edge(&self, from: &PredicateSymbol, to: &PredicateSymbol) -> Option<bool> {
        self.edges.get(&(from.clone(), to.clone())).copied()
    }

    fn successors<'a>(
        &'a self,
        vertex: &'a PredicateSymbol,
        positive_only: bool,
    ) -> impl Iterator<Item = &'a PredicateSymbol> + 'a {
        self.edges
            .iter()
            .filter(move |((from, _), positive)| from == vertex && (**positive || !positive_only))
            .map(|((_, to), _)| to)
    }

    /// A cycle in the subgraph induced by `allowed`, following only positive
    /// edges if requested. The cycle is listed in edge order.
    fn find_cycle(
        &self,
        allowed: &dyn Fn(&PredicateSymbol) -> bool,
        positive_only: bool,
    ) -> Option<Vec<PredicateSymbol>> {
        #[derive(Clone, Copy, PartialEq)]
        enum State {
            Unvisited,
            Active,
            Done,
        }
        let mut state: IndexMap<&PredicateSymbol, State> = self
            .vertices
            .iter()
            .filter(|v| allowed(v))
            .map(|v| (v, State::Unvisited))
            .collect();
        let roots: Vec<&PredicateSymbol> = state.keys().copied().collect();
        for root in roots {
            if state[root] != State::Unvisited {
                continue;
            }
            // iterative depth-first search keeping the active path
            let mut path: Vec<&PredicateSymbol> = vec![root];
            let mut stack: Vec<Vec<&PredicateSymbol>> = vec![self
                .successors(root, positive_only)
                .filter(|s| allowed(s))
                .collect()];
            state.insert(root, State::Active);
            while let Some(pending) = stack.last_mut() {
                match pending.pop() {
                    Some(next) => match state.get(next).copied() {
                        Some(State::Active) => {
                            let start = path.iter().position(|v| *v == next).unwrap();
                            return Some(path[start..].iter().map(|v| (*v).clone()).collect());
                        }
                        Some(State::Unvisited) => {
                            state.insert(next, State::Active);
                            path.push(next);
                            stack.push(
                                self.successors(next, positive_only)
                                    .filter(|s| allowed(s))
                                    .collect(),
                            );
                        }
                        _ => {}
                    },
                    None => {
                        let finished = path.pop().unwrap();
                        state.insert(finished, State::Done);
                        stack.pop();
                    }
                }
            }
        }
        None
    }

    /// A cycle consisting of positive edges, if any.
    pub fn positive_cycle(&self) -> Option<Vec<PredicateSymbol>> {
        self.find_cycle(&|_| true, true)
    }

    /// Graphviz rendering; positive edges are solid, others dashed.
    pub fn to_dot(&self, private: &dyn Fn(&PredicateSymbol) -> bool) -> String {
        let mut out = String::from("digraph dependencies {\n");
        for vertex in &self.vertices {
            let shape = if private(vertex) { "ellipse" } else { "box" };
            let _ = writeln!(out, "  \"{vertex}\" [shape={shape}];");
        }
        for ((from, to), positive) in &self.edges {
            let style = if *positive { "solid" } else { "dashed" };
            let _ = writeln!(out, "  \"{from}\" -> \"{to}\" [style={style}];");
        }
        out.push_str("}\n");
        out
    }
}

/// Why an io-program uses private recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrivateRecursion {
    Cycle(Vec<PredicateSymbol>),
    Choice(PredicateSymbol),
}

impl std::fmt::Display for PrivateRecursion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrivateRecursion::Cycle(cycle) => {
                let names: Vec<String> = cycle.iter().map(ToString::to_string).collect();
                write!(f, "cycle of private symbols {}", names.join(" -> "))
            }
            PrivateRecursion::Choice(symbol) => {
                write!(f, "choice rule with private symbol {symbol} in the head")
            }
        }
    }
}

pub fn dependency_graph(io: &IoProgram) -> DependencyGraph {
    DependencyGraph::of(&io.program)
}

pub fn positive_cycle(io: &IoProgram) -> Option<Vec<PredicateSymbol>> {
    dependency_graph(io).positive_cycle()
}

pub fn is_tight(io: &IoProgram) -> bool {
    positive_cycle(io).is_none()
}

pub fn private_recursion(io: &IoProgram) -> Option<PrivateRecursion> {
    for rule in &io.program.rules {
        if let Head::Choice(atom) = &rule.head {
            let symbol = atom.symbol();
            if io.is_private(&symbol) {
                return Some(PrivateRecursion::Choice(symbol));
            }
        }
    }
    dependency_graph(io)
        .find_cycle(&|p| io.is_private(p), false)
        .map(PrivateRecursion::Cycle)
}

pub fn uses_private_recursion(io: &IoProgram) -> bool {
    private_recursion(io).is_some()
}

/// Orders the private symbols so that each depends only on public symbols
/// and on private symbols listed before it; ties follow first occurrence.
pub fn topological_private_order(io: &IoProgram) -> Result<Vec<PredicateSymbol>, CompletionError> {
    if let Some(reason) = private_recursion(io) {
        return Err(CompletionError::PrivateRecursion(reason.to_string()));
    }
    let graph = dependency_graph(io);
    let private = io.private_symbols();
    let mut placed: Vec<PredicateSymbol> = Vec::new();
    while placed.len() < private.len() {
        let next = private
            .iter()
            .find(|p| {
                !placed.contains(p)
                    && graph
                        .successors(p, false)
                        .all(|q| !io.is_private(q) || placed.contains(q))
            })
            .expect("an acyclic private subgraph has a source")
            .clone();
        placed.push(next);
    }
    Ok(placed)
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub tight: bool,
    pub positive_cycle: Option<Vec<PredicateSymbol>>,
    pub private_recursion: Option<PrivateRecursion>,
    pub private_symbols: Vec<PredicateSymbol>,
    pub edges: Vec<Edge>,
}

pub fn analyze(io: &IoProgram) -> AnalysisReport {
    let graph = dependency_graph(io);
    let positive_cycle = graph.positive_cycle();
    AnalysisReport {
        tight: positive_cycle.is_none(),
        positive_cycle,
        private_recursion: private_recursion(io),
        private_symbols: io.private_symbols().into_iter().collect(),
        edges: graph.edges(),
    }
}
