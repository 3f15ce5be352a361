//! Propositional formulas over precomputed atoms, SAT encoding and
//! stable models in the sense of Ferraris.

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexSet;
use serde::Serialize;
use varisat::{ExtendFormula, Lit, Solver};

use crate::{error::OracleError, syntax::Precomputed};

/// A precomputed atom `p(r1, …, rn)`; the predicate may also name a predicate variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub arguments: Vec<Precomputed>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, arguments: Vec<Precomputed>) -> Self {
        Self {
            predicate: predicate.into(),
            arguments,
        }
    }

    pub fn symbol(&self) -> crate::syntax::PredicateSymbol {
        crate::syntax::PredicateSymbol::new(self.predicate.clone(), self.arguments.len())
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.arguments.is_empty() {
            let arguments: Vec<String> = self.arguments.iter().map(ToString::to_string).collect();
            write!(f, "({})", arguments.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for GroundAtom {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A set of precomputed atoms, ordered for deterministic output.
pub type AtomSet = BTreeSet<GroundAtom>;

/// A propositional combination of atoms, which are indices into an [`AtomTable`].
///
/// The empty conjunction is `⊤`. The constructors fold `⊤` and `⊥` using
/// intuitionistically valid equivalences, which preserve stable models.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroundFormula {
    Bottom,
    Atom(usize),
    And(Vec<GroundFormula>),
    Or(Vec<GroundFormula>),
    Implies(Box<GroundFormula>, Box<GroundFormula>),
}

impl GroundFormula {
    pub fn top() -> Self {
        GroundFormula::And(Vec::new())
    }

    pub fn is_top(&self) -> bool {
        matches!(self, GroundFormula::And(parts) if parts.is_empty())
    }

    pub fn constant(value: bool) -> Self {
        if value {
            Self::top()
        } else {
            GroundFormula::Bottom
        }
    }

    pub fn conjunction(parts: impl IntoIterator<Item = GroundFormula>) -> Self {
        let mut out = Vec::new();
        for part in parts {
            match part {
                GroundFormula::Bottom => return GroundFormula::Bottom,
                GroundFormula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            GroundFormula::And(out)
        }
    }

    pub fn disjunction(parts: impl IntoIterator<Item = GroundFormula>) -> Self {
        let mut out = Vec::new();
        for part in parts {
            match part {
                GroundFormula::Bottom => {}
                part if part.is_top() => return Self::top(),
                GroundFormula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => GroundFormula::Bottom,
            1 => out.pop().unwrap(),
            _ => GroundFormula::Or(out),
        }
    }

    pub fn implies(antecedent: GroundFormula, consequent: GroundFormula) -> Self {
        if antecedent == GroundFormula::Bottom || consequent.is_top() {
            Self::top()
        } else if antecedent.is_top() {
            consequent
        } else {
            GroundFormula::Implies(Box::new(antecedent), Box::new(consequent))
        }
    }

    pub fn not(formula: GroundFormula) -> Self {
        Self::implies(formula, GroundFormula::Bottom)
    }

    pub fn iff(a: GroundFormula, b: GroundFormula) -> Self {
        Self::conjunction([Self::implies(a.clone(), b.clone()), Self::implies(b, a)])
    }

    /// Classical truth value under the model given by `holds`.
    pub fn eval(&self, holds: &dyn Fn(usize) -> bool) -> bool {
        match self {
            GroundFormula::Bottom => false,
            GroundFormula::Atom(a) => holds(*a),
            GroundFormula::And(parts) => parts.iter().all(|p| p.eval(holds)),
            GroundFormula::Or(parts) => parts.iter().any(|p| p.eval(holds)),
            GroundFormula::Implies(a, b) => !a.eval(holds) || b.eval(holds),
        }
    }

    /// Whether `y` satisfies the reduct of the formula with respect to `x`.
    pub fn satisfies_reduct(&self, x: &[bool], y: &[bool]) -> bool {
        if !self.eval(&|a| x[a]) {
            return false;
        }
        match self {
            GroundFormula::Bottom => false,
            GroundFormula::Atom(a) => y[*a],
            GroundFormula::And(parts) => parts.iter().all(|p| p.satisfies_reduct(x, y)),
            GroundFormula::Or(parts) => parts.iter().any(|p| p.satisfies_reduct(x, y)),
            GroundFormula::Implies(a, b) => !a.satisfies_reduct(x, y) || b.satisfies_reduct(x, y),
        }
    }

    /// The reduct with respect to `x`: maximal subformulas false in `x` become `⊥`.
    pub fn reduct(&self, x: &[bool]) -> GroundFormula {
        if !self.eval(&|a| x[a]) {
            return GroundFormula::Bottom;
        }
        match self {
            GroundFormula::Bottom | GroundFormula::Atom(_) => self.clone(),
            GroundFormula::And(parts) => Self::conjunction(parts.iter().map(|p| p.reduct(x))),
            GroundFormula::Or(parts) => Self::disjunction(parts.iter().map(|p| p.reduct(x))),
            GroundFormula::Implies(a, b) => Self::implies(a.reduct(x), b.reduct(x)),
        }
    }

    pub fn atoms(&self, into: &mut BTreeSet<usize>) {
        match self {
            GroundFormula::Bottom => {}
            GroundFormula::Atom(a) => {
                into.insert(*a);
            }
            GroundFormula::And(parts) | GroundFormula::Or(parts) => {
                parts.iter().for_each(|p| p.atoms(into));
            }
            GroundFormula::Implies(a, b) => {
                a.atoms(into);
                b.atoms(into);
            }
        }
    }

    /// Atoms occurring outside antecedents of implications. No other atom
    /// belongs to a stable model of a theory containing the formula.
    fn head_atoms(&self, into: &mut BTreeSet<usize>) {
        match self {
            GroundFormula::Bottom => {}
            GroundFormula::Atom(a) => {
                into.insert(*a);
            }
            GroundFormula::And(parts) | GroundFormula::Or(parts) => {
                parts.iter().for_each(|p| p.head_atoms(into));
            }
            GroundFormula::Implies(_, b) => b.head_atoms(into),
        }
    }

    /// Replaces atoms by formulas, folding constants.
    pub fn map_atoms(&self, f: &dyn Fn(usize) -> GroundFormula) -> GroundFormula {
        match self {
            GroundFormula::Bottom => GroundFormula::Bottom,
            GroundFormula::Atom(a) => f(*a),
            GroundFormula::And(parts) => Self::conjunction(parts.iter().map(|p| p.map_atoms(f))),
            GroundFormula::Or(parts) => Self::disjunction(parts.iter().map(|p| p.map_atoms(f))),
            GroundFormula::Implies(a, b) => Self::implies(a.map_atoms(f), b.map_atoms(f)),
        }
    }

    pub fn display<'a>(&'a self, atoms: &'a AtomTable) -> impl fmt::Display + 'a {
        DisplayGround {
            formula: self,
            atoms,
        }
    }
}

struct DisplayGround<'a> {
    formula: &'a GroundFormula,
    atoms: &'a AtomTable,
}

impl fmt::Display for DisplayGround<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |formula| DisplayGround {
            formula,
            atoms: self.atoms,
        };
        match self.formula {
            GroundFormula::Bottom => f.write_str("#false"),
            GroundFormula::Atom(a) => write!(f, "{}", self.atoms.get(*a)),
            GroundFormula::And(parts) if parts.is_empty() => f.write_str("#true"),
            GroundFormula::And(parts) | GroundFormula::Or(parts) => {
                let connective = if matches!(self.formula, GroundFormula::And(_)) {
                    " and "
                } else {
                    " or "
                };
                f.write_str("(")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(connective)?;
                    }
                    write!(f, "{}", sub(part))?;
                }
                f.write_str(")")
            }
            GroundFormula::Implies(a, b) if **b == GroundFormula::Bottom => {
                write!(f, "not {}", sub(a))
            }
            GroundFormula::Implies(a, b) => write!(f, "({} -> {})", sub(a), sub(b)),
        }
    }
}

/// Interned ground atoms.
#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    atoms: IndexSet<GroundAtom>,
}

impl AtomTable {
    pub fn intern(&mut self, atom: GroundAtom) -> usize {
        self.atoms.insert_full(atom).0
    }

    pub fn index(&self, atom: &GroundAtom) -> Option<usize> {
        self.atoms.get_index_of(atom)
    }

    pub fn get(&self, index: usize) -> &GroundAtom {
        &self.atoms[index]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundAtom> {
        self.atoms.iter()
    }
}

/// A finite set of ground formulas with their atom table.
#[derive(Clone, Debug, Default)]
pub struct GroundTheory {
    pub atoms: AtomTable,
    pub formulas: Vec<GroundFormula>,
}

impl GroundTheory {
    pub fn conjunction(&self) -> GroundFormula {
        GroundFormula::conjunction(self.formulas.iter().cloned())
    }

    fn to_set(&self, model: &[bool]) -> AtomSet {
        model
            .iter()
            .enumerate()
            .filter(|(_, v)| **v)
            .map(|(i, _)| self.atoms.get(i).clone())
            .collect()
    }
}

/// Tseitin encoding of ground formulas into a SAT solver.
pub struct Encoder {
    pub solver: Solver<'static>,
    atoms: Vec<Lit>,
    truth: Lit,
}

impl Encoder {
    pub fn new(atom_count: usize) -> Self {
        let mut solver = Solver::new();
        let atoms = (0..atom_count).map(|_| solver.new_lit()).collect();
        let truth = solver.new_lit();
        solver.add_clause(&[truth]);
        Self {
            solver,
            atoms,
            truth,
        }
    }

    pub fn atom(&self, index: usize) -> Lit {
        self.atoms[index]
    }

    /// A literal equivalent to the formula.
    pub fn encode(&mut self, formula: &GroundFormula) -> Lit {
        match formula {
            GroundFormula::Bottom => !self.truth,
            GroundFormula::Atom(a) => self.atoms[*a],
            GroundFormula::And(parts) if parts.is_empty() => self.truth,
            GroundFormula::And(parts) | GroundFormula::Or(parts) => {
                let conjunction = matches!(formula, GroundFormula::And(_));
                let lits: Vec<Lit> = parts.iter().map(|p| self.encode(p)).collect();
                let t = self.solver.new_lit();
                if conjunction {
                    for &l in &lits {
                        self.solver.add_clause(&[!t, l]);
                    }
                    let mut clause: Vec<Lit> = lits.iter().map(|l| !*l).collect();
                    clause.push(t);
                    self.solver.add_clause(&clause);
                } else {
                    for &l in &lits {
                        self.solver.add_clause(&[t, !l]);
                    }
                    let mut clause = lits.clone();
                    clause.push(!t);
                    self.solver.add_clause(&clause);
                }
                t
            }
            GroundFormula::Implies(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let t = self.solver.new_lit();
                self.solver.add_clause(&[!t, !a, b]);
                self.solver.add_clause(&[t, a]);
                self.solver.add_clause(&[t, !b]);
                t
            }
        }
    }

    pub fn assert(&mut self, formula: &GroundFormula) {
        let lit = self.encode(formula);
        self.solver.add_clause(&[lit]);
    }

    pub fn solve(&mut self) -> bool {
        self.solver
            .solve()
            .expect("the solver runs without proof output")
    }

    /// Values of the atoms in the last model.
    pub fn model(&self) -> Vec<bool> {
        let model = self
            .solver
            .model()
            .expect("a model after a satisfiable call");
        let mut values = vec![false; model.len() + 1];
        for lit in model {
            values[lit.index()] = lit.is_positive();
        }
        self.atoms.iter().map(|l| values[l.index()]).collect()
    }
}

/// Whether the formula is classically satisfiable.
pub fn satisfiable(formula: &GroundFormula, atom_count: usize) -> bool {
    match formula {
        GroundFormula::Bottom => false,
        f if f.is_top() => true,
        f => {
            let mut encoder = Encoder::new(atom_count);
            encoder.assert(f);
            encoder.solve()
        }
    }
}

/// Default bound on the number of atoms that may belong to a stable model.
pub const MAX_STABLE_MODEL_ATOMS: usize = 24;

/// Removes atoms that cannot belong to any stable model, repeating until no
/// more can be removed. Returns the simplified formulas.
fn prune(theory: &GroundTheory) -> Vec<GroundFormula> {
    let mut formulas = theory.formulas.clone();
    loop {
        let mut heads = BTreeSet::new();
        let mut all = BTreeSet::new();
        for f in &formulas {
            f.head_atoms(&mut heads);
            f.atoms(&mut all);
        }
        if all.iter().all(|a| heads.contains(a)) {
            return formulas;
        }
        formulas = formulas
            .iter()
            .map(|f| {
                f.map_atoms(&|a| {
                    if heads.contains(&a) {
                        GroundFormula::Atom(a)
                    } else {
                        GroundFormula::Bottom
                    }
                })
            })
            .filter(|f| !f.is_top())
            .collect();
    }
}

/// Stable models of a ground theory: models `X` that are minimal models of
/// the reduct of the theory with respect to `X`.
///
/// Classical models are enumerated with a SAT solver; minimality is a second
/// SAT call on the reduct restricted to proper subsets of `X`.
pub fn stable_models_of(
    theory: &GroundTheory,
    max_atoms: usize,
) -> Result<BTreeSet<AtomSet>, OracleError> {
    let formulas = prune(theory);
    let mut relevant = BTreeSet::new();
    formulas.iter().for_each(|f| f.atoms(&mut relevant));
    if relevant.len() > max_atoms {
        return Err(OracleError::CapExceeded {
            what: "stable model enumeration".into(),
            required: relevant.len() as u128,
            cap: max_atoms as u128,
        });
    }
    let theory_formula = GroundFormula::conjunction(formulas);
    let n = theory.atoms.len();
    let mut models = BTreeSet::new();
    let mut encoder = Encoder::new(n);
    encoder.assert(&theory_formula);
    for a in 0..n {
        if !relevant.contains(&a) {
            let lit = encoder.atom(a);
            encoder.solver.add_clause(&[!lit]);
        }
    }
    while encoder.solve() {
        let x = encoder.model();
        if is_minimal(&theory_formula, &x) {
            models.insert(theory.to_set(&x));
        }
        let blocking: Vec<Lit> = relevant
            .iter()
            .map(|&a| {
                let lit = encoder.atom(a);
                if x[a] {
                    !lit
                } else {
                    lit
                }
            })
            .collect();
        if blocking.is_empty() {
            break;
        }
        encoder.solver.add_clause(&blocking);
    }
    Ok(models)
}

/// Whether no proper subset of `x` satisfies the reduct with respect to `x`.
fn is_minimal(formula: &GroundFormula, x: &[bool]) -> bool {
    let reduct = formula.reduct(x);
    let mut encoder = Encoder::new(x.len());
    encoder.assert(&reduct);
    let mut smaller = Vec::new();
    for (a, &value) in x.iter().enumerate() {
        let lit = encoder.atom(a);
        if value {
            smaller.push(!lit);
        } else {
            encoder.solver.add_clause(&[!lit]);
        }
    }
    if smaller.is_empty() {
        return true;
    }
    encoder.solver.add_clause(&smaller);
    !encoder.solve()
}

/// Stable models by exhaustive enumeration of candidates and subsets,
/// directly from the definition. Intended for cross-checking small theories.
pub fn stable_models_brute_force(
    theory: &GroundTheory,
    max_atoms: usize,
) -> Result<BTreeSet<AtomSet>, OracleError> {
    let n = theory.atoms.len();
    if n > max_atoms {
        return Err(OracleError::CapExceeded {
            what: "brute-force stable model enumeration".into(),
            required: n as u128,
            cap: max_atoms as u128,
        });
    }
    let formula = theory.conjunction();
    let bits = |mask: u64| -> Vec<bool> { (0..n).map(|i| mask >> i & 1 == 1).collect() };
    let mut models = BTreeSet::new();
    for mask in 0..1u64 << n {
        let x = bits(mask);
        if !formula.eval(&|a| x[a]) {
            continue;
        }
        // proper subsets of `mask`
        let mut sub = mask;
        let mut minimal = true;
        while sub != 0 {
            sub = (sub - 1) & mask;
            if formula.satisfies_reduct(&x, &bits(sub)) {
                minimal = false;
                break;
            }
        }
        if minimal {
            models.insert(theory.to_set(&x));
        }
    }
    Ok(models)
}
