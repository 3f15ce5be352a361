//! Abstract syntax of mini-gringo programs: basic rules, choice rules and
//! constraints over arithmetic terms and intervals.

use std::{cmp::Ordering, fmt};

use indexmap::IndexSet;
use serde::Serialize;

use crate::{
    error::{LogicError, ParseError},
    lexer::{end_location, tokenize, Cursor, Token},
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOperator {
    Add,
    Subtract,
    Multiply,
    Divide,
    Modulo,
    Interval,
}

impl BinaryOperator {
    fn precedence(self) -> u8 {
        match self {
            BinaryOperator::Interval => 0,
            BinaryOperator::Add | BinaryOperator::Subtract => 1,
            BinaryOperator::Multiply | BinaryOperator::Divide | BinaryOperator::Modulo => 2,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinaryOperator::Add => "+",
            BinaryOperator::Subtract => "-",
            BinaryOperator::Multiply => "*",
            BinaryOperator::Divide => "/",
            BinaryOperator::Modulo => "\\",
            BinaryOperator::Interval => "..",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProgramTerm {
    Numeral(i64),
    SymbolicConstant(String),
    Variable(String),
    Infimum,
    Supremum,
    BinaryOperation {
        op: BinaryOperator,
        left: Box<ProgramTerm>,
        right: Box<ProgramTerm>,
    },
}

impl ProgramTerm {
    pub fn binary(op: BinaryOperator, left: ProgramTerm, right: ProgramTerm) -> Self {
        ProgramTerm::BinaryOperation {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// `-t`, stored as `0 - t`.
    pub fn negate(term: ProgramTerm) -> Self {
        Self::binary(BinaryOperator::Subtract, ProgramTerm::Numeral(0), term)
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        ProgramTerm::SymbolicConstant(name.into())
    }

    pub fn variable(name: impl Into<String>) -> Self {
        ProgramTerm::Variable(name.into())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            ProgramTerm::Variable(_) => false,
            ProgramTerm::BinaryOperation { left, right, .. } => {
                left.is_ground() && right.is_ground()
            }
            _ => true,
        }
    }

    pub fn is_precomputed(&self) -> bool {
        self.as_precomputed().is_some()
    }

    pub fn as_precomputed(&self) -> Option<Precomputed> {
        match self {
            ProgramTerm::Numeral(n) => Some(Precomputed::Numeral(*n)),
            ProgramTerm::SymbolicConstant(c) => Some(Precomputed::Symbol(c.clone())),
            ProgramTerm::Infimum => Some(Precomputed::Infimum),
            ProgramTerm::Supremum => Some(Precomputed::Supremum),
            ProgramTerm::Variable(_) | ProgramTerm::BinaryOperation { .. } => None,
        }
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self, into: &mut IndexSet<String>) {
        match self {
            ProgramTerm::Variable(name) => {
                into.insert(name.clone());
            }
            ProgramTerm::BinaryOperation { left, right, .. } => {
                left.variables(into);
                right.variables(into);
            }
            _ => {}
        }
    }

    pub fn symbolic_constants(&self, into: &mut IndexSet<String>) {
        match self {
            ProgramTerm::SymbolicConstant(name) => {
                into.insert(name.clone());
            }
            ProgramTerm::BinaryOperation { left, right, .. } => {
                left.symbolic_constants(into);
                right.symbolic_constants(into);
            }
            _ => {}
        }
    }

    pub fn numerals(&self, into: &mut Vec<i64>) {
        match self {
            ProgramTerm::Numeral(n) => into.push(*n),
            ProgramTerm::BinaryOperation { left, right, .. } => {
                left.numerals(into);
                right.numerals(into);
            }
            _ => {}
        }
    }

    /// Replaces symbolic constants according to `lookup`.
    pub fn replace_constants(&self, lookup: &dyn Fn(&str) -> Option<ProgramTerm>) -> ProgramTerm {
        match self {
            ProgramTerm::SymbolicConstant(name) => lookup(name).unwrap_or_else(|| self.clone()),
            ProgramTerm::BinaryOperation { op, left, right } => ProgramTerm::binary(
                *op,
                left.replace_constants(lookup),
                right.replace_constants(lookup),
            ),
            _ => self.clone(),
        }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, spaced: bool) -> fmt::Result {
        match self {
            ProgramTerm::Numeral(n) => write!(f, "{n}"),
            ProgramTerm::SymbolicConstant(name) | ProgramTerm::Variable(name) => f.write_str(name),
            ProgramTerm::Infimum => f.write_str("#inf"),
            ProgramTerm::Supremum => f.write_str("#sup"),
            ProgramTerm::BinaryOperation {
                op: BinaryOperator::Subtract,
                left,
                right,
            } if **left == ProgramTerm::Numeral(0)
                && !matches!(**right, ProgramTerm::Numeral(_)) =>
            {
                f.write_str("-")?;
                if right.is_atomic() {
                    right.fmt_with(f, spaced)
                } else {
                    f.write_str("(")?;
                    right.fmt_with(f, spaced)?;
                    f.write_str(")")
                }
            }
            ProgramTerm::BinaryOperation { op, left, right } => {
                let precedence = op.precedence();
                let left_needs_parens = match &**left {
                    ProgramTerm::BinaryOperation { op: inner, .. } => {
                        inner.precedence() < precedence
                            || (*op == BinaryOperator::Interval
                                && *inner == BinaryOperator::Interval)
                    }
                    _ => false,
                };
                let right_needs_parens = match &**right {
                    ProgramTerm::BinaryOperation { op: inner, .. } => {
                        inner.precedence() <= precedence
                    }
                    _ => false,
                };
                write_parenthesized(f, left, left_needs_parens, spaced)?;
                if spaced {
                    write!(f, " {} ", op.symbol())?;
                } else {
                    f.write_str(op.symbol())?;
                }
                write_parenthesized(f, right, right_needs_parens, spaced)
            }
        }
    }

    fn is_atomic(&self) -> bool {
        !matches!(self, ProgramTerm::BinaryOperation { .. })
    }
}

fn write_parenthesized(
    f: &mut fmt::Formatter<'_>,
    term: &ProgramTerm,
    parens: bool,
    spaced: bool,
) -> fmt::Result {
    if parens {
        f.write_str("(")?;
        term.fmt_with(f, spaced)?;
        f.write_str(")")
    } else {
        term.fmt_with(f, spaced)
    }
}

impl fmt::Display for ProgramTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

/// A precomputed term: numeral, symbolic constant, `#inf` or `#sup`.
///
/// The `Ord` instance is the total order on precomputed terms: `#inf` is
/// least, `#sup` greatest, numerals are ordered as integers and precede all
/// symbolic constants, which are ordered lexicographically by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Precomputed {
    Infimum,
    Numeral(i64),
    Symbol(String),
    Supremum,
}

impl Precomputed {
    fn rank(&self) -> u8 {
        match self {
            Precomputed::Infimum => 0,
            Precomputed::Numeral(_) => 1,
            Precomputed::Symbol(_) => 2,
            Precomputed::Supremum => 3,
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Precomputed::Numeral(n) => Some(*n),
            _ => None,
        }
    }

    pub fn to_term(&self) -> ProgramTerm {
        match self {
            Precomputed::Infimum => ProgramTerm::Infimum,
            Precomputed::Numeral(n) => ProgramTerm::Numeral(*n),
            Precomputed::Symbol(s) => ProgramTerm::SymbolicConstant(s.clone()),
            Precomputed::Supremum => ProgramTerm::Supremum,
        }
    }
}

impl Ord for Precomputed {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Precomputed::Numeral(a), Precomputed::Numeral(b)) => a.cmp(b),
            (Precomputed::Symbol(a), Precomputed::Symbol(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Precomputed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Precomputed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precomputed::Infimum => f.write_str("#inf"),
            Precomputed::Numeral(n) => write!(f, "{n}"),
            Precomputed::Symbol(s) => f.write_str(s),
            Precomputed::Supremum => f.write_str("#sup"),
        }
    }
}

/// Compares two precomputed program terms in the total order on precomputed terms.
pub fn compare_precomputed(a: &ProgramTerm, b: &ProgramTerm) -> Result<Ordering, LogicError> {
    let a = a
        .as_precomputed()
        .ok_or_else(|| LogicError::NotPrecomputed(a.to_string()))?;
    let b = b
        .as_precomputed()
        .ok_or_else(|| LogicError::NotPrecomputed(b.to_string()))?;
    Ok(a.cmp(&b))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PredicateSymbol {
    pub name: String,
    pub arity: usize,
}

impl PredicateSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for PredicateSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub arguments: Vec<ProgramTerm>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, arguments: Vec<ProgramTerm>) -> Self {
        Self {
            predicate: predicate.into(),
            arguments,
        }
    }

    pub fn symbol(&self) -> PredicateSymbol {
        PredicateSymbol::new(self.predicate.clone(), self.arguments.len())
    }

    fn map_terms(&self, f: &dyn Fn(&ProgramTerm) -> ProgramTerm) -> Atom {
        Atom::new(
            self.predicate.clone(),
            self.arguments.iter().map(f).collect(),
        )
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.arguments.is_empty() {
            f.write_str("(")?;
            for (i, argument) in self.arguments.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{argument}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Negation {
    None,
    Single,
    Double,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub negation: Negation,
    pub atom: Atom,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.negation {
            Negation::None => {}
            Negation::Single => f.write_str("not ")?,
            Negation::Double => f.write_str("not not ")?,
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Equal,
    NotEqual,
    Less,
    Greater,
    LessEqual,
    GreaterEqual,
}

impl Relation {
    pub fn holds(self, ordering: Ordering) -> bool {
        match self {
            Relation::Equal => ordering == Ordering::Equal,
            Relation::NotEqual => ordering != Ordering::Equal,
            Relation::Less => ordering == Ordering::Less,
            Relation::Greater => ordering == Ordering::Greater,
            Relation::LessEqual => ordering != Ordering::Greater,
            Relation::GreaterEqual => ordering != Ordering::Less,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::NotEqual => "!=",
            Relation::Less => "<",
            Relation::Greater => ">",
            Relation::LessEqual => "<=",
            Relation::GreaterEqual => ">=",
        }
    }

    pub(crate) fn from_token(token: &Token) -> Option<Relation> {
        Some(match token {
            Token::Equal => Relation::Equal,
            Token::NotEqual => Relation::NotEqual,
            Token::Less => Relation::Less,
            Token::Greater => Relation::Greater,
            Token::LessEqual => Relation::LessEqual,
            Token::GreaterEqual => Relation::GreaterEqual,
            _ => return None,
        })
    }

    pub const ALL: [Relation; 6] = [
        Relation::Equal,
        Relation::NotEqual,
        Relation::Less,
        Relation::Greater,
        Relation::LessEqual,
        Relation::GreaterEqual,
    ];
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Comparison {
    pub left: ProgramTerm,
    pub relation: Relation,
    pub right: ProgramTerm,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.relation, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BodyItem {
    Literal(Literal),
    Comparison(Comparison),
}

impl BodyItem {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            BodyItem::Literal(literal) => Some(&literal.atom),
            BodyItem::Comparison(_) => None,
        }
    }

    fn map_terms(&self, f: &dyn Fn(&ProgramTerm) -> ProgramTerm) -> BodyItem {
        match self {
            BodyItem::Literal(literal) => BodyItem::Literal(Literal {
                negation: literal.negation,
                atom: literal.atom.map_terms(f),
            }),
            BodyItem::Comparison(c) => BodyItem::Comparison(Comparison {
                left: f(&c.left),
                relation: c.relation,
                right: f(&c.right),
            }),
        }
    }
}

impl fmt::Display for BodyItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyItem::Literal(literal) => literal.fmt(f),
            BodyItem::Comparison(comparison) => comparison.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    Basic(Atom),
    Choice(Atom),
    Empty,
}

impl Head {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Head::Basic(atom) | Head::Choice(atom) => Some(atom),
            Head::Empty => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyItem>,
}

impl Rule {
    pub fn is_constraint(&self) -> bool {
        self.head == Head::Empty
    }

    /// Variables of the rule in order of first occurrence, body first.
    pub fn variables(&self) -> IndexSet<String> {
        let mut variables = IndexSet::new();
        for item in &self.body {
            match item {
                BodyItem::Literal(literal) => {
                    for t in &literal.atom.arguments {
                        t.variables(&mut variables);
                    }
                }
                BodyItem::Comparison(c) => {
                    c.left.variables(&mut variables);
                    c.right.variables(&mut variables);
                }
            }
        }
        if let Some(atom) = self.head.atom() {
            for t in &atom.arguments {
                t.variables(&mut variables);
            }
        }
        variables
    }

    pub fn map_terms(&self, f: &dyn Fn(&ProgramTerm) -> ProgramTerm) -> Rule {
        let head = match &self.head {
            Head::Basic(atom) => Head::Basic(atom.map_terms(f)),
            Head::Choice(atom) => Head::Choice(atom.map_terms(f)),
            Head::Empty => Head::Empty,
        };
        Rule {
            head,
            body: self.body.iter().map(|item| item.map_terms(f)).collect(),
        }
    }

    fn terms(&self) -> impl Iterator<Item = &ProgramTerm> {
        let head_terms = self
            .head
            .atom()
            .into_iter()
            .flat_map(|a| a.arguments.iter());
        let body_terms = self.body.iter().flat_map(|item| -> Vec<&ProgramTerm> {
            match item {
                BodyItem::Literal(l) => l.atom.arguments.iter().collect(),
                BodyItem::Comparison(c) => vec![&c.left, &c.right],
            }
        });
        head_terms.chain(body_terms)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Basic(atom) => write!(f, "{atom}")?,
            Head::Choice(atom) => write!(f, "{{{atom}}}")?,
            Head::Empty => {}
        }
        if !self.body.is_empty() || self.head == Head::Empty {
            if self.head == Head::Empty {
                f.write_str(":-")?;
            } else {
                f.write_str(" :-")?;
            }
            for (i, item) in self.body.iter().enumerate() {
                f.write_str(if i == 0 { " " } else { ", " })?;
                write!(f, "{item}")?;
            }
        }
        f.write_str(".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Self { rules }
    }

    /// Predicate symbols occurring in the program, in order of first occurrence
    /// (each rule's head before its body).
    pub fn predicates(&self) -> IndexSet<PredicateSymbol> {
        let mut symbols = IndexSet::new();
        for rule in &self.rules {
            if let Some(atom) = rule.head.atom() {
                symbols.insert(atom.symbol());
            }
            for item in &rule.body {
                if let Some(atom) = item.atom() {
                    symbols.insert(atom.symbol());
                }
            }
        }
        symbols
    }

    pub fn head_predicates(&self) -> IndexSet<PredicateSymbol> {
        self.rules
            .iter()
            .filter_map(|rule| rule.head.atom().map(Atom::symbol))
            .collect()
    }

    pub fn symbolic_constants(&self) -> IndexSet<String> {
        let mut constants = IndexSet::new();
        for rule in &self.rules {
            for term in rule.terms() {
                term.symbolic_constants(&mut constants);
            }
        }
        constants
    }

    pub fn numerals(&self) -> Vec<i64> {
        let mut numerals = Vec::new();
        for rule in &self.rules {
            for term in rule.terms() {
                term.numerals(&mut numerals);
            }
        }
        numerals
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// Parses a program in the mini-gringo language.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(text)?;
    let mut cursor = Cursor::new(tokens, end_location(text));
    let mut rules = Vec::new();
    while !cursor.is_at_end() {
        rules.push(parse_rule(&mut cursor)?);
    }
    Ok(Program { rules })
}

/// Prints a program in the canonical surface syntax accepted by [`parse_program`].
pub fn print_program(program: &Program) -> String {
    program.to_string()
}

fn parse_rule(cursor: &mut Cursor) -> Result<Rule, ParseError> {
    let head = match cursor.peek() {
        Some(Token::If) => Head::Empty,
        Some(Token::LeftBrace) => {
            cursor.next();
            let atom = parse_atom(cursor)?;
            match cursor.peek() {
                Some(Token::RightBrace) => {
                    cursor.next();
                }
                Some(Token::Semicolon) | Some(Token::Colon) => {
                    return Err(cursor.error("choice elements and conditions are not supported"))
                }
                _ => return Err(cursor.unexpected("expected `}`")),
            }
            if matches!(cursor.peek(), Some(Token::Integer(_))) {
                return Err(cursor.error("choice bounds are not supported"));
            }
            Head::Choice(atom)
        }
        Some(Token::Integer(_)) => {
            return Err(cursor.error("choice bounds are not supported"));
        }
        Some(Token::Directive(name)) if !matches!(name.as_str(), "inf" | "sup") => {
            return Err(cursor.error(format!("`#{name}` statements are not supported")));
        }
        _ => Head::Basic(parse_atom(cursor)?),
    };

    if matches!(cursor.peek(), Some(Token::Semicolon) | Some(Token::Pipe)) {
        return Err(cursor.error("disjunctive heads are not supported"));
    }

    let mut body = Vec::new();
    if cursor.eat(&Token::If) {
        if cursor.peek() != Some(&Token::Dot) {
            loop {
                body.push(parse_body_item(cursor)?);
                match cursor.peek() {
                    Some(Token::Comma) => {
                        cursor.next();
                    }
                    Some(Token::Semicolon) => {
                        return Err(cursor.error("`;` in rule bodies is not supported"))
                    }
                    _ => break,
                }
            }
        }
    } else if head == Head::Empty {
        return Err(cursor.unexpected("expected `:-`"));
    }
    cursor.expect(&Token::Dot)?;
    Ok(Rule { head, body })
}

fn parse_body_item(cursor: &mut Cursor) -> Result<BodyItem, ParseError> {
    if let Some(Token::Directive(name)) = cursor.peek() {
        if !matches!(name.as_str(), "inf" | "sup") {
            return Err(cursor.error(format!("aggregate `#{name}` is not supported")));
        }
    }
    let mut negations = 0;
    while cursor.peek() == Some(&Token::Identifier("not".into())) {
        cursor.next();
        negations += 1;
    }
    if negations > 0 {
        let negation = match negations {
            1 => Negation::Single,
            2 => Negation::Double,
            _ => return Err(cursor.error("at most two occurrences of `not` are allowed")),
        };
        let atom = parse_atom(cursor)?;
        return Ok(BodyItem::Literal(Literal { negation, atom }));
    }

    if matches!(cursor.peek(), Some(Token::Identifier(_)))
        && cursor.peek_at(1) == Some(&Token::LeftParen)
    {
        let atom = parse_atom(cursor)?;
        if cursor.peek().and_then(Relation::from_token).is_some() {
            return Err(cursor.error("function symbols are not supported in terms"));
        }
        return Ok(BodyItem::Literal(Literal {
            negation: Negation::None,
            atom,
        }));
    }

    let left = parse_term(cursor)?;
    match cursor.peek().and_then(Relation::from_token) {
        Some(relation) => {
            cursor.next();
            let right = parse_term(cursor)?;
            Ok(BodyItem::Comparison(Comparison {
                left,
                relation,
                right,
            }))
        }
        None => match left {
            ProgramTerm::SymbolicConstant(name) => Ok(BodyItem::Literal(Literal {
                negation: Negation::None,
                atom: Atom::new(name, vec![]),
            })),
            _ => Err(cursor.unexpected("expected a comparison symbol")),
        },
    }
}

fn parse_atom(cursor: &mut Cursor) -> Result<Atom, ParseError> {
    let predicate = match cursor.peek() {
        Some(Token::Identifier(name)) if name != "not" => name.clone(),
        Some(Token::Minus) => return Err(cursor.error("classical negation is not supported")),
        _ => return Err(cursor.unexpected("expected an atom")),
    };
    cursor.next();
    let mut arguments = Vec::new();
    if cursor.eat(&Token::LeftParen) {
        if cursor.peek() != Some(&Token::RightParen) {
            loop {
                arguments.push(parse_term(cursor)?);
                match cursor.peek() {
                    Some(Token::Comma) => {
                        cursor.next();
                    }
                    Some(Token::Semicolon) => {
                        return Err(cursor.error("term pooling is not supported"))
                    }
                    _ => break,
                }
            }
        }
        cursor.expect(&Token::RightParen)?;
    }
    Ok(Atom::new(predicate, arguments))
}

pub(crate) fn parse_term(cursor: &mut Cursor) -> Result<ProgramTerm, ParseError> {
    let left = parse_additive(cursor)?;
    if cursor.eat(&Token::Interval) {
        let right = parse_additive(cursor)?;
        if cursor.peek() == Some(&Token::Interval) {
            return Err(cursor.error("`..` is not associative; use parentheses"));
        }
        return Ok(ProgramTerm::binary(BinaryOperator::Interval, left, right));
    }
    Ok(left)
}

fn parse_additive(cursor: &mut Cursor) -> Result<ProgramTerm, ParseError> {
    let mut term = parse_multiplicative(cursor)?;
    loop {
        let op = match cursor.peek() {
            Some(Token::Plus) => BinaryOperator::Add,
            Some(Token::Minus) => BinaryOperator::Subtract,
            _ => return Ok(term),
        };
        cursor.next();
        let right = parse_multiplicative(cursor)?;
        term = ProgramTerm::binary(op, term, right);
    }
}

fn parse_multiplicative(cursor: &mut Cursor) -> Result<ProgramTerm, ParseError> {
    let mut term = parse_unary(cursor)?;
    loop {
        let op = match cursor.peek() {
            Some(Token::Star) => BinaryOperator::Multiply,
            Some(Token::Slash) => BinaryOperator::Divide,
            Some(Token::Backslash) => BinaryOperator::Modulo,
            _ => return Ok(term),
        };
        cursor.next();
        let right = parse_unary(cursor)?;
        term = ProgramTerm::binary(op, term, right);
    }
}

fn parse_unary(cursor: &mut Cursor) -> Result<ProgramTerm, ParseError> {
    if cursor.eat(&Token::Minus) {
        if let Some(Token::Integer(n)) = cursor.peek() {
            let n = *n;
            cursor.next();
            return Ok(ProgramTerm::Numeral(-n));
        }
        let operand = parse_unary(cursor)?;
        return Ok(ProgramTerm::negate(operand));
    }
    parse_primary(cursor)
}

fn parse_primary(cursor: &mut Cursor) -> Result<ProgramTerm, ParseError> {
    match cursor.peek().cloned() {
        Some(Token::Integer(n)) => {
            cursor.next();
            Ok(ProgramTerm::Numeral(n))
        }
        Some(Token::Identifier(name)) => {
            if cursor.peek_at(1) == Some(&Token::LeftParen) {
                return Err(cursor.error("function symbols are not supported in terms"));
            }
            cursor.next();
            Ok(ProgramTerm::SymbolicConstant(name))
        }
        Some(Token::Variable(name)) => {
            cursor.next();
            Ok(ProgramTerm::Variable(name))
        }
        Some(Token::Directive(name)) => match name.as_str() {
            "inf" => {
                cursor.next();
                Ok(ProgramTerm::Infimum)
            }
            "sup" => {
                cursor.next();
                Ok(ProgramTerm::Supremum)
            }
            _ => Err(cursor.error(format!("`#{name}` is not supported in terms"))),
        },
        Some(Token::LeftParen) => {
            cursor.next();
            let term = parse_term(cursor)?;
            if cursor.peek() == Some(&Token::Comma) {
                return Err(cursor.error("tuples are not supported"));
            }
            cursor.expect(&Token::RightParen)?;
            Ok(term)
        }
        _ => Err(cursor.unexpected("expected a term")),
    }
}
