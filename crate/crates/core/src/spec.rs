//! Specification files: placeholders, input and output symbols, assumptions,
//! specs, axioms and helper lemmas.
//!
//! ```text
//! input: n -> integer, s/2.
//! output: in_cover/1.
//! assume: n >= 0.
//! spec: forall Y (in_cover(Y) -> exists I (Y = I and I >= 1 and I <= n)).
//! lemma(forward): forall N (N >= 0 -> p(N)).
//! ```
//!
//! Variables starting with `I`–`N` are integer variables, variables starting
//! with `U`–`Z` are object variables; free variables are closed universally.

use std::fmt;

use indexmap::{IndexMap, IndexSet};
use serde::Serialize;

use crate::{
    error::{ParseError, SpecError},
    lexer::{end_location, tokenize, Cursor, Spanned, Token},
    logic::{ArithmeticOperator, Formula, Quantifier, Sort, Term, Variable},
    syntax::{Precomputed, PredicateSymbol, Relation},
};

/// A direction of the equivalence proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaDirection {
    Forward,
    Backward,
    Both,
}

impl LemmaDirection {
    pub fn applies_to(self, direction: Direction) -> bool {
        matches!(
            (self, direction),
            (LemmaDirection::Both, _)
                | (LemmaDirection::Forward, Direction::Forward)
                | (LemmaDirection::Backward, Direction::Backward)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma {
    pub direction: LemmaDirection,
    pub formula: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Specification {
    pub placeholders: IndexMap<String, Sort>,
    pub inputs: IndexSet<PredicateSymbol>,
    pub outputs: IndexSet<PredicateSymbol>,
    pub assumptions: Vec<Formula>,
    pub specs: Vec<Formula>,
    pub axioms: Vec<Formula>,
    pub lemmas: Vec<Lemma>,
}

impl Specification {
    /// Assumptions with placeholders resolved according to their declared sorts.
    pub fn assumption_formulas(&self) -> &[Formula] {
        &self.assumptions
    }
}

pub fn variable_sort(name: &str) -> Option<Sort> {
    match name.chars().next()? {
        'I' | 'J' | 'K' | 'L' | 'M' | 'N' => Some(Sort::Integer),
        'U' | 'V' | 'W' | 'X' | 'Y' | 'Z' => Some(Sort::Object),
        _ => None,
    }
}

pub fn parse_spec(text: &str) -> Result<Specification, SpecError> {
    parse_spec_sources(&[("", text)]).map_err(|(_, error)| error)
}

/// Parses several specification files as one; declarations in any file are
/// visible in all of them. Errors name the offending source.
pub fn parse_spec_sources(sources: &[(&str, &str)]) -> Result<Specification, (String, SpecError)> {
    let mut statements = Vec::new();
    for (name, text) in sources {
        let tokens = tokenize(text).map_err(|e| (name.to_string(), SpecError::Parse(e)))?;
        let end = end_location(text);
        for statement in split_statements(tokens, end).map_err(|e| (name.to_string(), e.into()))? {
            statements.push((name.to_string(), statement));
        }
    }

    let mut spec = Specification::default();
    // declarations first, so formulas may use placeholders declared later
    let mut formulas = Vec::new();
    for (name, mut cursor) in statements {
        let located = |e: SpecError| (name.clone(), e);
        let keyword = header(&mut cursor).map_err(|e| located(e.into()))?;
        match keyword {
            Keyword::Input => parse_input(&mut cursor, &mut spec).map_err(located)?,
            Keyword::Output => parse_output(&mut cursor, &mut spec).map_err(located)?,
            other => formulas.push((name, other, cursor)),
        }
    }
    for (name, keyword, mut cursor) in formulas {
        let formula = FormulaParser {
            cursor: &mut cursor,
            placeholders: &spec.placeholders,
        }
        .statement()
        .map_err(|e| (name.clone(), e))?;
        match keyword {
            Keyword::Assume => {
                if let Some(symbol) = formula
                    .predicate_symbols()
                    .into_iter()
                    .find(|p| spec.outputs.contains(p))
                {
                    return Err((
                        name,
                        SpecError::OutputInAssumption {
                            index: spec.assumptions.len() + 1,
                            symbol,
                        },
                    ));
                }
                spec.assumptions.push(formula)
            }
            Keyword::Spec => spec.specs.push(formula),
            Keyword::Axiom => spec.axioms.push(formula),
            Keyword::Lemma(direction) => spec.lemmas.push(Lemma { direction, formula }),
            Keyword::Input | Keyword::Output => unreachable!(),
        }
    }
    Ok(spec)
}

/// Parses a single formula (without the trailing dot) and closes it universally.
pub fn parse_formula(
    text: &str,
    placeholders: &IndexMap<String, Sort>,
) -> Result<Formula, SpecError> {
    let tokens = tokenize(text)?;
    let mut cursor = Cursor::new(tokens, end_location(text));
    FormulaParser {
        cursor: &mut cursor,
        placeholders,
    }
    .statement()
}

fn split_statements(tokens: Vec<Spanned>, end: (usize, usize)) -> Result<Vec<Cursor>, ParseError> {
    let mut statements = Vec::new();
    let mut current = Vec::new();
    for spanned in tokens {
        if spanned.token == Token::Dot {
            let location = (spanned.line, spanned.column);
            statements.push(Cursor::new(std::mem::take(&mut current), location));
        } else {
            current.push(spanned);
        }
    }
    if !current.is_empty() {
        let mut cursor = Cursor::new(current, end);
        while cursor.next().is_some() {}
        return Err(cursor.unexpected("expected `.`"));
    }
    Ok(statements)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Keyword {
    Input,
    Output,
    Assume,
    Spec,
    Axiom,
    Lemma(LemmaDirection),
}

fn header(cursor: &mut Cursor) -> Result<Keyword, ParseError> {
    let keyword = match cursor.next() {
        Some(Token::Identifier(word)) => match word.as_str() {
            "input" => Keyword::Input,
            "output" => Keyword::Output,
            "assume" => Keyword::Assume,
            "spec" => Keyword::Spec,
            "axiom" => Keyword::Axiom,
            "lemma" => {
                if cursor.eat(&Token::LeftParen) {
                    let direction = match cursor.next() {
                        Some(Token::Identifier(d)) if d == "forward" => LemmaDirection::Forward,
                        Some(Token::Identifier(d)) if d == "backward" => LemmaDirection::Backward,
                        _ => {
                            return Err(cursor.error("expected `forward` or `backward`"));
                        }
                    };
                    cursor.expect(&Token::RightParen)?;
                    Keyword::Lemma(direction)
                } else {
                    Keyword::Lemma(LemmaDirection::Both)
                }
            }
            _ => {
                cursor.restore(0);
                return Err(cursor.error(format!("unknown statement `{word}`")));
            }
        },
        _ => {
            cursor.restore(0);
            return Err(cursor.unexpected("expected a statement keyword"));
        }
    };
    cursor.expect(&Token::Colon)?;
    Ok(keyword)
}

fn parse_arity(cursor: &mut Cursor) -> Result<usize, ParseError> {
    match cursor.next() {
        Some(Token::Integer(n)) if n >= 0 => Ok(n as usize),
        _ => Err(cursor.error("expected an arity")),
    }
}

fn parse_input(cursor: &mut Cursor, spec: &mut Specification) -> Result<(), SpecError> {
    loop {
        let name = match cursor.next() {
            Some(Token::Identifier(name)) => name,
            _ => {
                return Err(cursor
                    .error("expected a placeholder or predicate symbol")
                    .into())
            }
        };
        if cursor.eat(&Token::Slash) {
            let arity = parse_arity(cursor)?;
            spec.inputs.insert(PredicateSymbol::new(name, arity));
        } else {
            let sort = if cursor.eat(&Token::Arrow) {
                match cursor.next() {
                    Some(Token::Identifier(s)) if s == "integer" => Sort::Integer,
                    Some(Token::Identifier(s)) if s == "object" => Sort::Object,
                    _ => return Err(cursor.error("expected `integer` or `object`").into()),
                }
            } else {
                Sort::Object
            };
            if spec.placeholders.insert(name.clone(), sort).is_some() {
                return Err(SpecError::DuplicatePlaceholder(name));
            }
        }
        if cursor.is_at_end() {
            return Ok(());
        }
        cursor.expect(&Token::Comma)?;
    }
}

fn parse_output(cursor: &mut Cursor, spec: &mut Specification) -> Result<(), SpecError> {
    loop {
        let name = match cursor.next() {
            Some(Token::Identifier(name)) => name,
            _ => return Err(cursor.error("expected a predicate symbol").into()),
        };
        cursor.expect(&Token::Slash)?;
        let arity = parse_arity(cursor)?;
        spec.outputs.insert(PredicateSymbol::new(name, arity));
        if cursor.is_at_end() {
            return Ok(());
        }
        cursor.expect(&Token::Comma)?;
    }
}

struct FormulaParser<'a> {
    cursor: &'a mut Cursor,
    placeholders: &'a IndexMap<String, Sort>,
}

fn is_keyword(token: Option<&Token>, word: &str) -> bool {
    matches!(token, Some(Token::Identifier(w)) if w == word)
}

impl FormulaParser<'_> {
    fn statement(mut self) -> Result<Formula, SpecError> {
        let formula = self.formula()?;
        if !self.cursor.is_at_end() {
            return Err(self.cursor.unexpected("expected end of statement").into());
        }
        Ok(formula.universal_closure())
    }

    fn formula(&mut self) -> Result<Formula, SpecError> {
        let mut left = self.implication()?;
        while self.cursor.eat(&Token::Equivalence) {
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, SpecError> {
        let left = self.disjunction()?;
        if self.cursor.eat(&Token::Arrow) {
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, SpecError> {
        let mut left = self.conjunction()?;
        while is_keyword(self.cursor.peek(), "or") {
            self.cursor.next();
            left = Formula::or(left, self.conjunction()?);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, SpecError> {
        let mut left = self.unary()?;
        while is_keyword(self.cursor.peek(), "and") {
            self.cursor.next();
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, SpecError> {
        if is_keyword(self.cursor.peek(), "not") {
            self.cursor.next();
            return Ok(Formula::not(self.unary()?));
        }
        let quantifier = if is_keyword(self.cursor.peek(), "forall") {
            Some(Quantifier::ForAll)
        } else if is_keyword(self.cursor.peek(), "exists") {
            Some(Quantifier::Exists)
        } else {
            None
        };
        if let Some(quantifier) = quantifier {
            self.cursor.next();
            let mut variables = vec![self.variable()?];
            while self.cursor.eat(&Token::Comma) {
                variables.push(self.variable()?);
            }
            let body = self.unary()?;
            return Ok(Formula::quantify(quantifier, &variables, body));
        }
        self.primary()
    }

    fn variable(&mut self) -> Result<Variable, SpecError> {
        let (line, column) = self.cursor.location();
        match self.cursor.next() {
            Some(Token::Variable(name)) => match variable_sort(&name) {
                Some(sort) => Ok(Variable::new(name, sort)),
                None => Err(SpecError::BadVariableInitial { name, line, column }),
            },
            _ => {
                self.cursor.restore(self.cursor.save() - 1);
                Err(self.cursor.unexpected("expected a variable").into())
            }
        }
    }

    fn primary(&mut self) -> Result<Formula, SpecError> {
        match self.cursor.peek() {
            Some(Token::Directive(d)) if d == "true" => {
                self.cursor.next();
                Ok(Formula::top())
            }
            Some(Token::Directive(d)) if d == "false" => {
                self.cursor.next();
                Ok(Formula::Bottom)
            }
            Some(Token::LeftParen) => {
                let start = self.cursor.save();
                if let Ok(comparison) = self.comparison() {
                    return Ok(comparison);
                }
                self.cursor.restore(start);
                self.cursor.next();
                let inner = self.formula()?;
                self.cursor.expect(&Token::RightParen)?;
                Ok(inner)
            }
            Some(Token::Identifier(name)) => {
                let name = name.clone();
                match self.cursor.peek_at(1) {
                    Some(Token::LeftParen) => {
                        self.cursor.next();
                        self.cursor.next();
                        let mut arguments = vec![self.term()?];
                        while self.cursor.eat(&Token::Comma) {
                            arguments.push(self.term()?);
                        }
                        self.cursor.expect(&Token::RightParen)?;
                        let symbol = PredicateSymbol::new(name, arguments.len());
                        Ok(Formula::atom(symbol, arguments))
                    }
                    Some(token) if is_term_continuation(token) => self.comparison(),
                    _ => {
                        self.cursor.next();
                        Ok(Formula::atom(PredicateSymbol::new(name, 0), vec![]))
                    }
                }
            }
            Some(_) => self.comparison(),
            None => Err(self.cursor.unexpected("expected a formula").into()),
        }
    }

    fn comparison(&mut self) -> Result<Formula, SpecError> {
        let left = self.term()?;
        let relation = match self.cursor.peek().and_then(Relation::from_token) {
            Some(relation) => relation,
            None => return Err(self.cursor.unexpected("expected a comparison").into()),
        };
        self.cursor.next();
        let right = self.term()?;
        Ok(Formula::compare(relation, left, right))
    }

    fn term(&mut self) -> Result<Term, SpecError> {
        let mut left = self.product()?;
        loop {
            let op = match self.cursor.peek() {
                Some(Token::Plus) => ArithmeticOperator::Add,
                Some(Token::Minus) => ArithmeticOperator::Subtract,
                _ => return Ok(left),
            };
            let location = self.cursor.location();
            self.cursor.next();
            let right = self.product()?;
            left = arithmetic(op, left, right, location)?;
        }
    }

    fn product(&mut self) -> Result<Term, SpecError> {
        let mut left = self.negation()?;
        loop {
            match self.cursor.peek() {
                Some(Token::Star) => {}
                Some(Token::Slash | Token::Backslash | Token::Interval) => {
                    return Err(self
                        .cursor
                        .error("only `+`, `-` and `*` are supported in formulas")
                        .into())
                }
                _ => return Ok(left),
            }
            let location = self.cursor.location();
            self.cursor.next();
            let right = self.negation()?;
            left = arithmetic(ArithmeticOperator::Multiply, left, right, location)?;
        }
    }

    fn negation(&mut self) -> Result<Term, SpecError> {
        if self.cursor.peek() == Some(&Token::Minus) {
            let location = self.cursor.location();
            self.cursor.next();
            if let Some(Token::Integer(n)) = self.cursor.peek() {
                let n = *n;
                self.cursor.next();
                return Ok(Term::numeral(-n));
            }
            let operand = self.negation()?;
            return arithmetic(
                ArithmeticOperator::Subtract,
                Term::numeral(0),
                operand,
                location,
            );
        }
        self.simple_term()
    }

    fn simple_term(&mut self) -> Result<Term, SpecError> {
        let token = self.cursor.peek().cloned();
        match token {
            Some(Token::Integer(n)) => {
                self.cursor.next();
                Ok(Term::numeral(n))
            }
            Some(Token::Variable(_)) => Ok(Term::Variable(self.variable()?)),
            Some(Token::Identifier(name)) => {
                if self.cursor.peek_at(1) == Some(&Token::LeftParen) {
                    return Err(self
                        .cursor
                        .error("function symbols are not supported")
                        .into());
                }
                self.cursor.next();
                Ok(match self.placeholders.get(&name) {
                    Some(sort) => Term::Placeholder { name, sort: *sort },
                    None => Term::symbol(name),
                })
            }
            Some(Token::Directive(d)) if d == "inf" || d == "sup" => {
                self.cursor.next();
                Ok(Term::Constant(if d == "inf" {
                    Precomputed::Infimum
                } else {
                    Precomputed::Supremum
                }))
            }
            Some(Token::LeftParen) => {
                self.cursor.next();
                let inner = self.term()?;
                self.cursor.expect(&Token::RightParen)?;
                Ok(inner)
            }
            _ => Err(self.cursor.unexpected("expected a term").into()),
        }
    }
}

fn is_term_continuation(token: &Token) -> bool {
    Relation::from_token(token).is_some()
        || matches!(
            token,
            Token::Plus | Token::Minus | Token::Star | Token::Slash | Token::Backslash
        )
}

fn arithmetic(
    op: ArithmeticOperator,
    left: Term,
    right: Term,
    (line, column): (usize, usize),
) -> Result<Term, SpecError> {
    Term::arithmetic(op, left, right).map_err(|source| SpecError::Sort {
        line,
        column,
        source,
    })
}

/// Prints a specification in the file format; parsing the result yields an
/// equal specification.
pub fn print_spec(spec: &Specification) -> String {
    let mut out = String::new();
    let mut inputs: Vec<String> = spec
        .placeholders
        .iter()
        .map(|(name, sort)| match sort {
            Sort::Integer => format!("{name} -> integer"),
            Sort::Object => name.clone(),
        })
        .collect();
    inputs.extend(spec.inputs.iter().map(ToString::to_string));
    if !inputs.is_empty() {
        out.push_str(&format!("input: {}.\n", inputs.join(", ")));
    }
    if !spec.outputs.is_empty() {
        let outputs: Vec<String> = spec.outputs.iter().map(ToString::to_string).collect();
        out.push_str(&format!("output: {}.\n", outputs.join(", ")));
    }
    for f in &spec.assumptions {
        out.push_str(&format!("assume: {f}.\n"));
    }
    for f in &spec.specs {
        out.push_str(&format!("spec: {f}.\n"));
    }
    for f in &spec.axioms {
        out.push_str(&format!("axiom: {f}.\n"));
    }
    for lemma in &spec.lemmas {
        let keyword = match lemma.direction {
            LemmaDirection::Both => "lemma",
            LemmaDirection::Forward => "lemma(forward)",
            LemmaDirection::Backward => "lemma(backward)",
        };
        out.push_str(&format!("{keyword}: {}.\n", lemma.formula));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::free_variables;

    const EXACT_COVER_SPEC: &str = "input: n -> integer, s/2.
output: in_cover/1.
assume: n >= 0.
assume: forall Y (exists X s(X, Y) -> exists I (Y = I and I >= 1 and I <= n)).
spec: forall Y (in_cover(Y) -> exists I (Y = I and I >= 1 and I <= n)).
spec: forall X (exists Y s(X, Y) -> exists Y (s(X, Y) and in_cover(Y))).
spec: forall Y, Z (exists X (s(X, Y) and s(X, Z)) and in_cover(Y) and in_cover(Z)
                   -> Y = Z).
";

    #[test]
    fn exact_cover_specification() {
        let spec = parse_spec(EXACT_COVER_SPEC).unwrap();
        assert_eq!(
            spec.placeholders,
            IndexMap::from([("n".to_string(), Sort::Integer)])
        );
        assert_eq!(spec.inputs, IndexSet::from([PredicateSymbol::new("s", 2)]));
        assert_eq!(
            spec.outputs,
            IndexSet::from([PredicateSymbol::new("in_cover", 1)])
        );
        assert_eq!(spec.assumptions.len(), 2);
        assert_eq!(spec.specs.len(), 3);
        assert_eq!(
            spec.assumptions[0],
            Formula::compare(
                Relation::GreaterEqual,
                Term::Placeholder {
                    name: "n".into(),
                    sort: Sort::Integer
                },
                Term::numeral(0)
            )
        );
    }

    #[test]
    fn rejects_unknown_variable_initials() {
        let error = parse_spec("assume: forall Foo p(Foo).").unwrap_err();
        assert!(matches!(error, SpecError::BadVariableInitial { ref name, .. } if name == "Foo"));
    }

    #[test]
    fn closes_free_variables() {
        let spec = parse_spec("spec: p(X) -> q(X, N).").unwrap();
        assert!(free_variables(&spec.specs[0]).is_empty());
        assert_eq!(spec.specs[0].to_string(), "forall X, N (p(X) -> q(X, N))");
        let single = parse_spec("spec: p(a).").unwrap();
        assert_eq!(single.specs[0].to_string(), "p(a)");
    }

    #[test]
    fn rejects_outputs_in_assumptions() {
        let error = parse_spec("output: p/1.\nassume: p(a).").unwrap_err();
        assert!(matches!(
            error,
            SpecError::OutputInAssumption { index: 1, .. }
        ));
    }

    #[test]
    fn rejects_duplicate_placeholders() {
        let error = parse_spec("input: n -> integer.\ninput: n.").unwrap_err();
        assert_eq!(error, SpecError::DuplicatePlaceholder("n".into()));
    }

    #[test]
    fn rejects_object_arithmetic() {
        let error = parse_spec("input: c.\nspec: p(c + 1).").unwrap_err();
        assert!(matches!(error, SpecError::Sort { line: 2, .. }));
        assert!(parse_spec("spec: p(X + 1).").is_err());
        assert!(parse_spec("spec: p(N + 1).").is_ok());
    }

    #[test]
    fn lemma_directions() {
        let spec = parse_spec("lemma(forward): p.\nlemma(backward): q.\nlemma: r.\naxiom: p or q.")
            .unwrap();
        let directions: Vec<LemmaDirection> = spec.lemmas.iter().map(|l| l.direction).collect();
        assert_eq!(
            directions,
            vec![
                LemmaDirection::Forward,
                LemmaDirection::Backward,
                LemmaDirection::Both
            ]
        );
        assert!(LemmaDirection::Both.applies_to(Direction::Forward));
        assert!(!LemmaDirection::Forward.applies_to(Direction::Backward));
        assert_eq!(spec.axioms.len(), 1);
    }

    #[test]
    fn parenthesized_arithmetic_comparison() {
        let spec = parse_spec(
            "input: n -> integer.\noutput: q/1.\nspec: exists N (forall X (q(X) <-> X = N) and N >= 0\n and N * N <= n and (N + 1) * (N + 1) > n).",
        )
        .unwrap();
        assert_eq!(
            spec.specs[0].to_string(),
            "exists N (forall X (q(X) <-> X = N) and N >= 0 and N * N <= n and (N + 1) * (N + 1) > n)"
        );
    }

    #[test]
    fn precedence_of_connectives() {
        let spec = parse_spec("spec: not p and q or r -> s <-> t.").unwrap();
        assert_eq!(spec.specs[0].to_string(), "not p and q or r -> s <-> t");
        let Some((left, _)) = spec.specs[0].as_iff() else {
            panic!("expected an equivalence")
        };
        assert!(matches!(left, Formula::Implies(..)));
    }

    #[test]
    fn print_round_trip() {
        let spec = parse_spec(EXACT_COVER_SPEC).unwrap();
        let printed = print_spec(&spec);
        assert_eq!(parse_spec(&printed).unwrap(), spec);
    }

    #[test]
    fn missing_dot_is_reported() {
        let error = parse_spec("spec: p").unwrap_err();
        assert!(error.to_string().contains("expected `.`"));
    }

    #[test]
    fn declarations_across_sources() {
        let spec = parse_spec_sources(&[
            ("a.spec", "lemma(forward): not p(n + 1)."),
            ("b.spec", "input: n -> integer."),
        ])
        .unwrap();
        assert_eq!(spec.lemmas.len(), 1);
        let (file, _) = parse_spec_sources(&[("a.spec", "spec: p(X + 1).")]).unwrap_err();
        assert_eq!(file, "a.spec");
    }
}
