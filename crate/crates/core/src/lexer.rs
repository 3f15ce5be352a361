//! Tokenizer shared by the program parser and the specification parser.

use std::fmt;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Token {
    /// Lowercase-initial identifier (predicate names, symbolic constants, keywords).
    Identifier(String),
    /// Uppercase-initial identifier.
    Variable(String),
    Integer(i64),
    /// `#inf`, `#sup`, `#true`, `#false`, `#count`, ...
    Directive(String),
    LeftParen,
    RightParen,
    LeftBrace,
    RightBrace,
    Comma,
    Semicolon,
    Colon,
    If,
    Dot,
    Interval,
    Plus,
    Minus,
    Star,
    Slash,
    Backslash,
    Equal,
    NotEqual,
    Less,
    Greater,
    LessEqual,
    GreaterEqual,
    Arrow,
    Equivalence,
    Pipe,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Identifier(name) | Token::Variable(name) => write!(f, "`{name}`"),
            Token::Integer(value) => write!(f, "`{value}`"),
            Token::Directive(name) => write!(f, "`#{name}`"),
            Token::LeftParen => f.write_str("`(`"),
            Token::RightParen => f.write_str("`)`"),
            Token::LeftBrace => f.write_str("`{`"),
            Token::RightBrace => f.write_str("`}`"),
            Token::Comma => f.write_str("`,`"),
            Token::Semicolon => f.write_str("`;`"),
            Token::Colon => f.write_str("`:`"),
            Token::If => f.write_str("`:-`"),
            Token::Dot => f.write_str("`.`"),
            Token::Interval => f.write_str("`..`"),
            Token::Plus => f.write_str("`+`"),
            Token::Minus => f.write_str("`-`"),
            Token::Star => f.write_str("`*`"),
            Token::Slash => f.write_str("`/`"),
            Token::Backslash => f.write_str("`\\`"),
            Token::Equal => f.write_str("`=`"),
            Token::NotEqual => f.write_str("`!=`"),
            Token::Less => f.write_str("`<`"),
            Token::Greater => f.write_str("`>`"),
            Token::LessEqual => f.write_str("`<=`"),
            Token::GreaterEqual => f.write_str("`>=`"),
            Token::Arrow => f.write_str("`->`"),
            Token::Equivalence => f.write_str("`<->`"),
            Token::Pipe => f.write_str("`|`"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub token: Token,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut column = 1;

    macro_rules! advance {
        ($n:expr) => {{
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += 1;
                }
                i += 1;
            }
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        let (start_line, start_column) = (line, column);
        let mut push = |token: Token| {
            tokens.push(Spanned {
                token,
                line: start_line,
                column: start_column,
            })
        };

        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '%' {
            if next == Some('*') {
                // block comment `%* ... *%`
                advance!(2);
                loop {
                    if i >= chars.len() {
                        return Err(ParseError::new(
                            start_line,
                            start_column,
                            "unterminated block comment",
                        ));
                    }
                    if chars[i] == '*' && chars.get(i + 1) == Some(&'%') {
                        advance!(2);
                        break;
                    }
                    advance!(1);
                }
            } else {
                while i < chars.len() && chars[i] != '\n' {
                    advance!(1);
                }
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance!(1);
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse::<i64>().map_err(|_| {
                ParseError::new(start_line, start_column, "integer literal out of range")
            })?;
            push(Token::Integer(value));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance!(1);
            }
            let word: String = chars[start..i].iter().collect();
            if c.is_ascii_uppercase() {
                push(Token::Variable(word));
            } else {
                push(Token::Identifier(word));
            }
            continue;
        }
        if c == '#' {
            advance!(1);
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                advance!(1);
            }
            if start == i {
                return Err(ParseError::new(
                    start_line,
                    start_column,
                    "expected a directive name after `#`",
                ));
            }
            push(Token::Directive(chars[start..i].iter().collect()));
            continue;
        }

        let (token, width) = match (c, next) {
            (':', Some('-')) => (Token::If, 2),
            (':', _) => (Token::Colon, 1),
            ('.', Some('.')) => (Token::Interval, 2),
            ('.', _) => (Token::Dot, 1),
            ('-', Some('>')) => (Token::Arrow, 2),
            ('-', _) => (Token::Minus, 1),
            ('<', Some('-')) if chars.get(i + 2) == Some(&'>') => (Token::Equivalence, 3),
            ('<', Some('=')) => (Token::LessEqual, 2),
            ('<', Some('>')) => (Token::NotEqual, 2),
            ('<', _) => (Token::Less, 1),
            ('>', Some('=')) => (Token::GreaterEqual, 2),
            ('>', _) => (Token::Greater, 1),
            ('!', Some('=')) => (Token::NotEqual, 2),
            ('=', Some('=')) => (Token::Equal, 2),
            ('=', _) => (Token::Equal, 1),
            ('(', _) => (Token::LeftParen, 1),
            (')', _) => (Token::RightParen, 1),
            ('{', _) => (Token::LeftBrace, 1),
            ('}', _) => (Token::RightBrace, 1),
            (',', _) => (Token::Comma, 1),
            (';', _) => (Token::Semicolon, 1),
            ('+', _) => (Token::Plus, 1),
            ('*', _) => (Token::Star, 1),
            ('/', _) => (Token::Slash, 1),
            ('\\', _) => (Token::Backslash, 1),
            ('|', _) => (Token::Pipe, 1),
            _ => {
                return Err(ParseError::new(
                    start_line,
                    start_column,
                    format!("unexpected character `{c}`"),
                ))
            }
        };
        push(token);
        advance!(width);
    }

    Ok(tokens)
}

/// Cursor over a token stream with single-token lookahead and backtracking.
pub(crate) struct Cursor {
    tokens: Vec<Spanned>,
    position: usize,
    end: (usize, usize),
}

impl Cursor {
    pub fn new(tokens: Vec<Spanned>, end: (usize, usize)) -> Self {
        Self {
            tokens,
            position: 0,
            end,
        }
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.position).map(|spanned| &spanned.token)
    }

    pub fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens
            .get(self.position + offset)
            .map(|spanned| &spanned.token)
    }

    pub fn next(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.position).map(|s| s.token.clone());
        if token.is_some() {
            self.position += 1;
        }
        token
    }

    pub fn is_at_end(&self) -> bool {
        self.position >= self.tokens.len()
    }

    pub fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.position += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: &Token) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {token}")))
        }
    }

    pub fn save(&self) -> usize {
        self.position
    }

    pub fn restore(&mut self, position: usize) {
        self.position = position;
    }

    pub fn location(&self) -> (usize, usize) {
        match self.tokens.get(self.position) {
            Some(spanned) => (spanned.line, spanned.column),
            None => self.end,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.location();
        ParseError::new(line, column, message)
    }

    pub fn unexpected(&self, expectation: &str) -> ParseError {
        match self.peek() {
            Some(token) => self.error(format!("{expectation}, found {token}")),
            None => self.error(format!("{expectation}, found end of input")),
        }
    }
}

pub(crate) fn end_location(text: &str) -> (usize, usize) {
    let line = text.matches('\n').count() + 1;
    let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
