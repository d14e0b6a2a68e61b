use super::{AggFunc, AggregateAtom, Atom, BodyElement, Cmp, Entry, Literal, Program, Rule};
use crate::error::{Error, ParseError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Directive(String),
    If,
    Colon,
    Comma,
    Dot,
    LBrace,
    RBrace,
    Cmp(Cmp),
    /// Punctuation outside the grammar that still deserves a precise error.
    Other(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Directive(s) => format!("`#{s}`"),
            Tok::If => "`:-`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Cmp(c) => format!("`{}`", c.symbol()),
            Tok::Other(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse(ParseError {
        line,
        column,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i, &mut col);
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(1, &mut i, &mut col);
                }
                continue;
            }
            _ => {}
        }

        let peek = chars.get(i + 1).copied();
        let tok = match c {
            ':' if peek == Some('-') => {
                advance(2, &mut i, &mut col);
                Tok::If
            }
            ':' => {
                advance(1, &mut i, &mut col);
                Tok::Colon
            }
            ',' => {
                advance(1, &mut i, &mut col);
                Tok::Comma
            }
            '.' => {
                advance(1, &mut i, &mut col);
                Tok::Dot
            }
            '{' => {
                advance(1, &mut i, &mut col);
                Tok::LBrace
            }
            '}' => {
                advance(1, &mut i, &mut col);
                Tok::RBrace
            }
            '<' | '>' | '!' if peek == Some('=') => {
                advance(2, &mut i, &mut col);
                Tok::Cmp(match c {
                    '<' => Cmp::Le,
                    '>' => Cmp::Ge,
                    _ => Cmp::Ne,
                })
            }
            '<' => {
                advance(1, &mut i, &mut col);
                Tok::Cmp(Cmp::Lt)
            }
            '>' => {
                advance(1, &mut i, &mut col);
                Tok::Cmp(Cmp::Gt)
            }
            '=' => {
                advance(1, &mut i, &mut col);
                Tok::Cmp(Cmp::Eq)
            }
            '-' | '0'..='9' => {
                let negative = c == '-';
                let digits_start = if negative { i + 1 } else { i };
                let mut end = digits_start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                if end == digits_start {
                    return Err(error(line, col, "expected digits after `-`"));
                }
                let literal: String = chars[i..end].iter().collect();
                let value = literal.parse::<i64>().map_err(|_| {
                    error(line, col, format!("integer `{literal}` does not fit in 64 bits"))
                })?;
                advance(end - i, &mut i, &mut col);
                Tok::Int(value)
            }
            '#' => {
                let mut end = i + 1;
                while end < chars.len() && chars[end].is_ascii_alphanumeric() {
                    end += 1;
                }
                let word: String = chars[i + 1..end].iter().collect();
                advance(end - i, &mut i, &mut col);
                Tok::Directive(word)
            }
            'a'..='z' => {
                let mut end = i + 1;
                while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_')
                {
                    end += 1;
                }
                let word: String = chars[i..end].iter().collect();
                advance(end - i, &mut i, &mut col);
                Tok::Ident(word)
            }
            c if c.is_ascii_punctuation() => {
                advance(1, &mut i, &mut col);
                Tok::Other(c)
            }
            c => return Err(error(line, col, format!("unexpected character `{c}`"))),
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    program: Program,
    declared: bool,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn bump(&mut self) -> Spanned {
        let tok = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T> {
        let at = self.peek();
        Err(error(
            at.line,
            at.column,
            format!("expected {expected}, found {}", at.tok.describe()),
        ))
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<()> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        match &self.peek().tok {
            Tok::Ident(name) if name != "not" => {
                let name = name.clone();
                let at = self.bump();
                self.program
                    .universe
                    .intern(name)
                    .map_err(|e| error(at.line, at.column, e.to_string()))
            }
            _ => self.unexpected("an atom"),
        }
    }

    fn program(mut self) -> Result<Program> {
        loop {
            match &self.peek().tok {
                Tok::Eof => return Ok(self.program),
                Tok::Directive(_) => self.declaration()?,
                _ => self.rule()?,
            }
        }
    }

    fn declaration(&mut self) -> Result<()> {
        let at = self.bump();
        let Tok::Directive(word) = at.tok else {
            unreachable!()
        };
        if word != "atoms" {
            return Err(error(at.line, at.column, format!("unknown directive `#{word}`")));
        }
        if self.declared {
            return Err(error(at.line, at.column, "duplicate `#atoms` declaration"));
        }
        self.declared = true;
        self.atom()?;
        while self.peek().tok == Tok::Comma {
            self.bump();
            self.atom()?;
        }
        self.expect(Tok::Dot, "`,` or `.`")
    }

    fn rule(&mut self) -> Result<()> {
        if self.peek().tok == Tok::If {
            let at = self.peek();
            return Err(error(
                at.line,
                at.column,
                "rules need exactly one head atom; constraints are not supported",
            ));
        }
        let head = self.atom()?;
        let body = match &self.peek().tok {
            Tok::Dot => Vec::new(),
            Tok::If => {
                self.bump();
                self.body()?
            }
            Tok::Comma | Tok::Ident(_) | Tok::Other(';') | Tok::Other('|') => {
                let at = self.peek();
                return Err(error(
                    at.line,
                    at.column,
                    "rule head must be a single atom (disjunctive heads are not supported)",
                ));
            }
            _ => return self.unexpected("`:-` or `.`"),
        };
        self.expect(Tok::Dot, "`,` or `.`")?;
        self.program.rules.push(Rule { head, body });
        Ok(())
    }

    fn body(&mut self) -> Result<Vec<BodyElement>> {
        let mut body = vec![self.element()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            body.push(self.element()?);
        }
        Ok(body)
    }

    fn element(&mut self) -> Result<BodyElement> {
        if let Tok::Ident(word) = &self.peek().tok {
            if let Some(func) = AggFunc::from_keyword(word) {
                if *self.peek_at(1) == Tok::LBrace {
                    self.bump();
                    return self.aggregate(func).map(BodyElement::Aggregate);
                }
            }
        }
        self.literal().map(BodyElement::Literal)
    }

    fn literal(&mut self) -> Result<Literal> {
        let negated = matches!(&self.peek().tok, Tok::Ident(w) if w == "not");
        if negated {
            self.bump();
        }
        let atom = self.atom()?;
        Ok(Literal { atom, negated })
    }

    fn aggregate(&mut self, func: AggFunc) -> Result<AggregateAtom> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut entries = Vec::new();
        if self.peek().tok != Tok::RBrace {
            entries.push(self.entry()?);
            while self.peek().tok == Tok::Comma {
                self.bump();
                entries.push(self.entry()?);
            }
        }
        self.expect(Tok::RBrace, "`,` or `}`")?;
        let cmp = match self.peek().tok {
            Tok::Cmp(c) => {
                self.bump();
                c
            }
            _ => return self.unexpected("a comparison operator"),
        };
        let bound = match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                n
            }
            _ => return self.unexpected("an integer bound"),
        };
        Ok(AggregateAtom {
            func,
            entries,
            cmp,
            bound,
        })
    }

    fn entry(&mut self) -> Result<Entry> {
        let weight = match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                n
            }
            _ => return self.unexpected("an integer weight"),
        };
        self.expect(Tok::Colon, "`:`")?;
        let at = self.peek().clone();
        let non_literal = match &at.tok {
            Tok::Ident(w) => {
                AggFunc::from_keyword(w).is_some() && *self.peek_at(1) == Tok::LBrace
            }
            Tok::Other('(') | Tok::LBrace | Tok::Int(_) => true,
            _ => false,
        };
        if non_literal {
            return Err(error(
                at.line,
                at.column,
                "aggregate conditions must be a single literal",
            ));
        }
        let cond = self.literal()?;
        if matches!(self.peek().tok, Tok::Colon | Tok::Other('&') | Tok::Other(';')) {
            let at = self.peek();
            return Err(error(
                at.line,
                at.column,
                "aggregate conditions must be a single literal",
            ));
        }
        Ok(Entry { weight, cond })
    }
}

/// Parses program text:
///
/// ```text
/// program := (decl | rule)*
/// decl    := "#atoms" atom ("," atom)* "."
/// rule    := atom (":-" elem ("," elem)*)? "."
/// elem    := ("not")? atom | agg
/// agg     := ("sum"|"prod"|"card"|"min"|"max"|"avg") "{" (int ":" literal ("," ...)*)? "}" cmp int
/// ```
///
/// `%` starts a comment running to end of line.
pub fn parse_program(text: &str) -> Result<Program> {
    let parser = Parser {
        toks: lex(text)?,
        pos: 0,
        program: Program::default(),
        declared: false,
    };
    parser.program()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(text: &str) -> ParseError {
        match parse_program(text) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn sum_aggregate_rule() {
        let p = parse_program("p :- sum{1:p, 1:q} > 1.").unwrap();
        assert_eq!(p.rules.len(), 1);
        let rule = &p.rules[0];
        assert_eq!(p.universe.name(rule.head), "p");
        let BodyElement::Aggregate(agg) = &rule.body[0] else {
            panic!("expected aggregate")
        };
        assert_eq!(agg.func, AggFunc::Sum);
        assert_eq!(agg.cmp, Cmp::Gt);
        assert_eq!(agg.bound, 1);
        let entries: Vec<(i64, &str, bool)> = agg
            .entries
            .iter()
            .map(|e| (e.weight, p.universe.name(e.cond.atom), e.cond.negated))
            .collect();
        assert_eq!(entries, vec![(1, "p", false), (1, "q", false)]);
    }

    #[test]
    fn fact() {
        let p = parse_program("p.").unwrap();
        assert_eq!(p.rules, vec![Rule::fact(Atom(0))]);
    }

    #[test]
    fn missing_comma_reports_position() {
        let e = parse_err("p :- q not r.");
        assert_eq!((e.line, e.column), (1, 8));
        assert!(e.message.contains("expected `,` or `.`"), "{}", e.message);
    }

    #[test]
    fn universe_in_first_occurrence_order_plus_declaration() {
        let p = parse_program("% comment\nq :- not r.\n#atoms x, q.\np :- sum{2:s} != -3.").unwrap();
        let names: Vec<&str> = p.universe.names().collect();
        assert_eq!(names, ["q", "r", "x", "p", "s"]);
    }

    #[test]
    fn rejects_duplicate_declaration() {
        let e = parse_err("#atoms a.\n#atoms b.");
        assert_eq!(e.line, 2);
        assert!(e.message.contains("duplicate"));
    }

    #[test]
    fn rejects_multi_atom_heads_and_constraints() {
        assert!(parse_err("p, q :- r.").message.contains("single atom"));
        assert!(parse_err("p ; q.").message.contains("single atom"));
        assert!(parse_err("p q.").message.contains("single atom"));
        assert!(parse_err(":- p.").message.contains("head"));
    }

    #[test]
    fn rejects_non_literal_conditions() {
        assert!(parse_err("p :- sum{1:sum{1:q} > 0} > 0.").message.contains("single literal"));
        assert!(parse_err("p :- sum{1:q:r} > 0.").message.contains("single literal"));
        assert!(parse_err("p :- sum{1:(q)} > 0.").message.contains("single literal"));
    }

    #[test]
    fn keywords_are_atoms_outside_aggregate_position() {
        let p = parse_program("sum :- max, not min.").unwrap();
        assert_eq!(p.universe.len(), 3);
        assert!(!p.has_aggregates());
    }

    #[test]
    fn negative_weights_and_empty_multisets() {
        let p = parse_program("p :- min{} > 5, prod{-3:not q} <= -3.").unwrap();
        let aggs: Vec<_> = p.aggregates().collect();
        assert!(aggs[0].entries.is_empty());
        assert_eq!(aggs[1].entries[0].weight, -3);
        assert!(aggs[1].entries[0].cond.negated);
    }

    #[test]
    fn integer_overflow_is_a_parse_error() {
        assert!(parse_err("p :- sum{99999999999999999999:q} > 0.").message.contains("64 bits"));
    }

    #[test]
    fn multi_line_positions() {
        let e = parse_err("p.\nq :- r\ns.");
        assert_eq!((e.line, e.column), (3, 1));
    }
}
