use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ast::{Affine, CmpOp, Guard, LessRule, ModelAst, OrdExpr, Pattern, RankRule, Rule, SortDecl, Term};
use super::lexer::{lex, Spanned, Tok};
use super::ParseError;
use crate::model::ParamDomain;
use crate::principles::Relation;

const KEYWORDS: [&str; 20] = [
    "model", "sort", "where", "zero", "succ", "pred", "less", "rank", "if", "iff", "and", "or", "not", "true",
    "false", "even", "odd", "nat", "int", "w",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word) || word == "order"
}

/// Parses a complete `.model` source.
pub fn parse(source: &str) -> Result<ModelAst, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser { toks, pos: 0 };
    let ast = p.model()?;
    p.expect(&Tok::Eof)?;
    Ok(ast)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(format!("unexpected {}", self.peek()), expected)
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek() == tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            let want = match tok {
                Tok::Eof => "end of input".to_string(),
                t => format!("`{}`", t.text()),
            };
            Err(self.unexpected(&[&want]))
        }
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn eat_word(&mut self, word: &str) -> bool {
        if self.at_word(word) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, word: &str) -> PResult<()> {
        if self.eat_word(word) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{word}`")]))
        }
    }

    fn name(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            Tok::Ident(s) => Err(self.error(format!("`{s}` is reserved and cannot be used as {what}"), &[what])),
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn model(&mut self) -> PResult<ModelAst> {
        self.expect_word("model")?;
        let name = self.name("model name")?;
        self.expect(&Tok::LBrace)?;
        let mut sorts = Vec::new();
        let mut zero = None;
        let (mut succ, mut pred, mut less, mut ranks) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        loop {
            match self.peek().clone() {
                Tok::RBrace => break,
                Tok::Ident(w) if w == "sort" => sorts.push(self.sort()?),
                Tok::Ident(w) if w == "zero" => {
                    if zero.is_some() {
                        return Err(self.error("duplicate zero declaration", &[]));
                    }
                    self.bump();
                    zero = Some(self.term()?);
                }
                Tok::Ident(w) if w == "succ" => succ.push(self.rule()?),
                Tok::Ident(w) if w == "pred" => pred.push(self.rule()?),
                Tok::Ident(w) if w == "less" => less.push(self.less()?),
                Tok::Ident(w) if w == "rank" => ranks.push(self.rank()?),
                _ => return Err(self.unexpected(&["sort", "zero", "succ", "pred", "less", "rank", "}"])),
            }
        }
        let Some(zero) = zero else {
            return Err(self.error("zero declaration required", &["zero"]));
        };
        self.bump();
        Ok(ModelAst {
            name,
            sorts,
            zero,
            succ,
            pred,
            less,
            ranks,
        })
    }

    fn sort(&mut self) -> PResult<SortDecl> {
        self.expect_word("sort")?;
        let name = self.name("sort name")?;
        self.expect(&Tok::LParen)?;
        let mut params = Vec::new();
        if !self.at(&Tok::RParen) {
            loop {
                let p = self.name("parameter name")?;
                self.expect(&Tok::Colon)?;
                let d = if self.eat_word("nat") {
                    ParamDomain::Nat
                } else if self.eat_word("int") {
                    ParamDomain::Int
                } else {
                    return Err(self.unexpected(&["nat", "int"]));
                };
                params.push((p, d));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::RParen)?;
        let carrier = if self.eat_word("where") { Some(self.guard()?) } else { None };
        Ok(SortDecl { name, params, carrier })
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        let sort = self.name("sort name")?;
        self.expect(&Tok::LParen)?;
        let mut vars = Vec::new();
        if !self.at(&Tok::RParen) {
            loop {
                if !matches!(self.peek(), Tok::Ident(_)) {
                    return Err(self.error(
                        format!("pattern arguments must be variables, found {}", self.peek()),
                        &["variable"],
                    ));
                }
                vars.push(self.name("variable")?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::RParen)?;
        Ok(Pattern { sort, vars })
    }

    fn term(&mut self) -> PResult<Term> {
        let sort = self.name("sort name")?;
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if !self.at(&Tok::RParen) {
            loop {
                args.push(self.expr()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::RParen)?;
        Ok(Term { sort, args })
    }

    fn rule(&mut self) -> PResult<Rule> {
        self.bump();
        let pattern = self.pattern()?;
        let guard = if self.eat_word("if") { Some(self.guard()?) } else { None };
        self.expect(&Tok::Arrow)?;
        let target = self.term()?;
        Ok(Rule { pattern, guard, target })
    }

    fn less(&mut self) -> PResult<LessRule> {
        self.expect_word("less")?;
        let left = self.pattern()?;
        self.expect(&Tok::Lt)?;
        let right = self.pattern()?;
        self.expect_word("iff")?;
        let guard = self.guard()?;
        Ok(LessRule { left, right, guard })
    }

    fn rank(&mut self) -> PResult<RankRule> {
        self.expect_word("rank")?;
        let relation = if self.eat_word("order") {
            Relation::Order
        } else if self.eat_word("succ") {
            Relation::Successor
        } else {
            return Err(self.unexpected(&["order", "succ"]));
        };
        let pattern = self.pattern()?;
        let guard = if self.eat_word("if") { Some(self.guard()?) } else { None };
        self.expect(&Tok::Arrow)?;
        let value = self.ord_expr()?;
        Ok(RankRule {
            relation,
            pattern,
            guard,
            value,
        })
    }

    fn guard(&mut self) -> PResult<Guard> {
        let mut parts = vec![self.conjunction()?];
        while self.eat_word("or") {
            parts.push(self.conjunction()?);
        }
        Ok(Guard::or(parts))
    }

    fn conjunction(&mut self) -> PResult<Guard> {
        let mut parts = vec![self.unary()?];
        while self.eat_word("and") {
            parts.push(self.unary()?);
        }
        Ok(Guard::and(parts))
    }

    fn unary(&mut self) -> PResult<Guard> {
        if self.eat_word("not") {
            return Ok(Guard::Not(Box::new(self.unary()?)));
        }
        if self.eat_word("true") {
            return Ok(Guard::True);
        }
        if self.eat_word("false") {
            return Ok(Guard::False);
        }
        for (word, even) in [("even", true), ("odd", false)] {
            if self.eat_word(word) {
                self.expect(&Tok::LParen)?;
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                return Ok(if even { Guard::Even(e) } else { Guard::Odd(e) });
            }
        }
        if self.at(&Tok::LParen) {
            let start = self.pos;
            if let Ok(cmp) = self.comparison() {
                return Ok(cmp);
            }
            self.pos = start;
            self.bump();
            let g = self.guard()?;
            self.expect(&Tok::RParen)?;
            return Ok(g);
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<Guard> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return Err(self.unexpected(&["<", "<=", "=", "/=", ">", ">="])),
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Guard::Cmp(lhs, op, rhs))
    }

    fn expr(&mut self) -> PResult<Affine> {
        let mut acc = self.product()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.product()?);
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> PResult<Affine> {
        let mut acc = self.factor()?;
        while self.at(&Tok::Star) {
            self.bump();
            let at = self.pos;
            let rhs = self.factor()?;
            acc = match (acc.as_constant(), rhs.as_constant()) {
                (Some(k), _) => rhs.scale(k),
                (_, Some(k)) => acc.scale(k),
                _ => {
                    self.pos = at;
                    return Err(self.error("non-linear product of variables", &[]));
                }
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<Affine> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Affine::constant(n))
            }
            Tok::Minus => {
                self.bump();
                Ok(self.factor()?.neg())
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(Affine::var(&s))
            }
            _ => Err(self.error(
                format!("malformed expression: unexpected {}", self.peek()),
                &["integer", "variable", "(", "-"],
            )),
        }
    }

    fn ord_expr(&mut self) -> PResult<OrdExpr> {
        let mut terms = vec![self.ord_term(false)?];
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.ord_term(false)?);
            } else if self.at(&Tok::Minus) {
                self.bump();
                terms.push(self.ord_term(true)?);
            } else {
                return Ok(OrdExpr::from_terms(terms));
            }
        }
    }

    fn ord_term(&mut self, negated: bool) -> PResult<(u64, Affine)> {
        let omega_ahead = self.at_word("w") || (self.at(&Tok::Minus) && matches!(self.peek_at(1), Tok::Ident(s) if s == "w"));
        if !omega_ahead {
            let a = self.product()?;
            return Ok((0, if negated { a.neg() } else { a }));
        }
        if negated || self.at(&Tok::Minus) {
            return Err(self.error("omega terms cannot be subtracted", &[]));
        }
        self.bump();
        let exponent = if self.eat(&Tok::Caret) {
            match self.bump() {
                Tok::Int(n) => n.to_u64().ok_or_else(|| self.error("exponent too large", &[]))?,
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected(&["integer exponent"]));
                }
            }
        } else {
            1
        };
        let mut coeff = Affine::constant(BigInt::from(1));
        if self.eat(&Tok::Star) {
            coeff = self.factor()?;
            while self.eat(&Tok::Star) {
                let rhs = self.factor()?;
                coeff = match (coeff.as_constant(), rhs.as_constant()) {
                    (Some(k), _) => rhs.scale(k),
                    (_, Some(k)) => coeff.scale(k),
                    _ => return Err(self.error("non-linear product of variables", &[])),
                };
            }
        }
        Ok((exponent, coeff))
    }
}
