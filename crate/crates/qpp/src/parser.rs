//! Recursive-descent parser for `.qpp` files.
//!
//! ```text
//! program := item* EOF
//! item    := "var" IDENT ":" domain ["=" expr] | "qreg" IDENT ":" INT
//!          | "oracle" IDENT "=" INT | "const" IDENT "=" expr
//!          | "def" IDENT "=" stmt | "main" stmt | "spec" ["timed"] ["dist"] expr
//! domain  := "bool" | ["-"] INT ",.." ["-"] INT
//! stmt    := branch (";" branch)*
//! branch  := "if" "prob" "(" expr ")" "then" branch "else" branch
//!          | "if" expr "then" branch "else" branch | atom
//! atom    := "ok" | "tick" | "call" IDENT | "measure" IDENT IDENT
//!          | IDENT ":=" ("zero" "(" INT ")" | "apply" "(" gate "," IDENT ")" | expr)
//!          | "(" stmt ")" | "[" expr "]"
//! gate    := "H" | "oracle" IDENT | "invmean"
//! ```
//!
//! Expressions, loosest first: `=>` (right), `\/`, `/\`, `not`, comparison
//! chains (`= # < <= > >=`), `+ -`, `* / div mod`, unary `-`, `^` (right).

use qpp_core::semantics::{BinOp, CmpOp, Domain, Expr, Func};

use crate::ast::{Gate, Item, Pos, SStmt, SourceProgram, Spanned, SpecDecl};
use crate::diag::Diagnostic;
use crate::lexer::{tokenize, Tok, Token, KEYWORDS};

pub fn parse(src: &str) -> Result<SourceProgram, Diagnostic> {
    let mut p = Parser::new(src)?;
    let mut items = Vec::new();
    loop {
        const STARTS: [&str; 7] = ["var", "qreg", "oracle", "const", "def", "main", "spec"];
        if p.at_eof() {
            break;
        }
        let pos = p.pos();
        match STARTS.iter().find(|k| p.at_kw(k)) {
            Some(k) => {
                p.bump();
                let node = p.item(k)?;
                items.push(Spanned { pos, node });
            }
            None => return Err(p.error()),
        }
    }
    Ok(SourceProgram { items })
}

/// Parses a single statement, as found after `main`.
pub fn parse_stmt(src: &str) -> Result<SStmt, Diagnostic> {
    let mut p = Parser::new(src)?;
    let s = p.stmt()?;
    p.expect_eof()?;
    Ok(s)
}

/// Parses a single expression.
pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    /// What the tokens tried since the last one consumed would have matched.
    expected: Vec<String>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, Diagnostic> {
        Ok(Parser {
            toks: tokenize(src)?,
            i: 0,
            expected: Vec::new(),
        })
    }

    fn tok(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        self.expected.clear();
        t
    }

    fn note(&mut self, what: String) {
        if !self.expected.contains(&what) {
            self.expected.push(what);
        }
    }

    fn at_eof(&mut self) -> bool {
        self.note("end of input".into());
        *self.tok() == Tok::Eof
    }

    fn at_sym(&mut self, s: &str) -> bool {
        self.note(format!("`{s}`"));
        matches!(self.tok(), Tok::Sym(x) if *x == s)
    }

    fn at_kw(&mut self, k: &str) -> bool {
        self.note(format!("`{k}`"));
        matches!(self.tok(), Tok::Ident(w) if w == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.at_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        let hit = self.at_kw(k);
        if hit {
            self.bump();
        }
        hit
    }

    fn error(&self) -> Diagnostic {
        let found = self.tok().to_string();
        let mut expected = self.expected.clone();
        if expected.is_empty() {
            expected.push("a different token".into());
        }
        Diagnostic::syntax(self.pos(), format!("unexpected {found}"), expected)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), Diagnostic> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn expect_kw(&mut self, k: &str) -> Result<(), Diagnostic> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn expect_eof(&mut self) -> Result<(), Diagnostic> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn ident(&mut self) -> Result<String, Diagnostic> {
        self.note("an identifier".into());
        match self.tok() {
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => {
                let w = w.clone();
                self.bump();
                Ok(w)
            }
            Tok::Ident(w) => {
                let d = Diagnostic::syntax(self.pos(), format!("`{w}` is a keyword"), vec!["an identifier".into()]);
                Err(d)
            }
            _ => Err(self.error()),
        }
    }

    fn natural(&mut self) -> Result<(String, Pos), Diagnostic> {
        self.note("an integer".into());
        let pos = self.pos();
        match self.tok() {
            Tok::Int(s) => {
                let s = s.clone();
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.error()),
        }
    }

    fn small(&mut self) -> Result<usize, Diagnostic> {
        let (s, pos) = self.natural()?;
        s.parse()
            .map_err(|_| Diagnostic::syntax(pos, format!("`{s}` is too large"), vec!["a small integer".into()]))
    }

    fn int_literal(&mut self) -> Result<i64, Diagnostic> {
        let neg = self.eat_sym("-");
        let (s, pos) = self.natural()?;
        let text = if neg { format!("-{s}") } else { s };
        text.parse().map_err(|_| {
            Diagnostic::syntax(
                pos,
                format!("`{text}` does not fit in 64 bits"),
                vec!["a smaller integer".into()],
            )
        })
    }

    fn item(&mut self, kw: &str) -> Result<Item, Diagnostic> {
        Ok(match kw {
            "var" => {
                let name = self.ident()?;
                self.expect_sym(":")?;
                let domain = if self.eat_kw("bool") {
                    Domain::Bool
                } else {
                    let pos = self.pos();
                    let lo = self.int_literal()?;
                    self.expect_sym(",..")?;
                    let hi = self.int_literal()?;
                    if lo >= hi {
                        return Err(Diagnostic::syntax(
                            pos,
                            format!("empty range {lo},..{hi}"),
                            vec!["a range lo,..hi with lo < hi".into()],
                        ));
                    }
                    Domain::Range { lo, hi }
                };
                let init = if self.eat_sym("=") { Some(self.expr()?) } else { None };
                Item::Var { name, domain, init }
            }
            "qreg" => {
                let name = self.ident()?;
                self.expect_sym(":")?;
                Item::QReg { name, n: self.small()? }
            }
            "oracle" => {
                let name = self.ident()?;
                self.expect_sym("=")?;
                let (bits, pos) = self.natural()?;
                if bits.chars().any(|c| c != '0' && c != '1') {
                    return Err(Diagnostic::syntax(
                        pos,
                        format!("`{bits}` is not a bit string"),
                        vec!["a string of 0s and 1s".into()],
                    ));
                }
                Item::Oracle { name, bits }
            }
            "const" => {
                let name = self.ident()?;
                self.expect_sym("=")?;
                Item::Const {
                    name,
                    value: self.expr()?,
                }
            }
            "def" => {
                let name = self.ident()?;
                self.expect_sym("=")?;
                Item::Def {
                    name,
                    body: self.stmt()?,
                }
            }
            "main" => Item::Main(self.stmt()?),
            _ => {
                let timed = self.eat_kw("timed");
                let dist = self.eat_kw("dist");
                Item::Spec(SpecDecl {
                    timed,
                    dist,
                    expr: self.expr()?,
                })
            }
        })
    }

    fn stmt(&mut self) -> Result<SStmt, Diagnostic> {
        let first = self.branch()?;
        if self.eat_sym(";") {
            Ok(SStmt::seq(first, self.stmt()?))
        } else {
            Ok(first)
        }
    }

    fn branch(&mut self) -> Result<SStmt, Diagnostic> {
        if !self.eat_kw("if") {
            return self.atom();
        }
        let prob = matches!(self.tok(), Tok::Ident(w) if w == "prob") && *self.peek(1) == Tok::Sym("(");
        self.note("`prob`".into());
        let cond = if prob {
            self.bump();
            self.expect_sym("(")?;
            let e = self.expr()?;
            self.expect_sym(")")?;
            e
        } else {
            self.expr()?
        };
        self.expect_kw("then")?;
        let a = self.branch()?;
        self.expect_kw("else")?;
        let b = self.branch()?;
        Ok(if prob {
            SStmt::IfProb(cond, Box::new(a), Box::new(b))
        } else {
            SStmt::If(cond, Box::new(a), Box::new(b))
        })
    }

    fn atom(&mut self) -> Result<SStmt, Diagnostic> {
        if self.eat_kw("ok") {
            return Ok(SStmt::Ok);
        }
        if self.eat_kw("tick") {
            return Ok(SStmt::Tick);
        }
        if self.eat_kw("call") {
            return Ok(SStmt::Call(self.ident()?));
        }
        if self.eat_kw("measure") {
            let reg = self.ident()?;
            let var = self.ident()?;
            return Ok(SStmt::Measure { reg, var });
        }
        if self.eat_sym("(") {
            let s = self.stmt()?;
            self.expect_sym(")")?;
            return Ok(s);
        }
        if self.eat_sym("[") {
            let e = self.expr()?;
            self.expect_sym("]")?;
            return Ok(SStmt::Spec(e));
        }
        self.note("`if`".into());
        let target = self.ident()?;
        self.expect_sym(":=")?;
        let call_of = |p: &Parser, w: &str| matches!(p.tok(), Tok::Ident(x) if x == w) && *p.peek(1) == Tok::Sym("(");
        if call_of(self, "zero") {
            self.bump();
            self.bump();
            let n = self.small()?;
            self.expect_sym(")")?;
            return Ok(SStmt::Zero { reg: target, n });
        }
        if call_of(self, "apply") {
            self.bump();
            self.bump();
            let gate = if self.eat_kw("H") {
                Gate::H
            } else if self.eat_kw("invmean") {
                Gate::InvMean
            } else if self.eat_kw("oracle") {
                Gate::Oracle(self.ident()?)
            } else {
                return Err(self.error());
            };
            self.expect_sym(",")?;
            let pos = self.pos();
            let reg = self.ident()?;
            if reg != target {
                return Err(Diagnostic::syntax(
                    pos,
                    format!("`apply` acts on `{reg}` but assigns `{target}`"),
                    vec![format!("`{target}`")],
                ));
            }
            self.expect_sym(")")?;
            return Ok(SStmt::Apply { reg, gate });
        }
        Ok(SStmt::Assign(target, self.expr()?))
    }

    pub fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let a = self.or()?;
        if self.eat_sym("=>") {
            Ok(Expr::implies(a, self.expr()?))
        } else {
            Ok(a)
        }
    }

    fn or(&mut self) -> Result<Expr, Diagnostic> {
        let mut a = self.and()?;
        while self.eat_sym("\\/") {
            a = Expr::or(a, self.and()?);
        }
        Ok(a)
    }

    fn and(&mut self) -> Result<Expr, Diagnostic> {
        let mut a = self.not()?;
        while self.eat_sym("/\\") {
            a = Expr::and(a, self.not()?);
        }
        Ok(a)
    }

    fn not(&mut self) -> Result<Expr, Diagnostic> {
        if self.eat_kw("not") {
            Ok(Expr::Not(Box::new(self.not()?)))
        } else {
            self.cmp()
        }
    }

    fn cmp(&mut self) -> Result<Expr, Diagnostic> {
        const OPS: [(&str, CmpOp); 6] = [
            ("=", CmpOp::Eq),
            ("#", CmpOp::Ne),
            ("<", CmpOp::Lt),
            ("<=", CmpOp::Le),
            (">", CmpOp::Gt),
            (">=", CmpOp::Ge),
        ];
        let first = self.sum()?;
        let mut rest = Vec::new();
        loop {
            let mut hit = None;
            for (s, op) in OPS {
                if self.at_sym(s) {
                    hit = Some(op);
                }
            }
            match hit {
                Some(op) => {
                    self.bump();
                    rest.push((op, self.sum()?));
                }
                None => break,
            }
        }
        Ok(if rest.is_empty() {
            first
        } else {
            Expr::Cmp(Box::new(first), rest)
        })
    }

    fn sum(&mut self) -> Result<Expr, Diagnostic> {
        let mut a = self.prod()?;
        loop {
            if self.eat_sym("+") {
                a = Expr::add(a, self.prod()?);
            } else if self.eat_sym("-") {
                a = Expr::sub(a, self.prod()?);
            } else {
                return Ok(a);
            }
        }
    }

    fn prod(&mut self) -> Result<Expr, Diagnostic> {
        let mut a = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                BinOp::Mul
            } else if self.eat_sym("/") {
                BinOp::Div
            } else if self.eat_kw("div") {
                BinOp::IntDiv
            } else if self.eat_kw("mod") {
                BinOp::Mod
            } else {
                return Ok(a);
            };
            a = Expr::bin(op, a, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        if !self.eat_sym("-") {
            return self.power();
        }
        // `-3` is a literal unless it is the base of a power.
        let literal = matches!(self.tok(), Tok::Int(_) | Tok::Real(_)) && *self.peek(1) != Tok::Sym("^");
        if literal {
            let pos = self.pos();
            return match self.bump() {
                Tok::Int(s) => format!("-{s}").parse().map(Expr::Int).map_err(|_| {
                    Diagnostic::syntax(
                        pos,
                        format!("`-{s}` does not fit in 64 bits"),
                        vec!["a smaller integer".into()],
                    )
                }),
                Tok::Real(s) => real(&format!("-{s}"), pos),
                _ => unreachable!(),
            };
        }
        Ok(Expr::Neg(Box::new(self.unary()?)))
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.primary()?;
        if self.eat_sym("^") {
            Ok(Expr::bin(BinOp::Pow, base, self.unary()?))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr, Diagnostic> {
        for (w, e) in [
            ("true", Expr::Bool(true)),
            ("false", Expr::Bool(false)),
            ("inf", Expr::Inf),
        ] {
            if self.eat_kw(w) {
                return Ok(e);
            }
        }
        if self.eat_kw("rand") {
            self.expect_sym("(")?;
            let e = self.expr()?;
            self.expect_sym(")")?;
            return Ok(Expr::rand(e));
        }
        if self.eat_sym("(") {
            let e = self.expr()?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        self.note("a number".into());
        self.note("an identifier".into());
        let pos = self.pos();
        match self.tok().clone() {
            Tok::Int(s) => {
                self.bump();
                s.parse().map(Expr::Int).map_err(|_| {
                    Diagnostic::syntax(
                        pos,
                        format!("`{s}` does not fit in 64 bits"),
                        vec!["a smaller integer".into()],
                    )
                })
            }
            Tok::Real(s) => {
                self.bump();
                real(&s, pos)
            }
            Tok::Primed(name) => {
                self.bump();
                Ok(Expr::Primed(name))
            }
            Tok::Ident(name) if *self.peek(1) == Tok::Sym("(") && !KEYWORDS.contains(&name.as_str()) => {
                let f = Func::from_name(&name).ok_or_else(|| {
                    Diagnostic::syntax(
                        pos,
                        format!("unknown function `{name}`"),
                        vec!["`binom`, `sqrt`, `sin`, `cos`, `arcsin` or `abs`".into()],
                    )
                })?;
                self.bump();
                self.bump();
                let mut args = vec![self.expr()?];
                while self.eat_sym(",") {
                    args.push(self.expr()?);
                }
                self.expect_sym(")")?;
                if args.len() != f.arity() {
                    return Err(Diagnostic::syntax(
                        pos,
                        format!("`{name}` takes {} argument(s), got {}", f.arity(), args.len()),
                        vec![format!("{} argument(s)", f.arity())],
                    ));
                }
                Ok(Expr::Call(f, args))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident()?)),
            _ => Err(self.error()),
        }
    }
}

fn real(s: &str, pos: Pos) -> Result<Expr, Diagnostic> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Expr::Real(v)),
        _ => Err(Diagnostic::syntax(
            pos,
            format!("`{s}` is out of range"),
            vec!["a finite number".into()],
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment() {
        assert_eq!(
            parse_stmt("x := x - 1").unwrap(),
            SStmt::Assign("x".into(), Expr::sub(Expr::var("x"), Expr::Int(1)))
        );
    }

    #[test]
    fn precedence() {
        let e = parse_expr("a /\\ b \\/ c => d").unwrap();
        let want = Expr::implies(
            Expr::or(Expr::and(Expr::var("a"), Expr::var("b")), Expr::var("c")),
            Expr::var("d"),
        );
        assert_eq!(e, want);
        assert_eq!(
            parse_expr("-2^2").unwrap(),
            Expr::Neg(Box::new(Expr::bin(BinOp::Pow, Expr::Int(2), Expr::Int(2))))
        );
        assert_eq!(parse_expr("-2 * x").unwrap(), Expr::mul(Expr::Int(-2), Expr::var("x")));
        assert_eq!(
            parse_expr("0 = x' < x").unwrap(),
            Expr::Cmp(
                Box::new(Expr::Int(0)),
                vec![(CmpOp::Eq, Expr::primed("x")), (CmpOp::Lt, Expr::var("x"))]
            )
        );
    }

    #[test]
    fn sequence_and_branches() {
        let s = parse_stmt("if x = 0 then ok else (x := x - 1; call P)").unwrap();
        match s {
            SStmt::If(_, a, b) => {
                assert_eq!(*a, SStmt::Ok);
                assert!(matches!(*b, SStmt::Seq(..)));
            }
            other => panic!("{other:?}"),
        }
        let s = parse_stmt("if prob(1/2) then x := rand(2) else tick; tick").unwrap();
        assert!(matches!(s, SStmt::Seq(ref a, _) if matches!(**a, SStmt::IfProb(..))));
    }

    #[test]
    fn quantum_statements() {
        let s = parse_stmt("psi := zero(2); psi := apply(oracle f, psi); measure psi r").unwrap();
        let want = SStmt::seq(
            SStmt::Zero {
                reg: "psi".into(),
                n: 2,
            },
            SStmt::seq(
                SStmt::Apply {
                    reg: "psi".into(),
                    gate: Gate::Oracle("f".into()),
                },
                SStmt::Measure {
                    reg: "psi".into(),
                    var: "r".into(),
                },
            ),
        );
        assert_eq!(s, want);
        assert!(parse_stmt("psi := apply(H, phi)").is_err());
    }

    #[test]
    fn incomplete_input() {
        let d = parse_stmt("if prob(0.5) then ok else").unwrap_err();
        assert_eq!(d.pos, Pos { line: 1, col: 26 });
        assert!(d.message.contains("end of input"));
        assert!(d.expected.contains(&"`ok`".to_string()));
        assert!(d.expected.contains(&"`if`".to_string()));
    }

    #[test]
    fn items() {
        let src =
            "var x : -4,..9 = 2\nqreg psi : 1\noracle f = 01\nconst k = 3\ndef P = ok\nmain call P\nspec timed x' = 0";
        let p = parse(src).unwrap();
        assert_eq!(p.items.len(), 7);
        assert_eq!(p.items[4].pos, Pos { line: 5, col: 1 });
        assert!(matches!(
            &p.items[0].node,
            Item::Var {
                domain: Domain::Range { lo: -4, hi: 9 },
                init: Some(Expr::Int(2)),
                ..
            }
        ));
        assert!(p.spec().unwrap().timed);
        let d = parse("var x : 3,..3").unwrap_err();
        assert!(d.message.contains("empty"));
        let d = parse("x := 1").unwrap_err();
        assert!(d.expected.contains(&"`main`".to_string()));
    }
}
