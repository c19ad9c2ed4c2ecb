//! Prints syntax trees back to `.qpp` text. Parentheses are inserted only
//! where precedence requires them, and the output parses back to the same
//! tree.

use qpp_core::semantics::{BinOp, CmpOp, Domain, Expr};

use crate::ast::{Gate, Item, SStmt, SourceProgram};

const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const CMP: u8 = 5;
const SUM: u8 = 6;
const PROD: u8 = 7;
const UNARY: u8 = 8;
const POWER: u8 = 9;
const ATOM: u8 = 10;

pub fn cmp_symbol(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Eq => "=",
        CmpOp::Ne => "#",
        CmpOp::Lt => "<",
        CmpOp::Le => "<=",
        CmpOp::Gt => ">",
        CmpOp::Ge => ">=",
    }
}

fn bin_info(op: BinOp) -> (&'static str, u8, u8, u8) {
    // (symbol, own level, minimum level of the left and right operands)
    match op {
        BinOp::Implies => ("=>", IMPLIES, OR, IMPLIES),
        BinOp::Or => ("\\/", OR, OR, AND),
        BinOp::And => ("/\\", AND, AND, NOT),
        BinOp::Add => ("+", SUM, SUM, PROD),
        BinOp::Sub => ("-", SUM, SUM, PROD),
        BinOp::Mul => ("*", PROD, PROD, UNARY),
        BinOp::Div => ("/", PROD, PROD, UNARY),
        BinOp::IntDiv => ("div", PROD, PROD, UNARY),
        BinOp::Mod => ("mod", PROD, PROD, UNARY),
        BinOp::Pow => ("^", POWER, ATOM, UNARY),
    }
}

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Int(i) if *i < 0 => UNARY,
        Expr::Real(r) if r.is_sign_negative() => UNARY,
        Expr::Neg(_) => UNARY,
        Expr::Not(_) => NOT,
        Expr::Bin(op, ..) => bin_info(*op).1,
        Expr::Cmp(..) => CMP,
        _ => ATOM,
    }
}

fn real(r: f64) -> String {
    // `{:?}` is the shortest text that reads back to the same double and
    // always carries a `.` or an exponent.
    format!("{r:?}")
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr_at(e, IMPLIES, &mut out);
    out
}

fn expr_at(e: &Expr, min: u8, out: &mut String) {
    if level(e) < min {
        out.push('(');
        expr(e, out);
        out.push(')');
    } else {
        expr(e, out);
    }
}

fn expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Int(i) => out.push_str(&i.to_string()),
        Expr::Real(r) => out.push_str(&real(*r)),
        Expr::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Expr::Inf => out.push_str("inf"),
        Expr::Var(v) => out.push_str(v),
        Expr::Primed(v) => {
            out.push_str(v);
            out.push('\'');
        }
        Expr::Neg(a) => {
            out.push('-');
            let mut inner = String::new();
            // A bare number after `-` would read back as a negative literal,
            // and `--` starts a comment.
            let bare = matches!(**a, Expr::Int(_) | Expr::Real(_)) && level(a) == ATOM;
            if bare {
                inner.push('(');
                expr(a, &mut inner);
                inner.push(')');
            } else {
                expr_at(a, UNARY, &mut inner);
            }
            if inner.starts_with('-') {
                out.push(' ');
            }
            out.push_str(&inner);
        }
        Expr::Not(a) => {
            out.push_str("not ");
            expr_at(a, NOT, out);
        }
        Expr::Bin(op, a, b) => {
            let (sym, _, l, r) = bin_info(*op);
            expr_at(a, l, out);
            if *op == BinOp::Pow {
                out.push('^');
            } else {
                out.push(' ');
                out.push_str(sym);
                out.push(' ');
            }
            expr_at(b, r, out);
        }
        Expr::Cmp(first, rest) => {
            expr_at(first, SUM, out);
            for (op, x) in rest {
                out.push(' ');
                out.push_str(cmp_symbol(*op));
                out.push(' ');
                expr_at(x, SUM, out);
            }
        }
        Expr::Call(f, args) => {
            out.push_str(f.name());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                expr_at(a, IMPLIES, out);
            }
            out.push(')');
        }
        Expr::Rand(a) => {
            out.push_str("rand(");
            expr_at(a, IMPLIES, out);
            out.push(')');
        }
    }
}

const SEQ: u8 = 1;
const BRANCH: u8 = 2;

fn stmt_level(s: &SStmt) -> u8 {
    match s {
        SStmt::Seq(..) => SEQ,
        SStmt::If(..) | SStmt::IfProb(..) => BRANCH,
        _ => 3,
    }
}

pub fn print_stmt(s: &SStmt) -> String {
    let mut out = String::new();
    stmt(s, &mut out);
    out
}

fn stmt_at(s: &SStmt, min: u8, out: &mut String) {
    if stmt_level(s) < min {
        out.push('(');
        stmt(s, out);
        out.push(')');
    } else {
        stmt(s, out);
    }
}

fn stmt(s: &SStmt, out: &mut String) {
    match s {
        SStmt::Ok => out.push_str("ok"),
        SStmt::Tick => out.push_str("tick"),
        SStmt::Assign(x, e) => {
            out.push_str(x);
            out.push_str(" := ");
            out.push_str(&print_expr(e));
        }
        SStmt::Seq(a, b) => {
            stmt_at(a, BRANCH, out);
            out.push_str("; ");
            stmt_at(b, SEQ, out);
        }
        SStmt::If(c, a, b) | SStmt::IfProb(c, a, b) => {
            if matches!(s, SStmt::IfProb(..)) {
                out.push_str(&format!("if prob({}) then ", print_expr(c)));
            } else {
                out.push_str(&format!("if {} then ", print_expr(c)));
            }
            stmt_at(a, BRANCH, out);
            out.push_str(" else ");
            stmt_at(b, BRANCH, out);
        }
        SStmt::Zero { reg, n } => out.push_str(&format!("{reg} := zero({n})")),
        SStmt::Apply { reg, gate } => {
            let g = match gate {
                Gate::H => "H".to_string(),
                Gate::Oracle(f) => format!("oracle {f}"),
                Gate::InvMean => "invmean".to_string(),
            };
            out.push_str(&format!("{reg} := apply({g}, {reg})"));
        }
        SStmt::Measure { reg, var } => out.push_str(&format!("measure {reg} {var}")),
        SStmt::Call(p) => out.push_str(&format!("call {p}")),
        SStmt::Spec(e) => out.push_str(&format!("[{}]", print_expr(e))),
    }
}

/// A body laid out one top-level statement per line.
fn body(s: &SStmt, out: &mut String) {
    let mut cur = s;
    loop {
        out.push_str("\n  ");
        match cur {
            SStmt::Seq(a, b) => {
                stmt_at(a, BRANCH, out);
                out.push(';');
                cur = b;
            }
            last => {
                stmt(last, out);
                break;
            }
        }
    }
}

pub fn print_program(p: &SourceProgram) -> String {
    let mut out = String::new();
    for item in &p.items {
        match &item.node {
            Item::Var { name, domain, init } => {
                match domain {
                    Domain::Bool => out.push_str(&format!("var {name} : bool")),
                    Domain::Range { lo, hi } => out.push_str(&format!("var {name} : {lo},..{hi}")),
                }
                if let Some(e) = init {
                    out.push_str(&format!(" = {}", print_expr(e)));
                }
            }
            Item::QReg { name, n } => out.push_str(&format!("qreg {name} : {n}")),
            Item::Oracle { name, bits } => out.push_str(&format!("oracle {name} = {bits}")),
            Item::Const { name, value } => out.push_str(&format!("const {name} = {}", print_expr(value))),
            Item::Def { name, body: b } => {
                out.push_str(&format!("def {name} ="));
                body(b, &mut out);
            }
            Item::Main(b) => {
                out.push_str("main");
                body(b, &mut out);
            }
            Item::Spec(s) => {
                out.push_str("spec ");
                if s.timed {
                    out.push_str("timed ");
                }
                if s.dist {
                    out.push_str("dist ");
                }
                out.push_str(&print_expr(&s.expr));
            }
        }
        out.push('\n');
    }
    out
}
