#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use proptest::prelude::*;

use qpp::ast::{Gate, Item, SStmt, SourceProgram, Spanned, SpecDecl};
use qpp_core::semantics::{BinOp, CmpOp, Domain, Expr, Func};

const NAMES: &[&str] = &["x", "y", "n", "b", "r", "acc", "x_1"];

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(NAMES).prop_map(String::from)
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-1000i64..1000).prop_map(Expr::Int),
        (-1e6f64..1e6).prop_map(Expr::Real),
        prop::sample::select(&[0.5, 1e-7, 2.5e12, -3.25][..]).prop_map(Expr::Real),
        any::<bool>().prop_map(Expr::Bool),
        Just(Expr::Inf),
        name().prop_map(Expr::Var),
        name().prop_map(Expr::Primed),
        Just(Expr::var("t")),
        Just(Expr::primed("t")),
    ]
}

pub fn expr() -> impl Strategy<Value = Expr> {
    let bin = prop::sample::select(
        &[
            BinOp::Implies,
            BinOp::Or,
            BinOp::And,
            BinOp::Add,
            BinOp::Sub,
            BinOp::Mul,
            BinOp::Div,
            BinOp::IntDiv,
            BinOp::Mod,
            BinOp::Pow,
        ][..],
    );
    let cmp = prop::sample::select(&[CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge][..]);
    let unary = prop::sample::select(&[Func::Sqrt, Func::Sin, Func::Cos, Func::Arcsin, Func::Abs][..]);
    leaf().prop_recursive(5, 48, 4, move |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            inner.clone().prop_map(|a| Expr::Not(Box::new(a))),
            (bin.clone(), inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::bin(op, a, b)),
            (inner.clone(), prop::collection::vec((cmp.clone(), inner.clone()), 1..4))
                .prop_map(|(a, rest)| Expr::Cmp(Box::new(a), rest)),
            (unary.clone(), inner.clone()).prop_map(|(f, a)| Expr::Call(f, vec![a])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Call(Func::Binom, vec![a, b])),
            inner.prop_map(|a| Expr::Rand(Box::new(a))),
        ]
    })
}

pub fn stmt() -> impl Strategy<Value = SStmt> {
    let gate = prop_oneof![Just(Gate::H), Just(Gate::InvMean), name().prop_map(Gate::Oracle)];
    let leaf = prop_oneof![
        Just(SStmt::Ok),
        Just(SStmt::Tick),
        name().prop_map(SStmt::Call),
        (name(), expr()).prop_map(|(x, e)| SStmt::Assign(x, e)),
        (name(), 1usize..5).prop_map(|(reg, n)| SStmt::Zero { reg, n }),
        (name(), gate).prop_map(|(reg, gate)| SStmt::Apply { reg, gate }),
        (name(), name()).prop_map(|(reg, var)| SStmt::Measure { reg, var }),
        expr().prop_map(SStmt::Spec),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SStmt::seq(a, b)),
            (expr(), inner.clone(), inner.clone()).prop_map(|(c, a, b)| SStmt::If(c, Box::new(a), Box::new(b))),
            (expr(), inner.clone(), inner).prop_map(|(c, a, b)| SStmt::IfProb(c, Box::new(a), Box::new(b))),
        ]
    })
}

pub fn item() -> impl Strategy<Value = Item> {
    let domain = prop_oneof![
        Just(Domain::Bool),
        (-20i64..20, 1i64..30).prop_map(|(lo, w)| Domain::Range { lo, hi: lo + w }),
    ];
    prop_oneof![
        (name(), domain, prop::option::of(expr())).prop_map(|(name, domain, init)| Item::Var { name, domain, init }),
        (name(), 1usize..8).prop_map(|(name, n)| Item::QReg { name, n }),
        (name(), 0usize..3, prop::collection::vec(any::<bool>(), 8)).prop_map(|(name, k, bits)| Item::Oracle {
            name,
            bits: bits[..1 << k].iter().map(|&b| if b { '1' } else { '0' }).collect(),
        }),
        (name(), expr()).prop_map(|(name, value)| Item::Const { name, value }),
        (name(), stmt()).prop_map(|(name, body)| Item::Def { name, body }),
        stmt().prop_map(Item::Main),
        (any::<bool>(), any::<bool>(), expr()).prop_map(|(timed, dist, expr)| Item::Spec(SpecDecl {
            timed,
            dist,
            expr
        })),
    ]
}

pub fn program() -> impl Strategy<Value = SourceProgram> {
    prop::collection::vec(item(), 0..6).prop_map(|items| SourceProgram {
        items: items.into_iter().map(Spanned::new).collect(),
    })
}

/// Every demo command with a stored output, by file stem.
pub const DEMOS: &[(&str, &[&str])] = &[
    ("dj_n1", &["demo", "dj", "--n", "1"]),
    ("dj_n2", &["demo", "dj", "--n", "2"]),
    ("dj_n3", &["demo", "dj", "--n", "3"]),
    ("grover_n2", &["demo", "grover", "--n", "2"]),
    ("grover_n4_x1_5", &["demo", "grover", "--n", "4", "--x1", "5"]),
    ("grover_n4_k4", &["demo", "grover", "--n", "4", "--k", "4"]),
    ("walk_x3", &["demo", "walk", "--x", "3"]),
    ("walk_x0", &["demo", "walk", "--x", "0", "--kmax", "4"]),
    ("mixed", &["demo", "mixed"]),
    ("mixed_seed7", &["demo", "mixed", "--seed", "7", "--states", "20"]),
];

pub const FORMATS: [(&str, &str); 2] = [("table", "txt"), ("json", "json")];

pub fn golden_path(name: &str, ext: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(format!("{name}.{ext}"))
}

pub fn programs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../programs")
}

/// Standard output of a successful `qpp --format <format> <args>`.
pub fn run_demo(format: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qpp"))
        .arg("--format")
        .arg(format)
        .args(args)
        .env_remove("QPP_FUEL")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

/// Runs every demo twice and compares both runs with the stored file.
pub fn check_golden_files() -> Result<usize, String> {
    let mut files = 0;
    for (name, args) in DEMOS {
        for (format, ext) in FORMATS {
            let first = run_demo(format, args)?;
            let second = run_demo(format, args)?;
            if first != second {
                return Err(format!("{name}.{ext} differs between runs"));
            }
            let path = golden_path(name, ext);
            let stored = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            if stored != first {
                return Err(format!("{} is out of date", path.display()));
            }
            files += 1;
        }
    }
    Ok(files)
}
