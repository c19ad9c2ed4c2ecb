//! Printing a syntax tree and parsing the text back gives the same tree.

mod common;

use proptest::prelude::*;

use qpp::parser::{parse, parse_expr, parse_stmt};
use qpp::print_program;
use qpp::printer::{print_expr, print_stmt};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn expressions_round_trip(e in common::expr()) {
        let text = print_expr(&e);
        let back = parse_expr(&text).map_err(|d| TestCaseError::fail(format!("{text}: {d}")))?;
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(print_expr(&back), text);
    }

    #[test]
    fn statements_round_trip(s in common::stmt()) {
        let text = print_stmt(&s);
        let back = parse_stmt(&text).map_err(|d| TestCaseError::fail(format!("{text}: {d}")))?;
        prop_assert_eq!(&back, &s, "{}", text);
        prop_assert_eq!(print_stmt(&back), text);
    }

    #[test]
    fn programs_round_trip(p in common::program()) {
        let text = print_program(&p);
        let back = parse(&text).map_err(|d| TestCaseError::fail(format!("{text}: {d}")))?;
        prop_assert_eq!(&back, &p, "{}", text);
        prop_assert_eq!(print_program(&back), text);
    }
}

#[test]
fn example_programs_are_printed_stably() {
    let mut seen = 0;
    for entry in std::fs::read_dir(common::programs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "qpp") {
            let src = std::fs::read_to_string(&path).unwrap();
            let p = parse(&src).unwrap();
            let printed = print_program(&p);
            assert_eq!(parse(&printed).unwrap(), p, "{}", path.display());
            assert_eq!(print_program(&parse(&printed).unwrap()), printed);
            seen += 1;
        }
    }
    assert!(seen >= 8);
}
