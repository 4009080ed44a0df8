//! Calculator tool against an exact rational reference.

mod support;

#[test]
fn arithmetic_matches_exact_rationals() {
    assert_eq!(support::check_calc_arithmetic(8_000, 0x5eed), Ok(8_000));
}

#[test]
fn square_roots_match_integer_reference() {
    assert_eq!(support::check_calc_sqrt(2_000, 0x5067), Ok(2_000));
}
