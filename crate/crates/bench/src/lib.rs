//! Sample inputs shared by the benchmarks.

pub const EXACT_COVER: &str = include_str!("../../cli/tests/fixtures/exact_cover.lp");

pub const EXACT_COVER_SPEC: &str = include_str!("../../cli/tests/fixtures/exact_cover.spec");

pub const EXACT_COVER_INPUT: &str = include_str!("../../cli/tests/fixtures/exact_cover_input.lp");
