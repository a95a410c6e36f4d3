//! Named systems shared by the benchmarks.

use symgal_core::expr_io::parse_system;
use symgal_core::SystemSpec;

pub const SYSTEMS: &[(&str, &str)] = &[
    ("airy", r#"{"n":2,"A":[["0","1"],["x","0"]]}"#),
    ("cauchy_euler", r#"{"n":2,"A":[["0","1"],["2/x^2","0"]]}"#),
    ("quadratic", r#"{"n":2,"A":[["2/x","1"],["0","1/x"]]}"#),
    (
        "fuchsian3",
        r#"{"n":3,"A":[["1/x","1","0"],["0","1/x","0"],["0","0","-1/(x+1)"]]}"#,
    ),
];

pub fn system(name: &str) -> SystemSpec {
    let (_, text) = SYSTEMS
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("unknown system {name}"));
    parse_system(text).expect("valid system")
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_systems_parse() {
        for (name, _) in super::SYSTEMS {
            assert!(super::system(name).n() >= 2);
        }
    }
}
