//! Example representations shipped with the crate.

use crate::error::{Error, Result};
use crate::repspec::RepSpec;

const SOURCES: &[(&str, &str)] = &[
    ("zero", include_str!("../reps/zero.toml")),
    ("scalar", include_str!("../reps/scalar.toml")),
    ("e12", include_str!("../reps/e12.toml")),
    ("e11_e12", include_str!("../reps/e11_e12.toml")),
    ("borel", include_str!("../reps/borel.toml")),
    ("diagonal_half", include_str!("../reps/diagonal_half.toml")),
    ("gl2", include_str!("../reps/gl2.toml")),
    ("sl2_natural", include_str!("../reps/sl2_natural.toml")),
    ("sl2_adjoint", include_str!("../reps/sl2_adjoint.toml")),
    ("heisenberg", include_str!("../reps/heisenberg.toml")),
];

pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

pub fn get(name: &str) -> Result<RepSpec> {
    let (_, text) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Input(format!("unknown bundled example {name:?}")))?;
    RepSpec::parse(text, &format!("{name}.toml"))
}

pub fn all() -> Vec<RepSpec> {
    names()
        .into_iter()
        .map(|n| get(n).expect("bundled examples parse"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_parses_under_its_name() {
        for name in names() {
            let spec = get(name).unwrap();
            assert_eq!(spec.name, name);
            spec.rep().unwrap();
        }
        assert!(get("nope").is_err());
    }

    #[test]
    fn lie_algebra_dimensions() {
        let dims: Vec<(String, usize)> = all()
            .iter()
            .map(|s| (s.name.clone(), s.rep().unwrap().dim_l()))
            .collect();
        let expect = [
            ("zero", 0),
            ("scalar", 1),
            ("e12", 1),
            ("e11_e12", 2),
            ("borel", 3),
            ("diagonal_half", 1),
            ("gl2", 4),
            ("sl2_natural", 3),
            ("sl2_adjoint", 3),
            ("heisenberg", 3),
        ];
        for ((n, d), (en, ed)) in dims.iter().zip(expect) {
            assert_eq!((n.as_str(), *d), (en, ed));
        }
    }
}
