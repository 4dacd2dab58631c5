//! Named example structures shared by the CLI, the demo page and the tests.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::sparse_from_dense;
use crate::quadratic::QuadraticSpace;
use crate::scalar::Scalar;
use crate::spinor::build_spinor_model;
use crate::wall_brauer::{clifford_n, matrix_superalgebra, queer_superalgebra, FiniteSuperAlgebra};

pub const QUADRATIC_NAMES: [&str; 3] = ["d2-n11", "d4-n11", "d10-n10"];

#[derive(Clone, Debug)]
pub enum CatalogEntry {
    Quadratic(QuadraticSpace),
    Associative(FiniteSuperAlgebra<Scalar>),
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogListing {
    pub name: String,
    pub kind: &'static str,
    pub description: &'static str,
}

pub fn listing() -> Vec<CatalogListing> {
    let rows: [(&str, &str, &str); 6] = [
        ("d2-n11", "quadratic", "d = 2, N = (1,1): [Q+,Q+] = H+P, [Q-,Q-] = H-P"),
        ("d4-n11", "quadratic", "d = 4, N = (1,1): S+ ⊗ S- → V"),
        ("d10-n10", "quadratic", "d = 10, N = (1,0): Sym²S+ → V"),
        ("cliff-<n>", "associative", "Clifford superalgebra on n odd generators with ξ² = 1"),
        ("matrix-<p>-<q>", "associative", "matrix superalgebra M(p|q)"),
        ("queer-<n>", "associative", "queer superalgebra Q(n)"),
    ];
    rows.iter().map(|&(name, kind, description)| CatalogListing { name: name.to_string(), kind, description }).collect()
}

/// The d = 2 table written out directly.
pub fn d2_table() -> QuadraticSpace {
    let v = |a: i64, b: i64| sparse_from_dense(&[Scalar::from_int(a), Scalar::from_int(b)]);
    QuadraticSpace::new("d2-n11", 2, 2, vec![(0, 0, v(1, 1)), (1, 1, v(1, -1))])
        .expect("surjective")
        .with_names(vec!["Q+".into(), "Q-".into()], vec!["H".into(), "P".into()])
        .expect("two names each")
}

pub fn quadratic(name: &str) -> Result<QuadraticSpace> {
    match lookup(name)? {
        CatalogEntry::Quadratic(q) => Ok(q),
        CatalogEntry::Associative(_) => Err(Error::MalformedInput(format!("'{name}' is an associative algebra, not a quadratic space"))),
    }
}

pub fn associative(name: &str) -> Result<FiniteSuperAlgebra<Scalar>> {
    match lookup(name)? {
        CatalogEntry::Associative(a) => Ok(a),
        CatalogEntry::Quadratic(_) => Err(Error::MalformedInput(format!("'{name}' is a quadratic space, not an associative algebra"))),
    }
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    let spinor = |d: usize, p: usize, q: usize| -> Result<CatalogEntry> {
        Ok(CatalogEntry::Quadratic(build_spinor_model(d)?.to_quadratic_space(p, q)?))
    };
    match name {
        "d2-n11" => return spinor(2, 1, 1),
        "d4-n11" => return spinor(4, 1, 1),
        "d10-n10" => return spinor(10, 1, 0),
        _ => {}
    }
    let parts: Vec<&str> = name.split('-').collect();
    let num = |s: &str| -> Result<usize> {
        s.parse::<usize>().map_err(|_| Error::MalformedInput(format!("bad number '{s}' in catalog name '{name}'")))
    };
    match parts.as_slice() {
        ["cliff", n] => Ok(CatalogEntry::Associative(clifford_n(num(n)?)?)),
        ["matrix", p, q] => Ok(CatalogEntry::Associative(matrix_superalgebra(num(p)?, num(q)?)?)),
        ["queer", n] => Ok(CatalogEntry::Associative(queer_superalgebra(num(n)?)?)),
        _ => Err(Error::MalformedInput(format!("unknown catalog entry '{name}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d2_entry_is_the_table() {
        assert_eq!(quadratic("d2-n11").unwrap(), d2_table());
    }

    #[test]
    fn lookups() {
        assert_eq!(quadratic("d10-n10").unwrap().dim_b(), 16);
        assert_eq!(associative("matrix-2-1").unwrap().dim(), 9);
        assert_eq!(associative("queer-2").unwrap().dim(), 8);
        assert_eq!(associative("cliff-3").unwrap().dim(), 8);
        assert!(lookup("cliff-x").is_err());
        assert!(lookup("nope").is_err());
        assert!(quadratic("cliff-2").is_err());
    }
}
