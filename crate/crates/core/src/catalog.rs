//! Reference functions used by tests, the acceptance suite and the demo.

use crate::mixedpoly::{parse, MixedFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub expr: &'static str,
}

impl CatalogEntry {
    pub fn function(&self) -> MixedFunction {
        parse(self.expr, None).expect("catalog expressions parse")
    }
}

/// Non-degenerate functions with isolated singularities.
pub const NONDEGENERATE: &[CatalogEntry] = &[
    CatalogEntry { name: "quadric", expr: "z1^2 + z2^2" },
    CatalogEntry { name: "brieskorn-3-7", expr: "z1^3 + z2^7" },
    CatalogEntry { name: "weighted-join", expr: "z1^2*z2 + z2^3*z3 + z3^4*z1 + z4^2" },
    CatalogEntry { name: "jacobian-refined", expr: "(z1^9 + z2^3 + z3^6)*z2 + z3^7 + z4^7" },
    CatalogEntry { name: "exceptional", expr: "z1^7 + z1^4*z2 + z2^7" },
    CatalogEntry { name: "brieskorn-2-3-5", expr: "z1^2 + z2^3 + z3^5" },
    CatalogEntry { name: "vanishing-axis", expr: "z1^3*z2 + z2^4" },
    CatalogEntry { name: "cyclic", expr: "z1^2*z2 + z2^2*z3 + z3^2*z1" },
    CatalogEntry { name: "mixed-cusp", expr: "z1^2*~z1 + z2^3" },
];

/// Functions with a degenerate face.
pub const DEGENERATE: &[CatalogEntry] = &[
    CatalogEntry { name: "square-of-linear", expr: "(z1 + z2)^2" },
    CatalogEntry { name: "real-valued", expr: "z1*~z1 + z2*~z2" },
];

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    NONDEGENERATE.iter().chain(DEGENERATE).find(|e| e.name == name).copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_parse() {
        for e in NONDEGENERATE.iter().chain(DEGENERATE) {
            assert!(!e.function().is_zero(), "{}", e.name);
        }
        assert_eq!(lookup("quadric").unwrap().expr, "z1^2 + z2^2");
    }
}
