//! Dimension bookkeeping for the torsionless homogeneous models attached to
//! the magic square.

use serde::Serialize;

/// Dimensions of the Lie algebras that occur in the table.
pub fn algebra_dim(name: &str) -> Option<usize> {
    Some(match name {
        "so(3)" => 3,
        "su(3)" => 8,
        "sp(3)" => 21,
        "su(6)" => 35,
        "so(12)" => 66,
        "f4" => 52,
        "e6" => 78,
        "e7" => 133,
        "e8" => 248,
        "g2" => 14,
        "so(10)" => 45,
        "u(1)" | "so(2)" => 1,
        "su(2)" => 3,
        "u(3)" => 9,
        "u(6)" => 36,
        _ => return None,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ModelEntry {
    pub model: String,
    pub total_algebra_dim: usize,
    pub isotropy_dim: usize,
    pub space_dim: usize,
    pub structure_group: String,
    /// Column of the dimension table (1, 2, 3), or 0 for the two extra cases.
    pub column: usize,
    /// Printed dimension of the space.
    pub printed_dim: usize,
}

impl ModelEntry {
    pub fn matches(&self) -> bool {
        self.space_dim == self.printed_dim && self.space_dim == self.total_algebra_dim - self.isotropy_dim
    }
}

fn sum_dims(parts: &[&str]) -> usize {
    parts.iter().map(|p| algebra_dim(p).expect("known algebra")).sum()
}

struct Row {
    model: &'static str,
    total: &'static [&'static str],
    isotropy: &'static [&'static str],
    group: &'static str,
    column: usize,
    printed: usize,
}

const ROWS: [Row; 14] = [
    Row {
        model: "SU(3)/SO(3)",
        total: &["su(3)"],
        isotropy: &["so(3)"],
        group: "SO(3)",
        column: 1,
        printed: 5,
    },
    Row {
        model: "SU(3)",
        total: &["su(3)", "su(3)"],
        isotropy: &["su(3)"],
        group: "SU(3)",
        column: 1,
        printed: 8,
    },
    Row {
        model: "SU(6)/Sp(3)",
        total: &["su(6)"],
        isotropy: &["sp(3)"],
        group: "Sp(3)",
        column: 1,
        printed: 14,
    },
    Row {
        model: "E6/F4",
        total: &["e6"],
        isotropy: &["f4"],
        group: "F4",
        column: 1,
        printed: 26,
    },
    Row {
        model: "Sp(3)/U(3)",
        total: &["sp(3)"],
        isotropy: &["u(3)"],
        group: "U(3)",
        column: 2,
        printed: 12,
    },
    Row {
        model: "SU(6)/S(U(3)×U(3))",
        total: &["su(6)"],
        isotropy: &["su(3)", "su(3)", "u(1)"],
        group: "S(U(3)×U(3))",
        column: 2,
        printed: 18,
    },
    Row {
        model: "SO(12)/U(6)",
        total: &["so(12)"],
        isotropy: &["u(6)"],
        group: "U(6)",
        column: 2,
        printed: 30,
    },
    Row {
        model: "E7/(E6×SO(2))",
        total: &["e7"],
        isotropy: &["e6", "so(2)"],
        group: "E6×SO(2)",
        column: 2,
        printed: 54,
    },
    Row {
        model: "F4/(Sp(3)×SU(2))",
        total: &["f4"],
        isotropy: &["sp(3)", "su(2)"],
        group: "Sp(3)×SU(2)",
        column: 3,
        printed: 28,
    },
    Row {
        model: "E6/(SU(6)×SU(2))",
        total: &["e6"],
        isotropy: &["su(6)", "su(2)"],
        group: "SU(6)×SU(2)",
        column: 3,
        printed: 40,
    },
    Row {
        model: "E7/(SO(12)×SU(2))",
        total: &["e7"],
        isotropy: &["so(12)", "su(2)"],
        group: "SO(12)×SU(2)",
        column: 3,
        printed: 64,
    },
    Row {
        model: "E8/(E7×SU(2))",
        total: &["e8"],
        isotropy: &["e7", "su(2)"],
        group: "E7×SU(2)",
        column: 3,
        printed: 112,
    },
    Row {
        model: "G2/(SU(2)×SU(2))",
        total: &["g2"],
        isotropy: &["su(2)", "su(2)"],
        group: "SU(2)×SU(2)",
        column: 0,
        printed: 8,
    },
    Row {
        model: "E6/(SO(10)×SO(2))",
        total: &["e6"],
        isotropy: &["so(10)", "so(2)"],
        group: "SO(10)×SO(2)",
        column: 0,
        printed: 32,
    },
];

pub fn model_table() -> Vec<ModelEntry> {
    ROWS.iter()
        .map(|r| {
            let total = sum_dims(r.total);
            let iso = sum_dims(r.isotropy);
            ModelEntry {
                model: r.model.to_string(),
                total_algebra_dim: total,
                isotropy_dim: iso,
                space_dim: total - iso,
                structure_group: r.group.to_string(),
                column: r.column,
                printed_dim: r.printed,
            }
        })
        .collect()
}

/// `n`, `2(n + 1)`, `4(n + 2)` for each base dimension.
pub fn header_pattern_holds(table: &[ModelEntry]) -> bool {
    let col = |c: usize| {
        table
            .iter()
            .filter(|e| e.column == c)
            .map(|e| e.space_dim)
            .collect::<Vec<_>>()
    };
    let base = col(1);
    base == [5, 8, 14, 26]
        && col(2) == base.iter().map(|n| 2 * (n + 1)).collect::<Vec<_>>()
        && col(3) == base.iter().map(|n| 4 * (n + 2)).collect::<Vec<_>>()
}

pub fn render_table(table: &[ModelEntry]) -> String {
    let mut out = format!(
        "{:<22} {:>6} {:>9} {:>6}  {}\n",
        "model", "dim g", "dim iso", "dim X", "structure group"
    );
    for e in table {
        out.push_str(&format!(
            "{:<22} {:>6} {:>9} {:>6}  {}\n",
            e.model, e.total_algebra_dim, e.isotropy_dim, e.space_dim, e.structure_group
        ));
    }
    out
}
