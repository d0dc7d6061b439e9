//! JSON grid files: hex symbols, `null` for an erasure, and the field
//! descriptor so a reader needs nothing else.

use eii_codes::gf::{FieldDescriptor, Gf2Poly};
use eii_codes::{Field, FieldContext, SymbolGrid};
use serde::{Deserialize, Serialize};

use crate::fail::Failure;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFile {
    pub m: usize,
    pub n: usize,
    pub field: FieldDescriptor,
    /// Profile text of the code that produced the grid, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    pub cells: Vec<Vec<Option<String>>>,
}

impl GridFile {
    pub fn from_grid(field: &FieldContext, grid: &SymbolGrid<Gf2Poly>, code: Option<String>) -> Self {
        let cells = (0..grid.rows())
            .map(|i| {
                (0..grid.cols())
                    .map(|j| (!grid.is_erased(i, j)).then(|| field.to_hex(grid.get(i, j))))
                    .collect()
            })
            .collect();
        Self {
            m: grid.rows(),
            n: grid.cols(),
            field: field.descriptor(),
            code,
            cells,
        }
    }

    pub fn to_grid(&self, field: &FieldContext) -> Result<SymbolGrid<Gf2Poly>, Failure> {
        if self.cells.len() != self.m || self.cells.iter().any(|r| r.len() != self.n) {
            return Err(Failure::usage(format!("cells do not form a {} × {} grid", self.m, self.n)));
        }
        let mut grid = SymbolGrid::filled(self.m, self.n, field.zero());
        for (i, row) in self.cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                match cell {
                    None => grid.erase(i, j),
                    Some(hex) => {
                        let v = field
                            .from_hex(hex)
                            .map_err(|e| Failure::usage(format!("cell ({i},{j}) = {hex:?}: {e}")))?;
                        grid.set(i, j, v);
                    }
                }
            }
        }
        Ok(grid)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }
}
