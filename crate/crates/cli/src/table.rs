//! CSV tables with the fixed float format of every sweep.

use std::io::{self, Write};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn write(&self, out: &mut impl Write) -> io::Result<()> {
        match self {
            // 9 significant digits
            Cell::Float(v) => write!(out, "{v:.8e}"),
            Cell::Int(v) => write!(out, "{v}"),
            Cell::Text(v) => write!(out, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn any_unconverged(&self) -> bool {
        self.rows.iter().any(|r| !r.converged)
    }

    /// Writes the header and rows. A trailing `converged` column (1/0) is
    /// added only when some row failed to converge, so fully converged
    /// sweeps keep the plain schema.
    pub fn write(&self, out: &mut impl Write) -> io::Result<()> {
        let flag = self.any_unconverged();
        write!(out, "{}", self.header.join(","))?;
        if flag {
            write!(out, ",converged")?;
        }
        writeln!(out)?;
        for row in &self.rows {
            for (i, cell) in row.cells.iter().enumerate() {
                if i > 0 {
                    write!(out, ",")?;
                }
                cell.write(out)?;
            }
            if flag {
                write!(out, ",{}", u8::from(row.converged))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
