use std::fmt::Display;

/// A whitespace-separated table with a header row.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Command output: `key=value` lines followed by table blocks.
#[derive(Debug, Clone, Default)]
pub struct Report {
    fields: Vec<(String, String)>,
    tables: Vec<Table>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn table(&mut self, t: Table) -> &mut Self {
        self.tables.push(t);
        self
    }

    /// The fields as `# key=value` comment lines, which automaton and code
    /// parsers skip.
    pub fn render_comments(&self) -> String {
        self.fields.iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
    }

    pub fn render(&self, pretty: bool) -> String {
        let mut out = String::new();
        if pretty {
            let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &self.fields {
                out.push_str(&format!("{k:<width$}  {v}\n"));
            }
        } else {
            for (k, v) in &self.fields {
                out.push_str(&format!("{k}={v}\n"));
            }
        }
        for t in &self.tables {
            if pretty {
                out.push_str(&format!("\n{}\n", t.name));
                let mut widths: Vec<usize> = t.columns.iter().map(String::len).collect();
                for row in &t.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.len());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
                    padded.join("  ") + "\n"
                };
                out.push_str(&line(&t.columns));
                for row in &t.rows {
                    out.push_str(&line(row));
                }
            } else {
                out.push_str(&format!("table={}\n", t.name));
                out.push_str(&t.columns.join(" "));
                out.push('\n');
                for row in &t.rows {
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
                out.push_str("end\n");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_and_pretty() {
        let mut r = Report::new();
        r.field("n", 4).field("synchronizing", true);
        r.table(Table {
            name: "t".into(),
            columns: vec!["a".into(), "bb".into()],
            rows: vec![vec!["1".into(), "2".into()]],
        });
        assert_eq!(r.render(false), "n=4\nsynchronizing=true\ntable=t\na bb\n1 2\nend\n");
        assert!(r.render(true).starts_with("n              4\n"));
    }
}
