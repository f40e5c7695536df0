//! CSV documents: a header row, data rows, and trailing `# key=value` lines.

use csv::{ReaderBuilder, Terminator, WriterBuilder};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Footer lines without the leading `# `.
    pub footer: Vec<String>,
}

impl CsvTable {
    pub fn emit(&self) -> Result<String, CliError> {
        let mut w = WriterBuilder::new()
            .terminator(Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        let mut text = String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?;
        for line in &self.footer {
            text.push_str("# ");
            text.push_str(&line.replace('\n', " "));
            text.push('\n');
        }
        Ok(text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let body_end = footer_start(text);
        let (body, tail) = text.split_at(body_end);
        let mut rdr = ReaderBuilder::new()
            .has_headers(true)
            .from_reader(body.as_bytes());
        let header = rdr
            .headers()
            .map_err(|e| CliError::Io(e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| CliError::Io(e.to_string()))?;
            rows.push(rec.iter().map(str::to_owned).collect());
        }
        let footer = tail
            .lines()
            .map(|l| {
                l.strip_prefix("# ")
                    .or_else(|| l.strip_prefix('#'))
                    .unwrap_or(l)
                    .to_owned()
            })
            .collect();
        Ok(Self {
            header,
            rows,
            footer,
        })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Value of a `key=value` footer line.
    pub fn footer_value(&self, key: &str) -> Option<&str> {
        self.footer
            .iter()
            .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
    }
}

/// Byte offset of the first line of the trailing block of `#` lines.
fn footer_start(text: &str) -> usize {
    let mut start = text.len();
    let mut rest = text;
    while !rest.is_empty() {
        let trimmed = rest.strip_suffix('\n').unwrap_or(rest);
        let line_start = trimmed.rfind('\n').map_or(0, |i| i + 1);
        if !trimmed[line_start..].starts_with('#') {
            break;
        }
        start = line_start;
        rest = &text[..line_start];
    }
    start
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CsvTable {
        CsvTable {
            header: vec!["n".into(), "value".into(), "note".into()],
            rows: vec![
                vec!["0".into(), "1.0000000000000000e0".into(), "".into()],
                vec!["1".into(), "-2.5e-3".into(), "has, comma".into()],
            ],
            footer: vec!["max_abs_dev=0".into(), "agreement=true".into()],
        }
    }

    #[test]
    fn round_trip() {
        let t = sample();
        let text = t.emit().unwrap();
        let back = CsvTable::parse(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.emit().unwrap(), text);
        assert_eq!(back.footer_value("agreement"), Some("true"));
        assert_eq!(back.column("value"), Some(1));
    }

    #[test]
    fn no_footer() {
        let t = CsvTable {
            footer: vec![],
            ..sample()
        };
        let text = t.emit().unwrap();
        assert_eq!(CsvTable::parse(&text).unwrap(), t);
    }
}
