use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use salemforge::numerics::format_rational;
use salemforge::spectrum::{Label, SpectrumEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One spectrum entry as printed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub d: u32,
    pub tuple: Vec<u32>,
    pub lo: String,
    pub hi: String,
    pub inside: usize,
    pub on: usize,
    pub outside: usize,
    pub label: Label,
}

impl Row {
    pub fn new(entry: &SpectrumEntry, width: &BigRational) -> Self {
        let value = entry.value.refine(width);
        Row {
            d: entry.key.d(),
            tuple: entry.key.tuple().to_vec(),
            lo: format_rational(value.lo()),
            hi: format_rational(value.hi()),
            inside: entry.census.inside,
            on: entry.census.on,
            outside: entry.census.outside,
            label: entry.label,
        }
    }
}

pub const COLUMNS: [&str; 8] = ["d", "tuple", "lo", "hi", "inside", "on", "outside", "label"];

pub fn join_tuple(t: &[u32]) -> String {
    t.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Rows in the given order; callers sort by value.
pub fn emit_table(rows: &[Row], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory write");
            for r in rows {
                w.write_record([
                    r.d.to_string(),
                    join_tuple(&r.tuple),
                    r.lo.clone(),
                    r.hi.clone(),
                    r.inside.to_string(),
                    r.on.to_string(),
                    r.outside.to_string(),
                    r.label.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use salemforge::spectrum::{classify_entry, SpectrumKey};

    #[test]
    fn empty_table() {
        assert_eq!(emit_table(&[], Format::Json), "[]\n");
        assert_eq!(
            emit_table(&[], Format::Csv),
            "d,tuple,lo,hi,inside,on,outside,label\n"
        );
    }

    #[test]
    fn one_row() {
        let e = classify_entry(&SpectrumKey::new(4, vec![2, 3]).unwrap()).unwrap();
        let width = BigRational::new(1.into(), 1000.into());
        let csv = emit_table(&[Row::new(&e, &width)], Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("4,\"2,3\","));
        assert!(lines[1].ends_with(",pisot_like"));
        let json = emit_table(&[Row::new(&e, &width)], Format::Json);
        let back: Vec<Row> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Row::new(&e, &width)]);
    }
}
