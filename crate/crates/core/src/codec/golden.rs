//! Plain-text coded-symbol listings: one line per symbol,
//! `j,degree,n0;n1;...,bit`.

use super::encoder::CodedSymbol;
use crate::error::{Error, Result};

pub fn format_symbol(s: &CodedSymbol) -> String {
    let neighbors: Vec<String> = s.neighbors.iter().map(|n| n.to_string()).collect();
    format!("{},{},{},{}", s.index, s.degree, neighbors.join(";"), s.bit)
}

pub fn write_symbols(symbols: &[CodedSymbol]) -> String {
    let mut out = String::new();
    for s in symbols {
        out.push_str(&format_symbol(s));
        out.push('\n');
    }
    out
}

pub fn parse_symbols(text: &str) -> Result<Vec<CodedSymbol>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(lineno, line)| {
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
            let fields: Vec<&str> = line.trim().split(',').collect();
            let [index, degree, neighbors, bit] = fields[..] else {
                return Err(bad("expected 4 comma-separated fields"));
            };
            let index = index.parse().map_err(|_| bad("index"))?;
            let degree: usize = degree.parse().map_err(|_| bad("degree"))?;
            let neighbors = neighbors
                .split(';')
                .map(|n| n.parse::<usize>().map_err(|_| bad("neighbor")))
                .collect::<Result<Vec<_>>>()?;
            let bit: u8 = bit.parse().map_err(|_| bad("bit"))?;
            if bit > 1 {
                return Err(bad("bit must be 0 or 1"));
            }
            if neighbors.len() != degree {
                return Err(bad("degree does not match neighbor count"));
            }
            Ok(CodedSymbol {
                index,
                degree,
                neighbors,
                bit,
            })
        })
        .collect()
}
