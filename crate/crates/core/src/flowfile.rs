//! Text format for flow assignments.
//!
//! ```text
//! # comment
//! flips 2 5
//! 1 3/2
//! 2 -1
//! ```
//!
//! `flips` lists the 1-based edges reversed from the canonical orientation
//! (positive edges first to second endpoint, negative edges outward). Each
//! edge then appears exactly once as `<edge> <fraction>`.

use crate::error::{Error, Result};
use crate::flow::{format_rational, parse_rational, FlowAssignment, Rational};
use crate::graph::SignedGraph;
use crate::orientation::Orientation;

pub fn parse_flow_file(g: &SignedGraph, text: &str) -> Result<FlowAssignment> {
    let m = g.num_edges();
    let mut flips: Option<Vec<usize>> = None;
    let mut values: Vec<Option<Rational>> = vec![None; m];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Parse { line, message };
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut tokens = s.split_whitespace();
        let head = tokens.next().expect("non-empty line");
        let edge_id = |t: &str| -> Result<usize> {
            let e: usize = t.parse().map_err(|_| err(format!("bad edge index `{t}`")))?;
            if e == 0 || e > m {
                return Err(err(format!("edge {e} out of range 1..={m}")));
            }
            Ok(e - 1)
        };
        if head == "flips" {
            if flips.is_some() {
                return Err(err("second flips line".into()));
            }
            flips = Some(tokens.map(edge_id).collect::<Result<_>>()?);
            continue;
        }
        let e = edge_id(head)?;
        let value = tokens.next().ok_or_else(|| err("missing value".into()))?;
        if tokens.next().is_some() {
            return Err(err("trailing tokens".into()));
        }
        let v = parse_rational(value).map_err(|_| err(format!("bad fraction `{value}`")))?;
        if values[e].replace(v).is_some() {
            return Err(err(format!("edge {} given twice", e + 1)));
        }
    }
    if let Some(e) = values.iter().position(Option::is_none) {
        return Err(Error::Parse { line: 0, message: format!("no value for edge {}", e + 1) });
    }
    let orientation = Orientation::from_flips(g, &flips.unwrap_or_default())?;
    Ok(FlowAssignment::new(orientation, values.into_iter().map(Option::unwrap).collect()))
}

pub fn format_flow_file(g: &SignedGraph, fa: &FlowAssignment) -> Result<String> {
    let flips = fa.orientation.flips(g)?;
    let mut out = String::from("flips");
    for e in flips {
        out.push_str(&format!(" {}", e + 1));
    }
    out.push('\n');
    for (e, v) in fa.values.iter().enumerate() {
        out.push_str(&format!("{} {}\n", e + 1, format_rational(v)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{rat, ratio};

    fn theta() -> SignedGraph {
        SignedGraph::parse("p 2 3 / e 1 2 + / e 1 2 - / e 1 1 -").unwrap()
    }

    #[test]
    fn round_trip() {
        let g = theta();
        let fa = FlowAssignment::new(Orientation::from_flips(&g, &[1]).unwrap(), vec![ratio(3, 2), rat(-2), rat(1)]);
        let text = format_flow_file(&g, &fa).unwrap();
        assert_eq!(text, "flips 2\n1 3/2\n2 -2\n3 1\n");
        assert_eq!(parse_flow_file(&g, &text).unwrap(), fa);
    }

    #[test]
    fn order_and_comments_are_free() {
        let g = theta();
        let fa = parse_flow_file(&g, "# x\n3 1\n\n1 2\n2 4/2\n").unwrap();
        assert_eq!(fa.orientation, Orientation::canonical(&g));
        assert_eq!(fa.values, vec![rat(2), rat(2), rat(1)]);
    }

    #[test]
    fn errors() {
        let g = theta();
        for bad in ["1 1\n2 1\n", "1 1\n1 1\n2 1\n3 1\n", "0 1\n", "1 x\n2 1\n3 1\n", "flips 4\n", "1 1 1\n"] {
            assert!(parse_flow_file(&g, bad).is_err(), "{bad:?}");
        }
        match parse_flow_file(&g, "1 1\n2 1/0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
