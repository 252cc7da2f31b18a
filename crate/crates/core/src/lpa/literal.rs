//! Text form for algebra elements.
//!
//! A monomial is rendered as its path edges in order, then the star-path
//! edges in reverse order each suffixed with `*`, all joined by dots:
//! `(α=f4.f3, β=f2)` prints as `f4.f3.f2*` and `(α=f2, β=f4.f3)` as
//! `f2.f3*.f4*`.  A vertex monomial prints as the vertex name.  Elements
//! are sums of signed terms with optional rational coefficients, e.g.
//! `v2 - f1.f1*` or `3/2*f4.f3.f2*`; the zero element prints as `0`.
//!
//! The parser accepts exactly this shape: terms separated by ` + ` or
//! ` - ` (an unspaced leading sign is fine), an optional `p/q*` prefix per
//! term, and dot-joined factors.  Identifiers that themselves contain
//! `+ - * . /` or look like numbers are not supported here.

use std::sync::Arc;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Path};
use crate::rational::{format_rat, parse_rat, rat_one, Rat};

use super::{LpaElement, PathMonomial};

pub fn render_monomial(g: &DirectedGraph, m: &PathMonomial) -> String {
    if m.alpha.is_empty() && m.beta.is_empty() {
        return g.vertex_name(m.alpha.start).to_string();
    }
    let mut pieces: Vec<String> = m
        .alpha
        .edges
        .iter()
        .map(|&e| g.edge(e).id.clone())
        .collect();
    for &e in m.beta.edges.iter().rev() {
        pieces.push(format!("{}*", g.edge(e).id));
    }
    pieces.join(".")
}

pub fn render_element(e: &LpaElement) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let g = e.graph();
    let mut out = String::new();
    for (i, (m, c)) in e.terms().iter().enumerate() {
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mag = c.abs();
        if !mag.is_one() {
            out.push_str(&format_rat(&mag));
            out.push('*');
        }
        out.push_str(&render_monomial(g, m));
    }
    out
}

pub fn parse_element(g: &Arc<DirectedGraph>, text: &str) -> Result<LpaElement> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::input("empty element literal"));
    }
    if text == "0" {
        return Ok(LpaElement::zero(g));
    }
    let mut raw = Vec::new();
    let mut sign = rat_one();
    let mut rest = text;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -rat_one();
        rest = r.trim_start();
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r.trim_start();
    }
    loop {
        let next_plus = rest.find(" + ");
        let next_minus = rest.find(" - ");
        let (term, next) = match (next_plus, next_minus) {
            (None, None) => (rest, None),
            (Some(p), None) => (&rest[..p], Some((rat_one(), &rest[p + 3..]))),
            (None, Some(p)) => (&rest[..p], Some((-rat_one(), &rest[p + 3..]))),
            (Some(p), Some(q)) if p < q => (&rest[..p], Some((rat_one(), &rest[p + 3..]))),
            (_, Some(q)) => (&rest[..q], Some((-rat_one(), &rest[q + 3..]))),
        };
        let (m, c) = parse_term(g, term.trim())?;
        raw.push((m, c * &sign));
        match next {
            Some((s, r)) => {
                sign = s;
                rest = r;
            }
            None => break,
        }
    }
    Ok(LpaElement::from_raw_terms(g, raw))
}

fn parse_term(g: &DirectedGraph, term: &str) -> Result<(PathMonomial, Rat)> {
    if term.is_empty() {
        return Err(Error::input("empty term in element literal"));
    }
    // A leading `p/q*` (or `n*`) is a coefficient; everything else is the
    // monomial body.
    let (coeff, body) = match term.split_once('*') {
        Some((head, tail)) if parse_rat(head).is_ok() && !tail.is_empty() => {
            (parse_rat(head).unwrap(), tail)
        }
        _ => (rat_one(), term),
    };
    if let Ok(c) = parse_rat(body) {
        return Err(Error::input(format!(
            "bare number `{}` is not an element; multiply a vertex term instead",
            format_rat(&c)
        )));
    }
    let mut alpha_edges = Vec::new();
    let mut starred = Vec::new();
    for factor in body.split('.') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::input(format!("empty factor in term `{term}`")));
        }
        if let Some(id) = factor.strip_suffix('*') {
            let e = g
                .edge_index(id)
                .ok_or_else(|| Error::input(format!("unknown edge `{id}` in term `{term}`")))?;
            starred.push(e);
        } else if let Some(e) = g.edge_index(factor) {
            if !starred.is_empty() {
                return Err(Error::input(format!(
                    "plain edge `{factor}` after a starred edge in term `{term}`"
                )));
            }
            alpha_edges.push(e);
        } else if let Some(v) = g.vertex_index(factor) {
            if alpha_edges.is_empty() && starred.is_empty() && body.split('.').count() == 1 {
                return Ok((PathMonomial::vertex(v), coeff));
            }
            return Err(Error::input(format!(
                "vertex `{factor}` must stand alone in a term, got `{term}`"
            )));
        } else {
            return Err(Error::input(format!(
                "unknown identifier `{factor}` in term `{term}`"
            )));
        }
    }
    // Starred factors are written in reverse path order.
    let beta_edges: Vec<usize> = starred.into_iter().rev().collect();
    let alpha = build_path(g, &alpha_edges, &beta_edges)?;
    let beta = build_path(g, &beta_edges, &alpha_edges)?;
    Ok((PathMonomial::new(g, alpha, beta)?, coeff))
}

fn build_path(g: &DirectedGraph, edges: &[usize], other: &[usize]) -> Result<Path> {
    if edges.is_empty() {
        // An empty side sits at the range of the other side.
        let v = match other.last() {
            Some(&e) => g.edge(e).range,
            None => return Err(Error::input("term has no factors")),
        };
        Ok(Path::at_vertex(v))
    } else {
        Path::from_edges(g, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn chain_graph() -> Arc<DirectedGraph> {
        // v2→v1, v2→v3, v4→v3, v5→v4 — four edges, two sinks.
        Arc::new(
            DirectedGraph::build(
                &["v1", "v2", "v3", "v4", "v5"],
                &[
                    ("f1", "v2", "v1"),
                    ("f2", "v2", "v3"),
                    ("f3", "v4", "v3"),
                    ("f4", "v5", "v4"),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn monomial_rendering_reverses_the_star_path() {
        let g = chain_graph();
        let m = PathMonomial::new(
            &g,
            Path::from_edges(&g, &[1]).unwrap(),
            Path::from_edges(&g, &[3, 2]).unwrap(),
        )
        .unwrap();
        assert_eq!(render_monomial(&g, &m), "f2.f3*.f4*");
        let n = PathMonomial::new(
            &g,
            Path::from_edges(&g, &[3, 2]).unwrap(),
            Path::from_edges(&g, &[1]).unwrap(),
        )
        .unwrap();
        assert_eq!(render_monomial(&g, &n), "f4.f3.f2*");
    }

    #[test]
    fn element_round_trips_through_text() {
        let g = chain_graph();
        let samples = [
            "v2 - f1.f1*",
            "3/2*f4.f3.f2*",
            "f1*",
            "v1 + 2*f1 - 1/3*f2.f2*",
            "0",
        ];
        for s in samples {
            let e = parse_element(&g, s).unwrap();
            let printed = e.display();
            let back = parse_element(&g, &printed).unwrap();
            assert_eq!(e, back, "round trip failed for `{s}` → `{printed}`");
        }
    }

    #[test]
    fn parsed_elements_are_normalized() {
        let g = chain_graph();
        // f3·f3★ rewrites to v4 (f3 is special at v4 and its only edge).
        let e = parse_element(&g, "f3.f3*").unwrap();
        assert_eq!(e, LpaElement::vertex(&g, 3));
        assert_eq!(e.display(), "v4");
    }

    #[test]
    fn coefficients_parse_and_print() {
        let g = chain_graph();
        let e = parse_element(&g, "3/2*f4.f3.f2*").unwrap();
        let m = e.terms().keys().next().unwrap().clone();
        assert_eq!(e.coefficient(&m), rat(3, 2));
        assert_eq!(e.display(), "3/2*f4.f3.f2*");
        assert_eq!(parse_element(&g, "-v1").unwrap().display(), "-v1");
    }

    #[test]
    fn malformed_terms_are_rejected() {
        let g = chain_graph();
        for bad in [
            "",
            "fX",
            "v1.f1",
            "f1*.f2",   // plain edge after a starred one
            "f1.f3",    // not composable
            "f1.f2*",   // ranges differ: r(f1)=v1, r(f2)=v3
            "2",        // bare number
            "v1 +",
        ] {
            assert!(parse_element(&g, bad).is_err(), "`{bad}` should fail");
        }
    }
}
