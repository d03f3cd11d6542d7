//! Line-oriented instance files.
//!
//! ```text
//! <kind> <n> <q> <master_seed>        kind is `euclid` or `uniform`
//! <x> <y>                             n lines (euclid only)
//! <cost>                              n(n-1)/2 lines in EdgeId order (uniform only)
//! <color>                             n(n-1)/2 lines in EdgeId order
//! ```
//!
//! Floats are written with 17 significant digits, which round-trips every
//! `f64` exactly. The square side of a Euclidean instance is not stored; on
//! load it is taken as `max(1, largest coordinate)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{edge_count, Coloring, EuclideanInstance, Instance, UniformCostInstance};
use crate::error::{Error, Result};

pub fn render(instance: &Instance, coloring: &Coloring) -> String {
    let n = instance.n();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {}",
        instance.kind(),
        n,
        coloring.q(),
        instance.seed()
    );
    match instance {
        Instance::Euclidean(e) => {
            for p in &e.points {
                let _ = writeln!(out, "{:.16e} {:.16e}", p[0], p[1]);
            }
        }
        Instance::Uniform(u) => {
            for c in u.edge_costs() {
                let _ = writeln!(out, "{c:.16e}");
            }
        }
    }
    for c in coloring.colors() {
        let _ = writeln!(out, "{c}");
    }
    out
}

pub fn save(path: impl AsRef<Path>, instance: &Instance, coloring: &Coloring) -> Result<()> {
    let path = path.as_ref();
    coloring.check_covers(instance.n())?;
    fs::write(path, render(instance, coloring)).map_err(|e| Error::io(path, e))
}

pub fn load(path: impl AsRef<Path>) -> Result<(Instance, Coloring)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text)
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, name: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, name, "missing"))?;
    tok.parse()
        .map_err(|_| Error::parse(line, name, format!("cannot parse `{tok}`")))
}

fn finite(v: f64, line: usize, name: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::parse(line, name, "not a finite number"))
    }
}

pub fn parse(text: &str) -> Result<(Instance, Coloring)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "header", "empty file"))?;
    let mut tok = header.split_whitespace();
    let kind: String = field(tok.next(), 1, "kind")?;
    let n: usize = field(tok.next(), 1, "n")?;
    let q: usize = field(tok.next(), 1, "q")?;
    let seed: u64 = field(tok.next(), 1, "master_seed")?;
    if tok.next().is_some() {
        return Err(Error::parse(1, "header", "expected exactly 4 fields"));
    }
    let m = edge_count(n);
    let eof_line = text.lines().count() + 1;
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(eof_line, what, "unexpected end of file"))
    };

    let instance = match kind.as_str() {
        "euclid" => {
            let mut points = Vec::with_capacity(n);
            let mut side = 1.0f64;
            for _ in 0..n {
                let (ln, l) = next("x")?;
                let mut t = l.split_whitespace();
                let x = finite(field(t.next(), ln, "x")?, ln, "x")?;
                let y = finite(field(t.next(), ln, "y")?, ln, "y")?;
                if t.next().is_some() {
                    return Err(Error::parse(ln, "point", "expected 2 coordinates"));
                }
                if x < 0.0 || y < 0.0 {
                    return Err(Error::parse(ln, "point", "negative coordinate"));
                }
                side = side.max(x).max(y);
                points.push([x, y]);
            }
            Instance::Euclidean(EuclideanInstance {
                points,
                scale: side,
                seed,
            })
        }
        "uniform" => {
            let mut costs = Vec::with_capacity(m);
            for _ in 0..m {
                let (ln, l) = next("cost")?;
                let c = finite(field(Some(l), ln, "cost")?, ln, "cost")?;
                if !(0.0..=1.0).contains(&c) {
                    return Err(Error::parse(ln, "cost", format!("{c} outside [0, 1]")));
                }
                costs.push(c);
            }
            let mut u = UniformCostInstance::from_edge_costs(n, costs)?;
            u.seed = seed;
            Instance::Uniform(u)
        }
        other => {
            return Err(Error::parse(
                1,
                "kind",
                format!("unknown kind `{other}` (expected euclid or uniform)"),
            ))
        }
    };

    if q == 0 && m > 0 {
        return Err(Error::parse(1, "q", "palette of size 0 cannot color any edge"));
    }
    let mut colors = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, l) = next("color")?;
        let c: u64 = field(Some(l), ln, "color")?;
        if c >= q as u64 {
            return Err(Error::parse(
                ln,
                "color",
                format!("color {c} not below q = {q}"),
            ));
        }
        colors.push(c as u32);
    }
    if let Some((ln, l)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(Error::parse(ln, "trailer", format!("unexpected content `{l}`")));
    }
    Ok((instance, Coloring::new(q, colors)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{color_edges, gen_euclidean, gen_uniform_costs, SeedSpec};

    #[test]
    fn euclidean_round_trip_is_byte_stable() {
        let s = SeedSpec::new(2024);
        let inst = Instance::from(gen_euclidean(5, 1.0, s));
        let col = color_edges(10, 4, s).unwrap();
        let text = render(&inst, &col);
        let (inst2, col2) = parse(&text).unwrap();
        assert_eq!(render(&inst2, &col2), text);
        assert_eq!(inst2.as_euclidean().unwrap().points, inst.as_euclidean().unwrap().points);
        assert_eq!(col, col2);
    }

    #[test]
    fn uniform_round_trip() {
        let s = SeedSpec::new(8);
        let inst = Instance::from(gen_uniform_costs(4, s));
        let col = color_edges(6, 3, s).unwrap();
        let (inst2, col2) = parse(&render(&inst, &col)).unwrap();
        assert_eq!(inst, inst2);
        assert_eq!(col, col2);
    }

    #[test]
    fn out_of_palette_color_names_line() {
        let text = "uniform 2 2 0\n5.0e-1\n2\n";
        match parse(text) {
            Err(Error::Parse { line, field, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(field, "color");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(parse("").is_err());
        assert!(parse("torus 2 1 0\n").is_err());
        assert!(parse("euclid 2 1 0\n0.1 0.2\n").is_err());
        assert!(parse("euclid 2 1 0\n0.1 0.2\n0.3 abc\n0\n").is_err());
        assert!(parse("uniform 2 1 0\n1.5\n0\n").is_err());
        assert!(parse("uniform 2 1 0\n0.5\n0\n7\n").is_err());
    }
}
