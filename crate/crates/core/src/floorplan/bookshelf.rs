//! GSRC bookshelf floorplan benchmarks (`.blocks`, `.pl`, `.nets`).
//!
//! Only hard blocks are supported. Terminals are dropped, pin offsets are
//! discarded (a pin is its owning block) and a net that ends up with fewer
//! than two distinct blocks is removed.

use std::collections::HashMap;

use super::{check_geometry, BlockSpec, Floorplan, NetSpec};
use crate::error::{Error, Result};
use crate::geom::{Coord, Rect};

#[derive(Clone, Copy, Debug)]
pub struct BookshelfOptions {
    /// Grid steps per layout unit used to snap real coordinates.
    pub grid: Coord,
}

impl Default for BookshelfOptions {
    fn default() -> Self {
        BookshelfOptions { grid: 1000 }
    }
}

enum Entry {
    Hard { w: f64, h: f64 },
    Terminal,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        let skip = l.is_empty() || l.starts_with('#') || l.starts_with("UCSC") || l.starts_with("UCLA");
        (!skip).then_some((i + 1, l))
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: 1,
        msg: msg.into(),
    }
}

fn num(line: usize, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("expected a number, found `{s}`")))
}

fn parse_blocks(text: &str) -> Result<Vec<(String, Entry)>> {
    let mut out = Vec::new();
    for (ln, line) in content_lines(text) {
        if line.starts_with("Num") {
            continue;
        }
        let mut tok = line.split_whitespace();
        let name = tok.next().unwrap_or_default().to_string();
        match tok.next() {
            Some("terminal") => out.push((name, Entry::Terminal)),
            Some("hardrectilinear") => {
                let rest = line.split_once("hardrectilinear").map(|x| x.1).unwrap_or_default();
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for part in rest.split('(').skip(1) {
                    let inner = part.split(')').next().unwrap_or_default();
                    let (x, y) = inner
                        .split_once(',')
                        .ok_or_else(|| parse_err(ln, format!("bad vertex `({inner})`")))?;
                    xs.push(num(ln, x)?);
                    ys.push(num(ln, y)?);
                }
                if xs.len() < 4 {
                    return Err(parse_err(ln, format!("block `{name}` needs 4 vertices")));
                }
                let fold = |v: &[f64]| {
                    v.iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
                };
                let (x0, x1) = fold(&xs);
                let (y0, y1) = fold(&ys);
                out.push((name, Entry::Hard { w: x1 - x0, h: y1 - y0 }));
            }
            Some("softrectangular") => {
                return Err(Error::Unsupported(format!("soft block `{name}`")));
            }
            other => {
                return Err(parse_err(ln, format!("unknown block kind {other:?} for `{name}`")));
            }
        }
    }
    Ok(out)
}

fn parse_pl(text: &str) -> Result<HashMap<String, (f64, f64, bool)>> {
    let mut out = HashMap::new();
    for (ln, line) in content_lines(text) {
        let (head, orient) = match line.split_once(':') {
            Some((h, o)) => (h, o.trim()),
            None => (line, "N"),
        };
        let mut tok = head.split_whitespace();
        let name = tok.next().unwrap_or_default().to_string();
        let x = num(ln, tok.next().ok_or_else(|| parse_err(ln, "missing x"))?)?;
        let y = num(ln, tok.next().ok_or_else(|| parse_err(ln, "missing y"))?)?;
        let rotated = matches!(orient.split_whitespace().next(), Some("E" | "W" | "FE" | "FW"));
        out.insert(name, (x, y, rotated));
    }
    Ok(out)
}

fn parse_nets(text: &str) -> Result<Vec<(String, Vec<String>)>> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    let mut remaining = 0usize;
    for (ln, line) in content_lines(text) {
        if line.starts_with("NumNets") || line.starts_with("NumPins") {
            continue;
        }
        if let Some(rest) = line.strip_prefix("NetDegree") {
            if remaining != 0 {
                return Err(parse_err(ln, "previous net has missing pins"));
            }
            let rest = rest.trim_start().trim_start_matches(':');
            let mut tok = rest.split_whitespace();
            let d = tok.next().ok_or_else(|| parse_err(ln, "missing net degree"))?;
            remaining = d
                .parse()
                .map_err(|_| parse_err(ln, format!("bad net degree `{d}`")))?;
            let name = tok.next().map(str::to_string).unwrap_or_else(|| format!("net{}", out.len()));
            out.push((name, Vec::with_capacity(remaining)));
            continue;
        }
        let Some(net) = out.last_mut().filter(|_| remaining > 0) else {
            return Err(parse_err(ln, "pin outside of a net"));
        };
        let pin = line.split_whitespace().next().unwrap_or_default();
        net.1.push(pin.to_string());
        remaining -= 1;
    }
    Ok(out)
}

/// Imports a GSRC bookshelf triple. The result is translated so that the
/// bounding box of the placed blocks starts at the origin.
pub fn import_bookshelf(blocks_text: &str, pl_text: &str, nets_text: &str, opts: BookshelfOptions) -> Result<Floorplan> {
    let entries = parse_blocks(blocks_text)?;
    let placement = parse_pl(pl_text)?;
    let nets = parse_nets(nets_text)?;
    let g = opts.grid as f64;
    let snap = |v: f64| (v * g).round() as Coord;

    let mut hard = Vec::new();
    let mut known = HashMap::new();
    for (name, e) in &entries {
        match e {
            Entry::Terminal => {
                known.insert(name.as_str(), false);
            }
            Entry::Hard { w, h } => {
                known.insert(name.as_str(), true);
                let &(x, y, rot) = placement
                    .get(name)
                    .ok_or_else(|| Error::MissingPlacement(name.clone()))?;
                let (w, h) = if rot { (*h, *w) } else { (*w, *h) };
                hard.push(BlockSpec::new(name.clone(), Rect::new(snap(x), snap(y), snap(w), snap(h))));
            }
        }
    }
    let bbox = Rect::bounding(hard.iter().map(|b| &b.rect))
        .ok_or_else(|| Error::Unsupported("benchmark has no hard blocks".into()))?;
    for b in &mut hard {
        b.rect = Rect::new(b.rect.x0 - bbox.x0, b.rect.y0 - bbox.y0, b.rect.width(), b.rect.height());
    }

    let mut net_specs = Vec::with_capacity(nets.len());
    for (name, pins) in nets {
        let mut members = Vec::with_capacity(pins.len());
        for p in pins {
            match known.get(p.as_str()) {
                Some(true) => members.push(p),
                Some(false) => {}
                None => return Err(Error::UnknownBlock { net: name, block: p }),
            }
        }
        members.sort();
        members.dedup();
        if members.len() >= 2 {
            net_specs.push(NetSpec::new(name, members));
        }
    }
    let fp = Floorplan::new(opts.grid, Rect::new(0, 0, bbox.width(), bbox.height()), hard, net_specs)?;
    check_geometry(&fp)?;
    Ok(fp)
}
