//! Native JSON floorplan format.
//!
//! ```json
//! { "unit": 1,
//!   "bbox": { "w": 2, "h": 2 },
//!   "blocks": [ { "name": "A", "x": 0, "y": 1, "w": 1, "h": 1 } ],
//!   "nets": [ { "name": "n1", "blocks": ["A", "D"] } ] }
//! ```
//!
//! Lengths are layout units. `unit` is the number of grid steps per layout
//! unit; every length is snapped to that grid on load. The bounding box has
//! its lower-left corner at the origin. Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use super::{check_geometry, BlockSpec, Floorplan, NetSpec};
use crate::error::{Error, Result};
use crate::geom::{Coord, Rect};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    #[serde(default = "one")]
    unit: Coord,
    bbox: BboxDoc,
    blocks: Vec<BlockDoc>,
    #[serde(default)]
    nets: Vec<NetDoc>,
}

fn one() -> Coord {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BboxDoc {
    w: f64,
    h: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    name: String,
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetDoc {
    name: String,
    blocks: Vec<String>,
}

fn snap(v: f64, unit: Coord, what: &str) -> Result<Coord> {
    let s = v * unit as f64;
    if !s.is_finite() || s.abs() > (1i64 << 52) as f64 {
        return Err(Error::InvalidGeometry {
            block: what.to_string(),
            reason: format!("coordinate {v} is not representable"),
        });
    }
    Ok(s.round() as Coord)
}

/// Parses a native-format document and validates it. Overlapping or
/// out-of-bbox blocks are rejected; holes are allowed.
pub fn load_floorplan(text: &str) -> Result<Floorplan> {
    let doc: Doc = serde_json::from_str(text)?;
    if doc.unit <= 0 {
        return Err(Error::Config(format!("unit must be positive, got {}", doc.unit)));
    }
    let u = doc.unit;
    let bbox = Rect::new(0, 0, snap(doc.bbox.w, u, "bbox")?, snap(doc.bbox.h, u, "bbox")?);
    let mut blocks = Vec::with_capacity(doc.blocks.len());
    for b in doc.blocks {
        let rect = Rect::new(
            snap(b.x, u, &b.name)?,
            snap(b.y, u, &b.name)?,
            snap(b.w, u, &b.name)?,
            snap(b.h, u, &b.name)?,
        );
        blocks.push(BlockSpec::new(b.name, rect));
    }
    let nets = doc.nets.into_iter().map(|n| NetSpec::new(n.name, n.blocks)).collect();
    let fp = Floorplan::new(u, bbox, blocks, nets)?;
    check_geometry(&fp)?;
    Ok(fp)
}

fn length(v: Coord, unit: Coord) -> Value {
    if v % unit == 0 {
        Value::Number(Number::from(v / unit))
    } else {
        Value::Number(Number::from_f64(v as f64 / unit as f64).expect("finite"))
    }
}

/// Serializes to the native format (pretty-printed, stable key order).
pub fn save_floorplan(fp: &Floorplan) -> String {
    let u = fp.unit();
    let bbox = fp.bbox();
    let blocks: Vec<Value> = fp
        .blocks()
        .iter()
        .map(|b| {
            let r = b.rect;
            let mut m = serde_json::Map::new();
            m.insert("name".into(), Value::String(b.name.clone()));
            m.insert("x".into(), length(r.x0 - bbox.x0, u));
            m.insert("y".into(), length(r.y0 - bbox.y0, u));
            m.insert("w".into(), length(r.width(), u));
            m.insert("h".into(), length(r.height(), u));
            Value::Object(m)
        })
        .collect();
    let nets: Vec<Value> = fp
        .nets()
        .iter()
        .map(|n| {
            let spec = fp.net_spec(n);
            serde_json::to_value(NetDoc {
                name: spec.name,
                blocks: spec.blocks,
            })
            .expect("serializable")
        })
        .collect();
    let mut bb = serde_json::Map::new();
    bb.insert("w".into(), length(bbox.width(), u));
    bb.insert("h".into(), length(bbox.height(), u));
    let mut root = serde_json::Map::new();
    root.insert("unit".into(), Value::Number(Number::from(u)));
    root.insert("bbox".into(), Value::Object(bb));
    root.insert("blocks".into(), Value::Array(blocks));
    root.insert("nets".into(), Value::Array(nets));
    let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::testutil::f4;

    const F4: &str = r#"{
      "unit": 1,
      "bbox": {"w": 2, "h": 2},
      "blocks": [
        {"name": "A", "x": 0, "y": 1, "w": 1, "h": 1},
        {"name": "B", "x": 1, "y": 1, "w": 1, "h": 1},
        {"name": "C", "x": 0, "y": 0, "w": 1, "h": 1},
        {"name": "D", "x": 1, "y": 0, "w": 1, "h": 1}
      ],
      "nets": [
        {"name": "n1", "blocks": ["A", "D"]},
        {"name": "n2", "blocks": ["C", "D"]}
      ]
    }"#;

    #[test]
    fn loads_f4() {
        let fp = load_floorplan(F4).unwrap();
        assert_eq!(fp, f4());
        assert_eq!(load_floorplan(&save_floorplan(&fp)).unwrap(), fp);
    }

    #[test]
    fn rejects_overlap() {
        let doc = r#"{"bbox":{"w":3,"h":1},"blocks":[
            {"name":"A","x":0,"y":0,"w":1.5,"h":1},
            {"name":"B","x":1,"y":0,"w":1,"h":1}], "unit": 2}"#;
        match load_floorplan(doc) {
            Err(Error::Overlap { a, b }) => assert_eq!((a.as_str(), b.as_str()), ("A", "B")),
            other => panic!("expected overlap, got {other:?}"),
        }
    }

    #[test]
    fn rejects_low_degree_net() {
        let doc = F4.replace(r#"{"name": "n2", "blocks": ["C", "D"]}"#, r#"{"name": "n2", "blocks": ["C", "D"]}, {"name": "n3", "blocks": ["A"]}"#);
        match load_floorplan(&doc) {
            Err(Error::NetDegree { net, .. }) => assert_eq!(net, "n3"),
            other => panic!("expected degree error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_with_position() {
        let doc = "{\"bbox\":{\"w\":1,\"h\":1},\n \"blocks\":[], \"colour\": 3}";
        match load_floorplan(doc) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn fractional_lengths_round_trip() {
        let doc = r#"{"unit":1000,"bbox":{"w":2.5,"h":1},"blocks":[
            {"name":"A","x":0,"y":0,"w":1.25,"h":1},
            {"name":"B","x":1.25,"y":0,"w":1.25,"h":1}]}"#;
        let fp = load_floorplan(doc).unwrap();
        assert_eq!(fp.block(crate::BlockId(1)).rect.x0, 1250);
        assert_eq!(load_floorplan(&save_floorplan(&fp)).unwrap(), fp);
    }
}
