//! Import a GSRC bookshelf circuit.
//!
//! ```text
//! cargo run --example bookshelf_import -- apte.blocks apte.pl apte.nets
//! ```

use mscut::floorplan::{import_bookshelf, stats, validate, BookshelfOptions, ValidationMode};

const BLOCKS: &str = "UCSC blocks 1.0

NumSoftRectangularBlocks : 0
NumHardRectilinearBlocks : 3
NumTerminals : 1

bk1 hardrectilinear 4 (0, 0) (0, 2) (3, 2) (3, 0)
bk2 hardrectilinear 4 (0, 0) (0, 2) (1, 2) (1, 0)
bk3 hardrectilinear 4 (0, 0) (0, 4) (2, 4) (2, 0)
p1 terminal
";

const PL: &str = "UCSC pl 1.0

bk1 0 0 : N
bk2 3 0 : N
bk3 0 2 : E
p1 0 0
";

const NETS: &str = "UCLA nets 1.0

NumNets : 2
NumPins : 5
NetDegree : 3
bk1 B
bk2 B
p1 B
NetDegree : 2
bk2 B
bk3 B
";

fn main() -> mscut::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (b, p, n) = if let [b, p, n] = args.as_slice() {
        (std::fs::read_to_string(b)?, std::fs::read_to_string(p)?, std::fs::read_to_string(n)?)
    } else {
        (BLOCKS.to_string(), PL.to_string(), NETS.to_string())
    };
    let fp = import_bookshelf(&b, &p, &n, BookshelfOptions::default())?;
    let s = stats(&fp);
    println!("({}, {}, {:.3})", s.n, s.k, s.avg_net_degree);
    println!("packed ok: {}", validate(&fp, ValidationMode::Packed).ok);
    for blk in fp.blocks() {
        println!("{:>4} {:?}", blk.name, blk.rect);
    }
    Ok(())
}
