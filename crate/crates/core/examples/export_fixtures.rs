//! Writes the named fixtures as instance files into a directory
//! (default `data/`).

use std::path::PathBuf;

use treepres::edge::edge_set;
use treepres::fixtures;
use treepres::graph::Graph;
use treepres::io::{serialize, Instance};
use treepres::o2::O2Instance;

fn main() -> treepres::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir)?;
    let write = |name: &str, inst: Instance| -> treepres::Result<()> {
        std::fs::write(dir.join(format!("{name}.json")), serialize(&inst, None))?;
        Ok(())
    };
    for (name, p) in fixtures::presentations() {
        write(name, Instance::Presentation(p))?;
    }
    for (name, t) in fixtures::trees() {
        write(name, Instance::Tree(t))?;
    }
    let inst = O2Instance::with_p(fixtures::twosum(), "a".into(), edge_set(["b", "c", "d"]))?;
    write("TWOSUM_O2", Instance::O2(inst))?;
    let inst = O2Instance::with_p(fixtures::path3(), "a".into(), edge_set(["b", "c", "d", "e", "f"]))?;
    write("PATH3_O2", Instance::O2(inst))?;
    let k4 = Graph::complete(4);
    write("K4_GRAPH", Instance::Graph(k4.clone()))?;
    let (g, td) = fixtures::k4_split();
    write("K4_TD", Instance::Td(g, td))?;
    let (g, td) = fixtures::triangle_path();
    write("TRIANGLE_PATH_TD", Instance::Td(g, td))?;
    Ok(())
}
