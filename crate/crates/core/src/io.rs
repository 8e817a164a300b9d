//! JSON instance files and plain-text reports.
//!
//! Every file is an object with a `kind` tag. Scalars are strings: residues
//! over GF(p), integers or `p/q` over the rationals. Ground sets are listed
//! explicitly so their order survives a round trip. Serialising a parsed
//! file reproduces it byte for byte once it is in canonical form (vectors as
//! the reduced echelon basis).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::edge::{EdgeId, EdgeSet, Ground};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::game::{Player, Pos, PositionOrder, PositionalGame, Strategy};
use crate::graph::{Graph, TreeDecomposition};
use crate::o2::O2Instance;
use crate::presentation::Presentation;
use crate::subspace::Subspace;
use crate::tree::TreeOfPresentations;
use crate::vector::SparseVec;

type Entries = Map<String, Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub ground: Vec<String>,
    pub vectors: Vec<Entries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covectors: Option<Vec<Entries>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub label: String,
    pub ground: Vec<String>,
    pub vectors: Vec<Entries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covectors: Option<Vec<Entries>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct O2Doc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tree: TreeDoc,
    pub e: String,
    pub p: Vec<String>,
    /// Defaults to the real edges outside `P + e`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub vertices: Vec<String>,
    /// `(edge, end, end)`.
    pub edges: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartDoc {
    pub label: String,
    pub vertices: Vec<String>,
    /// Graph edges assigned to this part.
    pub edges: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TdDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub graph: GraphDoc,
    pub parts: Vec<PartDoc>,
    pub tree: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Position labels; they must be distinct.
    pub positions: Vec<String>,
    pub start: String,
    pub edges: Vec<(String, String)>,
    /// Plays of a strategy, as label sequences after the start.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategyDoc>,
    /// A total order of all positions, least first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub player: String,
    pub plays: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceFile {
    Presentation(PresentationDoc),
    Tree(TreeDoc),
    O2Instance(O2Doc),
    Graph(GraphDoc),
    Td(TdDoc),
    Game(GameDoc),
}

/// A game file with its optional strategy and position order.
#[derive(Clone, Debug)]
pub struct GameFile {
    pub game: PositionalGame,
    pub strategy: Option<Strategy>,
    pub order: Option<PositionOrder>,
}

#[derive(Clone, Debug)]
pub enum Instance {
    Presentation(Presentation),
    Tree(TreeOfPresentations),
    O2(O2Instance),
    Graph(Graph),
    Td(Graph, TreeDecomposition),
    Game(GameFile),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Presentation(_) => "presentation",
            Instance::Tree(_) => "tree",
            Instance::O2(_) => "o2-instance",
            Instance::Graph(_) => "graph",
            Instance::Td(..) => "td",
            Instance::Game(_) => "game",
        }
    }
}

/// A parsed file: the model value and the seed it carries, if any.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub instance: Instance,
    pub seed: Option<u64>,
}

fn schema<T>(m: impl Into<String>) -> Result<T> {
    Err(Error::Schema(m.into()))
}

fn parse_entries(f: FieldSpec, ground: &Ground, entries: &Entries) -> Result<SparseVec> {
    let mut pairs = Vec::with_capacity(entries.len());
    for (k, v) in entries {
        let e = EdgeId::new(k);
        if !ground.contains(&e) {
            return Err(Error::OutsideGround(k.clone()));
        }
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) if n.is_i64() => n.to_string(),
            other => return schema(format!("scalar for `{k}` must be a string or integer, got {other}")),
        };
        pairs.push((e, f.parse(&text)?));
    }
    Ok(SparseVec::from_pairs(f, pairs))
}

fn entries_of(f: FieldSpec, ground: &Ground, v: &SparseVec) -> Entries {
    let mut m = Map::new();
    for e in ground.ids() {
        let x = v.get(e);
        if !f.is_zero(&x) {
            m.insert(e.to_string(), Value::String(f.format(&x)));
        }
    }
    m
}

fn parse_presentation(
    f: FieldSpec,
    ground: &[String],
    vectors: &[Entries],
    covectors: Option<&[Entries]>,
) -> Result<Presentation> {
    let g = Ground::new(ground.iter().map(String::as_str))?;
    let vs = vectors.iter().map(|e| parse_entries(f, &g, e)).collect::<Result<Vec<_>>>()?;
    match covectors {
        None => Presentation::new(f, &g, &vs, None),
        Some(cs) => {
            let ws = cs.iter().map(|e| parse_entries(f, &g, e)).collect::<Result<Vec<_>>>()?;
            Presentation::new(f, &g, &vs, Some(&ws))
        }
    }
}

fn basis_entries(s: &Subspace) -> Vec<Entries> {
    s.basis().iter().map(|v| entries_of(s.field(), s.ground(), v)).collect()
}

pub fn presentation_doc(p: &Presentation, seed: Option<u64>) -> PresentationDoc {
    PresentationDoc {
        field: p.field().to_string(),
        seed,
        ground: p.ground().ids().iter().map(|e| e.to_string()).collect(),
        vectors: basis_entries(p.vectors()),
        covectors: Some(basis_entries(p.covectors())),
    }
}

pub fn tree_doc(t: &TreeOfPresentations, seed: Option<u64>) -> TreeDoc {
    TreeDoc {
        field: t.field().to_string(),
        seed,
        nodes: (0..t.len())
            .map(|i| {
                let p = t.presentation(i);
                NodeDoc {
                    label: t.label(i).to_string(),
                    ground: p.ground().ids().iter().map(|e| e.to_string()).collect(),
                    vectors: basis_entries(p.vectors()),
                    covectors: Some(basis_entries(p.covectors())),
                }
            })
            .collect(),
        edges: t
            .edges()
            .iter()
            .map(|&(a, b)| (t.label(a).to_string(), t.label(b).to_string()))
            .collect(),
    }
}

fn parse_tree(d: &TreeDoc) -> Result<TreeOfPresentations> {
    let f: FieldSpec = d.field.parse()?;
    let nodes = d
        .nodes
        .iter()
        .map(|n| {
            Ok((
                n.label.clone(),
                parse_presentation(f, &n.ground, &n.vectors, n.covectors.as_deref())?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let edges: Vec<(&str, &str)> = d.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    TreeOfPresentations::from_labeled(nodes, &edges)
}

fn edge_names(s: &EdgeSet) -> Vec<String> {
    s.iter().map(|e| e.to_string()).collect()
}

pub fn o2_doc(inst: &O2Instance, seed: Option<u64>) -> O2Doc {
    O2Doc {
        seed,
        tree: tree_doc(&inst.tree, None),
        e: inst.e.to_string(),
        p: edge_names(&inst.p),
        q: Some(edge_names(&inst.q)),
    }
}

pub fn graph_doc(g: &Graph, seed: Option<u64>) -> GraphDoc {
    GraphDoc {
        seed,
        vertices: g.vertices().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| (e.id.to_string(), g.vertices()[e.u].clone(), g.vertices()[e.v].clone()))
            .collect(),
    }
}

fn parse_graph(d: &GraphDoc) -> Result<Graph> {
    let edges: Vec<(&str, &str, &str)> = d
        .edges
        .iter()
        .map(|(e, a, b)| (e.as_str(), a.as_str(), b.as_str()))
        .collect();
    let vs: Vec<&str> = d.vertices.iter().map(String::as_str).collect();
    Graph::from_names(&vs, &edges)
}

pub fn td_doc(g: &Graph, td: &TreeDecomposition, seed: Option<u64>) -> TdDoc {
    TdDoc {
        seed,
        graph: graph_doc(g, None),
        parts: (0..td.len())
            .map(|t| PartDoc {
                label: td.labels()[t].clone(),
                vertices: td.parts()[t].iter().map(|&v| g.vertices()[v].clone()).collect(),
                edges: g
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| td.edge_part()[*k] == t)
                    .map(|(_, e)| e.id.to_string())
                    .collect(),
            })
            .collect(),
        tree: td
            .tree()
            .iter()
            .map(|&(a, b)| (td.labels()[a].clone(), td.labels()[b].clone()))
            .collect(),
    }
}

fn parse_td(d: &TdDoc) -> Result<(Graph, TreeDecomposition)> {
    let g = parse_graph(&d.graph)?;
    let labels: Vec<String> = d.parts.iter().map(|p| p.label.clone()).collect();
    let node = |l: &str| {
        labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::InvalidDecomposition(format!("unknown part `{l}`")))
    };
    let parts = d
        .parts
        .iter()
        .map(|p| {
            p.vertices
                .iter()
                .map(|v| {
                    g.vertex_index(v)
                        .ok_or_else(|| Error::InvalidDecomposition(format!("unknown vertex `{v}`")))
                })
                .collect::<Result<BTreeSet<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut edge_part = vec![usize::MAX; g.edge_count()];
    for (t, p) in d.parts.iter().enumerate() {
        for e in &p.edges {
            let k = g
                .edge_index(&EdgeId::new(e))
                .ok_or_else(|| Error::InvalidDecomposition(format!("unknown edge `{e}`")))?;
            if edge_part[k] != usize::MAX {
                return Err(Error::InvalidDecomposition(format!("edge `{e}` is assigned twice")));
            }
            edge_part[k] = t;
        }
    }
    if let Some(k) = edge_part.iter().position(|&t| t == usize::MAX) {
        return Err(Error::InvalidDecomposition(format!(
            "edge `{}` is in no part",
            g.edges()[k].id
        )));
    }
    let tree = d
        .tree
        .iter()
        .map(|(a, b)| Ok((node(a)?, node(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let td = TreeDecomposition::new(&g, labels, tree, parts, edge_part)?;
    Ok((g, td))
}

pub fn game_doc(gf: &GameFile, seed: Option<u64>) -> GameDoc {
    let g = &gf.game;
    let label = |p: Pos| g.label(p).to_string();
    let mut edges = Vec::new();
    for p in 0..g.len() {
        for &q in g.successors(p) {
            edges.push((label(p), label(q)));
        }
    }
    GameDoc {
        seed,
        positions: (0..g.len()).map(label).collect(),
        start: label(g.start()),
        edges,
        strategy: gf.strategy.as_ref().map(|s| StrategyDoc {
            player: player_name(s.player()).into(),
            plays: s.plays().iter().map(|pl| pl.iter().map(|&p| label(p)).collect()).collect(),
        }),
        order: gf.order.as_ref().map(|o| {
            let mut ps: Vec<Pos> = (0..g.len()).collect();
            ps.sort_by_key(|&p| o.rank(p));
            ps.into_iter().map(label).collect()
        }),
    }
}

pub fn player_name(p: Player) -> &'static str {
    match p {
        Player::First => "first",
        Player::Second => "second",
    }
}

fn parse_player(s: &str) -> Result<Player> {
    match s {
        "first" => Ok(Player::First),
        "second" => Ok(Player::Second),
        _ => schema(format!("player must be `first` or `second`, got `{s}`")),
    }
}

fn parse_game(d: &GameDoc) -> Result<GameFile> {
    let mut index = HashMap::new();
    for (i, l) in d.positions.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(Error::InvalidGame(format!("duplicate position `{l}`")));
        }
    }
    let pos = |l: &str| {
        index
            .get(l)
            .copied()
            .ok_or_else(|| Error::InvalidGame(format!("unknown position `{l}`")))
    };
    let edges = d
        .edges
        .iter()
        .map(|(a, b)| Ok((pos(a)?, pos(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let game = PositionalGame::from_edges(d.positions.clone(), &edges, pos(&d.start)?)?;
    let strategy = match &d.strategy {
        None => None,
        Some(s) => {
            let plays = s
                .plays
                .iter()
                .map(|pl| pl.iter().map(|l| pos(l)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Some(Strategy::from_plays(parse_player(&s.player)?, &plays)?)
        }
    };
    let order = match &d.order {
        None => None,
        Some(seq) => {
            let ps = seq.iter().map(|l| pos(l)).collect::<Result<Vec<_>>>()?;
            Some(PositionOrder::from_sequence(&ps)?)
        }
    };
    Ok(GameFile { game, strategy, order })
}

fn seed_of(f: &InstanceFile) -> Option<u64> {
    match f {
        InstanceFile::Presentation(d) => d.seed,
        InstanceFile::Tree(d) => d.seed,
        InstanceFile::O2Instance(d) => d.seed,
        InstanceFile::Graph(d) => d.seed,
        InstanceFile::Td(d) => d.seed,
        InstanceFile::Game(d) => d.seed,
    }
}

/// Parses the text of an instance file. Syntax errors carry line and
/// column.
pub fn parse(text: &str) -> Result<Loaded> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let seed = seed_of(&file);
    let instance = match &file {
        InstanceFile::Presentation(d) => Instance::Presentation(parse_presentation(
            d.field.parse()?,
            &d.ground,
            &d.vectors,
            d.covectors.as_deref(),
        )?),
        InstanceFile::Tree(d) => Instance::Tree(parse_tree(d)?),
        InstanceFile::O2Instance(d) => {
            let tree = parse_tree(&d.tree)?;
            let e = EdgeId::new(&d.e);
            let p: EdgeSet = d.p.iter().map(|s| EdgeId::new(s)).collect();
            Instance::O2(match &d.q {
                Some(q) => O2Instance::new(tree, e, p, q.iter().map(|s| EdgeId::new(s)).collect())?,
                None => O2Instance::with_p(tree, e, p)?,
            })
        }
        InstanceFile::Graph(d) => Instance::Graph(parse_graph(d)?),
        InstanceFile::Td(d) => {
            let (g, td) = parse_td(d)?;
            Instance::Td(g, td)
        }
        InstanceFile::Game(d) => Instance::Game(parse_game(d)?),
    };
    Ok(Loaded { instance, seed })
}

pub fn to_file(inst: &Instance, seed: Option<u64>) -> InstanceFile {
    match inst {
        Instance::Presentation(p) => InstanceFile::Presentation(presentation_doc(p, seed)),
        Instance::Tree(t) => InstanceFile::Tree(tree_doc(t, seed)),
        Instance::O2(o) => InstanceFile::O2Instance(o2_doc(o, seed)),
        Instance::Graph(g) => InstanceFile::Graph(graph_doc(g, seed)),
        Instance::Td(g, td) => InstanceFile::Td(td_doc(g, td, seed)),
        Instance::Game(gf) => InstanceFile::Game(game_doc(gf, seed)),
    }
}

/// Canonical text: pretty JSON with a trailing newline.
pub fn serialize(inst: &Instance, seed: Option<u64>) -> String {
    let mut s = serde_json::to_string_pretty(&to_file(inst, seed)).expect("documents serialise");
    s.push('\n');
    s
}

pub fn read_file(path: &std::path::Path) -> Result<Loaded> {
    parse(&std::fs::read_to_string(path)?)
}

/// A report: `key: value` lines, then an optional `WITNESS` block.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
    witness: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kv(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.lines.push((key.to_string(), value.to_string()));
        self
    }

    pub fn witness(&mut self, line: impl Into<String>) -> &mut Self {
        for l in line.into().lines() {
            self.witness.push(l.to_string());
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            out.push_str(&format!("{k}: {v}\n"));
        }
        if !self.witness.is_empty() {
            out.push_str("WITNESS\n");
            for w in &self.witness {
                out.push_str(&format!("  {w}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::edge_set;
    use crate::fixtures;
    use crate::game::solve_game;
    use crate::Caps;

    fn round_trip(inst: &Instance) {
        let text = serialize(inst, Some(3));
        let back = parse(&text).unwrap();
        assert_eq!(back.seed, Some(3));
        assert_eq!(serialize(&back.instance, back.seed), text);
    }

    #[test]
    fn presentation_fixtures_round_trip() {
        for (name, p) in fixtures::presentations() {
            let text = serialize(&Instance::Presentation(p.clone()), None);
            match parse(&text).unwrap().instance {
                Instance::Presentation(q) => assert_eq!(q, p, "{name}"),
                _ => panic!("wrong kind"),
            }
            round_trip(&Instance::Presentation(p));
        }
    }

    #[test]
    fn tri_file_matches_fixture() {
        let text = r#"{"kind": "presentation", "field": "GF(2)", "ground": ["a", "b", "c"],
                       "vectors": [{"a": "1", "b": 1, "c": "1"}]}"#;
        match parse(text).unwrap().instance {
            Instance::Presentation(p) => assert_eq!(p, fixtures::tri()),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn rationals_written_as_fractions() {
        let text = r#"{"kind": "presentation", "field": "Q", "ground": ["a", "b"],
                       "vectors": [{"a": "2", "b": "-3"}]}"#;
        let l = parse(text).unwrap();
        let out = serialize(&l.instance, None);
        assert!(out.contains("\"-3/2\""), "{out}");
        round_trip(&l.instance);
    }

    #[test]
    fn twosum_tree_file() {
        for (_, t) in fixtures::trees() {
            round_trip(&Instance::Tree(t));
        }
        let text = serialize(&Instance::Tree(fixtures::twosum()), None);
        match parse(&text).unwrap().instance {
            Instance::Tree(t) => assert_eq!(t.shared_between(0, 1), edge_set(["g"])),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn bad_modulus_is_reported() {
        let text = r#"{"kind": "presentation", "field": "GF(4)", "ground": ["a"], "vectors": []}"#;
        let err = parse(text).unwrap_err();
        assert!(err.to_string().contains("modulus not prime"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse("{\n  \"kind\": \"tree\",\n  oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn other_kinds_round_trip() {
        let inst = O2Instance::with_p(fixtures::twosum(), "a".into(), edge_set(["b", "c"])).unwrap();
        round_trip(&Instance::O2(inst));
        let g = Graph::complete(4);
        round_trip(&Instance::Graph(g.clone()));
        let td = TreeDecomposition::from_elimination(&g, &[0, 1, 2, 3]).unwrap();
        round_trip(&Instance::Td(g, td));
        let game = PositionalGame::from_edges(
            vec!["s".into(), "x".into(), "y".into()],
            &[(0, 1), (0, 2), (1, 2)],
            0,
        )
        .unwrap();
        let sol = solve_game(&game, &Caps::default()).unwrap();
        round_trip(&Instance::Game(GameFile {
            game: game.clone(),
            strategy: Some(sol.strategy),
            order: Some(PositionOrder::identity(3)),
        }));
    }

    #[test]
    fn report_layout() {
        let mut r = Report::new();
        r.kv("verdict", "ok").kv("size", 3).witness("line one\nline two");
        assert_eq!(r.render(), "verdict: ok\nsize: 3\nWITNESS\n  line one\n  line two\n");
        assert_eq!(r.get("size"), Some("3"));
    }
}
