use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treepres::axioms::{Axiom, SetSystemPair};
use treepres::base::{build_base, im_star, StarBaseInput};
use treepres::edge::{edge_set, show_set};
use treepres::game::{check_strategy, reduce_strategy, solve_game, Player, PositionOrder};
use treepres::graph::{build_graph_game, td_to_presentations, GraphSystems, TreeDecomposition};
use treepres::io::{self, GameFile, Instance, Report};
use treepres::o2::{build_circuit_game, o2_witness, sigma_analysis, O2Instance};
use treepres::tree::{enumerate_prevectors, gen_cex, glue, Kind};
use treepres::{Caps, Error, FieldSpec, Presentation, SparseVec, TreeOfPresentations};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "treepres", version, about = "Presentations of matroids, trees of presentations and their games")]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct CapArgs {
    /// Members or subsets visited while computing minimal supports.
    #[arg(long, global = true, default_value_t = Caps::default().enumeration)]
    cap_enumeration: u64,
    /// Largest ground set for the brute-force matroid check.
    #[arg(long, global = true, default_value_t = Caps::default().matroid_ground)]
    cap_matroid_ground: usize,
    /// Partitions visited by the O2 sweep.
    #[arg(long, global = true, default_value_t = Caps::default().o2_sweep)]
    cap_o2_sweep: u64,
    /// Subset scans in the O3 and IM checks.
    #[arg(long, global = true, default_value_t = Caps::default().axiom_scan)]
    cap_axiom_scan: u64,
    /// Positions of a generated game.
    #[arg(long, global = true, default_value_t = Caps::default().game_positions)]
    cap_game_positions: u64,
    /// Plays materialised in a strategy.
    #[arg(long, global = true, default_value_t = Caps::default().strategy_plays)]
    cap_strategy_plays: u64,
    /// Local combinations tried while enumerating pre-vectors.
    #[arg(long, global = true, default_value_t = Caps::default().prevector_work)]
    cap_prevector_work: u64,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            enumeration: self.cap_enumeration,
            matroid_ground: self.cap_matroid_ground,
            o2_sweep: self.cap_o2_sweep,
            axiom_scan: self.cap_axiom_scan,
            game_positions: self.cap_game_positions,
            strategy_plays: self.cap_strategy_plays,
            prevector_work: self.cap_prevector_work,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check a presentation (or the glue of a tree) and its presented matroid.
    VerifyPresentation { file: PathBuf },
    /// List circuits, or cocircuits with --dual.
    Circuits {
        file: PathBuf,
        #[arg(long)]
        dual: bool,
    },
    /// Contract and delete disjoint sets.
    Minor {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "")]
        contract: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        delete: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Adjoin a new element spanned with a vector, e.g. `a:1,b:-1`.
    Adjoin {
        file: PathBuf,
        #[arg(long)]
        vector: String,
        #[arg(long, default_value = "*")]
        star: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Glue a tree of presentations.
    Glue {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate pre-vectors, or pre-covectors with --covectors.
    EnumeratePrevectors {
        file: PathBuf,
        #[arg(long)]
        covectors: bool,
    },
    /// Scan the orthogonality axioms of the presented set systems.
    CheckAxioms {
        file: PathBuf,
        /// Axioms to check (O1, O2, O3, O3*, tame, IM); all by default.
        #[arg(long, value_delimiter = ',')]
        axiom: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Find a pre-vector or pre-covector witness for an o2-instance.
    O2Witness { file: PathBuf },
    /// Solve a game file, or the circuit game of an o2-instance.
    SolveGame {
        file: PathBuf,
        /// Use the cocircuit game of an o2-instance.
        #[arg(long)]
        dual: bool,
    },
    /// Reduce a first-player winning strategy with respect to a position order.
    ReduceStrategy {
        file: PathBuf,
        /// Shuffle the position order with this seed instead of the file's.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce Sarah's strategy in the circuit game and report the subtree and bounds.
    SigmaAnalysis {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Extend X and Y over the centre of a star of presentations.
    ImStar {
        file: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long, value_delimiter = ',', default_value = "")]
        x: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "")]
        y: Vec<String>,
    },
    /// Build and certify a base of the glued presentation.
    BuildBase {
        file: PathBuf,
        /// Label of the root node; the first node by default.
        #[arg(long)]
        root: Option<String>,
    },
    /// Compare precircuits and the decomposition game against the cycle matroid.
    GraphVerify {
        file: PathBuf,
        /// Seed for the generated decomposition of a plain graph file.
        #[arg(long)]
        seed: Option<u64>,
        /// Partitions to sweep; every partition when omitted.
        #[arg(long)]
        partitions: Option<usize>,
    },
    /// Generate the truncated example whose vector and covector meet in 2n elements.
    GenCex {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "GF(2)")]
        field: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command produced: a report, an optional document, and whether
/// its verdict held.
struct Outcome {
    report: Report,
    doc: Option<String>,
    ok: bool,
}

impl Outcome {
    fn new(report: Report, ok: bool) -> Self {
        Outcome { report, doc: None, ok }
    }
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Json(_) | Error::Schema(_) | Error::Io(_) | Error::NotPrime(_) | Error::UnknownField(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = cli.caps.caps();
    match run(cli.cmd, &caps) {
        Ok(out) => {
            // a document goes to stdout, so its report moves to stderr
            match out.doc {
                Some(doc) => {
                    eprint!("{}", out.report.render());
                    print!("{doc}");
                }
                None => print!("{}", out.report.render()),
            }
            ExitCode::from(if out.ok { 0 } else { EXIT_FAIL })
        }
        Err(err) => {
            let mut r = Report::new();
            r.kv("error", &err);
            if let Error::Hypothesis { witness: Some(w), .. } = &err {
                r.witness(format!("{w:?}"));
            }
            print!("{}", r.render());
            eprintln!("treepres: {err}");
            ExitCode::from(exit_for(&err))
        }
    }
}

fn load(path: &Path) -> Result<io::Loaded, Error> {
    io::read_file(path)
}

fn wrong_kind<T>(inst: &Instance, want: &str) -> Result<T, Error> {
    Err(Error::Schema(format!("expected a {want} file, got `{}`", inst.kind())))
}

/// A presentation file as is, or a tree file glued.
fn presentation_of(inst: &Instance) -> Result<Presentation, Error> {
    match inst {
        Instance::Presentation(p) => Ok(p.clone()),
        Instance::Tree(t) => glue(t),
        other => wrong_kind(other, "presentation or tree"),
    }
}

fn tree_of(inst: &Instance) -> Result<&TreeOfPresentations, Error> {
    match inst {
        Instance::Tree(t) => Ok(t),
        other => wrong_kind(other, "tree"),
    }
}

fn o2_of(inst: &Instance) -> Result<&O2Instance, Error> {
    match inst {
        Instance::O2(o) => Ok(o),
        other => wrong_kind(other, "o2-instance"),
    }
}

/// Writes a document to `out` and notes it in the report, or returns it
/// for printing.
fn emit(report: &mut Report, inst: &Instance, out: Option<&Path>) -> Result<Option<String>, Error> {
    let text = io::serialize(inst, None);
    match out {
        Some(path) => {
            std::fs::write(path, &text)?;
            report.kv("written", path.display());
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn names(v: &[String]) -> treepres::EdgeSet {
    edge_set(v.iter().filter(|s| !s.is_empty()))
}

fn run(cmd: Cmd, caps: &Caps) -> Result<Outcome, Error> {
    match cmd {
        Cmd::VerifyPresentation { file } => {
            let p = presentation_of(&load(&file)?.instance)?;
            let mut r = Report::new();
            let orth = p.vectors().is_orthogonal_to(p.covectors())?;
            let comp = p.vectors().dim() + p.covectors().dim() == p.ground().len();
            r.kv("field", p.field())
                .kv("ground", p.ground().len())
                .kv("dim_v", p.vectors().dim())
                .kv("dim_w", p.covectors().dim())
                .kv("orthogonal", orth)
                .kv("complement", comp);
            let mut ok = orth && comp;
            if p.ground().len() <= caps.matroid_ground {
                let cert = treepres::axioms::presented_matroid(&p, caps);
                match cert {
                    Ok(c) => {
                        let v = c.verify(caps)?;
                        r.kv("matroid", v.valid);
                        if let Some(rank) = v.rank {
                            r.kv("rank", rank);
                        }
                        ok &= v.valid;
                    }
                    Err(Error::NotMatroid(why)) => {
                        r.kv("matroid", false).witness(why);
                        ok = false;
                    }
                    Err(e) => return Err(e),
                }
            } else {
                r.kv("matroid", "skipped (ground above cap)");
            }
            r.kv("verdict", if ok { "ok" } else { "fail" });
            Ok(Outcome::new(r, ok))
        }
        Cmd::Circuits { file, dual } => {
            let p = presentation_of(&load(&file)?.instance)?;
            let sets = if dual { p.cocircuits(caps)? } else { p.circuits(caps)? };
            let mut r = Report::new();
            r.kv(if dual { "cocircuits" } else { "circuits" }, sets.len());
            for s in &sets {
                r.witness(show_set(s));
            }
            Ok(Outcome::new(r, true))
        }
        Cmd::Minor {
            file,
            contract,
            delete,
            out,
        } => {
            let p = presentation_of(&load(&file)?.instance)?;
            let m = p.minor(&names(&contract), &names(&delete))?;
            let mut r = Report::new();
            r.kv("ground", m.ground().len()).kv("dim_v", m.vectors().dim());
            let doc = emit(&mut r, &Instance::Presentation(m), out.as_deref())?;
            Ok(Outcome { report: r, doc, ok: true })
        }
        Cmd::Adjoin { file, vector, star, out } => {
            let p = presentation_of(&load(&file)?.instance)?;
            let x = SparseVec::parse(p.field(), &vector)?;
            let q = p.adjoin(&x, &star)?;
            let mut r = Report::new();
            r.kv("ground", q.ground().len()).kv("dim_v", q.vectors().dim());
            let doc = emit(&mut r, &Instance::Presentation(q), out.as_deref())?;
            Ok(Outcome { report: r, doc, ok: true })
        }
        Cmd::Glue { file, out } => {
            let loaded = load(&file)?;
            let t = tree_of(&loaded.instance)?;
            let g = glue(t)?;
            let mut r = Report::new();
            r.kv("nodes", t.len())
                .kv("real_edges", g.ground().len())
                .kv("dummy_edges", t.dummy_edges().len())
                .kv("dim_v", g.vectors().dim())
                .kv("dim_w", g.covectors().dim());
            let doc = emit(&mut r, &Instance::Presentation(g), out.as_deref())?;
            Ok(Outcome { report: r, doc, ok: true })
        }
        Cmd::EnumeratePrevectors { file, covectors } => {
            let loaded = load(&file)?;
            let t = tree_of(&loaded.instance)?;
            let kind = if covectors { Kind::Covector } else { Kind::Vector };
            let pvs = enumerate_prevectors(t, kind, caps)?;
            let mut r = Report::new();
            r.kv("kind", kind.name()).kv("count", pvs.len());
            for pv in &pvs {
                let labels: Vec<&str> = pv.nodes.iter().map(|&n| t.label(n)).collect();
                r.witness(format!(
                    "S={{{}}} underlying {}",
                    labels.join(","),
                    pv.underlying(t).show_in(t.real_edges())
                ));
            }
            Ok(Outcome::new(r, true))
        }
        Cmd::CheckAxioms { file, axiom, seed } => {
            let loaded = load(&file)?;
            let p = presentation_of(&loaded.instance)?;
            let seed = seed.or(loaded.seed).unwrap_or(0);
            let axioms: Vec<Axiom> = if axiom.is_empty() {
                Axiom::ALL.to_vec()
            } else {
                axiom.iter().map(|a| a.parse()).collect::<Result<_, _>>()?
            };
            let sys = SetSystemPair::from_presentation(&p, caps)?;
            let mut r = Report::new();
            let mut ok = true;
            for a in axioms {
                let v = sys.check(a, caps, seed)?;
                let scope = if v.exhaustive { "exhaustive" } else { "sampled" };
                r.kv(a.name(), format!("{} ({} checked, {scope})", if v.holds { "holds" } else { "fails" }, v.checked));
                if let Some(w) = &v.witness {
                    r.witness(format!("{}: {w}", a.name()));
                }
                ok &= v.holds;
            }
            r.kv("verdict", if ok { "ok" } else { "fail" });
            Ok(Outcome::new(r, ok))
        }
        Cmd::O2Witness { file } => {
            let loaded = load(&file)?;
            let inst = o2_of(&loaded.instance)?;
            let w = o2_witness(inst)?;
            w.validate(inst)?;
            let t = &inst.tree;
            let labels: Vec<&str> = w.carrier.nodes.iter().map(|&n| t.label(n)).collect();
            let mut r = Report::new();
            r.kv("instance", inst.describe())
                .kv("kind", w.kind.name())
                .kv("support", show_set(&w.carrier.support(t)))
                .witness(format!("S={{{}}}", labels.join(",")))
                .witness(format!("underlying {}", w.carrier.underlying(t).show_in(t.real_edges())));
            Ok(Outcome::new(r, true))
        }
        Cmd::SolveGame { file, dual } => {
            let loaded = load(&file)?;
            let mut r = Report::new();
            match &loaded.instance {
                Instance::Game(gf) => {
                    let sol = solve_game(&gf.game, caps)?;
                    r.kv("positions", gf.game.len())
                        .kv("winner", io::player_name(sol.winner))
                        .kv("strategy_plays", sol.strategy.len())
                        .witness(sol.strategy.dump(&gf.game));
                }
                Instance::O2(inst) => {
                    let cg = build_circuit_game(inst, dual, true, caps)?;
                    let sol = solve_game(&cg.game, caps)?;
                    let who = if sol.winner == cg.sarah() { "Sarah" } else { "Colin" };
                    r.kv("instance", inst.describe())
                        .kv("game", if dual { "cocircuit" } else { "circuit" })
                        .kv("positions", cg.game.len())
                        .kv("winner", who)
                        .kv("strategy_plays", sol.strategy.len())
                        .witness(sol.strategy.dump(&cg.game));
                }
                other => return wrong_kind(other, "game or o2-instance"),
            }
            Ok(Outcome::new(r, true))
        }
        Cmd::ReduceStrategy { file, seed, out } => {
            let loaded = load(&file)?;
            let mut r = Report::new();
            let (game, sigma, ord) = match &loaded.instance {
                Instance::Game(gf) => {
                    let sigma = match &gf.strategy {
                        Some(s) => s.clone(),
                        None => solve_game(&gf.game, caps)?.strategy,
                    };
                    let ord = match (seed, &gf.order) {
                        (Some(s), _) => PositionOrder::shuffled(gf.game.len(), &mut ChaCha8Rng::seed_from_u64(s)),
                        (None, Some(o)) => o.clone(),
                        (None, None) => PositionOrder::identity(gf.game.len()),
                    };
                    (gf.game.clone(), sigma, ord)
                }
                Instance::O2(inst) => {
                    let cg = build_circuit_game(inst, false, true, caps)?;
                    let sol = solve_game(&cg.game, caps)?;
                    if sol.winner != Player::First {
                        return Err(Error::NotWinning("Colin wins this circuit game; nothing to reduce".into()));
                    }
                    let ord = match seed.or(loaded.seed) {
                        Some(s) => PositionOrder::shuffled(cg.game.len(), &mut ChaCha8Rng::seed_from_u64(s)),
                        None => PositionOrder::identity(cg.game.len()),
                    };
                    (cg.game, sol.strategy, ord)
                }
                other => return wrong_kind(other, "game or o2-instance"),
            };
            let reduced = reduce_strategy(&game, &sigma, &ord, caps)?;
            let rep = check_strategy(&game, &reduced, Some(&ord));
            let ok = rep.is_strategy && rep.is_winning && rep.is_reduced == Some(true) && rep.splice_closed == Some(true);
            r.kv("input_plays", sigma.len())
                .kv("reduced_plays", reduced.len())
                .kv("is_strategy", rep.is_strategy)
                .kv("is_winning", rep.is_winning)
                .kv("is_reduced", rep.is_reduced.unwrap_or(false))
                .kv("splice_closed", rep.splice_closed.unwrap_or(false))
                .kv("verdict", if ok { "ok" } else { "fail" });
            if let Some((msg, play)) = &rep.problem {
                r.witness(format!("{msg}: {}", treepres::game::show_play(&game, play)));
            }
            let doc = match out {
                Some(path) => {
                    let gf = GameFile {
                        game: game.clone(),
                        strategy: Some(reduced),
                        order: Some(ord),
                    };
                    emit(&mut r, &Instance::Game(gf), Some(&path))?
                }
                None => {
                    r.witness(reduced.dump(&game));
                    None
                }
            };
            Ok(Outcome { report: r, doc, ok })
        }
        Cmd::SigmaAnalysis { file, seed } => {
            let loaded = load(&file)?;
            let inst = o2_of(&loaded.instance)?;
            let cg = build_circuit_game(inst, false, true, caps)?;
            let sol = solve_game(&cg.game, caps)?;
            if sol.winner != cg.sarah() {
                return Err(Error::NotWinning("Colin wins this circuit game".into()));
            }
            let ord = match seed.or(loaded.seed) {
                Some(s) => PositionOrder::shuffled(cg.game.len(), &mut ChaCha8Rng::seed_from_u64(s)),
                None => PositionOrder::identity(cg.game.len()),
            };
            let reduced = reduce_strategy(&cg.game, &sol.strategy, &ord, caps)?;
            let rep = sigma_analysis(inst, &cg, &reduced, &ord)?;
            let t = &inst.tree;
            let sub: Vec<&str> = rep.subtree.iter().map(|&n| t.label(n)).collect();
            let mut r = Report::new();
            r.kv("instance", inst.describe())
                .kv("subtree", format!("{{{}}}", sub.join(",")))
                .kv("reduced", rep.reduced)
                .kv("violations", rep.violations.len());
            for b in &rep.bounds {
                r.witness(format!(
                    "{}->{}: {} continuations (limit {})",
                    t.label(b.t),
                    t.label(b.u),
                    b.max_continuations,
                    b.limit
                ));
            }
            let ok = rep.reduced && rep.violations.is_empty();
            r.kv("verdict", if ok { "ok" } else { "fail" });
            Ok(Outcome::new(r, ok))
        }
        Cmd::ImStar { file, center, x, y } => {
            let loaded = load(&file)?;
            let star = tree_of(&loaded.instance)?.clone();
            let c = star
                .index_of(&center)
                .ok_or_else(|| Error::InvalidStar(format!("no node `{center}`")))?;
            let inp = StarBaseInput {
                star,
                center: c,
                x: names(&x),
                y: names(&y),
            };
            let out = im_star(&inp)?;
            let b = &out.bullets;
            let mut r = Report::new();
            r.kv("x", show_set(&out.x))
                .kv("y", show_set(&out.y))
                .kv("star_base", show_set(&out.star_base))
                .kv("covers", b.covers)
                .kv("independent", b.independent)
                .kv("spanning", b.spanning.iter().all(|(_, w)| w.is_some()))
                .kv("cospanning", b.cospanning.iter().all(|(_, w)| w.is_some()))
                .kv("separated", b.separated)
                .kv("verdict", if b.all() { "ok" } else { "fail" });
            for l in &out.leaves {
                r.witness(format!(
                    "leaf {}: P={} Q={} X={} Y={}",
                    inp.star.label(l.leaf),
                    show_set(&l.p),
                    show_set(&l.q),
                    show_set(&l.x),
                    show_set(&l.y)
                ));
            }
            Ok(Outcome::new(r, b.all()))
        }
        Cmd::BuildBase { file, root } => {
            let loaded = load(&file)?;
            let t = tree_of(&loaded.instance)?;
            let root = match root {
                Some(l) => t
                    .index_of(&l)
                    .ok_or_else(|| Error::InvalidTree(format!("no node `{l}`")))?,
                None => 0,
            };
            let cert = build_base(t, root, caps)?;
            let mut r = Report::new();
            r.kv("root", t.label(root))
                .kv("base", show_set(&cert.x))
                .kv("base_size", cert.x.len())
                .kv("cobase", show_set(&cert.y))
                .kv("partition", cert.partition)
                .kv("is_base", cert.is_base)
                .kv("cert", if cert.ok() { "OK" } else { "FAIL" })
                .witness(cert.report(t));
            Ok(Outcome::new(r, cert.ok()))
        }
        Cmd::GraphVerify { file, seed, partitions } => {
            let loaded = load(&file)?;
            let seed = seed.or(loaded.seed).unwrap_or(0);
            let (g, td) = match loaded.instance {
                Instance::Td(g, td) => (g, td),
                Instance::Graph(g) => {
                    let td = TreeDecomposition::random(&g, &mut ChaCha8Rng::seed_from_u64(seed))?;
                    (g, td)
                }
                other => return wrong_kind(&other, "graph or td"),
            };
            graph_verify(&g, &td, seed, partitions, caps)
        }
        Cmd::GenCex { n, field, out } => {
            let f: FieldSpec = field.parse()?;
            let cex = gen_cex(n, None, f, caps)?;
            let mut r = Report::new();
            r.kv("n", n)
                .kv("nodes", cex.tree.len())
                .kv("intersection_size", cex.intersection.len())
                .kv("intersection", show_set(&cex.intersection));
            let doc = emit(&mut r, &Instance::Tree(cex.tree), out.as_deref())?;
            Ok(Outcome { report: r, doc, ok: true })
        }
    }
}

fn graph_verify(
    g: &treepres::graph::Graph,
    td: &TreeDecomposition,
    seed: u64,
    partitions: Option<usize>,
    caps: &Caps,
) -> Result<Outcome, Error> {
    use rand::seq::SliceRandom;
    use treepres::edge::bits;

    let sys = GraphSystems::new(g, td, caps)?;
    let whole = g.cycle_presentation();
    let ground = g.ground();
    let masks = |sets: Vec<treepres::EdgeSet>| -> Result<Vec<u64>, Error> {
        let mut v = sets.iter().map(|s| ground.mask(s)).collect::<Result<Vec<_>, _>>()?;
        v.sort_unstable();
        Ok(v)
    };
    let circuits_ok = sys.circuits == masks(whole.circuits(caps)?)?;
    let bonds_ok = sys.cocircuits == masks(whole.cocircuits(caps)?)?;
    let glued = glue(&td_to_presentations(g, td)?)?;
    let glue_ok = masks(glued.circuits(caps)?)? == masks(whole.circuits(caps)?)?;

    let m = g.edge_count();
    let mut all: Vec<(usize, u64)> = Vec::new();
    for e in 0..m {
        let rest: Vec<usize> = (0..m).filter(|&k| k != e).collect();
        for pm in 0u64..1 << rest.len() {
            all.push((e, bits(pm).fold(0, |a, j| a | 1 << rest[j])));
        }
    }
    if let Some(k) = partitions {
        if k < all.len() {
            all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            all.truncate(k);
            all.sort_unstable();
        }
    }
    let mut mismatches = Vec::new();
    for &(e, p) in &all {
        let q = ground.full() & !p & !(1 << e);
        let (eid, ps, qs) = (ground.get(e).clone(), ground.set_of(p), ground.set_of(q));
        let gg = build_graph_game(g, td, &eid, &ps, &qs, caps)?;
        let sarah = solve_game(&gg.game, caps)?.winner == Player::First;
        let cw = sys.circuit_witness(e, p).is_some();
        let dw = sys.cocircuit_witness(e, q).is_some();
        if sarah != cw || sarah == dw {
            mismatches.push(format!("e={eid} P={} Q={}", show_set(&ps), show_set(&qs)));
        }
    }
    let ok = circuits_ok && bonds_ok && glue_ok && mismatches.is_empty();
    let mut r = Report::new();
    r.kv("graph", g.show())
        .kv("decomposition", td.show(g))
        .kv("circuits", sys.circuits.len())
        .kv("circuits_match", circuits_ok)
        .kv("bonds", sys.cocircuits.len())
        .kv("bonds_match", bonds_ok)
        .kv("glue_matches", glue_ok)
        .kv("partitions", all.len())
        .kv("game_mismatches", mismatches.len())
        .kv("verdict", if ok { "ok" } else { "fail" });
    for mm in mismatches {
        r.witness(mm);
    }
    Ok(Outcome::new(r, ok))
}
