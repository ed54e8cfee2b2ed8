use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ngverify::cayley::{CayleyGroup, GroupDump, Subgroup};
use ngverify::classes::{self, GroupClass};
use ngverify::constructions::{self, SemidirectSpec, StandardKind};
use ngverify::search::{self, ScanMode};
use ngverify::transgroup::{check_group, generate_closure, GroupReport, DEFAULT_CLOSURE_CAP};
use ngverify::{verify, Error, Report, Status, Transformation};

/// Groups of non-bijective transformations and SHP-class residuals/radicals.
///
/// Points are 0-based on input; `--one-based` shifts rendered points to 1..n.
#[derive(Debug, Parser)]
#[command(name = "ngverify", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Render carrier points as 1..n.
    #[arg(long, global = true)]
    one_based: bool,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Whether a map can belong to some transformation group (Im f = Im f²).
    Membership { map: String },
    /// All idempotents of T_n.
    Idempotents { n: usize },
    /// The maximal group at an idempotent.
    Hclass { map: String },
    /// Largest order of a group of non-bijective maps on n points.
    MaxNg { n: usize },
    /// Exhaustive subset scan over kernel pools.
    Scan {
        n: usize,
        #[arg(long)]
        bounded: bool,
    },
    /// The order-(n−1)! witness group.
    Witness { n: usize },
    /// Check that maps form a group and print the induced permutation group.
    Rho {
        #[arg(required = true)]
        maps: Vec<String>,
    },
    /// Build C_q ⋊ (C_p × C_p) from "p,q[,a]".
    Semidirect { spec: String },
    /// Verify the radical counterexample on "p,q[,a]".
    Thm33 { spec: String },
    /// Residual of a group dump for a class.
    Residual {
        group: PathBuf,
        #[arg(long)]
        class: String,
    },
    /// Radical of a group dump for a class.
    Radical {
        group: PathBuf,
        #[arg(long)]
        class: String,
    },
    /// Check G^χ = U^χ V^χ for comma-separated element indices of U and V.
    CheckThm32 {
        group: PathBuf,
        u: String,
        v: String,
        #[arg(long)]
        class: String,
    },
    /// Print a group dump: cyclic:m, dihedral:m, symmetric:m, elementary:p,k, semidirect:p,q[,a].
    DumpGroup { name: String },
    /// Run the full verification suite.
    VerifyAll {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
}

/// How a command ended, mapped onto the exit code.
enum Outcome {
    Ok,
    /// A checked claim failed: a bug, never silence.
    Violation,
    /// The input did not meet the command's preconditions.
    Precondition,
}

const EXIT_VIOLATION: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_INPUT: u8 = 5;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::InvalidTransformation(_) => EXIT_PARSE,
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Alarm(_) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

struct Out {
    json: bool,
    offset: usize,
}

impl Out {
    fn emit(&self, value: &impl Serialize, text: impl FnOnce() -> String) {
        if self.json {
            write_line(&serde_json::to_string_pretty(value).expect("serializable output"));
        } else {
            write_line(&text());
        }
    }

    fn map(&self, f: &Transformation) -> String {
        f.render(self.offset)
    }
}

// a closed pipe (e.g. `| head`) ends output quietly
fn write_line(s: &str) {
    let _ = writeln!(io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let out = Out {
        json: cli.json,
        offset: usize::from(cli.one_based),
    };
    match run(&cli, &out) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(EXIT_VIOLATION),
        Ok(Outcome::Precondition) => ExitCode::from(EXIT_INPUT),
        Err(e) => {
            if out.json {
                write_line(&json!({ "error": e.to_string(), "exit_code": exit_code(&e) }).to_string());
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Ok
    } else {
        Outcome::Violation
    }
}

fn run(cli: &Cli, out: &Out) -> ngverify::Result<Outcome> {
    match &cli.command {
        Command::Membership { map } => membership(out, map.parse()?),
        Command::Idempotents { n } => {
            let list = search::enumerate_idempotents(*n)?;
            let formula = search::idempotent_count_formula(*n);
            let value = json!({
                "n": n,
                "count": list.len(),
                "formula": formula,
                "idempotents": list.iter().map(|f| out.map(f)).collect::<Vec<_>>(),
            });
            out.emit(&value, || {
                let mut s = format!("{} idempotents on {n} points (closed form {formula})", list.len());
                for f in &list {
                    s.push_str(&format!("\n  {}", out.map(f)));
                }
                s
            });
            Ok(outcome(list.len() as u64 == formula))
        }
        Command::Hclass { map } => {
            let g = search::h_class_group(&map.parse()?)?;
            let rho = g.rho()?;
            let report = GroupReport::new(&g, out.offset);
            let value =
                json!({ "group": report, "rho_order": rho.order(), "rho_full_symmetric": rho.is_full_symmetric() });
            out.emit(&value, || {
                format!(
                    "{}\nrho: Sym({}) of order {}",
                    group_text(&report),
                    rho.m(),
                    rho.order()
                )
            });
            Ok(Outcome::Ok)
        }
        Command::MaxNg { n } => {
            let m = search::max_ng_order(*n)?;
            let value = json!({
                "n": m.n,
                "max_ng_order": m.max_order,
                "bound": m.bound,
                "idempotents_examined": m.idempotents_examined,
                "witness": GroupReport::new(&m.witness, out.offset),
            });
            out.emit(&value, || {
                format!(
                    "max NG order on {} points: {} (bound (n-1)! = {}), over {} idempotents\nwitness identity {}",
                    m.n,
                    m.max_order,
                    m.bound,
                    m.idempotents_examined,
                    out.map(m.witness.identity())
                )
            });
            Ok(outcome(m.bound_attained()))
        }
        Command::Scan { n, bounded } => {
            let mode = if *bounded { ScanMode::Bounded } else { ScanMode::Full };
            let census = search::exhaustive_ng_scan(*n, mode)?;
            let report = census.report(out.offset);
            out.emit(&report, || {
                let mut s = format!(
                    "{:?} scan, n = {}: {} pools, {} groups, max NG order {} (bound {})",
                    mode,
                    census.n,
                    census.pools.len(),
                    census.group_count(),
                    census.max_ng_order,
                    census.bound
                );
                for p in &report.pools {
                    s.push_str(&format!(
                        "\n  pool {:?}: {} maps, {} subsets, {} groups",
                        p.partition, p.pool_size, p.subsets_checked, p.group_count
                    ));
                }
                if let Some(h) = census.hclass_route_max() {
                    s.push_str(&format!("\n  H-class route max order {h}"));
                }
                s
            });
            let attained = mode == ScanMode::Bounded || census.max_ng_order == census.bound;
            Ok(outcome(census.bound_respected() && attained))
        }
        Command::Witness { n } => {
            let g = constructions::ng_witness(*n)?;
            let rho = g.rho()?;
            let report = GroupReport::new(&g, out.offset);
            let value = json!({ "group": report, "rho_full_symmetric": rho.is_full_symmetric() });
            out.emit(&value, || group_text(&report));
            Ok(outcome(g.is_ng_group() && rho.is_full_symmetric()))
        }
        Command::Rho { maps } => {
            let maps = maps
                .iter()
                .map(|m| m.parse())
                .collect::<ngverify::Result<Vec<Transformation>>>()?;
            let g = match check_group(maps) {
                Ok(g) => g,
                Err(rejection) => {
                    let value = json!({ "is_group": false, "rejection": rejection.to_string() });
                    out.emit(&value, || format!("not a group: {rejection}"));
                    return Ok(Outcome::Precondition);
                }
            };
            let rho = g.rho()?;
            let report = GroupReport::new(&g, out.offset);
            let value = json!({
                "is_group": true,
                "group": report,
                "quotient": {
                    "m": rho.m(),
                    "order": rho.order(),
                    "perms": rho.perms().iter().map(|p| &p.0).collect::<Vec<_>>(),
                    "images": (0..g.order()).map(|i| &rho.image_of(i).0).collect::<Vec<_>>(),
                    "is_full_symmetric": rho.is_full_symmetric(),
                },
            });
            out.emit(&value, || {
                let mut s = group_text(&report);
                s.push_str(&format!(
                    "\nrho onto a permutation group of order {} on {} blocks",
                    rho.order(),
                    rho.m()
                ));
                for (i, f) in g.elements().iter().enumerate() {
                    s.push_str(&format!("\n  {} -> {:?}", out.map(f), rho.image_of(i).0));
                }
                s
            });
            Ok(Outcome::Ok)
        }
        Command::Semidirect { spec } => {
            let sd = constructions::semidirect_q_p2(spec.parse()?)?;
            let value = json!({
                "spec": sd.spec,
                "order": sd.group.order(),
                "x": sd.x,
                "y": sd.y,
                "n": sd.n.members(),
                "h": sd.h.members(),
                "u": sd.u.members(),
                "v": sd.v.members(),
                "xy": sd.xy.members(),
                "group": sd.group.dump(),
            });
            out.emit(&value, || {
                format!(
                    "C_{q} x| (C_{p} x C_{p}) with a = {a}: order {}\n  N = {:?}\n  U = N<x> = {:?}\n  V = N<xy> = {:?}\n  x = {}, y = {}",
                    sd.group.order(),
                    sd.n.members(),
                    sd.u.members(),
                    sd.v.members(),
                    sd.x,
                    sd.y,
                    p = sd.spec.p,
                    q = sd.spec.q,
                    a = sd.spec.a,
                )
            });
            Ok(Outcome::Ok)
        }
        Command::Thm33 { spec } => {
            let r = constructions::counterexample_report(spec.parse()?)?;
            out.emit(&r, || {
                let p = r.spec.p;
                let mut s = format!(
                    "C_{} x| (C_{p} x C_{p}), order {}: |O_{p}(G)| = {}, |O_{p}(U)| = {}, |O_{p}(V)| = {}, |O_{p}(U)O_{p}(V)| = {}, |G^chi| = {}",
                    r.spec.q,
                    r.order,
                    r.radical_g_order,
                    r.radical_u_order,
                    r.radical_v_order,
                    r.radical_product_order,
                    r.residual_g_order
                );
                for c in &r.checks {
                    s.push_str(&format!("\n  [{}] {}", status_tag(c.status), c.claim));
                }
                for note in &r.notes {
                    s.push_str(&format!("\n  note: {note}"));
                }
                s
            });
            Ok(outcome(r.all_hold()))
        }
        Command::Residual { group, class } => {
            let g = load_group(group)?;
            let c: GroupClass = class.parse()?;
            let r = classes::residual(&g, c)?;
            emit_subgroup(out, "residual", &g, c, &r);
            Ok(Outcome::Ok)
        }
        Command::Radical { group, class } => {
            let g = load_group(group)?;
            let c: GroupClass = class.parse()?;
            let r = classes::radical(&g, c)?;
            emit_subgroup(out, "radical", &g, c, &r);
            Ok(Outcome::Ok)
        }
        Command::CheckThm32 { group, u, v, class } => {
            let g = load_group(group)?;
            let c: GroupClass = class.parse()?;
            let u = g.subgroup(&parse_indices(u)?)?;
            let v = g.subgroup(&parse_indices(v)?)?;
            let r = classes::check_residual_product(&g, &u, &v, c)?;
            out.emit(&r, || report_text(&r));
            Ok(match r.status {
                Status::Holds => Outcome::Ok,
                Status::Violated => Outcome::Violation,
                Status::PreconditionFailed => Outcome::Precondition,
            })
        }
        Command::DumpGroup { name } => {
            let g = named_group(name)?;
            let dump = g.dump();
            out.emit(&dump, || serde_json::to_string(&dump).expect("serializable dump"));
            Ok(Outcome::Ok)
        }
        Command::VerifyAll { max_n } => {
            let results = verify::run_all(*max_n, cli.seed)?;
            out.emit(&results, || {
                results
                    .iter()
                    .map(|c| {
                        format!(
                            "[{}] {:>2}. {} ({}; {} ms)",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.id,
                            c.title,
                            c.detail,
                            c.elapsed_ms
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(outcome(results.iter().all(|c| c.passed)))
        }
    }
}

fn membership(out: &Out, f: Transformation) -> ngverify::Result<Outcome> {
    let square = f.power(2)?;
    let verdict = f.can_be_member();
    let reason = if verdict { "Im(f)=Im(f²)" } else { "Im(f)≠Im(f²)" };
    let closure = generate_closure(&[f], DEFAULT_CLOSURE_CAP)?;
    let cyclic = check_group(closure).ok();
    let shift = |v: Vec<usize>| v.into_iter().map(|x| x + out.offset).collect::<Vec<_>>();
    let value = json!({
        "map": out.map(&f),
        "can_be_member": verdict,
        "reason": reason,
        "image": shift(f.image()),
        "image_of_square": shift(square.image()),
        "cyclic_group": cyclic.as_ref().map(|g| GroupReport::new(g, out.offset)),
    });
    out.emit(&value, || {
        let mut s = format!(
            "{}: {} ({reason})",
            out.map(&f),
            if verdict { "member" } else { "not a member" }
        );
        if let Some(g) = &cyclic {
            s.push_str(&format!(
                "\ncyclic group of order {} with identity {}",
                g.order(),
                out.map(g.identity())
            ));
        }
        s
    });
    // the cyclic closure must be a group exactly when the criterion says so
    Ok(outcome(cyclic.is_some() == verdict))
}

fn group_text(r: &GroupReport) -> String {
    format!(
        "group of order {} on {} points (NG: {})\n  identity {}\n  kernel {:?}, image {:?}, quotient size {}\n  elements {}",
        r.order,
        r.n,
        r.is_ng,
        r.identity,
        r.kernel_blocks,
        r.image,
        r.quotient_order,
        r.elements.join(" ")
    )
}

fn status_tag(status: Status) -> &'static str {
    match status {
        Status::Holds => "holds",
        Status::Violated => "VIOLATED",
        Status::PreconditionFailed => "precondition failed",
    }
}

fn report_text(r: &Report) -> String {
    match &r.witness {
        Some(w) => format!("[{}] {}\n  {}", status_tag(r.status), r.claim, w),
        None => format!("[{}] {}", status_tag(r.status), r.claim),
    }
}

fn emit_subgroup(out: &Out, what: &str, g: &CayleyGroup, c: GroupClass, s: &Subgroup) {
    let labels: Vec<&str> = s.members().iter().map(|&i| g.label(i)).collect();
    let value: Value = json!({
        "class": c.name(),
        "kind": what,
        "order": s.order(),
        "members": s.members(),
        "labels": labels,
    });
    out.emit(&value, || {
        format!("{what} for {c}: order {} = {{{}}}", s.order(), labels.join(", "))
    });
}

fn load_group(path: &PathBuf) -> ngverify::Result<CayleyGroup> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let dump: GroupDump = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    CayleyGroup::from_dump(dump)
}

fn parse_indices(s: &str) -> ngverify::Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad element index {t:?}: {e}")))
        })
        .collect()
}

fn named_group(name: &str) -> ngverify::Result<CayleyGroup> {
    let (family, args) = name
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected family:args, got {name:?}")))?;
    let nums = parse_indices(args)?;
    let kind = match (family, nums.as_slice()) {
        ("cyclic", [m]) => StandardKind::Cyclic(*m),
        ("dihedral", [m]) => StandardKind::Dihedral(*m),
        ("symmetric", [m]) => StandardKind::Symmetric(*m),
        ("elementary", [p, k]) => StandardKind::ElementaryAbelian(*p, *k),
        ("semidirect", _) => {
            let spec: SemidirectSpec = args.parse()?;
            return Ok(constructions::semidirect_q_p2(spec)?.group);
        }
        _ => return Err(Error::Parse(format!("unknown group {name:?}"))),
    };
    constructions::standard_group(kind)
}
