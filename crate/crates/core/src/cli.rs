//! Command-line front door: parse groupoid/bundle/functor files, dispatch
//! one computation, emit a deterministic JSON or text report on stdout.
//!
//! Exit codes: 0 success; 2 validation failure (the report names the
//! violated axiom and witness); 3 resource limits (`too_large`,
//! `non_exhaustive`); 64 usage errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bundles::{
    are_concordant, are_isomorphic, classifying_map, enumerate_bundles, holonomy, total_space,
    CocycleBundle, GroupoidRef, SerializedBundle, SerializedCertificate,
};
use crate::classifying::{classifying_homology, morita_invariance_check, universal_total};
use crate::error::{Error, Result};
use crate::groupoid::{
    finite_groupoid_from_serialized, validate_groupoid, FiniteGroupoid, GroupoidFunctor,
};
use crate::simplicial::chain::chain_complex;
use crate::simplicial::homology::homology;

#[derive(Parser)]
#[command(
    name = "nervecalc",
    version,
    about = "Exact classifying-space homology and bundle classification for finite groupoids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a groupoid or bundle file.
    #[command(group(clap::ArgGroup::new("input").required(true).multiple(false)))]
    Validate {
        #[arg(long, group = "input")]
        groupoid: Option<PathBuf>,
        #[arg(long, group = "input")]
        bundle: Option<PathBuf>,
    },
    /// Homology of the classifying space of a groupoid.
    Homology {
        #[arg(long)]
        groupoid: PathBuf,
        #[arg(long)]
        kmax: usize,
        /// Nerve truncation override (≥ kmax + 1).
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Homology of the universal total object (arrow groupoid nerve).
    Euniv {
        #[arg(long)]
        groupoid: PathBuf,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Morita-invariance check of a weak equivalence.
    Morita {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        kmax: usize,
    },
    /// Classifying map of a bundle into the nerve.
    Classify {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Total space of a bundle with its homology.
    #[command(name = "total-space")]
    TotalSpace {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Vertex-wise isomorphism between two bundles.
    Isomorphic {
        #[arg(long = "bundle", num_args = 1, action = clap::ArgAction::Append)]
        bundles: Vec<PathBuf>,
    },
    /// Concordance between two bundles (exhaustive prism search).
    Concordance {
        #[arg(long = "bundle", num_args = 1, action = clap::ArgAction::Append)]
        bundles: Vec<PathBuf>,
        #[arg(long = "search-limit", default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        search_limit: u64,
    },
    /// Holonomy of a closed edge loop in a bundle.
    Holonomy {
        #[arg(long)]
        bundle: PathBuf,
        /// Loop as comma-separated vertex names, first = last.
        #[arg(long = "loop")]
        loop_path: String,
    },
    /// Enumerate all bundles over the base of a template file and group
    /// them into concordance classes.
    Enumerate {
        /// Bundle file; only its base and groupoid are used.
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long = "search-limit", default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        search_limit: u64,
    },
}

/// Parses arguments, runs one computation, prints the report. Returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success status
            if e.use_stderr() {
                eprint!("{e}");
                return 64;
            }
            print!("{e}");
            return 0;
        }
    };
    let format = cli.format;
    match dispatch(cli) {
        Ok(report) => {
            match format {
                Format::Json => println!("{}", report.json),
                Format::Text => print!("{}", report.text),
            }
            0
        }
        Err(e) => {
            let payload = serde_json::json!({
                "reason": e.reason(),
                "message": e.to_string(),
            });
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&payload).expect("error report")
                ),
                Format::Text => println!("error ({}): {e}", e.reason()),
            }
            e.exit_code()
        }
    }
}

struct Report {
    json: String,
    text: String,
}

fn report<T: Serialize>(value: &T, text: String) -> Result<Report> {
    Ok(Report {
        json: serde_json::to_string_pretty(value).expect("report serialization"),
        text,
    })
}

fn read_file(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "groupoid".to_string())
}

fn load_groupoid(path: &Path) -> Result<FiniteGroupoid> {
    validate_groupoid(&file_stem(path), &read_file(path)?)
}

/// Loads a bundle file; `groupoid` path references resolve relative to the
/// bundle file's directory.
fn load_bundle(path: &Path) -> Result<CocycleBundle> {
    let raw = read_file(path)?;
    let serialized = SerializedBundle::from_json(&raw)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    serialized.to_bundle(&move |rel: &str| load_groupoid(&dir.join(rel)))
}

fn load_bundle_template(
    path: &Path,
) -> Result<(crate::simplicial::OrderedSimplicialComplex, FiniteGroupoid)> {
    let raw = read_file(path)?;
    let serialized = SerializedBundle::from_json(&raw)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let base = serialized.base_complex()?;
    let groupoid = serialized.resolve_groupoid(&move |rel: &str| load_groupoid(&dir.join(rel)))?;
    Ok((base, groupoid))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct SerializedFunctor {
    source: GroupoidRef,
    target: GroupoidRef,
    object_map: BTreeMap<String, String>,
    morphism_map: BTreeMap<String, String>,
}

fn load_functor(path: &Path) -> Result<GroupoidFunctor> {
    let raw = read_file(path)?;
    let serialized: SerializedFunctor =
        serde_json::from_str(&raw).map_err(|e| Error::Parse(e.to_string()))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = |r: &GroupoidRef, name: &str| -> Result<FiniteGroupoid> {
        match r {
            GroupoidRef::Inline(s) => finite_groupoid_from_serialized(name, s),
            GroupoidRef::Path(p) => load_groupoid(&dir.join(p)),
        }
    };
    GroupoidFunctor::new(
        resolve(&serialized.source, "source")?,
        resolve(&serialized.target, "target")?,
        serialized.object_map,
        serialized.morphism_map,
    )
}

fn exactly_two(bundles: &[PathBuf]) -> Result<(&PathBuf, &PathBuf)> {
    match bundles {
        [a, b] => Ok((a, b)),
        _ => Err(Error::Parse(format!(
            "expected exactly two --bundle arguments, got {}",
            bundles.len()
        ))),
    }
}

fn dispatch(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Validate { groupoid, bundle } => match (groupoid, bundle) {
            (Some(path), _) => {
                let g = load_groupoid(&path)?;
                let payload = serde_json::json!({
                    "valid": true,
                    "kind": "groupoid",
                    "name": g.name(),
                    "objects": g.object_count(),
                    "morphisms": g.morphism_count(),
                });
                report(
                    &payload,
                    format!(
                        "groupoid `{}`: valid ({} objects, {} morphisms)\n",
                        g.name(),
                        g.object_count(),
                        g.morphism_count()
                    ),
                )
            }
            (None, Some(path)) => {
                let b = load_bundle(&path)?;
                let payload = serde_json::json!({
                    "valid": true,
                    "kind": "bundle",
                    "vertices": b.base().vertex_names().len(),
                    "edges": b.base().edges().len(),
                });
                report(
                    &payload,
                    format!(
                        "bundle: valid ({} vertices, {} edges)\n",
                        b.base().vertex_names().len(),
                        b.base().edges().len()
                    ),
                )
            }
            // clap's ArgGroup guarantees exactly one input flag
            (None, None) => unreachable!(),
        },
        Command::Homology {
            groupoid,
            kmax,
            truncation,
        } => {
            let g = load_groupoid(&groupoid)?;
            let r = classifying_homology(&g, kmax, truncation)?;
            let text = format!(
                "classifying space of `{}` (truncation {}, levels {:?})\n{}",
                r.groupoid,
                r.truncation,
                r.level_counts,
                r.homology.display_text()
            );
            report(&r, text)
        }
        Command::Euniv {
            groupoid,
            kmax,
            truncation,
        } => {
            let g = load_groupoid(&groupoid)?;
            let r = universal_total(&g, kmax, truncation)?;
            let text = format!(
                "universal total object of `{}` (truncation {}, levels {:?})\n{}",
                g.name(),
                r.report.truncation,
                r.report.level_counts,
                r.report.homology.display_text()
            );
            report(&r, text)
        }
        Command::Morita { functor, kmax } => {
            let f = load_functor(&functor)?;
            let r = morita_invariance_check(&f, kmax)?;
            let text = format!(
                "morita invariance through degree {}: {}\nsource profile:\n{}target profile:\n{}",
                r.k_max,
                if r.invariant { "ok" } else { "FAILED" },
                r.source.homology.display_text(),
                r.target.homology.display_text()
            );
            report(&r, text)
        }
        Command::Classify { bundle, truncation } => {
            let b = load_bundle(&bundle)?;
            let t = truncation.unwrap_or(b.base().dim());
            let map = classifying_map(&b, t)?;
            #[derive(Serialize)]
            struct ClassifyReport {
                truncation: usize,
                levels: Vec<BTreeMap<String, String>>,
            }
            let levels: Vec<BTreeMap<String, String>> = (0..=map.source().top_level())
                .map(|n| {
                    (0..map.source().level_size(n))
                        .map(|s| {
                            (
                                map.source().label(n, s).to_string(),
                                map.target().label(n, map.apply(n, s)).to_string(),
                            )
                        })
                        .collect()
                })
                .collect();
            let r = ClassifyReport {
                truncation: t,
                levels,
            };
            let mut text = format!("classifying map into the nerve (truncation {t})\n");
            for (n, level) in r.levels.iter().enumerate() {
                for (from, to) in level {
                    text.push_str(&format!("level {n}: {from} -> {to}\n"));
                }
            }
            report(&r, text)
        }
        Command::TotalSpace { bundle, kmax } => {
            let b = load_bundle(&bundle)?;
            let t = total_space(&b)?;
            let k = kmax.unwrap_or_else(|| b.base().dim());
            let c = chain_complex(t.total())?;
            let h = homology(&c, k)?;
            let fibers: BTreeMap<String, usize> = b
                .base()
                .vertex_names()
                .iter()
                .enumerate()
                .map(|(v, name)| (name.clone(), t.fiber(v).len()))
                .collect();
            #[derive(Serialize)]
            struct TotalSpaceReport {
                levels: Vec<usize>,
                fibers: BTreeMap<String, usize>,
                homology: crate::simplicial::homology::HomologyProfile,
            }
            let r = TotalSpaceReport {
                levels: t.total().level_sizes(),
                fibers,
                homology: h,
            };
            let text = format!(
                "total space levels {:?}\n{}",
                r.levels,
                r.homology.display_text()
            );
            report(&r, text)
        }
        Command::Isomorphic { bundles } => {
            let (a, b) = exactly_two(&bundles)?;
            let b0 = load_bundle(a)?;
            let b1 = load_bundle(b)?;
            let lambda = are_isomorphic(&b0, &b1)?;
            let payload = serde_json::json!({
                "isomorphic": lambda.is_some(),
                "lambda": lambda,
            });
            let text = match &lambda {
                Some(l) => {
                    let mut t = String::from("isomorphic: yes\n");
                    for (v, m) in l {
                        t.push_str(&format!("lambda[{v}] = {m}\n"));
                    }
                    t
                }
                None => String::from("isomorphic: no\n"),
            };
            report(&payload, text)
        }
        Command::Concordance {
            bundles,
            search_limit,
        } => {
            let (a, b) = exactly_two(&bundles)?;
            let b0 = load_bundle(a)?;
            let b1 = load_bundle(b)?;
            let cert = are_concordant(&b0, &b1, search_limit)?;
            #[derive(Serialize)]
            struct ConcordanceReport {
                concordant: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                certificate: Option<SerializedCertificate>,
            }
            let r = ConcordanceReport {
                concordant: cert.is_some(),
                certificate: cert.as_ref().map(SerializedCertificate::from_certificate),
            };
            let text = format!("concordant: {}\n", if r.concordant { "yes" } else { "no" });
            report(&r, text)
        }
        Command::Holonomy { bundle, loop_path } => {
            let b = load_bundle(&bundle)?;
            let path: Vec<String> = loop_path.split(',').map(str::to_string).collect();
            let h = holonomy(&b, &path)?;
            let payload = serde_json::json!({ "holonomy": h });
            report(&payload, format!("holonomy: {h}\n"))
        }
        Command::Enumerate {
            bundle,
            search_limit,
        } => {
            let (base, groupoid) = load_bundle_template(&bundle)?;
            let e = enumerate_bundles(&base, &groupoid, search_limit as u128, search_limit)?;
            #[derive(Serialize)]
            struct EnumerateReport {
                bundle_count: usize,
                class_count: usize,
                classes: Vec<Vec<usize>>,
                bundles: Vec<BundleData>,
            }
            #[derive(Serialize)]
            struct BundleData {
                h: BTreeMap<String, String>,
                gamma: BTreeMap<String, String>,
            }
            let r = EnumerateReport {
                bundle_count: e.bundles.len(),
                class_count: e.classes.len(),
                classes: e.classes.clone(),
                bundles: e
                    .bundles
                    .iter()
                    .map(|b| BundleData {
                        h: b.h_by_name(),
                        gamma: b
                            .gamma_by_name()
                            .into_iter()
                            .map(|((u, v), m)| (format!("{u},{v}"), m))
                            .collect(),
                    })
                    .collect(),
            };
            let text = format!(
                "bundles: {}\nconcordance classes: {}\nclass sizes: {:?}\n",
                r.bundle_count,
                r.class_count,
                r.classes.iter().map(Vec::len).collect::<Vec<_>>()
            );
            report(&r, text)
        }
    }
}
