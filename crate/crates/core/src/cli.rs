//! Command-line front end. `run` returns the process exit code: 0 on success, 2 on a
//! usage error, 1 when a computation fails.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::classify::{self, AbstractType, ElementLabel, GroupDescriptor};
use crate::family_cubic::{self, CubicFamilyParams};
use crate::family_quartic::{self, Auto};
use crate::iskovskikh::{self, BaseGroup, FiberFix, IskAction};
use crate::numberfield::{fmt_rational, parse_rational, SquareClassField};
use crate::piclattice::{enumerate_lines, intersection_table, NUM_LINES};
use crate::quotient::{run_scenario, ScenarioName};
use crate::weyl::{
    centralizer_elements, conjugate_in, full_weyl_group, invariant_rank_of, minimal_model_search_gens, orbits_under,
    parse_element, parse_generators, SubgroupClosure, DEFAULT_CAP,
};

#[derive(Parser, Debug)]
#[command(name = "dp2", about = "Lines, Weyl group actions and quotient rationality for degree-2 del Pezzo surfaces")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Upper bound on the size of any group closure.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The 56 lines.
    Lines {
        #[arg(long)]
        count: bool,
        /// Print the 56x56 intersection table.
        #[arg(long)]
        table: bool,
    },
    /// Closure of a generator list.
    Group {
        #[arg(long)]
        gens: String,
        /// Print only the order.
        #[arg(long)]
        order: bool,
    },
    /// Centralizer of a group inside an ambient group (default: all of W(E7)).
    Centralizer {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        ambient: Option<String>,
    },
    InvariantRank {
        #[arg(long)]
        gens: String,
    },
    /// Search for w with w g w^-1 = h.
    Conjugate {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        ambient: Option<String>,
    },
    /// Largest K² reachable by equivariant blow-downs.
    Minmodel {
        #[arg(long)]
        gens: String,
    },
    Quotient {
        #[arg(long)]
        scenario: String,
    },
    Iskovskikh {
        #[arg(long, default_value_t = 1)]
        g0: u32,
        #[arg(long)]
        gb: bool,
        #[arg(long, default_value = "trivial")]
        base: String,
        /// Flags for one base element, e.g. isolated,fused; repeat per element.
        #[arg(long)]
        fix: Vec<String>,
    },
    Classify(ClassifyArgs),
    Family {
        #[command(subcommand)]
        which: FamilyCmd,
    },
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, conflicts_with = "gamma")]
    group: Option<String>,
    /// Element labels of a generating set: 0..5, 4+, 4-.
    #[arg(long, requires = "group")]
    types: Option<String>,
    /// Candidate Galois image for the order-3 type-4 action.
    #[arg(long)]
    gamma: Option<String>,
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    Cubic {
        #[arg(long = "A", allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long = "B", allow_hyphen_values = true, default_value = "0")]
        b: String,
        #[arg(long = "C", allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        field: Option<String>,
        /// A worked example, 6.15 to 6.18.
        #[arg(long, conflicts_with_all = ["a", "c", "field"])]
        example: Option<String>,
    },
    Quartic {
        /// Preset 1 to 9.
        #[arg(long)]
        example: Option<u8>,
        /// Group name (N, C4+, C4-, C2xC2, D8, Q8+, Q8-) or comma list of words like a3b,dg.
        #[arg(long, requires = "example")]
        group: Option<String>,
        #[arg(long, conflicts_with_all = ["example", "group"])]
        table4: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

struct Output {
    json: bool,
    text: Vec<String>,
    value: serde_json::Value,
}

impl Output {
    fn new<T: Serialize>(json: bool, value: &T) -> Output {
        Output { json, text: vec![], value: serde_json::to_value(value).expect("serialisable") }
    }

    fn line(mut self, s: impl Into<String>) -> Output {
        self.text.push(s.into());
        self
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GroupReport {
    order: usize,
    fixed_rank: usize,
    orbit_sizes: Vec<usize>,
}

fn closure(gens: &str, cap: usize) -> Result<SubgroupClosure, Failure> {
    let g = parse_generators(gens).map_err(usage)?;
    SubgroupClosure::closure(&g, cap).map_err(compute)
}

fn group_report(g: &SubgroupClosure) -> GroupReport {
    let all: Vec<usize> = (0..NUM_LINES).collect();
    let mut orbit_sizes: Vec<usize> = orbits_under(&g.generators, &all).iter().map(Vec::len).collect();
    orbit_sizes.sort_unstable();
    GroupReport { order: g.order(), fixed_rank: invariant_rank_of(&g.generators), orbit_sizes }
}

fn ambient(spec: &Option<String>, cap: usize) -> Result<SubgroupClosure, Failure> {
    match spec {
        Some(s) => closure(s, cap),
        None => Ok(full_weyl_group()),
    }
}

fn quartic_group(spec: &str) -> Result<Vec<Auto>, Failure> {
    family_quartic::named_group(spec).map_err(usage)
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let j = cli.json;
    Ok(match &cli.cmd {
        Cmd::Lines { count, table } => {
            if *count {
                return Ok(Output::new(j, &json!({ "count": NUM_LINES })).line(NUM_LINES.to_string()));
            }
            if *table {
                let t = intersection_table();
                let rows: Vec<Vec<i8>> = t.iter().map(|r| r.to_vec()).collect();
                let mut o = Output::new(j, &rows);
                for r in &rows {
                    o = o.line(r.iter().map(|x| format!("{x:>2}")).collect::<Vec<_>>().join(" "));
                }
                return Ok(o);
            }
            let lines: Vec<_> = enumerate_lines().iter().map(|l| json!({ "label": l.label.to_string(), "class": l.class.0 })).collect();
            let mut o = Output::new(j, &lines);
            for l in enumerate_lines() {
                o = o.line(format!("{:<6} {}", l.label.to_string(), l.class));
            }
            o
        }
        Cmd::Group { gens, order } => {
            let g = closure(gens, cli.cap)?;
            let r = group_report(&g);
            if *order {
                return Ok(Output::new(j, &json!({ "order": r.order })).line(r.order.to_string()));
            }
            let t = format!("order {}, fixed rank {}, orbit sizes {:?}", r.order, r.fixed_rank, r.orbit_sizes);
            Output::new(j, &r).line(t)
        }
        Cmd::Centralizer { gens, ambient: amb } => {
            let g = parse_generators(gens).map_err(usage)?;
            let a = ambient(amb, cli.cap)?;
            let c = SubgroupClosure::from_elements(&centralizer_elements(&g, &a));
            let r = group_report(&c);
            let t = format!("order {}, fixed rank {}, orbit sizes {:?}", r.order, r.fixed_rank, r.orbit_sizes);
            Output::new(j, &r).line(t)
        }
        Cmd::InvariantRank { gens } => {
            let g = parse_generators(gens).map_err(usage)?;
            let r = invariant_rank_of(&g);
            Output::new(j, &json!({ "rank": r })).line(r.to_string())
        }
        Cmd::Conjugate { g, h, ambient: amb } => {
            let g = parse_element(g).map_err(usage)?;
            let h = parse_element(h).map_err(usage)?;
            let a = ambient(amb, cli.cap)?;
            match conjugate_in(&g, &h, &a) {
                Some(w) => {
                    let imgs: Vec<String> = (0..7).map(|i| crate::piclattice::LINE_LABELS[w.apply_line(i)].to_string()).collect();
                    Output::new(j, &json!({ "conjugate": true, "conjugatorEImages": imgs })).line(format!("conjugate by E -> {}", imgs.join(" ")))
                }
                None => Output::new(j, &json!({ "conjugate": false })).line("not conjugate"),
            }
        }
        Cmd::Minmodel { gens } => {
            let g = parse_generators(gens).map_err(usage)?;
            let m = minimal_model_search_gens(&g);
            let chain = m.contracted_labels();
            let mut o = Output::new(j, &json!({ "maxK2": m.max_k2, "chain": chain })).line(format!("max K^2 = {}", m.max_k2));
            for c in &chain {
                o = o.line(format!("contract {}", c.join(" ")));
            }
            o
        }
        Cmd::Quotient { scenario } => {
            let name: ScenarioName = scenario.parse().map_err(usage)?;
            let ledger = run_scenario(name);
            let k2 = ledger.replay().map_err(compute)?;
            let trace: Vec<String> = ledger.k2_trace().iter().map(fmt_rational).collect();
            let steps = serde_json::to_value(&ledger.steps).expect("serialisable");
            Output::new(j, &steps).line(format!("K^2 trace {}", trace.join(" -> "))).line(format!("final K^2 {}", fmt_rational(&k2)))
        }
        Cmd::Iskovskikh { g0, gb, base, fix } => {
            let base: BaseGroup = base.parse().map_err(usage)?;
            let fixes: Vec<FiberFix> = fix.iter().map(|f| f.parse()).collect::<Result<_, _>>().map_err(usage)?;
            let fixes = if fixes.len() == 1 && base.order() > 2 { vec![fixes[0]; base.order() as usize - 1] } else { fixes };
            let action = IskAction::new(*g0, *gb, base, fixes).map_err(usage)?;
            let v = iskovskikh::full_pipeline(&action).map_err(compute)?;
            let mut o = Output::new(j, &v).line(format!("{} (K^2 bound {})", v.model_kind, v.k2_bound));
            for t in &v.trail {
                o = o.line(format!("  {t}"));
            }
            o
        }
        Cmd::Classify(a) => {
            if let Some(gamma) = &a.gamma {
                let g = closure(gamma, cli.cap)?;
                let ok = classify::gamma_classification_for_type4(&g).map_err(compute)?;
                let tag = family_cubic::tag_of(&g.generators);
                Output::new(j, &json!({ "passes": ok, "order": g.order(), "tag": tag }))
                    .line(format!("{} (order {}, {})", if ok { "passes" } else { "fails" }, g.order(), serde_json::to_value(tag).unwrap()))
            } else if let Some(group) = &a.group {
                let t: AbstractType = group.parse().map_err(usage)?;
                let labels: Vec<ElementLabel> = match &a.types {
                    Some(s) => s.split(',').map(|x| x.parse()).collect::<Result<_, _>>().map_err(usage)?,
                    None => vec![],
                };
                let v = classify::proposition_dp2(&GroupDescriptor::new(t, labels)).map_err(compute)?;
                let text = serde_json::to_string(&v).unwrap();
                Output::new(j, &v).line(text)
            } else {
                return Err(Failure::Usage("classify needs --group or --gamma".into()));
            }
        }
        Cmd::Family { which: FamilyCmd::Cubic { a, b, c, field, example } } => {
            let p = match example {
                Some(e) => family_cubic::example(e).map_err(usage)?,
                None => {
                    let (Some(a), Some(c)) = (a, c) else {
                        return Err(Failure::Usage("family cubic needs --A and --C, or --example".into()));
                    };
                    let k = match field {
                        Some(f) => SquareClassField::parse(f).map_err(usage)?,
                        None => SquareClassField::rationals(),
                    };
                    let q = |s: &str| parse_rational(s).map_err(usage);
                    CubicFamilyParams::new(q(a)?, q(b)?, q(c)?, k).map_err(compute)?
                }
            };
            let r = family_cubic::report(&p).map_err(compute)?;
            let v = json!({ "gamma": r.gamma, "xRational": r.x_rational, "c3Quotient": r.c3_quotient, "s3Quotient": r.s3_quotient });
            let tag = r.gamma.as_ref().map(|g| serde_json::to_value(g.tag).unwrap().to_string()).unwrap_or_else(|| "undetermined".into());
            Output::new(j, &v)
                .line(format!("gamma {tag}"))
                .line(format!("X {:?}, X/C3 {:?}, X/S3 {:?}", r.x_rational, r.c3_quotient, r.s3_quotient))
        }
        Cmd::Family { which: FamilyCmd::Quartic { example, group, table4 } } => {
            if *table4 {
                let cells = family_quartic::table4_matrix();
                let mut o = Output::new(j, &cells);
                for c in &cells {
                    let what = match (&c.impossible, &c.error) {
                        (Some(_), _) => "impossible".to_string(),
                        (_, Some(e)) => format!("error: {e}"),
                        _ => format!("X {:?}, X/G {:?}", c.x.unwrap(), c.quotient.unwrap()),
                    };
                    o = o.line(format!("{:>2} {:<16} {:<28} {} {}", c.row, format!("{:?}", c.column), c.row_name, if c.matches { "ok  " } else { "MISS" }, what));
                }
                return Ok(o);
            }
            let Some(n) = example else {
                return Err(Failure::Usage("family quartic needs --example or --table4".into()));
            };
            let preset = family_quartic::example_preset(*n).map_err(usage)?;
            let m = family_quartic::model(&preset).map_err(compute)?;
            let x = m.x_rationality();
            let galois = m.galois_model().map_err(compute)?;
            match group {
                None => {
                    let v = json!({ "preset": preset, "x": x, "galois": galois });
                    Output::new(j, &v).line(format!("X {:?} (rho {}, max K^2 {})", x.verdict, x.rho, x.max_k2))
                }
                Some(gs) => {
                    let g = quartic_group(gs)?;
                    let minimality = m.g_minimality(&g);
                    let q = m.quotient_verdict(&g).map_err(compute)?;
                    let words: Vec<String> = g.iter().map(Auto::to_string).collect();
                    let v = json!({ "preset": preset, "group": words, "x": x, "minimality": minimality, "quotient": q });
                    Output::new(j, &v)
                        .line(format!("X {:?}, X/G {:?}", x.verdict, q.verdict))
                        .line(format!("rho^G {}, {}", minimality.rank, q.reason))
                }
            }
        }
    })
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = if o.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.value).unwrap())
            } else {
                writeln!(out, "{}", o.text.join("\n"))
            };
            0
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}\n\n{}", <Cli as clap::CommandFactory>::command().render_usage());
            2
        }
        Err(Failure::Compute(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("dp2").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn line_count() {
        assert_eq!(call(&["lines", "--count"]), (0, "56\n".into()));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["lines", "--bogus"]).0, 2);
        assert_eq!(call(&["quotient", "--scenario", "nope"]).0, 2);
        assert_eq!(call(&["family", "quartic", "--example", "12"]).0, 2);
        assert_eq!(call(&["family", "quartic", "--example", "1", "--group", "a2b2"]).0, 1);
    }

    #[test]
    fn scenario_final_value() {
        let (code, out) = call(&["quotient", "--scenario", "psl2f7"]);
        assert_eq!(code, 0);
        assert!(out.trim_end().ends_with("final K^2 5/1"), "{out}");
        let (_, js) = call(&["quotient", "--scenario", "type4", "--json"]);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert!(v.as_array().unwrap().iter().all(|s| s.get("k2").map_or(true, |k| k.as_str().unwrap().contains('/'))));
    }

    #[test]
    fn small_group_and_classify() {
        let (code, out) = call(&["group", "--gens", "perm:(1 2 3)(4 5 6)", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["order"], 3);
        let (_, out) = call(&["classify", "--group", "S3", "--types", "2,2,2", "--json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["kind"], "PotentiallyNonRational");
        assert_eq!(v["caseIndex"], 8);
    }

    #[test]
    fn families() {
        let (code, out) = call(&["family", "cubic", "--A", "-1", "--B", "0", "--C", "-13/4", "--field", "w,-13", "--json"]);
        assert_eq!(code, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        for k in ["gamma", "xRational", "c3Quotient", "s3Quotient"] {
            assert!(v.get(k).is_some());
        }
        let (code, out) = call(&["family", "quartic", "--example", "4", "--group", "D8", "--json"]);
        assert_eq!(code, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["quotient"]["verdict"], "NonRational");
    }

    #[test]
    fn output_is_deterministic() {
        let a = call(&["family", "quartic", "--example", "2", "--group", "Q8+", "--json"]);
        let b = call(&["family", "quartic", "--example", "2", "--group", "Q8+", "--json"]);
        assert_eq!(a, b);
    }
}
