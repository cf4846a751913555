use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use nlts::cohomology::{Cochain, Complex, NLieCochain};
use nlts::extensions::{
    build_extension, extensions_equivalent, extract_cocycle, induced_representation,
    AbelianExtension, ExtensionCocycle,
};
use nlts::io;
use nlts::lts::{check_lts, check_representation, LieTripleSystem, Representation};
use nlts::nrep::{check_nijenhuis_rep, induce_rep, NijenhuisContext};
use nlts::operators::{
    grid_search_nijenhuis, induced_bracket, is_modified_rb, is_nijenhuis, is_rota_baxter,
    LinearOperator, DEFAULT_BUDGET,
};
use nlts::twosys::{
    check_2system, check_crossed_module, check_nijenhuis_2system, cocycle_to_skeletal,
    crossed_module_to_strict, skeletal_to_cocycle, strict_to_crossed_module,
};
use nlts::{Matrix, Rational, Report, Tensor};

/// Exact checks and cohomology for Nijenhuis Lie triple systems.
#[derive(Parser)]
#[command(name = "nlts", version)]
struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Include counterexample tuples.
    #[arg(long, global = true)]
    witness: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the Lie triple system axioms.
    CheckLts { lts: PathBuf },
    /// Check the Nijenhuis identity for an operator.
    CheckNijenhuis { lts: PathBuf, op: PathBuf },
    /// Check the Rota-Baxter identity.
    CheckRb {
        lts: PathBuf,
        op: PathBuf,
        /// Weight as p/q; defaults to the operator payload's weight.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Check the modified Rota-Baxter identity.
    CheckMrb {
        lts: PathBuf,
        op: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Deformed bracket of an operator and its checks.
    InducedBracket { lts: PathBuf, op: PathBuf },
    /// All Nijenhuis operators with entries from a finite grid.
    Search {
        lts: PathBuf,
        /// Entry values, e.g. --grid=-1,0,1.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        grid: Vec<String>,
        /// Maximum number of candidates.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Check the representation identities.
    CheckRep { lts: PathBuf, rep: PathBuf },
    /// Check the Nijenhuis representation identity.
    CheckNrep {
        lts: PathBuf,
        op: PathBuf,
        rep: PathBuf,
    },
    /// Representation of the deformed system.
    InduceRep {
        lts: PathBuf,
        op: PathBuf,
        rep: PathBuf,
    },
    /// Cohomology dimensions in degree 1, 3 or 5.
    Cohomology {
        #[arg(long)]
        degree: usize,
        lts: PathBuf,
        op: PathBuf,
        rep: PathBuf,
    },
    /// Whether a cochain pair is a cocycle, and a coboundary.
    CocycleCheck {
        lts: PathBuf,
        op: PathBuf,
        rep: PathBuf,
        cochain: PathBuf,
    },
    /// Build the extension described by a payload and check it.
    Extend { ext: PathBuf },
    /// Extract the classifying pair of an extension through a section.
    Extract {
        ext: PathBuf,
        /// Section as an (n+m) x n matrix; defaults to x -> (x, 0).
        #[arg(long)]
        section: Option<PathBuf>,
    },
    /// Decide whether two extensions over one context are equivalent.
    Equivalent { ext1: PathBuf, ext2: PathBuf },
    /// Check the Lie triple 2-system axioms.
    #[command(name = "check-2sys")]
    Check2sys { system: PathBuf },
    /// Check a Nijenhuis operator on a 2-system.
    #[command(name = "check-n2sys")]
    CheckN2sys { system: PathBuf },
    /// Degree-5 pair of a skeletal structure.
    SkeletalToCocycle { system: PathBuf },
    /// Skeletal structure of a degree-5 cocycle.
    CocycleToSkeletal {
        lts: PathBuf,
        op: PathBuf,
        rep: PathBuf,
        cochain: PathBuf,
    },
    /// Check the crossed module conditions.
    CheckXmod { xmod: PathBuf },
    /// Crossed module of a strict structure.
    ToXmod { system: PathBuf },
    /// Strict structure of a crossed module.
    FromXmod { xmod: PathBuf },
    /// Write the built-in example files.
    Corpus { dir: PathBuf },
}

struct Outcome {
    ok: bool,
    json: Value,
    text: String,
}

impl Outcome {
    fn report(title: &str, r: &Report, witness: bool) -> Outcome {
        Outcome {
            ok: r.ok,
            json: serde_json::to_value(r).expect("serializable"),
            text: report_text(title, r, witness),
        }
    }
}

fn report_text(title: &str, r: &Report, witness: bool) -> String {
    let mut s = if r.ok {
        format!("{title}: ok")
    } else {
        let mut rules: Vec<&str> = r.violations.iter().map(|v| v.rule.as_str()).collect();
        rules.dedup();
        format!(
            "{title}: {} violations ({})",
            r.violation_count,
            rules.join(", ")
        )
    };
    if witness {
        for v in &r.violations {
            s.push_str(&format!("\n  {}", v.detail_line()));
        }
        if r.violation_count > r.violations.len() {
            s.push_str(&format!(
                "\n  ... {} more",
                r.violation_count - r.violations.len()
            ));
        }
    }
    for n in &r.notes {
        s.push_str(&format!("\n  note: {n}"));
    }
    s
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(io::parse(&text, &path.display().to_string())?)
}

fn load_lts(path: &Path) -> Result<LieTripleSystem> {
    let c = io::lts_from_json(&read_json(path)?)?;
    LieTripleSystem::new(c).with_context(|| format!("{} is not usable as a system", path.display()))
}

fn load_op(path: &Path, l: &LieTripleSystem) -> Result<LinearOperator> {
    let op = io::operator_from_json(&read_json(path)?)?;
    if op.dim() != l.dim() {
        bail!(
            "operator has dimension {}, system has dimension {}",
            op.dim(),
            l.dim()
        );
    }
    Ok(op)
}

fn load_rep(path: &Path, l: &LieTripleSystem) -> Result<(Tensor, Option<Matrix>)> {
    Ok(io::representation_from_json(&read_json(path)?, l.dim())?)
}

fn load_context(lts: &Path, op: &Path, rep: &Path) -> Result<NijenhuisContext> {
    let l = load_lts(lts)?;
    let n = load_op(op, &l)?;
    let (theta, nv) = load_rep(rep, &l)?;
    let nv = nv.ok_or_else(|| anyhow!("{} has no Nv", rep.display()))?;
    let rep = Representation::new(&l, theta)?;
    Ok(NijenhuisContext::new(l, n.matrix, rep, nv)?)
}

fn load_pair(path: &Path, ctx: &NijenhuisContext) -> Result<NLieCochain> {
    let (f, g) = io::pair_from_json(&read_json(path)?, ctx.dim(), ctx.vdim())?;
    let g = g.map(Cochain::new).transpose()?;
    Ok(NLieCochain::new(Cochain::new(f)?, g)?)
}

fn load_extension(path: &Path) -> Result<(NijenhuisContext, ExtensionCocycle)> {
    let input = io::extension_from_json(&read_json(path)?)?;
    let l = LieTripleSystem::new(input.bracket)?;
    let rep = Representation::new(&l, input.theta)?;
    let ctx = NijenhuisContext::new(l, input.n, rep, input.nv)?;
    let data = ExtensionCocycle::new(
        Cochain::new(input.psi)?,
        Cochain::new(Tensor::from_matrix(&input.chi))?,
    )?;
    Ok((ctx, data))
}

fn weight(flag: &Option<String>, op: &LinearOperator) -> Result<Rational> {
    match (flag, &op.weight) {
        (Some(s), _) => s.parse().map_err(|e| anyhow!("bad --weight {s}: {e:?}")),
        (None, Some(w)) => Ok(w.clone()),
        (None, None) => bail!("no weight: pass --weight or set \"weight\" in the operator payload"),
    }
}

fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| {
            format!(
                "[{}]",
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn ext_summary(ext: &AbelianExtension) -> Result<(bool, Value)> {
    let chk = ext.check()?;
    let v = json!({
        "ok": chk.ok(),
        "lts": chk.lts,
        "nijenhuis": chk.nijenhuis,
        "total": io::lts_to_json(ext.total()),
        "operator": io::matrix_to_json(ext.operator()),
    });
    Ok((chk.ok(), v))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let w = cli.witness;
    Ok(match &cli.cmd {
        Cmd::CheckLts { lts } => {
            let c = io::lts_from_json(&read_json(lts)?)?;
            Outcome::report("check-lts", &check_lts(&c)?, w)
        }
        Cmd::CheckNijenhuis { lts, op } => {
            let l = load_lts(lts)?;
            let n = load_op(op, &l)?;
            Outcome::report("check-nijenhuis", &is_nijenhuis(&l, &n)?, w)
        }
        Cmd::CheckRb {
            lts,
            op,
            weight: wt,
        } => {
            let l = load_lts(lts)?;
            let n = load_op(op, &l)?;
            let lambda = weight(wt, &n)?;
            Outcome::report(
                &format!("check-rb (weight {lambda})"),
                &is_rota_baxter(&l, &n.matrix, &lambda)?,
                w,
            )
        }
        Cmd::CheckMrb {
            lts,
            op,
            weight: wt,
        } => {
            let l = load_lts(lts)?;
            let n = load_op(op, &l)?;
            let lambda = weight(wt, &n)?;
            Outcome::report(
                &format!("check-mrb (weight {lambda})"),
                &is_modified_rb(&l, &n.matrix, &lambda)?,
                w,
            )
        }
        Cmd::InducedBracket { lts, op } => {
            let l = load_lts(lts)?;
            let n = load_op(op, &l)?;
            let ib = induced_bracket(&l, &n)?;
            let mut text = format!(
                "induced-bracket: nijenhuis {}, morphism {}\n{}",
                ib.nijenhuis,
                ib.morphism,
                report_text("  deformed bracket axioms", &ib.lts_report, w)
            );
            if !ib.nijenhuis {
                text.push_str("\n  note: the operator is not Nijenhuis");
            }
            Outcome {
                ok: ib.nijenhuis && ib.lts_report.ok,
                json: json!({
                    "nijenhuis": ib.nijenhuis,
                    "morphism": ib.morphism,
                    "lts_report": ib.lts_report,
                    "bracket": io::lts_to_json(&ib.bracket),
                }),
                text,
            }
        }
        Cmd::Search { lts, grid, budget } => {
            let l = load_lts(lts)?;
            let vals: Vec<Rational> = grid
                .iter()
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|e| anyhow!("bad grid value {s}: {e:?}"))
                })
                .collect::<Result<_>>()?;
            let found = grid_search_nijenhuis(&l, &vals, *budget)?;
            let mut text = format!("search: {} Nijenhuis operators", found.len());
            for op in &found {
                text.push_str(&format!("\n  {}", matrix_text(&op.matrix)));
            }
            Outcome {
                ok: true,
                json: json!({
                    "count": found.len(),
                    "operators": found.iter().map(|o| io::matrix_to_json(&o.matrix)).collect::<Vec<_>>(),
                }),
                text,
            }
        }
        Cmd::CheckRep { lts, rep } => {
            let l = load_lts(lts)?;
            let (theta, _) = load_rep(rep, &l)?;
            Outcome::report("check-rep", &check_representation(&l, &theta)?, w)
        }
        Cmd::CheckNrep { lts, op, rep } => {
            let l = load_lts(lts)?;
            let n = load_op(op, &l)?;
            let (theta, nv) = load_rep(rep, &l)?;
            let nv = nv.ok_or_else(|| anyhow!("{} has no Nv", rep.display()))?;
            let mut r = check_representation(&l, &theta)?;
            r.merge(check_nijenhuis_rep(&l, &n.matrix, &theta, &nv)?);
            Outcome::report("check-nrep", &r, w)
        }
        Cmd::InduceRep { lts, op, rep } => {
            let l = load_lts(lts)?;
            let n = load_op(op, &l)?;
            let (theta, nv) = load_rep(rep, &l)?;
            let nv = nv.ok_or_else(|| anyhow!("{} has no Nv", rep.display()))?;
            let rep = Representation::new(&l, theta)?;
            let ind = induce_rep(&l, &n.matrix, &rep, &nv)?;
            let deformed =
                LieTripleSystem::new(nlts::operators::induced_tensor(l.bracket(), &n.matrix))
                    .context("the deformed bracket is not a Lie triple system")?;
            let r = check_representation(&deformed, &ind.theta)?;
            Outcome {
                ok: r.ok,
                json: json!({
                    "theta": io::tensor_to_json(&ind.theta),
                    "D": io::tensor_to_json(&ind.d),
                    "Nv": io::matrix_to_json(&nv),
                    "representation_of_deformed": r,
                }),
                text: report_text("induce-rep: induced action on the deformed system", &r, w),
            }
        }
        Cmd::Cohomology {
            degree,
            lts,
            op,
            rep,
        } => {
            let ctx = load_context(lts, op, rep)?;
            let h = Complex::new(&ctx).cohomology_dim(*degree)?;
            Outcome {
                ok: true,
                json: serde_json::to_value(h)?,
                text: format!(
                    "cohomology degree {}: cochains {}, cocycles {}, coboundaries {}, dim H {}",
                    h.degree, h.dim_cochains, h.dim_cocycles, h.dim_coboundaries, h.dim_h
                ),
            }
        }
        Cmd::CocycleCheck {
            lts,
            op,
            rep,
            cochain,
        } => {
            let ctx = load_context(lts, op, rep)?;
            let x = load_pair(cochain, &ctx)?;
            let cx = Complex::new(&ctx);
            let r = cx.is_cocycle(&x)?;
            let cob = r.ok && cx.is_coboundary(&x)?;
            let mut text = report_text("cocycle-check", &r, w);
            if r.ok {
                text.push_str(&format!("\n  coboundary: {cob}"));
            }
            Outcome {
                ok: r.ok,
                json: json!({ "cocycle": r, "coboundary": cob }),
                text,
            }
        }
        Cmd::Extend { ext } => {
            let (ctx, data) = load_extension(ext)?;
            let e = build_extension(&ctx, &data)?;
            let (ok, mut v) = ext_summary(&e)?;
            let cyc = Complex::new(&ctx).is_cocycle(&data.to_pair())?;
            v["cocycle"] = serde_json::to_value(&cyc)?;
            let chk = e.check()?;
            let text = format!(
                "{}\n{}\n{}",
                report_text("extend: total system", &chk.lts, w),
                report_text("extend: operator", &chk.nijenhuis, w),
                report_text("extend: cocycle condition", &cyc, w)
            );
            Outcome { ok, json: v, text }
        }
        Cmd::Extract { ext, section } => {
            let (ctx, data) = load_extension(ext)?;
            let e = build_extension(&ctx, &data)?;
            let s = match section {
                Some(p) => {
                    io::section_from_json(&read_json(p)?, ctx.dim() + ctx.vdim(), ctx.dim())?
                }
                None => e.canonical_section(),
            };
            let got = extract_cocycle(&e, &s)?;
            let (rep, nv) = induced_representation(&e, &s)?;
            let cyc = Complex::new(&ctx).is_cocycle(&got.to_pair())?;
            Outcome {
                ok: cyc.ok,
                json: json!({
                    "pair": io::pair_to_json(&got.to_pair()),
                    "cocycle": cyc,
                    "induced_rep": io::representation_to_json(rep.theta(), Some(&nv)),
                    "same_as_input": got == data,
                }),
                text: format!(
                    "{}\n  same as input pair: {}",
                    report_text("extract: extracted pair", &cyc, w),
                    got == data
                ),
            }
        }
        Cmd::Equivalent { ext1, ext2 } => {
            let (c1, d1) = load_extension(ext1)?;
            let (c2, d2) = load_extension(ext2)?;
            if c1.lts() != c2.lts()
                || c1.n() != c2.n()
                || c1.rep() != c2.rep()
                || c1.nv() != c2.nv()
            {
                bail!("the two extensions are over different base data");
            }
            let eq = extensions_equivalent(&c1, &d1, &d2)?;
            let ok = eq.gamma.is_some() && eq.eta_verified;
            let text = match &eq.gamma {
                Some(g) => format!(
                    "equivalent: yes, gamma = {}, eta verified: {}",
                    matrix_text(g),
                    eq.eta_verified
                ),
                None => "equivalent: no".to_string(),
            };
            Outcome {
                ok,
                json: io::gamma_to_json(eq.gamma.as_ref(), eq.eta_verified),
                text,
            }
        }
        Cmd::Check2sys { system } => {
            let (g, _) = io::two_system_from_json(&read_json(system)?)?;
            Outcome::report("check-2sys", &check_2system(&g), w)
        }
        Cmd::CheckN2sys { system } => {
            let (g, op) = io::two_system_from_json(&read_json(system)?)?;
            let op = op.ok_or_else(|| anyhow!("{} has no N0, N1, N2", system.display()))?;
            let r = check_nijenhuis_2system(&g, &op)?;
            let mut text = report_text("check-n2sys", &r.conditions, w);
            text.push_str(&format!(
                "\n  skeletal: {}, strict: {}",
                r.skeletal, r.strict
            ));
            if !r.e_readings_agree {
                text.push_str(&format!(
                    "\n{}",
                    report_text("  (e) alternative reading", &r.e_alternative, w)
                ));
            }
            text.push_str(&format!(
                "\n{}",
                report_text("  (f) literal form", &r.f_literal, w)
            ));
            Outcome {
                ok: r.ok,
                json: serde_json::to_value(&r)?,
                text,
            }
        }
        Cmd::SkeletalToCocycle { system } => {
            let (g, op) = io::two_system_from_json(&read_json(system)?)?;
            let op = op.ok_or_else(|| anyhow!("{} has no N0, N1, N2", system.display()))?;
            let sc = skeletal_to_cocycle(&g, &op)?;
            let r = Complex::new(&sc.context).is_cocycle(&sc.cochain)?;
            Outcome {
                ok: r.ok,
                json: json!({
                    "system": io::lts_to_json(sc.context.lts().bracket()),
                    "N": io::operator_to_json(&LinearOperator::new(sc.context.n().clone())),
                    "rep": io::representation_to_json(sc.context.rep().theta(), Some(sc.context.nv())),
                    "cochain": io::pair_to_json(&sc.cochain),
                    "cocycle": r,
                }),
                text: report_text("skeletal-to-cocycle: degree-5 pair", &r, w),
            }
        }
        Cmd::CocycleToSkeletal {
            lts,
            op,
            rep,
            cochain,
        } => {
            let ctx = load_context(lts, op, rep)?;
            let x = load_pair(cochain, &ctx)?;
            let (g, o) = cocycle_to_skeletal(&ctx, &x)?;
            let r = check_nijenhuis_2system(&g, &o)?;
            Outcome {
                ok: r.ok,
                json: io::two_system_to_json(&g, Some(&o)),
                text: report_text("cocycle-to-skeletal: skeletal structure", &r.conditions, w),
            }
        }
        Cmd::CheckXmod { xmod } => {
            let x = io::crossed_module_from_json(&read_json(xmod)?)?;
            Outcome::report("check-xmod", &check_crossed_module(&x)?, w)
        }
        Cmd::ToXmod { system } => {
            let (g, op) = io::two_system_from_json(&read_json(system)?)?;
            let op = op.ok_or_else(|| anyhow!("{} has no N0, N1, N2", system.display()))?;
            let x = strict_to_crossed_module(&g, &op)?;
            Outcome {
                ok: true,
                json: io::crossed_module_to_json(&x),
                text: "to-xmod: crossed module built and checked".into(),
            }
        }
        Cmd::FromXmod { xmod } => {
            let x = io::crossed_module_from_json(&read_json(xmod)?)?;
            let (g, op) = crossed_module_to_strict(&x)?;
            Outcome {
                ok: true,
                json: io::two_system_to_json(&g, Some(&op)),
                text: "from-xmod: strict structure built and checked".into(),
            }
        }
        Cmd::Corpus { dir } => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let files = nlts::corpus::files()?;
            let mut names = Vec::new();
            for (name, v) in &files {
                let path = dir.join(name);
                fs::write(&path, serde_json::to_string_pretty(v)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                names.push(name.clone());
            }
            Outcome {
                ok: true,
                json: json!({ "written": names }),
                text: format!("corpus: wrote {} files to {}", names.len(), dir.display()),
            }
        }
    })
}

fn strip_witnesses(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("violations");
            m.values_mut().for_each(strip_witnesses);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_witnesses),
        _ => {}
    }
}

fn init_threads() -> Result<()> {
    if let Ok(s) = std::env::var("NLTS_THREADS") {
        let n: usize = s
            .parse()
            .map_err(|_| anyhow!("NLTS_THREADS must be a positive integer, got {s}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = init_threads().and_then(|_| run(&cli));
    match res {
        Ok(mut out) => {
            if cli.json {
                if !cli.witness {
                    strip_witnesses(&mut out.json);
                }
                let _ = writeln!(
                    std::io::stdout(),
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                let _ = writeln!(std::io::stdout(), "{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
