//! Subcommands of the `simpcube` binary.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use simpcube::adjoint::Geometric;
use simpcube::corpus::{
    cub_map, cub_object, cub_object_names, simp_map, simp_object, CUB_MAPS, HOEQ_PAIRS,
    SIMP_MAPS, SIMP_OBJECTS,
};
use simpcube::exec::Exec;
use simpcube::homotopy::boxes::{boxes_as_generators, horns_as_generators};
use simpcube::homotopy::{
    box_height_bound, eps_we_probe, generate_horns, generate_open_boxes, homotopy_equalizer,
    is_fibration_bounded, path_object, EquivOutcome, FibrationReport, Generator,
};
use simpcube::order::validate_lattice;
use simpcube::presheaf::{nerve, simplex_site, NatTrans, Presheaf};
use simpcube::sieve::{least_cover, Sieve};
use simpcube::site::{named_lattice, ObjId, Site, SiteRef};
use simpcube::subobject::DEFAULT_SUBOBJECT_CAP;

use crate::report::{Status, VerificationReport};
use crate::text;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] simpcube::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "simpcube", version, about = "Finite simplicial and cubical presheaf toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Lattice window: `default`, `ord<N>`, or `<base>+<lattice>,...`.
    #[arg(long, global = true, default_value = "default")]
    pub window: String,
    /// Simplicial truncation dimension.
    #[arg(long, global = true, default_value_t = 3)]
    pub dim: usize,
    /// Search budget in tried values per search.
    #[arg(long, global = true, env = "SIMPCUBE_BUDGET", default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_SUBOBJECT_CAP)]
    pub subobject_cap: usize,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Include per-check timings (makes reports run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Disable data-parallel execution.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Format {
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate an input file or a named lattice.
    Validate {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        lattice: Option<String>,
    },
    /// Apply a functor and print the resulting presheaf.
    Functor {
        #[arg(value_enum)]
        which: FunctorKind,
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Named corpus object.
        #[arg(long)]
        object: Option<String>,
    },
    /// Run a verification suite.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[arg(long)]
        object: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Named corpus map.
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long, value_enum, default_value = "least")]
        sieve: SieveKind,
        #[arg(long, value_enum, default_value = "boxes")]
        generators: GeneratorKind,
        /// List a certificate for every lifting square.
        #[arg(long)]
        certificates: bool,
    },
    /// Homotopy equalizers of named cubical map pairs.
    Hoeq {
        #[arg(long, requires = "g")]
        f: Option<String>,
        #[arg(long, requires = "f")]
        g: Option<String>,
    },
    /// Bounded experiments whose outcomes are evidence, not proofs.
    Experiment {
        #[arg(value_enum)]
        which: ExperimentKind,
        #[arg(long)]
        object: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctorKind {
    Nerve,
    #[value(name = "i!")]
    LowerShriek,
    #[value(name = "i*")]
    UpperStar,
    #[value(name = "i_*")]
    LowerStar,
    Sheafify,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Sheaf,
    SheafFamily,
    Covering,
    Fibration,
    Adjunction,
    #[value(name = "gz67-crosscheck")]
    Gz67Crosscheck,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveKind {
    Least,
    Empty,
    Maximal,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Horns,
    Boxes,
    /// Boxes of the window, tested against `i_*` of the map.
    CubBoxes,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    #[value(name = "eps-we")]
    EpsWe,
}

/// Text to emit and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

struct Ctx {
    common: Common,
    window: SiteRef,
    exec: Exec,
}

impl Ctx {
    fn new(common: &Common) -> Result<Self> {
        let window = Arc::new(Site::named_window(&common.window)?);
        let exec = if common.sequential { Exec::Sequential } else { Exec::Parallel };
        Ok(Ctx { common: common.clone(), window, exec })
    }

    fn simp(&self) -> Result<SiteRef> {
        Ok(simplex_site(self.common.dim)?)
    }

    fn geometric(&self) -> Result<Geometric> {
        Ok(Geometric::with_dim(&self.window, self.common.dim, self.common.budget)?.with_exec(self.exec))
    }

    fn report(&self) -> VerificationReport {
        let mut r = VerificationReport::new();
        r.context("window", self.window.describe());
        r.context("truncation", self.common.dim.to_string());
        r.context("budget", self.common.budget.to_string());
        r.context("subobject-cap", self.common.subobject_cap.to_string());
        r
    }

    fn finish(&self, r: VerificationReport) -> Outcome {
        Outcome { code: r.exit_code(), text: r.render(self.common.timing) }
    }

    fn at(&self, site: &SiteRef, w: Option<(ObjId, usize)>) -> String {
        match w {
            None => String::new(),
            Some((o, e)) => format!("at={}:{}", site.name(o), e),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn lattice_by_name(name: &str) -> Result<simpcube::order::FinLattice> {
    named_lattice(name).ok_or_else(|| CliError::Usage(format!("unknown lattice {name}")))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let ctx = Ctx::new(&cli.common)?;
    match &cli.command {
        Command::Validate { input, lattice } => validate(&ctx, input.as_deref(), lattice.as_deref()),
        Command::Functor { which, lattice, input, object } => {
            functor(&ctx, *which, lattice.as_deref(), input.as_deref(), object.as_deref())
        }
        Command::Check { which, object, input, map, lattice, sieve, generators, certificates } => match which {
            CheckKind::Sheaf => check_sheaf(&ctx, object.as_deref(), input.as_deref()),
            CheckKind::SheafFamily => check_sheaf_family(&ctx, map.as_deref()),
            CheckKind::Covering => check_covering(&ctx, lattice.as_deref(), *sieve),
            CheckKind::Fibration => check_fibration(&ctx, map.as_deref(), *generators, *certificates),
            CheckKind::Adjunction => check_adjunction(&ctx),
            CheckKind::Gz67Crosscheck => check_gz67(&ctx, map.as_deref()),
        },
        Command::Hoeq { f, g } => hoeq(&ctx, f.as_deref().zip(g.as_deref())),
        Command::Experiment { which: ExperimentKind::EpsWe, object, input } => {
            eps_we(&ctx, object.as_deref(), input.as_deref())
        }
    }
}

fn validate(ctx: &Ctx, input: Option<&Path>, lattice: Option<&str>) -> Result<Outcome> {
    let mut r = ctx.report();
    let t = Instant::now();
    if let Some(name) = lattice {
        let l = lattice_by_name(name)?;
        let v = validate_lattice(l.poset());
        r.check("lattice", name, Status::from_bool(v.is_ok()), v.err().map(|e| e.to_string()).unwrap_or_default(), t.elapsed());
    }
    if let Some(path) = input {
        let body = read(path)?;
        r.input(&path.display().to_string(), body.as_bytes());
        let name = path.display().to_string();
        match text::kind_of(&body).as_deref() {
            Some("poset") => {
                let p = text::parse_poset(&body)?;
                r.check("poset", &name, Status::Pass, format!("size={}", p.size()), t.elapsed());
                let v = validate_lattice(&p);
                r.check("lattice", &name, Status::from_bool(v.is_ok()), v.err().map(|e| e.to_string()).unwrap_or_default(), t.elapsed());
            }
            Some("map") => {
                let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
                let m = text::parse_map(&body, |f| Ok(Arc::new(text::parse_poset(&read_core(&dir.join(f))?)?)))?;
                r.check("monotone-map", &name, Status::Pass, format!("size={}", m.table().len()), t.elapsed());
            }
            Some("simp" | "cub") => {
                let x = text::parse_presheaf(&body)?;
                r.check("presheaf", &name, Status::Pass, format!("sizes={:?}", x.sizes()).replace(' ', ""), t.elapsed());
            }
            _ => return Err(CliError::Usage(format!("{name}: unrecognised file kind"))),
        }
    }
    if lattice.is_none() && input.is_none() {
        return Err(CliError::Usage("validate needs --input or --lattice".into()));
    }
    Ok(ctx.finish(r))
}

fn read_core(path: &Path) -> simpcube::Result<String> {
    std::fs::read_to_string(path).map_err(|e| simpcube::Error::Invalid(format!("{}: {e}", path.display())))
}

fn simp_input(ctx: &Ctx, input: Option<&Path>, object: Option<&str>) -> Result<Presheaf> {
    match (input, object) {
        (Some(p), _) => {
            let x = text::parse_presheaf(&read(p)?)?;
            if x.site().simplex_dim() != Some(ctx.common.dim) {
                return Err(CliError::Usage(format!("{} is not a simplicial presheaf at D={}", p.display(), ctx.common.dim)));
            }
            Ok(x)
        }
        (None, Some(name)) => Ok(simp_object(&ctx.simp()?, name)?),
        (None, None) => Err(CliError::Usage("needs --input or --object".into())),
    }
}

fn cub_input(ctx: &Ctx, input: Option<&Path>, object: Option<&str>) -> Result<Presheaf> {
    match (input, object) {
        (Some(p), _) => {
            let x = text::parse_presheaf(&read(p)?)?;
            if **x.site() != *ctx.window {
                return Err(CliError::Usage(format!("{} does not live on window {}", p.display(), ctx.common.window)));
            }
            Ok(Presheaf::new(ctx.window.clone(), x.sizes().to_vec(), (0..ctx.window.num_maps()).map(|f| x.action_table(f).to_vec()).collect())?)
        }
        (None, Some(name)) => Ok(cub_object(&ctx.window, name)?),
        (None, None) => Err(CliError::Usage("needs --input or --object".into())),
    }
}

fn functor(
    ctx: &Ctx,
    which: FunctorKind,
    lattice: Option<&str>,
    input: Option<&Path>,
    object: Option<&str>,
) -> Result<Outcome> {
    let result = match which {
        FunctorKind::Nerve => {
            let l = match (lattice, input) {
                (Some(name), _) => lattice_by_name(name)?,
                (None, Some(p)) => validate_lattice(&text::parse_poset(&read(p)?)?)?,
                (None, None) => return Err(CliError::Usage("nerve needs --lattice or --input".into())),
            };
            nerve(&l, &ctx.simp()?)?
        }
        FunctorKind::UpperStar => ctx.geometric()?.i_upper_star(&cub_input(ctx, input, object)?)?,
        FunctorKind::LowerStar => ctx.geometric()?.i_lower_star(&simp_input(ctx, input, object)?)?.presheaf,
        FunctorKind::LowerShriek => ctx.geometric()?.i_lower_shriek(&simp_input(ctx, input, object)?)?.presheaf,
        FunctorKind::Sheafify => ctx.geometric()?.sheafify(&cub_input(ctx, input, object)?)?.0.presheaf,
    };
    Ok(Outcome { text: text::serialize_presheaf(&result), code: 0 })
}

fn cub_targets(ctx: &Ctx, object: Option<&str>, input: Option<&Path>, r: &mut VerificationReport) -> Result<Vec<(String, Presheaf)>> {
    if let Some(p) = input {
        let body = read(p)?;
        r.input(&p.display().to_string(), body.as_bytes());
        return Ok(vec![(p.display().to_string(), cub_input(ctx, Some(p), None)?)]);
    }
    let names = match object {
        Some(n) => vec![n.to_string()],
        None => cub_object_names(&ctx.window),
    };
    names.into_iter().map(|n| Ok((n.clone(), cub_object(&ctx.window, &n)?))).collect()
}

fn check_sheaf(ctx: &Ctx, object: Option<&str>, input: Option<&Path>) -> Result<Outcome> {
    let geo = ctx.geometric()?;
    let mut r = ctx.report();
    for (name, x) in cub_targets(ctx, object, input, &mut r)? {
        let t = Instant::now();
        let v = geo.is_sheaf(&x)?;
        r.check("sheaf", &name, Status::from_bool(v.holds), ctx.at(&ctx.window, v.witness), t.elapsed());
        let t = Instant::now();
        let d = geo.satisfies_least_cover_descent(&x)?;
        let agree = d.holds == v.holds;
        r.check("sheaf-descent-agrees", &name, Status::from_bool(agree), format!("descent={}", d.holds), t.elapsed());
    }
    Ok(ctx.finish(r))
}

fn check_sheaf_family(ctx: &Ctx, map: Option<&str>) -> Result<Outcome> {
    let geo = ctx.geometric()?;
    let mut r = ctx.report();
    let names: Vec<&str> = match map {
        Some(m) => vec![m],
        None => CUB_MAPS.to_vec(),
    };
    for name in names {
        let f = cub_map(&ctx.window, name)?;
        let t = Instant::now();
        let v = geo.is_sheaf_family(&f)?;
        let mut w = format!("pullback={:?}", v.pullback.sizes()).replace(' ', "");
        if let Some(at) = v.witness {
            w = format!("{w},{}", ctx.at(&ctx.window, Some(at)));
        }
        r.check("sheaf-family", name, Status::from_bool(v.holds), w, t.elapsed());
    }
    Ok(ctx.finish(r))
}

fn check_covering(ctx: &Ctx, lattice: Option<&str>, kind: SieveKind) -> Result<Outcome> {
    let lname = lattice.ok_or_else(|| CliError::Usage("covering needs --lattice".into()))?;
    let l = lattice_by_name(lname)?;
    let window = match ctx.window.find_object(&l) {
        Some(_) => ctx.window.clone(),
        None => Arc::new(Site::named_window(&format!("{}+{lname}", ctx.common.window))?),
    };
    let base = window.find_object(&l).expect("lattice was added to the window");
    let sieve = match kind {
        SieveKind::Least => least_cover(&window, base),
        SieveKind::Empty => Sieve::empty(&window, base),
        SieveKind::Maximal => Sieve::maximal(&window, base),
    };
    let mut r = ctx.report();
    let label = format!("{lname}/{}", format!("{kind:?}").to_lowercase());
    let t = Instant::now();
    let v = sieve.is_covering()?;
    let w = v.missing.map(|g| format!("chain={:?}", window.map(g).table).replace(' ', "")).unwrap_or_default();
    r.check("covering", &label, Status::from_bool(v.covering), w, t.elapsed());
    let t = Instant::now();
    let by_idem = sieve.covers_by_idempotents();
    r.check("covering-by-idempotents", &label, Status::from_bool(by_idem), "", t.elapsed());
    Ok(ctx.finish(r))
}

fn simp_generators(ctx: &Ctx, kind: GeneratorKind) -> Result<Vec<Generator>> {
    let simp = ctx.simp()?;
    Ok(match kind {
        GeneratorKind::Horns => horns_as_generators(generate_horns(&simp)?),
        _ => boxes_as_generators(generate_open_boxes(&simp, box_height_bound(&simp), ctx.common.subobject_cap)?),
    })
}

fn fibration_on(ctx: &Ctx, f: &NatTrans, kind: GeneratorKind, gens: &[Generator]) -> Result<FibrationReport> {
    let f = match kind {
        GeneratorKind::CubBoxes => {
            let geo = ctx.geometric()?;
            let rx = geo.i_lower_star(f.src())?;
            let ry = geo.i_lower_star(f.dst())?;
            geo.i_lower_star_map(f, &rx, &ry)?
        }
        _ => f.clone(),
    };
    Ok(is_fibration_bounded(&f, gens, ctx.common.budget, ctx.exec)?)
}

fn check_fibration(ctx: &Ctx, map: Option<&str>, kind: GeneratorKind, all_certs: bool) -> Result<Outcome> {
    let simp = ctx.simp()?;
    let gens = match kind {
        GeneratorKind::CubBoxes => boxes_as_generators(generate_open_boxes(
            &ctx.window,
            box_height_bound(&ctx.window),
            ctx.common.subobject_cap,
        )?),
        k => simp_generators(ctx, k)?,
    };
    let mut r = ctx.report();
    r.context("generators", format!("{kind:?}").to_lowercase());
    r.context("generator-count", gens.len().to_string());
    for g in &gens {
        r.note(format!("generator {}", g.name));
    }
    let names: Vec<&str> = match map {
        Some(m) => vec![m],
        None => SIMP_MAPS.to_vec(),
    };
    for name in names {
        let f = simp_map(&simp, name)?;
        let t = Instant::now();
        let rep = fibration_on(ctx, &f, kind, &gens)?;
        let w = match &rep.failure {
            Some(fs) => format!("square={}#{},searched={}", fs.name, fs.square, fs.searched),
            None => format!("squares={}", rep.squares),
        };
        r.check("fibration", name, Status::from_bool(rep.holds), w, t.elapsed());
        for c in &rep.certificates {
            if all_certs || !c.outcome.is_found() {
                r.certificates.push(format!("{name}: {c}"));
            }
        }
    }
    Ok(ctx.finish(r))
}

fn check_adjunction(ctx: &Ctx) -> Result<Outcome> {
    let geo = ctx.geometric()?;
    let simp = geo.simp().clone();
    let mut r = ctx.report();
    for name in SIMP_OBJECTS {
        let x = simp_object(&simp, name)?;
        let t = Instant::now();
        for tri in geo.triangles_simp(&x)? {
            r.check(&format!("triangle-{}", tri.name), name, Status::from_bool(tri.holds), ctx.at(&geo.window().clone(), tri.witness), t.elapsed());
        }
        let t = Instant::now();
        let (unit, counit) = geo.full_faithfulness(&x)?;
        r.check("shriek-unit-iso", name, Status::from_bool(unit.holds), ctx.at(&simp, unit.witness), t.elapsed());
        r.check("star-counit-iso", name, Status::from_bool(counit.holds), ctx.at(&simp, counit.witness), t.elapsed());
    }
    for name in cub_object_names(&ctx.window) {
        let y = cub_object(&ctx.window, &name)?;
        let t = Instant::now();
        for tri in geo.triangles_cub(&y)? {
            r.check(&format!("triangle-{}", tri.name), &name, Status::from_bool(tri.holds), ctx.at(&simp, tri.witness), t.elapsed());
        }
    }
    Ok(ctx.finish(r))
}

fn check_gz67(ctx: &Ctx, map: Option<&str>) -> Result<Outcome> {
    let simp = ctx.simp()?;
    let horns = simp_generators(ctx, GeneratorKind::Horns)?;
    let boxes = simp_generators(ctx, GeneratorKind::Boxes)?;
    let mut r = ctx.report();
    r.context("horns", horns.len().to_string());
    r.context("boxes", boxes.len().to_string());
    let names: Vec<&str> = match map {
        Some(m) => vec![m],
        None => SIMP_MAPS.to_vec(),
    };
    for name in names {
        let f = simp_map(&simp, name)?;
        let t = Instant::now();
        let h = is_fibration_bounded(&f, &horns, ctx.common.budget, ctx.exec)?;
        let b = is_fibration_bounded(&f, &boxes, ctx.common.budget, ctx.exec)?;
        r.check("gz67", name, Status::from_bool(h.holds == b.holds), format!("horns={},boxes={}", h.holds, b.holds), t.elapsed());
    }
    Ok(ctx.finish(r))
}

fn hoeq(ctx: &Ctx, pair: Option<(&str, &str)>) -> Result<Outcome> {
    let pairs: Vec<(&str, &str)> = match pair {
        Some(p) => vec![p],
        None => HOEQ_PAIRS.to_vec(),
    };
    let mut r = ctx.report();
    for (fname, gname) in pairs {
        let f = cub_map(&ctx.window, fname)?;
        let g = cub_map(&ctx.window, gname)?;
        let label = format!("{fname},{gname}");
        let t = Instant::now();
        let path = path_object(f.dst(), ctx.common.budget, ctx.exec)?;
        let e = homotopy_equalizer(&f, &g, &path)?;
        let ok = e.homotopy.verify(&path);
        r.check("hoeq-homotopy", &label, Status::from_bool(ok), format!("E={:?}", e.object.sizes()).replace(' ', ""), t.elapsed());
        if f.components() == g.components() {
            let t = Instant::now();
            let s = e.constant_section(&path)?;
            let id = s.then(&e.q)?;
            let ok = id.components() == NatTrans::identity(f.src()).components();
            r.check("hoeq-constant-section", &label, Status::from_bool(ok), "", t.elapsed());
        }
    }
    Ok(ctx.finish(r))
}

fn eps_we(ctx: &Ctx, object: Option<&str>, input: Option<&Path>) -> Result<Outcome> {
    let geo = ctx.geometric()?;
    let mut r = ctx.report();
    r.note("outcomes are bounded evidence: one-step homotopies, inverses searched exhaustively within budget");
    for (name, x) in cub_targets(ctx, object, input, &mut r)? {
        let t = Instant::now();
        let p = eps_we_probe(&geo, &x, ctx.exec)?;
        let (status, w) = match &p.outcome {
            EquivOutcome::Equivalence { .. } => (Status::Pass, format!("iso={},inverse-found", p.is_iso)),
            EquivOutcome::NotFound { candidates } => {
                (Status::Inconclusive, format!("iso={},no-inverse-among={candidates}", p.is_iso))
            }
            EquivOutcome::Inconclusive { reason } => (Status::Inconclusive, reason.clone()),
        };
        r.check("eps-we", &name, status, w, t.elapsed());
    }
    Ok(ctx.finish(r))
}
