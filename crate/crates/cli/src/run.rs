use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use orlicz_besov::geometry::{dyadic_radii, regularity_constant, Domain, DomainKind};
use orlicz_besov::norms::{
    besov_seminorm, gagliardo_seminorm, lebesgue_norm, orlicz_norm, ScalarField,
};
use orlicz_besov::quadrature::QuadratureSpec;
use orlicz_besov::verify::{self, fmt_g9, CriticalBall, Member, VerificationReport};
use orlicz_besov::young::YoungFunction;
use orlicz_besov::Error;

use crate::opts::{Cmd, DomainCmd, Format, NormCmd, Opts, VerifyCmd, YoungCmd};

pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// What a finished command found.
pub enum Outcome {
    Ok,
    Violations,
}

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

/// Spec strings and numeric lists, all parsed before any work starts.
struct Ctx {
    opts: Opts,
    phi: Option<YoungFunction<f64>>,
    domain: Option<Domain<f64>>,
    field: Option<ScalarField<f64>>,
    spec: QuadratureSpec<f64>,
    eps: Option<Vec<f64>>,
    sweep: Option<Vec<([f64; 2], f64, f64)>>,
    ball: Option<CriticalBall<f64>>,
    point: Option<[f64; 2]>,
    r_factors: Option<Vec<f64>>,
    radii: Option<Vec<f64>>,
}

fn list(token: &str, count: Option<usize>) -> Res<Vec<f64>> {
    let vals: Vec<f64> = token
        .split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| {
                Failure::Core(Error::Parse { token: s.trim().to_string(), reason: "not a number".into() })
            })
        })
        .collect::<Res<_>>()?;
    if let Some(c) = count {
        if vals.len() != c {
            return Err(Failure::Core(Error::Parse {
                token: token.to_string(),
                reason: format!("expected {c} numbers, got {}", vals.len()),
            }));
        }
    }
    Ok(vals)
}

impl Ctx {
    fn resolve(opts: Opts) -> Res<Self> {
        let opts = opts.with_config().map_err(Failure::Usage)?;
        let phi = opts.phi.as_deref().map(str::parse).transpose()?;
        let domain = opts.domain.as_deref().map(str::parse).transpose()?;
        let field = opts.field.as_deref().map(str::parse).transpose()?;
        let eps = opts.eps.as_deref().map(|s| list(s, None)).transpose()?;
        let r_factors = opts.r_factors.as_deref().map(|s| list(s, None)).transpose()?;
        let radii = opts.radii.as_deref().map(|s| list(s, None)).transpose()?;
        let point = opts.point.as_deref().map(|s| list(s, Some(2)).map(|v| [v[0], v[1]])).transpose()?;
        let ball = opts
            .ball
            .as_deref()
            .map(|s| list(s, Some(3)).map(|v| CriticalBall { center: [v[0], v[1]], radius: v[2] }))
            .transpose()?;
        let sweep = opts
            .sweep
            .as_deref()
            .map(|s| {
                s.split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| list(t, Some(4)).map(|v| ([v[0], v[1]], v[2], v[3])))
                    .collect::<Res<Vec<_>>>()
            })
            .transpose()?;
        let mut spec = QuadratureSpec::default();
        if let Some(s) = opts.seed {
            spec.seed = s;
        }
        if let Some(v) = opts.outer {
            spec.n_outer = v;
        }
        if let Some(v) = opts.radial {
            spec.n_radial = v;
        }
        if let Some(v) = opts.measure {
            spec.n_measure = v;
        }
        if let Some(v) = opts.tmin_frac {
            spec.t_min_frac = v;
        }
        if let Some(v) = opts.tmax_frac {
            spec.t_max_frac = v;
        }
        spec.validate()?;
        if let Some(n) = opts.n {
            if n == 0 {
                return usage("--n must be positive");
            }
        }
        Ok(Self { opts, phi, domain, field, spec, eps, sweep, ball, point, r_factors, radii })
    }

    fn phi(&self) -> Res<&YoungFunction<f64>> {
        self.phi.as_ref().ok_or_else(|| Failure::Usage("--phi is required".into()))
    }

    fn alpha(&self) -> Res<f64> {
        self.opts.alpha.ok_or_else(|| Failure::Usage("--alpha is required".into()))
    }

    fn n(&self) -> usize {
        self.opts.n.unwrap_or(2)
    }

    fn planar(&self) -> Res<()> {
        if self.n() != 2 {
            return usage(format!("geometry is planar; --n {} is not supported here", self.n()));
        }
        Ok(())
    }

    fn domain(&self) -> Res<&Domain<f64>> {
        self.domain.as_ref().ok_or_else(|| Failure::Usage("--domain is required".into()))
    }

    fn domain_or(&self, default: &str) -> Res<Domain<f64>> {
        match &self.domain {
            Some(d) => Ok(d.clone()),
            None => Ok(default.parse()?),
        }
    }

    fn field(&self) -> Res<&ScalarField<f64>> {
        self.field.as_ref().ok_or_else(|| Failure::Usage("--field is required".into()))
    }

    fn field_or(&self, default: &str) -> Res<ScalarField<f64>> {
        match &self.field {
            Some(u) => Ok(u.clone()),
            None => Ok(default.parse()?),
        }
    }

    fn tol(&self) -> f64 {
        self.opts.tol.unwrap_or(verify::NORM_TOL)
    }

    fn format(&self) -> Format {
        self.opts.format.unwrap_or(Format::Csv)
    }
}

/// `key,value` output for the non-experiment commands.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn kv() -> Self {
        Self { header: vec!["quantity", "value"], rows: Vec::new() }
    }

    fn put(&mut self, key: &str, value: impl Display) {
        self.rows.push(vec![key.to_string(), value.to_string()]);
    }

    fn num(&mut self, key: &str, value: f64) {
        self.put(key, fmt_g9(value));
    }

    fn render(&self, sep: char) -> String {
        let join = |cells: Vec<String>| {
            cells
                .into_iter()
                .map(|c| if c.contains(sep) || c.contains('"') { format!("\"{}\"", c.replace('"', "\"\"")) } else { c })
                .collect::<Vec<_>>()
                .join(&sep.to_string())
        };
        let mut s = join(self.header.iter().map(|h| h.to_string()).collect());
        s.push('\n');
        for r in &self.rows {
            s.push_str(&join(r.clone()));
            s.push('\n');
        }
        s
    }
}

fn emit(ctx: &Ctx, text: &str) -> Res<()> {
    match &ctx.opts.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
        }
    }
}

fn write_plots(prefix: &Path, rep: &VerificationReport<f64>) -> Res<()> {
    for s in &rep.series {
        let path = prefix.with_file_name(format!(
            "{}.{}.dat",
            prefix.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
            s.name
        ));
        std::fs::write(&path, s.to_two_column())
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn dispatch(cmd: Cmd) -> Res<Outcome> {
    match cmd {
        Cmd::Young(YoungCmd::Check(o)) => young_check(Ctx::resolve(o)?),
        Cmd::Domain(DomainCmd::Regularity(o)) => domain_regularity(Ctx::resolve(o)?),
        Cmd::Domain(DomainCmd::Dyadic(o)) => domain_dyadic(Ctx::resolve(o)?),
        Cmd::Norm(which) => {
            let (kind, o) = match which {
                NormCmd::Besov(o) => ("besov", o),
                NormCmd::Gagliardo(o) => ("gagliardo", o),
                NormCmd::Orlicz(o) => ("orlicz", o),
                NormCmd::Lebesgue(o) => ("lebesgue", o),
            };
            norm(kind, Ctx::resolve(o)?)
        }
        Cmd::Verify(v) => verify_cmd(v),
    }
}

fn young_check(ctx: Ctx) -> Res<Outcome> {
    let (f, alpha, n) = (ctx.phi()?, ctx.alpha()?, ctx.n());
    let adm = f.admissible(alpha, n)?;
    let mut t = Table::kv();
    t.put("phi", f);
    t.num("alpha", alpha);
    t.put("n", n);
    t.num("lambda_under", adm.lambda_under);
    t.num("lambda_over", adm.lambda_over);
    t.put("convex", adm.convex);
    t.put("admissible", adm.admissible);
    t.put("boundary_warning", adm.boundary_warning);
    let mut outcome = Outcome::Ok;
    if adm.admissible {
        let g = f.check_growth_bounds(alpha, n, ctx.opts.trials.unwrap_or(10_000), ctx.spec.seed)?;
        t.put("growth_trials", g.trials);
        t.put("growth_violations", g.violations);
        t.num("growth_worst_log_margin", g.worst_log_margin);
        if g.violations > 0 {
            outcome = Outcome::Violations;
        }
    }
    emit(&ctx, &t.render(ctx.format().sep()))?;
    Ok(outcome)
}

fn domain_regularity(ctx: Ctx) -> Res<Outcome> {
    ctx.planar()?;
    let dom = ctx.domain()?;
    let reg = regularity_constant(
        dom,
        ctx.opts.centers.unwrap_or(64),
        ctx.opts.radii_per_center.unwrap_or(24),
        &ctx.spec,
    )?;
    let mut t = Table::kv();
    t.put("domain", dom);
    t.num("theta", reg.theta);
    t.num("witness_x", reg.witness_x[0]);
    t.num("witness_y", reg.witness_x[1]);
    t.num("witness_r", reg.witness_r);
    t.num("r_min", reg.r_min);
    t.put("centers", reg.centers);
    t.put("seed", ctx.spec.seed);
    emit(&ctx, &t.render(ctx.format().sep()))?;
    Ok(Outcome::Ok)
}

fn domain_dyadic(ctx: Ctx) -> Res<Outcome> {
    ctx.planar()?;
    let dom = ctx.domain()?;
    let z = ctx.point.ok_or_else(|| Failure::Usage("--point is required".into()))?;
    let r = ctx.opts.radius.ok_or_else(|| Failure::Usage("--radius is required".into()))?;
    let d = dyadic_radii(dom, z, r, ctx.opts.levels.unwrap_or(8), &ctx.spec)?;
    let mut t = Table { header: vec!["j", "b", "radius", "measure"], rows: Vec::new() };
    for (j, (b, m)) in d.b.iter().zip(&d.measure).enumerate() {
        t.rows.push(vec![j.to_string(), fmt_g9(*b), fmt_g9(b * r), fmt_g9(*m)]);
    }
    emit(&ctx, &t.render(ctx.format().sep()))?;
    Ok(Outcome::Ok)
}

fn norm(kind: &str, ctx: Ctx) -> Res<Outcome> {
    ctx.planar()?;
    let (dom, u) = (ctx.domain()?, ctx.field()?);
    let mut t = Table::kv();
    t.put("domain", dom);
    t.put("field", u);
    let value = match kind {
        "besov" => {
            let (f, alpha) = (ctx.phi()?, ctx.alpha()?);
            t.put("phi", f);
            t.num("alpha", alpha);
            besov_seminorm(u, dom, f, alpha, &ctx.spec, ctx.tol())
        }
        "gagliardo" => {
            let s = ctx.opts.s.ok_or_else(|| Failure::Usage("--s is required".into()))?;
            let p = ctx.opts.p.ok_or_else(|| Failure::Usage("--p is required".into()))?;
            t.num("s", s);
            t.num("p", p);
            gagliardo_seminorm(u, dom, s, p, &ctx.spec)
        }
        "orlicz" => {
            let f = ctx.phi()?;
            t.put("phi", f);
            orlicz_norm(u, dom, f, &ctx.spec, ctx.tol())
        }
        _ => {
            let q = ctx.opts.q.ok_or_else(|| Failure::Usage("--q is required".into()))?;
            t.num("q", q);
            lebesgue_norm(u, dom, q, &ctx.spec)
        }
    };
    match value {
        Ok(v) => t.num(kind, v),
        // an infinite seminorm is a finding
        Err(Error::NotInSpace(why)) => {
            t.num(kind, f64::INFINITY);
            t.put("note", why);
        }
        Err(e) => return Err(e.into()),
    }
    t.put("seed", ctx.spec.seed);
    emit(&ctx, &t.render(ctx.format().sep()))?;
    Ok(Outcome::Ok)
}

fn default_family(ctx: &Ctx, dom: &Domain<f64>) -> Res<Vec<Member<f64>>> {
    if let Some(u) = &ctx.field {
        return Ok(vec![Member::new(u.clone())]);
    }
    let kind = match ctx.opts.family.as_deref() {
        Some(k) => k,
        None if matches!(dom.kind(), DomainKind::Cusp { .. }) => "tip",
        None => "base",
    };
    match kind {
        "base" => Ok(verify::standard_family(dom, false)),
        "doubled" => Ok(verify::standard_family(dom, true)),
        "tip" => {
            let eps = ctx.eps.clone().unwrap_or_else(|| (3..=7).map(|k| 2f64.powi(-k)).collect());
            Ok(verify::cusp_tip_family(&eps))
        }
        other => Err(Failure::Core(Error::Parse {
            token: other.to_string(),
            reason: "family must be base, doubled or tip".into(),
        })),
    }
}

fn verify_cmd(v: VerifyCmd) -> Res<Outcome> {
    let (name, o) = match v {
        VerifyCmd::GeomIneq(o) => ("geom-ineq", o),
        VerifyCmd::Cutoff(o) => ("cutoff", o),
        VerifyCmd::Levelset(o) => ("levelset", o),
        VerifyCmd::Imbedding(o) => ("imbedding", o),
        VerifyCmd::ImbeddingInhomog(o) => ("imbedding-inhomog", o),
        VerifyCmd::Critical(o) => ("critical", o),
        VerifyCmd::Scaling(o) => ("scaling", o),
        VerifyCmd::RnBalls(o) => ("rn-balls", o),
    };
    let ctx = Ctx::resolve(o)?;
    ctx.planar()?;
    let alpha = ctx.alpha()?;
    let spec = &ctx.spec;
    let rep = match name {
        "geom-ineq" => {
            let dom = ctx.domain_or("ball:0,0,1")?;
            verify::check_geometric_inequality(&dom, ctx.phi()?, alpha, ctx.opts.trials.unwrap_or(200), spec)?
        }
        "cutoff" => {
            let dom = ctx.domain_or("ball:0,0,1")?;
            let sweep = ctx.sweep.clone().unwrap_or_else(|| verify::default_cutoff_sweep(&dom));
            verify::check_cutoff_bound(&dom, ctx.phi()?, alpha, &sweep, spec)?
        }
        "levelset" => {
            let dom = ctx.domain_or("ball:0,0,1")?;
            verify::check_levelset_chain(ctx.field()?, &dom, ctx.phi()?, alpha, spec)?
        }
        "imbedding" | "imbedding-inhomog" => {
            let dom = ctx.domain_or("ball:0,0,1")?;
            let fam = default_family(&ctx, &dom)?;
            if name == "imbedding" {
                verify::imbedding_ratio(&dom, ctx.phi()?, alpha, &fam, spec)?
            } else {
                verify::imbedding_ratio_inhomog(&dom, ctx.phi()?, alpha, &fam, spec)?
            }
        }
        "critical" => {
            let dom = ctx.domain_or("box:0,0,1,1")?;
            let ball = ctx.ball.unwrap_or(CriticalBall { center: [0.5, 0.5], radius: 0.2 });
            let fam = match &ctx.field {
                Some(u) => vec![Member::new(u.clone())],
                None => verify::critical_family(ball.center, ball.radius),
            };
            verify::check_critical_case(&dom, ball, alpha, &fam, spec)?
        }
        "scaling" => {
            let u = ctx.field_or("gauss:0,0,0.2")?;
            let r = ctx.r_factors.clone().unwrap_or_else(|| vec![1.0, 2.0]);
            verify::check_scaling_homogeneity(ctx.phi()?, alpha, &u, &r, spec)?
        }
        _ => {
            let u = ctx.field_or("gauss:0,0,0.15")?;
            let radii = ctx.radii.clone().unwrap_or_else(|| vec![2.0, 4.0, 8.0]);
            verify::rn_imbedding_via_growing_balls(ctx.phi()?, alpha, &u, &radii, spec)?
        }
    };
    emit(&ctx, &rep.to_delimited(ctx.format().sep()))?;
    if let Some(prefix) = &ctx.opts.plot {
        write_plots(prefix, &rep)?;
    }
    eprintln!(
        "{}: {} trials, {} violations",
        rep.experiment,
        rep.trials.len(),
        rep.violations
    );
    Ok(if rep.passed() { Outcome::Ok } else { Outcome::Violations })
}
