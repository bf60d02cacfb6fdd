use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(name = "obesov", version, about = "Orlicz-Besov seminorms and imbedding checks on planar domains")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Young functions: admissibility integrals and growth bounds
    #[command(subcommand)]
    Young(YoungCmd),
    /// Domain geometry: measure density and dyadic radii
    #[command(subcommand)]
    Domain(DomainCmd),
    /// Norms and seminorms of a field
    #[command(subcommand)]
    Norm(NormCmd),
    /// Numerical checks of the imbedding inequalities
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
pub enum YoungCmd {
    /// Admissibility integrals, convexity and sampled growth bounds
    Check(Opts),
}

#[derive(Subcommand, Debug)]
pub enum DomainCmd {
    /// Sampled measure-density constant
    Regularity(Opts),
    /// Radii halving the measure of B(z, r) ∩ Ω
    Dyadic(Opts),
}

#[derive(Subcommand, Debug)]
pub enum NormCmd {
    /// Orlicz-Besov seminorm (--phi, --alpha)
    Besov(Opts),
    /// Fractional Sobolev seminorm (--s, --p)
    Gagliardo(Opts),
    /// Luxemburg norm in L^φ (--phi)
    Orlicz(Opts),
    /// L^q norm (--q)
    Lebesgue(Opts),
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Lower bound for the far-field integral over Ω∖E
    GeomIneq(Opts),
    /// Seminorm of cutoff functions against their scale bound
    Cutoff(Opts),
    /// Dyadic level-set sums against the L^q norm
    Levelset(Opts),
    /// Ratio of ‖u − mean‖_q to the seminorm over a test family
    Imbedding(Opts),
    /// As imbedding, with the full norm in both places
    ImbeddingInhomog(Opts),
    /// Explicit-constant bound on an interior ball in the critical case
    Critical(Opts),
    /// Seminorm and L^q norm under dilation
    Scaling(Opts),
    /// Poincaré ratios and mean drift on growing balls in the plane
    RnBalls(Opts),
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn sep(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

// Every flag is optional so that a config file can supply it; flags win.
#[derive(Args, Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Opts {
    /// Young function, e.g. `pow:1.5`, `powlog:2,1`, `mix:0.5*pow:1.2+0.5*pow:1.8`
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Dimension (default 2; geometry is planar)
    #[arg(long)]
    pub n: Option<usize>,
    /// Domain, e.g. `ball:0,0,1`, `box:0,0,1,1`, `cusp:2`, `poly:0,0;1,0;0,1`
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Field, e.g. `coord:1`, `gauss:0,0,0.2`, `cutoff:0,0,0.2,0.5`, `sum:a+b`
    #[arg(long, allow_hyphen_values = true)]
    pub field: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Outer points for pair integrals
    #[arg(long)]
    pub outer: Option<usize>,
    /// Radial offsets per outer point
    #[arg(long)]
    pub radial: Option<usize>,
    /// Points for area and Lebesgue estimates
    #[arg(long)]
    pub measure: Option<usize>,
    #[arg(long)]
    pub tmin_frac: Option<f64>,
    #[arg(long)]
    pub tmax_frac: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Prefix for two-column plot files, one per data series
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Relative tolerance for Luxemburg norms
    #[arg(long)]
    pub tol: Option<f64>,
    /// Smoothness for `norm gagliardo`
    #[arg(long)]
    pub s: Option<f64>,
    /// Exponent for `norm gagliardo`
    #[arg(long)]
    pub p: Option<f64>,
    /// Exponent for `norm lebesgue`
    #[arg(long)]
    pub q: Option<f64>,
    /// Point `x,y` for `domain dyadic`
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Radius for `domain dyadic`
    #[arg(long)]
    pub radius: Option<f64>,
    /// Number of dyadic levels for `domain dyadic`
    #[arg(long)]
    pub levels: Option<usize>,
    /// Sampled centres for `domain regularity`
    #[arg(long)]
    pub centers: Option<usize>,
    /// Sampled radii per centre for `domain regularity`
    #[arg(long)]
    pub radii_per_center: Option<usize>,
    /// Test family: `base`, `doubled` or `tip`
    #[arg(long)]
    pub family: Option<String>,
    /// Tip scales for the `tip` family, comma separated
    #[arg(long)]
    pub eps: Option<String>,
    /// Cutoff sweep `x,y,r,t;...`
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    /// Ball `cx,cy,r` for `verify critical`
    #[arg(long, allow_hyphen_values = true)]
    pub ball: Option<String>,
    /// Dilation factors for `verify scaling`, comma separated
    #[arg(long)]
    pub r_factors: Option<String>,
    /// Ball radii for `verify rn-balls`, comma separated
    #[arg(long)]
    pub radii: Option<String>,
    /// TOML file with any of the above keys (kebab-case)
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),* $(,)?) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f; } )*
    };
}

impl Opts {
    /// Fills unset flags from the config file named by `--config`.
    pub fn with_config(mut self) -> Result<Self, String> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config(&path)?;
        overlay!(self, file;
            phi, alpha, n, domain, field, seed, outer, radial, measure, tmin_frac, tmax_frac, trials, out,
            format, plot, tol, s, p, q, point, radius, levels, centers, radii_per_center, family, eps, sweep,
            ball, r_factors, radii,
        );
        Ok(self)
    }
}

fn read_config(path: &Path) -> Result<Opts, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("obesov-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "phi = \"pow:1.5\"\nalpha = -1.0\nseed = 9\nr-factors = \"1,2\"\nformat = \"tsv\"\n")
            .unwrap();
        let opts = Opts { seed: Some(3), config: Some(path), ..Default::default() }.with_config().unwrap();
        assert_eq!(opts.seed, Some(3));
        assert_eq!(opts.phi.as_deref(), Some("pow:1.5"));
        assert_eq!(opts.alpha, Some(-1.0));
        assert_eq!(opts.r_factors.as_deref(), Some("1,2"));
        assert_eq!(opts.format, Some(Format::Tsv));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let err = toml::from_str::<Opts>("phii = \"pow:2\"").unwrap_err();
        assert!(err.to_string().contains("phii"));
    }
}
