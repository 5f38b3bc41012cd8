use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Dual cube complexes of wallspaces and the chargeless condition for graph
/// manifolds.
#[derive(Debug, Parser)]
#[command(name = "cubuland", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    /// Split brute-force witness searches across threads.
    #[arg(long, global = true)]
    pub parallel: bool,
}

impl Global {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graph manifolds: charges, witnesses, turbines, covers, retwists.
    #[command(subcommand)]
    Gm(GmCommand),
    /// Dual cube complexes of finite or windowed wallspaces.
    #[command(subcommand)]
    Cube(CubeCommand),
    /// Periodic planar arrangements: families, flats, extra walls.
    #[command(subcommand)]
    Flat(FlatCommand),
    /// Periodic crossing patterns along a geodesic.
    #[command(subcommand)]
    Halfplane(HalfplaneCommand),
    /// Seeded random instances.
    #[command(subcommand)]
    Generate(GenerateCommand),
}

#[derive(Debug, Subcommand)]
pub enum GmCommand {
    /// Block charges and the chargeless verdict.
    Charge { manifold: PathBuf },
    /// Witness integers, from the closed form or by exhaustive search.
    Witness {
        manifold: PathBuf,
        /// Search every end over [-N, N] \ {0} instead.
        #[arg(long, value_name = "N")]
        brute: Option<u64>,
        /// Largest number of candidates a search may visit.
        #[arg(long, default_value_t = cubuland::chargeless::DEFAULT_SEARCH_CAP)]
        cap: u128,
    },
    /// Turbine collection counts for a chargeless manifold.
    Turbine {
        manifold: PathBuf,
        /// Use witnesses relative to free tori where the literal ones fail.
        #[arg(long)]
        relative: bool,
    },
    /// Lift along a covering of the underlying graph.
    Cover { manifold: PathBuf, cover: PathBuf },
    /// Compare verdicts before and after a zero-sum section change.
    RetwistCheck { manifold: PathBuf, retwist: PathBuf },
}

#[derive(Debug, Args)]
pub struct ComplexSource {
    /// Wallspace JSON.
    pub wallspace: PathBuf,
    /// Basepoint `x,y` for planar wallspaces.
    #[arg(long, allow_hyphen_values = true)]
    pub basepoint: Option<String>,
    /// Basepoint index for bipartition wallspaces.
    #[arg(long)]
    pub point: Option<usize>,
    /// Window `x0,y0,x1,y1` for periodic wallspaces.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Largest vertex count to build.
    #[arg(long, default_value_t = cubuland::dual_complex::DEFAULT_VERTEX_BUDGET)]
    pub budget: usize,
    /// Largest number of wall instances a window may expand to.
    #[arg(long, default_value_t = cubuland::wallspace::DEFAULT_WALL_BUDGET)]
    pub wall_budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Graph {
    Skeleton,
    Crossing,
}

#[derive(Debug, Subcommand)]
pub enum CubeCommand {
    /// Build the dual complex.
    Dual {
        #[command(flatten)]
        source: ComplexSource,
        /// Graph drawn by `--format dot`.
        #[arg(long, value_enum, default_value = "skeleton")]
        graph: Graph,
    },
    /// Median of three vertices given as 0/1 strings.
    Median {
        #[command(flatten)]
        source: ComplexSource,
        u: String,
        v: String,
        w: String,
    },
    /// Cubical convex hull of vertices, optionally thickened.
    Hull {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(required = true)]
        vertices: Vec<String>,
        /// Cubical neighborhood radius.
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Dual of the walls essential for a set of vertices.
    Core {
        #[command(flatten)]
        source: ComplexSource,
        /// Vertices of the subcomplex; all vertices when omitted.
        vertices: Vec<String>,
        #[arg(long, default_value_t = 1)]
        horizon: usize,
    },
    /// Split into factors along the crossing graph.
    Product {
        #[command(flatten)]
        source: ComplexSource,
    },
    /// Whether the subcomplex spanned by vertices sits isometrically.
    Isometric {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(required = true)]
        vertices: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct FlatSource {
    /// Periodic arrangement JSON.
    pub arrangement: PathBuf,
    /// Window `x0,y0,x1,y1`.
    #[arg(long, allow_hyphen_values = true, default_value = "-2,-2,2,2")]
    pub window: String,
    #[arg(long, default_value_t = cubuland::dual_complex::DEFAULT_VERTEX_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = cubuland::wallspace::DEFAULT_WALL_BUDGET)]
    pub wall_budget: usize,
}

#[derive(Debug, Subcommand)]
pub enum FlatCommand {
    /// Parallel families of the arrangement.
    Families {
        /// Periodic arrangement JSON.
        arrangement: PathBuf,
    },
    /// Dual of the lines meeting a window, certified as a product of chains.
    Dual {
        #[command(flatten)]
        source: FlatSource,
    },
    /// The subcomplex cut out by the extra walls.
    Y {
        #[command(flatten)]
        source: FlatSource,
    },
    /// Split by number of families.
    Classify {
        #[command(flatten)]
        source: FlatSource,
    },
}

#[derive(Debug, Subcommand)]
pub enum HalfplaneCommand {
    /// Check orbit separation and betweenness on a window.
    Validate {
        pattern: PathBuf,
        /// Window length; defaults to 4 m (max R + 1).
        #[arg(long)]
        window: Option<u64>,
    },
    /// Bounded or unbounded crossings.
    Classify { pattern: PathBuf },
    /// The A/B split of the orbits.
    Partition { pattern: PathBuf },
    /// Build the half-plane over a window of the geodesic.
    Build {
        pattern: PathBuf,
        #[arg(long, default_value_t = 8)]
        window: u64,
    },
    /// Classify a pair of patterns for two families.
    Two {
        alpha: PathBuf,
        beta: PathBuf,
        #[arg(long, default_value_t = 6)]
        window: u64,
        /// Edges of the line factor.
        #[arg(long, default_value_t = 3)]
        line: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenerateCommand {
    /// A connected graph manifold.
    Manifold {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        blocks: usize,
        #[arg(long, default_value_t = 1)]
        max_genus: u32,
        #[arg(long, default_value_t = 3)]
        max_boundary: u32,
        #[arg(long, default_value_t = 3)]
        max_entry: i64,
        #[arg(long, default_value_t = 4)]
        word_len: usize,
        #[arg(long, default_value_t = 0)]
        free_tori: usize,
    },
    /// A bipartition wallspace.
    Wallspace {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 6)]
        walls: usize,
    },
    /// A crossing pattern that passes validation.
    Pattern {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        orbits: usize,
        #[arg(long, default_value_t = 3)]
        period: u64,
        #[arg(long, default_value_t = 3)]
        max_r: u64,
        /// Probability that two orbits always cross.
        #[arg(long, default_value_t = 0.2)]
        always: f64,
    },
}
