use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "p4", version, about = "Poisson bivector fields on R^4 = R^3 x R")]
pub struct Cli {
    /// Indented text instead of compact JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// A tensor file path or a catalog entry name.
#[derive(Args, Debug)]
pub struct TensorArg {
    pub tensor: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jacobi residuals, coordinate jacobiators and the Poisson verdict.
    Check(TensorArg),
    /// Poisson bracket {f, g}.
    Bracket {
        #[command(flatten)]
        t: TensorArg,
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
    },
    /// Hamiltonian vector field X_H.
    Ham {
        #[command(flatten)]
        t: TensorArg,
        #[arg(short = 'H')]
        h: String,
    },
    /// Modular vector field.
    Modular(TensorArg),
    /// Rank at a point.
    Rank {
        #[command(flatten)]
        t: TensorArg,
        /// x1,x2,x3,y
        #[arg(short, allow_hyphen_values = true)]
        p: String,
    },
    /// Sign region of Φ·Ψ at a point.
    Region {
        #[command(flatten)]
        t: TensorArg,
        #[arg(short, allow_hyphen_values = true)]
        p: String,
    },
    /// Whether k is a Casimir function.
    Casimir {
        #[command(flatten)]
        t: TensorArg,
        #[arg(short)]
        k: String,
    },
    /// Resolve the signs of the audited identities.
    Audit {
        /// Comma-separated ids, default all.
        #[arg(long)]
        identities: Option<String>,
        /// Number of random Poisson tensors added to the named ones.
        #[arg(long, default_value_t = 10)]
        corpus_size: usize,
    },
    /// Split a tensor into named parts and check the reconstruction.
    Decompose {
        #[command(flatten)]
        t: TensorArg,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
    },
    /// Check that F(x, y) = (S, h) is a Poisson map.
    Map {
        #[command(flatten)]
        t: TensorArg,
        #[arg(long = "S", allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        /// Target tensor, default the source.
        #[arg(long)]
        target: Option<String>,
    },
    /// Check that W·∂x + b·∂y is a Poisson vector field.
    Pvf {
        #[command(flatten)]
        t: TensorArg,
        #[arg(long = "W", allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Tangent field (Ψ×α − gΦ)·∂x + (α·Φ)·∂y and its conditions.
    TangentPvf {
        #[command(flatten)]
        t: TensorArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// Build a tensor from one of the constructors.
    Family {
        #[command(subcommand)]
        kind: Family,
    },
    /// Integrate X_H with RK4 and report drifts.
    Flow {
        #[command(flatten)]
        t: TensorArg,
        #[arg(short = 'H')]
        h: String,
        #[arg(short, allow_hyphen_values = true)]
        p: String,
        #[arg(short = 't', default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-2)]
        dt: f64,
        /// Comma-separated functions whose drift is reported.
        #[arg(long)]
        check: Option<String>,
        /// Largest accepted drift.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Built-in examples.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Fg,
    Modular,
}

/// Constructor flags shared by the families.
#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, default_value = "family")]
    pub name: String,
    /// Also write the tensor file here.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// Linear tensor from M, N, p, q, α, β.
    Linear {
        /// Symmetric, rows separated by ';'.
        #[arg(long = "M", allow_hyphen_values = true)]
        m: String,
        #[arg(long = "N", allow_hyphen_values = true)]
        n: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        p: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        q: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        alpha: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        beta: String,
        #[command(flatten)]
        out: Output,
    },
    /// Tensor with Casimir k.
    Casimir {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        f: String,
        #[command(flatten)]
        out: Output,
    },
    /// f·S_(k1,k2).
    TwoCasimir {
        #[arg(long, allow_hyphen_values = true)]
        k1: String,
        #[arg(long, allow_hyphen_values = true)]
        k2: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        f: String,
        #[command(flatten)]
        out: Output,
    },
    /// Tensor with vanishing modular field from f and Σ.
    Liouville {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[command(flatten)]
        out: Output,
    },
    /// Rank-2 tensor Φ∂x ∧ (Σ∂x + ∂y).
    Rank2 {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    List,
    Show { name: String },
    Run {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
    },
}
