//! Fixed inputs shared by the kernel benchmarks.

use p4_core::corpus::{example2, quadratic_k, random_poisson_tensors};
use p4_core::expr::{parse, SplitMix64};
use p4_core::random::random_smooth;
use p4_core::{ScalarExpr, MV2};

pub const SEED: u64 = 0xBE7C;

/// A mid-sized expression mixing polynomial and transcendental terms.
pub const EXPRESSION: &str = "x1^3*x2 - 2*x3*y^2 + sin(x1*x2)*exp(y/2) + x2^2*x3^2/3 - ln(1 + x1^2)";

pub fn expression() -> ScalarExpr {
    parse(EXPRESSION).expect("benchmark expression parses")
}

pub fn smooth_expressions(n: usize) -> Vec<ScalarExpr> {
    let mut rng = SplitMix64::new(SEED);
    (0..n).map(|_| random_smooth(&mut rng, 3)).collect()
}

/// The example2 tensor, the non-Poisson quadratic tensor and one random Poisson tensor
/// of each constructor kind.
pub fn tensors() -> Vec<(String, MV2)> {
    let mut out = vec![("example2".to_string(), example2()), ("quadratic-k".to_string(), quadratic_k())];
    let random = random_poisson_tensors(SEED);
    for prefix in ["two-casimir-0", "gradient-0", "linear-image-0", "symplectic-image-0"] {
        let t = random.iter().find(|(n, _)| n == prefix).expect("constructor present");
        out.push(t.clone());
    }
    out
}
