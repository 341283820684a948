//! Sign table resolved by the identity audit and frozen for the
//! constructors that depend on it. The audit test suite checks every entry
//! against a fresh resolution.

/// `{f,g}Λ = X_f∧X_g + ε·(Ψ·Φ)·S_(f,g)`.
pub const FG_TRANSVERSAL: i32 = 1;

/// `(div Φ)Λ = ε₁·Z∧Φ∂x + ε₂·∇(Φ·Ψ)∂x∧∂x`.
pub const MODULAR_WEDGE: i32 = 1;
pub const MODULAR_GRADIENT: i32 = 1;

/// Rank-2 form `(div Φ)Λ = ε·Z∧Φ∂x`.
pub const RANK2_MODULAR_WEDGE: i32 = 1;

/// Pushforward: sign of the `(Φ·∇h)·S_y` term in the transformed `Φ`.
pub const PUSHFORWARD_PHI_SY: i32 = -1;

/// Poisson vector field: `(P1, P2) = ε·L_XΛ` componentwise.
pub const VECTOR_FIELD_FORM: i32 = 1;

/// Transversal fields: `[Λ, V] = ε·(−div V + V(f)/f)·Λ`.
pub const TRANSVERSAL_SCALAR: i32 = -1;

/// Coordinate bracket: `Ψ·∇f×∇g + ε·Φ·(f_y∇g − g_y∇f)`.
pub const BRACKET_PHI_TERM: i32 = -1;

/// Rank-2 wedge: `Λ = ε/(Φ·x) · Λ#(d(|x|²/2)) ∧ Λ#(dy)`.
pub const RANK2_POSITION_WEDGE: i32 = 1;

/// Rank-2 Hamiltonian fields: `X_H = ε·(V(H))·U + (U(H))·V`, where
/// `U = Φ∂x` and `V = Σ∂x + ∂y`.
pub const RANK2_HAMILTONIAN: i32 = -1;

/// Bivector Schouten bracket: `[Λ,Λ]^{ijk} = ε·2·Jac(x_i, x_j, x_k)`, fixed so
/// that the graded Leibniz rule holds on bivector pairs.
pub const SCHOUTEN_NORMALIZATION: i32 = -1;
