/// Tolerances used throughout the crate. Every "=" in a defining equation is
/// tested as a distance in operator norm against one of these.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerances {
    /// Eigensolver and reconstruction accuracy.
    pub eig: f64,
    /// Per-sample predicate tolerance on homotopy paths.
    pub path: f64,
    /// Predicate tolerance for classification and orthogonality.
    pub pred: f64,
    /// Bisection bracket width for the order-unit norm.
    pub bisect: f64,
    /// Allowed distance of a total phase increment from a multiple of 2π.
    pub wind: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig: 1e-11,
            path: 1e-8,
            pred: 1e-9,
            bisect: 1e-10,
            wind: 1e-6,
        }
    }
}
