//! Fixed-width float formatting so CSV output is byte-identical across runs.

/// Twelve decimal places; enough to compare against every pinned tolerance.
pub(crate) fn fmt12(v: f64) -> String {
    format!("{v:.12}")
}
