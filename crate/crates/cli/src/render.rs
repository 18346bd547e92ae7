//! Small text renderers shared by the commands.

use fdim_core::homology::{DimKind, DimVerdict};

/// `2S1 + S2` for the dimension vector `[2, 1]`; `0` when empty.
pub fn composition(prefix: &str, dims: &[usize], labels: &[String]) -> String {
    let parts: Vec<String> = dims
        .iter()
        .zip(labels)
        .filter(|(d, _)| **d > 0)
        .map(|(d, l)| {
            if *d == 1 {
                format!("{prefix}{l}")
            } else {
                format!("{d}{prefix}{l}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Loewy or socle layers, one composition per layer.
pub fn layers(dims: &[Vec<usize>], labels: &[String]) -> Vec<String> {
    dims.iter().map(|d| composition("S", d, labels)).collect()
}

pub fn list(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// `3`, or `>= 13` for an unterminated resolution.
pub fn short(v: &DimVerdict) -> String {
    match v.kind {
        DimKind::Exactly(d) => d.to_string(),
        DimKind::AtLeast(n) => format!(">= {n}"),
    }
}
