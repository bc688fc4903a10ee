/// Shortest round-trip decimal; exponent notation outside `[1e-4, 1e15)`.
pub fn fmt_real(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}
