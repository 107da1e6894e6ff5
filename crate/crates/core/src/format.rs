/// Formats an SO value for tab-separated output: at most ten decimals,
/// trailing zeros dropped, no negative zero.
pub fn format_so(value: f64) -> String {
    let mut s = format!("{value:.10}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}
