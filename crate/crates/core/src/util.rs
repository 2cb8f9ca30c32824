use num_complex::Complex64;

/// Compact rendering of a complex number for logs and witnesses.
pub fn fmt_complex(z: Complex64) -> String {
    let clean = |x: f64| {
        let r = (x * 1e9).round() / 1e9;
        if r == 0.0 { 0.0 } else { r }
    };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re}"),
        (true, false) if im == 1.0 => "i".to_string(),
        (true, false) if im == -1.0 => "-i".to_string(),
        (true, false) => format!("{im}i"),
        (false, false) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("{re}{sign}{}i", im.abs())
        }
    }
}
