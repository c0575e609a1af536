// SPDX-License-Identifier: Apache-2.0

//! Lossless text formatting of floating-point values for CSV output.

/// Shortest representation that parses back to the same `f64`; integral
/// values print without a fractional part.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() && x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:?}")
    }
}

pub fn csv_row<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = String::new();
    for (k, f) in fields.into_iter().enumerate() {
        if k > 0 {
            line.push(',');
        }
        line.push_str(f.as_ref());
    }
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_and_round_trip() {
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(1e-20), "1e-20");
        for x in [0.1, 1.0 / 3.0, 2.612_375_348_685_488, 6.02e23, -1.5e-300] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn rows() {
        assert_eq!(csv_row(["a", "b"]), "a,b\n");
    }
}
