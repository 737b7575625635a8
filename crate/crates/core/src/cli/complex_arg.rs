//! Complex arguments on the command line: `RE+IMi` or `R@THETA` (radians).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

pub use crate::report::format_real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexArg(pub Complex64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseComplexError(String);

impl fmt::Display for ParseComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid complex number {:?}: expected RE+IMi or R@THETA",
            self.0
        )
    }
}

impl std::error::Error for ParseComplexError {}

fn parse_real(s: &str, whole: &str) -> Result<f64, ParseComplexError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| ParseComplexError(whole.into()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ParseComplexError(whole.into()))
    }
}

impl FromStr for ComplexArg {
    type Err = ParseComplexError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s = input.trim();
        if let Some((r, theta)) = s.split_once('@') {
            let r = parse_real(r, input)?;
            let theta = parse_real(theta, input)?;
            return Ok(ComplexArg(Complex64::from_polar(r, theta)));
        }
        let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
            return Ok(ComplexArg(Complex64::new(parse_real(s, input)?, 0.0)));
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(i) => (parse_real(&body[..i], input)?, &body[i..]),
            None => (0.0, body),
        };
        let im = match im.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_real(other, input)?,
        };
        Ok(ComplexArg(Complex64::new(re, im)))
    }
}

/// Cartesian form accepted by [`ComplexArg`]; real numbers print without an imaginary part.
pub fn format_complex(z: Complex64) -> String {
    let im = z.im + 0.0;
    if im == 0.0 {
        return format_real(z.re);
    }
    let im_text = format_real(im);
    if z.re + 0.0 == 0.0 {
        format!("{im_text}i")
    } else if im_text.starts_with('-') {
        format!("{}{im_text}i", format_real(z.re))
    } else {
        format!("{}+{im_text}i", format_real(z.re))
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_complex(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> Complex64 {
        s.parse::<ComplexArg>().unwrap().0
    }

    #[test]
    fn cartesian_forms() {
        assert_eq!(parse("1+1i"), Complex64::new(1.0, 1.0));
        assert_eq!(parse("-2-0.5i"), Complex64::new(-2.0, -0.5));
        assert_eq!(parse("0.5i"), Complex64::new(0.0, 0.5));
        assert_eq!(parse("-i"), Complex64::new(0.0, -1.0));
        assert_eq!(parse("3"), Complex64::new(3.0, 0.0));
        assert_eq!(parse("1e-3-2E+2i"), Complex64::new(1e-3, -200.0));
        assert_eq!(parse(" 5+5i "), Complex64::new(5.0, 5.0));
    }

    #[test]
    fn polar_form() {
        let z = parse("0.8@0.5235987755982988");
        assert!((z - Complex64::from_polar(0.8, std::f64::consts::PI / 6.0)).norm() < 1e-16);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1+", "nan", "inf+1i", "1@", "1+2k"] {
            assert!(s.parse::<ComplexArg>().is_err(), "{s}");
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(format_complex(Complex64::new(-2.0, -1.0)), "-2-1i");
        assert_eq!(format_complex(Complex64::new(2.5, 0.0)), "2.5");
        assert_eq!(format_complex(Complex64::new(-0.0, 1.0)), "1i");
        assert_eq!(format_complex(Complex64::new(1.0, -0.0)), "1");
        assert_eq!(format_real(1e-20), "1e-20");
    }

    proptest! {
        #[test]
        fn round_trip(re in -1e30f64..1e30, im in -1e30f64..1e30, tiny in -1e-12f64..1e-12) {
            for z in [Complex64::new(re, im), Complex64::new(tiny, re), Complex64::new(im, tiny)] {
                let back = parse(&format_complex(z));
                prop_assert_eq!(back.re, z.re + 0.0);
                prop_assert_eq!(back.im, z.im + 0.0);
            }
        }
    }
}
