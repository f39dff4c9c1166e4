//! The small map language used in config files.
//!
//! ```text
//! identity | add-one | prepend <symbol> | [cross] <affine>
//! affine := [coef[*]] x [(+|-) number]      e.g. "2x", "3*x + 1/16", "-x"
//! number := decimal | p/q
//! ```
//!
//! `cross` sends each circle of a two-circle union into the other one.

use semichain::MapSpec;

pub fn parse_map_expr(src: &str) -> Result<MapSpec, String> {
    let bad = |why: &str| format!("malformed map expression '{src}': {why}");
    let text = src.trim().to_ascii_lowercase();
    match text.as_str() {
        "" => return Err(bad("empty")),
        "identity" | "id" => return Ok(MapSpec::Identity),
        "add-one" => return Ok(MapSpec::AddOne),
        _ => {}
    }
    if let Some(rest) = text.strip_prefix("prepend") {
        let symbol = rest.trim().parse::<usize>().map_err(|_| bad("prepend needs a symbol index"))?;
        return Ok(MapSpec::Prepend { symbol });
    }
    if let Some(rest) = text.strip_prefix("cross") {
        let (a, b) = parse_affine(rest).map_err(|e| bad(&e))?;
        return Ok(MapSpec::CrossAffine { a, b, target: vec![] });
    }
    let (a, b) = parse_affine(&text).map_err(|e| bad(&e))?;
    Ok(MapSpec::Affine { a, b })
}

fn parse_affine(text: &str) -> Result<(f64, f64), String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut parts = compact.splitn(2, 'x');
    let head = parts.next().unwrap_or_default();
    let tail = parts.next().ok_or("expected the variable x")?;
    if tail.contains('x') {
        return Err("x may appear only once".into());
    }
    let a = match head.strip_suffix('*').unwrap_or(head) {
        "" | "+" => 1.0,
        "-" => -1.0,
        coef => parse_number(coef)?,
    };
    let b = match tail.chars().next() {
        None => 0.0,
        Some('+') => parse_number(&tail[1..])?,
        Some('-') => -parse_number(&tail[1..])?,
        Some(c) => return Err(format!("unexpected '{c}' after x")),
    };
    Ok((a, b))
}

fn parse_number(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.parse().map_err(|_| format!("bad numerator '{p}'"))?;
            let q: f64 = q.parse().map_err(|_| format!("bad denominator '{q}'"))?;
            if q == 0.0 {
                return Err("division by zero".into());
            }
            p / q
        }
        None => s.parse().map_err(|_| format!("bad number '{s}'"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("number '{s}' is not finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affine(a: f64, b: f64) -> MapSpec {
        MapSpec::Affine { a, b }
    }

    #[test]
    fn affine_forms() {
        assert_eq!(parse_map_expr("2x").unwrap(), affine(2.0, 0.0));
        assert_eq!(parse_map_expr(" 3 * x + 1/16 ").unwrap(), affine(3.0, 0.0625));
        assert_eq!(parse_map_expr("x - 0.25").unwrap(), affine(1.0, -0.25));
        assert_eq!(parse_map_expr("-x").unwrap(), affine(-1.0, 0.0));
        assert_eq!(parse_map_expr("x").unwrap(), affine(1.0, 0.0));
    }

    #[test]
    fn keyword_forms() {
        assert_eq!(parse_map_expr("identity").unwrap(), MapSpec::Identity);
        assert_eq!(parse_map_expr("Add-One").unwrap(), MapSpec::AddOne);
        assert_eq!(parse_map_expr("prepend 1").unwrap(), MapSpec::Prepend { symbol: 1 });
        assert_eq!(
            parse_map_expr("cross 2x").unwrap(),
            MapSpec::CrossAffine { a: 2.0, b: 0.0, target: vec![] }
        );
    }

    #[test]
    fn malformed() {
        for s in ["", "2y", "x + ", "xx", "2x * 3", "x + 1/0", "prepend", "1/2/3x"] {
            let err = parse_map_expr(s).unwrap_err();
            assert!(err.starts_with("malformed map expression"), "{s}: {err}");
        }
    }
}
