use std::io::{Read, Write};

use num_complex::Complex64;

use super::grid::{GridFunction, IntBox};
use crate::error::{Error, Result};
use crate::report::fmt_num;

const MAGIC: &[u8; 8] = b"RSLGRID1";

/// Header `d lo_1 … lo_d hi_1 … hi_d`, then one `re im` line per cell in
/// row-major order.
pub fn write_text(f: &GridFunction, mut w: impl Write) -> Result<()> {
    let mut header = vec![f.dim().to_string()];
    header.extend(f.bbox.lo.iter().map(|v| v.to_string()));
    header.extend(f.bbox.hi.iter().map(|v| v.to_string()));
    writeln!(w, "{}", header.join(" "))?;
    for v in &f.values {
        writeln!(w, "{} {}", fmt_num(v.re), fmt_num(v.im))?;
    }
    Ok(())
}

pub fn to_text(f: &GridFunction) -> String {
    let mut buf = Vec::new();
    write_text(f, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

pub fn read_text(text: &str) -> Result<GridFunction> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let h: Vec<i64> = header
        .split_whitespace()
        .map(|v| v.parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| perr(hl, "header must be integers `d lo… hi…`"))?;
    let d = *h.first().ok_or_else(|| perr(hl, "empty header"))?;
    if d < 1 || h.len() != 1 + 2 * d as usize {
        return Err(perr(hl, "header must be `d lo… hi…`"));
    }
    let d = d as usize;
    let bbox = IntBox::new(h[1..1 + d].to_vec(), h[1 + d..].to_vec())?;
    let mut values = Vec::with_capacity(bbox.len());
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| s.parse::<f64>().map_err(|_| perr(ln, "bad number"));
        let v = match parts.as_slice() {
            [re] => Complex64::new(parse(re)?, 0.0),
            [re, im] => Complex64::new(parse(re)?, parse(im)?),
            _ => return Err(perr(ln, "expected `re im`")),
        };
        values.push(v);
    }
    GridFunction::new(bbox, values)
}

/// Magic `RSLGRID1`, u64 d, i64 lo/hi, then little-endian f64 (re, im) pairs.
pub fn write_binary(f: &GridFunction, mut w: impl Write) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(f.dim() as u64).to_le_bytes())?;
    for v in f.bbox.lo.iter().chain(&f.bbox.hi) {
        w.write_all(&v.to_le_bytes())?;
    }
    for v in &f.values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary(mut r: impl Read) -> Result<GridFunction> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Parse { line: 0, msg: "not a binary grid file".into() });
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let d = u64::from_le_bytes(b8) as usize;
    if d == 0 || d > 64 {
        return Err(Error::Parse { line: 0, msg: format!("bad dimension {d}") });
    }
    let mut bounds = Vec::with_capacity(2 * d);
    for _ in 0..2 * d {
        r.read_exact(&mut b8)?;
        bounds.push(i64::from_le_bytes(b8));
    }
    let bbox = IntBox::new(bounds[..d].to_vec(), bounds[d..].to_vec())?;
    let n = bbox.len();
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        values.push(Complex64::new(re, f64::from_le_bytes(b8)));
    }
    GridFunction::new(bbox, values)
}

/// Reads either format, detected by the magic bytes.
pub fn read_any(bytes: &[u8]) -> Result<GridFunction> {
    if bytes.starts_with(MAGIC) {
        read_binary(bytes)
    } else {
        let text = std::str::from_utf8(bytes).map_err(|_| Error::Parse { line: 0, msg: "not UTF-8".into() })?;
        read_text(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridFunction {
        let b = IntBox::new(vec![-1, 2], vec![1, 3]).unwrap();
        GridFunction::from_fn(b, |p| Complex64::new(p[0] as f64 / 3.0, (p[1] as f64).sqrt()))
    }

    #[test]
    fn text_round_trip_is_exact() {
        let f = sample();
        let text = to_text(&f);
        assert!(text.starts_with("2 -1 2 1 3\n"));
        assert_eq!(read_text(&text).unwrap(), f);
        assert!(read_text("1 0 1\n1 0\n").is_err());
        assert!(read_text("2 0 1\n").is_err());
    }

    #[test]
    fn binary_round_trip() {
        let f = sample();
        let mut buf = Vec::new();
        write_binary(&f, &mut buf).unwrap();
        assert_eq!(read_any(&buf).unwrap(), f);
        assert_eq!(read_any(to_text(&f).as_bytes()).unwrap(), f);
    }
}
