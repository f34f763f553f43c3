//! `HLF1` field files: magic, little-endian `u64` d and n, `f64` L, then
//! `n^d` interleaved `(re, im)` `f64` samples in row-major order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::grid::{Centering, GridSpec, SampledField};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"HLF1";

pub fn write_field<W: Write>(mut w: W, f: &SampledField) -> Result<()> {
    let g = f.grid();
    w.write_all(MAGIC)?;
    w.write_all(&(g.dim() as u64).to_le_bytes())?;
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    w.write_all(&g.length().to_le_bytes())?;
    for v in f.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Read a field; samples are taken to be cell-centered.
pub fn read_field<R: Read>(mut r: R) -> Result<SampledField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Format("truncated header".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let d = read_u64(&mut r)?;
    let n = read_u64(&mut r)?;
    let length = read_f64(&mut r)?;
    if d > 3 || n > 1 << 16 {
        return Err(Error::Format(format!("implausible header d = {d}, n = {n}")));
    }
    let grid = GridSpec::new(d as usize, n as usize, length)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        values.push(Complex64::new(re, im));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after samples".into()));
    }
    SampledField::new(grid, Centering::CellCentered, values)
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)
        .map_err(|_| Error::Format("truncated file".into()))?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)
        .map_err(|_| Error::Format("truncated file".into()))?;
    Ok(f64::from_le_bytes(b))
}

pub fn save_field(path: impl AsRef<Path>, f: &SampledField) -> Result<()> {
    write_field(BufWriter::new(File::create(path)?), f)
}

pub fn load_field(path: impl AsRef<Path>) -> Result<SampledField> {
    read_field(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout_is_bit_exact() {
        let g = GridSpec::new(1, 8, 2.5).unwrap();
        let f = SampledField::from_fn(g, Centering::CellCentered, |x| Complex64::new(x[0], -1.0));
        let mut buf = Vec::new();
        write_field(&mut buf, &f).unwrap();
        assert_eq!(&buf[..4], b"HLF1");
        assert_eq!(u64::from_le_bytes(buf[4..12].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(buf[12..20].try_into().unwrap()), 8);
        assert_eq!(f64::from_le_bytes(buf[20..28].try_into().unwrap()), 2.5);
        assert_eq!(buf.len(), 28 + 8 * 16);
        let first_re = f64::from_le_bytes(buf[28..36].try_into().unwrap());
        assert_eq!(first_re, f.values()[0].re);
        let back = read_field(buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_bad_magic_and_truncation() {
        assert!(matches!(read_field(&b"HLF2xxxxxxxx"[..]), Err(Error::Format(_))));
        let g = GridSpec::new(1, 8, 1.0).unwrap();
        let mut buf = Vec::new();
        write_field(&mut buf, &SampledField::zeros(g, Centering::CellCentered)).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(matches!(read_field(buf.as_slice()), Err(Error::Format(_))));
    }
}
