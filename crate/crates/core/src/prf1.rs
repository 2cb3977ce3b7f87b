//! "PRF1" binary field dumps.
//!
//! Layout (little-endian): magic `PRF1`, `u32` dimension, one `u32` point
//! count per axis, one `f64` length per axis, `u8` kind (0 real, 1 complex),
//! then the samples row-major as `f64` (`re, im` interleaved for complex).

use crate::field::{ComplexField, FieldError, RealField};
use crate::grid::{make_grid, GridError, GridSpec};
use num_complex::Complex64;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"PRF1";

#[derive(Debug, Error)]
pub enum Prf1Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("bad magic {0:?}, expected \"PRF1\"")]
    Magic([u8; 4]),
    #[error("unknown field kind {0}")]
    Kind(u8),
    #[error("invalid grid header: {0}")]
    Grid(#[from] GridError),
    #[error("invalid samples: {0}")]
    Field(#[from] FieldError),
    #[error("trailing bytes after the last sample")]
    Trailing,
    #[error("expected a {expected} field, found {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prf1Field {
    Real(RealField),
    Complex(ComplexField),
}

impl Prf1Field {
    pub fn grid(&self) -> &GridSpec {
        match self {
            Prf1Field::Real(f) => f.grid(),
            Prf1Field::Complex(f) => f.grid(),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Prf1Field::Real(_) => "real",
            Prf1Field::Complex(_) => "complex",
        }
    }

    pub fn into_complex(self) -> Result<ComplexField, Prf1Error> {
        match self {
            Prf1Field::Complex(f) => Ok(f),
            other => Err(Prf1Error::WrongKind {
                expected: "complex",
                found: other.kind_name(),
            }),
        }
    }

    pub fn into_real(self) -> Result<RealField, Prf1Error> {
        match self {
            Prf1Field::Real(f) => Ok(f),
            other => Err(Prf1Error::WrongKind {
                expected: "real",
                found: other.kind_name(),
            }),
        }
    }
}

fn write_header<W: Write>(w: &mut W, grid: &GridSpec, kind: u8) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(grid.dim() as u32).to_le_bytes())?;
    for &n in grid.points() {
        w.write_all(&(n as u32).to_le_bytes())?;
    }
    for &l in grid.lengths() {
        w.write_all(&l.to_le_bytes())?;
    }
    w.write_all(&[kind])
}

pub fn write_real<W: Write>(w: &mut W, f: &RealField) -> io::Result<()> {
    write_header(w, f.grid(), 0)?;
    for v in f.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_complex<W: Write>(w: &mut W, f: &ComplexField) -> io::Result<()> {
    write_header(w, f.grid(), 1)?;
    for z in f.values() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> io::Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

/// Reads one field and requires the stream to end right after it.
pub fn read<R: Read>(r: &mut R) -> Result<Prf1Field, Prf1Error> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Prf1Error::Magic(magic));
    }
    let dim = read_u32(r)? as usize;
    if !(1..=2).contains(&dim) {
        return Err(GridError::Dimension(dim).into());
    }
    let points = (0..dim)
        .map(|_| read_u32(r).map(|n| n as usize))
        .collect::<io::Result<Vec<_>>>()?;
    let lengths = (0..dim).map(|_| read_f64(r)).collect::<io::Result<Vec<_>>>()?;
    let grid = make_grid(dim, &points, &lengths)?;
    let mut kind = [0u8; 1];
    r.read_exact(&mut kind)?;
    let field = match kind[0] {
        0 => {
            let values = (0..grid.len()).map(|_| read_f64(r)).collect::<io::Result<Vec<_>>>()?;
            Prf1Field::Real(RealField::new(grid, values)?)
        }
        1 => {
            let values = (0..grid.len())
                .map(|_| Ok(Complex64::new(read_f64(r)?, read_f64(r)?)))
                .collect::<io::Result<Vec<_>>>()?;
            Prf1Field::Complex(ComplexField::new(grid, values)?)
        }
        k => return Err(Prf1Error::Kind(k)),
    };
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return Err(Prf1Error::Trailing);
    }
    Ok(field)
}

pub fn read_path(path: impl AsRef<Path>) -> Result<Prf1Field, Prf1Error> {
    let mut r = BufReader::new(File::open(path)?);
    read(&mut r)
}

pub fn write_real_path(path: impl AsRef<Path>, f: &RealField) -> Result<(), Prf1Error> {
    let mut w = BufWriter::new(File::create(path)?);
    write_real(&mut w, f)?;
    w.flush()?;
    Ok(())
}

pub fn write_complex_path(path: impl AsRef<Path>, f: &ComplexField) -> Result<(), Prf1Error> {
    let mut w = BufWriter::new(File::create(path)?);
    write_complex(&mut w, f)?;
    w.flush()?;
    Ok(())
}
