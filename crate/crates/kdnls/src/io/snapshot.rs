//! Binary snapshot dumps of the profile spectrum.
//!
//! Layout (all multi-byte values little-endian):
//!   bytes 0..16   magic "KDNLS.SNAPSHOT\0\0"
//!   bytes 16..24  format version, u64 (currently 1)
//!   bytes 24..32  grid size n, u64
//!   bytes 32..40  box length L, f64
//!   bytes 40..48  time t, f64
//!   bytes 48..    n interleaved (re, im) f64 pairs of the profile spectrum
//!                 f_hat in FFT storage order.
//!
//! The stored object is the profile spectrum, not the field itself; the field
//! is reconstructable from (t, f_hat) and the analysis pipeline reads f_hat.

use std::io::{Read as _, Write as _};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solver::Snapshot;
use crate::spectral::{Grid, Spectrum};

pub const SNAPSHOT_MAGIC: [u8; 16] = *b"KDNLS.SNAPSHOT\0\0";
pub const SNAPSHOT_VERSION: u64 = 1;

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<()> {
    let grid = &snap.f_hat.grid;
    let mut buf = Vec::with_capacity(48 + 16 * grid.n());
    buf.extend_from_slice(&SNAPSHOT_MAGIC);
    buf.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.n() as u64).to_le_bytes());
    buf.extend_from_slice(&grid.length().to_le_bytes());
    buf.extend_from_slice(&snap.t.to_le_bytes());
    for c in &snap.f_hat.coeffs {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let mut buf = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut buf)?;
    if buf.len() < 48 {
        return Err(Error::SnapshotFormat("file shorter than the header".into()));
    }
    if buf[..16] != SNAPSHOT_MAGIC {
        return Err(Error::SnapshotFormat("bad magic".into()));
    }
    let u64_at = |off: usize| u64::from_le_bytes(buf[off..off + 8].try_into().unwrap());
    let f64_at = |off: usize| f64::from_le_bytes(buf[off..off + 8].try_into().unwrap());
    let version = u64_at(16);
    if version != SNAPSHOT_VERSION {
        return Err(Error::SnapshotFormat(format!(
            "unsupported version {version} (this build reads {SNAPSHOT_VERSION})"
        )));
    }
    let n = u64_at(24) as usize;
    let length = f64_at(32);
    let t = f64_at(40);
    let expected = 48 + 16 * n;
    if buf.len() != expected {
        return Err(Error::SnapshotFormat(format!(
            "size mismatch: n = {n} implies {expected} bytes, file has {}",
            buf.len()
        )));
    }
    let grid = Grid::new(n, length).map_err(|e| Error::SnapshotFormat(e.to_string()))?;
    let coeffs = (0..n)
        .map(|j| Complex64::new(f64_at(48 + 16 * j), f64_at(56 + 16 * j)))
        .collect();
    Ok(Snapshot {
        t,
        f_hat: Spectrum { grid, coeffs },
        phase_b: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward, Field};

    #[test]
    fn round_trip_bit_exact() {
        let grid = Grid::new(64, 40.0).unwrap();
        let u = Field::from_fn(grid.clone(), |x| {
            Complex64::new((-x * x / 8.0).exp(), 0.3 * x.sin())
        });
        let snap = Snapshot {
            t: 2.5,
            f_hat: forward(&u),
            phase_b: None,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.bin");
        write_snapshot(&path, &snap).unwrap();
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.t, snap.t);
        assert_eq!(back.f_hat.grid.n(), 64);
        assert_eq!(back.f_hat.grid.length(), 40.0);
        for (a, b) in back.f_hat.coeffs.iter().zip(&snap.f_hat.coeffs) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn rejects_corruption() {
        let grid = Grid::new(16, 10.0).unwrap();
        let snap = Snapshot {
            t: 0.0,
            f_hat: Spectrum::zeros(grid),
            phase_b: None,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.bin");
        write_snapshot(&path, &snap).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[0] ^= 0xff;
        std::fs::write(&path, &bytes).unwrap();
        assert!(read_snapshot(&path).is_err());
        let short = &bytes[..30];
        std::fs::write(&path, short).unwrap();
        assert!(read_snapshot(&path).is_err());
    }
}
