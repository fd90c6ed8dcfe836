//! Grid wave functions on disk: a CSV table and the `QWF1` binary dump.
//!
//! `QWF1` layout, all little-endian:
//!
//! ```text
//! b"QWF1" | n: u64 | dx: f64 | x_min: f64 | mass: f64 | hbar: f64 | n x (re: f64, im: f64)
//! ```

use std::fs;
use std::path::Path;

use quantalab_core::grid::{Grid1D, GridWavefunction, Particle};
use quantalab_core::Complex64;

use crate::{row, LabError, Table};

pub const MAGIC: &[u8; 4] = b"QWF1";
const HEADER_LEN: usize = 4 + 5 * 8;

/// Columns `x, re, im, density`.
pub fn wavefunction_table(name: &str, psi: &GridWavefunction) -> Table {
    let mut table = Table::new(name, &["x", "re", "im", "density"]);
    for (x, a) in psi.grid().xs().zip(psi.amplitudes()) {
        table.push(row![x, a.re, a.im, a.norm_sqr()]);
    }
    table
}

pub fn encode_qwf1(psi: &GridWavefunction) -> Vec<u8> {
    let grid = psi.grid();
    let particle = psi.particle();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * grid.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(grid.len() as u64).to_le_bytes());
    for v in [grid.dx(), grid.x_min(), particle.mass, particle.hbar] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for a in psi.amplitudes() {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
    out
}

fn bad(message: impl Into<String>) -> LabError {
    LabError::Format(message.into())
}

pub fn decode_qwf1(bytes: &[u8]) -> Result<GridWavefunction, LabError> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(bad("missing QWF1 header"));
    }
    let word = |i: usize| -> [u8; 8] { bytes[4 + 8 * i..12 + 8 * i].try_into().expect("8 bytes") };
    let n = u64::from_le_bytes(word(0));
    let [dx, x_min, mass, hbar] = [1, 2, 3, 4].map(|i| f64::from_le_bytes(word(i)));
    let body = &bytes[HEADER_LEN..];
    if u64::try_from(body.len() / 16).ok() != Some(n) || !body.len().is_multiple_of(16) {
        return Err(bad(format!(
            "header says {n} points, body holds {} bytes",
            body.len()
        )));
    }
    let amp = body
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    let grid = Grid1D::new(x_min, dx, n as usize)?;
    Ok(GridWavefunction::new(
        grid,
        amp,
        Particle::new(mass, hbar)?,
    )?)
}

pub fn save_qwf1(path: &Path, psi: &GridWavefunction) -> Result<(), LabError> {
    fs::write(path, encode_qwf1(psi)).map_err(|e| LabError::io(path, e))
}

pub fn load_qwf1(path: &Path) -> Result<GridWavefunction, LabError> {
    decode_qwf1(&fs::read(path).map_err(|e| LabError::io(path, e))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use quantalab_core::grid::gaussian_packet;

    fn packet() -> GridWavefunction {
        let grid = Grid1D::centered(64, 0.25).unwrap();
        gaussian_packet(&grid, 0.5, 1.5, 1.0, Particle::new(2.0, 0.5).unwrap()).unwrap()
    }

    #[test]
    fn header_layout() {
        let bytes = encode_qwf1(&packet());
        assert_eq!(bytes.len(), 44 + 64 * 16);
        assert_eq!(&bytes[..4], b"QWF1");
        assert_eq!(u64::from_le_bytes(bytes[4..12].try_into().unwrap()), 64);
        assert_eq!(f64::from_le_bytes(bytes[12..20].try_into().unwrap()), 0.25);
        assert_eq!(f64::from_le_bytes(bytes[20..28].try_into().unwrap()), -8.0);
        assert_eq!(f64::from_le_bytes(bytes[28..36].try_into().unwrap()), 2.0);
        assert_eq!(f64::from_le_bytes(bytes[36..44].try_into().unwrap()), 0.5);
    }

    #[test]
    fn rejects_damaged_files() {
        let bytes = encode_qwf1(&packet());
        assert!(matches!(
            decode_qwf1(&bytes[..40]),
            Err(LabError::Format(_))
        ));
        assert!(matches!(
            decode_qwf1(&bytes[..bytes.len() - 8]),
            Err(LabError::Format(_))
        ));
        let mut wrong = bytes.clone();
        wrong[3] = b'2';
        assert!(matches!(decode_qwf1(&wrong), Err(LabError::Format(_))));
        let mut massless = bytes;
        massless[28..36].copy_from_slice(&0.0f64.to_le_bytes());
        assert!(matches!(decode_qwf1(&massless), Err(LabError::Core(_))));
    }

    #[test]
    fn table_rows_follow_the_grid() {
        let psi = packet();
        let table = wavefunction_table("psi", &psi);
        assert_eq!(table.rows.len(), 64);
        let csv = String::from_utf8(table.to_csv()).unwrap();
        assert!(csv.starts_with("x,re,im,density\n-8.0000000000000000e0,"));
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("qwf1-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("psi.qwf");
        save_qwf1(&path, &packet()).unwrap();
        assert_eq!(load_qwf1(&path).unwrap(), packet());
        fs::remove_dir_all(&dir).unwrap();
        assert!(matches!(load_qwf1(&path), Err(LabError::Io { .. })));
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(
            log_n in 3u32..7,
            x_min in -50.0f64..50.0,
            dx in 1e-3f64..2.0,
            amps in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 64),
        ) {
            let n = 1usize << log_n;
            let grid = Grid1D::new(x_min, dx, n).unwrap();
            let amp: Vec<Complex64> = amps[..n].iter().map(|&(re, im)| Complex64::new(re, im)).collect();
            let psi = GridWavefunction::new(grid, amp, Particle::natural()).unwrap();
            let back = decode_qwf1(&encode_qwf1(&psi)).unwrap();
            prop_assert_eq!(encode_qwf1(&back), encode_qwf1(&psi));
        }
    }
}
