//! Text formats: complex matrices, angles, and builtin names.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use opensys::bargmann::projector;
use opensys::builtins;
use opensys::{Complex, ComplexMatrix, DensityMatrix, HermitianMatrix, Ket, UnitCirclePoint};

/// Parses `a+bi`, `a`, `bi`, `-i`, `1e-3-2.5i` and similar. `j` is accepted
/// in place of `i`.
pub fn parse_complex(token: &str) -> Result<Complex> {
    let s = token.trim();
    if s.is_empty() {
        bail!("empty complex entry");
    }
    let bad = || anyhow!("cannot parse complex entry `{token}`");
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|re| Complex::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = if re_part.is_empty() { 0.0 } else { re_part.parse::<f64>().map_err(|_| bad())? };
    Ok(Complex::new(re, im))
}

/// Header `dim n` (square) or `dims r c`, then whitespace-separated rows.
/// `#` starts a comment. A `dim n` file holding one row of `n` entries is
/// read as a `1 × n` row.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .enumerate()
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines.next().ok_or_else(|| anyhow!("empty matrix file"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |w: &str| w.parse::<usize>().with_context(|| format!("bad dimension `{w}`"));
    let (rows, cols) = match words.as_slice() {
        ["dim", n] => (parse_dim(n)?, parse_dim(n)?),
        ["dims", r, c] => (parse_dim(r)?, parse_dim(c)?),
        _ => bail!("expected `dim n` or `dims r c`, found `{header}`"),
    };
    if rows == 0 || cols == 0 {
        bail!("matrix dimensions must be positive");
    }
    let mut data = Vec::with_capacity(rows * cols);
    let mut read_rows = 0;
    for (lineno, line) in lines {
        let entries: Vec<Complex> = line
            .split_whitespace()
            .map(parse_complex)
            .collect::<Result<_>>()
            .with_context(|| format!("line {}", lineno + 1))?;
        if entries.len() != cols {
            bail!("line {}: expected {cols} entries, found {}", lineno + 1, entries.len());
        }
        data.extend(entries);
        read_rows += 1;
    }
    let rows = if read_rows == 1 && rows == cols && words[0] == "dim" { 1 } else { rows };
    if read_rows != rows {
        bail!("expected {rows} rows, found {read_rows}");
    }
    ComplexMatrix::new(rows, cols, data).map_err(|e| anyhow!("{e}"))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_matrix(&text).with_context(|| format!("in {}", path.display()))
}

/// A point on the unit circle together with the text it was given as.
#[derive(Clone, Debug)]
pub struct Angle {
    pub point: UnitCirclePoint,
    pub label: String,
}

/// `pi/4`, `2pi/3`, `-pi`, `3*pi/2`, `0.5pi` or plain radians. Rational
/// multiples of π go through the exact constructor.
pub fn parse_angle(text: &str) -> Result<Angle> {
    let s: String = text.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let bad = || anyhow!("cannot parse angle `{text}`; use e.g. `pi/4`, `2pi/3` or radians");
    let point = if let Some((coef, rest)) = s.split_once("pi").or_else(|| s.split_once('π')) {
        let den: u64 = match rest {
            "" => 1,
            r => r.strip_prefix('/').and_then(|d| d.parse().ok()).filter(|&d| d > 0).ok_or_else(bad)?,
        };
        match coef {
            "" | "+" => UnitCirclePoint::from_pi_fraction(1, den),
            "-" => UnitCirclePoint::from_pi_fraction(-1, den),
            c => match c.parse::<i64>() {
                Ok(num) => UnitCirclePoint::from_pi_fraction(num, den),
                Err(_) => {
                    let f: f64 = c.parse().map_err(|_| bad())?;
                    UnitCirclePoint::from_angle(f * std::f64::consts::PI / den as f64)
                }
            },
        }
    } else {
        UnitCirclePoint::from_angle(s.parse::<f64>().map_err(|_| bad())?)
    };
    if !point.angle().is_finite() {
        return Err(bad());
    }
    Ok(Angle { point, label: text.trim().to_string() })
}

/// Unvalidated Hamiltonian: a builtin or the contents of a file.
pub fn hamiltonian_matrix(spec: &str, d: usize) -> Result<ComplexMatrix> {
    let m = match spec {
        "H1" => builtins::h1().into_matrix(),
        "H2" => builtins::h2().into_matrix(),
        path => read_matrix(Path::new(path))?,
    };
    if m.rows() != 2 * d || m.cols() != 2 * d {
        bail!("Hamiltonian `{spec}` is {}x{}, expected {n}x{n} for d = {d}", m.rows(), m.cols(), n = 2 * d);
    }
    Ok(m)
}

pub fn load_hamiltonian(spec: &str, d: usize) -> Result<HermitianMatrix> {
    HermitianMatrix::new(hamiltonian_matrix(spec, d)?).map_err(|e| anyhow!("Hamiltonian `{spec}`: {e}"))
}

/// Initial density matrix on the full space; `pure` is set when it came
/// from a state vector.
pub struct InitialState {
    pub rho: DensityMatrix,
    pub pure: bool,
}

pub fn load_state(spec: &str, d: usize, z: UnitCirclePoint) -> Result<InitialState> {
    let n = 2 * d;
    let err = |e: opensys::Error| anyhow!("state `{spec}`: {e}");
    let state = match spec {
        "v0" => {
            if d != 3 {
                bail!("builtin v0 lives in dimension 6; it needs d = 3");
            }
            InitialState { rho: DensityMatrix::from_pure(&builtins::v0()).map_err(err)?, pure: true }
        }
        "maximally-mixed-bargmann" => InitialState {
            rho: DensityMatrix::new(builtins::maximally_mixed_bargmann(d, z).map_err(err)?).map_err(err)?,
            pure: false,
        },
        path => {
            let m = read_matrix(Path::new(path))?;
            if m.rows() == n && m.cols() == n {
                let rho = DensityMatrix::new(m).map_err(err)?;
                let pure = rho.is_pure();
                InitialState { rho, pure }
            } else if m.rows() * m.cols() == n && (m.rows() == 1 || m.cols() == 1) {
                let ket = Ket::new(m.entries().to_vec()).map_err(err)?;
                InitialState { rho: DensityMatrix::from_pure(&ket).map_err(err)?, pure: true }
            } else {
                bail!("state `{spec}` is {}x{}; expected a vector of length {n} or a {n}x{n} matrix", m.rows(), m.cols());
            }
        }
    };
    Ok(state)
}

/// Projector pair at `(d, z)`.
pub fn projector_pair(d: usize, z: UnitCirclePoint) -> Result<opensys::ProjectorPair> {
    projector(d, z).map_err(|e| anyhow!("{e}"))
}
