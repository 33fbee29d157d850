use std::path::Path;

use num_complex::Complex64;

use super::{FormHeader, SparseNSForm};
use crate::error::{Error, Result};
use crate::kernel::KernelKind;
use crate::wave_atom::AtomIndex2D;

const MAGIC: &[u8; 4] = b"WANS";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 4 + 1 + 8 + 8 + 8 + 8 + 8;
const RECORD_LEN: usize = 1 + 2 * 4 + 8 + 8;

struct Reader<'a>(&'a [u8]);

impl<'a> Reader<'a> {
    fn take<const L: usize>(&mut self) -> Result<[u8; L]> {
        if self.0.len() < L {
            return Err(Error::Format("truncated form file".into()));
        }
        let (head, tail) = self.0.split_at(L);
        self.0 = tail;
        Ok(head.try_into().unwrap())
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take()?))
    }
}

impl SparseNSForm {
    /// Serializes to the little-endian `WANS` layout.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + RECORD_LEN * self.entries.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.k.to_le_bytes());
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        out.push(self.kind.code());
        for v in [self.eta, self.epsilon, self.delta, self.total_norm] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&(self.entries.len() as u64).to_le_bytes());
        for (idx, v) in &self.entries {
            out.push(idx.j as u8);
            for x in [idx.m1, idx.m2, idx.n1, idx.n2] {
                out.extend_from_slice(&(x as u16).to_le_bytes());
            }
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader(bytes);
        if &r.take::<4>()? != MAGIC {
            return Err(Error::Format("not a WANS form file (bad magic)".into()));
        }
        let version = u32::from_le_bytes(r.take()?);
        if version != VERSION {
            return Err(Error::Format(format!("unsupported form file version {version}")));
        }
        let k = r.f64()?;
        let n = u32::from_le_bytes(r.take()?) as usize;
        let kind = KernelKind::from_code(r.take::<1>()?[0])?;
        let eta = r.f64()?;
        let epsilon = r.f64()?;
        let delta = r.f64()?;
        let total_norm = r.f64()?;
        let nnz = u64::from_le_bytes(r.take()?) as usize;
        if r.0.len() != nnz.saturating_mul(RECORD_LEN) {
            return Err(Error::Format(format!("expected {nnz} records, found {} payload bytes", r.0.len())));
        }
        let mut entries = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let j = r.take::<1>()?[0] as u32;
            let (m1, m2, n1, n2) = (r.u16()? as u32, r.u16()? as u32, r.u16()? as u32, r.u16()? as u32);
            let v = Complex64::new(r.f64()?, r.f64()?);
            entries.push((AtomIndex2D { j, m1, m2, n1, n2 }, v));
        }
        SparseNSForm::from_entries(FormHeader { k, kind, eta }, n, epsilon, delta, total_norm, entries)
            .map_err(|e| Error::Format(format!("invalid form contents: {e}")))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        SparseNSForm::from_bytes(&std::fs::read(path)?)
    }
}
