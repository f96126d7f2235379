//! Little-endian primitives shared by the binary containers.

use super::{FormatError, FORMAT_VERSION};
use crate::system::{BoxKind, SimBox, Vec3};

#[derive(Default)]
pub(crate) struct Encoder {
    pub buf: Vec<u8>,
}

impl Encoder {
    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }
    pub fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub fn i32(&mut self, v: i32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub fn f64(&mut self, v: f64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub fn count(&mut self, n: usize) -> Result<(), FormatError> {
        let n = u32::try_from(n).map_err(|_| FormatError::Unwritable(format!("count {n} exceeds u32")))?;
        self.u32(n);
        Ok(())
    }
    pub fn str(&mut self, s: &str) -> Result<(), FormatError> {
        self.count(s.len())?;
        self.buf.extend_from_slice(s.as_bytes());
        Ok(())
    }
    pub fn vec3s(&mut self, v: &[Vec3<f64>]) {
        for p in v {
            self.f64(p.x);
            self.f64(p.y);
            self.f64(p.z);
        }
    }
    pub fn simbox(&mut self, b: &SimBox<f64>) {
        for v in b.vectors() {
            self.f64(v.x);
            self.f64(v.y);
            self.f64(v.z);
        }
    }
}

pub(crate) fn header(magic: &[u8; 4]) -> Vec<u8> {
    let mut h = magic.to_vec();
    h.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    h
}

pub(crate) struct Decoder<'a> {
    data: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> Decoder<'a> {
    pub fn new(data: &'a [u8], what: &'static str) -> Self {
        Decoder { data, pos: 0, what }
    }

    /// Checks magic and version.
    pub fn header(&mut self, magic: &'static [u8; 4], name: &'static str) -> Result<(), FormatError> {
        if self.data.len() < 4 || &self.data[..4] != magic {
            return Err(FormatError::BadMagic { expected: name });
        }
        self.pos = 4;
        let version = self.u32()?;
        if version != FORMAT_VERSION {
            return Err(FormatError::Version { found: version, expected: FORMAT_VERSION });
        }
        Ok(())
    }

    pub fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    pub fn is_empty(&self) -> bool {
        self.pos == self.data.len()
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        if self.remaining() < n {
            return Err(FormatError::Truncated(format!(
                "{} needs {n} more bytes at offset {} but only {} remain",
                self.what,
                self.pos,
                self.remaining()
            )));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }
    pub fn u32(&mut self) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    pub fn u64(&mut self) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    pub fn i32(&mut self) -> Result<i32, FormatError> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    pub fn f64(&mut self) -> Result<f64, FormatError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    /// A `u32` count whose elements occupy at least `min_elem_size` bytes each.
    pub fn count(&mut self, min_elem_size: usize) -> Result<usize, FormatError> {
        let n = self.u32()? as usize;
        if n.saturating_mul(min_elem_size) > self.remaining() {
            return Err(FormatError::Truncated(format!(
                "{} declares {n} entries but only {} bytes remain",
                self.what,
                self.remaining()
            )));
        }
        Ok(n)
    }
    pub fn str(&mut self) -> Result<String, FormatError> {
        let n = self.count(1)?;
        let bytes = self.take(n)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| FormatError::Corrupt(format!("{}: invalid UTF-8 string", self.what)))
    }
    pub fn vec3s(&mut self, n: usize) -> Result<Vec<Vec3<f64>>, FormatError> {
        if n.saturating_mul(24) > self.remaining() {
            self.take(n.saturating_mul(24))?;
        }
        (0..n).map(|_| Ok(Vec3::new(self.f64()?, self.f64()?, self.f64()?))).collect()
    }
    pub fn simbox(&mut self, kind: BoxKind) -> Result<SimBox<f64>, FormatError> {
        let v = self.vec3s(3)?;
        SimBox::from_vectors(kind, [v[0], v[1], v[2]]).map_err(|e| FormatError::Corrupt(format!("{}: {e}", self.what)))
    }
}
