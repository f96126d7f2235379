use std::io::Write;

use super::container::{header, Decoder, Encoder};
use super::FormatError;

pub const ENERGY_MAGIC: &[u8; 4] = b"MENE";

/// Energies at one step. `terms` holds the potential decomposition in a fixed
/// order (LJ, Coulomb, Bond, Angle for the engine's records).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyRecord {
    pub step: u64,
    /// ps
    pub time: f64,
    pub potential: f64,
    pub kinetic: f64,
    pub total: f64,
    /// K
    pub temperature: f64,
    pub terms: Vec<(String, f64)>,
}

impl EnergyRecord {
    /// Looks up a quantity by name: a term, or one of `Potential`, `Kinetic`,
    /// `Total`, `Temperature` (case-insensitive).
    pub fn get(&self, name: &str) -> Option<f64> {
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "potential" => Some(self.potential),
            "kinetic" | "kinetic-en." | "kinetic energy" => Some(self.kinetic),
            "total" | "total-energy" | "total energy" => Some(self.total),
            "temperature" => Some(self.temperature),
            _ => self.terms.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|&(_, v)| v),
        }
    }

    /// Names [`EnergyRecord::get`] understands for this record.
    pub fn available(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(n, _)| n.clone())
            .chain(["Potential", "Kinetic", "Total", "Temperature"].map(String::from))
            .collect()
    }

    fn encode(&self, enc: &mut Encoder) -> Result<(), FormatError> {
        enc.u64(self.step);
        for v in [self.time, self.potential, self.kinetic, self.total, self.temperature] {
            enc.f64(v);
        }
        enc.count(self.terms.len())?;
        for (name, v) in &self.terms {
            enc.str(name)?;
            enc.f64(*v);
        }
        Ok(())
    }

    fn decode(dec: &mut Decoder<'_>) -> Result<Self, FormatError> {
        let step = dec.u64()?;
        let [time, potential, kinetic, total, temperature] = [dec.f64()?, dec.f64()?, dec.f64()?, dec.f64()?, dec.f64()?];
        let n = dec.count(12)?;
        let terms = (0..n).map(|_| Ok((dec.str()?, dec.f64()?))).collect::<Result<_, FormatError>>()?;
        Ok(EnergyRecord { step, time, potential, kinetic, total, temperature, terms })
    }
}

/// Energy records in step order.
pub type EnergySeries = Vec<EnergyRecord>;

/// Streaming energy writer; whole records per `write_all`.
pub struct EnergyWriter<W: Write> {
    out: W,
}

impl<W: Write> EnergyWriter<W> {
    pub fn new(mut out: W) -> Result<Self, FormatError> {
        out.write_all(&header(ENERGY_MAGIC))?;
        Ok(EnergyWriter { out })
    }

    pub fn write_record(&mut self, record: &EnergyRecord) -> Result<(), FormatError> {
        let mut enc = Encoder::default();
        record.encode(&mut enc)?;
        self.out.write_all(&enc.buf)?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), FormatError> {
        self.out.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// Iterates records of an in-memory energy file.
pub struct EnergyReader<'a> {
    dec: Decoder<'a>,
    failed: bool,
}

impl<'a> EnergyReader<'a> {
    pub fn new(data: &'a [u8]) -> Result<Self, FormatError> {
        let mut dec = Decoder::new(data, "energy file");
        dec.header(ENERGY_MAGIC, "MENE")?;
        Ok(EnergyReader { dec, failed: false })
    }
}

impl Iterator for EnergyReader<'_> {
    type Item = Result<EnergyRecord, FormatError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.dec.is_empty() {
            return None;
        }
        let r = EnergyRecord::decode(&mut self.dec);
        self.failed = r.is_err();
        Some(r)
    }
}

pub fn write_energy(records: &[EnergyRecord]) -> Result<Vec<u8>, FormatError> {
    let mut w = EnergyWriter::new(Vec::new())?;
    for r in records {
        w.write_record(r)?;
    }
    Ok(w.into_inner())
}

pub fn read_energy(data: &[u8]) -> Result<EnergySeries, FormatError> {
    EnergyReader::new(data)?.collect()
}
