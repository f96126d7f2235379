use std::io::Write;

use crate::formats::{EnergyRecord, EnergyWriter, FormatError, Frame, TrajectoryWriter};

/// Receives frames and energy records as a run produces them.
pub trait MdSink {
    fn frame(&mut self, frame: &Frame) -> Result<(), FormatError>;
    fn energy(&mut self, record: &EnergyRecord) -> Result<(), FormatError>;
    fn flush(&mut self) -> Result<(), FormatError> {
        Ok(())
    }
}

/// Keeps everything in memory.
#[derive(Debug, Default)]
pub struct MemorySink {
    pub frames: Vec<Frame>,
    pub energies: Vec<EnergyRecord>,
    /// Drop frames instead of storing them.
    pub skip_frames: bool,
}

impl MdSink for MemorySink {
    fn frame(&mut self, frame: &Frame) -> Result<(), FormatError> {
        if !self.skip_frames {
            self.frames.push(frame.clone());
        }
        Ok(())
    }

    fn energy(&mut self, record: &EnergyRecord) -> Result<(), FormatError> {
        self.energies.push(record.clone());
        Ok(())
    }
}

/// Streams frames and energies to writers; either side may be absent.
pub struct WriterSink<T: Write, E: Write> {
    pub trajectory: Option<TrajectoryWriter<T>>,
    pub energy: Option<EnergyWriter<E>>,
}

impl<T: Write, E: Write> WriterSink<T, E> {
    pub fn new(trajectory: Option<T>, energy: Option<E>) -> Result<Self, FormatError> {
        Ok(WriterSink {
            trajectory: trajectory.map(TrajectoryWriter::new).transpose()?,
            energy: energy.map(EnergyWriter::new).transpose()?,
        })
    }
}

impl<T: Write, E: Write> MdSink for WriterSink<T, E> {
    fn frame(&mut self, frame: &Frame) -> Result<(), FormatError> {
        match &mut self.trajectory {
            Some(w) => w.write_frame(frame),
            None => Ok(()),
        }
    }

    fn energy(&mut self, record: &EnergyRecord) -> Result<(), FormatError> {
        match &mut self.energy {
            Some(w) => w.write_record(record),
            None => Ok(()),
        }
    }

    fn flush(&mut self) -> Result<(), FormatError> {
        if let Some(w) = &mut self.trajectory {
            w.flush()?;
        }
        if let Some(w) = &mut self.energy {
            w.flush()?;
        }
        Ok(())
    }
}
