use std::io::Write;

use super::container::{header, Decoder, Encoder};
use super::FormatError;
use crate::system::{BoxKind, SimBox, Vec3};

pub const TRAJECTORY_MAGIC: &[u8; 4] = b"MTRJ";

const HAS_VELOCITIES: u32 = 1;
const HAS_FORCES: u32 = 2;
const KIND_SHIFT: u32 = 8;

/// One trajectory frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub step: u64,
    /// ps
    pub time: f64,
    pub positions: Vec<Vec3<f64>>,
    pub velocities: Option<Vec<Vec3<f64>>>,
    pub forces: Option<Vec<Vec3<f64>>>,
    pub simbox: SimBox<f64>,
}

impl Frame {
    fn encode(&self, enc: &mut Encoder) -> Result<(), FormatError> {
        let n = self.positions.len();
        for (what, v) in [("velocities", &self.velocities), ("forces", &self.forces)] {
            if let Some(v) = v {
                if v.len() != n {
                    return Err(FormatError::Unwritable(format!("frame {}: {what} length {} != {n}", self.step, v.len())));
                }
            }
        }
        let mut flags = self.simbox.kind().code() << KIND_SHIFT;
        if self.velocities.is_some() {
            flags |= HAS_VELOCITIES;
        }
        if self.forces.is_some() {
            flags |= HAS_FORCES;
        }
        enc.u64(self.step);
        enc.f64(self.time);
        enc.count(n)?;
        enc.u32(flags);
        enc.simbox(&self.simbox);
        enc.vec3s(&self.positions);
        if let Some(v) = &self.velocities {
            enc.vec3s(v);
        }
        if let Some(f) = &self.forces {
            enc.vec3s(f);
        }
        Ok(())
    }

    fn decode(dec: &mut Decoder<'_>) -> Result<Frame, FormatError> {
        let step = dec.u64()?;
        let time = dec.f64()?;
        let n = dec.u32()? as usize;
        let flags = dec.u32()?;
        let kind = BoxKind::from_code(flags >> KIND_SHIFT)
            .ok_or_else(|| FormatError::Corrupt(format!("frame {step}: unknown box kind in flags {flags:#x}")))?;
        let simbox = dec.simbox(kind)?;
        let positions = dec.vec3s(n)?;
        let velocities = if flags & HAS_VELOCITIES != 0 { Some(dec.vec3s(n)?) } else { None };
        let forces = if flags & HAS_FORCES != 0 { Some(dec.vec3s(n)?) } else { None };
        Ok(Frame { step, time, positions, velocities, forces, simbox })
    }
}

/// Streaming trajectory writer. Each frame is written with a single
/// `write_all`, so a file cut short by a crash holds only whole frames.
pub struct TrajectoryWriter<W: Write> {
    out: W,
    last_step: Option<u64>,
}

impl<W: Write> TrajectoryWriter<W> {
    pub fn new(mut out: W) -> Result<Self, FormatError> {
        out.write_all(&header(TRAJECTORY_MAGIC))?;
        Ok(TrajectoryWriter { out, last_step: None })
    }

    pub fn write_frame(&mut self, frame: &Frame) -> Result<(), FormatError> {
        if let Some(last) = self.last_step {
            if frame.step < last {
                return Err(FormatError::Unwritable(format!("frame step {} after step {last}", frame.step)));
            }
        }
        let mut enc = Encoder::default();
        frame.encode(&mut enc)?;
        self.out.write_all(&enc.buf)?;
        self.last_step = Some(frame.step);
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

/// Iterates frames of an in-memory trajectory file.
pub struct TrajectoryReader<'a> {
    dec: Decoder<'a>,
    failed: bool,
}

impl<'a> TrajectoryReader<'a> {
    pub fn new(data: &'a [u8]) -> Result<Self, FormatError> {
        let mut dec = Decoder::new(data, "trajectory");
        dec.header(TRAJECTORY_MAGIC, "MTRJ")?;
        Ok(TrajectoryReader { dec, failed: false })
    }
}

impl Iterator for TrajectoryReader<'_> {
    type Item = Result<Frame, FormatError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.dec.is_empty() {
            return None;
        }
        let r = Frame::decode(&mut self.dec);
        self.failed = r.is_err();
        Some(r)
    }
}

pub fn write_trajectory(frames: &[Frame]) -> Result<Vec<u8>, FormatError> {
    let mut w = TrajectoryWriter::new(Vec::new())?;
    for f in frames {
        w.write_frame(f)?;
    }
    Ok(w.into_inner())
}

pub fn read_trajectory(data: &[u8]) -> Result<Vec<Frame>, FormatError> {
    TrajectoryReader::new(data)?.collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_frames() -> impl Strategy<Value = Vec<Frame>> {
        let frame = (0usize..6, any::<bool>(), any::<bool>(), proptest::collection::vec(any::<f64>(), 60));
        proptest::collection::vec(frame, 0..4).prop_map(|specs| {
            specs
                .into_iter()
                .enumerate()
                .map(|(k, (n, hv, hf, raw))| {
                    let v3 = |o: usize| (0..n).map(|i| Vec3::new(raw[o + 3 * i], raw[o + 3 * i + 1], raw[o + 3 * i + 2])).collect::<Vec<_>>();
                    Frame {
                        step: 10 * k as u64,
                        time: raw[59],
                        positions: v3(0),
                        velocities: hv.then(|| v3(18)),
                        forces: hf.then(|| v3(36)),
                        simbox: SimBox::from_type(BoxKind::Octahedron, 2.5).unwrap(),
                    }
                })
                .collect()
        })
    }

    fn bits(frames: &[Frame]) -> Vec<u64> {
        let mut out = Vec::new();
        for f in frames {
            out.extend([f.step, f.time.to_bits(), f.positions.len() as u64]);
            for set in [Some(&f.positions), f.velocities.as_ref(), f.forces.as_ref()].into_iter().flatten() {
                out.extend(set.iter().flat_map(|p| [p.x.to_bits(), p.y.to_bits(), p.z.to_bits()]));
            }
        }
        out
    }

    #[test]
    fn zero_frames_is_eight_bytes() {
        let data = write_trajectory(&[]).unwrap();
        assert_eq!(data.len(), 8);
        assert!(read_trajectory(&data).unwrap().is_empty());
    }

    #[test]
    fn bad_magic_and_version() {
        assert!(matches!(read_trajectory(b""), Err(FormatError::BadMagic { .. })));
        assert!(matches!(read_trajectory(b"MENE\x01\0\0\0"), Err(FormatError::BadMagic { .. })));
        assert!(matches!(read_trajectory(b"MTRJ\x07\0\0\0"), Err(FormatError::Version { found: 7, .. })));
    }

    #[test]
    fn steps_must_not_decrease() {
        let f = Frame {
            step: 5,
            time: 0.0,
            positions: vec![],
            velocities: None,
            forces: None,
            simbox: SimBox::from_type(BoxKind::Cubic, 1.0).unwrap(),
        };
        let mut w = TrajectoryWriter::new(Vec::new()).unwrap();
        w.write_frame(&f).unwrap();
        assert!(w.write_frame(&Frame { step: 4, ..f }).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(frames in arb_frames()) {
            let data = write_trajectory(&frames).unwrap();
            let back = read_trajectory(&data).unwrap();
            prop_assert_eq!(bits(&back), bits(&frames));
            prop_assert_eq!(back.len(), frames.len());
        }

        #[test]
        fn truncation_inside_a_frame_is_detected(frames in arb_frames(), cut in any::<prop::sample::Index>()) {
            let data = write_trajectory(&frames).unwrap();
            let cut = cut.index(data.len());
            // frame boundaries are the only prefixes that read cleanly
            let mut boundaries = vec![8usize];
            for k in 0..frames.len() {
                boundaries.push(write_trajectory(&frames[..=k]).unwrap().len());
            }
            match read_trajectory(&data[..cut]) {
                Ok(read) => {
                    let k = boundaries.iter().position(|&b| b == cut);
                    prop_assert!(k.is_some(), "prefix of {} bytes read without error", cut);
                    prop_assert_eq!(read.len(), k.unwrap());
                }
                Err(_) => prop_assert!(!boundaries.contains(&cut)),
            }
        }
    }
}
