use super::container::{header, Decoder, Encoder};
use super::mdp::{Integrator, MdpParams};
use super::FormatError;
use crate::prep::RunInput;
use crate::system::{Angle, Atom, Bond, BoxKind, MoleculeBlock, Structure, Topology};

pub const RUNINPUT_MAGIC: &[u8; 4] = b"MRUN";

/// Serializes a run input: magic, version, `u64` payload length, payload.
pub fn write_runinput(run: &RunInput) -> Result<Vec<u8>, FormatError> {
    let mut enc = Encoder::default();
    encode_structure(&mut enc, run.structure())?;
    encode_topology(&mut enc, run.topology())?;
    encode_params(&mut enc, run.params());
    let mut out = header(RUNINPUT_MAGIC);
    out.extend_from_slice(&(enc.buf.len() as u64).to_le_bytes());
    out.extend_from_slice(&enc.buf);
    Ok(out)
}

pub fn read_runinput(data: &[u8]) -> Result<RunInput, FormatError> {
    let mut dec = Decoder::new(data, "run input");
    dec.header(RUNINPUT_MAGIC, "MRUN")?;
    let len = dec.u64()?;
    if len > dec.remaining() as u64 {
        return Err(FormatError::Truncated(format!(
            "run input declares a {len}-byte payload but only {} bytes follow",
            dec.remaining()
        )));
    }
    if len < dec.remaining() as u64 {
        return Err(FormatError::Corrupt(format!(
            "{} trailing bytes after the {len}-byte payload",
            dec.remaining() as u64 - len
        )));
    }
    let structure = decode_structure(&mut dec)?;
    let topology = decode_topology(&mut dec)?;
    let params = decode_params(&mut dec)?;
    if !dec.is_empty() {
        return Err(FormatError::Corrupt("payload longer than its contents".into()));
    }
    RunInput::from_parts(structure, topology, params).map_err(|e| FormatError::Corrupt(e.to_string()))
}

fn encode_structure(enc: &mut Encoder, s: &Structure) -> Result<(), FormatError> {
    enc.str(&s.title)?;
    enc.count(s.atoms.len())?;
    for a in &s.atoms {
        enc.str(&a.name)?;
        enc.str(&a.element)?;
        enc.str(&a.residue_name)?;
        enc.i32(a.residue_seq);
        for v in [a.mass, a.charge, a.sigma, a.epsilon, a.vdw_radius] {
            enc.f64(v);
        }
    }
    enc.vec3s(&s.positions);
    match &s.velocities {
        Some(v) => {
            enc.u8(1);
            enc.vec3s(v);
        }
        None => enc.u8(0),
    }
    match &s.simbox {
        Some(b) => {
            enc.u8(1);
            enc.u32(b.kind().code());
            enc.simbox(b);
        }
        None => enc.u8(0),
    }
    Ok(())
}

fn decode_structure(dec: &mut Decoder<'_>) -> Result<Structure, FormatError> {
    let title = dec.str()?;
    let n = dec.count(56)?;
    let mut atoms = Vec::with_capacity(n);
    for _ in 0..n {
        let name = dec.str()?;
        let element = dec.str()?;
        let residue_name = dec.str()?;
        let residue_seq = dec.i32()?;
        let [mass, charge, sigma, epsilon, vdw_radius] = [dec.f64()?, dec.f64()?, dec.f64()?, dec.f64()?, dec.f64()?];
        atoms.push(Atom { name, element, residue_name, residue_seq, mass, charge, sigma, epsilon, vdw_radius });
    }
    let positions = dec.vec3s(n)?;
    let velocities = match dec.u8()? {
        0 => None,
        1 => Some(dec.vec3s(n)?),
        f => return Err(FormatError::Corrupt(format!("bad velocity flag {f}"))),
    };
    let simbox = match dec.u8()? {
        0 => None,
        1 => {
            let code = dec.u32()?;
            let kind = BoxKind::from_code(code).ok_or_else(|| FormatError::Corrupt(format!("bad box kind {code}")))?;
            Some(dec.simbox(kind)?)
        }
        f => return Err(FormatError::Corrupt(format!("bad box flag {f}"))),
    };
    Ok(Structure { title, atoms, positions, velocities, simbox })
}

fn encode_topology(enc: &mut Encoder, t: &Topology) -> Result<(), FormatError> {
    let idx = |enc: &mut Encoder, i: usize| enc.count(i);
    enc.count(t.bonds.len())?;
    for b in &t.bonds {
        idx(enc, b.i)?;
        idx(enc, b.j)?;
        enc.f64(b.kb);
        enc.f64(b.r0);
    }
    enc.count(t.angles.len())?;
    for a in &t.angles {
        idx(enc, a.i)?;
        idx(enc, a.j)?;
        idx(enc, a.k)?;
        enc.f64(a.ka);
        enc.f64(a.theta0);
    }
    enc.count(t.exclusions.len())?;
    for ex in &t.exclusions {
        enc.count(ex.len())?;
        for &j in ex {
            idx(enc, j)?;
        }
    }
    enc.count(t.blocks.len())?;
    for b in &t.blocks {
        enc.str(&b.name)?;
        idx(enc, b.first_atom)?;
        idx(enc, b.atom_count)?;
        idx(enc, b.copies)?;
    }
    enc.u8(t.expanded as u8);
    Ok(())
}

fn decode_topology(dec: &mut Decoder<'_>) -> Result<Topology, FormatError> {
    let nb = dec.count(24)?;
    let bonds = (0..nb)
        .map(|_| Ok(Bond { i: dec.u32()? as usize, j: dec.u32()? as usize, kb: dec.f64()?, r0: dec.f64()? }))
        .collect::<Result<_, FormatError>>()?;
    let na = dec.count(28)?;
    let angles = (0..na)
        .map(|_| {
            Ok(Angle {
                i: dec.u32()? as usize,
                j: dec.u32()? as usize,
                k: dec.u32()? as usize,
                ka: dec.f64()?,
                theta0: dec.f64()?,
            })
        })
        .collect::<Result<_, FormatError>>()?;
    let ne = dec.count(4)?;
    let mut exclusions = Vec::with_capacity(ne);
    for _ in 0..ne {
        let k = dec.count(4)?;
        exclusions.push((0..k).map(|_| Ok(dec.u32()? as usize)).collect::<Result<Vec<_>, FormatError>>()?);
    }
    let nblk = dec.count(16)?;
    let blocks = (0..nblk)
        .map(|_| {
            Ok(MoleculeBlock {
                name: dec.str()?,
                first_atom: dec.u32()? as usize,
                atom_count: dec.u32()? as usize,
                copies: dec.u32()? as usize,
            })
        })
        .collect::<Result<_, FormatError>>()?;
    let expanded = dec.u8()? != 0;
    Ok(Topology { bonds, angles, exclusions, blocks, expanded })
}

fn encode_params(enc: &mut Encoder, p: &MdpParams) {
    enc.u32(match p.integrator {
        Integrator::Steep => 0,
        Integrator::Md => 1,
    });
    enc.u64(p.nsteps);
    for v in [p.dt, p.emtol, p.emstep, p.rcut] {
        enc.f64(v);
    }
    enc.u64(p.nstxout);
    enc.u64(p.nstenergy);
    enc.u8(p.gen_vel as u8);
    enc.f64(p.gen_temp);
    enc.u64(p.gen_seed);
}

fn decode_params(dec: &mut Decoder<'_>) -> Result<MdpParams, FormatError> {
    let integrator = match dec.u32()? {
        0 => Integrator::Steep,
        1 => Integrator::Md,
        k => return Err(FormatError::Corrupt(format!("bad integrator code {k}"))),
    };
    Ok(MdpParams {
        integrator,
        nsteps: dec.u64()?,
        dt: dec.f64()?,
        emtol: dec.f64()?,
        emstep: dec.f64()?,
        rcut: dec.f64()?,
        nstxout: dec.u64()?,
        nstenergy: dec.u64()?,
        gen_vel: dec.u8()? != 0,
        gen_temp: dec.f64()?,
        gen_seed: dec.u64()?,
    })
}
