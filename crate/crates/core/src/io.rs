//! Versioned JSON artifact files.
//!
//! Every file is an envelope `{format, version, kind, payload}`. Rationals
//! are `[numerator, denominator]` pairs of decimal strings and bit vectors
//! are strings of `0`/`1`, so nothing depends on float or integer widths.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label_cover::{Hyperedge, LabelCoverInstance};
use crate::math::Rational;
use crate::modified_vs::ModifiedVectorSystem;
use crate::reduction::{CostSystem, Mode, ReductionInstance};
use crate::report::{serde_rat, GapReport, VerificationReport};
use crate::tensor::{SolveResult, TensorPath};
use crate::vector_systems::VectorSystem;

pub const FORMAT_NAME: &str = "gapforge";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelCoverFile {
    pub part_sizes: Vec<usize>,
    pub num_labels: usize,
    pub num_colors: usize,
    pub hyperedges: Vec<Hyperedge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorSystemFile {
    pub r: u64,
    pub arity: u32,
    pub embed: u32,
    pub directions: Vec<Vec<u32>>,
    pub color_ids: Vec<usize>,
    /// Row c·r + i is v_i^c.
    pub rows: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModifiedVsFile {
    pub q: usize,
    pub p: u32,
    pub d0: usize,
    /// Entry 2c + b is v_b^c.
    pub vectors: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ReductionFile {
    Finite { p: u32, source: LabelCoverFile, system: VectorSystemFile },
    Infinity { source: LabelCoverFile, system: ModifiedVsFile },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub params: BTreeMap<String, String>,
    pub k: u32,
    #[serde(with = "serde_rat")]
    pub best: Rational,
    pub witness: TensorPath,
    pub paths_enumerated: String,
    pub leaves_evaluated: u64,
}

impl SolveReport {
    pub fn new(inst: &ReductionInstance, k: u32, sol: &SolveResult) -> Self {
        let mut params = BTreeMap::new();
        let p = match inst.mode() {
            Mode::Finite { p } => p.to_string(),
            Mode::Infty => "inf".to_string(),
        };
        params.insert("p".into(), p);
        params.insert("r".into(), inst.r().to_string());
        params.insert("blocks".into(), inst.num_blocks().to_string());
        params.insert("labels".into(), inst.num_labels().to_string());
        params.insert("hyperedges".into(), inst.m().to_string());
        SolveReport {
            params,
            k,
            best: sol.best.clone(),
            witness: sol.witness.clone(),
            paths_enumerated: sol.paths_enumerated.to_string(),
            leaves_evaluated: sol.leaves_evaluated,
        }
    }
}

/// Anything that can live in a file.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    LabelCover(LabelCoverInstance),
    VectorSystem(VectorSystem),
    ModifiedVs(ModifiedVectorSystem),
    Reduction(ReductionInstance),
    SolveReport(SolveReport),
    GapReport(GapReport),
    VerificationReport(VerificationReport),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::LabelCover(_) => "label-cover",
            Artifact::VectorSystem(_) => "vector-system",
            Artifact::ModifiedVs(_) => "modified-vs",
            Artifact::Reduction(_) => "reduction",
            Artifact::SolveReport(_) => "solve-report",
            Artifact::GapReport(_) => "gap-report",
            Artifact::VerificationReport(_) => "verification-report",
        }
    }
}

fn bits_to_string<I: IntoIterator<Item = bool>>(bits: I) -> String {
    bits.into_iter().map(|b| if b { '1' } else { '0' }).collect()
}

fn string_to_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidArgument(format!("bit string contains {c:?}"))),
        })
        .collect()
}

impl From<&LabelCoverInstance> for LabelCoverFile {
    fn from(x: &LabelCoverInstance) -> Self {
        LabelCoverFile {
            part_sizes: x.part_sizes().to_vec(),
            num_labels: x.num_labels(),
            num_colors: x.num_colors(),
            hyperedges: x.hyperedges().to_vec(),
        }
    }
}

impl LabelCoverFile {
    pub fn build(self) -> Result<LabelCoverInstance> {
        LabelCoverInstance::new(self.part_sizes, self.num_labels, self.num_colors, self.hyperedges)
    }
}

impl From<&VectorSystem> for VectorSystemFile {
    fn from(s: &VectorSystem) -> Self {
        let r = s.r() as usize;
        let rows = (0..s.q())
            .flat_map(|c| (0..r).map(move |i| (i, c)))
            .map(|(i, c)| bits_to_string((0..s.d0()).map(|z| s.entry(i, c, z))))
            .collect();
        VectorSystemFile {
            r: s.r() as u64,
            arity: s.arity(),
            embed: s.embed(),
            directions: s.directions().to_vec(),
            color_ids: s.color_ids().to_vec(),
            rows,
        }
    }
}

impl VectorSystemFile {
    pub fn build(self) -> Result<VectorSystem> {
        let rows = self.rows.iter().map(|s| string_to_bits(s)).collect::<Result<Vec<_>>>()?;
        let allow_prime = !self.r.is_power_of_two();
        VectorSystem::from_parts(self.r, self.arity, self.embed, allow_prime, self.directions, self.color_ids, rows)
    }
}

impl From<&ModifiedVectorSystem> for ModifiedVsFile {
    fn from(s: &ModifiedVectorSystem) -> Self {
        ModifiedVsFile {
            q: s.q(),
            p: s.p(),
            d0: s.d0(),
            vectors: s.vectors().iter().map(|v| bits_to_string(v.iter().map(|&x| x == 1))).collect(),
        }
    }
}

impl ModifiedVsFile {
    pub fn build(self) -> Result<ModifiedVectorSystem> {
        let vectors = self
            .vectors
            .iter()
            .map(|s| Ok(string_to_bits(s)?.into_iter().map(u8::from).collect()))
            .collect::<Result<Vec<Vec<u8>>>>()?;
        ModifiedVectorSystem::new(self.q, self.p, self.d0, vectors)
    }
}

impl From<&ReductionInstance> for ReductionFile {
    fn from(x: &ReductionInstance) -> Self {
        let source = LabelCoverFile::from(x.source());
        match (x.mode(), x.system()) {
            (Mode::Finite { p }, CostSystem::Vector(s)) => ReductionFile::Finite { p, source, system: s.into() },
            (_, CostSystem::Modified(s)) => ReductionFile::Infinity { source, system: s.into() },
            (Mode::Infty, CostSystem::Vector(_)) => unreachable!("ℓ∞ reductions use modified systems"),
        }
    }
}

impl ReductionFile {
    pub fn build(self) -> Result<ReductionInstance> {
        match self {
            ReductionFile::Finite { p, source, system } => {
                let source = source.build()?;
                let system = system.build()?;
                let mismatch = system.r() as usize != source.r();
                ReductionInstance::build_base(&source, p, &system, mismatch)
            }
            ReductionFile::Infinity { source, system } => {
                ReductionInstance::build_base_infty(&source.build()?, &system.build()?)
            }
        }
    }
}

#[derive(Serialize)]
struct EnvelopeOut<'a, T: Serialize> {
    format: &'a str,
    version: u32,
    kind: &'a str,
    payload: T,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
    kind: String,
}

#[derive(Deserialize)]
struct EnvelopeIn<T> {
    payload: T,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() }
}

fn emit<T: Serialize>(kind: &str, payload: T) -> String {
    let env = EnvelopeOut { format: FORMAT_NAME, version: FORMAT_VERSION, kind, payload };
    let mut s = serde_json::to_string_pretty(&env).expect("artifact serializes");
    s.push('\n');
    s
}

/// Canonical text of an artifact.
pub fn to_string(a: &Artifact) -> String {
    match a {
        Artifact::LabelCover(x) => emit(a.kind(), LabelCoverFile::from(x)),
        Artifact::VectorSystem(x) => emit(a.kind(), VectorSystemFile::from(x)),
        Artifact::ModifiedVs(x) => emit(a.kind(), ModifiedVsFile::from(x)),
        Artifact::Reduction(x) => emit(a.kind(), ReductionFile::from(x)),
        Artifact::SolveReport(x) => emit(a.kind(), x),
        Artifact::GapReport(x) => emit(a.kind(), x),
        Artifact::VerificationReport(x) => emit(a.kind(), x),
    }
}

fn payload<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str::<EnvelopeIn<T>>(text).map_err(json_error)?.payload)
}

/// Parse and validate an artifact.
pub fn from_str(text: &str) -> Result<Artifact> {
    let header: Header = serde_json::from_str(text).map_err(json_error)?;
    if header.format != FORMAT_NAME {
        return Err(Error::Kind { expected: FORMAT_NAME.into(), found: header.format });
    }
    if header.version != FORMAT_VERSION {
        return Err(Error::Version { found: header.version, expected: FORMAT_VERSION });
    }
    Ok(match header.kind.as_str() {
        "label-cover" => Artifact::LabelCover(payload::<LabelCoverFile>(text)?.build()?),
        "vector-system" => Artifact::VectorSystem(payload::<VectorSystemFile>(text)?.build()?),
        "modified-vs" => Artifact::ModifiedVs(payload::<ModifiedVsFile>(text)?.build()?),
        "reduction" => Artifact::Reduction(payload::<ReductionFile>(text)?.build()?),
        "solve-report" => Artifact::SolveReport(payload(text)?),
        "gap-report" => Artifact::GapReport(payload(text)?),
        "verification-report" => Artifact::VerificationReport(payload(text)?),
        other => return Err(Error::Kind { expected: "a known artifact kind".into(), found: other.into() }),
    })
}

pub fn save(a: &Artifact, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(a))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Artifact> {
    from_str(&std::fs::read_to_string(path)?)
}

fn wrong(expected: &str, a: &Artifact) -> Error {
    Error::Kind { expected: expected.into(), found: a.kind().into() }
}

macro_rules! typed_loader {
    ($name:ident, $variant:ident, $ty:ty, $kind:literal) => {
        pub fn $name(text: &str) -> Result<$ty> {
            match from_str(text)? {
                Artifact::$variant(x) => Ok(x),
                other => Err(wrong($kind, &other)),
            }
        }
    };
}

typed_loader!(parse_label_cover, LabelCover, LabelCoverInstance, "label-cover");
typed_loader!(parse_vector_system, VectorSystem, VectorSystem, "vector-system");
typed_loader!(parse_modified_vs, ModifiedVs, ModifiedVectorSystem, "modified-vs");
typed_loader!(parse_reduction, Reduction, ReductionInstance, "reduction");
