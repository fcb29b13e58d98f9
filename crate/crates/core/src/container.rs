//! Binary container for parameters, keys, outputs and ciphertexts.
//!
//! Layout, all integers big-endian:
//!
//! ```text
//! magic "HTDF" | version u8 | backend u8 | kind u8 | modulus u64 (0 = secure)
//! d u32 | n u32 | μ u32 | level u32 | mode u8 (0xFF = none) | l u32
//! count u32 | count × (len u32 | bytes)
//! ```
//!
//! For the HPE kinds the mode byte holds the variant (0 full, 1 predicate-only).
//! Elements use the backend's own encoding. Bit strings are packed little-endian within
//! each byte.

use crate::error::{Error, Result};
use crate::groups::{BackendTag, GroupSuite};
use crate::hibe::{HibeCiphertext, HibePublicKey, PairwiseHash};
use crate::hibtdf::{
    HfMasterPublicKey, HfMasterSecretKey, HfOutput, HfParams, HfSecretKey, HierId, Mode,
};
use crate::dethibe::DetCiphertext;
use crate::hpe::{
    self, Ciphertext, DecryptionKey, DelegationLevel, HpeParams, KeyComponents, Variant,
};

pub const MAGIC: &[u8; 4] = b"HTDF";
pub const VERSION: u8 = 1;
const NO_MODE: u8 = 0xFF;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Params,
    Mpk,
    Msk,
    Sk,
    HfOutput,
    HibeCt,
    DetCt,
    HpeMpk,
    HpeMsk,
    HpeSk,
    HpeCt,
}

const KINDS: [Kind; 11] = [
    Kind::Params,
    Kind::Mpk,
    Kind::Msk,
    Kind::Sk,
    Kind::HfOutput,
    Kind::HibeCt,
    Kind::DetCt,
    Kind::HpeMpk,
    Kind::HpeMsk,
    Kind::HpeSk,
    Kind::HpeCt,
];

impl Kind {
    pub fn as_u8(self) -> u8 {
        KINDS.iter().position(|k| *k == self).unwrap() as u8
    }

    pub fn from_u8(v: u8) -> Option<Kind> {
        KINDS.get(v as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Params => "params",
            Kind::Mpk => "mpk",
            Kind::Msk => "msk",
            Kind::Sk => "sk",
            Kind::HfOutput => "hf-output",
            Kind::HibeCt => "hibe-ct",
            Kind::DetCt => "det-ct",
            Kind::HpeMpk => "hpe-mpk",
            Kind::HpeMsk => "hpe-msk",
            Kind::HpeSk => "hpe-sk",
            Kind::HpeCt => "hpe-ct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub backend: BackendTag,
    pub kind: Kind,
    pub modulus: u64,
    pub depth: u32,
    pub n: u32,
    pub width: u32,
    pub level: u32,
    pub mode: Option<u8>,
    pub l: u32,
}

impl Header {
    pub fn mode(&self) -> Result<Mode> {
        self.mode
            .and_then(Mode::from_u8)
            .ok_or_else(|| Error::Container("header carries no identity mode".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub header: Header,
    pub elements: Vec<Vec<u8>>,
}

fn take<'a>(bytes: &mut &'a [u8], len: usize) -> Result<&'a [u8]> {
    if bytes.len() < len {
        return Err(Error::Container("truncated container".into()));
    }
    let (head, rest) = bytes.split_at(len);
    *bytes = rest;
    Ok(head)
}

fn take_u8(bytes: &mut &[u8]) -> Result<u8> {
    Ok(take(bytes, 1)?[0])
}

fn take_u32(bytes: &mut &[u8]) -> Result<u32> {
    Ok(u32::from_be_bytes(take(bytes, 4)?.try_into().unwrap()))
}

fn take_u64(bytes: &mut &[u8]) -> Result<u64> {
    Ok(u64::from_be_bytes(take(bytes, 8)?.try_into().unwrap()))
}

impl Container {
    pub fn encode(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(h.backend.as_u8());
        out.push(h.kind.as_u8());
        out.extend_from_slice(&h.modulus.to_be_bytes());
        for v in [h.depth, h.n, h.width, h.level] {
            out.extend_from_slice(&v.to_be_bytes());
        }
        out.push(h.mode.unwrap_or(NO_MODE));
        out.extend_from_slice(&h.l.to_be_bytes());
        out.extend_from_slice(&(self.elements.len() as u32).to_be_bytes());
        for e in &self.elements {
            out.extend_from_slice(&(e.len() as u32).to_be_bytes());
            out.extend_from_slice(e);
        }
        out
    }

    pub fn decode(mut bytes: &[u8]) -> Result<Container> {
        let b = &mut bytes;
        if take(b, 4)? != MAGIC {
            return Err(Error::Container("bad magic bytes".into()));
        }
        let version = take_u8(b)?;
        if version != VERSION {
            return Err(Error::Container(format!(
                "unsupported format version {version}, expected {VERSION}"
            )));
        }
        let backend = BackendTag::from_u8(take_u8(b)?)
            .ok_or_else(|| Error::Container("unknown backend tag".into()))?;
        let kind = Kind::from_u8(take_u8(b)?)
            .ok_or_else(|| Error::Container("unknown object kind".into()))?;
        let modulus = take_u64(b)?;
        let depth = take_u32(b)?;
        let n = take_u32(b)?;
        let width = take_u32(b)?;
        let level = take_u32(b)?;
        let mode = match take_u8(b)? {
            NO_MODE => None,
            m => Some(m),
        };
        let l = take_u32(b)?;
        let count = take_u32(b)? as usize;
        let mut elements = Vec::with_capacity(count.min(b.len() / 4));
        for _ in 0..count {
            let len = take_u32(b)? as usize;
            elements.push(take(b, len)?.to_vec());
        }
        if !b.is_empty() {
            return Err(Error::Container("trailing bytes after the last element".into()));
        }
        Ok(Container {
            header: Header {
                backend,
                kind,
                modulus,
                depth,
                n,
                width,
                level,
                mode,
                l,
            },
            elements,
        })
    }

    /// Decodes and checks the object kind.
    pub fn decode_kind(bytes: &[u8], kind: Kind) -> Result<Container> {
        let c = Container::decode(bytes)?;
        if c.header.kind != kind {
            return Err(Error::Container(format!(
                "expected a {} container, found {}",
                kind.name(),
                c.header.kind.name()
            )));
        }
        Ok(c)
    }
}

pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, b) in bits.iter().enumerate() {
        if *b {
            out[i / 8] |= 1 << (i % 8);
        }
    }
    out
}

pub fn unpack_bits(bytes: &[u8], len: usize) -> Result<Vec<bool>> {
    if bytes.len() != len.div_ceil(8) {
        return Err(Error::Container(format!(
            "bit string of {len} bits needs {} bytes, found {}",
            len.div_ceil(8),
            bytes.len()
        )));
    }
    let bits: Vec<bool> = (0..bytes.len() * 8).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect();
    if bits[len..].iter().any(|b| *b) {
        return Err(Error::Container("nonzero padding bits".into()));
    }
    Ok(bits[..len].to_vec())
}

/// Element serializer bound to a suite.
struct Writer<'a, S: GroupSuite> {
    suite: &'a S,
    out: Vec<Vec<u8>>,
}

impl<'a, S: GroupSuite> Writer<'a, S> {
    fn new(suite: &'a S) -> Self {
        Writer {
            suite,
            out: Vec::new(),
        }
    }
    fn scalar(&mut self, x: &S::Scalar) {
        self.out.push(self.suite.encode_scalar(x));
    }
    fn g1(&mut self, x: &S::G1) {
        self.out.push(self.suite.encode_g1(x));
    }
    fn g1s<'b>(&mut self, xs: impl IntoIterator<Item = &'b S::G1>)
    where
        S::G1: 'b,
    {
        xs.into_iter().for_each(|x| self.g1(x));
    }
    fn g2(&mut self, x: &S::G2) {
        self.out.push(self.suite.encode_g2(x));
    }
    fn g2s<'b>(&mut self, xs: impl IntoIterator<Item = &'b S::G2>)
    where
        S::G2: 'b,
    {
        xs.into_iter().for_each(|x| self.g2(x));
    }
    fn gt(&mut self, x: &S::Gt) {
        self.out.push(self.suite.encode_gt(x));
    }
    fn raw(&mut self, bytes: Vec<u8>) {
        self.out.push(bytes);
    }
}

struct Reader<'a, S: GroupSuite> {
    suite: &'a S,
    elems: std::slice::Iter<'a, Vec<u8>>,
}

impl<'a, S: GroupSuite> Reader<'a, S> {
    fn new(suite: &'a S, c: &'a Container) -> Self {
        Reader {
            suite,
            elems: c.elements.iter(),
        }
    }
    fn raw(&mut self) -> Result<&'a [u8]> {
        self.elems
            .next()
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Container("too few elements".into()))
    }
    fn scalar(&mut self) -> Result<S::Scalar> {
        let b = self.raw()?;
        self.suite.decode_scalar(b)
    }
    fn g1(&mut self) -> Result<S::G1> {
        let b = self.raw()?;
        self.suite.decode_g1(b)
    }
    fn g1s(&mut self, count: usize) -> Result<Vec<S::G1>> {
        (0..count).map(|_| self.g1()).collect()
    }
    fn g2(&mut self) -> Result<S::G2> {
        let b = self.raw()?;
        self.suite.decode_g2(b)
    }
    fn g2s(&mut self, count: usize) -> Result<Vec<S::G2>> {
        (0..count).map(|_| self.g2()).collect()
    }
    fn gt(&mut self) -> Result<S::Gt> {
        let b = self.raw()?;
        self.suite.decode_gt(b)
    }
    fn finish(mut self) -> Result<()> {
        if self.elems.next().is_some() {
            return Err(Error::Container("unexpected extra elements".into()));
        }
        Ok(())
    }
}

fn header_for<S: GroupSuite>(suite: &S, kind: Kind) -> Header {
    Header {
        backend: suite.backend(),
        kind,
        modulus: suite.transparent_modulus().unwrap_or(0),
        depth: 0,
        n: 0,
        width: 0,
        level: 0,
        mode: None,
        l: 0,
    }
}

fn hf_header<S: GroupSuite>(params: &HfParams<S>, kind: Kind) -> Header {
    Header {
        depth: params.depth as u32,
        n: params.n as u32,
        width: params.width as u32,
        mode: Some(params.mode.as_u8()),
        ..header_for(&params.suite, kind)
    }
}

/// Checks that a container was written for this suite and HF parameter set.
fn check_hf_header<S: GroupSuite>(params: &HfParams<S>, h: &Header) -> Result<()> {
    check_suite(&params.suite, h)?;
    if h.depth as usize != params.depth
        || h.n as usize != params.n
        || h.width as usize != params.width
        || h.mode != Some(params.mode.as_u8())
    {
        return Err(Error::Container(format!(
            "{} was written for d={}, n={}, μ={}, which differs from the parameters",
            h.kind.name(),
            h.depth,
            h.n,
            h.width
        )));
    }
    Ok(())
}

pub fn check_suite<S: GroupSuite>(suite: &S, h: &Header) -> Result<()> {
    if h.backend != suite.backend() || h.modulus != suite.transparent_modulus().unwrap_or(0) {
        return Err(Error::Container(format!(
            "container belongs to the {} backend with modulus {}",
            h.backend.name(),
            h.modulus
        )));
    }
    Ok(())
}

fn require_kind(h: &Header, kind: Kind) -> Result<()> {
    if h.kind != kind {
        return Err(Error::Container(format!(
            "expected a {} container, found {}",
            kind.name(),
            h.kind.name()
        )));
    }
    Ok(())
}

// ---- HF parameters ----

pub fn params_to_container<S: GroupSuite>(params: &HfParams<S>) -> Container {
    Container {
        header: hf_header(params, Kind::Params),
        elements: Vec::new(),
    }
}

/// Rebuilds parameters for a suite matching the container's backend tag.
pub fn params_from_container<S: GroupSuite>(suite: S, c: &Container) -> Result<HfParams<S>> {
    require_kind(&c.header, Kind::Params)?;
    check_suite(&suite, &c.header)?;
    let h = &c.header;
    crate::hibtdf::hf_setup(suite, h.depth as usize, h.n as usize, h.width as usize, h.mode()?)
}

// ---- HF master keys ----

/// Encodes an HF public key; with `hash`, the HIBE public key built on it.
pub fn mpk_to_container<S: GroupSuite>(
    params: &HfParams<S>,
    mpk: &HfMasterPublicKey<S>,
    hash: Option<&PairwiseHash>,
) -> Container {
    let mut w = Writer::new(&params.suite);
    w.g1(&mpk.v);
    w.g1s(&mpk.w);
    w.g1s(mpk.h.iter().flatten().flatten());
    w.g1s(&mpk.j);
    w.g1s(mpk.c_w.iter().flatten());
    w.g1s(mpk.c.iter().flatten().flatten().flatten());
    let mut header = hf_header(params, Kind::Mpk);
    if let Some(hash) = hash {
        header.l = hash.output_len() as u32;
        for row in &hash.rows {
            w.raw(pack_bits(row));
        }
        w.raw(pack_bits(&hash.offset));
    }
    Container {
        header,
        elements: w.out,
    }
}

pub fn mpk_from_container<S: GroupSuite>(
    params: &HfParams<S>,
    c: &Container,
) -> Result<(HfMasterPublicKey<S>, Option<PairwiseHash>)> {
    require_kind(&c.header, Kind::Mpk)?;
    check_hf_header(params, &c.header)?;
    let (n, d, mu) = (params.n, params.depth, params.width);
    let mut r = Reader::new(&params.suite, c);
    let v = r.g1()?;
    let w = r.g1s(n)?;
    let h = (0..n)
        .map(|_| (0..d).map(|_| r.g1s(mu + 1)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let j = r.g1s(n)?;
    let c_w = (0..n).map(|_| r.g1s(n)).collect::<Result<Vec<_>>>()?;
    let cells = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| (0..d).map(|_| r.g1s(mu)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let l = c.header.l as usize;
    let hash = if l > 0 {
        let rows = (0..l)
            .map(|_| unpack_bits(r.raw()?, n))
            .collect::<Result<Vec<_>>>()?;
        let offset = unpack_bits(r.raw()?, l)?;
        Some(PairwiseHash { rows, offset })
    } else {
        None
    };
    r.finish()?;
    Ok((
        HfMasterPublicKey {
            v,
            w,
            h,
            j,
            c_w,
            c: cells,
        },
        hash,
    ))
}

pub fn hibe_mpk_from_container<S: GroupSuite>(
    params: &HfParams<S>,
    c: &Container,
) -> Result<HibePublicKey<S>> {
    match mpk_from_container(params, c)? {
        (hf, Some(hash)) => Ok(HibePublicKey { hf, hash }),
        (_, None) => Err(Error::Container(
            "master public key carries no hash; generate it with a message length".into(),
        )),
    }
}

pub fn msk_to_container<S: GroupSuite>(
    params: &HfParams<S>,
    msk: &HfMasterSecretKey<S>,
) -> Container {
    let mut w = Writer::new(&params.suite);
    w.g2(&msk.v_hat);
    w.g2s(&msk.w_hat);
    w.g2s(msk.h_hat.iter().flatten().flatten());
    Container {
        header: hf_header(params, Kind::Msk),
        elements: w.out,
    }
}

pub fn msk_from_container<S: GroupSuite>(
    params: &HfParams<S>,
    c: &Container,
) -> Result<HfMasterSecretKey<S>> {
    require_kind(&c.header, Kind::Msk)?;
    check_hf_header(params, &c.header)?;
    let (n, d, mu) = (params.n, params.depth, params.width);
    let mut r = Reader::new(&params.suite, c);
    let v_hat = r.g2()?;
    let w_hat = r.g2s(n)?;
    let h_hat = (0..n)
        .map(|_| (0..d).map(|_| r.g2s(mu + 1)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Ok(HfMasterSecretKey {
        v_hat,
        w_hat,
        h_hat,
    })
}

// ---- key components (shared by HF and HPE keys) ----

fn write_components<S: GroupSuite>(w: &mut Writer<'_, S>, k: &KeyComponents<S>) {
    w.g2(&k.decryption.d);
    w.g2(&k.decryption.d_w);
    w.g2s(&k.decryption.d_levels);
    for dl in &k.delegation {
        w.g2s(&dl.k);
        w.g2(&dl.l);
        w.g2s(dl.l_levels.iter().flatten());
        w.g2s(&dl.l_w);
    }
}

fn read_components<S: GroupSuite>(
    r: &mut Reader<'_, S>,
    depth: usize,
    width: usize,
    level: usize,
) -> Result<KeyComponents<S>> {
    let decryption = DecryptionKey {
        d: r.g2()?,
        d_w: r.g2()?,
        d_levels: r.g2s(level)?,
    };
    let delegation = (level..depth)
        .map(|_| {
            Ok(DelegationLevel {
                k: r.g2s(width)?,
                l: r.g2()?,
                l_levels: (0..width).map(|_| r.g2s(level)).collect::<Result<_>>()?,
                l_w: r.g2s(width)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(KeyComponents {
        decryption,
        delegation,
    })
}

fn write_vectors<S: GroupSuite>(w: &mut Writer<'_, S>, vs: &[Vec<S::Scalar>]) {
    vs.iter().flatten().for_each(|x| w.scalar(x));
}

fn read_vectors<S: GroupSuite>(
    r: &mut Reader<'_, S>,
    count: usize,
    width: usize,
) -> Result<Vec<Vec<S::Scalar>>> {
    (0..count)
        .map(|_| (0..width).map(|_| r.scalar()).collect())
        .collect()
}

pub fn sk_to_container<S: GroupSuite>(params: &HfParams<S>, sk: &HfSecretKey<S>) -> Container {
    let mut w = Writer::new(&params.suite);
    write_vectors(&mut w, &sk.id.levels);
    for c in &sk.coords {
        write_components(&mut w, c);
    }
    Container {
        header: Header {
            level: sk.level() as u32,
            ..hf_header(params, Kind::Sk)
        },
        elements: w.out,
    }
}

pub fn sk_from_container<S: GroupSuite>(
    params: &HfParams<S>,
    c: &Container,
) -> Result<HfSecretKey<S>> {
    require_kind(&c.header, Kind::Sk)?;
    check_hf_header(params, &c.header)?;
    let level = c.header.level as usize;
    if level == 0 || level > params.depth {
        return Err(Error::Container(format!("invalid key level {level}")));
    }
    let mut r = Reader::new(&params.suite, c);
    let id = HierId::new(read_vectors(&mut r, level, params.width)?);
    let coords = (0..params.n)
        .map(|_| read_components(&mut r, params.depth, params.width, level))
        .collect::<Result<_>>()?;
    r.finish()?;
    Ok(HfSecretKey { id, coords })
}

// ---- outputs and ciphertexts ----

fn write_output<S: GroupSuite>(w: &mut Writer<'_, S>, out: &HfOutput<S>) {
    w.g1s(out.elements());
}

fn read_output<S: GroupSuite>(r: &mut Reader<'_, S>, n: usize, level: usize) -> Result<HfOutput<S>> {
    Ok(HfOutput {
        c_v: r.g1()?,
        ct_w: r.g1s(n)?,
        ct: (0..level).map(|_| r.g1s(n)).collect::<Result<_>>()?,
    })
}

fn output_header<S: GroupSuite>(params: &HfParams<S>, kind: Kind, out: &HfOutput<S>) -> Header {
    Header {
        level: out.ct.len() as u32,
        ..hf_header(params, kind)
    }
}

pub fn output_to_container<S: GroupSuite>(params: &HfParams<S>, out: &HfOutput<S>) -> Container {
    let mut w = Writer::new(&params.suite);
    write_output(&mut w, out);
    Container {
        header: output_header(params, Kind::HfOutput, out),
        elements: w.out,
    }
}

pub fn output_from_container<S: GroupSuite>(
    params: &HfParams<S>,
    c: &Container,
) -> Result<HfOutput<S>> {
    require_kind(&c.header, Kind::HfOutput)?;
    check_hf_header(params, &c.header)?;
    let mut r = Reader::new(&params.suite, c);
    let out = read_output(&mut r, params.n, c.header.level as usize)?;
    r.finish()?;
    Ok(out)
}

pub fn det_ct_to_container<S: GroupSuite>(params: &HfParams<S>, ct: &DetCiphertext<S>) -> Container {
    let mut w = Writer::new(&params.suite);
    write_output(&mut w, &ct.c);
    Container {
        header: output_header(params, Kind::DetCt, &ct.c),
        elements: w.out,
    }
}

pub fn det_ct_from_container<S: GroupSuite>(
    params: &HfParams<S>,
    c: &Container,
) -> Result<DetCiphertext<S>> {
    require_kind(&c.header, Kind::DetCt)?;
    check_hf_header(params, &c.header)?;
    let mut r = Reader::new(&params.suite, c);
    let out = read_output(&mut r, params.n, c.header.level as usize)?;
    r.finish()?;
    Ok(DetCiphertext { c: out })
}

pub fn hibe_ct_to_container<S: GroupSuite>(
    params: &HfParams<S>,
    ct: &HibeCiphertext<S>,
) -> Container {
    let mut w = Writer::new(&params.suite);
    write_output(&mut w, &ct.c1);
    w.raw(pack_bits(&ct.c2));
    Container {
        header: Header {
            l: ct.c2.len() as u32,
            ..output_header(params, Kind::HibeCt, &ct.c1)
        },
        elements: w.out,
    }
}

pub fn hibe_ct_from_container<S: GroupSuite>(
    params: &HfParams<S>,
    c: &Container,
) -> Result<HibeCiphertext<S>> {
    require_kind(&c.header, Kind::HibeCt)?;
    check_hf_header(params, &c.header)?;
    let mut r = Reader::new(&params.suite, c);
    let c1 = read_output(&mut r, params.n, c.header.level as usize)?;
    let c2 = unpack_bits(r.raw()?, c.header.l as usize)?;
    r.finish()?;
    Ok(HibeCiphertext { c1, c2 })
}

// ---- HPE objects ----

fn variant_byte(v: Variant) -> u8 {
    match v {
        Variant::Full => 0,
        Variant::PredicateOnly => 1,
    }
}

fn variant_of(h: &Header) -> Result<Variant> {
    match h.mode {
        Some(0) => Ok(Variant::Full),
        Some(1) => Ok(Variant::PredicateOnly),
        _ => Err(Error::Container("unknown HPE variant".into())),
    }
}

fn hpe_header<S: GroupSuite>(params: &HpeParams<S>, kind: Kind, variant: Variant) -> Header {
    Header {
        depth: params.depth as u32,
        width: params.width as u32,
        mode: Some(variant_byte(variant)),
        ..header_for(&params.suite, kind)
    }
}

fn check_hpe_header<S: GroupSuite>(params: &HpeParams<S>, h: &Header, kind: Kind) -> Result<Variant> {
    require_kind(h, kind)?;
    check_suite(&params.suite, h)?;
    if h.depth as usize != params.depth || h.width as usize != params.width {
        return Err(Error::Container(
            "HPE container was written for other parameters".into(),
        ));
    }
    variant_of(h)
}

pub fn hpe_mpk_to_container<S: GroupSuite>(
    params: &HpeParams<S>,
    mpk: &hpe::MasterPublicKey<S>,
) -> Container {
    let mut w = Writer::new(&params.suite);
    w.g1(&mpk.v);
    w.g1(&mpk.w);
    if let Some(b) = &mpk.payload_base {
        w.gt(b);
    }
    w.g1s(mpk.h.iter().flatten());
    Container {
        header: hpe_header(params, Kind::HpeMpk, mpk.variant()),
        elements: w.out,
    }
}

pub fn hpe_mpk_from_container<S: GroupSuite>(
    params: &HpeParams<S>,
    c: &Container,
) -> Result<hpe::MasterPublicKey<S>> {
    let variant = check_hpe_header(params, &c.header, Kind::HpeMpk)?;
    let mut r = Reader::new(&params.suite, c);
    let v = r.g1()?;
    let w = r.g1()?;
    let payload_base = match variant {
        Variant::Full => Some(r.gt()?),
        Variant::PredicateOnly => None,
    };
    let h = (0..params.depth)
        .map(|_| r.g1s(params.width + 1))
        .collect::<Result<_>>()?;
    r.finish()?;
    Ok(hpe::MasterPublicKey {
        v,
        w,
        payload_base,
        h,
    })
}

pub fn hpe_msk_to_container<S: GroupSuite>(
    params: &HpeParams<S>,
    msk: &hpe::MasterSecretKey<S>,
) -> Container {
    let mut w = Writer::new(&params.suite);
    w.g2(&msk.g_hat);
    if let Some(a) = &msk.g_hat_alpha {
        w.g2(a);
    }
    w.g2(&msk.v_hat);
    w.g2(&msk.w_hat);
    w.g2s(msk.h_hat.iter().flatten());
    let variant = if msk.g_hat_alpha.is_some() {
        Variant::Full
    } else {
        Variant::PredicateOnly
    };
    Container {
        header: hpe_header(params, Kind::HpeMsk, variant),
        elements: w.out,
    }
}

pub fn hpe_msk_from_container<S: GroupSuite>(
    params: &HpeParams<S>,
    c: &Container,
) -> Result<hpe::MasterSecretKey<S>> {
    let variant = check_hpe_header(params, &c.header, Kind::HpeMsk)?;
    let mut r = Reader::new(&params.suite, c);
    let g_hat = r.g2()?;
    let g_hat_alpha = match variant {
        Variant::Full => Some(r.g2()?),
        Variant::PredicateOnly => None,
    };
    let v_hat = r.g2()?;
    let w_hat = r.g2()?;
    let h_hat = (0..params.depth)
        .map(|_| r.g2s(params.width + 1))
        .collect::<Result<_>>()?;
    r.finish()?;
    Ok(hpe::MasterSecretKey {
        g_hat,
        g_hat_alpha,
        v_hat,
        w_hat,
        h_hat,
    })
}

pub fn hpe_sk_to_container<S: GroupSuite>(
    params: &HpeParams<S>,
    sk: &hpe::SecretKey<S>,
    variant: Variant,
) -> Container {
    let mut w = Writer::new(&params.suite);
    write_vectors(&mut w, &sk.predicate);
    write_components(&mut w, &sk.components);
    Container {
        header: Header {
            level: sk.level() as u32,
            ..hpe_header(params, Kind::HpeSk, variant)
        },
        elements: w.out,
    }
}

pub fn hpe_sk_from_container<S: GroupSuite>(
    params: &HpeParams<S>,
    c: &Container,
) -> Result<hpe::SecretKey<S>> {
    check_hpe_header(params, &c.header, Kind::HpeSk)?;
    let level = c.header.level as usize;
    if level > params.depth {
        return Err(Error::Container(format!("invalid key level {level}")));
    }
    let mut r = Reader::new(&params.suite, c);
    let predicate = read_vectors(&mut r, level, params.width)?;
    let components = read_components(&mut r, params.depth, params.width, level)?;
    r.finish()?;
    Ok(hpe::SecretKey {
        predicate,
        components,
    })
}

pub fn hpe_ct_to_container<S: GroupSuite>(params: &HpeParams<S>, ct: &Ciphertext<S>) -> Container {
    let mut w = Writer::new(&params.suite);
    if let Some(c0) = &ct.c0 {
        w.gt(c0);
    }
    w.g1(&ct.c_v);
    w.g1(&ct.c_w);
    w.g1s(ct.c.iter().flatten());
    let variant = if ct.c0.is_some() {
        Variant::Full
    } else {
        Variant::PredicateOnly
    };
    Container {
        header: Header {
            level: ct.depth() as u32,
            ..hpe_header(params, Kind::HpeCt, variant)
        },
        elements: w.out,
    }
}

pub fn hpe_ct_from_container<S: GroupSuite>(
    params: &HpeParams<S>,
    c: &Container,
) -> Result<Ciphertext<S>> {
    let variant = check_hpe_header(params, &c.header, Kind::HpeCt)?;
    let kappa = c.header.level as usize;
    if kappa > params.depth {
        return Err(Error::Container(format!("invalid ciphertext depth {kappa}")));
    }
    let mut r = Reader::new(&params.suite, c);
    let c0 = match variant {
        Variant::Full => Some(r.gt()?),
        Variant::PredicateOnly => None,
    };
    let c_v = r.g1()?;
    let c_w = r.g1()?;
    let cells = (0..kappa)
        .map(|_| r.g1s(params.width))
        .collect::<Result<_>>()?;
    r.finish()?;
    Ok(Ciphertext {
        c0,
        c_v,
        c_w,
        c: cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auxgen::aux_injective;
    use crate::groups::TransparentSuite;
    use crate::hibtdf::{hf_eval, hf_kg, hf_mkg, hf_setup};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn setup() -> (HfParams<TransparentSuite>, HfMasterPublicKey<TransparentSuite>, HfMasterSecretKey<TransparentSuite>) {
        let s = TransparentSuite::new(1009).unwrap();
        let p = hf_setup(s.clone(), 2, 3, 2, Mode::Selective).unwrap();
        let (mpk, msk) = hf_mkg(&p, &aux_injective(&s, 2, 2), &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
        (p, mpk, msk)
    }

    #[test]
    fn header_roundtrip_and_rejections() {
        let (p, mpk, _) = setup();
        let bytes = mpk_to_container(&p, &mpk, None).encode();
        let c = Container::decode(&bytes).unwrap();
        assert_eq!(c.header.kind, Kind::Mpk);
        assert_eq!(mpk_from_container(&p, &c).unwrap().0, mpk);

        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(matches!(Container::decode(&bad), Err(Error::Container(_))));
        let mut long = bytes.clone();
        long.push(0);
        assert!(Container::decode(&long).is_err());
        assert!(Container::decode(&bytes[..bytes.len() - 1]).is_err());
        assert!(matches!(
            Container::decode_kind(&bytes, Kind::Sk),
            Err(Error::Container(_))
        ));
        assert!(sk_from_container(&p, &c).is_err());
    }

    #[test]
    fn keys_and_outputs_roundtrip() {
        let (p, mpk, msk) = setup();
        let s = &p.suite;
        let c = Container::decode(&msk_to_container(&p, &msk).encode()).unwrap();
        assert_eq!(msk_from_container(&p, &c).unwrap(), msk);

        let id = HierId::from_u64(s, &[vec![1, 3]]);
        let sk = hf_kg(&p, &msk, &id, &mut ChaCha20Rng::seed_from_u64(2)).unwrap();
        let c = Container::decode(&sk_to_container(&p, &sk).encode()).unwrap();
        assert_eq!(sk_from_container(&p, &c).unwrap(), sk);

        let out = hf_eval(&p, &mpk, &id, &[true, false, true]).unwrap();
        let c = Container::decode(&output_to_container(&p, &out).encode()).unwrap();
        assert_eq!(output_from_container(&p, &c).unwrap(), out);

        let hash = PairwiseHash::sample(3, 3, &mut ChaCha20Rng::seed_from_u64(3));
        let c = Container::decode(&mpk_to_container(&p, &mpk, Some(&hash)).encode()).unwrap();
        assert_eq!(hibe_mpk_from_container(&p, &c).unwrap().hash, hash);
    }

    #[test]
    fn parameters_must_match() {
        let (p, mpk, _) = setup();
        let c = mpk_to_container(&p, &mpk, None);
        let other = hf_setup(TransparentSuite::new(1013).unwrap(), 2, 3, 2, Mode::Selective).unwrap();
        assert!(mpk_from_container(&other, &c).is_err());
        let pc = params_to_container(&p);
        assert_eq!(params_from_container(p.suite.clone(), &pc).unwrap(), p);
    }

    #[test]
    fn bit_packing() {
        let bits = vec![true, false, true, true, false, false, false, false, true];
        let packed = pack_bits(&bits);
        assert_eq!(packed, vec![0b0000_1101, 0b1]);
        assert_eq!(unpack_bits(&packed, 9).unwrap(), bits);
        assert!(unpack_bits(&[0xFF], 4).is_err());
    }
}
