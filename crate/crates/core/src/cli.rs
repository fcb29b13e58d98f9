//! Command-line front end. Every subcommand wraps one library operation and talks to the
//! filesystem through [`crate::container`].
//!
//! Identities are written `1,x1/1,x2/…`: levels separated by `/`, coordinates by `,`.
//! A level that is not a list of `μ` integers is treated as a string and hashed to the
//! `μ − 1` trailing coordinates (scalars in selective mode, bits in adaptive mode) behind a
//! leading 1, so `alice@example.com/inbox` is a valid depth-2 identity.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::auxgen::{aux_adaptive, aux_injective, aux_selective, partition};
use crate::container::{self as ct, Container, Kind};
use crate::dethibe::{det_dec, det_enc};
use crate::error::Error;
use crate::groups::{BackendTag, Bls12Suite, GroupSuite, TransparentSuite};
use crate::hibe::{hibe_dec, hibe_enc, hibe_mkgen_with_aux, DEFAULT_EPS_LOG2};
use crate::hibtdf::{
    hf_del, hf_eval, hf_inv, hf_kg, hf_mkg, hf_setup, AuxVector, HfParams, HierId, Mode,
};
use crate::lossylab::{
    delta_bound, delta_bound_selective, eta_lower_bound, image_size, lossiness, verify_lemma2,
};

/// Environment variable naming the default backend.
pub const BACKEND_ENV: &str = "HIBTDF_BACKEND";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "error: {e}"),
            CliError::Io(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Secure,
    Transparent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Selective,
    Adaptive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Selective => Mode::Selective,
            ModeArg::Adaptive => Mode::Adaptive,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hibtdf", version, about = "Hierarchical identity-based lossy trapdoor functions")]
pub struct Cli {
    /// Seed for every random choice; omitted means fresh OS randomness.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Allow the transparent (discrete-log-exposing, insecure) backend.
    #[arg(long = "insecure-transparent", global = true)]
    pub insecure_transparent: bool,

    #[arg(long, global = true, env = BACKEND_ENV, value_enum, default_value = "secure")]
    pub backend: BackendArg,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a parameter file.
    Setup(SetupArgs),
    /// Generate a master key pair.
    Mkg(MkgArgs),
    /// Derive a secret key for an identity.
    Kg(KgArgs),
    /// Derive a child key from a parent key.
    Delegate(DelegateArgs),
    /// Evaluate the function on an input bit string.
    Eval(EvalArgs),
    /// Invert an output with a secret key and print the input bits.
    Invert(InvertArgs),
    /// Encrypt stdin bytes under an identity.
    HibeEnc(EncArgs),
    /// Decrypt a ciphertext to stdout.
    HibeDec(DecArgs),
    /// Deterministically encrypt stdin bytes (exactly n bits).
    DetEnc(EncArgs),
    /// Decrypt a deterministic ciphertext to stdout.
    DetDec(DecArgs),
    /// Count output images under a selective lossy key (transparent backend only).
    LossyDemo(LossyDemoArgs),
    /// Print the abort-probability and lossiness bounds as JSON lines.
    VerifyBounds(VerifyArgs),
    /// Time the trapdoor-function operations.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SetupArgs {
    #[arg(long, short)]
    pub d: usize,
    #[arg(long, short)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub mu: usize,
    #[arg(long, value_enum, default_value = "selective")]
    pub mode: ModeArg,
    /// Prime modulus of the transparent backend.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MkgArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// `injective`, `selective:<id>` or `adaptive:<q>`.
    #[arg(long, default_value = "injective")]
    pub aux: String,
    #[arg(long)]
    pub mpk: PathBuf,
    #[arg(long)]
    pub msk: PathBuf,
    /// Also sample a hash for HIBE messages of this many bits.
    #[arg(long)]
    pub message_len: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_EPS_LOG2)]
    pub eps_log2: f64,
}

#[derive(Debug, Args)]
pub struct KgArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub msk: PathBuf,
    #[arg(long)]
    pub id: String,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DelegateArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub mpk: PathBuf,
    #[arg(long)]
    pub sk: PathBuf,
    /// Identity of the parent key.
    #[arg(long)]
    pub id: String,
    /// The single level appended to the parent identity.
    #[arg(long)]
    pub child: String,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub mpk: PathBuf,
    #[arg(long)]
    pub id: String,
    /// `n` characters of `0`/`1` (bit i first), or `0x` followed by packed bytes.
    #[arg(long)]
    pub input: String,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub mpk: PathBuf,
    #[arg(long)]
    pub sk: PathBuf,
    #[arg(long)]
    pub ct: PathBuf,
}

#[derive(Debug, Args)]
pub struct EncArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub mpk: PathBuf,
    #[arg(long)]
    pub id: String,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DecArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub mpk: PathBuf,
    #[arg(long)]
    pub sk: PathBuf,
    #[arg(long)]
    pub ct: PathBuf,
}

#[derive(Debug, Args)]
pub struct LossyDemoArgs {
    #[arg(long, default_value_t = 11)]
    pub p: u64,
    #[arg(long, short, default_value_t = 8)]
    pub n: usize,
    #[arg(long, short, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub mu: usize,
    #[arg(long)]
    pub id_star: String,
    /// Extra identities to measure; by default the prefixes of id* and a few
    /// non-prefixes are shown.
    #[arg(long)]
    pub id: Vec<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long, default_value_t = 2)]
    pub mu: usize,
    #[arg(long, short, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Modulus for the transparent backend.
    #[arg(long)]
    pub p: Option<u64>,
    /// Challenge identity; defaults to all-zero tails.
    #[arg(long)]
    pub id_star: Option<String>,
    /// Revealed identities; defaults to up to q siblings of id*.
    #[arg(long)]
    pub revealed: Vec<String>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, short, default_value_t = 2)]
    pub d: usize,
    #[arg(long, short, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub mu: usize,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub iterations: u32,
}

/// I/O handles and shared state of one invocation.
pub struct Context<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub rng: ChaCha20Rng,
    pub insecure: bool,
}

impl Context<'_> {
    fn say(&mut self, line: impl std::fmt::Display) -> CliResult<()> {
        writeln!(self.stdout, "{line}").map_err(|e| CliError::Io(format!("stdout: {e}")))
    }
}

/// Parses arguments and runs one command. Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let rng = match cli.seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    };
    let mut ctx = Context {
        stdin,
        stdout,
        rng,
        insecure: cli.insecure_transparent,
    };
    match execute(&cli, &mut ctx) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

/// Backend chosen for a command, after the `--insecure-transparent` check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Selected {
    Secure,
    Transparent(u64),
}

fn select(tag: BackendTag, modulus: Option<u64>, insecure: bool) -> CliResult<Selected> {
    match tag {
        BackendTag::Secure => Ok(Selected::Secure),
        BackendTag::Transparent => {
            if !insecure {
                return Err(CliError::Domain(Error::Parameter(
                    "the transparent backend is insecure; pass --insecure-transparent to use it"
                        .into(),
                )));
            }
            modulus
                .filter(|p| *p != 0)
                .map(Selected::Transparent)
                .ok_or_else(|| CliError::Usage("the transparent backend needs --p <prime>".into()))
        }
    }
}

fn select_arg(backend: BackendArg, p: Option<u64>, insecure: bool) -> CliResult<Selected> {
    let tag = match backend {
        BackendArg::Secure => BackendTag::Secure,
        BackendArg::Transparent => BackendTag::Transparent,
    };
    select(tag, p, insecure)
}

macro_rules! with_suite {
    ($sel:expr, $s:ident => $body:expr) => {
        match $sel {
            Selected::Secure => {
                let $s = Bls12Suite::new();
                $body
            }
            Selected::Transparent(p) => {
                let $s = TransparentSuite::new(p)?;
                $body
            }
        }
    };
}

macro_rules! with_params {
    ($path:expr, $ctx:expr, $p:ident => $body:expr) => {{
        let (c, sel) = load_params_file($path, $ctx.insecure)?;
        with_suite!(sel, s => {
            let $p = ct::params_from_container(s, &c)?;
            $body
        })
    }};
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_container(path: &Path, kind: Kind) -> CliResult<Container> {
    Ok(Container::decode_kind(&read_file(path)?, kind)?)
}

fn write_container(path: &Path, c: &Container) -> CliResult<()> {
    write_file(path, &c.encode())
}

/// Reads a parameter file and selects the backend it was written for.
fn load_params_file(path: &Path, insecure: bool) -> CliResult<(Container, Selected)> {
    let c = read_container(path, Kind::Params)?;
    let sel = select(c.header.backend, Some(c.header.modulus), insecure)?;
    Ok((c, sel))
}

fn execute(cli: &Cli, ctx: &mut Context<'_>) -> CliResult<()> {
    match &cli.command {
        Command::Setup(a) => {
            let sel = select_arg(cli.backend, a.p, ctx.insecure)?;
            with_suite!(sel, s => {
                let params = hf_setup(s, a.d, a.n, a.mu, a.mode.into())?;
                write_container(&a.out, &ct::params_to_container(&params))?;
                ctx.say(format!(
                    "params: backend {}, d = {}, n = {}, μ = {}, mode {}, ω = {:.4}",
                    params.suite.backend().name(),
                    params.depth,
                    params.n,
                    params.width,
                    params.mode.name(),
                    params.omega()
                ))
            })
        }
        Command::Mkg(a) => with_params!(&a.params, ctx, p => cmd_mkg(&p, ctx, a)),
        Command::Kg(a) => with_params!(&a.params, ctx, p => cmd_kg(&p, ctx, a)),
        Command::Delegate(a) => with_params!(&a.params, ctx, p => cmd_delegate(&p, ctx, a)),
        Command::Eval(a) => with_params!(&a.params, ctx, p => cmd_eval(&p, ctx, a)),
        Command::Invert(a) => with_params!(&a.params, ctx, p => cmd_invert(&p, ctx, a)),
        Command::HibeEnc(a) => with_params!(&a.params, ctx, p => cmd_hibe_enc(&p, ctx, a)),
        Command::HibeDec(a) => with_params!(&a.params, ctx, p => cmd_hibe_dec(&p, ctx, a)),
        Command::DetEnc(a) => with_params!(&a.params, ctx, p => cmd_det_enc(&p, ctx, a)),
        Command::DetDec(a) => with_params!(&a.params, ctx, p => cmd_det_dec(&p, ctx, a)),
        Command::LossyDemo(a) => {
            let sel = select(BackendTag::Transparent, Some(a.p), ctx.insecure)?;
            let Selected::Transparent(p) = sel else {
                unreachable!()
            };
            cmd_lossy_demo(TransparentSuite::new(p)?, ctx, a)
        }
        Command::VerifyBounds(a) => {
            let sel = select_arg(cli.backend, a.p, ctx.insecure)?;
            with_suite!(sel, s => cmd_verify(s, ctx, a))
        }
        Command::Bench(a) => {
            let sel = select_arg(cli.backend, a.p, ctx.insecure)?;
            with_suite!(sel, s => cmd_bench(s, ctx, a))
        }
    }
}


// ---- argument parsing ----

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    t.parse::<BigInt>().ok()
}

fn reduce<S: GroupSuite>(suite: &S, v: &BigInt) -> S::Scalar {
    let order = BigInt::from_biguint(Sign::Plus, suite.order());
    let r = ((v % &order) + &order) % &order;
    suite.scalar_from_biguint(&r.to_biguint().unwrap_or_default())
}

/// Hashes a string segment to the trailing coordinates of one level.
pub fn hash_segment<S: GroupSuite>(params: &HfParams<S>, segment: &str) -> Vec<S::Scalar> {
    let s = &params.suite;
    let mut level = vec![s.scalar_one()];
    match params.mode {
        Mode::Selective => {
            for j in 1..params.width as u32 {
                let digest = Sha256::new()
                    .chain_update(b"hibtdf identity segment")
                    .chain_update(j.to_be_bytes())
                    .chain_update(segment.as_bytes())
                    .finalize();
                level.push(s.scalar_from_bytes_mod_order(&digest));
            }
        }
        Mode::Adaptive => {
            let mut bits = Vec::new();
            let mut counter = 0u32;
            while bits.len() < params.width - 1 {
                let digest = Sha256::new()
                    .chain_update(b"hibtdf identity bits")
                    .chain_update(counter.to_be_bytes())
                    .chain_update(segment.as_bytes())
                    .finalize();
                bits.extend((0..256).map(|i| digest[i / 8] >> (i % 8) & 1 == 1));
                counter += 1;
            }
            level.extend(
                bits[..params.width - 1]
                    .iter()
                    .map(|b| if *b { s.scalar_one() } else { s.scalar_zero() }),
            );
        }
    }
    level
}

/// Parses one level: `μ` comma-separated integers, or any other string to be hashed.
pub fn parse_level<S: GroupSuite>(params: &HfParams<S>, text: &str) -> Result<Vec<S::Scalar>, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let numbers: Option<Vec<BigInt>> = parts.iter().map(|p| parse_integer(p)).collect();
    match numbers {
        Some(nums) if nums.len() == params.width => {
            Ok(nums.iter().map(|v| reduce(&params.suite, v)).collect())
        }
        Some(nums) => Err(format!(
            "level `{text}` has {} coordinates but μ = {}",
            nums.len(),
            params.width
        )),
        None if text.trim().is_empty() => Err("empty identity level".into()),
        None => Ok(hash_segment(params, text)),
    }
}

/// Parses `1,x1/1,x2/…` (or hashed string segments) into an identity.
pub fn parse_identity<S: GroupSuite>(params: &HfParams<S>, text: &str) -> Result<HierId<S>, String> {
    let levels = text
        .split('/')
        .map(|l| parse_level(params, l))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HierId::new(levels))
}

fn identity<S: GroupSuite>(params: &HfParams<S>, text: &str) -> CliResult<HierId<S>> {
    let id = parse_identity(params, text).map_err(usage)?;
    params.check_identity(&id)?;
    Ok(id)
}

/// Formats an identity in the `1,x/1,y` syntax.
pub fn format_identity<S: GroupSuite>(suite: &S, id: &HierId<S>) -> String {
    id.levels
        .iter()
        .map(|l| {
            l.iter()
                .map(|x| suite.scalar_to_biguint(x).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("/")
}

/// `0`/`1` characters (bit i first), or `0x` hex bytes packed little-endian per byte.
pub fn parse_bits(text: &str, n: usize) -> Result<Vec<bool>, String> {
    if let Some(hex) = text.strip_prefix("0x") {
        if hex.len() % 2 != 0 {
            return Err("hex input needs an even number of digits".into());
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16))
            .collect::<Result<Vec<u8>, _>>()
            .map_err(|e| format!("bad hex input: {e}"))?;
        return ct::unpack_bits(&bytes, n).map_err(|e| e.to_string());
    }
    if text.len() != n {
        return Err(format!("input has {} bits, expected n = {n}", text.len()));
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(format!("unexpected character `{c}` in bit string")),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

/// Bytes to bits for a message of exactly `len` bits.
fn message_bits(bytes: &[u8], len: usize, what: &str) -> CliResult<Vec<bool>> {
    if len % 8 != 0 {
        return Err(CliError::Domain(Error::Parameter(format!(
            "{what} length {len} is not a whole number of bytes"
        ))));
    }
    if bytes.len() * 8 != len {
        return Err(CliError::Domain(Error::Parameter(format!(
            "{what} must be exactly {} bytes, got {}",
            len / 8,
            bytes.len()
        ))));
    }
    Ok(ct::unpack_bits(bytes, len)?)
}

fn read_stdin(ctx: &mut Context<'_>) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    ctx.stdin
        .read_to_end(&mut buf)
        .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
    Ok(buf)
}

fn write_stdout(ctx: &mut Context<'_>, bytes: &[u8]) -> CliResult<()> {
    ctx.stdout
        .write_all(bytes)
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

/// Parses `injective`, `selective:<id>` or `adaptive:<q>`.
fn parse_aux<S: GroupSuite>(
    params: &HfParams<S>,
    spec: &str,
    rng: &mut ChaCha20Rng,
) -> CliResult<AuxVector<S>> {
    let s = &params.suite;
    let (d, mu) = (params.depth, params.width);
    if spec == "injective" {
        return Ok(aux_injective(s, d, mu));
    }
    if let Some(id) = spec.strip_prefix("selective:") {
        let id = identity(params, id)?;
        return Ok(aux_selective(s, &id, d, mu)?);
    }
    if let Some(q) = spec.strip_prefix("adaptive:") {
        let q: u64 = q.parse().map_err(|_| usage(format!("bad query bound `{q}`")))?;
        return Ok(aux_adaptive(s, d, mu, q, rng)?);
    }
    Err(usage(format!(
        "unknown --aux `{spec}`; use injective, selective:<id> or adaptive:<q>"
    )))
}

fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rational_f64(x: f64) -> String {
    BigRational::from_float(x).map_or_else(|| "nan".into(), |r| rational(&r))
}

fn int_rational(v: u64) -> String {
    format!("{v}/1")
}

// ---- commands ----

fn cmd_mkg<S: GroupSuite>(params: &HfParams<S>, ctx: &mut Context<'_>, a: &MkgArgs) -> CliResult<()> {
    let aux = parse_aux(params, &a.aux, &mut ctx.rng)?;
    let (mpk, hash, msk) = match a.message_len {
        Some(l) => {
            let (pk, msk) = hibe_mkgen_with_aux(params, l, a.eps_log2, &aux, &mut ctx.rng)?;
            (pk.hf, Some(pk.hash), msk)
        }
        None => {
            let (mpk, msk) = hf_mkg(params, &aux, &mut ctx.rng)?;
            (mpk, None, msk)
        }
    };
    write_container(&a.mpk, &ct::mpk_to_container(params, &mpk, hash.as_ref()))?;
    write_container(&a.msk, &ct::msk_to_container(params, &msk))?;
    ctx.say(format!(
        "master keys written ({} hash)",
        if hash.is_some() { "with" } else { "without" }
    ))
}

fn cmd_kg<S: GroupSuite>(params: &HfParams<S>, ctx: &mut Context<'_>, a: &KgArgs) -> CliResult<()> {
    let msk = ct::msk_from_container(params, &read_container(&a.msk, Kind::Msk)?)?;
    let id = identity(params, &a.id)?;
    let sk = hf_kg(params, &msk, &id, &mut ctx.rng)?;
    write_container(&a.out, &ct::sk_to_container(params, &sk))?;
    ctx.say(format!("key for {}", format_identity(&params.suite, &id)))
}

fn cmd_delegate<S: GroupSuite>(
    params: &HfParams<S>,
    ctx: &mut Context<'_>,
    a: &DelegateArgs,
) -> CliResult<()> {
    let (mpk, _) = ct::mpk_from_container(params, &read_container(&a.mpk, Kind::Mpk)?)?;
    let sk = ct::sk_from_container(params, &read_container(&a.sk, Kind::Sk)?)?;
    let id = identity(params, &a.id)?;
    let next = parse_level(params, &a.child).map_err(usage)?;
    let child = hf_del(params, &mpk, &id, &sk, &next, &mut ctx.rng)?;
    write_container(&a.out, &ct::sk_to_container(params, &child))?;
    ctx.say(format!("key for {}", format_identity(&params.suite, &child.id)))
}

fn cmd_eval<S: GroupSuite>(params: &HfParams<S>, ctx: &mut Context<'_>, a: &EvalArgs) -> CliResult<()> {
    let (mpk, _) = ct::mpk_from_container(params, &read_container(&a.mpk, Kind::Mpk)?)?;
    let id = identity(params, &a.id)?;
    let x = parse_bits(&a.input, params.n).map_err(usage)?;
    let out = hf_eval(params, &mpk, &id, &x)?;
    write_container(&a.out, &ct::output_to_container(params, &out))?;
    ctx.say(format!("output with {} group elements", out.component_count()))
}

fn cmd_invert<S: GroupSuite>(params: &HfParams<S>, ctx: &mut Context<'_>, a: &InvertArgs) -> CliResult<()> {
    let (mpk, _) = ct::mpk_from_container(params, &read_container(&a.mpk, Kind::Mpk)?)?;
    let sk = ct::sk_from_container(params, &read_container(&a.sk, Kind::Sk)?)?;
    let out = ct::output_from_container(params, &read_container(&a.ct, Kind::HfOutput)?)?;
    let x = hf_inv(params, &mpk, &sk.id, &sk, &out)?;
    ctx.say(format_bits(&x))
}

fn cmd_hibe_enc<S: GroupSuite>(params: &HfParams<S>, ctx: &mut Context<'_>, a: &EncArgs) -> CliResult<()> {
    let mpk = ct::hibe_mpk_from_container(params, &read_container(&a.mpk, Kind::Mpk)?)?;
    let id = identity(params, &a.id)?;
    let input = read_stdin(ctx)?;
    let m = message_bits(&input, mpk.message_len(), "message")?;
    let c = hibe_enc(params, &mpk, &m, &id, &mut ctx.rng)?;
    write_container(&a.out, &ct::hibe_ct_to_container(params, &c))
}

fn cmd_hibe_dec<S: GroupSuite>(params: &HfParams<S>, ctx: &mut Context<'_>, a: &DecArgs) -> CliResult<()> {
    let mpk = ct::hibe_mpk_from_container(params, &read_container(&a.mpk, Kind::Mpk)?)?;
    let sk = ct::sk_from_container(params, &read_container(&a.sk, Kind::Sk)?)?;
    let c = ct::hibe_ct_from_container(params, &read_container(&a.ct, Kind::HibeCt)?)?;
    let m = hibe_dec(params, &mpk, &sk, &c, &sk.id)?;
    write_stdout(ctx, &ct::pack_bits(&m))
}

fn cmd_det_enc<S: GroupSuite>(params: &HfParams<S>, ctx: &mut Context<'_>, a: &EncArgs) -> CliResult<()> {
    let (mpk, _) = ct::mpk_from_container(params, &read_container(&a.mpk, Kind::Mpk)?)?;
    let id = identity(params, &a.id)?;
    let input = read_stdin(ctx)?;
    let m = message_bits(&input, params.n, "message")?;
    let c = det_enc(params, &mpk, &m, &id)?;
    write_container(&a.out, &ct::det_ct_to_container(params, &c))
}

fn cmd_det_dec<S: GroupSuite>(params: &HfParams<S>, ctx: &mut Context<'_>, a: &DecArgs) -> CliResult<()> {
    let (mpk, _) = ct::mpk_from_container(params, &read_container(&a.mpk, Kind::Mpk)?)?;
    let sk = ct::sk_from_container(params, &read_container(&a.sk, Kind::Sk)?)?;
    let c = ct::det_ct_from_container(params, &read_container(&a.ct, Kind::DetCt)?)?;
    let m = det_dec(params, &mpk, &sk, &c, &sk.id)?;
    write_stdout(ctx, &ct::pack_bits(&m))
}

/// The prefixes of `id*`, a sibling at every level and, below the maximal depth, a child.
fn demo_identities<S: GroupSuite>(params: &HfParams<S>, star: &HierId<S>) -> Vec<HierId<S>> {
    let s = &params.suite;
    let mut ids: Vec<HierId<S>> = (1..=star.level()).map(|l| star.prefix(l)).collect();
    for l in 1..=star.level() {
        let mut sib = star.prefix(l);
        let last = sib.levels.last_mut().unwrap();
        last[1] = s.scalar_add(&last[1], &s.scalar_one());
        ids.push(sib);
    }
    if star.level() < params.depth {
        let mut below = vec![s.scalar_one()];
        below.resize(params.width, s.scalar_zero());
        ids.push(star.child(below));
    }
    ids
}

fn cmd_lossy_demo(suite: TransparentSuite, ctx: &mut Context<'_>, a: &LossyDemoArgs) -> CliResult<()> {
    let params = hf_setup(suite, a.d, a.n, a.mu, Mode::Selective)?;
    let s = &params.suite;
    let star = identity(&params, &a.id_star)?;
    let aux = aux_selective(s, &star, a.d, a.mu)?;
    let (mpk, _) = hf_mkg(&params, &aux, &mut ctx.rng)?;
    let mut ids = demo_identities(&params, &star);
    for text in &a.id {
        ids.push(identity(&params, text)?);
    }
    ctx.say(format!(
        "p = {}, n = {}, d = {}, μ = {}, ω = n − log₂ p = {:.4}",
        a.p,
        a.n,
        a.d,
        a.mu,
        params.omega()
    ))?;
    ctx.say(format!("id* = {}", format_identity(s, &star)))?;
    for id in &ids {
        let report = partition(s, &aux, id)?;
        let image = image_size(&params, &mpk, id)?;
        let products: Vec<String> = report
            .products
            .iter()
            .map(|x| s.scalar_to_biguint(x).to_string())
            .collect();
        ctx.say(format!(
            "{:<16} {:<10} {:<9} <y,id> = [{}]  image = {:>6}  λ = {:.4}",
            format_identity(s, id),
            if id.is_prefix_of(&star) { "prefix" } else { "non-prefix" },
            if report.is_lossy() { "lossy" } else { "injective" },
            products.join(", "),
            image,
            lossiness(a.n, image)
        ))?;
    }
    Ok(())
}

/// Sibling identities of `id*` at its last level with distinct binary tails.
fn default_siblings<S: GroupSuite>(params: &HfParams<S>, star: &HierId<S>, q: u64) -> Vec<HierId<S>> {
    let s = &params.suite;
    let tail_bits = (params.width - 1).min(20);
    let parent = star.prefix(star.level() - 1);
    let mut out = Vec::new();
    for t in 0..1u64 << tail_bits {
        if out.len() as u64 >= q {
            break;
        }
        let mut level = vec![s.scalar_one()];
        level.extend((0..params.width - 1).map(|i| {
            if i < 64 && t >> i & 1 == 1 {
                s.scalar_one()
            } else {
                s.scalar_zero()
            }
        }));
        let sib = parent.child(level);
        if sib != *star {
            out.push(sib);
        }
    }
    out
}

fn cmd_verify<S: GroupSuite>(suite: S, ctx: &mut Context<'_>, a: &VerifyArgs) -> CliResult<()> {
    let params = hf_setup(suite, a.d, 1, a.mu, Mode::Adaptive)?;
    let s = &params.suite;
    let star = match &a.id_star {
        Some(t) => identity(&params, t)?,
        None => {
            let mut level = vec![s.scalar_one()];
            level.resize(a.mu, s.scalar_zero());
            HierId::new(vec![level; a.d])
        }
    };
    let revealed = if a.revealed.is_empty() {
        default_siblings(&params, &star, a.q)
    } else {
        a.revealed
            .iter()
            .map(|t| identity(&params, t))
            .collect::<CliResult<Vec<_>>>()?
    };
    let report = verify_lemma2(s, a.q, a.mu, a.d, &revealed, &star, a.trials, &mut ctx.rng)?;
    let line = json!({
        "report": "abort-probability",
        "q": int_rational(a.q),
        "mu": int_rational(a.mu as u64),
        "d": int_rational(a.d as u64),
        "id_star": format_identity(s, &star),
        "revealed": revealed.iter().map(|id| format_identity(s, id)).collect::<Vec<_>>(),
        "trials": int_rational(report.trials),
        "hits": int_rational(report.hits),
        "empirical": format!("{}/{}", report.hits, report.trials),
        "eta_low": rational(&report.eta_low),
        "sigma": rational_f64(report.sigma),
        "exact": report.exact.as_ref().map(rational),
        "degenerate": report.degenerate,
        "holds": report.holds(),
    });
    ctx.say(line)?;
    ctx.say(json!({
        "report": "adaptive-lossiness",
        "q": int_rational(a.q),
        "mu": int_rational(a.mu as u64),
        "d": int_rational(a.d as u64),
        "eta_low": rational(&eta_lower_bound(a.q, a.mu, a.d)),
        "delta": rational(&delta_bound(a.q, a.mu, a.d)),
    }))?;
    ctx.say(json!({
        "report": "selective-lossiness",
        "delta": rational(&delta_bound_selective()),
    }))?;
    ctx.say(json!({
        "report": "scope",
        "measured": ["abort probability", "lossiness bounds"],
        "not_measured": "computational indistinguishability of real and lossy master keys",
    }))
}

fn cmd_bench<S: GroupSuite>(suite: S, ctx: &mut Context<'_>, a: &BenchArgs) -> CliResult<()> {
    let params = hf_setup(suite, a.d, a.n, a.mu, Mode::Selective)?;
    let s = &params.suite;
    let aux = aux_injective(s, a.d, a.mu);
    let mut level = vec![s.scalar_one()];
    level.resize(a.mu, s.scalar_from_u64(7));
    let id = HierId::new(vec![level.clone()]);
    let x: Vec<bool> = (0..a.n).map(|i| i % 3 == 0).collect();
    let iterations = a.iterations.max(1);
    let mut timings: Vec<(&str, f64)> = Vec::new();
    let mut time = |name: &'static str, f: &mut dyn FnMut() -> CliResult<()>| -> CliResult<()> {
        let start = Instant::now();
        for _ in 0..iterations {
            f()?;
        }
        timings.push((name, start.elapsed().as_secs_f64() * 1e3 / iterations as f64));
        Ok(())
    };
    let rng = &mut ctx.rng;
    let (mpk, msk) = hf_mkg(&params, &aux, rng)?;
    time("mkg", &mut || hf_mkg(&params, &aux, &mut *rng).map(drop).map_err(Into::into))?;
    let sk = hf_kg(&params, &msk, &id, rng)?;
    time("kg", &mut || hf_kg(&params, &msk, &id, &mut *rng).map(drop).map_err(Into::into))?;
    if a.d >= 2 {
        time("delegate", &mut || {
            hf_del(&params, &mpk, &id, &sk, &level, &mut *rng)
                .map(drop)
                .map_err(Into::into)
        })?;
    }
    let out = hf_eval(&params, &mpk, &id, &x)?;
    time("eval", &mut || hf_eval(&params, &mpk, &id, &x).map(drop).map_err(Into::into))?;
    time("invert", &mut || {
        hf_inv(&params, &mpk, &id, &sk, &out).map(drop).map_err(Into::into)
    })?;
    s.reset_pairing_count();
    hf_inv(&params, &mpk, &id, &sk, &out)?;
    let pairings = s.pairing_count();
    ctx.say(format!(
        "backend {}, d = {}, n = {}, μ = {}, {} iteration(s)",
        s.backend().name(),
        a.d,
        a.n,
        a.mu,
        iterations
    ))?;
    for (name, ms) in timings {
        ctx.say(format!("{name:<9} {ms:>12.3} ms"))?;
    }
    ctx.say(format!("pairings per inversion: {pairings}"))
}
